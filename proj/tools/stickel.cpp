// stickel: compute Stickelberger elements of elliptic curves, their order of
// vanishing in the augmentation filtration, and run the relation battery
// (norm relations, functional equation, parity, special values).
//
// Exit code is nonzero iff a hard check fails.  Output is deterministic;
// the text format carries a single ignorable `# run ...` timestamp header.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <ctime>
#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "stickel/curve.hpp"
#include "stickel/groupring.hpp"
#include "stickel/lseries.hpp"
#include "stickel/maninsym.hpp"
#include "stickel/periodmap.hpp"
#include "stickel/stickelberger.hpp"

using nlohmann::json;
using namespace stickel;

namespace {

struct Options {
  std::string curves_file = "data/curves.txt";
  std::string curve_label;
  int64_t modulus = 0;
  std::string moduli_range;  // "A..B"
  int64_t rmax = 20;
  int64_t digits = 12;
  std::string cache_dir;
  std::string format = "text";
  std::vector<std::string> checks = {"theta", "ord", "norm", "funceq", "parity", "mazur-tate"};
  bool all_curves = false;
};

std::string cache_dir_resolved(const Options& o) {
  if (!o.cache_dir.empty()) return o.cache_dir;
  const char* env = std::getenv("STICKEL_CACHE");
  return env ? env : "";
}

std::vector<int64_t> moduli_list(const Options& o) {
  std::vector<int64_t> out;
  if (o.modulus != 0) {
    out.push_back(o.modulus);
  } else if (!o.moduli_range.empty()) {
    size_t dots = o.moduli_range.find("..");
    if (dots == std::string::npos)
      throw CLI::ValidationError("--moduli", "expected A..B");
    int64_t a = std::stoll(o.moduli_range.substr(0, dots));
    int64_t b = std::stoll(o.moduli_range.substr(dots + 2));
    for (int64_t m = a; m <= b; ++m) out.push_back(m);
  }
  for (int64_t m : out)
    if (m < 3) throw CLI::ValidationError("--modulus", "moduli must be >= 3");
  return out;
}

// Curve fixtures plus the per-curve symbol space and eigenline, built once.
struct CurvePack {
  CurveData curve;
  std::shared_ptr<ModularSymbolSpace> space;
  RationalPeriodMap map;
  int eps_n = 0;
};

std::map<std::string, CurveData> load_curves(const Options& o) {
  std::map<std::string, CurveData> out;
  for (CurveData& e : parse_curve_file(o.curves_file)) out.emplace(e.label, std::move(e));
  return out;
}

std::vector<CurveData> select_curves(const Options& o) {
  std::map<std::string, CurveData> all = load_curves(o);
  std::vector<CurveData> out;
  if (!o.curve_label.empty()) {
    auto it = all.find(o.curve_label);
    if (it == all.end())
      throw CLI::ValidationError("--curve", "no curve labelled " + o.curve_label +
                                                " in " + o.curves_file);
    out.push_back(it->second);
  } else {
    for (auto& [label, e] : all) out.push_back(e);
  }
  return out;
}

CurvePack build_pack(const CurveData& e) {
  CurvePack p;
  p.curve = e;
  p.space = std::make_shared<ModularSymbolSpace>(e.conductor);
  p.map = cut_eigenspace(p.space, e);
  p.eps_n = fricke_eigenvalue(p.map);
  return p;
}

json report_json(const RelationReport& r) {
  json j;
  j["name"] = r.name;
  j["verdict"] = to_string(r.verdict);
  j["hard"] = r.hard;
  if (!r.orientation.empty()) j["orientation"] = r.orientation;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    char stamp[64];
    std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::cout << "# run " << stamp << "\n" << text;
  }
}

bool wants(const Options& o, const std::string& c) {
  return std::find(o.checks.begin(), o.checks.end(), c) != o.checks.end();
}

// Relation battery for one (curve, M).  Norm relations use the two smallest
// primes not dividing M (coprime form) and the smallest (dividing form);
// functional equation and parity require gcd(M, N) = 1.
std::vector<RelationReport> run_battery(const Options& o, CurvePack& p, int64_t M,
                                        ThetaElement& th) {
  std::vector<RelationReport> reps;
  int64_t N = p.curve.conductor;
  if (wants(o, "ord")) reps.push_back(check_vanishing_bound(th, o.rmax));
  if (wants(o, "mazur-tate") && p.curve.rank_hint)
    reps.push_back(check_mazur_tate(th, *p.curve.rank_hint, o.rmax));
  if (wants(o, "norm")) {
    int coprime_done = 0;
    for (int64_t ell = 2; coprime_done < 2 && ell <= 13; ++ell) {
      if (!is_prime(ell) || M % ell == 0) continue;
      if (N % ell == 0 && valuation(N, ell) > 1) continue;
      reps.push_back(check_norm_coprime(p.curve, p.map, M, ell));
      ++coprime_done;
    }
    for (int64_t ell = 2; ell <= 13; ++ell) {
      if (!is_prime(ell) || M % ell == 0) continue;
      if (N % ell == 0 && valuation(N, ell) > 1) continue;
      reps.push_back(check_norm_dividing(p.curve, p.map, M, ell, 1));
      break;
    }
  }
  if (std::gcd(M, N) == 1) {
    if (wants(o, "funceq")) reps.push_back(check_functional_equation(th, p.eps_n));
    if (wants(o, "parity")) reps.push_back(check_parity(th, p.eps_n, o.rmax));
  }
  return reps;
}

int cmd_theta(const Options& o) {
  std::vector<int64_t> ms = moduli_list(o);
  if (ms.empty()) throw CLI::ValidationError("--modulus", "theta needs a modulus");
  json jout = json::array();
  std::string text;
  for (const CurveData& e : select_curves(o)) {
    CurvePack p = build_pack(e);
    for (int64_t M : ms) {
      ThetaElement th = theta(p.curve, p.map, M);
      std::string d = dump(th.galois, th.elt);
      json j;
      j["curve"] = e.label;
      j["modulus"] = M;
      j["coefficients"] = d;
      j["normalization"] = th.normalization_id;
      jout.push_back(j);
      text += e.label + ": " + d + "\n";
    }
  }
  emit(o, jout, text);
  return 0;
}

int cmd_ord(const Options& o) {
  std::vector<int64_t> ms = moduli_list(o);
  if (ms.empty()) throw CLI::ValidationError("--modulus", "ord needs a modulus");
  json jout = json::array();
  std::string text;
  bool hard_fail = false;
  for (const CurveData& e : select_curves(o)) {
    CurvePack p = build_pack(e);
    for (int64_t M : ms) {
      ThetaElement th = theta(p.curve, p.map, M);
      RelationReport r = check_vanishing_bound(th, o.rmax);
      hard_fail |= !r.passed();
      json j;
      j["curve"] = e.label;
      j["modulus"] = M;
      j["ord"] = th.ord->str();
      j["s_m_size"] = th.s_m.size();
      j["verdict"] = to_string(r.verdict);
      jout.push_back(j);
      text += e.label + " M=" + std::to_string(M) + " ord>=" +
              std::to_string(th.s_m.size()) + ": " + (r.passed() ? "PASS" : "FAIL") +
              " (|S_M|=" + std::to_string(th.s_m.size()) + ", " + th.ord->str() + ")\n";
    }
  }
  emit(o, jout, text);
  return hard_fail ? 1 : 0;
}

int cmd_verify(const Options& o) {
  std::vector<int64_t> ms = moduli_list(o);
  if (ms.empty()) throw CLI::ValidationError("--moduli", "verify needs moduli");
  json jout = json::array();
  std::string text;
  bool hard_fail = false;
  for (const CurveData& e : select_curves(o)) {
    CurvePack p = build_pack(e);
    for (int64_t M : ms) {
      ThetaElement th = theta(p.curve, p.map, M);
      json j;
      j["curve"] = e.label;
      j["modulus"] = M;
      j["coefficients"] = dump(th.galois, th.elt);
      j["s_m_size"] = th.s_m.size();
      json checks = json::array();
      for (RelationReport& r : run_battery(o, p, M, th)) {
        checks.push_back(report_json(r));
        bool ok = r.passed();
        if (r.hard && !ok) hard_fail = true;
        text += e.label + " M=" + std::to_string(M) + " " + r.name + ": " +
                (ok ? (r.hard ? "PASS" : "pass") : (r.hard ? "FAIL" : "warn")) +
                " [" + to_string(r.verdict) +
                (r.orientation.empty() ? "" : ", " + r.orientation) +
                (r.detail.empty() ? "" : ", " + r.detail) + "]\n";
      }
      if (th.ord) j["ord"] = th.ord->str();
      j["checks"] = checks;
      jout.push_back(j);
    }
  }
  emit(o, jout, text);
  return hard_fail ? 1 : 0;
}

int cmd_special(const Options& o) {
  std::vector<int64_t> ms = moduli_list(o);
  if (ms.empty()) throw CLI::ValidationError("--moduli", "special needs moduli");
  bool fail = false;
  json jout = json::array();
  std::string text;
  for (const CurveData& e : select_curves(o)) {
    CurvePack p = build_pack(e);
    LSeriesContext ctx{&p.curve, -p.eps_n, o.digits, cache_dir_resolved(o)};
    std::vector<int64_t> usable;
    for (int64_t M : ms)
      if (std::gcd(M, e.conductor) == 1) usable.push_back(M);
    SpecialValueReport rep = check_special_values(ctx, p.map, usable);
    fail |= !rep.passed;
    json j;
    j["curve"] = e.label;
    j["orientation"] = rep.orientation;
    j["c"] = {rep.c.real(), rep.c.imag()};
    j["max_residual"] = rep.max_residual;
    j["tolerance"] = rep.tolerance;
    j["passed"] = rep.passed;
    jout.push_back(j);
    if (o.format == "csv") {
      std::cout << rep.csv();
      continue;
    }
    text += e.label + ": " + (rep.passed ? "PASS" : "FAIL") + " orientation=" +
            rep.orientation + " max_residual=" + std::to_string(rep.max_residual) + "\n" +
            rep.csv();
  }
  if (o.format != "csv") emit(o, jout, text);
  return fail ? 1 : 0;
}

int cmd_lvalue(const Options& o) {
  json jout = json::array();
  std::string text;
  for (const CurveData& e : select_curves(o)) {
    CurvePack p = build_pack(e);
    LSeriesContext ctx{&p.curve, -p.eps_n, o.digits, cache_dir_resolved(o)};
    double lv = l_value(ctx);
    json j;
    j["curve"] = e.label;
    j["root_number"] = ctx.root_number;
    j["l_value"] = lv;
    jout.push_back(j);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", (int)o.digits, lv);
    text += e.label + ": w=" + std::to_string(ctx.root_number) + " L(A,1)=" + buf + "\n";
  }
  emit(o, jout, text);
  return 0;
}

int cmd_dump_space(const Options& o) {
  json jout = json::array();
  std::string text;
  for (const CurveData& e : select_curves(o)) {
    CurvePack p = build_pack(e);
    json j;
    j["curve"] = e.label;
    j["level"] = p.space->level();
    j["p1_size"] = p.space->num_generators();
    j["dim"] = p.space->dim();
    j["plus_dim"] = p.space->plus_dim();
    j["fricke_eigenvalue"] = p.eps_n;
    j["generator_values"] = dump_generator_values(p.map);
    jout.push_back(j);
    text += e.label + ": level=" + std::to_string(p.space->level()) +
            " dim=" + std::to_string(p.space->dim()) +
            " plus_dim=" + std::to_string(p.space->plus_dim()) +
            " eps_N=" + std::to_string(p.eps_n) + "\n" + dump_generator_values(p.map);
  }
  emit(o, jout, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stickelberger elements of elliptic curves: computation and verification"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--curves", o.curves_file, "curve fixture file");
    sub->add_option("--curve", o.curve_label, "curve label to select");
    sub->add_option("--modulus", o.modulus, "single modulus M >= 3");
    sub->add_option("--moduli", o.moduli_range, "modulus range A..B");
    sub->add_option("--rmax", o.rmax, "augmentation filtration depth cap");
    sub->add_option("--digits", o.digits, "L-value precision in decimal digits");
    sub->add_option("--cache", o.cache_dir, "a_p cache directory");
    sub->add_option("--format", o.format, "output format: json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    return sub;
  };
  CLI::App* s_theta = add_common(app.add_subcommand("theta", "print Theta coefficients"));
  CLI::App* s_ord = add_common(app.add_subcommand("ord", "order of vanishing vs |S_M|"));
  CLI::App* s_verify = add_common(app.add_subcommand("verify", "full relation battery"));
  s_verify->add_flag("--all", o.all_curves, "run on every curve in the fixture file");
  s_verify->add_option("--checks", o.checks, "subset of checks to run")
      ->check(CLI::IsMember({"theta", "ord", "norm", "funceq", "parity", "special",
                             "mazur-tate"}));
  CLI::App* s_special = add_common(app.add_subcommand("special", "special value table"));
  CLI::App* s_lvalue = add_common(app.add_subcommand("lvalue", "central L-value"));
  CLI::App* s_dump = add_common(app.add_subcommand("dump-space", "symbol space summary"));

  CLI11_PARSE(app, argc, argv);
  try {
    if (s_theta->parsed()) return cmd_theta(o);
    if (s_ord->parsed()) return cmd_ord(o);
    if (s_verify->parsed()) return cmd_verify(o);
    if (s_special->parsed()) return cmd_special(o);
    if (s_lvalue->parsed()) return cmd_lvalue(o);
    if (s_dump->parsed()) return cmd_dump_space(o);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
