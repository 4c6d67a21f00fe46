// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit iff
// any line fails.  Runs the three fixture curves end to end.

#include <array>
#include <chrono>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stickel/lseries.hpp"
#include "stickel/stickelberger.hpp"

using namespace stickel;

namespace {

struct Fix {
  CurveData curve;
  std::shared_ptr<ModularSymbolSpace> space;
  RationalPeriodMap map;
  int eps = 0;
};

Fix make_fix(const char* label, int64_t a2, int64_t a3, int64_t a4, int64_t a6,
             int64_t N, int64_t rank) {
  Fix f;
  f.curve.label = label;
  f.curve.a2 = a2; f.curve.a3 = a3; f.curve.a4 = a4; f.curve.a6 = a6;
  f.curve.conductor = N;
  f.curve.rank_hint = rank;
  f.curve.validate();
  f.space = std::make_shared<ModularSymbolSpace>(N);
  f.map = cut_eigenspace(f.space, f.curve);
  f.eps = fricke_eigenvalue(f.map);
  return f;
}

int failures = 0;

void report(int num, const char* name, bool ok, const std::string& detail = "") {
  if (!ok) ++failures;
  std::printf("criterion %d (%s): %s%s%s\n", num, name, ok ? "PASS" : "FAIL",
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
}

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  auto t_start = std::chrono::steady_clock::now();
  Fix f11 = make_fix("11a1", -1, 1, -10, -20, 11, 0);
  Fix f37 = make_fix("37a1", 0, 1, -1, 0, 37, 1);
  Fix f389 = make_fix("389a1", 1, 1, -2, 0, 389, 2);
  std::array<Fix*, 3> fixtures = {&f11, &f37, &f389};

  // 1. point counts vs exhaustive enumeration, p <= 200
  {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (Fix* f : fixtures)
      for (int64_t p : primes_upto(200)) {
        ReductionInfo r = reduce_mod_p(f->curve, p);
        int64_t expect = (f->curve.conductor % p == 0) ? oracles::bad_ap(f->curve, p)
                                                       : oracles::point_count_ap(f->curve, p);
        ok &= (r.ap == expect);
      }
    ok &= (reduce_mod_p(f11.curve, 11).ap == 1);  // split at 11
    // the spec sheet lists a_37 = +1 (split); the exhaustive count gives
    // 38 = 37+1 nonsingular points, i.e. nonsplit with a_37 = -1, so the
    // oracle value is what is asserted here
    ok &= (reduce_mod_p(f37.curve, 37).ap == -1);
    ok &= secs_since(t0) < 10.0;
    report(1, "point-count oracle", ok, "a_11(E11)=+1, a_37(E37)=-1 per exhaustive count");
  }

  // 2. Hecke eigenvalue on the eigenline equals a_p for good p <= 50
  {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (Fix* f : fixtures)
      for (int64_t p : primes_upto(50)) {
        if (f->curve.conductor % p == 0) continue;
        int64_t ap = reduce_mod_p(f->curve, p).ap;
        QMat tpt = f->space->hecke_matrix(p).transpose();
        for (size_t i = 0; i < f->space->dim() && ok; ++i) {
          mpq_class acc = 0;
          for (size_t j = 0; j < f->space->dim(); ++j)
            acc += tpt.at(i, j) * f->map.dual[j];
          ok &= (acc == ap * f->map.dual[i]);
        }
      }
    ok &= secs_since(t0) < 120.0;
    report(2, "Hecke eigenvalues", ok);
  }

  // 3. augmentation-order oracle on all abelian groups of order <= 12
  {
    bool ok = true;
    std::mt19937_64 rng(20240229);
    for (const std::vector<int64_t>& orders : oracles::abelian_groups_upto_12()) {
      AbelianGroup g(orders);
      for (int trial = 0; trial < 100; ++trial) {
        GroupRingElement x(g);
        for (auto& c : x.coeff) c = (int64_t)(rng() % 11) - 5;
        ok &= (augmentation_order(x, 6) == oracles::brute_force_ord(x, 6));
      }
    }
    AbelianGroup c2({2});
    ZIdealFiltration filt(c2);
    for (int64_t n = 1; n <= 6; ++n) {
      mpz_class s = 1;
      for (int64_t k = 1; k < n; ++k) s *= 2;
      ZMat expected(2, 1);
      expected.at(0, 0) = -s;
      expected.at(1, 0) = s;
      ok &= (filt.basis(n) == hnf(std::move(expected)));
    }
    report(3, "augmentation-order oracle", ok);
  }

  // 4. vanishing bound ord >= |S_M| (hard)
  {
    bool ok = true;
    std::string detail;
    auto check = [&](Fix& f, int64_t M) {
      ThetaElement th = theta(f.curve, f.map, M);
      RelationReport r = check_vanishing_bound(th);
      ok &= r.passed();
      detail += f.curve.label + "/M=" + std::to_string(M) + ":" + th.ord->str() + " ";
    };
    for (int64_t M : {33, 55, 77, 99}) check(f11, M);
    for (int64_t M : {111, 185}) check(f37, M);
    report(4, "vanishing bound", ok,
           detail + "(E37 cases have |S_M|=0: 37 is nonsplit per criterion 1)");
  }

  // 5. norm relations with a single orientation (hard)
  {
    bool ok = true;
    for (auto [M, ell] : std::vector<std::pair<int64_t, int64_t>>{
             {5, 3}, {5, 7}, {7, 3}}) {
      RelationReport r = check_norm_coprime(f11.curve, f11.map, M, ell);
      ok &= (r.verdict == Verdict::ExactEqual);
    }
    RelationReport bad = check_norm_coprime(f11.curve, f11.map, 5, 11);
    ok &= bad.passed() && bad.orientation == "sigma_l";
    std::string orient;
    for (int64_t r = 1; r <= 2; ++r) {
      RelationReport rep = check_norm_dividing(f11.curve, f11.map, 5, 3, r);
      ok &= rep.passed();
      if (orient.empty()) orient = rep.orientation;
      ok &= (rep.orientation == orient);
    }
    report(5, "norm relations", ok,
           "bad-prime factor (a_l - sigma_l); dividing sign " + orient);
  }

  // 6. functional equation + parity (hard)
  {
    bool ok = true;
    std::string orient;
    for (int64_t M : {5, 7, 9, 13}) {
      ThetaElement th = theta(f11.curve, f11.map, M);
      RelationReport fe = check_functional_equation(th, f11.eps);
      ok &= fe.passed();
      if (fe.orientation != "both") {
        if (orient.empty()) orient = fe.orientation;
        ok &= (fe.orientation == orient);
      }
      RelationReport pa = check_parity(th, f11.eps);
      ok &= (pa.verdict != Verdict::Failed);
    }
    report(6, "functional equation + parity", ok, "orientation " + orient);
  }

  // 7. special values (tol 1e-6) and the forced central zero
  {
    auto t0 = std::chrono::steady_clock::now();
    LSeriesContext c11{&f11.curve, -f11.eps, 12};
    SpecialValueReport sv = check_special_values(c11, f11.map, {5, 7, 9, 13});
    bool ok = sv.passed && sv.max_residual < 1e-6;
    LSeriesContext c37{&f37.curve, -f37.eps, 12};
    ok &= std::abs(l_value(c37)) < 1e-8;
    ok &= secs_since(t0) < 180.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "max residual %.2e, orientation %s",
                  sv.max_residual, sv.orientation.c_str());
    report(7, "special values", ok, buf);
  }

  // 8. Mazur-Tate exploration (advisory: warn, never fail)
  {
    bool ok = true;
    std::string detail;
    for (int64_t M : {5, 7, 9, 11, 13}) {
      ThetaElement th = theta(f37.curve, f37.map, M);
      RelationReport r = check_mazur_tate(th, 1);
      detail += "E37/M=" + std::to_string(M) + ":" + th.ord->str() + " ";
      if (!r.passed()) detail += "(warn) ";
    }
    ThetaElement th389 = theta(f389.curve, f389.map, 5);
    RelationReport r389 = check_mazur_tate(th389, 2);
    detail += "E389/M=5:" + th389.ord->str();
    if (!r389.passed()) detail += " (warn)";
    report(8, "Mazur-Tate exploration (advisory)", ok, detail);
  }

  // 9. determinism of repeated verify runs, and total wall time
  {
#ifdef STICKEL_CLI_PATH
    auto capture = [&](const char* cmd) {
      std::string out;
      FILE* p = popen(cmd, "r");
      if (!p) return out;
      std::array<char, 4096> buf;
      size_t n;
      while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
      pclose(p);
      size_t nl = out.find('\n');
      if (out.rfind("# run ", 0) == 0 && nl != std::string::npos) out = out.substr(nl + 1);
      return out;
    };
    std::string cmd = std::string(STICKEL_CLI_PATH) + " verify --all --moduli 3..20 --curves " +
                      STICKEL_CURVES_PATH + " 2>&1";
    std::string a = capture(cmd.c_str());
    std::string b = capture(cmd.c_str());
    bool ok = !a.empty() && a == b;
    ok &= secs_since(t_start) < 600.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall time %.1f s", secs_since(t_start));
    report(9, "determinism + wall time", ok, buf);
#else
    report(9, "determinism + wall time", false, "CLI path not configured");
#endif
  }

  return failures > 0 ? 1 : 0;
}
