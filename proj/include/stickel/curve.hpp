#ifndef STICKEL_CURVE_HPP
#define STICKEL_CURVE_HPP

// Elliptic curves over Q: Weierstrass data, reduction types at primes and
// Fourier coefficient tables a_n built from point counts.
//
// The conductor is input data, not computed here; reduce_mod_p classifies
// the reduction at each prime independently and cross-checks the claimed
// conductor valuation, so a wrong conductor in a fixture file is caught
// loudly instead of silently poisoning downstream results.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stickel/arith.hpp"

namespace stickel {

struct InconsistentConductor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DiscriminantZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CurveData {
  mpz_class a1, a2, a3, a4, a6;
  int64_t conductor = 0;
  std::optional<int64_t> rank_hint;
  std::string label;

  mpz_class discriminant() const {
    mpz_class b2 = a1 * a1 + 4 * a2;
    mpz_class b4 = 2 * a4 + a1 * a3;
    mpz_class b6 = a3 * a3 + 4 * a6;
    mpz_class b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  }

  void validate() const {
    if (discriminant() == 0)
      throw DiscriminantZero("curve " + label + ": discriminant is zero");
    if (conductor < 11)
      throw std::invalid_argument("curve " + label + ": conductor must be >= 11");
  }
};

enum class ReductionKind { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::Good: return "good";
    case ReductionKind::SplitMultiplicative: return "split";
    case ReductionKind::NonsplitMultiplicative: return "nonsplit";
    case ReductionKind::Additive: return "additive";
  }
  return "?";
}

struct ReductionInfo {
  int64_t prime = 0;
  ReductionKind kind = ReductionKind::Good;
  int64_t ap = 0;
};

namespace detail {

// Number of affine points of  y^2 + A y = B  over F_p (A, B reduced mod p).
inline int64_t quadric_solutions(int64_t A, int64_t B, int64_t p) {
  if (p == 2) {
    int64_t n = 0;
    for (int64_t y = 0; y < 2; ++y)
      if (mod_reduce(y * y + A * y - B, 2) == 0) ++n;
    return n;
  }
  // complete the square: (2y + A)^2 = A^2 + 4B
  return 1 + legendre(mul_mod(A, A, p) + 4 * mod_reduce(B, p), p);
}

}  // namespace detail

// Reduction data at p by counting points of the reduction mod p.
// Good p:  ap = p + 1 - #E(F_p);  bad p:  ap = p - #E_ns(F_p).
inline ReductionInfo reduce_mod_p(const CurveData& e, int64_t p, int64_t p_bound = 1000000) {
  if (!is_prime(p)) throw std::invalid_argument("reduce_mod_p: p must be prime");
  if (p > p_bound) throw std::invalid_argument("reduce_mod_p: p exceeds configured bound");

  const int64_t a1 = mod_reduce(mpz_class(e.a1 % p).get_si(), p),
                a2 = mod_reduce(mpz_class(e.a2 % p).get_si(), p),
                a3 = mod_reduce(mpz_class(e.a3 % p).get_si(), p),
                a4 = mod_reduce(mpz_class(e.a4 % p).get_si(), p),
                a6 = mod_reduce(mpz_class(e.a6 % p).get_si(), p);
  const bool singular = mpz_divisible_ui_p(e.discriminant().get_mpz_t(),
                                           static_cast<unsigned long>(p));

  int64_t affine = 0;
  int64_t singular_on_curve = 0;
  if (p == 2 || p == 3) {
    for (int64_t x = 0; x < p; ++x)
      for (int64_t y = 0; y < p; ++y) {
        int64_t F = mod_reduce(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6, p);
        if (F != 0) continue;
        ++affine;
        if (singular) {
          int64_t Fy = mod_reduce(2 * y + a1 * x + a3, p);
          int64_t Fx = mod_reduce(a1 * y - 3 * x * x - 2 * a2 * x - a4, p);
          if (Fx == 0 && Fy == 0) ++singular_on_curve;
        }
      }
  } else {
    for (int64_t x = 0; x < p; ++x) {
      int64_t A = mod_reduce(a1 * x + a3, p);
      int64_t B = mod_reduce(mul_mod(mul_mod(x, x, p) + a2 * x % p + a4, x, p) + a6, p);
      affine += detail::quadric_solutions(A, B, p);
      if (singular) {
        // a singular point has 2y + a1 x + a3 = 0
        int64_t y = mul_mod(mod_reduce(-A, p), inv_mod(2, p), p);
        int64_t F = mod_reduce(mul_mod(y, y, p) + mul_mod(A, y, p) - B, p);
        int64_t Fx = mod_reduce(a1 * y % p - (3 * mul_mod(x, x, p) + 2 * a2 * x % p + a4), p);
        if (F == 0 && Fx == 0) ++singular_on_curve;
      }
    }
  }

  ReductionInfo info;
  info.prime = p;
  int64_t vp = (e.conductor % p == 0) ? valuation(e.conductor, p) : 0;
  if (!singular) {
    info.kind = ReductionKind::Good;
    info.ap = p + 1 - (affine + 1);
    if (info.ap * info.ap > 4 * p)
      throw std::runtime_error("reduce_mod_p: Hasse bound violated (bug)");
    if (vp != 0)
      throw InconsistentConductor("curve " + e.label + ": good reduction at " +
                                  std::to_string(p) + " but p | N");
  } else {
    if (singular_on_curve != 1)
      throw std::runtime_error("reduce_mod_p: expected exactly one singular point");
    int64_t ns = (affine - 1) + 1;  // drop the singular point, keep infinity
    info.ap = p - ns;
    switch (info.ap) {
      case 1: info.kind = ReductionKind::SplitMultiplicative; break;
      case -1: info.kind = ReductionKind::NonsplitMultiplicative; break;
      case 0: info.kind = ReductionKind::Additive; break;
      default:
        throw std::runtime_error("reduce_mod_p: impossible nonsingular count");
    }
    bool mult = info.kind != ReductionKind::Additive;
    if ((mult && vp != 1) || (!mult && vp < 2))
      throw InconsistentConductor("curve " + e.label + ": reduction type at " +
                                  std::to_string(p) + " contradicts v_p(N)=" + std::to_string(vp));
  }
  return info;
}

// ---------------------------------------------------------------------------
// a_p table with an optional disk cache.
//
// Cache format (text, one file per curve): a magic+version line
//   STKAP1 <a1> <a2> <a3> <a4> <a6> <N> <p_max>
// followed by `p ap` lines.  Writers go through a temp file + rename so a
// concurrent reader never sees a torn file.
// ---------------------------------------------------------------------------

inline std::string curve_cache_stem(const CurveData& e) {
  std::ostringstream os;
  os << "ap_" << e.a1 << "_" << e.a2 << "_" << e.a3 << "_" << e.a4 << "_" << e.a6
     << "_" << e.conductor;
  std::string s = os.str();
  for (char& c : s)
    if (c == '-') c = 'm';
  return s;
}

inline std::map<int64_t, int64_t> ap_table(const CurveData& e, int64_t p_max,
                                           const std::string& cache_dir = "") {
  if (p_max < 2) throw std::invalid_argument("ap_table: p_max must be >= 2");
  namespace fs = std::filesystem;
  fs::path cache_file;
  if (!cache_dir.empty()) {
    cache_file = fs::path(cache_dir) / (curve_cache_stem(e) + ".txt");
    std::ifstream in(cache_file);
    if (in) {
      std::string magic;
      mpz_class b1, b2, b3, b4, b6;
      int64_t n, cached_pmax;
      in >> magic >> b1 >> b2 >> b3 >> b4 >> b6 >> n >> cached_pmax;
      if (in && magic == "STKAP1" && b1 == e.a1 && b2 == e.a2 && b3 == e.a3 &&
          b4 == e.a4 && b6 == e.a6 && n == e.conductor && cached_pmax >= p_max) {
        std::map<int64_t, int64_t> table;
        int64_t p, ap;
        while (in >> p >> ap)
          if (p <= p_max) table[p] = ap;
        return table;
      }
    }
  }
  std::map<int64_t, int64_t> table;
  for (int64_t p : primes_upto(p_max)) table[p] = reduce_mod_p(e, p).ap;
  if (!cache_file.empty()) {
    fs::create_directories(cache_file.parent_path());
    fs::path tmp = cache_file;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << "STKAP1 " << e.a1 << " " << e.a2 << " " << e.a3 << " " << e.a4 << " "
          << e.a6 << " " << e.conductor << " " << p_max << "\n";
      for (auto& [p, ap] : table) out << p << " " << ap << "\n";
    }
    fs::rename(tmp, cache_file);
  }
  return table;
}

// a_1..a_{n_max} from the Euler product:
//   a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}}   (good p)
//   a_{p^k}     = a_p^k                          (p | N)
// and multiplicativity across coprime factors.
inline std::vector<int64_t> an_table(const CurveData& e, int64_t n_max,
                                     const std::string& cache_dir = "") {
  if (n_max < 1) throw std::invalid_argument("an_table: n_max must be >= 1");
  std::map<int64_t, int64_t> ap = ap_table(e, n_max, cache_dir);
  std::vector<int64_t> a(static_cast<size_t>(n_max) + 1, 0);
  a[1] = 1;
  for (int64_t n = 2; n <= n_max; ++n) {
    int64_t p = 2;
    while (n % p != 0) ++p;
    int64_t pk = p;
    while ((n / pk) % p == 0) pk *= p;
    if (pk < n) {
      a[n] = a[pk] * a[n / pk];
      continue;
    }
    // n = p^k
    int64_t k = valuation(n, p);
    if (e.conductor % p == 0) {
      a[n] = (k == 1) ? ap[p] : ap[p] * a[n / p];
    } else {
      a[n] = (k == 1) ? ap[p] : ap[p] * a[n / p] - p * a[n / (p * p)];
    }
  }
  a.erase(a.begin());  // 1-based -> a[0] = a_1
  return a;
}

// Fixture file: one curve per line, `label;a1,a2,a3,a4,a6;N;rank`,
// rank `?` for unknown.  `#` starts a comment.
inline std::vector<CurveData> parse_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open curve file: " + path);
  std::vector<CurveData> curves;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line.substr(0, line.find('#'));
    if (trimmed.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(trimmed);
    std::string label, coeffs, nstr, rankstr;
    if (!std::getline(ls, label, ';') || !std::getline(ls, coeffs, ';') ||
        !std::getline(ls, nstr, ';') || !std::getline(ls, rankstr))
      throw ParseError(path + ":" + std::to_string(lineno) + ": malformed line");
    CurveData e;
    e.label = label;
    std::istringstream cs(coeffs);
    std::string tok;
    std::vector<mpz_class> c;
    while (std::getline(cs, tok, ',')) c.emplace_back(tok);
    if (c.size() != 5)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 5 coefficients");
    e.a1 = c[0]; e.a2 = c[1]; e.a3 = c[2]; e.a4 = c[3]; e.a6 = c[4];
    try {
      e.conductor = std::stoll(nstr);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad conductor");
    }
    rankstr.erase(rankstr.find_last_not_of(" \t\r\n") + 1);
    if (rankstr != "?") e.rank_hint = std::stoll(rankstr);
    e.validate();
    curves.push_back(std::move(e));
  }
  return curves;
}

}  // namespace stickel

#endif
