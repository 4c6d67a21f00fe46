#ifndef STICKEL_LSERIES_HPP
#define STICKEL_LSERIES_HPP

// Twisted L-values L(A, chi, 1) via the approximate functional equation,
// Gauss sums, and the special-value comparison
//   chi(Theta_{A,M}) = c * tau(chi^{-1}) * L(A, chi, 1)
// for primitive even characters chi of conductor M, with a single constant
// c shared across every modulus and character.

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "stickel/curve.hpp"
#include "stickel/groupring.hpp"
#include "stickel/stickelberger.hpp"

namespace stickel {

struct PrecisionNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPrimitive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

// Dirichlet character mod m as a value table; entry is 0 for non-units.
struct DirichletChar {
  int64_t modulus = 1;
  std::vector<cplx> table;  // size modulus (size 1 table {1} for m = 1)

  cplx operator()(int64_t n) const {
    int64_t r = mod_reduce(n, modulus);
    return table[r];
  }
  bool is_trivial_mod_one() const { return modulus == 1; }
};

// Primitive Dirichlet character underlying a character of G_M: restrict to
// the conductor f.  Each unit b mod f is hit by some unit a mod M with
// a = b (mod f); the value is well defined because chi factors through
// (Z/f)^*.
inline DirichletChar primitive_lift(const GaloisGroup& G, const CharacterValue& chi) {
  int64_t f = dirichlet_conductor(G, chi);
  DirichletChar d;
  d.modulus = f;
  d.table.assign((size_t)f, cplx(0.0, 0.0));
  if (f == 1) {
    d.table[0] = cplx(1.0, 0.0);
    return d;
  }
  for (int64_t b = 0; b < f; ++b) {
    if (std::gcd(b, f) != 1) continue;
    int64_t a = b;
    while (std::gcd(a, G.modulus) != 1) a += f;
    d.table[(size_t)b] = chi(G.element_of(a));
  }
  return d;
}

// Verify primitivity of a concrete table: chi must be nonconstant on every
// coset of the units congruent to 1 mod p for each prime p | m.
inline bool table_is_primitive(const DirichletChar& chi) {
  int64_t m = chi.modulus;
  if (m == 1) return true;
  for (int64_t p : prime_factors(m)) {
    int64_t f = m / p;
    bool factors = true;
    for (int64_t a = 1; a < m && factors; ++a)
      if (std::gcd(a, m) == 1 && a % f == 1 % f && std::abs(chi(a) - cplx(1, 0)) > 1e-9)
        factors = false;
    if (factors) return false;
  }
  return true;
}

// tau(chi) = sum_a chi(a) e^{2 pi i a / m}; |tau| = sqrt(m) when primitive.
inline cplx gauss_sum(const DirichletChar& chi) {
  if (!table_is_primitive(chi)) throw NotPrimitive("gauss_sum: character is not primitive");
  if (chi.modulus == 1) return cplx(1.0, 0.0);
  cplx s = 0;
  for (int64_t a = 0; a < chi.modulus; ++a) {
    if (chi.table[(size_t)a] == cplx(0.0, 0.0)) continue;
    s += chi.table[(size_t)a] * std::polar(1.0, 2.0 * M_PI * double(a) / double(chi.modulus));
  }
  return s;
}

struct LSeriesContext {
  const CurveData* curve = nullptr;
  int root_number = 0;       // sign w of the functional equation of L(A, s)
  int64_t digits = 10;
  std::string cache_dir;
  mutable std::vector<int64_t> an;  // 0-based a_1..a_n, grown on demand

  const std::vector<int64_t>& coefficients(int64_t n) const {
    if ((int64_t)an.size() < n) an = an_table(*curve, n, cache_dir);
    return an;
  }
};

// Truncation length: the tail of sum a_n/n e^{-2 pi n / (m sqrt N)} drops
// below 10^-digits once n exceeds about ln(10)/(2 pi) * m sqrt(N) * digits.
inline int64_t truncation_length(int64_t m, int64_t conductor, int64_t digits) {
  double kappa = std::log(10.0) / (2.0 * M_PI);
  return (int64_t)std::ceil(kappa * double(m) * std::sqrt(double(conductor)) *
                            double(digits)) + 32;
}

// L(A, chi, 1) for chi primitive mod m, gcd(m, N) = 1:
//   sum_n (a_n chi(n) / n) e^{-2 pi n/(m sqrt N)}
//   + w chi(N) (tau(chi)^2 / m) sum_n (a_n chi^bar(n) / n) e^{-2 pi n/(m sqrt N)}.
// Evaluated at truncations T and 2T; disagreement beyond 10^-digits throws.
inline cplx l_value_twisted(const LSeriesContext& ctx, const DirichletChar& chi) {
  const CurveData& e = *ctx.curve;
  int64_t m = chi.modulus;
  if (std::gcd(m, e.conductor) != 1)
    throw HypothesisViolated("l_value_twisted: conductor of twist must be prime to N");
  cplx tau = gauss_sum(chi);  // also validates primitivity
  cplx w_chi = double(ctx.root_number) * chi(e.conductor) * tau * tau / double(m);

  int64_t T = truncation_length(m, e.conductor, ctx.digits);
  const std::vector<int64_t>& an = ctx.coefficients(2 * T);
  double x = 2.0 * M_PI / (double(m) * std::sqrt(double(e.conductor)));

  auto partial = [&](int64_t nmax) {
    cplx s1 = 0, s2 = 0;
    for (int64_t n = 1; n <= nmax; ++n) {
      if (an[(size_t)(n - 1)] == 0) continue;
      cplx cv = chi(n);
      if (cv == cplx(0.0, 0.0)) continue;
      double t = double(an[(size_t)(n - 1)]) / double(n) * std::exp(-x * double(n));
      s1 += t * cv;
      s2 += t * std::conj(cv);
    }
    return s1 + w_chi * s2;
  };
  cplx vT = partial(T), v2T = partial(2 * T);
  if (std::abs(vT - v2T) > std::pow(10.0, -double(ctx.digits)))
    throw PrecisionNotReached("l_value_twisted: truncations at T and 2T disagree");
  return v2T;
}

inline double l_value(const LSeriesContext& ctx) {
  DirichletChar triv;
  triv.modulus = 1;
  triv.table = {cplx(1.0, 0.0)};
  return l_value_twisted(ctx, triv).real();
}

// ---------------------------------------------------------------------------
// Special-value comparison
// ---------------------------------------------------------------------------

struct SpecialValueRow {
  int64_t modulus = 0;
  std::string char_id;     // exponents of chi on the group generators
  cplx a_chi;              // chi(Theta) (possibly conjugated, per orientation)
  cplx b_chi;              // tau(chi^-1) L(A, chi, 1)
  double residual = 0;     // |a - c b| / max(1, |b|)
};

struct SpecialValueReport {
  std::vector<SpecialValueRow> rows;
  cplx c = 0;              // fitted constant, shared across all rows
  std::string orientation; // "chi" or "chi-conjugate" pairing of chi(Theta)
  double max_residual = 0;
  double tolerance = 1e-6;
  bool passed = false;

  std::string csv() const {
    std::ostringstream os;
    os << "M;char_id;A_chi;B_chi;residual\n";
    for (const auto& r : rows) {
      os << r.modulus << ";" << r.char_id << ";"
         << r.a_chi.real() << (r.a_chi.imag() < 0 ? "" : "+") << r.a_chi.imag() << "i;"
         << r.b_chi.real() << (r.b_chi.imag() < 0 ? "" : "+") << r.b_chi.imag() << "i;"
         << r.residual << "\n";
    }
    return os.str();
  }
};

// Characters of G_M of conductor exactly M give chi(Theta_{A,M}) directly;
// imprimitive ones are covered by the norm relations and are skipped.
// One constant c is fitted on the row with the largest |B_chi| and every
// other row must match it to the tolerance.  The identity pairs B_chi with
// either chi(Theta) or chi^bar(Theta) depending on the Frobenius convention;
// both pairings are tried and the surviving one is recorded.
inline SpecialValueReport check_special_values(const LSeriesContext& ctx,
                                               const RationalPeriodMap& map,
                                               const std::vector<int64_t>& moduli,
                                               double tolerance = 1e-6) {
  struct Pair {
    int64_t M;
    std::string id;
    cplx a_plain, a_conj, b;
  };
  std::vector<Pair> pairs;
  for (int64_t M : moduli) {
    ThetaElement th = theta(*ctx.curve, map, M);
    for (const CharacterValue& chi : characters(th.galois.group)) {
      if (chi.is_trivial()) continue;
      if (dirichlet_conductor(th.galois, chi) != M) continue;
      DirichletChar prim = primitive_lift(th.galois, chi);
      cplx tau_inv = gauss_sum(primitive_lift(th.galois, chi.conjugate()));
      cplx lv = l_value_twisted(ctx, prim);
      Pair p;
      p.M = M;
      std::ostringstream id;
      for (size_t i = 0; i < chi.gen_images.size(); ++i)
        id << (i ? "," : "") << chi.gen_images[i];
      p.id = id.str();
      p.a_plain = evaluate(chi, th.elt);
      p.a_conj = evaluate(chi.conjugate(), th.elt);
      p.b = tau_inv * lv;
      pairs.push_back(std::move(p));
    }
  }

  auto run_variant = [&](int variant) {
    SpecialValueReport rep;
    rep.tolerance = tolerance;
    rep.orientation = variant ? "chi-conjugate" : "chi";
    size_t ref = 0;
    for (size_t i = 0; i < pairs.size(); ++i)
      if (std::abs(pairs[i].b) > std::abs(pairs[ref].b)) ref = i;
    if (!pairs.empty() && std::abs(pairs[ref].b) > 1e-12) {
      const cplx& aref = variant ? pairs[ref].a_conj : pairs[ref].a_plain;
      rep.c = aref / pairs[ref].b;
    }
    rep.max_residual = 0;
    for (const Pair& p : pairs) {
      SpecialValueRow row;
      row.modulus = p.M;
      row.char_id = p.id;
      row.a_chi = variant ? p.a_conj : p.a_plain;
      row.b_chi = p.b;
      row.residual = std::abs(row.a_chi - rep.c * row.b_chi) /
                     std::max(1.0, std::abs(row.b_chi));
      rep.max_residual = std::max(rep.max_residual, row.residual);
      rep.rows.push_back(std::move(row));
    }
    rep.passed = !pairs.empty() && rep.max_residual <= tolerance;
    return rep;
  };
  SpecialValueReport first = run_variant(0);
  if (first.passed) return first;
  SpecialValueReport second = run_variant(1);
  if (second.passed) return second;
  return (first.max_residual <= second.max_residual) ? first : second;
}

}  // namespace stickel

#endif
