#ifndef STICKEL_MANINSYM_HPP
#define STICKEL_MANINSYM_HPP

// Modular symbols for Gamma_0(N) via Manin symbols.
//
// The space is the quotient of the free Q-module on P^1(Z/N) by the
// two-term (S) and three-term (T) relations.  The Hecke action T_n is
// realized by Merel's finite family of integer matrices
//     { (a b; c d) : ad - bc = n, a > b >= 0, d > c >= 0 },
// acting on a Manin symbol on the right, with images that leave P^1(Z/N)
// discarded.  The family is validated by the commutativity,
// star-commutation and eigenvalue tests in the suite.
//
// Paths between cusps are converted to Manin symbol sums through
// continued-fraction convergents (Manin's trick); the Fricke involution
// W_N is computed by pushing the two endpoints of each generator's path
// through z -> -1/(Nz) and converting back.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stickel/arith.hpp"
#include "stickel/linalg.hpp"

namespace stickel {

struct NotProjectivePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EigenspaceNotRankOne : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EigenspaceEmpty : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotEigenvector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ManinSymbol {
  int64_t level = 0;
  int64_t c = 0, d = 0;  // canonical P^1(Z/N) representative
  bool operator==(const ManinSymbol& o) const {
    return level == o.level && c == o.c && d == o.d;
  }
};

// Canonical representatives of P^1(Z/N): the lexicographically smallest
// pair in the orbit of (c,d) under scaling by units mod N.
class P1Table {
 public:
  explicit P1Table(int64_t N) : N_(N), index_(N * N, -1) {
    std::vector<int64_t> units;
    for (int64_t u = 1; u < N; ++u)
      if (std::gcd(u, N) == 1) units.push_back(u);
    for (int64_t c = 0; c < N; ++c)
      for (int64_t d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1) continue;
        if (index_[c * N + d] >= 0) continue;
        int32_t idx = (int32_t)reps_.size();
        reps_.push_back({c, d});
        for (int64_t u : units) index_[(u * c % N) * N + u * d % N] = idx;
      }
  }

  int64_t level() const { return N_; }
  size_t size() const { return reps_.size(); }
  const std::pair<int64_t, int64_t>& rep(size_t i) const { return reps_[i]; }

  // index of (c:d); -1 when gcd(c,d,N) > 1
  int64_t index(int64_t c, int64_t d) const {
    return index_[mod_reduce(c, N_) * N_ + mod_reduce(d, N_)];
  }

  int64_t index_checked(int64_t c, int64_t d) const {
    int64_t i = index(c, d);
    if (i < 0)
      throw NotProjectivePoint("(" + std::to_string(c) + ":" + std::to_string(d) +
                               ") is not a point of P^1(Z/" + std::to_string(N_) + ")");
    return i;
  }

 private:
  int64_t N_;
  std::vector<std::pair<int64_t, int64_t>> reps_;
  std::vector<int32_t> index_;
};

inline ManinSymbol p1_normalize(int64_t N, int64_t c, int64_t d) {
  P1Table table(N);
  int64_t i = table.index_checked(c, d);
  return {N, table.rep(i).first, table.rep(i).second};
}

// Merel's matrix family for T_n.
inline std::vector<std::array<int64_t, 4>> merel_family(int64_t n) {
  std::vector<std::array<int64_t, 4>> fam;
  for (int64_t a = 1; a <= n; ++a)
    for (int64_t d = 1; d <= n; ++d) {
      int64_t bc = a * d - n;
      if (bc < 0) continue;
      if (bc == 0) {
        for (int64_t c = 0; c < d; ++c) fam.push_back({a, 0, c, d});
        for (int64_t b = 1; b < a; ++b) fam.push_back({a, b, 0, d});
        continue;
      }
      for (int64_t b = 1; b < a; ++b) {
        if (bc % b != 0) continue;
        int64_t c = bc / b;
        if (c < d) fam.push_back({a, b, c, d});
      }
    }
  return fam;
}

// A cusp: rational p/q in lowest terms, q >= 0; q = 0 means infinity.
struct Cusp {
  mpz_class p = 1, q = 0;
  static Cusp infinity() { return {}; }
  static Cusp of(mpz_class num, mpz_class den) {
    if (den < 0) { num = -num; den = -den; }
    mpz_class g = gcd(num, den);
    if (g == 0) throw std::invalid_argument("Cusp: 0/0");
    return {num / g, den / g};
  }
  bool is_infinity() const { return q == 0; }
};

class ModularSymbolSpace {
 public:
  explicit ModularSymbolSpace(int64_t N) : N_(N), p1_(N) {
    if (N < 1) throw std::invalid_argument("ModularSymbolSpace: level must be >= 1");
    build_quotient();
    build_star();
  }

  int64_t level() const { return N_; }
  const P1Table& p1() const { return p1_; }
  size_t num_generators() const { return p1_.size(); }
  size_t dim() const { return dim_; }
  const QMat& star_matrix() const { return star_; }
  const QMat& coords() const { return coords_; }
  const std::vector<size_t>& basis_generators() const { return basis_gen_; }

  // coordinates of generator i in the quotient basis
  std::vector<mpq_class> gen_coords(size_t i) const {
    std::vector<mpq_class> v(dim_);
    for (size_t j = 0; j < dim_; ++j) v[j] = coords_.at(i, j);
    return v;
  }

  size_t plus_dim() const {
    QMat m = star_;
    for (size_t i = 0; i < dim_; ++i) m.at(i, i) -= 1;
    return dim_ - rank(m);
  }

  // Matrix of T_n on the quotient.
  QMat hecke_matrix(int64_t n) const {
    QMat t(dim_, dim_);
    std::vector<std::array<int64_t, 4>> fam = merel_family(n);
    for (size_t bi = 0; bi < dim_; ++bi) {
      auto [c, d] = p1_.rep(basis_gen_[bi]);
      for (const auto& m : fam) {
        // right action: (c,d) * (a b; c' d') = (c a + d c', c b + d d')
        int64_t gi = p1_.index(c * m[0] + d * m[2], c * m[1] + d * m[3]);
        if (gi < 0) continue;
        for (size_t j = 0; j < dim_; ++j) t.at(j, bi) += coords_.at(gi, j);
      }
    }
    return t;
  }

  // Manin generators of {oo -> a/b}, one per continued-fraction convergent,
  // each entering with coefficient +1 (the sign convention is carried by
  // the symbol itself).  b must be nonzero.
  std::vector<int64_t> infinity_path_generators(const mpz_class& a, const mpz_class& b) const {
    assert(b != 0);
    std::vector<int64_t> out;
    mpz_class p_prev = 1, q_prev = 0;  // convergent p_{-1}/q_{-1} = oo
    mpz_class p_cur = 0, q_cur = 0;
    mpz_class x = a, y = b;
    if (y < 0) { x = -x; y = -y; }
    bool have_cur = false;
    while (y != 0) {
      mpz_class quo, rem;
      mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      mpz_class p_next = have_cur ? mpz_class(quo * p_cur + p_prev) : quo;
      mpz_class q_next = have_cur ? mpz_class(quo * q_cur + q_prev) : mpz_class(1);
      if (have_cur) {
        p_prev = p_cur;
        q_prev = q_cur;
      }
      p_cur = p_next;
      q_cur = q_next;
      have_cur = true;
      // segment {p_prev/q_prev -> p_cur/q_cur} = g {0 -> oo} with
      // g = (p_cur  +-p_prev; q_cur  +-q_prev) in SL_2(Z)
      mpz_class det = p_cur * q_prev - p_prev * q_cur;
      assert(det == 1 || det == -1);
      mpz_class sd = (det == 1) ? q_prev : mpz_class(-q_prev);
      out.push_back(p1_.index_checked(mpz_class(q_cur % N_).get_si(),
                                      mpz_class(sd % N_).get_si()));
      x = y;
      y = rem;
    }
    return out;
  }

  // Class of the path {alpha -> beta} in quotient coordinates.
  std::vector<mpq_class> path_class(const Cusp& alpha, const Cusp& beta) const {
    std::vector<mpq_class> v(dim_, mpq_class(0));
    add_path_from_infinity(v, beta, 1);
    add_path_from_infinity(v, alpha, -1);
    return v;
  }

  // Fricke involution W_N on the quotient.
  QMat fricke_matrix() const {
    QMat w(dim_, dim_);
    for (size_t bi = 0; bi < dim_; ++bi) {
      auto [c, d] = p1_.rep(basis_gen_[bi]);
      auto [g0, ginf] = lift_endpoints(c, d);
      std::vector<mpq_class> v = path_class(fricke_image(g0), fricke_image(ginf));
      for (size_t j = 0; j < dim_; ++j) w.at(j, bi) = v[j];
    }
    return w;
  }

 private:
  void build_quotient() {
    const size_t n = p1_.size();
    // S = (0 -1; 1 0): (c,d) -> (d, -c);  T = (0 -1; 1 -1): (c,d) -> (d, -c-d)
    QMat rel(2 * n, n);
    for (size_t i = 0; i < n; ++i) {
      auto [c, d] = p1_.rep(i);
      rel.at(i, i) += 1;
      rel.at(i, (size_t)p1_.index_checked(d, -c) ) += 1;
      rel.at(n + i, i) += 1;
      rel.at(n + i, (size_t)p1_.index_checked(d, -c - d)) += 1;
      rel.at(n + i, (size_t)p1_.index_checked(-c - d, c)) += 1;
    }
    std::vector<size_t> pivots = rref(rel);
    std::vector<bool> is_pivot(n, false);
    for (size_t p : pivots) is_pivot[p] = true;
    for (size_t j = 0; j < n; ++j)
      if (!is_pivot[j]) basis_gen_.push_back(j);
    dim_ = basis_gen_.size();
    coords_ = QMat(n, dim_);
    for (size_t fi = 0; fi < dim_; ++fi) coords_.at(basis_gen_[fi], fi) = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      for (size_t fi = 0; fi < dim_; ++fi)
        coords_.at(pivots[r], fi) = -rel.at(r, basis_gen_[fi]);
  }

  void build_star() {
    // eta = diag(-1, 1): (c:d) -> (-c:d)
    star_ = QMat(dim_, dim_);
    for (size_t bi = 0; bi < dim_; ++bi) {
      auto [c, d] = p1_.rep(basis_gen_[bi]);
      int64_t gi = p1_.index_checked(-c, d);
      for (size_t j = 0; j < dim_; ++j) star_.at(j, bi) = coords_.at(gi, j);
    }
  }

  void add_path_from_infinity(std::vector<mpq_class>& acc, const Cusp& target,
                              int sign) const {
    if (target.is_infinity()) return;
    for (int64_t gi : infinity_path_generators(target.p, target.q))
      for (size_t j = 0; j < dim_; ++j) acc[j] += sign * coords_.at(gi, j);
  }

  // Lift canonical (c,d) mod N to a coprime pair and return the endpoints
  // {g.0, g.oo} of the corresponding unimodular path, g = (a b; c d).
  std::pair<Cusp, Cusp> lift_endpoints(int64_t c, int64_t d) const {
    auto [cc, dd] = lift_coprime(c, d);
    int64_t xx, yy;
    ext_gcd(cc, dd, xx, yy);  // cc*xx + dd*yy = 1
    // a = yy, b = -xx gives a*dd - b*cc = 1
    Cusp g0 = (dd == 0) ? Cusp::infinity() : Cusp::of(-xx, dd);
    Cusp ginf = (cc == 0) ? Cusp::infinity() : Cusp::of(yy, cc);
    return {g0, ginf};
  }

  std::pair<int64_t, int64_t> lift_coprime(int64_t c, int64_t d) const {
    int64_t cc = (c == 0) ? N_ : c;
    for (int64_t t = 0;; ++t) {
      int64_t cand = d + t * N_;
      if (std::gcd(cc, cand) == 1) return {cc, cand};
      if (t > 4 * N_) throw std::logic_error("lift_coprime: no lift found");
    }
  }

  Cusp fricke_image(const Cusp& x) const {
    // z -> -1/(Nz)
    if (x.is_infinity()) return Cusp::of(0, 1);
    if (x.p == 0) return Cusp::infinity();
    return Cusp::of(-x.q, N_ * x.p);
  }

  int64_t N_;
  P1Table p1_;
  size_t dim_ = 0;
  std::vector<size_t> basis_gen_;
  QMat coords_;  // num_generators x dim
  QMat star_;
};

}  // namespace stickel

#endif
