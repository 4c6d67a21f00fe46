#ifndef STICKEL_GROUPRING_HPP
#define STICKEL_GROUPRING_HPP

// Finite abelian groups, their integral group rings and the augmentation
// ideal filtration.  The Galois groups G_M = (Z/M)^*/{±1} are a thin layer
// of residue bookkeeping over a plain abelian group given by its
// elementary divisors.

#include <gmpxx.h>

#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stickel/arith.hpp"
#include "stickel/linalg.hpp"

namespace stickel {

struct ModulusTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAUnit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotADivisor : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Abelian group as a product of cyclic factors; elements are indexed
// 0..size-1 in mixed radix over the factor orders.
struct AbelianGroup {
  std::vector<int64_t> orders;  // cyclic factor orders, each > 1 (empty = trivial)
  int64_t size = 1;

  explicit AbelianGroup(std::vector<int64_t> ords = {}) : orders(std::move(ords)) {
    for (int64_t d : orders) {
      if (d < 2) throw std::invalid_argument("AbelianGroup: factor orders must be > 1");
      size *= d;
    }
  }

  std::vector<int64_t> exponents(int64_t idx) const {
    std::vector<int64_t> e(orders.size());
    for (size_t i = 0; i < orders.size(); ++i) {
      e[i] = idx % orders[i];
      idx /= orders[i];
    }
    return e;
  }

  int64_t index_of(const std::vector<int64_t>& e) const {
    int64_t idx = 0;
    for (size_t i = orders.size(); i-- > 0;)
      idx = idx * orders[i] + mod_reduce(e[i], orders[i]);
    return idx;
  }

  int64_t mul(int64_t a, int64_t b) const {
    std::vector<int64_t> ea = exponents(a), eb = exponents(b);
    for (size_t i = 0; i < orders.size(); ++i) ea[i] = (ea[i] + eb[i]) % orders[i];
    return index_of(ea);
  }

  int64_t inv(int64_t a) const {
    std::vector<int64_t> e = exponents(a);
    for (size_t i = 0; i < orders.size(); ++i) e[i] = (orders[i] - e[i]) % orders[i];
    return index_of(e);
  }

  // index of the i-th cyclic generator
  int64_t generator(size_t i) const {
    std::vector<int64_t> e(orders.size(), 0);
    e[i] = 1;
    return index_of(e);
  }

  bool operator==(const AbelianGroup& o) const { return orders == o.orders; }
};

// ---------------------------------------------------------------------------
// G_M = (Z/M)^*/{±1}
// ---------------------------------------------------------------------------

namespace detail {

inline int64_t primitive_root_mod_pk(int64_t p, int64_t pk) {
  // find a primitive root mod p that stays primitive mod p^2, hence mod p^k
  int64_t phi = p - 1;
  std::vector<int64_t> qs = prime_factors(phi);
  for (int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (int64_t q : qs)
      if (pow_mod(g, phi / q, p) == 1) { ok = false; break; }
    if (!ok) continue;
    int64_t root = g;
    if (pk > p && pow_mod(root, p - 1, p * p) == 1) root += p;
    (void)pk;
    return root;
  }
  throw std::logic_error("no primitive root found");
}

}  // namespace detail

struct GaloisGroup {
  int64_t modulus = 0;
  AbelianGroup group;                    // structure of (Z/M)^*/{±1}
  std::vector<int64_t> gen_residues;     // residue representing each cyclic generator
  std::vector<int64_t> elem_of_residue;  // size M, element index or -1
  std::vector<int64_t> canonical_residues;  // per element, the rep in [1, M/2]

  int64_t order() const { return group.size; }

  int64_t element_of(int64_t a) const {
    int64_t r = mod_reduce(a, modulus);
    int64_t e = (r < (int64_t)elem_of_residue.size()) ? elem_of_residue[r] : -1;
    if (e < 0)
      throw NotAUnit("residue " + std::to_string(a) + " is not a unit mod " +
                     std::to_string(modulus));
    return e;
  }
};

// Structure of (Z/M)^*/{±1} via CRT generators of (Z/M)^* and a Smith
// normal form quotient by the image of -1.  Generator choice is
// deterministic: smallest primitive roots, CRT-ordered factors.
inline GaloisGroup galois_group(int64_t M) {
  if (M < 3) throw ModulusTooSmall("galois_group: modulus must be >= 3");
  GaloisGroup G;
  G.modulus = M;

  // generators of (Z/M)^* with their orders, via CRT
  std::vector<int64_t> unit_gens, unit_orders;
  for (int64_t p : prime_factors(M)) {
    int64_t pk = 1;
    for (int64_t v = valuation(M, p); v > 0; --v) pk *= p;
    auto crt_lift = [&](int64_t r) {
      // residue r mod pk, 1 mod M/pk
      int64_t q = M / pk;
      int64_t x, y;
      ext_gcd(pk, q, x, y);
      // pk*x + q*y = 1 ; want  u = r mod pk, 1 mod q
      mpz_class u = mpz_class(r) * q % M * mod_reduce(y, M) % M + mpz_class(pk) * mod_reduce(x, M) % M;
      return mod_reduce(u.get_si() % M, M);
    };
    if (p == 2) {
      if (pk >= 4) {
        unit_gens.push_back(crt_lift(pk - 1));  // -1 mod 2^k
        unit_orders.push_back(2);
      }
      if (pk >= 8) {
        unit_gens.push_back(crt_lift(5));
        unit_orders.push_back(pk / 4);
      }
    } else {
      unit_gens.push_back(crt_lift(detail::primitive_root_mod_pk(p, pk) % pk));
      unit_orders.push_back(pk / p * (p - 1));
    }
  }

  const size_t k = unit_gens.size();
  // exponent vector of -1 over the generators (brute-force discrete log;
  // groups here are tiny)
  std::vector<int64_t> minus_one(k, 0);
  {
    std::vector<int64_t> e(k, 0);
    int64_t target = M - 1;
    std::function<bool(size_t, int64_t)> dfs = [&](size_t i, int64_t cur) {
      if (i == k) return cur == target;
      int64_t g = 1;
      for (int64_t t = 0; t < unit_orders[i]; ++t) {
        if (dfs(i + 1, mul_mod(cur, g, M))) {
          e[i] = t;
          return true;
        }
        g = mul_mod(g, unit_gens[i], M);
      }
      return false;
    };
    if (!dfs(0, 1)) throw std::logic_error("discrete log of -1 failed");
    minus_one = e;
  }

  // quotient Z^k / <diag(orders), minus_one> via SNF
  ZMat rel(k + 1, k);
  for (size_t i = 0; i < k; ++i) rel.at(i, i) = unit_orders[i];
  for (size_t j = 0; j < k; ++j) rel.at(k, j) = minus_one[j];
  std::vector<mpz_class> d;
  ZMat v;
  snf_with_right_transform(rel, d, v);
  ZMat vinv = unimodular_inverse(v);

  // new generator h_l = prod_j g_j^{Vinv[l][j]} ; keep factors with d_l > 1
  std::vector<int64_t> ords, gens;
  for (size_t l = 0; l < k; ++l) {
    int64_t dl = d[l].get_si();
    if (dl == 1) continue;
    if (dl == 0) throw std::logic_error("unexpected free factor in finite group");
    mpz_class h = 1;
    for (size_t j = 0; j < k; ++j) {
      mpz_class ex = vinv.at(l, j) % unit_orders[j];
      int64_t e = mod_reduce(ex.get_si(), unit_orders[j]);
      h = h * pow_mod(unit_gens[j], e, M) % M;
    }
    ords.push_back(dl);
    gens.push_back(h.get_si());
  }
  G.group = AbelianGroup(ords);
  G.gen_residues = gens;

  // enumerate all elements, fill residue tables
  G.elem_of_residue.assign(M, -1);
  G.canonical_residues.assign(G.group.size, 0);
  for (int64_t idx = 0; idx < G.group.size; ++idx) {
    std::vector<int64_t> e = G.group.exponents(idx);
    int64_t r = 1;
    for (size_t i = 0; i < gens.size(); ++i) r = mul_mod(r, pow_mod(gens[i], e[i], M), M);
    int64_t rm = M - r;
    G.elem_of_residue[r] = idx;
    G.elem_of_residue[rm % M] = idx;
    G.canonical_residues[idx] = std::min(r, rm);
  }
  // sanity: the residue map must cover (Z/M)^* exactly
  int64_t covered = 0;
  for (int64_t a = 1; a < M; ++a)
    if (std::gcd(a, M) == 1) {
      if (G.elem_of_residue[a] < 0) throw std::logic_error("galois_group: unit not covered");
      ++covered;
    }
  if (covered != euler_phi(M)) throw std::logic_error("galois_group: unit count mismatch");
  return G;
}

// ---------------------------------------------------------------------------
// Group ring elements
// ---------------------------------------------------------------------------

enum class CoeffRing { Integers, Rationals };

struct GroupRingElement {
  AbelianGroup group;
  std::vector<mpq_class> coeff;  // indexed by group element
  CoeffRing ring = CoeffRing::Integers;

  GroupRingElement() = default;
  GroupRingElement(const AbelianGroup& g, CoeffRing r = CoeffRing::Integers)
      : group(g), coeff(g.size, mpq_class(0)), ring(r) {}

  static GroupRingElement unit(const AbelianGroup& g, int64_t elem,
                               CoeffRing r = CoeffRing::Integers) {
    GroupRingElement x(g, r);
    x.coeff[elem] = 1;
    return x;
  }

  bool is_integral() const {
    for (const auto& c : coeff)
      if (c.get_den() != 1) return false;
    return true;
  }

  mpq_class augmentation() const {
    mpq_class s = 0;
    for (const auto& c : coeff) s += c;
    return s;
  }

  GroupRingElement& operator+=(const GroupRingElement& o) {
    assert(group == o.group);
    for (int64_t i = 0; i < group.size; ++i) coeff[i] += o.coeff[i];
    return *this;
  }
  GroupRingElement& operator-=(const GroupRingElement& o) {
    assert(group == o.group);
    for (int64_t i = 0; i < group.size; ++i) coeff[i] -= o.coeff[i];
    return *this;
  }
  GroupRingElement& operator*=(const mpq_class& s) {
    for (auto& c : coeff) c *= s;
    return *this;
  }
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator*(const mpq_class& s, GroupRingElement a) { return a *= s; }

  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    assert(a.group == b.group);
    GroupRingElement c(a.group, a.ring);
    for (int64_t i = 0; i < a.group.size; ++i) {
      if (a.coeff[i] == 0) continue;
      for (int64_t j = 0; j < b.group.size; ++j) {
        if (b.coeff[j] == 0) continue;
        c.coeff[a.group.mul(i, j)] += a.coeff[i] * b.coeff[j];
      }
    }
    return c;
  }

  bool operator==(const GroupRingElement& o) const {
    return group == o.group && coeff == o.coeff;
  }
  bool is_zero() const {
    for (const auto& c : coeff)
      if (c != 0) return false;
    return true;
  }
};

// sigma_a as a basis unit of Z[G_M]
inline GroupRingElement sigma(const GaloisGroup& G, int64_t a) {
  return GroupRingElement::unit(G.group, G.element_of(a));
}

// g -> g^{-1} extended linearly
inline GroupRingElement involution(const GroupRingElement& x) {
  GroupRingElement y(x.group, x.ring);
  for (int64_t i = 0; i < x.group.size; ++i) y.coeff[x.group.inv(i)] = x.coeff[i];
  return y;
}

// Ring homomorphism Z[G_{M'}] -> Z[G_M] induced by residue reduction, M | M'.
inline GroupRingElement project(const GaloisGroup& source, const GaloisGroup& target,
                                const GroupRingElement& x) {
  if (source.modulus % target.modulus != 0)
    throw NotADivisor("project: target modulus must divide source modulus");
  assert(x.group == source.group);
  GroupRingElement y(target.group, x.ring);
  for (int64_t i = 0; i < source.group.size; ++i) {
    if (x.coeff[i] == 0) continue;
    y.coeff[target.element_of(source.canonical_residues[i])] += x.coeff[i];
  }
  return y;
}

// Textual dump `M; a:coeff, a:coeff, ...`, elements ordered by canonical
// residue representative.
inline std::string dump(const GaloisGroup& G, const GroupRingElement& x) {
  std::map<int64_t, mpq_class> by_residue;
  for (int64_t i = 0; i < G.group.size; ++i) by_residue[G.canonical_residues[i]] = x.coeff[i];
  std::ostringstream os;
  os << G.modulus << ";";
  bool first = true;
  for (auto& [a, c] : by_residue) {
    os << (first ? " " : ", ") << a << ":" << c;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Augmentation ideal filtration.
//
// Over Z the powers I^r are integer lattices in Z^{|G|}: the basis of
// I^{r+1} is obtained from products of the HNF basis of I^r with the
// elements (g - 1), then reduced back to HNF.  Over Q the same scheme runs
// with row-reduced rational bases.  Both detect stabilization I^r = I^{r+1},
// which over Z[G] happens at a nonzero ideal whenever |G| is not a prime
// power.
// ---------------------------------------------------------------------------

struct OrdResult {
  enum Kind { Finite, AtLeast, Stabilized } kind = Finite;
  int64_t r = 0;  // Finite: the order; AtLeast: membership verified below r

  static OrdResult finite(int64_t r) { return {Finite, r}; }
  static OrdResult at_least(int64_t r) { return {AtLeast, r}; }
  static OrdResult stabilized() { return {Stabilized, -1}; }

  bool at_least_geq(int64_t bound) const {
    return kind != Finite || r >= bound;
  }
  std::string str() const {
    switch (kind) {
      case Finite: return std::to_string(r);
      case AtLeast: return "AtLeast(" + std::to_string(r) + ")";
      case Stabilized: return "Stabilized";
    }
    return "?";
  }
  bool operator==(const OrdResult& o) const { return kind == o.kind && r == o.r; }
};

class ZIdealFiltration {
 public:
  explicit ZIdealFiltration(const AbelianGroup& g) : group_(g) {}

  // HNF basis of I^r, r >= 1
  const ZMat& basis(int64_t r) {
    extend_to(r);
    return bases_[r - 1];
  }

  bool contains(int64_t r, const std::vector<mpz_class>& v) {
    extend_to(r);
    if (stable_at_ >= 0 && r > stable_at_) r = stable_at_;
    return hnf_contains(bases_[r - 1], v);
  }

  // first r with I^r = I^{r+1}, or -1 if not yet seen
  int64_t stable_at() const { return stable_at_; }

  bool stabilized_before(int64_t r) {
    extend_to(r);
    return stable_at_ >= 0 && stable_at_ < r;
  }

 private:
  void extend_to(int64_t r) {
    while ((int64_t)bases_.size() < r) {
      if (stable_at_ >= 0) {
        bases_.push_back(bases_.back());
        continue;
      }
      const int64_t n = group_.size;
      if (bases_.empty()) {
        ZMat span(n, n - 1);
        for (int64_t g = 1; g < n; ++g) {
          span.at(g, g - 1) += 1;
          span.at(0, g - 1) -= 1;
        }
        bases_.push_back(hnf(std::move(span)));
        continue;
      }
      const ZMat& prev = bases_.back();
      ZMat span(n, prev.cols * (n - 1));
      size_t col = 0;
      for (size_t b = 0; b < prev.cols; ++b)
        for (int64_t g = 1; g < n; ++g, ++col)
          for (int64_t i = 0; i < n; ++i) {
            const mpz_class& c = prev.at(i, b);
            if (c == 0) continue;
            span.at(group_.mul(i, g), col) += c;  // b * sigma_g
            span.at(i, col) -= c;                 // - b
          }
      ZMat next = hnf(std::move(span));
      if (next == bases_.back()) stable_at_ = (int64_t)bases_.size();
      bases_.push_back(std::move(next));
    }
  }

  AbelianGroup group_;
  std::vector<ZMat> bases_;
  int64_t stable_at_ = -1;
};

class QIdealFiltration {
 public:
  explicit QIdealFiltration(const AbelianGroup& g) : group_(g) {}

  bool contains(int64_t r, const std::vector<mpq_class>& v) {
    extend_to(r);
    if (stable_at_ >= 0 && r > stable_at_) r = stable_at_;
    const QMat& b = bases_[r - 1];  // RREF, rows are basis vectors
    std::vector<mpq_class> w = v;
    for (size_t i = 0; i < b.rows; ++i) {
      mpq_class f = w[pivots_[r - 1][i]];
      if (f != 0)
        for (size_t j = 0; j < w.size(); ++j) w[j] -= f * b.at(i, j);
    }
    for (const auto& c : w)
      if (c != 0) return false;
    return true;
  }

  int64_t stable_at() const { return stable_at_; }
  bool stabilized_before(int64_t r) {
    extend_to(r);
    return stable_at_ >= 0 && stable_at_ < r;
  }
  size_t dim(int64_t r) {
    extend_to(r);
    return bases_[r - 1].rows;
  }

 private:
  void extend_to(int64_t r) {
    while ((int64_t)bases_.size() < r) {
      if (stable_at_ >= 0) {
        bases_.push_back(bases_.back());
        pivots_.push_back(pivots_.back());
        continue;
      }
      const int64_t n = group_.size;
      QMat span;
      if (bases_.empty()) {
        span = QMat(n - 1, n);
        for (int64_t g = 1; g < n; ++g) {
          span.at(g - 1, g) += 1;
          span.at(g - 1, 0) -= 1;
        }
      } else {
        const QMat& prev = bases_.back();
        span = QMat(prev.rows * (n - 1), n);
        size_t row = 0;
        for (size_t b = 0; b < prev.rows; ++b)
          for (int64_t g = 1; g < n; ++g, ++row)
            for (int64_t i = 0; i < n; ++i) {
              const mpq_class& c = prev.at(b, i);
              if (c == 0) continue;
              span.at(row, group_.mul(i, g)) += c;
              span.at(row, i) -= c;
            }
      }
      std::vector<size_t> piv = rref(span);
      QMat next((piv.size()), n);
      for (size_t i = 0; i < piv.size(); ++i)
        for (int64_t j = 0; j < n; ++j) next.at(i, j) = span.at(i, j);
      if (!bases_.empty() && next == bases_.back()) stable_at_ = (int64_t)bases_.size();
      bases_.push_back(std::move(next));
      pivots_.push_back(std::move(piv));
    }
  }

  AbelianGroup group_;
  std::vector<QMat> bases_;
  std::vector<std::vector<size_t>> pivots_;
  int64_t stable_at_ = -1;
};

// Order of vanishing of xi in the augmentation filtration of R[G].
//  - Finite r: xi in I^r \ I^{r+1}
//  - Stabilized: the filtration stabilized and xi lies in the stable ideal
//    (the infinite branch; reported distinctly from AtLeast)
//  - AtLeast(r_max+1): membership persisted to r_max without stabilizing
inline OrdResult augmentation_order(const GroupRingElement& xi, int64_t r_max = 20,
                                    CoeffRing ring = CoeffRing::Integers) {
  if (r_max < 1) throw std::invalid_argument("augmentation_order: r_max must be >= 1");
  if (xi.is_zero()) return OrdResult::stabilized();  // zero lies in every power
  if (xi.augmentation() != 0) return OrdResult::finite(0);
  if (ring == CoeffRing::Integers) {
    if (!xi.is_integral())
      throw std::invalid_argument("augmentation_order over Z: element is not integral");
    std::vector<mpz_class> v(xi.group.size);
    for (int64_t i = 0; i < xi.group.size; ++i) v[i] = xi.coeff[i].get_num();
    ZIdealFiltration filt(xi.group);
    for (int64_t r = 1; r <= r_max + 1; ++r) {
      if (!filt.contains(r, v)) return OrdResult::finite(r - 1);
      if (filt.stable_at() >= 0 && filt.stable_at() <= r) return OrdResult::stabilized();
    }
    return OrdResult::at_least(r_max + 1);
  }
  QIdealFiltration filt(xi.group);
  for (int64_t r = 1; r <= r_max + 1; ++r) {
    if (!filt.contains(r, xi.coeff)) return OrdResult::finite(r - 1);
    if (filt.stable_at() >= 0 && filt.stable_at() <= r) return OrdResult::stabilized();
  }
  return OrdResult::at_least(r_max + 1);
}

// ---------------------------------------------------------------------------
// Complex characters
// ---------------------------------------------------------------------------

struct CharacterValue {
  AbelianGroup group;
  std::vector<int64_t> gen_images;  // chi(gen_i) = exp(2 pi i * k_i / d_i)

  std::complex<double> operator()(int64_t elem) const {
    std::vector<int64_t> e = group.exponents(elem);
    double arg = 0;
    for (size_t i = 0; i < group.orders.size(); ++i)
      arg += 2.0 * M_PI * double(gen_images[i]) * double(e[i]) / double(group.orders[i]);
    return std::polar(1.0, arg);
  }

  bool is_trivial() const {
    for (int64_t k : gen_images)
      if (k != 0) return false;
    return true;
  }

  CharacterValue conjugate() const {
    CharacterValue c = *this;
    for (size_t i = 0; i < gen_images.size(); ++i)
      c.gen_images[i] = (group.orders[i] - gen_images[i]) % group.orders[i];
    return c;
  }
};

inline std::vector<CharacterValue> characters(const AbelianGroup& g) {
  std::vector<CharacterValue> out;
  out.reserve(g.size);
  for (int64_t idx = 0; idx < g.size; ++idx) {
    CharacterValue chi;
    chi.group = g;
    chi.gen_images = g.exponents(idx);
    out.push_back(std::move(chi));
  }
  return out;
}

inline std::complex<double> evaluate(const CharacterValue& chi, const GroupRingElement& x) {
  std::complex<double> s = 0;
  for (int64_t i = 0; i < x.group.size; ++i) {
    if (x.coeff[i] == 0) continue;
    s += x.coeff[i].get_d() * chi(i);
  }
  return s;
}

// Dirichlet character mod M attached to a character of G_M (always even).
// Conductor = smallest f | M with chi trivial on units congruent to 1 mod f.
inline int64_t dirichlet_conductor(const GaloisGroup& G, const CharacterValue& chi) {
  for (int64_t f : divisors(G.modulus)) {
    bool trivial_on_kernel = true;
    for (int64_t a = 1; a < G.modulus && trivial_on_kernel; ++a) {
      if (std::gcd(a, G.modulus) != 1 || a % f != 1 % f) continue;
      std::vector<int64_t> e = G.group.exponents(G.element_of(a));
      for (size_t i = 0; i < e.size(); ++i)
        if ((chi.gen_images[i] * e[i]) % G.group.orders[i] != 0) {
          trivial_on_kernel = false;
          break;
        }
    }
    if (trivial_on_kernel) return f;
  }
  return G.modulus;
}

}  // namespace stickel

#endif
