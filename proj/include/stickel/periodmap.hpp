#ifndef STICKEL_PERIODMAP_HPP
#define STICKEL_PERIODMAP_HPP

// The normalized plus modular symbol q -> [q]_A of an elliptic curve:
// a rational dual eigenvector of the Manin symbol space, scaled so that
// its values on the Manin generators are integers of gcd 1 with the first
// nonzero value (in canonical P^1 order) positive.  That normalization
// pins the value lattice to Z and makes every run bit-for-bit
// reproducible; period and Manin-constant denominators are deliberately
// absorbed by it.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "stickel/curve.hpp"
#include "stickel/linalg.hpp"
#include "stickel/maninsym.hpp"

namespace stickel {

struct RationalPeriodMap {
  CurveData curve;
  std::shared_ptr<const ModularSymbolSpace> space;
  std::vector<mpq_class> dual;       // functional on quotient coordinates (normalized)
  std::vector<mpz_class> gen_values; // integer value on each Manin generator
  std::vector<int64_t> primes_used;  // good primes consumed by the eigenspace cut
  std::string normalization_id = "gcd1-first-positive-v1";

  int64_t level() const { return space->level(); }

  // [q]_A; depends only on q mod 1 and [q] = [-q].
  mpz_class operator()(const mpq_class& q) const {
    mpz_class v = 0;
    for (int64_t gi : space->infinity_path_generators(q.get_num(), q.get_den()))
      v += gen_values[gi];
    return v;
  }
  mpz_class value(int64_t a, int64_t m) const { return (*this)(mpq_class(a, m)); }
};

// Cut the one-dimensional dual eigenspace matching the curve: intersect
// kernels of (T_p^t - a_p) inside the plus dual space over increasing good
// primes.  Multiplicity one makes this terminate almost immediately; the
// bail bound turns bad input (wrong conductor, non-modular data) into a
// loud error instead of a silent wrong answer.
inline RationalPeriodMap cut_eigenspace(std::shared_ptr<const ModularSymbolSpace> space,
                                        const CurveData& curve,
                                        int64_t prime_bound = 1000) {
  if (curve.conductor != space->level())
    throw InconsistentInput("cut_eigenspace: curve conductor " +
                            std::to_string(curve.conductor) + " != space level " +
                            std::to_string(space->level()));
  const size_t dim = space->dim();

  // start from the +1 eigenspace of star^t: kernel of (star^t - 1)
  QMat constraint = space->star_matrix().transpose();
  for (size_t i = 0; i < dim; ++i) constraint.at(i, i) -= 1;
  QMat basis = kernel(std::move(constraint));  // dim x k, columns are duals

  std::vector<int64_t> used;
  for (int64_t p = 2; basis.cols > 1; ++p) {
    if (!is_prime(p) || space->level() % p == 0) continue;
    if (p > prime_bound)
      throw EigenspaceNotRankOne("cut_eigenspace: eigenspace still has dimension " +
                                 std::to_string(basis.cols) + " after primes up to " +
                                 std::to_string(prime_bound));
    int64_t ap = reduce_mod_p(curve, p).ap;
    QMat tp = space->hecke_matrix(p).transpose();
    for (size_t i = 0; i < dim; ++i) tp.at(i, i) -= ap;
    QMat image = mul(tp, basis);          // dim x k
    QMat combos = kernel(std::move(image));  // k x k'
    basis = mul(basis, combos);
    used.push_back(p);
  }
  if (basis.cols == 0)
    throw EigenspaceEmpty("cut_eigenspace: eigenspace intersection is empty");

  RationalPeriodMap map;
  map.curve = curve;
  map.space = space;
  map.primes_used = std::move(used);

  std::vector<mpq_class> psi(dim);
  for (size_t i = 0; i < dim; ++i) psi[i] = basis.at(i, 0);

  // raw values on generators, then normalize to integral / gcd 1 / first positive
  const size_t ngens = space->num_generators();
  std::vector<mpq_class> raw(ngens, mpq_class(0));
  mpz_class den_lcm = 1;
  for (size_t i = 0; i < ngens; ++i) {
    for (size_t j = 0; j < dim; ++j)
      if (space->coords().at(i, j) != 0) raw[i] += psi[j] * space->coords().at(i, j);
    if (raw[i] != 0) den_lcm = lcm(den_lcm, mpz_class(raw[i].get_den()));
  }
  mpz_class content = 0;
  for (size_t i = 0; i < ngens; ++i) {
    mpq_class scaled = raw[i] * den_lcm;
    content = gcd(content, mpz_class(scaled.get_num()));
  }
  if (content == 0)
    throw EigenspaceEmpty("cut_eigenspace: eigenvector vanishes on all generators");
  mpq_class scale(den_lcm, content);
  for (size_t i = 0; i < ngens; ++i) {
    mpq_class v = raw[i] * scale;
    if (v != 0) {
      if (v < 0) scale = -scale;
      break;
    }
  }
  map.dual.resize(dim);
  for (size_t j = 0; j < dim; ++j) map.dual[j] = psi[j] * scale;
  map.gen_values.resize(ngens);
  for (size_t i = 0; i < ngens; ++i) {
    mpq_class v = raw[i] * scale;
    if (v.get_den() != 1)
      throw std::logic_error("cut_eigenspace: normalization failed to clear denominators");
    map.gen_values[i] = v.get_num();
  }
  return map;
}

inline mpz_class symbol_value(const RationalPeriodMap& map, const mpq_class& q) {
  return map(q);
}

// Eigenvalue of the Fricke involution W_N on the cut eigenline.
inline int fricke_eigenvalue(const RationalPeriodMap& map) {
  const ModularSymbolSpace& sp = *map.space;
  QMat w = sp.fricke_matrix();
  // psi o W vs psi
  std::vector<mpq_class> lhs(sp.dim(), mpq_class(0));
  for (size_t j = 0; j < sp.dim(); ++j)
    for (size_t i = 0; i < sp.dim(); ++i)
      if (w.at(i, j) != 0) lhs[j] += map.dual[i] * w.at(i, j);
  for (int eps : {1, -1}) {
    bool ok = true;
    for (size_t j = 0; j < sp.dim(); ++j)
      if (lhs[j] != eps * map.dual[j]) { ok = false; break; }
    if (ok) return eps;
  }
  throw NotEigenvector("fricke_eigenvalue: eigenline is not W_N-stable (bug)");
}

// Debug dump `index;c;d;value` per generator.
inline std::string dump_generator_values(const RationalPeriodMap& map) {
  std::ostringstream os;
  for (size_t i = 0; i < map.space->num_generators(); ++i) {
    auto [c, d] = map.space->p1().rep(i);
    os << i << ";" << c << ";" << d << ";" << map.gen_values[i] << "\n";
  }
  return os.str();
}

}  // namespace stickel

#endif
