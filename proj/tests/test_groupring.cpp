#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "oracles.hpp"
#include "stickel/groupring.hpp"

using namespace stickel;

TEST_CASE("G_M structure for small M") {
  GaloisGroup g3 = galois_group(3);
  CHECK(g3.order() == 1);

  GaloisGroup g5 = galois_group(5);
  CHECK(g5.order() == 2);
  CHECK(g5.group.orders == std::vector<int64_t>{2});
  // generated by the image of 2: its square is 4 = -1 = identity
  int64_t two = g5.element_of(2);
  CHECK(two != 0);
  CHECK(g5.group.mul(two, two) == 0);

  GaloisGroup g16 = galois_group(16);
  CHECK(g16.order() == 4);

  CHECK_THROWS_AS(galois_group(2), ModulusTooSmall);
}

TEST_CASE("G_M matches a brute-force multiplication table") {
  for (int64_t M : {5, 7, 9, 12, 15, 16, 24, 33}) {
    GaloisGroup g = galois_group(M);
    CHECK(g.order() == (int64_t)euler_phi(M) / 2);
    // element_of is a homomorphism from residue multiplication
    for (int64_t a = 1; a < M; ++a) {
      if (std::gcd(a, M) != 1) continue;
      for (int64_t b = 1; b < M; ++b) {
        if (std::gcd(b, M) != 1) continue;
        CHECK(g.group.mul(g.element_of(a), g.element_of(b)) == g.element_of(a * b % M));
      }
      CHECK(g.element_of(M - a) == g.element_of(a));  // -1 quotiented
    }
  }
}

TEST_CASE("sigma and canonical residues") {
  GaloisGroup g5 = galois_group(5);
  CHECK(sigma(g5, 4) == sigma(g5, 1));
  CHECK(sigma(g5, 2) * sigma(g5, 2) == sigma(g5, 1));
  for (int64_t M : {5, 8, 13, 21}) {
    GaloisGroup g = galois_group(M);
    CHECK(sigma(g, M - 1) == sigma(g, 1));
    CHECK_THROWS_AS(sigma(g, M), NotAUnit);
  }
}

TEST_CASE("projection between moduli") {
  GaloisGroup g15 = galois_group(15), g5 = galois_group(5), g3 = galois_group(3);
  CHECK(project(g15, g5, sigma(g15, 2)) == sigma(g5, 2));
  CHECK_THROWS_AS(project(g15, galois_group(7), sigma(g15, 2)), NotADivisor);

  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    GroupRingElement x(g15.group);
    for (auto& c : x.coeff) c = (int64_t)(rng() % 19) - 9;
    CHECK(project(g15, g5, x).augmentation() == x.augmentation());
    GroupRingElement down = project(g15, g3, x);
    CHECK(down.coeff[0] == x.augmentation());  // trivial target
    CHECK(involution(involution(x)) == x);
    CHECK(involution(x).augmentation() == x.augmentation());
  }
}

TEST_CASE("involution on G_5 fixes sigma_2 combinations") {
  GaloisGroup g5 = galois_group(5);
  GroupRingElement x = mpq_class(3) * sigma(g5, 1) + mpq_class(5) * sigma(g5, 2);
  CHECK(involution(x) == x);
}

TEST_CASE("dump format") {
  GaloisGroup g5 = galois_group(5);
  GroupRingElement x = mpq_class(-12) * sigma(g5, 1) + mpq_class(13) * sigma(g5, 2);
  CHECK(dump(g5, x) == "5; 1:-12, 2:13");
}

TEST_CASE("augmentation order: pinned values") {
  // zero element: infinite branch
  GaloisGroup g5 = galois_group(5);
  GroupRingElement zero(g5.group);
  CHECK(augmentation_order(zero).kind == OrdResult::Stabilized);

  // sigma_gen - 1 in a cyclic group has order exactly 1
  for (int64_t m : {2, 3, 4, 5, 6, 7}) {
    AbelianGroup g({m});
    GroupRingElement x = GroupRingElement::unit(g, g.generator(0)) -
                         GroupRingElement::unit(g, 0);
    OrdResult r = augmentation_order(x);
    CHECK(r == OrdResult::finite(1));
  }

  // order-2 group: I^n = 2^{n-1} I, so 2(sigma-1) has order exactly 2
  AbelianGroup c2({2});
  GroupRingElement y = GroupRingElement::unit(c2, 1) - GroupRingElement::unit(c2, 0);
  GroupRingElement y2 = mpq_class(2) * y;
  CHECK(augmentation_order(y2) == OrdResult::finite(2));
  ZIdealFiltration filt(c2);
  for (int64_t n = 1; n <= 6; ++n) {
    ZMat expected(2, 1);
    mpz_class s = 1;
    for (int64_t k = 1; k < n; ++k) s *= 2;
    expected.at(0, 0) = -s;  // 2^{n-1} * (sigma - 1) as a coefficient column
    expected.at(1, 0) = s;
    CHECK(filt.basis(n) == hnf(std::move(expected)));
  }
}

TEST_CASE("augmentation order matches the brute-force lattice oracle") {
  std::mt19937_64 rng(987654321);
  for (const std::vector<int64_t>& orders : oracles::abelian_groups_upto_12()) {
    AbelianGroup g(orders);
    for (int trial = 0; trial < 25; ++trial) {
      GroupRingElement x(g);
      for (auto& c : x.coeff) c = (int64_t)(rng() % 11) - 5;
      int64_t r_max = 6;
      CHECK(augmentation_order(x, r_max) == oracles::brute_force_ord(x, r_max));
    }
  }
}

TEST_CASE("rational filtration agrees with integer filtration on finiteness") {
  std::mt19937_64 rng(5150);
  AbelianGroup g({2, 4});
  for (int trial = 0; trial < 10; ++trial) {
    GroupRingElement x(g);
    for (auto& c : x.coeff) c = (int64_t)(rng() % 7) - 3;
    GroupRingElement xq = x;
    xq.ring = CoeffRing::Rationals;
    OrdResult rz = augmentation_order(x, 8, CoeffRing::Integers);
    OrdResult rq = augmentation_order(xq, 8, CoeffRing::Rationals);
    // over Q the order can only go up (denominators become invertible)
    if (rz.kind == OrdResult::Finite && rq.kind == OrdResult::Finite)
      CHECK(rq.r >= rz.r);
  }
}

TEST_CASE("characters") {
  GaloisGroup g5 = galois_group(5);
  std::vector<CharacterValue> chars = characters(g5.group);
  CHECK(chars.size() == 2);
  GroupRingElement x = mpq_class(3) * sigma(g5, 1) + mpq_class(5) * sigma(g5, 2);
  for (const CharacterValue& chi : chars)
    if (chi.is_trivial())
      CHECK(std::abs(evaluate(chi, x) - std::complex<double>(8, 0)) < 1e-12);

  // orthogonality on G_16: sum over group of chi(g) conj(psi(g)) = |G| delta
  GaloisGroup g16 = galois_group(16);
  std::vector<CharacterValue> c16 = characters(g16.group);
  for (size_t i = 0; i < c16.size(); ++i)
    for (size_t j = 0; j < c16.size(); ++j) {
      std::complex<double> s = 0;
      for (int64_t e = 0; e < g16.order(); ++e) s += c16[i](e) * std::conj(c16[j](e));
      double expect = (i == j) ? (double)g16.order() : 0.0;
      CHECK(std::abs(s - expect) < 1e-9);
    }
}

TEST_CASE("dirichlet conductor") {
  GaloisGroup g15 = galois_group(15);
  for (const CharacterValue& chi : characters(g15.group)) {
    int64_t f = dirichlet_conductor(g15, chi);
    if (chi.is_trivial()) CHECK(f == 1);
    CHECK(15 % f == 0);
  }
  // G_9 is cyclic of order 3; its nontrivial characters are primitive mod 9
  GaloisGroup g9 = galois_group(9);
  for (const CharacterValue& chi : characters(g9.group))
    CHECK(dirichlet_conductor(g9, chi) == (chi.is_trivial() ? 1 : 9));
}
