#include <catch2/catch_amalgamated.hpp>

#include "tkstab/examples.hpp"
#include "tkstab/integrate.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace tkstab;

TEST_CASE("interior integrals match hand values") {
  auto square = example_polytope("square");
  auto simplex = example_polytope("simplex");
  CHECK(volume(square) == 4);
  CHECK(integrate_poly(square, Polynomial::monomial(2, {2, 0}, Rat(1))) == Rat(4, 3));
  CHECK(integrate_poly(simplex, Polynomial::monomial(2, {1, 1}, Rat(1))) == Rat(1, 24));
  CHECK(volume(example_polytope("cube")) == 8);
}

TEST_CASE("boundary integrals use the lattice measure") {
  auto square = example_polytope("square");
  auto simplex = example_polytope("simplex");
  // perimeter with unit normals
  CHECK(boundary_mass(square) == 8);
  // each simplex edge has dsigma-mass 1, including the hypotenuse
  CHECK(boundary_mass(simplex) == 3);
  // odd monomial cancels over the square boundary
  CHECK(integrate_boundary(square, Polynomial::variable(2, 0)) == 0);
}

TEST_CASE("volume and boundary mass are positive on random polytopes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    auto p = gen::random_polytope(n, rng);
    REQUIRE(volume(p) > 0);
    REQUIRE(boundary_mass(p) > 0);
  }
}

TEST_CASE("additivity under a hyperplane split is exact") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    auto p = gen::random_polytope(n, rng);
    // random hyperplane through an interior point
    RatVec a(n, Rat(0));
    bool nz = false;
    for (int i = 0; i < n; ++i) {
      a[i] = gen::random_rational(rng, 2, 1);
      if (a[i] != 0) nz = true;
    }
    if (!nz) a[0] = 1;
    RatVec centroid(n, Rat(0));
    for (const auto& v : p.vertices())
      for (int i = 0; i < n; ++i) centroid[i] += v[i];
    for (int i = 0; i < n; ++i) centroid[i] /= static_cast<int>(p.vertices().size());
    Rat rhs = dot(a, centroid);

    auto hs_plus = p.halfspaces();
    RatVec aneg(n);
    for (int i = 0; i < n; ++i) aneg[i] = -a[i];
    hs_plus.emplace_back(aneg, -rhs);  // <a,x> >= rhs
    auto hs_minus = p.halfspaces();
    hs_minus.emplace_back(a, rhs);

    auto pplus = Polytope::intersect_pruned(n, hs_plus);
    auto pminus = Polytope::intersect_pruned(n, hs_minus);

    Polynomial q(n);
    for (int k = 0; k < 3; ++k) {
      std::vector<int> exp(n, 0);
      exp[rng() % n] += 1 + rng() % 2;
      q += Polynomial::monomial(n, exp, gen::random_rational(rng));
    }
    Rat whole = integrate_poly(p, q);
    Rat parts = (pplus ? integrate_poly(*pplus, q) : Rat(0)) +
                (pminus ? integrate_poly(*pminus, q) : Rat(0));
    REQUIRE(whole == parts);
  }
}

TEST_CASE("unimodular and translation equivariance are exact") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    auto p = gen::random_polytope(n, rng);
    auto u = gen::random_unimodular(n, rng);
    auto t = gen::random_translation(n, rng);
    auto q = p.transformed(u, t);

    Polynomial poly(n);
    for (int k = 0; k < 3; ++k) {
      std::vector<int> exp(n, 0);
      exp[rng() % n] += 1 + rng() % 2;
      poly += Polynomial::monomial(n, exp, gen::random_rational(rng));
    }
    // pullback: (poly o T)(x) = poly(Ux + t)
    std::vector<RatVec> umat(n, RatVec(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) umat[i][j] = Rat(u[i][j]);
    Polynomial pulled = poly.compose_affine(umat, t);

    REQUIRE(integrate_poly(q, poly) == integrate_poly(p, pulled));
    REQUIRE(integrate_boundary(q, poly) == integrate_boundary(p, pulled));
  }
}

TEST_CASE("exact integrals agree with the slice-quadrature oracle") {
  std::mt19937_64 rng(19);
  for (int n = 1; n <= 3; ++n) {
    int trials = n == 3 ? 4 : 10;
    for (int trial = 0; trial < trials; ++trial) {
      auto p = gen::random_polytope(n, rng);
      Polynomial q = Polynomial::constant(n, gen::random_rational(rng));
      for (int k = 0; k < 2; ++k) {
        std::vector<int> exp(n, 0);
        for (int tot = 0; tot < 3; ++tot) exp[rng() % n] += rng() % 2;
        q += Polynomial::monomial(n, exp, gen::random_rational(rng));
      }
      double exact_dx = to_double(integrate_poly(p, q));
      double exact_ds = to_double(integrate_boundary(p, q));
      auto f = [&](const VecD& x) { return q.eval(x); };
      double orc_dx = oracles::integrate_region(oracles::region_of(p), f, {}, 1e-10);
      double orc_ds = oracles::integrate_boundary_region(p, f, {}, 1e-10);
      double scale_dx = std::max(1.0, std::abs(exact_dx));
      double scale_ds = std::max(1.0, std::abs(exact_ds));
      INFO("n=" << n << " trial=" << trial);
      REQUIRE(std::abs(exact_dx - orc_dx) / scale_dx < 1e-6);
      REQUIRE(std::abs(exact_ds - orc_ds) / scale_ds < 1e-6);
    }
  }
}
