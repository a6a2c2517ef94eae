#include <catch2/catch_amalgamated.hpp>

#include "tkstab/examples.hpp"
#include "tkstab/polytope.hpp"
#include "support/generators.hpp"

using namespace tkstab;

namespace {
RatVec rv(std::initializer_list<long long> xs) {
  RatVec v;
  for (auto x : xs) v.emplace_back(x);
  return v;
}
}  // namespace

TEST_CASE("square builds with four vertices in lex order") {
  auto p = example_polytope("square");
  REQUIRE(p.dim() == 2);
  REQUIRE(p.facets().size() == 4);
  REQUIRE(p.vertices() ==
          std::vector<RatVec>{rv({-1, -1}), rv({-1, 1}), rv({1, -1}), rv({1, 1})});
}

TEST_CASE("simplex vertices solve the three 2x2 systems") {
  auto p = example_polytope("simplex");
  REQUIRE(p.vertices() == std::vector<RatVec>{rv({0, 0}), rv({0, 1}), rv({1, 0})});
}

TEST_CASE("non-primitive normals are primitivized to the same half-space") {
  // (2), (-2) with offsets (2, 2) is the interval [-1, 1]
  auto p = make_polytope(1, {{2}, {-2}}, {Rat(2), Rat(2)});
  REQUIRE(p.facets()[0].normal[0] == 1);
  REQUIRE(p.facets()[0].offset == 1);
  REQUIRE(p.facets()[1].normal[0] == -1);
  REQUIRE(p.facets()[1].offset == 1);
  REQUIRE(p.vertices() == std::vector<RatVec>{rv({-1}), rv({1})});
}

TEST_CASE("construction rejects degenerate input") {
  SECTION("unbounded: missing direction") {
    REQUIRE_THROWS_MATCHES(make_polytope(2, {{1, 0}, {-1, 0}, {0, 1}}, {Rat(1), Rat(1), Rat(1)}),
                           PolytopeError, Catch::Matchers::Predicate<PolytopeError>([](auto& e) {
                             return e.code() == PolytopeError::Code::Unbounded;
                           }));
  }
  SECTION("unbounded: half-space only") {
    REQUIRE_THROWS_AS(make_polytope(1, {{1}}, {Rat(1)}), PolytopeError);
  }
  SECTION("empty") {
    REQUIRE_THROWS_MATCHES(make_polytope(1, {{1}, {-1}}, {Rat(-2), Rat(1)}), PolytopeError,
                           Catch::Matchers::Predicate<PolytopeError>([](auto& e) {
                             return e.code() == PolytopeError::Code::Empty;
                           }));
  }
  SECTION("lower-dimensional") {
    REQUIRE_THROWS_MATCHES(make_polytope(1, {{1}, {-1}}, {Rat(0), Rat(0)}), PolytopeError,
                           Catch::Matchers::Predicate<PolytopeError>([](auto& e) {
                             return e.code() == PolytopeError::Code::LowerDimensional;
                           }));
  }
  SECTION("duplicate facet hyperplane") {
    REQUIRE_THROWS_MATCHES(
        make_polytope(2, {{1, 0}, {2, 0}, {-1, 0}, {0, 1}, {0, -1}},
                      {Rat(1), Rat(2), Rat(1), Rat(1), Rat(1)}),
        PolytopeError, Catch::Matchers::Predicate<PolytopeError>([](auto& e) {
          return e.code() == PolytopeError::Code::DuplicateFacet;
        }));
  }
  SECTION("redundant half-space") {
    REQUIRE_THROWS_MATCHES(
        make_polytope(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}},
                      {Rat(1), Rat(1), Rat(1), Rat(1), Rat(10)}),
        PolytopeError, Catch::Matchers::Predicate<PolytopeError>([](auto& e) {
          return e.code() == PolytopeError::Code::RedundantFacet;
        }));
  }
}

TEST_CASE("pruning factory drops redundant half-spaces silently") {
  std::vector<std::pair<RatVec, Rat>> hs = {
      {{Rat(1), Rat(0)}, Rat(1)},  {{Rat(-1), Rat(0)}, Rat(1)}, {{Rat(0), Rat(1)}, Rat(1)},
      {{Rat(0), Rat(-1)}, Rat(1)}, {{Rat(1), Rat(1)}, Rat(10)},
  };
  auto p = Polytope::intersect_pruned(2, hs);
  REQUIRE(p);
  REQUIRE(p->facets().size() == 4);

  // empty and lower-dimensional intersections are signalled, not thrown
  hs.push_back({{Rat(1), Rat(0)}, Rat(-2)});
  REQUIRE_FALSE(Polytope::intersect_pruned(2, hs));
}

TEST_CASE("delzant check accepts the library examples") {
  for (const char* name : {"interval", "square", "simplex", "cube", "trapezoid(2)"}) {
    auto rep = check_delzant(example_polytope(name));
    INFO(name);
    CHECK(rep.is_delzant);
    CHECK(rep.offending_vertices.empty());
  }
}

TEST_CASE("delzant check localizes the bad vertex of a non-delzant triangle") {
  // facets 0 and 2 meet at (0, 1/2) with determinant -2
  auto p = make_polytope(2, {{-1, 0}, {0, -1}, {1, 2}}, {Rat(0), Rat(0), Rat(1)});
  auto rep = check_delzant(p);
  REQUIRE_FALSE(rep.is_delzant);
  REQUIRE(rep.offending_vertices.size() == 1);
  REQUIRE(p.vertices()[rep.offending_vertices[0]] == RatVec{Rat(0), Rat(1, 2)});
}

TEST_CASE("triangulation is a deterministic fan") {
  SECTION("simplex is itself") { REQUIRE(triangulate(example_polytope("simplex")).size() == 1); }
  SECTION("square fans into two triangles from (-1,-1)") {
    auto tris = triangulate(example_polytope("square"));
    REQUIRE(tris.size() == 2);
    for (const auto& t : tris) REQUIRE(t.verts[0] == rv({-1, -1}));
  }
  SECTION("interval is itself") { REQUIRE(triangulate(example_polytope("interval")).size() == 1); }
  SECTION("cube fans into six tetrahedra") {
    REQUIRE(triangulate(example_polytope("cube")).size() == 6);
  }
}

TEST_CASE("unimodular transform maps vertices correctly") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    auto p = gen::random_polytope(n, rng);
    auto u = gen::random_unimodular(n, rng);
    auto t = gen::random_translation(n, rng);
    auto q = p.transformed(u, t);
    REQUIRE(q.vertices().size() == p.vertices().size());
    // each image vertex U v + t must be a vertex of q
    for (const auto& v : p.vertices()) {
      RatVec img(n, Rat(0));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) img[i] += Rat(u[i][j]) * v[j];
        img[i] += t[i];
      }
      REQUIRE(std::find(q.vertices().begin(), q.vertices().end(), img) != q.vertices().end());
    }
  }
}

TEST_CASE("every vertex lies on at least n facets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    auto p = gen::random_polytope(n, rng);
    for (const auto& v : p.vertices()) {
      int active = 0;
      for (const auto& f : p.facets())
        if (dot(f.normal, v) == f.offset) ++active;
      REQUIRE(active >= n);
    }
  }
}
