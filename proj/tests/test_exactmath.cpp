#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gptforge/cone.hpp"
#include "gptforge/feasibility.hpp"
#include "gptforge/linalg.hpp"
#include "gptforge/rational.hpp"
#include "oracles.hpp"

using namespace gptforge;

namespace {

RatVec v3(const Rat& a, const Rat& b, const Rat& c) { return make_vec({a, b, c}); }

const Rat half(1, 2);

Cone rtrit_effect_cone() {
  return make_cone(3, {v3(half, half, 0), v3(half, 0, half), v3(0, half, half)});
}

}  // namespace

TEST_CASE("rational text form") {
  CHECK(rat_to_string(parse_rational("3")) == "3");
  CHECK(rat_to_string(parse_rational("-1/2")) == "-1/2");
  CHECK(parse_rational("2/4") == Rat(1, 2));
  CHECK(rat_to_string(parse_rational("2/4")) == "1/2");
  CHECK_THROWS_AS(parse_rational("3/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("feasibility: unique solution by elimination") {
  RatMat a(2, 2);
  a << 1, 1, 1, -1;
  const RatVec b = make_vec({1, 1});
  const Feasibility f = solve_feasibility(a, b);
  REQUIRE(f.feasible);
  CHECK(f.assignment(0) == 1);
  CHECK(f.assignment(1) == 0);
}

TEST_CASE("feasibility: sign contradiction") {
  RatMat a(1, 1);
  a << 1;
  CHECK_FALSE(solve_feasibility(a, make_vec({-1})).feasible);
}

TEST_CASE("feasibility: the restricted-trit restriction") {
  // a1 = (1,0,0) has no nonnegative expansion in the midpoint effects.
  RatMat a(3, 3);
  a << half, half, 0, half, 0, half, 0, half, half;
  a.transposeInPlace();
  const RatVec b = v3(1, 0, 0);
  CHECK_FALSE(solve_feasibility(a, b).feasible);
  CHECK_FALSE(oracle::feasible_by_enumeration(a, b));
}

TEST_CASE("feasibility: exact reproduction of the right-hand side") {
  RatMat a(3, 4);
  a << 1, 2, 0, Rat(1, 3), 0, 1, 5, -1, 2, 0, 1, 7;
  const RatVec b = make_vec({Rat(7, 3), 4, 10});
  const Feasibility f = solve_feasibility(a, b);
  REQUIRE(f.feasible);
  CHECK(vec_eq(a * f.assignment, b));
  for (Index i = 0; i < f.assignment.size(); ++i) CHECK(f.assignment(i) >= 0);
}

TEST_CASE("feasibility agrees with brute-force enumeration on a battery") {
  struct Case {
    std::vector<std::vector<int>> rows;
    std::vector<int> rhs;
  };
  const std::vector<Case> battery = {
      {{{1, 1}, {1, -1}}, {1, 1}},
      {{{1}}, {-1}},
      {{{1, 1, 1}}, {1}},
      {{{1, -1}}, {0}},
      {{{2, -3, 1, 0}, {0, 1, -1, 2}}, {1, 1}},
      {{{1, 2, 3, 4}, {4, 3, 2, 1}, {1, 1, 1, 1}}, {10, 10, 1}},
      {{{1, 0}, {0, 1}, {1, 1}}, {2, 3, 5}},
      {{{1, 0}, {0, 1}, {1, 1}}, {2, 3, 4}},
      {{{1, 1}, {2, 2}}, {1, 3}},
      {{{1, 1}, {2, 2}}, {1, 2}},
      {{{0, 0}}, {0}},
      {{{-1, -1, -1, -1}}, {-2}},
      {{{1, -2, 1, 0}, {0, 1, -2, 1}, {1, 1, 1, 1}, {1, 0, 0, -1}}, {0, 0, 1, 0}},
  };
  for (const Case& c : battery) {
    const Index m = static_cast<Index>(c.rows.size());
    const Index n = static_cast<Index>(c.rows[0].size());
    RatMat a(m, n);
    RatVec b(m);
    for (Index i = 0; i < m; ++i) {
      b(i) = c.rhs[static_cast<std::size_t>(i)];
      for (Index j = 0; j < n; ++j) {
        a(i, j) = c.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    const Feasibility f = solve_feasibility(a, b);
    CHECK(f.feasible == oracle::feasible_by_enumeration(a, b));
    if (f.feasible) CHECK(vec_eq(a * f.assignment, b));
  }
}

TEST_CASE("lp_maximize on a bounded polytope") {
  // max x1 + x2 s.t. x1 + x2 + s = 1
  RatMat a(1, 3);
  a << 1, 1, 1;
  const LpOutcome out = lp_maximize(a, make_vec({1}), v3(1, 1, 0));
  REQUIRE(out.status == LpOutcome::Status::optimal);
  CHECK(out.value == 1);
}

TEST_CASE("lp_maximize detects unboundedness and infeasibility") {
  RatMat a(1, 2);
  a << 1, -1;
  CHECK(lp_maximize(a, make_vec({0}), make_vec({1, 0})).status == LpOutcome::Status::unbounded);
  RatMat a2(1, 1);
  a2 << 1;
  CHECK(lp_maximize(a2, make_vec({-1}), make_vec({1})).status == LpOutcome::Status::infeasible);
}

TEST_CASE("cone membership certificates") {
  const Cone dual_basis = make_cone(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});

  SUBCASE("zero vector lies in any cone") {
    const ConeMembership m = cone_membership(RatVec::Zero(3), rtrit_effect_cone());
    CHECK(m.inside);
    CHECK(is_zero_vec(m.coefficients));
  }
  SUBCASE("a1 falls outside the midpoint-effect cone") {
    CHECK_FALSE(cone_membership(v3(1, 0, 0), rtrit_effect_cone()).inside);
  }
  SUBCASE("e12 decomposes over the dual basis") {
    const ConeMembership m = cone_membership(v3(half, half, 0), dual_basis);
    REQUIRE(m.inside);
    CHECK(m.coefficients(0) == half);
    CHECK(m.coefficients(1) == half);
    CHECK(m.coefficients(2) == 0);
  }
  SUBCASE("certified combinations evaluate back exactly") {
    const Cone c = rtrit_effect_cone();
    const RatVec probe = v3(Rat(1, 2), Rat(3, 4), Rat(1, 4));
    const ConeMembership m = cone_membership(probe, c);
    if (m.inside) {
      RatVec rebuilt = RatVec::Zero(3);
      for (std::size_t k = 0; k < c.generators.size(); ++k) {
        rebuilt += m.coefficients(static_cast<Index>(k)) * c.generators[k];
      }
      CHECK(vec_eq(rebuilt, probe));
    }
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(cone_membership(make_vec({1, 2}), dual_basis), std::invalid_argument);
  }
}

TEST_CASE("dual cone: the orthant is self-dual") {
  const Cone orthant = make_cone(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
  const Cone dual = dual_cone(orthant);
  CHECK(dual.generators.size() == 3);
  CHECK(cone_equal(dual, orthant));
}

TEST_CASE("dual cone of the midpoint-effect cone") {
  // Hand computation: the facet pairs of {f1+f2>=0, f1+f3>=0, f2+f3>=0} meet
  // in the three rays (-1,1,1), (1,-1,1), (1,1,-1).
  const Cone dual = dual_cone(rtrit_effect_cone());
  const std::vector<RatVec> expected = {v3(-1, 1, 1), v3(1, -1, 1), v3(1, 1, -1)};
  REQUIRE(dual.generators.size() == 3);
  for (const RatVec& e : expected) {
    bool found = false;
    for (const RatVec& g : dual.generators) found = found || vec_eq(g, canonical_ray(e));
    CHECK(found);
  }
  // every expected ray is valid and extremal among the others
  for (std::size_t i = 0; i < expected.size(); ++i) {
    for (const RatVec& g : rtrit_effect_cone().generators) CHECK(dot(expected[i], g) >= 0);
    std::vector<RatVec> others;
    for (std::size_t j = 0; j < expected.size(); ++j) {
      if (j != i) others.push_back(expected[j]);
    }
    CHECK_FALSE(cone_membership(expected[i], make_cone(3, others)).inside);
  }
}

TEST_CASE("dual cone of the square state cone has one ray per edge") {
  const Cone square = make_cone(3, {v3(-1, 1, 1), v3(-1, -1, 1), v3(1, -1, 1), v3(1, 1, 1)});
  const Cone dual = dual_cone(square);
  REQUIRE(dual.generators.size() == 4);
  const std::vector<RatVec> expected = {v3(1, 0, 1), v3(0, 1, 1), v3(-1, 0, 1), v3(0, -1, 1)};
  for (const RatVec& e : expected) {
    bool found = false;
    for (const RatVec& g : dual.generators) found = found || vec_eq(g, canonical_ray(e));
    CHECK(found);
  }
}

TEST_CASE("weak duality and double duality") {
  const std::vector<Cone> cones = {
      rtrit_effect_cone(),
      make_cone(3, {v3(-1, 1, 1), v3(-1, -1, 1), v3(1, -1, 1), v3(1, 1, 1)}),
      make_cone(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)}),
      make_cone(2, {make_vec({1, 0}), make_vec({1, 1})}),
  };
  for (const Cone& c : cones) {
    const Cone dual = dual_cone(c);
    for (const RatVec& f : dual.generators) {
      for (const RatVec& g : c.generators) CHECK(dot(f, g) >= 0);
    }
    CHECK(cone_equal(dual_cone(dual), c));
  }
}

TEST_CASE("dual cone with a lineality part") {
  // A single ray in the plane: its dual is a halfplane, generated by the ray
  // itself plus +/- an orthogonal direction.
  const Cone ray = make_cone(2, {make_vec({1, 0})});
  const Cone dual = dual_cone(ray);
  for (const RatVec& g : dual.generators) CHECK(g(0) >= 0);
  CHECK(cone_membership(make_vec({0, 1}), dual).inside);
  CHECK(cone_membership(make_vec({0, -1}), dual).inside);
  CHECK(cone_membership(make_vec({1, 5}), dual).inside);
  CHECK_FALSE(cone_membership(make_vec({-1, 0}), dual).inside);
}

TEST_CASE("kernel basis") {
  SUBCASE("identity has trivial kernel") {
    RatMat eye = RatMat::Identity(3, 3);
    CHECK(kernel_basis(eye).empty());
  }
  SUBCASE("zero matrix has full kernel") {
    CHECK(kernel_basis(RatMat::Zero(2, 2)).size() == 2);
  }
  SUBCASE("square-bit decoherence fixed space is two-dimensional") {
    RatMat d(3, 3);
    d << 0, 0, -1, 0, 1, 0, 0, 0, 1;
    RatMat shifted = d - RatMat::Identity(3, 3);
    const std::vector<RatVec> basis = kernel_basis(shifted);
    REQUIRE(basis.size() == 2);
    // alpha1 and alpha2 lie in the fixed space
    for (const RatVec& fixed : {v3(-1, 1, 1), v3(-1, -1, 1)}) {
      RatMat stacked(3, static_cast<Index>(basis.size()) + 1);
      for (std::size_t k = 0; k < basis.size(); ++k) stacked.col(static_cast<Index>(k)) = basis[k];
      stacked.col(2) = fixed;
      CHECK(rank(stacked) == 2);
      CHECK(vec_eq(d * fixed, fixed));
    }
  }
}

TEST_CASE("solve_linear") {
  RatMat a(2, 2);
  a << 1, 1, 1, -1;
  const auto x = solve_linear(a, make_vec({1, 1}));
  REQUIRE(x.has_value());
  CHECK((*x)(0) == 1);
  CHECK((*x)(1) == 0);
  RatMat inconsistent(2, 1);
  inconsistent << 1, 1;
  CHECK_FALSE(solve_linear(inconsistent, make_vec({1, 2})).has_value());
}
