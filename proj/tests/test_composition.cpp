#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gptforge/composition.hpp"
#include "gptforge/decoherence.hpp"
#include "gptforge/linalg.hpp"
#include "gptforge/theories.hpp"

using namespace gptforge;

namespace {

ClassicalSet full_set(const System& sys) {
  auto cs = extend_to_maximal(sys, {});
  REQUIRE(cs.has_value());
  return *cs;
}

}  // namespace

TEST_CASE("minimal tensor product structure") {
  SUBCASE("bit x bit looks like the four-outcome simplex") {
    const Composite c = min_tensor(classical_simplex(2), classical_simplex(2));
    CHECK(c.base.dim == 4);
    CHECK(c.base.states.size() == 4);
    CHECK(c.base.effects.size() == 4);
    CHECK(validate_system(c.base).ok);
    CHECK(cone_equal(c.base.state_cone(), classical_simplex(4).state_cone()));
    CHECK(cone_equal(c.base.effect_cone(), classical_simplex(4).effect_cone()));
  }
  SUBCASE("two restricted trits have 9 pure states and 9 extreme effects") {
    const Composite c = parse_recipe("rtrit^2");
    CHECK(c.base.dim == 9);
    CHECK(c.base.states.size() == 9);
    CHECK(c.base.effects.size() == 9);
    CHECK(validate_system(c.base).ok);
    // product effects stay linearly independent
    RatMat effects(9, 9);
    for (Index k = 0; k < 9; ++k) effects.col(k) = c.base.effects[static_cast<std::size_t>(k)];
    CHECK(rank(effects) == 9);
  }
  SUBCASE("square bit x classical bit has 8 product pure states") {
    const Composite c = min_tensor(square_bit(), classical_simplex(2));
    CHECK(c.base.states.size() == 8);
    CHECK(validate_system(c.base).ok);
  }
}

TEST_CASE("marginals") {
  const Composite c = min_tensor(classical_simplex(2), classical_simplex(2));
  const System& bit = c.factors[0];
  SUBCASE("product states marginalize to their factors") {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        const State joint = make_state(c.base, kron(bit.states[i], bit.states[j]));
        CHECK(vec_eq(marginal(c, joint, {0}).vec, bit.states[i]));
        CHECK(vec_eq(marginal(c, joint, {1}).vec, bit.states[j]));
      }
    }
  }
  SUBCASE("the broadcast pair marginalizes to the pointer mixture") {
    const Rat half(1, 2);
    const RatVec v = half * kron(bit.states[0], bit.states[0]) +
                     half * kron(bit.states[1], bit.states[1]);
    const State joint = make_state(c.base, v);
    CHECK(vec_eq(marginal(c, joint, {0}).vec,
                 RatVec(half * bit.states[0] + half * bit.states[1])));
  }
  SUBCASE("keeping every factor is the identity") {
    const State joint = make_state(c.base, kron(bit.states[0], bit.states[1]));
    CHECK(vec_eq(marginal(c, joint, {0, 1}).vec, joint.vec));
  }
  SUBCASE("marginal commutes with convex mixtures") {
    const RatVec x = kron(bit.states[0], bit.states[1]);
    const RatVec y = kron(bit.states[1], bit.states[0]);
    const Rat third(1, 3);
    const State mix = make_state(c.base, RatVec(third * x + (1 - third) * y));
    const RatVec lhs = marginal(c, mix, {1}).vec;
    const RatVec rhs = third * marginal(c, make_state(c.base, x), {1}).vec +
                       (1 - third) * marginal(c, make_state(c.base, y), {1}).vec;
    CHECK(vec_eq(lhs, rhs));
  }
  SUBCASE("bad keep sets are rejected") {
    const State joint = make_state(c.base, kron(bit.states[0], bit.states[1]));
    CHECK_THROWS_AS(marginal(c, joint, {}), std::invalid_argument);
    CHECK_THROWS_AS(marginal(c, joint, {2}), std::invalid_argument);
  }
}

TEST_CASE("products of pure states stay pure") {
  CHECK(check_axiom_product_pure(min_tensor(classical_simplex(2), classical_simplex(2))));
  CHECK(check_axiom_product_pure(parse_recipe("rtrit^2")));
  CHECK(check_axiom_product_pure(min_tensor(square_bit(), classical_simplex(2))));
  CHECK(check_axiom_product_pure(min_tensor(square_bit(), square_bit())));
}

TEST_CASE("information locality on built-in composites") {
  SUBCASE("bit x bit with full sets") {
    const Composite c = min_tensor(classical_simplex(2), classical_simplex(2));
    CHECK(check_information_locality(c, full_set(c.factors[0]), full_set(c.factors[1])));
  }
  SUBCASE("trit x trit with full sets") {
    const Composite c = min_tensor(classical_simplex(3), classical_simplex(3));
    CHECK(check_information_locality(c, full_set(c.factors[0]), full_set(c.factors[1])));
  }
  SUBCASE("square bit x square bit with two-element sets") {
    // regression constant: the 4-element product set is maximal among the 16
    // product generators (exhaustive extension scan)
    const Composite c = min_tensor(square_bit(), square_bit());
    CHECK(check_information_locality(c, full_set(c.factors[0]), full_set(c.factors[1])));
  }
  SUBCASE("square bit x classical bit") {
    const Composite c = min_tensor(square_bit(), classical_simplex(2));
    CHECK(check_information_locality(c, full_set(c.factors[0]), full_set(c.factors[1])));
  }
}

TEST_CASE("composite classical sets") {
  SUBCASE("bit x bit gives a four-state set") {
    const Composite c = min_tensor(classical_simplex(2), classical_simplex(2));
    const ClassicalSet cs = composite_classical_set(c, full_set(c.factors[0]), full_set(c.factors[1]));
    CHECK(cs.pure_indices == std::vector<int>{0, 1, 2, 3});
    CHECK(cs.maximal);
  }
  SUBCASE("square bit x classical bit products satisfy the delta contract") {
    const Composite c = min_tensor(square_bit(), classical_simplex(2));
    const ClassicalSet cs = composite_classical_set(c, full_set(c.factors[0]), full_set(c.factors[1]));
    REQUIRE(cs.pure_indices.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(dot(cs.measurement.effects[i],
                  c.base.states[static_cast<std::size_t>(cs.pure_indices[j])]) ==
              ((i == j) ? 1 : 0));
      }
    }
  }
  SUBCASE("trit x trit gives the nine-state set") {
    const Composite c = min_tensor(classical_simplex(3), classical_simplex(3));
    const ClassicalSet cs = composite_classical_set(c, full_set(c.factors[0]), full_set(c.factors[1]));
    CHECK(cs.pure_indices.size() == 9);
    CHECK(cs.maximal);
  }
}

TEST_CASE("decoherence factorizes over minimal tensor products") {
  const auto check_pair = [](const System& a, const System& b) {
    const Composite c = min_tensor(a, b);
    CHECK(check_mid_factorization(c, full_set(a), full_set(b)));
  };
  check_pair(classical_simplex(2), classical_simplex(2));
  check_pair(classical_simplex(3), classical_simplex(3));
  check_pair(square_bit(), classical_simplex(2));
  check_pair(square_bit(), square_bit());
}

TEST_CASE("left-associated composition is associative up to the flat index order") {
  const Composite abc = parse_recipe("classical:2 x classical:2 x classical:2");
  CHECK(abc.factors.size() == 3);
  CHECK(abc.base.dim == 8);
  const Composite right = min_tensor(as_composite(classical_simplex(2)),
                                     min_tensor(classical_simplex(2), classical_simplex(2)));
  REQUIRE(right.base.dim == 8);
  for (std::size_t g = 0; g < 8; ++g) {
    CHECK(vec_eq(abc.base.states[g], right.base.states[g]));
  }
}

TEST_CASE("recipe parsing") {
  CHECK(parse_recipe("classical:4").base.dim == 4);
  CHECK(parse_recipe("rtrit^3").base.dim == 27);
  CHECK(parse_recipe("sqbit x classical:2").base.dim == 6);
  CHECK_THROWS_AS(parse_recipe("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(parse_recipe("rtrit^0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_recipe("rtrit^6", 100), std::invalid_argument);  // exceeds the cap
}
