#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gptforge/classicality.hpp"
#include "gptforge/system.hpp"
#include "gptforge/theories.hpp"

using namespace gptforge;

namespace {

const Rat half(1, 2);

Measurement dual_basis_measurement(const System& trit) {
  return make_measurement(trit, {trit.effects[0], trit.effects[1], trit.effects[2]});
}

std::vector<State> trit_vertex_states(const System& trit) {
  return {make_state(trit, trit.states[0]), make_state(trit, trit.states[1]),
          make_state(trit, trit.states[2])};
}

}  // namespace

TEST_CASE("validate_system on the built-ins") {
  CHECK(validate_system(classical_simplex(3)).ok);
  CHECK(validate_system(restricted_trit()).ok);
  CHECK(validate_system(classical_simplex(4)).ok);
}

TEST_CASE("validate_system catches a broken unit") {
  System trit = classical_simplex(3);
  trit.unit = make_vec({1, 1, 0});
  const ValidationResult r = validate_system(trit);
  CHECK_FALSE(r.ok);
  CHECK(r.message.find("normalization") != std::string::npos);
  CHECK(r.message.find("generator 2") != std::string::npos);
}

TEST_CASE("effect validity") {
  const System rtrit = restricted_trit();
  SUBCASE("zero vector is a valid effect") {
    CHECK(is_valid_effect(rtrit, RatVec::Zero(3)).valid);
  }
  SUBCASE("twice a midpoint effect is not") {
    // 2 e13 reads 1 on the first vertex and 0 on the second, but its
    // complement is a bare dual-basis effect, which the restriction forbids.
    const RatVec twice = 2 * rtrit.effects[1];
    const EffectCheck c = is_valid_effect(rtrit, twice);
    CHECK_FALSE(c.valid);
    CHECK(c.reason.find("complement") != std::string::npos);
  }
  SUBCASE("dual basis effects are valid in the unrestricted trit") {
    const System trit = classical_simplex(3);
    CHECK(is_valid_effect(trit, trit.effects[0]).valid);
  }
}

TEST_CASE("coarse graining") {
  const System trit = classical_simplex(3);
  const Test mp = measure_and_prepare(dual_basis_measurement(trit), trit_vertex_states(trit));

  SUBCASE("singleton partition is the identity") {
    const Test same = coarse_grain(mp, {{0}, {1}, {2}});
    REQUIRE(same.branches.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(mat_eq(same.branches[i], mp.branches[i]));
  }
  SUBCASE("full merge yields a deterministic channel") {
    const Test merged = coarse_grain(mp, {{0, 1, 2}});
    REQUIRE(merged.branches.size() == 1);
    CHECK(validate_channel(trit, trit, merged.branches[0], true).ok);
    // for the classical trit the full decoherence is the identity
    CHECK(mat_eq(merged.branches[0], RatMat::Identity(3, 3)));
  }
  SUBCASE("merging two branches sums their matrices") {
    const Test merged = coarse_grain(mp, {{0, 1}, {2}});
    CHECK(mat_eq(merged.branches[0], RatMat(mp.branches[0] + mp.branches[1])));
    CHECK(mat_eq(merged.branches[1], mp.branches[2]));
  }
  SUBCASE("bad partitions are rejected") {
    CHECK_THROWS_AS(coarse_grain(mp, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(coarse_grain(mp, {{0, 0}, {1}, {2}}), std::invalid_argument);
  }
}

TEST_CASE("measure-and-prepare") {
  const System trit = classical_simplex(3);
  SUBCASE("the unit measurement prepares a constant channel") {
    const Measurement u_only = make_measurement(trit, {trit.unit});
    const State rho = make_state(trit, make_vec({half, half, 0}));
    const Test t = measure_and_prepare(u_only, {rho});
    REQUIRE(t.branches.size() == 1);
    for (const RatVec& g : trit.states) {
      CHECK(vec_eq(RatVec(t.branches[0] * g), rho.vec));
    }
  }
  SUBCASE("distinguishing measurement with vertex preparations gives the decoherence branches") {
    const Test t = measure_and_prepare(dual_basis_measurement(trit), trit_vertex_states(trit));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(mat_eq(t.branches[i], outer(trit.states[i], trit.effects[i])));
    }
  }
  SUBCASE("square-bit branches fix both classical vertices") {
    const System sq = square_bit();
    const Measurement m = make_measurement(sq, {sq.effects[0], sq.effects[1]});
    const Test t = measure_and_prepare(m, {make_state(sq, sq.states[0]), make_state(sq, sq.states[1])});
    RatMat sum = t.branches[0] + t.branches[1];
    CHECK(vec_eq(RatVec(sum * sq.states[0]), sq.states[0]));
    CHECK(vec_eq(RatVec(sum * sq.states[1]), sq.states[1]));
  }
  SUBCASE("length mismatch throws") {
    std::vector<State> short_list = trit_vertex_states(trit);
    short_list.pop_back();
    CHECK_THROWS_AS(measure_and_prepare(dual_basis_measurement(trit), short_list),
                    std::invalid_argument);
  }
}

TEST_CASE("apply") {
  const System sq = square_bit();
  const RatMat mid_matrix = outer(sq.states[0], sq.effects[0]) + outer(sq.states[1], sq.effects[1]);
  SUBCASE("identity does nothing") {
    const State rho = make_state(sq, make_vec({0, 0, 1}));
    const State out = apply(sq, RatMat(RatMat::Identity(3, 3)), rho);
    CHECK(vec_eq(out.vec, rho.vec));
    CHECK(out.norm == 1);
  }
  SUBCASE("the square-bit decoherence purifies an edge midpoint") {
    const State mixed = make_state(sq, RatVec(half * (sq.states[0] + sq.states[3])));
    const State out = apply(sq, mid_matrix, mixed);
    CHECK(vec_eq(out.vec, sq.states[0]));
    CHECK(out.norm == 1);
  }
  SUBCASE("a branch annihilates the orthogonal vertex") {
    const RatMat branch = outer(sq.states[0], sq.effects[0]);
    const State out = apply(sq, branch, make_state(sq, sq.states[1]));
    CHECK(is_zero_vec(out.vec));
    CHECK(out.norm == 0);
  }
}

TEST_CASE("tomographic equality") {
  const System rtrit = restricted_trit();
  SUBCASE("reflexive") {
    CHECK(tomographically_equal(rtrit, rtrit.states[0], rtrit.states[0]));
  }
  SUBCASE("e13 separates the first two vertices") {
    CHECK_FALSE(tomographically_equal(rtrit, rtrit.states[0], rtrit.states[1]));
    CHECK(dot(rtrit.effects[1], rtrit.states[0]) == half);
    CHECK(dot(rtrit.effects[1], rtrit.states[1]) == 0);
  }
  SUBCASE("vectors differing outside the effect span are identified") {
    System blunt;
    blunt.name = "blunt";
    blunt.dim = 2;
    blunt.unit = make_vec({1, 0});
    blunt.states = {make_vec({1, 0}), make_vec({1, 1})};
    blunt.effects = {blunt.unit};
    REQUIRE(validate_system(blunt).ok);
    CHECK(tomographically_equal(blunt, make_vec({1, 0}), make_vec({1, 7})));
  }
}

TEST_CASE("measurement outcomes form exact probability distributions") {
  const std::vector<System> systems = {classical_simplex(2), classical_simplex(3),
                                       restricted_trit(), square_bit()};
  for (const System& sys : systems) {
    std::vector<Measurement> measurements;
    if (sys.name == "rtrit") {
      // the three midpoint effects themselves form a measurement
      measurements.push_back(make_measurement(sys, {sys.effects[0], sys.effects[1], sys.effects[2]}));
    } else if (sys.name == "sqbit") {
      measurements.push_back(make_measurement(sys, {sys.effects[0], sys.effects[1]}));
      measurements.push_back(make_measurement(sys, {sys.effects[2], sys.effects[3]}));
    } else {
      std::vector<RatVec> all(sys.effects.begin(), sys.effects.end());
      measurements.push_back(make_measurement(sys, all));
    }
    // a few exact mixtures of the first two generators
    for (int k = 0; k <= 4; ++k) {
      const Rat lambda(k, 4);
      const RatVec v = lambda * sys.states[0] + (1 - lambda) * sys.states[1];
      const State rho = make_state(sys, v);
      for (const Measurement& m : measurements) {
        Rat total = 0;
        for (const RatVec& e : m.effects) {
          const Rat p = dot(e, rho.vec);
          CHECK(p >= 0);
          CHECK(p <= 1);
          total += p;
        }
        CHECK(total == 1);
      }
    }
  }
}

TEST_CASE("apply preserves cone membership and tests coarse-grain to channels") {
  const System sq = square_bit();
  const Measurement m = make_measurement(sq, {sq.effects[0], sq.effects[1]});
  const Test t =
      measure_and_prepare(m, {make_state(sq, sq.states[0]), make_state(sq, sq.states[1])});
  CHECK(validate_test(sq, sq, t).ok);
  const Test full = coarse_grain(t, {{0, 1}});
  CHECK(validate_channel(sq, sq, full.branches[0], true).ok);
  const Cone cone = sq.state_cone();
  for (const RatVec& g : sq.states) {
    const State out = apply(sq, full.branches[0], make_state(sq, g));
    CHECK(cone_membership(out.vec, cone).inside);
  }
  // applying the merged channel twice equals once on every generator
  const RatMat d = full.branches[0];
  for (const RatVec& g : sq.states) {
    CHECK(vec_eq(RatVec(d * (d * g)), RatVec(d * g)));
  }
}
