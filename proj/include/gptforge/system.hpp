#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gptforge/cone.hpp"
#include "gptforge/rational.hpp"

namespace gptforge {

/// A finite-dimensional system: extremal normalized states, effect-cone
/// generators, and the unique deterministic effect.
struct System {
  std::string name;
  Index dim = 0;
  std::vector<RatVec> states;   // normalized pure states, each extremal
  std::vector<RatVec> effects;  // generators of the effect cone
  RatVec unit;
  // Whether the state generator list is declared complete by its source.
  // Maximality-dependent verdicts are conditional on this declaration.
  bool generators_exhaustive = true;

  Cone state_cone() const { return make_cone(dim, states); }
  Cone effect_cone() const { return make_cone(dim, effects); }
};

struct ValidationResult {
  bool ok = true;
  std::string message;  // names the first violated invariant and the offending index
};

/// Checks the system invariants in a fixed order: shapes, state normalization,
/// effect range [0,1], unit in the effect cone, extremality of every state
/// generator. Violations are reported as values, not thrown.
ValidationResult validate_system(const System& sys);

/// Per-invariant results in check order, for reporting.
std::vector<std::pair<std::string, ValidationResult>> validate_system_detail(const System& sys);

/// A (possibly sub-normalized) state vector with its weight under the unit.
struct State {
  RatVec vec;
  Rat norm;
};

/// Validates cone membership and norm in (0, 1]; throws std::invalid_argument
/// on violation.
State make_state(const System& sys, const RatVec& v);
State sub_state(const System& sys, const RatVec& v);  // allows norm in [0,1]

struct EffectCheck {
  bool valid = false;
  std::string reason;
};

/// Valid effects satisfy e in Eff+ and unit - e in Eff+ (every effect must be
/// completable to a measurement).
EffectCheck is_valid_effect(const System& sys, const RatVec& v);

struct Measurement {
  std::vector<RatVec> effects;
};

/// Checks that the effects are valid and sum to the unit exactly.
Measurement make_measurement(const System& sys, std::vector<RatVec> effects);

/// A linear map between state spaces, stored as an out_dim x in_dim matrix.
struct Channel {
  RatMat matrix;
};

/// Positivity on the input state generators; for deterministic channels also
/// unit_out . matrix = unit_in.
ValidationResult validate_channel(const System& in, const System& out, const RatMat& matrix,
                                  bool deterministic);

/// A test: branches sharing input/output systems whose coarse-graining is a
/// channel.
struct Test {
  std::vector<RatMat> branches;
};

ValidationResult validate_test(const System& in, const System& out, const Test& test);

/// Branch j of the output is the sum over partition[j] of the input branches.
/// The partition must cover every branch index exactly once.
Test coarse_grain(const Test& test, const std::vector<std::vector<int>>& partition);

/// The test {|prepared_i)(effect_i|}.
Test measure_and_prepare(const Measurement& m, const std::vector<State>& prepared);

State apply(const System& out, const RatMat& channel, const State& s);

/// True iff every effect generator gives the same value on both vectors.
bool tomographically_equal(const System& sys, const RatVec& rho, const RatVec& sigma);

}  // namespace gptforge
