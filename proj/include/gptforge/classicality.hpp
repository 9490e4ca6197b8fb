#pragma once

#include <optional>
#include <vector>

#include "gptforge/system.hpp"

namespace gptforge {

/// A set of jointly distinguishable pure states together with the
/// distinguishing measurement: effect i gives exactly delta_ij on pure state
/// j. Classical sets need at least two states; single states carry no
/// classical information.
struct ClassicalSet {
  std::vector<int> pure_indices;  // ascending indices into System::states
  Measurement measurement;
  bool maximal = false;
};

/// Searches for a measurement {a_i} with (a_i|rho_j) = delta_ij, each a_i a
/// nonnegative combination of effect generators and the a_i summing to the
/// unit. Decided by exact linear feasibility. Requires n >= 2 normalized
/// states.
std::optional<Measurement> is_distinguishable(const System& sys,
                                              const std::vector<RatVec>& states);

/// Greedy maximal extension over state generators in ascending index order.
/// A mixed extender would imply a pure one (any refinement of a state scoring
/// 1 on a_0 scores 1 on every pure component), so generators suffice. Returns
/// nullopt when no classical set of size >= 2 contains the seed. With
/// exhaustive set, finds a maximum-size set instead (allowed only up to 12
/// generators).
std::optional<ClassicalSet> extend_to_maximal(const System& sys, std::vector<int> seed,
                                              bool exhaustive = false);

/// True iff some pair of state generators is distinguishable.
bool exists_distinguishable_pair(const System& sys);

/// Canonical representative sum_i (xi|alpha_i) a_i of the effect class of xi
/// restricted to the classical simplex. Throws when xi is outside the effect
/// cone.
RatVec classical_effect_quotient(const System& sys, const ClassicalSet& cs, const RatVec& xi);

/// True iff the full (declared-exhaustive) state generator list is jointly
/// distinguishable. On a true verdict the consequences of the proof are
/// asserted: generators linearly independent, effect cone generated by the
/// distinguishing effects, no restriction on effects.
bool is_classical_theory(const System& sys);

}  // namespace gptforge
