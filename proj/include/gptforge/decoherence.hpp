#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gptforge/classicality.hpp"

namespace gptforge {

/// Measurement-induced decoherence on a maximal classical set: the channel
/// sum_i |alpha_i)(a_i|. Throws when the set is not maximal (the branches
/// would not coarse-grain to a channel).
RatMat mid(const System& sys, const ClassicalSet& cs);

/// Checks the two complete-decoherence clauses on the state generators
/// (enough by convexity on a polyhedral cone): every generator maps into the
/// classical simplex, and every classical pure state is fixed exactly.
/// Throws when d is not a deterministic channel.
bool is_complete_decoherence(const System& sys, const RatMat& d, const ClassicalSet& cs);

struct DecoherenceReport {
  RatMat channel;
  ClassicalSet classical_set;
  bool is_complete = false;
  bool idempotent = false;                // full matrix equality D^2 = D
  bool fixes_classical_effects = false;   // a_i . D = a_i for every i
  std::vector<std::pair<RatVec, RatVec>> purity_increasing_inputs;
};

DecoherenceReport mid_property_suite(const System& sys, const ClassicalSet& cs);

/// Images of the effect generators under e -> e.D. Each image coincides with
/// the canonical classical quotient of its source, and the image set spans
/// the same classes as the distinguishing effects; both facts are asserted.
std::vector<RatVec> decohered_effect_set(const System& sys, const ClassicalSet& cs);

/// Mixed states that decohere to pure outputs: for every distinguishing
/// effect a_i scoring 1 on a generator psi outside the set, the midpoint
/// (alpha_i + psi)/2 maps to alpha_i. Verified exactly before emission.
std::vector<std::pair<RatVec, RatVec>> purity_increase_scan(const System& sys,
                                                            const ClassicalSet& cs);

struct DecoherenceUniqueness {
  bool unique = false;
  std::optional<RatMat> second;  // a complete decoherence different from the MID
};

/// Decides whether the MID is the only complete decoherence on the set, by
/// maximizing and minimizing every matrix coordinate over the polytope of
/// channels satisfying both clauses. Any coordinate with slack yields a
/// second decoherence, returned with the verdict.
DecoherenceUniqueness complete_decoherence_uniqueness(const System& sys, const ClassicalSet& cs);

}  // namespace gptforge
