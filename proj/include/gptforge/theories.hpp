#pragma once

#include "gptforge/system.hpp"

namespace gptforge {

/// Classical theory on d point distributions: simplex states, full dual
/// effects, unit (1,...,1). Throws for d < 2.
System classical_simplex(int d);

/// The classical-trit state space with only the midpoint effects
/// e_ij = (a_i + a_j)/2 allowed. Has no distinguishable pure states.
System restricted_trit();

/// State space a square; satisfies the no-restriction hypothesis.
System square_bit();

/// True iff the effect cone equals the dual of the state cone.
bool is_unrestricted(const System& sys);

/// Replaces the effect generators by the extremal rays of the dual state
/// cone, each scaled to reach value 1 somewhere on the state generators.
System unrestricted_completion(const System& sys);

struct PartnerResult {
  int partner_index = -1;
  Measurement measurement;  // {u - a2, a2} distinguishing (psi, partner)
};

/// Constructive search for a pure state distinguishable from states[index]:
/// take the first dual-cone generator vanishing on it, rescale by its maximum
/// over the state generators, and return the first maximizer. Requires an
/// unrestricted system.
PartnerResult find_distinguishable_partner(const System& sys, int pure_index);

}  // namespace gptforge
