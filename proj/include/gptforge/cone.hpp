#pragma once

#include <optional>
#include <vector>

#include "gptforge/rational.hpp"

namespace gptforge {

/// A polyhedral cone in V-representation: all nonnegative combinations of a
/// finite generator list. Generators are kept canonical (first nonzero
/// coordinate scaled to absolute value 1) and deduplicated.
struct Cone {
  Index ambient_dim = 0;
  std::vector<RatVec> generators;
};

/// Scales a nonzero vector so its first nonzero coordinate becomes +1 or -1.
RatVec canonical_ray(const RatVec& v);

/// Builds a cone from arbitrary generators: drops zero vectors, canonicalizes,
/// deduplicates. Throws std::invalid_argument on dimension mismatch.
Cone make_cone(Index ambient_dim, const std::vector<RatVec>& generators);

struct ConeMembership {
  bool inside = false;
  RatVec coefficients;  // certifies v = sum coeff_k * generator_k when inside
};

ConeMembership cone_membership(const RatVec& v, const Cone& cone);

/// V-representation of {f : <f, g> >= 0 for every generator g}, by the double
/// description method. Constraints are inserted in input order; ray adjacency
/// is decided by a rank test, so the output order is deterministic. When the
/// generators do not span the ambient space the dual has a lineality part,
/// returned as +/- pairs of kernel basis vectors.
Cone dual_cone(const Cone& cone);

/// True when every generator of inner lies in outer.
bool cone_contains(const Cone& outer, const Cone& inner);

/// Mutual containment.
bool cone_equal(const Cone& a, const Cone& b);

}  // namespace gptforge
