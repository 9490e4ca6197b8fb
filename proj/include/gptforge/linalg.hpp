#pragma once

#include <optional>
#include <vector>

#include "gptforge/rational.hpp"

namespace gptforge {

/// In-place reduced row echelon form. Returns the pivot column indices.
std::vector<Index> rref(RatMat& m);

Index rank(RatMat m);

/// Exact basis of the null space of m. Empty result means trivial kernel.
std::vector<RatVec> kernel_basis(const RatMat& m);

/// Exact solve of a x = b. Returns nullopt when inconsistent; free variables
/// (if any) are set to zero.
std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b);

}  // namespace gptforge
