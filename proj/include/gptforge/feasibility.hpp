#pragma once

#include "gptforge/rational.hpp"

namespace gptforge {

struct Feasibility {
  bool feasible = false;
  RatVec assignment;  // one entry per variable when feasible
};

/// Decides whether a x = b admits a solution with x >= 0, by exact simplex
/// phase one with Bland's anti-cycling rule. The returned assignment satisfies
/// every equality exactly. Throws std::invalid_argument on shape mismatch.
Feasibility solve_feasibility(const RatMat& a, const RatVec& b);

struct LpOutcome {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  Rat value;
  RatVec solution;
};

/// max c^T x subject to a x = b, x >= 0 (exact two-phase simplex, Bland).
LpOutcome lp_maximize(const RatMat& a, const RatVec& b, const RatVec& c);

}  // namespace gptforge
