#include "gptforge/feasibility.hpp"

#include <stdexcept>

namespace gptforge {
namespace {

/// Dense exact simplex over the system a x = b, x >= 0, with one artificial
/// variable per row. Column layout: structural [0, n), artificial [n, n+m),
/// right-hand side last. Bland's rule everywhere: entering variable is the
/// lowest-index column with negative reduced cost, leaving row breaks ratio
/// ties by lowest basic column index.
class Simplex {
 public:
  Simplex(const RatMat& a, const RatVec& b)
      : m_(a.rows()), n_(a.cols()), tab_(a.rows(), a.cols() + a.rows() + 1) {
    tab_.setZero();
    for (Index i = 0; i < m_; ++i) {
      const bool flip = b(i) < 0;
      for (Index j = 0; j < n_; ++j) tab_(i, j) = flip ? -a(i, j) : a(i, j);
      tab_(i, n_ + i) = 1;
      tab_(i, rhs()) = flip ? -b(i) : b(i);
      basis_.push_back(n_ + i);
    }
  }

  enum class Step { optimal, pivoted, unbounded };

  // Minimizes cost^T x. structural_only restricts entering candidates.
  Step bland_step(const RatVec& cost, bool structural_only) {
    const Index limit = structural_only ? n_ : n_ + m_;
    for (Index j = 0; j < limit; ++j) {
      if (is_basic(j)) continue;
      Rat d = cost(j);
      for (Index i = 0; i < m_; ++i) d -= cost(basis_[static_cast<std::size_t>(i)]) * tab_(i, j);
      if (d >= 0) continue;
      Index leave = -1;
      Rat best;
      for (Index i = 0; i < m_; ++i) {
        if (tab_(i, j) <= 0) continue;
        const Rat ratio = tab_(i, rhs()) / tab_(i, j);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[static_cast<std::size_t>(i)] <
                                  basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return Step::unbounded;
      pivot(leave, j);
      return Step::pivoted;
    }
    return Step::optimal;
  }

  void run_to_optimum(const RatVec& cost, bool structural_only) {
    while (true) {
      const Step s = bland_step(cost, structural_only);
      if (s == Step::optimal) return;
      if (s == Step::unbounded) throw std::logic_error("phase one cannot be unbounded");
    }
  }

  Rat objective(const RatVec& cost) const {
    Rat v = 0;
    for (Index i = 0; i < m_; ++i) v += cost(basis_[static_cast<std::size_t>(i)]) * tab_(i, rhs());
    return v;
  }

  // After a zero-cost phase one, pivots basic artificials onto structural
  // columns where possible. Rows with no structural entry are redundant and
  // keep their artificial at level zero; such rows can never pivot again.
  void drive_out_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      for (Index j = 0; j < n_; ++j) {
        if (tab_(i, j) != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  RatVec structural_solution() const {
    RatVec x = RatVec::Zero(n_);
    for (Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) {
        x(basis_[static_cast<std::size_t>(i)]) = tab_(i, rhs());
      }
    }
    return x;
  }

  Index total_vars() const { return n_ + m_; }

 private:
  Index rhs() const { return n_ + m_; }

  bool is_basic(Index col) const {
    for (Index b : basis_) {
      if (b == col) return true;
    }
    return false;
  }

  void pivot(Index row, Index col) {
    const Rat inv = Rat(1) / tab_(row, col);
    for (Index c = 0; c <= rhs(); ++c) tab_(row, c) *= inv;
    for (Index i = 0; i < m_; ++i) {
      if (i == row || tab_(i, col) == 0) continue;
      const Rat factor = tab_(i, col);
      for (Index c = 0; c <= rhs(); ++c) tab_(i, c) -= factor * tab_(row, c);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Index m_, n_;
  RatMat tab_;
  std::vector<Index> basis_;
};

RatVec phase_one_cost(Index n, Index m) {
  RatVec c = RatVec::Zero(n + m);
  for (Index j = n; j < n + m; ++j) c(j) = 1;
  return c;
}

}  // namespace

Feasibility solve_feasibility(const RatMat& a, const RatVec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_feasibility: shape mismatch");
  Simplex s(a, b);
  const RatVec c1 = phase_one_cost(a.cols(), a.rows());
  s.run_to_optimum(c1, false);
  if (s.objective(c1) != 0) return {false, {}};
  s.drive_out_artificials();
  return {true, s.structural_solution()};
}

LpOutcome lp_maximize(const RatMat& a, const RatVec& b, const RatVec& c) {
  if (a.rows() != b.size() || a.cols() != c.size()) {
    throw std::invalid_argument("lp_maximize: shape mismatch");
  }
  Simplex s(a, b);
  const RatVec c1 = phase_one_cost(a.cols(), a.rows());
  s.run_to_optimum(c1, false);
  LpOutcome out;
  if (s.objective(c1) != 0) {
    out.status = LpOutcome::Status::infeasible;
    return out;
  }
  s.drive_out_artificials();
  RatVec c2 = RatVec::Zero(s.total_vars());
  for (Index j = 0; j < c.size(); ++j) c2(j) = -c(j);  // maximize = minimize negation
  while (true) {
    const Simplex::Step step = s.bland_step(c2, true);
    if (step == Simplex::Step::unbounded) {
      out.status = LpOutcome::Status::unbounded;
      return out;
    }
    if (step == Simplex::Step::optimal) break;
  }
  out.status = LpOutcome::Status::optimal;
  out.solution = s.structural_solution();
  out.value = c.dot(out.solution);
  return out;
}

}  // namespace gptforge
