#include "gptforge/linalg.hpp"

#include <stdexcept>

namespace gptforge {

std::vector<Index> rref(RatMat& m) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index pivot = -1;
    for (Index r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) m.row(pivot).swap(m.row(row));
    const Rat inv = Rat(1) / m(row, col);
    for (Index c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Rat factor = m(r, col);
      for (Index c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Index rank(RatMat m) { return static_cast<Index>(rref(m).size()); }

std::vector<RatVec> kernel_basis(const RatMat& m) {
  RatMat r = m;
  const std::vector<Index> pivots = rref(r);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  std::vector<RatVec> basis;
  for (Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    RatVec v = RatVec::Zero(m.cols());
    v(free) = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      v(pivots[k]) = -r(static_cast<Index>(k), free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: shape mismatch");
  RatMat aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const std::vector<Index> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // 0 = 1 row
  RatVec x = RatVec::Zero(a.cols());
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    x(pivots[k]) = aug(static_cast<Index>(k), a.cols());
  }
  return x;
}

}  // namespace gptforge
