#include "gptforge/cone.hpp"

#include <algorithm>
#include <stdexcept>

#include "gptforge/feasibility.hpp"
#include "gptforge/linalg.hpp"

namespace gptforge {

RatVec canonical_ray(const RatVec& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) {
      RatVec out = v;
      const Rat scale = Rat(1) / abs(v(i));
      for (Index j = 0; j < out.size(); ++j) out(j) *= scale;
      return out;
    }
  }
  throw std::invalid_argument("canonical_ray: zero vector");
}

namespace {

void push_unique(std::vector<RatVec>& rays, const RatVec& candidate) {
  for (const RatVec& r : rays) {
    if (vec_eq(r, candidate)) return;
  }
  rays.push_back(candidate);
}

}  // namespace

Cone make_cone(Index ambient_dim, const std::vector<RatVec>& generators) {
  Cone cone;
  cone.ambient_dim = ambient_dim;
  for (const RatVec& g : generators) {
    if (g.size() != ambient_dim) throw std::invalid_argument("make_cone: dimension mismatch");
    if (is_zero_vec(g)) continue;
    push_unique(cone.generators, canonical_ray(g));
  }
  return cone;
}

ConeMembership cone_membership(const RatVec& v, const Cone& cone) {
  if (v.size() != cone.ambient_dim) {
    throw std::invalid_argument("cone_membership: dimension mismatch");
  }
  const Index m = static_cast<Index>(cone.generators.size());
  if (is_zero_vec(v)) return {true, RatVec::Zero(m)};
  if (m == 0) return {false, {}};
  RatMat a(cone.ambient_dim, m);
  for (Index k = 0; k < m; ++k) a.col(k) = cone.generators[static_cast<std::size_t>(k)];
  Feasibility f = solve_feasibility(a, v);
  if (!f.feasible) return {false, {}};
  return {true, f.assignment};
}

namespace {

/// Double description on a pointed cone {y in R^r : a y >= 0}, rank(a) = r.
/// An initial simplicial description comes from the first row subset (in input
/// order) that reaches full rank; the remaining rows are inserted one at a
/// time. Two rays are adjacent iff the processed rows vanishing on both have
/// rank r - 2.
std::vector<RatVec> double_description_pointed(const RatMat& a) {
  const Index r = a.cols();
  std::vector<Index> initial;
  {
    RatMat probe(0, r);
    for (Index i = 0; i < a.rows() && static_cast<Index>(initial.size()) < r; ++i) {
      RatMat trial(probe.rows() + 1, r);
      trial.topRows(probe.rows()) = probe;
      trial.row(probe.rows()) = a.row(i);
      if (rank(trial) > probe.rows()) {
        probe = trial;
        initial.push_back(i);
      }
    }
    if (static_cast<Index>(initial.size()) < r) {
      throw std::logic_error("double description requires full-rank constraints");
    }
  }

  RatMat a_init(r, r);
  for (Index k = 0; k < r; ++k) a_init.row(k) = a.row(initial[static_cast<std::size_t>(k)]);
  // Rays of {y : a_init y >= 0} are the columns of a_init^{-1}.
  std::vector<RatVec> rays;
  for (Index k = 0; k < r; ++k) {
    RatVec unit = RatVec::Zero(r);
    unit(k) = 1;
    auto col = solve_linear(a_init, unit);
    if (!col) throw std::logic_error("initial basis not invertible");
    rays.push_back(canonical_ray(*col));
  }

  std::vector<Index> processed = initial;
  const auto adjacent = [&](const RatVec& p, const RatVec& q) {
    std::vector<Index> common;
    for (Index i : processed) {
      if (a.row(i).dot(p) == 0 && a.row(i).dot(q) == 0) common.push_back(i);
    }
    if (static_cast<Index>(common.size()) < r - 2) return false;
    RatMat sub(static_cast<Index>(common.size()), r);
    for (std::size_t k = 0; k < common.size(); ++k) sub.row(static_cast<Index>(k)) = a.row(common[k]);
    return rank(sub) == r - 2;
  };

  for (Index i = 0; i < a.rows(); ++i) {
    if (std::find(processed.begin(), processed.end(), i) != processed.end()) continue;
    std::vector<RatVec> pos, zero, neg;
    std::vector<Rat> pos_val, neg_val;
    for (const RatVec& ray : rays) {
      const Rat val = a.row(i).dot(ray);
      if (val > 0) {
        pos.push_back(ray);
        pos_val.push_back(val);
      } else if (val < 0) {
        neg.push_back(ray);
        neg_val.push_back(val);
      } else {
        zero.push_back(ray);
      }
    }
    std::vector<RatVec> next = pos;
    for (const RatVec& z : zero) push_unique(next, z);
    for (std::size_t p = 0; p < pos.size(); ++p) {
      for (std::size_t n = 0; n < neg.size(); ++n) {
        if (!adjacent(pos[p], neg[n])) continue;
        // positive combination killing constraint i
        RatVec mix = pos_val[p] * neg[n] - neg_val[n] * pos[p];
        if (!is_zero_vec(mix)) push_unique(next, canonical_ray(mix));
      }
    }
    rays = std::move(next);
    processed.push_back(i);
  }
  return rays;
}

}  // namespace

Cone dual_cone(const Cone& cone) {
  if (cone.generators.empty()) throw std::invalid_argument("dual_cone: no generators");
  const Index d = cone.ambient_dim;
  const Index m = static_cast<Index>(cone.generators.size());
  RatMat g(m, d);
  for (Index i = 0; i < m; ++i) g.row(i) = cone.generators[static_cast<std::size_t>(i)].transpose();

  // Lineality directions of the dual: functionals vanishing on every generator.
  const std::vector<RatVec> lineality = kernel_basis(g);

  // The pointed part lives in the row space of g; with f = basis * y the
  // constraints become (g * basis) y >= 0 of full column rank.
  RatMat reduced = g;
  const std::vector<Index> pivots = rref(reduced);
  const Index r = static_cast<Index>(pivots.size());
  std::vector<RatVec> rays;
  if (r > 0) {
    RatMat basis(d, r);
    for (Index k = 0; k < r; ++k) basis.col(k) = reduced.row(k).transpose();
    const RatMat constraints = g * basis;
    if (r == 1) {
      // One-dimensional pointed part: a single candidate direction survives
      // iff it satisfies every constraint.
      bool plus_ok = true, minus_ok = true;
      for (Index i = 0; i < m; ++i) {
        if (constraints(i, 0) < 0) plus_ok = false;
        if (constraints(i, 0) > 0) minus_ok = false;
      }
      if (plus_ok) rays.push_back(basis.col(0));
      if (minus_ok && !plus_ok) rays.push_back(RatVec(-basis.col(0)));
    } else {
      for (const RatVec& y : double_description_pointed(constraints)) {
        rays.push_back(basis * y);
      }
    }
  }
  for (const RatVec& k : lineality) {
    rays.push_back(k);
    rays.push_back(RatVec(-k));
  }
  return make_cone(d, rays);
}

bool cone_contains(const Cone& outer, const Cone& inner) {
  if (outer.ambient_dim != inner.ambient_dim) return false;
  for (const RatVec& g : inner.generators) {
    if (!cone_membership(g, outer).inside) return false;
  }
  return true;
}

bool cone_equal(const Cone& a, const Cone& b) {
  return cone_contains(a, b) && cone_contains(b, a);
}

}  // namespace gptforge
