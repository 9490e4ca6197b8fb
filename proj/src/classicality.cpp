#include "gptforge/classicality.hpp"

#include <algorithm>
#include <stdexcept>

#include "gptforge/feasibility.hpp"
#include "gptforge/linalg.hpp"
#include "gptforge/theories.hpp"

namespace gptforge {

std::optional<Measurement> is_distinguishable(const System& sys,
                                              const std::vector<RatVec>& states) {
  const Index n = static_cast<Index>(states.size());
  if (n < 2) throw std::invalid_argument("is_distinguishable: need at least two states");
  for (const RatVec& s : states) {
    if (s.size() != sys.dim) throw std::invalid_argument("is_distinguishable: dimension mismatch");
    if (dot(sys.unit, s) != 1) throw std::invalid_argument("is_distinguishable: state not normalized");
  }
  const Index m = static_cast<Index>(sys.effects.size());

  // Unknowns lambda_{ik} >= 0 with a_i = sum_k lambda_{ik} e_k, subject to
  // (a_i|rho_j) = delta_ij and sum_i a_i = u.
  const Index vars = n * m;
  const Index rows = n * n + sys.dim;
  RatMat a = RatMat::Zero(rows, vars);
  RatVec b = RatVec::Zero(rows);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Index row = i * n + j;
      for (Index k = 0; k < m; ++k) {
        a(row, i * m + k) = dot(sys.effects[static_cast<std::size_t>(k)],
                                states[static_cast<std::size_t>(j)]);
      }
      b(row) = (i == j) ? 1 : 0;
    }
  }
  for (Index c = 0; c < sys.dim; ++c) {
    const Index row = n * n + c;
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < m; ++k) {
        a(row, i * m + k) = sys.effects[static_cast<std::size_t>(k)](c);
      }
    }
    b(row) = sys.unit(c);
  }

  const Feasibility f = solve_feasibility(a, b);
  if (!f.feasible) return std::nullopt;
  Measurement w;
  for (Index i = 0; i < n; ++i) {
    RatVec effect = RatVec::Zero(sys.dim);
    for (Index k = 0; k < m; ++k) {
      effect += f.assignment(i * m + k) * sys.effects[static_cast<std::size_t>(k)];
    }
    w.effects.push_back(std::move(effect));
  }
  return w;
}

namespace {

std::vector<RatVec> pick_states(const System& sys, const std::vector<int>& indices) {
  std::vector<RatVec> out;
  for (int i : indices) out.push_back(sys.states[static_cast<std::size_t>(i)]);
  return out;
}

std::optional<ClassicalSet> finish_set(const System& sys, std::vector<int> indices) {
  if (indices.size() < 2) return std::nullopt;
  auto witness = is_distinguishable(sys, pick_states(sys, indices));
  if (!witness) return std::nullopt;
  ClassicalSet cs;
  cs.pure_indices = std::move(indices);
  cs.measurement = std::move(*witness);
  return cs;
}

}  // namespace

std::optional<ClassicalSet> extend_to_maximal(const System& sys, std::vector<int> seed,
                                              bool exhaustive) {
  const int n = static_cast<int>(sys.states.size());
  std::sort(seed.begin(), seed.end());
  for (std::size_t i = 0; i < seed.size(); ++i) {
    if (seed[i] < 0 || seed[i] >= n) throw std::invalid_argument("extend_to_maximal: bad index");
    if (i > 0 && seed[i] == seed[i - 1]) {
      throw std::invalid_argument("extend_to_maximal: duplicate index");
    }
  }
  if (seed.size() >= 2 && !is_distinguishable(sys, pick_states(sys, seed))) {
    throw std::invalid_argument("extend_to_maximal: seed is not distinguishable");
  }

  if (exhaustive) {
    if (n > 12) throw std::invalid_argument("extend_to_maximal: exhaustive mode capped at 12");
    // Largest distinguishable superset of the seed; lexicographically first
    // among equal sizes.
    for (int size = n; size >= std::max<int>(2, static_cast<int>(seed.size())); --size) {
      std::vector<bool> select(static_cast<std::size_t>(n), false);
      std::fill(select.begin(), select.begin() + size, true);
      // iterate over combinations in lexicographic order of index sets
      std::vector<std::vector<int>> combos;
      do {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) {
          if (select[static_cast<std::size_t>(i)]) idx.push_back(i);
        }
        combos.push_back(idx);
      } while (std::prev_permutation(select.begin(), select.end()));
      std::sort(combos.begin(), combos.end());
      for (std::vector<int>& idx : combos) {
        if (!std::includes(idx.begin(), idx.end(), seed.begin(), seed.end())) continue;
        if (auto cs = finish_set(sys, idx)) {
          cs->maximal = true;
          return cs;
        }
      }
    }
    return std::nullopt;
  }

  std::vector<int> current = seed;
  for (int g = 0; g < n; ++g) {
    if (std::find(current.begin(), current.end(), g) != current.end()) continue;
    std::vector<int> enlarged = current;
    enlarged.push_back(g);
    std::sort(enlarged.begin(), enlarged.end());
    if (enlarged.size() == 1 || is_distinguishable(sys, pick_states(sys, enlarged))) {
      current = std::move(enlarged);
    }
  }
  auto cs = finish_set(sys, current);
  if (cs) cs->maximal = true;
  return cs;
}

bool exists_distinguishable_pair(const System& sys) {
  const int n = static_cast<int>(sys.states.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (is_distinguishable(sys, {sys.states[static_cast<std::size_t>(i)],
                                   sys.states[static_cast<std::size_t>(j)]})) {
        return true;
      }
    }
  }
  return false;
}

RatVec classical_effect_quotient(const System& sys, const ClassicalSet& cs, const RatVec& xi) {
  if (!cone_membership(xi, sys.effect_cone()).inside) {
    throw std::invalid_argument("classical_effect_quotient: xi outside the effect cone");
  }
  RatVec out = RatVec::Zero(sys.dim);
  for (std::size_t i = 0; i < cs.pure_indices.size(); ++i) {
    const RatVec& alpha = sys.states[static_cast<std::size_t>(cs.pure_indices[i])];
    out += dot(xi, alpha) * cs.measurement.effects[i];
  }
  return out;
}

bool is_classical_theory(const System& sys) {
  if (!sys.generators_exhaustive) {
    throw std::invalid_argument("is_classical_theory: generator list not declared exhaustive");
  }
  const Index n = static_cast<Index>(sys.states.size());
  std::vector<RatVec> distinguishing;
  if (n == 1) {
    distinguishing.push_back(sys.unit);
  } else {
    auto witness = is_distinguishable(sys, sys.states);
    if (!witness) return false;
    distinguishing = witness->effects;
  }

  // Consequences of the proof, checked as internal consistency.
  RatMat gens(sys.dim, n);
  for (Index i = 0; i < n; ++i) gens.col(i) = sys.states[static_cast<std::size_t>(i)];
  if (rank(gens) != n) {
    throw std::logic_error("is_classical_theory: distinguishable generators must be independent");
  }
  if (!cone_equal(sys.effect_cone(), make_cone(sys.dim, distinguishing))) {
    throw std::logic_error(
        "is_classical_theory: effect cone must be generated by the distinguishing effects");
  }
  if (!is_unrestricted(sys)) {
    throw std::logic_error("is_classical_theory: a classical theory cannot be restricted");
  }
  return true;
}

}  // namespace gptforge
