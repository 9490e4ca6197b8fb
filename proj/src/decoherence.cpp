#include "gptforge/decoherence.hpp"

#include <stdexcept>

#include "gptforge/feasibility.hpp"
#include "gptforge/linalg.hpp"

namespace gptforge {

namespace {

RatMat measure_and_prepare_channel(const System& sys, const ClassicalSet& cs) {
  RatMat d = RatMat::Zero(sys.dim, sys.dim);
  for (std::size_t i = 0; i < cs.pure_indices.size(); ++i) {
    d += outer(sys.states[static_cast<std::size_t>(cs.pure_indices[i])],
               cs.measurement.effects[i]);
  }
  return d;
}

}  // namespace

RatMat mid(const System& sys, const ClassicalSet& cs) {
  if (!cs.maximal) throw std::invalid_argument("mid: classical set must be maximal");
  return measure_and_prepare_channel(sys, cs);
}

bool is_complete_decoherence(const System& sys, const RatMat& d, const ClassicalSet& cs) {
  const ValidationResult ch = validate_channel(sys, sys, d, true);
  if (!ch.ok) throw std::invalid_argument("is_complete_decoherence: not a channel: " + ch.message);

  RatMat simplex(sys.dim, static_cast<Index>(cs.pure_indices.size()));
  for (std::size_t i = 0; i < cs.pure_indices.size(); ++i) {
    simplex.col(static_cast<Index>(i)) = sys.states[static_cast<std::size_t>(cs.pure_indices[i])];
  }
  for (const RatVec& g : sys.states) {
    const RatVec image = d * g;
    const auto coeffs = solve_linear(simplex, image);
    if (!coeffs || !vec_eq(RatVec(simplex * (*coeffs)), image)) return false;
    Rat total = 0;
    for (Index k = 0; k < coeffs->size(); ++k) {
      if ((*coeffs)(k) < 0) return false;
      total += (*coeffs)(k);
    }
    if (total != dot(sys.unit, image)) return false;
  }
  for (int idx : cs.pure_indices) {
    const RatVec& alpha = sys.states[static_cast<std::size_t>(idx)];
    if (!vec_eq(RatVec(d * alpha), alpha)) return false;
  }
  return true;
}

DecoherenceReport mid_property_suite(const System& sys, const ClassicalSet& cs) {
  DecoherenceReport report;
  report.channel = mid(sys, cs);
  report.classical_set = cs;
  report.is_complete = is_complete_decoherence(sys, report.channel, cs);
  report.idempotent = mat_eq(RatMat(report.channel * report.channel), report.channel);
  report.fixes_classical_effects = true;
  for (const RatVec& a : cs.measurement.effects) {
    if (!vec_eq(RatVec(report.channel.transpose() * a), a)) {
      report.fixes_classical_effects = false;
    }
  }
  report.purity_increasing_inputs = purity_increase_scan(sys, cs);
  return report;
}

std::vector<RatVec> decohered_effect_set(const System& sys, const ClassicalSet& cs) {
  if (!cs.maximal) throw std::invalid_argument("decohered_effect_set: set must be maximal");
  const RatMat d = mid(sys, cs);
  std::vector<RatVec> images;
  for (const RatVec& e : sys.effects) {
    RatVec image = d.transpose() * e;
    if (!vec_eq(image, classical_effect_quotient(sys, cs, e))) {
      throw std::logic_error("decohered effect differs from its classical quotient");
    }
    images.push_back(std::move(image));
  }
  // Decohered effects span exactly the classes of the distinguishing effects.
  const Index r = static_cast<Index>(cs.measurement.effects.size());
  RatMat span_a(sys.dim, r);
  for (Index i = 0; i < r; ++i) span_a.col(i) = cs.measurement.effects[static_cast<std::size_t>(i)];
  RatMat both(sys.dim, r + static_cast<Index>(images.size()));
  both.leftCols(r) = span_a;
  for (std::size_t k = 0; k < images.size(); ++k) both.col(r + static_cast<Index>(k)) = images[k];
  if (rank(both) != rank(span_a)) {
    throw std::logic_error("decohered effects span more than the classical effects");
  }
  return images;
}

std::vector<std::pair<RatVec, RatVec>> purity_increase_scan(const System& sys,
                                                            const ClassicalSet& cs) {
  if (!cs.maximal) throw std::invalid_argument("purity_increase_scan: set must be maximal");
  const RatMat d = mid(sys, cs);
  const Rat half(1, 2);
  std::vector<std::pair<RatVec, RatVec>> pairs;
  for (std::size_t i = 0; i < cs.pure_indices.size(); ++i) {
    const RatVec& alpha = sys.states[static_cast<std::size_t>(cs.pure_indices[i])];
    const RatVec& a_i = cs.measurement.effects[i];
    for (std::size_t g = 0; g < sys.states.size(); ++g) {
      if (std::find(cs.pure_indices.begin(), cs.pure_indices.end(), static_cast<int>(g)) !=
          cs.pure_indices.end()) {
        continue;
      }
      const RatVec& psi = sys.states[g];
      if (dot(a_i, psi) != 1) continue;
      RatVec mixed = half * (alpha + psi);
      if (!vec_eq(RatVec(d * mixed), alpha)) {
        throw std::logic_error("purity increase pair failed verification");
      }
      pairs.emplace_back(std::move(mixed), alpha);
    }
  }
  return pairs;
}

DecoherenceUniqueness complete_decoherence_uniqueness(const System& sys, const ClassicalSet& cs) {
  const Index dim = sys.dim;
  const RatMat base = measure_and_prepare_channel(sys, cs);

  // Polytope of complete decoherences in the matrix entries, split into
  // positive and negative parts, with one simplex-weight variable per
  // (outside generator, classical vertex) pair.
  std::vector<int> outside;
  for (int g = 0; g < static_cast<int>(sys.states.size()); ++g) {
    if (std::find(cs.pure_indices.begin(), cs.pure_indices.end(), g) == cs.pure_indices.end()) {
      outside.push_back(g);
    }
  }
  const Index r = static_cast<Index>(cs.pure_indices.size());
  const Index entry_vars = 2 * dim * dim;
  const Index vars = entry_vars + static_cast<Index>(outside.size()) * r;
  const auto pos_var = [&](Index row, Index col) { return row * dim + col; };
  const auto neg_var = [&](Index row, Index col) { return dim * dim + row * dim + col; };
  const auto weight_var = [&](std::size_t o, Index j) {
    return entry_vars + static_cast<Index>(o) * r + j;
  };

  std::vector<RatVec> rows;
  std::vector<Rat> rhs;
  const auto add_row = [&](RatVec row, Rat value) {
    rows.push_back(std::move(row));
    rhs.push_back(std::move(value));
  };

  // D alpha_j = alpha_j for every classical vertex.
  for (int idx : cs.pure_indices) {
    const RatVec& alpha = sys.states[static_cast<std::size_t>(idx)];
    for (Index row = 0; row < dim; ++row) {
      RatVec eq = RatVec::Zero(vars);
      for (Index col = 0; col < dim; ++col) {
        eq(pos_var(row, col)) = alpha(col);
        eq(neg_var(row, col)) = -alpha(col);
      }
      add_row(std::move(eq), alpha(row));
    }
  }
  // D g = sum_j w_{g,j} alpha_j with w >= 0, sum_j w_{g,j} = 1.
  for (std::size_t o = 0; o < outside.size(); ++o) {
    const RatVec& g = sys.states[static_cast<std::size_t>(outside[o])];
    for (Index row = 0; row < dim; ++row) {
      RatVec eq = RatVec::Zero(vars);
      for (Index col = 0; col < dim; ++col) {
        eq(pos_var(row, col)) = g(col);
        eq(neg_var(row, col)) = -g(col);
      }
      for (Index j = 0; j < r; ++j) {
        eq(weight_var(o, j)) =
            -sys.states[static_cast<std::size_t>(cs.pure_indices[static_cast<std::size_t>(j)])](row);
      }
      add_row(std::move(eq), 0);
    }
    RatVec eq = RatVec::Zero(vars);
    for (Index j = 0; j < r; ++j) eq(weight_var(o, j)) = 1;
    add_row(std::move(eq), 1);
  }

  RatMat a(static_cast<Index>(rows.size()), vars);
  RatVec b(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a.row(static_cast<Index>(i)) = rows[i].transpose();
    b(static_cast<Index>(i)) = rhs[i];
  }

  const auto matrix_from = [&](const RatVec& solution) {
    RatMat m(dim, dim);
    for (Index row = 0; row < dim; ++row) {
      for (Index col = 0; col < dim; ++col) {
        m(row, col) = solution(pos_var(row, col)) - solution(neg_var(row, col));
      }
    }
    return m;
  };

  for (Index row = 0; row < dim; ++row) {
    for (Index col = 0; col < dim; ++col) {
      for (int sign : {+1, -1}) {
        RatVec objective = RatVec::Zero(vars);
        objective(pos_var(row, col)) = sign;
        objective(neg_var(row, col)) = -sign;
        const LpOutcome out = lp_maximize(a, b, objective);
        RatMat candidate;
        if (out.status == LpOutcome::Status::optimal) {
          if (out.value * sign == base(row, col)) continue;  // no slack this direction
          candidate = matrix_from(out.solution);
        } else if (out.status == LpOutcome::Status::unbounded) {
          // Pin the coordinate one unit past the base value and re-solve.
          RatMat a2(a.rows() + 1, vars);
          a2.topRows(a.rows()) = a;
          a2.row(a.rows()) = objective.transpose();
          RatVec b2(b.size() + 1);
          b2.head(b.size()) = b;
          b2(b.size()) = sign * base(row, col) + 1;
          const Feasibility f = solve_feasibility(a2, b2);
          if (!f.feasible) throw std::logic_error("unbounded coordinate has no witness");
          candidate = matrix_from(f.assignment);
        } else {
          throw std::logic_error("decoherence polytope cannot be empty: the MID lies in it");
        }
        if (mat_eq(candidate, base)) continue;
        if (!is_complete_decoherence(sys, candidate, cs)) {
          throw std::logic_error("uniqueness scan produced a non-decoherence");
        }
        return {false, candidate};
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace gptforge
