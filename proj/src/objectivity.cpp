#include "gptforge/objectivity.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "gptforge/linalg.hpp"

namespace gptforge {

bool is_srm(const std::vector<RatMat>& branches) {
  for (std::size_t i = 0; i < branches.size(); ++i) {
    for (std::size_t j = 0; j < branches.size(); ++j) {
      const RatMat product = branches[i] * branches[j];
      if (i == j ? !mat_eq(product, branches[i]) : !mat_eq(product, RatMat::Zero(product.rows(), product.cols()))) {
        return false;
      }
    }
  }
  return true;
}

SrmTest make_srm(const System& sys, std::vector<RatMat> branches) {
  const ValidationResult r = validate_test(sys, sys, {branches});
  if (!r.ok) throw std::invalid_argument("make_srm: invalid test: " + r.message);
  if (!is_srm(branches)) throw std::invalid_argument("make_srm: branches are not sharply repeatable");
  return {std::move(branches)};
}

SrmTest srm_product(const SrmTest& p, const SrmTest& q) {
  SrmTest out;
  for (const RatMat& pi : p.branches) {
    for (const RatMat& qj : q.branches) out.branches.push_back(kron(pi, qj));
  }
  return out;
}

RenormalizedBranches srm_distinguishability_lemma(const System& sys, const SrmTest& srm,
                                                  const State& rho) {
  if (rho.norm != 1) throw std::invalid_argument("lemma requires a normalized state");
  RenormalizedBranches out;
  std::vector<RatVec> raw(srm.branches.size());
  for (std::size_t i = 0; i < srm.branches.size(); ++i) {
    raw[i] = srm.branches[i] * rho.vec;
    if (!is_zero_vec(raw[i])) out.surviving.push_back(static_cast<int>(i));
  }
  if (out.surviving.empty()) {
    throw std::logic_error("every branch vanished on a normalized state");
  }
  for (int i : out.surviving) {
    const Rat weight = dot(sys.unit, raw[static_cast<std::size_t>(i)]);
    out.states.push_back({RatVec(raw[static_cast<std::size_t>(i)] / weight), Rat(1)});
  }
  if (out.surviving.size() == 1) return out;

  const int fold_into = out.surviving.front();
  Measurement w;
  for (int i : out.surviving) {
    RatVec a = srm.branches[static_cast<std::size_t>(i)].transpose() * sys.unit;
    if (i == fold_into) {
      for (std::size_t k = 0; k < srm.branches.size(); ++k) {
        if (std::find(out.surviving.begin(), out.surviving.end(), static_cast<int>(k)) ==
            out.surviving.end()) {
          a += srm.branches[k].transpose() * sys.unit;
        }
      }
    }
    w.effects.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < w.effects.size(); ++i) {
    for (std::size_t j = 0; j < out.states.size(); ++j) {
      if (dot(w.effects[i], out.states[j].vec) != ((i == j) ? 1 : 0)) {
        throw std::logic_error("lemma measurement failed its delta contract");
      }
    }
  }
  out.witness = std::move(w);
  return out;
}

namespace {

std::vector<int> all_fragments(const Composite& c) {
  std::vector<int> keep;
  for (std::size_t f = 1; f < c.factors.size(); ++f) keep.push_back(static_cast<int>(f));
  return keep;
}

}  // namespace

std::pair<State, SbsWitness> build_sbs(const Composite& c, const ClassicalSet& cs_s,
                                       const std::vector<Rat>& probs,
                                       const std::vector<std::vector<State>>& fragment_states,
                                       const std::vector<Measurement>& fragment_measurements) {
  if (c.factors.size() < 2) throw std::invalid_argument("build_sbs: need at least one fragment");
  const std::size_t r = probs.size();
  const std::size_t n_frag = c.factors.size() - 1;
  if (r == 0 || r > cs_s.pure_indices.size()) throw std::invalid_argument("build_sbs: bad branch count");
  if (fragment_states.size() != r) throw std::invalid_argument("build_sbs: fragment state rows != r");
  Rat total = 0;
  for (const Rat& p : probs) {
    if (p <= 0) throw std::invalid_argument("build_sbs: probabilities must be positive");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("build_sbs: probabilities must sum to 1");
  for (const auto& row : fragment_states) {
    if (row.size() != n_frag) throw std::invalid_argument("build_sbs: fragment state row size");
    for (std::size_t k = 0; k < n_frag; ++k) {
      if (row[k].norm != 1) throw std::invalid_argument("build_sbs: fragment states must be normalized");
    }
  }
  if (r >= 2) {
    if (fragment_measurements.size() != n_frag) {
      throw std::invalid_argument("build_sbs: one measurement per fragment required");
    }
    for (std::size_t k = 0; k < n_frag; ++k) {
      if (fragment_measurements[k].effects.size() < r) {
        throw std::invalid_argument("build_sbs: measurement too short for the branch count");
      }
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
          if (dot(fragment_measurements[k].effects[i], fragment_states[j][k].vec) !=
              ((i == j) ? 1 : 0)) {
            throw std::invalid_argument("build_sbs: distinguishability witness fails delta check");
          }
        }
      }
    }
  }

  RatVec vec = RatVec::Zero(c.base.dim);
  SbsWitness witness;
  witness.probs = probs;
  witness.fragment_states = fragment_states;
  witness.fragment_measurements = fragment_measurements;
  for (std::size_t i = 0; i < r; ++i) {
    const int pointer = cs_s.pure_indices[i];
    witness.pointer_indices.push_back(pointer);
    RatVec term = c.factors[0].states[static_cast<std::size_t>(pointer)];
    for (std::size_t k = 0; k < n_frag; ++k) term = kron(term, fragment_states[i][k].vec);
    vec += probs[i] * term;
  }
  return {State{vec, Rat(1)}, std::move(witness)};
}

SbsCheck is_sbs(const Composite& c, const State& rho, const ClassicalSet& cs_s) {
  if (c.factors.size() < 2) throw std::invalid_argument("is_sbs: need at least one fragment");
  if (rho.vec.size() != c.base.dim) throw std::invalid_argument("is_sbs: state shape mismatch");
  const System& s_factor = c.factors[0];
  const std::size_t n_frag = c.factors.size() - 1;
  const Composite env = kept_composite(c, all_fragments(c));
  const Index env_dim = env.base.dim;

  SbsCheck check;

  // (1) pointer probabilities
  std::vector<Rat> probs;
  std::vector<int> live;  // positions within cs_s
  for (std::size_t i = 0; i < cs_s.pure_indices.size(); ++i) {
    const RatVec functional = kron(cs_s.measurement.effects[i], env.base.unit);
    const Rat p = dot(functional, rho.vec);
    if (p < 0) {
      check.failed_step = 1;
      check.reason = "negative pointer probability";
      return check;
    }
    if (p > 0) {
      probs.push_back(p);
      live.push_back(static_cast<int>(i));
    }
  }

  // (2) conditional environment states
  std::vector<RatVec> conditionals;
  for (std::size_t t = 0; t < live.size(); ++t) {
    const RatMat contract =
        kron(RatMat(cs_s.measurement.effects[static_cast<std::size_t>(live[t])].transpose()),
             RatMat(RatMat::Identity(env_dim, env_dim)));
    conditionals.push_back(RatVec((contract * rho.vec) / probs[t]));
  }

  // (3) exact reconstruction
  RatVec rebuilt = RatVec::Zero(c.base.dim);
  for (std::size_t t = 0; t < live.size(); ++t) {
    const int pointer = cs_s.pure_indices[static_cast<std::size_t>(live[t])];
    rebuilt += probs[t] *
               kron(s_factor.states[static_cast<std::size_t>(pointer)], conditionals[t]);
  }
  if (!vec_eq(rebuilt, rho.vec)) {
    check.failed_step = 3;
    check.reason = "state is not a mixture of pointer states with conditional environments";
    return check;
  }

  // (4) strong independence: each conditional factorizes across fragments
  std::vector<std::vector<State>> frag_states(live.size());
  for (std::size_t t = 0; t < live.size(); ++t) {
    const State cond{conditionals[t], Rat(1)};
    RatVec product(1);
    product(0) = 1;
    for (std::size_t k = 0; k < n_frag; ++k) {
      const State m = marginal(env, cond, {static_cast<int>(k)});
      frag_states[t].push_back(m);
      product = kron(product, m.vec);
    }
    if (!vec_eq(product, conditionals[t])) {
      check.failed_step = 4;
      check.reason = "conditional environment state " + std::to_string(t) +
                     " is correlated across fragments";
      return check;
    }
  }

  // (5) per-fragment distinguishability
  std::vector<Measurement> frag_meas;
  for (std::size_t k = 0; k < n_frag; ++k) {
    const System& frag = c.factors[k + 1];
    if (live.size() < 2) {
      frag_meas.push_back(Measurement{{frag.unit}});
      continue;
    }
    std::vector<RatVec> states;
    for (std::size_t t = 0; t < live.size(); ++t) states.push_back(frag_states[t][k].vec);
    auto witness = is_distinguishable(frag, states);
    if (!witness) {
      check.failed_step = 5;
      check.reason = "conditional states on fragment " + std::to_string(k) +
                     " are not distinguishable";
      return check;
    }
    frag_meas.push_back(std::move(*witness));
  }

  check.is_sbs = true;
  SbsWitness w;
  w.probs = std::move(probs);
  for (int t : live) w.pointer_indices.push_back(cs_s.pure_indices[static_cast<std::size_t>(t)]);
  w.fragment_states = std::move(frag_states);
  w.fragment_measurements = std::move(frag_meas);
  check.witness = std::move(w);
  return check;
}

Referee make_referee(const System& s, const ClassicalSet& cs) {
  if (!cs.maximal) throw std::invalid_argument("make_referee: classical set must be maximal");
  std::vector<RatMat> branches;
  for (std::size_t i = 0; i < cs.pure_indices.size(); ++i) {
    branches.push_back(outer(s.states[static_cast<std::size_t>(cs.pure_indices[i])],
                             cs.measurement.effects[i]));
  }
  return {cs, make_srm(s, std::move(branches))};
}

GameOutcome play_game(const Composite& c, const State& rho, const Referee& referee,
                      const std::vector<SrmTest>& players) {
  if (c.factors.size() != players.size() + 1) {
    throw std::invalid_argument("play_game: one strategy per fragment required");
  }
  if (rho.vec.size() != c.base.dim || rho.norm != 1) {
    throw std::invalid_argument("play_game: need a normalized joint state");
  }
  // The referee must be the measure-and-prepare SRM of its classical set.
  const Referee rebuilt = make_referee(c.factors[0], referee.cs);
  if (rebuilt.srm.branches.size() != referee.srm.branches.size()) {
    throw std::invalid_argument("play_game: referee is not the classical-set SRM");
  }
  for (std::size_t i = 0; i < referee.srm.branches.size(); ++i) {
    if (!mat_eq(rebuilt.srm.branches[i], referee.srm.branches[i])) {
      throw std::invalid_argument("play_game: referee is not the classical-set SRM");
    }
  }
  for (std::size_t k = 0; k < players.size(); ++k) {
    const ValidationResult r = validate_test(c.factors[k + 1], c.factors[k + 1],
                                             {players[k].branches});
    if (!r.ok) throw std::invalid_argument("play_game: player test invalid: " + r.message);
    if (!is_srm(players[k].branches)) {
      throw std::invalid_argument("play_game: player strategy is not an SRM");
    }
  }

  GameOutcome out;
  const std::size_t d = referee.srm.branches.size();
  std::vector<std::size_t> counts;
  for (const SrmTest& p : players) counts.push_back(p.branches.size());

  std::vector<int> tuple(players.size() + 1, 0);
  bool done = false;
  out.agreement = true;
  while (!done) {
    RatMat joint = referee.srm.branches[static_cast<std::size_t>(tuple[0])];
    for (std::size_t k = 0; k < players.size(); ++k) {
      joint = kron(joint, players[k].branches[static_cast<std::size_t>(tuple[k + 1])]);
    }
    const Rat p = dot(c.base.unit, RatVec(joint * rho.vec));
    out.table.emplace_back(tuple, p);
    const bool diagonal =
        std::all_of(tuple.begin(), tuple.end(), [&](int v) { return v == tuple[0]; });
    if (!diagonal && p != 0) out.agreement = false;
    // advance the outcome tuple
    std::size_t pos = tuple.size();
    while (pos > 0) {
      --pos;
      const std::size_t limit = pos == 0 ? d : counts[pos - 1];
      if (static_cast<std::size_t>(++tuple[pos]) < limit) break;
      tuple[pos] = 0;
      if (pos == 0) done = true;
    }
  }

  std::size_t diag = d;
  for (std::size_t c_k : counts) diag = std::min(diag, c_k);
  RatVec after = RatVec::Zero(c.base.dim);
  for (std::size_t t = 0; t < diag; ++t) {
    RatMat joint = referee.srm.branches[t];
    for (const SrmTest& p : players) joint = kron(joint, p.branches[t]);
    after += joint * rho.vec;
  }
  out.non_disturbing = vec_eq(after, rho.vec);
  out.win = out.agreement && out.non_disturbing;
  return out;
}

std::optional<std::vector<SrmTest>> synthesize_winning_strategy(const Composite& c,
                                                                const State& rho,
                                                                const ClassicalSet& cs_s) {
  const SbsCheck check = is_sbs(c, rho, cs_s);
  if (!check.is_sbs) return std::nullopt;
  const SbsWitness& w = *check.witness;
  std::vector<SrmTest> strategies;
  for (std::size_t k = 0; k + 1 < c.factors.size(); ++k) {
    std::vector<RatMat> branches;
    const std::size_t r = w.probs.size();
    for (std::size_t i = 0; i < r; ++i) {
      branches.push_back(outer(w.fragment_states[i][k].vec,
                               w.fragment_measurements[k].effects[i]));
    }
    strategies.push_back(make_srm(c.factors[k + 1], std::move(branches)));
  }
  return strategies;
}

std::vector<SrmTest> canonical_fragment_strategies(const System& fragment, int max_len) {
  const int n = static_cast<int>(fragment.states.size());
  std::vector<SrmTest> out;
  std::vector<int> tuple;
  const auto emit = [&](const std::vector<int>& idx) {
    std::vector<RatVec> states;
    for (int i : idx) states.push_back(fragment.states[static_cast<std::size_t>(i)]);
    std::optional<Measurement> w;
    if (idx.size() == 1) {
      w = Measurement{{fragment.unit}};
    } else {
      w = is_distinguishable(fragment, states);
      if (!w) return;
    }
    std::vector<RatMat> branches;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      branches.push_back(outer(states[t], w->effects[t]));
    }
    out.push_back(make_srm(fragment, std::move(branches)));
  };
  const std::function<void()> extend = [&]() {
    if (!tuple.empty()) emit(tuple);
    if (static_cast<int>(tuple.size()) >= max_len) return;
    for (int i = 0; i < n; ++i) {
      if (std::find(tuple.begin(), tuple.end(), i) != tuple.end()) continue;
      tuple.push_back(i);
      extend();
      tuple.pop_back();
    }
  };
  extend();
  return out;
}

FixedPointReport fixed_point_sbs_check(const Composite& c, const Referee& referee,
                                       const std::vector<SrmTest>& players) {
  std::size_t diag = referee.srm.branches.size();
  for (const SrmTest& p : players) diag = std::min(diag, p.branches.size());
  RatMat t = RatMat::Zero(c.base.dim, c.base.dim);
  for (std::size_t i = 0; i < diag; ++i) {
    RatMat joint = referee.srm.branches[i];
    for (const SrmTest& p : players) joint = kron(joint, p.branches[i]);
    t += joint;
  }

  FixedPointReport report;
  const std::vector<RatVec> kernel =
      kernel_basis(RatMat(t - RatMat::Identity(c.base.dim, c.base.dim)));
  if (kernel.empty()) return report;

  RatMat k(c.base.dim, static_cast<Index>(kernel.size()));
  for (std::size_t i = 0; i < kernel.size(); ++i) k.col(static_cast<Index>(i)) = kernel[i];
  const RatMat gram = k.transpose() * k;
  RatMat gram_inv(gram.rows(), gram.cols());
  for (Index j = 0; j < gram.cols(); ++j) {
    RatVec unit = RatVec::Zero(gram.rows());
    unit(j) = 1;
    const auto col = solve_linear(gram, unit);
    if (!col) throw std::logic_error("kernel basis produced a singular Gram matrix");
    gram_inv.col(j) = *col;
  }
  const RatMat projector = k * gram_inv * k.transpose();

  std::vector<RatVec> projections;
  for (const RatVec& g : c.base.states) projections.push_back(RatVec(projector * g));

  const Cone state_cone = c.base.state_cone();
  const std::size_t m = projections.size();
  std::vector<RatVec> seen;
  // All convex combinations with denominator q <= 4: compositions of q over m.
  for (int q = 1; q <= 4; ++q) {
    std::vector<int> parts(m, 0);
    parts[0] = q;
    while (true) {
      RatVec x = RatVec::Zero(c.base.dim);
      for (std::size_t i = 0; i < m; ++i) {
        if (parts[i] != 0) x += Rat(parts[i], q) * projections[i];
      }
      if (!is_zero_vec(x)) {
        const Rat norm = dot(c.base.unit, x);
        if (norm > 0) {
          RatVec candidate = x / norm;
          const bool fresh = std::none_of(seen.begin(), seen.end(), [&](const RatVec& s) {
            return vec_eq(s, candidate);
          });
          if (fresh) {
            seen.push_back(candidate);
            if (cone_membership(candidate, state_cone).inside) {
              if (!vec_eq(RatVec(t * candidate), candidate)) {
                throw std::logic_error("sampled state left the fixed subspace");
              }
              State fixed{candidate, Rat(1)};
              const SbsCheck check = is_sbs(c, fixed, referee.cs);
              report.fixed_states.push_back(std::move(fixed));
              if (!check.is_sbs) report.all_sbs = false;
            }
          }
        }
      }
      // next composition of q into m parts: move one unit right from the
      // last movable slot, folding the tail back in
      std::size_t i = m - 1;
      bool movable = false;
      while (i > 0) {
        --i;
        if (parts[i] > 0) {
          movable = true;
          break;
        }
      }
      if (!movable) break;
      const int tail = parts[m - 1];
      parts[m - 1] = 0;
      parts[i] -= 1;
      parts[i + 1] += tail + 1;
    }
  }
  return report;
}

}  // namespace gptforge
