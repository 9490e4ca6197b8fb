#include "gptforge/system.hpp"

#include <stdexcept>

namespace gptforge {

namespace {

std::string at_index(const char* what, std::size_t i) {
  return std::string(what) + " (generator " + std::to_string(i) + ")";
}

}  // namespace

namespace {

ValidationResult check_shapes(const System& sys) {
  if (sys.dim < 1) return {false, "dimension must be positive"};
  if (sys.unit.size() != sys.dim) return {false, "unit has wrong dimension"};
  if (sys.states.empty()) return {false, "no state generators"};
  if (sys.effects.empty()) return {false, "no effect generators"};
  for (std::size_t i = 0; i < sys.states.size(); ++i) {
    if (sys.states[i].size() != sys.dim) return {false, at_index("state has wrong dimension", i)};
    if (is_zero_vec(sys.states[i])) return {false, at_index("zero state generator", i)};
  }
  for (std::size_t i = 0; i < sys.effects.size(); ++i) {
    if (sys.effects[i].size() != sys.dim) return {false, at_index("effect has wrong dimension", i)};
    if (is_zero_vec(sys.effects[i])) return {false, at_index("zero effect generator", i)};
  }
  return {};
}

ValidationResult check_normalization(const System& sys) {
  for (std::size_t i = 0; i < sys.states.size(); ++i) {
    if (dot(sys.unit, sys.states[i]) != 1) {
      return {false, at_index("normalization fails: (unit|state) != 1", i)};
    }
  }
  return {};
}

ValidationResult check_effect_range(const System& sys) {
  for (std::size_t e = 0; e < sys.effects.size(); ++e) {
    for (std::size_t g = 0; g < sys.states.size(); ++g) {
      const Rat p = dot(sys.effects[e], sys.states[g]);
      if (p < 0 || p > 1) {
        return {false, "effect " + std::to_string(e) + " gives " + rat_to_string(p) +
                           " outside [0,1] on " + at_index("state", g)};
      }
    }
  }
  return {};
}

ValidationResult check_unit_in_cone(const System& sys) {
  if (!cone_membership(sys.unit, sys.effect_cone()).inside) {
    return {false, "unit is not in the effect cone"};
  }
  return {};
}

ValidationResult check_extremality(const System& sys) {
  for (std::size_t i = 0; i < sys.states.size(); ++i) {
    std::vector<RatVec> others;
    for (std::size_t j = 0; j < sys.states.size(); ++j) {
      if (j != i) others.push_back(sys.states[j]);
    }
    if (!others.empty() && cone_membership(sys.states[i], make_cone(sys.dim, others)).inside) {
      return {false, at_index("state generator is not extremal", i)};
    }
  }
  return {};
}

}  // namespace

std::vector<std::pair<std::string, ValidationResult>> validate_system_detail(const System& sys) {
  std::vector<std::pair<std::string, ValidationResult>> out;
  out.emplace_back("shapes", check_shapes(sys));
  if (!out.back().second.ok) return out;
  out.emplace_back("normalization", check_normalization(sys));
  out.emplace_back("effect-range", check_effect_range(sys));
  out.emplace_back("unit-in-effect-cone", check_unit_in_cone(sys));
  out.emplace_back("state-extremality", check_extremality(sys));
  return out;
}

ValidationResult validate_system(const System& sys) {
  for (const auto& [name, result] : validate_system_detail(sys)) {
    if (!result.ok) return result;
  }
  return {};
}

State make_state(const System& sys, const RatVec& v) {
  State s = sub_state(sys, v);
  if (s.norm == 0) throw std::invalid_argument("state has zero norm");
  return s;
}

State sub_state(const System& sys, const RatVec& v) {
  if (v.size() != sys.dim) throw std::invalid_argument("state has wrong dimension");
  if (!cone_membership(v, sys.state_cone()).inside) {
    throw std::invalid_argument("vector is not in the state cone");
  }
  const Rat norm = dot(sys.unit, v);
  if (norm < 0 || norm > 1) throw std::invalid_argument("state norm outside [0,1]");
  return {v, norm};
}

EffectCheck is_valid_effect(const System& sys, const RatVec& v) {
  if (v.size() != sys.dim) throw std::invalid_argument("effect has wrong dimension");
  const Cone eff = sys.effect_cone();
  if (!cone_membership(v, eff).inside) return {false, "not in the effect cone"};
  if (!cone_membership(RatVec(sys.unit - v), eff).inside) {
    return {false, "complement (unit - e) is not in the effect cone"};
  }
  return {true, ""};
}

Measurement make_measurement(const System& sys, std::vector<RatVec> effects) {
  if (effects.empty()) throw std::invalid_argument("measurement needs at least one effect");
  RatVec sum = RatVec::Zero(sys.dim);
  for (const RatVec& e : effects) {
    const EffectCheck c = is_valid_effect(sys, e);
    if (!c.valid) throw std::invalid_argument("invalid effect in measurement: " + c.reason);
    sum += e;
  }
  if (!vec_eq(sum, sys.unit)) throw std::invalid_argument("measurement effects do not sum to unit");
  return {std::move(effects)};
}

ValidationResult validate_channel(const System& in, const System& out, const RatMat& matrix,
                                  bool deterministic) {
  if (matrix.rows() != out.dim || matrix.cols() != in.dim) {
    return {false, "channel matrix has wrong shape"};
  }
  const Cone out_cone = out.state_cone();
  for (std::size_t g = 0; g < in.states.size(); ++g) {
    if (!cone_membership(RatVec(matrix * in.states[g]), out_cone).inside) {
      return {false, at_index("channel maps state outside the output cone", g)};
    }
  }
  if (deterministic && !vec_eq(RatVec(matrix.transpose() * out.unit), in.unit)) {
    return {false, "channel does not preserve the deterministic effect"};
  }
  return {};
}

ValidationResult validate_test(const System& in, const System& out, const Test& test) {
  if (test.branches.empty()) return {false, "test has no branches"};
  RatMat sum = RatMat::Zero(out.dim, in.dim);
  for (std::size_t i = 0; i < test.branches.size(); ++i) {
    const ValidationResult r = validate_channel(in, out, test.branches[i], false);
    if (!r.ok) return {false, "branch " + std::to_string(i) + ": " + r.message};
    sum += test.branches[i];
  }
  if (!vec_eq(RatVec(sum.transpose() * out.unit), in.unit)) {
    return {false, "branch coarse-graining is not a channel"};
  }
  return {};
}

Test coarse_grain(const Test& test, const std::vector<std::vector<int>>& partition) {
  std::vector<bool> seen(test.branches.size(), false);
  Test out;
  for (const std::vector<int>& block : partition) {
    if (block.empty()) throw std::invalid_argument("coarse_grain: empty partition block");
    RatMat sum = RatMat::Zero(test.branches[0].rows(), test.branches[0].cols());
    for (int i : block) {
      if (i < 0 || static_cast<std::size_t>(i) >= test.branches.size()) {
        throw std::invalid_argument("coarse_grain: branch index out of range");
      }
      if (seen[static_cast<std::size_t>(i)]) {
        throw std::invalid_argument("coarse_grain: overlapping partition");
      }
      seen[static_cast<std::size_t>(i)] = true;
      sum += test.branches[static_cast<std::size_t>(i)];
    }
    out.branches.push_back(std::move(sum));
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("coarse_grain: partition does not cover all branches");
  }
  return out;
}

Test measure_and_prepare(const Measurement& m, const std::vector<State>& prepared) {
  if (m.effects.size() != prepared.size()) {
    throw std::invalid_argument("measure_and_prepare: length mismatch");
  }
  Test t;
  for (std::size_t i = 0; i < m.effects.size(); ++i) {
    t.branches.push_back(outer(prepared[i].vec, m.effects[i]));
  }
  return t;
}

State apply(const System& out, const RatMat& channel, const State& s) {
  if (channel.cols() != s.vec.size()) throw std::invalid_argument("apply: shape mismatch");
  RatVec v = channel * s.vec;
  const Rat norm = dot(out.unit, v);
  if (norm < 0 || norm > 1) throw std::invalid_argument("apply: output norm outside [0,1]");
  return {std::move(v), norm};
}

bool tomographically_equal(const System& sys, const RatVec& rho, const RatVec& sigma) {
  for (const RatVec& e : sys.effects) {
    if (dot(e, rho) != dot(e, sigma)) return false;
  }
  return true;
}

}  // namespace gptforge
