#include "gptforge/theories.hpp"

#include <stdexcept>

namespace gptforge {

System classical_simplex(int d) {
  if (d < 2) throw std::invalid_argument("classical_simplex: d must be at least 2");
  System sys;
  sys.name = "classical:" + std::to_string(d);
  sys.dim = d;
  sys.unit = RatVec::Constant(d, 1);
  for (Index i = 0; i < d; ++i) {
    RatVec e = RatVec::Zero(d);
    e(i) = 1;
    sys.states.push_back(e);
    sys.effects.push_back(e);
  }
  return sys;
}

System restricted_trit() {
  System sys = classical_simplex(3);
  sys.name = "rtrit";
  const Rat half(1, 2);
  sys.effects = {make_vec({half, half, 0}), make_vec({half, 0, half}), make_vec({0, half, half})};
  return sys;
}

System square_bit() {
  System sys;
  sys.name = "sqbit";
  sys.dim = 3;
  sys.unit = make_vec({0, 0, 1});
  sys.states = {make_vec({-1, 1, 1}), make_vec({-1, -1, 1}), make_vec({1, -1, 1}),
                make_vec({1, 1, 1})};
  // Extremal rays of the dual cone, scaled to reach 1 on the square; closed
  // under complement (u - top = bottom, u - right = left).
  const Rat half(1, 2);
  sys.effects = {make_vec({0, half, half}), make_vec({0, -half, half}),
                 make_vec({half, 0, half}), make_vec({-half, 0, half})};
  return sys;
}

bool is_unrestricted(const System& sys) {
  return cone_equal(sys.effect_cone(), dual_cone(sys.state_cone()));
}

System unrestricted_completion(const System& sys) {
  System out = sys;
  out.name = sys.name + ":completed";
  out.effects.clear();
  for (const RatVec& ray : dual_cone(sys.state_cone()).generators) {
    Rat top = 0;
    for (const RatVec& g : sys.states) {
      const Rat v = dot(ray, g);
      if (v > top) top = v;
    }
    out.effects.push_back(top > 0 ? RatVec(ray / top) : ray);
  }
  return out;
}

PartnerResult find_distinguishable_partner(const System& sys, int pure_index) {
  if (pure_index < 0 || static_cast<std::size_t>(pure_index) >= sys.states.size()) {
    throw std::invalid_argument("find_distinguishable_partner: bad state index");
  }
  if (!is_unrestricted(sys)) {
    throw std::invalid_argument("find_distinguishable_partner: system is restricted");
  }
  const RatVec& psi = sys.states[static_cast<std::size_t>(pure_index)];
  const Cone dual = dual_cone(sys.state_cone());
  for (const RatVec& f : dual.generators) {
    if (dot(f, psi) != 0) continue;
    // f supports psi; its maximum over the pure states is positive.
    Rat top = 0;
    int argmax = -1;
    for (std::size_t g = 0; g < sys.states.size(); ++g) {
      const Rat v = dot(f, sys.states[g]);
      if (v > top) {
        top = v;
        argmax = static_cast<int>(g);
      }
    }
    if (argmax < 0) continue;  // f vanishes on every state generator
    const RatVec a2 = f / top;
    PartnerResult out;
    out.partner_index = argmax;
    out.measurement = make_measurement(sys, {RatVec(sys.unit - a2), a2});
    return out;
  }
  throw std::runtime_error(
      "find_distinguishable_partner: no supporting functional vanishes on the state "
      "(state generator is not extremal)");
}

}  // namespace gptforge
