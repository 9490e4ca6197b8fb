#include "gptforge/composition.hpp"

#include <algorithm>
#include <stdexcept>

#include "gptforge/decoherence.hpp"
#include "gptforge/linalg.hpp"
#include "gptforge/theories.hpp"

namespace gptforge {

Composite as_composite(const System& sys) { return {sys, {sys}}; }

Composite min_tensor(const Composite& a, const Composite& b) {
  Composite out;
  out.base.name = a.base.name + " x " + b.base.name;
  out.base.dim = a.base.dim * b.base.dim;
  out.base.unit = kron(a.base.unit, b.base.unit);
  out.base.generators_exhaustive =
      a.base.generators_exhaustive && b.base.generators_exhaustive;
  for (const RatVec& ga : a.base.states) {
    for (const RatVec& gb : b.base.states) out.base.states.push_back(kron(ga, gb));
  }
  for (const RatVec& ea : a.base.effects) {
    for (const RatVec& eb : b.base.effects) out.base.effects.push_back(kron(ea, eb));
  }
  out.factors = a.factors;
  out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
  return out;
}

Composite min_tensor(const System& a, const System& b) {
  return min_tensor(as_composite(a), as_composite(b));
}

namespace {

void check_keep(const Composite& c, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("marginal: empty keep set");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || static_cast<std::size_t>(keep[i]) >= c.factors.size()) {
      throw std::invalid_argument("marginal: factor index out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument("marginal: keep set must be strictly ascending");
    }
  }
}

}  // namespace

Composite kept_composite(const Composite& c, const std::vector<int>& keep) {
  check_keep(c, keep);
  Composite out = as_composite(c.factors[static_cast<std::size_t>(keep[0])]);
  for (std::size_t i = 1; i < keep.size(); ++i) {
    out = min_tensor(out, as_composite(c.factors[static_cast<std::size_t>(keep[i])]));
  }
  return out;
}

RatMat marginal_matrix(const Composite& c, const std::vector<int>& keep) {
  check_keep(c, keep);
  RatMat m = RatMat::Identity(1, 1);
  for (std::size_t f = 0; f < c.factors.size(); ++f) {
    const System& factor = c.factors[f];
    const bool kept = std::find(keep.begin(), keep.end(), static_cast<int>(f)) != keep.end();
    if (kept) {
      m = kron(m, RatMat(RatMat::Identity(factor.dim, factor.dim)));
    } else {
      m = kron(m, RatMat(factor.unit.transpose()));
    }
  }
  return m;
}

State marginal(const Composite& c, const State& s, const std::vector<int>& keep) {
  const RatMat m = marginal_matrix(c, keep);
  if (m.cols() != s.vec.size()) throw std::invalid_argument("marginal: state shape mismatch");
  const Composite target = kept_composite(c, keep);
  RatVec v = m * s.vec;
  return {v, dot(target.base.unit, v)};
}

bool check_axiom_product_pure(const Composite& c) {
  for (std::size_t i = 0; i < c.base.states.size(); ++i) {
    std::vector<RatVec> others;
    for (std::size_t j = 0; j < c.base.states.size(); ++j) {
      if (j != i) others.push_back(c.base.states[j]);
    }
    if (cone_membership(c.base.states[i], make_cone(c.base.dim, others)).inside) return false;
  }
  return true;
}

namespace {

struct ProductSet {
  std::vector<int> indices;       // composite generator indices, ascending
  std::vector<RatVec> effects;    // product measurement, aligned with indices
};

ProductSet product_classical_candidate(const Composite& c, const ClassicalSet& cs_a,
                                       const ClassicalSet& cs_b) {
  if (c.factors.size() != 2) {
    throw std::invalid_argument("composite classical sets need exactly two factors");
  }
  if (!cs_a.maximal || !cs_b.maximal) {
    throw std::invalid_argument("factor classical sets must be maximal");
  }
  const int nb = static_cast<int>(c.factors[1].states.size());
  ProductSet out;
  for (std::size_t i = 0; i < cs_a.pure_indices.size(); ++i) {
    for (std::size_t j = 0; j < cs_b.pure_indices.size(); ++j) {
      out.indices.push_back(cs_a.pure_indices[i] * nb + cs_b.pure_indices[j]);
      out.effects.push_back(kron(cs_a.measurement.effects[i], cs_b.measurement.effects[j]));
    }
  }
  return out;
}

bool delta_holds(const Composite& c, const ProductSet& ps) {
  RatVec sum = RatVec::Zero(c.base.dim);
  for (std::size_t i = 0; i < ps.effects.size(); ++i) {
    sum += ps.effects[i];
    for (std::size_t j = 0; j < ps.indices.size(); ++j) {
      const Rat v = dot(ps.effects[i], c.base.states[static_cast<std::size_t>(ps.indices[j])]);
      if (v != ((i == j) ? 1 : 0)) return false;
    }
  }
  return vec_eq(sum, c.base.unit);
}

}  // namespace

bool check_information_locality(const Composite& c, const ClassicalSet& cs_a,
                                const ClassicalSet& cs_b) {
  const ProductSet ps = product_classical_candidate(c, cs_a, cs_b);
  std::vector<RatVec> states;
  for (int idx : ps.indices) states.push_back(c.base.states[static_cast<std::size_t>(idx)]);
  if (!delta_holds(c, ps) && !is_distinguishable(c.base, states)) return false;
  for (int g = 0; g < static_cast<int>(c.base.states.size()); ++g) {
    if (std::find(ps.indices.begin(), ps.indices.end(), g) != ps.indices.end()) continue;
    std::vector<RatVec> extended = states;
    extended.push_back(c.base.states[static_cast<std::size_t>(g)]);
    if (is_distinguishable(c.base, extended)) return false;  // extender found
  }
  return true;
}

ClassicalSet composite_classical_set(const Composite& c, const ClassicalSet& cs_a,
                                     const ClassicalSet& cs_b) {
  if (!check_axiom_product_pure(c)) {
    throw std::invalid_argument("composite_classical_set: product states are not pure");
  }
  ProductSet ps = product_classical_candidate(c, cs_a, cs_b);
  if (!delta_holds(c, ps)) {
    throw std::invalid_argument("composite_classical_set: product measurement is not a witness");
  }
  ClassicalSet cs;
  cs.pure_indices = ps.indices;
  cs.measurement.effects = std::move(ps.effects);
  cs.maximal = check_information_locality(c, cs_a, cs_b);
  return cs;
}

bool check_mid_factorization(const Composite& c, const ClassicalSet& cs_a,
                             const ClassicalSet& cs_b) {
  const ClassicalSet cs_ab = composite_classical_set(c, cs_a, cs_b);
  const RatMat lhs = mid(c.base, cs_ab);
  const RatMat rhs = kron(mid(c.factors[0], cs_a), mid(c.factors[1], cs_b));
  return mat_eq(lhs, rhs);
}

namespace {

System atom_from_recipe(const std::string& token) {
  if (token == "rtrit") return restricted_trit();
  if (token == "sqbit") return square_bit();
  if (token.rfind("classical:", 0) == 0) {
    const std::string arg = token.substr(10);
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad recipe atom: " + token);
    }
    if (used != arg.size()) throw std::invalid_argument("bad recipe atom: " + token);
    return classical_simplex(d);
  }
  throw std::invalid_argument("unknown recipe atom: " + token);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Composite parse_recipe(const std::string& recipe, Index max_dim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = recipe.find(" x ", start);
    if (pos == std::string::npos) {
      parts.push_back(trim(recipe.substr(start)));
      break;
    }
    parts.push_back(trim(recipe.substr(start, pos - start)));
    start = pos + 3;
  }
  std::optional<Composite> result;
  for (const std::string& part : parts) {
    if (part.empty()) throw std::invalid_argument("empty recipe component");
    std::string atom = part;
    int power = 1;
    const std::size_t caret = part.find('^');
    if (caret != std::string::npos) {
      atom = trim(part.substr(0, caret));
      const std::string exp = trim(part.substr(caret + 1));
      std::size_t used = 0;
      try {
        power = std::stoi(exp, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad recipe power: " + part);
      }
      if (used != exp.size() || power < 1) throw std::invalid_argument("bad recipe power: " + part);
    }
    const Composite unit = as_composite(atom_from_recipe(atom));
    for (int k = 0; k < power; ++k) {
      result = result ? min_tensor(*result, unit) : unit;
      if (result->base.dim > max_dim) {
        throw std::invalid_argument("recipe exceeds the composite dimension cap");
      }
    }
  }
  if (!result) throw std::invalid_argument("empty recipe");
  return *result;
}

}  // namespace gptforge
