#pragma once

#include <string>
#include <vector>

#include "gptforge/classicality.hpp"
#include "gptforge/system.hpp"

namespace gptforge {

/// A minimal tensor product with its factor decomposition. Indexing is
/// A-major lexicographic throughout: the product of generator i of A and
/// generator j of B sits at index i * |B| + j, and coordinates follow the
/// Kronecker convention.
struct Composite {
  System base;
  std::vector<System> factors;
};

Composite as_composite(const System& sys);

/// Minimal tensor product: product states, product effects, product unit.
/// Factor lists are concatenated (n-ary composition is left-associated).
Composite min_tensor(const Composite& a, const Composite& b);
Composite min_tensor(const System& a, const System& b);

/// The product system over a subset of factors, in ascending factor order.
Composite kept_composite(const Composite& c, const std::vector<int>& keep);

/// Discards all factors outside keep by contracting with their units.
State marginal(const Composite& c, const State& s, const std::vector<int>& keep);

/// The contraction matrix used by marginal (identity on kept factors, unit
/// row on discarded ones).
RatMat marginal_matrix(const Composite& c, const std::vector<int>& keep);

/// Every product of factor pure states is extremal in the composite.
bool check_axiom_product_pure(const Composite& c);

/// The product of two maximal classical sets is distinguishable (product
/// measurement, with a feasibility fallback) and cannot be extended by any
/// composite generator.
bool check_information_locality(const Composite& c, const ClassicalSet& cs_a,
                                const ClassicalSet& cs_b);

/// Classical set {alpha_i x beta_j} with measurement {a_i x b_j}; the maximal
/// flag records the information-locality verdict. Requires extremal product
/// states and a distinguishable product set; throws otherwise.
ClassicalSet composite_classical_set(const Composite& c, const ClassicalSet& cs_a,
                                     const ClassicalSet& cs_b);

/// Exact matrix equality of the composite-set decoherence with the tensor
/// product of the factor decoherences.
bool check_mid_factorization(const Composite& c, const ClassicalSet& cs_a,
                             const ClassicalSet& cs_b);

/// Recipes: "classical:d", "rtrit", "sqbit", "<atom>^N", "<left> x <right>"
/// (left-associated). max_dim caps the composite dimension.
Composite parse_recipe(const std::string& recipe, Index max_dim = 256);

}  // namespace gptforge
