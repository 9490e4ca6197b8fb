#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gptforge/composition.hpp"
#include "gptforge/decoherence.hpp"

namespace gptforge {

/// A test whose branches satisfy P_i P_j = delta_ij P_i exactly.
struct SrmTest {
  std::vector<RatMat> branches;
};

/// The sharp-repeatability predicate alone: every ordered product of branches
/// collapses per the Kronecker delta.
bool is_srm(const std::vector<RatMat>& branches);

/// Validates both the test structure (positive branches coarse-graining to a
/// channel on sys) and sharp repeatability; throws on violation.
SrmTest make_srm(const System& sys, std::vector<RatMat> branches);

/// Parallel composition {P_i x Q_j}, i-major.
SrmTest srm_product(const SrmTest& p, const SrmTest& q);

struct RenormalizedBranches {
  std::vector<int> surviving;            // indices with P_i rho != 0
  std::vector<State> states;             // P_i rho / (u|P_i|rho)
  std::optional<Measurement> witness;    // absent when only one branch survives
};

/// Renormalizes the nonvanishing branch outputs of an SRM on rho and builds
/// the distinguishing measurement a_i = u.P_i, with the unused branches'
/// effects folded into the first surviving index. The delta contract is
/// verified before returning.
RenormalizedBranches srm_distinguishability_lemma(const System& sys, const SrmTest& srm,
                                                  const State& rho);

/// Certificate that a joint state has the broadcast form
/// sum_i p_i alpha_i x rho_{i,1} x ... x rho_{i,n}.
struct SbsWitness {
  std::vector<Rat> probs;                           // positive, summing to 1
  std::vector<int> pointer_indices;                 // generator indices on the system factor
  std::vector<std::vector<State>> fragment_states;  // [branch][fragment]
  std::vector<Measurement> fragment_measurements;   // one per fragment
};

/// Assembles the broadcast state from its parts, validating positivity of the
/// probabilities, their sum, and every per-fragment delta contract.
std::pair<State, SbsWitness> build_sbs(const Composite& c, const ClassicalSet& cs_s,
                                       const std::vector<Rat>& probs,
                                       const std::vector<std::vector<State>>& fragment_states,
                                       const std::vector<Measurement>& fragment_measurements);

struct SbsCheck {
  bool is_sbs = false;
  int failed_step = 0;  // 1..5 per the decision procedure, 0 on success
  std::string reason;
  std::optional<SbsWitness> witness;
};

/// Decision procedure: (1) pointer probabilities, (2) conditional environment
/// states, (3) exact reconstruction, (4) factorization across fragments,
/// (5) per-fragment distinguishability.
SbsCheck is_sbs(const Composite& c, const State& rho, const ClassicalSet& cs_s);

/// The referee's move: the measure-and-prepare SRM of a maximal classical set
/// on the system factor.
struct Referee {
  ClassicalSet cs;
  SrmTest srm;
};

Referee make_referee(const System& s, const ClassicalSet& cs);

struct GameOutcome {
  std::vector<std::pair<std::vector<int>, Rat>> table;  // (i, j_1..j_n) -> probability
  bool agreement = false;
  bool non_disturbing = false;
  bool win = false;
};

/// Evaluates the joint outcome table exactly. Agreement demands every
/// off-diagonal entry be exactly zero; non-disturbance demands the diagonal
/// coarse-graining fix rho exactly.
GameOutcome play_game(const Composite& c, const State& rho, const Referee& referee,
                      const std::vector<SrmTest>& players);

/// On an SBS verdict, returns the per-fragment measure-and-prepare SRMs built
/// from the witness; nullopt otherwise.
std::optional<std::vector<SrmTest>> synthesize_winning_strategy(const Composite& c,
                                                                const State& rho,
                                                                const ClassicalSet& cs_s);

/// All measure-and-prepare SRMs over ordered distinguishable tuples of the
/// fragment's generators, up to the given tuple length.
std::vector<SrmTest> canonical_fragment_strategies(const System& fragment, int max_len);

struct FixedPointReport {
  std::vector<State> fixed_states;  // normalized cone states on the sampling schedule
  bool all_sbs = true;
};

/// Builds the diagonal game channel, computes its fixed subspace, samples
/// rational convex combinations of the projected generators (denominators up
/// to 4), and checks every normalized cone state found against is_sbs.
FixedPointReport fixed_point_sbs_check(const Composite& c, const Referee& referee,
                                       const std::vector<SrmTest>& players);

}  // namespace gptforge
