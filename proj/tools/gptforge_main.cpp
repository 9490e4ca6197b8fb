#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gptforge/classicality.hpp"
#include "gptforge/composition.hpp"
#include "gptforge/decoherence.hpp"
#include "gptforge/objectivity.hpp"
#include "gptforge/theories.hpp"
#include "gptforge/theory_io.hpp"

using namespace gptforge;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

struct Report {
  std::vector<std::string> lines;
  ordered_json data = ordered_json::object();

  void say(const std::string& line) { lines.push_back(line); }
};

struct Output {
  bool json = false;
  std::string out_path;
};

void emit(const Report& report, const Output& output) {
  std::string text;
  if (output.json) {
    text = report.data.dump();
    text += "\n";
  } else {
    for (const std::string& line : report.lines) {
      text += line;
      text += "\n";
    }
  }
  std::cout << text;
  if (!output.out_path.empty()) {
    std::ofstream out(output.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write: " + output.out_path);
    out << text;
  }
}

Index max_dim_from_env() {
  const char* cap = std::getenv("GPTFORGE_MAX_DIM");
  if (!cap) return 256;
  try {
    return static_cast<Index>(std::stol(cap));
  } catch (const std::exception&) {
    throw std::invalid_argument("GPTFORGE_MAX_DIM is not a number");
  }
}

ordered_json vec_json(const RatVec& v) {
  ordered_json arr = ordered_json::array();
  for (const std::string& s : strings_from_vec(v)) arr.push_back(s);
  return arr;
}

ordered_json mat_json(const RatMat& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vec_json(RatVec(m.row(r).transpose())));
  }
  return rows;
}

std::string vec_text(const RatVec& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += rat_to_string(v(i));
  }
  return s + ")";
}

ordered_json measurement_json(const Measurement& m) {
  ordered_json arr = ordered_json::array();
  for (const RatVec& e : m.effects) arr.push_back(vec_json(e));
  return arr;
}

// Distinguishability of the given generator set plus maximality of the result.
struct SetStatus {
  std::optional<ClassicalSet> cs;
  std::string why;  // populated when cs is empty or non-maximal
};

SetStatus classical_set_from_indices(const System& sys, const std::vector<int>& indices) {
  if (indices.size() < 2) return {std::nullopt, "need at least two indices"};
  std::vector<RatVec> states;
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= sys.states.size()) {
      throw std::invalid_argument("state index out of range: " + std::to_string(i));
    }
    states.push_back(sys.states[static_cast<std::size_t>(i)]);
  }
  auto witness = is_distinguishable(sys, states);
  if (!witness) return {std::nullopt, "states are not jointly distinguishable"};
  ClassicalSet cs;
  cs.pure_indices = indices;
  cs.measurement = *witness;
  cs.maximal = true;
  for (int g = 0; g < static_cast<int>(sys.states.size()); ++g) {
    if (std::find(indices.begin(), indices.end(), g) != indices.end()) continue;
    std::vector<RatVec> extended = states;
    extended.push_back(sys.states[static_cast<std::size_t>(g)]);
    if (is_distinguishable(sys, extended)) {
      cs.maximal = false;
      return {cs, "set extends by generator " + std::to_string(g) + "; not maximal"};
    }
  }
  return {cs, ""};
}

int cmd_validate(const std::string& theory, const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  Report report;
  report.say("theory: " + c.base.name);
  report.data["command"] = "validate";
  report.data["theory"] = c.base.name;
  ordered_json checks = ordered_json::array();
  bool ok = true;
  for (const auto& [name, result] : validate_system_detail(c.base)) {
    report.say(name + ": " + (result.ok ? "ok" : result.message));
    ordered_json item;
    item["invariant"] = name;
    item["ok"] = result.ok;
    if (!result.ok) item["violation"] = result.message;
    checks.push_back(item);
    ok = ok && result.ok;
  }
  report.data["checks"] = checks;
  report.data["ok"] = ok;
  report.say(std::string("verdict: ") + (ok ? "ok" : "invalid"));
  emit(report, output);
  return ok ? kYes : kNo;
}

int cmd_distinguish(const std::string& theory, const std::string& states_path,
                    const std::vector<int>& set, bool all_pairs, const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  const System& sys = c.base;
  Report report;
  report.data["command"] = "distinguish";
  report.data["theory"] = sys.name;

  if (all_pairs) {
    const int n = static_cast<int>(sys.states.size());
    int feasible_count = 0;
    ordered_json pairs = ordered_json::array();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool ok = is_distinguishable(sys, {sys.states[static_cast<std::size_t>(i)],
                                                 sys.states[static_cast<std::size_t>(j)]})
                            .has_value();
        feasible_count += ok ? 1 : 0;
        report.say("pair (" + std::to_string(i) + "," + std::to_string(j) +
                   "): " + (ok ? "distinguishable" : "infeasible"));
        ordered_json entry;
        entry["pair"] = {i, j};
        entry["distinguishable"] = ok;
        pairs.push_back(entry);
      }
    }
    report.data["pairs"] = pairs;
    report.data["distinguishable_pairs"] = feasible_count;
    report.say("distinguishable pairs: " + std::to_string(feasible_count));
    emit(report, output);
    return feasible_count > 0 ? kYes : kNo;
  }

  std::vector<RatVec> states;
  if (!set.empty()) {
    for (int i : set) {
      if (i < 0 || static_cast<std::size_t>(i) >= sys.states.size()) {
        throw std::invalid_argument("state index out of range: " + std::to_string(i));
      }
      states.push_back(sys.states[static_cast<std::size_t>(i)]);
    }
  } else if (!states_path.empty()) {
    states = load_states(states_path, sys.dim);
  } else {
    throw std::invalid_argument("distinguish needs --set or --state");
  }
  const auto witness = is_distinguishable(sys, states);
  if (!witness) {
    report.data["distinguishable"] = false;
    report.say("infeasible");
    emit(report, output);
    return kNo;
  }
  report.data["distinguishable"] = true;
  report.data["measurement"] = measurement_json(*witness);
  report.say("distinguishable");
  for (std::size_t i = 0; i < witness->effects.size(); ++i) {
    report.say("a_" + std::to_string(i) + " = " + vec_text(witness->effects[i]));
  }
  emit(report, output);
  return kYes;
}

int cmd_classical_set(const std::string& theory, const std::vector<int>& seed, bool exhaustive,
                      const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  Report report;
  report.data["command"] = "classical-set";
  report.data["theory"] = c.base.name;
  const auto cs = extend_to_maximal(c.base, seed, exhaustive);
  if (!cs) {
    report.data["found"] = false;
    report.say("no classical set (no pair of pure states is distinguishable)");
    emit(report, output);
    return kNo;
  }
  report.data["found"] = true;
  ordered_json idx = ordered_json::array();
  std::string idx_text;
  for (int i : cs->pure_indices) {
    idx.push_back(i);
    if (!idx_text.empty()) idx_text += ",";
    idx_text += std::to_string(i);
  }
  report.data["pure_indices"] = idx;
  report.data["maximal"] = cs->maximal;
  report.data["measurement"] = measurement_json(cs->measurement);
  report.say("maximal classical set: {" + idx_text + "}");
  for (std::size_t i = 0; i < cs->measurement.effects.size(); ++i) {
    report.say("a_" + std::to_string(i) + " = " + vec_text(cs->measurement.effects[i]));
  }
  emit(report, output);
  return kYes;
}

int cmd_mid(const std::string& theory, const std::vector<int>& set, const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  Report report;
  report.data["command"] = "mid";
  report.data["theory"] = c.base.name;
  const SetStatus status = classical_set_from_indices(c.base, set);
  if (!status.cs || !status.cs->maximal) {
    report.data["ok"] = false;
    report.data["reason"] = status.why;
    report.say("cannot build the decoherence: " + status.why);
    emit(report, output);
    return kNo;
  }
  const RatMat d = mid(c.base, *status.cs);
  report.data["ok"] = true;
  report.data["matrix"] = mat_json(d);
  report.say("measurement-induced decoherence matrix:");
  for (Index r = 0; r < d.rows(); ++r) report.say("  " + vec_text(RatVec(d.row(r).transpose())));
  emit(report, output);
  return kYes;
}

int cmd_decohere(const std::string& theory, const std::vector<int>& set, const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  Report report;
  report.data["command"] = "decohere";
  report.data["theory"] = c.base.name;
  const SetStatus status = classical_set_from_indices(c.base, set);
  if (!status.cs || !status.cs->maximal) {
    report.data["ok"] = false;
    report.data["reason"] = status.why;
    report.say("cannot build the decoherence: " + status.why);
    emit(report, output);
    return kNo;
  }
  const DecoherenceReport suite = mid_property_suite(c.base, *status.cs);
  report.data["matrix"] = mat_json(suite.channel);
  report.data["complete_decoherence"] = suite.is_complete;
  report.data["idempotent"] = suite.idempotent;
  report.data["fixes_classical_effects"] = suite.fixes_classical_effects;
  report.say(std::string("complete decoherence: ") + (suite.is_complete ? "yes" : "no"));
  report.say(std::string("idempotent (D.D = D): ") + (suite.idempotent ? "yes" : "no"));
  report.say(std::string("fixes distinguishing effects: ") +
             (suite.fixes_classical_effects ? "yes" : "no"));
  ordered_json purity = ordered_json::array();
  for (const auto& [mixed, pure] : suite.purity_increasing_inputs) {
    report.say("purity increase: " + vec_text(mixed) + " -> " + vec_text(pure));
    ordered_json pair;
    pair["mixed"] = vec_json(mixed);
    pair["pure"] = vec_json(pure);
    purity.push_back(pair);
  }
  report.data["purity_increasing_inputs"] = purity;
  const DecoherenceUniqueness unique = complete_decoherence_uniqueness(c.base, *status.cs);
  report.data["unique_complete_decoherence"] = unique.unique;
  if (unique.second) {
    report.data["second_decoherence"] = mat_json(*unique.second);
    report.say("a second complete decoherence exists");
  } else {
    report.say("the MID is the unique complete decoherence on this set");
  }
  emit(report, output);
  const bool ok = suite.is_complete && suite.idempotent && suite.fixes_classical_effects;
  return ok ? kYes : kNo;
}

int cmd_compose(const std::string& theory, const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  Report report;
  report.data["command"] = "compose";
  report.data["theory"] = c.base.name;
  report.data["dim"] = c.base.dim;
  report.data["factors"] = static_cast<int>(c.factors.size());
  report.data["state_generators"] = static_cast<int>(c.base.states.size());
  report.data["effect_generators"] = static_cast<int>(c.base.effects.size());
  report.say("composite: " + c.base.name);
  report.say("dim: " + std::to_string(c.base.dim) + ", factors: " +
             std::to_string(c.factors.size()));
  report.say("state generators: " + std::to_string(c.base.states.size()) +
             ", effect generators: " + std::to_string(c.base.effects.size()));
  const ValidationResult valid = validate_system(c.base);
  const bool pure_products = check_axiom_product_pure(c);
  report.data["valid"] = valid.ok;
  report.data["product_states_pure"] = pure_products;
  report.say(std::string("valid system: ") + (valid.ok ? "yes" : valid.message));
  report.say(std::string("product states extremal: ") + (pure_products ? "yes" : "no"));
  if (!output.out_path.empty() && !output.json) {
    std::ofstream out(output.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write: " + output.out_path);
    out << save_theory(c.base);
    report.say("saved: " + output.out_path);
    Output stdout_only{output.json, ""};
    emit(report, stdout_only);
  } else {
    emit(report, output);
  }
  return (valid.ok && pure_products) ? kYes : kNo;
}

int cmd_complete(const std::string& theory, const Output& output) {
  const Composite c = load_theory(theory, max_dim_from_env());
  const System completed = unrestricted_completion(c.base);
  Report report;
  report.data["command"] = "complete";
  report.data["theory"] = c.base.name;
  report.data["was_unrestricted"] = is_unrestricted(c.base);
  report.data["effect_generators"] = ordered_json::array();
  for (const RatVec& e : completed.effects) report.data["effect_generators"].push_back(vec_json(e));
  report.say("completion of " + c.base.name + ":");
  report.say(std::string("was unrestricted: ") +
             (report.data["was_unrestricted"].get<bool>() ? "yes" : "no"));
  for (const RatVec& e : completed.effects) report.say("effect " + vec_text(e));
  report.data["file"] = ordered_json::parse(save_theory(completed));
  if (!output.out_path.empty() && !output.json) {
    std::ofstream out(output.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write: " + output.out_path);
    out << save_theory(completed);
    report.say("saved: " + output.out_path);
    Output stdout_only{output.json, ""};
    emit(report, stdout_only);
  } else {
    emit(report, output);
  }
  return kYes;
}

struct GameSetup {
  Composite composite;
  ClassicalSet cs;
  State rho;
  GameFile file;
};

GameSetup game_setup(const std::string& path) {
  const Index cap = max_dim_from_env();
  GameFile file = load_game_file(path, cap);
  Composite c = parse_recipe(file.system_recipe, cap);
  for (const std::string& frag : file.fragment_recipes) {
    c = min_tensor(c, parse_recipe(frag, cap));
  }
  const SetStatus status = classical_set_from_indices(c.factors[0], file.classical_set);
  if (!status.cs || !status.cs->maximal) {
    throw std::invalid_argument("game file: classical_set must be a maximal distinguishable set (" +
                                status.why + ")");
  }
  State rho = make_state(c.base, file.state);
  if (rho.norm != 1) throw std::invalid_argument("game file: state must be normalized");
  return {std::move(c), *status.cs, std::move(rho), std::move(file)};
}

ordered_json sbs_witness_json(const SbsWitness& w) {
  ordered_json out;
  ordered_json probs = ordered_json::array();
  for (const Rat& p : w.probs) probs.push_back(rat_to_string(p));
  out["probs"] = probs;
  out["pointer_indices"] = w.pointer_indices;
  ordered_json frags = ordered_json::array();
  for (const auto& row : w.fragment_states) {
    ordered_json frow = ordered_json::array();
    for (const State& s : row) frow.push_back(vec_json(s.vec));
    frags.push_back(frow);
  }
  out["fragment_states"] = frags;
  ordered_json meas = ordered_json::array();
  for (const Measurement& m : w.fragment_measurements) meas.push_back(measurement_json(m));
  out["fragment_measurements"] = meas;
  return out;
}

int cmd_sbs_check(const std::string& path, const Output& output) {
  const GameSetup setup = game_setup(path);
  Report report;
  report.data["command"] = "sbs-check";
  const SbsCheck check = is_sbs(setup.composite, setup.rho, setup.cs);
  report.data["is_sbs"] = check.is_sbs;
  if (check.is_sbs) {
    report.say("SBS: yes");
    report.data["witness"] = sbs_witness_json(*check.witness);
    for (std::size_t i = 0; i < check.witness->probs.size(); ++i) {
      report.say("p_" + std::to_string(i) + " = " + rat_to_string(check.witness->probs[i]) +
                 ", pointer " + std::to_string(check.witness->pointer_indices[i]));
    }
  } else {
    report.say("SBS: no (failed step " + std::to_string(check.failed_step) + ": " + check.reason +
               ")");
    report.data["failed_step"] = check.failed_step;
    report.data["reason"] = check.reason;
  }
  emit(report, output);
  return check.is_sbs ? kYes : kNo;
}

ordered_json outcome_json(const GameOutcome& outcome) {
  ordered_json out;
  ordered_json table = ordered_json::array();
  for (const auto& [tuple, p] : outcome.table) {
    ordered_json entry;
    entry["outcomes"] = tuple;
    entry["p"] = rat_to_string(p);
    table.push_back(entry);
  }
  out["table"] = table;
  out["agreement"] = outcome.agreement;
  out["non_disturbing"] = outcome.non_disturbing;
  out["win"] = outcome.win;
  return out;
}

int cmd_game(const std::string& path, const Output& output) {
  const GameSetup setup = game_setup(path);
  Report report;
  report.data["command"] = "game";
  const Referee referee = make_referee(setup.composite.factors[0], setup.cs);

  if (!setup.file.canonical_strategies) {
    if (setup.file.explicit_strategies.size() + 1 != setup.composite.factors.size()) {
      throw std::invalid_argument("game file: one strategy per fragment required");
    }
    std::vector<SrmTest> players;
    for (std::size_t k = 0; k < setup.file.explicit_strategies.size(); ++k) {
      players.push_back(
          make_srm(setup.composite.factors[k + 1], setup.file.explicit_strategies[k]));
    }
    const GameOutcome outcome = play_game(setup.composite, setup.rho, referee, players);
    report.data["mode"] = "explicit";
    report.data["outcome"] = outcome_json(outcome);
    report.say(outcome.win ? "WIN" : "LOSE");
    report.say(std::string("agreement: ") + (outcome.agreement ? "yes" : "no"));
    report.say(std::string("non-disturbance: ") + (outcome.non_disturbing ? "yes" : "no"));
    for (const auto& [tuple, p] : outcome.table) {
      if (p == 0) continue;
      std::string t = "p(";
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) t += ",";
        t += std::to_string(tuple[i]);
      }
      report.say(t + ") = " + rat_to_string(p));
    }
    emit(report, output);
    return outcome.win ? kYes : kNo;
  }

  const auto strategies = synthesize_winning_strategy(setup.composite, setup.rho, setup.cs);
  if (strategies) {
    const GameOutcome outcome = play_game(setup.composite, setup.rho, referee, *strategies);
    report.data["mode"] = "canonical-synthesized";
    report.data["outcome"] = outcome_json(outcome);
    report.say(outcome.win ? "WIN" : "LOSE");
    report.say(std::string("agreement: ") + (outcome.agreement ? "yes" : "no"));
    report.say(std::string("non-disturbance: ") + (outcome.non_disturbing ? "yes" : "no"));
    for (const auto& [tuple, p] : outcome.table) {
      if (p == 0) continue;
      std::string t = "p(";
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) t += ",";
        t += std::to_string(tuple[i]);
      }
      report.say(t + ") = " + rat_to_string(p));
    }
    emit(report, output);
    return outcome.win ? kYes : kNo;
  }

  // Not an SBS: sweep the canonical strategy family exhaustively.
  report.data["mode"] = "canonical-family";
  report.say("state is not an SBS; sweeping the canonical strategy family");
  const int d = static_cast<int>(referee.srm.branches.size());
  std::vector<std::vector<SrmTest>> per_fragment;
  std::size_t total = 1;
  for (std::size_t k = 1; k < setup.composite.factors.size(); ++k) {
    per_fragment.push_back(canonical_fragment_strategies(setup.composite.factors[k], d));
    total *= per_fragment.back().size();
  }
  if (total > 4096) throw std::invalid_argument("canonical family too large to sweep");
  std::vector<std::size_t> pick(per_fragment.size(), 0);
  bool any_win = false;
  int swept = 0;
  ordered_json sweeps = ordered_json::array();
  bool done = per_fragment.empty();
  while (!done) {
    std::vector<SrmTest> players;
    for (std::size_t k = 0; k < per_fragment.size(); ++k) players.push_back(per_fragment[k][pick[k]]);
    const GameOutcome outcome = play_game(setup.composite, setup.rho, referee, players);
    ordered_json entry;
    entry["strategy"] = swept;
    entry["agreement"] = outcome.agreement;
    entry["non_disturbing"] = outcome.non_disturbing;
    entry["win"] = outcome.win;
    sweeps.push_back(entry);
    any_win = any_win || outcome.win;
    ++swept;
    std::size_t pos = pick.size();
    while (pos > 0) {
      --pos;
      if (++pick[pos] < per_fragment[pos].size()) break;
      pick[pos] = 0;
      if (pos == 0) done = true;
    }
  }
  report.data["strategies_swept"] = swept;
  report.data["any_win"] = any_win;
  report.data["sweeps"] = sweeps;
  report.say("strategies swept: " + std::to_string(swept));
  report.say(any_win ? "WIN (some strategy)" : "LOSE (no canonical strategy wins)");
  emit(report, output);
  return any_win ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toolkit for polyhedral probabilistic theories"};
  app.require_subcommand(1);

  std::string theory, states_path, game_path;
  std::vector<int> set_indices, seed_indices;
  bool all_pairs = false, exhaustive = false;
  Output output;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", output.json, "machine-readable report");
    cmd->add_option("--out", output.out_path, "also write the report to a file");
  };

  CLI::App* validate = app.add_subcommand("validate", "check system invariants");
  validate->add_option("--theory", theory, "theory file or recipe")->required();
  add_common(validate);

  CLI::App* distinguish = app.add_subcommand("distinguish", "joint distinguishability");
  distinguish->add_option("--theory", theory)->required();
  distinguish->add_option("--state", states_path, "states file");
  distinguish->add_option("--set", set_indices, "generator indices")->delimiter(',');
  distinguish->add_flag("--all-pairs", all_pairs, "scan every generator pair");
  add_common(distinguish);

  CLI::App* classical_set = app.add_subcommand("classical-set", "maximal classical set");
  classical_set->add_option("--theory", theory)->required();
  classical_set->add_option("--seed", seed_indices, "seed indices")->delimiter(',');
  classical_set->add_flag("--exhaustive", exhaustive, "maximum instead of greedy maximal");
  add_common(classical_set);

  CLI::App* mid_cmd = app.add_subcommand("mid", "measurement-induced decoherence matrix");
  mid_cmd->add_option("--theory", theory)->required();
  mid_cmd->add_option("--set", set_indices, "classical set indices")->required()->delimiter(',');
  add_common(mid_cmd);

  CLI::App* decohere = app.add_subcommand("decohere", "decoherence property suite");
  decohere->add_option("--theory", theory)->required();
  decohere->add_option("--set", set_indices)->required()->delimiter(',');
  add_common(decohere);

  CLI::App* compose = app.add_subcommand("compose", "build a minimal tensor composite");
  compose->add_option("--theory", theory, "composite recipe")->required();
  add_common(compose);

  CLI::App* complete = app.add_subcommand("complete", "no-restriction completion");
  complete->add_option("--theory", theory)->required();
  add_common(complete);

  CLI::App* sbs = app.add_subcommand("sbs-check", "spectrum broadcast decomposition");
  sbs->add_option("--game", game_path, "game configuration file")->required();
  add_common(sbs);

  CLI::App* game = app.add_subcommand("game", "play the objectivity game");
  game->add_option("--game", game_path, "game configuration file")->required();
  add_common(game);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(theory, output);
    if (distinguish->parsed()) {
      return cmd_distinguish(theory, states_path, set_indices, all_pairs, output);
    }
    if (classical_set->parsed()) return cmd_classical_set(theory, seed_indices, exhaustive, output);
    if (mid_cmd->parsed()) return cmd_mid(theory, set_indices, output);
    if (decohere->parsed()) return cmd_decohere(theory, set_indices, output);
    if (compose->parsed()) return cmd_compose(theory, output);
    if (complete->parsed()) return cmd_complete(theory, output);
    if (sbs->parsed()) return cmd_sbs_check(game_path, output);
    if (game->parsed()) return cmd_game(game_path, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
