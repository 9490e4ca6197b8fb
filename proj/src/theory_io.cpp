#include "gptforge/theory_io.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace gptforge {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json vec_to_json(const RatVec& v) {
  ordered_json arr = ordered_json::array();
  for (const std::string& s : strings_from_vec(v)) arr.push_back(s);
  return arr;
}

RatVec vec_from_json(const ordered_json& arr, Index expected_dim, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  std::vector<std::string> strings;
  for (const auto& item : arr) {
    if (!item.is_string()) {
      throw std::invalid_argument(std::string(what) + ": rationals must be quoted strings");
    }
    strings.push_back(item.get<std::string>());
  }
  RatVec v = vec_from_strings(strings);
  if (expected_dim >= 0 && v.size() != expected_dim) {
    throw std::invalid_argument(std::string(what) + ": wrong dimension");
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ordered_json parse_json(const std::string& text, const std::string& origin) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
}

}  // namespace

std::string save_theory(const System& sys) {
  ordered_json j;
  j["format_version"] = 1;
  j["name"] = sys.name;
  j["dim"] = sys.dim;
  j["generators_exhaustive"] = sys.generators_exhaustive;
  j["unit"] = vec_to_json(sys.unit);
  ordered_json states = ordered_json::array();
  for (const RatVec& g : sys.states) states.push_back(vec_to_json(g));
  j["state_generators"] = states;
  ordered_json effects = ordered_json::array();
  for (const RatVec& e : sys.effects) effects.push_back(vec_to_json(e));
  j["effect_generators"] = effects;
  return j.dump();
}

namespace {

System theory_from_json(const ordered_json& j) {
  if (!j.is_object()) throw std::invalid_argument("theory file: expected an object");
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1) {
    throw std::invalid_argument("theory file: unsupported format_version");
  }
  System sys;
  sys.name = j.value("name", std::string("unnamed"));
  if (!j.contains("dim")) throw std::invalid_argument("theory file: missing dim");
  sys.dim = j["dim"].get<Index>();
  if (sys.dim < 1) throw std::invalid_argument("theory file: dim must be positive");
  sys.generators_exhaustive = j.value("generators_exhaustive", true);
  if (!j.contains("unit")) throw std::invalid_argument("theory file: missing unit");
  sys.unit = vec_from_json(j["unit"], sys.dim, "unit");
  for (const char* key : {"state_generators", "effect_generators"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("theory file: missing ") + key);
    if (!j[key].is_array()) throw std::invalid_argument(std::string(key) + ": expected an array");
  }
  for (const auto& g : j["state_generators"]) {
    sys.states.push_back(vec_from_json(g, sys.dim, "state generator"));
  }
  for (const auto& e : j["effect_generators"]) {
    sys.effects.push_back(vec_from_json(e, sys.dim, "effect generator"));
  }
  return sys;
}

}  // namespace

System theory_from_json_text(const std::string& text) {
  return theory_from_json(parse_json(text, "theory file"));
}

Composite load_theory(const std::string& path_or_recipe, Index max_dim) {
  if (std::filesystem::exists(path_or_recipe)) {
    const ordered_json j = parse_json(read_file(path_or_recipe), path_or_recipe);
    if (j.is_object() && j.contains("recipe")) {
      return parse_recipe(j["recipe"].get<std::string>(), max_dim);
    }
    Composite c = as_composite(theory_from_json(j));
    if (c.base.dim > max_dim) throw std::invalid_argument("theory exceeds the dimension cap");
    return c;
  }
  return parse_recipe(path_or_recipe, max_dim);
}

std::vector<RatVec> load_states(const std::string& path, Index dim) {
  const ordered_json j = parse_json(read_file(path), path);
  if (!j.is_object() || !j.contains("states") || !j["states"].is_array()) {
    throw std::invalid_argument("states file: expected {\"states\": [...]}");
  }
  std::vector<RatVec> out;
  for (const auto& s : j["states"]) out.push_back(vec_from_json(s, dim, "state"));
  return out;
}

GameFile load_game_file(const std::string& path, Index max_dim) {
  const ordered_json j = parse_json(read_file(path), path);
  if (!j.is_object()) throw std::invalid_argument("game file: expected an object");
  GameFile game;
  if (!j.contains("system") || !j.contains("fragments") || !j.contains("classical_set") ||
      !j.contains("state")) {
    throw std::invalid_argument("game file: system, fragments, classical_set, state required");
  }
  game.system_recipe = j["system"].get<std::string>();
  for (const auto& f : j["fragments"]) game.fragment_recipes.push_back(f.get<std::string>());
  if (game.fragment_recipes.empty()) throw std::invalid_argument("game file: no fragments");
  for (const auto& idx : j["classical_set"]) game.classical_set.push_back(idx.get<int>());

  Composite c = parse_recipe(game.system_recipe, max_dim);
  for (const std::string& frag : game.fragment_recipes) {
    c = min_tensor(c, parse_recipe(frag, max_dim));
    if (c.base.dim > max_dim) throw std::invalid_argument("game exceeds the dimension cap");
  }
  game.state = vec_from_json(j["state"], c.base.dim, "state");

  if (j.contains("strategies") && !j["strategies"].is_string()) {
    game.canonical_strategies = false;
    for (const auto& player : j["strategies"]) {
      std::vector<RatMat> branches;
      for (const auto& branch : player) {
        std::vector<RatVec> rows;
        for (const auto& row : branch) rows.push_back(vec_from_json(row, -1, "strategy row"));
        if (rows.empty()) throw std::invalid_argument("strategy branch: no rows");
        RatMat m(static_cast<Index>(rows.size()), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != m.cols()) throw std::invalid_argument("strategy branch: ragged rows");
          m.row(static_cast<Index>(r)) = rows[r].transpose();
        }
        branches.push_back(std::move(m));
      }
      game.explicit_strategies.push_back(std::move(branches));
    }
  } else if (j.contains("strategies") && j["strategies"].get<std::string>() != "canonical") {
    throw std::invalid_argument("game file: strategies must be \"canonical\" or explicit matrices");
  }
  return game;
}

}  // namespace gptforge
