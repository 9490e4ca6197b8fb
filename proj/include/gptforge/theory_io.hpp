#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gptforge/composition.hpp"

namespace gptforge {

/// Canonical serialized form: fixed key order, compact separators, rationals
/// as lowest-terms strings. Loading then saving a canonical file reproduces
/// it byte for byte.
std::string save_theory(const System& sys);

System theory_from_json_text(const std::string& text);

/// Accepts a path to a theory file or a recipe string ("classical:3",
/// "rtrit^2", "sqbit x classical:2"). File contents may themselves delegate
/// to a recipe via a "recipe" key.
Composite load_theory(const std::string& path_or_recipe, Index max_dim = 256);

/// States file: {"states": [[rational strings...], ...]}.
std::vector<RatVec> load_states(const std::string& path, Index dim);

struct GameFile {
  std::string system_recipe;
  std::vector<std::string> fragment_recipes;
  std::vector<int> classical_set;
  RatVec state;
  bool canonical_strategies = true;
  std::vector<std::vector<RatMat>> explicit_strategies;  // per fragment when not canonical
};

GameFile load_game_file(const std::string& path, Index max_dim = 256);

}  // namespace gptforge
