#pragma once

// JSON presentations: algebras as {"size", "mul", "identity"} with optional
// "inv", modules as {"C", "B", "xi"}. Readers validate through the usual
// constructors and throw std::invalid_argument on malformed input.

#include <json.hpp>

#include "opfib/finalg.hpp"

namespace opfib::finalg {

nlohmann::json to_json(const FiniteMonoid& M);
nlohmann::json to_json(const FiniteGroup& G);
nlohmann::json to_json(const CModule& module);

FiniteMonoid monoid_from_json(const nlohmann::json& j);
FiniteGroup group_from_json(const nlohmann::json& j);
FiniteAbelianGroup abelian_group_from_json(const nlohmann::json& j);
CModule module_from_json(const nlohmann::json& j);

/// Reads a rows-of-ints table with the given shape.
std::vector<int> table_from_json(const nlohmann::json& j, int rows, int cols, const char* what);
nlohmann::json table_to_json(const std::vector<int>& flat, int rows, int cols);

}  // namespace opfib::finalg
