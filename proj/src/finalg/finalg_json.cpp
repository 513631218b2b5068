#include "opfib/finalg_json.hpp"

#include <stdexcept>
#include <string>

namespace opfib::finalg {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace

std::vector<int> table_from_json(const nlohmann::json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(rows) * cols);
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw std::invalid_argument(std::string(what) + ": expected rows of length " + std::to_string(cols));
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw std::invalid_argument(std::string(what) + ": entries must be integers");
      flat.push_back(v.get<int>());
    }
  }
  return flat;
}

nlohmann::json table_to_json(const std::vector<int>& flat, int rows, int cols) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r < rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < cols; ++c) row.push_back(flat[static_cast<std::size_t>(r) * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json to_json(const FiniteMonoid& M) {
  return {{"size", M.size()}, {"mul", table_to_json(M.table(), M.size(), M.size())}, {"identity", M.identity()}};
}

nlohmann::json to_json(const FiniteGroup& G) {
  nlohmann::json j = to_json(static_cast<const FiniteMonoid&>(G));
  j["inv"] = G.inverses();
  return j;
}

nlohmann::json to_json(const CModule& module) {
  return {{"C", to_json(module.C())},
          {"B", to_json(static_cast<const FiniteGroup&>(module.B()))},
          {"xi", table_to_json(module.xi(), module.C().size(), module.B().size())}};
}

FiniteMonoid monoid_from_json(const nlohmann::json& j) {
  const int n = int_field(j, "size");
  if (n < 1) throw std::invalid_argument("size must be positive");
  return FiniteMonoid(n, table_from_json(field(j, "mul"), n, n, "mul"), int_field(j, "identity"));
}

FiniteGroup group_from_json(const nlohmann::json& j) {
  FiniteMonoid m = monoid_from_json(j);
  if (!j.contains("inv")) return FiniteGroup(m);
  const auto& inv = j.at("inv");
  if (!inv.is_array()) throw std::invalid_argument("field \"inv\" must be an array");
  std::vector<int> table;
  for (const auto& v : inv) {
    if (!v.is_number_integer()) throw std::invalid_argument("inv entries must be integers");
    table.push_back(v.get<int>());
  }
  return FiniteGroup(m.size(), m.table(), m.identity(), std::move(table));
}

FiniteAbelianGroup abelian_group_from_json(const nlohmann::json& j) {
  return FiniteAbelianGroup(group_from_json(j));
}

CModule module_from_json(const nlohmann::json& j) {
  FiniteGroup C = group_from_json(field(j, "C"));
  FiniteAbelianGroup B = abelian_group_from_json(field(j, "B"));
  std::vector<int> xi = table_from_json(field(j, "xi"), C.size(), B.size(), "xi");
  return CModule(std::move(C), std::move(B), std::move(xi));
}

}  // namespace opfib::finalg
