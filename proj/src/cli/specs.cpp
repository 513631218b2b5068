#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "opfib/cli.hpp"
#include "opfib/finalg_json.hpp"

namespace opfib::cli {

namespace {

constexpr int kMaxOrder = 64;

nlohmann::json read_json_file(const std::string& spec) {
  const std::string path = spec.substr(1);
  std::ifstream in(path);
  if (!in) throw ParseError(spec, 1, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(spec, 1, path + ": byte " + std::to_string(ex.byte) + ": malformed JSON");
  }
}

std::string group_name(const std::vector<int>& factors) {
  if (factors.empty()) return "Z1";
  std::string s;
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "xZ" : "Z") + std::to_string(factors[i]);
  return s;
}

}  // namespace

ParseError::ParseError(const std::string& spec, std::size_t position, const std::string& what)
    : std::invalid_argument("cannot parse '" + spec + "' at position " + std::to_string(position) + ": " + what),
      position_(position) {}

FiniteGroup parse_group(const std::string& spec) {
  if (spec.empty()) throw ParseError(spec, 0, "empty group spec");
  if (spec.front() == '@') {
    const nlohmann::json j = read_json_file(spec);
    try {
      return finalg::group_from_json(j);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(spec, 1, ex.what());
    }
  }
  std::size_t pos = 0;
  FiniteAbelianGroup G = finalg::make_cyclic(1);
  bool first = true;
  while (true) {
    if (pos >= spec.size() || spec[pos] != 'Z') throw ParseError(spec, pos, "expected 'Z'");
    ++pos;
    const std::size_t digits = pos;
    while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos]))) ++pos;
    if (pos == digits) throw ParseError(spec, pos, "expected a positive integer");
    if (pos - digits > 3) throw ParseError(spec, digits, "order too large");
    const int n = std::stoi(spec.substr(digits, pos - digits));
    if (n < 1) throw ParseError(spec, digits, "expected a positive integer");
    if (G.size() * n > kMaxOrder) throw ParseError(spec, digits, "orders above 64 are not supported");
    G = first ? finalg::make_cyclic(n) : finalg::direct_product(G, finalg::make_cyclic(n));
    first = false;
    if (pos == spec.size()) return G;
    if (spec[pos] != 'x') throw ParseError(spec, pos, "expected 'x' or end of spec");
    ++pos;
  }
}

FiniteAbelianGroup parse_abelian_group(const std::string& spec) {
  const FiniteGroup G = parse_group(spec);
  try {
    return FiniteAbelianGroup(G);
  } catch (const std::invalid_argument&) {
    throw ParseError(spec, 0, "group is not abelian");
  }
}

CModule inversion_action(const FiniteGroup& C, const FiniteAbelianGroup& B) {
  std::vector<int> xi(static_cast<std::size_t>(C.size()) * B.size());
  for (int c = 0; c < C.size(); ++c)
    for (int b = 0; b < B.size(); ++b) xi[static_cast<std::size_t>(c) * B.size() + b] = c == C.identity() ? b : B.neg(b);
  return CModule(C, B, std::move(xi));
}

CModule parse_action(const std::string& spec, const FiniteGroup& C, const FiniteAbelianGroup& B) {
  if (spec == "trivial") return CModule::trivial(C, B);
  if (spec == "inv") {
    try {
      return inversion_action(C, B);
    } catch (const std::invalid_argument&) {
      throw ParseError(spec, 0, "inversion is not an action of this C on this B");
    }
  }
  if (spec.empty() || spec.front() != '@') throw ParseError(spec, 0, "expected 'trivial', 'inv' or '@file.json'");
  const nlohmann::json j = read_json_file(spec);
  try {
    if (j.is_object()) {
      CModule module = finalg::module_from_json(j);
      if (!(module.C() == C) || !(static_cast<const FiniteGroup&>(module.B()) == static_cast<const FiniteGroup&>(B)))
        throw ParseError(spec, 1, "module file does not match --C and --B");
      return module;
    }
    return CModule(C, B, finalg::table_from_json(j, C.size(), B.size(), "xi"));
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ParseError(spec, 1, ex.what());
  }
}

std::vector<NamedGroup> abelian_groups_up_to(int n) {
  std::vector<std::vector<int>> lists = {{}};
  std::function<void(std::vector<int>&, int)> grow = [&](std::vector<int>& factors, int order) {
    const int last = factors.empty() ? 1 : factors.back();
    for (int d = std::max(2, last); order * d <= n; d += last) {
      factors.push_back(d);
      lists.push_back(factors);
      grow(factors, order * d);
      factors.pop_back();
    }
  };
  std::vector<int> scratch;
  grow(scratch, 1);
  auto order = [](const std::vector<int>& f) {
    int o = 1;
    for (int d : f) o *= d;
    return o;
  };
  std::sort(lists.begin(), lists.end(), [&](const auto& a, const auto& b) {
    return order(a) != order(b) ? order(a) < order(b) : a < b;
  });
  std::vector<NamedGroup> out;
  for (const auto& f : lists) {
    FiniteAbelianGroup G = finalg::make_cyclic(1);
    for (std::size_t i = 0; i < f.size(); ++i) G = i ? finalg::direct_product(G, finalg::make_cyclic(f[i])) : finalg::make_cyclic(f[i]);
    out.push_back(NamedGroup{group_name(f), std::move(G)});
  }
  return out;
}

std::string action_label(const CModule& module, int index) {
  if (module == CModule::trivial(module.C(), module.B())) return "trivial";
  try {
    if (module == inversion_action(module.C(), module.B())) return "inv";
  } catch (const std::invalid_argument&) {
  }
  return "xi#" + std::to_string(index);
}

}  // namespace opfib::cli
