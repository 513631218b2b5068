#include <doctest.h>

#include <fstream>
#include <set>

#include "opfib/cli.hpp"
#include "opfib/finalg_json.hpp"

using namespace opfib;
using namespace opfib::cli;
using finalg::make_cyclic;

namespace {

bool next_digits(std::vector<int>& d, int radix) {
  for (std::size_t i = d.size(); i-- > 0;) {
    if (++d[i] < radix) return true;
    d[i] = 0;
  }
  return false;
}

// |H^2| as |normalized cocycles| / |coboundaries|, by exhausting all tables.
int brute_force_h2_order(const CModule& A) {
  const auto& C = A.C();
  const auto& B = A.B();
  const int n = C.size();
  const int e = C.identity();
  auto at = [&](const std::vector<int>& t, int x, int y) { return (x == e || y == e) ? B.zero() : t[x * n + y]; };
  std::vector<int> free_cells;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != e && y != e) free_cells.push_back(x * n + y);
  std::vector<int> digits(free_cells.size(), 0);
  std::vector<int> t(n * n, B.zero());
  int cocycles = 0;
  do {
    for (std::size_t i = 0; i < free_cells.size(); ++i) t[free_cells[i]] = digits[i];
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        for (int c = 0; c < n && ok; ++c)
          ok = B.add(A.act(a, at(t, b, c)), at(t, a, C.mul(b, c))) == B.add(at(t, a, b), at(t, C.mul(a, b), c));
    if (ok) ++cocycles;
  } while (next_digits(digits, B.size()));

  std::set<std::vector<int>> coboundaries;
  std::vector<int> g(n, 0);
  do {
    if (g[e] != B.zero()) continue;
    std::vector<int> d(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d[a * n + b] = B.sub(B.add(A.act(a, g[b]), g[a]), g[C.mul(a, b)]);
    coboundaries.insert(d);
  } while (next_digits(g, B.size()));
  return cocycles / static_cast<int>(coboundaries.size());
}

// Free transitive action tables on {0..|B|-1}.
int brute_force_torsor_count(const FiniteGroup& B) {
  const int n = B.size();
  std::vector<int> t(n * n, 0);
  int count = 0;
  do {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = t[B.identity() * n + x] == x;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        for (int x = 0; x < n && ok; ++x) ok = t[B.mul(a, b) * n + x] == t[a * n + t[b * n + x]];
    for (int x = 0; x < n && ok; ++x) {
      std::set<int> orbit;
      for (int b = 0; b < n; ++b) orbit.insert(t[b * n + x]);
      ok = static_cast<int>(orbit.size()) == n;
    }
    if (ok) ++count;
  } while (next_digits(t, n));
  return count;
}

}  // namespace

TEST_CASE("group spec parsing") {
  CHECK(parse_group("Z4") == static_cast<const FiniteGroup&>(make_cyclic(4)));
  CHECK(parse_group("Z2xZ4").size() == 8);
  CHECK(finalg::abelian_invariants(parse_group("Z2xZ3")) == std::vector<int>{6});
  CHECK(parse_group("Z1").size() == 1);
  for (const auto& [spec, pos] : std::vector<std::pair<std::string, std::size_t>>{
           {"", 0}, {"Q8", 0}, {"Z", 1}, {"Z0", 1}, {"Z2x", 3}, {"Z2*Z2", 2}, {"Z2xZ2xZ2xZ2xZ2xZ2xZ2", 19}}) {
    try {
      parse_group(spec);
      FAIL("accepted " << spec);
    } catch (const ParseError& ex) {
      CHECK_MESSAGE(ex.position() == pos, spec);
    }
  }
  CHECK_THROWS_AS(parse_group("@/nonexistent.json"), ParseError);
}

TEST_CASE("action spec parsing") {
  const auto Z2 = make_cyclic(2);
  const auto Z3 = make_cyclic(3);
  CHECK(parse_action("trivial", Z2, Z3) == CModule::trivial(Z2, Z3));
  const auto inv = parse_action("inv", Z2, Z3);
  CHECK(inv.act(1, 1) == 2);
  CHECK_THROWS_AS(parse_action("inv", Z3, Z3), ParseError);  // 1 + 1 = 2 would need (-1)(-1) = -1
  CHECK(parse_action("inv", Z3, Z2) == CModule::trivial(Z3, Z2));
  CHECK_THROWS_AS(parse_action("sign", Z2, Z3), ParseError);

  const std::string path = "cli_test_action.json";
  {
    std::ofstream(path) << "[[0,1,2],[0,2,1]]";
  }
  CHECK(parse_action("@" + path, Z2, Z3) == inv);
  {
    std::ofstream(path) << "[[0,1,2],[0,2,2]]";
  }
  CHECK_THROWS_AS(parse_action("@" + path, Z2, Z3), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("abelian group grid") {
  std::vector<std::string> names;
  for (const auto& g : abelian_groups_up_to(8)) names.push_back(g.name);
  CHECK(names == std::vector<std::string>{"Z1", "Z2", "Z3", "Z2xZ2", "Z4", "Z5", "Z6", "Z7", "Z2xZ2xZ2", "Z2xZ4", "Z8"});
  for (const auto& g : abelian_groups_up_to(8)) CHECK(parse_group(g.name).size() == g.group.size());
}

TEST_CASE("h2 reports agree with a brute-force cohomology oracle") {
  auto rows_for = [](const std::string& c, const std::string& b, const std::string& action) {
    const auto C = parse_group(c);
    const auto B = parse_abelian_group(b);
    return std::vector<H2Row>{{c, b, action, parse_action(action, C, B)}};
  };
  const auto r1 = cmd_h2(rows_for("Z2", "Z2", "trivial"), kDefaultBudget);
  CHECK(r1.json["rows"][0]["h2"] == nlohmann::json::array({2}));
  CHECK(r1.json["rows"][0]["pi0"] == nlohmann::json::array({2}));
  CHECK(r1.json["agree"] == true);
  CHECK(r1.text.find("AGREE") != std::string::npos);
  CHECK(r1.exit_code == kPass);

  const auto r2 = cmd_h2(rows_for("Z1", "Z4", "trivial"), kDefaultBudget);
  CHECK(r2.json["rows"][0]["h2"] == nlohmann::json::array());
  CHECK(r2.json["agree"] == true);

  for (const auto& [c, b, action] : std::vector<std::tuple<std::string, std::string, std::string>>{
           {"Z4", "Z2", "trivial"}, {"Z2", "Z3", "inv"}, {"Z3", "Z3", "trivial"}, {"Z2", "Z4", "inv"}, {"Z2", "Z2xZ2", "trivial"}}) {
    const auto rows = rows_for(c, b, action);
    const auto r = cmd_h2(rows, kDefaultBudget);
    int order = 1;
    for (int d : r.json["rows"][0]["h2"]) order *= d;
    CHECK_MESSAGE(order == brute_force_h2_order(rows[0].module), c << " " << b << " " << action);
    CHECK(r.json["agree"] == true);
  }
  CHECK(h2_grid(2, kDefaultBudget).size() == 4);
}

TEST_CASE("torsor reports agree with a brute-force count") {
  std::vector<std::pair<std::string, FiniteGroup>> groups;
  for (const auto& g : abelian_groups_up_to(3)) groups.emplace_back(g.name, g.group);
  const auto r = cmd_torsors(groups, kDefaultBudget);
  REQUIRE(r.json["groups"].size() == 3);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& row = r.json["groups"][i];
    CHECK(row["count"] == brute_force_torsor_count(groups[i].second));
    CHECK(row["pi0_classes"] == 1);
    CHECK(row["pi1_order"] == groups[i].second.size());
  }
  CHECK(r.json["groups"][1]["pi1"] == nlohmann::json::array({2}));
}

TEST_CASE("baer report") {
  const auto Z2 = make_cyclic(2);
  const auto A = CModule::trivial(Z2, Z2);
  const nlohmann::json split = {{"module", finalg::to_json(A)}, {"cocycle", {{0, 0}, {0, 0}}}};
  const nlohmann::json z4 = {{"module", finalg::to_json(A)}, {"cocycle", {{0, 0}, {0, 1}}}};
  CHECK(cmd_baer(z4, z4).json["split"] == true);
  CHECK(cmd_baer(z4, split).json["split"] == false);
  CHECK(cmd_baer(z4, split).json["result"] == z4);
  const nlohmann::json bad = {{"module", finalg::to_json(A)}, {"cocycle", {{0, 1}, {0, 0}}}};
  CHECK_THROWS_AS(cmd_baer(bad, z4), std::invalid_argument);
}

TEST_CASE("verify suites on the smallest grid") {
  for (const auto& name : suite_names()) {
    const auto r = cmd_verify(name, bounds_from_max(1, kDefaultBudget), 1);
    CHECK_MESSAGE(r.exit_code == kPass, name);
    CHECK(r.json["pass"] == true);
  }
  CHECK_THROWS_AS(run_suite("nonsense", bounds_from_max(1, kDefaultBudget)), std::invalid_argument);

  const auto g = cmd_verify("groupal", bounds_from_max(2, kDefaultBudget), 2);
  bool saw_expected_failure = false;
  for (const auto& inst : g.json["instances"])
    if (inst["fibration"] == "ACT") {
      CHECK(inst["expect"] == "fail");
      CHECK(inst["result"] == "fail");
      CHECK(inst["witness"].is_string());
      saw_expected_failure = true;
    }
  CHECK(saw_expected_failure);
  CHECK(g.exit_code == kPass);
}

TEST_CASE("budget exhaustion surfaces as ResourceLimit") {
  const auto rows = h2_grid(2, kDefaultBudget);
  CHECK_THROWS_AS(cmd_h2({rows.back()}, 1), ResourceLimit);
}
