#include <algorithm>

#include "opfib/act.hpp"
#include "opfib/cli.hpp"
#include "opfib/cohom.hpp"
#include "opfib/ext.hpp"
#include "opfib/finalg_json.hpp"
#include "text_table.hpp"

namespace opfib::cli {

std::vector<H2Row> h2_grid(int max, std::uint64_t budget) {
  std::vector<H2Row> rows;
  const auto groups = abelian_groups_up_to(max);
  for (const auto& C : groups)
    for (const auto& B : groups) {
      const auto modules = finalg::enumerate_modules(C.group, B.group, budget);
      for (std::size_t i = 0; i < modules.size(); ++i)
        rows.push_back(H2Row{C.name, B.name, action_label(modules[i], static_cast<int>(i)), modules[i]});
    }
  return rows;
}

Report cmd_h2(const std::vector<H2Row>& rows, std::uint64_t budget) {
  Report report;
  report.json = {{"command", "h2"}, {"rows", nlohmann::json::array()}};
  std::vector<std::vector<std::string>> text_rows;
  bool all_agree = true;
  for (const auto& row : rows) {
    const auto p0 = finalg::abelian_invariants(ext::pi0(row.module, budget).group);
    const auto h2 = finalg::abelian_invariants(cohom::h2_group(row.module, budget).group);
    const auto p1 = finalg::abelian_invariants(ext::pi1(row.module).group);
    const auto z1 = finalg::abelian_invariants(cohom::z1_group(row.module, budget).group);
    const bool agree = p0 == h2 && p1 == z1;
    all_agree = all_agree && agree;
    report.json["rows"].push_back({{"C", row.C},
                                   {"B", row.B},
                                   {"action", row.action},
                                   {"xi", finalg::table_to_json(row.module.xi(), row.module.C().size(),
                                                                row.module.B().size())},
                                   {"pi0", p0},
                                   {"h2", h2},
                                   {"pi1", p1},
                                   {"z1", z1},
                                   {"agree", agree}});
    text_rows.push_back({row.C, row.B, row.action, list_text(p0), list_text(h2), list_text(p1), list_text(z1),
                         agree ? "AGREE" : "DISAGREE"});
  }
  report.json["agree"] = all_agree;
  report.text = render_table({"C", "B", "action", "pi0", "H2", "pi1", "Z1", "status"}, text_rows);
  report.exit_code = all_agree ? kPass : kSuiteFailure;
  return report;
}

Report cmd_torsors(const std::vector<std::pair<std::string, FiniteGroup>>& groups, std::uint64_t budget) {
  Report report;
  report.json = {{"command", "torsors"}, {"groups", nlohmann::json::array()}};
  std::vector<std::vector<std::string>> text_rows;
  for (const auto& [name, B] : groups) {
    const auto inv = act::tors_pi0_pi1(B, budget);
    nlohmann::json pi1 = nullptr;
    std::string pi1_text = "non-abelian";
    if (inv.pi1.is_commutative()) {
      const auto factors = finalg::abelian_invariants(inv.pi1);
      pi1 = factors;
      pi1_text = list_text(factors);
    }
    report.json["groups"].push_back({{"B", name},
                                     {"order", B.size()},
                                     {"count", inv.count},
                                     {"pi0_classes", inv.classes},
                                     {"pi1_order", inv.pi1.size()},
                                     {"pi1", pi1}});
    text_rows.push_back({name, std::to_string(inv.count), std::to_string(inv.classes), pi1_text});
  }
  report.text = render_table({"B", "torsors", "pi0", "pi1"}, text_rows);
  return report;
}

Report cmd_baer(const nlohmann::json& first, const nlohmann::json& second) {
  const ext::Extension E1 = ext::extension_from_json(first);
  const ext::Extension E2 = ext::extension_from_json(second);
  if (!(E1.module() == E2.module())) throw std::invalid_argument("baer: the two extensions have different modules");
  const ext::Extension E = ext::baer_tensor(E1, E2);
  const auto p0 = ext::pi0(E.module());
  const auto fibre = ext::fibre_enumerate(E.module());
  const auto at = std::find(fibre.begin(), fibre.end(), E);
  if (at == fibre.end()) throw InternalInconsistency("baer tensor is missing from the fibre enumeration");
  const int cls = p0.class_of[at - fibre.begin()];
  Report report;
  report.json = {{"command", "baer"}, {"result", ext::to_json(E)}, {"class", cls}, {"split", cls == 0}};
  report.text = ext::describe(E) + "\nclass " + std::to_string(cls) + (cls == 0 ? " (split)" : "") + "\n";
  return report;
}

}  // namespace opfib::cli
