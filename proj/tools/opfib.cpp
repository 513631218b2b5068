// opfib: cohomology tables, torsor counts and fibration law suites on small instances.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "opfib/cli.hpp"
#include "opfib/finalg.hpp"

namespace {

using namespace opfib;
using namespace opfib::cli;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw std::invalid_argument(path + ": byte " + std::to_string(ex.byte) + ": malformed JSON");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extensions, torsors and opfibration checks on finite algebraic structures"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false;
  std::uint64_t budget = kDefaultBudget;
  int max = 3;
  app.add_flag("--json", json, "Emit JSON instead of a text table");
  app.add_option("--budget", budget, "Candidate budget for every enumeration")->check(CLI::PositiveNumber);
  app.add_option("--max", max, "Size bound for grids and suites")->check(CLI::Range(1, 16));

  std::string C_spec, B_spec, action = "trivial";
  bool h2_grid_flag = false;
  auto* h2 = app.add_subcommand("h2", "Compare pi0/pi1 of the extension fibre with H^2/Z^1");
  h2->add_option("--C", C_spec, "Quotient group: Z<n>, Z2xZ4 or @file.json");
  h2->add_option("--B", B_spec, "Kernel group: Z<n>, Z2xZ4 or @file.json");
  h2->add_option("--action", action, "trivial, inv, all or @file.json")->capture_default_str();
  h2->add_flag("--grid", h2_grid_flag, "Every (C, B, action) with |C|, |B| <= --max");

  std::vector<std::string> torsor_specs;
  bool torsors_grid_flag = false;
  auto* torsors = app.add_subcommand("torsors", "Count B-torsors and report pi0 and pi1 of TORS(B)");
  torsors->add_option("--B", torsor_specs, "Group spec, repeatable");
  torsors->add_flag("--grid", torsors_grid_flag, "Every abelian B with |B| <= --max");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a verification suite over the instance grid");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));

  std::string first_file, second_file;
  auto* baer = app.add_subcommand("baer", "Baer tensor of two extension files");
  baer->add_option("first", first_file, "Extension JSON")->required();
  baer->add_option("second", second_file, "Extension JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Report report;
    if (*h2) {
      std::vector<H2Row> rows;
      if (h2_grid_flag) {
        rows = h2_grid(max, budget);
      } else {
        if (C_spec.empty() || B_spec.empty()) throw std::invalid_argument("h2 needs --C and --B, or --grid");
        const FiniteGroup C = parse_group(C_spec);
        const FiniteAbelianGroup B = parse_abelian_group(B_spec);
        if (action == "all") {
          const auto modules = finalg::enumerate_modules(C, B, budget);
          for (std::size_t i = 0; i < modules.size(); ++i)
            rows.push_back({C_spec, B_spec, action_label(modules[i], static_cast<int>(i)), modules[i]});
        } else {
          rows.push_back({C_spec, B_spec, action, parse_action(action, C, B)});
        }
      }
      report = cmd_h2(rows, budget);
    } else if (*torsors) {
      std::vector<std::pair<std::string, FiniteGroup>> groups;
      if (torsors_grid_flag)
        for (const auto& g : abelian_groups_up_to(max)) groups.emplace_back(g.name, g.group);
      for (const auto& spec : torsor_specs) groups.emplace_back(spec, parse_group(spec));
      if (groups.empty()) throw std::invalid_argument("torsors needs --B or --grid");
      report = cmd_torsors(groups, budget);
    } else if (*verify) {
      report = cmd_verify(suite, bounds_from_max(max, budget), max);
    } else if (*baer) {
      report = cmd_baer(load_json(first_file), load_json(second_file));
    }
    if (json)
      std::cout << report.json.dump(2) << "\n";
    else
      std::cout << report.text;
    return report.exit_code;
  } catch (const ResourceLimit& ex) {
    std::cerr << "resource limit: " << ex.what() << "\n";
    return kResource;
  } catch (const InternalInconsistency& ex) {
    std::cerr << "internal inconsistency: " << ex.what() << "\n";
    return kSuiteFailure;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }
}
