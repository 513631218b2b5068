#pragma once

// Batch frontend: parsing of group and action specs, the h2 / torsors / baer
// reports, and the verification suites over the small-instance grid. Every
// report carries deterministic JSON and an aligned text rendering.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opfib/errors.hpp"
#include "opfib/finalg.hpp"

namespace opfib::cli {

using finalg::CModule;
using finalg::FiniteAbelianGroup;
using finalg::FiniteGroup;

enum ExitCode : int { kPass = 0, kSuiteFailure = 1, kUsage = 2, kResource = 3 };

/// Malformed spec; position is the offending character offset in the spec text.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& spec, std::size_t position, const std::string& what);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// `Z<n>`, products such as `Z2xZ4`, or `@file.json`.
FiniteGroup parse_group(const std::string& spec);
FiniteAbelianGroup parse_abelian_group(const std::string& spec);

/// `trivial`, `inv` (every non-identity element acts by negation), or `@file.json`
/// holding an xi table or a whole module.
CModule parse_action(const std::string& spec, const FiniteGroup& C, const FiniteAbelianGroup& B);

/// The action of every c != e by b -> -b; throws std::invalid_argument when that is not an action.
CModule inversion_action(const FiniteGroup& C, const FiniteAbelianGroup& B);

struct NamedGroup {
  std::string name;
  FiniteAbelianGroup group;
};

/// Abelian groups of order at most n up to isomorphism, one per invariant-factor
/// list, ordered by order and then by factors.
std::vector<NamedGroup> abelian_groups_up_to(int n);

/// "trivial", "inv", or "xi#i" with i the position in enumerate_modules.
std::string action_label(const CModule& module, int index);

struct Report {
  nlohmann::json json;
  std::string text;
  int exit_code = kPass;
};

struct H2Row {
  std::string C, B, action;
  CModule module;
};

/// One row per module, each comparing pi0 of OPEXT with H^2 and pi1 with Z^1.
Report cmd_h2(const std::vector<H2Row>& rows, std::uint64_t budget);
/// Every (C, B, xi) with C, B of order at most max.
std::vector<H2Row> h2_grid(int max, std::uint64_t budget);

/// Torsor count, pi0 and pi1 of TORS(B) for each named group.
Report cmd_torsors(const std::vector<std::pair<std::string, FiniteGroup>>& groups, std::uint64_t budget);

/// Baer tensor of two extensions given in the extension JSON format.
Report cmd_baer(const nlohmann::json& first, const nlohmann::json& second);

struct SuiteBounds {
  int ext_max = 3;      // C and B orders for OPEXT instances
  int act_monoids = 3;  // monoid orders for ACT instances
  int act_carrier = 3;  // M-set carriers for ACT instances
  int tors_max = 4;     // |B| and carriers for TORS instances
  std::uint64_t budget = kDefaultBudget;
};

SuiteBounds bounds_from_max(int max, std::uint64_t budget);

struct InstanceResult {
  std::string fibration;
  std::string instance;
  bool expect_pass = true;
  bool pass = true;
  std::uint64_t checked = 0;
  bool sampled = false;
  std::string witness;

  bool ok() const { return pass == expect_pass; }
};

const std::vector<std::string>& suite_names();

/// Runs one of suite_names(); throws std::invalid_argument for an unknown name.
std::vector<InstanceResult> run_suite(const std::string& name, const SuiteBounds& bounds);

Report cmd_verify(const std::string& name, const SuiteBounds& bounds, int max);

}  // namespace opfib::cli
