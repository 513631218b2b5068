#include <algorithm>
#include <functional>
#include <map>

#include "opfib/act.hpp"
#include "opfib/cli.hpp"
#include "opfib/ext.hpp"
#include "opfib/fib.hpp"
#include "text_table.hpp"

namespace opfib::cli {

namespace {

using act::ActFibration;
using act::MSet;
using ext::ExtFibration;
using finalg::FiniteMonoid;

struct NamedModule {
  std::string name;
  CModule module;
};

struct Instances {
  std::vector<InstanceResult> out;

  // Runs body into a fresh verdict; oracle inconsistencies become failures.
  void run(const std::string& fibration, const std::string& instance, bool expect_pass,
           const std::function<void(fib::Verdict&)>& body) {
    fib::Verdict v;
    try {
      body(v);
    } catch (const InternalInconsistency& ex) {
      v.absorb(fib::Verdict::fail(ex.what()));
    }
    out.push_back(InstanceResult{fibration, instance, expect_pass, v.pass, v.checked, v.sampled,
                                 v.witness.value_or("")});
  }
};

std::vector<NamedModule> modules_over(const NamedGroup& C, int b_max, std::uint64_t budget) {
  std::vector<NamedModule> out;
  for (const auto& B : abelian_groups_up_to(b_max)) {
    const auto modules = finalg::enumerate_modules(C.group, B.group, budget);
    for (std::size_t i = 0; i < modules.size(); ++i)
      out.push_back({"C=" + C.name + " B=" + B.name + " xi=" + action_label(modules[i], static_cast<int>(i)),
                     modules[i]});
  }
  return out;
}

std::vector<FiniteMonoid> monoids_up_to(int n) {
  std::vector<FiniteMonoid> out;
  for (int k = 1; k <= n; ++k)
    for (auto& M : finalg::enumerate_monoids(k)) out.push_back(std::move(M));
  return out;
}

std::string monoid_name(const FiniteMonoid& M, int index) {
  return "M" + std::to_string(M.size()) + "#" + std::to_string(index);
}

bool is_group(const FiniteMonoid& M) {
  for (int x = 0; x < M.size(); ++x) {
    bool found = false;
    for (int y = 0; y < M.size() && !found; ++y) found = M.mul(x, y) == M.identity() && M.mul(y, x) == M.identity();
    if (!found) return false;
  }
  return true;
}

ExtFibration ext_fibration(const FiniteGroup& C, const SuiteBounds& b) {
  ExtFibration::Options o;
  o.budget = b.budget;
  o.target_module_bound = std::max(3, b.ext_max);
  return ExtFibration(C, o);
}

ActFibration act_fibration(int carrier, const SuiteBounds& b, bool torsors = false) {
  ActFibration::Options o;
  o.budget = b.budget;
  o.fibre_carrier = carrier;
  o.identity_carrier = std::max(4, carrier);
  o.torsors = torsors;
  return ActFibration(o);
}

std::vector<MSet> msets_up_to(const FiniteMonoid& M, int carrier, std::uint64_t budget) {
  std::vector<MSet> out;
  for (int k = 0; k <= carrier; ++k)
    for (auto& X : act::enumerate_msets(M, k, budget)) out.push_back(std::move(X));
  return out;
}

finalg::ModuleMorphism negation(const CModule& A) {
  std::vector<int> map(A.B().size());
  for (int b = 0; b < A.B().size(); ++b) map[b] = A.B().neg(b);
  return finalg::ModuleMorphism{A, A, std::move(map)};
}

finalg::Hom group_inverse(const FiniteGroup& B) {
  std::vector<int> map(B.size());
  for (int b = 0; b < B.size(); ++b) map[b] = B.inv(b);
  return finalg::Hom{B, B, std::move(map)};
}

// -- suites ------------------------------------------------------------------

void suite_oplax(Instances& res, const SuiteBounds& b) {
  for (const auto& C : abelian_groups_up_to(b.ext_max)) {
    const ExtFibration fib = ext_fibration(C.group, b);
    const auto mods = modules_over(C, b.ext_max, b.budget);
    for (const auto& A : mods)
      res.run("OPEXT", A.name, true, [&](fib::Verdict& v) {
        for (const auto& X : fib.fibre(A.module)) {
          v.absorb(fib::check_normal_cleavage(fib, X));
          for (const auto& A2 : mods)
            for (const auto& f : finalg::enumerate_module_morphisms(A.module, A2.module, b.budget)) {
              const auto l = fib.lift(f, X);
              v.absorb(fib::is_cocartesian(fib, X, l.target, l.arrow));
              for (const auto& A3 : mods)
                for (const auto& g : finalg::enumerate_module_morphisms(A2.module, A3.module, b.budget))
                  v.absorb(fib::check_cleavage_comparison(fib, f, g, X));
            }
        }
      });
  }

  const ActFibration fib = act_fibration(b.act_carrier, b);
  const auto monoids = monoids_up_to(b.act_monoids);
  std::map<int, int> seen;
  for (const auto& M : monoids) {
    const std::string name = monoid_name(M, seen[M.size()]++);
    res.run("ACT", name, true, [&](fib::Verdict& v) {
      for (const auto& X : fib.fibre(M)) {
        v.absorb(fib::check_normal_cleavage(fib, X));
        for (const auto& N : monoids)
          for (const auto& f : finalg::enumerate_homs(M, N, b.budget)) {
            const auto l = fib.lift(f, X);
            v.absorb(fib::is_cocartesian(fib, X, l.target, l.arrow));
          }
      }
      for (const auto& X : msets_up_to(M, std::min(2, b.act_carrier), b.budget))
        for (const auto& N : monoids)
          for (const auto& f : finalg::enumerate_homs(M, N, b.budget))
            for (const auto& P : monoids)
              for (const auto& g : finalg::enumerate_homs(N, P, b.budget))
                v.absorb(fib::check_cleavage_comparison(fib, f, g, X));
    });
  }
}

void suite_adjoints(Instances& res, const SuiteBounds& b) {
  for (const auto& C : abelian_groups_up_to(b.ext_max)) {
    const ExtFibration fib = ext_fibration(C.group, b);
    const auto mods = modules_over(C, b.ext_max, b.budget);
    for (const auto& A : mods)
      for (const auto& A2 : mods) {
        if (A.module.B().size() * A2.module.B().size() > std::max(4, b.ext_max)) continue;
        res.run("OPEXT", A.name + " | " + A2.name, true, [&](fib::Verdict& v) {
          const auto P = fib.base_product(A.module, A2.module);
          const auto fx = fib.fibre(A.module);
          const auto fy = fib.fibre(A2.module);
          for (const auto& Z : fib.fibre(P.object))
            for (const auto& X : fx)
              for (const auto& Y : fy) v.absorb(fib::check_product_adjunction(fib, Z, X, Y));
          v.absorb(fib::check_unit_adjunction(fib, fx));
        });
      }
  }

  const int carrier = std::min(2, b.act_carrier);
  const ActFibration fib = act_fibration(carrier, b);
  const auto monoids = monoids_up_to(b.act_monoids);
  for (std::size_t i = 0; i < monoids.size(); ++i)
    for (std::size_t j = 0; j < monoids.size(); ++j) {
      const auto& M = monoids[i];
      const auto& N = monoids[j];
      if (M.size() * N.size() > std::max(4, b.act_monoids)) continue;
      res.run("ACT", "#" + std::to_string(i) + " x #" + std::to_string(j), true, [&](fib::Verdict& v) {
        const auto P = fib.base_product(M, N);
        const auto fx = fib.fibre(M);
        const auto fy = fib.fibre(N);
        for (const auto& Z : msets_up_to(P.object, carrier, b.budget))
          for (const auto& X : fx)
            for (const auto& Y : fy) v.absorb(fib::check_product_adjunction(fib, Z, X, Y));
        v.absorb(fib::check_unit_adjunction(fib, fx));
      });
    }
}

void suite_mates(Instances& res, const SuiteBounds& b) {
  for (const auto& C : abelian_groups_up_to(b.ext_max)) {
    const ExtFibration fib = ext_fibration(C.group, b);
    const auto mods = modules_over(C, b.ext_max, b.budget);
    for (const auto& A : mods)
      for (const auto& A2 : mods)
        res.run("OPEXT", A.name + " | " + A2.name, true, [&](fib::Verdict& v) {
          const auto as = finalg::enumerate_module_morphisms(A.module, A2.module, b.budget);
          const auto bs = finalg::enumerate_module_morphisms(A2.module, A.module, b.budget);
          const auto fx = fib.fibre(A.module);
          const auto fy = fib.fibre(A2.module);
          for (const auto& a : as)
            for (const auto& bb : bs)
              for (const auto& X : fx)
                for (const auto& Y : fy) {
                  v.absorb(fib::check_beck_chevalley(fib, a, bb, X, Y));
                  v.absorb(fib::check_product_of_lifts(fib, a, bb, X, Y));
                }
        });
  }

  const int carrier = std::min(2, b.act_carrier);
  const ActFibration fib = act_fibration(carrier, b);
  const auto monoids = monoids_up_to(b.act_monoids);
  for (std::size_t i = 0; i < monoids.size(); ++i)
    for (std::size_t j = 0; j < monoids.size(); ++j)
      res.run("ACT", "#" + std::to_string(i) + " | #" + std::to_string(j), true, [&](fib::Verdict& v) {
        const auto& A = monoids[i];
        const auto& A2 = monoids[j];
        const auto as = finalg::enumerate_homs(A, A2, b.budget);
        const auto bs = finalg::enumerate_homs(A2, A, b.budget);
        const auto fx = fib.fibre(A);
        const auto fy = fib.fibre(A2);
        for (const auto& a : as)
          for (const auto& bb : bs)
            for (const auto& X : fx)
              for (const auto& Y : fy) {
                v.absorb(fib::check_beck_chevalley(fib, a, bb, X, Y));
                v.absorb(fib::check_product_of_lifts(fib, a, bb, X, Y));
              }
      });
}

void suite_groupal(Instances& res, const SuiteBounds& b) {
  for (const auto& C : abelian_groups_up_to(b.ext_max)) {
    const ExtFibration fib = ext_fibration(C.group, b);
    for (const auto& A : modules_over(C, b.ext_max, b.budget))
      res.run("OPEXT", A.name, true, [&](fib::Verdict& v) { v.absorb(fib::groupoid_check(fib, A.module)); });
  }
  const ActFibration tors = act_fibration(b.tors_max, b, true);
  for (const auto& B : abelian_groups_up_to(b.tors_max))
    res.run("TORS", "B=" + B.name, true,
            [&](fib::Verdict& v) { v.absorb(fib::groupoid_check(tors, FiniteMonoid(B.group))); });
  const ActFibration full = act_fibration(b.act_carrier, b);
  const auto monoids = monoids_up_to(b.act_monoids);
  std::map<int, int> seen;
  for (const auto& M : monoids) {
    const std::string name = monoid_name(M, seen[M.size()]++);
    if (is_group(M)) continue;
    res.run("ACT", name, false, [&](fib::Verdict& v) { v.absorb(fib::groupoid_check(full, M)); });
  }
}

void suite_torsor_char(Instances& res, const SuiteBounds& b) {
  const ActFibration fib = act_fibration(b.tors_max, b);
  for (const auto& B : abelian_groups_up_to(b.tors_max))
    res.run("ACT", "B=" + B.name, true, [&](fib::Verdict& v) {
      for (const auto& X : fib.fibre(FiniteMonoid(B.group))) {
        const auto c = act::torsor_characterization_check(fib, X);
        fib::Verdict one = c.verdict;
        if (!one.pass && one.witness) one.witness = act::describe(X) + ": " + *one.witness;
        v.absorb(one);
      }
    });
}

void suite_two_group(Instances& res, const SuiteBounds& b) {
  for (const auto& C : abelian_groups_up_to(b.ext_max)) {
    const ExtFibration fib = ext_fibration(C.group, b);
    for (const auto& A : modules_over(C, b.ext_max, b.budget))
      res.run("OPEXT", A.name, true, [&](fib::Verdict& v) {
        const auto m = finalg::module_addition(A.module);
        const auto e = finalg::zero_morphism(fib.base_terminal(), A.module);
        v.absorb(fib::two_group_suite(fib, A.module, m, e, negation(A.module)));
      });
  }
  const ActFibration tors = act_fibration(b.tors_max, b, true);
  for (const auto& B : abelian_groups_up_to(b.tors_max))
    res.run("TORS", "B=" + B.name, true, [&](fib::Verdict& v) {
      const FiniteMonoid M(B.group);
      const finalg::Hom e{finalg::trivial_monoid(), M, {M.identity()}};
      v.absorb(fib::two_group_suite(tors, M, act::multiplication_hom(M), e, group_inverse(B.group)));
    });
}

}  // namespace

SuiteBounds bounds_from_max(int max, std::uint64_t budget) {
  SuiteBounds b;
  b.ext_max = max;
  b.act_monoids = max;
  b.act_carrier = max;
  b.tors_max = max;
  b.budget = budget;
  return b;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"oplax", "adjoints", "mates", "groupal", "torsor-char", "two-group"};
  return names;
}

std::vector<InstanceResult> run_suite(const std::string& name, const SuiteBounds& bounds) {
  Instances res;
  if (name == "oplax")
    suite_oplax(res, bounds);
  else if (name == "adjoints")
    suite_adjoints(res, bounds);
  else if (name == "mates")
    suite_mates(res, bounds);
  else if (name == "groupal")
    suite_groupal(res, bounds);
  else if (name == "torsor-char")
    suite_torsor_char(res, bounds);
  else if (name == "two-group")
    suite_two_group(res, bounds);
  else
    throw std::invalid_argument("unknown suite '" + name + "'");
  return res.out;
}

Report cmd_verify(const std::string& name, const SuiteBounds& bounds, int max) {
  const auto results = run_suite(name, bounds);
  Report report;
  report.json = {{"command", "verify"}, {"suite", name}, {"max", max}, {"instances", nlohmann::json::array()}};
  std::vector<std::vector<std::string>> rows;
  int failures = 0;
  for (const auto& r : results) {
    if (!r.ok()) ++failures;
    report.json["instances"].push_back({{"fibration", r.fibration},
                                        {"instance", r.instance},
                                        {"expect", r.expect_pass ? "pass" : "fail"},
                                        {"result", r.pass ? "pass" : "fail"},
                                        {"ok", r.ok()},
                                        {"checked", r.checked},
                                        {"sampled", r.sampled},
                                        {"witness", r.witness.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.witness)}});
    rows.push_back({r.fibration, r.instance, r.expect_pass ? "pass" : "fail", r.pass ? "pass" : "fail",
                    std::to_string(r.checked) + (r.sampled ? " (sampled)" : ""), r.ok() ? "OK" : "FAILED: " + r.witness});
  }
  report.json["pass"] = failures == 0;
  report.text = render_table({"fibration", "instance", "expect", "result", "checked", "status"}, rows) +
                std::to_string(results.size()) + " instances, " + std::to_string(failures) + " failures\n";
  report.exit_code = failures == 0 ? kPass : kSuiteFailure;
  return report;
}

}  // namespace opfib::cli
