#pragma once

// Abelian extensions B -> E -> C of a fixed finite group C, fibred over C-modules.
//
// Every extension lives on the canonical carrier B x C with element (b, c) at
// index b * |C| + c, k(b) = (b, e) and f(b, c) = c. Because (b, c) = k(b) * (0, c),
// such an extension is determined by its normalized factor set t:
//   (b, c) * (b', c') = (b + xi(c, b') + t(c, c'), c c').

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfib/fib.hpp"
#include "opfib/finalg.hpp"

namespace opfib::ext {

using finalg::CModule;
using finalg::FiniteAbelianGroup;
using finalg::FiniteGroup;
using finalg::Hom;
using finalg::ModuleMorphism;

/// A |C| x |C| table of B indices, t(c1, c2) = table[c1 * |C| + c2].
struct FactorSet {
  CModule module;
  std::vector<int> table;

  int operator()(int c1, int c2) const { return table[static_cast<std::size_t>(c1) * module.C().size() + c2]; }
  bool operator==(const FactorSet&) const = default;
};

bool is_normalized(const FactorSet& t);

class Extension {
 public:
  /// Throws std::invalid_argument unless t is normalized and the resulting law is associative.
  explicit Extension(FactorSet t);

  static Extension split(const CModule& module);

  const CModule& module() const noexcept { return t_.module; }
  const FactorSet& factor_set() const noexcept { return t_; }
  /// The group table, built on first use.
  const FiniteGroup& E() const;
  int order() const noexcept { return t_.module.B().size() * t_.module.C().size(); }

  int encode(int b, int c) const { return b * t_.module.C().size() + c; }
  int kernel_part(int x) const { return x / t_.module.C().size(); }
  int quotient_part(int x) const { return x % t_.module.C().size(); }

  Hom k() const;
  Hom f() const;

  bool operator==(const Extension& other) const { return t_ == other.t_; }

 private:
  struct GroupCache {
    std::once_flag once;
    std::optional<FiniteGroup> group;
  };

  FactorSet t_;
  std::shared_ptr<GroupCache> E_;
};

/// (phi, psi) with psi o k = k' o phi and f' o psi = f. Endpoints are kept by the caller.
struct ExtMorphism {
  ModuleMorphism phi;
  std::vector<int> psi;

  bool operator==(const ExtMorphism&) const = default;
};

bool check_ext_morphism(const Extension& src, const Extension& dst, const ExtMorphism& m);
ExtMorphism identity_ext_morphism(const Extension& E);
/// second after first.
ExtMorphism compose(const ExtMorphism& second, const ExtMorphism& first);

/// Raw data of a short exact sequence B -> E -> C on an arbitrary carrier.
struct ExactSequence {
  FiniteAbelianGroup B;
  FiniteGroup E;
  FiniteGroup C;
  Hom k;
  Hom f;
};

/// The action of C on B by conjugation in E through any f-preimage.
CModule induced_action(const ExactSequence& seq);

struct Encoded {
  Extension extension;
  std::vector<int> encoding;  // raw element of E -> canonical index
};

/// Moves an extension onto the canonical carrier using the section that sends
/// e to the identity and every other c to its minimal-index preimage.
Encoded from_sequence(const ExactSequence& seq);

struct Pushforward {
  ExtMorphism lift;  // E -> phi_* E over phi
  Extension target;
};

/// phi_* E: the quotient of B' x E by (b' + phi(b), x) ~ (b', k(b) x). Identity
/// morphisms lift to identities.
Pushforward pushforward(const ModuleMorphism& phi, const Extension& E);

/// The pullback E x_C E' on its canonical carrier, index (b * |B'| + b') * |C| + c.
Extension product_over_C(const Extension& E1, const Extension& E2);
ExtMorphism product_projection(const Extension& E1, const Extension& E2, int which);
/// <u1, u2> into the given product extension.
ExtMorphism product_pair(const ExtMorphism& u1, const ExtMorphism& u2, const Extension& product);

/// The pullback built literally as the subgroup {(x, x') : f(x) = f'(x')} of E x E'.
ExactSequence pullback_sequence(const Extension& E1, const Extension& E2);

Extension baer_tensor(const Extension& E1, const Extension& E2);

/// All morphisms src -> dst over phi; they are exactly psi(b, c) = (phi(b) + g(c), c)
/// for cochains g with g(e) = 0 that make psi a homomorphism. Lexicographic in g.
std::vector<ExtMorphism> homs_over(const Extension& src, const Extension& dst, const ModuleMorphism& phi);

std::optional<ExtMorphism> vertical_isomorphic(const Extension& E1, const Extension& E2);

/// One extension per normalized factor set, in lexicographic order of tables.
std::vector<Extension> fibre_enumerate(const CModule& module, std::uint64_t budget = kDefaultBudget);

struct Pi0 {
  FiniteAbelianGroup group;               // on class indices, 0 = split class
  std::vector<Extension> representatives;  // lexicographically minimal member of each class
  std::vector<int> class_of;               // per fibre_enumerate entry
};

Pi0 pi0(const CModule& module, std::uint64_t budget = kDefaultBudget);

struct Pi1 {
  FiniteAbelianGroup group;             // under composition, indexed like cochains
  std::vector<std::vector<int>> cochains;  // g for each automorphism of the split extension over the identity
};

Pi1 pi1(const CModule& module);

nlohmann::json to_json(const Extension& E);
Extension extension_from_json(const nlohmann::json& j);

std::string describe(const Extension& E);

/// The fibration of extensions of C over Mod(C), as a FibrationOracle.
class ExtFibration {
 public:
  using BaseObject = CModule;
  using BaseArrow = ModuleMorphism;
  using Object = Extension;
  using Arrow = ExtMorphism;

  struct Options {
    std::uint64_t budget = kDefaultBudget;
    int target_module_bound = 3;  // cocartesian test targets live over modules of at most this order
    bool identity_targets = true;  // also test against the whole fibre over the codomain
  };

  explicit ExtFibration(FiniteGroup C) : ExtFibration(std::move(C), Options{}) {}
  ExtFibration(FiniteGroup C, Options options);

  const FiniteGroup& C() const noexcept { return C_; }

  CModule base_of(const Extension& X) const { return X.module(); }
  ModuleMorphism project(const ExtMorphism& u) const { return u.phi; }
  CModule base_domain(const ModuleMorphism& f) const { return f.src; }
  CModule base_codomain(const ModuleMorphism& f) const { return f.dst; }
  ModuleMorphism base_compose(const ModuleMorphism& g, const ModuleMorphism& f) const;
  ModuleMorphism base_identity(const CModule& A) const;
  bool base_equal(const ModuleMorphism& f, const ModuleMorphism& g) const { return f == g; }
  bool base_same_object(const CModule& A, const CModule& B) const { return A == B; }
  fib::BaseProduct<CModule, ModuleMorphism> base_product(const CModule& A, const CModule& B) const;
  ModuleMorphism base_pair(const ModuleMorphism& f1, const ModuleMorphism& f2,
                           const fib::BaseProduct<CModule, ModuleMorphism>& P) const;
  CModule base_terminal() const;
  ModuleMorphism base_terminal_map(const CModule& A) const;

  ExtMorphism compose(const ExtMorphism& second, const ExtMorphism& first) const;
  ExtMorphism identity(const Extension& X) const { return identity_ext_morphism(X); }
  std::vector<int> arrow_key(const ExtMorphism& u) const { return u.psi; }
  std::vector<int> object_key(const Extension& X) const;
  fib::Lift<Extension, ExtMorphism> lift(const ModuleMorphism& f, const Extension& X) const;
  std::vector<ExtMorphism> homs_over(const Extension& X, const Extension& Y, const ModuleMorphism& f) const;
  fib::Product<Extension, ExtMorphism> product(const Extension& X, const Extension& Y) const;
  ExtMorphism pair(const ExtMorphism& u1, const ExtMorphism& u2,
                   const fib::Product<Extension, ExtMorphism>& P) const;
  Extension terminal() const;
  ExtMorphism terminal_map(const Extension& X) const;
  std::vector<Extension> fibre(const CModule& A) const;
  std::vector<fib::FactorTarget<ModuleMorphism, Extension>> factorizations(const CModule& A) const;
  std::string describe(const Extension& X) const { return ext::describe(X); }
  std::string describe_arrow(const ExtMorphism& u) const;

  /// Small modules used as cocartesian test targets.
  const std::vector<CModule>& target_modules() const noexcept { return targets_; }

 private:
  FiniteGroup C_;
  Options options_;
  std::vector<CModule> targets_;
};

static_assert(fib::FibrationOracle<ExtFibration>);

}  // namespace opfib::ext
