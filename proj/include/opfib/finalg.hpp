#pragma once

// Finite monoids, groups and modules presented by multiplication tables.
//
// Elements are dense indices 0..size-1. Constructors in this header put the
// identity at index 0, but nothing downstream relies on that. Product carriers
// use the row-major pair encoding i * |H| + j.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "opfib/errors.hpp"

namespace opfib::finalg {

class FiniteMonoid {
 public:
  /// Validates table range, identity and associativity; throws std::invalid_argument.
  FiniteMonoid(int size, std::vector<int> mul, int identity);

  static FiniteMonoid from_rows(const std::vector<std::vector<int>>& rows, int identity);

  /// Skips validation. Only for tables whose laws follow from a verified construction.
  static FiniteMonoid trusted(int size, std::vector<int> mul, int identity);

  int size() const noexcept { return size_; }
  int identity() const noexcept { return identity_; }
  int mul(int x, int y) const { return mul_[static_cast<std::size_t>(x) * size_ + y]; }
  const std::vector<int>& table() const noexcept { return mul_; }
  std::vector<std::vector<int>> rows() const;

  bool is_commutative() const;

  bool operator==(const FiniteMonoid&) const = default;

 protected:
  FiniteMonoid() = default;

  int size_ = 0;
  std::vector<int> mul_;
  int identity_ = 0;
};

class FiniteGroup : public FiniteMonoid {
 public:
  /// Computes inverses; throws std::invalid_argument if some element has none.
  explicit FiniteGroup(const FiniteMonoid& monoid);
  FiniteGroup(int size, std::vector<int> mul, int identity, std::vector<int> inv);

  static FiniteGroup trusted(int size, std::vector<int> mul, int identity);

  int inv(int x) const { return inv_[x]; }
  const std::vector<int>& inverses() const noexcept { return inv_; }

  bool operator==(const FiniteGroup&) const = default;

 protected:
  FiniteGroup() = default;

  std::vector<int> inv_;
};

class FiniteAbelianGroup : public FiniteGroup {
 public:
  /// Throws std::invalid_argument when the group is not commutative.
  explicit FiniteAbelianGroup(const FiniteGroup& group);

  static FiniteAbelianGroup trusted(const FiniteGroup& group);

  int add(int x, int y) const { return mul(x, y); }
  int neg(int x) const { return inv(x); }
  int sub(int x, int y) const { return mul(x, inv(y)); }
  int zero() const noexcept { return identity_; }

  bool operator==(const FiniteAbelianGroup&) const = default;

 private:
  FiniteAbelianGroup() = default;
};

/// A monoid homomorphism candidate; check_hom decides whether it is one.
struct Hom {
  FiniteMonoid src;
  FiniteMonoid dst;
  std::vector<int> map;

  int operator()(int x) const { return map[x]; }
  bool operator==(const Hom&) const = default;
};

/// C acting on the abelian group B by automorphisms: xi(c, b) = xi[c * |B| + b].
class CModule {
 public:
  CModule(FiniteGroup C, FiniteAbelianGroup B, std::vector<int> xi);

  /// Skips validation; for tables built from already valid modules.
  static CModule trusted(FiniteGroup C, FiniteAbelianGroup B, std::vector<int> xi);
  static CModule trivial(FiniteGroup C, FiniteAbelianGroup B);
  static CModule zero(FiniteGroup C);

  const FiniteGroup& C() const noexcept { return C_; }
  const FiniteAbelianGroup& B() const noexcept { return B_; }
  int act(int c, int b) const { return xi_[static_cast<std::size_t>(c) * B_.size() + b]; }
  const std::vector<int>& xi() const noexcept { return xi_; }

  bool operator==(const CModule&) const = default;

 private:
  FiniteGroup C_;
  FiniteAbelianGroup B_;
  std::vector<int> xi_;
};

/// A C-equivariant homomorphism between modules over the same C.
struct ModuleMorphism {
  CModule src;
  CModule dst;
  std::vector<int> map;

  int operator()(int b) const { return map[b]; }
  bool operator==(const ModuleMorphism&) const = default;
};

/// Equivalence classes on 0..n-1; each element maps to the minimal index of its class.
struct Partition {
  std::vector<int> class_of;

  int size() const noexcept { return static_cast<int>(class_of.size()); }
  std::vector<int> representatives() const;
  int class_count() const;
  /// Dense class numbering 0..k-1 in increasing order of representative.
  std::vector<int> dense_labels() const;

  bool operator==(const Partition&) const = default;
};

// -- constructions ----------------------------------------------------------

FiniteAbelianGroup make_cyclic(int n);
FiniteMonoid trivial_monoid();

FiniteMonoid direct_product(const FiniteMonoid& G, const FiniteMonoid& H);
FiniteGroup direct_product(const FiniteGroup& G, const FiniteGroup& H);
FiniteAbelianGroup direct_product(const FiniteAbelianGroup& G, const FiniteAbelianGroup& H);

/// Projection G x H -> G (which = 1) or -> H (which = 2).
Hom product_projection(const FiniteMonoid& G, const FiniteMonoid& H, int which);
/// Injection G -> G x H (which = 1) or H -> G x H (which = 2).
Hom product_injection(const FiniteMonoid& G, const FiniteMonoid& H, int which);

FiniteMonoid opposite(const FiniteMonoid& M);

struct SemidirectProduct {
  FiniteGroup group;  // carrier B x C, index b * |C| + c
  Hom injection;      // B -> group
  Hom projection;     // group -> C
};

SemidirectProduct semidirect_product(const CModule& module);

// -- homomorphisms ----------------------------------------------------------

/// Throws std::invalid_argument when the map table does not fit src/dst.
bool check_hom(const Hom& h);
Hom identity_hom(const FiniteMonoid& M);
/// g after f.
Hom compose(const Hom& g, const Hom& f);
bool is_identity(const Hom& h);
bool is_bijective(std::span<const int> map, int codomain_size);

/// Greedy monoid generating set, scanning elements in index order.
std::vector<int> monoid_generators(const FiniteMonoid& M);

/// All homomorphisms G -> H in lexicographic order of map tables. The search
/// assigns images to a generating set, so the budget bounds |H|^#generators.
std::vector<Hom> enumerate_homs(const FiniteMonoid& G, const FiniteMonoid& H,
                                std::uint64_t budget = kDefaultBudget);

std::vector<Hom> enumerate_automorphisms(const FiniteGroup& G,
                                         std::uint64_t budget = kDefaultBudget);

/// Bijective homomorphism G -> H, searched over order-compatible bijections.
/// Throws ResourceLimit above carrier size 12.
std::optional<Hom> find_isomorphism(const FiniteGroup& G, const FiniteGroup& H);

int element_order(const FiniteMonoid& G, int x);

// -- modules ----------------------------------------------------------------

bool check_module_morphism(const ModuleMorphism& phi);
ModuleMorphism identity_morphism(const CModule& M);
ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f);

/// Every action of C on B by automorphisms, ordered by the underlying hom C -> Aut(B).
std::vector<CModule> enumerate_modules(const FiniteGroup& C, const FiniteAbelianGroup& B,
                                       std::uint64_t budget = kDefaultBudget);

/// All equivariant homomorphisms src -> dst in lexicographic order.
std::vector<ModuleMorphism> enumerate_module_morphisms(const CModule& src, const CModule& dst,
                                                       std::uint64_t budget = kDefaultBudget);

/// Direct sum with the componentwise action; carrier index b * |B'| + b'.
CModule module_product(const CModule& M, const CModule& N);
ModuleMorphism module_projection(const CModule& M, const CModule& N, int which);
/// <f, g> : D -> M x N.
ModuleMorphism module_pairing(const ModuleMorphism& f, const ModuleMorphism& g);
ModuleMorphism zero_morphism(const CModule& src, const CModule& dst);
/// The addition map B x B -> B, a module morphism since C acts additively.
ModuleMorphism module_addition(const CModule& M);

// -- quotients and invariants -----------------------------------------------

/// Finest partition of 0..n-1 identifying every given pair.
Partition quotient_by_generated_relation(int n, std::span<const std::pair<int, int>> pairs);

/// Invariant factors in ascending order, each dividing the next; [] for the trivial group.
std::vector<int> abelian_invariants(const FiniteGroup& G);

/// Monoids of the given order up to isomorphism, identity at index 0, each in
/// lexicographically minimal table form.
std::vector<FiniteMonoid> enumerate_monoids(int order);

}  // namespace opfib::finalg
