#pragma once

// Left actions of finite monoids, fibred over monoids by the forgetful functor.
//
// The cleavage lift of f: M -> N at an M-set X is the contracted product
// N ^M X, with N a right M-set through f. Right M-sets are stored as left
// sets of the opposite monoid.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfib/fib.hpp"
#include "opfib/finalg.hpp"

namespace opfib::act {

using finalg::FiniteGroup;
using finalg::FiniteMonoid;
using finalg::Hom;
using finalg::Partition;

class MSet {
 public:
  /// act(m, x) = act[m * size + x]. Throws std::invalid_argument unless the
  /// identity acts trivially and act(m1 m2, x) = act(m1, act(m2, x)).
  MSet(FiniteMonoid M, int size, std::vector<int> act);

  static MSet trusted(FiniteMonoid M, int size, std::vector<int> act);
  /// M acting on itself by left multiplication.
  static MSet regular(const FiniteMonoid& M);
  static MSet trivial_action(const FiniteMonoid& M, int size);

  const FiniteMonoid& monoid() const noexcept { return M_; }
  int size() const noexcept { return size_; }
  int act(int m, int x) const { return act_[static_cast<std::size_t>(m) * size_ + x]; }
  const std::vector<int>& table() const noexcept { return act_; }

  bool operator==(const MSet&) const = default;

 private:
  MSet() = default;

  FiniteMonoid M_ = finalg::trivial_monoid();
  int size_ = 0;
  std::vector<int> act_;
};

/// (f, f0) with f0(m . x) = f(m) . f0(x).
struct EquivariantMap {
  Hom f;
  std::vector<int> map;

  bool operator==(const EquivariantMap&) const = default;
};

bool check_equivariant(const MSet& X, const MSet& Y, const EquivariantMap& u);
EquivariantMap identity_map(const MSet& X);
/// second after first.
EquivariantMap compose(const EquivariantMap& second, const EquivariantMap& first);

/// N as a right M-set along f: n . m = n f(m), stored over the opposite of M.
MSet right_set_along(const Hom& f);

struct ContractedProduct {
  int left_size = 0;
  int right_size = 0;
  Partition partition;                // on pairs x * right_size + y
  std::vector<int> label;             // dense class label per pair, increasing in minimal pair
  std::vector<int> representative;    // minimal pair of each class

  int size() const noexcept { return static_cast<int>(representative.size()); }
  int class_of(int x, int y) const { return label[static_cast<std::size_t>(x) * right_size + y]; }
};

/// X ^M Y for X a right M-set (a left set over the opposite of M) and Y a left
/// M-set: the quotient of X x Y by the relation generated by (x.m, y) ~ (x, m.y).
ContractedProduct contracted_product(const MSet& X_right, const MSet& Y);

struct CocartesianLift {
  EquivariantMap arrow;           // x -> [1, x]
  MSet target;                    // f_!(X)
  std::vector<int> class_of_pair;  // pair n * |X| + x -> element [n, x] of the target
};

/// f_!(X) = N ^M X with n' . [n, x] = [n' n, x]. Identity homs lift to identities.
CocartesianLift cocartesian_lift(const Hom& f, const MSet& X);

/// Componentwise action over M x N on carrier x * |Y| + y.
MSet product_of_actions(const MSet& X, const MSet& Y);
EquivariantMap action_projection(const MSet& X, const MSet& Y, int which);
/// <u1, u2> into product_of_actions(Y1, Y2), given as the product and |Y2|.
EquivariantMap action_pair(const EquivariantMap& u1, const EquivariantMap& u2, const MSet& product,
                           int second_size);

/// M x M -> M, a homomorphism when M is commutative.
Hom multiplication_hom(const FiniteMonoid& M);

/// p_!(X x Y) for the multiplication p of a commutative M.
MSet tensor_over_M(const MSet& X, const MSet& Y);

/// [x, y] -> [1, (x, y)] from X ^M Y to X (x)_M Y is a well-defined equivariant bijection.
fib::Verdict check_contracted_iso(const MSet& X, const MSet& Y);

/// ([n1, x1], [n2, x2]) -> [(n1, n2), (x1, x2)] from f1_! X1 x f2_! X2 to
/// (f1 x f2)_!(X1 x X2) is a well-defined equivariant bijection.
fib::Verdict check_lift_product_comparison(const Hom& f1, const MSet& X1, const Hom& f2, const MSet& X2);

/// All equivariant maps X -> Y along f, lexicographic. The search picks the
/// least unassigned point, tries each image and propagates along its orbit;
/// the budget bounds the number of search nodes.
std::vector<EquivariantMap> equivariant_maps(const MSet& X, const MSet& Y, const Hom& f,
                                             std::uint64_t budget = kDefaultBudget);

/// The equivariant maps that take the prescribed value wherever fixed[x] >= 0.
std::vector<EquivariantMap> equivariant_maps_fixing(const MSet& X, const MSet& Y, const Hom& f,
                                                    const std::vector<int>& fixed,
                                                    std::uint64_t budget = kDefaultBudget);

/// All actions of M on {0..k-1}, lexicographic by table. The budget bounds the
/// number of search nodes.
std::vector<MSet> enumerate_actions(const FiniteMonoid& M, int k, std::uint64_t budget = kDefaultBudget);

/// The lexicographically minimal relabeling of an action table.
MSet canonical_form(const MSet& X);

/// One canonical M-set per isomorphism class on k points, ordered by table.
std::vector<MSet> enumerate_msets(const FiniteMonoid& M, int k, std::uint64_t budget = kDefaultBudget);

/// Nonempty and (b, x) -> (x, b . x) is a bijection B x X -> X x X. Throws
/// std::invalid_argument when the monoid is not a group.
bool is_torsor(const MSet& X);

/// Labeled torsors: every action table on {0..|B|-1} passing is_torsor.
std::vector<MSet> torsors_enumerate(const FiniteGroup& B, std::uint64_t budget = kDefaultBudget);

struct TorsorInvariants {
  std::size_t count = 0;       // labeled torsors
  int classes = 0;             // isomorphism classes over the identity of B
  std::vector<int> class_of;   // per torsors_enumerate entry
  FiniteGroup pi1;             // automorphisms of the regular torsor under composition
};

TorsorInvariants tors_pi0_pi1(const FiniteGroup& B, std::uint64_t budget = kDefaultBudget);

nlohmann::json to_json(const MSet& X);
MSet mset_from_json(const nlohmann::json& j);
std::string describe(const MSet& X);

/// Left actions over monoids as a FibrationOracle. In torsor mode the fibre
/// over a group B is the set of labeled B-torsors.
class ActFibration {
 public:
  using BaseObject = FiniteMonoid;
  using BaseArrow = Hom;
  using Object = MSet;
  using Arrow = EquivariantMap;

  struct Options {
    std::uint64_t budget = kDefaultBudget;
    int fibre_carrier = 3;      // fibre(A): M-sets up to isomorphism on at most this many points
    int identity_carrier = 4;   // cocartesian targets over the codomain itself
    int catalog_carrier = 3;    // cocartesian targets over monoids of order at most 2
    bool torsors = false;
  };

  ActFibration() : ActFibration(Options{}) {}
  explicit ActFibration(Options options);

  const Options& options() const noexcept { return options_; }

  FiniteMonoid base_of(const MSet& X) const { return X.monoid(); }
  Hom project(const EquivariantMap& u) const { return u.f; }
  FiniteMonoid base_domain(const Hom& f) const { return f.src; }
  FiniteMonoid base_codomain(const Hom& f) const { return f.dst; }
  Hom base_compose(const Hom& g, const Hom& f) const { return finalg::compose(g, f); }
  Hom base_identity(const FiniteMonoid& A) const { return finalg::identity_hom(A); }
  bool base_equal(const Hom& f, const Hom& g) const { return f == g; }
  bool base_same_object(const FiniteMonoid& A, const FiniteMonoid& B) const { return A == B; }
  fib::BaseProduct<FiniteMonoid, Hom> base_product(const FiniteMonoid& A, const FiniteMonoid& B) const;
  Hom base_pair(const Hom& f1, const Hom& f2, const fib::BaseProduct<FiniteMonoid, Hom>& P) const;
  FiniteMonoid base_terminal() const { return finalg::trivial_monoid(); }
  Hom base_terminal_map(const FiniteMonoid& A) const;

  EquivariantMap compose(const EquivariantMap& second, const EquivariantMap& first) const {
    return act::compose(second, first);
  }
  EquivariantMap identity(const MSet& X) const { return identity_map(X); }
  std::vector<int> arrow_key(const EquivariantMap& u) const { return u.map; }
  std::vector<int> object_key(const MSet& X) const;
  fib::Lift<MSet, EquivariantMap> lift(const Hom& f, const MSet& X) const;
  std::vector<EquivariantMap> homs_over(const MSet& X, const MSet& Y, const Hom& f) const {
    return equivariant_maps(X, Y, f, options_.budget);
  }
  fib::Product<MSet, EquivariantMap> product(const MSet& X, const MSet& Y) const;
  EquivariantMap pair(const EquivariantMap& u1, const EquivariantMap& u2,
                      const fib::Product<MSet, EquivariantMap>& P) const;
  MSet terminal() const { return MSet::trivial_action(finalg::trivial_monoid(), 1); }
  EquivariantMap terminal_map(const MSet& X) const;
  /// Vertical v: S -> T with v . pre == rhs, searched with v fixed on the image of pre.
  std::vector<EquivariantMap> solve_vertical(const MSet& S, const MSet& T, const EquivariantMap& pre,
                                             const EquivariantMap& rhs) const;
  std::vector<MSet> fibre(const FiniteMonoid& A) const;
  std::vector<fib::FactorTarget<Hom, MSet>> factorizations(const FiniteMonoid& A) const;
  std::string describe(const MSet& X) const { return act::describe(X); }
  std::string describe_arrow(const EquivariantMap& u) const;

 private:
  /// M-sets up to isomorphism with 0..max_carrier points, memoized per monoid.
  const std::vector<MSet>& msets_upto(const FiniteMonoid& A, int max_carrier) const;

  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::vector<int>, int>, std::vector<MSet>> msets;
  };

  Options options_;
  std::vector<FiniteMonoid> catalog_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

static_assert(fib::FibrationOracle<ActFibration>);

struct TorsorCharacterization {
  bool torsor = false;
  fib::Verdict terminal;
  std::optional<fib::Verdict> diagonal;  // skipped once the terminal map fails
  fib::Verdict verdict;                  // pass iff torsor <=> both maps cocartesian
};

TorsorCharacterization torsor_characterization_check(const ActFibration& fib, const MSet& X);

}  // namespace opfib::act
