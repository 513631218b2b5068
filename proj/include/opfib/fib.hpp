#pragma once

// Generic verification layer over a cloven opfibration P: X -> B.
//
// An oracle supplies base arrows (which know their endpoints), total arrows
// (which carry their base arrow and a carrier map, compared through
// arrow_key), a normal cleavage, chosen products in base and total category,
// and exhaustive hom enumerators. Everything below is computed from those
// primitives; structural 2-cells are always the unique vertical arrow making
// some square of lifts commute, found by search.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opfib/errors.hpp"

namespace opfib::fib {

template <typename BaseObject, typename BaseArrow>
struct BaseProduct {
  BaseObject object;
  BaseArrow proj1;
  BaseArrow proj2;
};

template <typename Object, typename Arrow>
struct Product {
  Object object;
  Arrow proj1;
  Arrow proj2;
};

template <typename Object, typename Arrow>
struct Lift {
  Arrow arrow;
  Object target;
};

/// A test target for cocartesianness: an arrow h out of the lifted codomain
/// and an object Z over cod(h).
template <typename BaseArrow, typename Object>
struct FactorTarget {
  BaseArrow h;
  Object Z;
};

struct Verdict {
  bool pass = true;
  std::optional<std::string> witness;
  bool sampled = false;
  std::uint64_t checked = 0;

  static Verdict fail(std::string why) {
    Verdict v;
    v.pass = false;
    v.witness = std::move(why);
    return v;
  }

  /// Folds another verdict into this one, keeping the first witness.
  Verdict& absorb(const Verdict& other) {
    if (pass && !other.pass) {
      pass = false;
      witness = other.witness;
    }
    sampled = sampled || other.sampled;
    checked += other.checked;
    return *this;
  }
};

// clang-format off
template <typename O>
concept FibrationOracle = requires(const O& o, const typename O::BaseObject& A, const typename O::BaseArrow& f,
                                   const typename O::Object& X, const typename O::Arrow& u,
                                   const BaseProduct<typename O::BaseObject, typename O::BaseArrow>& bp,
                                   const Product<typename O::Object, typename O::Arrow>& tp) {
  { o.base_of(X) } -> std::convertible_to<typename O::BaseObject>;
  { o.project(u) } -> std::convertible_to<typename O::BaseArrow>;
  { o.base_domain(f) } -> std::convertible_to<typename O::BaseObject>;
  { o.base_codomain(f) } -> std::convertible_to<typename O::BaseObject>;
  { o.base_compose(f, f) } -> std::convertible_to<typename O::BaseArrow>;
  { o.base_identity(A) } -> std::convertible_to<typename O::BaseArrow>;
  { o.base_equal(f, f) } -> std::convertible_to<bool>;
  { o.base_same_object(A, A) } -> std::convertible_to<bool>;
  { o.base_product(A, A) } -> std::convertible_to<BaseProduct<typename O::BaseObject, typename O::BaseArrow>>;
  { o.base_pair(f, f, bp) } -> std::convertible_to<typename O::BaseArrow>;
  { o.base_terminal() } -> std::convertible_to<typename O::BaseObject>;
  { o.base_terminal_map(A) } -> std::convertible_to<typename O::BaseArrow>;
  { o.compose(u, u) } -> std::convertible_to<typename O::Arrow>;
  { o.identity(X) } -> std::convertible_to<typename O::Arrow>;
  { o.arrow_key(u) } -> std::convertible_to<std::vector<int>>;
  { o.object_key(X) } -> std::convertible_to<std::vector<int>>;
  { o.lift(f, X) } -> std::convertible_to<Lift<typename O::Object, typename O::Arrow>>;
  { o.homs_over(X, X, f) } -> std::convertible_to<std::vector<typename O::Arrow>>;
  { o.product(X, X) } -> std::convertible_to<Product<typename O::Object, typename O::Arrow>>;
  { o.pair(u, u, tp) } -> std::convertible_to<typename O::Arrow>;
  { o.terminal() } -> std::convertible_to<typename O::Object>;
  { o.terminal_map(X) } -> std::convertible_to<typename O::Arrow>;
  { o.fibre(A) } -> std::convertible_to<std::vector<typename O::Object>>;
  { o.factorizations(A) } -> std::convertible_to<std::vector<FactorTarget<typename O::BaseArrow, typename O::Object>>>;
  { o.describe(X) } -> std::convertible_to<std::string>;
  { o.describe_arrow(u) } -> std::convertible_to<std::string>;
};
// clang-format on

template <FibrationOracle O>
using BaseProductOf = BaseProduct<typename O::BaseObject, typename O::BaseArrow>;
template <FibrationOracle O>
using ProductOf = Product<typename O::Object, typename O::Arrow>;
template <FibrationOracle O>
using LiftOf = Lift<typename O::Object, typename O::Arrow>;

// -- basic helpers ------------------------------------------------------------

template <FibrationOracle O>
bool same_arrow(const O& fib, const typename O::Arrow& u, const typename O::Arrow& v) {
  return fib.base_equal(fib.project(u), fib.project(v)) && fib.arrow_key(u) == fib.arrow_key(v);
}

template <FibrationOracle O>
bool same_object(const O& fib, const typename O::Object& X, const typename O::Object& Y) {
  return fib.base_same_object(fib.base_of(X), fib.base_of(Y)) && fib.object_key(X) == fib.object_key(Y);
}

template <FibrationOracle O>
bool is_vertical(const O& fib, const typename O::Arrow& u) {
  const auto f = fib.project(u);
  return fib.base_same_object(fib.base_domain(f), fib.base_codomain(f)) &&
         fib.base_equal(f, fib.base_identity(fib.base_domain(f)));
}

/// Oracles may solve v . pre == rhs for vertical v directly, e.g. by fixing v on
/// the image of pre before searching. The answer must equal the filtered hom-set.
template <typename O>
concept VerticalSolver = requires(const O& o, const typename O::Object& X, const typename O::Arrow& u) {
  { o.solve_vertical(X, X, u, u) } -> std::convertible_to<std::vector<typename O::Arrow>>;
};

/// All vertical v: S -> T with v . pre == rhs, by filtering the vertical hom-set.
template <FibrationOracle O>
std::vector<typename O::Arrow> vertical_solutions_by_filter(const O& fib, const typename O::Object& S,
                                                            const typename O::Object& T,
                                                            const typename O::Arrow& pre,
                                                            const typename O::Arrow& rhs) {
  std::vector<typename O::Arrow> out;
  const std::vector<int> want = fib.arrow_key(rhs);
  for (auto& v : fib.homs_over(S, T, fib.base_identity(fib.base_of(S))))
    if (fib.arrow_key(fib.compose(v, pre)) == want) out.push_back(std::move(v));
  return out;
}

/// All vertical v: S -> T with v . pre == rhs.
template <FibrationOracle O>
std::vector<typename O::Arrow> vertical_solutions(const O& fib, const typename O::Object& S,
                                                  const typename O::Object& T, const typename O::Arrow& pre,
                                                  const typename O::Arrow& rhs) {
  if constexpr (VerticalSolver<O>)
    return fib.solve_vertical(S, T, pre, rhs);
  else
    return vertical_solutions_by_filter(fib, S, T, pre, rhs);
}

/// The unique vertical v: S -> T with v . pre == rhs; InternalInconsistency otherwise.
template <FibrationOracle O>
typename O::Arrow unique_vertical(const O& fib, const typename O::Object& S, const typename O::Object& T,
                                  const typename O::Arrow& pre, const typename O::Arrow& rhs,
                                  const char* what) {
  auto sols = vertical_solutions(fib, S, T, pre, rhs);
  if (sols.size() != 1)
    throw InternalInconsistency(std::string(what) + ": expected a unique vertical factorization, found " +
                                std::to_string(sols.size()));
  return std::move(sols.front());
}

/// A two-sided inverse of the vertical arrow u: X -> Y, if one exists.
template <FibrationOracle O>
std::optional<typename O::Arrow> vertical_inverse(const O& fib, const typename O::Object& X,
                                                  const typename O::Object& Y, const typename O::Arrow& u) {
  const auto idY = fib.arrow_key(fib.identity(Y));
  for (auto& v : vertical_solutions(fib, Y, X, u, fib.identity(X)))
    if (fib.arrow_key(fib.compose(u, v)) == idY) return v;
  return std::nullopt;
}

template <FibrationOracle O>
bool is_vertical_iso(const O& fib, const typename O::Object& X, const typename O::Object& Y,
                     const typename O::Arrow& u) {
  return is_vertical(fib, u) && vertical_inverse(fib, X, Y, u).has_value();
}

template <FibrationOracle O>
bool is_identity_arrow(const O& fib, const typename O::Object& X, const typename O::Arrow& u) {
  return same_arrow(fib, u, fib.identity(X));
}

// -- cocartesian arrows -------------------------------------------------------

/// u: X -> Y over f is cocartesian iff for every oracle-supplied (h, Z) with h
/// out of cod(f), precomposition with u is a bijection from arrows Y -> Z over h
/// onto arrows X -> Z over h . f.
template <FibrationOracle O>
Verdict is_cocartesian(const O& fib, const typename O::Object& X, const typename O::Object& Y,
                       const typename O::Arrow& u) {
  const auto f = fib.project(u);
  Verdict verdict;
  for (const auto& [h, Z] : fib.factorizations(fib.base_of(Y))) {
    const auto over_hf = fib.base_compose(h, f);
    std::map<std::vector<int>, int> hits;
    for (const auto& t : fib.homs_over(X, Z, over_hf)) hits.emplace(fib.arrow_key(t), 0);
    for (const auto& s : fib.homs_over(Y, Z, h)) {
      auto it = hits.find(fib.arrow_key(fib.compose(s, u)));
      if (it == hits.end())
        throw InternalInconsistency("composite of enumerated arrows missing from its hom-set");
      ++it->second;
    }
    for (const auto& [key, count] : hits) {
      ++verdict.checked;
      if (count != 1) {
        std::ostringstream w;
        w << "arrow " << fib.describe_arrow(u) << " from " << fib.describe(X) << ": a map to "
          << fib.describe(Z) << " has " << count << " factorizations";
        return Verdict::fail(w.str());
      }
    }
  }
  return verdict;
}

/// Cleavage lifts of identities are identities.
template <FibrationOracle O>
Verdict check_normal_cleavage(const O& fib, const typename O::Object& X) {
  const auto l = fib.lift(fib.base_identity(fib.base_of(X)), X);
  if (!same_object(fib, l.target, X) || !is_identity_arrow(fib, X, l.arrow))
    return Verdict::fail("lift of the identity at " + fib.describe(X) + " is not the identity");
  Verdict v;
  v.checked = 1;
  return v;
}

/// The lift of g . f and the composite of lifts differ by a unique vertical iso.
template <FibrationOracle O>
Verdict check_cleavage_comparison(const O& fib, const typename O::BaseArrow& f, const typename O::BaseArrow& g,
                                  const typename O::Object& X) {
  const auto whole = fib.lift(fib.base_compose(g, f), X);
  const auto first = fib.lift(f, X);
  const auto second = fib.lift(g, first.target);
  const auto composite = fib.compose(second.arrow, first.arrow);
  auto sols = vertical_solutions(fib, whole.target, second.target, whole.arrow, composite);
  if (sols.size() != 1)
    return Verdict::fail("cleavage comparison at " + fib.describe(X) + " has " + std::to_string(sols.size()) +
                         " candidates");
  if (!is_vertical_iso(fib, whole.target, second.target, sols.front()))
    return Verdict::fail("cleavage comparison at " + fib.describe(X) + " is not invertible");
  Verdict v;
  v.checked = 1;
  return v;
}

// -- oplax structure and its right adjoint -------------------------------------

template <FibrationOracle O>
struct OplaxPair {
  LiftOf<O> first;   // pi1-lift of Z
  LiftOf<O> second;  // pi2-lift of Z
};

/// L(Z) = (pi1_* Z, pi2_* Z) for Z over the designated product P.
template <FibrationOracle O>
OplaxPair<O> oplax_L(const O& fib, const BaseProductOf<O>& P, const typename O::Object& Z) {
  if (!fib.base_same_object(fib.base_of(Z), P.object))
    throw std::invalid_argument("oplax_L: object does not lie over the given product");
  return OplaxPair<O>{fib.lift(P.proj1, Z), fib.lift(P.proj2, Z)};
}

/// L on a vertical arrow v: Z -> Z', componentwise by factoring through the lifts.
template <FibrationOracle O>
std::pair<typename O::Arrow, typename O::Arrow> oplax_L_arrow(const O& fib, const BaseProductOf<O>& P,
                                                              const typename O::Object& Z,
                                                              const typename O::Object& Z2,
                                                              const typename O::Arrow& v) {
  const auto L = oplax_L(fib, P, Z);
  const auto L2 = oplax_L(fib, P, Z2);
  auto w1 = unique_vertical(fib, L.first.target, L2.first.target, L.first.arrow, fib.compose(L2.first.arrow, v),
                            "oplax_L on arrows");
  auto w2 = unique_vertical(fib, L.second.target, L2.second.target, L.second.arrow,
                            fib.compose(L2.second.arrow, v), "oplax_L on arrows");
  return {std::move(w1), std::move(w2)};
}

/// R(X, Y) is the total product, lying over the base product.
template <FibrationOracle O>
ProductOf<O> right_adjoint_R(const O& fib, const typename O::Object& X, const typename O::Object& Y) {
  return fib.product(X, Y);
}

/// eta_Z = <pi1-hat, pi2-hat> : Z -> R(L(Z)).
template <FibrationOracle O>
typename O::Arrow unit_eta(const O& fib, const BaseProductOf<O>& P, const typename O::Object& Z) {
  const auto L = oplax_L(fib, P, Z);
  const auto R = fib.product(L.first.target, L.second.target);
  return fib.pair(L.first.arrow, L.second.arrow, R);
}

/// The same unit found as the unique vertical arrow whose projections are the lifts.
template <FibrationOracle O>
std::optional<typename O::Arrow> unit_eta_by_search(const O& fib, const BaseProductOf<O>& P,
                                                    const typename O::Object& Z) {
  const auto L = oplax_L(fib, P, Z);
  const auto R = fib.product(L.first.target, L.second.target);
  std::optional<typename O::Arrow> found;
  const auto k1 = fib.arrow_key(L.first.arrow);
  const auto k2 = fib.arrow_key(L.second.arrow);
  for (auto& w : fib.homs_over(Z, R.object, fib.base_identity(P.object))) {
    if (fib.arrow_key(fib.compose(R.proj1, w)) == k1 && fib.arrow_key(fib.compose(R.proj2, w)) == k2) {
      if (found) return std::nullopt;
      found = std::move(w);
    }
  }
  return found;
}

/// eps_i : pi_i-lift of R(X, Y) -> X (resp. Y), the unique vertical arrow with eps_i . pi_i-hat = pi_i.
template <FibrationOracle O>
std::pair<typename O::Arrow, typename O::Arrow> counit_epsilon(const O& fib, const typename O::Object& X,
                                                               const typename O::Object& Y) {
  const auto R = fib.product(X, Y);
  const auto P = fib.base_product(fib.base_of(X), fib.base_of(Y));
  const auto L = oplax_L(fib, P, R.object);
  auto e1 = unique_vertical(fib, L.first.target, X, L.first.arrow, R.proj1, "counit_epsilon");
  auto e2 = unique_vertical(fib, L.second.target, Y, L.second.arrow, R.proj2, "counit_epsilon");
  return {std::move(e1), std::move(e2)};
}

/// Both triangle identities of L -| R at the given instances, plus the two
/// code paths for eta.
template <FibrationOracle O>
Verdict check_product_adjunction(const O& fib, const typename O::Object& Z, const typename O::Object& X,
                                 const typename O::Object& Y) {
  Verdict verdict;
  const auto P = fib.base_product(fib.base_of(X), fib.base_of(Y));
  // eps . L(eta) = 1 at Z over P
  {
    const auto L = oplax_L(fib, P, Z);
    const auto eta = unit_eta(fib, P, Z);
    const auto searched = unit_eta_by_search(fib, P, Z);
    if (!searched || fib.arrow_key(*searched) != fib.arrow_key(eta))
      return Verdict::fail("unit at " + fib.describe(Z) + " disagrees with its universal-property search");
    const auto RL = fib.product(L.first.target, L.second.target);
    const auto [l1, l2] = oplax_L_arrow(fib, P, Z, RL.object, eta);
    const auto [e1, e2] = counit_epsilon(fib, L.first.target, L.second.target);
    if (!is_identity_arrow(fib, L.first.target, fib.compose(e1, l1)) ||
        !is_identity_arrow(fib, L.second.target, fib.compose(e2, l2)))
      return Verdict::fail("triangle eps.L(eta) = 1 fails at " + fib.describe(Z));
    verdict.checked += 1;
  }
  // R(eps) . eta_R = 1 at (X, Y)
  {
    const auto R = fib.product(X, Y);
    const auto eta = unit_eta(fib, P, R.object);
    const auto L = oplax_L(fib, P, R.object);
    const auto RL = fib.product(L.first.target, L.second.target);
    const auto [e1, e2] = counit_epsilon(fib, X, Y);
    const auto Reps = fib.pair(fib.compose(e1, RL.proj1), fib.compose(e2, RL.proj2), R);
    if (!is_identity_arrow(fib, R.object, fib.compose(Reps, eta)))
      return Verdict::fail("triangle R(eps).eta = 1 fails at (" + fib.describe(X) + ", " + fib.describe(Y) + ")");
    verdict.checked += 1;
  }
  return verdict;
}

/// L1 -| R1 with R1(*) the total terminal object: eta1 is the terminal map,
/// R1(eps1) . eta1 = 1 reduces to the terminal map of I being the identity, and
/// I must be terminal in the whole total category.
template <FibrationOracle O>
Verdict check_unit_adjunction(const O& fib, const std::vector<typename O::Object>& probes) {
  Verdict verdict;
  const auto I = fib.terminal();
  const auto one = fib.base_terminal();
  if (!fib.base_same_object(fib.base_of(I), one)) return Verdict::fail("terminal object not over the base terminal");
  if (!is_identity_arrow(fib, I, fib.terminal_map(I))) return Verdict::fail("terminal map of I is not the identity");
  for (const auto& X : probes) {
    const auto arrows = fib.homs_over(X, I, fib.base_terminal_map(fib.base_of(X)));
    ++verdict.checked;
    if (arrows.size() != 1)
      return Verdict::fail(fib.describe(X) + " has " + std::to_string(arrows.size()) + " maps to the terminal object");
    if (fib.arrow_key(arrows.front()) != fib.arrow_key(fib.terminal_map(X)))
      return Verdict::fail("terminal_map disagrees with enumeration at " + fib.describe(X));
    if (fib.base_same_object(fib.base_of(X), one) && !is_vertical(fib, fib.terminal_map(X)))
      return Verdict::fail("eta1 is not vertical at " + fib.describe(X));
  }
  return verdict;
}

// -- mates ---------------------------------------------------------------------

template <FibrationOracle O>
struct MateData {
  typename O::Object source;  // (a x b)_* R(X, Y)
  typename O::Object target;  // R(a_* X, b_* Y)
  typename O::Arrow lift;     // R(X, Y) -> source
  typename O::Arrow cross;    // a-hat x b-hat : R(X, Y) -> target
  typename O::Arrow mate;     // source -> target, vertical
};

template <FibrationOracle O>
MateData<O> mate_data(const O& fib, const typename O::BaseArrow& a, const typename O::BaseArrow& b,
                      const typename O::Object& X, const typename O::Object& Y) {
  const auto P = fib.base_product(fib.base_domain(a), fib.base_domain(b));
  const auto P2 = fib.base_product(fib.base_codomain(a), fib.base_codomain(b));
  const auto axb = fib.base_pair(fib.base_compose(a, P.proj1), fib.base_compose(b, P.proj2), P2);
  const auto R = fib.product(X, Y);
  const auto l = fib.lift(axb, R.object);
  const auto la = fib.lift(a, X);
  const auto lb = fib.lift(b, Y);
  const auto R2 = fib.product(la.target, lb.target);
  auto cross = fib.pair(fib.compose(la.arrow, R.proj1), fib.compose(lb.arrow, R.proj2), R2);
  auto mate = unique_vertical(fib, l.target, R2.object, l.arrow, cross, "mate_component");
  return MateData<O>{l.target, R2.object, l.arrow, std::move(cross), std::move(mate)};
}

template <FibrationOracle O>
typename O::Arrow mate_component(const O& fib, const typename O::BaseArrow& a, const typename O::BaseArrow& b,
                                 const typename O::Object& X, const typename O::Object& Y) {
  return mate_data(fib, a, b, X, Y).mate;
}

template <FibrationOracle O>
Verdict check_beck_chevalley(const O& fib, const typename O::BaseArrow& a, const typename O::BaseArrow& b,
                             const typename O::Object& X, const typename O::Object& Y) {
  const auto d = mate_data(fib, a, b, X, Y);
  if (!is_vertical_iso(fib, d.source, d.target, d.mate))
    return Verdict::fail("mate at (" + fib.describe(X) + ", " + fib.describe(Y) + ") is not invertible");
  Verdict v;
  v.checked = 1;
  return v;
}

/// The product of the two cleavage lifts is itself cocartesian.
template <FibrationOracle O>
Verdict check_product_of_lifts(const O& fib, const typename O::BaseArrow& a, const typename O::BaseArrow& b,
                               const typename O::Object& X, const typename O::Object& Y) {
  const auto la = fib.lift(a, X);
  const auto lb = fib.lift(b, Y);
  const auto R = fib.product(X, Y);
  const auto R2 = fib.product(la.target, lb.target);
  const auto cross = fib.pair(fib.compose(la.arrow, R.proj1), fib.compose(lb.arrow, R.proj2), R2);
  return is_cocartesian(fib, R.object, R2.object, cross);
}

// -- terminal and diagonal maps ------------------------------------------------

template <FibrationOracle O>
Verdict check_terminal_cocartesian(const O& fib, const typename O::Object& X) {
  return is_cocartesian(fib, X, fib.terminal(), fib.terminal_map(X));
}

template <FibrationOracle O>
Verdict check_diagonal_cocartesian(const O& fib, const typename O::Object& X) {
  const auto R = fib.product(X, X);
  const auto id = fib.identity(X);
  return is_cocartesian(fib, X, R.object, fib.pair(id, id, R));
}

// -- groupoidal fibres ---------------------------------------------------------

/// Every vertical arrow between objects of the given list is invertible.
template <FibrationOracle O>
Verdict groupoid_check_objects(const O& fib, const std::vector<typename O::Object>& objects) {
  Verdict verdict;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = 0; j < objects.size(); ++j) {
      const auto& X = objects[i];
      const auto& Y = objects[j];
      for (const auto& u : fib.homs_over(X, Y, fib.base_identity(fib.base_of(X)))) {
        ++verdict.checked;
        if (!vertical_inverse(fib, X, Y, u))
          return Verdict::fail("vertical arrow " + fib.describe_arrow(u) + " from " + fib.describe(X) + " to " +
                               fib.describe(Y) + " has no inverse");
      }
    }
  }
  return verdict;
}

template <FibrationOracle O>
Verdict groupoid_check(const O& fib, const typename O::BaseObject& A) {
  return groupoid_check_objects(fib, fib.fibre(A));
}

// -- tuple quantification ------------------------------------------------------

struct SuiteOptions {
  std::uint64_t tuple_limit = 4096;  // exhaustive up to this many tuples, sampled beyond
  std::uint64_t seed = 0x6f706669620001ULL;
};

struct TupleScan {
  bool sampled = false;
  std::uint64_t count = 0;
};

/// Calls fn on every k-tuple of indices below n when n^k <= limit; otherwise on
/// `limit` tuples drawn from a fixed-seed generator. fn returns false to stop.
template <typename F>
TupleScan for_each_tuple(std::size_t n, int k, std::uint64_t limit, std::uint64_t seed, F&& fn) {
  TupleScan scan;
  if (n == 0) return scan;
  std::uint64_t total = 1;
  bool over = false;
  for (int i = 0; i < k; ++i) {
    if (total > limit / n + 1) over = true;
    total *= n;
  }
  over = over || total > limit;
  std::vector<std::size_t> t(k, 0);
  if (!over) {
    while (true) {
      ++scan.count;
      if (!fn(t)) return scan;
      int d = k - 1;
      while (d >= 0 && ++t[d] == n) t[d--] = 0;
      if (d < 0) return scan;
    }
  }
  scan.sampled = true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::uint64_t s = 0; s < limit; ++s) {
    for (auto& x : t) x = pick(rng);
    ++scan.count;
    if (!fn(t)) return scan;
  }
  return scan;
}

// -- monoidal structure on a fibre ----------------------------------------------

/// The fibre over an internal monoid (A, m, e) with X (x) Y = m_* R(X, Y) and
/// unit E = e_* I. Structural arrows are unique vertical comparisons.
template <FibrationOracle O>
class MonoidalFibre {
 public:
  using BaseObject = typename O::BaseObject;
  using BaseArrow = typename O::BaseArrow;
  using Object = typename O::Object;
  using Arrow = typename O::Arrow;

  struct Tensor {
    ProductOf<O> product;  // R(X, Y)
    Arrow lift;            // m-hat : R(X, Y) -> X (x) Y
    Object object;
  };

  /// Throws std::invalid_argument unless (A, m, e) satisfies the monoid laws.
  MonoidalFibre(const O& fib, BaseObject A, BaseArrow m, BaseArrow e)
      : fib_(fib),
        A_(std::move(A)),
        m_(std::move(m)),
        e_(std::move(e)),
        AA_(fib.base_product(A_, A_)),
        unit_data_(checked_unit()) {}

  const BaseObject& base() const { return A_; }
  const BaseProductOf<O>& base_square() const { return AA_; }
  const Object& unit() const { return unit_data_.target; }
  const Arrow& unit_lift() const { return unit_data_.arrow; }

  bool base_commutative() const {
    const auto swap = fib_.base_pair(AA_.proj2, AA_.proj1, AA_);
    return fib_.base_equal(fib_.base_compose(m_, swap), m_);
  }

  /// True iff i is a two-sided inverse for m.
  bool base_inverse(const BaseArrow& i) const {
    const auto idA = fib_.base_identity(A_);
    const auto e_bang = fib_.base_compose(e_, fib_.base_terminal_map(A_));
    return fib_.base_equal(fib_.base_compose(m_, fib_.base_pair(idA, i, AA_)), e_bang) &&
           fib_.base_equal(fib_.base_compose(m_, fib_.base_pair(i, idA, AA_)), e_bang);
  }

  const Tensor& tensor(const Object& X, const Object& Y) const {
    auto key = std::make_pair(fib_.object_key(X), fib_.object_key(Y));
    auto it = tensors_.find(key);
    if (it != tensors_.end()) return it->second;
    auto R = fib_.product(X, Y);
    auto l = fib_.lift(m_, R.object);
    return tensors_.emplace(std::move(key), Tensor{std::move(R), std::move(l.arrow), std::move(l.target)})
        .first->second;
  }

  /// u (x) v for vertical u: X -> X2, v: Y -> Y2.
  Arrow tensor_arrows(const Object& X, const Object& X2, const Arrow& u, const Object& Y, const Object& Y2,
                      const Arrow& v) const {
    const auto& t = tensor(X, Y);
    const auto& t2 = tensor(X2, Y2);
    const auto uv = fib_.pair(fib_.compose(u, t.product.proj1), fib_.compose(v, t.product.proj2), t2.product);
    return unique_vertical(fib_, t.object, t2.object, t.lift, fib_.compose(t2.lift, uv), "tensor on arrows");
  }

  /// a : (X (x) Y) (x) Z -> X (x) (Y (x) Z).
  Arrow associator(const Object& X, const Object& Y, const Object& Z) const {
    const auto key = std::vector<std::vector<int>>{fib_.object_key(X), fib_.object_key(Y), fib_.object_key(Z)};
    if (auto it = associators_.find(key); it != associators_.end()) return it->second;
    const auto& xy = tensor(X, Y);
    const auto& left = tensor(xy.object, Z);
    const auto& yz = tensor(Y, Z);
    const auto& right = tensor(X, yz.object);
    const auto& RR = left.product;      // R(X (x) Y, Z)
    const auto inner = fib_.product(xy.product.object, Z);  // R(R(X, Y), Z)
    const auto& RXR = right.product;    // R(X, Y (x) Z)
    const auto RYZ_full = fib_.product(X, yz.product.object);  // R(X, R(Y, Z))
    // u1 = m-hat . (m-hat x 1), u2 = m-hat . (1 x m-hat), alpha the total associativity iso
    const auto mx1 = fib_.pair(fib_.compose(xy.lift, inner.proj1), inner.proj2, RR);
    const auto u1 = fib_.compose(left.lift, mx1);
    const auto onexm = fib_.pair(RYZ_full.proj1, fib_.compose(yz.lift, RYZ_full.proj2), RXR);
    const auto u2 = fib_.compose(right.lift, onexm);
    const auto alpha = fib_.pair(
        fib_.compose(xy.product.proj1, inner.proj1),
        fib_.pair(fib_.compose(xy.product.proj2, inner.proj1), inner.proj2, yz.product), RYZ_full);
    auto a = unique_vertical(fib_, left.object, right.object, u1, fib_.compose(u2, alpha), "associator");
    associators_.emplace(key, a);
    return a;
  }

  /// lambda : E (x) X -> X.
  Arrow left_unitor(const Object& X) const {
    const auto& t = tensor(unit_data_.target, X);
    const auto I = fib_.terminal();
    const auto RI = fib_.product(I, X);
    const auto ex1 = fib_.pair(fib_.compose(unit_data_.arrow, RI.proj1), RI.proj2, t.product);
    return unique_vertical(fib_, t.object, X, fib_.compose(t.lift, ex1), RI.proj2, "left unitor");
  }

  /// rho : X (x) E -> X.
  Arrow right_unitor(const Object& X) const {
    const auto& t = tensor(X, unit_data_.target);
    const auto I = fib_.terminal();
    const auto RI = fib_.product(X, I);
    const auto oxe = fib_.pair(RI.proj1, fib_.compose(unit_data_.arrow, RI.proj2), t.product);
    return unique_vertical(fib_, t.object, X, fib_.compose(t.lift, oxe), RI.proj1, "right unitor");
  }

  /// tau : X (x) Y -> Y (x) X for commutative m.
  Arrow braiding(const Object& X, const Object& Y) const {
    if (!base_commutative()) throw std::invalid_argument("braiding needs a commutative base monoid");
    const auto& xy = tensor(X, Y);
    const auto& yx = tensor(Y, X);
    const auto sigma = fib_.pair(xy.product.proj2, xy.product.proj1, yx.product);
    return unique_vertical(fib_, xy.object, yx.object, xy.lift, fib_.compose(yx.lift, sigma), "braiding");
  }

  /// X* = i_* X together with gamma_X : E -> X (x) X*, the unique vertical arrow
  /// with gamma . e-hat . tau_X = m-hat . <1, i-hat>. Empty when that factorization
  /// is not unique.
  std::optional<std::pair<Object, Arrow>> dual_and_gamma(const BaseArrow& i, const Object& X) const {
    const auto li = fib_.lift(i, X);
    const auto& t = tensor(X, li.target);
    const auto diag = fib_.pair(fib_.identity(X), li.arrow, t.product);
    const auto pre = fib_.compose(unit_data_.arrow, fib_.terminal_map(X));
    auto sols = vertical_solutions(fib_, unit_data_.target, t.object, pre, fib_.compose(t.lift, diag));
    if (sols.size() != 1) return std::nullopt;
    return std::make_pair(li.target, std::move(sols.front()));
  }

 private:
  /// Validates the base monoid, then lifts e along the terminal object.
  LiftOf<O> checked_unit() const {
    check_base_monoid();
    return fib_.lift(e_, fib_.terminal());
  }

  void check_base_monoid() const {
    if (!fib_.base_same_object(fib_.base_domain(m_), AA_.object) || !fib_.base_same_object(fib_.base_codomain(m_), A_))
      throw std::invalid_argument("multiplication must be an arrow A x A -> A");
    if (!fib_.base_same_object(fib_.base_domain(e_), fib_.base_terminal()) ||
        !fib_.base_same_object(fib_.base_codomain(e_), A_))
      throw std::invalid_argument("unit must be an arrow 1 -> A");
    const auto idA = fib_.base_identity(A_);
    const auto e_bang = fib_.base_compose(e_, fib_.base_terminal_map(A_));
    if (!fib_.base_equal(fib_.base_compose(m_, fib_.base_pair(e_bang, idA, AA_)), idA) ||
        !fib_.base_equal(fib_.base_compose(m_, fib_.base_pair(idA, e_bang, AA_)), idA))
      throw std::invalid_argument("unit law fails for the base monoid");
    const auto T = fib_.base_product(AA_.object, A_);  // (A x A) x A
    const auto q1 = T.proj1;
    const auto q2 = T.proj2;
    const auto lhs = fib_.base_compose(m_, fib_.base_pair(fib_.base_compose(m_, q1), q2, AA_));
    const auto rhs = fib_.base_compose(
        m_, fib_.base_pair(fib_.base_compose(AA_.proj1, q1),
                           fib_.base_compose(m_, fib_.base_pair(fib_.base_compose(AA_.proj2, q1), q2, AA_)), AA_));
    if (!fib_.base_equal(lhs, rhs)) throw std::invalid_argument("associativity fails for the base monoid");
  }

  const O& fib_;
  BaseObject A_;
  BaseArrow m_;
  BaseArrow e_;
  BaseProductOf<O> AA_;
  LiftOf<O> unit_data_;
  mutable std::map<std::pair<std::vector<int>, std::vector<int>>, Tensor> tensors_;
  mutable std::map<std::vector<std::vector<int>>, Arrow> associators_;
};

template <FibrationOracle O>
typename O::Object tensor_on_fibre(const O& fib, const typename O::BaseObject& A, const typename O::BaseArrow& m,
                                   const typename O::BaseArrow& e, const typename O::Object& X,
                                   const typename O::Object& Y) {
  return MonoidalFibre<O>(fib, A, m, e).tensor(X, Y).object;
}

template <FibrationOracle O>
typename O::Object unit_object(const O& fib, const typename O::BaseObject& A, const typename O::BaseArrow& m,
                               const typename O::BaseArrow& e) {
  return MonoidalFibre<O>(fib, A, m, e).unit();
}

template <FibrationOracle O>
typename O::Arrow braiding(const O& fib, const typename O::BaseObject& A, const typename O::BaseArrow& m,
                           const typename O::BaseArrow& e, const typename O::Object& X, const typename O::Object& Y) {
  return MonoidalFibre<O>(fib, A, m, e).braiding(X, Y);
}

// -- the 2-group suite -----------------------------------------------------------

/// Checks, over the fibre above the internal group (A, m, e, i): every vertical
/// arrow invertible; pentagon and triangle; gamma_X : E -> X (x) X* invertible;
/// and when m is commutative, braiding symmetry and the hexagon. Tuple
/// quantifiers beyond options.tuple_limit are sampled and flagged.
template <FibrationOracle O>
Verdict two_group_suite(const O& fib, const typename O::BaseObject& A, const typename O::BaseArrow& m,
                        const typename O::BaseArrow& e, const std::optional<typename O::BaseArrow>& i,
                        const SuiteOptions& options = {}) {
  using Object = typename O::Object;
  const std::vector<Object> objects = fib.fibre(A);
  Verdict verdict = groupoid_check_objects(fib, objects);
  if (!verdict.pass) return verdict;

  const MonoidalFibre<O> mf(fib, A, m, e);
  if (!i || !mf.base_inverse(*i)) return Verdict::fail("base monoid has no inverse map i");

  const std::size_t n = objects.size();

  auto stage = [&](int arity, std::uint64_t salt, const std::function<std::optional<std::string>(
                                                      const std::vector<std::size_t>&)>& body) {
    if (!verdict.pass) return;
    std::optional<std::string> failure;
    const TupleScan scan =
        for_each_tuple(n, arity, options.tuple_limit, options.seed ^ salt, [&](const std::vector<std::size_t>& t) {
          try {
            failure = body(t);
          } catch (const InternalInconsistency& ex) {
            failure = ex.what();
          }
          return !failure.has_value();
        });
    verdict.checked += scan.count;
    verdict.sampled = verdict.sampled || scan.sampled;
    if (failure) {
      verdict.pass = false;
      verdict.witness = *failure;
    }
  };
  auto names = [&](const std::vector<std::size_t>& t) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? ", " : "") + fib.describe(objects[t[k]]);
    return s + ")";
  };
  auto id = [&](const Object& X) { return fib.identity(X); };
  auto same = [&](const auto& u, const auto& v) { return fib.arrow_key(u) == fib.arrow_key(v); };

  // gamma_X invertible
  stage(1, 1, [&](const std::vector<std::size_t>& t) -> std::optional<std::string> {
    const Object& X = objects[t[0]];
    const auto g = mf.dual_and_gamma(*i, X);
    if (!g) return "gamma is not uniquely determined at " + names(t);
    const auto& t2 = mf.tensor(X, g->first);
    if (!is_vertical_iso(fib, mf.unit(), t2.object, g->second)) return "gamma is not invertible at " + names(t);
    return std::nullopt;
  });

  // triangle: (1 (x) lambda_Y) . a_{X,E,Y} = rho_X (x) 1
  stage(2, 2, [&](const std::vector<std::size_t>& t) -> std::optional<std::string> {
    const Object& X = objects[t[0]];
    const Object& Y = objects[t[1]];
    const Object& E = mf.unit();
    const auto a = mf.associator(X, E, Y);
    const auto& ey = mf.tensor(E, Y);
    const auto& xe = mf.tensor(X, E);
    const auto lhs = fib.compose(mf.tensor_arrows(X, X, id(X), ey.object, Y, mf.left_unitor(Y)), a);
    const auto rhs = mf.tensor_arrows(xe.object, X, mf.right_unitor(X), Y, Y, id(Y));
    if (!same(lhs, rhs)) return "triangle identity fails at " + names(t);
    return std::nullopt;
  });

  // pentagon
  stage(4, 3, [&](const std::vector<std::size_t>& t) -> std::optional<std::string> {
    const Object& X = objects[t[0]];
    const Object& Y = objects[t[1]];
    const Object& Z = objects[t[2]];
    const Object& W = objects[t[3]];
    const auto& xy = mf.tensor(X, Y).object;
    const auto& zw = mf.tensor(Z, W).object;
    const auto& yz = mf.tensor(Y, Z).object;
    const auto& xy_z = mf.tensor(xy, Z).object;
    const auto& x_yz = mf.tensor(X, yz).object;
    const auto& yz_w = mf.tensor(yz, W).object;
    const auto& y_zw = mf.tensor(Y, zw).object;
    const auto lhs = fib.compose(mf.associator(X, Y, zw), mf.associator(xy, Z, W));
    const auto step1 = mf.tensor_arrows(xy_z, x_yz, mf.associator(X, Y, Z), W, W, id(W));
    const auto step2 = mf.associator(X, yz, W);
    const auto step3 = mf.tensor_arrows(X, X, id(X), yz_w, y_zw, mf.associator(Y, Z, W));
    const auto rhs = fib.compose(step3, fib.compose(step2, step1));
    if (!same(lhs, rhs)) return "pentagon fails at " + names(t);
    return std::nullopt;
  });

  if (!mf.base_commutative()) return verdict;

  // symmetry: tau_{Y,X} . tau_{X,Y} = 1
  stage(2, 4, [&](const std::vector<std::size_t>& t) -> std::optional<std::string> {
    const Object& X = objects[t[0]];
    const Object& Y = objects[t[1]];
    const auto twice = fib.compose(mf.braiding(Y, X), mf.braiding(X, Y));
    if (!is_identity_arrow(fib, mf.tensor(X, Y).object, twice)) return "braiding is not symmetric at " + names(t);
    return std::nullopt;
  });

  // hexagon: a_{Y,Z,X} . tau_{X,Y(x)Z} . a_{X,Y,Z} = (1 (x) tau_{X,Z}) . a_{Y,X,Z} . (tau_{X,Y} (x) 1)
  stage(3, 5, [&](const std::vector<std::size_t>& t) -> std::optional<std::string> {
    const Object& X = objects[t[0]];
    const Object& Y = objects[t[1]];
    const Object& Z = objects[t[2]];
    const auto& xy = mf.tensor(X, Y).object;
    const auto& yx = mf.tensor(Y, X).object;
    const auto& yz = mf.tensor(Y, Z).object;
    const auto& xz = mf.tensor(X, Z).object;
    const auto& zx = mf.tensor(Z, X).object;
    const auto lhs =
        fib.compose(mf.associator(Y, Z, X), fib.compose(mf.braiding(X, yz), mf.associator(X, Y, Z)));
    const auto rhs = fib.compose(mf.tensor_arrows(Y, Y, id(Y), xz, zx, mf.braiding(X, Z)),
                                 fib.compose(mf.associator(Y, X, Z),
                                             mf.tensor_arrows(xy, yx, mf.braiding(X, Y), Z, Z, id(Z))));
    if (!same(lhs, rhs)) return "hexagon fails at " + names(t);
    return std::nullopt;
  });

  return verdict;
}

}  // namespace opfib::fib
