#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "opfib/act.hpp"
#include "opfib/fib.hpp"

using namespace opfib;
using namespace opfib::act;
using finalg::make_cyclic;

namespace {

// {e, z} with z z = z.
FiniteMonoid idempotent_monoid() { return FiniteMonoid(2, {0, 1, 1, 1}, 0); }

FiniteGroup klein() { return finalg::direct_product(make_cyclic(2), make_cyclic(2)); }

bool next_digits(std::vector<int>& d, int radix) {
  for (std::size_t i = d.size(); i-- > 0;) {
    if (++d[i] < radix) return true;
    d[i] = 0;
  }
  return false;
}

// Every table |M| x k filtered by the action laws.
std::vector<std::vector<int>> brute_force_actions(const FiniteMonoid& M, int k) {
  std::vector<std::vector<int>> out;
  if (k == 0) return {{}};
  std::vector<int> t(static_cast<std::size_t>(M.size()) * k, 0);
  do {
    bool ok = true;
    for (int x = 0; x < k && ok; ++x) ok = t[M.identity() * k + x] == x;
    for (int a = 0; a < M.size() && ok; ++a)
      for (int b = 0; b < M.size() && ok; ++b)
        for (int x = 0; x < k && ok; ++x) ok = t[M.mul(a, b) * k + x] == t[a * k + t[b * k + x]];
    if (ok) out.push_back(t);
  } while (next_digits(t, k));
  return out;
}

// Every function X -> Y filtered by equivariance along f.
std::vector<std::vector<int>> brute_force_maps(const MSet& X, const MSet& Y, const finalg::Hom& f) {
  std::vector<std::vector<int>> out;
  if (X.size() == 0) return {{}};
  if (Y.size() == 0) return {};
  std::vector<int> g(X.size(), 0);
  do {
    bool ok = true;
    for (int m = 0; m < X.monoid().size() && ok; ++m)
      for (int x = 0; x < X.size() && ok; ++x) ok = g[X.act(m, x)] == Y.act(f.map[m], g[x]);
    if (ok) out.push_back(g);
  } while (next_digits(g, Y.size()));
  return out;
}

// Orbit count of pairs under the relation, by repeated flooding.
int brute_force_contracted_size(const finalg::Hom& f, const MSet& X) {
  const auto& N = f.dst;
  const int nx = X.size();
  const int total = N.size() * nx;
  std::vector<int> comp(total, -1);
  int count = 0;
  for (int start = 0; start < total; ++start) {
    if (comp[start] >= 0) continue;
    comp[start] = count;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int n = 0; n < N.size(); ++n)
        for (int m = 0; m < f.src.size(); ++m)
          for (int x = 0; x < nx; ++x) {
            const int a = N.mul(n, f.map[m]) * nx + x;
            const int b = n * nx + X.act(m, x);
            if ((comp[a] == count) != (comp[b] == count)) {
              comp[a] = comp[b] = count;
              grew = true;
            }
          }
    }
    ++count;
  }
  return count;
}

bool isomorphic_over_identity(const MSet& X, const MSet& Y) {
  if (X.size() != Y.size()) return false;
  for (const auto& u : equivariant_maps(X, Y, finalg::identity_hom(X.monoid())))
    if (finalg::is_bijective(u.map, Y.size())) return true;
  return false;
}

MSet disjoint_union(const MSet& X, const MSet& Y) {
  const int n = X.size() + Y.size();
  std::vector<int> act(static_cast<std::size_t>(X.monoid().size()) * n);
  for (int m = 0; m < X.monoid().size(); ++m) {
    for (int x = 0; x < X.size(); ++x) act[m * n + x] = X.act(m, x);
    for (int y = 0; y < Y.size(); ++y) act[m * n + X.size() + y] = X.size() + Y.act(m, y);
  }
  return MSet(X.monoid(), n, act);
}

std::vector<FiniteMonoid> small_monoids(int max_order) {
  std::vector<FiniteMonoid> out;
  for (int n = 1; n <= max_order; ++n)
    for (auto& M : finalg::enumerate_monoids(n)) out.push_back(M);
  return out;
}

}  // namespace

TEST_CASE("M-set validation and serialization") {
  const auto Z2 = make_cyclic(2);
  CHECK_THROWS_AS(MSet(Z2, 2, {0, 1, 0, 0}), std::invalid_argument);  // 1 . 1 . 1 = 0 != 1
  CHECK_THROWS_AS(MSet(Z2, 2, {1, 0, 1, 0}), std::invalid_argument);  // identity moves points
  CHECK_THROWS_AS(MSet(Z2, 2, {0, 1, 2, 0}), std::invalid_argument);
  const MSet swap(Z2, 2, {0, 1, 1, 0});
  CHECK(swap == MSet::regular(Z2));
  CHECK(mset_from_json(to_json(swap)) == swap);
  const MSet empty(Z2, 0, {});
  CHECK(mset_from_json(to_json(empty)) == empty);
}

TEST_CASE("enumerate_actions agrees with brute force") {
  for (const auto& M : small_monoids(3))
    for (int k = 0; k <= 3; ++k) {
      std::vector<std::vector<int>> got;
      for (const auto& X : enumerate_actions(M, k)) got.push_back(X.table());
      CHECK(got == brute_force_actions(M, k));
    }
  CHECK_THROWS_AS(enumerate_actions(klein(), 4, 10), ResourceLimit);
}

TEST_CASE("enumerate_msets picks one table per isomorphism class") {
  const auto Z2 = make_cyclic(2);
  CHECK(enumerate_msets(Z2, 0).size() == 1);
  CHECK(enumerate_msets(Z2, 2).size() == 2);
  CHECK(enumerate_msets(Z2, 3).size() == 2);
  CHECK(enumerate_msets(finalg::trivial_monoid(), 4).size() == 1);
  for (const auto& M : small_monoids(3))
    for (int k = 1; k <= 3; ++k) {
      const auto all = enumerate_actions(M, k);
      const auto reps = enumerate_msets(M, k);
      // every action is isomorphic to exactly one representative
      for (const auto& X : all) {
        int matches = 0;
        for (const auto& R : reps) matches += isomorphic_over_identity(X, R);
        CHECK(matches == 1);
      }
    }
}

TEST_CASE("equivariant_maps agrees with brute force") {
  const auto monoids = small_monoids(2);
  for (const auto& M : monoids)
    for (const auto& N : monoids)
      for (const auto& f : finalg::enumerate_homs(M, N))
        for (int kx = 0; kx <= 3; ++kx)
          for (const auto& X : enumerate_actions(M, kx))
            for (int ky = 0; ky <= 2; ++ky)
              for (const auto& Y : enumerate_actions(N, ky)) {
                std::vector<std::vector<int>> got;
                for (const auto& u : equivariant_maps(X, Y, f)) got.push_back(u.map);
                CHECK(got == brute_force_maps(X, Y, f));
              }
  CHECK_THROWS_AS(equivariant_maps(MSet::trivial_action(make_cyclic(1), 6), MSet::trivial_action(make_cyclic(1), 6),
                                   finalg::identity_hom(make_cyclic(1)), 1000),
                  ResourceLimit);
}

TEST_CASE("vertical solver agrees with filtering the vertical hom-set") {
  const ActFibration fib;
  for (const auto& M : small_monoids(2)) {
    std::vector<MSet> sets;
    for (int k = 0; k <= 3; ++k)
      for (auto& X : enumerate_msets(M, k)) sets.push_back(X);
    const auto id = finalg::identity_hom(M);
    for (const auto& W : sets)
      for (const auto& S : sets)
        for (const auto& T : sets)
          for (const auto& pre : equivariant_maps(W, S, id))
            for (const auto& rhs : equivariant_maps(W, T, id)) {
              const auto fast = fib.solve_vertical(S, T, pre, rhs);
              const auto slow = fib::vertical_solutions_by_filter(fib, S, T, pre, rhs);
              CHECK(fast == slow);
            }
  }
}

TEST_CASE("contracted products") {
  const auto Z3 = make_cyclic(3);
  const auto triv = finalg::trivial_monoid();
  const MSet X = MSet::trivial_action(triv, 3);
  const auto cp = contracted_product(MSet::trivial_action(finalg::opposite(triv), 2), X);
  CHECK(cp.size() == 6);

  const MSet R = MSet::regular(Z3);
  const auto reg = contracted_product(MSet(finalg::opposite(Z3), 3, R.table()), R);
  CHECK(reg.size() == 3);

  CHECK_THROWS_AS(contracted_product(MSet::regular(make_cyclic(2)), R), std::invalid_argument);
}

TEST_CASE("cocartesian lifts") {
  const auto Z2 = make_cyclic(2);
  const auto Z4 = make_cyclic(4);
  const auto X = MSet::regular(Z2);
  const auto id = cocartesian_lift(finalg::identity_hom(Z2), X);
  CHECK(id.target == X);
  CHECK(id.arrow == identity_map(X));

  const finalg::Hom two{Z2, Z4, {0, 2}};
  const auto l = cocartesian_lift(two, X);
  CHECK(l.target.size() == 4);
  CHECK(check_equivariant(X, l.target, l.arrow));

  const auto Z3 = make_cyclic(3);
  const finalg::Hom bang{Z3, finalg::trivial_monoid(), {0, 0, 0}};
  const auto to_point = cocartesian_lift(bang, MSet::regular(Z3));
  CHECK(to_point.target.size() == 1);

  CHECK_THROWS_AS(cocartesian_lift(finalg::Hom{Z2, Z4, {0, 1}}, X), std::invalid_argument);

  // sizes against an independent flooding of the pair relation
  const auto monoids = small_monoids(3);
  for (const auto& M : monoids)
    for (const auto& N : monoids)
      for (const auto& f : finalg::enumerate_homs(M, N))
        for (int k = 0; k <= 3; ++k)
          for (const auto& Y : enumerate_msets(M, k)) {
            const auto lift = cocartesian_lift(f, Y);
            CHECK(lift.target.size() == brute_force_contracted_size(f, Y));
            CHECK(check_equivariant(Y, lift.target, lift.arrow));
          }
}

TEST_CASE("products and tensors of actions") {
  const auto Z2 = make_cyclic(2);
  const auto Z3 = make_cyclic(3);
  const auto triv = finalg::trivial_monoid();
  const auto RZ2 = MSet::regular(Z2);
  const auto RZ3 = MSet::regular(Z3);
  CHECK(product_of_actions(RZ2, RZ3) == MSet::regular(finalg::direct_product(Z2, Z3)));
  CHECK(product_of_actions(RZ2, MSet::trivial_action(triv, 1)).table() == RZ2.table());
  CHECK(is_torsor(product_of_actions(RZ2, RZ3)));

  const MSet three(Z2, 3, {0, 1, 2, 1, 0, 2});
  const auto t = tensor_over_M(three, RZ2);
  CHECK(t.size() == 3);
  CHECK(isomorphic_over_identity(t, three));
  for (const auto& X : torsors_enumerate(Z3))
    for (const auto& Y : torsors_enumerate(Z3)) CHECK(is_torsor(tensor_over_M(X, Y)));

  const FiniteMonoid s3_like = finalg::opposite(FiniteMonoid(3, {0, 1, 2, 1, 1, 1, 2, 2, 2}, 0));  // left zeros
  CHECK_THROWS_AS(tensor_over_M(MSet::regular(s3_like), MSet::regular(s3_like)), std::invalid_argument);
}

TEST_CASE("contracted product versus tensor") {
  const auto Z3 = make_cyclic(3);
  const auto v = check_contracted_iso(MSet::regular(Z3), MSet::regular(Z3));
  CHECK(v.pass);
  CHECK(tensor_over_M(MSet::regular(Z3), MSet::regular(Z3)).size() == 3);
  for (const auto& M : small_monoids(3)) {
    if (!M.is_commutative()) continue;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 2; ++b)
        for (const auto& X : enumerate_msets(M, a))
          for (const auto& Y : enumerate_msets(M, b)) {
            const auto r = check_contracted_iso(X, Y);
            CHECK_MESSAGE(r.pass, r.witness.value_or(""));
          }
  }
}

TEST_CASE("product of lifts comparison") {
  const auto monoids = small_monoids(2);
  for (const auto& M1 : monoids)
    for (const auto& N1 : monoids)
      for (const auto& f1 : finalg::enumerate_homs(M1, N1))
        for (const auto& f2 : finalg::enumerate_homs(N1, M1))
          for (const auto& X1 : enumerate_msets(M1, 2))
            for (const auto& X2 : enumerate_msets(N1, 2)) {
              const auto v = check_lift_product_comparison(f1, X1, f2, X2);
              CHECK_MESSAGE(v.pass, v.witness.value_or(""));
            }
}

TEST_CASE("torsors") {
  const auto Z2 = make_cyclic(2);
  CHECK(is_torsor(MSet::regular(Z2)));
  CHECK_FALSE(is_torsor(MSet(Z2, 0, {})));
  CHECK_FALSE(is_torsor(disjoint_union(MSet::regular(Z2), MSet::regular(Z2))));
  CHECK_THROWS_AS(is_torsor(MSet::regular(idempotent_monoid())), std::invalid_argument);

  // free transitive actions on a labeled carrier: |B|! labelings over |B| automorphisms
  const std::vector<std::pair<FiniteGroup, std::size_t>> counts = {
      {make_cyclic(1), 1}, {Z2, 1}, {make_cyclic(3), 2}, {make_cyclic(4), 6}, {klein(), 6}};
  for (const auto& [B, n] : counts) {
    const auto T = torsors_enumerate(B);
    CHECK(T.size() == n);
    const auto inv = tors_pi0_pi1(B);
    CHECK(inv.count == n);
    CHECK(inv.classes == 1);
    CHECK(inv.pi1.size() == B.size());
    CHECK(finalg::find_isomorphism(inv.pi1, B).has_value());
  }
}

TEST_CASE("torsor characterization") {
  const ActFibration fib;
  const auto Z2 = make_cyclic(2);
  const auto torsor = torsor_characterization_check(fib, MSet::regular(Z2));
  CHECK(torsor.torsor);
  CHECK(torsor.terminal.pass);
  REQUIRE(torsor.diagonal.has_value());
  CHECK(torsor.diagonal->pass);
  CHECK(torsor.verdict.pass);

  const auto free2 = torsor_characterization_check(fib, disjoint_union(MSet::regular(Z2), MSet::regular(Z2)));
  CHECK_FALSE(free2.torsor);
  CHECK(free2.terminal.pass == false);  // two orbits: the quotient has two points
  CHECK(free2.verdict.pass);

  const auto empty = torsor_characterization_check(fib, MSet(Z2, 0, {}));
  CHECK_FALSE(empty.torsor);
  CHECK_FALSE(empty.terminal.pass);
  CHECK_FALSE(empty.diagonal.has_value());
  CHECK(empty.verdict.pass);

  // transitive but not free: terminal map cocartesian, diagonal not
  const MSet coset(make_cyclic(4), 2, {0, 1, 1, 0, 0, 1, 1, 0});
  const auto c = torsor_characterization_check(fib, coset);
  CHECK_FALSE(c.torsor);
  CHECK(c.terminal.pass);
  REQUIRE(c.diagonal.has_value());
  CHECK_FALSE(c.diagonal->pass);
  CHECK(c.diagonal->witness.has_value());
  CHECK(c.verdict.pass);
}

TEST_CASE("ACT cocartesian checks") {
  const ActFibration fib;
  const auto Z2 = make_cyclic(2);
  // inclusion of a proper sub-B-set over the identity
  const auto R = MSet::regular(Z2);
  const auto bigger = disjoint_union(R, MSet::trivial_action(Z2, 1));
  const EquivariantMap incl{finalg::identity_hom(Z2), {0, 1}};
  REQUIRE(check_equivariant(R, bigger, incl));
  const auto v = fib::is_cocartesian(fib, R, bigger, incl);
  CHECK_FALSE(v.pass);
  CHECK(v.witness.has_value());
  CHECK(fib::is_cocartesian(fib, R, R, identity_map(R)).pass);

  const auto monoids = small_monoids(2);
  for (const auto& M : monoids)
    for (const auto& N : monoids)
      for (const auto& f : finalg::enumerate_homs(M, N))
        for (const auto& X : fib.fibre(M)) {
          const auto l = fib.lift(f, X);
          const auto r = fib::is_cocartesian(fib, X, l.target, l.arrow);
          CHECK_MESSAGE(r.pass, r.witness.value_or(""));
          CHECK(fib::check_normal_cleavage(fib, X).pass);
        }
}

TEST_CASE("ACT oplax structure, adjunction and mates") {
  const ActFibration fib;
  const auto Z2 = make_cyclic(2);
  const auto E = idempotent_monoid();
  const auto P = fib.base_product(Z2, E);
  for (const auto& Z : enumerate_msets(P.object, 2)) {
    const auto L = fib::oplax_L(fib, P, Z);
    CHECK(L.first.target.monoid() == static_cast<const FiniteMonoid&>(Z2));
    CHECK(L.second.target.monoid() == E);
  }
  for (const auto& X : enumerate_msets(Z2, 2))
    for (const auto& Y : enumerate_msets(E, 2))
      for (const auto& Z : enumerate_msets(P.object, 2)) {
        const auto v = fib::check_product_adjunction(fib, Z, X, Y);
        CHECK_MESSAGE(v.pass, v.witness.value_or(""));
      }
  CHECK(fib::check_unit_adjunction(fib, fib.fibre(Z2)).pass);
  CHECK_THROWS_AS(fib::oplax_L(fib, P, MSet::regular(Z2)), std::invalid_argument);

  const auto monoids = small_monoids(2);
  for (const auto& A : monoids)
    for (const auto& A2 : monoids)
      for (const auto& a : finalg::enumerate_homs(A, A2))
        for (const auto& b : finalg::enumerate_homs(A2, A))
          for (const auto& X : enumerate_msets(A, 2))
            for (const auto& Y : enumerate_msets(A2, 2)) {
              CHECK(fib::check_beck_chevalley(fib, a, b, X, Y).pass);
              CHECK(fib::check_product_of_lifts(fib, a, b, X, Y).pass);
            }
}

TEST_CASE("unit of the oplax adjunction on diagonals") {
  const ActFibration fib;
  // (M x M)-torsor over a group: eta is an iso
  const auto Z2 = make_cyclic(2);
  const auto P = fib.base_product(Z2, Z2);
  const auto torsor = MSet::regular(P.object);
  const auto eta = fib::unit_eta(fib, P, torsor);
  CHECK(fib::is_vertical_iso(fib, torsor, fib.product(MSet::regular(Z2), MSet::regular(Z2)).object, eta));

  // over the idempotent monoid the unit misses points
  const auto E = idempotent_monoid();
  const auto PE = fib.base_product(E, E);
  bool found = false;
  for (const auto& Z : enumerate_msets(PE.object, 2)) {
    const auto u = fib::unit_eta(fib, PE, Z);
    const auto L = fib::oplax_L(fib, PE, Z);
    const int target = L.first.target.size() * L.second.target.size();
    std::set<int> image(u.map.begin(), u.map.end());
    if (static_cast<int>(image.size()) < target) found = true;
  }
  CHECK(found);

  // eta at the lifted diagonal is an iso exactly when the diagonal map is cocartesian
  for (const auto& B : std::vector<FiniteMonoid>{Z2, E, make_cyclic(3)}) {
    const auto BB = fib.base_product(B, B);
    const auto id = finalg::identity_hom(B);
    const auto diag = fib.base_pair(id, id, BB);
    for (const auto& X : fib.fibre(B)) {
      const auto Z = fib.lift(diag, X).target;
      const auto L = fib::oplax_L(fib, BB, Z);
      const auto R = fib.product(L.first.target, L.second.target);
      const bool iso = fib::is_vertical_iso(fib, Z, R.object, fib::unit_eta(fib, BB, Z));
      CHECK(iso == fib::check_diagonal_cocartesian(fib, X).pass);
    }
  }
}

TEST_CASE("monoidal structure on ACT fibres") {
  const ActFibration fib;
  const auto Z2 = make_cyclic(2);
  const auto m = multiplication_hom(Z2);
  const finalg::Hom e{finalg::trivial_monoid(), Z2, {Z2.identity()}};
  CHECK(fib::unit_object(fib, FiniteMonoid(Z2), m, e) == MSet::regular(Z2));
  const fib::MonoidalFibre<ActFibration> mf(fib, Z2, m, e);
  for (const auto& X : fib.fibre(Z2))
    for (const auto& Y : fib.fibre(Z2)) {
      const auto tau = mf.braiding(X, Y);
      const auto& xy = mf.tensor(X, Y);
      const auto& yx = mf.tensor(Y, X);
      for (int x = 0; x < X.size(); ++x)
        for (int y = 0; y < Y.size(); ++y)
          CHECK(tau.map[xy.lift.map[x * Y.size() + y]] == yx.lift.map[y * X.size() + x]);
    }
  CHECK_THROWS_AS(fib::MonoidalFibre<ActFibration>(fib, Z2, finalg::Hom{finalg::direct_product(Z2, Z2), Z2, {0, 0, 0, 0}}, e),
                  std::invalid_argument);
}

TEST_CASE("groupoidal fibres") {
  ActFibration::Options opts;
  opts.torsors = true;
  const ActFibration tors(opts);
  for (const FiniteGroup& B : std::vector<FiniteGroup>{make_cyclic(1), make_cyclic(2), make_cyclic(3), make_cyclic(4), klein()}) {
    CHECK(fib::groupoid_check(tors, B).pass);
    const auto m = multiplication_hom(B);
    const finalg::Hom e{finalg::trivial_monoid(), B, {B.identity()}};
    std::vector<int> inv(B.size());
    for (int b = 0; b < B.size(); ++b) inv[b] = B.inv(b);
    const auto v = fib::two_group_suite(tors, FiniteMonoid(B), m, e, finalg::Hom{B, B, inv});
    CHECK_MESSAGE(v.pass, v.witness.value_or(""));
  }

  const ActFibration full;
  const auto idem = fib::groupoid_check(full, idempotent_monoid());
  CHECK_FALSE(idem.pass);
  CHECK(idem.witness.has_value());
  CHECK_FALSE(fib::groupoid_check(full, make_cyclic(2)).pass);  // collapse of a two-orbit set

  const auto E = idempotent_monoid();
  const auto suite = fib::two_group_suite(full, E, multiplication_hom(E), finalg::Hom{finalg::trivial_monoid(), E, {0}},
                                          std::nullopt);
  CHECK_FALSE(suite.pass);
  REQUIRE(suite.witness.has_value());
  CHECK(suite.witness->find("no inverse") != std::string::npos);

  const ActFibration empty_fibres([] {
    ActFibration::Options o;
    o.fibre_carrier = -1;
    return o;
  }());
  CHECK(fib::groupoid_check(empty_fibres, make_cyclic(2)).pass);
}
