#include "opfib/act.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "opfib/finalg_json.hpp"

namespace opfib::act {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

bool action_laws_hold(const FiniteMonoid& M, int size, const std::vector<int>& act) {
  auto at = [&](int m, int x) { return act[static_cast<std::size_t>(m) * size + x]; };
  for (int x = 0; x < size; ++x)
    if (at(M.identity(), x) != x) return false;
  for (int m1 = 0; m1 < M.size(); ++m1)
    for (int m2 = 0; m2 < M.size(); ++m2)
      for (int x = 0; x < size; ++x)
        if (at(M.mul(m1, m2), x) != at(m1, at(m2, x))) return false;
  return true;
}

/// Hom M1 x M2 -> N1 x N2 acting componentwise.
Hom product_hom(const Hom& f1, const Hom& f2) {
  const FiniteMonoid src = finalg::direct_product(f1.src, f2.src);
  const FiniteMonoid dst = finalg::direct_product(f1.dst, f2.dst);
  std::vector<int> map(src.size());
  for (int a = 0; a < f1.src.size(); ++a)
    for (int b = 0; b < f2.src.size(); ++b) map[a * f2.src.size() + b] = f1.map[a] * f2.dst.size() + f2.map[b];
  return Hom{src, dst, std::move(map)};
}

fib::Verdict pass_with(std::uint64_t checked) {
  fib::Verdict v;
  v.checked = checked;
  return v;
}

}  // namespace

// -- M-sets ----------------------------------------------------------------------------

MSet::MSet(FiniteMonoid M, int size, std::vector<int> act) : M_(std::move(M)), size_(size), act_(std::move(act)) {
  require(size_ >= 0, "M-set carrier size must be non-negative");
  require(act_.size() == static_cast<std::size_t>(M_.size()) * size_, "action table must be |M| x size");
  for (int v : act_) require(v >= 0 && v < size_, "action table entry out of range");
  require(action_laws_hold(M_, size_, act_), "table is not a left action");
}

MSet MSet::trusted(FiniteMonoid M, int size, std::vector<int> act) {
  MSet X;
  X.M_ = std::move(M);
  X.size_ = size;
  X.act_ = std::move(act);
  return X;
}

MSet MSet::regular(const FiniteMonoid& M) { return trusted(M, M.size(), M.table()); }

MSet MSet::trivial_action(const FiniteMonoid& M, int size) {
  require(size >= 0, "M-set carrier size must be non-negative");
  std::vector<int> act(static_cast<std::size_t>(M.size()) * size);
  for (int m = 0; m < M.size(); ++m)
    for (int x = 0; x < size; ++x) act[static_cast<std::size_t>(m) * size + x] = x;
  return trusted(M, size, std::move(act));
}

bool check_equivariant(const MSet& X, const MSet& Y, const EquivariantMap& u) {
  require(u.f.src == X.monoid() && u.f.dst == Y.monoid(), "equivariant map: monoids do not match");
  require(u.map.size() == static_cast<std::size_t>(X.size()), "equivariant map: carrier map has the wrong length");
  if (!finalg::check_hom(u.f)) return false;
  for (int v : u.map)
    if (v < 0 || v >= Y.size()) return false;
  for (int m = 0; m < X.monoid().size(); ++m)
    for (int x = 0; x < X.size(); ++x)
      if (u.map[X.act(m, x)] != Y.act(u.f.map[m], u.map[x])) return false;
  return true;
}

EquivariantMap identity_map(const MSet& X) {
  std::vector<int> map(X.size());
  std::iota(map.begin(), map.end(), 0);
  return EquivariantMap{finalg::identity_hom(X.monoid()), std::move(map)};
}

EquivariantMap compose(const EquivariantMap& second, const EquivariantMap& first) {
  std::vector<int> map(first.map.size());
  for (std::size_t x = 0; x < map.size(); ++x) map[x] = second.map[first.map[x]];
  return EquivariantMap{finalg::compose(second.f, first.f), std::move(map)};
}

// -- contracted products and lifts ---------------------------------------------------

MSet right_set_along(const Hom& f) {
  const FiniteMonoid& N = f.dst;
  std::vector<int> act(static_cast<std::size_t>(f.src.size()) * N.size());
  for (int m = 0; m < f.src.size(); ++m)
    for (int n = 0; n < N.size(); ++n) act[static_cast<std::size_t>(m) * N.size() + n] = N.mul(n, f.map[m]);
  return MSet(finalg::opposite(f.src), N.size(), std::move(act));
}

ContractedProduct contracted_product(const MSet& X_right, const MSet& Y) {
  const FiniteMonoid& M = Y.monoid();
  require(X_right.monoid() == finalg::opposite(M), "contracted_product: right set is not over the same monoid");
  const int nx = X_right.size();
  const int ny = Y.size();
  std::vector<std::pair<int, int>> relation;
  relation.reserve(static_cast<std::size_t>(nx) * M.size() * ny);
  for (int x = 0; x < nx; ++x)
    for (int m = 0; m < M.size(); ++m)
      for (int y = 0; y < ny; ++y) relation.emplace_back(X_right.act(m, x) * ny + y, x * ny + Y.act(m, y));
  ContractedProduct cp;
  cp.left_size = nx;
  cp.right_size = ny;
  cp.partition = finalg::quotient_by_generated_relation(nx * ny, relation);
  cp.label = cp.partition.dense_labels();
  cp.representative = cp.partition.representatives();
  return cp;
}

CocartesianLift cocartesian_lift(const Hom& f, const MSet& X) {
  require(f.src == X.monoid(), "cocartesian_lift: hom does not start at the M-set's monoid");
  require(finalg::check_hom(f), "cocartesian_lift: not a monoid homomorphism");
  const FiniteMonoid& N = f.dst;
  const int nx = X.size();
  if (finalg::is_identity(f)) {
    std::vector<int> class_of(static_cast<std::size_t>(N.size()) * nx);
    for (int n = 0; n < N.size(); ++n)
      for (int x = 0; x < nx; ++x) class_of[static_cast<std::size_t>(n) * nx + x] = X.act(n, x);
    return CocartesianLift{identity_map(X), X, std::move(class_of)};
  }

  const ContractedProduct cp = contracted_product(right_set_along(f), X);
  const int q = cp.size();
  std::vector<int> act(static_cast<std::size_t>(N.size()) * q, -1);
  for (int p = 0; p < N.size() * nx; ++p) {
    const int n = p / nx, x = p % nx;
    for (int nbar = 0; nbar < N.size(); ++nbar) {
      int& slot = act[static_cast<std::size_t>(nbar) * q + cp.label[p]];
      const int image = cp.class_of(N.mul(nbar, n), x);
      if (slot >= 0 && slot != image) throw InternalInconsistency("action on the contracted product is not well defined");
      slot = image;
    }
  }
  MSet target(N, q, std::move(act));
  std::vector<int> map(nx);
  for (int x = 0; x < nx; ++x) map[x] = cp.class_of(N.identity(), x);
  return CocartesianLift{EquivariantMap{f, std::move(map)}, std::move(target), cp.label};
}

// -- products ---------------------------------------------------------------------------

MSet product_of_actions(const MSet& X, const MSet& Y) {
  const FiniteMonoid MN = finalg::direct_product(X.monoid(), Y.monoid());
  const int nm = Y.monoid().size();
  const int size = X.size() * Y.size();
  std::vector<int> act(static_cast<std::size_t>(MN.size()) * size);
  for (int mn = 0; mn < MN.size(); ++mn)
    for (int p = 0; p < size; ++p)
      act[static_cast<std::size_t>(mn) * size + p] =
          X.act(mn / nm, p / Y.size()) * Y.size() + Y.act(mn % nm, p % Y.size());
  return MSet::trusted(MN, size, std::move(act));
}

EquivariantMap action_projection(const MSet& X, const MSet& Y, int which) {
  require(which == 1 || which == 2, "projection index must be 1 or 2");
  std::vector<int> map(static_cast<std::size_t>(X.size()) * Y.size());
  for (std::size_t p = 0; p < map.size(); ++p)
    map[p] = which == 1 ? static_cast<int>(p) / Y.size() : static_cast<int>(p) % Y.size();
  return EquivariantMap{finalg::product_projection(X.monoid(), Y.monoid(), which), std::move(map)};
}

EquivariantMap action_pair(const EquivariantMap& u1, const EquivariantMap& u2, const MSet& product,
                           int second_size) {
  require(u1.f.src == u2.f.src, "action_pair: arrows have different sources");
  require(u1.map.size() == u2.map.size(), "action_pair: arrows have different carriers");
  require(product.monoid() == finalg::direct_product(u1.f.dst, u2.f.dst),
          "action_pair: product is not over the product of the codomains");
  std::vector<int> fm(u1.f.src.size());
  for (int m = 0; m < u1.f.src.size(); ++m) fm[m] = u1.f.map[m] * u2.f.dst.size() + u2.f.map[m];
  std::vector<int> map(u1.map.size());
  for (std::size_t x = 0; x < map.size(); ++x) map[x] = u1.map[x] * second_size + u2.map[x];
  return EquivariantMap{Hom{u1.f.src, product.monoid(), std::move(fm)}, std::move(map)};
}

Hom multiplication_hom(const FiniteMonoid& M) {
  require(M.is_commutative(), "multiplication is a homomorphism only for commutative monoids");
  std::vector<int> map(static_cast<std::size_t>(M.size()) * M.size());
  for (int a = 0; a < M.size(); ++a)
    for (int b = 0; b < M.size(); ++b) map[static_cast<std::size_t>(a) * M.size() + b] = M.mul(a, b);
  return Hom{finalg::direct_product(M, M), M, std::move(map)};
}

MSet tensor_over_M(const MSet& X, const MSet& Y) {
  require(X.monoid() == Y.monoid(), "tensor_over_M: M-sets over different monoids");
  return cocartesian_lift(multiplication_hom(X.monoid()), product_of_actions(X, Y)).target;
}

fib::Verdict check_contracted_iso(const MSet& X, const MSet& Y) {
  require(X.monoid() == Y.monoid(), "check_contracted_iso: M-sets over different monoids");
  const FiniteMonoid& M = X.monoid();
  require(M.is_commutative(), "check_contracted_iso needs a commutative monoid");
  const ContractedProduct cp = contracted_product(MSet::trusted(finalg::opposite(M), X.size(), X.table()), Y);
  const CocartesianLift L = cocartesian_lift(multiplication_hom(M), product_of_actions(X, Y));
  const int ny = Y.size();
  const int q = cp.size();

  std::vector<int> phi(q);
  for (int c = 0; c < q; ++c) phi[c] = L.arrow.map[cp.representative[c]];
  for (int p = 0; p < X.size() * ny; ++p)
    if (phi[cp.label[p]] != L.arrow.map[p])
      return fib::Verdict::fail("[x,y] -> [1,x,y] is not well defined on the class of pair " + std::to_string(p));

  for (int m = 0; m < M.size(); ++m) {
    std::vector<int> act(q, -1);
    for (int p = 0; p < X.size() * ny; ++p) {
      const int image = cp.class_of(X.act(m, p / ny), p % ny);
      int& slot = act[cp.label[p]];
      if (slot >= 0 && slot != image)
        return fib::Verdict::fail("action on the contracted product is not well defined for m = " + std::to_string(m));
      slot = image;
    }
    for (int c = 0; c < q; ++c)
      if (phi[act[c]] != L.target.act(m, phi[c]))
        return fib::Verdict::fail("comparison is not equivariant at m = " + std::to_string(m) +
                                  ", class " + std::to_string(c));
  }
  if (!finalg::is_bijective(phi, L.target.size()))
    return fib::Verdict::fail("comparison " + std::to_string(q) + " -> " + std::to_string(L.target.size()) +
                              " classes is not bijective");
  return pass_with(static_cast<std::uint64_t>(q) * M.size());
}

fib::Verdict check_lift_product_comparison(const Hom& f1, const MSet& X1, const Hom& f2, const MSet& X2) {
  const CocartesianLift L1 = cocartesian_lift(f1, X1);
  const CocartesianLift L2 = cocartesian_lift(f2, X2);
  const Hom f12 = product_hom(f1, f2);
  const CocartesianLift Q = cocartesian_lift(f12, product_of_actions(X1, X2));
  const MSet P = product_of_actions(L1.target, L2.target);
  const int n1 = f1.dst.size(), n2 = f2.dst.size();
  const int x1n = X1.size(), x2n = X2.size();
  const int q2 = L2.target.size();

  std::vector<int> comp(P.size(), -1);
  for (int a = 0; a < n1 * x1n; ++a)
    for (int b = 0; b < n2 * x2n; ++b) {
      const int nn = (a / x1n) * n2 + b / x2n;
      const int xx = (a % x1n) * x2n + b % x2n;
      const int image = Q.class_of_pair[static_cast<std::size_t>(nn) * (x1n * x2n) + xx];
      int& slot = comp[L1.class_of_pair[a] * q2 + L2.class_of_pair[b]];
      if (slot >= 0 && slot != image)
        return fib::Verdict::fail("product-of-lifts comparison is not well defined");
      slot = image;
    }
  if (std::find(comp.begin(), comp.end(), -1) != comp.end())
    throw InternalInconsistency("product-of-lifts comparison misses a class");
  for (int nn = 0; nn < P.monoid().size(); ++nn)
    for (int p = 0; p < P.size(); ++p)
      if (comp[P.act(nn, p)] != Q.target.act(nn, comp[p]))
        return fib::Verdict::fail("product-of-lifts comparison is not equivariant");
  if (!finalg::is_bijective(comp, Q.target.size()))
    return fib::Verdict::fail("product-of-lifts comparison is not bijective");
  return pass_with(static_cast<std::uint64_t>(P.size()));
}

// -- enumeration --------------------------------------------------------------------------

std::vector<EquivariantMap> equivariant_maps(const MSet& X, const MSet& Y, const Hom& f, std::uint64_t budget) {
  return equivariant_maps_fixing(X, Y, f, std::vector<int>(X.size(), -1), budget);
}

std::vector<EquivariantMap> equivariant_maps_fixing(const MSet& X, const MSet& Y, const Hom& f,
                                                    const std::vector<int>& fixed, std::uint64_t budget) {
  require(f.src == X.monoid() && f.dst == Y.monoid(), "equivariant_maps: hom does not match the monoids");
  require(fixed.size() == static_cast<std::size_t>(X.size()), "equivariant_maps: one prescribed value per point");
  for (int v : fixed) require(v < Y.size(), "equivariant_maps: prescribed value out of range");
  const FiniteMonoid& M = X.monoid();
  std::vector<int> value(X.size(), -1);
  std::vector<int> trail;

  // Sets value[x] = y and everything it forces along the orbit of x.
  auto assign = [&](int x, int y) {
    std::vector<std::pair<int, int>> todo = {{x, y}};
    while (!todo.empty()) {
      const auto [p, v] = todo.back();
      todo.pop_back();
      if (value[p] >= 0) {
        if (value[p] != v) return false;
        continue;
      }
      value[p] = v;
      trail.push_back(p);
      for (int m = 0; m < M.size(); ++m) todo.emplace_back(X.act(m, p), Y.act(f.map[m], v));
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      value[trail.back()] = -1;
      trail.pop_back();
    }
  };

  std::vector<EquivariantMap> out;
  for (int x = 0; x < X.size(); ++x)
    if (fixed[x] >= 0 && !assign(x, fixed[x])) return out;

  std::uint64_t nodes = 0;
  auto search = [&](auto&& self, int from) -> void {
    int x = from;
    while (x < X.size() && value[x] >= 0) ++x;
    if (x == X.size()) {
      out.push_back(EquivariantMap{f, value});
      return;
    }
    for (int y = 0; y < Y.size(); ++y) {
      if (++nodes > budget) throw ResourceLimit("equivariant_maps", nodes, budget);
      const std::size_t mark = trail.size();
      if (assign(x, y)) self(self, x + 1);
      undo(mark);
    }
  };
  search(search, 0);
  std::sort(out.begin(), out.end(), [](const EquivariantMap& a, const EquivariantMap& b) { return a.map < b.map; });
  return out;
}

std::vector<MSet> enumerate_actions(const FiniteMonoid& M, int k, std::uint64_t budget) {
  require(k >= 0, "carrier size must be non-negative");
  if (k == 0) return {MSet::trusted(M, 0, {})};
  const std::vector<int> gens = finalg::monoid_generators(M);
  const std::uint64_t per_generator = saturating_pow(static_cast<std::uint64_t>(k), static_cast<std::size_t>(k));
  const int n = M.size();

  // transformation of each monoid element, -1 rows unset
  std::vector<std::vector<int>> image(n);
  std::vector<std::vector<int>> choice(gens.size(), std::vector<int>(k, 0));
  std::uint64_t nodes = 0;
  std::vector<MSet> out;

  // Recomputes images of the submonoid generated by the first `count` generators;
  // false when two words for the same element act differently.
  auto closure = [&](std::size_t count) {
    for (auto& row : image) row.clear();
    std::vector<int> id(k);
    std::iota(id.begin(), id.end(), 0);
    image[M.identity()] = id;
    std::vector<int> queue = {M.identity()};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int m = queue[head];
      for (std::size_t i = 0; i < count; ++i) {
        const int gm = M.mul(gens[i], m);
        std::vector<int> t(k);
        for (int x = 0; x < k; ++x) t[x] = choice[i][image[m][x]];
        if (image[gm].empty()) {
          image[gm] = std::move(t);
          queue.push_back(gm);
        } else if (image[gm] != t) {
          return false;
        }
      }
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t depth) -> void {
    if (depth == gens.size()) {
      std::vector<int> act(static_cast<std::size_t>(n) * k);
      for (int m = 0; m < n; ++m)
        for (int x = 0; x < k; ++x) act[static_cast<std::size_t>(m) * k + x] = image[m][x];
      out.push_back(MSet::trusted(M, k, std::move(act)));
      return;
    }
    for (std::uint64_t code = 0; code < per_generator; ++code) {
      if (++nodes > budget) throw ResourceLimit("enumerate_actions", nodes, budget);
      std::uint64_t rest = code;
      for (int x = k - 1; x >= 0; --x) {
        choice[depth][x] = static_cast<int>(rest % k);
        rest /= k;
      }
      if (closure(depth + 1)) self(self, depth + 1);
    }
  };
  if (gens.empty()) {
    if (!closure(0)) throw InternalInconsistency("trivial monoid has no identity action");
  }
  search(search, 0);
  std::sort(out.begin(), out.end(), [](const MSet& a, const MSet& b) { return a.table() < b.table(); });
  for (const auto& X : out)
    if (!action_laws_hold(M, k, X.table())) throw InternalInconsistency("enumerated table is not an action");
  return out;
}

MSet canonical_form(const MSet& X) {
  const int k = X.size();
  const int n = X.monoid().size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = X.table();
  std::vector<int> candidate(best.size());
  do {
    for (int m = 0; m < n; ++m)
      for (int x = 0; x < k; ++x)
        candidate[static_cast<std::size_t>(m) * k + perm[x]] = perm[X.act(m, x)];
    if (candidate < best) best = candidate;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return MSet::trusted(X.monoid(), k, std::move(best));
}

std::vector<MSet> enumerate_msets(const FiniteMonoid& M, int k, std::uint64_t budget) {
  std::set<std::vector<int>> seen;
  for (const auto& X : enumerate_actions(M, k, budget)) seen.insert(canonical_form(X).table());
  std::vector<MSet> out;
  for (const auto& t : seen) out.push_back(MSet::trusted(M, k, t));
  return out;
}

// -- torsors -------------------------------------------------------------------------------

bool is_torsor(const MSet& X) {
  const FiniteGroup B(X.monoid());
  const int n = X.size();
  if (n == 0) return false;
  if (static_cast<long long>(B.size()) * n != static_cast<long long>(n) * n) return false;
  std::vector<char> hit(static_cast<std::size_t>(n) * n, 0);
  for (int b = 0; b < B.size(); ++b)
    for (int x = 0; x < n; ++x) {
      char& h = hit[static_cast<std::size_t>(x) * n + X.act(b, x)];
      if (h) return false;
      h = 1;
    }
  return true;
}

std::vector<MSet> torsors_enumerate(const FiniteGroup& B, std::uint64_t budget) {
  std::vector<MSet> out;
  for (auto& X : enumerate_actions(B, B.size(), budget))
    if (is_torsor(X)) out.push_back(std::move(X));
  return out;
}

TorsorInvariants tors_pi0_pi1(const FiniteGroup& B, std::uint64_t budget) {
  const std::vector<MSet> torsors = torsors_enumerate(B, budget);
  const Hom id = finalg::identity_hom(B);
  auto isomorphic = [&](const MSet& X, const MSet& Y) {
    for (const auto& u : equivariant_maps(X, Y, id, budget))
      if (finalg::is_bijective(u.map, Y.size())) return true;
    return false;
  };
  std::vector<int> class_of(torsors.size(), -1);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < torsors.size(); ++i) {
    for (std::size_t r = 0; r < reps.size() && class_of[i] < 0; ++r)
      if (isomorphic(torsors[reps[r]], torsors[i])) class_of[i] = static_cast<int>(r);
    if (class_of[i] < 0) {
      class_of[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }

  const MSet regular = MSet::regular(B);
  std::vector<EquivariantMap> autos;
  for (auto& u : equivariant_maps(regular, regular, id, budget))
    if (finalg::is_bijective(u.map, regular.size())) autos.push_back(std::move(u));
  const int k = static_cast<int>(autos.size());
  std::vector<int> mul(static_cast<std::size_t>(k) * k);
  int identity = -1;
  for (int i = 0; i < k; ++i) {
    if (autos[i] == identity_map(regular)) identity = i;
    for (int j = 0; j < k; ++j) {
      const auto c = compose(autos[i], autos[j]);
      const auto it = std::find(autos.begin(), autos.end(), c);
      if (it == autos.end()) throw InternalInconsistency("automorphisms are not closed under composition");
      mul[static_cast<std::size_t>(i) * k + j] = static_cast<int>(it - autos.begin());
    }
  }
  return TorsorInvariants{torsors.size(), static_cast<int>(reps.size()), std::move(class_of),
                          FiniteGroup(FiniteMonoid(k, std::move(mul), identity))};
}

TorsorCharacterization torsor_characterization_check(const ActFibration& fib, const MSet& X) {
  TorsorCharacterization out;
  out.torsor = is_torsor(X);
  out.terminal = fib::check_terminal_cocartesian(fib, X);
  if (out.terminal.pass) out.diagonal = fib::check_diagonal_cocartesian(fib, X);
  const bool both = out.terminal.pass && out.diagonal && out.diagonal->pass;
  out.verdict.checked = out.terminal.checked + (out.diagonal ? out.diagonal->checked : 0);
  out.verdict.sampled = out.terminal.sampled || (out.diagonal && out.diagonal->sampled);
  if (out.torsor != both) {
    out.verdict.pass = false;
    std::string w = describe(X) + ": torsor=" + (out.torsor ? "yes" : "no") +
                    ", terminal map cocartesian=" + (out.terminal.pass ? "yes" : "no");
    if (out.diagonal) w += std::string(", diagonal cocartesian=") + (out.diagonal->pass ? "yes" : "no");
    out.verdict.witness = w;
  }
  return out;
}

// -- serialization --------------------------------------------------------------------------

nlohmann::json to_json(const MSet& X) {
  return {{"monoid", finalg::to_json(X.monoid())},
          {"size", X.size()},
          {"act", finalg::table_to_json(X.table(), X.monoid().size(), X.size())}};
}

MSet mset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("monoid") || !j.contains("size") || !j.contains("act"))
    throw std::invalid_argument("M-set needs \"monoid\", \"size\" and \"act\"");
  FiniteMonoid M = finalg::monoid_from_json(j.at("monoid"));
  if (!j.at("size").is_number_integer()) throw std::invalid_argument("field \"size\" must be an integer");
  const int size = j.at("size").get<int>();
  if (size < 0) throw std::invalid_argument("field \"size\" must be non-negative");
  std::vector<int> act = finalg::table_from_json(j.at("act"), M.size(), size, "act");
  return MSet(std::move(M), size, std::move(act));
}

std::string describe(const MSet& X) {
  std::ostringstream s;
  s << "mset(|M|=" << X.monoid().size() << ", n=" << X.size() << ", act=[" << join(X.table()) << "])";
  return s.str();
}

// -- the oracle -----------------------------------------------------------------------------

ActFibration::ActFibration(Options options) : options_(options) {
  for (int order = 1; order <= 2; ++order)
    for (auto& T : finalg::enumerate_monoids(order)) catalog_.push_back(std::move(T));
}

fib::BaseProduct<FiniteMonoid, Hom> ActFibration::base_product(const FiniteMonoid& A, const FiniteMonoid& B) const {
  return {finalg::direct_product(A, B), finalg::product_projection(A, B, 1), finalg::product_projection(A, B, 2)};
}

Hom ActFibration::base_pair(const Hom& f1, const Hom& f2, const fib::BaseProduct<FiniteMonoid, Hom>& P) const {
  require(f1.src == f2.src, "base_pair: arrows have different sources");
  require(P.object == finalg::direct_product(f1.dst, f2.dst), "base_pair: product does not match the codomains");
  std::vector<int> map(f1.src.size());
  for (int m = 0; m < f1.src.size(); ++m) map[m] = f1.map[m] * f2.dst.size() + f2.map[m];
  return Hom{f1.src, P.object, std::move(map)};
}

Hom ActFibration::base_terminal_map(const FiniteMonoid& A) const {
  return Hom{A, finalg::trivial_monoid(), std::vector<int>(A.size(), 0)};
}

std::vector<int> ActFibration::object_key(const MSet& X) const {
  std::vector<int> key = {X.size()};
  key.insert(key.end(), X.table().begin(), X.table().end());
  return key;
}

fib::Lift<MSet, EquivariantMap> ActFibration::lift(const Hom& f, const MSet& X) const {
  CocartesianLift l = cocartesian_lift(f, X);
  return {std::move(l.arrow), std::move(l.target)};
}

fib::Product<MSet, EquivariantMap> ActFibration::product(const MSet& X, const MSet& Y) const {
  return {product_of_actions(X, Y), action_projection(X, Y, 1), action_projection(X, Y, 2)};
}

EquivariantMap ActFibration::pair(const EquivariantMap& u1, const EquivariantMap& u2,
                                  const fib::Product<MSet, EquivariantMap>& P) const {
  // proj2 is onto the second factor whenever the product is nonempty
  int second = 0;
  for (int v : P.proj2.map) second = std::max(second, v + 1);
  return action_pair(u1, u2, P.object, second);
}

EquivariantMap ActFibration::terminal_map(const MSet& X) const {
  return EquivariantMap{base_terminal_map(X.monoid()), std::vector<int>(X.size(), 0)};
}

const std::vector<MSet>& ActFibration::msets_upto(const FiniteMonoid& A, int max_carrier) const {
  std::vector<int> key = A.table();
  key.push_back(A.identity());
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->msets.find({key, max_carrier});
  if (it != cache_->msets.end()) return it->second;
  std::vector<MSet> all;
  for (int k = 0; k <= max_carrier; ++k)
    for (auto& X : enumerate_msets(A, k, options_.budget)) all.push_back(std::move(X));
  return cache_->msets.emplace(std::make_pair(std::move(key), max_carrier), std::move(all)).first->second;
}

std::vector<MSet> ActFibration::fibre(const FiniteMonoid& A) const {
  if (options_.torsors) return torsors_enumerate(FiniteGroup(A), options_.budget);
  return msets_upto(A, options_.fibre_carrier);
}

std::vector<fib::FactorTarget<Hom, MSet>> ActFibration::factorizations(const FiniteMonoid& A) const {
  std::vector<fib::FactorTarget<Hom, MSet>> out;
  const Hom id = finalg::identity_hom(A);
  for (const auto& Z : msets_upto(A, options_.identity_carrier)) out.push_back({id, Z});
  for (const auto& T : catalog_) {
    if (T == A) continue;
    const auto homs = finalg::enumerate_homs(A, T, options_.budget);
    if (homs.empty()) continue;
    const auto& zs = msets_upto(T, options_.catalog_carrier);
    for (const auto& h : homs)
      for (const auto& Z : zs) out.push_back({h, Z});
  }
  return out;
}

std::vector<EquivariantMap> ActFibration::solve_vertical(const MSet& S, const MSet& T, const EquivariantMap& pre,
                                                         const EquivariantMap& rhs) const {
  require(pre.map.size() == rhs.map.size(), "solve_vertical: arrows have different sources");
  std::vector<int> fixed(S.size(), -1);
  for (std::size_t w = 0; w < pre.map.size(); ++w) {
    int& slot = fixed[pre.map[w]];
    if (slot >= 0 && slot != rhs.map[w]) return {};
    slot = rhs.map[w];
  }
  std::vector<EquivariantMap> out;
  const Hom id = finalg::identity_hom(S.monoid());
  for (auto& v : equivariant_maps_fixing(S, T, id, fixed, options_.budget))
    if (compose(v, pre) == rhs) out.push_back(std::move(v));
  return out;
}

std::string ActFibration::describe_arrow(const EquivariantMap& u) const {
  return "(f=[" + join(u.f.map) + "], map=[" + join(u.map) + "])";
}

}  // namespace opfib::act
