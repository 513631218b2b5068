#include "opfib/finalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace opfib::finalg {

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

// Breadth-first spanning tree of a monoid from its identity: every element x
// other than the identity is recorded as x = gens[via[x]] * from[x].
struct WordTree {
  std::vector<int> order;  // BFS order, identity first
  std::vector<int> via;
  std::vector<int> from;
};

WordTree spanning_words(const FiniteMonoid& M, const std::vector<int>& gens) {
  WordTree t;
  t.via.assign(M.size(), -1);
  t.from.assign(M.size(), -1);
  std::vector<char> seen(M.size(), 0);
  seen[M.identity()] = 1;
  t.order.push_back(M.identity());
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    const int w = t.order[head];
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const int x = M.mul(gens[g], w);
      if (!seen[x]) {
        seen[x] = 1;
        t.via[x] = static_cast<int>(g);
        t.from[x] = w;
        t.order.push_back(x);
      }
    }
  }
  return t;
}

// Mixed-radix counter over digits[i] in [0, radix(i)); false once it wraps to all zeros.
template <typename Radix>
bool advance(std::vector<int>& digits, Radix radix) {
  for (std::size_t d = digits.size(); d-- > 0;) {
    if (++digits[d] < radix(d)) return true;
    digits[d] = 0;
  }
  return false;
}

class MinRootUnionFind {
 public:
  explicit MinRootUnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<int> parent_;
};

std::vector<int> prime_factors(int n) {
  std::vector<int> ps;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

}  // namespace

// -- FiniteMonoid -----------------------------------------------------------

FiniteMonoid::FiniteMonoid(int size, std::vector<int> mul, int identity)
    : size_(size), mul_(std::move(mul)), identity_(identity) {
  require(size_ >= 1, "monoid size must be positive");
  require(mul_.size() == static_cast<std::size_t>(size_) * size_,
          "multiplication table must have size*size entries");
  require(identity_ >= 0 && identity_ < size_, "identity index out of range");
  for (int v : mul_) require(v >= 0 && v < size_, "table entry out of range");
  for (int x = 0; x < size_; ++x) {
    require(this->mul(identity_, x) == x && this->mul(x, identity_) == x,
            "identity is not two-sided neutral at element " + std::to_string(x));
  }
  for (int x = 0; x < size_; ++x)
    for (int y = 0; y < size_; ++y)
      for (int z = 0; z < size_; ++z)
        require(this->mul(this->mul(x, y), z) == this->mul(x, this->mul(y, z)),
                "multiplication is not associative at (" + std::to_string(x) + "," +
                    std::to_string(y) + "," + std::to_string(z) + ")");
}

FiniteMonoid FiniteMonoid::from_rows(const std::vector<std::vector<int>>& rows, int identity) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    require(static_cast<int>(row.size()) == n, "multiplication table must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return FiniteMonoid(n, std::move(flat), identity);
}

FiniteMonoid FiniteMonoid::trusted(int size, std::vector<int> mul, int identity) {
  FiniteMonoid m;
  m.size_ = size;
  m.mul_ = std::move(mul);
  m.identity_ = identity;
  return m;
}

std::vector<std::vector<int>> FiniteMonoid::rows() const {
  std::vector<std::vector<int>> r(size_);
  for (int x = 0; x < size_; ++x)
    r[x].assign(mul_.begin() + static_cast<std::ptrdiff_t>(x) * size_,
                mul_.begin() + static_cast<std::ptrdiff_t>(x + 1) * size_);
  return r;
}

bool FiniteMonoid::is_commutative() const {
  for (int x = 0; x < size_; ++x)
    for (int y = x + 1; y < size_; ++y)
      if (mul(x, y) != mul(y, x)) return false;
  return true;
}

// -- FiniteGroup ------------------------------------------------------------

namespace {

std::vector<int> compute_inverses(const FiniteMonoid& m) {
  std::vector<int> inv(m.size(), -1);
  for (int x = 0; x < m.size(); ++x) {
    for (int y = 0; y < m.size(); ++y) {
      if (m.mul(x, y) == m.identity() && m.mul(y, x) == m.identity()) {
        inv[x] = y;
        break;
      }
    }
  }
  return inv;
}

}  // namespace

FiniteGroup::FiniteGroup(const FiniteMonoid& monoid) : FiniteMonoid(monoid) {
  inv_ = compute_inverses(*this);
  for (int x = 0; x < size_; ++x)
    require(inv_[x] >= 0, "element " + std::to_string(x) + " has no inverse");
}

FiniteGroup::FiniteGroup(int size, std::vector<int> mul, int identity, std::vector<int> inv)
    : FiniteMonoid(size, std::move(mul), identity), inv_(std::move(inv)) {
  require(inv_.size() == static_cast<std::size_t>(size_), "inverse table has wrong length");
  for (int x = 0; x < size_; ++x) {
    require(inv_[x] >= 0 && inv_[x] < size_, "inverse entry out of range");
    require(this->mul(x, inv_[x]) == identity_ && this->mul(inv_[x], x) == identity_,
            "inv[" + std::to_string(x) + "] is not an inverse");
  }
}

FiniteGroup FiniteGroup::trusted(int size, std::vector<int> mul, int identity) {
  FiniteGroup g;
  static_cast<FiniteMonoid&>(g) = FiniteMonoid::trusted(size, std::move(mul), identity);
  g.inv_ = compute_inverses(g);
  for (int x = 0; x < size; ++x)
    if (g.inv_[x] < 0) throw InternalInconsistency("trusted group table lacks an inverse");
  return g;
}

FiniteAbelianGroup::FiniteAbelianGroup(const FiniteGroup& group) : FiniteGroup(group) {
  require(is_commutative(), "group is not abelian");
}

FiniteAbelianGroup FiniteAbelianGroup::trusted(const FiniteGroup& group) {
  FiniteAbelianGroup a;
  static_cast<FiniteGroup&>(a) = group;
  return a;
}

// -- CModule ----------------------------------------------------------------

CModule::CModule(FiniteGroup C, FiniteAbelianGroup B, std::vector<int> xi)
    : C_(std::move(C)), B_(std::move(B)), xi_(std::move(xi)) {
  const int nc = C_.size();
  const int nb = B_.size();
  require(xi_.size() == static_cast<std::size_t>(nc) * nb, "action table must be |C| x |B|");
  for (int v : xi_) require(v >= 0 && v < nb, "action entry out of range");
  for (int b = 0; b < nb; ++b) require(act(C_.identity(), b) == b, "identity of C must act trivially");
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2)
      for (int b = 0; b < nb; ++b)
        require(act(C_.mul(c1, c2), b) == act(c1, act(c2, b)),
                "action is not compatible with multiplication in C");
  for (int c = 0; c < nc; ++c) {
    std::vector<int> row(xi_.begin() + static_cast<std::ptrdiff_t>(c) * nb,
                         xi_.begin() + static_cast<std::ptrdiff_t>(c + 1) * nb);
    require(is_bijective(row, nb), "xi(c, -) is not a bijection");
    for (int x = 0; x < nb; ++x)
      for (int y = 0; y < nb; ++y)
        require(act(c, B_.add(x, y)) == B_.add(act(c, x), act(c, y)),
                "xi(c, -) is not additive");
  }
}

CModule CModule::trusted(FiniteGroup C, FiniteAbelianGroup B, std::vector<int> xi) {
  CModule M(C, make_cyclic(1), std::vector<int>(C.size(), 0));
  M.B_ = std::move(B);
  M.xi_ = std::move(xi);
  return M;
}

CModule CModule::trivial(FiniteGroup C, FiniteAbelianGroup B) {
  std::vector<int> xi(static_cast<std::size_t>(C.size()) * B.size());
  for (int c = 0; c < C.size(); ++c)
    for (int b = 0; b < B.size(); ++b) xi[static_cast<std::size_t>(c) * B.size() + b] = b;
  return trusted(std::move(C), std::move(B), std::move(xi));
}

CModule CModule::zero(FiniteGroup C) { return trivial(std::move(C), make_cyclic(1)); }

// -- Partition --------------------------------------------------------------

std::vector<int> Partition::representatives() const {
  std::vector<int> reps;
  for (int x = 0; x < size(); ++x)
    if (class_of[x] == x) reps.push_back(x);
  return reps;
}

int Partition::class_count() const {
  int k = 0;
  for (int x = 0; x < size(); ++x) k += class_of[x] == x;
  return k;
}

std::vector<int> Partition::dense_labels() const {
  std::vector<int> label(size(), -1);
  int next = 0;
  for (int x = 0; x < size(); ++x)
    if (class_of[x] == x) label[x] = next++;
  for (int x = 0; x < size(); ++x) label[x] = label[class_of[x]];
  return label;
}

// -- constructions ----------------------------------------------------------

FiniteAbelianGroup make_cyclic(int n) {
  require(n >= 1, "cyclic group order must be at least 1");
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) {
    inv[i] = (n - i) % n;
    for (int j = 0; j < n; ++j) mul[static_cast<std::size_t>(i) * n + j] = (i + j) % n;
  }
  return FiniteAbelianGroup(FiniteGroup(n, std::move(mul), 0, std::move(inv)));
}

FiniteMonoid trivial_monoid() { return make_cyclic(1); }

namespace {

std::vector<int> product_table(const FiniteMonoid& G, const FiniteMonoid& H) {
  const int g = G.size();
  const int h = H.size();
  const int n = g * h;
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int i1 = 0; i1 < g; ++i1)
    for (int j1 = 0; j1 < h; ++j1)
      for (int i2 = 0; i2 < g; ++i2)
        for (int j2 = 0; j2 < h; ++j2)
          mul[static_cast<std::size_t>(i1 * h + j1) * n + (i2 * h + j2)] =
              G.mul(i1, i2) * h + H.mul(j1, j2);
  return mul;
}

}  // namespace

FiniteMonoid direct_product(const FiniteMonoid& G, const FiniteMonoid& H) {
  return FiniteMonoid::trusted(G.size() * H.size(), product_table(G, H),
                               G.identity() * H.size() + H.identity());
}

FiniteGroup direct_product(const FiniteGroup& G, const FiniteGroup& H) {
  return FiniteGroup::trusted(G.size() * H.size(), product_table(G, H),
                              G.identity() * H.size() + H.identity());
}

FiniteAbelianGroup direct_product(const FiniteAbelianGroup& G, const FiniteAbelianGroup& H) {
  return FiniteAbelianGroup::trusted(direct_product(static_cast<const FiniteGroup&>(G),
                                                    static_cast<const FiniteGroup&>(H)));
}

Hom product_projection(const FiniteMonoid& G, const FiniteMonoid& H, int which) {
  require(which == 1 || which == 2, "projection index must be 1 or 2");
  FiniteMonoid P = direct_product(G, H);
  std::vector<int> map(P.size());
  for (int i = 0; i < G.size(); ++i)
    for (int j = 0; j < H.size(); ++j) map[i * H.size() + j] = which == 1 ? i : j;
  return Hom{P, which == 1 ? G : H, std::move(map)};
}

Hom product_injection(const FiniteMonoid& G, const FiniteMonoid& H, int which) {
  require(which == 1 || which == 2, "injection index must be 1 or 2");
  FiniteMonoid P = direct_product(G, H);
  const FiniteMonoid& src = which == 1 ? G : H;
  std::vector<int> map(src.size());
  for (int x = 0; x < src.size(); ++x)
    map[x] = which == 1 ? x * H.size() + H.identity() : G.identity() * H.size() + x;
  return Hom{src, P, std::move(map)};
}

FiniteMonoid opposite(const FiniteMonoid& M) {
  const int n = M.size();
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) mul[static_cast<std::size_t>(x) * n + y] = M.mul(y, x);
  return FiniteMonoid::trusted(n, std::move(mul), M.identity());
}

SemidirectProduct semidirect_product(const CModule& module) {
  const FiniteGroup& C = module.C();
  const FiniteAbelianGroup& B = module.B();
  const int nc = C.size();
  const int n = B.size() * nc;
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int b1 = 0; b1 < B.size(); ++b1)
    for (int c1 = 0; c1 < nc; ++c1)
      for (int b2 = 0; b2 < B.size(); ++b2)
        for (int c2 = 0; c2 < nc; ++c2)
          mul[static_cast<std::size_t>(b1 * nc + c1) * n + (b2 * nc + c2)] =
              B.add(b1, module.act(c1, b2)) * nc + C.mul(c1, c2);
  FiniteGroup group(FiniteMonoid(n, std::move(mul), B.zero() * nc + C.identity()));
  std::vector<int> inj(B.size());
  for (int b = 0; b < B.size(); ++b) inj[b] = b * nc + C.identity();
  std::vector<int> proj(n);
  for (int x = 0; x < n; ++x) proj[x] = x % nc;
  Hom injection{B, group, std::move(inj)};
  Hom projection{group, C, std::move(proj)};
  return SemidirectProduct{std::move(group), std::move(injection), std::move(projection)};
}

// -- homomorphisms ----------------------------------------------------------

bool check_hom(const Hom& h) {
  require(h.map.size() == static_cast<std::size_t>(h.src.size()),
          "hom map length does not match source size");
  for (int v : h.map) require(v >= 0 && v < h.dst.size(), "hom map entry out of range");
  if (h.map[h.src.identity()] != h.dst.identity()) return false;
  for (int x = 0; x < h.src.size(); ++x)
    for (int y = 0; y < h.src.size(); ++y)
      if (h.map[h.src.mul(x, y)] != h.dst.mul(h.map[x], h.map[y])) return false;
  return true;
}

Hom identity_hom(const FiniteMonoid& M) {
  std::vector<int> map(M.size());
  std::iota(map.begin(), map.end(), 0);
  return Hom{M, M, std::move(map)};
}

Hom compose(const Hom& g, const Hom& f) {
  require(f.dst == g.src, "cannot compose homs: codomain/domain mismatch");
  std::vector<int> map(f.src.size());
  for (int x = 0; x < f.src.size(); ++x) map[x] = g.map[f.map[x]];
  return Hom{f.src, g.dst, std::move(map)};
}

bool is_identity(const Hom& h) {
  if (!(h.src == h.dst)) return false;
  for (int x = 0; x < h.src.size(); ++x)
    if (h.map[x] != x) return false;
  return true;
}

bool is_bijective(std::span<const int> map, int codomain_size) {
  if (static_cast<int>(map.size()) != codomain_size) return false;
  std::vector<char> hit(codomain_size, 0);
  for (int v : map) {
    if (v < 0 || v >= codomain_size || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

std::vector<int> monoid_generators(const FiniteMonoid& M) {
  std::vector<int> gens;
  std::vector<char> reached(M.size(), 0);
  reached[M.identity()] = 1;
  for (int x = 0; x < M.size(); ++x) {
    if (reached[x]) continue;
    gens.push_back(x);
    const WordTree t = spanning_words(M, gens);
    for (int y : t.order) reached[y] = 1;
  }
  return gens;
}

std::vector<Hom> enumerate_homs(const FiniteMonoid& G, const FiniteMonoid& H, std::uint64_t budget) {
  const std::vector<int> gens = monoid_generators(G);
  const std::uint64_t candidates = saturating_pow(static_cast<std::uint64_t>(H.size()), gens.size());
  if (candidates > budget) throw ResourceLimit("enumerate_homs", candidates, budget);
  const WordTree words = spanning_words(G, gens);

  std::vector<Hom> out;
  std::vector<int> image(gens.size(), 0);
  std::vector<int> map(G.size());
  while (true) {
    map[G.identity()] = H.identity();
    for (std::size_t i = 1; i < words.order.size(); ++i) {
      const int x = words.order[i];
      map[x] = H.mul(image[words.via[x]], map[words.from[x]]);
    }
    bool ok = true;
    for (int x = 0; x < G.size() && ok; ++x)
      for (int y = 0; y < G.size(); ++y)
        if (map[G.mul(x, y)] != H.mul(map[x], map[y])) {
          ok = false;
          break;
        }
    if (ok) out.push_back(Hom{G, H, map});
    if (!advance(image, [&](std::size_t) { return H.size(); })) break;
  }
  std::sort(out.begin(), out.end(), [](const Hom& a, const Hom& b) { return a.map < b.map; });
  return out;
}

std::vector<Hom> enumerate_automorphisms(const FiniteGroup& G, std::uint64_t budget) {
  std::vector<Hom> out;
  for (Hom& h : enumerate_homs(G, G, budget))
    if (is_bijective(h.map, G.size())) out.push_back(std::move(h));
  return out;
}

int element_order(const FiniteMonoid& G, int x) {
  int y = x;
  for (int k = 1; k <= G.size(); ++k) {
    if (y == G.identity()) return k;
    y = G.mul(y, x);
  }
  throw std::invalid_argument("element " + std::to_string(x) + " has no finite order");
}

std::optional<Hom> find_isomorphism(const FiniteGroup& G, const FiniteGroup& H) {
  constexpr int kCap = 12;
  if (G.size() > kCap || H.size() > kCap)
    throw ResourceLimit("find_isomorphism carrier size", static_cast<std::uint64_t>(std::max(G.size(), H.size())),
                        kCap);
  if (G.size() != H.size()) return std::nullopt;
  std::vector<int> order_g(G.size());
  std::vector<int> order_h(H.size());
  for (int x = 0; x < G.size(); ++x) order_g[x] = element_order(G, x);
  for (int x = 0; x < H.size(); ++x) order_h[x] = element_order(H, x);
  {
    auto a = order_g;
    auto b = order_h;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  const std::vector<int> gens = monoid_generators(G);
  const WordTree words = spanning_words(G, gens);
  std::vector<std::vector<int>> choices(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (int y = 0; y < H.size(); ++y)
      if (order_h[y] == order_g[gens[i]]) choices[i].push_back(y);

  std::vector<int> pick(gens.size(), 0);
  std::vector<int> map(G.size());
  for (const auto& c : choices)
    if (c.empty()) return std::nullopt;
  while (true) {
    map[G.identity()] = H.identity();
    for (std::size_t i = 1; i < words.order.size(); ++i) {
      const int x = words.order[i];
      map[x] = H.mul(choices[words.via[x]][pick[words.via[x]]], map[words.from[x]]);
    }
    if (is_bijective(map, H.size())) {
      Hom h{G, H, map};
      if (check_hom(h)) return h;
    }
    if (!advance(pick, [&](std::size_t d) { return static_cast<int>(choices[d].size()); })) break;
  }
  return std::nullopt;
}

// -- modules ----------------------------------------------------------------

bool check_module_morphism(const ModuleMorphism& phi) {
  require(phi.src.C() == phi.dst.C(), "module morphism between modules over different groups");
  if (!check_hom(Hom{phi.src.B(), phi.dst.B(), phi.map})) return false;
  for (int c = 0; c < phi.src.C().size(); ++c)
    for (int b = 0; b < phi.src.B().size(); ++b)
      if (phi.map[phi.src.act(c, b)] != phi.dst.act(c, phi.map[b])) return false;
  return true;
}

ModuleMorphism identity_morphism(const CModule& M) {
  std::vector<int> map(M.B().size());
  std::iota(map.begin(), map.end(), 0);
  return ModuleMorphism{M, M, std::move(map)};
}

ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  require(f.dst == g.src, "cannot compose module morphisms: codomain/domain mismatch");
  std::vector<int> map(f.map.size());
  for (std::size_t b = 0; b < f.map.size(); ++b) map[b] = g.map[f.map[b]];
  return ModuleMorphism{f.src, g.dst, std::move(map)};
}

std::vector<CModule> enumerate_modules(const FiniteGroup& C, const FiniteAbelianGroup& B,
                                       std::uint64_t budget) {
  const std::vector<Hom> autos = enumerate_automorphisms(B, budget);
  const int na = static_cast<int>(autos.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < na; ++i) index[autos[i].map] = i;
  std::vector<int> mul(static_cast<std::size_t>(na) * na);
  int identity = -1;
  for (int i = 0; i < na; ++i) {
    if (is_identity(autos[i])) identity = i;
    for (int j = 0; j < na; ++j) mul[static_cast<std::size_t>(i) * na + j] = index.at(compose(autos[i], autos[j]).map);
  }
  const FiniteMonoid aut(na, std::move(mul), identity);
  std::vector<CModule> out;
  for (const Hom& rho : enumerate_homs(C, aut, budget)) {
    std::vector<int> xi(static_cast<std::size_t>(C.size()) * B.size());
    for (int c = 0; c < C.size(); ++c)
      for (int b = 0; b < B.size(); ++b)
        xi[static_cast<std::size_t>(c) * B.size() + b] = autos[rho.map[c]].map[b];
    out.emplace_back(C, B, std::move(xi));
  }
  return out;
}

std::vector<ModuleMorphism> enumerate_module_morphisms(const CModule& src, const CModule& dst,
                                                       std::uint64_t budget) {
  require(src.C() == dst.C(), "modules over different groups");
  std::vector<ModuleMorphism> out;
  for (Hom& h : enumerate_homs(src.B(), dst.B(), budget)) {
    ModuleMorphism phi{src, dst, std::move(h.map)};
    if (check_module_morphism(phi)) out.push_back(std::move(phi));
  }
  return out;
}

CModule module_product(const CModule& M, const CModule& N) {
  require(M.C() == N.C(), "module product over different groups");
  FiniteAbelianGroup B = direct_product(M.B(), N.B());
  const int nb = N.B().size();
  std::vector<int> xi(static_cast<std::size_t>(M.C().size()) * B.size());
  for (int c = 0; c < M.C().size(); ++c)
    for (int b1 = 0; b1 < M.B().size(); ++b1)
      for (int b2 = 0; b2 < nb; ++b2)
        xi[static_cast<std::size_t>(c) * B.size() + b1 * nb + b2] = M.act(c, b1) * nb + N.act(c, b2);
  return CModule::trusted(M.C(), std::move(B), std::move(xi));
}

ModuleMorphism module_projection(const CModule& M, const CModule& N, int which) {
  Hom p = product_projection(M.B(), N.B(), which);
  return ModuleMorphism{module_product(M, N), which == 1 ? M : N, std::move(p.map)};
}

ModuleMorphism module_pairing(const ModuleMorphism& f, const ModuleMorphism& g) {
  require(f.src == g.src, "pairing of morphisms with different domains");
  const int nb = g.dst.B().size();
  std::vector<int> map(f.map.size());
  for (std::size_t b = 0; b < map.size(); ++b) map[b] = f.map[b] * nb + g.map[b];
  return ModuleMorphism{f.src, module_product(f.dst, g.dst), std::move(map)};
}

ModuleMorphism zero_morphism(const CModule& src, const CModule& dst) {
  return ModuleMorphism{src, dst, std::vector<int>(src.B().size(), dst.B().zero())};
}

ModuleMorphism module_addition(const CModule& M) {
  const int nb = M.B().size();
  std::vector<int> map(static_cast<std::size_t>(nb) * nb);
  for (int x = 0; x < nb; ++x)
    for (int y = 0; y < nb; ++y) map[static_cast<std::size_t>(x) * nb + y] = M.B().add(x, y);
  return ModuleMorphism{module_product(M, M), M, std::move(map)};
}

// -- quotients and invariants -----------------------------------------------

Partition quotient_by_generated_relation(int n, std::span<const std::pair<int, int>> pairs) {
  require(n >= 0, "carrier size must be non-negative");
  MinRootUnionFind uf(n);
  for (const auto& [a, b] : pairs) {
    require(a >= 0 && a < n && b >= 0 && b < n, "relation index out of range");
    uf.unite(a, b);
  }
  Partition p;
  p.class_of.resize(n);
  for (int x = 0; x < n; ++x) p.class_of[x] = uf.find(x);
  return p;
}

std::vector<int> abelian_invariants(const FiniteGroup& G) {
  require(G.is_commutative(), "abelian_invariants needs an abelian group");
  std::vector<int> order(G.size());
  for (int x = 0; x < G.size(); ++x) order[x] = element_order(G, x);

  // For each prime p: the number of cyclic p-factors of order >= p^k is
  // log_p(|G[p^k]| / |G[p^(k-1)]|), where G[q] = {x : x^q = 1}.
  std::vector<std::vector<int>> primary;  // per prime, descending prime powers
  for (int p : prime_factors(G.size())) {
    int p_part = 1;
    for (int n = G.size(); n % p == 0; n /= p) p_part *= p;
    std::vector<int> at_least;  // at_least[k-1] = #factors of order >= p^k
    int prev = 1;
    for (int q = p; prev < p_part; q *= p) {
      int count = 0;
      for (int x = 0; x < G.size(); ++x) count += (q % order[x] == 0);
      int ratio = count / prev;
      int r = 0;
      while (ratio > 1) {
        ratio /= p;
        ++r;
      }
      at_least.push_back(r);
      prev = count;
    }
    std::vector<int> powers;
    int q = 1;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
      q *= p;
      const int exactly = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
      for (int i = 0; i < exactly; ++i) powers.push_back(q);
    }
    std::sort(powers.rbegin(), powers.rend());
    primary.push_back(std::move(powers));
  }
  std::size_t depth = 0;
  for (const auto& ps : primary) depth = std::max(depth, ps.size());
  std::vector<int> factors(depth, 1);
  for (const auto& ps : primary)
    for (std::size_t i = 0; i < ps.size(); ++i) factors[i] *= ps[i];
  std::reverse(factors.begin(), factors.end());
  return factors;
}

std::vector<FiniteMonoid> enumerate_monoids(int order) {
  require(order >= 1, "monoid order must be positive");
  if (order > 4) throw ResourceLimit("enumerate_monoids order", static_cast<std::uint64_t>(order), 4);
  const int n = order;
  const int free = (n - 1) * (n - 1);
  std::vector<int> perm(n);
  std::set<std::vector<int>> seen;
  std::vector<FiniteMonoid> out;
  std::vector<int> cell(free, 0);
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  auto build = [&] {
    for (int x = 0; x < n; ++x) {
      mul[x] = x;
      mul[static_cast<std::size_t>(x) * n] = x;
    }
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) mul[static_cast<std::size_t>(i) * n + j] = cell[(i - 1) * (n - 1) + (j - 1)];
  };
  while (true) {
    build();
    bool assoc = true;
    for (int x = 1; x < n && assoc; ++x)
      for (int y = 1; y < n && assoc; ++y)
        for (int z = 1; z < n; ++z)
          if (mul[mul[x * n + y] * n + z] != mul[x * n + mul[y * n + z]]) {
            assoc = false;
            break;
          }
    if (assoc) {
      std::vector<int> best;
      std::iota(perm.begin(), perm.end(), 0);
      do {
        // relabel x -> perm[x]
        std::vector<int> t(mul.size());
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) t[perm[x] * n + perm[y]] = perm[mul[x * n + y]];
        if (best.empty() || t < best) best = t;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
      if (seen.insert(best).second) out.push_back(FiniteMonoid(n, best, 0));
    }
    if (!advance(cell, [&](std::size_t) { return n; })) break;
  }
  std::sort(out.begin(), out.end(), [](const FiniteMonoid& a, const FiniteMonoid& b) { return a.table() < b.table(); });
  return out;
}

}  // namespace opfib::finalg
