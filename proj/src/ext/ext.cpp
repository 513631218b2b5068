#include "opfib/ext.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "opfib/finalg_json.hpp"

namespace opfib::ext {

using finalg::FiniteMonoid;

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Digit-wise odometer over values [0, radix); false after wrapping.
bool advance(std::vector<int>& digits, int radix) {
  for (std::size_t d = digits.size(); d-- > 0;) {
    if (++digits[d] < radix) return true;
    digits[d] = 0;
  }
  return false;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

bool cocycle_identity_holds(const FactorSet& t) {
  const auto& C = t.module.C();
  const auto& B = t.module.B();
  const int n = C.size();
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = 0; c2 < n; ++c2)
      for (int c3 = 0; c3 < n; ++c3) {
        const int lhs = B.add(t.module.act(c1, t(c2, c3)), t(c1, C.mul(c2, c3)));
        const int rhs = B.add(t(c1, c2), t(C.mul(c1, c2), c3));
        if (lhs != rhs) return false;
      }
  return true;
}

FiniteGroup build_group(const FactorSet& t) {
  const auto& C = t.module.C();
  const auto& B = t.module.B();
  const int nc = C.size();
  const int n = B.size() * nc;
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int b1 = 0; b1 < B.size(); ++b1)
    for (int c1 = 0; c1 < nc; ++c1)
      for (int b2 = 0; b2 < B.size(); ++b2)
        for (int c2 = 0; c2 < nc; ++c2) {
          const int b = B.add(B.add(b1, t.module.act(c1, b2)), t(c1, c2));
          mul[static_cast<std::size_t>(b1 * nc + c1) * n + (b2 * nc + c2)] = b * nc + C.mul(c1, c2);
        }
  return FiniteGroup::trusted(n, std::move(mul), B.zero() * nc + C.identity());
}

bool is_identity_morphism(const ModuleMorphism& phi) {
  if (!(phi.src == phi.dst)) return false;
  for (std::size_t b = 0; b < phi.map.size(); ++b)
    if (phi.map[b] != static_cast<int>(b)) return false;
  return true;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

bool is_normalized(const FactorSet& t) {
  const auto& C = t.module.C();
  const int e = C.identity();
  if (t.table.size() != static_cast<std::size_t>(C.size()) * C.size()) return false;
  for (int c = 0; c < C.size(); ++c)
    if (t(e, c) != t.module.B().zero() || t(c, e) != t.module.B().zero()) return false;
  return true;
}

// -- Extension ----------------------------------------------------------------

namespace {

FactorSet validated(FactorSet t) {
  const int nc = t.module.C().size();
  require(t.table.size() == static_cast<std::size_t>(nc) * nc, "factor set must be |C| x |C|");
  for (int v : t.table) require(v >= 0 && v < t.module.B().size(), "factor set entry out of range");
  require(is_normalized(t), "factor set is not normalized");
  require(cocycle_identity_holds(t), "factor set does not give an associative law");
  return t;
}

}  // namespace

Extension::Extension(FactorSet t) : t_(validated(std::move(t))), E_(std::make_shared<GroupCache>()) {}

const FiniteGroup& Extension::E() const {
  std::call_once(E_->once, [this] { E_->group.emplace(build_group(t_)); });
  return *E_->group;
}

Extension Extension::split(const CModule& module) {
  const int nc = module.C().size();
  return Extension(FactorSet{module, std::vector<int>(static_cast<std::size_t>(nc) * nc, module.B().zero())});
}

Hom Extension::k() const {
  std::vector<int> map(module().B().size());
  for (int b = 0; b < module().B().size(); ++b) map[b] = encode(b, module().C().identity());
  return Hom{module().B(), E(), std::move(map)};
}

Hom Extension::f() const {
  std::vector<int> map(order());
  for (int x = 0; x < order(); ++x) map[x] = quotient_part(x);
  return Hom{E(), module().C(), std::move(map)};
}

// -- morphisms ------------------------------------------------------------------

bool check_ext_morphism(const Extension& src, const Extension& dst, const ExtMorphism& m) {
  if (!(m.phi.src == src.module()) || !(m.phi.dst == dst.module())) return false;
  if (!finalg::check_module_morphism(m.phi)) return false;
  if (m.psi.size() != static_cast<std::size_t>(src.E().size())) return false;
  if (!finalg::check_hom(Hom{src.E(), dst.E(), m.psi})) return false;
  const int e = src.module().C().identity();
  for (int b = 0; b < src.module().B().size(); ++b)
    if (m.psi[src.encode(b, e)] != dst.encode(m.phi.map[b], e)) return false;
  for (int x = 0; x < src.E().size(); ++x)
    if (dst.quotient_part(m.psi[x]) != src.quotient_part(x)) return false;
  return true;
}

ExtMorphism identity_ext_morphism(const Extension& E) {
  std::vector<int> psi(E.order());
  std::iota(psi.begin(), psi.end(), 0);
  return ExtMorphism{finalg::identity_morphism(E.module()), std::move(psi)};
}

ExtMorphism compose(const ExtMorphism& second, const ExtMorphism& first) {
  std::vector<int> psi(first.psi.size());
  for (std::size_t x = 0; x < psi.size(); ++x) psi[x] = second.psi[first.psi[x]];
  return ExtMorphism{finalg::compose(second.phi, first.phi), std::move(psi)};
}

// -- raw sequences ---------------------------------------------------------------

namespace {

struct KernelInverse {
  std::vector<int> of;  // E element -> B element, or -1 outside the image of k
};

KernelInverse check_exact(const ExactSequence& s) {
  require(finalg::check_hom(s.k), "k is not a homomorphism");
  require(finalg::check_hom(s.f), "f is not a homomorphism");
  require(s.k.src == static_cast<const FiniteMonoid&>(s.B) && s.k.dst == static_cast<const FiniteMonoid&>(s.E),
          "k must go from B to E");
  require(s.f.src == static_cast<const FiniteMonoid&>(s.E) && s.f.dst == static_cast<const FiniteMonoid&>(s.C),
          "f must go from E to C");
  KernelInverse ki{std::vector<int>(s.E.size(), -1)};
  for (int b = 0; b < s.B.size(); ++b) {
    require(ki.of[s.k.map[b]] < 0, "k is not injective");
    ki.of[s.k.map[b]] = b;
  }
  std::vector<char> hit(s.C.size(), 0);
  for (int x = 0; x < s.E.size(); ++x) {
    hit[s.f.map[x]] = 1;
    require((s.f.map[x] == s.C.identity()) == (ki.of[x] >= 0), "image of k is not the kernel of f");
  }
  for (char h : hit) require(h != 0, "f is not surjective");
  return ki;
}

}  // namespace

CModule induced_action(const ExactSequence& s) {
  const KernelInverse ki = check_exact(s);
  std::vector<int> xi(static_cast<std::size_t>(s.C.size()) * s.B.size(), -1);
  for (int x = 0; x < s.E.size(); ++x) {
    const int c = s.f.map[x];
    for (int b = 0; b < s.B.size(); ++b) {
      const int conj = s.E.mul(s.E.mul(x, s.k.map[b]), s.E.inv(x));
      const int image = ki.of[conj];
      require(image >= 0, "kernel is not normal");
      int& slot = xi[static_cast<std::size_t>(c) * s.B.size() + b];
      require(slot < 0 || slot == image, "conjugation action depends on the chosen preimage");
      slot = image;
    }
  }
  return CModule(s.C, s.B, std::move(xi));
}

Encoded from_sequence(const ExactSequence& s) {
  CModule module = induced_action(s);
  const KernelInverse ki = check_exact(s);
  const FiniteGroup& C = s.C;
  const int nc = C.size();
  std::vector<int> section(nc, -1);
  section[C.identity()] = s.E.identity();
  for (int x = 0; x < s.E.size(); ++x)
    if (section[s.f.map[x]] < 0) section[s.f.map[x]] = x;
  std::vector<int> table(static_cast<std::size_t>(nc) * nc);
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2) {
      const int x = s.E.mul(s.E.mul(section[c1], section[c2]), s.E.inv(section[C.mul(c1, c2)]));
      table[static_cast<std::size_t>(c1) * nc + c2] = ki.of[x];
    }
  Extension ext(FactorSet{module, std::move(table)});
  std::vector<int> encoding(s.E.size());
  for (int x = 0; x < s.E.size(); ++x) {
    const int c = s.f.map[x];
    const int b = ki.of[s.E.mul(x, s.E.inv(section[c]))];
    encoding[x] = ext.encode(b, c);
  }
  // The re-encoding must carry the raw law onto the canonical one.
  for (int x = 0; x < s.E.size(); ++x)
    for (int y = 0; y < s.E.size(); ++y)
      if (encoding[s.E.mul(x, y)] != ext.E().mul(encoding[x], encoding[y]))
        throw InternalInconsistency("canonical re-encoding is not a homomorphism");
  return Encoded{std::move(ext), std::move(encoding)};
}

// -- pushforward ------------------------------------------------------------------

Pushforward pushforward(const ModuleMorphism& phi, const Extension& E) {
  require(phi.src == E.module(), "pushforward: morphism does not start at the extension's module");
  require(finalg::check_module_morphism(phi), "pushforward: phi is not an equivariant homomorphism");
  if (is_identity_morphism(phi)) return Pushforward{identity_ext_morphism(E), E};

  const CModule& target = phi.dst;
  const FiniteAbelianGroup& B2 = target.B();
  const FiniteGroup& G = E.E();
  const int ne = G.size();
  const int n = B2.size() * ne;
  auto pair_index = [ne](int b2, int x) { return b2 * ne + x; };

  std::vector<std::pair<int, int>> relation;
  relation.reserve(static_cast<std::size_t>(n) * E.module().B().size());
  const Hom k = E.k();
  for (int b2 = 0; b2 < B2.size(); ++b2)
    for (int b = 0; b < E.module().B().size(); ++b)
      for (int x = 0; x < ne; ++x)
        relation.emplace_back(pair_index(B2.add(b2, phi.map[b]), x), pair_index(b2, G.mul(k.map[b], x)));
  const finalg::Partition classes = finalg::quotient_by_generated_relation(n, relation);
  const std::vector<int> label = classes.dense_labels();
  const int q = classes.class_count();

  // (b1, x1)(b2, x2) = (b1 + xi'(f(x1), b2), x1 x2), checked to respect the classes.
  auto product = [&](int p1, int p2) {
    const int b1 = p1 / ne, x1 = p1 % ne, b2 = p2 / ne, x2 = p2 % ne;
    return pair_index(B2.add(b1, target.act(E.quotient_part(x1), b2)), G.mul(x1, x2));
  };
  std::vector<int> rep(q, -1);
  for (int p = 0; p < n; ++p)
    if (rep[label[p]] < 0) rep[label[p]] = p;
  std::vector<int> mul(static_cast<std::size_t>(q) * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) mul[static_cast<std::size_t>(i) * q + j] = label[product(rep[i], rep[j])];
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2)
      if (label[product(p1, p2)] != mul[static_cast<std::size_t>(label[p1]) * q + label[p2]])
        throw InternalInconsistency("pushforward law is not well defined on classes");

  const int e = G.identity();
  FiniteGroup Q = FiniteGroup::trusted(q, std::move(mul), label[pair_index(B2.zero(), e)]);
  std::vector<int> k2(B2.size());
  for (int b2 = 0; b2 < B2.size(); ++b2) k2[b2] = label[pair_index(b2, e)];
  std::vector<int> f2(q);
  for (int i = 0; i < q; ++i) f2[i] = E.quotient_part(rep[i] % ne);
  ExactSequence seq{B2, Q, E.module().C(), Hom{B2, Q, std::move(k2)}, Hom{Q, E.module().C(), std::move(f2)}};
  Encoded enc = from_sequence(seq);
  if (!(enc.extension.module() == target))
    throw InternalInconsistency("pushforward does not induce the target action");
  std::vector<int> psi(ne);
  for (int x = 0; x < ne; ++x) psi[x] = enc.encoding[label[pair_index(B2.zero(), x)]];
  return Pushforward{ExtMorphism{phi, std::move(psi)}, std::move(enc.extension)};
}

// -- products ------------------------------------------------------------------------

Extension product_over_C(const Extension& E1, const Extension& E2) {
  require(E1.module().C() == E2.module().C(), "product_over_C: extensions of different groups");
  CModule module = finalg::module_product(E1.module(), E2.module());
  const int nc = module.C().size();
  const int n2 = E2.module().B().size();
  std::vector<int> table(static_cast<std::size_t>(nc) * nc);
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2)
      table[static_cast<std::size_t>(c1) * nc + c2] = E1.factor_set()(c1, c2) * n2 + E2.factor_set()(c1, c2);
  return Extension(FactorSet{std::move(module), std::move(table)});
}

namespace {

// The projection psi of E1 x_C E2 onto one factor; phi is supplied by the caller.
std::vector<int> projection_psi(const Extension& E1, const Extension& E2, int which) {
  const int nc = E1.module().C().size();
  const int n2 = E2.module().B().size();
  const int size = E1.module().B().size() * n2 * nc;
  std::vector<int> psi(size);
  for (int x = 0; x < size; ++x) {
    const int bb = x / nc;
    const int c = x % nc;
    psi[x] = (which == 1 ? bb / n2 : bb % n2) * nc + c;
  }
  return psi;
}

}  // namespace

ExtMorphism product_projection(const Extension& E1, const Extension& E2, int which) {
  require(which == 1 || which == 2, "projection index must be 1 or 2");
  return ExtMorphism{finalg::module_projection(E1.module(), E2.module(), which), projection_psi(E1, E2, which)};
}

ExtMorphism product_pair(const ExtMorphism& u1, const ExtMorphism& u2, const Extension& product) {
  ModuleMorphism phi = finalg::module_pairing(u1.phi, u2.phi);
  require(phi.dst == product.module(), "product_pair: target is not the product of the codomains");
  require(u1.psi.size() == u2.psi.size(), "product_pair: arrows have different sources");
  const int nc = product.module().C().size();
  const int n2 = u2.phi.dst.B().size();
  std::vector<int> psi(u1.psi.size());
  for (std::size_t x = 0; x < psi.size(); ++x) {
    const int c = u1.psi[x] % nc;
    require(c == u2.psi[x] % nc, "product_pair: arrows disagree over C");
    psi[x] = ((u1.psi[x] / nc) * n2 + u2.psi[x] / nc) * nc + c;
  }
  return ExtMorphism{std::move(phi), std::move(psi)};
}

ExactSequence pullback_sequence(const Extension& E1, const Extension& E2) {
  require(E1.module().C() == E2.module().C(), "pullback_sequence: extensions of different groups");
  std::vector<std::pair<int, int>> elems;
  for (int x = 0; x < E1.E().size(); ++x)
    for (int y = 0; y < E2.E().size(); ++y)
      if (E1.quotient_part(x) == E2.quotient_part(y)) elems.emplace_back(x, y);
  std::map<std::pair<int, int>, int> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  const int n = static_cast<int>(elems.size());
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mul[static_cast<std::size_t>(i) * n + j] =
          index.at({E1.E().mul(elems[i].first, elems[j].first), E2.E().mul(elems[i].second, elems[j].second)});
  FiniteGroup P(FiniteMonoid(n, std::move(mul), index.at({E1.E().identity(), E2.E().identity()})));
  FiniteAbelianGroup B = finalg::direct_product(E1.module().B(), E2.module().B());
  const Hom k1 = E1.k();
  const Hom k2 = E2.k();
  std::vector<int> k(B.size());
  const int n2 = E2.module().B().size();
  for (int b = 0; b < B.size(); ++b) k[b] = index.at({k1.map[b / n2], k2.map[b % n2]});
  std::vector<int> f(n);
  for (int i = 0; i < n; ++i) f[i] = E1.quotient_part(elems[i].first);
  const FiniteGroup& C = E1.module().C();
  return ExactSequence{B, P, C, Hom{B, P, std::move(k)}, Hom{P, C, std::move(f)}};
}

Extension baer_tensor(const Extension& E1, const Extension& E2) {
  require(E1.module() == E2.module(), "baer_tensor: extensions over different modules");
  return pushforward(finalg::module_addition(E1.module()), product_over_C(E1, E2)).target;
}

// -- vertical structure ------------------------------------------------------------------

std::vector<ExtMorphism> homs_over(const Extension& src, const Extension& dst, const ModuleMorphism& phi) {
  require(phi.src == src.module() && phi.dst == dst.module(), "homs_over: phi does not match the endpoints");
  const FiniteGroup& C = src.module().C();
  const FiniteAbelianGroup& B2 = dst.module().B();
  const int nc = C.size();
  const int e = C.identity();
  // The non-identity elements of C, in index order, carry the free cochain values.
  std::vector<int> free_c;
  for (int c = 0; c < nc; ++c)
    if (c != e) free_c.push_back(c);
  std::vector<int> digits(free_c.size(), 0);
  std::vector<int> g(nc, B2.zero());
  std::vector<ExtMorphism> out;
  const FiniteGroup& G = src.E();
  const FiniteGroup& H = dst.E();
  std::vector<int> psi(G.size());
  while (true) {
    for (std::size_t i = 0; i < free_c.size(); ++i) g[free_c[i]] = digits[i];
    for (int x = 0; x < G.size(); ++x)
      psi[x] = dst.encode(B2.add(phi.map[src.kernel_part(x)], g[src.quotient_part(x)]), src.quotient_part(x));
    bool ok = true;
    for (int x = 0; x < G.size() && ok; ++x)
      for (int y = 0; y < G.size(); ++y)
        if (psi[G.mul(x, y)] != H.mul(psi[x], psi[y])) {
          ok = false;
          break;
        }
    if (ok) out.push_back(ExtMorphism{phi, psi});
    if (!advance(digits, B2.size())) break;
  }
  return out;
}

std::optional<ExtMorphism> vertical_isomorphic(const Extension& E1, const Extension& E2) {
  require(E1.module() == E2.module(), "vertical_isomorphic: extensions over different modules");
  const ModuleMorphism id = finalg::identity_morphism(E1.module());
  const FiniteGroup& C = E1.module().C();
  const FiniteAbelianGroup& B = E1.module().B();
  const int e = C.identity();
  std::vector<int> free_c;
  for (int c = 0; c < C.size(); ++c)
    if (c != e) free_c.push_back(c);
  std::vector<int> digits(free_c.size(), 0);
  std::vector<int> g(C.size(), B.zero());
  std::vector<int> psi(E1.E().size());
  while (true) {
    for (std::size_t i = 0; i < free_c.size(); ++i) g[free_c[i]] = digits[i];
    for (int x = 0; x < E1.E().size(); ++x)
      psi[x] = E2.encode(B.add(E1.kernel_part(x), g[E1.quotient_part(x)]), E1.quotient_part(x));
    bool ok = true;
    for (int x = 0; x < E1.E().size() && ok; ++x)
      for (int y = 0; y < E1.E().size(); ++y)
        if (psi[E1.E().mul(x, y)] != E2.E().mul(psi[x], psi[y])) {
          ok = false;
          break;
        }
    if (ok) return ExtMorphism{id, psi};
    if (!advance(digits, B.size())) break;
  }
  return std::nullopt;
}

std::vector<Extension> fibre_enumerate(const CModule& module, std::uint64_t budget) {
  const FiniteGroup& C = module.C();
  const int nc = C.size();
  const int e = C.identity();
  std::vector<std::pair<int, int>> cells;
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2)
      if (c1 != e && c2 != e) cells.emplace_back(c1, c2);
  const std::uint64_t candidates = saturating_pow(static_cast<std::uint64_t>(module.B().size()), cells.size());
  if (candidates > budget) throw ResourceLimit("fibre_enumerate", candidates, budget);
  std::vector<int> digits(cells.size(), 0);
  FactorSet t{module, std::vector<int>(static_cast<std::size_t>(nc) * nc, module.B().zero())};
  std::vector<Extension> out;
  while (true) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      t.table[static_cast<std::size_t>(cells[i].first) * nc + cells[i].second] = digits[i];
    if (cocycle_identity_holds(t)) out.emplace_back(t);
    if (!advance(digits, module.B().size())) break;
  }
  return out;
}

Pi0 pi0(const CModule& module, std::uint64_t budget) {
  std::vector<Extension> fibre = fibre_enumerate(module, budget);
  std::map<std::vector<int>, int> position;
  for (std::size_t i = 0; i < fibre.size(); ++i) position.emplace(fibre[i].factor_set().table, static_cast<int>(i));

  std::vector<int> class_of(fibre.size(), -1);
  std::vector<int> reps;
  for (std::size_t i = 0; i < fibre.size(); ++i) {
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if (vertical_isomorphic(fibre[reps[r]], fibre[i])) {
        class_of[i] = static_cast<int>(r);
        break;
      }
    }
    if (class_of[i] < 0) {
      class_of[i] = static_cast<int>(reps.size());
      reps.push_back(static_cast<int>(i));
    }
  }
  const int k = static_cast<int>(reps.size());
  std::vector<int> mul(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const Extension sum = baer_tensor(fibre[reps[a]], fibre[reps[b]]);
      auto it = position.find(sum.factor_set().table);
      if (it == position.end()) throw InternalInconsistency("Baer tensor left the enumerated fibre");
      mul[static_cast<std::size_t>(a) * k + b] = class_of[it->second];
    }
  const int split_class = class_of[position.at(Extension::split(module).factor_set().table)];
  FiniteAbelianGroup group(FiniteGroup(FiniteMonoid(k, std::move(mul), split_class)));
  std::vector<Extension> representatives;
  for (int r : reps) representatives.push_back(fibre[r]);
  return Pi0{std::move(group), std::move(representatives), std::move(class_of)};
}

Pi1 pi1(const CModule& module) {
  const Extension split = Extension::split(module);
  const std::vector<ExtMorphism> autos = homs_over(split, split, finalg::identity_morphism(module));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < autos.size(); ++i) index.emplace(autos[i].psi, static_cast<int>(i));
  const int n = static_cast<int>(autos.size());
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  int identity = -1;
  for (int i = 0; i < n; ++i) {
    if (autos[i] == identity_ext_morphism(split)) identity = i;
    for (int j = 0; j < n; ++j) mul[static_cast<std::size_t>(i) * n + j] = index.at(compose(autos[i], autos[j]).psi);
  }
  const int nc = module.C().size();
  std::vector<std::vector<int>> cochains;
  for (const auto& a : autos) {
    std::vector<int> g(nc);
    for (int c = 0; c < nc; ++c) g[c] = split.kernel_part(a.psi[split.encode(module.B().zero(), c)]);
    cochains.push_back(std::move(g));
  }
  return Pi1{FiniteAbelianGroup(FiniteGroup(FiniteMonoid(n, std::move(mul), identity))), std::move(cochains)};
}

// -- serialization ---------------------------------------------------------------------------

nlohmann::json to_json(const Extension& E) {
  const int nc = E.module().C().size();
  return {{"module", finalg::to_json(E.module())},
          {"cocycle", finalg::table_to_json(E.factor_set().table, nc, nc)}};
}

Extension extension_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("module") || !j.contains("cocycle"))
    throw std::invalid_argument("extension needs \"module\" and \"cocycle\"");
  CModule module = finalg::module_from_json(j.at("module"));
  const int nc = module.C().size();
  std::vector<int> table = finalg::table_from_json(j.at("cocycle"), nc, nc, "cocycle");
  return Extension(FactorSet{std::move(module), std::move(table)});
}

std::string describe(const Extension& E) {
  std::ostringstream s;
  s << "ext(|B|=" << E.module().B().size() << ", |C|=" << E.module().C().size() << ", t=["
    << join(E.factor_set().table) << "])";
  return s.str();
}

// -- the oracle ----------------------------------------------------------------------------------

ExtFibration::ExtFibration(FiniteGroup C, Options options) : C_(std::move(C)), options_(options) {
  std::vector<FiniteAbelianGroup> groups;
  for (int n = 1; n <= options_.target_module_bound; ++n) {
    groups.push_back(finalg::make_cyclic(n));
    if (n == 4) groups.push_back(finalg::direct_product(finalg::make_cyclic(2), finalg::make_cyclic(2)));
  }
  for (const auto& B : groups)
    for (auto& M : finalg::enumerate_modules(C_, B, options_.budget)) targets_.push_back(std::move(M));
}

ModuleMorphism ExtFibration::base_compose(const ModuleMorphism& g, const ModuleMorphism& f) const {
  return finalg::compose(g, f);
}

ModuleMorphism ExtFibration::base_identity(const CModule& A) const { return finalg::identity_morphism(A); }

fib::BaseProduct<CModule, ModuleMorphism> ExtFibration::base_product(const CModule& A, const CModule& B) const {
  return {finalg::module_product(A, B), finalg::module_projection(A, B, 1), finalg::module_projection(A, B, 2)};
}

ModuleMorphism ExtFibration::base_pair(const ModuleMorphism& f1, const ModuleMorphism& f2,
                                       const fib::BaseProduct<CModule, ModuleMorphism>& P) const {
  ModuleMorphism m = finalg::module_pairing(f1, f2);
  require(m.dst == P.object, "base_pair: product does not match the codomains");
  return m;
}

CModule ExtFibration::base_terminal() const { return CModule::zero(C_); }

ModuleMorphism ExtFibration::base_terminal_map(const CModule& A) const {
  return finalg::zero_morphism(A, base_terminal());
}

ExtMorphism ExtFibration::compose(const ExtMorphism& second, const ExtMorphism& first) const {
  return ext::compose(second, first);
}

std::vector<int> ExtFibration::object_key(const Extension& X) const { return X.factor_set().table; }

fib::Lift<Extension, ExtMorphism> ExtFibration::lift(const ModuleMorphism& f, const Extension& X) const {
  Pushforward p = pushforward(f, X);
  return {std::move(p.lift), std::move(p.target)};
}

std::vector<ExtMorphism> ExtFibration::homs_over(const Extension& X, const Extension& Y,
                                                 const ModuleMorphism& f) const {
  const std::uint64_t candidates =
      saturating_pow(static_cast<std::uint64_t>(Y.module().B().size()), static_cast<std::size_t>(C_.size() - 1));
  if (candidates > options_.budget) throw ResourceLimit("extension homs_over", candidates, options_.budget);
  return ext::homs_over(X, Y, f);
}

fib::Product<Extension, ExtMorphism> ExtFibration::product(const Extension& X, const Extension& Y) const {
  Extension P = product_over_C(X, Y);
  const int n2 = Y.module().B().size();
  std::vector<int> map1(P.module().B().size()), map2(P.module().B().size());
  for (int b = 0; b < P.module().B().size(); ++b) {
    map1[b] = b / n2;
    map2[b] = b % n2;
  }
  ExtMorphism p1{ModuleMorphism{P.module(), X.module(), std::move(map1)}, projection_psi(X, Y, 1)};
  ExtMorphism p2{ModuleMorphism{P.module(), Y.module(), std::move(map2)}, projection_psi(X, Y, 2)};
  return {std::move(P), std::move(p1), std::move(p2)};
}

ExtMorphism ExtFibration::pair(const ExtMorphism& u1, const ExtMorphism& u2,
                               const fib::Product<Extension, ExtMorphism>& P) const {
  return product_pair(u1, u2, P.object);
}

Extension ExtFibration::terminal() const { return Extension::split(base_terminal()); }

ExtMorphism ExtFibration::terminal_map(const Extension& X) const {
  std::vector<int> psi(X.order());
  for (int x = 0; x < X.order(); ++x) psi[x] = X.quotient_part(x);
  return ExtMorphism{base_terminal_map(X.module()), std::move(psi)};
}

std::vector<Extension> ExtFibration::fibre(const CModule& A) const { return fibre_enumerate(A, options_.budget); }

std::vector<fib::FactorTarget<ModuleMorphism, Extension>> ExtFibration::factorizations(const CModule& A) const {
  std::vector<fib::FactorTarget<ModuleMorphism, Extension>> out;
  const bool A_is_target = std::find(targets_.begin(), targets_.end(), A) != targets_.end();
  if (options_.identity_targets && !A_is_target) {
    const ModuleMorphism id = finalg::identity_morphism(A);
    for (auto& Z : fibre(A)) out.push_back({id, std::move(Z)});
  }
  for (const auto& T : targets_) {
    const auto homs = finalg::enumerate_module_morphisms(A, T, options_.budget);
    if (homs.empty()) continue;
    const auto zs = fibre(T);
    for (const auto& h : homs)
      for (const auto& Z : zs) out.push_back({h, Z});
  }
  return out;
}

std::string ExtFibration::describe_arrow(const ExtMorphism& u) const {
  return "(phi=[" + join(u.phi.map) + "], psi=[" + join(u.psi) + "])";
}

}  // namespace opfib::ext
