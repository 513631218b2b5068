#include "opfib/cohom.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace opfib::cohom {

using finalg::FiniteGroup;
using finalg::FiniteMonoid;

namespace {

bool next_table(std::vector<int>& digits, int radix) {
  for (std::size_t d = digits.size(); d-- > 0;) {
    if (++digits[d] < radix) return true;
    digits[d] = 0;
  }
  return false;
}

std::uint64_t power(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

bool is_cocycle(const CModule& M, const std::vector<int>& t) {
  const auto& C = M.C();
  const auto& B = M.B();
  const int n = C.size();
  auto at = [&](int a, int b) { return t[static_cast<std::size_t>(a) * n + b]; };
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = 0; c2 < n; ++c2)
      for (int c3 = 0; c3 < n; ++c3) {
        int v = M.act(c1, at(c2, c3));
        v = B.sub(v, at(C.mul(c1, c2), c3));
        v = B.add(v, at(c1, C.mul(c2, c3)));
        v = B.sub(v, at(c1, c2));
        if (v != B.zero()) return false;
      }
  return true;
}

std::vector<int> add_tables(const FiniteAbelianGroup& B, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = B.add(a[i], b[i]);
  return out;
}

}  // namespace

std::vector<FactorSet> z2_enumerate(const CModule& module, std::uint64_t budget) {
  const int n = module.C().size();
  const int e = module.C().identity();
  std::vector<std::size_t> cells;
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = 0; c2 < n; ++c2)
      if (c1 != e && c2 != e) cells.push_back(static_cast<std::size_t>(c1) * n + c2);
  const std::uint64_t need = power(static_cast<std::uint64_t>(module.B().size()), cells.size());
  if (need > budget) throw ResourceLimit("z2_enumerate", need, budget);
  std::vector<FactorSet> out;
  std::vector<int> digits(cells.size(), 0);
  std::vector<int> t(static_cast<std::size_t>(n) * n, module.B().zero());
  do {
    for (std::size_t i = 0; i < cells.size(); ++i) t[cells[i]] = digits[i];
    if (is_cocycle(module, t)) out.push_back(FactorSet{module, t});
  } while (next_table(digits, module.B().size()));
  return out;
}

FactorSet coboundary(const CModule& module, const std::vector<int>& g) {
  const auto& C = module.C();
  const auto& B = module.B();
  const int n = C.size();
  if (g.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("cochain must have |C| entries");
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  for (int c1 = 0; c1 < n; ++c1)
    for (int c2 = 0; c2 < n; ++c2)
      t[static_cast<std::size_t>(c1) * n + c2] = B.add(B.sub(module.act(c1, g[c2]), g[C.mul(c1, c2)]), g[c1]);
  return FactorSet{module, std::move(t)};
}

std::vector<FactorSet> b2_enumerate(const CModule& module, std::uint64_t budget) {
  const int n = module.C().size();
  const int e = module.C().identity();
  const std::uint64_t need = power(static_cast<std::uint64_t>(module.B().size()), static_cast<std::size_t>(n - 1));
  if (need > budget) throw ResourceLimit("b2_enumerate", need, budget);
  std::set<std::vector<int>> seen;
  std::vector<int> digits(n - 1, 0);
  std::vector<int> g(n, module.B().zero());
  do {
    for (int c = 0, i = 0; c < n; ++c)
      if (c != e) g[c] = digits[i++];
    seen.insert(coboundary(module, g).table);
  } while (next_table(digits, module.B().size()));
  std::vector<FactorSet> out;
  for (const auto& t : seen) out.push_back(FactorSet{module, t});
  return out;
}

H2 h2_group(const CModule& module, std::uint64_t budget) {
  const std::vector<FactorSet> z2 = z2_enumerate(module, budget);
  std::set<std::vector<int>> b2;
  for (const auto& t : b2_enumerate(module, budget)) b2.insert(t.table);
  const auto& B = module.B();
  auto negate = [&](const std::vector<int>& t) {
    std::vector<int> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = B.neg(t[i]);
    return out;
  };

  std::vector<int> class_of(z2.size(), -1);
  std::vector<int> reps;
  for (std::size_t i = 0; i < z2.size(); ++i) {
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (b2.count(add_tables(B, z2[i].table, negate(z2[reps[r]].table)))) {
        class_of[i] = static_cast<int>(r);
        break;
      }
    if (class_of[i] < 0) {
      class_of[i] = static_cast<int>(reps.size());
      reps.push_back(static_cast<int>(i));
    }
  }
  std::map<std::vector<int>, int> position;
  for (std::size_t i = 0; i < z2.size(); ++i) position.emplace(z2[i].table, static_cast<int>(i));
  const int k = static_cast<int>(reps.size());
  std::vector<int> mul(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      mul[static_cast<std::size_t>(a) * k + b] =
          class_of[position.at(add_tables(B, z2[reps[a]].table, z2[reps[b]].table))];
  const int zero_class = class_of[position.at(std::vector<int>(z2.front().table.size(), B.zero()))];
  std::vector<FactorSet> representatives;
  for (int r : reps) representatives.push_back(z2[r]);
  return H2{FiniteAbelianGroup(FiniteGroup(FiniteMonoid(k, std::move(mul), zero_class))),
            std::move(representatives), std::move(class_of)};
}

Z1 z1_group(const CModule& module, std::uint64_t budget) {
  const auto& C = module.C();
  const auto& B = module.B();
  const int n = C.size();
  const std::uint64_t need = power(static_cast<std::uint64_t>(B.size()), static_cast<std::size_t>(n));
  if (need > budget) throw ResourceLimit("z1_group", need, budget);
  std::vector<std::vector<int>> derivations;
  std::vector<int> g(n, 0);
  do {
    bool ok = true;
    for (int c1 = 0; c1 < n && ok; ++c1)
      for (int c2 = 0; c2 < n && ok; ++c2) ok = g[C.mul(c1, c2)] == B.add(module.act(c1, g[c2]), g[c1]);
    if (ok) derivations.push_back(g);
  } while (next_table(g, B.size()));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < derivations.size(); ++i) index.emplace(derivations[i], static_cast<int>(i));
  const int k = static_cast<int>(derivations.size());
  std::vector<int> mul(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      mul[static_cast<std::size_t>(a) * k + b] = index.at(add_tables(B, derivations[a], derivations[b]));
  const int zero = index.at(std::vector<int>(n, B.zero()));
  return Z1{FiniteAbelianGroup(FiniteGroup(FiniteMonoid(k, std::move(mul), zero))), std::move(derivations)};
}

ext::Extension extension_from_cocycle(const FactorSet& t) {
  if (!ext::is_normalized(t)) throw std::invalid_argument("cocycle is not normalized");
  if (!is_cocycle(t.module, t.table)) throw std::invalid_argument("table is not a 2-cocycle");
  const auto& C = t.module.C();
  const auto& B = t.module.B();
  const int nc = C.size();
  const int n = B.size() * nc;
  std::vector<int> mul(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int b1 = x / nc, c1 = x % nc, b2 = y / nc, c2 = y % nc;
      const int b = B.add(B.add(b1, t.module.act(c1, b2)), t(c1, c2));
      mul[static_cast<std::size_t>(x) * n + y] = b * nc + C.mul(c1, c2);
    }
  const FiniteMonoid table(n, std::move(mul), B.zero() * nc + C.identity());
  ext::Extension E(t);
  if (!(static_cast<const FiniteMonoid&>(E.E()) == table))
    throw InternalInconsistency("extension table disagrees with the cocycle construction");
  return E;
}

FactorSet cocycle_from_extension(const ext::Extension& E) {
  const auto& C = E.module().C();
  const int nc = C.size();
  const auto& G = E.E();
  const int zero = E.module().B().zero();
  std::vector<int> t(static_cast<std::size_t>(nc) * nc);
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2) {
      const int x = G.mul(G.mul(E.encode(zero, c1), E.encode(zero, c2)), G.inv(E.encode(zero, C.mul(c1, c2))));
      if (E.quotient_part(x) != C.identity()) throw InternalInconsistency("section product left the kernel");
      t[static_cast<std::size_t>(c1) * nc + c2] = E.kernel_part(x);
    }
  FactorSet out{E.module(), std::move(t)};
  if (!ext::is_normalized(out)) throw std::invalid_argument("extension does not yield a normalized cocycle");
  return out;
}

}  // namespace opfib::cohom
