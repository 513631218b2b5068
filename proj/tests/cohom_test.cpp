#include <doctest.h>

#include <algorithm>

#include "opfib/cohom.hpp"

using namespace opfib;
using namespace opfib::cohom;
using finalg::make_cyclic;

namespace {

// Cyclic C of even order acting on B through c mod 2 by negation.
CModule inversion_module(const finalg::FiniteGroup& C, const FiniteAbelianGroup& B) {
  std::vector<int> xi(static_cast<std::size_t>(C.size()) * B.size());
  for (int c = 0; c < C.size(); ++c)
    for (int b = 0; b < B.size(); ++b) xi[c * B.size() + b] = c % 2 == 0 ? b : B.neg(b);
  return CModule(C, B, xi);
}

}  // namespace

TEST_CASE("cocycles and coboundaries of Z4 with coefficients in Z2") {
  const auto M = CModule::trivial(make_cyclic(4), make_cyclic(2));
  const auto z2 = z2_enumerate(M);
  const auto b2 = b2_enumerate(M);
  CHECK(b2.size() == 4);  // 1-cochains with g(e)=0 modulo homs Z4 -> Z2: 8 / 2
  CHECK(z2.size() == 8);
  const auto h2 = h2_group(M);
  CHECK(h2.group.size() == 2);
  CHECK(z2.size() == b2.size() * h2.group.size());
}

TEST_CASE("H2 and Z1 on small modules") {
  const auto Z2 = make_cyclic(2);
  const auto Z3 = make_cyclic(3);
  CHECK(h2_group(CModule::trivial(Z2, Z2)).group.size() == 2);
  CHECK(h2_group(CModule::trivial(Z2, Z3)).group.size() == 1);
  CHECK(h2_group(inversion_module(Z2, Z3)).group.size() == 1);
  CHECK(h2_group(CModule::trivial(Z3, Z3)).group.size() == 3);
  // inversion on Z4 by Z2: H^2 = B^C / N B = {0,2} / {0} has order 2
  CHECK(h2_group(inversion_module(Z2, make_cyclic(4))).group.size() == 2);
  CHECK(z1_group(CModule::trivial(Z2, Z2)).cochains.size() == 2);
  CHECK(z1_group(inversion_module(Z2, Z3)).cochains.size() == 3);
  CHECK(z1_group(CModule::trivial(Z3, Z2)).cochains.size() == 1);
  for (const auto& g : z1_group(inversion_module(Z2, Z3)).cochains) CHECK(g[0] == 0);
}

TEST_CASE("coboundaries are cocycles") {
  const auto M = inversion_module(make_cyclic(4), make_cyclic(3));
  const auto z2 = z2_enumerate(M);
  for (const auto& b : b2_enumerate(M)) CHECK(std::find(z2.begin(), z2.end(), b) != z2.end());
  CHECK_THROWS_AS(coboundary(M, {0, 1}), std::invalid_argument);
}

TEST_CASE("extension_from_cocycle and back") {
  for (const auto& M : {CModule::trivial(make_cyclic(2), make_cyclic(2)), inversion_module(make_cyclic(2), make_cyclic(3)),
                        CModule::trivial(make_cyclic(3), make_cyclic(3))}) {
    for (const auto& t : z2_enumerate(M)) {
      const auto E = extension_from_cocycle(t);
      CHECK(cocycle_from_extension(E) == t);
    }
  }
  const auto M = CModule::trivial(make_cyclic(2), make_cyclic(2));
  CHECK_THROWS_AS(extension_from_cocycle(FactorSet{M, {1, 0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("budget") {
  const auto M = CModule::trivial(make_cyclic(4), finalg::direct_product(make_cyclic(2), make_cyclic(2)));
  CHECK_THROWS_AS(z2_enumerate(M, 100), ResourceLimit);
}
