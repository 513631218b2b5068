#pragma once

// Cocycle-level oracle for the extension fibration: normalized 2-cocycles,
// coboundaries, H^2 and the derivation group Z^1, computed directly from the
// action table in additive notation.

#include <cstdint>
#include <vector>

#include "opfib/ext.hpp"
#include "opfib/finalg.hpp"

namespace opfib::cohom {

using ext::FactorSet;
using finalg::CModule;
using finalg::FiniteAbelianGroup;

/// Normalized tables satisfying
/// xi(c1, t(c2,c3)) - t(c1 c2, c3) + t(c1, c2 c3) - t(c1, c2) = 0, lexicographic.
std::vector<FactorSet> z2_enumerate(const CModule& module, std::uint64_t budget = kDefaultBudget);

/// dg(c1, c2) = xi(c1, g(c2)) - g(c1 c2) + g(c1).
FactorSet coboundary(const CModule& module, const std::vector<int>& g);

/// Coboundaries of all normalized 1-cochains, deduplicated, lexicographic.
std::vector<FactorSet> b2_enumerate(const CModule& module, std::uint64_t budget = kDefaultBudget);

struct H2 {
  FiniteAbelianGroup group;                 // on class indices, 0 = class of the zero cocycle
  std::vector<FactorSet> representatives;   // lexicographically minimal cocycle per class
  std::vector<int> class_of;                // per z2_enumerate entry
};

H2 h2_group(const CModule& module, std::uint64_t budget = kDefaultBudget);

struct Z1 {
  FiniteAbelianGroup group;                  // pointwise addition, indexed like cochains
  std::vector<std::vector<int>> cochains;    // derivations g(c1 c2) = xi(c1, g(c2)) + g(c1)
};

Z1 z1_group(const CModule& module, std::uint64_t budget = kDefaultBudget);

/// The extension on B x C with (b,c)(b',c') = (b + xi(c,b') + t(c,c'), cc'), its
/// multiplication table built here and checked against ext::Extension.
ext::Extension extension_from_cocycle(const FactorSet& t);

/// Reads t(c1, c2) = s(c1) s(c2) s(c1 c2)^-1 off the group table, with s(c) = (0, c).
FactorSet cocycle_from_extension(const ext::Extension& E);

}  // namespace opfib::cohom
