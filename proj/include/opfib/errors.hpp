#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace opfib {

/// Raised when an enumeration would exceed its configured candidate budget.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t needed, std::uint64_t budget)
      : std::runtime_error(what + ": needs " + std::to_string(needed) +
                           " candidates, budget is " + std::to_string(budget)),
        needed_(needed),
        budget_(budget) {}

  std::uint64_t needed() const noexcept { return needed_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t needed_;
  std::uint64_t budget_;
};

/// A universal property that must hold by construction failed to: the oracle is broken.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

}  // namespace opfib
