#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cldiv {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

std::string to_string(i128 v);
std::string to_string(u128 v);

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Input larger than the configured magnitude cap.
class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// A run would exceed its work budget.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A bounded search ran out of candidates.
class SearchExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant violated; indicates a bug, never bad input.
class InvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace cldiv
