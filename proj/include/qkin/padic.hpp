#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace qkin::causal {

// Finite p-adic integer, base-p digits least significant first, stored
// without trailing zeros (zero has no digits).
class PAdicInt {
 public:
  // Throws std::domain_error unless p is prime and every digit is below p.
  PAdicInt(int p, std::vector<int> digits);

  static PAdicInt from_integer(int p, std::uint64_t value);

  int prime() const { return p_; }
  const std::vector<int>& digits() const { return digits_; }
  bool is_zero() const { return digits_.empty(); }

  // Index of the first nonzero digit; empty for zero.
  std::optional<int> valuation() const;
  // |x|_p = p^-valuation, 0 for zero.
  double norm() const;

  bool operator==(const PAdicInt&) const = default;

 private:
  int p_;
  std::vector<int> digits_;
};

// Vertical order first: the smaller p-adic norm (deeper in the branching tree)
// comes before. Equal norms fall back to comparing digits from the common
// valuation upward, least significant first. `less` means "before".
// Throws std::domain_error when the primes differ.
std::strong_ordering padic_compare(const PAdicInt& x, const PAdicInt& y);

}  // namespace qkin::causal
