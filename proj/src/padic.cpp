#include "qkin/padic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkin::causal {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

PAdicInt::PAdicInt(int p, std::vector<int> digits) : p_(p), digits_(std::move(digits)) {
  if (!is_prime(p)) throw std::domain_error("p-adic base " + std::to_string(p) + " is not prime");
  for (int d : digits_)
    if (d < 0 || d >= p) throw std::domain_error("p-adic digit out of range");
  while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
}

PAdicInt PAdicInt::from_integer(int p, std::uint64_t value) {
  if (!is_prime(p)) throw std::domain_error("p-adic base " + std::to_string(p) + " is not prime");
  std::vector<int> digits;
  for (; value > 0; value /= static_cast<std::uint64_t>(p))
    digits.push_back(static_cast<int>(value % static_cast<std::uint64_t>(p)));
  return PAdicInt(p, std::move(digits));
}

std::optional<int> PAdicInt::valuation() const {
  for (std::size_t k = 0; k < digits_.size(); ++k)
    if (digits_[k] != 0) return static_cast<int>(k);
  return std::nullopt;
}

double PAdicInt::norm() const {
  const auto v = valuation();
  return v ? std::pow(static_cast<double>(p_), -*v) : 0.0;
}

std::strong_ordering padic_compare(const PAdicInt& x, const PAdicInt& y) {
  if (x.prime() != y.prime()) throw std::domain_error("p-adic comparison needs a common prime");
  const auto vx = x.valuation();
  const auto vy = y.valuation();
  if (!vx || !vy) return !vx && !vy ? std::strong_ordering::equal
                                    : (!vx ? std::strong_ordering::less : std::strong_ordering::greater);
  // Larger valuation = smaller norm = earlier.
  if (*vx != *vy) return *vy <=> *vx;
  const auto& dx = x.digits();
  const auto& dy = y.digits();
  const std::size_t len = std::max(dx.size(), dy.size());
  for (std::size_t k = static_cast<std::size_t>(*vx); k < len; ++k) {
    const int a = k < dx.size() ? dx[k] : 0;
    const int b = k < dy.size() ? dy[k] : 0;
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

}  // namespace qkin::causal
