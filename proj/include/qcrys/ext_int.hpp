#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace qcrys {

using Int = std::int64_t;

/// An integer or the distinguished symbol -infinity.
///
/// -inf is absorbing under addition and is the bottom of the total order, so
/// `max` with -inf returns the other operand.
class ExtInt {
 public:
  constexpr ExtInt() = default;  // -inf
  constexpr ExtInt(Int v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtInt neg_inf() { return ExtInt(); }

  constexpr bool is_finite() const { return value_.has_value(); }
  constexpr bool is_neg_inf() const { return !value_.has_value(); }

  /// Precondition: is_finite().
  constexpr Int value() const { return *value_; }

  friend constexpr ExtInt operator+(ExtInt a, ExtInt b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return {};
    return ExtInt(*a.value_ + *b.value_);
  }
  friend constexpr ExtInt operator-(ExtInt a, Int k) {
    if (a.is_neg_inf()) return {};
    return ExtInt(*a.value_ - k);
  }

  friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) = default;
  friend constexpr std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) {
      return a.is_finite() <=> b.is_finite();
    }
    return *a.value_ <=> *b.value_;
  }

  std::string to_string() const { return is_finite() ? std::to_string(*value_) : "-inf"; }

  friend std::ostream& operator<<(std::ostream& os, const ExtInt& x) {
    return os << x.to_string();
  }

 private:
  std::optional<Int> value_;
};

inline constexpr ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }

}  // namespace qcrys
