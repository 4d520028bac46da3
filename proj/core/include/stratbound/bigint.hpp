#pragma once

// Unbounded integer for the strategy VM: an int64 fast path that promotes
// to boost::multiprecision::cpp_int on overflow and demotes when results
// fit again.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace stratbound {

class Int {
 public:
  using Big = boost::multiprecision::cpp_int;

  Int() = default;
  Int(std::int64_t v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Int(const Big& v);

  Int(const Int& other) : small_(other.small_), big_(other.big_ ? std::make_unique<Big>(*other.big_) : nullptr) {}
  Int(Int&&) noexcept = default;
  Int& operator=(const Int& other) {
    if (this != &other) {
      small_ = other.small_;
      big_ = other.big_ ? std::make_unique<Big>(*other.big_) : nullptr;
    }
    return *this;
  }
  Int& operator=(Int&&) noexcept = default;

  bool is_small() const { return !big_; }
  std::optional<std::int64_t> to_int64() const;
  Big to_big() const { return big_ ? *big_ : Big(small_); }
  std::string str() const;
  bool is_negative() const { return big_ ? big_->sign() < 0 : small_ < 0; }
  bool is_odd() const;

  friend Int operator+(const Int& a, const Int& b);
  friend Int operator-(const Int& a, const Int& b);
  friend Int operator*(const Int& a, const Int& b);
  /// Truncating division; throws std::domain_error on division by zero.
  friend Int operator/(const Int& a, const Int& b);
  /// Remainder with the sign of the dividend.
  friend Int operator%(const Int& a, const Int& b);
  /// Shifts by a nonnegative amount below 2^20.
  Int shifted_left(const Int& amount) const;
  Int shifted_right(const Int& amount) const;
  /// Bitwise and of two nonnegative values.
  Int bit_and(const Int& other) const;

  friend bool operator==(const Int& a, const Int& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Int& a, const Int& b) { return compare(a, b) <=> 0; }

 private:
  static int compare(const Int& a, const Int& b);
  static Int normalize(Big v);

  std::int64_t small_ = 0;
  std::unique_ptr<Big> big_;
};

}  // namespace stratbound
