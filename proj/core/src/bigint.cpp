#include "stratbound/bigint.hpp"

#include <limits>
#include <stdexcept>

namespace stratbound {

namespace {

const Int::Big& int64_min() {
  static const Int::Big v(std::numeric_limits<std::int64_t>::min());
  return v;
}

const Int::Big& int64_max() {
  static const Int::Big v(std::numeric_limits<std::int64_t>::max());
  return v;
}

std::int64_t small_amount(const Int& amount) {
  auto v = amount.to_int64();
  if (!v || *v < 0 || *v >= (1 << 20)) throw std::domain_error("shift amount out of range");
  return *v;
}

}  // namespace

Int::Int(const Big& v) {
  Int n = normalize(v);
  small_ = n.small_;
  big_ = std::move(n.big_);
}

Int Int::normalize(Big v) {
  Int out;
  if (v >= int64_min() && v <= int64_max()) {
    out.small_ = static_cast<std::int64_t>(v);
  } else {
    out.big_ = std::make_unique<Big>(std::move(v));
  }
  return out;
}

std::optional<std::int64_t> Int::to_int64() const {
  if (big_) return std::nullopt;
  return small_;
}

std::string Int::str() const { return big_ ? big_->str() : std::to_string(small_); }

bool Int::is_odd() const {
  if (big_) return boost::multiprecision::bit_test(boost::multiprecision::abs(*big_), 0);
  return (small_ & 1) != 0;
}

int Int::compare(const Int& a, const Int& b) {
  if (!a.big_ && !b.big_) return a.small_ < b.small_ ? -1 : (a.small_ > b.small_ ? 1 : 0);
  return a.to_big().compare(b.to_big());
}

Int operator+(const Int& a, const Int& b) {
  std::int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Int(r);
  return Int::normalize(a.to_big() + b.to_big());
}

Int operator-(const Int& a, const Int& b) {
  std::int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Int(r);
  return Int::normalize(a.to_big() - b.to_big());
}

Int operator*(const Int& a, const Int& b) {
  std::int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Int(r);
  return Int::normalize(a.to_big() * b.to_big());
}

Int operator/(const Int& a, const Int& b) {
  if (b == Int(0)) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == std::numeric_limits<std::int64_t>::min() && b.small_ == -1)) {
    return Int(a.small_ / b.small_);
  }
  return Int::normalize(a.to_big() / b.to_big());
}

Int operator%(const Int& a, const Int& b) {
  if (b == Int(0)) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_) {
    if (b.small_ == -1) return Int(0);
    return Int(a.small_ % b.small_);
  }
  return Int::normalize(a.to_big() % b.to_big());
}

Int Int::shifted_left(const Int& amount) const {
  const auto s = small_amount(amount);
  if (!big_ && small_ >= 0 && s < 62 && small_ < (std::int64_t{1} << (62 - s))) return Int(small_ << s);
  return normalize(to_big() << static_cast<unsigned>(s));
}

Int Int::shifted_right(const Int& amount) const {
  const auto s = small_amount(amount);
  if (!big_) {
    if (s >= 63) return Int(small_ < 0 ? -1 : 0);
    return Int(small_ >> s);
  }
  return normalize(*big_ >> static_cast<unsigned>(s));
}

Int Int::bit_and(const Int& other) const {
  if (is_negative() || other.is_negative()) throw std::domain_error("bitwise and of a negative value");
  if (!big_ && !other.big_) return Int(small_ & other.small_);
  return normalize(to_big() & other.to_big());
}

}  // namespace stratbound
