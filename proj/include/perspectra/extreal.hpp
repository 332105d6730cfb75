#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

#include "perspectra/errors.hpp"

namespace perspectra {

/**
 * Extended real number in [-inf, +inf].
 *
 * The infinities are explicit variants, not IEEE sentinels: every branch on
 * finiteness is an exact tag test, and the forbidden combinations
 * ((+inf) + (-inf), scaling by lambda <= 0) raise instead of producing NaN.
 * -inf exists only for guard logic; no function in scope attains it.
 */
class ExtReal {
 public:
  constexpr ExtReal() noexcept : value_(0.0), tag_(Tag::finite) {}

  // Maps an overflowed double onto the corresponding infinite variant.
  // NaN is rejected: it has no place in the extended order.
  ExtReal(double v) : value_(v), tag_(Tag::finite) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw BadParam("ExtReal: NaN is not an extended real");
    if (std::isinf(v)) {
      tag_ = v > 0 ? Tag::pos_inf : Tag::neg_inf;
      value_ = 0.0;
    }
  }

  static constexpr ExtReal inf() noexcept { return ExtReal(Tag::pos_inf); }
  static constexpr ExtReal minus_inf() noexcept { return ExtReal(Tag::neg_inf); }

  constexpr bool is_finite() const noexcept { return tag_ == Tag::finite; }
  constexpr bool is_pos_inf() const noexcept { return tag_ == Tag::pos_inf; }
  constexpr bool is_neg_inf() const noexcept { return tag_ == Tag::neg_inf; }

  /// Finite value; throws if the number is infinite.
  double finite() const {
    if (!is_finite()) throw Error("ExtReal: finite() called on an infinite value");
    return value_;
  }

  /// Lossy view as a double (+-HUGE_VAL for the infinite variants).
  constexpr double as_double() const noexcept {
    if (tag_ == Tag::pos_inf) return HUGE_VAL;
    if (tag_ == Tag::neg_inf) return -HUGE_VAL;
    return value_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.tag_ != b.tag_) return false;
    return a.tag_ != Tag::finite || a.value_ == b.value_;
  }

  // Total order: -inf < any finite < +inf.
  friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.tag_ == b.tag_) return a.tag_ == Tag::finite && a.value_ < b.value_;
    if (a.tag_ == Tag::neg_inf) return true;
    if (a.tag_ == Tag::pos_inf) return false;
    return b.tag_ == Tag::pos_inf;
  }
  friend constexpr bool operator>(const ExtReal& a, const ExtReal& b) noexcept { return b < a; }
  friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) noexcept { return !(b < a); }
  friend constexpr bool operator>=(const ExtReal& a, const ExtReal& b) noexcept { return !(a < b); }

 private:
  enum class Tag : std::uint8_t { finite, pos_inf, neg_inf };
  constexpr explicit ExtReal(Tag t) noexcept : value_(0.0), tag_(t) {}

  double value_;
  Tag tag_;
};

/// Guarded extended addition; (+inf) + (-inf) is rejected.
inline ExtReal ext_add(const ExtReal& a, const ExtReal& b) {
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
    throw IndeterminateSum("ext_add: (+inf) + (-inf) is indeterminate");
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::minus_inf();
  return ExtReal(a.finite() + b.finite());
}

/// Guarded positive scaling; lambda <= 0 is rejected (0 * inf has no
/// universal convention, callers apply the explicit one they need).
inline ExtReal ext_scale(double lambda, const ExtReal& a) {
  if (!(lambda > 0.0)) throw BadScale("ext_scale: scale factor must be > 0");
  if (!a.is_finite()) return a;
  return ExtReal(lambda * a.finite());
}

/// Renders finite values with 17 significant digits, infinities as inf/-inf.
inline std::string to_string(const ExtReal& a) {
  if (a.is_pos_inf()) return "inf";
  if (a.is_neg_inf()) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a.finite());
  return buf;
}

}  // namespace perspectra
