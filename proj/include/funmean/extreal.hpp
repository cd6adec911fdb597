#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace funmean {

/// Real number extended by +inf and -inf.
///
/// Arithmetic follows the convex-analysis conventions rather than IEEE:
/// +inf absorbs everything in a sum (so (+inf) - (+inf) = +inf), and
/// 0 * (+inf) = +inf. NaN is not a value of this type; constructing from NaN
/// throws InvalidArgument.
class ExtReal {
 public:
  constexpr ExtReal() noexcept = default;
  ExtReal(double v);  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal inf() noexcept { return ExtReal(kInf, Raw{}); }
  static constexpr ExtReal neg_inf() noexcept { return ExtReal(-kInf, Raw{}); }

  constexpr double value() const noexcept { return v_; }
  constexpr bool is_finite() const noexcept { return v_ != kInf && v_ != -kInf; }
  constexpr bool is_pos_inf() const noexcept { return v_ == kInf; }
  constexpr bool is_neg_inf() const noexcept { return v_ == -kInf; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (b.v_ < a.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const;

 private:
  struct Raw {};
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr ExtReal(double v, Raw) noexcept : v_(v) {}

  double v_ = 0.0;
};

/// a + b. Any +inf operand gives +inf, including (-inf) + (+inf).
ExtReal add(ExtReal a, ExtReal b) noexcept;

/// a - b under the absorbing convention: (+inf) - (+inf) = +inf and
/// c - (-inf) = +inf for every c.
ExtReal paper_sub(ExtReal a, ExtReal b) noexcept;

ExtReal negate(ExtReal a) noexcept;

/// t * a for t >= 0. 0 * (+inf) = +inf and 0 * (-inf) = -inf.
ExtReal scale(double t, ExtReal a);

/// Total order of the extended line. Does not go through paper_sub.
constexpr bool leq(ExtReal a, ExtReal b) noexcept { return !(b < a); }

}  // namespace funmean
