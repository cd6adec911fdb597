#include "funmean/extreal.hpp"

#include <sstream>

#include "funmean/error.hpp"

namespace funmean {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v)) throw InvalidArgument("ExtReal: NaN is not an extended real");
}

std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v_;
  return os.str();
}

ExtReal add(ExtReal a, ExtReal b) noexcept {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  return ExtReal(a.value() + b.value());
}

ExtReal negate(ExtReal a) noexcept {
  if (a.is_pos_inf()) return ExtReal::neg_inf();
  if (a.is_neg_inf()) return ExtReal::inf();
  return ExtReal(-a.value());
}

ExtReal paper_sub(ExtReal a, ExtReal b) noexcept { return add(a, negate(b)); }

ExtReal scale(double t, ExtReal a) {
  if (!(t >= 0.0) || std::isinf(t)) throw InvalidArgument("scale: factor must be finite and >= 0");
  if (!a.is_finite()) return a;
  return ExtReal(t * a.value());
}

}  // namespace funmean
