#pragma once

#include <cmath>
#include <string>

#include "nlcurv/errors.hpp"

namespace nlcurv {

enum class Normalization { raw, limit_normalized };
enum class CodimMode { hypersurface, projection };

inline std::string to_string(Normalization n) {
  return n == Normalization::raw ? "raw" : "limit_normalized";
}
inline std::string to_string(CodimMode m) {
  return m == CodimMode::hypersurface ? "hypersurface" : "projection";
}

/// Exponents and conventions shared by every nonlocal kernel.
///
/// `s` is the fractional order, `p` the outer Lebesgue exponent and `q` the
/// second exponent of the tangent-point energy. The kernel prefactor is
/// c_s = 1 in raw mode and c_s = 1 - s in limit-normalized mode.
struct EnergyParameters {
  double s = 0.5;
  double p = 4.0;
  double q = 6.0;
  Normalization normalization = Normalization::raw;
  CodimMode codim = CodimMode::hypersurface;

  void validate() const {
    if (!(s > 0.0 && s < 1.0)) throw InvalidParams("s must lie in (0,1)");
    if (!(p > 0.0)) throw InvalidParams("p must be positive");
    if (!std::isfinite(q)) throw InvalidParams("q must be finite");
  }

  double c_s() const { return normalization == Normalization::raw ? 1.0 : 1.0 - s; }

  /// Energy prefactor |c_s|^p.
  double c_sp() const { return std::pow(std::abs(c_s()), p); }

  /// Energies scale as lambda^(d - s p); p > d/s is the subcritical regime.
  bool subcritical(int dim) const { return p > dim / s; }
};

}  // namespace nlcurv
