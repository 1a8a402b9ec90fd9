#pragma once

#include <cmath>

#include "qgcurv/error.hpp"

namespace qgc {

// Global physical configuration of the channel model.
// L: channel width (> 0), alpha2: Froude number (>= 0), beta: Rossby parameter.
struct Params {
  double L = 1.0;
  double alpha2 = 0.0;
  double beta = 0.0;
};

inline void validate(const Params& p) {
  if (!std::isfinite(p.L) || !(p.L > 0.0))
    throw error(errc::config, "Params: L must be finite and > 0");
  if (!std::isfinite(p.alpha2) || p.alpha2 < 0.0)
    throw error(errc::config, "Params: alpha2 must be finite and >= 0");
  if (!std::isfinite(p.beta))
    throw error(errc::config, "Params: beta must be finite");
}

// lambda^2 = alpha^2 + n^2 for the x-mode n.
inline double lambda_of(const Params& p, int n) {
  return std::sqrt(p.alpha2 + double(n) * double(n));
}

} // namespace qgc
