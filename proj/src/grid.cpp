#include "qgcurv/grid.hpp"

namespace qgc {

Grid1D::Grid1D(int ny, double L) : ny_(ny), L_(L) {
  if (ny < 5 || ny % 2 == 0)
    throw error(errc::config, "Grid1D: ny must be odd and >= 5");
  if (!(L > 0.0) || !std::isfinite(L))
    throw error(errc::config, "Grid1D: L must be finite and > 0");
  h_ = L / double(ny - 1);
  y_ = ArrayXd::LinSpaced(ny, 0.0, L);
  // composite Simpson: h/3 * (1,4,2,4,...,2,4,1)
  wsimp_ = ArrayXd::Zero(ny);
  for (int j = 1; j < ny - 1; ++j) wsimp_(j) = (j % 2 == 1) ? 4.0 : 2.0;
  wsimp_(0) = wsimp_(ny - 1) = 1.0;
  wsimp_ *= h_ / 3.0;
  wtrap_ = ArrayXd::Constant(ny, h_);
  wtrap_(0) = wtrap_(ny - 1) = 0.5 * h_;
}

bool Grid1D::same(const Grid1D& o) const {
  return ny_ == o.ny_ && L_ == o.L_;
}

} // namespace qgc
