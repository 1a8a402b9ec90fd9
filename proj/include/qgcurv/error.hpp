#pragma once

#include <stdexcept>
#include <string>

namespace qgc {

enum class errc {
  config,            // bad parameters, malformed specs, schema violations
  grid_mismatch,     // operands live on different grids / truncations
  singular_operator, // zero-mode solve requested where the operator is singular
  numerical,         // instability, non-convergence, overflow
  degenerate_plane,  // Gram determinant below tolerance in normalization
};

class error : public std::runtime_error {
public:
  error(errc c, const std::string& what) : std::runtime_error(what), c_(c) {}
  errc code() const { return c_; }

private:
  errc c_;
};

} // namespace qgc
