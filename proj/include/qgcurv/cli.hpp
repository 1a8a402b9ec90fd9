#pragma once

namespace qgc {

// Full command-line entry point.  Exit codes: 0 ok, 1 verification failure,
// 2 configuration error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace qgc
