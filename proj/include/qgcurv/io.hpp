#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qgcurv/simulator.hpp"

namespace qgc::io {

using json = nlohmann::ordered_json;

// shortest exact decimal round-trip
std::string fmt(double x);

// RFC-4180: quote cells containing comma, quote, CR or LF; CRLF record ends
std::string csv_escape(const std::string& cell);
std::string csv_line(const std::vector<std::string>& cells);

// binary write so emitted bytes are exactly the composed string
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

json params_to_json(const Params& pr);
Params params_from_json(const json& j);

// nonzero modes only, keyed by mode number, values interleaved re/im
json field_to_json(const Field2D& f);
Field2D field_from_json(const json& j);

json state_to_json(const QGState& s);
QGState state_from_json(const json& j);

// diagnostics time series; separations may be empty (column left blank) or
// must match series length
std::string trajectory_csv(const std::vector<DiagnosticsRecord>& series,
                           const std::vector<double>& separations = {});

// two-column y,psi samples for the samples: flow spec
void read_samples_csv(const std::string& path, Eigen::ArrayXd& y, Eigen::ArrayXd& psi);

} // namespace qgc::io
