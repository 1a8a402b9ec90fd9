#include "qgcurv/io.hpp"

#include <cstdio>
#include <algorithm>
#include <fstream>
#include <sstream>

namespace qgc::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  out += "\r\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error(errc::config, "cannot open for writing: " + path);
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) throw error(errc::config, "write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw error(errc::config, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json params_to_json(const Params& pr) {
  return json{{"L", pr.L}, {"alpha2", pr.alpha2}, {"beta", pr.beta}};
}

Params params_from_json(const json& j) {
  Params pr;
  pr.L = j.at("L").get<double>();
  pr.alpha2 = j.at("alpha2").get<double>();
  pr.beta = j.at("beta").get<double>();
  validate(pr);
  return pr;
}

json field_to_json(const Field2D& f) {
  json j;
  j["nmax"] = f.nmax();
  j["ny"] = f.grid().ny();
  j["L"] = f.grid().L();
  j["real"] = f.is_real();
  json modes = json::object();
  for (int n = -f.nmax(); n <= f.nmax(); ++n) {
    if (f.mode_is_zero(n)) continue;
    const Eigen::ArrayXcd& m = f.mode(n);
    std::vector<double> v;
    v.reserve(size_t(2 * m.size()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      v.push_back(m(i).real());
      v.push_back(m(i).imag());
    }
    modes[std::to_string(n)] = std::move(v);
  }
  j["modes"] = std::move(modes);
  return j;
}

Field2D field_from_json(const json& j) {
  const int nmax = j.at("nmax").get<int>();
  const long ny = j.at("ny").get<long>();
  const double L = j.at("L").get<double>();
  const bool real = j.at("real").get<bool>();
  Grid1D g(ny, L);
  Field2D f(nmax, g, real);
  for (const auto& [key, val] : j.at("modes").items()) {
    const int n = std::stoi(key);
    if (n < -nmax || n > nmax) throw error(errc::config, "field json: mode out of range");
    const auto v = val.get<std::vector<double>>();
    if (long(v.size()) != 2 * ny) throw error(errc::config, "field json: mode length mismatch");
    Eigen::ArrayXcd m(ny);
    for (long i = 0; i < ny; ++i) m(i) = cd(v[size_t(2 * i)], v[size_t(2 * i + 1)]);
    f.mode(n) = m;
  }
  if (real) f.enforce_reality();
  return f;
}

json state_to_json(const QGState& s) {
  json j;
  j["time"] = s.time;
  j["params"] = params_to_json(s.params);
  j["omega"] = field_to_json(s.omega);
  return j;
}

QGState state_from_json(const json& j) {
  QGState s{field_from_json(j.at("omega")), j.at("time").get<double>(), params_from_json(j.at("params"))};
  return s;
}

std::string trajectory_csv(const std::vector<DiagnosticsRecord>& series,
                           const std::vector<double>& separations) {
  if (!separations.empty() && separations.size() != series.size())
    throw error(errc::config, "trajectory_csv: separation length mismatch");
  std::string out = csv_line({"t", "energy", "energy_metric", "enstrophy", "enstrophy_metric",
                              "omega_min", "omega_max", "separation"});
  for (size_t i = 0; i < series.size(); ++i) {
    const DiagnosticsRecord& r = series[i];
    out += csv_line({fmt(r.t), fmt(r.energy), fmt(r.energy_metric), fmt(r.enstrophy),
                     fmt(r.enstrophy_metric), fmt(r.omega_min), fmt(r.omega_max),
                     separations.empty() ? std::string() : fmt(separations[i])});
  }
  return out;
}

void read_samples_csv(const std::string& path, Eigen::ArrayXd& y, Eigen::ArrayXd& psi) {
  std::istringstream in(read_file(path));
  std::vector<double> ys, ps;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) continue; // header or junk row
    ys.push_back(a);
    ps.push_back(b);
  }
  if (ys.size() < 4) throw error(errc::config, "samples file needs at least 4 numeric rows: " + path);
  y = Eigen::Map<Eigen::ArrayXd>(ys.data(), long(ys.size()));
  psi = Eigen::Map<Eigen::ArrayXd>(ps.data(), long(ps.size()));
}

} // namespace qgc::io
