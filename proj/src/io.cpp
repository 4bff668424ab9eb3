#include "axisym/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace axisym {

namespace {

using ordered_json = nlohmann::ordered_json;

// 17 significant digits: the smallest count that makes text -> double
// -> text the identity for every finite double.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return in;
}

[[noreturn]] void bad_line(const std::filesystem::path& path, int lineno,
                           const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                           ": " + what);
}

void write_raster_rows(const std::filesystem::path& path, const AxisymGrid& g,
                       const std::function<double(int, int)>& value) {
  std::ofstream out = open_out(path);
  std::string body = "s,y3,value\n";
  body.reserve(body.size() + static_cast<std::size_t>(g.nr) * g.nz * 48);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      body += fmt(g.r(i));
      body += ',';
      body += fmt(g.z(j));
      body += ',';
      body += fmt(value(i, j));
      body += '\n';
    }
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const AxisymMap& m) {
  if (!m.grid) throw std::invalid_argument("write_snapshot: map has no grid");
  const AxisymGrid& g = *m.grid;
  std::ofstream out = open_out(path);
  std::string body;
  body.reserve(static_cast<std::size_t>(g.nr) * g.nz * 52 + 64);
  body += std::to_string(g.nr) + " " + std::to_string(g.nz) + " " +
          fmt(g.r_max) + " " + fmt(g.z_min) + " " + fmt(g.z_max) + "\n";
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      body += std::to_string(i);
      body += ' ';
      body += std::to_string(j);
      body += ' ';
      body += fmt(m.v1(i, j));
      body += ' ';
      body += fmt(m.v2(i, j));
      body += '\n';
    }
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

AxisymMap read_snapshot(const std::filesystem::path& path, GridPtr grid) {
  std::ifstream in = open_in(path);
  int nr = 0, nz = 0;
  double r_max = 0, z_min = 0, z_max = 0;
  std::string line;
  if (!std::getline(in, line)) bad_line(path, 1, "missing header");
  {
    std::istringstream hs(line);
    if (!(hs >> nr >> nz >> r_max >> z_min >> z_max))
      bad_line(path, 1, "malformed header");
  }
  if (nr <= 0 || nz <= 0) bad_line(path, 1, "nonpositive grid counts");

  if (grid) {
    const AxisymGrid& g = *grid;
    const bool match = g.nr == nr && g.nz == nz && g.r_max == r_max &&
                       g.z_min == z_min && g.z_max == z_max;
    if (!match)
      throw std::invalid_argument(
          "read_snapshot: supplied grid does not match the header of " +
          path.string());
  } else if (r_max == 1.25 && z_min == -1.25 && z_max == 1.25) {
    grid = make_collar_grid(nr, nz);
  } else {
    grid = make_grid(nr, nz, r_max, z_min, z_max,
                     [](double, double) { return Region::Interior; });
  }

  AxisymMap m;
  m.grid = grid;
  m.v1.resize(nr, nz);
  m.v2.resize(nr, nz);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> seen(nr, nz);
  seen.setConstant(false);
  int lineno = 1;
  long rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int i = 0, j = 0;
    double a = 0, b = 0;
    if (!(ls >> i >> j >> a >> b)) bad_line(path, lineno, "malformed row");
    if (i < 0 || i >= nr || j < 0 || j >= nz)
      bad_line(path, lineno, "cell index out of range");
    if (seen(i, j)) bad_line(path, lineno, "duplicate cell");
    seen(i, j) = true;
    m.v1(i, j) = a;
    m.v2(i, j) = b;
    ++rows;
  }
  if (rows != static_cast<long>(nr) * nz)
    throw std::runtime_error(path.string() + ": expected " +
                             std::to_string(static_cast<long>(nr) * nz) +
                             " rows, got " + std::to_string(rows));
  return m;
}

void write_raster_csv(const std::filesystem::path& path, const AxisymGrid& g,
                      const Eigen::ArrayXXd& values) {
  if (values.rows() != g.nr || values.cols() != g.nz)
    throw std::invalid_argument("write_raster_csv: shape mismatch");
  write_raster_rows(path, g, [&](int i, int j) { return values(i, j); });
}

void write_raster_csv(const std::filesystem::path& path, const AxisymGrid& g,
                      const IntField& values) {
  if (values.rows() != g.nr || values.cols() != g.nz)
    throw std::invalid_argument("write_raster_csv: shape mismatch");
  write_raster_rows(
      path, g, [&](int i, int j) { return static_cast<double>(values(i, j)); });
}

void write_raster_csv(const std::filesystem::path& path, const AxisymGrid& g,
                      const BoolMask& values) {
  if (values.rows() != g.nr || values.cols() != g.nz)
    throw std::invalid_argument("write_raster_csv: shape mismatch");
  write_raster_rows(
      path, g, [&](int i, int j) { return values(i, j) ? 1.0 : 0.0; });
}

std::vector<RasterRow> read_raster_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "s,y3,value")
    bad_line(path, 1, "expected header s,y3,value");
  std::vector<RasterRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    RasterRow r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r.s, &r.y3, &r.value) != 3)
      bad_line(path, lineno, "malformed row");
    rows.push_back(r);
  }
  return rows;
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<EnergyBreakdown>& history) {
  std::ofstream out = open_out(path);
  std::string body = "iter,dirichlet,h_term,singular_tv,E,F\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    const EnergyBreakdown& bd = history[k];
    body += std::to_string(k);
    for (double x : {bd.dirichlet, bd.h_term, bd.singular_tv, bd.E, bd.F}) {
      body += ',';
      body += fmt(x);
    }
    body += '\n';
  }
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<EnergyBreakdown> read_history_csv(
    const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "iter,dirichlet,h_term,singular_tv,E,F")
    bad_line(path, 1, "expected energy-history header");
  std::vector<EnergyBreakdown> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    long k = 0;
    EnergyBreakdown bd;
    if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%lf,%lf", &k, &bd.dirichlet,
                    &bd.h_term, &bd.singular_tv, &bd.E, &bd.F) != 6)
      bad_line(path, lineno, "malformed row");
    if (k != static_cast<long>(out.size()))
      bad_line(path, lineno, "iteration column out of sequence");
    out.push_back(bd);
  }
  return out;
}

std::string tv_estimate_json(const TVEstimate& tv) {
  ordered_json j;
  j["total"] = tv.total;
  j["ac_part"] = tv.ac_part;
  j["singular_part"] = tv.singular_part;
  return j.dump(2) + "\n";
}

std::string surface_report_json(
    const SurfaceReport& rep,
    const std::vector<std::pair<std::string, double>>& defects) {
  ordered_json j;
  j["pairings"] = ordered_json::array();
  for (const SurfacePairing& p : rep.pairings)
    j["pairings"].push_back({{"label", p.label}, {"value", p.value}});
  j["sup"] = rep.sup;
  j["defects"] = ordered_json::array();
  for (const auto& [label, value] : defects)
    j["defects"].push_back({{"label", label}, {"value", value}});
  return j.dump(2) + "\n";
}

std::string solve_report_json(const SolveReport& rep) {
  const char* status = "max_iters";
  if (rep.status == SolveStatus::Converged) status = "converged";
  if (rep.status == SolveStatus::Stalled) status = "stalled";
  ordered_json j;
  j["status"] = status;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["grad_norm"] = rep.grad_norm;
  j["grad_norm0"] = rep.grad_norm0;
  j["message"] = rep.message;
  j["min_det"] = rep.min_det;
  j["multi_fraction"] = rep.multi_fraction;
  j["surf_sup"] = rep.surf_sup;
  ordered_json fin;
  const EnergyBreakdown bd =
      rep.history.empty() ? EnergyBreakdown{} : rep.history.back();
  fin["dirichlet"] = bd.dirichlet;
  fin["h_term"] = bd.h_term;
  fin["singular_tv"] = bd.singular_tv;
  fin["E"] = bd.E;
  fin["F"] = bd.F;
  j["final"] = fin;
  j["history_len"] = rep.history.size();
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out = open_out(path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace axisym
