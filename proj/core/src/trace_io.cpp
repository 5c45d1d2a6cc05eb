#include "tactile/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tactile {

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = {
      "n",          "t",          "b1",         "b2",         "b3",
      "c_x",        "c_y",        "c_z",        "v_x",        "v_y",
      "v_z",        "theta_hsd1", "theta_hsd2", "theta_hsd3", "theta_sd1",
      "theta_sd2",  "theta_sd3",  "l_x",        "l_y",        "l_z",
      "s_obj_x",    "s_obj_y",    "s_obj_z",    "h_x",        "h_y",
      "h_z",        "q_x",        "q_y",        "q_z",        "p1",
      "p2",         "p3"};
  return cols;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << '\n';
  for (const auto& r : trace.records) {
    const double values[] = {
        r.b.theta1,        r.b.theta2,        r.b.theta3,
        r.c.x,             r.c.y,             r.c.z,
        r.v.x,             r.v.y,             r.v.z,
        r.theta_hsd.theta1, r.theta_hsd.theta2, r.theta_hsd.theta3,
        r.theta_sd.theta1, r.theta_sd.theta2, r.theta_sd.theta3,
        r.l.x,             r.l.y,             r.l.z,
        r.s_obj.x,         r.s_obj.y,         r.s_obj.z,
        r.h.fx,            r.h.fy,            r.h.fz,
        r.q.fx,            r.q.fy,            r.q.fz,
        r.p.tau1,          r.p.tau2,          r.p.tau3};
    os << r.n << ',' << format_double(r.t);
    for (double v : values) os << ',' << format_double(v);
    os << '\n';
  }
}

std::vector<double> CsvTable::column(std::size_t i) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(i));
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");

  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    const std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != t.header.size()) {
      throw ConfigError(where, "expected " + std::to_string(t.header.size()) +
                                   " cells, found " +
                                   std::to_string(cells.size()) + " (row " +
                                   std::to_string(t.rows.size() + 1) + ")");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) {
        throw ConfigError(where, "non-numeric cell '" + c + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ConfigError(path, "empty file");
  return t;
}

}  // namespace tactile
