#pragma once

// CSV form of a SimulationTrace: one row per sample, one column per signal
// component, numbers in shortest round-trip decimal.

#include <iosfwd>
#include <string>
#include <vector>

#include "tactile/pipeline.hpp"

namespace tactile {

/// n, t, b1..b3, c_x..c_z, v_x..v_z, theta_hsd1..3, theta_sd1..3, l_x..l_z,
/// s_obj_x..s_obj_z, h_x..h_z, q_x..q_z, p1..p3
const std::vector<std::string>& trace_columns();

void write_trace_csv(std::ostream& os, const SimulationTrace& trace);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// A parsed CSV file: header plus numeric rows of equal width.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(std::size_t i) const;
};

/// Throws ConfigError naming the path, line and problem (ragged rows,
/// non-numeric cells, empty file).
CsvTable read_csv(const std::string& path);

}  // namespace tactile
