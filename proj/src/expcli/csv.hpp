#pragma once

#include <string>
#include <vector>

#include "helix/dynamics.hpp"
#include "helix/magnon.hpp"

// CSV emission. All floating-point values are written with 17
// significant digits, LF line endings, header row always present, so a
// given run is byte-reproducible.
namespace helix::expcli {

std::string format_double(double v);

/// Columns: t, fidelity, log_norm, then h_x_l, h_y_l, h_z_l for l=1..N.
void write_timeseries_csv(const TimeSeries& ts, const std::string& path);

/// Columns: E, dos, kind. Curves are concatenated in order.
void write_dos_csv(const std::vector<const DosCurve*>& curves,
                   const std::string& path);

/// Columns: row, col, re, im (all stored entries, row-major).
void write_subspace_csv(const SubspaceMatrix& m, const std::string& path);

/// Generic numeric table.
void write_table_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows,
                     const std::string& path);

} // namespace helix::expcli
