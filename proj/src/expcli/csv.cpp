#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace helix::expcli {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + path);
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_timeseries_csv(const TimeSeries& ts, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "t,fidelity,log_norm";
  for (int l = 1; l <= ts.n_sites; ++l)
    out << ",h_x_" << l << ",h_y_" << l << ",h_z_" << l;
  out << "\n";
  const bool with_helix = !ts.helix.empty();
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    out << format_double(ts.times[i]) << ',' << format_double(ts.fidelity[i])
        << ',' << format_double(ts.log_norm[i]);
    if (with_helix) {
      for (int l = 1; l <= ts.n_sites; ++l) {
        const auto& h = ts.helix_at(i, l);
        out << ',' << format_double(h[0]) << ',' << format_double(h[1])
            << ',' << format_double(h[2]);
      }
    }
    out << "\n";
  }
  finish(out, path);
}

void write_dos_csv(const std::vector<const DosCurve*>& curves,
                   const std::string& path) {
  std::ofstream out = open_out(path);
  out << "E,dos,kind\n";
  for (const DosCurve* c : curves) {
    const char* kind =
        c->kind == DosCurve::Kind::analytic ? "analytic" : "histogram";
    for (std::size_t i = 0; i < c->energies.size(); ++i)
      out << format_double(c->energies[i]) << ','
          << format_double(c->dos[i]) << ',' << kind << "\n";
  }
  finish(out, path);
}

void write_subspace_csv(const SubspaceMatrix& m, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "row,col,re,im\n";
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c)
      out << r << ',' << c << ',' << format_double(m.m(r, c).real()) << ','
          << format_double(m.m(r, c).imag()) << "\n";
  finish(out, path);
}

void write_table_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows,
                     const std::string& path) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  finish(out, path);
}

} // namespace helix::expcli
