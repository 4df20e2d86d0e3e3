#include "fsps/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fsps/error.hpp"
#include "fsps/region.hpp"

namespace fsps {

namespace {

std::string bit(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw InputError("not a number: '" + text + "'");
  }
  return v;
}

void write_snapshot(std::ostream& out, const WaveField& psi, double t) {
  out << "FSPS1 " << psi.size() << ' ' << format_double(psi.grid.half_length()) << ' '
      << format_double(t) << '\n';
  for (const auto& v : psi.values) {
    out << format_double(v.real()) << ' ' << format_double(v.imag()) << '\n';
  }
}

void write_snapshot(const std::filesystem::path& path, const WaveField& psi, double t) {
  std::ostringstream os;
  write_snapshot(os, psi, t);
  write_file(path, os.str());
}

Snapshot read_snapshot(std::istream& in) {
  std::string magic, n_text, l_text, t_text;
  if (!(in >> magic >> n_text >> l_text >> t_text) || magic != "FSPS1") {
    throw InputError("snapshot: expected header 'FSPS1 N L t'");
  }
  std::size_t n = 0;
  const auto res = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (res.ec != std::errc{} || res.ptr != n_text.data() + n_text.size()) {
    throw InputError("snapshot: bad point count '" + n_text + "'");
  }
  const Grid1D grid(parse_double(l_text), n);
  WaveField field(grid);
  for (std::size_t j = 0; j < n; ++j) {
    std::string re, im;
    if (!(in >> re >> im)) {
      throw InputError("snapshot: expected " + std::to_string(n) + " samples, got " +
                       std::to_string(j));
    }
    field.values[j] = {parse_double(re), parse_double(im)};
  }
  std::string extra;
  if (in >> extra) throw InputError("snapshot: trailing data after " + std::to_string(n) + " samples");
  return {std::move(field), parse_double(t_text)};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& rows) {
  out << kDiagnosticsHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.energy)
        << ',' << format_double(r.momentum) << ',' << format_double(r.h1) << ','
        << format_double(r.sup_norm) << ',' << format_double(r.theta) << ','
        << format_double(r.l4linf_accum) << '\n';
  }
}

void write_region_csv(std::ostream& out, const RegionRaster& raster) {
  out << kRegionHeader << '\n';
  for (std::size_t i = 0; i < raster.gammas.size(); ++i) {
    for (std::size_t j = 0; j < raster.sigmas.size(); ++j) {
      const auto& c = raster.at(i, j);
      out << format_double(to_double(c.sigma)) << ',' << format_double(to_double(c.gamma)) << ','
          << bit(c.feasible) << ',';
      if (c.interval) {
        out << format_double(to_double(c.interval->lo)) << ','
            << format_double(to_double(c.interval->hi)) << ',' << bit(c.interval->lo_open) << ','
            << bit(c.interval->hi_open);
      } else {
        out << ",,,";
      }
      out << '\n';
    }
  }
}

void write_region_svg(std::ostream& out, const RegionRaster& raster) {
  const double cell = 8.0;
  const double margin = 48.0;
  const std::size_t ns = raster.sigmas.size();
  const std::size_t ng = raster.gammas.size();
  const double width = 2.0 * margin + cell * static_cast<double>(ns);
  const double height = 2.0 * margin + cell * static_cast<double>(ng);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(width)
      << "\" height=\"" << format_double(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      const double x = margin + cell * static_cast<double>(j);
      const double y = margin + cell * static_cast<double>(ng - 1 - i);
      out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
          << format_double(cell) << "\" height=\"" << format_double(cell) << "\" fill=\""
          << (raster.at(i, j).feasible ? "#3b8bc2" : "#eeeeee") << "\"/>\n";
    }
  }
  if (ns >= 2 && ng >= 2) {
    const double s0 = to_double(raster.sigmas.front());
    const double s1 = to_double(raster.sigmas.back());
    const double g0 = to_double(raster.gammas.front());
    const double g1 = to_double(raster.gammas.back());
    auto px = [&](double s) {
      return margin + cell * (0.5 + (s - s0) / (s1 - s0) * static_cast<double>(ns - 1));
    };
    auto py = [&](double g) {
      return margin + cell * (0.5 + (g1 - g) / (g1 - g0) * static_cast<double>(ng - 1));
    };
    std::string points;
    for (int k = 0; k <= 200; ++k) {
      const double g = g0 + (g1 - g0) * k / 200.0;
      const auto path = scaling_sigma(g);
      if (!path.sigma || *path.sigma < s0 || *path.sigma > s1) continue;
      points += format_double(px(*path.sigma)) + "," + format_double(py(g)) + " ";
    }
    if (!points.empty()) {
      out << "<polyline fill=\"none\" stroke=\"#2a9d3a\" stroke-width=\"2\" points=\"" << points
          << "\"/>\n";
    }
    out << "<text x=\"" << format_double(margin) << "\" y=\"" << format_double(height - 16.0)
        << "\" font-size=\"12\">sigma " << format_double(s0) << " .. " << format_double(s1)
        << "</text>\n";
    out << "<text x=\"4\" y=\"" << format_double(margin - 16.0) << "\" font-size=\"12\">gamma "
        << format_double(g0) << " .. " << format_double(g1) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace fsps
