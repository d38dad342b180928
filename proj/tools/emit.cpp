#include "emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace biphoton::emit {

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : ncols_(header.size()) {
  if (ncols_ == 0) throw std::logic_error("csv needs at least one column");
  for (std::size_t i = 0; i < ncols_; ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void Csv::sep() {
  if (col_ >= ncols_) throw std::logic_error("csv row overflows the header");
  if (col_) buf_ += ',';
  ++col_;
}

void Csv::cell(double v) {
  sep();
  buf_ += sig12(v);
}

void Csv::cell(const std::string& s) {
  sep();
  buf_ += s;
}

void Csv::cell(std::size_t v) {
  sep();
  buf_ += std::to_string(v);
}

void Csv::cell_empty() { sep(); }

void Csv::end_row() {
  if (col_ != ncols_) throw std::logic_error("csv row does not fill the header");
  buf_ += '\n';
  col_ = 0;
}

void Csv::write(const std::filesystem::path& p) const { write_text(p, buf_); }

void write_text(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + p.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

namespace {

constexpr double kW = 860.0, kH = 520.0;
constexpr double kL = 72.0, kR = 24.0, kT = 42.0, kB = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  double map(double v, double p0, double p1) const {
    return p0 + (v - lo) / (hi - lo) * (p1 - p0);
  }
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return Range{lo - pad, hi + pad};
}

}  // namespace

std::string line_svg(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series) {
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.pts) {
      if (first) {
        xlo = xhi = x;
        ylo = yhi = y;
        first = false;
      }
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  const Range rx = padded(xlo, xhi), ry = padded(ylo, yhi);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  for (int t = 0; t <= 5; ++t) {
    const double fx = rx.lo + (rx.hi - rx.lo) * t / 5.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * t / 5.0;
    const double gx = rx.map(fx, kL, kW - kR);
    const double gy = ry.map(fy, kH - kB, kT);
    svg << "<line x1=\"" << px(gx) << "\" y1=\"" << kT << "\" x2=\"" << px(gx)
        << "\" y2=\"" << kH - kB << "\" stroke=\"#dddddd\"/>\n"
        << "<line x1=\"" << kL << "\" y1=\"" << px(gy) << "\" x2=\"" << kW - kR
        << "\" y2=\"" << px(gy) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << px(gx) << "\" y=\"" << kH - kB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(fx) << "</text>\n"
        << "<text x=\"" << kL - 6 << "\" y=\"" << px(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(fy) << "</text>\n";
  }

  svg << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
      << "\" height=\"" << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xlabel << "</text>\n"
      << "<text x=\"18\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << kH / 2 << ")\">" << ylabel << "</text>\n";

  std::size_t si = 0;
  for (const auto& s : series) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& [x, y] : s.pts) {
      svg << px(rx.map(x, kL, kW - kR)) << ',' << px(ry.map(y, kH - kB, kT)) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kL + 10 << "\" y=\"" << kT + 18 + 16.0 * static_cast<double>(si)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
        << s.label << "</text>\n";
    ++si;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string heatmap_svg(const std::string& title, const std::vector<std::vector<double>>& z,
                        double x0, double x1, double y0, double y1) {
  const std::size_t rows = z.size();
  const std::size_t cols = rows ? z[0].size() : 0;
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty heat map");
  double zmax = z[0][0];
  for (const auto& r : z) {
    for (double v : r) zmax = std::max(zmax, v);
  }
  if (!(zmax > 0.0)) zmax = 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
  const double cw = (kW - kL - kR) / static_cast<double>(cols);
  const double ch = (kH - kT - kB) / static_cast<double>(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double t = std::clamp(z[i][j] / zmax, 0.0, 1.0);
      // Two-segment dark-violet -> teal -> yellow ramp.
      int r, g, b;
      if (t < 0.5) {
        const double u = 2.0 * t;
        r = static_cast<int>(68 + u * (33 - 68));
        g = static_cast<int>(1 + u * (145 - 1));
        b = static_cast<int>(84 + u * (140 - 84));
      } else {
        const double u = 2.0 * (t - 0.5);
        r = static_cast<int>(33 + u * (253 - 33));
        g = static_cast<int>(145 + u * (231 - 145));
        b = static_cast<int>(140 + u * (37 - 140));
      }
      const double gx = kL + cw * static_cast<double>(j);
      const double gy = kH - kB - ch * static_cast<double>(i + 1);
      svg << "<rect x=\"" << px(gx) << "\" y=\"" << px(gy) << "\" width=\"" << px(cw + 0.5)
          << "\" height=\"" << px(ch + 0.5) << "\" fill=\"rgb(" << r << ',' << g << ','
          << b << ")\"/>\n";
    }
  }
  svg << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
      << "\" height=\"" << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kL << "\" y=\"" << kH - kB + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(x0) << "</text>\n"
      << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(x1) << "</text>\n"
      << "<text x=\"" << kL - 6 << "\" y=\"" << kH - kB
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(y0) << "</text>\n"
      << "<text x=\"" << kL - 6 << "\" y=\"" << kT + 10
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(y1) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace biphoton::emit
