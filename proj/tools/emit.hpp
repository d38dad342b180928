#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace biphoton::emit {

// %.12g rendering used for every CSV number.
std::string sig12(double v);

// Comma-separated, LF-terminated rows; every row must fill the header width.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  void cell(double v);
  void cell(const std::string& s);
  void cell(std::size_t v);
  void cell_empty();
  void end_row();
  const std::string& str() const { return buf_; }
  void write(const std::filesystem::path& p) const;

 private:
  void sep();
  std::string buf_;
  std::size_t ncols_ = 0;
  std::size_t col_ = 0;
};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;
};

// Minimal self-contained SVG line plot; axes with linear ticks.
std::string line_svg(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series);

// Row-major heat map; z[i][j] drawn at y index i (bottom row i = 0), x index j.
std::string heatmap_svg(const std::string& title, const std::vector<std::vector<double>>& z,
                        double x0, double x1, double y0, double y1);

void write_text(const std::filesystem::path& p, const std::string& content);

}  // namespace biphoton::emit
