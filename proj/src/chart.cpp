// Copyright 2026 The qaemix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qaemix/chart.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace qaemix::chart {

namespace {

constexpr std::string_view kBoundColour = "#1f4fd1";
constexpr std::array<std::string_view, 6> kPalette = {"#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#17becf"};
constexpr int kTicks = 5;

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quote");
  return fields;
}

std::optional<double> number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

using Series = std::vector<std::pair<double, double>>;

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw std::invalid_argument("chart: column '" + std::string(name) + "' not in CSV");
  }
  return static_cast<std::size_t>(std::distance(columns.begin(), it));
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_line(line);
    if (!have_header) {
      table.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw std::invalid_argument("csv: row has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw std::invalid_argument("csv: no header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_csv(text);
}

std::string render_svg(const CsvTable& table, const ChartSpec& spec) {
  if (spec.ys.empty()) throw std::invalid_argument("chart: no y columns");
  const std::size_t xi = table.column(spec.x);
  std::vector<std::size_t> yi;
  for (const auto& y : spec.ys) yi.push_back(table.column(y));
  std::optional<std::size_t> where_col;
  if (spec.where) where_col = table.column(spec.where->first);

  std::vector<Series> series(spec.ys.size());
  Range xr, yr;
  for (const auto& row : table.rows) {
    if (where_col && row[*where_col] != spec.where->second) continue;
    const auto x = number(row[xi]);
    if (!x) continue;
    for (std::size_t s = 0; s < yi.size(); ++s) {
      const auto y = number(row[yi[s]]);
      if (!y) continue;
      series[s].emplace_back(*x, *y);
      xr.include(*x);
      yr.include(*y);
    }
  }
  xr.settle();
  yr.settle();
  for (auto& s : series) std::stable_sort(s.begin(), s.end(), [](auto& a, auto& b) {
    return a.first < b.first;
  });

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) +
         "\" height=\"" + fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " +
         fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    svg += "<text x=\"" + fmt("%.2f", kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" +
           xml_escape(spec.title) + "</text>\n";
  }

  // Axes and ticks.
  const std::string x0 = fmt("%.2f", kLeft), x1 = fmt("%.2f", kLeft + pw);
  const std::string y0 = fmt("%.2f", kTop + ph), y1 = fmt("%.2f", kTop);
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x1 + "\" y2=\"" + y0 + "\"/>\n";
  svg += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x0 + "\" y2=\"" + y1 + "\"/>\n";
  svg += "</g>\n<g fill=\"black\">\n";
  for (int t = 0; t < kTicks; ++t) {
    const double f = static_cast<double>(t) / (kTicks - 1);
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    const std::string tx = fmt("%.2f", px(xv)), ty = fmt("%.2f", py(yv));
    svg += "<line x1=\"" + tx + "\" y1=\"" + y0 + "\" x2=\"" + tx + "\" y2=\"" +
           fmt("%.2f", kTop + ph + 4) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + tx + "\" y=\"" + fmt("%.2f", kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + fmt("%.3g", xv) + "</text>\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft - 4) + "\" y1=\"" + ty + "\" x2=\"" + x0 + "\" y2=\"" +
           ty + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + ty +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + fmt("%.3g", yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kHeight - 10) +
         "\" text-anchor=\"middle\">" + xml_escape(spec.x) + "</text>\n";
  svg += "</g>\n";

  // Series, then legend.
  std::size_t palette_index = 0;
  std::vector<std::string> colours;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const bool is_bound = spec.ys[s] == "bound";
    const std::string colour(is_bound ? kBoundColour : kPalette[palette_index++ % kPalette.size()]);
    colours.push_back(colour);
    if (series[s].empty()) continue;
    std::string points;
    for (const auto& [x, y] : series[s]) {
      if (!points.empty()) points += ' ';
      points += fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y));
    }
    svg += "<polyline class=\"series\" data-column=\"" + xml_escape(spec.ys[s]) +
           "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" +
           (is_bound ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + points + "\"/>\n";
    if (!is_bound) {
      for (const auto& [x, y] : series[s]) {
        svg += "<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) +
               "\" r=\"2.5\" fill=\"" + colour + "\"/>\n";
      }
    }
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = kTop + 8 + 14.0 * static_cast<double>(s);
    const double lx = kLeft + pw - 110;
    svg += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
           fmt("%.2f", lx + 20) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + colours[s] +
           "\" stroke-width=\"1.5\"" + (spec.ys[s] == "bound" ? " stroke-dasharray=\"6 4\"" : "") +
           "/>\n";
    svg += "<text x=\"" + fmt("%.2f", lx + 26) + "\" y=\"" + fmt("%.2f", ly) +
           "\" dominant-baseline=\"middle\">" + xml_escape(spec.ys[s]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_chart(const std::filesystem::path& csv, const ChartSpec& spec,
                const std::filesystem::path& out) {
  const auto svg = render_svg(read_csv(csv), spec);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + out.string());
  file << svg;
}

}  // namespace qaemix::chart
