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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qaemix::chart {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws std::invalid_argument if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Lines starting with '#' are skipped; the first remaining line is the
/// header. Double-quoted fields may contain commas and "" escapes.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

struct ChartSpec {
  std::string x;
  std::vector<std::string> ys;
  /// Keep only rows whose column equals the value.
  std::optional<std::pair<std::string, std::string>> where;
  std::string title;
};

// Plot frame, in SVG user units.
inline constexpr double kWidth = 640.0;
inline constexpr double kHeight = 400.0;
inline constexpr double kLeft = 64.0;
inline constexpr double kRight = 24.0;
inline constexpr double kTop = 36.0;
inline constexpr double kBottom = 48.0;

/// Line chart of each y column against x. A column named "bound" is drawn
/// dashed in blue. Cells that do not parse as numbers are skipped, so an
/// empty table yields axes only. Output depends only on the inputs.
std::string render_svg(const CsvTable& table, const ChartSpec& spec);

void emit_chart(const std::filesystem::path& csv, const ChartSpec& spec,
                const std::filesystem::path& out);

}  // namespace qaemix::chart
