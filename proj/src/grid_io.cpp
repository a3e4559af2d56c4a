#include "mapex/grid_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace mapex {
namespace {

Cell parse_cell(char ch, int row, int col) {
  switch (ch) {
    case '#': return Cell::Obstacle;
    case '.': return Cell::Free;
    case '?': return Cell::Unknown;
    default:
      throw FormatError("unexpected character 0x" +
                        std::to_string(static_cast<unsigned char>(ch)) + " at row " +
                        std::to_string(row) + ", col " + std::to_string(col));
  }
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_all(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

OccupancyGrid load_grid(std::string_view text) {
  if (text.empty()) throw FormatError("empty grid text");

  std::vector<Cell> cells;
  int width = -1;
  int rows = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    // The final row may omit its newline; save_grid always writes one.
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    if (width < 0) {
      width = static_cast<int>(line.size());
      if (width == 0) throw FormatError("row 0 is empty");
    } else if (static_cast<int>(line.size()) != width) {
      throw FormatError("ragged rows: row " + std::to_string(rows) + " has " +
                        std::to_string(line.size()) + " cells, expected " +
                        std::to_string(width));
    }
    for (int col = 0; col < width; ++col) cells.push_back(parse_cell(line[col], rows, col));
    ++rows;
    pos = end + 1;
  }
  return OccupancyGrid(rows, width, std::move(cells));
}

std::string save_grid(const OccupancyGrid& grid) {
  std::string out;
  out.reserve(grid.size() + static_cast<std::size_t>(grid.height()));
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) out.push_back(to_char(grid[{r, c}]));
    out.push_back('\n');
  }
  return out;
}

OccupancyGrid read_grid_file(const std::filesystem::path& path) {
  return load_grid(read_all(path));
}

void write_grid_file(const std::filesystem::path& path, const OccupancyGrid& grid) {
  write_all(path, save_grid(grid));
}

Metadata parse_metadata(std::string_view text) {
  Metadata meta;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("metadata line " + std::to_string(line_no) + " has no '='");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("metadata line " + std::to_string(line_no) + " has no key");
    meta[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return meta;
}

std::string format_metadata(const Metadata& meta) {
  std::string out;
  for (const auto& [key, value] : meta) out += key + "=" + value + "\n";
  return out;
}

Metadata read_metadata_file(const std::filesystem::path& path) {
  return parse_metadata(read_all(path));
}

void write_metadata_file(const std::filesystem::path& path, const Metadata& meta) {
  write_all(path, format_metadata(meta));
}

}  // namespace mapex
