#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mapex/grid.hpp"

namespace mapex {

// .grid text format: one newline-terminated line per row,
// '#' Obstacle, '.' Free, '?' Unknown. No other characters are accepted.
OccupancyGrid load_grid(std::string_view text);
std::string save_grid(const OccupancyGrid& grid);

OccupancyGrid read_grid_file(const std::filesystem::path& path);
void write_grid_file(const std::filesystem::path& path, const OccupancyGrid& grid);

// key=value sidecar, one pair per line. Blank lines and '#' comments are skipped.
using Metadata = std::map<std::string, std::string>;

Metadata parse_metadata(std::string_view text);
std::string format_metadata(const Metadata& meta);

Metadata read_metadata_file(const std::filesystem::path& path);
void write_metadata_file(const std::filesystem::path& path, const Metadata& meta);

}  // namespace mapex
