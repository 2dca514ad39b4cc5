#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gqarch/simulator.hpp"

namespace gqarch {

inline constexpr const char* kPresampleDelimiter = "---presample-end---";

/// Shortest decimal that parses back to the identical double.
std::string format_real(double value);

struct SeriesFile {
  SamplePath path;
  std::vector<std::string> comments;  // leading '#' lines, verbatim
};

/// Series CSV: optional '#' comment block, optional single header line, then one
/// value per line, oldest first. A line "---presample-end---" splits the file
/// into pre-sample (first) and observations.
SeriesFile parse_series(std::istream& in, const std::string& source_name = "<stream>");
SeriesFile read_series_file(const std::filesystem::path& path);
SamplePath load_series(const std::filesystem::path& path);

void write_series(std::ostream& out, const SamplePath& path,
                  const std::vector<std::string>& comments = {});
void write_series_file(const std::filesystem::path& file, const SamplePath& path,
                       const std::vector<std::string>& comments = {});

}  // namespace gqarch
