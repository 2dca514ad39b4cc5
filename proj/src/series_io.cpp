#include "gqarch/series_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gqarch/error.hpp"

namespace gqarch {

std::string format_real(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

SeriesFile parse_series(std::istream& in, const std::string& source_name) {
  SeriesFile file;
  std::vector<double> values;
  std::vector<double> before_delimiter;
  bool seen_delimiter = false;
  bool seen_payload = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!seen_payload && !line.empty() && line.front() == '#') {
      file.comments.push_back(line);
      continue;
    }
    const std::string field = trim(line);
    if (field.empty()) continue;
    if (field == kPresampleDelimiter) {
      if (seen_delimiter)
        throw DataError(source_name + ":" + std::to_string(line_no) + ": duplicate pre-sample delimiter");
      seen_delimiter = true;
      before_delimiter = std::move(values);
      values.clear();
      seen_payload = true;
      continue;
    }
    double v = 0.0;
    if (!parse_double(field, v)) {
      // A single non-numeric first line is a header.
      if (!seen_payload) {
        seen_payload = true;
        continue;
      }
      throw DataError(source_name + ":" + std::to_string(line_no) + ": cannot parse value '" +
                      field + "'");
    }
    seen_payload = true;
    values.push_back(v);
  }
  if (values.empty()) throw DataError(source_name + ": series is empty");
  if (seen_delimiter) {
    if (before_delimiter.empty()) throw DataError(source_name + ": pre-sample section is empty");
    file.path.presample = std::move(before_delimiter);
  }
  file.path.observations = std::move(values);
  return file;
}

SeriesFile read_series_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open series file '" + path.string() + "'");
  return parse_series(in, path.string());
}

SamplePath load_series(const std::filesystem::path& path) { return read_series_file(path).path; }

void write_series(std::ostream& out, const SamplePath& path, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << c << '\n';
  out << "r\n";
  if (path.presample) {
    for (double v : *path.presample) out << format_real(v) << '\n';
    out << kPresampleDelimiter << '\n';
  }
  for (double v : path.observations) out << format_real(v) << '\n';
}

void write_series_file(const std::filesystem::path& file, const SamplePath& path,
                       const std::vector<std::string>& comments) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write series file '" + file.string() + "'");
  write_series(out, path, comments);
}

}  // namespace gqarch
