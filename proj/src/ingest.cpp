#include "driftbench/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace driftbench {

SeriesSource pm25_preset(std::filesystem::path path) {
  SeriesSource s;
  s.path = std::move(path);
  s.column = "pm2.5";
  s.delimiter = ',';
  s.missing_tokens = {"NA", ""};
  return s;
}

SeriesSource power_preset(std::filesystem::path path) {
  SeriesSource s;
  s.path = std::move(path);
  s.column = "Global_active_power";
  s.delimiter = ';';
  s.missing_tokens = {"?", ""};
  return s;
}

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

LoadedSeries load_series(const SeriesSource& source) {
  std::ifstream in(source.path);
  if (!in) throw std::runtime_error("cannot open " + source.path.string());

  const std::string where = source.path.string();
  std::string line;
  std::size_t column = 0;
  std::size_t line_no = 0;

  if (source.column_index) {
    column = *source.column_index;
    if (source.header && std::getline(in, line)) ++line_no;
  } else {
    if (!source.header) throw std::invalid_argument(where + ": a column name needs a header row");
    if (!std::getline(in, line)) throw std::runtime_error(where + ": file is empty");
    ++line_no;
    const auto names = split_fields(line, source.delimiter);
    const auto it = std::find_if(names.begin(), names.end(),
                                 [&](const std::string& n) { return trim(n) == source.column; });
    if (it == names.end()) throw std::invalid_argument(where + ": no column named '" + source.column + "'");
    column = static_cast<std::size_t>(it - names.begin());
  }

  LoadedSeries out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, source.delimiter);
    if (column >= fields.size()) {
      ++out.skipped;
      continue;
    }
    const std::string field = trim(fields[column]);
    std::optional<double> value;
    if (!source.missing_tokens.contains(field)) value = parse_number(field);
    if (value) {
      out.values.push_back(*value);
    } else {
      ++out.skipped;
    }
  }
  if (out.values.empty()) throw std::runtime_error(where + ": no parseable values in the selected column");
  return out;
}

double rounded_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty series");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return std::round(*mid);
}

}  // namespace driftbench
