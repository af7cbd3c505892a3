#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace driftbench {

/// Where to find a measurement column in a delimited text file.
struct SeriesSource {
  std::filesystem::path path;
  std::string column;                          // header name, or used when column_index is unset
  std::optional<std::size_t> column_index;     // zero-based position; wins over `column`
  char delimiter = ',';
  std::set<std::string> missing_tokens{"NA", "?", ""};
  bool header = true;
};

/// Beijing PM2.5 hourly file: comma-delimited, column "pm2.5", missing "NA".
SeriesSource pm25_preset(std::filesystem::path path);
/// Household power file: semicolon-delimited, column "Global_active_power", missing "?".
SeriesSource power_preset(std::filesystem::path path);

struct LoadedSeries {
  std::vector<double> values;
  std::size_t skipped = 0;
};

/// Reads the measurement column in file order. Rows whose field is missing or does
/// not parse as a number are skipped and counted.
LoadedSeries load_series(const SeriesSource& source);

/// Splits one delimited line, honouring double-quoted fields.
std::vector<std::string> split_fields(const std::string& line, char delimiter);

/// Lower-middle median rounded half away from zero.
double rounded_median(std::vector<double> values);

}  // namespace driftbench
