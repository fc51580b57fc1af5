#pragma once

#include "msgc/types.hpp"

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace msgc {

struct CsvTable {
  TimeSeriesSet data;
  std::optional<std::vector<double>> times;  // set when the first column is a time axis
};

/// Reads a comma-separated file with a header row. With `time_column`, the first
/// column is split off as the time axis. Errors name the file row (1-based) and
/// column for non-numeric or non-finite cells; ragged rows and empty files fail.
CsvTable parse_csv(std::istream& in, bool time_column, const std::string& source = "<stream>");
CsvTable load_csv(const std::filesystem::path& path, bool time_column);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Writes a header and one row per sample, optionally preceded by a time column.
void write_series_csv(std::ostream& out, const TimeSeriesSet& data,
                      const std::vector<double>* times = nullptr, const std::string& time_label = "t");

/// Opens `path` for writing, creating parent directories.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace msgc
