#include "msgc/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace msgc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    std::string_view t = trim(cell);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    cells.emplace_back(t);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

CsvTable parse_csv(std::istream& in, bool time_column, const std::string& source) {
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw Error(source + ": file is empty");

  bool all_numeric = true;
  for (const auto& h : header) all_numeric = all_numeric && parse_number(h).has_value();
  if (all_numeric) {
    throw Error(source + ": first row is numeric; a header row naming the columns is required");
  }
  for (const auto& h : header) {
    if (h.empty()) throw Error(source + ": header has an empty column name");
  }
  const std::size_t cols = header.size();
  if (time_column && cols < 2) throw Error(source + ": a time column needs at least one data column");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols) {
      std::ostringstream msg;
      msg << source << ": row " << line_no << " has " << cells.size() << " fields, header has " << cols;
      throw Error(msg.str());
    }
    std::vector<double> row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = parse_number(cells[c]);
      if (!v || !std::isfinite(*v)) {
        std::ostringstream msg;
        msg << source << ": row " << line_no << ", column " << c + 1 << " ('" << header[c]
            << "'): " << (v ? "non-finite" : "non-numeric") << " value '" << cells[c] << "'";
        throw Error(msg.str());
      }
      row[c] = *v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(source + ": no data rows after the header");

  const std::size_t first = time_column ? 1 : 0;
  CsvTable table;
  table.data.labels.assign(header.begin() + static_cast<std::ptrdiff_t>(first), header.end());
  table.data.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(cols - first));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = first; c < cols; ++c) {
      table.data.values(static_cast<Index>(r), static_cast<Index>(c - first)) = rows[r][c];
    }
  }
  if (time_column) {
    std::vector<double> t(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) t[r] = rows[r][0];
    table.times = std::move(t);
  }
  table.data.validate();
  return table;
}

CsvTable load_csv(const std::filesystem::path& path, bool time_column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_csv(in, time_column, path.string());
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

void write_series_csv(std::ostream& out, const TimeSeriesSet& data, const std::vector<double>* times,
                      const std::string& time_label) {
  if (times && static_cast<Index>(times->size()) != data.samples()) {
    throw Error("time axis length does not match the data");
  }
  if (times) out << time_label << ',';
  for (std::size_t c = 0; c < data.labels.size(); ++c) out << (c ? "," : "") << data.labels[c];
  out << '\n';
  for (Index r = 0; r < data.samples(); ++r) {
    if (times) out << format_double((*times)[static_cast<std::size_t>(r)]) << ',';
    for (Index c = 0; c < data.channels(); ++c) out << (c ? "," : "") << format_double(data.values(r, c));
    out << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace msgc
