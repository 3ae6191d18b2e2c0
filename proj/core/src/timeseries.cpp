#include "mctx/timeseries.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "mctx/config.hpp"

namespace mctx {

void TimeSeriesRecord::add_column(std::string name, std::vector<double> values) {
  if (has_column(name)) throw std::invalid_argument("duplicate column '" + name + "'");
  if (!columns_.empty() && values.size() != rows()) {
    throw std::invalid_argument(fmt::format("column '{}' has {} rows, expected {}", name,
                                            values.size(), rows()));
  }
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

bool TimeSeriesRecord::has_column(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> TimeSeriesRecord::column(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range(fmt::format("no column '{}'", name));
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

std::vector<double>& TimeSeriesRecord::mutable_column(std::string_view name) {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range(fmt::format("no column '{}'", name));
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

void TimeSeriesRecord::set_meta(std::string key, std::string value) {
  for (auto& kv : meta_) {
    if (kv.first == key) {
      kv.second = std::move(value);
      return;
    }
  }
  meta_.emplace_back(std::move(key), std::move(value));
}

const std::string* TimeSeriesRecord::find_meta(std::string_view key) const {
  for (const auto& kv : meta_) {
    if (kv.first == key) return &kv.second;
  }
  return nullptr;
}

std::string format_number(double v) {
  if (v == 0) return "0";  // no "-0"
  return fmt::format("{:.12g}", v);
}

void write_csv(std::ostream& out, const TimeSeriesRecord& rec) {
  for (const auto& [k, v] : rec.metadata()) out << "# " << k << ": " << v << '\n';
  const auto& names = rec.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  std::vector<std::span<const double>> cols;
  cols.reserve(names.size());
  for (const auto& n : names) cols.push_back(rec.column(n));
  std::string line;
  for (std::size_t r = 0; r < rec.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) line += ',';
      line += format_number(cols[c][r]);
    }
    line += '\n';
    out << line;
  }
}

void write_csv_file(const std::string& path, const TimeSeriesRecord& rec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  write_csv(out, rec);
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                   : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

TimeSeriesRecord read_csv(std::istream& in) {
  TimeSeriesRecord rec;
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!names.empty()) throw ConfigError(fmt::format("line {}: metadata after header", lineno));
      std::string_view body(line);
      body.remove_prefix(std::min<std::size_t>(2, body.size()));
      const auto colon = body.find(": ");
      if (colon == std::string_view::npos) {
        rec.set_meta(std::string(body), "");
      } else {
        rec.set_meta(std::string(body.substr(0, colon)), std::string(body.substr(colon + 2)));
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (names.empty()) {
      for (auto f : fields) names.emplace_back(f);
      cols.resize(names.size());
      continue;
    }
    if (fields.size() != names.size()) {
      throw ConfigError(fmt::format("line {}: {} fields, header has {}", lineno, fields.size(),
                                    names.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      cols[c].push_back(parse_double(names[c], fields[c]));
    }
  }
  if (names.empty()) throw ConfigError("CSV has no header line");
  for (std::size_t c = 0; c < names.size(); ++c) rec.add_column(names[c], std::move(cols[c]));
  return rec;
}

TimeSeriesRecord read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  return read_csv(in);
}

}  // namespace mctx
