#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mctx {

/// Sampled trajectory: a column store with an ordered metadata block.
///
/// Column conventions used throughout the library:
///   t                  time [s]
///   rho                permeability at t [1/s]
///   N_in_<X>           molecules of species X inside the nanoparticle
///   N_out_<X>          accumulated molecules released to the environment
///   N_RX_<X>           accumulated molecules absorbed by the receiver
///   <col>_std          ensemble standard deviation (particle simulation)
class TimeSeriesRecord {
 public:
  using Metadata = std::vector<std::pair<std::string, std::string>>;

  std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const { return names_.size(); }

  /// Appends a column; its length must match existing columns.
  void add_column(std::string name, std::vector<double> values);

  bool has_column(std::string_view name) const;
  std::span<const double> column(std::string_view name) const;
  std::vector<double>& mutable_column(std::string_view name);
  const std::vector<std::string>& column_names() const { return names_; }

  /// Inserts or overwrites a metadata entry, keeping first-insertion order.
  void set_meta(std::string key, std::string value);
  const std::string* find_meta(std::string_view key) const;
  const Metadata& metadata() const { return meta_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  Metadata meta_;
};

/// Numbers are written with 12 significant digits ("%.12g"); metadata lines
/// are "# key: value", then one header line, then data rows.
std::string format_number(double v);
void write_csv(std::ostream& out, const TimeSeriesRecord& rec);
void write_csv_file(const std::string& path, const TimeSeriesRecord& rec);
TimeSeriesRecord read_csv(std::istream& in);
TimeSeriesRecord read_csv_file(const std::string& path);

}  // namespace mctx
