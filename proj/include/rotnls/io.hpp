#pragma once

#include "rotnls/field.hpp"
#include "rotnls/observables.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rotnls {

/// Column names of the observable CSV, in file order.
const std::vector<std::string>& timeseries_columns();

/// Header plus one row per record, 17 significant digits.
/// Throws Error{invalid_argument} for empty input (no file is created) or Error{io_error}.
void write_timeseries_csv(const std::filesystem::path& path, const std::vector<ObservableRecord>& records);

struct Timeseries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws Error{unknown_column}.
  std::size_t column(const std::string& name) const;
};

Timeseries read_timeseries_csv(const std::filesystem::path& path);

/// Little-endian "RNLS" v1 field snapshot.
void write_snapshot(const std::filesystem::path& path, const ComplexField& psi, double t);

/// Throws Error{io_error, bad_magic, version_mismatch, size_mismatch}.
std::pair<ComplexField, double> read_snapshot(const std::filesystem::path& path);

/// Byte length of a snapshot for the given grid.
std::uintmax_t snapshot_size(const Grid& grid);

/// One polyline per column against t. Throws Error{unknown_column} or Error{io_error}.
void render_svg_timeseries(const std::filesystem::path& csv_path, const std::vector<std::string>& columns,
                           const std::filesystem::path& svg_path);

std::string render_svg(const Timeseries& series, const std::vector<std::string>& columns);

}  // namespace rotnls
