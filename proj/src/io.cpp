#include "rotnls/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rotnls {

namespace {

constexpr char kMagic[4] = {'R', 'N', 'L', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(p[b]) << (8 * b);
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::io_error, "malformed number in CSV: '" + s + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols = {
      "t",           "mass",          "energy_omega", "energy_zero", "energy_magnetic", "ang_mom",
      "variance",    "variance_rate", "grad_norm_sq", "virial_rhs",  "lmom_source",     "tail"};
  return cols;
}

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<ObservableRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::invalid_argument, "no records to write");
  std::string out;
  const auto& cols = timeseries_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
  out += '\n';
  for (const auto& r : records) {
    const double row[] = {r.t,        r.mass,          r.energy_omega, r.energy_zero, r.energy_magnetic, r.ang_mom,
                          r.variance, r.variance_rate, r.grad_norm_sq, r.virial_rhs,  r.lmom_source,     r.tail};
    for (std::size_t c = 0; c < std::size(row); ++c) out += (c ? "," : "") + fmt17(row[c]);
    out += '\n';
  }
  write_file(path, out);
}

std::size_t Timeseries::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::unknown_column, "unknown column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

Timeseries read_timeseries_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  Timeseries ts;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::io_error, "empty CSV: " + path.string());
  ts.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != ts.columns.size()) throw Error(ErrorCode::io_error, "ragged CSV row in " + path.string());
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    ts.rows.push_back(std::move(row));
  }
  return ts;
}

std::uintmax_t snapshot_size(const Grid& grid) {
  const auto d = static_cast<std::uintmax_t>(grid.dim());
  return 4 + 4 + 4 + 4 * d + 8 * d + 8 + 16 * static_cast<std::uintmax_t>(grid.size());
}

void write_snapshot(const std::filesystem::path& path, const ComplexField& psi, double t) {
  const Grid& grid = psi.grid();
  std::string out;
  out.reserve(snapshot_size(grid));
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(grid.dim()));
  for (int j = 0; j < grid.dim(); ++j) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(grid.n(j)));
  for (int j = 0; j < grid.dim(); ++j) put_le<double>(out, grid.halfwidth(j));
  put_le<double>(out, t);
  for (Index i = 0; i < psi.size(); ++i) {
    put_le<double>(out, psi[i].real());
    put_le<double>(out, psi[i].imag());
  }
  write_file(path, out);
}

std::pair<ComplexField, double> read_snapshot(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  auto need = [&](std::size_t upto) {
    if (size < upto) throw Error(ErrorCode::size_mismatch, "snapshot truncated: " + path.string());
  };
  need(4);
  if (std::memcmp(p, kMagic, 4) != 0) throw Error(ErrorCode::bad_magic, "not an RNLS snapshot: " + path.string());
  need(12);
  const auto version = get_le<std::uint32_t>(p + 4);
  if (version != kVersion) {
    throw Error(ErrorCode::version_mismatch, "unsupported snapshot version " + std::to_string(version));
  }
  const auto d = get_le<std::uint32_t>(p + 8);
  if (d != 2 && d != 3) throw Error(ErrorCode::size_mismatch, "snapshot dimension must be 2 or 3");
  std::size_t off = 12;
  need(off + 12 * d + 8);
  std::vector<Index> n(d);
  std::vector<double> L(d);
  for (auto& v : n) v = get_le<std::uint32_t>(p + (off += 4) - 4);
  for (auto& v : L) v = get_le<double>(p + (off += 8) - 8);
  const double t = get_le<double>(p + off);
  off += 8;
  const Grid grid = make_grid(static_cast<int>(d), n, L);
  if (size != snapshot_size(grid)) {
    throw Error(ErrorCode::size_mismatch, "snapshot payload does not match its header: " + path.string());
  }
  ComplexField psi(grid);
  for (Index i = 0; i < grid.size(); ++i, off += 16) {
    psi[i] = Complex(get_le<double>(p + off), get_le<double>(p + off + 8));
  }
  return {std::move(psi), t};
}

std::string render_svg(const Timeseries& series, const std::vector<std::string>& columns) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr double width = 800, height = 480, left = 80, right = 20, top = 50, bottom = 50;
  if (columns.empty()) throw Error(ErrorCode::invalid_argument, "no columns requested");

  const std::size_t tc = series.column("t");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(series.column(c));

  double tmin = 0, tmax = 1, ymin = 0, ymax = 1;
  if (!series.rows.empty()) {
    tmin = tmax = series.rows.front()[tc];
    ymin = ymax = series.rows.front()[idx.front()];
    for (const auto& row : series.rows) {
      tmin = std::min(tmin, row[tc]);
      tmax = std::max(tmax, row[tc]);
      for (auto c : idx) {
        ymin = std::min(ymin, row[c]);
        ymax = std::max(ymax, row[c]);
      }
    }
  }
  const bool flat = ymax - ymin < 1e-9;
  if (flat) {
    const double pad = std::max(1e-9, 1e-6 * std::abs(ymin));
    ymin -= pad;
    ymax += pad;
  }
  if (tmax == tmin) tmax = tmin + 1;
  auto sx = [&](double t) { return left + (t - tmin) / (tmax - tmin) * (width - left - right); };
  auto sy = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

  std::string title;
  for (std::size_t i = 0; i < columns.size(); ++i) title += (i ? ", " : "") + columns[i];
  title += " vs t";
  if (flat) title += " (flat: range below 1e-9)";

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" viewBox=\"0 0 800 480\">\n";
  svg += "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"400\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + title +
         "</text>\n";
  svg += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", height - bottom) + "\" x2=\"" +
         fmt("%.2f", width - right) + "\" y2=\"" + fmt("%.2f", height - bottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", top) + "\" x2=\"" + fmt("%.2f", left) +
         "\" y2=\"" + fmt("%.2f", height - bottom) + "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const char* anchor, const std::string& text) {
    svg += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" text-anchor=\"" + anchor +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + text + "</text>\n";
  };
  label(left, height - bottom + 16, "middle", fmt("%.6g", tmin));
  label(width - right, height - bottom + 16, "middle", fmt("%.6g", tmax));
  label(0.5 * (left + width - right), height - 12, "middle", "t");
  label(left - 6, height - bottom, "end", fmt("%.6g", ymin));
  label(left - 6, top + 4, "end", fmt("%.6g", ymax));

  for (std::size_t i = 0; i < idx.size(); ++i) {
    const char* color = palette[i % std::size(palette)];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t r = 0; r < series.rows.size(); ++r) {
      svg += (r ? " " : "") + fmt("%.2f", sx(series.rows[r][tc])) + "," + fmt("%.2f", sy(series.rows[r][idx[i]]));
    }
    svg += "\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", width - right - 4) + "\" y=\"" + fmt("%.2f", top + 14.0 * (i + 1)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color + "\">" +
           columns[i] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void render_svg_timeseries(const std::filesystem::path& csv_path, const std::vector<std::string>& columns,
                           const std::filesystem::path& svg_path) {
  const Timeseries series = read_timeseries_csv(csv_path);
  write_file(svg_path, render_svg(series, columns));
}

}  // namespace rotnls
