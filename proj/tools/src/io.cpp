#include "targetlab/app/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

#include <openssl/evp.h>

#include "targetlab/error.hpp"

namespace targetlab::app {
namespace {

std::ofstream open_for_write(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  if (last - first == 3 && std::strncmp(first, "nan", 3) == 0) return std::nan("");
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc()) throw Error(ErrorCode::io, "not a number in CSV: '" + s + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : path_(path), out_(open_for_write(path)), columns_(header.size()) {
  raw_row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  raw_row(cells);
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error(ErrorCode::shape, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                      std::to_string(columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error(ErrorCode::io, "write failed: " + path_.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorCode::io, "CSV has no column '" + name + "'");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::io, path.string() + " is empty");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw Error(ErrorCode::io, "ragged CSV row in " + path.string());
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io, path.string() + ": " + e.what());
  }
}

void write_field(const fs::path& stem, const spectral::Field2D& field, const json& extra) {
  static_assert(std::endian::native == std::endian::little, "field files are little-endian");
  fs::path bin = stem;
  bin += ".bin";
  fs::path meta = stem;
  meta += ".json";
  {
    auto out = open_for_write(bin, std::ios::binary);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw Error(ErrorCode::io, "write failed: " + bin.string());
  }
  json j = {
      {"N", field.grid.N},
      {"L", field.grid.L},
      {"dealias", field.grid.dealias == spectral::Dealias::two_thirds ? "two_thirds" : "none"},
      {"dtype", "float64-le"},
      {"layout", "row-major, index iy*N + ix"},
      {"x0", 0.5 * field.grid.h()},
      {"h", field.grid.h()},
      {"center", {field.grid.center(), field.grid.center()}},
      {"data", bin.filename().string()},
  };
  for (const auto& [k, v] : extra.items()) j[k] = v;
  write_json(meta, j);
}

spectral::Field2D read_field(const fs::path& path) {
  fs::path meta = path;
  meta.replace_extension(".json");
  const json j = read_json(meta);
  spectral::GridSpec2D grid;
  try {
    grid.N = j.at("N").get<std::size_t>();
    grid.L = j.at("L").get<double>();
    grid.dealias = j.value("dealias", "two_thirds") == "none" ? spectral::Dealias::none
                                                              : spectral::Dealias::two_thirds;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io, meta.string() + ": " + e.what());
  }
  grid.validate();
  fs::path bin = meta.parent_path() / j.value("data", meta.stem().string() + ".bin");
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + bin.string());
  std::vector<double> values(grid.cells());
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double))) {
    throw Error(ErrorCode::io, bin.string() + " is shorter than N*N doubles");
  }
  return spectral::Field2D(grid, std::move(values));
}

void write_profile_csv(const fs::path& path, const radial::RadialProfile& profile,
                       const std::string& value_name) {
  CsvWriter w(path, {"r", value_name});
  for (std::size_t i = 0; i < profile.size(); ++i) w.row({profile.grid[i], profile.values[i]});
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace targetlab::app
