#include "pcehinf/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pcehinf {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

Metadata& Metadata::add(std::string key, std::string value) {
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

Metadata& Metadata::add(std::string key, double value) {
  return add(std::move(key), format_number(value));
}

std::string Metadata::header() const {
  std::string out;
  for (const auto& [k, v] : fields_) out += "# " + k + ": " + v + "\n";
  return out;
}

std::string version_string() {
  std::string s = std::string("pcehinf ") + PCEHINF_VERSION + ", eigen " +
                  std::to_string(EIGEN_WORLD_VERSION) + "." +
                  std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION);
#if defined(__clang__)
  s += ", clang " __clang_version__;
#elif defined(__GNUC__)
  s += ", gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#endif
  return s;
}

std::string csv_document(const Metadata& meta, const CsvRow& columns,
                         const std::vector<CsvRow>& rows) {
  std::string out = meta.header();
  auto line = [&](const CsvRow& r) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) {
    require(r.size() == columns.size(), ErrorKind::InvalidArgument, "CSV row width mismatch");
    line(r);
  }
  return out;
}

std::string matrix_csv(const Metadata& meta, const Matrix& m) {
  std::string out = meta.header();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_number(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      require(b != std::string::npos, ErrorKind::Schema,
              "empty CSV cell at line " + std::to_string(lineno));
      double v = 0.0;
      const char* end = cell.data() + e + 1;
      const auto res = std::from_chars(cell.data() + b, end, v);
      require(res.ec == std::errc() && res.ptr == end, ErrorKind::Schema,
              "bad number '" + cell + "' at line " + std::to_string(lineno));
      row.push_back(v);
    }
    require(rows.empty() || row.size() == rows.front().size(), ErrorKind::DimensionMismatch,
            "ragged CSV matrix at line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::Schema, "CSV matrix is empty");
  Matrix m(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  try {
    return parse_matrix_csv(read_text(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pcehinf
