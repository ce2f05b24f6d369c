#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcehinf/common.hpp"

namespace pcehinf {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);

/// Ordered key/value block written as "# key: value" lines at the top of
/// every output file.
class Metadata {
 public:
  Metadata& add(std::string key, std::string value);
  Metadata& add(std::string key, double value);
  std::string header() const;
  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Library, Eigen and compiler versions.
std::string version_string();

using CsvRow = std::vector<std::string>;
std::string csv_document(const Metadata& meta, const CsvRow& columns,
                         const std::vector<CsvRow>& rows);
std::string matrix_csv(const Metadata& meta, const Matrix& m);

/// Numeric CSV; blank lines and lines starting with '#' are skipped.
Matrix parse_matrix_csv(std::string_view text);
Matrix load_matrix_csv(const std::filesystem::path& path);

/// Throws Io.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace pcehinf
