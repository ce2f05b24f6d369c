#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pcehinf/plant.hpp"

namespace pcehinf {

/// Parses a polynomial in xi1..xiN written with numbers, `+ - * ^` and
/// parentheses, e.g. "0.2 + 2*xi1^3 - xi1*xi2". Throws Schema on bad input.
Polynomial parse_polynomial(std::string_view text, int n_vars);

/// Canonical text form: graded term order, shortest round-trip coefficients.
std::string format_polynomial(const Polynomial& p);

/// JSON plant description:
///   { "name": ..., "parameters": [{"distribution": "uniform", "low": a, "high": b} |
///                                 {"distribution": "gaussian", "mean": m, "std": s}],
///     "matrices": {"A": [[entry, ...], ...], "Bw", "B", "C", "Dw", "Cz", "Dzw", "Dz"},
///     "vertices": [[xi1, ...], ...] (optional) }
/// Entries are numbers or polynomial strings; Cz, Dzw and Dz must be constant.
UncertainPlant parse_plant(std::string_view json_text);
UncertainPlant load_plant(const std::filesystem::path& path);

/// Canonical JSON text; parse_plant(serialize_plant(p)) reproduces p.
std::string serialize_plant(const UncertainPlant& plant);

}  // namespace pcehinf
