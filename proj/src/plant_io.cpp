#include "pcehinf/plant_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pcehinf {
namespace {

using json = nlohmann::ordered_json;

class PolyParser {
 public:
  PolyParser(std::string_view text, int n_vars) : s_(text), n_(n_vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Schema, "polynomial \"" + std::string(s_) + "\" at column " +
                                std::to_string(pos_ + 1) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p = p - term();
      else
        return p;
    }
  }
  Polynomial term() {
    Polynomial p = factor();
    while (accept('*')) p = p * factor();
    return p;
  }
  Polynomial factor() {
    if (accept('-')) return -1.0 * factor();
    if (accept('+')) return factor();
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      int e = 0;
      const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), e);
      if (ec != std::errc() || e < 0) error("expected a nonnegative integer exponent");
      pos_ = ptr - s_.data();
      return base.pow(e);
    }
    return base;
  }
  Polynomial primary() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    if (accept('(')) {
      Polynomial p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (s_.substr(pos_, 2) == "xi") {
      pos_ += 2;
      int k = 0;
      const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), k);
      if (ec != std::errc()) error("expected parameter index after 'xi'");
      if (k < 1 || k > n_) error("parameter xi" + std::to_string(k) + " is not declared");
      pos_ = ptr - s_.data();
      return Polynomial::variable(n_, k - 1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) error("expected a number, parameter or '('");
    pos_ = ptr - s_.data();
    return Polynomial::constant(n_, v);
  }

  std::string_view s_;
  int n_;
  size_t pos_ = 0;
};

std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string field(const std::string& path, const std::string& msg) { return path + ": " + msg; }

PolynomialMatrix parse_matrix(const json& j, const std::string& path, int n_xi) {
  require(j.is_array() && !j.empty(), ErrorKind::DimensionMismatch,
          field(path, "matrix must be a non-empty array of rows"));
  std::vector<std::vector<Polynomial>> rows;
  for (size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    require(row.is_array() && !row.empty(), ErrorKind::DimensionMismatch,
            field(rp, "row must be a non-empty array"));
    require(row.size() == j[0].size(), ErrorKind::DimensionMismatch, field(rp, "ragged row"));
    std::vector<Polynomial> entries;
    for (size_t c = 0; c < row.size(); ++c) {
      const json& e = row[c];
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      if (e.is_number()) {
        entries.push_back(Polynomial::constant(n_xi, e.get<double>()));
      } else if (e.is_string()) {
        try {
          entries.push_back(parse_polynomial(e.get<std::string>(), n_xi));
        } catch (const Error& err) {
          fail(ErrorKind::Schema, field(ep, err.what()));
        }
      } else {
        fail(ErrorKind::Schema, field(ep, "entry must be a number or polynomial string"));
      }
    }
    rows.push_back(std::move(entries));
  }
  return PolynomialMatrix::from_entries(rows, n_xi);
}

Matrix constant_matrix(const PolynomialMatrix& m, const std::string& path) {
  require(m.is_constant(), ErrorKind::Schema, field(path, "must not depend on parameters"));
  return m.eval(std::vector<double>(m.n_xi(), 0.0));
}

json matrix_json(const PolynomialMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(format_polynomial(m.entry(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

int line_of(std::string_view text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, int n_vars) {
  return PolyParser(text, n_vars).parse();
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : p.terms()) {
    std::string mono;
    for (int d = 0; d < s.dim(); ++d) {
      if (s.exponents[d] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "xi" + std::to_string(d + 1);
      if (s.exponents[d] > 1) mono += "^" + std::to_string(s.exponents[d]);
    }
    const double mag = std::abs(c);
    std::string body;
    if (mono.empty())
      body = fmt_double(mag);
    else if (mag == 1.0)
      body = mono;
    else
      body = fmt_double(mag) + "*" + mono;
    if (first)
      out = (c < 0 ? "-" : "") + body;
    else
      out += (c < 0 ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

UncertainPlant parse_plant(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  require(j.is_object(), ErrorKind::Schema, "plant file must be a JSON object");
  UncertainPlant p;
  p.name = j.value("name", std::string());

  require(j.contains("parameters") && j["parameters"].is_array() && !j["parameters"].empty(),
          ErrorKind::Schema, "parameters: required non-empty array");
  for (size_t i = 0; i < j["parameters"].size(); ++i) {
    const json& pj = j["parameters"][i];
    const std::string path = "parameters[" + std::to_string(i) + "]";
    require(pj.is_object(), ErrorKind::Schema, field(path, "must be an object"));
    const std::string kind = pj.value("distribution", std::string("uniform"));
    try {
      if (kind == "uniform") {
        p.dist.params.push_back(
            ParamDist::uniform(pj.value("low", -1.0), pj.value("high", 1.0)));
      } else if (kind == "gaussian" || kind == "normal") {
        p.dist.params.push_back(ParamDist::gaussian(pj.value("mean", 0.0), pj.value("std", 1.0)));
      } else {
        fail(ErrorKind::UnsupportedDistribution,
             field(path, "unsupported distribution '" + kind + "'"));
      }
    } catch (const json::type_error& e) {
      fail(ErrorKind::Schema, field(path, e.what()));
    }
  }
  p.dist.validate();
  const int n = p.dist.dim();

  require(j.contains("matrices") && j["matrices"].is_object(), ErrorKind::Schema,
          "matrices: required object");
  const json& m = j["matrices"];
  for (const auto& [key, value] : m.items()) {
    static const char* known[] = {"A", "Bw", "B", "C", "Dw", "Cz", "Dzw", "Dz"};
    require(std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) != std::end(known),
            ErrorKind::Schema, field("matrices." + key, "unknown matrix"));
  }
  auto get = [&](const char* key) {
    require(m.contains(key), ErrorKind::Schema,
            field(std::string("matrices.") + key, "missing"));
    return parse_matrix(m[key], std::string("matrices.") + key, n);
  };
  p.A = get("A");
  p.Bw = get("Bw");
  p.B = get("B");
  p.C = get("C");
  p.Dw = get("Dw");
  p.Cz = constant_matrix(get("Cz"), "matrices.Cz");
  p.Dzw = constant_matrix(get("Dzw"), "matrices.Dzw");
  p.Dz = constant_matrix(get("Dz"), "matrices.Dz");

  if (j.contains("vertices")) {
    require(j["vertices"].is_array(), ErrorKind::Schema, "vertices: must be an array");
    for (const auto& v : j["vertices"]) {
      require(v.is_array(), ErrorKind::Schema, "vertices: each vertex must be an array");
      std::vector<double> pt;
      for (const auto& x : v) {
        require(x.is_number(), ErrorKind::Schema, "vertices: coordinates must be numbers");
        pt.push_back(x.get<double>());
      }
      p.vertices.push_back(std::move(pt));
    }
  }
  p.validate();
  return p;
}

UncertainPlant load_plant(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open plant file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_plant(ss.str());
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_plant(const UncertainPlant& plant) {
  json j;
  j["name"] = plant.name;
  j["parameters"] = json::array();
  for (const auto& p : plant.dist.params) {
    if (p.kind == DistKind::Uniform)
      j["parameters"].push_back({{"distribution", "uniform"}, {"low", p.lo}, {"high", p.hi}});
    else
      j["parameters"].push_back({{"distribution", "gaussian"}, {"mean", p.lo}, {"std", p.hi}});
  }
  const int n = plant.n_xi();
  json m;
  m["A"] = matrix_json(plant.A);
  m["Bw"] = matrix_json(plant.Bw);
  m["B"] = matrix_json(plant.B);
  m["C"] = matrix_json(plant.C);
  m["Dw"] = matrix_json(plant.Dw);
  m["Cz"] = matrix_json(PolynomialMatrix::constant(plant.Cz, n));
  m["Dzw"] = matrix_json(PolynomialMatrix::constant(plant.Dzw, n));
  m["Dz"] = matrix_json(PolynomialMatrix::constant(plant.Dz, n));
  j["matrices"] = std::move(m);
  if (!plant.vertices.empty()) j["vertices"] = plant.vertices;
  return j.dump(2) + "\n";
}

}  // namespace pcehinf
