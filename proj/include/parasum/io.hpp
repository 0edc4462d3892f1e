#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "parasum/cstar_module.hpp"
#include "parasum/geninv.hpp"
#include "parasum/parasum.hpp"
#include "parasum/symbolic.hpp"

namespace parasum::io {

using nlohmann::json;

/// Malformed or unreadable input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- matrices ---------------------------------------------------------------

inline json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const auto& z : m.data()) data.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw InputError("matrix JSON needs \"rows\", \"cols\" and \"data\"");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw InputError("matrix JSON: rows and cols must be nonnegative integers");
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != rows * cols)
    throw InputError("matrix JSON: data must hold rows*cols entries");
  std::vector<complex> v;
  v.reserve(data.size());
  for (const auto& e : data) {
    if (e.is_number()) {
      v.emplace_back(e.get<double>(), 0.0);
      continue;
    }
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw InputError("matrix JSON: each entry must be [re, im]");
    v.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  try {
    return ComplexMatrix(rows, cols, std::move(v));
  } catch (const std::exception& ex) {
    throw InputError(std::string("matrix JSON: ") + ex.what());
  }
}

inline std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::string format_complex(complex z) {
  std::string s = format_double(z.real());
  if (z.imag() >= 0.0 || std::isnan(z.imag())) s += "+";
  return s + format_double(z.imag()) + "i";
}

inline complex parse_complex(std::string_view s) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
  };
  s = trim(s);
  auto number = [&](std::string_view t) {
    double x = 0.0;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size())
      throw InputError("CSV: cannot parse entry \"" + std::string(s) + "\"");
    return x;
  };
  if (s.empty()) throw InputError("CSV: empty entry");
  if (s.back() != 'i') return {number(s), 0.0};
  s.remove_suffix(1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t cut = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  auto imag = [&](std::string_view t) {
    if (t == "+" || t.empty()) return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  if (cut == std::string_view::npos) return {0.0, imag(s)};
  return {number(s.substr(0, cut)), imag(s.substr(cut))};
}

inline std::string to_csv(const ComplexMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += format_complex(m(i, j));
    }
    out += "\n";
  }
  return out;
}

inline ComplexMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<complex>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<complex> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      row.push_back(parse_complex(std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError("CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
  std::vector<complex> flat;
  for (auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  try {
    return ComplexMatrix(r, c, std::move(flat));
  } catch (const std::exception& ex) {
    throw InputError(std::string("CSV: ") + ex.what());
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline bool has_csv_suffix(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": malformed JSON: " + e.what());
  }
}

/// Reads a matrix file; ".csv" selects CSV, anything else JSON.
inline ComplexMatrix read_matrix(const std::string& path) {
  const auto text = read_text(path);
  if (has_csv_suffix(path)) return matrix_from_csv(text);
  return matrix_from_json(parse_json(text, path));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

inline void write_matrix(const std::string& path, const ComplexMatrix& m) {
  write_text(path, has_csv_suffix(path) ? to_csv(m) : to_json(m).dump() + "\n");
}

// --- module operators -------------------------------------------------------

inline json to_json(const cstar::AlgebraElement& a) {
  json blocks = json::array();
  for (const auto& b : a.blocks()) blocks.push_back(to_json(b));
  return blocks;
}

inline json to_json(const cstar::ModuleOperator& t) {
  json grid = json::array();
  for (std::size_t i = 0; i < t.rank(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < t.rank(); ++j) row.push_back(to_json(t(i, j)));
    grid.push_back(std::move(row));
  }
  return {{"algebra", t.algebra().block_dims}, {"rank", t.rank()}, {"grid", std::move(grid)}};
}

inline cstar::ModuleOperator module_operator_from_json(const json& j) {
  if (!j.is_object() || !j.contains("algebra") || !j.contains("rank") || !j.contains("grid"))
    throw InputError("module JSON needs \"algebra\", \"rank\" and \"grid\"");
  try {
    cstar::FiniteCStarAlgebra alg{j["algebra"].get<std::vector<std::size_t>>()};
    const auto k = j["rank"].get<std::size_t>();
    const auto& grid = j["grid"];
    if (!grid.is_array() || grid.size() != k) throw InputError("module JSON: grid must be k x k");
    cstar::ModuleOperator t(alg, k);
    for (std::size_t i = 0; i < k; ++i) {
      if (!grid[i].is_array() || grid[i].size() != k)
        throw InputError("module JSON: grid must be k x k");
      for (std::size_t jj = 0; jj < k; ++jj) {
        std::vector<ComplexMatrix> blocks;
        for (const auto& b : grid[i][jj]) blocks.push_back(matrix_from_json(b));
        t(i, jj) = cstar::AlgebraElement(alg, std::move(blocks));
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("module JSON: ") + e.what());
  } catch (const cstar::AlgebraMismatch& e) {
    throw InputError(std::string("module JSON: ") + e.what());
  }
}

// --- reports ----------------------------------------------------------------

inline json to_json(const PenroseResiduals& r) {
  return {{"r1", r.r1}, {"r2", r.r2}, {"r3", r.r3}, {"r4", r.r4}, {"max", r.max()}};
}

inline json to_json(const SummabilityReport& r) {
  return {{"residual_left", r.residual_left}, {"residual_right", r.residual_right},
          {"threshold", r.threshold},         {"range_rowA", r.range_rowA},
          {"range_colB", r.range_colB},       {"summable", r.summable}};
}

inline json to_json(const ParallelSumResult& r) {
  return {{"value", to_json(r.value)},
          {"alt_residual_A", r.alt_residual_A},
          {"alt_residual_B", r.alt_residual_B},
          {"invariance_spread", r.invariance_spread},
          {"summability", to_json(r.summability)}};
}

inline json to_json(const NormBoundReport& r) {
  return {{"normA", r.normA},
          {"normB", r.normB},
          {"scalar_bound", r.scalar_bound},
          {"norm_parallel", r.norm_parallel},
          {"margin", r.margin()},
          {"bound_holds", r.bound_holds},
          {"triangle_residual", r.triangle_residual}};
}

// --- symbolic values ------------------------------------------------------

inline json to_json(const symbolic::ExactValue& v) {
  return {{"exact", v.str()}, {"approx", v.to_double()}};
}

inline json to_json(const symbolic::ParityDiagonal& x) {
  return {{"odd_rule", x.odd_rule.str()},
          {"even_rule", x.even_rule.str()},
          {"odd_limit", to_json(x.odd_limit())},
          {"even_limit", to_json(x.even_limit())},
          {"in_algebra", x.in_algebra()}};
}

inline json to_json(const symbolic::UnsolvabilityCertificate& c) {
  json lambdas = json::array(), failures = json::array();
  for (const auto& l : c.lambda_candidates) lambdas.push_back(to_json(l));
  for (const auto& f : c.convergence_failures)
    failures.push_back({{"lambda", to_json(f.lambda)},
                        {"parity", f.parity},
                        {"class_limit", to_json(f.class_limit)}});
  return {{"forced_candidate", to_json(c.forced_candidate)},
          {"derivation", c.derivation},
          {"lambda_candidates", std::move(lambdas)},
          {"convergence_failures", std::move(failures)},
          {"calkin_lower_bound", to_json(c.calkin_lower_bound)},
          {"valid", c.validate()}};
}

// --- table formatting -------------------------------------------------------

/// Six significant digits for human-readable output.
inline std::string sig6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string sig6(complex z) {
  if (z.imag() == 0.0) return sig6(z.real());
  std::string s = sig6(z.real());
  s += z.imag() < 0.0 ? "-" : "+";
  return s + sig6(std::abs(z.imag())) + "i";
}

inline std::string table(const ComplexMatrix& m) {
  std::vector<std::string> cells;
  std::size_t width = 1;
  for (const auto& z : m.data()) {
    cells.push_back(sig6(z));
    width = std::max(width, cells.back().size());
  }
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& c = cells[i * m.cols() + j];
      out += std::string(width - c.size() + (j ? 2 : 0), ' ') + c;
    }
    out += " ]\n";
  }
  return out;
}

/// Renders a flat JSON report as "key  value" lines, recursing into objects.
inline std::string table(const json& j, const std::string& prefix = "") {
  std::string out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object() && v.contains("rows") && v.contains("data")) {
      out += key + "\n" + table(matrix_from_json(v));
    } else if (v.is_object()) {
      out += table(v, key);
    } else if (v.is_number_float()) {
      out += key + "  " + sig6(v.get<double>()) + "\n";
    } else if (v.is_array() && !v.empty() && v.front().is_string()) {
      out += key + "\n";
      for (const auto& s : v) out += "  " + s.get<std::string>() + "\n";
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t k = 0; k < v.size(); ++k)
        out += table(v[k], key + "[" + std::to_string(k) + "]");
    } else {
      out += key + "  " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
  }
  return out;
}

}  // namespace parasum::io
