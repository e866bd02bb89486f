#include "gradflux/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gradflux {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t FieldFile::expected_count() const {
  const auto nodes = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1);
  return kind == "vector" ? 2 * nodes : nodes;
}

FieldFile read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  const std::string name = path.string();
  if (!in) throw InputError(name + ": cannot open field file");

  FieldFile file;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream head(line);
    std::string n_token, extra;
    head >> n_token >> file.kind;
    if (file.kind.empty()) {
      throw InputError(name + ":" + std::to_string(lineno) +
                       ": header must read '<n> <kind> [tag]'");
    }
    if (!(head >> file.tag)) file.tag = "-";
    double n_value = 0.0;
    if (!parse_double(n_token, n_value) || n_value != std::floor(n_value) ||
        n_value < 2 || n_value > 1e5 || (head >> extra)) {
      throw InputError(name + ":" + std::to_string(lineno) +
                       ": header must read '<n> <kind> [tag]' with integer n >= 2");
    }
    file.n = static_cast<int>(n_value);
    have_header = true;
  }
  if (!have_header) throw InputError(name + ": missing header");

  const std::size_t expected = file.expected_count();
  file.values.reserve(expected);
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::string token;
    while (row >> token) {
      double v = 0.0;
      if (!parse_double(token, v)) {
        throw InputError(name + ":" + std::to_string(lineno) +
                         ": not a number '" + token + "'");
      }
      if (file.values.size() == expected) {
        throw InputError(name + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(expected) + " values for n = " +
                         std::to_string(file.n) + ", found more");
      }
      file.values.push_back(v);
    }
  }
  if (file.values.size() != expected) {
    throw InputError(name + ":" + std::to_string(lineno) + ": expected " +
                     std::to_string(expected) + " values for n = " +
                     std::to_string(file.n) + ", found " +
                     std::to_string(file.values.size()));
  }
  return file;
}

void write_field_file(const FieldFile& file, const std::filesystem::path& path) {
  if (file.values.size() != file.expected_count()) {
    throw std::invalid_argument("field value count does not match n");
  }
  std::ofstream out = open_out(path);
  out << file.n << ' ' << file.kind << ' ' << (file.tag.empty() ? "-" : file.tag)
      << '\n';
  const std::size_t row = static_cast<std::size_t>(file.n) + 1;
  for (std::size_t k = 0; k < file.values.size(); ++k) {
    out << format_double(file.values[k]) << ((k + 1) % row == 0 ? '\n' : ' ');
  }
  if (!out) throw InputError(path.string() + ": write failed");
}

namespace {

void copy_block(const double* src, ScalarField& dst) {
  const int n = dst.grid().n();
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) dst.values()(i, j) = *src++;
  }
}

void append_block(const ScalarField& src, std::vector<double>& dst) {
  const int n = src.grid().n();
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) dst.push_back(src.values()(i, j));
  }
}

}  // namespace

ScalarField to_scalar_field(const FieldFile& file) {
  if (file.kind == "vector") {
    throw InputError("field of kind 'vector' where a scalar field is needed");
  }
  ScalarField f{GridSpec(file.n)};
  copy_block(file.values.data(), f);
  return f;
}

VectorField to_vector_field(const FieldFile& file) {
  if (file.kind != "vector") {
    throw InputError("field of kind '" + file.kind +
                     "' where a vector field is needed");
  }
  const GridSpec grid(file.n);
  VectorField F(grid);
  copy_block(file.values.data(), F.x);
  copy_block(file.values.data() + file.values.size() / 2, F.y);
  return F;
}

ScalarField read_field(const std::filesystem::path& path) {
  const FieldFile file = read_field_file(path);
  if (file.kind == "vector") {
    throw InputError(path.string() + ": holds a vector field, expected scalar");
  }
  return to_scalar_field(file);
}

void write_field(const ScalarField& field, const std::filesystem::path& path,
                 const std::string& kind, const std::string& tag) {
  FieldFile file;
  file.n = field.grid().n();
  file.kind = kind;
  file.tag = tag;
  append_block(field, file.values);
  write_field_file(file, path);
}

VectorField read_vector_field(const std::filesystem::path& path) {
  const FieldFile file = read_field_file(path);
  if (file.kind != "vector") {
    throw InputError(path.string() + ": holds a " + file.kind +
                     " field, expected vector");
  }
  return to_vector_field(file);
}

void write_vector_field(const VectorField& field,
                        const std::filesystem::path& path,
                        const std::string& tag) {
  FieldFile file;
  file.n = field.grid().n();
  file.kind = "vector";
  file.tag = tag;
  append_block(field.x, file.values);
  append_block(field.y, file.values);
  write_field_file(file, path);
}

// ---------------------------------------------------------------------------

Config Config::parse(std::istream& in, const std::string& source,
                     const std::vector<std::string>& allowed) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw InputError(where + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(where + ": missing key before '='");
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError(where + ": unknown key '" + key + "'");
    }
    if (cfg.values_.count(key)) {
      throw InputError(where + ": key '" + key + "' given twice");
    }
    cfg.values_[key] = {value, lineno};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path,
                    const std::vector<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open config file");
  return parse(in, path.string(), allowed);
}

void Config::fail(const std::string& key, const std::string& what) const {
  const auto it = values_.find(key);
  const std::string where =
      it == values_.end() ? source_ : source_ + ":" + std::to_string(it->second.second);
  throw InputError(where + ": key '" + key + "' " + what);
}

std::string Config::text(const std::string& key,
                         const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.first;
}

std::string Config::choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& choices) const {
  const std::string v = text(key, fallback);
  if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : "|") + c;
    fail(key, "must be one of " + list + ", got '" + v + "'");
  }
  return v;
}

double Config::real(const std::string& key, double fallback, double lo,
                    double hi) const {
  if (!has(key)) return fallback;
  double v = 0.0;
  if (!parse_double(text(key, ""), v) || !std::isfinite(v)) {
    fail(key, "must be a number, got '" + text(key, "") + "'");
  }
  if (v < lo || v > hi) {
    fail(key, "must lie in [" + format_double(lo) + ", " + format_double(hi) +
                  "], got " + format_double(v));
  }
  return v;
}

int Config::integer(const std::string& key, int fallback, int lo, int hi) const {
  if (!has(key)) return fallback;
  const std::string s = text(key, "");
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(key, "must be an integer, got '" + s + "'");
  }
  if (v < lo || v > hi) {
    fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                  "], got " + s);
  }
  return v;
}

std::vector<double> Config::reals(const std::string& key,
                                  const std::vector<double>& fallback,
                                  double lo, double hi) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& token : split_list(text(key, ""))) {
    double v = 0.0;
    if (!parse_double(token, v) || !std::isfinite(v)) {
      fail(key, "has a non-numeric entry '" + token + "'");
    }
    if (v < lo || v > hi) {
      fail(key, "entries must lie in [" + format_double(lo) + ", " +
                    format_double(hi) + "], got " + format_double(v));
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint64_t> Config::seeds(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& token : split_list(text(key, ""))) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      fail(key, "entries must be non-negative integers, got '" + token + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::filesystem::path Config::path(const std::string& key) const {
  if (!has(key) || text(key, "").empty()) {
    throw InputError(source_ + ": missing key '" + key + "'");
  }
  std::filesystem::path p = text(key, "");
  if (p.is_relative()) {
    p = std::filesystem::path(source_).parent_path() / p;
  }
  return p;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const Settings& settings,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  for (const auto& [k, v] : settings) out << "# " << k << " = " << v << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c ? "," : "") << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

std::size_t CsvTable::column(const std::string& name,
                             const std::string& source) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw InputError(source + ": no column '" + name + "'");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  const std::string name = path.string();
  if (!in) throw InputError(name + ": cannot open CSV file");
  CsvTable table;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!have_header) {
      table.columns = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw InputError(name + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(table.columns.size()) + " cells, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      if (c == "true") {
        v = 1.0;
      } else if (c == "false") {
        v = 0.0;
      } else if (!parse_double(c, v)) {
        throw InputError(name + ":" + std::to_string(lineno) +
                         ": not a number '" + c + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError(name + ": missing header");
  return table;
}

void write_certificate(std::ostream& out, const Certificate& c) {
  out << "primal = " << format_double(c.primal) << '\n'
      << "dual = " << format_double(c.dual) << '\n'
      << "gap = " << format_double(c.gap) << '\n'
      << "relative_gap = "
      << format_double(c.primal != 0.0 ? std::abs(c.gap) / std::abs(c.primal)
                                       : std::abs(c.gap))
      << '\n'
      << "el_residual_l1 = " << format_double(c.el_residual_l1) << '\n'
      << "flux_bound_violation = " << format_double(c.flux_bound_violation)
      << '\n';
}

}  // namespace gradflux
