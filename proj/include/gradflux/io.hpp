#pragma once

#include "gradflux/duality.hpp"
#include "gradflux/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gradflux {

/// Bad input file or config value. The message is one line and names the
/// offending file, line or key.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Field files
//
//   <n> <kind> <tag>
//   then the node values, one grid row (fixed j, i = 0..n) per line.
//
// kind "vector" stores the x component block followed by the y block.

struct FieldFile {
  int n = 0;
  std::string kind = "scalar";
  std::string tag = "-";
  std::vector<double> values;

  std::size_t expected_count() const;
};

/// %.17g: enough digits for a bit-identical read back.
std::string format_double(double v);

FieldFile read_field_file(const std::filesystem::path& path);
void write_field_file(const FieldFile& file, const std::filesystem::path& path);

ScalarField read_field(const std::filesystem::path& path);
void write_field(const ScalarField& field, const std::filesystem::path& path,
                 const std::string& kind = "scalar",
                 const std::string& tag = "-");

VectorField read_vector_field(const std::filesystem::path& path);
void write_vector_field(const VectorField& field,
                        const std::filesystem::path& path,
                        const std::string& tag = "-");

ScalarField to_scalar_field(const FieldFile& file);
VectorField to_vector_field(const FieldFile& file);

// ---------------------------------------------------------------------------
// Config files: flat `key = value` lines, `#` starts a comment.

class Config {
 public:
  /// Rejects keys outside `allowed` and repeated keys.
  static Config parse(std::istream& in, const std::string& source,
                      const std::vector<std::string>& allowed);
  static Config load(const std::filesystem::path& path,
                     const std::vector<std::string>& allowed);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& source() const { return source_; }

  std::string text(const std::string& key, const std::string& fallback) const;
  /// One of `choices`.
  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& choices) const;
  double real(const std::string& key, double fallback, double lo,
              double hi) const;
  int integer(const std::string& key, int fallback, int lo, int hi) const;
  /// Comma- or space-separated list of reals in [lo, hi].
  std::vector<double> reals(const std::string& key,
                            const std::vector<double>& fallback, double lo,
                            double hi) const;
  std::vector<std::uint64_t> seeds(const std::string& key,
                                   const std::vector<std::uint64_t>& fallback) const;
  std::filesystem::path path(const std::string& key) const;  // required

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_;
  std::map<std::string, std::pair<std::string, int>> values_;  // value, line
};

// ---------------------------------------------------------------------------
// CSV

/// Resolved configuration, in output order.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// `# key = value` lines, the header line, then rows. Cells are written as
/// given; use format_double for reals.
void write_csv(std::ostream& out, const Settings& settings,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name`; throws InputError naming `source` when absent.
  std::size_t column(const std::string& name, const std::string& source) const;
};

/// Reads a numeric CSV written by write_csv. Comment lines are skipped;
/// non-numeric cells (true/false) read as 1/0.
CsvTable read_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

/// `key = value` block.
void write_certificate(std::ostream& out, const Certificate& c);

}  // namespace gradflux
