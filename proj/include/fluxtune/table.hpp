#ifndef FLUXTUNE_TABLE_HPP
#define FLUXTUNE_TABLE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fluxtune {

/// A table cell: numeric, integral, boolean or string.
using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Named-column result table with a provenance header (config hash, tool
/// version, engine) carried into every emitted file.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> provenance;

    void add_row(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

/// Parses "csv" / "json"; throws std::invalid_argument otherwise.
OutputFormat parse_format(const std::string& name);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit hash, used to fingerprint the configuration text.
std::uint64_t fnv1a64(const std::string& text);

/// RFC-4180 CSV with a header row; provenance is prepended as `# key: value`
/// comment lines.
std::string to_csv(const ResultTable& t);

/// JSON document {"provenance": {...}, "rows": [ {column: value, ...} ]}.
std::string to_json_text(const ResultTable& t);

/// Serializes in the requested format and writes to `path` via a temporary
/// file plus atomic rename (never leaves a partial file), or to stdout when
/// `path` is empty.
void write_table(const ResultTable& t, OutputFormat format,
                 const std::string& path);

} // namespace fluxtune

#endif
