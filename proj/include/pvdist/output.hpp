#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace pvdist {

/// A tabulated curve (or table) plus the metadata needed to reproduce it.
/// Metadata entries are emitted in insertion-independent (sorted) order so
/// identical runs produce byte-identical files.
struct OutputTable {
    std::vector<std::string> columns;            // e.g. {"r", "value"}
    std::vector<std::vector<double>> rows;       // each row matches columns
    std::map<std::string, std::string> metadata; // command, seed, budgets, ...
};

/// CSV: '#'-prefixed metadata lines, a header line with the column names,
/// then one row per line with 12 significant digits.
void write_csv(std::ostream& os, const OutputTable& table);

/// JSON mirror of the same fields: {"metadata": {...}, "columns": [...],
/// "rows": [[...], ...]}.
void write_json(std::ostream& os, const OutputTable& table);

/// Formats a double with 12 significant digits (the CSV cell format).
std::string format_value(double v);

}  // namespace pvdist
