#pragma once

// Row tables and their CSV, JSON and SVG renderings.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace critsob::cli {

inline constexpr int kSchemaVersion = 1;

using Value = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    void add(std::vector<Value> row);
};

std::string to_csv(const Table& t);
/// {"schema_version", "table", "config", "columns", "rows": [{column: value}]};
/// doubles carry the same rounding as the CSV, NaN and infinities become null.
std::string to_json(const Table& t, const std::map<std::string, std::string>& config);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line chart; non-finite points break the line.
std::string svg_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

}  // namespace critsob::cli
