#include "pvdist/output.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace pvdist {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv(std::ostream& os, const OutputTable& table) {
    for (const auto& [key, value] : table.metadata)
        os << "# " << key << "=" << value << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_csv: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_value(row[i]);
        os << "\n";
    }
}

void write_json(std::ostream& os, const OutputTable& table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.metadata)
        meta[key] = value;
    j["metadata"] = std::move(meta);
    j["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_json: row width mismatch");
        rows.push_back(row);
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
}

}  // namespace pvdist
