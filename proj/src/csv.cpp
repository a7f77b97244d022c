#include "fop/csv.hpp"

#include "fop/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace fop {

void Table::add_row(Vector row) {
    if (row.size() != columns.size()) throw DimensionMismatch("Table: row width mismatch");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw Error("Table: no column named " + name);
}

Vector Table::column(const std::string& name) const {
    const std::size_t j = column_index(name);
    Vector out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return {buf, res.ptr};
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out += ',';
        out += t.columns[j];
    }
    out += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out += ',';
            out += format_double(r[j]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Table& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << to_csv(t);
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace fop
