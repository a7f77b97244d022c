#pragma once

#include "fop/linalg.hpp"

#include <string>
#include <vector>

namespace fop {

/// Numeric table with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<Vector> rows;

    /// Throws DimensionMismatch when the row width disagrees with the header.
    void add_row(Vector row);

    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    [[nodiscard]] Vector column(const std::string& name) const;
};

/// Formats with 17 significant digits and '.' as decimal separator,
/// independent of the global locale.
std::string format_double(double x);

std::string to_csv(const Table& t);

/// Throws IoError when the file cannot be written.
void write_csv(const Table& t, const std::string& path);

}  // namespace fop
