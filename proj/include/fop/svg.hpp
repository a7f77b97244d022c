#pragma once

#include "fop/csv.hpp"

#include <string>
#include <vector>

namespace fop {

/// Minimal log-log line plot of the named y columns against x_column.
/// Non-positive and non-finite points are skipped.
std::string loglog_svg(const Table& t, const std::string& x_column,
                       const std::vector<std::string>& y_columns, const std::string& title);

void write_svg(const std::string& svg, const std::string& path);

}  // namespace fop
