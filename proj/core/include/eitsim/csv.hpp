#pragma once

#include <string>
#include <vector>

namespace eitsim {

// Fixed numeric formatting shared by every CSV writer: 17 significant digits,
// '.' separator, so re-runs are byte-identical.
std::string g17(double v);

std::string csv_row(const std::vector<std::string>& cells);

}  // namespace eitsim
