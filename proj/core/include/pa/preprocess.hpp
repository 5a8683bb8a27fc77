#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pa/matrix.hpp"

namespace pa {

/// Ordered list of category strings; the index of a string is its integer code.
using CategoryMap = std::vector<std::string>;

/// Fitted standardization parameters. Constant columns record std = 1 so the
/// transform maps them to 0 instead of dividing by zero.
struct PreprocessParams {
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<CategoryMap> category_maps; // one entry per encoded source column, if any
};

/// Per-column mean and population standard deviation.
PreprocessParams fit_standardizer(const Matrix& features);

/// (x - mean) / std, column-wise.
Matrix apply_standardizer(const PreprocessParams& params, const Matrix& features);

/// Integer-encodes a string column by first-appearance order starting at 0.
std::pair<std::vector<int>, CategoryMap>
encode_categoricals(std::span<const std::string> raw_column);

} // namespace pa
