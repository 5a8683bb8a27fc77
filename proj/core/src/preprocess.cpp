#include "pa/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "pa/errors.hpp"

namespace pa {

PreprocessParams fit_standardizer(const Matrix& features) {
    if (features.rows() == 0) {
        throw Error("fit_standardizer: no rows");
    }
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    PreprocessParams p;
    p.means.assign(d, 0.0);
    p.stds.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = features.row(r);
        for (std::size_t c = 0; c < d; ++c) p.means[c] += row[c];
    }
    for (std::size_t c = 0; c < d; ++c) p.means[c] /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = features.row(r);
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = row[c] - p.means[c];
            p.stds[c] += diff * diff;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        p.stds[c] = std::sqrt(p.stds[c] / static_cast<double>(n));
        if (p.stds[c] == 0.0) p.stds[c] = 1.0; // constant column maps to 0
    }
    return p;
}

Matrix apply_standardizer(const PreprocessParams& params, const Matrix& features) {
    if (params.means.size() != features.cols()) {
        throw DimensionMismatch("apply_standardizer: fitted on " +
                                std::to_string(params.means.size()) + " columns, got " +
                                std::to_string(features.cols()));
    }
    Matrix out = features;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < out.cols(); ++c) {
            row[c] = (row[c] - params.means[c]) / params.stds[c];
        }
    }
    return out;
}

std::pair<std::vector<int>, CategoryMap>
encode_categoricals(std::span<const std::string> raw_column) {
    if (raw_column.empty()) {
        throw Error("encode_categoricals: empty column");
    }
    CategoryMap categories;
    std::vector<int> codes;
    codes.reserve(raw_column.size());
    for (const auto& value : raw_column) {
        auto it = std::find(categories.begin(), categories.end(), value);
        if (it == categories.end()) {
            categories.push_back(value);
            codes.push_back(static_cast<int>(categories.size()) - 1);
        } else {
            codes.push_back(static_cast<int>(it - categories.begin()));
        }
    }
    return {std::move(codes), std::move(categories)};
}

} // namespace pa
