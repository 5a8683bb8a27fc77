#include "pa/dataset.hpp"

#include <algorithm>

#include "pa/errors.hpp"

namespace pa {

Dataset make_dataset(Matrix features, std::vector<ClassTag> labels,
                     std::vector<std::string> feature_names,
                     std::array<std::string, 2> class_names) {
    if (features.rows() != labels.size()) {
        throw DimensionMismatch("make_dataset: " + std::to_string(features.rows()) +
                                " feature rows vs " + std::to_string(labels.size()) + " labels");
    }
    if (feature_names.empty()) {
        for (std::size_t c = 0; c < features.cols(); ++c) {
            feature_names.push_back("f" + std::to_string(c));
        }
    }
    if (feature_names.size() != features.cols()) {
        throw DimensionMismatch("make_dataset: feature name count differs from column count");
    }
    Dataset d;
    d.features = std::move(features);
    d.labels = std::move(labels);
    d.feature_names = std::move(feature_names);
    d.class_names = std::move(class_names);
    d.n_min = static_cast<std::size_t>(
        std::count(d.labels.begin(), d.labels.end(), ClassTag::minority));
    d.n_maj = d.labels.size() - d.n_min;
    return d;
}

std::pair<std::vector<ClassTag>, std::array<std::string, 2>>
tag_by_majority(const std::vector<std::string>& raw_labels,
                const std::vector<std::string>& declared_order) {
    if (declared_order.size() != 2) {
        throw Error("tag_by_majority: expected exactly two label values, got " +
                    std::to_string(declared_order.size()));
    }
    const std::string& first = declared_order[0];
    const std::string& second = declared_order[1];
    std::size_t n_first = 0;
    for (const auto& l : raw_labels) {
        if (l == first) {
            ++n_first;
        } else if (l != second) {
            throw Error("tag_by_majority: unexpected label value '" + l + "'");
        }
    }
    const std::size_t n_second = raw_labels.size() - n_first;
    // Ties go to the second-listed value as minority.
    const bool first_is_majority = n_first >= n_second;
    const std::string& maj = first_is_majority ? first : second;
    const std::string& min = first_is_majority ? second : first;

    std::vector<ClassTag> tags;
    tags.reserve(raw_labels.size());
    for (const auto& l : raw_labels) {
        tags.push_back(l == maj ? ClassTag::majority : ClassTag::minority);
    }
    return {std::move(tags), {maj, min}};
}

std::pair<Matrix, Matrix> partition(const Dataset& d) {
    if (d.n_maj == 0 || d.n_min == 0) {
        throw EmptyClass("partition: dataset has an empty class (n_maj=" +
                         std::to_string(d.n_maj) + ", n_min=" + std::to_string(d.n_min) + ")");
    }
    Matrix x_maj(0, 0);
    Matrix x_min(0, 0);
    for (std::size_t r = 0; r < d.features.rows(); ++r) {
        if (d.labels[r] == ClassTag::majority) {
            x_maj.append_row(d.features.row(r));
        } else {
            x_min.append_row(d.features.row(r));
        }
    }
    return {std::move(x_maj), std::move(x_min)};
}

} // namespace pa
