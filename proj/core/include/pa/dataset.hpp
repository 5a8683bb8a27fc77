#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pa/matrix.hpp"

namespace pa {

enum class ClassTag : std::uint8_t { majority = 0, minority = 1 };

/// Feature matrix with binary class tags. The majority tag is assigned to the
/// larger class at load time; at equal sizes the class listed second in the
/// source is tagged minority.
struct Dataset {
    Matrix features;
    std::vector<ClassTag> labels;
    std::vector<std::string> feature_names;
    std::array<std::string, 2> class_names{"majority", "minority"}; // indexed by ClassTag
    std::size_t n_min = 0;
    std::size_t n_maj = 0;

    const std::string& class_name(ClassTag t) const {
        return class_names[static_cast<std::size_t>(t)];
    }
};

/// Builds a dataset, recounting n_min / n_maj and validating shape.
Dataset make_dataset(Matrix features, std::vector<ClassTag> labels,
                     std::vector<std::string> feature_names = {},
                     std::array<std::string, 2> class_names = {"majority", "minority"});

/// Assigns majority/minority tags to raw string labels. `declared_order` is
/// the order the two label values appear in the source file; at equal class
/// sizes the value listed second becomes the minority class.
/// Returns the per-row tags and class names indexed as {majority, minority}.
std::pair<std::vector<ClassTag>, std::array<std::string, 2>>
tag_by_majority(const std::vector<std::string>& raw_labels,
                const std::vector<std::string>& declared_order);

/// Splits rows by class, preserving row order within each class.
/// Throws EmptyClass if either class has zero observations.
std::pair<Matrix, Matrix> partition(const Dataset& d); // (X_maj, X_min)

} // namespace pa
