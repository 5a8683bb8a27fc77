#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pa/dataset.hpp"

namespace pa {

/// Minority-point neighborhood categories by the count of same-class points
/// among the 5 nearest neighbors: 4-5 safe, 2-3 borderline, 1 rare, 0 outlier.
enum class MinorityCategory : std::uint8_t { safe, borderline, rare, outlier };

const char* category_name(MinorityCategory c);

struct DifficultyReport {
    double di = 0.0;                         // mean of per_point_fractions
    std::size_t m = 5;                       // neighbors per minority point
    std::vector<double> per_point_fractions; // majority share among m neighbors
    std::vector<MinorityCategory> categories;

    /// {"di": ..., "m": ..., "categories": {"safe": n, ...}}
    std::string to_json() const;
};

/// Mean fraction of majority points among each minority point's m nearest
/// neighbors, neighbors drawn from the whole dataset excluding the query
/// point, Euclidean distance, ties broken by lower row index. 0 = easy,
/// 1 = maximally difficult.
DifficultyReport difficulty_index(const Dataset& d, std::size_t m = 5);

/// Per-minority-row category from the 5 nearest neighbors.
std::vector<MinorityCategory> categorize_minority(const Dataset& d);

/// Flips each majority row to the minority tag independently with
/// probability p. Minority rows and the majority/minority identity
/// assignment are untouched.
Dataset inject_label_noise(const Dataset& d, double p, std::uint64_t seed);

} // namespace pa
