#include "pa/complexity.hpp"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

#include "pa/errors.hpp"
#include "pa/rng.hpp"

namespace pa {

namespace {

// Indices of the m nearest rows to row `query`, query excluded, distance ties
// broken by lower row index.
std::vector<std::size_t> nearest_rows(const Matrix& features, std::size_t query,
                                      std::size_t m) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(features.rows() - 1);
    for (std::size_t r = 0; r < features.rows(); ++r) {
        if (r == query) continue;
        dist.emplace_back(squared_distance(features.row(query), features.row(r)), r);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m), dist.end());
    std::vector<std::size_t> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = dist[i].second;
    return out;
}

void require_neighborhood(const Dataset& d, std::size_t m) {
    if (d.n_min == 0) {
        throw TooFewPoints("difficulty_index: no minority observations");
    }
    if (d.labels.size() <= m) {
        throw TooFewPoints("difficulty_index: need more than " + std::to_string(m) +
                           " observations, got " + std::to_string(d.labels.size()));
    }
}

MinorityCategory categorize(std::size_t same_class_neighbors) {
    if (same_class_neighbors >= 4) return MinorityCategory::safe;
    if (same_class_neighbors >= 2) return MinorityCategory::borderline;
    if (same_class_neighbors == 1) return MinorityCategory::rare;
    return MinorityCategory::outlier;
}

} // namespace

const char* category_name(MinorityCategory c) {
    switch (c) {
        case MinorityCategory::safe: return "safe";
        case MinorityCategory::borderline: return "borderline";
        case MinorityCategory::rare: return "rare";
        case MinorityCategory::outlier: return "outlier";
    }
    return "unknown";
}

DifficultyReport difficulty_index(const Dataset& d, std::size_t m) {
    require_neighborhood(d, std::max<std::size_t>(m, 5));

    DifficultyReport report;
    report.m = m;
    report.per_point_fractions.reserve(d.n_min);
    double total = 0.0;
    for (std::size_t r = 0; r < d.labels.size(); ++r) {
        if (d.labels[r] != ClassTag::minority) continue;
        const auto neighbors = nearest_rows(d.features, r, m);
        std::size_t majority = 0;
        for (std::size_t nn : neighbors) {
            if (d.labels[nn] == ClassTag::majority) ++majority;
        }
        const double fraction = static_cast<double>(majority) / static_cast<double>(m);
        report.per_point_fractions.push_back(fraction);
        total += fraction;
    }
    report.di = total / static_cast<double>(d.n_min);
    report.categories = categorize_minority(d);
    return report;
}

std::vector<MinorityCategory> categorize_minority(const Dataset& d) {
    constexpr std::size_t kNeighbors = 5;
    require_neighborhood(d, kNeighbors);
    std::vector<MinorityCategory> categories;
    categories.reserve(d.n_min);
    for (std::size_t r = 0; r < d.labels.size(); ++r) {
        if (d.labels[r] != ClassTag::minority) continue;
        const auto neighbors = nearest_rows(d.features, r, kNeighbors);
        std::size_t same = 0;
        for (std::size_t nn : neighbors) {
            if (d.labels[nn] == ClassTag::minority) ++same;
        }
        categories.push_back(categorize(same));
    }
    return categories;
}

Dataset inject_label_noise(const Dataset& d, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error("inject_label_noise: probability must lie in [0, 1]");
    }
    std::vector<ClassTag> labels = d.labels;
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (auto& tag : labels) {
        if (tag == ClassTag::majority && uniform(rng) < p) {
            tag = ClassTag::minority;
        }
    }
    return make_dataset(d.features, std::move(labels), d.feature_names, d.class_names);
}

std::string DifficultyReport::to_json() const {
    std::array<std::size_t, 4> counts{0, 0, 0, 0};
    for (MinorityCategory c : categories) ++counts[static_cast<std::size_t>(c)];
    nlohmann::ordered_json j;
    j["di"] = di;
    j["m"] = m;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        j["categories"][category_name(static_cast<MinorityCategory>(i))] = counts[i];
    }
    return j.dump();
}

} // namespace pa
