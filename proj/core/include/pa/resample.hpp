#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pa/dataset.hpp"
#include "pa/matrix.hpp"
#include "pa/optimizer.hpp"
#include "pa/rng.hpp"

namespace pa {

/// Potential anchoring parameters. Defaults follow the reference
/// configuration: ratio 0.1, gamma 0.5, lambda 10, 10 anchors, 200
/// iterations, learning rate 0.001.
struct PaConfig {
    double ratio = 0.1;        // share of the imbalance removed by oversampling
    std::size_t k_anchors = 10;
    std::size_t iterations = 200;
    double gamma = 0.5;
    double lambda = 10.0;
    double lr = 0.001;
    double jitter = 0.001;     // std of the Gaussian initialization jitter
    std::uint64_t seed = 0;
    bool keep_majority_at_full_ratio = false; // opt-in: at ratio 1, keep originals
};

enum class Provenance : std::uint8_t {
    original_minority,
    synthetic_minority,
    majority_prototype,
    original_majority,
};

const char* provenance_name(Provenance p);

/// A balanced dataset plus per-row provenance. Original minority rows are
/// always present, unmodified, and first.
struct ResampleResult {
    Dataset dataset;
    std::vector<Provenance> provenance;
    std::size_t n_pao = 0; // synthetic minority rows generated
    std::size_t n_pau = 0; // rows forming the majority side of the output
};

/// Class counts for a given over/undersampling ratio:
///   n_pao = round(ratio * (n_maj - n_min)), half-to-even
///   n_pau = n_min + n_pao
/// which balances the classes exactly even after rounding.
std::pair<std::size_t, std::size_t> pa_counts(double ratio, std::size_t n_maj,
                                              std::size_t n_min);

/// Samples n starting positions uniformly with replacement from x_class and
/// jitters them per coordinate with Gaussian noise of the given std.
PrototypeSet init_prototypes(const Matrix& x_class, std::size_t n, double jitter, ClassTag tag,
                             std::uint64_t seed);

/// Variant with externally managed streams, used by pa_resample to keep its
/// sampling and jitter sub-seeds independent.
PrototypeSet init_prototypes(const Matrix& x_class, std::size_t n, double jitter, ClassTag tag,
                             Rng& sample_rng, Rng& jitter_rng);

/// Optional per-iteration loss observers for the two optimization stages.
struct PaTraceHooks {
    LossTraceFn minority;
    LossTraceFn majority;
};

/// Potential anchoring: anchors are clustered from the combined data,
/// minority prototypes are optimized with the regularization coefficient,
/// majority prototypes with lambda = 0, and the output is the union of the
/// original minority rows, the minority prototypes and the majority
/// prototypes. All randomness derives from cfg.seed through fixed stage tags.
ResampleResult pa_resample(const Matrix& x_maj, const Matrix& x_min, const PaConfig& cfg,
                           const PaTraceHooks& hooks = {});

/// SMOTE: synthetic minority rows interpolated between a minority row and one
/// of its k nearest minority neighbors. Falls back to n_min - 1 neighbors on
/// tiny classes; throws TooFewMinority below 2 minority rows.
ResampleResult smote_resample(const Matrix& x_maj, const Matrix& x_min,
                              std::size_t k_neighbors, std::uint64_t seed);

/// Duplicates uniformly sampled minority rows until balanced.
ResampleResult random_oversample(const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed);

/// Keeps a uniform subset of majority rows of size n_min (original order).
ResampleResult random_undersample(const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed);

} // namespace pa
