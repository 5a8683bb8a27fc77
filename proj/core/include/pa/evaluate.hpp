#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pa/dataset.hpp"
#include "pa/resample.hpp"

namespace pa {

struct KnnModel {
    Matrix features;
    std::vector<ClassTag> labels;
    std::size_t k = 3;
};

/// Throws EmptyTrainSet on empty input; k must not exceed the row count.
KnnModel knn_fit(const Dataset& train, std::size_t k);

/// Fraction of the k nearest training rows tagged minority. Distance ties
/// break toward the lower row index.
double knn_score(const KnnModel& model, std::span<const double> x);

/// Minority iff score > 0.5; a 0.5 tie resolves to majority.
ClassTag knn_predict(const KnnModel& model, std::span<const double> x);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double gmean = 0.0;
    double auc = 0.0;
};

/// Minority is the positive class. Predictions derive from scores via the
/// 0.5 rule above; AUC is the Mann-Whitney rank statistic with ties counting
/// one half. Throws SingleClassTestFold when labels hold a single class.
Metrics compute_metrics(const std::vector<ClassTag>& labels, const std::vector<double>& scores);

/// One half of one repetition of 5x2 cross-validation. Halves are stratified
/// and complementary within a repetition.
struct FoldSpec {
    std::size_t repetition = 1; // 1..5
    std::size_t half = 1;       // 1..2
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Ten folds: five seeded stratified 50/50 splits, each half serving once as
/// the training set. Requires n_min >= 2.
std::vector<FoldSpec> make_folds(const Dataset& d, std::uint64_t seed);

using ResampleFn =
    std::function<ResampleResult(const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed)>;

struct ResamplerSpec {
    enum class Method { none, pa, pao, pau, smote, ros, rus };
    Method method = Method::pa;
    PaConfig pa;
    std::size_t smote_k = 5;
};

const char* method_name(ResamplerSpec::Method m);
ResamplerSpec::Method method_from_name(const std::string& name);

/// Binds a spec to a callable; the per-fold seed replaces pa.seed.
ResampleFn make_resampler(const ResamplerSpec& spec);

struct ClassifierSpec {
    std::size_t knn_k = 3;
};

struct FoldResult {
    std::size_t repetition = 1;
    std::size_t half = 1;
    Metrics metrics;
    bool skipped = false;
    std::string skip_reason;
};

struct EvaluationReport {
    std::vector<FoldResult> per_fold;
    Metrics means; // over non-skipped folds
    std::string resampler_desc;
    std::string classifier_desc;
    std::uint64_t seed = 0;

    std::size_t skipped_folds() const;
    std::string to_json() const;
};

struct CvOptions {
    bool global_standardize = false; // fit the standardizer on the whole dataset
    double noise_level = 0.0;        // train-fold majority->minority flip probability
    std::size_t threads = 1;
};

/// Per fold: fit the standardizer on the training half (unless global),
/// optionally inject label noise into the training half, resample the
/// training half only, fit the classifier, score the held-out half.
EvaluationReport cross_validate(const Dataset& d, const ResampleFn& resample,
                                const std::string& resampler_desc, const ClassifierSpec& clf,
                                std::uint64_t seed, const CvOptions& opt = {});

EvaluationReport cross_validate(const Dataset& d, const ResamplerSpec& spec,
                                const ClassifierSpec& clf, std::uint64_t seed,
                                const CvOptions& opt = {});

/// One cross-validation per ratio, folds shared across ratios.
std::vector<std::pair<double, EvaluationReport>>
ratio_sweep(const Dataset& d, const std::vector<double>& ratios, const PaConfig& cfg,
            const ClassifierSpec& clf, std::uint64_t seed, const CvOptions& opt = {});

/// One cross-validation per label-noise level (train folds only).
std::vector<std::pair<double, EvaluationReport>>
noise_sweep(const Dataset& d, const std::vector<double>& levels, const ResamplerSpec& spec,
            const ClassifierSpec& clf, std::uint64_t seed, const CvOptions& opt = {});

/// CSV table of means, one row per swept value.
std::string sweep_csv(const std::string& value_column,
                      const std::vector<std::pair<double, EvaluationReport>>& rows);

} // namespace pa
