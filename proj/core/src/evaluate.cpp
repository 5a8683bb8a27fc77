#include "pa/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pa/complexity.hpp"
#include "pa/errors.hpp"
#include "pa/preprocess.hpp"
#include "pa/rng.hpp"
#include "pa/text.hpp"

namespace pa {

namespace {

// Runs fn(0..count-1), at most `threads` concurrently. Results must be
// written into per-index slots; completion order is irrelevant.
template <typename Fn>
void run_indexed(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    const std::size_t n_workers = std::min(threads, count);
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.push_back(std::async(std::launch::async, [&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& worker : workers) worker.get();
}

std::vector<std::size_t> k_nearest(const Matrix& features, std::span<const double> x,
                                   std::size_t k) {
    std::vector<std::pair<double, std::size_t>> dist(features.rows());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        dist[r] = {squared_distance(features.row(r), x), r};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

// Average-rank Mann-Whitney statistic; tied scores contribute one half.
double rank_auc(const std::vector<ClassTag>& labels, const std::vector<double>& scores,
                std::size_t n_pos, std::size_t n_neg) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // 1-based ranks i+1..j
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == ClassTag::minority) positive_rank_sum += avg_rank;
        }
        i = j;
    }
    const double n_pos_d = static_cast<double>(n_pos);
    return (positive_rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0) /
           (n_pos_d * static_cast<double>(n_neg));
}

Dataset rows_subset(const Dataset& d, const std::vector<std::size_t>& indices) {
    std::vector<ClassTag> labels;
    labels.reserve(indices.size());
    for (std::size_t i : indices) labels.push_back(d.labels[i]);
    return make_dataset(d.features.select_rows(indices), std::move(labels), d.feature_names,
                        d.class_names);
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
    return {{"precision", m.precision},
            {"recall", m.recall},
            {"gmean", m.gmean},
            {"auc", m.auc}};
}

} // namespace

KnnModel knn_fit(const Dataset& train, std::size_t k) {
    if (train.features.rows() == 0) {
        throw EmptyTrainSet("knn_fit: empty training set");
    }
    if (k == 0 || k > train.features.rows()) {
        throw Error("knn_fit: k must lie in [1, n_train], got " + std::to_string(k));
    }
    return {train.features, train.labels, k};
}

double knn_score(const KnnModel& model, std::span<const double> x) {
    const auto neighbors = k_nearest(model.features, x, model.k);
    std::size_t minority = 0;
    for (std::size_t nn : neighbors) {
        if (model.labels[nn] == ClassTag::minority) ++minority;
    }
    return static_cast<double>(minority) / static_cast<double>(model.k);
}

ClassTag knn_predict(const KnnModel& model, std::span<const double> x) {
    return knn_score(model, x) > 0.5 ? ClassTag::minority : ClassTag::majority;
}

Metrics compute_metrics(const std::vector<ClassTag>& labels, const std::vector<double>& scores) {
    if (labels.size() != scores.size()) {
        throw DimensionMismatch("compute_metrics: label and score counts differ");
    }
    std::size_t n_pos = 0;
    for (ClassTag t : labels) {
        if (t == ClassTag::minority) ++n_pos;
    }
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw SingleClassTestFold("compute_metrics: test labels hold a single class");
    }

    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted_minority = scores[i] > 0.5;
        const bool is_minority = labels[i] == ClassTag::minority;
        if (predicted_minority && is_minority) ++tp;
        else if (predicted_minority) ++fp;
        else if (is_minority) ++fn;
        else ++tn;
    }

    Metrics m;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
    m.gmean = std::sqrt(m.recall * tnr);
    m.auc = rank_auc(labels, scores, n_pos, n_neg);
    return m;
}

std::vector<FoldSpec> make_folds(const Dataset& d, std::uint64_t seed) {
    if (d.n_min < 2) {
        throw TooFewPoints("make_folds: need at least 2 minority rows for stratified halves");
    }
    std::vector<std::size_t> minority_idx;
    std::vector<std::size_t> majority_idx;
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        (d.labels[i] == ClassTag::minority ? minority_idx : majority_idx).push_back(i);
    }

    std::vector<FoldSpec> folds;
    folds.reserve(10);
    for (std::size_t rep = 1; rep <= 5; ++rep) {
        Rng rng(sub_seed(seed, "folds", rep));
        std::shuffle(minority_idx.begin(), minority_idx.end(), rng);
        std::shuffle(majority_idx.begin(), majority_idx.end(), rng);

        std::vector<std::size_t> half_a;
        std::vector<std::size_t> half_b;
        const auto deal = [&](const std::vector<std::size_t>& idx) {
            const std::size_t cut = idx.size() / 2;
            half_a.insert(half_a.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
            half_b.insert(half_b.end(), idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
        };
        deal(minority_idx);
        deal(majority_idx);
        std::sort(half_a.begin(), half_a.end());
        std::sort(half_b.begin(), half_b.end());

        folds.push_back({rep, 1, half_a, half_b});
        folds.push_back({rep, 2, half_b, half_a});
    }
    return folds;
}

const char* method_name(ResamplerSpec::Method m) {
    switch (m) {
        case ResamplerSpec::Method::none: return "none";
        case ResamplerSpec::Method::pa: return "pa";
        case ResamplerSpec::Method::pao: return "pao";
        case ResamplerSpec::Method::pau: return "pau";
        case ResamplerSpec::Method::smote: return "smote";
        case ResamplerSpec::Method::ros: return "ros";
        case ResamplerSpec::Method::rus: return "rus";
    }
    return "unknown";
}

ResamplerSpec::Method method_from_name(const std::string& name) {
    using Method = ResamplerSpec::Method;
    const std::string lower = to_lower(name);
    if (lower == "none") return Method::none;
    if (lower == "pa") return Method::pa;
    if (lower == "pao") return Method::pao;
    if (lower == "pau") return Method::pau;
    if (lower == "smote") return Method::smote;
    if (lower == "ros") return Method::ros;
    if (lower == "rus") return Method::rus;
    throw Error("unknown resampling method '" + name + "'");
}

ResampleFn make_resampler(const ResamplerSpec& spec) {
    using Method = ResamplerSpec::Method;
    switch (spec.method) {
        case Method::none:
            return [](const Matrix& x_maj, const Matrix& x_min, std::uint64_t) {
                std::vector<ClassTag> labels(x_min.rows(), ClassTag::minority);
                labels.insert(labels.end(), x_maj.rows(), ClassTag::majority);
                ResampleResult r;
                r.dataset = make_dataset(Matrix::vstack(x_min, x_maj), std::move(labels));
                r.provenance.assign(x_min.rows(), Provenance::original_minority);
                r.provenance.insert(r.provenance.end(), x_maj.rows(),
                                    Provenance::original_majority);
                r.n_pau = x_maj.rows();
                return r;
            };
        case Method::pa:
        case Method::pao:
        case Method::pau: {
            PaConfig cfg = spec.pa;
            if (spec.method == Method::pao) cfg.ratio = 1.0;
            if (spec.method == Method::pau) cfg.ratio = 0.0;
            return [cfg](const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed) {
                PaConfig fold_cfg = cfg;
                fold_cfg.seed = seed;
                return pa_resample(x_maj, x_min, fold_cfg);
            };
        }
        case Method::smote: {
            const std::size_t k = spec.smote_k;
            return [k](const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed) {
                return smote_resample(x_maj, x_min, k, seed);
            };
        }
        case Method::ros:
            return [](const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed) {
                return random_oversample(x_maj, x_min, seed);
            };
        case Method::rus:
            return [](const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed) {
                return random_undersample(x_maj, x_min, seed);
            };
    }
    throw Error("make_resampler: unhandled method");
}

std::size_t EvaluationReport::skipped_folds() const {
    return static_cast<std::size_t>(
        std::count_if(per_fold.begin(), per_fold.end(),
                      [](const FoldResult& f) { return f.skipped; }));
}

std::string EvaluationReport::to_json() const {
    nlohmann::ordered_json j;
    j["resampler"] = resampler_desc;
    j["classifier"] = classifier_desc;
    j["seed"] = seed;
    j["means"] = metrics_json(means);
    j["skipped_folds"] = skipped_folds();
    j["per_fold"] = nlohmann::ordered_json::array();
    for (const auto& fold : per_fold) {
        nlohmann::ordered_json f;
        f["repetition"] = fold.repetition;
        f["half"] = fold.half;
        f["skipped"] = fold.skipped;
        if (fold.skipped) {
            f["skip_reason"] = fold.skip_reason;
        } else {
            f.update(metrics_json(fold.metrics));
        }
        j["per_fold"].push_back(std::move(f));
    }
    return j.dump(2);
}

EvaluationReport cross_validate(const Dataset& d, const ResampleFn& resample,
                                const std::string& resampler_desc, const ClassifierSpec& clf,
                                std::uint64_t seed, const CvOptions& opt) {
    if (d.n_min < 2) {
        throw TooFewPoints("cross_validate: need at least 2 minority rows");
    }
    const std::vector<FoldSpec> folds = make_folds(d, seed);
    PreprocessParams global_params;
    if (opt.global_standardize) global_params = fit_standardizer(d.features);

    EvaluationReport report;
    report.per_fold.resize(folds.size());
    report.resampler_desc = resampler_desc;
    report.classifier_desc = "knn(k=" + std::to_string(clf.knn_k) + ")";
    report.seed = seed;

    run_indexed(folds.size(), std::max<std::size_t>(opt.threads, 1), [&](std::size_t f) {
        const FoldSpec& fold = folds[f];
        FoldResult& out = report.per_fold[f];
        out.repetition = fold.repetition;
        out.half = fold.half;
        try {
            Dataset train = rows_subset(d, fold.train_indices);
            const Dataset test = rows_subset(d, fold.test_indices);

            if (opt.noise_level > 0.0) {
                train = inject_label_noise(train, opt.noise_level, sub_seed(seed, "noise", f));
            }

            const PreprocessParams params =
                opt.global_standardize ? global_params : fit_standardizer(train.features);
            const Matrix train_features = apply_standardizer(params, train.features);
            const Matrix test_features = apply_standardizer(params, test.features);

            const auto [x_maj, x_min] =
                partition(make_dataset(train_features, train.labels));
            const ResampleResult resampled =
                resample(x_maj, x_min, sub_seed(seed, "resample", f));

            const std::size_t k_eff =
                std::min(clf.knn_k, resampled.dataset.features.rows());
            const KnnModel model = knn_fit(resampled.dataset, k_eff);

            std::vector<double> scores(test_features.rows());
            for (std::size_t r = 0; r < test_features.rows(); ++r) {
                scores[r] = knn_score(model, test_features.row(r));
            }
            out.metrics = compute_metrics(test.labels, scores);
        } catch (const Error& e) {
            out.skipped = true;
            out.skip_reason = e.what();
        }
    });

    Metrics sums;
    std::size_t used = 0;
    for (const auto& fold : report.per_fold) {
        if (fold.skipped) continue;
        sums.precision += fold.metrics.precision;
        sums.recall += fold.metrics.recall;
        sums.gmean += fold.metrics.gmean;
        sums.auc += fold.metrics.auc;
        ++used;
    }
    if (used > 0) {
        const double n = static_cast<double>(used);
        report.means = {sums.precision / n, sums.recall / n, sums.gmean / n, sums.auc / n};
    }
    return report;
}

EvaluationReport cross_validate(const Dataset& d, const ResamplerSpec& spec,
                                const ClassifierSpec& clf, std::uint64_t seed,
                                const CvOptions& opt) {
    std::string desc = method_name(spec.method);
    if (spec.method == ResamplerSpec::Method::pa) {
        desc += "(ratio=" + format_double(spec.pa.ratio) + ")";
    }
    return cross_validate(d, make_resampler(spec), desc, clf, seed, opt);
}

std::vector<std::pair<double, EvaluationReport>>
ratio_sweep(const Dataset& d, const std::vector<double>& ratios, const PaConfig& cfg,
            const ClassifierSpec& clf, std::uint64_t seed, const CvOptions& opt) {
    std::vector<std::pair<double, EvaluationReport>> rows;
    rows.reserve(ratios.size());
    for (double ratio : ratios) {
        ResamplerSpec spec;
        spec.method = ResamplerSpec::Method::pa;
        spec.pa = cfg;
        spec.pa.ratio = ratio;
        rows.emplace_back(ratio, cross_validate(d, spec, clf, seed, opt));
    }
    return rows;
}

std::vector<std::pair<double, EvaluationReport>>
noise_sweep(const Dataset& d, const std::vector<double>& levels, const ResamplerSpec& spec,
            const ClassifierSpec& clf, std::uint64_t seed, const CvOptions& opt) {
    std::vector<std::pair<double, EvaluationReport>> rows;
    rows.reserve(levels.size());
    for (double level : levels) {
        CvOptions level_opt = opt;
        level_opt.noise_level = level;
        rows.emplace_back(level, cross_validate(d, spec, clf, seed, level_opt));
    }
    return rows;
}

std::string sweep_csv(const std::string& value_column,
                      const std::vector<std::pair<double, EvaluationReport>>& rows) {
    std::ostringstream out;
    out << value_column << ",precision,recall,gmean,auc,skipped_folds\n";
    for (const auto& [value, report] : rows) {
        out << format_double(value) << ',' << format_double(report.means.precision) << ','
            << format_double(report.means.recall) << ',' << format_double(report.means.gmean)
            << ',' << format_double(report.means.auc) << ',' << report.skipped_folds() << '\n';
    }
    return out.str();
}

} // namespace pa
