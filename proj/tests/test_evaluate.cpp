#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "pa/errors.hpp"
#include "pa/evaluate.hpp"
#include "pa/preprocess.hpp"
#include "pa/rng.hpp"
#include "testutil.hpp"

using namespace pa;

TEST_CASE("knn scores its own minority training row as 1 with k = 1") {
    const Dataset d = make_dataset(Matrix::from_rows({{0.0}, {5.0}, {9.0}}),
                                   {ClassTag::minority, ClassTag::majority,
                                    ClassTag::majority});
    const KnnModel model = knn_fit(d, 1);
    const std::vector<double> query{0.0};
    CHECK(knn_score(model, query) == 1.0);
    CHECK(knn_predict(model, query) == ClassTag::minority);
}

TEST_CASE("knn counts neighbors: {min, maj, maj} scores one third") {
    const Dataset d = make_dataset(Matrix::from_rows({{0.0}, {1.0}, {2.0}, {50.0}}),
                                   {ClassTag::minority, ClassTag::majority,
                                    ClassTag::majority, ClassTag::majority});
    const KnnModel model = knn_fit(d, 3);
    const std::vector<double> query{0.5};
    CHECK(knn_score(model, query) == doctest::Approx(1.0 / 3.0));
    CHECK(knn_predict(model, query) == ClassTag::majority);
}

TEST_CASE("knn scores match an exhaustive oracle on a random dataset") {
    const Dataset d = testutil::imbalanced_blobs(150, 50, 3, 1.0, 1.0, 5);
    const KnnModel model = knn_fit(d, 7);
    Rng rng(11);
    const Matrix queries = testutil::random_matrix(40, 3, rng, 1.5);
    for (std::size_t q = 0; q < queries.rows(); ++q) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t r = 0; r < d.features.rows(); ++r) {
            all.emplace_back(squared_distance(d.features.row(r), queries.row(q)), r);
        }
        std::sort(all.begin(), all.end());
        std::size_t minority = 0;
        for (std::size_t i = 0; i < 7; ++i) {
            if (d.labels[all[i].second] == ClassTag::minority) ++minority;
        }
        CHECK(knn_score(model, queries.row(q)) ==
              static_cast<double>(minority) / 7.0);
    }
}

TEST_CASE("knn_fit validates its inputs") {
    const Dataset empty = make_dataset(Matrix(0, 0), {});
    CHECK_THROWS_AS(knn_fit(empty, 1), EmptyTrainSet);
    const Dataset d = make_dataset(Matrix::from_rows({{0.0}}), {ClassTag::minority});
    CHECK_THROWS_AS(knn_fit(d, 2), Error);
}

TEST_CASE("perfect classifier scores ones across the board") {
    const std::vector<ClassTag> labels{ClassTag::minority, ClassTag::minority,
                                       ClassTag::majority, ClassTag::majority};
    const std::vector<double> scores{1.0, 0.9, 0.1, 0.0};
    const Metrics m = compute_metrics(labels, scores);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.gmean == 1.0);
    CHECK(m.auc == 1.0);
}

TEST_CASE("gmean follows sqrt(TPR * TNR)") {
    // TPR = 0.8 (4/5 minority right), TNR = 0.5 (2/4 majority right)
    const std::vector<ClassTag> labels{
        ClassTag::minority, ClassTag::minority, ClassTag::minority, ClassTag::minority,
        ClassTag::minority, ClassTag::majority, ClassTag::majority, ClassTag::majority,
        ClassTag::majority};
    const std::vector<double> scores{0.9, 0.9, 0.9, 0.9, 0.1, 0.9, 0.9, 0.1, 0.1};
    const Metrics m = compute_metrics(labels, scores);
    CHECK(m.recall == doctest::Approx(0.8));
    CHECK(m.gmean == doctest::Approx(std::sqrt(0.8 * 0.5))); // 0.6324555...
    CHECK(m.gmean * m.gmean == doctest::Approx(0.8 * 0.5).epsilon(1e-12));
}

TEST_CASE("separable scores give AUC = 1") {
    const std::vector<ClassTag> labels{ClassTag::minority, ClassTag::majority,
                                       ClassTag::majority};
    const std::vector<double> scores{0.6, 0.4, 0.2};
    CHECK(compute_metrics(labels, scores).auc == 1.0);
}

TEST_CASE("tied scores contribute one half to AUC") {
    const std::vector<ClassTag> labels{ClassTag::minority, ClassTag::majority};
    const std::vector<double> scores{0.5, 0.5};
    CHECK(compute_metrics(labels, scores).auc == doctest::Approx(0.5));
}

TEST_CASE("AUC is invariant under strictly monotone score transforms") {
    Rng rng(13);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<ClassTag> labels;
    std::vector<double> scores;
    for (int i = 0; i < 60; ++i) {
        labels.push_back(i % 3 == 0 ? ClassTag::minority : ClassTag::majority);
        scores.push_back(uniform(rng));
    }
    const double base = compute_metrics(labels, scores).auc;
    std::vector<double> transformed = scores;
    for (double& s : transformed) s = std::exp(3.0 * s) - 0.5;
    CHECK(compute_metrics(labels, transformed).auc == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("all metrics stay within [0, 1] on random inputs") {
    Rng rng(17);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ClassTag> labels{ClassTag::minority, ClassTag::majority};
        std::vector<double> scores{uniform(rng), uniform(rng)};
        std::uniform_int_distribution<int> extra(0, 30);
        for (int i = extra(rng); i > 0; --i) {
            labels.push_back(uniform(rng) < 0.3 ? ClassTag::minority : ClassTag::majority);
            scores.push_back(uniform(rng));
        }
        const Metrics m = compute_metrics(labels, scores);
        for (double v : {m.precision, m.recall, m.gmean, m.auc}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(m.gmean * m.gmean <= 1.0 + 1e-12);
    }
}

TEST_CASE("precision is zero when nothing is predicted positive") {
    const std::vector<ClassTag> labels{ClassTag::minority, ClassTag::majority};
    const std::vector<double> scores{0.2, 0.1};
    const Metrics m = compute_metrics(labels, scores);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
}

TEST_CASE("single-class folds raise instead of zeroing") {
    const std::vector<ClassTag> labels{ClassTag::majority, ClassTag::majority};
    const std::vector<double> scores{0.2, 0.1};
    CHECK_THROWS_AS(compute_metrics(labels, scores), SingleClassTestFold);
}

TEST_CASE("folds partition the dataset exactly, stratified") {
    const Dataset d = testutil::imbalanced_blobs(37, 9, 2, 3.0, 1.0, 17);
    const auto folds = make_folds(d, 99);
    REQUIRE(folds.size() == 10);
    for (std::size_t rep = 1; rep <= 5; ++rep) {
        const FoldSpec& first = folds[(rep - 1) * 2];
        const FoldSpec& second = folds[(rep - 1) * 2 + 1];
        CHECK(first.repetition == rep);
        CHECK(first.train_indices == second.test_indices);
        CHECK(first.test_indices == second.train_indices);

        std::set<std::size_t> seen;
        for (std::size_t i : first.train_indices) seen.insert(i);
        for (std::size_t i : first.test_indices) seen.insert(i);
        CHECK(seen.size() == d.labels.size());

        const auto minority_in = [&](const std::vector<std::size_t>& idx) {
            return std::count_if(idx.begin(), idx.end(), [&](std::size_t i) {
                return d.labels[i] == ClassTag::minority;
            });
        };
        CHECK(minority_in(first.train_indices) >= 1);
        CHECK(minority_in(first.test_indices) >= 1);
    }
}

TEST_CASE("identity resampler on a separable synthetic performs well") {
    const Dataset d = testutil::imbalanced_blobs(60, 20, 2, 8.0, 0.5, 21);
    ResamplerSpec spec;
    spec.method = ResamplerSpec::Method::none;
    const EvaluationReport report = cross_validate(d, spec, ClassifierSpec{3}, 7);
    CHECK(report.skipped_folds() == 0);
    CHECK(report.means.gmean > 0.95);
}

TEST_CASE("cross_validate reruns reproduce the report exactly") {
    const Dataset d = testutil::imbalanced_blobs(40, 12, 2, 2.0, 1.0, 23);
    ResamplerSpec spec;
    spec.method = ResamplerSpec::Method::pa;
    spec.pa.iterations = 10;
    const EvaluationReport a = cross_validate(d, spec, ClassifierSpec{3}, 31);
    const EvaluationReport b = cross_validate(d, spec, ClassifierSpec{3}, 31);
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("threaded evaluation matches sequential evaluation") {
    const Dataset d = testutil::imbalanced_blobs(40, 12, 2, 2.0, 1.0, 27);
    ResamplerSpec spec;
    spec.method = ResamplerSpec::Method::pa;
    spec.pa.iterations = 10;
    CvOptions sequential;
    CvOptions threaded;
    threaded.threads = 4;
    const EvaluationReport a = cross_validate(d, spec, ClassifierSpec{3}, 31, sequential);
    const EvaluationReport b = cross_validate(d, spec, ClassifierSpec{3}, 31, threaded);
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("resamplers only ever see training rows") {
    const Dataset d = testutil::imbalanced_blobs(30, 10, 2, 3.0, 1.0, 29);
    // global standardization makes row values comparable across folds
    const Matrix standardized =
        apply_standardizer(fit_standardizer(d.features), d.features);
    const auto folds = make_folds(d, 41);

    std::size_t calls = 0;
    ResampleFn instrumented = [&](const Matrix& x_maj, const Matrix& x_min,
                                  std::uint64_t seed) {
        const FoldSpec& fold = folds[calls];
        auto appears_in = [&](std::span<const double> row,
                              const std::vector<std::size_t>& indices) {
            return std::any_of(indices.begin(), indices.end(), [&](std::size_t i) {
                return std::equal(row.begin(), row.end(), standardized.row(i).begin());
            });
        };
        for (const Matrix* part : {&x_maj, &x_min}) {
            for (std::size_t r = 0; r < part->rows(); ++r) {
                CHECK(appears_in(part->row(r), fold.train_indices));
                CHECK_FALSE(appears_in(part->row(r), fold.test_indices));
            }
        }
        CHECK(x_maj.rows() + x_min.rows() == fold.train_indices.size());
        ++calls;
        ResamplerSpec spec;
        spec.method = ResamplerSpec::Method::none;
        return make_resampler(spec)(x_maj, x_min, seed);
    };

    CvOptions opt;
    opt.global_standardize = true;
    cross_validate(d, instrumented, "instrumented", ClassifierSpec{3}, 41, opt);
    CHECK(calls == 10);
}

TEST_CASE("ratio sweep emits one row per ratio with shared folds") {
    const Dataset d = testutil::imbalanced_blobs(30, 10, 2, 3.0, 1.0, 31);
    PaConfig cfg;
    cfg.iterations = 5;
    const auto two = ratio_sweep(d, {0.0, 1.0}, cfg, ClassifierSpec{3}, 7);
    CHECK(two.size() == 2);
    CHECK(two[0].first == 0.0);
    CHECK(two[1].first == 1.0);

    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    const auto eleven = ratio_sweep(d, grid, cfg, ClassifierSpec{3}, 7);
    CHECK(eleven.size() == 11);
}

TEST_CASE("noise sweep at level zero equals plain cross-validation") {
    const Dataset d = testutil::imbalanced_blobs(30, 10, 2, 3.0, 1.0, 37);
    ResamplerSpec spec;
    spec.method = ResamplerSpec::Method::pa;
    spec.pa.iterations = 5;
    const auto rows = noise_sweep(d, {0.0, 0.04, 0.08, 0.12, 0.16, 0.2}, spec,
                                  ClassifierSpec{3}, 13);
    CHECK(rows.size() == 6);
    const EvaluationReport plain = cross_validate(d, spec, ClassifierSpec{3}, 13);
    CHECK(rows[0].second.to_json() == plain.to_json());
}

TEST_CASE("rejects datasets with a single minority row") {
    const Dataset d = testutil::imbalanced_blobs(10, 1, 2, 3.0, 1.0, 41);
    ResamplerSpec spec;
    CHECK_THROWS_AS(cross_validate(d, spec, ClassifierSpec{3}, 7), TooFewPoints);
}

TEST_CASE("sweep csv has a header and one line per value") {
    const Dataset d = testutil::imbalanced_blobs(24, 8, 2, 3.0, 1.0, 43);
    PaConfig cfg;
    cfg.iterations = 5;
    const auto rows = ratio_sweep(d, {0.0, 0.5, 1.0}, cfg, ClassifierSpec{3}, 7);
    const std::string csv = sweep_csv("ratio", rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind("ratio,precision,recall,gmean,auc,skipped_folds\n", 0) == 0);
}
