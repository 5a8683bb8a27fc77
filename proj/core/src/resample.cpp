#include "pa/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pa/errors.hpp"
#include "pa/kmeans.hpp"
#include "pa/potential.hpp"

namespace pa {

namespace {

std::size_t round_half_even(double v) {
    const double floor_v = std::floor(v);
    const double frac = v - floor_v;
    const auto base = static_cast<std::size_t>(floor_v);
    if (frac > 0.5) return base + 1;
    if (frac < 0.5) return base;
    return base % 2 == 0 ? base : base + 1;
}

void require_both_classes(const Matrix& x_maj, const Matrix& x_min) {
    if (x_maj.empty() || x_min.empty()) {
        throw EmptyClass("resample: both classes must be non-empty (n_maj=" +
                         std::to_string(x_maj.rows()) + ", n_min=" +
                         std::to_string(x_min.rows()) + ")");
    }
    if (x_maj.rows() < x_min.rows()) {
        throw Error("resample: majority class smaller than minority class");
    }
}

// Rows ordered minority block first, then the majority block.
ResampleResult assemble(Matrix minority_rows, Matrix majority_rows,
                        std::vector<Provenance> provenance, std::size_t n_pao,
                        std::size_t n_pau) {
    const std::size_t n_min_out = minority_rows.rows();
    const std::size_t n_maj_out = majority_rows.rows();
    std::vector<ClassTag> labels(n_min_out, ClassTag::minority);
    labels.insert(labels.end(), n_maj_out, ClassTag::majority);

    ResampleResult result;
    result.dataset = make_dataset(Matrix::vstack(minority_rows, majority_rows),
                                  std::move(labels));
    result.provenance = std::move(provenance);
    result.n_pao = n_pao;
    result.n_pau = n_pau;
    return result;
}

// k' nearest minority neighbors of every minority row, self excluded,
// distance ties broken by lower row index.
std::vector<std::vector<std::size_t>> minority_neighbors(const Matrix& x_min, std::size_t k) {
    const std::size_t n = x_min.rows();
    std::vector<std::vector<std::size_t>> neighbors(n);
    std::vector<std::pair<double, std::size_t>> dist(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dist[w++] = {squared_distance(x_min.row(i), x_min.row(j)), j};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        neighbors[i].reserve(k);
        for (std::size_t j = 0; j < k; ++j) neighbors[i].push_back(dist[j].second);
    }
    return neighbors;
}

} // namespace

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::original_minority: return "original-minority";
        case Provenance::synthetic_minority: return "synthetic-minority";
        case Provenance::majority_prototype: return "majority-prototype";
        case Provenance::original_majority: return "original-majority";
    }
    return "unknown";
}

std::pair<std::size_t, std::size_t> pa_counts(double ratio, std::size_t n_maj,
                                              std::size_t n_min) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) {
        throw InvalidRatio("pa_counts: ratio must lie in [0, 1], got " + std::to_string(ratio));
    }
    if (n_maj < n_min) {
        throw Error("pa_counts: n_maj must be >= n_min");
    }
    const std::size_t gap = n_maj - n_min;
    const std::size_t n_pao = round_half_even(ratio * static_cast<double>(gap));
    return {n_pao, n_min + n_pao};
}

PrototypeSet init_prototypes(const Matrix& x_class, std::size_t n, double jitter, ClassTag tag,
                             Rng& sample_rng, Rng& jitter_rng) {
    if (n > 0 && x_class.empty()) {
        throw EmptySource("init_prototypes: cannot sample " + std::to_string(n) +
                          " prototypes from an empty class");
    }
    PrototypeSet protos;
    protos.class_tag = tag;
    protos.start = Matrix(n, x_class.cols());
    if (n > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, x_class.rows() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const auto src = x_class.row(pick(sample_rng));
            auto dst = protos.start.row(i);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }
    protos.current = protos.start;
    if (jitter > 0.0 && n > 0) {
        std::normal_distribution<double> noise(0.0, jitter);
        for (double& v : protos.current.data()) v += noise(jitter_rng);
    }
    return protos;
}

PrototypeSet init_prototypes(const Matrix& x_class, std::size_t n, double jitter, ClassTag tag,
                             std::uint64_t seed) {
    Rng sample_rng(sub_seed(seed, "sample"));
    Rng jitter_rng(sub_seed(seed, "jitter"));
    return init_prototypes(x_class, n, jitter, tag, sample_rng, jitter_rng);
}

ResampleResult pa_resample(const Matrix& x_maj, const Matrix& x_min, const PaConfig& cfg,
                           const PaTraceHooks& hooks) {
    require_both_classes(x_maj, x_min);
    const Gamma gamma(cfg.gamma);
    const std::size_t n_maj = x_maj.rows();
    const std::size_t n_min = x_min.rows();
    const auto [n_pao, n_pau] = pa_counts(cfg.ratio, n_maj, n_min);

    const Matrix combined = Matrix::vstack(x_maj, x_min);
    const AnchorSet anchors =
        kmeans_anchors(combined, cfg.k_anchors, sub_seed(cfg.seed, "anchors"));

    Rng sample_min_rng(sub_seed(cfg.seed, "sample-minority"));
    Rng sample_maj_rng(sub_seed(cfg.seed, "sample-majority"));
    Rng jitter_rng(sub_seed(cfg.seed, "jitter"));

    PrototypeSet p_min =
        init_prototypes(x_min, n_pao, cfg.jitter, ClassTag::minority, sample_min_rng, jitter_rng);
    const bool keep_majority = cfg.keep_majority_at_full_ratio && cfg.ratio == 1.0;
    PrototypeSet p_maj;
    if (!keep_majority) {
        p_maj = init_prototypes(x_maj, n_pau, cfg.jitter, ClassTag::majority, sample_maj_rng,
                                jitter_rng);
    }

    p_min = optimize_prototypes(x_min, anchors, std::move(p_min), gamma, cfg.lambda,
                                cfg.iterations, cfg.lr, hooks.minority);
    if (!keep_majority) {
        // the pseudocode passes lambda = 0 for the undersampling stage
        p_maj = optimize_prototypes(x_maj, anchors, std::move(p_maj), gamma, 0.0,
                                    cfg.iterations, cfg.lr, hooks.majority);
    }

    std::vector<Provenance> provenance(n_min, Provenance::original_minority);
    provenance.insert(provenance.end(), n_pao, Provenance::synthetic_minority);
    Matrix majority_rows;
    if (keep_majority) {
        majority_rows = x_maj;
        provenance.insert(provenance.end(), n_maj, Provenance::original_majority);
    } else {
        majority_rows = std::move(p_maj.current);
        provenance.insert(provenance.end(), n_pau, Provenance::majority_prototype);
    }
    return assemble(Matrix::vstack(x_min, p_min.current), std::move(majority_rows),
                    std::move(provenance), n_pao, n_pau);
}

ResampleResult smote_resample(const Matrix& x_maj, const Matrix& x_min,
                              std::size_t k_neighbors, std::uint64_t seed) {
    require_both_classes(x_maj, x_min);
    const std::size_t n_min = x_min.rows();
    if (n_min < 2) {
        throw TooFewMinority("smote_resample: need at least 2 minority rows, got " +
                             std::to_string(n_min));
    }
    const std::size_t n_syn = x_maj.rows() - n_min;
    Matrix minority_rows = x_min;
    if (n_syn > 0) {
        const std::size_t k = std::min(k_neighbors, n_min - 1);
        const auto neighbors = minority_neighbors(x_min, k);
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> pick_base(0, n_min - 1);
        std::uniform_int_distribution<std::size_t> pick_nn(0, k - 1);
        std::uniform_real_distribution<double> pick_t(0.0, 1.0);
        std::vector<double> synth(x_min.cols());
        for (std::size_t s = 0; s < n_syn; ++s) {
            const std::size_t base = pick_base(rng);
            const std::size_t nn = neighbors[base][pick_nn(rng)];
            const double t = pick_t(rng);
            const auto a = x_min.row(base);
            const auto b = x_min.row(nn);
            for (std::size_t c = 0; c < synth.size(); ++c) synth[c] = a[c] + t * (b[c] - a[c]);
            minority_rows.append_row(synth);
        }
    }
    std::vector<Provenance> provenance(n_min, Provenance::original_minority);
    provenance.insert(provenance.end(), n_syn, Provenance::synthetic_minority);
    provenance.insert(provenance.end(), x_maj.rows(), Provenance::original_majority);
    return assemble(std::move(minority_rows), x_maj, std::move(provenance), n_syn, x_maj.rows());
}

ResampleResult random_oversample(const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed) {
    require_both_classes(x_maj, x_min);
    const std::size_t n_dup = x_maj.rows() - x_min.rows();
    Matrix minority_rows = x_min;
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x_min.rows() - 1);
    for (std::size_t i = 0; i < n_dup; ++i) minority_rows.append_row(x_min.row(pick(rng)));

    std::vector<Provenance> provenance(x_min.rows(), Provenance::original_minority);
    provenance.insert(provenance.end(), n_dup, Provenance::synthetic_minority);
    provenance.insert(provenance.end(), x_maj.rows(), Provenance::original_majority);
    return assemble(std::move(minority_rows), x_maj, std::move(provenance), n_dup,
                    x_maj.rows());
}

ResampleResult random_undersample(const Matrix& x_maj, const Matrix& x_min, std::uint64_t seed) {
    require_both_classes(x_maj, x_min);
    const std::size_t n_keep = x_min.rows();
    std::vector<std::size_t> indices(x_maj.rows());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < n_keep; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, indices.size() - 1);
        std::swap(indices[i], indices[pick(rng)]);
    }
    indices.resize(n_keep);
    std::sort(indices.begin(), indices.end()); // keep original row order

    std::vector<Provenance> provenance(x_min.rows(), Provenance::original_minority);
    provenance.insert(provenance.end(), n_keep, Provenance::original_majority);
    return assemble(x_min, x_maj.select_rows(indices), std::move(provenance), 0, n_keep);
}

} // namespace pa
