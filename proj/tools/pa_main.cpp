#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pa/complexity.hpp"
#include "pa/dataset.hpp"
#include "pa/errors.hpp"
#include "pa/evaluate.hpp"
#include "pa/io.hpp"
#include "pa/potential.hpp"
#include "pa/preprocess.hpp"
#include "pa/resample.hpp"
#include "pa/text.hpp"
#include "pa/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string input;
    std::string out_dir;
    std::string format; // keel | csv | auto
    std::string label_column;
    bool encode_categoricals = false;
    bool no_standardize = false;
    bool global_standardize = false;

    std::string method = "pa";
    pa::PaConfig pa;
    std::size_t smote_k = 5;

    std::string classifier = "knn";
    std::size_t knn_k = 3;

    std::string ratios = "0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
    std::string levels = "0.0,0.04,0.08,0.12,0.16,0.2";

    std::size_t di_m = 5;
    bool raw_features = false;

    std::size_t grid_size = 50;
    std::size_t threads = 1;
};

std::vector<double> parse_grid(const std::string& csv, const std::string& flag) {
    std::vector<double> values;
    for (const auto& part : pa::split(csv, ',')) {
        const auto value = pa::parse_double(pa::trim(part));
        if (!value) {
            throw pa::Error(flag + ": '" + pa::trim(part) + "' is not a number");
        }
        values.push_back(*value);
    }
    if (values.empty()) throw pa::Error(flag + ": empty list");
    return values;
}

pa::Dataset load_dataset(const Options& opt) {
    const fs::path path(opt.input);
    if (!fs::exists(path)) throw pa::Error("input file '" + opt.input + "' does not exist");

    std::string format = opt.format;
    if (format.empty() || format == "auto") {
        const std::string ext = pa::to_lower(path.extension().string());
        if (ext == ".dat" || ext == ".arff" || ext == ".keel") {
            format = "keel";
        } else if (ext == ".csv") {
            format = "csv";
        } else {
            const std::string head = pa::read_text_file(path);
            const std::size_t first = head.find_first_not_of(" \t\r\n");
            format = (first != std::string::npos && head[first] == '@') ? "keel" : "csv";
        }
    }
    if (format == "keel") return pa::parse_keel(path);
    if (format == "csv") {
        pa::CsvOptions csv;
        csv.label_column = opt.label_column;
        csv.encode_categoricals = opt.encode_categoricals;
        return pa::parse_csv(path, csv);
    }
    throw pa::Error("unknown format '" + format + "' (expected keel or csv)");
}

pa::Dataset standardized_copy(const pa::Dataset& d) {
    return pa::make_dataset(
        pa::apply_standardizer(pa::fit_standardizer(d.features), d.features), d.labels,
        d.feature_names, d.class_names);
}

pa::ResamplerSpec resampler_spec(const Options& opt) {
    pa::ResamplerSpec spec;
    spec.method = pa::method_from_name(opt.method);
    spec.pa = opt.pa;
    spec.smote_k = opt.smote_k;
    return spec;
}

ordered_json config_echo(const Options& opt) {
    ordered_json j;
    j["input"] = opt.input;
    j["method"] = opt.method;
    j["ratio"] = opt.pa.ratio;
    j["gamma"] = opt.pa.gamma;
    j["lambda"] = opt.pa.lambda;
    j["anchors"] = opt.pa.k_anchors;
    j["iterations"] = opt.pa.iterations;
    j["lr"] = opt.pa.lr;
    j["jitter"] = opt.pa.jitter;
    j["seed"] = opt.pa.seed;
    j["smote_k"] = opt.smote_k;
    j["classifier"] = opt.classifier;
    j["knn_k"] = opt.knn_k;
    j["label"] = opt.label_column;
    j["encode_categoricals"] = opt.encode_categoricals;
    j["no_standardize"] = opt.no_standardize;
    j["global_standardize"] = opt.global_standardize;
    j["keep_majority_at_full_ratio"] = opt.pa.keep_majority_at_full_ratio;
    j["threads"] = opt.threads;
    return j;
}

class Command {
public:
    Command(std::string name, const Options& opt) : name_(std::move(name)), opt_(opt) {
        start_ = std::chrono::steady_clock::now();
    }

    bool has_out() const { return !opt_.out_dir.empty(); }

    fs::path out_dir() const {
        if (!has_out()) throw pa::Error(name_ + ": --out is required");
        fs::create_directories(opt_.out_dir);
        return fs::path(opt_.out_dir);
    }

    // Writes a data file when --out is given, otherwise prints it.
    void emit(const std::string& filename, const std::string& content) const {
        if (has_out()) {
            pa::write_text_file(out_dir() / filename, content);
        } else {
            std::cout << content;
        }
    }

    void finish(ordered_json extra_config = ordered_json::object()) const {
        if (!has_out()) return;
        ordered_json config = config_echo(opt_);
        config.update(extra_config);
        pa::RunManifest manifest;
        manifest.command = name_;
        manifest.config_json = config.dump();
        manifest.master_seed = opt_.pa.seed;
        manifest.input_path = opt_.input;
        manifest.input_digest = pa::file_digest(opt_.input);
        manifest.tool_version = pa::kVersion;
        manifest.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        pa::write_text_file(out_dir() / "manifest.json", pa::manifest_json(manifest));
    }

private:
    std::string name_;
    const Options& opt_;
    std::chrono::steady_clock::time_point start_;
};

void run_resample(const Options& opt) {
    Command cmd("resample", opt);
    pa::Dataset d = load_dataset(opt);
    if (!opt.no_standardize) d = standardized_copy(d);
    const auto [x_maj, x_min] = pa::partition(d);

    const pa::ResamplerSpec spec = resampler_spec(opt);
    const pa::ResampleResult result =
        pa::make_resampler(spec)(x_maj, x_min, opt.pa.seed);

    cmd.emit("resampled.csv", pa::resampled_csv(result, d.feature_names, d.class_names,
                                                opt.label_column.empty() ? "class"
                                                                         : opt.label_column));
    cmd.finish();
    std::cerr << "resampled " << d.features.rows() << " rows -> "
              << result.dataset.features.rows() << " (" << result.dataset.n_min << "/"
              << result.dataset.n_maj << "), n_pao=" << result.n_pao
              << ", n_pau=" << result.n_pau << "\n";
}

std::string report_means_csv(const pa::EvaluationReport& report) {
    std::ostringstream out;
    out << "resampler,classifier,seed,precision,recall,gmean,auc,skipped_folds\n";
    out << report.resampler_desc << ',' << report.classifier_desc << ',' << report.seed << ','
        << pa::format_double(report.means.precision) << ','
        << pa::format_double(report.means.recall) << ','
        << pa::format_double(report.means.gmean) << ','
        << pa::format_double(report.means.auc) << ',' << report.skipped_folds() << '\n';
    return out.str();
}

void run_evaluate(const Options& opt) {
    Command cmd("evaluate", opt);
    const pa::Dataset d = load_dataset(opt);
    pa::CvOptions cv;
    cv.global_standardize = opt.global_standardize;
    cv.threads = opt.threads;
    const pa::EvaluationReport report =
        pa::cross_validate(d, resampler_spec(opt), pa::ClassifierSpec{opt.knn_k}, opt.pa.seed,
                           cv);
    if (cmd.has_out()) {
        cmd.emit("report.json", report.to_json() + "\n");
        cmd.emit("report.csv", report_means_csv(report));
        cmd.finish();
    } else {
        std::cout << report.to_json() << "\n";
    }
}

std::string reports_json(const std::string& key,
                         const std::vector<std::pair<double, pa::EvaluationReport>>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& [value, report] : rows) {
        ordered_json entry = ordered_json::parse(report.to_json());
        entry[key] = value;
        arr.push_back(std::move(entry));
    }
    return arr.dump(2) + "\n";
}

void run_sweep_ratio(const Options& opt) {
    Command cmd("sweep-ratio", opt);
    const pa::Dataset d = load_dataset(opt);
    const std::vector<double> ratios = parse_grid(opt.ratios, "--ratios");
    pa::CvOptions cv;
    cv.global_standardize = opt.global_standardize;
    cv.threads = opt.threads;
    const auto rows =
        pa::ratio_sweep(d, ratios, opt.pa, pa::ClassifierSpec{opt.knn_k}, opt.pa.seed, cv);
    if (cmd.has_out()) {
        cmd.emit("sweep_ratio.csv", pa::sweep_csv("ratio", rows));
        cmd.emit("sweep_ratio.json", reports_json("ratio", rows));
        cmd.finish({{"ratios", opt.ratios}});
    } else {
        std::cout << pa::sweep_csv("ratio", rows);
    }
}

void run_sweep_noise(const Options& opt) {
    Command cmd("sweep-noise", opt);
    const pa::Dataset d = load_dataset(opt);
    const std::vector<double> levels = parse_grid(opt.levels, "--levels");
    pa::CvOptions cv;
    cv.global_standardize = opt.global_standardize;
    cv.threads = opt.threads;
    const auto rows = pa::noise_sweep(d, levels, resampler_spec(opt),
                                      pa::ClassifierSpec{opt.knn_k}, opt.pa.seed, cv);
    if (cmd.has_out()) {
        cmd.emit("sweep_noise.csv", pa::sweep_csv("noise_level", rows));
        cmd.emit("sweep_noise.json", reports_json("noise_level", rows));
        cmd.finish({{"levels", opt.levels}});
    } else {
        std::cout << pa::sweep_csv("noise_level", rows);
    }
}

void run_di(const Options& opt) {
    Command cmd("di", opt);
    pa::Dataset d = load_dataset(opt);
    if (!opt.raw_features) d = standardized_copy(d);
    const pa::DifficultyReport report = pa::difficulty_index(d, opt.di_m);
    if (cmd.has_out()) {
        cmd.emit("di.json", report.to_json() + "\n");
        cmd.finish({{"m", opt.di_m}, {"raw_features", opt.raw_features}});
    } else {
        std::cout << report.to_json() << "\n";
    }
}

void run_loss_trace(const Options& opt) {
    Command cmd("loss-trace", opt);
    pa::Dataset d = load_dataset(opt);
    if (!opt.no_standardize) d = standardized_copy(d);
    const auto [x_maj, x_min] = pa::partition(d);

    std::ostringstream csv;
    csv << "stage,iteration,loss\n";
    pa::PaTraceHooks hooks;
    hooks.minority = [&](std::size_t iter, double loss) {
        csv << "minority," << iter << ',' << pa::format_double(loss) << '\n';
    };
    hooks.majority = [&](std::size_t iter, double loss) {
        csv << "majority," << iter << ',' << pa::format_double(loss) << '\n';
    };
    pa::pa_resample(x_maj, x_min, opt.pa, hooks);

    cmd.emit("loss_trace.csv", csv.str());
    cmd.finish();
}

// Raw class potentials on an n x n grid spanning the data's bounding box;
// 2-D datasets only. The grid is plottable data, not a rendering.
void run_potential_grid(const Options& opt) {
    Command cmd("potential-grid", opt);
    pa::Dataset d = load_dataset(opt);
    if (!opt.no_standardize) d = standardized_copy(d);
    if (d.features.cols() != 2) {
        throw pa::Error("potential-grid requires a 2-D dataset, got " +
                        std::to_string(d.features.cols()) + " features");
    }
    const auto [x_maj, x_min] = pa::partition(d);
    const pa::Gamma gamma(opt.pa.gamma);

    double lo[2], hi[2];
    for (std::size_t c = 0; c < 2; ++c) {
        lo[c] = hi[c] = d.features(0, c);
        for (std::size_t r = 1; r < d.features.rows(); ++r) {
            lo[c] = std::min(lo[c], d.features(r, c));
            hi[c] = std::max(hi[c], d.features(r, c));
        }
        const double margin = 0.1 * (hi[c] - lo[c] > 0 ? hi[c] - lo[c] : 1.0);
        lo[c] -= margin;
        hi[c] += margin;
    }

    std::ostringstream csv;
    csv << "x,y,potential_minority,potential_majority\n";
    const std::size_t n = std::max<std::size_t>(opt.grid_size, 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) /
                                         static_cast<double>(n - 1);
            const double y = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) /
                                         static_cast<double>(n - 1);
            const std::vector<double> point{x, y};
            csv << pa::format_double(x) << ',' << pa::format_double(y) << ','
                << pa::format_double(pa::potential(x_min, point, gamma)) << ','
                << pa::format_double(pa::potential(x_maj, point, gamma)) << '\n';
        }
    }
    cmd.emit("potential_grid.csv", csv.str());
    cmd.finish({{"grid_size", opt.grid_size}});
}

// --config <file>: flat JSON object of flag values. Flags given on the
// command line take precedence; config values replace the defaults.
void apply_config_file(int argc, char** argv, Options& opt) {
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            config_path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            config_path = arg.substr(9);
        }
    }
    if (config_path.empty()) return;

    nlohmann::json config;
    try {
        config = nlohmann::json::parse(pa::read_text_file(config_path));
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
    }
    if (!config.is_object()) {
        throw CLI::ValidationError("--config", "expected a JSON object of flag values");
    }
    for (const auto& [key, value] : config.items()) {
        try {
            if (key == "ratio") opt.pa.ratio = value.get<double>();
            else if (key == "gamma") opt.pa.gamma = value.get<double>();
            else if (key == "lambda") opt.pa.lambda = value.get<double>();
            else if (key == "anchors") opt.pa.k_anchors = value.get<std::size_t>();
            else if (key == "iterations") opt.pa.iterations = value.get<std::size_t>();
            else if (key == "lr") opt.pa.lr = value.get<double>();
            else if (key == "jitter") opt.pa.jitter = value.get<double>();
            else if (key == "seed") opt.pa.seed = value.get<std::uint64_t>();
            else if (key == "method") {
                opt.method = value.get<std::string>();
                pa::method_from_name(opt.method); // validate early: usage error, not data error
            }
            else if (key == "smote-k") opt.smote_k = value.get<std::size_t>();
            else if (key == "classifier") opt.classifier = value.get<std::string>();
            else if (key == "k") opt.knn_k = value.get<std::size_t>();
            else if (key == "label") opt.label_column = value.get<std::string>();
            else if (key == "encode-categoricals") opt.encode_categoricals = value.get<bool>();
            else if (key == "no-standardize") opt.no_standardize = value.get<bool>();
            else if (key == "global-standardize") opt.global_standardize = value.get<bool>();
            else if (key == "keep-majority-at-full-ratio")
                opt.pa.keep_majority_at_full_ratio = value.get<bool>();
            else if (key == "out") opt.out_dir = value.get<std::string>();
            else if (key == "format") opt.format = value.get<std::string>();
            else if (key == "ratios") opt.ratios = value.get<std::string>();
            else if (key == "levels") opt.levels = value.get<std::string>();
            else if (key == "m") opt.di_m = value.get<std::size_t>();
            else if (key == "raw-features") opt.raw_features = value.get<bool>();
            else if (key == "grid-size") opt.grid_size = value.get<std::size_t>();
            else if (key == "threads") opt.threads = value.get<std::size_t>();
            else throw CLI::ValidationError("--config", "unknown key '" + key + "'");
        } catch (const nlohmann::json::exception&) {
            throw CLI::ValidationError("--config", "bad value for key '" + key + "'");
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    if (const char* env_out = std::getenv("PA_OUT_DIR")) opt.out_dir = env_out;

    CLI::App app{"potential-anchoring resampling toolkit for imbalanced binary "
                 "classification"};
    app.set_version_flag("--version", pa::kVersion);
    app.require_subcommand(1);

    std::string config_path; // consumed by the pre-scan; registered for help only

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", opt.input, "dataset file (KEEL .dat or .csv)")->required();
        cmd->add_option("--out", opt.out_dir,
                        "output directory (default: $PA_OUT_DIR; stdout when unset)");
        cmd->add_option("--format", opt.format, "input format: keel, csv or auto");
        cmd->add_option("--label", opt.label_column, "label column name or 0-based index");
        cmd->add_flag("--encode-categoricals", opt.encode_categoricals,
                      "integer-encode non-numeric CSV columns");
        cmd->add_option("--seed", opt.pa.seed, "master seed");
        cmd->add_option("--threads", opt.threads, "cap on internal parallelism");
        cmd->add_option("--config", config_path, "JSON file of flag defaults");
        return cmd;
    };
    const auto add_pa = [&](CLI::App* cmd) {
        cmd->add_option("--ratio", opt.pa.ratio, "share of imbalance removed by oversampling");
        cmd->add_option("--gamma", opt.pa.gamma, "RBF spread");
        cmd->add_option("--lambda", opt.pa.lambda, "regularization coefficient");
        cmd->add_option("--anchors", opt.pa.k_anchors, "number of anchor points");
        cmd->add_option("--iterations", opt.pa.iterations, "optimization steps");
        cmd->add_option("--lr", opt.pa.lr, "learning rate");
        cmd->add_option("--jitter", opt.pa.jitter, "initialization jitter std");
        return cmd;
    };
    const auto add_method = [&](CLI::App* cmd) {
        cmd->add_option("--method", opt.method, "pa, pao, pau, smote, ros, rus or none")
            ->check(CLI::IsMember({"pa", "pao", "pau", "smote", "ros", "rus", "none"}));
        cmd->add_option("--smote-k", opt.smote_k, "SMOTE neighbor count");
        cmd->add_flag("--keep-majority-at-full-ratio", opt.pa.keep_majority_at_full_ratio,
                      "at ratio 1.0, keep original majority rows instead of prototypes");
        return cmd;
    };
    const auto add_classifier = [&](CLI::App* cmd) {
        cmd->add_option("--classifier", opt.classifier, "classifier (knn)")
            ->check(CLI::IsMember({"knn"}));
        cmd->add_option("--k", opt.knn_k, "KNN neighbor count");
        cmd->add_flag("--global-standardize", opt.global_standardize,
                      "fit the standardizer on the whole dataset instead of per fold");
        return cmd;
    };

    CLI::App* resample = add_method(add_pa(add_common(
        app.add_subcommand("resample", "resample a dataset to exact class balance"))));
    resample->add_flag("--no-standardize", opt.no_standardize,
                       "resample raw features without standardizing first");

    add_classifier(add_method(add_pa(add_common(app.add_subcommand(
        "evaluate", "5x2 cross-validated precision/recall/G-mean/AUC")))));

    CLI::App* sweep_ratio = add_classifier(add_pa(add_common(app.add_subcommand(
        "sweep-ratio", "evaluate across oversampling ratios"))));
    sweep_ratio->add_option("--ratios", opt.ratios, "comma-separated ratio grid");

    CLI::App* sweep_noise = add_classifier(add_method(add_pa(add_common(app.add_subcommand(
        "sweep-noise", "evaluate across training label-noise levels")))));
    sweep_noise->add_option("--levels", opt.levels, "comma-separated noise levels");

    CLI::App* di = add_common(
        app.add_subcommand("di", "data difficulty index and minority categories"));
    di->add_option("--m", opt.di_m, "neighbors per minority point");
    di->add_flag("--raw-features", opt.raw_features, "compute on raw (unstandardized) features");

    add_pa(add_common(app.add_subcommand(
        "loss-trace", "per-iteration optimization loss of one PA run")));

    CLI::App* grid = add_pa(add_common(app.add_subcommand(
        "potential-grid", "class potentials on a 2-D grid (plottable data)")));
    grid->add_option("--grid-size", opt.grid_size, "grid resolution per axis");
    grid->add_flag("--no-standardize", opt.no_standardize,
                   "evaluate on raw features without standardizing first");

    try {
        apply_config_file(argc, argv, opt);
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) { // unreadable/invalid --config file
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("resample")) run_resample(opt);
        else if (app.got_subcommand("evaluate")) run_evaluate(opt);
        else if (app.got_subcommand("sweep-ratio")) run_sweep_ratio(opt);
        else if (app.got_subcommand("sweep-noise")) run_sweep_noise(opt);
        else if (app.got_subcommand("di")) run_di(opt);
        else if (app.got_subcommand("loss-trace")) run_loss_trace(opt);
        else if (app.got_subcommand("potential-grid")) run_potential_grid(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
