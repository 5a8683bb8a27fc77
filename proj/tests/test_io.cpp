#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "pa/errors.hpp"
#include "pa/io.hpp"
#include "pa/resample.hpp"
#include "testutil.hpp"

using namespace pa;

namespace {

const std::filesystem::path kFixtures = PA_FIXTURE_DIR;

struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& content) {
        path = std::filesystem::temp_directory_path() /
               ("pa_io_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".tmp");
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("parse_keel reads the tiny fixture") {
    const Dataset d = parse_keel(kFixtures / "tiny.dat");
    CHECK(d.features.rows() == 4);
    CHECK(d.features.cols() == 1);
    CHECK(d.feature_names == std::vector<std::string>{"a"});
    CHECK(d.n_maj == 3);
    CHECK(d.n_min == 1);
    CHECK(d.class_name(ClassTag::majority) == "negative");
    CHECK(d.class_name(ClassTag::minority) == "positive");
    CHECK(d.features(3, 0) == 8.0);
}

TEST_CASE("parse_keel integer-encodes nominal attributes") {
    const Dataset d = parse_keel(kFixtures / "nominal.dat");
    CHECK(d.features.rows() == 12);
    CHECK(d.features.cols() == 3);
    // legs: 5 declared categories, first-appearance encoding
    std::set<double> legs_codes;
    for (std::size_t r = 0; r < d.features.rows(); ++r) legs_codes.insert(d.features(r, 0));
    for (double code : legs_codes) {
        CHECK(code >= 0.0);
        CHECK(code < 5.0);
        CHECK(code == static_cast<double>(static_cast<int>(code)));
    }
    CHECK(d.features(0, 0) == 0.0); // "4" appears first
    CHECK(d.features(1, 0) == 1.0); // then "2"
    // tail: binary nominal
    for (std::size_t r = 0; r < d.features.rows(); ++r) {
        CHECK((d.features(r, 1) == 0.0 || d.features(r, 1) == 1.0));
    }
    // milk is declared real and parsed as-is
    CHECK(d.features(2, 2) == 0.9);
    CHECK(d.n_min == 4); // mammal
}

TEST_CASE("parse_keel reports row arity mismatches with the line number") {
    const TempFile file("@relation t\n@attribute a real\n@attribute c {x, y}\n@outputs c\n"
                        "@data\n1.0, x\n2.0\n");
    try {
        parse_keel(file.path);
        FAIL("expected RowArityMismatch");
    } catch (const RowArityMismatch& e) {
        CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
}

TEST_CASE("parse_keel rejects files without a header") {
    const TempFile file("1.0, x\n2.0, y\n");
    CHECK_THROWS_AS(parse_keel(file.path), MalformedHeader);
}

TEST_CASE("parse_keel rejects missing values") {
    const TempFile file("@relation t\n@attribute a real\n@attribute c {x, y}\n@outputs c\n"
                        "@data\n1.0, x\n<null>, y\n");
    CHECK_THROWS_AS(parse_keel(file.path), Error);
}

TEST_CASE("parse_csv defaults the label to the last column") {
    const TempFile file("a,b,class\n1,2,x\n3,4,x\n5,6,y\n");
    const Dataset d = parse_csv(file.path);
    CHECK(d.features.cols() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(d.n_maj == 2);
    CHECK(d.n_min == 1);
}

TEST_CASE("parse_csv accepts an explicit label column") {
    const TempFile file("class,a,b\nx,1,2\nx,3,4\ny,5,6\n");
    CsvOptions options;
    options.label_column = "class";
    const Dataset d = parse_csv(file.path, options);
    CHECK(d.features.cols() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse_csv rejects unknown label columns") {
    const TempFile file("a,b\n1,x\n2,y\n");
    CsvOptions options;
    options.label_column = "missing";
    CHECK_THROWS_AS(parse_csv(file.path, options), MissingLabelColumn);
}

TEST_CASE("parse_csv rejects non-numeric features unless told to encode") {
    const TempFile file("a,b,class\nred,2,x\nblue,4,y\n");
    CHECK_THROWS_AS(parse_csv(file.path), NonNumericFeature);
    CsvOptions options;
    options.encode_categoricals = true;
    const Dataset d = parse_csv(file.path, options);
    CHECK(d.features(0, 0) == 0.0);
    CHECK(d.features(1, 0) == 1.0);
}

TEST_CASE("resampled output round-trips through CSV bit-exactly") {
    const Dataset d = testutil::imbalanced_blobs(20, 6, 3, 2.0, 1.0, 7);
    const auto [x_maj, x_min] = partition(d);
    PaConfig cfg;
    cfg.iterations = 10;
    cfg.seed = 3;
    const ResampleResult r = pa_resample(x_maj, x_min, cfg);

    const std::string csv =
        resampled_csv(r, {"f0", "f1", "f2"}, {"majority", "minority"}, "class");
    const TempFile file(csv);
    CsvOptions options;
    options.label_column = "class";
    options.encode_categoricals = true; // provenance column re-read as a categorical
    const Dataset back = parse_csv(file.path, options);
    REQUIRE(back.features.rows() == r.dataset.features.rows());
    for (std::size_t row = 0; row < back.features.rows(); ++row) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(back.features(row, c) == r.dataset.features(row, c));
        }
    }
}

TEST_CASE("file digest is stable and content-sensitive") {
    const TempFile a("hello");
    const TempFile b("hello");
    const TempFile c("hello!");
    CHECK(file_digest(a.path) == file_digest(b.path));
    CHECK(file_digest(a.path) != file_digest(c.path));
}

TEST_CASE("manifest serializes the resolved configuration") {
    RunManifest manifest;
    manifest.command = "resample";
    manifest.config_json = R"({"ratio": 0.1, "gamma": 0.5})";
    manifest.master_seed = 42;
    manifest.input_path = "in.csv";
    manifest.input_digest = "deadbeef";
    manifest.tool_version = "0.1.0";
    manifest.runtime_seconds = 0.25;
    const std::string json = manifest_json(manifest);
    CHECK(json.find("\"command\": \"resample\"") != std::string::npos);
    CHECK(json.find("\"ratio\": 0.1") != std::string::npos);
    CHECK(json.find("\"master_seed\": 42") != std::string::npos);
}
