#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pa/dataset.hpp"
#include "pa/resample.hpp"

namespace pa {

/// Parses a KEEL/ARFF-style file: @relation, @attribute (numeric or nominal
/// domain), @inputs, @outputs, then comma-separated @data rows. Nominal
/// attributes are integer-encoded by first appearance; the @outputs
/// attribute is the label. Missing values abort.
Dataset parse_keel(const std::filesystem::path& path);

struct CsvOptions {
    std::string label_column;         // name or 0-based index; empty = last column
    bool encode_categoricals = false; // integer-encode non-numeric feature columns
};

/// Parses a CSV with a header row.
Dataset parse_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Resampled dataset as CSV: feature columns, the label column, and a
/// provenance column. Reals use full round-trip precision.
std::string resampled_csv(const ResampleResult& result,
                          const std::vector<std::string>& feature_names,
                          const std::array<std::string, 2>& class_names,
                          const std::string& label_column = "class");

/// FNV-1a 64 over the file bytes, as hex.
std::string file_digest(const std::filesystem::path& path);

/// Reproducibility record written next to every data output. Re-running the
/// command it describes produces byte-identical data files.
struct RunManifest {
    std::string command;
    std::string config_json; // resolved configuration, serialized JSON object
    std::uint64_t master_seed = 0;
    std::string input_path;
    std::string input_digest;
    std::string tool_version;
    double runtime_seconds = 0.0;
};

std::string manifest_json(const RunManifest& manifest);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace pa
