#include "pa/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pa/errors.hpp"
#include "pa/preprocess.hpp"
#include "pa/rng.hpp"
#include "pa/text.hpp"

namespace pa {

namespace {

struct AttributeDecl {
    std::string name;
    bool nominal = false;
    std::vector<std::string> domain; // declared order, nominal only
};

struct RawTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<std::string>> cells; // per row
};

void check_missing(const std::string& cell, std::size_t line_no) {
    if (cell.empty() || cell == "?" || cell == "<null>") {
        throw Error("missing value at line " + std::to_string(line_no) +
                    "; missing values are not supported");
    }
}

// Distinct label values in `order`; exactly two must be observed.
std::vector<std::string> observed_label_order(const std::vector<std::string>& raw,
                                              const std::vector<std::string>& declared) {
    std::vector<std::string> order;
    if (!declared.empty()) {
        for (const auto& value : declared) {
            if (std::find(raw.begin(), raw.end(), value) != raw.end()) order.push_back(value);
        }
        for (const auto& value : raw) {
            if (std::find(order.begin(), order.end(), value) == order.end()) {
                throw Error("label value '" + value + "' not in the declared domain");
            }
        }
    } else {
        for (const auto& value : raw) {
            if (std::find(order.begin(), order.end(), value) == order.end()) {
                order.push_back(value);
            }
        }
    }
    if (order.size() != 2) {
        throw Error("label column must hold exactly two distinct values, found " +
                    std::to_string(order.size()));
    }
    return order;
}

Dataset build_dataset(const std::vector<std::vector<std::string>>& feature_cells,
                      const std::vector<bool>& encode_column,
                      const std::vector<std::string>& feature_names,
                      const std::vector<std::string>& raw_labels,
                      const std::vector<std::string>& declared_label_order,
                      std::size_t first_data_line) {
    const std::size_t n_rows = raw_labels.size();
    const std::size_t n_cols = feature_names.size();
    Matrix features(n_rows, n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (encode_column[c]) {
            const auto [codes, map] = encode_categoricals(feature_cells[c]);
            (void)map;
            for (std::size_t r = 0; r < n_rows; ++r) {
                features(r, c) = static_cast<double>(codes[r]);
            }
        } else {
            for (std::size_t r = 0; r < n_rows; ++r) {
                const auto value = parse_double(feature_cells[c][r]);
                if (!value) {
                    throw NonNumericFeature("non-numeric value '" + feature_cells[c][r] +
                                            "' in column '" + feature_names[c] + "' (line " +
                                            std::to_string(first_data_line + r) + ")");
                }
                features(r, c) = *value;
            }
        }
    }
    const auto order = observed_label_order(raw_labels, declared_label_order);
    auto [tags, class_names] = tag_by_majority(raw_labels, order);
    return make_dataset(std::move(features), std::move(tags), feature_names, class_names);
}

} // namespace

Dataset parse_keel(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw Error("cannot open '" + path.string() + "'");

    std::vector<AttributeDecl> attributes;
    std::vector<std::string> inputs;
    std::string output_name;
    bool in_data = false;
    std::size_t line_no = 0;
    std::size_t first_data_line = 0;
    std::vector<std::vector<std::string>> rows;

    std::string line;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '%') continue;

        if (!in_data && text[0] == '@') {
            const std::size_t space = text.find_first_of(" \t{");
            const std::string keyword = to_lower(text.substr(1, space - 1));
            const std::string rest = space == std::string::npos ? "" : trim(text.substr(space));
            if (keyword == "relation") {
                continue;
            } else if (keyword == "attribute") {
                AttributeDecl decl;
                const std::size_t brace = rest.find('{');
                if (brace != std::string::npos) {
                    decl.name = trim(rest.substr(0, brace));
                    const std::size_t close = rest.find('}', brace);
                    if (close == std::string::npos) {
                        throw MalformedHeader("unclosed nominal domain at line " +
                                              std::to_string(line_no));
                    }
                    decl.nominal = true;
                    for (const auto& v : split(rest.substr(brace + 1, close - brace - 1), ',')) {
                        decl.domain.push_back(trim(v));
                    }
                } else {
                    const std::size_t name_end = rest.find_first_of(" \t[");
                    decl.name = trim(rest.substr(0, name_end));
                }
                if (decl.name.empty()) {
                    throw MalformedHeader("attribute without a name at line " +
                                          std::to_string(line_no));
                }
                attributes.push_back(std::move(decl));
            } else if (keyword == "inputs") {
                for (const auto& v : split(rest, ',')) inputs.push_back(trim(v));
            } else if (keyword == "outputs" || keyword == "output") {
                output_name = trim(split(rest, ',').front());
            } else if (keyword == "data") {
                in_data = true;
                first_data_line = line_no + 1;
            } else {
                throw MalformedHeader("unknown header keyword '@" + keyword + "' at line " +
                                      std::to_string(line_no));
            }
            continue;
        }
        if (!in_data) {
            throw MalformedHeader("data row before @data at line " + std::to_string(line_no));
        }
        std::vector<std::string> cells;
        for (const auto& cell : split(text, ',')) {
            cells.push_back(trim(cell));
            check_missing(cells.back(), line_no);
        }
        if (cells.size() != attributes.size()) {
            throw RowArityMismatch("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(attributes.size()) + " values, got " +
                                   std::to_string(cells.size()));
        }
        rows.push_back(std::move(cells));
    }
    if (attributes.empty() || !in_data) {
        throw MalformedHeader("'" + path.string() + "' lacks a KEEL header");
    }
    if (rows.empty()) throw Error("'" + path.string() + "' has no data rows");

    const auto attr_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < attributes.size(); ++i) {
            if (attributes[i].name == name) return i;
        }
        throw MalformedHeader("attribute '" + name + "' referenced but never declared");
    };

    const std::size_t label_idx =
        output_name.empty() ? attributes.size() - 1 : attr_index(output_name);

    std::vector<std::size_t> feature_idx;
    if (!inputs.empty()) {
        for (const auto& name : inputs) feature_idx.push_back(attr_index(name));
    } else {
        for (std::size_t i = 0; i < attributes.size(); ++i) {
            if (i != label_idx) feature_idx.push_back(i);
        }
    }

    std::vector<std::string> feature_names;
    std::vector<bool> encode_column;
    std::vector<std::vector<std::string>> feature_cells(feature_idx.size());
    for (std::size_t c = 0; c < feature_idx.size(); ++c) {
        feature_names.push_back(attributes[feature_idx[c]].name);
        encode_column.push_back(attributes[feature_idx[c]].nominal);
        feature_cells[c].reserve(rows.size());
        for (const auto& row : rows) feature_cells[c].push_back(row[feature_idx[c]]);
    }
    std::vector<std::string> raw_labels;
    raw_labels.reserve(rows.size());
    for (const auto& row : rows) raw_labels.push_back(row[label_idx]);

    return build_dataset(feature_cells, encode_column, feature_names, raw_labels,
                         attributes[label_idx].domain, first_data_line);
}

Dataset parse_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream file(path);
    if (!file) throw Error("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(file, line)) {
        throw MalformedHeader("'" + path.string() + "' is empty; a header row is required");
    }
    std::vector<std::string> columns;
    for (const auto& name : split(trim(line), ',')) columns.push_back(trim(name));
    if (columns.empty()) throw MalformedHeader("empty header row");

    std::size_t label_idx = columns.size() - 1;
    if (!options.label_column.empty()) {
        const auto it = std::find(columns.begin(), columns.end(), options.label_column);
        if (it != columns.end()) {
            label_idx = static_cast<std::size_t>(it - columns.begin());
        } else {
            const auto index = parse_double(options.label_column);
            if (!index || *index < 0 || *index >= static_cast<double>(columns.size()) ||
                *index != std::floor(*index)) {
                throw MissingLabelColumn("no column named '" + options.label_column + "'");
            }
            label_idx = static_cast<std::size_t>(*index);
        }
    }

    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) continue;
        std::vector<std::string> cells;
        for (const auto& cell : split(text, ',')) {
            cells.push_back(trim(cell));
            check_missing(cells.back(), line_no);
        }
        if (cells.size() != columns.size()) {
            throw RowArityMismatch("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(columns.size()) + " values, got " +
                                   std::to_string(cells.size()));
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw Error("'" + path.string() + "' has no data rows");

    std::vector<std::string> feature_names;
    std::vector<std::vector<std::string>> feature_cells;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c == label_idx) continue;
        feature_names.push_back(columns[c]);
        auto& cells = feature_cells.emplace_back();
        cells.reserve(rows.size());
        for (const auto& row : rows) cells.push_back(row[c]);
    }
    std::vector<bool> encode_column(feature_names.size(), false);
    for (std::size_t c = 0; c < feature_cells.size(); ++c) {
        const bool numeric = std::all_of(feature_cells[c].begin(), feature_cells[c].end(),
                                         [](const std::string& s) {
                                             return parse_double(s).has_value();
                                         });
        if (!numeric) {
            if (!options.encode_categoricals) {
                throw NonNumericFeature("column '" + feature_names[c] +
                                        "' is not numeric; pass --encode-categoricals to "
                                        "integer-encode it");
            }
            encode_column[c] = true;
        }
    }
    std::vector<std::string> raw_labels;
    raw_labels.reserve(rows.size());
    for (const auto& row : rows) raw_labels.push_back(row[label_idx]);

    return build_dataset(feature_cells, encode_column, feature_names, raw_labels, {}, 2);
}

std::string resampled_csv(const ResampleResult& result,
                          const std::vector<std::string>& feature_names,
                          const std::array<std::string, 2>& class_names,
                          const std::string& label_column) {
    const Dataset& d = result.dataset;
    if (feature_names.size() != d.features.cols()) {
        throw DimensionMismatch("resampled_csv: feature name count differs from column count");
    }
    std::ostringstream out;
    for (const auto& name : feature_names) out << name << ',';
    out << label_column << ",provenance\n";
    for (std::size_t r = 0; r < d.features.rows(); ++r) {
        const auto row = d.features.row(r);
        for (double v : row) out << format_double(v) << ',';
        out << class_names[static_cast<std::size_t>(d.labels[r])] << ','
            << provenance_name(result.provenance[r]) << '\n';
    }
    return out.str();
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open '" + path.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (file.read(buf, sizeof(buf)) || file.gcount() > 0) {
        for (std::streamsize i = 0; i < file.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!file) break;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["config"] = nlohmann::ordered_json::parse(manifest.config_json);
    j["master_seed"] = manifest.master_seed;
    j["input"] = manifest.input_path;
    j["input_digest"] = manifest.input_digest;
    j["tool_version"] = manifest.tool_version;
    j["runtime_seconds"] = manifest.runtime_seconds;
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path.string() + "'");
    file << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream out;
    out << file.rdbuf();
    return out.str();
}

} // namespace pa
