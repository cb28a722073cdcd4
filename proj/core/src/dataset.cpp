#include "ares/dataset.hpp"

#include "ares/error.hpp"
#include "ares/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ares {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(s);
}

std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        return std::nullopt;
    }
    return value;
}

double parse_cell(std::string_view cell, std::string_view source, std::size_t line,
                  std::string_view column) {
    const auto value = parse_number(cell);
    const auto where = [&] {
        return std::string(source) + ":" + std::to_string(line) + ", column '" +
               std::string(column) + "'";
    };
    if (!value) {
        throw ParseError(where() + ": cannot parse '" + std::string(cell) + "' as a number");
    }
    if (!std::isfinite(*value)) {
        throw ParseError(where() + ": non-finite value '" + std::string(cell) + "'");
    }
    return *value;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

} // namespace

// ---------------------------------------------------------------------------
// Dataset / LabelVector

Dataset::Dataset(std::vector<std::string> columns, std::vector<double> values)
    : columns_(std::move(columns)), values_(std::move(values)) {
    if (columns_.empty()) {
        throw InvalidArgument("dataset must have at least one column");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : columns_) {
        if (!seen.insert(name).second) {
            throw InvalidArgument("duplicate column name '" + name + "'");
        }
    }
    if (values_.empty() || values_.size() % columns_.size() != 0) {
        throw DimensionError("dataset needs a positive whole number of rows; got " +
                             std::to_string(values_.size()) + " values for " +
                             std::to_string(columns_.size()) + " columns");
    }
    rows_ = values_.size() / columns_.size();
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw InvalidArgument("non-finite value at row " + std::to_string(k / cols()) +
                                  ", column '" + columns_[k % cols()] + "'");
        }
    }
}

Dataset Dataset::from_rows(std::vector<std::string> columns,
                           const std::vector<std::vector<double>>& rows) {
    std::vector<double> values;
    values.reserve(rows.size() * columns.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != columns.size()) {
            throw DimensionError("row " + std::to_string(i) + " has " +
                                 std::to_string(rows[i].size()) + " values, expected " +
                                 std::to_string(columns.size()));
        }
        values.insert(values.end(), rows[i].begin(), rows[i].end());
    }
    return Dataset(std::move(columns), std::move(values));
}

std::vector<std::string> Dataset::default_column_names(std::size_t d) {
    std::vector<std::string> names;
    names.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        names.push_back("x" + std::to_string(j));
    }
    return names;
}

std::vector<double> Dataset::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

std::optional<std::size_t> Dataset::column_index(std::string_view name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - columns_.begin());
}

Dataset Dataset::with_values(std::vector<double> values) const {
    if (values.size() != values_.size()) {
        throw DimensionError("with_values: size mismatch");
    }
    return Dataset(columns_, std::move(values));
}

LabelVector::LabelVector(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        class_count_ = 0;
        return;
    }
    const auto [lo, hi] = std::minmax_element(labels_.begin(), labels_.end());
    if (*lo < 0) {
        throw InvalidArgument("class identifiers must be non-negative");
    }
    class_count_ = *hi + 1;
    std::vector<bool> used(static_cast<std::size_t>(class_count_), false);
    for (int id : labels_) {
        used[static_cast<std::size_t>(id)] = true;
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        throw InvalidArgument("class identifiers must be contiguous from 0");
    }
}

LabelVector LabelVector::from_tokens(const std::vector<std::string>& tokens) {
    std::unordered_map<std::string, int> ids;
    std::vector<int> labels;
    labels.reserve(tokens.size());
    for (const auto& token : tokens) {
        const auto [it, inserted] = ids.try_emplace(token, static_cast<int>(ids.size()));
        labels.push_back(it->second);
    }
    return LabelVector(std::move(labels));
}

// ---------------------------------------------------------------------------
// CSV

LabeledDataset read_csv(std::istream& in, const std::optional<std::string>& label_column,
                        std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        for (auto cell : split(line, ',')) {
            header.emplace_back(cell);
        }
        break;
    }
    if (header.empty()) {
        throw ParseError(std::string(source) + ": empty file");
    }

    std::optional<std::size_t> label_at;
    if (label_column) {
        const auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end()) {
            throw ParseError(std::string(source) + ": label column '" + *label_column +
                             "' not found in header");
        }
        label_at = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::string> features;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != label_at) {
            features.push_back(header[j]);
        }
    }
    if (features.empty()) {
        throw ParseError(std::string(source) + ": no feature columns");
    }

    std::vector<double> values;
    std::vector<std::string> tokens;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " cells, found " +
                             std::to_string(cells.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_at) {
                tokens.emplace_back(cells[j]);
            } else {
                values.push_back(parse_cell(cells[j], source, line_no, header[j]));
            }
        }
    }
    if (values.empty()) {
        throw ParseError(std::string(source) + ": no data rows");
    }

    LabeledDataset out{Dataset(std::move(features), std::move(values)), std::nullopt};
    if (label_at) {
        out.labels = LabelVector::from_tokens(tokens);
    }
    return out;
}

LabeledDataset load_csv(const std::filesystem::path& path,
                        const std::optional<std::string>& label_column) {
    auto in = open_input(path);
    return read_csv(in, label_column, path.string());
}

std::string label_column_name(const Dataset& data) {
    std::string name = "label";
    while (data.column_index(name)) {
        name += "_";
    }
    return name;
}

void write_csv(std::ostream& out, const Dataset& data, const LabelVector* labels) {
    if (labels && labels->size() != data.rows()) {
        throw DimensionError("label count " + std::to_string(labels->size()) +
                             " does not match row count " + std::to_string(data.rows()));
    }
    const auto& names = data.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        out << (j ? "," : "") << names[j];
    }
    if (labels) {
        out << ',' << label_column_name(data);
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            const auto res = std::to_chars(buf, buf + sizeof buf, data(i, j));
            if (j) {
                out << ',';
            }
            out.write(buf, res.ptr - buf);
        }
        if (labels) {
            out << ',' << (*labels)[i];
        }
        out << '\n';
    }
}

void save_csv(const Dataset& data, const LabelVector* labels, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_csv(out, data, labels);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

// ---------------------------------------------------------------------------
// ARFF

namespace {

struct ArffAttribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;
};

// Splits "@attribute <name> <type>" where the name may be quoted.
std::pair<std::string, std::string_view> split_attribute(std::string_view rest,
                                                         std::string_view where) {
    rest = trim(rest);
    if (rest.empty()) {
        throw ParseError(std::string(where) + ": @attribute without a name");
    }
    std::size_t end = 0;
    if (rest.front() == '\'' || rest.front() == '"') {
        end = rest.find(rest.front(), 1);
        if (end == std::string_view::npos) {
            throw ParseError(std::string(where) + ": unterminated quoted attribute name");
        }
        ++end;
    } else {
        end = rest.find_first_of(" \t");
        if (end == std::string_view::npos) {
            throw ParseError(std::string(where) + ": @attribute without a type");
        }
    }
    return {unquote(rest.substr(0, end)), trim(rest.substr(end))};
}

} // namespace

LabeledDataset read_arff(std::istream& in, std::string_view source) {
    std::vector<ArffAttribute> attributes;
    std::string line;
    std::size_t line_no = 0;
    bool in_data = false;
    std::vector<double> values;
    std::vector<std::string> tokens;
    std::optional<std::size_t> class_at;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty() || text.front() == '%') {
            continue;
        }
        const std::string where = std::string(source) + ":" + std::to_string(line_no);

        if (!in_data) {
            if (text.front() != '@') {
                throw ParseError(where + ": malformed header line '" + std::string(text) + "'");
            }
            const auto space = text.find_first_of(" \t");
            const std::string keyword = lower(text.substr(0, space));
            const std::string_view rest =
                space == std::string_view::npos ? std::string_view{} : text.substr(space);
            if (keyword == "@relation") {
                continue;
            }
            if (keyword == "@data") {
                if (attributes.empty()) {
                    throw ParseError(where + ": @data before any @attribute");
                }
                in_data = true;
                continue;
            }
            if (keyword != "@attribute") {
                throw ParseError(where + ": unknown header keyword '" + keyword + "'");
            }
            auto [name, type] = split_attribute(rest, where);
            ArffAttribute attr{std::move(name), false, {}};
            if (!type.empty() && type.front() == '{') {
                const auto close = type.find('}');
                if (close == std::string_view::npos) {
                    throw ParseError(where + ": unterminated nominal value list");
                }
                for (auto v : split(type.substr(1, close - 1), ',')) {
                    attr.values.push_back(unquote(v));
                }
                attr.nominal = true;
                if (class_at) {
                    throw UnsupportedFeatureError(where +
                                                  ": more than one nominal attribute");
                }
                class_at = attributes.size();
            } else {
                const std::string kind = lower(type.substr(0, type.find_first_of(" \t")));
                if (kind == "string" || kind == "date" || kind == "relational") {
                    throw UnsupportedFeatureError(where + ": " + kind + " attribute '" +
                                                  attr.name + "' is not supported");
                }
                if (kind != "numeric" && kind != "real" && kind != "integer") {
                    throw ParseError(where + ": unknown attribute type '" + std::string(type) +
                                     "'");
                }
            }
            attributes.push_back(std::move(attr));
            continue;
        }

        if (text.front() == '{') {
            throw UnsupportedFeatureError(where + ": sparse ARFF rows are not supported");
        }
        const auto cells = split(text, ',');
        if (cells.size() != attributes.size()) {
            throw ParseError(where + ": expected " + std::to_string(attributes.size()) +
                             " values, found " + std::to_string(cells.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (cells[j] == "?") {
                throw UnsupportedFeatureError(where + ": missing value in attribute '" +
                                              attributes[j].name + "'");
            }
            if (attributes[j].nominal) {
                const std::string token = unquote(cells[j]);
                const auto& allowed = attributes[j].values;
                if (std::find(allowed.begin(), allowed.end(), token) == allowed.end()) {
                    throw ParseError(where + ": value '" + token +
                                     "' not declared for attribute '" + attributes[j].name + "'");
                }
                tokens.push_back(token);
            } else {
                values.push_back(parse_cell(cells[j], source, line_no, attributes[j].name));
            }
        }
    }
    if (!in_data) {
        throw ParseError(std::string(source) + ": missing @data section");
    }
    if (tokens.empty() && values.empty()) {
        throw ParseError(std::string(source) + ": no data rows");
    }

    std::vector<std::string> features;
    for (std::size_t j = 0; j < attributes.size(); ++j) {
        if (j != class_at) {
            features.push_back(attributes[j].name);
        }
    }
    if (features.empty()) {
        throw ParseError(std::string(source) + ": no numeric attributes");
    }
    LabeledDataset out{Dataset(std::move(features), std::move(values)), std::nullopt};
    if (class_at) {
        // Declaration order, not first appearance.
        const auto& declared = attributes[*class_at].values;
        std::vector<int> ids;
        ids.reserve(tokens.size());
        for (const auto& token : tokens) {
            ids.push_back(static_cast<int>(
                std::find(declared.begin(), declared.end(), token) - declared.begin()));
        }
        // Declared-but-unused classes would leave gaps; compact them preserving order.
        std::vector<int> remap(declared.size(), -1);
        for (int id : ids) {
            remap[static_cast<std::size_t>(id)] = 0;
        }
        int next = 0;
        for (auto& r : remap) {
            if (r == 0) {
                r = next++;
            }
        }
        for (auto& id : ids) {
            id = remap[static_cast<std::size_t>(id)];
        }
        out.labels = LabelVector(std::move(ids));
    }
    return out;
}

LabeledDataset load_arff(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_arff(in, path.string());
}

LabeledDataset load_dataset(const std::filesystem::path& path,
                            const std::optional<std::string>& label_column) {
    if (lower(path.extension().string()) == ".arff") {
        return load_arff(path);
    }
    return load_csv(path, label_column);
}

// ---------------------------------------------------------------------------
// Generators

LabeledDataset generate_three_cluster_1d(std::uint64_t seed,
                                         std::array<std::size_t, 3> n_per_cluster) {
    struct Component {
        double mean;
        double sd;
    };
    // Two tight components on the left, one broad low-density component on the right.
    constexpr std::array<Component, 3> components{{{2.0, 0.2}, {4.0, 0.2}, {9.0, 1.0}}};

    Rng rng(seed);
    std::vector<double> values;
    std::vector<int> labels;
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (n_per_cluster[c] == 0) {
            throw InvalidArgument("generate_three_cluster_1d: cluster sizes must be positive");
        }
        for (std::size_t i = 0; i < n_per_cluster[c]; ++i) {
            double x = 0.0;
            do {
                x = rng.normal(components[c].mean, components[c].sd);
            } while (x <= 0.0);
            values.push_back(x);
            labels.push_back(static_cast<int>(c));
        }
    }
    return {Dataset({"x"}, std::move(values)), LabelVector(std::move(labels))};
}

LabeledDataset generate_blobs(std::uint64_t seed, std::size_t k, std::size_t n_per_blob,
                              std::size_t d, double separation, double sd) {
    if (k == 0 || n_per_blob == 0 || d == 0 || !(separation > 0.0) || !(sd >= 0.0)) {
        throw InvalidArgument("generate_blobs: k, n_per_blob, d, separation must be positive");
    }
    Rng rng(seed);
    // Centre i sits at i*separation on the first axis, so any two centres are
    // at least `separation` apart whatever the other coordinates are.
    std::vector<std::vector<double>> centres(k, std::vector<double>(d));
    for (std::size_t c = 0; c < k; ++c) {
        centres[c][0] = static_cast<double>(c) * separation;
        for (std::size_t j = 1; j < d; ++j) {
            centres[c][j] = rng.uniform() * separation;
        }
    }
    std::vector<double> values;
    values.reserve(k * n_per_blob * d);
    std::vector<int> labels;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < n_per_blob; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                values.push_back(rng.normal(centres[c][j], sd));
            }
            labels.push_back(static_cast<int>(c));
        }
    }
    return {Dataset(Dataset::default_column_names(d), std::move(values)),
            LabelVector(std::move(labels))};
}

LabeledDataset generate_two_crescents(std::uint64_t seed) {
    struct Crescent {
        std::size_t count;
        double cx, cy, radius, half_width;
        double angle_from, angle_to; // fractions of pi
    };
    constexpr std::array<Crescent, 2> crescents{{
        {276, 17.0, 19.0, 16.0, 2.0, 1.12, 1.88},
        {97, 29.0, 12.0, 14.0, 2.5, 0.1, 0.9},
    }};
    Rng rng(seed);
    std::vector<double> values;
    std::vector<int> labels;
    for (std::size_t c = 0; c < crescents.size(); ++c) {
        const auto& cr = crescents[c];
        for (std::size_t i = 0; i < cr.count; ++i) {
            double x = 0.0;
            double y = 0.0;
            // Rejection keeps every coordinate >= 0.5 so log and inverse scalings stay tame.
            do {
                const double angle = std::numbers::pi *
                                     (cr.angle_from + (cr.angle_to - cr.angle_from) * rng.uniform());
                const double r = cr.radius + cr.half_width * (2.0 * rng.uniform() - 1.0);
                // Two decimals, like the classic hand-digitised shape sets.
                x = std::round((cr.cx + r * std::cos(angle)) * 100.0) / 100.0;
                y = std::round((cr.cy + r * std::sin(angle)) * 100.0) / 100.0;
            } while (x < 0.5 || y < 0.5);
            values.push_back(x);
            values.push_back(y);
            labels.push_back(static_cast<int>(c));
        }
    }
    return {Dataset({"x", "y"}, std::move(values)), LabelVector(std::move(labels))};
}

} // namespace ares
