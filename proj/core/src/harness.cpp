#include "ares/harness.hpp"

#include "ares/error.hpp"
#include "ares/eval.hpp"
#include "ares/rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>
#include <tuple>

namespace ares {

namespace {

// Above this many rows the O(n^2) distance cache is skipped.
constexpr std::size_t kDistanceCacheLimit = 4000;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <typename T>
T parse_scalar(std::string_view text, std::string_view key) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("config key '" + std::string(key) + "': cannot parse '" +
                         std::string(text) + "'");
    }
    return value;
}

// Rounds to 12 significant digits so "0.01:0.5:0.01" reproduces i / 100.0 exactly.
double tidy(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key) {
    std::vector<T> out;
    for (auto item : split_list(text)) {
        const auto first = item.find(':');
        if (first == std::string_view::npos) {
            out.push_back(parse_scalar<T>(item, key));
            continue;
        }
        const auto second = item.find(':', first + 1);
        if (second == std::string_view::npos) {
            throw ParseError("config key '" + std::string(key) +
                             "': range must be start:stop:step");
        }
        const auto start = parse_scalar<double>(trim(item.substr(0, first)), key);
        const auto stop = parse_scalar<double>(trim(item.substr(first + 1, second - first - 1)), key);
        const auto step = parse_scalar<double>(trim(item.substr(second + 1)), key);
        if (!(step > 0.0) || stop < start) {
            throw ParseError("config key '" + std::string(key) + "': invalid range");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(static_cast<T>(tidy(start + static_cast<double>(i) * step)));
        }
    }
    if (out.empty()) {
        throw ParseError("config key '" + std::string(key) + "': empty list");
    }
    return out;
}

template <typename Enum, typename Parser>
std::vector<Enum> parse_enum_list(std::string_view text, Parser parse) {
    std::vector<Enum> out;
    for (auto item : split_list(text)) {
        out.push_back(parse(item));
    }
    if (out.empty()) {
        throw ParseError("empty list '" + std::string(text) + "'");
    }
    return out;
}

void require_non_empty(bool empty, std::string_view what) {
    if (empty) {
        throw InvalidArgument("grid list '" + std::string(what) + "' is empty");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(TransformKind kind) {
    switch (kind) {
    case TransformKind::minmax: return "minmax";
    case TransformKind::rank: return "rank";
    case TransformKind::ares: return "ares";
    }
    return "?";
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::kmeans: return "kmeans";
    case Algorithm::dbscan: return "dbscan";
    case Algorithm::dp: return "dp";
    }
    return "?";
}

TransformKind parse_transform(std::string_view name) {
    for (auto kind : {TransformKind::minmax, TransformKind::rank, TransformKind::ares}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw InvalidArgument("unknown transform '" + std::string(name) + "'");
}

Algorithm parse_algorithm(std::string_view name) {
    for (auto algo : {Algorithm::kmeans, Algorithm::dbscan, Algorithm::dp}) {
        if (to_string(algo) == name) {
            return algo;
        }
    }
    throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

std::vector<double> default_eps_grid() {
    std::vector<double> eps;
    for (int i = 1; i <= 50; ++i) {
        eps.push_back(i / 100.0);
    }
    return eps;
}

std::string GridPoint::describe() const {
    std::string out;
    auto add = [&](std::string_view key, const std::string& value) {
        if (!out.empty()) {
            out += ';';
        }
        out += key;
        out += '=';
        out += value;
    };
    if (psi) add("psi", std::to_string(*psi));
    if (t) add("t", std::to_string(*t));
    if (eps) add("eps", format_number(*eps));
    if (min_pts) add("min_pts", std::to_string(*min_pts));
    if (k) add("k", std::to_string(*k));
    return out;
}

// ---------------------------------------------------------------------------
// Search

SearchOutcome grid_search(const Dataset& data, const LabelVector& truth, Algorithm algorithm,
                          const SearchGrid& grid, std::size_t k, std::uint64_t seed) {
    if (truth.size() != data.rows()) {
        throw DimensionError("grid_search: " + std::to_string(truth.size()) + " labels for " +
                             std::to_string(data.rows()) + " rows");
    }
    SearchOutcome outcome;
    bool first = true;
    auto consider = [&](const GridPoint& point, const ClusteringResult& result) {
        const double f1 = f1_measure(truth, result);
        ++outcome.evaluations;
        if (first || f1 > outcome.best_f1) {
            outcome.best = point;
            outcome.best_f1 = f1;
            first = false;
        }
    };

    std::unique_ptr<DistanceMatrix> cache;
    if (algorithm != Algorithm::kmeans && data.rows() <= kDistanceCacheLimit) {
        cache = std::make_unique<DistanceMatrix>(data);
    }

    switch (algorithm) {
    case Algorithm::kmeans: {
        GridPoint point;
        point.k = k;
        KMeansParams params{k, grid.kmeans_max_iter, grid.kmeans_restarts, derive_seed(seed, 0)};
        consider(point, kmeans_run(data, params));
        break;
    }
    case Algorithm::dbscan:
        require_non_empty(grid.eps.empty(), "eps");
        require_non_empty(grid.min_pts.empty(), "min_pts");
        for (double eps : grid.eps) {
            for (std::size_t min_pts : grid.min_pts) {
                GridPoint point;
                point.eps = eps;
                point.min_pts = min_pts;
                consider(point, dbscan_run(data, DbscanParams{eps, min_pts}, cache.get()));
            }
        }
        break;
    case Algorithm::dp:
        require_non_empty(grid.eps.empty(), "eps");
        for (double eps : grid.eps) {
            GridPoint point;
            point.eps = eps;
            point.k = k;
            consider(point, dp_run(data, DpParams{k, eps}, cache.get()));
        }
        break;
    }
    return outcome;
}

SearchOutcome search_with_transform(const Dataset& scaled, const LabelVector& truth,
                                    TransformKind transform, Algorithm algorithm,
                                    const SearchGrid& grid, std::size_t k, std::uint64_t seed,
                                    std::size_t threads) {
    if (transform == TransformKind::minmax) {
        return grid_search(minmax_normalize(scaled), truth, algorithm, grid, k,
                           derive_seed(seed, 1, 0));
    }
    if (transform == TransformKind::rank) {
        return grid_search(rank_transform(scaled), truth, algorithm, grid, k,
                           derive_seed(seed, 1, 0));
    }

    require_non_empty(grid.psi.empty(), "psi");
    require_non_empty(grid.t.empty(), "t");
    const std::size_t pairs = grid.psi.size() * grid.t.size();
    std::vector<SearchOutcome> outcomes(pairs);
    std::vector<std::exception_ptr> failures(pairs);
    auto run_pair = [&](std::size_t c) {
        try {
            AresParams params;
            params.psi = grid.psi[c / grid.t.size()];
            params.t = grid.t[c % grid.t.size()];
            params.seed = derive_seed(seed, 0, c);
            params.normalize_output = true;
            params.mode = SubsampleMode::shared_rows;
            const auto transformed = ares_apply(ares_fit(scaled, params), scaled);
            auto outcome = grid_search(transformed, truth, algorithm, grid, k,
                                       derive_seed(seed, 1, c));
            outcome.best.psi = params.psi;
            outcome.best.t = params.t;
            outcomes[c] = std::move(outcome);
        } catch (...) {
            failures[c] = std::current_exception();
        }
    };

    threads = std::clamp<std::size_t>(threads, 1, pairs);
    if (threads == 1) {
        for (std::size_t c = 0; c < pairs; ++c) {
            run_pair(c);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t c = next++; c < pairs; c = next++) {
                    run_pair(c);
                }
            });
        }
    }

    SearchOutcome best;
    for (std::size_t c = 0; c < pairs; ++c) {
        if (failures[c]) {
            std::rethrow_exception(failures[c]);
        }
        if (c == 0 || outcomes[c].best_f1 > best.best_f1) {
            const auto evaluations = best.evaluations;
            best = outcomes[c];
            best.evaluations = evaluations;
        }
        best.evaluations += outcomes[c].evaluations;
    }
    return best;
}

std::size_t expected_evaluations(const SearchGrid& grid, TransformKind transform,
                                 Algorithm algorithm) {
    std::size_t inner = 1;
    if (algorithm == Algorithm::dbscan) {
        inner = grid.eps.size() * grid.min_pts.size();
    } else if (algorithm == Algorithm::dp) {
        inner = grid.eps.size();
    }
    if (transform == TransformKind::ares) {
        inner *= grid.psi.size() * grid.t.size();
    }
    return inner;
}

// ---------------------------------------------------------------------------
// Experiment

void ResultTable::sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.dataset, a.algorithm, a.transform, a.scaling) <
               std::tie(b.dataset, b.algorithm, b.transform, b.scaling);
    });
}

ResultTable run_experiment(const ExperimentConfig& config, const Dataset& data,
                           const LabelVector& truth) {
    if (truth.size() != data.rows()) {
        throw DimensionError("experiment: label count does not match row count");
    }
    const std::size_t k =
        config.k.value_or(static_cast<std::size_t>(std::max(truth.class_count(), 1)));
    const std::string name = config.dataset_name.empty()
                                 ? (config.dataset_path.empty() ? std::string("dataset")
                                                                : config.dataset_path.stem().string())
                                 : config.dataset_name;

    ResultTable table;
    for (const auto scaling : config.scalings) {
        std::optional<Dataset> scaled;
        std::string scale_error;
        try {
            scaled = scale(data, ScalingParams{scaling, config.alpha, config.c, config.shift});
        } catch (const Error& e) {
            scale_error = e.what();
        }
        for (const auto transform : config.transforms) {
            for (const auto algorithm : config.algorithms) {
                ResultRow row;
                row.dataset = name;
                row.transform = transform;
                row.scaling = scaling;
                row.algorithm = algorithm;
                const auto start = std::chrono::steady_clock::now();
                if (!scaled) {
                    row.error = scale_error;
                } else {
                    try {
                        const auto outcome = search_with_transform(
                            *scaled, truth, transform, algorithm, config.grid, k, config.seed,
                            config.threads);
                        row.best_params = outcome.best;
                        row.best_f1 = outcome.best_f1;
                        row.evaluations = outcome.evaluations;
                    } catch (const Error& e) {
                        row.error = e.what();
                    }
                }
                row.runtime_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
                table.rows.push_back(std::move(row));
            }
        }
    }
    table.sort();
    return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
    const auto loaded = load_dataset(config.dataset_path, config.label_column);
    if (!loaded.labels) {
        throw InvalidArgument("experiment needs ground-truth labels; set label_column "
                              "(or use an ARFF file with a nominal class attribute)");
    }
    return run_experiment(config, loaded.data, *loaded.labels);
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") {
        return ReportFormat::csv;
    }
    if (name == "markdown" || name == "md") {
        return ReportFormat::markdown;
    }
    throw InvalidArgument("unknown report format '" + std::string(name) + "'");
}

std::string format_f1(double f1) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", f1);
    return buf;
}

std::string render_csv(const ResultTable& table) {
    std::ostringstream out;
    out << "dataset,transform,scaling,algorithm,best_params,best_f1,evaluations,runtime_ms,error\n";
    for (const auto& row : table.rows) {
        std::string error = row.error;
        std::replace(error.begin(), error.end(), ',', ';');
        std::replace(error.begin(), error.end(), '\n', ' ');
        char runtime[32];
        std::snprintf(runtime, sizeof runtime, "%.1f", row.runtime_ms);
        out << row.dataset << ',' << to_string(row.transform) << ',' << to_string(row.scaling)
            << ',' << to_string(row.algorithm) << ',' << row.best_params.describe() << ','
            << (row.ok() ? format_f1(row.best_f1) : std::string()) << ',' << row.evaluations
            << ',' << runtime << ',' << error << '\n';
    }
    return out.str();
}

std::string render_markdown(const ResultTable& table) {
    std::vector<Algorithm> algorithms;
    std::vector<TransformKind> transforms;
    std::vector<std::pair<std::string, ScalingKind>> keys;
    for (const auto& row : table.rows) {
        if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end())
            algorithms.push_back(row.algorithm);
        if (std::find(transforms.begin(), transforms.end(), row.transform) == transforms.end())
            transforms.push_back(row.transform);
        const std::pair key{row.dataset, row.scaling};
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            keys.push_back(key);
    }
    std::sort(algorithms.begin(), algorithms.end());
    std::sort(transforms.begin(), transforms.end());
    std::sort(keys.begin(), keys.end());

    std::ostringstream out;
    out << "| Dataset | Scaling |";
    for (auto a : algorithms)
        for (auto t : transforms)
            out << ' ' << to_string(a) << ' ' << to_string(t) << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < algorithms.size() * transforms.size(); ++i)
        out << "---:|";
    out << '\n';

    for (const auto& [dataset, scaling] : keys) {
        out << "| " << dataset << " | " << to_string(scaling) << " |";
        for (auto a : algorithms) {
            std::vector<const ResultRow*> cells;
            double best = -1.0;
            for (auto t : transforms) {
                const ResultRow* cell = nullptr;
                for (const auto& row : table.rows) {
                    if (row.dataset == dataset && row.scaling == scaling && row.algorithm == a &&
                        row.transform == t) {
                        cell = &row;
                    }
                }
                cells.push_back(cell);
                if (cell && cell->ok()) {
                    best = std::max(best, cell->best_f1);
                }
            }
            for (const auto* cell : cells) {
                if (!cell) {
                    out << " - |";
                } else if (!cell->ok()) {
                    out << " error |";
                } else if (format_f1(cell->best_f1) == format_f1(best)) {
                    out << " **" << format_f1(cell->best_f1) << "** |";
                } else {
                    out << ' ' << format_f1(cell->best_f1) << " |";
                }
            }
        }
        out << '\n';
    }
    return out.str();
}

void emit_report(const ResultTable& table, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << (format == ReportFormat::csv ? render_csv(table) : render_markdown(table));
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

// ---------------------------------------------------------------------------
// Histogram

std::vector<HistogramBin> histogram(const Dataset& data, std::string_view feature,
                                    std::size_t bins) {
    const auto col = data.column_index(feature);
    if (!col) {
        throw InvalidArgument("unknown column '" + std::string(feature) + "'");
    }
    if (bins == 0) {
        throw InvalidArgument("histogram needs at least one bin");
    }
    const auto normalized = minmax_normalize(data);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].center = (static_cast<double>(b) + 0.5) / static_cast<double>(bins);
    }
    for (std::size_t i = 0; i < normalized.rows(); ++i) {
        const double v = normalized(i, *col);
        auto b = static_cast<std::size_t>(v * static_cast<double>(bins));
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

void emit_histogram(const Dataset& data, std::string_view feature, std::size_t bins,
                    const std::filesystem::path& path) {
    const auto hist = histogram(data, feature, bins);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "bin_center,count\n";
    for (const auto& bin : hist) {
        out << format_number(bin.center) << ',' << bin.count << '\n';
    }
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

// ---------------------------------------------------------------------------
// Config

void apply_config_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "dataset") {
        config.dataset_path = std::string(value);
    } else if (key == "label_column") {
        config.label_column = value.empty() ? std::nullopt : std::optional(std::string(value));
    } else if (key == "name") {
        config.dataset_name = std::string(value);
    } else if (key == "transforms") {
        config.transforms = parse_enum_list<TransformKind>(value, parse_transform);
    } else if (key == "scalings") {
        config.scalings = parse_enum_list<ScalingKind>(value, parse_scaling);
    } else if (key == "algorithms") {
        config.algorithms = parse_enum_list<Algorithm>(value, parse_algorithm);
    } else if (key == "eps") {
        config.grid.eps = parse_list<double>(value, key);
    } else if (key == "min_pts") {
        config.grid.min_pts = parse_list<std::size_t>(value, key);
    } else if (key == "psi") {
        config.grid.psi = parse_list<std::size_t>(value, key);
    } else if (key == "t") {
        config.grid.t = parse_list<std::size_t>(value, key);
    } else if (key == "k") {
        config.k = parse_scalar<std::size_t>(value, key);
    } else if (key == "seed") {
        config.seed = parse_scalar<std::uint64_t>(value, key);
    } else if (key == "threads") {
        config.threads = parse_scalar<std::size_t>(value, key);
    } else if (key == "kmeans_restarts") {
        config.grid.kmeans_restarts = parse_scalar<std::size_t>(value, key);
    } else if (key == "kmeans_max_iter") {
        config.grid.kmeans_max_iter = parse_scalar<std::size_t>(value, key);
    } else if (key == "alpha") {
        config.alpha = parse_scalar<double>(value, key);
    } else if (key == "c") {
        config.c = parse_scalar<double>(value, key);
    } else if (key == "shift") {
        if (value == "when_negative") {
            config.shift = ColumnShift::when_negative;
        } else if (value == "always") {
            config.shift = ColumnShift::always;
        } else {
            throw ParseError("config key 'shift': expected when_negative or always");
        }
    } else {
        throw ParseError("unknown config key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, std::string_view source) {
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        const auto comment = text.find_first_of("#;");
        text = trim(text.substr(0, comment));
        if (text.empty() || text.front() == '[') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                             ": expected 'key = value'");
        }
        try {
            apply_config_value(config, trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const Error& e) {
            throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    auto config = parse_config(in, path.string());
    // Relative dataset paths are resolved against the config file's directory.
    if (!config.dataset_path.empty() && config.dataset_path.is_relative()) {
        config.dataset_path = path.parent_path() / config.dataset_path;
    }
    return config;
}

} // namespace ares
