#pragma once

#include "ares/cluster.hpp"
#include "ares/dataset.hpp"
#include "ares/transform.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ares {

enum class TransformKind { minmax, rank, ares };
enum class Algorithm { kmeans, dbscan, dp };

std::string_view to_string(TransformKind kind);
std::string_view to_string(Algorithm algorithm);
TransformKind parse_transform(std::string_view name);
Algorithm parse_algorithm(std::string_view name);

/// 0.01, 0.02, ..., 0.50 (each value is i / 100.0).
std::vector<double> default_eps_grid();

/// Parameter lists searched exhaustively; each list is enumerated in the order given.
struct SearchGrid {
    std::vector<double> eps = default_eps_grid(); // DBSCAN eps and DP cutoff
    std::vector<std::size_t> min_pts{4, 5, 6, 7, 8};
    std::vector<std::size_t> psi{1, 2, 4, 8, 16, 32};
    std::vector<std::size_t> t{10, 25, 50, 100};
    std::size_t kmeans_restarts = 10;
    std::size_t kmeans_max_iter = 100;
};

struct GridPoint {
    std::optional<std::size_t> psi;
    std::optional<std::size_t> t;
    std::optional<double> eps;
    std::optional<std::size_t> min_pts;
    std::optional<std::size_t> k;

    /// "psi=8;t=50;eps=0.12", in that key order, present keys only.
    std::string describe() const;
    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct SearchOutcome {
    GridPoint best;
    double best_f1 = 0.0;
    std::size_t evaluations = 0;
};

/**
 * Exhaustive search over the algorithm's own parameters on already
 * preprocessed data: kmeans has the single point {k}, dbscan walks eps then
 * min_pts, dp walks eps. Ties keep the first point in enumeration order.
 * KMeans at grid index g is seeded with derive_seed(seed, g).
 */
SearchOutcome grid_search(const Dataset& data, const LabelVector& truth, Algorithm algorithm,
                          const SearchGrid& grid, std::size_t k, std::uint64_t seed);

/**
 * Applies the preprocessing transform to `scaled` and grid-searches the
 * algorithm. For ARES every (psi, t) pair (psi outer) is refitted with
 * shared row sub-samples seeded by derive_seed(seed, 0, pair index) and the
 * inner search uses derive_seed(seed, 1, pair index). The result does not
 * depend on `threads`.
 */
SearchOutcome search_with_transform(const Dataset& scaled, const LabelVector& truth,
                                    TransformKind transform, Algorithm algorithm,
                                    const SearchGrid& grid, std::size_t k, std::uint64_t seed,
                                    std::size_t threads = 1);

struct ExperimentConfig {
    std::filesystem::path dataset_path;
    std::optional<std::string> label_column;
    /// Defaults to the dataset file stem.
    std::string dataset_name;
    std::vector<TransformKind> transforms{TransformKind::minmax, TransformKind::rank,
                                          TransformKind::ares};
    std::vector<ScalingKind> scalings{ScalingKind::identity};
    std::vector<Algorithm> algorithms{Algorithm::kmeans, Algorithm::dbscan, Algorithm::dp};
    SearchGrid grid;
    /// Cluster count for kmeans and dp; defaults to the number of label classes.
    std::optional<std::size_t> k;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    double alpha = 0.0001;
    double c = 100.0;
    ColumnShift shift = ColumnShift::when_negative;
};

struct ResultRow {
    std::string dataset;
    TransformKind transform{};
    ScalingKind scaling{};
    Algorithm algorithm{};
    GridPoint best_params;
    double best_f1 = 0.0;
    std::size_t evaluations = 0;
    double runtime_ms = 0.0;
    /// Empty on success; otherwise the failure message for this combination.
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct ResultTable {
    std::vector<ResultRow> rows;

    /// Order by (dataset, algorithm, transform, scaling) using enum order.
    void sort();
};

/// Expected evaluation count for one combination: product of the grid lists it walks.
std::size_t expected_evaluations(const SearchGrid& grid, TransformKind transform,
                                 Algorithm algorithm);

ResultTable run_experiment(const ExperimentConfig& config);
ResultTable run_experiment(const ExperimentConfig& config, const Dataset& data,
                           const LabelVector& truth);

enum class ReportFormat { csv, markdown };
ReportFormat parse_report_format(std::string_view name);

/// F1 as fixed 4-decimal text ("0.3333").
std::string format_f1(double f1);
std::string render_csv(const ResultTable& table);
/// One row per (dataset, scaling), one column per (algorithm, transform); best per algorithm bolded.
std::string render_markdown(const ResultTable& table);
void emit_report(const ResultTable& table, ReportFormat format, const std::filesystem::path& path);

struct HistogramBin {
    double center = 0.0;
    std::size_t count = 0;
};

/// Min-max normalises the column, then counts into `bins` equal bins over [0, 1].
std::vector<HistogramBin> histogram(const Dataset& data, std::string_view feature,
                                    std::size_t bins);
void emit_histogram(const Dataset& data, std::string_view feature, std::size_t bins,
                    const std::filesystem::path& path);

/**
 * INI-style "key = value" lines; '#' and ';' start comments, [section]
 * headers are ignored. List values are comma-separated; numeric lists also
 * accept "start:stop:step".
 */
ExperimentConfig parse_config(std::istream& in, std::string_view source = "<stream>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one key/value pair with the same rules as the config file.
void apply_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

} // namespace ares
