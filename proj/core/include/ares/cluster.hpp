#pragma once

#include "ares/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ares {

/// Assignment value for points no cluster claims (DBSCAN only).
inline constexpr int kNoise = -1;

struct ClusteringResult {
    std::vector<int> assignments;
    int k = 0;

    friend bool operator==(const ClusteringResult&, const ClusteringResult&) = default;
};

/// Throws InvalidArgument unless every assignment is kNoise or in [0, k).
void validate(const ClusteringResult& result);

/// Renumbers clusters by first appearance; kNoise stays kNoise. Idempotent.
ClusteringResult relabel_canonical(const ClusteringResult& result);

/// CSV with header "row_index,cluster_id"; noise is written as -1.
void write_clustering_csv(std::ostream& out, const ClusteringResult& result);
void save_clustering_csv(const ClusteringResult& result, const std::filesystem::path& path);
ClusteringResult read_clustering_csv(std::istream& in, std::string_view source = "<stream>");
ClusteringResult load_clustering_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Distances

double pairwise_distance(std::span<const double> a, std::span<const double> b);

/**
 * Condensed upper-triangle matrix of Euclidean distances, computed once with
 * pairwise_distance so that cached and on-the-fly runs agree bit for bit.
 */
class DistanceMatrix {
public:
    explicit DistanceMatrix(const Dataset& data);

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        if (i == j) {
            return 0.0;
        }
        if (i > j) {
            std::swap(i, j);
        }
        return values_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
    }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// KMeans

struct KMeansParams {
    std::size_t k = 2;
    std::size_t max_iter = 100;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
};

struct KMeansRun {
    ClusteringResult result;
    std::vector<std::vector<double>> centroids;
    /// Sum of squared distances to the assigned centroid after each assignment step.
    std::vector<double> sse_trace;
    double sse = 0.0;
    std::size_t iterations = 0;
    std::size_t restart = 0;
};

/**
 * Lloyd's algorithm from the given initial centroid rows. Ties go to the
 * lowest centroid index; an empty cluster takes the point farthest from its
 * own centroid. Stops on an assignment fixpoint or after max_iter steps.
 */
KMeansRun kmeans_lloyd(const Dataset& data, std::span<const std::size_t> initial_rows,
                       std::size_t max_iter);

/// Best of `restarts` Lloyd runs; restart r draws k distinct rows from derive_seed(seed, r).
KMeansRun kmeans_detailed(const Dataset& data, const KMeansParams& params);

inline ClusteringResult kmeans_run(const Dataset& data, const KMeansParams& params) {
    return kmeans_detailed(data, params).result;
}

// ---------------------------------------------------------------------------
// DBSCAN

struct DbscanParams {
    double eps = 0.1;
    std::size_t min_pts = 4;
};

/**
 * Closed-ball DBSCAN: core iff |{q : d(p, q) <= eps}| >= min_pts (p included).
 * Seeds are scanned in row order; a border point joins the first cluster that
 * reaches it. `distances` may be null, in which case distances are computed
 * on the fly.
 */
ClusteringResult dbscan_run(const Dataset& data, const DbscanParams& params,
                            const DistanceMatrix* distances = nullptr);

/// Core flags for the same neighbourhood rule, exposed for property checks.
std::vector<bool> dbscan_core_points(const Dataset& data, const DbscanParams& params,
                                     const DistanceMatrix* distances = nullptr);

// ---------------------------------------------------------------------------
// Density peaks

struct DpParams {
    std::size_t k = 2;
    double dc = 0.1;
};

inline constexpr std::size_t kNoNeighbor = std::numeric_limits<std::size_t>::max();

/// Everything the decision graph needs; `order` is rows by (rho desc, index asc).
struct DpDecisionGraph {
    std::vector<std::size_t> rho;
    std::vector<double> delta;
    std::vector<double> gamma;
    /// Nearest point earlier in `order`; kNoNeighbor for order[0].
    std::vector<std::size_t> nearest_higher;
    std::vector<std::size_t> order;
    /// Top-k rows by gamma (ties to the lower row), highest gamma first.
    std::vector<std::size_t> centers;
};

DpDecisionGraph dp_decision_graph(const Dataset& data, const DpParams& params,
                                  const DistanceMatrix* distances = nullptr);

/**
 * Density peaks with a cutoff kernel: rho_i counts other points strictly
 * closer than dc; cluster ids follow the gamma ranking of the centres.
 */
ClusteringResult dp_run(const Dataset& data, const DpParams& params,
                        const DistanceMatrix* distances = nullptr);

} // namespace ares
