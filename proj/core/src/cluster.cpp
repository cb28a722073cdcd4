#include "ares/cluster.hpp"

#include "ares/error.hpp"
#include "ares/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

namespace ares {

namespace {

// Reads d(i, j) from the cache when one is supplied.
class Distances {
public:
    Distances(const Dataset& data, const DistanceMatrix* cache) : data_(data), cache_(cache) {
        if (cache_ && cache_->size() != data.rows()) {
            throw DimensionError("distance matrix size does not match dataset");
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        return cache_ ? (*cache_)(i, j) : pairwise_distance(data_.row(i), data_.row(j));
    }

private:
    const Dataset& data_;
    const DistanceMatrix* cache_;
};

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        sum += diff * diff;
    }
    return sum;
}

} // namespace

// ---------------------------------------------------------------------------
// Result helpers

void validate(const ClusteringResult& result) {
    if (result.k < 0) {
        throw InvalidArgument("cluster count must be non-negative");
    }
    for (std::size_t i = 0; i < result.assignments.size(); ++i) {
        const int id = result.assignments[i];
        if (id != kNoise && (id < 0 || id >= result.k)) {
            throw InvalidArgument("assignment " + std::to_string(id) + " at row " +
                                  std::to_string(i) + " outside [0, " +
                                  std::to_string(result.k) + ")");
        }
    }
}

ClusteringResult relabel_canonical(const ClusteringResult& result) {
    std::unordered_map<int, int> ids;
    ClusteringResult out;
    out.assignments.reserve(result.assignments.size());
    for (int id : result.assignments) {
        if (id == kNoise) {
            out.assignments.push_back(kNoise);
            continue;
        }
        const auto [it, inserted] = ids.try_emplace(id, static_cast<int>(ids.size()));
        out.assignments.push_back(it->second);
    }
    out.k = static_cast<int>(ids.size());
    return out;
}

void write_clustering_csv(std::ostream& out, const ClusteringResult& result) {
    out << "row_index,cluster_id\n";
    for (std::size_t i = 0; i < result.assignments.size(); ++i) {
        out << i << ',' << result.assignments[i] << '\n';
    }
}

void save_clustering_csv(const ClusteringResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_clustering_csv(out, result);
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

ClusteringResult read_clustering_csv(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<std::pair<std::size_t, int>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!header) {
            if (line != "row_index,cluster_id") {
                throw ParseError(std::string(source) + ": expected header 'row_index,cluster_id'");
            }
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        std::size_t row = 0;
        int id = 0;
        const char* begin = line.data();
        const char* mid = begin + (comma == std::string::npos ? line.size() : comma);
        const char* end = begin + line.size();
        const auto r1 = std::from_chars(begin, mid, row);
        const auto r2 = comma == std::string::npos ? std::from_chars_result{mid, std::errc::invalid_argument}
                                                   : std::from_chars(mid + 1, end, id);
        if (r1.ec != std::errc{} || r1.ptr != mid || r2.ec != std::errc{} || r2.ptr != end ||
            id < kNoise) {
            throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                             ": malformed clustering row '" + line + "'");
        }
        rows.emplace_back(row, id);
    }
    if (!header) {
        throw ParseError(std::string(source) + ": empty clustering file");
    }
    std::sort(rows.begin(), rows.end());
    ClusteringResult out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != i) {
            throw ParseError(std::string(source) + ": row indices must be 0..n-1 without gaps");
        }
        out.assignments.push_back(rows[i].second);
        out.k = std::max(out.k, rows[i].second + 1);
    }
    return out;
}

ClusteringResult load_clustering_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return read_clustering_csv(in, path.string());
}

// ---------------------------------------------------------------------------
// Distances

double pairwise_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("pairwise_distance: points have " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()) + " coordinates");
    }
    return std::sqrt(squared_distance(a, b));
}

DistanceMatrix::DistanceMatrix(const Dataset& data) : n_(data.rows()) {
    values_.reserve(n_ * (n_ - 1) / 2);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            values_.push_back(pairwise_distance(data.row(i), data.row(j)));
        }
    }
}

// ---------------------------------------------------------------------------
// KMeans

KMeansRun kmeans_lloyd(const Dataset& data, std::span<const std::size_t> initial_rows,
                       std::size_t max_iter) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    const std::size_t k = initial_rows.size();
    if (k == 0 || k > n) {
        throw InvalidArgument("kmeans: k = " + std::to_string(k) + " must be in [1, " +
                              std::to_string(n) + "]");
    }
    if (max_iter == 0) {
        throw InvalidArgument("kmeans: max_iter must be at least 1");
    }

    KMeansRun run;
    auto& centroids = run.centroids;
    for (auto row : initial_rows) {
        if (row >= n) {
            throw InvalidArgument("kmeans: initial row out of range");
        }
        const auto p = data.row(row);
        centroids.emplace_back(p.begin(), p.end());
    }

    std::vector<int> assign(n, -1);
    std::vector<std::size_t> counts(k);
    bool reseeded = false;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        bool changed = reseeded;
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = data.row(i);
            std::size_t best = 0;
            double best_d = squared_distance(p, centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double dist = squared_distance(p, centroids[c]);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            if (assign[i] != static_cast<int>(best)) {
                changed = true;
                assign[i] = static_cast<int>(best);
            }
            sse += best_d;
        }
        run.sse_trace.push_back(sse);
        run.iterations = iter + 1;
        if (!changed || iter + 1 == max_iter) {
            break;
        }

        // Update step: means of the current assignment.
        std::fill(counts.begin(), counts.end(), 0);
        std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(assign[i]);
            ++counts[c];
            const auto p = data.row(i);
            for (std::size_t j = 0; j < d; ++j) {
                sums[c][j] += p[j];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < d; ++j) {
                    centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
                }
            }
        }
        reseeded = false;
        for (std::size_t e = 0; e < k; ++e) {
            if (counts[e] > 0) {
                continue;
            }
            // Donor clusters must keep at least one point.
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto c = static_cast<std::size_t>(assign[i]);
                if (counts[c] < 2) {
                    continue;
                }
                const double dist = squared_distance(data.row(i), centroids[c]);
                if (dist > far_d) {
                    far_d = dist;
                    far = i;
                }
            }
            const auto donor = static_cast<std::size_t>(assign[far]);
            --counts[donor];
            ++counts[e];
            assign[far] = static_cast<int>(e);
            const auto p = data.row(far);
            centroids[e].assign(p.begin(), p.end());
            reseeded = true;
        }
    }
    run.sse = run.sse_trace.back();
    run.result = ClusteringResult{std::move(assign), static_cast<int>(k)};
    return run;
}

KMeansRun kmeans_detailed(const Dataset& data, const KMeansParams& params) {
    if (params.k == 0 || params.k > data.rows()) {
        throw InvalidArgument("kmeans: k = " + std::to_string(params.k) + " must be in [1, " +
                              std::to_string(data.rows()) + "]");
    }
    if (params.restarts == 0) {
        throw InvalidArgument("kmeans: restarts must be at least 1");
    }
    KMeansRun best;
    for (std::size_t r = 0; r < params.restarts; ++r) {
        Rng rng(derive_seed(params.seed, r));
        const auto rows = sample_without_replacement(rng, data.rows(), params.k);
        auto run = kmeans_lloyd(data, rows, params.max_iter);
        run.restart = r;
        if (r == 0 || run.sse < best.sse) {
            best = std::move(run);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// DBSCAN

std::vector<bool> dbscan_core_points(const Dataset& data, const DbscanParams& params,
                                     const DistanceMatrix* distances) {
    if (!(params.eps > 0.0) || params.min_pts == 0) {
        throw InvalidArgument("dbscan: eps must be > 0 and min_pts >= 1");
    }
    const Distances dist(data, distances);
    const std::size_t n = data.rows();
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < n && count < params.min_pts; ++j) {
            if (dist(i, j) <= params.eps) {
                ++count;
            }
        }
        core[i] = count >= params.min_pts;
    }
    return core;
}

ClusteringResult dbscan_run(const Dataset& data, const DbscanParams& params,
                            const DistanceMatrix* distances) {
    const auto core = dbscan_core_points(data, params, distances);
    const Distances dist(data, distances);
    const std::size_t n = data.rows();
    std::vector<int> assign(n, kNoise);
    int cluster = 0;
    std::deque<std::size_t> frontier;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!core[seed] || assign[seed] != kNoise) {
            continue;
        }
        assign[seed] = cluster;
        frontier.push_back(seed);
        while (!frontier.empty()) {
            const std::size_t p = frontier.front();
            frontier.pop_front();
            for (std::size_t q = 0; q < n; ++q) {
                if (assign[q] != kNoise || dist(p, q) > params.eps) {
                    continue;
                }
                assign[q] = cluster;
                if (core[q]) {
                    frontier.push_back(q);
                }
            }
        }
        ++cluster;
    }
    return ClusteringResult{std::move(assign), cluster};
}

// ---------------------------------------------------------------------------
// Density peaks

DpDecisionGraph dp_decision_graph(const Dataset& data, const DpParams& params,
                                  const DistanceMatrix* distances) {
    const std::size_t n = data.rows();
    if (params.k == 0 || params.k > n) {
        throw InvalidArgument("dp: k = " + std::to_string(params.k) + " must be in [1, " +
                              std::to_string(n) + "]");
    }
    if (!(params.dc > 0.0)) {
        throw InvalidArgument("dp: cutoff distance must be > 0");
    }
    const Distances dist(data, distances);
    DpDecisionGraph g;
    g.rho.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist(i, j) < params.dc) {
                ++g.rho[i];
                ++g.rho[j];
            }
        }
    }

    g.order.resize(n);
    std::iota(g.order.begin(), g.order.end(), std::size_t{0});
    std::stable_sort(g.order.begin(), g.order.end(),
                     [&](std::size_t a, std::size_t b) { return g.rho[a] > g.rho[b]; });
    std::vector<std::size_t> position(n);
    for (std::size_t p = 0; p < n; ++p) {
        position[g.order[p]] = p;
    }

    g.delta.assign(n, 0.0);
    g.nearest_higher.assign(n, kNoNeighbor);
    for (std::size_t i = 0; i < n; ++i) {
        if (position[i] == 0) {
            double far = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                far = std::max(far, dist(i, j));
            }
            g.delta[i] = far;
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = kNoNeighbor;
        for (std::size_t j = 0; j < n; ++j) {
            if (position[j] < position[i]) {
                const double dij = dist(i, j);
                if (dij < best) {
                    best = dij;
                    best_j = j;
                }
            }
        }
        g.delta[i] = best;
        g.nearest_higher[i] = best_j;
    }

    g.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.gamma[i] = static_cast<double>(g.rho[i]) * g.delta[i];
    }
    std::vector<std::size_t> by_gamma(n);
    std::iota(by_gamma.begin(), by_gamma.end(), std::size_t{0});
    std::stable_sort(by_gamma.begin(), by_gamma.end(),
                     [&](std::size_t a, std::size_t b) { return g.gamma[a] > g.gamma[b]; });
    g.centers.assign(by_gamma.begin(), by_gamma.begin() + static_cast<std::ptrdiff_t>(params.k));
    return g;
}

ClusteringResult dp_run(const Dataset& data, const DpParams& params,
                        const DistanceMatrix* distances) {
    const auto g = dp_decision_graph(data, params, distances);
    std::vector<int> assign(data.rows(), kNoise);
    for (std::size_t c = 0; c < g.centers.size(); ++c) {
        assign[g.centers[c]] = static_cast<int>(c);
    }
    for (const auto i : g.order) {
        if (assign[i] == kNoise) {
            // order[0] is always a centre, so nearest_higher is set and already labelled.
            assign[i] = assign[g.nearest_higher[i]];
        }
    }
    return ClusteringResult{std::move(assign), static_cast<int>(params.k)};
}

} // namespace ares
