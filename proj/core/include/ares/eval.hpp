#pragma once

#include "ares/cluster.hpp"
#include "ares/dataset.hpp"

#include <cstddef>
#include <vector>

namespace ares {

/**
 * Class-by-cluster co-occurrence counts. When the clustering contains noise,
 * column 0 holds all noise points and cluster id c lives in column c + 1;
 * otherwise cluster id c is column c.
 */
struct ContingencyTable {
    std::size_t classes = 0;
    std::size_t clusters = 0;
    bool has_noise_column = false;
    std::vector<std::size_t> counts; // row-major, classes x clusters
    std::vector<std::size_t> class_sizes;
    std::vector<std::size_t> cluster_sizes;
    std::size_t n = 0;

    std::size_t at(std::size_t cls, std::size_t cluster) const noexcept {
        return counts[cls * clusters + cluster];
    }
};

ContingencyTable contingency(const LabelVector& truth, const ClusteringResult& pred);

/// Class-size-weighted best-match F1; 0/0 counts as 0.
double f1_measure(const ContingencyTable& table);
double f1_measure(const LabelVector& truth, const ClusteringResult& pred);

} // namespace ares
