#include "ares/eval.hpp"

#include "ares/error.hpp"

#include <algorithm>
#include <string>

namespace ares {

ContingencyTable contingency(const LabelVector& truth, const ClusteringResult& pred) {
    if (truth.size() != pred.assignments.size()) {
        throw DimensionError("contingency: " + std::to_string(truth.size()) + " labels vs " +
                             std::to_string(pred.assignments.size()) + " assignments");
    }
    validate(pred);
    ContingencyTable table;
    table.n = truth.size();
    table.classes = static_cast<std::size_t>(truth.class_count());
    table.has_noise_column =
        std::find(pred.assignments.begin(), pred.assignments.end(), kNoise) !=
        pred.assignments.end();
    const std::size_t offset = table.has_noise_column ? 1 : 0;
    table.clusters = static_cast<std::size_t>(pred.k) + offset;
    table.counts.assign(table.classes * table.clusters, 0);
    table.class_sizes.assign(table.classes, 0);
    table.cluster_sizes.assign(table.clusters, 0);
    for (std::size_t i = 0; i < table.n; ++i) {
        const auto cls = static_cast<std::size_t>(truth[i]);
        const int id = pred.assignments[i];
        const std::size_t col = id == kNoise ? 0 : static_cast<std::size_t>(id) + offset;
        ++table.counts[cls * table.clusters + col];
        ++table.class_sizes[cls];
        ++table.cluster_sizes[col];
    }
    return table;
}

double f1_measure(const ContingencyTable& table) {
    if (table.n == 0) {
        return 0.0;
    }
    double score = 0.0;
    for (std::size_t c = 0; c < table.classes; ++c) {
        const auto class_size = static_cast<double>(table.class_sizes[c]);
        double best = 0.0;
        for (std::size_t v = 0; v < table.clusters; ++v) {
            const auto overlap = static_cast<double>(table.at(c, v));
            if (overlap == 0.0) {
                continue;
            }
            const double precision = overlap / static_cast<double>(table.cluster_sizes[v]);
            const double recall = overlap / class_size;
            best = std::max(best, 2.0 * precision * recall / (precision + recall));
        }
        score += class_size * best;
    }
    return std::clamp(score / static_cast<double>(table.n), 0.0, 1.0);
}

double f1_measure(const LabelVector& truth, const ClusteringResult& pred) {
    return f1_measure(contingency(truth, pred));
}

} // namespace ares
