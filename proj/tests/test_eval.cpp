#include "ares/error.hpp"
#include "ares/eval.hpp"
#include "ares/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

namespace {

// Straight from the definition: for each class, best F1 over clusters (noise
// counted as one more cluster), weighted by class size.
double brute_f1(const std::vector<int>& truth, const std::vector<int>& pred) {
    const int classes = *std::max_element(truth.begin(), truth.end()) + 1;
    const int top = *std::max_element(pred.begin(), pred.end());
    double total = 0.0;
    for (int c = 0; c < classes; ++c) {
        double class_size = 0;
        for (int t : truth) class_size += t == c;
        double best = 0.0;
        for (int k = -1; k <= top; ++k) {
            double both = 0, size_k = 0;
            for (std::size_t i = 0; i < truth.size(); ++i) {
                size_k += pred[i] == k;
                both += pred[i] == k && truth[i] == c;
            }
            if (both == 0) continue;
            const double p = both / size_k, r = both / class_size;
            best = std::max(best, 2 * p * r / (p + r));
        }
        total += class_size * best;
    }
    return total / static_cast<double>(truth.size());
}

} // namespace

TEST_CASE("contingency table without noise") {
    const ares::LabelVector truth({0, 0, 1, 1});
    const auto t = ares::contingency(truth, {{0, 0, 1, 1}, 2});
    CHECK(t.classes == 2);
    CHECK(t.clusters == 2);
    CHECK_FALSE(t.has_noise_column);
    CHECK(t.counts == std::vector<std::size_t>{2, 0, 0, 2});
    CHECK(t.class_sizes == std::vector<std::size_t>{2, 2});
    CHECK(t.cluster_sizes == std::vector<std::size_t>{2, 2});
    CHECK(t.n == 4);
}

TEST_CASE("contingency table with a noise column") {
    const ares::LabelVector truth({0, 0, 1, 1, 1});
    const auto t = ares::contingency(truth, {{-1, 0, 0, -1, 1}, 2});
    CHECK(t.has_noise_column);
    CHECK(t.clusters == 3);
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(1, 0) == 1);
    CHECK(t.at(0, 1) == 1);
    CHECK(t.at(1, 1) == 1);
    CHECK(t.at(1, 2) == 1);
    CHECK(t.cluster_sizes == std::vector<std::size_t>{2, 2, 1});
    const auto total = std::accumulate(t.counts.begin(), t.counts.end(), std::size_t{0});
    CHECK(total == 5);
}

TEST_CASE("contingency input errors") {
    const ares::LabelVector truth({0, 1});
    CHECK_THROWS_AS(ares::contingency(truth, {{0}, 1}), ares::DimensionError);
    CHECK_THROWS_AS(ares::contingency(truth, {{0, 3}, 2}), ares::InvalidArgument);
}

TEST_CASE("f1 examples") {
    const ares::LabelVector two({0, 0, 1, 1});
    CHECK(ares::f1_measure(two, {{0, 0, 1, 1}, 2}) == 1.0);
    CHECK(ares::f1_measure(two, {{1, 1, 0, 0}, 2}) == 1.0);
    CHECK(ares::f1_measure(two, {{0, 0, 0, 0}, 1}) == doctest::Approx(2.0 / 3.0));
    CHECK(ares::f1_measure(two, {{-1, -1, -1, -1}, 0}) == doctest::Approx(2.0 / 3.0));
    // Singletons: each class matches one cluster with p = 1, r = 1/2.
    CHECK(ares::f1_measure(two, {{0, 1, 2, 3}, 4}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("f1 matches a brute-force computation") {
    ares::Rng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.below(40);
        const int classes = 1 + static_cast<int>(rng.below(std::min<std::size_t>(n, 4)));
        std::vector<int> truth(n);
        for (std::size_t i = 0; i < n; ++i) truth[i] = i < static_cast<std::size_t>(classes) ? static_cast<int>(i) : static_cast<int>(rng.below(classes));
        ares::ClusteringResult pred;
        pred.k = 1 + static_cast<int>(rng.below(5));
        for (std::size_t i = 0; i < n; ++i) pred.assignments.push_back(static_cast<int>(rng.below(pred.k + 1)) - 1);
        const double f = ares::f1_measure(ares::LabelVector(truth), pred);
        CHECK(f == doctest::Approx(brute_f1(truth, pred.assignments)).epsilon(1e-12));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("f1 is invariant to cluster id permutation") {
    ares::Rng rng(6);
    std::vector<int> truth(60);
    for (std::size_t i = 0; i < 60; ++i) truth[i] = static_cast<int>(i % 3);
    const ares::LabelVector lv(truth);
    for (int rep = 0; rep < 30; ++rep) {
        ares::ClusteringResult pred{{}, 4};
        for (int i = 0; i < 60; ++i) pred.assignments.push_back(static_cast<int>(rng.below(4)));
        std::vector<int> perm{0, 1, 2, 3};
        for (std::size_t i = 4; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        ares::ClusteringResult mapped = pred;
        for (auto& a : mapped.assignments) a = perm[static_cast<std::size_t>(a)];
        CHECK(ares::f1_measure(lv, mapped) == ares::f1_measure(lv, pred));
    }
}

TEST_CASE("splitting a pure cluster lowers the score") {
    const ares::LabelVector truth({0, 0, 0, 0, 1, 1, 1, 1});
    const double whole = ares::f1_measure(truth, {{0, 0, 0, 0, 1, 1, 1, 1}, 2});
    const double split = ares::f1_measure(truth, {{0, 0, 2, 2, 1, 1, 1, 1}, 3});
    CHECK(whole == 1.0);
    CHECK(split < whole);
}
