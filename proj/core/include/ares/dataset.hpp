#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ares {

/**
 * Dense n x d table of finite feature values with unique column names.
 *
 * Values are stored row-major and validated on construction; a Dataset is
 * never mutated afterwards, so copies may be shared freely between threads.
 */
class Dataset {
public:
    /// `values` is row-major with values.size() == rows * columns.size().
    Dataset(std::vector<std::string> columns, std::vector<double> values);

    static Dataset from_rows(std::vector<std::string> columns,
                             const std::vector<std::vector<double>>& rows);

    /// Columns named x0, x1, ... for generated and derived data.
    static std::vector<std::string> default_column_names(std::size_t d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }

    double operator()(std::size_t row, std::size_t col) const noexcept {
        return values_[row * columns_.size() + col];
    }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * columns_.size(), columns_.size()};
    }

    std::vector<double> column(std::size_t j) const;
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<std::string>& column_names() const noexcept { return columns_; }
    std::optional<std::size_t> column_index(std::string_view name) const;

    /// Same shape and names, new values (validated like the constructor).
    Dataset with_values(std::vector<double> values) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<std::string> columns_;
    std::vector<double> values_;
    std::size_t rows_ = 0;
};

/// Ground-truth classes 0..class_count-1, each id used at least once.
class LabelVector {
public:
    explicit LabelVector(std::vector<int> labels);

    /// Maps arbitrary tokens to ids in order of first appearance.
    static LabelVector from_tokens(const std::vector<std::string>& tokens);

    std::size_t size() const noexcept { return labels_.size(); }
    int class_count() const noexcept { return class_count_; }
    int operator[](std::size_t i) const noexcept { return labels_[i]; }
    const std::vector<int>& labels() const noexcept { return labels_; }

    friend bool operator==(const LabelVector&, const LabelVector&) = default;

private:
    std::vector<int> labels_;
    int class_count_ = 0;
};

struct LabeledDataset {
    Dataset data;
    std::optional<LabelVector> labels;
};

/// Parses comma-separated text with a header row. `source` names the input in errors.
LabeledDataset read_csv(std::istream& in, const std::optional<std::string>& label_column,
                        std::string_view source = "<stream>");
LabeledDataset load_csv(const std::filesystem::path& path,
                        const std::optional<std::string>& label_column = std::nullopt);

/// ARFF subset: numeric attributes plus at most one nominal (class) attribute.
LabeledDataset read_arff(std::istream& in, std::string_view source = "<stream>");
LabeledDataset load_arff(const std::filesystem::path& path);

/// Dispatches on extension: .arff goes to load_arff, everything else to load_csv.
LabeledDataset load_dataset(const std::filesystem::path& path,
                            const std::optional<std::string>& label_column = std::nullopt);

/// Shortest round-trip formatting; labels (if any) are appended as the last column.
void write_csv(std::ostream& out, const Dataset& data, const LabelVector* labels = nullptr);
void save_csv(const Dataset& data, const LabelVector* labels, const std::filesystem::path& path);

/// Name of the label column written by save_csv ("label", suffixed if taken).
std::string label_column_name(const Dataset& data);

/**
 * One-dimensional mixture of three Gaussians: two narrow dense components at
 * low values and one wide sparse component at high values. All values are
 * strictly positive.
 */
LabeledDataset generate_three_cluster_1d(std::uint64_t seed,
                                         std::array<std::size_t, 3> n_per_cluster);

/// k isotropic Gaussian blobs whose centres are at least `separation` apart.
LabeledDataset generate_blobs(std::uint64_t seed, std::size_t k, std::size_t n_per_blob,
                              std::size_t d, double separation, double sd = 0.5);

/**
 * Two interleaved crescents in the positive quadrant: a dense lower crescent
 * (276 points) and a sparse upper crescent (97 points), 373 points in total.
 * Used to build the bundled data/jain_like.csv fixture.
 */
LabeledDataset generate_two_crescents(std::uint64_t seed);

} // namespace ares
