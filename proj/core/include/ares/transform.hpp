#pragma once

#include "ares/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ares {

// ---------------------------------------------------------------------------
// Min-max normalisation

struct MinMaxModel {
    std::vector<double> min;
    std::vector<double> max;
};

MinMaxModel minmax_fit(const Dataset& data);

/// (x - min) / (max - min) per column; constant columns map to 0.
Dataset minmax_apply(const MinMaxModel& model, const Dataset& data);

inline Dataset minmax_normalize(const Dataset& data) {
    return minmax_apply(minmax_fit(data), data);
}

// ---------------------------------------------------------------------------
// Whole-column rank

/// Each value becomes |{y in column : y < x}| / (n - 1); n == 1 maps to 0.
Dataset rank_transform(const Dataset& data);

// ---------------------------------------------------------------------------
// ARES: average rank over an ensemble of sub-samples

enum class SubsampleMode {
    /// Independent row draws for every (feature, member) pair.
    per_feature,
    /// One row-index draw per ensemble member, reused by every feature.
    shared_rows,
};

struct AresParams {
    std::size_t psi = 8;
    std::size_t t = 50;
    std::uint64_t seed = 0;
    bool normalize_output = true;
    SubsampleMode mode = SubsampleMode::per_feature;
};

/**
 * Fitted ARES transformation.
 *
 * For every feature the model keeps t sorted sub-samples of psi values drawn
 * without replacement from the fitted column. The sorted values split the
 * real line into psi + 1 bins ranked 0..psi, and a value's rank in one member
 * is the number of sampled values strictly below it.
 */
class AresModel {
public:
    /// `samples` is laid out [feature][member][psi]; every run of psi values must be sorted.
    AresModel(AresParams params, std::size_t features, std::vector<double> samples);

    const AresParams& params() const noexcept { return params_; }
    std::size_t psi() const noexcept { return params_.psi; }
    std::size_t t() const noexcept { return params_.t; }
    std::size_t features() const noexcept { return features_; }

    std::span<const double> sample(std::size_t feature, std::size_t member) const noexcept {
        return {samples_.data() + (feature * params_.t + member) * params_.psi, params_.psi};
    }

    /// Sum over members of the strict-less-than rank; exact integer.
    std::uint64_t rank_sum(std::size_t feature, double x) const noexcept;

    /// rank_sum / t, further divided by psi when normalize_output is set.
    double transform_value(std::size_t feature, double x) const noexcept;

    std::string to_json() const;
    static AresModel from_json(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static AresModel load(const std::filesystem::path& path);

    friend bool operator==(const AresModel&, const AresModel&);

private:
    AresParams params_;
    std::size_t features_ = 0;
    std::vector<double> samples_;
};

/// Current version of the JSON document produced by AresModel::to_json.
inline constexpr int kAresModelFormatVersion = 1;

/**
 * Draws the sub-samples. Row indices come from the seed stream
 * derive_seed(seed, member) in shared_rows mode and
 * derive_seed(seed, feature, member) in per_feature mode.
 */
AresModel ares_fit(const Dataset& data, const AresParams& params);

/// Rows are split into `threads` contiguous blocks; output does not depend on `threads`.
Dataset ares_apply(const AresModel& model, const Dataset& data, std::size_t threads = 1);

/// ares_apply(ares_fit(data, p), data) with p.mode forced to shared_rows.
Dataset ares_transform_by_index(const Dataset& data, AresParams params);

// ---------------------------------------------------------------------------
// Non-linear re-scaling

enum class ScalingKind { identity, square, sqrt, log, inverse };

enum class ColumnShift {
    /// Subtract the column minimum only when it is negative.
    when_negative,
    /// Always subtract the column minimum.
    always,
};

struct ScalingParams {
    ScalingKind kind = ScalingKind::identity;
    double alpha = 0.0001;
    double c = 100.0;
    ColumnShift shift = ColumnShift::when_negative;
};

/**
 * square: x^2 on raw values. sqrt / log / inverse: sqrt, ln or reciprocal of
 * c * (x' + alpha), where x' is x after the column shift.
 */
Dataset scale(const Dataset& data, const ScalingParams& params);

std::string_view to_string(ScalingKind kind);
ScalingKind parse_scaling(std::string_view name);
std::string_view to_string(SubsampleMode mode);

} // namespace ares
