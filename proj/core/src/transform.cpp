#include "ares/transform.hpp"

#include "ares/error.hpp"
#include "ares/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace ares {

namespace {

void require_same_width(std::size_t fitted, const Dataset& data, std::string_view what) {
    if (fitted != data.cols()) {
        throw DimensionError(std::string(what) + ": model fitted on " + std::to_string(fitted) +
                             " features, data has " + std::to_string(data.cols()));
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Min-max

MinMaxModel minmax_fit(const Dataset& data) {
    MinMaxModel model;
    model.min.assign(data.cols(), 0.0);
    model.max.assign(data.cols(), 0.0);
    for (std::size_t j = 0; j < data.cols(); ++j) {
        model.min[j] = model.max[j] = data(0, j);
    }
    for (std::size_t i = 1; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            model.min[j] = std::min(model.min[j], data(i, j));
            model.max[j] = std::max(model.max[j], data(i, j));
        }
    }
    return model;
}

Dataset minmax_apply(const MinMaxModel& model, const Dataset& data) {
    require_same_width(model.min.size(), data, "minmax_apply");
    std::vector<double> out(data.values().begin(), data.values().end());
    const std::size_t d = data.cols();
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t j = k % d;
        const double range = model.max[j] - model.min[j];
        out[k] = range > 0.0 ? (out[k] - model.min[j]) / range : 0.0;
    }
    return data.with_values(std::move(out));
}

// ---------------------------------------------------------------------------
// Rank

Dataset rank_transform(const Dataset& data) {
    const std::size_t n = data.rows();
    std::vector<double> out(data.values().size());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        auto sorted = data.column(j);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i) {
            const auto below = static_cast<std::size_t>(
                std::lower_bound(sorted.begin(), sorted.end(), data(i, j)) - sorted.begin());
            out[i * data.cols() + j] =
                n > 1 ? static_cast<double>(below) / static_cast<double>(n - 1) : 0.0;
        }
    }
    return data.with_values(std::move(out));
}

// ---------------------------------------------------------------------------
// ARES

AresModel::AresModel(AresParams params, std::size_t features, std::vector<double> samples)
    : params_(params), features_(features), samples_(std::move(samples)) {
    if (params_.psi == 0 || params_.t == 0) {
        throw InvalidArgument("ARES needs psi >= 1 and t >= 1");
    }
    if (features_ == 0 || samples_.size() != features_ * params_.t * params_.psi) {
        throw DimensionError("ARES model: expected " +
                             std::to_string(features_ * params_.t * params_.psi) +
                             " sample values, got " + std::to_string(samples_.size()));
    }
    for (std::size_t f = 0; f < features_; ++f) {
        for (std::size_t m = 0; m < params_.t; ++m) {
            const auto s = sample(f, m);
            if (!std::is_sorted(s.begin(), s.end())) {
                throw InvalidArgument("ARES model: sub-sample " + std::to_string(m) +
                                      " of feature " + std::to_string(f) + " is not sorted");
            }
            if (!std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); })) {
                throw InvalidArgument("ARES model: non-finite sample value");
            }
        }
    }
}

std::uint64_t AresModel::rank_sum(std::size_t feature, double x) const noexcept {
    std::uint64_t total = 0;
    for (std::size_t m = 0; m < params_.t; ++m) {
        const auto s = sample(feature, m);
        total += static_cast<std::uint64_t>(std::lower_bound(s.begin(), s.end(), x) - s.begin());
    }
    return total;
}

double AresModel::transform_value(std::size_t feature, double x) const noexcept {
    double denom = static_cast<double>(params_.t);
    if (params_.normalize_output) {
        denom *= static_cast<double>(params_.psi);
    }
    return static_cast<double>(rank_sum(feature, x)) / denom;
}

bool operator==(const AresModel& a, const AresModel& b) {
    return a.params_.psi == b.params_.psi && a.params_.t == b.params_.t &&
           a.params_.seed == b.params_.seed &&
           a.params_.normalize_output == b.params_.normalize_output &&
           a.params_.mode == b.params_.mode && a.features_ == b.features_ &&
           a.samples_ == b.samples_;
}

std::string_view to_string(SubsampleMode mode) {
    return mode == SubsampleMode::shared_rows ? "shared_rows" : "per_feature";
}

std::string AresModel::to_json() const {
    nlohmann::json doc;
    doc["format"] = "ares-model";
    doc["version"] = kAresModelFormatVersion;
    doc["psi"] = params_.psi;
    doc["t"] = params_.t;
    doc["seed"] = params_.seed;
    doc["normalize_output"] = params_.normalize_output;
    doc["mode"] = to_string(params_.mode);
    auto& features = doc["features"] = nlohmann::json::array();
    for (std::size_t f = 0; f < features_; ++f) {
        auto members = nlohmann::json::array();
        for (std::size_t m = 0; m < params_.t; ++m) {
            const auto s = sample(f, m);
            members.push_back(std::vector<double>(s.begin(), s.end()));
        }
        features.push_back(std::move(members));
    }
    return doc.dump();
}

AresModel AresModel::from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        if (doc.value("format", "") != "ares-model") {
            throw ParseError("not an ARES model document");
        }
        const int version = doc.at("version").get<int>();
        if (version != kAresModelFormatVersion) {
            throw ParseError("unsupported ARES model version " + std::to_string(version));
        }
        AresParams params;
        params.psi = doc.at("psi").get<std::size_t>();
        params.t = doc.at("t").get<std::size_t>();
        params.seed = doc.at("seed").get<std::uint64_t>();
        params.normalize_output = doc.at("normalize_output").get<bool>();
        const auto mode = doc.at("mode").get<std::string>();
        if (mode == "shared_rows") {
            params.mode = SubsampleMode::shared_rows;
        } else if (mode == "per_feature") {
            params.mode = SubsampleMode::per_feature;
        } else {
            throw ParseError("unknown sub-sample mode '" + mode + "'");
        }
        const auto& features = doc.at("features");
        std::vector<double> samples;
        for (const auto& members : features) {
            if (members.size() != params.t) {
                throw ParseError("feature has " + std::to_string(members.size()) +
                                 " members, expected t = " + std::to_string(params.t));
            }
            for (const auto& member : members) {
                const auto values = member.get<std::vector<double>>();
                if (values.size() != params.psi) {
                    throw ParseError("sub-sample has " + std::to_string(values.size()) +
                                     " values, expected psi = " + std::to_string(params.psi));
                }
                samples.insert(samples.end(), values.begin(), values.end());
            }
        }
        return AresModel(params, features.size(), std::move(samples));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed ARES model: ") + e.what());
    }
}

void AresModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << to_json() << '\n';
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

AresModel AresModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

AresModel ares_fit(const Dataset& data, const AresParams& params) {
    if (params.psi == 0 || params.t == 0) {
        throw InvalidArgument("ARES needs psi >= 1 and t >= 1");
    }
    if (params.psi > data.rows()) {
        throw InvalidArgument("ARES sub-sample size psi = " + std::to_string(params.psi) +
                              " exceeds instance count " + std::to_string(data.rows()));
    }
    const std::size_t d = data.cols();
    std::vector<double> samples(d * params.t * params.psi);
    auto fill = [&](std::size_t feature, std::size_t member,
                    const std::vector<std::size_t>& rows) {
        auto* out = samples.data() + (feature * params.t + member) * params.psi;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            out[k] = data(rows[k], feature);
        }
        std::sort(out, out + params.psi);
    };
    for (std::size_t m = 0; m < params.t; ++m) {
        if (params.mode == SubsampleMode::shared_rows) {
            Rng rng(derive_seed(params.seed, m));
            const auto rows = sample_without_replacement(rng, data.rows(), params.psi);
            for (std::size_t f = 0; f < d; ++f) {
                fill(f, m, rows);
            }
        } else {
            for (std::size_t f = 0; f < d; ++f) {
                Rng rng(derive_seed(params.seed, f, m));
                fill(f, m, sample_without_replacement(rng, data.rows(), params.psi));
            }
        }
    }
    return AresModel(params, d, std::move(samples));
}

Dataset ares_apply(const AresModel& model, const Dataset& data, std::size_t threads) {
    require_same_width(model.features(), data, "ares_apply");
    std::vector<double> out(data.values().size());
    const std::size_t d = data.cols();
    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out[i * d + j] = model.transform_value(j, data(i, j));
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, data.rows());
    if (threads == 1) {
        run_block(0, data.rows());
    } else {
        std::vector<std::jthread> workers;
        const std::size_t block = (data.rows() + threads - 1) / threads;
        for (std::size_t begin = 0; begin < data.rows(); begin += block) {
            workers.emplace_back(run_block, begin, std::min(data.rows(), begin + block));
        }
    }
    return data.with_values(std::move(out));
}

Dataset ares_transform_by_index(const Dataset& data, AresParams params) {
    params.mode = SubsampleMode::shared_rows;
    return ares_apply(ares_fit(data, params), data);
}

// ---------------------------------------------------------------------------
// Scaling

std::string_view to_string(ScalingKind kind) {
    switch (kind) {
    case ScalingKind::identity: return "identity";
    case ScalingKind::square: return "square";
    case ScalingKind::sqrt: return "sqrt";
    case ScalingKind::log: return "log";
    case ScalingKind::inverse: return "inverse";
    }
    return "?";
}

ScalingKind parse_scaling(std::string_view name) {
    for (auto kind : {ScalingKind::identity, ScalingKind::square, ScalingKind::sqrt,
                      ScalingKind::log, ScalingKind::inverse}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    if (name == "x") {
        return ScalingKind::identity;
    }
    throw InvalidArgument("unknown scaling '" + std::string(name) + "'");
}

Dataset scale(const Dataset& data, const ScalingParams& params) {
    if (!(params.alpha > 0.0) || !(params.c > 0.0)) {
        throw InvalidArgument("scaling needs alpha > 0 and c > 0");
    }
    if (params.kind == ScalingKind::identity) {
        return data;
    }
    const std::size_t d = data.cols();
    std::vector<double> shift(d, 0.0);
    if (params.kind != ScalingKind::square) {
        const auto mm = minmax_fit(data);
        for (std::size_t j = 0; j < d; ++j) {
            if (params.shift == ColumnShift::always || mm.min[j] < 0.0) {
                shift[j] = mm.min[j];
            }
        }
    }
    std::vector<double> out(data.values().size());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double x = data(i, j);
            const double arg = params.c * ((x - shift[j]) + params.alpha);
            double y = 0.0;
            switch (params.kind) {
            case ScalingKind::square: y = x * x; break;
            case ScalingKind::sqrt: y = std::sqrt(arg); break;
            case ScalingKind::log: y = std::log(arg); break;
            case ScalingKind::inverse: y = 1.0 / arg; break;
            case ScalingKind::identity: y = x; break;
            }
            if (!std::isfinite(y)) {
                throw InvalidArgument(std::string("scaling '") +
                                      std::string(to_string(params.kind)) +
                                      "' produced a non-finite value at row " + std::to_string(i) +
                                      ", column '" + data.column_names()[j] + "'");
            }
            out[i * d + j] = y;
        }
    }
    return data.with_values(std::move(out));
}

} // namespace ares
