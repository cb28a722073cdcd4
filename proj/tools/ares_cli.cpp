// ares: command-line front end for the ARES preprocessing library.
//
//   ares transform  --method ares --psi 8 --t 50 --in data.csv --out ares.csv
//   ares cluster    --algo dp --k 2 --eps 0.1 --in ares.csv --out pred.csv
//   ares eval       --truth data.csv --label-column class --pred pred.csv
//   ares experiment --config jain.ini --out results.md --format markdown
//   ares hist       --feature x --bins 50 --in data.csv --out hist.csv

#include "ares/cluster.hpp"
#include "ares/dataset.hpp"
#include "ares/error.hpp"
#include "ares/eval.hpp"
#include "ares/harness.hpp"
#include "ares/transform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::optional<std::string> non_empty(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional(s);
}

struct TransformArgs {
    std::string method = "ares";
    std::size_t psi = 8;
    std::size_t t = 50;
    std::uint64_t seed = 0;
    bool per_feature = false;
    bool raw_ranks = false;
    std::string in, out, label_column, model_out, model_in;
};

void run_transform(const TransformArgs& a) {
    const auto input = ares::load_dataset(a.in, non_empty(a.label_column));
    std::optional<ares::Dataset> result;
    if (a.method == "minmax") {
        result = ares::minmax_normalize(input.data);
    } else if (a.method == "rank") {
        result = ares::rank_transform(input.data);
    } else if (a.method == "ares") {
        if (!a.model_in.empty()) {
            result = ares::ares_apply(ares::AresModel::load(a.model_in), input.data);
        } else {
            ares::AresParams params;
            params.psi = a.psi;
            params.t = a.t;
            params.seed = a.seed;
            params.normalize_output = !a.raw_ranks;
            params.mode = a.per_feature ? ares::SubsampleMode::per_feature
                                        : ares::SubsampleMode::shared_rows;
            const auto model = ares::ares_fit(input.data, params);
            if (!a.model_out.empty()) {
                model.save(a.model_out);
            }
            result = ares::ares_apply(model, input.data);
        }
    } else {
        throw ares::InvalidArgument("unknown method '" + a.method + "'");
    }
    ares::save_csv(*result, input.labels ? &*input.labels : nullptr, a.out);
}

struct ScaleArgs {
    std::string kind;
    double alpha = 0.0001;
    double c = 100.0;
    bool always_shift = false;
    std::string in, out, label_column;
};

void run_scale(const ScaleArgs& a) {
    const auto input = ares::load_dataset(a.in, non_empty(a.label_column));
    const ares::ScalingParams params{ares::parse_scaling(a.kind), a.alpha, a.c,
                                     a.always_shift ? ares::ColumnShift::always
                                                    : ares::ColumnShift::when_negative};
    ares::save_csv(ares::scale(input.data, params), input.labels ? &*input.labels : nullptr,
                   a.out);
}

struct ClusterArgs {
    std::string algo;
    std::size_t k = 2;
    double eps = 0.1;
    std::size_t min_pts = 4;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    std::size_t max_iter = 100;
    std::string in, out, label_column;
};

void run_cluster(const ClusterArgs& a) {
    const auto input = ares::load_dataset(a.in, non_empty(a.label_column));
    ares::ClusteringResult result;
    switch (ares::parse_algorithm(a.algo)) {
    case ares::Algorithm::kmeans:
        result = ares::kmeans_run(input.data, {a.k, a.max_iter, a.restarts, a.seed});
        break;
    case ares::Algorithm::dbscan:
        result = ares::dbscan_run(input.data, {a.eps, a.min_pts});
        break;
    case ares::Algorithm::dp:
        result = ares::dp_run(input.data, {a.k, a.eps});
        break;
    }
    ares::save_clustering_csv(result, a.out);
}

struct EvalArgs {
    std::string truth, pred, label_column = "label";
};

void run_eval(const EvalArgs& a) {
    const auto truth = ares::load_dataset(a.truth, non_empty(a.label_column));
    if (!truth.labels) {
        throw ares::InvalidArgument("'" + a.truth + "' has no label column");
    }
    const auto pred = ares::load_clustering_csv(a.pred);
    std::cout << ares::format_f1(ares::f1_measure(*truth.labels, pred)) << '\n';
}

struct ExperimentArgs {
    std::string config, out, format = "csv";
    std::vector<std::pair<std::string, std::string>> overrides;
};

struct HistArgs {
    std::string feature, in, out, label_column;
    std::size_t bins = 50;
};

struct GenerateArgs {
    std::string kind, out;
    std::uint64_t seed = 1;
    std::vector<std::size_t> counts{100, 100, 50};
    std::size_t k = 3, n = 50, d = 2;
    double separation = 10.0, sd = 0.5;
};

void run_generate(const GenerateArgs& a) {
    ares::LabeledDataset generated{ares::Dataset({"x"}, {0.0}), std::nullopt};
    if (a.kind == "three-cluster-1d") {
        if (a.counts.size() != 3) {
            throw ares::InvalidArgument("--counts takes exactly three values");
        }
        generated = ares::generate_three_cluster_1d(a.seed, {a.counts[0], a.counts[1], a.counts[2]});
    } else if (a.kind == "blobs") {
        generated = ares::generate_blobs(a.seed, a.k, a.n, a.d, a.separation, a.sd);
    } else if (a.kind == "crescents") {
        generated = ares::generate_two_crescents(a.seed);
    } else {
        throw ares::InvalidArgument("unknown generator '" + a.kind + "'");
    }
    ares::save_csv(generated.data, &*generated.labels, a.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ARES preprocessing, clustering and benchmark harness"};
    app.require_subcommand(1);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "Preprocess a dataset (minmax, rank, ares)");
    transform->add_option("--method", ta.method, "minmax | rank | ares")
        ->check(CLI::IsMember({"minmax", "rank", "ares"}));
    transform->add_option("--psi", ta.psi, "ARES sub-sample size");
    transform->add_option("--t", ta.t, "ARES ensemble size");
    transform->add_option("--seed", ta.seed, "ARES seed");
    transform->add_flag("--per-feature", ta.per_feature, "Independent sub-samples per feature");
    transform->add_flag("--raw-ranks", ta.raw_ranks, "Do not divide ARES output by psi");
    transform->add_option("--in", ta.in, "Input CSV or ARFF")->required();
    transform->add_option("--out", ta.out, "Output CSV")->required();
    transform->add_option("--label-column", ta.label_column, "Label column passed through");
    transform->add_option("--model-out", ta.model_out, "Write the fitted ARES model (JSON)");
    transform->add_option("--model-in", ta.model_in, "Apply a saved ARES model");

    ScaleArgs sa;
    auto* scale = app.add_subcommand("scale", "Apply a non-linear re-scaling");
    scale->add_option("--kind", sa.kind, "identity | square | sqrt | log | inverse")->required();
    scale->add_option("--alpha", sa.alpha, "Shift constant");
    scale->add_option("--c", sa.c, "Multiplier");
    scale->add_flag("--always-shift", sa.always_shift, "Subtract the column minimum even if >= 0");
    scale->add_option("--in", sa.in)->required();
    scale->add_option("--out", sa.out)->required();
    scale->add_option("--label-column", sa.label_column);

    ClusterArgs ca;
    auto* cluster = app.add_subcommand("cluster", "Cluster a dataset");
    cluster->add_option("--algo", ca.algo, "kmeans | dbscan | dp")
        ->required()
        ->check(CLI::IsMember({"kmeans", "dbscan", "dp"}));
    cluster->add_option("--k", ca.k, "Cluster count (kmeans, dp)");
    cluster->add_option("--eps", ca.eps, "DBSCAN radius / DP cutoff distance");
    cluster->add_option("--min-pts", ca.min_pts, "DBSCAN density threshold");
    cluster->add_option("--seed", ca.seed, "KMeans seed");
    cluster->add_option("--restarts", ca.restarts, "KMeans restarts");
    cluster->add_option("--max-iter", ca.max_iter, "KMeans iteration cap");
    cluster->add_option("--in", ca.in)->required();
    cluster->add_option("--out", ca.out, "row_index,cluster_id CSV")->required();
    cluster->add_option("--label-column", ca.label_column, "Column to drop before clustering");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "F1-measure of a clustering against ground truth");
    eval->add_option("--truth", ea.truth, "Dataset carrying the labels")->required();
    eval->add_option("--pred", ea.pred, "Clustering CSV")->required();
    eval->add_option("--label-column", ea.label_column, "Label column in --truth");

    ExperimentArgs xa;
    auto* experiment = app.add_subcommand("experiment", "Run a transform x scaling x algorithm sweep");
    experiment->add_option("--config", xa.config, "INI-style experiment file")->required();
    experiment->add_option("--out", xa.out, "Report path")->required();
    experiment->add_option("--format", xa.format, "csv | markdown")
        ->check(CLI::IsMember({"csv", "markdown", "md"}));
    for (const char* key : {"dataset", "label_column", "name", "transforms", "scalings",
                            "algorithms", "eps", "min_pts", "psi", "t", "k", "seed", "threads",
                            "kmeans_restarts", "kmeans_max_iter", "alpha", "c", "shift"}) {
        std::string flag = std::string("--") + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        experiment->add_option_function<std::string>(
            flag, [&xa, key](const std::string& v) { xa.overrides.emplace_back(key, v); },
            std::string("Override config key '") + key + "'");
    }

    HistArgs ha;
    auto* hist = app.add_subcommand("hist", "Histogram of one min-max normalised feature");
    hist->add_option("--feature", ha.feature)->required();
    hist->add_option("--bins", ha.bins)->check(CLI::PositiveNumber);
    hist->add_option("--in", ha.in)->required();
    hist->add_option("--out", ha.out)->required();
    hist->add_option("--label-column", ha.label_column);

    GenerateArgs ga;
    auto* generate = app.add_subcommand("generate", "Write a synthetic fixture");
    generate->add_option("--kind", ga.kind, "three-cluster-1d | blobs | crescents")
        ->required()
        ->check(CLI::IsMember({"three-cluster-1d", "blobs", "crescents"}));
    generate->add_option("--seed", ga.seed);
    generate->add_option("--counts", ga.counts, "three-cluster-1d sizes")->expected(3);
    generate->add_option("--k", ga.k, "blobs: count");
    generate->add_option("--n", ga.n, "blobs: points per blob");
    generate->add_option("--d", ga.d, "blobs: dimensions");
    generate->add_option("--separation", ga.separation, "blobs: centre spacing");
    generate->add_option("--sd", ga.sd, "blobs: standard deviation");
    generate->add_option("--out", ga.out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*transform) {
            run_transform(ta);
        } else if (*scale) {
            run_scale(sa);
        } else if (*cluster) {
            run_cluster(ca);
        } else if (*eval) {
            run_eval(ea);
        } else if (*experiment) {
            auto config = ares::load_config(xa.config);
            for (const auto& [key, value] : xa.overrides) {
                ares::apply_config_value(config, key, value);
            }
            const auto table = ares::run_experiment(config);
            ares::emit_report(table, ares::parse_report_format(xa.format), xa.out);
            std::cout << ares::render_csv(table);
        } else if (*hist) {
            const auto input = ares::load_dataset(ha.in, non_empty(ha.label_column));
            ares::emit_histogram(input.data, ha.feature, ha.bins, ha.out);
        } else if (*generate) {
            run_generate(ga);
        }
    } catch (const std::exception& e) {
        std::cerr << "ares: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
