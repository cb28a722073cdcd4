#include "ares/error.hpp"
#include "ares/eval.hpp"
#include "ares/harness.hpp"
#include "ares/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

ares::SearchGrid tiny_grid() {
    ares::SearchGrid g;
    g.eps = {0.05, 0.1, 0.2};
    g.min_pts = {3, 4};
    g.psi = {2, 4};
    g.t = {10, 20};
    g.kmeans_restarts = 3;
    return g;
}

ares::ResultTable strip_runtime(ares::ResultTable t) {
    for (auto& r : t.rows) r.runtime_ms = 0.0;
    return t;
}

bool same_results(const ares::ResultTable& a, const ares::ResultTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto &x = a.rows[i], &y = b.rows[i];
        if (x.dataset != y.dataset || x.transform != y.transform || x.scaling != y.scaling ||
            x.algorithm != y.algorithm || !(x.best_params == y.best_params) ||
            x.best_f1 != y.best_f1 || x.evaluations != y.evaluations || x.error != y.error) {
            return false;
        }
    }
    return true;
}

// Dense 1-D three-group fixture, cleanly separable by DBSCAN.
ares::LabeledDataset dense_line() {
    std::vector<double> v;
    std::vector<int> l;
    for (int g = 0; g < 3; ++g) {
        for (int i = 0; i < 20; ++i) {
            v.push_back(g * 3.0 + i * 0.02);
            l.push_back(g);
        }
    }
    return {ares::Dataset({"x"}, v), ares::LabelVector(l)};
}

} // namespace

TEST_CASE("names round trip") {
    for (auto t : {ares::TransformKind::minmax, ares::TransformKind::rank, ares::TransformKind::ares}) {
        CHECK(ares::parse_transform(ares::to_string(t)) == t);
    }
    for (auto a : {ares::Algorithm::kmeans, ares::Algorithm::dbscan, ares::Algorithm::dp}) {
        CHECK(ares::parse_algorithm(ares::to_string(a)) == a);
    }
    CHECK_THROWS_AS(ares::parse_transform("zscore"), ares::InvalidArgument);
    CHECK_THROWS_AS(ares::parse_algorithm("optics"), ares::InvalidArgument);
}

TEST_CASE("default eps grid") {
    const auto eps = ares::default_eps_grid();
    REQUIRE(eps.size() == 50);
    CHECK(eps.front() == 0.01);
    CHECK(eps[11] == 0.12);
    CHECK(eps.back() == 0.5);
}

TEST_CASE("GridPoint describe") {
    ares::GridPoint p;
    p.psi = 8;
    p.t = 50;
    p.eps = 0.12;
    CHECK(p.describe() == "psi=8;t=50;eps=0.12");
    ares::GridPoint q;
    q.k = 3;
    CHECK(q.describe() == "k=3");
}

TEST_CASE("grid search on a single-point grid") {
    const auto fx = dense_line();
    ares::SearchGrid g;
    g.eps = {0.05};
    g.min_pts = {3};
    const auto out = ares::grid_search(fx.data, *fx.labels, ares::Algorithm::dbscan, g, 3, 1);
    CHECK(out.evaluations == 1);
    CHECK(out.best.eps == 0.05);
    CHECK(out.best.min_pts == 3u);
    const auto direct = ares::f1_measure(*fx.labels, ares::dbscan_run(fx.data, {0.05, 3}));
    CHECK(out.best_f1 == direct);
}

TEST_CASE("grid search returns the first maximum of an exhaustive loop") {
    ares::Rng rng(2);
    const auto d = oracle::random_clumpy(rng, 60, 2);
    std::vector<int> l(60);
    for (std::size_t i = 0; i < 60; ++i) l[i] = static_cast<int>(i % 2);
    const ares::LabelVector truth(l);
    const auto g = tiny_grid();

    double best = -1;
    ares::GridPoint at;
    for (double eps : g.eps) {
        for (auto m : g.min_pts) {
            const double f = ares::f1_measure(truth, ares::dbscan_run(d, {eps, m}));
            if (f > best) {
                best = f;
                at = {};
                at.eps = eps;
                at.min_pts = m;
            }
        }
    }
    const auto out = ares::grid_search(d, truth, ares::Algorithm::dbscan, g, 2, 0);
    CHECK(out.best_f1 == best);
    CHECK(out.best == at);
    CHECK(out.evaluations == 6);

    best = -1;
    for (double eps : g.eps) best = std::max(best, ares::f1_measure(truth, ares::dp_run(d, {2, eps})));
    CHECK(ares::grid_search(d, truth, ares::Algorithm::dp, g, 2, 0).best_f1 == best);
}

TEST_CASE("dbscan reaches a perfect score on a separable line with the default grid") {
    const auto fx = dense_line();
    const auto norm = ares::minmax_normalize(fx.data);
    const auto out = ares::grid_search(norm, *fx.labels, ares::Algorithm::dbscan, {}, 3, 1);
    CHECK(out.best_f1 == 1.0);
    CHECK(out.evaluations == 250);
}

TEST_CASE("experiment with one combination gives one row") {
    const auto fx = dense_line();
    ares::ExperimentConfig cfg;
    cfg.dataset_name = "line";
    cfg.transforms = {ares::TransformKind::minmax};
    cfg.algorithms = {ares::Algorithm::dp};
    cfg.grid = tiny_grid();
    const auto table = ares::run_experiment(cfg, fx.data, *fx.labels);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].ok());
    CHECK(table.rows[0].dataset == "line");
    CHECK(table.rows[0].evaluations == 3);
    CHECK(table.rows[0].best_f1 == 1.0);
}

TEST_CASE("evaluation counts follow the grid sizes") {
    const auto fx = dense_line();
    ares::ExperimentConfig cfg;
    cfg.grid = tiny_grid();
    cfg.scalings = {ares::ScalingKind::identity, ares::ScalingKind::log};
    const auto table = ares::run_experiment(cfg, fx.data, *fx.labels);
    CHECK(table.rows.size() == 2 * 3 * 3);
    for (const auto& row : table.rows) {
        REQUIRE(row.ok());
        CHECK(row.evaluations == ares::expected_evaluations(cfg.grid, row.transform, row.algorithm));
    }
    CHECK(ares::expected_evaluations(cfg.grid, ares::TransformKind::ares, ares::Algorithm::dbscan) == 4 * 6);
    CHECK(ares::expected_evaluations(cfg.grid, ares::TransformKind::rank, ares::Algorithm::kmeans) == 1);
    CHECK(ares::expected_evaluations({}, ares::TransformKind::ares, ares::Algorithm::dp) == 24 * 50);
}

TEST_CASE("experiments are deterministic and independent of thread count") {
    ares::Rng rng(4);
    const auto d = oracle::random_clumpy(rng, 80, 2, true);
    std::vector<int> l(80);
    for (std::size_t i = 0; i < 80; ++i) l[i] = static_cast<int>(i % 3);
    const ares::LabelVector truth(l);
    ares::ExperimentConfig cfg;
    cfg.grid = tiny_grid();
    cfg.scalings = {ares::ScalingKind::identity, ares::ScalingKind::sqrt};
    const auto a = ares::run_experiment(cfg, d, truth);
    const auto b = ares::run_experiment(cfg, d, truth);
    CHECK(same_results(a, b));
    cfg.threads = 3;
    CHECK(same_results(strip_runtime(a), strip_runtime(ares::run_experiment(cfg, d, truth))));
    cfg.seed = 2;
    cfg.threads = 1;
    const auto c = ares::run_experiment(cfg, d, truth);
    CHECK(c.rows.size() == a.rows.size());
}

TEST_CASE("rank and ARES results do not depend on increasing re-scalings") {
    const auto fx = ares::generate_three_cluster_1d(3, {60, 60, 30});
    ares::ExperimentConfig cfg;
    cfg.transforms = {ares::TransformKind::rank, ares::TransformKind::ares};
    cfg.scalings = {ares::ScalingKind::identity, ares::ScalingKind::square, ares::ScalingKind::sqrt,
                    ares::ScalingKind::log, ares::ScalingKind::inverse};
    const auto table = ares::run_experiment(cfg, fx.data, *fx.labels);
    for (const auto& row : table.rows) {
        REQUIRE(row.ok());
        const auto& ref = *std::find_if(table.rows.begin(), table.rows.end(), [&](const auto& r) {
            return r.transform == row.transform && r.algorithm == row.algorithm &&
                   r.scaling == ares::ScalingKind::identity;
        });
        if (row.scaling == ares::ScalingKind::inverse) {
            // Decreasing map: ranks reverse, clusterings agree up to sample boundary effects.
            CHECK(std::abs(row.best_f1 - ref.best_f1) <= 0.02);
        } else {
            CHECK(row.best_f1 == ref.best_f1);
            CHECK(row.best_params == ref.best_params);
        }
    }
}

TEST_CASE("min-max results do not depend on positive affine maps") {
    const auto fx = dense_line();
    std::vector<double> v(fx.data.values().begin(), fx.data.values().end());
    for (auto& x : v) x = 4.0 * x + 8.0;
    ares::ExperimentConfig cfg;
    cfg.grid = tiny_grid();
    cfg.transforms = {ares::TransformKind::minmax};
    const auto a = ares::run_experiment(cfg, fx.data, *fx.labels);
    const auto b = ares::run_experiment(cfg, fx.data.with_values(v), *fx.labels);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].best_f1 == doctest::Approx(b.rows[i].best_f1));
    }
}

TEST_CASE("a failing combination becomes an error row") {
    const auto fx = dense_line();
    ares::ExperimentConfig cfg;
    cfg.grid = tiny_grid();
    cfg.grid.psi = {1000};
    cfg.transforms = {ares::TransformKind::ares, ares::TransformKind::minmax};
    cfg.algorithms = {ares::Algorithm::dp};
    const auto table = ares::run_experiment(cfg, fx.data, *fx.labels);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].ok());
    CHECK_FALSE(table.rows[1].ok());
    CHECK(ares::render_markdown(table).find("error") != std::string::npos);
}

TEST_CASE("reports") {
    ares::ResultTable table;
    ares::ResultRow row;
    row.dataset = "toy";
    row.transform = ares::TransformKind::ares;
    row.algorithm = ares::Algorithm::dp;
    row.best_f1 = 1.0 / 3.0;
    row.best_params.eps = 0.1;
    row.evaluations = 5;
    table.rows.push_back(row);
    const auto csv = ares::render_csv(table);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find("toy,ares,identity,dp,eps=0.1,0.3333,5,") != std::string::npos);

    row.transform = ares::TransformKind::minmax;
    row.best_f1 = 0.9;
    table.rows.push_back(row);
    const auto md = ares::render_markdown(table);
    CHECK(std::count(md.begin(), md.end(), '\n') == 3);
    CHECK(md.find("**0.9000**") != std::string::npos);
    CHECK(md.find(" 0.3333 |") != std::string::npos);
    CHECK(md.find("dp minmax") < md.find("dp ares"));

    CHECK(ares::format_f1(2.0 / 3.0) == "0.6667");
    CHECK(ares::parse_report_format("md") == ares::ReportFormat::markdown);
    CHECK_THROWS_AS(ares::parse_report_format("html"), ares::InvalidArgument);
}

TEST_CASE("histogram") {
    const auto d = ares::Dataset({"x"}, {0, 0.5, 1, 1});
    const auto h = ares::histogram(d, "x", 2);
    REQUIRE(h.size() == 2);
    CHECK(h[0].center == 0.25);
    CHECK(h[0].count == 1);
    CHECK(h[1].count == 3);

    const auto flat = ares::histogram(ares::Dataset({"x"}, {3, 3, 3}), "x", 10);
    std::size_t nonzero = 0, total = 0;
    for (const auto& b : flat) {
        nonzero += b.count > 0;
        total += b.count;
    }
    CHECK(nonzero == 1);
    CHECK(total == 3);
    CHECK_THROWS_AS(ares::histogram(d, "y", 2), ares::InvalidArgument);
    CHECK_THROWS_AS(ares::histogram(d, "x", 0), ares::InvalidArgument);
}

TEST_CASE("histogram of the three-cluster fixture shows its modes") {
    const auto fx = ares::generate_three_cluster_1d(1, {400, 400, 200});
    const auto h = ares::histogram(fx.data, "x", 50);
    std::size_t total = 0;
    for (const auto& b : h) total += b.count;
    CHECK(total == 1000);
    // Smooth with a 3-bin window and count interior local maxima.
    std::vector<double> s(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        double sum = 0;
        int n = 0;
        for (int o = -1; o <= 1; ++o) {
            const auto j = static_cast<std::ptrdiff_t>(i) + o;
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(h.size())) {
                sum += static_cast<double>(h[static_cast<std::size_t>(j)].count);
                ++n;
            }
        }
        s[i] = sum / n;
    }
    int peaks = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double left = i ? s[i - 1] : -1, right = i + 1 < s.size() ? s[i + 1] : -1;
        peaks += s[i] > left && s[i] >= right && s[i] > 5;
    }
    CHECK(peaks >= 3);
}

TEST_CASE("config parsing") {
    std::istringstream in(R"(# sweep
[experiment]
dataset = data.csv
label_column = class
transforms = minmax, ares
scalings = identity,log ; trailing comment
algorithms = dp
eps = 0.05:0.2:0.05
psi = 2,4
t = 10
k = 3
seed = 7
threads = 2
shift = always
)");
    const auto cfg = ares::parse_config(in, "test.ini");
    CHECK(cfg.dataset_path == "data.csv");
    CHECK(cfg.label_column == std::optional<std::string>("class"));
    CHECK(cfg.transforms == std::vector{ares::TransformKind::minmax, ares::TransformKind::ares});
    CHECK(cfg.scalings == std::vector{ares::ScalingKind::identity, ares::ScalingKind::log});
    CHECK(cfg.algorithms == std::vector{ares::Algorithm::dp});
    CHECK(cfg.grid.eps == std::vector<double>{0.05, 0.1, 0.15, 0.2});
    CHECK(cfg.grid.psi == std::vector<std::size_t>{2, 4});
    CHECK(cfg.k == std::optional<std::size_t>(3));
    CHECK(cfg.seed == 7);
    CHECK(cfg.threads == 2);
    CHECK(cfg.shift == ares::ColumnShift::always);

    std::istringstream unknown("colour = blue\n");
    CHECK_THROWS_WITH_AS(ares::parse_config(unknown, "x.ini"), doctest::Contains("colour"), ares::ParseError);
    std::istringstream no_equals("dataset\n");
    CHECK_THROWS_AS(ares::parse_config(no_equals), ares::ParseError);
    std::istringstream bad_number("psi = two\n");
    CHECK_THROWS_AS(ares::parse_config(bad_number), ares::ParseError);
}

TEST_CASE("load_config resolves the dataset next to the config file") {
    const auto dir = std::filesystem::temp_directory_path() / "ares_cfg_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "a.ini") << "dataset = sub/data.csv\n";
    }
    const auto cfg = ares::load_config(dir / "a.ini");
    CHECK(cfg.dataset_path == dir / "sub/data.csv");
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(ares::load_config(dir / "missing.ini"), ares::IoError);
}

TEST_CASE("bundled example config runs end to end") {
    const auto cfg = ares::load_config(std::filesystem::path(ARES_DATA_DIR) / "jain_like.ini");
    auto small = cfg;
    small.grid.psi = {4};
    small.grid.t = {50};
    small.scalings = {ares::ScalingKind::identity};
    const auto table = ares::run_experiment(small);
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) CHECK(row.ok());
}
