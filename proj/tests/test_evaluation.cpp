#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <tailsel/benchmark.hpp>
#include <tailsel/learners/logistic.hpp>
#include <tailsel/metrics.hpp>
#include <tailsel/permutation.hpp>
#include <tailsel/report.hpp>
#include <tailsel/rng.hpp>

#include "helpers.hpp"

using Catch::Approx;
using namespace tailsel;

TEST_CASE("classification metrics on hand-checked tables", "[evaluation]") {
    const MetricsBlock perfect = metrics({0, 1, 0, 1}, {0, 1, 0, 1});
    REQUIRE(perfect.accuracy == 1.0);
    REQUIRE(perfect.precision_weighted == 1.0);
    REQUIRE(perfect.recall_weighted == 1.0);
    REQUIRE(perfect.f1_weighted == 1.0);

    const MetricsBlock block = metrics({0, 0, 1, 1}, {0, 1, 1, 1});
    REQUIRE(block.accuracy == Approx(0.75).margin(1e-15));
    REQUIRE(block.precision_weighted == Approx(5.0 / 6.0).margin(1e-15));
    REQUIRE(block.recall_weighted == Approx(0.75).margin(1e-15));
    REQUIRE(block.f1_weighted == Approx(11.0 / 15.0).margin(1e-15));

    REQUIRE_THROWS_AS(metrics({0, 2}, {0, 1}), DataError);
    REQUIRE_THROWS_AS(metrics({0, 1}, {0}), DataError);
    REQUIRE_THROWS_AS(metrics({}, {}), DataError);
}

TEST_CASE("prevalence-weighted recall is the accuracy, bit for bit", "[evaluation]") {
    Rng rng(2718);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 1 + rng.next_below(64);
        std::vector<int> y_true(n), y_pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_true[i] = static_cast<int>(rng.next_below(2));
            y_pred[i] = static_cast<int>(rng.next_below(2));
        }
        const MetricsBlock block = metrics(y_true, y_pred);
        REQUIRE(block.recall_weighted == block.accuracy);
    }
}

TEST_CASE("a majority-class predictor has the squared-prevalence precision", "[evaluation]") {
    std::vector<int> y_true(10000, 0);
    for (std::size_t i = 0; i < 8607; ++i) y_true[i] = 1;
    const std::vector<int> y_pred(10000, 1);
    const MetricsBlock block = metrics(y_true, y_pred);
    REQUIRE(block.accuracy == 8607.0 / 10000.0);
    REQUIRE(block.recall_weighted == 8607.0 / 10000.0);
    REQUIRE(block.precision_weighted == (8607.0 / 10000.0) * (8607.0 / 10000.0));
}

TEST_CASE("rank-based auc matches pair counting", "[evaluation]") {
    REQUIRE(roc_auc({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9}) == 1.0);
    REQUIRE(roc_auc({0, 0, 1, 1}, {0.1, 0.4, 0.35, 0.8}) == Approx(0.75).margin(1e-15));
    REQUIRE(roc_auc({0, 1, 0, 1}, {0.7, 0.7, 0.7, 0.7}) == Approx(0.5).margin(1e-15));
    REQUIRE_THROWS_AS(roc_auc({1, 1}, {0.2, 0.3}), StatError);
    REQUIRE_THROWS_AS(roc_auc({0, 2}, {0.2, 0.3}), DataError);

    // complement symmetry when no scores tie
    Rng rng(515);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.next_below(40);
        std::vector<int> y(n);
        std::vector<double> s(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.next_below(2));
            s[i] = rng.uniform_open();
            neg[i] = -s[i];
        }
        y[0] = 0;
        y[n - 1] = 1;
        REQUIRE(roc_auc(y, s) + roc_auc(y, neg) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("rank-based auc equals the brute-force pair count", "[evaluation]") {
    Rng rng(91);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.next_below(299);
        std::vector<int> y(n);
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.next_below(2));
            s[i] = static_cast<double>(rng.next_below(12));  // heavy ties
        }
        y[0] = 0;
        y[n - 1] = 1;
        REQUIRE(roc_auc(y, s) == helpers::brute_auc(y, s));
    }
}

TEST_CASE("permuting a feature the model ignores costs nothing", "[evaluation]") {
    TrainedModel model;
    model.kind = LearnerKind::logistic;
    model.feature_names = {"used", "ignored"};
    model.weights = {2.0, 0.0, 0.0};

    const std::size_t n = 400;
    Rng rng(300);
    std::vector<std::vector<double>> x(2, std::vector<double>(n));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[0][i] = 2.0 * rng.uniform_open() - 1.0;
        x[1][i] = rng.uniform_open();
        y[i] = x[0][i] > 0.0 ? 1 : 0;
    }

    const auto records = permutation_importance(model, x, y, 10, 4);
    REQUIRE(records.size() == 2);
    REQUIRE(records[0].feature_name == "used");
    REQUIRE(records[1].feature_name == "ignored");
    REQUIRE(records[1].mean_drop == 0.0);
    REQUIRE(records[1].std_drop == 0.0);
    REQUIRE(records[1].repeats == 10);

    // destroying the only informative feature forfeits about half the rows
    REQUIRE(records[0].mean_drop == Approx(0.5).margin(0.1));
    REQUIRE(records[0].std_drop >= 0.0);

    const auto again = permutation_importance(model, x, y, 10, 4);
    for (std::size_t j = 0; j < 2; ++j) {
        REQUIRE(again[j].mean_drop == records[j].mean_drop);
        REQUIRE(again[j].std_drop == records[j].std_drop);
    }

    REQUIRE_THROWS_AS(permutation_importance(model, x, y, 0, 4), DomainError);
}

namespace {

// five informative continuous columns whose sum decides the label, plus
// low-cardinality noise columns
BinaryDataset make_benchmark_data(std::size_t n, std::size_t noise, std::uint64_t seed) {
    BinaryDataset data;
    Rng rng(seed);
    const std::size_t d = 5 + noise;
    data.columns.assign(d, std::vector<double>(n));
    data.target.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            data.columns[j][i] = 2.0 * rng.uniform_open() - 1.0;
            sum += data.columns[j][i];
        }
        data.target[i] = sum > 0.0 ? 1 : 0;
        for (std::size_t j = 5; j < d; ++j)
            data.columns[j][i] = static_cast<double>(rng.next_below(4));
    }
    for (std::size_t j = 0; j < d; ++j) data.feature_names.push_back("f" + std::to_string(j));
    data.target_name = "label";
    data.n = n;
    return data;
}

// all-discrete columns plus a canary that equals the label on the rows a
// seed-7 benchmark holds out for evaluation and is flat everywhere else
BinaryDataset make_leak_data(std::size_t n, double test_fraction, std::uint64_t seed) {
    BinaryDataset data;
    Rng rng(seed);
    const std::size_t d = 8;  // 5 tilted + 2 noise + canary
    data.columns.assign(d, std::vector<double>(n));
    data.target.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        data.target[i] = rng.uniform_open() < 0.5 ? 1 : 0;
        for (std::size_t j = 0; j < 5; ++j)
            data.columns[j][i] =
                static_cast<double>(rng.next_below(3) + static_cast<std::uint64_t>(data.target[i]));
        for (std::size_t j = 5; j < 7; ++j)
            data.columns[j][i] = static_cast<double>(rng.next_below(4));
        data.columns[7][i] = 0.5;
    }
    data.target[0] = 0;
    data.target[1] = 1;
    for (std::size_t j = 0; j < d; ++j) data.feature_names.push_back("f" + std::to_string(j));
    data.feature_names.back() = "leak";
    data.target_name = "label";
    data.n = n;
    const SplitIndices split = stratified_split(data.target, test_fraction, derive_seed(7, 1));
    for (const std::size_t r : split.test)
        data.columns[7][r] = static_cast<double>(data.target[r]);
    return data;
}

const EvalCell& cell_for(const EvalReport& report, const std::string& feature_set,
                         const std::string& model) {
    for (const EvalCell& cell : report.cells)
        if (cell.block.feature_set == feature_set && cell.block.model == model) return cell;
    throw std::runtime_error("cell not found: " + feature_set + "/" + model);
}

}  // namespace

TEST_CASE("the benchmark grid covers every selector-model pair", "[evaluation]") {
    const BinaryDataset data = make_benchmark_data(900, 3, 2501);
    BenchmarkOptions opt;
    opt.k = 3;
    opt.seed = 7;
    opt.importance_repeats = 5;

    const EvalReport report = run_benchmark(data, opt);
    REQUIRE(report.cells.size() == 16);
    std::size_t at = 0;
    for (const std::string& fs : feature_set_labels())
        for (const std::string& ml : model_labels()) {
            REQUIRE(report.cells[at].block.feature_set == fs);
            REQUIRE(report.cells[at].block.model == ml);
            ++at;
        }

    REQUIRE(report.n_rows == 900);
    REQUIRE(report.n_train + report.n_test == 900);
    REQUIRE(report.n_features == 8);
    REQUIRE(report.selection_a2.size() == 3);
    REQUIRE(report.selection_mi.size() == 3);
    REQUIRE(report.selection_ga.size() == 3);
    REQUIRE(report.ranking.entries.size() == 8);
    REQUIRE(report.importances.size() == 3);  // one per tail-selected feature
    REQUIRE(report.learner_configs.size() == 4);

    for (const EvalCell& cell : report.cells) {
        REQUIRE_FALSE(cell.failed);
        REQUIRE(cell.block.accuracy > 0.0);
        REQUIRE(cell.block.auc > 0.0);
        const std::size_t expected =
            cell.block.feature_set == "All" ? 8 : 3;
        REQUIRE(cell.features_used.size() == expected);
    }

    // every selector beats guessing the majority class on this data
    std::size_t majority = 0;
    for (const int t : data.target) majority += static_cast<std::size_t>(t);
    const double base =
        std::max(majority, data.n - majority) / static_cast<double>(data.n);
    for (const std::string& fs : feature_set_labels()) {
        const double acc = cell_for(report, fs, "logistic").block.accuracy;
        REQUIRE(acc >= base + 0.10);
    }
}

TEST_CASE("selectors fit on training rows cannot see a test-only leak", "[evaluation]") {
    const BinaryDataset data = make_leak_data(600, 0.5, 606);
    const std::size_t leak = data.columns.size() - 1;

    BenchmarkOptions opt;
    opt.k = 2;
    opt.seed = 7;  // split seed matches the leak construction
    opt.test_fraction = 0.5;
    opt.importance_repeats = 3;

    const EvalReport report = run_benchmark(data, opt);
    for (const auto& selection :
         {report.selection_a2, report.selection_mi, report.selection_ga}) {
        REQUIRE(std::find(selection.begin(), selection.end(), leak) == selection.end());
    }

    // positive control: selecting on all rows lets the leak through
    BenchmarkOptions cheat = opt;
    cheat.select_on_full = true;
    const EvalReport tainted = run_benchmark(data, cheat);
    const auto& mi = tainted.selection_mi;
    REQUIRE(std::find(mi.begin(), mi.end(), leak) != mi.end());
}

TEST_CASE("benchmark reports are reproducible", "[evaluation]") {
    const BinaryDataset data = make_benchmark_data(500, 2, 44);
    BenchmarkOptions opt;
    opt.k = 2;
    opt.seed = 3;
    opt.importance_repeats = 4;

    const EvalReport a = run_benchmark(data, opt);
    const EvalReport b = run_benchmark(data, opt);
    REQUIRE(report_to_json(a).dump(2) == report_to_json(b).dump(2));
    REQUIRE(report_to_text(a) == report_to_text(b));

    opt.threads = 4;
    const EvalReport c = run_benchmark(data, opt);
    REQUIRE(report_to_json(a).dump(2) == report_to_json(c).dump(2));

    opt.threads = 0;
    opt.seed = 9;
    const EvalReport d = run_benchmark(data, opt);
    REQUIRE(report_to_json(a).dump(2) != report_to_json(d).dump(2));

    BenchmarkOptions bad = opt;
    bad.k = 99;
    REQUIRE_THROWS_AS(run_benchmark(data, bad), DomainError);
}
