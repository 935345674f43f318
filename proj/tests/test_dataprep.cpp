#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include <tailsel/dataset.hpp>
#include <tailsel/mutual_information.hpp>
#include <tailsel/pseudo.hpp>
#include <tailsel/split.hpp>

#include "helpers.hpp"

using Catch::Approx;
using namespace tailsel;

TEST_CASE("csv loading happy path", "[dataprep]") {
    const std::string path = helpers::temp_path("dataprep_ok.csv");
    helpers::write_file(path,
                        "\xEF\xBB\xBFто,Diabetes_binary,b\r\n"
                        "1.5,0,10\r\n"
                        "2.5,1,20\r\n"
                        "3.5,2,30\r\n");
    const RawDataset raw = load_csv(path, "Diabetes_binary");
    REQUIRE(raw.n == 3);
    REQUIRE(raw.feature_names == std::vector<std::string>{"то", "b"});
    REQUIRE(raw.columns[0] == std::vector<double>{1.5, 2.5, 3.5});
    REQUIRE(raw.columns[1] == std::vector<double>{10, 20, 30});
    REQUIRE(raw.target_raw == std::vector<double>{0, 1, 2});

    const BinaryDataset data = binarize_target(raw);
    REQUIRE(data.target == std::vector<int>{0, 1, 1});
}

TEST_CASE("csv loader reports precise failures", "[dataprep]") {
    const std::string missing_col = helpers::temp_path("dataprep_mc.csv");
    helpers::write_file(missing_col, "a,b\n1,2\n");
    REQUIRE_THROWS_WITH(load_csv(missing_col, "y"),
                        Catch::Matchers::ContainsSubstring("missing target column 'y'"));

    const std::string bad_cell = helpers::temp_path("dataprep_bad.csv");
    helpers::write_file(bad_cell, "a,y\n1,0\nfoo,1\n");
    REQUIRE_THROWS_WITH(load_csv(bad_cell, "y"), Catch::Matchers::ContainsSubstring("row 3") &&
                                                     Catch::Matchers::ContainsSubstring("'a'"));

    const std::string ragged = helpers::temp_path("dataprep_ragged.csv");
    helpers::write_file(ragged, "a,y\n1,0\n1,2,3\n");
    REQUIRE_THROWS_WITH(load_csv(ragged, "y"), Catch::Matchers::ContainsSubstring("row 3"));

    const std::string empty_cell = helpers::temp_path("dataprep_empty_cell.csv");
    helpers::write_file(empty_cell, "a,y\n,0\n");
    REQUIRE_THROWS_WITH(load_csv(empty_cell, "y"),
                        Catch::Matchers::ContainsSubstring("missing value"));

    const std::string no_rows = helpers::temp_path("dataprep_norows.csv");
    helpers::write_file(no_rows, "a,y\n");
    REQUIRE_THROWS_AS(load_csv(no_rows, "y"), DataError);

    REQUIRE_THROWS_WITH(load_csv(helpers::temp_path("nonexistent_xyz.csv"), "y"),
                        Catch::Matchers::ContainsSubstring("cannot open"));

    const std::string const_target = helpers::temp_path("dataprep_ct.csv");
    helpers::write_file(const_target, "a,y\n1,1\n2,1\n");
    REQUIRE_THROWS_WITH(load_csv(const_target, "y"),
                        Catch::Matchers::ContainsSubstring("constant"));
}

TEST_CASE("constant features warn instead of failing", "[dataprep]") {
    const std::string path = helpers::temp_path("dataprep_warn.csv");
    helpers::write_file(path, "a,b,y\n5,1,0\n5,2,1\n5,3,0\n");
    const RawDataset raw = load_csv(path, "y");
    REQUIRE(raw.warnings.size() == 1);
    REQUIRE(raw.warnings[0].find("'a'") != std::string::npos);
}

TEST_CASE("target binarization accepts only the three coded levels", "[dataprep]") {
    RawDataset raw;
    raw.target_raw = {0.0, 1.0, 2.0, 3.0};
    raw.n = 4;
    REQUIRE_THROWS_AS(binarize_target(raw), DataError);
}

TEST_CASE("pseudo-observations use midranks over n plus one", "[dataprep]") {
    const auto plain = pseudo_observations({10, 20, 30, 40});
    const std::vector<double> expected{0.2, 0.4, 0.6, 0.8};
    REQUIRE(plain.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE(plain[i] == Approx(expected[i]).margin(1e-15));
    // tied block shares the averaged rank
    const auto tied = pseudo_observations({1, 1, 2});
    REQUIRE(tied[0] == Approx(1.5 / 4.0));
    REQUIRE(tied[1] == Approx(1.5 / 4.0));
    REQUIRE(tied[2] == Approx(3.0 / 4.0));
    REQUIRE_THROWS_AS(pseudo_observations({}), DataError);
}

TEST_CASE("pseudo-observations are invariant to increasing transforms", "[dataprep]") {
    std::vector<double> x{0.3, 1.7, 0.3, 2.2, 5.0, 0.01, 1.7};
    std::vector<double> warped;
    for (const double v : x) warped.push_back(std::exp(2.0 * v) - 0.5);
    REQUIRE(pseudo_observations(x) == pseudo_observations(warped));
}

TEST_CASE("stratified split preserves class shares", "[dataprep]") {
    std::vector<int> y;
    for (int i = 0; i < 800; ++i) y.push_back(0);
    for (int i = 0; i < 200; ++i) y.push_back(1);
    const SplitIndices split = stratified_split(y, 0.2, 11);
    REQUIRE(split.train.size() == 800);
    REQUIRE(split.test.size() == 200);

    std::size_t test_ones = 0;
    for (const std::size_t r : split.test) test_ones += static_cast<std::size_t>(y[r]);
    REQUIRE(test_ones == 40);  // exactly llround(200 * 0.2)

    std::set<std::size_t> seen(split.train.begin(), split.train.end());
    seen.insert(split.test.begin(), split.test.end());
    REQUIRE(seen.size() == 1000);
    REQUIRE(std::is_sorted(split.train.begin(), split.train.end()));
    REQUIRE(std::is_sorted(split.test.begin(), split.test.end()));

    const SplitIndices again = stratified_split(y, 0.2, 11);
    REQUIRE(again.train == split.train);
    const SplitIndices other = stratified_split(y, 0.2, 12);
    REQUIRE(other.test != split.test);
}

TEST_CASE("split keeps at least one row of a tiny class", "[dataprep]") {
    std::vector<int> y(100, 0);
    y[3] = 1;
    y[77] = 1;
    const SplitIndices split = stratified_split(y, 0.2, 5);
    std::size_t test_ones = 0;
    for (const std::size_t r : split.test) test_ones += static_cast<std::size_t>(y[r]);
    REQUIRE(test_ones >= 1);
    std::size_t train_ones = 0;
    for (const std::size_t r : split.train) train_ones += static_cast<std::size_t>(y[r]);
    REQUIRE(train_ones >= 1);
}

TEST_CASE("split validates inputs", "[dataprep]") {
    REQUIRE_THROWS_AS(stratified_split({0, 1}, 0.0, 1), DomainError);
    REQUIRE_THROWS_AS(stratified_split({0, 1}, 1.0, 1), DomainError);
    REQUIRE_THROWS_AS(stratified_split({0, 2}, 0.5, 1), DataError);
    REQUIRE_THROWS_AS(stratified_split({0}, 0.5, 1), DataError);
}

TEST_CASE("standardization uses training moments only", "[dataprep]") {
    const std::vector<std::vector<double>> cols{{1, 2, 3, 100}, {5, 5, 8, -100}};
    const std::vector<std::size_t> train{0, 1, 2};
    const Standardizer st = fit_standardizer(cols, train);
    REQUIRE(st.mean[0] == Approx(2.0));
    REQUIRE(st.scale[0] == Approx(std::sqrt(2.0 / 3.0)));  // population deviation

    const auto scaled = standardize(cols, train, st);
    double mean = 0.0;
    for (const double v : scaled[0]) mean += v;
    REQUIRE(mean == Approx(0.0).margin(1e-12));
    double var = 0.0;
    for (const double v : scaled[0]) var += v * v;
    REQUIRE(var / 3.0 == Approx(1.0).epsilon(1e-12));

    const auto test_scaled = standardize(cols, std::vector<std::size_t>{3}, st);
    REQUIRE(test_scaled[0][0] == Approx((100.0 - 2.0) / std::sqrt(2.0 / 3.0)));
}

TEST_CASE("standardization rejects constant columns", "[dataprep]") {
    const std::vector<std::vector<double>> cols{{4, 4, 4}};
    REQUIRE_THROWS_WITH(fit_standardizer(cols, {0, 1, 2}),
                        Catch::Matchers::ContainsSubstring("zero-variance"));
}

TEST_CASE("stratified folds are disjoint, covering, and balanced", "[dataprep]") {
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) y.push_back(0);
    for (int i = 0; i < 40; ++i) y.push_back(1);
    const auto folds = stratified_folds(y, 5, 77);
    REQUIRE(folds.size() == 5);
    std::set<std::size_t> seen;
    for (const auto& fold : folds) {
        REQUIRE(fold.size() == 20);
        std::size_t ones = 0;
        for (const std::size_t r : fold) {
            ones += static_cast<std::size_t>(y[r]);
            seen.insert(r);
        }
        REQUIRE(ones == 8);
    }
    REQUIRE(seen.size() == 100);
    REQUIRE(stratified_folds(y, 5, 77) == folds);
}
