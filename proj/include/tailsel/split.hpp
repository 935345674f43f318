#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace tailsel {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// class-stratified holdout: each label contributes round(count * test_fraction)
// rows (at least one when the class is present), drawn by a seeded shuffle
inline SplitIndices stratified_split(const std::vector<int>& target, double test_fraction,
                                     std::uint64_t seed) {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw DomainError("test_fraction must lie in (0,1)");
    const std::size_t n = target.size();
    if (n < 2) throw DataError("need at least two rows to split");

    std::vector<std::size_t> class0;
    std::vector<std::size_t> class1;
    for (std::size_t i = 0; i < n; ++i) {
        if (target[i] == 0)
            class0.push_back(i);
        else if (target[i] == 1)
            class1.push_back(i);
        else
            throw DataError("labels must be 0 or 1");
    }

    SplitIndices split;
    auto deal = [&](std::vector<std::size_t>& members, std::uint64_t stream) {
        if (members.empty()) return;
        Rng rng(derive_seed(seed, stream));
        rng.shuffle(members);
        std::size_t take = static_cast<std::size_t>(
            std::llround(static_cast<double>(members.size()) * test_fraction));
        take = std::clamp<std::size_t>(take, 1, members.size() - 1);
        for (std::size_t i = 0; i < members.size(); ++i)
            (i < take ? split.test : split.train).push_back(members[i]);
    };
    deal(class0, 0);
    deal(class1, 1);

    if (split.train.empty() || split.test.empty())
        throw DataError("split produced an empty partition");
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;  // population standard deviation per column
};

// moments come from the training rows only; both partitions are mapped with them
inline Standardizer fit_standardizer(const std::vector<std::vector<double>>& columns,
                                     const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw DataError("cannot standardize with no rows");
    Standardizer st;
    st.mean.reserve(columns.size());
    st.scale.reserve(columns.size());
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (const auto& col : columns) {
        double mean = 0.0;
        for (const std::size_t r : rows) mean += col[r];
        mean *= inv_n;
        double var = 0.0;
        for (const std::size_t r : rows) {
            const double d = col[r] - mean;
            var += d * d;
        }
        var *= inv_n;
        const double sd = std::sqrt(var);
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
            throw DataError("zero-variance column encountered during standardization");
        st.mean.push_back(mean);
        st.scale.push_back(sd);
    }
    return st;
}

inline std::vector<std::vector<double>> standardize(
    const std::vector<std::vector<double>>& columns, const std::vector<std::size_t>& rows,
    const Standardizer& st) {
    if (st.mean.size() != columns.size())
        throw DataError("standardizer does not match column count");
    std::vector<std::vector<double>> out(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out[j].reserve(rows.size());
        for (const std::size_t r : rows)
            out[j].push_back((columns[j][r] - st.mean[j]) / st.scale[j]);
    }
    return out;
}

inline std::vector<std::size_t> all_row_indices(const std::vector<std::vector<double>>& columns) {
    std::vector<std::size_t> rows(columns.empty() ? 0 : columns.front().size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

inline Standardizer fit_standardizer(const std::vector<std::vector<double>>& columns) {
    return fit_standardizer(columns, all_row_indices(columns));
}

inline std::vector<std::vector<double>> standardize(
    const std::vector<std::vector<double>>& columns, const Standardizer& st) {
    return standardize(columns, all_row_indices(columns), st);
}

}  // namespace tailsel
