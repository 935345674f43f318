#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace tailsel {

// plug-in estimate over the empirical joint table, in nats; 0*log(0) terms
// are skipped so structurally-zero cells contribute nothing
inline double mutual_information(const std::vector<double>& x, const std::vector<int>& y) {
    if (x.size() != y.size()) throw DataError("mutual_information: length mismatch");
    const std::size_t n = x.size();
    if (n == 0) throw DataError("mutual_information: empty input");

    std::map<std::pair<double, int>, std::size_t> joint;
    std::map<double, std::size_t> margin_x;
    std::size_t margin_y[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] != 0 && y[i] != 1) throw DataError("mutual_information: labels must be 0 or 1");
        ++joint[{x[i], y[i]}];
        ++margin_x[x[i]];
        ++margin_y[y[i]];
        if (margin_x.size() > 10000)
            throw DataError("mutual_information: more than 10000 distinct values");
    }

    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (const auto& [cell, count] : joint) {
        const double pxy = static_cast<double>(count) / dn;
        const double px = static_cast<double>(margin_x.at(cell.first)) / dn;
        const double py = static_cast<double>(margin_y[cell.second]) / dn;
        mi += pxy * std::log(pxy / (px * py));
    }
    return mi;
}

// disjoint stratified folds: each class is shuffled with its own derived seed
// and dealt round-robin, so every fold keeps the class balance
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& target,
                                                              std::size_t folds,
                                                              std::uint64_t seed) {
    if (folds < 2) throw DomainError("need at least two folds");
    std::vector<std::size_t> class0;
    std::vector<std::size_t> class1;
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target[i] == 0)
            class0.push_back(i);
        else if (target[i] == 1)
            class1.push_back(i);
        else
            throw DataError("labels must be 0 or 1");
    }
    std::vector<std::vector<std::size_t>> out(folds);
    auto deal = [&](std::vector<std::size_t>& members, std::uint64_t stream) {
        Rng rng(derive_seed(seed, stream));
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) out[i % folds].push_back(members[i]);
    };
    deal(class0, 0);
    deal(class1, 1);
    for (auto& fold : out) {
        if (fold.empty()) throw DataError("fold ended up empty; too few rows for this many folds");
        std::sort(fold.begin(), fold.end());
    }
    return out;
}

struct MiScore {
    std::size_t feature = 0;
    double mean_mi = 0.0;
};

// per-feature mean MI across stratified folds, strongest first (ties broken
// by ascending feature index)
inline std::vector<MiScore> score_mi(const std::vector<std::vector<double>>& columns,
                                     const std::vector<int>& target, std::size_t folds,
                                     std::uint64_t seed) {
    const std::size_t d = columns.size();
    const auto fold_rows = stratified_folds(target, folds, seed);

    std::vector<MiScore> scores(d);
    for (std::size_t j = 0; j < d; ++j) {
        double total = 0.0;
        for (const auto& rows : fold_rows) {
            std::vector<double> xs;
            std::vector<int> ys;
            xs.reserve(rows.size());
            ys.reserve(rows.size());
            for (const std::size_t r : rows) {
                xs.push_back(columns[j][r]);
                ys.push_back(target[r]);
            }
            total += mutual_information(xs, ys);
        }
        scores[j] = {j, total / static_cast<double>(fold_rows.size())};
    }

    std::sort(scores.begin(), scores.end(), [](const MiScore& a, const MiScore& b) {
        if (a.mean_mi != b.mean_mi) return a.mean_mi > b.mean_mi;
        return a.feature < b.feature;
    });
    return scores;
}

inline std::vector<std::size_t> select_mi(const std::vector<std::vector<double>>& columns,
                                          const std::vector<int>& target, std::size_t k,
                                          std::size_t folds, std::uint64_t seed) {
    if (k > columns.size()) throw DomainError("cannot select more features than exist");
    const std::vector<MiScore> scores = score_mi(columns, target, folds, seed);
    std::vector<std::size_t> selected;
    selected.reserve(k);
    for (std::size_t i = 0; i < k; ++i) selected.push_back(scores[i].feature);
    return selected;
}

inline std::vector<std::size_t> select_mi(const std::vector<std::vector<double>>& columns,
                                          const std::vector<int>& target, std::size_t k,
                                          std::uint64_t seed) {
    return select_mi(columns, target, k, 5, seed);
}

}  // namespace tailsel
