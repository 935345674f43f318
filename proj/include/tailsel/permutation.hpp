#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "learners/predict.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace tailsel {

struct ImportanceRecord {
    std::string feature_name;
    double mean_drop = 0.0;
    double std_drop = 0.0;
    std::size_t repeats = 0;
};

namespace detail {

inline double accuracy_of(const TrainedModel& model,
                          const std::vector<std::vector<double>>& columns,
                          const std::vector<int>& y) {
    const std::vector<double> proba = predict_proba(model, columns);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if ((proba[i] >= 0.5 ? 1 : 0) == y[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(y.size());
}

}  // namespace detail

// held-out accuracy drop from shuffling one column at a time; every (feature,
// repeat) cell draws its own seed so the result is thread-schedule independent
inline std::vector<ImportanceRecord> permutation_importance(
    const TrainedModel& model, const std::vector<std::vector<double>>& x_test,
    const std::vector<int>& y_test, std::size_t repeats, std::uint64_t seed,
    unsigned threads = 0) {
    detail::check_predict_shape(model, x_test);
    if (repeats == 0) throw DomainError("repeats must be at least 1");
    const std::size_t d = x_test.size();
    if (d == 0 || x_test.front().size() != y_test.size())
        throw DataError("permutation_importance: shape mismatch");

    const double baseline = detail::accuracy_of(model, x_test, y_test);

    std::vector<double> drops(d * repeats);
    parallel_for(d * repeats, resolve_threads(threads), [&](std::size_t cell) {
        const std::size_t j = cell / repeats;
        const std::size_t r = cell % repeats;
        std::vector<std::vector<double>> shuffled = x_test;
        Rng rng(derive_seed(seed, j, r));
        rng.shuffle(shuffled[j]);
        drops[cell] = baseline - detail::accuracy_of(model, shuffled, y_test);
    });

    std::vector<ImportanceRecord> records(d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) mean += drops[j * repeats + r];
        mean /= static_cast<double>(repeats);
        double var = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            const double dv = drops[j * repeats + r] - mean;
            var += dv * dv;
        }
        var /= static_cast<double>(repeats);
        records[j] = {model.feature_names[j], mean, std::sqrt(std::max(var, 0.0)), repeats};
    }
    return records;
}

}  // namespace tailsel
