#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "learners/logistic.hpp"
#include "learners/predict.hpp"
#include "metrics.hpp"
#include "mutual_information.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "split.hpp"

namespace tailsel {

struct GaState {
    std::vector<std::vector<std::size_t>> population;  // gene order as generated
    std::size_t generation = 0;
    std::uint64_t rng_seed = 0;
    std::map<std::vector<std::size_t>, double> fitness_cache;  // keys sorted
    std::size_t evaluations = 0;
    std::size_t cache_hits = 0;
    std::vector<std::size_t> best_subset;  // sorted
    double best_fitness = -std::numeric_limits<double>::infinity();
};

struct GaResult {
    std::vector<std::size_t> selected;  // sorted feature indices
    GaState state;
};

namespace detail {

// CV fitness of one subset: mean per-fold accuracy of a ridge-penalized
// logistic model, refit per fold with fold-local standardization
inline double ga_fitness(const std::vector<std::vector<double>>& columns,
                         const std::vector<int>& target,
                         const std::vector<std::vector<std::size_t>>& folds,
                         const std::vector<std::size_t>& subset) {
    std::vector<std::vector<double>> sub;
    sub.reserve(subset.size());
    std::vector<std::string> names;
    names.reserve(subset.size());
    for (const std::size_t j : subset) {
        sub.push_back(columns[j]);
        names.push_back("f" + std::to_string(j));
    }

    double accuracy_sum = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t o = 0; o < folds.size(); ++o)
            if (o != f) train_rows.insert(train_rows.end(), folds[o].begin(), folds[o].end());
        std::sort(train_rows.begin(), train_rows.end());
        const std::vector<std::size_t>& test_rows = folds[f];

        const Standardizer st = fit_standardizer(sub, train_rows);
        const auto x_train = standardize(sub, train_rows, st);
        const auto x_test = standardize(sub, test_rows, st);
        std::vector<int> y_train;
        y_train.reserve(train_rows.size());
        for (const std::size_t r : train_rows) y_train.push_back(target[r]);

        const TrainedModel model =
            train_logistic(x_train, y_train, names, default_config(LearnerKind::logistic, 0));
        const std::vector<double> proba = predict_proba(model, x_test);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test_rows.size(); ++i)
            if ((proba[i] >= 0.5 ? 1 : 0) == target[test_rows[i]]) ++correct;
        accuracy_sum += static_cast<double>(correct) / static_cast<double>(test_rows.size());
    }
    return accuracy_sum / static_cast<double>(folds.size());
}

inline std::vector<std::size_t> sorted_copy(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace detail

// evolutionary subset search: tournament(2) parents, half-and-half crossover,
// duplicate repair with random unused genes, 0.1-rate point mutation; the
// best individual ever evaluated is returned, not the final population's best
inline GaResult ga_select(const std::vector<std::vector<double>>& columns,
                          const std::vector<int>& target, std::size_t k,
                          std::size_t population_size, std::size_t generations,
                          std::uint64_t seed, unsigned threads = 0) {
    const std::size_t d = columns.size();
    if (k > d) throw DomainError("cannot select more features than exist");
    if (k == 0) throw DomainError("subset size must be at least 1");
    if (population_size < 2) throw DomainError("population must hold at least 2 individuals");

    const auto folds = stratified_folds(target, 3, derive_seed(seed, 1000003));
    Rng rng(derive_seed(seed, 0));

    GaResult out;
    GaState& state = out.state;
    state.rng_seed = seed;
    state.population.reserve(population_size);
    for (std::size_t i = 0; i < population_size; ++i)
        state.population.push_back(sample_indices(rng, d, k));

    const unsigned workers = resolve_threads(threads);
    auto evaluate_population = [&]() {
        // fitnesses for subsets not seen before, computed in a fixed order
        std::vector<std::vector<std::size_t>> fresh;
        for (const auto& individual : state.population) {
            auto key = detail::sorted_copy(individual);
            if (state.fitness_cache.count(key)) {
                ++state.cache_hits;
            } else if (std::find(fresh.begin(), fresh.end(), key) == fresh.end()) {
                fresh.push_back(std::move(key));
            } else {
                ++state.cache_hits;
            }
        }
        std::vector<double> fitness(fresh.size());
        parallel_for(fresh.size(), workers, [&](std::size_t i) {
            try {
                fitness[i] = detail::ga_fitness(columns, target, folds, fresh[i]);
            } catch (const Error&) {
                fitness[i] = -std::numeric_limits<double>::infinity();
            }
        });
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            state.fitness_cache.emplace(fresh[i], fitness[i]);
            ++state.evaluations;
            if (fitness[i] > state.best_fitness) {
                state.best_fitness = fitness[i];
                state.best_subset = fresh[i];
            }
        }
    };

    evaluate_population();
    auto cached_fitness = [&](const std::vector<std::size_t>& individual) {
        return state.fitness_cache.at(detail::sorted_copy(individual));
    };

    for (std::size_t gen = 0; gen < generations; ++gen) {
        auto tournament = [&]() -> const std::vector<std::size_t>& {
            const std::size_t a = static_cast<std::size_t>(rng.next_below(population_size));
            const std::size_t b = static_cast<std::size_t>(rng.next_below(population_size));
            return cached_fitness(state.population[a]) >= cached_fitness(state.population[b])
                       ? state.population[a]
                       : state.population[b];
        };

        std::vector<std::vector<std::size_t>> next_population;
        next_population.reserve(population_size);
        const std::size_t head = (k + 1) / 2;
        for (std::size_t c = 0; c < population_size; ++c) {
            const std::vector<std::size_t>& p1 = tournament();
            const std::vector<std::size_t>& p2 = tournament();

            std::vector<std::size_t> child(p1.begin(),
                                           p1.begin() + static_cast<std::ptrdiff_t>(head));
            child.insert(child.end(), p2.begin() + static_cast<std::ptrdiff_t>(head), p2.end());
            // drop duplicate genes, keeping first occurrences
            std::vector<std::size_t> deduped;
            for (const std::size_t gene : child)
                if (std::find(deduped.begin(), deduped.end(), gene) == deduped.end())
                    deduped.push_back(gene);
            child = std::move(deduped);

            auto unused_genes = [&]() {
                std::vector<std::size_t> unused;
                for (std::size_t j = 0; j < d; ++j)
                    if (std::find(child.begin(), child.end(), j) == child.end())
                        unused.push_back(j);
                return unused;
            };
            while (child.size() < k) {
                std::vector<std::size_t> unused = unused_genes();
                const std::size_t pick =
                    static_cast<std::size_t>(rng.next_below(unused.size()));
                child.push_back(unused[pick]);
            }
            if (rng.uniform() < 0.1) {
                const std::vector<std::size_t> unused = unused_genes();
                if (!unused.empty()) {
                    const std::size_t pos = static_cast<std::size_t>(rng.next_below(k));
                    const std::size_t pick =
                        static_cast<std::size_t>(rng.next_below(unused.size()));
                    child[pos] = unused[pick];
                }
            }
            next_population.push_back(std::move(child));
        }
        state.population = std::move(next_population);
        state.generation = gen + 1;
        evaluate_population();
    }

    out.selected = state.best_subset;
    return out;
}

inline std::vector<std::size_t> ga_select(const std::vector<std::vector<double>>& columns,
                                          const std::vector<int>& target, std::size_t k,
                                          std::uint64_t seed) {
    return ga_select(columns, target, k, 10, 5, seed).selected;
}

}  // namespace tailsel
