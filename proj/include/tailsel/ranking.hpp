#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"
#include "copula.hpp"
#include "fit.hpp"
#include "parallel.hpp"
#include "pseudo.hpp"

namespace tailsel {

struct RankedFeature {
    std::size_t feature = 0;
    std::string name;
    double theta_hat = 1.0;
    double lambda_u = 0.0;
    double tau_hat = 0.0;
    bool clamped = false;
    bool failed = false;
    std::string note;  // failure diagnostic when failed
};

struct FeatureRanking {
    std::vector<RankedFeature> entries;  // full list, strongest tail dependence first
    std::vector<std::size_t> top;        // feature indices of the first k entries
    std::size_t k = 0;
};

// score each feature by the upper-tail coefficient of a pairwise copula fit
// against the target pseudo-observations; a feature whose fit fails is kept
// but ranked behind every successful one
inline FeatureRanking rank_a2(const PseudoMatrix& pseudo,
                              const std::vector<double>& target_pseudo,
                              const std::vector<std::string>& names, std::size_t k,
                              EstimatorMethod method = EstimatorMethod::tau_inversion,
                              unsigned threads = 0) {
    const std::size_t d = pseudo.columns.size();
    if (k > d) throw DomainError("cannot rank more features than exist");
    if (names.size() != d) throw DataError("feature name count does not match columns");
    if (target_pseudo.size() != pseudo.n) throw DataError("target length does not match rows");

    FeatureRanking ranking;
    ranking.k = k;
    ranking.entries.resize(d);
    parallel_for(d, resolve_threads(threads), [&](std::size_t j) {
        RankedFeature& entry = ranking.entries[j];
        entry.feature = j;
        entry.name = names[j];
        try {
            PseudoSample sample;
            sample.u = pseudo.columns[j];
            sample.v = target_pseudo;
            const ThetaEstimate est = method == EstimatorMethod::pseudo_mle
                                          ? fit_theta_mle(sample)
                                          : fit_theta_tau(sample);
            entry.theta_hat = est.theta.value;
            entry.lambda_u = upper_tail_coefficient(est.theta).lambda_u;
            entry.tau_hat = est.tau_hat;
            entry.clamped = est.clamped;
        } catch (const Error& e) {
            entry.failed = true;
            entry.note = e.what();
        }
    });

    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const RankedFeature& a, const RankedFeature& b) {
                  if (a.failed != b.failed) return b.failed;
                  if (a.lambda_u != b.lambda_u) return a.lambda_u > b.lambda_u;
                  return a.feature < b.feature;
              });
    ranking.top.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ranking.top.push_back(ranking.entries[i].feature);
    return ranking;
}

}  // namespace tailsel
