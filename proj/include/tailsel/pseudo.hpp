#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "common.hpp"

namespace tailsel {

struct PseudoMatrix {
    std::vector<std::vector<double>> columns;  // each column holds values in (0,1)
    std::size_t n = 0;
};

// rank-based probability transform: midrank / (n + 1), so ties share one value
// and every output lies strictly inside (0,1)
inline std::vector<double> pseudo_observations(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n == 0) throw DataError("pseudo_observations: empty input");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> out(n);
    const double scale = 1.0 / (static_cast<double>(n) + 1.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        // ranks are 1-based; the tied block i..j gets the average rank
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        const double u = midrank * scale;
        for (std::size_t k = i; k <= j; ++k) out[idx[k]] = u;
        i = j + 1;
    }
    return out;
}

inline std::vector<double> gather(const std::vector<double>& col,
                                  const std::vector<std::size_t>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const std::size_t r : rows) {
        if (r >= col.size()) throw DataError("row index out of range");
        out.push_back(col[r]);
    }
    return out;
}

inline PseudoMatrix build_pseudo_matrix(const std::vector<std::vector<double>>& columns,
                                        const std::vector<std::size_t>& rows) {
    PseudoMatrix pm;
    pm.n = rows.size();
    pm.columns.reserve(columns.size());
    for (const auto& col : columns)
        pm.columns.push_back(pseudo_observations(gather(col, rows)));
    return pm;
}

inline PseudoMatrix build_pseudo_matrix(const std::vector<std::vector<double>>& columns) {
    PseudoMatrix pm;
    pm.n = columns.empty() ? 0 : columns.front().size();
    pm.columns.reserve(columns.size());
    for (const auto& col : columns) pm.columns.push_back(pseudo_observations(col));
    return pm;
}

}  // namespace tailsel
