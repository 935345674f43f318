#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "copula.hpp"

namespace tailsel {

namespace detail {

// pairs i < j with a[i] > a[j], counted during a bottom-up merge sort;
// equal elements take the left side so only strict inversions are counted
inline std::uint64_t count_inversions(std::vector<double>& a, std::vector<double>& buf) {
    const std::size_t n = a.size();
    std::uint64_t count = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (a[j] < a[i]) {
                    count += mid - i;
                    buf[k++] = a[j++];
                } else {
                    buf[k++] = a[i++];
                }
            }
            while (i < mid) buf[k++] = a[i++];
            while (j < hi) buf[k++] = a[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      a.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return count;
}

}  // namespace detail

// tie-adjusted Kendall tau-b in O(n log n): sort by (x, y), take tie counts
// from run lengths, and get the discordant count from inversions of y
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DataError("kendall tau requires equal-length sequences");
    const std::size_t n = x.size();
    if (n < 2) throw StatError("kendall tau undefined for fewer than 2 observations");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    auto run_pairs = [](std::uint64_t len) { return len * (len - 1) / 2; };

    std::uint64_t tie_x = 0, tie_xy = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
            tie_x += run_pairs(j - i + 1);
            std::size_t a = i;
            while (a <= j) {
                std::size_t b = a;
                while (b + 1 <= j && y[idx[b + 1]] == y[idx[a]]) ++b;
                tie_xy += run_pairs(b - a + 1);
                a = b + 1;
            }
            i = j + 1;
        }
    }

    std::vector<double> v(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[idx[i]];
    const std::uint64_t discordant = detail::count_inversions(v, buf);  // sorts v

    std::uint64_t tie_y = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[j + 1] == v[i]) ++j;
            tie_y += run_pairs(j - i + 1);
            i = j + 1;
        }
    }

    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (tie_x == total) throw StatError("kendall tau undefined: first margin is constant");
    if (tie_y == total) throw StatError("kendall tau undefined: second margin is constant");

    const auto untied = static_cast<std::int64_t>(total - tie_x - tie_y + tie_xy);
    const auto s = untied - 2 * static_cast<std::int64_t>(discordant);
    const double denom = std::sqrt(static_cast<double>(total - tie_x) *
                                   static_cast<double>(total - tie_y));
    return std::clamp(static_cast<double>(s) / denom, -1.0, 1.0);
}

inline double kendall_tau_empirical(const PseudoSample& sample) {
    return kendall_tau_b(sample.u, sample.v);
}

}  // namespace tailsel
