#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <tailsel/quadrature.hpp>
#include <tailsel/copula.hpp>

namespace helpers {

// total density mass by nested quadrature; each conditional section has a
// tall, narrow ridge at v == u that a plain adaptive pass can step over
// entirely (every node lands outside the ridge and the error estimate stays
// small), so the inner integral uses dyadic panels graded toward v == u to
// pin the peak to panel boundaries
inline double density_mass(double theta) {
    auto inner = [theta](double u) {
        auto f = [theta, u](double v) { return tailsel::copula_density(u, v, theta); };
        const double lo = 1e-12;
        const double hi = 1.0 - 1e-12;
        std::vector<double> cuts{lo};
        for (double d = 0.5 * (u - lo); d > 1e-10; d *= 0.5) cuts.push_back(u - d);
        cuts.push_back(u);
        std::vector<double> above;
        for (double d = 0.5 * (hi - u); d > 1e-10; d *= 0.5) above.push_back(u + d);
        cuts.insert(cuts.end(), above.rbegin(), above.rend());
        cuts.push_back(hi);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            total += tailsel::integrate(f, cuts[i], cuts[i + 1], 1e-11);
        return total;
    };
    // the omitted edge strips hold ~2e-5 of mass, far below the check's gate
    return tailsel::integrate(inner, 1e-5, 1.0 - 1e-5, 1e-7);
}

// pair-counting tau-b sharing the exact final arithmetic of the fast version
inline double brute_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::int64_t concordant = 0, discordant = 0, tie_x = 0, tie_y = 0, tie_xy = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool ex = x[i] == x[j];
            const bool ey = y[i] == y[j];
            if (ex && ey) {
                ++tie_xy;
                ++tie_x;
                ++tie_y;
            } else if (ex) {
                ++tie_x;
            } else if (ey) {
                ++tie_y;
            } else if ((x[i] < x[j]) == (y[i] < y[j])) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    const std::int64_t total = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    const std::int64_t s = (total - tie_x - tie_y + tie_xy) - 2 * discordant;
    const double denom = std::sqrt(static_cast<double>(total - tie_x) *
                                   static_cast<double>(total - tie_y));
    return std::clamp(static_cast<double>(s) / denom, -1.0, 1.0);
}

// pair-counting AUC with half-credit ties, matching the rank formulation
inline double brute_auc(const std::vector<int>& y, const std::vector<double>& s) {
    double wins = 0.0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) continue;
        ++n1;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] != 0) continue;
            if (s[i] > s[j])
                wins += 1.0;
            else if (s[i] == s[j])
                wins += 0.5;
        }
    }
    for (const int label : y) n0 += label == 0 ? 1 : 0;
    return wins / (static_cast<double>(n1) * static_cast<double>(n0));
}

inline std::string temp_path(const std::string& name) {
    const char* base = std::getenv("TMPDIR");
    std::string dir = base ? base : "/tmp";
    if (!dir.empty() && dir.back() == '/') dir.pop_back();
    return dir + "/" + name;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

// run the CLI binary; returns the process exit code
inline int run_cli(const std::string& args, const std::string& stdout_path = "/dev/null",
                   const std::string& stderr_path = "/dev/null") {
    const std::string cmd = std::string(TAILSEL_CLI_PATH) + " " + args + " > " + stdout_path +
                            " 2> " + stderr_path;
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

}  // namespace helpers
