#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace permshell {

/// Neumaier-compensated sum; order is the caller's, so results are reproducible.
inline double compensated_sum(std::span<const double> v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

inline double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : compensated_sum(v) / static_cast<double>(v.size());
}

inline constexpr int kBootstrapRounds = 1000;

/// Bootstrap standard error of the sample mean.
inline double bootstrap_se(std::span<const double> v, std::uint64_t seed, int rounds = kBootstrapRounds) {
    if (v.size() < 2) return 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    std::vector<double> means(rounds);
    for (int b = 0; b < rounds; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[pick(rng)];
        means[b] = s / static_cast<double>(v.size());
    }
    const double mu = mean_of(means);
    double ss = 0.0;
    for (double m : means) ss += (m - mu) * (m - mu);
    return std::sqrt(ss / (rounds - 1));
}

/// Percentile bootstrap interval for mean(a - b) over paired samples.
inline std::pair<double, double> bootstrap_paired_ci(std::span<const double> a, std::span<const double> b,
                                                     std::uint64_t seed, double level = 0.95,
                                                     int rounds = kBootstrapRounds) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    if (d.size() < 2) {
        const double m = mean_of(d);
        return {m, m};
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
    std::vector<double> means(rounds);
    for (int r = 0; r < rounds; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) s += d[pick(rng)];
        means[r] = s / static_cast<double>(d.size());
    }
    std::sort(means.begin(), means.end());
    const double tail = 0.5 * (1.0 - level);
    const auto lo = static_cast<std::size_t>(std::floor(tail * (rounds - 1)));
    const auto hi = static_cast<std::size_t>(std::ceil((1.0 - tail) * (rounds - 1)));
    return {means[lo], means[hi]};
}

/// Wilson score interval for a binomial proportion (z = 1.96).
inline std::pair<double, double> wilson_interval(std::size_t errors, std::size_t total, double z = 1.959963984540054) {
    if (total == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(total);
    const double ph = static_cast<double>(errors) / nn;
    const double den = 1.0 + z * z / nn;
    const double centre = (ph + z * z / (2.0 * nn)) / den;
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / den;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace permshell
