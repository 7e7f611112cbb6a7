#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "policysim/core.hpp"

namespace policysim {

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution,
/// Q(l) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 l^2).
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;  // the series converges too slowly here; Q is 1 to double precision below ~0.27
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Two-sample Kolmogorov-Smirnov test. D is the largest ECDF gap, found by a
/// merge sweep over both sorted samples; the p value is asymptotic.
inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());

    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.d = d;
    const double en = std::sqrt(na * nb / (na + nb));
    r.p_value = kolmogorov_q(en * d);
    return r;
}

/// Gini coefficient from the sorted-rank formula; 0 for all-zero input.
inline double gini(std::span<const double> values) {
    if (values.empty()) throw Error("gini: empty input");
    std::vector<double> v(values.begin(), values.end());
    for (double x : v)
        if (x < 0.0) throw Error("gini: negative value");
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        total += v[i];
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * v[i];
    }
    if (total <= 0.0) return 0.0;
    return std::clamp(weighted / (n * total), 0.0, 1.0);
}

inline double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Population standard deviation.
inline double stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace policysim
