#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sburg {

/// Neumaier-compensated sum; reductions over realization-indexed slots are
/// done in index order so results do not depend on the thread count.
inline double compensated_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

/// Sample mean and standard error of the mean.
inline MeanSe mean_se(std::span<const double> xs) {
    MeanSe r;
    r.count = xs.size();
    if (xs.empty()) return r;
    r.mean = compensated_sum(xs) / xs.size();
    if (xs.size() < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (xs.size() - 1) / xs.size());
    return r;
}

struct VarSe {
    double var = 0.0;
    double se = 0.0;  // standard error of the variance estimate
    std::size_t count = 0;
};

/// Unbiased sample variance with its standard error from the fourth moment:
/// Var(s^2) ~ (m4 - var^2)/n.
inline VarSe variance_se(std::span<const double> xs) {
    VarSe r;
    r.count = xs.size();
    if (xs.size() < 2) return r;
    const double m = compensated_sum(xs) / xs.size();
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= xs.size();
    m4 /= xs.size();
    r.var = m2 * xs.size() / (xs.size() - 1.0);
    const double v = std::max(m4 - m2 * m2, 0.0);
    r.se = std::sqrt(v / xs.size());
    return r;
}

inline double combined_se(double se_a, double se_b) {
    return std::sqrt(se_a * se_a + se_b * se_b);
}

/// Ordinary least-squares slope of y against x.
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols_slope: bad input");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace sburg
