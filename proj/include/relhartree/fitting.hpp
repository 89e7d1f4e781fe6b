#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "relhartree/errors.hpp"

namespace relhartree {

struct SlopeFit {
    double slope = 0;
    double stderr_slope = 0;
    int m = 0;  // samples used
};

/// Least-squares slope of log(value) vs log(t) over samples with t >= t_min
/// and value > 0. min_samples defaults to the 5 the decay fits require.
inline SlopeFit fit_log_slope(const std::vector<std::pair<double, double>>& series,
                              double t_min, int min_samples = 5) {
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (t >= t_min && t > 0.0 && v > 0.0) {
            xs.push_back(std::log(t));
            ys.push_back(std::log(v));
        }
    }
    const int m = int(xs.size());
    if (m < min_samples)
        throw ConfigError("fit_log_slope: degenerate series (" + std::to_string(m) +
                          " usable samples, need " + std::to_string(min_samples) + ")");
    double mx = 0, my = 0;
    for (int i = 0; i < m; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0)
        throw ConfigError("fit_log_slope: degenerate series (no spread in t)");
    SlopeFit f;
    f.m = m;
    f.slope = sxy / sxx;
    double ssr = 0;
    for (int i = 0; i < m; ++i) {
        const double r = ys[i] - my - f.slope * (xs[i] - mx);
        ssr += r * r;
    }
    f.stderr_slope = (m > 2) ? std::sqrt(ssr / (m - 2) / sxx) : 0.0;
    return f;
}

/// Fitted decay exponent of a norm time series (excludes the non-asymptotic
/// transient below t_min; <t> ~ t only at late times).
inline SlopeFit decay_exponent_fit(const std::vector<std::pair<double, double>>& series,
                                   double t_min) {
    return fit_log_slope(series, t_min, 5);
}

}  // namespace relhartree
