#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsc/common.hpp"

namespace rsc {

/// Density-normalized histogram. Bins are inclusive-left; the last bin is
/// also inclusive-right so the value 1.0 lands in-range.
struct FidelityHistogram {
    std::vector<double> edges;    // n_bins + 1
    std::vector<double> counts;   // raw counts
    std::vector<double> density;  // counts / (n * width)
    nlohmann::json meta;          // provenance: alpha, L, window, n
};

inline FidelityHistogram histogram(const std::vector<double>& values, int n_bins, double lo = 0.0,
                                   double hi = 1.0) {
    if (values.empty()) throw EmptyInput("histogram: no values");
    if (n_bins < 2) throw Error("histogram: need at least 2 bins");
    if (!(hi > lo)) throw Error("histogram: empty range");

    FidelityHistogram h;
    const double width = (hi - lo) / n_bins;
    h.edges.resize(n_bins + 1);
    for (int k = 0; k <= n_bins; ++k) h.edges[k] = lo + k * width;
    h.counts.assign(n_bins, 0.0);
    std::size_t in_range = 0;
    for (double v : values) {
        if (v < lo || v > hi) continue;
        int bin = static_cast<int>((v - lo) / width);
        if (bin == n_bins) bin = n_bins - 1;  // right edge of the last bin
        h.counts[bin] += 1.0;
        ++in_range;
    }
    if (in_range == 0) throw EmptyInput("histogram: all values outside range");
    h.density.resize(n_bins);
    for (int k = 0; k < n_bins; ++k)
        h.density[k] = h.counts[k] / (static_cast<double>(in_range) * width);
    return h;
}

/// Two-sample Kolmogorov-Smirnov statistic D = sup |F_a - F_b|.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw EmptyInput("ks_distance: empty sample set");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::abs(ia / na - ib / nb));
    }
    return d;
}

inline double median(std::vector<double> values) {
    if (values.empty()) throw EmptyInput("median: no values");
    const std::size_t n = values.size();
    std::nth_element(values.begin(), values.begin() + n / 2, values.end());
    double hi = values[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + n / 2 - 1, values.end());
    return (values[n / 2 - 1] + hi) / 2.0;
}

/// Least-squares line y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of residuals
    int n_points = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InsufficientData("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw InsufficientData("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    f.n_points = static_cast<int>(x.size());
    double ss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - (f.slope * x[k] + f.intercept);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

inline void to_json(nlohmann::json& j, const FidelityHistogram& h) {
    j = nlohmann::json{
        {"edges", h.edges}, {"counts", h.counts}, {"density", h.density}, {"meta", h.meta}};
}

}  // namespace rsc
