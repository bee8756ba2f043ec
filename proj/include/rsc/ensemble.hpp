#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <thread>
#include <vector>

#include "rsc/common.hpp"
#include "rsc/disorder.hpp"
#include "rsc/entanglement.hpp"
#include "rsc/fermion.hpp"
#include "rsc/rng.hpp"
#include "rsc/sdrg.hpp"
#include "rsc/stats.hpp"

namespace rsc {

/// One disorder realization, fully processed: the last decimated pair, its
/// exact correlations, and the entanglement panel.
struct RealizationRecord {
    std::uint64_t realization = 0;
    std::uint64_t attempt = 0;
    double alpha = 0.0;
    int length = 0;
    Boundary boundary = Boundary::periodic;
    int left = 0;
    int right = 0;
    int distance = 0;
    double j_eff = 0.0;
    double cxx = 0.0;
    double czz = 0.0;
    PairEntanglement panel;
};

struct EnsembleConfig {
    DisorderDistribution dist;
    int length = 100;
    Boundary boundary = Boundary::periodic;
    int n_realizations = 1;
    std::uint64_t master_seed = 0;
    int n_workers = 0;  // 0 = hardware_concurrency
    int max_resample_attempts = 5;
};

struct EnsembleResult {
    std::vector<RealizationRecord> records;  // ordered by realization index
    std::uint64_t resampled = 0;             // degenerate-spectrum retries
    std::uint64_t failed = 0;                // realizations dropped after the retry cap
};

/// Sample -> decimate -> last pair -> exact correlations -> panel, for one
/// realization index. Degenerate spectra are resampled with a derived
/// sub-seed.
inline RealizationRecord process_realization(const EnsembleConfig& cfg, std::uint64_t index,
                                             std::uint64_t* resampled = nullptr) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        const ChainSpec chain = sample_chain(cfg.dist, cfg.length, cfg.boundary,
                                             {cfg.master_seed, index, attempt});
        const SdrgTrace trace = decimate(chain);
        const SingletRecord& pair = last_pair(trace);
        try {
            const CorrelationPair corr = correlation_pair(chain, pair.left, pair.right);
            RealizationRecord rec;
            rec.realization = index;
            rec.attempt = attempt;
            rec.alpha = cfg.dist.alpha;
            rec.length = cfg.length;
            rec.boundary = cfg.boundary;
            rec.left = pair.left;
            rec.right = pair.right;
            rec.distance = pair_distance(pair, cfg.length, cfg.boundary);
            rec.j_eff = pair.j_eff;
            rec.cxx = corr.cxx;
            rec.czz = corr.czz;
            rec.panel = panel_from_correlations(corr.cxx, corr.czz);
            return rec;
        } catch (const DegenerateSpectrum&) {
            if (resampled) ++*resampled;
            if (static_cast<int>(attempt) + 1 >= cfg.max_resample_attempts)
                throw DegenerateSpectrum("process_realization: retry cap exceeded");
        }
    }
}

/// Run the full ensemble. Records are ordered by realization index, so the
/// output is byte-identical regardless of worker count.
inline EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
    cfg.dist.validate();
    if (cfg.n_realizations < 1) throw Error("run_ensemble: need n >= 1");

    const int n = cfg.n_realizations;
    int workers = cfg.n_workers > 0 ? cfg.n_workers
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, n);

    std::vector<RealizationRecord> records(n);
    std::vector<char> ok(n, 0);
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> resampled{0};

    auto work = [&] {
        std::uint64_t local_resampled = 0;
        for (;;) {
            const std::uint64_t idx = next.fetch_add(1);
            if (idx >= static_cast<std::uint64_t>(n)) break;
            try {
                records[idx] = process_realization(cfg, idx, &local_resampled);
                ok[idx] = 1;
            } catch (const DegenerateSpectrum&) {
                ok[idx] = 0;
            }
        }
        resampled += local_resampled;
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    EnsembleResult out;
    out.resampled = resampled.load();
    out.records.reserve(n);
    for (int k = 0; k < n; ++k) {
        if (ok[k])
            out.records.push_back(std::move(records[k]));
        else
            ++out.failed;
    }
    return out;
}

struct SurveyEntry {
    int i = 0;
    int j = 0;
    int distance = 0;
    double fidelity = 0.0;
};

/// Exact fidelity for every pair with odd chordal separation > l_c.
/// Periodic chains are solved in two gauges (shift 0 and L/2) so every
/// shorter arc is non-wrapping. max_pairs > 0 subsamples deterministically.
inline std::vector<SurveyEntry> all_pairs_survey(const ChainSpec& chain, double l_c,
                                                 int max_pairs = 0) {
    chain.validate();
    if (l_c < 1.0) throw Error("all_pairs_survey: l_c must be >= 1");
    const int L = chain.length;
    const bool periodic = chain.boundary == Boundary::periodic;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j) {
            const int d = site_distance(i, j, L, chain.boundary);
            if (d % 2 == 1 && d > l_c) pairs.emplace_back(i, j);
        }
    if (max_pairs > 0 && static_cast<int>(pairs.size()) > max_pairs) {
        std::vector<std::pair<int, int>> picked;
        picked.reserve(max_pairs);
        const double stride = static_cast<double>(pairs.size()) / max_pairs;
        for (int k = 0; k < max_pairs; ++k) picked.push_back(pairs[static_cast<int>(k * stride)]);
        pairs = std::move(picked);
    }

    const CorrelationMatrix gm0 = ground_correlation_matrix(chain);
    CorrelationMatrix gm_half;
    if (periodic) gm_half = ground_correlation_matrix(rotate_chain(chain, L / 2));

    std::vector<SurveyEntry> out;
    out.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        const int d = site_distance(i, j, L, chain.boundary);
        double xx, zz;
        if (periodic && j - i > L / 2) {
            // shorter arc wraps; in the half-rotated gauge it does not
            const int a = j - L / 2;
            const int b = i + L / 2;
            xx = cxx(gm_half, a, b);
            zz = czz(gm_half, a, b);
        } else {
            xx = cxx(gm0, i, j);
            zz = czz(gm0, i, j);
        }
        out.push_back({i, j, d, fidelity(xx, zz)});
    }
    return out;
}

struct ThresholdFraction {
    double fraction = 0.0;
    double std_error = 0.0;  // binomial
    int n_windowed = 0;
};

/// Fraction of windowed records (d in [d_min, d_max]) with F > threshold.
inline ThresholdFraction threshold_fraction(const std::vector<RealizationRecord>& records,
                                            double d_min, double d_max, double threshold) {
    if (!(d_max >= d_min)) throw Error("threshold_fraction: invalid window");
    int n = 0, above = 0;
    for (const auto& r : records) {
        if (r.distance < d_min || r.distance > d_max) continue;
        ++n;
        if (r.panel.fidelity > threshold) ++above;
    }
    if (n == 0) throw EmptyWindow("threshold_fraction: no records in window");
    ThresholdFraction out;
    out.n_windowed = n;
    out.fraction = static_cast<double>(above) / n;
    out.std_error = std::sqrt(out.fraction * (1.0 - out.fraction) / n);
    return out;
}

/// Fit of the effective-coupling decay J_eff = Omega0 exp(-gamma sqrt(d)):
/// medians of ln(j_eff/Omega0) per distance bin, least squares against
/// sqrt(d) with the line anchored at ln(J_eff) = ln(Omega0) at d = 0 (the
/// model has a single free parameter; a floating intercept lets short-range
/// transients drag the slope well below the asymptotic decay rate).
struct GammaFit {
    double gamma = 0.0;
    double intercept = 0.0;  // ln(Omega0), fixed by the model
    double residual = 0.0;
    int n_points = 0;  // distance bins used
};

namespace detail {

inline GammaFit fit_gamma_bins(std::map<int, std::vector<double>>& by_distance,
                               std::size_t total, double log_omega0, int min_bin_count) {
    std::vector<double> x, y;
    for (auto& [d, lnj] : by_distance) {
        if (static_cast<int>(lnj.size()) < min_bin_count) continue;
        x.push_back(std::sqrt(static_cast<double>(d)));
        y.push_back(median(lnj) - log_omega0);
    }
    if (total < 100 || x.size() < 5)
        throw InsufficientData("fit_gamma: need >= 100 samples over >= 5 distances");
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += x[k] * y[k];
        sxx += x[k] * x[k];
    }
    GammaFit out;
    out.gamma = -sxy / sxx;
    out.intercept = log_omega0;
    out.n_points = static_cast<int>(x.size());
    double ss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] + out.gamma * x[k];
        ss += r * r;
    }
    out.residual = std::sqrt(ss / static_cast<double>(x.size()));
    if (!(out.gamma > 0.0)) throw Error("fit_gamma: non-positive gamma");
    return out;
}

}  // namespace detail

/// Gamma from last-pair ensemble records.
inline GammaFit fit_gamma(const std::vector<RealizationRecord>& records, double d_min = 10.0,
                          int min_bin_count = 5, double omega0 = 1.0) {
    std::map<int, std::vector<double>> by_distance;
    std::size_t total = 0;
    for (const auto& r : records) {
        if (r.distance < d_min) continue;
        by_distance[r.distance].push_back(std::log(r.j_eff));
        ++total;
    }
    return detail::fit_gamma_bins(by_distance, total, std::log(omega0), min_bin_count);
}

/// Gamma from every decimated singlet of an ensemble of traces. This is the
/// estimator that reproduces the published decay rates: it uses all pairs,
/// not only the last one per chain, so the per-distance medians are dense.
inline GammaFit fit_gamma(const std::vector<SdrgTrace>& traces, double d_min = 10.0,
                          int min_bin_count = 5, double omega0 = 1.0) {
    std::map<int, std::vector<double>> by_distance;
    std::size_t total = 0;
    for (const auto& t : traces)
        for (const auto& r : t.records) {
            const int d = pair_distance(r, t.chain.length, t.chain.boundary);
            if (d < d_min) continue;
            by_distance[d].push_back(std::log(r.j_eff));
            ++total;
        }
    return detail::fit_gamma_bins(by_distance, total, std::log(omega0), min_bin_count);
}

/// Empirical probability that a site pair at separation d is a decimated
/// singlet, over an ensemble of traces. Expected ~ 2/(3 d^2) at large d.
inline double tail_probability(const std::vector<SdrgTrace>& traces, int d) {
    if (d < 1) throw Error("tail_probability: d must be >= 1");
    if (traces.empty()) throw InsufficientData("tail_probability: no traces");
    std::uint64_t hits = 0;
    std::uint64_t pairs = 0;
    for (const auto& t : traces) {
        const int L = t.chain.length;
        const Boundary b = t.chain.boundary;
        if (b == Boundary::periodic)
            pairs += (d < L / 2) ? L : (d == L / 2 ? L / 2 : 0);
        else
            pairs += (d < L) ? L - d : 0;
        for (const auto& r : t.records)
            if (pair_distance(r, L, b) == d) ++hits;
    }
    if (pairs == 0) throw InsufficientData("tail_probability: no available pairs at this d");
    return static_cast<double>(hits) / static_cast<double>(pairs);
}

}  // namespace rsc
