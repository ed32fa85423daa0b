#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "vander/bridge.hpp"
#include "vander/circlepoly.hpp"
#include "vander/ensemble.hpp"
#include "vander/inverse.hpp"
#include "vander/moments.hpp"
#include "vander/parallel.hpp"
#include "vander/spectral.hpp"
#include "vander/stats.hpp"
#include "vander/table.hpp"

namespace vander {

inline constexpr const char* kVersion = "vanderspec 0.1.0";

/// One experiment invocation. Everything that affects the science is a field
/// here and is echoed into the output metadata; worker count and output paths
/// are I/O attributes and never change results.
struct ExperimentConfig {
    std::string experiment;
    std::vector<int> n_list{100};
    int l = 0;        // explicit column count; 0 derives L = round(beta * N^d)
    double beta = 1.0;
    int d = 1;
    int trials = 200;
    uint64_t seed = 1;
    double eps = 0.5;
    std::string k_seq = "pow2";
    int grid = 0;     // circle grid for polynomial maxima, or bridge grid M
    int depth = 10;   // dyadic depth for the bridge experiment
    int p_lo = 1, p_hi = 12;
    int bins = 0;     // histogram bins; 0 = Freedman-Diaconis
    int workers = 0;  // 0 = default_workers()

    int columns_for(int n) const {
        if (l > 0) return l;
        double nd = 1.0;
        for (int j = 0; j < d; ++j) nd *= n;
        return std::max(1, static_cast<int>(std::llround(beta * nd)));
    }

    int worker_count() const { return workers > 0 ? workers : default_workers(); }

    void validate() const {
        if (n_list.empty()) throw std::invalid_argument("config: empty N list");
        for (int n : n_list)
            if (n < 1) throw std::invalid_argument("config: N must be positive");
        if (l < 0 || trials < 1 || depth < 1) throw std::invalid_argument("config: knobs must be positive");
        if (l == 0 && beta <= 0.0) throw std::invalid_argument("config: beta must be positive");
        if (d < 1 || d > 3) throw std::invalid_argument("config: d must be 1, 2 or 3");
        if (p_lo > p_hi) throw std::invalid_argument("config: bad p range");
        if (grid < 0 || bins < 0) throw std::invalid_argument("config: knobs must be positive");
    }

    void echo_into(ResultTable& t) const {
        t.meta("experiment", experiment);
        std::string ns;
        for (size_t i = 0; i < n_list.size(); ++i) ns += (i ? ";" : "") + std::to_string(n_list[i]);
        t.meta("n", ns);
        t.meta("l", static_cast<int64_t>(l));
        t.meta("beta", beta);
        t.meta("d", static_cast<int64_t>(d));
        t.meta("trials", static_cast<int64_t>(trials));
        t.meta("seed", static_cast<int64_t>(seed));
        t.meta("eps", eps);
        t.meta("k_seq", k_seq);
        t.meta("grid", static_cast<int64_t>(grid));
        t.meta("depth", static_cast<int64_t>(depth));
        t.meta("p_range", std::to_string(p_lo) + ".." + std::to_string(p_hi));
        t.meta("bins", static_cast<int64_t>(bins));
        t.meta("version", kVersion);
    }
};

struct ExperimentOutput {
    ResultTable primary;
    std::vector<std::pair<std::string, ResultTable>> extras; // suffix -> table

    /// Writes `<path>`, `<path>.meta`, and for each extra `<stem>_<suffix>.csv`.
    void write(const std::string& path) const {
        primary.write(path);
        for (const auto& [suffix, table] : extras) {
            std::string stem = path;
            const auto dot = stem.rfind(".csv");
            if (dot != std::string::npos && dot == stem.size() - 4) stem.resize(dot);
            table.write(stem + "_" + suffix + ".csv");
        }
    }
};

namespace detail {

class WallClock {
public:
    explicit WallClock(ResultTable& t) : table_(t), start_(std::chrono::steady_clock::now()) {}
    ~WallClock() {
        const auto dt = std::chrono::steady_clock::now() - start_;
        table_.meta("wall_time_s", std::chrono::duration<double>(dt).count());
    }

private:
    ResultTable& table_;
    std::chrono::steady_clock::time_point start_;
};

inline int pow2_words(int n) { return std::max(2, (n + 106 + 63) / 64); }

inline PhaseVector trial_phases(const ExperimentConfig& cfg, int n, int columns, int trial,
                                int words = 2) {
    const uint64_t s = trial_seed(cfg.seed, cfg.experiment + "#" + std::to_string(n),
                                  static_cast<uint64_t>(trial));
    return sample_phases(columns, cfg.d, SeedSpec{s, 0}, words);
}

} // namespace detail

/// Average fraction G_N(10^-p) of Gram eigenvalues at or below each threshold,
/// over seeded trials of the (possibly rectangular) d = 1 ensemble.
inline ExperimentOutput run_atom_probe(ExperimentConfig cfg) {
    cfg.experiment = "atom";
    cfg.validate();
    const int n = cfg.n_list.front();
    if (n > 1024) throw budget_error("atom: N above the eigensolver budget of 1024");
    const int columns = cfg.columns_for(n);

    auto one_trial = [&](int t) {
        const PhaseVector pv = detail::trial_phases(cfg, n, columns, t);
        const Spectrum spec = eig_symmetric(build_dirichlet_gram(pv, n)).spectrum;
        std::vector<double> g(cfg.p_hi - cfg.p_lo + 1, 0.0);
        for (int p = cfg.p_lo; p <= cfg.p_hi; ++p) {
            const double thr = std::pow(10.0, -p);
            int count = 0;
            for (double lam : spec.values)
                if (lam <= thr) ++count;
            g[p - cfg.p_lo] = static_cast<double>(count) / spec.size();
        }
        return g;
    };
    const auto per_trial = run_trials<std::vector<double>>(cfg.trials, cfg.worker_count(), one_trial);

    ExperimentOutput out;
    out.primary.columns = {{"p", ""}, {"threshold", ""}, {"g_mean", ""}, {"g_se", ""}};
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    for (int p = cfg.p_lo; p <= cfg.p_hi; ++p) {
        std::vector<double> vals(cfg.trials);
        for (int t = 0; t < cfg.trials; ++t) vals[t] = per_trial[t][p - cfg.p_lo];
        out.primary.add_row({static_cast<double>(p), std::pow(10.0, -p), mean(vals),
                             cfg.trials > 1 ? std_error(vals) : 0.0});
    }
    return out;
}

/// Mean of 2 log max|P| against both threshold normalizations, per N.
inline ExperimentOutput run_polymax_bound(ExperimentConfig cfg) {
    cfg.experiment = "polymax";
    cfg.validate();
    if (cfg.eps <= 0.0 || cfg.eps >= 1.0) throw std::invalid_argument("polymax: eps in (0,1)");

    ExperimentOutput out;
    out.primary.columns = {{"n", ""},
                           {"mean_two_log_max", ""},
                           {"se_two_log_max", ""},
                           {"thr_gamma_sqrt_pi", ""},
                           {"thr_sqrt_gamma_pi", ""},
                           {"freq_gamma_sqrt_pi", ""},
                           {"freq_sqrt_gamma_pi", ""}};
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    const double g = sign_gap_constant();
    for (int n : cfg.n_list) {
        auto one_trial = [&](int t) {
            const PhaseVector pv = detail::trial_phases(cfg, n, n, t);
            return 2.0 * max_on_circle(CirclePolynomial::from_phases(pv), cfg.grid, 1e-9).log_max;
        };
        const auto vals = run_trials<double>(cfg.trials, cfg.worker_count(), one_trial);
        const double root_n = std::sqrt(static_cast<double>(n));
        const double thr_a = g * std::sqrt(kPi) * cfg.eps * root_n / 2.0;
        const double thr_b = std::sqrt(g * kPi) * cfg.eps * root_n / 2.0;
        double freq_a = 0.0, freq_b = 0.0;
        for (double v : vals) {
            if (v >= thr_a) freq_a += 1.0;
            if (v >= thr_b) freq_b += 1.0;
        }
        out.primary.add_row({static_cast<double>(n), mean(vals),
                             cfg.trials > 1 ? std_error(vals) : 0.0, thr_a, thr_b,
                             freq_a / cfg.trials, freq_b / cfg.trials});
    }
    return out;
}

/// Eigenvalue histogram of V V^* for the selected exponent sequence, with the
/// Marchenko-Pastur density sampled at bin centers for k_p = 2^p, plus the
/// empirical moments r = 1..4 as a sidecar table.
inline ExperimentOutput run_mp_hist(ExperimentConfig cfg) {
    cfg.experiment = "mphist";
    cfg.validate();
    const int n = cfg.n_list.front();
    const ExponentSequence k = ExponentSequence::from_name(cfg.k_seq);
    const int words = k.kind == ExponentSequence::Kind::pow2 ? detail::pow2_words(n) : 2;

    struct TrialOut {
        std::vector<double> eigs;
        double m[4];
    };
    auto one_trial = [&](int t) {
        const PhaseVector pv = detail::trial_phases(cfg, n, n, t, words);
        const ComplexMatrix v = build_generalized(pv, k, n);
        const Spectrum spec = eig_hermitian(gram_right(v)).spectrum;
        TrialOut o;
        o.eigs = spec.values;
        for (int r = 1; r <= 4; ++r) {
            double s = 0.0;
            for (double lam : spec.values) s += std::pow(lam, r);
            o.m[r - 1] = s / n;
        }
        return o;
    };
    const auto per_trial = run_trials<TrialOut>(cfg.trials, cfg.worker_count(), one_trial);

    std::vector<double> pooled;
    pooled.reserve(static_cast<size_t>(cfg.trials) * n);
    for (const auto& t : per_trial) pooled.insert(pooled.end(), t.eigs.begin(), t.eigs.end());
    const int bins = cfg.bins > 0 ? cfg.bins : fd_bin_count(pooled);
    const double hi = *std::max_element(pooled.begin(), pooled.end()) * (1.0 + 1e-12);
    const Histogram h = histogram_fixed(pooled, 0.0, std::max(hi, 1e-12), bins);

    const bool mp = (k.kind == ExponentSequence::Kind::pow2);
    ExperimentOutput out;
    out.primary.columns = {{"bin_center", ""}, {"mass", ""}};
    if (mp) out.primary.columns.push_back({"mp_density", ""});
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    for (int b = 0; b < h.bins(); ++b) {
        std::vector<double> row{h.center(b), h.mass[b]};
        if (mp) row.push_back(mp_density(h.center(b)));
        out.primary.add_row(std::move(row));
    }

    ResultTable moments;
    moments.columns = {{"r", ""}, {"moment_mean", ""}, {"moment_se", ""}};
    cfg.echo_into(moments);
    for (int r = 1; r <= 4; ++r) {
        std::vector<double> vals(cfg.trials);
        for (int t = 0; t < cfg.trials; ++t) vals[t] = per_trial[t].m[r - 1];
        moments.add_row({static_cast<double>(r), mean(vals), cfg.trials > 1 ? std_error(vals) : 0.0});
    }
    out.extras.emplace_back("moments", std::move(moments));
    return out;
}

/// Exact |S_{rho,N}| for the 4-cycle crossing partition under k_p = p^2 and
/// k_p = 2^p, normalized by N^3. Deterministic; no sampling.
inline ExperimentOutput run_crossing_count(ExperimentConfig cfg) {
    cfg.experiment = "crossing";
    cfg.validate();
    ExperimentOutput out;
    out.primary.columns = {{"n", ""},
                           {"count_square", ""},
                           {"normalized_square", ""},
                           {"count_pow2", ""},
                           {"normalized_pow2", ""}};
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    const SetPartition& rho = four_cycle_partition();
    for (int n : cfg.n_list) {
        if (n > 4000) throw budget_error("crossing: N beyond the pairwise-sum table budget");
        const SolutionCount sq = count_solutions(rho, n, ExponentSequence::square());
        const SolutionCount p2 = count_solutions(rho, n, ExponentSequence::pow2());
        out.primary.add_row({static_cast<double>(n), static_cast<double>(sq.count), sq.normalized,
                             static_cast<double>(p2.count), p2.normalized});
    }
    return out;
}

/// Maximum Gram eigenvalue scan over N: mean, spread and the growth ratios
/// lambda_L / log(N^d) and lambda_L log log(N^d) / log(N^d).
inline ExperimentOutput run_maxeig_scan(ExperimentConfig cfg) {
    cfg.experiment = "maxeig";
    cfg.validate();
    ExperimentOutput out;
    out.primary.columns = {{"n", ""},
                           {"l", ""},
                           {"mean_max_eig", ""},
                           {"se_max_eig", ""},
                           {"min_max_eig", ""},
                           {"max_max_eig", ""},
                           {"max_ratio_log", ""},
                           {"mean_ratio_loglog", ""}};
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    for (int n : cfg.n_list) {
        const int columns = cfg.columns_for(n);
        if (columns > 1024) throw budget_error("maxeig: L above the eigensolver budget of 1024");
        auto one_trial = [&](int t) {
            const PhaseVector pv = detail::trial_phases(cfg, n, columns, t);
            return eig_symmetric(build_dirichlet_gram(pv, n)).spectrum.max();
        };
        const auto vals = run_trials<double>(cfg.trials, cfg.worker_count(), one_trial);
        const double log_nd = cfg.d * std::log(static_cast<double>(n));
        const double loglog_nd = std::log(log_nd);
        double max_ratio = 0.0, sum_ll = 0.0;
        for (double v : vals) {
            max_ratio = std::max(max_ratio, v / log_nd);
            sum_ll += v * loglog_nd / log_nd;
        }
        out.primary.add_row({static_cast<double>(n), static_cast<double>(columns), mean(vals),
                             cfg.trials > 1 ? std_error(vals) : 0.0,
                             *std::min_element(vals.begin(), vals.end()),
                             *std::max_element(vals.begin(), vals.end()), max_ratio,
                             sum_ll / cfg.trials});
    }
    return out;
}

/// Minimum-eigenvalue scan: the log-domain sandwich bounds on every N, the
/// eigensolver's log lambda_1 at N <= 64, and the frequency of the
/// 2 log max|P| >= sqrt(gamma pi) eps sqrt(N)/2 event.
inline ExperimentOutput run_mineig_scan(ExperimentConfig cfg) {
    cfg.experiment = "mineig";
    cfg.validate();
    if (cfg.eps <= 0.0 || cfg.eps >= 1.0) throw std::invalid_argument("mineig: eps in (0,1)");
    ExperimentOutput out;
    out.primary.columns = {{"n", ""},
                           {"mean_log_lambda1", ""},
                           {"mean_log_lower", ""},
                           {"mean_log_upper", ""},
                           {"mean_log_upper_4n2", ""},
                           {"threshold", ""},
                           {"freq_maincomb", ""}};
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    const double g = sign_gap_constant();
    struct TrialOut {
        Lambda1Bounds bounds;
        double two_log_max;
        double log_lambda1; // NaN when the eigensolver is out of budget
    };
    for (int n : cfg.n_list) {
        const double thr = std::sqrt(g * kPi) * cfg.eps * std::sqrt(static_cast<double>(n)) / 2.0;
        auto one_trial = [&](int t) {
            const PhaseVector pv = detail::trial_phases(cfg, n, n, t);
            const CirclePolynomial poly = CirclePolynomial::from_phases(pv);
            TrialOut o;
            o.bounds = lambda1_sandwich(poly, cfg.grid);
            o.two_log_max = 2.0 * max_on_circle(poly, cfg.grid).log_max;
            o.log_lambda1 = std::numeric_limits<double>::quiet_NaN();
            if (n <= 64) {
                const double l1 = eig_symmetric(build_dirichlet_gram(pv, n)).spectrum.min();
                o.log_lambda1 = std::log(std::max(l1, 1e-300));
            }
            return o;
        };
        const auto vals = run_trials<TrialOut>(cfg.trials, cfg.worker_count(), one_trial);
        double s_l1 = 0.0, s_lo = 0.0, s_up = 0.0, s_up4 = 0.0, freq = 0.0;
        for (const auto& v : vals) {
            s_l1 += v.log_lambda1;
            s_lo += v.bounds.log_lower;
            s_up += v.bounds.log_upper;
            s_up4 += v.bounds.log_upper_4n2;
            if (v.two_log_max >= thr) freq += 1.0;
        }
        out.primary.add_row({static_cast<double>(n), s_l1 / cfg.trials, s_lo / cfg.trials,
                             s_up / cfg.trials, s_up4 / cfg.trials, thr, freq / cfg.trials});
    }
    return out;
}

/// Brownian-bridge simulation: per-path I* and I_pi (primary), one path's
/// trace and its I_phi profile over the dyadic phases (the two figure files),
/// and the empirical CDF of I*.
inline ExperimentOutput run_bridge_sim(ExperimentConfig cfg) {
    cfg.experiment = "bridge";
    cfg.validate();
    const int m = cfg.grid > 0 ? cfg.grid : (1 << 20);
    if (m < 2 || (m & (m - 1)) != 0) throw std::invalid_argument("bridge: grid must be a power of two");
    const double spacing = kTwoPi / m;
    const double eps = std::max(cfg.eps > 0.0 && cfg.eps < kPi ? cfg.eps : spacing, spacing);
    const std::vector<double> phases = dyadic_phases(cfg.depth);

    struct TrialOut {
        std::vector<double> profile; // I_phi at every dyadic phase
        double istar;
        double i_pi;
    };
    const std::vector<double> kernel = i_phi_kernel(m);
    auto one_trial = [&](int t) {
        const uint64_t s = trial_seed(cfg.seed, "bridge", static_cast<uint64_t>(t));
        const BridgePath path = sample_bridge(m, s);
        TrialOut o;
        o.i_pi = i_phi(path, kPi, eps, kernel);
        o.istar = -std::numeric_limits<double>::infinity();
        o.profile.reserve(phases.size());
        for (double phi : phases) {
            o.profile.push_back(i_phi(path, phi, eps, kernel));
            o.istar = std::max(o.istar, o.profile.back());
        }
        return o;
    };
    const auto vals = run_trials<TrialOut>(cfg.trials, cfg.worker_count(), one_trial);

    ExperimentOutput out;
    out.primary.columns = {{"path", ""}, {"i_star", ""}, {"i_pi", ""}};
    detail::WallClock clock(out.primary);
    cfg.echo_into(out.primary);
    for (int t = 0; t < cfg.trials; ++t)
        out.primary.add_row({static_cast<double>(t), vals[t].istar, vals[t].i_pi});
    out.primary.meta("grid_m", static_cast<int64_t>(m));
    out.primary.meta("eps_effective", eps);

    // one path's trace (the first), reproducing the realization figure
    const BridgePath path0 = sample_bridge(m, trial_seed(cfg.seed, "bridge", 0));
    ResultTable trace;
    trace.columns = {{"psi", "rad"}, {"w", ""}};
    cfg.echo_into(trace);
    for (int j = 0; j <= m; ++j) trace.add_row({j * spacing, path0.w[j]});
    out.extras.emplace_back("trace", std::move(trace));

    ResultTable profile;
    profile.columns = {{"path", ""}, {"phi", "rad"}, {"i_phi", ""}};
    cfg.echo_into(profile);
    for (int t = 0; t < cfg.trials; ++t)
        for (size_t r = 0; r < phases.size(); ++r)
            profile.add_row({static_cast<double>(t), phases[r], vals[t].profile[r]});
    out.extras.emplace_back("iphi", std::move(profile));

    ResultTable ecdf;
    ecdf.columns = {{"i_star", ""}, {"cdf", ""}};
    cfg.echo_into(ecdf);
    std::vector<double> sorted(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) sorted[i] = vals[i].istar;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i)
        ecdf.add_row({sorted[i], static_cast<double>(i + 1) / sorted.size()});
    out.extras.emplace_back("ecdf", std::move(ecdf));
    return out;
}

/// Dispatch by experiment name (the CLI subcommand names).
inline ExperimentOutput run_experiment(const std::string& name, ExperimentConfig cfg) {
    cfg.experiment = name;
    if (name == "atom") return run_atom_probe(cfg);
    if (name == "polymax") return run_polymax_bound(cfg);
    if (name == "mphist") return run_mp_hist(cfg);
    if (name == "crossing") return run_crossing_count(cfg);
    if (name == "maxeig") return run_maxeig_scan(cfg);
    if (name == "mineig") return run_mineig_scan(cfg);
    if (name == "bridge") return run_bridge_sim(cfg);
    throw std::invalid_argument("unknown experiment: " + name);
}

} // namespace vander
