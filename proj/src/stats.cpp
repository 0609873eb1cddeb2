#include "lerw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lerw/parallel.hpp"

namespace lerw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd to_vector(const LatticePoint& p, double divisor) { return p.cast<double>() / divisor; }

GaussianDiagnostics diagnose_rows(const std::vector<CltRow>& rows, int dim, double target,
                                  const GaussianTolerances& tol) {
    if (rows.size() < 2) throw std::runtime_error("fewer than 2 uncensored replicas; diagnostics undefined");
    Eigen::MatrixXd samples(static_cast<Index>(rows.size()), dim);
    for (std::size_t r = 0; r < rows.size(); ++r) samples.row(static_cast<Index>(r)) = rows[r].statistic.transpose();
    return gaussian_diagnostics(moment_report(samples), target, tol);
}

}  // namespace

Eigen::MatrixXd MomentReport::correlation() const {
    const Eigen::VectorXd sd = covariance.diagonal().cwiseSqrt();
    Eigen::MatrixXd corr(covariance.rows(), covariance.cols());
    for (Index i = 0; i < corr.rows(); ++i)
        for (Index j = 0; j < corr.cols(); ++j)
            corr(i, j) = sd(i) > 0.0 && sd(j) > 0.0 ? covariance(i, j) / (sd(i) * sd(j)) : kNaN;
    return corr;
}

double MomentReport::max_abs_correlation() const {
    const Eigen::MatrixXd corr = correlation();
    double worst = 0.0;
    for (Index i = 0; i < corr.rows(); ++i)
        for (Index j = i + 1; j < corr.cols(); ++j) {
            if (std::isnan(corr(i, j))) return kNaN;
            worst = std::max(worst, std::abs(corr(i, j)));
        }
    return worst;
}

MomentReport moment_report_rows(const Eigen::MatrixXd& samples) {
    const Index n = samples.rows();
    if (n < 2) throw std::invalid_argument("moment_report: need at least 2 samples, got " + std::to_string(n));
    MomentReport r;
    r.n_samples = n;
    r.mean = samples.colwise().mean().transpose();
    const Eigen::MatrixXd centred = samples.rowwise() - r.mean.transpose();
    r.covariance = centred.transpose() * centred / static_cast<double>(n - 1);
    r.covariance = 0.5 * (r.covariance + r.covariance.transpose()).eval();
    r.component_kurtosis.resize(samples.cols());
    for (Index a = 0; a < samples.cols(); ++a) {
        const Eigen::ArrayXd c2 = centred.col(a).array().square();
        const double m2 = c2.mean();
        const double m4 = c2.square().mean();
        if (m2 > 0.0) {
            r.component_kurtosis(a) = m4 / (m2 * m2);
        } else {
            r.component_kurtosis(a) = kNaN;
            r.degenerate = true;
        }
    }
    r.radial_second_moment = samples.rowwise().squaredNorm().mean();
    return r;
}

bool GaussianDiagnostics::all_pass() const noexcept {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const DiagnosticCheck& c) { return c.pass; });
}

GaussianDiagnostics gaussian_diagnostics(MomentReport moments, double target_variance, GaussianTolerances tol) {
    GaussianDiagnostics g;
    g.moments = std::move(moments);
    g.target_variance = target_variance;
    g.tolerances = tol;
    const Index d = g.moments.covariance.rows();
    // NaN values fail every comparison below, so degenerate samples never pass.
    for (Index a = 0; a < d; ++a) {
        const double v = g.moments.covariance(a, a);
        const double bound = tol.variance_relative * target_variance;
        g.checks.push_back({"variance[" + std::to_string(a) + "]", v, target_variance, bound,
                            std::abs(v - target_variance) <= bound});
    }
    for (Index a = 0; a < d; ++a) {
        const double k = g.moments.component_kurtosis(a);
        g.checks.push_back({"kurtosis[" + std::to_string(a) + "]", k, 3.0, tol.kurtosis_absolute,
                            std::abs(k - 3.0) <= tol.kurtosis_absolute});
    }
    if (d > 1) {
        const double c = g.moments.max_abs_correlation();
        g.checks.push_back({"max_abs_correlation", c, 0.0, tol.correlation_absolute, c <= tol.correlation_absolute});
    }
    return g;
}

CltResult clt_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve, const SigmaRealization& sigma,
                         GaussianTolerances tolerances) {
    CltResult out;
    out.attempted = static_cast<std::int64_t>(sigma.sigma.size());
    out.censored = sigma.censored;
    std::vector<CltRow> slots(sigma.sigma.size());
    const double divisor = std::sqrt(static_cast<double>(cfg.N));
    for_each_replica(out.attempted, cfg.workers, [&](std::int64_t k) {
        const Index s = sigma.sigma[static_cast<std::size_t>(k)];
        if (s < 0) return;
        CltRow& row = slots[static_cast<std::size_t>(k)];
        row.stream = experiment_stream(cfg.replicas, k);
        row.sigma = s;
        row.F = static_cast<Index>(std::floor(static_cast<double>(s) * curve.at(s)));
        auto rng = derive_stream(cfg.master_seed, row.stream);
        row.endpoint = generate_walk(rng, row.F, cfg.dim).point(row.F);
        row.statistic = to_vector(row.endpoint, divisor);
    });
    for (std::size_t k = 0; k < slots.size(); ++k)
        if (sigma.sigma[k] >= 0) out.rows.push_back(std::move(slots[k]));
    out.diagnostics = diagnose_rows(out.rows, cfg.dim, 1.0 / cfg.dim, tolerances);
    return out;
}

double tau_normalization(std::int64_t N, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q = " + std::to_string(q) + " outside (0, 1)");
    return std::pow(static_cast<double>(N), -q / (1.0 - q));
}

double tau_target_variance(int dim, const PowerLawFit& fit) {
    const double q = fit.exponent;
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q = " + std::to_string(q) + " outside (0, 1)");
    return std::pow(fit.amplitude, -1.0 / (1.0 - q)) / dim;
}

CltResult tau_clt_experiment(const ExperimentConfig& cfg, const PowerLawFit& fit, const SigmaRealization& sigma,
                             GaussianTolerances tolerances) {
    CltResult out;
    out.q = fit.exponent;
    out.tau = tau_normalization(cfg.N, fit.exponent);
    out.attempted = static_cast<std::int64_t>(sigma.sigma.size());
    out.censored = sigma.censored;
    std::vector<CltRow> slots(sigma.sigma.size());
    const double divisor = std::sqrt(static_cast<double>(cfg.N) / out.tau);
    for_each_replica(out.attempted, cfg.workers, [&](std::int64_t k) {
        const Index s = sigma.sigma[static_cast<std::size_t>(k)];
        if (s < 0) return;
        CltRow& row = slots[static_cast<std::size_t>(k)];
        row.stream = experiment_stream(cfg.replicas, k);
        row.sigma = s;
        row.F = s;
        auto rng = derive_stream(cfg.master_seed, row.stream);
        row.endpoint = generate_walk(rng, s, cfg.dim).point(s);
        row.statistic = to_vector(row.endpoint, divisor);
    });
    for (std::size_t k = 0; k < slots.size(); ++k)
        if (sigma.sigma[k] >= 0) out.rows.push_back(std::move(slots[k]));
    out.diagnostics = diagnose_rows(out.rows, cfg.dim, tau_target_variance(cfg.dim, fit), tolerances);
    return out;
}

CompareReport compare_lew_experiment(const ExperimentConfig& cfg) {
    if (!(cfg.margin_factor >= 1.0))
        throw ConfigError("margin_factor: insufficient path margin for compare-lew");
    if (cfg.replicas < 2) throw ConfigError("replicas: compare-lew needs at least 2 replicas");
    const Index N = cfg.N;
    const Index cap = cfg.max_path_len;
    // A window as long as any admissible path erases like the full procedure.
    const bool infinite = cfg.infinite_alpha() || cfg.window() >= cap;
    const Index W = infinite ? cap : cfg.window();
    const Index margin = infinite ? 0 : cfg.margin_steps();
    if (N + 1 > cap) throw ResourceError("N + 1 exceeds max_path_len");

    std::vector<CompareRow> slots(static_cast<std::size_t>(cfg.replicas));
    std::vector<std::uint8_t> done(slots.size(), 0);
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        CompareRow& row = slots[static_cast<std::size_t>(k)];
        row.stream = curve_stream(k);
        auto rng = derive_stream(cfg.master_seed, row.stream);
        WalkPath path = generate_walk(rng, std::min(N + margin, cap - 1), cfg.dim);
        auto grow = [&]() {
            if (path.size() >= cap) return false;
            const Index target = std::min(2 * path.steps(), cap - 1);
            path.extend(rng, std::max<Index>(target - path.steps(), 1));
            return true;
        };

        Index points = N + 1;
        if (!infinite) {
            for (;;) {
                const std::vector<Index> sigma = windowed_jump_times(path, W, N + 1);
                if (static_cast<Index>(sigma.size()) == N + 1) {
                    const Index pivot = N == 0 ? 0 : sigma[static_cast<std::size_t>(N - 1)] + 1;
                    if (pivot + margin <= path.last_index()) {
                        points = pivot + margin + 1;
                        break;
                    }
                }
                if (!grow()) return;
            }
        }
        for (;;) {
            while (path.size() < points)
                if (!grow()) return;
            const WalkPath shared = path.prefix(points);
            const ErasureTrace full = erase_full(shared);
            if (full.erased_length() >= N + 1) {
                const ErasureTrace windowed = infinite ? erase_full(shared) : erase_windowed(shared, W);
                row.path_points = points;
                row.sigma_windowed = windowed.sigma[static_cast<std::size_t>(N)];
                row.sigma_full = full.sigma[static_cast<std::size_t>(N)];
                row.mismatch = windowed.erased_path.leftCols(N + 1) != full.erased_path.leftCols(N + 1);
                row.windowed_endpoint = windowed.erased_path.col(N);
                row.full_endpoint = full.erased_path.col(N);
                done[static_cast<std::size_t>(k)] = 1;
                return;
            }
            if (points >= cap) return;
            points = std::min(2 * points, cap);
        }
    });

    CompareReport rep;
    rep.attempted = cfg.replicas;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (!done[k]) {
            ++rep.censored;
            continue;
        }
        rep.mismatches += slots[k].mismatch;
        rep.rows.push_back(std::move(slots[k]));
    }
    const auto n = static_cast<Index>(rep.rows.size());
    if (n < 2) throw std::runtime_error("compare-lew: fewer than 2 uncensored replicas");
    Eigen::MatrixXd win(n, cfg.dim);
    Eigen::MatrixXd full(n, cfg.dim);
    for (Index r = 0; r < n; ++r) {
        win.row(r) = rep.rows[static_cast<std::size_t>(r)].windowed_endpoint.cast<double>().transpose();
        full.row(r) = rep.rows[static_cast<std::size_t>(r)].full_endpoint.cast<double>().transpose();
    }
    rep.windowed = moment_report(win);
    rep.full = moment_report(full);
    rep.c_N = std::sqrt(rep.windowed.radial_second_moment);
    rep.d_N = std::sqrt(rep.full.radial_second_moment);
    rep.ratio = rep.d_N > 0.0 ? rep.c_N / rep.d_N : kNaN;
    rep.mismatch_frequency = static_cast<double>(rep.mismatches) / static_cast<double>(n);
    return rep;
}

double evaluate(Statistic s, std::span<const double> samples) {
    if (samples.empty()) return kNaN;
    switch (s) {
        case Statistic::mean:
            return summarize(samples).mean;
        case Statistic::std:
            return summarize(samples).std;
        case Statistic::median: {
            std::vector<double> v(samples.begin(), samples.end());
            const std::size_t mid = v.size() / 2;
            std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
            const double hi = v[mid];
            if (v.size() % 2 == 1) return hi;
            const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
            return 0.5 * (lo + hi);
        }
    }
    return kNaN;
}

namespace {

// Linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& v, double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<double> bootstrap_replicates(std::span<const double> samples,
                                         const std::function<double(std::span<const double>)>& statistic,
                                         std::int64_t B, RngStream& rng) {
    if (samples.empty()) throw std::invalid_argument("bootstrap: empty samples");
    if (B < 100) throw std::invalid_argument("bootstrap: B must be at least 100");
    if (samples.size() > 0xffffffffu) throw std::invalid_argument("bootstrap: too many samples");
    const auto n = static_cast<std::uint32_t>(samples.size());
    std::vector<double> resample(samples.size());
    std::vector<double> stats(static_cast<std::size_t>(B));
    for (auto& s : stats) {
        for (auto& x : resample) x = samples[rng.below(n)];
        s = statistic(resample);
    }
    return stats;
}

std::pair<double, double> percentile_interval(std::vector<double> replicates, double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
    if (replicates.empty()) throw std::invalid_argument("bootstrap: no replicates");
    for (double s : replicates)
        if (std::isnan(s)) return {kNaN, kNaN};
    std::sort(replicates.begin(), replicates.end());
    const double tail = 0.5 * (1.0 - level);
    return {quantile_sorted(replicates, tail), quantile_sorted(replicates, 1.0 - tail)};
}

std::pair<double, double> bootstrap_ci(std::span<const double> samples,
                                       const std::function<double(std::span<const double>)>& statistic,
                                       std::int64_t B, double level, RngStream& rng) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
    return percentile_interval(bootstrap_replicates(samples, statistic, B, rng), level);
}

std::pair<double, double> bootstrap_ci(std::span<const double> samples, Statistic statistic, std::int64_t B,
                                       double level, RngStream& rng) {
    return bootstrap_ci(
        samples, [statistic](std::span<const double> s) { return evaluate(statistic, s); }, B, level, rng);
}

}  // namespace lerw
