#include "lerw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "lerw/bootstrap.hpp"
#include "lerw/detail/point_index.hpp"
#include "lerw/parallel.hpp"

namespace lerw {

namespace {

void require_finite_window(const ExperimentConfig& cfg, const char* what) {
    if (cfg.infinite_alpha())
        throw ConfigError(std::string("alpha: ") + what + " needs a finite alpha");
}

void require_margin(const ExperimentConfig& cfg) {
    if (!(cfg.margin_factor >= 1.0))
        throw ConfigError("margin_factor: insufficient path margin (" + std::to_string(cfg.margin_factor) +
                          " < 1); prefix statistics would be truncated");
}

void require_path_budget(const ExperimentConfig& cfg, Index steps) {
    if (steps + 1 > cfg.max_path_len)
        throw ResourceError("walk of " + std::to_string(steps + 1) + " points exceeds max_path_len " +
                            std::to_string(cfg.max_path_len));
}

std::vector<Index> normalized_grid(std::vector<Index> grid) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (!grid.empty() && grid.front() < 0) throw std::invalid_argument("grid indices must be non-negative");
    return grid;
}

SurvivalEntry make_entry(Index n, Index window, std::int64_t hits, std::int64_t replicas) {
    SurvivalEntry e;
    e.n = n;
    e.window = window;
    e.replicas = replicas;
    e.a_hat = static_cast<double>(hits) / static_cast<double>(replicas);
    e.std_error = std::sqrt(e.a_hat * (1.0 - e.a_hat) / static_cast<double>(replicas));
    return e;
}

RatioSamples finish_ratio(RatioSamples r) {
    const SampleSummary s = summarize(r.samples);
    r.mean = s.mean;
    r.std = s.std;
    r.std_defined = r.samples.size() >= 2;
    return r;
}

}  // namespace

const SurvivalEntry* SurvivalCurve::find(Index n) const noexcept {
    auto it = std::lower_bound(entries.begin(), entries.end(), n,
                               [](const SurvivalEntry& e, Index v) { return e.n < v; });
    return it != entries.end() && it->n == n ? &*it : nullptr;
}

double SurvivalCurve::at(Index n) const {
    if (entries.empty() || n < entries.front().n || n > entries.back().n)
        throw std::out_of_range("survival curve does not cover n = " + std::to_string(n));
    auto hi = std::lower_bound(entries.begin(), entries.end(), n,
                               [](const SurvivalEntry& e, Index v) { return e.n < v; });
    if (hi->n == n) return hi->a_hat;
    const auto lo = hi - 1;
    const double t_lin = static_cast<double>(n - lo->n) / static_cast<double>(hi->n - lo->n);
    if (lo->n == 0 || lo->a_hat <= 0.0 || hi->a_hat <= 0.0)
        return lo->a_hat + t_lin * (hi->a_hat - lo->a_hat);
    const double t = (std::log(static_cast<double>(n)) - std::log(static_cast<double>(lo->n))) /
                     (std::log(static_cast<double>(hi->n)) - std::log(static_cast<double>(lo->n)));
    return std::exp(std::log(lo->a_hat) + t * (std::log(hi->a_hat) - std::log(lo->a_hat)));
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_linear: x and y differ in length");
    const auto n = static_cast<Index>(x.size());
    if (n < 3) throw std::invalid_argument("fit_linear: need at least 3 points, got " + std::to_string(n));
    const Eigen::Map<const Eigen::ArrayXd> xs(x.data(), n);
    const Eigen::Map<const Eigen::ArrayXd> ys(y.data(), n);
    const double mx = xs.mean();
    const double my = ys.mean();
    const double sxx = (xs - mx).square().sum();
    const double syy = (ys - my).square().sum();
    const double sxy = ((xs - mx) * (ys - my)).sum();
    if (sxx <= 0.0) throw std::invalid_argument("fit_linear: x values are all equal");
    LinearFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double rss = (ys - fit.intercept - fit.slope * xs).square().sum();
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - rss / syy, 0.0, 1.0) : 1.0;
    fit.slope_std_error = std::sqrt(std::max(rss, 0.0) / static_cast<double>(n - 2) / sxx);
    return fit;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points, std::pair<double, double> range) {
    std::vector<double> lx;
    std::vector<double> ly;
    PowerLawFit out;
    out.x_min = std::numeric_limits<double>::infinity();
    out.x_max = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : points) {
        if (x < range.first || x > range.second) continue;
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("fit_power_law: non-positive value at x = " + std::to_string(x));
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
        out.x_min = std::min(out.x_min, x);
        out.x_max = std::max(out.x_max, x);
    }
    if (lx.size() < 3)
        throw std::invalid_argument("fit_power_law: need at least 3 points in range, got " +
                                    std::to_string(lx.size()));
    const LinearFit lin = fit_linear(lx, ly);
    out.exponent = -lin.slope;
    out.amplitude = std::exp(lin.intercept);
    out.std_error = lin.slope_std_error;
    out.r_squared = lin.r_squared;
    out.points = lin.points;
    return out;
}

SampleSummary summarize(std::span<const double> samples) {
    SampleSummary s;
    if (samples.empty()) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(samples.size());
    if (samples.size() >= 2) {
        double ss = 0.0;
        for (double v : samples) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    }
    return s;
}

SurvivalCurve estimate_survival(const ExperimentConfig& cfg, std::vector<Index> grid) {
    if (cfg.replicas < 2) throw ConfigError("replicas: survival estimation needs at least 2 replicas");
    require_margin(cfg);
    require_finite_window(cfg, "survival estimation");
    if (grid.empty()) grid.assign(cfg.n_grid.begin(), cfg.n_grid.end());
    if (grid.empty()) grid.push_back(cfg.N);
    grid = normalized_grid(std::move(grid));

    const Index W = cfg.window();
    const Index steps = grid.back() + cfg.margin_steps();
    require_path_budget(cfg, steps);

    const std::size_t G = grid.size();
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cfg.replicas) * G, 0);
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        auto rng = derive_stream(cfg.master_seed, curve_stream(k));
        const WalkPath path = generate_walk(rng, steps, cfg.dim);
        const std::vector<Index> sigma = windowed_jump_times(path, W, path.size());
        std::uint8_t* row = hit.data() + static_cast<std::size_t>(k) * G;
        std::size_t s = 0;
        for (std::size_t g = 0; g < G; ++g) {
            while (s < sigma.size() && sigma[s] < grid[g]) ++s;
            row[g] = s < sigma.size() && sigma[s] == grid[g];
        }
    });

    SurvivalCurve curve;
    curve.alpha = cfg.alpha;
    curve.N = cfg.N;
    for (std::size_t g = 0; g < G; ++g) {
        std::int64_t hits = 0;
        for (std::int64_t k = 0; k < cfg.replicas; ++k) hits += hit[static_cast<std::size_t>(k) * G + g];
        curve.entries.push_back(make_entry(grid[g], W, hits, cfg.replicas));
    }
    return curve;
}

SurvivalCurve estimate_scaling_survival(const ExperimentConfig& cfg, std::vector<Index> grid) {
    if (cfg.replicas < 2) throw ConfigError("replicas: survival estimation needs at least 2 replicas");
    require_margin(cfg);
    require_finite_window(cfg, "survival estimation");
    grid = normalized_grid(std::move(grid));
    if (grid.empty() || grid.front() < 1) throw std::invalid_argument("scaling grid needs indices >= 1");

    const std::size_t G = grid.size();
    std::vector<Index> windows(G);
    std::vector<Index> reach(G);
    Index steps = 0;
    for (std::size_t g = 0; g < G; ++g) {
        windows[g] = window_length(grid[g], cfg.alpha, cfg.max_path_len);
        reach[g] = grid[g] + static_cast<Index>(std::ceil(cfg.margin_factor * static_cast<double>(windows[g])));
        steps = std::max(steps, reach[g]);
    }
    require_path_budget(cfg, steps);

    std::vector<std::uint8_t> hit(static_cast<std::size_t>(cfg.replicas) * G, 0);
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        auto rng = derive_stream(cfg.master_seed, curve_stream(k));
        const WalkPath path = generate_walk(rng, steps, cfg.dim);
        for (std::size_t g = 0; g < G; ++g) {
            const WalkPath head = path.prefix(reach[g] + 1);
            const std::vector<Index> sigma = windowed_jump_times(head, windows[g], grid[g] + 1);
            hit[static_cast<std::size_t>(k) * G + g] = std::binary_search(sigma.begin(), sigma.end(), grid[g]);
        }
    });

    SurvivalCurve curve;
    curve.alpha = cfg.alpha;
    curve.N = cfg.N;
    for (std::size_t g = 0; g < G; ++g) {
        std::int64_t hits = 0;
        for (std::int64_t k = 0; k < cfg.replicas; ++k) hits += hit[static_cast<std::size_t>(k) * G + g];
        curve.entries.push_back(make_entry(grid[g], windows[g], hits, cfg.replicas));
    }
    return curve;
}

RatioSamples rho_ratio_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve) {
    require_margin(cfg);
    require_finite_window(cfg, "rho-ratio");
    if (cfg.replicas < 1) throw ConfigError("replicas: need at least 1 replica");
    const double a = curve.at(cfg.N);
    if (!(a > 0.0)) throw std::domain_error("rho-ratio: a_hat(N) = 0, normalization is degenerate");

    const Index W = cfg.window();
    const Index steps = cfg.N + cfg.margin_steps();
    require_path_budget(cfg, steps);

    RatioSamples out;
    out.N = cfg.N;
    out.alpha = cfg.alpha;
    out.attempted = cfg.replicas;
    const auto R = static_cast<std::size_t>(cfg.replicas);
    out.streams.resize(R);
    out.observed.resize(R);
    out.samples.resize(R);
    const double norm = static_cast<double>(cfg.N) * a;
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        const std::uint64_t stream = experiment_stream(cfg.replicas, k);
        auto rng = derive_stream(cfg.master_seed, stream);
        const WalkPath path = generate_walk(rng, steps, cfg.dim);
        const std::vector<Index> sigma = windowed_jump_times(path, W, cfg.N + 1);
        const auto rho = std::upper_bound(sigma.begin(), sigma.end(), cfg.N) - sigma.begin();
        const auto slot = static_cast<std::size_t>(k);
        out.streams[slot] = stream;
        out.observed[slot] = rho;
        out.samples[slot] = static_cast<double>(rho) / norm;
    });
    return finish_ratio(std::move(out));
}

std::pair<Index, Index> SigmaRealization::range() const {
    Index lo = std::numeric_limits<Index>::max();
    Index hi = -1;
    for (Index s : sigma) {
        if (s < 0) continue;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (hi < 0) throw std::runtime_error("every replica was censored");
    return {lo, hi};
}

SigmaRealization realize_sigma(const ExperimentConfig& cfg, Index initial_steps) {
    require_margin(cfg);
    require_finite_window(cfg, "sigma realization");
    const Index W = cfg.window();
    const Index margin = cfg.margin_steps();
    const Index cap_steps = cfg.max_path_len - 1;
    const Index first = std::min(std::max(initial_steps, cfg.N + margin), cap_steps);
    const Index N = cfg.N;

    SigmaRealization out;
    out.N = N;
    out.window = W;
    out.sigma.assign(static_cast<std::size_t>(cfg.replicas), -1);
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        auto rng = derive_stream(cfg.master_seed, experiment_stream(cfg.replicas, k));
        Index steps = first;
        WalkPath path = generate_walk(rng, steps, cfg.dim);
        for (;;) {
            const std::vector<Index> sigma = windowed_jump_times(path, W, N + 1);
            if (static_cast<Index>(sigma.size()) == N + 1) {
                const Index pivot = N == 0 ? 0 : sigma[static_cast<std::size_t>(N - 1)] + 1;
                if (pivot + margin <= path.last_index()) {
                    out.sigma[static_cast<std::size_t>(k)] = sigma.back();
                    return;
                }
            }
            if (steps >= cap_steps) return;  // censored
            const Index grown = std::min(2 * steps, cap_steps);
            path.extend(rng, grown - steps);
            steps = grown;
        }
    });
    out.censored = std::count(out.sigma.begin(), out.sigma.end(), Index{-1});
    return out;
}

RatioSamples sigma_scaling_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve,
                                      const SigmaRealization& sigma) {
    RatioSamples out;
    out.N = cfg.N;
    out.alpha = cfg.alpha;
    out.attempted = static_cast<std::int64_t>(sigma.sigma.size());
    out.censored = sigma.censored;
    for (std::size_t k = 0; k < sigma.sigma.size(); ++k) {
        const Index s = sigma.sigma[k];
        if (s < 0) continue;
        out.streams.push_back(experiment_stream(cfg.replicas, static_cast<std::int64_t>(k)));
        out.observed.push_back(s);
        out.samples.push_back(static_cast<double>(s) * curve.at(s) / static_cast<double>(cfg.N));
    }
    return finish_ratio(std::move(out));
}

RatioSamples sigma_scaling_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve) {
    return sigma_scaling_experiment(cfg, curve, realize_sigma(cfg));
}

std::vector<double> default_beta_grid(const ExperimentConfig& cfg) {
    if (cfg.N < 2) throw ConfigError("N: z-decay needs N >= 2");
    std::vector<double> betas;
    // x = N^(beta - alpha) from 1.1 to 11, geometrically spaced.
    for (int i = 0; i < 20; ++i) {
        const double x = 1.1 * std::pow(10.0, i / 19.0);
        betas.push_back(cfg.alpha + std::log(x) / std::log(static_cast<double>(cfg.N)));
    }
    return betas;
}

std::vector<ZDecayPoint> estimate_z_decay(const ExperimentConfig& cfg, std::vector<double> beta_grid) {
    require_margin(cfg);
    require_finite_window(cfg, "z-decay");
    if (beta_grid.empty()) beta_grid = default_beta_grid(cfg);
    std::sort(beta_grid.begin(), beta_grid.end());
    for (double b : beta_grid)
        if (!(b > cfg.alpha))
            throw std::invalid_argument("beta_grid: every beta must exceed alpha, got " + std::to_string(b));

    const std::size_t G = beta_grid.size();
    std::vector<Index> spans(G);
    for (std::size_t g = 0; g < G; ++g) spans[g] = floor_power(cfg.N, beta_grid[g]);
    const Index k_obs = std::max<Index>(cfg.N, spans.back());
    const Index W = cfg.window();
    const Index steps = k_obs + cfg.margin_steps();
    require_path_budget(cfg, steps);

    std::vector<std::uint8_t> z(static_cast<std::size_t>(cfg.replicas) * G, 0);
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        auto rng = derive_stream(cfg.master_seed, curve_stream(k));
        const WalkPath path = generate_walk(rng, steps, cfg.dim);
        const Mask mask = loop_free_mask(path, W);
        for (std::size_t g = 0; g < G; ++g)
            z[static_cast<std::size_t>(k) * G + g] = z_indicator(mask, k_obs - spans[g], k_obs);
    });

    std::vector<ZDecayPoint> out;
    for (std::size_t g = 0; g < G; ++g) {
        std::int64_t hits = 0;
        for (std::int64_t k = 0; k < cfg.replicas; ++k) hits += z[static_cast<std::size_t>(k) * G + g];
        ZDecayPoint p;
        p.beta = beta_grid[g];
        p.x = std::pow(static_cast<double>(cfg.N), beta_grid[g] - cfg.alpha);
        p.span = spans[g];
        p.replicas = cfg.replicas;
        p.p_hat = static_cast<double>(hits) / static_cast<double>(cfg.replicas);
        p.std_error = std::sqrt(p.p_hat * (1.0 - p.p_hat) / static_cast<double>(cfg.replicas));
        out.push_back(p);
    }
    return out;
}

std::vector<Index> default_zeta_grid() {
    std::vector<Index> g;
    for (int e = 6; e <= 12; ++e) g.push_back(Index{1} << e);
    return g;
}

namespace {

std::vector<double> survival_from_first_hits(std::span<const Index> first_hit, std::span<const Index> n_grid) {
    // p(n) = fraction of replicas whose first intersection comes after n.
    std::vector<std::int64_t> alive(n_grid.size(), 0);
    for (Index t : first_hit) {
        const auto reached = std::lower_bound(n_grid.begin(), n_grid.end(), t) - n_grid.begin();
        // t > n for every grid n below index `reached`.
        if (reached > 0) ++alive[static_cast<std::size_t>(reached - 1)];
    }
    std::vector<double> p(n_grid.size());
    std::int64_t running = 0;
    for (std::size_t g = n_grid.size(); g-- > 0;) {
        running += alive[g];
        p[g] = static_cast<double>(running) / static_cast<double>(first_hit.size());
    }
    return p;
}

double fit_zeta(std::span<const Index> n_grid, std::span<const double> p, PowerLawFit* fit_out) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t g = 0; g < n_grid.size(); ++g)
        if (p[g] > 0.0) pts.emplace_back(static_cast<double>(n_grid[g]), p[g]);
    if (pts.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    const PowerLawFit fit = fit_power_law(pts);
    if (fit_out) *fit_out = fit;
    return fit.exponent;
}

}  // namespace

double zeta_from_first_hits(std::span<const Index> first_hit, std::span<const Index> n_grid) {
    const std::vector<double> p = survival_from_first_hits(first_hit, n_grid);
    return fit_zeta(n_grid, p, nullptr);
}

ZetaEstimate estimate_zeta(const ExperimentConfig& cfg, std::vector<Index> n_grid) {
    if (n_grid.empty()) n_grid.assign(cfg.n_grid.begin(), cfg.n_grid.end());
    if (n_grid.empty()) n_grid = default_zeta_grid();
    if (n_grid.size() < 3) throw std::invalid_argument("n_grid: zeta needs at least 3 grid points");
    for (std::size_t g = 0; g < n_grid.size(); ++g)
        if (n_grid[g] < 1 || (g > 0 && n_grid[g] <= n_grid[g - 1]))
            throw std::invalid_argument("n_grid: zeta grid must be positive and strictly increasing");
    if (cfg.replicas < 2) throw ConfigError("replicas: zeta needs at least 2 replicas");
    const Index n_max = n_grid.back();
    require_path_budget(cfg, n_max);

    const int d = cfg.dim;
    ZetaEstimate est;
    est.n_min = n_grid.front();
    est.n_max = n_max;
    est.replicas = cfg.replicas;
    est.first_hit.assign(static_cast<std::size_t>(cfg.replicas), n_max + 1);
    for_each_replica(cfg.replicas, cfg.workers, [&](std::int64_t k) {
        auto rng = derive_stream(cfg.master_seed, curve_stream(k));
        detail::PointSet visited_a(d, n_max, 256);  // S[1..m]
        detail::PointSet visited_b(d, n_max, 256);  // S'[0..m]
        std::vector<Coord> a(static_cast<std::size_t>(d), 0);
        std::vector<Coord> b(static_cast<std::size_t>(d), 0);
        visited_b.insert(b.data());
        for (Index m = 1; m <= n_max; ++m) {
            const int da = sample_direction(rng, d);
            a[static_cast<std::size_t>(da >> 1)] += (da & 1) ? -1 : 1;
            const int db = sample_direction(rng, d);
            b[static_cast<std::size_t>(db >> 1)] += (db & 1) ? -1 : 1;
            if (a == b || visited_b.contains(a.data()) || visited_a.contains(b.data())) {
                est.first_hit[static_cast<std::size_t>(k)] = m;
                return;
            }
            visited_a.insert(a.data());
            visited_b.insert(b.data());
        }
    });

    const std::vector<double> p = survival_from_first_hits(est.first_hit, n_grid);
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        est.survival_points.emplace_back(n_grid[g], p[g]);
        if (p[g] <= 0.0) est.degenerate = true;
    }
    PowerLawFit fit;
    est.zeta_hat = fit_zeta(n_grid, p, &fit);
    if (std::isnan(est.zeta_hat)) {
        est.degenerate = true;
        return est;
    }
    est.fit_std_error = fit.std_error;
    est.r_squared = fit.r_squared;

    std::vector<double> hits(est.first_hit.begin(), est.first_hit.end());
    auto boot = derive_stream(cfg.master_seed, kBootstrapStream);
    std::vector<Index> scratch(hits.size());
    const std::vector<double> reps = bootstrap_replicates(
        hits,
        [&](std::span<const double> resample) {
            std::copy(resample.begin(), resample.end(), scratch.begin());
            return zeta_from_first_hits(scratch, n_grid);
        },
        cfg.bootstrap_resamples, boot);
    std::tie(est.ci_low, est.ci_high) = percentile_interval(reps, cfg.ci_level);
    est.std_error = summarize(reps).std;
    return est;
}

}  // namespace lerw
