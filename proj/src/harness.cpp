#include "lerw/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "lerw/estimators.hpp"
#include "lerw/stats.hpp"

namespace lerw {

using nlohmann::ordered_json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Table::Table(std::string name, std::vector<std::string> header) : name_(std::move(name)), header_(std::move(header)) {}

void Table::add_cells(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::logic_error("table " + name_ + ": row width differs from header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
    ++rows_;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += '\n';
    return out + body_;
}

namespace {

double json_number(double v) { return v; }  // nlohmann writes NaN and inf as null

std::vector<std::string> axis_names(int dim, const std::string& prefix = "") {
    static const char* xyz[] = {"x", "y", "z"};
    std::vector<std::string> names;
    for (int a = 0; a < dim; ++a)
        names.push_back(prefix + (dim <= 3 ? std::string(xyz[a]) : "x" + std::to_string(a)));
    return names;
}

std::vector<std::string> with_axes(std::vector<std::string> head, int dim, const std::string& prefix = "") {
    for (auto& n : axis_names(dim, prefix)) head.push_back(std::move(n));
    return head;
}

void append_point(std::vector<std::string>& row, const LatticePoint& p) {
    for (Index a = 0; a < p.size(); ++a) row.push_back(std::to_string(p(a)));
}

Index margin_of(const ExperimentConfig& cfg) { return cfg.infinite_alpha() ? 0 : cfg.margin_steps(); }

std::vector<Index> powers_of_two_up_to(Index N) {
    std::vector<Index> g;
    for (Index n = 1; n < N; n *= 2) g.push_back(n);
    g.push_back(N);
    return g;
}

std::vector<Index> survival_grid(const ExperimentConfig& cfg) {
    if (!cfg.n_grid.empty()) return {cfg.n_grid.begin(), cfg.n_grid.end()};
    return powers_of_two_up_to(cfg.N);
}

std::vector<Index> scaling_grid(const ExperimentConfig& cfg) {
    if (!cfg.n_grid.empty()) return {cfg.n_grid.begin(), cfg.n_grid.end()};
    std::vector<Index> g;
    for (Index n = cfg.N; n >= 1 && n * 64 >= cfg.N; n /= 2) g.push_back(n);
    std::reverse(g.begin(), g.end());
    return g;
}

std::vector<Index> zeta_grid(const ExperimentConfig& cfg) {
    if (!cfg.n_grid.empty()) return {cfg.n_grid.begin(), cfg.n_grid.end()};
    return default_zeta_grid();
}

// Grid covering [lo, hi] geometrically, plus N.
std::vector<Index> covering_grid(Index N, Index lo, Index hi, int points = 16) {
    std::set<Index> g{N, lo, hi};
    for (int i = 1; i + 1 < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        g.insert(static_cast<Index>(std::llround(std::exp(std::log(static_cast<double>(lo)) * (1 - t) +
                                                          std::log(static_cast<double>(hi)) * t))));
    }
    return {g.begin(), g.end()};
}

StageRecord stage(std::string name, std::uint64_t first, std::int64_t count, std::int64_t censored = 0) {
    return {std::move(name), first, first + static_cast<std::uint64_t>(count) - 1, count, censored};
}

ordered_json curve_json(const SurvivalCurve& c) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : c.entries)
        arr.push_back({{"n", e.n}, {"window", e.window}, {"a_hat", e.a_hat}, {"stderr", e.std_error},
                       {"replicas", e.replicas}});
    return arr;
}

Table curve_table(const SurvivalCurve& c, const std::string& name) {
    Table t(name, {"n", "a_hat", "stderr", "replicas"});
    for (const auto& e : c.entries) t.add(e.n, e.a_hat, e.std_error, e.replicas);
    return t;
}

ordered_json ratio_json(const RatioSamples& r) {
    return {{"samples", r.samples.size()},
            {"mean", json_number(r.mean)},
            {"std", r.std_defined ? ordered_json(r.std) : ordered_json(nullptr)},
            {"std_defined", r.std_defined},
            {"stderr_of_mean",
             r.std_defined ? ordered_json(r.std / std::sqrt(static_cast<double>(r.samples.size()))) : ordered_json(nullptr)},
            {"attempted", r.attempted},
            {"censored", r.censored},
            {"censored_fraction", r.censored_fraction()},
            {"valid", r.valid()}};
}

ordered_json moments_json(const MomentReport& m) {
    ordered_json j;
    j["n_samples"] = m.n_samples;
    j["mean"] = std::vector<double>(m.mean.data(), m.mean.data() + m.mean.size());
    ordered_json cov = ordered_json::array();
    for (Index i = 0; i < m.covariance.rows(); ++i) {
        std::vector<double> row;
        for (Index k = 0; k < m.covariance.cols(); ++k) row.push_back(m.covariance(i, k));
        cov.push_back(row);
    }
    j["covariance"] = cov;
    ordered_json kurt = ordered_json::array();
    for (Index a = 0; a < m.component_kurtosis.size(); ++a) kurt.push_back(json_number(m.component_kurtosis(a)));
    j["component_kurtosis"] = kurt;
    j["radial_second_moment"] = m.radial_second_moment;
    j["max_abs_correlation"] = json_number(m.max_abs_correlation());
    j["degenerate"] = m.degenerate;
    return j;
}

void add_checks(RunResult& out, const GaussianDiagnostics& g) {
    for (const auto& c : g.checks)
        out.checks.push_back({{"name", c.name},
                              {"value", json_number(c.value)},
                              {"target", c.target},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
}

ordered_json diagnostics_json(const GaussianDiagnostics& g) {
    return {{"target_variance", g.target_variance},
            {"tolerances",
             {{"variance_relative", g.tolerances.variance_relative},
              {"kurtosis_absolute", g.tolerances.kurtosis_absolute},
              {"correlation_absolute", g.tolerances.correlation_absolute}}},
            {"moments", moments_json(g.moments)},
            {"all_pass", g.all_pass()}};
}

// Pilot curve at N, realization of sigma(N), then a curve covering its range.
struct SigmaStages {
    SurvivalCurve curve;
    SigmaRealization sigma;
};

SigmaStages run_sigma_stages(const ExperimentConfig& cfg, RunResult& out) {
    const SurvivalCurve pilot = estimate_survival(cfg, {cfg.N});
    const double a_N = pilot.entries.at(0).a_hat;
    if (!(a_N > 0.0)) throw std::domain_error("a_hat(N) = 0 in the pilot stage; sigma(N) cannot be located");
    const auto guess = static_cast<Index>(std::ceil(1.2 * static_cast<double>(cfg.N) / a_N)) + cfg.margin_steps();
    SigmaStages s;
    s.sigma = realize_sigma(cfg, guess);
    out.manifest.stages.push_back(stage("sigma", experiment_stream(cfg.replicas, 0), cfg.replicas, s.sigma.censored));
    const auto [lo, hi] = s.sigma.range();
    s.curve = estimate_survival(cfg, covering_grid(cfg.N, lo, hi));
    out.manifest.stages.push_back(stage("curve", curve_stream(0), cfg.replicas));
    out.tables.push_back(curve_table(s.curve, "curve"));
    out.results["curve"] = curve_json(s.curve);
    return s;
}

void censoring_gate(RunResult& out, std::int64_t attempted, std::int64_t censored) {
    const double frac = attempted ? static_cast<double>(censored) / static_cast<double>(attempted) : 0.0;
    out.results["censored"] = censored;
    out.results["censored_fraction"] = frac;
    if (frac > 0.10) {
        out.valid = false;
        out.manifest.warnings.push_back("censored fraction " + format_number(frac) +
                                        " exceeds 0.1; result flagged invalid");
    }
}

void run_survival(const ExperimentConfig& cfg, RunResult& out) {
    const SurvivalCurve c = estimate_survival(cfg, survival_grid(cfg));
    out.manifest.stages.push_back(stage("curve", curve_stream(0), cfg.replicas));
    out.tables.push_back(curve_table(c, "survival"));
    out.results["curve"] = curve_json(c);
}

void run_rho_ratio(const ExperimentConfig& cfg, RunResult& out) {
    const SurvivalCurve c = estimate_survival(cfg, {cfg.N});
    out.manifest.stages.push_back(stage("curve", curve_stream(0), cfg.replicas));
    const RatioSamples r = rho_ratio_experiment(cfg, c);
    out.manifest.stages.push_back(stage("ratio", experiment_stream(cfg.replicas, 0), cfg.replicas));
    out.tables.push_back(curve_table(c, "curve"));
    Table t("rho-ratio", {"replica", "rho_N", "ratio"});
    for (std::size_t k = 0; k < r.samples.size(); ++k) t.add(r.streams[k], r.observed[k], r.samples[k]);
    out.tables.push_back(std::move(t));
    out.results["a_hat_N"] = c.entries.at(0).a_hat;
    out.results["a_hat_N_stderr"] = c.entries.at(0).std_error;
    out.results["ratio"] = ratio_json(r);
}

void run_sigma_scaling(const ExperimentConfig& cfg, RunResult& out) {
    const SigmaStages s = run_sigma_stages(cfg, out);
    const RatioSamples r = sigma_scaling_experiment(cfg, s.curve, s.sigma);
    Table t("sigma-scaling", {"replica", "sigma_N", "a_hat_sigma", "ratio"});
    for (std::size_t k = 0; k < r.samples.size(); ++k)
        t.add(r.streams[k], r.observed[k], s.curve.at(r.observed[k]), r.samples[k]);
    out.tables.push_back(std::move(t));
    out.results["ratio"] = ratio_json(r);
    censoring_gate(out, r.attempted, r.censored);
}

void clt_rows(const CltResult& r, Table& t, bool with_F) {
    for (const auto& row : r.rows) {
        std::vector<std::string> cells{std::to_string(row.stream), std::to_string(row.sigma)};
        if (with_F) cells.push_back(std::to_string(row.F));
        append_point(cells, row.endpoint);
        t.add_cells(cells);
    }
}

void run_clt(const ExperimentConfig& cfg, RunResult& out) {
    const SigmaStages s = run_sigma_stages(cfg, out);
    const CltResult r = clt_experiment(cfg, s.curve, s.sigma);
    Table t("clt", with_axes({"replica", "sigma_N", "F_N"}, cfg.dim));
    clt_rows(r, t, true);
    out.tables.push_back(std::move(t));
    out.results["statistic"] = "S_F / sqrt(N), F = floor(sigma(N) a_hat(sigma(N)))";
    out.results["diagnostics"] = diagnostics_json(r.diagnostics);
    add_checks(out, r.diagnostics);
    censoring_gate(out, r.attempted, r.censored);
}

void run_tau_clt(const ExperimentConfig& cfg, RunResult& out) {
    const SurvivalCurve scaling = estimate_scaling_survival(cfg, scaling_grid(cfg));
    out.manifest.stages.push_back(stage("scaling-curve", curve_stream(0), cfg.replicas));
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : scaling.entries) pts.emplace_back(static_cast<double>(e.n), e.a_hat);
    const PowerLawFit fit = fit_power_law(pts);
    out.tables.push_back(curve_table(scaling, "scaling-curve"));
    out.results["scaling_curve"] = curve_json(scaling);
    out.results["fit"] = {{"q", fit.exponent},
                          {"amplitude", fit.amplitude},
                          {"stderr", fit.std_error},
                          {"r_squared", fit.r_squared},
                          {"fit_range", {fit.x_min, fit.x_max}}};
    if (!(fit.exponent > 0.0 && fit.exponent < 1.0))
        throw std::domain_error("fitted q = " + format_number(fit.exponent) + " is outside (0, 1)");
    if (fit.r_squared < 0.9)
        out.manifest.warnings.push_back("power-law fit of the survival probability has r^2 = " +
                                        format_number(fit.r_squared));

    const double sigma_guess = std::pow(static_cast<double>(cfg.N) / fit.amplitude, 1.0 / (1.0 - fit.exponent));
    const Index guess = static_cast<Index>(std::ceil(1.2 * std::min(sigma_guess, 1e15))) + cfg.margin_steps();
    const SigmaRealization sigma = realize_sigma(cfg, guess);
    out.manifest.stages.push_back(stage("sigma", experiment_stream(cfg.replicas, 0), cfg.replicas, sigma.censored));
    const CltResult r = tau_clt_experiment(cfg, fit, sigma);
    Table t("tau-clt", with_axes({"replica", "sigma_N"}, cfg.dim));
    clt_rows(r, t, false);
    out.tables.push_back(std::move(t));
    out.results["statistic"] = "S_sigma(N) sqrt(tau) / sqrt(N), tau = N^(-q/(1-q))";
    out.results["tau"] = r.tau;
    out.results["diagnostics"] = diagnostics_json(r.diagnostics);
    add_checks(out, r.diagnostics);
    censoring_gate(out, r.attempted, r.censored);
}

void run_compare_lew(const ExperimentConfig& cfg, RunResult& out) {
    if (!cfg.infinite_alpha() && cfg.alpha <= 2.0)
        out.manifest.warnings.push_back("compare-lew is meant for alpha > 2; alpha = " + format_number(cfg.alpha));
    const CompareReport r = compare_lew_experiment(cfg);
    out.manifest.stages.push_back(stage("compare", curve_stream(0), cfg.replicas, r.censored));
    std::vector<std::string> head{"replica", "mismatch", "path_points", "sigma_windowed", "sigma_full"};
    head = with_axes(with_axes(head, cfg.dim, "windowed_"), cfg.dim, "full_");
    Table t("compare-lew", head);
    for (const auto& row : r.rows) {
        std::vector<std::string> cells{std::to_string(row.stream), row.mismatch ? "1" : "0",
                                       std::to_string(row.path_points), std::to_string(row.sigma_windowed),
                                       std::to_string(row.sigma_full)};
        append_point(cells, row.windowed_endpoint);
        append_point(cells, row.full_endpoint);
        t.add_cells(cells);
    }
    out.tables.push_back(std::move(t));
    out.results["c_N"] = r.c_N;
    out.results["d_N"] = r.d_N;
    out.results["ratio"] = json_number(r.ratio);
    out.results["mismatch_frequency"] = r.mismatch_frequency;
    out.results["mismatches"] = r.mismatches;
    out.results["windowed_moments"] = moments_json(r.windowed);
    out.results["full_moments"] = moments_json(r.full);
    censoring_gate(out, r.attempted, r.censored);
}

void run_zeta(const ExperimentConfig& cfg, RunResult& out) {
    const ZetaEstimate z = estimate_zeta(cfg, zeta_grid(cfg));
    out.manifest.stages.push_back(stage("walk-pairs", curve_stream(0), cfg.replicas));
    out.manifest.stages.push_back({"bootstrap", kBootstrapStream, kBootstrapStream, cfg.bootstrap_resamples, 0});
    Table t("zeta", {"n", "p_hat", "stderr", "replicas"});
    for (const auto& [n, p] : z.survival_points)
        t.add(n, p, std::sqrt(p * (1 - p) / static_cast<double>(cfg.replicas)), cfg.replicas);
    out.tables.push_back(std::move(t));
    Table hits("zeta-hits", {"replica", "first_hit"});
    for (std::size_t k = 0; k < z.first_hit.size(); ++k) hits.add(curve_stream(static_cast<std::int64_t>(k)), z.first_hit[k]);
    out.tables.push_back(std::move(hits));
    out.results["definition"] =
        "two independent walks from the origin; p(n) = P(S[1,n] and S'[0,n] are disjoint); zeta = decay exponent "
        "of p by log-log least squares";
    out.results["zeta_hat"] = json_number(z.zeta_hat);
    out.results["stderr"] = json_number(z.std_error);
    out.results["fit_stderr"] = json_number(z.fit_std_error);
    out.results["ci"] = {json_number(z.ci_low), json_number(z.ci_high)};
    out.results["ci_level"] = cfg.ci_level;
    out.results["bootstrap_resamples"] = cfg.bootstrap_resamples;
    out.results["r_squared"] = json_number(z.r_squared);
    out.results["n_range"] = {z.n_min, z.n_max};
    out.results["degenerate"] = z.degenerate;
    if (z.degenerate) out.manifest.warnings.push_back("zeta fit is degenerate: some p(n) = 0");
    if (!z.degenerate && std::isfinite(z.zeta_hat)) out.manifest.zeta_hat = z.zeta_hat;
}

void run_z_decay(const ExperimentConfig& cfg, RunResult& out) {
    std::vector<double> betas(cfg.beta_grid.begin(), cfg.beta_grid.end());
    const auto pts = estimate_z_decay(cfg, betas);
    out.manifest.stages.push_back(stage("mask", curve_stream(0), cfg.replicas));
    Table t("z-decay", {"beta", "x", "span", "p_hat", "stderr", "replicas"});
    ordered_json arr = ordered_json::array();
    std::vector<double> xs;
    std::vector<double> logp;
    bool monotone = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        t.add(p.beta, p.x, p.span, p.p_hat, p.std_error, p.replicas);
        arr.push_back({{"beta", p.beta}, {"x", p.x}, {"span", p.span}, {"p_hat", p.p_hat}, {"stderr", p.std_error}});
        if (i > 0 && p.p_hat > pts[i - 1].p_hat) monotone = false;
        if (p.p_hat >= 1e-3 && p.p_hat <= 0.5) {
            xs.push_back(p.x);
            logp.push_back(std::log(p.p_hat));
        }
    }
    out.tables.push_back(std::move(t));
    out.results["points"] = arr;
    out.results["monotone_non_increasing"] = monotone;
    out.checks.push_back({{"name", "monotone_non_increasing"}, {"pass", monotone}});
    if (xs.size() >= 3) {
        const LinearFit f = fit_linear(xs, logp);
        out.results["fit"] = {{"range", "p_hat in [0.001, 0.5]"}, {"points", f.points}, {"slope", f.slope},
                              {"intercept", f.intercept}, {"r_squared", f.r_squared}};
        out.checks.push_back({{"name", "log_linear_r_squared"}, {"value", f.r_squared}, {"target", 1.0},
                              {"tolerance", 0.1}, {"pass", f.r_squared >= 0.9}});
    } else {
        out.manifest.warnings.push_back("fewer than 3 grid points with p_hat in [0.001, 0.5]; no decay fit");
    }
}

void run_walk(const ExperimentConfig& cfg, RunResult& out) {
    Table t("walk", with_axes({"replica", "i"}, cfg.dim));
    std::vector<WalkPath> paths;
    paths.reserve(static_cast<std::size_t>(cfg.replicas));
    for (std::int64_t k = 0; k < cfg.replicas; ++k) {
        auto rng = derive_stream(cfg.master_seed, curve_stream(k));
        const WalkPath p = generate_walk(rng, cfg.N, cfg.dim);
        for (Index i = 0; i < p.size(); ++i) {
            std::vector<std::string> cells{std::to_string(k), std::to_string(i)};
            append_point(cells, p.point(i));
            t.add_cells(cells);
        }
    }
    out.manifest.stages.push_back(stage("walk", curve_stream(0), cfg.replicas));
    out.tables.push_back(std::move(t));
}

void run_erase(const ExperimentConfig& cfg, RunResult& out) {
    const Index steps = cfg.infinite_alpha() ? cfg.N : cfg.N + 1 + cfg.margin_steps();
    const Index W = cfg.infinite_alpha() ? steps + 1 : cfg.window();
    Table t("erase", with_axes({"replica", "i", "sigma"}, cfg.dim));
    for (std::int64_t k = 0; k < cfg.replicas; ++k) {
        auto rng = derive_stream(cfg.master_seed, curve_stream(k));
        const WalkPath p = generate_walk(rng, steps, cfg.dim);
        const ErasureTrace tr = erase_windowed(p, W);
        for (Index i = 0; i < tr.erased_length() && tr.sigma[static_cast<std::size_t>(i)] <= cfg.N; ++i) {
            std::vector<std::string> cells{std::to_string(k), std::to_string(i),
                                           std::to_string(tr.sigma[static_cast<std::size_t>(i)])};
            append_point(cells, tr.erased_path.col(i));
            t.add_cells(cells);
        }
    }
    out.manifest.stages.push_back(stage("erase", curve_stream(0), cfg.replicas));
    out.results["observed_through_index"] = cfg.N;
    out.results["path_steps"] = steps;
    out.tables.push_back(std::move(t));
}

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["experiment"] = std::string(to_string(c.experiment));
    j["N"] = c.N;
    j["alpha"] = c.infinite_alpha() ? ordered_json("inf") : ordered_json(c.alpha);
    j["dim"] = c.dim;
    j["replicas"] = c.replicas;
    j["master_seed"] = c.master_seed;
    j["n_grid"] = c.n_grid;
    j["beta_grid"] = c.beta_grid;
    j["margin_factor"] = c.margin_factor;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir.generic_string();
    j["max_path_len"] = c.max_path_len;
    j["max_points"] = c.max_points;
    j["zeta_hat"] = c.zeta_hat ? ordered_json(*c.zeta_hat) : ordered_json(nullptr);
    j["bootstrap_resamples"] = c.bootstrap_resamples;
    j["ci_level"] = c.ci_level;
    return j;
}

}  // namespace

ordered_json RunResult::summary() const {
    const RunManifest& m = manifest;
    ordered_json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
    j["experiment"] = std::string(to_string(m.config.experiment));
    j["config"] = config_json(m.config);
    ordered_json derived;
    derived["window"] = m.window;
    derived["margin_steps"] = m.margin_steps;
    derived["zeta_hat"] = m.zeta_hat ? ordered_json(*m.zeta_hat) : ordered_json(nullptr);
    derived["regime_bound"] = m.regime_bound ? ordered_json(*m.regime_bound) : ordered_json(nullptr);
    derived["warnings"] = m.warnings;
    j["derived"] = derived;
    ordered_json stages = ordered_json::array();
    for (const auto& s : m.stages)
        stages.push_back({{"name", s.name},
                          {"streams", {s.first_stream, s.last_stream}},
                          {"attempted", s.attempted},
                          {"censored", s.censored}});
    j["stages"] = stages;
    ordered_json files = ordered_json::array();
    for (const auto& t : tables) files.push_back({{"file", t.name() + ".csv"}, {"rows", t.rows()}});
    j["files"] = files;
    j["valid"] = valid;
    j["results"] = results;
    j["checks"] = checks;
    j["wall_time_seconds"] = m.wall_time_seconds;
    return j;
}

std::int64_t planned_points(const ExperimentConfig& cfg) {
    const Index margin = margin_of(cfg);
    const std::int64_t R = cfg.replicas;
    auto max_of = [](const std::vector<Index>& g, Index fallback) {
        return g.empty() ? fallback : *std::max_element(g.begin(), g.end());
    };
    switch (cfg.experiment) {
        case Experiment::survival:
            return R * (max_of(survival_grid(cfg), cfg.N) + margin + 1);
        case Experiment::rho_ratio:
            return 2 * R * (cfg.N + margin + 1);
        case Experiment::sigma_scaling:
        case Experiment::clt:
            return 3 * R * (cfg.N + margin + 1);
        case Experiment::tau_clt:
            return 2 * R * (max_of(scaling_grid(cfg), cfg.N) + margin + 1);
        case Experiment::compare_lew:
            return R * (cfg.N + margin + 1);
        case Experiment::zeta:
            return 2 * R * (max_of(zeta_grid(cfg), 1) + 1);
        case Experiment::z_decay: {
            std::vector<double> betas(cfg.beta_grid.begin(), cfg.beta_grid.end());
            if (betas.empty()) betas = default_beta_grid(cfg);
            Index span = cfg.N;
            for (double b : betas) span = std::max(span, floor_power(cfg.N, b));
            return R * (span + margin + 1);
        }
        case Experiment::walk:
            return R * (cfg.N + 1);
        case Experiment::erase:
            return R * (cfg.N + margin + 2);
    }
    return 0;
}

void check_resources(const ExperimentConfig& cfg) {
    const Index margin = margin_of(cfg);
    Index longest = cfg.N + margin + 1;
    if (cfg.experiment == Experiment::survival && !cfg.n_grid.empty())
        longest = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end()) + margin + 1;
    if (cfg.experiment == Experiment::zeta) longest = zeta_grid(cfg).back() + 1;
    if (longest > cfg.max_path_len)
        throw ResourceError("a walk of " + std::to_string(longest) + " points exceeds max_path_len = " +
                            std::to_string(cfg.max_path_len));
    const long double total = static_cast<long double>(planned_points(cfg));
    if (total > static_cast<long double>(cfg.max_points))
        throw ResourceError("planned " + format_number(static_cast<double>(total)) +
                            " walk points (path length x replicas) exceed max_points = " +
                            std::to_string(cfg.max_points));
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    check_resources(cfg);
    const auto start = std::chrono::steady_clock::now();

    RunResult out;
    out.manifest.config = cfg;
    out.manifest.window = cfg.infinite_alpha() ? cfg.max_path_len : cfg.window();
    out.manifest.margin_steps = margin_of(cfg);
    out.manifest.zeta_hat = cfg.zeta_hat;

    switch (cfg.experiment) {
        case Experiment::survival: run_survival(cfg, out); break;
        case Experiment::rho_ratio: run_rho_ratio(cfg, out); break;
        case Experiment::sigma_scaling: run_sigma_scaling(cfg, out); break;
        case Experiment::clt: run_clt(cfg, out); break;
        case Experiment::tau_clt: run_tau_clt(cfg, out); break;
        case Experiment::compare_lew: run_compare_lew(cfg, out); break;
        case Experiment::zeta: run_zeta(cfg, out); break;
        case Experiment::z_decay: run_z_decay(cfg, out); break;
        case Experiment::walk: run_walk(cfg, out); break;
        case Experiment::erase: run_erase(cfg, out); break;
    }

    if (out.manifest.zeta_hat) {
        const double bound = theorem_regime_bound(*out.manifest.zeta_hat);
        out.manifest.regime_bound = bound;
        if (cfg.alpha >= bound)
            out.manifest.warnings.push_back("alpha = " + format_number(cfg.alpha) +
                                            " is not below 1/(1+2 zeta_hat) = " + format_number(bound) +
                                            "; the Gaussian regime is not guaranteed");
    }
    out.manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        f.close();
        if (!f) throw std::runtime_error("cannot write " + path.string());
        written.push_back(path);
    };
    for (const auto& t : result.tables) write(out_dir / (t.name() + ".csv"), t.to_csv());
    write(out_dir / "summary.json", result.summary().dump(2) + "\n");
    return written;
}

}  // namespace lerw
