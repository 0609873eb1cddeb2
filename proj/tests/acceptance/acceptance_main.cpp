// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "lerw/harness.hpp"
#include "lerw/stats.hpp"
#include "oracles.hpp"
#include "trace_checks.hpp"

using namespace lerw;
using nlohmann::ordered_json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

ExperimentConfig make(Experiment e, std::int64_t N, double alpha, std::int64_t R, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.N = N;
    cfg.alpha = alpha;
    cfg.replicas = R;
    cfg.master_seed = seed;
    return cfg;
}

ordered_json results_of(const ExperimentConfig& cfg) { return run_experiment(cfg).summary()["results"]; }

// Fuzz corpus shared by the first two criteria: path k has n uniform in
// [1, 2000] steps, dimension 1 + k % 3, and W uniform in [1, n].
struct CorpusCase {
    WalkPath path;
    Index W;
};

template <typename Fn>
void for_each_case(Fn&& fn) {
    constexpr int kCases = 10000;
    for (int k = 0; k < kCases; ++k) {
        auto rng = derive_stream(0xC0A9, static_cast<std::uint64_t>(k));
        const Index n = 1 + rng.below(2000);
        const Index W = 1 + rng.below(static_cast<std::uint32_t>(n));
        CorpusCase c{generate_walk(rng, n, 1 + k % 3), W};
        if (!fn(k, c)) return;
    }
}

Outcome oracle_equivalence() {
    Outcome o{true, ""};
    int cases = 0;
    for_each_case([&](int k, const CorpusCase& c) {
        ++cases;
        if (!(erase_windowed(c.path, c.W) == erase_windowed_naive(c.path, c.W))) {
            o = {false, "windowed != naive on case " + std::to_string(k)};
            return false;
        }
        const ErasureTrace full = erase_windowed(c.path, c.path.steps());
        if (full.sigma != oracle::forward_loop_erasure(c.path)) {
            o = {false, "full window != chronological erasure on case " + std::to_string(k)};
            return false;
        }
        if (!checks::is_self_avoiding(full.erased_path)) {
            o = {false, "full erasure not self-avoiding on case " + std::to_string(k)};
            return false;
        }
        return true;
    });
    if (o.pass) o.detail = std::to_string(cases) + " paths bitwise equal; full erasure matches chronological oracle";
    return o;
}

Outcome structural_invariants() {
    Outcome o{true, ""};
    int cases = 0;
    for_each_case([&](int k, const CorpusCase& c) {
        ++cases;
        const ErasureTrace t = erase_windowed(c.path, c.W);
        std::string why = checks::trace_violation(c.path, c.W, t);
        if (why.empty()) {
            const auto free = oracle::loop_free_by_revisits(c.path, c.W);
            for (std::size_t m = 0; m < free.size() && why.empty(); ++m)
                if (free[m] && !t.y_flags[m]) why = "independent loop-free index " + std::to_string(m) + " erased";
        }
        if (!why.empty()) {
            o = {false, "case " + std::to_string(k) + ": " + why};
            return false;
        }
        return true;
    });
    if (o.pass) o.detail = "all invariants hold on " + std::to_string(cases) + " traces";
    return o;
}

Outcome rho_ratio_scaling() {
    std::string detail;
    double previous_std = INFINITY;
    bool decreasing = true;
    double mean_top = NAN;
    for (int e : {10, 12, 14}) {
        const auto r = results_of(make(Experiment::rho_ratio, std::int64_t{1} << e, 0.4, 10000, 2024));
        const double mean = r["ratio"]["mean"];
        const double sd = r["ratio"]["std"];
        decreasing = decreasing && sd < previous_std;
        previous_std = sd;
        mean_top = mean;
        detail += "N=2^" + std::to_string(e) + " mean " + num(mean) + " std " + num(sd) + "; ";
    }
    const bool pass = mean_top >= 0.95 && mean_top <= 1.05 && decreasing;
    return {pass, detail + (decreasing ? "std decreasing" : "std NOT decreasing")};
}

Outcome clt_desk_scale() {
    const RunResult run = run_experiment(make(Experiment::clt, std::int64_t{1} << 14, 0.4, 10000, 2025));
    const auto& d = run.results["diagnostics"]["moments"];
    bool pass = run.valid;
    std::string detail = "var";
    for (int a = 0; a < 3; ++a) {
        const double v = d["covariance"][a][a];
        pass = pass && v >= 0.30 && v <= 0.37;
        detail += " " + num(v);
    }
    detail += ", kurtosis";
    for (int a = 0; a < 3; ++a) {
        const double k = d["component_kurtosis"][a].is_null() ? NAN : d["component_kurtosis"][a].get<double>();
        pass = pass && k >= 2.7 && k <= 3.3;
        detail += " " + num(k);
    }
    const double c = d["max_abs_correlation"].is_null() ? NAN : d["max_abs_correlation"].get<double>();
    pass = pass && c <= 0.05;
    return {pass, detail + ", max |corr| " + num(c) + ", censored " + run.results["censored"].dump()};
}

Outcome z_decay() {
    const auto r = results_of(make(Experiment::z_decay, 1024, 0.4, 10000, 2026));
    bool monotone = true;
    double prev_x = -INFINITY;
    double prev_log = INFINITY;
    int in_range = 0;
    for (const auto& p : r["points"]) {
        const double ph = p["p_hat"];
        if (ph < 1e-3 || ph > 0.5) continue;
        ++in_range;
        const double lp = std::log(ph);
        monotone = monotone && p["x"].get<double>() > prev_x && lp < prev_log;
        prev_x = p["x"];
        prev_log = lp;
    }
    monotone = monotone && r["monotone_non_increasing"].get<bool>();
    const double r2 = r.contains("fit") ? r["fit"]["r_squared"].get<double>() : NAN;
    return {monotone && r2 >= 0.9, std::to_string(in_range) + " grid points with p_hat in [1e-3, 0.5], monotone " +
                                       (monotone ? "yes" : "no") + ", r^2 " + num(r2)};
}

Outcome compare_lew() {
    const auto hi = results_of(make(Experiment::compare_lew, 32, 2.5, 10000, 2027));
    const auto lo = results_of(make(Experiment::compare_lew, 32, 0.4, 10000, 2028));
    const double mis = hi["mismatch_frequency"];
    const double ratio = hi["ratio"];
    const double control = lo["mismatch_frequency"];
    const bool pass = mis <= 0.01 && ratio >= 0.99 && ratio <= 1.01 && control >= 0.1;
    return {pass, "alpha=2.5 mismatch " + num(mis) + " c/d " + num(ratio, 6) + "; alpha=0.4 mismatch " + num(control)};
}

Outcome zeta_stability() {
    auto run = [](std::uint64_t seed) { return results_of(make(Experiment::zeta, 1, 0.4, 100000, seed)); };
    const auto a = run(2029);
    const auto b = run(2030);
    auto half = [](const ordered_json& r) { return 0.5 * (r["ci"][1].get<double>() - r["ci"][0].get<double>()); };
    const double za = a["zeta_hat"];
    const double zb = b["zeta_hat"];
    const double ha = half(a);
    const double hb = half(b);
    const bool in_range = za >= 0.2 && za <= 0.4 && zb >= 0.2 && zb <= 0.4;
    const bool narrow = 2 * ha <= 0.1 && 2 * hb <= 0.1;
    const bool agree = std::abs(za - zb) <= std::hypot(ha, hb);
    return {in_range && narrow && agree, "zeta " + num(za) + " (CI width " + num(2 * ha, 3) + ") and " + num(zb) +
                                             " (CI width " + num(2 * hb, 3) + "), |diff| " + num(std::abs(za - zb), 3) +
                                             " vs joint half-width " + num(std::hypot(ha, hb), 3)};
}

Outcome unit_window() {
    ExperimentConfig cfg = make(Experiment::survival, 500, 0.0, 300, 2031);
    const SurvivalCurve curve = estimate_survival(cfg, {0, 1, 10, 100, 500});
    for (const auto& e : curve.entries)
        if (e.a_hat != 1.0) return {false, "a_hat(" + std::to_string(e.n) + ") = " + num(e.a_hat)};

    const RatioSamples rho = rho_ratio_experiment(cfg, estimate_survival(cfg, {cfg.N}));
    for (double s : rho.samples)
        if (s != 501.0 / 500.0) return {false, "rho-ratio sample " + num(s, 17)};

    const SigmaRealization sigma = realize_sigma(cfg);
    const CltResult clt = clt_experiment(cfg, estimate_survival(cfg, {cfg.N}), sigma);
    for (std::size_t k = 0; k < clt.rows.size(); ++k) {
        auto rng = derive_stream(cfg.master_seed, experiment_stream(cfg.replicas, static_cast<std::int64_t>(k)));
        const Eigen::VectorXd plain = generate_walk(rng, cfg.N, cfg.dim).point(cfg.N).cast<double>() /
                                      std::sqrt(static_cast<double>(cfg.N));
        if (clt.rows[k].statistic != plain) return {false, "clt row " + std::to_string(k) + " differs from S_N/sqrt(N)"};
    }
    return {true, "survival = 1, rho samples = (N+1)/N, clt statistic = S_N/sqrt(N) on " +
                      std::to_string(clt.rows.size()) + " replicas"};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "lerw_acceptance_determinism";
    const std::vector<ExperimentConfig> cfgs{
        make(Experiment::survival, 256, 0.4, 200, 7),     make(Experiment::rho_ratio, 256, 0.4, 200, 7),
        make(Experiment::sigma_scaling, 256, 0.4, 200, 7), make(Experiment::clt, 256, 0.4, 200, 7),
        make(Experiment::tau_clt, 1024, 0.4, 200, 7),     make(Experiment::compare_lew, 32, 2.5, 200, 7),
        make(Experiment::zeta, 1, 0.4, 2000, 7),          make(Experiment::z_decay, 1024, 0.4, 200, 7),
        make(Experiment::walk, 100, 0.4, 20, 7),          make(Experiment::erase, 100, 0.4, 20, 7),
    };
    int files = 0;
    for (ExperimentConfig cfg : cfgs) {
        cfg.bootstrap_resamples = 200;
        std::map<std::string, std::string> reference;
        for (int workers : {1, 2, 8}) {
            cfg.workers = workers;
            const fs::path dir = root / (std::string(to_string(cfg.experiment)) + "_w" + std::to_string(workers));
            fs::remove_all(dir);
            for (const auto& path : write_outputs(run_experiment(cfg), dir)) {
                if (path.extension() != ".csv") continue;
                std::ifstream in(path, std::ios::binary);
                std::ostringstream bytes;
                bytes << in.rdbuf();
                const std::string name = path.filename().string();
                if (workers == 1) {
                    reference[name] = bytes.str();
                    ++files;
                } else if (reference[name] != bytes.str()) {
                    return {false, name + " differs between workers=1 and workers=" + std::to_string(workers)};
                }
            }
        }
    }
    fs::remove_all(root);
    return {true, std::to_string(files) + " CSV files byte-identical for workers 1, 2, 8 across all 10 experiments"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"structural invariants", structural_invariants},
        {"rho ratio at desk scale", rho_ratio_scaling},
        {"re-indexed CLT at desk scale", clt_desk_scale},
        {"loop-free gap decay", z_decay},
        {"windowed vs full erasure contrast", compare_lew},
        {"intersection exponent stability", zeta_stability},
        {"unit window fixed points", unit_window},
        {"determinism across workers", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed;
}
