#include "lerw/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lerw/erasure.hpp"

namespace lerw {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Experiment, std::string_view>, 10> kNames{{
    {Experiment::survival, "survival"},
    {Experiment::rho_ratio, "rho-ratio"},
    {Experiment::sigma_scaling, "sigma-scaling"},
    {Experiment::clt, "clt"},
    {Experiment::tau_clt, "tau-clt"},
    {Experiment::compare_lew, "compare-lew"},
    {Experiment::zeta, "zeta"},
    {Experiment::z_decay, "z-decay"},
    {Experiment::walk, "walk"},
    {Experiment::erase, "erase"},
}};

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

std::int64_t as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail(key, "expected an integer, got " + v.dump());
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
        fail(key, "value out of range");
    return v.get<std::int64_t>();
}

double as_real(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number, got " + v.dump());
    return v.get<double>();
}

std::uint64_t as_u64(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) fail(key, "must be non-negative");
    fail(key, "expected an unsigned integer, got " + v.dump());
}

double parse_alpha(std::string_view text, const std::string& key) {
    if (text == "inf" || text == "infinity") return kInfiniteAlpha;
    double value = 0.0;
    std::istringstream in{std::string(text)};
    if (!(in >> value) || !in.eof()) fail(key, "expected a real number or \"inf\", got \"" + std::string(text) + "\"");
    return value;
}

Experiment parse_experiment(std::string_view name, const std::string& key) {
    if (auto e = experiment_from_string(name)) return *e;
    std::string known;
    for (const auto& [e, n] : kNames) known += (known.empty() ? "" : ", ") + std::string(n);
    fail(key, "unknown experiment \"" + std::string(name) + "\" (expected one of " + known + ")");
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view text, const std::string& key, Parse&& parse) {
    std::vector<T> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        const std::string where = key + "[" + std::to_string(out.size()) + "]";
        std::istringstream in(item);
        T value{};
        if (!(in >> value) || !(in >> std::ws).eof()) fail(where, "cannot parse \"" + item + "\"");
        out.push_back(parse(value, where));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
    for (const auto& [k, name] : kNames)
        if (k == e) return name;
    return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view name) noexcept {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

Index ExperimentConfig::window() const { return window_length(N, alpha, max_path_len); }

Index ExperimentConfig::margin_steps() const {
    return static_cast<Index>(std::ceil(margin_factor * static_cast<double>(window())));
}

bool ExperimentConfig::infinite_alpha() const noexcept { return std::isinf(alpha) && alpha > 0; }

void ExperimentConfig::validate() const {
    if (N < 1) fail("N", "must be >= 1, got " + std::to_string(N));
    if (std::isnan(alpha) || alpha < 0.0) fail("alpha", "must be >= 0 or \"inf\"");
    if (infinite_alpha() && experiment != Experiment::walk && experiment != Experiment::erase &&
        experiment != Experiment::compare_lew)
        fail("alpha", "\"inf\" is only valid for walk, erase and compare-lew");
    if (dim < 1 || dim > 16) fail("dim", "must be in [1, 16], got " + std::to_string(dim));
    if (replicas < 1) fail("replicas", "must be >= 1, got " + std::to_string(replicas));
    if (workers < 1) fail("workers", "must be >= 1, got " + std::to_string(workers));
    if (!std::isfinite(margin_factor) || margin_factor < 0.0) fail("margin_factor", "must be a finite number >= 0");
    if (max_path_len < 2 || max_path_len > (std::int64_t{1} << 31))
        fail("max_path_len", "must be in [2, 2^31]");
    if (max_points < 1) fail("max_points", "must be >= 1");
    if (bootstrap_resamples < 100) fail("bootstrap_resamples", "must be >= 100");
    if (!(ci_level > 0.0 && ci_level < 1.0)) fail("ci_level", "must lie in (0, 1)");
    if (zeta_hat && !(*zeta_hat >= 0.0 && std::isfinite(*zeta_hat))) fail("zeta_hat", "must be finite and >= 0");
    for (std::size_t i = 0; i < n_grid.size(); ++i)
        if (n_grid[i] < 0) fail("n_grid[" + std::to_string(i) + "]", "must be >= 0");
    for (std::size_t i = 0; i < beta_grid.size(); ++i)
        if (!std::isfinite(beta_grid[i])) fail("beta_grid[" + std::to_string(i) + "]", "must be finite");
    if (out_dir.empty()) fail("out_dir", "must not be empty");
}

ExperimentConfig parse_config_json(std::string_view text, ExperimentConfig cfg) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "experiment") {
            if (!v.is_string()) fail(key, "expected a string");
            cfg.experiment = parse_experiment(v.get<std::string>(), key);
        } else if (key == "N") {
            cfg.N = as_int(v, key);
        } else if (key == "alpha") {
            cfg.alpha = v.is_string() ? parse_alpha(v.get<std::string>(), key) : as_real(v, key);
        } else if (key == "dim") {
            const std::int64_t d = as_int(v, key);
            if (d < 1 || d > 16) fail(key, "must be in [1, 16]");
            cfg.dim = static_cast<int>(d);
        } else if (key == "replicas") {
            cfg.replicas = as_int(v, key);
        } else if (key == "master_seed") {
            cfg.master_seed = as_u64(v, key);
        } else if (key == "n_grid" || key == "beta_grid") {
            if (!v.is_array()) fail(key, "expected an array");
            if (key == "n_grid") cfg.n_grid.clear(); else cfg.beta_grid.clear();
            for (std::size_t i = 0; i < v.size(); ++i) {
                const std::string where = key + "[" + std::to_string(i) + "]";
                if (key == "n_grid")
                    cfg.n_grid.push_back(as_int(v[i], where));
                else
                    cfg.beta_grid.push_back(as_real(v[i], where));
            }
        } else if (key == "margin_factor") {
            cfg.margin_factor = as_real(v, key);
        } else if (key == "workers") {
            const std::int64_t w = as_int(v, key);
            if (w < 1 || w > 4096) fail(key, "must be in [1, 4096]");
            cfg.workers = static_cast<int>(w);
        } else if (key == "out_dir") {
            if (!v.is_string()) fail(key, "expected a string");
            cfg.out_dir = v.get<std::string>();
        } else if (key == "max_path_len") {
            cfg.max_path_len = as_int(v, key);
        } else if (key == "max_points") {
            cfg.max_points = as_int(v, key);
        } else if (key == "zeta_hat") {
            if (v.is_null())
                cfg.zeta_hat.reset();
            else
                cfg.zeta_hat = as_real(v, key);
        } else if (key == "bootstrap_resamples") {
            cfg.bootstrap_resamples = as_int(v, key);
        } else if (key == "ci_level") {
            cfg.ci_level = as_real(v, key);
        } else {
            fail(key, "unknown key");
        }
    }
    return cfg;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"lerw"};
    std::string experiment;
    std::string config_path;
    std::optional<std::int64_t> N;
    std::string alpha;
    std::optional<std::int64_t> dim;
    std::optional<std::int64_t> replicas;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> workers;
    std::string out;
    std::string n_grid;
    std::string beta_grid;
    std::optional<double> margin;
    std::optional<double> zeta;
    std::optional<std::int64_t> max_path_len;
    std::optional<std::int64_t> max_points;
    std::optional<std::int64_t> bootstrap;
    std::optional<double> ci_level;

    app.add_option("experiment", experiment)->required();
    auto* config_opt = app.add_option("--config", config_path);
    app.add_option("--N", N);
    auto* alpha_opt = app.add_option("--alpha", alpha);
    app.add_option("--dim", dim);
    app.add_option("--replicas", replicas);
    app.add_option("--seed", seed);
    app.add_option("--workers", workers);
    auto* out_opt = app.add_option("--out", out);
    auto* n_grid_opt = app.add_option("--n-grid", n_grid);
    auto* beta_grid_opt = app.add_option("--beta-grid", beta_grid);
    app.add_option("--margin", margin);
    app.add_option("--zeta", zeta);
    app.add_option("--max-path-len", max_path_len);
    app.add_option("--max-points", max_points);
    app.add_option("--bootstrap", bootstrap);
    app.add_option("--ci-level", ci_level);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("arguments: ") + e.what());
    }

    ExperimentConfig cfg;
    if (config_opt->count() > 0) cfg = parse_config_json(read_file(config_path), cfg);
    cfg.experiment = parse_experiment(experiment, "experiment");
    if (N) cfg.N = *N;
    if (alpha_opt->count() > 0) cfg.alpha = parse_alpha(alpha, "alpha");
    if (dim) {
        if (*dim < 1 || *dim > 16) fail("dim", "must be in [1, 16]");
        cfg.dim = static_cast<int>(*dim);
    }
    if (replicas) cfg.replicas = *replicas;
    if (seed) cfg.master_seed = *seed;
    if (workers) {
        if (*workers < 1 || *workers > 4096) fail("workers", "must be in [1, 4096]");
        cfg.workers = static_cast<int>(*workers);
    }
    if (out_opt->count() > 0) cfg.out_dir = out;
    if (n_grid_opt->count() > 0)
        cfg.n_grid = parse_list<std::int64_t>(n_grid, "n_grid", [](std::int64_t v, const std::string&) { return v; });
    if (beta_grid_opt->count() > 0)
        cfg.beta_grid = parse_list<double>(beta_grid, "beta_grid", [](double v, const std::string&) { return v; });
    if (margin) cfg.margin_factor = *margin;
    if (zeta) cfg.zeta_hat = *zeta;
    if (max_path_len) cfg.max_path_len = *max_path_len;
    if (max_points) cfg.max_points = *max_points;
    if (bootstrap) cfg.bootstrap_resamples = *bootstrap;
    if (ci_level) cfg.ci_level = *ci_level;
    cfg.validate();
    return cfg;
}

}  // namespace lerw
