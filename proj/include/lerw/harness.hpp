#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "lerw/config.hpp"

namespace lerw {

inline constexpr std::string_view kArtifactName = "lerw";
inline constexpr std::string_view kArtifactVersion = "1.0.0";
inline constexpr int kSummarySchemaVersion = 1;

/// Shortest decimal text that reads back to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string format_number(double v);

inline std::string csv_cell(double v) { return format_number(v); }
inline std::string csv_cell(std::string s) { return s; }
inline std::string csv_cell(const char* s) { return s; }
template <typename T>
    requires std::is_integral_v<T>
std::string csv_cell(T v) {
    return std::to_string(v);
}

/// One CSV file: header row first, then one row per sample or grid point.
/// Rows are kept as encoded text so large runs stay compact.
class Table {
public:
    Table(std::string name, std::vector<std::string> header);

    template <typename... Cells>
    void add(const Cells&... cells) {
        static_assert(sizeof...(Cells) > 0);
        std::size_t i = 0;
        ((body_ += (i++ ? "," : ""), body_ += csv_cell(cells)), ...);
        if (i != header_.size()) throw std::logic_error("table " + name_ + ": row width differs from header");
        body_ += '\n';
        ++rows_;
    }
    /// Appends one row given as a prepared list of cells.
    void add_cells(const std::vector<std::string>& cells);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_; }
    std::string to_csv() const;

private:
    std::string name_;
    std::vector<std::string> header_;
    std::string body_;
    std::size_t rows_ = 0;
};

/// One sampling stage and the replica streams it consumed.
struct StageRecord {
    std::string name;
    std::uint64_t first_stream = 0;
    std::uint64_t last_stream = 0;
    std::int64_t attempted = 0;
    std::int64_t censored = 0;
};

struct RunManifest {
    ExperimentConfig config;
    Index window = 1;
    Index margin_steps = 0;
    std::optional<double> zeta_hat;     // from the config or the zeta experiment itself
    std::optional<double> regime_bound;  // 1 / (1 + 2 zeta_hat)
    std::vector<StageRecord> stages;
    std::vector<std::string> warnings;
    double wall_time_seconds = 0.0;
};

struct RunResult {
    RunManifest manifest;
    std::vector<Table> tables;
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    bool valid = true;  // false when the censoring gate failed

    nlohmann::ordered_json summary() const;
};

/// Total walk points a run will generate, as planned before any sampling.
/// Adaptive stages are charged their initial length.
std::int64_t planned_points(const ExperimentConfig& cfg);

/// Throws ResourceError when a planned walk exceeds max_path_len or the
/// planned total exceeds max_points.
void check_resources(const ExperimentConfig& cfg);

/// Runs every stage the experiment needs. Data outputs depend only on the
/// config without `workers`.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Writes each table as <out_dir>/<name>.csv and the summary as
/// <out_dir>/summary.json. Returns the written paths. I/O failures throw
/// std::runtime_error naming the path.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& out_dir);

}  // namespace lerw
