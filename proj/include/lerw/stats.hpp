#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lerw/bootstrap.hpp"
#include "lerw/estimators.hpp"

namespace lerw {

/// Sample moments of n d-vectors.
struct MomentReport {
    Index n_samples = 0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;          // unbiased
    Eigen::VectorXd component_kurtosis;  // m4 / m2^2 per axis, NaN where m2 == 0
    double radial_second_moment = 0.0;   // mean of |x|^2 (not centred)
    bool degenerate = false;             // some component has zero variance

    /// Off-diagonal correlations, NaN where a variance is zero.
    Eigen::MatrixXd correlation() const;
    /// Largest |correlation| over off-diagonal pairs (0 for d = 1).
    double max_abs_correlation() const;
};

MomentReport moment_report_rows(const Eigen::MatrixXd& samples);

/// One sample per row. Throws std::invalid_argument for fewer than 2 rows.
template <typename Derived>
MomentReport moment_report(const Eigen::MatrixBase<Derived>& samples) {
    return moment_report_rows(samples.template cast<double>().eval());
}

struct GaussianTolerances {
    double variance_relative = 0.10;  // |var - target| <= tol * target
    double kurtosis_absolute = 0.30;  // |kurtosis - 3| <= tol
    double correlation_absolute = 0.05;
};

struct DiagnosticCheck {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Deviations of a sample from the isotropic normal law with variance
/// `target_variance` per component. Every flag is recomputed from the stored
/// values by `evaluate`.
struct GaussianDiagnostics {
    MomentReport moments;
    double target_variance = 0.0;
    GaussianTolerances tolerances;
    std::vector<DiagnosticCheck> checks;

    bool all_pass() const noexcept;
};

GaussianDiagnostics gaussian_diagnostics(MomentReport moments, double target_variance,
                                         GaussianTolerances tolerances = {});

struct CltRow {
    std::uint64_t stream = 0;
    Index sigma = 0;
    Index F = 0;  // re-indexed time; for tau-clt equal to sigma
    LatticePoint endpoint;
    Eigen::VectorXd statistic;
};

struct CltResult {
    std::vector<CltRow> rows;  // uncensored replicas in stream order
    GaussianDiagnostics diagnostics;
    std::int64_t attempted = 0;
    std::int64_t censored = 0;
    double q = std::numeric_limits<double>::quiet_NaN();    // tau-clt only
    double tau = std::numeric_limits<double>::quiet_NaN();  // tau-clt only

    bool valid() const noexcept {
        return attempted > 0 && static_cast<double>(censored) <= 0.10 * static_cast<double>(attempted);
    }
};

/// S_{F_N} / sqrt(N) with F_N = floor(sigma(N) a_hat(sigma(N))), target
/// covariance I / dim. Replica k reuses the walk of stream R + k that
/// realized sigma.
CltResult clt_experiment(const ExperimentConfig& cfg, const SurvivalCurve& curve, const SigmaRealization& sigma,
                         GaussianTolerances tolerances = {});

/// tau_N = N^(-q / (1 - q)).
double tau_normalization(std::int64_t N, double q);
/// Variance per component of S_sigma sqrt(tau) / sqrt(N) when
/// a_n = amplitude n^(-q): (1 / dim) amplitude^(-1 / (1 - q)).
double tau_target_variance(int dim, const PowerLawFit& fit);

/// S_{sigma(N)} sqrt(tau_N) / sqrt(N) with q = fit.exponent. Throws
/// std::domain_error unless 0 < q < 1.
CltResult tau_clt_experiment(const ExperimentConfig& cfg, const PowerLawFit& fit, const SigmaRealization& sigma,
                             GaussianTolerances tolerances = {});

struct CompareRow {
    std::uint64_t stream = 0;
    Index path_points = 0;  // length of the shared path both erasures ran on
    Index sigma_windowed = 0;
    Index sigma_full = 0;
    bool mismatch = false;
    LatticePoint windowed_endpoint;
    LatticePoint full_endpoint;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    MomentReport windowed;
    MomentReport full;
    double c_N = 0.0;  // sqrt(E |windowed endpoint|^2)
    double d_N = 0.0;  // sqrt(E |full endpoint|^2)
    double ratio = 0.0;
    double mismatch_frequency = 0.0;
    std::int64_t mismatches = 0;
    std::int64_t attempted = 0;
    std::int64_t censored = 0;
};

/// Windowed against full loop erasure on common paths (streams 0..R-1).
/// Each walk grows until the windowed N-th jump time is exact and is then cut
/// right after that point's margin, so both erasures see the same finite
/// path; it grows further only if the full erasure has fewer than N + 1
/// points. A replica mismatches when erased points 0..N differ.
CompareReport compare_lew_experiment(const ExperimentConfig& cfg);

}  // namespace lerw
