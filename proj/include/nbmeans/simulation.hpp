#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "nbmeans/inference.hpp"

namespace nbmeans {

/// Which variances feed the interval builders during a simulated trial.
enum class VarianceSource {
    Sample,     ///< s^2 of the simulated data (what an analyst would use)
    Population  ///< true mu + mu^2/theta; oracle runs only
};

/// One coverage experiment: a pair of NB populations, sample sizes, and the
/// interval methods to evaluate on `trials` simulated sample pairs.
struct ExperimentSpec {
    double mu_x = 5.0;
    double mu_y = 5.0;
    double theta_x = 0.025;
    double theta_y = 0.025;
    std::size_t n_x = 50;
    std::size_t n_y = 50;
    std::size_t trials = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::vector<MethodKind> methods{MethodKind::Normal, MethodKind::Bernstein,
                                    MethodKind::Mixture};
    double mixture_weight = 0.5;
    double c_a = 1.0;
    double c_b = 1.0;
    VarianceSource variance_source = VarianceSource::Sample;

    /// Throws InvalidArgument on any out-of-range field or on a method other
    /// than Normal, Bernstein, or Mixture.
    void validate() const;
};

struct MethodRecord {
    MethodKind method = MethodKind::Normal;
    /// Fraction of trials whose interval contains mu_x - mu_y.
    double coverage = 0.0;
    double coverage_se = 0.0;
    double mean_length = 0.0;
    double median_length = 0.0;
    /// Zero-width intervals from spread-free samples; counted as misses.
    std::size_t degenerate_trials = 0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<MethodRecord> records;

    /// Throws InvalidArgument if `method` was not simulated.
    const MethodRecord& record(MethodKind method) const;
};

/// Runs one experiment on a single random stream seeded by spec.seed.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct CoverageMargin {
    double se;
    double margin;
};

/// Binomial standard error sqrt(p (1 - p) / trials) and its 95% margin 1.96 se.
CoverageMargin coverage_margin(double p, std::size_t trials);

/// Cartesian product over the six population/sample-size axes. Every other
/// field is shared by all experiments.
struct GridSpec {
    std::vector<double> mu_x{5.0};
    std::vector<double> mu_y{5.0};
    std::vector<double> theta_x{0.025};
    std::vector<double> theta_y{0.025};
    std::vector<std::size_t> n_x{50};
    std::vector<std::size_t> n_y{50};
    std::size_t trials = 2000;
    double alpha = 0.05;
    std::uint64_t master_seed = 20100607;
    std::vector<MethodKind> methods{MethodKind::Normal, MethodKind::Bernstein,
                                    MethodKind::Mixture};
    double mixture_weight = 0.5;
    double c_a = 1.0;
    double c_b = 1.0;
    VarianceSource variance_source = VarianceSource::Sample;

    std::size_t size() const noexcept;
};

/// Per-experiment seed: a function of the master seed and the experiment's
/// population and sample-size coordinates only.
std::uint64_t experiment_seed(std::uint64_t master_seed, double mu_x, double mu_y,
                              double theta_x, double theta_y, std::size_t n_x,
                              std::size_t n_y) noexcept;

/// Expands the grid in row-major order (mu_x outermost, n_y innermost).
std::vector<ExperimentSpec> expand_grid(const GridSpec& grid);

/// The full study grid: 52,900 experiments at 10,000 trials each.
GridSpec full_study_grid();

/// The two coverage-surface slices at desk scale:
/// (mu 5/5, theta 0.025/0.025) and (mu 5/10, theta 0.05/0.025), each with
/// n in {10, 20, 50, 100, 200} per arm and 2,000 trials.
std::vector<GridSpec> desk_scale_grids();

using ResultSink = std::function<void(const ExperimentResult&)>;

/// Runs every experiment of `grid` on up to `parallelism` worker threads.
///
/// `sink`, when set, receives each result exactly once and in grid order as
/// soon as every earlier experiment has finished, so callers can stream
/// output that is identical at any parallelism. The first exception thrown by
/// a worker stops scheduling and is rethrown after in-flight work drains;
/// results already delivered to `sink` stay delivered.
std::vector<ExperimentResult> run_grid(const GridSpec& grid, std::size_t parallelism,
                                       const ResultSink& sink = {});
std::vector<ExperimentResult> run_grid(const std::vector<ExperimentSpec>& specs,
                                       std::size_t parallelism, const ResultSink& sink = {});

} // namespace nbmeans
