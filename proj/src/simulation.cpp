#include "nbmeans/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "nbmeans/errors.hpp"
#include "nbmeans/random.hpp"

namespace nbmeans {

namespace {

bool is_simulated_method(MethodKind m) {
    return m == MethodKind::Normal || m == MethodKind::Bernstein || m == MethodKind::Mixture;
}

void check_population(double mu, double theta, const char* arm) {
    if (!(mu > 0.0) || !std::isfinite(mu) || !(theta > 0.0) || !std::isfinite(theta))
        throw InvalidArgument(std::string("population ") + arm +
                              " needs positive finite mu and theta");
}

void check_methods(const std::vector<MethodKind>& methods) {
    if (methods.empty()) throw InvalidArgument("at least one method must be simulated");
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (!is_simulated_method(methods[i]))
            throw InvalidArgument("cannot simulate method " + std::string(to_string(methods[i])));
        for (std::size_t j = 0; j < i; ++j)
            if (methods[j] == methods[i])
                throw InvalidArgument("duplicate method " + std::string(to_string(methods[i])));
    }
}

void check_shared(std::size_t trials, double alpha, double w, double c_a, double c_b) {
    if (trials == 0) throw InvalidArgument("trials must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mixture weight must lie in [0, 1]");
    if (!(c_a >= 1.0) || !(c_b >= 1.0)) throw InvalidArgument("c_a and c_b must be >= 1");
}

double median_in_place(std::vector<double>& values) {
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

struct Tally {
    MethodKind method;
    std::size_t covered = 0;
    std::size_t degenerate = 0;
    std::vector<double> lengths;
};

} // namespace

void ExperimentSpec::validate() const {
    check_population(mu_x, theta_x, "x");
    check_population(mu_y, theta_y, "y");
    if (n_x < 2 || n_y < 2) throw InvalidArgument("sample sizes must be >= 2");
    check_shared(trials, alpha, mixture_weight, c_a, c_b);
    check_methods(methods);
}

const MethodRecord& ExperimentResult::record(MethodKind method) const {
    for (const auto& r : records)
        if (r.method == method) return r;
    throw InvalidArgument("method " + std::string(to_string(method)) + " was not simulated");
}

CoverageMargin coverage_margin(double p, std::size_t trials) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("coverage must lie in [0, 1]");
    if (trials == 0) throw InvalidArgument("trials must be >= 1");
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return {se, 1.96 * se};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const NegBinParams px(spec.mu_x, spec.theta_x);
    const NegBinParams py(spec.mu_y, spec.theta_y);
    const double truth = spec.mu_x - spec.mu_y;
    const bool population = spec.variance_source == VarianceSource::Population;
    const double pop_var_x = nb_moments(px).variance;
    const double pop_var_y = nb_moments(py).variance;

    const auto wants = [&](MethodKind m) {
        return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
    };
    const bool need_mixture = wants(MethodKind::Mixture);
    const bool need_normal = need_mixture || wants(MethodKind::Normal);
    const bool need_bernstein = need_mixture || wants(MethodKind::Bernstein);

    std::vector<Tally> tallies;
    for (MethodKind m : spec.methods) {
        tallies.push_back({m, 0, 0, {}});
        tallies.back().lengths.reserve(spec.trials);
    }

    RandomStream rng(spec.seed);
    std::vector<std::int64_t> x(spec.n_x);
    std::vector<std::int64_t> y(spec.n_y);
    for (std::size_t trial = 0; trial < spec.trials; ++trial) {
        for (auto& v : x) v = nb_draw(rng, px);
        for (auto& v : y) v = nb_draw(rng, py);
        SampleStats sx = summarize(x);
        SampleStats sy = summarize(y);
        if (population) {
            sx.variance = pop_var_x;
            sy.variance = pop_var_y;
        }

        IntervalEstimate normal, bernstein, mixture;
        if (need_normal) normal = ci_normal_two_sample(sx, sy, spec.alpha);
        if (need_bernstein)
            bernstein = ci_bernstein_two_sample(sx, sy, spec.alpha, spec.c_a, spec.c_b);
        if (need_mixture) mixture = ci_mixture(normal, bernstein, spec.mixture_weight);

        for (auto& t : tallies) {
            const IntervalEstimate& ci = t.method == MethodKind::Normal      ? normal
                                         : t.method == MethodKind::Bernstein ? bernstein
                                                                             : mixture;
            t.lengths.push_back(ci.length());
            if (ci.degenerate)
                ++t.degenerate;
            else if (ci.contains(truth))
                ++t.covered;
        }
    }

    ExperimentResult result{spec, {}};
    const double trials = static_cast<double>(spec.trials);
    for (auto& t : tallies) {
        MethodRecord rec;
        rec.method = t.method;
        rec.coverage = static_cast<double>(t.covered) / trials;
        rec.coverage_se = coverage_margin(rec.coverage, spec.trials).se;
        double sum = 0.0;
        for (double len : t.lengths) sum += len;
        rec.mean_length = sum / trials;
        rec.median_length = median_in_place(t.lengths);
        rec.degenerate_trials = t.degenerate;
        result.records.push_back(rec);
    }
    return result;
}

std::size_t GridSpec::size() const noexcept {
    return mu_x.size() * mu_y.size() * theta_x.size() * theta_y.size() * n_x.size() * n_y.size();
}

std::uint64_t experiment_seed(std::uint64_t master_seed, double mu_x, double mu_y,
                              double theta_x, double theta_y, std::size_t n_x,
                              std::size_t n_y) noexcept {
    return derive_seed(master_seed,
                       {std::bit_cast<std::uint64_t>(mu_x), std::bit_cast<std::uint64_t>(mu_y),
                        std::bit_cast<std::uint64_t>(theta_x),
                        std::bit_cast<std::uint64_t>(theta_y), static_cast<std::uint64_t>(n_x),
                        static_cast<std::uint64_t>(n_y)});
}

std::vector<ExperimentSpec> expand_grid(const GridSpec& grid) {
    if (grid.size() == 0) throw InvalidArgument("grid has an empty axis");
    check_shared(grid.trials, grid.alpha, grid.mixture_weight, grid.c_a, grid.c_b);
    check_methods(grid.methods);

    std::vector<ExperimentSpec> specs;
    specs.reserve(grid.size());
    for (double mx : grid.mu_x)
        for (double my : grid.mu_y)
            for (double tx : grid.theta_x)
                for (double ty : grid.theta_y)
                    for (std::size_t nx : grid.n_x)
                        for (std::size_t ny : grid.n_y) {
                            ExperimentSpec s;
                            s.mu_x = mx;
                            s.mu_y = my;
                            s.theta_x = tx;
                            s.theta_y = ty;
                            s.n_x = nx;
                            s.n_y = ny;
                            s.trials = grid.trials;
                            s.alpha = grid.alpha;
                            s.seed = experiment_seed(grid.master_seed, mx, my, tx, ty, nx, ny);
                            s.methods = grid.methods;
                            s.mixture_weight = grid.mixture_weight;
                            s.c_a = grid.c_a;
                            s.c_b = grid.c_b;
                            s.variance_source = grid.variance_source;
                            s.validate();
                            specs.push_back(std::move(s));
                        }
    return specs;
}

GridSpec full_study_grid() {
    GridSpec grid;
    grid.mu_x = {5.0, 10.0};
    grid.mu_y = {5.0, 10.0};
    grid.theta_x = {0.01, 0.025, 0.05, 0.075, 0.1};
    grid.theta_y = grid.theta_x;
    std::vector<std::size_t> sizes;
    for (std::size_t n = 10; n <= 200; n += 10) sizes.push_back(n);
    sizes.insert(sizes.end(), {250, 500, 1000});
    grid.n_x = sizes;
    grid.n_y = sizes;
    grid.trials = 10000;
    return grid;
}

std::vector<GridSpec> desk_scale_grids() {
    GridSpec equal;
    equal.mu_x = {5.0};
    equal.mu_y = {5.0};
    equal.theta_x = {0.025};
    equal.theta_y = {0.025};
    equal.n_x = {10, 20, 50, 100, 200};
    equal.n_y = equal.n_x;
    equal.trials = 2000;

    GridSpec unequal = equal;
    unequal.mu_y = {10.0};
    unequal.theta_x = {0.05};
    return {equal, unequal};
}

std::vector<ExperimentResult> run_grid(const GridSpec& grid, std::size_t parallelism,
                                       const ResultSink& sink) {
    return run_grid(expand_grid(grid), parallelism, sink);
}

std::vector<ExperimentResult> run_grid(const std::vector<ExperimentSpec>& specs,
                                       std::size_t parallelism, const ResultSink& sink) {
    if (specs.empty()) throw InvalidArgument("grid is empty");
    if (parallelism == 0) throw InvalidArgument("parallelism must be >= 1");
    for (const auto& s : specs) s.validate();

    const std::size_t count = specs.size();
    std::vector<std::optional<ExperimentResult>> slots(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mutex;
    std::size_t emitted = 0;
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                ExperimentResult r = run_experiment(specs[i]);
                std::lock_guard lock(mutex);
                slots[i] = std::move(r);
                // Emit the finished prefix in grid order.
                while (emitted < count && slots[emitted]) {
                    if (sink) sink(*slots[emitted]);
                    ++emitted;
                }
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!error) error = std::current_exception();
                stop = true;
                return;
            }
        }
    };

    const std::size_t workers = std::min(parallelism, count);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    std::vector<ExperimentResult> results;
    results.reserve(count);
    for (auto& slot : slots) results.push_back(std::move(*slot));
    return results;
}

} // namespace nbmeans
