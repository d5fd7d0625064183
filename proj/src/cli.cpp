#include "nbmeans/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nbmeans/errors.hpp"
#include "nbmeans/grid_config.hpp"
#include "nbmeans/inference.hpp"
#include "nbmeans/report.hpp"
#include "nbmeans/results_csv.hpp"
#include "nbmeans/simulation.hpp"

namespace nbmeans {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::int64_t parse_count(std::string_view text, const std::string& where) {
    text = trim(text);
    std::int64_t value = -1;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || value < 0)
        throw ParseError(where + ": '" + std::string(text) + "' is not a non-negative integer count");
    return value;
}

std::vector<std::int64_t> parse_inline(const std::string& text, const std::string& name) {
    std::vector<std::int64_t> out;
    std::string_view rest(text);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_count(rest.substr(0, comma), name));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

// One count per line; blank lines and '#' comments are skipped.
std::vector<std::int64_t> read_single_column(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::int64_t> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        out.push_back(parse_count(view, path.string() + ":" + std::to_string(line_no)));
    }
    return out;
}

// `group,count` rows with groups x and y; an optional header row is skipped.
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> read_grouped(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::int64_t> x, y;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto comma = view.find(',');
        if (comma == std::string_view::npos) throw ParseError(where + ": expected group,count");
        const auto group = trim(view.substr(0, comma));
        const auto count = view.substr(comma + 1);
        if (line_no == 1 && group == "group") continue;
        if (group == "x") x.push_back(parse_count(count, where));
        else if (group == "y") y.push_back(parse_count(count, where));
        else throw ParseError(where + ": group must be 'x' or 'y'");
    }
    return {std::move(x), std::move(y)};
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

json interval_json(const IntervalEstimate& ci) {
    return {{"method", to_string(ci.method)}, {"lower", ci.lower},   {"upper", ci.upper},
            {"level", ci.level},              {"length", ci.length()}, {"degenerate", ci.degenerate}};
}

std::size_t default_parallelism() {
    if (const char* env = std::getenv("NBMEANS_THREADS")) {
        std::size_t value = 0;
        const std::string_view text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct AnalyzeOptions {
    std::string x_path, y_path, input_path, x_data, y_data;
    double alpha = 0.05;
    std::vector<std::string> methods{"normal", "bernstein", "mixture"};
    std::string variance_mode = "direct";
    std::vector<std::string> grid_kinds;
    double c_a = 1.0;
    double c_b = 1.0;
    double weight = 0.5;
    std::optional<double> null_value;
    bool strict = false;
    SelectorThresholds thresholds;
};

json selector_json(const SampleStats& stats, const SelectorThresholds& thresholds,
                   std::string& text) {
    json j;
    try {
        const double theta = mom_dispersion(stats);
        j["theta_mom"] = theta;
        const MethodKind m = select_method(stats.n, stats.mean, theta, thresholds);
        j["recommended"] = to_string(m);
        text = std::string(to_string(m)) + " (method-of-moments theta = " + fmt(theta) + ")";
    } catch (const DispersionInestimable&) {
        j["theta_mom"] = nullptr;
        j["recommended"] = nullptr;
        text = "unavailable: sample variance does not exceed the sample mean";
    } catch (const InvalidArgument& e) {
        j["theta_mom"] = nullptr;
        j["recommended"] = nullptr;
        text = std::string("unavailable: ") + e.what();
    }
    return j;
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<std::int64_t> x, y;
    if (!opt.input_path.empty()) {
        std::tie(x, y) = read_grouped(opt.input_path);
    } else {
        x = !opt.x_path.empty() ? read_single_column(opt.x_path) : parse_inline(opt.x_data, "--x-data");
        y = !opt.y_path.empty() ? read_single_column(opt.y_path) : parse_inline(opt.y_data, "--y-data");
    }
    if (x.empty() || y.empty()) throw ParseError("both samples must contain at least one count");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw InvalidArgument("--alpha must lie in (0, 1)");

    std::vector<MethodKind> methods;
    for (const auto& name : opt.methods) {
        const MethodKind m = parse_method(name);
        if (m != MethodKind::Normal && m != MethodKind::Bernstein && m != MethodKind::Mixture)
            throw InvalidArgument("analyze supports normal, bernstein and mixture intervals");
        methods.push_back(m);
    }
    if (methods.empty()) throw InvalidArgument("at least one --method is required");

    const SampleStats sx = summarize(x);
    const SampleStats sy = summarize(y);
    const double diff = sx.mean - sy.mean;
    bool degenerate = false;

    json record;
    record["x"] = {{"n", sx.n}, {"mean", sx.mean}, {"variance", sx.variance}, {"max", sx.max}};
    record["y"] = {{"n", sy.n}, {"mean", sy.mean}, {"variance", sy.variance}, {"max", sy.max}};
    record["difference"] = diff;
    record["alpha"] = opt.alpha;

    out << "x: n=" << sx.n << " mean=" << fmt(sx.mean) << " variance=" << fmt(sx.variance)
        << " max=" << sx.max << '\n';
    out << "y: n=" << sy.n << " mean=" << fmt(sy.mean) << " variance=" << fmt(sy.variance)
        << " max=" << sy.max << '\n';
    out << "mean(x) - mean(y) = " << fmt(diff) << '\n';

    std::optional<GridCell> cell;
    VarianceMode mode = VarianceMode::Direct;
    if (opt.variance_mode == "grid") {
        mode = VarianceMode::Grid;
        if (opt.grid_kinds.size() != 2)
            throw InvalidArgument("--variance-mode grid needs --grid-kinds KIND_X,KIND_Y");
        // Plug-in populations: sample means and method-of-moments dispersions.
        cell = GridCell{{parse_method(opt.grid_kinds[0]), NegBinParams(sx.mean, mom_dispersion(sx)), sx.n, std::nullopt},
                        {parse_method(opt.grid_kinds[1]), NegBinParams(sy.mean, mom_dispersion(sy)), sy.n, std::nullopt}};
    } else if (opt.variance_mode != "direct") {
        throw InvalidArgument("--variance-mode must be direct or grid");
    }

    const bool need_mix = std::find(methods.begin(), methods.end(), MethodKind::Mixture) != methods.end();
    std::optional<IntervalEstimate> normal, bernstein;
    const auto get_normal = [&] {
        if (!normal) normal = ci_normal_two_sample(sx, sy, opt.alpha, mode, cell);
        return *normal;
    };
    const auto get_bernstein = [&] {
        if (!bernstein) bernstein = ci_bernstein_two_sample(sx, sy, opt.alpha, opt.c_a, opt.c_b);
        return *bernstein;
    };

    json intervals = json::array();
    for (MethodKind m : methods) {
        IntervalEstimate ci = m == MethodKind::Normal      ? get_normal()
                              : m == MethodKind::Bernstein ? get_bernstein()
                                                           : ci_mixture(get_normal(), get_bernstein(), opt.weight);
        degenerate |= ci.degenerate;
        char line[200];
        std::snprintf(line, sizeof line, "%-10s %g%% CI [%.6g, %.6g]  length %.6g%s\n",
                      std::string(to_string(m)).c_str(), 100.0 * ci.level, ci.lower, ci.upper,
                      ci.length(), ci.degenerate ? "  (degenerate: zero-width)" : "");
        out << line;
        intervals.push_back(interval_json(ci));
    }
    record["intervals"] = intervals;
    if (need_mix) record["mixture_weight"] = opt.weight;

    std::string rec_x, rec_y;
    record["selector"] = {{"x", selector_json(sx, opt.thresholds, rec_x)},
                          {"y", selector_json(sy, opt.thresholds, rec_y)}};
    out << "one-sample recommendation x: " << rec_x << '\n';
    out << "one-sample recommendation y: " << rec_y << '\n';

    if (opt.null_value) {
        json tests = json::array();
        for (MethodKind m : {MethodKind::Normal, MethodKind::Bernstein}) {
            if (std::find(methods.begin(), methods.end(), m) == methods.end() && !need_mix) continue;
            if (m == MethodKind::Normal && (sx.n < 2 || sy.n < 2)) continue;
            const TestResult t = test_mean_difference(sx, sy, *opt.null_value, m, opt.c_a, opt.c_b);
            degenerate |= t.degenerate;
            out << "test H0: mu_x - mu_y = " << fmt(*opt.null_value) << "  " << to_string(m)
                << " p-value " << fmt(t.p_value) << '\n';
            tests.push_back({{"method", to_string(m)}, {"null_value", t.null_value},
                             {"statistic", t.statistic}, {"p_value", t.p_value},
                             {"degenerate", t.degenerate}});
        }
        record["tests"] = tests;
    }
    record["degenerate"] = degenerate;
    out << record.dump() << '\n';

    if (degenerate) {
        err << "warning: degenerate statistics (samples without spread)\n";
        if (opt.strict) return kExitDegenerate;
    }
    return kExitOk;
}

struct SimulateOptions {
    std::string config;
    std::string output = "-";
    std::size_t parallelism = 0;
    std::optional<std::uint64_t> seed;
    bool full_grid = false;
    bool quiet = false;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<GridSpec> grids;
    if (opt.full_grid) {
        if (!opt.config.empty()) throw InvalidArgument("--full-grid and --config are exclusive");
        grids.push_back(full_study_grid());
        err << "warning: the full grid is 52,900 experiments at 10,000 trials each; expect "
               "days of computation\n";
    } else if (!opt.config.empty()) {
        grids.push_back(load_grid_config(opt.config));
    } else {
        grids = desk_scale_grids();
    }
    std::vector<ExperimentSpec> specs;
    for (auto& g : grids) {
        if (opt.seed) g.master_seed = *opt.seed;
        auto part = expand_grid(g);
        specs.insert(specs.end(), part.begin(), part.end());
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (opt.output != "-") {
        file.open(opt.output, std::ios::out | std::ios::trunc);
        if (!file) throw ParseError("cannot write " + opt.output);
        sink = &file;
    }
    const std::size_t threads = opt.parallelism ? opt.parallelism : default_parallelism();
    write_results_header(*sink);
    std::size_t done = 0;
    run_grid(specs, threads, [&](const ExperimentResult& r) {
        write_result_rows(*sink, r);
        sink->flush();
        if (!*sink) throw std::runtime_error("write to results output failed");
        ++done;
        if (!opt.quiet && opt.output != "-")
            err << "\r" << done << "/" << specs.size() << " experiments" << std::flush;
    });
    if (!opt.quiet && opt.output != "-") err << '\n';
    return kExitOk;
}

struct ReportOptions {
    std::string results;
    std::string plot_dir;
};

int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream&) {
    std::ifstream in(opt.results);
    if (!in) throw ParseError("cannot open " + opt.results);
    const auto results = read_results_csv(in);
    if (results.empty()) throw ParseError("results table has no rows");

    out << "Median interval length across " << results.size() << " experiments\n";
    print_length_table(out, summarize_lengths(results));

    fs::path dir = opt.plot_dir;
    if (dir.empty()) {
        fs::path p(opt.results);
        dir = p.parent_path() / (p.stem().string() + "_plots");
    }
    fs::create_directories(dir);
    out << "coverage surfaces written to " << dir.string() << ":\n";
    for (const auto& surface : coverage_surfaces(results)) {
        const fs::path file = dir / (surface.file_stem() + ".csv");
        std::ofstream f(file);
        if (!f) throw ParseError("cannot write " + file.string());
        write_surface_csv(f, surface);
        out << "  " << file.filename().string() << " (" << surface.cells.size() << " cells)\n";
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-sample inference for highly dispersed Negative Binomial counts", "nbmeans"};
    app.require_subcommand(1);

    AnalyzeOptions a;
    auto* analyze = app.add_subcommand("analyze", "Confidence intervals and tests for mu_x - mu_y");
    auto* x_file = analyze->add_option("--x", a.x_path, "File with one x count per line");
    auto* y_file = analyze->add_option("--y", a.y_path, "File with one y count per line");
    auto* x_inline = analyze->add_option("--x-data", a.x_data, "Inline comma-separated x counts");
    auto* y_inline = analyze->add_option("--y-data", a.y_data, "Inline comma-separated y counts");
    auto* grouped = analyze->add_option("--input", a.input_path, "CSV of group,count rows (groups x, y)");
    x_file->excludes(x_inline);
    y_file->excludes(y_inline);
    grouped->excludes(x_file)->excludes(y_file)->excludes(x_inline)->excludes(y_inline);
    analyze->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
    analyze->add_option("--method", a.methods, "normal, bernstein, mixture")->delimiter(',')->capture_default_str();
    analyze->add_option("--variance-mode", a.variance_mode, "direct or grid")->capture_default_str();
    analyze->add_option("--grid-kinds", a.grid_kinds, "Arm kinds for grid mode, e.g. gamma,normal")->delimiter(',');
    analyze->add_option("--c-a", a.c_a, "Lower support inflation (>= 1)")->capture_default_str();
    analyze->add_option("--c-b", a.c_b, "Upper support inflation (>= 1)")->capture_default_str();
    analyze->add_option("--weight", a.weight, "Mixture weight on the Normal interval")->capture_default_str();
    analyze->add_option("--null", a.null_value, "Null value w of H0: mu_x - mu_y = w");
    analyze->add_flag("--strict", a.strict, "Exit nonzero on degenerate statistics");
    analyze->add_option("--selector-n-large", a.thresholds.n_large)->capture_default_str();
    analyze->add_option("--selector-theta-large", a.thresholds.theta_large)->capture_default_str();
    analyze->add_option("--selector-chi-tolerance", a.thresholds.chi_square_tolerance)->capture_default_str();

    SimulateOptions s;
    auto* simulate = app.add_subcommand("simulate", "Run coverage experiments and write a results CSV");
    simulate->add_option("--config", s.config, "Grid config file (default: the two desk-scale slices)");
    simulate->add_option("--output,-o", s.output, "Results CSV path, '-' for stdout")->capture_default_str();
    simulate->add_option("--parallelism,-j", s.parallelism, "Worker threads (default NBMEANS_THREADS or all cores)");
    simulate->add_option("--seed", s.seed, "Master seed override");
    simulate->add_flag("--full-grid", s.full_grid, "Run the complete 52,900-experiment grid");
    simulate->add_flag("--quiet,-q", s.quiet, "No progress output");

    ReportOptions r;
    auto* report = app.add_subcommand("report", "Summarize a results CSV and emit coverage surfaces");
    report->add_option("--results", r.results, "Results CSV from simulate")->required();
    report->add_option("--plot-dir", r.plot_dir, "Directory for per-slice coverage tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze) {
            if (a.input_path.empty() && ((a.x_path.empty() && a.x_data.empty()) ||
                                         (a.y_path.empty() && a.y_data.empty())))
                throw InvalidArgument("analyze needs --input, or --x/--x-data and --y/--y-data");
            return cmd_analyze(a, out, err);
        }
        if (*simulate) return cmd_simulate(s, out, err);
        return cmd_report(r, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const DegenerateContext& e) {
        err << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
}

} // namespace nbmeans
