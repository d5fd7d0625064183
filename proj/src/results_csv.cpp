#include "nbmeans/results_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "nbmeans/errors.hpp"

namespace nbmeans {

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw InvalidArgument("unformattable double");
    return std::string(buf.data(), ptr);
}

void write_results_header(std::ostream& out) { out << kResultsHeader << '\n'; }

void write_result_rows(std::ostream& out, const ExperimentResult& result) {
    const ExperimentSpec& s = result.spec;
    std::string prefix = format_double(s.mu_x) + ',' + format_double(s.mu_y) + ',' +
                         format_double(s.theta_x) + ',' + format_double(s.theta_y) + ',' +
                         std::to_string(s.n_x) + ',' + std::to_string(s.n_y) + ',' +
                         std::to_string(s.trials) + ',' + format_double(s.alpha) + ',' +
                         std::to_string(s.seed) + ',';
    for (const MethodRecord& r : result.records) {
        out << prefix << to_string(r.method) << ',' << format_double(r.coverage) << ','
            << format_double(r.coverage_se) << ',' << format_double(r.mean_length) << ','
            << format_double(r.median_length) << ',' << r.degenerate_trials << '\n';
    }
}

namespace {

constexpr std::size_t kColumns = 15;

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return fields;
}

template <typename T>
T field(std::string_view text, std::size_t line_no, const char* column) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("results line " + std::to_string(line_no) + ": bad " + column + " '" +
                         std::string(text) + "'");
    return value;
}

} // namespace

std::vector<ExperimentResult> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("results table is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) throw ParseError("results header does not match the schema");

    std::vector<ExperimentResult> results;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != kColumns)
            throw ParseError("results line " + std::to_string(line_no) + ": expected " +
                             std::to_string(kColumns) + " fields");

        ExperimentSpec spec;
        spec.mu_x = field<double>(f[0], line_no, "mu_x");
        spec.mu_y = field<double>(f[1], line_no, "mu_y");
        spec.theta_x = field<double>(f[2], line_no, "theta_x");
        spec.theta_y = field<double>(f[3], line_no, "theta_y");
        spec.n_x = field<std::size_t>(f[4], line_no, "n_x");
        spec.n_y = field<std::size_t>(f[5], line_no, "n_y");
        spec.trials = field<std::size_t>(f[6], line_no, "trials");
        spec.alpha = field<double>(f[7], line_no, "alpha");
        spec.seed = field<std::uint64_t>(f[8], line_no, "seed");

        MethodRecord rec;
        try {
            rec.method = parse_method(f[9]);
        } catch (const ParseError& e) {
            throw ParseError("results line " + std::to_string(line_no) + ": " + e.what());
        }
        rec.coverage = field<double>(f[10], line_no, "coverage");
        rec.coverage_se = field<double>(f[11], line_no, "coverage_se");
        rec.mean_length = field<double>(f[12], line_no, "mean_length");
        rec.median_length = field<double>(f[13], line_no, "median_length");
        rec.degenerate_trials = field<std::size_t>(f[14], line_no, "degenerate_trials");
        if (!(rec.coverage >= 0.0 && rec.coverage <= 1.0))
            throw ParseError("results line " + std::to_string(line_no) + ": coverage out of [0, 1]");

        const bool same_experiment =
            !results.empty() && [&] {
                const ExperimentSpec& p = results.back().spec;
                return p.mu_x == spec.mu_x && p.mu_y == spec.mu_y && p.theta_x == spec.theta_x &&
                       p.theta_y == spec.theta_y && p.n_x == spec.n_x && p.n_y == spec.n_y &&
                       p.trials == spec.trials && p.alpha == spec.alpha && p.seed == spec.seed;
            }();
        if (!same_experiment) {
            spec.methods.clear();
            results.push_back({spec, {}});
        }
        results.back().spec.methods.push_back(rec.method);
        results.back().records.push_back(rec);
    }
    return results;
}

} // namespace nbmeans
