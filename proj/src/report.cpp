#include "nbmeans/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>

#include "nbmeans/errors.hpp"
#include "nbmeans/results_csv.hpp"

namespace nbmeans {

namespace {

// Hyndman-Fan type 7, the R default.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<double> median_length(const ExperimentResult& r, MethodKind m) {
    for (const auto& rec : r.records)
        if (rec.method == m) return rec.median_length;
    return std::nullopt;
}

} // namespace

FiveNumberSummary summarize_values(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("cannot summarize an empty set of values");
    std::sort(values.begin(), values.end());
    FiveNumberSummary s;
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return s;
}

std::vector<LengthSummaryRow> summarize_lengths(const std::vector<ExperimentResult>& results) {
    if (results.empty()) throw InvalidArgument("no results to summarize");
    std::vector<LengthSummaryRow> rows;
    for (MethodKind m : {MethodKind::Bernstein, MethodKind::Mixture, MethodKind::Normal}) {
        std::vector<double> values;
        for (const auto& r : results)
            if (auto len = median_length(r, m)) values.push_back(*len);
        if (!values.empty())
            rows.push_back({std::string(1, static_cast<char>(std::toupper(to_string(m)[0]))) +
                                std::string(to_string(m).substr(1)),
                            summarize_values(std::move(values))});
    }
    std::vector<double> diffs;
    for (const auto& r : results) {
        const auto b = median_length(r, MethodKind::Bernstein);
        const auto n = median_length(r, MethodKind::Normal);
        if (b && n) diffs.push_back(*b - *n);
    }
    if (!diffs.empty()) rows.push_back({"Bernstein - Normal", summarize_values(std::move(diffs))});
    return rows;
}

void print_length_table(std::ostream& out, const std::vector<LengthSummaryRow>& rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-20s %10s %10s %10s %10s %10s %10s\n", "", "Min", "1st Qu.",
                  "Median", "Mean", "3rd Qu.", "Max");
    out << buf;
    for (const auto& row : rows) {
        const auto& s = row.summary;
        std::snprintf(buf, sizeof buf, "%-20s %10.2f %10.2f %10.2f %10.2f %10.2f %10.2f\n",
                      row.label.c_str(), s.min, s.q1, s.median, s.mean, s.q3, s.max);
        out << buf;
    }
}

std::string CoverageSurface::file_stem() const {
    return "coverage_" + std::string(to_string(method)) + "_mux" + format_double(mu_x) + "_muy" +
           format_double(mu_y) + "_thetax" + format_double(theta_x) + "_thetay" +
           format_double(theta_y);
}

std::vector<CoverageSurface> coverage_surfaces(const std::vector<ExperimentResult>& results) {
    std::vector<CoverageSurface> surfaces;
    for (const auto& r : results) {
        const ExperimentSpec& s = r.spec;
        for (const auto& rec : r.records) {
            auto it = std::find_if(surfaces.begin(), surfaces.end(), [&](const CoverageSurface& c) {
                return c.mu_x == s.mu_x && c.mu_y == s.mu_y && c.theta_x == s.theta_x &&
                       c.theta_y == s.theta_y && c.method == rec.method;
            });
            if (it == surfaces.end()) {
                surfaces.push_back({s.mu_x, s.mu_y, s.theta_x, s.theta_y, rec.method, {}});
                it = surfaces.end() - 1;
            }
            it->cells.push_back({s.n_x, s.n_y, rec.coverage});
        }
    }
    return surfaces;
}

void write_surface_csv(std::ostream& out, const CoverageSurface& surface) {
    out << "n_x,n_y,coverage\n";
    for (const auto& c : surface.cells)
        out << c.n_x << ',' << c.n_y << ',' << format_double(c.coverage) << '\n';
}

} // namespace nbmeans
