#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "nbmeans/simulation.hpp"

namespace nbmeans {

/// Six-number summary in the style of R's summary(): type-7 quartiles.
struct FiveNumberSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

FiveNumberSummary summarize_values(std::vector<double> values);

struct LengthSummaryRow {
    std::string label;
    FiveNumberSummary summary;
};

/// Summary of per-experiment median interval lengths, one row per method
/// (Bernstein, Mixture, Normal when present) plus a "Bernstein - Normal" row
/// of per-experiment differences when both methods were simulated.
std::vector<LengthSummaryRow> summarize_lengths(const std::vector<ExperimentResult>& results);

void print_length_table(std::ostream& out, const std::vector<LengthSummaryRow>& rows);

/// Coverage surface of one method over the (n_x, n_y) plane for a fixed
/// population pair.
struct CoverageSurface {
    double mu_x;
    double mu_y;
    double theta_x;
    double theta_y;
    MethodKind method;
    struct Cell {
        std::size_t n_x;
        std::size_t n_y;
        double coverage;
    };
    std::vector<Cell> cells;

    /// Stable file stem, e.g. "coverage_normal_mux5_muy5_thetax0.025_thetay0.025".
    std::string file_stem() const;
};

/// Groups results by population pair and method, in first-seen order.
std::vector<CoverageSurface> coverage_surfaces(const std::vector<ExperimentResult>& results);

/// Tidy `n_x,n_y,coverage` table.
void write_surface_csv(std::ostream& out, const CoverageSurface& surface);

} // namespace nbmeans
