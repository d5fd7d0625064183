#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nbmeans/simulation.hpp"

namespace nbmeans {

/// Fixed column order of the results table.
inline constexpr std::string_view kResultsHeader =
    "mu_x,mu_y,theta_x,theta_y,n_x,n_y,trials,alpha,seed,method,coverage,coverage_se,"
    "mean_length,median_length,degenerate_trials";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_results_header(std::ostream& out);
/// One row per method record, in the order the records were produced.
void write_result_rows(std::ostream& out, const ExperimentResult& result);

/// Reads a results table, regrouping consecutive rows that share the
/// experiment columns into one ExperimentResult. Throws ParseError on a
/// header or field mismatch.
std::vector<ExperimentResult> read_results_csv(std::istream& in);

} // namespace nbmeans
