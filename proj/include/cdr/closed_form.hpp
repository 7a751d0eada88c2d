#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cdr/chain_ladder.hpp"
#include "cdr/tail.hpp"
#include "cdr/triangle.hpp"

namespace cdr {

/// Variances (not standard deviations) of a one-year CDR error component.
/// per_year is indexed by origin year 0..I; without a tail the year-0 entry
/// is 0 because that year is fully developed.
struct ErrorVariances {
    std::vector<double> per_year;
    double total = 0.0;
};

// Without tail ---------------------------------------------------------------

/// Per-year C_i^2 * Delta_i and the aggregated (u - bias)^2 including the
/// C_i C_k Lambda_k cross terms.
ErrorVariances estimation_error_no_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p);

/// Per-year Gamma_i and the aggregate with Upsilon_{i,k} covariances.
ErrorVariances process_error_no_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p);

/// Estimation + process, per year and in total.
ErrorVariances prediction_error_no_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p);

/// MSEP of the true CDR by the observable CDR: Phi_i + C_i^2 Delta_i per year,
/// plus 2 * sum_{i>k} (Psi_{i,k} + C_i C_k Lambda_k) in total.
ErrorVariances msep_true_by_observable(const CumulativeTriangle& tri, const DevelopmentPattern& p);

// With a stochastic tail factor ----------------------------------------------
// Only tail.f_ult_hat and tail.sigma2_ult enter these formulas.

ErrorVariances estimation_error_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                     const TailModel& tail);
ErrorVariances process_error_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                  const TailModel& tail);
ErrorVariances prediction_error_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                     const TailModel& tail);

// Report ---------------------------------------------------------------------

/// Errors in standard-deviation units (square roots of the variances above).
struct ErrorRow {
    std::size_t year = 0;  ///< ignored on the total row
    double estimation = 0.0;
    double process = 0.0;
    double prediction = 0.0;
    std::optional<double> msep_true;  ///< only in the no-tail regime
};

struct ClosedFormReport {
    std::size_t last_index = 0;
    bool tail_included = false;
    std::size_t i_ult = 0;
    double f_ult = 1.0;
    double sigma2_ult = 0.0;

    /// Years 1..I without tail, 0..I with tail.
    std::vector<ErrorRow> rows;
    ErrorRow total;
};

ClosedFormReport closed_form_report(const CumulativeTriangle& tri, const DevelopmentPattern& p);
ClosedFormReport closed_form_report(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                    const TailModel& tail);

}  // namespace cdr
