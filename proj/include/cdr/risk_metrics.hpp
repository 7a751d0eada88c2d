#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdr/bootstrap.hpp"
#include "cdr/closed_form.hpp"

namespace cdr {

inline constexpr double kScrLevel = 0.005;

std::vector<double> default_quantile_levels();

struct RiskSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;  ///< n-1 divisor
    double min = 0.0;
    double max = 0.0;
    std::vector<std::pair<double, double>> quantiles;  ///< (probability, value)
    double scr = 0.0;                                  ///< -quantile(0.5%)
};

/// Quantile of an ascending-sorted sample: rank h = (n-1) q, linear
/// interpolation between the neighbouring order statistics.
double quantile_sorted(std::span<const double> sorted, double q);

/// Throws std::invalid_argument for fewer than two values.
RiskSummary summarize(std::span<const double> sample, std::span<const double> levels);
RiskSummary summarize(const CdrDistribution& dist, std::span<const double> levels);

/// Sample standard deviation (n-1 divisor).
double sample_std_dev(std::span<const double> sample);

enum class ErrorKind { prediction, estimation, process };
std::string to_string(ErrorKind k);

/// The error component that a bootstrap mode replicates.
ErrorKind error_kind_for(BootstrapMode m);

struct ComparisonRow {
    ErrorKind kind = ErrorKind::prediction;
    std::optional<std::size_t> year;  ///< empty on the total row
    double analytical = 0.0;
    double simulated = 0.0;
    double relative_distance = 0.0;  ///< |simulated / analytical - 1|, 0 when both are 0
};

struct Comparison {
    bool tail_included = false;
    std::vector<ComparisonRow> rows;
};

double relative_distance(double simulated, double analytical);

/// Lines up closed-form errors with simulated standard deviations, one
/// distribution per mode. Per-year rows are emitted for distributions that
/// carry per-year records. Throws std::invalid_argument when a distribution's
/// tail setting disagrees with the report or a mode appears twice.
Comparison compare(const ClosedFormReport& report, std::span<const CdrDistribution> dists);

}  // namespace cdr
