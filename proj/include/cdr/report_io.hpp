#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cdr/bootstrap.hpp"
#include "cdr/chain_ladder.hpp"
#include "cdr/closed_form.hpp"
#include "cdr/risk_metrics.hpp"
#include "cdr/tail.hpp"

namespace cdr {

/// Shortest decimal text that reads back to the same double.
std::string format_full(double v);
/// Six significant digits, for human-readable tables.
std::string format_short(double v);

nlohmann::json to_json(const DevelopmentPattern& pattern);
nlohmann::json to_json(const TailModel& tail);
nlohmann::json to_json(const ClosedFormReport& report);
nlohmann::json to_json(const RiskSummary& summary);
/// {"analytical": {...}, "simulated": {...}, "relative_distance": {...}} keyed
/// by error kind for the totals, plus a "per_year" list when available.
nlohmann::json to_json(const Comparison& cmp);

/// Columns: year,estimation,process,prediction[,msep_true]; last line is "total".
std::string to_csv(const ClosedFormReport& report);
/// Columns per error kind: analytical, simulated, relative distance; one line per year and "total".
std::string to_csv(const Comparison& cmp);
/// Columns: iteration,paid_next_year,be_next_year,cdr[,cdr_year_0..cdr_year_I].
std::string samples_csv(const CdrDistribution& dist);

/// Factors and variances laid out by development period, optional tail column.
std::string pattern_table(const DevelopmentPattern& pattern, const std::optional<TailModel>& tail);
std::string pattern_csv(const DevelopmentPattern& pattern, const std::optional<TailModel>& tail);
std::string report_table(const ClosedFormReport& report);

}  // namespace cdr
