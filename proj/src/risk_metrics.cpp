#include "cdr/risk_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdr {

std::vector<double> default_quantile_levels() { return {0.005, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.995}; }

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double sample_std_dev(std::span<const double> sample) {
    if (sample.size() < 2) throw std::invalid_argument("standard deviation needs at least two values");
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= static_cast<double>(sample.size());
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(sample.size() - 1));
}

RiskSummary summarize(std::span<const double> sample, std::span<const double> levels) {
    if (sample.size() < 2) throw std::invalid_argument("summary needs at least two samples");
    RiskSummary s;
    s.n = sample.size();
    double sum = 0.0;
    for (double x : sample) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : sample) ss += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    for (double q : levels) s.quantiles.emplace_back(q, quantile_sorted(sorted, q));
    s.scr = -quantile_sorted(sorted, kScrLevel);
    return s;
}

RiskSummary summarize(const CdrDistribution& dist, std::span<const double> levels) {
    const auto values = dist.cdr_values();
    return summarize(values, levels);
}

std::string to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::prediction: return "prediction";
        case ErrorKind::estimation: return "estimation";
        case ErrorKind::process: return "process";
    }
    return "prediction";
}

ErrorKind error_kind_for(BootstrapMode m) {
    switch (m) {
        case BootstrapMode::full: return ErrorKind::prediction;
        case BootstrapMode::estimation_only: return ErrorKind::estimation;
        case BootstrapMode::process_only: return ErrorKind::process;
    }
    return ErrorKind::prediction;
}

double relative_distance(double simulated, double analytical) {
    if (analytical == 0.0) return simulated == 0.0 ? 0.0 : std::abs(simulated);
    return std::abs(simulated / analytical - 1.0);
}

namespace {

double pick(const ErrorRow& row, ErrorKind k) {
    switch (k) {
        case ErrorKind::prediction: return row.prediction;
        case ErrorKind::estimation: return row.estimation;
        case ErrorKind::process: return row.process;
    }
    return row.prediction;
}

}  // namespace

Comparison compare(const ClosedFormReport& report, std::span<const CdrDistribution> dists) {
    Comparison out;
    out.tail_included = report.tail_included;
    std::vector<BootstrapMode> seen;
    for (const auto& d : dists) {
        if ((d.tail != TailMode::none) != report.tail_included) {
            throw std::invalid_argument("distribution for mode '" + std::string(to_string(d.mode)) +
                                        "' does not match the report's tail setting");
        }
        if (std::find(seen.begin(), seen.end(), d.mode) != seen.end()) {
            throw std::invalid_argument("mode '" + std::string(to_string(d.mode)) + "' supplied twice");
        }
        if (d.years != report.last_index + 1) {
            throw std::invalid_argument("distribution and report were computed on different triangles");
        }
        seen.push_back(d.mode);

        const ErrorKind kind = error_kind_for(d.mode);
        if (d.has_per_year()) {
            for (const auto& row : report.rows) {
                const auto v = d.year_values(row.year);
                ComparisonRow r{kind, row.year, pick(row, kind), sample_std_dev(v), 0.0};
                r.relative_distance = relative_distance(r.simulated, r.analytical);
                out.rows.push_back(r);
            }
        }
        const auto v = d.cdr_values();
        ComparisonRow r{kind, std::nullopt, pick(report.total, kind), sample_std_dev(v), 0.0};
        r.relative_distance = relative_distance(r.simulated, r.analytical);
        out.rows.push_back(r);
    }
    return out;
}

}  // namespace cdr
