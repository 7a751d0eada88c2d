#include "cdr/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <map>

namespace cdr {

std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

nlohmann::json to_json(const DevelopmentPattern& p) {
    nlohmann::json j;
    j["last_index"] = p.last_index;
    j["factors"] = p.factors;
    j["sigma2"] = p.sigma2;
    j["s_I"] = p.s_I;
    j["s_I1"] = p.s_I1;
    j["warnings"] = p.warnings;
    return j;
}

nlohmann::json to_json(const TailModel& t) {
    nlohmann::json j;
    j["a"] = t.a;
    j["b"] = t.b;
    j["last_index"] = t.last_index;
    j["i_ult"] = t.i_ult;
    j["f_ult"] = t.f_ult_hat;
    j["sigma2_ult"] = t.sigma2_ult;
    j["resid_var"] = t.resid_var;
    j["cov"] = {{t.cov[0][0], t.cov[0][1]}, {t.cov[1][0], t.cov[1][1]}};
    j["grad"] = {t.grad[0], t.grad[1]};
    j["dist"] = std::string(to_string(t.dist));
    j["used_points"] = t.used_points;
    return j;
}

namespace {

nlohmann::json row_json(const ErrorRow& r) {
    nlohmann::json j;
    j["estimation"] = r.estimation;
    j["process"] = r.process;
    j["prediction"] = r.prediction;
    if (r.msep_true) j["msep_true"] = *r.msep_true;
    return j;
}

}  // namespace

nlohmann::json to_json(const ClosedFormReport& rep) {
    nlohmann::json j;
    j["last_index"] = rep.last_index;
    j["tail_included"] = rep.tail_included;
    if (rep.tail_included) {
        j["i_ult"] = rep.i_ult;
        j["f_ult"] = rep.f_ult;
        j["sigma2_ult"] = rep.sigma2_ult;
    }
    auto rows = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        auto rj = row_json(r);
        rj["year"] = r.year;
        rows.push_back(std::move(rj));
    }
    j["years"] = std::move(rows);
    j["total"] = row_json(rep.total);
    return j;
}

nlohmann::json to_json(const RiskSummary& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["std_dev"] = s.std_dev;
    j["min"] = s.min;
    j["max"] = s.max;
    auto q = nlohmann::json::array();
    for (const auto& [p, v] : s.quantiles) q.push_back({{"p", p}, {"value", v}});
    j["quantiles"] = std::move(q);
    j["scr"] = s.scr;
    return j;
}

nlohmann::json to_json(const Comparison& cmp) {
    nlohmann::json j;
    j["tail_included"] = cmp.tail_included;
    j["analytical"] = nlohmann::json::object();
    j["simulated"] = nlohmann::json::object();
    j["relative_distance"] = nlohmann::json::object();
    auto per_year = nlohmann::json::array();
    for (const auto& r : cmp.rows) {
        const auto kind = to_string(r.kind);
        if (r.year) {
            per_year.push_back({{"year", *r.year},
                                {"kind", kind},
                                {"analytical", r.analytical},
                                {"simulated", r.simulated},
                                {"relative_distance", r.relative_distance}});
        } else {
            j["analytical"][kind] = r.analytical;
            j["simulated"][kind] = r.simulated;
            j["relative_distance"][kind] = r.relative_distance;
        }
    }
    if (!per_year.empty()) j["per_year"] = std::move(per_year);
    return j;
}

std::string to_csv(const ClosedFormReport& rep) {
    const bool with_msep = rep.total.msep_true.has_value();
    std::string out = with_msep ? "year,estimation,process,prediction,msep_true\n" : "year,estimation,process,prediction\n";
    auto line = [&](const std::string& label, const ErrorRow& r) {
        out += label + ',' + format_full(r.estimation) + ',' + format_full(r.process) + ',' +
               format_full(r.prediction);
        if (with_msep) out += ',' + format_full(r.msep_true.value_or(0.0));
        out += '\n';
    };
    for (const auto& r : rep.rows) line(std::to_string(r.year), r);
    line("total", rep.total);
    return out;
}

std::string to_csv(const Comparison& cmp) {
    // year label -> kind -> row; "total" sorts after the numeric labels by construction.
    std::map<std::size_t, std::map<ErrorKind, ComparisonRow>> by_year;
    constexpr std::size_t total_key = static_cast<std::size_t>(-1);
    for (const auto& r : cmp.rows) by_year[r.year.value_or(total_key)][r.kind] = r;

    const ErrorKind kinds[] = {ErrorKind::prediction, ErrorKind::estimation, ErrorKind::process};
    std::string out = "year";
    for (auto k : kinds) {
        const auto name = to_string(k);
        out += ',' + name + "_analytical," + name + "_simulated," + name + "_relative_distance";
    }
    out += '\n';
    for (const auto& [year, kinds_map] : by_year) {
        out += year == total_key ? std::string("total") : std::to_string(year);
        for (auto k : kinds) {
            const auto it = kinds_map.find(k);
            if (it == kinds_map.end()) {
                out += ",,,";
            } else {
                out += ',' + format_full(it->second.analytical) + ',' + format_full(it->second.simulated) + ',' +
                       format_full(it->second.relative_distance);
            }
        }
        out += '\n';
    }
    return out;
}

std::string samples_csv(const CdrDistribution& dist) {
    std::string out = "iteration,paid_next_year,be_next_year,cdr";
    if (dist.has_per_year()) {
        for (std::size_t i = 0; i < dist.years; ++i) out += ",cdr_year_" + std::to_string(i);
    }
    out += '\n';
    for (std::size_t b = 0; b < dist.samples.size(); ++b) {
        const auto& s = dist.samples[b];
        out += std::to_string(b) + ',' + format_full(s.paid_next_year) + ',' + format_full(s.be_next_year) + ',' +
               format_full(s.cdr);
        if (dist.has_per_year()) {
            for (std::size_t i = 0; i < dist.years; ++i) out += ',' + format_full(dist.year_cdr(b, i));
        }
        out += '\n';
    }
    return out;
}

std::string pattern_table(const DevelopmentPattern& p, const std::optional<TailModel>& tail) {
    char buf[128];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-6s %14s %14s\n", "j", "factor", "sigma2");
    out += buf;
    for (std::size_t j = 0; j < p.factors.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%-6zu %14s %14s\n", j, format_short(p.factors[j]).c_str(),
                      format_short(p.sigma2[j]).c_str());
        out += buf;
    }
    if (tail) {
        std::snprintf(buf, sizeof buf, "%-6s %14s %14s\n", "ult", format_short(tail->f_ult_hat).c_str(),
                      format_short(tail->sigma2_ult).c_str());
        out += buf;
    }
    return out;
}

std::string pattern_csv(const DevelopmentPattern& p, const std::optional<TailModel>& tail) {
    std::string out = "period,factor,sigma2\n";
    for (std::size_t j = 0; j < p.factors.size(); ++j) {
        out += std::to_string(j) + ',' + format_full(p.factors[j]) + ',' + format_full(p.sigma2[j]) + '\n';
    }
    if (tail) out += "ultimate," + format_full(tail->f_ult_hat) + ',' + format_full(tail->sigma2_ult) + '\n';
    return out;
}

std::string report_table(const ClosedFormReport& rep) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-6s %14s %14s %14s\n", "year", "prediction", "estimation", "process");
    out += buf;
    auto line = [&](const std::string& label, const ErrorRow& r) {
        std::snprintf(buf, sizeof buf, "%-6s %14s %14s %14s\n", label.c_str(), format_short(r.prediction).c_str(),
                      format_short(r.estimation).c_str(), format_short(r.process).c_str());
        out += buf;
    };
    for (const auto& r : rep.rows) line(std::to_string(r.year), r);
    line("total", rep.total);
    return out;
}

}  // namespace cdr
