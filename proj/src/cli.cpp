#include "cdr/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cdr/chain_ladder.hpp"
#include "cdr/closed_form.hpp"
#include "cdr/report_io.hpp"
#include "cdr/risk_metrics.hpp"
#include "cdr/triangle.hpp"

namespace cdr::cli {

namespace {

struct Fitted {
    CumulativeTriangle tri;
    DevelopmentPattern pattern;
    std::optional<TailModel> tail;
};

Fitted load_and_fit(const RunConfig& cfg) {
    auto tri = read_triangle_file(cfg.input);
    auto pattern = fit_pattern(tri);
    std::optional<TailModel> tail;
    if (cfg.tail) {
        tail = fit_tail(pattern, cfg.i_ult, TailFitOptions{cfg.tail_dist, cfg.drop_last_column});
    }
    return {std::move(tri), std::move(pattern), std::move(tail)};
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << data;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + '\n'; }

}  // namespace

void RunConfig::validate() const {
    if (input.empty()) throw std::invalid_argument("--input is required");
    if (tail && i_ult == 0) throw std::invalid_argument("--i-ult is required with --tail");
    if (iterations < 1) throw std::invalid_argument("--iterations must be >= 1");
    if (workers < 1) throw std::invalid_argument("--workers must be >= 1");
    if (modes.empty()) throw std::invalid_argument("no bootstrap mode selected");
}

std::uint64_t seed_for(std::uint64_t seed, BootstrapMode mode) {
    switch (mode) {
        case BootstrapMode::full: return seed;
        case BootstrapMode::estimation_only: return seed + 1;
        case BootstrapMode::process_only: return seed + 2;
    }
    return seed;
}

std::string dump_path_for(const std::string& base, BootstrapMode mode, bool multiple_modes) {
    if (!multiple_modes) return base;
    std::filesystem::path p(base);
    const auto ext = p.extension().string();
    p.replace_extension();
    return p.string() + "." + std::string(to_string(mode)) + ext;
}

std::size_t default_workers() {
    if (const char* env = std::getenv("CDR_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

CommandOutput cmd_fit(const RunConfig& cfg) {
    const auto fit = load_and_fit(cfg);
    CommandOutput out{{}, fit.pattern.warnings};
    switch (cfg.format) {
        case OutputFormat::json: {
            nlohmann::json j;
            j["pattern"] = to_json(fit.pattern);
            if (fit.tail) j["tail"] = to_json(*fit.tail);
            out.data = dump(j);
            break;
        }
        case OutputFormat::csv: out.data = pattern_csv(fit.pattern, fit.tail); break;
        case OutputFormat::table: out.data = pattern_table(fit.pattern, fit.tail); break;
    }
    return out;
}

CommandOutput cmd_closed_form(const RunConfig& cfg) {
    const auto fit = load_and_fit(cfg);
    const auto report = fit.tail ? closed_form_report(fit.tri, fit.pattern, *fit.tail)
                                 : closed_form_report(fit.tri, fit.pattern);
    CommandOutput out{{}, fit.pattern.warnings};
    switch (cfg.format) {
        case OutputFormat::json: out.data = dump(to_json(report)); break;
        case OutputFormat::csv: out.data = to_csv(report); break;
        case OutputFormat::table: out.data = report_table(report); break;
    }
    return out;
}

CommandOutput cmd_bootstrap(const RunConfig& cfg) {
    const auto fit = load_and_fit(cfg);
    const auto report = fit.tail ? closed_form_report(fit.tri, fit.pattern, *fit.tail)
                                 : closed_form_report(fit.tri, fit.pattern);
    const auto pool = build_residual_pool(fit.tri, fit.pattern);
    const auto levels = default_quantile_levels();
    CommandOutput out{{}, fit.pattern.warnings};

    std::vector<CdrDistribution> dists;
    for (auto mode : cfg.modes) {
        BootstrapConfig bc;
        bc.iterations = cfg.iterations;
        bc.seed = seed_for(cfg.seed, mode);
        bc.mode = mode;
        bc.tail = !cfg.tail ? TailMode::none
                            : (cfg.tail_dist == TailDistribution::lognormal ? TailMode::lognormal : TailMode::normal);
        bc.i_ult = cfg.i_ult;
        bc.workers = cfg.workers;
        bc.per_year = cfg.per_year;
        dists.push_back(run_bootstrap(fit.tri, fit.pattern, pool, fit.tail, bc));
        const auto& d = dists.back();
        if (d.negative_cumulative_count > 0) {
            out.warnings.push_back(std::to_string(d.negative_cumulative_count) + " negative simulated cumulative amounts in mode '" +
                                   std::string(to_string(mode)) + "'");
        }
        if (cfg.dump_samples) {
            write_file(dump_path_for(*cfg.dump_samples, mode, cfg.modes.size() > 1), samples_csv(d));
        }
    }
    const auto cmp = compare(report, dists);

    switch (cfg.format) {
        case OutputFormat::json: {
            nlohmann::json j;
            j["config"] = {{"iterations", cfg.iterations},
                           {"seed", cfg.seed},
                           {"tail", cfg.tail},
                           {"tail_dist", std::string(to_string(cfg.tail_dist))}};
            if (cfg.tail) j["config"]["i_ult"] = cfg.i_ult;
            j["be_I"] = dists.front().be_I;
            j["closed_form"] = to_json(report);
            j["modes"] = nlohmann::json::object();
            for (const auto& d : dists) {
                auto m = nlohmann::json::object();
                m["seed"] = d.seed;
                m["summary"] = to_json(summarize(d, levels));
                m["negative_cumulative_count"] = d.negative_cumulative_count;
                j["modes"][std::string(to_string(d.mode))] = std::move(m);
            }
            j["comparison"] = to_json(cmp);
            out.data = dump(j);
            break;
        }
        case OutputFormat::csv: {
            out.data = to_csv(cmp);
            out.data += "\nmode,n,mean,std_dev,scr";
            for (double q : levels) out.data += ",q" + format_full(q);
            out.data += '\n';
            for (const auto& d : dists) {
                const auto s = summarize(d, levels);
                out.data += std::string(to_string(d.mode)) + ',' + std::to_string(s.n) + ',' + format_full(s.mean) +
                            ',' + format_full(s.std_dev) + ',' + format_full(s.scr);
                for (const auto& q : s.quantiles) out.data += ',' + format_full(q.second);
                out.data += '\n';
            }
            break;
        }
        case OutputFormat::table: {
            std::ostringstream os;
            os << "BE_I " << format_short(dists.front().be_I) << "\n\n";
            os << "mode          mean        std_dev     SCR\n";
            for (const auto& d : dists) {
                const auto s = summarize(d, levels);
                char buf[160];
                std::snprintf(buf, sizeof buf, "%-12s %-11s %-11s %-11s\n", std::string(to_string(d.mode)).c_str(),
                              format_short(s.mean).c_str(), format_short(s.std_dev).c_str(),
                              format_short(s.scr).c_str());
                os << buf;
            }
            os << "\nkind         year   analytical  simulated   distance\n";
            for (const auto& r : cmp.rows) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "%-12s %-6s %-11s %-11s %.3f%%\n", to_string(r.kind).c_str(),
                              r.year ? std::to_string(*r.year).c_str() : "total", format_short(r.analytical).c_str(),
                              format_short(r.simulated).c_str(), 100.0 * r.relative_distance);
                os << buf;
            }
            out.data = os.str();
            break;
        }
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"One-year claims development result: closed-form errors and recursive bootstrap"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = default_workers();
    std::string format = "json";
    std::string tail_dist = "normal";
    std::string mode = "all";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "Triangle CSV file")->required();
        sub->add_flag("--tail,!--no-tail", cfg.tail, "Extrapolate a stochastic tail factor");
        sub->add_option("--i-ult", cfg.i_ult, "Ultimate development horizon (> I) for the tail");
        sub->add_option("--tail-dist", tail_dist, "Tail factor distribution")
            ->check(CLI::IsMember({"normal", "lognormal"}));
        sub->add_flag("--drop-last-column", cfg.drop_last_column,
                      "Exclude the last development factor from the tail regression");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_option("--output", cfg.output, "Write data here instead of standard output");
    };

    auto* fit = app.add_subcommand("fit", "Chain-ladder factors, variances and tail");
    add_common(fit);
    auto* closed = app.add_subcommand("closed-form", "Analytical estimation/process/prediction errors");
    add_common(closed);
    auto* boot = app.add_subcommand("bootstrap", "One-year recursive bootstrap of the CDR");
    add_common(boot);
    boot->add_option("--iterations", cfg.iterations, "Bootstrap iterations per mode");
    boot->add_option("--seed", cfg.seed, "Base random seed");
    boot->add_option("--mode", mode, "Bootstrap mode")->check(CLI::IsMember({"full", "estimation", "process", "all"}));
    boot->add_option("--workers", cfg.workers, "Worker threads (default from CDR_WORKERS)");
    boot->add_option("--dump-samples", cfg.dump_samples, "Write per-iteration samples as CSV");
    boot->add_flag("--per-year", cfg.per_year, "Record and compare CDR by origin year");

    std::vector<const char*> argv{"cdr"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        cfg.tail_dist = parse_tail_distribution(tail_dist);
        cfg.format = format == "csv" ? OutputFormat::csv : format == "table" ? OutputFormat::table : OutputFormat::json;
        if (mode != "all") cfg.modes = {parse_bootstrap_mode(mode)};
        cfg.validate();

        CommandOutput result;
        if (fit->parsed()) {
            result = cmd_fit(cfg);
        } else if (closed->parsed()) {
            result = cmd_closed_form(cfg);
        } else {
            result = cmd_bootstrap(cfg);
        }
        for (const auto& w : result.warnings) err << "warning: " << w << '\n';
        if (cfg.output) {
            write_file(*cfg.output, result.data);
        } else {
            out << result.data;
        }
        return 0;
    } catch (const TriangleError& e) {
        err << "error: invalid triangle: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace cdr::cli
