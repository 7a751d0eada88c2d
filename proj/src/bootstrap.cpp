#include "cdr/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "cdr/random.hpp"

namespace cdr {

std::string_view to_string(BootstrapMode m) {
    switch (m) {
        case BootstrapMode::full: return "full";
        case BootstrapMode::estimation_only: return "estimation";
        case BootstrapMode::process_only: return "process";
    }
    return "full";
}

std::string_view to_string(TailMode t) {
    switch (t) {
        case TailMode::none: return "none";
        case TailMode::normal: return "normal";
        case TailMode::lognormal: return "lognormal";
    }
    return "none";
}

BootstrapMode parse_bootstrap_mode(std::string_view s) {
    if (s == "full") return BootstrapMode::full;
    if (s == "estimation" || s == "estimation_only") return BootstrapMode::estimation_only;
    if (s == "process" || s == "process_only") return BootstrapMode::process_only;
    throw std::invalid_argument("unknown bootstrap mode '" + std::string(s) + "'");
}

TailMode parse_tail_mode(std::string_view s) {
    if (s == "none") return TailMode::none;
    if (s == "normal") return TailMode::normal;
    if (s == "lognormal") return TailMode::lognormal;
    throw std::invalid_argument("unknown tail mode '" + std::string(s) + "'");
}

void BootstrapConfig::validate(std::size_t last_index) const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (tail != TailMode::none && i_ult <= last_index) {
        throw std::invalid_argument("tail horizon i_ult = " + std::to_string(i_ult) + " must exceed I = " +
                                    std::to_string(last_index));
    }
}

std::vector<double> CdrDistribution::cdr_values() const {
    std::vector<double> v(samples.size());
    std::transform(samples.begin(), samples.end(), v.begin(), [](const CdrSample& s) { return s.cdr; });
    return v;
}

std::vector<double> CdrDistribution::year_values(std::size_t i) const {
    if (!has_per_year()) throw std::logic_error("distribution was run without per-year recording");
    std::vector<double> v(samples.size());
    for (std::size_t b = 0; b < samples.size(); ++b) v[b] = year_cdr(b, i);
    return v;
}

ResidualPool build_residual_pool(const CumulativeTriangle& tri, const DevelopmentPattern& p) {
    const std::size_t I = tri.last_index();
    ResidualPool pool;
    for (std::size_t i = 0; i < I; ++i) {
        for (std::size_t j = 0; i + j < I; ++j) {
            if (j + 1 == I) {
                pool.excluded.push_back({i, j});
                continue;
            }
            double r = 0.0;
            if (p.sigma2[j] > 0.0) {
                const double adj = std::sqrt(static_cast<double>(I - j) / static_cast<double>(I - j - 1));
                r = adj * std::sqrt(tri(i, j)) * (p.individual_factor(i, j) - p.factors[j]) / std::sqrt(p.sigma2[j]);
            }
            pool.residuals.push_back(r);
            pool.cells.push_back({i, j});
        }
    }
    double sum = 0.0;
    for (double r : pool.residuals) sum += r;
    pool.raw_mean = pool.residuals.empty() ? 0.0 : sum / static_cast<double>(pool.residuals.size());
    for (double& r : pool.residuals) r -= pool.raw_mean;
    return pool;
}

namespace {

// Read-only data shared by all iterations.
struct Plan {
    std::size_t I = 0;
    std::vector<Cell> cells;            // targets of the resampling, row-major
    std::vector<double> draw_coef;      // C_ij sqrt(sigma_j^2 / C_ij) / S^I_j
    std::vector<double> numer_I;        // f_j S^I_j: original numerator of the time-I factor
    std::vector<double> latest;         // C(i, I-i)
    std::vector<double> ult_I;          // time-I ultimates including the tail
    double be_I = 0.0;
    double tail_hat = 1.0;
};

Plan make_plan(const CumulativeTriangle& tri, const DevelopmentPattern& p, double tail_hat) {
    Plan plan;
    const std::size_t I = tri.last_index();
    plan.I = I;
    for (std::size_t i = 0; i < I; ++i) {
        for (std::size_t j = 0; i + j < I; ++j) {
            plan.cells.push_back({i, j});
            plan.draw_coef.push_back(std::sqrt(tri(i, j) * p.sigma2[j]) / p.s_I[j]);
        }
    }
    plan.numer_I.resize(I);
    for (std::size_t j = 0; j < I; ++j) plan.numer_I[j] = p.factors[j] * p.s_I[j];
    plan.latest.resize(I + 1);
    for (std::size_t i = 0; i <= I; ++i) plan.latest[i] = tri.latest(i);
    plan.ult_I = project_ultimates(tri, p, tail_hat);
    plan.be_I = best_estimate_I(tri, p, tail_hat);
    plan.tail_hat = tail_hat;
    return plan;
}

struct Worker {
    const CumulativeTriangle& tri;
    const DevelopmentPattern& p;
    const ResidualPool& pool;
    const std::optional<TailModel>& tail;
    const BootstrapConfig& cfg;
    const Plan& plan;
    CdrDistribution& out;

    std::size_t run_range(std::size_t begin, std::size_t end) const {
        const std::size_t I = plan.I;
        const bool resample = cfg.mode != BootstrapMode::process_only;
        const bool simulate_process = cfg.mode != BootstrapMode::estimation_only;
        const bool simulate_tail = resample && tail.has_value();

        std::vector<double> f_I(I), f_I1(I), c_next(I + 1), ult_next(I + 1);
        std::uniform_int_distribution<std::size_t> pick(0, pool.residuals.size() - 1);
        std::size_t negatives = 0;

        for (std::size_t b = begin; b < end; ++b) {
            Rng rng = substream(cfg.seed, b);
            std::normal_distribution<double> std_normal(0.0, 1.0);

            // Steps 2-3: resampled pseudo-factors, re-weighted with the original C_ij.
            f_I = p.factors;
            if (resample) {
                for (std::size_t c = 0; c < plan.cells.size(); ++c) {
                    const double r = pool.residuals[pick(rng)];
                    f_I[plan.cells[c].j] += plan.draw_coef[c] * r;
                }
            }

            // Step 4: next diagonal.
            double paid = 0.0;
            c_next[0] = plan.latest[0];
            for (std::size_t i = 1; i <= I; ++i) {
                const std::size_t j = I - i;
                const double mean = plan.latest[i] * f_I[j];
                double c = mean;
                if (simulate_process) c += std::sqrt(plan.latest[i] * p.sigma2[j]) * std_normal(rng);
                if (c < 0.0) ++negatives;
                c_next[i] = c;
                paid += c - plan.latest[i];
            }

            // Step 5a: factors at I+1 keep the original triangle and add the new link ratio.
            for (std::size_t j = 0; j < I; ++j) f_I1[j] = (plan.numer_I[j] + c_next[I - j]) / p.s_I1[j];

            // Step 5b.
            const double tail_b = simulate_tail ? sample_tail(*tail, rng) : plan.tail_hat;

            // Step 6.
            double be_next = 0.0;
            for (std::size_t i = 0; i <= I; ++i) {
                double u = c_next[i];
                for (std::size_t j = I - i + 1; j < I; ++j) u *= f_I1[j];
                ult_next[i] = u * tail_b;
                be_next += ult_next[i] - c_next[i];
            }

            // Step 7.
            auto& s = out.samples[b];
            s.paid_next_year = paid;
            s.be_next_year = be_next;
            s.cdr = plan.be_I - paid - be_next;

            if (cfg.per_year) {
                double* row = out.per_year_cdr.data() + b * (I + 1);
                for (std::size_t i = 0; i <= I; ++i) {
                    const double be_i = plan.ult_I[i] - plan.latest[i];
                    const double paid_i = c_next[i] - plan.latest[i];
                    row[i] = be_i - paid_i - (ult_next[i] - c_next[i]);
                }
            }
        }
        return negatives;
    }
};

}  // namespace

std::vector<double> pseudo_factors(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                   std::span<const double> residual_draws) {
    const Plan plan = make_plan(tri, p, 1.0);
    if (residual_draws.size() != plan.cells.size()) {
        throw std::invalid_argument("expected " + std::to_string(plan.cells.size()) + " residual draws");
    }
    auto f = p.factors;
    for (std::size_t c = 0; c < plan.cells.size(); ++c) f[plan.cells[c].j] += plan.draw_coef[c] * residual_draws[c];
    return f;
}

CdrDistribution run_bootstrap(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                              const std::optional<TailModel>& tail, const BootstrapConfig& cfg) {
    return run_bootstrap(tri, pattern, build_residual_pool(tri, pattern), tail, cfg);
}

CdrDistribution run_bootstrap(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                              const ResidualPool& pool, const std::optional<TailModel>& tail_in,
                              const BootstrapConfig& cfg) {
    const std::size_t I = tri.last_index();
    cfg.validate(I);
    if (pattern.last_index != I) throw std::invalid_argument("pattern was fitted on a different triangle size");
    if ((cfg.tail != TailMode::none) != tail_in.has_value()) {
        throw std::invalid_argument("a tail model must be supplied exactly when the tail mode is not 'none'");
    }
    if (pool.residuals.empty()) throw std::invalid_argument("residual pool is empty");

    std::optional<TailModel> tail = tail_in;
    if (tail) {
        if (tail->last_index != I) throw std::invalid_argument("tail model was fitted on a different triangle size");
        tail->dist = cfg.tail == TailMode::lognormal ? TailDistribution::lognormal : TailDistribution::normal;
    }

    const Plan plan = make_plan(tri, pattern, tail ? tail->f_ult_hat : 1.0);

    CdrDistribution out;
    out.mode = cfg.mode;
    out.tail = cfg.tail;
    out.seed = cfg.seed;
    out.years = I + 1;
    out.be_I = plan.be_I;
    out.samples.resize(cfg.iterations);
    if (cfg.per_year) out.per_year_cdr.resize(cfg.iterations * (I + 1));

    const Worker worker{tri, pattern, pool, tail, cfg, plan, out};
    const std::size_t n_workers = std::min(cfg.workers, cfg.iterations);
    if (n_workers <= 1) {
        out.negative_cumulative_count = worker.run_range(0, cfg.iterations);
        return out;
    }

    std::vector<std::size_t> negatives(n_workers, 0);
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    const std::size_t chunk = (cfg.iterations + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t begin = std::min(w * chunk, cfg.iterations);
        const std::size_t end = std::min(begin + chunk, cfg.iterations);
        threads.emplace_back([&, w, begin, end] { negatives[w] = worker.run_range(begin, end); });
    }
    for (auto& t : threads) t.join();
    for (auto n : negatives) out.negative_cumulative_count += n;
    return out;
}

}  // namespace cdr
