#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cdr/chain_ladder.hpp"
#include "cdr/triangle.hpp"

namespace cdr::test {

inline std::string data_path(const std::string& name) { return std::string(CDR_TEST_DATA_DIR) + "/" + name; }

inline CumulativeTriangle reference_triangle() { return read_triangle_file(data_path("reference_triangle.csv")); }

inline CumulativeTriangle doubling_triangle() { return CumulativeTriangle::from_rows({{1, 2, 4}, {1, 2}, {1}}); }

// Random square triangle with noisy, decaying link ratios.
inline CumulativeTriangle random_triangle(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> first(500.0, 3000.0);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        double c = first(gen);
        rows[i].push_back(c);
        for (std::size_t j = 1; j + i < n; ++j) {
            const double mean_step = 0.6 * std::exp(-0.7 * static_cast<double>(j - 1));
            c *= 1.0 + mean_step * (1.0 + 0.4 * noise(gen));
            rows[i].push_back(c);
        }
    }
    return CumulativeTriangle::from_rows(std::move(rows));
}

inline double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got / want - 1.0);
}

// Loop-level transcriptions of the no-tail and tail closed forms, written
// against the formulas directly and sharing nothing with the library.
struct OracleResult {
    std::vector<double> per_year;  // variances, index 0..I
    double total = 0.0;
};

struct ClosedFormOracle {
    const CumulativeTriangle& tri;
    const DevelopmentPattern& p;
    std::size_t I;

    ClosedFormOracle(const CumulativeTriangle& t, const DevelopmentPattern& pat)
        : tri(t), p(pat), I(t.last_index()) {}

    double C(std::size_t i, std::size_t j) const { return tri(i, j); }
    double f(std::size_t j) const { return p.factors[j]; }
    double s2(std::size_t j) const { return p.sigma2[j]; }
    double SI(std::size_t j) const {
        double s = 0;
        for (std::size_t i = 0; i + j + 1 <= I; ++i) s += C(i, j);
        return s;
    }
    double SI1(std::size_t j) const {
        double s = 0;
        for (std::size_t i = 0; i + j <= I; ++i) s += C(i, j);
        return s;
    }
    double chat(std::size_t i) const {
        double c = C(i, I - i);
        for (std::size_t j = I - i; j < I; ++j) c *= f(j);
        return c;
    }
    double tail_sum(std::size_t i) const {
        double s = 0;
        for (std::size_t j = I - i + 1; j <= I - 1; ++j) {
            const double w = C(I - j, j) / SI1(j);
            s += w * w * s2(j) / (f(j) * f(j) * SI(j));
        }
        return s;
    }
    double delta(std::size_t i) const {
        const std::size_t j = I - i;
        return s2(j) / (f(j) * f(j) * SI(j)) + tail_sum(i);
    }
    double lambda(std::size_t k) const {
        const std::size_t j = I - k;
        return C(k, j) / SI1(j) * s2(j) / (f(j) * f(j) * SI(j)) + tail_sum(k);
    }
    // prod_k (1 + t_k) - 1 expanded as the sum over non-empty subsets, which
    // keeps full relative precision when every t_k is small.
    static double expand_minus_one(const std::vector<double>& t) {
        double s = 0;
        for (std::size_t mask = 1; mask < (std::size_t{1} << t.size()); ++mask) {
            double term = 1;
            for (std::size_t k = 0; k < t.size(); ++k)
                if (mask & (std::size_t{1} << k)) term *= t[k];
            s += term;
        }
        return s;
    }
    std::vector<double> prod_terms(std::size_t i) const {
        std::vector<double> t;
        for (std::size_t l = I - i + 1; l <= I - 1; ++l) t.push_back(s2(l) * C(I - l, l) / (f(l) * f(l) * SI1(l) * SI1(l)));
        return t;
    }
    double gamma(std::size_t i) const {
        const std::size_t j = I - i;
        const double c = chat(i);
        auto t = prod_terms(i);
        t.push_back(s2(j) / (f(j) * f(j) * C(i, j)));
        return c * c * expand_minus_one(t);
    }
    // k is the older origin year.
    double upsilon(std::size_t i, std::size_t k) const {
        const std::size_t j = I - k;
        auto t = prod_terms(k);
        t.push_back(s2(j) / (f(j) * f(j) * SI1(j)));
        return chat(i) * chat(k) * expand_minus_one(t);
    }
    double phi(std::size_t i) const {
        const std::size_t j = I - i;
        const double c = chat(i);
        return c * c * (1 + s2(j) / (f(j) * f(j) * C(i, j))) * expand_minus_one(prod_terms(i));
    }
    double psi(std::size_t i, std::size_t k) const {
        if (k == 1) return 0.0;
        const std::size_t j = I - k;
        const double x = s2(j) / (f(j) * f(j));
        return chat(i) / chat(k) * (1 + x / SI1(j)) / (1 + x / C(k, j)) * phi(k);
    }

    OracleResult estimation() const {
        OracleResult r{std::vector<double>(I + 1, 0.0), 0.0};
        for (std::size_t i = 1; i <= I; ++i) {
            r.per_year[i] = chat(i) * chat(i) * delta(i);
            r.total += r.per_year[i];
        }
        for (std::size_t i = 1; i <= I; ++i)
            for (std::size_t k = 1; k < i; ++k) r.total += 2 * chat(i) * chat(k) * lambda(k);
        return r;
    }
    OracleResult process() const {
        OracleResult r{std::vector<double>(I + 1, 0.0), 0.0};
        for (std::size_t i = 1; i <= I; ++i) {
            r.per_year[i] = gamma(i);
            r.total += r.per_year[i];
        }
        for (std::size_t i = 1; i <= I; ++i)
            for (std::size_t k = 1; k < i; ++k) r.total += 2 * upsilon(i, k);
        return r;
    }
    OracleResult msep_true() const {
        OracleResult r{std::vector<double>(I + 1, 0.0), 0.0};
        for (std::size_t i = 1; i <= I; ++i) {
            r.per_year[i] = phi(i) + chat(i) * chat(i) * delta(i);
            r.total += r.per_year[i];
        }
        for (std::size_t i = 1; i <= I; ++i)
            for (std::size_t k = 1; k < i; ++k) r.total += 2 * (psi(i, k) + chat(i) * chat(k) * lambda(k));
        return r;
    }

    OracleResult estimation_tail(double fu, double s2u) const {
        OracleResult r{std::vector<double>(I + 1, 0.0), 0.0};
        const double ratio = s2u / (fu * fu);
        std::vector<double> u(I + 1);
        u[0] = fu * C(0, I);
        for (std::size_t i = 1; i <= I; ++i) u[i] = fu * chat(i);
        r.per_year[0] = C(0, I) * C(0, I) * s2u;
        for (std::size_t i = 1; i <= I; ++i) r.per_year[i] = u[i] * u[i] * expand_minus_one({ratio, delta(i)});
        for (double v : r.per_year) r.total += v;
        for (std::size_t i = 0; i <= I; ++i) {
            for (std::size_t j = i + 1; j <= I; ++j) {
                const double cov = i == 0 ? u[i] * u[j] * ratio : u[i] * u[j] * expand_minus_one({ratio, lambda(i)});
                r.total += 2 * cov;
            }
        }
        return r;
    }
    OracleResult process_tail(double fu) const {
        OracleResult r{std::vector<double>(I + 1, 0.0), 0.0};
        for (std::size_t i = 1; i <= I; ++i) {
            r.per_year[i] = fu * fu * gamma(i);
            r.total += r.per_year[i];
        }
        for (std::size_t j = 1; j <= I; ++j)
            for (std::size_t i = 1; i < j; ++i) r.total += 2 * fu * fu * upsilon(j, i);
        return r;
    }
};

}  // namespace cdr::test
