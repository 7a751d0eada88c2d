#include "cdr/chain_ladder.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cdr {

double mack_last_sigma2(double s3, double s2) {
    double ratio = 0.0;
    if (s3 > 0.0) {
        ratio = s2 * s2 / s3;
    } else if (s2 > 0.0) {
        ratio = std::numeric_limits<double>::infinity();
    }
    return std::min(ratio, std::min(s3, s2));
}

DevelopmentPattern fit_pattern(const CumulativeTriangle& tri) {
    const std::size_t I = tri.last_index();
    if (I < 2) {
        throw std::invalid_argument("chain-ladder fit needs at least 3 origin years (I >= 2), got I = " +
                                    std::to_string(I));
    }

    DevelopmentPattern p;
    p.last_index = I;
    p.factors.assign(I, 0.0);
    p.sigma2.assign(I, 0.0);
    p.s_I.assign(I, 0.0);
    p.s_I1.assign(I, 0.0);
    p.individual_factors.resize(I + 1);

    for (std::size_t i = 0; i < I; ++i) {
        auto& row = p.individual_factors[i];
        row.resize(I - i);
        for (std::size_t j = 0; j + i < I; ++j) row[j] = tri(i, j + 1) / tri(i, j);
    }

    for (std::size_t j = 0; j < I; ++j) {
        double numer = 0.0;
        for (std::size_t i = 0; i + j < I; ++i) {
            p.s_I[j] += tri(i, j);
            numer += tri(i, j + 1);
        }
        p.s_I1[j] = p.s_I[j] + tri(I - j, j);
        p.factors[j] = numer / p.s_I[j];
    }

    for (std::size_t j = 0; j + 1 < I; ++j) {
        const std::size_t n = I - j;  // observed link ratios in column j
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = p.individual_factors[i][j] - p.factors[j];
            ss += tri(i, j) * d * d;
        }
        p.sigma2[j] = ss / static_cast<double>(n - 1);
    }

    if (I >= 3) {
        p.sigma2[I - 1] = mack_last_sigma2(p.sigma2[I - 3], p.sigma2[I - 2]);
    } else {
        p.sigma2[I - 1] = p.sigma2[I - 2];
        p.warnings.emplace_back("triangle too small for the last-variance extrapolation; sigma^2_" +
                                std::to_string(I - 1) + " set to sigma^2_" + std::to_string(I - 2));
    }
    return p;
}

std::vector<double> project_ultimates(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                                      double tail_factor) {
    const std::size_t I = tri.last_index();
    if (pattern.last_index != I) throw std::invalid_argument("pattern was fitted on a different triangle size");
    std::vector<double> out(I + 1);
    for (std::size_t i = 0; i <= I; ++i) {
        double c = tri.latest(i);
        for (std::size_t j = I - i; j < I; ++j) c *= pattern.factors[j];
        out[i] = c * tail_factor;
    }
    return out;
}

double best_estimate_I(const CumulativeTriangle& tri, const DevelopmentPattern& pattern, double tail_factor) {
    const auto ult = project_ultimates(tri, pattern, tail_factor);
    double be = 0.0;
    for (std::size_t i = 0; i < ult.size(); ++i) be += ult[i] - tri.latest(i);
    return be;
}

}  // namespace cdr
