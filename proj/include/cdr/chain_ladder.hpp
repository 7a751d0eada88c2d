#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cdr/triangle.hpp"

namespace cdr {

/// Chain-ladder development factors and Mack variance parameters fitted on a
/// cumulative triangle. All sequences are indexed by development period
/// j = 0..I-1.
struct DevelopmentPattern {
    std::size_t last_index = 0;  ///< I

    std::vector<double> factors;  ///< f_j, volume-weighted link ratios
    std::vector<double> sigma2;   ///< sigma_j^2
    std::vector<double> s_I;      ///< S^I_j = sum_{i<=I-j-1} C(i,j)
    std::vector<double> s_I1;     ///< S^{I+1}_j = sum_{i<=I-j} C(i,j)

    /// individual_factors[i][j] = C(i,j+1)/C(i,j) for i+j <= I-1.
    std::vector<std::vector<double>> individual_factors;

    /// Non-fatal fitting notes (e.g. last variance not extrapolable).
    std::vector<std::string> warnings;

    double individual_factor(std::size_t i, std::size_t j) const { return individual_factors[i][j]; }
};

/// Requires I >= 2. Throws std::invalid_argument otherwise.
DevelopmentPattern fit_pattern(const CumulativeTriangle& tri);

/// Mack's extrapolation of the last variance parameter from the two preceding
/// ones, min(s2^2/s3, min(s3, s2)) with s2 = sigma^2_{I-2} and s3 = sigma^2_{I-3}.
/// When s3 == 0 the ratio is taken as 0 if s2 == 0, else +inf.
double mack_last_sigma2(double sigma2_i_minus_3, double sigma2_i_minus_2);

/// Projected cumulative amounts at development I, times `tail_factor`.
/// Element i is C(i,I-i) * prod_{j=I-i}^{I-1} f_j * tail_factor.
std::vector<double> project_ultimates(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                                      double tail_factor = 1.0);

/// Sum over all origin years of (projected ultimate - latest paid).
double best_estimate_I(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                       double tail_factor = 1.0);

}  // namespace cdr
