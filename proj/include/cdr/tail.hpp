#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "cdr/chain_ladder.hpp"
#include "cdr/random.hpp"

namespace cdr {

enum class TailDistribution { normal, lognormal };

std::string_view to_string(TailDistribution d);
TailDistribution parse_tail_distribution(std::string_view s);

/// Log-linear tail: ln(f_j - 1) = a*j + b fitted on the observed chain-ladder
/// factors, extrapolated over j = I..I_ult-1.
struct TailModel {
    double a = 0.0;
    double b = 0.0;
    std::size_t last_index = 0;  ///< I
    std::size_t i_ult = 0;       ///< ultimate horizon, > I

    double f_ult_hat = 1.0;   ///< prod_{j=I}^{I_ult-1} (1 + exp(a*j + b))
    double sigma2_ult = 0.0;  ///< delta-method variance of f_ult_hat

    std::array<std::array<double, 2>, 2> cov{};  ///< resid_var * (X'X)^-1, order (a, b)
    double resid_var = 0.0;                      ///< biased residual variance (divisor n)
    std::array<double, 2> grad{};                ///< (dH/da, dH/db) at the fit

    TailDistribution dist = TailDistribution::normal;
    std::vector<std::size_t> used_points;  ///< development periods j that entered the fit
};

struct TailFitOptions {
    TailDistribution dist = TailDistribution::normal;
    /// Leave out column I-1, whose factor rests on a single link ratio.
    bool drop_last_column = false;
};

/// Throws std::invalid_argument when i_ult <= I or fewer than 3 factors exceed 1.
TailModel fit_tail(const DevelopmentPattern& pattern, std::size_t i_ult, TailFitOptions opts = {});

/// A tail with prescribed mean and variance; a, b and the regression fields stay zero.
TailModel fixed_tail(std::size_t last_index, std::size_t i_ult, double f_ult, double sigma2_ult,
                     TailDistribution dist = TailDistribution::normal);

/// H_{i_ult-1}(a,b) = prod_{j=I}^{i_ult-1} (1 + exp(a*j + b)).
double extrapolated_tail_factor(double a, double b, std::size_t last_index, std::size_t i_ult);

/// Gradient of H_{i_ult-1} with respect to (a, b), built by the forward
/// recursion dH_{k}/da = k e_k H_{k-1} + (1 + e_k) dH_{k-1}/da, anchored at
/// H_I = 1 + e_I, dH_I/da = I e_I, dH_I/db = e_I.
std::array<double, 2> gradient_H(double a, double b, std::size_t last_index, std::size_t i_ult);

/// One draw of the tail factor with mean f_ult_hat and variance sigma2_ult.
/// Returns f_ult_hat exactly when sigma2_ult == 0. Consumes exactly one
/// standard normal from `rng` in either case.
double sample_tail(const TailModel& model, Rng& rng);

}  // namespace cdr
