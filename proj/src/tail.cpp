#include "cdr/tail.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdr {

std::string_view to_string(TailDistribution d) {
    return d == TailDistribution::normal ? "normal" : "lognormal";
}

TailDistribution parse_tail_distribution(std::string_view s) {
    if (s == "normal") return TailDistribution::normal;
    if (s == "lognormal") return TailDistribution::lognormal;
    throw std::invalid_argument("unknown tail distribution '" + std::string(s) + "'");
}

double extrapolated_tail_factor(double a, double b, std::size_t last_index, std::size_t i_ult) {
    double h = 1.0;
    for (std::size_t j = last_index; j < i_ult; ++j) h *= 1.0 + std::exp(a * static_cast<double>(j) + b);
    return h;
}

std::array<double, 2> gradient_H(double a, double b, std::size_t last_index, std::size_t i_ult) {
    if (i_ult <= last_index) throw std::invalid_argument("gradient_H needs i_ult > I");
    const double I = static_cast<double>(last_index);
    double e = std::exp(a * I + b);
    double h = 1.0 + e;
    double da = I * e;
    double db = e;
    for (std::size_t k = last_index + 1; k < i_ult; ++k) {
        const double kd = static_cast<double>(k);
        e = std::exp(a * kd + b);
        da = kd * e * h + (1.0 + e) * da;
        db = e * h + (1.0 + e) * db;
        h *= 1.0 + e;
    }
    return {da, db};
}

TailModel fit_tail(const DevelopmentPattern& pattern, std::size_t i_ult, TailFitOptions opts) {
    const std::size_t I = pattern.last_index;
    if (i_ult <= I) {
        throw std::invalid_argument("tail horizon i_ult = " + std::to_string(i_ult) +
                                    " must exceed I = " + std::to_string(I));
    }

    TailModel m;
    m.last_index = I;
    m.i_ult = i_ult;
    m.dist = opts.dist;

    const std::size_t columns = opts.drop_last_column ? I - 1 : I;
    for (std::size_t j = 0; j < columns; ++j) {
        if (pattern.factors[j] > 1.0) m.used_points.push_back(j);
    }
    const std::size_t n = m.used_points.size();
    if (n < 3) {
        throw std::invalid_argument("tail fit needs at least 3 development factors above 1, found " +
                                    std::to_string(n));
    }

    // Normal equations for the design rows (j, 1).
    double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = static_cast<double>(m.used_points[k]);
        y[k] = std::log(pattern.factors[m.used_points[k]] - 1.0);
        sx += x;
        sxx += x * x;
        sy += y[k];
        sxy += x * y[k];
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    if (!(det > 0.0)) throw std::invalid_argument("tail regression design matrix is singular");

    m.a = (nn * sxy - sx * sy) / det;
    m.b = (sxx * sy - sx * sxy) / det;

    double rss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - m.a * static_cast<double>(m.used_points[k]) - m.b;
        rss += r * r;
    }
    m.resid_var = rss / nn;

    // (X'X)^-1 = [[n, -sx], [-sx, sxx]] / det
    m.cov[0][0] = m.resid_var * nn / det;
    m.cov[0][1] = m.cov[1][0] = -m.resid_var * sx / det;
    m.cov[1][1] = m.resid_var * sxx / det;

    m.f_ult_hat = extrapolated_tail_factor(m.a, m.b, I, i_ult);
    m.grad = gradient_H(m.a, m.b, I, i_ult);
    const auto& g = m.grad;
    m.sigma2_ult = g[0] * (m.cov[0][0] * g[0] + m.cov[0][1] * g[1]) +
                   g[1] * (m.cov[1][0] * g[0] + m.cov[1][1] * g[1]);
    if (m.sigma2_ult < 0.0) m.sigma2_ult = 0.0;  // rounding on an exact-fit line
    return m;
}

TailModel fixed_tail(std::size_t last_index, std::size_t i_ult, double f_ult, double sigma2_ult,
                     TailDistribution dist) {
    if (i_ult <= last_index) throw std::invalid_argument("tail horizon must exceed I");
    if (!(f_ult > 0.0) || !(sigma2_ult >= 0.0)) {
        throw std::invalid_argument("tail factor must be > 0 with non-negative variance");
    }
    TailModel m;
    m.last_index = last_index;
    m.i_ult = i_ult;
    m.f_ult_hat = f_ult;
    m.sigma2_ult = sigma2_ult;
    m.dist = dist;
    return m;
}

double sample_tail(const TailModel& model, Rng& rng) {
    std::normal_distribution<double> std_normal(0.0, 1.0);
    const double z = std_normal(rng);
    if (model.sigma2_ult == 0.0) return model.f_ult_hat;
    if (model.dist == TailDistribution::normal) {
        return model.f_ult_hat + std::sqrt(model.sigma2_ult) * z;
    }
    // Moment-matched lognormal: mean f_ult_hat, variance sigma2_ult.
    const double s2 = std::log1p(model.sigma2_ult / (model.f_ult_hat * model.f_ult_hat));
    const double mu = std::log(model.f_ult_hat) - 0.5 * s2;
    return std::exp(mu + std::sqrt(s2) * z);
}

}  // namespace cdr
