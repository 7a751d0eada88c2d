#include "cdr/closed_form.hpp"

#include <cmath>
#include <stdexcept>

namespace cdr {

namespace {

// Shared ingredients of the one-year error formulas. Indices follow the
// triangle: i = origin year, j/l = development period.
class Terms {
public:
    Terms(const CumulativeTriangle& tri, const DevelopmentPattern& p) : tri_(tri), p_(p), I_(tri.last_index()) {
        if (p.last_index != I_) throw std::invalid_argument("pattern was fitted on a different triangle size");
        ult_ = project_ultimates(tri, p);
    }

    std::size_t I() const { return I_; }
    double ult(std::size_t i) const { return ult_[i]; }

    // sigma_j^2 / (f_j^2 S^I_j)
    double param_var(std::size_t j) const {
        return p_.sigma2[j] / (p_.factors[j] * p_.factors[j] * p_.s_I[j]);
    }
    // C(I-j, j) / S^{I+1}_j
    double weight(std::size_t j) const { return tri_(I_ - j, j) / p_.s_I1[j]; }

    // sigma_l^2 C(I-l,l) / (f_l^2 (S^{I+1}_l)^2)
    double diag_process(std::size_t l) const {
        const double s = p_.s_I1[l];
        return p_.sigma2[l] * tri_(I_ - l, l) / (p_.factors[l] * p_.factors[l] * s * s);
    }

    // sigma_{I-i}^2 / (f_{I-i}^2 C(i, I-i))
    double own_process(std::size_t i) const {
        const std::size_t j = I_ - i;
        return p_.sigma2[j] / (p_.factors[j] * p_.factors[j] * tri_.latest(i));
    }

    // sigma_{I-k}^2 / (f_{I-k}^2 S^{I+1}_{I-k})
    double shared_process(std::size_t k) const {
        const std::size_t j = I_ - k;
        return p_.sigma2[j] / (p_.factors[j] * p_.factors[j] * p_.s_I1[j]);
    }

    // sum_{j=I-i+1}^{I-1} weight(j)^2 param_var(j)
    double later_estimation(std::size_t i) const {
        double s = 0.0;
        for (std::size_t j = I_ - i + 1; j < I_; ++j) s += weight(j) * weight(j) * param_var(j);
        return s;
    }

    double delta(std::size_t i) const { return param_var(I_ - i) + later_estimation(i); }
    double lambda(std::size_t k) const { return weight(I_ - k) * param_var(I_ - k) + later_estimation(k); }

    // log of prod_{l=I-i+1}^{I-1} (1 + diag_process(l))
    double log_later_process(std::size_t i) const {
        double s = 0.0;
        for (std::size_t l = I_ - i + 1; l < I_; ++l) s += std::log1p(diag_process(l));
        return s;
    }

    // Gamma_i / C_i^2 = (1 + own) * prod - 1
    double gamma_rel(std::size_t i) const { return std::expm1(std::log1p(own_process(i)) + log_later_process(i)); }
    // Upsilon_{i,k} / (C_i C_k) for k older than i
    double upsilon_rel(std::size_t k) const {
        return std::expm1(std::log1p(shared_process(k)) + log_later_process(k));
    }
    // Phi_i / C_i^2 = (1 + own) * (prod - 1)
    double phi_rel(std::size_t i) const { return (1.0 + own_process(i)) * std::expm1(log_later_process(i)); }

private:
    const CumulativeTriangle& tri_;
    const DevelopmentPattern& p_;
    std::size_t I_;
    std::vector<double> ult_;
};

// (1 + r)(1 + x) - 1 without cancellation
double inflate(double x, double r) { return x + r + x * r; }

double sqrt0(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }

ErrorVariances add(const ErrorVariances& a, const ErrorVariances& b) {
    ErrorVariances out = a;
    for (std::size_t i = 0; i < out.per_year.size(); ++i) out.per_year[i] += b.per_year[i];
    out.total += b.total;
    return out;
}

}  // namespace

ErrorVariances estimation_error_no_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p) {
    const Terms t(tri, p);
    const std::size_t I = t.I();
    ErrorVariances out{std::vector<double>(I + 1, 0.0), 0.0};
    for (std::size_t i = 1; i <= I; ++i) {
        out.per_year[i] = t.ult(i) * t.ult(i) * t.delta(i);
        out.total += out.per_year[i];
    }
    for (std::size_t i = 2; i <= I; ++i)
        for (std::size_t k = 1; k < i; ++k) out.total += 2.0 * t.ult(i) * t.ult(k) * t.lambda(k);
    return out;
}

ErrorVariances process_error_no_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p) {
    const Terms t(tri, p);
    const std::size_t I = t.I();
    ErrorVariances out{std::vector<double>(I + 1, 0.0), 0.0};
    for (std::size_t i = 1; i <= I; ++i) {
        out.per_year[i] = t.ult(i) * t.ult(i) * t.gamma_rel(i);
        out.total += out.per_year[i];
    }
    for (std::size_t i = 2; i <= I; ++i)
        for (std::size_t k = 1; k < i; ++k) out.total += 2.0 * t.ult(i) * t.ult(k) * t.upsilon_rel(k);
    return out;
}

ErrorVariances prediction_error_no_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p) {
    return add(estimation_error_no_tail(tri, p), process_error_no_tail(tri, p));
}

ErrorVariances msep_true_by_observable(const CumulativeTriangle& tri, const DevelopmentPattern& p) {
    const Terms t(tri, p);
    const std::size_t I = t.I();
    ErrorVariances out{std::vector<double>(I + 1, 0.0), 0.0};
    std::vector<double> phi(I + 1, 0.0);
    for (std::size_t i = 1; i <= I; ++i) {
        phi[i] = t.ult(i) * t.ult(i) * t.phi_rel(i);
        out.per_year[i] = phi[i] + t.ult(i) * t.ult(i) * t.delta(i);
        out.total += out.per_year[i];
    }
    for (std::size_t i = 2; i <= I; ++i) {
        for (std::size_t k = 1; k < i; ++k) {
            double psi = 0.0;
            if (k > 1) {
                psi = t.ult(i) / t.ult(k) * (1.0 + t.shared_process(k)) / (1.0 + t.own_process(k)) * phi[k];
            }
            out.total += 2.0 * (psi + t.ult(i) * t.ult(k) * t.lambda(k));
        }
    }
    return out;
}

ErrorVariances estimation_error_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                     const TailModel& tail) {
    const Terms t(tri, p);
    const std::size_t I = t.I();
    const double f = tail.f_ult_hat;
    const double r = tail.sigma2_ult / (f * f);
    std::vector<double> u(I + 1);  // ultimates including the tail
    for (std::size_t i = 0; i <= I; ++i) u[i] = f * t.ult(i);

    ErrorVariances out{std::vector<double>(I + 1, 0.0), 0.0};
    out.per_year[0] = tri(0, I) * tri(0, I) * tail.sigma2_ult;
    out.total = out.per_year[0];
    for (std::size_t i = 1; i <= I; ++i) {
        out.per_year[i] = u[i] * u[i] * inflate(t.delta(i), r);
        out.total += out.per_year[i];
    }
    for (std::size_t i = 1; i <= I; ++i) {
        out.total += 2.0 * u[i] * u[0] * r;
        for (std::size_t j = i + 1; j <= I; ++j) out.total += 2.0 * u[i] * u[j] * inflate(t.lambda(i), r);
    }
    return out;
}

ErrorVariances process_error_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                  const TailModel& tail) {
    const Terms t(tri, p);
    const std::size_t I = t.I();
    const double f = tail.f_ult_hat;
    std::vector<double> u(I + 1);
    for (std::size_t i = 0; i <= I; ++i) u[i] = f * t.ult(i);

    ErrorVariances out{std::vector<double>(I + 1, 0.0), 0.0};
    for (std::size_t i = 1; i <= I; ++i) {
        out.per_year[i] = u[i] * u[i] * t.gamma_rel(i);
        out.total += out.per_year[i];
    }
    for (std::size_t i = 1; i <= I; ++i)
        for (std::size_t j = i + 1; j <= I; ++j) out.total += 2.0 * u[i] * u[j] * t.upsilon_rel(i);
    return out;
}

ErrorVariances prediction_error_tail(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                     const TailModel& tail) {
    return add(estimation_error_tail(tri, p, tail), process_error_tail(tri, p, tail));
}

namespace {

ClosedFormReport assemble(std::size_t I, std::size_t first_year, const ErrorVariances& est,
                          const ErrorVariances& proc, const ErrorVariances* msep) {
    ClosedFormReport rep;
    rep.last_index = I;
    for (std::size_t i = first_year; i <= I; ++i) {
        ErrorRow row;
        row.year = i;
        row.estimation = sqrt0(est.per_year[i]);
        row.process = sqrt0(proc.per_year[i]);
        row.prediction = sqrt0(est.per_year[i] + proc.per_year[i]);
        if (msep) row.msep_true = sqrt0(msep->per_year[i]);
        rep.rows.push_back(row);
    }
    rep.total.year = I + 1;
    rep.total.estimation = sqrt0(est.total);
    rep.total.process = sqrt0(proc.total);
    rep.total.prediction = sqrt0(est.total + proc.total);
    if (msep) rep.total.msep_true = sqrt0(msep->total);
    return rep;
}

}  // namespace

ClosedFormReport closed_form_report(const CumulativeTriangle& tri, const DevelopmentPattern& p) {
    const auto est = estimation_error_no_tail(tri, p);
    const auto proc = process_error_no_tail(tri, p);
    const auto msep = msep_true_by_observable(tri, p);
    return assemble(tri.last_index(), 1, est, proc, &msep);
}

ClosedFormReport closed_form_report(const CumulativeTriangle& tri, const DevelopmentPattern& p,
                                    const TailModel& tail) {
    auto rep = assemble(tri.last_index(), 0, estimation_error_tail(tri, p, tail), process_error_tail(tri, p, tail),
                        nullptr);
    rep.tail_included = true;
    rep.i_ult = tail.i_ult;
    rep.f_ult = tail.f_ult_hat;
    rep.sigma2_ult = tail.sigma2_ult;
    return rep;
}

}  // namespace cdr
