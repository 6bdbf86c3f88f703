#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tmfrac/errors.hpp"
#include "tmfrac/measure.hpp"
#include "tmfrac/profile.hpp"
#include "tmfrac/quadrature.hpp"

namespace tmfrac {

namespace detail {

// sum_{j >= m} t^j / j!  (m = 0 gives e^t).  Small arguments go through the
// ascending series to avoid the cancellation in e^t minus a partial sum.
inline double phi_trunc(double t, int m) {
    if (t < 0.0) throw DomainError("phi_trunc: requires t >= 0");
    if (m <= 0) return std::exp(t);
    if (m == 1) return std::expm1(t);
    if (t == 0.0) return 0.0;
    if (t < static_cast<double>(m) + 5.0) {
        double term = 1.0;
        for (int k = 1; k <= m; ++k) term *= t / static_cast<double>(k);
        double sum = term;
        for (int j = m + 1; j < m + 400; ++j) {
            term *= t / static_cast<double>(j);
            sum += term;
            if (term < 1e-16 * sum) break;
        }
        return sum;
    }
    double partial = 0.0;
    double fact = 1.0;
    for (int k = 0; k < m; ++k) {
        partial += fact;
        fact *= t / static_cast<double>(k + 1);
    }
    return std::exp(t) - partial;
}

// log of phi_trunc, finite-argument safe for t far beyond overflow.
inline double log_phi_trunc(double t, int m) {
    if (t <= 0.0) return -std::numeric_limits<double>::infinity();
    if (t <= 700.0) return std::log(phi_trunc(t, m));
    double partial_over_exp = 0.0;
    double log_fact = 0.0;
    for (int k = 0; k < m; ++k) {
        partial_over_exp += std::exp(static_cast<double>(k) * std::log(t) - log_fact - t);
        log_fact += std::log(static_cast<double>(k + 1));
    }
    return t + std::log1p(-partial_over_exp);
}

} // namespace detail

/// phi_p(t) = e^t - sum_{k < k0} t^k/k! = sum_{j >= k0} t^j/j!, t >= 0.
inline double phi_p(double t, const WeightParams& wp) {
    if (t < 0.0) throw DomainError("phi_p: requires t >= 0, got t=" + std::to_string(t));
    return detail::phi_trunc(t, wp.k0);
}

/// d/dt phi_p(t) = sum_{j >= k0-1} t^j/j!.
inline double phi_p_deriv(double t, const WeightParams& wp) {
    if (t < 0.0) throw DomainError("phi_p_deriv: requires t >= 0");
    return detail::phi_trunc(t, wp.k0 - 1);
}

/// Weighted exponential integral of a profile.  When the integrand exceeds the
/// representable range at the cap, the integral is accumulated in the log
/// domain and `overflowed` is set; `log_value` is always the log magnitude.
struct TmIntegral {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    bool overflowed = false;
};

/// int_0^inf phi_p(mu |u|^{p/(p-1)}) dlambda_theta for a monotone profile.
inline TmIntegral tm_integral(const RadialProfile& u, double mu, const WeightParams& wp,
                              int order = 8) {
    if (mu < 0.0) throw DomainError("tm_integral: requires mu >= 0");
    TmIntegral out;
    if (mu == 0.0 || u.is_zero()) return out;
    const double ce = wp.conj_exp();
    const double peak = mu * std::pow(u.left_cap(), ce);
    if (peak <= 600.0) {
        const double v = omega(wp.theta) *
                         detail::integrate_profile_cells(
                             u, wp.theta, order, [&](double uv) {
                                 return uv == 0.0 ? 0.0
                                                  : detail::phi_trunc(mu * std::pow(uv, ce),
                                                                      wp.k0);
                             });
        out.value = v;
        out.log_value = v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
        return out;
    }

    // log-domain accumulation over the cap cell and all Gauss contributions
    out.overflowed = true;
    const auto& x = u.grid.nodes;
    const auto& vals = u.values;
    std::vector<double> logs;
    logs.reserve(x.size() * static_cast<std::size_t>(order));
    const double log_omega = std::log(omega(wp.theta));
    logs.push_back(log_omega + detail::log_phi_trunc(peak, wp.k0) +
                   (wp.theta + 1.0) * std::log(x.front()) - std::log(wp.theta + 1.0));
    const GaussRule gauss(order);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (vals[i] == 0.0 && vals[i + 1] == 0.0) continue;
        const double h = 0.5 * (x[i + 1] - x[i]);
        const double c = 0.5 * (x[i + 1] + x[i]);
        const double slope = (vals[i + 1] - vals[i]) / (x[i + 1] - x[i]);
        for (std::size_t k = 0; k < gauss.x.size(); ++k) {
            const double r = c + h * gauss.x[k];
            const double uv = vals[i] + slope * (r - x[i]);
            if (uv <= 0.0) continue;
            const double t = mu * std::pow(uv, ce);
            logs.push_back(log_omega + std::log(h * gauss.w[k]) + wp.theta * std::log(r) +
                           detail::log_phi_trunc(t, wp.k0));
        }
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double l : logs) m = std::max(m, l);
    double s = 0.0;
    for (double l : logs) s += std::exp(l - m);
    out.log_value = m + std::log(s);
    out.value = out.log_value < 709.0 ? std::exp(out.log_value)
                                      : std::numeric_limits<double>::infinity();
    return out;
}

/// Subcritical objective: tm integral divided by ||u||_{L^p_theta}^p, over the
/// gradient unit ball.  Defined for 0 <= mu < mu_star.
inline double subcritical_objective(const RadialProfile& u, double mu,
                                    const WeightParams& wp, int order = 8) {
    if (!(mu >= 0.0) || !(mu < wp.mu_star_value)) {
        throw DomainError("subcritical_objective: requires 0 <= mu < mu_star");
    }
    if (u.is_zero()) throw DomainError("subcritical_objective: zero profile");
    const double g = norm_grad_lp_alpha(u, wp);
    if (g > 1.0 + 1e-8) {
        throw ConstraintError("subcritical_objective: gradient norm " + std::to_string(g) +
                              " exceeds the unit ball tolerance");
    }
    if (mu == 0.0) return 0.0;
    const double lp = norm_lq_theta(u, wp.p, wp.theta, order);
    return tm_integral(u, mu, wp, order).value / std::pow(lp, wp.p);
}

/// Critical objective: tm integral over the full-norm unit ball, 0 <= sigma <= mu_star.
inline double critical_objective(const RadialProfile& u, double sigma,
                                 const WeightParams& wp, int order = 8) {
    if (!(sigma >= 0.0) || !(sigma <= wp.mu_star_value)) {
        throw DomainError("critical_objective: requires 0 <= sigma <= mu_star");
    }
    const double fn = full_norm(u, wp, order);
    if (fn > 1.0 + 1e-8) {
        throw ConstraintError("critical_objective: full norm " + std::to_string(fn) +
                              " exceeds the unit ball tolerance");
    }
    if (sigma == 0.0) return 0.0;
    return tm_integral(u, sigma, wp, order).value;
}

/// (1 - (mu/sigma)^{p-1}) / (mu/sigma)^{p-1}, the factor converting a
/// subcritical supremum at mu into a critical bound at sigma.
inline double identity_ratio(double mu, double sigma, const WeightParams& wp) {
    if (!(mu > 0.0) || !(mu < sigma) || !(sigma <= wp.mu_star_value)) {
        throw DomainError("identity_ratio: requires 0 < mu < sigma <= mu_star");
    }
    const double rho = std::pow(mu / sigma, wp.p - 1.0);
    return (1.0 - rho) / rho;
}

enum class SupKind { subcritical, critical };

/// Norms, exponential integral and objective of one profile.
struct FunctionalReport {
    double grad_norm_p = 0.0;
    double lp_theta_norm = 0.0;
    double full_norm = 0.0;
    double tm_integral = 0.0;
    double tm_log = -std::numeric_limits<double>::infinity();
    double objective = 0.0;
    bool overflow_flag = false;
};

inline FunctionalReport make_report(const RadialProfile& u, double mu_or_sigma,
                                    const WeightParams& wp, SupKind kind,
                                    int order = 8) {
    FunctionalReport rep;
    rep.grad_norm_p = norm_grad_lp_alpha(u, wp);
    rep.lp_theta_norm = norm_lq_theta(u, wp.p, wp.theta, order);
    rep.full_norm = std::pow(std::pow(rep.grad_norm_p, wp.p) + std::pow(rep.lp_theta_norm, wp.p),
                             1.0 / wp.p);
    const TmIntegral tm = tm_integral(u, mu_or_sigma, wp, order);
    rep.tm_integral = tm.value;
    rep.tm_log = tm.log_value;
    rep.overflow_flag = tm.overflowed;
    rep.objective = kind == SupKind::subcritical
                        ? tm.value / std::pow(rep.lp_theta_norm, wp.p)
                        : tm.value;
    return rep;
}

} // namespace tmfrac
