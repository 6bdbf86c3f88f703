#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "tmfrac/errors.hpp"
#include "tmfrac/measure.hpp"
#include "tmfrac/profile.hpp"

namespace tmfrac {

/// Gauss-Legendre points and weights on [-1, 1], any order >= 2.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;

    explicit GaussRule(int order) {
        if (order < 2) throw DomainError("GaussRule: order must be >= 2");
        const std::size_t n = static_cast<std::size_t>(order);
        x.resize(n);
        w.resize(n);
        const double pi = std::numbers::pi;
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0;
                double p1 = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * static_cast<double>(j) + 1.0) * z * p1 -
                          static_cast<double>(j) * p2) /
                         (static_cast<double>(j) + 1.0);
                }
                pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            w[n - 1 - i] = w[i];
        }
    }
};

/// Composite quadrature specification: panels are the intervals between
/// consecutive nodes plus the leading cell (0, nodes[0]].
struct QuadratureRule {
    std::vector<double> nodes;
    int panel_order = 8;
    double r_min_cutoff = 1e-12;

    static QuadratureRule for_grid(const RadialGrid& g, int order = 8) {
        g.validate();
        QuadratureRule q;
        q.nodes = g.nodes;
        q.panel_order = order;
        q.r_min_cutoff = std::min(1e-12, g.r_min() * 1e-2);
        return q;
    }
};

/// omega_theta * int_0^{r_max} f(r) r^theta dr by per-cell Gauss panels.
/// Throws EvaluationError naming the radius if f produces a non-finite value.
template <class F>
double integrate_weighted(F&& f, const QuadratureRule& rule, double theta) {
    if (rule.nodes.size() < 2) throw DomainError("integrate_weighted: need >= 2 nodes");
    const GaussRule gauss(rule.panel_order);
    double total = 0.0;
    double a = 0.0;
    for (double b : rule.nodes) {
        const double h = 0.5 * (b - a);
        const double c = 0.5 * (b + a);
        double cell = 0.0;
        for (std::size_t k = 0; k < gauss.x.size(); ++k) {
            const double r = c + h * gauss.x[k];
            const double fv = f(r);
            if (!std::isfinite(fv)) {
                throw EvaluationError("integrate_weighted: non-finite integrand at r=" +
                                      std::to_string(r));
            }
            cell += gauss.w[k] * fv * std::pow(r, theta);
        }
        total += h * cell;
        a = b;
    }
    return omega(theta) * total;
}

namespace detail {

// int_a^b r^e dr, written to stay accurate on thin log-spaced cells.
inline double power_cell_integral(double a, double b, double e) {
    const double e1 = e + 1.0;
    if (a <= 0.0) return std::pow(b, e1) / e1;
    return std::pow(a, e1) * std::expm1(e1 * std::log1p((b - a) / a)) / e1;
}

// log of the same integral, for cells whose endpoint powers leave the
// representable range while the product with another factor stays finite.
inline double log_power_cell_integral(double a, double b, double e) {
    const double e1 = e + 1.0;
    return e1 * std::log(a) + std::log(std::expm1(e1 * std::log1p((b - a) / a)) / e1);
}

// Integrates g(u(r)) r^theta over the support of a profile: the constant cap
// cell in closed form (u is constant there, so the weight moment is exact),
// the interior cells by Gauss panels with u evaluated as the cell's linear
// interpolant.  Requires g(0) == 0; cells where u vanishes are skipped.
template <class G>
double integrate_profile_cells(const RadialProfile& u, double theta, int order, G&& g) {
    const auto& x = u.grid.nodes;
    const auto& v = u.values;
    const GaussRule gauss(order);
    double total = g(v.front()) * power_cell_integral(0.0, x.front(), theta);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
        const double h = 0.5 * (x[i + 1] - x[i]);
        const double c = 0.5 * (x[i + 1] + x[i]);
        const double slope = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
        double cell = 0.0;
        for (std::size_t k = 0; k < gauss.x.size(); ++k) {
            const double r = c + h * gauss.x[k];
            const double uv = v[i] + slope * (r - x[i]);
            cell += gauss.w[k] * g(uv) * std::pow(r, theta);
        }
        total += h * cell;
    }
    return total;
}

} // namespace detail

/// ||u||_{L^q_theta} of a profile; zero iff the profile is zero.
inline double norm_lq_theta(const RadialProfile& u, double q, double theta, int order = 8) {
    if (!(q >= 1.0)) throw DomainError("norm_lq_theta: requires q >= 1");
    const double s = omega(theta) * detail::integrate_profile_cells(
                                        u, theta, order,
                                        [q](double uv) { return std::pow(uv, q); });
    return std::pow(s, 1.0 / q);
}

/// ||u'||_{L^p_alpha}^p; u' is piecewise constant so each cell is exact.
/// Cells whose slope power alone would overflow are combined with the weight
/// moment in the log domain; deeply concentrated profiles have such cells.
inline double grad_norm_pow_p(const RadialProfile& u, const WeightParams& wp) {
    const auto& x = u.grid.nodes;
    const auto& v = u.values;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double slope = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
        if (slope == 0.0) continue;
        const double log_pow = wp.p * std::log(std::abs(slope));
        if (std::abs(log_pow) > 600.0) {
            total += std::exp(log_pow +
                              detail::log_power_cell_integral(x[i], x[i + 1], wp.alpha));
        } else {
            total += std::pow(std::abs(slope), wp.p) *
                     detail::power_cell_integral(x[i], x[i + 1], wp.alpha);
        }
    }
    return omega(wp.alpha) * total;
}

/// ||u'||_{L^p_alpha}.
inline double norm_grad_lp_alpha(const RadialProfile& u, const WeightParams& wp) {
    return std::pow(grad_norm_pow_p(u, wp), 1.0 / wp.p);
}

/// Full norm (||u||_{L^p_theta}^p + ||u'||_{L^p_alpha}^p)^(1/p).
inline double full_norm(const RadialProfile& u, const WeightParams& wp, int order = 8) {
    const double lp = norm_lq_theta(u, wp.p, wp.theta, order);
    const double gp = grad_norm_pow_p(u, wp);
    return std::pow(std::pow(lp, wp.p) + gp, 1.0 / wp.p);
}

} // namespace tmfrac
