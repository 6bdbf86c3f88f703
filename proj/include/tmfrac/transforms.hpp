#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "tmfrac/errors.hpp"
#include "tmfrac/measure.hpp"
#include "tmfrac/profile.hpp"
#include "tmfrac/quadrature.hpp"

namespace tmfrac {

/// zeta * u(tau r) as an exact node remap (nodes scale by 1/tau, values by
/// zeta).  Piecewise-linear structure is preserved, so the norm scaling laws
///   ||u_tau'||_p^p = (zeta tau)^p tau^{-(alpha+1)} ||u'||_p^p
///   ||u_tau||_q^q  = zeta^q tau^{-(theta+1)} ||u||_q^q
/// hold to rounding error.
inline RadialProfile rescale(const RadialProfile& u, double zeta, double tau) {
    if (!(zeta > 0.0) || !(tau > 0.0)) {
        throw DomainError("rescale: zeta and tau must be positive");
    }
    RadialProfile out;
    out.grid.nodes.resize(u.grid.size());
    out.grid.focus = u.grid.focus > 0.0 ? u.grid.focus / tau : 0.0;
    out.values.resize(u.grid.size());
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
        out.grid.nodes[i] = u.grid.nodes[i] / tau;
        out.values[i] = zeta * u.values[i];
    }
    return out;
}

/// Resamples a profile onto a target grid by nodal evaluation.  Values below
/// the source cap radius extend the cap; values beyond the source support are
/// zero.
inline RadialProfile resample(const RadialProfile& u, const RadialGrid& grid) {
    RadialProfile out;
    out.grid = grid;
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.values[i] = u.value_at(grid.nodes[i]);
    }
    out.values.back() = 0.0;
    return out;
}

/// Bi-normalization v(r) = u(tau r)/||u'|| with tau = (||u||_p^p/||u'||_p^p)^{1/(theta+1)}:
/// both the gradient norm and the L^p_theta norm of v equal one.  In the
/// borderline regime the tau part leaves the gradient norm and the subcritical
/// objective invariant; the 1/||u'|| part never decreases the objective for
/// admissible u.
inline RadialProfile normalize_subcritical(const RadialProfile& u, const WeightParams& wp) {
    if (u.is_zero()) throw DomainError("normalize_subcritical: zero profile");
    const double gp = grad_norm_pow_p(u, wp);
    if (!(gp > 0.0)) throw DomainError("normalize_subcritical: profile has zero gradient norm");
    const double lp = norm_lq_theta(u, wp.p, wp.theta);
    const double tau = std::pow(std::pow(lp, wp.p) / gp, 1.0 / (wp.theta + 1.0));
    return rescale(u, 1.0 / std::pow(gp, 1.0 / wp.p), tau);
}

/// Boundary map w(r) = u(tau r)/||u'|| with tau = ((1-||u'||^p)/||u'||^p)^{1/(theta+1)}:
/// ||w'|| = 1 and ||w||_p^p = ||u||_p^p / (1-||u'||^p).  Defined for
/// 0 < ||u'|| < 1 only.
inline RadialProfile to_critical_boundary(const RadialProfile& u, const WeightParams& wp) {
    const double gp = grad_norm_pow_p(u, wp);
    if (!(gp > 0.0)) throw DomainError("to_critical_boundary: zero gradient norm");
    if (gp >= 1.0) {
        throw DomainError("to_critical_boundary: requires ||u'||^p < 1, got " +
                          std::to_string(gp));
    }
    const double tau = std::pow((1.0 - gp) / gp, 1.0 / (wp.theta + 1.0));
    return rescale(u, std::pow(gp, -1.0 / wp.p), tau);
}

} // namespace tmfrac
