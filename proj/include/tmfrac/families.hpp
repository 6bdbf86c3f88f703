#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "tmfrac/errors.hpp"
#include "tmfrac/grid.hpp"
#include "tmfrac/measure.hpp"
#include "tmfrac/profile.hpp"
#include "tmfrac/quadrature.hpp"

namespace tmfrac {

enum class FamilyKind { moser, ishiwata, custom };

struct TestFamilySpec {
    FamilyKind kind = FamilyKind::moser;
    int moser_n = 1;          // moser: integer index >= 1
    double ishiwata_t = 0.5;  // ishiwata: t in (0,1)
    std::optional<RadialProfile> base;

    void validate() const {
        if (kind == FamilyKind::moser && moser_n < 1) {
            throw DomainError("TestFamilySpec: moser index must be >= 1");
        }
        if (kind == FamilyKind::ishiwata &&
            !(ishiwata_t > 0.0 && ishiwata_t < 1.0)) {
            throw DomainError("TestFamilySpec: ishiwata t must lie in (0,1)");
        }
    }
};

/// Radius where the concentration profile switches from its flat cap to the
/// logarithmic decay: exp(-n / (theta+1)).
inline double moser_knee(int n, const WeightParams& wp) {
    return std::exp(-static_cast<double>(n) / (wp.theta + 1.0));
}

/// Cap value omega_alpha^{-1/p} (n/(theta+1))^{(p-1)/p}.
inline double moser_cap(int n, const WeightParams& wp) {
    const double m = static_cast<double>(n) / (wp.theta + 1.0);
    return std::pow(omega(wp.alpha), -1.0 / wp.p) * std::pow(m, (wp.p - 1.0) / wp.p);
}

/// Exact value of the concentration profile at radius r.
inline double moser_value(double r, int n, const WeightParams& wp) {
    if (r <= moser_knee(n, wp)) return moser_cap(n, wp);
    if (r >= 1.0) return 0.0;
    const double m = static_cast<double>(n) / (wp.theta + 1.0);
    return std::pow(omega(wp.alpha), -1.0 / wp.p) * std::pow(m, -1.0 / wp.p) *
           std::log(1.0 / r);
}

/// Samples the concentration sequence member u_n on the given grid.  The grid
/// must put at least 8 nodes at or below the knee so the cap is represented,
/// and must reach past the unit radius where the profile's support ends.
inline RadialProfile make_moser(int n, const WeightParams& wp, const RadialGrid& grid) {
    if (n < 1) throw DomainError("make_moser: index must be >= 1");
    grid.validate();
    if (grid.r_max() < 1.0) {
        throw ResolutionError("make_moser: grid r_max must be >= 1, got " +
                              std::to_string(grid.r_max()));
    }
    const double knee = moser_knee(n, wp);
    std::size_t below = 0;
    for (double r : grid.nodes) {
        if (r <= knee * (1.0 + 1e-12)) ++below;
    }
    if (below < 8) {
        throw ResolutionError("make_moser: need at least 8 grid nodes at or below the knee r=" +
                              std::to_string(knee) + ", grid has " + std::to_string(below));
    }
    RadialProfile u;
    u.grid = grid;
    u.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        u.values[i] = moser_value(grid.nodes[i], n, wp);
    }
    u.values.back() = 0.0;
    return u;
}

/// Grid adequate for sampling u_n: log-uniform across the decay segment
/// [knee, 1] with step ds, focus nodes below the knee, node at the unit
/// radius, coarse tail to r_max.
inline RadialGrid moser_grid(int n, const WeightParams& wp, double ds = 5e-3,
                             double r_max = 10.0) {
    const double knee = moser_knee(n, wp);
    RadialGrid g = dense_log_grid(knee, 1.0, ds, r_max);
    g.focus = knee;
    const double s_hi = std::log(knee);
    for (int i = 1; i <= 12; ++i) {
        detail::insert_node(g.nodes, std::exp(s_hi - 0.25 * static_cast<double>(i)));
    }
    g.validate();
    return g;
}

/// Vanishing family v_t = xi_t t^{1/p} base(t^{1/(theta+1)} r) built from a
/// base profile with unit full norm.  The transform is applied as an exact
/// node remap, so the norm identities hold to rounding error and
/// ||v_t|| = 1 follows from the measured norms of the base.
inline RadialProfile make_ishiwata(double t, const RadialProfile& base,
                                   const WeightParams& wp) {
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("make_ishiwata: t must lie in (0,1), got t=" + std::to_string(t));
    }
    const double base_norm = full_norm(base, wp);
    if (std::abs(base_norm - 1.0) > 1e-8) {
        throw DomainError("make_ishiwata: base must have unit full norm, got " +
                          std::to_string(base_norm));
    }
    const double lp = norm_lq_theta(base, wp.p, wp.theta);
    const double xi =
        std::pow(t + (1.0 - t) * std::pow(lp, wp.p), -1.0 / wp.p);
    const double zeta = xi * std::pow(t, 1.0 / wp.p);
    const double tau = std::pow(t, 1.0 / (wp.theta + 1.0));
    RadialProfile v;
    v.grid.nodes.resize(base.grid.size());
    v.grid.focus = base.grid.focus > 0.0 ? base.grid.focus / tau : 0.0;
    v.values.resize(base.grid.size());
    for (std::size_t i = 0; i < base.grid.size(); ++i) {
        v.grid.nodes[i] = base.grid.nodes[i] / tau;
        v.values[i] = zeta * base.values[i];
    }
    return v;
}

/// Tent profile max(1-r, 0) sampled on a grid containing the unit radius,
/// scaled to unit full norm.  Standard base for the vanishing family.
inline RadialProfile normalized_tent(const WeightParams& wp, std::size_t n_nodes = 257,
                                     double r_min = 1e-6) {
    RadialGrid g = log_uniform_grid(r_min, 1.0, n_nodes);
    RadialProfile u;
    u.grid = g;
    u.values.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        u.values[i] = std::max(0.0, 1.0 - g.nodes[i]);
    }
    u.values.back() = 0.0;
    const double s = full_norm(u, wp);
    for (double& v : u.values) v /= s;
    return u;
}

} // namespace tmfrac
