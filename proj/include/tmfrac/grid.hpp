#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tmfrac/errors.hpp"

namespace tmfrac {

/// Strictly increasing node set on (0, r_max]; profiles vanish at and beyond
/// the last node.  Nodes are log-spaced so that concentration near the origin
/// is resolved on exponential scales; `focus` records the radius around which
/// extra refinement nodes were packed (0 when none).
struct RadialGrid {
    std::vector<double> nodes;
    double focus = 0.0;

    double r_min() const { return nodes.front(); }
    double r_max() const { return nodes.back(); }
    std::size_t size() const { return nodes.size(); }

    void validate() const {
        if (nodes.size() < 16) {
            throw DomainError("RadialGrid: need at least 16 nodes, got " +
                              std::to_string(nodes.size()));
        }
        if (!(nodes.front() > 0.0)) {
            throw DomainError("RadialGrid: first node must be positive");
        }
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i])) {
                throw DomainError("RadialGrid: nodes must be finite and strictly increasing");
            }
        }
    }
};

/// Log-uniform grid with n nodes from r_min to r_max inclusive.
inline RadialGrid log_uniform_grid(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw DomainError("log_uniform_grid: requires 0 < r_min < r_max");
    }
    if (n < 16) {
        throw DomainError("log_uniform_grid: requires n >= 16");
    }
    RadialGrid g;
    g.nodes.resize(n);
    const double s0 = std::log(r_min);
    const double s1 = std::log(r_max);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n - 1);
        g.nodes[i] = std::exp(s);
    }
    g.nodes.front() = r_min;
    g.nodes.back() = r_max;
    return g;
}

namespace detail {

inline void insert_node(std::vector<double>& nodes, double r) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), r);
    if (it != nodes.end() && std::abs(*it - r) <= 1e-14 * r) {
        *it = r;
        return;
    }
    if (it != nodes.begin() && std::abs(*(it - 1) - r) <= 1e-14 * r) {
        *(it - 1) = r;
        return;
    }
    nodes.insert(it, r);
}

} // namespace detail

/// Default working grid: log-spaced nodes from r_min to r_max.  When a
/// concentration focus is given (e.g. the knee radius of a declared family
/// index), extra nodes are packed below it so the flat cap boundary and the
/// decay just above it sit on grid nodes.
inline RadialGrid make_grid(std::size_t n_nodes = 512, double r_min = 1e-10,
                            double r_max = 10.0, double focus = 0.0,
                            std::size_t n_focus = 128) {
    double lo = r_min;
    if (focus > 0.0 && focus < r_min * 64.0) {
        lo = focus * std::exp(-3.0);
    }
    RadialGrid g = log_uniform_grid(lo, r_max, n_nodes);
    if (focus > 0.0 && focus < r_max) {
        g.focus = focus;
        detail::insert_node(g.nodes, focus);
        const double s_hi = std::log(focus);
        const double s_lo = s_hi - 3.0;
        for (std::size_t i = 0; i + 1 < n_focus; ++i) {
            const double s = s_lo + (s_hi - s_lo) * static_cast<double>(i) /
                                        static_cast<double>(n_focus - 1);
            detail::insert_node(g.nodes, std::exp(s));
        }
        // unit radius is a support endpoint for the concentration families
        if (r_max > 1.0) detail::insert_node(g.nodes, 1.0);
    }
    g.validate();
    return g;
}

/// Grid tailored to a target log-step ds over [s_lo, s_hi] in s = ln r, with a
/// coarse tail up to r_max.  Used where norms of sampled profiles must match
/// closed forms to tight tolerance.
inline RadialGrid dense_log_grid(double r_lo, double r_hi, double ds, double r_max) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || !(ds > 0.0)) {
        throw DomainError("dense_log_grid: bad arguments");
    }
    const double span = std::log(r_hi / r_lo);
    const std::size_t n = std::max<std::size_t>(16, static_cast<std::size_t>(span / ds) + 2);
    RadialGrid g = log_uniform_grid(r_lo, r_hi, n);
    if (r_max > r_hi) {
        const std::size_t tail = 32;
        const double s0 = std::log(r_hi);
        const double s1 = std::log(r_max);
        for (std::size_t i = 1; i <= tail; ++i) {
            g.nodes.push_back(std::exp(s0 + (s1 - s0) * static_cast<double>(i) /
                                                static_cast<double>(tail)));
        }
        g.nodes.back() = r_max;
    }
    g.validate();
    return g;
}

} // namespace tmfrac
