#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tmfrac/errors.hpp"
#include "tmfrac/families.hpp"
#include "tmfrac/functionals.hpp"
#include "tmfrac/grid.hpp"
#include "tmfrac/measure.hpp"
#include "tmfrac/profile.hpp"
#include "tmfrac/quadrature.hpp"
#include "tmfrac/transforms.hpp"

namespace tmfrac {

struct OptimizerConfig {
    int max_iters = 2000;
    double step_init = 0.2;
    double step_shrink = 0.5;
    double tol_obj = 1e-9;
    int restarts = 4;
    std::vector<TestFamilySpec> seed_families;
    RadialGrid grid;
    std::uint64_t rng_seed = 0;
    int panel_order = 8;
    int moser_n_max = 80;
    // subcritical maximizers transformed onto the critical ball, as fractions
    // of sigma; used by maximize_tmc only
    std::vector<double> identity_seed_fracs = {0.35, 0.5, 0.65, 0.8};

    static OptimizerConfig defaults(std::size_t nodes = 512, double r_min = 1e-10,
                                    double r_max = 10.0) {
        OptimizerConfig cfg;
        cfg.grid = log_uniform_grid(r_min, r_max, nodes);
        return cfg;
    }

    void validate() const {
        if (max_iters < 1) throw DomainError("OptimizerConfig: max_iters must be >= 1");
        if (restarts < 1) throw DomainError("OptimizerConfig: restarts must be >= 1");
        if (!(tol_obj > 0.0)) throw DomainError("OptimizerConfig: tol_obj must be positive");
        if (!(step_init > 0.0) || !(step_shrink > 0.0) || !(step_shrink < 1.0)) {
            throw DomainError("OptimizerConfig: bad step control parameters");
        }
        grid.validate();
    }
};

struct SupremumEstimate {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    bool overflowed = false;
    RadialProfile argmax;
    double mu_or_sigma = 0.0;
    SupKind kind = SupKind::subcritical;
    int iterations_used = 0;
    bool converged = false;
    bool resolution_limited = false;
    double constraint_residual = 0.0;
    double worst_iterate_residual = 0.0;
    double certified_rel_error = 0.0;  // recheck at doubled panel order
};

namespace detail {

// Objective of the discretized problem with its active-constraint rescaling.
// Subcritical: J = tm/||u||_p^p on ||u'|| = 1.  Critical: J = tm on ||u|| = 1.
struct AscentObjective {
    WeightParams wp;
    double mu;
    SupKind kind;
    int order;

    // scales values so the active constraint is exactly one; returns false for
    // profiles that cannot be normalized (zero norm)
    bool normalize(RadialProfile& u) const {
        const double s = kind == SupKind::subcritical
                             ? norm_grad_lp_alpha(u, wp)
                             : full_norm(u, wp, order);
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        for (double& v : u.values) v /= s;
        return true;
    }

    double residual(const RadialProfile& u) const {
        const double s = kind == SupKind::subcritical
                             ? norm_grad_lp_alpha(u, wp)
                             : full_norm(u, wp, order);
        return std::abs(s - 1.0);
    }

    double eval(const RadialProfile& u) const {
        const TmIntegral tm = tm_integral(u, mu, wp, order);
        if (kind == SupKind::critical) return tm.value;
        const double lp = norm_lq_theta(u, wp.p, wp.theta, order);
        return tm.value / std::pow(lp, wp.p);
    }

    double eval_log(const RadialProfile& u) const {
        const TmIntegral tm = tm_integral(u, mu, wp, order);
        if (kind == SupKind::critical) return tm.log_value;
        const double lp = norm_lq_theta(u, wp.p, wp.theta, order);
        return tm.log_value - wp.p * std::log(lp);
    }
};

// Lumped weighted mass of every nodal hat function, used to precondition the
// nodal gradient: without it the update barely moves values on the tiny cells
// near the origin.
inline std::vector<double> lumped_mass(const RadialGrid& g, double theta, int order) {
    const GaussRule gauss(order);
    std::vector<double> m(g.size(), 0.0);
    m[0] += power_cell_integral(0.0, g.nodes[0], theta);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double h = 0.5 * (g.nodes[i + 1] - g.nodes[i]);
        const double c = 0.5 * (g.nodes[i + 1] + g.nodes[i]);
        for (std::size_t k = 0; k < gauss.x.size(); ++k) {
            const double r = c + h * gauss.x[k];
            const double w = (r - g.nodes[i]) / (g.nodes[i + 1] - g.nodes[i]);
            const double contrib = h * gauss.w[k] * std::pow(r, theta);
            m[i] += contrib * (1.0 - w);
            m[i + 1] += contrib * w;
        }
    }
    const double om = omega(theta);
    for (double& x : m) x *= om;
    return m;
}

// Nodal ascent direction: gradient of the objective projected onto the
// tangent space of the active constraint, premultiplied by the inverse lumped
// mass.  Without the tangent projection the raw gradient is dominated by the
// amplitude component that the rescaling immediately undoes, and the ascent
// stalls on its first step.  Integrand derivatives:
// d/du phi_p(mu u^c) = phi_p'(mu u^c) mu c u^{c-1}, d/du u^p = p u^{p-1}.
inline void ascent_direction(const AscentObjective& prob, const RadialProfile& u,
                             const std::vector<double>& mass, std::vector<double>& dir) {
    const auto& x = u.grid.nodes;
    const auto& v = u.values;
    const std::size_t n = x.size();
    const double ce = prob.wp.conj_exp();
    const double mu = prob.mu;
    const double p = prob.wp.p;
    const GaussRule gauss(prob.order);
    const double om_theta = omega(prob.wp.theta);
    const double om_alpha = omega(prob.wp.alpha);

    std::vector<double> gN(n, 0.0);     // exponential integral
    std::vector<double> gD(n, 0.0);     // p-th power mass
    std::vector<double> gG(n, 0.0);     // gradient seminorm^p
    double N = 0.0;
    double D = 0.0;

    auto dphi = [&](double uv) {
        const double t = mu * std::pow(uv, ce);
        return detail::phi_trunc(t, prob.wp.k0 - 1) * mu * ce * std::pow(uv, ce - 1.0);
    };

    // cap cell: u is constant v[0]
    {
        const double moment = power_cell_integral(0.0, x[0], prob.wp.theta);
        if (v[0] > 0.0) {
            N += detail::phi_trunc(mu * std::pow(v[0], ce), prob.wp.k0) * moment;
            gN[0] += dphi(v[0]) * moment;
            D += std::pow(v[0], p) * moment;
            gD[0] += p * std::pow(v[0], p - 1.0) * moment;
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dx = x[i + 1] - x[i];
        const double slope = (v[i + 1] - v[i]) / dx;
        if (slope != 0.0) {
            const double dslope = om_alpha * p * std::pow(std::abs(slope), p - 1.0) *
                                  (slope > 0.0 ? 1.0 : -1.0) *
                                  power_cell_integral(x[i], x[i + 1], prob.wp.alpha) / dx;
            gG[i] -= dslope;
            gG[i + 1] += dslope;
        }
        if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
        const double h = 0.5 * dx;
        const double c = 0.5 * (x[i + 1] + x[i]);
        for (std::size_t k = 0; k < gauss.x.size(); ++k) {
            const double r = c + h * gauss.x[k];
            const double w = (r - x[i]) / dx;
            const double uv = v[i] * (1.0 - w) + v[i + 1] * w;
            if (uv <= 0.0) continue;
            const double rw = h * gauss.w[k] * std::pow(r, prob.wp.theta);
            N += detail::phi_trunc(mu * std::pow(uv, ce), prob.wp.k0) * rw;
            const double dn = dphi(uv) * rw;
            gN[i] += dn * (1.0 - w);
            gN[i + 1] += dn * w;
            D += std::pow(uv, p) * rw;
            const double dd = p * std::pow(uv, p - 1.0) * rw;
            gD[i] += dd * (1.0 - w);
            gD[i + 1] += dd * w;
        }
    }
    N *= om_theta;
    D *= om_theta;

    // objective and active-constraint gradients
    std::vector<double> gJ(n, 0.0);
    std::vector<double> gC(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (prob.kind == SupKind::critical) {
            gJ[j] = om_theta * gN[j];
            gC[j] = om_theta * gD[j] + gG[j];
        } else {
            gJ[j] = (om_theta * gN[j] * D - N * om_theta * gD[j]) / (D * D);
            gC[j] = gG[j];
        }
    }

    // remove the constraint-normal component in the preconditioned metric
    double cross = 0.0;
    double cc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double pj = 1.0 / std::max(mass[j], 1e-300);
        cross += gC[j] * pj * gJ[j];
        cc += gC[j] * pj * gC[j];
    }
    const double lambda = cc > 0.0 ? cross / cc : 0.0;

    dir.assign(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        dir[j] = (gJ[j] - lambda * gC[j]) / std::max(mass[j], 1e-300);
    }
}

struct AscentResult {
    RadialProfile profile;
    double value = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    double worst_residual = 0.0;
};

// Projected gradient ascent: step along the preconditioned nodal gradient,
// project back onto the monotone nonnegative cone, rescale onto the active
// constraint, accept only improvements.  Backtracks on failure; a stall is
// three consecutive rounds below tol_obj relative improvement.
inline AscentResult projected_ascent(const AscentObjective& prob, RadialProfile start,
                                     const OptimizerConfig& cfg) {
    AscentResult res;
    start.values.back() = 0.0;
    project_monotone(start.values);
    if (!prob.normalize(start)) {
        res.profile = std::move(start);
        return res;
    }
    RadialProfile u = std::move(start);
    double J = prob.eval(u);
    const std::vector<double> mass = lumped_mass(u.grid, prob.wp.theta, prob.order);
    std::vector<double> grad;
    double step = cfg.step_init;
    int bad_rounds = 0;
    int iter = 0;
    res.worst_residual = prob.residual(u);

    for (; iter < cfg.max_iters; ++iter) {
        ascent_direction(prob, u, mass, grad);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (!(gmax > 0.0) || !std::isfinite(gmax)) {
            res.converged = true;
            break;
        }
        const double umax = *std::max_element(u.values.begin(), u.values.end());
        const double unit = umax / gmax;

        bool improved = false;
        double gain = 0.0;
        for (int attempt = 0; attempt < 24 && !improved; ++attempt) {
            RadialProfile trial = u;
            for (std::size_t j = 0; j < trial.values.size(); ++j) {
                trial.values[j] += step * unit * grad[j];
            }
            trial.values.back() = 0.0;
            project_monotone(trial.values);
            if (!prob.normalize(trial)) {
                step *= cfg.step_shrink;
                continue;
            }
            const double Jt = prob.eval(trial);
            if (std::isfinite(Jt) && Jt > J) {
                gain = (Jt - J) / std::max(std::abs(J), 1e-300);
                u = std::move(trial);
                J = Jt;
                improved = true;
                res.worst_residual = std::max(res.worst_residual, prob.residual(u));
                step = std::min(step * 1.4, 64.0);
            } else {
                step *= cfg.step_shrink;
            }
        }
        if (!improved || gain < cfg.tol_obj) {
            if (++bad_rounds >= 3) {
                res.converged = true;
                ++iter;
                break;
            }
        } else {
            bad_rounds = 0;
        }
    }
    res.profile = std::move(u);
    res.value = J;
    res.iterations = iter;
    if (iter >= cfg.max_iters) res.converged = false;
    return res;
}

// Deterministic monotone perturbation of a start profile for restarts.
inline RadialProfile perturb_start(const RadialProfile& u, std::uint64_t seed, int index) {
    std::mt19937_64 eng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1)));
    auto uniform = [&]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    RadialProfile out = u;
    const double umax = *std::max_element(u.values.begin(), u.values.end());
    for (std::size_t j = 0; j + 1 < out.values.size(); ++j) {
        const double relative = 1.0 + 0.35 * (2.0 * uniform() - 1.0);
        const double additive = 0.08 * umax * uniform();
        out.values[j] = std::max(0.0, out.values[j] * relative + additive);
    }
    out.values.back() = 0.0;
    project_monotone(out.values);
    return out;
}

struct SeedCandidate {
    RadialProfile profile;
    double value = -std::numeric_limits<double>::infinity();
    double log_value = -std::numeric_limits<double>::infinity();
    std::optional<int> moser_index;
};

// Line search of the concentration family in log-domain objective.
inline SeedCandidate best_moser_seed(const AscentObjective& prob, const OptimizerConfig& cfg) {
    SeedCandidate best;
    for (int n = 1; n <= cfg.moser_n_max; ++n) {
        RadialGrid g = moser_grid(n, prob.wp, 5e-3, 2.0);
        RadialProfile u = make_moser(n, prob.wp, g);
        if (prob.kind == SupKind::critical) {
            const double lp_pow =
                std::pow(norm_lq_theta(u, prob.wp.p, prob.wp.theta, prob.order), prob.wp.p);
            const double tau_n = std::pow(1.0 + lp_pow, -1.0 / prob.wp.p);
            for (double& v : u.values) v *= tau_n;
        }
        if (!prob.normalize(u)) continue;
        const double lv = prob.eval_log(u);
        if (lv > best.log_value) {
            best.log_value = lv;
            best.value = prob.eval(u);
            best.profile = u;
            best.moser_index = n;
        }
    }
    return best;
}

// Line search of the vanishing family (critical problem); t in (t_min, 0.5].
inline SeedCandidate best_ishiwata_seed(const AscentObjective& prob,
                                        const OptimizerConfig& cfg) {
    SeedCandidate best;
    const RadialProfile base = normalized_tent(prob.wp);
    const double t_floor =
        std::pow(base.grid.r_max() / cfg.grid.r_max(), prob.wp.theta + 1.0);
    const double t_min = std::min(0.4, std::max(1e-12, t_floor));
    const int steps = 48;
    for (int i = 0; i <= steps; ++i) {
        const double t = t_min * std::pow(0.5 / t_min,
                                          static_cast<double>(i) / static_cast<double>(steps));
        RadialProfile v = make_ishiwata(t, base, prob.wp);
        if (!prob.normalize(v)) continue;
        const double lv = prob.eval_log(v);
        if (lv > best.log_value) {
            best.log_value = lv;
            best.value = prob.eval(v);
            best.profile = v;
        }
    }
    return best;
}

// Caller-declared extra seeds from the config.
inline std::vector<SeedCandidate> config_seeds(const AscentObjective& prob,
                                               const OptimizerConfig& cfg) {
    std::vector<SeedCandidate> out;
    for (const TestFamilySpec& spec : cfg.seed_families) {
        spec.validate();
        SeedCandidate cand;
        if (spec.kind == FamilyKind::moser) {
            cand.profile = make_moser(spec.moser_n, prob.wp,
                                      moser_grid(spec.moser_n, prob.wp, 5e-3, 2.0));
            cand.moser_index = spec.moser_n;
        } else if (spec.kind == FamilyKind::ishiwata) {
            const RadialProfile base =
                spec.base ? *spec.base : normalized_tent(prob.wp);
            cand.profile = make_ishiwata(spec.ishiwata_t, base, prob.wp);
        } else {
            if (!spec.base) {
                throw DomainError("OptimizerConfig: custom seed family needs a base profile");
            }
            cand.profile = *spec.base;
        }
        if (!prob.normalize(cand.profile)) continue;
        cand.value = prob.eval(cand.profile);
        cand.log_value = prob.eval_log(cand.profile);
        out.push_back(std::move(cand));
    }
    return out;
}

inline SupremumEstimate finish_estimate(const AscentObjective& prob, RadialProfile argmax,
                                        double value, int iterations, bool converged,
                                        double worst_residual) {
    SupremumEstimate est;
    est.argmax = std::move(argmax);
    est.mu_or_sigma = prob.mu;
    est.kind = prob.kind;
    est.iterations_used = iterations;
    est.converged = converged;
    est.worst_iterate_residual = worst_residual;
    est.constraint_residual = prob.residual(est.argmax);
    est.value = value;
    const TmIntegral tm = tm_integral(est.argmax, prob.mu, prob.wp, prob.order);
    est.overflowed = tm.overflowed;
    est.log_value = prob.eval_log(est.argmax);

    // certification: the reported value must be reproduced by an independent
    // quadrature pass at doubled panel order
    AscentObjective fine = prob;
    fine.order = prob.order * 2;
    const double recheck = fine.eval(est.argmax);
    est.certified_rel_error =
        std::abs(recheck - value) / std::max(1e-300, std::abs(value));
    if (est.certified_rel_error > 1e-6) est.converged = false;
    return est;
}

} // namespace detail

/// Lower-bound estimate of the subcritical supremum at mu in (0, mu_star):
/// best of the seeded family line search and projected-ascent refinements,
/// certified by re-evaluation of the returned profile.
inline SupremumEstimate maximize_tmsc(double mu, const WeightParams& wp,
                                      const OptimizerConfig& cfg) {
    cfg.validate();
    if (!(mu > 0.0) || !(mu < wp.mu_star_value)) {
        throw DomainError("maximize_tmsc: requires 0 < mu < mu_star");
    }
    detail::AscentObjective prob{wp, mu, SupKind::subcritical, cfg.panel_order};

    detail::SeedCandidate moser = detail::best_moser_seed(prob, cfg);

    RadialProfile tent = normalized_tent(wp);
    prob.normalize(tent);
    const double tent_value = prob.eval(tent);

    RadialProfile best_profile = tent_value > moser.value ? tent : moser.profile;
    double best_value = std::max(tent_value, moser.value);
    for (detail::SeedCandidate& cand : detail::config_seeds(prob, cfg)) {
        if (cand.value > best_value) {
            best_value = cand.value;
            best_profile = std::move(cand.profile);
        }
    }

    // ascent runs on the working grid, refocused below the winning knee so the
    // cap stays resolved
    RadialGrid ascent_grid =
        moser.moser_index && moser.value >= tent_value
            ? make_grid(cfg.grid.size(), cfg.grid.r_min(), cfg.grid.r_max(),
                        moser_knee(*moser.moser_index, wp))
            : cfg.grid;
    RadialProfile start = resample(best_profile, ascent_grid);

    int iterations = 0;
    bool converged = true;
    double worst_residual = 0.0;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        RadialProfile s0 = restart == 0
                               ? start
                               : detail::perturb_start(start, cfg.rng_seed, restart);
        detail::AscentResult asc = detail::projected_ascent(prob, std::move(s0), cfg);
        iterations += asc.iterations;
        converged = converged && asc.converged;
        worst_residual = std::max(worst_residual, asc.worst_residual);
        if (asc.value > best_value ||
            (asc.value >= best_value * (1.0 - cfg.tol_obj) &&
             prob.residual(asc.profile) < prob.residual(best_profile))) {
            best_value = std::max(best_value, asc.value);
            best_profile = asc.profile;
        }
    }

    return detail::finish_estimate(prob, std::move(best_profile), best_value,
                                   iterations, converged, worst_residual);
}

/// Lower-bound estimate of the critical supremum at sigma in (0, mu_star]:
/// seeds cover both the concentration and the vanishing regime plus
/// subcritical maximizers mapped onto the unit ball; refined by ascent.
inline SupremumEstimate maximize_tmc(double sigma, const WeightParams& wp,
                                     const OptimizerConfig& cfg) {
    cfg.validate();
    if (!(sigma > 0.0) || !(sigma <= wp.mu_star_value)) {
        throw DomainError("maximize_tmc: requires 0 < sigma <= mu_star");
    }
    detail::AscentObjective prob{wp, sigma, SupKind::critical, cfg.panel_order};

    detail::SeedCandidate moser = detail::best_moser_seed(prob, cfg);
    detail::SeedCandidate ishi = detail::best_ishiwata_seed(prob, cfg);

    RadialProfile best_profile =
        ishi.value > moser.value ? ishi.profile : moser.profile;
    double best_value = std::max(ishi.value, moser.value);
    for (detail::SeedCandidate& cand : detail::config_seeds(prob, cfg)) {
        if (cand.value > best_value) {
            best_value = cand.value;
            best_profile = std::move(cand.profile);
        }
    }

    // subcritical argmax transported onto the unit sphere by the equivalence
    // map u_t(r) = (mu/sigma)^{(p-1)/p} u(t r)
    OptimizerConfig inner = cfg;
    inner.restarts = 1;
    inner.identity_seed_fracs.clear();
    for (double frac : cfg.identity_seed_fracs) {
        const double mu = frac * sigma;
        if (!(mu > 0.0) || !(mu < wp.mu_star_value) || !(mu < sigma)) continue;
        SupremumEstimate sub = maximize_tmsc(mu, wp, inner);
        RadialProfile u = normalize_subcritical(sub.argmax, wp);
        const double rho = std::pow(mu / sigma, wp.p - 1.0);
        const double t = std::pow(rho / (1.0 - rho), 1.0 / (wp.theta + 1.0));
        RadialProfile ut = rescale(u, std::pow(mu / sigma, (wp.p - 1.0) / wp.p), t);
        if (!prob.normalize(ut)) continue;
        const double val = prob.eval(ut);
        if (val > best_value) {
            best_value = val;
            best_profile = ut;
        }
    }

    RadialGrid ascent_grid =
        moser.moser_index && moser.value >= best_value
            ? make_grid(cfg.grid.size(), cfg.grid.r_min(), cfg.grid.r_max(),
                        moser_knee(*moser.moser_index, wp))
            : cfg.grid;
    RadialProfile start = resample(best_profile, ascent_grid);

    int iterations = 0;
    bool converged = true;
    double worst_residual = 0.0;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        RadialProfile s0 = restart == 0
                               ? start
                               : detail::perturb_start(start, cfg.rng_seed, restart);
        detail::AscentResult asc = detail::projected_ascent(prob, std::move(s0), cfg);
        iterations += asc.iterations;
        converged = converged && asc.converged;
        worst_residual = std::max(worst_residual, asc.worst_residual);
        if (asc.value > best_value ||
            (asc.value >= best_value * (1.0 - cfg.tol_obj) &&
             prob.residual(asc.profile) < prob.residual(best_profile))) {
            best_value = std::max(best_value, asc.value);
            best_profile = asc.profile;
        }
    }

    SupremumEstimate est = detail::finish_estimate(prob, std::move(best_profile), best_value,
                                                   iterations, converged, worst_residual);
    if (sigma >= wp.mu_star_value * (1.0 - 1e-12)) {
        // maximizing sequences may concentrate beyond any fixed grid here
        est.resolution_limited = true;
    }
    return est;
}

struct IdentityRow {
    double mu = 0.0;
    double ratio = 0.0;
    double tmsc_value = 0.0;
    double transformed_value = 0.0;
    double grad_pow_p = 0.0;
    double lp_pow_p = 0.0;
    bool converged = false;
};

struct IdentityEstimate {
    SupremumEstimate estimate;
    std::vector<IdentityRow> rows;
};

/// Critical estimate assembled from subcritical runs through the equivalence
/// transform: each subcritical argmax is bi-normalized, mapped by
/// u_t(r) = (mu/sigma)^{(p-1)/p} u(t r), checked to land on the unit sphere,
/// and evaluated at sigma; the best value over the mu grid is returned.
inline IdentityEstimate tmc_via_identity_detailed(double sigma, const WeightParams& wp,
                                                  const std::vector<double>& mu_grid,
                                                  const OptimizerConfig& cfg) {
    cfg.validate();
    if (mu_grid.empty()) throw DomainError("tmc_via_identity: empty mu grid");
    if (!(sigma > 0.0) || !(sigma <= wp.mu_star_value)) {
        throw DomainError("tmc_via_identity: requires 0 < sigma <= mu_star");
    }
    detail::AscentObjective prob{wp, sigma, SupKind::critical, cfg.panel_order};

    IdentityEstimate out;
    RadialProfile best_profile;
    double best_value = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = true;

    for (double mu : mu_grid) {
        if (!(mu > 0.0) || !(mu < sigma)) {
            throw DomainError("tmc_via_identity: mu grid must lie strictly inside (0, sigma)");
        }
        SupremumEstimate sub = maximize_tmsc(mu, wp, cfg);
        iterations += sub.iterations_used;
        converged = converged && sub.converged;

        RadialProfile u = normalize_subcritical(sub.argmax, wp);
        const double rho = std::pow(mu / sigma, wp.p - 1.0);
        const double t = std::pow(rho / (1.0 - rho), 1.0 / (wp.theta + 1.0));
        RadialProfile ut = rescale(u, std::pow(mu / sigma, (wp.p - 1.0) / wp.p), t);

        IdentityRow row;
        row.mu = mu;
        row.ratio = identity_ratio(mu, sigma, wp);
        row.tmsc_value = sub.value;
        row.grad_pow_p = grad_norm_pow_p(ut, wp);
        row.lp_pow_p = std::pow(norm_lq_theta(ut, wp.p, wp.theta, cfg.panel_order), wp.p);
        row.converged = sub.converged;
        const double ball = row.grad_pow_p + row.lp_pow_p;
        if (std::abs(row.grad_pow_p - rho) > 1e-6 || std::abs(ball - 1.0) > 1e-6) {
            throw ConstraintError("tmc_via_identity: transformed profile missed the unit "
                                  "sphere, |norm^p - 1| = " +
                                  std::to_string(std::abs(ball - 1.0)));
        }
        row.transformed_value = critical_objective(ut, sigma, wp, cfg.panel_order);
        out.rows.push_back(row);

        if (row.transformed_value > best_value) {
            best_value = row.transformed_value;
            best_profile = std::move(ut);
        }
    }

    out.estimate = detail::finish_estimate(prob, std::move(best_profile), best_value,
                                           iterations, converged, 0.0);
    return out;
}

inline SupremumEstimate tmc_via_identity(double sigma, const WeightParams& wp,
                                         const std::vector<double>& mu_grid,
                                         const OptimizerConfig& cfg) {
    return tmc_via_identity_detailed(sigma, wp, mu_grid, cfg).estimate;
}

struct SweepRow {
    double mu_frac = 0.0;
    double mu = 0.0;
    double estimate = 0.0;
    double normalized_product = 0.0;
    bool converged = false;
};

/// Subcritical sweep over fractions of the sharp constant.  The normalized
/// product column estimate * (1 - (mu/mu_star)^{p-1}) is the empirical
/// asymptotic band.
inline std::vector<SweepRow> sweep_subcritical(const std::vector<double>& mu_fracs,
                                               const WeightParams& wp,
                                               const OptimizerConfig& cfg) {
    std::vector<SweepRow> rows;
    for (double f : mu_fracs) {
        if (!(f > 0.0) || !(f < 1.0)) {
            throw DomainError("sweep_subcritical: fractions must lie in (0,1)");
        }
        const double mu = f * wp.mu_star_value;
        SupremumEstimate est = maximize_tmsc(mu, wp, cfg);
        SweepRow row;
        row.mu_frac = f;
        row.mu = mu;
        row.estimate = est.value;
        row.normalized_product = est.value * (1.0 - std::pow(f, wp.p - 1.0));
        row.converged = est.converged;
        rows.push_back(row);
    }
    return rows;
}

struct ProbeRow {
    double sigma_frac = 0.0;
    double sigma = 0.0;
    double tmc_estimate = 0.0;
    double gap = 0.0;
    double nu = 0.0;
    bool converged = false;
};

struct ProbeReport {
    std::vector<ProbeRow> rows;
    std::optional<double> sigma_star_upper;  // smallest flagged sigma, if any
    bool nu_monotone = true;
    std::string caveat;
};

/// Probe of the attainment threshold in the k0 = p-1 regime: per-sigma
/// estimates, the gap against sigma^{p-1}/(p-1)!, and the normalized value
/// nu(sigma).  Estimates are pooled across the grid (every candidate profile
/// is re-evaluated at every sigma), which both sharpens the lower bounds and
/// makes nu monotone whenever the pointwise sigma-monotonicity holds.
inline ProbeReport sigma_star_probe(const WeightParams& wp,
                                    const std::vector<double>& sigma_grid,
                                    const OptimizerConfig& cfg) {
    if (!wp.k0_matches_p_minus_1()) {
        throw RegimeError("sigma_star_probe: requires integer p-1 (k0 = p-1), got p=" +
                          std::to_string(wp.p));
    }
    cfg.validate();
    double fact = 1.0;
    for (int k = 2; k <= wp.k0; ++k) fact *= static_cast<double>(k);

    std::vector<SupremumEstimate> runs;
    for (double sigma : sigma_grid) {
        if (!(sigma > 0.0) || !(sigma < wp.mu_star_value)) {
            throw DomainError("sigma_star_probe: grid must lie inside (0, mu_star)");
        }
        runs.push_back(maximize_tmc(sigma, wp, cfg));
    }

    ProbeReport rep;
    double prev_nu = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const double sigma = sigma_grid[i];
        double value = runs[i].value;
        for (const SupremumEstimate& other : runs) {
            value = std::max(value,
                             critical_objective(other.argmax, sigma, wp, cfg.panel_order));
        }
        const double target = std::pow(sigma, wp.p - 1.0) / fact;
        ProbeRow row;
        row.sigma_frac = sigma / wp.mu_star_value;
        row.sigma = sigma;
        row.tmc_estimate = value;
        row.gap = value - target;
        row.nu = value / target;
        row.converged = runs[i].converged;
        rep.rows.push_back(row);

        const double tol_res = 1e-6 * (1.0 + target);
        if (row.gap > tol_res && !rep.sigma_star_upper) rep.sigma_star_upper = sigma;
        if (row.nu < prev_nu - 1e-6) rep.nu_monotone = false;
        prev_nu = row.nu;
    }
    rep.caveat = rep.sigma_star_upper
                     ? "threshold bracket is an upper bound at this grid resolution only"
                     : "no gap beyond resolution tolerance on this grid; the threshold "
                       "lies above the largest probed sigma at this resolution";
    return rep;
}

} // namespace tmfrac
