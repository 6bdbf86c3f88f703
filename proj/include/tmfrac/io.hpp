#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "tmfrac/optimize.hpp"

#include <json.hpp>

namespace tmfrac {

/// 17 significant digits: exact decimal round-trip for doubles.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "mu_frac,mu,estimate,normalized_product,converged\n";
    for (const SweepRow& r : rows) {
        os << fmt17(r.mu_frac) << ',' << fmt17(r.mu) << ',' << fmt17(r.estimate) << ','
           << fmt17(r.normalized_product) << ',' << (r.converged ? 1 : 0) << '\n';
    }
}

inline void write_probe_csv(std::ostream& os, const ProbeReport& rep) {
    os << "sigma_frac,sigma,tmc_estimate,gap,nu\n";
    for (const ProbeRow& r : rep.rows) {
        os << fmt17(r.sigma_frac) << ',' << fmt17(r.sigma) << ',' << fmt17(r.tmc_estimate)
           << ',' << fmt17(r.gap) << ',' << fmt17(r.nu) << '\n';
    }
}

inline void write_identity_csv(std::ostream& os, double sigma,
                               const std::vector<IdentityRow>& rows) {
    os << "mu_frac,mu,ratio,tmsc_estimate,transformed_value,converged\n";
    for (const IdentityRow& r : rows) {
        os << fmt17(r.mu / sigma) << ',' << fmt17(r.mu) << ',' << fmt17(r.ratio) << ','
           << fmt17(r.tmsc_value) << ',' << fmt17(r.transformed_value) << ','
           << (r.converged ? 1 : 0) << '\n';
    }
}

inline nlohmann::ordered_json profile_to_json(const RadialProfile& u,
                                              const WeightParams& wp) {
    nlohmann::ordered_json j;
    j["p"] = wp.p;
    j["alpha"] = wp.alpha;
    j["theta"] = wp.theta;
    j["r_max"] = u.grid.r_max();
    j["nodes"] = u.grid.nodes;
    j["values"] = u.values;
    return j;
}

inline nlohmann::ordered_json estimate_to_json(const SupremumEstimate& est,
                                               const WeightParams& wp) {
    nlohmann::ordered_json j;
    j["kind"] = est.kind == SupKind::subcritical ? "subcritical" : "critical";
    j["mu_or_sigma"] = est.mu_or_sigma;
    j["value"] = est.value;
    j["log_value"] = est.log_value;
    j["overflowed"] = est.overflowed;
    j["converged"] = est.converged;
    j["resolution_limited"] = est.resolution_limited;
    j["iterations_used"] = est.iterations_used;
    j["constraint_residual"] = est.constraint_residual;
    j["certified_rel_error"] = est.certified_rel_error;
    j["profile"] = profile_to_json(est.argmax, wp);
    return j;
}

} // namespace tmfrac
