#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "tmfrac/errors.hpp"
#include "tmfrac/gamma.hpp"

namespace tmfrac {

/// Fractional spherical volume coefficient omega_theta = 2 pi^((theta+1)/2) / Gamma((theta+1)/2).
/// For integer theta this is the surface coefficient of the radial volume element of R^(theta+1).
inline double omega(double theta) {
    if (!(theta >= 0.0)) {
        throw DomainError("omega: requires theta >= 0, got theta=" + std::to_string(theta));
    }
    const double a = 0.5 * (theta + 1.0);
    return 2.0 * std::exp(a * std::log(std::numbers::pi) - log_gamma(a));
}

/// Sharp exponent mu_{alpha,theta} = (theta+1) omega_alpha^(1/alpha).
inline double mu_star(double alpha, double theta) {
    if (!(alpha >= 1.0)) {
        throw DomainError("mu_star: requires alpha >= 1");
    }
    return (theta + 1.0) * std::pow(omega(alpha), 1.0 / alpha);
}

/// Weighted ball volume |B_R|_theta = omega_theta R^(theta+1) / (theta+1).
inline double ball_volume(double radius, double theta) {
    return omega(theta) * std::pow(radius, theta + 1.0) / (theta + 1.0);
}

/// Parameter bundle for the borderline regime alpha = p - 1.
///
/// k0 is the smallest integer >= p-1: the number of Taylor terms removed from
/// the exponential so that the associated integral is finite on (0, infinity).
struct WeightParams {
    double p;
    double alpha;
    double theta;
    int k0;
    double mu_star_value;

    // Only the borderline regime alpha = p-1 is admitted; other weight
    // combinations fall under the embedding-dominated regime this toolkit
    // does not model.
    static WeightParams trudinger_moser(double p, double theta) {
        if (!(p >= 2.0)) {
            throw DomainError("WeightParams: requires p >= 2, got p=" + std::to_string(p));
        }
        if (!(theta >= 0.0)) {
            throw DomainError("WeightParams: requires theta >= 0, got theta=" +
                              std::to_string(theta));
        }
        WeightParams wp;
        wp.p = p;
        wp.alpha = p - 1.0;
        wp.theta = theta;
        wp.k0 = static_cast<int>(std::ceil(p - 1.0 - 1e-12));
        wp.mu_star_value = mu_star(wp.alpha, theta);
        return wp;
    }

    /// Conjugate exponent p/(p-1) used inside the exponential integrand.
    double conj_exp() const { return p / (p - 1.0); }

    /// True when k0 equals p-1, i.e. p-1 is an integer.
    bool k0_matches_p_minus_1() const {
        return std::abs(p - 1.0 - static_cast<double>(k0)) < 1e-12;
    }
};

} // namespace tmfrac
