#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tmfrac/errors.hpp"
#include "tmfrac/grid.hpp"
#include "tmfrac/measure.hpp"

namespace tmfrac {

/// Non-increasing, nonnegative piecewise-linear radial function with compact
/// support inside (0, r_max].  On (0, nodes[0]] the profile takes the constant
/// value values[0] (the cap); at and beyond the last node it vanishes.
struct RadialProfile {
    RadialGrid grid;
    std::vector<double> values;

    double left_cap() const { return values.front(); }

    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    }

    double value_at(double r) const {
        const auto& x = grid.nodes;
        if (r <= x.front()) return values.front();
        if (r >= x.back()) return 0.0;
        const auto it = std::upper_bound(x.begin(), x.end(), r);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double w = (r - x[i]) / (x[i + 1] - x[i]);
        return values[i] + w * (values[i + 1] - values[i]);
    }

    void validate(double tol = 0.0) const {
        grid.validate();
        if (values.size() != grid.size()) {
            throw DomainError("RadialProfile: values/nodes size mismatch");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i]) || values[i] < -tol) {
                throw DomainError("RadialProfile: values must be finite and nonnegative");
            }
            if (i > 0 && values[i] > values[i - 1] + tol) {
                throw DomainError("RadialProfile: values must be non-increasing");
            }
        }
        if (std::abs(values.back()) > tol) {
            throw DomainError("RadialProfile: profile must vanish at the last node");
        }
    }
};

/// Euclidean projection of a sequence onto the non-increasing cone
/// (pool-adjacent-violators), followed by clamping to [0, inf).
inline void project_monotone(std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return;
    std::vector<double> mean(n);
    std::vector<std::size_t> count(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean[m] = v[i];
        count[m] = 1;
        while (m > 0 && mean[m] > mean[m - 1]) {
            const double tot = mean[m - 1] * static_cast<double>(count[m - 1]) +
                               mean[m] * static_cast<double>(count[m]);
            count[m - 1] += count[m];
            mean[m - 1] = tot / static_cast<double>(count[m - 1]);
            --m;
        }
        ++m;
    }
    std::size_t k = 0;
    for (std::size_t b = 0; b < m; ++b) {
        const double val = std::max(0.0, mean[b]);
        for (std::size_t c = 0; c < count[b]; ++c) v[k++] = val;
    }
}

/// Columnar text serialization: one header line carrying p, alpha, theta and
/// r_max, then "radius value" rows.  All numbers print with 17 significant
/// digits so the decimal round-trip is exact.
inline void write_profile(std::ostream& os, const RadialProfile& u, const WeightParams& wp) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# p=%.17g alpha=%.17g theta=%.17g r_max=%.17g\n", wp.p,
                  wp.alpha, wp.theta, u.grid.r_max());
    os << buf;
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", u.grid.nodes[i], u.values[i]);
        os << buf;
    }
}

struct ProfileFile {
    RadialProfile profile;
    double p = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
};

inline ProfileFile read_profile(std::istream& is) {
    ProfileFile pf;
    std::string header;
    if (!std::getline(is, header)) {
        throw EvaluationError("read_profile: empty stream");
    }
    if (std::sscanf(header.c_str(), "# p=%lg alpha=%lg theta=%lg", &pf.p, &pf.alpha,
                    &pf.theta) != 3) {
        throw EvaluationError("read_profile: malformed header: " + header);
    }
    double r = 0.0;
    double v = 0.0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (std::sscanf(line.c_str(), "%lg %lg", &r, &v) != 2) {
            throw EvaluationError("read_profile: malformed row: " + line);
        }
        pf.profile.grid.nodes.push_back(r);
        pf.profile.values.push_back(v);
    }
    pf.profile.validate(1e-15);
    return pf;
}

} // namespace tmfrac
