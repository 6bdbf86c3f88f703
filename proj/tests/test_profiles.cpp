#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "tmfrac/families.hpp"
#include "tmfrac/functionals.hpp"
#include "tmfrac/profile.hpp"
#include "tmfrac/quadrature.hpp"
#include "tmfrac/transforms.hpp"
#include "test_helpers.hpp"

using namespace tmfrac;
namespace tn = std::numbers;

TEST_CASE("grid construction and validation") {
    RadialGrid g = log_uniform_grid(1e-10, 10.0, 512);
    g.validate();
    CHECK(g.r_min() == 1e-10);
    CHECK(g.r_max() == 10.0);
    CHECK(g.size() == 512);

    CHECK_THROWS_AS(log_uniform_grid(0.0, 1.0, 64), DomainError);
    CHECK_THROWS_AS(log_uniform_grid(1.0, 0.5, 64), DomainError);
    CHECK_THROWS_AS(log_uniform_grid(1e-3, 1.0, 8), DomainError);

    RadialGrid focused = make_grid(512, 1e-10, 10.0, std::exp(-5.0), 128);
    std::size_t below = 0;
    for (double r : focused.nodes) {
        if (r <= std::exp(-5.0)) ++below;
    }
    CHECK(below >= 100);
}

TEST_CASE("profile evaluation and validation") {
    RadialProfile u;
    u.grid.nodes = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2, 1.4,
                    1.6, 1.8, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0};
    u.values = {8, 8, 8, 8, 8, 8, 6, 6, 5, 4, 3, 2, 1.5, 1.0, 0.5, 0.0};
    u.validate();

    CHECK(u.left_cap() == 8.0);
    CHECK(u.value_at(0.01) == 8.0);
    CHECK(u.value_at(1.1) == Catch::Approx(7.0));
    CHECK(u.value_at(5.0) == 0.0);
    CHECK_FALSE(u.is_zero());

    RadialProfile bad = u;
    bad.values[3] = 9.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = u;
    bad.values.back() = 0.1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = u;
    bad.values[2] = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("monotone projection") {
    testutil::Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(40);
        for (double& x : v) x = rng.uniform(-1.0, 3.0);
        std::vector<double> w = v;
        project_monotone(w);
        for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] <= w[i - 1] + 1e-15);
        for (double x : w) CHECK(x >= 0.0);
        std::vector<double> w2 = w;
        project_monotone(w2);
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(w2[i] == Catch::Approx(w[i]).margin(1e-14));
        }
    }
    std::vector<double> sorted = {5.0, 4.0, 3.0, 1.0, 0.0};
    std::vector<double> copy = sorted;
    project_monotone(copy);
    CHECK(copy == sorted);
}

TEST_CASE("family spec validation") {
    TestFamilySpec spec;
    spec.kind = FamilyKind::moser;
    spec.moser_n = 3;
    spec.validate();
    spec.moser_n = 0;
    CHECK_THROWS_AS(spec.validate(), DomainError);

    spec.kind = FamilyKind::ishiwata;
    spec.ishiwata_t = 0.5;
    spec.validate();
    spec.ishiwata_t = 1.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("moser family construction") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);

    RadialProfile u1 = make_moser(1, wp, moser_grid(1, wp));
    CHECK(u1.left_cap() == Catch::Approx(1.0 / std::sqrt(4.0 * tn::pi)).epsilon(1e-13));

    for (int n : {1, 5, 25}) {
        RadialProfile un = make_moser(n, wp, moser_grid(n, wp));
        un.validate(1e-14);
        for (std::size_t i = 0; i < un.grid.size(); ++i) {
            if (un.grid.nodes[i] >= 1.0) CHECK(un.values[i] == 0.0);
        }
        const double knee = moser_knee(n, wp);
        CHECK(moser_value(knee * (1.0 + 1e-13), n, wp) ==
              Catch::Approx(moser_cap(n, wp)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(make_moser(0, wp, moser_grid(1, wp)), DomainError);
    CHECK_THROWS_AS(make_moser(40, wp, log_uniform_grid(1e-3, 10.0, 64)), ResolutionError);
    CHECK_THROWS_AS(make_moser(1, wp, log_uniform_grid(1e-4, 0.5, 64)), ResolutionError);
}

TEST_CASE("moser mass decay stays level after n ~ 20") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    double lo = 1e300;
    double hi = 0.0;
    for (int n = 20; n <= 60; n += 8) {
        RadialProfile un = make_moser(n, wp, moser_grid(n, wp, 2e-3));
        const double scaled =
            static_cast<double>(n) * std::pow(norm_lq_theta(un, wp.p, wp.theta), wp.p);
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
    }
    CHECK(hi / lo < 1.10);
}

TEST_CASE("ishiwata family") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    RadialProfile base = normalized_tent(wp);
    CHECK(full_norm(base, wp) == Catch::Approx(1.0).margin(1e-10));

    CHECK_THROWS_AS(make_ishiwata(0.0, base, wp), DomainError);
    CHECK_THROWS_AS(make_ishiwata(1.0, base, wp), DomainError);
    RadialProfile not_normalized = base;
    for (double& v : not_normalized.values) v *= 2.0;
    CHECK_THROWS_AS(make_ishiwata(0.5, not_normalized, wp), DomainError);

    SECTION("t near one recovers the base") {
        RadialProfile v = make_ishiwata(1.0 - 1e-12, base, wp);
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            CHECK(v.values[i] == Catch::Approx(base.values[i]).margin(1e-9));
        }
    }

    SECTION("unit full norm along the family, re-measured at double order") {
        for (double t : {0.03, 0.2, 0.5, 0.9}) {
            RadialProfile v = make_ishiwata(t, base, wp);
            CHECK(full_norm(v, wp, 16) == Catch::Approx(1.0).margin(1e-6));
        }
    }

    SECTION("series tail lower bound at t = 0.25") {
        const double sigma = 1.0;
        const double t = 0.25;
        RadialProfile v = make_ishiwata(t, base, wp);
        const double lhs = tm_integral(v, sigma, wp).value;
        const double lp = norm_lq_theta(base, wp.p, wp.theta);
        const double l4 = norm_lq_theta(base, 4.0, wp.theta);
        const double xi = std::pow(t + (1.0 - t) * lp * lp, -0.5);
        const double rhs = sigma * (xi * xi * lp * lp +
                                    0.5 * sigma * std::pow(xi, 4.0) * std::pow(l4, 4.0) * t);
        CHECK(lhs >= rhs - 1e-6);
    }
}

TEST_CASE("rescale") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    testutil::Rng rng(7);
    RadialGrid g = log_uniform_grid(1e-7, 2.0, 64);
    RadialProfile u = testutil::random_profile(g, rng);

    SECTION("identity") {
        RadialProfile v = rescale(u, 1.0, 1.0);
        CHECK(v.grid.nodes == u.grid.nodes);
        CHECK(v.values == u.values);
    }
    SECTION("zeta doubles, gradient quadruples") {
        RadialProfile v = rescale(u, 2.0, 1.0);
        CHECK(grad_norm_pow_p(v, wp) ==
              Catch::Approx(4.0 * grad_norm_pow_p(u, wp)).epsilon(1e-12));
    }
    SECTION("tau = 2 divides the L2 mass by four") {
        RadialProfile v = rescale(u, 1.0, 2.0);
        const double m0 = std::pow(norm_lq_theta(u, 2.0, 1.0), 2.0);
        CHECK(std::pow(norm_lq_theta(v, 2.0, 1.0), 2.0) ==
              Catch::Approx(m0 / 4.0).epsilon(1e-12));
    }
    SECTION("composition") {
        RadialProfile a = rescale(rescale(u, 1.7, 0.3), 0.4, 5.0);
        RadialProfile b = rescale(u, 1.7 * 0.4, 0.3 * 5.0);
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            CHECK(a.values[i] == Catch::Approx(b.values[i]).margin(1e-12));
            CHECK(a.grid.nodes[i] == Catch::Approx(b.grid.nodes[i]).epsilon(1e-12));
        }
    }
    SECTION("domain errors") {
        CHECK_THROWS_AS(rescale(u, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(rescale(u, 1.0, -2.0), DomainError);
    }
}

TEST_CASE("subcritical bi-normalization") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);

    SECTION("zero profile rejected") {
        RadialProfile z;
        z.grid = log_uniform_grid(1e-5, 1.0, 32);
        z.values.assign(32, 0.0);
        CHECK_THROWS_AS(normalize_subcritical(z, wp), DomainError);
    }

    SECTION("scaled moser profile bi-normalizes") {
        RadialProfile u = make_moser(5, wp, moser_grid(5, wp, 2e-3));
        for (double& v : u.values) v *= 3.0;
        RadialProfile w = normalize_subcritical(u, wp);
        CHECK(norm_grad_lp_alpha(w, wp) == Catch::Approx(1.0).margin(1e-6));
        CHECK(norm_lq_theta(w, wp.p, wp.theta) == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("bi-normalized input is a fixed point") {
        RadialProfile u = make_moser(5, wp, moser_grid(5, wp, 2e-3));
        RadialProfile w = normalize_subcritical(u, wp);
        RadialProfile w2 = normalize_subcritical(w, wp);
        for (std::size_t i = 0; i < w.values.size(); ++i) {
            CHECK(w2.values[i] == Catch::Approx(w.values[i]).margin(1e-9));
        }
    }

    SECTION("objective never decreases for admissible profiles") {
        testutil::Rng rng(23);
        RadialGrid g = log_uniform_grid(1e-7, 4.0, 96);
        const double mu = 0.25 * wp.mu_star_value;
        for (int trial = 0; trial < 60; ++trial) {
            RadialProfile u = testutil::random_profile(g, rng);
            const double gn = norm_grad_lp_alpha(u, wp);
            const double scale = rng.uniform(0.2, 0.999) / gn;
            for (double& v : u.values) v *= scale;
            const double before = subcritical_objective(u, mu, wp);
            RadialProfile w = normalize_subcritical(u, wp);
            const double after = subcritical_objective(w, mu, wp);
            CHECK(after >= before - 1e-8 * std::max(1.0, before));
        }
    }
}

TEST_CASE("critical boundary map") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    testutil::Rng rng(31);
    RadialGrid g = log_uniform_grid(1e-7, 3.0, 96);

    SECTION("prescribed half/half split maps to the bi-normalized corner") {
        RadialProfile u = testutil::random_profile(g, rng);
        const double gp = grad_norm_pow_p(u, wp);
        const double lp = std::pow(norm_lq_theta(u, wp.p, wp.theta), wp.p);
        const double zeta = std::pow(0.5 / gp, 1.0 / wp.p);
        const double tau = std::pow(std::pow(zeta, wp.p) * lp / 0.5, 1.0 / (wp.theta + 1.0));
        RadialProfile v = rescale(u, zeta, tau);
        REQUIRE(grad_norm_pow_p(v, wp) == Catch::Approx(0.5).epsilon(1e-10));
        REQUIRE(std::pow(norm_lq_theta(v, wp.p, wp.theta), wp.p) ==
                Catch::Approx(0.5).epsilon(1e-10));

        RadialProfile w = to_critical_boundary(v, wp);
        CHECK(grad_norm_pow_p(w, wp) == Catch::Approx(1.0).margin(1e-6));
        CHECK(std::pow(norm_lq_theta(w, wp.p, wp.theta), wp.p) ==
              Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("norm identity for random admissible inputs") {
        for (int trial = 0; trial < 40; ++trial) {
            RadialProfile u = testutil::random_profile(g, rng);
            const double scale = rng.uniform(0.05, 0.95) / norm_grad_lp_alpha(u, wp);
            for (double& v : u.values) v *= scale;
            const double gp = grad_norm_pow_p(u, wp);
            const double lp = std::pow(norm_lq_theta(u, wp.p, wp.theta), wp.p);
            RadialProfile w = to_critical_boundary(u, wp);
            CHECK(grad_norm_pow_p(w, wp) == Catch::Approx(1.0).margin(1e-6));
            CHECK(std::pow(norm_lq_theta(w, wp.p, wp.theta), wp.p) ==
                  Catch::Approx(lp / (1.0 - gp)).epsilon(1e-8));
        }
    }

    SECTION("tent scaled to the 0.9/0.1 split lands on the unit mass") {
        RadialProfile tent;
        tent.grid = log_uniform_grid(1e-8, 1.0, 256);
        tent.values.resize(tent.grid.size());
        for (std::size_t i = 0; i < tent.grid.size(); ++i) {
            tent.values[i] = 1.0 - tent.grid.nodes[i];
        }
        tent.values.back() = 0.0;
        const double gp = grad_norm_pow_p(tent, wp);
        const double lp = std::pow(norm_lq_theta(tent, wp.p, wp.theta), wp.p);
        const double zeta = std::pow(0.9 / gp, 1.0 / wp.p);
        const double tau =
            std::pow(std::pow(zeta, wp.p) * lp / 0.1, 1.0 / (wp.theta + 1.0));
        RadialProfile v = rescale(tent, zeta, tau);
        REQUIRE(grad_norm_pow_p(v, wp) == Catch::Approx(0.9).epsilon(1e-10));
        RadialProfile w = to_critical_boundary(v, wp);
        CHECK(std::pow(norm_lq_theta(w, wp.p, wp.theta), wp.p) ==
              Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("gradient norm at or above one is rejected") {
        RadialProfile u = make_moser(3, wp, moser_grid(3, wp));
        CHECK_THROWS_AS(to_critical_boundary(u, wp), DomainError);
    }
}

TEST_CASE("profile serialization round-trip") {
    const WeightParams wp = WeightParams::trudinger_moser(2.5, 1.3);
    testutil::Rng rng(41);
    RadialProfile u = testutil::random_profile(log_uniform_grid(1e-9, 7.0, 48), rng);

    std::stringstream ss;
    write_profile(ss, u, wp);
    ProfileFile pf = read_profile(ss);
    CHECK(pf.p == wp.p);
    CHECK(pf.alpha == wp.alpha);
    CHECK(pf.theta == wp.theta);
    REQUIRE(pf.profile.grid.size() == u.grid.size());
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
        CHECK(pf.profile.grid.nodes[i] == u.grid.nodes[i]);
        CHECK(pf.profile.values[i] == u.values[i]);
    }
}

TEST_CASE("radial decay bound") {
    // pointwise bound r^{(alpha + theta(p-1))/p} |u|^p <= C ||u||^p with the
    // conservative constant C = p max(1, 1/omega_theta, 1/omega_alpha)
    for (auto [p, theta] : {std::pair{2.0, 1.0}, {3.0, 2.0}, {2.0, 0.0}}) {
        const WeightParams wp = WeightParams::trudinger_moser(p, theta);
        const double c_prof =
            wp.p * std::max({1.0, 1.0 / omega(wp.theta), 1.0 / omega(wp.alpha)});
        const double expo = (wp.alpha + wp.theta * (wp.p - 1.0)) / wp.p;
        testutil::Rng rng(59);
        RadialGrid g = log_uniform_grid(1e-8, 6.0, 128);
        for (int trial = 0; trial < 30; ++trial) {
            RadialProfile u = testutil::random_profile(g, rng);
            const double fn_pow = std::pow(full_norm(u, wp), wp.p);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double lhs =
                    std::pow(g.nodes[i], expo) * std::pow(u.values[i], wp.p);
                CHECK(lhs <= c_prof * fn_pow * (1.0 + 1e-12));
            }
            CHECK(std::pow(g.nodes.back(), expo) * std::pow(u.values.back(), wp.p) == 0.0);
        }
        RadialProfile um = make_moser(8, wp, moser_grid(8, wp));
        const double fn_pow = std::pow(full_norm(um, wp), wp.p);
        for (std::size_t i = 0; i < um.grid.size(); ++i) {
            CHECK(std::pow(um.grid.nodes[i], expo) * std::pow(um.values[i], wp.p) <=
                  c_prof * fn_pow * (1.0 + 1e-12));
        }
    }
}
