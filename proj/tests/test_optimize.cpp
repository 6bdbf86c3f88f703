#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tmfrac/optimize.hpp"
#include "test_helpers.hpp"

using namespace tmfrac;

namespace {

OptimizerConfig light_config() {
    OptimizerConfig cfg = OptimizerConfig::defaults(192, 1e-8, 10.0);
    cfg.max_iters = 250;
    cfg.restarts = 2;
    cfg.moser_n_max = 40;
    cfg.identity_seed_fracs = {0.5};
    return cfg;
}

} // namespace

TEST_CASE("maximize_tmsc validates its domain") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    CHECK_THROWS_AS(maximize_tmsc(0.0, wp, cfg), DomainError);
    CHECK_THROWS_AS(maximize_tmsc(wp.mu_star_value, wp, cfg), DomainError);
    CHECK_THROWS_AS(maximize_tmsc(-1.0, wp, cfg), DomainError);
    OptimizerConfig bad = cfg;
    bad.max_iters = 0;
    CHECK_THROWS_AS(maximize_tmsc(1.0, wp, bad), DomainError);
}

TEST_CASE("maximize_tmsc is self-consistent and certified") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    const double mu = 0.6 * wp.mu_star_value;
    SupremumEstimate est = maximize_tmsc(mu, wp, cfg);

    CHECK(est.value > 0.0);
    CHECK(est.kind == SupKind::subcritical);
    CHECK(est.mu_or_sigma == mu);
    CHECK(subcritical_objective(est.argmax, mu, wp, cfg.panel_order) ==
          Catch::Approx(est.value).epsilon(1e-8));
    CHECK(est.constraint_residual <= 1e-6);
    CHECK(est.worst_iterate_residual <= 1e-6);
    CHECK(est.certified_rel_error <= 1e-6);
}

TEST_CASE("maximize_tmsc leading behavior at small mu") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    const double mu = 0.01 * wp.mu_star_value;
    SupremumEstimate est = maximize_tmsc(mu, wp, cfg);
    CHECK(est.value / mu >= 1.0);
    CHECK(est.value / mu <= 1.5);
}

TEST_CASE("maximize_tmsc dominates the concentration display near the sharp constant") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    const double mu = 0.9 * wp.mu_star_value;
    SupremumEstimate est = maximize_tmsc(mu, wp, cfg);

    // cap-cell display over the closed-form mass, maximized over the family
    double bound = 0.0;
    for (int n = 1; n <= cfg.moser_n_max; ++n) {
        const double nn = n;
        const double cap = std::numbers::pi *
                           (std::exp((mu / wp.mu_star_value - 1.0) * nn) - std::exp(-nn));
        const double mass = (1.0 - (nn + 1.0) * std::exp(-nn)) / (2.0 * nn);
        bound = std::max(bound, cap / mass);
    }
    CHECK(est.value >= bound * 0.999);
}

TEST_CASE("ascent refines beyond the seed line searches") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig near_seed = light_config();
    near_seed.max_iters = 1;
    near_seed.restarts = 1;
    OptimizerConfig full = light_config();
    full.restarts = 1;
    const double mu = 0.6 * wp.mu_star_value;
    const double seeded = maximize_tmsc(mu, wp, near_seed).value;
    const double refined = maximize_tmsc(mu, wp, full).value;
    CHECK(refined > seeded * 1.001);
}

TEST_CASE("optimizer runs are deterministic") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    cfg.rng_seed = 1234;
    const double mu = 0.5 * wp.mu_star_value;
    SupremumEstimate a = maximize_tmsc(mu, wp, cfg);
    SupremumEstimate b = maximize_tmsc(mu, wp, cfg);
    CHECK(a.value == b.value);
    CHECK(a.iterations_used == b.iterations_used);
    REQUIRE(a.argmax.values.size() == b.argmax.values.size());
    for (std::size_t i = 0; i < a.argmax.values.size(); ++i) {
        CHECK(a.argmax.values[i] == b.argmax.values[i]);
    }
}

TEST_CASE("maximize_tmc basics") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    const double sigma = 0.5 * wp.mu_star_value;
    SupremumEstimate est = maximize_tmc(sigma, wp, cfg);

    CHECK(est.kind == SupKind::critical);
    CHECK(critical_objective(est.argmax, sigma, wp, cfg.panel_order) ==
          Catch::Approx(est.value).epsilon(1e-8));
    CHECK(est.constraint_residual <= 1e-6);
    CHECK_FALSE(est.resolution_limited);
    CHECK(est.value > 0.0);

    CHECK_THROWS_AS(maximize_tmc(0.0, wp, cfg), DomainError);
    CHECK_THROWS_AS(maximize_tmc(1.01 * wp.mu_star_value, wp, cfg), DomainError);
}

TEST_CASE("maximize_tmc at the sharp constant is resolution limited") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    cfg.max_iters = 60;
    cfg.restarts = 1;
    SupremumEstimate est = maximize_tmc(wp.mu_star_value, wp, cfg);
    CHECK(est.resolution_limited);
    CHECK(est.value > 0.0);
}

TEST_CASE("maximize_tmc strict gap for p = 3") {
    const WeightParams wp = WeightParams::trudinger_moser(3.0, 2.0);
    OptimizerConfig cfg = light_config();
    const double sigma = 0.5 * wp.mu_star_value;
    SupremumEstimate est = maximize_tmc(sigma, wp, cfg);
    CHECK(est.value > sigma * sigma / 2.0 + 1e-2);
}

TEST_CASE("tmc_via_identity with a unit-ratio point") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    cfg.restarts = 1;
    const double sigma = 0.5 * wp.mu_star_value;
    const double mu = sigma * std::pow(0.5, 1.0 / (wp.p - 1.0));

    IdentityEstimate out = tmc_via_identity_detailed(sigma, wp, {mu}, cfg);
    REQUIRE(out.rows.size() == 1);
    const IdentityRow& row = out.rows[0];
    CHECK(row.ratio == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(row.grad_pow_p == Catch::Approx(0.5).margin(1e-6));
    CHECK(row.lp_pow_p == Catch::Approx(0.5).margin(1e-6));
    CHECK(row.transformed_value ==
          Catch::Approx(row.ratio * row.tmsc_value).epsilon(1e-6));
    CHECK(out.estimate.value == row.transformed_value);
    CHECK(critical_objective(out.estimate.argmax, sigma, wp, cfg.panel_order) ==
          Catch::Approx(out.estimate.value).epsilon(1e-8));

    CHECK_THROWS_AS(tmc_via_identity(sigma, wp, {}, cfg), DomainError);
    CHECK_THROWS_AS(tmc_via_identity(sigma, wp, {sigma}, cfg), DomainError);
}

TEST_CASE("tmc_via_identity transform exponents at p = 3") {
    const WeightParams wp = WeightParams::trudinger_moser(3.0, 2.0);
    OptimizerConfig cfg = light_config();
    cfg.restarts = 1;
    const double sigma = 0.5 * wp.mu_star_value;
    const double mu = 0.6 * sigma;

    IdentityEstimate out = tmc_via_identity_detailed(sigma, wp, {mu}, cfg);
    REQUIRE(out.rows.size() == 1);
    const double rho = std::pow(0.6, wp.p - 1.0);
    CHECK(out.rows[0].grad_pow_p == Catch::Approx(rho).margin(1e-6));
    CHECK(out.rows[0].lp_pow_p == Catch::Approx(1.0 - rho).margin(1e-6));
    CHECK(out.rows[0].transformed_value ==
          Catch::Approx(out.rows[0].ratio * out.rows[0].tmsc_value).epsilon(1e-6));
}

TEST_CASE("declared seed families are honored") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    cfg.max_iters = 1;  // seeds must carry the run on their own
    cfg.restarts = 1;
    const double mu = 0.8 * wp.mu_star_value;

    TestFamilySpec custom;
    custom.kind = FamilyKind::custom;
    custom.base = normalize_subcritical(make_moser(6, wp, moser_grid(6, wp, 2e-3)), wp);
    cfg.seed_families.push_back(custom);
    const double custom_value =
        subcritical_objective(*custom.base, mu, wp, cfg.panel_order);

    SupremumEstimate est = maximize_tmsc(mu, wp, cfg);
    CHECK(est.value >= custom_value * (1.0 - 1e-12));

    TestFamilySpec bad;
    bad.kind = FamilyKind::custom;
    cfg.seed_families = {bad};
    CHECK_THROWS_AS(maximize_tmsc(mu, wp, cfg), DomainError);
}

TEST_CASE("random admissible profiles never beat the critical estimate") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    const double sigma = 0.5 * wp.mu_star_value;
    SupremumEstimate est = maximize_tmc(sigma, wp, cfg);

    testutil::Rng rng(91);
    RadialGrid g = log_uniform_grid(1e-8, 10.0, 128);
    for (int trial = 0; trial < 20; ++trial) {
        RadialProfile u = testutil::random_profile(g, rng);
        const double fn = full_norm(u, wp);
        for (double& v : u.values) v /= fn;
        CHECK(critical_objective(u, sigma, wp) <= est.value + 1e-6);
    }
}

TEST_CASE("identity values never exceed the direct critical estimate") {
    // the equivalence only ever converts subcritical values into critical
    // lower bounds, so transformed values must stay below the direct estimate
    // up to twice the certification tolerance
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    cfg.restarts = 1;
    cfg.identity_seed_fracs = {0.3, 0.5, 0.7};
    const double sigma = 0.6 * wp.mu_star_value;
    std::vector<double> mu_grid;
    for (double f : cfg.identity_seed_fracs) mu_grid.push_back(f * sigma);

    IdentityEstimate ident = tmc_via_identity_detailed(sigma, wp, mu_grid, cfg);
    SupremumEstimate direct = maximize_tmc(sigma, wp, cfg);
    for (const IdentityRow& row : ident.rows) {
        CHECK(row.ratio * row.tmsc_value <=
              direct.value + 2e-6 * (1.0 + direct.value));
    }
}

TEST_CASE("subcritical sweep") {
    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    OptimizerConfig cfg = light_config();
    cfg.restarts = 1;

    CHECK(sweep_subcritical({}, wp, cfg).empty());
    CHECK_THROWS_AS(sweep_subcritical({1.5}, wp, cfg), DomainError);

    std::vector<SweepRow> rows = sweep_subcritical({0.5, 0.9}, wp, cfg);
    REQUIRE(rows.size() == 2);
    for (const SweepRow& row : rows) {
        CHECK(row.normalized_product > 0.0);
        CHECK(row.estimate > 0.0);
        CHECK(row.mu == Catch::Approx(row.mu_frac * wp.mu_star_value));
    }
    CHECK(rows[1].estimate > rows[0].estimate);
}

TEST_CASE("sigma_star_probe regime guard and light run") {
    OptimizerConfig cfg = light_config();
    cfg.restarts = 1;

    const WeightParams bad = WeightParams::trudinger_moser(2.5, 1.0);
    CHECK_THROWS_AS(sigma_star_probe(bad, {1.0}, cfg), RegimeError);

    // p = 3 has integer p-1 = k0 = 2, so it passes the regime gate
    const WeightParams w3 = WeightParams::trudinger_moser(3.0, 2.0);
    OptimizerConfig tiny = cfg;
    tiny.max_iters = 20;
    tiny.moser_n_max = 10;
    ProbeReport rep3 = sigma_star_probe(w3, {0.4 * w3.mu_star_value}, tiny);
    CHECK(rep3.rows.size() == 1);

    const WeightParams wp = WeightParams::trudinger_moser(2.0, 1.0);
    const std::vector<double> grid = {0.3 * wp.mu_star_value, 0.6 * wp.mu_star_value};
    ProbeReport rep = sigma_star_probe(wp, grid, cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.nu_monotone);
    for (const ProbeRow& row : rep.rows) {
        CHECK(row.nu > 0.0);
        CHECK(row.tmc_estimate > 0.0);
        // light resolution: only a loose sanity band on the gap
        CHECK(row.gap >= -0.2 * (1.0 + row.sigma));
    }
    CHECK_FALSE(rep.caveat.empty());
}
