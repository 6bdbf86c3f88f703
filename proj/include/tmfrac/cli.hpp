#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tmfrac/io.hpp"
#include "tmfrac/optimize.hpp"
#include "tmfrac/verify.hpp"

#include <CLI11.hpp>

namespace tmfrac::cli {

namespace detail {

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw DomainError("bad numeric list entry '" + item +
                              "'; hint: comma-separated numbers, e.g. 0.5,0.7,0.9");
        }
    }
    return out;
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw EvaluationError("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

} // namespace detail

/// Command-line front end.  Exit status: 0 success, 2 usage error, 3
/// numeric or regime error.
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"sharp exponential-inequality supremum estimation on radial profiles"};
    app.require_subcommand(1);

    double p = 2.0;
    double theta = 1.0;
    std::size_t grid_nodes = 512;
    double r_max = 10.0;
    int restarts = 4;
    int max_iters = 2000;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--p", p, "exponent p >= 2");
        cmd->add_option("--theta", theta, "weight exponent theta >= 0");
        cmd->add_option("--grid-nodes", grid_nodes, "grid node count");
        cmd->add_option("--r-max", r_max, "outer support radius");
        cmd->add_option("--restarts", restarts, "ascent restarts");
        cmd->add_option("--max-iters", max_iters, "ascent iteration cap");
        cmd->add_option("--seed", seed, "rng seed for restarts and sampling");
        cmd->add_option("--out", out_path, "output file (default stdout)");
        cmd->add_option("--format", format, "csv or structured-text")
            ->check(CLI::IsMember({"csv", "structured-text"}));
    };

    double mu_frac = -1.0;
    double mu_abs = -1.0;
    double sigma_frac = -1.0;
    double sigma_abs = -1.0;
    std::string mu_grid_text;
    std::string sigma_grid_text;
    int moser_n = 10;
    std::string emit_profile;
    std::string suite = "all";

    CLI::App* cmd_tmsc = app.add_subcommand("tmsc", "subcritical supremum estimate");
    add_common(cmd_tmsc);
    cmd_tmsc->add_option("--mu-frac", mu_frac, "mu as a fraction of the sharp constant");
    cmd_tmsc->add_option("--mu-abs", mu_abs, "absolute mu");

    CLI::App* cmd_tmc = app.add_subcommand("tmc", "critical supremum estimate");
    add_common(cmd_tmc);
    cmd_tmc->add_option("--sigma-frac", sigma_frac, "sigma as a fraction of the sharp constant");
    cmd_tmc->add_option("--sigma-abs", sigma_abs, "absolute sigma");

    CLI::App* cmd_identity = app.add_subcommand(
        "identity", "critical estimate through the subcritical equivalence");
    add_common(cmd_identity);
    cmd_identity->add_option("--sigma-frac", sigma_frac, "sigma as a fraction");
    cmd_identity->add_option("--sigma-abs", sigma_abs, "absolute sigma");
    cmd_identity->add_option("--mu-grid", mu_grid_text,
                             "comma list of mu as fractions of sigma");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "subcritical sweep over mu fractions");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--mu-grid", mu_grid_text,
                          "comma list of mu fractions of the sharp constant");

    CLI::App* cmd_moser = app.add_subcommand("moser", "emit a concentration profile");
    add_common(cmd_moser);
    cmd_moser->add_option("--n", moser_n, "family index");
    cmd_moser->add_option("--emit-profile", emit_profile, "profile output path");

    CLI::App* cmd_probe =
        app.add_subcommand("probe-sigma-star", "attainment threshold probe");
    add_common(cmd_probe);
    cmd_probe->add_option("--sigma-grid", sigma_grid_text,
                          "comma list of sigma fractions of the sharp constant");

    CLI::App* cmd_verify = app.add_subcommand("verify", "run the verification suites");
    add_common(cmd_verify);
    cmd_verify->add_option("--suite", suite, "all (default) or a check name");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            return app.exit(e);
        }
        std::cerr << e.what() << "\nhint: run with --help for the flag grammar\n";
        return 2;
    }

    try {
        const WeightParams wp = WeightParams::trudinger_moser(p, theta);
        OptimizerConfig cfg = OptimizerConfig::defaults(grid_nodes, 1e-10, r_max);
        cfg.restarts = restarts;
        cfg.max_iters = max_iters;
        cfg.rng_seed = seed;

        auto resolve = [&](double frac, double abs, const char* what) {
            if (frac >= 0.0 && abs >= 0.0) {
                throw DomainError(std::string("give either --") + what + "-frac or --" +
                                  what + "-abs, not both; hint: fractions are relative "
                                  "to the sharp constant");
            }
            if (frac >= 0.0) return frac * wp.mu_star_value;
            if (abs >= 0.0) return abs;
            throw DomainError(std::string("missing --") + what + "-frac or --" + what +
                              "-abs; hint: e.g. --" + what + "-frac 0.5");
        };

        if (*cmd_tmsc) {
            const double mu = resolve(mu_frac, mu_abs, "mu");
            SupremumEstimate est = maximize_tmsc(mu, wp, cfg);
            detail::Output out(out_path);
            if (format == "csv") {
                SweepRow row{mu / wp.mu_star_value, mu, est.value,
                             est.value * (1.0 - std::pow(mu / wp.mu_star_value, wp.p - 1.0)),
                             est.converged};
                write_sweep_csv(out.stream(), {row});
            } else {
                out.stream() << estimate_to_json(est, wp).dump(2) << '\n';
            }
            return 0;
        }
        if (*cmd_tmc) {
            const double sigma = resolve(sigma_frac, sigma_abs, "sigma");
            SupremumEstimate est = maximize_tmc(sigma, wp, cfg);
            detail::Output out(out_path);
            if (format == "csv") {
                double fact = 1.0;
                for (int k = 2; k <= wp.k0; ++k) fact *= static_cast<double>(k);
                const double target = std::pow(sigma, wp.p - 1.0) / fact;
                out.stream() << "sigma_frac,sigma,tmc_estimate,gap,nu,converged\n"
                             << fmt17(sigma / wp.mu_star_value) << ',' << fmt17(sigma)
                             << ',' << fmt17(est.value) << ','
                             << fmt17(est.value - target) << ','
                             << fmt17(est.value / target) << ','
                             << (est.converged ? 1 : 0) << '\n';
            } else {
                out.stream() << estimate_to_json(est, wp).dump(2) << '\n';
            }
            return 0;
        }
        if (*cmd_identity) {
            const double sigma = resolve(sigma_frac, sigma_abs, "sigma");
            std::vector<double> fracs = detail::parse_list(mu_grid_text);
            if (fracs.empty()) {
                for (int i = 1; i <= 9; ++i) fracs.push_back(0.1 * static_cast<double>(i));
            }
            std::vector<double> mu_grid;
            for (double f : fracs) mu_grid.push_back(f * sigma);
            IdentityEstimate est = tmc_via_identity_detailed(sigma, wp, mu_grid, cfg);
            detail::Output out(out_path);
            if (format == "csv") {
                write_identity_csv(out.stream(), sigma, est.rows);
            } else {
                nlohmann::ordered_json j = estimate_to_json(est.estimate, wp);
                nlohmann::ordered_json rows = nlohmann::ordered_json::array();
                for (const IdentityRow& r : est.rows) {
                    rows.push_back({{"mu", r.mu},
                                    {"ratio", r.ratio},
                                    {"tmsc_estimate", r.tmsc_value},
                                    {"transformed_value", r.transformed_value},
                                    {"converged", r.converged}});
                }
                j["rows"] = rows;
                out.stream() << j.dump(2) << '\n';
            }
            return 0;
        }
        if (*cmd_sweep) {
            std::vector<double> fracs = detail::parse_list(mu_grid_text);
            if (fracs.empty()) {
                throw DomainError("sweep needs --mu-grid; hint: --mu-grid 0.5,0.7,0.9");
            }
            std::vector<SweepRow> rows = sweep_subcritical(fracs, wp, cfg);
            detail::Output out(out_path);
            write_sweep_csv(out.stream(), rows);
            return 0;
        }
        if (*cmd_moser) {
            RadialProfile u = make_moser(moser_n, wp, moser_grid(moser_n, wp, 1e-3, r_max));
            if (!emit_profile.empty()) {
                std::ofstream pf(emit_profile, std::ios::binary);
                if (!pf) throw EvaluationError("cannot open profile path: " + emit_profile);
                write_profile(pf, u, wp);
            }
            detail::Output out(out_path);
            out.stream() << "n,p,theta,knee,cap,grad_norm_pow_p,lp_norm_pow_p\n"
                         << moser_n << ',' << fmt17(wp.p) << ',' << fmt17(wp.theta) << ','
                         << fmt17(moser_knee(moser_n, wp)) << ','
                         << fmt17(moser_cap(moser_n, wp)) << ','
                         << fmt17(grad_norm_pow_p(u, wp)) << ','
                         << fmt17(std::pow(norm_lq_theta(u, wp.p, wp.theta), wp.p)) << '\n';
            return 0;
        }
        if (*cmd_probe) {
            std::vector<double> fracs = detail::parse_list(sigma_grid_text);
            if (fracs.empty()) fracs = {0.1, 0.3, 0.5, 0.7, 0.9};
            std::vector<double> grid;
            for (double f : fracs) grid.push_back(f * wp.mu_star_value);
            ProbeReport rep = sigma_star_probe(wp, grid, cfg);
            detail::Output out(out_path);
            if (format == "csv") {
                write_probe_csv(out.stream(), rep);
            } else {
                nlohmann::ordered_json j;
                nlohmann::ordered_json rows = nlohmann::ordered_json::array();
                for (const ProbeRow& r : rep.rows) {
                    rows.push_back({{"sigma_frac", r.sigma_frac},
                                    {"sigma", r.sigma},
                                    {"tmc_estimate", r.tmc_estimate},
                                    {"gap", r.gap},
                                    {"nu", r.nu},
                                    {"converged", r.converged}});
                }
                j["rows"] = rows;
                if (rep.sigma_star_upper) j["sigma_star_upper"] = *rep.sigma_star_upper;
                j["nu_monotone"] = rep.nu_monotone;
                j["caveat"] = rep.caveat;
                out.stream() << j.dump(2) << '\n';
            }
            if (format == "csv") {
                std::cerr << "note: " << rep.caveat << '\n';
            }
            return 0;
        }
        if (*cmd_verify) {
            std::vector<CheckResult> results;
            if (suite == "all") {
                results = run_all_checks(seed);
            } else if (suite == "scaling-laws") {
                results.push_back(check_scaling_laws(1000, seed));
            } else if (suite == "convexity-split") {
                results.push_back(check_convexity_split(100000, seed));
            } else if (suite == "phi-homogeneity") {
                results.push_back(check_phi_homogeneity(100000, seed));
            } else if (suite == "phi-sigma-monotone") {
                results.push_back(check_phi_monotone_sigma(100000, seed));
            } else if (suite == "exp-estimate") {
                results.push_back(check_exp_estimate(100000, seed));
            } else if (suite == "moser-asymptotics") {
                results.push_back(check_moser_asymptotics(50, wp));
            } else {
                throw DomainError("unknown suite '" + suite +
                                  "'; hint: all, scaling-laws, convexity-split, "
                                  "phi-homogeneity, phi-sigma-monotone, exp-estimate, "
                                  "moser-asymptotics");
            }
            detail::Output out(out_path);
            write_manifest(out.stream(), results);
            return 0;
        }
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const RegimeError& e) {
        std::cerr << "regime error: " << e.what()
                  << "\nhint: the toolkit models alpha = p-1 with p >= 2 only\n";
        return 3;
    } catch (const ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << '\n';
        return 3;
    } catch (const ConstraintError& e) {
        std::cerr << "constraint error: " << e.what() << '\n';
        return 3;
    } catch (const EvaluationError& e) {
        std::cerr << "evaluation error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace tmfrac::cli
