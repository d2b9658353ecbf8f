// clruin: ruin probabilities for the compound-Poisson surplus model, its
// n-scaled family, the diffusion limit, and the convergence diagnostics
// built on top of them. Emits plot-ready CSV and JSON artifacts.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "clruin/bounds.hpp"
#include "clruin/cramer_lundberg.hpp"
#include "clruin/errors.hpp"
#include "clruin/expansion.hpp"
#include "clruin/montecarlo.hpp"
#include "clruin/scaling.hpp"

namespace {

using namespace clruin;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCertification = 4;

struct Options {
    std::string dist_kind = "exp";
    double beta = 1.0;
    std::vector<double> support;
    std::vector<double> probs;
    double theta = 0.1;
    double lambda = 1.0;

    double n = 4.0;
    std::vector<double> n_list;
    double x = std::numeric_limits<double>::quiet_NaN();
    double x_max = 20.0;
    double step = 0.0;  // 0 = command-specific default
    double mesh = 1e-3;
    std::string method = "closed";
    int k = 1;
    double epsilon = 0.01;
    double alpha_margin = 0.1;

    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;
    double kappa = 23.0;
    std::uint64_t max_claims = 10000000;
    unsigned threads = 0;

    std::string u_choice = "psid";
    std::string out_dir = ".";
    std::string config_file;
    std::string certs_file;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--dist", opt.dist_kind, "claim law: exp | gamma2 | discrete");
    cmd->add_option("--beta", opt.beta, "rate of the exponential / gamma2 law");
    cmd->add_option("--support", opt.support, "discrete support points");
    cmd->add_option("--probs", opt.probs, "discrete probabilities");
    cmd->add_option("--theta", opt.theta, "safety loading");
    cmd->add_option("--lambda", opt.lambda, "claim arrival rate");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--config", opt.config_file, "JSON config; overrides flags");
}

// --config values take precedence over command-line flags
void apply_config(Options& opt) {
    if (opt.config_file.empty()) return;
    std::ifstream in(opt.config_file);
    if (!in) throw ConfigError("cannot open config file: " + opt.config_file);
    nlohmann::json j;
    in >> j;

    if (j.contains("dist")) {
        const auto& d = j["dist"];
        if (d.is_string()) {
            opt.dist_kind = d.get<std::string>();
        } else {
            const std::string kind = d.at("kind").get<std::string>();
            opt.dist_kind = (kind == "exponential") ? "exp" : kind;
            if (d.contains("beta")) opt.beta = d["beta"].get<double>();
            if (d.contains("support")) opt.support = d["support"].get<std::vector<double>>();
            if (d.contains("probs")) opt.probs = d["probs"].get<std::vector<double>>();
        }
    }
    const auto get = [&](const char* key, auto& target) {
        if (j.contains(key)) target = j[key].get<std::decay_t<decltype(target)>>();
    };
    get("beta", opt.beta);
    get("theta", opt.theta);
    get("lambda", opt.lambda);
    get("n", opt.n);
    get("n_list", opt.n_list);
    get("x", opt.x);
    get("x_max", opt.x_max);
    get("step", opt.step);
    get("mesh", opt.mesh);
    get("method", opt.method);
    get("k", opt.k);
    get("epsilon", opt.epsilon);
    get("alpha_margin", opt.alpha_margin);
    get("paths", opt.paths);
    get("seed", opt.seed);
    get("kappa", opt.kappa);
    get("max_claims", opt.max_claims);
    get("threads", opt.threads);
    get("out", opt.out_dir);
    get("certs", opt.certs_file);
}

ClaimDistribution make_dist(const Options& opt) {
    if (opt.dist_kind == "exp" || opt.dist_kind == "exponential")
        return ClaimDistribution::exponential(opt.beta);
    if (opt.dist_kind == "gamma2") return ClaimDistribution::gamma_two(opt.beta);
    if (opt.dist_kind == "discrete") {
        if (opt.support.empty())
            throw ConfigError("discrete law needs --support and --probs");
        return ClaimDistribution::discrete(opt.support, opt.probs);
    }
    throw ConfigError("unknown claim law: " + opt.dist_kind);
}

ModelParams make_model(const Options& opt) {
    try {
        return ModelParams(opt.theta, opt.lambda, make_dist(opt));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

PsiMethod parse_method(const std::string& name) {
    if (name == "closed") return PsiMethod::ClosedForm;
    if (name == "volterra") return PsiMethod::Volterra;
    if (name == "pk") return PsiMethod::PK;
    throw ConfigError("unknown method: " + name);
}

std::filesystem::path out_file(const Options& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    return std::filesystem::path(opt.out_dir) / name;
}

std::vector<double> make_grid(double x_max, double step) {
    std::vector<double> g;
    if (x_max <= 0.0) {
        g.push_back(0.0);
        return g;
    }
    const auto count = static_cast<std::size_t>(std::floor(x_max / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) g.push_back(step * static_cast<double>(i));
    return g;
}

std::vector<double> default_sup_grid(const ModelParams& model, double x_max,
                                     double step_override) {
    const double gamma = gamma_of(model.dist, model.theta).gamma;
    const double step = step_override > 0.0 ? step_override : 0.01 / gamma;
    return make_grid(x_max, step);
}

void write_xy_csv(const std::filesystem::path& path, const char* header,
                  const std::vector<double>& xs, const std::vector<double>& ys) {
    std::ofstream os(path);
    os << header << "\n";
    char buf[80];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", xs[i], ys[i]);
        os << buf;
    }
}

void print_value(double v) { std::printf("%.17g\n", v); }

// ---------------------------------------------------------------------------

int cmd_psi(const Options& opt) {
    const ModelParams model = make_model(opt);
    const double step = opt.step > 0.0 ? opt.step : 0.01;
    const PsiMethod method = parse_method(opt.method);

    const auto eval_grid = [&](const std::vector<double>& xs) {
        std::vector<double> ys;
        ys.reserve(xs.size());
        switch (method) {
            case PsiMethod::ClosedForm:
                for (double x : xs) ys.push_back(psi_closed_form(model, x));
                break;
            case PsiMethod::Volterra: {
                const double top = std::max(xs.back(), step);
                const double extent = std::ceil(top / step) * step;
                const RuinTable table = solve_volterra(model, extent, step);
                for (double x : xs) ys.push_back(table(x));
                break;
            }
            case PsiMethod::PK: {
                if (xs.back() <= 0.0) {
                    for (double x : xs)
                        ys.push_back(psi_pk_oracle(model, x, opt.mesh).value);
                    break;
                }
                const RuinTable table = psi_pk_table(model, xs.back(), opt.mesh);
                for (double x : xs) ys.push_back(table(x));
                break;
            }
        }
        return ys;
    };

    if (!std::isnan(opt.x)) {
        print_value(eval_grid({opt.x}).front());
        return kExitOk;
    }
    const auto xs = make_grid(opt.x_max, step);
    const auto ys = eval_grid(xs);
    const auto path = out_file(opt, "psi.csv");
    write_xy_csv(path, "x,psi", xs, ys);
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_psin(const Options& opt) {
    const ScaledModel model(make_model(opt), opt.n);
    const double step = opt.step > 0.0 ? opt.step : 0.01;
    PsiNOptions popts;
    popts.pk_mesh = opt.mesh;

    if (!std::isnan(opt.x)) {
        print_value(psi_n(model, opt.x, parse_method(opt.method), popts));
        return kExitOk;
    }
    const auto xs = make_grid(opt.x_max, step);
    const PsiNEvaluator eval(model, parse_method(opt.method), std::max(opt.x_max, step),
                             popts);
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(eval(x));
    const auto path = out_file(opt, "psin.csv");
    write_xy_csv(path, "x,psi", xs, ys);
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_converge(const Options& opt) {
    const ModelParams model = make_model(opt);
    std::vector<double> ns = opt.n_list;
    if (ns.empty()) ns = {4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0};
    const auto grid = default_sup_grid(model, opt.x_max, opt.step);

    const RateReport report = rate_fit(model, ns, grid);
    const auto path = out_file(opt, "converge.csv");
    {
        std::ofstream os(path);
        report.write_csv(os);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "# fitted_slope,%.17g\n", report.slope);
        os << buf;
    }
    std::printf("slope = %.6f  C = %.6g\n", report.slope, report.constant);
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_bounds(const Options& opt) {
    const ModelParams model = make_model(opt);

    BoundCertificates certs;
    if (!opt.certs_file.empty()) {
        std::ifstream in(opt.certs_file);
        if (!in) throw ConfigError("cannot open certificates: " + opt.certs_file);
        nlohmann::json j;
        in >> j;
        certs = BoundCertificates::from_json(j);
    } else {
        certs.lower = make_lower_cert(model.dist, model.theta, opt.epsilon);
        certs.upper = make_upper_cert(model.dist, model.theta, opt.alpha_margin);
    }

    if (!verify_certificates(model.dist, model.theta, certs)) {
        std::cerr << "certificate verification failed\n";
        return kExitCertification;
    }

    std::vector<double> ns = opt.n_list;
    if (ns.empty()) {
        const double top = std::ceil(std::max(certs.lower.n_lower, certs.upper.n_upper));
        ns = {top + 1.0, 4.0 * top, 16.0 * top, 64.0 * top};
    }
    const auto grid = default_sup_grid(model, opt.x_max, opt.step);
    const SandwichReport report =
        sandwich_report(model, certs.lower, certs.upper, ns, grid);

    const auto cert_path = out_file(opt, "bounds_cert.json");
    {
        std::ofstream os(cert_path);
        os << certs.to_json().dump(2) << "\n";
    }
    const auto table_path = out_file(opt, "sandwich.csv");
    {
        std::ofstream os(table_path);
        report.write_csv(os);
    }
    std::printf("delta = %.12g  n_lower = %.12g  alpha = %.12g  n_upper = %.12g\n",
                certs.lower.delta, certs.lower.n_lower, certs.upper.alpha,
                certs.upper.n_upper);
    std::printf("violations = %zu  max |psi_n - psi_d| = %.6g\n",
                report.violation_count, report.max_abs_error);
    std::cout << "wrote " << cert_path.string() << " and " << table_path.string()
              << "\n";
    return report.all_ok() ? kExitOk : kExitCertification;
}

int cmd_expand(const Options& opt) {
    const ModelParams model = make_model(opt);
    if (model.dist.kind() != ClaimKind::Exponential)
        throw UnsupportedDistribution("expand: exponential claims only");

    std::vector<double> ns = opt.n_list;
    if (ns.empty()) ns = {1e2, 1e3, 1e4, 1e5, 1e6};
    const double x_max = opt.x_max > 0.0 ? opt.x_max : 50.0;
    const auto grid = default_sup_grid(model, x_max, opt.step);

    const ResidualReport report =
        residual_scaling_check(model.theta, model.dist.rate(), opt.k, ns, grid);
    const auto path = out_file(opt, "expand.csv");
    {
        std::ofstream os(path);
        report.write_csv(os);
    }
    std::printf("order %d remainder %s\n", opt.k,
                report.bounded ? "bounded" : "drifting upward");
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_diverge(const Options& opt) {
    const ModelParams model = make_model(opt);
    std::vector<double> ns = opt.n_list;
    if (ns.empty()) ns = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};

    const DivergenceReport report = gamma2_divergence_demo(model.theta, opt.beta, ns);
    const auto path = out_file(opt, "diverge.csv");
    {
        std::ofstream os(path);
        report.write_csv(os);
    }
    std::printf("final ratio = %.8f (%s)\n", report.rows.back().ratio,
                report.converged ? "within 5% of 1" : "not converged");
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_simulate(const Options& opt) {
    const ScaledModel model(make_model(opt), opt.n);
    SimConfig cfg;
    cfg.paths = opt.paths;
    cfg.seed = opt.seed;
    cfg.kappa = opt.kappa;
    cfg.max_claims = opt.max_claims;
    cfg.threads = opt.threads;

    const double x = std::isnan(opt.x) ? 0.0 : opt.x;
    const SimEstimate est = simulate_ruin(model, x, cfg);
    const std::string json = est.to_json().dump();
    std::cout << json << "\n";
    {
        std::ofstream os(out_file(opt, "simulate.json"));
        os << json << "\n";
    }
    if (est.capped_paths * 1000 > est.paths) {
        std::cerr << "claim cap hit on " << est.capped_paths << " of " << est.paths
                  << " paths\n";
        return kExitNumerical;
    }
    if (est.capped_paths > 0)
        std::cerr << "note: " << est.capped_paths << " paths discarded at the claim cap\n";
    return kExitOk;
}

int cmd_fn_eval(const Options& opt) {
    const ScaledModel model(make_model(opt), opt.n);
    const double gamma = gamma_of(model.base.dist, model.base.theta).gamma;
    const double sn = std::sqrt(opt.n);

    GridFunction u;
    std::shared_ptr<const RuinTable> table;  // keeps the volterra route alive
    if (opt.u_choice == "psid") {
        u = GridFunction::analytic(
            [gamma](double x) { return std::exp(-gamma * x); },
            [gamma](double x) { return -gamma * std::exp(-gamma * x); });
    } else if (opt.u_choice == "lower") {
        const auto cert = make_lower_cert(model.base.dist, model.base.theta, opt.epsilon);
        const double shrink = 1.0 - cert.delta / sn;
        u = GridFunction::analytic(
            [=](double x) { return shrink * std::exp(-gamma * x); },
            [=](double x) { return -gamma * shrink * std::exp(-gamma * x); });
    } else if (opt.u_choice == "upper") {
        const auto cert =
            make_upper_cert(model.base.dist, model.base.theta, opt.alpha_margin);
        const double rate = gamma - cert.alpha / sn;
        u = GridFunction::analytic(
            [=](double x) { return std::exp(-rate * x); },
            [=](double x) { return -rate * std::exp(-rate * x); });
    } else if (opt.u_choice == "psin") {
        const double step = opt.step > 0.0 ? opt.step : 0.01;
        const double extent = std::ceil(std::max(sn * opt.x_max, step) / step) * step;
        table = std::make_shared<const RuinTable>(
            solve_volterra(model.loading_equivalent(), extent, step));
        u.value = [table, sn](double x) { return (*table)(sn * x); };
        u.right_derivative = [table, sn](double x) {
            return sn * table->right_derivative(sn * x);
        };
    } else {
        throw ConfigError("unknown --u choice: " + opt.u_choice);
    }

    const auto grid = default_sup_grid(model.base, opt.x_max, opt.step);
    std::vector<double> xs, vals, errs;
    for (double x : grid) {
        if (!(x > 0.0)) continue;
        const auto eval = fn_operator(model, u, x, 1e-10);
        xs.push_back(x);
        vals.push_back(eval.value);
        errs.push_back(eval.quad_error);
    }
    const auto path = out_file(opt, "fn_eval.csv");
    {
        std::ofstream os(path);
        os << "x,fn_value,quad_error\n";
        char buf[120];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", xs[i], vals[i],
                          errs[i]);
            os << buf;
        }
    }
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ruin probabilities for the scaled compound-Poisson surplus model"};
    app.require_subcommand(1);
    Options opt;

    auto* psi = app.add_subcommand("psi", "base-model ruin probability");
    add_common_flags(psi, opt);
    psi->add_option("--method", opt.method, "closed | volterra | pk");
    psi->add_option("--x", opt.x, "single evaluation point");
    psi->add_option("--x-max", opt.x_max, "grid extent");
    psi->add_option("--step", opt.step, "grid step");
    psi->add_option("--mesh", opt.mesh, "lattice mesh of the ladder-height route");

    auto* psin = app.add_subcommand("psin", "scaled-model ruin probability");
    add_common_flags(psin, opt);
    psin->add_option("--n", opt.n, "scaling index");
    psin->add_option("--method", opt.method, "closed | volterra | pk");
    psin->add_option("--x", opt.x, "single evaluation point");
    psin->add_option("--x-max", opt.x_max, "grid extent");
    psin->add_option("--step", opt.step, "grid step");
    psin->add_option("--mesh", opt.mesh, "lattice mesh of the ladder-height route");

    auto* converge =
        app.add_subcommand("converge", "uniform diffusion-limit error sweep");
    add_common_flags(converge, opt);
    converge->add_option("--n-list", opt.n_list, "scaling indices (geometric)");
    converge->add_option("--x-max", opt.x_max, "sup-norm grid extent");
    converge->add_option("--step", opt.step, "sup-norm grid step");

    auto* bounds =
        app.add_subcommand("bounds", "two-sided bound certificates + sandwich");
    add_common_flags(bounds, opt);
    bounds->add_option("--epsilon", opt.epsilon, "slack in the lower-bound constants");
    bounds->add_option("--alpha-margin", opt.alpha_margin,
                       "relative headroom above the strict alpha threshold");
    bounds->add_option("--n-list", opt.n_list, "scaling indices to check");
    bounds->add_option("--x-max", opt.x_max, "grid extent");
    bounds->add_option("--step", opt.step, "grid step");
    bounds->add_option("--certs", opt.certs_file,
                       "load certificates instead of computing");

    auto* expand =
        app.add_subcommand("expand", "higher-order remainder sweep (exponential)");
    add_common_flags(expand, opt);
    expand->add_option("--k", opt.k, "expansion order");
    expand->add_option("--n-list", opt.n_list, "scaling indices");
    expand->add_option("--x-max", opt.x_max, "sup grid extent");
    expand->add_option("--step", opt.step, "sup grid step");

    auto* diverge = app.add_subcommand(
        "diverge", "zero-surplus breakdown of the gamma-2 expansion");
    add_common_flags(diverge, opt);
    diverge->add_option("--n-list", opt.n_list, "scaling indices (geometric)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of psi_n");
    add_common_flags(simulate, opt);
    simulate->add_option("--n", opt.n, "scaling index");
    simulate->add_option("--x", opt.x, "initial surplus");
    simulate->add_option("--paths", opt.paths, "number of simulated paths");
    simulate->add_option("--seed", opt.seed, "random seed");
    simulate->add_option("--kappa", opt.kappa, "barrier exponent (bias <= e^{-kappa})");
    simulate->add_option("--max-claims", opt.max_claims, "per-path claim cap");
    simulate->add_option("--threads", opt.threads, "worker threads (0 = auto)");

    auto* fneval =
        app.add_subcommand("fn-eval", "scaled operator along a reference function");
    add_common_flags(fneval, opt);
    fneval->add_option("--n", opt.n, "scaling index");
    fneval->add_option("--u", opt.u_choice, "psid | lower | upper | psin");
    fneval->add_option("--x-max", opt.x_max, "grid extent");
    fneval->add_option("--step", opt.step, "grid step");
    fneval->add_option("--epsilon", opt.epsilon, "lower-bound slack (for --u lower)");
    fneval->add_option("--alpha-margin", opt.alpha_margin,
                       "alpha headroom (for --u upper)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        apply_config(opt);
        if (psi->parsed()) return cmd_psi(opt);
        if (psin->parsed()) return cmd_psin(opt);
        if (converge->parsed()) return cmd_converge(opt);
        if (bounds->parsed()) return cmd_bounds(opt);
        if (expand->parsed()) return cmd_expand(opt);
        if (diverge->parsed()) return cmd_diverge(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (fneval->parsed()) return cmd_fn_eval(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConditionUnreachable& e) {
        std::cerr << "certification failed: " << e.what() << "\n";
        return kExitCertification;
    } catch (const ScalingTooSmall& e) {
        std::cerr << "certification failed: " << e.what() << "\n";
        return kExitCertification;
    } catch (const UnsupportedDistribution& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
