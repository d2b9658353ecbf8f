#include "clruin/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "clruin/errors.hpp"
#include "clruin/numerics.hpp"

namespace clruin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSearchCap = 1e12;

template <typename F>
double sup_over_levels(const ClaimDistribution& dist, F&& functional) {
    double best = -kInf;
    for (double d : dist.sup_scan_points()) best = std::max(best, functional(d));
    return best;
}

// left side of the threshold inequality certifying the lower bound at N
double lower_condition_lhs(const ClaimDistribution& dist, double gamma, double n) {
    const double tilt = gamma / std::sqrt(n);
    return sup_over_levels(dist, [&](double d) {
        const double integral = num::integrate(
            [&](double w) {
                return (1.0 - w) * dist.tilted_tail_moment(d, 2, tilt * w);
            },
            0.0, 1.0, 1e-10);
        return gamma * gamma / std::sqrt(n) * integral;
    });
}

}  // namespace

MgfConditionResult check_mgf_condition(const ClaimDistribution& dist, double theta,
                                       double m) {
    if (!(m > 0.0)) throw std::invalid_argument("check_mgf_condition: m must be positive");
    const double gamma = gamma_of(dist, theta).gamma;
    const double tilt = gamma / std::sqrt(m);
    if (tilt >= dist.mgf_radius()) return {false, kInf};
    const double sup = sup_over_levels(
        dist, [&](double d) { return dist.tilted_tail_moment(d, 2, tilt); });
    return {true, sup};
}

double select_m(const ClaimDistribution& dist, double theta) {
    double m = theta * theta;
    for (int k = 0; k < 80; ++k) {
        m *= 2.0;
        const auto res = check_mgf_condition(dist, theta, m);
        if (res.finite && res.sup_value < 1e6) return m;
    }
    throw ConditionUnreachable("select_m: no finite tilted-moment witness found");
}

double compute_delta(const ClaimDistribution& dist, double theta, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("compute_delta: epsilon must be positive");
    const double gamma = gamma_of(dist, theta).gamma;
    const double sup = sup_over_levels(
        dist, [&](double d) { return gamma * dist.mean_residual_life(d) + epsilon; });
    return std::max(theta, sup);
}

double compute_n_lower(const ClaimDistribution& dist, double theta, double epsilon,
                       double delta, double m) {
    if (!check_mgf_condition(dist, theta, m).finite)
        throw std::invalid_argument(
            "compute_n_lower: tilted-moment condition fails for this m");
    const double gamma = gamma_of(dist, theta).gamma;
    const double floor = std::max(delta * delta, m);

    const auto satisfied = [&](double n) {
        return lower_condition_lhs(dist, gamma, n) <= epsilon;
    };

    double lo = floor * (1.0 + 1e-9);
    if (satisfied(lo)) return lo;
    double hi = lo;
    while (!satisfied(hi)) {
        hi *= 2.0;
        if (hi > kSearchCap)
            throw ConditionUnreachable(
                "compute_n_lower: threshold not reached by n = 1e12; epsilon too small");
    }
    lo = hi / 2.0;
    // the left side decreases in n, so bisection pins the threshold
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (satisfied(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

LowerBoundCert make_lower_cert(const ClaimDistribution& dist, double theta,
                               double epsilon) {
    LowerBoundCert cert;
    cert.epsilon = epsilon;
    cert.m = select_m(dist, theta);
    cert.delta = compute_delta(dist, theta, epsilon);
    cert.n_lower = compute_n_lower(dist, theta, epsilon, cert.delta, cert.m);
    return cert;
}

double lower_bound(const LowerBoundCert& cert, const DiffusionApprox& approx,
                   double n, double x) {
    if (!(n > cert.n_lower))
        throw ScalingTooSmall("lower_bound: n at or below the certified threshold");
    return (1.0 - cert.delta / std::sqrt(n)) * std::exp(-approx.gamma * x);
}

double compute_alpha(const ClaimDistribution& dist, double theta, double margin) {
    if (!(margin > 0.0))
        throw std::invalid_argument(
            "compute_alpha: margin must be strictly positive (strict threshold)");
    const double gamma = gamma_of(dist, theta).gamma;
    return (1.0 + margin) * gamma * gamma * dist.moment(3) / (3.0 * dist.moment(2));
}

double supersolution_margin(const ClaimDistribution& dist, double theta, double alpha,
                            double n) {
    const double gamma = gamma_of(dist, theta).gamma;
    if (!(n > (alpha / gamma) * (alpha / gamma)))
        throw DomainError("supersolution_margin: need n > (alpha/gamma)^2");
    const double sn = std::sqrt(n);
    const double rate = gamma - alpha / sn;
    const double u = rate / sn;
    if (u >= dist.mgf_radius()) return -kInf;
    return (sn + theta) * dist.moment(1) * rate - n * (dist.mgf(u) - 1.0);
}

double compute_n_upper(const ClaimDistribution& dist, double theta, double alpha) {
    const double gamma = gamma_of(dist, theta).gamma;
    double candidate = (alpha / gamma) * (alpha / gamma) * (1.0 + 1e-9);

    for (int attempt = 0; attempt < 200; ++attempt) {
        // doubling search for a positive margin
        double n = candidate;
        while (!(supersolution_margin(dist, theta, alpha, n) > 0.0)) {
            n *= 2.0;
            if (n > kSearchCap)
                throw ConditionUnreachable(
                    "compute_n_upper: margin not positive by n = 1e12");
        }
        // confirm positivity on the geometric sweep above the candidate
        bool confirmed = true;
        double probe = n;
        for (int j = 0; j <= 10; ++j) {
            if (!(supersolution_margin(dist, theta, alpha, probe) > 0.0)) {
                candidate = probe * (1.0 + 1e-9);
                confirmed = false;
                break;
            }
            probe *= 2.0;
        }
        if (confirmed) return n;
    }
    throw ConditionUnreachable("compute_n_upper: sweep confirmation failed");
}

UpperBoundCert make_upper_cert(const ClaimDistribution& dist, double theta,
                               double margin) {
    UpperBoundCert cert;
    cert.alpha = compute_alpha(dist, theta, margin);
    cert.n_upper = compute_n_upper(dist, theta, cert.alpha);
    cert.largest_verified_n = cert.n_upper * 1024.0;
    return cert;
}

double upper_bound(const UpperBoundCert& cert, const DiffusionApprox& approx,
                   double n, double x) {
    if (!(n > cert.n_upper))
        throw ScalingTooSmall("upper_bound: n at or below the certified threshold");
    return std::exp(-(approx.gamma - cert.alpha / std::sqrt(n)) * x);
}

nlohmann::json BoundCertificates::to_json() const {
    return nlohmann::json{{"epsilon", lower.epsilon}, {"m", lower.m},
                          {"delta", lower.delta},     {"n_lower", lower.n_lower},
                          {"alpha", upper.alpha},     {"n_upper", upper.n_upper}};
}

BoundCertificates BoundCertificates::from_json(const nlohmann::json& j) {
    BoundCertificates certs;
    certs.lower.epsilon = j.at("epsilon").get<double>();
    certs.lower.m = j.at("m").get<double>();
    certs.lower.delta = j.at("delta").get<double>();
    certs.lower.n_lower = j.at("n_lower").get<double>();
    certs.upper.alpha = j.at("alpha").get<double>();
    certs.upper.n_upper = j.at("n_upper").get<double>();
    certs.upper.largest_verified_n = certs.upper.n_upper * 1024.0;
    return certs;
}

bool verify_certificates(const ClaimDistribution& dist, double theta,
                         const BoundCertificates& certs) {
    const double gamma = gamma_of(dist, theta).gamma;
    const auto& lo = certs.lower;
    const auto& up = certs.upper;

    if (!check_mgf_condition(dist, theta, lo.m).finite) return false;
    const double mrl_sup = sup_over_levels(dist, [&](double d) {
        return gamma * dist.mean_residual_life(d) + lo.epsilon;
    });
    if (lo.delta + 1e-12 < theta || lo.delta + 1e-12 < mrl_sup) return false;
    if (!(lo.n_lower > std::max(lo.delta * lo.delta, lo.m))) return false;
    if (lower_condition_lhs(dist, gamma, lo.n_lower) > lo.epsilon * (1.0 + 1e-9))
        return false;

    if (!(up.alpha > gamma * gamma * dist.moment(3) / (3.0 * dist.moment(2))))
        return false;
    if (!(up.n_upper > (up.alpha / gamma) * (up.alpha / gamma))) return false;
    double probe = up.n_upper * (1.0 + 1e-9);
    for (int j = 0; j <= 10; ++j) {
        if (!(supersolution_margin(dist, theta, up.alpha, probe) > 0.0)) return false;
        probe *= 2.0;
    }
    return true;
}

SandwichReport sandwich_report(const ModelParams& base, const LowerBoundCert& lower,
                               const UpperBoundCert& upper,
                               std::span<const double> n_values,
                               std::span<const double> grid, double slack) {
    const DiffusionApprox approx = gamma_of(base.dist, base.theta);
    const double x_max = grid.empty() ? 1.0 : grid.back();

    SandwichReport report;
    report.rows.reserve(n_values.size() * grid.size());
    for (double n : n_values) {
        if (!(n > lower.n_lower) || !(n > upper.n_upper))
            throw ScalingTooSmall("sandwich_report: n below a certified threshold");
        if (!(supersolution_margin(base.dist, base.theta, upper.alpha, n) > 0.0))
            report.margins_positive = false;

        const ScaledModel model(base, n);
        const PsiNEvaluator psi(model, preferred_method(base.dist), x_max);
        const double sn = std::sqrt(n);
        for (double x : grid) {
            SandwichRow row;
            row.n = n;
            row.x = x;
            row.lower = lower_bound(lower, approx, n, x);
            row.psi = psi(x);
            row.upper = upper_bound(upper, approx, n, x);

            const double psid = psi_d(approx, x);
            const double diff = row.psi - psid;
            row.lower_ok = row.lower < row.psi - slack;
            row.upper_ok = row.psi < row.upper - slack;
            row.envelope_ok = diff >= -lower.delta / sn - slack &&
                              diff <= (row.upper - psid) + slack;
            const double rel = diff / psid;
            row.relative_ok = rel > -lower.delta / sn - slack &&
                              rel < std::expm1(upper.alpha * x / sn) + slack;

            if (!row.lower_ok || !row.upper_ok || !row.envelope_ok || !row.relative_ok)
                ++report.violation_count;
            report.max_abs_error = std::max(report.max_abs_error, std::abs(diff));
            report.rows.push_back(row);
        }
    }
    return report;
}

void SandwichReport::write_csv(std::ostream& os) const {
    char buf[256];
    os << "n,x,lower,psi_n,upper,lower_ok,upper_ok,envelope_ok,relative_ok\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d,%d\n",
                      r.n, r.x, r.lower, r.psi, r.upper, r.lower_ok ? 1 : 0,
                      r.upper_ok ? 1 : 0, r.envelope_ok ? 1 : 0, r.relative_ok ? 1 : 0);
        os << buf;
    }
}

RateReport rate_fit(const ModelParams& base, std::span<const double> n_values,
                    std::span<const double> grid) {
    if (n_values.size() < 4)
        throw std::invalid_argument("rate_fit: need at least four scaling indices");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (!(n_values[i] > n_values[i - 1]))
            throw std::invalid_argument("rate_fit: scaling indices must increase");
    const double first_ratio = n_values[1] / n_values[0];
    for (std::size_t i = 1; i + 1 < n_values.size(); ++i) {
        const double ratio = n_values[i + 1] / n_values[i];
        if (std::abs(ratio / first_ratio - 1.0) > 0.25)
            throw std::invalid_argument("rate_fit: indices must be geometrically spaced");
    }
    if (grid.size() < 2) throw std::invalid_argument("rate_fit: grid too small");

    const DiffusionApprox approx = gamma_of(base.dist, base.theta);
    RateReport report;
    report.grid_step = grid[1] - grid[0];
    report.x_max = grid.back();

    std::vector<double> log_n, log_e;
    for (double n : n_values) {
        const ScaledModel model(base, n);
        const PsiNEvaluator psi(model, preferred_method(base.dist), grid.back());
        double sup = 0.0;
        for (double x : grid)
            sup = std::max(sup, std::abs(psi(x) - psi_d(approx, x)));
        report.sup_errors.emplace_back(n, sup);
        report.constant = std::max(report.constant, sup * std::sqrt(n));
        log_n.push_back(std::log(n));
        log_e.push_back(std::log(sup));
    }
    report.slope = num::fit_line(log_n, log_e).slope;
    return report;
}

void RateReport::write_csv(std::ostream& os) const {
    char buf[128];
    os << "n,sup_abs_error,sqrt_n_times_error\n";
    for (const auto& [n, err] : sup_errors) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", n, err,
                      err * std::sqrt(n));
        os << buf;
    }
}

DiffusionResidualSplit diffusion_residual_split(const ScaledModel& model, double x,
                                                double quad_tol) {
    const auto& dist = model.base.dist;
    const double lam = model.base.lambda;
    const double gamma = gamma_of(dist, model.base.theta).gamma;
    const double sn = model.sqrt_n();

    DiffusionResidualSplit split;
    split.drift_term =
        -lam * std::exp(-gamma * x) * gamma * gamma * gamma / (2.0 * sn) *
        num::integrate(
            [&](double w) {
                const double one_minus = 1.0 - w;
                return one_minus * one_minus * dist.mgf_weighted(3, gamma * w / sn);
            },
            0.0, 1.0, quad_tol);

    const double level = sn * x;
    const double surv = dist.survival(level);
    if (surv > 0.0) {
        split.tail_term =
            sn * gamma * lam * surv *
            num::integrate(
                [&](double w) {
                    return dist.tilted_tail_moment(level, 1, gamma * w / sn);
                },
                0.0, 1.0, quad_tol);
    } else {
        split.tail_term = 0.0;
    }
    return split;
}

}  // namespace clruin
