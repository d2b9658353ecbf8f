#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "clruin/scaling.hpp"

namespace clruin {

// ---------------------------------------------------------------------------
// Lower bound: (1 - delta/sqrt(n)) exp(-gamma x) < psi_n(x) for all n past a
// certified threshold. The constants come from explicit tail functionals of
// the claim law; construction makes each choice machine-checkable.
// ---------------------------------------------------------------------------

struct MgfConditionResult {
    bool finite;
    double sup_value;  // sup over d of E((Y-d)^2 e^{(gamma/sqrt(m))(Y-d)} | Y>d)
};

// Does the tilted second residual moment stay finite uniformly in the level d
// when tilted at gamma / sqrt(m)?
MgfConditionResult check_mgf_condition(const ClaimDistribution& dist, double theta,
                                       double m);

// Smallest m on a doubling grid above theta^2 whose tilted-moment sup is
// finite and below 1e6.
double select_m(const ClaimDistribution& dist, double theta);

// delta = max( theta, sup_d gamma E(Y - d | Y > d) + epsilon ).
double compute_delta(const ClaimDistribution& dist, double theta, double epsilon);

// Smallest N > max(delta^2, m) such that
//   sup_d (gamma^2/sqrt(N)) int_0^1 (1-w) E((Y-d)^2 e^{(gamma w/sqrt(N))(Y-d)} | Y>d) dw
// stays below epsilon. The left side decreases in N, so the doubling-then-
// bisection search certifies a threshold. Throws ConditionUnreachable past 1e12.
double compute_n_lower(const ClaimDistribution& dist, double theta, double epsilon,
                       double delta, double m);

struct LowerBoundCert {
    double epsilon;
    double m;
    double delta;
    double n_lower;
};

LowerBoundCert make_lower_cert(const ClaimDistribution& dist, double theta,
                               double epsilon = 0.01);

// (1 - delta/sqrt(n)) exp(-gamma x); throws ScalingTooSmall for n <= n_lower.
double lower_bound(const LowerBoundCert& cert, const DiffusionApprox& approx,
                   double n, double x);

// ---------------------------------------------------------------------------
// Upper bound: psi_n(x) < exp(-(gamma - alpha/sqrt(n)) x) once the margin
// below turns positive.
// ---------------------------------------------------------------------------

// alpha = (1 + margin) * gamma^2 E(Y^3) / (3 E(Y^2)); margin must be > 0
// because the threshold inequality is strict.
double compute_alpha(const ClaimDistribution& dist, double theta, double margin);

// The x-independent factor whose positivity makes exp(-(gamma-alpha/sqrt(n))x)
// a supersolution:
//   (sqrt(n)+theta) E(Y) (gamma - alpha/sqrt(n)) - n (M_Y((gamma-alpha/sqrt(n))/sqrt(n)) - 1).
// Requires n > (alpha/gamma)^2; -inf when the MGF argument leaves its domain.
double supersolution_margin(const ClaimDistribution& dist, double theta, double alpha,
                            double n);

// First n > (alpha/gamma)^2 on a doubling search with positive margin,
// confirmed on the geometric sweep {N 2^j, j = 0..10}.
double compute_n_upper(const ClaimDistribution& dist, double theta, double alpha);

struct UpperBoundCert {
    double alpha;
    double n_upper;
    double largest_verified_n;  // top of the positivity sweep
};

UpperBoundCert make_upper_cert(const ClaimDistribution& dist, double theta,
                               double margin = 0.1);

double upper_bound(const UpperBoundCert& cert, const DiffusionApprox& approx,
                   double n, double x);

struct BoundCertificates {
    LowerBoundCert lower;
    UpperBoundCert upper;

    nlohmann::json to_json() const;
    static BoundCertificates from_json(const nlohmann::json& j);
};

// Re-evaluates every certified inequality from the stored constants.
bool verify_certificates(const ClaimDistribution& dist, double theta,
                         const BoundCertificates& certs);

// ---------------------------------------------------------------------------
// Two-sided sandwich and the uniform convergence rate.
// ---------------------------------------------------------------------------

struct SandwichRow {
    double n;
    double x;
    double lower;
    double psi;
    double upper;
    bool lower_ok;
    bool upper_ok;
    bool envelope_ok;  // -delta/sqrt(n) <= psi_n - psi_d <= upper - psi_d
    bool relative_ok;  // -delta/sqrt(n) < (psi_n - psi_d)/psi_d < e^{alpha x/sqrt(n)} - 1
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    std::size_t violation_count = 0;
    double max_abs_error = 0.0;  // max |psi_n - psi_d| over the sweep
    bool margins_positive = true;  // supersolution margin at every requested n

    bool all_ok() const { return violation_count == 0 && margins_positive; }
    void write_csv(std::ostream& os) const;
};

SandwichReport sandwich_report(const ModelParams& base, const LowerBoundCert& lower,
                               const UpperBoundCert& upper,
                               std::span<const double> n_values,
                               std::span<const double> grid, double slack = 1e-9);

struct RateReport {
    std::vector<std::pair<double, double>> sup_errors;  // (n, sup_x |psi_n - psi_d|)
    double slope = 0.0;      // log-log least squares
    double constant = 0.0;   // max_n sup_error * sqrt(n)
    double grid_step = 0.0;
    double x_max = 0.0;

    void write_csv(std::ostream& os) const;  // n,sup_abs_error,sqrt_n_times_error
};

// Requires at least four n values in (approximately) geometric progression.
RateReport rate_fit(const ModelParams& base, std::span<const double> n_values,
                    std::span<const double> grid);

// The two pieces of the scaled operator evaluated at the diffusion limit:
// a strictly negative O(n^{-1/2}) drift correction and a nonnegative
// boundary-layer term supported where the claim tail reaches sqrt(n) x.
// Their sum equals fn_operator at exp(-gamma x).
struct DiffusionResidualSplit {
    double drift_term;
    double tail_term;
};

DiffusionResidualSplit diffusion_residual_split(const ScaledModel& model, double x,
                                                double quad_tol = 1e-10);

}  // namespace clruin
