#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "clruin/claims.hpp"

namespace clruin {

// Base compound-Poisson surplus model: premiums at rate c = (1+theta) lambda E(Y),
// claims of law Y arriving at Poisson rate lambda, safety loading theta > 0.
struct ModelParams {
    double theta;
    double lambda;
    ClaimDistribution dist;

    ModelParams(double theta_, double lambda_, ClaimDistribution dist_);

    double premium_rate() const;  // c
};

// Grid-sampled ruin probability psi on {0, h, 2h, ..., x_max}.
class RuinTable {
  public:
    RuinTable(double step, std::vector<double> values, std::string scheme);

    double step() const { return step_; }
    double x_max() const { return step_ * static_cast<double>(values_.size() - 1); }
    std::size_t size() const { return values_.size(); }
    double node(std::size_t i) const { return step_ * static_cast<double>(i); }
    std::span<const double> values() const { return values_; }
    const std::string& scheme() const { return scheme_; }

    // Linear interpolation inside the grid; x beyond x_max is clamped.
    double operator()(double x) const;

    // One-sided derivative from the right (forward difference on the grid),
    // which is the derivative the integro-differential operator consumes at
    // kinks of a discrete claim law.
    double right_derivative(double x) const;

    // Header `x,psi`, 17 significant digits, LF line endings.
    void write_csv(std::ostream& os) const;

  private:
    double step_;
    std::vector<double> values_;
    std::string scheme_;
};

struct VolterraOptions {
    // Largest acceptable integrated-tail mass fraction beyond x_max,
    // 1 - F_I(x_max). The marching scheme itself is exact about the tail;
    // this gate protects downstream consumers that treat psi as ~0 there.
    double tail_tolerance = 1e-6;
};

// Marches the ruin integral equation
//   c v(x) = lambda int_0^x v(x-y) S_Y(y) dy + lambda int_x^inf S_Y(y) dy
// on a uniform grid with trapezoidal product integration (second order),
// solving one scalar equation per node. v(0) = 1/(1+theta) is seeded
// analytically. Throws StepTooLarge / TruncationTooSmall per VolterraOptions.
RuinTable solve_volterra(const ModelParams& params, double x_max, double h,
                         const VolterraOptions& opts = {});

// x_max large enough that the Lundberg bound is below tail_bound there.
double default_x_max(const ModelParams& params, double tail_bound = 1e-10);

// Closed-form psi for exponential or GammaTwo claims (n = 1 member of the
// scaled family below). Throws UnsupportedDistribution for discrete claims.
double psi_closed_form(const ModelParams& params, double x);

// The scaled-family closed forms, exposed for the scaling module.
// Exponential claims: psi_n(x) = 1/(1+theta_n) exp(-theta beta x / (1+theta_n)).
double psi_exponential_family(double theta, double beta, double n, double x);
// GammaTwo claims: two-exponential formula with explicit roots.
double psi_gamma_two_family(double theta, double beta, double n, double x);
double gamma_two_adjustment_root(double theta, double beta, double n);
double gamma_two_fast_root(double theta, double beta, double n);

// Brute-force oracle via the ladder-height (geometric compound) representation:
// discretizes the integrated-tail law on a lattice of the given mesh by the
// midpoint rule and runs the compound-geometric recursion. Independent of the
// Volterra path; bias_bound = mesh * sup-density of the integrated tail.
struct PkEstimate {
    double value;
    double bias_bound;
};
PkEstimate psi_pk_oracle(const ModelParams& params, double x, double mesh);

// Whole-lattice variant: psi sampled at {0, mesh, ..., >= x_max} from one
// pass of the compound-geometric recursion.
RuinTable psi_pk_table(const ModelParams& params, double x_max, double mesh);

// Positive root R of c R = lambda (M_Y(R) - 1), found by bracketed root
// finding below the MGF radius; relative tolerance 1e-12.
double adjustment_coefficient(const ModelParams& params);

// exp(-R x).
double lundberg_bound(const ModelParams& params, double x);

// A function the integro-differential operator can consume: values on
// [0, x] plus one-sided derivatives from the right.
struct GridFunction {
    std::function<double(double)> value;
    std::function<double(double)> right_derivative;

    static GridFunction from_table(std::shared_ptr<const RuinTable> table);
    static GridFunction analytic(std::function<double(double)> f,
                                 std::function<double(double)> dfdx);
};

struct FOperatorEvaluation {
    double x;
    double value;
    double quad_error;  // estimate from step halving; 0 for exact sums
};

// F(x, u(x), u_x(x+), u(.)) =
//   -c u_x(x+) - lambda ( int_0^x u(x-y) dF_Y(y) + S_Y(x) - u(x) ).
// The convolution uses trapezoidal quadrature with step halving for the
// continuous families and an exact sum for discrete claims.
FOperatorEvaluation f_operator(const ModelParams& params, const GridFunction& u,
                               double x, double quad_tol = 1e-10);

struct ComparisonOptions {
    bool strict = true;      // strict ordering of operator values and conclusion
    double slack = 1e-9;     // absolute tolerance on every inequality
    double quad_tol = 1e-10;
};

struct ComparisonViolation {
    double x;
    double lhs;
    double rhs;
    std::string what;
};

// Outcome of a numerical comparison-principle check between a candidate
// subsolution u and supersolution v on a grid.
struct ComparisonReport {
    bool boundary_left_ok = false;   // u <= v at the first node
    bool boundary_right_ok = false;  // u <= v at the last node
    bool operator_ordered = false;   // F[u] < F[v] (or <= non-strict) inside
    bool conclusion_holds = false;   // u < v (or <=) inside
    std::vector<ComparisonViolation> violations;
    std::string note;

    bool hypotheses_hold() const {
        return boundary_left_ok && boundary_right_ok && operator_ordered;
    }
    bool passed() const { return hypotheses_hold() && conclusion_holds; }
};

ComparisonReport comparison_check(const ModelParams& params, const GridFunction& u,
                                  const GridFunction& v, std::span<const double> grid,
                                  const ComparisonOptions& opts = {});

}  // namespace clruin
