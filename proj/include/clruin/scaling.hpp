#pragma once

#include <memory>

#include "clruin/cramer_lundberg.hpp"

namespace clruin {

// Scaled family member: claim rate multiplied by n, severities divided by
// sqrt(n), premium rate adjusted so net premium income is invariant. The
// index n may be any positive real.
struct ScaledModel {
    ModelParams base;
    double n;

    ScaledModel(ModelParams base_, double n_);

    double sqrt_n() const;
    double lambda_n() const { return n * base.lambda; }
    double theta_n() const { return base.theta / sqrt_n(); }
    double premium_rate_n() const;  // c_n = (sqrt(n) + theta) lambda E(Y)

    ClaimDistribution scaled_claims() const { return base.dist.scaled(sqrt_n()); }

    // The scaled system viewed as a base model in its own right:
    // loading theta_n, rate lambda_n, claims Y / sqrt(n).
    ModelParams as_base_model() const;

    // Loading-equivalent base model for the scaling identity
    // psi_n(x) = psi_{(theta_n, Y)}(sqrt(n) x): same claims, loading theta_n.
    ModelParams loading_equivalent() const;
};

// Ruin probability of the limiting diffusion: exp(-gamma x).
struct DiffusionApprox {
    double gamma;
};

DiffusionApprox gamma_of(const ClaimDistribution& dist, double theta);
double psi_d(const DiffusionApprox& approx, double x);

enum class PsiMethod { ClosedForm, Volterra, PK };

struct PsiNOptions {
    double volterra_step = 0.01;  // grid step of the loading-equivalent solve
    double pk_mesh = 1e-3;
    double x_max = 0.0;  // scaled-units table extent; 0 = derive from request
};

// Evaluates psi_n repeatedly; the Volterra route pre-solves the
// loading-equivalent base table once and reads it at sqrt(n) x.
class PsiNEvaluator {
  public:
    PsiNEvaluator(ScaledModel model, PsiMethod method, double x_max,
                  const PsiNOptions& opts = {});

    double operator()(double x) const;
    PsiMethod method() const { return method_; }

  private:
    ScaledModel model_;
    PsiMethod method_;
    PsiNOptions opts_;
    std::shared_ptr<const RuinTable> table_;
};

// Single-point convenience wrapper.
double psi_n(const ScaledModel& model, double x, PsiMethod method,
             const PsiNOptions& opts = {});

// Picks the closed form when the family has one, else the Volterra route.
PsiMethod preferred_method(const ClaimDistribution& dist);

// Adjustment coefficient of the scaled system, i.e. the positive root of
//   E exp(r Y / sqrt(n)) = 1 + (1 + theta_n) E(Y / sqrt(n)) r,
// bracketed inside (0, min(gamma, sqrt(n) u0)); it always lies below gamma.
double rn_scaled(const ScaledModel& model);

// Constant of the Cramer-Lundberg asymptotic for the scaled system:
//   theta E(Y) / ( sqrt(n) E(Y e^{Rn Y / sqrt(n)}) - (sqrt(n) + theta) E(Y) ).
double cl_asymptotic_constant(const ScaledModel& model);

// The scaled integro-differential operator: the base operator with
// c, lambda, Y replaced by c_n, lambda_n, Y/sqrt(n).
FOperatorEvaluation fn_operator(const ScaledModel& model, const GridFunction& u,
                                double x, double quad_tol = 1e-10);

}  // namespace clruin
