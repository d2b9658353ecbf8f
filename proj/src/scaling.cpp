#include "clruin/scaling.hpp"

#include <cmath>
#include <stdexcept>

#include "clruin/errors.hpp"
#include "clruin/numerics.hpp"

namespace clruin {

ScaledModel::ScaledModel(ModelParams base_, double n_)
    : base(std::move(base_)), n(n_) {
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("ScaledModel: scaling index must be positive");

    // construction-time identities: net income and claim variance per unit
    // time are invariant under the scaling
    const double mean = base.dist.moment(1);
    const double net_base = base.premium_rate() - base.lambda * mean;
    const double net_scaled =
        premium_rate_n() - lambda_n() * scaled_claims().moment(1);
    if (std::abs(net_scaled - net_base) > 1e-12 * std::max(1.0, std::abs(net_base)))
        throw std::logic_error("ScaledModel: net income invariance violated");

    const double var_base = base.lambda * base.dist.moment(2);
    const double var_scaled = lambda_n() * scaled_claims().moment(2);
    if (std::abs(var_scaled - var_base) > 1e-12 * std::max(1.0, var_base))
        throw std::logic_error("ScaledModel: variance invariance violated");
}

double ScaledModel::sqrt_n() const { return std::sqrt(n); }

double ScaledModel::premium_rate_n() const {
    return (sqrt_n() + base.theta) * base.lambda * base.dist.moment(1);
}

ModelParams ScaledModel::as_base_model() const {
    return ModelParams(theta_n(), lambda_n(), scaled_claims());
}

ModelParams ScaledModel::loading_equivalent() const {
    return ModelParams(theta_n(), base.lambda, base.dist);
}

DiffusionApprox gamma_of(const ClaimDistribution& dist, double theta) {
    return DiffusionApprox{2.0 * theta * dist.moment(1) / dist.moment(2)};
}

double psi_d(const DiffusionApprox& approx, double x) {
    return std::exp(-approx.gamma * x);
}

PsiMethod preferred_method(const ClaimDistribution& dist) {
    return dist.kind() == ClaimKind::DiscreteEmpirical ? PsiMethod::Volterra
                                                       : PsiMethod::ClosedForm;
}

PsiNEvaluator::PsiNEvaluator(ScaledModel model, PsiMethod method, double x_max,
                             const PsiNOptions& opts)
    : model_(std::move(model)), method_(method), opts_(opts) {
    if (method_ == PsiMethod::ClosedForm &&
        model_.base.dist.kind() == ClaimKind::DiscreteEmpirical)
        throw UnsupportedDistribution("psi_n: no closed form for discrete claims");
    if (method_ == PsiMethod::Volterra) {
        // solve once in loading-equivalent coordinates, covering sqrt(n) x_max
        const double extent = (opts_.x_max > 0.0 ? opts_.x_max : x_max);
        const double h = opts_.volterra_step;
        double base_extent = model_.sqrt_n() * extent;
        base_extent = std::ceil(std::max(base_extent, h) / h) * h;
        table_ = std::make_shared<const RuinTable>(
            solve_volterra(model_.loading_equivalent(), base_extent, h));
    }
}

double PsiNEvaluator::operator()(double x) const {
    if (x < 0.0) throw std::invalid_argument("psi_n: surplus must be >= 0");
    const double theta = model_.base.theta;
    switch (method_) {
        case PsiMethod::ClosedForm:
            switch (model_.base.dist.kind()) {
                case ClaimKind::Exponential:
                    return psi_exponential_family(theta, model_.base.dist.rate(),
                                                  model_.n, x);
                case ClaimKind::GammaTwo:
                    return psi_gamma_two_family(theta, model_.base.dist.rate(),
                                                model_.n, x);
                default:
                    throw UnsupportedDistribution(
                        "psi_n: no closed form for discrete claims");
            }
        case PsiMethod::Volterra:
            return (*table_)(model_.sqrt_n() * x);
        case PsiMethod::PK:
            return psi_pk_oracle(model_.loading_equivalent(), model_.sqrt_n() * x,
                                 opts_.pk_mesh)
                .value;
    }
    throw std::logic_error("psi_n: unreachable");
}

double psi_n(const ScaledModel& model, double x, PsiMethod method,
             const PsiNOptions& opts) {
    return PsiNEvaluator(model, method, std::max(x, 1e-6), opts)(x);
}

double rn_scaled(const ScaledModel& model) {
    const auto& dist = model.base.dist;
    const double sn = model.sqrt_n();
    const double gamma = gamma_of(dist, model.base.theta).gamma;
    const double mean_n = dist.moment(1) / sn;

    // root of E exp(r Y/sqrt(n)) - 1 - (1 + theta_n) E(Y/sqrt(n)) r
    const auto gap = [&](double r) {
        return dist.mgf(r / sn) - 1.0 - (1.0 + model.theta_n()) * mean_n * r;
    };

    double hi = gamma;
    const double u0 = dist.mgf_radius();
    if (std::isfinite(u0)) hi = std::min(hi, sn * u0 * (1.0 - 1e-9));
    if (!(gap(hi) > 0.0))
        throw NoRoot("rn_scaled: no bracket below gamma for the scaled root");

    double lo = hi;
    for (int k = 0; k < 200 && gap(lo) > 0.0; ++k) lo *= 0.5;
    if (gap(lo) > 0.0) throw NoRoot("rn_scaled: function positive throughout");

    const double root = num::brent_root(gap, lo, hi, 1e-13);
    if (!(root < gamma))
        throw NoRoot("rn_scaled: root not below the diffusion decay rate");
    return root;
}

double cl_asymptotic_constant(const ScaledModel& model) {
    const auto& dist = model.base.dist;
    const double sn = model.sqrt_n();
    const double theta = model.base.theta;
    const double rn = rn_scaled(model);
    const double mean = dist.moment(1);
    const double denom = sn * dist.mgf_weighted(1, rn / sn) - (sn + theta) * mean;
    return theta * mean / denom;
}

FOperatorEvaluation fn_operator(const ScaledModel& model, const GridFunction& u,
                                double x, double quad_tol) {
    return f_operator(model.as_base_model(), u, x, quad_tol);
}

}  // namespace clruin
