#include <cmath>
#include <stdexcept>

#include "clruin/cramer_lundberg.hpp"
#include "clruin/errors.hpp"

namespace clruin {

ModelParams::ModelParams(double theta_, double lambda_, ClaimDistribution dist_)
    : theta(theta_), lambda(lambda_), dist(std::move(dist_)) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("ModelParams: safety loading must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("ModelParams: claim rate must be positive");
}

double ModelParams::premium_rate() const {
    return (1.0 + theta) * lambda * dist.moment(1);
}

double psi_exponential_family(double theta, double beta, double n, double x) {
    const double tn = theta / std::sqrt(n);
    return std::exp(-theta * beta * x / (1.0 + tn)) / (1.0 + tn);
}

double gamma_two_adjustment_root(double theta, double beta, double n) {
    const double sn = std::sqrt(n);
    const double tn = theta / sn;
    return sn * beta / (4.0 * (1.0 + tn)) * ((3.0 + 4.0 * tn) - std::sqrt(9.0 + 8.0 * tn));
}

double gamma_two_fast_root(double theta, double beta, double n) {
    const double sn = std::sqrt(n);
    const double tn = theta / sn;
    return sn * beta / (4.0 * (1.0 + tn)) * ((3.0 + 4.0 * tn) + std::sqrt(9.0 + 8.0 * tn));
}

double psi_gamma_two_family(double theta, double beta, double n, double x) {
    const double sn = std::sqrt(n);
    const double tn = theta / sn;
    const double slow = gamma_two_adjustment_root(theta, beta, n);
    const double fast = gamma_two_fast_root(theta, beta, n);
    const double half = 0.5 * (3.0 + 4.0 * tn);
    const double pre = theta / (2.0 * (1.0 + tn));
    const double slow_coef = (2.0 * beta - slow / sn) / (2.0 * theta * beta - half * slow);
    const double fast_coef = (2.0 * beta - fast / sn) / (2.0 * theta * beta - half * fast);
    return pre * (slow_coef * std::exp(-slow * x) + fast_coef * std::exp(-fast * x));
}

double psi_closed_form(const ModelParams& params, double x) {
    if (x < 0.0) throw std::invalid_argument("psi_closed_form: surplus must be >= 0");
    switch (params.dist.kind()) {
        case ClaimKind::Exponential:
            return psi_exponential_family(params.theta, params.dist.rate(), 1.0, x);
        case ClaimKind::GammaTwo:
            return psi_gamma_two_family(params.theta, params.dist.rate(), 1.0, x);
        case ClaimKind::DiscreteEmpirical:
            throw UnsupportedDistribution(
                "psi_closed_form: no closed form for discrete claims");
    }
    throw std::logic_error("psi_closed_form: unreachable");
}

}  // namespace clruin
