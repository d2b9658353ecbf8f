#include "clruin/claims.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "clruin/errors.hpp"

namespace clruin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial_small(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

ClaimDistribution ClaimDistribution::exponential(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("exponential: rate must be positive and finite");
    ClaimDistribution d;
    d.kind_ = ClaimKind::Exponential;
    d.beta_ = beta;
    return d;
}

ClaimDistribution ClaimDistribution::gamma_two(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("gamma_two: rate must be positive and finite");
    ClaimDistribution d;
    d.kind_ = ClaimKind::GammaTwo;
    d.beta_ = beta;
    return d;
}

ClaimDistribution ClaimDistribution::discrete(std::vector<double> support,
                                              std::vector<double> probs) {
    if (support.empty() || support.size() != probs.size())
        throw std::invalid_argument("discrete: support and probs must be non-empty and match");

    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

    ClaimDistribution d;
    d.kind_ = ClaimKind::DiscreteEmpirical;
    double total = 0.0;
    for (std::size_t idx : order) {
        const double y = support[idx];
        const double p = probs[idx];
        if (!(y > 0.0) || !std::isfinite(y))
            throw std::invalid_argument("discrete: support points must be strictly positive");
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("discrete: probabilities must be strictly positive");
        total += p;
        if (!d.support_.empty() && d.support_.back() == y) {
            d.probs_.back() += p;  // merge duplicates
        } else {
            d.support_.push_back(y);
            d.probs_.push_back(p);
        }
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("discrete: probabilities must sum to 1 within 1e-12");

    d.cum_probs_.resize(d.probs_.size());
    std::partial_sum(d.probs_.begin(), d.probs_.end(), d.cum_probs_.begin());
    d.cum_probs_.back() = 1.0;
    return d;
}

double ClaimDistribution::mgf_radius() const {
    return kind_ == ClaimKind::DiscreteEmpirical ? kInf : beta_;
}

double ClaimDistribution::moment(int k) const {
    if (k < 1) throw std::invalid_argument("moment: order must be >= 1");
    switch (kind_) {
        case ClaimKind::Exponential:
            return factorial_small(k) / std::pow(beta_, k);
        case ClaimKind::GammaTwo:
            return factorial_small(k + 1) / std::pow(beta_, k);
        case ClaimKind::DiscreteEmpirical: {
            double s = 0.0;
            for (std::size_t i = 0; i < support_.size(); ++i)
                s += probs_[i] * std::pow(support_[i], k);
            return s;
        }
    }
    return 0.0;
}

double ClaimDistribution::mgf(double u) const {
    return mgf_weighted(0, u);
}

double ClaimDistribution::mgf_weighted(int k, double u) const {
    if (k < 0 || k > 3) throw std::invalid_argument("mgf_weighted: k must be in 0..3");
    if (u >= mgf_radius())
        throw DomainError("mgf: argument at or beyond the radius of convergence");
    switch (kind_) {
        case ClaimKind::Exponential:
            // E(Y^k e^{uY}) = k! beta / (beta - u)^{k+1}
            return factorial_small(k) * beta_ / std::pow(beta_ - u, k + 1);
        case ClaimKind::GammaTwo:
            // E(Y^k e^{uY}) = (k+1)! beta^2 / (beta - u)^{k+2}
            return factorial_small(k + 1) * beta_ * beta_ / std::pow(beta_ - u, k + 2);
        case ClaimKind::DiscreteEmpirical: {
            double s = 0.0;
            for (std::size_t i = 0; i < support_.size(); ++i)
                s += probs_[i] * std::pow(support_[i], k) * std::exp(u * support_[i]);
            return s;
        }
    }
    return 0.0;
}

double ClaimDistribution::cdf(double y) const {
    return 1.0 - survival(y);
}

double ClaimDistribution::survival(double y) const {
    if (y < 0.0) return 1.0;
    switch (kind_) {
        case ClaimKind::Exponential:
            return std::exp(-beta_ * y);
        case ClaimKind::GammaTwo:
            return std::exp(-beta_ * y) * (1.0 + beta_ * y);
        case ClaimKind::DiscreteEmpirical: {
            double s = 0.0;
            for (std::size_t i = 0; i < support_.size(); ++i)
                if (support_[i] > y) s += probs_[i];
            return s;
        }
    }
    return 0.0;
}

double ClaimDistribution::density(double y) const {
    if (kind_ == ClaimKind::DiscreteEmpirical)
        throw UnsupportedDistribution("density: discrete law has no density");
    if (y < 0.0) return 0.0;
    if (kind_ == ClaimKind::Exponential) return beta_ * std::exp(-beta_ * y);
    return beta_ * beta_ * y * std::exp(-beta_ * y);
}

double ClaimDistribution::tail_integral(double x) const {
    if (x < 0.0) x = 0.0;
    switch (kind_) {
        case ClaimKind::Exponential:
            return std::exp(-beta_ * x) / beta_;
        case ClaimKind::GammaTwo:
            return std::exp(-beta_ * x) * (x + 2.0 / beta_);
        case ClaimKind::DiscreteEmpirical: {
            double s = 0.0;
            for (std::size_t i = 0; i < support_.size(); ++i)
                if (support_[i] > x) s += probs_[i] * (support_[i] - x);
            return s;
        }
    }
    return 0.0;
}

double ClaimDistribution::mean_residual_life(double d) const {
    if (d < 0.0) d = 0.0;
    const double surv = survival(d);
    if (!(surv > 0.0))
        throw DomainError("mean_residual_life: no tail mass beyond the level");
    switch (kind_) {
        case ClaimKind::Exponential:
            return 1.0 / beta_;  // memoryless
        case ClaimKind::GammaTwo:
            return (beta_ * d + 2.0) / (beta_ * (beta_ * d + 1.0));
        case ClaimKind::DiscreteEmpirical:
            return tail_integral(d) / surv;
    }
    return 0.0;
}

double ClaimDistribution::tilted_tail_moment(double d, int k, double c) const {
    if (k < 1 || k > 3) throw std::invalid_argument("tilted_tail_moment: k must be in 1..3");
    if (d < 0.0) d = 0.0;
    if (c >= mgf_radius())
        throw DomainError("tilted_tail_moment: tilt at or beyond the MGF radius");
    const double surv = survival(d);
    if (!(surv > 0.0))
        throw DomainError("tilted_tail_moment: no tail mass beyond the level");
    switch (kind_) {
        case ClaimKind::Exponential:
            // residual of an exponential is again Exp(beta), independent of d
            return factorial_small(k) * beta_ / std::pow(beta_ - c, k + 1);
        case ClaimKind::GammaTwo: {
            // residual density beta^2 (z + d) e^{-beta z} / (1 + beta d)
            const double bc = beta_ - c;
            const double num = factorial_small(k + 1) / std::pow(bc, k + 2) +
                               d * factorial_small(k) / std::pow(bc, k + 1);
            return beta_ * beta_ * num / (1.0 + beta_ * d);
        }
        case ClaimKind::DiscreteEmpirical: {
            double s = 0.0;
            for (std::size_t i = 0; i < support_.size(); ++i) {
                if (support_[i] > d) {
                    const double z = support_[i] - d;
                    s += probs_[i] * std::pow(z, k) * std::exp(c * z);
                }
            }
            return s / surv;
        }
    }
    return 0.0;
}

std::vector<double> ClaimDistribution::sup_scan_points() const {
    if (kind_ != ClaimKind::DiscreteEmpirical) return {0.0};
    std::vector<double> pts{0.0};
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (i + 1 < support_.size())
            pts.push_back(0.5 * (support_[i] + support_[i + 1]));
        if (survival(support_[i]) > 0.0) pts.push_back(support_[i]);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double ClaimDistribution::sample(RandomStream& stream) const {
    switch (kind_) {
        case ClaimKind::Exponential:
            return stream.next_exponential(beta_);
        case ClaimKind::GammaTwo:
            return stream.next_exponential(beta_) + stream.next_exponential(beta_);
        case ClaimKind::DiscreteEmpirical: {
            const double u = stream.next_uniform();
            const auto it = std::upper_bound(cum_probs_.begin(), cum_probs_.end(), u);
            const std::size_t idx =
                std::min(static_cast<std::size_t>(it - cum_probs_.begin()),
                         support_.size() - 1);
            return support_[idx];
        }
    }
    return 0.0;
}

ClaimDistribution ClaimDistribution::scaled(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    switch (kind_) {
        case ClaimKind::Exponential:
            return exponential(beta_ * s);
        case ClaimKind::GammaTwo:
            return gamma_two(beta_ * s);
        case ClaimKind::DiscreteEmpirical: {
            std::vector<double> sup(support_);
            for (double& y : sup) y /= s;
            return discrete(std::move(sup), probs_);
        }
    }
    throw std::logic_error("scaled: unreachable");
}

nlohmann::json ClaimDistribution::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case ClaimKind::Exponential:
            j["kind"] = "exponential";
            j["beta"] = beta_;
            break;
        case ClaimKind::GammaTwo:
            j["kind"] = "gamma2";
            j["beta"] = beta_;
            break;
        case ClaimKind::DiscreteEmpirical:
            j["kind"] = "discrete";
            j["support"] = support_;
            j["probs"] = probs_;
            break;
    }
    return j;
}

ClaimDistribution ClaimDistribution::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exponential") return exponential(j.at("beta").get<double>());
    if (kind == "gamma2") return gamma_two(j.at("beta").get<double>());
    if (kind == "discrete")
        return discrete(j.at("support").get<std::vector<double>>(),
                        j.at("probs").get<std::vector<double>>());
    throw std::invalid_argument("claim distribution: unknown kind '" + kind + "'");
}

}  // namespace clruin
