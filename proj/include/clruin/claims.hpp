#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "clruin/random.hpp"

namespace clruin {

enum class ClaimKind { Exponential, GammaTwo, DiscreteEmpirical };

// Claim-severity distribution: a positive random variable Y with a moment
// generating function that is finite in a neighbourhood of zero.
//
// Three families are supported:
//   Exponential(beta)       density beta e^{-beta y}
//   GammaTwo(beta)          shape-2 gamma, density beta^2 y e^{-beta y}
//   DiscreteEmpirical       finite support {y_i > 0} with probabilities p_i
//
// Everything downstream (ruin solvers, scaling limits, bound certificates)
// consumes Y only through the functionals exposed here, so each of them is
// closed-form and exact for all three families.
class ClaimDistribution {
  public:
    static ClaimDistribution exponential(double beta);
    static ClaimDistribution gamma_two(double beta);
    // Support points are sorted and exact duplicates merged. Probabilities
    // must be strictly positive and sum to 1 within 1e-12.
    static ClaimDistribution discrete(std::vector<double> support,
                                      std::vector<double> probs);

    ClaimKind kind() const { return kind_; }
    double rate() const { return beta_; }  // exponential / gamma2 only
    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }

    // Largest u0 with E exp(uY) finite on (-u0, u0). beta for the two
    // continuous families, +infinity for discrete.
    double mgf_radius() const;

    // E(Y^k), k >= 1.
    double moment(int k) const;

    // E exp(uY); throws DomainError when u >= mgf_radius().
    double mgf(double u) const;

    // E(Y^k e^{uY}) for k in {0,1,2,3}; same domain restriction as mgf().
    double mgf_weighted(int k, double u) const;

    double cdf(double y) const;       // P(Y <= y)
    double survival(double y) const;  // P(Y > y)
    double density(double y) const;   // continuous families only

    // Integrated tail: E(Y - x)^+ = int_x^inf P(Y > y) dy.
    double tail_integral(double x) const;

    // E(Y - d | Y > d). Throws DomainError when P(Y > d) = 0.
    double mean_residual_life(double d) const;

    // E((Y - d)^k e^{c (Y - d)} | Y > d), k in {1,2,3}.
    // Throws DomainError when P(Y > d) = 0 or c >= mgf_radius().
    double tilted_tail_moment(double d, int k, double c) const;

    // Candidate levels d at which a supremum over d >= 0 of the residual
    // functionals above can be attained. The exponential residual law is
    // d-independent and the GammaTwo functionals decrease in d, so both
    // reduce to {0}; a discrete law jumps upward as d crosses a support
    // point, so we scan 0, the support points, and the midpoints between
    // them (skipping levels with no tail mass).
    std::vector<double> sup_scan_points() const;

    // One draw from Y.
    double sample(RandomStream& stream) const;

    // A copy of the law for Y / s, s > 0.
    ClaimDistribution scaled(double s) const;

    nlohmann::json to_json() const;
    static ClaimDistribution from_json(const nlohmann::json& j);

  private:
    ClaimDistribution() = default;

    ClaimKind kind_ = ClaimKind::Exponential;
    double beta_ = 0.0;
    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cum_probs_;  // sampling lookup
};

}  // namespace clruin
