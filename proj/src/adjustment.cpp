#include <cmath>
#include <limits>

#include "clruin/cramer_lundberg.hpp"
#include "clruin/errors.hpp"
#include "clruin/numerics.hpp"

namespace clruin {

namespace {

// g(r) = M_Y(r) - 1 - (c/lambda) r. Convex, g(0) = 0, g'(0) < 0 because
// c > lambda E(Y); the adjustment coefficient is its positive zero.
double lundberg_gap(const ModelParams& params, double r) {
    return params.dist.mgf(r) - 1.0 - params.premium_rate() / params.lambda * r;
}

}  // namespace

double adjustment_coefficient(const ModelParams& params) {
    const double u0 = params.dist.mgf_radius();

    // find an upper bracket with g > 0
    double hi = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(u0)) {
        // approach the singularity from the left
        double frac = 0.5;
        for (int k = 0; k < 60; ++k) {
            const double cand = u0 * (1.0 - frac);
            if (cand > 0.0 && lundberg_gap(params, cand) > 0.0) {
                hi = cand;
                break;
            }
            frac *= 0.5;
        }
    } else {
        double cand = 1.0 / params.dist.moment(1);
        for (int k = 0; k < 200; ++k) {
            if (lundberg_gap(params, cand) > 0.0) {
                hi = cand;
                break;
            }
            cand *= 2.0;
        }
    }
    if (!std::isfinite(hi))
        throw NoRoot("adjustment_coefficient: no positive bracket for the Lundberg equation");

    // lower bracket strictly inside (0, hi); g < 0 near 0 by convexity
    double lo = hi;
    for (int k = 0; k < 200 && lundberg_gap(params, lo) > 0.0; ++k) lo *= 0.5;
    if (lundberg_gap(params, lo) > 0.0)
        throw NoRoot("adjustment_coefficient: function positive throughout the bracket");

    return num::brent_root([&](double r) { return lundberg_gap(params, r); }, lo, hi,
                           1e-13);
}

double lundberg_bound(const ModelParams& params, double x) {
    return std::exp(-adjustment_coefficient(params) * x);
}

}  // namespace clruin
