#include <cmath>
#include <stdexcept>
#include <vector>

#include "clruin/cramer_lundberg.hpp"

namespace clruin {

namespace {

// Ladder-height route: ruin probability equals the tail of a compound
// geometric sum of integrated-tail variables,
//   1 - psi(x) = (1 - rho) sum_k rho^k F_I^{*k}(x),  rho = 1/(1+theta),
// with F_I(y) = (1/E Y) int_0^y S_Y. The integrated tail is discretized on a
// lattice by the midpoint rule and the compound law built by the standard
// recursive convolution for a geometric count. Returns the compound survival
// function on the lattice {0, mesh, ..., J mesh}.
std::vector<double> compound_survival(const ModelParams& params, std::size_t lattice,
                                      double mesh) {
    const double mean = params.dist.moment(1);
    const double rho = 1.0 / (1.0 + params.theta);

    auto integrated_tail_cdf = [&](double y) {
        return 1.0 - params.dist.tail_integral(y) / mean;
    };
    std::vector<double> mass(lattice + 1);
    double prev = 0.0;
    for (std::size_t j = 0; j <= lattice; ++j) {
        const double hi = integrated_tail_cdf((static_cast<double>(j) + 0.5) * mesh);
        mass[j] = hi - prev;
        prev = hi;
    }

    const double denom = 1.0 - rho * mass[0];
    std::vector<double> g(lattice + 1);
    std::vector<double> survival(lattice + 1);
    g[0] = (1.0 - rho) / denom;
    double cdf = g[0];
    survival[0] = 1.0 - cdf;
    for (std::size_t j = 1; j <= lattice; ++j) {
        double conv = 0.0;
        for (std::size_t i = 1; i <= j; ++i) conv += mass[i] * g[j - i];
        g[j] = rho / denom * conv;
        cdf += g[j];
        survival[j] = 1.0 - cdf;
    }
    return survival;
}

}  // namespace

PkEstimate psi_pk_oracle(const ModelParams& params, double x, double mesh) {
    if (!(mesh > 0.0)) throw std::invalid_argument("psi_pk_oracle: mesh must be positive");
    if (x < 0.0) x = 0.0;
    const auto lattice = static_cast<std::size_t>(std::floor(x / mesh + 1e-12));
    PkEstimate est;
    est.value = compound_survival(params, lattice, mesh).back();
    // density of the integrated tail is S_Y / E(Y) <= 1 / E(Y)
    est.bias_bound = mesh / params.dist.moment(1);
    return est;
}

RuinTable psi_pk_table(const ModelParams& params, double x_max, double mesh) {
    if (!(mesh > 0.0) || !(x_max > 0.0))
        throw std::invalid_argument("psi_pk_table: mesh and x_max must be positive");
    const auto lattice = static_cast<std::size_t>(std::ceil(x_max / mesh - 1e-12));
    return RuinTable(mesh, compound_survival(params, lattice, mesh),
                     "ladder-height-midpoint");
}

}  // namespace clruin
