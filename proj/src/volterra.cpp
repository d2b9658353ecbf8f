#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "clruin/cramer_lundberg.hpp"
#include "clruin/errors.hpp"

namespace clruin {

RuinTable::RuinTable(double step, std::vector<double> values, std::string scheme)
    : step_(step), values_(std::move(values)), scheme_(std::move(scheme)) {
    if (!(step_ > 0.0)) throw std::invalid_argument("RuinTable: step must be positive");
    if (values_.size() < 2) throw std::invalid_argument("RuinTable: need at least two nodes");
}

double RuinTable::operator()(double x) const {
    if (x <= 0.0) return values_.front();
    const double pos = x / step_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) return values_.back();
    const double w = pos - static_cast<double>(i);
    return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

double RuinTable::right_derivative(double x) const {
    if (x < 0.0) x = 0.0;
    double pos = x / step_;
    auto i = static_cast<std::size_t>(pos);
    // at a node, take the slope of the cell to the right
    if (i + 1 >= values_.size()) i = values_.size() - 2;
    return (values_[i + 1] - values_[i]) / step_;
}

void RuinTable::write_csv(std::ostream& os) const {
    char buf[64];
    os << "x,psi\n";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", node(i), values_[i]);
        os << buf;
    }
}

double default_x_max(const ModelParams& params, double tail_bound) {
    const double r = adjustment_coefficient(params);
    return std::log(1.0 / tail_bound) / r;
}

RuinTable solve_volterra(const ModelParams& params, double x_max, double h,
                         const VolterraOptions& opts) {
    if (!(h > 0.0) || !(x_max > 0.0))
        throw std::invalid_argument("solve_volterra: x_max and h must be positive");
    const double steps = x_max / h;
    const auto node_count = static_cast<std::size_t>(std::llround(steps));
    if (node_count < 1 || std::abs(steps - static_cast<double>(node_count)) > 1e-9 * steps)
        throw std::invalid_argument("solve_volterra: h must divide x_max");

    const double c = params.premium_rate();
    const double lam = params.lambda;
    const double mean = params.dist.moment(1);

    // per-node solve: v_j (c - lam h S(0)/2) = lam (h sum + h/2 v_0 S_j + T_j)
    const double diag = c - 0.5 * lam * h * params.dist.survival(0.0);
    if (!(diag > 0.0))
        throw StepTooLarge("solve_volterra: step too coarse for the per-node solve");

    const double tail_fraction = params.dist.tail_integral(x_max) / mean;
    if (tail_fraction > opts.tail_tolerance)
        throw TruncationTooSmall(
            "solve_volterra: integrated-tail mass beyond x_max exceeds tolerance");

    std::vector<double> surv(node_count + 1);
    std::vector<double> tail(node_count + 1);
    for (std::size_t j = 0; j <= node_count; ++j) {
        const double xj = h * static_cast<double>(j);
        surv[j] = params.dist.survival(xj);
        tail[j] = params.dist.tail_integral(xj);
    }

    std::vector<double> v(node_count + 1);
    v[0] = 1.0 / (1.0 + params.theta);  // lam E(Y) / c, seeded analytically
    for (std::size_t j = 1; j <= node_count; ++j) {
        double conv = 0.0;
        for (std::size_t i = 1; i < j; ++i) conv += v[j - i] * surv[i];
        const double rhs = lam * (h * conv + 0.5 * h * v[0] * surv[j] + tail[j]);
        v[j] = rhs / diag;
    }
    return RuinTable(h, std::move(v), "trapezoid-product-integration");
}

}  // namespace clruin
