#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include "clruin/cramer_lundberg.hpp"
#include "clruin/errors.hpp"

namespace clruin {

GridFunction GridFunction::from_table(std::shared_ptr<const RuinTable> table) {
    GridFunction g;
    g.value = [table](double x) { return (*table)(x); };
    g.right_derivative = [table](double x) { return table->right_derivative(x); };
    return g;
}

GridFunction GridFunction::analytic(std::function<double(double)> f,
                                    std::function<double(double)> dfdx) {
    GridFunction g;
    g.value = std::move(f);
    g.right_derivative = std::move(dfdx);
    return g;
}

namespace {

// trapezoid on [0, x] of y -> u(x - y) f_Y(y), intervals doubled until the
// halving estimate meets quad_tol
std::pair<double, double> convolution_continuous(const ModelParams& params,
                                                 const GridFunction& u, double x,
                                                 double quad_tol) {
    const auto integrand = [&](double y) {
        return u.value(x - y) * params.dist.density(y);
    };
    std::size_t intervals = 16;
    double h = x / static_cast<double>(intervals);
    double sum = 0.5 * (integrand(0.0) + integrand(x));
    for (std::size_t i = 1; i < intervals; ++i)
        sum += integrand(h * static_cast<double>(i));
    double estimate = sum * h;
    double error = std::numeric_limits<double>::infinity();
    while (intervals < (1u << 21)) {
        double mid = 0.0;
        for (std::size_t i = 0; i < intervals; ++i)
            mid += integrand(h * (static_cast<double>(i) + 0.5));
        intervals *= 2;
        h *= 0.5;
        sum += mid;
        const double refined = sum * h;
        error = std::abs(refined - estimate) / 3.0;
        estimate = refined;
        if (error <= quad_tol) break;
    }
    return {estimate, error};
}

}  // namespace

FOperatorEvaluation f_operator(const ModelParams& params, const GridFunction& u,
                               double x, double quad_tol) {
    if (!(x > 0.0)) throw std::invalid_argument("f_operator: location must be > 0");

    double conv = 0.0;
    double quad_error = 0.0;
    if (params.dist.kind() == ClaimKind::DiscreteEmpirical) {
        const auto& ys = params.dist.support();
        const auto& ps = params.dist.probs();
        for (std::size_t i = 0; i < ys.size() && ys[i] <= x; ++i)
            conv += ps[i] * u.value(x - ys[i]);
    } else {
        std::tie(conv, quad_error) = convolution_continuous(params, u, x, quad_tol);
    }

    FOperatorEvaluation out;
    out.x = x;
    out.value = -params.premium_rate() * u.right_derivative(x) -
                params.lambda * (conv + params.dist.survival(x) - u.value(x));
    out.quad_error = params.lambda * quad_error;
    return out;
}

ComparisonReport comparison_check(const ModelParams& params, const GridFunction& u,
                                  const GridFunction& v, std::span<const double> grid,
                                  const ComparisonOptions& opts) {
    if (grid.size() < 2)
        throw std::invalid_argument("comparison_check: grid needs at least two nodes");

    ComparisonReport rep;
    const double slack = opts.slack;
    const double a = grid.front();
    const double b = grid.back();

    rep.boundary_left_ok = u.value(a) <= v.value(a) + slack;
    rep.boundary_right_ok = u.value(b) <= v.value(b) + slack;
    if (!rep.boundary_left_ok)
        rep.violations.push_back({a, u.value(a), v.value(a), "boundary u <= v"});
    if (!rep.boundary_right_ok)
        rep.violations.push_back({b, u.value(b), v.value(b), "boundary u <= v"});

    // strict: lhs must beat rhs by more than the slack; non-strict: within it
    const auto ordered = [&](double lhs, double rhs) {
        return opts.strict ? lhs < rhs - slack : lhs <= rhs + slack;
    };

    rep.operator_ordered = true;
    rep.conclusion_holds = true;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double x = grid[i];
        if (!(x > 0.0)) continue;  // operator defined for x > 0
        const double fu = f_operator(params, u, x, opts.quad_tol).value;
        const double fv = f_operator(params, v, x, opts.quad_tol).value;
        if (!ordered(fu, fv)) {
            rep.operator_ordered = false;
            rep.violations.push_back({x, fu, fv, "operator ordering F[u] vs F[v]"});
        }
        if (!ordered(u.value(x), v.value(x))) {
            rep.conclusion_holds = false;
            rep.violations.push_back({x, u.value(x), v.value(x), "conclusion u vs v"});
        }
    }

    if (params.dist.kind() == ClaimKind::DiscreteEmpirical)
        rep.note =
            "discrete claim law: psi has kinks at support points; grid verification "
            "near them is heuristic";
    return rep;
}

}  // namespace clruin
