#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>

#include "clruin/errors.hpp"

// Small shared numerical kernels: adaptive Simpson quadrature, Brent root
// finding, and an ordinary least-squares line fit.

namespace clruin::num {

namespace detail {

template <typename F>
double simpson_step(F&& f, double a, double fa, double b, double fb, double fm,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b] to absolute tolerance abs_tol.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 48) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, fm, whole, abs_tol, max_depth);
}

// Brent's method on a bracketing interval [a, b] with f(a)*f(b) <= 0.
// Stops when the interval shrinks below rel_tol * |root| + abs_floor.
template <typename F>
double brent_root(F&& f, double a, double b, double rel_tol = 1e-12,
                  double abs_floor = 1e-300, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NoRoot("brent_root: interval does not bracket a root");

    double c = a, fc = fa;
    double d = b - a, e = b - a;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = rel_tol * std::abs(b) + abs_floor;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least-squares line through (x_i, y_i).
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LinearFit out;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    return out;
}

}  // namespace clruin::num
