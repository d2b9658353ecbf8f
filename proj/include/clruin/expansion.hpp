#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace clruin {

// Higher-order correction of the diffusion limit for exponential claims.
//
// With f(z, w) = (1+w)^{-1} exp(-z/(1+w)), the scaled ruin probability is
// psi_n(x) = f(theta beta x, theta/sqrt(n)), so Taylor coefficients in the
// second argument give a uniform expansion in powers of n^{-1/2} to any
// order. Each w-derivative of f is again a finite combination
//   sum c * z^a * (1+w)^{-b} * f(z, w),
// and differentiation acts termwise:
//   (c, a, b) -> (-(b+1) c, a, b+1) + (c, a+1, b+2).
// Coefficients are kept as exact rationals; they grow roughly factorially
// and would lose integrity in doubles well before the supported order.
class DerivativeTermSum {
  public:
    using Rational = boost::multiprecision::cpp_rational;

    struct Term {
        Rational coeff;
        int z_power;    // a
        int inv_power;  // b
    };

    static DerivativeTermSum identity();  // order 0: the single term (1, 0, 0)

    // exact d/dw applied termwise, like terms merged
    DerivativeTermSum differentiate() const;

    double evaluate(double z, double w) const;
    long double evaluate_ld(long double z, long double w) const;

    int order() const { return order_; }
    const std::vector<Term>& terms() const { return terms_; }

  private:
    int order_ = 0;
    std::vector<Term> terms_;
};

// d^k f / dw^k as a term sum; k <= 20 (coefficient growth cap, documented).
DerivativeTermSum derivative_terms(int k);

// f(z, w) itself.
double f_eval(double z, double w);

// Partial sum of the expansion through order k at surplus x and scale n:
//   sum_{m=0}^{k} (n^{-m/2} / m!) theta^m [d^m f/dw^m](theta beta x, 0).
double expansion_k(double theta, double beta, double x, double n, int k);

struct ResidualRow {
    double n;
    double sup_residual;  // max over the grid of |psi_n - expansion_k|
    double normalized;    // sup_residual * n^{(k+1)/2}
};

struct ResidualReport {
    int k = 0;
    std::vector<ResidualRow> rows;
    bool bounded = false;  // < 10% upward drift across the top three n

    void write_csv(std::ostream& os) const;  // n,k,sup_residual,normalized_residual
};

// Measures the uniform remainder of the order-k expansion along an n sweep.
// Internals run in extended precision: at large n the remainder sits below
// double roundoff of psi_n itself.
ResidualReport residual_scaling_check(double theta, double beta, int k,
                                      std::span<const double> n_values,
                                      std::span<const double> grid);

// First-order expansion for shape-2 gamma claims. The x = 0 value is a
// separate branch: the expansion is genuinely discontinuous there.
double gamma2_first_order(double theta, double beta, double x, double n);

struct DivergenceRow {
    double n;
    double d_value;  // n (psi_n(0) - first-order expansion limit at x -> 0+)
    double ratio;    // d_value / (-theta sqrt(n) / 9)
};

struct DivergenceReport {
    std::vector<DivergenceRow> rows;
    bool converged = false;  // final ratio within 5% of 1

    void write_csv(std::ostream& os) const;  // n,D,ratio
};

// Quantifies the x = 0 breakdown of the gamma-2 first-order expansion: the
// mismatch grows like theta sqrt(n) / 9, so no uniform O(1/n) correction
// exists for this family.
DivergenceReport gamma2_divergence_demo(double theta, double beta,
                                        std::span<const double> n_values);

}  // namespace clruin
