#include "clruin/expansion.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace clruin {

namespace {

constexpr int kMaxOrder = 20;

long double f_eval_ld(long double z, long double w) {
    return std::exp(-z / (1.0L + w)) / (1.0L + w);
}

long double psi_exponential_ld(long double theta, long double beta, long double n,
                               long double x) {
    const long double tn = theta / std::sqrt(n);
    return std::exp(-theta * beta * x / (1.0L + tn)) / (1.0L + tn);
}

long double expansion_partial_ld(long double theta, long double beta, long double x,
                                 long double n, int k) {
    const long double z = theta * beta * x;
    const long double eps_n = 1.0L / std::sqrt(n);
    long double sum = 0.0L;
    long double weight = 1.0L;  // eps_n^m theta^m / m!
    for (int m = 0; m <= k; ++m) {
        if (m > 0) weight *= eps_n * theta / static_cast<long double>(m);
        sum += weight * derivative_terms(m).evaluate_ld(z, 0.0L);
    }
    return sum;
}

}  // namespace

DerivativeTermSum DerivativeTermSum::identity() {
    DerivativeTermSum s;
    s.order_ = 0;
    s.terms_.push_back({Rational(1), 0, 0});
    return s;
}

DerivativeTermSum DerivativeTermSum::differentiate() const {
    std::map<std::pair<int, int>, Rational> merged;
    for (const auto& t : terms_) {
        merged[{t.z_power, t.inv_power + 1}] -= Rational(t.inv_power + 1) * t.coeff;
        merged[{t.z_power + 1, t.inv_power + 2}] += t.coeff;
    }
    DerivativeTermSum out;
    out.order_ = order_ + 1;
    for (auto& [key, coeff] : merged) {
        if (coeff == 0) continue;
        out.terms_.push_back({std::move(coeff), key.first, key.second});
    }
    return out;
}

double DerivativeTermSum::evaluate(double z, double w) const {
    return static_cast<double>(evaluate_ld(z, w));
}

long double DerivativeTermSum::evaluate_ld(long double z, long double w) const {
    const long double base = 1.0L + w;
    long double sum = 0.0L;
    for (const auto& t : terms_) {
        sum += t.coeff.convert_to<long double>() * std::pow(z, t.z_power) /
               std::pow(base, t.inv_power);
    }
    return sum * f_eval_ld(z, w);
}

DerivativeTermSum derivative_terms(int k) {
    if (k < 0) throw std::invalid_argument("derivative_terms: order must be >= 0");
    if (k > kMaxOrder)
        throw std::invalid_argument("derivative_terms: order capped at 20");
    DerivativeTermSum s = DerivativeTermSum::identity();
    for (int i = 0; i < k; ++i) s = s.differentiate();
    return s;
}

double f_eval(double z, double w) {
    if (!(w > -1.0)) throw std::invalid_argument("f_eval: need w > -1");
    return static_cast<double>(f_eval_ld(z, w));
}

double expansion_k(double theta, double beta, double x, double n, int k) {
    if (k < 0 || k > kMaxOrder)
        throw std::invalid_argument("expansion_k: order out of range");
    return static_cast<double>(expansion_partial_ld(theta, beta, x, n, k));
}

ResidualReport residual_scaling_check(double theta, double beta, int k,
                                      std::span<const double> n_values,
                                      std::span<const double> grid) {
    ResidualReport report;
    report.k = k;
    for (double n : n_values) {
        long double sup = 0.0L;
        for (double x : grid) {
            const long double psi = psi_exponential_ld(theta, beta, n, x);
            const long double approx = expansion_partial_ld(theta, beta, x, n, k);
            sup = std::max(sup, std::abs(psi - approx));
        }
        ResidualRow row;
        row.n = n;
        row.sup_residual = static_cast<double>(sup);
        row.normalized = static_cast<double>(
            sup * std::pow(static_cast<long double>(n), (k + 1) / 2.0L));
        report.rows.push_back(row);
    }
    report.bounded = true;
    const std::size_t count = report.rows.size();
    if (count >= 3) {
        for (std::size_t i = count - 2; i < count; ++i) {
            if (report.rows[i].normalized > 1.10 * report.rows[i - 1].normalized)
                report.bounded = false;
        }
    }
    return report;
}

void ResidualReport::write_csv(std::ostream& os) const {
    char buf[128];
    os << "n,k,sup_residual,normalized_residual\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g\n", r.n, k,
                      r.sup_residual, r.normalized);
        os << buf;
    }
}

double gamma2_first_order(double theta, double beta, double x, double n) {
    const double sn = std::sqrt(n);
    if (x == 0.0) return 1.0 - theta / sn;
    const double g = 2.0 / 3.0 * theta * beta;
    return std::exp(-g * x) * (1.0 + 8.0 * theta / (9.0 * sn) * (g * x - 1.0));
}

DivergenceReport gamma2_divergence_demo(double theta, double beta,
                                        std::span<const double> n_values) {
    (void)beta;  // the x = 0 mismatch does not involve the claim rate
    DivergenceReport report;
    for (double n : n_values) {
        const double sn = std::sqrt(n);
        const double tn = theta / sn;
        // n (1/(1+tn) - 1 + 8 tn/9), arranged to avoid cancellation:
        // 1/(1+tn) - 1 = -tn/(1+tn)
        const double d_value = theta * sn * (8.0 / 9.0 - 1.0 / (1.0 + tn));
        DivergenceRow row;
        row.n = n;
        row.d_value = d_value;
        row.ratio = d_value / (-theta * sn / 9.0);
        report.rows.push_back(row);
    }
    report.converged =
        !report.rows.empty() && std::abs(report.rows.back().ratio - 1.0) <= 0.05;
    return report;
}

void DivergenceReport::write_csv(std::ostream& os) const {
    char buf[128];
    os << "n,D,ratio\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r.n, r.d_value, r.ratio);
        os << buf;
    }
}

}  // namespace clruin
