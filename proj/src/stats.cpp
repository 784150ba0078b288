#include "hierfdr/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hfdr::stats {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;
constexpr double kFpMin = 1e-300;

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_sf(double x) {
    return 0.5 * std::erfc(x / kSqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must lie strictly in (0,1)");
    }
    // Rough starting point: central polynomial or tail asymptotic.
    double x;
    const double pl = std::min(p, 1.0 - p);
    if (pl >= 0.1) {
        const double r = p - 0.5;
        x = r * std::sqrt(2.0 * 3.141592653589793) * (1.0 + 1.0472 * r * r);
    } else {
        const double u = -2.0 * std::log(pl);
        x = std::sqrt(u - std::log(u) - std::log(2.0 * 3.141592653589793));
        if (p < 0.5) x = -x;
    }
    // Halley refinement on f(x) = Phi(x) - p; f'' = -x f'.
    for (int it = 0; it < 8; ++it) {
        const double f = (p <= 0.5) ? (normal_cdf(x) - p) : ((1.0 - p) - normal_sf(x));
        const double pdf = 0.3989422804014327 * std::exp(-0.5 * x * x);
        if (pdf <= 0.0) break;
        const double step = 2.0 * f / (2.0 * pdf + x * f);
        x -= step;
        if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

double lower_gamma_reg(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw std::invalid_argument("lower_gamma_reg: requires a > 0, x >= 0");
    }
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double upper_gamma_reg(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw std::invalid_argument("upper_gamma_reg: requires a > 0, x >= 0");
    }
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi2_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return upper_gamma_reg(0.5 * dof, 0.5 * x);
}

double ibeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ibeta: requires a, b > 0");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("ibeta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_sf_two_sided(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("student_sf_two_sided: dof must be positive");
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    return ibeta(0.5 * dof, 0.5, dof / (dof + t * t));
}

} // namespace hfdr::stats
