#include "catml/special_functions.hpp"

#include <cmath>
#include <limits>

#include "catml/errors.hpp"

namespace catml {
namespace {

constexpr int kMaxTerms = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double series_p(double a, double x) {
    double denom = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxTerms; ++n) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(log_prefactor(a, x));
}

double continued_fraction_q(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return std::exp(log_prefactor(a, x)) * h;
}

void check_domain(double a, double x) {
    if (!(a > 0.0)) throw ArgumentError("incomplete gamma requires a > 0");
    if (!(x >= 0.0)) throw ArgumentError("incomplete gamma requires x >= 0");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return series_p(a, x);
    return 1.0 - continued_fraction_q(a, x);
}

double regularized_gamma_q(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - series_p(a, x);
    return continued_fraction_q(a, x);
}

}  // namespace catml
