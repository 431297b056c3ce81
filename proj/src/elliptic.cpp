#include "cslax/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace cslax::elliptic {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kThetaTermCap = 2000;

void check_nome(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("theta1: nome q must lie in (0,1)");
}

// One series evaluation shared by the real and complex paths.  m is the
// derivative order: the n-th term is (-1)^n q^{(n+1/2)^2} (2n+1)^m
// sin((2n+1)x + m pi/2).
template <typename T>
T theta1_series(T x, double q, int m, double eps) {
    check_nome(q);
    const double yim = [&] {
        if constexpr (std::is_same_v<T, std::complex<double>>)
            return std::abs(x.imag());
        else {
            (void)x;
            return 0.0;
        }
    }();
    const double lnq = std::log(q);
    T sum{};
    for (int n = 0; n < kThetaTermCap; ++n) {
        const double half = n + 0.5;
        const double mag = std::exp(half * half * lnq + (2 * n + 1) * yim);
        if (n > 0 && mag < eps)
            return 2.0 * sum;
        const double coef = ((n % 2) ? -1.0 : 1.0) * std::exp(half * half * lnq) *
                            std::pow(2.0 * n + 1.0, m);
        sum += coef * std::sin((2.0 * n + 1.0) * x + (m * kPi / 2.0));
    }
    throw ConvergenceError("theta1: series cap exceeded (nome too close to 1)");
}

} // namespace

std::complex<double> theta1(std::complex<double> x, double q, double eps) {
    return theta1_series(x, q, 0, eps);
}

double theta1(double x, double q, double eps) {
    return theta1_series(x, q, 0, eps);
}

std::complex<double> theta1_deriv(std::complex<double> x, double q, int m, double eps) {
    return theta1_series(x, q, m, eps);
}

double theta1_deriv(double x, double q, int m, double eps) {
    return theta1_series(x, q, m, eps);
}

std::complex<double> theta1_logderiv(std::complex<double> x, double q, double eps) {
    const std::complex<double> t0 = theta1_series(x, q, 0, eps);
    if (std::abs(t0) == 0.0)
        throw PoleError("theta1_logderiv: evaluation at a zero of theta1");
    return theta1_series(x, q, 1, eps) / t0;
}

double theta1_logderiv(double x, double q, double eps) {
    // the real-axis zeros sit at integer multiples of pi; detect them through
    // the reduced argument, since the series at the rounded representation of
    // pi returns ~1e-16 instead of an exact zero
    const double r = std::remainder(x, kPi);
    if (std::fabs(r) <= 1e-12 * std::max(1.0, std::fabs(x)))
        throw PoleError("theta1_logderiv: evaluation at a zero of theta1");
    const double t0 = theta1_series(x, q, 0, eps);
    if (t0 == 0.0)
        throw PoleError("theta1_logderiv: evaluation at a zero of theta1");
    return theta1_series(x, q, 1, eps) / t0;
}

std::pair<double, double> elliptic_KE_with_kprime(double k, double k_prime) {
    if (!(k >= 0.0 && k < 1.0))
        throw DomainError("elliptic_KE: modulus must satisfy 0 <= k < 1");
    // K from AGM(1, k'): K = pi / (a_n + b_n) at convergence.
    double a = 1.0, b = k_prime;
    for (int i = 0; i < 64; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        if (a - b <= 4e-16 * a)
            break;
    }
    const double K = kPi / (a + b);
    // E via the companion c-sequence with c_0 = k:
    // E = K (1 - sum_n 2^{n-1} c_n^2).
    a = 1.0;
    b = k_prime;
    double c = k, ssum = 0.5 * c * c, p = 0.5;
    for (int i = 0; i < 64; ++i) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        p *= 2.0;
        ssum += p * c * c;
        if (c <= 4e-16 * a)
            break;
    }
    return {K, K * (1.0 - ssum)};
}

std::pair<double, double> elliptic_KE(double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw DomainError("elliptic_KE: modulus must satisfy 0 <= k < 1");
    return elliptic_KE_with_kprime(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

NomeParameters modulus_from_a(double a, double series_eps) {
    if (!(a > 0.0))
        throw DomainError("modulus_from_a: lattice constant must be positive");
    // pi K'/K as a function of lambda = k'^2; strictly increasing in lambda.
    const auto aval = [](double lam) {
        const double kp = std::sqrt(lam);
        const double k = std::sqrt(1.0 - lam);
        const double K = elliptic_KE_with_kprime(k, kp).first;
        const double Kp = elliptic_KE_with_kprime(kp, k).first;
        return kPi * Kp / K;
    };
    double lo = 1e-30, hi = 1.0 - 1e-16;
    bool converged = false;
    for (int i = 0; i < 400; ++i) {
        // geometric midpoints until the bracket is within a factor 4
        const double mid = (hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            converged = true;  // bracket is at floating-point resolution
            break;
        }
        if (aval(mid) < a)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4e-16 * hi) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("modulus_from_a: bisection cap exceeded");
    const double lam = 0.5 * (lo + hi);
    NomeParameters p;
    p.a = a;
    p.q = std::exp(-a);
    p.k = std::sqrt(1.0 - lam);
    p.k_prime = std::sqrt(lam);
    const auto [K, E] = elliptic_KE_with_kprime(p.k, p.k_prime);
    p.bigK = K;
    p.bigE = E;
    p.bigKprime = elliptic_KE_with_kprime(p.k_prime, p.k).first;
    p.series_eps = series_eps;
    return p;
}

double jacobi_sn(double u, double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw DomainError("jacobi_sn: modulus must satisfy 0 <= k < 1");
    if (k == 0.0)
        return std::sin(u);
    // Descending Landen: run the AGM forward, then recover the amplitude
    // phi_0 by halving back from phi_m = 2^m a_m u.
    double an[64], cn[64];
    double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k)), c = k;
    int m = 0;
    an[0] = a;
    cn[0] = c;
    while (c > 1e-16 * a && m < 60) {
        const double at = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = at;
        ++m;
        an[m] = a;
        cn[m] = c;
    }
    double phi = std::ldexp(1.0, m) * a * u;
    for (int i = m; i >= 1; --i) {
        const double s = std::clamp(cn[i] / an[i] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    return std::sin(phi);
}

} // namespace cslax::elliptic
