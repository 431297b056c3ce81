#include "cslax/exact_spectrum.hpp"

#include <cmath>

namespace cslax::exact {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void check_real_pole(double phi) {
    if (std::abs(std::remainder(phi, kTwoPi)) < 1e-12)
        throw PoleError("spectral curve: pole at phi = 0 mod 2pi");
}

// Re omega and Re domega on the shifted line Im phi = a (both are real
// there up to series roundoff).
double omega_shift(double t, const NomeParameters& p) {
    return omega_of_phi(std::complex<double>(t, p.a), p).real();
}

double domega_shift(double t, const NomeParameters& p) {
    return domega_dphi(std::complex<double>(t, p.a), p).real();
}

// omega(phi) = -1/phi + C phi + D phi^3 + O(phi^5) near the pole.
// C = 1/12 - sum n d_n, D = 1/720 + sum n^3 d_n / 6, d_n = 2 q^{2n}/(1-q^{2n}).
std::pair<double, double> pole_coeffs(const NomeParameters& p) {
    double C = 1.0 / 12.0, D = 1.0 / 720.0;
    for (int n = 1; n < 400; ++n) {
        const double qn = std::pow(p.q, 2 * n);
        const double d = 2.0 * qn / (1.0 - qn);
        C -= n * d;
        D += static_cast<double>(n) * n * n * d / 6.0;
        if (n * d < 1e-18 && n > 4)
            break;
    }
    return {C, D};
}

} // namespace

std::complex<double> omega_of_phi(std::complex<double> phi, const NomeParameters& p) {
    if (std::abs(phi.imag()) < 1e-14)
        check_real_pole(phi.real());
    return -0.5 * elliptic::theta1_logderiv(0.5 * phi, p.q, p.series_eps);
}

double omega_of_phi(double phi, const NomeParameters& p) {
    check_real_pole(phi);
    return -0.5 * elliptic::theta1_logderiv(0.5 * phi, p.q, p.series_eps);
}

std::complex<double> domega_dphi(std::complex<double> phi, const NomeParameters& p) {
    if (std::abs(phi.imag()) < 1e-14)
        check_real_pole(phi.real());
    const std::complex<double> x = 0.5 * phi;
    const std::complex<double> t0 = elliptic::theta1(x, p.q, p.series_eps);
    const std::complex<double> r1 = elliptic::theta1_deriv(x, p.q, 1, p.series_eps) / t0;
    const std::complex<double> r2 = elliptic::theta1_deriv(x, p.q, 2, p.series_eps) / t0;
    return -0.25 * (r2 - r1 * r1);
}

double domega_dphi(double phi, const NomeParameters& p) {
    check_real_pole(phi);
    const double x = 0.5 * phi;
    const double t0 = elliptic::theta1(x, p.q, p.series_eps);
    const double r1 = elliptic::theta1_deriv(x, p.q, 1, p.series_eps) / t0;
    const double r2 = elliptic::theta1_deriv(x, p.q, 2, p.series_eps) / t0;
    return -0.25 * (r2 - r1 * r1);
}

double domega_dphi_sn(double phi, const NomeParameters& p) {
    check_real_pole(phi);
    const double sn = elliptic::jacobi_sn(p.bigK * phi / kPi, p.k);
    if (sn == 0.0)
        throw PoleError("domega_dphi_sn: sn vanishes at the curve pole");
    const double K = p.bigK;
    return -(K * K / (kPi * kPi)) * ((K - p.bigE) / K - 1.0 / (sn * sn));
}

BandEdge find_band_edge(const NomeParameters& p) {
    double lo = 1e-9, hi = kPi;
    if (!(domega_shift(lo, p) < 0.0 && domega_shift(hi, p) > 0.0))
        throw StructureError("find_band_edge: no sign change of Re domega on (0, pi)");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (domega_shift(mid, p) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15)
            break;
    }
    BandEdge e;
    e.phi_min = 0.5 * (lo + hi);
    e.omega0 = omega_shift(kTwoPi - e.phi_min, p);
    return e;
}

double phi_from_omega(double omega, const NomeParameters& p) {
    const double om_switch = omega_of_phi(kTwoPi - 1e-6, p);
    if (std::abs(omega) > om_switch) {
        const auto [C, D] = pole_coeffs(p);
        // small phi solving omega(phi) = -|omega|
        const double y = -std::abs(omega);
        const double ph = -1.0 / y + C / (y * y * y) - (2.0 * C * C - D) / std::pow(y, 5);
        return (omega < 0.0) ? ph : kTwoPi - ph;
    }
    double lo = 1e-9, hi = kTwoPi - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (omega_of_phi(mid, p) < omega)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12)
            break;
    }
    return 0.5 * (lo + hi);
}

double sigma_exact(double omega, const NomeParameters& p) {
    // evaluate at |omega|: the curve's antisymmetry makes sigma exactly even
    const double om = std::abs(omega);
    const double om_switch = omega_of_phi(kTwoPi - 1e-6, p);
    if (om > om_switch) {
        const auto [C, D] = pole_coeffs(p);
        const double y = -om;
        const double ph = -1.0 / y + C / (y * y * y) - (2.0 * C * C - D) / std::pow(y, 5);
        return (1.0 / kTwoPi) / (1.0 / (ph * ph) + C + 3.0 * D * ph * ph);
    }
    return (1.0 / kTwoPi) / domega_dphi(phi_from_omega(om, p), p);
}

Rho0Curve::Rho0Curve(const NomeParameters& p, const BandEdge& edge)
    : params_(p), edge_(edge) {}

double Rho0Curve::branch1_t(double x) const {
    // Re omega(t+ia) increasing from -Omega0 to +Omega0
    double lo = edge_.phi_min, hi = kTwoPi - edge_.phi_min;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (omega_shift(mid, params_) < x)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13)
            break;
    }
    return 0.5 * (lo + hi);
}

double Rho0Curve::branch2_t(double x) const {
    // Re omega(t+ia) decreasing from +Omega0 to -Omega0
    double lo = kTwoPi - edge_.phi_min, hi = kTwoPi + edge_.phi_min;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (omega_shift(mid, params_) > x)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13)
            break;
    }
    return 0.5 * (lo + hi);
}

double Rho0Curve::operator()(double x) const {
    const double d1 = domega_shift(branch1_t(x), params_);
    const double d2 = domega_shift(branch2_t(x), params_);
    if (!(d1 > 0.0) || !(d2 < 0.0))
        throw StructureError("rho0: branch derivative has the wrong sign");
    return (1.0 / kTwoPi) * (1.0 / d1 + 1.0 / std::abs(d2));
}

DensityOnGrid rho0_extract(const NomeParameters& p, int n) {
    if (n < 16)
        throw DomainError("rho0_extract: need at least 16 nodes");
    const BandEdge edge = find_band_edge(p);
    const Rho0Curve rho(p, edge);
    const double h = 2.0 / n;

    DensityOnGrid g;
    g.support = edge.omega0;
    g.nodes.resize(n);
    g.weights.resize(n);
    g.values.resize(n);

    // fill the upper half (s > 0) and mirror, so evenness is exact
    for (int j = n / 2; j < n; ++j) {
        const double s = -1.0 + (j + 0.5) * h;
        const double x = edge.omega0 * std::sin(0.5 * kPi * s);
        g.nodes[j] = x;
        g.weights[j] = h * 0.5 * kPi * edge.omega0 * std::cos(0.5 * kPi * s);
        g.values[j] = rho(x);
        const int jm = n - 1 - j;
        if (jm != j) {
            g.nodes[jm] = -x;
            g.weights[jm] = g.weights[j];
            g.values[jm] = g.values[j];
        }
    }
    // the raw sum converges to 1 spectrally in n; rescale so the grid mass
    // is exactly 1 at every n
    double mass = 0.0;
    for (int j = 0; j < n; ++j)
        mass += g.weights[j] * g.values[j];
    for (int j = 0; j < n; ++j)
        g.values[j] /= mass;
    return g;
}

SpectralCurve sample_curve(const NomeParameters& p, int m) {
    if (m < 2)
        throw DomainError("sample_curve: need at least 2 samples");
    SpectralCurve c;
    c.params = p;
    c.samples.reserve(m);
    double prev = 0.0;
    for (int i = 1; i <= m; ++i) {
        const double phi = kTwoPi * i / (m + 1);
        const double om = omega_of_phi(phi, p);
        if (i > 1 && !(om > prev))
            throw StructureError("sample_curve: omega not strictly increasing");
        prev = om;
        c.samples.emplace_back(phi, om);
    }
    return c;
}

} // namespace cslax::exact
