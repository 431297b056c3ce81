#include "cslax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cslax/errors.hpp"
#include "threading.hpp"

namespace cslax::verify {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_config(const VerifyConfig& config) {
    if (config.nodes < 16)
        throw DomainError("verify config: nodes must be >= 16");
    if (config.rho0_nodes < 16)
        throw DomainError("verify config: rho0_nodes must be >= 16");
    if (config.matrix_n < 2)
        throw DomainError("verify config: matrix_n must be >= 2");
    if (!(config.series_eps > 0.0 && config.series_eps < 1.0))
        throw DomainError("verify config: series_eps must lie in (0,1)");
    if (!(config.bethe_a_factor > 0.0))
        throw DomainError("verify config: bethe_a_factor must be positive");
    const Tolerances& t = config.tolerances;
    for (double v : {t.sup_sigma_diff, t.sup_rho_diff, t.residual_eq12, t.residual_eq13,
                     t.inverse_map_residual, t.ks_distance_finite_n, t.big_a_gap})
        if (!(v > 0.0))
            throw DomainError("verify config: tolerances must be positive");
}

// mass-preserving squeeze of a density to half its support
exact::DensityOnGrid halve_support(exact::DensityOnGrid g) {
    g.support *= 0.5;
    for (double& x : g.nodes)
        x *= 0.5;
    for (double& w : g.weights)
        w *= 0.5;
    for (double& v : g.values)
        v *= 2.0;
    return g;
}

}  // namespace

std::complex<double> phi_of_omega(std::complex<double> omega, const exact::DensityOnGrid& rho0) {
    const double re = omega.real(), im = omega.imag();
    if (std::abs(re) <= rho0.support &&
        (std::abs(im - 0.5) < 1e-12 || std::abs(im + 0.5) < 1e-12))
        throw CutError("phi_of_omega: omega lies on a branch cut");
    const std::complex<double> ihalf(0.0, 0.5);
    std::complex<double> sum(0.0, 0.0);
    for (size_t j = 0; j < rho0.nodes.size(); ++j) {
        const std::complex<double> d = omega - rho0.nodes[j];
        // difference of principal logs, continuous between the cuts
        const std::complex<double> term = std::log(d - ihalf) - std::log(d + ihalf);
        sum += rho0.weights[j] * rho0.values[j] * term;
    }
    return std::complex<double>(0.0, -1.0) * sum;
}

double residual_eq12(const exact::DensityOnGrid& rho, double a) {
    const int n_om = 41;
    const double frac = 0.98;
    double worst = 0.0;
    for (int i = 0; i < n_om; ++i) {
        const double om =
            -frac * rho.support + 2.0 * frac * rho.support * i / (n_om - 1);
        worst = std::max(worst, std::abs(a - 0.5 * bethe::potential_gamma(rho, om)));
    }
    return worst;
}

double residual_eq13(const elliptic::NomeParameters& params, const exact::DensityOnGrid& rho0) {
    const int n_om = 81;
    const double span = 2.0 * rho0.support + 2.0;
    std::vector<double> res(n_om);
    detail::parallel_for(n_om, [&](int i) {
        const double om = -span + 2.0 * span * i / (n_om - 1);
        const double lhs = 2.0 * kPi * exact::sigma_exact(om, params);
        double rhs = 0.0;
        for (size_t j = 0; j < rho0.nodes.size(); ++j) {
            const double d = om - rho0.nodes[j];
            rhs += rho0.weights[j] * rho0.values[j] / (d * d + 0.25);
        }
        res[i] = std::abs(lhs - rhs);
    });
    return *std::max_element(res.begin(), res.end());
}

double inverse_map_residual(const exact::DensityOnGrid& rho0,
                            const elliptic::NomeParameters& params) {
    const int n_pts = 20;
    double worst = 0.0;
    for (int i = 0; i < n_pts; ++i) {
        const double lam = 0.35 + (2.0 * kPi - 0.7) * i / (n_pts - 1);
        const double om = exact::omega_of_phi(lam, params);
        const double phi = phi_of_omega(std::complex<double>(om, 0.0), rho0).real();
        double d = std::fmod(phi - lam, 2.0 * kPi);
        if (d < 0.0)
            d += 2.0 * kPi;
        worst = std::max(worst, std::min(d, 2.0 * kPi - d));
    }
    return worst;
}

double sup_sigma_diff(const bethe::BetheSolution& sol, const elliptic::NomeParameters& params,
                      double omega0) {
    const int n_om = 161;
    const double span = 2.0 * omega0 + 2.0;
    std::vector<double> res(n_om);
    detail::parallel_for(n_om, [&](int i) {
        const double om = -span + 2.0 * span * i / (n_om - 1);
        res[i] = std::abs(bethe::sigma_bethe(om, sol) - exact::sigma_exact(om, params));
    });
    return *std::max_element(res.begin(), res.end());
}

double sup_rho_diff(const bethe::BetheSolution& sol, const exact::Rho0Curve& curve, double frac) {
    const double lim = frac * std::min(sol.bigA, curve.edge().omega0);
    double worst = 0.0;
    for (size_t j = 0; j < sol.s_nodes.size(); ++j) {
        const double x = bethe::grid_x(sol.s_nodes[j], sol.bigA, sol.grid);
        const double mu = bethe::grid_mu(sol.s_nodes[j], sol.bigA, sol.grid);
        if (std::abs(x) > lim || !(mu > 0.0))
            continue;
        worst = std::max(worst, std::abs(sol.psi[j] / mu - curve(x)));
    }
    return worst;
}

double ks_distance_to_exact(const std::vector<double>& sorted_sample,
                            const elliptic::NomeParameters& params) {
    const int n = static_cast<int>(sorted_sample.size());
    if (n < 1)
        throw DomainError("ks_distance_to_exact: empty sample");
    std::vector<double> cdf(n);
    detail::parallel_for(n, [&](int i) {
        cdf[i] = exact::phi_from_omega(sorted_sample[i], params) / (2.0 * kPi);
    });
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, cdf[i] - static_cast<double>(i) / n);
        worst = std::max(worst, static_cast<double>(i + 1) / n - cdf[i]);
    }
    return worst;
}

double ks_two_sample(const std::vector<double>& s1, const std::vector<double>& s2) {
    const size_t n1 = s1.size(), n2 = s2.size();
    if (n1 == 0 || n2 == 0)
        throw DomainError("ks_two_sample: empty sample");
    size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < n1 || j < n2) {
        // step to the next jump point and move both CDFs past it together,
        // so tied values never contribute a spurious mid-tie difference
        const double x = (j == n2 || (i < n1 && s1[i] <= s2[j])) ? s1[i] : s2[j];
        while (i < n1 && s1[i] == x) ++i;
        while (j < n2 && s2[j] == x) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / n1 -
                                         static_cast<double>(j) / n2));
    }
    return worst;
}

ComparisonReport run_verification(double a, const VerifyConfig& config) {
    if (!(a > 0.0))
        throw DomainError("run_verification: lattice constant must be positive");
    check_config(config);

    const elliptic::NomeParameters params = elliptic::modulus_from_a(a, config.series_eps);
    const exact::BandEdge edge = exact::find_band_edge(params);
    const exact::Rho0Curve curve(params, edge);

    const bethe::BetheSolution sol =
        bethe::solve_for_a(a * config.bethe_a_factor, config.nodes, config.grid);

    exact::DensityOnGrid rho0 = exact::rho0_extract(params, config.rho0_nodes);
    if (config.halve_rho0_support)
        rho0 = halve_support(std::move(rho0));

    ComparisonReport rep;
    rep.a = a;
    rep.bigA = sol.bigA;
    rep.omega0 = edge.omega0;
    rep.tolerances = config.tolerances;

    rep.sup_sigma_diff = sup_sigma_diff(sol, params, edge.omega0);
    rep.sup_rho_diff = sup_rho_diff(sol, curve);
    rep.residual_eq12 = residual_eq12(rho0, a);
    rep.residual_eq13 = residual_eq13(params, rho0);
    rep.inverse_map_residual = inverse_map_residual(rho0, params);

    const lax::LaxMatrixSpec mspec{config.matrix_n, a, 1.0, config.boundary};
    rep.ks_distance_finite_n = ks_distance_to_exact(lax::ecdf_sample(lax::spectrum_of(mspec)), params);

    const Tolerances& t = config.tolerances;
    rep.pass = rep.sup_sigma_diff <= t.sup_sigma_diff && rep.sup_rho_diff <= t.sup_rho_diff &&
               rep.residual_eq12 <= t.residual_eq12 && rep.residual_eq13 <= t.residual_eq13 &&
               rep.inverse_map_residual <= t.inverse_map_residual &&
               rep.ks_distance_finite_n <= t.ks_distance_finite_n &&
               std::abs(rep.bigA - rep.omega0) <= t.big_a_gap;
    return rep;
}

}  // namespace cslax::verify
