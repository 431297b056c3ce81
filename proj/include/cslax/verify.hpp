#pragma once

#include <complex>
#include <vector>

#include "cslax/bethe.hpp"
#include "cslax/exact_spectrum.hpp"
#include "cslax/lax.hpp"

// Cross-module residual checks: the inverse spectral map phi(omega), the
// integral identities tying the cut density rho0 to the lattice constant and
// to the exact density, and the orchestrated comparison producing a
// ComparisonReport.
namespace cslax::verify {

// Acceptance thresholds.  Values are configuration, not constants of the
// mathematics: the density sup-norms and analytic residuals follow the
// default ladder (1e-5 / 1e-6), the finite-matrix Kolmogorov distance and
// the A-vs-Omega0 gap are pinned empirically.
struct Tolerances {
    double sup_sigma_diff = 1e-5;
    double sup_rho_diff = 1e-5;
    double residual_eq12 = 1e-6;
    double residual_eq13 = 1e-6;
    double inverse_map_residual = 1e-5;
    double ks_distance_finite_n = 2e-3;  // ~0.58/matrix_n at the default n=1000
    double big_a_gap = 1e-6;
};

struct VerifyConfig {
    int nodes = 400;        // Bethe solve cells
    int rho0_nodes = 4096;  // cut-density container cells
    int matrix_n = 1000;    // finite-matrix size for the Kolmogorov distance
    lax::Boundary boundary = lax::Boundary::open;
    double series_eps = 1e-16;
    bethe::GridKind grid = bethe::GridKind::graded;
    Tolerances tolerances;
    // Negative-control knobs.  bethe_a_factor scales the lattice constant
    // handed to the Bethe solve only (1.0 = honest comparison); setting
    // halve_rho0_support squeezes the extracted cut density to half its
    // support, mass-preserving.  Either perturbation must flip pass to false.
    double bethe_a_factor = 1.0;
    bool halve_rho0_support = false;
};

struct ComparisonReport {
    double a = 0.0;
    double bigA = 0.0;    // Bethe support half-width
    double omega0 = 0.0;  // band edge of the exact curve
    double sup_sigma_diff = 0.0;
    double sup_rho_diff = 0.0;
    double residual_eq12 = 0.0;
    double residual_eq13 = 0.0;
    double inverse_map_residual = 0.0;
    double ks_distance_finite_n = 0.0;
    Tolerances tolerances;
    bool pass = false;
};

// phi(omega) = int rho0(x) (1/i) ln[(omega-x-i/2)/(omega-x+i/2)] dx by
// quadrature over the density grid.  Each term takes the difference of
// principal logarithms (not the principal log of the ratio), which keeps
// phi continuous across the real axis between the cuts; for real omega the
// term reduces to -2 atan2(1/2, omega - x).  Throws CutError on the cuts
// |Re omega| <= support, Im omega = +-1/2.
std::complex<double> phi_of_omega(std::complex<double> omega, const exact::DensityOnGrid& rho0);

// max over a 41-point omega grid spanning 98% of (-support, support) of
//     |a - (1/2) int rho(x) ln(1 + (omega-x)^{-2}) dx|,
// the integral evaluated with the bethe module's singular product
// integration.
double residual_eq12(const exact::DensityOnGrid& rho, double a);

// max over an 81-point omega grid on [-2 Omega0 - 2, 2 Omega0 + 2] of
//     |1/omega'(phi(omega)) - int rho0(x) / ((omega-x)^2 + 1/4) dx|,
// the left side evaluated through the exact monotone inversion
// (equal to 2 pi sigma_exact(omega)).
double residual_eq13(const elliptic::NomeParameters& params, const exact::DensityOnGrid& rho0);

// max over 20 points lambda in [0.35, 2 pi - 0.35] of the circle distance
// (mod 2 pi) between phi(omega(lambda)) and lambda.
double inverse_map_residual(const exact::DensityOnGrid& rho0,
                            const elliptic::NomeParameters& params);

// sup over a 161-point omega grid on [-2 omega0 - 2, 2 omega0 + 2] of
// |sigma_bethe(omega) - sigma_exact(omega)|.
double sup_sigma_diff(const bethe::BetheSolution& sol, const elliptic::NomeParameters& params,
                      double omega0);

// sup over the Bethe nodes with |x| <= frac * min(A, omega0) of
// |rho_bethe(x) - rho0(x)|, rho_bethe read off nodally as psi/mu.
double sup_rho_diff(const bethe::BetheSolution& sol, const exact::Rho0Curve& curve,
                    double frac = 0.9);

// Two-sided Kolmogorov distance between the empirical distribution of a
// sorted sample (rescaled eigenvalues) and the exact cumulative
// F(omega) = phi_from_omega(omega) / (2 pi).
double ks_distance_to_exact(const std::vector<double>& sorted_sample,
                            const elliptic::NomeParameters& params);

// Two-sample Kolmogorov distance between two sorted samples.
double ks_two_sample(const std::vector<double>& s1, const std::vector<double>& s2);

// Full pipeline: modulus_from_a -> find_band_edge -> solve_for_a ->
// rho0_extract -> residuals, distances, and the pass verdict.  Deterministic
// for a given config; propagates module errors.
ComparisonReport run_verification(double a, const VerifyConfig& config = {});

}  // namespace cslax::verify
