#ifndef CSLAX_BETHE_HPP
#define CSLAX_BETHE_HPP

#include <vector>

#include "cslax/exact_spectrum.hpp"

namespace cslax::bethe {

using exact::DensityOnGrid;

// Node layout for the product-integration solve on [-A, A].  Both map a
// reference coordinate s in [-1,1] to x: graded uses x = A sin(pi s/2)
// (endpoint-refined; resolves the inverse-square-root growth of the density
// at the support edges), uniform uses x = A s.
enum class GridKind { graded, uniform };

// Node map s in [-1,1] -> x in [-A, A] and its Jacobian dx/ds.
double grid_x(double s, double bigA, GridKind grid);
double grid_mu(double s, double bigA, GridKind grid);

// Solution of the integral equation  int gamma(x-x') rho(x') dx' = 2a  on
// [-A, A] with  int rho = 1.  rho is tabulated as a midpoint container whose
// grid mass is exactly 1; s_nodes/psi carry the underlying piecewise-linear
// solution psi(s) = rho(x(s)) dx/ds for pointwise evaluation.
struct BetheSolution {
    double bigA = 0.0;        // support half-width A
    double a = 0.0;           // lattice constant consistent with the solution
    DensityOnGrid rho;        // support = bigA
    int nodes_n = 0;          // cell count of the solve
    GridKind grid = GridKind::graded;
    std::vector<double> s_nodes;  // n+1 grid nodes on [-1, 1]
    std::vector<double> psi;      // nodal values of rho(x(s)) dx/ds
};

// gamma(x) = ln(1 + x^{-2}) = ln(1+x^2) - 2 ln|x|; throws PoleError at x = 0.
double kernel_gamma(double x);

// Dense symmetric Galerkin matrix of the kernel against the piecewise-linear
// nodal basis on n cells: G_ij = int int phi_i(s) phi_j(s') gamma(x(s)-x(s'))
// ds ds'.  The smooth factor is integrated by a per-cell Gauss rule and every
// logarithmic singularity by closed-form cell integrals.  Size (n+1)^2,
// row-major.
std::vector<double> assemble_kernel(double A, int n, GridKind grid);

// Solve the unit-right-side system, then rescale: a = 1/(2 int rho~) and
// rho = 2a rho~, which satisfies the constant-right-side equation and the
// normalization simultaneously.  Factorization is symmetric positive
// definite (throws SpdError on failure).
BetheSolution solve_for_A(double A, int n, GridKind grid = GridKind::graded);

// Outer bisection on the monotone decreasing map A -> a(A) to the requested
// lattice constant, tolerance 1e-10 in a; bracket by geometric expansion
// from A = 1 (throws ConvergenceError if the expansion cap is hit).
BetheSolution solve_for_a(double a, int n, GridKind grid = GridKind::graded);

// sigma(omega) = (1/2pi) int rho(x) / ((x-omega)^2 + 1/4) dx on the
// solution's container (the Lorentzian width 1/2 is broad on the grid scale).
double sigma_bethe(double omega, const BetheSolution& sol);

// V(omega) = int gamma(omega - x) rho(x) dx for a midpoint container on an
// arcsine-graded layout, |omega| < support: product integration in the
// reference coordinate with exact cell masses (piecewise-constant density per
// cell), per-cell Gauss for the smooth factor, closed forms for the three
// logarithmic singularities of the kernel under the sine map.
double potential_gamma(const DensityOnGrid& rho, double omega);

// Closed-form primitives used by the assembler, exposed for direct testing
// against brute-force quadrature.
namespace cellint {
// int_0^h xi^m ln|xi - w| dxi assembled from P_j(u) = int u^j ln|u| du.
double pj(int j, double u);
double shat(int m, double w, double h);
// int_0^h int_0^h xi^m eta^k ln|c + xi - eta| deta dxi
double dmk(int m, int k, double c, double h);
// int_0^h int_0^h xi^m eta^k ln|beta - xi - eta| deta dxi
double tmk(int m, int k, double beta, double h);
// int_0^h int_0^h xi^m eta^k ln|B + xi + eta| deta dxi
double umk(int m, int k, double B, double h);
} // namespace cellint

} // namespace cslax::bethe

#endif
