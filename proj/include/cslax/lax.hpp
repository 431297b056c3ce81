#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "cslax/exact_spectrum.hpp"

// Finite-N matrix side of the verification: the Toeplitz interaction matrix
// with entries i*lambda*coth(a(j-k)), its periodized circulant variant, the
// diagonal-momenta-plus-sign-matrix limit, eigensolvers sized to each regime,
// and histogram / empirical-CDF extraction of the eigenvalue density.
namespace cslax::lax {

enum class Boundary { open, periodic };

struct LaxMatrixSpec {
    int n = 2;            // particle count N >= 2
    double a = 1.0;       // lattice spacing, > 0
    double lambda = 1.0;  // coupling, > 0
    Boundary boundary = Boundary::open;
};

// Row-major dense complex matrix.
using ComplexMatrix = std::vector<std::complex<double>>;

struct Spectrum {
    std::vector<double> eigenvalues;  // sorted ascending
    LaxMatrixSpec spec;               // the generating description
};

// Dense Hermitian matrix.  Open boundary: L_{jk} = i lambda coth(a(j-k)) off
// the diagonal, zero on it.  Periodic boundary: the Hermitian circulant built
// from the two-image coefficients with a sawtooth counterterm,
//     c(n) = coth(a n) - coth(a (N-n)) + (N - 2n)/N,   1 <= n <= N-1,
// which satisfy c(N-n) = -c(n) exactly.  The counterterm restores the
// constant part of coth, which full-period sine sums annihilate (the finite
// identity sum_n (1 - 2n/N) sin(2 pi s n / N) = cot(pi s / N) supplies the
// -cot(phi/2)/2 component of the limiting curve); without it the circulant
// spectrum misses that component entirely.
ComplexMatrix build_lax(const LaxMatrixSpec& spec);

// Diagonal momenta plus the sign interaction:
//     (L)_{jk} = k_j delta_{jk} + i lambda sgn(j-k).
ComplexMatrix build_asymptotic_lax(const std::vector<double>& k, double lambda);

// All-real eigenvalues of a Hermitian matrix via the real-symmetric embedding
// [[Re, -Im], [Im, Re]] and cyclic Jacobi rotations (converged to off-norm
// < 1e-11 of the Frobenius norm).  Each eigenvalue of the embedding appears
// twice; the pairs are averaged after sorting.  Intended for n up to a few
// hundred.  The returned spec records only the dimension unless the caller
// overwrites it.
Spectrum eigenvalues_hermitian(const ComplexMatrix& m);

// Fourier eigenvalue of the periodic matrix for the plane wave
// exp(-2 pi i s j / N):
//     mu_s = -lambda * sum_{n=1}^{N-1} c(n) sin(2 pi s n / N),
// equal to twice the half-range sum by the antisymmetric pairing n <-> N-n.
// Direct O(N) evaluation.
double circulant_mu(const LaxMatrixSpec& spec, int s);

// All N Fourier eigenvalues of the periodic matrix, sorted ascending.
Spectrum circulant_spectrum(const LaxMatrixSpec& spec);

// Eigenvalues of the open-boundary matrix via Householder reduction of the
// real antisymmetric coefficient matrix to tridiagonal form followed by
// implicit-shift QL on |subdiagonal|; O(n^3) with a small constant, suitable
// for large n.
Spectrum open_spectrum(const LaxMatrixSpec& spec);

// Build and diagonalize with the method suited to size and boundary: dense
// Jacobi up to n = 256, beyond that open -> open_spectrum and periodic ->
// circulant_spectrum.
Spectrum spectrum_of(const LaxMatrixSpec& spec);

// Normalized histogram of the spectrum rescaled by 1/(2 lambda): nodes are
// bin centers, weights are the bin widths, sum(values * weights) = 1.
exact::DensityOnGrid empirical_density(const Spectrum& sp, int bins);

// Jump points of the empirical cumulative distribution: the eigenvalues
// rescaled by 1/(2 lambda), ascending.
std::vector<double> ecdf_sample(const Spectrum& sp);

}  // namespace cslax::lax
