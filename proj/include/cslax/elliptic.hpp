#ifndef CSLAX_ELLIPTIC_HPP
#define CSLAX_ELLIPTIC_HPP

#include <complex>
#include <utility>

#include "cslax/errors.hpp"

namespace cslax::elliptic {

// Lattice constant a, nome q = e^{-a}, elliptic modulus k and the complete
// integrals K(k), K(k'), E(k).  Single configuration record consumed by all
// spectral formulas.  k_prime is carried explicitly: near q -> 1 the modulus
// satisfies 1-k ~ k'^2/2 with k' exponentially small, so storing only k would
// lose all of k's conditioning.
struct NomeParameters {
    double a = 0.0;          // lattice constant, > 0
    double q = 0.0;          // nome e^{-a}, in (0,1)
    double k = 0.0;          // elliptic modulus, in (0,1)
    double k_prime = 0.0;    // complementary modulus sqrt(1-k^2)
    double bigK = 0.0;       // K(k)
    double bigKprime = 0.0;  // K(k')
    double bigE = 0.0;       // E(k)
    double series_eps = 1e-16;  // theta-series truncation threshold
};

// theta1(x, q) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)x).
// Terms are dropped once q^{(n+1/2)^2} e^{(2n+1)|Im x|} < eps; the exponent
// (n+1/2)^2 decays super-geometrically so a term-magnitude cutoff is safe.
std::complex<double> theta1(std::complex<double> x, double q, double eps = 1e-16);
double theta1(double x, double q, double eps = 1e-16);

// d^m/dx^m of the series above (sine shifted by m*pi/2, coefficient (2n+1)^m).
std::complex<double> theta1_deriv(std::complex<double> x, double q, int m,
                                  double eps = 1e-16);
double theta1_deriv(double x, double q, int m, double eps = 1e-16);

// theta1'(x)/theta1(x); throws PoleError at zeros of theta1 (x = 0 mod pi on
// the real axis).
std::complex<double> theta1_logderiv(std::complex<double> x, double q,
                                     double eps = 1e-16);
double theta1_logderiv(double x, double q, double eps = 1e-16);

// Complete elliptic integrals (K, E) by the arithmetic-geometric mean,
// converged to relative machine precision.  Requires 0 <= k < 1.
std::pair<double, double> elliptic_KE(double k);

// As above but with the complementary modulus supplied by the caller; needed
// when k is near 1 and k' is known much more accurately than 1-k.
std::pair<double, double> elliptic_KE_with_kprime(double k, double k_prime);

// Solve pi*K(k')/K(k) = a for k and fill every field.  The bisection runs on
// lambda = k'^2 (geometric midpoints while the bracket spans decades), which
// keeps both moduli fully conditioned over the whole range of a.
NomeParameters modulus_from_a(double a, double series_eps = 1e-16);

// Jacobi elliptic sine by the descending Landen (AGM) recursion,
// relative accuracy ~1e-12 on real arguments, 0 <= k < 1.
double jacobi_sn(double u, double k);

} // namespace cslax::elliptic

#endif
