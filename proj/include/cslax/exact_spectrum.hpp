#ifndef CSLAX_EXACT_SPECTRUM_HPP
#define CSLAX_EXACT_SPECTRUM_HPP

#include <complex>
#include <utility>
#include <vector>

#include "cslax/elliptic.hpp"

namespace cslax::exact {

using elliptic::NomeParameters;

// Sampled spectral curve phi -> omega(phi) on the real axis, strictly
// increasing in both coordinates.
struct SpectralCurve {
    NomeParameters params;
    std::vector<std::pair<double, double>> samples;  // (phi, omega)
};

// Extremum data of the curve on the shifted line Im phi = a: the minimum of
// Re omega sits at phi_min + ia, the maximum at 2pi - phi_min + ia, and
// omega0 = Re omega(2pi - phi_min + ia) is the half-width of the cut.
struct BandEdge {
    double phi_min = 0.0;  // in (0, pi)
    double omega0 = 0.0;   // > 0
};

// A density tabulated on a symmetric node/weight grid: sum w_j v_j = 1 and
// the values are even in the node coordinate.
struct DensityOnGrid {
    double support = 0.0;  // half-width of the support interval
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> values;
};

// omega(phi) = -theta1'(phi/2) / (2 theta1(phi/2)); purely real for real
// phi in (0, 2pi).  Throws PoleError at phi = 0 mod 2pi on the real axis.
std::complex<double> omega_of_phi(std::complex<double> phi, const NomeParameters& p);
double omega_of_phi(double phi, const NomeParameters& p);

// Derivative of the curve from the term-wise differentiated theta series
// (valid for complex phi).
std::complex<double> domega_dphi(std::complex<double> phi, const NomeParameters& p);
double domega_dphi(double phi, const NomeParameters& p);

// The same derivative through the elliptic-function form
//   domega/dphi = -(K^2/pi^2) [ (K-E)/K - 1/sn^2(K phi / pi) ],
// real phi only; exposed for cross-checking against the series form.
double domega_dphi_sn(double phi, const NomeParameters& p);

// Locate the band edge by bracketing Re(domega/dphi) on t in (0, pi) along
// the shifted line and bisecting.  Throws StructureError if no sign change.
BandEdge find_band_edge(const NomeParameters& p);

// Invert the strictly monotone real curve: phi(omega) in (0, 2pi).  Uses the
// asymptotic pole form of the curve near phi in {0, 2pi} once |omega| exceeds
// omega(2pi - 1e-6), where the bisection bracket degenerates.
double phi_from_omega(double omega, const NomeParameters& p);

// sigma(omega) = (1/2pi) dphi/domega at phi(omega); even and positive.
double sigma_exact(double omega, const NomeParameters& p);

// Pointwise cut density: rho0(x) = (1/2pi) [ 1/omega_r'(t1(x)) +
// 1/|omega_r'(t2(x))| ] where t1, t2 parametrize the two monotone branches
// of t -> Re omega(t + ia) and are found by bisection.
class Rho0Curve {
  public:
    Rho0Curve(const NomeParameters& p, const BandEdge& edge);
    double operator()(double x) const;
    double branch1_t(double x) const;  // increasing branch, (phi_min, 2pi-phi_min)
    double branch2_t(double x) const;  // decreasing branch, (2pi-phi_min, 2pi+phi_min)
    const BandEdge& edge() const { return edge_; }

  private:
    NomeParameters params_;
    BandEdge edge_;
};

// Tabulate rho0 on the arcsine-graded midpoint grid x_j = Omega0 sin(pi s_j/2)
// with s_j the midpoints of n uniform cells on [-1,1] and weights
// w_j = h (pi/2) Omega0 cos(pi s_j/2).  The transformed integrand
// rho0(x(s)) dx/ds is smooth and even at the interval ends, so plain midpoint
// sums of smooth integrands against this grid converge spectrally.  Values
// are mirrored across x = 0 (the curve is antisymmetric) and normalized so
// that sum w_j v_j = 1 exactly.
DensityOnGrid rho0_extract(const NomeParameters& p, int n);

// Uniform sampling of the curve on (0, 2pi); validates strict monotonicity.
SpectralCurve sample_curve(const NomeParameters& p, int m);

} // namespace cslax::exact

#endif
