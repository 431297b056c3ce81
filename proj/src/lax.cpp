#include "cslax/lax.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "cslax/errors.hpp"

namespace cslax::lax {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double coth(double x) { return 1.0 / std::tanh(x); }

void check_spec(const LaxMatrixSpec& spec) {
    if (spec.n < 2)
        throw DomainError("lax spec: n must be >= 2");
    if (!(spec.a > 0.0) || !std::isfinite(spec.a))
        throw DomainError("lax spec: a must be positive and finite");
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw DomainError("lax spec: lambda must be positive and finite");
}

// Periodized coefficients, c[m] for m = 1..n-1 with c[0] = 0 so that
// c[(j-k) mod n] indexes directly.  The sawtooth is computed as (n-2m)/n so
// that c(n-m) = -c(m) holds bitwise: the two coth terms swap and the integer
// numerator negates exactly.
std::vector<double> periodic_coefficients(int n, double a) {
    std::vector<double> c(static_cast<size_t>(n), 0.0);
    for (int m = 1; m < n; ++m)
        c[m] = coth(a * m) - coth(a * (n - m)) + static_cast<double>(n - 2 * m) / n;
    return c;
}

// Cyclic Jacobi sweeps on a dense symmetric matrix (row-major, order m); the
// eigenvalues accumulate on the diagonal.  Stops once the off-diagonal
// Frobenius norm falls below tol_rel times the full Frobenius norm.
void jacobi_diagonalize(std::vector<double>& s, int m, double tol_rel) {
    auto at = [&](int i, int j) -> double& { return s[static_cast<size_t>(i) * m + j]; };
    double fro = 0.0;
    for (double x : s)
        fro += x * x;
    fro = std::sqrt(fro);
    if (fro == 0.0)
        return;
    const int max_sweeps = 50;
    for (int sweep = 0;; ++sweep) {
        double off2 = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                off2 += 2.0 * at(i, j) * at(i, j);
        if (std::sqrt(off2) <= tol_rel * fro)
            return;
        if (sweep == max_sweeps)
            throw ConvergenceError("jacobi eigensolver: sweep cap reached");
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t =
                    std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int i = 0; i < m; ++i) {
                    const double aip = at(i, p), aiq = at(i, q);
                    at(i, p) = c * aip - sn * aiq;
                    at(i, q) = sn * aip + c * aiq;
                }
                for (int i = 0; i < m; ++i) {
                    const double api = at(p, i), aqi = at(q, i);
                    at(p, i) = c * api - sn * aqi;
                    at(q, i) = sn * api + c * aqi;
                }
            }
    }
}

// Householder reduction of a real antisymmetric matrix (row-major, order n)
// to tridiagonal form; returns the subdiagonal.  With H = I - tau v v^T and
// w = B v the similarity stays rank-2 because v^T B v = 0 exactly:
//     H B H = B + tau v w^T - tau w v^T.
std::vector<double> antisymmetric_tridiagonalize(std::vector<double>& b, int n) {
    std::vector<double> beta(n > 1 ? n - 1 : 0, 0.0);
    std::vector<double> v(n), w(n);
    for (int k = 0; k + 2 < n; ++k) {
        double tail2 = 0.0;
        for (int i = k + 2; i < n; ++i) {
            const double x = b[static_cast<size_t>(i) * n + k];
            tail2 += x * x;
        }
        const double x0 = b[static_cast<size_t>(k + 1) * n + k];
        if (tail2 == 0.0) {
            beta[k] = x0;
            continue;
        }
        const double nrm = std::sqrt(tail2 + x0 * x0);
        const double alpha = -std::copysign(nrm, x0);
        beta[k] = alpha;
        const int m = n - k - 1;
        for (int i = 0; i < m; ++i)
            v[i] = b[static_cast<size_t>(k + 1 + i) * n + k];
        v[0] -= alpha;
        double vv = 0.0;
        for (int i = 0; i < m; ++i)
            vv += v[i] * v[i];
        const double tau = 2.0 / vv;
        for (int i = 0; i < m; ++i) {
            const double* row = &b[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            double acc = 0.0;
            for (int j = 0; j < m; ++j)
                acc += row[j] * v[j];
            w[i] = acc;
        }
        for (int i = 0; i < m; ++i) {
            double* row = &b[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            const double tvi = tau * v[i], twi = tau * w[i];
            for (int j = 0; j < m; ++j)
                row[j] += tvi * w[j] - twi * v[j];
        }
    }
    if (n > 1)
        beta[n - 2] = b[static_cast<size_t>(n - 1) * n + (n - 2)];
    return beta;
}

// Implicit-shift QL for a symmetric tridiagonal matrix, eigenvalues only.
// d: diagonal (order n), e: subdiagonal in e[0..n-2], e[n-1] scratch.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw ConvergenceError("tridiagonal QL: iteration cap reached");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double sn = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = sn * e[i];
                    const double bb = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    sn = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * sn + 2.0 * c * bb;
                    p = sn * r;
                    d[i + 1] = g + p;
                    g = c * r - bb;
                }
                if (r == 0.0 && i >= l)
                    continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

ComplexMatrix build_lax(const LaxMatrixSpec& spec) {
    check_spec(spec);
    const int n = spec.n;
    ComplexMatrix mat(static_cast<size_t>(n) * n, {0.0, 0.0});
    if (spec.boundary == Boundary::open) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (j != k)
                    mat[static_cast<size_t>(j) * n + k] = {0.0, spec.lambda * coth(spec.a * (j - k))};
    } else {
        const std::vector<double> c = periodic_coefficients(n, spec.a);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (j != k)
                    mat[static_cast<size_t>(j) * n + k] = {0.0, spec.lambda * c[(j - k + n) % n]};
    }
    return mat;
}

ComplexMatrix build_asymptotic_lax(const std::vector<double>& k, double lambda) {
    const int n = static_cast<int>(k.size());
    if (n < 1)
        throw DomainError("asymptotic lax: need at least one momentum");
    ComplexMatrix mat(static_cast<size_t>(n) * n, {0.0, 0.0});
    for (int j = 0; j < n; ++j) {
        mat[static_cast<size_t>(j) * n + j] = {k[j], 0.0};
        for (int l = 0; l < n; ++l)
            if (l != j)
                mat[static_cast<size_t>(j) * n + l] = {0.0, j > l ? lambda : -lambda};
    }
    return mat;
}

Spectrum eigenvalues_hermitian(const ComplexMatrix& m) {
    const size_t sz = m.size();
    const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(sz))));
    if (n < 1 || static_cast<size_t>(n) * n != sz)
        throw DomainError("eigenvalues_hermitian: matrix is not square");
    double scale = 0.0, dev = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::complex<double> x = m[static_cast<size_t>(i) * n + j];
            scale = std::max(scale, std::abs(x));
            dev = std::max(dev, std::abs(x - std::conj(m[static_cast<size_t>(j) * n + i])));
        }
    if (dev > 1e-12 * std::max(1.0, scale))
        throw DomainError("eigenvalues_hermitian: input is not Hermitian");

    // real-symmetric embedding; each eigenvalue of the input appears twice
    const int mm = 2 * n;
    std::vector<double> s(static_cast<size_t>(mm) * mm, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = m[static_cast<size_t>(i) * n + j].real();
            const double im = m[static_cast<size_t>(i) * n + j].imag();
            s[static_cast<size_t>(i) * mm + j] = re;
            s[static_cast<size_t>(i) * mm + (n + j)] = -im;
            s[static_cast<size_t>(n + i) * mm + j] = im;
            s[static_cast<size_t>(n + i) * mm + (n + j)] = re;
        }
    jacobi_diagonalize(s, mm, 1e-11);
    std::vector<double> diag(mm);
    for (int i = 0; i < mm; ++i)
        diag[i] = s[static_cast<size_t>(i) * mm + i];
    std::sort(diag.begin(), diag.end());

    Spectrum out;
    out.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i)
        out.eigenvalues[i] = 0.5 * (diag[2 * i] + diag[2 * i + 1]);
    out.spec.n = n;
    return out;
}

double circulant_mu(const LaxMatrixSpec& spec, int s) {
    check_spec(spec);
    if (spec.boundary != Boundary::periodic)
        throw DomainError("circulant_mu: periodic boundary required");
    if (s < 0 || s >= spec.n)
        throw DomainError("circulant_mu: index out of range");
    const int n = spec.n;
    const std::vector<double> c = periodic_coefficients(n, spec.a);
    double sum = 0.0;
    for (int m = 1; m < n; ++m)
        sum += c[m] * std::sin(2.0 * kPi * static_cast<double>(s) * m / n);
    return -spec.lambda * sum;
}

Spectrum circulant_spectrum(const LaxMatrixSpec& spec) {
    check_spec(spec);
    if (spec.boundary != Boundary::periodic)
        throw DomainError("circulant_spectrum: periodic boundary required");
    const int n = spec.n;
    const std::vector<double> c = periodic_coefficients(n, spec.a);
    Spectrum out;
    out.spec = spec;
    out.eigenvalues.resize(n);
    for (int s = 0; s < n; ++s) {
        double sum = 0.0;
        for (int m = 1; m < n; ++m)
            sum += c[m] * std::sin(2.0 * kPi * static_cast<double>(s) * m / n);
        out.eigenvalues[s] = -spec.lambda * sum;
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

Spectrum open_spectrum(const LaxMatrixSpec& spec) {
    check_spec(spec);
    if (spec.boundary != Boundary::open)
        throw DomainError("open_spectrum: open boundary required");
    const int n = spec.n;
    // real antisymmetric coefficient matrix, L = i lambda B
    std::vector<double> b(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (j != k)
                b[static_cast<size_t>(j) * n + k] = coth(spec.a * (j - k));
    const std::vector<double> beta = antisymmetric_tridiagonalize(b, n);
    // i T is unitarily similar (diagonal phase rescaling) to the real
    // symmetric tridiagonal with zero diagonal and off-diagonal |beta|
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (int i = 0; i + 1 < n; ++i)
        e[i] = std::fabs(beta[i]);
    tridiagonal_ql(d, e);
    for (double& x : d)
        x *= spec.lambda;
    std::sort(d.begin(), d.end());
    Spectrum out;
    out.eigenvalues = std::move(d);
    out.spec = spec;
    return out;
}

Spectrum spectrum_of(const LaxMatrixSpec& spec) {
    check_spec(spec);
    constexpr int kDenseCut = 256;
    if (spec.n <= kDenseCut) {
        Spectrum out = eigenvalues_hermitian(build_lax(spec));
        out.spec = spec;
        return out;
    }
    return spec.boundary == Boundary::open ? open_spectrum(spec) : circulant_spectrum(spec);
}

exact::DensityOnGrid empirical_density(const Spectrum& sp, int bins) {
    if (bins < 2)
        throw DomainError("empirical_density: bins must be >= 2");
    if (sp.eigenvalues.size() < 2)
        throw DomainError("empirical_density: need at least two eigenvalues");
    const std::vector<double> x = ecdf_sample(sp);
    double lo = x.front(), hi = x.back();
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    exact::DensityOnGrid out;
    out.support = std::max(std::fabs(lo), std::fabs(hi));
    out.nodes.resize(bins);
    out.weights.assign(bins, width);
    out.values.assign(bins, 0.0);
    for (int bin = 0; bin < bins; ++bin)
        out.nodes[bin] = lo + (bin + 0.5) * width;
    const double unit = 1.0 / (static_cast<double>(x.size()) * width);
    for (const double xi : x) {
        int bin = static_cast<int>((xi - lo) / width);
        if (bin < 0)
            bin = 0;
        if (bin >= bins)
            bin = bins - 1;
        out.values[static_cast<size_t>(bin)] += unit;
    }
    return out;
}

std::vector<double> ecdf_sample(const Spectrum& sp) {
    std::vector<double> x = sp.eigenvalues;
    const double r = 0.5 / sp.spec.lambda;
    for (double& v : x)
        v *= r;
    std::sort(x.begin(), x.end());
    return x;
}

}  // namespace cslax::lax
