#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cslax/elliptic.hpp"
#include "cslax/errors.hpp"
#include "cslax/exact_spectrum.hpp"
#include "cslax/lax.hpp"
#include "reference_values.hpp"

namespace lx = cslax::lax;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool close(double x, double y, double tol) { return std::fabs(x - y) <= tol; }
bool rclose(double x, double y, double rtol) {
    return std::fabs(x - y) <= rtol * std::max(std::fabs(x), std::fabs(y));
}

double coth(double x) { return 1.0 / std::tanh(x); }

// second spectral moment of the open chain in closed form:
// sum_jk |L_jk|^2 = 2 lambda^2 sum_{m=1}^{N-1} (N-m) coth^2(a m)
double open_secmom(int n, double a, double lambda) {
    double s = 0.0;
    for (int m = 1; m < n; ++m) s += (n - m) * coth(a * m) * coth(a * m);
    return 2.0 * lambda * lambda * s;
}

double periodic_coeff(int n, int bigN, double a) {
    return coth(a * n) - coth(a * (bigN - n)) + (bigN - 2.0 * n) / bigN;
}

// Solve A x = b by LU with partial pivoting; A is overwritten.
std::vector<cd> lu_solve(std::vector<cd> A, std::vector<cd> b, int n) {
    std::vector<int> piv(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[static_cast<size_t>(r) * n + c]) >
                std::abs(A[static_cast<size_t>(p) * n + c]))
                p = r;
        piv[c] = p;
        if (p != c)
            for (int j = 0; j < n; ++j)
                std::swap(A[static_cast<size_t>(c) * n + j], A[static_cast<size_t>(p) * n + j]);
        std::swap(b[c], b[piv[c]]);
        for (int r = c + 1; r < n; ++r) {
            const cd f = A[static_cast<size_t>(r) * n + c] / A[static_cast<size_t>(c) * n + c];
            A[static_cast<size_t>(r) * n + c] = 0.0;
            for (int j = c + 1; j < n; ++j)
                A[static_cast<size_t>(r) * n + j] -= f * A[static_cast<size_t>(c) * n + j];
            b[r] -= f * b[c];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        cd s = b[r];
        for (int j = r + 1; j < n; ++j) s -= A[static_cast<size_t>(r) * n + j] * b[j];
        b[r] = s / A[static_cast<size_t>(r) * n + r];
    }
    return b;
}

}  // namespace

TEST_CASE("build_lax entries, Hermiticity, and guards") {
    const double a = 0.8, lambda = 1.7;
    const auto L2 = lx::build_lax({2, a, lambda, lx::Boundary::open});
    CHECK(L2[0] == cd(0.0, 0.0));
    CHECK(L2[3] == cd(0.0, 0.0));
    CHECK(close(std::imag(L2[1]), -lambda * coth(a), 1e-15));
    CHECK(close(std::imag(L2[2]), lambda * coth(a), 1e-15));
    CHECK(std::real(L2[1]) == 0.0);

    for (auto b : {lx::Boundary::open, lx::Boundary::periodic}) {
        const int n = 7;
        const auto L = lx::build_lax({n, 1.0, 1.0, b});
        REQUIRE(L.size() == static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            CHECK(L[static_cast<size_t>(i) * n + i] == cd(0.0, 0.0));
            for (int j = 0; j < n; ++j)
                CHECK(L[static_cast<size_t>(i) * n + j] ==
                      std::conj(L[static_cast<size_t>(j) * n + i]));
        }
    }

    CHECK_THROWS_AS(lx::build_lax({1, 1.0, 1.0, lx::Boundary::open}), cslax::DomainError);
    CHECK_THROWS_AS(lx::build_lax({4, 0.0, 1.0, lx::Boundary::open}), cslax::DomainError);
    CHECK_THROWS_AS(lx::build_lax({4, 1.0, -1.0, lx::Boundary::open}), cslax::DomainError);
}

TEST_CASE("periodic first row is exactly antisymmetric") {
    const int n = 12;
    const auto L = lx::build_lax({n, 0.6, 1.3, lx::Boundary::periodic});
    for (int m = 1; m < n; ++m) {
        CHECK(std::imag(L[m]) == -std::imag(L[static_cast<size_t>(n - m)]));
        CHECK(std::real(L[m]) == 0.0);
    }
}

TEST_CASE("asymptotic matrix: sign-matrix spectrum and trace") {
    const auto sp2 = lx::eigenvalues_hermitian(lx::build_asymptotic_lax({0.0, 0.0}, 1.0));
    REQUIRE(sp2.eigenvalues.size() == 2);
    CHECK(close(sp2.eigenvalues[0], -1.0, 1e-14));
    CHECK(close(sp2.eigenvalues[1], 1.0, 1e-14));

    // pure sign matrix, N = 8: eigenvalues lambda * cot((2s+1) pi / 16)
    const int n = 8;
    const double lambda = 0.9;
    const auto sp = lx::eigenvalues_hermitian(
        lx::build_asymptotic_lax(std::vector<double>(n, 0.0), lambda));
    std::vector<double> want;
    for (int s = 0; s < n; ++s) want.push_back(lambda / std::tan((2 * s + 1) * kPi / (2 * n)));
    std::sort(want.begin(), want.end());
    for (int i = 0; i < n; ++i) CHECK(close(sp.eigenvalues[i], want[i], 1e-10));

    // nonzero momenta shift the trace to sum k_j
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> k(10);
    double ksum = 0.0;
    for (auto& v : k) {
        v = u(rng);
        ksum += v;
    }
    const auto spk = lx::eigenvalues_hermitian(lx::build_asymptotic_lax(k, 0.7));
    double esum = 0.0;
    for (double e : spk.eigenvalues) esum += e;
    CHECK(rclose(esum, ksum, 1e-12));

    CHECK_THROWS_AS(lx::build_asymptotic_lax({}, 1.0), cslax::DomainError);
}

TEST_CASE("eigenvalues_hermitian on closed-form cases") {
    // diagonal matrix comes back sorted
    lx::ComplexMatrix D(9, cd(0.0, 0.0));
    D[0] = 3.0;
    D[4] = -1.0;
    D[8] = 2.0;
    const auto spd = lx::eigenvalues_hermitian(D);
    CHECK(close(spd.eigenvalues[0], -1.0, 1e-13));
    CHECK(close(spd.eigenvalues[1], 2.0, 1e-13));
    CHECK(close(spd.eigenvalues[2], 3.0, 1e-13));

    // [[1, 2-i], [2+i, -1]] has eigenvalues +-sqrt(6)
    const lx::ComplexMatrix M = {cd(1, 0), cd(2, -1), cd(2, 1), cd(-1, 0)};
    const auto spm = lx::eigenvalues_hermitian(M);
    CHECK(close(spm.eigenvalues[0], -std::sqrt(6.0), 1e-14));
    CHECK(close(spm.eigenvalues[1], std::sqrt(6.0), 1e-14));

    CHECK_THROWS_AS(lx::eigenvalues_hermitian(lx::ComplexMatrix(3, cd(0, 0))),
                    cslax::DomainError);
    CHECK_THROWS_AS(lx::eigenvalues_hermitian({cd(0, 0), cd(1, 0), cd(2, 0), cd(0, 0)}),
                    cslax::DomainError);

    // random Hermitian: eigenvalue sum reproduces the trace
    const int n = 40;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    lx::ComplexMatrix H(static_cast<size_t>(n) * n);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = u(rng);
        H[static_cast<size_t>(i) * n + i] = d;
        tr += d;
        for (int j = i + 1; j < n; ++j) {
            const cd v(u(rng), u(rng));
            H[static_cast<size_t>(i) * n + j] = v;
            H[static_cast<size_t>(j) * n + i] = std::conj(v);
        }
    }
    const auto sph = lx::eigenvalues_hermitian(H);
    double esum = 0.0;
    for (double e : sph.eigenvalues) esum += e;
    CHECK(close(esum, tr, 1e-12 * n));
}

TEST_CASE("five-particle open chain against independent pins") {
    const auto sp = lx::spectrum_of({5, 1.0, 1.0, lx::Boundary::open});
    REQUIRE(sp.eigenvalues.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(close(sp.eigenvalues[i], ref::kOpen5[i], 1e-12));

    // elementary symmetric functions via Newton's identities: the odd ones
    // vanish by the +- symmetry and e2, e4 match the pinned characteristic
    // polynomial z^5 + e2 z^3 + e4 z
    double p[6] = {5.0, 0, 0, 0, 0, 0};
    for (int k = 1; k <= 5; ++k)
        for (double mu : sp.eigenvalues) p[k] += std::pow(mu, k);
    const double e1 = p[1];
    const double e2 = (e1 * p[1] - p[2]) / 2;
    const double e3 = (e2 * p[1] - e1 * p[2] + p[3]) / 3;
    const double e4 = (e3 * p[1] - e2 * p[2] + e1 * p[3] - p[4]) / 4;
    const double e5 = (e4 * p[1] - e3 * p[2] + e2 * p[3] - e1 * p[4] + p[5]) / 5;
    CHECK(std::fabs(e1) <= 1e-12);
    CHECK(std::fabs(e3) <= 1e-11);
    CHECK(std::fabs(e5) <= 1e-11);
    CHECK(close(e2, ref::kOpen5_e2, 1e-8));
    CHECK(close(e4, ref::kOpen5_e4, 1e-8));

    // every computed eigenvalue is a root of the pinned polynomial
    double scale = 0.0;
    for (double mu : sp.eigenvalues) scale = std::max(scale, std::pow(std::fabs(mu), 5));
    for (double mu : sp.eigenvalues) {
        const double r = ((mu * mu + ref::kOpen5_e2) * mu * mu + ref::kOpen5_e4) * mu;
        CHECK(std::fabs(r) <= 1e-10 * scale);
    }
}

TEST_CASE("eigenpairs pass a backward check by inverse iteration") {
    const int n = 64;
    const auto L = lx::build_lax({n, 1.0, 1.0, lx::Boundary::open});
    const auto sp = lx::eigenvalues_hermitian(L);
    double lnorm = 0.0;
    for (const cd& v : L) lnorm += std::norm(v);
    lnorm = std::sqrt(lnorm);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int idx : {0, 13, 32, 50, 63}) {
        const double mu = sp.eigenvalues[idx];
        auto A = L;
        const cd shift(mu + 1e-7, 0.0);
        for (int i = 0; i < n; ++i) A[static_cast<size_t>(i) * n + i] -= shift;
        std::vector<cd> v(n);
        for (auto& x : v) x = cd(u(rng), u(rng));
        for (int it = 0; it < 3; ++it) {
            v = lu_solve(A, v, n);
            double nn = 0.0;
            for (const cd& x : v) nn += std::norm(x);
            nn = std::sqrt(nn);
            for (auto& x : v) x /= nn;
        }
        double rnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            cd r = -mu * v[i];
            for (int j = 0; j < n; ++j) r += L[static_cast<size_t>(i) * n + j] * v[j];
            rnorm += std::norm(r);
        }
        CHECK(std::sqrt(rnorm) <= 1e-9 * lnorm);
    }
}

TEST_CASE("tridiagonal fast path agrees with the dense solver") {
    for (int n : {64, 128}) {
        const lx::LaxMatrixSpec spec{n, 1.0, 1.0, lx::Boundary::open};
        const auto fast = lx::open_spectrum(spec);
        const auto dense = lx::eigenvalues_hermitian(lx::build_lax(spec));
        REQUIRE(fast.eigenvalues.size() == static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) CHECK(close(fast.eigenvalues[i], dense.eigenvalues[i], 5e-11));
    }
}

TEST_CASE("open spectrum: symmetry, trace, second moment") {
    for (int n : {64, 512}) {
        const auto sp = lx::open_spectrum({n, 1.0, 1.0, lx::Boundary::open});
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i) CHECK(sp.eigenvalues[i] >= sp.eigenvalues[i - 1]);
            sum += sp.eigenvalues[i];
            sq += sp.eigenvalues[i] * sp.eigenvalues[i];
            CHECK(close(sp.eigenvalues[i], -sp.eigenvalues[n - 1 - i], 1e-10));
        }
        CHECK(std::fabs(sum) <= 1e-9 * n);
        CHECK(rclose(sq, open_secmom(n, 1.0, 1.0), 1e-8));
    }
}

TEST_CASE("circulant spectrum: dense agreement, curve limit, second moment") {
    const lx::LaxMatrixSpec s64{64, 1.0, 1.0, lx::Boundary::periodic};
    const auto fast = lx::circulant_spectrum(s64);
    const auto dense = lx::eigenvalues_hermitian(lx::build_lax(s64));
    for (int i = 0; i < 64; ++i) CHECK(close(fast.eigenvalues[i], dense.eigenvalues[i], 1e-11));

    // Fourier eigenvalues approach twice the spectral curve away from the
    // band ends, where the two-image truncation error is exponentially small
    const auto p = cslax::elliptic::modulus_from_a(1.0);
    for (int n : {512, 2048}) {
        const lx::LaxMatrixSpec spec{n, 1.0, 1.0, lx::Boundary::periodic};
        const double tol = n == 512 ? 1e-11 : 1e-10;
        double worst = 0.0;
        for (int s = n / 10; s <= 9 * n / 10; s += n / 40) {
            const double curve = 2.0 * cslax::exact::omega_of_phi(2.0 * kPi * s / n, p);
            worst = std::max(worst, std::fabs(lx::circulant_mu(spec, s) - curve));
        }
        CHECK(worst <= tol);
    }

    const int n = 512;
    const auto sp = lx::circulant_spectrum({n, 1.0, 1.0, lx::Boundary::periodic});
    double sq = 0.0, want = 0.0;
    for (double mu : sp.eigenvalues) sq += mu * mu;
    for (int m = 1; m < n; ++m) {
        const double c = periodic_coeff(m, n, 1.0);
        want += c * c;
    }
    CHECK(rclose(sq, n * want, 1e-8));
}

TEST_CASE("coupling scales the spectrum linearly") {
    const auto s1 = lx::spectrum_of({48, 1.0, 1.0, lx::Boundary::open});
    const auto s2 = lx::spectrum_of({48, 1.0, 2.0, lx::Boundary::open});
    for (int i = 0; i < 48; ++i)
        CHECK(rclose(s2.eigenvalues[i], 2.0 * s1.eigenvalues[i], 1e-12));
    // the cumulative-distribution sample is the spectrum in units of 2 lambda
    const auto e2 = lx::ecdf_sample(s2);
    REQUIRE(e2.size() == 48);
    for (int i = 0; i < 48; ++i) {
        CHECK(e2[i] == s2.eigenvalues[i] / 4.0);
        if (i) CHECK(e2[i] >= e2[i - 1]);
    }
}

TEST_CASE("empirical_density is a unit-mass histogram") {
    const auto sp = lx::spectrum_of({200, 1.0, 1.0, lx::Boundary::open});
    const auto d = lx::empirical_density(sp, 41);
    REQUIRE(d.nodes.size() == 41);
    REQUIRE(d.weights.size() == 41);
    REQUIRE(d.values.size() == 41);
    double mass = 0.0;
    for (int i = 0; i < 41; ++i) {
        CHECK(d.weights[i] > 0.0);
        CHECK(d.values[i] >= 0.0);
        mass += d.weights[i] * d.values[i];
    }
    CHECK(close(mass, 1.0, 1e-12));
    const auto xs = lx::ecdf_sample(sp);
    const double xmax = std::max(std::fabs(xs.front()), std::fabs(xs.back()));
    CHECK(d.support >= xmax * (1.0 - 1e-12));
    CHECK_THROWS_AS(lx::empirical_density(sp, 1), cslax::DomainError);
}
