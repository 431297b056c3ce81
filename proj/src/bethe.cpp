#include "cslax/bethe.hpp"

#include <algorithm>
#include <cmath>

// Product-integration Galerkin discretization of
//     int_{-A}^{A} gamma(x - x') rho(x') dx' = const,
//     gamma(u) = ln(1 + u^2) - 2 ln|u|,
// on the reference coordinate s in [-1,1], x = A sin(pi s/2) (graded) or
// x = A s (uniform).  With psi(s) = rho(x(s)) dx/ds the equation becomes a
// kernel equation in s whose singular factors are known in closed form:
//
//   graded:  x - x' = 2A cos(pi (s+s')/4) sin(pi (s-s')/4), so
//     -2 ln|x-x'| = -2 ln(2A) - 2 ln(pi/4) - 2 ln|sinc(pi d/4)| - 2 ln|W|
//                   - 2 [ ln|d| + ln|2-s-s'| + ln|2+s-(-s')| ],  d = s-s',
//     with W(sig) = cos(pi sig/4) / (4 - sig^2) smooth (limit pi/16);
//   uniform: -2 ln|x-x'| = -2 ln A - 2 ln|d|.
//
// The smooth remainder is integrated cell-by-cell with a 4-point Gauss rule;
// each bare logarithm is integrated exactly against the piecewise-linear
// basis via the primitives P_j(u) = int u^j ln|u| du.  Both sides are tested
// against the basis (Galerkin), which keeps the matrix symmetric and, the
// kernel being positive definite, SPD.

namespace cslax::bethe {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double grid_x(double s, double bigA, GridKind grid) {
    return grid == GridKind::graded ? bigA * std::sin(0.5 * kPi * s) : bigA * s;
}

double grid_mu(double s, double bigA, GridKind grid) {
    return grid == GridKind::graded ? 0.5 * kPi * bigA * std::cos(0.5 * kPi * s) : bigA;
}

namespace {

// 4-point Gauss-Legendre nodes/weights on [0, 1]
constexpr double kGX[4] = {0.069431844202973712, 0.33000947820757187,
                           0.66999052179242813, 0.93056815579702628};
constexpr double kGW[4] = {0.17392742256872693, 0.32607257743127307,
                           0.32607257743127307, 0.17392742256872693};

double log_sinc(double z) {  // ln(sin z / z), z = 0 -> 0
    if (z == 0.0)
        return 0.0;
    return std::log(std::abs(std::sin(z) / z));
}

double log_w(double sig) {  // ln W(sig), W = cos(pi sig/4)/(4 - sig^2)
    const double den = 4.0 - sig * sig;
    if (std::abs(den) < 1e-12)
        return std::log(kPi / 16.0);
    return std::log(std::abs(std::cos(0.25 * kPi * sig) / den));
}

} // namespace

namespace cellint {

double pj(int j, double u) {
    if (u == 0.0)
        return 0.0;
    const double l = std::log(std::abs(u));
    switch (j) {
        case 0: return u * (l - 1.0);
        case 1: return 0.5 * u * u * (l - 0.5);
        case 2: return u * u * u / 3.0 * (l - 1.0 / 3.0);
        default: return u * u * u * u / 4.0 * (l - 0.25);
    }
}

double shat(int m, double w, double h) {
    static constexpr double binom[4][4] = {
        {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    double tot = 0.0;
    for (int j = 0; j <= m; ++j) {
        double wp = 1.0;
        for (int i = 0; i < m - j; ++i)
            wp *= w;
        tot += binom[m][j] * wp * (pj(j, h - w) - pj(j, -w));
    }
    return tot;
}

namespace {
// sum_m q[m] * int_0^h xi^m ln|xi - w| dxi
double poly_log_int(const double* q, int len, double w, double h) {
    double s = 0.0;
    for (int m = 0; m < len; ++m)
        if (q[m] != 0.0)
            s += q[m] * shat(m, w, h);
    return s;
}

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i)
        r *= x;
    return r;
}
} // namespace

double dmk(int m, int k, double c, double h) {
    double q1[4] = {0, 0, 0, 0}, q2[4] = {0, 0, 0, 0};
    if (k == 0) {
        q1[m] = h - c;
        q1[m + 1] = -1.0;
        q2[m] = c;
        q2[m + 1] = 1.0;
        return poly_log_int(q1, m + 2, h - c, h) + poly_log_int(q2, m + 2, -c, h) -
               h * ipow(h, m + 1) / (m + 1);
    }
    q1[m] = 0.5 * (h * h - c * c);
    q1[m + 1] = -c;
    q1[m + 2] = -0.5;
    q2[m] = 0.5 * c * c;
    q2[m + 1] = c;
    q2[m + 2] = 0.5;
    return poly_log_int(q1, m + 3, h - c, h) + poly_log_int(q2, m + 3, -c, h) -
           (h * h / 4.0) * ipow(h, m + 1) / (m + 1) -
           (h / 2.0) * (ipow(h, m + 2) / (m + 2) + c * ipow(h, m + 1) / (m + 1));
}

double tmk(int m, int k, double beta, double h) {
    double q1[4] = {0, 0, 0, 0}, q2[4] = {0, 0, 0, 0};
    if (k == 0) {
        q1[m] = h - beta;
        q1[m + 1] = 1.0;
        q2[m] = beta;
        q2[m + 1] = -1.0;
        return poly_log_int(q1, m + 2, beta - h, h) + poly_log_int(q2, m + 2, beta, h) -
               h * ipow(h, m + 1) / (m + 1);
    }
    q1[m] = 0.5 * (h * h - beta * beta);
    q1[m + 1] = beta;
    q1[m + 2] = -0.5;
    q2[m] = 0.5 * beta * beta;
    q2[m + 1] = -beta;
    q2[m + 2] = 0.5;
    return poly_log_int(q1, m + 3, beta - h, h) + poly_log_int(q2, m + 3, beta, h) -
           (h * h / 4.0) * ipow(h, m + 1) / (m + 1) -
           (h / 2.0) * (beta * ipow(h, m + 1) / (m + 1) - ipow(h, m + 2) / (m + 2));
}

double umk(int m, int k, double B, double h) {
    // reflect xi -> h - xi, eta -> h - eta into the T form at beta = B + 2h
    const double bp = B + 2.0 * h;
    if (m == 0 && k == 0)
        return tmk(0, 0, bp, h);
    if (m == 0 && k == 1)
        return h * tmk(0, 0, bp, h) - tmk(0, 1, bp, h);
    if (m == 1 && k == 0)
        return h * tmk(0, 0, bp, h) - tmk(1, 0, bp, h);
    return h * h * tmk(0, 0, bp, h) - h * tmk(0, 1, bp, h) - h * tmk(1, 0, bp, h) +
           tmk(1, 1, bp, h);
}

} // namespace cellint

double kernel_gamma(double x) {
    if (x == 0.0)
        throw PoleError("kernel_gamma: pole at x = 0");
    return std::log1p(1.0 / (x * x));
}

namespace {

// Holds everything that does not depend on the support half-width A, so the
// outer root-find pays only for the ln(1+u^2) Gauss part and the
// factorization on each iteration.
class Assembler {
  public:
    Assembler(int n, GridKind grid) : n_(n), grid_(grid), h_(2.0 / n) {
        if (n < 16)
            throw DomainError("assemble_kernel: need at least 16 cells");
        s_nodes_.resize(n + 1);
        for (int i = 0; i <= n; ++i)
            s_nodes_[i] = -1.0 + h_ * i;
        sg_.resize(4 * n);
        msin_.resize(4 * n);
        for (int p = 0; p < n; ++p)
            for (int r = 0; r < 4; ++r) {
                const double s = s_nodes_[p] + h_ * kGX[r];
                sg_[4 * p + r] = s;
                msin_[4 * p + r] = grid == GridKind::graded ? std::sin(0.5 * kPi * s) : s;
            }
        // nodal Gauss weights: nu[d][r] = int of basis-d against xi^m weights
        for (int r = 0; r < 4; ++r) {
            nu_[0][r] = kGW[r] * h_ * (1.0 - kGX[r]);
            nu_[1][r] = kGW[r] * h_ * kGX[r];
        }
        build_base();
    }

    int n() const { return n_; }
    GridKind grid() const { return grid_; }
    double h() const { return h_; }
    const std::vector<double>& s_nodes() const { return s_nodes_; }

    // Full symmetric Galerkin matrix for support half-width A.
    std::vector<double> matrix(double A) const {
        if (!(A > 0.0))
            throw DomainError("assemble_kernel: support half-width must be positive");
        const int N = n_ + 1;
        std::vector<double> G = base_;
        const double ca =
            grid_ == GridKind::graded ? -2.0 * std::log(2.0 * A) : -2.0 * std::log(A);
        // per-A smooth part: pair loop (q >= p), added symmetrically
        double R[4][4];
        for (int p = 0; p < n_; ++p)
            for (int q = p; q < n_; ++q) {
                for (int r = 0; r < 4; ++r)
                    for (int t = 0; t < 4; ++t) {
                        const double u = A * (msin_[4 * p + r] - msin_[4 * q + t]);
                        R[r][t] = std::log1p(u * u) + ca;
                    }
                for (int di = 0; di < 2; ++di)
                    for (int dj = 0; dj < 2; ++dj) {
                        double val = 0.0;
                        for (int r = 0; r < 4; ++r) {
                            double row = 0.0;
                            for (int t = 0; t < 4; ++t)
                                row += nu_[dj][t] * R[r][t];
                            val += nu_[di][r] * row;
                        }
                        G[(p + di) * N + (q + dj)] += val;
                        if (q > p)
                            G[(q + dj) * N + (p + di)] += val;
                    }
            }
        // exact symmetry for the factorization
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                const double v = 0.5 * (G[i * N + j] + G[j * N + i]);
                G[i * N + j] = G[j * N + i] = v;
            }
        return G;
    }

  private:
    void build_base() {
        const int N = n_ + 1;
        base_.assign(static_cast<size_t>(N) * N, 0.0);

        // closed-form log integrals: tables over p-q and p+q
        const bool graded = grid_ == GridKind::graded;
        std::vector<double> Dv[2][2], Tv[2][2], Uv[2][2];
        for (int m = 0; m < 2; ++m)
            for (int k = 0; k < 2; ++k) {
                Dv[m][k].resize(2 * n_ - 1);
                for (int d = -(n_ - 1); d <= n_ - 1; ++d)
                    Dv[m][k][d + n_ - 1] = cellint::dmk(m, k, d * h_, h_);
                if (graded) {
                    Tv[m][k].resize(2 * n_ - 1);
                    Uv[m][k].resize(2 * n_ - 1);
                    for (int r = 0; r <= 2 * n_ - 2; ++r) {
                        Tv[m][k][r] = cellint::tmk(m, k, 4.0 - r * h_, h_);
                        Uv[m][k][r] = cellint::umk(m, k, r * h_, h_);
                    }
                }
            }
        const double ih = 1.0 / h_;
        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < n_; ++q) {
                const int dd = p - q + n_ - 1, rr = p + q;
                double I[2][2];
                for (int m = 0; m < 2; ++m)
                    for (int k = 0; k < 2; ++k) {
                        double v = Dv[m][k][dd];
                        if (graded)
                            v += Tv[m][k][rr] + Uv[m][k][rr];
                        I[m][k] = -2.0 * v;
                    }
                // distribute over the nodal hat functions:
                // phi_p = 1 - xi/h -> (1, -1/h); phi_{p+1} -> (0, 1/h)
                const double c00 = I[0][0] - ih * (I[0][1] + I[1][0]) + ih * ih * I[1][1];
                const double c01 = ih * (I[0][1] - ih * I[1][1]);
                const double c10 = ih * (I[1][0] - ih * I[1][1]);
                const double c11 = ih * ih * I[1][1];
                base_[p * N + q] += c00;
                base_[p * N + (q + 1)] += c01;
                base_[(p + 1) * N + q] += c10;
                base_[(p + 1) * N + (q + 1)] += c11;
            }

        // A-independent smooth factors (graded only): -2 ln(pi/4)
        // - 2 ln sinc(pi d/4) - 2 ln W(s+s')
        if (graded) {
            const double c0 = -2.0 * std::log(0.25 * kPi);
            double R[4][4];
            for (int p = 0; p < n_; ++p)
                for (int q = p; q < n_; ++q) {
                    for (int r = 0; r < 4; ++r)
                        for (int t = 0; t < 4; ++t) {
                            const double d = sg_[4 * p + r] - sg_[4 * q + t];
                            const double sig = sg_[4 * p + r] + sg_[4 * q + t];
                            R[r][t] = c0 - 2.0 * log_sinc(0.25 * kPi * d) - 2.0 * log_w(sig);
                        }
                    for (int di = 0; di < 2; ++di)
                        for (int dj = 0; dj < 2; ++dj) {
                            double val = 0.0;
                            for (int r = 0; r < 4; ++r) {
                                double row = 0.0;
                                for (int t = 0; t < 4; ++t)
                                    row += nu_[dj][t] * R[r][t];
                                val += nu_[di][r] * row;
                            }
                            base_[(p + di) * N + (q + dj)] += val;
                            if (q > p)
                                base_[(q + dj) * N + (p + di)] += val;
                        }
                }
        }
    }

    int n_;
    GridKind grid_;
    double h_;
    std::vector<double> s_nodes_;
    std::vector<double> sg_;
    std::vector<double> msin_;
    double nu_[2][4];
    std::vector<double> base_;
};

// Equilibrated Cholesky solve of the symmetric system G psi = b.
// Returns the solution; throws SpdError if a pivot fails.
std::vector<double> spd_solve(std::vector<double> G, int N, const std::vector<double>& b) {
    std::vector<double> d(N);
    for (int i = 0; i < N; ++i) {
        const double g = G[i * static_cast<size_t>(N) + i];
        if (!(g > 0.0))
            throw SpdError("kernel matrix: nonpositive diagonal entry");
        d[i] = 1.0 / std::sqrt(g);
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            G[i * static_cast<size_t>(N) + j] *= d[i] * d[j];
    // in-place lower Cholesky
    for (int j = 0; j < N; ++j) {
        double s = G[j * static_cast<size_t>(N) + j];
        for (int k = 0; k < j; ++k) {
            const double l = G[j * static_cast<size_t>(N) + k];
            s -= l * l;
        }
        if (!(s > 0.0))
            throw SpdError("kernel matrix: Cholesky pivot failed (not SPD)");
        const double ljj = std::sqrt(s);
        G[j * static_cast<size_t>(N) + j] = ljj;
        for (int i = j + 1; i < N; ++i) {
            double v = G[i * static_cast<size_t>(N) + j];
            for (int k = 0; k < j; ++k)
                v -= G[i * static_cast<size_t>(N) + k] * G[j * static_cast<size_t>(N) + k];
            G[i * static_cast<size_t>(N) + j] = v / ljj;
        }
    }
    // forward/back substitution on the equilibrated right side
    std::vector<double> y(N);
    for (int i = 0; i < N; ++i) {
        double v = d[i] * b[i];
        for (int k = 0; k < i; ++k)
            v -= G[i * static_cast<size_t>(N) + k] * y[k];
        y[i] = v / G[i * static_cast<size_t>(N) + i];
    }
    for (int i = N - 1; i >= 0; --i) {
        double v = y[i];
        for (int k = i + 1; k < N; ++k)
            v -= G[k * static_cast<size_t>(N) + i] * y[k];
        y[i] = v / G[i * static_cast<size_t>(N) + i];
    }
    for (int i = 0; i < N; ++i)
        y[i] *= d[i];
    return y;
}

BetheSolution solve_with(const Assembler& asmb, double A) {
    const int n = asmb.n();
    const int N = n + 1;
    const double h = asmb.h();
    std::vector<double> G = asmb.matrix(A);
    std::vector<double> b(N, h);
    b[0] = b[n] = 0.5 * h;
    std::vector<double> psi_t = spd_solve(std::move(G), N, b);
    double dot = 0.0;
    for (int i = 0; i < N; ++i)
        dot += b[i] * psi_t[i];
    const double a = 1.0 / (2.0 * dot);

    BetheSolution sol;
    sol.bigA = A;
    sol.a = a;
    sol.nodes_n = n;
    sol.grid = asmb.grid();
    sol.s_nodes = asmb.s_nodes();
    sol.psi.resize(N);
    for (int i = 0; i < N; ++i)
        sol.psi[i] = 2.0 * a * psi_t[i];

    // midpoint container: nodes strictly interior, grid mass exactly int rho
    sol.rho.support = A;
    sol.rho.nodes.resize(n);
    sol.rho.weights.resize(n);
    sol.rho.values.resize(n);
    for (int j = 0; j < n; ++j) {
        const double sm = 0.5 * (sol.s_nodes[j] + sol.s_nodes[j + 1]);
        const double pm = 0.5 * (sol.psi[j] + sol.psi[j + 1]);
        const double mu = grid_mu(sm, A, sol.grid);
        sol.rho.nodes[j] = grid_x(sm, A, sol.grid);
        sol.rho.weights[j] = h * mu;
        sol.rho.values[j] = pm / mu;
    }
    return sol;
}

} // namespace

std::vector<double> assemble_kernel(double A, int n, GridKind grid) {
    return Assembler(n, grid).matrix(A);
}

BetheSolution solve_for_A(double A, int n, GridKind grid) {
    return solve_with(Assembler(n, grid), A);
}

BetheSolution solve_for_a(double a, int n, GridKind grid) {
    if (!(a > 0.0))
        throw DomainError("solve_for_a: lattice constant must be positive");
    const Assembler asmb(n, grid);
    // a(A) is monotone decreasing; expand a geometric bracket from A = 1
    double lo = 1.0, hi = 1.0;
    double alo = solve_with(asmb, 1.0).a, ahi = alo;
    int steps = 0;
    while (alo < a) {  // need larger a -> smaller A
        lo /= 2.0;
        alo = solve_with(asmb, lo).a;
        if (++steps >= 60)
            throw ConvergenceError("solve_for_a: bracket expansion cap exceeded");
    }
    while (ahi > a) {
        hi *= 2.0;
        ahi = solve_with(asmb, hi).a;
        if (++steps >= 60)
            throw ConvergenceError("solve_for_a: bracket expansion cap exceeded");
    }
    if (!(alo >= a && ahi <= a))
        throw StructureError("solve_for_a: a(A) is not monotone on the bracket");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double am = solve_with(asmb, mid).a;
        if (am > a)
            lo = mid;
        else
            hi = mid;
        if (std::abs(am - a) < 1e-10)
            break;
    }
    return solve_with(asmb, 0.5 * (lo + hi));
}

double sigma_bethe(double omega, const BetheSolution& sol) {
    const auto& r = sol.rho;
    double s = 0.0;
    for (size_t j = 0; j < r.nodes.size(); ++j) {
        const double u = r.nodes[j] - omega;
        s += r.weights[j] * r.values[j] / (u * u + 0.25);
    }
    return s / (2.0 * kPi);
}

double potential_gamma(const DensityOnGrid& rho, double omega) {
    const int m = static_cast<int>(rho.nodes.size());
    const double A = rho.support;
    if (m < 2 || !(A > 0.0))
        throw DomainError("potential_gamma: degenerate density container");
    if (!(std::abs(omega) < A))
        throw DomainError("potential_gamma: omega outside the open support interval");

    // reference coordinates of the nodes and the implied cell edges
    std::vector<double> st(m), edges(m + 1);
    for (int j = 0; j < m; ++j)
        st[j] = (2.0 / kPi) * std::asin(std::clamp(rho.nodes[j] / A, -1.0, 1.0));
    edges[0] = -1.0;
    edges[m] = 1.0;
    for (int j = 1; j < m; ++j)
        edges[j] = 0.5 * (st[j - 1] + st[j]);

    const double s0 = (2.0 / kPi) * std::asin(std::clamp(omega / A, -1.0, 1.0));
    const double lead = -2.0 * std::log(2.0 * A) - 2.0 * std::log(0.25 * kPi);
    double smooth = 0.0, sing = 0.0;
    for (int j = 0; j < m; ++j) {
        const double width = edges[j + 1] - edges[j];
        if (!(width > 0.0))
            throw DomainError("potential_gamma: nodes not strictly increasing");
        const double psi = rho.weights[j] * rho.values[j] / width;  // exact cell mass
        double acc = 0.0;
        for (int r = 0; r < 4; ++r) {
            const double gs = edges[j] + width * kGX[r];
            const double xg = A * std::sin(0.5 * kPi * gs);
            const double u = omega - xg;
            const double R = std::log1p(u * u) + lead - 2.0 * log_sinc(0.25 * kPi * (s0 - gs)) -
                             2.0 * log_w(s0 + gs);
            acc += kGW[r] * R;
        }
        smooth += psi * width * acc;
        const double t1 = cellint::pj(0, s0 - edges[j]) - cellint::pj(0, s0 - edges[j + 1]);
        const double t2 =
            cellint::pj(0, 2.0 - s0 - edges[j]) - cellint::pj(0, 2.0 - s0 - edges[j + 1]);
        const double t3 =
            cellint::pj(0, 2.0 + s0 + edges[j + 1]) - cellint::pj(0, 2.0 + s0 + edges[j]);
        sing += psi * (t1 + t2 + t3);
    }
    return smooth - 2.0 * sing;
}

} // namespace cslax::bethe
