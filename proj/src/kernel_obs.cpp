#include "foldbs/kernel_obs.hpp"

#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

namespace {

// Anti-diagonal trapezoid as in kernel_ctrl; kept local, the two solvers do
// not share internals.
double antidiag_integral(const Matrix& F, int i, int j, double h, double foot_value) {
    const int d = i - j;
    if (d == 0) return 0.0;
    if (d % 2 == 0) {
        const int mi = (i + j) / 2;
        double acc = 0.5 * (F(mi, mi) + F(i, j));
        for (int k = 1; k < d / 2; ++k) acc += F(mi + k, mi - k);
        return acc * h;
    }
    const int lo = (i + j - 1) / 2;
    const int nseg = (d + 1) / 2;
    const double first = F(lo + 1, lo);
    double acc = 0.25 * h * (foot_value + first);
    if (nseg >= 2) {
        double inner = 0.5 * (first + F(i, j));
        for (int k = 1; k < nseg - 1; ++k) inner += F(lo + 1 + k, lo - k);
        acc += inner * h;
    }
    return acc;
}

}  // namespace

ObserverKernel solve_observer_kernel(const Vector& lambda_i, double eps_i, double c_i,
                                     const SolveOptions& opt) {
    require(eps_i > 0.0, "solve_observer_kernel: eps must be positive");
    require(c_i > 0.0, "solve_observer_kernel: c must be positive");
    const int n = opt.tri_n;
    require(n >= 5, "solve_observer_kernel: tri_n too small");
    require(lambda_i.size() == n, "solve_observer_kernel: lambda sampled on a different grid");
    const double h = 1.0 / double(n - 1);

    // mu(x) = (lambda(x) + c)/eps; the PDE coefficient takes the x argument
    Vector mu(n);
    for (int i = 0; i < n; ++i) mu(i) = (lambda_i(i) + c_i) / eps_i;

    ObserverKernel out;
    out.eps_i = eps_i;
    out.c_i = c_i;
    out.lambda_i = lambda_i;
    out.Phi = TriGrid(n);

    // G = (d_x + d_y) Phi with (d_x - d_y) G = -mu(x) Phi and diagonal data
    // G(x,x) = -mu(x)/2; Phi integrates G backward from the x=1 edge.
    TriGrid G(n), Phi(n), nG(n), nPhi(n);
    TriGrid S(n);  // mu(x) Phi
    Vector sdiag(n);

    double diff = 0.0;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) S(i, j) = mu(i) * Phi(i, j);
        for (int i = 0; i < n; ++i) sdiag(i) = S(i, i);

        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            for (int j = 0; j <= i; ++j) {
                const double y = j * h;
                const double m = 0.5 * (x + y);
                nG(i, j) = -0.5 * (interp1(lambda_i, 0.0, h, m) + c_i) / eps_i -
                           antidiag_integral(S.raw(), i, j, h, interp1(sdiag, 0.0, h, m));
            }
        }
        // Phi(x,y) = -int_0^{1-x} G(x+t, y+t) dt along exact nodes
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                const int len = n - 1 - i;
                if (len == 0) {
                    nPhi(i, j) = 0.0;
                    continue;
                }
                double acc = 0.5 * (nG(i, j) + nG(n - 1, j + len));
                for (int k = 1; k < len; ++k) acc += nG(i + k, j + k);
                nPhi(i, j) = -acc * h;
            }
        }

        diff = std::max(G.sup_diff(nG), Phi.sup_diff(nPhi));
        G = nG;
        Phi = nPhi;
        const double scale = std::max(G.sup_norm(), Phi.sup_norm());
        if (diff <= opt.tol * (1.0 + scale)) {
            out.Phi = Phi;
            out.phi = Vector(n);
            for (int i = 0; i < n; ++i) out.phi(i) = -eps_i * Phi(i, 0);
            out.stats = {iter + 1, diff};
            return out;
        }
    }
    throw NonConvergenceError("solve_observer_kernel did not converge", diff);
}

double bessel_i1_over_z(double z) {
    const double q = 0.25 * z * z;
    double term = 0.5;  // k = 0
    double sum = term;
    for (int k = 0; k < 200; ++k) {
        term *= q / (double(k + 1) * double(k + 2));
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum)) break;
    }
    return sum;
}

double bessel_phi_closed_form(double x, double y, double lambda_const, double eps_i, double c_i) {
    require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= x, "bessel_phi_closed_form: (x,y) outside T");
    const double mu = (lambda_const + c_i) / eps_i;
    require(mu >= 0.0, "bessel_phi_closed_form: lambda + c must be nonnegative");
    if (mu == 0.0) return 0.0;
    const double v = std::sqrt(mu * (2.0 - x - y) * (x - y));
    return mu * (1.0 - x) * bessel_i1_over_z(v);
}

}  // namespace foldbs
