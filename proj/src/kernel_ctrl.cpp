#include "foldbs/kernel_ctrl.hpp"

#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

namespace {

// Trapezoid of an interpolated field along the straight segment
// (x0 + vx z, y0 + vy z), z in [0, T]; steps sized so the spatial stride ~ h.
double path_integral(const TriGrid& F, double x0, double y0, double vx, double vy, double T,
                     double h) {
    if (T <= 0.0) return 0.0;
    const double speed = std::hypot(vx, vy);
    const int M = std::max(1, static_cast<int>(std::ceil(T * speed / h)));
    const double dz = T / M;
    double acc = 0.5 * (F.interp(x0, y0) + F.interp(x0 + vx * T, y0 + vy * T));
    for (int k = 1; k < M; ++k) acc += F.interp(x0 + vx * k * dz, y0 + vy * k * dz);
    return acc * dz;
}

// Trapezoid of node values along the slope-+1 characteristic from (i-j, 0)
// up to node (i, j); every sample is an exact grid node.
double diag45_integral(const Matrix& F, int i, int j, double h) {
    if (j == 0) return 0.0;
    double acc = 0.5 * (F(i - j, 0) + F(i, j));
    for (int k = 1; k < j; ++k) acc += F(i - j + k, k);
    return acc * h;
}

// Trapezoid along the slope--1 characteristic from the diagonal foot
// m = (x+y)/2 down to node (i, j), parametrized by the spatial offset s.
// Samples are exact nodes except the foot itself when i+j is odd, whose
// integrand value is supplied by the caller.
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
    const int nseg = (d + 1) / 2;  // node samples at s = (k+1/2) h, k < nseg
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

Row1Kernels solve_row1(const FoldedParams& fp, double c1, const SolveOptions& opt) {
    require(c1 > 0.0, "solve_row1: c1 must be positive");
    require(fp.eps1 > 0.0 && fp.eps2 > 0.0, "solve_row1: diffusion coefficients must be positive");
    require(fp.eps1 >= fp.eps2 * (1.0 - 1e-12), "solve_row1: requires eps1 >= eps2");
    require(opt.tri_n >= 5, "solve_row1: tri_n too small");

    const int n = opt.tri_n;
    const double h = 1.0 / double(n - 1);
    const double se1 = std::sqrt(fp.eps1), se2 = std::sqrt(fp.eps2);
    const double wedge_slope = se2 / se1;  // the line sqrt(eps1) y = sqrt(eps2) x
    const double C11 = fp.a * fp.eps2 / (fp.eps1 * (fp.a * fp.eps2 + std::sqrt(fp.eps1 * fp.eps2)));
    const double C12 = 1.0 / (fp.a * fp.eps2 + std::sqrt(fp.eps1 * fp.eps2));

    Vector lam1(n), lam2(n);
    for (int i = 0; i < n; ++i) {
        lam1(i) = fp.lambda1_at(i * h);
        lam2(i) = fp.lambda2_at(i * h);
    }

    Row1Kernels out;
    out.eps1 = fp.eps1;
    out.eps2 = fp.eps2;
    out.a = fp.a;
    out.c1 = c1;
    out.k11 = TriGrid(n);
    out.k12 = TriGrid(n);
    out.kc11 = TriGrid(n);
    out.kc12 = TriGrid(n);

    TriGrid nk11(n), nk12(n), nkc11(n), nkc12(n);
    TriGrid A11g(n), A12g(n);  // source grids (lam_i + c1) * k1i
    Vector a11diag(n), bline(n), B(n);

    // k12 and kc12 vanish identically on sqrt(eps1) y >= sqrt(eps2) x
    auto in_wedge = [&](int i, int j) { return double(j) >= wedge_slope * double(i) - 1e-12; };

    double diff = 0.0;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                A11g(i, j) = (lam1(j) + c1) * out.k11(i, j);
                A12g(i, j) = (lam2(j) + c1) * out.k12(i, j);
            }
        for (int i = 0; i < n; ++i) a11diag(i) = A11g(i, i);

        // Riemann invariants from the current kernels
        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            for (int j = 0; j <= i; ++j) {
                const double y = j * h;
                const double m = 0.5 * (x + y);
                const double foot = interp1(a11diag, 0.0, h, m);
                nkc11(i, j) = -(interp1(lam1, 0.0, h, m) + c1) / (2.0 * se1) +
                              antidiag_integral(A11g.raw(), i, j, h, foot) / se1;
                if (in_wedge(i, j)) {
                    nkc12(i, j) = 0.0;
                } else {
                    const double s3 = (se2 * x + se1 * y) / (se1 + se2);
                    nkc12(i, j) =
                        path_integral(A12g, s3, s3, se1, -se2, (x - y) / (se1 + se2), h);
                }
            }
        }

        // boundary integral B(x) = int_0^x (se1 kc11 + se2 kc12)(z, 0) dz
        for (int i = 0; i < n; ++i) bline(i) = se1 * nkc11(i, 0) + se2 * nkc12(i, 0);
        B = cumtrapz(bline, h);

        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            for (int j = 0; j <= i; ++j) {
                const double y = j * h;
                nk11(i, j) = C11 * B(i - j) + diag45_integral(nkc11.raw(), i, j, h) / se1;
                if (in_wedge(i, j)) {
                    nk12(i, j) = 0.0;
                } else {
                    const double s1 = x - (se1 / se2) * y;
                    nk12(i, j) = C12 * interp1(B, 0.0, h, s1) +
                                 path_integral(nkc12, s1, 0.0, se1, se2, y / se2, h);
                }
            }
        }

        diff = std::max({out.k11.sup_diff(nk11), out.k12.sup_diff(nk12),
                         out.kc11.sup_diff(nkc11), out.kc12.sup_diff(nkc12)});
        out.k11 = nk11;
        out.k12 = nk12;
        out.kc11 = nkc11;
        out.kc12 = nkc12;
        const double scale = std::max({out.k11.sup_norm(), out.k12.sup_norm(),
                                       out.kc11.sup_norm(), out.kc12.sup_norm()});
        if (diff <= opt.tol * (1.0 + scale)) {
            out.stats = {iter + 1, diff};
            return out;
        }
    }
    throw NonConvergenceError("solve_row1 did not converge", diff);
}

Row2Kernels solve_row2(const Row1Kernels& row1, const FoldedParams& fp, double c2,
                       const SolveOptions& opt) {
    require(c2 > 0.0, "solve_row2: c2 must be positive");
    const int n = row1.k11.size();
    require(opt.tri_n == n, "solve_row2: grid mismatch with row1");
    const double h = 1.0 / double(n - 1);
    const double se1 = std::sqrt(fp.eps1), se2 = std::sqrt(fp.eps2);
    const double a = fp.a;

    Row2Kernels out;
    out.c2 = c2;
    out.delta1 = (se1 - se2) / (se1 + se2);
    out.delta2 = (1.0 - a * a) / (1.0 + a * a);
    out.delta3 = se1 / (se1 + se2);
    // y = 0 reflection coefficients (anti-folding conditions in invariant form)
    const double r21_c21 = -out.delta2;
    const double r21_c22 = 2.0 * a * a * a / (1.0 + a * a);
    const double r22_c21 = 2.0 / (a * (1.0 + a * a));
    const double r22_c22 = out.delta2;

    Vector lam1(n), lam2(n);
    for (int i = 0; i < n; ++i) {
        lam1(i) = fp.lambda1_at(i * h);
        lam2(i) = fp.lambda2_at(i * h);
    }
    // k22(y,y) = -int_0^y (lam2 + c2)/(2 eps2)
    Vector cum22 = cumtrapz(Vector((lam2.array() + c2) / (2.0 * fp.eps2)), h);

    TriGrid kh21(n), kh22(n), kc21(n), kc22(n);
    TriGrid nkh21(n), nkh22(n), nkc21(n), nkc22(n);
    out.k21 = TriGrid(n);
    out.k22 = TriGrid(n);
    out.g_trace = Vector::Zero(n);

    TriGrid S21g(n), S22g(n);  // source grids (lam_i + c2) k2i - g k1i
    Vector s22diag(n), kc21b(n), kc22b(n), kh21d(n);

    double diff = 0.0;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        // trace and reconstructed kernels from the current invariants
        for (int i = 0; i < n; ++i)
            out.g_trace(i) = (fp.eps2 - fp.eps1) / (2.0 * se1) * (kc21(i, i) - kh21(i, i));
        for (int j = 0; j < n; ++j) {
            out.k21(j, j) = 0.0;
            out.k22(j, j) = -cum22(j);
            double acc21 = 0.0, acc22 = 0.0;
            for (int i = j + 1; i < n; ++i) {
                acc21 += 0.5 * h * ((kc21(i - 1, j) + kh21(i - 1, j)) + (kc21(i, j) + kh21(i, j)));
                acc22 += 0.5 * h * ((kc22(i - 1, j) + kh22(i - 1, j)) + (kc22(i, j) + kh22(i, j)));
                out.k21(i, j) = acc21 / (2.0 * se2);
                out.k22(i, j) = -cum22(j) + acc22 / (2.0 * se2);
            }
        }

        for (int i = 0; i < n; ++i) {
            const double gi = out.g_trace(i);
            for (int j = 0; j <= i; ++j) {
                S21g(i, j) = (lam1(j) + c2) * out.k21(i, j) - gi * row1.k11(i, j);
                S22g(i, j) = (lam2(j) + c2) * out.k22(i, j) - gi * row1.k12(i, j);
            }
        }
        for (int i = 0; i < n; ++i) {
            s22diag(i) = S22g(i, i);
            kc21b(i) = kc21(i, 0);
            kc22b(i) = kc22(i, 0);
            kh21d(i) = kh21(i, i);
        }

        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            for (int j = 0; j <= i; ++j) {
                const double y = j * h;
                // kh21: foot on y=0 at sigma4, reflection off the previous sweep
                const double s4 = x - (se2 / se1) * y;
                const double bc21 = r21_c21 * interp1(kc21b, 0.0, h, s4) +
                                    r21_c22 * interp1(kc22b, 0.0, h, s4);
                nkh21(i, j) = bc21 + path_integral(S21g, s4, 0.0, se2, se1, y / se1, h);

                // kh22: slope-1 characteristic, exact node samples
                const double bc22 = r22_c21 * kc21b(i - j) + r22_c22 * kc22b(i - j);
                nkh22(i, j) = bc22 + diag45_integral(S22g.raw(), i, j, h) / se2;

                // kc21: foot on the diagonal at sigma5
                const double s5 = (se1 * x + se2 * y) / (se1 + se2);
                nkc21(i, j) = -out.delta1 * interp1(kh21d, 0.0, h, s5) +
                              path_integral(S21g, s5, s5, se2, -se1, (x - y) / (se1 + se2), h);

                // kc22: slope--1 characteristic from the diagonal midpoint
                const double m = 0.5 * (x + y);
                nkc22(i, j) =
                    -(interp1(lam2, 0.0, h, m) + c2) / (2.0 * se2) +
                    antidiag_integral(S22g.raw(), i, j, h, interp1(s22diag, 0.0, h, m)) / se2;
            }
        }

        diff = std::max({kh21.sup_diff(nkh21), kh22.sup_diff(nkh22), kc21.sup_diff(nkc21),
                         kc22.sup_diff(nkc22)});
        kh21 = nkh21;
        kh22 = nkh22;
        kc21 = nkc21;
        kc22 = nkc22;
        const double scale = std::max({kh21.sup_norm(), kh22.sup_norm(), kc21.sup_norm(),
                                       kc22.sup_norm()});
        if (diff <= opt.tol * (1.0 + scale)) {
            // final reconstruction from the converged invariants
            for (int i = 0; i < n; ++i)
                out.g_trace(i) = (fp.eps2 - fp.eps1) / (2.0 * se1) * (kc21(i, i) - kh21(i, i));
            for (int j = 0; j < n; ++j) {
                out.k21(j, j) = 0.0;
                out.k22(j, j) = -cum22(j);
                double acc21 = 0.0, acc22 = 0.0;
                for (int i = j + 1; i < n; ++i) {
                    acc21 += 0.5 * h *
                             ((kc21(i - 1, j) + kh21(i - 1, j)) + (kc21(i, j) + kh21(i, j)));
                    acc22 += 0.5 * h *
                             ((kc22(i - 1, j) + kh22(i - 1, j)) + (kc22(i, j) + kh22(i, j)));
                    out.k21(i, j) = acc21 / (2.0 * se2);
                    out.k22(i, j) = -cum22(j) + acc22 / (2.0 * se2);
                }
            }
            out.kh21 = kh21;
            out.kh22 = kh22;
            out.kc21 = kc21;
            out.kc22 = kc22;
            out.stats = {iter + 1, diff};
            return out;
        }
    }
    throw NonConvergenceError("solve_row2 did not converge", diff);
}

FieldPair apply_volterra(const KernelMatrix& K, const FieldPair& U, const Grid1D& grid) {
    const int n = grid.size();
    require(K.k11 && K.k12 && K.k21 && K.k22, "apply_volterra: incomplete kernel matrix");
    require(K.k11->size() == n, "apply_volterra: kernel/grid mismatch");
    require(U.first.size() == n && U.second.size() == n, "apply_volterra: field/grid mismatch");
    const double h = grid.spacing();

    FieldPair W{Vector(n), Vector(n)};
    for (int i = 0; i < n; ++i) {
        double r1 = 0.0, r2 = 0.0;
        if (i > 0) {
            auto term1 = [&](int j) {
                return (*K.k11)(i, j) * U.first(j) + (*K.k12)(i, j) * U.second(j);
            };
            auto term2 = [&](int j) {
                return (*K.k21)(i, j) * U.first(j) + (*K.k22)(i, j) * U.second(j);
            };
            r1 = 0.5 * (term1(0) + term1(i));
            r2 = 0.5 * (term2(0) + term2(i));
            for (int j = 1; j < i; ++j) {
                r1 += term1(j);
                r2 += term2(j);
            }
            r1 *= h;
            r2 *= h;
        }
        W.first(i) = U.first(i) - r1;
        W.second(i) = U.second(i) - r2;
    }
    return W;
}

FieldPair invert_volterra(const KernelMatrix& K, const FieldPair& W, const Grid1D& grid,
                          double tol) {
    const int n = grid.size();
    require(K.k11 && K.k12 && K.k21 && K.k22, "invert_volterra: incomplete kernel matrix");
    require(K.k11->size() == n, "invert_volterra: kernel/grid mismatch");
    require(W.first.size() == n && W.second.size() == n, "invert_volterra: field/grid mismatch");
    const double h = grid.spacing();

    FieldPair U{Vector(n), Vector(n)};
    U.first(0) = W.first(0);
    U.second(0) = W.second(0);
    for (int i = 1; i < n; ++i) {
        // trapezoid weights: h/2 at j=0 and j=i, h inside
        double r1 = 0.5 * h * ((*K.k11)(i, 0) * U.first(0) + (*K.k12)(i, 0) * U.second(0));
        double r2 = 0.5 * h * ((*K.k21)(i, 0) * U.first(0) + (*K.k22)(i, 0) * U.second(0));
        for (int j = 1; j < i; ++j) {
            r1 += h * ((*K.k11)(i, j) * U.first(j) + (*K.k12)(i, j) * U.second(j));
            r2 += h * ((*K.k21)(i, j) * U.first(j) + (*K.k22)(i, j) * U.second(j));
        }
        // (I - h/2 K(x_i, x_i)) U_i = W_i + accumulated integral
        const double w = 0.5 * h;
        const double a11 = 1.0 - w * (*K.k11)(i, i);
        const double a12 = -w * (*K.k12)(i, i);
        const double a21 = -w * (*K.k21)(i, i);
        const double a22 = 1.0 - w * (*K.k22)(i, i);
        const double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-14)
            throw NonConvergenceError("invert_volterra: singular diagonal block", det);
        const double b1 = W.first(i) + r1;
        const double b2 = W.second(i) + r2;
        U.first(i) = (a22 * b1 - a12 * b2) / det;
        U.second(i) = (-a21 * b1 + a11 * b2) / det;
    }

    FieldPair round = apply_volterra(K, U, grid);
    const double scale = 1.0 + std::max(W.first.cwiseAbs().maxCoeff(),
                                        W.second.cwiseAbs().maxCoeff());
    const double res = std::max((round.first - W.first).cwiseAbs().maxCoeff(),
                                (round.second - W.second).cwiseAbs().maxCoeff());
    if (res > tol * scale)
        throw NonConvergenceError("invert_volterra: round-trip residual too large", res);
    return U;
}

}  // namespace foldbs
