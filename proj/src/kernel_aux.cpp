#include "foldbs/kernel_aux.hpp"

#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

namespace {

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

}  // namespace

QRKernels solve_qr(const Vector& g, const FoldedParams& fp, double c1, double c2,
                   const SolveOptions& opt) {
    require(c1 > 0.0 && c2 > 0.0, "solve_qr: c1, c2 must be positive");
    const int n = opt.tri_n;
    require(n >= 5, "solve_qr: tri_n too small");
    require(g.size() == n, "solve_qr: g sampled on a different grid");
    const double h = 1.0 / double(n - 1);
    const double se1 = std::sqrt(fp.eps1), se2 = std::sqrt(fp.eps2);
    const double a = fp.a;

    QRKernels out;
    out.a = a;
    out.q = TriGrid(n, TriOrientation::Lower);
    out.r = TriGrid(n, TriOrientation::Upper);
    out.p = Vector::Zero(n);
    out.qh = TriGrid(n, TriOrientation::Lower);
    out.qc = TriGrid(n, TriOrientation::Lower);
    out.rh = TriGrid(n, TriOrientation::Upper);
    out.rc = TriGrid(n, TriOrientation::Upper);

    const bool degenerate = (se1 - se2) <= 1e-13 * se1;  // symmetric fold
    const double g_sup = g.cwiseAbs().maxCoeff();
    if (degenerate || g_sup == 0.0) {
        // g carries the factor (eps2 - eps1); with no forcing the fixed point
        // is identically zero.
        out.stats = {1, 0.0};
        return out;
    }

    const double cq2 = (c2 - c1) / (2.0 * se2);
    const double cq1 = (c2 - c1) / (2.0 * se1);
    const double cr = (c2 - c1) / (2.0 * se2);
    const double wedge = se2 / se1;  // dividing line x = sqrt(eps2/eps1) y

    TriGrid qh = out.qh, qc = out.qc, rh = out.rh, rc = out.rc;
    TriGrid nqh(n, TriOrientation::Lower), nqc(n, TriOrientation::Lower);
    TriGrid nrh(n, TriOrientation::Upper), nrc(n, TriOrientation::Upper);
    TriGrid Iq(n, TriOrientation::Lower), Ir(n, TriOrientation::Upper);
    Vector Q0(n), rc_diag(n), rh_top(n), qh_diag(n);

    double diff = 0.0;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        // I_q(x,y) = cq2 int_0^x qc(z,0) + cq1 int_0^y (qc-qh)(x,z)
        //          + (g(y)/(2 a se2)) int_0^{x-y} qc(z,0)
        Q0 = cumtrapz(qc.bottom_values(), h);
        for (int i = 0; i < n; ++i) {
            double col = 0.0;
            Iq(i, 0) = cq2 * Q0(i) + g(0) / (2.0 * a * se2) * Q0(i);
            for (int j = 1; j <= i; ++j) {
                col += 0.5 * h * ((qc(i, j - 1) - qh(i, j - 1)) + (qc(i, j) - qh(i, j)));
                Iq(i, j) = cq2 * Q0(i) + cq1 * col + g(j) / (2.0 * a * se2) * Q0(i - j);
            }
        }
        // I_r(x,y) = cr int_0^x (rh + rc)(z,y)
        for (int j = 0; j < n; ++j) {
            double row = 0.0;
            Ir(0, j) = 0.0;
            for (int i = 1; i <= j; ++i) {
                row += 0.5 * h * ((rh(i - 1, j) + rc(i - 1, j)) + (rh(i, j) + rc(i, j)));
                Ir(i, j) = cr * row;
            }
        }
        for (int i = 0; i < n; ++i) rc_diag(i) = rc(i, i);

        // qh: foot on y=0 (data 0); qc: foot on the diagonal (transmission from rc)
        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            for (int j = 0; j <= i; ++j) {
                const double y = j * h;
                const double s6 = x - wedge * y;
                nqh(i, j) = path_integral(Iq, s6, 0.0, se2, se1, y / se1, h);
                const double s7 = (se1 * x + se2 * y) / (se1 + se2);
                const double data = interp1(rc_diag, 0.0, h, s7) -
                                    interp1(g, 0.0, h, s7) / (se1 + se2);
                nqc(i, j) = data +
                            path_integral(Iq, s7, s7, se2, -se1, (x - y) / (se1 + se2), h);
            }
        }
        for (int i = 0; i < n; ++i) qh_diag(i) = nqh(i, i);

        // rh: diagonal transmission from qh on x >= wedge*y, zero data off x=0 below
        for (int j = 0; j < n; ++j) {
            const double y = j * h;
            for (int i = 0; i <= j; ++i) {
                const double x = i * h;
                if (x >= wedge * y - 1e-12) {
                    const double s8 = (se1 * x - se2 * y) / (se1 - se2);
                    const double data = interp1(qh_diag, 0.0, h, s8) -
                                        interp1(g, 0.0, h, s8) / (se1 - se2);
                    nrh(i, j) = data +
                                path_integral(Ir, s8, s8, se2, se1, (y - x) / (se1 - se2), h);
                } else {
                    nrh(i, j) = path_integral(Ir, 0.0, y - x / wedge, se2, se1, x / se2, h);
                }
            }
        }
        for (int i = 0; i < n; ++i) rh_top(i) = nrh(i, n - 1);

        // rc: reflection off y=1 (rc = -rh there), zero data off x=0
        for (int j = 0; j < n; ++j) {
            const double y = j * h;
            for (int i = 0; i <= j; ++i) {
                const double x = i * h;
                const double s9 = x - wedge * (1.0 - y);
                if (s9 >= 0.0) {
                    nrc(i, j) = -interp1(rh_top, 0.0, h, s9) +
                                path_integral(Ir, s9, 1.0, se2, -se1, (1.0 - y) / se1, h);
                } else {
                    nrc(i, j) = path_integral(Ir, 0.0, y + x / wedge, se2, -se1, x / se2, h);
                }
            }
        }

        diff = std::max({qh.sup_diff(nqh), qc.sup_diff(nqc), rh.sup_diff(nrh),
                         rc.sup_diff(nrc)});
        qh = nqh;
        qc = nqc;
        rh = nrh;
        rc = nrc;
        const double scale = std::max({qh.sup_norm(), qc.sup_norm(), rh.sup_norm(),
                                       rc.sup_norm()});
        if (diff <= opt.tol * (1.0 + scale)) break;
    }
    if (iter >= opt.max_iter)
        throw NonConvergenceError("solve_qr did not converge", diff);

    out.qh = qh;
    out.qc = qc;
    out.rh = rh;
    out.rc = rc;

    // q(x,y) = (1/(2 se2)) int_0^x qc(z,0) + (1/(2 se1)) int_0^y (qc - qh)(x,z);
    // p(x) = q(x,0)/a; r(x,y) = (1/(2 se2)) int_0^x (rh + rc)(z,y).
    Q0 = cumtrapz(qc.bottom_values(), h);
    for (int i = 0; i < n; ++i) {
        out.p(i) = Q0(i) / (2.0 * a * se2);
        double col = 0.0;
        out.q(i, 0) = Q0(i) / (2.0 * se2);
        for (int j = 1; j <= i; ++j) {
            col += 0.5 * h * ((qc(i, j - 1) - qh(i, j - 1)) + (qc(i, j) - qh(i, j)));
            out.q(i, j) = Q0(i) / (2.0 * se2) + col / (2.0 * se1);
        }
    }
    for (int j = 0; j < n; ++j) {
        double row = 0.0;
        out.r(0, j) = 0.0;
        for (int i = 1; i <= j; ++i) {
            row += 0.5 * h * ((rh(i - 1, j) + rc(i - 1, j)) + (rh(i, j) + rc(i, j)));
            out.r(i, j) = row / (2.0 * se2);
        }
    }
    out.stats = {iter + 1, diff};
    return out;
}

FieldPair apply_second_transform(const QRKernels& k, const FieldPair& W, const Grid1D& grid) {
    const int n = grid.size();
    require(k.q.size() == n, "apply_second_transform: kernel/grid mismatch");
    require(W.first.size() == n && W.second.size() == n,
            "apply_second_transform: field/grid mismatch");
    const double h = grid.spacing();

    FieldPair Om{W.first, Vector(n)};
    for (int i = 0; i < n; ++i) {
        double volterra = 0.0;
        if (i > 0) {
            auto f = [&](int j) {
                return k.q(i, j) * W.first(j) + k.p(i - j) * W.second(j);
            };
            volterra = 0.5 * (f(0) + f(i));
            for (int j = 1; j < i; ++j) volterra += f(j);
            volterra *= h;
        }
        double fredholm = 0.0;
        if (i < n - 1) {
            auto f = [&](int j) { return k.r(i, j) * W.first(j); };
            fredholm = 0.5 * (f(i) + f(n - 1));
            for (int j = i + 1; j < n - 1; ++j) fredholm += f(j);
            fredholm *= h;
        }
        Om.second(i) = W.second(i) - volterra - fredholm;
    }
    return Om;
}

FieldPair invert_second_transform(const QRKernels& k, const FieldPair& Omega, const Grid1D& grid,
                                  double tol, int max_iter) {
    const int n = grid.size();
    require(k.q.size() == n, "invert_second_transform: kernel/grid mismatch");
    require(Omega.first.size() == n && Omega.second.size() == n,
            "invert_second_transform: field/grid mismatch");

    // w1 = omega1 exactly; only w2 needs the fixed point
    FieldPair W{Omega.first, Omega.second};
    const double scale = 1.0 + std::max(Omega.first.cwiseAbs().maxCoeff(),
                                        Omega.second.cwiseAbs().maxCoeff());
    double res = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        FieldPair mapped = apply_second_transform(k, W, grid);
        Vector w2_next = W.second + (Omega.second - mapped.second);
        res = (w2_next - W.second).cwiseAbs().maxCoeff();
        W.second = w2_next;
        if (res <= tol * scale) return W;
    }
    throw NonConvergenceError("invert_second_transform did not converge", res);
}

}  // namespace foldbs
