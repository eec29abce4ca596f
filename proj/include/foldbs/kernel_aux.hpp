#pragma once

#include "foldbs/kernel_ctrl.hpp"

namespace foldbs {

/// Kernels of the second backstepping transformation, driven solely by the
/// trace g[k21]. q lives on the lower triangle, r on the upper triangle,
/// p(x) = q(x,0)/a. qh/qc and rh/rc are the Riemann invariants.
struct QRKernels {
    TriGrid q;        // lower
    TriGrid r;        // upper
    Vector p;         // on [0,1]
    TriGrid qh, qc;   // lower
    TriGrid rh, rc;   // upper
    double a = 1;
    SolveStats stats;
};

/// Solve the (q, r) Riemann-invariant system with transmission conditions at
/// y = x and the reflection at y = 1, forced by g (sampled on the same
/// [0,1] grid of tri_n nodes).
QRKernels solve_qr(const Vector& g, const FoldedParams& fp, double c1, double c2,
                   const SolveOptions& opt);

/// omega1 = w1;
/// omega2(x) = w2(x) - int_0^x [q(x,y) w1 + p(x-y) w2] dy - int_x^1 r(x,y) w1 dy.
FieldPair apply_second_transform(const QRKernels& k, const FieldPair& W, const Grid1D& grid);

/// Inverse of apply_second_transform by fixed-point iteration on the full map.
FieldPair invert_second_transform(const QRKernels& k, const FieldPair& Omega, const Grid1D& grid,
                                  double tol = 1e-10, int max_iter = 200);

}  // namespace foldbs
