#pragma once

#include "foldbs/plant.hpp"

#include <utility>

namespace foldbs {

struct SolveOptions {
    int tri_n = 201;
    double tol = 1e-10;  // relative sup-norm stop rule
    int max_iter = 200;
};

struct SolveStats {
    int iterations = 0;
    double final_diff = 0.0;
};

/// Row-1 backstepping kernels (k11, k12) and their Riemann invariants.
/// Self-contained Volterra system with anti-folding conditions at y = 0.
struct Row1Kernels {
    TriGrid k11, k12, kc11, kc12;
    double eps1 = 1, eps2 = 1, a = 1, c1 = 0;
    SolveStats stats;
};

Row1Kernels solve_row1(const FoldedParams& fp, double c1, const SolveOptions& opt);

/// Row-2 kernels (k21, k22), their transformed invariants, and the trace
/// g[k21](x) = ((eps2-eps1)/(2 sqrt(eps1))) (kc21(x,x) - kh21(x,x)).
struct Row2Kernels {
    TriGrid k21, k22;
    TriGrid kh21, kh22, kc21, kc22;
    Vector g_trace;
    double delta1 = 0, delta2 = 0, delta3 = 0;
    double c2 = 0;
    SolveStats stats;
};

Row2Kernels solve_row2(const Row1Kernels& row1, const FoldedParams& fp, double c2,
                       const SolveOptions& opt);

/// Non-owning view of the assembled 2x2 kernel matrix on the lower triangle.
struct KernelMatrix {
    const TriGrid* k11 = nullptr;
    const TriGrid* k12 = nullptr;
    const TriGrid* k21 = nullptr;
    const TriGrid* k22 = nullptr;

    KernelMatrix() = default;
    KernelMatrix(const Row1Kernels& r1, const Row2Kernels& r2)
        : k11(&r1.k11), k12(&r1.k12), k21(&r2.k21), k22(&r2.k22) {}
};

using FieldPair = std::pair<Vector, Vector>;

/// W(x) = U(x) - int_0^x K(x,y) U(y) dy, trapezoid per row.
FieldPair apply_volterra(const KernelMatrix& K, const FieldPair& U, const Grid1D& grid);

/// Solves apply_volterra(K, U) = W for U by forward substitution on the
/// discrete triangular system (node-by-node in increasing x); verifies the
/// round trip against tol.
FieldPair invert_volterra(const KernelMatrix& K, const FieldPair& W, const Grid1D& grid,
                          double tol = 1e-8);

}  // namespace foldbs
