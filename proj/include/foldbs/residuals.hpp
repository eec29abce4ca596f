#pragma once

#include "foldbs/kernel_aux.hpp"
#include "foldbs/kernel_obs.hpp"

namespace foldbs {

/// Centered-difference PDE residual statistics over interior nodes.
/// The kernel solutions are only piecewise smooth: their derivatives may
/// jump across known characteristic lines emanating from the domain corners
/// (the trace forcing enters the (q,r) system exactly this way), so the
/// residual is measured on the smooth bulk with fixed-width strips around
/// those lines excluded. Strip geometry depends only on eps1/eps2.
struct ResidualStats {
    double max_abs = 0;
    int count = 0;
};

/// Residual of E Kxx - Kyy E = K Lambda(y) + C K - G[K] K over all four
/// entries, excluding the strip around the characteristic y = sqrt(eps2/eps1) x.
ResidualStats residual_K(const Row1Kernels& row1, const Row2Kernels& row2,
                         const FoldedParams& fp, double c1, double c2,
                         double strip_width = 0.05);

/// Residual of eps2 qxx - eps1 qyy = (c2-c1) q + g(y) p(x-y), away from the
/// y = x interface and the jump characteristic through (1+y0, 1+y0).
ResidualStats residual_q(const QRKernels& qr, const Vector& g, const FoldedParams& fp,
                         double c1, double c2, double strip_width = 0.05);

/// Residual of eps2 rxx - eps1 ryy = (c2-c1) r on the upper triangle, away
/// from the interface and the two jump characteristics of the r system.
ResidualStats residual_r(const QRKernels& qr, const FoldedParams& fp, double c1, double c2,
                         double strip_width = 0.05);

/// Residual of Phi_xx - Phi_yy + ((lambda(x)+c)/eps) Phi = 0.
ResidualStats residual_obs(const ObserverKernel& ok);

}  // namespace foldbs
