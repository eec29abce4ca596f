#pragma once

#include "foldbs/kernel_aux.hpp"

namespace foldbs {

/// Unfolded feedback gains on (-1,1). The gains are piecewise with the
/// breakpoint at the fold node; both one-sided values there are stored
/// (F1/F2 vectors hold the left value at fold_index).
struct GainTable {
    Grid1D grid;
    Vector F1, F2;
    int fold_index = -1;
    double y0 = 0;
    double F1_left = 0, F1_right = 0;
    double F2_left = 0, F2_right = 0;
    Vector h1, h2;  // auxiliary gains on [0,1]
    Grid1D hgrid;
};

/// h1(y) = k21(1,y) + q(1,y) - int_y^1 [p(1-z) k21(z,y) + q(1,z) k11(z,y)] dz,
/// h2(y) = k22(1,y) + p(1-y) - int_y^1 [p(1-z) k22(z,y) + q(1,z) k12(z,y)] dz.
std::pair<Vector, Vector> assemble_h(const Row1Kernels& row1, const Row2Kernels& row2,
                                     const QRKernels& qr);

/// Populate F1, F2 on out_grid from the x = 1 kernel slices with the
/// argument remapping (y0-y)/(1+y0) (left) and (y-y0)/(1-y0) (right).
GainTable assemble_feedback(const Row1Kernels& row1, const std::pair<Vector, Vector>& h,
                            double y0, const Grid1D& out_grid);

/// Ubar_j = int_{-1}^{1} F_j(y) ubar(y) dy, integrated separately on each
/// side of the fold node with its one-sided gain value.
std::pair<double, double> state_feedback(const Vector& ubar, const GainTable& gt);

/// Same integral applied to the observer estimate.
std::pair<double, double> output_feedback(const Vector& uhat_bar, const GainTable& gt);

}  // namespace foldbs
