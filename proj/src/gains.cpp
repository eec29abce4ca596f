#include "foldbs/gains.hpp"

#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

std::pair<Vector, Vector> assemble_h(const Row1Kernels& row1, const Row2Kernels& row2,
                                     const QRKernels& qr) {
    const int n = row1.k11.size();
    require(row2.k21.size() == n && qr.q.size() == n, "assemble_h: kernel grid mismatch");
    const double h = 1.0 / double(n - 1);

    Vector h1(n), h2(n);
    for (int j = 0; j < n; ++j) {
        // integrand over z in [y_j, 1] at exact nodes
        auto f1 = [&](int iz) {
            return qr.p(n - 1 - iz) * row2.k21(iz, j) + qr.q(n - 1, iz) * row1.k11(iz, j);
        };
        auto f2 = [&](int iz) {
            return qr.p(n - 1 - iz) * row2.k22(iz, j) + qr.q(n - 1, iz) * row1.k12(iz, j);
        };
        double i1 = 0.0, i2 = 0.0;
        if (j < n - 1) {
            i1 = 0.5 * (f1(j) + f1(n - 1));
            i2 = 0.5 * (f2(j) + f2(n - 1));
            for (int iz = j + 1; iz < n - 1; ++iz) {
                i1 += f1(iz);
                i2 += f2(iz);
            }
            i1 *= h;
            i2 *= h;
        }
        h1(j) = row2.k21(n - 1, j) + qr.q(n - 1, j) - i1;
        h2(j) = row2.k22(n - 1, j) + qr.p(n - 1 - j) - i2;
    }
    return {h1, h2};
}

GainTable assemble_feedback(const Row1Kernels& row1, const std::pair<Vector, Vector>& h,
                            double y0, const Grid1D& out_grid) {
    const int nk = row1.k11.size();
    const double hk = 1.0 / double(nk - 1);
    require(h.first.size() == nk && h.second.size() == nk,
            "assemble_feedback: h grid mismatch with kernels");

    GainTable gt;
    gt.grid = out_grid;
    gt.y0 = y0;
    gt.fold_index = out_grid.index_of(y0, 1e-6);
    gt.hgrid = Grid1D(0.0, 1.0, nk);
    gt.h1 = h.first;
    gt.h2 = h.second;

    Vector k11_top = row1.k11.top_values();
    Vector k12_top = row1.k12.top_values();

    const int n = out_grid.size();
    gt.F1.resize(n);
    gt.F2.resize(n);
    const double wl = 1.0 / (1.0 + y0);
    const double wr = 1.0 / (1.0 - y0);
    for (int i = 0; i < n; ++i) {
        const double y = out_grid.node(i);
        if (i <= gt.fold_index) {
            const double x = (y0 - y) * wl;
            gt.F1(i) = wl * interp1(k11_top, 0.0, hk, x);
            gt.F2(i) = wl * interp1(gt.h1, 0.0, hk, x);
        } else {
            const double x = (y - y0) * wr;
            gt.F1(i) = wr * interp1(k12_top, 0.0, hk, x);
            gt.F2(i) = wr * interp1(gt.h2, 0.0, hk, x);
        }
    }
    gt.F1_left = wl * k11_top(0);
    gt.F1_right = wr * k12_top(0);
    gt.F2_left = wl * gt.h1(0);
    gt.F2_right = wr * gt.h2(0);
    gt.F1(gt.fold_index) = gt.F1_left;
    gt.F2(gt.fold_index) = gt.F2_left;
    return gt;
}

namespace {

double split_integral(const Vector& f, const Vector& gain, int k, double right_value, double h) {
    // trapezoid over [-1, y0] with the stored (left) value at k, then over
    // [y0, 1] with the right-sided value
    const int n = int(f.size());
    double left = 0.0;
    if (k > 0) {
        left = 0.5 * (gain(0) * f(0) + gain(k) * f(k));
        for (int i = 1; i < k; ++i) left += gain(i) * f(i);
        left *= h;
    }
    double right = 0.0;
    if (k < n - 1) {
        right = 0.5 * (right_value * f(k) + gain(n - 1) * f(n - 1));
        for (int i = k + 1; i < n - 1; ++i) right += gain(i) * f(i);
        right *= h;
    }
    return left + right;
}

}  // namespace

std::pair<double, double> state_feedback(const Vector& ubar, const GainTable& gt) {
    require(ubar.size() == gt.grid.size(), "state_feedback: field/gain grid mismatch");
    const double h = gt.grid.spacing();
    return {split_integral(ubar, gt.F1, gt.fold_index, gt.F1_right, h),
            split_integral(ubar, gt.F2, gt.fold_index, gt.F2_right, h)};
}

std::pair<double, double> output_feedback(const Vector& uhat_bar, const GainTable& gt) {
    return state_feedback(uhat_bar, gt);
}

}  // namespace foldbs
