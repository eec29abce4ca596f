#pragma once

#include "foldbs/common.hpp"

namespace foldbs {

/// Composite trapezoid rule over uniformly spaced samples.
inline double trapz(const Eigen::Ref<const Vector>& f, double h) {
    const auto n = f.size();
    if (n < 2) return 0.0;
    return h * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

/// Cumulative trapezoid: out(i) = integral of f over the first i intervals,
/// out(0) = 0.
inline Vector cumtrapz(const Eigen::Ref<const Vector>& f, double h) {
    Vector out(f.size());
    out(0) = 0.0;
    for (Eigen::Index i = 1; i < f.size(); ++i)
        out(i) = out(i - 1) + 0.5 * h * (f(i - 1) + f(i));
    return out;
}

/// Trapezoid over the tail f(j0..end), stepping h.
inline double trapz_tail(const Eigen::Ref<const Vector>& f, Eigen::Index j0, double h) {
    const auto n = f.size();
    if (j0 >= n - 1) return 0.0;
    double s = 0.5 * (f(j0) + f(n - 1));
    for (Eigen::Index j = j0 + 1; j < n - 1; ++j) s += f(j);
    return h * s;
}

/// Linear interpolation into a uniformly sampled table on [lo, lo+h*(n-1)].
/// Arguments are clamped to the table range.
inline double interp1(const Eigen::Ref<const Vector>& table, double lo, double h, double x) {
    const auto n = table.size();
    double s = (x - lo) / h;
    if (s <= 0.0) return table(0);
    if (s >= double(n - 1)) return table(n - 1);
    const auto i = static_cast<Eigen::Index>(s);
    const double t = s - double(i);
    return table(i) * (1.0 - t) + table(i + 1) * t;
}

}  // namespace foldbs
