#include "foldbs/grid.hpp"

#include <cmath>

namespace foldbs {

Grid1D::Grid1D(double lo, double hi, int n) : lo_(lo), hi_(hi), n_(n) {
    require(n >= 3, "Grid1D: need at least 3 nodes");
    require(hi > lo, "Grid1D: hi must exceed lo");
    h_ = (hi - lo) / double(n - 1);
    nodes_.resize(n);
    for (int i = 0; i < n; ++i) nodes_(i) = lo + h_ * i;
    nodes_(n - 1) = hi;  // exact endpoint
}

int Grid1D::index_of(double x, double tol) const {
    int i = nearest_index(x);
    require(std::abs(nodes_(i) - x) <= tol * std::max(1.0, std::abs(h_)) + tol,
            "Grid1D: value is not a grid node");
    return i;
}

int Grid1D::nearest_index(double x) const {
    int i = static_cast<int>(std::lround((x - lo_) / h_));
    if (i < 0) i = 0;
    if (i >= n_) i = n_ - 1;
    return i;
}

Vector Grid1D::sample(const std::function<double(double)>& f) const {
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = f(nodes_(i));
    return v;
}

double ScalarField::operator()(double x) const {
    const int n = grid.size();
    double s = (x - grid.lo()) / grid.spacing();
    if (s <= 0.0) return values(0);
    if (s >= double(n - 1)) return values(n - 1);
    const int i = static_cast<int>(s);
    const double t = s - double(i);
    return values(i) * (1.0 - t) + values(i + 1) * t;
}

ScalarField ScalarField::resampled(const Grid1D& g) const {
    ScalarField out;
    out.grid = g;
    out.callback = callback;
    if (callback) {
        out.values = g.sample(callback);
    } else {
        out.values.resize(g.size());
        for (int i = 0; i < g.size(); ++i) out.values(i) = (*this)(g.node(i));
    }
    return out;
}

TriGrid::TriGrid(int n, TriOrientation orient) : n_(n), orient_(orient) {
    require(n >= 3, "TriGrid: need at least 3 nodes per side");
    h_ = 1.0 / double(n - 1);
    values_ = Matrix::Zero(n, n);
}

double TriGrid::interp(double x, double y) const {
    // clamp tiny excursions from characteristic arithmetic
    auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
    x = clamp01(x);
    y = clamp01(y);
    int i = static_cast<int>(x / h_);
    int j = static_cast<int>(y / h_);
    if (i > n_ - 2) i = n_ - 2;
    if (j > n_ - 2) j = n_ - 2;
    double s = x / h_ - i;
    double t = y / h_ - j;

    if (orient_ == TriOrientation::Lower) {
        if (j < i) {
            // full cell inside the triangle: bilinear
            return values_(i, j) * (1 - s) * (1 - t) + values_(i + 1, j) * s * (1 - t) +
                   values_(i, j + 1) * (1 - s) * t + values_(i + 1, j + 1) * s * t;
        }
        // diagonal cell: valid half has vertices (i,j), (i+1,j), (i+1,j+1)
        if (t > s) t = s;
        return values_(i, j) * (1 - s) + values_(i + 1, j) * (s - t) + values_(i + 1, j + 1) * t;
    }
    if (i < j) {
        return values_(i, j) * (1 - s) * (1 - t) + values_(i + 1, j) * s * (1 - t) +
               values_(i, j + 1) * (1 - s) * t + values_(i + 1, j + 1) * s * t;
    }
    // diagonal cell of the upper triangle: vertices (i,j), (i,j+1), (i+1,j+1)
    if (s > t) s = t;
    return values_(i, j) * (1 - t) + values_(i, j + 1) * (t - s) + values_(i + 1, j + 1) * s;
}

double TriGrid::sup_norm() const {
    double m = 0;
    for (int i = 0; i < n_; ++i) {
        const int jlo = orient_ == TriOrientation::Lower ? 0 : i;
        const int jhi = orient_ == TriOrientation::Lower ? i : n_ - 1;
        for (int j = jlo; j <= jhi; ++j) m = std::max(m, std::abs(values_(i, j)));
    }
    return m;
}

double TriGrid::sup_diff(const TriGrid& o) const {
    double m = 0;
    for (int i = 0; i < n_; ++i) {
        const int jlo = orient_ == TriOrientation::Lower ? 0 : i;
        const int jhi = orient_ == TriOrientation::Lower ? i : n_ - 1;
        for (int j = jlo; j <= jhi; ++j) m = std::max(m, std::abs(values_(i, j) - o.values_(i, j)));
    }
    return m;
}

double TriGrid::l2_norm() const {
    // trapezoid weights: half on triangle edges, quarter at corners
    double acc = 0;
    for (int i = 0; i < n_; ++i) {
        const int jlo = orient_ == TriOrientation::Lower ? 0 : i;
        const int jhi = orient_ == TriOrientation::Lower ? i : n_ - 1;
        for (int j = jlo; j <= jhi; ++j) {
            double w = 1.0;
            const bool edge_x = (i == 0 || i == n_ - 1);
            const bool edge_y = (j == jlo || j == jhi);
            if (edge_x && edge_y) w = 0.25;
            else if (edge_x || edge_y) w = 0.5;
            acc += w * values_(i, j) * values_(i, j);
        }
    }
    return std::sqrt(acc * h_ * h_);
}

Vector TriGrid::diagonal_values() const {
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = values_(i, i);
    return v;
}

Vector TriGrid::bottom_values() const {
    Vector v(n_);
    for (int i = 0; i < n_; ++i)
        v(i) = orient_ == TriOrientation::Lower ? values_(i, 0) : values_(0, i);
    return v;
}

Vector TriGrid::top_values() const {
    Vector v(n_);
    for (int i = 0; i < n_; ++i)
        v(i) = orient_ == TriOrientation::Lower ? values_(n_ - 1, i) : values_(i, n_ - 1);
    return v;
}

}  // namespace foldbs
