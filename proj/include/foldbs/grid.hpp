#pragma once

#include "foldbs/common.hpp"

#include <functional>

namespace foldbs {

/// Uniform 1-D grid with inclusive endpoints.
class Grid1D {
public:
    Grid1D() = default;
    Grid1D(double lo, double hi, int n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int size() const { return n_; }
    double spacing() const { return h_; }
    double node(int i) const { return nodes_(i); }
    const Vector& nodes() const { return nodes_; }

    /// Index of the node equal to x (within tol*h), throws otherwise.
    int index_of(double x, double tol = 1e-9) const;
    /// Index of the node closest to x.
    int nearest_index(double x) const;
    bool contains(double x) const { return x >= lo_ - 1e-12 && x <= hi_ + 1e-12; }

    Vector sample(const std::function<double(double)>& f) const;

    bool same_as(const Grid1D& o, double tol = 1e-12) const {
        return n_ == o.n_ && std::abs(lo_ - o.lo_) < tol && std::abs(hi_ - o.hi_) < tol;
    }

private:
    double lo_ = 0, hi_ = 1, h_ = 0;
    int n_ = 0;
    Vector nodes_;
};

/// Scalar field sampled on a Grid1D, optionally backed by a closed form.
/// Solvers consume the samples; the callback exists for exact resampling.
struct ScalarField {
    Grid1D grid;
    Vector values;
    std::function<double(double)> callback;  // may be empty

    ScalarField() = default;
    ScalarField(Grid1D g, Vector v) : grid(std::move(g)), values(std::move(v)) {}
    ScalarField(const Grid1D& g, const std::function<double(double)>& f)
        : grid(g), values(g.sample(f)), callback(f) {}

    /// Linear interpolation of the samples (clamped to the grid range).
    double operator()(double x) const;
    double at_node(int i) const { return values(i); }

    ScalarField resampled(const Grid1D& g) const;
};

enum class TriOrientation { Lower, Upper };

/// Values on a uniform triangular grid over [0,1]^2.
/// Lower orientation stores (x_i, y_j) with j <= i, upper with i <= j.
/// The backing matrix is dense; entries outside the triangle stay zero.
class TriGrid {
public:
    TriGrid() = default;
    explicit TriGrid(int n, TriOrientation orient = TriOrientation::Lower);

    int size() const { return n_; }
    double spacing() const { return h_; }
    double node(int i) const { return h_ * i; }
    TriOrientation orientation() const { return orient_; }

    double& operator()(int i, int j) { return values_(i, j); }
    double operator()(int i, int j) const { return values_(i, j); }

    Matrix& raw() { return values_; }
    const Matrix& raw() const { return values_; }

    /// Piecewise-linear interpolation at (x, y) inside the triangle.
    /// Cells cut by the diagonal fall back to barycentric interpolation
    /// on their valid half.
    double interp(double x, double y) const;

    /// Max-abs over valid triangle entries.
    double sup_norm() const;
    /// Max-abs difference over valid entries (grids must match).
    double sup_diff(const TriGrid& o) const;

    /// L2 norm over the triangle (trapezoid-weighted).
    double l2_norm() const;

    Vector diagonal_values() const;   // f(x_i, x_i)
    Vector bottom_values() const;     // lower: f(x_i, 0); upper: f(0, y_j)
    Vector top_values() const;        // lower: f(1, y_j); upper: f(x_i, 1)

    void set_zero() { values_.setZero(); }
    bool valid(int i, int j) const {
        return orient_ == TriOrientation::Lower ? j <= i : i <= j;
    }

private:
    int n_ = 0;
    double h_ = 0;
    TriOrientation orient_ = TriOrientation::Lower;
    Matrix values_;
};

}  // namespace foldbs
