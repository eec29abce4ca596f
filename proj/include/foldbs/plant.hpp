#pragma once

#include "foldbs/grid.hpp"

namespace foldbs {

/// Reaction-diffusion plant on (-1,1): diffusion eps, advection nu(y),
/// reaction lambda_bar(y), control fold point y0 and measurement point yhat0.
struct PlantSpec {
    double eps = 1.0;
    ScalarField nu;          // advection, removed by the gauge transform
    ScalarField lambda_bar;  // reaction in the original coordinates
    double y0 = -0.05;       // control folding point, in (-1, 0]
    double yhat0 = 0.05;     // measurement point, in (-1, 1)

    static PlantSpec make(double eps,
                          const std::function<double(double)>& nu_fn,
                          const std::function<double(double)>& lambda_fn,
                          double y0, double yhat0, int sample_n = 401);

    void validate() const;

    /// Reaction coefficient after the gauge transform. With nu == 0 this is
    /// lambda_bar itself; the general expression is not needed by the solvers
    /// (the kernel synthesis assumes the gauge-transformed plant).
    double lambda(double y) const { return lambda_bar.callback ? lambda_bar.callback(y) : lambda_bar(y); }
};

/// Diffusion/reaction data of the folded 2x2 system about a fold point.
struct FoldedParams {
    double eps1 = 1, eps2 = 1;  // eps/(1+p)^2, eps/(1-p)^2
    double a = 1;               // (1+p)/(1-p)
    double fold_point = 0;
    Grid1D xgrid;               // [0,1] sampling grid for lambda1/lambda2
    Vector lambda1, lambda2;    // lambda(p -(1+p)x), lambda(p + (1-p)x)

    double lambda1_at(double x) const { return interp1(lambda1, 0.0, xgrid.spacing(), x); }
    double lambda2_at(double x) const { return interp1(lambda2, 0.0, xgrid.spacing(), x); }
};

enum class GaugeDirection { Forward, Inverse };
enum class FoldBranch { Control, Observer };

/// Gauge transform u = exp(int_{-1}^y nu/(2 eps)) * ubar (forward) or its
/// inverse; the exponent integral is a cumulative trapezoid on the grid.
Vector gauge_transform(const Vector& ubar, const Grid1D& grid, const PlantSpec& spec,
                       GaugeDirection dir);

struct FoldedPair {
    Grid1D xgrid;  // common [0,1] grid for both halves
    Vector u1, u2;
};

/// Fold a field about y0 (a node of `grid`): u1(x) = u(y0-(1+y0)x),
/// u2(x) = u(y0+(1-y0)x), resampled onto a shared uniform [0,1] grid.
FoldedPair fold(const Vector& u, const Grid1D& grid, double y0);

/// Inverse of fold onto `target`; requires u1(0) == u2(0) within tol.
Vector unfold(const FoldedPair& fp, double y0, const Grid1D& target, double continuity_tol = 1e-9);

/// Folded parameter matrices E, Lambda(x), a about y0 (Control) or yhat0
/// (Observer), with lambda sampled on m nodes.
FoldedParams folded_params(const PlantSpec& spec, FoldBranch branch, int m);

}  // namespace foldbs
