#include "foldbs/plant.hpp"

#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

PlantSpec PlantSpec::make(double eps,
                          const std::function<double(double)>& nu_fn,
                          const std::function<double(double)>& lambda_fn,
                          double y0, double yhat0, int sample_n) {
    PlantSpec s;
    s.eps = eps;
    Grid1D g(-1.0, 1.0, sample_n);
    s.nu = ScalarField(g, nu_fn);
    s.lambda_bar = ScalarField(g, lambda_fn);
    s.y0 = y0;
    s.yhat0 = yhat0;
    s.validate();
    return s;
}

void PlantSpec::validate() const {
    require(eps > 0.0, "PlantSpec: eps must be positive");
    require(y0 > -1.0 && y0 <= 0.0, "PlantSpec: y0 must lie in (-1, 0]");
    require(yhat0 > -1.0 && yhat0 < 1.0, "PlantSpec: yhat0 must lie in (-1, 1)");
}

Vector gauge_transform(const Vector& ubar, const Grid1D& grid, const PlantSpec& spec,
                       GaugeDirection dir) {
    require(spec.eps > 0.0, "gauge_transform: eps must be positive");
    require(ubar.size() == grid.size(), "gauge_transform: field/grid size mismatch");
    require(spec.nu.grid.size() > 0, "gauge_transform: spec carries no advection samples");

    Vector nu_nodes(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        nu_nodes(i) = (spec.nu.callback ? spec.nu.callback(grid.node(i)) : spec.nu(grid.node(i)));
    Vector expo = cumtrapz(nu_nodes, grid.spacing()) / (2.0 * spec.eps);

    Vector out(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double f = std::exp(expo(i));
        out(i) = dir == GaugeDirection::Forward ? ubar(i) * f : ubar(i) / f;
    }
    return out;
}

FoldedPair fold(const Vector& u, const Grid1D& grid, double y0) {
    require(u.size() == grid.size(), "fold: field/grid size mismatch");
    require(y0 > -1.0 && y0 < 1.0, "fold: y0 must lie strictly inside (-1,1)");
    const int k = grid.index_of(y0, 1e-6);
    const int n_left = k;                    // intervals in [-1, y0]
    const int n_right = grid.size() - 1 - k; // intervals in [y0, 1]
    require(n_left >= 2 && n_right >= 2, "fold: need at least 3 nodes on each side of y0");

    const int m = std::max(n_left, n_right) + 1;
    FoldedPair out;
    out.xgrid = Grid1D(0.0, 1.0, m);
    out.u1.resize(m);
    out.u2.resize(m);

    const double y0n = grid.node(k);
    auto interp_grid = [&](double y) {
        double s = (y - grid.lo()) / grid.spacing();
        if (s <= 0) return u(0);
        if (s >= grid.size() - 1) return u(grid.size() - 1);
        int i = static_cast<int>(s);
        double t = s - i;
        return u(i) * (1 - t) + u(i + 1) * t;
    };
    for (int j = 0; j < m; ++j) {
        const double x = out.xgrid.node(j);
        out.u1(j) = interp_grid(y0n - (1.0 + y0n) * x);
        out.u2(j) = interp_grid(y0n + (1.0 - y0n) * x);
    }
    out.u1(0) = u(k);
    out.u2(0) = u(k);
    return out;
}

Vector unfold(const FoldedPair& fp, double y0, const Grid1D& target, double continuity_tol) {
    require(fp.u1.size() == fp.xgrid.size() && fp.u2.size() == fp.xgrid.size(),
            "unfold: folded fields/grid size mismatch");
    const double scale = std::max({1.0, fp.u1.cwiseAbs().maxCoeff(), fp.u2.cwiseAbs().maxCoeff()});
    require(std::abs(fp.u1(0) - fp.u2(0)) <= continuity_tol * scale,
            "unfold: continuity violated at the fold point");

    auto interp_half = [&](const Vector& v, double x) {
        double s = x / fp.xgrid.spacing();
        if (s <= 0) return v(0);
        if (s >= fp.xgrid.size() - 1) return v(fp.xgrid.size() - 1);
        int i = static_cast<int>(s);
        double t = s - i;
        return v(i) * (1 - t) + v(i + 1) * t;
    };

    Vector out(target.size());
    for (int i = 0; i < target.size(); ++i) {
        const double y = target.node(i);
        if (y <= y0)
            out(i) = interp_half(fp.u1, (y0 - y) / (1.0 + y0));
        else
            out(i) = interp_half(fp.u2, (y - y0) / (1.0 - y0));
    }
    return out;
}

FoldedParams folded_params(const PlantSpec& spec, FoldBranch branch, int m) {
    spec.validate();
    const double p = branch == FoldBranch::Control ? spec.y0 : spec.yhat0;
    require(p > -1.0 && p < 1.0, "folded_params: fold point must lie inside (-1,1)");

    FoldedParams fp;
    fp.fold_point = p;
    fp.eps1 = spec.eps / ((1.0 + p) * (1.0 + p));
    fp.eps2 = spec.eps / ((1.0 - p) * (1.0 - p));
    fp.a = (1.0 + p) / (1.0 - p);
    fp.xgrid = Grid1D(0.0, 1.0, m);
    fp.lambda1.resize(m);
    fp.lambda2.resize(m);
    for (int i = 0; i < m; ++i) {
        const double x = fp.xgrid.node(i);
        fp.lambda1(i) = spec.lambda(p - (1.0 + p) * x);
        fp.lambda2(i) = spec.lambda(p + (1.0 - p) * x);
    }
    return fp;
}

}  // namespace foldbs
