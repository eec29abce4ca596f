#include "foldbs/sim.hpp"

#include "foldbs/analysis.hpp"
#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

namespace {

// Thomas algorithm; overwrites the inputs. Throws on a vanishing pivot.
void solve_tridiagonal(Vector& sub, Vector& diag, Vector& sup, Vector& rhs) {
    const int n = int(diag.size());
    for (int i = 1; i < n; ++i) {
        if (std::abs(diag(i - 1)) < 1e-300)
            throw NonConvergenceError("tridiagonal solve: singular pivot", diag(i - 1));
        const double w = sub(i) / diag(i - 1);
        diag(i) -= w * sup(i - 1);
        rhs(i) -= w * rhs(i - 1);
    }
    if (std::abs(diag(n - 1)) < 1e-300)
        throw NonConvergenceError("tridiagonal solve: singular pivot", diag(n - 1));
    rhs(n - 1) /= diag(n - 1);
    for (int i = n - 2; i >= 0; --i) rhs(i) = (rhs(i) - sup(i) * rhs(i + 1)) / diag(i);
}

// Crank-Nicolson step on nodes 0..n-1 with Dirichlet ends (new-level values
// bc_l, bc_r) and an explicit interior source (may be empty).
Vector cn_step(const Vector& u, double bc_l, double bc_r, double eps_over_h2,
               const Vector& lambda_nodes, double dt, const Vector& source) {
    const int n = int(u.size());
    const int m = n - 2;
    const double r = 0.5 * dt * eps_over_h2;
    Vector sub(m), diag(m), sup(m), rhs(m);
    for (int i = 1; i <= m; ++i) {
        diag(i - 1) = 1.0 + 2.0 * r - 0.5 * dt * lambda_nodes(i);
        sub(i - 1) = -r;
        sup(i - 1) = -r;
        rhs(i - 1) = u(i) + r * (u(i - 1) - 2.0 * u(i) + u(i + 1)) +
                     0.5 * dt * lambda_nodes(i) * u(i);
        if (source.size() > 0) rhs(i - 1) += dt * source(i);
    }
    rhs(0) += r * bc_l;
    rhs(m - 1) += r * bc_r;
    solve_tridiagonal(sub, diag, sup, rhs);

    Vector out(n);
    out(0) = bc_l;
    for (int i = 1; i <= m; ++i) out(i) = rhs(i - 1);
    out(n - 1) = bc_r;
    return out;
}

// second-order one-sided derivative at the left end
double onesided_dx(double w0, double w1, double w2, double h) {
    return (-3.0 * w0 + 4.0 * w1 - w2) / (2.0 * h);
}

}  // namespace

void SimConfig::validate() const {
    spec.validate();
    require(dt > 0.0, "SimConfig: dt must be positive");
    require(dt <= 0.01, "SimConfig: dt <= 0.01 enforced for accuracy");
    require(t_end > 0.0, "SimConfig: t_end must be positive");
    require(c1 > 0 && c2 > 0 && cc1 > 0 && cc2 > 0, "SimConfig: target rates must be positive");
    require(initial_u.size() == grid.size(), "SimConfig: initial_u not on the grid");
    grid.index_of(spec.y0, 1e-6);
    grid.index_of(spec.yhat0, 1e-6);
    if (mode == SimMode::Open) {
        const double edge = std::max(std::abs(initial_u(0)), std::abs(initial_u(grid.size() - 1)));
        require(edge <= 1e-9, "SimConfig: open-loop initial field must vanish at y = +-1");
    }
}

Vector step_plant(const Vector& u, double bc_left, double bc_right, double eps,
                  const Vector& lambda_nodes, double h, double dt) {
    require(u.size() == lambda_nodes.size(), "step_plant: field/lambda size mismatch");
    require(u.size() >= 3, "step_plant: need at least 3 nodes");
    return cn_step(u, bc_left, bc_right, eps / (h * h), lambda_nodes, dt, Vector());
}

std::pair<double, double> measure(const Vector& u, const Grid1D& grid, double yhat0) {
    require(u.size() == grid.size(), "measure: field/grid size mismatch");
    const int k = grid.index_of(yhat0, 1e-6);
    require(k > 0 && k < grid.size() - 1, "measure: yhat0 must be an interior node");
    const double h = grid.spacing();
    return {u(k), (u(k + 1) - u(k - 1)) / (2.0 * h)};
}

Vector step_observer(const Vector& uhat, const Vector& u_old, double meas_val_new,
                     std::pair<double, double> controls,
                     const std::array<ObserverKernel, 2>& obs, const SimConfig& cfg) {
    const Grid1D& grid = cfg.grid;
    const int n = grid.size();
    require(uhat.size() == n && u_old.size() == n, "step_observer: field/grid size mismatch");
    const int k = grid.index_of(cfg.spec.yhat0, 1e-6);
    require(k >= 2 && k <= n - 3, "step_observer: yhat0 too close to the boundary");
    const double h = grid.spacing();
    const double eh2 = cfg.spec.eps / (h * h);

    // folded copies sample the plant grid exactly: copy 1 walks left of yhat0,
    // copy 2 walks right
    const int m1 = k + 1, m2 = n - k;
    const double h1 = 1.0 / double(m1 - 1), h2 = 1.0 / double(m2 - 1);

    Vector uh1(m1), uh2(m2), up1(m1), up2(m2), lam1(m1), lam2(m2);
    for (int j = 0; j < m1; ++j) {
        uh1(j) = uhat(k - j);
        up1(j) = u_old(k - j);
        lam1(j) = cfg.spec.lambda(grid.node(k - j));
    }
    for (int j = 0; j < m2; ++j) {
        uh2(j) = uhat(k + j);
        up2(j) = u_old(k + j);
        lam2(j) = cfg.spec.lambda(grid.node(k + j));
    }

    // injection gains interpolated onto the folded subgrids
    const int nk = obs[0].Phi.size();
    const double hk = 1.0 / double(nk - 1);
    Vector phi1(m1), phi2(m2);
    for (int j = 0; j < m1; ++j) phi1(j) = interp1(obs[0].phi, 0.0, hk, j * h1);
    for (int j = 0; j < m2; ++j) phi2(j) = interp1(obs[1].phi, 0.0, hk, j * h2);

    // flux innovation at x = 0, one-sided stencils on both fields
    const double inj1 = onesided_dx(up1(0), up1(1), up1(2), h1) -
                        onesided_dx(uh1(0), uh1(1), uh1(2), h1);
    const double inj2 = onesided_dx(up2(0), up2(1), up2(2), h2) -
                        onesided_dx(uh2(0), uh2(1), uh2(2), h2);
    Vector src1 = phi1 * inj1;
    Vector src2 = phi2 * inj2;

    Vector new1 = cn_step(uh1, meas_val_new, controls.first, eh2, lam1, cfg.dt, src1);
    Vector new2 = cn_step(uh2, meas_val_new, controls.second, eh2, lam2, cfg.dt, src2);

    Vector out(n);
    for (int j = 0; j < m1; ++j) out(k - j) = new1(j);
    for (int j = 0; j < m2; ++j) out(k + j) = new2(j);
    return out;
}

Trajectory run(const SimConfig& cfg, const GainTable* gains,
               const std::array<ObserverKernel, 2>* obs) {
    cfg.validate();
    const bool needs_gains = cfg.mode == SimMode::StateFeedback || cfg.mode == SimMode::OutputFeedback;
    const bool needs_obs = cfg.mode == SimMode::Observer || cfg.mode == SimMode::OutputFeedback;
    require(!needs_gains || gains != nullptr, "run: mode requires a gain table");
    require(!needs_obs || obs != nullptr, "run: mode requires observer kernels");
    if (gains) require(gains->grid.same_as(cfg.grid), "run: gain table on a different grid");
    // the control loop assumes the gauge transform already removed advection
    double nu_sup = 0.0;
    if (cfg.spec.nu.values.size() > 0) nu_sup = cfg.spec.nu.values.cwiseAbs().maxCoeff();
    require(nu_sup <= 1e-12, "run: simulate the gauge-transformed plant (nu = 0)");

    const Grid1D& grid = cfg.grid;
    const int n = grid.size();
    const double h = grid.spacing();
    const bool use_obs = obs != nullptr;

    Vector lambda_nodes(n);
    for (int i = 0; i < n; ++i) lambda_nodes(i) = cfg.spec.lambda(grid.node(i));

    const int steps = std::max(1, int(std::llround(cfg.t_end / cfg.dt)));
    Trajectory tr;
    tr.has_observer = use_obs;
    tr.times.resize(steps + 1);
    tr.norm_u.resize(steps + 1);
    tr.norm_err.resize(steps + 1);
    tr.U1.resize(steps + 1);
    tr.U2.resize(steps + 1);
    tr.meas_val.resize(steps + 1);
    tr.meas_flux.resize(steps + 1);

    Vector u = cfg.initial_u;
    Vector uhat;
    if (use_obs) {
        uhat = cfg.initial_uhat.size() == n ? cfg.initial_uhat : Vector(Vector::Zero(n));
        uhat(grid.index_of(cfg.spec.yhat0, 1e-6)) = u(grid.index_of(cfg.spec.yhat0, 1e-6));
    }

    auto controls_of = [&](const Vector& u_now, const Vector& uhat_now) -> std::pair<double, double> {
        switch (cfg.mode) {
            case SimMode::StateFeedback:
                return state_feedback(u_now, *gains);
            case SimMode::OutputFeedback:
                return output_feedback(uhat_now, *gains);
            default:
                return {0.0, 0.0};
        }
    };

    for (int s = 0; s <= steps; ++s) {
        const double t = s * cfg.dt;
        auto ctl = controls_of(u, uhat);
        auto ms = measure(u, grid, cfg.spec.yhat0);
        tr.times(s) = t;
        tr.norm_u(s) = l2_norm(u, h);
        tr.norm_err(s) = use_obs ? l2_norm(Vector(u - uhat), h) : 0.0;
        tr.U1(s) = ctl.first;
        tr.U2(s) = ctl.second;
        tr.meas_val(s) = ms.first;
        tr.meas_flux(s) = ms.second;
        if (s % cfg.snapshot_stride == 0 || s == steps) {
            tr.snap_times.push_back(t);
            tr.u_snapshots.push_back(u);
            if (use_obs) tr.uhat_snapshots.push_back(uhat);
        }
        if (s == steps) break;

        Vector u_new = step_plant(u, ctl.first, ctl.second, cfg.spec.eps, lambda_nodes, h, cfg.dt);
        if (use_obs) {
            const double meas_new = u_new(grid.index_of(cfg.spec.yhat0, 1e-6));
            uhat = step_observer(uhat, u, meas_new, ctl, *obs, cfg);
        }
        u = u_new;
    }
    return tr;
}

}  // namespace foldbs
