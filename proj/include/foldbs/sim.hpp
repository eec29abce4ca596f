#pragma once

#include "foldbs/gains.hpp"
#include "foldbs/kernel_obs.hpp"

#include <array>
#include <vector>

namespace foldbs {

enum class SimMode { Open, StateFeedback, Observer, OutputFeedback };

struct SimConfig {
    PlantSpec spec;
    Grid1D grid;  // over [-1,1]; y0 and yhat0 must be nodes
    double dt = 0.005;
    double t_end = 3.0;
    double c1 = 5, c2 = 5;    // control target rates
    double cc1 = 1, cc2 = 1;  // observer target rates
    Vector initial_u, initial_uhat;
    SimMode mode = SimMode::Open;
    int snapshot_stride = 10;

    void validate() const;
};

struct Trajectory {
    Vector times;                 // one entry per time level (including t=0)
    Vector norm_u, norm_err;      // L2 of u and of u - uhat (0 without observer)
    Vector U1, U2;                // controls computed from the state at that level
    Vector meas_val, meas_flux;   // collocated measurements at yhat0
    std::vector<double> snap_times;
    std::vector<Vector> u_snapshots;
    std::vector<Vector> uhat_snapshots;  // empty without an observer
    bool has_observer = false;
};

/// One Crank-Nicolson step of du/dt = eps u_yy + lambda(y) u with Dirichlet
/// values imposed at the new time level.
Vector step_plant(const Vector& u, double bc_left, double bc_right, double eps,
                  const Vector& lambda_nodes, double h, double dt);

/// Collocated measurements at yhat0 (a grid node): value and centered-difference flux.
std::pair<double, double> measure(const Vector& u, const Grid1D& grid, double yhat0);

/// One step of the two folded observer copies about yhat0, returned as the
/// unfolded estimate on the simulation grid. The folded copies sample the
/// plant grid exactly (yhat0 is a node), the Dirichlet value at x=0 is the
/// new-level measurement, the x=1 values are the applied controls, and the
/// flux injection uses one-sided folded differences of the old-level fields.
Vector step_observer(const Vector& uhat, const Vector& u_old, double meas_val_new,
                     std::pair<double, double> controls,
                     const std::array<ObserverKernel, 2>& obs, const SimConfig& cfg);

/// Fixed-step closed-loop simulation. Gains are required for StateFeedback /
/// OutputFeedback; observer kernels for Observer / OutputFeedback (optional
/// alongside StateFeedback, in which case the estimate is still advanced).
Trajectory run(const SimConfig& cfg, const GainTable* gains,
               const std::array<ObserverKernel, 2>* obs);

}  // namespace foldbs
