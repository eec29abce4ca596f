#pragma once

#include "foldbs/kernel_ctrl.hpp"

namespace foldbs {

/// Observer gain kernel Phi on the lower triangle (one folded subdomain)
/// with the injection gain phi(x) = -eps_i Phi(x, 0).
struct ObserverKernel {
    TriGrid Phi;
    Vector phi;       // on [0,1], tri_n nodes
    double eps_i = 1;
    double c_i = 1;
    Vector lambda_i;  // samples on the same grid
    SolveStats stats;
};

/// Solve the Klein-Gordon boundary-value problem
///   Phi_xx - Phi_yy = -((lambda(x)+c)/eps) Phi,  Phi(1,y) = 0,
///   Phi(x,x) = int_x^1 (lambda(y)+c)/(2 eps) dy
/// by successive approximation on its characteristic integral form.
ObserverKernel solve_observer_kernel(const Vector& lambda_i, double eps_i, double c_i,
                                     const SolveOptions& opt);

/// I1(z)/z evaluated by its even power series (removable singularity at 0,
/// limit 1/2), truncated at relative term 1e-16.
double bessel_i1_over_z(double z);

/// Closed-form observer kernel for constant lambda:
///   Phi(x,y) = ((lambda+c)/eps) (1-x) I1(v)/v,
///   v = sqrt((lambda+c)/eps (2-x-y)(x-y)),
/// the sign fixed so Phi(x,x) >= 0 when lambda + c > 0.
double bessel_phi_closed_form(double x, double y, double lambda_const, double eps_i, double c_i);

}  // namespace foldbs
