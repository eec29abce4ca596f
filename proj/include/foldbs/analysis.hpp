#pragma once

#include "foldbs/kernel_aux.hpp"

#include <vector>

namespace foldbs {

/// Trapezoid approximation of (int f^2)^{1/2} on a uniform grid.
double l2_norm(const Vector& f, double h);

struct BoundConstants {
    double Pi;
    double gamma;
};

/// Target-system constants: Pi = a^{-3/2}, gamma = min{a^3 c1, c2} + eps2/4.
BoundConstants target_bound_constants(double a, double c1, double c2, double eps2);

struct DecayFit {
    double pi_hat = 0;     // fitted prefactor (value of the fit at t = 0)
    double gamma_hat = 0;  // fitted rate, positive = decay
    double t_start = 0, t_end = 0;
    double residual = 0;   // RMS of log-norm deviations
    int points = 0;
};

/// Least-squares line through log(norm) vs t over [t0, t1]. Points at or
/// below 1e-14 truncate the window; fewer than 4 usable points is an error.
DecayFit fit_decay(const Vector& times, const Vector& norms, double t0, double t1);

struct WaterbedMetrics {
    double l2_time_U1 = 0, l2_time_U2 = 0;
    double peak_U1 = 0, peak_U2 = 0;
};

/// Time-domain L2 (trapezoid in t) and peak absolute value per channel.
WaterbedMetrics waterbed_metrics(const Vector& U1, const Vector& U2, const Vector& times);

struct NormEquivalenceReport {
    double K_norm = 0, q_norm = 0, p_norm = 0, r_norm = 0;
    double M1 = 0, M2 = 0;
    bool m1_vacuous = false, m2_vacuous = false;
    int n_fields = 0;
    int m1_violations = 0, m2_violations = 0;
    double min_ratio_second = 0, max_ratio_second = 0;  // |Omega| / |W|
    double min_ratio_first = 0, max_ratio_first = 0;    // |W| / |U|
};

/// Evaluates M1 = (1 - |q| - |p| - |r|)^2 and M2 = (1 - |K|)^2 exactly as
/// printed, checks the sandwich inequalities on the sample fields, and flags
/// vacuous coefficients. Report-only.
NormEquivalenceReport verify_norm_equivalence(const KernelMatrix& K, const QRKernels& qr,
                                              const std::vector<FieldPair>& fields,
                                              const Grid1D& grid);

}  // namespace foldbs
