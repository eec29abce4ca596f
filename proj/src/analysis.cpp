#include "foldbs/analysis.hpp"

#include "foldbs/quadrature.hpp"

#include <cmath>

namespace foldbs {

double l2_norm(const Vector& f, double h) {
    if (f.size() < 2) return 0.0;
    double acc = 0.5 * (f(0) * f(0) + f(f.size() - 1) * f(f.size() - 1));
    for (Eigen::Index i = 1; i < f.size() - 1; ++i) acc += f(i) * f(i);
    return std::sqrt(acc * h);
}

BoundConstants target_bound_constants(double a, double c1, double c2, double eps2) {
    require(a > 0.0 && a <= 1.0, "target_bound_constants: a must lie in (0, 1]");
    require(c1 > 0.0 && c2 > 0.0, "target_bound_constants: c1, c2 must be positive");
    require(eps2 > 0.0, "target_bound_constants: eps2 must be positive");
    return {std::pow(a, -1.5), std::min(a * a * a * c1, c2) + 0.25 * eps2};
}

DecayFit fit_decay(const Vector& times, const Vector& norms, double t0, double t1) {
    require(times.size() == norms.size(), "fit_decay: times/norms size mismatch");
    require(t1 > t0, "fit_decay: empty window");

    std::vector<double> ts, ln;
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        if (times(i) < t0 || times(i) > t1) continue;
        if (norms(i) < 1e-14) break;  // log floor: truncate the window here
        ts.push_back(times(i));
        ln.push_back(std::log(norms(i)));
    }
    require(ts.size() >= 4, "fit_decay: fewer than 4 usable points in window");

    const auto m = ts.size();
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t i = 0; i < m; ++i) {
        st += ts[i];
        sl += ln[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * ln[i];
    }
    const double denom = double(m) * stt - st * st;
    require(std::abs(denom) > 0.0, "fit_decay: degenerate time samples");
    const double slope = (double(m) * stl - st * sl) / denom;
    const double intercept = (sl - slope * st) / double(m);

    DecayFit fit;
    fit.gamma_hat = -slope;
    fit.pi_hat = std::exp(intercept);
    fit.t_start = t0;
    fit.t_end = t1;
    fit.points = int(m);
    double rss = 0;
    for (size_t i = 0; i < m; ++i) {
        const double d = ln[i] - (intercept + slope * ts[i]);
        rss += d * d;
    }
    fit.residual = std::sqrt(rss / double(m));
    return fit;
}

WaterbedMetrics waterbed_metrics(const Vector& U1, const Vector& U2, const Vector& times) {
    require(U1.size() == times.size() && U2.size() == times.size(),
            "waterbed_metrics: size mismatch");
    require(times.size() >= 1, "waterbed_metrics: empty trajectory");
    WaterbedMetrics w;
    w.peak_U1 = U1.cwiseAbs().maxCoeff();
    w.peak_U2 = U2.cwiseAbs().maxCoeff();
    double a1 = 0, a2 = 0;
    for (Eigen::Index i = 1; i < times.size(); ++i) {
        const double dt = times(i) - times(i - 1);
        a1 += 0.5 * dt * (U1(i - 1) * U1(i - 1) + U1(i) * U1(i));
        a2 += 0.5 * dt * (U2(i - 1) * U2(i - 1) + U2(i) * U2(i));
    }
    w.l2_time_U1 = std::sqrt(a1);
    w.l2_time_U2 = std::sqrt(a2);
    return w;
}

namespace {

// pointwise induced 2-norm of the 2x2 kernel matrix, integrated over T
double matrix_l2_norm(const KernelMatrix& K) {
    const int n = K.k11->size();
    const double h = 1.0 / double(n - 1);
    double acc = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double a = (*K.k11)(i, j), b = (*K.k12)(i, j);
            const double c = (*K.k21)(i, j), d = (*K.k22)(i, j);
            const double fro2 = a * a + b * b + c * c + d * d;
            const double det = a * d - b * c;
            const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
            const double smax2 = 0.5 * (fro2 + std::sqrt(disc));
            double w = 1.0;
            const bool ex = (i == 0 || i == n - 1);
            const bool ey = (j == 0 || j == i);
            if (ex && ey) w = 0.25;
            else if (ex || ey) w = 0.5;
            acc += w * smax2;
        }
    return std::sqrt(acc * h * h);
}

}  // namespace

NormEquivalenceReport verify_norm_equivalence(const KernelMatrix& K, const QRKernels& qr,
                                              const std::vector<FieldPair>& fields,
                                              const Grid1D& grid) {
    NormEquivalenceReport rep;
    rep.K_norm = matrix_l2_norm(K);
    rep.q_norm = qr.q.l2_norm();
    rep.r_norm = qr.r.l2_norm();
    rep.p_norm = l2_norm(qr.p, 1.0 / double(qr.p.size() - 1));

    const double base1 = 1.0 - rep.q_norm - rep.p_norm - rep.r_norm;
    const double base2 = 1.0 - rep.K_norm;
    rep.M1 = base1 * base1;
    rep.M2 = base2 * base2;
    rep.m1_vacuous = base1 <= 0.0;
    rep.m2_vacuous = base2 <= 0.0;

    rep.n_fields = int(fields.size());
    bool first = true;
    const double h = grid.spacing();
    for (const auto& U : fields) {
        FieldPair W = apply_volterra(K, U, grid);
        FieldPair Om = apply_second_transform(qr, W, grid);
        const double nu = std::hypot(l2_norm(U.first, h), l2_norm(U.second, h));
        const double nw = std::hypot(l2_norm(W.first, h), l2_norm(W.second, h));
        const double nom = std::hypot(l2_norm(Om.first, h), l2_norm(Om.second, h));
        if (nu <= 0 || nw <= 0) continue;
        const double r2 = nom / nw;  // second transform ratio
        const double r1 = nw / nu;   // first transform ratio
        if (first) {
            rep.min_ratio_second = rep.max_ratio_second = r2;
            rep.min_ratio_first = rep.max_ratio_first = r1;
            first = false;
        } else {
            rep.min_ratio_second = std::min(rep.min_ratio_second, r2);
            rep.max_ratio_second = std::max(rep.max_ratio_second, r2);
            rep.min_ratio_first = std::min(rep.min_ratio_first, r1);
            rep.max_ratio_first = std::max(rep.max_ratio_first, r1);
        }
        // sandwich as printed: M1^{-1} |W|^2 <= |Omega|^2 and |W|^2 <= M2 |U|^2
        if (!rep.m1_vacuous && nom * nom < nw * nw / rep.M1 * (1.0 - 1e-12))
            ++rep.m1_violations;
        if (!rep.m2_vacuous && nw * nw > rep.M2 * nu * nu * (1.0 + 1e-12))
            ++rep.m2_violations;
    }
    return rep;
}

}  // namespace foldbs
