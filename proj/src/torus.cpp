#include "higgsflow/torus.hpp"

#include "higgsflow/calculus.hpp"

#include <cmath>

namespace higgsflow {

KahlerTorus::KahlerTorus(int n, std::vector<double> lengths, int points_per_axis, Mat metric) {
    if (n < 1 || n > 2) throw validation_error("KahlerTorus: complex dimension must be 1 or 2");
    if (points_per_axis < 4 || points_per_axis % 2 != 0)
        throw validation_error("KahlerTorus: grid_points must be even and >= 4");
    if (static_cast<int>(lengths.size()) != n)
        throw validation_error("KahlerTorus: need one side length per complex dimension");
    for (double L : lengths)
        if (!(L > 0.0)) throw validation_error("KahlerTorus: side lengths must be positive");

    lat_.n = n;
    lat_.points_per_axis = points_per_axis;
    lat_.lengths = {lengths[0], n == 2 ? lengths[1] : lengths[0]};

    if (metric.size() == 0) metric = Mat::Identity(n, n);
    if (metric.rows() != n || metric.cols() != n)
        throw validation_error("KahlerTorus: metric must be n x n");
    if ((metric - metric.adjoint()).norm() > 1e-12 * (1.0 + metric.norm()))
        throw validation_error("KahlerTorus: metric must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(metric);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("KahlerTorus: metric must be positive definite");

    g_ = metric;
    ginv_ = g_.inverse().conjugate();
    det_ = g_.determinant().real();

    // omega^n/n! = 2^n det(g) prod_a dx^a dy^a on a flat torus.
    double cell = 1.0;
    for (int a = 0; a < n; ++a) cell *= lengths[static_cast<size_t>(a)] * lengths[static_cast<size_t>(a)];
    volume_ = std::pow(2.0, n) * det_ * cell;
}

EndoFormField KahlerTorus::kahler_form() const {
    EndoFormField w = metric_form();
    return cplx(0.0, 1.0) * w;
}

EndoFormField KahlerTorus::metric_form() const {
    EndoFormField w(lat_, 1, 1, 1);
    for (int c = 0; c < w.num_components(); ++c) {
        const int a = w.comp_z_index(c)[0];
        const int b = w.comp_zbar_index(c)[0];
        const cplx v = g_(a, b);
        auto buf = w.component(c);
        for (auto& x : buf) x = v;
    }
    return w;
}

double KahlerTorus::volume_quadrature_residual() const {
    EndoFormField wn = kahler_form();
    for (int k = 1; k < n(); ++k) wn = wedge(wn, kahler_form());
    double nfact = 1.0;
    for (int k = 2; k <= n(); ++k) nfact *= k;
    const cplx quad = integrate_top(wn, *this) / nfact;
    return std::abs(quad - volume_) / volume_;
}

}  // namespace higgsflow
