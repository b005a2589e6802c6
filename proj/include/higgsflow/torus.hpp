#pragma once

#include "higgsflow/field.hpp"
#include "higgsflow/types.hpp"

namespace higgsflow {

/// Flat Kahler torus C^n / (sum_a L_a Z + i L_a Z), n in {1,2}, with a
/// constant Hermitian metric g_{a bbar} and the associated Kahler form
/// omega = i sum g_{a bbar} dz^a /\ dzbar^b. Also carries the quadrature
/// weight of the periodic rectangle rule, which is spectrally accurate for
/// smooth periodic integrands.
class KahlerTorus {
public:
    KahlerTorus(int n, std::vector<double> lengths, int points_per_axis,
                Mat metric = Mat());

    const Lattice& lattice() const { return lat_; }
    int n() const { return lat_.n; }
    int rank_points() const { return lat_.points_per_axis; }

    /// g_{a bbar} as a matrix: G(a,b) = g_{a bbar}.
    const Mat& metric() const { return g_; }
    /// g^{a bbar}: the contraction dual, satisfying
    /// sum_b g^{a bbar} g_{c bbar} = delta_{ac} (conjugate of G^{-1}).
    const Mat& metric_dual() const { return ginv_; }
    double metric_det() const { return det_; }

    /// Vol X = int omega^n / n! in closed form (constant metric).
    double volume() const { return volume_; }
    /// Per-sample weight realizing int f omega^n/n! = sum_x f(x) * w.
    double sample_weight() const { return volume_ / static_cast<double>(lat_.num_points()); }

    /// The Kahler form as a rank-1 (1,1) field: coefficients i * g_{a bbar}.
    EndoFormField kahler_form() const;
    /// Same without the i factor: coefficients g_{a bbar}. Convenient when a
    /// contraction identity is stated directly on metric coefficients.
    EndoFormField metric_form() const;

    /// Residual of the quadrature-versus-closed-form volume consistency
    /// check (wedge powers of the Kahler form integrated as a top form).
    double volume_quadrature_residual() const;

private:
    Lattice lat_;
    Mat g_, ginv_;
    double det_ = 1.0;
    double volume_ = 0.0;
};

}  // namespace higgsflow
