#pragma once

#include "higgsflow/types.hpp"

#include <span>
#include <vector>

namespace higgsflow {

/// Increasing multi-indices of length p drawn from {0, .., n-1}. Empty for
/// p > n, a single empty index for p = 0.
const std::vector<std::vector<int>>& multi_indices(int n, int p);

/// Position of a sorted multi-index in multi_indices(n, p), -1 if absent.
int multi_index_position(int n, const std::vector<int>& idx);

/// Merge two disjoint sorted index lists into one sorted list, returning the
/// permutation sign; sign 0 when an index repeats.
int merge_indices(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out);

/// End E-valued (p,q)-form sampled on a torus lattice. Coefficients are
/// stored per increasing multi-index pair (A,B), each holding one complex
/// rank x rank matrix per grid point:
///
///   psi = sum_{A,B} psi_{A Bbar} dz^A /\ dzbar^B.
///
/// Bidegrees up to 2n are representable; components vanish structurally for
/// p > n or q > n (the coefficient list is empty), which is how degree
/// truncation of the exterior algebra is realized.
class EndoFormField {
public:
    EndoFormField() = default;
    EndoFormField(Lattice lat, int p, int q, int rank);

    static EndoFormField constant(const Lattice& lat, int p, int q, const Mat& value);
    static EndoFormField identity(const Lattice& lat, int rank);

    const Lattice& lattice() const { return lat_; }
    int p() const { return p_; }
    int q() const { return q_; }
    int rank() const { return rank_; }
    int num_components() const { return static_cast<int>(comps_.size()); }
    std::int64_t num_points() const { return lat_.num_points(); }

    const std::vector<int>& comp_z_index(int c) const;
    const std::vector<int>& comp_zbar_index(int c) const;
    int component_position(const std::vector<int>& A, const std::vector<int>& B) const;

    std::span<cplx> component(int c) { return comps_[c]; }
    std::span<const cplx> component(int c) const { return comps_[c]; }

    MatMap matrix(int c, std::int64_t point) {
        return MatMap(comps_[c].data() + point * rank_ * rank_, rank_, rank_);
    }
    ConstMatMap matrix(int c, std::int64_t point) const {
        return ConstMatMap(comps_[c].data() + point * rank_ * rank_, rank_, rank_);
    }

    bool same_shape(const EndoFormField& other) const;
    bool is_structurally_zero() const { return comps_.empty(); }

    EndoFormField& operator+=(const EndoFormField& other);
    EndoFormField& operator-=(const EndoFormField& other);
    EndoFormField& operator*=(cplx s);

    friend EndoFormField operator+(EndoFormField a, const EndoFormField& b) { return a += b; }
    friend EndoFormField operator-(EndoFormField a, const EndoFormField& b) { return a -= b; }
    friend EndoFormField operator*(cplx s, EndoFormField f) { return f *= s; }

    /// Largest Frobenius norm of any coefficient matrix over the grid.
    double max_norm() const;

private:
    Lattice lat_;
    int p_ = 0, q_ = 0, rank_ = 1;
    std::vector<std::vector<cplx>> comps_;
};

/// Coordinates of a flat point index, axis by axis (axis 0 fastest).
std::array<int, 4> point_coords(const Lattice& lat, std::int64_t point);
double axis_coordinate(const Lattice& lat, std::int64_t point, int axis);

}  // namespace higgsflow
