#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace higgsflow {

using cplx = std::complex<double>;
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<Mat>;
using ConstMatMap = Eigen::Map<const Mat>;

inline constexpr double pi = 3.14159265358979323846;

/// Thrown when a scenario or field violates one of its declared invariants.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Periodic sampling lattice of a flat torus: n complex dimensions, each
/// contributing two real axes (x^a, y^a) of period lengths[a], sampled at
/// points_per_axis equispaced nodes per real axis. Axis 2a is x^a, axis
/// 2a+1 is y^a; axis 0 varies fastest in the flat point index.
struct Lattice {
    int n = 1;
    int points_per_axis = 4;
    std::array<double, 2> lengths{1.0, 1.0};

    int axes() const { return 2 * n; }

    std::int64_t num_points() const {
        std::int64_t p = 1;
        for (int a = 0; a < axes(); ++a) p *= points_per_axis;
        return p;
    }

    double axis_length(int axis) const { return lengths[static_cast<size_t>(axis / 2)]; }
    double spacing(int axis) const { return axis_length(axis) / points_per_axis; }

    bool operator==(const Lattice&) const = default;
};

/// How spatial derivatives are evaluated. Fourier differentiation is exact
/// on band-limited fields; the finite-difference stencil is a fallback for
/// cross-checking discretization sensitivity.
enum class DerivativeMode { spectral, fd4 };

/// How grid reductions (integrals, inner products) accumulate terms.
enum class SummationMode { compensated, plain };

DerivativeMode derivative_mode();
void set_derivative_mode(DerivativeMode m);

SummationMode summation_mode();
void set_summation_mode(SummationMode m);

/// Deterministic accumulator: fixed traversal order, optional Kahan
/// compensation, so reported numbers are reproducible bit-for-bit.
class Accumulator {
public:
    Accumulator() : compensate_(summation_mode() == SummationMode::compensated) {}

    void add(cplx x) {
        if (compensate_) {
            const cplx y = x - carry_;
            const cplx t = sum_ + y;
            carry_ = (t - sum_) - y;
            sum_ = t;
        } else {
            sum_ += x;
        }
    }
    void add(double x) { add(cplx(x, 0.0)); }
    cplx value() const { return sum_; }

private:
    bool compensate_;
    cplx sum_{0.0, 0.0};
    cplx carry_{0.0, 0.0};
};

}  // namespace higgsflow
