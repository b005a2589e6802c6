#pragma once

#include "higgsflow/field.hpp"

namespace higgsflow::detail {

/// In-place del / delbar of one coefficient buffer (num_points * r * r,
/// point-major, matrix entries innermost). alpha is the complex axis.
/// Spectral mode runs a full 2n-dimensional FFT per matrix-entry lane and
/// multiplies by (i kx +- ky)/2 with the Nyquist derivative zeroed; fd4 mode
/// applies 4th-order periodic central differences.
void holomorphic_derivative(std::vector<cplx>& buf, const Lattice& lat, int rank, int alpha,
                            bool bar);

/// In-place sharp low-pass of one coefficient buffer: keep only modes with
/// every per-axis signed frequency in [-max_mode, max_mode].
void spectral_low_pass(std::vector<cplx>& buf, const Lattice& lat, int rank, int max_mode);

}  // namespace higgsflow::detail
