#pragma once

#include "higgsflow/field.hpp"

#include <cstdint>

namespace higgsflow {

/// Deterministic random stream: splitmix64 bits mapped to doubles by a fixed
/// recipe (no std::*_distribution), so a seed reproduces identical fields on
/// any conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t bits();
    double uniform();   // [0,1)
    double gaussian();  // standard normal, Box-Muller
    cplx cgaussian();

private:
    std::uint64_t splitmix();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Real band-limited scalar field: a superposition of cosine modes with all
/// per-axis frequencies bounded by max_mode; sup-norm roughly `amplitude`.
std::vector<double> random_bandlimited_scalar(const Lattice& lat, int max_mode, double amplitude,
                                              Rng& rng);

/// Pointwise-Hermitian band-limited (0,0) field: sum of real band-limited
/// scalars times constant Hermitian matrices.
EndoFormField random_hermitian_field(const Lattice& lat, int rank, int max_mode, double amplitude,
                                     Rng& rng);

/// Generic band-limited complex endomorphism-valued (p,q) field.
EndoFormField random_endo_form(const Lattice& lat, int rank, int p, int q, int max_mode,
                               double amplitude, Rng& rng);

/// exp(A) pointwise for a Hermitian (0,0) field A: a positive metric field.
EndoFormField hermitian_exp(const EndoFormField& a);

}  // namespace higgsflow
