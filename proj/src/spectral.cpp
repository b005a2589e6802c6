#include "spectral.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <tuple>

namespace higgsflow::detail {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

using PlanKey = std::tuple<int, int, int>;  // axes, points per axis, lanes

// Plan cache; FFTW_ESTIMATE keeps planning deterministic, FFTW_UNALIGNED
// lets one plan serve any buffer.
PlanPair& plans_for(const Lattice& lat, int lanes, fftw_complex* data) {
    // Plan creation is not thread-safe in FFTW; executions on distinct
    // buffers are. Serialize the cache, hand out stable node references.
    static std::mutex mu;
    static std::map<PlanKey, PlanPair> cache;
    std::scoped_lock lock(mu);
    PlanKey key{lat.axes(), lat.points_per_axis, lanes};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int dims[4];
    for (int a = 0; a < lat.axes(); ++a) dims[a] = lat.points_per_axis;  // all axes equal
    PlanPair pp;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pp.fwd = fftw_plan_many_dft(lat.axes(), dims, lanes, data, nullptr, lanes, 1, data, nullptr,
                                lanes, 1, FFTW_FORWARD, flags);
    pp.bwd = fftw_plan_many_dft(lat.axes(), dims, lanes, data, nullptr, lanes, 1, data, nullptr,
                                lanes, 1, FFTW_BACKWARD, flags);
    return cache.emplace(key, pp).first->second;
}

// Signed frequency of a per-axis index, with the Nyquist derivative zeroed.
double wavenumber(int idx, int N, double length) {
    int m = (idx <= N / 2) ? idx : idx - N;
    if (N % 2 == 0 && idx == N / 2) return 0.0;
    return 2.0 * pi * m / length;
}

void spectral_derivative(std::vector<cplx>& buf, const Lattice& lat, int rank, int alpha,
                         bool bar) {
    const int lanes = rank * rank;
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair& pp = plans_for(lat, lanes, data);
    fftw_execute_dft(pp.fwd, data, data);

    const int N = lat.points_per_axis;
    const std::int64_t npoints = lat.num_points();
    const double Lx = lat.axis_length(2 * alpha);
    const double norm = 1.0 / static_cast<double>(npoints);
    // FFTW uses row-major dims, our flat index has axis 0 fastest; with all
    // axes equal the layouts coincide up to axis relabeling, which the
    // per-axis frequency decode below handles directly.
    for (std::int64_t f = 0; f < npoints; ++f) {
        // All axes have equal size, so the flat frequency index decodes
        // exactly like the spatial index (axis 0 fastest).
        std::int64_t rem = f;
        int freq_idx[4] = {0, 0, 0, 0};
        for (int a = 0; a < lat.axes(); ++a) {
            freq_idx[a] = static_cast<int>(rem % N);
            rem /= N;
        }
        const double kx = wavenumber(freq_idx[2 * alpha], N, Lx);
        const double ky = wavenumber(freq_idx[2 * alpha + 1], N, Lx);
        const cplx factor = bar ? cplx(-ky / 2.0, kx / 2.0) : cplx(ky / 2.0, kx / 2.0);
        const cplx scale = factor * norm;
        cplx* row = buf.data() + f * lanes;
        for (int l = 0; l < lanes; ++l) row[l] *= scale;
    }
    fftw_execute_dft(pp.bwd, data, data);
}

void fd4_axis_derivative(const std::vector<cplx>& in, std::vector<cplx>& out, const Lattice& lat,
                         int rank, int axis) {
    const int lanes = rank * rank;
    const int N = lat.points_per_axis;
    const double inv12h = 1.0 / (12.0 * lat.spacing(axis));
    std::int64_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= N;
    const std::int64_t npoints = lat.num_points();
    for (std::int64_t x = 0; x < npoints; ++x) {
        const int c = static_cast<int>((x / stride) % N);
        auto wrap = [&](int off) {
            int nc = (c + off % N + N) % N;
            return x + static_cast<std::int64_t>(nc - c) * stride;
        };
        const std::int64_t m2 = wrap(-2), m1 = wrap(-1), p1 = wrap(1), p2 = wrap(2);
        for (int l = 0; l < lanes; ++l) {
            out[x * lanes + l] = (in[m2 * lanes + l] - 8.0 * in[m1 * lanes + l] +
                                  8.0 * in[p1 * lanes + l] - in[p2 * lanes + l]) *
                                 inv12h;
        }
    }
}

void fd4_derivative(std::vector<cplx>& buf, const Lattice& lat, int rank, int alpha, bool bar) {
    std::vector<cplx> dx(buf.size()), dy(buf.size());
    fd4_axis_derivative(buf, dx, lat, rank, 2 * alpha);
    fd4_axis_derivative(buf, dy, lat, rank, 2 * alpha + 1);
    const cplx iy = bar ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = 0.5 * dx[i] + iy * dy[i];
}

}  // namespace

void holomorphic_derivative(std::vector<cplx>& buf, const Lattice& lat, int rank, int alpha,
                            bool bar) {
    if (alpha < 0 || alpha >= lat.n) throw std::invalid_argument("derivative: bad complex axis");
    if (derivative_mode() == DerivativeMode::spectral)
        spectral_derivative(buf, lat, rank, alpha, bar);
    else
        fd4_derivative(buf, lat, rank, alpha, bar);
}

void spectral_low_pass(std::vector<cplx>& buf, const Lattice& lat, int rank, int max_mode) {
    const int lanes = rank * rank;
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair& pp = plans_for(lat, lanes, data);
    fftw_execute_dft(pp.fwd, data, data);

    const int N = lat.points_per_axis;
    const std::int64_t npoints = lat.num_points();
    const double norm = 1.0 / static_cast<double>(npoints);
    for (std::int64_t f = 0; f < npoints; ++f) {
        std::int64_t rem = f;
        bool keep = true;
        for (int a = 0; a < lat.axes(); ++a) {
            const int idx = static_cast<int>(rem % N);
            rem /= N;
            const int m = (idx <= N / 2) ? idx : idx - N;
            if (std::abs(m) > max_mode || (N % 2 == 0 && idx == N / 2)) keep = false;
        }
        const double scale = keep ? norm : 0.0;
        cplx* row = buf.data() + f * lanes;
        for (int l = 0; l < lanes; ++l) row[l] *= scale;
    }
    fftw_execute_dft(pp.bwd, data, data);
}

}  // namespace higgsflow::detail
