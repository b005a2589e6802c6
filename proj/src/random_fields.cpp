#include "higgsflow/random_fields.hpp"

#include <cmath>
#include <random>

namespace higgsflow {

std::uint64_t Rng::splitmix() {
    // seed scrambler so nearby seeds give unrelated streams
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::bits() { return splitmix(); }

double Rng::uniform() {
    return static_cast<double>(bits() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(2.0 * pi * u2);
    return r * std::cos(2.0 * pi * u2);
}

cplx Rng::cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return cplx(re, im) / std::sqrt(2.0);
}

namespace {

// All nonzero integer frequency vectors with |m_a| <= max_mode, one per
// +/- pair (cosine modes cover both signs).
std::vector<std::array<int, 4>> mode_set(const Lattice& lat, int max_mode) {
    std::vector<std::array<int, 4>> modes;
    const int axes = lat.axes();
    std::array<int, 4> m{0, 0, 0, 0};
    auto rec = [&](auto&& self, int a) -> void {
        if (a == axes) {
            bool zero = true, lead_ok = false;
            for (int i = axes - 1; i >= 0; --i) {
                if (m[i] != 0) {
                    zero = false;
                    lead_ok = m[i] > 0;
                    break;
                }
            }
            if (!zero && lead_ok) modes.push_back(m);
            return;
        }
        for (int v = -max_mode; v <= max_mode; ++v) {
            m[a] = v;
            self(self, a + 1);
        }
    };
    rec(rec, 0);
    return modes;
}

}  // namespace

std::vector<double> random_bandlimited_scalar(const Lattice& lat, int max_mode, double amplitude,
                                              Rng& rng) {
    const auto modes = mode_set(lat, max_mode);
    std::vector<double> field(static_cast<size_t>(lat.num_points()), 0.0);
    const double scale = amplitude / std::sqrt(static_cast<double>(modes.size()));
    for (const auto& m : modes) {
        const double a = scale * rng.gaussian();
        const double phase0 = 2.0 * pi * rng.uniform();
        for (std::int64_t x = 0; x < lat.num_points(); ++x) {
            double phase = phase0;
            auto c = point_coords(lat, x);
            for (int axis = 0; axis < lat.axes(); ++axis)
                phase += 2.0 * pi * m[axis] * c[axis] / lat.points_per_axis;
            field[static_cast<size_t>(x)] += a * std::cos(phase);
        }
    }
    return field;
}

EndoFormField random_hermitian_field(const Lattice& lat, int rank, int max_mode, double amplitude,
                                     Rng& rng) {
    EndoFormField out(lat, 0, 0, rank);
    const int terms = rank * rank;  // Hermitian basis dimension
    for (int t = 0; t < terms; ++t) {
        Mat H = Mat::Zero(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) H(i, j) = rng.cgaussian();
        H = ((H + H.adjoint()) / 2.0).eval();
        const auto s = random_bandlimited_scalar(lat, max_mode, amplitude / terms, rng);
        for (std::int64_t x = 0; x < lat.num_points(); ++x)
            out.matrix(0, x) += s[static_cast<size_t>(x)] * H;
    }
    return out;
}

EndoFormField random_endo_form(const Lattice& lat, int rank, int p, int q, int max_mode,
                               double amplitude, Rng& rng) {
    EndoFormField out(lat, p, q, rank);
    for (int c = 0; c < out.num_components(); ++c) {
        for (int i = 0; i < rank; ++i) {
            for (int j = 0; j < rank; ++j) {
                const auto re = random_bandlimited_scalar(lat, max_mode, amplitude, rng);
                const auto im = random_bandlimited_scalar(lat, max_mode, amplitude, rng);
                for (std::int64_t x = 0; x < lat.num_points(); ++x)
                    out.matrix(c, x)(i, j) = cplx(re[static_cast<size_t>(x)], im[static_cast<size_t>(x)]);
            }
        }
    }
    return out;
}

EndoFormField hermitian_exp(const EndoFormField& a) {
    if (a.p() != 0 || a.q() != 0) throw std::invalid_argument("hermitian_exp: need a (0,0) field");
    EndoFormField out(a.lattice(), 0, 0, a.rank());
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::int64_t x = 0; x < a.num_points(); ++x) {
        es.compute(a.matrix(0, x));
        out.matrix(0, x) = es.eigenvectors() *
                           es.eigenvalues().array().exp().matrix().asDiagonal() *
                           es.eigenvectors().adjoint();
    }
    return out;
}

}  // namespace higgsflow
