#include "higgsflow/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace higgsflow {

namespace {
DerivativeMode g_deriv_mode = DerivativeMode::spectral;
SummationMode g_sum_mode = SummationMode::compensated;
}  // namespace

DerivativeMode derivative_mode() { return g_deriv_mode; }
void set_derivative_mode(DerivativeMode m) { g_deriv_mode = m; }
SummationMode summation_mode() { return g_sum_mode; }
void set_summation_mode(SummationMode m) { g_sum_mode = m; }

namespace {

std::vector<std::vector<int>> enumerate_multi_indices(int n, int p) {
    std::vector<std::vector<int>> out;
    if (p == 0) {
        out.push_back({});
    } else if (p <= n) {
        std::vector<int> idx(p);
        for (int i = 0; i < p; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            int i = p - 1;
            while (i >= 0 && idx[i] == n - p + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace

const std::vector<std::vector<int>>& multi_indices(int n, int p) {
    // n <= 2 and p <= 2n, so a fixed table covers everything; the magic
    // static keeps lookups lock-free for concurrent pointwise maps.
    static const auto table = [] {
        std::array<std::array<std::vector<std::vector<int>>, 5>, 3> t;
        for (int nn = 1; nn <= 2; ++nn)
            for (int pp = 0; pp <= 2 * nn; ++pp) t[nn][pp] = enumerate_multi_indices(nn, pp);
        return t;
    }();
    if (n < 1 || n > 2 || p < 0 || p > 2 * n)
        throw std::invalid_argument("multi_indices: out of range");
    return table[static_cast<size_t>(n)][static_cast<size_t>(p)];
}

int multi_index_position(int n, const std::vector<int>& idx) {
    const auto& all = multi_indices(n, static_cast<int>(idx.size()));
    for (size_t i = 0; i < all.size(); ++i)
        if (all[i] == idx) return static_cast<int>(i);
    return -1;
}

int merge_indices(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
    out = a;
    out.insert(out.end(), b.begin(), b.end());
    // Insertion sort, counting transpositions.
    int sign = 1;
    for (size_t i = 1; i < out.size(); ++i) {
        int v = out[i];
        size_t j = i;
        while (j > 0 && out[j - 1] > v) {
            out[j] = out[j - 1];
            --j;
            sign = -sign;
        }
        out[j] = v;
    }
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] == out[i - 1]) return 0;
    return sign;
}

EndoFormField::EndoFormField(Lattice lat, int p, int q, int rank)
    : lat_(lat), p_(p), q_(q), rank_(rank) {
    if (p < 0 || q < 0 || p > 2 * lat.n || q > 2 * lat.n)
        throw std::invalid_argument("EndoFormField: bidegree overflow");
    if (rank < 1) throw std::invalid_argument("EndoFormField: rank must be positive");
    const auto& za = multi_indices(lat.n, p);
    const auto& zb = multi_indices(lat.n, q);
    const size_t ncomp = za.size() * zb.size();
    comps_.assign(ncomp, std::vector<cplx>(static_cast<size_t>(lat.num_points()) * rank * rank,
                                           cplx(0.0, 0.0)));
}

EndoFormField EndoFormField::constant(const Lattice& lat, int p, int q, const Mat& value) {
    EndoFormField f(lat, p, q, static_cast<int>(value.rows()));
    for (int c = 0; c < f.num_components(); ++c)
        for (std::int64_t x = 0; x < f.num_points(); ++x) f.matrix(c, x) = value;
    return f;
}

EndoFormField EndoFormField::identity(const Lattice& lat, int rank) {
    return constant(lat, 0, 0, Mat::Identity(rank, rank));
}

const std::vector<int>& EndoFormField::comp_z_index(int c) const {
    const auto& zb = multi_indices(lat_.n, q_);
    return multi_indices(lat_.n, p_)[static_cast<size_t>(c) / zb.size()];
}

const std::vector<int>& EndoFormField::comp_zbar_index(int c) const {
    const auto& zb = multi_indices(lat_.n, q_);
    return zb[static_cast<size_t>(c) % zb.size()];
}

int EndoFormField::component_position(const std::vector<int>& A, const std::vector<int>& B) const {
    int ia = multi_index_position(lat_.n, A);
    int ib = multi_index_position(lat_.n, B);
    if (ia < 0 || ib < 0) return -1;
    return ia * static_cast<int>(multi_indices(lat_.n, q_).size()) + ib;
}

bool EndoFormField::same_shape(const EndoFormField& other) const {
    return lat_ == other.lat_ && p_ == other.p_ && q_ == other.q_ && rank_ == other.rank_;
}

EndoFormField& EndoFormField::operator+=(const EndoFormField& other) {
    if (!same_shape(other)) throw std::invalid_argument("field sum: shape mismatch");
    for (size_t c = 0; c < comps_.size(); ++c)
        for (size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] += other.comps_[c][i];
    return *this;
}

EndoFormField& EndoFormField::operator-=(const EndoFormField& other) {
    if (!same_shape(other)) throw std::invalid_argument("field difference: shape mismatch");
    for (size_t c = 0; c < comps_.size(); ++c)
        for (size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] -= other.comps_[c][i];
    return *this;
}

EndoFormField& EndoFormField::operator*=(cplx s) {
    for (auto& comp : comps_)
        for (auto& v : comp) v *= s;
    return *this;
}

double EndoFormField::max_norm() const {
    double m = 0.0;
    const int rr = rank_ * rank_;
    for (const auto& comp : comps_) {
        for (size_t x = 0; x < comp.size(); x += rr) {
            double s = 0.0;
            for (int k = 0; k < rr; ++k) s += std::norm(comp[x + k]);
            m = std::max(m, s);
        }
    }
    return std::sqrt(m);
}

std::array<int, 4> point_coords(const Lattice& lat, std::int64_t point) {
    std::array<int, 4> c{0, 0, 0, 0};
    for (int a = 0; a < lat.axes(); ++a) {
        c[a] = static_cast<int>(point % lat.points_per_axis);
        point /= lat.points_per_axis;
    }
    return c;
}

double axis_coordinate(const Lattice& lat, std::int64_t point, int axis) {
    return point_coords(lat, point)[axis] * lat.spacing(axis);
}

}  // namespace higgsflow
