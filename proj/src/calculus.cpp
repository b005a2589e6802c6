#include "higgsflow/calculus.hpp"

#include "spectral.hpp"

#include <algorithm>
#include <cmath>

namespace higgsflow {

namespace {

int broadcast_rank(const EndoFormField& f, const EndoFormField& g) {
    if (f.rank() == g.rank()) return f.rank();
    if (f.rank() == 1) return g.rank();
    if (g.rank() == 1) return f.rank();
    throw std::invalid_argument("wedge: incompatible ranks");
}

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace

EndoFormField wedge(const EndoFormField& f, const EndoFormField& g) {
    if (!(f.lattice() == g.lattice())) throw std::invalid_argument("wedge: lattice mismatch");
    const int rank = broadcast_rank(f, g);
    const Lattice& lat = f.lattice();
    const int p = f.p() + g.p();
    const int q = f.q() + g.q();
    if (p > 2 * lat.n || q > 2 * lat.n) throw std::invalid_argument("wedge: bidegree overflow");

    EndoFormField out(lat, p, q, rank);
    if (out.is_structurally_zero() || f.is_structurally_zero() || g.is_structurally_zero())
        return out;

    const std::int64_t npts = lat.num_points();
    const int cross_sign = (f.q() * g.p()) % 2 == 0 ? 1 : -1;
    std::vector<int> merged;
    for (int cf = 0; cf < f.num_components(); ++cf) {
        for (int cg = 0; cg < g.num_components(); ++cg) {
            const int sa = merge_indices(f.comp_z_index(cf), g.comp_z_index(cg), merged);
            if (sa == 0) continue;
            std::vector<int> mergedA = merged;
            const int sb = merge_indices(f.comp_zbar_index(cf), g.comp_zbar_index(cg), merged);
            if (sb == 0) continue;
            const int co = out.component_position(mergedA, merged);
            const double s = cross_sign * sa * sb;
            for (std::int64_t x = 0; x < npts; ++x) {
                auto fm = f.matrix(cf, x);
                auto gm = g.matrix(cg, x);
                if (f.rank() == 1 && rank > 1)
                    out.matrix(co, x) += s * (fm(0, 0) * gm);
                else if (g.rank() == 1 && rank > 1)
                    out.matrix(co, x) += s * (gm(0, 0) * fm);
                else
                    out.matrix(co, x) += s * (fm * gm);
            }
        }
    }
    return out;
}

EndoFormField lambda_contract(const EndoFormField& f, const KahlerTorus& M) {
    if (f.p() != 1 || f.q() != 1)
        throw std::invalid_argument("lambda_contract: field must have bidegree (1,1)");
    if (!(f.lattice() == M.lattice()))
        throw std::invalid_argument("lambda_contract: lattice mismatch");
    EndoFormField out(f.lattice(), 0, 0, f.rank());
    const Mat& gd = M.metric_dual();
    for (int c = 0; c < f.num_components(); ++c) {
        const int a = f.comp_z_index(c)[0];
        const int b = f.comp_zbar_index(c)[0];
        const cplx w = gd(a, b);
        auto in = f.component(c);
        auto acc = out.component(0);
        for (size_t i = 0; i < in.size(); ++i) acc[i] += w * in[i];
    }
    return out;
}

namespace {

EndoFormField exterior_derivative(const EndoFormField& f, bool bar) {
    const Lattice& lat = f.lattice();
    const int p = f.p() + (bar ? 0 : 1);
    const int q = f.q() + (bar ? 1 : 0);
    EndoFormField out(lat, std::min(p, 2 * lat.n), std::min(q, 2 * lat.n), f.rank());
    if (out.is_structurally_zero() || f.is_structurally_zero()) return out;

    // delbar f picks up (-1)^p moving dzbar^b across dz^A.
    const int degree_sign = (bar && f.p() % 2 == 1) ? -1 : 1;
    std::vector<int> merged;
    for (int c = 0; c < f.num_components(); ++c) {
        for (int axis = 0; axis < lat.n; ++axis) {
            const std::vector<int> single{axis};
            int s;
            int co;
            if (bar) {
                s = merge_indices(single, f.comp_zbar_index(c), merged);
                if (s == 0) continue;
                co = out.component_position(f.comp_z_index(c), merged);
            } else {
                s = merge_indices(single, f.comp_z_index(c), merged);
                if (s == 0) continue;
                co = out.component_position(merged, f.comp_zbar_index(c));
            }
            auto src = f.component(c);
            std::vector<cplx> buf(src.begin(), src.end());
            detail::holomorphic_derivative(buf, lat, f.rank(), axis, bar);
            const double sign = degree_sign * s;
            auto dst = out.component(co);
            for (size_t i = 0; i < buf.size(); ++i) dst[i] += sign * buf[i];
        }
    }
    return out;
}

}  // namespace

EndoFormField d(const EndoFormField& f) { return exterior_derivative(f, false); }
EndoFormField d_bar(const EndoFormField& f) { return exterior_derivative(f, true); }

EndoFormField low_pass(const EndoFormField& f, int max_mode) {
    EndoFormField out = f;
    for (int c = 0; c < out.num_components(); ++c) {
        auto span = out.component(c);
        std::vector<cplx> buf(span.begin(), span.end());
        detail::spectral_low_pass(buf, out.lattice(), out.rank(), max_mode);
        std::copy(buf.begin(), buf.end(), span.begin());
    }
    return out;
}

cplx integrate_scalar(const EndoFormField& f, const KahlerTorus& M, VolumeWeight w) {
    if (f.p() != 0 || f.q() != 0 || f.rank() != 1)
        throw std::invalid_argument("integrate_scalar: need a scalar (0,0) rank-1 field");
    if (!(f.lattice() == M.lattice()))
        throw std::invalid_argument("integrate_scalar: lattice mismatch");
    Accumulator acc;
    for (cplx v : f.component(0)) acc.add(v);
    double weight = M.sample_weight();
    if (w == VolumeWeight::omega_n) weight *= factorial(M.n());
    return acc.value() * weight;
}

cplx integrate_top(const EndoFormField& f, const KahlerTorus& M) {
    const int n = M.n();
    if (f.p() != n || f.q() != n || f.rank() != 1)
        throw std::invalid_argument("integrate_top: need a rank-1 (n,n)-form");
    if (!(f.lattice() == M.lattice())) throw std::invalid_argument("integrate_top: lattice mismatch");
    // dz^1..dz^n dzbar^1..dzbar^n = (-1)^{n(n-1)/2} (-2i)^n dx^1 dy^1 .. dx^n dy^n.
    cplx tau = std::pow(cplx(0.0, -2.0), n);
    if ((n * (n - 1) / 2) % 2 == 1) tau = -tau;
    double cell = 1.0;
    for (int a = 0; a < n; ++a) {
        const double h = M.lattice().spacing(2 * a);
        cell *= h * h;
    }
    Accumulator acc;
    for (cplx v : f.component(0)) acc.add(v);
    return acc.value() * tau * cell;
}

EndoFormField trace_field(const EndoFormField& f) {
    if (f.rank() == 1) return f;
    EndoFormField out(f.lattice(), f.p(), f.q(), 1);
    for (int c = 0; c < f.num_components(); ++c) {
        auto dst = out.component(c);
        for (std::int64_t x = 0; x < f.num_points(); ++x) dst[x] = f.matrix(c, x).trace();
    }
    return out;
}

EndoFormField adjoint_form(const EndoFormField& psi, const EndoFormField& h) {
    if (h.p() != 0 || h.q() != 0) throw std::invalid_argument("adjoint_form: h must be a (0,0) field");
    if (h.rank() != psi.rank() && psi.rank() != 1)
        throw std::invalid_argument("adjoint_form: rank mismatch");
    const Lattice& lat = psi.lattice();
    EndoFormField out(lat, psi.q(), psi.p(), psi.rank());
    const int sign = (psi.p() * psi.q()) % 2 == 0 ? 1 : -1;
    const bool scalar = psi.rank() == 1;
    Mat hinv;
    for (int c = 0; c < psi.num_components(); ++c) {
        const int co = out.component_position(psi.comp_zbar_index(c), psi.comp_z_index(c));
        for (std::int64_t x = 0; x < psi.num_points(); ++x) {
            if (scalar) {
                out.matrix(co, x)(0, 0) = double(sign) * std::conj(psi.matrix(c, x)(0, 0));
            } else {
                auto hm = h.matrix(0, x);
                hinv = hm.inverse();
                out.matrix(co, x) = double(sign) * (hinv * psi.matrix(c, x).adjoint() * hm);
            }
        }
    }
    return out;
}

EndoFormField graded_bracket(const EndoFormField& a, const EndoFormField& b) {
    EndoFormField ab = wedge(a, b);
    EndoFormField ba = wedge(b, a);
    const int da = a.p() + a.q(), db = b.p() + b.q();
    if ((da * db) % 2 == 0)
        ab -= ba;
    else
        ab += ba;
    return ab;
}

namespace {

// det of the metric-dual contraction block between two multi-indices.
cplx dual_block_det(const Mat& gd, const std::vector<int>& rows, const std::vector<int>& cols) {
    const size_t k = rows.size();
    if (k == 0) return cplx(1.0, 0.0);
    if (k == 1) return gd(rows[0], cols[0]);
    return gd(rows[0], cols[0]) * gd(rows[1], cols[1]) - gd(rows[0], cols[1]) * gd(rows[1], cols[0]);
}

}  // namespace

EndoFormField pointwise_inner(const EndoFormField& psi, const EndoFormField& eta,
                              const EndoFormField& h, const KahlerTorus& M) {
    if (psi.p() != eta.p() || psi.q() != eta.q() || psi.rank() != eta.rank())
        throw std::invalid_argument("pointwise_inner: bidegree/rank mismatch");
    if (!(psi.lattice() == M.lattice()))
        throw std::invalid_argument("pointwise_inner: lattice mismatch");
    EndoFormField out(psi.lattice(), 0, 0, 1);
    if (psi.is_structurally_zero()) return out;
    const Mat& gd = M.metric_dual();
    const bool scalar = psi.rank() == 1;
    auto acc = out.component(0);
    Mat hinv;
    for (int c1 = 0; c1 < psi.num_components(); ++c1) {
        for (int c2 = 0; c2 < eta.num_components(); ++c2) {
            // (dz^A, dz^A') contracts z slots as g^{a abar'}; the dzbar pair
            // contributes the conjugate block with the roles swapped.
            const cplx wz = dual_block_det(gd, psi.comp_z_index(c1), eta.comp_z_index(c2));
            const cplx wzb =
                dual_block_det(gd, eta.comp_zbar_index(c2), psi.comp_zbar_index(c1));
            const cplx w = wz * wzb;
            if (w == cplx(0.0, 0.0)) continue;
            for (std::int64_t x = 0; x < psi.num_points(); ++x) {
                if (scalar) {
                    acc[x] += w * psi.matrix(c1, x)(0, 0) * std::conj(eta.matrix(c2, x)(0, 0));
                } else {
                    auto hm = h.matrix(0, x);
                    hinv = hm.inverse();
                    acc[x] += w * (psi.matrix(c1, x) * hinv * eta.matrix(c2, x).adjoint() * hm)
                                      .trace();
                }
            }
        }
    }
    return out;
}

cplx l2_inner(const EndoFormField& psi, const EndoFormField& eta, const EndoFormField& h,
              const KahlerTorus& M) {
    return integrate_scalar(pointwise_inner(psi, eta, h, M), M,
                            VolumeWeight::omega_n_over_nfact);
}

void MixedForm::add(EndoFormField f) {
    for (auto& part : parts_) {
        if (part.p() == f.p() && part.q() == f.q()) {
            part += f;
            return;
        }
    }
    parts_.push_back(std::move(f));
}

const EndoFormField* MixedForm::part(int p, int q) const {
    for (const auto& part : parts_)
        if (part.p() == p && part.q() == q) return &part;
    return nullptr;
}

MixedForm& MixedForm::operator+=(const MixedForm& other) {
    for (const auto& part : other.parts_) add(part);
    return *this;
}

cplx l2_inner(const MixedForm& psi, const MixedForm& eta, const EndoFormField& h,
              const KahlerTorus& M) {
    Accumulator acc;
    for (const auto& part : psi.parts()) {
        const EndoFormField* other = eta.part(part.p(), part.q());
        if (other) acc.add(l2_inner(part, *other, h, M));
    }
    return acc.value();
}

double l2_norm_sq(const MixedForm& psi, const EndoFormField& h, const KahlerTorus& M) {
    return l2_inner(psi, psi, h, M).real();
}

}  // namespace higgsflow
