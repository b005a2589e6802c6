#pragma once

#include "higgsflow/field.hpp"
#include "higgsflow/torus.hpp"

#include <optional>
#include <vector>

namespace higgsflow {

/// Graded wedge with coefficientwise matrix multiplication. Ranks must be
/// equal, or one operand must be rank 1 (scalar forms broadcast). Results
/// whose degree exceeds n in either slot are structurally zero; degrees
/// beyond 2n are rejected.
EndoFormField wedge(const EndoFormField& f, const EndoFormField& g);

/// Contraction of a (1,1)-form with the metric dual:
///   lambda_contract(f)^i_j = sum_{a,b} g^{a bbar} f^i_{j a bbar},
/// the component realization of sqrt(-1) Lambda on (1,1)-forms. Other
/// bidegrees are rejected.
EndoFormField lambda_contract(const EndoFormField& f, const KahlerTorus& M);

/// Fourier-spectral (or configured finite-difference) del and delbar,
/// applied coefficientwise with exterior antisymmetrization.
EndoFormField d(const EndoFormField& f);
EndoFormField d_bar(const EndoFormField& f);

/// Sharp spectral low-pass: zero every Fourier mode with any per-axis
/// frequency above max_mode.
EndoFormField low_pass(const EndoFormField& f, int max_mode);

enum class VolumeWeight { omega_n, omega_n_over_nfact };

/// Integral of a scalar (0,0) rank-1 field against omega^n or omega^n/n!.
cplx integrate_scalar(const EndoFormField& f, const KahlerTorus& M, VolumeWeight w);

/// Integral of a rank-1 (n,n)-form over the torus.
cplx integrate_top(const EndoFormField& f, const KahlerTorus& M);

/// Pointwise trace: rank-r field -> rank-1 field of the same bidegree.
EndoFormField trace_field(const EndoFormField& f);

/// h-adjoint of a (p,q)-form: coefficients h^{-1} psi^dagger h with the
/// form part conjugated, giving a (q,p)-form; carries the (-1)^{pq}
/// reordering sign of conj(dz^A /\ dzbar^B).
EndoFormField adjoint_form(const EndoFormField& psi, const EndoFormField& h);

/// Graded commutator [A,B] = A/\B - (-1)^{deg A deg B} B/\A.
EndoFormField graded_bracket(const EndoFormField& a, const EndoFormField& b);

/// Pointwise Hermitian product (psi,eta)_h as a rank-1 (0,0) field: form
/// slots contract with metric-dual determinants, endomorphism slots with
/// tr(psi (eta)*_h).
EndoFormField pointwise_inner(const EndoFormField& psi, const EndoFormField& eta,
                              const EndoFormField& h, const KahlerTorus& M);

/// L2 product <psi,eta> = int (psi,eta)_h omega^n/n!.
cplx l2_inner(const EndoFormField& psi, const EndoFormField& eta,
              const EndoFormField& h, const KahlerTorus& M);

/// A finite sum of homogeneous-bidegree parts; the natural carrier for the
/// Hitchin-Simpson operators, which mix types.
class MixedForm {
public:
    MixedForm() = default;
    explicit MixedForm(EndoFormField f) { add(std::move(f)); }

    void add(EndoFormField f);
    const std::vector<EndoFormField>& parts() const { return parts_; }
    const EndoFormField* part(int p, int q) const;

    MixedForm& operator+=(const MixedForm& other);
    friend MixedForm operator+(MixedForm a, const MixedForm& b) { return a += b; }

private:
    std::vector<EndoFormField> parts_;
};

/// L2 product of mixed forms; distinct bidegrees are orthogonal.
cplx l2_inner(const MixedForm& psi, const MixedForm& eta,
              const EndoFormField& h, const KahlerTorus& M);

double l2_norm_sq(const MixedForm& psi, const EndoFormField& h, const KahlerTorus& M);

}  // namespace higgsflow
