//! Right-hand sides of the two master equations in the rotating frame: the
//! atom+control Lindblad generator, the coherent-state pump, and the
//! Fock-state hierarchy coupling.
//!
//! Basis order is (|g⟩, |e⟩, |s⟩). The jump operators are σ_ge = |g⟩⟨e| at
//! rate γ_eg_eff and σ_se = |s⟩⟨e| at rate γ_es_eff, so the anticommutator
//! part is −(γ_eg_eff+γ_es_eff)/2·{|e⟩⟨e|, ρ}. The generators are written out
//! element-by-element for speed; the unit tests check them against the dense
//! operator form built from [`OperatorBasis`].

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::model::{AtomConfig, ControlPulse, EffectiveCoupling, SimulationConfig};
use crate::pulses::{control_envelope, target_envelope};

/// Complex 3×3 matrix over (|g⟩, |e⟩, |s⟩).
pub type CMat3 = Matrix3<Complex64>;

const G: usize = 0;
const E: usize = 1;
const S: usize = 2;

#[inline]
fn i_mul(z: Complex64) -> Complex64 {
    Complex64::new(-z.im, z.re)
}

#[inline]
fn neg_i_mul(z: Complex64) -> Complex64 {
    Complex64::new(z.im, -z.re)
}

/// The fixed atomic operators as explicit matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    /// σ_ge = |g⟩⟨e|
    pub sigma_ge: CMat3,
    /// σ_se = |s⟩⟨e|
    pub sigma_se: CMat3,
    /// |e⟩⟨e|
    pub projector_e: CMat3,
}

impl OperatorBasis {
    pub fn new() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mut sigma_ge = CMat3::zeros();
        sigma_ge[(G, E)] = one;
        let mut sigma_se = CMat3::zeros();
        sigma_se[(S, E)] = one;
        let mut projector_e = CMat3::zeros();
        projector_e[(E, E)] = one;
        OperatorBasis { sigma_ge, sigma_se, projector_e }
    }
}

impl Default for OperatorBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// The three density-matrix blocks of the Fock-state master equation.
/// `rho11` and `rho00` are physical (Hermitian, unit trace); `rho01` is the
/// coherence between the one-photon and vacuum input sectors and is generally
/// non-Hermitian. It starts at zero.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HierarchyState {
    pub rho11: CMat3,
    pub rho01: CMat3,
    pub rho00: CMat3,
}

impl HierarchyState {
    /// Initial condition: atom in |g⟩ in both sectors, no cross coherence.
    pub fn ground() -> Self {
        let mut gg = CMat3::zeros();
        gg[(G, G)] = Complex64::new(1.0, 0.0);
        HierarchyState { rho11: gg, rho01: CMat3::zeros(), rho00: gg }
    }
}

/// Frame-transformed Hamiltonian H̃(t) = Δ|e⟩⟨e| + Ω_c(t)(|s⟩⟨e| + |e⟩⟨s|).
/// |g⟩ and |s⟩ are degenerate at zero and all carrier phases are removed by
/// the two-photon-resonance frame.
pub fn rotating_hamiltonian(
    t: f64,
    atom: &AtomConfig,
    control: &ControlPulse,
    t0: f64,
) -> CMat3 {
    let w = Complex64::new(control_envelope(t, control, t0), 0.0);
    let delta = Complex64::new(atom.delta, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    CMat3::new(
        zero, zero, zero, //
        zero, delta, w, //
        zero, w, zero,
    )
}

/// Apply the Lindblad generator of spontaneous decay plus the control drive:
/// −i[H̃(t), ρ] + Σ_c γ_c(σ_c ρ σ_c† − ½{|e⟩⟨e|, ρ}). Valid for arbitrary
/// (also non-Hermitian) ρ, as required for the ρ₀₁ block.
pub fn lindblad_rhs(
    rho: &CMat3,
    t: f64,
    atom: &AtomConfig,
    control: &ControlPulse,
    t0: f64,
    eff: &EffectiveCoupling,
) -> CMat3 {
    let w = control_envelope(t, control, t0);
    let delta = atom.delta;
    let geg = eff.gamma_eg_eff;
    let ges = eff.gamma_es_eff;
    let half = 0.5 * (geg + ges);

    let r_ge = rho[(G, E)];
    let r_gs = rho[(G, S)];
    let r_eg = rho[(E, G)];
    let r_ee = rho[(E, E)];
    let r_es = rho[(E, S)];
    let r_sg = rho[(S, G)];
    let r_se = rho[(S, E)];
    let r_ss = rho[(S, S)];

    let dec_g = r_ee * geg;
    let dec_s = r_ee * ges;

    CMat3::new(
        dec_g,
        i_mul(r_ge * delta + r_gs * w) - r_ge * half,
        i_mul(r_ge * w),
        //
        neg_i_mul(r_eg * delta + r_sg * w) - r_eg * half,
        neg_i_mul((r_se - r_es) * w) - (dec_g + dec_s),
        neg_i_mul(r_es * delta + (r_ss - r_ee) * w) - r_es * half,
        //
        neg_i_mul(r_eg * w),
        neg_i_mul((r_ee - r_ss) * w - r_se * delta) - r_se * half,
        dec_s + neg_i_mul((r_es - r_se) * w),
    )
}

/// Full right-hand side for a coherent-state pulse: the Lindblad generator
/// plus the classical pump −i[κ√n̄(ξ̃(t)σ_ge† + ξ̃*(t)σ_ge), ρ].
pub fn coherent_rhs(rho: &CMat3, t: f64, config: &SimulationConfig) -> CMat3 {
    let mut out = lindblad_rhs(
        rho,
        t,
        &config.atom,
        &config.control,
        config.target.t0,
        &config.coupling,
    );
    let z = target_envelope(t, &config.target) * config.pump_amplitude();
    if z == Complex64::new(0.0, 0.0) {
        return out;
    }
    let zc = z.conj();

    let r_gg = rho[(G, G)];
    let r_ge = rho[(G, E)];
    let r_gs = rho[(G, S)];
    let r_eg = rho[(E, G)];
    let r_ee = rho[(E, E)];
    let r_es = rho[(E, S)];
    let r_sg = rho[(S, G)];
    let r_se = rho[(S, E)];

    out[(G, G)] += neg_i_mul(zc * r_eg - z * r_ge);
    out[(G, E)] += neg_i_mul(zc * (r_ee - r_gg));
    out[(G, S)] += neg_i_mul(zc * r_es);
    out[(E, G)] += neg_i_mul(z * (r_gg - r_ee));
    out[(E, E)] += neg_i_mul(z * r_ge - zc * r_eg);
    out[(E, S)] += neg_i_mul(z * r_gs);
    out[(S, G)] += i_mul(z * r_se);
    out[(S, E)] += i_mul(zc * r_sg);
    out
}

/// Right-hand side of the Fock-state hierarchy:
///
/// dρ₀₀ = L_ac ρ₀₀
/// dρ₀₁ = L_ac ρ₀₁ − iκξ̃*(t)[σ_ge, ρ₀₀]
/// dρ₁₁ = L_ac ρ₁₁ − iκ(ξ̃(t)[σ_ge†, ρ₀₁] + ξ̃*(t)[σ_ge, ρ₀₁†])
pub fn fock_rhs(state: &HierarchyState, t: f64, config: &SimulationConfig) -> HierarchyState {
    let atom = &config.atom;
    let control = &config.control;
    let t0 = config.target.t0;
    let eff = &config.coupling;

    let mut d11 = lindblad_rhs(&state.rho11, t, atom, control, t0, eff);
    let mut d01 = lindblad_rhs(&state.rho01, t, atom, control, t0, eff);
    let d00 = lindblad_rhs(&state.rho00, t, atom, control, t0, eff);

    let u = target_envelope(t, &config.target) * config.coupling.kappa;
    if u != Complex64::new(0.0, 0.0) {
        let uc = u.conj();

        // −iξ̃*κ[σ_ge, ρ₀₀] into dρ₀₁.
        let r00 = &state.rho00;
        d01[(G, G)] += neg_i_mul(uc * r00[(E, G)]);
        d01[(G, E)] += neg_i_mul(uc * (r00[(E, E)] - r00[(G, G)]));
        d01[(G, S)] += neg_i_mul(uc * r00[(E, S)]);
        d01[(E, E)] += i_mul(uc * r00[(E, G)]);
        d01[(S, E)] += i_mul(uc * r00[(S, G)]);

        // −i(u[σ_ge†, ρ₀₁] + u*[σ_ge, ρ₀₁†]) into dρ₁₁.
        let x = &state.rho01;
        let x_gg = x[(G, G)];
        let x_ge = x[(G, E)];
        let x_gs = x[(G, S)];
        let x_ee = x[(E, E)];
        let x_se = x[(S, E)];
        d11[(G, G)] += neg_i_mul(uc * x_ge.conj() - u * x_ge);
        d11[(G, E)] += neg_i_mul(uc * (x_ee - x_gg).conj());
        d11[(G, S)] += neg_i_mul(uc * x_se.conj());
        d11[(E, G)] += neg_i_mul(u * (x_gg - x_ee));
        d11[(E, E)] += neg_i_mul(u * x_ge - uc * x_ge.conj());
        d11[(E, S)] += neg_i_mul(u * x_gs);
        d11[(S, G)] += i_mul(u * x_se);
        d11[(S, E)] += i_mul(uc * x_gs.conj());
    }

    HierarchyState { rho11: d11, rho01: d01, rho00: d00 }
}

/// Largest deviation of `m` from its own adjoint, max_ij |m_ij − conj(m_ji)|.
pub fn hermiticity_defect(m: &CMat3) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Real part of the trace.
pub fn trace_re(m: &CMat3) -> f64 {
    (m[(0, 0)] + m[(1, 1)] + m[(2, 2)]).re
}

/// Smallest eigenvalue of a (numerically) Hermitian 3×3 matrix, via the
/// closed-form solution of the characteristic cubic. The input is
/// symmetrized first so tiny Hermiticity defects do not produce complex
/// eigenvalues.
pub fn min_eigenvalue_hermitian(m: &CMat3) -> f64 {
    let h01 = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let h02 = (m[(0, 2)] + m[(2, 0)].conj()) * 0.5;
    let h12 = (m[(1, 2)] + m[(2, 1)].conj()) * 0.5;
    let d0 = m[(0, 0)].re;
    let d1 = m[(1, 1)].re;
    let d2 = m[(2, 2)].re;

    let p1 = h01.norm_sqr() + h02.norm_sqr() + h12.norm_sqr();
    let q = (d0 + d1 + d2) / 3.0;
    let p2 = (d0 - q).powi(2) + (d1 - q).powi(2) + (d2 - q).powi(2) + 2.0 * p1;
    if p2 <= 0.0 {
        return q;
    }
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return q;
    }
    // B = (H − qI)/p; det(B) is real for Hermitian input.
    let b0 = (d0 - q) / p;
    let b1 = (d1 - q) / p;
    let b2 = (d2 - q) / p;
    let c01 = h01 / p;
    let c02 = h02 / p;
    let c12 = h12 / p;
    let det = b0 * b1 * b2 + 2.0 * (c01 * c12 * c02.conj()).re
        - b0 * c12.norm_sqr()
        - b1 * c02.norm_sqr()
        - b2 * c01.norm_sqr();
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    // Eigenvalues are q + 2p·cos(φ + 2πk/3); with φ ∈ [0, π/3] the k = 1
    // branch is always the smallest.
    q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_config, Statistics, TargetPulse, Topology};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn test_config(
        gamma_eg: f64,
        gamma_es: f64,
        delta: f64,
        topology: Topology,
        statistics: Statistics,
        nbar: f64,
        omega: f64,
    ) -> SimulationConfig {
        validate_config(
            AtomConfig { gamma_eg, gamma_es, delta },
            TargetPulse { tau_p: 1.0, t0: 0.0, statistics, nbar },
            ControlPulse { omega, a: 0.9, b: 0.6 },
            topology,
        )
        .unwrap()
    }

    /// Dense reference: the Lindblad generator assembled from the operator
    /// matrices, kept deliberately independent of the element-wise fast path.
    fn dense_lindblad(
        rho: &CMat3,
        t: f64,
        atom: &AtomConfig,
        control: &ControlPulse,
        t0: f64,
        eff: &EffectiveCoupling,
    ) -> CMat3 {
        let ops = OperatorBasis::new();
        let h = rotating_hamiltonian(t, atom, control, t0);
        let mut out = (h * rho - rho * h) * c(0.0, -1.0);
        for (rate, l) in [(eff.gamma_eg_eff, &ops.sigma_ge), (eff.gamma_es_eff, &ops.sigma_se)] {
            let ldl = l.adjoint() * l;
            out += (l * rho * l.adjoint() - (ldl * rho + rho * ldl) * c(0.5, 0.0))
                * c(rate, 0.0);
        }
        out
    }

    fn dense_commutator(a: &CMat3, b: &CMat3) -> CMat3 {
        a * b - b * a
    }

    fn mat_max_abs_diff(a: &CMat3, b: &CMat3) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        worst
    }

    fn mat_from_parts(parts: [f64; 18]) -> CMat3 {
        CMat3::from_fn(|i, j| c(parts[2 * (3 * i + j)], parts[2 * (3 * i + j) + 1]))
    }

    fn hermitian_from_parts(parts: [f64; 9]) -> CMat3 {
        let mut m = CMat3::zeros();
        m[(0, 0)] = c(parts[0], 0.0);
        m[(1, 1)] = c(parts[1], 0.0);
        m[(2, 2)] = c(parts[2], 0.0);
        m[(0, 1)] = c(parts[3], parts[4]);
        m[(1, 0)] = c(parts[3], -parts[4]);
        m[(0, 2)] = c(parts[5], parts[6]);
        m[(2, 0)] = c(parts[5], -parts[6]);
        m[(1, 2)] = c(parts[7], parts[8]);
        m[(2, 1)] = c(parts[7], -parts[8]);
        m
    }

    #[test]
    fn operator_basis_identities() {
        let ops = OperatorBasis::new();
        assert_eq!(ops.sigma_ge * ops.sigma_ge, CMat3::zeros());
        assert_eq!(ops.sigma_se * ops.sigma_se, CMat3::zeros());
        assert_eq!(ops.sigma_ge.adjoint() * ops.sigma_ge, ops.projector_e);
        assert_eq!(ops.sigma_se.adjoint() * ops.sigma_se, ops.projector_e);
    }

    #[test]
    fn hamiltonian_vanishes_on_resonance_without_control() {
        let atom = AtomConfig { gamma_eg: 0.5, gamma_es: 0.5, delta: 0.0 };
        let control = ControlPulse { omega: 0.0, a: 1.0, b: 0.0 };
        assert_eq!(rotating_hamiltonian(0.3, &atom, &control, 0.0), CMat3::zeros());
    }

    #[test]
    fn hamiltonian_matrix_elements() {
        // At the control peak (t = t₀ + b) the coupling equals Ω.
        let atom = AtomConfig { gamma_eg: 0.5, gamma_es: 0.5, delta: 0.5 };
        let control = ControlPulse { omega: 0.7, a: 0.9, b: 0.6 };
        let h = rotating_hamiltonian(0.6, &atom, &control, 0.0);
        assert_eq!(h[(E, E)], c(0.5, 0.0));
        assert_eq!(h[(E, S)], c(0.7, 0.0));
        assert_eq!(h[(S, E)], c(0.7, 0.0));
        assert_eq!(h[(G, G)], c(0.0, 0.0));
        assert_eq!(h[(G, E)], c(0.0, 0.0));
        assert_eq!(h[(S, S)], c(0.0, 0.0));
        // Hermitian at any time.
        for t in [-3.0, 0.0, 0.4, 2.7] {
            assert_eq!(hermiticity_defect(&rotating_hamiltonian(t, &atom, &control, 0.0)), 0.0);
        }
    }

    #[test]
    fn excited_state_decays_at_total_rate() {
        let atom = AtomConfig { gamma_eg: 0.5, gamma_es: 0.5, delta: 0.0 };
        let control = ControlPulse { omega: 0.0, a: 1.0, b: 0.0 };
        let eff = crate::model::effective_coupling(Topology::Regular, &atom);
        let mut rho = CMat3::zeros();
        rho[(E, E)] = c(1.0, 0.0);
        let d = lindblad_rhs(&rho, 0.0, &atom, &control, 0.0, &eff);
        assert_relative_eq!(d[(E, E)].re, -1.0, max_relative = 1e-14);
        assert_relative_eq!(d[(G, G)].re, 0.5, max_relative = 1e-14);
        assert_relative_eq!(d[(S, S)].re, 0.5, max_relative = 1e-14);
        assert_eq!(d[(E, E)].im, 0.0);
    }

    #[test]
    fn ground_state_is_dark_without_pump() {
        let atom = AtomConfig { gamma_eg: 0.7, gamma_es: 0.3, delta: 0.4 };
        let control = ControlPulse { omega: 0.9, a: 0.5, b: 0.2 };
        let eff = crate::model::effective_coupling(Topology::Sagnac, &atom);
        let mut rho = CMat3::zeros();
        rho[(G, G)] = c(1.0, 0.0);
        let d = lindblad_rhs(&rho, 0.2, &atom, &control, 0.0, &eff);
        assert_eq!(d, CMat3::zeros());
    }

    #[test]
    fn coherent_rhs_reduces_to_lindblad_without_pump() {
        // Deep in the pulse tail the envelope underflows to exactly zero.
        let cfg = test_config(0.6, 0.4, 0.2, Topology::Regular, Statistics::Coherent, 1.0, 0.5);
        let rho = hermitian_from_parts([0.4, 0.3, 0.3, 0.05, 0.1, -0.04, 0.02, 0.0, 0.07]);
        let t = 400.0;
        assert_eq!(target_envelope(t, &cfg.target).re, 0.0);
        let full = coherent_rhs(&rho, t, &cfg);
        let bare = lindblad_rhs(&rho, t, &cfg.atom, &cfg.control, cfg.target.t0, &cfg.coupling);
        assert_eq!(full, bare);
    }

    #[test]
    fn coherent_pump_coherence_sign() {
        // From |g⟩⟨g| with pump amplitude x = κξ̃(t): ⟨e|ρ̇|g⟩ = −i·x.
        let cfg = test_config(0.5, 0.5, 0.0, Topology::Regular, Statistics::Coherent, 1.0, 0.0);
        let mut rho = CMat3::zeros();
        rho[(G, G)] = c(1.0, 0.0);
        let t = 0.37;
        let x = cfg.pump_amplitude() * target_envelope(t, &cfg.target).re;
        assert!(x > 0.0);
        let d = coherent_rhs(&rho, t, &cfg);
        assert_relative_eq!(d[(E, G)].im, -x, max_relative = 1e-14);
        assert_relative_eq!(d[(E, G)].re, 0.0, epsilon = 1e-16);
        // ρ̇_ge is the conjugate.
        assert_relative_eq!(d[(G, E)].im, x, max_relative = 1e-14);
    }

    #[test]
    fn fock_hierarchy_initial_derivative() {
        // From the ground hierarchy state, only ρ₀₁ picks up a source:
        // dρ₀₁ = +i·κξ̃*(t)·|g⟩⟨e|.
        let cfg = test_config(0.5, 0.5, 0.0, Topology::Regular, Statistics::Fock, 1.0, 0.0);
        let state = HierarchyState::ground();
        let t = -0.8;
        let x = cfg.coupling.kappa * target_envelope(t, &cfg.target).re;
        let d = fock_rhs(&state, t, &cfg);
        assert_eq!(d.rho11, CMat3::zeros());
        assert_eq!(d.rho00, CMat3::zeros());
        let mut expected = CMat3::zeros();
        expected[(G, E)] = c(0.0, x);
        assert!(mat_max_abs_diff(&d.rho01, &expected) < 1e-15);
    }

    #[test]
    fn decoupled_hierarchy_without_pulse() {
        // With the envelope underflowed to zero all three blocks evolve
        // under the bare Lindblad generator.
        let cfg = test_config(0.3, 0.7, -0.5, Topology::Chiral, Statistics::Fock, 1.0, 0.8);
        let state = HierarchyState {
            rho11: hermitian_from_parts([0.5, 0.2, 0.3, 0.1, -0.03, 0.0, 0.05, 0.01, 0.02]),
            rho01: mat_from_parts([
                0.1, 0.2, -0.1, 0.05, 0.3, 0.0, 0.07, -0.2, 0.11, 0.04, 0.0, 0.1, -0.3, 0.02,
                0.06, 0.0, 0.21, -0.05,
            ]),
            rho00: hermitian_from_parts([0.6, 0.1, 0.3, 0.0, 0.04, 0.02, -0.05, 0.03, 0.0]),
        };
        let t = -500.0;
        let d = fock_rhs(&state, t, &cfg);
        let args = (t, &cfg.atom, &cfg.control, cfg.target.t0, &cfg.coupling);
        assert_eq!(d.rho11, lindblad_rhs(&state.rho11, args.0, args.1, args.2, args.3, args.4));
        assert_eq!(d.rho01, lindblad_rhs(&state.rho01, args.0, args.1, args.2, args.3, args.4));
        assert_eq!(d.rho00, lindblad_rhs(&state.rho00, args.0, args.1, args.2, args.3, args.4));
    }

    #[test]
    fn min_eigenvalue_closed_form_matches_invariants() {
        let m = hermitian_from_parts([0.5, 0.2, 0.3, 0.1, -0.05, 0.02, 0.08, -0.01, 0.03]);
        let min = min_eigenvalue_hermitian(&m);
        // The returned value must be a root of the characteristic polynomial.
        let lambda = c(min, 0.0);
        let shifted = m - CMat3::identity() * lambda;
        let det = shifted.determinant();
        assert!(det.norm() < 1e-12, "det={det}");
        // And a lower bound for Rayleigh quotients.
        for v in [
            nalgebra::Vector3::new(c(1.0, 0.0), c(0.3, -0.4), c(-0.2, 0.9)),
            nalgebra::Vector3::new(c(0.0, 1.0), c(1.0, 0.0), c(0.5, 0.5)),
        ] {
            let q = (v.adjoint() * m * v)[(0, 0)].re / (v.adjoint() * v)[(0, 0)].re;
            assert!(q >= min - 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn fast_lindblad_matches_dense_form(
            parts in proptest::array::uniform18(-1.0f64..1.0),
            gamma_eg in 0.01f64..0.99,
            delta in -2.0f64..2.0,
            omega in 0.0f64..3.0,
            t in -2.0f64..2.0,
        ) {
            let atom = AtomConfig { gamma_eg, gamma_es: 1.0 - gamma_eg, delta };
            let control = ControlPulse { omega, a: 0.9, b: 0.6 };
            for topology in [Topology::Regular, Topology::Chiral, Topology::Sagnac] {
                let eff = crate::model::effective_coupling(topology, &atom);
                let rho = mat_from_parts(parts);
                let fast = lindblad_rhs(&rho, t, &atom, &control, 0.0, &eff);
                let dense = dense_lindblad(&rho, t, &atom, &control, 0.0, &eff);
                prop_assert!(mat_max_abs_diff(&fast, &dense) < 1e-13);
            }
        }

        #[test]
        fn fast_coherent_pump_matches_dense_form(
            parts in proptest::array::uniform9(-1.0f64..1.0),
            gamma_eg in 0.01f64..0.99,
            nbar in 0.0f64..2.0,
            t in -2.0f64..2.0,
        ) {
            let cfg = test_config(gamma_eg, 1.0 - gamma_eg, 0.3, Topology::Regular,
                                  Statistics::Coherent, nbar, 0.4);
            let rho = hermitian_from_parts(parts);
            let fast = coherent_rhs(&rho, t, &cfg);

            let ops = OperatorBasis::new();
            let z = target_envelope(t, &cfg.target) * cfg.pump_amplitude();
            let m = ops.sigma_ge.adjoint() * z + ops.sigma_ge * z.conj();
            let dense = dense_lindblad(&rho, t, &cfg.atom, &cfg.control, 0.0, &cfg.coupling)
                + dense_commutator(&m, &rho) * c(0.0, -1.0);
            prop_assert!(mat_max_abs_diff(&fast, &dense) < 1e-13);
        }

        #[test]
        fn fast_fock_pump_matches_dense_form(
            parts11 in proptest::array::uniform9(-1.0f64..1.0),
            parts01 in proptest::array::uniform18(-1.0f64..1.0),
            parts00 in proptest::array::uniform9(-1.0f64..1.0),
            gamma_eg in 0.01f64..0.99,
            omega in 0.0f64..2.0,
            t in -2.0f64..2.0,
        ) {
            let cfg = test_config(gamma_eg, 1.0 - gamma_eg, -0.4, Topology::Sagnac,
                                  Statistics::Fock, 1.0, omega);
            let state = HierarchyState {
                rho11: hermitian_from_parts(parts11),
                rho01: mat_from_parts(parts01),
                rho00: hermitian_from_parts(parts00),
            };
            let fast = fock_rhs(&state, t, &cfg);

            let ops = OperatorBasis::new();
            let u = target_envelope(t, &cfg.target) * cfg.coupling.kappa;
            let lind = |m: &CMat3| dense_lindblad(m, t, &cfg.atom, &cfg.control, 0.0, &cfg.coupling);
            let d00 = lind(&state.rho00);
            let d01 = lind(&state.rho01)
                + dense_commutator(&ops.sigma_ge, &state.rho00) * (u.conj() * c(0.0, -1.0));
            let d11 = lind(&state.rho11)
                + dense_commutator(&ops.sigma_ge.adjoint(), &state.rho01) * (u * c(0.0, -1.0))
                + dense_commutator(&ops.sigma_ge, &state.rho01.adjoint())
                    * (u.conj() * c(0.0, -1.0));
            prop_assert!(mat_max_abs_diff(&fast.rho00, &d00) < 1e-13);
            prop_assert!(mat_max_abs_diff(&fast.rho01, &d01) < 1e-13);
            prop_assert!(mat_max_abs_diff(&fast.rho11, &d11) < 1e-13);
        }

        #[test]
        fn trace_is_conserved(
            parts in proptest::array::uniform18(-1.0f64..1.0),
            gamma_eg in 0.01f64..0.99,
            omega in 0.0f64..2.0,
            t in -2.0f64..2.0,
        ) {
            let cfg = test_config(gamma_eg, 1.0 - gamma_eg, 0.7, Topology::Regular,
                                  Statistics::Fock, 1.0, omega);
            let rho = mat_from_parts(parts);
            let d = lindblad_rhs(&rho, t, &cfg.atom, &cfg.control, 0.0, &cfg.coupling);
            prop_assert!(trace_re(&d).abs() < 1e-14);
            prop_assert!((d[(0,0)] + d[(1,1)] + d[(2,2)]).im.abs() < 1e-14);

            let state = HierarchyState {
                rho11: mat_from_parts(parts),
                rho01: mat_from_parts(parts).adjoint(),
                rho00: mat_from_parts(parts) * c(0.3, 0.1),
            };
            let dh = fock_rhs(&state, t, &cfg);
            prop_assert!(trace_re(&dh.rho11).abs() < 1e-13);
            prop_assert!(trace_re(&dh.rho00).abs() < 1e-13);
        }

        #[test]
        fn hermiticity_propagates(
            parts11 in proptest::array::uniform9(-1.0f64..1.0),
            parts01 in proptest::array::uniform18(-1.0f64..1.0),
            parts00 in proptest::array::uniform9(-1.0f64..1.0),
            gamma_eg in 0.01f64..0.99,
            omega in 0.0f64..2.0,
            delta in -1.5f64..1.5,
            t in -2.0f64..2.0,
        ) {
            let cfg = test_config(gamma_eg, 1.0 - gamma_eg, delta, Topology::Regular,
                                  Statistics::Fock, 1.0, omega);
            let state = HierarchyState {
                rho11: hermitian_from_parts(parts11),
                rho01: mat_from_parts(parts01),
                rho00: hermitian_from_parts(parts00),
            };
            let d = fock_rhs(&state, t, &cfg);
            prop_assert!(hermiticity_defect(&d.rho11) < 1e-12);
            prop_assert!(hermiticity_defect(&d.rho00) < 1e-12);
        }

        #[test]
        fn hierarchy_rhs_is_linear(
            pa in proptest::array::uniform18(-1.0f64..1.0),
            pb in proptest::array::uniform18(-1.0f64..1.0),
            alpha in -2.0f64..2.0,
            beta in -2.0f64..2.0,
            t in -2.0f64..2.0,
        ) {
            let cfg = test_config(0.4, 0.6, 0.2, Topology::Regular, Statistics::Fock, 1.0, 0.6);
            let sa = HierarchyState {
                rho11: mat_from_parts(pa),
                rho01: mat_from_parts(pb),
                rho00: mat_from_parts(pa).adjoint(),
            };
            let sb = HierarchyState {
                rho11: mat_from_parts(pb),
                rho01: mat_from_parts(pa) * c(0.0, 1.0),
                rho00: mat_from_parts(pb).adjoint(),
            };
            let ca = c(alpha, 0.0);
            let cb = c(beta, 0.0);
            let mixed = HierarchyState {
                rho11: sa.rho11 * ca + sb.rho11 * cb,
                rho01: sa.rho01 * ca + sb.rho01 * cb,
                rho00: sa.rho00 * ca + sb.rho00 * cb,
            };
            let da = fock_rhs(&sa, t, &cfg);
            let db = fock_rhs(&sb, t, &cfg);
            let dm = fock_rhs(&mixed, t, &cfg);
            let expect11 = da.rho11 * ca + db.rho11 * cb;
            let expect01 = da.rho01 * ca + db.rho01 * cb;
            let expect00 = da.rho00 * ca + db.rho00 * cb;
            prop_assert!(mat_max_abs_diff(&dm.rho11, &expect11) < 1e-12);
            prop_assert!(mat_max_abs_diff(&dm.rho01, &expect01) < 1e-12);
            prop_assert!(mat_max_abs_diff(&dm.rho00, &expect00) < 1e-12);
        }

        #[test]
        fn min_eigenvalue_matches_characteristic_invariants(
            parts in proptest::array::uniform9(-1.0f64..1.0),
        ) {
            let m = hermitian_from_parts(parts);
            let min = min_eigenvalue_hermitian(&m);
            let det = (m - CMat3::identity() * c(min, 0.0)).determinant();
            prop_assert!(det.norm() < 1e-10, "det residual {}", det.norm());
        }
    }
}
