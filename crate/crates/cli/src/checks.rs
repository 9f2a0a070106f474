/// Suites in execution order.
pub const SUITES: [&str; 6] = ["car", "spinor", "modes", "oscillator", "large_n", "symmetries"];

/// A named check with its default tolerance and the identity it verifies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckDef {
    pub id: &'static str,
    pub tolerance: f64,
    pub identity: &'static str,
}

const fn def(id: &'static str, tolerance: f64, identity: &'static str) -> CheckDef {
    CheckDef { id, tolerance, identity }
}

pub const CHECKS: &[CheckDef] = &[
    def("car.anticommutators", 1e-14, "all 28 anticommutators of b_s, d_s, b_s†, d_s†: {c_s, c_t†} = δ_st 𝟙, the rest vanish"),
    def("car.vacuum", 1e-15, "c_s|0⟩ = 0 for all four annihilators, ‖|0⟩‖ = 1"),
    def("car.block_exponential", 1e-10, "closed block form of e^{b†Ab + d†Ad} equals the dense exponential"),
    def("car.su2_conjugation", 1e-10, "e^{-X} c_s e^X = Σ u_st c_t with X = b†Ab + d†Ad, u = e^A ∈ SU(2)"),
    def("car.phase_conjugation", 1e-10, "e^{-iY} b e^{iY} = e^{iα} b, e^{-iY} d e^{iY} = e^{iβ} d with Y = αb†b + βd†d"),
    def("car.i0_conjugation", 1e-14, "I₀ is invariant under the SU(2) and phase block exponentials"),
    def("spinor.frame_reconstruction", 1e-11, "‖ππ̄ + (m²/2)ωω̄ − p‖ / E for random on-shell momenta"),
    def("spinor.frame_normalization", 1e-12, "ω_A π^A = 1"),
    def("spinor.frame_fallback", 1e-11, "reconstruction and normalization on the near-degenerate branch"),
    def("spinor.dirac", 1e-12, "eigen-bispinors solve the momentum-space Dirac equation of their frequency"),
    def("spinor.pauli_lubanski", 1e-12, "eigen-bispinor blocks are Pauli-Lubanski eigenvectors with eigenvalue ±1/2"),
    def("spinor.wigner_unitarity", 1e-10, "u(Λ,p) u(Λ,p)† = 𝟙"),
    def("spinor.wigner_determinant", 1e-10, "det u(Λ,p) = 1"),
    def("spinor.wigner_cocycle", 1e-9, "u(Λ₁Λ₂,p) = u(Λ₁,p) u(Λ₂,Λ₁⁻¹p)"),
    def("spinor.bispinor_transformation", 1e-9, "Λ φ^(t)(Λ⁻¹p) = Σ_s φ^(s)(p) u_st(Λ,p)"),
    def("modes.resolution_of_unity", 1e-14, "Σ_i w_i I_{p_i} = 𝟙"),
    def("modes.reducible_car", 1e-13, "{c(p_i,s), c(p_j,t)†} = δ_ij δ_st I_{p_i}/w_i, {c, c} = 0 (relative to max|c|²)"),
    def("modes.centrality", 1e-15, "[I_{p_i}, c(p_j,s)] = 0"),
    def("modes.smeared_car", 1e-13, "{c(f), c(g)†} = I(f,g), different species anticommute"),
    def("modes.spectral_field", 1e-13, "Fourier and spectral forms of Ψ(x) and Ψ^c(x) agree"),
    def("modes.plane_wave_unitarity", 1e-14, "W(x) W(x)† = 𝟙"),
    def("oscillator.reducible_car", 1e-13, "{ůc(f), ůc(g)†} = ůI(f,g), {ůc(f), ůc(g)} = 0, species anticommute"),
    def("oscillator.centrality", 1e-15, "[ůI(f,f), ůc(g)] = [ůI(f,f), ůc(g)†] = 0"),
    def("oscillator.vacuum", 1e-14, "ůc(f)|ůO⟩ = 0 and ‖ůO‖ = 1"),
    def("oscillator.sector_engine", 1e-12, "sector evaluation of vacuum matrix elements equals the explicit tensor product"),
    def("oscillator.scalar_product", 1e-13, "⟨ůO|ůc(f) ůc(g)†|ůO⟩ = ⟨f|g⟩_Z, zero across species"),
    def("large_n.deviation", 1e-13, "M = 1: ⟨ůO|ůc(f) ůc(g)†|ůO⟩ − ⟨f|g⟩_Z vanishes for every N"),
    def("large_n.monotone", 1e-14, "|LHS(N) − det Gram| does not grow with N (residual: growth over the previous N)"),
    def("large_n.antisymmetry", 1e-13, "LHS(N) changes sign when f_1 and f_2 are swapped"),
    def("symmetries.generator_hermiticity", 1e-14, "P_a, Q and S are Hermitian"),
    def("symmetries.generator_centrality", 1e-15, "P_a, Q and S commute with every I_p"),
    def("symmetries.translation_phase", 1e-12, "U_{1,y}† c(p) U_{1,y} = e^{iy·p} c(p) (relative to max|c|)"),
    def("symmetries.translation_i0", 1e-15, "U_{1,y}† I₀ U_{1,y} = I₀"),
    def("symmetries.translation_group_law", 1e-13, "U_{1,y} U_{1,y'} = U_{1,y+y'}"),
    def("symmetries.field_translation", 1e-11, "ůU† ůΨ(x) ůU = ůΨ(x − y)"),
    def("symmetries.boost_mixing", 1e-10, "U_{Λ,0}† c(p,s) U_{Λ,0} = Σ_t u_st(Λ,p) c(Λ⁻¹p,t) on interior modes (relative to max|c|)"),
    def("symmetries.boost_i0", 1e-15, "U_{Λ,0}† I₀ U_{Λ,0} = I₀ on interior modes"),
    def("symmetries.field_covariance", 1e-9, "ůU† ůΨ(x) ůU = Λ ůΨ(Λ⁻¹(x − y)) on interior modes"),
    def("symmetries.vacuum_covariance", 1e-12, "U_{Λ,y}|O⟩ = Σ_i √w_i e^{−2iy·p_i} O(Λ⁻¹p_i)|i,0000⟩"),
    def("symmetries.vacuum_centrality", 1e-15, "the phase e^{−2iy·p} acts through a central unitary"),
    def("symmetries.gauge", 1e-12, "e^{iφQ} Ψ e^{−iφQ} = e^{−ie₀φ} Ψ, conjugate field with e^{+ie₀φ}, I₀ invariant"),
    def("symmetries.momentum_commutators", 1e-13, "[ůP_a, ůc(p)†] = p_a ůc(p)† (relative to max|ůc†|)"),
    def("symmetries.charge_commutators", 1e-13, "[ůQ, ůb†] = +e₀ ůb†, [ůQ, ůd†] = −e₀ ůd† (relative to max|ůc†|)"),
    def("symmetries.spin_commutators", 1e-13, "[ůS, ůc_s†] = (s/2) ůc_s† (relative to max|ůc†|)"),
    def("symmetries.vacuum_spin", 1e-15, "ůS|ůO⟩ = 0"),
    def("symmetries.vacuum_charge", 1e-13, "⟨ůO|ůQ|ůO⟩ = 2Ne₀"),
    def("symmetries.vacuum_energy", 1e-12, "quadrature vacuum energy equals ⟨ůO|ůP₀|ůO⟩"),
    def("symmetries.rest_mode_energy", 1e-12, "rest-mode vacuum with N_F = 3 has energy −6m"),
    def("symmetries.energy_cancellation", 1e-10, "a bosonic sector with N_B = 3, |k| = 2m cancels the rest-mode energy"),
];

pub fn lookup(id: &str) -> Option<&'static CheckDef> {
    CHECKS.iter().find(|c| c.id == id)
}
