//! Poincaré, gauge and spin generators on the single-oscillator space, their
//! lifts to N oscillators, vacuum covariance and the vacuum energy.
//!
//! Lifts: generators are additive (`Σ_k I ⊗ … ⊗ G ⊗ … ⊗ I`), group elements
//! are tensor powers, field operators use the `I₀`-twisted extension.

use serde::{Deserialize, Serialize};

use crate::engine::{c, commutator, SparseOperator, SparseState, C64};
use crate::error::{Error, Result};
use crate::jw::{bilinear_exponential, Species, Spin, REGISTER_DIM, VACUUM_INDEX};
use crate::modes::{mix_components, FieldPoint, ModeAmplitude, MomentumLattice, SingleOscillatorSpace};
use crate::oscillator::{NRegister, VacuumProfile};
use crate::spinor::{wigner_matrix, Sl2c, SpacetimePoint};

/// `Σ_i coeff_i |i⟩⟨i| ⊗ reg_op`, reg_op diagonal in the register basis.
fn mode_diagonal<F: Fn(usize, usize) -> C64>(space: &SingleOscillatorSpace, entry: F) -> SparseOperator {
    let diag: Vec<C64> = (0..space.dim()).map(|k| entry(k / REGISTER_DIM, k % REGISTER_DIM)).collect();
    SparseOperator::diagonal(&diag)
}

fn register_diagonal(op: &SparseOperator) -> Vec<f64> {
    op.diagonal_entries()
        .expect("register number operators are diagonal")
        .iter()
        .map(|v| v.re)
        .collect()
}

/// `n_b + n_d − 2` per register basis state.
fn energy_counts(space: &SingleOscillatorSpace) -> Vec<f64> {
    let reg = space.register();
    let nb = register_diagonal(&reg.total_number(Species::Negaton));
    let nd = register_diagonal(&reg.total_number(Species::Positon));
    (0..REGISTER_DIM).map(|r| nb[r] + nd[r] - 2.0).collect()
}

/// `P_a = Σ_i w_i p_{i,a} |p_i⟩⟨p_i| ⊗ (b†b + d†d − 2𝐈)`, lower index `a`.
pub fn four_momentum(space: &SingleOscillatorSpace) -> [SparseOperator; 4] {
    let counts = energy_counts(space);
    let lower: Vec<[f64; 4]> = space.lattice().points().iter().map(|p| p.lower()).collect();
    let component = |a: usize| mode_diagonal(space, |i, r| c(lower[i][a] * counts[r], 0.0));
    [component(0), component(1), component(2), component(3)]
}

/// `U_{1,y} = e^{iy·P}`, diagonal with phases `e^{i(y·p_i)(n_b + n_d − 2)}`.
pub fn translation_unitary(space: &SingleOscillatorSpace, y: &SpacetimePoint) -> SparseOperator {
    let counts = energy_counts(space);
    let yp: Vec<f64> = space.lattice().points().iter().map(|p| p.dot(y)).collect();
    mode_diagonal(space, |i, r| c(0.0, yp[i] * counts[r]).exp())
}

/// `Q = e₀ Σ_i w_i |p_i⟩⟨p_i| ⊗ (b†b − d†d + 2𝐈)`.
pub fn charge_operator(space: &SingleOscillatorSpace, e0: f64) -> SparseOperator {
    let reg = space.register();
    let nb = register_diagonal(&reg.total_number(Species::Negaton));
    let nd = register_diagonal(&reg.total_number(Species::Positon));
    mode_diagonal(space, |_, r| c(e0 * (nb[r] - nd[r] + 2.0), 0.0))
}

/// `e^{iφQ}`.
pub fn gauge_unitary(space: &SingleOscillatorSpace, e0: f64, phi: f64) -> SparseOperator {
    let q = charge_operator(space, e0).diagonal_entries().expect("diagonal charge");
    SparseOperator::diagonal(&q.iter().map(|v| c(0.0, phi * v.re).exp()).collect::<Vec<_>>())
}

/// `S = ½ Σ_i w_i |p_i⟩⟨p_i| ⊗ (b₊†b₊ − b₋†b₋ + d₊†d₊ − d₋†d₋)`.
pub fn spin_operator(space: &SingleOscillatorSpace) -> SparseOperator {
    let reg = space.register();
    let mut count = vec![0.0; REGISTER_DIM];
    for n in Species::ALL {
        for s in Spin::ALL {
            for (r, v) in register_diagonal(&reg.number(n, s)).into_iter().enumerate() {
                count[r] += s.value() * v;
            }
        }
    }
    mode_diagonal(space, |_, r| c(count[r], 0.0))
}

/// `P_a`, `Q` and `S` on one single-oscillator space.
#[derive(Clone, Debug)]
pub struct GeneratorBundle {
    pub momentum: [SparseOperator; 4],
    pub charge: SparseOperator,
    pub spin: SparseOperator,
    pub e0: f64,
}

impl GeneratorBundle {
    pub fn new(space: &SingleOscillatorSpace, e0: f64) -> Self {
        Self {
            momentum: four_momentum(space),
            charge: charge_operator(space, e0),
            spin: spin_operator(space),
            e0,
        }
    }

    pub fn all(&self) -> Vec<&SparseOperator> {
        self.momentum.iter().chain([&self.charge, &self.spin]).collect()
    }

    /// Largest `‖G − G†‖` over the bundle.
    pub fn hermiticity_residual(&self) -> f64 {
        self.all()
            .iter()
            .map(|g| g.max_abs_diff(&g.adjoint()).expect("square"))
            .fold(0.0, f64::max)
    }

    /// Largest `‖[G, I_{p_i}]‖` over the bundle and all lattice points.
    pub fn centrality_residual(&self, space: &SingleOscillatorSpace) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..space.modes() {
            let ip = space.mode_identity(i)?;
            for g in self.all() {
                worst = worst.max(commutator(g, &ip)?.max_abs());
            }
        }
        Ok(worst)
    }
}

/// Boost along `z` by `k` rapidity steps of a rapidity lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostStep {
    pub k: i64,
    pub lambda: Sl2c,
}

impl BoostStep {
    pub fn new(lattice: &MomentumLattice, k: i64) -> Result<Self> {
        let r = lattice
            .rapidity()
            .ok_or_else(|| Error::Boundary("boosts need a rapidity lattice".into()))?;
        if k.abs() > r.j_max - r.j_min {
            return Err(Error::Boundary(format!("boost step {k} leaves the lattice entirely")));
        }
        Ok(Self {
            k,
            lambda: Sl2c::boost_z(k as f64 * r.delta_eta),
        })
    }

    /// Index of `Λ⁻¹p_i`, if it lies on the lattice.
    pub fn source(&self, lattice: &MomentumLattice, i: usize) -> Option<usize> {
        lattice.index_of_step(lattice.step_of(i)? - self.k)
    }

    /// Index of `Λp_i`, if it lies on the lattice.
    pub fn target(&self, lattice: &MomentumLattice, i: usize) -> Option<usize> {
        lattice.index_of_step(lattice.step_of(i)? + self.k)
    }

    /// Modes `q` with `Λq` still on the lattice; covariance is asserted there.
    pub fn interior(&self, lattice: &MomentumLattice) -> Vec<bool> {
        (0..lattice.len()).map(|i| self.target(lattice, i).is_some()).collect()
    }
}

/// `U_{Λ,0} = [Σ_i |i⟩⟨i| ⊗ D(u(Λ,p_i))]·[Σ_i |i⟩⟨i−k| ⊗ 𝐈]`, where `D(u)` is
/// the block exponential with `e^{-X} c_s e^{X} = Σ u_{ss'} c_{s'}`. Columns
/// whose source lies off the lattice are dropped.
pub fn boost_unitary(space: &SingleOscillatorSpace, step: &BoostStep) -> Result<SparseOperator> {
    let lattice = space.lattice();
    let mut triplets = Vec::new();
    for i in 0..space.modes() {
        let Some(src) = step.source(lattice, i) else {
            continue;
        };
        let u = wigner_matrix(&step.lambda, &lattice.points()[i])?;
        let block = bilinear_exponential(&u.0, &u.0);
        for (r, col, v) in block.iter() {
            triplets.push((space.index(i, r), space.index(src, col), v));
        }
    }
    SparseOperator::from_triplets(space.dim(), space.dim(), triplets)
}

/// `U_{Λ,y} = U_{1,y} U_{Λ,0}`.
pub fn poincare_unitary(space: &SingleOscillatorSpace, step: &BoostStep, y: &SpacetimePoint) -> Result<SparseOperator> {
    translation_unitary(space, y).matmul(&boost_unitary(space, step)?)
}

/// Keeps rows and columns whose every factor sits on an `interior` mode.
fn interior_mask(op: &SparseOperator, interior: &[bool], factors: usize) -> SparseOperator {
    let local = interior.len() * REGISTER_DIM;
    op.mask(|mut idx| {
        for _ in 0..factors {
            if !interior[(idx % local) / REGISTER_DIM] {
                return false;
            }
            idx /= local;
        }
        true
    })
}

/// Residuals of the translation identities.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TranslationReport {
    /// `U†c(p_i,s)U − e^{iy·p_i} c(p_i,s)` over all modes, spins and species,
    /// relative to the largest entry of `c(p_i,s)`.
    pub ladder_phase: f64,
    /// `U†I₀U − I₀`.
    pub i0: f64,
    /// `U_{1,y}U_{1,y'} − U_{1,y+y'}`.
    pub group_law: f64,
}

pub fn translation_check(space: &SingleOscillatorSpace, y: &SpacetimePoint, y2: &SpacetimePoint) -> Result<TranslationReport> {
    let u = translation_unitary(space, y);
    let u_dag = u.adjoint();
    let mut ladder_phase: f64 = 0.0;
    for (i, p) in space.lattice().points().iter().enumerate() {
        let phase = c(0.0, p.dot(y)).exp();
        for n in Species::ALL {
            for s in Spin::ALL {
                let a = space.mode_annihilator(i, s, n)?;
                let lhs = u_dag.matmul(&a)?.matmul(&u)?;
                ladder_phase = ladder_phase.max(lhs.max_abs_diff(&a.scale(phase))? / a.max_abs());
            }
        }
    }
    let i0 = space.i0();
    let i0_res = u_dag.matmul(&i0)?.matmul(&u)?.max_abs_diff(&i0)?;
    let composed = u.matmul(&translation_unitary(space, y2))?;
    let group_law = composed.max_abs_diff(&translation_unitary(space, &y.offset(y2, 1.0)))?;
    Ok(TranslationReport {
        ladder_phase,
        i0: i0_res,
        group_law,
    })
}

/// `max_α ‖ůU†ůΨ_α(x)ůU − ůΨ_α(x − y)‖` with `ůU = U_{1,y}^{⊗N}`.
pub fn field_translation_check(reg: &NRegister, y: &SpacetimePoint, x: &FieldPoint) -> Result<f64> {
    let space = reg.space();
    let u = reg.lift_product(&translation_unitary(space, y))?;
    let u_dag = u.adjoint();
    let shifted = x.offset(y, -1.0);
    let mut worst: f64 = 0.0;
    for alpha in 0..4 {
        let psi = reg.extend(&space.field_operator(x, alpha, false)?)?;
        let lhs = u_dag.matmul(&psi)?.matmul(&u)?;
        let rhs = reg.extend(&space.field_operator(&shifted, alpha, false)?)?;
        worst = worst.max(lhs.max_abs_diff(&rhs)?);
    }
    Ok(worst)
}

/// Residuals of the boost identities on interior modes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoostReport {
    /// `U†c_n(p_j,s)U − Σ_t u_{st}(Λ,p_j) c_n(Λ⁻¹p_j,t)` for `p_j`, `Λ⁻¹p_j` on the lattice,
    /// relative to the largest entry of `c_n(p_j,s)`.
    pub ladder_mixing: f64,
    /// `U†I₀U − I₀` on interior modes.
    pub i0: f64,
    /// Number of modes the comparison covers.
    pub interior_modes: usize,
}

pub fn boost_check(space: &SingleOscillatorSpace, step: &BoostStep) -> Result<BoostReport> {
    let lattice = space.lattice();
    let u_op = boost_unitary(space, step)?;
    let u_dag = u_op.adjoint();
    let mut ladder_mixing: f64 = 0.0;
    for j in 0..space.modes() {
        let Some(src) = step.source(lattice, j) else {
            continue;
        };
        let u = wigner_matrix(&step.lambda, &lattice.points()[j])?;
        // c(p) = (1/w)|p⟩⟨p| ⊗ c; equal weights on a rapidity lattice.
        let ratio = lattice.weights()[src] / lattice.weights()[j];
        for n in Species::ALL {
            for s in Spin::ALL {
                let a = space.mode_annihilator(j, s, n)?;
                let lhs = u_dag.matmul(&a)?.matmul(&u_op)?;
                let mut rhs = SparseOperator::zeros(space.dim(), space.dim());
                for t in Spin::ALL {
                    let coeff = u.0[(s.index(), t.index())] * ratio;
                    rhs = rhs.add_scaled(&space.mode_annihilator(src, t, n)?, coeff)?;
                }
                ladder_mixing = ladder_mixing.max(lhs.max_abs_diff(&rhs)? / a.max_abs());
            }
        }
    }
    let interior = step.interior(lattice);
    let i0 = space.i0();
    let conj = u_dag.matmul(&i0)?.matmul(&u_op)?;
    let i0_res = interior_mask(&conj, &interior, 1).max_abs_diff(&interior_mask(&i0, &interior, 1))?;
    Ok(BoostReport {
        ladder_mixing,
        i0: i0_res,
        interior_modes: interior.iter().filter(|&&b| b).count(),
    })
}

/// `max_α ‖ůU†ůΨ_α(x)ůU − Λ_α{}^β ůΨ_β(Λ⁻¹(x − y))‖` on interior modes, with
/// `ůU = (U_{1,y}U_{Λ,0})^{⊗N}`.
pub fn field_covariance_check(
    reg: &NRegister,
    step: &BoostStep,
    y: &SpacetimePoint,
    x: &FieldPoint,
) -> Result<f64> {
    let space = reg.space();
    let u = reg.lift_product(&poincare_unitary(space, step, y)?)?;
    let u_dag = u.adjoint();
    let source = step.lambda.inverse().act_point(&x.offset(y, -1.0));
    let psi_x = space.field_components(x, false)?;
    let psi_src = mix_components(&step.lambda.bispinor(), &space.field_components(&source, false)?)?;
    let interior = step.interior(space.lattice());
    let mut worst: f64 = 0.0;
    for alpha in 0..4 {
        let lhs = u_dag.matmul(&reg.extend(&psi_x[alpha])?)?.matmul(&u)?;
        let rhs = reg.extend(&psi_src[alpha])?;
        let lhs = interior_mask(&lhs, &interior, reg.n());
        let rhs = interior_mask(&rhs, &interior, reg.n());
        worst = worst.max(lhs.max_abs_diff(&rhs)?);
    }
    Ok(worst)
}

/// `(Tf)(p_j, s) = Σ_t u_{st}(Λ,p_j) f(Λ⁻¹p_j, t)`; errors if `f` has support
/// that the boost would push off the lattice.
pub fn transform_amplitude(space: &SingleOscillatorSpace, step: &BoostStep, f: &ModeAmplitude) -> Result<ModeAmplitude> {
    let lattice = space.lattice();
    for i in 0..f.len() {
        let supported = Spin::ALL.iter().any(|&s| f.get(i, s) != c(0.0, 0.0));
        if supported && step.target(lattice, i).is_none() {
            return Err(Error::Boundary(format!("amplitude supported on boundary mode {i}")));
        }
    }
    let mut out = ModeAmplitude::zeros(f.len());
    for j in 0..f.len() {
        if let Some(src) = step.source(lattice, j) {
            let u = wigner_matrix(&step.lambda, &lattice.points()[j])?;
            for s in Spin::ALL {
                let v: C64 = Spin::ALL.iter().map(|&t| u.0[(s.index(), t.index())] * f.get(src, t)).sum();
                out.set(j, s, v);
            }
        }
    }
    Ok(out)
}

/// Residuals of the gauge identities.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GaugeReport {
    /// `e^{iφQ}Ψ_α e^{−iφQ} − e^{−ie₀φ}Ψ_α`.
    pub field: f64,
    /// `e^{iφQ}Ψ^c_α e^{−iφQ} − e^{+ie₀φ}Ψ^c_α`.
    pub conjugate_field: f64,
    /// `e^{iφQ}I₀e^{−iφQ} − I₀`.
    pub i0: f64,
}

impl GaugeReport {
    pub fn max_residual(&self) -> f64 {
        self.field.max(self.conjugate_field).max(self.i0)
    }
}

/// Gauge phases of the fields. With `[Q, b†] = +e₀b†` the field picks up
/// `e^{−ie₀φ}` under `X ↦ e^{iφQ} X e^{−iφQ}`.
pub fn gauge_check(space: &SingleOscillatorSpace, e0: f64, phi: f64, x: &FieldPoint) -> Result<GaugeReport> {
    let g = gauge_unitary(space, e0, phi);
    let g_dag = g.adjoint();
    let conj = |op: &SparseOperator| g.matmul(op).and_then(|t| t.matmul(&g_dag));
    let mut report = GaugeReport::default();
    for alpha in 0..4 {
        let psi = space.field_operator(x, alpha, false)?;
        let res = conj(&psi)?.max_abs_diff(&psi.scale(c(0.0, -e0 * phi).exp()))?;
        report.field = report.field.max(res);
        let psi_c = space.field_operator(x, alpha, true)?;
        let res = conj(&psi_c)?.max_abs_diff(&psi_c.scale(c(0.0, e0 * phi).exp()))?;
        report.conjugate_field = report.conjugate_field.max(res);
    }
    let i0 = space.i0();
    report.i0 = conj(&i0)?.max_abs_diff(&i0)?;
    Ok(report)
}

/// Residuals of the lifted commutation relations and vacuum checks. Commutator
/// residuals are relative to the largest entry of `ůc†`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GeneratorReport {
    /// `[ůP_a, ůc†] − p_a ůc†`.
    pub momentum: f64,
    /// `[ůQ, ůb†] − e₀ůb†` and `[ůQ, ůd†] + e₀ůd†`.
    pub charge: f64,
    /// `[ůS, ůc_s†] − (s/2) ůc_s†`.
    pub spin: f64,
    /// `‖ůS|ůO⟩‖`.
    pub vacuum_spin: f64,
    /// `⟨ůO|ůQ|ůO⟩ − 2Ne₀`.
    pub vacuum_charge: f64,
}

pub fn generator_check(reg: &NRegister, profile: &VacuumProfile, e0: f64) -> Result<GeneratorReport> {
    let space = reg.space();
    let bundle = GeneratorBundle::new(space, e0);
    let p: Vec<SparseOperator> = bundle.momentum.iter().map(|g| reg.lift_additive(g)).collect::<Result<_>>()?;
    let q = reg.lift_additive(&bundle.charge)?;
    let s_op = reg.lift_additive(&bundle.spin)?;
    let mut report = GeneratorReport::default();
    for (i, pt) in space.lattice().points().iter().enumerate() {
        let lower = pt.lower();
        for n in Species::ALL {
            for s in Spin::ALL {
                let cd = reg.extend(&space.mode_creator(i, s, n)?)?;
                let scale = cd.max_abs();
                for a in 0..4 {
                    let res = commutator(&p[a], &cd)?.max_abs_diff(&cd.scale_real(lower[a]))? / scale;
                    report.momentum = report.momentum.max(res);
                }
                let sign = if n == Species::Negaton { 1.0 } else { -1.0 };
                let res = commutator(&q, &cd)?.max_abs_diff(&cd.scale_real(sign * e0))? / scale;
                report.charge = report.charge.max(res);
                let res = commutator(&s_op, &cd)?.max_abs_diff(&cd.scale_real(s.value()))? / scale;
                report.spin = report.spin.max(res);
            }
        }
    }
    let vac = reg.vacuum_state(profile)?;
    report.vacuum_spin = s_op.apply(&vac)?.norm();
    let qv = vac.inner(&q.apply(&vac)?)?;
    report.vacuum_charge = (qv - c(2.0 * reg.n() as f64 * e0, 0.0)).norm();
    Ok(report)
}

/// Result of transforming the single-oscillator vacuum by `U_{Λ,y}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VacuumCovariance {
    /// Profile `O(Λ⁻¹p_i)` read off after removing the phases.
    pub transformed: Vec<C64>,
    /// Phase on each mode, `e^{−2iy·p_i}`.
    pub phases: Vec<C64>,
    /// `U_{Λ,y}|O⟩ − Σ_i √w_i e^{−2iy·p_i} O(Λ⁻¹p_i) |i,0000⟩`.
    pub state: f64,
    /// Distance of `transformed` from the index-shifted profile.
    pub shift: f64,
    /// `C U_{Λ,y}|O⟩ − U_{Λ,0}|O⟩` with the central unitary `C = Σ_i e^{2iy·p_i}|i⟩⟨i| ⊗ 𝐈`.
    pub central: f64,
    /// `‖[C, c_n(p_i,s)]‖` over all mode operators.
    pub centrality: f64,
}

pub fn vacuum_covariance(
    space: &SingleOscillatorSpace,
    profile: &VacuumProfile,
    step: &BoostStep,
    y: &SpacetimePoint,
) -> Result<VacuumCovariance> {
    let lattice = space.lattice();
    for (i, o) in profile.values().iter().enumerate() {
        if *o != c(0.0, 0.0) && step.target(lattice, i).is_none() {
            return Err(Error::Boundary(format!("vacuum profile supported on boundary mode {i}")));
        }
    }
    let vac = profile.local_state(space)?;
    let moved = poincare_unitary(space, step, y)?.apply(&vac)?;
    let phases: Vec<C64> = lattice.points().iter().map(|p| c(0.0, -2.0 * p.dot(y)).exp()).collect();
    let shifted: Vec<C64> = (0..space.modes())
        .map(|j| step.source(lattice, j).map_or(c(0.0, 0.0), |s| profile.values()[s]))
        .collect();
    let expect = SparseState::from_entries(
        space.dim(),
        (0..space.modes()).map(|j| (space.index(j, VACUUM_INDEX), phases[j] * shifted[j] * lattice.weights()[j].sqrt())),
    )?;
    let state = moved.max_abs_diff(&expect)?;
    let transformed: Vec<C64> = (0..space.modes())
        .map(|j| moved.get(space.index(j, VACUUM_INDEX)) * phases[j].conj() / lattice.weights()[j].sqrt())
        .collect();
    let shift = transformed
        .iter()
        .zip(&shifted)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let central_op = space.diagonal_lift(&phases.iter().map(|p| p.conj()).collect::<Vec<_>>(), &space.register().identity);
    let central = central_op
        .apply(&moved)?
        .max_abs_diff(&boost_unitary(space, step)?.apply(&vac)?)?;
    let mut centrality: f64 = 0.0;
    for i in 0..space.modes() {
        for n in Species::ALL {
            for s in Spin::ALL {
                centrality = centrality.max(commutator(&central_op, &space.mode_annihilator(i, s, n)?)?.max_abs());
            }
        }
    }
    Ok(VacuumCovariance {
        transformed,
        phases,
        state,
        shift,
        central,
        centrality,
    })
}

/// Massless bosonic sector entering the vacuum energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BosonicSector {
    pub n_b: usize,
    pub momenta: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub z: Vec<f64>,
}

/// `N_B Σ_i w_i |k_i| Z_B(k_i) − 2 N_F Σ_i w_i E_i Z_F(p_i)`.
pub fn vacuum_energy(n_f: usize, z_f: &[f64], lattice: &MomentumLattice, bosons: Option<&BosonicSector>) -> Result<f64> {
    if z_f.len() != lattice.len() {
        return Err(Error::Shape {
            op: "vacuum_energy",
            lhs: (lattice.len(), 1),
            rhs: (z_f.len(), 1),
        });
    }
    if z_f.iter().any(|&z| !(z >= 0.0)) {
        return Err(Error::Config("Z_F entries must be nonnegative".into()));
    }
    let fermions: f64 = lattice
        .points()
        .iter()
        .zip(lattice.weights())
        .zip(z_f)
        .map(|((p, w), z)| w * p.e * z)
        .sum();
    let mut total = -2.0 * n_f as f64 * fermions;
    if let Some(b) = bosons {
        if b.momenta.len() != b.weights.len() || b.momenta.len() != b.z.len() {
            return Err(Error::Shape {
                op: "vacuum_energy",
                lhs: (b.momenta.len(), 1),
                rhs: (b.z.len(), 1),
            });
        }
        if b.z.iter().any(|&z| !(z >= 0.0)) {
            return Err(Error::Config("Z_B entries must be nonnegative".into()));
        }
        let bosons: f64 = b
            .momenta
            .iter()
            .zip(&b.weights)
            .zip(&b.z)
            .map(|((k, w), z)| w * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt() * z)
            .sum();
        total += b.n_b as f64 * bosons;
    }
    Ok(total)
}

/// `⟨ůO|ůP₀|ůO⟩ = N ⟨O|P₀|O⟩` for a normalized profile, from the operator `P₀`.
pub fn vacuum_energy_expectation(space: &SingleOscillatorSpace, profile: &VacuumProfile, n: usize) -> Result<f64> {
    let vac = profile.local_state(space)?;
    let p0 = &four_momentum(space)[0];
    Ok(n as f64 * vac.inner(&p0.apply(&vac)?)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::matrix_exponential;
    use crate::modes::{build_lattice, LatticeSpec};
    use crate::oscillator::ProfileShape;
    use crate::spinor::{classical_solution, FourMomentum};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(j: i64, d: f64) -> SingleOscillatorSpace {
        SingleOscillatorSpace::new(build_lattice(&LatticeSpec::rapidity(1.0, j, d)).unwrap()).unwrap()
    }

    #[test]
    fn generators_are_hermitian_and_central() {
        let sp = space(2, 0.4);
        let g = GeneratorBundle::new(&sp, 1.3);
        assert!(g.hermiticity_residual() <= 1e-14);
        assert_eq!(g.centrality_residual(&sp).unwrap(), 0.0);
        // Spin eigenvalues on the half-integer grid.
        for v in g.spin.diagonal_entries().unwrap() {
            assert_eq!((2.0 * v.re).fract(), 0.0);
            assert!(v.re.abs() <= 1.0);
        }
    }

    #[test]
    fn momentum_commutators_and_vacuum() {
        let sp = space(2, 0.4);
        let p = four_momentum(&sp);
        for (i, pt) in sp.lattice().points().iter().enumerate() {
            for n in Species::ALL {
                for s in Spin::ALL {
                    let cd = sp.mode_creator(i, s, n).unwrap();
                    for a in 0..4 {
                        let res = commutator(&p[a], &cd).unwrap().max_abs_diff(&cd.scale_real(pt.lower()[a])).unwrap();
                        assert!(res <= 1e-13);
                    }
                }
            }
        }
        let prof = VacuumProfile::from_shape(sp.lattice(), &ProfileShape::Gaussian { center: 0.1, width: 0.5 }).unwrap();
        let vac = prof.local_state(&sp).unwrap();
        for a in 0..4 {
            let expect = SparseState::from_entries(
                sp.dim(),
                sp.lattice().points().iter().enumerate().map(|(i, pt)| {
                    let w = sp.lattice().weights()[i];
                    (sp.index(i, VACUUM_INDEX), prof.values()[i] * (-2.0 * w.sqrt() * pt.lower()[a]))
                }),
            )
            .unwrap();
            // P_a|O⟩ = −2 Σ_i w_i p_{i,a} O_i |p_i,0000⟩ with |p_i⟩ = |i⟩/√w_i.
            assert!(p[a].apply(&vac).unwrap().max_abs_diff(&expect).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn translation_is_exponential_of_momentum() {
        let sp = space(1, 0.4);
        let y = SpacetimePoint::new(0.3, 0.0, 0.0, -0.8);
        let p = four_momentum(&sp);
        let yp = p[0]
            .scale_real(y.t)
            .add_scaled(&p[1], c(y.x, 0.0))
            .unwrap()
            .add_scaled(&p[2], c(y.y, 0.0))
            .unwrap()
            .add_scaled(&p[3], c(y.z, 0.0))
            .unwrap();
        let dense = matrix_exponential(&yp.scale(c(0.0, 1.0))).unwrap();
        assert!(dense.max_abs_diff(&translation_unitary(&sp, &y)).unwrap() <= 1e-12);
    }

    #[test]
    fn translation_identities() {
        let sp = space(6, 0.4);
        let y = SpacetimePoint::new(0.7, 0.2, -0.1, 1.1);
        let r = translation_check(&sp, &y, &SpacetimePoint::new(-0.3, 0.0, 0.5, 0.2)).unwrap();
        assert!(r.ladder_phase <= 1e-12, "{r:?}");
        assert_eq!(r.i0, 0.0);
        assert!(r.group_law <= 1e-13);
        let zero = translation_check(&sp, &SpacetimePoint::origin(), &SpacetimePoint::origin()).unwrap();
        assert_eq!(zero.ladder_phase, 0.0);

        let small = space(1, 0.4);
        let reg = NRegister::new(small, 2).unwrap();
        let res = field_translation_check(&reg, &y, &FieldPoint::new(0.2, 0.0, 0.0, 0.5)).unwrap();
        assert!(res <= 1e-11);
    }

    #[test]
    fn boost_identities() {
        let sp = space(6, 0.4);
        let id = BoostStep::new(sp.lattice(), 0).unwrap();
        let u0 = boost_unitary(&sp, &id).unwrap();
        assert!(u0.max_abs_diff(&sp.identity()).unwrap() <= 1e-15);
        for k in [1, -1, 2] {
            let step = BoostStep::new(sp.lattice(), k).unwrap();
            let r = boost_check(&sp, &step).unwrap();
            assert!(r.ladder_mixing <= 1e-10, "{r:?}");
            assert_eq!(r.i0, 0.0);
            assert_eq!(r.interior_modes, 13 - k.unsigned_abs() as usize);
        }
        assert!(BoostStep::new(sp.lattice(), 13).is_err());
        let grid = build_lattice(&LatticeSpec::grid(1.0, 2, 0.5)).unwrap();
        assert!(matches!(BoostStep::new(&grid, 1), Err(Error::Boundary(_))));
    }

    #[test]
    fn field_covariance() {
        let sp = space(3, 0.4);
        let reg = NRegister::new(sp.clone(), 1).unwrap();
        let x0 = FieldPoint::origin();
        let id = BoostStep::new(sp.lattice(), 0).unwrap();
        assert!(field_covariance_check(&reg, &id, &x0, &x0).unwrap() <= 1e-14);
        let step = BoostStep::new(sp.lattice(), 1).unwrap();
        assert!(field_covariance_check(&reg, &step, &x0, &x0).unwrap() <= 1e-9);
        let x = FieldPoint::new(0.4, 0.1, 0.0, -0.9);
        assert!(field_covariance_check(&reg, &step, &x0, &x).unwrap() <= 1e-9);

        let small = space(1, 0.4);
        let reg2 = NRegister::new(small.clone(), 2).unwrap();
        let step = BoostStep::new(small.lattice(), -1).unwrap();
        let y = SpacetimePoint::new(0.3, 0.0, 0.2, 0.6);
        assert!(field_covariance_check(&reg2, &step, &y, &x).unwrap() <= 1e-9);
    }

    #[test]
    fn passive_amplitude_transformation() {
        let sp = space(4, 0.4);
        let step = BoostStep::new(sp.lattice(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let interior = step.interior(sp.lattice());
        let mut draw = || {
            ModeAmplitude::from_fn(sp.modes(), |i, _| {
                if interior[i] {
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    c(0.0, 0.0)
                }
            })
        };
        let (f, g) = (draw(), draw());
        let (tf, tg) = (transform_amplitude(&sp, &step, &f).unwrap(), transform_amplitude(&sp, &step, &g).unwrap());
        let x = SpacetimePoint::new(0.5, 0.3, -0.2, 0.8);
        let psi = classical_solution(sp.lattice(), &f, &g, &x, false).unwrap();
        let moved = classical_solution(sp.lattice(), &tf, &tg, &step.lambda.act_point(&x), false).unwrap();
        let expect = step.lambda.bispinor() * psi.components();
        assert!((moved.components() - expect).norm() <= 1e-9 * expect.norm().max(1.0));

        let edge = ModeAmplitude::from_fn(sp.modes(), |i, _| if i + 1 == sp.modes() { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(transform_amplitude(&sp, &step, &edge), Err(Error::Boundary(_))));
    }

    #[test]
    fn gauge_and_charge() {
        let sp = space(2, 0.4);
        let x = FieldPoint::new(0.2, 0.0, 0.0, -0.4);
        let zero = gauge_check(&sp, 1.0, 0.0, &x).unwrap();
        assert_eq!(zero.max_residual(), 0.0);
        let r = gauge_check(&sp, 0.7, 1.1, &x).unwrap();
        assert!(r.max_residual() <= 1e-12, "{r:?}");

        // Conjugating the other way round gives the opposite phase.
        let (e0, phi) = (0.7, 1.1);
        let g = gauge_unitary(&sp, e0, phi);
        let psi = sp.field_operator(&x, 0, false).unwrap();
        let other = g.adjoint().matmul(&psi).unwrap().matmul(&g).unwrap();
        assert!(other.max_abs_diff(&psi.scale(c(0.0, e0 * phi).exp())).unwrap() <= 1e-12);

        let prof = VacuumProfile::from_shape(sp.lattice(), &ProfileShape::Uniform).unwrap();
        let vac = prof.local_state(&sp).unwrap();
        let q = charge_operator(&sp, e0);
        assert!((vac.inner(&q.apply(&vac).unwrap()).unwrap() - c(2.0 * e0, 0.0)).norm() <= 1e-14);
    }

    #[test]
    fn lifted_generators() {
        let sp = space(0, 0.4);
        let prof = VacuumProfile::from_shape(sp.lattice(), &ProfileShape::Uniform).unwrap();
        for n in [1, 2] {
            let reg = NRegister::new(sp.clone(), n).unwrap();
            let r = generator_check(&reg, &prof, 1.5).unwrap();
            assert!(r.momentum <= 1e-13 && r.charge <= 1e-13 && r.spin <= 1e-13, "{r:?}");
            assert_eq!(r.vacuum_spin, 0.0);
            assert!(r.vacuum_charge <= 1e-13);
        }
    }

    #[test]
    fn vacuum_transforms_covariantly() {
        let sp = space(6, 0.4);
        let lattice = sp.lattice().clone();
        let values: Vec<C64> = (0..sp.modes())
            .map(|i| if i + 2 < sp.modes() { c((i as f64 * 0.3).cos(), 0.2 * i as f64) } else { c(0.0, 0.0) })
            .collect();
        let prof = VacuumProfile::new(&lattice, values).unwrap();
        let id = BoostStep::new(&lattice, 0).unwrap();
        let trivial = vacuum_covariance(&sp, &prof, &id, &SpacetimePoint::origin()).unwrap();
        assert!(trivial.shift <= 1e-14 && trivial.state <= 1e-14);

        let step = BoostStep::new(&lattice, 2).unwrap();
        let y = SpacetimePoint::new(0.9, 0.0, 0.0, -0.4);
        let r = vacuum_covariance(&sp, &prof, &step, &y).unwrap();
        assert!(r.state <= 1e-12 && r.shift <= 1e-12 && r.central <= 1e-12, "{r:?}");
        assert_eq!(r.centrality, 0.0);
        for (p, ph) in lattice.points().iter().zip(&r.phases) {
            assert!((ph - c(0.0, -2.0 * p.dot(&y)).exp()).norm() <= 1e-15);
        }
        let edge = VacuumProfile::from_shape(&lattice, &ProfileShape::Point { index: 12 }).unwrap();
        assert!(matches!(vacuum_covariance(&sp, &edge, &step, &y), Err(Error::Boundary(_))));
    }

    #[test]
    fn vacuum_energy_cases() {
        let sp = space(2, 0.5);
        let lattice = sp.lattice();
        assert_eq!(vacuum_energy(0, &[0.0; 5], lattice, None).unwrap(), 0.0);

        let rest = VacuumProfile::from_shape(lattice, &ProfileShape::Point { index: 2 }).unwrap();
        assert_eq!(lattice.points()[2], FourMomentum::at_rest(1.0));
        let e = vacuum_energy(3, &rest.z(), lattice, None).unwrap();
        assert!((e + 6.0).abs() <= 1e-12);
        assert!((vacuum_energy_expectation(&sp, &rest, 3).unwrap() - e).abs() <= 1e-12);

        let prof = VacuumProfile::from_shape(lattice, &ProfileShape::Gaussian { center: 0.2, width: 0.6 }).unwrap();
        let e = vacuum_energy(2, &prof.z(), lattice, None).unwrap();
        assert!((vacuum_energy_expectation(&sp, &prof, 2).unwrap() - e).abs() <= 1e-12);
        // The N-oscillator operator gives the same number.
        let reg = NRegister::new(space(0, 0.5), 2).unwrap();
        let single = VacuumProfile::from_shape(reg.space().lattice(), &ProfileShape::Uniform).unwrap();
        let p0 = reg.lift_additive(&four_momentum(reg.space())[0]).unwrap();
        let vac = reg.vacuum_state(&single).unwrap();
        let direct = vac.inner(&p0.apply(&vac).unwrap()).unwrap().re;
        let quad = vacuum_energy(2, &single.z(), reg.space().lattice(), None).unwrap();
        assert!((direct - quad).abs() <= 1e-12);

        let bosons = BosonicSector {
            n_b: 3,
            momenta: vec![[0.0, 0.0, 2.0]],
            weights: vec![1.0],
            z: vec![1.0],
        };
        let total = vacuum_energy(3, &rest.z(), lattice, Some(&bosons)).unwrap();
        assert!(total.abs() <= 1e-10);
        let positive = BosonicSector { n_b: 4, ..bosons };
        assert!(vacuum_energy(3, &rest.z(), lattice, Some(&positive)).unwrap() > 0.0);
        assert!(vacuum_energy(1, &[-1.0, 0.0, 0.0, 0.0, 0.0], lattice, None).is_err());
    }
}
