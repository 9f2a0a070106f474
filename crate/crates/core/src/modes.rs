//! Momentum lattices and the single-oscillator space `ℂ^M ⊗ ℂ^16`.
//!
//! A lattice point `p_i` with quadrature weight `w_i` is represented by the
//! orthonormal vector `|i⟩ = √w_i |p_i⟩`, so `⟨p_i|p_j⟩ = δ_ij / w_i` and the
//! continuum resolution of unity becomes `Σ_i |i⟩⟨i| = I`. Single-oscillator
//! indices are `i·16 + r` with `r` the register index.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::engine::{c, map_slice, Exec, SparseOperator, C64};
use crate::error::{Error, Result};
use crate::jw::{JwRegister, Species, Spin, REGISTER_DIM};
use crate::spinor::{build_spin_frame, eigen_bispinors, EigenBispinors, Frequency, FourMomentum, SpacetimePoint};

pub type FieldPoint = SpacetimePoint;

/// Lattice configuration as it appears in run configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum LatticeSpec {
    /// Points `(m cosh jΔη, 0, 0, m sinh jΔη)` for `j ∈ [j_min, j_max]`; by
    /// default `j_min = -j_max`.
    Rapidity1d {
        mass: f64,
        j_max: i64,
        delta_eta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j_min: Option<i64>,
    },
    /// Cubic grid of `n³` momenta with spacing `spacing`, centred on zero.
    Grid3d { mass: f64, n: usize, spacing: f64 },
}

impl LatticeSpec {
    pub fn rapidity(mass: f64, j: i64, delta_eta: f64) -> Self {
        LatticeSpec::Rapidity1d {
            mass,
            j_max: j,
            delta_eta,
            j_min: None,
        }
    }

    pub fn rapidity_range(mass: f64, j_min: i64, j_max: i64, delta_eta: f64) -> Self {
        LatticeSpec::Rapidity1d {
            mass,
            j_max,
            delta_eta,
            j_min: Some(j_min),
        }
    }

    pub fn grid(mass: f64, n: usize, spacing: f64) -> Self {
        LatticeSpec::Grid3d { mass, n, spacing }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RapidityRange {
    pub j_min: i64,
    pub j_max: i64,
    pub delta_eta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentumLattice {
    points: Vec<FourMomentum>,
    weights: Vec<f64>,
    mass: f64,
    rapidity: Option<RapidityRange>,
}

impl MomentumLattice {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[FourMomentum] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn rapidity(&self) -> Option<RapidityRange> {
        self.rapidity
    }

    /// Rapidity step `j` of lattice index `i`.
    pub fn step_of(&self, i: usize) -> Option<i64> {
        let r = self.rapidity?;
        (i < self.len()).then(|| r.j_min + i as i64)
    }

    /// Lattice index of rapidity step `j`.
    pub fn index_of_step(&self, j: i64) -> Option<usize> {
        let r = self.rapidity?;
        (r.j_min..=r.j_max).contains(&j).then(|| (j - r.j_min) as usize)
    }
}

pub fn build_lattice(spec: &LatticeSpec) -> Result<MomentumLattice> {
    match *spec {
        LatticeSpec::Rapidity1d {
            mass,
            j_max,
            delta_eta,
            j_min,
        } => {
            let j_min = j_min.unwrap_or(-j_max);
            if !(mass > 0.0) || !(delta_eta > 0.0) {
                return Err(Error::Config("rapidity lattice needs mass > 0 and delta_eta > 0".into()));
            }
            if j_min > j_max {
                return Err(Error::Config(format!("empty rapidity range {j_min}..={j_max}")));
            }
            let points: Vec<_> = (j_min..=j_max)
                .map(|j| FourMomentum::along_z(mass, j as f64 * delta_eta))
                .collect();
            Ok(MomentumLattice {
                weights: vec![delta_eta; points.len()],
                points,
                mass,
                rapidity: Some(RapidityRange {
                    j_min,
                    j_max,
                    delta_eta,
                }),
            })
        }
        LatticeSpec::Grid3d { mass, n, spacing } => {
            if !(mass > 0.0) || !(spacing > 0.0) {
                return Err(Error::Config("grid lattice needs mass > 0 and spacing > 0".into()));
            }
            if n == 0 {
                return Err(Error::Config("grid lattice needs at least one point per axis".into()));
            }
            let offset = 0.5 * (n as f64 - 1.0);
            let coord = |a: usize| (a as f64 - offset) * spacing;
            let mut points = Vec::with_capacity(n * n * n);
            for a in 0..n {
                for b in 0..n {
                    for k in 0..n {
                        points.push(FourMomentum::on_shell(mass, [coord(a), coord(b), coord(k)]));
                    }
                }
            }
            let norm = spacing.powi(3) / (2.0 * PI).powi(3);
            let weights = points.iter().map(|p| norm / (2.0 * p.e)).collect();
            Ok(MomentumLattice {
                points,
                weights,
                mass,
                rapidity: None,
            })
        }
    }
}

/// Complex table `f(p_i, s)` over lattice points and spins.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeAmplitude {
    values: Vec<[C64; 2]>,
}

pub type SmearedAmplitude = ModeAmplitude;

impl ModeAmplitude {
    pub fn zeros(modes: usize) -> Self {
        Self {
            values: vec![[c(0.0, 0.0); 2]; modes],
        }
    }

    pub fn from_fn<F: FnMut(usize, Spin) -> C64>(modes: usize, mut f: F) -> Self {
        Self {
            values: (0..modes).map(|i| [f(i, Spin::Minus), f(i, Spin::Plus)]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, s: Spin) -> C64 {
        self.values[i][s.index()]
    }

    pub fn set(&mut self, i: usize, s: Spin, v: C64) {
        self.values[i][s.index()] = v;
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            values: self.values.iter().map(|[a, b]| [a * alpha, b * alpha]).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| *v == c(0.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().flatten().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// `ℂ^M ⊗ ℂ^16` with the eigen-bispinors of every lattice point precomputed.
#[derive(Clone, Debug)]
pub struct SingleOscillatorSpace {
    lattice: MomentumLattice,
    register: JwRegister,
    bispinors: Vec<EigenBispinors>,
}

impl SingleOscillatorSpace {
    pub fn new(lattice: MomentumLattice) -> Result<Self> {
        Self::with_exec(lattice, Exec::default())
    }

    pub fn with_exec(lattice: MomentumLattice, exec: Exec) -> Result<Self> {
        let bispinors = map_slice(lattice.points(), exec, |p| build_spin_frame(p).map(|f| eigen_bispinors(&f)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            lattice,
            register: JwRegister::new(),
            bispinors,
        })
    }

    pub fn lattice(&self) -> &MomentumLattice {
        &self.lattice
    }

    pub fn register(&self) -> &JwRegister {
        &self.register
    }

    pub fn modes(&self) -> usize {
        self.lattice.len()
    }

    pub fn dim(&self) -> usize {
        REGISTER_DIM * self.modes()
    }

    pub fn index(&self, mode: usize, register_index: usize) -> usize {
        mode * REGISTER_DIM + register_index
    }

    pub fn bispinors(&self, i: usize) -> &EigenBispinors {
        &self.bispinors[i]
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.modes() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.modes(),
            });
        }
        Ok(())
    }

    fn check_amplitude(&self, f: &ModeAmplitude) -> Result<()> {
        if f.len() != self.modes() {
            return Err(Error::Shape {
                op: "amplitude",
                lhs: (self.modes(), 2),
                rhs: (f.len(), 2),
            });
        }
        Ok(())
    }

    /// `Σ_i coeffs[i] |i⟩⟨i| ⊗ op`.
    pub fn diagonal_lift(&self, coeffs: &[C64], op: &SparseOperator) -> SparseOperator {
        SparseOperator::diagonal(coeffs).kron(op).expect("single-oscillator dimension")
    }

    /// `|i⟩⟨i| ⊗ op`.
    pub fn lift(&self, i: usize, op: &SparseOperator) -> Result<SparseOperator> {
        self.check_mode(i)?;
        let mut coeffs = vec![c(0.0, 0.0); self.modes()];
        coeffs[i] = c(1.0, 0.0);
        Ok(self.diagonal_lift(&coeffs, op))
    }

    pub fn identity(&self) -> SparseOperator {
        SparseOperator::identity(self.dim())
    }

    /// `I₀ = Σ_i w_i |p_i⟩⟨p_i| ⊗ 𝐈₀ = 𝟙_M ⊗ 𝐈₀`.
    pub fn i0(&self) -> SparseOperator {
        SparseOperator::identity(self.modes()).kron(&self.register.i0).expect("single-oscillator dimension")
    }

    /// `I_{p_i} = |p_i⟩⟨p_i| ⊗ 𝐈 = (1/w_i) |i⟩⟨i| ⊗ 𝐈`.
    pub fn mode_identity(&self, i: usize) -> Result<SparseOperator> {
        Ok(self.lift(i, &self.register.identity)?.scale_real(1.0 / self.lattice.weights[i]))
    }

    /// `c_n(p_i, s) = (1/w_i) |i⟩⟨i| ⊗ c_s`.
    pub fn mode_annihilator(&self, i: usize, spin: Spin, species: Species) -> Result<SparseOperator> {
        let op = self.register.annihilator(species, spin);
        Ok(self.lift(i, op)?.scale_real(1.0 / self.lattice.weights[i]))
    }

    pub fn mode_creator(&self, i: usize, spin: Spin, species: Species) -> Result<SparseOperator> {
        Ok(self.mode_annihilator(i, spin, species)?.adjoint())
    }

    /// `c_n(f) = Σ_{i,s} w_i conj(f(p_i,s)) c_n(p_i,s) = Σ_i |i⟩⟨i| ⊗ Σ_s conj(f_is) c_s`.
    pub fn smeared_annihilator(&self, f: &ModeAmplitude, species: Species) -> Result<SparseOperator> {
        self.check_amplitude(f)?;
        let mut out = SparseOperator::zeros(self.dim(), self.dim());
        for s in Spin::ALL {
            let coeffs: Vec<C64> = (0..self.modes()).map(|i| f.get(i, s).conj()).collect();
            let term = self.diagonal_lift(&coeffs, self.register.annihilator(species, s));
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    pub fn smeared_creator(&self, f: &ModeAmplitude, species: Species) -> Result<SparseOperator> {
        Ok(self.smeared_annihilator(f, species)?.adjoint())
    }

    /// `Σ_{i,s} w_i conj(f) g I_{p_i} = Σ_i (Σ_s conj(f_is) g_is) |i⟩⟨i| ⊗ 𝐈`,
    /// the right-hand side of the smeared anticommutator.
    pub fn smeared_identity(&self, f: &ModeAmplitude, g: &ModeAmplitude) -> Result<SparseOperator> {
        self.check_amplitude(f)?;
        self.check_amplitude(g)?;
        let coeffs: Vec<C64> = (0..self.modes())
            .map(|i| Spin::ALL.iter().map(|&s| f.get(i, s).conj() * g.get(i, s)).sum())
            .collect();
        Ok(self.diagonal_lift(&coeffs, &self.register.identity))
    }

    /// `W(x) = Σ_i |i⟩⟨i| e^{-ip_i·x}` on the momentum factor (`M × M`).
    pub fn plane_wave_unitary(&self, x: &FieldPoint) -> SparseOperator {
        SparseOperator::diagonal(&self.plane_wave_phases(x))
    }

    pub fn plane_wave_phases(&self, x: &FieldPoint) -> Vec<C64> {
        self.lattice.points.iter().map(|p| c(0.0, -p.dot(x)).exp()).collect()
    }

    fn field_species(conjugate: bool) -> (Species, Species) {
        if conjugate {
            (Species::Positon, Species::Negaton)
        } else {
            (Species::Negaton, Species::Positon)
        }
    }

    /// `Ψ_α(x) = Σ_i w_i Σ_s [φ^{(s)}_{+,α}(p_i) b(p_i,s) e^{-ip_i·x} + φ^{(s)}_{−,α}(p_i) d(p_i,−s)† e^{ip_i·x}]`,
    /// assembled term by term from the mode operators. With `conjugate`
    /// set, `b` and `d` exchange roles.
    pub fn field_operator(&self, x: &FieldPoint, alpha: usize, conjugate: bool) -> Result<SparseOperator> {
        if alpha >= 4 {
            return Err(Error::IndexOutOfRange { index: alpha, len: 4 });
        }
        let (ann, cre) = Self::field_species(conjugate);
        let phases = self.plane_wave_phases(x);
        let mut out = SparseOperator::zeros(self.dim(), self.dim());
        for i in 0..self.modes() {
            let w = self.lattice.weights[i];
            let phi = &self.bispinors[i];
            for s in Spin::ALL {
                let a = phi.get(Frequency::Positive, s).component(alpha) * phases[i] * w;
                out = out.add_scaled(&self.mode_annihilator(i, s, ann)?, a)?;
                let b = phi.get(Frequency::Negative, s).component(alpha) * phases[i].conj() * w;
                out = out.add_scaled(&self.mode_creator(i, s.flip(), cre)?, b)?;
            }
        }
        Ok(out)
    }

    /// Spectral form `Σ_s [φ^{(s)}_{+,α}(p̂) W(x) ⊗ b_s + φ^{(s)}_{−,α}(p̂) W(x)† ⊗ d_{−s}†]`.
    pub fn field_operator_spectral(&self, x: &FieldPoint, alpha: usize, conjugate: bool) -> Result<SparseOperator> {
        if alpha >= 4 {
            return Err(Error::IndexOutOfRange { index: alpha, len: 4 });
        }
        let (ann, cre) = Self::field_species(conjugate);
        let w = self.plane_wave_unitary(x);
        let w_dag = w.adjoint();
        let mut out = SparseOperator::zeros(self.dim(), self.dim());
        for s in Spin::ALL {
            let diag = |freq| {
                let d: Vec<C64> = self.bispinors.iter().map(|phi| phi.get(freq, s).component(alpha)).collect();
                SparseOperator::diagonal(&d)
            };
            let pos = diag(Frequency::Positive).matmul(&w)?;
            out = out.try_add(&pos.kron(self.register.annihilator(ann, s))?)?;
            let neg = diag(Frequency::Negative).matmul(&w_dag)?;
            out = out.try_add(&neg.kron(&self.register.creator(cre, s.flip()))?)?;
        }
        Ok(out)
    }

    /// All four components of `Ψ(x)`.
    pub fn field_components(&self, x: &FieldPoint, conjugate: bool) -> Result<[SparseOperator; 4]> {
        Ok([
            self.field_operator(x, 0, conjugate)?,
            self.field_operator(x, 1, conjugate)?,
            self.field_operator(x, 2, conjugate)?,
            self.field_operator(x, 3, conjugate)?,
        ])
    }
}

/// `Σ_β m[α][β] ops[β]` for a 4×4 bispinor matrix.
pub fn mix_components(m: &Matrix4<C64>, ops: &[SparseOperator; 4]) -> Result<[SparseOperator; 4]> {
    let row = |a: usize| -> Result<SparseOperator> {
        let mut out = SparseOperator::zeros(ops[0].rows(), ops[0].cols());
        for (b, op) in ops.iter().enumerate() {
            out = out.add_scaled(op, m[(a, b)])?;
        }
        Ok(out)
    };
    Ok([row(0)?, row(1)?, row(2)?, row(3)?])
}
