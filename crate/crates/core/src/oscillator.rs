//! N-fold extension of the single-oscillator space.
//!
//! A single-oscillator operator `a` lifts to
//! `(1/√N) Σ_k I₀^{⊗(k-1)} ⊗ a ⊗ I^{⊗(N-k)}`. Explicit matrices are built up
//! to [`DEFAULT_MAX_DIM`]; beyond that, vacuum matrix elements are evaluated
//! by [`SectorEngine`], which stores a state by its excitation pattern over
//! the product vacuum instead of by its `(16M)^N` amplitudes.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::engine::{c, map_slice, tensor_chain, Exec, SparseOperator, SparseState, C64, DEFAULT_MAX_DIM};
use crate::error::{Error, Result};
use crate::jw::{occupation_count, Species, REGISTER_DIM, VACUUM_INDEX};
use crate::modes::{ModeAmplitude, MomentumLattice, SingleOscillatorSpace};

/// Largest `N` accepted by the sector engine.
pub const SECTOR_MAX_N: usize = 64;

/// Default cap on stored sector amplitudes.
pub const DEFAULT_ENTRY_CAP: usize = 1 << 22;

/// Largest number of creators (and of annihilators) in one vacuum matrix element.
pub const MAX_ORDER: usize = 8;

const SECTOR_DROP: f64 = 1e-18;

/// Named vacuum profiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum ProfileShape {
    Uniform,
    /// `exp(-(η - center)² / (2 width²))` in the rapidity `η = atanh(p_z/E)`.
    Gaussian { center: f64, width: f64 },
    /// Supported on a single lattice index.
    Point { index: usize },
}

/// Single-oscillator vacuum wave function `O(p_i)` with `Σ_i w_i |O_i|² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct VacuumProfile {
    values: Vec<C64>,
    weights: Vec<f64>,
}

impl VacuumProfile {
    /// Normalizes `values` so that `Σ_i w_i |O_i|² = 1`.
    pub fn new(lattice: &MomentumLattice, values: Vec<C64>) -> Result<Self> {
        let raw = Self::unnormalized(lattice, values)?;
        let scale = 1.0 / raw.norm_sqr().sqrt();
        Ok(Self {
            values: raw.values.iter().map(|v| v * scale).collect(),
            weights: raw.weights,
        })
    }

    /// Keeps `values` as given; only a vanishing profile is rejected.
    pub fn unnormalized(lattice: &MomentumLattice, values: Vec<C64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::Shape {
                op: "vacuum_profile",
                lhs: (lattice.len(), 1),
                rhs: (values.len(), 1),
            });
        }
        let profile = Self {
            values,
            weights: lattice.weights().to_vec(),
        };
        let n = profile.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateVacuum);
        }
        Ok(profile)
    }

    pub fn from_shape(lattice: &MomentumLattice, shape: &ProfileShape) -> Result<Self> {
        let values = match *shape {
            ProfileShape::Uniform => vec![c(1.0, 0.0); lattice.len()],
            ProfileShape::Gaussian { center, width } => {
                if !(width > 0.0) {
                    return Err(Error::Config("gaussian profile needs width > 0".into()));
                }
                lattice
                    .points()
                    .iter()
                    .map(|p| {
                        let eta = (p.pz / p.e).atanh();
                        c((-(eta - center).powi(2) / (2.0 * width * width)).exp(), 0.0)
                    })
                    .collect()
            }
            ProfileShape::Point { index } => {
                if index >= lattice.len() {
                    return Err(Error::IndexOutOfRange {
                        index,
                        len: lattice.len(),
                    });
                }
                let mut v = vec![c(0.0, 0.0); lattice.len()];
                v[index] = c(1.0, 0.0);
                v
            }
        };
        Self::new(lattice, values)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Z_i = |O_i|²`.
    pub fn z(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `Σ_i w_i Z_i`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| w * v.norm_sqr()).sum()
    }

    /// `|O⟩ = Σ_i √w_i O_i |i, 0000⟩`.
    pub fn local_state(&self, space: &SingleOscillatorSpace) -> Result<SparseState> {
        if self.len() != space.modes() {
            return Err(Error::Shape {
                op: "vacuum_profile",
                lhs: (space.modes(), 1),
                rhs: (self.len(), 1),
            });
        }
        SparseState::from_entries(
            space.dim(),
            self.values
                .iter()
                .zip(&self.weights)
                .enumerate()
                .map(|(i, (o, w))| (space.index(i, VACUUM_INDEX), o * w.sqrt())),
        )
    }
}

/// `⟨f|g⟩_Z = Σ_{i,s} w_i Z_i conj(f(p_i,s)) g(p_i,s)`.
pub fn zprod_inner(f: &ModeAmplitude, g: &ModeAmplitude, profile: &VacuumProfile) -> Result<C64> {
    if f.len() != profile.len() || g.len() != profile.len() {
        return Err(Error::Shape {
            op: "zprod_inner",
            lhs: (f.len(), 2),
            rhs: (g.len(), 2),
        });
    }
    let z = profile.z();
    Ok((0..f.len())
        .map(|i| {
            let s: C64 = crate::jw::Spin::ALL.iter().map(|&s| f.get(i, s).conj() * g.get(i, s)).sum();
            s * (profile.weights[i] * z[i])
        })
        .sum())
}

/// Smeared ladder operator `c_n(f)` or `c_n(f)†`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderOp {
    pub amplitude: ModeAmplitude,
    pub species: Species,
    pub dagger: bool,
}

impl LadderOp {
    pub fn annihilate(amplitude: ModeAmplitude, species: Species) -> Self {
        Self {
            amplitude,
            species,
            dagger: false,
        }
    }

    pub fn create(amplitude: ModeAmplitude, species: Species) -> Self {
        Self {
            amplitude,
            species,
            dagger: true,
        }
    }

    /// Single-oscillator matrix of this operator.
    pub fn local_matrix(&self, space: &SingleOscillatorSpace) -> Result<SparseOperator> {
        if self.dagger {
            space.smeared_creator(&self.amplitude, self.species)
        } else {
            space.smeared_annihilator(&self.amplitude, self.species)
        }
    }
}

/// `N` copies of a single-oscillator space.
#[derive(Clone, Debug)]
pub struct NRegister {
    space: SingleOscillatorSpace,
    n: usize,
    max_dim: usize,
    entry_cap: usize,
}

impl NRegister {
    pub fn new(space: SingleOscillatorSpace, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("N must be at least 1".into()));
        }
        Ok(Self {
            space,
            n,
            max_dim: DEFAULT_MAX_DIM,
            entry_cap: DEFAULT_ENTRY_CAP,
        })
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    pub fn with_entry_cap(mut self, cap: usize) -> Self {
        self.entry_cap = cap;
        self
    }

    pub fn space(&self) -> &SingleOscillatorSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry_cap(&self) -> usize {
        self.entry_cap
    }

    /// `(16M)^N`, or a size error above the matrix cap.
    pub fn total_dim(&self) -> Result<usize> {
        let local = self.space.dim();
        let mut dim: usize = 1;
        for _ in 0..self.n {
            dim = dim
                .checked_mul(local)
                .filter(|&d| d <= self.max_dim)
                .ok_or(Error::Size {
                    requested: local.saturating_pow(self.n as u32),
                    max: self.max_dim,
                })?;
        }
        Ok(dim)
    }

    /// `I^{⊗k} ⊗ op ⊗ I^{⊗(N-k-1)}` (factor `k` counted from zero).
    pub fn on_factor(&self, k: usize, op: &SparseOperator) -> Result<SparseOperator> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange { index: k, len: self.n });
        }
        self.total_dim()?;
        let id = self.space.identity();
        let factors: Vec<&SparseOperator> = (0..self.n).map(|j| if j == k { op } else { &id }).collect();
        tensor_chain(&factors, self.max_dim)
    }

    /// `(1/√N) Σ_k i0^{⊗(k-1)} ⊗ op ⊗ I^{⊗(N-k)}`.
    pub fn extend_operator(&self, op: &SparseOperator, i0: &SparseOperator) -> Result<SparseOperator> {
        let dim = self.total_dim()?;
        let id = self.space.identity();
        let mut out = SparseOperator::zeros(dim, dim);
        for k in 0..self.n {
            let factors: Vec<&SparseOperator> = (0..self.n)
                .map(|j| match j.cmp(&k) {
                    std::cmp::Ordering::Less => i0,
                    std::cmp::Ordering::Equal => op,
                    std::cmp::Ordering::Greater => &id,
                })
                .collect();
            out = out.try_add(&tensor_chain(&factors, self.max_dim)?)?;
        }
        Ok(out.scale_real(1.0 / (self.n as f64).sqrt()))
    }

    /// [`NRegister::extend_operator`] with the space's own `I₀`.
    pub fn extend(&self, op: &SparseOperator) -> Result<SparseOperator> {
        self.extend_operator(op, &self.space.i0())
    }

    /// `Σ_k I^{⊗(k-1)} ⊗ op ⊗ I^{⊗(N-k)}`, the lift of an additive generator.
    pub fn lift_additive(&self, op: &SparseOperator) -> Result<SparseOperator> {
        let dim = self.total_dim()?;
        let mut out = SparseOperator::zeros(dim, dim);
        for k in 0..self.n {
            out = out.try_add(&self.on_factor(k, op)?)?;
        }
        Ok(out)
    }

    /// `(1/N) Σ_k I^{⊗(k-1)} ⊗ op ⊗ I^{⊗(N-k)}`, e.g. `ůI_p` from `I_p`.
    pub fn lift_average(&self, op: &SparseOperator) -> Result<SparseOperator> {
        Ok(self.lift_additive(op)?.scale_real(1.0 / self.n as f64))
    }

    /// `op^{⊗N}`, the lift of a group element.
    pub fn lift_product(&self, op: &SparseOperator) -> Result<SparseOperator> {
        self.total_dim()?;
        tensor_chain(&vec![op; self.n], self.max_dim)
    }

    /// `|ůO⟩ = |O⟩^{⊗N}`.
    pub fn vacuum_state(&self, profile: &VacuumProfile) -> Result<SparseState> {
        self.total_dim()?;
        let local = profile.local_state(&self.space)?;
        let mut out = local.clone();
        for _ in 1..self.n {
            out = out.kron(&local)?;
        }
        Ok(out)
    }

    /// Explicit matrix of the lifted smeared operator.
    pub fn smeared_operator(&self, op: &LadderOp) -> Result<SparseOperator> {
        self.extend(&op.local_matrix(&self.space)?)
    }

    /// `ůc_n(f)`.
    pub fn smeared_annihilator(&self, f: &ModeAmplitude, species: Species) -> Result<SparseOperator> {
        self.smeared_operator(&LadderOp::annihilate(f.clone(), species))
    }
}

fn check_order(ops: &[LadderOp]) -> Result<()> {
    if ops.len() > 2 * MAX_ORDER {
        return Err(Error::Config(format!(
            "{} ladder operators exceed the limit of {}",
            ops.len(),
            2 * MAX_ORDER
        )));
    }
    Ok(())
}

/// `⟨ůO| ops[0] ops[1] … |ůO⟩` through explicit `(16M)^N` matrices.
pub fn vacuum_matrix_element_explicit(reg: &NRegister, profile: &VacuumProfile, ops: &[LadderOp]) -> Result<C64> {
    check_order(ops)?;
    let vac = reg.vacuum_state(profile)?;
    let mut state = vac.clone();
    for op in ops.iter().rev() {
        state = reg.smeared_operator(op)?.apply(&state)?;
    }
    vac.inner(&state)
}

/// `⟨ůO| ops[0] ops[1] … |ůO⟩`, applied right to left in the sector representation.
pub fn vacuum_matrix_element(reg: &NRegister, profile: &VacuumProfile, ops: &[LadderOp]) -> Result<C64> {
    check_order(ops)?;
    let engine = SectorEngine::new(reg, profile)?;
    let mut state = engine.vacuum();
    for op in ops.iter().rev() {
        let local = engine.local_operator(&op.local_matrix(reg.space())?)?;
        state = engine.apply(&local, &state)?;
    }
    Ok(state.vacuum_amplitude())
}

/// Single-oscillator operator written in the local frame, grouped by input label.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    columns: Vec<Vec<(u16, C64)>>,
}

/// State of the N-oscillator system over the product vacuum.
///
/// Sector `r` maps label tuples `(y_1, …, y_r)` (nonzero local-frame labels,
/// listed by increasing factor position) to one amplitude shared by every
/// choice of the `r` excited factors. States reached from `|ůO⟩` by lifted
/// odd operators have this form, and the map is stored for all orderings.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorState {
    n: usize,
    sectors: Vec<BTreeMap<Vec<u16>, C64>>,
}

impl SectorState {
    /// `⟨ůO|state⟩`.
    pub fn vacuum_amplitude(&self) -> C64 {
        self.sectors[0].get(&Vec::new()).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn entries(&self) -> usize {
        self.sectors.iter().map(BTreeMap::len).sum()
    }

    /// `Σ_r C(N,r) Σ_Y |F_r(Y)|²`.
    pub fn norm_sqr(&self) -> f64 {
        let mut binom = 1.0;
        let mut total = 0.0;
        for (r, map) in self.sectors.iter().enumerate() {
            if r > 0 {
                binom *= (self.n + 1 - r) as f64 / r as f64;
            }
            total += binom * map.values().map(|v| v.norm_sqr()).sum::<f64>();
        }
        total
    }
}

/// Local orthonormal frame whose first vector is the vacuum `|O⟩`.
#[derive(Clone, Debug)]
pub struct SectorEngine {
    frame: DMatrix<C64>,
    odd: Vec<bool>,
    n: usize,
    cap: usize,
}

impl SectorEngine {
    pub fn new(reg: &NRegister, profile: &VacuumProfile) -> Result<Self> {
        if reg.n() > SECTOR_MAX_N {
            return Err(Error::Size {
                requested: reg.n(),
                max: SECTOR_MAX_N,
            });
        }
        let space = reg.space();
        let dim = space.dim();
        if dim > u16::MAX as usize {
            return Err(Error::Size {
                requested: dim,
                max: u16::MAX as usize,
            });
        }
        let vac = profile.local_state(space)?.to_dense();
        let mut columns: Vec<Vec<C64>> = vec![vac];
        let mut odd = vec![false];
        // Rest of the vacuum-register subspace by Gram-Schmidt.
        for i in 0..space.modes() {
            let mut v = vec![c(0.0, 0.0); dim];
            v[space.index(i, VACUUM_INDEX)] = c(1.0, 0.0);
            for _ in 0..2 {
                for u in &columns {
                    let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                columns.push(v.iter().map(|x| x / norm).collect());
                odd.push(false);
            }
        }
        for i in 0..space.modes() {
            for r in (0..REGISTER_DIM).filter(|&r| r != VACUUM_INDEX) {
                let mut v = vec![c(0.0, 0.0); dim];
                v[space.index(i, r)] = c(1.0, 0.0);
                columns.push(v);
                odd.push(occupation_count(r) % 2 == 1);
            }
        }
        debug_assert_eq!(columns.len(), dim);
        let frame = DMatrix::from_fn(dim, dim, |r, col| columns[col][r]);
        Ok(Self {
            frame,
            odd,
            n: reg.n(),
            cap: reg.entry_cap(),
        })
    }

    pub fn vacuum(&self) -> SectorState {
        let mut sectors = vec![BTreeMap::new(); self.n + 1];
        sectors[0].insert(Vec::new(), c(1.0, 0.0));
        SectorState { n: self.n, sectors }
    }

    /// `V† op V`; the operator must change local parity.
    pub fn local_operator(&self, op: &SparseOperator) -> Result<LocalOperator> {
        let dim = self.frame.nrows();
        if op.shape() != (dim, dim) {
            return Err(Error::Shape {
                op: "local_operator",
                lhs: (dim, dim),
                rhs: op.shape(),
            });
        }
        let m = self.frame.adjoint() * op.to_dense() * &self.frame;
        let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut columns = vec![Vec::new(); dim];
        for col in 0..dim {
            for row in 0..dim {
                let v = m[(row, col)];
                if v.norm() <= 1e-15 * scale.max(1.0) {
                    continue;
                }
                if self.odd[row] == self.odd[col] {
                    return Err(Error::Precondition(
                        "sector evaluation needs operators that flip I0 parity".into(),
                    ));
                }
                columns[col].push((row as u16, v));
            }
        }
        Ok(LocalOperator { columns })
    }

    /// `(1/√N) Σ_k I₀^{⊗(k-1)} ⊗ op ⊗ I^{⊗(N-k)}` applied to `state`.
    pub fn apply(&self, op: &LocalOperator, state: &SectorState) -> Result<SectorState> {
        let n = self.n;
        let inv_sqrt = 1.0 / (n as f64).sqrt();
        let mut out = vec![BTreeMap::new(); n + 1];
        let mut add = |r: usize, key: Vec<u16>, v: C64| {
            *out[r].entry(key).or_insert(c(0.0, 0.0)) += v;
        };
        for (r, map) in state.sectors.iter().enumerate() {
            for (labels, &amp) in map {
                // Act on an excited factor.
                let mut sign = 1.0;
                for (j, &y) in labels.iter().enumerate() {
                    for &(to, val) in &op.columns[y as usize] {
                        let mut key = labels.clone();
                        if to == 0 {
                            key.remove(j);
                            let weight = (n + 1 - r) as f64 / r as f64 * inv_sqrt * sign;
                            add(r - 1, key, amp * val * weight);
                        } else {
                            key[j] = to;
                            add(r, key, amp * val * (inv_sqrt * sign));
                        }
                    }
                    if self.odd[y as usize] {
                        sign = -sign;
                    }
                }
                // Excite a factor still in |O⟩.
                if r < n {
                    for &(to, val) in &op.columns[0] {
                        let mut sign = 1.0;
                        for j in 0..=r {
                            let mut key = labels.clone();
                            key.insert(j, to);
                            add(r + 1, key, amp * val * (inv_sqrt * sign));
                            if j < r && self.odd[labels[j] as usize] {
                                sign = -sign;
                            }
                        }
                    }
                }
            }
        }
        for map in &mut out {
            map.retain(|_, v| v.norm() > SECTOR_DROP);
        }
        let result = SectorState { n, sectors: out };
        if result.entries() > self.cap {
            return Err(Error::Resource {
                entries: result.entries(),
                cap: self.cap,
            });
        }
        Ok(result)
    }

    /// Explicit `(16M)^N` vector of a sector state; small `N` only.
    pub fn expand(&self, state: &SectorState, max_dim: usize) -> Result<SparseState> {
        let local = self.frame.nrows();
        let dim = (0..self.n).try_fold(1usize, |d, _| d.checked_mul(local).filter(|&d| d <= max_dim));
        let dim = dim.ok_or(Error::Size {
            requested: local.saturating_pow(self.n as u32),
            max: max_dim,
        })?;
        let mut dense = vec![c(0.0, 0.0); dim];
        // Enumerate every product-basis configuration in the local frame.
        let mut config = vec![0usize; self.n];
        loop {
            let labels: Vec<u16> = config.iter().filter(|&&x| x != 0).map(|&x| x as u16).collect();
            if let Some(&amp) = state.sectors[labels.len()].get(&labels) {
                // Accumulate amp · ⊗_k V[:, x_k].
                let mut partial = vec![(0usize, amp)];
                for &x in &config {
                    let mut next = Vec::new();
                    for &(idx, a) in &partial {
                        for row in 0..local {
                            let v = self.frame[(row, x)];
                            if v != c(0.0, 0.0) {
                                next.push((idx * local + row, a * v));
                            }
                        }
                    }
                    partial = next;
                }
                for (idx, a) in partial {
                    dense[idx] += a;
                }
            }
            // Advance the odometer.
            let mut k = self.n;
            loop {
                if k == 0 {
                    return Ok(SparseState::from_dense(&dense));
                }
                k -= 1;
                config[k] += 1;
                if config[k] < local {
                    break;
                }
                config[k] = 0;
            }
        }
    }
}

/// `Gram_{kj} = ⟨f_k|g_j⟩_Z`.
pub fn gram_matrix(fs: &[ModeAmplitude], gs: &[ModeAmplitude], profile: &VacuumProfile) -> Result<DMatrix<C64>> {
    if fs.len() != gs.len() {
        return Err(Error::Shape {
            op: "gram_matrix",
            lhs: (fs.len(), 1),
            rhs: (gs.len(), 1),
        });
    }
    let mut g = DMatrix::zeros(fs.len(), gs.len());
    for (k, f) in fs.iter().enumerate() {
        for (j, h) in gs.iter().enumerate() {
            g[(k, j)] = zprod_inner(f, h, profile)?;
        }
    }
    Ok(g)
}

/// `Σ_σ δ_σ Π_k ⟨f_k|g_σ(k)⟩_Z = det Gram`.
pub fn slater_limit(fs: &[ModeAmplitude], gs: &[ModeAmplitude], profile: &VacuumProfile) -> Result<C64> {
    if fs.is_empty() || fs.len() > MAX_ORDER {
        return Err(Error::Config(format!("order M = {} outside 1..={MAX_ORDER}", fs.len())));
    }
    Ok(gram_matrix(fs, gs, profile)?.determinant())
}

/// Operator sequence `ůc(f_M) … ůc(f_1) ůc(g_1)† … ůc(g_M)†`, whose vacuum
/// expectation tends to `det Gram`.
pub fn slater_operators(fs: &[ModeAmplitude], gs: &[ModeAmplitude], species: Species) -> Vec<LadderOp> {
    fs.iter()
        .rev()
        .map(|f| LadderOp::annihilate(f.clone(), species))
        .chain(gs.iter().map(|g| LadderOp::create(g.clone(), species)))
        .collect()
}

/// Operator sequence `ůc(f_1) … ůc(f_M) ůc(g_1)† … ůc(g_M)†` with the
/// annihilators in ascending order; its limit is `(-1)^{M(M-1)/2} det Gram`.
pub fn slater_operators_ascending(fs: &[ModeAmplitude], gs: &[ModeAmplitude], species: Species) -> Vec<LadderOp> {
    fs.iter()
        .map(|f| LadderOp::annihilate(f.clone(), species))
        .chain(gs.iter().map(|g| LadderOp::create(g.clone(), species)))
        .collect()
}

/// One row of a convergence report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub lhs: C64,
    pub limit: C64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub records: Vec<ConvergenceRecord>,
    /// Deviations never grow by more than rounding from one `N` to the next.
    pub non_increasing: bool,
}

impl ConvergenceReport {
    pub fn deviation_at(&self, n: usize) -> Option<f64> {
        self.records.iter().find(|r| r.n == n).map(|r| r.deviation)
    }
}

/// `|LHS(N) - det Gram|` for each `N`, evaluated independently per `N`.
pub fn large_n_convergence(
    space: &SingleOscillatorSpace,
    fs: &[ModeAmplitude],
    gs: &[ModeAmplitude],
    profile: &VacuumProfile,
    species: Species,
    n_list: &[usize],
    exec: Exec,
) -> Result<ConvergenceReport> {
    let limit = slater_limit(fs, gs, profile)?;
    let ops = slater_operators(fs, gs, species);
    let records = map_slice(n_list, exec, |&n| -> Result<ConvergenceRecord> {
        let reg = NRegister::new(space.clone(), n)?;
        let lhs = vacuum_matrix_element(&reg, profile, &ops)?;
        Ok(ConvergenceRecord {
            m: fs.len(),
            n,
            lhs,
            limit,
            deviation: (lhs - limit).norm(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let non_increasing = records.windows(2).all(|w| w[1].deviation <= w[0].deviation + 1e-14);
    Ok(ConvergenceReport {
        records,
        non_increasing,
    })
}
