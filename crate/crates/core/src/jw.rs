//! Four-mode Jordan-Wigner register: negaton (`b`) and positon (`d`)
//! annihilators with two spin states each, the grading operator `I₀`, the
//! register vacuum, and closed-form exponentials of bilinear forms.
//!
//! Each tensor factor uses the basis (excited, ground); the register index of
//! an occupation pattern `|n₁,n₂,n₃,n₄⟩` (factor 1 most significant) sets bit
//! `k` to `1 - n_k`, so the vacuum `|0,0,0,0⟩` is index 15.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::engine::{anticommutator, c, expm_dense, pauli, tensor_chain, SparseOperator, SparseState, C64};
use crate::error::{Error, Result};

pub const REGISTER_DIM: usize = 16;
pub const VACUUM_INDEX: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Minus,
    Plus,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Minus, Spin::Plus];

    /// Row/column index in 2×2 spin matrices: `−` is 0, `+` is 1.
    pub fn index(self) -> usize {
        match self {
            Spin::Minus => 0,
            Spin::Plus => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Spin::Minus => -1.0,
            Spin::Plus => 1.0,
        }
    }

    /// Spin projection `±1/2`.
    pub fn value(self) -> f64 {
        0.5 * self.sign()
    }

    pub fn flip(self) -> Spin {
        match self {
            Spin::Minus => Spin::Plus,
            Spin::Plus => Spin::Minus,
        }
    }
}

/// `c₁ = b` (negatons) and `c₂ = d` (positons).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Negaton,
    Positon,
}

impl Species {
    pub const ALL: [Species; 2] = [Species::Negaton, Species::Positon];

    pub fn other(self) -> Species {
        match self {
            Species::Negaton => Species::Positon,
            Species::Positon => Species::Negaton,
        }
    }
}

/// One of the eight ladder operators `b_s, d_s, b_s†, d_s†`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub species: Species,
    pub spin: Spin,
    pub dagger: bool,
}

impl Ladder {
    pub fn all() -> Vec<Ladder> {
        let mut out = Vec::with_capacity(8);
        for dagger in [false, true] {
            for species in Species::ALL {
                for spin in Spin::ALL {
                    out.push(Ladder { species, spin, dagger });
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let name = match self.species {
            Species::Negaton => "b",
            Species::Positon => "d",
        };
        let s = match self.spin {
            Spin::Minus => "-",
            Spin::Plus => "+",
        };
        format!("{name}{s}{}", if self.dagger { "†" } else { "" })
    }
}

#[derive(Clone, Debug)]
pub struct JwRegister {
    pub b_minus: SparseOperator,
    pub b_plus: SparseOperator,
    pub d_minus: SparseOperator,
    pub d_plus: SparseOperator,
    pub identity: SparseOperator,
    pub i0: SparseOperator,
    pub vacuum: SparseState,
}

impl Default for JwRegister {
    fn default() -> Self {
        Self::new()
    }
}

impl JwRegister {
    pub fn new() -> Self {
        let (id, sm, s3) = (pauli::identity(), pauli::sigma_minus(), pauli::sigma_3());
        let chain = |f: [&SparseOperator; 4]| tensor_chain(&f, REGISTER_DIM).expect("16-dim register");
        let b_minus = chain([&sm, &id, &id, &id]);
        let b_plus = -&chain([&s3, &sm, &id, &id]);
        let d_minus = chain([&s3, &s3, &sm, &id]);
        let d_plus = -&chain([&s3, &s3, &s3, &sm]);
        let i0 = chain([&s3, &s3, &s3, &s3]);
        Self {
            b_minus,
            b_plus,
            d_minus,
            d_plus,
            identity: SparseOperator::identity(REGISTER_DIM),
            i0,
            vacuum: SparseState::basis(REGISTER_DIM, VACUUM_INDEX),
        }
    }

    pub fn annihilator(&self, species: Species, spin: Spin) -> &SparseOperator {
        match (species, spin) {
            (Species::Negaton, Spin::Minus) => &self.b_minus,
            (Species::Negaton, Spin::Plus) => &self.b_plus,
            (Species::Positon, Spin::Minus) => &self.d_minus,
            (Species::Positon, Spin::Plus) => &self.d_plus,
        }
    }

    pub fn creator(&self, species: Species, spin: Spin) -> SparseOperator {
        self.annihilator(species, spin).adjoint()
    }

    pub fn ladder(&self, l: Ladder) -> SparseOperator {
        if l.dagger {
            self.creator(l.species, l.spin)
        } else {
            self.annihilator(l.species, l.spin).clone()
        }
    }

    /// `c_s† c_s`.
    pub fn number(&self, species: Species, spin: Spin) -> SparseOperator {
        let a = self.annihilator(species, spin);
        &a.adjoint() * a
    }

    /// `Σ_s c_s† c_s`.
    pub fn total_number(&self, species: Species) -> SparseOperator {
        &self.number(species, Spin::Minus) + &self.number(species, Spin::Plus)
    }

    /// `c†Ac = Σ_{ss'} c_s† A_{ss'} c_{s'}`.
    pub fn bilinear(&self, species: Species, a: &Matrix2<C64>) -> SparseOperator {
        let mut out = SparseOperator::zeros(REGISTER_DIM, REGISTER_DIM);
        for s in Spin::ALL {
            for t in Spin::ALL {
                let coeff = a[(s.index(), t.index())];
                let term = &self.creator(species, s) * self.annihilator(species, t);
                out = out.add_scaled(&term, coeff).expect("register shapes");
            }
        }
        out
    }

    /// `b†Ab + d†Ad`, the generator exponentiated by [`quadratic_exponential`].
    pub fn quadratic_generator(&self, q: &QuadraticForm) -> SparseOperator {
        &self.bilinear(Species::Negaton, &q.a) + &self.bilinear(Species::Positon, &q.a)
    }

    /// Register basis state for an occupation pattern `[n_{b-}, n_{b+}, n_{d-}, n_{d+}]`.
    pub fn occupation_state(occupied: [bool; 4]) -> SparseState {
        SparseState::basis(REGISTER_DIM, occupation_index(occupied))
    }

    /// Maximum residual of every distinct pairwise anticommutator among the
    /// eight ladder operators against `𝐈` (an operator with its own adjoint)
    /// or zero (all other pairs).
    pub fn car_table(&self) -> Vec<CarPair> {
        let ops = Ladder::all();
        let mats: Vec<SparseOperator> = ops.iter().map(|&l| self.ladder(l)).collect();
        let mut out = Vec::with_capacity(28);
        for i in 0..ops.len() {
            for j in (i + 1)..ops.len() {
                let (l, r) = (ops[i], ops[j]);
                let conjugate_pair =
                    l.species == r.species && l.spin == r.spin && l.dagger != r.dagger;
                let anti = anticommutator(&mats[i], &mats[j]).expect("register shapes");
                let expected = if conjugate_pair {
                    self.identity.clone()
                } else {
                    SparseOperator::zeros(REGISTER_DIM, REGISTER_DIM)
                };
                out.push(CarPair {
                    left: l,
                    right: r,
                    expects_identity: conjugate_pair,
                    residual: anti.max_abs_diff(&expected).expect("register shapes"),
                });
            }
        }
        out
    }
}

/// Register index of an occupation pattern.
pub fn occupation_index(occupied: [bool; 4]) -> usize {
    occupied
        .iter()
        .fold(0, |acc, &n| (acc << 1) | usize::from(!n))
}

/// Number of occupied modes in register basis state `index`.
pub fn occupation_count(index: usize) -> u32 {
    4 - (index as u32 & 0xF).count_ones()
}

#[derive(Clone, Debug)]
pub struct CarPair {
    pub left: Ladder,
    pub right: Ladder,
    pub expects_identity: bool,
    pub residual: f64,
}

/// A 2×2 complex matrix `A` indexed by spin (`−` = 0, `+` = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticForm {
    pub a: Matrix2<C64>,
}

impl QuadraticForm {
    pub fn new(a: Matrix2<C64>) -> Self {
        Self { a }
    }

    pub fn zero() -> Self {
        Self { a: Matrix2::zeros() }
    }

    /// `B = e^A`.
    pub fn exponential(&self) -> Matrix2<C64> {
        expm2(&self.a)
    }
}

pub fn expm2(a: &Matrix2<C64>) -> Matrix2<C64> {
    let d = expm_dense(&DMatrix::from_iterator(2, 2, a.iter().copied()));
    Matrix2::from_iterator(d.iter().copied())
}

/// Two-mode block of `e^{c†Ac}` in the basis (both occupied, `−` only,
/// `+` only, empty): `diag(det B, B, 1)` with `B = e^A`.
pub fn two_mode_block(b: &Matrix2<C64>) -> SparseOperator {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    #[rustfmt::skip]
    let rows = [
        b.determinant(), z,       z,       z,
        z,               b[(0, 0)], b[(0, 1)], z,
        z,               b[(1, 0)], b[(1, 1)], z,
        z,               z,       z,       one,
    ];
    SparseOperator::from_dense(&DMatrix::from_row_slice(4, 4, &rows))
}

/// `e^{b†A_b b} e^{d†A_d d}` assembled from the block matrices `B_b = e^{A_b}`
/// and `B_d = e^{A_d}` without exponentiating a 16×16 matrix.
pub fn bilinear_exponential(b_block: &Matrix2<C64>, d_block: &Matrix2<C64>) -> SparseOperator {
    let id4 = SparseOperator::identity(4);
    let eb = two_mode_block(b_block).kron(&id4).expect("16-dim");
    let ed = id4.kron(&two_mode_block(d_block)).expect("16-dim");
    &eb * &ed
}

/// `e^{b†Ab + d†Ad}` from the closed block form.
pub fn quadratic_exponential(q: &QuadraticForm) -> SparseOperator {
    let b = q.exponential();
    bilinear_exponential(&b, &b)
}

/// `e^{iα b†b + iβ d†d}` from the closed block form.
pub fn phase_exponential(alpha: f64, beta: f64) -> SparseOperator {
    let pb = Matrix2::from_diagonal_element(c(0.0, alpha).exp());
    let pd = Matrix2::from_diagonal_element(c(0.0, beta).exp());
    bilinear_exponential(&pb, &pd)
}

pub fn is_special_unitary(u: &Matrix2<C64>, tol: f64) -> bool {
    let unitarity = (u * u.adjoint() - Matrix2::identity()).iter().map(|v| v.norm()).fold(0.0, f64::max);
    unitarity <= tol && (u.determinant() - c(1.0, 0.0)).norm() <= tol
}

/// Residuals of the conjugation identities of the register.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConjugationReport {
    /// `e^{-X} c_s e^{X} - Σ u_{ss'} c_{s'}` with `X = b†Ab + d†Ad`, `u = e^A`.
    pub su2_mixing: f64,
    /// `e^{-iY} b_s e^{iY} - e^{iα} b_s` and the `d`, `β` analogue, `Y = αb†b + βd†d`.
    pub phase: f64,
    /// `e^{-X} I₀ e^{X} - I₀`.
    pub i0_su2: f64,
    /// `e^{-iY} I₀ e^{iY} - I₀`.
    pub i0_phase: f64,
}

impl ConjugationReport {
    pub fn max_residual(&self) -> f64 {
        self.su2_mixing.max(self.phase).max(self.i0_su2).max(self.i0_phase)
    }
}

pub fn conjugation_report(
    reg: &JwRegister,
    q: &QuadraticForm,
    alpha: f64,
    beta: f64,
) -> Result<ConjugationReport> {
    let u = q.exponential();
    if !is_special_unitary(&u, 1e-10) {
        return Err(Error::Precondition("e^A is not in SU(2)".into()));
    }
    let fwd = quadratic_exponential(q);
    let back = quadratic_exponential(&QuadraticForm::new(-q.a));

    let mut su2_mixing: f64 = 0.0;
    for species in Species::ALL {
        for s in Spin::ALL {
            let lhs = &(&back * reg.annihilator(species, s)) * &fwd;
            let mut rhs = SparseOperator::zeros(REGISTER_DIM, REGISTER_DIM);
            for t in Spin::ALL {
                rhs = rhs.add_scaled(reg.annihilator(species, t), u[(s.index(), t.index())])?;
            }
            su2_mixing = su2_mixing.max(lhs.max_abs_diff(&rhs)?);
        }
    }

    let pf = phase_exponential(alpha, beta);
    let pb = phase_exponential(-alpha, -beta);
    let mut phase: f64 = 0.0;
    for (species, angle) in [(Species::Negaton, alpha), (Species::Positon, beta)] {
        for s in Spin::ALL {
            let op = reg.annihilator(species, s);
            let lhs = &(&pb * op) * &pf;
            phase = phase.max(lhs.max_abs_diff(&op.scale(c(0.0, angle).exp()))?);
        }
    }

    let i0_su2 = (&(&back * &reg.i0) * &fwd).max_abs_diff(&reg.i0)?;
    let i0_phase = (&(&pb * &reg.i0) * &pf).max_abs_diff(&reg.i0)?;
    Ok(ConjugationReport {
        su2_mixing,
        phase,
        i0_su2,
        i0_phase,
    })
}

/// `i(xσ₁ + yσ₂ + zσ₃)`; traceless and anti-Hermitian, so `e^A ∈ SU(2)`.
pub fn su2_generator(x: f64, y: f64, z: f64) -> Matrix2<C64> {
    Matrix2::new(c(0.0, z), c(y, x), c(-y, x), c(0.0, -z))
}
