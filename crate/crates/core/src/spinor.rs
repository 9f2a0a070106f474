//! Two-spinor kinematics of a massive Dirac particle.
//!
//! Conventions: `ε_{01} = ε^{01} = +1`, raising `ξ^A = ε^{AB} ξ_B` and
//! lowering `ξ_B = ξ^A ε_{AB}`, so `ξ^0 = ξ_1` and `ξ^1 = -ξ_0`. The contraction
//! `ξ_A η^A` of two lower-index spinors is therefore `ξ_0 η_1 - ξ_1 η_0`.
//! A momentum is the Hermitian matrix `p_{AA'} = (E·𝟙 + p·σ)/√2`, with
//! `det p_{AA'} = m²/2`. `SL(2,C)` acts on it by `p ↦ Λ p Λ†` and on lower
//! unprimed spinors by `ξ ↦ Λ ξ`.
//!
//! With these conventions the eigen-bispinor labelled `(+)` carries spin
//! projection `+1/2` and `(−)` carries `−1/2`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::engine::{c, C64};
use crate::error::{Error, Result};
use crate::jw::{expm2, Spin};
use crate::modes::{ModeAmplitude, MomentumLattice};

/// Degeneracy threshold for the primary reference spinor, relative to `E`.
pub const FRAME_DEGENERACY: f64 = 1e-8;

/// On-shell four-momentum `(E, p)` of mass `m`, natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub e: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub mass: f64,
}

impl FourMomentum {
    pub fn on_shell(mass: f64, p: [f64; 3]) -> Self {
        let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + mass * mass).sqrt();
        Self {
            e,
            px: p[0],
            py: p[1],
            pz: p[2],
            mass,
        }
    }

    pub fn at_rest(mass: f64) -> Self {
        Self::on_shell(mass, [0.0, 0.0, 0.0])
    }

    /// `(m cosh η, 0, 0, m sinh η)`.
    pub fn along_z(mass: f64, rapidity: f64) -> Self {
        Self {
            e: mass * rapidity.cosh(),
            px: 0.0,
            py: 0.0,
            pz: mass * rapidity.sinh(),
            mass,
        }
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.px, self.py, self.pz]
    }

    /// Lower-index components `p_a = (E, -p)` in signature `(+,−,−,−)`.
    pub fn lower(&self) -> [f64; 4] {
        [self.e, -self.px, -self.py, -self.pz]
    }

    /// `p·x = E t - p·x`.
    pub fn dot(&self, x: &SpacetimePoint) -> f64 {
        self.e * x.t - self.px * x.x - self.py * x.y - self.pz * x.z
    }

    pub fn check_on_shell(&self) -> Result<()> {
        let expect = (self.px * self.px + self.py * self.py + self.pz * self.pz
            + self.mass * self.mass)
            .sqrt();
        if self.mass < 0.0 || self.e <= 0.0 || (self.e - expect).abs() > 1e-12 * expect.max(1.0) {
            return Err(Error::Precondition(format!("momentum {self:?} is not on shell")));
        }
        Ok(())
    }

    /// `p_{AA'} = (E·𝟙 + p·σ)/√2`.
    pub fn hermitian(&self) -> Matrix2<C64> {
        to_hermitian([self.e, self.px, self.py, self.pz])
    }

    /// Inverse of [`FourMomentum::hermitian`]; the mass label is carried over.
    pub fn from_hermitian(h: &Matrix2<C64>, mass: f64) -> Self {
        let [e, px, py, pz] = from_hermitian(h);
        Self { e, px, py, pz, mass }
    }

    /// `E - p_z` without cancellation for large positive `p_z`.
    fn e_minus_pz(&self) -> f64 {
        if self.pz > 0.0 {
            (self.mass * self.mass + self.px * self.px + self.py * self.py) / (self.e + self.pz)
        } else {
            self.e - self.pz
        }
    }

    fn e_plus_pz(&self) -> f64 {
        if self.pz < 0.0 {
            (self.mass * self.mass + self.px * self.px + self.py * self.py) / (self.e - self.pz)
        } else {
            self.e + self.pz
        }
    }
}

pub fn momentum_to_hermitian(p: &FourMomentum) -> Matrix2<C64> {
    p.hermitian()
}

fn to_hermitian(v: [f64; 4]) -> Matrix2<C64> {
    let s = 1.0 / SQRT_2;
    Matrix2::new(
        c(s * (v[0] + v[3]), 0.0),
        c(s * v[1], -s * v[2]),
        c(s * v[1], s * v[2]),
        c(s * (v[0] - v[3]), 0.0),
    )
}

fn from_hermitian(h: &Matrix2<C64>) -> [f64; 4] {
    let s = 1.0 / SQRT_2;
    [
        s * (h[(0, 0)].re + h[(1, 1)].re),
        SQRT_2 * h[(0, 1)].re,
        -SQRT_2 * h[(0, 1)].im,
        s * (h[(0, 0)].re - h[(1, 1)].re),
    ]
}

/// Spacetime point `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn hermitian(&self) -> Matrix2<C64> {
        to_hermitian([self.t, self.x, self.y, self.z])
    }

    pub fn from_hermitian(h: &Matrix2<C64>) -> Self {
        let [t, x, y, z] = from_hermitian(h);
        Self { t, x, y, z }
    }

    pub fn offset(&self, other: &Self, sign: f64) -> Self {
        Self {
            t: self.t + sign * other.t,
            x: self.x + sign * other.x,
            y: self.y + sign * other.y,
            z: self.z + sign * other.z,
        }
    }
}

/// A two-component spinor with its index type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinor {
    pub comps: [C64; 2],
    pub primed: bool,
    pub upper: bool,
}

impl TwoSpinor {
    /// Lower-index unprimed spinor `ξ_A`.
    pub fn lower(c0: C64, c1: C64) -> Self {
        Self {
            comps: [c0, c1],
            primed: false,
            upper: false,
        }
    }

    pub fn raised(&self) -> Self {
        assert!(!self.upper, "spinor index already raised");
        Self {
            comps: [self.comps[1], -self.comps[0]],
            upper: true,
            ..*self
        }
    }

    pub fn lowered(&self) -> Self {
        assert!(self.upper, "spinor index already lowered");
        Self {
            comps: [-self.comps[1], self.comps[0]],
            upper: false,
            ..*self
        }
    }

    /// Complex conjugate; toggles primed/unprimed.
    pub fn conj(&self) -> Self {
        Self {
            comps: [self.comps[0].conj(), self.comps[1].conj()],
            primed: !self.primed,
            upper: self.upper,
        }
    }

    /// `self_A other^A` for two lower-index spinors of the same kind.
    pub fn contract(&self, other: &Self) -> C64 {
        assert!(!self.upper && !other.upper, "contract expects lower indices");
        assert_eq!(self.primed, other.primed, "cannot contract primed with unprimed");
        self.comps[0] * other.comps[1] - self.comps[1] * other.comps[0]
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            comps: [self.comps[0] * a, self.comps[1] * a],
            ..*self
        }
    }

    pub fn transformed(&self, m: &Matrix2<C64>) -> Self {
        let v = m * nalgebra::Vector2::new(self.comps[0], self.comps[1]);
        Self {
            comps: [v[0], v[1]],
            ..*self
        }
    }

    fn outer_conj(&self) -> Matrix2<C64> {
        let v = nalgebra::Vector2::new(self.comps[0], self.comps[1]);
        v * v.adjoint()
    }
}

/// Null decomposition `p_{AA'} = π_A π̄_{A'} + (m²/2) ω_A ω̄_{A'}` with `ω_A π^A = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinFrame {
    pub omega: TwoSpinor,
    pub pi: TwoSpinor,
    pub momentum: FourMomentum,
    /// Whether the fallback reference spinor `(0,1)` was used.
    pub fallback: bool,
}

impl SpinFrame {
    /// `ω_A π^A`; equal to 1 for a valid frame.
    pub fn normalization(&self) -> C64 {
        self.omega.contract(&self.pi)
    }

    /// `π π̄ + (m²/2) ω ω̄` as a Hermitian matrix.
    pub fn reconstruct(&self) -> Matrix2<C64> {
        let m2 = self.momentum.mass * self.momentum.mass;
        self.pi.outer_conj() + self.omega.outer_conj() * c(0.5 * m2, 0.0)
    }

    /// Max-abs distance between the reconstruction and `p_{AA'}`.
    pub fn reconstruction_error(&self) -> f64 {
        max_abs(&(self.reconstruct() - self.momentum.hermitian()))
    }

    /// Spin frame transported by `Λ`: `(Λω, Λπ)` at `Λp`.
    pub fn transported(&self, lambda: &Sl2c) -> SpinFrame {
        SpinFrame {
            omega: self.omega.transformed(&lambda.0),
            pi: self.pi.transformed(&lambda.0),
            momentum: lambda.act_momentum(&self.momentum),
            fallback: self.fallback,
        }
    }
}

pub(crate) fn max_abs(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Builds the spin frame of an on-shell momentum in the reference gauge
/// `ω ∝ (1,0)`, switching to `ω ∝ (0,1)` when `p` is within
/// [`FRAME_DEGENERACY`]`·E` of the reference null direction.
pub fn build_spin_frame(p: &FourMomentum) -> Result<SpinFrame> {
    if p.mass <= 0.0 {
        return Err(Error::UnsupportedMass);
    }
    p.check_on_shell()?;
    let transverse = c(p.px, -p.py) * (1.0 / SQRT_2); // p_{01}
    let e_minus = p.e_minus_pz();
    // ‖p_{AA'} ō^{A'}‖ for o = (1,0), i.e. the norm of the second column.
    let column = (transverse.norm_sqr() + 0.5 * e_minus * e_minus).sqrt();
    let zero = c(0.0, 0.0);
    if column >= FRAME_DEGENERACY * p.e {
        let lambda = (SQRT_2 / e_minus).sqrt();
        Ok(SpinFrame {
            omega: TwoSpinor::lower(c(lambda, 0.0), zero),
            pi: TwoSpinor::lower(transverse * lambda, c(1.0 / lambda, 0.0)),
            momentum: *p,
            fallback: false,
        })
    } else {
        let mu = (SQRT_2 / p.e_plus_pz()).sqrt();
        Ok(SpinFrame {
            omega: TwoSpinor::lower(zero, c(mu, 0.0)),
            pi: TwoSpinor::lower(c(-1.0 / mu, 0.0), -transverse.conj() * mu),
            momentum: *p,
            fallback: true,
        })
    }
}

/// Dirac bispinor `(ψ_A, ψ_{A'})`; component index `α` runs over
/// `ψ_0, ψ_1, ψ_{0'}, ψ_{1'}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bispinor {
    pub unprimed: TwoSpinor,
    pub primed: TwoSpinor,
}

impl Bispinor {
    pub fn new(unprimed: [C64; 2], primed: [C64; 2]) -> Self {
        Self {
            unprimed: TwoSpinor::lower(unprimed[0], unprimed[1]),
            primed: TwoSpinor {
                comps: primed,
                primed: true,
                upper: false,
            },
        }
    }

    pub fn zero() -> Self {
        let z = c(0.0, 0.0);
        Self::new([z, z], [z, z])
    }

    pub fn components(&self) -> Vector4<C64> {
        Vector4::new(
            self.unprimed.comps[0],
            self.unprimed.comps[1],
            self.primed.comps[0],
            self.primed.comps[1],
        )
    }

    pub fn from_components(v: &Vector4<C64>) -> Self {
        Self::new([v[0], v[1]], [v[2], v[3]])
    }

    pub fn component(&self, alpha: usize) -> C64 {
        self.components()[alpha]
    }

    pub fn norm(&self) -> f64 {
        self.components().norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Positive,
    Negative,
}

impl Frequency {
    pub fn sign(self) -> f64 {
        match self {
            Frequency::Positive => 1.0,
            Frequency::Negative => -1.0,
        }
    }
}

/// The four solutions `φ^{(s)}_{±}` at one momentum, indexed by frequency and spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenBispinors {
    positive: [Bispinor; 2],
    negative: [Bispinor; 2],
}

impl EigenBispinors {
    pub fn get(&self, freq: Frequency, spin: Spin) -> &Bispinor {
        match freq {
            Frequency::Positive => &self.positive[spin.index()],
            Frequency::Negative => &self.negative[spin.index()],
        }
    }
}

/// `φ^{(+)}_± = (±(m/√2) ω_A, −π̄_{A'})`, `φ^{(−)}_± = (−π_A, ∓(m/√2) ω̄_{A'})`.
pub fn eigen_bispinors(frame: &SpinFrame) -> EigenBispinors {
    let k = frame.momentum.mass / SQRT_2;
    let omega = frame.omega.comps;
    let pi = frame.pi.comps;
    let omega_bar = frame.omega.conj().comps;
    let pi_bar = frame.pi.conj().comps;
    let scaled = |v: [C64; 2], a: f64| [v[0] * a, v[1] * a];
    let spin_up = |sign: f64| Bispinor::new(scaled(omega, sign * k), scaled(pi_bar, -1.0));
    let spin_down = |sign: f64| Bispinor::new(scaled(pi, -1.0), scaled(omega_bar, -sign * k));
    EigenBispinors {
        positive: [spin_down(1.0), spin_up(1.0)],
        negative: [spin_down(-1.0), spin_up(-1.0)],
    }
}

/// Spin projections `S_A{}^B = ½(π_A ω^B + ω_A π^B)` and
/// `S_{A'}{}^{B'} = −½(π̄_{A'} ω̄^{B'} + ω̄_{A'} π̄^{B'})` as matrices `[row][col]`.
pub fn pauli_lubanski_projection(frame: &SpinFrame) -> (Matrix2<C64>, Matrix2<C64>) {
    let block = |lower_a: &TwoSpinor, lower_b: &TwoSpinor, scale: f64| {
        let (a_up, b_up) = (lower_a.raised(), lower_b.raised());
        Matrix2::from_fn(|r, col| {
            (lower_b.comps[r] * a_up.comps[col] + lower_a.comps[r] * b_up.comps[col]) * scale
        })
    };
    let unprimed = block(&frame.omega, &frame.pi, 0.5);
    let primed = block(&frame.omega.conj(), &frame.pi.conj(), -0.5);
    (unprimed, primed)
}

/// Relative residual `‖D ψ‖ / ‖ψ‖` of the momentum-space Dirac operator for
/// a plane wave `ψ e^{∓ip·x}` (upper sign for positive frequency).
pub fn dirac_residual(p: &FourMomentum, psi: &Bispinor, freq: Frequency) -> Result<f64> {
    p.check_on_shell()?;
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::UndefinedResidual);
    }
    let s = freq.sign();
    let k = p.mass / SQRT_2;
    let h = p.hermitian();
    let up = psi.unprimed.raised().comps;
    let up_primed = psi.primed.raised().comps;
    let mut out = [c(0.0, 0.0); 4];
    for a in 0..2 {
        // (m/√2) ψ_A − i∇_A{}^{B'} ψ_{B'}  →  (m/√2) ψ_A + s p_{AC'} ψ^{C'}
        let kinetic: C64 = (0..2).map(|cc| h[(a, cc)] * up_primed[cc]).sum();
        out[a] = psi.unprimed.comps[a] * k + kinetic * s;
        // i∇^B{}_{A'} ψ_B + (m/√2) ψ_{A'}  →  −s p_{CA'} ψ^C + (m/√2) ψ_{A'}
        let kinetic: C64 = (0..2).map(|cc| h[(cc, a)] * up[cc]).sum();
        out[2 + a] = psi.primed.comps[a] * k - kinetic * s;
    }
    Ok(out.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() / norm)
}

/// Element of `SL(2,C)` in the `(1/2, 0)` representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2c(pub Matrix2<C64>);

impl Sl2c {
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        if (m.determinant() - c(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Precondition("SL(2,C) element must have unit determinant".into()));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// `exp(½ (θ + iη)·σ)` up to the sign convention: rotation angles `θ`
    /// enter as `−i θ·σ/2` and rapidities `η` as `η·σ/2`.
    pub fn from_parameters(rotation: [f64; 3], rapidity: [f64; 3]) -> Self {
        let gen = |k: usize| c(0.5 * rapidity[k], -0.5 * rotation[k]);
        let (gx, gy, gz) = (gen(0), gen(1), gen(2));
        // g_x σ₁ + g_y σ₂ + g_z σ₃
        let m = Matrix2::new(gz, gx - gy * c(0.0, 1.0), gx + gy * c(0.0, 1.0), -gz);
        Self(expm2(&m))
    }

    /// Pure boost of rapidity `eta` along +z: `diag(e^{η/2}, e^{−η/2})`.
    pub fn boost_z(eta: f64) -> Self {
        Self(Matrix2::new(
            c((0.5 * eta).exp(), 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c((-0.5 * eta).exp(), 0.0),
        ))
    }

    pub fn inverse(&self) -> Self {
        let m = self.0;
        Self(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// Vector representation: `p_{AA'} ↦ Λ p Λ†`.
    pub fn act_momentum(&self, p: &FourMomentum) -> FourMomentum {
        let h = self.0 * p.hermitian() * self.0.adjoint();
        let mut q = FourMomentum::from_hermitian(&h, p.mass);
        // Re-project onto the hyperboloid to remove rounding drift in E.
        q.e = (q.px * q.px + q.py * q.py + q.pz * q.pz + p.mass * p.mass).sqrt();
        q
    }

    pub fn act_point(&self, x: &SpacetimePoint) -> SpacetimePoint {
        SpacetimePoint::from_hermitian(&(self.0 * x.hermitian() * self.0.adjoint()))
    }

    /// `Λ_α{}^β = Λ ⊕ Λ̄` acting on `(ψ_A, ψ_{A'})`.
    pub fn bispinor(&self) -> Matrix4<C64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.0);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.0.map(|v| v.conj()));
        m
    }
}

/// Element of `SU(2)` acting on spin labels ordered `(−, +)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Matrix(pub Matrix2<C64>);

impl Su2Matrix {
    pub fn unitarity_error(&self) -> f64 {
        max_abs(&(self.0 * self.0.adjoint() - Matrix2::identity()))
    }

    pub fn determinant_error(&self) -> f64 {
        (self.0.determinant() - c(1.0, 0.0)).norm()
    }

    /// Hermitian `A` with `u = e^{iA}`, principal branch. Fails at `u = −𝟙`.
    pub fn generator(&self) -> Result<Matrix2<C64>> {
        let cos = (0.5 * self.0.trace().re).clamp(-1.0, 1.0);
        let theta = cos.acos();
        let sin = theta.sin();
        if sin.abs() < 1e-12 {
            if cos > 0.0 {
                return Ok(Matrix2::zeros());
            }
            return Err(Error::Precondition("principal logarithm undefined at u = -1".into()));
        }
        // u = cos θ 𝟙 + i sin θ n·σ
        let n_sigma = (self.0 - Matrix2::identity() * c(cos, 0.0)) * c(0.0, -1.0 / sin);
        Ok(n_sigma * c(theta, 0.0))
    }
}

/// `u(Λ, p)` built from the frame at `p` and the frame at `Λ⁻¹p` transported by `Λ`.
pub fn wigner_matrix(lambda: &Sl2c, p: &FourMomentum) -> Result<Su2Matrix> {
    let frame = build_spin_frame(p)?;
    let source = build_spin_frame(&lambda.inverse().act_momentum(p))?;
    let moved = source.transported(lambda);
    let k = p.mass / SQRT_2;
    let w_pi = frame.omega.contract(&moved.pi);
    let w_omega = frame.omega.contract(&moved.omega);
    Ok(Su2Matrix(Matrix2::new(
        w_pi,
        -w_omega * k,
        w_omega.conj() * k,
        w_pi.conj(),
    )))
}

/// Discretized Fourier synthesis of a classical Dirac solution:
/// `ψ_α(x) = Σ_i w_i Σ_s [φ^{(s)}_{+,α} f(p_i,s) e^{−ip_i·x} + φ^{(s)}_{−,α} conj(g(p_i,−s)) e^{ip_i·x}]`.
/// With `conjugate` set, `f` and `g` exchange roles.
pub fn classical_solution(
    lattice: &MomentumLattice,
    f: &ModeAmplitude,
    g: &ModeAmplitude,
    x: &SpacetimePoint,
    conjugate: bool,
) -> Result<Bispinor> {
    let m = lattice.len();
    if f.len() != m || g.len() != m {
        return Err(Error::Shape {
            op: "classical_solution",
            lhs: (m, 2),
            rhs: (f.len().max(g.len()), 2),
        });
    }
    let (f, g) = if conjugate { (g, f) } else { (f, g) };
    let mut psi = Vector4::zeros();
    for (i, p) in lattice.points().iter().enumerate() {
        let phi = eigen_bispinors(&build_spin_frame(p)?);
        let w = lattice.weights()[i];
        let phase = c(0.0, -p.dot(x)).exp();
        for s in Spin::ALL {
            psi += phi.get(Frequency::Positive, s).components() * (f.get(i, s) * phase * w);
            psi += phi.get(Frequency::Negative, s).components()
                * (g.get(i, s.flip()).conj() * phase.conj() * w);
        }
    }
    Ok(Bispinor::from_components(&psi))
}
