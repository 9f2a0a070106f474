//! Acceptance criteria 1 to 12. Runs without the libtest harness so that the
//! PASS/FAIL line of every criterion is printed under a plain `cargo test`.

use std::f64::consts::SQRT_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reducible_car::engine::{anticommutator, commutator, Exec};
use reducible_car::jw::{
    conjugation_report, quadratic_exponential, su2_generator, JwRegister, Ladder, QuadraticForm, Species, Spin,
};
use reducible_car::modes::{build_lattice, FieldPoint, LatticeSpec, ModeAmplitude, SingleOscillatorSpace};
use reducible_car::oscillator::{
    large_n_convergence, slater_operators, vacuum_matrix_element, vacuum_matrix_element_explicit, LadderOp,
    NRegister, ProfileShape, VacuumProfile,
};
use reducible_car::spinor::{
    build_spin_frame, dirac_residual, eigen_bispinors, pauli_lubanski_projection, wigner_matrix, Bispinor,
    FourMomentum, Frequency, Sl2c, SpacetimePoint, SpinFrame,
};
use reducible_car::symmetry::{
    boost_check, charge_operator, field_covariance_check, four_momentum, gauge_check, spin_operator,
    translation_check, translation_unitary, vacuum_covariance, vacuum_energy, vacuum_energy_expectation, BoostStep,
    BosonicSector,
};
use reducible_car::{SparseOperator, C64};

type Dense = DMatrix<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Named claims of one criterion; the criterion passes when all hold.
#[derive(Default)]
struct Claims(Vec<(String, bool, String)>);

impl Claims {
    fn le(&mut self, what: &str, value: f64, tol: f64) {
        self.0.push((what.to_string(), value <= tol, format!("{:.3e} <= {tol:.0e}", value + 0.0)));
    }

    fn holds(&mut self, what: &str, ok: bool, detail: String) {
        self.0.push((what.to_string(), ok, detail));
    }
}

// ---- oracles ---------------------------------------------------------------

fn max_abs(m: &Dense) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Taylor series with scaling and squaring.
fn expm_taylor(a: &Dense) -> Dense {
    let norm: f64 = (0..a.ncols()).map(|j| a.column(j).iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let scaled = a * c(0.5f64.powi(squarings), 0.0);
    let n = a.nrows();
    let mut sum = Dense::identity(n, n);
    let mut term = Dense::identity(n, n);
    for k in 1..40 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn anti(a: &Dense, b: &Dense) -> Dense {
    a * b + b * a
}

/// Leibniz expansion of the determinant.
fn leibniz_det(m: &Dense) -> C64 {
    fn perms(k: usize) -> Vec<(Vec<usize>, f64)> {
        if k == 0 {
            return vec![(vec![], 1.0)];
        }
        let mut out = Vec::new();
        for (p, sign) in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                // Inserting at `pos` passes over `len - pos` larger-indexed slots.
                let flips = p.len() - pos;
                out.push((q, if flips % 2 == 0 { sign } else { -sign }));
            }
        }
        out
    }
    perms(m.nrows())
        .into_iter()
        .map(|(p, sign)| p.iter().enumerate().map(|(r, &col)| m[(r, col)]).product::<C64>() * sign)
        .sum()
}

/// `⟨f|g⟩_Z` straight from its defining sum.
fn z_inner(f: &ModeAmplitude, g: &ModeAmplitude, profile: &VacuumProfile) -> C64 {
    let mut total = c(0.0, 0.0);
    for i in 0..f.len() {
        let z = profile.values()[i].norm_sqr();
        for s in Spin::ALL {
            total += f.get(i, s).conj() * g.get(i, s) * (profile.weights()[i] * z);
        }
    }
    total
}

/// `(E + p·σ)/√2`.
fn momentum_matrix(p: &FourMomentum) -> Matrix2<C64> {
    Matrix2::new(c(p.e + p.pz, 0.0), c(p.px, -p.py), c(p.px, p.py), c(p.e - p.pz, 0.0)) * c(1.0 / SQRT_2, 0.0)
}

/// Two-spinor Dirac equation for a plane wave of frequency sign `s`:
/// `(m/√2)ψ_A + s p_{AB'}ψ^{B'} = 0` and `(m/√2)ψ_{A'} − s p_{BA'}ψ^B = 0`,
/// with `ψ^A = ε^{AB}ψ_B`, `ε = [[0, 1], [−1, 0]]`.
fn spinor_dirac_residual(p: &FourMomentum, psi: &Bispinor, s: f64) -> f64 {
    let eps = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
    let h = momentum_matrix(p);
    let k = c(p.mass / SQRT_2, 0.0);
    let left = nalgebra::Vector2::new(psi.unprimed.comps[0], psi.unprimed.comps[1]);
    let right = nalgebra::Vector2::new(psi.primed.comps[0], psi.primed.comps[1]);
    let r1 = left * k + h * (eps * right) * c(s, 0.0);
    let r2 = right * k - h.transpose() * (eps * left) * c(s, 0.0);
    (r1.norm_squared() + r2.norm_squared()).sqrt() / psi.norm()
}

/// `ππ̄ + (m²/2)ωω̄` and `ω_0π_1 − ω_1π_0` computed from raw components.
fn frame_errors(f: &SpinFrame) -> (f64, f64) {
    let (w, p) = (f.omega.comps, f.pi.comps);
    let k = f.momentum.mass * f.momentum.mass / 2.0;
    let rebuilt = Matrix2::from_fn(|a, b| p[a] * p[b].conj() + w[a] * w[b].conj() * k);
    let recon = (rebuilt - momentum_matrix(&f.momentum)).norm();
    let norm = (w[0] * p[1] - w[1] * p[0] - c(1.0, 0.0)).norm();
    (recon, norm)
}

/// `u(Λ,p)` fitted from `Λ φ_+^(t)(Λ⁻¹p) = Σ_s φ_+^(s)(p) u_st` by least squares.
fn wigner_oracle(lambda: &Sl2c, p: &FourMomentum) -> (Matrix2<C64>, f64) {
    let here = eigen_bispinors(&build_spin_frame(p).unwrap());
    let there = eigen_bispinors(&build_spin_frame(&lambda.inverse().act_momentum(p)).unwrap());
    let phi = Dense::from_fn(4, 2, |r, s| here.get(Frequency::Positive, Spin::ALL[s]).components()[r]);
    let big = lambda.bispinor();
    let rhs = Dense::from_fn(4, 2, |r, t| (big * there.get(Frequency::Positive, Spin::ALL[t]).components())[r]);
    let normal = phi.adjoint() * &phi;
    let u = normal.lu().solve(&(phi.adjoint() * &rhs)).unwrap();
    let fit = max_abs(&(&phi * &u - &rhs));
    (Matrix2::from_fn(|a, b| u[(a, b)]), fit)
}

/// `(1/√N) Σ_k I₀^{⊗(k−1)} ⊗ op ⊗ 𝟙^{⊗(N−k)}` assembled factor by factor.
fn extend_oracle(op: &SparseOperator, i0: &SparseOperator, n: usize) -> SparseOperator {
    let id = SparseOperator::identity(op.rows());
    let mut total = SparseOperator::zeros(op.rows().pow(n as u32), op.cols().pow(n as u32));
    for k in 0..n {
        let mut term = SparseOperator::identity(1);
        for j in 0..n {
            let factor = if j < k { i0 } else if j == k { op } else { &id };
            term = term.kron(factor).unwrap();
        }
        total = total.add_scaled(&term, c(1.0 / (n as f64).sqrt(), 0.0)).unwrap();
    }
    total
}

// ---- helpers ---------------------------------------------------------------

fn space(j_min: i64, j_max: i64) -> SingleOscillatorSpace {
    SingleOscillatorSpace::new(build_lattice(&LatticeSpec::rapidity_range(1.0, j_min, j_max, 0.4)).unwrap()).unwrap()
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn amplitude(m: usize, rng: &mut ChaCha8Rng) -> ModeAmplitude {
    ModeAmplitude::from_fn(m, |_, _| random_c(rng))
}

fn generic_profile(sp: &SingleOscillatorSpace, rng: &mut ChaCha8Rng) -> VacuumProfile {
    let values = (0..sp.modes()).map(|_| c(rng.gen_range(0.2..1.0), rng.gen_range(-0.5..0.5))).collect();
    VacuumProfile::new(sp.lattice(), values).unwrap()
}

fn random_momentum(rng: &mut ChaCha8Rng, max_p: f64) -> FourMomentum {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-max_p..max_p));
        if v.iter().map(|x| x * x).sum::<f64>() <= max_p * max_p {
            return FourMomentum::on_shell(1.0, v);
        }
    }
}

fn random_lorentz(rng: &mut ChaCha8Rng) -> Sl2c {
    let mut r = || rng.gen_range(-1.0..1.0);
    Sl2c::from_parameters([2.0 * r(), 2.0 * r(), 2.0 * r()], [r(), r(), r()])
}

fn annihilators(reg: &JwRegister) -> Vec<(Ladder, Dense)> {
    Ladder::all()
        .into_iter()
        .filter(|l| !l.dagger)
        .map(|l| (l, reg.annihilator(l.species, l.spin).to_dense()))
        .collect()
}

// ---- criteria --------------------------------------------------------------

fn criterion_1(out: &mut Claims) {
    let reg = JwRegister::new();
    let table = reg.car_table();
    out.holds("28 pairs", table.len() == 28, format!("{} pairs", table.len()));
    out.le("library table residual", table.iter().map(|p| p.residual).fold(0.0, f64::max), 1e-14);

    // Oracle: dense products over all 8 ladder operators, unordered pairs with repetition.
    let ops: Vec<(Ladder, Dense)> = Ladder::all().into_iter().map(|l| (l, reg.ladder(l).to_dense())).collect();
    let id = Dense::identity(16, 16);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for (k, (la, a)) in ops.iter().enumerate() {
        for (lb, b) in &ops[k..] {
            pairs += 1;
            let conjugate = la.species == lb.species && la.spin == lb.spin && la.dagger != lb.dagger;
            let expect = if conjugate { id.clone() } else { Dense::zeros(16, 16) };
            worst = worst.max(max_abs(&(anti(a, b) - expect)));
        }
    }
    out.holds("oracle pair count", pairs == 36, format!("{pairs} unordered pairs incl. squares"));
    out.le("oracle dense anticommutators", worst, 1e-14);
}

fn criterion_2(out: &mut Claims) {
    let reg = JwRegister::new();
    let ann = annihilators(&reg);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut largest: f64 = 0.0;
    for _ in 0..50 {
        let m = Matrix2::from_fn(|_, _| random_c(&mut rng));
        let a = m * c(rng.gen_range(0.0..2.0) / m.norm(), 0.0);
        largest = largest.max(a.norm());
        let mut gen = Dense::zeros(16, 16);
        for (li, ci) in &ann {
            for (lj, cj) in &ann {
                if li.species == lj.species {
                    gen += ci.adjoint() * cj * a[(li.spin.index(), lj.spin.index())];
                }
            }
        }
        let block = quadratic_exponential(&QuadraticForm::new(a)).to_dense();
        worst = worst.max(max_abs(&(block - expm_taylor(&gen))));
    }
    out.le("‖A‖_F", largest, 2.0);
    out.le("block vs dense exponential", worst, 1e-10);
}

fn criterion_3(out: &mut Claims) {
    let reg = JwRegister::new();
    let ann = annihilators(&reg);
    let i0 = reg.i0.to_dense();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut su2, mut phase, mut i0_res, mut oracle): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..50 {
        let a = su2_generator(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (alpha, beta) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let r = conjugation_report(&reg, &QuadraticForm::new(a), alpha, beta).unwrap();
        su2 = su2.max(r.su2_mixing);
        phase = phase.max(r.phase);
        i0_res = i0_res.max(r.i0_su2).max(r.i0_phase);

        // Oracle: e^{-X} c e^{X} with X = b†Ab + d†Ad through the Taylor exponential.
        let mut x = Dense::zeros(16, 16);
        let mut y = Dense::zeros(16, 16);
        for (li, ci) in &ann {
            for (lj, cj) in &ann {
                if li.species == lj.species {
                    x += ci.adjoint() * cj * a[(li.spin.index(), lj.spin.index())];
                }
            }
            let angle = if li.species == Species::Negaton { alpha } else { beta };
            y += ci.adjoint() * ci * c(angle, 0.0);
        }
        let (fwd, back) = (expm_taylor(&x), expm_taylor(&(-&x)));
        let u = nalgebra_expm2(&a);
        let (pf, pb) = (expm_taylor(&(&y * c(0.0, 1.0))), expm_taylor(&(&y * c(0.0, -1.0))));
        for (li, ci) in &ann {
            let mixed: Dense = ann
                .iter()
                .filter(|(lj, _)| lj.species == li.species)
                .map(|(lj, cj)| cj * u[(li.spin.index(), lj.spin.index())])
                .fold(Dense::zeros(16, 16), |acc, t| acc + t);
            oracle = oracle.max(max_abs(&(&back * ci * &fwd - mixed)));
            let angle = if li.species == Species::Negaton { alpha } else { beta };
            oracle = oracle.max(max_abs(&(&pb * ci * &pf - ci * c(0.0, angle).exp())));
        }
        oracle = oracle.max(max_abs(&(&back * &i0 * &fwd - &i0)));
    }
    out.le("SU(2) mixing", su2, 1e-10);
    out.le("phase conjugation", phase, 1e-10);
    out.le("I₀ conjugation", i0_res, 1e-14);
    out.le("Taylor-exponential oracle", oracle, 1e-10);
}

/// `e^A` for a 2×2 matrix through the Taylor oracle.
fn nalgebra_expm2(a: &Matrix2<C64>) -> Matrix2<C64> {
    let d = expm_taylor(&Dense::from_fn(2, 2, |r, col| a[(r, col)]));
    Matrix2::from_fn(|r, col| d[(r, col)])
}

fn criterion_4(out: &mut Claims) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut recon, mut norm, mut oracle_recon, mut oracle_norm): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut momenta: Vec<FourMomentum> = (0..1000).map(|_| random_momentum(&mut rng, 10.0)).collect();
    // Near the reference null direction, where the fallback branch applies.
    momenta.extend([[0.0, 0.0, 1e5], [1e-6, -2e-6, 3e4], [0.0, 0.0, 1e4], [3e-7, 0.0, 8e3]].map(|p| FourMomentum::on_shell(1.0, p)));
    let mut fallbacks = 0;
    for p in &momenta {
        let f = build_spin_frame(p).unwrap();
        fallbacks += f.fallback as usize;
        recon = recon.max(f.reconstruction_error() / p.e);
        norm = norm.max((f.normalization() - c(1.0, 0.0)).norm());
        let (r, n) = frame_errors(&f);
        oracle_recon = oracle_recon.max(r / p.e);
        oracle_norm = oracle_norm.max(n);
    }
    out.holds("fallback branch exercised", fallbacks >= 4, format!("{fallbacks} fallback frames"));
    out.le("reconstruction / E", recon, 1e-11);
    out.le("ω_Aπ^A − 1", norm, 1e-12);
    out.le("oracle reconstruction / E", oracle_recon, 1e-11);
    out.le("oracle ω_0π_1 − ω_1π_0 − 1", oracle_norm, 1e-12);
}

fn criterion_5(out: &mut Claims) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut dirac, mut oracle, mut pl, mut wrong): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, f64::INFINITY);
    for _ in 0..500 {
        let p = random_momentum(&mut rng, 10.0);
        let frame = build_spin_frame(&p).unwrap();
        let phi = eigen_bispinors(&frame);
        for s in Spin::ALL {
            for (freq, other) in [(Frequency::Positive, Frequency::Negative), (Frequency::Negative, Frequency::Positive)] {
                let b = phi.get(freq, s);
                dirac = dirac.max(dirac_residual(&p, b, freq).unwrap());
                oracle = oracle.max(spinor_dirac_residual(&p, b, freq.sign()));
                wrong = wrong.min(spinor_dirac_residual(&p, b, other.sign()));
            }
        }
        // Eigenvalues of the traceless blocks from the characteristic polynomial,
        // and the eigenvector equation on the positive-frequency bispinors.
        let (unprimed, primed) = pauli_lubanski_projection(&frame);
        for block in [unprimed, primed] {
            let lambda = (-block.determinant()).sqrt();
            pl = pl.max(block.trace().norm()).max((lambda - c(0.5, 0.0)).norm());
        }
        for s in Spin::ALL {
            let b = phi.get(Frequency::Positive, s);
            for (block, v) in [(unprimed, b.unprimed.comps), (primed, b.primed.comps)] {
                let v = nalgebra::Vector2::new(v[0], v[1]);
                pl = pl.max((block * v - v * c(s.value(), 0.0)).norm() / v.norm());
            }
        }
    }
    out.le("Dirac residual, matching branch", dirac, 1e-12);
    out.le("two-spinor oracle, matching branch", oracle, 1e-12);
    out.holds("other branch is not a solution", wrong > 1e-3, format!("min residual {wrong:.3e}"));
    out.le("Pauli-Lubanski eigenvalues ±1/2", pl, 1e-12);
}

fn criterion_6(out: &mut Claims) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut unit, mut det, mut cocycle, mut oracle, mut fit): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..100 {
        let p = random_momentum(&mut rng, 5.0);
        let (l1, l2) = (random_lorentz(&mut rng), random_lorentz(&mut rng));
        let u1 = wigner_matrix(&l1, &p).unwrap();
        unit = unit.max(u1.unitarity_error());
        det = det.max(u1.determinant_error());
        let lhs = wigner_matrix(&l1.compose(&l2), &p).unwrap().0;
        let rhs = u1.0 * wigner_matrix(&l2, &l1.inverse().act_momentum(&p)).unwrap().0;
        cocycle = cocycle.max((lhs - rhs).iter().map(|v| v.norm()).fold(0.0, f64::max));
        let (u_oracle, residual) = wigner_oracle(&l1, &p);
        oracle = oracle.max((u_oracle - u1.0).iter().map(|v| v.norm()).fold(0.0, f64::max));
        fit = fit.max(residual);
    }
    out.le("unitarity", unit, 1e-10);
    out.le("det − 1", det, 1e-10);
    out.le("cocycle", cocycle, 1e-9);
    out.le("least-squares oracle vs u", oracle, 1e-9);
    out.le("oracle fit residual", fit, 1e-9);
}

fn criterion_7(out: &mut Claims) {
    for (n, j_max) in [(1usize, 1i64), (2, 1), (3, 0)] {
        let sp = space(0, j_max);
        let reg = NRegister::new(sp.clone(), n).unwrap();
        let w = sp.lattice().weights();
        let mut ops = Vec::new();
        let mut extension: f64 = 0.0;
        for i in 0..sp.modes() {
            for l in Ladder::all().into_iter().filter(|l| !l.dagger) {
                let local = sp.mode_annihilator(i, l.spin, l.species).unwrap();
                let lifted = reg.extend(&local).unwrap();
                extension = extension.max(lifted.max_abs_diff(&extend_oracle(&local, &sp.i0(), n)).unwrap());
                ops.push(((i, l), lifted));
            }
        }
        let centers: Vec<SparseOperator> = (0..sp.modes())
            .map(|i| reg.lift_average(&sp.mode_identity(i).unwrap()).unwrap())
            .collect();
        let (mut car, mut central): (f64, f64) = (0.0, 0.0);
        for (ka, a) in &ops {
            for (kb, b) in &ops {
                let expect = if ka == kb {
                    centers[ka.0].scale_real(1.0 / w[ka.0])
                } else {
                    SparseOperator::zeros(a.rows(), a.cols())
                };
                car = car.max(anticommutator(a, &b.adjoint()).unwrap().max_abs_diff(&expect).unwrap());
                car = car.max(anticommutator(a, b).unwrap().max_abs());
            }
            for center in &centers {
                central = central.max(commutator(center, a).unwrap().max_abs());
                central = central.max(commutator(center, &a.adjoint()).unwrap().max_abs());
            }
        }
        let tag = format!("N={n}, M={}", sp.modes());
        out.le(&format!("{tag}: extension vs oracle"), extension, 1e-15);
        out.le(&format!("{tag}: reducible CAR"), car, 1e-13);
        out.holds(&format!("{tag}: ůI_p central"), central == 0.0, format!("{central:.3e} == 0"));
    }
}

fn criterion_8(out: &mut Claims) {
    let sp = space(-1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let profile = generic_profile(&sp, &mut rng);
    let (f, g) = (amplitude(sp.modes(), &mut rng), amplitude(sp.modes(), &mut rng));
    let expect = z_inner(&f, &g, &profile);
    for n in [1, 2, 4, 8] {
        let reg = NRegister::new(sp.clone(), n).unwrap();
        let mut worst: f64 = 0.0;
        for nf in Species::ALL {
            for ng in Species::ALL {
                let ops = [LadderOp::annihilate(f.clone(), nf), LadderOp::create(g.clone(), ng)];
                let want = if nf == ng { expect } else { c(0.0, 0.0) };
                worst = worst.max((vacuum_matrix_element(&reg, &profile, &ops).unwrap() - want).norm());
                if n <= 2 {
                    let explicit = vacuum_matrix_element_explicit(&reg, &profile, &ops).unwrap();
                    worst = worst.max((explicit - want).norm());
                }
            }
        }
        out.le(&format!("N={n}"), worst, 1e-13);
    }
}

/// `|LHS(N) − det Gram|` per `N`, with `det Gram` from the Leibniz oracle.
fn deviations(sp: &SingleOscillatorSpace, m: usize, n_list: &[usize], rng: &mut ChaCha8Rng, out: &mut Claims, tag: &str) -> Vec<f64> {
    let profile = generic_profile(sp, rng);
    let fs: Vec<_> = (0..m).map(|_| amplitude(sp.modes(), rng)).collect();
    let gs: Vec<_> = (0..m).map(|_| amplitude(sp.modes(), rng)).collect();
    let gram = Dense::from_fn(m, m, |k, j| z_inner(&fs[k], &gs[j], &profile));
    let limit = leibniz_det(&gram);
    let report = large_n_convergence(sp, &fs, &gs, &profile, Species::Negaton, n_list, Exec::Parallel).unwrap();
    let lib_limit = report.records[0].limit;
    out.le(&format!("{tag}: library det Gram vs Leibniz"), (lib_limit - limit).norm(), 1e-13);

    let mut swapped = fs.clone();
    swapped.swap(0, 1);
    let ops = slater_operators(&swapped, &gs, Species::Negaton);
    let mut antisym: f64 = 0.0;
    for r in &report.records {
        let reg = NRegister::new(sp.clone(), r.n).unwrap();
        antisym = antisym.max((vacuum_matrix_element(&reg, &profile, &ops).unwrap() + r.lhs).norm());
    }
    // "Exact" read as in the reducible-CAR criterion: at the 1e-13 level.
    out.le(&format!("{tag}: f-swap antisymmetry"), antisym, 1e-13);
    report.records.iter().map(|r| (r.lhs - limit).norm()).collect()
}

fn fmt_devs(devs: &[f64]) -> String {
    devs.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(", ")
}

fn monotone(devs: &[f64], floor: f64) -> bool {
    devs.windows(2).all(|w| w[1] <= w[0].max(floor))
}

fn criterion_9(out: &mut Claims) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let long = [2, 4, 8, 16, 32, 64];
    let at = |devs: &[f64], n: usize| devs[long.iter().position(|&x| x == n).unwrap()];
    // One mode: the representation is irreducible, LHS(N) = det Gram up to rounding.
    let floor = 1e-14;
    let one = space(0, 0);
    for m in [2, 3] {
        let tag = format!("1 mode, M={m}");
        let devs = deviations(&one, m, &long, &mut rng, out, &tag);
        out.le(&format!("{tag}: max deviation"), devs.iter().copied().fold(0.0, f64::max), floor);
        out.holds(&format!("{tag}: non-increasing (floor {floor:.0e})"), monotone(&devs, floor), fmt_devs(&devs));
        out.le(&format!("{tag}: dev(64) vs dev(8)/4 (floor {floor:.0e})"), at(&devs, 64), (at(&devs, 8) / 4.0).max(floor));
    }
    let two = space(0, 1);
    for m in [2, 3] {
        let tag = format!("2 modes, M={m}");
        let devs = deviations(&two, m, &[2, 4, 8], &mut rng, out, &tag);
        out.holds(&format!("{tag}: non-increasing over N=2,4,8"), monotone(&devs, 0.0), fmt_devs(&devs));
    }
    // Strict decay where the deviation is not rounding noise.
    for (sp, m, tag) in [(space(0, 1), 2, "2 modes, M=2"), (space(-1, 1), 3, "3 modes, M=3")] {
        let devs = deviations(&sp, m, &long, &mut rng, out, &format!("{tag} to N=64"));
        out.holds(&format!("{tag} to N=64: strictly decreasing"), devs.windows(2).all(|w| w[1] < w[0]), fmt_devs(&devs));
        out.le(&format!("{tag} to N=64: dev(64) / dev(8)"), at(&devs, 64) / at(&devs, 8), 0.25);
    }
}

fn criterion_10(out: &mut Claims) {
    let sp = space(-6, 6);
    let lattice = sp.lattice().clone();
    let y = SpacetimePoint::new(0.7, 0.2, -0.1, 1.1);
    let x = FieldPoint::new(0.4, 0.1, 0.0, -0.9);

    // Translation phase, absolute residual.
    let u = translation_unitary(&sp, &y);
    let (mut phase, mut wrong): (f64, f64) = (0.0, 0.0);
    for (i, p) in lattice.points().iter().enumerate() {
        for n in Species::ALL {
            for s in Spin::ALL {
                let a = sp.mode_annihilator(i, s, n).unwrap();
                let lhs = u.adjoint().matmul(&a).unwrap().matmul(&u).unwrap();
                let dot = p.e * y.t - p.px * y.x - p.py * y.y - p.pz * y.z;
                phase = phase.max(lhs.max_abs_diff(&a.scale(c(0.0, dot).exp())).unwrap());
                if i == 3 {
                    wrong = wrong.max(lhs.max_abs_diff(&a.scale(c(0.0, -dot).exp())).unwrap() / a.max_abs());
                }
            }
        }
    }
    out.le("translation phase", phase, 1e-12);
    out.holds("control: opposite phase is detected", wrong > 1e-2, format!("{wrong:.3e}"));
    let tr = translation_check(&sp, &y, &SpacetimePoint::new(-0.3, 0.0, 0.5, 0.2)).unwrap();
    out.holds("translation I₀ invariance", tr.i0 == 0.0, format!("{:.3e} == 0", tr.i0));

    let step = BoostStep::new(&lattice, 1).unwrap();
    let boost = boost_check(&sp, &step).unwrap();
    out.holds("boost I₀ invariance", boost.i0 == 0.0, format!("{:.3e} == 0", boost.i0));
    out.holds("interior modes", boost.interior_modes == 12, format!("{}", boost.interior_modes));
    for n in [1, 2] {
        let reg = NRegister::new(sp.clone(), n).unwrap();
        out.le(&format!("field covariance, N={n}"), field_covariance_check(&reg, &step, &y, &x).unwrap(), 1e-9);
    }
    let reg = NRegister::new(sp.clone(), 1).unwrap();
    let mislabeled = BoostStep { k: 1, lambda: Sl2c::boost_z(0.5) };
    let control = field_covariance_check(&reg, &mislabeled, &y, &x).unwrap();
    out.holds("control: mismatched boost is detected", control > 1e-3, format!("{control:.3e}"));

    // Vacuum covariance with a profile that vanishes where the boost leaves the lattice.
    let values: Vec<C64> = (0..sp.modes())
        .map(|i| if step.target(&lattice, i).is_some() { c((-(i as f64 - 6.0).powi(2) / 8.0).exp(), 0.1 * i as f64) } else { c(0.0, 0.0) })
        .collect();
    let profile = VacuumProfile::new(&lattice, values).unwrap();
    let cov = vacuum_covariance(&sp, &profile, &step, &y).unwrap();
    let phase_oracle = lattice
        .points()
        .iter()
        .zip(&cov.phases)
        .map(|(p, ph)| (ph - c(0.0, -2.0 * (p.e * y.t - p.px * y.x - p.py * y.y - p.pz * y.z)).exp()).norm())
        .fold(0.0, f64::max);
    out.le("vacuum state U|O⟩", cov.state, 1e-12);
    out.le("phase e^{−2iy·p} vs oracle", phase_oracle, 1e-12);
}

fn criterion_11(out: &mut Claims) {
    let e0 = 0.7;
    for n in [1, 2] {
        let sp = space(-1, 1);
        let reg = NRegister::new(sp.clone(), n).unwrap();
        let q = reg.lift_additive(&charge_operator(&sp, e0)).unwrap();
        let s_op = reg.lift_additive(&spin_operator(&sp)).unwrap();
        let (mut charge, mut spin): (f64, f64) = (0.0, 0.0);
        for i in 0..sp.modes() {
            for sp_ in Species::ALL {
                for s in Spin::ALL {
                    let cd = reg.extend(&sp.mode_creator(i, s, sp_).unwrap()).unwrap();
                    let sign = if sp_ == Species::Negaton { 1.0 } else { -1.0 };
                    charge = charge.max(commutator(&q, &cd).unwrap().max_abs_diff(&cd.scale_real(sign * e0)).unwrap());
                    let half = if s == Spin::Plus { 0.5 } else { -0.5 };
                    spin = spin.max(commutator(&s_op, &cd).unwrap().max_abs_diff(&cd.scale_real(half)).unwrap());
                }
            }
        }
        let profile = VacuumProfile::from_shape(sp.lattice(), &ProfileShape::Gaussian { center: 0.1, width: 0.6 }).unwrap();
        let vac = reg.vacuum_state(&profile).unwrap();
        let vacuum_spin = s_op.apply(&vac).unwrap().norm() + 0.0;
        out.le(&format!("N={n}: [ůQ, ůc†] = ±e₀ůc†"), charge, 1e-13);
        out.holds(&format!("N={n}: [ůS, ůc_s†] = ±½ůc_s†"), spin == 0.0, format!("{spin:.3e} == 0"));
        out.holds(&format!("N={n}: ůS|ůO⟩ = 0"), vacuum_spin == 0.0, format!("{vacuum_spin:.3e} == 0"));
    }
    let sp = space(-6, 6);
    let gauge = gauge_check(&sp, e0, 1.1, &FieldPoint::new(0.2, 0.0, 0.0, -0.4)).unwrap();
    out.le("gauge phase", gauge.max_residual(), 1e-12);
}

fn criterion_12(out: &mut Claims) {
    // Quadrature against the operator expectation, explicit for small N.
    let sp = space(-1, 1);
    let lattice = sp.lattice().clone();
    let profile = VacuumProfile::from_shape(&lattice, &ProfileShape::Gaussian { center: 0.2, width: 0.6 }).unwrap();
    let z = profile.z();
    let p0 = four_momentum(&sp)[0].clone();
    let mut worst: f64 = 0.0;
    for n in [1, 2] {
        let reg = NRegister::new(sp.clone(), n).unwrap();
        let vac = reg.vacuum_state(&profile).unwrap();
        let direct = vac.inner(&reg.lift_additive(&p0).unwrap().apply(&vac).unwrap()).unwrap();
        let quad = vacuum_energy(n, &z, &lattice, None).unwrap();
        let oracle: f64 = -2.0 * n as f64 * lattice.points().iter().zip(lattice.weights()).zip(&z).map(|((p, w), z)| w * p.e * z).sum::<f64>();
        worst = worst.max((direct.re - quad).abs()).max(direct.im.abs()).max((oracle - quad).abs());
    }
    for n in [4, 8, 16] {
        let quad = vacuum_energy(n, &z, &lattice, None).unwrap();
        worst = worst.max((vacuum_energy_expectation(&sp, &profile, n).unwrap() - quad).abs());
    }
    out.le("quadrature vs ⟨ůO|ůP₀|ůO⟩", worst, 1e-12);

    let rest = build_lattice(&LatticeSpec::rapidity(1.0, 0, 0.4)).unwrap();
    let rest_profile = VacuumProfile::from_shape(&rest, &ProfileShape::Point { index: 0 }).unwrap();
    let e = vacuum_energy(3, &rest_profile.z(), &rest, None).unwrap();
    out.le("rest mode, N_F = 3, m = 1: |E + 6|", (e + 6.0).abs(), 1e-12);
    let bosons = BosonicSector {
        n_b: 3,
        momenta: vec![[0.0, 0.0, 2.0]],
        weights: vec![1.0],
        z: vec![1.0],
    };
    let total = vacuum_energy(3, &rest_profile.z(), &rest, Some(&bosons)).unwrap();
    out.le("with N_B = 3, |k| = 2: |total|", total.abs(), 1e-10);
    let more = vacuum_energy(3, &rest_profile.z(), &rest, Some(&BosonicSector { n_b: 4, ..bosons.clone() })).unwrap();
    out.holds("sign follows N_B", more > 0.0 && e < 0.0, format!("{e} < 0 < {more}"));
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Claims)); 12] = [
        ("CAR table of the Jordan-Wigner register", criterion_1),
        ("block exponential vs dense exponential", criterion_2),
        ("conjugation identities", criterion_3),
        ("spin-frame reconstruction", criterion_4),
        ("eigen-bispinors", criterion_5),
        ("Wigner matrix u(Λ,p)", criterion_6),
        ("reducible CAR of the N-oscillator extension", criterion_7),
        ("one-particle scalar product", criterion_8),
        ("large-N limit of vacuum matrix elements", criterion_9),
        ("Poincaré covariance on the rapidity lattice", criterion_10),
        ("charge and spin", criterion_11),
        ("vacuum energy", criterion_12),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let mut claims = Claims::default();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut claims)));
        let ok = outcome.is_ok() && claims.0.iter().all(|(_, ok, _)| *ok);
        failures += !ok as usize;
        println!("{} criterion {:>2}: {name}", if ok { "PASS" } else { "FAIL" }, k + 1);
        for (what, ok, detail) in &claims.0 {
            println!("    [{}] {what}: {detail}", if *ok { "ok" } else { "FAILED" });
        }
        if outcome.is_err() {
            println!("    [FAILED] panicked");
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
