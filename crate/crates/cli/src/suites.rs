use nalgebra::{Matrix2, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reducible_car::engine::{anticommutator, commutator, matrix_exponential, Exec};
use reducible_car::jw::{
    conjugation_report, quadratic_exponential, su2_generator, JwRegister, Ladder, QuadraticForm, Species, Spin,
};
use reducible_car::modes::{build_lattice, LatticeSpec, ModeAmplitude, MomentumLattice, SingleOscillatorSpace};
use reducible_car::oscillator::{
    large_n_convergence, slater_operators, vacuum_matrix_element, vacuum_matrix_element_explicit, zprod_inner,
    LadderOp, NRegister, ProfileShape, VacuumProfile,
};
use reducible_car::spinor::{
    build_spin_frame, dirac_residual, eigen_bispinors, pauli_lubanski_projection, wigner_matrix, FourMomentum,
    Frequency, Sl2c, SpacetimePoint, TwoSpinor,
};
use reducible_car::symmetry::{
    boost_check, field_covariance_check, field_translation_check, gauge_check, generator_check, translation_check,
    vacuum_covariance, vacuum_energy, vacuum_energy_expectation, BoostStep, BosonicSector, GeneratorBundle,
};
use reducible_car::{Error, Result, SparseOperator, C64};

use crate::checks::{self, SUITES};
use crate::config::RunConfig;
use crate::report::{Record, Report};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Validates `config` and runs the selected suites in their fixed order.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let ctx = Context::new(config)?;
    let mut warnings = Vec::new();
    let selected = config.ordered_suites();
    if selected.is_empty() {
        warnings.push("no suites selected; the report is empty".to_string());
    }
    let mut records = Vec::new();
    for name in selected {
        let stream = SUITES.iter().position(|s| *s == name).unwrap() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        let mut suite = Suite {
            name,
            config,
            records: Vec::new(),
            warnings: Vec::new(),
        };
        match name {
            "car" => car(&mut suite, &ctx, &mut rng),
            "spinor" => spinor(&mut suite, &ctx, &mut rng),
            "modes" => modes(&mut suite, &ctx, &mut rng),
            "oscillator" => oscillator(&mut suite, &ctx, &mut rng),
            "large_n" => large_n(&mut suite, &ctx, &mut rng),
            "symmetries" => symmetries(&mut suite, &ctx, &mut rng),
            _ => unreachable!("validated suite name"),
        }
        records.append(&mut suite.records);
        warnings.append(&mut suite.warnings);
    }
    Ok(Report::new(config.clone(), records, warnings))
}

struct Context {
    lattice: MomentumLattice,
    space: SingleOscillatorSpace,
    profile: VacuumProfile,
    /// Oscillator counts small enough for explicit tensor products.
    explicit_n: Vec<usize>,
}

impl Context {
    fn new(config: &RunConfig) -> Result<Self> {
        let lattice = build_lattice(&config.lattice)?;
        let space = SingleOscillatorSpace::new(lattice.clone())?;
        let profile = VacuumProfile::from_shape(&lattice, &config.profile)?;
        let explicit_n = config
            .n_list
            .iter()
            .copied()
            .filter(|&n| {
                u32::try_from(n)
                    .ok()
                    .and_then(|n| space.dim().checked_pow(n))
                    .is_some_and(|d| d <= config.explicit_max_dim)
            })
            .collect();
        Ok(Self {
            lattice,
            space,
            profile,
            explicit_n,
        })
    }

    fn registers(&self) -> Result<Vec<NRegister>> {
        self.explicit_n.iter().map(|&n| NRegister::new(self.space.clone(), n)).collect()
    }
}

struct Suite<'a> {
    name: &'static str,
    config: &'a RunConfig,
    records: Vec<Record>,
    warnings: Vec<String>,
}

impl Suite<'_> {
    fn record(&mut self, id: &str, case: String, outcome: Result<(f64, Option<f64>)>) {
        let def = checks::lookup(id).unwrap_or_else(|| panic!("undeclared check {id}"));
        let tolerance = self.config.tolerance(id);
        let (residual, value, error) = match outcome {
            // Adding zero turns a negative zero into a positive one.
            Ok((r, v)) => (Some(r + 0.0), v, None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        self.records.push(Record {
            suite: self.name.to_string(),
            check: id.to_string(),
            case,
            identity: def.identity.to_string(),
            residual,
            value,
            tolerance,
            pass: residual.is_some_and(|r| r <= tolerance),
            error,
        });
    }

    fn check(&mut self, id: &str, f: impl FnOnce() -> Result<f64>) {
        self.check_case(id, String::new(), f);
    }

    fn check_case(&mut self, id: &str, case: String, f: impl FnOnce() -> Result<f64>) {
        let outcome = f().map(|r| (r, None));
        self.record(id, case, outcome);
    }

    fn per_register(&mut self, id: &str, regs: &Result<Vec<NRegister>>, mut f: impl FnMut(&NRegister) -> Result<f64>) {
        match regs {
            Ok(regs) => {
                for reg in regs {
                    let outcome = f(reg);
                    self.check_case(id, format!("N={}", reg.n()), || outcome);
                }
            }
            Err(e) => self.record(id, String::new(), Err(e.clone())),
        }
    }
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_amplitude(modes: usize, rng: &mut ChaCha8Rng) -> ModeAmplitude {
    ModeAmplitude::from_fn(modes, |_, _| random_c(rng))
}

fn random_momentum(rng: &mut ChaCha8Rng, mass: f64, max_p: f64) -> FourMomentum {
    loop {
        let v = [
            rng.gen_range(-max_p..max_p),
            rng.gen_range(-max_p..max_p),
            rng.gen_range(-max_p..max_p),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= max_p * max_p {
            return FourMomentum::on_shell(mass, v);
        }
    }
}

fn random_lorentz(rng: &mut ChaCha8Rng) -> Sl2c {
    let mut r = || rng.gen_range(-1.0..1.0);
    Sl2c::from_parameters([2.0 * r(), 2.0 * r(), 2.0 * r()], [r(), r(), r()])
}

fn random_point(rng: &mut ChaCha8Rng) -> SpacetimePoint {
    let mut r = || rng.gen_range(-2.0..2.0);
    SpacetimePoint::new(r(), r(), r(), r())
}

/// Random complex 2×2 matrix with Frobenius norm uniform in `[0, max_norm)`.
fn random_form(rng: &mut ChaCha8Rng, max_norm: f64) -> QuadraticForm {
    let m = Matrix2::from_fn(|_, _| random_c(rng));
    let scale = rng.gen_range(0.0..max_norm) / m.norm();
    QuadraticForm::new(m * c(scale, 0.0))
}

fn car(s: &mut Suite, _ctx: &Context, rng: &mut ChaCha8Rng) {
    let reg = JwRegister::new();
    s.check("car.anticommutators", || {
        let table = reg.car_table();
        if table.len() != 28 {
            return Err(Error::Precondition(format!("expected 28 pairs, got {}", table.len())));
        }
        Ok(max_of(table.iter().map(|p| p.residual)))
    });
    s.check("car.vacuum", || {
        let mut worst = (reg.vacuum.norm() - 1.0).abs();
        for l in Ladder::all().into_iter().filter(|l| !l.dagger) {
            worst = worst.max(reg.annihilator(l.species, l.spin).apply(&reg.vacuum)?.norm());
        }
        Ok(worst)
    });
    let forms: Vec<QuadraticForm> = (0..s.config.samples).map(|_| random_form(rng, 2.0)).collect();
    s.check("car.block_exponential", || {
        let mut worst: f64 = 0.0;
        for q in &forms {
            let dense = matrix_exponential(&reg.quadratic_generator(q))?;
            worst = worst.max(quadratic_exponential(q).max_abs_diff(&dense)?);
        }
        Ok(worst)
    });
    let reports = (0..s.config.samples)
        .map(|_| {
            let a = su2_generator(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (alpha, beta) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            conjugation_report(&reg, &QuadraticForm::new(a), alpha, beta)
        })
        .collect::<Result<Vec<_>>>();
    let field = |f: fn(&reducible_car::jw::ConjugationReport) -> f64| -> Result<f64> {
        reports.as_ref().map(|rs| max_of(rs.iter().map(f))).map_err(Clone::clone)
    };
    s.check("car.su2_conjugation", || field(|r| r.su2_mixing));
    s.check("car.phase_conjugation", || field(|r| r.phase));
    s.check("car.i0_conjugation", || field(|r| r.i0_su2.max(r.i0_phase)));
}

/// `‖S v − λ v‖ / ‖v‖`.
fn eigen_residual(block: &Matrix2<C64>, v: &TwoSpinor, lambda: f64) -> f64 {
    let sv = v.transformed(block);
    let num: f64 = (0..2).map(|k| (sv.comps[k] - v.comps[k] * lambda).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = (0..2).map(|k| v.comps[k].norm_sqr()).sum::<f64>().sqrt();
    num / den
}

fn spinor(s: &mut Suite, ctx: &Context, rng: &mut ChaCha8Rng) {
    let mass = ctx.lattice.mass();
    let momenta: Vec<FourMomentum> = (0..s.config.samples).map(|_| random_momentum(rng, mass, 10.0)).collect();
    let frames = momenta.iter().map(build_spin_frame).collect::<Result<Vec<_>>>();
    s.check("spinor.frame_reconstruction", || {
        let frames = frames.as_ref().map_err(Clone::clone)?;
        Ok(max_of(frames.iter().map(|f| f.reconstruction_error() / f.momentum.e)))
    });
    s.check("spinor.frame_normalization", || {
        let frames = frames.as_ref().map_err(Clone::clone)?;
        Ok(max_of(frames.iter().map(|f| (f.normalization() - c(1.0, 0.0)).norm())))
    });
    s.check("spinor.frame_fallback", || {
        let mut worst: f64 = 0.0;
        for p in [[0.0, 0.0, 1e5], [1e-6, -2e-6, 3e4], [0.0, 0.0, 1e4]] {
            let p = FourMomentum::on_shell(mass, p.map(|x| x * mass));
            let f = build_spin_frame(&p)?;
            if !f.fallback {
                return Err(Error::Precondition(format!("fallback branch not taken for {p:?}")));
            }
            worst = worst.max(f.reconstruction_error() / p.e).max((f.normalization() - c(1.0, 0.0)).norm());
        }
        Ok(worst)
    });
    s.check("spinor.dirac", || {
        let frames = frames.as_ref().map_err(Clone::clone)?;
        let mut worst: f64 = 0.0;
        for f in frames {
            let phi = eigen_bispinors(f);
            for freq in [Frequency::Positive, Frequency::Negative] {
                for spin in Spin::ALL {
                    worst = worst.max(dirac_residual(&f.momentum, phi.get(freq, spin), freq)?);
                }
            }
        }
        Ok(worst)
    });
    s.check("spinor.pauli_lubanski", || {
        let frames = frames.as_ref().map_err(Clone::clone)?;
        let mut worst: f64 = 0.0;
        for f in frames {
            let (unprimed, primed) = pauli_lubanski_projection(f);
            let phi = eigen_bispinors(f);
            for spin in Spin::ALL {
                let b = phi.get(Frequency::Positive, spin);
                worst = worst.max(eigen_residual(&unprimed, &b.unprimed, spin.value()));
                worst = worst.max(eigen_residual(&primed, &b.primed, spin.value()));
            }
        }
        Ok(worst)
    });

    let triples: Vec<(Sl2c, Sl2c, FourMomentum)> = (0..s.config.samples)
        .map(|_| (random_lorentz(rng), random_lorentz(rng), random_momentum(rng, mass, 5.0)))
        .collect();
    let wigner = triples.iter().map(|(l, _, p)| wigner_matrix(l, p)).collect::<Result<Vec<_>>>();
    s.check("spinor.wigner_unitarity", || {
        Ok(max_of(wigner.as_ref().map_err(Clone::clone)?.iter().map(|u| u.unitarity_error())))
    });
    s.check("spinor.wigner_determinant", || {
        Ok(max_of(wigner.as_ref().map_err(Clone::clone)?.iter().map(|u| u.determinant_error())))
    });
    s.check("spinor.wigner_cocycle", || {
        let mut worst: f64 = 0.0;
        for (l1, l2, p) in &triples {
            let lhs = wigner_matrix(&l1.compose(l2), p)?.0;
            let q = l1.inverse().act_momentum(p);
            let rhs = wigner_matrix(l1, p)?.0 * wigner_matrix(l2, &q)?.0;
            worst = worst.max(max_of((lhs - rhs).iter().map(|v| v.norm())));
        }
        Ok(worst)
    });
    s.check("spinor.bispinor_transformation", || {
        let mut worst: f64 = 0.0;
        for (lambda, _, p) in &triples {
            let u = wigner_matrix(lambda, p)?.0;
            let here = eigen_bispinors(&build_spin_frame(p)?);
            let there = eigen_bispinors(&build_spin_frame(&lambda.inverse().act_momentum(p))?);
            let big = lambda.bispinor();
            for t in Spin::ALL {
                let lhs = big * there.get(Frequency::Positive, t).components();
                let rhs: Vector4<C64> = Spin::ALL
                    .iter()
                    .map(|&s| here.get(Frequency::Positive, s).components() * u[(s.index(), t.index())])
                    .sum();
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
            }
        }
        Ok(worst)
    });
}

fn modes(s: &mut Suite, ctx: &Context, rng: &mut ChaCha8Rng) {
    let sp = &ctx.space;
    let m = sp.modes();
    let w = ctx.lattice.weights();
    s.check("modes.resolution_of_unity", || {
        let mut sum = SparseOperator::zeros(sp.dim(), sp.dim());
        for i in 0..m {
            sum = sum.add_scaled(&sp.mode_identity(i)?, c(w[i], 0.0))?;
        }
        sum.max_abs_diff(&sp.identity())
    });
    let annihilators = || -> Result<Vec<(usize, Ladder, SparseOperator)>> {
        let mut ops = Vec::new();
        for i in 0..m {
            for l in Ladder::all().into_iter().filter(|l| !l.dagger) {
                ops.push((i, l, sp.mode_annihilator(i, l.spin, l.species)?));
            }
        }
        Ok(ops)
    };
    s.check("modes.reducible_car", || {
        let ops = annihilators()?;
        let mut worst: f64 = 0.0;
        for (i, li, a) in &ops {
            for (j, lj, b) in &ops {
                let expect = if i == j && li == lj {
                    sp.mode_identity(*i)?.scale_real(1.0 / w[*i])
                } else {
                    SparseOperator::zeros(sp.dim(), sp.dim())
                };
                let scale = a.max_abs() * b.max_abs();
                worst = worst.max(anticommutator(a, &b.adjoint())?.max_abs_diff(&expect)? / scale);
                worst = worst.max(anticommutator(a, b)?.max_abs() / scale);
            }
        }
        Ok(worst)
    });
    s.check("modes.centrality", || {
        let ops = annihilators()?;
        let mut worst: f64 = 0.0;
        for k in 0..m {
            let center = sp.mode_identity(k)?;
            for (_, _, a) in &ops {
                worst = worst.max(commutator(&center, a)?.max_abs());
            }
        }
        Ok(worst)
    });
    let (f, g) = (random_amplitude(m, rng), random_amplitude(m, rng));
    s.check("modes.smeared_car", || {
        let mut worst: f64 = 0.0;
        for n in Species::ALL {
            let a = sp.smeared_annihilator(&f, n)?;
            let expect = sp.smeared_identity(&f, &g)?;
            worst = worst.max(anticommutator(&a, &sp.smeared_creator(&g, n)?)?.max_abs_diff(&expect)?);
            worst = worst.max(anticommutator(&a, &sp.smeared_creator(&g, n.other())?)?.max_abs());
        }
        Ok(worst)
    });
    let x = random_point(rng);
    s.check("modes.spectral_field", || {
        let mut worst: f64 = 0.0;
        for alpha in 0..4 {
            for conjugate in [false, true] {
                let a = sp.field_operator(&x, alpha, conjugate)?;
                worst = worst.max(a.max_abs_diff(&sp.field_operator_spectral(&x, alpha, conjugate)?)?);
            }
        }
        Ok(worst)
    });
    s.check("modes.plane_wave_unitarity", || {
        let wx = sp.plane_wave_unitary(&x);
        wx.matmul(&wx.adjoint())?.max_abs_diff(&SparseOperator::identity(m))
    });
}

fn oscillator(s: &mut Suite, ctx: &Context, rng: &mut ChaCha8Rng) {
    let sp = &ctx.space;
    let m = sp.modes();
    if ctx.explicit_n.is_empty() {
        s.warnings.push(format!(
            "oscillator: no N in n_list fits explicit_max_dim = {}; explicit checks skipped",
            s.config.explicit_max_dim
        ));
    }
    let regs = ctx.registers();
    let (f, g) = (random_amplitude(m, rng), random_amplitude(m, rng));
    let h = random_amplitude(m, rng);
    s.per_register("oscillator.reducible_car", &regs, |reg| {
        let a = reg.smeared_annihilator(&f, Species::Negaton)?;
        let center = reg.lift_average(&sp.smeared_identity(&f, &g)?)?;
        let mut worst: f64 = 0.0;
        for n in Species::ALL {
            let cd = reg.smeared_operator(&LadderOp::create(g.clone(), n))?;
            let expect = if n == Species::Negaton {
                center.clone()
            } else {
                SparseOperator::zeros(center.rows(), center.cols())
            };
            worst = worst.max(anticommutator(&a, &cd)?.max_abs_diff(&expect)?);
            worst = worst.max(anticommutator(&a, &reg.smeared_annihilator(&g, n)?)?.max_abs());
        }
        Ok(worst)
    });
    s.per_register("oscillator.centrality", &regs, |reg| {
        let center = reg.lift_average(&sp.smeared_identity(&f, &f)?)?;
        let mut worst: f64 = 0.0;
        for n in Species::ALL {
            let a = reg.smeared_annihilator(&g, n)?;
            worst = worst.max(commutator(&center, &a)?.max_abs());
            worst = worst.max(commutator(&center, &a.adjoint())?.max_abs());
        }
        Ok(worst)
    });
    s.per_register("oscillator.vacuum", &regs, |reg| {
        let vac = reg.vacuum_state(&ctx.profile)?;
        let mut worst = (vac.norm() - 1.0).abs();
        for n in Species::ALL {
            worst = worst.max(reg.smeared_annihilator(&f, n)?.apply(&vac)?.norm());
        }
        Ok(worst)
    });
    let mixed = [
        LadderOp::annihilate(f.clone(), Species::Negaton),
        LadderOp::annihilate(h.clone(), Species::Positon),
        LadderOp::create(g.clone(), Species::Positon),
        LadderOp::create(h.clone(), Species::Negaton),
    ];
    s.per_register("oscillator.sector_engine", &regs, |reg| {
        let fast = vacuum_matrix_element(reg, &ctx.profile, &mixed)?;
        let explicit = vacuum_matrix_element_explicit(reg, &ctx.profile, &mixed)?;
        Ok((fast - explicit).norm())
    });
    let expect = zprod_inner(&f, &g, &ctx.profile);
    for &n in &s.config.n_list {
        let outcome = (|| -> Result<f64> {
            let reg = NRegister::new(sp.clone(), n)?;
            let expect = expect.clone()?;
            let mut worst: f64 = 0.0;
            for (nf, ng) in [
                (Species::Negaton, Species::Negaton),
                (Species::Positon, Species::Positon),
                (Species::Negaton, Species::Positon),
            ] {
                let ops = [LadderOp::annihilate(f.clone(), nf), LadderOp::create(g.clone(), ng)];
                let want = if nf == ng { expect } else { c(0.0, 0.0) };
                worst = worst.max((vacuum_matrix_element(&reg, &ctx.profile, &ops)? - want).norm());
            }
            Ok(worst)
        })();
        s.check_case("oscillator.scalar_product", format!("N={n}"), || outcome);
    }
}

fn large_n(s: &mut Suite, ctx: &Context, rng: &mut ChaCha8Rng) {
    let sp = &ctx.space;
    let order = s.config.order;
    let fs: Vec<ModeAmplitude> = (0..order).map(|_| random_amplitude(sp.modes(), rng)).collect();
    let gs: Vec<ModeAmplitude> = (0..order).map(|_| random_amplitude(sp.modes(), rng)).collect();
    let n_list = &s.config.n_list;
    let report = large_n_convergence(sp, &fs, &gs, &ctx.profile, Species::Negaton, n_list, Exec::Parallel);
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            let id = if order == 1 { "large_n.deviation" } else { "large_n.monotone" };
            s.record(id, String::new(), Err(e));
            return;
        }
    };
    if order == 1 {
        for r in &report.records {
            s.check_case("large_n.deviation", format!("N={}", r.n), || Ok(r.deviation));
        }
        return;
    }
    for w in report.records.windows(2) {
        let growth = (w[1].deviation - w[0].deviation).max(0.0);
        s.record("large_n.monotone", format!("N={}", w[1].n), Ok((growth, Some(w[1].deviation))));
    }
    let mut swapped = fs.clone();
    swapped.swap(0, 1);
    let ops = slater_operators(&swapped, &gs, Species::Negaton);
    for r in &report.records {
        let outcome = NRegister::new(sp.clone(), r.n)
            .and_then(|reg| vacuum_matrix_element(&reg, &ctx.profile, &ops))
            .map(|v| (v + r.lhs).norm());
        s.check_case("large_n.antisymmetry", format!("N={}", r.n), || outcome);
    }
}

fn symmetries(s: &mut Suite, ctx: &Context, rng: &mut ChaCha8Rng) {
    let sp = &ctx.space;
    let e0 = s.config.e0;
    let bundle = GeneratorBundle::new(sp, e0);
    s.check("symmetries.generator_hermiticity", || Ok(bundle.hermiticity_residual()));
    s.check("symmetries.generator_centrality", || bundle.centrality_residual(sp));

    let (y, y2, x) = (random_point(rng), random_point(rng), random_point(rng));
    let tr = translation_check(sp, &y, &y2);
    s.check("symmetries.translation_phase", || tr.clone().map(|r| r.ladder_phase));
    s.check("symmetries.translation_i0", || tr.clone().map(|r| r.i0));
    s.check("symmetries.translation_group_law", || tr.clone().map(|r| r.group_law));
    let regs = ctx.registers();
    s.per_register("symmetries.field_translation", &regs, |reg| field_translation_check(reg, &y, &x));

    if matches!(s.config.lattice, LatticeSpec::Rapidity1d { .. }) {
        let step = BoostStep::new(&ctx.lattice, 1);
        let boost = step.clone().and_then(|st| boost_check(sp, &st));
        s.check("symmetries.boost_mixing", || boost.clone().map(|r| r.ladder_mixing));
        s.check("symmetries.boost_i0", || boost.clone().map(|r| r.i0));
        s.per_register("symmetries.field_covariance", &regs, |reg| {
            field_covariance_check(reg, step.as_ref().map_err(Clone::clone)?, &y, &x)
        });
        let cov = step.clone().and_then(|st| {
            let values = ctx
                .profile
                .values()
                .iter()
                .enumerate()
                .map(|(i, &v)| if st.target(&ctx.lattice, i).is_some() { v } else { c(0.0, 0.0) })
                .collect();
            let interior = VacuumProfile::new(&ctx.lattice, values)?;
            vacuum_covariance(sp, &interior, &st, &y)
        });
        s.check("symmetries.vacuum_covariance", || cov.clone().map(|r| r.state.max(r.shift).max(r.central)));
        s.check("symmetries.vacuum_centrality", || cov.clone().map(|r| r.centrality));
    } else {
        s.warnings.push("symmetries: boost checks need a rapidity lattice and were skipped".into());
    }

    let phi = rng.gen_range(-3.0..3.0);
    s.check("symmetries.gauge", || gauge_check(sp, e0, phi, &x).map(|r| r.max_residual()));
    let gens: Result<Vec<_>> = regs
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|rs| rs.iter().map(|r| generator_check(r, &ctx.profile, e0)).collect());
    let per_n = |s: &mut Suite, id: &str, f: fn(&reducible_car::symmetry::GeneratorReport) -> f64| match &gens {
        Ok(gs) => {
            for (g, n) in gs.iter().zip(&ctx.explicit_n) {
                s.check_case(id, format!("N={n}"), || Ok(f(g)));
            }
        }
        Err(e) => s.record(id, String::new(), Err(e.clone())),
    };
    per_n(s, "symmetries.momentum_commutators", |g| g.momentum);
    per_n(s, "symmetries.charge_commutators", |g| g.charge);
    per_n(s, "symmetries.spin_commutators", |g| g.spin);
    per_n(s, "symmetries.vacuum_spin", |g| g.vacuum_spin);
    per_n(s, "symmetries.vacuum_charge", |g| g.vacuum_charge);

    s.check("symmetries.vacuum_energy", || {
        let z = ctx.profile.z();
        let mut worst: f64 = 0.0;
        for &n in &s.config.n_list {
            let quad = vacuum_energy(n, &z, &ctx.lattice, None)?;
            worst = worst.max((quad - vacuum_energy_expectation(sp, &ctx.profile, n)?).abs());
        }
        Ok(worst)
    });
    let mass = ctx.lattice.mass();
    let rest = build_lattice(&LatticeSpec::rapidity(mass, 0, 1.0)).and_then(|lattice| {
        let profile = VacuumProfile::from_shape(&lattice, &ProfileShape::Point { index: 0 })?;
        Ok((lattice, profile.z()))
    });
    s.check("symmetries.rest_mode_energy", || {
        let (lattice, z) = rest.as_ref().map_err(Clone::clone)?;
        Ok((vacuum_energy(3, z, lattice, None)? + 6.0 * mass).abs())
    });
    s.check("symmetries.energy_cancellation", || {
        let (lattice, z) = rest.as_ref().map_err(Clone::clone)?;
        let bosons = BosonicSector {
            n_b: 3,
            momenta: vec![[0.0, 0.0, 2.0 * mass]],
            weights: vec![1.0],
            z: vec![1.0],
        };
        Ok(vacuum_energy(3, z, lattice, Some(&bosons))?.abs())
    });
}
