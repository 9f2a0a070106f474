//! Dense matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13, selected on the 1-norm.

use nalgebra::DMatrix;

use super::C64;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[
            17_297_280.0,
            8_648_640.0,
            1_995_840.0,
            277_200.0,
            25_200.0,
            1_512.0,
            56.0,
            1.0,
        ],
        9 => &[
            17_643_225_600.0,
            8_821_612_800.0,
            2_075_673_600.0,
            302_702_400.0,
            30_270_240.0,
            2_162_160.0,
            110_880.0,
            3_960.0,
            90.0,
            1.0,
        ],
        13 => &[
            64_764_752_532_480_000.0,
            32_382_376_266_240_000.0,
            7_771_770_303_897_600.0,
            1_187_353_796_428_800.0,
            129_060_195_264_000.0,
            10_559_470_521_600.0,
            670_442_572_800.0,
            33_522_128_640.0,
            1_323_241_920.0,
            40_840_800.0,
            960_960.0,
            16_380.0,
            182.0,
            1.0,
        ],
        _ => unreachable!("unsupported Padé degree {m}"),
    }
}

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Returns `(U, V)` with `r_m(A) = (V - U)^{-1} (V + U)`.
fn pade_uv(a: &DMatrix<C64>, m: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.nrows();
    let b = pade_coefficients(m);
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = a * a;
    if m < 13 {
        let mut powers = vec![ident.clone(), a2.clone()];
        while powers.len() <= m / 2 {
            let next = powers.last().unwrap() * &a2;
            powers.push(next);
        }
        let mut u = DMatrix::zeros(n, n);
        let mut v = DMatrix::zeros(n, n);
        for (k, p) in powers.iter().enumerate() {
            u += p * re(b[2 * k + 1]);
            v += p * re(b[2 * k]);
        }
        (a * u, v)
    } else {
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let u_inner = &a6 * (&a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]))
            + &a6 * re(b[7])
            + &a4 * re(b[5])
            + &a2 * re(b[3])
            + &ident * re(b[1]);
        let u = a * u_inner;
        let v = &a6 * (&a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]))
            + &a6 * re(b[6])
            + &a4 * re(b[4])
            + &a2 * re(b[2])
            + &ident * re(b[0]);
        (u, v)
    }
}

/// `e^A` for a square dense matrix.
pub fn expm_dense(a: &DMatrix<C64>) -> DMatrix<C64> {
    assert!(a.is_square(), "expm of a non-square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    for &(m, theta) in &THETA {
        if norm <= theta {
            return solve_pade(a, m);
        }
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * re(0.5f64.powi(s));
    let mut r = solve_pade(&scaled, 13);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn solve_pade(a: &DMatrix<C64>, m: usize) -> DMatrix<C64> {
    let (u, v) = pade_uv(a, m);
    let p = &v + &u;
    let q = &v - &u;
    q.lu().solve(&p).expect("Padé denominator is singular")
}
