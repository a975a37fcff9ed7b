//! Seeded cross-checks behind `loopforge verify-oracle` and `loopforge selftest`, plus the
//! random potential generators they share with the test suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_constants, membership_residual, tau_hat, CMatrix, GroupLaw, LaurentLoop, C0, C1};
use crate::frame::{f01_closed_form, f01_ode_residual, QuadratureConfig};
use crate::holo::{build_bhat, isotropy_residual, LightlikeColumn, MinimalPair, PolyZ, PotentialData, PotentialSpec};
use crate::io::{run_pipeline, GridSpec, RunSpec, Verdict};
use crate::iwasawa::{oracle_2m6, solve_point};

pub fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Polynomial with `degree + 1` coefficients uniform in the square of half-width `scale`.
pub fn random_poly(rng: &mut impl Rng, degree: usize, scale: f64) -> PolyZ {
    PolyZ::new((0..=degree).map(|_| random_complex(rng, scale)).collect())
}

/// `m = 3` pair with `f₁f₄ = f₂f₃`, so `B̂₁` has rank one; entries have degree ≤ 3.
pub fn random_rank_one_pair(rng: &mut impl Rng) -> MinimalPair {
    let a = random_poly(rng, 1, 1.0);
    let b = random_poly(rng, 1, 1.0);
    let s = random_poly(rng, 2, 1.0);
    let t = random_poly(rng, 2, 1.0);
    MinimalPair {
        f1: &a * &s,
        f2: &a * &t,
        f3: &b * &s,
        f4: &b * &t,
    }
}

/// `m = 3` pair with independent entries of degree ≤ 3.
pub fn random_generic_pair(rng: &mut impl Rng) -> MinimalPair {
    MinimalPair {
        f1: random_poly(rng, 3, 1.0),
        f2: random_poly(rng, 3, 1.0),
        f3: random_poly(rng, 3, 1.0),
        f4: random_poly(rng, 3, 1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub cases: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_err_d: f64,
    pub max_err_u_sharp: f64,
    pub max_err_q: f64,
    /// Distance of `q` from `diag(2, 1/2)` for `f₃ = 1` and everything else zero.
    pub reference_case_err: f64,
    pub passed: bool,
}

/// Compares [`solve_point`] against the `m = 3` closed forms on seeded random inputs.
///
/// `g` is drawn consistently with an integrated frame: `g₂ = -f₁f₂`, `g₃ = -f₃f₄`, and
/// `g₁ + g₄ = -f₁f₄ - f₂f₃` with `g₁` free.
pub fn verify_oracle(cases: usize, seed: u64, tol: f64) -> OracleReport {
    let c = build_constants(3).expect("m = 3 constants");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ed, mut eu, mut eq) = (0.0f64, 0.0f64, 0.0f64);
    let mut check = |f: [Complex64; 4], g: [Complex64; 4]| -> Option<f64> {
        let fm = CMatrix::from_rows(&[[f[0], f[1]], [f[2], f[3]]]);
        let gm = CMatrix::from_rows(&[[g[0], g[1]], [g[2], g[3]]]);
        let s = solve_point(&fm, &gm, &c, 1e-14).ok()?;
        let (d, us, q) = oracle_2m6(f, g);
        ed = ed.max(s.d.dist(&d).ok()?);
        eu = eu.max(s.u_sharp.dist(&us).ok()?);
        let err_q = s.q.dist(&q).ok()?;
        eq = eq.max(err_q);
        Some(err_q)
    };
    let mut all_solved = true;
    for _ in 0..cases {
        let f = [(); 4].map(|_| random_complex(&mut rng, 1.0));
        let g1 = random_complex(&mut rng, 1.0);
        let g = [g1, -f[0] * f[1], -f[2] * f[3], -f[0] * f[3] - f[1] * f[2] - g1];
        all_solved &= check(f, g).is_some();
    }
    let reference = check([C0, C0, C1, C0], [C0; 4]).unwrap_or(f64::INFINITY);
    let reference_case_err = {
        let f = CMatrix::from_rows(&[[C0, C0], [C1, C0]]);
        let s = solve_point(&f, &CMatrix::zeros(2, 2), &c, 1e-14).expect("reference case solves");
        s.q.dist(&CMatrix::real_diag(&[2.0, 0.5])).unwrap_or(f64::INFINITY).max(reference)
    };
    OracleReport {
        cases,
        seed,
        tol,
        max_err_d: ed,
        max_err_u_sharp: eu,
        max_err_q: eq,
        reference_case_err,
        passed: all_solved && ed <= tol && eu <= tol && eq <= tol && reference_case_err <= tol,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTestCase {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl SelfTestCase {
    fn new(name: &str, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
            passed: value <= tol,
        }
    }
}

fn small_run(pair: MinimalPair) -> RunSpec {
    RunSpec {
        potential: PotentialData::MinimalNp { pairs: vec![pair] },
        grid: GridSpec {
            n: 7,
            radius: 0.4,
            ..Default::default()
        },
        ..Default::default()
    }
}

/// Invariant suite: involutions, canonical-family isotropy, `F₀₁`, the oracle and two
/// small end-to-end runs.
pub fn selftest(seed: u64) -> Vec<SelfTestCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    for m in 3..=6 {
        let ok = build_constants(m).is_ok();
        out.push(SelfTestCase::new(&format!("constants m={m}"), if ok { 0.0 } else { 1.0 }, 0.0));
    }

    let c = build_constants(4).expect("m = 4 constants");
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let l = LaurentLoop::from_coeffs(
            8,
            (-2..=2).map(|k| (k, CMatrix::from_fn(8, 8, |_, _| random_complex(&mut rng, 1.0)))),
        )
        .expect("8 x 8 coefficients");
        worst = worst.max(tau_hat(&tau_hat(&l, &c), &c).max_coeff_dist(&l).unwrap_or(f64::INFINITY));
    }
    out.push(SelfTestCase::new("tau_hat is an involution", worst, 1e-15));

    let zs: Vec<Complex64> = (0..50).map(|_| random_complex(&mut rng, 1.0)).collect();
    let families = [
        (
            "lightlike",
            PotentialData::Lightlike {
                columns: (0..4)
                    .map(|_| LightlikeColumn {
                        f0: random_poly(&mut rng, 2, 1.0),
                        f1: random_poly(&mut rng, 2, 1.0),
                        f3: random_poly(&mut rng, 2, 1.0),
                    })
                    .collect(),
            },
        ),
        (
            "timelike",
            PotentialData::Timelike {
                g0: random_poly(&mut rng, 2, 1.0),
                columns: (0..4).map(|_| random_poly(&mut rng, 2, 1.0)).collect(),
            },
        ),
        (
            "spacelike",
            PotentialData::Spacelike {
                h0: random_poly(&mut rng, 2, 1.0),
                columns: (0..4).map(|_| random_poly(&mut rng, 2, 1.0)).collect(),
            },
        ),
    ];
    for (name, data) in families {
        let r = build_bhat(&PotentialSpec::new(4, data))
            .and_then(|b| isotropy_residual(&b, &zs))
            .unwrap_or(f64::INFINITY);
        out.push(SelfTestCase::new(&format!("{name} family isotropy"), r, 1e-12));
    }

    let quad = QuadratureConfig::default();
    let (a13, a14, a34) = (
        random_poly(&mut rng, 2, 1.0),
        random_poly(&mut rng, 2, 1.0),
        random_poly(&mut rng, 2, 1.0),
    );
    let z = random_complex(&mut rng, 0.5);
    let ode = f01_ode_residual(&a13, &a14, &a34, z, 1e-5, &quad).unwrap_or(f64::INFINITY);
    out.push(SelfTestCase::new("F01 closed form solves its ODE", ode, 1e-6));
    let mem = f01_closed_form(&a13, &a14, &a34, z, &quad)
        .map(|f| membership_residual(&f, GroupLaw::So1q))
        .unwrap_or(f64::INFINITY);
    out.push(SelfTestCase::new("F01 lies in SO(1,3)", mem, 1e-9));

    let oracle = verify_oracle(100, seed, 1e-10);
    let oracle_err = oracle
        .max_err_d
        .max(oracle.max_err_u_sharp)
        .max(oracle.max_err_q)
        .max(oracle.reference_case_err);
    out.push(SelfTestCase::new("m=3 closed forms", oracle_err, 1e-10));

    for (name, pair, want) in [
        ("rank-one run", random_rank_one_pair(&mut rng), Verdict::MinimalSurfaceCandidate),
        ("rank-two run", random_generic_pair(&mut rng), Verdict::NoWillmoreSurface),
    ] {
        match run_pipeline(&small_run(pair)) {
            Ok(run) => {
                let r = &run.report.residuals;
                let worst = r.iwasawa.max(r.reality).max(r.membership).max(r.twist).max(r.degree_bound);
                out.push(SelfTestCase::new(&format!("{name} frame residuals"), worst, 1e-8));
                let verdict_ok = run.report.verdict == want;
                out.push(SelfTestCase::new(
                    &format!("{name} verdict"),
                    if verdict_ok { 0.0 } else { 1.0 },
                    0.0,
                ));
            }
            Err(_) => out.push(SelfTestCase::new(name, f64::INFINITY, 0.0)),
        }
    }
    out
}
