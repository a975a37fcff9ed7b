use num_complex::Complex64;

use loopforge_core::algebra::{build_constants, C1};
use loopforge_core::frame::integrate_meromorphic_frame;
use loopforge_core::geometry::{
    constant_lightlike, constant_vector_check, maurer_cartan, CausalType, FrameField, GeometryError, McConfig,
};
use loopforge_core::holo::{
    extract_ftilde, native_bhat, to_loop_potential, LightlikeColumn, MinimalPair, PolyZ, PotentialData,
    PotentialSpec, PATTERN_TOL,
};
use loopforge_core::io::{run_pipeline, GridSpec, RunOutput, RunSpec, Verdict};
use loopforge_core::iwasawa::{solve_frame_at, L11Branch};

fn run(m: usize, potential: PotentialData, radius: f64, n: usize) -> RunOutput {
    let spec = RunSpec {
        m,
        potential,
        grid: GridSpec {
            center: [0.0, 0.0],
            radius,
            n,
        },
        ..Default::default()
    };
    run_pipeline(&spec).unwrap()
}

fn f11() -> PotentialData {
    PotentialData::MinimalNp {
        pairs: vec![MinimalPair {
            f1: PolyZ::one(),
            ..Default::default()
        }],
    }
}

fn field_at_lambda_one(out: &RunOutput) -> FrameField {
    FrameField::from_frames(
        out.records.iter().map(|r| r.z).collect(),
        0.1,
        C1,
        out.records.iter().map(|r| r.frames[0].clone()).collect(),
    )
    .unwrap()
}

#[test]
fn zero_potential_gives_identity_frames() {
    let out = run(3, PotentialData::default(), 0.5, 5);
    assert_eq!(out.report.verdict, Verdict::Trivial);
    let r = &out.report.residuals;
    for v in [r.iwasawa, r.reality, r.membership, r.twist, r.degree_bound, r.lightlike_const] {
        assert_eq!(v, 0.0);
    }
    assert_eq!(out.report.lightlike_vector, Some(vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
}

#[test]
fn f11_lightlike_vector_is_e0_plus_e1() {
    // The frame is the identity at z = 0, so the constant vector must be e₀ + e₁ itself.
    let out = run(3, f11(), 0.4, 9);
    let r = &out.report;
    assert_eq!(r.verdict, Verdict::MinimalSurfaceCandidate);
    assert!(r.residuals.lightlike_const < 1e-7);
    let v = r.lightlike_vector.as_ref().unwrap();
    let want = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
    for (a, b) in v.iter().zip(want) {
        assert!((a - b).abs() < 1e-7, "{v:?}");
    }
    // Not every frame is the identity.
    assert!(out.records.iter().any(|p| p.frames[0].dist(&loopforge_core::algebra::CMatrix::identity(6)).unwrap() > 0.1));
}

#[test]
fn two_independent_pairs_are_not_willmore() {
    let pair = |a: f64, b: f64| MinimalPair {
        f1: PolyZ::from_real(&[a]),
        f2: PolyZ::from_real(&[0.0, b]),
        f3: PolyZ::from_real(&[b]),
        f4: PolyZ::from_real(&[0.0, 0.0, a]),
    };
    let out = run(4, PotentialData::MinimalNp { pairs: vec![pair(1.0, 0.5), pair(-0.3, 1.0)] }, 0.4, 7);
    assert_eq!(out.report.rank.max_rank, 2);
    assert_eq!(out.report.verdict, Verdict::NoWillmoreSurface);
    // The lightlike vector is still there; only the rank rules out a Willmore surface.
    assert!(out.report.residuals.lightlike_const < 1e-7);
}

#[test]
fn lightlike_family_goes_through_the_pipeline() {
    let columns = vec![
        LightlikeColumn {
            f0: PolyZ::from_real(&[1.0, 0.5]),
            f1: PolyZ::from_real(&[0.0, 1.0]),
            f3: PolyZ::from_real(&[0.3]),
        },
        LightlikeColumn {
            f0: PolyZ::from_real(&[0.2]),
            f1: PolyZ::from_real(&[1.0]),
            f3: PolyZ::from_real(&[0.0, -1.0]),
        },
    ];
    let out = run(3, PotentialData::Lightlike { columns }, 0.4, 7);
    assert_ne!(out.report.verdict, Verdict::OutsideLightlikeFamily);
    assert!(out.report.residuals.iwasawa < 1e-12);
    assert_eq!(out.report.causal_type, Some(CausalType::Lightlike));
}

#[test]
fn space_form_families_are_outside() {
    let out = run(
        3,
        PotentialData::Spacelike {
            h0: PolyZ::from_real(&[0.0, 1.0]),
            columns: vec![PolyZ::one(), PolyZ::one()],
        },
        0.4,
        3,
    );
    assert_eq!(out.report.verdict, Verdict::OutsideLightlikeFamily);
}

#[test]
fn constant_vector_check_on_pipeline_field() {
    let data = PotentialData::MinimalNp {
        pairs: vec![MinimalPair {
            f1: PolyZ::from_real(&[0.4, 1.0]),
            f2: PolyZ::from_real(&[0.0, 0.0, 0.7]),
            f3: PolyZ::from_real(&[-0.5]),
            f4: PolyZ::from_real(&[0.2, 0.3]),
        }],
    };
    let out = run(3, data, 0.4, 7);
    let field = field_at_lambda_one(&out);
    let ll = constant_lightlike(&field).unwrap();
    let own = constant_vector_check(&field, &ll.v, 1e-9).unwrap();
    assert!(own.residual < 1e-8);
    assert_eq!(own.causal, CausalType::Lightlike);
    let mut e5 = vec![0.0; 6];
    e5[4] = 1.0;
    let psi = constant_vector_check(&field, &e5, 1e-9).unwrap();
    assert!(psi.residual > 0.1, "{psi:?}");
    assert_eq!(psi.causal, CausalType::Spacelike);
}

#[test]
fn maurer_cartan_with_step_halving() {
    let c = build_constants(3).unwrap();
    let spec = PotentialSpec::new(
        3,
        PotentialData::MinimalNp {
            pairs: vec![MinimalPair {
                f1: PolyZ::from_real(&[1.0, -0.5, 0.25]),
                f2: PolyZ::from_real(&[0.0, 1.0]),
                f3: PolyZ::from_real(&[0.5, 0.5]),
                f4: PolyZ::from_real(&[0.0, 0.0, 0.0, 1.0]),
            }],
        },
    );
    let eta = to_loop_potential(&native_bhat(&spec).unwrap(), &c).unwrap();
    let ft = extract_ftilde(&eta, &c, PATTERN_TOL).unwrap().ftilde;
    let frame = integrate_meromorphic_frame(&ft, &c).unwrap();
    let sampler = |z: Complex64| -> Result<_, GeometryError> {
        Ok(solve_frame_at(&frame, z, &c, 1e-12, L11Branch::Principal)?.ftilde)
    };
    for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.1, -0.45)] {
        let coarse = maurer_cartan(&sampler, z, &c, &McConfig::default()).unwrap();
        let fine = maurer_cartan(&sampler, z, &c, &McConfig { h: 5e-4, ..Default::default() }).unwrap();
        assert!(coarse.worst_pattern() < 1e-5);
        assert!(fine.worst_pattern() < 1e-5);
        assert!(coarse.a12_proportionality < 1e-5);
        // The extracted blocks agree between the two step sizes.
        assert!(coarse.alpha_m1.dist(&fine.alpha_m1).unwrap() < 1e-6);
        assert!(coarse.alpha_0.dist(&fine.alpha_0).unwrap() < 1e-6);
    }
}
