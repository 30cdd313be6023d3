use korncert::geometry::{dot, sample_grid, GridSpec, Radial, SampleGrid, StarDomain};
use korncert::normtest::{
    assemble_constraints, certificate_residual, classify, max_principal_angle, point_measure_test,
    Verdict, DEFAULT_DENSE_FACTOR, DEFAULT_SIGMA_REL, DEFAULT_TOL_DENSE,
};
use korncert::scalar::int;
use korncert::{builtin_operator, kernel_basis, linalg, Builtin, KernelBasis, Rational, TraceKind, VerdictTag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RECOMBINATIONS: usize = 20;

fn sine2() -> StarDomain {
    StarDomain::new(2, Radial::Sine2D { c: 2.0, a: 1.0, m: 2.0 }).unwrap()
}

fn grids(dom: &StarDomain, counts: Vec<usize>) -> (SampleGrid, SampleGrid) {
    let spec = GridSpec::full(counts);
    (
        sample_grid(dom, &spec).unwrap(),
        sample_grid(dom, &spec.refined(DEFAULT_DENSE_FACTOR)).unwrap(),
    )
}

fn run(kb: &KernelBasis, dom: &StarDomain, kind: TraceKind, counts: Vec<usize>) -> Verdict {
    let (coarse, dense) = grids(dom, counts);
    classify(kb, dom, kind, &coarse, &dense, DEFAULT_SIGMA_REL, DEFAULT_TOL_DENSE).unwrap()
}

fn kernel(op: Builtin, n: usize, k: u32) -> KernelBasis {
    kernel_basis(&builtin_operator(op, n).unwrap(), k).unwrap()
}

/// The same kernel in a random basis with small integer mixing weights.
fn recombined(kb: &KernelBasis, rng: &mut ChaCha8Rng) -> KernelBasis {
    let d = kb.dim();
    loop {
        let m: Vec<Vec<Rational>> = (0..d)
            .map(|_| (0..d).map(|_| int(rng.random_range(-3..=3))).collect())
            .collect();
        if linalg::rank(&m, d) < d {
            continue;
        }
        let elements = m
            .iter()
            .map(|row| {
                let mut acc = kb.elements()[0].scale(&int(0));
                for (w, b) in row.iter().zip(kb.elements()) {
                    acc = acc.combine(&int(1), b, w).unwrap();
                }
                acc
            })
            .collect();
        return kb.with_elements(elements);
    }
}

#[test]
fn verdicts_do_not_depend_on_the_kernel_basis() {
    let cases = [
        (kernel(Builtin::SymGrad, 2, 1), StarDomain::unit_ball(2), TraceKind::Normal, vec![6]),
        (kernel(Builtin::DevGrad, 2, 1), sine2(), TraceKind::Normal, vec![6]),
        (kernel(Builtin::DevGrad, 2, 1), StarDomain::unit_ball(2), TraceKind::Tangential, vec![6]),
        (kernel(Builtin::SymGrad, 3, 2), StarDomain::unit_ball(3), TraceKind::Normal, vec![4, 4]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (kb, dom, kind, counts) in cases {
        let reference = run(&kb, &dom, kind, counts.clone());
        for _ in 0..RECOMBINATIONS {
            let other = run(&recombined(&kb, &mut rng), &dom, kind, counts.clone());
            assert_eq!(other.tag, reference.tag);
            let angle = max_principal_angle(&reference.certificate_vectors(), &other.certificate_vectors());
            assert!(angle < 1e-8, "certificate spans differ by {angle}");
        }
    }
}

/// Grids with counts `N` and `2N` are nested, so adding samples can only
/// shrink the coarse nullspace.
#[test]
fn verdicts_are_monotone_under_grid_refinement() {
    let cases = [
        (kernel(Builtin::DevGrad, 2, 1), StarDomain::unit_ball(2), TraceKind::Normal),
        (kernel(Builtin::SymGrad, 2, 1), sine2(), TraceKind::Normal),
        (kernel(Builtin::DevGrad, 2, 1), sine2(), TraceKind::Tangential),
        (kernel(Builtin::SymGrad, 2, 1), StarDomain::unit_ball(2), TraceKind::Normal),
    ];
    for (kb, dom, kind) in cases {
        let mut previous: Option<Verdict> = None;
        for n in [8, 16, 32] {
            let v = run(&kb, &dom, kind, vec![n]);
            if let Some(prev) = &previous {
                assert!(v.certificates.len() <= prev.certificates.len());
                if prev.tag == VerdictTag::A1 {
                    assert_eq!(v.tag, VerdictTag::A1);
                }
            }
            previous = Some(v);
        }
    }
}

#[test]
fn certificates_hold_on_a_four_times_finer_grid() {
    let cases = [
        (kernel(Builtin::SymGrad, 2, 1), StarDomain::unit_ball(2), TraceKind::Normal, vec![6]),
        (kernel(Builtin::DevGrad, 2, 1), StarDomain::unit_ball(2), TraceKind::Tangential, vec![6]),
        (kernel(Builtin::DevSymGrad, 3, 2), StarDomain::unit_ball(3), TraceKind::Normal, vec![4, 4]),
    ];
    for (kb, dom, kind, counts) in cases {
        let v = run(&kb, &dom, kind, counts.clone());
        assert_eq!(v.tag, VerdictTag::A2);
        let finer = sample_grid(&dom, &GridSpec::full(counts).refined(4 * DEFAULT_DENSE_FACTOR)).unwrap();
        for c in &v.certificates {
            assert!(certificate_residual(&c.poly, &dom, kind, &finer).unwrap() < DEFAULT_TOL_DENSE);
        }
    }
}

#[test]
fn full_trace_splits_into_normal_and_tangential() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (kb, dom) in [
        (kernel(Builtin::SymGrad, 2, 1), sine2()),
        (kernel(Builtin::DevSymGrad, 3, 2), StarDomain::new(3, Radial::Sine3D { c: 2.0, a: 1.0, m1: 2.0, m2: 3.0 }).unwrap()),
    ] {
        let n = dom.n();
        let grid = sample_grid(&dom, &GridSpec::full(vec![7; n - 1])).unwrap();
        let full = assemble_constraints(&kb, &dom, TraceKind::Full, &grid).unwrap().entries;
        let normal = assemble_constraints(&kb, &dom, TraceKind::Normal, &grid).unwrap().entries;
        let tang = assemble_constraints(&kb, &dom, TraceKind::Tangential, &grid).unwrap().entries;
        for (s, theta) in grid.angles.iter().enumerate() {
            let nu = dom.outward_normal(theta).unwrap();
            let col = rng.random_range(0..kb.dim());
            let f: Vec<f64> = (0..n).map(|i| full[(s * n + i, col)]).collect();
            let t: Vec<f64> = (0..n).map(|i| tang[(s * n + i, col)]).collect();
            assert!((normal[(s, col)] - dot(&f, &nu)).abs() < 1e-13);
            for i in 0..n {
                assert!((t[i] + normal[(s, col)] * nu[i] - f[i]).abs() < 1e-13);
            }
        }
    }
    // a field with vanishing full trace has vanishing normal and tangential traces
    let kb = kernel(Builtin::DevGrad, 2, 1);
    let dom = StarDomain::unit_ball(2);
    let full = run(&kb, &dom, TraceKind::Full, vec![6]);
    assert_eq!(full.tag, VerdictTag::A1);
    assert_eq!(run(&kb, &dom, TraceKind::Tangential, vec![6]).tag, VerdictTag::A2);
}

fn axis_points(axis: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let mut p = vec![0.0; 3];
            p[axis] = -0.5 + i as f64 / (count - 1) as f64;
            p
        })
        .collect()
}

#[test]
fn a_second_line_removes_the_axial_rotation() {
    let kb = kernel(Builtin::SymGrad, 3, 1);
    let one = point_measure_test(&kb, &axis_points(2, 5), DEFAULT_SIGMA_REL, DEFAULT_TOL_DENSE).unwrap();
    assert_eq!(one.tag, VerdictTag::A2);
    assert_eq!(one.certificates.len(), 1);
    let rho = &one.certificates[0].poly;
    // rotation about e_3: x2 e_1 - x1 e_2 up to scale
    let at = rho.eval_f64(&[1.0, 2.0, 3.0]).unwrap();
    assert!((at[0] / at[1] + 2.0).abs() < 1e-12 && at[2].abs() < 1e-12, "{at:?}");

    let mut pts = axis_points(2, 5);
    pts.extend(axis_points(0, 5));
    let two = point_measure_test(&kb, &pts, DEFAULT_SIGMA_REL, DEFAULT_TOL_DENSE).unwrap();
    assert_eq!(two.tag, VerdictTag::A1);
}
