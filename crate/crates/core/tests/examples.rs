use tnare_core::gallery::{gen_example1, gen_example2, gen_example3, gen_example4};
use tnare_core::riccati::*;
use tnare_core::{DenseMatrix, Region, C64};

fn close(x: &DenseMatrix, want: &[f64], tol: f64) -> bool {
    x.as_slice().iter().zip(want).all(|(a, b)| (a - b).abs() <= tol)
}

fn sorted_reciprocals(r: &SolveReport) -> Vec<f64> {
    let mut v: Vec<f64> = r.alpha_eigs.iter().map(|e| (C64::new(1.0, 0.0) / e.lambda().unwrap()).re).collect();
    v.sort_by(f64::total_cmp);
    v
}

const X_OUT: [f64; 4] = [20.1028, -25.4499, -11.5037, 14.6980];
const X_IN: [f64; 4] = [2.6923, 3.6756, 1.9569, 2.6749];
const X_NEW: [f64; 4] = [0.0490, 0.1541, -0.0220, 0.0385];

#[test]
fn example3_three_solutions() {
    let p = gen_example3();
    let o = SolverOptions::default();
    let none = solve_pqz(&p, None, &o).unwrap();
    assert!(close(&none.x, &X_OUT, 5e-5), "{:?}", none.x);
    let out = solve_pqz(&p, Some(Region::Outside), &o).unwrap();
    assert!(close(&out.x, &X_IN, 5e-5), "{:?}", out.x);
    let nw = solve_newton(&p, &DenseMatrix::zeros(2, 2), &SolverOptions::newton()).unwrap();
    assert!(close(&nw.x, &X_NEW, 5e-5), "{:?}", nw.x);

    // The reciprocal moduli of the alpha eigenvalues.
    let tol = 5e-6;
    let check = |r: &SolveReport, want: [f64; 2]| {
        let got = sorted_reciprocals(r);
        assert!(got.iter().zip(want).all(|(a, b)| (a - b).abs() < tol), "{got:?} vs {want:?}");
    };
    check(&none, [-1.09484, -1.05880]);
    check(&out, [-0.94447, -0.91338]);
    check(&nw, [-1.09484, -0.94447]);
}

#[test]
fn example3_qz_matches_pqz() {
    let p = gen_example3();
    let o = SolverOptions::default();
    let a = solve_qz(&p, Region::Inside, &o).unwrap();
    let b = solve_qz(&p, Region::Outside, &o).unwrap();
    assert!(close(&a.x, &X_OUT, 5e-5));
    assert!(close(&b.x, &X_IN, 5e-5));
    assert!(a.max_alpha_modulus() < 1.0 && b.min_alpha_modulus() > 1.0);
}

#[test]
fn example3_spectrum_of_pencil() {
    let mut l: Vec<f64> = gen_example3().build_linearization().eigs().unwrap().iter().map(|e| e.lambda().unwrap().re).collect();
    l.sort_by(f64::total_cmp);
    for (a, b) in l.iter().zip([-1.09484, -1.05880, -0.94447, -0.91338]) {
        assert!((a - b).abs() < 5e-6, "{l:?}");
    }
}

#[test]
fn example3_certificates() {
    let p = gen_example3();
    let o = SolverOptions::default();
    let x_out = solve_pqz(&p, None, &o).unwrap().x;
    assert!(verify_dare(&p, &x_out, DareForm::First).unwrap().1 < 1e-8);
    // Four-decimal input still passes the loose check.
    let rounded = DenseMatrix::from_vec(2, 2, X_OUT.to_vec()).unwrap();
    assert!(verify_deflating_identity(&p, &rounded, &[]) < 1e-3);

    // The dual root spans the complement of the graph of x_out.
    let dual = solve_dual(&p, Method::Da, &o).unwrap();
    let bd = block_diagonalize(&p, &x_out, &dual.y).unwrap();
    assert!(bd.m_defect < 1e-8 && bd.mt_defect < 1e-8, "{bd:?}");
    assert!(bd.coupling_sigma_min > 1e-3);
    // x_in spans the same subspace as the dual root.
    let x_in = solve_pqz(&p, Some(Region::Outside), &o).unwrap().x;
    assert!(matches!(block_diagonalize(&p, &x_in, &dual.y), Err(tnare_core::TnareError::NearSingularCoupling(_))));
}

#[test]
fn example3_dual_routes_agree() {
    let p = gen_example3();
    let o = SolverOptions::default();
    let (_, da_dual) = solve_da(&p, &o).unwrap();
    let qz_dual = solve_dual(&p, Method::Qz, &o).unwrap();
    assert!(relative_distance(&qz_dual.y, &da_dual.y) < 1e-10);
    assert!(da_dual.relative_residual < 1e-12);
    assert!(da_dual.identity_defect < 1e-12);
}

#[test]
fn example1_solvers_agree_small() {
    let n = 10;
    let p = gen_example1(n).unwrap();
    let o = SolverOptions::default();
    let nw = solve_newton(&p, &DenseMatrix::zeros(n, n), &SolverOptions::newton()).unwrap();
    assert!(nw.x.is_nonnegative(1e-14), "minimal solution is nonnegative");
    for m in Method::ALL {
        let r = solve_with(&p, m, &o).unwrap();
        assert!(r.relative_residual < 1e-11, "{m}: {}", r.relative_residual);
        assert!(relative_distance(&r.x, &nw.x) < 1e-10, "{m}");
        assert!(r.max_alpha_modulus() < 1.0, "{m}");
        assert!(verify_deflating_identity(&p, &r.x, &[]) < 1e-12);
    }
}

#[test]
fn example1_fixed_point_monotone() {
    let n = 10;
    let p = gen_example1(n).unwrap();
    let mut prev = DenseMatrix::zeros(n, n);
    let mut steps = 0;
    for x in FixedPointIter::new(&p, SylvesterRoute::Schur).unwrap().take(200) {
        let x = x.unwrap();
        assert!(x.is_nonnegative(1e-15));
        assert!((&x - &prev).is_nonnegative(1e-15), "step {steps}");
        let done = relative_distance(&prev, &x) <= 1e-13;
        prev = x;
        steps += 1;
        if done {
            break;
        }
    }
    let nw = solve_newton(&p, &DenseMatrix::zeros(n, n), &SolverOptions::newton()).unwrap();
    assert!(relative_distance(&prev, &nw.x) < 1e-8);
}

#[test]
fn example1_existence_flags() {
    let r = check_existence_assumptions(&gen_example1(8).unwrap());
    assert!(r.w_nonsingular);
    assert_eq!(r.w_inverse_nonnegative, Some(true));
    assert!(r.d_inverse_nonnegative && r.b_nonnegative && r.c_nonpositive);
}

#[test]
fn example2_solvers_agree() {
    let n = 16;
    let p = gen_example2(n, 1).unwrap();
    let o = SolverOptions::default();
    let xs: Vec<DenseMatrix> = Method::ALL.iter().map(|&m| solve_with(&p, m, &o).unwrap().x).collect();
    for a in &xs {
        for b in &xs {
            assert!(relative_distance(a, b) < 1e-8);
        }
    }
}

#[test]
fn example2_golden() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/ex2_n4_seed1");
    let want = TRiccatiProblem::load_dir(&dir).unwrap();
    let got = gen_example2(4, 1).unwrap();
    assert_eq!(got, want);
}

#[test]
fn example4_spectrum() {
    let p = gen_example4(3, 0.5).unwrap();
    let mut got: Vec<f64> = p.build_linearization().eigs().unwrap().iter().map(|e| -e.lambda().unwrap().re).collect();
    got.sort_by(f64::total_cmp);
    let mut want = vec![1.0 / 2.25, 0.25, 1.0 / 9.0, 2.25, 4.0, 9.0];
    want.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() <= 1e-8 * b, "{got:?}");
    }
}

#[test]
fn example4_hard_split() {
    let p = gen_example4(3, 1e-10).unwrap();
    let near: Vec<f64> = p
        .build_linearization()
        .eigs()
        .unwrap()
        .iter()
        .map(|e| e.modulus())
        .filter(|m| (m - 1.0).abs() < 1e-6)
        .collect();
    assert_eq!(near.len(), 2);
    // Rounding perturbs the pair by far more than its 2e-10 split, so only
    // the band is checked.
    assert!(near.iter().all(|m| (m - 1.0).abs() < 1e-7), "{near:?}");
}
