//! End-to-end acceptance gate for the whole workspace. Each test covers one
//! release criterion, asserts its runtime budget, and prints one PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use bench_cli::{builtin_instance, sgm10, Family};
use ipm_lp::{solve_lp, LinearProgram, LpOptions, LpStatus};
use ipm_nlp::{inertia_correct, solve_nlp, NlpOptions, NlpStatus, RegularizationSchedule};
use kkt::{assemble, dense_oracle_direction, DerivativeBundle, Formulation, IterateState};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sparse_core::{ldlt_factorize, symbolic_analyze, FactorizeOptions, Permutation, SparseMatrix};

// ---------------------------------------------------------------- helpers

/// Random symmetric quasi-definite lower triangle [E, A^T; A, -F] with E
/// and F diagonally dominant SPD blocks.
fn random_sqd(rng: &mut impl Rng, n1: usize, n2: usize) -> SparseMatrix {
    let n = n1 + n2;
    let mut dense = vec![vec![0.0f64; n]; n];
    for i in 0..n2 {
        for j in 0..n1 {
            if rng.gen_bool(0.3) {
                dense[n1 + i][j] = rng.gen_range(-1.0..1.0);
            }
        }
    }
    for i in 0..n1 {
        for j in 0..i {
            if rng.gen_bool(0.2) {
                dense[i][j] = rng.gen_range(-0.5..0.5);
            }
        }
    }
    for i in 0..n2 {
        for j in 0..i {
            if rng.gen_bool(0.2) {
                dense[n1 + i][n1 + j] = rng.gen_range(-0.5..0.5);
            }
        }
    }
    for i in 0..n {
        let (lo, hi) = if i < n1 { (0, n1) } else { (n1, n) };
        let row_sum: f64 = (lo..hi)
            .filter(|&j| j != i)
            .map(|j| dense[i.max(j)][i.min(j)].abs())
            .sum();
        let diag = row_sum + rng.gen_range(0.5..2.0);
        dense[i][i] = if i < n1 { diag } else { -diag };
    }
    SparseMatrix::lower_from_dense(&dense).unwrap()
}

/// Dense P L D L^T P^T reconstruction of the factored matrix.
fn reconstruct(
    fact: &sparse_core::NumericFactorization,
    sym: &sparse_core::SymbolicFactorization,
) -> Vec<Vec<f64>> {
    let n = sym.n();
    let (ptr, rows) = sym.l_pattern();
    let mut l = vec![vec![0.0f64; n]; n];
    for k in 0..n {
        l[k][k] = 1.0;
    }
    for j in 0..n {
        for p in ptr[j]..ptr[j + 1] {
            l[rows[p]][j] = fact.l_values()[p];
        }
    }
    let d = fact.d();
    let forward = sym.permutation().forward();
    let mut out = vec![vec![0.0f64; n]; n];
    for k in 0..n {
        for lcol in 0..n {
            if l[k][lcol] == 0.0 {
                continue;
            }
            let w = l[k][lcol] * d[lcol];
            for m in 0..n {
                out[forward[k]][forward[m]] += w * l[m][lcol];
            }
        }
    }
    out
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut fwd: Vec<usize> = (0..n).collect();
    fwd.shuffle(rng);
    Permutation::from_forward(fwd).unwrap()
}

/// Random convex QP iterate with a diagonal SPD Hessian, so all four
/// formulations (including the diagonal-only dual condensed form) apply.
fn random_diag_qp(rng: &mut impl Rng, n: usize, m: usize) -> (DerivativeBundle, IterateState) {
    let htrips: Vec<(usize, usize, f64)> =
        (0..n).map(|i| (i, i, rng.gen_range(0.5..3.0))).collect();
    let mut jtrips = Vec::new();
    for i in 0..m {
        let mut any = false;
        for j in 0..n {
            if rng.gen_bool(0.4) {
                jtrips.push((i, j, rng.gen_range(-1.0..1.0)));
                any = true;
            }
        }
        if !any {
            jtrips.push((i, rng.gen_range(0..n), rng.gen_range(0.5..1.0)));
        }
    }
    let bundle = DerivativeBundle {
        grad: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        constraints: (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        jacobian: SparseMatrix::from_triplets(m, n, &jtrips).unwrap(),
        hessian: SparseMatrix::from_triplets(n, n, &htrips).unwrap(),
    };
    let state = IterateState {
        x: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        s: (0..m).map(|_| rng.gen_range(0.1..10.0)).collect(),
        lambda: (0..m).map(|_| rng.gen_range(0.1..10.0)).collect(),
        mu: *[1.0, 1e-2, 1e-4].choose(rng).unwrap(),
        delta_p: 1e-8,
        delta_d: 1e-8,
    };
    (bundle, state)
}

fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn lp(c: Vec<f64>, rows: &[(&[f64], f64)]) -> LinearProgram {
    let n = c.len();
    let mut triplets = Vec::new();
    let mut b = Vec::new();
    for (i, (row, bi)) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                triplets.push((i, j, v));
            }
        }
        b.push(*bi);
    }
    let a = SparseMatrix::from_triplets(rows.len(), n, &triplets).unwrap();
    LinearProgram::new(c, a, b).unwrap()
}

/// The three reference LPs with hand-known optima.
fn example_lps() -> Vec<(LinearProgram, f64)> {
    vec![
        (lp(vec![1.0], &[(&[1.0], 1.0)]), 1.0),
        (
            lp(
                vec![1.0, 1.0],
                &[(&[1.0, 0.0], 1.0), (&[0.0, 1.0], 2.0), (&[1.0, 1.0], 0.0)],
            ),
            3.0,
        ),
        (
            lp(
                vec![-1.0, -2.0],
                &[
                    (&[-1.0, -1.0], -4.0),
                    (&[-1.0, 0.0], -3.0),
                    (&[0.0, -1.0], -3.0),
                    (&[1.0, 0.0], 0.0),
                    (&[0.0, 1.0], 0.0),
                ],
            ),
            -7.0,
        ),
    ]
}

/// Exact optimum of min c^T x over A x >= b via exhaustive vertex
/// enumeration over n-subsets of tight rows.
fn vertex_enumeration_optimum(lp: &LinearProgram) -> Option<f64> {
    let (n, m) = (lp.n(), lp.m());
    let a = lp.a.to_dense();
    let mut best: Option<f64> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = dense_solve_rows(&a, &lp.b, &subset) {
            if lp.constraints(&x).iter().all(|&v| v >= -1e-7) {
                let obj = lp.objective(&x);
                if best.map(|b| obj < b).unwrap_or(true) {
                    best = Some(obj);
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] != i + m - n {
                subset[i] += 1;
                for j in i + 1..n {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn dense_solve_rows(a: &[Vec<f64>], b: &[f64], rows: &[usize]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut mat: Vec<Vec<f64>> = rows.iter().map(|&r| a[r].clone()).collect();
    let mut rhs: Vec<f64> = rows.iter().map(|&r| b[r]).collect();
    for k in 0..n {
        let (p, mag) = (k..n)
            .map(|i| (i, mat[i][k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag < 1e-12 {
            return None;
        }
        mat.swap(k, p);
        rhs.swap(k, p);
        for i in k + 1..n {
            let f = mat[i][k] / mat[k][k];
            for j in k..n {
                mat[i][j] -= f * mat[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            rhs[i] -= mat[i][j] * rhs[j];
        }
        rhs[i] /= mat[i][i];
    }
    Some(rhs)
}

/// Bounded feasible random LP: planted interior point plus a |x| <= 10 box.
fn random_lp(rng: &mut impl Rng, n: usize, extra_rows: usize) -> LinearProgram {
    let x_star: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for _ in 0..extra_rows {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ax: f64 = row.iter().zip(&x_star).map(|(a, x)| a * x).sum();
        rows.push((row, ax - rng.gen_range(0.1..2.0)));
    }
    for j in 0..n {
        let mut lo = vec![0.0; n];
        lo[j] = 1.0;
        rows.push((lo, -10.0));
        let mut hi = vec![0.0; n];
        hi[j] = -1.0;
        rows.push((hi, -10.0));
    }
    let refs: Vec<(&[f64], f64)> = rows.iter().map(|(r, b)| (r.as_slice(), *b)).collect();
    lp((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(), &refs)
}

// --------------------------------------------------------------- criteria

#[test]
fn strong_factorizability_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let no_perturb = FactorizeOptions {
        allow_perturbation: false,
        ..Default::default()
    };
    for _ in 0..100 {
        let n1 = rng.gen_range(1..=25);
        let n2 = rng.gen_range(1..=25);
        let a = random_sqd(&mut rng, n1, n2);
        let a_dense = a.symmetric_to_dense();
        let norm_a = a.symmetric_norm_inf();
        for _ in 0..20 {
            let perm = random_permutation(&mut rng, n1 + n2);
            let sym = symbolic_analyze(&a, &perm).unwrap();
            let fact = ldlt_factorize(&a, &sym, &no_perturb)
                .expect("quasi-definite matrix must factorize under any permutation");
            assert_eq!(fact.perturbation_count(), 0);
            let rec = reconstruct(&fact, &sym);
            let err = rec
                .iter()
                .zip(&a_dense)
                .map(|(ri, ai)| {
                    ri.iter()
                        .zip(ai)
                        .map(|(r, a)| (r - a).abs())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max);
            assert!(err <= 1e-10 * norm_a, "reconstruction residual {err}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "took {elapsed:.2}s");
    println!("PASS: strong factorizability, 100 SQD matrices x 20 permutations ({elapsed:.2}s)");
}

#[test]
fn inertia_matches_dense_eigenvalue_signs() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut checked = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=20);
        let mut dense = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.gen_range(-1.0..1.0);
                dense[i][j] = v;
                dense[j][i] = v;
            }
        }
        let a = SparseMatrix::lower_from_dense(&dense).unwrap();
        let sym = symbolic_analyze(&a, &Permutation::identity(n)).unwrap();
        let fact = match ldlt_factorize(&a, &sym, &FactorizeOptions::default()) {
            Ok(f) => f,
            Err(_) => continue,
        };
        if fact.perturbation_count() > 0 {
            continue; // a perturbed factorization no longer carries A's inertia
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| dense[i][j]);
        let eig = m.symmetric_eigen();
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        for ev in eig.eigenvalues.iter() {
            if ev.abs() <= 1e-10 {
                zero += 1;
            } else if *ev > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        let inertia = fact.inertia();
        assert_eq!(
            (inertia.n_pos, inertia.n_neg, inertia.n_zero),
            (pos, neg, zero)
        );
        checked += 1;
    }
    assert!(checked >= 150, "only {checked} non-perturbed cases");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "took {elapsed:.2}s");
    println!("PASS: inertia oracle, {checked}/200 non-perturbed matrices match dense eigenvalue signs ({elapsed:.2}s)");
}

#[test]
fn formulation_equivalence_against_dense_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..50 {
        let n = rng.gen_range(1..=20);
        let m = rng.gen_range(1..=20);
        let (bundle, state) = random_diag_qp(&mut rng, n, m);
        let oracle = dense_oracle_direction(&bundle, &state).unwrap();
        for f in [
            Formulation::Full3x3,
            Formulation::Augmented2x2,
            Formulation::PrimalCondensed,
            Formulation::DualCondensed,
        ] {
            let mut ws = assemble(f, &bundle, &state).unwrap();
            ws.factorize(&FactorizeOptions::default()).unwrap();
            let dir = ws.solve_direction(&bundle, &state).unwrap();
            assert!(rel_close(&dir.d_x, &oracle.d_x, 1e-6), "{f:?} d_x");
            assert!(rel_close(&dir.d_s, &oracle.d_s, 1e-6), "{f:?} d_s");
            assert!(
                rel_close(&dir.d_lambda, &oracle.d_lambda, 1e-6),
                "{f:?} d_lambda"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "took {elapsed:.2}s");
    println!("PASS: formulation equivalence, 50 convex QPs, all 4 formulations vs dense oracle ({elapsed:.2}s)");
}

#[test]
fn inertia_correction_restores_positive_definiteness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..20 {
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=5);
        // indefinite Hessian: random symmetric with forced negative diagonal
        let mut htrips = Vec::new();
        for i in 0..n {
            for j in 0..i {
                if rng.gen_bool(0.4) {
                    htrips.push((i, j, rng.gen_range(-2.0..2.0)));
                }
            }
            let d: f64 = rng.gen_range(-2.0..2.0);
            htrips.push((i, i, if i == 0 { -d.abs() - 0.5 } else { d }));
        }
        let mut jtrips = Vec::new();
        for i in 0..m {
            jtrips.push((i, rng.gen_range(0..n), rng.gen_range(0.5..1.5)));
        }
        let bundle = DerivativeBundle {
            grad: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            constraints: (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            jacobian: SparseMatrix::from_triplets(m, n, &jtrips).unwrap(),
            hessian: SparseMatrix::from_triplets(n, n, &htrips).unwrap(),
        };
        let mut state = IterateState {
            x: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            s: (0..m).map(|_| rng.gen_range(0.1..10.0)).collect(),
            lambda: (0..m).map(|_| rng.gen_range(0.1..10.0)).collect(),
            mu: 1e-2,
            delta_p: 0.0,
            delta_d: 0.0,
        };
        let mut ws = assemble(Formulation::PrimalCondensed, &bundle, &state).unwrap();
        let mut sched = RegularizationSchedule::default();
        inertia_correct(&mut ws, &mut sched, &bundle, &mut state).unwrap();
        let inertia = ws.inertia().unwrap();
        assert_eq!(
            (inertia.n_pos, inertia.n_neg, inertia.n_zero),
            (n, 0, 0),
            "accepted factorization must have all-positive D"
        );
        assert_eq!(ws.perturbation_count(), 0);
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "took {elapsed:.2}s");
    println!("PASS: inertia correction yields SPD primal systems with zero pivot perturbations on 20 nonconvex instances ({elapsed:.2}s)");
}

#[test]
fn lp_correctness_against_vertex_enumeration() {
    let start = Instant::now();
    let opts = LpOptions::default();
    for (p, expected) in example_lps() {
        let r = solve_lp(&p, &opts).unwrap();
        assert_eq!(r.status, LpStatus::Optimal, "{r:?}");
        assert!(
            (r.primal_objective - expected).abs() <= 1e-6 * (1.0 + expected.abs()),
            "{} vs {expected}",
            r.primal_objective
        );
        assert!(
            (r.primal_objective - r.dual_objective).abs()
                <= 1e-7 * (1.0 + r.primal_objective.abs())
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let extra = rng.gen_range(1..=4);
        let p = random_lp(&mut rng, n, extra);
        let oracle = vertex_enumeration_optimum(&p).expect("bounded feasible LP");
        let r = solve_lp(&p, &opts).unwrap();
        assert_eq!(r.status, LpStatus::Optimal, "{r:?}");
        assert!(
            (r.primal_objective - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()),
            "{} vs oracle {oracle}",
            r.primal_objective
        );
        assert!(
            (r.primal_objective - r.dual_objective).abs()
                <= 1e-7 * (1.0 + r.primal_objective.abs())
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "took {elapsed:.2}s");
    println!("PASS: LP correctness, 3 examples + 20 random LPs vs vertex enumeration ({elapsed:.2}s)");
}

#[test]
fn nlp_regression_on_scalable_and_analytic_problems() {
    let start = Instant::now();
    let opts = NlpOptions::default();
    for n in [10usize, 100, 1000] {
        let model = builtin_instance(Family::RosenbrockChain, n).unwrap();
        let r = solve_nlp(&model, &opts).unwrap();
        assert_eq!(r.status, NlpStatus::Optimal, "N={n}: {r:?}");
        assert!(r.objective <= 1e-8, "N={n}: objective {}", r.objective);
        assert!(r.iterations <= 100, "N={n}: {} iterations", r.iterations);
    }
    for (model, expected) in analytic_nlps() {
        let r = solve_nlp(&model, &opts).unwrap();
        assert_eq!(r.status, NlpStatus::Optimal, "{r:?}");
        assert!(
            (r.objective - expected).abs() <= 1e-6 * (1.0 + expected.abs()),
            "{} vs {expected}",
            r.objective
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.2}s");
    println!("PASS: NLP regression, rosenbrock chains N in {{10,100,1000}} + 2 analytic problems ({elapsed:.2}s)");
}

/// min x1^2 + x2^2 s.t. x1 + x2 >= 2 (optimum 2) and
/// min -x1 x2 s.t. x1^2 + x2^2 <= 1 (optimum -1/2).
fn analytic_nlps() -> Vec<(model_ad::Model, f64)> {
    use model_ad::{Expr, Instance, Model};
    let mut qp = Model::new(2);
    qp.add_objective(
        Expr::var(0).square(),
        vec![
            Instance {
                vars: vec![0],
                params: vec![],
            },
            Instance {
                vars: vec![1],
                params: vec![],
            },
        ],
    )
    .unwrap();
    qp.add_constraint(
        Expr::var(0).add(Expr::var(1)).sub(Expr::constant(2.0)),
        vec![Instance {
            vars: vec![0, 1],
            params: vec![],
        }],
    )
    .unwrap();

    let mut disk = Model::new(2);
    disk.add_objective(
        Expr::var(0).mul(Expr::var(1)).neg(),
        vec![Instance {
            vars: vec![0, 1],
            params: vec![],
        }],
    )
    .unwrap();
    disk.add_constraint(
        Expr::constant(1.0)
            .sub(Expr::var(0).square())
            .sub(Expr::var(1).square()),
        vec![Instance {
            vars: vec![0, 1],
            params: vec![],
        }],
    )
    .unwrap();
    disk.set_initial_point(vec![0.1, 0.1]).unwrap();
    vec![(qp, 2.0), (disk, -0.5)]
}

#[test]
fn derivatives_match_finite_differences_on_all_families() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let families = [
        (Family::RosenbrockChain, 8usize),
        (Family::ConvexQpGrid, 8),
        (Family::CirclePacking, 4),
    ];
    for (family, size) in families {
        let model = builtin_instance(family, size).unwrap();
        let n = model.n();
        let m = model.m();
        for _ in 0..5 {
            // jitter around the initial point keeps circle-packing distances
            // away from zero, where 1/d^2 is singular
            let x: Vec<f64> = model
                .initial_point()
                .iter()
                .map(|v| v + rng.gen_range(-0.05..0.05))
                .collect();
            let lambda: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let h = 1e-5;

            let grad = model.gradient(&x).unwrap();
            let fd_grad: Vec<f64> = (0..n)
                .map(|j| {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += h;
                    xm[j] -= h;
                    (model.eval_objective(&xp).unwrap() - model.eval_objective(&xm).unwrap())
                        / (2.0 * h)
                })
                .collect();
            assert!(rel_close(&grad, &fd_grad, 1e-5), "{family:?} gradient");

            let jac = model.jacobian(&x).unwrap().to_dense();
            for j in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let gp = model.eval_constraints(&xp).unwrap();
                let gm = model.eval_constraints(&xm).unwrap();
                for i in 0..m {
                    let fd = (gp[i] - gm[i]) / (2.0 * h);
                    assert!(
                        (jac[i][j] - fd).abs() <= 1e-5 * (1.0 + jac[i][j].abs().max(fd.abs())),
                        "{family:?} jacobian ({i},{j}): {} vs {fd}",
                        jac[i][j]
                    );
                }
            }

            // Hessian of f - sum_i lambda_i g_i, checked against central
            // differences of its analytic gradient
            let lag_grad = |x: &[f64]| -> Vec<f64> {
                let mut g = model.gradient(x).unwrap();
                let jac = model.jacobian(x).unwrap();
                let mut jtl = vec![0.0; n];
                jac.matvec_transpose(&lambda, &mut jtl);
                for (gi, ji) in g.iter_mut().zip(&jtl) {
                    *gi -= ji;
                }
                g
            };
            let hess = model
                .hessian_lagrangian(&x, &lambda, 1.0)
                .unwrap()
                .symmetric_to_dense();
            for j in 0..n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let gp = lag_grad(&xp);
                let gm = lag_grad(&xm);
                for i in 0..n {
                    let fd = (gp[i] - gm[i]) / (2.0 * h);
                    assert!(
                        (hess[i][j] - fd).abs() <= 1e-4 * (1.0 + hess[i][j].abs().max(fd.abs())),
                        "{family:?} hessian ({i},{j}): {} vs {fd}",
                        hess[i][j]
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "took {elapsed:.2}s");
    println!("PASS: AD gradients/Jacobians/Hessians match finite differences on all families ({elapsed:.2}s)");
}

#[test]
fn sgm10_examples_and_properties() {
    let start = Instant::now();
    let cap = 1e6;
    assert!((sgm10(&[5.0, 5.0], cap).unwrap() - 5.0).abs() < 1e-12);
    assert!((sgm10(&[0.0, 990.0], cap).unwrap() - 90.0).abs() < 1e-10);
    assert!((sgm10(&[17.25], cap).unwrap() - 17.25).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=20);
        let times: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..900.0)).collect();
        let base = sgm10(&times, cap).unwrap();
        let lo = times.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = times.iter().copied().fold(0.0, f64::max);
        assert!(lo - 1e-9 <= base && base <= hi + 1e-9, "bounds violated");

        let mut bumped = times.clone();
        let k = rng.gen_range(0..len);
        bumped[k] += rng.gen_range(0.1..100.0);
        assert!(sgm10(&bumped, cap).unwrap() > base, "not strictly monotone");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "took {elapsed:.2}s");
    println!("PASS: SGM10 tagged examples + monotonicity/bounds over 1000 random vectors ({elapsed:.2}s)");
}

#[test]
fn looser_tolerance_never_needs_more_iterations() {
    let start = Instant::now();
    let mut lp_problems = example_lps().into_iter().map(|(p, _)| p).collect::<Vec<_>>();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..5 {
        lp_problems.push(random_lp(&mut rng, 3, 3));
    }
    for p in &lp_problems {
        let mut iters = Vec::new();
        for tol in [1e-4, 1e-8] {
            let r = solve_lp(&p, &LpOptions { tol, ..Default::default() }).unwrap();
            assert_eq!(r.status, LpStatus::Optimal);
            iters.push(r.iterations);
        }
        assert!(iters[0] <= iters[1], "LP: {} > {}", iters[0], iters[1]);
    }

    let mut nlp_models: Vec<model_ad::Model> = analytic_nlps().into_iter().map(|(m, _)| m).collect();
    nlp_models.push(builtin_instance(Family::RosenbrockChain, 10).unwrap());
    nlp_models.push(builtin_instance(Family::RosenbrockChain, 100).unwrap());
    for model in &nlp_models {
        let mut iters = Vec::new();
        for tol in [1e-4, 1e-8] {
            let r = solve_nlp(model, &NlpOptions { tol, ..Default::default() }).unwrap();
            assert_eq!(r.status, NlpStatus::Optimal);
            iters.push(r.iterations);
        }
        assert!(iters[0] <= iters[1], "NLP: {} > {}", iters[0], iters[1]);
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("PASS: tolerance tiers, iterations at tol 1e-4 <= iterations at tol 1e-8 on the regression set ({elapsed:.2}s)");
}
