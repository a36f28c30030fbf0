//! Example LPs with hand-known optima plus randomized comparison against a
//! brute-force vertex enumeration oracle.

use ipm_lp::{initial_point, solve_lp, LinearProgram, LpError, LpOptions, LpStatus};
use kkt::Formulation;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sparse_core::SparseMatrix;

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

/// Minimizes c^T x over A x >= b by solving every n-subset of tight rows
/// and keeping the best feasible intersection. Exponential, but exact.
fn vertex_enumeration_optimum(lp: &LinearProgram) -> Option<(f64, Vec<f64>)> {
    let (n, m) = (lp.n(), lp.m());
    let a = lp.a.to_dense();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = dense_solve_rows(&a, &lp.b, &subset) {
            let g = lp.constraints(&x);
            if g.iter().all(|&v| v >= -1e-7) {
                let obj = lp.objective(&x);
                if best.as_ref().map(|(b, _)| obj < *b).unwrap_or(true) {
                    best = Some((obj, x));
                }
            }
        }
        // next combination of n rows out of m, lexicographic
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

#[test]
fn single_bound_lp() {
    let p = lp(vec![1.0], &[(&[1.0], 1.0)]);
    let r = solve_lp(&p, &LpOptions::default()).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    assert!((r.primal_objective - 1.0).abs() < 1e-6, "{r:?}");
}

#[test]
fn two_binding_bounds() {
    let p = lp(
        vec![1.0, 1.0],
        &[
            (&[1.0, 0.0], 1.0),
            (&[0.0, 1.0], 2.0),
            (&[1.0, 1.0], 0.0),
        ],
    );
    let r = solve_lp(&p, &LpOptions::default()).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    assert!((r.primal_objective - 3.0).abs() < 1e-6, "{r:?}");
}

#[test]
fn box_constrained_maximization() {
    // min -x1 - 2 x2 over x1+x2 <= 4, x1 <= 3, x2 <= 3, x >= 0
    let p = lp(
        vec![-1.0, -2.0],
        &[
            (&[-1.0, -1.0], -4.0),
            (&[-1.0, 0.0], -3.0),
            (&[0.0, -1.0], -3.0),
            (&[1.0, 0.0], 0.0),
            (&[0.0, 1.0], 0.0),
        ],
    );
    let (oracle_obj, oracle_x) = vertex_enumeration_optimum(&p).unwrap();
    assert!((oracle_obj - -7.0).abs() < 1e-9);
    assert!((oracle_x[0] - 1.0).abs() < 1e-9 && (oracle_x[1] - 3.0).abs() < 1e-9);
    let r = solve_lp(&p, &LpOptions::default()).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    assert!((r.primal_objective - -7.0).abs() < 1e-6, "{r:?}");
    assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 3.0).abs() < 1e-5);
}

#[test]
fn initial_point_rule() {
    let p = lp(vec![1.0], &[(&[1.0], 1.0)]);
    let s0 = initial_point(&p).unwrap();
    assert_eq!(s0.x, vec![0.0]);
    assert_eq!(s0.s, vec![1.0]);
    assert_eq!(s0.lambda, vec![1.0]);
    assert_eq!(s0.mu, 1.0);

    let zero_b = lp(vec![1.0, 1.0], &[(&[1.0, 0.0], 0.0), (&[0.0, 1.0], 0.0)]);
    let s0 = initial_point(&zero_b).unwrap();
    assert_eq!(s0.s, vec![1.0, 1.0]);
    assert_eq!(s0.mu, 1.0);

    let empty = LinearProgram::new(vec![1.0], SparseMatrix::empty(0, 1), vec![]).unwrap();
    assert!(matches!(initial_point(&empty), Err(LpError::EmptyProblem)));
}

/// Random bounded feasible LP: a strictly interior point is planted and a
/// box keeps the feasible set bounded.
fn random_lp(rng: &mut impl Rng, n: usize, extra_rows: usize) -> LinearProgram {
    let x_star: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for _ in 0..extra_rows {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ax: f64 = row.iter().zip(&x_star).map(|(a, x)| a * x).sum();
        rows.push((row, ax - rng.gen_range(0.1..2.0)));
    }
    // box |x_j| <= 10 keeps every LP bounded
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

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..12 {
        let n = rng.gen_range(2..=4);
        let extra = rng.gen_range(1..=4);
        let p = random_lp(&mut rng, n, extra);
        let (oracle_obj, _) = vertex_enumeration_optimum(&p).expect("bounded feasible LP");
        let r = solve_lp(&p, &LpOptions::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal, "{r:?}");
        assert!(
            (r.primal_objective - oracle_obj).abs() <= 1e-6 * (1.0 + oracle_obj.abs()),
            "{} vs oracle {oracle_obj}",
            r.primal_objective
        );
        // duality gap at optimality
        assert!(
            (r.primal_objective - r.dual_objective).abs() <= 1e-7 * (1.0 + r.primal_objective.abs())
        );
    }
}

#[test]
fn formulations_agree_on_the_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..6 {
        let p = random_lp(&mut rng, 3, 3);
        let mut objs = Vec::new();
        for f in [Formulation::DualCondensed, Formulation::Augmented2x2] {
            let opts = LpOptions {
                formulation: f,
                ..Default::default()
            };
            let r = solve_lp(&p, &opts).unwrap();
            assert_eq!(r.status, LpStatus::Optimal, "{f:?}: {r:?}");
            objs.push(r.primal_objective);
        }
        assert!((objs[0] - objs[1]).abs() <= 1e-7 * (1.0 + objs[0].abs()));
    }
}

#[test]
fn gap_is_almost_always_nonincreasing() {
    // re-run solves capped at k iterations to sample the gap trajectory
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let p = random_lp(&mut rng, 4, 5);
    let mut gaps = Vec::new();
    for k in 0..25 {
        let opts = LpOptions {
            max_iter: k,
            ..Default::default()
        };
        let r = solve_lp(&p, &opts).unwrap();
        gaps.push(r.complementarity_gap);
        if r.status == LpStatus::Optimal {
            break;
        }
    }
    let increases = gaps
        .windows(2)
        .filter(|w| w[1] > w[0] * (1.0 + 1e-12))
        .count();
    assert!(
        increases * 20 <= gaps.len(),
        "{increases} increases out of {} steps",
        gaps.len()
    );
    assert!(*gaps.last().unwrap() <= 1e-8);
}

#[test]
fn interior_is_preserved_and_report_serializes() {
    let p = lp(
        vec![1.0, -1.0],
        &[
            (&[1.0, 0.0], -5.0),
            (&[-1.0, 0.0], -5.0),
            (&[0.0, 1.0], -5.0),
            (&[0.0, -1.0], -5.0),
        ],
    );
    let r = solve_lp(&p, &LpOptions::default()).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"status\":\"Optimal\""));
    assert!(json.contains("wall_time_seconds"));
}

#[test]
fn infeasible_lp_hits_the_iteration_limit() {
    // x >= 1 and -x >= 0 cannot both hold
    let p = lp(vec![1.0], &[(&[1.0], 1.0), (&[-1.0], 0.0)]);
    let opts = LpOptions {
        max_iter: 60,
        ..Default::default()
    };
    let r = solve_lp(&p, &opts).unwrap();
    assert_eq!(r.status, LpStatus::IterationLimit);
}

#[test]
fn empty_rows_are_flagged() {
    let a = SparseMatrix::from_triplets(3, 2, &[(0, 0, 1.0), (2, 1, 1.0)]).unwrap();
    let p = LinearProgram::new(vec![0.0, 0.0], a, vec![0.0; 3]).unwrap();
    assert_eq!(p.empty_rows(), vec![1]);
}
