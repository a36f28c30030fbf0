//! Scalable built-in NLP families standing in for benchmark sets.

use model_ad::{Expr, Instance, Model};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    RosenbrockChain,
    ConvexQpGrid,
    CirclePacking,
}

impl std::str::FromStr for Family {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rosenbrock_chain" => Ok(Family::RosenbrockChain),
            "convex_qp_grid" => Ok(Family::ConvexQpGrid),
            "circle_packing" => Ok(Family::CirclePacking),
            other => Err(BenchError::UnknownFamily(other.into())),
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::RosenbrockChain => "rosenbrock_chain",
            Family::ConvexQpGrid => "convex_qp_grid",
            Family::CirclePacking => "circle_packing",
        }
    }
}

pub fn builtin_instance(family: Family, size: usize) -> Result<Model, BenchError> {
    if size < 2 {
        return Err(BenchError::SizeTooSmall { size });
    }
    Ok(match family {
        Family::RosenbrockChain => rosenbrock_chain(size),
        Family::ConvexQpGrid => convex_qp_grid(size),
        Family::CirclePacking => circle_packing(size),
    })
}

/// sum_i 100 (x_i^2 - x_{i+1})^2 + (x_i - 1)^2 with bounds x >= -10 as
/// inequality rows. Global minimum 0 at x = e. Starts at 0.5 e; the classic
/// alternating -1.2/1 start lands in a local minimum of the chained form.
fn rosenbrock_chain(n: usize) -> Model {
    let mut model = Model::new(n);
    let term = Expr::param(0)
        .mul(Expr::var(0).square().sub(Expr::var(1)).square())
        .add(Expr::var(0).sub(Expr::constant(1.0)).square());
    model
        .add_objective(
            term,
            (0..n - 1)
                .map(|i| Instance {
                    vars: vec![i, i + 1],
                    params: vec![100.0],
                })
                .collect(),
        )
        .expect("template arity is fixed");
    model
        .add_constraint(
            Expr::var(0).add(Expr::constant(10.0)),
            (0..n)
                .map(|i| Instance {
                    vars: vec![i],
                    params: vec![],
                })
                .collect(),
        )
        .expect("template arity is fixed");
    model.set_initial_point(vec![0.5; n]).unwrap();
    model
}

/// min sum_i (x_i - i/n)^2 with adjacent differences x_{i+1} - x_i >= -1/n.
/// The unconstrained minimizer x_i = i/n has differences 1/n > -1/n, so the
/// optimum is 0.
fn convex_qp_grid(n: usize) -> Model {
    let mut model = Model::new(n);
    model
        .add_objective(
            Expr::var(0).sub(Expr::param(0)).square(),
            (0..n)
                .map(|i| Instance {
                    vars: vec![i],
                    params: vec![i as f64 / n as f64],
                })
                .collect(),
        )
        .expect("template arity is fixed");
    model
        .add_constraint(
            Expr::var(1).sub(Expr::var(0)).add(Expr::param(0)),
            (0..n - 1)
                .map(|i| Instance {
                    vars: vec![i, i + 1],
                    params: vec![1.0 / n as f64],
                })
                .collect(),
        )
        .expect("template arity is fixed");
    model
}

/// Electrostatic-style point spreading: minimize sum_{i<j} 1/|p_i - p_j|^2
/// with every point constrained to the unit disk. Nonconvex; starts on a
/// radius-0.5 circle.
fn circle_packing(k: usize) -> Model {
    let mut model = Model::new(2 * k);
    // slots: (x_i, y_i, x_j, y_j)
    let dx = Expr::var(0).sub(Expr::var(2));
    let dy = Expr::var(1).sub(Expr::var(3));
    let inv_sq_dist = Expr::constant(1.0).div(dx.square().add(dy.square()));
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            pairs.push(Instance {
                vars: vec![2 * i, 2 * i + 1, 2 * j, 2 * j + 1],
                params: vec![],
            });
        }
    }
    model.add_objective(inv_sq_dist, pairs).expect("template arity is fixed");
    model
        .add_constraint(
            Expr::constant(1.0)
                .sub(Expr::var(0).square())
                .sub(Expr::var(1).square()),
            (0..k)
                .map(|i| Instance {
                    vars: vec![2 * i, 2 * i + 1],
                    params: vec![],
                })
                .collect(),
        )
        .expect("template arity is fixed");
    let mut x0 = Vec::with_capacity(2 * k);
    for i in 0..k {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
        x0.push(0.5 * theta.cos());
        x0.push(0.5 * theta.sin());
    }
    model.set_initial_point(x0).unwrap();
    model
}
