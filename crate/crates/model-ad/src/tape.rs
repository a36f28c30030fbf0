//! Compiled evaluation tapes for template expressions.
//!
//! A tape is the expression flattened in postorder. One compiled tape serves
//! every instance of a template: values differ per instance, the node list
//! and the second-derivative slot-pair pattern do not.

use std::collections::BTreeSet;

use crate::expr::{BinaryOp, Expr, UnaryOp};

#[derive(Debug, Clone)]
enum Node {
    Const(f64),
    Var(usize),
    Param(usize),
    Un(UnaryOp, usize),
    Bin(BinaryOp, usize, usize),
    /// Power with the flag set when the exponent subtree contains a
    /// variable slot; such powers require a strictly positive base.
    Pow {
        base: usize,
        exponent: usize,
        var_exponent: bool,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Tape {
    nodes: Vec<Node>,
    pub n_var: usize,
    pub n_param: usize,
    /// Slot pairs (hi, lo) with hi >= lo that can carry a second derivative.
    pub hess_pairs: Vec<(usize, usize)>,
}

/// Scratch buffers reusable across instances of any template.
#[derive(Debug, Default)]
pub(crate) struct TapeBuf {
    val: Vec<f64>,
    dot: Vec<f64>,
    adj: Vec<f64>,
    adj_dot: Vec<f64>,
}

fn contains_var(expr: &Expr) -> bool {
    match expr {
        Expr::Var(_) => true,
        Expr::Const(_) | Expr::Param(_) => false,
        Expr::Unary(_, a) => contains_var(a),
        Expr::Binary(_, a, b) => contains_var(a) || contains_var(b),
    }
}

impl Tape {
    pub fn compile(expr: &Expr) -> Tape {
        let mut nodes = Vec::new();
        flatten(expr, &mut nodes);
        let mut tape = Tape {
            nodes,
            n_var: expr.var_slot_count(),
            n_param: expr.param_slot_count(),
            hess_pairs: Vec::new(),
        };
        tape.hess_pairs = tape.slot_pair_pattern();
        tape
    }

    /// Conservative superset of slot pairs with nonzero second derivatives.
    /// Every node contributes the pairs its own curvature can couple; inner
    /// nodes cover the chain-rule terms they own.
    fn slot_pair_pattern(&self) -> Vec<(usize, usize)> {
        let mut deps: Vec<Vec<usize>> = Vec::with_capacity(self.nodes.len());
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        let add_cross = |a: &[usize], b: &[usize], pairs: &mut BTreeSet<(usize, usize)>| {
            for &i in a {
                for &j in b {
                    pairs.insert((i.max(j), i.min(j)));
                }
            }
        };
        for node in &self.nodes {
            let d = match node {
                Node::Const(_) | Node::Param(_) => Vec::new(),
                Node::Var(s) => vec![*s],
                Node::Un(op, a) => {
                    let da = deps[*a].clone();
                    if !matches!(op, UnaryOp::Neg) {
                        add_cross(&da, &da, &mut pairs);
                    }
                    da
                }
                Node::Bin(op, a, b) => {
                    let (da, db) = (&deps[*a], &deps[*b]);
                    match op {
                        BinaryOp::Add | BinaryOp::Sub => {}
                        BinaryOp::Mul => add_cross(da, db, &mut pairs),
                        BinaryOp::Div => {
                            add_cross(da, db, &mut pairs);
                            add_cross(db, db, &mut pairs);
                        }
                        BinaryOp::Pow => unreachable!("pow compiles to Node::Pow"),
                    }
                    let mut u: Vec<usize> = da.iter().chain(db.iter()).copied().collect();
                    u.sort_unstable();
                    u.dedup();
                    u
                }
                Node::Pow { base, exponent, .. } => {
                    let mut u: Vec<usize> = deps[*base]
                        .iter()
                        .chain(deps[*exponent].iter())
                        .copied()
                        .collect();
                    u.sort_unstable();
                    u.dedup();
                    add_cross(&u, &u, &mut pairs);
                    u
                }
            };
            deps.push(d);
        }
        pairs.into_iter().collect()
    }

    /// Forward sweep. With `seed = Some(j)` it also carries the tangent of
    /// variable slot j. Returns the root value.
    fn forward(
        &self,
        buf: &mut TapeBuf,
        vars: &[f64],
        params: &[f64],
        seed: Option<usize>,
    ) -> Result<f64, String> {
        buf.val.resize(self.nodes.len(), 0.0);
        buf.dot.resize(self.nodes.len(), 0.0);
        for (k, node) in self.nodes.iter().enumerate() {
            let (v, t) = match node {
                Node::Const(c) => (*c, 0.0),
                Node::Var(s) => (vars[*s], if seed == Some(*s) { 1.0 } else { 0.0 }),
                Node::Param(s) => (params[*s], 0.0),
                Node::Un(op, a) => {
                    let (va, ta) = (buf.val[*a], buf.dot[*a]);
                    match op {
                        UnaryOp::Neg => (-va, -ta),
                        UnaryOp::Sin => (va.sin(), va.cos() * ta),
                        UnaryOp::Cos => (va.cos(), -va.sin() * ta),
                        UnaryOp::Exp => {
                            let v = va.exp();
                            (v, v * ta)
                        }
                        UnaryOp::Log => {
                            if va <= 0.0 {
                                return Err(format!("log of nonpositive value {va}"));
                            }
                            (va.ln(), ta / va)
                        }
                        UnaryOp::Sqrt => {
                            if va < 0.0 {
                                return Err(format!("sqrt of negative value {va}"));
                            }
                            let v = va.sqrt();
                            (v, 0.5 * ta / v)
                        }
                        UnaryOp::Square => (va * va, 2.0 * va * ta),
                    }
                }
                Node::Bin(op, a, b) => {
                    let (va, ta) = (buf.val[*a], buf.dot[*a]);
                    let (vb, tb) = (buf.val[*b], buf.dot[*b]);
                    match op {
                        BinaryOp::Add => (va + vb, ta + tb),
                        BinaryOp::Sub => (va - vb, ta - tb),
                        BinaryOp::Mul => (va * vb, ta * vb + va * tb),
                        BinaryOp::Div => {
                            if vb == 0.0 {
                                return Err("division by zero".into());
                            }
                            let v = va / vb;
                            (v, (ta - v * tb) / vb)
                        }
                        BinaryOp::Pow => unreachable!("pow compiles to Node::Pow"),
                    }
                }
                Node::Pow {
                    base,
                    exponent,
                    var_exponent,
                } => {
                    let (va, ta) = (buf.val[*base], buf.dot[*base]);
                    let (vb, tb) = (buf.val[*exponent], buf.dot[*exponent]);
                    if va > 0.0 {
                        let v = va.powf(vb);
                        (v, v * (tb * va.ln() + vb * ta / va))
                    } else if !var_exponent && vb.fract() == 0.0 && vb.abs() < i32::MAX as f64 {
                        let n = vb as i32;
                        if va == 0.0 && n < 1 {
                            return Err(format!("zero base with exponent {n}"));
                        }
                        let v = va.powi(n);
                        (v, f64::from(n) * va.powi(n - 1) * ta)
                    } else {
                        return Err(format!(
                            "power with nonpositive base {va} and non-integer exponent {vb}"
                        ));
                    }
                }
            };
            buf.val[k] = v;
            buf.dot[k] = t;
        }
        Ok(*buf.val.last().expect("tape is nonempty"))
    }

    pub fn eval(&self, buf: &mut TapeBuf, vars: &[f64], params: &[f64]) -> Result<f64, String> {
        self.forward(buf, vars, params, None)
    }

    /// Reverse sweep; accumulates d(root)/d(slot) into `slot_grad` and
    /// returns the root value.
    pub fn grad(
        &self,
        buf: &mut TapeBuf,
        vars: &[f64],
        params: &[f64],
        slot_grad: &mut [f64],
    ) -> Result<f64, String> {
        let value = self.forward(buf, vars, params, None)?;
        buf.adj.clear();
        buf.adj.resize(self.nodes.len(), 0.0);
        *buf.adj.last_mut().unwrap() = 1.0;
        for k in (0..self.nodes.len()).rev() {
            let adj = buf.adj[k];
            if adj == 0.0 {
                continue;
            }
            match &self.nodes[k] {
                Node::Const(_) | Node::Param(_) => {}
                Node::Var(s) => slot_grad[*s] += adj,
                Node::Un(op, a) => {
                    let va = buf.val[*a];
                    let p = match op {
                        UnaryOp::Neg => -1.0,
                        UnaryOp::Sin => va.cos(),
                        UnaryOp::Cos => -va.sin(),
                        UnaryOp::Exp => buf.val[k],
                        UnaryOp::Log => 1.0 / va,
                        UnaryOp::Sqrt => 0.5 / buf.val[k],
                        UnaryOp::Square => 2.0 * va,
                    };
                    buf.adj[*a] += adj * p;
                }
                Node::Bin(op, a, b) => {
                    let (va, vb) = (buf.val[*a], buf.val[*b]);
                    match op {
                        BinaryOp::Add => {
                            buf.adj[*a] += adj;
                            buf.adj[*b] += adj;
                        }
                        BinaryOp::Sub => {
                            buf.adj[*a] += adj;
                            buf.adj[*b] -= adj;
                        }
                        BinaryOp::Mul => {
                            buf.adj[*a] += adj * vb;
                            buf.adj[*b] += adj * va;
                        }
                        BinaryOp::Div => {
                            buf.adj[*a] += adj / vb;
                            buf.adj[*b] -= adj * buf.val[k] / vb;
                        }
                        BinaryOp::Pow => unreachable!(),
                    }
                }
                Node::Pow { base, exponent, .. } => {
                    let (va, vb) = (buf.val[*base], buf.val[*exponent]);
                    let v = buf.val[k];
                    if va > 0.0 {
                        buf.adj[*base] += adj * vb * v / va;
                        buf.adj[*exponent] += adj * v * va.ln();
                    } else {
                        let n = vb as i32;
                        buf.adj[*base] += adj * f64::from(n) * va.powi(n - 1);
                    }
                }
            }
        }
        Ok(value)
    }

    /// Forward-over-reverse: Hessian column for variable slot `seed`.
    /// `col` receives d^2(root)/d(slot_i)d(slot_seed) for every slot i.
    pub fn hess_col(
        &self,
        buf: &mut TapeBuf,
        vars: &[f64],
        params: &[f64],
        seed: usize,
        col: &mut [f64],
    ) -> Result<(), String> {
        self.forward(buf, vars, params, Some(seed))?;
        buf.adj.clear();
        buf.adj.resize(self.nodes.len(), 0.0);
        buf.adj_dot.clear();
        buf.adj_dot.resize(self.nodes.len(), 0.0);
        *buf.adj.last_mut().unwrap() = 1.0;
        for k in (0..self.nodes.len()).rev() {
            let (adj, adj_d) = (buf.adj[k], buf.adj_dot[k]);
            if adj == 0.0 && adj_d == 0.0 {
                continue;
            }
            // propagate a dual adjoint through a dual partial (p, pd):
            // adj_in += adj * p, adj_in_dot += adj * pd + adj_dot * p
            let push = |buf: &mut TapeBuf, idx: usize, p: f64, pd: f64| {
                buf.adj[idx] += adj * p;
                buf.adj_dot[idx] += adj * pd + adj_d * p;
            };
            match &self.nodes[k] {
                Node::Const(_) | Node::Param(_) => {}
                Node::Var(s) => col[*s] += adj_d,
                Node::Un(op, a) => {
                    let (va, ta) = (buf.val[*a], buf.dot[*a]);
                    let (p, pd) = match op {
                        UnaryOp::Neg => (-1.0, 0.0),
                        UnaryOp::Sin => (va.cos(), -va.sin() * ta),
                        UnaryOp::Cos => (-va.sin(), -va.cos() * ta),
                        UnaryOp::Exp => (buf.val[k], buf.dot[k]),
                        UnaryOp::Log => (1.0 / va, -ta / (va * va)),
                        UnaryOp::Sqrt => {
                            let v = buf.val[k];
                            (0.5 / v, -0.5 * buf.dot[k] / (v * v))
                        }
                        UnaryOp::Square => (2.0 * va, 2.0 * ta),
                    };
                    push(buf, *a, p, pd);
                }
                Node::Bin(op, a, b) => {
                    let (va, ta) = (buf.val[*a], buf.dot[*a]);
                    let (vb, tb) = (buf.val[*b], buf.dot[*b]);
                    match op {
                        BinaryOp::Add => {
                            push(buf, *a, 1.0, 0.0);
                            push(buf, *b, 1.0, 0.0);
                        }
                        BinaryOp::Sub => {
                            push(buf, *a, 1.0, 0.0);
                            push(buf, *b, -1.0, 0.0);
                        }
                        BinaryOp::Mul => {
                            push(buf, *a, vb, tb);
                            push(buf, *b, va, ta);
                        }
                        BinaryOp::Div => {
                            let (v, t) = (buf.val[k], buf.dot[k]);
                            push(buf, *a, 1.0 / vb, -tb / (vb * vb));
                            push(buf, *b, -v / vb, -(t * vb - v * tb) / (vb * vb));
                        }
                        BinaryOp::Pow => unreachable!(),
                    }
                }
                Node::Pow { base, exponent, .. } => {
                    let (va, ta) = (buf.val[*base], buf.dot[*base]);
                    let (vb, tb) = (buf.val[*exponent], buf.dot[*exponent]);
                    let (v, t) = (buf.val[k], buf.dot[k]);
                    if va > 0.0 {
                        let pa = vb * v / va;
                        let pa_d = (tb * v + vb * t) / va - vb * v * ta / (va * va);
                        let pb = v * va.ln();
                        let pb_d = t * va.ln() + v * ta / va;
                        push(buf, *base, pa, pa_d);
                        push(buf, *exponent, pb, pb_d);
                    } else {
                        let n = vb as i32;
                        let pa = f64::from(n) * va.powi(n - 1);
                        let pa_d = f64::from(n) * f64::from(n - 1) * va.powi(n - 2) * ta;
                        push(buf, *base, pa, pa_d);
                    }
                }
            }
        }
        Ok(())
    }
}

fn flatten(expr: &Expr, nodes: &mut Vec<Node>) -> usize {
    let node = match expr {
        Expr::Const(c) => Node::Const(*c),
        Expr::Var(s) => Node::Var(*s),
        Expr::Param(s) => Node::Param(*s),
        Expr::Unary(op, a) => {
            let ia = flatten(a, nodes);
            Node::Un(*op, ia)
        }
        Expr::Binary(BinaryOp::Pow, a, b) => {
            let var_exponent = contains_var(b);
            let ia = flatten(a, nodes);
            let ib = flatten(b, nodes);
            Node::Pow {
                base: ia,
                exponent: ib,
                var_exponent,
            }
        }
        Expr::Binary(op, a, b) => {
            let ia = flatten(a, nodes);
            let ib = flatten(b, nodes);
            Node::Bin(*op, ia, ib)
        }
    };
    nodes.push(node);
    nodes.len() - 1
}
