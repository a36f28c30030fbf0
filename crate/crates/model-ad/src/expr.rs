//! Expression trees over variable and parameter slots.
//!
//! Slots are template-local: a template's expression refers to variable
//! slots `0..k-1` and parameter slots `0..p-1`, and each instance maps them
//! to global variable indices and fixed parameter values.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Expression built by explicit tree construction.
#[derive(Debug, Clone)]
pub enum Expr {
    Const(f64),
    /// Variable slot, template-local id.
    Var(usize),
    /// Parameter slot, template-local id.
    Param(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    pub fn var(slot: usize) -> Self {
        Expr::Var(slot)
    }

    pub fn param(slot: usize) -> Self {
        Expr::Param(slot)
    }

    fn unary(self, op: UnaryOp) -> Self {
        Expr::Unary(op, Box::new(self))
    }

    fn binary(self, op: BinaryOp, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(self), Box::new(rhs))
    }

    pub fn neg(self) -> Self {
        self.unary(UnaryOp::Neg)
    }

    pub fn sin(self) -> Self {
        self.unary(UnaryOp::Sin)
    }

    pub fn cos(self) -> Self {
        self.unary(UnaryOp::Cos)
    }

    pub fn exp(self) -> Self {
        self.unary(UnaryOp::Exp)
    }

    pub fn log(self) -> Self {
        self.unary(UnaryOp::Log)
    }

    pub fn sqrt(self) -> Self {
        self.unary(UnaryOp::Sqrt)
    }

    pub fn square(self) -> Self {
        self.unary(UnaryOp::Square)
    }

    pub fn add(self, rhs: Expr) -> Self {
        self.binary(BinaryOp::Add, rhs)
    }

    pub fn sub(self, rhs: Expr) -> Self {
        self.binary(BinaryOp::Sub, rhs)
    }

    pub fn mul(self, rhs: Expr) -> Self {
        self.binary(BinaryOp::Mul, rhs)
    }

    pub fn div(self, rhs: Expr) -> Self {
        self.binary(BinaryOp::Div, rhs)
    }

    /// General power; base must stay positive unless the exponent evaluates
    /// to an integer.
    pub fn pow(self, rhs: Expr) -> Self {
        self.binary(BinaryOp::Pow, rhs)
    }

    pub fn powi(self, exponent: i32) -> Self {
        self.binary(BinaryOp::Pow, Expr::Const(exponent as f64))
    }

    /// Largest variable-slot id plus one (0 if no variables appear).
    pub fn var_slot_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Param(_) => 0,
            Expr::Var(s) => s + 1,
            Expr::Unary(_, a) => a.var_slot_count(),
            Expr::Binary(_, a, b) => a.var_slot_count().max(b.var_slot_count()),
        }
    }

    pub fn param_slot_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 0,
            Expr::Param(s) => s + 1,
            Expr::Unary(_, a) => a.param_slot_count(),
            Expr::Binary(_, a, b) => a.param_slot_count().max(b.param_slot_count()),
        }
    }
}
