use crate::cnum::{CEps, Eps};
use crate::error::Error;
use crate::Result;
use std::fmt;
use std::sync::Arc;

/// Expression node. Trees are immutable after construction and shared via
/// `Arc`, so cloning and re-evaluating from many threads is cheap and safe.
#[derive(Debug, Clone)]
pub enum Node {
    Var,
    Const(CEps),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    IntPow(Arc<Node>, i32),
    Exp(Arc<Node>),
}

/// A closed-form function of one C_eps variable `z`.
///
/// The eps tag lives on the wrapper; every constant in the tree carries the
/// same tag (enforced by the constructors), so evaluation never mixes
/// algebras.
#[derive(Debug, Clone)]
pub struct HoloExpr {
    eps: Eps,
    root: Arc<Node>,
}

impl HoloExpr {
    pub fn eps(&self) -> Eps {
        self.eps
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn var(eps: Eps) -> Self {
        Self { eps, root: Arc::new(Node::Var) }
    }

    pub fn constant(c: CEps) -> Self {
        Self { eps: c.eps, root: Arc::new(Node::Const(c)) }
    }

    pub fn real(v: f64, eps: Eps) -> Self {
        Self::constant(CEps::real(v, eps))
    }

    fn bin(self, rhs: Self, f: impl FnOnce(Arc<Node>, Arc<Node>) -> Node) -> Result<Self> {
        if self.eps != rhs.eps {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { eps: self.eps, root: Arc::new(f(self.root, rhs.root)) })
    }

    pub fn add(self, rhs: Self) -> Result<Self> {
        self.bin(rhs, Node::Add)
    }

    pub fn sub(self, rhs: Self) -> Result<Self> {
        self.bin(rhs, Node::Sub)
    }

    pub fn mul(self, rhs: Self) -> Result<Self> {
        self.bin(rhs, Node::Mul)
    }

    pub fn div(self, rhs: Self) -> Result<Self> {
        self.bin(rhs, Node::Div)
    }

    pub fn pow(self, n: i32) -> Self {
        Self { eps: self.eps, root: Arc::new(Node::IntPow(self.root, n)) }
    }

    pub fn exp(self) -> Self {
        Self { eps: self.eps, root: Arc::new(Node::Exp(self.root)) }
    }

    pub fn neg(self) -> Self {
        let zero = Arc::new(Node::Const(CEps::zero(self.eps)));
        Self { eps: self.eps, root: Arc::new(Node::Sub(zero, self.root)) }
    }

    /// Evaluate at `z`. Division by a null-cone value reports the offending
    /// subexpression.
    pub fn eval(&self, z: CEps) -> Result<CEps> {
        if z.eps != self.eps {
            return Err(Error::AlgebraMismatch);
        }
        eval_node(&self.root, z)
    }

    /// Exact symbolic derivative; the result is again a closed form over the
    /// same algebra.
    pub fn derive(&self) -> Self {
        Self { eps: self.eps, root: derive_node(&self.root, self.eps) }
    }

    /// Replace the variable by another expression (used to pull data on an
    /// annulus back to the conformal log chart via `z -> exp(w)`).
    pub fn substitute(&self, replacement: &HoloExpr) -> Result<Self> {
        if replacement.eps != self.eps {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { eps: self.eps, root: subst_node(&self.root, &replacement.root) })
    }

    /// Structural equality with bit-exact constant comparison; this is the
    /// equality the parse -> print -> parse round trip must preserve.
    pub fn structurally_eq(&self, other: &Self) -> bool {
        self.eps == other.eps && node_eq(&self.root, &other.root)
    }
}

fn eval_node(node: &Node, z: CEps) -> Result<CEps> {
    match node {
        Node::Var => Ok(z),
        Node::Const(c) => Ok(*c),
        Node::Add(a, b) => Ok(eval_node(a, z)? + eval_node(b, z)?),
        Node::Sub(a, b) => Ok(eval_node(a, z)? - eval_node(b, z)?),
        Node::Mul(a, b) => Ok(eval_node(a, z)? * eval_node(b, z)?),
        Node::Div(a, b) => {
            let num = eval_node(a, z)?;
            let den = eval_node(b, z)?;
            num.try_div(den).map_err(|e| match e {
                Error::SingularDivisor { divisor, .. } => Error::SingularDivisor {
                    divisor,
                    context: format!("{} at z = {}", DisplayNode(b), z),
                },
                other => other,
            })
        }
        Node::IntPow(a, n) => {
            let base = eval_node(a, z)?;
            base.powi(*n).map_err(|e| match e {
                Error::SingularDivisor { divisor, .. } => Error::SingularDivisor {
                    divisor,
                    context: format!("{}^{} at z = {}", DisplayNode(a), n, z),
                },
                other => other,
            })
        }
        Node::Exp(a) => Ok(eval_node(a, z)?.exp()),
    }
}

fn is_const(node: &Node, v: f64) -> bool {
    matches!(node, Node::Const(c) if c.re == v && c.im == 0.0)
}

/// Light folding used when assembling derivatives: drops exact zero/one
/// factors so repeated differentiation stays tractable. Folding never
/// removes a division node, so singularities of the input survive.
fn simplified(node: Node) -> Arc<Node> {
    let folded = match &node {
        Node::Add(a, b) => {
            if is_const(a, 0.0) {
                Some(b.clone())
            } else if is_const(b, 0.0) {
                Some(a.clone())
            } else {
                None
            }
        }
        Node::Sub(a, b) if is_const(b, 0.0) => Some(a.clone()),
        Node::Mul(a, b) => {
            if is_const(a, 0.0) || is_const(b, 1.0) {
                Some(a.clone())
            } else if is_const(b, 0.0) || is_const(a, 1.0) {
                Some(b.clone())
            } else {
                None
            }
        }
        Node::IntPow(a, 1) => Some(a.clone()),
        _ => None,
    };
    folded.unwrap_or_else(|| Arc::new(node))
}

fn derive_node(node: &Node, eps: Eps) -> Arc<Node> {
    let zero = || Arc::new(Node::Const(CEps::zero(eps)));
    match node {
        Node::Var => Arc::new(Node::Const(CEps::one(eps))),
        Node::Const(_) => zero(),
        Node::Add(a, b) => simplified(Node::Add(derive_node(a, eps), derive_node(b, eps))),
        Node::Sub(a, b) => simplified(Node::Sub(derive_node(a, eps), derive_node(b, eps))),
        Node::Mul(a, b) => {
            let da = derive_node(a, eps);
            let db = derive_node(b, eps);
            simplified(Node::Add(
                simplified(Node::Mul(da, b.clone())),
                simplified(Node::Mul(a.clone(), db)),
            ))
        }
        Node::Div(a, b) => {
            // (a/b)' = (a' b - a b') / b^2
            let da = derive_node(a, eps);
            let db = derive_node(b, eps);
            let num = simplified(Node::Sub(
                simplified(Node::Mul(da, b.clone())),
                simplified(Node::Mul(a.clone(), db)),
            ));
            let den = Arc::new(Node::IntPow(b.clone(), 2));
            Arc::new(Node::Div(num, den))
        }
        Node::IntPow(a, n) => {
            if *n == 0 {
                return zero();
            }
            let da = derive_node(a, eps);
            let coeff = Arc::new(Node::Const(CEps::real(*n as f64, eps)));
            let inner = simplified(Node::IntPow(a.clone(), n - 1));
            simplified(Node::Mul(simplified(Node::Mul(coeff, inner)), da))
        }
        Node::Exp(a) => {
            let da = derive_node(a, eps);
            simplified(Node::Mul(Arc::new(Node::Exp(a.clone())), da))
        }
    }
}

fn subst_node(node: &Node, replacement: &Arc<Node>) -> Arc<Node> {
    match node {
        Node::Var => replacement.clone(),
        Node::Const(c) => Arc::new(Node::Const(*c)),
        Node::Add(a, b) => Arc::new(Node::Add(subst_node(a, replacement), subst_node(b, replacement))),
        Node::Sub(a, b) => Arc::new(Node::Sub(subst_node(a, replacement), subst_node(b, replacement))),
        Node::Mul(a, b) => Arc::new(Node::Mul(subst_node(a, replacement), subst_node(b, replacement))),
        Node::Div(a, b) => Arc::new(Node::Div(subst_node(a, replacement), subst_node(b, replacement))),
        Node::IntPow(a, n) => Arc::new(Node::IntPow(subst_node(a, replacement), *n)),
        Node::Exp(a) => Arc::new(Node::Exp(subst_node(a, replacement))),
    }
}

fn node_eq(a: &Node, b: &Node) -> bool {
    match (a, b) {
        (Node::Var, Node::Var) => true,
        (Node::Const(x), Node::Const(y)) => {
            x.eps == y.eps && x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()
        }
        (Node::Add(a1, a2), Node::Add(b1, b2))
        | (Node::Sub(a1, a2), Node::Sub(b1, b2))
        | (Node::Mul(a1, a2), Node::Mul(b1, b2))
        | (Node::Div(a1, a2), Node::Div(b1, b2)) => node_eq(a1, b1) && node_eq(a2, b2),
        (Node::IntPow(a1, n1), Node::IntPow(b1, n2)) => n1 == n2 && node_eq(a1, b1),
        (Node::Exp(a1), Node::Exp(b1)) => node_eq(a1, b1),
        _ => false,
    }
}

// Printing uses the same infix grammar the parser accepts; constants print
// through the f64 shortest-round-trip formatter, so parse(print(e)) is
// structurally identical to e, bit for bit.

struct DisplayNode<'a>(&'a Node);

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::IntPow(..) => 3,
        Node::Var | Node::Const(_) | Node::Exp(_) => 4,
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, min_prec: u8) -> fmt::Result {
    let prec = precedence(node);
    // A compound constant like (1+2j) carries its own parentheses.
    let needs_paren = prec < min_prec;
    if needs_paren {
        write!(f, "(")?;
    }
    match node {
        Node::Var => write!(f, "z")?,
        Node::Const(c) => write!(f, "{c}")?,
        Node::Add(a, b) => {
            write_node(f, a, 1)?;
            write!(f, "+")?;
            write_node(f, b, 2)?;
        }
        Node::Sub(a, b) => {
            // `0 - x` is the parser's unary minus
            if is_const(a, 0.0) {
                write!(f, "-")?;
                write_node(f, b, 3)?;
            } else {
                write_node(f, a, 1)?;
                write!(f, "-")?;
                write_node(f, b, 2)?;
            }
        }
        Node::Mul(a, b) => {
            write_node(f, a, 2)?;
            write!(f, "*")?;
            write_node(f, b, 3)?;
        }
        Node::Div(a, b) => {
            write_node(f, a, 2)?;
            write!(f, "/")?;
            write_node(f, b, 3)?;
        }
        Node::IntPow(a, n) => {
            write_node(f, a, 4)?;
            write!(f, "^{n}")?;
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            write_node(f, a, 0)?;
            write!(f, ")")?;
        }
    }
    if needs_paren {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for DisplayNode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self.0, 0)
    }
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, 0)
    }
}
