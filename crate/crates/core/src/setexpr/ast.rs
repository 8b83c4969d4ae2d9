use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// `k#E`: the k-fold sumset `E + … + E`.
    IterSum(u32, Box<Expr>),
    /// `E^k`: the k-fold product set `E · … · E`.
    IterProd(u32, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::IterSum(..) | Expr::Neg(..) => 3,
            Expr::IterProd(..) => 4,
            Expr::Var(_) => 5,
        }
    }

    /// Variable names in first-occurrence order.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Var(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Expr::Neg(e) | Expr::IterSum(_, e) | Expr::IterProd(_, e) => e.collect_vars(out),
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimal parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(n) => f.write_str(n),
            Expr::Add(l, r) | Expr::Sub(l, r) => {
                write_child(f, l, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                write_child(f, r, 2)
            }
            Expr::Mul(l, r) => {
                write_child(f, l, 2)?;
                f.write_str("*")?;
                write_child(f, r, 3)
            }
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, 3)
            }
            Expr::IterSum(k, e) => {
                write!(f, "{k}#")?;
                write_child(f, e, 3)
            }
            Expr::IterProd(k, e) => {
                write_child(f, e, 5)?;
                write!(f, "^{k}")
            }
        }
    }
}
