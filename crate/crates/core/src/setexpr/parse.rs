use super::ast::Expr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    Hash,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("identifier `{n}`"),
        Tok::Int(k) => format!("integer {k}"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Hash => "`#`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'#' => Tok::Hash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let k = src[start..i].parse::<u64>().map_err(|_| Error::Syntax {
                    offset: start,
                    expected: "an integer that fits in 64 bits".into(),
                })?;
                out.push((Tok::Int(k), start));
                continue;
            }
            b'A'..=b'Z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    expected: "an operator, `(`, an integer, or an identifier starting with A-Z"
                        .into(),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: format!("{expected}, found {}", describe(self.peek())),
        })
    }

    fn repeat_count(&self, k: u64, offset: usize) -> Result<u32> {
        if k == 0 {
            return Err(Error::BadRepeat { offset });
        }
        u32::try_from(k).map_err(|_| Error::Syntax {
            offset,
            expected: "a repeat count below 2^32".into(),
        })
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    // unary := '-' unary | INT '#' unary | power
    fn unary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Int(k) => {
                let at = self.offset();
                self.bump();
                if *self.peek() != Tok::Hash {
                    return self.fail("`#` after a repeat count");
                }
                self.bump();
                let k = self.repeat_count(k, at)?;
                Ok(Expr::IterSum(k, Box::new(self.unary()?)))
            }
            _ => self.power(),
        }
    }

    // power := primary ['^' INT]
    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Expr::IterProd(self.repeat_count(k, at)?, Box::new(base)))
            }
            _ => self.fail("an integer exponent after `^`"),
        }
    }

    // primary := IDENT | '(' expr ')'
    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("`)`");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.fail("an identifier, `(`, `-`, or `k#`"),
        }
    }
}

/// Parses a set expression. Parsing never evaluates anything.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut parser = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.fail("an operator or end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: &str) -> Box<Expr> {
        Box::new(Expr::var(n))
    }

    #[test]
    fn shapes() {
        assert_eq!(
            parse_expr("A*A - A*A").unwrap(),
            Expr::Sub(
                Box::new(Expr::Mul(v("A"), v("A"))),
                Box::new(Expr::Mul(v("A"), v("A")))
            )
        );
        assert_eq!(
            parse_expr("(A-A)*(A-A)").unwrap(),
            Expr::Mul(
                Box::new(Expr::Sub(v("A"), v("A"))),
                Box::new(Expr::Sub(v("A"), v("A")))
            )
        );
        assert_eq!(parse_expr("3#A").unwrap(), Expr::IterSum(3, v("A")));
        assert_eq!(parse_expr("A^2").unwrap(), Expr::IterProd(2, v("A")));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_expr("-A^2").unwrap(),
            Expr::Neg(Box::new(Expr::IterProd(2, v("A"))))
        );
        assert_eq!(
            parse_expr("2#A^3").unwrap(),
            Expr::IterSum(2, Box::new(Expr::IterProd(3, v("A"))))
        );
        assert_eq!(
            parse_expr("2#-A").unwrap(),
            Expr::IterSum(2, Box::new(Expr::Neg(v("A"))))
        );
        assert_eq!(
            parse_expr("2#A*B").unwrap(),
            Expr::Mul(Box::new(Expr::IterSum(2, v("A"))), v("B"))
        );
        assert_eq!(
            parse_expr("A - B - C").unwrap(),
            Expr::Sub(Box::new(Expr::Sub(v("A"), v("B"))), v("C"))
        );
        assert_eq!(
            parse_expr("A + B*C").unwrap(),
            Expr::Add(v("A"), Box::new(Expr::Mul(v("B"), v("C"))))
        );
        assert_eq!(parse_expr(" X_1 ").unwrap(), Expr::var("X_1"));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(
            parse_expr("A +"),
            Err(Error::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse_expr("A ) B"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_expr("a"),
            Err(Error::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expr("(A"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_expr("3A"),
            Err(Error::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_expr("A^B"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse_expr("AA"), Ok(Expr::Var(_))));
        assert_eq!(parse_expr("0#A"), Err(Error::BadRepeat { offset: 0 }));
        assert_eq!(parse_expr("A^0"), Err(Error::BadRepeat { offset: 2 }));
        assert!(matches!(
            parse_expr(""),
            Err(Error::Syntax { offset: 0, .. })
        ));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop::sample::select(vec!["A", "B", "X2"]).prop_map(Expr::var);
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(l, r)| Expr::Add(Box::new(l), Box::new(r))),
                (inner.clone(), inner.clone())
                    .prop_map(|(l, r)| Expr::Sub(Box::new(l), Box::new(r))),
                (inner.clone(), inner.clone())
                    .prop_map(|(l, r)| Expr::Mul(Box::new(l), Box::new(r))),
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (1u32..5, inner.clone()).prop_map(|(k, e)| Expr::IterSum(k, Box::new(e))),
                (1u32..5, inner).prop_map(|(k, e)| Expr::IterProd(k, Box::new(e))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse_expr(&printed).unwrap(), e, "printed as {}", printed);
        }
    }
}
