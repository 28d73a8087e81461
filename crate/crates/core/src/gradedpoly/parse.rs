//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' natural)?
//! base     := rational | name | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! Implicit multiplication is rejected. The optional leading minus is an
//! extension so that rendered polynomials with a negative leading
//! coefficient parse back.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Poly, PolyError, Rational};

/// Parses `source` as a polynomial in the ordered `variables`.
pub fn parse_poly(source: &str, variables: &[impl AsRef<str>]) -> Result<Poly, PolyError> {
    let names: Vec<&str> = variables.iter().map(|v| v.as_ref()).collect();
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
        names: &names,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a rational literal such as `3`, `-5/6` or `1/2`.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::InvalidRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    if den.starts_with('-') || den.starts_with('+') {
        return Err(bad());
    }
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                Err(self.error("implicit multiplication is not allowed; use '*'"))
            }
            _ => Ok(acc),
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a natural exponent after '^'"));
            }
            let e: u32 = digits.parse().map_err(|_| PolyError::Syntax {
                position: start,
                message: "exponent too large".into(),
            })?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let value = if self.eat(b'/') {
                    self.skip_ws();
                    let at = self.pos;
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.error("expected a positive integer denominator"));
                    }
                    let den: BigInt = den.parse().expect("digits");
                    if !den.is_positive() {
                        return Err(PolyError::Syntax {
                            position: at,
                            message: "denominator must be positive".into(),
                        });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(Poly::constant(self.nvars(), value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Poly::var(self.nvars(), i)),
                    None => Err(PolyError::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    }),
                }
            }
            Some(_) => Err(self.error("expected a number, a variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedpoly::{rat, Monomial};
    use proptest::prelude::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn zero_literal() {
        assert!(parse_poly("0", &XYZ).unwrap().is_zero());
    }

    #[test]
    fn cuspidal_cubic() {
        let f = parse_poly("x^3 + y^2*z", &XYZ).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff(&Monomial::new(vec![3, 0, 0])), rat(1));
        assert_eq!(f.coeff(&Monomial::new(vec![0, 2, 1])), rat(1));
    }

    #[test]
    fn two_cusp_quartic() {
        let f = parse_poly("x^2*y^2 + x*z^3 + y*z^3", &XYZ).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.homogeneous_degree(), Some(4));
    }

    #[test]
    fn parens_rationals_and_powers() {
        let f = parse_poly("(x + 1/2*y)^2 - 1/4*y^2", &XYZ).unwrap();
        assert_eq!(f, parse_poly("x^2 + x*y", &XYZ).unwrap());
        let g = parse_poly("-(x - y)", &XYZ).unwrap();
        assert_eq!(g, parse_poly("y - x", &XYZ).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x^3 + w", &XYZ) {
            Err(PolyError::UnknownVariable { name, position }) => {
                assert_eq!(name, "w");
                assert_eq!(position, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poly("x y", &XYZ),
            Err(PolyError::Syntax { position: 2, .. })
        ));
        assert!(matches!(parse_poly("2x", &XYZ), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x +", &XYZ), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("(x", &XYZ), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &XYZ), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x^", &XYZ), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-5/6").unwrap(), crate::gradedpoly::ratio(-5, 6));
        assert_eq!(parse_rational("4/2").unwrap(), rat(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("abc").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            (0u32..20).prop_map(|n| n.to_string()),
            (1u32..9, 1u32..9).prop_map(|(a, b)| format!("{a}/{b}")),
            prop::sample::select(vec!["x", "y", "z"]).prop_map(str::to_string),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
                (inner.clone(), 0u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
                inner.prop_map(|a| format!("({a})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_round_trip(src in arb_expr()) {
            let p = parse_poly(&src, &XYZ).unwrap();
            let names: Vec<String> = XYZ.iter().map(|s| s.to_string()).collect();
            let back = parse_poly(&p.render(&names), &XYZ).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn ring_axioms(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
            let (a, b, c) = (
                parse_poly(&a, &XYZ).unwrap(),
                parse_poly(&b, &XYZ).unwrap(),
                parse_poly(&c, &XYZ).unwrap(),
            );
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
