//! Polynomial expressions in real parameters `t1 … tm` with complex
//! coefficients, and the parser for their text form.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := number | number 'i' | 'i' | 't' integer | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Multivariate polynomial; keys are exponent vectors of length `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    m: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl Polynomial {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: Complex64) -> Self {
        let mut p = Self::zero(m);
        if c != Complex64::new(0.0, 0.0) {
            p.terms.insert(vec![0; m], c);
        }
        p
    }

    /// The parameter `t_{index+1}` (zero-based `index`).
    pub fn param(m: usize, index: usize) -> Self {
        assert!(index < m, "parameter index out of range");
        let mut e = vec![0; m];
        e[index] = 1;
        let mut p = Self::zero(m);
        p.terms.insert(e, Complex64::new(1.0, 0.0));
        p
    }

    pub fn num_params(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial is exactly the constant `c`.
    pub fn is_constant(&self, c: Complex64) -> bool {
        if c == Complex64::new(0.0, 0.0) {
            return self.is_zero();
        }
        self.terms.len() == 1 && self.terms.get(&vec![0; self.m]) == Some(&c)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn insert_term(&mut self, e: Vec<u32>, c: Complex64) {
        let entry = self.terms.entry(e).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| **v == Complex64::new(0.0, 0.0))
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.m, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, t: &[f64]) -> Complex64 {
        debug_assert_eq!(t.len(), self.m);
        self.terms
            .iter()
            .map(|(e, &c)| {
                let mono: f64 = e.iter().zip(t).map(|(&k, &x)| x.powi(k as i32)).product();
                c * mono
            })
            .sum()
    }

    /// Upper bound on `|p(u + w) − p(u)|` over real `w` with `‖w‖₂ ≤ eps`.
    ///
    /// The first-order part is bounded exactly through the gradient at `u`;
    /// the higher-order remainder is bounded monomial by monomial.
    pub fn variation_bound(&self, u: &[f64], eps: f64) -> f64 {
        if eps == 0.0 || self.is_zero() {
            return 0.0;
        }
        let m = self.m;
        let mut grad = vec![Complex64::new(0.0, 0.0); m];
        let mut remainder = 0.0;
        for (e, &c) in &self.terms {
            let abs_u: Vec<f64> = u.iter().map(|x| x.abs()).collect();
            let full: f64 = e.iter().zip(&abs_u).map(|(&k, &a)| (a + eps).powi(k as i32)).product();
            let base: f64 = e.iter().zip(&abs_u).map(|(&k, &a)| a.powi(k as i32)).product();
            let mut first = 0.0;
            for i in 0..m {
                if e[i] == 0 {
                    continue;
                }
                let partial_abs: f64 = (0..m)
                    .map(|j| {
                        if j == i {
                            e[j] as f64 * abs_u[j].powi(e[j] as i32 - 1)
                        } else {
                            abs_u[j].powi(e[j] as i32)
                        }
                    })
                    .product();
                first += partial_abs * eps;
                let partial: f64 = (0..m)
                    .map(|j| {
                        if j == i {
                            e[j] as f64 * u[j].powi(e[j] as i32 - 1)
                        } else {
                            u[j].powi(e[j] as i32)
                        }
                    })
                    .product();
                grad[i] += c * partial;
            }
            remainder += c.norm() * (full - base - first).max(0.0);
        }
        // max over real unit w of |g·w| is the top eigenvalue of the 2×2 Gram
        // matrix of Re g and Im g.
        let (mut aa, mut bb, mut ab) = (0.0, 0.0, 0.0);
        for g in &grad {
            aa += g.re * g.re;
            bb += g.im * g.im;
            ab += g.re * g.im;
        }
        let half = 0.5 * (aa - bb);
        let top = 0.5 * (aa + bb) + (half * half + ab * ab).sqrt();
        top.sqrt() * eps + remainder
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.insert_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            m: self.m,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.m);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Prints in the grammar accepted by [`parse_expression`], so the output
/// parses back to the same polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({} + {}i)", fmt_f64(c.re), fmt_f64(c.im))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

/// Failure while parsing an expression; `offset` is the byte offset inside
/// the expression text.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    Syntax { offset: usize, message: String },
    UndeclaredParameter { offset: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, imaginary: bool, integer: Option<u32> },
    Param(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'i' => out.push((
                start,
                Tok::Num {
                    value: 1.0,
                    imaginary: true,
                    integer: None,
                },
            )),
            b't' => {
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    return Err(ExprError::Syntax {
                        offset: start,
                        message: "expected parameter index after 't'".into(),
                    });
                }
                let index: usize = text[digits_start..i].parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: "parameter index out of range".into(),
                })?;
                out.push((start, Tok::Param(index)));
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("malformed number '{lit}'"),
                })?;
                let integer = if lit.bytes().all(|b| b.is_ascii_digit()) {
                    lit.parse::<u32>().ok()
                } else {
                    None
                };
                let imaginary = i < bytes.len() && bytes[i] == b'i';
                if imaginary {
                    i += 1;
                }
                out.push((
                    start,
                    Tok::Num {
                        value,
                        imaginary,
                        integer: if imaginary { None } else { integer },
                    },
                ));
                continue;
            }
            _ => {
                let c = text[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character '{c}'"),
                });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    m: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ExprError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ExprError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num { integer: Some(k), .. }) => {
                    let k = *k;
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => self.err("exponent must be a nonnegative integer literal"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ExprError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num { value, imaginary, .. }) => {
                self.pos += 1;
                let c = if imaginary {
                    Complex64::new(0.0, value)
                } else {
                    Complex64::new(value, 0.0)
                };
                Ok(Polynomial::constant(self.m, c))
            }
            Some(Tok::Param(index)) => {
                self.pos += 1;
                if index == 0 || index > self.m {
                    return Err(ExprError::UndeclaredParameter { offset, index });
                }
                Ok(Polynomial::param(self.m, index - 1))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("expected a number, parameter or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses an expression over parameters `t1 … tm`.
pub fn parse_expression(text: &str, m: usize) -> Result<Polynomial, ExprError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        m,
        end: text.len(),
    };
    let poly = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_expression("2", 1).unwrap(), Polynomial::constant(1, c(2.0, 0.0)));
        assert_eq!(parse_expression("3i", 1).unwrap(), Polynomial::constant(1, c(0.0, 3.0)));
        assert_eq!(parse_expression("1.5-2.5i", 1).unwrap(), Polynomial::constant(1, c(1.5, -2.5)));
        assert_eq!(parse_expression("i", 1).unwrap(), Polynomial::constant(1, c(0.0, 1.0)));
        assert_eq!(parse_expression("1e-3", 1).unwrap(), Polynomial::constant(1, c(1e-3, 0.0)));
    }

    #[test]
    fn evaluates_products_and_powers() {
        let p = parse_expression("t1*t2", 2).unwrap();
        assert_eq!(p.eval(&[3.0, 4.0]), c(12.0, 0.0));
        let p = parse_expression("-(t1 - 1)^2 + 2i*t1", 1).unwrap();
        assert_eq!(p.eval(&[3.0]), c(-4.0, 6.0));
        let p = parse_expression("-t1^2", 1).unwrap();
        assert_eq!(p.eval(&[2.0]), c(-4.0, 0.0));
    }

    #[test]
    fn cancellation_leaves_zero() {
        let p = parse_expression("t1 - t1", 1).unwrap();
        assert!(p.is_zero());
        assert!(parse_expression("(1+0i)", 2).unwrap().is_constant(c(1.0, 0.0)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_expression("t5", 2),
            Err(ExprError::UndeclaredParameter { offset: 0, index: 5 })
        ));
        assert!(matches!(parse_expression("t0", 2), Err(ExprError::UndeclaredParameter { .. })));
        assert!(matches!(parse_expression("t1^-1", 1), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expression("(t1", 1), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression("2 $ 3", 1), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("", 1), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression("t1 t1", 1), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn variation_bound_is_sharp_for_linear_complex_map() {
        let p = parse_expression("t1 + i*t2", 2).unwrap();
        let b = p.variation_bound(&[0.3, -0.2], 1.0);
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variation_bound_dominates_sampled_changes() {
        let p = parse_expression("t1^3*t2 - 2i*t2^2 + (1+i)*t1", 2).unwrap();
        let u = [0.4, -0.7];
        let eps = 0.3;
        let bound = p.variation_bound(&u, eps);
        for k in 0..200 {
            let a = k as f64 * 0.0314;
            let r = eps * ((k % 7) as f64 / 6.0);
            let v = [u[0] + r * a.cos(), u[1] + r * a.sin()];
            assert!((p.eval(&v) - p.eval(&u)).norm() <= bound + 1e-12);
        }
    }

    proptest! {
        #[test]
        fn display_round_trips(coeffs in proptest::collection::vec((-3i32..3, -3i32..3, 0u32..3, 0u32..3), 1..5)) {
            let mut p = Polynomial::zero(2);
            for (re, im, a, b) in coeffs {
                let term = &(&Polynomial::param(2, 0).pow(a) * &Polynomial::param(2, 1).pow(b))
                    * &Polynomial::constant(2, c(re as f64, im as f64));
                p = &p + &term;
            }
            let back = parse_expression(&p.to_string(), 2).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
