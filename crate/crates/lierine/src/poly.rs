//! Sparse multivariate polynomials with exact rational coefficients,
//! optionally reduced modulo a monomial-power ideal `(x_1^{d_1}, ..., x_n^{d_n})`.
//!
//! Every stored polynomial is canonical: no zero coefficients, and when the
//! ring carries a truncation ideal, every stored monomial lies strictly below
//! the bounds. The canonical term order is graded lexicographic in the ring's
//! variable order; it drives printing and hashing.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar: arbitrary precision, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Exponent vector, one entry per ring variable.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// comparison of the exponent vector in variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The shape of the base ring `A`: named variables, each with an optional
/// monomial-power truncation bound.
///
/// With bounds `d_i >= 1` on every variable the ring is
/// `Q[x_1..x_n]/(x_1^{d_1}, ..., x_n^{d_n})`, which is finite dimensional
/// over the rationals. Unbounded variables are free polynomial variables;
/// mixed rings (some bounded, some free) arise from scalar extensions like
/// `A[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    variables: Vec<String>,
    bounds: Vec<Option<u32>>,
}

impl RingSpec {
    /// An untruncated polynomial ring. Variable names must be distinct,
    /// nonempty identifiers.
    pub fn new<S: Into<String>>(variables: Vec<S>) -> Result<Arc<RingSpec>> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let bounds = vec![None; variables.len()];
        Self::build(variables, bounds)
    }

    /// A ring truncated by `(x_i^{bounds[i]})`. Bounds cover every variable
    /// and each bound is at least 1.
    pub fn truncated<S: Into<String>>(variables: Vec<S>, bounds: Vec<u32>) -> Result<Arc<RingSpec>> {
        Self::build(
            variables.into_iter().map(Into::into).collect(),
            bounds.into_iter().map(Some).collect(),
        )
    }

    /// The general form: a bound per variable, `None` for free variables.
    pub fn with_bounds<S: Into<String>>(
        variables: Vec<S>,
        bounds: Vec<Option<u32>>,
    ) -> Result<Arc<RingSpec>> {
        Self::build(variables.into_iter().map(Into::into).collect(), bounds)
    }

    fn build(variables: Vec<String>, bounds: Vec<Option<u32>>) -> Result<Arc<RingSpec>> {
        for (i, v) in variables.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::Parse(format!("variable {i} has an empty name")));
            }
            if !v.chars().next().unwrap().is_ascii_alphabetic() && !v.starts_with('_') {
                return Err(Error::Parse(format!("variable name '{v}' must start with a letter")));
            }
            if !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("variable name '{v}' contains invalid characters")));
            }
            if variables[..i].contains(v) {
                return Err(Error::Parse(format!("duplicate variable name '{v}'")));
            }
        }
        if bounds.len() != variables.len() {
            return Err(Error::DimensionMismatch(format!(
                "truncation bounds cover {} variables, ring has {}",
                bounds.len(),
                variables.len()
            )));
        }
        if let Some(i) = bounds.iter().position(|&d| d == Some(0)) {
            return Err(Error::Parse(format!(
                "truncation bound for '{}' must be at least 1",
                variables[i]
            )));
        }
        Ok(Arc::new(RingSpec { variables, bounds }))
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// The per-variable truncation bounds; `None` entries are free variables.
    pub fn bounds(&self) -> &[Option<u32>] {
        &self.bounds
    }

    /// The truncation bound of one variable, if any.
    pub fn bound(&self, index: usize) -> Option<u32> {
        self.bounds[index]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// True when `A` is finite dimensional over the rationals: every
    /// variable truncated (vacuously true with no variables).
    pub fn is_finite_dimensional(&self) -> bool {
        self.bounds.iter().all(Option::is_some)
    }

    /// True when no variable carries a truncation bound (a free polynomial
    /// ring, possibly with zero variables).
    pub fn is_untruncated(&self) -> bool {
        self.bounds.iter().all(Option::is_none)
    }

    /// Whether a monomial survives reduction modulo the truncation ideal.
    pub fn in_bounds(&self, m: &Monomial) -> bool {
        m.exponents()
            .iter()
            .zip(&self.bounds)
            .all(|(e, d)| d.map_or(true, |d| *e < d))
    }
}

/// Sparse exact polynomial over a shared [`RingSpec`]. Immutable after
/// construction; all operations are pure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Polynomial {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<RingSpec>, value: Rational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::constant(ring.nvars()), value);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn variable(ring: &Arc<RingSpec>, index: usize) -> Result<Polynomial> {
        if index >= ring.nvars() {
            return Err(Error::VarIndexOutOfRange {
                index,
                count: ring.nvars(),
            });
        }
        Ok(Self::from_terms(
            ring,
            [(Monomial::variable(ring.nvars(), index), Rational::one())],
        )
        .expect("variable monomial has the right arity"))
    }

    /// Build from raw terms: coefficients of equal monomials accumulate, zero
    /// coefficients are dropped, and monomials hit by the truncation ideal are
    /// deleted. This is the one place reduction happens, so every constructed
    /// polynomial is canonical.
    pub fn from_terms<I>(ring: &Arc<RingSpec>, iter: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in iter {
            if m.exponents().len() != ring.nvars() {
                return Err(Error::DimensionMismatch(format!(
                    "monomial has {} exponents, ring has {} variables",
                    m.exponents().len(),
                    ring.nvars()
                )));
            }
            if c.is_zero() || !ring.in_bounds(&m) {
                continue;
            }
            let entry = terms.entry(m).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            ring: ring.clone(),
            terms,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The constant value if the polynomial is constant (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest total degree among stored terms; 0 for the zero polynomial.
    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    fn require_same_ring(&self, other: &Polynomial) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "operands live in different rings ({:?} vs {:?})",
                self.ring.variables(),
                other.ring.variables()
            )))
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.require_same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.require_same_ring(other)?;
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if !self.ring.in_bounds(&m) {
                    continue;
                }
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.try_add(other).expect("ring mismatch in add")
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.try_mul(other).expect("ring mismatch in mul")
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Formal partial derivative with respect to variable `index`, reduced
    /// modulo the truncation ideal afterwards.
    pub fn derivative(&self, index: usize) -> Result<Polynomial> {
        if index >= self.ring.nvars() {
            return Err(Error::VarIndexOutOfRange {
                index,
                count: self.ring.nvars(),
            });
        }
        Self::from_terms(
            &self.ring,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exponents()[index];
                if e == 0 {
                    return None;
                }
                let mut exps = m.exponents().to_vec();
                exps[index] = e - 1;
                Some((Monomial::new(exps), c * Rational::from_integer(e.into())))
            }),
        )
    }

    /// Canonical representative modulo the truncation ideal. Stored values
    /// are already canonical, so this re-normalization is idempotent.
    pub fn reduce(&self) -> Polynomial {
        Self::from_terms(&self.ring, self.terms.clone()).expect("terms share the ring arity")
    }

    /// Substitute a rational constant for variable `index`; the result lives
    /// in the same ring with that variable no longer occurring.
    pub fn substitute(&self, index: usize, value: &Rational) -> Result<Polynomial> {
        if index >= self.ring.nvars() {
            return Err(Error::VarIndexOutOfRange {
                index,
                count: self.ring.nvars(),
            });
        }
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| {
                let e = m.exponents()[index];
                let mut exps = m.exponents().to_vec();
                exps[index] = 0;
                let mut coeff = c.clone();
                for _ in 0..e {
                    coeff *= value;
                }
                (Monomial::new(exps), coeff)
            }),
        )
    }

    /// Parse a polynomial in the report grammar, e.g. `3/2*x^2*y - 1`.
    pub fn parse(ring: &Arc<RingSpec>, input: &str) -> Result<Polynomial> {
        parse::parse(ring, input)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        self.ring.variables()[v].clone()
                    } else {
                        format!("{}^{}", self.ring.variables()[v], e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

mod parse {
    use super::*;
    use num_bigint::BigInt;

    #[derive(Debug, Clone, PartialEq)]
    enum Token {
        Int(String),
        Ident(String),
        Plus,
        Minus,
        Star,
        Caret,
        Slash,
    }

    fn lex(input: &str) -> Result<Vec<Token>> {
        let mut tokens = Vec::new();
        let mut chars = input.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    chars.next();
                }
                '+' => {
                    chars.next();
                    tokens.push(Token::Plus);
                }
                '-' => {
                    chars.next();
                    tokens.push(Token::Minus);
                }
                '*' => {
                    chars.next();
                    tokens.push(Token::Star);
                }
                '^' => {
                    chars.next();
                    tokens.push(Token::Caret);
                }
                '/' => {
                    chars.next();
                    tokens.push(Token::Slash);
                }
                '0'..='9' => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            s.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    tokens.push(Token::Int(s));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            s.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    tokens.push(Token::Ident(s));
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character '{other}' in polynomial"
                    )))
                }
            }
        }
        Ok(tokens)
    }

    struct Parser<'a> {
        ring: &'a Arc<RingSpec>,
        tokens: Vec<Token>,
        pos: usize,
    }

    impl<'a> Parser<'a> {
        fn peek(&self) -> Option<&Token> {
            self.tokens.get(self.pos)
        }

        fn next(&mut self) -> Option<Token> {
            let t = self.tokens.get(self.pos).cloned();
            if t.is_some() {
                self.pos += 1;
            }
            t
        }

        fn expect_int(&mut self, what: &str) -> Result<BigInt> {
            match self.next() {
                Some(Token::Int(s)) => Ok(s.parse().expect("digit string")),
                other => Err(Error::Parse(format!("expected {what}, found {other:?}"))),
            }
        }

        // term := factor ('*' factor)*, where a factor is a rational
        // coefficient or var('^'nat). Repeated factors multiply up.
        fn term(&mut self) -> Result<(Monomial, Rational)> {
            let mut coeff = Rational::one();
            let mut exps = vec![0u32; self.ring.nvars()];
            loop {
                match self.next() {
                    Some(Token::Int(s)) => {
                        let numer: BigInt = s.parse().expect("digit string");
                        let denom = if self.peek() == Some(&Token::Slash) {
                            self.next();
                            let d = self.expect_int("a positive denominator")?;
                            if d.is_zero() || d < BigInt::from(0) {
                                return Err(Error::Parse("denominator must be positive".into()));
                            }
                            d
                        } else {
                            BigInt::from(1)
                        };
                        coeff *= Rational::new(numer, denom);
                    }
                    Some(Token::Ident(name)) => {
                        let idx = self.ring.var_index(&name).ok_or_else(|| {
                            Error::Parse(format!("unknown variable '{name}'"))
                        })?;
                        let e = if self.peek() == Some(&Token::Caret) {
                            self.next();
                            let e = self.expect_int("an exponent")?;
                            u32::try_from(e).map_err(|_| {
                                Error::Parse("exponent out of range".into())
                            })?
                        } else {
                            1
                        };
                        exps[idx] += e;
                    }
                    other => {
                        return Err(Error::Parse(format!(
                            "expected a coefficient or variable, found {other:?}"
                        )))
                    }
                }
                if self.peek() == Some(&Token::Star) {
                    self.next();
                } else {
                    break;
                }
            }
            Ok((Monomial::new(exps), coeff))
        }
    }

    pub(super) fn parse(ring: &Arc<RingSpec>, input: &str) -> Result<Polynomial> {
        let tokens = lex(input)?;
        if tokens.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Parser {
            ring,
            tokens,
            pos: 0,
        };
        let mut terms = Vec::new();
        let mut sign = match p.peek() {
            Some(Token::Minus) => {
                p.next();
                -1
            }
            Some(Token::Plus) => {
                p.next();
                1
            }
            _ => 1,
        };
        loop {
            let (m, c) = p.term()?;
            terms.push((m, c * Rational::from_integer(sign.into())));
            match p.next() {
                None => break,
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "expected '+' or '-' between terms, found {other:?}"
                    )))
                }
            }
        }
        Polynomial::from_terms(ring, terms)
    }
}
