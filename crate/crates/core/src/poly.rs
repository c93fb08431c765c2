//! Sparse multivariate polynomials over a named variable context.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContextKind {
    /// `x1..xn`
    X,
    /// `q1..qn, p1..pn`
    Pq,
    /// `t, q1..qn, p1..pn`
    Tpq,
    /// a single variable `x` with integer exponents
    Laurent,
}

/// The ordered set of variables a polynomial lives over.
///
/// Variables are indexed in the term order `t > q1 > .. > qn > p1 > .. > pn`
/// (resp. `x1 > .. > xn`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarContext {
    kind: ContextKind,
    n: usize,
}

impl VarContext {
    pub fn x(n: usize) -> Self {
        assert!(n > 0, "x-context needs at least one variable");
        VarContext {
            kind: ContextKind::X,
            n,
        }
    }

    pub fn pq(n: usize) -> Self {
        assert!(n > 0, "pq-context needs n > 0");
        VarContext {
            kind: ContextKind::Pq,
            n,
        }
    }

    pub fn tpq(n: usize) -> Self {
        assert!(n > 0, "tpq-context needs n > 0");
        VarContext {
            kind: ContextKind::Tpq,
            n,
        }
    }

    pub fn laurent() -> Self {
        VarContext {
            kind: ContextKind::Laurent,
            n: 1,
        }
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    /// The rank parameter `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        match self.kind {
            ContextKind::X => self.n,
            ContextKind::Pq => 2 * self.n,
            ContextKind::Tpq => 2 * self.n + 1,
            ContextKind::Laurent => 1,
        }
    }

    pub fn has_t(&self) -> bool {
        self.kind == ContextKind::Tpq
    }

    pub fn t_index(&self) -> Option<usize> {
        self.has_t().then_some(0)
    }

    fn pq_offset(&self) -> usize {
        usize::from(self.has_t())
    }

    /// Index of `q_i` (1-based `i`).
    pub fn q(&self, i: usize) -> usize {
        debug_assert!(matches!(self.kind, ContextKind::Pq | ContextKind::Tpq));
        debug_assert!((1..=self.n).contains(&i));
        self.pq_offset() + i - 1
    }

    /// Index of `p_i` (1-based `i`).
    pub fn p(&self, i: usize) -> usize {
        debug_assert!(matches!(self.kind, ContextKind::Pq | ContextKind::Tpq));
        debug_assert!((1..=self.n).contains(&i));
        self.pq_offset() + self.n + i - 1
    }

    pub fn var_name(&self, idx: usize) -> String {
        match self.kind {
            ContextKind::X => format!("x{}", idx + 1),
            ContextKind::Laurent => "x".to_string(),
            ContextKind::Pq | ContextKind::Tpq => {
                let off = self.pq_offset();
                if self.has_t() && idx == 0 {
                    "t".to_string()
                } else if idx - off < self.n {
                    format!("q{}", idx - off + 1)
                } else {
                    format!("p{}", idx - off - self.n + 1)
                }
            }
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.var_name(i) == name)
    }

    /// Weight of a variable in the standard grading (`t` counts twice).
    pub fn var_weight(&self, idx: usize) -> i32 {
        if self.has_t() && idx == 0 {
            2
        } else {
            1
        }
    }

    pub fn allows_negative_exponents(&self) -> bool {
        self.kind == ContextKind::Laurent
    }

    pub fn monomial(&self, exps: &[i32]) -> Monomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        Monomial::new(
            exps.iter().map(|&e| e as i16).collect(),
            exps.iter()
                .enumerate()
                .map(|(i, &e)| e * self.var_weight(i))
                .sum(),
        )
    }

    /// All monomials with nonnegative exponents of weighted degree `d`,
    /// in descending term order.
    pub fn monomials_of_degree(&self, d: i32) -> Vec<Monomial> {
        fn go(ctx: &VarContext, i: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
            if i == ctx.nvars() {
                if left == 0 {
                    out.push(ctx.monomial(cur));
                }
                return;
            }
            let w = ctx.var_weight(i);
            for e in (0..=left / w).rev() {
                cur[i] = e;
                go(ctx, i + 1, left - e * w, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        if d >= 0 && !self.allows_negative_exponents() {
            go(self, 0, d, &mut vec![0; self.nvars()], &mut out);
        }
        out
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial::new(SmallVec::from_elem(0, self.nvars()), 0)
    }
}

impl fmt::Display for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ContextKind::X => write!(f, "x-vars({})", self.n),
            ContextKind::Pq => write!(f, "pq-vars({})", self.n),
            ContextKind::Tpq => write!(f, "tpq-vars({})", self.n),
            ContextKind::Laurent => write!(f, "laurent(1)"),
        }
    }
}

pub type Exponents = SmallVec<[i16; 8]>;

/// A power product; ordered graded-lexicographically by standard degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: i32,
    exps: Exponents,
}

impl Monomial {
    fn new(exps: Exponents, deg: i32) -> Self {
        Monomial { deg, exps }
    }

    /// Weighted degree (`t` counted twice).
    pub fn degree(&self) -> i32 {
        self.deg
    }

    pub fn exponents(&self) -> &[i16] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> i32 {
        i32::from(self.exps[var])
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial::new(exps, self.deg + other.deg)
    }

    /// Lowers the exponent of `var` by one; `weight` is the variable's grading weight.
    pub(crate) fn lower(&self, var: usize, weight: i32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[var] -= 1;
        Monomial::new(exps, self.deg - weight)
    }

    pub fn format(&self, ctx: &VarContext) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                if e == 1 {
                    ctx.var_name(i)
                } else {
                    format!("{}^{}", ctx.var_name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<S: Scalar> {
    ctx: VarContext,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(ctx: VarContext) -> Self {
        Polynomial {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: VarContext, c: S) -> Self {
        Self::term(ctx, ctx.unit_monomial(), c)
    }

    pub fn one(ctx: VarContext) -> Self {
        Self::constant(ctx, S::one())
    }

    pub fn term(ctx: VarContext, m: Monomial, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ctx, terms }
    }

    pub fn var(ctx: VarContext, idx: usize) -> Self {
        let mut e = vec![0; ctx.nvars()];
        e[idx] = 1;
        Self::term(ctx, ctx.monomial(&e), S::one())
    }

    pub fn from_terms(ctx: VarContext, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn context(&self) -> VarContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut r = Self::zero(self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), ca.clone() * cb);
            }
        }
        Ok(r)
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        Polynomial {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c))
                .collect(),
        }
    }

    /// Multiplies by a monomial with coefficient one.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative by variable index.
    pub fn differentiate(&self, var: usize) -> Result<Self> {
        if var >= self.ctx.nvars() {
            return Err(Error::UnknownVariable {
                name: format!("#{var}"),
                context: self.ctx.to_string(),
            });
        }
        let w = self.ctx.var_weight(var);
        let mut r = Self::zero(self.ctx);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e != 0 {
                r.add_term(m.lower(var, w), c.clone() * &S::from_i64(i64::from(e)));
            }
        }
        Ok(r)
    }

    pub fn differentiate_by_name(&self, name: &str) -> Result<Self> {
        let idx = self
            .ctx
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable {
                name: name.to_string(),
                context: self.ctx.to_string(),
            })?;
        self.differentiate(idx)
    }

    /// `E(f) = sum y_i df/dy_i` over every coordinate except `t`.
    pub fn euler_operator(&self) -> Result<Self> {
        if !matches!(self.ctx.kind(), ContextKind::Pq | ContextKind::Tpq) {
            return Err(Error::WrongContext {
                operation: "euler operator",
                context: self.ctx.to_string(),
            });
        }
        let skip = self.ctx.t_index();
        let mut r = Self::zero(self.ctx);
        for (m, c) in &self.terms {
            let d: i32 = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .map(|(_, &e)| i32::from(e))
                .sum();
            r.add_term(m.clone(), c.clone() * &S::from_i64(i64::from(d)));
        }
        Ok(r)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) != 0)
    }

    /// The common weighted degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_components(&self) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.ctx))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_terms(self.ctx, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Parses the ASCII text form, e.g. `3*q1^2*p2 - 1/2*t`.
    pub fn parse(s: &str, ctx: VarContext) -> Result<Self> {
        Parser::new(s, ctx).parse()
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_repr();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.format(&self.ctx))?;
            } else {
                write!(f, "{abs}*{}", m.format(&self.ctx))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.ctx, self)
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, o: &Polynomial<S>) -> Polynomial<S> {
        self.checked_add(o).expect("polynomial addition")
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, o: &Polynomial<S>) -> Polynomial<S> {
        self.checked_sub(o).expect("polynomial subtraction")
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, o: &Polynomial<S>) -> Polynomial<S> {
        self.checked_mul(o).expect("polynomial multiplication")
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        self.scale(&-S::one())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: VarContext,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str, ctx: VarContext) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
            ctx,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            message: message.into(),
        })
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

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii input")
    }

    fn parse<S: Scalar>(mut self) -> Result<Polynomial<S>> {
        let mut out = Polynomial::zero(self.ctx);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty input"),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    S::one()
                }
                Some(b'-') => {
                    self.pos += 1;
                    -S::one()
                }
                Some(_) if first => S::one(),
                Some(c) => return self.err(format!("expected `+` or `-`, found `{}`", c as char)),
            };
            first = false;
            let (m, c) = self.term::<S>()?;
            out.add_term(m, sign * &c);
        }
        Ok(out)
    }

    fn term<S: Scalar>(&mut self) -> Result<(Monomial, S)> {
        let mut coeff = S::one();
        let mut exps = vec![0i32; self.ctx.nvars()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    let lit = self.take_while(|b| b.is_ascii_digit() || b == b'/');
                    match S::parse_literal(lit) {
                        Some(v) => coeff = coeff * &v,
                        None => {
                            self.pos = start;
                            return self.err(format!("bad coefficient `{lit}`"));
                        }
                    }
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    let name = self.take_while(|b| b.is_ascii_alphanumeric());
                    let Some(idx) = self.ctx.var_index(name) else {
                        self.pos = start;
                        return Err(Error::UnknownVariable {
                            name: name.to_string(),
                            context: self.ctx.to_string(),
                        });
                    };
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let neg = self.src.get(self.pos) == Some(&b'-');
                        if neg {
                            self.pos += 1;
                        }
                        let digits = self.take_while(|b| b.is_ascii_digit());
                        if digits.is_empty() {
                            return self.err("expected exponent after `^`");
                        }
                        e = digits.parse::<i32>().map_err(|_| Error::Parse {
                            pos: self.pos,
                            message: "exponent out of range".into(),
                        })?;
                        if neg {
                            if !self.ctx.allows_negative_exponents() {
                                return self.err(format!(
                                    "negative exponents are only allowed in laurent(1), not {}",
                                    self.ctx
                                ));
                            }
                            e = -e;
                        }
                    }
                    exps[idx] += e;
                }
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((self.ctx.monomial(&exps), coeff))
    }
}
