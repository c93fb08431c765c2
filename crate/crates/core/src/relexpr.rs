//! Relation expressions, Cartan matrices, Serre relations, and the
//! transcribed relation families.

use std::fmt;

use num_traits::{One, Signed};

use crate::catalog::{gen_name, AlgebraKind, AlgebraSpec, Element, Sign};
use crate::error::{Error, Result};
use crate::realize::WeightVector;
use crate::scalar::{rat, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationExpr {
    /// A named generator: `X1+`, `Y`, `H2`, `e-1`.
    Gen(String),
    /// An element literal in the algebra's own syntax, written `{q1^3}`.
    Lit(String),
    Bracket(Box<RelationExpr>, Box<RelationExpr>),
    /// `ad(base)^k(arg)`
    AdPow(Box<RelationExpr>, usize, Box<RelationExpr>),
    LinComb(Vec<(Rational, RelationExpr)>),
}

pub fn gen(name: &str) -> RelationExpr {
    RelationExpr::Gen(name.to_string())
}

pub fn x(i: usize, sign: Sign) -> RelationExpr {
    RelationExpr::Gen(gen_name(i, sign))
}

pub fn lit(text: &str) -> RelationExpr {
    RelationExpr::Lit(text.to_string())
}

pub fn br(a: RelationExpr, b: RelationExpr) -> RelationExpr {
    RelationExpr::Bracket(Box::new(a), Box::new(b))
}

pub fn ad(a: RelationExpr, k: usize, b: RelationExpr) -> RelationExpr {
    RelationExpr::AdPow(Box::new(a), k, Box::new(b))
}

pub fn lin(terms: Vec<(Rational, RelationExpr)>) -> RelationExpr {
    RelationExpr::LinComb(terms)
}

pub fn scaled(c: Rational, e: RelationExpr) -> RelationExpr {
    RelationExpr::LinComb(vec![(c, e)])
}

impl RelationExpr {
    /// Evaluates bottom-up with the algebra's bracket.
    pub fn eval(&self, spec: &AlgebraSpec) -> Result<Element> {
        match self {
            RelationExpr::Gen(n) => spec.generator(n),
            RelationExpr::Lit(t) => spec.parse_element(t),
            RelationExpr::Bracket(a, b) => spec.bracket(&a.eval(spec)?, &b.eval(spec)?),
            RelationExpr::AdPow(a, k, b) => spec.ad_pow(&a.eval(spec)?, *k, &b.eval(spec)?),
            RelationExpr::LinComb(terms) => {
                let mut acc = spec.zero_element();
                for (c, e) in terms {
                    acc = acc.add(&e.eval(spec)?.scale(c))?;
                }
                Ok(acc)
            }
        }
    }

    /// Degree and weight computed from the leaves, independent of whether
    /// the value vanishes.
    pub fn grading(&self, spec: &AlgebraSpec) -> Result<(i32, WeightVector)> {
        match self {
            RelationExpr::Gen(_) | RelationExpr::Lit(_) => {
                let e = self.eval(spec)?;
                Ok((spec.degree(&e)?, spec.weight(&e)?))
            }
            RelationExpr::Bracket(a, b) => {
                let (da, wa) = a.grading(spec)?;
                let (db, wb) = b.grading(spec)?;
                Ok((da + db, wa.add(&wb)))
            }
            RelationExpr::AdPow(a, k, b) => {
                let (da, wa) = a.grading(spec)?;
                let (db, wb) = b.grading(spec)?;
                Ok((da * *k as i32 + db, wa.scale(*k as i64).add(&wb)))
            }
            RelationExpr::LinComb(terms) => {
                let mut out: Option<(i32, WeightVector)> = None;
                for (_, e) in terms {
                    let g = e.grading(spec)?;
                    if out.as_ref().is_some_and(|o| *o != g) {
                        return Err(Error::NotHomogeneous(self.to_string()));
                    }
                    out = Some(g);
                }
                out.ok_or_else(|| Error::NotHomogeneous("empty combination".into()))
            }
        }
    }

    /// Replaces every `Xi+` by `Xi-` and vice versa.
    pub fn swap_superscripts(&self) -> RelationExpr {
        match self {
            RelationExpr::Gen(n) => RelationExpr::Gen(swap_name(n)),
            RelationExpr::Lit(_) => self.clone(),
            RelationExpr::Bracket(a, b) => br(a.swap_superscripts(), b.swap_superscripts()),
            RelationExpr::AdPow(a, k, b) => ad(a.swap_superscripts(), *k, b.swap_superscripts()),
            RelationExpr::LinComb(t) => lin(t
                .iter()
                .map(|(c, e)| (c.clone(), e.swap_superscripts()))
                .collect()),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            RelationExpr::Gen(n) => n == name,
            RelationExpr::Lit(_) => false,
            RelationExpr::Bracket(a, b) | RelationExpr::AdPow(a, _, b) => {
                a.mentions(name) || b.mentions(name)
            }
            RelationExpr::LinComb(t) => t.iter().any(|(_, e)| e.mentions(name)),
        }
    }

    /// All rational coefficients, in a fixed traversal order.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        self.visit_coeffs(&mut |c| out.push(c.clone()));
        out
    }

    fn visit_coeffs(&self, f: &mut impl FnMut(&mut Rational)) {
        let mut me = self.clone();
        me.visit_coeffs_mut(f);
    }

    fn visit_coeffs_mut(&mut self, f: &mut impl FnMut(&mut Rational)) {
        match self {
            RelationExpr::Gen(_) | RelationExpr::Lit(_) => {}
            RelationExpr::Bracket(a, b) | RelationExpr::AdPow(a, _, b) => {
                a.visit_coeffs_mut(f);
                b.visit_coeffs_mut(f);
            }
            RelationExpr::LinComb(t) => {
                for (c, e) in t {
                    f(c);
                    e.visit_coeffs_mut(f);
                }
            }
        }
    }

    /// Copy with the `idx`-th coefficient replaced by `value`.
    pub fn with_coefficient(&self, idx: usize, value: Rational) -> RelationExpr {
        let mut me = self.clone();
        let mut k = 0;
        let mut value = Some(value);
        me.visit_coeffs_mut(&mut |c| {
            if k == idx {
                *c = value.take().expect("visited once");
            }
            k += 1;
        });
        me
    }

    pub fn parse(s: &str) -> Result<RelationExpr> {
        let mut p = ExprParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.src.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

fn swap_name(n: &str) -> String {
    if let Some(stem) = n.strip_suffix('+') {
        if stem.starts_with('X') {
            return format!("{stem}-");
        }
    }
    if let Some(stem) = n.strip_suffix('-') {
        if stem.starts_with('X') {
            return format!("{stem}+");
        }
    }
    n.to_string()
}

fn fmt_coeff_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    e: &RelationExpr,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if !abs.is_one() {
        write!(f, "{abs}*")?;
    }
    match e {
        RelationExpr::LinComb(_) => write!(f, "({e})"),
        _ => write!(f, "{e}"),
    }
}

impl fmt::Display for RelationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationExpr::Gen(n) => write!(f, "{n}"),
            RelationExpr::Lit(t) => write!(f, "{{{t}}}"),
            RelationExpr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
            RelationExpr::AdPow(a, 1, b) => write!(f, "ad({a})({b})"),
            RelationExpr::AdPow(a, k, b) => write!(f, "ad({a})^{k}({b})"),
            RelationExpr::LinComb(t) => {
                if t.is_empty() {
                    return write!(f, "0");
                }
                for (i, (c, e)) in t.iter().enumerate() {
                    fmt_coeff_term(f, i == 0, c, e)?;
                }
                Ok(())
            }
        }
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err<T>(&self, m: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            message: m.to_string(),
        })
    }

    fn ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected `{}`", b as char))
        }
    }

    fn expr(&mut self) -> Result<RelationExpr> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') if !first => {
                    self.pos += 1;
                    rat(1, 1)
                }
                Some(b'-') => {
                    self.pos += 1;
                    rat(-1, 1)
                }
                _ if first => rat(1, 1),
                _ => break,
            };
            first = false;
            let (c, e) = self.term()?;
            terms.push((sign * c, e));
        }
        if terms.len() == 1 && terms[0].0.is_one() {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(RelationExpr::LinComb(terms))
    }

    fn term(&mut self) -> Result<(Rational, RelationExpr)> {
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let start = self.pos;
            while self
                .src
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit() || *b == b'/')
            {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let c = Rational::parse_literal(text).ok_or(Error::Parse {
                pos: start,
                message: format!("bad coefficient `{text}`"),
            })?;
            self.expect(b'*')?;
            return Ok((c, self.atom()?));
        }
        Ok((rat(1, 1), self.atom()?))
    }

    fn atom(&mut self) -> Result<RelationExpr> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(br(a, b))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'{') => {
                self.pos += 1;
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|b| *b != b'}') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .trim()
                    .to_string();
                self.expect(b'}')?;
                Ok(RelationExpr::Lit(text))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let mut name = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .to_string();
                if name == "ad" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let base = self.expr()?;
                    self.expect(b')')?;
                    let mut k = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.ws();
                        let s = self.pos;
                        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                            self.pos += 1;
                        }
                        k = std::str::from_utf8(&self.src[s..self.pos])
                            .unwrap()
                            .parse()
                            .map_err(|_| Error::Parse {
                                pos: s,
                                message: "bad exponent".into(),
                            })?;
                    }
                    self.expect(b'(')?;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    return Ok(ad(base, k, arg));
                }
                let next = self.src.get(self.pos).copied();
                if name.starts_with('X') && matches!(next, Some(b'+') | Some(b'-')) {
                    name.push(next.unwrap() as char);
                    self.pos += 1;
                } else if name == "e"
                    && next == Some(b'-')
                    && self
                        .src
                        .get(self.pos + 1)
                        .is_some_and(|b| b.is_ascii_digit())
                {
                    self.pos += 1;
                    let s = self.pos;
                    while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    name = format!("e-{}", std::str::from_utf8(&self.src[s..self.pos]).unwrap());
                }
                Ok(RelationExpr::Gen(name))
            }
            _ => self.err("expected a generator, literal, bracket, or ad(...)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Zero,
    Expr(RelationExpr),
    /// The left side must be a scalar multiple of this (nonzero) value.
    MultipleOf(RelationExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub id: String,
    pub lhs: RelationExpr,
    pub expected: Expected,
}

impl Relation {
    pub fn zero(id: impl Into<String>, lhs: RelationExpr) -> Self {
        Relation {
            id: id.into(),
            lhs,
            expected: Expected::Zero,
        }
    }

    pub fn equals(id: impl Into<String>, lhs: RelationExpr, rhs: RelationExpr) -> Self {
        Relation {
            id: id.into(),
            lhs,
            expected: Expected::Expr(rhs),
        }
    }

    pub fn swap_superscripts(&self) -> Relation {
        Relation {
            id: self.id.clone(),
            lhs: self.lhs.swap_superscripts(),
            expected: match &self.expected {
                Expected::Zero => Expected::Zero,
                Expected::Expr(e) => Expected::Expr(e.swap_superscripts()),
                Expected::MultipleOf(e) => Expected::MultipleOf(e.swap_superscripts()),
            },
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.lhs.mentions(name)
            || match &self.expected {
                Expected::Zero => false,
                Expected::Expr(e) | Expected::MultipleOf(e) => e.mentions(name),
            }
    }

    /// The relation as one expression that must vanish (`lhs - rhs`).
    pub fn residue_expr(&self) -> RelationExpr {
        match &self.expected {
            Expected::Zero | Expected::MultipleOf(_) => self.lhs.clone(),
            Expected::Expr(r) => {
                let mut terms = vec![(rat(1, 1), self.lhs.clone())];
                match r {
                    RelationExpr::LinComb(t) => {
                        terms.extend(t.iter().map(|(c, e)| (-c, e.clone())))
                    }
                    _ => terms.push((rat(-1, 1), r.clone())),
                }
                lin(terms)
            }
        }
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        let mut c = self.lhs.coefficients();
        if let Expected::Expr(e) | Expected::MultipleOf(e) = &self.expected {
            c.extend(e.coefficients());
        }
        c
    }

    pub fn with_coefficient(&self, idx: usize, value: Rational) -> Relation {
        let n = self.lhs.coefficients().len();
        let mut r = self.clone();
        if idx < n {
            r.lhs = self.lhs.with_coefficient(idx, value);
        } else if let Expected::Expr(e) | Expected::MultipleOf(e) = &mut r.expected {
            *e = e.with_coefficient(idx - n, value);
        }
        r
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expected {
            Expected::Zero => write!(f, "{} = 0", self.lhs),
            Expected::Expr(e) => write!(f, "{} = {}", self.lhs, e),
            Expected::MultipleOf(e) => write!(f, "{} in span({})", self.lhs, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFamily {
    pub id: String,
    pub algebra: AlgebraKind,
    pub relations: Vec<Relation>,
    /// Plain-words description of where the family comes from.
    pub origin: String,
    /// Whether the printed `+`/`-` superscripts are in doubt, so the
    /// verifier may retry with them swapped.
    pub superscript_ambiguous: bool,
}

impl RelationFamily {
    fn new(id: &str, algebra: AlgebraKind, origin: &str) -> Self {
        RelationFamily {
            id: id.to_string(),
            algebra,
            relations: Vec::new(),
            origin: origin.to_string(),
            superscript_ambiguous: false,
        }
    }

    fn push(&mut self, r: Relation) {
        self.relations.push(r);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    A,
    C,
}

impl std::str::FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Series::A),
            "C" => Ok(Series::C),
            _ => Err(Error::Unsupported(format!("Cartan series `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    pub series: Series,
    pub entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }
}

/// `A_r` (of `sl(r+1)`) or `C_r` (of `sp(2r)`). In `C_r` the long simple
/// root is the last one: `A[r-2][r-1] = -2`, `A[r-1][r-2] = -1`.
pub fn cartan_matrix(series: Series, rank: usize) -> Result<CartanMatrix> {
    if rank == 0 {
        return Err(Error::Unsupported("Cartan matrix of rank 0".into()));
    }
    let mut a = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
        if i + 1 < rank {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    if series == Series::C && rank >= 2 {
        a[rank - 2][rank - 1] = -2;
    }
    Ok(CartanMatrix { series, entries: a })
}

/// (SR+), (SR-) and (SR0) for Chevalley generators `X{first+i}±`.
///
/// `scales[i]` is the factor with `H_i = scale * [X_i^+, X_i^-]`, so the
/// relation `[X_i^+, X_i^-] = H_i / scale` keeps the printed generators.
pub fn serre_relations(
    a: &CartanMatrix,
    first: usize,
    scales: &[Rational],
    algebra: AlgebraKind,
) -> RelationFamily {
    let r = a.rank();
    let mut fam = RelationFamily::new(
        "serre",
        algebra,
        "Chevalley-Serre relations of the Cartan matrix",
    );
    for sign in [Sign::Plus, Sign::Minus] {
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    let k = (1 - a.entries[i][j]) as usize;
                    fam.push(Relation::zero(
                        format!("SR{}:{},{}", sign.symbol(), i + first, j + first),
                        ad(x(i + first, sign), k, x(j + first, sign)),
                    ));
                }
            }
        }
    }
    let h = |i: usize| gen(&format!("H{}", i + first));
    for i in 0..r {
        for j in 0..r {
            fam.push(Relation::zero(
                format!("SR0:H{},H{}", i + first, j + first),
                br(h(i), h(j)),
            ));
        }
    }
    for i in 0..r {
        for j in 0..r {
            let id = format!("SR0:X{}+,X{}-", i + first, j + first);
            let lhs = br(x(i + first, Sign::Plus), x(j + first, Sign::Minus));
            if i == j {
                let s = scales.get(i).cloned().unwrap_or_else(Rational::one);
                fam.push(Relation::equals(id, lhs, scaled(Rational::one() / s, h(i))));
            } else {
                fam.push(Relation::zero(id, lhs));
            }
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        for i in 0..r {
            for j in 0..r {
                let id = format!("SR0:H{},X{}{}", i + first, j + first, sign.symbol());
                let lhs = br(h(i), x(j + first, sign));
                let c = a.entries[i][j] * i64::from(sign.factor());
                if c == 0 {
                    fam.push(Relation::zero(id, lhs));
                } else {
                    fam.push(Relation::equals(
                        id,
                        lhs,
                        scaled(rat(c, 1), x(j + first, sign)),
                    ));
                }
            }
        }
    }
    fam
}

/// The Cartan matrix the Chevalley generators of `kind` should realize.
pub fn cartan_for(kind: AlgebraKind) -> Option<CartanMatrix> {
    match kind {
        AlgebraKind::Vect(n) | AlgebraKind::Svect(n) => cartan_matrix(Series::A, n).ok(),
        AlgebraKind::Sl(m) => cartan_matrix(Series::A, m - 1).ok(),
        AlgebraKind::K(n) | AlgebraKind::Po(n) | AlgebraKind::H(n) => {
            cartan_matrix(Series::C, n + 1).ok()
        }
        AlgebraKind::Sp(m) => cartan_matrix(Series::C, m).ok(),
        AlgebraKind::Witt => None,
    }
}

/// Serre relations in the realization of `spec`. Only pairs whose
/// generators all exist are emitted: `svect` lacks `X_n^+`, and `h`/`po`
/// lack `X_0^+`, so those keep the one-sided relations of the present sign.
pub fn serre_family(spec: &AlgebraSpec) -> Option<RelationFamily> {
    let a = cartan_for(spec.kind())?;
    let first = spec.first_index();
    let scales: Vec<Rational> = (0..a.rank())
        .map(|i| {
            spec.chevalley()
                .iter()
                .find(|c| c.index == i + first)
                .map_or_else(Rational::one, |c| c.scale.clone())
        })
        .collect();
    let mut fam = serre_relations(&a, first, &scales, spec.kind());
    fam.relations.retain(|r| {
        let mut ok = true;
        for i in 0..a.rank() {
            for s in [Sign::Plus, Sign::Minus] {
                let n = gen_name(i + first, s);
                if r.mentions(&n) && spec.generator(&n).is_err() {
                    ok = false;
                }
            }
            let h = format!("H{}", i + first);
            if r.mentions(&h) && spec.generator(&h).is_err() {
                ok = false;
            }
        }
        ok
    });
    Some(fam)
}

fn witt_families() -> Vec<RelationFamily> {
    let w = AlgebraKind::Witt;
    let mut dr0 = RelationFamily::new("witt-degree-zero", w, "Witt relations through e0");
    dr0.push(Relation::equals(
        "[e-1,e1]",
        br(gen("e-1"), gen("e1")),
        scaled(rat(2, 1), gen("e0")),
    ));
    dr0.push(Relation::equals(
        "[e-2,e2]",
        br(gen("e-2"), gen("e2")),
        scaled(rat(4, 1), gen("e0")),
    ));
    for i in [1i64, -1, 2, -2] {
        let ei = gen(&format!("e{i}"));
        dr0.push(Relation::equals(
            format!("[e0,e{i}]"),
            br(gen("e0"), ei.clone()),
            scaled(rat(i, 1), ei),
        ));
    }
    dr0.push(Relation::equals(
        "[e-1,e2]",
        br(gen("e-1"), gen("e2")),
        scaled(rat(3, 1), gen("e1")),
    ));
    dr0.push(Relation::equals(
        "[e1,e-2]",
        br(gen("e1"), gen("e-2")),
        scaled(rat(-3, 1), gen("e-1")),
    ));
    let mut out = vec![dr0];
    for (sign, tag) in [("", "plus"), ("-", "minus")] {
        let e1 = gen(&format!("e{sign}1"));
        let e2 = gen(&format!("e{sign}2"));
        let mut f = RelationFamily::new(
            &format!("witt-{tag}"),
            w,
            &format!(
                "Witt relations in n{}",
                if sign.is_empty() { "+" } else { "-" }
            ),
        );
        f.push(Relation::zero(
            "degree5",
            lin(vec![
                (rat(1, 1), ad(e1.clone(), 3, e2.clone())),
                (rat(6, 1), ad(e2.clone(), 2, e1.clone())),
            ]),
        ));
        f.push(Relation::zero(
            "degree7",
            lin(vec![
                (rat(1, 1), ad(e1.clone(), 5, e2.clone())),
                (rat(40, 1), ad(e2, 3, e1)),
            ]),
        ));
        out.push(f);
    }
    out
}

/// `[X_{n-1}^s, [ ... , [X_2^s, X_1^s] ... ]]`
fn ladder(n: usize, sign: Sign) -> RelationExpr {
    let mut e = x(1, sign);
    for i in 2..n {
        e = br(x(i, sign), e);
    }
    e
}

fn h_families(kind: AlgebraKind, n: usize) -> Vec<RelationFamily> {
    let mut out = Vec::new();
    let is_h = matches!(kind, AlgebraKind::H(_));
    let is_po = matches!(kind, AlgebraKind::Po(_));
    let is_k = matches!(kind, AlgebraKind::K(_));
    if is_h || is_po {
        let mut f = RelationFamily::new(
            "nminus-weight-zero",
            kind,
            "extra weight-zero relation in N- of h(2n)",
        );
        if n == 1 {
            f.push(Relation::zero(
                "ad(X0-)^2(X1-)",
                ad(x(0, Sign::Minus), 2, x(1, Sign::Minus)),
            ));
        } else {
            // {p1, {...{{...{p1, q1p2}, ..., q_{n-1}p_n}, q_n^2}, q_{n-1}p_n}, ..., q1p2}}
            let mut inner = x(0, Sign::Minus);
            for i in 1..=n {
                inner = br(inner, x(i, Sign::Minus));
            }
            for i in (1..n).rev() {
                inner = br(inner, x(i, Sign::Minus));
            }
            let nested = br(x(0, Sign::Minus), inner);
            if is_h {
                f.push(Relation::zero("nested", nested));
                f.push(Relation::zero("{p1,q1}", br(x(0, Sign::Minus), lit("q1"))));
            } else {
                // in po the constants survive: the nested form is a multiple of {p1, q1}
                f.push(Relation {
                    id: "nested-vs-{p1,q1}".into(),
                    lhs: nested,
                    expected: Expected::MultipleOf(br(x(0, Sign::Minus), lit("q1"))),
                });
            }
        }
        out.push(f);
    }
    if (is_h || is_k) && n > 1 {
        let mut f = RelationFamily::new(
            "nplus-y",
            kind,
            "relations between the X_i^+ and Y in N+ of h(2n)",
        );
        let y = lit("q1^3");
        f.push(Relation::zero(
            "ad(p1q2)^4(q1^3)",
            ad(lit("p1*q2"), 4, y.clone()),
        ));
        for i in 2..n {
            f.push(Relation::zero(
                format!("ad(p{i}q{})(q1^3)", i + 1),
                ad(lit(&format!("p{i}*q{}", i + 1)), 1, y.clone()),
            ));
        }
        f.push(Relation::zero(
            format!("ad(p{n}^2)(q1^3)"),
            ad(lit(&format!("p{n}^2")), 1, y),
        ));
        out.push(f);
    }
    if is_k && n > 1 {
        let mut f = RelationFamily::new(
            "nplus-x0-y",
            kind,
            "simplified relation involving X_0^+ and Y in N+ of k(2n+1)",
        );
        f.push(Relation::zero(
            "[X1+,[Y,X0+]]",
            br(x(1, Sign::Plus), br(gen("Y"), x(0, Sign::Plus))),
        ));
        out.push(f);
    }
    if (is_h || is_k) && n > 1 {
        let mut f = RelationFamily::new(
            "cross-y",
            kind,
            "relations between N+ and N- involving Y in h(2n) and k(2n+1)",
        );
        f.superscript_ambiguous = true;
        let mut chain = x(n, Sign::Plus);
        for i in (1..n).rev() {
            chain = ad(x(i, Sign::Plus), 2, chain);
        }
        let c =
            rat(-3, 1) / Rational::from_integer(num_bigint::BigInt::from(2).pow((n - 1) as u32));
        let rhs = scaled(c, chain);
        f.push(Relation::equals(
            "[Y,X0+]",
            br(gen("Y"), x(0, Sign::Plus)),
            rhs.clone(),
        ));
        f.push(Relation::equals("rhs=-3q1^2", rhs, lit("-3*q1^2")));
        for i in 1..=n {
            f.push(Relation::zero(
                format!("[Y,X{i}+]"),
                br(gen("Y"), x(i, Sign::Plus)),
            ));
        }
        out.push(f);
    }
    out
}

fn vect_families(kind: AlgebraKind, n: usize) -> Vec<RelationFamily> {
    let mut out = Vec::new();
    let mut sl = RelationFamily::new(
        "nplus-sl",
        kind,
        "relations among X_1^+ .. X_n^+ of sl(n+1) type in N+ of vect(n)",
    );
    for i in 1..=n {
        for j in 1..=n {
            if i.abs_diff(j) > 1 {
                sl.push(Relation::zero(
                    format!("ad(X{i}+)(X{j}+)"),
                    ad(x(i, Sign::Plus), 1, x(j, Sign::Plus)),
                ));
            } else if i.abs_diff(j) == 1 {
                sl.push(Relation::zero(
                    format!("ad(X{j}+)^2(X{i}+)"),
                    ad(x(j, Sign::Plus), 2, x(i, Sign::Plus)),
                ));
            }
        }
    }
    out.push(sl);
    let mut y = RelationFamily::new(
        "nplus-y",
        kind,
        "relations between X_i^+ and Y in N+ of vect(n)",
    );
    let squared = [1, n.saturating_sub(2), n - 1];
    for i in 1..n {
        if squared.contains(&i) {
            y.push(Relation::zero(
                format!("ad(X{i}+)^2(Y)"),
                ad(x(i, Sign::Plus), 2, gen("Y")),
            ));
        } else {
            y.push(Relation::zero(
                format!("ad(X{i}+)(Y)"),
                ad(x(i, Sign::Plus), 1, gen("Y")),
            ));
        }
    }
    out.push(y);
    let mut cross = RelationFamily::new(
        "cross-y",
        kind,
        "relations between N+ and N- involving Y in vect(n) and svect(n)",
    );
    cross.superscript_ambiguous = true;
    let rhs = scaled(rat(-2, 1), ladder(n, Sign::Plus));
    cross.push(Relation::equals(
        format!("[Y,X{n}+]"),
        br(gen("Y"), x(n, Sign::Plus)),
        rhs.clone(),
    ));
    cross.push(Relation::equals(
        format!("rhs=-2x{n}d1"),
        rhs,
        lit(&format!("-2*x{n}*d1")),
    ));
    for i in 1..n {
        cross.push(Relation::zero(
            format!("[Y,X{i}+]"),
            br(gen("Y"), x(i, Sign::Plus)),
        ));
    }
    out.push(cross);
    if let AlgebraKind::Svect(_) = kind {
        // svect keeps only what does not involve X_n^+, except the cross
        // relations, which are stated for svect as well
        let xn = gen_name(n, Sign::Plus);
        for f in out.iter_mut().filter(|f| !f.superscript_ambiguous) {
            f.relations.retain(|r| !r.mentions(&xn));
        }
    }
    out
}

/// Every transcribed relation family for one algebra.
pub fn relation_families(kind: AlgebraKind) -> Vec<RelationFamily> {
    match kind {
        AlgebraKind::Witt => witt_families(),
        AlgebraKind::H(n) | AlgebraKind::Po(n) | AlgebraKind::K(n) => h_families(kind, n),
        AlgebraKind::Vect(n) | AlgebraKind::Svect(n) if n >= 3 => vect_families(kind, n),
        _ => Vec::new(),
    }
}

/// The algebras whose families are checked by default.
pub fn standard_algebras() -> Vec<AlgebraKind> {
    vec![
        AlgebraKind::Witt,
        AlgebraKind::H(1),
        AlgebraKind::H(2),
        AlgebraKind::H(3),
        AlgebraKind::Po(2),
        AlgebraKind::Po(3),
        AlgebraKind::K(2),
        AlgebraKind::K(3),
        AlgebraKind::Vect(3),
        AlgebraKind::Vect(4),
        AlgebraKind::Svect(3),
        AlgebraKind::Svect(4),
    ]
}

/// All families over [`standard_algebras`].
pub fn standard_relation_families() -> Vec<RelationFamily> {
    standard_algebras()
        .into_iter()
        .flat_map(relation_families)
        .collect()
}
