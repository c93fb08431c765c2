//! The algebras: kinds, generator tables, tori, and graded bases.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Inserted, SparseVec};
use crate::poly::{Monomial, VarContext};
use crate::realize::{contact_bracket, poisson_bracket, ContactConvention, WeightVector};
use crate::scalar::{rat, Rational, Scalar};
use crate::{Polynomial, VectorField};

/// Absolute upper bound on the rank parameter, whatever the configuration.
pub const HARD_MAX_RANK: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    Vect(usize),
    Svect(usize),
    /// `h(2n)`, stores `n`
    H(usize),
    /// `po(2n)`, stores `n`
    Po(usize),
    /// `k(2n+1)`, stores `n`
    K(usize),
    Witt,
    /// `sl(m)`, stores `m`
    Sl(usize),
    /// `sp(2m)`, stores `m`
    Sp(usize),
}

impl AlgebraKind {
    pub fn family(&self) -> &'static str {
        match self {
            AlgebraKind::Vect(_) => "vect",
            AlgebraKind::Svect(_) => "svect",
            AlgebraKind::H(_) => "h",
            AlgebraKind::Po(_) => "po",
            AlgebraKind::K(_) => "k",
            AlgebraKind::Witt => "witt",
            AlgebraKind::Sl(_) => "sl",
            AlgebraKind::Sp(_) => "sp",
        }
    }

    /// The rank parameter `n` the cutoffs apply to (`m - 1` for `sl(m)`).
    pub fn rank(&self) -> usize {
        match *self {
            AlgebraKind::Vect(n)
            | AlgebraKind::Svect(n)
            | AlgebraKind::H(n)
            | AlgebraKind::Po(n)
            | AlgebraKind::K(n)
            | AlgebraKind::Sp(n) => n,
            AlgebraKind::Sl(m) => m.saturating_sub(1),
            AlgebraKind::Witt => 0,
        }
    }

    fn min_rank(&self) -> usize {
        match self {
            AlgebraKind::Svect(_) => 2,
            AlgebraKind::Witt => 0,
            _ => 1,
        }
    }

    pub fn check_rank(&self, limits: &Limits) -> Result<()> {
        let max = limits.max_rank.min(HARD_MAX_RANK);
        let r = self.rank();
        if *self != AlgebraKind::Witt && (r < self.min_rank() || r > max) {
            return Err(Error::UnsupportedRank {
                kind: self.family().to_string(),
                rank: r,
                min: self.min_rank(),
                max,
            });
        }
        Ok(())
    }

    /// Whether this is one of the graded vectorial algebras.
    pub fn is_vectorial(&self) -> bool {
        !matches!(self, AlgebraKind::Sl(_) | AlgebraKind::Sp(_))
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AlgebraKind::Vect(n) => write!(f, "vect:{n}"),
            AlgebraKind::Svect(n) => write!(f, "svect:{n}"),
            AlgebraKind::H(n) => write!(f, "h:{}", 2 * n),
            AlgebraKind::Po(n) => write!(f, "po:{}", 2 * n),
            AlgebraKind::K(n) => write!(f, "k:{}", 2 * n + 1),
            AlgebraKind::Witt => write!(f, "witt"),
            AlgebraKind::Sl(m) => write!(f, "sl:{m}"),
            AlgebraKind::Sp(m) => write!(f, "sp:{}", 2 * m),
        }
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    /// `vect:3`, `svect:3`, `h:4`, `po:4`, `k:5`, `witt`, `sl:4`, `sp:6`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAlgebra(s.to_string());
        let s = s.trim();
        if s == "witt" {
            return Ok(AlgebraKind::Witt);
        }
        let (name, dim) = s.split_once(':').ok_or_else(bad)?;
        let d: usize = dim.trim().parse().map_err(|_| bad())?;
        let half = |d: usize| {
            if d.is_multiple_of(2) {
                Ok(d / 2)
            } else {
                Err(bad())
            }
        };
        match name.trim() {
            "vect" => Ok(AlgebraKind::Vect(d)),
            "svect" => Ok(AlgebraKind::Svect(d)),
            "h" => half(d).map(AlgebraKind::H),
            "po" => half(d).map(AlgebraKind::Po),
            "k" if d % 2 == 1 => Ok(AlgebraKind::K(d / 2)),
            "sl" => Ok(AlgebraKind::Sl(d)),
            "sp" => half(d).map(AlgebraKind::Sp),
            _ => Err(bad()),
        }
    }
}

/// Configurable cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rank: usize,
    pub max_degree: i32,
    pub max_length: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rank: 4,
            max_degree: 6,
            max_length: 5,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_rank: HARD_MAX_RANK,
            max_degree: i32::MAX,
            max_length: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    ConcreteFields,
    GeneratingFunctions,
    StructureConstants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(&self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flip(&self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn factor(&self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// An algebra element in one of the three realizations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Element {
    Field(VectorField),
    Function(Polynomial),
    /// `sum c_i e_i`
    Witt(BTreeMap<i64, Rational>),
}

/// A basis vector of a monomial basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MonoKey {
    Field(usize, Monomial),
    Function(Monomial),
    Witt(i64),
}

impl Element {
    pub fn witt(i: i64) -> Self {
        Element::Witt([(i, Rational::one())].into())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Field(v) => v.is_zero(),
            Element::Function(f) => f.is_zero(),
            Element::Witt(m) => m.is_empty(),
        }
    }

    pub fn zero_like(&self) -> Element {
        match self {
            Element::Field(v) => Element::Field(VectorField::zero(v.context())),
            Element::Function(f) => Element::Function(Polynomial::zero(f.context())),
            Element::Witt(_) => Element::Witt(BTreeMap::new()),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Field(a), Element::Field(b)) => Element::Field(a.checked_add(b)?),
            (Element::Function(a), Element::Function(b)) => Element::Function(a.checked_add(b)?),
            (Element::Witt(a), Element::Witt(b)) => {
                let mut r = a.clone();
                for (i, c) in b {
                    let e = r.entry(*i).or_insert_with(Rational::zero);
                    *e += c;
                    if e.is_zero() {
                        r.remove(i);
                    }
                }
                Element::Witt(r)
            }
            _ => return Err(Error::Realization(format!("cannot add {self} and {other}"))),
        })
    }

    pub fn scale(&self, c: &Rational) -> Element {
        match self {
            Element::Field(v) => Element::Field(v.scale(c)),
            Element::Function(f) => Element::Function(f.scale(c)),
            Element::Witt(m) => Element::Witt(if c.is_zero() {
                BTreeMap::new()
            } else {
                m.iter().map(|(i, x)| (*i, x * c)).collect()
            }),
        }
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn to_sparse(&self) -> SparseVec<MonoKey> {
        match self {
            Element::Field(v) => v
                .components()
                .flat_map(|(i, f)| {
                    f.terms()
                        .map(move |(m, c)| (MonoKey::Field(i, m.clone()), c.clone()))
                })
                .collect(),
            Element::Function(f) => f
                .terms()
                .map(|(m, c)| (MonoKey::Function(m.clone()), c.clone()))
                .collect(),
            Element::Witt(m) => m
                .iter()
                .map(|(i, c)| (MonoKey::Witt(*i), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Field(v) => write!(f, "{v}"),
            Element::Function(p) => write!(f, "{p}"),
            Element::Witt(m) => {
                if m.is_empty() {
                    return write!(f, "0");
                }
                for (k, (i, c)) in m.iter().enumerate() {
                    let neg = c.is_negative_repr();
                    let abs = if neg { -c.clone() } else { c.clone() };
                    match (k, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "e{i}")?;
                }
                Ok(())
            }
        }
    }
}

/// A Chevalley pair `X_i^+, X_i^-` with `H_i = scale * [X_i^+, X_i^-]`
/// normalized so that `[H_i, X_i^+] = 2 X_i^+`.
#[derive(Debug, Clone)]
pub struct Chevalley {
    pub index: usize,
    pub scale: Rational,
    pub h: Element,
}

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    kind: AlgebraKind,
    realization: Realization,
    ctx: Option<VarContext>,
    limits: Limits,
    generators: Vec<(String, Element)>,
    chevalley: Vec<Chevalley>,
    torus: Vec<Element>,
    first_index: usize,
    contact: ContactConvention,
}

pub fn gen_name(i: usize, sign: Sign) -> String {
    format!("X{}{}", i, sign.symbol())
}

impl AlgebraSpec {
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn context(&self) -> Option<VarContext> {
        self.ctx
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn contact_convention(&self) -> ContactConvention {
        self.contact
    }

    /// Switches the contact bracket used by `k` (a diagnostic; the default
    /// is the one matching the field bracket).
    pub fn set_contact_convention(&mut self, conv: ContactConvention) -> Result<()> {
        self.contact = conv;
        self.chevalley = self.compute_chevalley()?;
        Ok(())
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    /// The printed generator table, in order `X^-`, `X^+`, `Y`.
    pub fn generators(&self) -> &[(String, Element)] {
        &self.generators
    }

    pub fn chevalley(&self) -> &[Chevalley] {
        &self.chevalley
    }

    pub fn torus(&self) -> &[Element] {
        &self.torus
    }

    pub fn torus_rank(&self) -> usize {
        self.torus.len()
    }

    /// Index of the first Chevalley pair (0 for `k`, `h`, `po`; 1 otherwise).
    pub fn first_index(&self) -> usize {
        self.first_index
    }

    /// Simple-root indices present for the given sign.
    pub fn simple_indices(&self, sign: Sign) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .generators
            .iter()
            .filter_map(|(n, _)| {
                let rest = n.strip_prefix('X')?;
                let (num, s) = rest.split_at(rest.len() - 1);
                (s.starts_with(sign.symbol())).then(|| num.parse().ok())?
            })
            .collect();
        v.sort();
        v
    }

    /// Names of the generators of `N_+` or `N_-`.
    pub fn nilpotent_generators(&self, sign: Sign) -> Vec<String> {
        let mut out: Vec<String> = self
            .simple_indices(sign)
            .into_iter()
            .map(|i| gen_name(i, sign))
            .collect();
        if sign == Sign::Plus && self.generators.iter().any(|(n, _)| n == "Y") {
            out.push("Y".into());
        }
        if self.kind == AlgebraKind::Witt {
            out = match sign {
                Sign::Plus => vec!["e1".into(), "e2".into()],
                Sign::Minus => vec!["e-1".into(), "e-2".into()],
            };
        }
        out
    }

    pub fn generator(&self, name: &str) -> Result<Element> {
        if let Some((_, e)) = self.generators.iter().find(|(n, _)| n == name) {
            return Ok(e.clone());
        }
        if let Some(i) = name.strip_prefix('H').and_then(|s| s.parse::<usize>().ok()) {
            if let Some(c) = self.chevalley.iter().find(|c| c.index == i) {
                return Ok(c.h.clone());
            }
        }
        if self.kind == AlgebraKind::Witt {
            if let Some(i) = name.strip_prefix('e').and_then(|s| s.parse::<i64>().ok()) {
                return Ok(self.witt_basis(i));
            }
        }
        Err(Error::UnresolvedGenerator(name.to_string()))
    }

    fn witt_basis(&self, i: i64) -> Element {
        match self.realization {
            Realization::StructureConstants => Element::witt(i),
            _ => {
                let ctx = VarContext::laurent();
                let m = ctx.monomial(&[(i + 1) as i32]);
                Element::Field(VectorField::component(
                    0,
                    Polynomial::term(ctx, m, Rational::one()),
                ))
            }
        }
    }

    pub fn zero_element(&self) -> Element {
        match (self.realization, self.ctx) {
            (Realization::ConcreteFields, Some(c)) => Element::Field(VectorField::zero(c)),
            (Realization::GeneratingFunctions, Some(c)) => Element::Function(Polynomial::zero(c)),
            _ => Element::Witt(BTreeMap::new()),
        }
    }

    pub fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(match (a, b) {
            (Element::Field(x), Element::Field(y)) => Element::Field(x.lie_bracket(y)?),
            (Element::Function(f), Element::Function(g)) => {
                let r = match self.kind {
                    AlgebraKind::K(_) => contact_bracket(f, g, self.contact)?,
                    _ => poisson_bracket(f, g)?,
                };
                if matches!(self.kind, AlgebraKind::H(_)) {
                    Element::Function(drop_constant(&r))
                } else {
                    Element::Function(r)
                }
            }
            (Element::Witt(x), Element::Witt(y)) => {
                let mut r = BTreeMap::new();
                for (i, a) in x {
                    for (j, b) in y {
                        let c = a * b * Rational::from_integer((j - i).into());
                        if !c.is_zero() {
                            let e = r.entry(i + j).or_insert_with(Rational::zero);
                            *e += c;
                        }
                    }
                }
                r.retain(|_, c: &mut Rational| !c.is_zero());
                Element::Witt(r)
            }
            _ => return Err(Error::Realization(format!("cannot bracket {a} with {b}"))),
        })
    }

    /// `(ad a)^k b`
    pub fn ad_pow(&self, a: &Element, k: usize, b: &Element) -> Result<Element> {
        let mut r = b.clone();
        for _ in 0..k {
            if r.is_zero() {
                break;
            }
            r = self.bracket(a, &r)?;
        }
        Ok(r)
    }

    pub fn key_degree(&self, k: &MonoKey) -> i32 {
        match k {
            MonoKey::Field(j, m) => m.degree() - self.ctx.map_or(1, |c| c.var_weight(*j)),
            MonoKey::Function(m) => m.degree() - 2,
            MonoKey::Witt(i) => *i as i32,
        }
    }

    pub fn key_weight(&self, k: &MonoKey) -> WeightVector {
        let r = self.torus_rank();
        match k {
            MonoKey::Field(j, m) => {
                if r == 0 {
                    return WeightVector::zero(0);
                }
                let mut w: Vec<i64> = m.exponents().iter().map(|&e| i64::from(e)).collect();
                w[*j] -= 1;
                WeightVector(w)
            }
            MonoKey::Function(m) => {
                let ctx = self.ctx.expect("function algebras have a context");
                WeightVector(
                    (1..=ctx.n())
                        .map(|i| i64::from(m.exponent(ctx.p(i)) - m.exponent(ctx.q(i))))
                        .collect(),
                )
            }
            MonoKey::Witt(_) => WeightVector::zero(0),
        }
    }

    /// Standard degree of a homogeneous element.
    pub fn degree(&self, e: &Element) -> Result<i32> {
        let mut d = None;
        for k in e.to_sparse().keys() {
            let kd = self.key_degree(k);
            if d.is_some_and(|x| x != kd) {
                return Err(Error::NotHomogeneous(e.to_string()));
            }
            d = Some(kd);
        }
        d.ok_or_else(|| Error::NotHomogeneous("0".into()))
    }

    /// Weight read off the monomials; errors if they disagree.
    pub fn weight(&self, e: &Element) -> Result<WeightVector> {
        let mut w: Option<WeightVector> = None;
        for k in e.to_sparse().keys() {
            let kw = self.key_weight(k);
            if w.as_ref().is_some_and(|x| *x != kw) {
                return Err(Error::NotEigenvector {
                    element: e.to_string(),
                    torus: "monomial weights differ".into(),
                });
            }
            w = Some(kw);
        }
        Ok(w.unwrap_or_else(|| WeightVector::zero(self.torus_rank())))
    }

    /// Weight computed as eigenvalues of `ad` of the torus elements.
    pub fn torus_weight(&self, e: &Element) -> Result<WeightVector> {
        let mut w = Vec::with_capacity(self.torus.len());
        for h in &self.torus {
            let img = self.bracket(h, e)?;
            let l = if img.is_zero() {
                Some(0)
            } else {
                eigenvalue(e, &img).and_then(|l| l.to_i64())
            };
            w.push(l.ok_or_else(|| Error::NotEigenvector {
                element: e.to_string(),
                torus: h.to_string(),
            })?);
        }
        Ok(WeightVector(w))
    }

    pub fn format_element(&self, e: &Element) -> String {
        match (e, self.kind) {
            (Element::Function(_), AlgebraKind::K(_)) => format!("K[{e}]"),
            (Element::Function(_), _) => format!("H[{e}]"),
            _ => e.to_string(),
        }
    }

    /// Parses an element literal: a field, a generating function, or `e3`.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        match (self.realization, self.ctx) {
            (Realization::GeneratingFunctions, Some(c)) => {
                Ok(Element::Function(Polynomial::parse(s, c)?))
            }
            (Realization::ConcreteFields, Some(c)) => Ok(Element::Field(VectorField::parse(s, c)?)),
            _ => self.generator(s.trim()),
        }
    }

    /// Complete basis of `g_d` (for `sl`/`sp`, only `d = 0` is nonzero).
    pub fn graded_component_basis(&self, d: i32) -> Result<Block> {
        if d.abs() > self.limits.max_degree {
            return Err(Error::CutoffExceeded {
                what: "degree",
                value: i64::from(d),
                limit: i64::from(self.limits.max_degree),
            });
        }
        let elems: Vec<Element> = match self.kind {
            AlgebraKind::Witt => vec![self.witt_basis(i64::from(d))],
            AlgebraKind::Vect(_) | AlgebraKind::Svect(_) => self.field_monomials(d),
            AlgebraKind::Sl(m) => {
                if d != 0 {
                    return Ok(Block::monomial(self, d, Vec::new()));
                }
                let ctx = self.ctx.unwrap();
                let mut v = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        if i != j {
                            v.push(Element::Field(VectorField::component(
                                j,
                                Polynomial::var(ctx, i),
                            )));
                        }
                    }
                }
                let mut out = Vec::new();
                for i in 0..m - 1 {
                    let a = VectorField::component(i, Polynomial::var(ctx, i));
                    let b = VectorField::component(i + 1, Polynomial::var(ctx, i + 1));
                    out.push(Element::Field(a.checked_sub(&b)?));
                }
                v.extend(out);
                return Block::solved(self, d, v);
            }
            AlgebraKind::Sp(_) => {
                if d != 0 {
                    return Ok(Block::monomial(self, d, Vec::new()));
                }
                self.function_monomials(0)
            }
            AlgebraKind::H(_) | AlgebraKind::Po(_) | AlgebraKind::K(_) => {
                self.function_monomials(d)
            }
        };
        if let AlgebraKind::Svect(_) = self.kind {
            return Block::solved(self, d, divergence_kernel(&elems)?);
        }
        Ok(Block::monomial(self, d, elems))
    }

    fn field_monomials(&self, d: i32) -> Vec<Element> {
        let ctx = self.ctx.expect("field algebras have a context");
        let mons = ctx.monomials_of_degree(d + 1);
        let mut v = Vec::new();
        for j in 0..ctx.nvars() {
            for m in &mons {
                v.push(Element::Field(VectorField::component(
                    j,
                    Polynomial::term(ctx, m.clone(), Rational::one()),
                )));
            }
        }
        v
    }

    fn function_monomials(&self, d: i32) -> Vec<Element> {
        let ctx = self.ctx.expect("function algebras have a context");
        ctx.monomials_of_degree(d + 2)
            .into_iter()
            .filter(|m| !(m.is_one() && matches!(self.kind, AlgebraKind::H(_))))
            .map(|m| Element::Function(Polynomial::term(ctx, m, Rational::one())))
            .collect()
    }

    /// Basis of the degree-`d` part of `N_+` (`sign = Plus`, `d >= 0`) or
    /// `N_-` (`d <= 0`). In degree 0 this is `n_+` resp. `n_-` of `g_0`.
    pub fn nilpotent_block(&self, sign: Sign, d: i32) -> Result<Block> {
        if d * sign.factor() < 0 {
            return Ok(Block::monomial(self, d, Vec::new()));
        }
        let full = self.graded_component_basis(d)?;
        if d != 0 {
            return Ok(full);
        }
        let keep: Vec<Element> = full
            .elements
            .into_iter()
            .filter(|e| {
                let w = self.weight(e).map(|w| lex_sign(&w)).unwrap_or(0);
                w == sign.factor()
            })
            .collect();
        Ok(Block::monomial(self, 0, keep))
    }

    /// Blocks of `N_+` for degrees `0..=maxdeg` (or `N_-`, degrees `0..=-maxdeg`).
    pub fn nilpotent_part(&self, sign: Sign, maxdeg: i32) -> Result<GradedBasis> {
        let mut blocks = BTreeMap::new();
        for k in 0..=maxdeg {
            let d = k * sign.factor();
            blocks.insert(d, self.nilpotent_block(sign, d)?);
        }
        Ok(GradedBasis { blocks })
    }

    /// Blocks of `g_+ = sum_{d>0} g_d` (or `g_-`) up to `|d| = maxdeg`.
    pub fn graded_part(&self, sign: Sign, maxdeg: i32) -> Result<GradedBasis> {
        let mut blocks = BTreeMap::new();
        for k in 1..=maxdeg {
            let d = k * sign.factor();
            blocks.insert(d, self.graded_component_basis(d)?);
        }
        Ok(GradedBasis { blocks })
    }
}

fn lex_sign(w: &WeightVector) -> i32 {
    w.0.iter()
        .find(|&&c| c != 0)
        .map_or(0, |&c| if c > 0 { 1 } else { -1 })
}

fn drop_constant(f: &Polynomial) -> Polynomial {
    let ctx = f.context();
    let one = ctx.unit_monomial();
    Polynomial::from_terms(
        ctx,
        f.terms()
            .filter(|(m, _)| **m != one)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

fn eigenvalue(e: &Element, img: &Element) -> Option<Rational> {
    let a = e.to_sparse();
    let b = img.to_sparse();
    let (k, c) = a.iter().next_back()?;
    let l = b.get(k).cloned().unwrap_or_else(Rational::zero) / c;
    (e.scale(&l) == *img).then_some(l)
}

fn divergence_kernel(elems: &[Element]) -> Result<Vec<Element>> {
    let mut ech = Echelon::new(true);
    let mut out = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let Element::Field(v) = e else { unreachable!() };
        let div: SparseVec<Monomial> = v
            .divergence()?
            .terms()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        if let Inserted::Dependent(comb) = ech.insert(&div) {
            let mut k = e.clone();
            for (j, c) in comb {
                k = k.sub(&elems[j].scale(&c))?;
            }
            out.push(k);
        }
        debug_assert_eq!(ech.inputs(), i + 1);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Coordinates {
    Monomial(HashMap<MonoKey, usize>),
    Solved(Box<Echelon<MonoKey>>),
}

/// A basis of one degree component, with exact coordinates.
#[derive(Debug, Clone)]
pub struct Block {
    pub degree: i32,
    pub elements: Vec<Element>,
    pub weights: Vec<WeightVector>,
    coords: Coordinates,
    zero: Element,
}

impl Block {
    fn monomial(spec: &AlgebraSpec, degree: i32, elements: Vec<Element>) -> Block {
        let map = elements
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let s = e.to_sparse();
                debug_assert_eq!(s.len(), 1);
                (s.into_keys().next().unwrap(), i)
            })
            .collect();
        let weights = elements
            .iter()
            .map(|e| spec.weight(e).expect("monomials are weight vectors"))
            .collect();
        Block {
            degree,
            elements,
            weights,
            coords: Coordinates::Monomial(map),
            zero: spec.zero_element(),
        }
    }

    fn solved(spec: &AlgebraSpec, degree: i32, elements: Vec<Element>) -> Result<Block> {
        let mut ech = Echelon::new(true);
        for e in &elements {
            if let Inserted::Dependent(_) = ech.insert(&e.to_sparse()) {
                return Err(Error::NotInBasis(format!("{e} is linearly dependent")));
            }
        }
        let weights = elements
            .iter()
            .map(|e| spec.weight(e))
            .collect::<Result<_>>()?;
        Ok(Block {
            degree,
            elements,
            weights,
            coords: Coordinates::Solved(Box::new(ech)),
            zero: spec.zero_element(),
        })
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Exact coordinates of `e` in this block.
    pub fn coordinates(&self, e: &Element) -> Result<SparseVec<usize>> {
        let s = e.to_sparse();
        match &self.coords {
            Coordinates::Monomial(map) => {
                let mut out = SparseVec::new();
                for (k, c) in s {
                    let i = map
                        .get(&k)
                        .ok_or_else(|| Error::NotInBasis(e.to_string()))?;
                    out.insert(*i, c);
                }
                Ok(out)
            }
            Coordinates::Solved(ech) => ech
                .express(&s)
                .ok_or_else(|| Error::NotInBasis(e.to_string())),
        }
    }

    pub fn combine(&self, coords: &SparseVec<usize>) -> Result<Element> {
        let mut out: Option<Element> = None;
        for (i, c) in coords {
            let t = self.elements[*i].scale(c);
            out = Some(match out {
                None => t,
                Some(o) => o.add(&t)?,
            });
        }
        Ok(out.unwrap_or_else(|| self.zero.clone()))
    }
}

/// Degree blocks of a graded subspace.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    pub blocks: BTreeMap<i32, Block>,
}

impl GradedBasis {
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.blocks.iter().map(|(d, b)| (*d, b.dim())).collect()
    }

    pub fn block(&self, d: i32) -> Option<&Block> {
        self.blocks.get(&d)
    }
}

/// `[e_i, e_j] = (j - i) e_{i+j}` as `(coefficient, index)`.
pub fn witt_element_bracket(i: i64, j: i64) -> (i64, i64) {
    (j - i, i + j)
}

pub fn make_algebra(kind: AlgebraKind) -> Result<AlgebraSpec> {
    make_algebra_with(kind, Limits::default())
}

/// The Witt algebra realized by Laurent fields `e_i = x^{i+1} d/dx`.
pub fn make_witt_laurent() -> AlgebraSpec {
    AlgebraSpec {
        kind: AlgebraKind::Witt,
        realization: Realization::ConcreteFields,
        ctx: Some(VarContext::laurent()),
        limits: Limits::default(),
        generators: Vec::new(),
        chevalley: Vec::new(),
        torus: Vec::new(),
        first_index: 1,
        contact: ContactConvention::FieldHomomorphic,
    }
}

pub fn make_algebra_with(kind: AlgebraKind, limits: Limits) -> Result<AlgebraSpec> {
    kind.check_rank(&limits)?;
    let mut gens: Vec<(String, Element)> = Vec::new();
    let mut push = |name: String, e: Element| gens.push((name, e));
    let (realization, ctx, torus, first_index);
    match kind {
        AlgebraKind::Witt => {
            return Ok(AlgebraSpec {
                kind,
                realization: Realization::StructureConstants,
                ctx: None,
                limits,
                generators: [-2, -1, 1, 2]
                    .iter()
                    .map(|&i| (format!("e{i}"), Element::witt(i)))
                    .collect(),
                chevalley: Vec::new(),
                torus: Vec::new(),
                first_index: 1,
                contact: ContactConvention::FieldHomomorphic,
            });
        }
        AlgebraKind::Vect(n) | AlgebraKind::Svect(n) | AlgebraKind::Sl(n) => {
            let c = VarContext::x(n);
            let x = |i: usize| Polynomial::var(c, i - 1);
            let fld = |i: usize, f: Polynomial| Element::Field(VectorField::component(i - 1, f));
            let sl = matches!(kind, AlgebraKind::Sl(_));
            for i in 1..n {
                push(gen_name(i, Sign::Minus), fld(i, x(i + 1)));
            }
            if !sl {
                push(gen_name(n, Sign::Minus), fld(n, Polynomial::one(c)));
            }
            for i in 1..n {
                push(gen_name(i, Sign::Plus), fld(i + 1, x(i)));
            }
            if matches!(kind, AlgebraKind::Vect(_)) {
                let e = VectorField::euler(c);
                let xe = e
                    .components()
                    .map(|(j, f)| VectorField::component(j, f * &x(n)))
                    .try_fold(VectorField::zero(c), |a, b| a.checked_add(&b))?;
                push(gen_name(n, Sign::Plus), Element::Field(xe));
            }
            if !sl && n >= 2 {
                push("Y".into(), fld(1, &x(n) * &x(n)));
            }
            realization = Realization::ConcreteFields;
            ctx = c;
            torus = (1..=n).map(|i| fld(i, x(i))).collect::<Vec<_>>();
            first_index = 1;
        }
        AlgebraKind::H(n) | AlgebraKind::Po(n) | AlgebraKind::K(n) | AlgebraKind::Sp(n) => {
            let c = if matches!(kind, AlgebraKind::K(_)) {
                VarContext::tpq(n)
            } else {
                VarContext::pq(n)
            };
            let q = |i: usize| Polynomial::var(c, c.q(i));
            let p = |i: usize| Polynomial::var(c, c.p(i));
            let func = Element::Function;
            let sp = matches!(kind, AlgebraKind::Sp(_));
            if !sp {
                push(gen_name(0, Sign::Minus), func(p(1)));
            }
            for i in 1..n {
                push(gen_name(i, Sign::Minus), func(&q(i) * &p(i + 1)));
            }
            push(gen_name(n, Sign::Minus), func(&q(n) * &q(n)));
            if matches!(kind, AlgebraKind::K(_)) {
                let t = Polynomial::var(c, 0);
                push(gen_name(0, Sign::Plus), func(&t * &q(1)));
            }
            for i in 1..n {
                push(gen_name(i, Sign::Plus), func(&p(i) * &q(i + 1)));
            }
            push(gen_name(n, Sign::Plus), func(&p(n) * &p(n)));
            if !sp {
                push("Y".into(), func(&(&q(1) * &q(1)) * &q(1)));
            }
            realization = Realization::GeneratingFunctions;
            ctx = c;
            torus = (1..=n)
                .map(|i| func((&q(i) * &p(i)).scale(&-Rational::one())))
                .collect();
            first_index = if sp { 1 } else { 0 };
        }
    }
    let mut spec = AlgebraSpec {
        kind,
        realization,
        ctx: Some(ctx),
        limits,
        generators: gens,
        chevalley: Vec::new(),
        torus,
        first_index,
        contact: ContactConvention::FieldHomomorphic,
    };
    spec.chevalley = spec.compute_chevalley()?;
    Ok(spec)
}

impl AlgebraSpec {
    fn compute_chevalley(&self) -> Result<Vec<Chevalley>> {
        let plus = self.simple_indices(Sign::Plus);
        let minus = self.simple_indices(Sign::Minus);
        let mut out = Vec::new();
        for i in plus.into_iter().filter(|i| minus.contains(i)) {
            let xp = self.generator(&gen_name(i, Sign::Plus))?;
            let xm = self.generator(&gen_name(i, Sign::Minus))?;
            let h = self.bracket(&xp, &xm)?;
            let img = self.bracket(&h, &xp)?;
            let l = eigenvalue(&xp, &img)
                .filter(|l| !l.is_zero())
                .ok_or_else(|| Error::NotEigenvector {
                    element: xp.to_string(),
                    torus: h.to_string(),
                })?;
            let scale = rat(2, 1) / l;
            out.push(Chevalley {
                index: i,
                h: h.scale(&scale),
                scale,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> AlgebraSpec {
        make_algebra(s.parse().unwrap()).unwrap()
    }

    fn gen(spec: &AlgebraSpec, name: &str) -> String {
        spec.generator(name).unwrap().to_string()
    }

    /// `A_ij` read off `[H_i, X_j^+] = A_ij X_j^+`.
    fn cartan_of(spec: &AlgebraSpec) -> Vec<Vec<i64>> {
        let idx = spec.simple_indices(Sign::Plus);
        spec.chevalley()
            .iter()
            .map(|c| {
                idx.iter()
                    .map(|&j| {
                        let x = spec.generator(&gen_name(j, Sign::Plus)).unwrap();
                        let img = spec.bracket(&c.h, &x).unwrap();
                        eigenvalue(&x, &img)
                            .unwrap_or_else(Rational::zero)
                            .to_i64()
                            .unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn kind_names() {
        for s in [
            "vect:3", "svect:3", "h:4", "po:4", "k:5", "witt", "sl:4", "sp:6",
        ] {
            assert_eq!(s.parse::<AlgebraKind>().unwrap().to_string(), s);
        }
        assert!(matches!(
            "h:5".parse::<AlgebraKind>(),
            Err(Error::InvalidAlgebra(_))
        ));
        assert!(matches!(
            "foo:3".parse::<AlgebraKind>(),
            Err(Error::InvalidAlgebra(_))
        ));
        assert!(matches!(
            make_algebra(AlgebraKind::Vect(99)),
            Err(Error::UnsupportedRank { .. })
        ));
        assert!(make_algebra(AlgebraKind::Vect(5)).is_err());
        let wide = Limits {
            max_rank: 6,
            ..Limits::default()
        };
        assert!(make_algebra_with(AlgebraKind::Vect(5), wide).is_ok());
        assert!(make_algebra_with(AlgebraKind::Vect(7), Limits::unbounded()).is_err());
    }

    #[test]
    fn vect3_table() {
        let s = spec("vect:3");
        assert_eq!(gen(&s, "X1+"), "x1*d2");
        assert_eq!(gen(&s, "X2+"), "x2*d3");
        assert_eq!(gen(&s, "X3+"), "x1*x3*d1 + x2*x3*d2 + x3^2*d3");
        assert_eq!(gen(&s, "X1-"), "x2*d1");
        assert_eq!(gen(&s, "X2-"), "x3*d2");
        assert_eq!(gen(&s, "X3-"), "d3");
        assert_eq!(gen(&s, "Y"), "x3^2*d1");
        assert_eq!(
            cartan_of(&s),
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]
        );
        // [X3+, X3-] = -(E + x3 d3), so H3 needs a sign
        assert_eq!(s.chevalley()[2].scale, rat(-1, 1));
        let sv = spec("svect:3");
        assert!(sv.generator("X3+").is_err());
        assert_eq!(sv.nilpotent_generators(Sign::Plus), ["X1+", "X2+", "Y"]);
    }

    #[test]
    fn k5_table() {
        let s = spec("k:5");
        assert_eq!(gen(&s, "X0-"), "p1");
        assert_eq!(gen(&s, "X1-"), "q1*p2");
        assert_eq!(gen(&s, "X2-"), "q2^2");
        assert_eq!(gen(&s, "X0+"), "t*q1");
        assert_eq!(gen(&s, "X1+"), "q2*p1");
        assert_eq!(gen(&s, "X2+"), "p2^2");
        assert_eq!(gen(&s, "Y"), "q1^3");
        assert_eq!(
            cartan_of(&s),
            vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]
        );
        // off-diagonal pairs vanish, diagonal pairs land in the torus span
        for i in 0..=2 {
            for j in 0..=2 {
                let b = s
                    .bracket(
                        &s.generator(&gen_name(i, Sign::Plus)).unwrap(),
                        &s.generator(&gen_name(j, Sign::Minus)).unwrap(),
                    )
                    .unwrap();
                assert_eq!(b.is_zero(), i != j, "[X{i}+, X{j}-]");
                if i == j {
                    assert!(s.weight(&b).unwrap().is_zero());
                }
            }
        }
        let h = spec("h:2");
        assert!(h.generator("X0+").is_err());
        assert_eq!(gen(&h, "X0-"), "p1");
        assert_eq!(gen(&h, "X1-"), "q1^2");
    }

    #[test]
    fn sl_and_sp_tables() {
        let s = spec("sl:4");
        assert_eq!(
            cartan_of(&s),
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]
        );
        assert_eq!(s.graded_component_basis(0).unwrap().dim(), 15);
        let p = spec("sp:6");
        assert_eq!(
            cartan_of(&p),
            vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]
        );
        assert_eq!(p.graded_component_basis(0).unwrap().dim(), 21);
    }

    #[test]
    fn block_dimensions() {
        assert_eq!(spec("vect:2").graded_component_basis(-1).unwrap().dim(), 2);
        assert_eq!(spec("vect:3").graded_component_basis(1).unwrap().dim(), 18);
        assert_eq!(spec("h:4").graded_component_basis(1).unwrap().dim(), 20);
        assert_eq!(spec("h:4").graded_component_basis(-2).unwrap().dim(), 0);
        assert_eq!(spec("po:4").graded_component_basis(-2).unwrap().dim(), 1);
        // k(5): t*(4 linear) + cubics (20)
        assert_eq!(spec("k:5").graded_component_basis(1).unwrap().dim(), 24);
        // svect: vect block minus rank of div onto polynomials of degree d
        for d in -1..=3 {
            let v = spec("vect:3").graded_component_basis(d).unwrap().dim();
            let s = spec("svect:3").graded_component_basis(d).unwrap().dim();
            let polys = VarContext::x(3).monomials_of_degree(d).len();
            assert_eq!(s, v - polys, "degree {d}");
        }
        assert!(matches!(
            spec("vect:3").graded_component_basis(7),
            Err(Error::CutoffExceeded { .. })
        ));
    }

    #[test]
    fn witt_brackets() {
        assert_eq!(witt_element_bracket(-1, 1), (2, 0));
        assert_eq!(witt_element_bracket(-2, 2), (4, 0));
        assert_eq!(witt_element_bracket(3, 3), (0, 6));
        let w = spec("witt");
        let l = make_witt_laurent();
        for i in -3..=3 {
            for j in -3..=3 {
                let a = w
                    .bracket(
                        &w.generator(&format!("e{i}")).unwrap(),
                        &w.generator(&format!("e{j}")).unwrap(),
                    )
                    .unwrap();
                let b = l
                    .bracket(
                        &l.generator(&format!("e{i}")).unwrap(),
                        &l.generator(&format!("e{j}")).unwrap(),
                    )
                    .unwrap();
                let (c, k) = witt_element_bracket(i, j);
                assert_eq!(a, Element::witt(k).scale(&rat(c, 1)));
                assert_eq!(b, l.generator(&format!("e{k}")).unwrap().scale(&rat(c, 1)));
            }
        }
    }

    #[test]
    fn nilpotent_parts() {
        let v1 = spec("vect:1").nilpotent_part(Sign::Minus, 3).unwrap();
        assert_eq!(v1.dims().values().sum::<usize>(), 1);
        assert_eq!(v1.block(-1).unwrap().elements[0].to_string(), "d1");
        assert_eq!(
            spec("vect:3").nilpotent_block(Sign::Plus, 0).unwrap().dim(),
            3
        );
        assert_eq!(
            spec("k:5").nilpotent_block(Sign::Minus, -2).unwrap().dim(),
            1
        );
        assert_eq!(spec("h:4").nilpotent_block(Sign::Plus, 0).unwrap().dim(), 4);
        let s = spec("k:5");
        for name in ["X1+", "X2+"] {
            let x = s.generator(name).unwrap();
            let b = s.nilpotent_block(Sign::Plus, 0).unwrap();
            assert!(b.coordinates(&x).is_ok(), "{name} in n+");
        }
    }

    #[test]
    fn weights() {
        let h = spec("h:4");
        let y = h.generator("Y").unwrap();
        assert_eq!(h.torus_weight(&y).unwrap(), WeightVector(vec![-3, 0]));
        assert_eq!(h.weight(&y).unwrap(), WeightVector(vec![-3, 0]));
        let v = spec("vect:3");
        let x = v.generator("X1+").unwrap();
        assert_eq!(v.torus_weight(&x).unwrap(), WeightVector(vec![1, -1, 0]));
        for t in v.torus() {
            assert!(v.torus_weight(t).unwrap().is_zero());
        }
        let bad = v.parse_element("x1*d2 + d1").unwrap();
        assert!(matches!(
            v.torus_weight(&bad),
            Err(Error::NotEigenvector { .. })
        ));
        let k = spec("k:5");
        assert!(k
            .torus_weight(&k.parse_element("t").unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn bracket_closure() {
        for name in ["vect:2", "svect:3", "h:4", "po:2", "k:3"] {
            let s = spec(name);
            for i in -1..=2 {
                for j in -1..=2 {
                    let (Ok(a), Ok(b), Ok(c)) = (
                        s.graded_component_basis(i),
                        s.graded_component_basis(j),
                        s.graded_component_basis(i + j),
                    ) else {
                        continue;
                    };
                    for x in a.elements.iter().take(6) {
                        for y in b.elements.iter().take(6) {
                            let z = s.bracket(x, y).unwrap();
                            let co = c.coordinates(&z).unwrap();
                            assert_eq!(c.combine(&co).unwrap(), z, "{name}: [{x}, {y}]");
                        }
                    }
                }
            }
        }
    }
}
