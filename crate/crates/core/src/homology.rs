//! The chain complex `n <- n^n <- n^n^n` of a graded part, truncated by
//! degree, with blockwise H1/H2 and cycle checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{AlgebraSpec, Element, GradedBasis, Sign};
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, Echelon, Inserted, SparseVec};
use crate::realize::WeightVector;
use crate::scalar::Rational;

/// `(degree, index within the degree block)`
pub type BasisIdx = (i32, usize);
pub type Wedge = Vec<BasisIdx>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Part {
    #[serde(rename = "g+")]
    GPlus,
    #[serde(rename = "g-")]
    GMinus,
    #[serde(rename = "N+")]
    NPlus,
    #[serde(rename = "N-")]
    NMinus,
}

impl Part {
    pub fn sign(&self) -> Sign {
        match self {
            Part::GPlus | Part::NPlus => Sign::Plus,
            Part::GMinus | Part::NMinus => Sign::Minus,
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::GPlus => "g+",
            Part::GMinus => "g-",
            Part::NPlus => "N+",
            Part::NMinus => "N-",
        })
    }
}

impl FromStr for Part {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g+" => Ok(Part::GPlus),
            "g-" => Ok(Part::GMinus),
            "N+" => Ok(Part::NPlus),
            "N-" => Ok(Part::NMinus),
            _ => Err(Error::Unsupported(format!("part `{s}`"))),
        }
    }
}

/// A wedge chain; keys are strictly increasing index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainElement {
    arity: usize,
    terms: SparseVec<Wedge>,
}

impl ChainElement {
    pub fn zero(arity: usize) -> Self {
        ChainElement {
            arity,
            terms: SparseVec::new(),
        }
    }

    /// `c * f_1 ^ ... ^ f_k`, normalized by sorting with sign.
    pub fn wedge(factors: &[BasisIdx], c: Rational) -> Self {
        let mut out = ChainElement::zero(factors.len());
        out.add_wedge(factors, &c);
        out
    }

    pub fn from_terms(arity: usize, terms: SparseVec<Wedge>) -> Self {
        ChainElement { arity, terms }
    }

    fn add_wedge(&mut self, factors: &[BasisIdx], c: &Rational) {
        let mut f = factors.to_vec();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..f.len() {
            let mut j = i;
            while j > 0 && f[j - 1] > f[j] {
                f.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if f.windows(2).any(|w| w[0] == w[1]) || c.is_zero() {
            return;
        }
        let c = if sign < 0 { -c } else { c.clone() };
        add_scaled(&mut self.terms, &[(f, Rational::one())].into(), &c);
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &SparseVec<Wedge> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &ChainElement, c: &Rational) {
        assert_eq!(self.arity, other.arity);
        add_scaled(&mut self.terms, &other.terms, c);
    }

    pub fn scale(&self, c: &Rational) -> ChainElement {
        let mut out = ChainElement::zero(self.arity);
        out.add_scaled(self, c);
        out
    }

    pub fn degree(&self) -> Option<i32> {
        self.terms
            .keys()
            .next()
            .map(|w| w.iter().map(|b| b.0).sum())
    }
}

/// One homology block.
#[derive(Debug, Clone, Serialize)]
pub struct HomologyRow {
    pub part: Part,
    pub degree: i32,
    pub weight: Option<String>,
    pub h1: usize,
    pub h2: usize,
    pub representatives: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct HomologyBlock {
    pub degree: i32,
    pub weight: Option<WeightVector>,
    pub h1: usize,
    pub h2: usize,
    /// Dimension of `ker d1` on the degree-`d` part of `n^n`.
    pub cycles: usize,
    /// Rank of `d2` into the degree-`d` part of `n^n`.
    pub boundaries: usize,
    /// Rank of `d1` onto the degree-`d` part of `n`.
    pub d1_rank: usize,
    pub representatives: Vec<ChainElement>,
}

/// Outcome of the four cycle checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub is_cycle: bool,
    pub not_boundary: bool,
    pub weight: Option<WeightVector>,
    pub weight_matches: bool,
    /// Negative simple root vectors of `g_0` that move the class off the
    /// boundaries (empty iff the class is lowest).
    pub not_lowest_for: Vec<String>,
}

impl CycleCheck {
    pub fn passed(&self) -> bool {
        self.is_cycle && self.not_boundary && self.weight_matches && self.not_lowest_for.is_empty()
    }
}

type BracketTable = HashMap<(BasisIdx, BasisIdx), Vec<(BasisIdx, Rational)>>;

/// A weight block: weight, arity-2 and arity-3 wedges, dim of that weight space of n.
type WeightJob = (Vec<i64>, Vec<Wedge>, Vec<Wedge>, usize);

/// A graded part of an algebra with its chain maps.
pub struct Complex<'a> {
    spec: &'a AlgebraSpec,
    part: Part,
    basis: GradedBasis,
    brackets: RwLock<BracketTable>,
}

impl<'a> Complex<'a> {
    /// Blocks up to `|degree| = maxdeg`.
    pub fn new(spec: &'a AlgebraSpec, part: Part, maxdeg: i32) -> Result<Self> {
        let basis = match part {
            Part::GPlus | Part::GMinus => spec.graded_part(part.sign(), maxdeg)?,
            Part::NPlus | Part::NMinus => spec.nilpotent_part(part.sign(), maxdeg)?,
        };
        Ok(Complex {
            spec,
            part,
            basis,
            brackets: RwLock::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        self.spec
    }

    pub fn part(&self) -> Part {
        self.part
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn element(&self, b: BasisIdx) -> Result<&Element> {
        self.basis
            .block(b.0)
            .and_then(|blk| blk.elements.get(b.1))
            .ok_or_else(|| Error::NotInBasis(format!("index {b:?}")))
    }

    fn basis_weight(&self, b: BasisIdx) -> &WeightVector {
        &self.basis.blocks[&b.0].weights[b.1]
    }

    /// Coordinates of a homogeneous element of the part.
    pub fn coords(&self, e: &Element) -> Result<Vec<(BasisIdx, Rational)>> {
        if e.is_zero() {
            return Ok(Vec::new());
        }
        let d = self.spec.degree(e)?;
        let blk = self.basis.block(d).ok_or_else(|| Error::CutoffExceeded {
            what: "degree",
            value: i64::from(d),
            limit: i64::from(self.max_abs_degree()),
        })?;
        Ok(blk
            .coordinates(e)?
            .into_iter()
            .map(|(i, c)| ((d, i), c))
            .collect())
    }

    fn max_abs_degree(&self) -> i32 {
        self.basis.blocks.keys().map(|d| d.abs()).max().unwrap_or(0)
    }

    fn bracket_idx(&self, a: BasisIdx, b: BasisIdx) -> Result<Vec<(BasisIdx, Rational)>> {
        if let Some(v) = self.brackets.read().expect("bracket cache").get(&(a, b)) {
            return Ok(v.clone());
        }
        let e = self.spec.bracket(self.element(a)?, self.element(b)?)?;
        let v = self.coords(&e)?;
        self.brackets
            .write()
            .expect("bracket cache")
            .insert((a, b), v.clone());
        Ok(v)
    }

    /// Expands `sum c * x ^ y` over element pairs.
    pub fn chain2(&self, terms: &[(Rational, Element, Element)]) -> Result<ChainElement> {
        let mut out = ChainElement::zero(2);
        for (c, x, y) in terms {
            for (i, a) in self.coords(x)? {
                for (j, b) in self.coords(y)? {
                    out.add_wedge(&[i, j], &(c * &a * &b));
                }
            }
        }
        Ok(out)
    }

    /// `d1(x ^ y) = [x, y]`
    pub fn d1(&self, c: &ChainElement) -> Result<SparseVec<BasisIdx>> {
        assert_eq!(c.arity, 2);
        let mut out = SparseVec::new();
        for (w, k) in &c.terms {
            for (b, x) in self.bracket_idx(w[0], w[1])? {
                add_scaled(&mut out, &[(b, x)].into(), k);
            }
        }
        Ok(out)
    }

    /// `d2(x ^ y ^ z) = [x, y] ^ z + [y, z] ^ x + [z, x] ^ y`
    pub fn d2(&self, c: &ChainElement) -> Result<ChainElement> {
        assert_eq!(c.arity, 3);
        let mut out = ChainElement::zero(2);
        for (w, k) in &c.terms {
            let (x, y, z) = (w[0], w[1], w[2]);
            for (u, v, rest) in [(x, y, z), (y, z, x), (z, x, y)] {
                for (b, s) in self.bracket_idx(u, v)? {
                    out.add_wedge(&[b, rest], &(k * &s));
                }
            }
        }
        Ok(out)
    }

    /// `rho(z)(x ^ y) = [z, x] ^ y + x ^ [z, y]` for `z` outside the part.
    pub fn act(&self, z: &Element, c: &ChainElement) -> Result<ChainElement> {
        let mut out = ChainElement::zero(c.arity);
        for (w, k) in &c.terms {
            for pos in 0..w.len() {
                let img = self.spec.bracket(z, self.element(w[pos])?)?;
                for (b, s) in self.coords(&img)? {
                    let mut f = w.clone();
                    f[pos] = b;
                    out.add_wedge(&f, &(k * &s));
                }
            }
        }
        Ok(out)
    }

    /// Torus weight of a chain, from `ad` of the torus on every factor.
    pub fn chain_weight(&self, c: &ChainElement) -> Result<WeightVector> {
        let mut out: Option<WeightVector> = None;
        for w in c.terms.keys() {
            let mut s = WeightVector::zero(self.spec.torus_rank());
            for b in w {
                s = s.add(&self.spec.torus_weight(self.element(*b)?)?);
            }
            if out.as_ref().is_some_and(|o| *o != s) {
                return Err(Error::NotEigenvector {
                    element: self.format_chain(c),
                    torus: "terms of different weight".into(),
                });
            }
            out = Some(s);
        }
        Ok(out.unwrap_or_else(|| WeightVector::zero(self.spec.torus_rank())))
    }

    fn all_indices(&self) -> Vec<BasisIdx> {
        self.basis
            .blocks
            .iter()
            .flat_map(|(d, b)| (0..b.dim()).map(move |i| (*d, i)))
            .collect()
    }

    /// Sorted `arity`-tuples of total degree `degree`.
    pub fn wedge_basis(&self, arity: usize, degree: i32) -> Vec<Wedge> {
        let all = self.all_indices();
        let target = degree.abs();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(
            all: &[BasisIdx],
            start: usize,
            left: usize,
            rem: i32,
            cur: &mut Wedge,
            out: &mut Vec<Wedge>,
        ) {
            if left == 0 {
                if rem == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for k in start..all.len() {
                let d = all[k].0.abs();
                if d > rem {
                    continue;
                }
                cur.push(all[k]);
                go(all, k + 1, left - 1, rem - d, cur, out);
                cur.pop();
            }
        }
        go(&all, 0, arity, target, &mut cur, &mut out);
        out
    }

    fn wedge_weight(&self, w: &[BasisIdx]) -> WeightVector {
        w.iter()
            .fold(WeightVector::zero(self.spec.torus_rank()), |s, b| {
                s.add(self.basis_weight(*b))
            })
    }

    fn by_weight(&self, ws: Vec<Wedge>) -> BTreeMap<Vec<i64>, Vec<Wedge>> {
        let mut m: BTreeMap<Vec<i64>, Vec<Wedge>> = BTreeMap::new();
        for w in ws {
            m.entry(self.wedge_weight(&w).0).or_default().push(w);
        }
        m
    }

    /// The span of `d2` images of degree `degree` (and weight, if given).
    pub fn boundaries(&self, degree: i32, weight: Option<&WeightVector>) -> Result<Echelon<Wedge>> {
        let mut ech = Echelon::new(false);
        for t in self.wedge_basis(3, degree) {
            if weight.is_some_and(|w| self.wedge_weight(&t) != *w) {
                continue;
            }
            let b = self.d2(&ChainElement::wedge(&t, Rational::one()))?;
            if !b.is_zero() {
                ech.insert(&b.terms);
            }
        }
        Ok(ech)
    }

    fn block_for(
        &self,
        degree: i32,
        weight: Option<WeightVector>,
        pairs: &[Wedge],
        triples: &[Wedge],
        singles: usize,
    ) -> Result<HomologyBlock> {
        let mut k = Echelon::new(true);
        let mut kernel = Vec::new();
        for p in pairs {
            let img = self.d1(&ChainElement::wedge(p, Rational::one()))?;
            if let Inserted::Dependent(comb) = k.insert(&img) {
                let mut v: SparseVec<Wedge> = [(p.clone(), Rational::one())].into();
                for (j, c) in comb {
                    add_scaled(&mut v, &[(pairs[j].clone(), Rational::one())].into(), &-c);
                }
                kernel.push(v);
            }
        }
        let d1_rank = k.rank();
        let mut b = Echelon::new(false);
        for t in triples {
            let img = self.d2(&ChainElement::wedge(t, Rational::one()))?;
            if !img.is_zero() {
                b.insert(&img.terms);
            }
        }
        let boundaries = b.rank();
        let mut reps = Vec::new();
        for v in &kernel {
            if let Inserted::Pivot(_) = b.insert(v) {
                reps.push(ChainElement::from_terms(2, v.clone()));
            }
        }
        Ok(HomologyBlock {
            degree,
            weight,
            h1: singles - d1_rank,
            h2: kernel.len() - boundaries,
            cycles: kernel.len(),
            boundaries,
            d1_rank,
            representatives: reps,
        })
    }

    /// H1 and H2 in one degree, split by torus weight (blocks run in
    /// parallel). Returns the per-weight blocks in weight order.
    pub fn homology_by_weight(&self, degree: i32) -> Result<Vec<HomologyBlock>> {
        let pairs = self.by_weight(self.wedge_basis(2, degree));
        let mut triples = self.by_weight(self.wedge_basis(3, degree));
        let mut singles: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        if let Some(blk) = self.basis.block(degree) {
            for w in &blk.weights {
                *singles.entry(w.0.clone()).or_insert(0) += 1;
            }
        }
        let mut keys: Vec<Vec<i64>> = pairs.keys().chain(singles.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        let jobs: Vec<WeightJob> = keys
            .into_iter()
            .map(|w| {
                let p = pairs.get(&w).cloned().unwrap_or_default();
                let t = triples.remove(&w).unwrap_or_default();
                let s = singles.get(&w).copied().unwrap_or(0);
                (w, p, t, s)
            })
            .collect();
        jobs.into_par_iter()
            .map(|(w, p, t, s)| self.block_for(degree, Some(WeightVector(w)), &p, &t, s))
            .collect()
    }

    /// H1 and H2 of the whole degree block (sum over weights).
    pub fn homology(&self, degree: i32) -> Result<HomologyBlock> {
        let blocks = self.homology_by_weight(degree)?;
        let mut out = HomologyBlock {
            degree,
            weight: None,
            h1: 0,
            h2: 0,
            cycles: 0,
            boundaries: 0,
            d1_rank: 0,
            representatives: Vec::new(),
        };
        for b in blocks {
            out.h1 += b.h1;
            out.h2 += b.h2;
            out.cycles += b.cycles;
            out.boundaries += b.boundaries;
            out.d1_rank += b.d1_rank;
            out.representatives.extend(b.representatives);
        }
        Ok(out)
    }

    /// Basis of `H1` in one degree: degree-`d` basis elements independent
    /// modulo `[n, n]`.
    pub fn h1_generators(&self, degree: i32) -> Result<Vec<Element>> {
        let mut ech = Echelon::new(false);
        for p in self.wedge_basis(2, degree) {
            let img = self.d1(&ChainElement::wedge(&p, Rational::one()))?;
            if !img.is_empty() {
                ech.insert(&img);
            }
        }
        let mut out = Vec::new();
        if let Some(blk) = self.basis.block(degree) {
            for (i, e) in blk.elements.iter().enumerate() {
                if let Inserted::Pivot(_) = ech.insert(&[((degree, i), Rational::one())].into()) {
                    out.push(e.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn rows(&self, degree: i32) -> Result<Vec<HomologyRow>> {
        Ok(self
            .homology_by_weight(degree)?
            .into_iter()
            .filter(|b| b.h1 > 0 || b.h2 > 0)
            .map(|b| HomologyRow {
                part: self.part,
                degree,
                weight: b.weight.as_ref().map(|w| w.to_string()),
                h1: b.h1,
                h2: b.h2,
                representatives: b
                    .representatives
                    .iter()
                    .map(|c| self.format_chain(c))
                    .collect(),
            })
            .collect())
    }

    /// The negative simple root vectors of `g_0`, by name.
    pub fn lowering_operators(&self) -> Result<Vec<(String, Element)>> {
        let mut out = Vec::new();
        for name in self.spec.nilpotent_generators(Sign::Minus) {
            let e = self.spec.generator(&name)?;
            if self.spec.degree(&e)? == 0 {
                out.push((name, e));
            }
        }
        Ok(out)
    }

    /// Checks (a) cycle, (b) nonzero class, (c) weight, (d) lowest weight.
    pub fn check_cycle(&self, c: &ChainElement, expected: &WeightVector) -> Result<CycleCheck> {
        let is_cycle = self.d1(c)?.is_empty();
        let weight = self.chain_weight(c).ok();
        let degree = c.degree().unwrap_or(0);
        let bnd = self.boundaries(degree, weight.as_ref())?;
        let not_boundary = !c.is_zero() && !bnd.contains(&c.terms);
        let mut not_lowest_for = Vec::new();
        for (name, z) in self.lowering_operators()? {
            let moved = self.act(&z, c)?;
            if moved.is_zero() {
                continue;
            }
            let w = self.chain_weight(&moved).ok();
            if !self.boundaries(degree, w.as_ref())?.contains(&moved.terms) {
                not_lowest_for.push(name);
            }
        }
        Ok(CycleCheck {
            is_cycle,
            not_boundary,
            weight_matches: weight.as_ref() == Some(expected),
            weight,
            not_lowest_for,
        })
    }

    /// Combinations `sum a_k parts_k` that are cycles (a basis of them).
    pub fn cycle_combinations(&self, parts: &[ChainElement]) -> Result<Vec<Vec<Rational>>> {
        let mut ech = Echelon::new(true);
        let mut out = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            if let Inserted::Dependent(comb) = ech.insert(&self.d1(p)?) {
                let mut v = vec![Rational::zero(); parts.len()];
                v[i] = Rational::one();
                for (j, c) in comb {
                    v[j] = -c;
                }
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn format_chain(&self, c: &ChainElement) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, x)) in c.terms.iter().rev().enumerate() {
            let neg = x.is_negative();
            let abs = x.abs();
            s.push_str(match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let factors: Vec<String> = w
                .iter()
                .map(|b| {
                    let t = self.element(*b).map(|e| e.to_string()).unwrap_or_default();
                    if t.contains(' ') {
                        format!("({t})")
                    } else {
                        t
                    }
                })
                .collect();
            if abs.is_one() {
                s.push_str(&factors.join(" ^ "));
            } else {
                s.push_str(&format!("{abs}*({})", factors.join(" ^ ")));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_algebra, make_algebra_with, Limits};
    use crate::scalar::rat;

    #[test]
    fn wedge_normalization() {
        let c = ChainElement::wedge(&[(2, 0), (1, 3)], rat(1, 1));
        assert_eq!(c.terms().get(&vec![(1, 3), (2, 0)]), Some(&rat(-1, 1)));
        assert!(ChainElement::wedge(&[(1, 0), (1, 0)], rat(1, 1)).is_zero());
        let t = ChainElement::wedge(&[(1, 2), (1, 0), (1, 1)], rat(1, 1));
        assert_eq!(
            t.terms().get(&vec![(1, 0), (1, 1), (1, 2)]),
            Some(&rat(1, 1))
        );
    }

    #[test]
    fn witt_degree_seven() {
        let l = Limits {
            max_degree: 7,
            ..Limits::default()
        };
        let w = make_algebra_with("witt".parse().unwrap(), l).unwrap();
        let cx = Complex::new(&w, Part::NPlus, 7).unwrap();
        let b = cx.homology(7).unwrap();
        assert_eq!(b.cycles, 2);
        assert_eq!(b.boundaries, 1);
        assert_eq!(b.h2, 1);
        let h1: Vec<String> = (1..=3)
            .flat_map(|d| cx.h1_generators(d).unwrap())
            .map(|e| e.to_string())
            .collect();
        assert_eq!(h1, vec!["e1", "e2"]);
    }

    #[test]
    fn d1_d2_vanishes() {
        let v = make_algebra("vect:2".parse().unwrap()).unwrap();
        let cx = Complex::new(&v, Part::GPlus, 4).unwrap();
        for t in cx.wedge_basis(3, 4).into_iter().step_by(7) {
            let b = cx.d2(&ChainElement::wedge(&t, rat(1, 1))).unwrap();
            assert!(cx.d1(&b).unwrap().is_empty());
        }
    }

    #[test]
    fn vect2_generators() {
        let v = make_algebra("vect:2".parse().unwrap()).unwrap();
        let cx = Complex::new(&v, Part::GPlus, 3).unwrap();
        // g1 = quadratic coefficients (3) times two derivations
        assert_eq!(cx.basis().dims()[&1], 6);
        assert_eq!(cx.h1_generators(1).unwrap().len(), 6);
        assert!(cx.h1_generators(2).unwrap().is_empty());
        assert!(cx.h1_generators(3).unwrap().is_empty());
    }
}
