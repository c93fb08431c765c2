//! Runs relation families and the structural checks, producing records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    make_algebra, make_algebra_with, make_witt_laurent, AlgebraKind, AlgebraSpec, Element, Limits,
    MonoKey, Sign,
};
use crate::error::{Error, Result};
use crate::freelie::{assoc_bracket, quotient_dims, symbol, AssocElem, HallBasis};
use crate::homology::{ChainElement, Complex, HomologyRow, Part};
use crate::linalg::{add_scaled, Echelon, Inserted};
use crate::relexpr::{
    relation_families, serre_family, Expected, Relation, RelationExpr, RelationFamily,
};
use crate::scalar::{rat, Rational};
use crate::tables::{table_for, verify_table};

pub const ENGINE_VERSION: &str = concat!("liedefine ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    VerifiedAfterSignRepair,
    Failed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::VerifiedAfterSignRepair => "verified-after-sign-repair",
            Status::Failed => "failed",
        })
    }
}

/// One checked statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub suite: String,
    pub family: String,
    pub relation: String,
    pub degree: Option<i32>,
    pub weight: Option<String>,
    pub status: Status,
    /// The nonzero residue (or mismatch) behind a failure or a repair.
    pub witness: Option<String>,
    pub repair: Option<String>,
    pub note: Option<String>,
}

impl Record {
    fn new(suite: &str, family: &str, relation: impl Into<String>) -> Self {
        Record {
            suite: suite.to_string(),
            family: family.to_string(),
            relation: relation.into(),
            degree: None,
            weight: None,
            status: Status::Verified,
            witness: None,
            repair: None,
            note: None,
        }
    }

    fn check(mut self, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if !ok {
            self.status = Status::Failed;
            self.witness = Some(witness());
        }
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    fn at(mut self, degree: i32) -> Self {
        self.degree = Some(degree);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub engine: String,
    pub algebra: String,
    pub config: BTreeMap<String, String>,
    pub records: Vec<Record>,
    pub homology: Vec<HomologyRow>,
}

impl Report {
    pub fn new(algebra: &str, config: BTreeMap<String, String>) -> Self {
        Report {
            engine: ENGINE_VERSION.to_string(),
            algebra: algebra.to_string(),
            config,
            records: Vec::new(),
            homology: Vec::new(),
        }
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\nalgebra: {}\n", self.engine, self.algebra);
        for (k, v) in &self.config {
            s.push_str(&format!("{k}: {v}\n"));
        }
        s.push('\n');
        for r in &self.records {
            s.push_str(&format!(
                "{:<27} {:<12} {:<28} {}",
                r.status.to_string(),
                r.suite,
                r.family,
                r.relation
            ));
            if let Some(d) = r.degree {
                s.push_str(&format!("  [deg {d}"));
                if let Some(w) = &r.weight {
                    s.push_str(&format!(", wt {w}"));
                }
                s.push(']');
            }
            s.push('\n');
            for (label, v) in [
                ("witness", &r.witness),
                ("repair", &r.repair),
                ("note", &r.note),
            ] {
                if let Some(v) = v {
                    s.push_str(&format!("    {label}: {v}\n"));
                }
            }
        }
        if !self.homology.is_empty() {
            s.push_str("\nhomology\n");
            for h in &self.homology {
                s.push_str(&format!(
                    "  {} deg {} wt {}: h1 = {}, h2 = {}\n",
                    h.part,
                    h.degree,
                    h.weight.as_deref().unwrap_or("-"),
                    h.h1,
                    h.h2
                ));
                for r in &h.representatives {
                    s.push_str(&format!("    {r}\n"));
                }
            }
        }
        s.push_str(&format!(
            "\n{} verified, {} verified after sign repair, {} failed\n",
            self.count(Status::Verified),
            self.count(Status::VerifiedAfterSignRepair),
            self.count(Status::Failed)
        ));
        s
    }
}

enum Outcome {
    Holds(Option<String>),
    Fails(String),
}

fn leading(e: &Element) -> Option<(MonoKey, Rational)> {
    e.to_sparse().into_iter().next_back()
}

fn evaluate(rel: &Relation, spec: &AlgebraSpec) -> Outcome {
    let run = || -> Result<Outcome> {
        match &rel.expected {
            Expected::MultipleOf(r) => {
                let lhs = rel.lhs.eval(spec)?;
                let rhs = r.eval(spec)?;
                let Some((k, c)) = leading(&rhs) else {
                    return Ok(Outcome::Fails(format!("reference value {r} is zero")));
                };
                let lam = lhs
                    .to_sparse()
                    .get(&k)
                    .cloned()
                    .unwrap_or_else(Rational::zero)
                    / c;
                let res = lhs.sub(&rhs.scale(&lam))?;
                Ok(if res.is_zero() {
                    Outcome::Holds(Some(format!(
                        "lhs = {lam} * ({r}) = {}",
                        spec.format_element(&lhs)
                    )))
                } else {
                    Outcome::Fails(spec.format_element(&lhs))
                })
            }
            _ => {
                let res = rel.residue_expr().eval(spec)?;
                Ok(if res.is_zero() {
                    Outcome::Holds(None)
                } else {
                    Outcome::Fails(spec.format_element(&res))
                })
            }
        }
    };
    run().unwrap_or_else(|e| Outcome::Fails(format!("cannot evaluate: {e}")))
}

fn grading(rel: &Relation, spec: &AlgebraSpec) -> (Option<i32>, Option<String>) {
    match rel.residue_expr().grading(spec) {
        Ok((d, w)) => (Some(d), (w.rank() > 0).then(|| w.to_string())),
        Err(_) => (None, None),
    }
}

/// Verifies one relation; the swapped reading is tried only for
/// superscript-ambiguous families.
pub fn verify_relation(
    suite: &str,
    family: &RelationFamily,
    rel: &Relation,
    spec: &AlgebraSpec,
) -> Record {
    let mut rec = Record::new(suite, &family.id, rel.to_string());
    let (mut d, mut w) = grading(rel, spec);
    match evaluate(rel, spec) {
        Outcome::Holds(note) => rec.note = note,
        Outcome::Fails(witness) => {
            rec.status = Status::Failed;
            rec.witness = Some(witness);
            if family.superscript_ambiguous {
                let swapped = rel.swap_superscripts();
                match evaluate(&swapped, spec) {
                    Outcome::Holds(note) => {
                        rec.status = Status::VerifiedAfterSignRepair;
                        rec.repair = Some(format!("holds with superscripts swapped: {swapped}"));
                        rec.note = note;
                        if d.is_none() {
                            (d, w) = grading(&swapped, spec);
                        }
                    }
                    Outcome::Fails(w2) => {
                        rec.repair = Some(format!("swapped reading also fails, residue {w2}"));
                    }
                }
            }
        }
    }
    rec.degree = d;
    rec.weight = w;
    rec
}

pub fn verify_family(suite: &str, family: &RelationFamily, spec: &AlgebraSpec) -> Vec<Record> {
    family
        .relations
        .par_iter()
        .map(|r| verify_relation(suite, family, r, spec))
        .collect()
}

/// The transcribed relation families of the algebra (for the Witt algebra
/// also in the Laurent-field realization).
pub fn relations_suite(spec: &AlgebraSpec) -> Vec<Record> {
    let mut out = Vec::new();
    for fam in relation_families(spec.kind()) {
        out.extend(verify_family("relations", &fam, spec));
        if spec.kind() == AlgebraKind::Witt {
            let laurent = make_witt_laurent();
            let mut f = fam.clone();
            f.id = format!("{}@laurent", fam.id);
            out.extend(verify_family("relations", &f, &laurent));
        }
    }
    out
}

pub fn serre_suite(spec: &AlgebraSpec) -> Vec<Record> {
    serre_family(spec).map_or_else(Vec::new, |f| verify_family("serre", &f, spec))
}

/// Echelonized span per degree.
type Spans = BTreeMap<i32, Echelon<MonoKey>>;

fn span_by_degree(
    spec: &AlgebraSpec,
    gens: &[Element],
    seeds: Vec<Element>,
    dmax: i32,
    closure: bool,
) -> Result<(Spans, Vec<Element>)> {
    let mut ech: BTreeMap<i32, Echelon<MonoKey>> = BTreeMap::new();
    let mut basis = Vec::new();
    let mut frontier = Vec::new();
    for e in seeds {
        if e.is_zero() {
            continue;
        }
        let d = spec.degree(&e)?;
        if d.abs() > dmax {
            continue;
        }
        if let Inserted::Pivot(_) = ech.entry(d).or_default().insert(&e.to_sparse()) {
            basis.push(e.clone());
            frontier.push(e);
        }
    }
    while closure && !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = spec.bracket(g, x)?;
                if y.is_zero() {
                    continue;
                }
                let d = spec.degree(&y)?;
                if d.abs() > dmax {
                    continue;
                }
                if let Inserted::Pivot(_) = ech.entry(d).or_default().insert(&y.to_sparse()) {
                    basis.push(y.clone());
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok((ech, basis))
}

fn generator_elements(spec: &AlgebraSpec, sign: Sign) -> Result<Vec<(String, Element)>> {
    spec.nilpotent_generators(sign)
        .into_iter()
        .map(|n| spec.generator(&n).map(|e| (n, e)))
        .collect()
}

/// Per-degree `(span of bracket words, enumerated dimension)`.
pub fn generation_check(
    spec: &AlgebraSpec,
    sign: Sign,
    maxdeg: i32,
) -> Result<BTreeMap<i32, (usize, usize)>> {
    if maxdeg > spec.limits().max_degree {
        return Err(Error::CutoffExceeded {
            what: "degree",
            value: i64::from(maxdeg),
            limit: i64::from(spec.limits().max_degree),
        });
    }
    let gens: Vec<Element> = generator_elements(spec, sign)?
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    let (ech, _) = span_by_degree(spec, &gens, gens.clone(), maxdeg, true)?;
    let expected = spec.nilpotent_part(sign, maxdeg)?.dims();
    let mut out = BTreeMap::new();
    for (d, n) in expected {
        let got = ech.get(&d).map_or(0, |e| e.rank());
        out.insert(d, (got, n));
    }
    for (d, e) in &ech {
        out.entry(*d).or_insert((e.rank(), 0));
    }
    Ok(out)
}

pub fn generation_suite(spec: &AlgebraSpec, maxdeg: i32) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let fam = format!("N{}", sign.symbol());
        for (d, (got, want)) in generation_check(spec, sign, maxdeg)? {
            out.push(
                Record::new(
                    "generation",
                    &fam,
                    format!("span of bracket words in degree {d}"),
                )
                .at(d)
                .check(got == want, || format!("span {got}, component {want}"))
                .note(format!("dim {got}")),
            );
        }
    }
    Ok(out)
}

/// Minimal-length bracket words (in the free Lie algebra on the symbols)
/// for the elements of the subalgebra they generate, up to `maxlen`.
struct WordMap<'a> {
    spec: &'a AlgebraSpec,
    symbols: &'a [(String, Element)],
    maxlen: usize,
    dmax: i32,
    words: BTreeMap<i32, (Echelon<MonoKey>, Vec<AssocElem>)>,
    span: BTreeMap<i32, Echelon<MonoKey>>,
}

impl<'a> WordMap<'a> {
    fn new(
        spec: &'a AlgebraSpec,
        symbols: &'a [(String, Element)],
        maxlen: usize,
        dmax: i32,
        span: BTreeMap<i32, Echelon<MonoKey>>,
    ) -> Result<Self> {
        let mut wm = WordMap {
            spec,
            symbols,
            maxlen,
            dmax,
            words: BTreeMap::new(),
            span,
        };
        let mut frontier = Vec::new();
        for (i, (_, e)) in symbols.iter().enumerate() {
            wm.insert(e, symbol(i as u8), &mut frontier)?;
        }
        for _ in 1..maxlen {
            let mut next = Vec::new();
            for (x, w) in &frontier {
                for (i, (_, g)) in symbols.iter().enumerate() {
                    let y = spec.bracket(g, x)?;
                    wm.insert(&y, assoc_bracket(&symbol(i as u8), w, maxlen), &mut next)?;
                }
            }
            frontier = next;
        }
        Ok(wm)
    }

    fn insert(
        &mut self,
        e: &Element,
        w: AssocElem,
        frontier: &mut Vec<(Element, AssocElem)>,
    ) -> Result<()> {
        if e.is_zero() {
            return Ok(());
        }
        let (ech, frees) = self
            .words
            .entry(self.spec.degree(e)?)
            .or_insert_with(|| (Echelon::new(true), Vec::new()));
        let pivot = matches!(ech.insert(&e.to_sparse()), Inserted::Pivot(_));
        frees.push(w.clone());
        if pivot {
            frontier.push((e.clone(), w));
        }
        Ok(())
    }

    /// The free image of `e`; components longer than `maxlen` vanish.
    fn free(&self, e: &Element) -> Result<AssocElem> {
        let mut parts: BTreeMap<i32, crate::linalg::SparseVec<MonoKey>> = BTreeMap::new();
        for (k, c) in e.to_sparse() {
            parts
                .entry(self.spec.key_degree(&k))
                .or_default()
                .insert(k, c);
        }
        let mut out = AssocElem::new();
        for (d, v) in parts {
            if let Some(comb) = self.words.get(&d).and_then(|(ech, _)| ech.express(&v)) {
                let frees = &self.words[&d].1;
                for (i, c) in comb {
                    add_scaled(&mut out, &frees[i], &c);
                }
            } else if d.abs() <= self.dmax && !self.span.get(&d).is_some_and(|s| s.contains(&v)) {
                return Err(Error::UnresolvedGenerator(self.spec.format_element(e)));
            }
        }
        Ok(out)
    }

    fn expr(&self, e: &RelationExpr) -> Result<AssocElem> {
        Ok(match e {
            RelationExpr::Gen(n) => match self.symbols.iter().position(|(s, _)| s == n) {
                Some(i) => symbol(i as u8),
                None => self.free(&self.spec.generator(n)?)?,
            },
            RelationExpr::Lit(t) => self.free(&self.spec.parse_element(t)?)?,
            RelationExpr::Bracket(a, b) => {
                assoc_bracket(&self.expr(a)?, &self.expr(b)?, self.maxlen)
            }
            RelationExpr::AdPow(a, k, b) => {
                let a = self.expr(a)?;
                let mut r = self.expr(b)?;
                for _ in 0..*k {
                    r = assoc_bracket(&a, &r, self.maxlen);
                }
                r
            }
            RelationExpr::LinComb(t) => {
                let mut acc = AssocElem::new();
                for (c, x) in t {
                    add_scaled(&mut acc, &self.expr(x)?, c);
                }
                acc
            }
        })
    }
}

/// One row of the defining-ness comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningRow {
    pub length: usize,
    pub degree: i32,
    pub free_quotient: usize,
    pub concrete: usize,
}

#[derive(Debug, Clone)]
pub struct DefiningTable {
    pub symbols: Vec<String>,
    pub imposed: Vec<String>,
    pub maxlen: usize,
    pub rows: Vec<DefiningRow>,
}

impl DefiningTable {
    pub fn matches(&self) -> bool {
        self.rows.iter().all(|r| r.free_quotient == r.concrete)
    }

    /// Dimensions by length (summed over degrees): (free quotient, concrete).
    pub fn by_length(&self) -> Vec<(usize, usize)> {
        let mut v = vec![(0, 0); self.maxlen];
        for r in &self.rows {
            v[r.length - 1].0 += r.free_quotient;
            v[r.length - 1].1 += r.concrete;
        }
        v
    }
}

/// The relations of the algebra in the reading that holds: the transcribed
/// families (superscript-ambiguous ones after repair), the Serre
/// relations, and the `H2(g_+)` table cycles read as relations. Relations failing in every reading are returned separately
/// and not imposed.
pub fn defining_relations(spec: &AlgebraSpec) -> (Vec<RelationFamily>, Vec<String>) {
    let mut fams = relation_families(spec.kind());
    fams.extend(serre_family(spec));
    let rows = table_for(spec.kind());
    if let Some(r) = rows.first() {
        fams.push(RelationFamily {
            id: r.table.clone(),
            algebra: spec.kind(),
            relations: rows.iter().map(|r| r.relation()).collect(),
            origin: "lowest cycles of H2(g+) read as relations".into(),
            superscript_ambiguous: false,
        });
    }
    let mut dropped = Vec::new();
    for f in &mut fams {
        let orig = std::mem::take(&mut f.relations);
        for r in orig {
            match verify_relation("defining", f, &r, spec).status {
                Status::Verified => f.relations.push(r),
                Status::VerifiedAfterSignRepair => f.relations.push(r.swap_superscripts()),
                Status::Failed => dropped.push(format!("{}: {r}", f.id)),
            }
        }
    }
    (fams, dropped)
}

/// Compares the free Lie algebra on the generators of `N_sign` modulo the
/// relations of `families` with the concrete algebra, by bracket length
/// up to `maxlen` and by degree.
///
/// Both sides are length-filtered: the concrete side uses the lower
/// central series `g^l` (spanned by bracket words of length `>= l`), the
/// free side the lowest-length parts of ideal elements.
pub fn defining_check(
    spec: &AlgebraSpec,
    sign: Sign,
    families: &[RelationFamily],
    maxlen: usize,
) -> Result<DefiningTable> {
    if maxlen > spec.limits().max_length {
        return Err(Error::CutoffExceeded {
            what: "length",
            value: maxlen as i64,
            limit: spec.limits().max_length as i64,
        });
    }
    let symbols = generator_elements(spec, sign)?;
    let degrees = symbols
        .iter()
        .map(|(_, e)| spec.degree(e))
        .collect::<Result<Vec<_>>>()?;
    let hall = HallBasis::new(
        symbols.iter().map(|(n, _)| n.clone()).collect(),
        degrees.clone(),
        maxlen,
    );
    let dmax = maxlen as i32 * degrees.iter().map(|d| d.abs()).max().unwrap_or(0);
    let gens: Vec<Element> = symbols.iter().map(|(_, e)| e.clone()).collect();
    let (mut prev, mut basis) = span_by_degree(spec, &gens, gens.clone(), dmax, true)?;
    let wm = WordMap::new(spec, &symbols, maxlen, dmax, prev.clone())?;
    let mut rels = Vec::new();
    let mut imposed = Vec::new();
    for f in families {
        for r in &f.relations {
            if matches!(r.expected, Expected::MultipleOf(_)) {
                continue;
            }
            if let Ok(a) = wm.expr(&r.residue_expr()) {
                imposed.push(format!("{}: {r}", f.id));
                rels.push(a);
            }
        }
    }
    let free = quotient_dims(&hall, &rels);

    let mut concrete: BTreeMap<(usize, i32), usize> = BTreeMap::new();
    for l in 1..=maxlen {
        let mut seeds = Vec::new();
        for x in &basis {
            for g in &gens {
                seeds.push(spec.bracket(g, x)?);
            }
        }
        let (next, nb) = span_by_degree(spec, &gens, seeds, dmax, false)?;
        for (d, e) in &prev {
            let below = next.get(d).map_or(0, |n| n.rank());
            if e.rank() > below {
                concrete.insert((l, *d), e.rank() - below);
            }
        }
        prev = next;
        basis = nb;
    }
    let keys: BTreeSet<(usize, i32)> = free
        .iter()
        .filter(|(_, v)| **v > 0)
        .map(|(k, _)| *k)
        .chain(concrete.keys().copied())
        .collect();
    let rows = keys
        .into_iter()
        .map(|(length, degree)| DefiningRow {
            length,
            degree,
            free_quotient: free.get(&(length, degree)).copied().unwrap_or(0),
            concrete: concrete.get(&(length, degree)).copied().unwrap_or(0),
        })
        .collect();
    Ok(DefiningTable {
        symbols: symbols.into_iter().map(|(n, _)| n).collect(),
        imposed,
        maxlen,
        rows,
    })
}

pub fn defining_suite(spec: &AlgebraSpec, maxlen: usize) -> Result<Vec<Record>> {
    let (fams, dropped) = defining_relations(spec);
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let t = defining_check(spec, sign, &fams, maxlen)?;
        let fam = format!("N{}", sign.symbol());
        for r in &t.rows {
            out.push(
                Record::new(
                    "defining",
                    &fam,
                    format!(
                        "length {} quotient over {{{}}}",
                        r.length,
                        t.symbols.join(", ")
                    ),
                )
                .at(r.degree)
                .check(r.free_quotient == r.concrete, || {
                    format!("free quotient {}, concrete {}", r.free_quotient, r.concrete)
                })
                .note(if dropped.is_empty() {
                    format!("dim {}; {} relations imposed", r.concrete, t.imposed.len())
                } else {
                    format!(
                        "dim {}; {} relations imposed; not imposed (false in every reading): {}",
                        r.concrete,
                        t.imposed.len(),
                        dropped.join("; ")
                    )
                }),
            );
        }
    }
    Ok(out)
}

/// The degree-7 geometry of `Lambda^2(n_+)` of the Witt algebra.
pub fn witt_dirty_check() -> Result<Vec<Record>> {
    let s = "witt-dirty";
    let limits = Limits {
        max_degree: 7,
        ..Limits::default()
    };
    let w = make_algebra_with(AlgebraKind::Witt, limits)?;
    let cx = Complex::new(&w, Part::NPlus, 7)?;
    let idx = |i: i32| (i, 0usize);
    let c2 = |terms: &[(i64, i32, i32)]| {
        let mut c = ChainElement::zero(2);
        for (k, a, b) in terms {
            c.add_scaled(
                &ChainElement::wedge(&[idx(*a), idx(*b)], rat(1, 1)),
                &rat(*k, 1),
            );
        }
        c
    };
    let block = cx.homology(7)?;
    let mut out = vec![Record::new(s, "degree-7", "dim of cycles in Lambda^2(n+)")
        .at(7)
        .check(block.cycles == 2, || format!("dimension {}", block.cycles))
        .note(format!("dim {}", block.cycles))];
    let bnd = cx.boundaries(7, None)?;
    for (text, chain) in [
        ("3*e1^e6 - 5*e2^e5", c2(&[(3, 1, 6), (-5, 2, 5)])),
        ("e2^e5 - 3*e3^e4", c2(&[(1, 2, 5), (-3, 3, 4)])),
    ] {
        let d1 = cx.d1(&chain)?;
        out.push(
            Record::new(s, "degree-7", format!("{text} is a cycle"))
                .at(7)
                .check(d1.is_empty(), || format!("d1 = {d1:?}")),
        );
        out.push(
            Record::new(
                s,
                "degree-7",
                format!("{text} is transversal to the boundaries"),
            )
            .at(7)
            .check(!bnd.contains(chain.terms()), || {
                "chain is a boundary".into()
            }),
        );
    }
    out.push(
        Record::new(s, "degree-7", "dim of boundaries from Lambda^3(n+)")
            .at(7)
            .check(block.boundaries == 1, || {
                format!("dimension {}", block.boundaries)
            }),
    );
    let b = cx.d2(&ChainElement::wedge(&[idx(1), idx(2), idx(4)], rat(1, 1)))?;
    let printed = c2(&[(1, 3, 4), (-3, 5, 2), (3, 6, 1)]);
    let mut rec = Record::new(s, "degree-7", "boundary of e1^e2^e4")
        .at(7)
        .note(format!("recomputed: {}", cx.format_chain(&b)));
    if b != printed {
        let mut diff = b.clone();
        diff.add_scaled(&printed, &rat(-1, 1));
        rec.note = Some(format!(
            "recomputed: {}; printed e3^e4 - 3*e5^e2 + 3*e6^e1 differs by {} (erratum in the print, not a failure)",
            cx.format_chain(&b),
            cx.format_chain(&diff)
        ));
    }
    out.push(rec);
    Ok(out)
}

/// The extra weight-zero cycle of `Lambda^2(g_{-1})` in `h(2n)`, compared
/// with `po(2n)`, plus the matching relations.
pub fn h_anomaly_check(n: usize) -> Result<Vec<Record>> {
    let s = "h-anomaly";
    let h = make_algebra(AlgebraKind::H(n))?;
    let po = make_algebra(AlgebraKind::Po(n))?;
    let chx = Complex::new(&h, Part::GMinus, 2)?;
    let cpo = Complex::new(&po, Part::GMinus, 2)?;
    let kh = chx.homology(-2)?.cycles;
    let kpo = cpo.homology(-2)?.cycles;
    let mut out = vec![Record::new(
        s,
        &format!("h({})", 2 * n),
        "ker d1 on Lambda^2(g-1) exceeds the po count by one",
    )
    .at(-2)
    .check(kh == kpo + 1, || format!("h: {kh}, po: {kpo}"))
    .note(format!("h: {kh}, po: {kpo}"))];
    let terms = |spec: &AlgebraSpec| -> Result<Vec<(Rational, Element, Element)>> {
        (1..=n)
            .map(|i| {
                Ok((
                    Rational::one(),
                    spec.parse_element(&format!("p{i}"))?,
                    spec.parse_element(&format!("q{i}"))?,
                ))
            })
            .collect()
    };
    let ch = chx.chain2(&terms(&h)?)?;
    let cp = cpo.chain2(&terms(&po)?)?;
    let text = (1..=n)
        .map(|i| format!("p{i} ^ q{i}"))
        .collect::<Vec<_>>()
        .join(" + ");
    let w = chx.chain_weight(&ch)?;
    out.push(
        Record::new(
            s,
            &format!("h({})", 2 * n),
            format!("{text} is a cycle in h"),
        )
        .at(-2)
        .check(chx.d1(&ch)?.is_empty() && w.is_zero(), || {
            format!("weight {w}")
        }),
    );
    let not_po_cycle = !cpo.d1(&cp)?.is_empty();
    out.push(
        Record::new(
            s,
            &format!("po({})", 2 * n),
            format!("{text} is not a cycle in po"),
        )
        .at(-2)
        .check(not_po_cycle, || "it is a cycle".into()),
    );
    for fam in relation_families(AlgebraKind::H(n)) {
        if fam.id == "nminus-weight-zero" {
            out.extend(verify_family(s, &fam, &h));
        }
    }
    Ok(out)
}

/// Where `H2(g_+)` is claimed to live in degree 2 only: no dirty relations
/// from 3 indeterminates on (5 for the contact series), and never for the
/// Hamiltonian and Poisson algebras.
fn concentrated_in_degree_two(kind: AlgebraKind) -> bool {
    match kind {
        AlgebraKind::Vect(n) | AlgebraKind::Svect(n) => n >= 3,
        AlgebraKind::K(n) => 2 * n + 1 >= 5,
        _ => false,
    }
}

/// `H1`, `H2` of `g_+` by degree, the degree-two oracle
/// `dim Lambda^2(g1) - dim g2`, and `H1` of `N_+`.
pub fn homology_suite(spec: &AlgebraSpec, maxdeg: i32) -> Result<(Vec<Record>, Vec<HomologyRow>)> {
    let s = "homology";
    let mut recs = Vec::new();
    let mut rows = Vec::new();
    let kind = spec.kind();
    if matches!(
        kind,
        AlgebraKind::Witt | AlgebraKind::Sl(_) | AlgebraKind::Sp(_)
    ) {
        let cx = Complex::new(spec, Part::NPlus, maxdeg)?;
        let mut gens = Vec::new();
        for d in 0..=maxdeg {
            gens.extend(cx.h1_generators(d)?.into_iter().map(|e| e.to_string()));
            rows.extend(cx.rows(d)?);
        }
        let want = spec.nilpotent_generators(Sign::Plus).len();
        recs.push(
            Record::new(s, "N+", "H1 is spanned by the generator classes")
                .check(gens.len() == want, || format!("H1 basis {gens:?}"))
                .note(gens.join(", ")),
        );
        return Ok((recs, rows));
    }
    let cx = Complex::new(spec, Part::GPlus, maxdeg)?;
    for d in 1..=maxdeg {
        let b = cx.homology(d)?;
        rows.extend(cx.rows(d)?);
        let gd = cx.basis().dims().get(&d).copied().unwrap_or(0);
        if d >= 2 {
            recs.push(
                Record::new(s, "g+", format!("d1 maps onto g{d}"))
                    .at(d)
                    .check(b.d1_rank == gd, || format!("rank {} of {gd}", b.d1_rank)),
            );
        }
        let mut r = Record::new(s, "g+", format!("H2 in degree {d}"))
            .at(d)
            .note(format!(
                "h1 = {}, h2 = {}, cycles {}, boundaries {}",
                b.h1, b.h2, b.cycles, b.boundaries
            ));
        if d == 2 {
            let g1 = cx.basis().dims().get(&1).copied().unwrap_or(0);
            let want = g1 * (g1 - 1) / 2 - gd;
            r = r.check(b.h2 == want, || {
                format!("h2 {} but dim Lambda^2(g1) - dim g2 = {want}", b.h2)
            });
        } else if d >= 3 && concentrated_in_degree_two(kind) {
            r = r.check(b.h2 == 0, || format!("h2 = {} outside degree 2", b.h2));
        }
        recs.push(r);
    }
    let np = Complex::new(spec, Part::NPlus, maxdeg.min(2))?;
    let mut gens = Vec::new();
    for d in 0..=maxdeg.min(2) {
        gens.extend(
            np.h1_generators(d)?
                .into_iter()
                .map(|e| spec.format_element(&e)),
        );
    }
    let want = spec.nilpotent_generators(Sign::Plus).len();
    recs.push(
        Record::new(s, "N+", "H1 is spanned by the generator classes")
            .check(gens.len() == want, || {
                format!("H1 basis {gens:?}, {want} generators")
            })
            .note(gens.join(", ")),
    );
    if let AlgebraKind::H(n) = kind {
        recs.extend(h_anomaly_check(n)?);
    }
    Ok((recs, rows))
}

pub fn tables_suite(spec: &AlgebraSpec) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for r in verify_table(spec)? {
        let c = &r.check;
        let mut bad = Vec::new();
        if !c.is_cycle {
            bad.push("not a cycle".to_string());
        }
        if !c.not_boundary {
            bad.push("a boundary".to_string());
        }
        if !c.weight_matches {
            bad.push(format!(
                "weight {} printed, {} computed",
                r.expected_weight,
                c.weight
                    .as_ref()
                    .map_or("inhomogeneous".into(), |w| w.to_string())
            ));
        }
        if !c.not_lowest_for.is_empty() {
            bad.push(format!(
                "not lowest: moved off the boundaries by {}",
                c.not_lowest_for.join(", ")
            ));
        }
        let mut rec = Record::new("tables", &r.table, format!("row {}: {}", r.number, r.chain));
        rec.weight = Some(r.expected_weight.to_string());
        rec = rec.check(bad.is_empty(), || bad.join("; "));
        if !r.cycle_combinations.is_empty() {
            let combos: Vec<String> = r
                .cycle_combinations
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" : ")
                })
                .collect();
            rec.note = Some(format!(
                "printed summands give a cycle for coefficients {}",
                combos.join(" or ")
            ));
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Relations,
    Serre,
    WittDirty,
    Generation,
    Defining,
    Homology,
    Tables,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Relations,
        Suite::Serre,
        Suite::WittDirty,
        Suite::Generation,
        Suite::Defining,
        Suite::Homology,
        Suite::Tables,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Serre => "serre",
            Suite::WittDirty => "witt-dirty",
            Suite::Generation => "generation",
            Suite::Defining => "defining",
            Suite::Homology => "homology",
            Suite::Tables => "tables",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("suite `{s}`")))
    }
}

/// Runs one suite. Suites that do not apply to the algebra produce nothing.
pub fn run_suite(
    suite: Suite,
    spec: &AlgebraSpec,
    maxdeg: i32,
    maxlen: usize,
) -> Result<(Vec<Record>, Vec<HomologyRow>)> {
    Ok(match suite {
        Suite::Relations => (relations_suite(spec), Vec::new()),
        Suite::Serre => (serre_suite(spec), Vec::new()),
        Suite::WittDirty if spec.kind() == AlgebraKind::Witt => (witt_dirty_check()?, Vec::new()),
        Suite::WittDirty => (Vec::new(), Vec::new()),
        Suite::Generation => (generation_suite(spec, maxdeg)?, Vec::new()),
        Suite::Defining => (defining_suite(spec, maxlen)?, Vec::new()),
        Suite::Homology => homology_suite(spec, maxdeg)?,
        Suite::Tables => (tables_suite(spec)?, Vec::new()),
    })
}

/// A single-coefficient perturbation of a verified relation.
#[derive(Debug, Clone)]
pub struct Mutation {
    pub algebra: AlgebraKind,
    pub family: RelationFamily,
    pub original: Relation,
    pub mutated: Relation,
}

/// All `c -> c + 1` perturbations of coefficients in relations that verify
/// (possibly after sign repair) on the given algebras.
pub fn mutations(algebras: &[AlgebraKind]) -> Result<Vec<Mutation>> {
    let mut out = Vec::new();
    for &kind in algebras {
        let spec = make_algebra(kind)?;
        let mut fams = relation_families(kind);
        fams.extend(serre_family(&spec));
        for fam in fams {
            for rel in &fam.relations {
                let rec = verify_relation("mutation", &fam, rel, &spec);
                if rec.status == Status::Failed {
                    continue;
                }
                for (i, c) in rel.coefficients().into_iter().enumerate() {
                    out.push(Mutation {
                        algebra: kind,
                        family: fam.clone(),
                        original: rel.clone(),
                        mutated: rel.with_coefficient(i, c + Rational::one()),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Runs a mutated relation; `true` if it is caught (a failed record).
pub fn mutation_caught(m: &Mutation) -> Result<(bool, Record)> {
    let spec = make_algebra(m.algebra)?;
    let rec = verify_relation("mutation", &m.family, &m.mutated, &spec);
    Ok((rec.status == Status::Failed, rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relexpr::standard_algebras;

    fn spec(s: &str) -> AlgebraSpec {
        make_algebra(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn witt_degree_zero_verifies() {
        let recs = relations_suite(&spec("witt"));
        assert!(recs
            .iter()
            .filter(|r| r.family.starts_with("witt-degree-zero"))
            .all(|r| r.status == Status::Verified));
    }

    #[test]
    fn corrupted_coefficient_fails_with_e5_witness() {
        let fam = &relation_families(AlgebraKind::Witt)[1];
        let rel = fam.relations[0].with_coefficient(1, rat(7, 1));
        let r = verify_relation("t", fam, &rel, &spec("witt"));
        assert_eq!(r.status, Status::Failed);
        assert!(r.witness.unwrap().ends_with("e5"));
    }

    #[test]
    fn cross_relation_repairs_for_vect3() {
        let recs = relations_suite(&spec("vect:3"));
        let r = recs
            .iter()
            .find(|r| r.relation.starts_with("[Y, X3+] ="))
            .unwrap();
        assert_eq!(r.status, Status::VerifiedAfterSignRepair);
        assert!(r.witness.is_some());
        let d = [(1, "x3^2*d1"), (2, "d3")];
        let v = spec("vect:3");
        let b = v
            .bracket(
                &v.parse_element(d[0].1).unwrap(),
                &v.parse_element(d[1].1).unwrap(),
            )
            .unwrap();
        assert_eq!(b.to_string(), "-2*x3*d1");
    }

    #[test]
    fn generation_examples() {
        let g = generation_check(&spec("vect:3"), Sign::Plus, 3).unwrap();
        assert_eq!(g[&1], (18, 18));
        let g = generation_check(&spec("vect:1"), Sign::Minus, 4).unwrap();
        assert_eq!(g.values().map(|v| v.0).sum::<usize>(), 1);
        let sv = generation_check(&spec("svect:3"), Sign::Plus, 2).unwrap();
        assert!(sv.values().all(|(a, b)| a == b));
    }

    #[test]
    fn defining_examples() {
        let sl = spec("sl:3");
        let t = defining_check(&sl, Sign::Plus, &defining_relations(&sl).0, 3).unwrap();
        assert_eq!(t.by_length(), vec![(2, 2), (1, 1), (0, 0)]);
        assert!(t.matches());
        // no relations: the free quotient is the free Lie algebra
        let t = defining_check(&sl, Sign::Plus, &[], 3).unwrap();
        assert_eq!(
            t.by_length().iter().map(|x| x.0).collect::<Vec<_>>(),
            vec![2, 1, 2]
        );
    }

    #[test]
    fn suites_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert!(standard_algebras().len() > 5);
    }
}
