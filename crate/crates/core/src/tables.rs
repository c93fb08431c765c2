//! Transcribed lowest-weight cycle tables of `H2(g_+)`, checked with
//! [`Complex::check_cycle`].

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::catalog::{AlgebraKind, AlgebraSpec};
use crate::error::Result;
use crate::homology::{ChainElement, Complex, CycleCheck, Part};
use crate::realize::WeightVector;
use crate::relexpr::{br, lin, lit, Relation};
use crate::scalar::{rat, Rational};

/// A wedge of two element literals with a coefficient.
pub type Term = (Rational, String, String);

#[derive(Debug, Clone)]
pub struct TableRow {
    pub table: String,
    pub number: usize,
    pub weight: WeightVector,
    /// Printed summands: coefficient and the (expanded) sum it multiplies.
    pub parts: Vec<(Rational, Vec<Term>)>,
}

#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub table: String,
    pub number: usize,
    pub chain: String,
    pub expected_weight: WeightVector,
    pub check: CycleCheck,
    /// Coefficient vectors (one per printed summand) giving cycles.
    pub cycle_combinations: Vec<Vec<Rational>>,
}

/// Monomial text from a list of variable names, e.g. `["q1","q1","q2"]`
/// gives `q1^2*q2`.
pub fn mono(vars: &[String]) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    for v in vars {
        if !counts.contains_key(v.as_str()) {
            order.push(v);
        }
        *counts.entry(v).or_insert(0) += 1;
    }
    order
        .iter()
        .map(|v| match counts[v] {
            1 => v.to_string(),
            k => format!("{v}^{k}"),
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn m(vars: &[&str]) -> String {
    mono(&vars.iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn eps(rank: usize, entries: &[(usize, i64)]) -> WeightVector {
    let mut w = vec![0; rank];
    for (i, c) in entries {
        w[i - 1] += c;
    }
    WeightVector(w)
}

fn row(
    table: &str,
    number: usize,
    weight: WeightVector,
    parts: Vec<(Rational, Vec<Term>)>,
) -> TableRow {
    TableRow {
        table: table.to_string(),
        number,
        weight,
        parts,
    }
}

fn one(a: String, b: String) -> Vec<Term> {
    vec![(rat(1, 1), a, b)]
}

/// Lowest weights and cycles of `H2(g_+)` for `h(2n)`, `n > 1`.
pub fn h_table(n: usize) -> Vec<TableRow> {
    let t = "h-gplus-h2";
    let q = |i: usize| format!("q{i}");
    let p = |i: usize| format!("p{i}");
    let ix = || 1..=n;
    let mut rows = vec![
        row(
            t,
            1,
            eps(n, &[(1, -5), (2, -1)]),
            vec![(
                rat(1, 1),
                one(m(&["q1", "q1", "q1"]), m(&["q1", "q1", "q2"])),
            )],
        ),
        row(
            t,
            2,
            eps(n, &[(1, -3), (2, -3)]),
            vec![
                (
                    rat(3, 1),
                    one(m(&["q1", "q2", "q2"]), m(&["q1", "q1", "q2"])),
                ),
                (
                    rat(-1, 1),
                    one(m(&["q2", "q2", "q2"]), m(&["q1", "q1", "q1"])),
                ),
            ],
        ),
    ];
    let s1 = ix()
        .map(|i| {
            (
                rat(1, 1),
                mono(&["q1".into(), "q1".into(), q(i)]),
                mono(&["q2".into(), "q2".into(), p(i)]),
            )
        })
        .collect();
    let s2 = ix()
        .map(|i| {
            (
                rat(1, 1),
                mono(&["q1".into(), "q1".into(), p(i)]),
                mono(&["q2".into(), "q2".into(), q(i)]),
            )
        })
        .collect();
    let s3 = ix()
        .map(|i| {
            (
                rat(1, 1),
                mono(&["q1".into(), "q2".into(), q(i)]),
                mono(&["q1".into(), "q2".into(), p(i)]),
            )
        })
        .collect();
    rows.push(row(
        t,
        3,
        eps(n, &[(1, -2), (2, -2)]),
        vec![(rat(-1, 1), s1), (rat(1, 1), s2), (rat(2, 1), s3)],
    ));
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for i in ix() {
        for j in ix() {
            // the first summand carries no j, so the double sum repeats it
            a.push((
                rat(1, 1),
                mono(&["q1".into(), q(i), p(i)]),
                mono(&["q2".into(), q(i), p(i)]),
            ));
            b.push((
                rat(1, 1),
                mono(&["q1".into(), q(i), q(j)]),
                mono(&["q2".into(), p(i), p(j)]),
            ));
            c.push((
                rat(1, 1),
                mono(&["q2".into(), q(i), q(j)]),
                mono(&["q1".into(), p(i), p(j)]),
            ));
        }
    }
    rows.push(row(
        t,
        4,
        eps(n, &[(1, -1), (2, -1)]),
        vec![(rat(2, 1), a), (rat(-1, 1), b), (rat(1, 1), c)],
    ));
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in ix() {
        for j in ix() {
            for k in ix() {
                a.push((
                    rat(1, 1),
                    mono(&[q(i), q(j), p(k)]),
                    mono(&[q(k), p(i), p(j)]),
                ));
                b.push((
                    rat(1, 1),
                    mono(&[q(i), q(j), q(k)]),
                    mono(&[p(i), p(j), p(k)]),
                ));
            }
        }
    }
    rows.push(row(
        t,
        5,
        WeightVector::zero(n),
        vec![(rat(3, 1), a), (rat(-1, 1), b)],
    ));
    let s = ix()
        .map(|i| {
            (
                rat(1, 1),
                mono(&["q1".into(), q(i), q(i), q(i)]),
                mono(&[p(i), p(i), p(i)]),
            )
        })
        .collect();
    rows.push(row(t, 6, eps(n, &[(1, -1)]), vec![(rat(1, 1), s)]));
    rows
}

/// Cycles involving `X_0^+ = t q1` and `Y` for `k(2n+1)`, `n > 1`.
pub fn k_table(n: usize) -> Vec<TableRow> {
    let t = "k-gplus-h2";
    let s = (1..=n)
        .map(|i| {
            (
                rat(1, 1),
                mono(&["q1".into(), "q1".into(), format!("q{i}")]),
                mono(&["q1".into(), "q1".into(), format!("p{i}")]),
            )
        })
        .collect();
    vec![
        row(
            t,
            1,
            eps(n, &[(1, -4)]),
            vec![
                (rat(-1, 1), s),
                (
                    rat(n as i64 + 2, 1),
                    one(m(&["t", "q1"]), m(&["q1", "q1", "q1"])),
                ),
            ],
        ),
        row(
            t,
            2,
            eps(n, &[(1, -3), (2, -1)]),
            vec![
                (rat(1, 1), one(m(&["q1", "q1", "q1"]), m(&["t", "q2"]))),
                (rat(1, 1), one(m(&["q1", "q1", "q2"]), m(&["t", "q1"]))),
            ],
        ),
    ]
}

fn fld(vars: &[String], j: usize) -> String {
    format!("{}*d{j}", mono(vars))
}

/// Lowest weights and cycles of `H2(g_+)` for `vect(n)`, `n >= 3`
/// (row 8 exists for `n >= 4` only).
pub fn vect_table(n: usize) -> Vec<TableRow> {
    let t = "vect-gplus-h2";
    let x = |i: usize| format!("x{i}");
    let (xn, xm) = (x(n), x(n - 1));
    let ix = || 1..=n;
    let f = |v: &[&String], j: usize| fld(&v.iter().map(|s| s.to_string()).collect::<Vec<_>>(), j);
    let mut rows = vec![
        row(
            t,
            1,
            eps(n, &[(1, -1), (2, -1), (n, 4)]),
            vec![(rat(1, 1), one(f(&[&xn, &xn], 1), f(&[&xn, &xn], 2)))],
        ),
        row(
            t,
            2,
            eps(n, &[(1, -2), (n - 1, 1), (n, 3)]),
            vec![(rat(1, 1), one(f(&[&xn, &xn], 1), f(&[&xn, &xm], 1)))],
        ),
    ];
    let s1 = ix()
        .map(|i| (rat(1, 1), f(&[&xn, &xn], 1), f(&[&xn, &x(i)], i)))
        .collect();
    let s2 = ix()
        .map(|i| (rat(1, 1), f(&[&xn, &xn], i), f(&[&xn, &x(i)], 1)))
        .collect();
    rows.push(row(
        t,
        3,
        eps(n, &[(1, -1), (n, -3)]),
        vec![(rat(n as i64, 1), s1), (rat(2, 1), s2)],
    ));
    let s1 = ix()
        .map(|i| (rat(1, 1), f(&[&xn, &xm], 1), f(&[&xn, &x(i)], i)))
        .collect();
    let s2 = ix()
        .map(|i| (rat(1, 1), f(&[&xn, &xn], 1), f(&[&xm, &x(i)], i)))
        .collect();
    rows.push(row(
        t,
        4,
        eps(n, &[(1, -1), (n - 1, -1), (n, -2)]),
        vec![(rat(1, 1), s1), (rat(-1, 1), s2)],
    ));
    let s1 = ix()
        .map(|i| (rat(1, 1), f(&[&xn, &xm], i), f(&[&xn, &x(i)], 1)))
        .collect();
    let s2 = ix()
        .map(|i| (rat(1, 1), f(&[&xn, &xn], i), f(&[&xm, &x(i)], 1)))
        .collect();
    rows.push(row(
        t,
        5,
        eps(n, &[(1, -1), (n - 1, -1), (n, -2)]),
        vec![(rat(1, 1), s1), (rat(-1, 1), s2)],
    ));
    let mut s6 = Vec::new();
    let mut s7 = Vec::new();
    for i in ix() {
        for j in ix() {
            s6.push((rat(1, 1), f(&[&xn, &x(i)], i), f(&[&xm, &x(j)], j)));
            s7.push((rat(1, 1), f(&[&xn, &x(i)], j), f(&[&xm, &x(j)], i)));
        }
    }
    rows.push(row(
        t,
        6,
        eps(n, &[(n - 1, -1), (n, -1)]),
        vec![(rat(1, 1), s6)],
    ));
    rows.push(row(
        t,
        7,
        eps(n, &[(n - 1, -1), (n, -1)]),
        vec![(rat(1, 1), s7)],
    ));
    if n >= 4 {
        rows.push(row(
            t,
            8,
            eps(n, &[(1, -1), (2, -1), (n - 1, 2), (n, 2)]),
            vec![
                (rat(2, 1), one(f(&[&xn, &xm], 1), f(&[&xn, &xm], 2))),
                (rat(-1, 1), one(f(&[&xn, &xn], 1), f(&[&xm, &xm], 2))),
                (rat(-1, 1), one(f(&[&xm, &xm], 1), f(&[&xn, &xn], 2))),
            ],
        ));
    }
    rows
}

/// The table transcribed for `kind`, if any.
pub fn table_for(kind: AlgebraKind) -> Vec<TableRow> {
    match kind {
        AlgebraKind::H(n) if n > 1 => h_table(n),
        AlgebraKind::K(n) if n > 1 => k_table(n),
        AlgebraKind::Vect(n) if n >= 3 => vect_table(n),
        _ => Vec::new(),
    }
}

impl TableRow {
    /// The row read as a relation `sum c [a, b] = 0` among elements of `g_+`.
    pub fn relation(&self) -> Relation {
        let mut terms = Vec::new();
        for (c, part) in &self.parts {
            for (k, a, b) in part {
                terms.push((c * k, br(lit(a), lit(b))));
            }
        }
        Relation::zero(format!("{}:{}", self.table, self.number), lin(terms))
    }

    fn part_chain(&self, cx: &Complex<'_>, terms: &[Term]) -> Result<ChainElement> {
        let spec = cx.spec();
        let mut pairs = Vec::with_capacity(terms.len());
        for (c, a, b) in terms {
            pairs.push((c.clone(), spec.parse_element(a)?, spec.parse_element(b)?));
        }
        cx.chain2(&pairs)
    }

    /// The printed chain.
    pub fn chain(&self, cx: &Complex<'_>) -> Result<ChainElement> {
        let mut out = ChainElement::zero(2);
        for (c, terms) in &self.parts {
            out.add_scaled(&self.part_chain(cx, terms)?, c);
        }
        Ok(out)
    }

    /// Degree from the first term.
    pub fn degree(&self, spec: &AlgebraSpec) -> Result<i32> {
        let (_, a, b) = &self.parts[0].1[0];
        Ok(spec.degree(&spec.parse_element(a)?)? + spec.degree(&spec.parse_element(b)?)?)
    }

    pub fn check(&self, cx: &Complex<'_>) -> Result<RowOutcome> {
        let chain = self.chain(cx)?;
        let check = cx.check_cycle(&chain, &self.weight)?;
        let parts = self
            .parts
            .iter()
            .map(|(_, t)| self.part_chain(cx, t))
            .collect::<Result<Vec<_>>>()?;
        let cycle_combinations = if check.is_cycle {
            Vec::new()
        } else {
            cx.cycle_combinations(&parts)?
        };
        Ok(RowOutcome {
            table: self.table.clone(),
            number: self.number,
            chain: cx.format_chain(&chain),
            expected_weight: self.weight.clone(),
            check,
            cycle_combinations,
        })
    }
}

/// Checks every row of the table of `spec`'s algebra in `g_+`.
pub fn verify_table(spec: &AlgebraSpec) -> Result<Vec<RowOutcome>> {
    let rows = table_for(spec.kind());
    let mut maxdeg = 1;
    for r in &rows {
        maxdeg = maxdeg.max(r.degree(spec)?);
    }
    let cx = Complex::new(spec, Part::GPlus, maxdeg)?;
    rows.par_iter().map(|r| r.check(&cx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_algebra;

    #[test]
    fn monomial_text() {
        assert_eq!(m(&["q1", "q2", "q1"]), "q1^2*q2");
        assert_eq!(fld(&["x3".into(), "x3".into()], 1), "x3^2*d1");
    }

    #[test]
    fn first_rows_are_lowest_cycles() {
        let h = make_algebra("h:4".parse().unwrap()).unwrap();
        let cx = Complex::new(&h, Part::GPlus, 2).unwrap();
        let r = h_table(2)[0].check(&cx).unwrap();
        assert!(r.check.passed(), "{r:?}");
        assert_eq!(r.chain, "q1^3 ^ q1^2*q2");
        let v = make_algebra("vect:3".parse().unwrap()).unwrap();
        let cx = Complex::new(&v, Part::GPlus, 2).unwrap();
        assert!(vect_table(3)[0].check(&cx).unwrap().check.passed());
    }

    #[test]
    fn boundaries_are_not_classes() {
        let h = make_algebra("h:4".parse().unwrap()).unwrap();
        let cx = Complex::new(&h, Part::GPlus, 3).unwrap();
        let t = cx.wedge_basis(3, 3)[5].clone();
        let b = cx.d2(&ChainElement::wedge(&t, rat(1, 1))).unwrap();
        let w = cx.chain_weight(&b).unwrap();
        let c = cx.check_cycle(&b, &w).unwrap();
        assert!(c.is_cycle && !c.not_boundary);
    }
}
