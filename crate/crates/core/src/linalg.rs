//! Exact sparse linear algebra.
//!
//! [`Echelon`] keeps an incrementally built row-echelon basis. Rows are
//! primitive integer vectors (denominators cleared, content divided out),
//! and elimination is fraction-free: `v <- (a/g) v - (b/g) r` with
//! `g = gcd(a, b)`. The pivot of a row is its largest key.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar};

pub type SparseVec<K> = BTreeMap<K, Rational>;
type IntVec<K> = BTreeMap<K, BigInt>;

pub fn add_scaled<K: Ord + Clone>(acc: &mut SparseVec<K>, v: &SparseVec<K>, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let e = acc.entry(k.clone()).or_insert_with(Rational::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

fn to_primitive<K: Ord + Clone>(v: &SparseVec<K>) -> (IntVec<K>, Rational) {
    let mut den = BigInt::one();
    for x in v.values() {
        den = den.lcm(x.denom());
    }
    let mut g = BigInt::zero();
    let mut out = IntVec::new();
    for (k, x) in v {
        let n = x.numer() * (&den / x.denom());
        g = g.gcd(&n);
        out.insert(k.clone(), n);
    }
    if g.is_zero() {
        return (out, Rational::one());
    }
    if out.values().next_back().is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    for x in out.values_mut() {
        *x = &*x / &g;
    }
    // out = v * den / g
    (out, Rational::new(den, g))
}

fn make_primitive<K>(v: &mut IntVec<K>) -> BigInt {
    let mut g = BigInt::zero();
    for x in v.values() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return BigInt::one();
    }
    if v.values().next_back().is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    if !g.is_one() {
        for x in v.values_mut() {
            *x = &*x / &g;
        }
    }
    g
}

#[derive(Debug, Clone)]
struct Row<K> {
    vec: IntVec<K>,
    /// `vec = sum comb[i] * input[i]`
    comb: BTreeMap<usize, Rational>,
}

/// Outcome of [`Echelon::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inserted<K> {
    /// The vector was independent and now owns this pivot.
    Pivot(K),
    /// The vector equals `sum c_i * input_i` over earlier inputs
    /// (empty unless tracking is on).
    Dependent(BTreeMap<usize, Rational>),
}

#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    track: bool,
    inputs: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new(false)
    }
}

impl<K: Ord + Clone> Echelon<K> {
    /// With `track`, every row remembers how it combines the inputs.
    pub fn new(track: bool) -> Self {
        Echelon {
            rows: BTreeMap::new(),
            track,
            inputs: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Fraction-free reduction; returns the primitive residue and, when
    /// tracking, the combination such that `residue = scale * v - comb`.
    fn reduce_int(
        &self,
        mut v: IntVec<K>,
        mut comb: BTreeMap<usize, Rational>,
    ) -> (IntVec<K>, BTreeMap<usize, Rational>) {
        while let Some((k, a)) = v.iter().next_back().map(|(k, a)| (k.clone(), a.clone())) {
            let Some(row) = self.rows.get(&k) else { break };
            let b = &row.vec[&k];
            let g = a.gcd(b);
            let fv = b / &g;
            let fr = &a / &g;
            for x in v.values_mut() {
                *x = &*x * &fv;
            }
            for (kk, x) in &row.vec {
                let e = v.entry(kk.clone()).or_insert_with(BigInt::zero);
                *e -= x * &fr;
                if e.is_zero() {
                    v.remove(kk);
                }
            }
            if self.track {
                let fv = Rational::from_integer(fv);
                let fr = Rational::from_integer(fr);
                for c in comb.values_mut() {
                    *c = &*c * &fv;
                }
                add_scaled(&mut comb, &row.comb, &-fr);
            }
            let g = make_primitive(&mut v);
            if self.track && !g.is_one() {
                let g = Rational::from_integer(g);
                for c in comb.values_mut() {
                    *c = &*c / &g;
                }
            }
        }
        (v, comb)
    }

    /// Adds a vector to the span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Inserted<K> {
        let id = self.inputs;
        self.inputs += 1;
        let (iv, scale) = to_primitive(v);
        let mut comb = BTreeMap::new();
        if self.track {
            comb.insert(id, scale);
        }
        let (res, comb) = self.reduce_int(iv, comb);
        match res.keys().next_back().cloned() {
            Some(k) => {
                self.rows.insert(k.clone(), Row { vec: res, comb });
                Inserted::Pivot(k)
            }
            None => {
                if !self.track {
                    return Inserted::Dependent(BTreeMap::new());
                }
                // 0 = s * input_id + rest  =>  input_id = -rest / s
                let mut comb = comb;
                let s = comb.remove(&id).expect("own coefficient survives");
                let f = -(Rational::one() / s);
                for c in comb.values_mut() {
                    *c = &*c * &f;
                }
                Inserted::Dependent(comb)
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        let (iv, _) = to_primitive(v);
        self.reduce_int(iv, BTreeMap::new()).0.is_empty()
    }

    /// Coefficients `c_i` with `v = sum c_i * input_i`, if `v` is in the span.
    /// Requires tracking.
    pub fn express(&self, v: &SparseVec<K>) -> Option<BTreeMap<usize, Rational>> {
        assert!(self.track, "express needs a tracking echelon");
        let mut v = v.clone();
        let mut comb = BTreeMap::new();
        while let Some((k, a)) = v.iter().next_back().map(|(k, a)| (k.clone(), a.clone())) {
            let row = self.rows.get(&k)?;
            let f = a / Rational::from_integer(row.vec[&k].clone());
            for (kk, x) in &row.vec {
                let e = v.entry(kk.clone()).or_insert_with(Rational::zero);
                *e -= Rational::from_integer(x.clone()) * &f;
                if e.is_zero() {
                    v.remove(kk);
                }
            }
            add_scaled(&mut comb, &row.comb, &f);
        }
        Some(comb)
    }

    /// Primitive residue of `v` modulo the span (zero iff `v` is in it).
    pub fn residue(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let (iv, _) = to_primitive(v);
        self.reduce_int(iv, BTreeMap::new())
            .0
            .into_iter()
            .map(|(k, x)| (k, Rational::from_integer(x)))
            .collect()
    }
}

/// Rank of a set of sparse rational vectors.
pub fn rank<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> usize {
    let mut e = Echelon::new(false);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Plain Gaussian elimination over any field; used to cross-check ranks
/// modulo a prime.
pub fn rank_over<S: Scalar, K: Ord + Clone>(vectors: &[BTreeMap<K, S>]) -> usize {
    let mut rows: BTreeMap<K, BTreeMap<K, S>> = BTreeMap::new();
    for v in vectors {
        let mut v: BTreeMap<K, S> = v
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| (k.clone(), x.clone()))
            .collect();
        while let Some((k, a)) = v.iter().next_back().map(|(k, a)| (k.clone(), a.clone())) {
            let Some(row) = rows.get(&k) else {
                rows.insert(k, v);
                break;
            };
            let f = a / row[&k].clone();
            for (kk, x) in row {
                let e = v.entry(kk.clone()).or_insert_with(S::zero);
                *e = e.clone() - x.clone() * &f;
                if e.is_zero() {
                    v.remove(kk);
                }
            }
        }
    }
    rows.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Zp};

    fn sv(entries: &[(u32, Rational)]) -> SparseVec<u32> {
        entries
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .cloned()
            .collect()
    }

    #[test]
    fn rank_and_membership() {
        let a = sv(&[(0, rat(1, 2)), (1, rat(3, 1))]);
        let b = sv(&[(1, rat(1, 1)), (2, rat(-2, 3))]);
        let mut c = a.clone();
        add_scaled(&mut c, &b, &rat(5, 7));
        assert_eq!(rank(&[a.clone(), b.clone(), c.clone()]), 2);
        let mut e = Echelon::new(true);
        e.insert(&a);
        e.insert(&b);
        assert!(e.contains(&c));
        assert_eq!(
            e.insert(&c),
            Inserted::Dependent([(0, rat(1, 1)), (1, rat(5, 7))].into())
        );
        let expr = e.express(&c).unwrap();
        let mut back = SparseVec::new();
        add_scaled(&mut back, &a, &expr[&0]);
        add_scaled(&mut back, &b, &expr[&1]);
        assert_eq!(back, c);
        assert!(e.express(&sv(&[(3, rat(1, 1))])).is_none());
    }

    #[test]
    fn zp_rank_agrees() {
        let vs: Vec<SparseVec<u32>> = (0..6)
            .map(|i| {
                sv(&[
                    (i % 4, rat(i as i64 + 1, 1)),
                    ((i + 1) % 4, rat(-2, i as i64 + 1)),
                ])
            })
            .collect();
        let zs: Vec<BTreeMap<u32, Zp>> = vs
            .iter()
            .map(|v| {
                v.iter()
                    .map(|(k, x)| (*k, Zp::from_rational(x).unwrap()))
                    .collect()
            })
            .collect();
        assert_eq!(rank(&vs), rank_over(&zs));
    }
}
