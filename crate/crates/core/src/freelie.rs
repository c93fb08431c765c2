//! Free Lie algebras on finitely many symbols, truncated by bracket length.
//!
//! Lie elements live inside the free associative algebra (words over the
//! symbol indices), where `[a, b] = ab - ba`. The Lyndon words with their
//! standard bracketing form a Hall basis: the standard bracketing of a
//! Lyndon word `w` is `w` plus lexicographically larger words of the same
//! length, which makes coordinates computable by peeling off the smallest
//! word.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, Echelon, Inserted, SparseVec};
use crate::scalar::rat;

pub type Word = Vec<u8>;
pub type AssocElem = SparseVec<Word>;

pub fn symbol(i: u8) -> AssocElem {
    [(vec![i], rat(1, 1))].into()
}

/// `ab - ba` in the free associative algebra, dropping words longer than
/// `maxlen`.
pub fn assoc_bracket(a: &AssocElem, b: &AssocElem, maxlen: usize) -> AssocElem {
    let mut out = AssocElem::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() > maxlen {
                continue;
            }
            let c = x * y;
            let uv: Word = u.iter().chain(v).copied().collect();
            let vu: Word = v.iter().chain(u).copied().collect();
            add_scaled(&mut out, &[(uv, c.clone())].into(), &rat(1, 1));
            add_scaled(&mut out, &[(vu, c)].into(), &rat(-1, 1));
        }
    }
    out
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Lyndon words over `k` letters of length at most `maxlen`, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(k: u8, maxlen: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || maxlen == 0 {
        return out;
    }
    let mut w: Word = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < maxlen {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

/// `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> (&[u8], &[u8]) {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .map(|i| w.split_at(i))
        .expect("word of length at least 2")
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Dimension of the length-`n` part of the free Lie algebra on `k`
/// symbols: `(1/n) sum_{d | n} mu(d) k^(n/d)`.
pub fn necklace_count(k: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let s: i64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(d) * (k as i64).pow((n / d) as u32))
        .sum();
    (s / n as i64) as usize
}

#[derive(Debug, Clone)]
pub struct HallBasis {
    symbols: Vec<String>,
    degrees: Vec<i32>,
    maxlen: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    polys: Vec<AssocElem>,
}

impl HallBasis {
    pub fn new(symbols: Vec<String>, degrees: Vec<i32>, maxlen: usize) -> Self {
        assert_eq!(symbols.len(), degrees.len());
        let mut words = lyndon_words(symbols.len() as u8, maxlen);
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut index = HashMap::new();
        let mut polys: Vec<AssocElem> = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            index.insert(w.clone(), i);
            let p = if w.len() == 1 {
                symbol(w[0])
            } else {
                let (u, v) = standard_factorization(w);
                assoc_bracket(&polys[index[u]], &polys[index[v]], maxlen)
            };
            polys.push(p);
        }
        HallBasis {
            symbols,
            degrees,
            maxlen,
            words,
            index,
            polys,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn maxlen(&self) -> usize {
        self.maxlen
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn element(&self, i: usize) -> &AssocElem {
        &self.polys[i]
    }

    pub fn word_degree(&self, w: &[u8]) -> i32 {
        w.iter().map(|&c| self.degrees[c as usize]).sum()
    }

    /// Basis element as a bracket expression, e.g. `[X1+, [X1+, X2+]]`.
    pub fn bracket_text(&self, i: usize) -> String {
        fn go(b: &HallBasis, w: &[u8]) -> String {
            if w.len() == 1 {
                return b.symbols[w[0] as usize].clone();
            }
            let (u, v) = standard_factorization(w);
            format!("[{}, {}]", go(b, u), go(b, v))
        }
        go(self, &self.words[i])
    }

    /// Dimensions by length `1..=maxlen`.
    pub fn dims_by_length(&self) -> Vec<usize> {
        let mut d = vec![0; self.maxlen];
        for w in &self.words {
            d[w.len() - 1] += 1;
        }
        d
    }

    /// Dimensions keyed by (length, degree).
    pub fn dims_by_length_degree(&self) -> BTreeMap<(usize, i32), usize> {
        let mut d = BTreeMap::new();
        for w in &self.words {
            *d.entry((w.len(), self.word_degree(w))).or_insert(0) += 1;
        }
        d
    }

    /// Coordinates of a Lie element in the basis.
    pub fn coordinates(&self, e: &AssocElem) -> Result<SparseVec<usize>> {
        let mut e = e.clone();
        let mut out = SparseVec::new();
        while let Some((w, c)) = e.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            let Some(&i) = self.index.get(&w) else {
                return Err(Error::NotInBasis(format!(
                    "word {w:?} is not a Lyndon word of the basis"
                )));
            };
            add_scaled(&mut e, &self.polys[i], &-c.clone());
            out.insert(i, c);
        }
        Ok(out)
    }

    /// Structure constants `[b_i, b_j]`, truncated at `maxlen`.
    pub fn bracket(&self, i: usize, j: usize) -> SparseVec<usize> {
        let p = assoc_bracket(&self.polys[i], &self.polys[j], self.maxlen);
        self.coordinates(&p)
            .expect("brackets of Lie elements are Lie elements")
    }
}

/// Echelon key: shorter words rank higher, so every pivot is the
/// lowest-length term of its row.
type FilteredKey = (Reverse<usize>, Word);

fn filtered(e: &AssocElem) -> SparseVec<FilteredKey> {
    e.iter()
        .map(|(w, c)| ((Reverse(w.len()), w.clone()), c.clone()))
        .collect()
}

/// Graded dimensions of `F / (I + F_{>maxlen})`, where `F` is the free Lie
/// algebra of `basis` and `I` the ideal generated by `relations`.
///
/// Relations need not be homogeneous in length; the result is the
/// associated graded for the length filtration, i.e. `dim F_l` minus the
/// dimension of the lowest-length parts of ideal elements at length `l`.
/// Keys are (length, degree); relations must be homogeneous in degree.
pub fn quotient_dims(basis: &HallBasis, relations: &[AssocElem]) -> BTreeMap<(usize, i32), usize> {
    let maxlen = basis.maxlen;
    let k = basis.symbols.len() as u8;
    let mut ech: Echelon<FilteredKey> = Echelon::new(false);
    let mut level: Vec<AssocElem> = Vec::new();
    for r in relations {
        let r: AssocElem = r
            .iter()
            .filter(|(w, _)| w.len() <= maxlen)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        if !r.is_empty() {
            level.push(r);
        }
    }
    while !level.is_empty() {
        let mut next = Vec::new();
        for x in level {
            if let Inserted::Pivot(_) = ech.insert(&filtered(&x)) {
                // dependent elements have dependent brackets
                for g in 0..k {
                    let y = assoc_bracket(&symbol(g), &x, maxlen);
                    if !y.is_empty() {
                        next.push(y);
                    }
                }
            }
        }
        level = next;
    }
    let mut dims = basis.dims_by_length_degree();
    for (Reverse(len), w) in ech.pivots() {
        let d = basis.word_degree(w);
        let e = dims
            .get_mut(&(*len, d))
            .expect("pivot inside the basis range");
        *e -= 1;
    }
    dims
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_enumeration_matches_necklaces() {
        for k in 1..=4u8 {
            let ws = lyndon_words(k, 6);
            assert!(ws.windows(2).all(|p| p[0] < p[1]));
            assert!(ws.iter().all(|w| is_lyndon(w)));
            for n in 1..=6 {
                let c = ws.iter().filter(|w| w.len() == n).count();
                assert_eq!(c, necklace_count(k as usize, n), "k={k} n={n}");
            }
        }
        assert_eq!(necklace_count(2, 3), 2);
        assert_eq!(necklace_count(3, 4), 18);
    }

    #[test]
    fn free_on_two_symbols() {
        let b = HallBasis::new(vec!["a".into(), "b".into()], vec![1, 1], 3);
        assert_eq!(b.dims_by_length(), vec![2, 1, 2]);
        let texts: Vec<String> = (0..b.len()).map(|i| b.bracket_text(i)).collect();
        assert_eq!(
            texts,
            vec!["a", "b", "[a, b]", "[a, [a, b]]", "[[a, b], b]"]
        );
    }

    #[test]
    fn structure_constants_are_antisymmetric_and_jacobi() {
        let b = HallBasis::new(vec!["a".into(), "b".into(), "c".into()], vec![1, 1, 1], 4);
        for i in 0..b.len() {
            assert!(b.bracket(i, i).is_empty());
            for j in 0..b.len() {
                let mut s = b.bracket(i, j);
                add_scaled(&mut s, &b.bracket(j, i), &rat(1, 1));
                assert!(s.is_empty());
            }
        }
        // Jacobi on the generators through the associative embedding
        let (a, bb, c) = (symbol(0), symbol(1), symbol(2));
        let mut j = assoc_bracket(&a, &assoc_bracket(&bb, &c, 4), 4);
        add_scaled(
            &mut j,
            &assoc_bracket(&bb, &assoc_bracket(&c, &a, 4), 4),
            &rat(1, 1),
        );
        add_scaled(
            &mut j,
            &assoc_bracket(&c, &assoc_bracket(&a, &bb, 4), 4),
            &rat(1, 1),
        );
        assert!(j.is_empty());
    }

    #[test]
    fn serre_quotient_of_sl3() {
        // n+ of sl(3): [a,[a,b]] = 0 = [b,[b,a]]
        let b = HallBasis::new(vec!["a".into(), "b".into()], vec![0, 0], 4);
        let (x, y) = (symbol(0), symbol(1));
        let r1 = assoc_bracket(&x, &assoc_bracket(&x, &y, 4), 4);
        let r2 = assoc_bracket(&y, &assoc_bracket(&y, &x, 4), 4);
        let d = quotient_dims(&b, &[r1, r2]);
        let by_len: Vec<usize> = (1..=4)
            .map(|l| d.get(&(l, 0)).copied().unwrap_or(0))
            .collect();
        assert_eq!(by_len, vec![2, 1, 0, 0]);
    }

    #[test]
    fn inhomogeneous_relation() {
        // a = [a, b] kills everything in the length filtration's lowest parts
        let b = HallBasis::new(vec!["a".into(), "b".into()], vec![0, 0], 3);
        let mut r = symbol(0);
        add_scaled(
            &mut r,
            &assoc_bracket(&symbol(0), &symbol(1), 3),
            &rat(-1, 1),
        );
        let d = quotient_dims(&b, &[r]);
        assert_eq!(d[&(1, 0)], 1);
        assert_eq!(d[&(2, 0)], 0);
        assert_eq!(d[&(3, 0)], 0);
    }
}
