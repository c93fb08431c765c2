//! Vector fields, Hamiltonian and contact fields, and the brackets on
//! generating functions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ContextKind, Polynomial, VarContext};
use crate::scalar::Scalar;

/// `sum f_i d_i`, keyed by coordinate index.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField<S: Scalar> {
    ctx: VarContext,
    coeffs: BTreeMap<usize, Polynomial<S>>,
}

impl<S: Scalar> VectorField<S> {
    pub fn zero(ctx: VarContext) -> Self {
        VectorField {
            ctx,
            coeffs: BTreeMap::new(),
        }
    }

    /// `f * d_i`
    pub fn component(i: usize, f: Polynomial<S>) -> Self {
        let mut v = Self::zero(f.context());
        v.set(i, f);
        v
    }

    pub fn partial(ctx: VarContext, i: usize) -> Self {
        Self::component(i, Polynomial::one(ctx))
    }

    /// The Euler field `E = sum y_i d_i` over all coordinates except `t`.
    pub fn euler(ctx: VarContext) -> Self {
        let mut v = Self::zero(ctx);
        for i in 0..ctx.nvars() {
            if Some(i) != ctx.t_index() {
                v.set(i, Polynomial::var(ctx, i));
            }
        }
        v
    }

    fn set(&mut self, i: usize, f: Polynomial<S>) {
        assert!(i < self.ctx.nvars(), "coordinate index out of range");
        if f.is_zero() {
            self.coeffs.remove(&i);
        } else {
            self.coeffs.insert(i, f);
        }
    }

    pub fn context(&self) -> VarContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Polynomial<S> {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.ctx))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Polynomial<S>)> {
        self.coeffs.iter().map(|(&i, f)| (i, f))
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
        for (&i, g) in &other.coeffs {
            let s = r.coeff(i).checked_add(g)?;
            r.set(i, s);
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = Self::zero(self.ctx);
        if !c.is_zero() {
            for (&i, f) in &self.coeffs {
                r.set(i, f.scale(c));
            }
        }
        r
    }

    /// Applies the field as a derivation: `D(g) = sum f_i dg/dx_i`.
    pub fn apply(&self, g: &Polynomial<S>) -> Result<Polynomial<S>> {
        if g.context() != self.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx.to_string(),
                right: g.context().to_string(),
            });
        }
        let mut r = Polynomial::zero(self.ctx);
        for (&i, f) in &self.coeffs {
            r = r.checked_add(&f.checked_mul(&g.differentiate(i)?)?)?;
        }
        Ok(r)
    }

    /// `[D, E] = D o E - E o D`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut r = Self::zero(self.ctx);
        for j in 0..self.ctx.nvars() {
            let a = self.apply(&other.coeff(j))?;
            let b = other.apply(&self.coeff(j))?;
            r.set(j, a.checked_sub(&b)?);
        }
        Ok(r)
    }

    pub fn divergence(&self) -> Result<Polynomial<S>> {
        if self.ctx.kind() != ContextKind::X {
            return Err(Error::WrongContext {
                operation: "divergence",
                context: self.ctx.to_string(),
            });
        }
        let mut r = Polynomial::zero(self.ctx);
        for (&i, f) in &self.coeffs {
            r = r.checked_add(&f.differentiate(i)?)?;
        }
        Ok(r)
    }

    /// Degree in the standard grading: `deg x^a d_j = |a| - deg x_j`.
    pub fn standard_degree(&self) -> Result<i32> {
        let mut deg = None;
        for (&i, f) in &self.coeffs {
            let w = self.ctx.var_weight(i);
            for (m, _) in f.terms() {
                let d = m.degree() - w;
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return Err(Error::NotHomogeneous(self.to_string())),
                    _ => {}
                }
            }
        }
        deg.ok_or_else(|| Error::NotHomogeneous("0".into()))
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> VectorField<T> {
        let mut r = VectorField::zero(self.ctx);
        for (&i, g) in &self.coeffs {
            r.set(i, g.map_scalar(&f));
        }
        r
    }

    /// Parses `x3^2*d1 - 2*x1*d2`, `q1*dt - dp1`, or `x^2*d`.
    pub fn parse(s: &str, ctx: VarContext) -> Result<Self> {
        let mut r = Self::zero(ctx);
        if s.trim() == "0" {
            return Ok(r);
        }
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            let after_caret = s[..i].trim_end().ends_with('^');
            if (b == b'+' || b == b'-') && i > 0 && !after_caret && !s[..i].trim().is_empty() {
                pieces.push((start, &s[start..i]));
                start = i;
            }
        }
        pieces.push((start, &s[start..]));
        for (offset, piece) in pieces {
            let trimmed = piece.trim();
            let (sign, body) = match trimmed.as_bytes().first() {
                Some(b'-') => (-S::one(), &trimmed[1..]),
                Some(b'+') => (S::one(), &trimmed[1..]),
                _ => (S::one(), trimmed),
            };
            let mut coord = None;
            let mut rest = Vec::new();
            for factor in body.split('*').map(str::trim) {
                if let Some(name) = factor.strip_prefix('d') {
                    let idx = if ctx.kind() == ContextKind::Laurent && name.is_empty() {
                        Some(0)
                    } else if ctx.kind() == ContextKind::X {
                        ctx.var_index(&format!("x{name}"))
                    } else {
                        ctx.var_index(name)
                    };
                    let Some(idx) = idx else {
                        return Err(Error::UnknownVariable {
                            name: factor.to_string(),
                            context: ctx.to_string(),
                        });
                    };
                    if coord.replace(idx).is_some() {
                        return Err(Error::Parse {
                            pos: offset,
                            message: "more than one derivation in a term".into(),
                        });
                    }
                } else {
                    rest.push(factor);
                }
            }
            let Some(idx) = coord else {
                return Err(Error::Parse {
                    pos: offset,
                    message: format!("term `{trimmed}` has no derivation factor"),
                });
            };
            let f = if rest.is_empty() {
                Polynomial::one(ctx)
            } else {
                Polynomial::parse(&rest.join("*"), ctx).map_err(|e| match e {
                    Error::Parse { pos, message } => Error::Parse {
                        pos: pos + offset,
                        message,
                    },
                    e => e,
                })?
            };
            let sum = r.coeff(idx).checked_add(&f.scale(&sign))?;
            r.set(idx, sum);
        }
        Ok(r)
    }
}

pub fn derivation_name(ctx: &VarContext, i: usize) -> String {
    match ctx.kind() {
        ContextKind::X => format!("d{}", i + 1),
        ContextKind::Laurent => "d".into(),
        _ => format!("d{}", ctx.var_name(i)),
    }
}

impl<S: Scalar> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, g) in &self.coeffs {
            let d = derivation_name(&self.ctx, i);
            for (m, c) in g.terms().rev() {
                let neg = c.is_negative_repr();
                let abs = if neg { -c.clone() } else { c.clone() };
                match (first, neg) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                first = false;
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                if !m.is_one() {
                    write!(f, "{}*", m.format(&self.ctx))?;
                }
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{}]({})", self.ctx, self)
    }
}

fn require_pq<S: Scalar>(f: &Polynomial<S>, operation: &'static str) -> Result<()> {
    match f.context().kind() {
        ContextKind::Pq | ContextKind::Tpq => Ok(()),
        _ => Err(Error::WrongContext {
            operation,
            context: f.context().to_string(),
        }),
    }
}

fn require_tpq<S: Scalar>(f: &Polynomial<S>, operation: &'static str) -> Result<()> {
    if f.context().has_t() {
        Ok(())
    } else {
        Err(Error::WrongContext {
            operation,
            context: f.context().to_string(),
        })
    }
}

fn h_part<S: Scalar>(f: &Polynomial<S>) -> Result<VectorField<S>> {
    let ctx = f.context();
    let mut v = VectorField::zero(ctx);
    for i in 1..=ctx.n() {
        v.set(ctx.q(i), f.differentiate(ctx.p(i))?);
        v.set(ctx.p(i), f.differentiate(ctx.q(i))?.scale(&-S::one()));
    }
    Ok(v)
}

/// `H_f = sum (df/dp_i d/dq_i - df/dq_i d/dp_i)`.
pub fn hamiltonian_field<S: Scalar>(f: &Polynomial<S>) -> Result<VectorField<S>> {
    require_pq(f, "hamiltonian field")?;
    if let Some(t) = f.context().t_index() {
        if f.depends_on(t) {
            return Err(Error::DependsOnT(f.to_string()));
        }
    }
    h_part(f)
}

/// `Delta(f) = 2f - E(f)`.
pub fn delta<S: Scalar>(f: &Polynomial<S>) -> Result<Polynomial<S>> {
    require_pq(f, "delta")?;
    f.scale(&S::from_i64(2)).checked_sub(&f.euler_operator()?)
}

/// `K_f = Delta(f) d/dt + df/dt E + H_f`, with `t` a parameter inside `H_f`.
pub fn contact_field<S: Scalar>(f: &Polynomial<S>) -> Result<VectorField<S>> {
    require_tpq(f, "contact field")?;
    let ctx = f.context();
    let t = ctx.t_index().expect("tpq context has t");
    let mut v = h_part(f)?;
    let ft = f.differentiate(t)?;
    if !ft.is_zero() {
        for (i, y) in VectorField::euler(ctx).components() {
            v = v.checked_add(&VectorField::component(i, y.checked_mul(&ft)?))?;
        }
    }
    v = v.checked_add(&VectorField::component(t, delta(f)?))?;
    Ok(v)
}

/// `{f, g} = sum (df/dp_i dg/dq_i - df/dq_i dg/dp_i)`; `t` is a parameter.
pub fn poisson_bracket<S: Scalar>(f: &Polynomial<S>, g: &Polynomial<S>) -> Result<Polynomial<S>> {
    require_pq(f, "poisson bracket")?;
    if f.context() != g.context() {
        return Err(Error::ContextMismatch {
            left: f.context().to_string(),
            right: g.context().to_string(),
        });
    }
    let ctx = f.context();
    let mut r = Polynomial::zero(ctx);
    for i in 1..=ctx.n() {
        let a = f
            .differentiate(ctx.p(i))?
            .checked_mul(&g.differentiate(ctx.q(i))?)?;
        let b = f
            .differentiate(ctx.q(i))?
            .checked_mul(&g.differentiate(ctx.p(i))?)?;
        r = r.checked_add(&a)?.checked_sub(&b)?;
    }
    Ok(r)
}

/// Which sign the Poisson term of the contact bracket carries.
///
/// `AsPrinted` is `Delta(f) g_t - f_t Delta(g) - {f, g}`. It satisfies Jacobi
/// but `K_{{f,g}}` then differs from `[K_f, K_g]`; `FieldHomomorphic` flips
/// the Poisson term and is the bracket the fields `K_f` actually realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactConvention {
    AsPrinted,
    FieldHomomorphic,
}

pub fn contact_bracket<S: Scalar>(
    f: &Polynomial<S>,
    g: &Polynomial<S>,
    convention: ContactConvention,
) -> Result<Polynomial<S>> {
    require_tpq(f, "contact bracket")?;
    let pb = poisson_bracket(f, g)?;
    let t = f.context().t_index().expect("tpq context has t");
    let a = delta(f)?.checked_mul(&g.differentiate(t)?)?;
    let b = f.differentiate(t)?.checked_mul(&delta(g)?)?;
    let r = a.checked_sub(&b)?;
    match convention {
        ContactConvention::AsPrinted => r.checked_sub(&pb),
        ContactConvention::FieldHomomorphic => r.checked_add(&pb),
    }
}

/// Standard degree of a generating function: weighted degree minus 2.
pub fn function_degree<S: Scalar>(f: &Polynomial<S>) -> Result<i32> {
    f.homogeneous_degree()
        .map(|d| d - 2)
        .ok_or_else(|| Error::NotHomogeneous(f.to_string()))
}

/// Integer weight in the basis `eps_1 .. eps_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut w = vec![0; n];
        w[i] = 1;
        WeightVector(w)
    }

    pub fn from_slice(v: &[i64]) -> Self {
        WeightVector(v.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        WeightVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        WeightVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        WeightVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sep = match (first, c < 0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if c.abs() == 1 {
                write!(f, "{sep}eps{}", i + 1)?;
            } else {
                write!(f, "{sep}{}*eps{}", c.abs(), i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The scalar `l` with `image = l * e`, if there is one.
pub fn eigenvalue<S: Scalar>(e: &Polynomial<S>, image: &Polynomial<S>) -> Option<S> {
    let (m, c) = e.leading_term()?;
    let l = image.coeff(m) / c.clone();
    (e.scale(&l) == *image).then_some(l)
}

/// Field version of [`eigenvalue`].
pub fn field_eigenvalue<S: Scalar>(e: &VectorField<S>, image: &VectorField<S>) -> Option<S> {
    let (i, f) = e.components().next()?;
    let l = eigenvalue(f, &image.coeff(i))?;
    (e.scale(&l) == *image).then_some(l)
}

/// Weight of a field under `ad` of torus fields.
pub fn field_weight<S: Scalar + ToPrimitive>(
    e: &VectorField<S>,
    torus: &[VectorField<S>],
) -> Result<WeightVector> {
    let mut w = Vec::with_capacity(torus.len());
    for h in torus {
        let img = h.lie_bracket(e)?;
        let l = if img.is_zero() {
            Some(S::zero())
        } else {
            field_eigenvalue(e, &img)
        };
        let l = l
            .and_then(|l| l.to_i64())
            .ok_or_else(|| Error::NotEigenvector {
                element: e.to_string(),
                torus: h.to_string(),
            })?;
        w.push(l);
    }
    Ok(WeightVector(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type P = Polynomial<Rational>;
    type V = VectorField<Rational>;

    fn p(s: &str, c: VarContext) -> P {
        P::parse(s, c).unwrap()
    }

    fn v(s: &str, c: VarContext) -> V {
        V::parse(s, c).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let x = VarContext::x(3);
        assert_eq!(
            v("x1*d2", x).lie_bracket(&v("x2*d1", x)).unwrap(),
            v("x1*d1 - x2*d2", x)
        );
        assert_eq!(
            v("x3^2*d1", x).lie_bracket(&v("d3", x)).unwrap(),
            v("-2*x3*d1", x)
        );
        let d = v("x1*x2*d1 + 3*x3^2*d2", x);
        assert!(d.lie_bracket(&d).unwrap().is_zero());
    }

    #[test]
    fn divergence_examples() {
        let x = VarContext::x(3);
        assert!(v("x1*d2", x).divergence().unwrap().is_zero());
        assert_eq!(v("x1*d1", x).divergence().unwrap(), p("1", x));
        let xn_e = v("x3*x1*d1 + x3*x2*d2 + x3^2*d3", x);
        assert_eq!(xn_e.divergence().unwrap(), p("4*x3", x));
        assert!(v("dq1", VarContext::pq(1)).divergence().is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let c = VarContext::pq(2);
        assert_eq!(hamiltonian_field(&p("p1", c)).unwrap(), v("dq1", c));
        assert!(hamiltonian_field(&p("1", c)).unwrap().is_zero());
        assert_eq!(
            hamiltonian_field(&p("q1*p1", c)).unwrap(),
            v("q1*dq1 - p1*dp1", c)
        );
        let t = VarContext::tpq(1);
        assert!(matches!(
            hamiltonian_field(&p("t*q1", t)),
            Err(Error::DependsOnT(_))
        ));
    }

    #[test]
    fn contact_examples() {
        let c = VarContext::tpq(2);
        assert_eq!(contact_field(&p("1", c)).unwrap(), v("2*dt", c));
        assert_eq!(contact_field(&p("q2", c)).unwrap(), v("q2*dt - dp2", c));
        assert_eq!(
            contact_field(&p("t", c)).unwrap(),
            v("2*t*dt + q1*dq1 + q2*dq2 + p1*dp1 + p2*dp2", c)
        );
        assert!(contact_field(&p("q1", VarContext::pq(1))).is_err());
    }

    #[test]
    fn poisson_examples() {
        let c = VarContext::pq(2);
        assert_eq!(
            poisson_bracket(&p("p1", c), &p("q1", c)).unwrap(),
            p("1", c)
        );
        // q1*p2 and p2^2 share no conjugate pair, so they commute
        assert!(poisson_bracket(&p("q1*p2", c), &p("p2^2", c))
            .unwrap()
            .is_zero());
        assert_eq!(
            poisson_bracket(&p("p1*q2", c), &p("p2^2", c)).unwrap(),
            p("-2*p1*p2", c)
        );
        let f = p("q1^2*p2 + 3*p1", c);
        assert!(poisson_bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn contact_bracket_examples() {
        let c = VarContext::tpq(1);
        let printed = ContactConvention::AsPrinted;
        let hom = ContactConvention::FieldHomomorphic;
        assert_eq!(
            contact_bracket(&p("1", c), &p("t", c), printed).unwrap(),
            p("2", c)
        );
        assert_eq!(
            contact_bracket(&p("q1^3", c), &p("p1", c), printed).unwrap(),
            p("3*q1^2", c)
        );
        assert_eq!(
            contact_bracket(&p("q1^3", c), &p("p1", c), hom).unwrap(),
            p("-3*q1^2", c)
        );
        let f = p("t*q1 + p1^2", c);
        assert!(contact_bracket(&f, &f, printed).unwrap().is_zero());
    }

    #[test]
    fn degrees() {
        let c = VarContext::tpq(2);
        assert_eq!(function_degree(&p("t*q1", c)).unwrap(), 1);
        assert_eq!(function_degree(&p("p2^2", c)).unwrap(), 0);
        assert_eq!(v("d3", VarContext::x(3)).standard_degree().unwrap(), -1);
        assert!(v("d1 + x1*d1", VarContext::x(3)).standard_degree().is_err());
        assert!(function_degree(&p("t + q1", c)).is_err());
    }

    #[test]
    fn vect_weights() {
        let x = VarContext::x(3);
        let torus: Vec<V> = (0..3).map(|i| V::component(i, P::var(x, i))).collect();
        assert_eq!(
            field_weight(&v("x1*d2", x), &torus).unwrap(),
            WeightVector(vec![1, -1, 0])
        );
        assert!(field_weight(&torus[1], &torus).unwrap().is_zero());
        assert!(field_weight(&v("x1*d2 + d1", x), &torus).is_err());
    }

    #[test]
    fn field_format_round_trip() {
        let c = VarContext::tpq(1);
        let k = contact_field(&p("t*q1 - 1/2*p1^2", c)).unwrap();
        assert_eq!(V::parse(&k.to_string(), c).unwrap(), k);
        let l = VarContext::laurent();
        let e = v("x^-1*d", l);
        assert_eq!(e.to_string(), "x^-1*d");
        assert_eq!(e.standard_degree().unwrap(), -2);
        assert_eq!(rat(1, 2).to_string(), "1/2");
    }

    #[test]
    fn weight_format() {
        assert_eq!(WeightVector(vec![-5, -1]).to_string(), "-5*eps1 - eps2");
        assert_eq!(WeightVector(vec![0, 0]).to_string(), "0");
    }
}
