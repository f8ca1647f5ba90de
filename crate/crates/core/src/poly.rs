//! Exact multivariate polynomials over ℚ.
//!
//! A polynomial is a sparse map from dense exponent vectors to nonzero
//! rational coefficients over a shared, named variable set. Arithmetic
//! between polynomials requires the same variable set.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// An ordered, named set of variables.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(VarSet {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug)]
pub struct RationalPolynomial {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for RationalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for RationalPolynomial {}

fn same_vars(a: &Arc<VarSet>, b: &Arc<VarSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl RationalPolynomial {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        RationalPolynomial {
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        Ok(Self::var_index(vars, vars.index(name)?))
    }

    pub fn var_index(vars: &Arc<VarSet>, i: usize) -> Self {
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(m, Rational::one());
        p
    }

    /// Builds from `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms(vars: &Arc<VarSet>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial length");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.vars.len()])
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.iter().sum::<u32>() == d)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        RationalPolynomial {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative with respect to a named variable.
    pub fn derivative(&self, name: &str) -> Result<Self> {
        Ok(self.derivative_index(self.vars.index(name)?))
    }

    pub fn derivative_index(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] = e - 1;
            out.add_term(dm, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = rational_to_f64(c);
                for (x, &e) in point.iter().zip(m) {
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Gradient evaluated at a point, without materializing derivatives.
    pub fn gradient_f64(&self, point: &[f64]) -> Vec<f64> {
        let n = self.vars.len();
        let mut g = vec![0.0; n];
        for (m, c) in &self.terms {
            let c = rational_to_f64(c);
            for i in 0..n {
                if m[i] == 0 {
                    continue;
                }
                let mut t = c * m[i] as f64;
                for (j, (&x, &e)) in point.iter().zip(m).enumerate() {
                    let e = if j == i { e - 1 } else { e };
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                g[i] += t;
            }
        }
        g
    }

    /// Substitutes `images[i]` for variable `i`; the result lives on the
    /// images' variable set.
    pub fn compose(&self, images: &[RationalPolynomial]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::Dimension {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        let target = images
            .first()
            .map(|p| Arc::clone(&p.vars))
            .ok_or(Error::Dimension { expected: 1, got: 0 })?;
        let mut out = Self::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(m) {
                if e > 0 {
                    t = t.checked_mul(&img.pow(e))?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Reinterprets the polynomial on a larger variable set, mapping
    /// variable `i` to `offset + i`.
    pub fn embed(&self, vars: &Arc<VarSet>, offset: usize) -> Self {
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut big = vec![0; vars.len()];
            big[offset..offset + m.len()].copy_from_slice(m);
            out.add_term(big, c.clone());
        }
        out
    }

    /// Moves variable `i` to `map[i]` on another variable set.
    pub fn remap(&self, vars: &Arc<VarSet>, map: &[usize]) -> Self {
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut moved = vec![0; vars.len()];
            for (i, &e) in m.iter().enumerate() {
                moved[map[i]] += e;
            }
            out.add_term(moved, c.clone());
        }
        out
    }

    /// Sum of `|c|·|x^m|` over the terms: the size against which the value
    /// at `point` is judged to be zero.
    pub fn magnitude_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(rational_to_f64(c).abs(), |acc, (&e, x)| acc * x.abs().powi(e as i32))
            })
            .sum()
    }

    /// If every coefficient is a multiple of `other`'s with one common
    /// factor, returns it: `self = c · other`.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        if self.check(other).is_err() || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for (m, c) in &self.terms {
            let d = other.terms.get(m)?;
            let r = c / d;
            match &ratio {
                None => ratio = Some(r),
                Some(x) if *x == r => {}
                Some(_) => return None,
            }
        }
        ratio.or_else(|| Some(Rational::zero()))
    }

    /// Canonical text: terms by descending total degree, then descending
    /// exponent vector; coefficients as reduced fractions.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let mut s = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = &self.vars.names[i];
                    if e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

// Operator forms panic on mismatched variable sets; use the checked_*
// methods where the sets come from different sources.

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self.checked_add(rhs).expect("variable sets differ")
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self.checked_add(&-rhs).expect("variable sets differ")
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self.checked_mul(rhs).expect("variable sets differ")
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: RationalPolynomial) -> RationalPolynomial {
        &self + &rhs
    }
}

impl Sub for RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: RationalPolynomial) -> RationalPolynomial {
        &self - &rhs
    }
}

impl Mul for RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: RationalPolynomial) -> RationalPolynomial {
        &self * &rhs
    }
}

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        -&self
    }
}
