//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors ordered graded-lexicographically,
//! so iteration, display and serialization are canonical. Zero coefficients are never stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Work threshold (term-pair count) above which products are split across threads.
const PAR_MUL_THRESHOLD: usize = 1 << 16;

/// Exponent vector. Ordered graded-lexicographically: total degree first, then
/// lexicographic comparison with `x1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The polynomial `x_var` (0-based index).
    pub fn var(nvars: usize, var: usize) -> Result<Self> {
        if var >= nvars {
            return Err(Error::VariableOutOfRange { var, nvars });
        }
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial(exps), Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {} in a polynomial with {} variables",
                    exps.len(),
                    nvars
                )));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
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

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
        }
    }

    /// Splits into a positive common denominator and integer numerators.
    fn integer_parts(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let parts = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&den / c.denom())))
            .collect();
        (den, parts)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        let (da, a) = self.integer_parts();
        let (db, b) = other.integer_parts();

        let accumulate = |chunk: &[(&Monomial, BigInt)]| {
            let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(chunk.len() * b.len());
            for (ma, ca) in chunk {
                for (mb, cb) in &b {
                    let key = ma.mul(mb);
                    let prod = ca * cb;
                    match acc.get_mut(&key) {
                        Some(v) => *v += prod,
                        None => {
                            acc.insert(key, prod);
                        }
                    }
                }
            }
            acc
        };

        let acc = if a.len() * b.len() >= PAR_MUL_THRESHOLD && a.len() > 1 {
            let chunk = a.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
            a.par_chunks(chunk)
                .map(accumulate)
                .reduce(HashMap::new, |mut x, y| {
                    for (k, v) in y {
                        match x.get_mut(&k) {
                            Some(e) => *e += v,
                            None => {
                                x.insert(k, v);
                            }
                        }
                    }
                    x
                })
        } else {
            accumulate(&a)
        };

        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::new(c, den.clone())))
            .collect();
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut out = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        out
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.terms
                .insert(Monomial(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point of length {} for a polynomial in {} variables",
                point.len(),
                self.nvars
            )));
        }
        let max_deg: Vec<u32> = (0..self.nvars)
            .map(|v| self.degree_in(v).unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .zip(&max_deg)
            .map(|(x, &d)| {
                let mut pw = Vec::with_capacity(d as usize + 1);
                pw.push(Rational::one());
                for i in 0..d as usize {
                    let next = &pw[i] * x;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Degree in `x_var` and the polynomial coefficient of its top power.
    pub fn leading_coeff(&self, var: usize) -> Result<(u32, Self)> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                var,
                nvars: self.nvars,
            });
        }
        let deg = self.degree_in(var).ok_or(Error::ZeroPolynomial)?;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[var] == deg {
                let mut exps = m.0.clone();
                exps[var] = 0;
                out.terms.insert(Monomial(exps), c.clone());
            }
        }
        Ok((deg, out))
    }

    /// Substitutes `x_i -> x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; self.nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[perm[i]] += e;
            }
            out.terms.insert(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_same(divisor)?;
        let (lm, lc) = match divisor.terms.iter().next_back() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::ZeroPolynomial),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            if !lm.divides(m) {
                return Ok(None);
            }
            let qm = m.quotient(&lm);
            let qc = c / &lc;
            let mut step = Self::zero(self.nvars);
            step.terms.insert(qm.clone(), qc.clone());
            rem = &rem - &step.mul_unchecked(divisor);
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Dimension(format!(
            "permutation of length {} for {} items",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Precondition(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Operator impls panic on mismatched `nvars`; use the `try_*` methods for fallible input.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("nvars mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("nvars mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("nvars mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", v + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((t.exp, Rational::new(num, den)));
        }
        MultiPoly::from_terms(raw.nvars, terms).map_err(D::Error::custom)
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i).unwrap()
    }

    fn sym3() -> MultiPoly {
        let (a, b, c) = (x(3, 0), x(3, 1), x(3, 2));
        &(&(&a * &b) + &(&a * &c)) + &(&b * &c)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(2, 0), x(2, 1));
        let p = &(&a + &b) * &(&a - &b);
        let expect = &(&a * &a) - &(&b * &b);
        assert_eq!(p, expect);
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn add_zero_is_identity() {
        let p = sym3();
        assert_eq!(&p + &MultiPoly::zero(3), p);
    }

    #[test]
    fn square_of_elementary_symmetric_at_ones() {
        let p = sym3();
        let ones = vec![rat(1); 3];
        assert_eq!((&p * &p).eval(&ones).unwrap(), rat(9));
        assert_eq!(p.eval(&ones).unwrap(), rat(3));
    }

    #[test]
    fn mismatched_nvars() {
        assert!(matches!(
            x(2, 0).try_add(&x(3, 0)),
            Err(Error::Dimension(_))
        ));
        assert!(x(2, 0).arith(&x(3, 0), ArithOp::Mul).is_err());
    }

    #[test]
    fn partials() {
        let p = sym3();
        assert_eq!(p.partial(0).unwrap(), &x(3, 1) + &x(3, 2));
        assert!(MultiPoly::constant(3, rat(5)).partial(0).unwrap().is_zero());
        let q = &(&x(2, 0) * &x(2, 0)) * &x(2, 1);
        assert_eq!(q.partial(0).unwrap(), (&x(2, 0) * &x(2, 1)).scale(&rat(2)));
        assert!(matches!(
            p.partial(3),
            Err(Error::VariableOutOfRange { var: 3, nvars: 3 })
        ));
    }

    #[test]
    fn evaluation() {
        let q = &x(1, 0) * &x(1, 0);
        assert_eq!(q.eval(&[rat(2)]).unwrap(), rat(4));
        let p = &sym3() + &MultiPoly::constant(3, frac(7, 2));
        assert_eq!(p.eval(&[rat(0), rat(0), rat(0)]).unwrap(), frac(7, 2));
        assert!(p.eval(&[rat(1)]).is_err());
    }

    #[test]
    fn leading_coefficients() {
        let (d, c) = sym3().leading_coeff(0).unwrap();
        assert_eq!(d, 1);
        assert_eq!(c, &x(3, 1) + &x(3, 2));
        let (d, c) = (&x(1, 0) * &x(1, 0)).leading_coeff(0).unwrap();
        assert_eq!((d, c), (2, MultiPoly::one(1)));
        let yz = &x(3, 1) + &x(3, 2);
        assert_eq!(yz.leading_coeff(0).unwrap(), (0, yz.clone()));
        assert!(matches!(
            MultiPoly::zero(2).leading_coeff(0),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn exact_division() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &x(2, 1);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), Some(b.clone()));
        assert_eq!((&p + &MultiPoly::one(2)).div_exact(&a).unwrap(), None);
    }

    #[test]
    fn display_is_graded_lex() {
        let p = &(&x(2, 0) * &x(2, 0)) - &MultiPoly::constant(2, frac(1, 2));
        let p = &p + &x(2, 1).scale(&rat(-3));
        assert_eq!(p.to_string(), "x1^2 - 3*x2 - 1/2");
    }

    #[test]
    fn json_format() {
        let p = &x(2, 0).scale(&frac(-3, 4)) + &MultiPoly::one(2);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"nvars":2,"terms":[{"exp":[1,0],"num":"-3","den":"4"},{"exp":[0,0],"num":"1","den":"1"}]}"#
        );
        let back: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let p = sym3();
        assert_eq!(p.pow(3), &(&p * &p) * &p);
        assert_eq!(p.pow(0), MultiPoly::one(3));
    }
}
