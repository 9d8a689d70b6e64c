//! Sparse multivariate polynomials over an exact field.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vectors in graded-lex
//! order, so iteration runs from low to high degree and rendering walks the
//! map in reverse. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("line through coincident points")]
    CoincidentPoints,
    #[error("zero binary form")]
    ZeroForm,
    #[error("expected a binary form in two variables")]
    NotBinary,
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq)]
pub struct MPoly<S> {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> MPoly<S> {
    pub fn zero(vars: &[&str]) -> Self {
        MPoly::zero_like(vars.iter().map(|v| v.to_string()).collect())
    }

    fn zero_like(vars: Arc<[String]>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: S) -> Self {
        let mut p = MPoly::zero(vars);
        let n = p.nvars();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        MPoly::constant(vars, S::one())
    }

    /// The polynomial consisting of the variable `name`.
    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let idx = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = MPoly::zero(vars);
        p.add_term(e, S::one());
        Ok(p)
    }

    /// Linear form `sum coeffs[i] * vars[i]`.
    pub fn linear(vars: &[&str], coeffs: &[S]) -> Self {
        let mut p = MPoly::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, S)>) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from lowest to highest in graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &S)> {
        self.terms.iter().map(|(m, c)| (m.exps(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> S {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        debug_assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree of a term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.order() == self.total_degree()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut p = MPoly::zero_like(self.vars.clone());
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        self.filter_terms(|e| e.iter().sum::<u32>() <= max_degree)
    }

    pub fn filter_terms(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        let mut p = MPoly::zero_like(self.vars.clone());
        for (m, c) in &self.terms {
            if keep(m.exps()) {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch(
                self.vars.to_vec(),
                other.vars.to_vec(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.0.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.mul_truncated(other, None)
    }

    /// Product, discarding terms of total degree above `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: Option<u32>) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = MPoly::zero_like(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(max) = max_degree {
                    if ma.degree() + mb.degree() > max {
                        // Terms are sorted by degree, so the rest of `other` is too large.
                        break;
                    }
                }
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return MPoly::zero_like(self.vars.clone());
        }
        self.map_coeffs(|c| c.clone() * k.clone())
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MPoly<T> {
        let mut out = MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.0.clone(), f(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_truncated(e, None)
    }

    pub fn pow_truncated(&self, mut e: u32, max_degree: Option<u32>) -> Self {
        let mut acc = MPoly::constant_like(self.vars.clone(), S::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc
                    .mul_truncated(&base, max_degree)
                    .expect("same variables");
            }
            e >>= 1;
            if e > 0 {
                base = base
                    .mul_truncated(&base, max_degree)
                    .expect("same variables");
            }
        }
        acc
    }

    fn constant_like(vars: Arc<[String]>, c: S) -> Self {
        let n = vars.len();
        let mut p = MPoly::zero_like(vars);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn eval(&self, point: &[S]) -> Result<S, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::Arity {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn partial(&self, var: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        Ok(self.partial_at(idx))
    }

    pub fn partial_at(&self, idx: usize) -> Self {
        let mut out = MPoly::zero_like(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            out.add_term(exps, c.clone() * S::from_integer(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|i| self.partial_at(i)).collect()
    }

    /// Replaces each variable by the matching polynomial in `images`, all of
    /// which share one target variable list. Evaluation is Horner-style in
    /// each variable in turn.
    pub fn compose(&self, images: &[MPoly<S>], max_degree: Option<u32>) -> Result<Self, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::Arity {
                expected: self.nvars(),
                got: images.len(),
            });
        }
        let target: Arc<[String]> = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        for img in images {
            if img.vars != target {
                return Err(PolyError::VariableMismatch(
                    target.to_vec(),
                    img.vars.to_vec(),
                ));
            }
        }
        let terms: Vec<(&[u32], &S)> = self.terms().collect();
        Ok(horner(&terms, 0, images, &target, max_degree))
    }

    /// Sets `chart_var = 1`, leaving a polynomial in the remaining variables.
    pub fn dehomogenize(&self, chart_var: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(chart_var)?;
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let rest: Vec<&str> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.as_str())
            .collect();
        let mut out = MPoly::zero(&rest);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(idx);
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Same polynomial over a renamed variable list of equal length.
    pub fn with_vars(&self, vars: &[&str]) -> Self {
        assert_eq!(vars.len(), self.nvars());
        let mut out = MPoly::zero(vars);
        out.terms = self.terms.clone();
        out
    }

    /// Composition with a linear change of the four coordinates:
    /// `(f . m)(v) = f(m v)`.
    pub fn substitute_linear(&self, m: &LinearMap4<S>) -> Result<Self, PolyError> {
        if self.nvars() != 4 {
            return Err(PolyError::Arity {
                expected: 4,
                got: self.nvars(),
            });
        }
        let vars = self.vars();
        let images: Vec<MPoly<S>> = m.rows.iter().map(|row| MPoly::linear(&vars, row)).collect();
        self.compose(&images, None)
    }

    /// `f(s*p + t*q)` as a binary form in `(s, t)`.
    pub fn restrict_to_line(
        &self,
        p: &ProjectivePoint<S>,
        q: &ProjectivePoint<S>,
    ) -> Result<Self, PolyError> {
        if self.nvars() != 4 {
            return Err(PolyError::Arity {
                expected: 4,
                got: self.nvars(),
            });
        }
        if p.projectively_equal(q) {
            return Err(PolyError::CoincidentPoints);
        }
        let st = ["s", "t"];
        let images: Vec<MPoly<S>> = (0..4)
            .map(|i| MPoly::linear(&st, &[p.coords[i].clone(), q.coords[i].clone()]))
            .collect();
        self.compose(&images, None)
    }
}

fn horner<S: Scalar>(
    terms: &[(&[u32], &S)],
    var: usize,
    images: &[MPoly<S>],
    target: &Arc<[String]>,
    max_degree: Option<u32>,
) -> MPoly<S> {
    if terms.is_empty() {
        return MPoly::zero_like(target.clone());
    }
    if var == images.len() {
        let c = terms
            .iter()
            .fold(S::zero(), |acc, (_, c)| acc + (*c).clone());
        return MPoly::constant_like(target.clone(), c);
    }
    let top = terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0);
    let mut buckets: Vec<Vec<(&[u32], &S)>> = vec![Vec::new(); top as usize + 1];
    for &(e, c) in terms {
        buckets[e[var] as usize].push((e, c));
    }
    let img = &images[var];
    let mut acc = MPoly::zero_like(target.clone());
    for bucket in buckets.iter().rev() {
        acc = acc.mul_truncated(img, max_degree).expect("same variables");
        let inner = horner(bucket, var + 1, images, target, max_degree);
        acc = acc.checked_add(&inner).expect("same variables");
    }
    acc
}

impl<S: Scalar> fmt::Display for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> =
                m.0.iter()
                    .zip(self.vars.iter())
                    .filter(|(e, _)| **e > 0)
                    .map(|(&e, v)| {
                        if e == 1 {
                            v.clone()
                        } else {
                            format!("{v}^{e}")
                        }
                    })
                    .collect();
            let mono = mono.join("*");
            let text = c.to_string();
            let (neg, body) = if c.is_compound() {
                (false, format!("({text})"))
            } else if let Some(rest) = text.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, text)
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({self})", self.vars.join(","))
    }
}

macro_rules! poly_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        /// Panics when the operands have different variable lists.
        impl<S: Scalar> std::ops::$tr<&MPoly<S>> for &MPoly<S> {
            type Output = MPoly<S>;
            fn $m(self, rhs: &MPoly<S>) -> MPoly<S> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

poly_op!(Add, add, checked_add);
poly_op!(Sub, sub, checked_sub);
poly_op!(Mul, mul, checked_mul);

impl<S: Scalar> std::ops::Neg for &MPoly<S> {
    type Output = MPoly<S>;
    fn neg(self) -> MPoly<S> {
        MPoly::neg(self)
    }
}

/// Point of `P^3` given by homogeneous coordinates.
#[derive(Clone, Debug)]
pub struct ProjectivePoint<S> {
    pub coords: [S; 4],
}

impl<S: Scalar> ProjectivePoint<S> {
    /// `None` when every coordinate is zero.
    pub fn new(coords: [S; 4]) -> Option<Self> {
        if coords.iter().all(Zero::is_zero) {
            None
        } else {
            Some(ProjectivePoint { coords })
        }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        ProjectivePoint::new(c.map(S::from_integer)).expect("nonzero point")
    }

    /// Equality up to a nonzero scalar: every 2x2 minor of the two coordinate
    /// vectors vanishes.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        (0..4).all(|i| {
            (i + 1..4).all(|j| {
                let minor = self.coords[i].clone() * other.coords[j].clone()
                    - self.coords[j].clone() * other.coords[i].clone();
                minor.is_zero()
            })
        })
    }

    /// `a*self + b*other`, `None` if it vanishes.
    pub fn combine(&self, a: &S, other: &Self, b: &S) -> Option<Self> {
        let coords = std::array::from_fn(|i| {
            a.clone() * self.coords[i].clone() + b.clone() * other.coords[i].clone()
        });
        ProjectivePoint::new(coords)
    }
}

impl<S: Scalar> PartialEq for ProjectivePoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.projectively_equal(other)
    }
}

impl<S: Scalar> fmt::Display for ProjectivePoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A 4x4 matrix acting on homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap4<S> {
    pub rows: [[S; 4]; 4],
}

impl<S: Scalar> LinearMap4<S> {
    pub fn identity() -> Self {
        LinearMap4 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { S::one() } else { S::zero() })
            }),
        }
    }

    /// Map sending the coordinate vector `v` to `(v[perm[0]], ..., v[perm[3]])`.
    pub fn from_permutation(perm: [usize; 4]) -> Self {
        LinearMap4 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| if perm[i] == j { S::one() } else { S::zero() })
            }),
        }
    }

    pub fn apply(&self, p: &ProjectivePoint<S>) -> Option<ProjectivePoint<S>> {
        let coords = std::array::from_fn(|i| {
            (0..4).fold(S::zero(), |acc, j| {
                acc + self.rows[i][j].clone() * p.coords[j].clone()
            })
        });
        ProjectivePoint::new(coords)
    }

    pub fn compose(&self, other: &Self) -> Self {
        LinearMap4 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..4).fold(S::zero(), |acc, k| {
                        acc + self.rows[i][k].clone() * other.rows[k][j].clone()
                    })
                })
            }),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(LinearMap4::identity(), |acc, _| acc.compose(self))
    }

    pub fn determinant(&self) -> S {
        let m: Vec<Vec<S>> = self.rows.iter().map(|r| r.to_vec()).collect();
        determinant(m)
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    /// Equal to a nonzero multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        let d = self.rows[0][0].clone();
        !d.is_zero()
            && (0..4).all(|i| {
                (0..4).all(|j| {
                    if i == j {
                        self.rows[i][j] == d
                    } else {
                        self.rows[i][j].is_zero()
                    }
                })
            })
    }
}

/// Determinant by Gaussian elimination over a field.
pub fn determinant<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    let mut det = S::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return S::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let inv = m[col][col].checked_inv().expect("nonzero pivot");
        det = det * m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() * inv.clone();
            for c in col..n {
                let v = m[col][c].clone() * factor.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

/// Squarefreeness verdict for a binary form with its resultant witness.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeWitness<S> {
    pub squarefree: bool,
    /// `Res(df/ds, df/dt)`; nonzero exactly when the form is squarefree.
    pub resultant: S,
}

/// Tests a binary form for repeated linear factors over the algebraic closure.
///
/// A repeated factor divides both partial derivatives, and by Euler's relation
/// a common factor of the partials divides the form, so squarefreeness is the
/// nonvanishing of the Sylvester resultant of the two partials.
pub fn binary_form_squarefree<S: Scalar>(b: &MPoly<S>) -> Result<SquarefreeWitness<S>, PolyError> {
    if b.nvars() != 2 {
        return Err(PolyError::NotBinary);
    }
    if b.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    if !b.is_homogeneous() {
        return Err(PolyError::NotHomogeneous);
    }
    let d = b.total_degree().unwrap_or(0);
    if d <= 1 {
        return Ok(SquarefreeWitness {
            squarefree: true,
            resultant: S::one(),
        });
    }
    let fs = binary_coeffs(&b.partial_at(0), d - 1);
    let ft = binary_coeffs(&b.partial_at(1), d - 1);
    let res = sylvester_resultant(&fs, &ft);
    Ok(SquarefreeWitness {
        squarefree: !res.is_zero(),
        resultant: res,
    })
}

/// Coefficients of a binary form of formal degree `d`, from `s^d` down to `t^d`.
pub fn binary_coeffs<S: Scalar>(b: &MPoly<S>, d: u32) -> Vec<S> {
    (0..=d).map(|k| b.coefficient(&[d - k, k])).collect()
}

/// Resultant of two binary forms given by coefficient vectors of their
/// formal degrees (leading coefficients may vanish).
pub fn sylvester_resultant<S: Scalar>(f: &[S], g: &[S]) -> S {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return S::one();
    }
    let mut mat = vec![vec![S::zero(); size]; size];
    for row in 0..n {
        for (k, c) in f.iter().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.iter().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    determinant(mat)
}
