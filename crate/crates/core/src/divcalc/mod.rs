//! Divisor classes on a declared intersection lattice.
//!
//! A [`DeclaredLattice`] is a finite list of named basis classes with a
//! symmetric rational pairing table and, optionally, a canonical class. The
//! table need not be nondegenerate: it records exactly the intersection
//! numbers that are known, and classes are compared coefficientwise.

pub mod dsl;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{rat, rat_int, Rational};
use crate::linalg::{self, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivError {
    #[error("classes belong to different lattices")]
    LatticeMismatch,
    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("pairing table is not symmetric at ({0}, {1})")]
    NotSymmetric(String, String),
    #[error("unknown class `{0}`")]
    UnknownName(String),
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("lattice has no canonical class")]
    MissingCanonical,
    #[error("branch class {class} has square {square}, which cannot be halved")]
    OddBranch { class: String, square: String },
    #[error("{class} is not a (-1)-class: square {square}, canonical degree {k_degree}")]
    NotExceptional {
        class: String,
        square: String,
        k_degree: String,
    },
    #[error("system has a {free_dimension}-dimensional solution space")]
    Underdetermined {
        free_dimension: usize,
        particular: Vec<Rational>,
    },
    #[error("inconsistent system: rank {rank}, augmented rank {augmented_rank}")]
    Inconsistent { rank: usize, augmented_rank: usize },
    #[error("{0} is not an integer")]
    NonIntegral(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug)]
struct LatticeData {
    names: Vec<String>,
    gram: Vec<Vec<Rational>>,
    canonical: Option<Vec<Rational>>,
}

/// Immutable handle to a lattice; clones share the same data, and classes
/// from different declarations never mix.
#[derive(Clone, Debug)]
pub struct DeclaredLattice(Arc<LatticeData>);

impl PartialEq for DeclaredLattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl DeclaredLattice {
    pub fn new(names: Vec<String>, gram: Vec<Vec<Rational>>) -> Result<Self, DivError> {
        Self::build(names, gram, None)
    }

    fn build(
        names: Vec<String>,
        gram: Vec<Vec<Rational>>,
        canonical: Option<Vec<Rational>>,
    ) -> Result<Self, DivError> {
        let n = names.len();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(DivError::DuplicateName(name.clone()));
            }
        }
        if gram.len() != n {
            return Err(DivError::Dimension {
                expected: n,
                got: gram.len(),
            });
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(DivError::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(DivError::NotSymmetric(names[i].clone(), names[j].clone()));
                }
            }
        }
        if let Some(k) = &canonical {
            if k.len() != n {
                return Err(DivError::Dimension {
                    expected: n,
                    got: k.len(),
                });
            }
        }
        Ok(DeclaredLattice(Arc::new(LatticeData {
            names,
            gram,
            canonical,
        })))
    }

    /// Diagonal lattice, e.g. `diag(1, -1, ..., -1)` for a blown-up plane.
    pub fn diagonal(names: Vec<String>, diag: &[i64]) -> Result<Self, DivError> {
        let n = diag.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            rat_int(diag[i])
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(names, gram)
    }

    /// Same basis and pairing with the canonical class set to `k`.
    pub fn with_canonical(&self, k: &DivisorClass) -> Result<Self, DivError> {
        if k.lattice != *self {
            return Err(DivError::LatticeMismatch);
        }
        Self::build(
            self.0.names.clone(),
            self.0.gram.clone(),
            Some(k.coeffs.clone()),
        )
    }

    pub fn rank(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.0.gram
    }

    pub fn index(&self, name: &str) -> Result<usize, DivError> {
        self.0
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| DivError::UnknownName(name.to_string()))
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass {
            lattice: self.clone(),
            coeffs: vec![Rational::zero(); self.rank()],
        }
    }

    pub fn basis(&self, name: &str) -> Result<DivisorClass, DivError> {
        let mut d = self.zero();
        d.coeffs[self.index(name)?] = Rational::one();
        Ok(d)
    }

    pub fn basis_at(&self, i: usize) -> DivisorClass {
        let mut d = self.zero();
        d.coeffs[i] = Rational::one();
        d
    }

    pub fn class(&self, coeffs: Vec<Rational>) -> Result<DivisorClass, DivError> {
        if coeffs.len() != self.rank() {
            return Err(DivError::Dimension {
                expected: self.rank(),
                got: coeffs.len(),
            });
        }
        Ok(DivisorClass {
            lattice: self.clone(),
            coeffs,
        })
    }

    /// `sum c_i * name_i` with integer coefficients.
    pub fn combo(&self, terms: &[(i64, &str)]) -> Result<DivisorClass, DivError> {
        let mut d = self.zero();
        for &(c, name) in terms {
            d.coeffs[self.index(name)?] += rat_int(c);
        }
        Ok(d)
    }

    pub fn canonical(&self) -> Result<DivisorClass, DivError> {
        let k = self.0.canonical.clone().ok_or(DivError::MissingCanonical)?;
        Ok(DivisorClass {
            lattice: self.clone(),
            coeffs: k,
        })
    }

    pub fn has_canonical(&self) -> bool {
        self.0.canonical.is_some()
    }
}

/// Rational combination of the basis classes of one lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorClass {
    lattice: DeclaredLattice,
    coeffs: Vec<Rational>,
}

impl DivisorClass {
    pub fn lattice(&self) -> &DeclaredLattice {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, name: &str) -> Result<Rational, DivError> {
        Ok(self.coeffs[self.lattice.index(name)?].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, DivError> {
        if self.lattice != other.lattice {
            return Err(DivError::LatticeMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(DivisorClass {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, DivError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, DivError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        DivisorClass {
            lattice: self.lattice.clone(),
            coeffs,
        }
    }

    pub fn square(&self) -> Rational {
        pair(self, self).expect("same lattice")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    /// Panics on a lattice mismatch; see [`DivisorClass::checked_add`].
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_add(rhs).expect("classes on one lattice")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_sub(rhs).expect("classes on one lattice")
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Rational::one())
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(&rat_int(self))
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(self.lattice.names()) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn pair(d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational, DivError> {
    if d1.lattice != d2.lattice {
        return Err(DivError::LatticeMismatch);
    }
    let g = d1.lattice.gram();
    let mut acc = Rational::zero();
    for (i, a) in d1.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in d2.coeffs.iter().enumerate() {
            if !b.is_zero() && !g[i][j].is_zero() {
                acc += a * b * &g[i][j];
            }
        }
    }
    Ok(acc)
}

/// Arithmetic genus `1 + (D^2 + D.K) / 2`.
pub fn adjunction_genus(d: &DivisorClass) -> Result<Rational, DivError> {
    let k = d.lattice.canonical()?;
    Ok(Rational::one() + (d.square() + pair(d, &k)?) / rat_int(2))
}

pub fn class_equal(d1: &DivisorClass, d2: &DivisorClass) -> Result<bool, DivError> {
    if d1.lattice != d2.lattice {
        return Err(DivError::LatticeMismatch);
    }
    Ok(d1.coeffs == d2.coeffs)
}

/// A point to blow up, optionally with one infinitely near point on its
/// exceptional curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupPoint {
    pub name: String,
    pub infinitely_near: Option<String>,
}

impl BlowupPoint {
    pub fn simple(name: &str) -> Self {
        BlowupPoint {
            name: name.to_string(),
            infinitely_near: None,
        }
    }

    pub fn with_child(name: &str, child: &str) -> Self {
        BlowupPoint {
            name: name.to_string(),
            infinitely_near: Some(child.to_string()),
        }
    }
}

/// The plane blown up at a forest of points, in the orthogonal basis
/// `h, e_<point>...` of total transforms.
#[derive(Clone, Debug)]
pub struct BlowupLattice {
    pub lattice: DeclaredLattice,
    pub points: Vec<BlowupPoint>,
}

impl BlowupLattice {
    pub fn h(&self) -> DivisorClass {
        self.lattice.basis("h").expect("h is declared")
    }

    /// Total transform of the exceptional curve over `point`.
    pub fn total(&self, point: &str) -> Result<DivisorClass, DivError> {
        self.lattice.basis(&format!("e_{point}"))
    }

    /// Proper transform of the exceptional curve over `point`: `e_p - e_p'`
    /// when `p'` lies infinitely near `p`, otherwise `e_p`.
    pub fn proper(&self, point: &str) -> Result<DivisorClass, DivError> {
        let e = self.total(point)?;
        match self
            .points
            .iter()
            .find(|p| p.name == point)
            .and_then(|p| p.infinitely_near.as_ref())
        {
            Some(child) => Ok(&e - &self.total(child)?),
            None => Ok(e),
        }
    }

    pub fn canonical(&self) -> DivisorClass {
        self.lattice.canonical().expect("set by blowup_basis")
    }

    pub fn exceptional_count(&self) -> usize {
        self.lattice.rank() - 1
    }

    /// `e = 3 + (number of blow-ups)`.
    pub fn euler_number(&self) -> i64 {
        3 + self.exceptional_count() as i64
    }
}

pub fn blowup_basis(forest: &[BlowupPoint]) -> BlowupLattice {
    let mut names = vec!["h".to_string()];
    for p in forest {
        names.push(format!("e_{}", p.name));
        if let Some(c) = &p.infinitely_near {
            names.push(format!("e_{c}"));
        }
    }
    let mut diag = vec![-1; names.len()];
    diag[0] = 1;
    let lattice = DeclaredLattice::diagonal(names, &diag).expect("distinct names");
    let mut k = vec![Rational::one(); lattice.rank()];
    k[0] = rat_int(-3);
    let k = lattice.class(k).expect("right length");
    let lattice = lattice.with_canonical(&k).expect("same lattice");
    BlowupLattice {
        lattice,
        points: forest.to_vec(),
    }
}

/// Double cover `p: V -> F` branched along a class divisible by two.
#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub base: DeclaredLattice,
    pub cover: DeclaredLattice,
    pub branch: DivisorClass,
    /// `p^*(C) / 2` for each declared branch component `C`.
    pub reduced_components: Vec<DivisorClass>,
}

impl DoubleCover {
    /// `p^*`: the same coefficients on the cover basis `p*b`.
    pub fn pullback(&self, d: &DivisorClass) -> Result<DivisorClass, DivError> {
        if d.lattice != self.base {
            return Err(DivError::LatticeMismatch);
        }
        self.cover.class(d.coeffs.clone())
    }

    /// Reduced preimage `p^*(C) / 2` of a branch component.
    pub fn reduced_preimage(&self, c: &DivisorClass) -> Result<DivisorClass, DivError> {
        Ok(self.pullback(c)?.scale(&rat(1, 2)))
    }
}

/// Builds the cover lattice with `p*D . p*D' = 2 D.D'` and
/// `K = p*(K_F + branch/2)`. Divisibility of the branch class is taken on
/// trust; only the numerical conditions are checked.
pub fn double_cover_pullback(
    lat: &DeclaredLattice,
    branch: &DivisorClass,
    components: &[DivisorClass],
) -> Result<DoubleCover, DivError> {
    if branch.lattice != *lat {
        return Err(DivError::LatticeMismatch);
    }
    for c in std::iter::once(branch).chain(components) {
        let sq = c.square();
        if !(&sq / rat_int(2)).is_integer() {
            return Err(DivError::OddBranch {
                class: c.to_string(),
                square: sq.to_string(),
            });
        }
    }
    let k = lat.canonical()?;
    let names = lat.names().iter().map(|n| format!("p*{n}")).collect();
    let gram = lat
        .gram()
        .iter()
        .map(|row| row.iter().map(|g| g * rat_int(2)).collect())
        .collect();
    let k_cover: Vec<Rational> = k
        .coeffs
        .iter()
        .zip(&branch.coeffs)
        .map(|(a, b)| a + b / rat_int(2))
        .collect();
    let cover = DeclaredLattice::build(names, gram, Some(k_cover))?;
    let mut dc = DoubleCover {
        base: lat.clone(),
        cover,
        branch: branch.clone(),
        reduced_components: Vec::new(),
    };
    dc.reduced_components = components
        .iter()
        .map(|c| dc.reduced_preimage(c))
        .collect::<Result<_, _>>()?;
    Ok(dc)
}

/// Contraction of a (-1)-class `e`.
///
/// The target lattice has the same basis and the pairing
/// `D.D' + (D.e)(D'.e)`, i.e. the pairing of the projections
/// `D + (D.e) e` onto the orthogonal complement of `e`; its canonical class
/// is the projection `K - e` of the old one.
#[derive(Clone, Debug)]
pub struct BlowDown {
    pub source: DeclaredLattice,
    pub target: DeclaredLattice,
    pub exceptional: DivisorClass,
}

impl BlowDown {
    pub fn push(&self, d: &DivisorClass) -> Result<DivisorClass, DivError> {
        if d.lattice != self.source {
            return Err(DivError::LatticeMismatch);
        }
        let de = pair(d, &self.exceptional)?;
        let coeffs = d
            .coeffs
            .iter()
            .zip(&self.exceptional.coeffs)
            .map(|(a, b)| a + &de * b)
            .collect();
        self.target.class(coeffs)
    }

    /// Total transform back on the blown-up surface: the representative
    /// orthogonal to `e`.
    pub fn pull(&self, d: &DivisorClass) -> Result<DivisorClass, DivError> {
        if d.lattice != self.target {
            return Err(DivError::LatticeMismatch);
        }
        let lifted = self.source.class(d.coeffs.clone())?;
        let de = pair(&lifted, &self.exceptional)?;
        Ok(&lifted + &self.exceptional.scale(&de))
    }
}

pub fn blow_down(lat: &DeclaredLattice, e: &DivisorClass) -> Result<BlowDown, DivError> {
    if e.lattice != *lat {
        return Err(DivError::LatticeMismatch);
    }
    let k = lat.canonical()?;
    let square = e.square();
    let k_degree = pair(e, &k)?;
    if square != rat_int(-1) || k_degree != rat_int(-1) {
        return Err(DivError::NotExceptional {
            class: e.to_string(),
            square: square.to_string(),
            k_degree: k_degree.to_string(),
        });
    }
    let n = lat.rank();
    let pe: Vec<Rational> = (0..n)
        .map(|i| pair(&lat.basis_at(i), e).expect("same lattice"))
        .collect();
    let gram = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &lat.gram()[i][j] + &pe[i] * &pe[j])
                .collect()
        })
        .collect();
    let target = DeclaredLattice::build(lat.names().to_vec(), gram, None)?;
    let mut bd = BlowDown {
        source: lat.clone(),
        target,
        exceptional: e.clone(),
    };
    let k_new = bd.push(&k)?;
    bd.target = bd.target.with_canonical(&k_new)?;
    Ok(bd)
}

/// Contracts `classes` one after another, pushing each remaining class
/// through the earlier contractions. Returns the final lattice and the
/// composite pushforward of `tracked`.
pub fn blow_down_all(
    lat: &DeclaredLattice,
    classes: &[DivisorClass],
    tracked: &[DivisorClass],
) -> Result<(DeclaredLattice, Vec<DivisorClass>), DivError> {
    let mut cur = lat.clone();
    let mut pending: Vec<DivisorClass> = classes.to_vec();
    let mut tracked: Vec<DivisorClass> = tracked.to_vec();
    while !pending.is_empty() {
        let e = pending.remove(0);
        let bd = blow_down(&cur, &e)?;
        pending = pending
            .iter()
            .map(|c| bd.push(c))
            .collect::<Result<_, _>>()?;
        tracked = tracked
            .iter()
            .map(|c| bd.push(c))
            .collect::<Result<_, _>>()?;
        cur = bd.target;
    }
    Ok((cur, tracked))
}

/// One step of topological Euler number bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerStep {
    /// `e` of the surface blown up at `points` points.
    Blowup { base: i64, points: i64 },
    /// `e` of a double cover: `2 e(base) - e(branch)`.
    DoubleCover { base: i64, branch: i64 },
    /// `e` of the base of a double cover: `(e(cover) + e(branch)) / 2`.
    DoubleCoverBase { cover: i64, branch: i64 },
}

pub fn euler_bookkeeping(step: EulerStep) -> Result<i64, DivError> {
    match step {
        EulerStep::Blowup { base, points } => Ok(base + points),
        EulerStep::DoubleCover { base, branch } => Ok(2 * base - branch),
        EulerStep::DoubleCoverBase { cover, branch } => {
            let twice = cover + branch;
            if twice % 2 != 0 {
                return Err(DivError::NonIntegral(format!("({cover} + {branch}) / 2")));
            }
            Ok(twice / 2)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub chi: i64,
    pub k_squared: i64,
    pub euler: i64,
    pub pg: i64,
    pub q: i64,
}

impl SurfaceInvariants {
    /// Invariants of a surface with `p_g = q = 0`.
    pub fn regular(k_squared: i64, euler: i64) -> Self {
        SurfaceInvariants {
            chi: 1,
            k_squared,
            euler,
            pg: 0,
            q: 0,
        }
    }
}

/// `12 chi = K^2 + e` and `chi = 1 - q + p_g`.
pub fn noether_check(inv: &SurfaceInvariants) -> bool {
    12 * inv.chi == inv.k_squared + inv.euler && inv.chi == 1 - inv.q + inv.pg
}

/// Solves `sum x_j U_j . T_k = target . T_k` for all test classes `T_k`.
pub fn solve_class(
    unknowns: &[DivisorClass],
    target: &DivisorClass,
    tests: &[DivisorClass],
) -> Result<Vec<Rational>, DivError> {
    let mut a = Vec::with_capacity(tests.len());
    let mut b = Vec::with_capacity(tests.len());
    for t in tests {
        a.push(
            unknowns
                .iter()
                .map(|u| pair(u, t))
                .collect::<Result<Vec<_>, _>>()?,
        );
        b.push(pair(target, t)?);
    }
    match linalg::solve(&a, &b) {
        Solution::Unique(x) => Ok(x),
        Solution::Underdetermined {
            particular,
            free_dimension,
        } => Err(DivError::Underdetermined {
            free_dimension,
            particular,
        }),
        Solution::Inconsistent {
            rank,
            augmented_rank,
        } => Err(DivError::Inconsistent {
            rank,
            augmented_rank,
        }),
    }
}

/// Integer value of an exactly integral rational, for reporting.
pub fn as_integer(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_lattice() -> DeclaredLattice {
        dsl::parse_declarations(dsl::GODEAUX_LAT).unwrap().lattice
    }

    fn section4() -> BlowupLattice {
        let mut pts = vec![BlowupPoint::simple("q")];
        for i in 0..5 {
            pts.push(BlowupPoint::with_child(&format!("p{i}"), &format!("p{i}'")));
        }
        blowup_basis(&pts)
    }

    #[test]
    fn canonical_square_on_v() {
        let lat = v_lattice();
        let k = lat.canonical().unwrap();
        assert_eq!(k.square(), rat_int(1));
        let e1 = lat.basis("E1").unwrap();
        assert_eq!(pair(&e1, &k).unwrap(), rat_int(1));
        assert_eq!(pair(&e1, &lat.zero()).unwrap(), rat_int(0));
    }

    #[test]
    fn mismatched_lattices() {
        let a = v_lattice();
        let b = v_lattice();
        let e = pair(&a.basis("R").unwrap(), &b.basis("R").unwrap());
        assert_eq!(e, Err(DivError::LatticeMismatch));
    }

    #[test]
    fn blowup_of_eleven_points() {
        let b = section4();
        let k = b.canonical();
        assert_eq!(k.square(), rat_int(-2));
        assert_eq!(b.euler_number(), 14);
        let z0 = b.proper("p0").unwrap();
        let z0p = b.proper("p0'").unwrap();
        assert_eq!(z0.square(), rat_int(-2));
        assert_eq!(pair(&z0, &z0p).unwrap(), rat_int(1));
        assert_eq!(z0p.square(), rat_int(-1));
        assert_eq!(adjunction_genus(&b.h()).unwrap(), rat_int(0));
    }

    #[test]
    fn double_cover_doubles() {
        let b = section4();
        let z0 = b.proper("p0").unwrap();
        let dc =
            double_cover_pullback(&b.lattice, &(2 * &b.h()), std::slice::from_ref(&z0)).unwrap();
        let h = dc.pullback(&b.h()).unwrap();
        assert_eq!(h.square(), rat_int(2));
        assert_eq!(dc.reduced_components[0].square(), rat_int(-1));
        let odd = double_cover_pullback(&b.lattice, &b.h(), &[]);
        assert!(matches!(odd, Err(DivError::OddBranch { .. })));
    }

    #[test]
    fn blow_down_conditions() {
        let b = section4();
        let e = b.total("q").unwrap();
        let bd = blow_down(&b.lattice, &e).unwrap();
        assert_eq!(bd.target.canonical().unwrap().square(), rat_int(-1));
        let h = bd.push(&b.h()).unwrap();
        assert_eq!(h.square(), rat_int(1));
        assert_eq!(bd.pull(&h).unwrap(), b.h());
        let z0 = b.proper("p0").unwrap();
        assert!(matches!(
            blow_down(&b.lattice, &z0),
            Err(DivError::NotExceptional { .. })
        ));
    }

    #[test]
    fn euler_steps() {
        assert_eq!(
            euler_bookkeeping(EulerStep::Blowup {
                base: 11,
                points: 5
            }),
            Ok(16)
        );
        assert_eq!(
            euler_bookkeeping(EulerStep::DoubleCoverBase {
                cover: 16,
                branch: 12
            }),
            Ok(14)
        );
        assert_eq!(
            euler_bookkeeping(EulerStep::DoubleCover {
                base: 14,
                branch: 0
            }),
            Ok(28)
        );
        assert!(euler_bookkeeping(EulerStep::DoubleCoverBase {
            cover: 15,
            branch: 0
        })
        .is_err());
    }

    #[test]
    fn noether() {
        assert!(noether_check(&SurfaceInvariants::regular(1, 11)));
        assert!(noether_check(&SurfaceInvariants::regular(-2, 14)));
        assert!(!noether_check(&SurfaceInvariants::regular(1, 10)));
    }

    #[test]
    fn solve_examples() {
        let lat = v_lattice();
        let r = lat.basis("R").unwrap();
        let basis: Vec<_> = (0..lat.rank()).map(|i| lat.basis_at(i)).collect();
        // x * R = R tested against every basis class
        assert_eq!(
            solve_class(std::slice::from_ref(&r), &r, &basis),
            Ok(vec![rat_int(1)])
        );
        let h = lat.basis("H").unwrap();
        assert!(matches!(
            solve_class(std::slice::from_ref(&r), &h, &basis),
            Err(DivError::Inconsistent { .. })
        ));
        let e1 = lat.basis("E1").unwrap();
        let e2 = lat.basis("E2").unwrap();
        assert!(matches!(
            solve_class(&[e1.clone(), e2.clone()], &e1, &[r]),
            Err(DivError::Underdetermined {
                free_dimension: 2,
                ..
            })
        ));
    }

    #[test]
    fn display() {
        let lat = v_lattice();
        let d = &lat.combo(&[(3, "H"), (-3, "E1"), (-1, "R")]).unwrap()
            + &lat.basis("E2").unwrap().scale(&rat(1, 2));
        assert_eq!(d.to_string(), "3*H - 3*E1 + 1/2*E2 - R");
        assert_eq!(lat.zero().to_string(), "0");
    }
}
