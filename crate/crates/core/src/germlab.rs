//! Weighted-jet certificate for simple elliptic singularities of type
//! `z^2 + x^3 + y^6`.
//!
//! The pipeline, for a germ `g` of order two in three variables:
//!
//! 1. the quadratic part is `c * L^2` for a linear form `L` (rank one);
//! 2. in coordinates `(x, y, z = L)` the `z`-linear terms are sheared away,
//!    leaving `g ~ z^2 - D(x, y)`;
//! 3. the cubic part of `D` is `c' * l^3` for a linear form `l`;
//! 4. with `x = l`, weights `w(x, y, z) = (2, 1, 3)`, `D` has no terms of
//!    weight below six and its weight-six part
//!    `x^3 + alpha x^2 y^2 + beta x y^4 + gamma y^6` (up to sign and the
//!    `x^3` coefficient) has distinct roots, i.e. the cubic
//!    `s^3 + alpha s^2 + beta s + gamma` has nonzero discriminant.
//!
//! Every germ carries a total-degree truncation bound; a monomial of weight
//! at most six has total degree at most six, so the default bound of eight
//! leaves all weight-six data exact.

use std::fmt;

use thiserror::Error;

use crate::exactnum::Nf;
use crate::linalg::{self, Matrix};
use crate::mpoly::{MPoly, PolyError};
use crate::quintic::{self, SurfaceBundle};
use crate::scalar::Scalar;

/// Total-degree truncation used by the certificate pipeline.
pub const TRUNCATION: u32 = 8;
/// Target weighted degree of the principal part.
pub const TARGET_WEIGHT: u32 = 6;
/// Weights of `(x, y, z)`.
pub const WEIGHTS: [u32; 3] = [2, 1, 3];

const XYZ: [&str; 3] = ["x", "y", "z"];
const XY: [&str; 2] = ["x", "y"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("reference point index {0} is not in 1..=4")]
    BadIndex(usize),
    #[error("not singular: linear part {0}")]
    NotSingular(String),
    #[error("expected order two, found {0:?}")]
    OrderNotTwo(Option<u32>),
    #[error("quadratic part has rank {rank}, expected one")]
    RankNotOne { rank: usize },
    #[error("shearing stalled after {iterations} steps (mixed-term weight {weight})")]
    NonConvergent { iterations: usize, weight: u32 },
    #[error("discriminant germ has order {0:?}, expected three")]
    OrderNotThree(Option<u32>),
    #[error("cubic part is not a perfect cube (Hessian covariant {0})")]
    NotATripleLine(String),
    #[error("terms of weight below six survive: {0}")]
    LowerWeightTerms(String),
    #[error("weight-six part vanishes")]
    ZeroWeightSixPart,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl GermError {
    /// Pipeline stage at which the error arose.
    pub fn stage(&self) -> &'static str {
        match self {
            GermError::BadIndex(_) | GermError::NotSingular(_) | GermError::Poly(_) => "localize",
            GermError::OrderNotTwo(_) | GermError::RankNotOne { .. } => "split_square",
            GermError::NonConvergent { .. } => "eliminate_square_variable",
            GermError::OrderNotThree(_) | GermError::NotATripleLine(_) => "cube_tangent_cone",
            GermError::LowerWeightTerms(_) | GermError::ZeroWeightSixPart => "principal_part",
        }
    }
}

/// Truncated power series: a polynomial whose terms above `max_degree` are
/// not meaningful and are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Germ<S: Scalar> {
    poly: MPoly<S>,
    max_degree: u32,
}

impl<S: Scalar> Germ<S> {
    pub fn new(poly: MPoly<S>, max_degree: u32) -> Self {
        Germ {
            poly: poly.truncate(max_degree),
            max_degree,
        }
    }

    pub fn poly(&self) -> &MPoly<S> {
        &self.poly
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn vars(&self) -> Vec<&str> {
        self.poly.vars()
    }

    pub fn order(&self) -> Option<u32> {
        self.poly.order()
    }

    /// Terms of weighted degree at most `w` under `weights`.
    pub fn weighted_part(&self, weights: &[u32], w: u32) -> MPoly<S> {
        self.poly.filter_terms(|e| weighted_degree(e, weights) <= w)
    }

    fn compose(&self, images: &[MPoly<S>]) -> Germ<S> {
        let poly = self
            .poly
            .compose(images, Some(self.max_degree))
            .expect("matching arity");
        Germ {
            poly,
            max_degree: self.max_degree,
        }
    }
}

impl<S: Scalar> fmt::Display for Germ<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.poly, self.max_degree + 1)
    }
}

pub fn weighted_degree(exps: &[u32], weights: &[u32]) -> u32 {
    exps.iter().zip(weights).map(|(e, w)| e * w).sum()
}

/// Germ of `F5` at `a_i`, in the affine chart where the `i`-th coordinate is one.
pub fn localize(s: &SurfaceBundle, i: usize) -> Result<Germ<Nf>, GermError> {
    if !(1..=4).contains(&i) {
        return Err(GermError::BadIndex(i));
    }
    let local = s.f5.dehomogenize(quintic::chart_variable(i))?;
    singular_germ(local, TRUNCATION)
}

/// Wraps a polynomial as a germ at the origin, rejecting a nonzero constant
/// or linear part.
pub fn singular_germ<S: Scalar>(poly: MPoly<S>, max_degree: u32) -> Result<Germ<S>, GermError> {
    let low = poly.filter_terms(|e| e.iter().sum::<u32>() <= 1);
    if !low.is_zero() {
        return Err(GermError::NotSingular(low.to_string()));
    }
    Ok(Germ::new(poly, max_degree))
}

/// Symmetric matrix `M` with `q = v^T M v`.
pub fn quadratic_form_matrix<S: Scalar>(q: &MPoly<S>) -> Matrix<S> {
    let n = q.nvars();
    let half = S::from_integer(2)
        .checked_inv()
        .expect("characteristic zero");
    let mut m = vec![vec![S::zero(); n]; n];
    for (e, c) in q.terms() {
        if e.iter().sum::<u32>() != 2 {
            continue;
        }
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m[i][i] = c.clone();
        } else {
            let v = c.clone() * half.clone();
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    m
}

/// `q = scale * L^2`, with the first nonzero coefficient of `L` equal to one.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSplit<S> {
    pub scale: S,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> QuadraticSplit<S> {
    pub fn linear_form(&self, vars: &[&str]) -> MPoly<S> {
        MPoly::linear(vars, &self.coeffs)
    }
}

/// Writes a quadratic form of rank one as a multiple of a square.
pub fn split_quadratic<S: Scalar>(q: &MPoly<S>) -> Result<QuadraticSplit<S>, GermError> {
    let m = quadratic_form_matrix(q);
    let rank = linalg::rank(&m);
    if rank != 1 {
        return Err(GermError::RankNotOne { rank });
    }
    // For c v v^T some diagonal entry c v_i^2 is nonzero.
    let i = (0..m.len())
        .find(|&i| !m[i][i].is_zero())
        .expect("rank one symmetric");
    let row = &m[i];
    let lead = row
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .expect("nonzero row");
    let lead_inv = lead.checked_inv().expect("nonzero");
    let coeffs: Vec<S> = row.iter().map(|c| c.clone() * lead_inv.clone()).collect();
    let scale = lead.clone() * lead * m[i][i].checked_inv().expect("nonzero");
    Ok(QuadraticSplit { scale, coeffs })
}

/// Quadratic part `c L^2` of an order-two germ, and the germ divided by `c`.
pub fn split_square<S: Scalar>(g: &Germ<S>) -> Result<(QuadraticSplit<S>, Germ<S>), GermError> {
    if g.order() != Some(2) {
        return Err(GermError::OrderNotTwo(g.order()));
    }
    let split = split_quadratic(&g.poly.homogeneous_part(2))?;
    let inv = split.scale.checked_inv().expect("nonzero scale");
    let normalized = Germ::new(g.poly.scale(&inv), g.max_degree);
    Ok((split, normalized))
}

/// New coordinates `(x, y, z)` as linear forms in the germ's variables,
/// one row per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<S> {
    pub rows: [Vec<S>; 3],
}

impl<S: Scalar> Frame<S> {
    /// `z = L`, and `x, y` the two original variables other than the first
    /// one on which `L` depends.
    pub fn provisional(l: &[S]) -> Frame<S> {
        let k = l
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero linear form");
        let unit = |i: usize| {
            (0..3)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect::<Vec<_>>()
        };
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        Frame {
            rows: [unit(others[0]), unit(others[1]), l.to_vec()],
        }
    }

    /// Rewrites `g` in the coordinates `(x, y, z)`.
    pub fn apply(&self, g: &Germ<S>) -> Germ<S> {
        let m: Matrix<S> = self.rows.to_vec();
        let inv = linalg::inverse(&m).expect("frame is invertible");
        let images: Vec<MPoly<S>> = inv.iter().map(|row| MPoly::linear(&XYZ, row)).collect();
        g.compose(&images)
    }

    fn combine(&self, lx: &S, ly: &S) -> Vec<S> {
        (0..3)
            .map(|j| lx.clone() * self.rows[0][j].clone() + ly.clone() * self.rows[1][j].clone())
            .collect()
    }

    pub fn render(&self, vars: &[&str]) -> String {
        let names = ["x", "y", "z"];
        names
            .iter()
            .zip(&self.rows)
            .map(|(n, r)| format!("{n} = {}", MPoly::linear(vars, r)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Output of the square-completion step.
#[derive(Clone, Debug)]
pub struct Elimination<S: Scalar> {
    pub frame: Frame<S>,
    /// The germ in frame coordinates after shearing, divided by the constant
    /// `z^2` coefficient.
    pub sheared: Germ<S>,
    /// `D(x, y)` with `sheared = z^2 * unit - D`.
    pub discriminant: Germ<S>,
    pub iterations: usize,
    /// Weighted degree up to which `z^2 - D` agrees with `sheared`.
    pub validity_weight: u32,
}

/// Completes the square in `z = L` using the provisional frame for `L`.
pub fn eliminate_square_variable<S: Scalar>(
    g: &Germ<S>,
    split: &QuadraticSplit<S>,
    target_weight: u32,
) -> Result<Elimination<S>, GermError> {
    eliminate_in_frame(g, Frame::provisional(&split.coeffs), target_weight)
}

fn z_slice<S: Scalar>(g: &MPoly<S>, k: u32) -> MPoly<S> {
    let mut out = MPoly::zero(&XYZ);
    for (e, c) in g.terms() {
        if e[2] == k {
            out.add_term(vec![e[0], e[1], 0], c.clone());
        }
    }
    out
}

/// Inverse of a unit power series, truncated at `max_degree`.
fn series_inverse<S: Scalar>(u: &MPoly<S>, max_degree: u32) -> MPoly<S> {
    let vars = u.vars();
    let c0 = u.coefficient(&vec![0; u.nvars()]);
    let c0_inv = c0.checked_inv().expect("unit");
    // u = c0 (1 + r), 1/u = c0^{-1} sum (-r)^k
    let one = MPoly::one(&vars);
    let r = &u.scale(&c0_inv) - &one;
    let mut acc = one.clone();
    let mut power = one;
    for _ in 0..max_degree {
        power = power
            .mul_truncated(&r.neg(), Some(max_degree))
            .expect("same vars");
        if power.is_zero() {
            break;
        }
        acc = &acc + &power;
    }
    acc.scale(&c0_inv)
}

pub fn eliminate_in_frame<S: Scalar>(
    g: &Germ<S>,
    frame: Frame<S>,
    target_weight: u32,
) -> Result<Elimination<S>, GermError> {
    let max = g.max_degree;
    let mut cur = frame.apply(g);
    let c2 = cur.poly.coefficient(&[0, 0, 2]);
    if c2.is_zero() {
        return Err(GermError::RankNotOne { rank: 0 });
    }
    let half = S::from_integer(2)
        .checked_inv()
        .expect("characteristic zero");
    let mut last_weight: Option<u32> = None;
    let mut iterations = 0;
    loop {
        let h = z_slice(&cur.poly, 1);
        if h.is_zero() {
            break;
        }
        let weight = h
            .terms()
            .map(|(e, _)| weighted_degree(e, &WEIGHTS) + WEIGHTS[2])
            .min()
            .unwrap_or(0);
        if last_weight.is_some_and(|w| weight <= w) || iterations > max as usize {
            return Err(GermError::NonConvergent { iterations, weight });
        }
        last_weight = Some(weight);
        let unit = z_slice(&cur.poly, 2);
        let shift = h
            .mul_truncated(&series_inverse(&unit, max), Some(max))?
            .scale(&half);
        let images = [
            MPoly::var(&XYZ, "x")?,
            MPoly::var(&XYZ, "y")?,
            &MPoly::var(&XYZ, "z")? - &shift,
        ];
        cur = cur.compose(&images);
        iterations += 1;
    }
    let c2_inv = c2.checked_inv().expect("nonzero");
    let sheared = Germ::new(cur.poly.scale(&c2_inv), max);
    let free = z_slice(&sheared.poly, 0);
    let d = MPoly::from_terms(
        &XY,
        free.terms().map(|(e, c)| (vec![e[0], e[1]], -c.clone())),
    );
    Ok(Elimination {
        frame,
        sheared,
        discriminant: Germ::new(d, max),
        iterations,
        validity_weight: target_weight,
    })
}

/// `cubic part of D = scale * l^3`, `l = coeffs[0] x + coeffs[1] y` with the
/// first nonzero coefficient one.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentCone<S> {
    pub scale: S,
    pub coeffs: [S; 2],
}

/// Finds the triple line of the cubic part of a two-variable germ.
///
/// A binary cubic `a x^3 + b x^2 y + c x y^2 + d y^3` is a perfect cube
/// exactly when its Hessian covariant
/// `(b^2 - 3ac) x^2 + (bc - 9ad) xy + (c^2 - 3bd) y^2` vanishes.
pub fn cube_tangent_cone<S: Scalar>(d: &Germ<S>) -> Result<TangentCone<S>, GermError> {
    if d.order() != Some(3) {
        return Err(GermError::OrderNotThree(d.order()));
    }
    let p = &d.poly;
    let a = p.coefficient(&[3, 0]);
    let b = p.coefficient(&[2, 1]);
    let c = p.coefficient(&[1, 2]);
    let dd = p.coefficient(&[0, 3]);
    let k = |n: i64| S::from_integer(n);
    let h0 = b.clone() * b.clone() - k(3) * a.clone() * c.clone();
    let h1 = b.clone() * c.clone() - k(9) * a.clone() * dd.clone();
    let h2 = c.clone() * c.clone() - k(3) * b.clone() * dd.clone();
    if !(h0.is_zero() && h1.is_zero() && h2.is_zero()) {
        let hess = MPoly::from_terms(&XY, [(vec![2, 0], h0), (vec![1, 1], h1), (vec![0, 2], h2)]);
        return Err(GermError::NotATripleLine(hess.to_string()));
    }
    if !a.is_zero() {
        let t = b * (k(3) * a.clone()).checked_inv().expect("nonzero");
        Ok(TangentCone {
            scale: a,
            coeffs: [S::one(), t],
        })
    } else {
        Ok(TangentCone {
            scale: dd,
            coeffs: [S::zero(), S::one()],
        })
    }
}

/// `s^3 + alpha s^2 + beta s + gamma` has discriminant
/// `alpha^2 beta^2 - 4 beta^3 - 4 alpha^3 gamma - 27 gamma^2 + 18 alpha beta gamma`.
pub fn cubic_discriminant<S: Scalar>(alpha: &S, beta: &S, gamma: &S) -> S {
    let k = |n: i64| S::from_integer(n);
    let (a, b, g) = (alpha.clone(), beta.clone(), gamma.clone());
    a.clone() * a.clone() * b.clone() * b.clone()
        - k(4) * b.clone() * b.clone() * b.clone()
        - k(4) * a.clone() * a.clone() * a.clone() * g.clone()
        - k(27) * g.clone() * g.clone()
        + k(18) * a * b * g
}

#[derive(Clone, Debug)]
pub struct TildeE8Certificate<S: Scalar> {
    /// Quadratic part `scale * L^2` in the germ's own variables.
    pub square_root_linear_form: QuadraticSplit<S>,
    pub provisional: Elimination<S>,
    /// Triple line of the provisional discriminant, in provisional `(x, y)`.
    pub tangent_cone: TangentCone<S>,
    /// Final elimination, in the frame with `x` along the triple line.
    pub fin: Elimination<S>,
    /// Coefficient of `x^3` in `-D`; the principal part is divided by it.
    pub x_cubed_coefficient: S,
    /// `(alpha, beta, gamma)` of `x^3 + alpha x^2 y^2 + beta x y^4 + gamma y^6`.
    pub principal_part: [S; 3],
    pub cubic_resolvent_discriminant: S,
}

impl<S: Scalar> TildeE8Certificate<S> {
    pub fn passes(&self) -> bool {
        !self.cubic_resolvent_discriminant.is_zero()
    }

    pub fn discriminant_germ(&self) -> &Germ<S> {
        &self.fin.discriminant
    }

    /// Stage-by-stage rendering used by the verbose CLI output.
    pub fn describe(&self, vars: &[&str]) -> Vec<(String, String)> {
        let [alpha, beta, gamma] = &self.principal_part;
        let sq = &self.square_root_linear_form;
        let tc = &self.tangent_cone;
        let weights = [WEIGHTS[0], WEIGHTS[1]];
        vec![
            (
                "split_square".into(),
                format!("quadratic part = ({}) * ({})^2", sq.scale, sq.linear_form(vars)),
            ),
            ("provisional frame".into(), self.provisional.frame.render(vars)),
            (
                "provisional discriminant (weight <= 6)".into(),
                self.provisional.discriminant.weighted_part(&weights, TARGET_WEIGHT).to_string(),
            ),
            (
                "cube_tangent_cone".into(),
                format!("cubic part = ({}) * ({})^3", tc.scale, MPoly::linear(&XY, &tc.coeffs)),
            ),
            ("final frame".into(), self.fin.frame.render(vars)),
            (
                "eliminate_square_variable".into(),
                format!(
                    "{} shear step(s); D (weight <= 6) = {}",
                    self.fin.iterations,
                    self.fin.discriminant.weighted_part(&weights, TARGET_WEIGHT)
                ),
            ),
            (
                "principal part".into(),
                format!(
                    "-D = ({}) * (x^3 + ({alpha})*x^2*y^2 + ({beta})*x*y^4 + ({gamma})*y^6) + higher weight",
                    self.x_cubed_coefficient
                ),
            ),
            (
                "cubic resolvent discriminant".into(),
                format!("disc(s^3 + alpha s^2 + beta s + gamma) = {}", self.cubic_resolvent_discriminant),
            ),
            ("verdict".into(), if self.passes() { "PASS".into() } else { "FAIL".into() }),
        ]
    }
}

/// Runs the whole pipeline on an order-two germ in three variables.
pub fn tilde_e8_certificate<S: Scalar>(g: &Germ<S>) -> Result<TildeE8Certificate<S>, GermError> {
    if g.poly.nvars() != 3 {
        return Err(GermError::Poly(PolyError::Arity {
            expected: 3,
            got: g.poly.nvars(),
        }));
    }
    let (split, _) = split_square(g)?;
    let provisional = eliminate_square_variable(g, &split, TARGET_WEIGHT)?;
    let tangent_cone = cube_tangent_cone(&provisional.discriminant)?;

    // Rotate so that x runs along the triple line and redo the elimination.
    let [lx, ly] = &tangent_cone.coeffs;
    let pf = &provisional.frame;
    let x_row = pf.combine(lx, ly);
    let y_row = if lx.is_zero() {
        pf.rows[0].clone()
    } else {
        pf.rows[1].clone()
    };
    let frame = Frame {
        rows: [x_row, y_row, split.coeffs.clone()],
    };
    let fin = eliminate_in_frame(g, frame, TARGET_WEIGHT)?;
    let d = &fin.discriminant;

    let weights = [WEIGHTS[0], WEIGHTS[1]];
    let lower = d.weighted_part(&weights, TARGET_WEIGHT - 1);
    if !lower.is_zero() {
        return Err(GermError::LowerWeightTerms(lower.to_string()));
    }
    let p = d.poly.neg();
    let c3 = p.coefficient(&[3, 0]);
    if c3.is_zero() {
        return Err(GermError::ZeroWeightSixPart);
    }
    let inv = c3.checked_inv().expect("nonzero");
    let alpha = p.coefficient(&[2, 2]) * inv.clone();
    let beta = p.coefficient(&[1, 4]) * inv.clone();
    let gamma = p.coefficient(&[0, 6]) * inv;
    let disc = cubic_discriminant(&alpha, &beta, &gamma);
    Ok(TildeE8Certificate {
        square_root_linear_form: split,
        provisional,
        tangent_cone,
        fin,
        x_cubed_coefficient: c3,
        principal_part: [alpha, beta, gamma],
        cubic_resolvent_discriminant: disc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Rational};
    use crate::text::parse_poly;
    use num_traits::Zero;

    fn germ(s: &str) -> Germ<Nf> {
        Germ::new(parse_poly(s, &XYZ).unwrap(), TRUNCATION)
    }

    fn disc_of(s: &str) -> Result<TildeE8Certificate<Nf>, GermError> {
        tilde_e8_certificate(&germ(s))
    }

    #[test]
    fn normal_form_certifies() {
        let cert = disc_of("z^2 + x^3 + y^6").unwrap();
        assert!(cert.passes());
        assert_eq!(
            cert.principal_part,
            [Nf::from_int(0), Nf::from_int(0), Nf::from_int(1)]
        );
        assert_eq!(cert.cubic_resolvent_discriminant, Nf::from_int(-27));
    }

    #[test]
    fn non_isolated_germ_fails() {
        let cert = disc_of("z^2 + x^3").unwrap();
        assert!(!cert.passes());
        assert!(cert.cubic_resolvent_discriminant.is_zero());
    }

    #[test]
    fn quartic_discriminant_fails_at_cube_step() {
        let err = disc_of("z^2 + x^4 + y^4").unwrap_err();
        assert_eq!(err, GermError::OrderNotThree(Some(4)));
        assert_eq!(err.stage(), "cube_tangent_cone");
    }

    #[test]
    fn lower_weight_germs_are_rejected() {
        // E6 and E8 singularities: the weight filtration sees y^4 and y^5.
        assert!(matches!(
            disc_of("z^2 + x^3 + y^4"),
            Err(GermError::LowerWeightTerms(_))
        ));
        assert!(matches!(
            disc_of("z^2 + x^3 + y^5"),
            Err(GermError::LowerWeightTerms(_))
        ));
    }

    #[test]
    fn split_square_examples() {
        let (split, _) = split_square(&germ("z^2 + x^3")).unwrap();
        assert_eq!(
            split.coeffs,
            vec![Nf::from_int(0), Nf::from_int(0), Nf::from_int(1)]
        );
        assert_eq!(
            split_square(&germ("x^2 + y^2")).unwrap_err(),
            GermError::RankNotOne { rank: 2 }
        );
        assert_eq!(
            split_square(&germ("x^3")).unwrap_err(),
            GermError::OrderNotTwo(Some(3))
        );
    }

    #[test]
    fn shear_example_from_hand_expansion() {
        // z^2 + z x^3 + y^6: shearing z -> z - x^3/2 gives z^2 - x^6/4 + y^6,
        // so D = x^6/4 - y^6, which is -y^6 up to weight six.
        let g = germ("z^2 + z*x^3 + y^6");
        let (split, _) = split_square(&g).unwrap();
        let el = eliminate_square_variable(&g, &split, TARGET_WEIGHT).unwrap();
        let expected = parse_poly("x^6/4 - y^6", &XY).unwrap();
        assert_eq!(el.discriminant.poly(), &expected);
        assert_eq!(
            el.discriminant.weighted_part(&[2, 1], 6),
            parse_poly("-y^6", &XY).unwrap()
        );
    }

    #[test]
    fn already_completed_square() {
        let g = germ("z^2 + x^3 + y^6");
        let (split, _) = split_square(&g).unwrap();
        let el = eliminate_square_variable(&g, &split, TARGET_WEIGHT).unwrap();
        assert_eq!(el.iterations, 0);
        assert_eq!(
            el.discriminant.poly(),
            &parse_poly("-x^3 - y^6", &XY).unwrap()
        );
        let g = germ("z^2");
        let (split, _) = split_square(&g).unwrap();
        let el = eliminate_square_variable(&g, &split, TARGET_WEIGHT).unwrap();
        assert!(el.discriminant.poly().is_zero());
        assert_eq!(
            cube_tangent_cone(&el.discriminant),
            Err(GermError::OrderNotThree(None))
        );
    }

    #[test]
    fn tangent_cone_examples() {
        let d = Germ::new(parse_poly("-(x^3 + y^6)", &XY).unwrap(), TRUNCATION);
        let tc = cube_tangent_cone(&d).unwrap();
        assert_eq!(tc.coeffs, [Nf::from_int(1), Nf::from_int(0)]);
        assert_eq!(tc.scale, Nf::from_int(-1));
        let d = Germ::new(parse_poly("x^3 + x*y^2", &XY).unwrap(), TRUNCATION);
        assert!(matches!(
            cube_tangent_cone(&d),
            Err(GermError::NotATripleLine(_))
        ));
        let d = Germ::new(parse_poly("(2*x - u*y)^3 + y^5", &XY).unwrap(), TRUNCATION);
        let tc = cube_tangent_cone(&d).unwrap();
        assert_eq!(tc.scale, Nf::from_int(8));
        assert_eq!(tc.coeffs[1], -(Nf::u() * Nf::from_rational(rat(1, 2))));
    }

    #[test]
    fn mixed_shear_needs_several_steps() {
        // z^2 (1 + y) + z y^2 + x^3 + y^6: the z^2 y term feeds back a y^5
        // after the first shear, which the pipeline must catch.
        let g = germ("z^2*(1 + y) + z*y^2 + x^3 + y^6");
        let err = tilde_e8_certificate(&g).unwrap_err();
        assert!(matches!(err, GermError::LowerWeightTerms(_)), "{err}");
    }

    #[test]
    fn works_over_the_rationals() {
        let p: MPoly<Rational> = MPoly::from_terms(
            &XYZ,
            [
                (vec![0, 0, 2], rat(1, 1)),
                (vec![3, 0, 0], rat(1, 1)),
                (vec![0, 6, 0], rat(1, 1)),
            ],
        );
        let cert = tilde_e8_certificate(&Germ::new(p, TRUNCATION)).unwrap();
        assert!(cert.passes());
        assert_eq!(cert.cubic_resolvent_discriminant, rat(-27, 1));
    }

    #[test]
    fn not_singular_point() {
        let p = parse_poly("x + y^2", &XYZ).unwrap();
        assert!(matches!(
            singular_germ(p, TRUNCATION),
            Err(GermError::NotSingular(_))
        ));
        let s = SurfaceBundle::standard().unwrap();
        assert_eq!(localize(&s, 5), Err(GermError::BadIndex(5)));
    }

    #[test]
    fn quintic_reference_points_certify() {
        let s = SurfaceBundle::standard().unwrap();
        for i in 1..=4 {
            let g = localize(&s, i).unwrap();
            let cert =
                tilde_e8_certificate(&g).unwrap_or_else(|e| panic!("a{i}: {e} [{}]", e.stage()));
            for (k, v) in cert.describe(&g.vars()) {
                println!("a{i} {k}: {v}");
            }
            assert!(cert.passes(), "a{i}");
        }
    }
}
