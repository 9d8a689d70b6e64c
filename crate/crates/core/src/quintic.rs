//! The sigma-invariant quintic `F5` and its global symbolic checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use num_traits::Zero;

use crate::exactnum::{ExactError, Nf};
use crate::germlab::{self, QuadraticSplit};
use crate::linalg;
use crate::mpoly::{
    binary_form_squarefree, LinearMap4, MPoly, PolyError, ProjectivePoint, SquarefreeWitness,
};
use crate::{Map4, Point, Poly};

pub const VARS: [&str; 4] = ["X", "Y", "Z", "T"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuinticError {
    #[error("parameter `{name}` has a vanishing denominator")]
    ZeroDenominator { name: &'static str },
    #[error("check failed at {point}: {witness}")]
    CheckFailed { point: String, witness: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The six coefficients of the quintic, as elements of `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parameters {
    pub a: Nf,
    pub b: Nf,
    pub c: Nf,
    pub d: Nf,
    pub e: Nf,
    pub f: Nf,
}

impl Parameters {
    pub fn named(&self) -> [(&'static str, &Nf); 6] {
        [
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("e", &self.e),
            ("f", &self.f),
        ]
    }
}

/// `-(num)/(den)` or `(num)/(den)` with both given as `c2*u^2 + c1*u + c0`.
fn quotient(
    name: &'static str,
    negate: bool,
    num: (i64, i64, i64),
    den: (i64, i64, i64),
) -> Result<Nf, QuinticError> {
    let n = Nf::from_ints(num.2, num.1, num.0);
    let d = Nf::from_ints(den.2, den.1, den.0);
    let inv = d
        .inv()
        .map_err(|_| QuinticError::ZeroDenominator { name })?;
    let q = &n * &inv;
    Ok(if negate { -q } else { q })
}

/// The parameter values making the four coordinate points tacnodal.
pub fn build_parameters() -> Result<Parameters, QuinticError> {
    Ok(Parameters {
        a: Nf::from_ints(0, 0, 1),
        b: quotient("b", true, (1, -1, 1), (2, -4, 1))?,
        c: quotient("c", true, (34, -18, -7), (29, 22, -33))?,
        d: quotient("d", false, (7, 4, -6), (0, 3, -2))?,
        e: quotient("e", true, (3, 6, -8), (3, 1, -2))?,
        f: quotient("f", true, (225, -156, -10), (5, 212, -163))?,
    })
}

/// The quintic with its symmetry and the special points and lines.
#[derive(Clone, Debug)]
pub struct SurfaceBundle {
    pub params: Parameters,
    pub f5: Poly,
    pub sigma: Map4,
    /// `a1..a4`, the coordinate points.
    pub reference_points: [Point; 4],
    pub p0: Point,
    pub q0: Point,
    /// Spanning points of `r = {X+Z = Y+T = 0}`.
    pub line_r: (Point, Point),
    /// Spanning points of `r' = {X-Z = Y-T = 0}`.
    pub line_r_prime: (Point, Point),
}

/// `sigma: (X,Y,Z,T) -> (T,X,Y,Z)`.
pub fn sigma() -> Map4 {
    LinearMap4::from_permutation([3, 0, 1, 2])
}

fn monomial_sum(exps: &[[u32; 4]]) -> Poly {
    MPoly::from_terms(&VARS, exps.iter().map(|e| (e.to_vec(), Nf::from_int(1))))
}

pub const C_BLOCK: [[u32; 4]; 4] = [[2, 1, 1, 1], [1, 2, 1, 1], [1, 1, 2, 1], [1, 1, 1, 2]];
pub const D_BLOCK: [[u32; 4]; 4] = [[2, 2, 1, 0], [2, 1, 0, 2], [1, 0, 2, 2], [0, 2, 2, 1]];
pub const E_BLOCK: [[u32; 4]; 4] = [[2, 2, 0, 1], [2, 0, 1, 2], [1, 2, 2, 0], [0, 1, 2, 2]];
pub const F_BLOCK: [[u32; 4]; 4] = [[2, 1, 2, 0], [2, 0, 2, 1], [1, 2, 0, 2], [0, 2, 1, 2]];

/// Assembles `F5` term by term from the four squared-linear-times-cube terms
/// and the four monomial blocks.
pub fn build_quintic(p: &Parameters) -> SurfaceBundle {
    let v = |i: usize| MPoly::var(&VARS, VARS[i]).expect("known variable");
    let (x, y, z, t) = (v(0), v(1), v(2), v(3));
    let lin = |ca: &Poly, cb: &Poly, c1: &Poly| &(&ca.scale(&p.a) + &cb.scale(&p.b)) + c1;
    let squares = [
        (lin(&t, &z, &y), &x),
        (lin(&x, &t, &z), &y),
        (lin(&y, &x, &t), &z),
        (lin(&z, &y, &x), &t),
    ];
    let mut f5 = Poly::zero(&VARS);
    for (l, cube_var) in &squares {
        f5 = &f5 + &(&l.pow(2) * &cube_var.pow(3));
    }
    for (block, coeff) in [
        (C_BLOCK, &p.c),
        (D_BLOCK, &p.d),
        (E_BLOCK, &p.e),
        (F_BLOCK, &p.f),
    ] {
        f5 = &f5 + &monomial_sum(&block).scale(coeff);
    }
    let pt = |c: [i64; 4]| ProjectivePoint::from_ints(c);
    SurfaceBundle {
        params: p.clone(),
        f5,
        sigma: sigma(),
        reference_points: [
            pt([1, 0, 0, 0]),
            pt([0, 1, 0, 0]),
            pt([0, 0, 1, 0]),
            pt([0, 0, 0, 1]),
        ],
        p0: pt([1, 1, 1, 1]),
        q0: pt([1, -1, 1, -1]),
        line_r: (pt([1, 0, -1, 0]), pt([0, 1, 0, -1])),
        line_r_prime: (pt([1, 0, 1, 0]), pt([0, 1, 0, 1])),
    }
}

impl SurfaceBundle {
    pub fn standard() -> Result<SurfaceBundle, QuinticError> {
        Ok(build_quintic(&build_parameters()?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Invariance {
    /// `f . m = f` exactly.
    Strict,
    /// `f . m = k f` for the recorded `k != 1`.
    UpToScalar(Nf),
    /// Not invariant; carries `f . m - f`.
    Fails(Poly),
}

impl Invariance {
    pub fn holds(&self) -> bool {
        !matches!(self, Invariance::Fails(_))
    }
}

/// Compares `f . m` with `f`, falling back to a scalar multiple.
pub fn invariance(f: &Poly, m: &Map4) -> Result<Invariance, QuinticError> {
    let g = f.substitute_linear(m)?;
    let diff = &g - f;
    if diff.is_zero() {
        return Ok(Invariance::Strict);
    }
    if let Some((e, c)) = f.terms().next_back() {
        let k = g.coefficient(e).checked_div(c)?;
        if !k.is_zero() && (&g - &f.scale(&k)).is_zero() {
            return Ok(Invariance::UpToScalar(k));
        }
    }
    Ok(Invariance::Fails(diff))
}

pub fn is_invariant(f: &Poly, m: &Map4) -> bool {
    matches!(invariance(f, m), Ok(Invariance::Strict))
}

pub fn check_sigma_invariance(s: &SurfaceBundle) -> Result<Invariance, QuinticError> {
    invariance(&s.f5, &s.sigma)
}

#[derive(Clone, Debug)]
pub struct FixedPointEntry {
    pub label: String,
    pub point: Point,
    pub image: Point,
    pub fixed: bool,
}

#[derive(Clone, Debug)]
pub struct FixedPointReport {
    pub sigma_fourth_is_identity: bool,
    /// `sigma^2` is not a scalar matrix, so `sigma` has order exactly four.
    pub sigma_square_nontrivial: bool,
    pub entries: Vec<FixedPointEntry>,
}

impl FixedPointReport {
    pub fn all_fixed(&self) -> bool {
        self.entries.iter().all(|e| e.fixed)
    }

    pub fn ok(&self) -> bool {
        self.sigma_fourth_is_identity && self.sigma_square_nontrivial && self.all_fixed()
    }
}

fn fixed_entry(label: String, m: &Map4, p: &Point) -> FixedPointEntry {
    let image = m.apply(p).unwrap_or_else(|| p.clone());
    // A singular map can send p to the zero vector, which is never "fixed".
    let fixed = m.apply(p).is_some_and(|img| img.projectively_equal(p));
    FixedPointEntry {
        label,
        point: p.clone(),
        image,
        fixed,
    }
}

/// `sigma` fixes `P0` and `Q0`; `sigma^2` fixes both lines pointwise, tested
/// on the spanning points and one pseudo-random combination of each.
pub fn check_fixed_points(s: &SurfaceBundle) -> FixedPointReport {
    let sigma2 = s.sigma.pow(2);
    let mut entries = vec![
        fixed_entry("sigma(P0)".into(), &s.sigma, &s.p0),
        fixed_entry("sigma(Q0)".into(), &s.sigma, &s.q0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, (p, q)) in [("r", &s.line_r), ("r'", &s.line_r_prime)] {
        entries.push(fixed_entry(
            format!("sigma^2 on {name}, first spanning point"),
            &sigma2,
            p,
        ));
        entries.push(fixed_entry(
            format!("sigma^2 on {name}, second spanning point"),
            &sigma2,
            q,
        ));
        let (a, b) = (rng.gen_range(1..=97i64), rng.gen_range(1..=97i64));
        let combo = p
            .combine(&Nf::from_int(a), q, &Nf::from_int(b))
            .expect("distinct spanning points");
        entries.push(fixed_entry(
            format!("sigma^2 on {name}, {a}*p + {b}*q"),
            &sigma2,
            &combo,
        ));
    }
    FixedPointReport {
        sigma_fourth_is_identity: s.sigma.pow(4) == LinearMap4::identity(),
        sigma_square_nontrivial: !sigma2.is_scalar(),
        entries,
    }
}

#[derive(Clone, Debug)]
pub struct LineReport {
    pub on_r: Poly,
    pub on_r_prime: Poly,
    pub r_prime_degree: Option<u32>,
    pub r_prime_squarefree: Option<SquarefreeWitness<Nf>>,
    /// Value of the restriction on `r'` at the parameter `(1, -1)` of `Q0`.
    pub value_at_q0: Nf,
}

impl LineReport {
    pub fn r_contained(&self) -> bool {
        self.on_r.is_zero()
    }

    pub fn r_prime_five_distinct_points(&self) -> bool {
        self.r_prime_degree == Some(5)
            && self
                .r_prime_squarefree
                .as_ref()
                .is_some_and(|w| w.squarefree)
            && self.value_at_q0.is_zero()
    }

    pub fn ok(&self) -> bool {
        self.r_contained() && self.r_prime_five_distinct_points()
    }
}

pub fn check_line_containment(s: &SurfaceBundle) -> Result<LineReport, QuinticError> {
    let on_r = s.f5.restrict_to_line(&s.line_r.0, &s.line_r.1)?;
    let on_r_prime =
        s.f5.restrict_to_line(&s.line_r_prime.0, &s.line_r_prime.1)?;
    let r_prime_squarefree = if on_r_prime.is_zero() {
        None
    } else {
        Some(binary_form_squarefree(&on_r_prime)?)
    };
    let value_at_q0 = on_r_prime.eval(&[Nf::from_int(1), Nf::from_int(-1)])?;
    Ok(LineReport {
        r_prime_degree: on_r_prime.total_degree(),
        on_r,
        on_r_prime,
        r_prime_squarefree,
        value_at_q0,
    })
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub index: usize,
    pub value: Nf,
    pub gradient: Vec<Nf>,
    /// Quadratic part of the dehomogenized polynomial in the chart at the point.
    pub quadratic_part: Poly,
    pub hessian_rank: usize,
    /// `quadratic_part = scale * linear_form^2`.
    pub split: QuadraticSplit<Nf>,
    pub linear_form: Poly,
}

/// Index of the chart coordinate that equals one at `a_i` (1-based).
pub fn chart_variable(i: usize) -> &'static str {
    VARS[i - 1]
}

/// Value, gradient and rank-one quadratic part at `a_index` (1-based).
pub fn critical_point(s: &SurfaceBundle, index: usize) -> Result<CriticalPoint, QuinticError> {
    let a = &s.reference_points[index - 1];
    let label = format!("a{index} = {a}");
    let value = s.f5.eval(&a.coords)?;
    let gradient =
        s.f5.gradient()
            .iter()
            .map(|g| g.eval(&a.coords))
            .collect::<Result<Vec<_>, _>>()?;
    if !value.is_zero() {
        return Err(QuinticError::CheckFailed {
            point: label,
            witness: format!("F5 = {value}"),
        });
    }
    if let Some((i, g)) = gradient.iter().enumerate().find(|(_, g)| !g.is_zero()) {
        return Err(QuinticError::CheckFailed {
            point: label,
            witness: format!("dF5/d{} = {g}", VARS[i]),
        });
    }
    let local = s.f5.dehomogenize(chart_variable(index))?;
    let quadratic_part = local.homogeneous_part(2);
    let hessian = germlab::quadratic_form_matrix(&quadratic_part);
    let hessian_rank = linalg::rank(&hessian);
    let split =
        germlab::split_quadratic(&quadratic_part).map_err(|e| QuinticError::CheckFailed {
            point: label.clone(),
            witness: format!("{e}; quadratic part {quadratic_part}"),
        })?;
    let linear_form = split.linear_form(&local.vars());
    Ok(CriticalPoint {
        index,
        value,
        gradient,
        quadratic_part,
        hessian_rank,
        split,
        linear_form,
    })
}

pub fn check_critical_points(s: &SurfaceBundle) -> Result<Vec<CriticalPoint>, QuinticError> {
    (1..=4).map(|i| critical_point(s, i)).collect()
}

/// The pencil generators `YT` and `XZ` vanish at every `a_i`.
pub fn check_quadric_base_points(s: &SurfaceBundle) -> Result<Vec<(String, Nf)>, QuinticError> {
    let yt = crate::text::parse_poly("Y*T", &VARS)?;
    let xz = crate::text::parse_poly("X*Z", &VARS)?;
    let mut out = Vec::new();
    for (k, a) in s.reference_points.iter().enumerate() {
        for (name, q) in [("YT", &yt), ("XZ", &xz)] {
            out.push((format!("{name}(a{})", k + 1), q.eval(&a.coords)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;
    use num_traits::ToPrimitive;

    fn bundle() -> SurfaceBundle {
        SurfaceBundle::standard().unwrap()
    }

    #[test]
    fn parameter_a_is_u_squared() {
        let p = build_parameters().unwrap();
        assert_eq!(p.a, Nf::from_ints(0, 0, 1));
        assert!(Nf::from_ints(1, -4, 2).inv().is_ok());
    }

    #[test]
    fn parameter_b_real_value() {
        // Independent check: b = -(u^2 - u + 1)/(2u^2 - 4u + 1) at u = 0.7548776662...
        // evaluated in floating point is about 3.3557; the certified interval must
        // agree to the displayed digits.
        let b = build_parameters().unwrap().b;
        let iv = b.embed_real(6);
        let u = 0.754_877_666_246_692_8_f64;
        let approx = -(u * u - u + 1.0) / (2.0 * u * u - 4.0 * u + 1.0);
        let to_f64 =
            |q: &crate::Rational| q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
        let lo = to_f64(&iv.lo);
        assert!((lo - approx).abs() < 1e-5, "{lo} vs {approx}");
    }

    #[test]
    fn c_block_has_four_monomials() {
        assert_eq!(monomial_sum(&C_BLOCK).num_terms(), 4);
        let text = monomial_sum(&C_BLOCK).to_string();
        assert_eq!(text, "X^2*Y*Z*T + X*Y^2*Z*T + X*Y*Z^2*T + X*Y*Z*T^2");
    }

    #[test]
    fn quintic_is_homogeneous_of_degree_five() {
        let s = bundle();
        assert!(s.f5.is_homogeneous());
        assert_eq!(s.f5.total_degree(), Some(5));
    }

    #[test]
    fn coefficient_of_x3y2_is_one() {
        // (aT + bZ + Y)^2 X^3 contributes Y^2 X^3 with coefficient 1; no other
        // displayed term contains X^3 Y^2.
        assert_eq!(bundle().f5.coefficient(&[3, 2, 0, 0]), Nf::from_int(1));
    }

    #[test]
    fn sigma_invariance() {
        let s = bundle();
        assert_eq!(check_sigma_invariance(&s).unwrap(), Invariance::Strict);
        let xz = parse_poly("X*Z", &VARS).unwrap();
        assert!(is_invariant(&xz, &s.sigma.pow(2)));
        let x5 = parse_poly("X^5", &VARS).unwrap();
        assert!(!is_invariant(&x5, &s.sigma));
        assert!(matches!(
            invariance(&x5, &s.sigma).unwrap(),
            Invariance::Fails(_)
        ));
        let anti = parse_poly("X - Y + Z - T", &VARS).unwrap();
        assert_eq!(
            invariance(&anti, &s.sigma).unwrap(),
            Invariance::UpToScalar(Nf::from_int(-1))
        );
    }

    #[test]
    fn sigma_has_order_four() {
        let s = sigma();
        assert_eq!(s.pow(4), LinearMap4::identity());
        assert!(!s.pow(2).is_scalar());
    }

    #[test]
    fn fixed_points() {
        let s = bundle();
        let rep = check_fixed_points(&s);
        assert!(rep.ok(), "{rep:?}");
        let generic = ProjectivePoint::from_ints([1, 2, 3, 4]);
        assert!(!fixed_entry("generic".into(), &s.sigma, &generic).fixed);
    }

    #[test]
    fn lines() {
        let rep = check_line_containment(&bundle()).unwrap();
        assert!(rep.r_contained());
        assert_eq!(rep.r_prime_degree, Some(5));
        assert!(rep.r_prime_squarefree.as_ref().unwrap().squarefree);
        assert!(rep.value_at_q0.is_zero());
    }

    #[test]
    fn critical_points_have_rank_one_quadratic_part() {
        let s = bundle();
        let pts = check_critical_points(&s).unwrap();
        assert_eq!(pts.len(), 4);
        for cp in &pts {
            assert_eq!(cp.hessian_rank, 1);
        }
        let p = &s.params;
        let expected = MPoly::linear(
            &["Y", "Z", "T"],
            &[Nf::from_int(1), p.b.clone(), p.a.clone()],
        );
        assert_eq!(pts[0].linear_form, expected);
        assert_eq!(pts[0].quadratic_part, expected.pow(2));
    }

    #[test]
    fn point_of_r_is_not_critical() {
        // (1,0,-1,0) lies on r; the gradient there is computed exactly.
        let s = bundle();
        let p = ProjectivePoint::<Nf>::from_ints([1, 0, -1, 0]);
        assert!(s.f5.eval(&p.coords).unwrap().is_zero());
        let grad: Vec<Nf> =
            s.f5.gradient()
                .iter()
                .map(|g| g.eval(&p.coords).unwrap())
                .collect();
        assert!(grad.iter().any(|g| !g.is_zero()));
    }

    #[test]
    fn quadric_pencil_base_points() {
        let vals = check_quadric_base_points(&bundle()).unwrap();
        assert_eq!(vals.len(), 8);
        assert!(vals.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn perturbed_parameter_breaks_critical_points_or_not() {
        let mut p = build_parameters().unwrap();
        p.a = Nf::u();
        let s = build_quintic(&p);
        // Perturbing a keeps the displayed shape, so the points stay critical.
        assert!(check_critical_points(&s).is_ok());
        assert_eq!(check_sigma_invariance(&s).unwrap(), Invariance::Strict);
    }
}
