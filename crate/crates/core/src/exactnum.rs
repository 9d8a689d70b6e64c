//! Exact arithmetic in `Q` and in the cubic field `K = Q[u]/(u^3 + u^2 - 1)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficients of the minimal polynomial `u^3 + u^2 - 1`, constant term first.
pub const MIN_POLY: [i64; 4] = [-1, 0, 1, 1];

/// Rational root test on the monic integer cubic: any rational root divides
/// the constant term, so the only candidates are `1` and `-1`.
pub fn minimal_polynomial_is_irreducible() -> bool {
    let eval = |x: i64| MIN_POLY.iter().rev().fold(0i64, |acc, &c| acc * x + c);
    let constant = MIN_POLY[0].abs();
    (1..=constant)
        .filter(|d| constant % d == 0)
        .all(|d| eval(d) != 0 && eval(-d) != 0)
}

fn assert_irreducible() {
    static CHECKED: OnceLock<bool> = OnceLock::new();
    let ok = *CHECKED.get_or_init(minimal_polynomial_is_irreducible);
    assert!(ok, "u^3 + u^2 - 1 must be irreducible over Q");
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let err = || ExactError::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(ExactError::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// An element `(n0 + n1*u + n2*u^2) / d` of `K`, kept with `d > 0` and
/// `gcd(n0, n1, n2, d) = 1` so that equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nf {
    num: [BigInt; 3],
    den: BigInt,
}

impl Nf {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        let den = c0.denom().lcm(c1.denom()).lcm(c2.denom());
        let scaled = |c: &Rational| c.numer() * (&den / c.denom());
        Nf::from_parts([scaled(&c0), scaled(&c1), scaled(&c2)], den)
    }

    fn from_parts(mut num: [BigInt; 3], mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for n in &mut num {
                *n = -&*n;
            }
        }
        if !den.is_one() {
            let g = num.iter().fold(den.clone(), |g, n| g.gcd(n));
            if !g.is_one() {
                den /= &g;
                for n in &mut num {
                    *n /= &g;
                }
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        Nf { num, den }
    }

    pub fn from_rational(q: Rational) -> Self {
        Nf::from_parts(
            [q.numer().clone(), BigInt::zero(), BigInt::zero()],
            q.denom().clone(),
        )
    }

    pub fn from_int(n: i64) -> Self {
        Nf {
            num: [BigInt::from(n), BigInt::zero(), BigInt::zero()],
            den: BigInt::one(),
        }
    }

    /// Element with small integer coordinates `c0 + c1*u + c2*u^2`.
    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        Nf {
            num: [c0.into(), c1.into(), c2.into()],
            den: BigInt::one(),
        }
    }

    /// The generator `u`.
    pub fn u() -> Self {
        Nf::from_ints(0, 1, 0)
    }

    /// Coordinate of `u^k`.
    pub fn coeff(&self, k: usize) -> Rational {
        Rational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> [Rational; 3] {
        [self.coeff(0), self.coeff(1), self.coeff(2)]
    }

    pub fn is_rational(&self) -> bool {
        self.num[1].is_zero() && self.num[2].is_zero()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Nf::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm on `(x, u^3 + u^2 - 1)`.
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        assert_irreducible();
        let modulus: Vec<Rational> = MIN_POLY.iter().map(|&c| rat_int(c)).collect();
        let (g, s) = upoly::ext_gcd_left(&self.coeffs(), &modulus);
        // g is a nonzero constant because the modulus is irreducible.
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (i, c) in s.into_iter().enumerate() {
            out[i] = c * &scale;
        }
        let [c0, c1, c2] = out;
        Ok(Nf::new(c0, c1, c2))
    }

    pub fn checked_div(&self, rhs: &Nf) -> Result<Nf, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    /// Interval enclosure of the image under `u -> rho`, `rho` the real root
    /// of `u^3 + u^2 - 1`, of width below `10^-digits`.
    pub fn embed_real(&self, digits: u32) -> RealInterval {
        let digits = digits.max(1);
        if self.is_rational() {
            return RealInterval::point(self.coeff(0));
        }
        let target = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
        // Enclosure width is at most (|c1| + 2|c2|) times the root bracket width.
        let spread = self.coeff(1).abs() + self.coeff(2).abs() * rat_int(2);
        let mut bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 8;
        loop {
            let root = real_root_bracket(bits);
            let iv = self.eval_on(&root);
            if iv.width() < target {
                return iv;
            }
            bits += 16 + spread.to_integer().bits();
        }
    }

    fn eval_on(&self, root: &RealInterval) -> RealInterval {
        // root lies in (0, 1), so squaring is monotone on it.
        let sq = RealInterval::new(&root.lo * &root.lo, &root.hi * &root.hi);
        RealInterval::point(self.coeff(0))
            .add(&root.scale(&self.coeff(1)))
            .add(&sq.scale(&self.coeff(2)))
    }

    /// Evaluates the minimal polynomial on an element: `x^3 + x^2 - 1`.
    pub fn min_poly_at(x: &Nf) -> Nf {
        &(&x.pow(3) + &x.pow(2)) - &Nf::one()
    }
}

/// Bisection bracket `[lo, hi]` of the real root of `u^3 + u^2 - 1`.
///
/// The cubic has negative discriminant and so exactly one real root; it lies
/// in `(0, 1)` because the polynomial changes sign there.
pub fn real_root_bracket(bits: u64) -> RealInterval {
    let f = |x: &Rational| {
        MIN_POLY
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, &c| acc * x + rat_int(c))
    };
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    debug_assert!(f(&lo).is_negative() && f(&hi).is_positive());
    let half = rat(1, 2);
    for _ in 0..bits {
        let mid = (&lo + &hi) * &half;
        let v = f(&mid);
        if v.is_zero() {
            return RealInterval::point(mid);
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RealInterval::new(lo, hi)
}

/// Closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RealInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RealInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RealInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn scale(&self, k: &Rational) -> RealInterval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            RealInterval::new(a, b)
        } else {
            RealInterval::new(b, a)
        }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        RealInterval::new(lo, hi)
    }

    /// Outward-rounded decimal rendering with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let lo = (&self.lo * Rational::from_integer(scale.clone()))
            .floor()
            .to_integer();
        let hi = (&self.hi * Rational::from_integer(scale))
            .ceil()
            .to_integer();
        format!("[{}, {}]", decimal(&lo, digits), decimal(&hi, digits))
    }
}

fn decimal(scaled: &BigInt, digits: u32) -> String {
    if digits == 0 {
        return scaled.to_string();
    }
    let sign = if scaled.is_negative() { "-" } else { "" };
    let (int, frac) = scaled.abs().div_rem(&BigInt::from(10u32).pow(digits));
    format!(
        "{sign}{int}.{:0>width$}",
        frac.to_string(),
        width = digits as usize
    )
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Zero for Nf {
    fn zero() -> Self {
        Nf::from_int(0)
    }

    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }
}

impl One for Nf {
    fn one() -> Self {
        Nf::from_int(1)
    }
}

impl Nf {
    fn add_signed(&self, rhs: &Nf, negate: bool) -> Nf {
        let sign = |n: BigInt| if negate { -n } else { n };
        if self.den == rhs.den {
            let num = [0, 1, 2].map(|k| &self.num[k] + sign(rhs.num[k].clone()));
            return Nf::from_parts(num, self.den.clone());
        }
        let num = [0, 1, 2].map(|k| &self.num[k] * &rhs.den + sign(&rhs.num[k] * &self.den));
        Nf::from_parts(num, &self.den * &rhs.den)
    }
}

impl<'a> Add<&'a Nf> for &'a Nf {
    type Output = Nf;
    fn add(self, rhs: &Nf) -> Nf {
        self.add_signed(rhs, false)
    }
}

impl<'a> Sub<&'a Nf> for &'a Nf {
    type Output = Nf;
    fn sub(self, rhs: &Nf) -> Nf {
        self.add_signed(rhs, true)
    }
}

impl<'a> Mul<&'a Nf> for &'a Nf {
    type Output = Nf;
    fn mul(self, rhs: &Nf) -> Nf {
        if self.is_zero() || rhs.is_zero() {
            return Nf::zero();
        }
        let (a, b) = (&self.num, &rhs.num);
        let p0 = &a[0] * &b[0];
        let p1 = &a[0] * &b[1] + &a[1] * &b[0];
        let p2 = &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0];
        let p3 = &a[1] * &b[2] + &a[2] * &b[1];
        let p4 = &a[2] * &b[2];
        // u^3 = 1 - u^2, u^4 = u - 1 + u^2
        let num = [&p0 + &p3 - &p4, p1 + &p4, p2 - p3 + p4];
        Nf::from_parts(num, &self.den * &rhs.den)
    }
}

impl Neg for &Nf {
    type Output = Nf;
    fn neg(self) -> Nf {
        Nf {
            num: [-&self.num[0], -&self.num[1], -&self.num[2]],
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Nf> for Nf {
            type Output = Nf;
            fn $m(self, rhs: Nf) -> Nf {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Nf {
    type Output = Nf;
    fn neg(self) -> Nf {
        -&self
    }
}

/// Panics on division by zero, like the rational division it wraps.
impl Div<Nf> for Nf {
    type Output = Nf;
    fn div(self, rhs: Nf) -> Nf {
        self.checked_div(&rhs).expect("division by zero in K")
    }
}

impl AddAssign<&Nf> for Nf {
    fn add_assign(&mut self, rhs: &Nf) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Nf> for Nf {
    fn sub_assign(&mut self, rhs: &Nf) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Nf> for Nf {
    fn mul_assign(&mut self, rhs: &Nf) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Nf {
    fn from(n: i64) -> Self {
        Nf::from_int(n)
    }
}

impl From<Rational> for Nf {
    fn from(q: Rational) -> Self {
        Nf::from_rational(q)
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, q) in self.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let mag = q.abs();
            if first {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let power = match k {
                0 => "",
                1 => "u",
                _ => "u^2",
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{mag}*{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nf({self})")
    }
}

impl FromStr for Nf {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::text::parse_field_element(s)
    }
}

/// Dense univariate polynomials over `Q`, constant term first.
mod upoly {
    use super::Rational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<Rational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(Rational::zero());
        }
    }

    fn is_zero(p: &[Rational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn sub_mul(a: &[Rational], b: &[Rational], q: &[Rational]) -> Vec<Rational> {
        let len = a.len().max(b.len() + q.len());
        let mut out = vec![Rational::zero(); len];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, x) in b.iter().enumerate() {
            for (j, y) in q.iter().enumerate() {
                out[i + j] -= x * y;
            }
        }
        trim(&mut out);
        out
    }

    fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (vec![Rational::zero()], r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        while !is_zero(&r) && r.len() > db {
            let k = r.len() - 1 - db;
            let c = r.last().unwrap() / &lead;
            for (i, bc) in b.iter().enumerate() {
                r[i + k] -= &c * bc;
            }
            q[k] = c;
            r.pop();
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    /// Returns `(g, s)` with `s*a = g (mod m)`, `g = gcd(a, m)`.
    pub fn ext_gcd_left(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let (mut r0, mut r1) = (a.to_vec(), m.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (
            vec![Rational::from_integer(1.into())],
            vec![Rational::zero()],
        );
        while !is_zero(&r1) {
            let (q, r) = div_rem(&r0, &r1);
            let s = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Reduce the cofactor below degree 3.
        let (_, s0) = div_rem(&s0, m);
        let mut s0 = s0;
        s0.resize(3, Rational::zero());
        (r0, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn addition_examples() {
        let u = Nf::u();
        let u2 = Nf::from_ints(0, 0, 1);
        assert_eq!(&u + &u2, Nf::from_ints(0, 1, 1));
        assert_eq!(&u + &Nf::zero(), u);
        assert_eq!(&Nf::from_ints(1, 0, -1) + &u2, Nf::one());
    }

    #[test]
    fn multiplication_reduces_by_minimal_polynomial() {
        let u = Nf::u();
        let u2 = Nf::from_ints(0, 0, 1);
        assert_eq!(&u * &u2, Nf::from_ints(1, 0, -1));
        assert_eq!(&Nf::one() * &u2, u2);
    }

    #[test]
    fn u_fourth_power_against_long_division() {
        // u^4 divided by u^3 + u^2 - 1: u^4 = (u - 1)(u^3 + u^2 - 1) + u^2 + u - 1.
        let u2 = Nf::from_ints(0, 0, 1);
        assert_eq!(&u2 * &u2, Nf::from_ints(-1, 1, 1));
        assert_eq!(Nf::u().pow(4), Nf::from_ints(-1, 1, 1));
    }

    #[test]
    fn minimal_polynomial_vanishes() {
        assert!(Nf::min_poly_at(&Nf::u()).is_zero());
        assert!(minimal_polynomial_is_irreducible());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Nf::u().inv().unwrap(), Nf::from_ints(0, 1, 1));
        assert_eq!(Nf::one().inv().unwrap(), Nf::one());
        assert_eq!(Nf::zero().inv(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn inverse_of_denominator_of_b() {
        // Bezout cofactor of 2u^2 - 4u + 1 modulo u^3 + u^2 - 1, computed
        // independently with a computer algebra system.
        let x = Nf::from_ints(1, -4, 2);
        let y = x.inv().unwrap();
        assert_eq!(y, Nf::new(q(-19, 49), q(-32, 49), q(-22, 49)));
        assert_eq!(&x * &y, Nf::one());
    }

    #[test]
    fn rational_normalization() {
        let a = parse_rational("6/-4").unwrap();
        assert_eq!(a, q(-3, 2));
        assert_eq!(q(10, 20), q(1, 2));
        assert_eq!(parse_rational("1/0"), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn display_round_trip() {
        let x = Nf::new(q(1, 7), q(5, 7), q(3, 7));
        assert_eq!(x.to_string(), "1/7 + 5/7*u + 3/7*u^2");
        assert_eq!(Nf::from_ints(-1, 0, 1).to_string(), "-1 + u^2");
        assert_eq!(Nf::from_ints(0, -1, 0).to_string(), "-u");
        for s in ["1/7 + 5/7*u + 3/7*u^2", "-1 + u^2", "0", "-u", "2/3*u^2"] {
            assert_eq!(s.parse::<Nf>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn real_embedding() {
        let iv = Nf::u().embed_real(6);
        assert!(iv.width() < q(1, 1_000_000));
        assert!(iv.hi < q(754_879, 1_000_000) && iv.lo > q(754_877, 1_000_000));
        assert_eq!(Nf::one().embed_real(6), RealInterval::point(q(1, 1)));
        let zero = Nf::min_poly_at(&Nf::u()).embed_real(6);
        assert!(zero.contains(&Rational::zero()));
    }

    #[test]
    fn real_embedding_of_nonzero_polynomial_value_contains_zero() {
        // Evaluate u^3 + u^2 - 1 through interval arithmetic without reducing first.
        let root = real_root_bracket(40);
        let val = root
            .mul(&root)
            .mul(&root)
            .add(&root.mul(&root))
            .add(&RealInterval::point(q(-1, 1)));
        assert!(val.contains(&Rational::zero()));
        assert!(val.width() < q(1, 1_000_000));
    }

    #[test]
    fn decimal_rendering() {
        let iv = RealInterval::new(q(-1, 3), q(1, 3));
        assert_eq!(iv.to_decimal(3), "[-0.334, 0.334]");
    }
}
