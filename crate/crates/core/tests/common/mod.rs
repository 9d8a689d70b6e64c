//! Property checks shared by the acceptance harness and the proptest target.
#![allow(dead_code)]

use godeaux::divcalc::{double_cover_pullback, pair, DivisorClass};
use godeaux::exactnum::{rat, Rational};
use godeaux::germlab::{self, Germ};
use godeaux::scenarios::section4_blowup;
use godeaux::text::parse_poly;
use godeaux::{linalg, MPoly, Nf};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

pub fn field_element() -> impl Strategy<Value = Nf> {
    (small_rational(), small_rational(), small_rational()).prop_map(|(a, b, c)| Nf::new(a, b, c))
}

const XYZT: [&str; 4] = ["X", "Y", "Z", "T"];

/// Sparse polynomial in `X, Y, Z, T` with partial degrees at most 2.
pub fn small_poly() -> impl Strategy<Value = MPoly<Nf>> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 4), field_element()), 1..5)
        .prop_map(|terms| MPoly::from_terms(&XYZT, terms))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn fail(msg: String) -> Result<(), TestCaseError> {
    Err(TestCaseError::fail(msg))
}

fn report<E: std::fmt::Display>(r: Result<(), E>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn field_axioms(cases: u32) -> Result<(), String> {
    report(runner(cases).run(
        &(field_element(), field_element(), field_element()),
        |(a, b, c)| {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if a != Nf::from_int(0) {
                let inv = a.inv().map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(&a * &inv, Nf::from_int(1));
            }
            Ok(())
        },
    ))
}

/// `p(q_1, .., q_4)` evaluated at a point equals `p` evaluated at the `q_i(point)`.
pub fn eval_substitute_commute(cases: u32) -> Result<(), String> {
    let strat = (
        small_poly(),
        prop::collection::vec(small_poly(), 4),
        prop::collection::vec(field_element(), 4),
    );
    report(runner(cases).run(&strat, |(p, images, point)| {
        let composed = p
            .compose(&images, None)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let lhs = composed.eval(&point).unwrap();
        let inner: Vec<Nf> = images.iter().map(|q| q.eval(&point).unwrap()).collect();
        let rhs = p.eval(&inner).unwrap();
        if lhs != rhs {
            return fail(format!("{p} at {images:?}: {lhs} != {rhs}"));
        }
        Ok(())
    }))
}

/// Random classes on the eleven-point blow-up of the plane.
pub fn blowup_class_pair() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    let n = section4_blowup().lattice.rank();
    (
        prop::collection::vec(-6i64..=6, n),
        prop::collection::vec(-6i64..=6, n),
    )
}

fn to_class(lat: &godeaux::divcalc::DeclaredLattice, v: &[i64]) -> DivisorClass {
    lat.class(
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect(),
    )
    .unwrap()
}

pub fn pullback_doubles_pairing(cases: u32) -> Result<(), String> {
    let b = section4_blowup();
    let zi: Vec<DivisorClass> = (0..5)
        .map(|i| b.proper(&format!("p{i}")).unwrap())
        .collect();
    let w = {
        let z = b.proper("q").unwrap();
        let mut w = &(10 * &b.h()) - &(4 * &z);
        for (i, zc) in zi.iter().enumerate() {
            w = &w - &(3 * zc);
            w = &w - &(6 * &b.proper(&format!("p{i}'")).unwrap());
        }
        zi.iter().fold(w, |acc, c| &acc + c)
    };
    let cover = double_cover_pullback(&b.lattice, &w, &zi).map_err(|e| e.to_string())?;
    report(runner(cases).run(&blowup_class_pair(), |(u, v)| {
        let (d1, d2) = (to_class(&b.lattice, &u), to_class(&b.lattice, &v));
        let down = pair(&d1, &d2).unwrap();
        let up = pair(&cover.pullback(&d1).unwrap(), &cover.pullback(&d2).unwrap()).unwrap();
        prop_assert_eq!(up, Rational::from_integer(2.into()) * down);
        Ok(())
    }))
}

/// Invertible 3x3 matrices with small integer entries and an optional `u` shift.
pub fn coordinate_change() -> impl Strategy<Value = Vec<Vec<Nf>>> {
    (
        prop::collection::vec(-3i64..=3, 9),
        prop::collection::vec(-1i64..=1, 3),
    )
        .prop_map(|(e, shift)| {
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| Nf::from_ints(e[3 * i + j], if i == j { shift[i] } else { 0 }, 0))
                        .collect()
                })
                .collect::<Vec<Vec<Nf>>>()
        })
        .prop_filter("invertible", |m| linalg::determinant(m) != Nf::from_int(0))
}

pub fn certificate_coordinate_invariance(cases: u32) -> Result<(), String> {
    let xyz = ["x", "y", "z"];
    let normal = parse_poly("z^2 + x^3 + y^6", &xyz).unwrap();
    report(runner(cases).run(&coordinate_change(), |m| {
        let images: Vec<MPoly<Nf>> = m.iter().map(|row| MPoly::linear(&xyz, row)).collect();
        let g = normal.compose(&images, Some(germlab::TRUNCATION)).unwrap();
        match germlab::tilde_e8_certificate(&Germ::new(g.clone(), germlab::TRUNCATION)) {
            Ok(c) if c.passes() => Ok(()),
            Ok(c) => fail(format!("{g}: disc {}", c.cubic_resolvent_discriminant)),
            Err(e) => fail(format!("{g}: {} ({})", e, e.stage())),
        }
    }))
}
