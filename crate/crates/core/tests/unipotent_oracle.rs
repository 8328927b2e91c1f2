//! BCH against a direct computation of `log(exp u · exp v)` with truncated
//! power series in the free associative algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use formality_core::rational::{frac, int};
use formality_core::unipotent::{bch, power, twist_action, witt_dimension, FreeLie, GroupLike, LieSeries};
use formality_core::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

type Series = BTreeMap<Vec<usize>, Rational>;

fn clean(mut s: Series) -> Series {
    s.retain(|_, c| !c.is_zero());
    s
}

fn s_add(a: &Series, b: &Series, scale: &Rational) -> Series {
    let mut out = a.clone();
    for (w, c) in b {
        *out.entry(w.clone()).or_insert_with(Rational::zero) += c * scale;
    }
    clean(out)
}

fn s_mul(a: &Series, b: &Series, depth: usize) -> Series {
    let mut out = Series::new();
    for (x, cx) in a {
        for (y, cy) in b {
            if x.len() + y.len() <= depth {
                let w: Vec<usize> = x.iter().chain(y).copied().collect();
                *out.entry(w).or_insert_with(Rational::zero) += cx * cy;
            }
        }
    }
    clean(out)
}

fn one() -> Series {
    Series::from([(Vec::new(), Rational::one())])
}

/// `exp(x)` for `x` without constant term.
fn s_exp(x: &Series, depth: usize) -> Series {
    let mut out = one();
    let mut pw = one();
    let mut fact = Rational::one();
    for k in 1..=depth {
        pw = s_mul(&pw, x, depth);
        fact *= int(k as i64);
        out = s_add(&out, &pw, &(Rational::one() / fact.clone()));
    }
    out
}

/// `log(g)` for `g` with constant term one.
fn s_log(g: &Series, depth: usize) -> Series {
    let z = s_add(g, &one(), &-Rational::one());
    let mut out = Series::new();
    let mut pw = one();
    for k in 1..=depth {
        pw = s_mul(&pw, &z, depth);
        let c = if k % 2 == 1 { frac(1, k as i64) } else { frac(-1, k as i64) };
        out = s_add(&out, &pw, &c);
    }
    out
}

fn as_series(l: &LieSeries) -> Series {
    clean(l.to_assoc().terms)
}

fn oracle(u: &LieSeries, v: &LieSeries) -> Series {
    let d = u.algebra().depth();
    s_log(&s_mul(&s_exp(&as_series(u), d), &s_exp(&as_series(v), d), d), d)
}

fn lie(depth: usize) -> Arc<FreeLie> {
    FreeLie::new(&["x", "y"], depth).unwrap()
}

fn series_from(l: &Arc<FreeLie>, c: &[(i64, i64)]) -> LieSeries {
    LieSeries::from_coeffs(l, c.iter().map(|&(n, d)| frac(n, d)).collect()).unwrap()
}

fn coeff_strategy(dim: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), dim)
}

#[test]
fn hall_dimensions_match_witt() {
    let l = lie(4);
    assert_eq!(l.dims_by_length(), vec![2, 1, 2, 3]);
    for n in 1..=4 {
        assert_eq!(l.dims_by_length()[n - 1], witt_dimension(2, n));
    }
    let l3 = FreeLie::new(&["a", "b", "c"], 3).unwrap();
    assert_eq!(l3.dims_by_length(), vec![3, 3, 8]);
}

#[test]
fn bch_of_generators_matches_series_oracle() {
    for depth in 1..=4 {
        let l = lie(depth);
        let x = LieSeries::generator(&l, 0);
        let y = LieSeries::generator(&l, 1);
        assert_eq!(as_series(&bch(&x, &y)), oracle(&x, &y), "depth {depth}");
    }
}

#[test]
fn known_low_order_terms() {
    let l = lie(3);
    let x = LieSeries::generator(&l, 0);
    let y = LieSeries::generator(&l, 1);
    let xy = x.bracket(&y);
    let expect = x
        .add(&y)
        .add(&xy.scale(&frac(1, 2)))
        .add(&x.bracket(&xy).scale(&frac(1, 12)))
        .add(&y.bracket(&xy).scale(&frac(-1, 12)));
    assert_eq!(bch(&x, &y), expect);
}

#[test]
fn twist_scalars() {
    assert_eq!(twist_action(&int(3)), (int(1), int(3)));
    let lambdas = [int(2), frac(-1, 3), int(5)];
    let mut prod = int(1);
    for l in &lambdas {
        prod *= twist_action(l).1;
    }
    let composed = lambdas.iter().fold(int(1), |acc, l| acc * l);
    assert_eq!(twist_action(&composed).1, prod);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bch_matches_oracle_on_random_inputs(a in coeff_strategy(8), b in coeff_strategy(8)) {
        let l = lie(4);
        let (u, v) = (series_from(&l, &a), series_from(&l, &b));
        prop_assert_eq!(as_series(&bch(&u, &v)), oracle(&u, &v));
    }

    #[test]
    fn bch_is_associative(a in coeff_strategy(8), b in coeff_strategy(8), c in coeff_strategy(8)) {
        let l = lie(4);
        let (u, v, w) = (series_from(&l, &a), series_from(&l, &b), series_from(&l, &c));
        prop_assert_eq!(bch(&bch(&u, &v), &w), bch(&u, &bch(&v, &w)));
    }

    #[test]
    fn one_parameter_subgroup(a in coeff_strategy(8), s in (-5i64..=5, 1i64..=4), t in (-5i64..=5, 1i64..=4)) {
        let l = lie(4);
        let g = GroupLike::exp(series_from(&l, &a));
        let (s, t) = (frac(s.0, s.1), frac(t.0, t.1));
        prop_assert_eq!(power(&g, &s).mul(&power(&g, &t)), power(&g, &(s.clone() + t.clone())));
        prop_assert_eq!(power(&power(&g, &s), &t), power(&g, &(s * t)));
        prop_assert!(g.mul(&g.inverse()).log.is_zero());
    }
}
