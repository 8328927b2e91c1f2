use std::sync::{Arc, LazyLock};

use formality_core::operad::{
    act_poly, attach_acyclic_cell, associativity, gerstenhaber, grading_action_little_disks, permutations, Convention,
    DgOperad, OpGenerator, Symmetry, TreePoly,
};
use formality_core::rational::{frac, int, pow};
use formality_core::Rational;
use num_traits::One;
use proptest::prelude::*;

fn basis(p: &DgOperad, n: usize) -> Vec<(i32, TreePoly)> {
    let mut out = Vec::new();
    for c in p.degrees(n) {
        if let Some(comp) = p.component(n, c) {
            for t in comp.normal_trees() {
                out.push((c, TreePoly::term(t.clone(), Rational::one())));
            }
        }
    }
    out
}

fn free_mixed(max_arity: usize, truncation: u32) -> DgOperad {
    let gens = vec![
        OpGenerator { name: "r".into(), arity: 2, degree: 0, symmetry: Symmetry::Regular },
        OpGenerator { name: "c".into(), arity: 2, degree: -1, symmetry: Symmetry::Sign },
    ];
    DgOperad::new(gens, Vec::new(), vec![TreePoly::zero(); 2], max_arity, truncation, Convention::Homological).unwrap()
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Sequential and parallel associativity of partial compositions, with the
/// Koszul sign for swapping `y` past `z`, on every triple of arity-2 basis elements.
fn check_associativity(p: &DgOperad) {
    let b2 = basis(p, 2);
    for (_, x) in &b2 {
        for (cy, y) in &b2 {
            for (cz, z) in &b2 {
                for i in 0..2 {
                    let xy = p.compose(x, i, y).unwrap();
                    for j in 0..2 {
                        let lhs = p.compose(&xy, i + j, z).unwrap();
                        let rhs = p.compose(x, i, &p.compose(y, j, z).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "sequential {} {} {}", p.format(x), p.format(y), p.format(z));
                    }
                }
                // (x ∘_1 y) ∘_0 z = (-1)^{|y||z|} (x ∘_0 z) ∘_2 y
                let lhs = p.compose(&p.compose(x, 1, y).unwrap(), 0, z).unwrap();
                let rhs = p.compose(&p.compose(x, 0, z).unwrap(), 2, y).unwrap();
                let s = sign((cy * cz) % 2 != 0);
                assert_eq!(lhs, rhs.scale(&s), "parallel {} {} {}", p.format(x), p.format(y), p.format(z));
            }
        }
    }
}

/// Position of each leaf of `x ∘_i y` after composing `x·σ` at `σ(i)` with `y·τ`.
fn block_permutation(a: usize, b: usize, i: usize, sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    let si = sigma[i];
    let shift = |s: usize| if s < si { s } else { s + b - 1 };
    let mut out = vec![0; a + b - 1];
    for l in 0..a {
        if l == i {
            continue;
        }
        let from = if l < i { l } else { l + b - 1 };
        out[from] = shift(sigma[l]);
    }
    for l in 0..b {
        out[i + l] = si + tau[l];
    }
    out
}

fn check_equivariance(p: &DgOperad, a: usize, b: usize) {
    for (_, x) in basis(p, a) {
        for (_, y) in basis(p, b) {
            for i in 0..a {
                let base = p.compose(&x, i, &y).unwrap();
                for sigma in permutations(a) {
                    for tau in permutations(b) {
                        let xs = p.normal_form(&act_poly(p.generators(), &x, &sigma)).unwrap();
                        let yt = p.normal_form(&act_poly(p.generators(), &y, &tau)).unwrap();
                        let lhs = p.compose(&xs, sigma[i], &yt).unwrap();
                        let perm = block_permutation(a, b, i, &sigma, &tau);
                        let rhs = p.normal_form(&act_poly(p.generators(), &base, &perm)).unwrap();
                        assert_eq!(lhs, rhs, "{} o_{i} {} under {sigma:?}, {tau:?}", p.format(&x), p.format(&y));
                    }
                }
            }
        }
    }
}

#[test]
fn composition_is_associative() {
    check_associativity(&gerstenhaber(4, 3));
    check_associativity(&associativity(4, 3));
    check_associativity(&free_mixed(4, 3));
}

#[test]
fn composition_is_equivariant() {
    for p in [gerstenhaber(3, 2), associativity(3, 2), free_mixed(3, 2)] {
        check_equivariance(&p, 2, 2);
    }
    let g = gerstenhaber(4, 3);
    check_equivariance(&g, 3, 2);
    check_equivariance(&g, 2, 3);
}

/// Set partitions of `{0..n}` counted by block count, each block of size `k`
/// contributing `(k-1)!` (cyclic orders of a bracket word).
fn partition_oracle(n: usize) -> Vec<usize> {
    fn rec(k: usize, n: usize, blocks: &mut Vec<usize>, out: &mut Vec<usize>) {
        if k == n {
            let w: usize = blocks.iter().map(|&s| (1..s).product::<usize>()).product();
            out[n - blocks.len()] += w;
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] += 1;
            rec(k + 1, n, blocks, out);
            blocks[b] -= 1;
        }
        blocks.push(1);
        rec(k + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = vec![0; n];
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

#[test]
fn gerstenhaber_dims_match_partition_oracle() {
    let p = gerstenhaber(4, 3);
    assert_eq!(partition_oracle(3), vec![1, 3, 2]);
    for n in 2..=4 {
        let oracle = partition_oracle(n);
        for (d, &expect) in oracle.iter().enumerate() {
            let c = p.convention().internal(d as i32);
            assert_eq!(p.dim(n, c), expect, "arity {n}, degree {d}");
            assert_eq!(p.cohomology(n, c).dim(), expect);
        }
    }
}

#[test]
fn grading_action_is_multiplicative() {
    let lambdas = [int(2), int(3), frac(-5, 3), frac(7, 2)];
    for l in &lambdas {
        for m in &lambdas {
            let fl = grading_action_little_disks(l, 3, 2).unwrap();
            let fm = grading_action_little_disks(m, 3, 2).unwrap();
            let flm = grading_action_little_disks(&(l * m), 3, 2).unwrap();
            let composed = fl.compose(&fm).unwrap();
            assert_eq!(composed.images(), flm.images());
            let p = fl.source().clone();
            for comp in p.components() {
                let (n, c) = (comp.arity, comp.degree);
                assert_eq!(fl.on_cohomology(n, c).mul(&fm.on_cohomology(n, c)), flm.on_cohomology(n, c));
                let d = p.convention().display(c) as i64;
                let h = flm.on_cohomology(n, c);
                for k in 0..h.rows() {
                    assert_eq!(h.get(k, k), &pow(&(l * m), d));
                }
            }
        }
    }
}

static PADDED: LazyLock<Arc<DgOperad>> = LazyLock::new(|| Arc::new(attach_acyclic_cell(&gerstenhaber(4, 3), 2, 0).unwrap()));

fn padded() -> Arc<DgOperad> {
    PADDED.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differential_is_a_derivation(a in 0usize..64, b in 0usize..64, i in 0usize..2, nb in 2usize..=3) {
        let p = padded();
        let bx = basis(&p, 2);
        let by = basis(&p, nb);
        let (cx, x) = &bx[a % bx.len()];
        let (cy, y) = &by[b % by.len()];
        // keep d of the composite inside the window
        prop_assume!((cx + cy + 1).unsigned_abs() <= p.truncation() && (cx + cy).unsigned_abs() <= p.truncation());
        let xy = p.compose(x, i, y).unwrap();
        let lhs = p.normal_form(&p.diff_poly(&xy)).unwrap();
        let dx = p.normal_form(&p.diff_poly(x)).unwrap();
        let dy = p.normal_form(&p.diff_poly(y)).unwrap();
        let t1 = p.compose(&dx, i, y).unwrap();
        let t2 = p.compose(x, i, &dy).unwrap().scale(&sign(cx % 2 != 0));
        prop_assert_eq!(lhs, p.normal_form(&t1.add(&t2)).unwrap());
    }

    #[test]
    fn differential_squares_to_zero(a in 0usize..200, n in 2usize..=4) {
        let p = padded();
        let bs = basis(&p, n);
        let (_, x) = &bs[a % bs.len()];
        let dx = p.normal_form(&p.diff_poly(x)).unwrap();
        let ddx = p.normal_form(&p.diff_poly(&dx)).unwrap();
        prop_assert!(ddx.is_zero());
    }
}
