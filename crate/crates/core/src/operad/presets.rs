//! Built-in presentations and the grading action on the Gerstenhaber operad.

use std::sync::Arc;

use super::{cohomology_collection, Convention, DgOperad, OpGenerator, OperadMorphism, Symmetry, TreePoly};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::rational::{check_non_root_of_unity, format_rational, pow, Rational};

fn gen(name: &str, arity: usize, degree: i32, symmetry: Symmetry) -> OpGenerator {
    OpGenerator { name: name.into(), arity, degree, symmetry }
}

/// Homologically graded: commutative product `m` in degree 0, bracket `b` in
/// degree 1, with associativity, Jacobi and Leibniz.
pub fn gerstenhaber(max_arity: usize, truncation: u32) -> DgOperad {
    let gens = vec![gen("m", 2, 0, Symmetry::Trivial), gen("b", 2, -1, Symmetry::Trivial)];
    let rel = |s: &str| super::parse_tree_poly(&gens, s).expect("preset relation parses");
    let relations = vec![
        rel("m(m(1,2),3) - m(1,m(2,3))"),
        rel("b(b(1,2),3) + b(b(2,3),1) + b(b(3,1),2)"),
        rel("b(m(1,2),3) - m(b(1,3),2) - m(1,b(2,3))"),
    ];
    DgOperad::new(gens, relations, vec![TreePoly::zero(); 2], max_arity, truncation, Convention::Homological)
        .expect("Gerstenhaber preset is valid")
}

/// Nonsymmetric-style associative operad: regular `m` with associativity.
pub fn associativity(max_arity: usize, truncation: u32) -> DgOperad {
    let gens = vec![gen("m", 2, 0, Symmetry::Regular)];
    let relations = vec![super::parse_tree_poly(&gens, "m(m(1,2),3) - m(1,m(2,3))").expect("preset relation parses")];
    DgOperad::new(gens, relations, vec![TreePoly::zero()], max_arity, truncation, Convention::Homological)
        .expect("associativity preset is valid")
}

/// Adds `u` of degree `degree` and `v` with `dv = u` (so `v` sits one degree
/// above `u` homologically, one below cohomologically), both with trivial
/// symmetry. Cohomology is recomputed and compared.
pub fn attach_acyclic_cell(p: &DgOperad, arity: usize, degree: i32) -> Result<DgOperad> {
    if arity > p.max_arity() || degree.unsigned_abs() + 1 > p.truncation() {
        return Err(Error::TruncationExceeded(format!(
            "cell of arity {arity} in degrees {degree}, {} leaves the window",
            degree + 1
        )));
    }
    let mut gens = p.generators().to_vec();
    let k = (1..).find(|k| !gens.iter().any(|g| g.name == format!("u{k}") || g.name == format!("v{k}"))).unwrap();
    let cu = p.convention().internal(degree);
    gens.push(gen(&format!("u{k}"), arity, cu, Symmetry::Trivial));
    gens.push(gen(&format!("v{k}"), arity, cu - 1, Symmetry::Trivial));
    let u = gens.len() - 2;
    let mut differential: Vec<TreePoly> = (0..p.generators().len()).map(|g| p.differential_of(g).clone()).collect();
    differential.push(TreePoly::zero());
    differential.push(TreePoly::from_signed(super::canonicalize(&gens, &super::Tree::corolla(u, arity))));
    let out = DgOperad::new(gens, p.relations().to_vec(), differential, p.max_arity(), p.truncation(), p.convention())?;
    if cohomology_collection(&out).dims() != cohomology_collection(p).dims() {
        return Err(Error::InvalidInput("attaching the cell changed the cohomology".into()));
    }
    Ok(out)
}

/// `m ↦ m`, `b ↦ λ b` on the Gerstenhaber preset, checked to be an automorphism
/// acting on each homological degree `d` of the cohomology by `λ^d`.
pub fn grading_action_little_disks(lambda: &Rational, max_arity: usize, truncation: u32) -> Result<OperadMorphism> {
    check_non_root_of_unity(lambda)?;
    let p = Arc::new(gerstenhaber(max_arity, truncation));
    let images = vec![p.corolla(0).clone(), p.corolla(1).scale(lambda)];
    let f = OperadMorphism::new(p.clone(), p.clone(), images)?;
    if !f.is_automorphism() {
        return Err(Error::InvalidInput("grading action is not bijective".into()));
    }
    for comp in p.components() {
        let d = p.convention().display(comp.degree);
        let h = f.on_cohomology(comp.arity, comp.degree);
        if h != Matrix::identity(h.rows()).scale(&pow(lambda, d as i64)) {
            return Err(Error::NotGradingLift(format!(
                "action of lambda = {} on arity {}, degree {d} is not scalar",
                format_rational(lambda),
                comp.arity
            )));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::cohomology_collection;
    use crate::rational::int;

    #[test]
    fn gerstenhaber_dims() {
        let g = gerstenhaber(3, 3);
        let h = cohomology_collection(&g);
        assert_eq!((h.dim(2, 0), h.dim(2, 1)), (1, 1));
        assert_eq!((h.dim(3, 0), h.dim(3, 1), h.dim(3, 2)), (1, 3, 2));
        assert_eq!(h.dim(1, 0), 1);
    }

    #[test]
    fn associativity_dims() {
        let a = associativity(3, 3);
        assert_eq!(a.dim(3, 0), 6);
        assert_eq!(a.dim(2, 0), 2);
    }

    #[test]
    fn cell_keeps_cohomology() {
        let g = gerstenhaber(3, 3);
        let once = attach_acyclic_cell(&g, 2, 1).unwrap();
        let twice = attach_acyclic_cell(&once, 2, 0).unwrap();
        assert_eq!(once.generators().len(), 4);
        assert_eq!(twice.generators()[4].name, "u2");
        assert_eq!(cohomology_collection(&twice).dims(), cohomology_collection(&g).dims());
    }

    #[test]
    fn grading_action() {
        let f = grading_action_little_disks(&int(2), 3, 3).unwrap();
        let h = f.on_cohomology(2, -1);
        assert_eq!(h, Matrix::identity(1).scale(&int(2)));
        assert_eq!(f.on_cohomology(3, -2), Matrix::identity(2).scale(&int(4)));
        assert!(grading_action_little_disks(&int(1), 3, 3).is_err());
        let g = grading_action_little_disks(&int(3), 3, 3).unwrap();
        let gf = g.compose(&f).unwrap();
        let six = grading_action_little_disks(&int(6), 3, 3).unwrap();
        assert_eq!(gf.images(), six.images());
    }
}
