//! Decorated planar trees, tree polynomials and the sign bookkeeping shared by
//! composition, relabeling and substitution.
//!
//! A tree monomial stands for the tensor product of its vertex decorations
//! read in preorder. Every operation first produces a tree whose vertices carry
//! their position in a "formal" order, then reads the result in preorder and
//! pays the Koszul sign of that reordering.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    /// `g·σ = g`.
    Trivial,
    /// `g·σ = sgn(σ) g`.
    Sign,
    /// The orbit of `g` is a copy of the regular representation.
    Regular,
}

impl Symmetry {
    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Trivial => "trivial",
            Symmetry::Sign => "sign",
            Symmetry::Regular => "regular",
        }
    }

    pub fn parse(s: &str) -> Result<Symmetry> {
        match s {
            "trivial" => Ok(Symmetry::Trivial),
            "sign" => Ok(Symmetry::Sign),
            "regular" => Ok(Symmetry::Regular),
            _ => Err(Error::InvalidInput(format!(
                "unknown symmetry {s:?} (expected trivial, sign or regular)"
            ))),
        }
    }
}

/// A generating operation. `degree` is cohomological: the differential raises it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpGenerator {
    pub name: String,
    pub arity: usize,
    pub degree: i32,
    pub symmetry: Symmetry,
}

/// Leaves are labeled `0..n`; the textual form shows them as `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(usize),
    Node(usize, Vec<Tree>),
}

impl Tree {
    pub fn identity() -> Tree {
        Tree::Leaf(0)
    }

    /// `g(0, 1, …, k-1)`.
    pub fn corolla(gen: usize, arity: usize) -> Tree {
        Tree::Node(gen, (0..arity).map(Tree::Leaf).collect())
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, ch) => ch.iter().map(Tree::arity).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(Tree::vertex_count).sum::<usize>(),
        }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node(_, ch) => ch.iter().map(Tree::min_leaf).min().unwrap_or(usize::MAX),
        }
    }

    /// Generators in preorder.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn walk(t: &Tree, out: &mut Vec<usize>) {
            if let Tree::Node(g, ch) = t {
                out.push(*g);
                for c in ch {
                    walk(c, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn walk(t: &Tree, out: &mut Vec<usize>) {
            match t {
                Tree::Leaf(l) => out.push(*l),
                Tree::Node(_, ch) => ch.iter().for_each(|c| walk(c, out)),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn degree(&self, gens: &[OpGenerator]) -> i32 {
        self.vertices().iter().map(|&g| gens[g].degree).sum()
    }

    /// Leaf `l` becomes `perm[l]`; no reordering.
    pub fn relabel(&self, perm: &[usize]) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(perm[*l]),
            Tree::Node(g, ch) => Tree::Node(*g, ch.iter().map(|c| c.relabel(perm)).collect()),
        }
    }

    pub fn format(&self, gens: &[OpGenerator]) -> String {
        match self {
            Tree::Leaf(l) => (l + 1).to_string(),
            Tree::Node(g, ch) => {
                let inner: Vec<String> = ch.iter().map(|c| c.format(gens)).collect();
                format!("{}({})", gens[*g].name, inner.join(","))
            }
        }
    }
}

/// A tree whose vertices remember their position in a formal order.
#[derive(Debug, Clone)]
pub(crate) enum Tagged {
    Leaf(usize),
    Node { gen: usize, tag: usize, children: Vec<Tagged> },
}

impl Tagged {
    /// Tags vertices by preorder position starting at `offset`; returns the next free tag.
    pub(crate) fn from_tree(t: &Tree, offset: usize) -> (Tagged, usize) {
        match t {
            Tree::Leaf(l) => (Tagged::Leaf(*l), offset),
            Tree::Node(g, ch) => {
                let mut next = offset + 1;
                let mut children = Vec::with_capacity(ch.len());
                for c in ch {
                    let (tc, n) = Tagged::from_tree(c, next);
                    children.push(tc);
                    next = n;
                }
                (Tagged::Node { gen: *g, tag: offset, children }, next)
            }
        }
    }

    fn preorder(&self, out: &mut Vec<(usize, usize)>) {
        if let Tagged::Node { gen, tag, children } = self {
            out.push((*tag, *gen));
            for c in children {
                c.preorder(out);
            }
        }
    }

    fn min_leaf(&self) -> usize {
        match self {
            Tagged::Leaf(l) => *l,
            Tagged::Node { children, .. } => children.iter().map(Tagged::min_leaf).min().unwrap_or(usize::MAX),
        }
    }

    fn strip(&self) -> Tree {
        match self {
            Tagged::Leaf(l) => Tree::Leaf(*l),
            Tagged::Node { gen, children, .. } => Tree::Node(*gen, children.iter().map(Tagged::strip).collect()),
        }
    }

    /// Replaces leaf `l` by `subs[l]`.
    fn graft_all(self, subs: &mut Vec<Option<Tagged>>) -> Tagged {
        match self {
            Tagged::Leaf(l) => subs[l].take().expect("each leaf is grafted once"),
            Tagged::Node { gen, tag, children } => Tagged::Node {
                gen,
                tag,
                children: children.into_iter().map(|c| c.graft_all(subs)).collect(),
            },
        }
    }

    /// Sorts children of trivial/sign vertices by smallest leaf; returns whether
    /// an odd number of sign-type transpositions occurred.
    fn sort_children(&mut self, gens: &[OpGenerator]) -> bool {
        let Tagged::Node { gen, children, .. } = self else {
            return false;
        };
        let mut neg = false;
        for c in children.iter_mut() {
            neg ^= c.sort_children(gens);
        }
        if gens[*gen].symmetry != Symmetry::Regular {
            let keys: Vec<usize> = children.iter().map(Tagged::min_leaf).collect();
            let mut order: Vec<usize> = (0..children.len()).collect();
            order.sort_by_key(|&i| keys[i]);
            if gens[*gen].symmetry == Symmetry::Sign {
                neg ^= permutation_is_odd(&order);
            }
            let mut old: Vec<Option<Tagged>> = std::mem::take(children).into_iter().map(Some).collect();
            *children = order.iter().map(|&i| old[i].take().unwrap()).collect();
        }
        neg
    }

    /// Reads the tree in preorder; returns it with the Koszul sign of the
    /// permutation from tag order to preorder.
    fn finish(&self, gens: &[OpGenerator]) -> (Tree, bool) {
        let mut seq = Vec::new();
        self.preorder(&mut seq);
        let odd: Vec<usize> = seq
            .iter()
            .filter(|(_, g)| gens[*g].degree.rem_euclid(2) == 1)
            .map(|(t, _)| *t)
            .collect();
        let mut inversions = 0usize;
        for i in 0..odd.len() {
            for j in i + 1..odd.len() {
                if odd[i] > odd[j] {
                    inversions += 1;
                }
            }
        }
        (self.strip(), inversions % 2 == 1)
    }
}

pub fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Sorts, then reads in preorder. The sign is relative to `t`'s own preorder.
fn normalize(mut t: Tagged, gens: &[OpGenerator]) -> (Tree, bool) {
    let neg = t.sort_children(gens);
    let (tree, k) = t.finish(gens);
    (tree, neg ^ k)
}

/// Canonical representative of a tree with its sign.
pub fn canonicalize(gens: &[OpGenerator], t: &Tree) -> (Tree, bool) {
    normalize(Tagged::from_tree(t, 0).0, gens)
}

/// `t·perm`: leaf `l` becomes `perm[l]`, then canonicalized.
pub fn act(gens: &[OpGenerator], t: &Tree, perm: &[usize]) -> (Tree, bool) {
    canonicalize(gens, &t.relabel(perm))
}

/// `p ∘_i q`: graft `q` at the leaf labeled `i` (0-based) of `p`.
pub fn compose_trees(gens: &[OpGenerator], p: &Tree, i: usize, q: &Tree) -> (Tree, bool) {
    let n = p.arity();
    let k = q.arity();
    assert!(i < n, "slot {i} out of range for arity {n}");
    let (tp, next) = Tagged::from_tree(p, 0);
    let (tq, _) = Tagged::from_tree(&q.relabel(&(i..i + k).collect::<Vec<_>>()), next);
    let mut subs: Vec<Option<Tagged>> = (0..n)
        .map(|l| {
            Some(match l.cmp(&i) {
                std::cmp::Ordering::Less => Tagged::Leaf(l),
                std::cmp::Ordering::Equal => tq.clone(),
                std::cmp::Ordering::Greater => Tagged::Leaf(l + k - 1),
            })
        })
        .collect();
    normalize(tp.graft_all(&mut subs), gens)
}

/// Finite linear combination of canonical trees.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreePoly {
    terms: BTreeMap<Tree, Rational>,
}

impl TreePoly {
    pub fn zero() -> Self {
        TreePoly::default()
    }

    /// `tree` is assumed canonical.
    pub fn term(tree: Tree, c: Rational) -> Self {
        let mut p = TreePoly::zero();
        p.add_term(tree, c);
        p
    }

    pub fn from_signed((tree, neg): (Tree, bool)) -> Self {
        TreePoly::term(tree, if neg { -Rational::one() } else { Rational::one() })
    }

    pub fn add_term(&mut self, tree: Tree, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(tree) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_signed(&mut self, (tree, neg): (Tree, bool), c: &Rational) {
        self.add_term(tree, if neg { -c.clone() } else { c.clone() });
    }

    pub fn add(&self, other: &TreePoly) -> TreePoly {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> TreePoly {
        let mut out = TreePoly::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &Tree) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(arity, degree)` of the terms when they agree.
    pub fn homogeneous(&self, gens: &[OpGenerator]) -> Option<(usize, i32)> {
        let mut it = self.terms.keys().map(|t| (t.arity(), t.degree(gens)));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    pub fn format(&self, gens: &[OpGenerator]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (t, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push(' ');
            }
            out.push_str(&t.format(gens));
        }
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(l) => write!(f, "{}", l + 1),
            Tree::Node(g, ch) => {
                write!(f, "#{g}(")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Linear extension of [`compose_trees`].
pub fn compose_polys(gens: &[OpGenerator], p: &TreePoly, i: usize, q: &TreePoly) -> TreePoly {
    let mut out = TreePoly::zero();
    for (a, ca) in p.iter() {
        for (b, cb) in q.iter() {
            out.add_signed(compose_trees(gens, a, i, b), &(ca * cb));
        }
    }
    out
}

pub fn act_poly(gens: &[OpGenerator], p: &TreePoly, perm: &[usize]) -> TreePoly {
    let mut out = TreePoly::zero();
    for (t, c) in p.iter() {
        out.add_signed(act(gens, t, perm), c);
    }
    out
}

/// Replaces the vertex at preorder position `k` by `images[k]` (trees whose
/// leaves `0..arity` stand for that vertex's children in planar order) and
/// expands. Source vertices are ordered before target vertices of later
/// positions, so the caller accounts for any sign of moving an operator past
/// earlier vertices. `dst` describes the generators used by the images.
pub fn substitute(dst: &[OpGenerator], t: &Tree, images: &[&TreePoly]) -> TreePoly {
    let mut out = TreePoly::zero();
    let terms: Vec<Vec<(&Tree, &Rational)>> = images.iter().map(|p| p.iter().collect()).collect();
    if terms.iter().any(|v| v.is_empty()) {
        return out;
    }
    let mut choice = vec![0usize; terms.len()];
    loop {
        let mut coeff = Rational::one();
        let mut offset = 0;
        let mut next_vertex = 0;
        let tagged = build(t, &terms, &choice, &mut next_vertex, &mut offset, &mut coeff);
        let (tree, neg) = normalize(tagged, dst);
        out.add_signed((tree, neg), &coeff);
        // advance odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < terms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn build(
    t: &Tree,
    terms: &[Vec<(&Tree, &Rational)>],
    choice: &[usize],
    next_vertex: &mut usize,
    offset: &mut usize,
    coeff: &mut Rational,
) -> Tagged {
    match t {
        Tree::Leaf(l) => Tagged::Leaf(*l),
        Tree::Node(_, ch) => {
            let k = *next_vertex;
            *next_vertex += 1;
            let (img, c) = terms[k][choice[k]];
            *coeff *= c;
            let (tagged, next) = Tagged::from_tree(img, *offset);
            *offset = next;
            let mut subs: Vec<Option<Tagged>> = ch
                .iter()
                .map(|c| Some(build(c, terms, choice, next_vertex, offset, coeff)))
                .collect();
            tagged.graft_all(&mut subs)
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

pub fn inverse_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Canonical trees with leaf set `labels`, built from `gens`, deduplicated.
pub(crate) fn trees_on(gens: &[OpGenerator], labels: &[usize], memo: &mut BTreeMap<Vec<usize>, Vec<Tree>>) -> Vec<Tree> {
    if let Some(v) = memo.get(labels) {
        return v.clone();
    }
    let mut out = std::collections::BTreeSet::new();
    if labels.len() == 1 {
        out.insert(Tree::Leaf(labels[0]));
    } else {
        for (g, gen) in gens.iter().enumerate() {
            if gen.arity < 2 || gen.arity > labels.len() {
                continue;
            }
            for blocks in ordered_partitions(labels, gen.arity) {
                let options: Vec<Vec<Tree>> = blocks.iter().map(|b| trees_on(gens, b, memo)).collect();
                let mut idx = vec![0usize; options.len()];
                'outer: loop {
                    let children: Vec<Tree> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
                    out.insert(canonicalize(gens, &Tree::Node(g, children)).0);
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            break 'outer;
                        }
                        idx[k] += 1;
                        if idx[k] < options[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }
    let v: Vec<Tree> = out.into_iter().collect();
    memo.insert(labels.to_vec(), v.clone());
    v
}

/// Ordered partitions of `labels` into `k` nonempty blocks (each block sorted).
fn ordered_partitions(labels: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    let n = labels.len();
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        let mut blocks = vec![Vec::new(); k];
        for (i, &a) in assign.iter().enumerate() {
            blocks[a].push(labels[i]);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(blocks);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(name: &str, arity: usize, degree: i32, symmetry: Symmetry) -> OpGenerator {
        OpGenerator { name: name.into(), arity, degree, symmetry }
    }

    fn count(gens: &[OpGenerator], n: usize) -> usize {
        let labels: Vec<usize> = (0..n).collect();
        trees_on(gens, &labels, &mut BTreeMap::new()).len()
    }

    #[test]
    fn free_counts() {
        assert_eq!(count(&[gen("m", 2, 0, Symmetry::Regular)], 3), 12);
        assert_eq!(count(&[gen("m", 2, 0, Symmetry::Trivial)], 3), 3);
        assert_eq!(count(&[gen("m", 2, 0, Symmetry::Trivial)], 1), 1);
        // (2n-3)!! unrooted-type count for commutative binary trees
        assert_eq!(count(&[gen("m", 2, 0, Symmetry::Trivial)], 4), 15);
        assert_eq!(count(&[gen("m", 2, 0, Symmetry::Regular)], 4), 120);
    }

    #[test]
    fn odd_swap_sign() {
        let g = [gen("b", 2, 1, Symmetry::Trivial)];
        let t = Tree::Node(
            0,
            vec![
                Tree::Node(0, vec![Tree::Leaf(2), Tree::Leaf(3)]),
                Tree::Node(0, vec![Tree::Leaf(0), Tree::Leaf(1)]),
            ],
        );
        let (c, neg) = canonicalize(&g, &t);
        assert!(neg);
        assert_eq!(c.min_leaf(), 0);
        let s = [gen("c", 2, 0, Symmetry::Sign)];
        let (_, neg) = canonicalize(&s, &Tree::Node(0, vec![Tree::Leaf(1), Tree::Leaf(0)]));
        assert!(neg);
    }

    #[test]
    fn comb_shapes_differ() {
        let g = [gen("m", 2, 0, Symmetry::Regular)];
        let m = Tree::corolla(0, 2);
        let (l, _) = compose_trees(&g, &m, 0, &m);
        let (r, _) = compose_trees(&g, &m, 1, &m);
        assert_ne!(l, r);
        assert_eq!(l.format(&g), "m(m(1,2),3)");
        assert_eq!(r.format(&g), "m(1,m(2,3))");
        assert_eq!(compose_trees(&g, &Tree::identity(), 0, &m).0, m);
        assert_eq!(compose_trees(&g, &m, 1, &Tree::identity()).0, m);
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0).len(), 1);
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
    }
}
