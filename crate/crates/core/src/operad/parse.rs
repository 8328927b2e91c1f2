//! Textual tree polynomials.
//!
//! ```text
//! poly := ["-"] term (("+" | "-") term)*
//! term := [rational ["*"]] tree
//! tree := leaf | name "(" tree ("," tree)* ")"
//! ```
//!
//! Leaves are numbered from 1 and must form a permutation of `1..=n`. `0` is
//! the zero polynomial. Terms are canonicalized, so `m(2,1)` for a trivial `m`
//! reads as `m(1,2)`.

use num_traits::One;

use super::tree::{canonicalize, OpGenerator, Tree, TreePoly};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    gens: &'a [OpGenerator],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidInput(format!("{msg} at column {} in {:?}", self.pos + 1, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn number(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '/') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn tree(&mut self) -> Result<Tree> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.number();
                let l: usize = n.parse().map_err(|_| self.err("bad leaf label"))?;
                if l == 0 {
                    return Err(self.err("leaves are numbered from 1"));
                }
                Ok(Tree::Leaf(l - 1))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let at = self.pos;
                let name = self.name();
                let g = self
                    .gens
                    .iter()
                    .position(|g| g.name == name)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown generator {name} at column {} in {:?}", at + 1, self.src)))?;
                self.expect('(')?;
                let mut children = vec![self.tree()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    children.push(self.tree()?);
                }
                self.expect(')')?;
                if children.len() != self.gens[g].arity {
                    return Err(Error::InvalidInput(format!(
                        "{name} has arity {} but is given {} inputs in {:?}",
                        self.gens[g].arity,
                        children.len(),
                        self.src
                    )));
                }
                Ok(Tree::Node(g, children))
            }
            _ => Err(self.err("expected a tree")),
        }
    }
}

pub fn parse_tree_poly(gens: &[OpGenerator], s: &str) -> Result<TreePoly> {
    let mut p = Parser { src: s, chars: s.chars().collect(), pos: 0, gens };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    if s.trim() == "0" {
        return Ok(TreePoly::zero());
    }
    let mut out = TreePoly::zero();
    let mut first = true;
    let mut arity = None;
    while p.peek().is_some() {
        let mut coeff = Rational::one();
        match p.peek() {
            Some('-') => {
                p.pos += 1;
                coeff = -coeff;
            }
            Some('+') if !first => p.pos += 1,
            _ if first => {}
            _ => return Err(p.err("expected '+' or '-'")),
        }
        first = false;
        // A leading number is a coefficient unless it is a bare leaf (arity-1 identity).
        if let Some(c) = p.peek() {
            if c.is_ascii_digit() {
                let save = p.pos;
                let n = p.number();
                match p.peek() {
                    Some(c) if c.is_ascii_alphabetic() || c == '*' || c == '_' => {
                        if c == '*' {
                            p.pos += 1;
                        }
                        coeff *= parse_rational(&n).map_err(|_| p.err("bad coefficient"))?;
                    }
                    _ => p.pos = save,
                }
            }
        }
        let t = p.tree()?;
        let n = t.arity();
        let mut leaves = t.leaves();
        leaves.sort_unstable();
        if leaves != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!("leaf labels of {} are not a permutation of 1..{n} in {s:?}", t.format(gens))));
        }
        if *arity.get_or_insert(n) != n {
            return Err(Error::InvalidInput(format!("terms of different arity in {s:?}")));
        }
        out.add_signed(canonicalize(gens, &t), &coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::Symmetry;

    fn gens() -> Vec<OpGenerator> {
        vec![
            OpGenerator { name: "m".into(), arity: 2, degree: 0, symmetry: Symmetry::Trivial },
            OpGenerator { name: "b".into(), arity: 2, degree: -1, symmetry: Symmetry::Trivial },
        ]
    }

    #[test]
    fn round_trip() {
        let g = gens();
        let p = parse_tree_poly(&g, "b(m(1,2),3) - m(b(1,3),2) - 1/2 m(1,b(2,3))").unwrap();
        let again = parse_tree_poly(&g, &p.format(&g)).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.len(), 3);
        assert_eq!(parse_tree_poly(&g, "m(2,1)").unwrap(), parse_tree_poly(&g, "m(1,2)").unwrap());
        assert!(parse_tree_poly(&g, "0").unwrap().is_zero());
        assert_eq!(parse_tree_poly(&g, "1").unwrap().len(), 1);
    }

    #[test]
    fn errors() {
        let g = gens();
        assert!(parse_tree_poly(&g, "m(1,1)").is_err());
        assert!(parse_tree_poly(&g, "m(1,2,3)").is_err());
        assert!(parse_tree_poly(&g, "x(1,2)").unwrap_err().to_string().contains("unknown generator x"));
        assert!(parse_tree_poly(&g, "m(1,2) + m(1,m(2,3))").is_err());
        assert!(parse_tree_poly(&g, "m(0,1)").is_err());
    }
}
