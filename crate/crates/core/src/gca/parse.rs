//! Textual polynomial syntax.
//!
//! ```text
//! poly   := ["-"] term (("+" | "-") term)*
//! term   := factor (["*"] factor)*
//! factor := rational | name ["^" integer]
//! ```
//!
//! Factors are multiplied left to right with Koszul signs, so `y*x` parses to
//! `-x*y` for odd `x`, `y`. `0` is the zero polynomial.

use num_traits::One;

use super::{GeneratorSet, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Token::Plus)),
            '-' => out.push((start, Token::Minus)),
            '*' => out.push((start, Token::Star)),
            '^' => out.push((start, Token::Caret)),
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '/') {
                    j += 1;
                }
                out.push((start, Token::Number(chars[i..j].iter().collect())));
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push((start, Token::Name(chars[i..j].iter().collect())));
                i = j;
                continue;
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unexpected character {other:?} at column {}",
                    start + 1
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

pub fn parse_polynomial(gens: &GeneratorSet, s: &str) -> Result<Polynomial> {
    let tokens = tokenize(s)?;
    let err = |pos: usize, msg: &str| Error::InvalidInput(format!("{msg} at column {} in {s:?}", pos + 1));
    let mut out = Polynomial::zero();
    let mut k = 0;
    let mut first = true;
    if tokens.is_empty() {
        return Err(err(0, "empty expression"));
    }
    while k < tokens.len() {
        let mut negative = false;
        match &tokens[k].1 {
            Token::Plus if !first => k += 1,
            Token::Minus => {
                negative = true;
                k += 1;
            }
            _ if first => {}
            _ => return Err(err(tokens[k].0, "expected '+' or '-'")),
        }
        first = false;
        let mut term = gens.one();
        let mut factors = 0;
        while k < tokens.len() {
            match &tokens[k].1 {
                Token::Star if factors > 0 => {
                    k += 1;
                    continue;
                }
                Token::Number(n) => {
                    let r = parse_rational(n).map_err(|_| err(tokens[k].0, "bad number"))?;
                    term = term.scale(&r);
                    k += 1;
                }
                Token::Name(name) => {
                    let idx = gens
                        .index_of(name)
                        .ok_or_else(|| err(tokens[k].0, &format!("unknown generator {name}")))?;
                    k += 1;
                    let mut power = 1u32;
                    if k < tokens.len() && tokens[k].1 == Token::Caret {
                        k += 1;
                        match tokens.get(k) {
                            Some((_, Token::Number(n))) if !n.contains('/') => {
                                power = n.parse().map_err(|_| err(tokens[k].0, "bad exponent"))?;
                                k += 1;
                            }
                            _ => return Err(err(tokens[k.min(tokens.len() - 1)].0, "expected exponent")),
                        }
                    }
                    let g = Polynomial::monomial(Monomial::generator(gens.len(), idx), Rational::one());
                    for _ in 0..power {
                        term = gens.multiply(&term, &g);
                    }
                }
                _ => break,
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(err(tokens.get(k).map_or(s.len(), |t| t.0), "expected a term"));
        }
        if negative {
            term = term.scale(&-Rational::one());
        }
        out = out.add(&term);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn parses_and_formats() {
        let g = GeneratorSet::from_pairs(&[("x", 1), ("y", 1), ("e2", 2)]).unwrap();
        let p = parse_polynomial(&g, "y*x + 3/2 e2^2 - 2*x*y").unwrap();
        assert_eq!(g.format(&p), "-3 x*y + 3/2 e2^2");
        let again = parse_polynomial(&g, &g.format(&p)).unwrap();
        assert_eq!(again, p);
        assert!(parse_polynomial(&g, "0").unwrap().is_zero());
        assert_eq!(parse_polynomial(&g, "-x").unwrap(), g.generator_poly(0).scale(&int(-1)));
    }

    #[test]
    fn reports_positions() {
        let g = GeneratorSet::from_pairs(&[("x", 1)]).unwrap();
        let e = parse_polynomial(&g, "x + w").unwrap_err().to_string();
        assert!(e.contains("unknown generator w") && e.contains("column 5"), "{e}");
        assert!(parse_polynomial(&g, "x +").is_err());
        assert!(parse_polynomial(&g, "x ^").is_err());
        assert!(parse_polynomial(&g, "1.5 x").is_err());
    }
}
