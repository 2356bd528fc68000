//! Parser for the polynomial input grammar.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := coeff ('*'? factor)* | factor ('*'? factor)*
//! factor := var ('^' natural)?
//! coeff  := integer ('/' positive-integer)?
//! ```
//!
//! Whitespace is insignificant. Variables must be declared by the ring;
//! numerals are arbitrary-precision and reduce into the coefficient field.

use num::bigint::BigInt;
use num::Num;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Exp, Monomial};
use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(input: &str) -> Result<Lexer> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Num(input[start..i].to_string()), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            other => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_pos(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or_else(|| self.toks.last().map(|(_, p)| p + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
}

fn parse_natural(digits: &str, pos: usize) -> Result<Exp> {
    digits.parse::<Exp>().map_err(|_| Error::Syntax {
        pos,
        msg: format!("exponent `{digits}` out of range"),
    })
}

/// Parse one term: optional coefficient, then variable factors.
fn parse_term<F: Field>(ring: &Ring<F>, lx: &mut Lexer) -> Result<(Monomial, F::Elem)> {
    let field = ring.field();
    let mut coeff = field.one();
    let mut exps = vec![0 as Exp; ring.nvars()];
    let mut any = false;

    loop {
        match lx.peek() {
            Some(Tok::Num(_)) => {
                let pos = lx.peek_pos();
                let digits = match lx.bump() {
                    Some(Tok::Num(d)) => d,
                    _ => unreachable!(),
                };
                let num = BigInt::from_str_radix(&digits, 10).expect("digits");
                let mut den = BigInt::from(1);
                if lx.peek() == Some(&Tok::Slash) {
                    lx.bump();
                    match lx.bump() {
                        Some(Tok::Num(d)) => {
                            den = BigInt::from_str_radix(&d, 10).expect("digits");
                            if den == BigInt::from(0) {
                                return Err(Error::Syntax {
                                    pos,
                                    msg: "zero denominator".into(),
                                });
                            }
                        }
                        _ => {
                            return Err(Error::Syntax {
                                pos: lx.peek_pos(),
                                msg: "expected denominator after `/`".into(),
                            })
                        }
                    }
                }
                let c = field.from_big_ratio(&num, &den)?;
                coeff = field.mul(&coeff, &c);
                any = true;
            }
            Some(Tok::Ident(_)) => {
                let pos = lx.peek_pos();
                let name = match lx.bump() {
                    Some(Tok::Ident(n)) => n,
                    _ => unreachable!(),
                };
                let idx = ring
                    .var_index(&name)
                    .ok_or(Error::UnknownVariable { name, pos })?;
                let mut e: Exp = 1;
                if lx.peek() == Some(&Tok::Caret) {
                    lx.bump();
                    match lx.bump() {
                        Some(Tok::Num(d)) => e = parse_natural(&d, pos)?,
                        _ => {
                            return Err(Error::Syntax {
                                pos: lx.peek_pos(),
                                msg: "expected exponent after `^`".into(),
                            })
                        }
                    }
                }
                exps[idx] = exps[idx]
                    .checked_add(e)
                    .ok_or(Error::Syntax {
                        pos,
                        msg: "exponent overflow".into(),
                    })?;
                any = true;
            }
            Some(Tok::Star) => {
                lx.bump();
                // A factor must follow.
                match lx.peek() {
                    Some(Tok::Num(_)) | Some(Tok::Ident(_)) => {}
                    _ => {
                        return Err(Error::Syntax {
                            pos: lx.peek_pos(),
                            msg: "expected factor after `*`".into(),
                        })
                    }
                }
            }
            _ => break,
        }
    }

    if !any {
        return Err(Error::Syntax {
            pos: lx.peek_pos(),
            msg: "expected a term".into(),
        });
    }
    Ok((Monomial::from_exps(&exps), coeff))
}

/// Parse a polynomial in the given ring.
pub fn parse_polynomial<F: Field>(ring: &Ring<F>, input: &str) -> Result<Polynomial<F>> {
    let mut lx = lex(input)?;
    let field = ring.field().clone();
    let mut out = Polynomial::zero(ring);
    let mut negate = false;
    if lx.peek() == Some(&Tok::Minus) {
        lx.bump();
        negate = true;
    }
    loop {
        let (m, c) = parse_term(ring, &mut lx)?;
        let c = if negate { field.neg(&c) } else { c };
        out = out
            .checked_add(&Polynomial::term(ring, m, c))
            .expect("same ring");
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.bump();
                negate = false;
            }
            Some(Tok::Minus) => {
                lx.bump();
                negate = true;
            }
            None => break,
            Some(_) => {
                return Err(Error::Syntax {
                    pos: lx.peek_pos(),
                    msg: "expected `+`, `-` or end of input".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Parse a comma-separated generator list.
pub fn parse_polynomial_list<F: Field>(
    ring: &Ring<F>,
    input: &str,
) -> Result<Vec<Polynomial<F>>> {
    input
        .split(',')
        .map(|piece| parse_polynomial(ring, piece.trim()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{prime_ring, rational_ring};

    #[test]
    fn parses_spec_examples() {
        let r = rational_ring("char=0; vars=x,y").unwrap();
        let f = parse_polynomial(&r, "x^3+y^3").unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.total_degree(), Some(3));

        let g = parse_polynomial(&r, "x^2 - 2*x*y + 1/3").unwrap();
        assert_eq!(g.num_terms(), 3);
        assert_eq!(g.to_string(), "x^2 - 2*x*y + 1/3");
    }

    #[test]
    fn implicit_multiplication_and_signs() {
        let r = rational_ring("char=0; vars=x,y").unwrap();
        let f = parse_polynomial(&r, "3x^2y - x").unwrap();
        assert_eq!(f.to_string(), "3*x^2*y - x");
        let g = parse_polynomial(&r, "-x + y").unwrap();
        assert_eq!(g.to_string(), "-x + y");
        // Repeated variables multiply.
        let h = parse_polynomial(&r, "x*x*x").unwrap();
        assert_eq!(h.to_string(), "x^3");
    }

    #[test]
    fn coefficients_reduce_into_prime_fields() {
        let r = prime_ring("char=3; vars=x,y").unwrap();
        // 4y^3 = y^3 and 3x^2 = 0 over F_3.
        let f = parse_polynomial(&r, "3x^2 + 4y^3").unwrap();
        assert_eq!(f.to_string(), "y^3");
        // 1/2 = 2 mod 3.
        let g = parse_polynomial(&r, "1/2").unwrap();
        assert_eq!(g.to_string(), "2");
        assert!(matches!(
            parse_polynomial(&r, "1/3"),
            Err(Error::NonInvertibleCoefficient { p: 3 })
        ));
    }

    #[test]
    fn roundtrips_display_output() {
        let r = rational_ring("char=0; vars=x,y,z").unwrap();
        for src in [
            "x^3+y^3",
            "x^2 - 2*x*y + 1/3",
            "-x^5 + 7/2*y*z^2 - z",
            "x*y*z - 1",
        ] {
            let f = parse_polynomial(&r, src).unwrap();
            let g = parse_polynomial(&r, &f.to_string()).unwrap();
            assert_eq!(f, g, "roundtrip failed for {src}");
        }
    }

    #[test]
    fn reports_positions_and_unknowns() {
        let r = rational_ring("char=0; vars=x,y").unwrap();
        match parse_polynomial(&r, "x + w^2") {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "w");
                assert_eq!(pos, 4);
            }
            other => panic!("expected UnknownVariable, got {other:?}"),
        }
        // Maximal munch: `xy` is a single unknown identifier, not x*y.
        assert!(matches!(
            parse_polynomial(&r, "xy"),
            Err(Error::UnknownVariable { .. })
        ));
        assert!(parse_polynomial(&r, "x + + y").is_err());
        assert!(parse_polynomial(&r, "").is_err());
        assert!(parse_polynomial(&r, "x^").is_err());
        assert!(parse_polynomial(&r, "3/0").is_err());
    }

    #[test]
    fn parses_generator_lists() {
        let r = rational_ring("char=0; vars=x,y").unwrap();
        let gens = parse_polynomial_list(&r, "x^2, y^3").unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1].to_string(), "y^3");
    }
}
