//! Parser for algebra elements:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := (coeff '*')? factor+
//! factor := VERTEXID | EDGEID '[' INT ']' '*'?
//! coeff  := INT | INT '/' INT
//! ```
//!
//! A leading sign is accepted on the first term. Juxtaposed factors multiply;
//! a product that is not composable is zero and produces a warning.

use num_bigint::BigInt;

use crate::algebra::{multiply, AlgebraElement};
use crate::error::ParseError;
use crate::field::Field;
use crate::graph::{TaggedEdge, WeightedGraph};

/// A parsed element plus notes about terms that collapsed to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub element: AlgebraElement,
    pub warnings: Vec<String>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    g: &'a WeightedGraph,
    field: Field,
    warnings: Vec<String>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\''
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<AlgebraElement, ParseError> {
        self.skip_ws();
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            self.eat('+');
        }
        let mut acc = AlgebraElement::zero(self.field);
        loop {
            let t = self.term()?;
            let t = if negate { t.scale(&self.field.from_i64(-1)) } else { t };
            acc = acc.try_add(&t).expect("single field");
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                None => return Ok(acc),
                Some(c) => return self.err(format!("unexpected `{c}`")),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        self.skip_ws();
        let term_start = self.pos;
        let mut coeff = self.field.one();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.int()?;
            let den = if self.eat('/') { self.int()? } else { BigInt::from(1) };
            coeff = self.field.from_ratio(&num, &den)?;
            self.skip_ws();
            if !self.eat('*') {
                return self.err("expected `*` after coefficient");
            }
        }
        let mut product: Option<AlgebraElement> = None;
        loop {
            self.skip_ws();
            if !self.peek().is_some_and(is_ident_start) {
                break;
            }
            let f = self.factor()?;
            product = Some(match product {
                None => f,
                Some(p) => multiply(self.g, &p, &f).expect("single field"),
            });
        }
        let Some(product) = product else {
            return self.err("expected a vertex or edge factor");
        };
        if product.is_zero() {
            self.warnings.push(format!(
                "term `{}` is not composable and was dropped",
                self.src[term_start..self.pos].trim()
            ));
        }
        Ok(product.scale(&coeff))
    }

    fn factor(&mut self) -> Result<AlgebraElement, ParseError> {
        let position = self.pos;
        let name = self.ident();
        if self.eat('[') {
            let edge = self.g.edge_by_id(name).ok_or_else(|| ParseError::UnknownIdentifier {
                name: name.to_string(),
                position,
            })?;
            let tag_pos = self.pos;
            let tag = self.int()?;
            if !self.eat(']') {
                return self.err("expected `]`");
            }
            let weight = self.g.edge(edge).weight;
            let tag: u32 = match u32::try_from(&tag) {
                Ok(t) if (1..=weight).contains(&t) => t,
                _ => {
                    return Err(ParseError::TagOutOfRange {
                        edge: name.to_string(),
                        tag: u32::try_from(&tag).unwrap_or(u32::MAX),
                        weight,
                        position: tag_pos,
                    })
                }
            };
            let t = TaggedEdge { edge, tag };
            let letter = if self.eat('*') { t.ghost() } else { t.real() };
            Ok(AlgebraElement::letter(self.field, self.g, letter))
        } else {
            let v = self.g.vertex(name).ok_or_else(|| ParseError::UnknownIdentifier {
                name: name.to_string(),
                position,
            })?;
            Ok(AlgebraElement::vertex(self.field, v))
        }
    }
}

/// Parses an element of `L_K(E)` over `field`.
pub fn parse_expr(text: &str, g: &WeightedGraph, field: Field) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        g,
        field,
        warnings: Vec::new(),
    };
    let element = p.expr()?;
    Ok(Parsed {
        element,
        warnings: p.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn two_letter_monomial() {
        let g = fixtures::excat_base();
        let p = parse_expr("e[1] f[2]*", &g, Field::Rational).unwrap();
        assert_eq!(p.element.len(), 1);
        let (w, _) = p.element.terms().next().unwrap();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn coefficients_merge() {
        let g = fixtures::excat_base();
        let p = parse_expr("2*v - 3*v", &g, Field::Rational).unwrap();
        assert_eq!(p.element.display(&g), "-v");
    }

    #[test]
    fn half_fails_in_f2_third_does_not() {
        let g = fixtures::excat_base();
        assert!(matches!(
            parse_expr("1/2*e[1]", &g, Field::Prime(2)),
            Err(ParseError::Field(_))
        ));
        let p = parse_expr("1/3*e[1]", &g, Field::Prime(2)).unwrap();
        assert_eq!(p.element.display(&g), "e[1]");
    }

    #[test]
    fn errors_carry_positions() {
        let g = fixtures::excat_base();
        assert_eq!(
            parse_expr("e[1] x", &g, Field::Rational),
            Err(ParseError::UnknownIdentifier {
                name: "x".into(),
                position: 5
            })
        );
        assert!(matches!(
            parse_expr("e[3]", &g, Field::Rational),
            Err(ParseError::TagOutOfRange { tag: 3, .. })
        ));
        assert!(matches!(parse_expr("2*", &g, Field::Rational), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn non_composable_warns() {
        let g = fixtures::excat11_base();
        let p = parse_expr("e[1] e[1] + u", &g, Field::Rational).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.element.display(&g), "u");
    }

    #[test]
    fn display_round_trips() {
        let g = fixtures::excat_base();
        let p = parse_expr("2*e[1] f[2]* - 1/3*v", &g, Field::Rational).unwrap();
        let again = parse_expr(&p.element.display(&g), &g, Field::Rational).unwrap();
        assert_eq!(p.element, again.element);
    }
}
