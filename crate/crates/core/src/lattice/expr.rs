//! Parser for direct-sum expressions such as `U(7)+E8^2+A4*5` or `U(3)+E6*(3)`.
//!
//! ```text
//! expr := term ('+' term)*
//! term := atom ['*'] ['(' int ')'] ['^' int]
//! atom := 'U' | 'A'n | 'D'n | 'E'n | 'K'p | 'H'p | 'A4*5' | 'L17'
//! ```
//!
//! A `*` directly before the twist turns `X(c)` into the scaled dual `c X^*`.

use num_bigint::BigInt;

use super::catalog::{scaled_dual, StandardLattice};
use super::Lattice;
use crate::error::{Error, Result};

pub fn parse_lattice_expr(input: &str) -> Result<Lattice> {
    let mut parser = Parser { chars: input.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    if parser.chars.is_empty() {
        return Err(parser.error("empty expression"));
    }
    let mut lattice = parser.term()?;
    while parser.eat('+') {
        lattice = lattice.direct_sum(&parser.term()?);
    }
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unexpected character"));
    }
    Ok(lattice.with_label(normalize(input)))
}

fn normalize(input: &str) -> String {
    input.chars().filter(|c| !c.is_whitespace()).collect()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| Error::Parse { position: start, message: "number too large".into() })
    }

    fn int(&mut self) -> Result<BigInt> {
        let negative = self.eat('-');
        let v = BigInt::from(self.uint()?);
        Ok(if negative { -v } else { v })
    }

    fn atom(&mut self) -> Result<Lattice> {
        let start = self.pos;
        let Some(head) = self.peek() else { return Err(self.error("expected a lattice name")) };
        self.pos += 1;
        let std = match head {
            'U' => StandardLattice::U,
            'L' => {
                let n = self.uint()?;
                if n != 17 {
                    return Err(Error::UnknownLattice(format!("L{n}")));
                }
                StandardLattice::L17
            }
            'A' | 'D' | 'E' | 'K' | 'H' => {
                let n = self.uint()?;
                // `A4*5` is a literal name; `A4*(5)` is the scaled dual handled in `term`
                if head == 'A' && n == 4 && self.peek() == Some('*') && self.chars.get(self.pos + 1) == Some(&'5') {
                    self.pos += 2;
                    StandardLattice::A4Star5
                } else {
                    match head {
                        'A' => StandardLattice::A(n as usize),
                        'D' => StandardLattice::D(n as usize),
                        'E' => StandardLattice::E(n as usize),
                        'K' => StandardLattice::K(n),
                        _ => StandardLattice::H(n),
                    }
                }
            }
            other => {
                self.pos = start;
                return Err(self.error(&format!("unknown lattice `{other}`")));
            }
        };
        std.build().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::InvalidParameter {
                name: format!("{name} at position {start}"),
                reason,
            },
            other => other,
        })
    }

    fn term(&mut self) -> Result<Lattice> {
        let mut lattice = self.atom()?;
        let dual = self.eat('*');
        if dual && self.peek() != Some('(') {
            return Err(self.error("a dual must be followed by a scale factor"));
        }
        if self.eat('(') {
            let c = self.int()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            lattice = if dual { scaled_dual(&lattice, &c)? } else { lattice.twist(&c)? };
        }
        if self.eat('^') {
            let k = self.uint()?;
            lattice = lattice.power(k as usize)?;
        }
        Ok(lattice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Elementary, Signature};

    #[test]
    fn parses_sums_twists_and_powers() {
        let l = parse_lattice_expr("U(7) + E8^2 + A4*5").unwrap();
        assert_eq!(l.rank(), 2 + 16 + 4);
        assert_eq!(l.label(), Some("U(7)+E8^2+A4*5"));
    }

    #[test]
    fn negative_twist() {
        let l = parse_lattice_expr("K11(-1)+E8").unwrap();
        assert_eq!(l.signature(), Signature { positive: 2, negative: 8 });
    }

    #[test]
    fn dual_star_twist() {
        let l = parse_lattice_expr("U(3)+E6*(3)").unwrap();
        assert_eq!(l.invariants().elementary, Some(Elementary::Prime { p: 3, a: 7 }));
    }

    #[test]
    fn error_positions() {
        match parse_lattice_expr("U+Q3") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_lattice_expr("U+"), Err(Error::Parse { .. })));
        assert!(matches!(parse_lattice_expr("U(0)"), Err(Error::ZeroTwist)));
        assert!(matches!(parse_lattice_expr("K5"), Err(Error::InvalidParameter { .. })));
        assert!(matches!(parse_lattice_expr("L5"), Err(Error::UnknownLattice(_))));
        assert!(matches!(parse_lattice_expr("E6*"), Err(Error::Parse { .. })));
    }
}
