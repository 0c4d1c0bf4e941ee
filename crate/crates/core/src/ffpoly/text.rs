//! Text form `c0+c1*t+...+t^n`, ascending degree, zero terms omitted.

use std::fmt;

use super::field::Fq;
use super::poly::Poly;
use crate::error::{Error, Result};

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    /// Parses the text form. Coefficients of prime fields are reduced modulo q; for
    /// extension fields they are element indices and must be below q. Repeated powers add.
    pub fn parse(s: &str, fq: &Fq) -> Result<Poly> {
        let err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut acc = Poly::zero();
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, power) = match term.split_once('t') {
                None => (term, 0usize),
                Some((c, rest)) => {
                    let c = match c {
                        "" => "1",
                        c => c.strip_suffix('*').ok_or_else(|| err("expected '*' before t"))?,
                    };
                    let power = match rest {
                        "" => 1,
                        r => r
                            .strip_prefix('^')
                            .ok_or_else(|| err("expected '^' after t"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?,
                    };
                    (c, power)
                }
            };
            let c: u64 = coef.parse().map_err(|_| err("bad coefficient"))?;
            let c = if fq.is_prime_field() {
                (c % fq.q() as u64) as u32
            } else if c < fq.q() as u64 {
                c as u32
            } else {
                return Err(Error::CoefficientOutOfRange(c));
            };
            acc = acc.add(&Poly::monomial(power, c), fq);
        }
        Ok(acc)
    }

    /// Builds from a JSON-style coefficient array, validating ranges.
    pub fn from_elems(coeffs: &[u64], fq: &Fq) -> Result<Poly> {
        let v = coeffs
            .iter()
            .map(|&c| if c < fq.q() as u64 { Ok(c as u32) } else { Err(Error::CoefficientOutOfRange(c)) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(v))
    }
}
