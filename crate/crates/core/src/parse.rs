//! Polynomial text formats: ascending coefficient lists (`2,2,1`) and a
//! small symbolic form (`X^2+2*X+2`).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Parse either form, in the variable `var` for the symbolic one.
pub fn parse_poly_in(text: &str, var: char) -> Result<IntPoly> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if t.contains(var) || t.contains(var.to_ascii_lowercase()) {
        parse_symbolic(t, var)
    } else if t.contains(',') {
        parse_csv(t)
    } else {
        // a bare integer
        parse_csv(t)
    }
}

pub fn parse_poly(text: &str) -> Result<IntPoly> {
    parse_poly_in(text, 'X')
}

pub fn parse_csv(text: &str) -> Result<IntPoly> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("bad coefficient {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(IntPoly::new)
}

pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
        })
        .collect()
}

fn parse_symbolic(text: &str, var: char) -> Result<IntPoly> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = var.to_ascii_lowercase();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut sign = true;
    let bytes = s.as_bytes();
    for i in 0..=bytes.len() {
        let at_end = i == bytes.len();
        if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^') {
            let term = &s[start..i];
            if !term.is_empty() {
                terms.push((sign, term));
            } else if !at_end && i != 0 {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            if !at_end {
                sign = bytes[i] == b'+';
                start = i + 1;
            }
        } else if i == 0 && (bytes[0] == b'+' || bytes[0] == b'-') {
            sign = bytes[0] == b'+';
            start = 1;
        }
    }
    for (positive, term) in terms {
        let (coef_txt, power) = match term.find([var, lower]) {
            None => (term, 0usize),
            Some(pos) => {
                let before = term[..pos].trim_end_matches('*');
                let after = &term[pos + 1..];
                let power = if after.is_empty() {
                    1
                } else if let Some(e) = after.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                } else {
                    return Err(Error::Parse(format!("unexpected text in {term:?}")));
                };
                (before, power)
            }
        };
        let mut c = if coef_txt.is_empty() {
            BigInt::from(1)
        } else {
            coef_txt
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
        };
        if !positive {
            c = -c;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += c;
    }
    Ok(IntPoly::new(coeffs))
}
