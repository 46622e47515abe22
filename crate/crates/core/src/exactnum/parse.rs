//! Text form of scalars.
//!
//! Grammar: a signed sum of terms, each an optional rational coefficient
//! (`3`, `1/2`, `0.25`) followed by an optional unit `i`, `w` or `w^k`.
//! Whitespace is ignored; `*` between coefficient and unit is accepted.

use num_complex::Complex64;
use thiserror::Error;

use super::cyclotomic::Cyclo8;
use super::rational::Rational;
use super::{Mode, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

pub fn parse_scalar(text: &str, mode: Mode) -> Result<Scalar, ParseError> {
    // keep original character positions for error reporting
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err(0, "empty scalar"));
    }
    let mut pos = 0;
    let mut acc = Cyclo8::zero();
    let at = |p: usize| chars.get(p).map_or(text.len(), |(i, _)| *i);
    while pos < chars.len() {
        let mut negative = false;
        match chars[pos].1 {
            '+' | '-' => {
                negative = chars[pos].1 == '-';
                pos += 1;
            }
            _ if pos > 0 => return Err(err(at(pos), "expected '+' or '-'")),
            _ => {}
        }
        let start = pos;
        while pos < chars.len() && is_coeff_char(&chars, pos) {
            pos += 1;
        }
        let coeff_text: String = chars[start..pos].iter().map(|(_, c)| c).collect();
        let coeff = if coeff_text.is_empty() {
            None
        } else {
            Some(
                Rational::parse_literal(&coeff_text)
                    .ok_or_else(|| err(at(start), format!("bad coefficient {coeff_text:?}")))?,
            )
        };
        if coeff.is_some() && pos < chars.len() && chars[pos].1 == '*' {
            pos += 1;
            if pos >= chars.len() || !matches!(chars[pos].1, 'i' | 'w') {
                return Err(err(at(pos), "expected unit after '*'"));
            }
        }
        let unit_pos = pos;
        let power = match chars.get(pos).map(|(_, c)| *c) {
            Some('i') => {
                pos += 1;
                Some(2)
            }
            Some('w') => {
                pos += 1;
                if pos < chars.len() && chars[pos].1 == '^' {
                    pos += 1;
                    let estart = pos;
                    while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                        pos += 1;
                    }
                    let digits: String = chars[estart..pos].iter().map(|(_, c)| c).collect();
                    let k: i64 = digits
                        .parse()
                        .map_err(|_| err(at(estart), "expected exponent after '^'"))?;
                    Some(k)
                } else {
                    Some(1)
                }
            }
            _ => None,
        };
        if coeff.is_none() && power.is_none() {
            return Err(err(at(unit_pos), "expected a number, 'i' or 'w'"));
        }
        let mut term = Cyclo8::root_of_unity(power.unwrap_or(0));
        if let Some(c) = coeff {
            term = term.scale(&c);
        }
        acc = if negative { &acc - &term } else { &acc + &term };
    }
    Ok(Scalar::Exact(acc).into_mode(mode))
}

fn is_coeff_char(chars: &[(usize, char)], pos: usize) -> bool {
    let c = chars[pos].1;
    if c.is_ascii_digit() || c == '.' || c == '/' {
        return true;
    }
    // exponent marker of a decimal: only directly after a digit and before
    // a digit or sign-then-digit
    if c == 'e' || c == 'E' {
        let prev_digit = pos > 0 && chars[pos - 1].1.is_ascii_digit();
        let next = chars.get(pos + 1).map(|(_, c)| *c);
        let next_ok = match next {
            Some(d) if d.is_ascii_digit() => true,
            Some('+') | Some('-') => chars.get(pos + 2).is_some_and(|(_, d)| d.is_ascii_digit()),
            _ => false,
        };
        return prev_digit && next_ok;
    }
    if c == '+' || c == '-' {
        // sign inside an exponent
        return pos > 0 && matches!(chars[pos - 1].1, 'e' | 'E') && is_coeff_char(chars, pos - 1);
    }
    false
}

pub fn format_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Exact(c) => c.to_string(),
        Scalar::Float(z) => format_complex(*z),
    }
}

fn format_complex(z: Complex64) -> String {
    // avoid printing "-0"
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{}i", unit_coeff(im)),
        (false, false) if im < 0.0 => format!("{re}-{}i", unit_coeff(-im)),
        (false, false) => format!("{re}+{}i", unit_coeff(im)),
    }
}

fn unit_coeff(v: f64) -> String {
    if v == 1.0 {
        String::new()
    } else if v == -1.0 {
        "-".to_string()
    } else {
        format!("{v}")
    }
}
