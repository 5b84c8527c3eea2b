use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Cursor;
use crate::error::{Error, Result};
use crate::polycurve::{Curve, RatPoly};

/// Largest exponent accepted in a curve file.
pub const MAX_POWER: usize = 4096;

/// Longest integer literal accepted, in decimal digits.
const MAX_DIGITS: usize = 4096;

fn unsigned(cur: &mut Cursor<'_>, what: &str) -> Result<BigUint> {
    let col = cur.column();
    let d = cur.digits().ok_or_else(|| cur.err(format!("expected {what}")))?;
    if d.len() > MAX_DIGITS {
        return Err(cur.err_at(col, format!("{what} has more than {MAX_DIGITS} digits")));
    }
    Ok(d.parse().expect("digits only"))
}

fn coefficient(cur: &mut Cursor<'_>) -> Result<BigRational> {
    let num = unsigned(cur, "coefficient")?;
    cur.skip_ws();
    if !cur.eat('/') {
        return Ok(BigRational::from_integer(num.into()));
    }
    cur.skip_ws();
    let col = cur.column();
    let den = unsigned(cur, "denominator")?;
    if den.is_zero() {
        return Err(cur.err_at(col, "zero denominator"));
    }
    Ok(BigRational::new(num.into(), den.into()))
}

fn monomial(cur: &mut Cursor<'_>) -> Result<usize> {
    if !(cur.eat('X') || cur.eat('x')) {
        return Err(cur.err("expected X"));
    }
    cur.skip_ws();
    if !cur.eat('^') {
        return Ok(1);
    }
    cur.skip_ws();
    let col = cur.column();
    let p = unsigned(cur, "exponent")?;
    match usize::try_from(&p) {
        Ok(p) if p <= MAX_POWER => Ok(p),
        _ => Err(cur.err_at(col, format!("exponent exceeds {MAX_POWER}"))),
    }
}

/// One term without its sign: `c`, `c*X^n`, `c X^n` or `X^n`.
fn term(cur: &mut Cursor<'_>) -> Result<(BigRational, usize)> {
    if matches!(cur.peek(), Some('X' | 'x')) {
        return Ok((BigRational::one(), monomial(cur)?));
    }
    let c = coefficient(cur)?;
    cur.skip_ws();
    if cur.eat('*') {
        cur.skip_ws();
        return Ok((c, monomial(cur)?));
    }
    if matches!(cur.peek(), Some('X' | 'x')) {
        return Ok((c, monomial(cur)?));
    }
    Ok((c, 0))
}

fn add_term(coeffs: &mut Vec<BigRational>, c: BigRational, p: usize) {
    if coeffs.len() <= p {
        coeffs.resize(p + 1, BigRational::zero());
    }
    coeffs[p] += c;
}

/// Parses one sparse polynomial such as `1/3 - 11/2*X + X^3`.
fn parse_poly_line(line: &str, line_no: usize) -> Result<RatPoly> {
    let mut cur = Cursor::new(line, line_no);
    let mut coeffs = Vec::new();
    cur.skip_ws();
    let mut first = true;
    loop {
        let neg = if cur.eat('-') {
            true
        } else if cur.eat('+') {
            false
        } else if first {
            false
        } else {
            return Err(cur.err("expected '+' or '-' between terms"));
        };
        cur.skip_ws();
        let (c, p) = term(&mut cur)?;
        add_term(&mut coeffs, if neg { -c } else { c }, p);
        first = false;
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
    }
    Ok(RatPoly::new(coeffs))
}

/// Curve text: one polynomial per line, `#` starts a comment, blank lines are
/// ignored. The first polynomial must be `X`.
pub fn parse_curve_text(src: &str) -> Result<Curve> {
    let mut polys = Vec::new();
    let mut first_line = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let poly = parse_poly_line(line, i + 1)?;
        if polys.is_empty() {
            if poly != RatPoly::x() {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(Error::parse(i + 1, col, "first coordinate must be X"));
            }
            first_line = Some(i + 1);
        }
        polys.push(poly);
    }
    if first_line.is_none() {
        return Err(Error::parse(1, 1, "curve has no coordinates"));
    }
    Curve::new(polys)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    k: usize,
    polys: Vec<Vec<((String, String), usize)>>,
}

fn json_int(s: &str, at: &str) -> Result<BigInt> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || body.len() > MAX_DIGITS || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(1, 1, format!("{at}: \"{s}\" is not a decimal integer")));
    }
    Ok(s.parse().expect("validated digits"))
}

/// JSON form `{"k": 2, "polys": [[[["1","1"],1]], [[["1","1"],2]]]}`: each
/// polynomial is a list of `[[numerator, denominator], power]` terms.
/// Structural errors carry the JSON position; semantic ones point at line 1.
pub fn parse_curve_json(src: &str) -> Result<Curve> {
    let doc: CurveDoc = serde_json::from_str(src)
        .map_err(|e| Error::parse(e.line().max(1), e.column().max(1), e.to_string()))?;
    if doc.k != doc.polys.len() {
        return Err(Error::parse(
            1,
            1,
            format!("k = {} but {} polynomials given", doc.k, doc.polys.len()),
        ));
    }
    let mut polys = Vec::with_capacity(doc.k);
    for (j, terms) in doc.polys.iter().enumerate() {
        let mut coeffs = Vec::new();
        for (i, ((n, d), p)) in terms.iter().enumerate() {
            let at = format!("polys[{j}][{i}]");
            let n = json_int(n, &at)?;
            let d = json_int(d, &at)?;
            if d.is_zero() {
                return Err(Error::parse(1, 1, format!("{at}: zero denominator")));
            }
            if *p > MAX_POWER {
                return Err(Error::parse(1, 1, format!("{at}: exponent exceeds {MAX_POWER}")));
            }
            add_term(&mut coeffs, BigRational::new(n, d), *p);
        }
        polys.push(RatPoly::new(coeffs));
    }
    if polys.first() != Some(&RatPoly::x()) {
        return Err(Error::parse(1, 1, "first coordinate must be X"));
    }
    Curve::new(polys)
}

/// Dispatches on the first non-blank character: `{` selects JSON.
pub fn parse_curve(src: &str) -> Result<Curve> {
    if src.trim_start().starts_with('{') {
        parse_curve_json(src)
    } else {
        parse_curve_text(src)
    }
}

pub fn curve_to_text(curve: &Curve) -> String {
    curve.polys().iter().map(|p| format!("{p}\n")).collect()
}

pub fn curve_to_json(curve: &Curve) -> String {
    let doc = CurveDoc {
        k: curve.k(),
        polys: curve
            .polys()
            .iter()
            .map(|p| {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| ((c.numer().to_string(), c.denom().to_string()), i))
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}
