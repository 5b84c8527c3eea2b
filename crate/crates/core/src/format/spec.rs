use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::Cursor;
use crate::contfrac::{DyadicSeries, DyadicTerm, ProgrammaticReal, QuotientStream};
use crate::error::{Error, Result};
use crate::factory::PsiSpec;

const MAX_DIGITS: usize = 4096;

/// Most explicit terms `geom(...)` may request.
const MAX_GEOM_TERMS: u64 = 4096;

fn unsigned(cur: &mut Cursor<'_>, what: &str) -> Result<BigUint> {
    cur.skip_ws();
    let col = cur.column();
    let d = cur.digits().ok_or_else(|| cur.err(format!("expected {what}")))?;
    if d.len() > MAX_DIGITS {
        return Err(cur.err_at(col, format!("{what} has more than {MAX_DIGITS} digits")));
    }
    Ok(d.parse().expect("digits only"))
}

fn small(cur: &mut Cursor<'_>, what: &str) -> Result<u64> {
    let col = cur.column();
    let v = unsigned(cur, what)?;
    u64::try_from(&v).map_err(|_| cur.err_at(col, format!("{what} too large")))
}

/// `[-]p[/q]`; negative values only when `signed`.
fn rational(cur: &mut Cursor<'_>, what: &str, signed: bool) -> Result<BigRational> {
    cur.skip_ws();
    let neg = signed && cur.eat('-');
    let num: BigInt = unsigned(cur, what)?.into();
    let num = if neg { -num } else { num };
    cur.skip_ws();
    if !cur.eat('/') {
        return Ok(BigRational::from_integer(num));
    }
    let col = cur.column();
    let den = unsigned(cur, "denominator")?;
    if den.is_zero() {
        return Err(cur.err_at(col, "zero denominator"));
    }
    Ok(BigRational::new(num, den.into()))
}

fn finish(cur: &mut Cursor<'_>) -> Result<()> {
    cur.skip_ws();
    if cur.at_end() {
        Ok(())
    } else {
        Err(cur.err(format!("unexpected trailing input \"{}\"", cur.rest())))
    }
}

/// Re-anchors a validation error at the column where the offending part began.
fn located(col: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(1, col, other.to_string()),
    }
}

fn dyadic_body(cur: &mut Cursor<'_>) -> Result<ProgrammaticReal> {
    let col = cur.column();
    cur.skip_ws();
    if cur.eat_str("geom(") {
        let seed = small(cur, "first exponent")?;
        cur.skip_ws();
        cur.expect(',')?;
        let ratio = rational(cur, "ratio", false)?;
        cur.skip_ws();
        cur.expect(',')?;
        let n_col = cur.column();
        let n = small(cur, "term count")?;
        if n == 0 || n > MAX_GEOM_TERMS {
            return Err(cur.err_at(n_col, format!("term count must be in 1..={MAX_GEOM_TERMS}")));
        }
        cur.skip_ws();
        cur.expect(')')?;
        finish(cur)?;
        let s = DyadicSeries::geometric(seed, ratio, n as usize).map_err(located(col))?;
        return Ok(ProgrammaticReal::dyadic(s));
    }
    let mut terms = Vec::new();
    loop {
        let first = unsigned(cur, "exponent or mantissa")?;
        cur.skip_ws();
        let term = if cur.eat('*') {
            cur.skip_ws();
            if !cur.eat_str("2^-") {
                return Err(cur.err("expected 2^-exponent after '*'"));
            }
            DyadicTerm {
                mantissa: first,
                exponent: small(cur, "exponent")?,
            }
        } else {
            let e = u64::try_from(&first).map_err(|_| cur.err("exponent too large"))?;
            DyadicTerm::unit(e)
        };
        terms.push(term);
        cur.skip_ws();
        if !cur.eat(',') {
            break;
        }
    }
    let growth = if cur.eat(';') {
        cur.skip_ws();
        if !cur.eat_str("growth=") {
            return Err(cur.err("expected growth=RATIO"));
        }
        Some(rational(cur, "growth", false)?)
    } else {
        None
    };
    finish(cur)?;
    let s = match growth {
        Some(g) => DyadicSeries::new(terms, g),
        None => {
            // Unit-mantissa series keep the natural continuation of their exponents.
            let exps: Vec<u64> = terms.iter().map(|t| t.exponent).collect();
            DyadicSeries::from_exponents(&exps).and_then(|d| DyadicSeries::new(terms, d.growth().clone()))
        }
    };
    Ok(ProgrammaticReal::dyadic(s.map_err(located(col))?))
}

fn cf_body(cur: &mut Cursor<'_>) -> Result<ProgrammaticReal> {
    let col = cur.column();
    let a0 = rational(cur, "a0", true)?;
    if !a0.is_integer() {
        return Err(cur.err_at(col, "a0 must be an integer"));
    }
    let a0 = a0.to_integer();
    let mut qs = Vec::new();
    let mut periodic = false;
    let mut period_len = None;
    cur.skip_ws();
    if cur.eat(';') {
        cur.skip_ws();
        if !cur.at_end() && !matches!(cur.peek(), Some(';')) {
            loop {
                cur.skip_ws();
                if cur.eat_str("...") {
                    periodic = true;
                    break;
                }
                qs.push(unsigned(cur, "partial quotient")?);
                cur.skip_ws();
                if !cur.eat(',') {
                    break;
                }
            }
        }
        cur.skip_ws();
        if cur.eat(';') {
            cur.skip_ws();
            if !cur.eat_str("period=") {
                return Err(cur.err("expected period=N"));
            }
            let pcol = cur.column();
            let n = small(cur, "period")?;
            if periodic || n == 0 || n as usize > qs.len() {
                return Err(cur.err_at(pcol, "period must be between 1 and the number of quotients"));
            }
            period_len = Some(n as usize);
        }
    }
    finish(cur)?;
    if periodic && qs.is_empty() {
        return Err(cur.err_at(col, "'...' needs at least one quotient to repeat"));
    }
    let split = match (periodic, period_len) {
        (true, _) => 0,
        (false, Some(n)) => qs.len() - n,
        (false, None) => qs.len(),
    };
    let period = qs.split_off(split);
    let stream = QuotientStream::new(a0, qs, period).map_err(located(col))?;
    Ok(ProgrammaticReal::quotients(stream))
}

/// Parses `rat:p/q`, `dyadic:b1,b2,...` (terms `b` or `m*2^-b`, optional
/// `;growth=r`), `dyadic:geom(b1,ratio,n)` and `cf:a0;a1,a2,...` (a trailing
/// `,...` repeats the listed quotients, `;period=n` repeats the last `n`).
pub fn parse_real(spec: &str) -> Result<ProgrammaticReal> {
    let mut cur = Cursor::new(spec, 1);
    cur.skip_ws();
    if cur.eat_str("rat:") {
        let r = rational(&mut cur, "rational", true)?;
        finish(&mut cur)?;
        Ok(ProgrammaticReal::from_rational(r))
    } else if cur.eat_str("dyadic:") {
        dyadic_body(&mut cur)
    } else if cur.eat_str("cf:") {
        cf_body(&mut cur)
    } else {
        Err(cur.err("real spec must start with rat:, dyadic: or cf:"))
    }
}

/// Parses `power:lambda` or `sched:x1=v1,x2=v2,...;tail=lambda`.
pub fn parse_psi(spec: &str) -> Result<PsiSpec> {
    let mut cur = Cursor::new(spec, 1);
    cur.skip_ws();
    let col = cur.column();
    if cur.eat_str("power:") {
        let l = rational(&mut cur, "exponent", true)?;
        finish(&mut cur)?;
        return PsiSpec::power(l).map_err(located(col));
    }
    if !cur.eat_str("sched:") {
        return Err(cur.err("psi spec must start with power: or sched:"));
    }
    let mut steps = Vec::new();
    loop {
        let x = unsigned(&mut cur, "step position")?;
        cur.skip_ws();
        cur.expect('=')?;
        let v = rational(&mut cur, "step value", true)?;
        steps.push((x, v));
        cur.skip_ws();
        if !cur.eat(',') {
            break;
        }
    }
    cur.expect(';')?;
    cur.skip_ws();
    if !cur.eat_str("tail=") {
        return Err(cur.err("expected tail=EXPONENT"));
    }
    let tail = rational(&mut cur, "tail exponent", true)?;
    finish(&mut cur)?;
    PsiSpec::scheduled(steps, tail).map_err(located(col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::contfrac::RealKind;

    #[test]
    fn rational_and_cf() {
        let r = parse_real("rat:-3/6").unwrap();
        assert_eq!(r.to_spec(), "rat:-1/2");
        let g = parse_real("cf:0;1,...").unwrap();
        assert_eq!(g, ProgrammaticReal::golden_conjugate());
        let p = parse_real("cf:3;7,15,1,292").unwrap();
        assert!(p.is_rational());
        let m = parse_real("cf:1;2,3,4;period=2").unwrap();
        match m.kind() {
            RealKind::Quotients(s) => {
                assert_eq!(s.prefix().len(), 1);
                assert_eq!(s.period().len(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_real(&m.to_spec()).unwrap(), m);
    }

    #[test]
    fn dyadic_forms() {
        let d = parse_real("dyadic:2,16,128,1024").unwrap();
        assert_eq!(d, ProgrammaticReal::dyadic_exponents(&[2, 16, 128, 1024]).unwrap());
        assert_eq!(parse_real(&d.to_spec()).unwrap(), d);
        let g = parse_real("dyadic:geom(2,8,4)").unwrap();
        assert_eq!(parse_real(&g.to_spec()).unwrap(), g);
        let m = parse_real("dyadic:2, 3*2^-10 ;growth=3").unwrap();
        assert_eq!(parse_real(&m.to_spec()).unwrap(), m);
    }

    #[test]
    fn errors_carry_columns() {
        match parse_real("dyadic:2,1") {
            Err(Error::Parse { column: 8, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_real("cf:0;1,x") {
            Err(Error::Parse { column: 8, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_real("real:1").is_err());
        assert!(parse_real("rat:1/0").is_err());
    }

    #[test]
    fn psi_forms() {
        let p = parse_psi("power:4").unwrap();
        assert_eq!(p, PsiSpec::power(rat(4, 1)).unwrap());
        let s = parse_psi("sched:1=1/2,10=1/1000;tail=2").unwrap();
        assert_eq!(parse_psi(&s.to_string()).unwrap(), s);
        assert!(parse_psi("power:-1").is_err());
        assert!(parse_psi("sched:10=1,1=1;tail=2").is_err());
    }
}
