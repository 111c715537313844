//! Truncated Laurent series over an exact field.
//!
//! A series stores the coefficients of `t^lead, t^(lead+1), ...` and a
//! horizon: exponents at or beyond the horizon are unknown unless the
//! series is flagged `exact`, in which case they are known to vanish.
//! Polynomial inputs are exact, and ring operations on exact operands stay
//! exact, so truncation only enters through inversion of non-monomials.

use std::cmp::{max, min};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Series {
    field: FieldConfig,
    lead: i64,
    coeffs: Vec<Scalar>,
    horizon: i64,
    exact: bool,
}

impl PartialEq for Series {
    /// The horizon of an exact series is nominal and does not take part.
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.exact == o.exact
            && self.lead == o.lead
            && self.coeffs == o.coeffs
            && (self.exact || self.horizon == o.horizon)
    }
}

impl Eq for Series {}

impl Hash for Series {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.exact.hash(state);
        self.lead.hash(state);
        self.coeffs.hash(state);
        if !self.exact {
            self.horizon.hash(state);
        }
    }
}

// None stands for +infinity in the horizon bookkeeping below.
fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(min(x, y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl Series {
    /// Builds a canonical series. Inexact input is cut at the horizon,
    /// exact input stretches the horizon over its stored terms.
    pub fn new(field: FieldConfig, lead: i64, mut coeffs: Vec<Scalar>, horizon: i64, exact: bool) -> Series {
        let mut lead = lead;
        let mut horizon = horizon;
        if !exact {
            let keep = (horizon - lead).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..skip);
        lead += skip as i64;
        if coeffs.is_empty() {
            lead = if exact { 0 } else { horizon };
        } else if exact {
            horizon = max(horizon, lead + coeffs.len() as i64);
        }
        Series {
            field,
            lead,
            coeffs,
            horizon,
            exact,
        }
    }

    pub fn zero(field: FieldConfig) -> Series {
        Series::new(field, 0, Vec::new(), 0, true)
    }

    /// All coefficients below `horizon` vanish, nothing is known beyond.
    pub fn unknown(field: FieldConfig, horizon: i64) -> Series {
        Series::new(field, horizon, Vec::new(), horizon, false)
    }

    pub fn one(field: FieldConfig) -> Series {
        Series::monomial(Scalar::one(field), 0)
    }

    pub fn from_i64(field: FieldConfig, v: i64) -> Series {
        Series::monomial(Scalar::from_i64(field, v), 0)
    }

    pub fn constant(c: Scalar) -> Series {
        Series::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, k: i64) -> Series {
        let field = c.field();
        Series::new(field, k, vec![c], k + 1, true)
    }

    pub fn t_pow(field: FieldConfig, k: i64) -> Series {
        Series::monomial(Scalar::one(field), k)
    }

    /// Exact polynomial with the given coefficients starting at `t^lead`.
    pub fn polynomial(field: FieldConfig, lead: i64, coeffs: Vec<Scalar>) -> Series {
        Series::new(field, lead, coeffs, lead, true)
    }

    /// Random exact Laurent polynomial with exponents in `lo..=hi`.
    pub fn random<R: Rng + ?Sized>(field: FieldConfig, rng: &mut R, lo: i64, hi: i64) -> Series {
        let coeffs = (lo..=hi).map(|_| Scalar::random(field, rng)).collect();
        Series::polynomial(field, lo, coeffs)
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// True only for the exact zero.
    pub fn is_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// One past the last stored exponent.
    pub fn end(&self) -> i64 {
        self.lead + self.coeffs.len() as i64
    }

    pub fn valuation(&self) -> Result<Valuation> {
        if let Some(_) = self.coeffs.first() {
            Ok(Valuation::Finite(self.lead))
        } else if self.exact {
            Ok(Valuation::Infinite)
        } else {
            Err(Error::IndeterminateValuation {
                horizon: self.horizon,
            })
        }
    }

    /// Valuation of a series known to be nonzero.
    pub fn val(&self) -> Result<i64> {
        match self.valuation()? {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite => Err(Error::InvalidArgument("valuation of zero".into())),
        }
    }

    // Lower bound for the valuation, None = +infinity.
    fn lower_bound(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.lead)
        } else if self.exact {
            None
        } else {
            Some(self.horizon)
        }
    }

    fn known_until(&self) -> Option<i64> {
        if self.exact {
            None
        } else {
            Some(self.horizon)
        }
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i64) -> Result<Scalar> {
        if !self.exact && k >= self.horizon {
            return Err(Error::IndeterminateValuation {
                horizon: self.horizon,
            });
        }
        if k < self.lead || k >= self.end() {
            Ok(Scalar::zero(self.field))
        } else {
            Ok(self.coeffs[(k - self.lead) as usize].clone())
        }
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.first()
    }

    pub fn add(&self, o: &Series) -> Series {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.combine(o, true)
    }

    fn combine(&self, o: &Series, negate: bool) -> Series {
        assert_eq!(self.field, o.field, "series field mismatch");
        let known = min_opt(self.known_until(), o.known_until());
        let exact = known.is_none();
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for s in [self, o] {
            if !s.coeffs.is_empty() {
                lo = min(lo, s.lead);
                hi = max(hi, s.end());
            }
        }
        if let Some(h) = known {
            hi = min(hi, h);
        }
        let horizon = known.unwrap_or(max(self.horizon, o.horizon));
        if lo >= hi {
            return Series::new(self.field, horizon, Vec::new(), horizon, exact);
        }
        let mut out = vec![Scalar::zero(self.field); (hi - lo) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = self.lead + k as i64;
            if e < hi {
                out[(e - lo) as usize] = c.clone();
            }
        }
        for (k, c) in o.coeffs.iter().enumerate() {
            let e = o.lead + k as i64;
            if e < hi {
                let slot = &mut out[(e - lo) as usize];
                *slot = if negate { slot.sub(c) } else { slot.add(c) };
            }
        }
        Series::new(self.field, lo, out, horizon, exact)
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        assert_eq!(self.field, o.field, "series field mismatch");
        if self.is_zero() || o.is_zero() {
            return Series::zero(self.field);
        }
        let known = min_opt(
            add_opt(self.lower_bound(), o.known_until()),
            add_opt(o.lower_bound(), self.known_until()),
        );
        let exact = known.is_none();
        let lo = self.lead + o.lead;
        let mut hi = self.end() + o.end() - 1;
        if let Some(h) = known {
            hi = min(hi, h);
        }
        let horizon = known.unwrap_or(self.horizon + o.horizon);
        if self.coeffs.is_empty() || o.coeffs.is_empty() || lo >= hi {
            return Series::new(self.field, horizon, Vec::new(), horizon, exact);
        }
        let len = (hi - lo) as usize;
        let mut out = vec![Scalar::zero(self.field); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Series::new(self.field, lo, out, horizon, exact)
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        if c.is_zero() {
            return Series::zero(self.field);
        }
        Series {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            ..self.clone()
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Series {
        if self.is_zero() {
            return self.clone();
        }
        Series {
            lead: self.lead + k,
            horizon: self.horizon + k,
            ..self.clone()
        }
    }

    /// Forgets everything from `t^h` on.
    pub fn truncate(&self, h: i64) -> Series {
        let h = if self.exact { h } else { min(h, self.horizon) };
        Series::new(self.field, self.lead, self.coeffs.clone(), h, false)
    }

    /// Drops terms of exponent `>= h` but keeps the result exact. Used when
    /// working modulo `t^h` where the dropped part is known to be irrelevant.
    pub fn reduce_mod(&self, h: i64) -> Series {
        let keep = (h - self.lead).clamp(0, self.coeffs.len() as i64) as usize;
        Series::new(self.field, self.lead, self.coeffs[..keep].to_vec(), self.horizon, self.exact)
    }

    /// Terms of exponent `< h`, as an exact polynomial.
    pub fn head(&self, h: i64) -> Series {
        let keep = (h - self.lead).clamp(0, self.coeffs.len() as i64) as usize;
        Series::polynomial(self.field, self.lead, self.coeffs[..keep].to_vec())
    }

    /// Terms of exponent `>= h`, as an exact polynomial.
    pub fn tail(&self, h: i64) -> Series {
        let skip = (h - self.lead).clamp(0, self.coeffs.len() as i64) as usize;
        Series::polynomial(self.field, self.lead + skip as i64, self.coeffs[skip..].to_vec())
    }

    /// Inverse carrying `precision` correct coefficients past the leading one.
    /// Monomials invert exactly.
    pub fn invert(&self, precision: i64) -> Result<Series> {
        let v = match self.valuation()? {
            Valuation::Finite(v) => v,
            Valuation::Infinite => return Err(Error::InvalidArgument("zero is not invertible".into())),
        };
        if self.exact && self.coeffs.len() == 1 {
            return Ok(Series::monomial(self.coeffs[0].inv().unwrap(), -v));
        }
        let mut r = max(precision, 1);
        if !self.exact {
            r = min(r, self.horizon - v);
        }
        let r = r as usize;
        let c0inv = self.coeffs[0].inv().unwrap();
        let mut b: Vec<Scalar> = Vec::with_capacity(r);
        b.push(c0inv.clone());
        for k in 1..r {
            let mut acc = Scalar::zero(self.field);
            for j in 1..=min(k, self.coeffs.len() - 1) {
                acc = acc.add(&self.coeffs[j].mul(&b[k - j]));
            }
            b.push(acc.mul(&c0inv).neg());
        }
        Ok(Series::new(self.field, -v, b, -v + r as i64, false))
    }

    /// Coefficientwise agreement below the smaller horizon.
    pub fn agrees_with(&self, o: &Series) -> bool {
        if self.field != o.field {
            return false;
        }
        let bound = min_opt(self.known_until(), o.known_until());
        let d = self.sub(o);
        match bound {
            None => d.is_zero(),
            Some(h) => d.coeffs.is_empty() || d.lead >= h,
        }
    }

    /// Turns the series into an exact polynomial, dropping the horizon.
    pub fn into_exact(self) -> Series {
        Series::new(self.field, self.lead, self.coeffs, self.horizon, true)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.lead + k as i64;
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, mag.as_str()) {
                (0, m) => write!(f, "{m}")?,
                (1, "1") => write!(f, "t")?,
                (e, "1") => write!(f, "t^{e}")?,
                (1, m) => write!(f, "{m}*t")?,
                (e, m) => write!(f, "{m}*t^{e}")?,
            }
        }
        if !self.exact {
            if first {
                write!(f, "O(t^{})", self.horizon)?;
            } else {
                write!(f, " + O(t^{})", self.horizon)?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses a Laurent polynomial such as `3/2*t^-1 + 1` or `t - 2*t^3`.
///
/// A trailing `O(t^h)` term marks the series as truncated at `h`; this is
/// how inexact series print, so printing then parsing is a fixed point.
pub fn parse_series(text: &str, field: FieldConfig, horizon: i64) -> Result<Series> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (text[..i].chars().count() + 1, c))
        .collect();
    let mut p = SeriesParser {
        chars,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let mut terms: Vec<(Scalar, i64)> = Vec::new();
    let mut big_o: Option<i64> = None;
    if p.peek().is_none() {
        return Err(p.error("empty series"));
    }
    let mut sign = 1i64;
    if let Some(c @ ('+' | '-')) = p.peek() {
        sign = if c == '-' { -1 } else { 1 };
        p.pos += 1;
    }
    loop {
        if big_o.is_some() {
            return Err(p.error("O(t^h) must be the last term"));
        }
        match p.term(field)? {
            Term::Coeff(c, e) => terms.push((if sign < 0 { c.neg() } else { c }, e)),
            Term::BigO(h) => {
                if sign < 0 {
                    return Err(p.error("O(t^h) cannot be subtracted"));
                }
                big_o = Some(h)
            }
        }
        match p.peek() {
            None => break,
            Some('+') => sign = 1,
            Some('-') => sign = -1,
            Some(c) => return Err(p.error(format!("unexpected {c:?}"))),
        }
        p.pos += 1;
    }
    let limit = big_o.unwrap_or(horizon);
    if let Some(&(_, e)) = terms.iter().max_by_key(|t| t.1) {
        if e >= limit {
            return Err(Error::parse(1, 1, format!("exponent {e} is not below horizon {limit}")));
        }
    }
    if terms.is_empty() {
        return Ok(match big_o {
            Some(h) => Series::unknown(field, h),
            None => Series::new(field, 0, Vec::new(), horizon, true),
        });
    }
    let lo = terms.iter().map(|t| t.1).min().unwrap();
    let hi = terms.iter().map(|t| t.1).max().unwrap();
    let mut coeffs = vec![Scalar::zero(field); (hi - lo + 1) as usize];
    for (c, e) in terms {
        let slot = &mut coeffs[(e - lo) as usize];
        *slot = slot.add(&c);
    }
    Ok(match big_o {
        Some(h) => Series::new(field, lo, coeffs, h, false),
        None => Series::new(field, lo, coeffs, horizon, true),
    })
}

enum Term {
    Coeff(Scalar, i64),
    BigO(i64),
}

struct SeriesParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    end_col: usize,
}

impl SeriesParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.end_col)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.column(), msg)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {want:?}")))
        }
    }

    fn digits(&mut self, signed: bool) -> Result<String> {
        let mut s = String::new();
        if signed {
            if let Some(c @ ('-' | '+')) = self.peek() {
                s.push(c);
                self.pos += 1;
            }
        }
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.pos += 1;
        }
        if s.trim_start_matches(['-', '+']).is_empty() {
            return Err(self.error("expected digits"));
        }
        Ok(s)
    }

    fn exponent(&mut self) -> Result<i64> {
        let col = self.column();
        let d = self.digits(true)?;
        d.parse::<i64>()
            .map_err(|_| Error::parse(1, col, format!("exponent {d} out of range")))
    }

    fn power(&mut self) -> Result<i64> {
        self.expect('t')?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.exponent()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self, field: FieldConfig) -> Result<Term> {
        match self.peek() {
            Some('t') => Ok(Term::Coeff(Scalar::one(field), self.power()?)),
            Some('O') => {
                self.pos += 1;
                self.expect('(')?;
                self.expect('t')?;
                self.expect('^')?;
                let h = self.exponent()?;
                self.expect(')')?;
                Ok(Term::BigO(h))
            }
            Some(c) if c.is_ascii_digit() => {
                let col = self.column();
                let num = BigInt::from_str(&self.digits(false)?).unwrap();
                let mut den = BigInt::from(1);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    den = BigInt::from_str(&self.digits(false)?).unwrap();
                }
                let c = Scalar::from_ratio(field, &num, &den).map_err(|e| Error::parse(1, col, e.to_string()))?;
                let e = if self.peek() == Some('*') {
                    self.pos += 1;
                    self.power()?
                } else {
                    0
                };
                Ok(Term::Coeff(c, e))
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const P: FieldConfig = FieldConfig::Prime(crate::field::DEFAULT_PRIME);
    const Q: FieldConfig = FieldConfig::Rationals;

    fn s(text: &str, f: FieldConfig) -> Series {
        parse_series(text, f, 64).unwrap()
    }

    #[test]
    fn parse_examples() {
        let a = s("t^2 + t^3", P);
        assert_eq!(a.lead(), 2);
        assert_eq!(a.coeffs(), &[Scalar::one(P), Scalar::one(P)]);
        assert!(s("0", P).is_zero());
        let b = s("3/2*t^-1 + 1", Q);
        assert_eq!(b.lead(), -1);
        assert_eq!(b.coeffs()[0].to_string(), "3/2");
        assert_eq!(b.coeffs()[1], Scalar::one(Q));
        assert_eq!(s(" - 2 * t ^ 3 + t - 5 ", Q).to_string(), "-5 + t - 2*t^3");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "t^", "2*", "1 + + t", "t^2 t", "1/0", "x"] {
            assert!(matches!(parse_series(bad, Q, 64), Err(Error::Parse { .. })), "{bad}");
        }
        assert!(parse_series("1/5", FieldConfig::Prime(5), 64).is_err());
        assert!(parse_series("t^64", P, 64).is_err());
        match parse_series("1 + t^2 $", Q, 64) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(s("t^2 + t^3", P).valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(s("0", P).valuation().unwrap(), Valuation::Infinite);
        let unknown = Series::new(P, 0, vec![Scalar::zero(P); 8], 8, false);
        assert_eq!(unknown.valuation(), Err(Error::IndeterminateValuation { horizon: 8 }));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(s("1 + t", P).add(&s("-1", P)), s("t", P));
        assert_eq!(s("t^-1", P).mul(&s("t^3 + t^4", P)), s("t^2 + t^3", P));
        let a = s("1 + t", P).truncate(10);
        let z = a.sub(&a);
        assert_eq!(z.horizon(), 10);
        assert!(z.valuation().is_err());
        assert!(s("1 + t", P).sub(&s("1 + t", P)).is_zero());
    }

    #[test]
    fn horizon_rules() {
        let a = s("1 + t", Q).truncate(5);
        let b = s("t^2", Q).truncate(7);
        assert_eq!(a.add(&b).horizon(), 5);
        assert_eq!(a.mul(&b).horizon(), 7);
        assert_eq!(a.mul(&s("t^3", Q)).horizon(), 8);
        assert!(s("1 + t", Q).mul(&s("t^3", Q)).is_exact());
    }

    #[test]
    fn invert_examples() {
        let inv = s("1 + t", Q).invert(6).unwrap();
        assert_eq!(inv.to_string(), "1 - t + t^2 - t^3 + t^4 - t^5 + O(t^6)");
        assert_eq!(s("t^2", Q).invert(6).unwrap(), s("t^-2", Q));
        assert_eq!(s("2", Q).invert(6).unwrap(), s("1/2", Q));
        assert!(s("0", Q).invert(6).is_err());
        let prod = s("1 + t", Q).mul(&inv);
        assert!(prod.agrees_with(&Series::one(Q)));
    }

    #[test]
    fn display_round_trip_inexact() {
        let inv = s("3 + t - t^2", Q).shift(-2).invert(5).unwrap();
        let back = parse_series(&inv.to_string(), Q, 64).unwrap();
        assert_eq!(back, inv);
        assert_eq!(parse_series("O(t^4)", Q, 64).unwrap(), Series::unknown(Q, 4));
    }

    fn arb_series(field: FieldConfig) -> impl Strategy<Value = Series> {
        (any::<u64>(), -3i64..3, 0i64..4).prop_map(move |(seed, lo, w)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Series::random(field, &mut rng, lo, lo + w)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(P), b in arb_series(P), c in arb_series(P)) {
            let a = a.truncate(9);
            prop_assert!(a.add(&b).add(&c).agrees_with(&a.add(&b.add(&c))));
            prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
        }

        #[test]
        fn valuation_is_additive(a in arb_series(P), b in arb_series(P)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(a.mul(&b).val().unwrap(), a.val().unwrap() + b.val().unwrap());
        }

        #[test]
        fn invert_is_an_involution(a in arb_series(Q)) {
            prop_assume!(!a.is_zero());
            let twice = a.invert(12).unwrap().invert(12).unwrap();
            prop_assert!(twice.agrees_with(&a));
            prop_assert_eq!(a.invert(12).unwrap().val().unwrap(), -a.val().unwrap());
        }

        #[test]
        fn print_parse_fixed_point(a in arb_series(Q), f in arb_series(P)) {
            for x in [a, f] {
                let once = parse_series(&x.to_string(), x.field(), 64).unwrap();
                prop_assert_eq!(&once, &x);
                let twice = parse_series(&once.to_string(), x.field(), 64).unwrap();
                prop_assert_eq!(twice, once);
            }
        }
    }
}
