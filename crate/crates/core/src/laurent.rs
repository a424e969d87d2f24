//! Exact Laurent polynomials in `q^{1/2}` and quotients of them.
//!
//! Exponents are stored in half units: the key `k` stands for `q^{k/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn one() -> Laurent {
        Laurent::constant(1)
    }

    pub fn constant(c: i64) -> Laurent {
        Laurent::term(c, 0)
    }

    /// `c q^{half/2}`.
    pub fn term(c: i64, half: i64) -> Laurent {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(half, c);
        }
        Laurent { terms }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Laurent {
        Laurent::term(1, 2 * k)
    }

    /// `[k]` in the base `q^s`: `(q^{sk} - q^{-sk}) / (q^s - q^{-s})`.
    pub fn q_int(k: i64, s: i64) -> Laurent {
        if k < 0 {
            return -Laurent::q_int(-k, s);
        }
        let mut out = Laurent::zero();
        for j in 0..k {
            out.add_term(1, 2 * s * (k - 1 - 2 * j));
        }
        out
    }

    /// `sum_j sign^j q^{s(k-1-2j)}` for `k >= 0`; equals `[k]` when `sign`
    /// is 1 and gives the odd-root quantum integer when it is -1.
    pub fn q_int_signed(k: i64, s: i64, sign: i64) -> Laurent {
        let mut out = Laurent::zero();
        let mut c = 1;
        for j in 0..k.max(0) {
            out.add_term(c, 2 * s * (k - 1 - 2 * j));
            c *= sign;
        }
        out
    }

    pub fn q_factorial(k: i64, s: i64) -> Laurent {
        (1..=k).fold(Laurent::one(), |acc, j| &acc * &Laurent::q_int(j, s))
    }

    /// Gaussian binomial `[n choose k]` in the base `q^s`, for any integer `n`.
    pub fn q_binomial(n: i64, k: i64, s: i64) -> Laurent {
        if k < 0 {
            return Laurent::zero();
        }
        let mut num = Laurent::one();
        for j in 0..k {
            num = &num * &Laurent::q_int(n - j, s);
        }
        num.exact_div(&Laurent::q_factorial(k, s)).expect("Gaussian binomials are Laurent polynomials")
    }

    pub fn add_term(&mut self, c: i64, half: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(half).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&half);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Lowest exponent in half units.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn lowest(&self) -> Option<(i64, i64)> {
        self.terms.iter().next().map(|(&e, &c)| (e, c))
    }

    fn highest(&self) -> Option<(i64, i64)> {
        self.terms.iter().next_back().map(|(&e, &c)| (e, c))
    }

    /// `Some((c, half))` when the polynomial is the single term `c q^{half/2}`.
    pub fn as_monomial(&self) -> Option<(i64, i64)> {
        if self.terms.len() == 1 {
            self.lowest().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    pub fn coefficient(&self, half: i64) -> i64 {
        self.terms.get(&half).copied().unwrap_or(0)
    }

    /// Multiplies by `q^{half/2}`.
    pub fn shift(&self, half: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&e, &c)| (e + half, c)).collect() }
    }

    pub fn scale(&self, c: i64) -> Laurent {
        if c == 0 {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(&e, &x)| (e, x * c)).collect() }
    }

    /// Substitutes `q -> q^k`.
    pub fn substitute(&self, k: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in self.terms() {
            out.add_term(c, e * k);
        }
        out
    }

    /// Exact quotient, if `other` divides `self` with integer coefficients.
    pub fn exact_div(&self, other: &Laurent) -> Option<Laurent> {
        let (dlo, _) = other.lowest()?;
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (dhi, dc) = other.highest()?;
        let mut rem = self.clone();
        let mut quot = Laurent::zero();
        // divide from the top; the remainder's lowest exponent must stay above the divisor's span
        while let Some((rhi, rc)) = rem.highest() {
            let (rlo, _) = rem.lowest()?;
            if rhi - rlo < dhi - dlo || rc % dc != 0 {
                return None;
            }
            let c = rc / dc;
            let e = rhi - dhi;
            quot.add_term(c, e);
            rem = &rem - &other.shift(e).scale(c);
        }
        Some(quot)
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(-c, e);
        }
        out
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        for (e, c) in rhs.terms() {
            self.add_term(c, e);
        }
    }
}

fn fmt_exponent(half: i64) -> String {
    if half % 2 == 0 {
        format!("{}", half / 2)
    } else {
        format!("{half}/2")
    }
}

fn parse_exponent(s: &str) -> Option<i64> {
    match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<i64>().ok(),
        Some(_) => None,
        None => s.trim().parse::<i64>().ok().map(|k| 2 * k),
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            let abs = c.abs();
            let body = match (e, abs) {
                (0, _) => format!("{abs}"),
                (2, 1) => "q".to_string(),
                (_, 1) => format!("q^{}", fmt_exponent(e)),
                (2, _) => format!("{abs}q"),
                _ => format!("{abs}q^{}", fmt_exponent(e)),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Serialized as a map from exponent (`"-1"`, `"1/2"`) to coefficient.
impl Serialize for Laurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in self.terms() {
            map.serialize_entry(&fmt_exponent(e), &c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Laurent, D::Error> {
        let raw: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        let mut out = Laurent::zero();
        for (k, c) in raw {
            let e = parse_exponent(&k).ok_or_else(|| serde::de::Error::custom(format!("bad exponent `{k}`")))?;
            out.add_term(c, e);
        }
        Ok(out)
    }
}

/// A quotient `num / den` of Laurent polynomials, kept reduced only as far as
/// exact division allows. Denominators arising here are products of
/// q-integers, so they never vanish at `q = 0`.
#[derive(Clone, Debug)]
pub struct Ratio {
    num: Laurent,
    den: Laurent,
}

impl Ratio {
    pub fn zero() -> Ratio {
        Ratio::from(Laurent::zero())
    }

    pub fn one() -> Ratio {
        Ratio::from(Laurent::one())
    }

    pub fn new(num: Laurent, den: Laurent) -> Ratio {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = Ratio { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Laurent::one();
            return;
        }
        if let Some((c, e)) = self.den.as_monomial() {
            if c == 1 || c == -1 {
                self.num = self.num.shift(-e).scale(c);
                self.den = Laurent::one();
                return;
            }
        }
        if let Some(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = Laurent::one();
        }
    }

    pub fn num(&self) -> &Laurent {
        &self.num
    }

    pub fn den(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial, when the denominator has been cleared.
    pub fn as_laurent(&self) -> Option<&Laurent> {
        (self.den == Laurent::one()).then_some(&self.num)
    }

    /// Order of vanishing at `q = 0`, in half units.
    pub fn valuation(&self) -> Option<i64> {
        Some(self.num.valuation()? - self.den.valuation()?)
    }

    /// Value at `q = 0` as a reduced fraction; `None` for a pole.
    pub fn at_zero(&self) -> Option<(i64, i64)> {
        let v = match self.valuation() {
            None => return Some((0, 1)),
            Some(v) => v,
        };
        if v < 0 {
            return None;
        }
        if v > 0 {
            return Some((0, 1));
        }
        let (_, a) = self.num.lowest().expect("nonzero");
        let (_, b) = self.den.lowest().expect("nonzero");
        let g = gcd(a.abs(), b.abs()).max(1);
        let s = if b < 0 { -1 } else { 1 };
        Some((s * a / g, s * b / g))
    }

    pub fn div_laurent(&self, d: &Laurent) -> Ratio {
        Ratio::new(self.num.clone(), &self.den * d)
    }

    pub fn mul_laurent(&self, c: &Laurent) -> Ratio {
        Ratio::new(&self.num * c, self.den.clone())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl From<Laurent> for Ratio {
    fn from(num: Laurent) -> Ratio {
        Ratio { num, den: Laurent::one() }
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Ratio) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Ratio {}

impl Add for &Ratio {
    type Output = Ratio;
    fn add(self, rhs: &Ratio) -> Ratio {
        if self.den == rhs.den {
            return Ratio::new(&self.num + &rhs.num, self.den.clone());
        }
        if let Some(k) = self.den.exact_div(&rhs.den) {
            return Ratio::new(&self.num + &(&rhs.num * &k), self.den.clone());
        }
        if let Some(k) = rhs.den.exact_div(&self.den) {
            return Ratio::new(&(&self.num * &k) + &rhs.num, rhs.den.clone());
        }
        Ratio::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &Ratio {
    type Output = Ratio;
    fn sub(self, rhs: &Ratio) -> Ratio {
        self + &(-rhs)
    }
}

impl Mul for &Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &Ratio) -> Ratio {
        Ratio::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Laurent::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// A plain polynomial serializes as its coefficient map; a genuine quotient
/// as `{"num": .., "den": ..}`.
impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        if self.den == Laurent::one() {
            return self.num.serialize(s);
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("num", &self.num)?;
        map.serialize_entry("den", &self.den)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_integers() {
        assert_eq!(Laurent::q_int(0, 1), Laurent::zero());
        assert_eq!(Laurent::q_int(1, 1), Laurent::one());
        assert_eq!(Laurent::q_int(2, 1), &Laurent::q_pow(1) + &Laurent::q_pow(-1));
        assert_eq!(Laurent::q_int(-2, 1), -Laurent::q_int(2, 1));
        assert_eq!(Laurent::q_int(3, 2), Laurent::q_int(3, 1).substitute(2));
        assert_eq!(Laurent::q_int(3, -1), Laurent::q_int(3, 1));
    }

    #[test]
    fn binomials() {
        let b = Laurent::q_binomial(4, 2, 1);
        // q^4 + q^2 + 2 + q^-2 + q^-4
        assert_eq!(b.coefficient(0), 2);
        assert_eq!(b.terms().count(), 5);
        assert_eq!(Laurent::q_binomial(3, 0, 1), Laurent::one());
        assert_eq!(Laurent::q_binomial(2, 3, 1), Laurent::zero());
    }

    #[test]
    fn division() {
        let a = &Laurent::q_int(3, 1) * &Laurent::q_int(2, 1).shift(3);
        assert_eq!(a.exact_div(&Laurent::q_int(2, 1)), Some(Laurent::q_int(3, 1).shift(3)));
        assert_eq!(Laurent::q_int(3, 1).exact_div(&Laurent::q_int(2, 1)), None);
        let r = Ratio::new(Laurent::one(), Laurent::q_int(2, 1));
        assert_eq!(r.at_zero(), Some((0, 1)));
        assert_eq!(r.valuation(), Some(2));
        let back = r.mul_laurent(&Laurent::q_int(2, 1));
        assert_eq!(back.as_laurent(), Some(&Laurent::one()));
    }

    #[test]
    fn fraction_sums() {
        let a = Ratio::new(Laurent::one(), Laurent::q_int(2, 1));
        let b = Ratio::new(Laurent::q_pow(1), Laurent::q_int(2, 1));
        let c = Ratio::new(Laurent::q_pow(-1), Laurent::q_int(2, 1));
        assert_eq!((&b + &c).as_laurent(), Some(&Laurent::one()));
        let s = &(&a + &b) + &c;
        assert!(s.as_laurent().is_none());
        assert_eq!(s.at_zero(), Some((1, 1)));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn display_and_serde() {
        let x = &Laurent::term(-2, 1) + &Laurent::q_pow(-1);
        assert_eq!(x.to_string(), "q^-1 - 2q^1/2");
        let json = serde_json::to_string(&x).unwrap();
        let back: Laurent = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
