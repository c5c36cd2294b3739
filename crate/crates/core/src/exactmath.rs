//! Exact bookkeeping of torsion values.
//!
//! A torsion value ln T is stored as a finite rational combination of the
//! atoms `ln π`, `ln 2`, `ln m` and `ln 2 sin(πk/q)`. Floating point only
//! enters at [`LogLinearValue::eval`]. Quadratic surds `(a + b√d)/c` cover the
//! algebraic values that twisted torsions take.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = Ratio<i64>;

/// Relative tolerance used by [`recognize_surd`].
pub const SURD_TOLERANCE: f64 = 1e-9;
/// Default coefficient bound for [`recognize_surd`].
pub const SURD_BOUND: i64 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("ln 2sin(πk/q) requires 0 < k < q, got k={k}, q={q}")]
    SineOutOfRange { k: i64, q: i64 },
    #[error("ln m requires m >= 2, got {0}")]
    IntOutOfRange(i64),
    #[error("requested {0} digits; f64 evaluation supports at most 15")]
    PrecisionUnavailable(u32),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

/// An angle stored as a reduced fraction of a full turn, in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RationalAngle {
    turns: Rational,
}

impl RationalAngle {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator in angle");
        let r = Rational::new(num, den);
        let wrapped = r - r.floor();
        Self { turns: wrapped }
    }

    pub fn zero() -> Self {
        Self::new(0, 1)
    }

    pub fn turns(&self) -> Rational {
        self.turns
    }

    pub fn radians(&self) -> f64 {
        2.0 * PI * ratio_to_f64(self.turns)
    }

    /// Numerator of this angle written over denominator `m`, if `m` is a
    /// multiple of the reduced denominator.
    pub fn numerator_over(&self, m: i64) -> Option<i64> {
        let den = *self.turns.denom();
        (m % den == 0).then(|| *self.turns.numer() * (m / den))
    }

    pub fn is_zero(&self) -> bool {
        self.turns.is_zero()
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.turns.numer(), self.turns.denom())
    }
}

impl From<RationalAngle> for String {
    fn from(a: RationalAngle) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for RationalAngle {
    type Error = ExactError;
    fn try_from(s: String) -> Result<Self, ExactError> {
        let r = parse_rational(&s)?;
        Ok(RationalAngle::new(*r.numer(), *r.denom()))
    }
}

pub fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Formats a rational as `num/den`, always with an explicit denominator.
pub fn format_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Best rational approximation with denominator at most `max_den` that lies
/// within `tol` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol {
            return Some(Rational::new(h1 as i64, k1 as i64));
        }
        let frac = rest - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

/// One logarithmic building block of a torsion value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogAtom {
    LnPi,
    Ln2,
    /// `ln m`, `m >= 2`.
    LnInt(i64),
    /// `ln 2 sin(πk/q)`, `0 < k < q`.
    LnSin { k: i64, q: i64 },
}

impl LogAtom {
    pub fn sin(k: i64, q: i64) -> Result<Self, ExactError> {
        if k <= 0 || k >= q {
            return Err(ExactError::SineOutOfRange { k, q });
        }
        Ok(LogAtom::LnSin { k, q })
    }

    pub fn int(m: i64) -> Result<Self, ExactError> {
        if m < 2 {
            return Err(ExactError::IntOutOfRange(m));
        }
        Ok(if m == 2 { LogAtom::Ln2 } else { LogAtom::LnInt(m) })
    }

    pub fn value(&self) -> f64 {
        match *self {
            LogAtom::LnPi => PI.ln(),
            LogAtom::Ln2 => std::f64::consts::LN_2,
            LogAtom::LnInt(m) => (m as f64).ln(),
            LogAtom::LnSin { k, q } => {
                // fold into (0, 1/2] turn to keep the sine argument small
                let k = if 2 * k > q { q - k } else { k };
                (2.0 * (PI * k as f64 / q as f64).sin()).ln()
            }
        }
    }

    /// Rewrites the atom in normal form: prime logarithms, and reduced sines
    /// with `k <= q/2`. Sines that are square roots of integers are replaced.
    fn normalized(&self) -> Vec<(LogAtom, Rational)> {
        let one = Rational::from_integer(1);
        let half = Rational::new(1, 2);
        match *self {
            LogAtom::LnPi | LogAtom::Ln2 => vec![(*self, one)],
            LogAtom::LnInt(m) => factorize(m as u64)
                .into_iter()
                .map(|(p, e)| {
                    let atom = if p == 2 { LogAtom::Ln2 } else { LogAtom::LnInt(p as i64) };
                    (atom, Rational::from_integer(e as i64))
                })
                .collect(),
            LogAtom::LnSin { k, q } => {
                let g = k.gcd(&q);
                let (mut k, q) = (k / g, q / g);
                if 2 * k > q {
                    k = q - k;
                }
                match q {
                    2 => vec![(LogAtom::Ln2, one)],
                    3 => vec![(LogAtom::LnInt(3), half)],
                    4 => vec![(LogAtom::Ln2, half)],
                    6 => vec![],
                    _ => vec![(LogAtom::LnSin { k, q }, one)],
                }
            }
        }
    }
}

impl fmt::Display for LogAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogAtom::LnPi => write!(f, "ln(pi)"),
            LogAtom::Ln2 => write!(f, "ln(2)"),
            LogAtom::LnInt(m) => write!(f, "ln({m})"),
            LogAtom::LnSin { k, q } => write!(f, "ln(2sin({k}pi/{q}))"),
        }
    }
}

/// Prime factorisation by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `ln Φ_q(1)`: `ln p` when `q = p^a`, zero otherwise (q > 1).
fn cyclotomic_norm_prime(q: i64) -> Option<i64> {
    let f = factorize(q as u64);
    (f.len() == 1).then(|| f[0].0 as i64)
}

/// Exact value `Σ coeff · atom`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LogLinearValue {
    terms: BTreeMap<LogAtom, Rational>,
}

impl LogLinearValue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (LogAtom, Rational)>>(terms: I) -> Self {
        let mut v = Self::new();
        for (atom, c) in terms {
            v.add_term(atom, c);
        }
        v
    }

    pub fn atom(atom: LogAtom) -> Self {
        Self::from_terms([(atom, Rational::from_integer(1))])
    }

    /// `ln(2π²/n)`, the log-volume of S³ divided by `n`.
    pub fn ln_sphere_volume_over(n: i64) -> Self {
        let mut v = Self::from_terms([
            (LogAtom::Ln2, Rational::from_integer(1)),
            (LogAtom::LnPi, Rational::from_integer(2)),
        ]);
        if n > 1 {
            v.add_term(LogAtom::LnInt(n), Rational::from_integer(-1));
        }
        v
    }

    pub fn add_term(&mut self, atom: LogAtom, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let atom = if atom == LogAtom::LnInt(2) { LogAtom::Ln2 } else { atom };
        let entry = self.terms.entry(atom).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn coeff(&self, atom: &LogAtom) -> Rational {
        self.terms.get(atom).copied().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LogAtom, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(a, c)| (*a, *c * factor)))
    }

    pub fn eval(&self) -> f64 {
        // sum smallest magnitudes first
        let mut parts: Vec<f64> = self
            .terms
            .iter()
            .map(|(a, c)| ratio_to_f64(*c) * a.value())
            .collect();
        parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
        parts.into_iter().sum()
    }

    /// Canonical form: prime logarithms, reduced sines with `k <= q/2`, and
    /// every complete row of primitive sines `{k : gcd(k,q) = 1}` with a common
    /// coefficient collapsed through `Π 2sin(πk/q) = Φ_q(1)`.
    pub fn canonicalize(&self) -> Self {
        let mut out = Self::new();
        for (atom, c) in &self.terms {
            for (a, f) in atom.normalized() {
                out.add_term(a, *c * f);
            }
        }

        let mut by_q: BTreeMap<i64, Vec<(i64, Rational)>> = BTreeMap::new();
        for (atom, c) in &out.terms {
            if let LogAtom::LnSin { k, q } = atom {
                by_q.entry(*q).or_default().push((*k, *c));
            }
        }
        for (q, present) in by_q {
            let reps: Vec<i64> = (1..=q / 2).filter(|k| k.gcd(&q) == 1).collect();
            if present.len() != reps.len() {
                continue;
            }
            let c0 = present[0].1;
            if present.iter().any(|(_, c)| *c != c0) {
                continue;
            }
            for k in reps {
                out.terms.remove(&LogAtom::LnSin { k, q });
            }
            if let Some(p) = cyclotomic_norm_prime(q) {
                let atom = if p == 2 { LogAtom::Ln2 } else { LogAtom::LnInt(p) };
                out.add_term(atom, c0 / 2);
            }
        }
        out
    }
}

impl LogLinearValue {
    /// Values of the π-free part under the automorphisms `ζ ↦ ζ^a` of the
    /// cyclotomic field generated by the sines present, one per unit `a` mod
    /// `N`. The first entry (`a = 1`) is the value itself.
    pub fn conjugate_values(&self) -> Vec<f64> {
        let n = self
            .terms
            .keys()
            .filter_map(|a| match a {
                LogAtom::LnSin { q, .. } => Some(*q),
                _ => None,
            })
            .fold(1i64, |acc, q| acc.lcm(&q));
        (1..=n.max(1))
            .filter(|a| a.gcd(&n) == 1)
            .map(|a| {
                self.terms
                    .iter()
                    .map(|(atom, c)| {
                        let v = match *atom {
                            LogAtom::LnPi => 0.0,
                            LogAtom::LnSin { k, q } => (2.0 * (PI * ((a * k) % q) as f64 / q as f64).sin()).abs().ln(),
                            other => other.value(),
                        };
                        ratio_to_f64(*c) * v
                    })
                    .sum()
            })
            .collect()
    }

    /// Exact equality of the represented numbers. The π coefficients must
    /// agree; the rest is a logarithm of a totally real cyclotomic number,
    /// which is determined up to sign by the absolute values of its
    /// conjugates, so equality reduces to comparing every conjugate.
    pub fn same_value(&self, other: &Self) -> bool {
        if self.coeff(&LogAtom::LnPi) != other.coeff(&LogAtom::LnPi) {
            return false;
        }
        let diff = self.clone() - other.clone();
        diff.conjugate_values().iter().all(|v| v.abs() < 1e-9)
    }
}

impl Add for LogLinearValue {
    type Output = LogLinearValue;
    fn add(mut self, rhs: Self) -> Self {
        for (a, c) in rhs.terms {
            self.add_term(a, c);
        }
        self
    }
}

impl Sub for LogLinearValue {
    type Output = LogLinearValue;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LogLinearValue {
    type Output = LogLinearValue;
    fn neg(self) -> Self {
        self.scale(Rational::from_integer(-1))
    }
}

impl fmt::Display for LogLinearValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (atom, c)) in self.terms.iter().enumerate() {
            let sign = match (i, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            if mag == Rational::from_integer(1) {
                write!(f, "{sign}{atom}")?;
            } else {
                write!(f, "{sign}{mag}*{atom}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates `v` to the requested number of significant digits.
pub fn eval_loglinear(v: &LogLinearValue, digits: u32) -> Result<f64, ExactError> {
    if digits > 15 {
        return Err(ExactError::PrecisionUnavailable(digits));
    }
    Ok(v.eval())
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    q: Option<i64>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct LogLinearRecord {
    atoms: Vec<AtomRecord>,
    numeric: f64,
}

impl Serialize for LogLinearValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let atoms = self
            .terms
            .iter()
            .map(|(atom, c)| {
                let (kind, m, k, q) = match *atom {
                    LogAtom::LnPi => ("LnPi", None, None, None),
                    LogAtom::Ln2 => ("Ln2", None, None, None),
                    LogAtom::LnInt(m) => ("LnInt", Some(m), None, None),
                    LogAtom::LnSin { k, q } => ("LnSin", None, Some(k), Some(q)),
                };
                AtomRecord {
                    kind: kind.to_string(),
                    m,
                    k,
                    q,
                    coeff: format_rational(*c),
                }
            })
            .collect();
        LogLinearRecord {
            atoms,
            numeric: self.eval(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LogLinearValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rec = LogLinearRecord::deserialize(deserializer)?;
        let mut v = LogLinearValue::new();
        for a in rec.atoms {
            let atom = match (a.kind.as_str(), a.m, a.k, a.q) {
                ("LnPi", ..) => LogAtom::LnPi,
                ("Ln2", ..) => LogAtom::Ln2,
                ("LnInt", Some(m), ..) => LogAtom::int(m).map_err(D::Error::custom)?,
                ("LnSin", _, Some(k), Some(q)) => LogAtom::sin(k, q).map_err(D::Error::custom)?,
                (other, ..) => return Err(D::Error::custom(format!("bad atom kind {other}"))),
            };
            v.add_term(atom, parse_rational(&a.coeff).map_err(D::Error::custom)?);
        }
        Ok(v)
    }
}

/// `(a + b√d)/c` with `gcd(a,b,c) = 1`, `c > 0` and `d` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct QuadraticSurd {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub fn is_squarefree(d: i64) -> bool {
    d >= 1 && factorize(d as u64).iter().all(|(_, e)| *e == 1)
}

impl QuadraticSurd {
    /// Normalises signs and common factors. A vanishing `b` sets `d = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(c != 0, "zero denominator in surd");
        assert!(is_squarefree(d), "surd radicand {d} is not squarefree");
        let (mut a, mut b, mut c) = if c < 0 { (-a, -b, -c) } else { (a, b, c) };
        let d = if b == 0 || d == 1 {
            a += b;
            b = 0;
            1
        } else {
            d
        };
        let g = a.gcd(&b).gcd(&c);
        if g > 1 {
            a /= g;
            b /= g;
            c /= g;
        }
        Self { a, b, c, d }
    }

    pub fn value(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = |b: i64| -> String {
            match b.abs() {
                1 => format!("sqrt{}", self.d),
                m => format!("{m}*sqrt{}", self.d),
            }
        };
        let (numer, compound) = match (self.a, self.b) {
            (a, 0) => (a.to_string(), false),
            (0, b) => (format!("{}{}", if b < 0 { "-" } else { "" }, root(b)), false),
            (a, b) => (format!("{a}{}{}", if b < 0 { "-" } else { "+" }, root(b)), true),
        };
        match (self.c, compound) {
            (1, _) => write!(f, "{numer}"),
            (c, true) => write!(f, "({numer})/{c}"),
            (c, false) => write!(f, "{numer}/{c}"),
        }
    }
}

impl FromStr for QuadraticSurd {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExactError::Parse {
            what: "surd",
            input: s.to_string(),
        };
        let s = s.trim();
        let (numer, c) = match s.rfind('/') {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
            None => (s, 1),
        };
        let numer = numer.trim_start_matches('(').trim_end_matches(')');
        // split on the sign that precedes the radical term, if any
        let (a_part, b_part) = match numer.find("sqrt") {
            None => (numer, ""),
            Some(pos) => {
                let head = &numer[..pos];
                let split = head.rfind(['+', '-']).unwrap_or(0);
                (&numer[..split], &numer[split..])
            }
        };
        let a = if a_part.is_empty() { 0 } else { a_part.parse().map_err(|_| err())? };
        let (b, d) = if b_part.is_empty() {
            (0, 1)
        } else {
            let (coef, rad) = b_part.split_once("sqrt").ok_or_else(err)?;
            let coef = coef.trim_end_matches('*');
            let b = match coef {
                "" | "+" => 1,
                "-" => -1,
                other => other.parse().map_err(|_| err())?,
            };
            (b, rad.parse().map_err(|_| err())?)
        };
        if c == 0 || !is_squarefree(d) {
            return Err(err());
        }
        Ok(QuadraticSurd::new(a, b, c, d))
    }
}

impl From<QuadraticSurd> for String {
    fn from(s: QuadraticSurd) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for QuadraticSurd {
    type Error = ExactError;
    fn try_from(s: String) -> Result<Self, ExactError> {
        s.parse()
    }
}

/// Finds `(a + b√d)/c` with `|a|, |b|, c <= bound` and `d` from `d_set`
/// matching `x` to [`SURD_TOLERANCE`] relative error, smallest `c` first and,
/// for equal `c`, rational before irrational and small `|b|` first.
pub fn recognize_surd(x: f64, d_set: &[i64], bound: i64) -> Option<QuadraticSurd> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let mut ds: Vec<i64> = d_set.iter().copied().filter(|d| is_squarefree(*d) && *d > 1).collect();
    ds.sort_unstable();
    ds.dedup();
    let close = |v: f64| (v - x).abs() <= SURD_TOLERANCE * x.abs();
    for c in 1..=bound {
        let a = (c as f64 * x).round();
        if a.abs() <= bound as f64 && close(a / c as f64) {
            return Some(QuadraticSurd::new(a as i64, 0, c, 1));
        }
        for b_abs in 1..=bound {
            for &d in &ds {
                for b in [-b_abs, b_abs] {
                    let rad = b as f64 * (d as f64).sqrt();
                    let a = (c as f64 * x - rad).round();
                    if a.abs() <= bound as f64 && close((a + rad) / c as f64) {
                        return Some(QuadraticSurd::new(a as i64, b, c, d));
                    }
                }
            }
        }
    }
    None
}

/// Fundamental units of ℚ(√2), ℚ(√3), ℚ(√5) as log-linear values:
/// `1+√2`, `2+√3` and `(1+√5)/2`.
fn ln_fundamental_unit(d: i64) -> LogLinearValue {
    let r = Rational::new;
    match d {
        2 => LogLinearValue::from_terms([
            (LogAtom::Ln2, r(1, 2)),
            (LogAtom::LnSin { k: 1, q: 8 }, r(-2, 1)),
        ]),
        3 => LogLinearValue::from_terms([(LogAtom::LnSin { k: 1, q: 12 }, r(-2, 1))]),
        5 => LogLinearValue::from_terms([(LogAtom::LnSin { k: 1, q: 10 }, r(-1, 1))]),
        _ => unreachable!("no unit table entry for d={d}"),
    }
}

fn ln_rational(r: Rational) -> LogLinearValue {
    let mut v = LogLinearValue::new();
    for (p, e) in factorize(r.numer().unsigned_abs()) {
        v.add_term(LogAtom::int(p as i64).unwrap(), Rational::from_integer(e as i64));
    }
    for (p, e) in factorize(r.denom().unsigned_abs()) {
        v.add_term(LogAtom::int(p as i64).unwrap(), Rational::from_integer(-(e as i64)));
    }
    v
}

/// Recognises `exp(ln_t)` as `r · √(2^h₂ 3^h₃ 5^h₅) · ε_d^k` with `r` a small
/// positive rational and `ε_d` a fundamental unit of ℚ(√d), d ∈ {2,3,5}, and
/// returns the corresponding log-linear value. The match is verified to
/// `1e-11` relative error in T.
pub fn recognize_log_value(ln_t: f64) -> Option<LogLinearValue> {
    const MAX_DEN: i64 = 1000;
    const MAX_NUM: i64 = 100_000;
    const TOL: f64 = 1e-11;
    if !ln_t.is_finite() {
        return None;
    }
    let mut best: Option<((i64, u32, i64), LogLinearValue)> = None;
    let mut unit_choices = vec![(0i64, 0i64)];
    for k in 1..=6 {
        for d in [2, 3, 5] {
            unit_choices.push((d, k));
            unit_choices.push((d, -k));
        }
    }
    for (d, k) in unit_choices {
        let unit_ln = if k == 0 {
            LogLinearValue::new()
        } else {
            ln_fundamental_unit(d).scale(Rational::from_integer(k))
        };
        for mask in 0u32..8 {
            let mut radical = LogLinearValue::new();
            for (bit, p) in [(1u32, 2i64), (2, 3), (4, 5)] {
                if mask & bit != 0 {
                    radical.add_term(LogAtom::int(p).unwrap(), Rational::new(1, 2));
                }
            }
            let rest = (ln_t - unit_ln.eval() - radical.eval()).exp();
            let Some(r) = rationalize(rest, MAX_DEN, TOL * rest) else {
                continue;
            };
            if *r.numer() <= 0 || *r.numer() > MAX_NUM {
                continue;
            }
            let candidate = (ln_rational(r) + radical.clone() + unit_ln.clone()).canonicalize();
            if ((candidate.eval() - ln_t).exp() - 1.0).abs() > TOL {
                continue;
            }
            let key = (k.abs(), mask.count_ones(), *r.denom());
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, candidate));
            }
        }
    }
    best.map(|(_, v)| v)
}
