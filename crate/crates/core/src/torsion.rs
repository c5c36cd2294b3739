//! ln T for S³/Γ twisted by a representation: the class-sum closed form and
//! the elementary cross-checks (lens formula, cyclic decomposition, Cheeger's
//! combinatorial value, induction from cyclic subgroups).
//!
//! Every route first produces the *raw* group average
//! `Σ_p χ*(p) (c_p/|G|) τ̃′(C_p)`; a [`Convention`] then fixes the overall
//! factor.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::{decompose, induce, standard_table, CharacterError, CharacterTable, ClassFunction};
use crate::exactmath::{
    ratio_to_f64, rationalize, recognize_log_value, recognize_surd, ExactError, LogAtom, LogLinearValue, QuadraticSurd, Rational,
    RationalAngle, SURD_BOUND,
};
use crate::groups::{build_group, element_angles, ClassDatum, FiniteSymmetryGroup, GroupError, GroupSpec};
use crate::homology::{h1_order, H1Order, HomologyError};
use crate::zetalab::ZetaError;

/// Radicands tried when recognising torsion values as quadratic surds.
pub const SURD_RADICANDS: [i64; 7] = [2, 3, 5, 6, 10, 15, 30];
/// Pass threshold for induction identities, in ln T.
pub const INDUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorsionError {
    #[error("no irreducible labelled {0:?}")]
    UnknownIrrep(String),
    #[error("l={l} is not coprime to q={q}")]
    NonCoprime { q: u32, l: u32 },
    #[error("U(1) twist r={r} is out of range for q={q}")]
    TwistOutOfRange { q: u32, r: u32 },
    #[error("{0}")]
    TwistUnsupported(String),
    #[error("twist character has {got} values, the group has {expected} classes")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

/// Overall normalisation of ln T.
///
/// `PaperTable` squares T only for twists by complex (non-real) characters of
/// non-cyclic groups; `Doubled` squares every T; `Ray` reports `−2 ln T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Convention {
    #[default]
    #[serde(rename = "paper")]
    PaperTable,
    #[serde(rename = "doubled")]
    Doubled,
    #[serde(rename = "ray")]
    Ray,
}

impl Convention {
    /// Multiplier applied to the raw group average.
    pub fn factor(self, squared_in_table: bool) -> i64 {
        match self {
            Convention::PaperTable => {
                if squared_in_table {
                    2
                } else {
                    1
                }
            }
            Convention::Doubled => 2,
            Convention::Ray => -2,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::PaperTable => "paper",
            Convention::Doubled => "doubled",
            Convention::Ray => "ray",
        })
    }
}

/// The flat bundle: trivial, an irreducible of the group's standard table, or
/// an arbitrary class function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwistSpec {
    Trivial,
    Irrep { label: String },
    ExplicitCharacter { cf: ClassFunction },
}

impl fmt::Display for TwistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistSpec::Trivial => f.write_str("1"),
            TwistSpec::Irrep { label } => f.write_str(label),
            TwistSpec::ExplicitCharacter { .. } => f.write_str("explicit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionResult {
    pub group: String,
    pub twist: String,
    pub convention: Convention,
    pub route: String,
    #[serde(rename = "lnT")]
    pub numeric: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Exact value when one was established; `None` when the value could not
    /// be reconstructed.
    pub log_value: Option<LogLinearValue>,
    pub surd: Option<QuadraticSurd>,
}

impl TorsionResult {
    fn assemble(
        group: String,
        twist: String,
        convention: Convention,
        route: &str,
        numeric: f64,
        log_value: Option<LogLinearValue>,
    ) -> Self {
        let t = numeric.exp();
        // volume terms carry π, which no surd can match
        let try_surd = log_value
            .as_ref()
            .is_none_or(|v| v.coeff(&LogAtom::LnPi) == Rational::from_integer(0));
        let surd = if try_surd {
            recognize_surd(t, &SURD_RADICANDS, SURD_BOUND)
        } else {
            None
        };
        Self {
            group,
            twist,
            convention,
            route: route.to_string(),
            numeric,
            t,
            log_value,
            surd,
        }
    }
}

/// `T_q(k) = ½ ln 2sin(πk/q)`.
pub fn tq_weight(q: i64, k: i64) -> Result<LogLinearValue, ExactError> {
    Ok(LogLinearValue::from_terms([(LogAtom::sin(k, q)?, Rational::new(1, 2))]))
}

/// `b(α, β, k) = 2(cos kα + cos kβ)` for angles `a/q`, `b/q` of a turn.
fn b_numerators(a: i64, b: i64, q: i64, k: i64) -> f64 {
    let c = |m: i64| (2.0 * PI * (m * k).rem_euclid(q) as f64 / q as f64).cos();
    2.0 * (c(a) + c(b))
}

pub fn b_coeff(cls: &ClassDatum, k: i64) -> f64 {
    let (a, b) = cls.angle_numerators();
    b_numerators(a, b, cls.order as i64, k)
}

/// `τ̃′(α, β; 0)` of one class as weighted log atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTau {
    pub terms: Vec<(LogAtom, f64)>,
    pub numeric: f64,
    /// Set when every `b` coefficient is rational.
    pub exact: Option<LogLinearValue>,
}

/// `τ̃′ = Σ_{k<q} b(α,β,k) T_q(k) + ln(2π²/q²)` with `α = a/q`, `β = b/q`
/// turns; the numerators need not be coprime to `q`.
pub fn tau_prime_numerators(a: i64, b: i64, q: i64) -> ClassTau {
    let mut terms = vec![(LogAtom::Ln2, 1.0), (LogAtom::LnPi, 2.0)];
    if q > 1 {
        terms.push((LogAtom::int(q).expect("q >= 2"), -2.0));
    }
    let mut exact = Some(LogLinearValue::ln_sphere_volume_over(q * q));
    for k in 1..q {
        let bk = b_numerators(a, b, q, k);
        let atom = LogAtom::LnSin { k, q };
        terms.push((atom, bk / 2.0));
        match (exact.as_mut(), rationalize(bk, 2, 1e-12)) {
            (Some(v), Some(r)) => v.add_term(atom, r / 2),
            _ => exact = None,
        }
    }
    let numeric = terms.iter().map(|(atom, w)| w * atom.value()).sum();
    ClassTau { terms, numeric, exact }
}

pub fn class_tau_prime(cls: &ClassDatum) -> ClassTau {
    let (a, b) = cls.angle_numerators();
    tau_prime_numerators(a, b, cls.order as i64)
}

/// `τ̃′` for an element with the given angles and order.
pub fn tau_prime_angles(alpha: RationalAngle, beta: RationalAngle, q: u32) -> ClassTau {
    let q = q as i64;
    let a = alpha.numerator_over(q).expect("angle denominator divides the order");
    let b = beta.numerator_over(q).expect("angle denominator divides the order");
    tau_prime_numerators(a, b, q)
}

/// Raw average `Σ_p χ*(p) (c_p/|G|) τ̃′(C_p)` with an exact reconstruction
/// when one can be certified.
pub fn raw_group_average(g: &FiniteSymmetryGroup, chi: &ClassFunction) -> (f64, Option<LogLinearValue>) {
    let order = g.order() as f64;
    let mut numeric = Complex64::new(0.0, 0.0);
    let mut weights: BTreeMap<LogAtom, Complex64> = BTreeMap::new();
    let mut normal_forms: BTreeMap<LogAtom, LogLinearValue> = BTreeMap::new();
    for (p, cls) in g.classes.iter().enumerate() {
        let w = chi.values[p].conj() * (cls.size as f64 / order);
        if w.norm() == 0.0 {
            continue;
        }
        let tau = class_tau_prime(cls);
        numeric += w * tau.numeric;
        for (atom, c) in &tau.terms {
            let nf = normal_forms
                .entry(*atom)
                .or_insert_with(|| LogLinearValue::atom(*atom).canonicalize());
            for (a, f) in nf.terms() {
                *weights.entry(*a).or_default() += w * (*c * ratio_to_f64(*f));
            }
        }
    }
    let numeric = numeric.re;
    let max_den = 2 * g.order() as i64;
    let mut exact = Some(LogLinearValue::new());
    for (atom, w) in &weights {
        let r = if w.im.abs() < 1e-11 {
            rationalize(w.re, max_den, 1e-11)
        } else {
            None
        };
        match (exact.as_mut(), r) {
            (Some(v), Some(r)) => v.add_term(*atom, r),
            _ => {
                exact = None;
                break;
            }
        }
    }
    let certified = |v: &LogLinearValue| (v.eval() - numeric).abs() <= 1e-10 * numeric.abs().max(1.0);
    let exact = exact
        .map(|v| v.canonicalize())
        .filter(certified)
        .or_else(|| recognize_log_value(numeric).filter(certified));
    (numeric, exact)
}

/// Class values of a twist.
pub fn twist_values(
    g: &FiniteSymmetryGroup,
    table: &CharacterTable,
    twist: &TwistSpec,
) -> Result<ClassFunction, TorsionError> {
    let cf = match twist {
        TwistSpec::Trivial => ClassFunction::constant(g.num_classes(), 1.0),
        TwistSpec::Irrep { label } => table
            .get(label)
            .ok_or_else(|| TorsionError::UnknownIrrep(label.clone()))?
            .cf
            .clone(),
        TwistSpec::ExplicitCharacter { cf } => cf.clone(),
    };
    if cf.len() != g.num_classes() {
        return Err(TorsionError::LengthMismatch {
            expected: g.num_classes(),
            got: cf.len(),
        });
    }
    Ok(cf)
}

/// Whether the tabulated convention squares T for this twist: complex
/// characters of non-cyclic groups.
pub fn squared_in_table(g: &FiniteSymmetryGroup, chi: &ClassFunction) -> bool {
    !matches!(g.spec, GroupSpec::Cyclic { .. }) && chi.values.iter().any(|v| v.im.abs() > 1e-9)
}

/// Converts a raw average into a result in `conv`.
pub fn finish(
    g: &FiniteSymmetryGroup,
    chi: &ClassFunction,
    twist: &TwistSpec,
    conv: Convention,
    route: &str,
    raw: f64,
    exact: Option<LogLinearValue>,
) -> TorsionResult {
    let f = conv.factor(squared_in_table(g, chi));
    TorsionResult::assemble(
        g.spec.to_string(),
        twist.to_string(),
        conv,
        route,
        f as f64 * raw,
        exact.map(|v| v.scale(Rational::from_integer(f))),
    )
}

/// ln T by the class-sum closed form.
pub fn torsion_closed_form(
    g: &FiniteSymmetryGroup,
    table: &CharacterTable,
    twist: &TwistSpec,
    conv: Convention,
) -> Result<TorsionResult, TorsionError> {
    let chi = twist_values(g, table, twist)?;
    let (raw, exact) = raw_group_average(g, &chi);
    Ok(finish(g, &chi, twist, conv, "closed", raw, exact))
}

/// Builds the group and its standard table, then evaluates the closed form.
pub fn torsion(spec: GroupSpec, twist: &TwistSpec, conv: Convention) -> Result<TorsionResult, TorsionError> {
    let g = build_group(spec)?;
    let table = standard_table(&g)?;
    torsion_closed_form(&g, &table, twist, conv)
}

/// Every irreducible twist of the standard table, in table order.
pub fn torsion_all_twists(
    g: &FiniteSymmetryGroup,
    table: &CharacterTable,
    conv: Convention,
) -> Result<Vec<TorsionResult>, TorsionError> {
    table
        .irreps
        .iter()
        .map(|c| torsion_closed_form(g, table, &TwistSpec::Irrep { label: c.label.clone() }, conv))
        .collect()
}

/// Lens space `L(q; l₁, l₂)` twisted by `ωʳ`: raw value
/// `Σ_j ln 2sin(π r l_j/q)`, or `ln(2π²/q) − ln q` for `r = 0`.
pub fn torsion_lens(q: u32, l: [u32; 2], r: u32, conv: Convention) -> Result<TorsionResult, TorsionError> {
    if q == 0 {
        return Err(GroupError::InvalidSpec("lens space needs q >= 1".into()).into());
    }
    for &lj in &l {
        if lj.gcd(&q) != 1 {
            return Err(TorsionError::NonCoprime { q, l: lj });
        }
    }
    if r >= q {
        return Err(TorsionError::TwistOutOfRange { q, r });
    }
    let qi = q as i64;
    let raw = if r == 0 {
        lens_trivial(qi)
    } else {
        let mut v = LogLinearValue::new();
        for &lj in &l {
            let k = (r as i64 * lj as i64).rem_euclid(qi);
            v.add_term(LogAtom::sin(k, qi)?, Rational::from_integer(1));
        }
        v.canonicalize()
    };
    let f = Rational::from_integer(conv.factor(false));
    let value = raw.scale(f).canonicalize();
    let twist = if r == 0 { "1".to_string() } else { format!("w^{r}") };
    Ok(TorsionResult::assemble(
        format!("L({q};{},{})", l[0], l[1]),
        twist,
        conv,
        "lens",
        value.eval(),
        Some(value),
    ))
}

fn lens_trivial(q: i64) -> LogLinearValue {
    let mut v = LogLinearValue::ln_sphere_volume_over(q);
    if q > 1 {
        v.add_term(LogAtom::LnInt(q), Rational::from_integer(-1));
    }
    v.canonicalize()
}

/// Cheeger's value for the trivial bundle: `ln(2π²/|G|) − ln|H₁|`.
pub fn torsion_trivial_expected(spec: &GroupSpec) -> Result<LogLinearValue, TorsionError> {
    let mut v = LogLinearValue::ln_sphere_volume_over(spec.expected_order() as i64);
    match h1_order(spec)? {
        H1Order::Finite(n) if n > 1 => v.add_term(LogAtom::LnInt(n), Rational::from_integer(-1)),
        H1Order::Finite(_) => {}
        H1Order::Infinite => {
            return Err(TorsionError::TwistUnsupported(format!("{spec} has infinite H1")));
        }
    }
    Ok(v.canonicalize())
}

/// Trivial-twist torsion of a binary group from cyclic pieces:
/// `½(Σ_axes τ(Z_{2q}) − τ(Z₂))` for T′, O′, Y′ and
/// `½(τ(Z_{2q}) + 2τ(Z₄) − τ(Z₂))` for `D′_q`. Each cyclic torsion is the
/// closed form on the built cyclic group.
pub fn torsion_via_cyclic_decomposition(
    spec: &GroupSpec,
    twist: &TwistSpec,
    conv: Convention,
) -> Result<TorsionResult, TorsionError> {
    if *twist != TwistSpec::Trivial {
        return Err(TorsionError::TwistUnsupported(
            "the cyclic decomposition covers the trivial twist only".into(),
        ));
    }
    let pieces: Vec<(u32, i64)> = match *spec {
        GroupSpec::BinaryTetrahedral => vec![(4, 1), (6, 1), (6, 1), (2, -1)],
        GroupSpec::BinaryOctahedral => vec![(4, 1), (6, 1), (8, 1), (2, -1)],
        GroupSpec::BinaryIcosahedral => vec![(4, 1), (6, 1), (10, 1), (2, -1)],
        GroupSpec::BinaryDihedral { q } => vec![(2 * q, 1), (4, 2), (2, -1)],
        _ => {
            return Err(TorsionError::TwistUnsupported(format!(
                "no cyclic decomposition for {spec}"
            )));
        }
    };
    let mut total = LogLinearValue::new();
    for (n, mult) in pieces {
        let cyc = build_group(GroupSpec::Cyclic { q: n, nu1: 1, nu2: 1 })?;
        let ones = ClassFunction::constant(cyc.num_classes(), 1.0);
        let (_, exact) = raw_group_average(&cyc, &ones);
        let exact = exact.ok_or_else(|| TorsionError::TwistUnsupported(format!("Z{n} value not exact")))?;
        total = total + exact.scale(Rational::new(mult, 2));
    }
    let f = Rational::from_integer(conv.factor(false));
    let value = total.scale(f).canonicalize();
    Ok(TorsionResult::assemble(
        spec.to_string(),
        twist.to_string(),
        conv,
        "cyclic",
        value.eval(),
        Some(value),
    ))
}

/// Raw torsion of the cyclic subgroup generated by `gen` (order `m`),
/// twisted by `ω_m^r`, summed over its elements.
pub fn raw_cyclic_subgroup(g: &FiniteSymmetryGroup, gen: usize, m: u32, r: i64) -> Result<f64, TorsionError> {
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..m as u64 {
        let h = g.power(gen, j);
        let (a, b) = element_angles(g, h)?;
        let tau = tau_prime_angles(a, b, g.element_order(h));
        let omega = Complex64::from_polar(1.0, 2.0 * PI * (r * j as i64) as f64 / m as f64);
        total += omega.conj() * tau.numeric;
    }
    Ok(total.re / m as f64)
}

/// Both sides of `Π_i T(G; χ_i)^{m_i} = T(H; ωʳ)` with `Ind ωʳ = Σ m_i χ_i`,
/// as raw logarithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductionReport {
    pub group: String,
    pub subgroup_order: u32,
    pub r: i64,
    pub decomposition: Vec<(String, u32)>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

pub fn verify_induction(
    g: &FiniteSymmetryGroup,
    table: &CharacterTable,
    gen: usize,
    m: u32,
    r: i64,
) -> Result<InductionReport, TorsionError> {
    let decomposition = decompose(&induce(g, gen, m, r), table)?;
    let mut lhs = 0.0;
    for (label, mult) in &decomposition {
        let chi = &table.get(label).expect("label from the same table").cf;
        lhs += *mult as f64 * raw_group_average(g, chi).0;
    }
    let rhs = raw_cyclic_subgroup(g, gen, m, r)?;
    let residual = (lhs - rhs).abs();
    Ok(InductionReport {
        group: g.spec.to_string(),
        subgroup_order: m,
        r,
        decomposition,
        lhs,
        rhs,
        residual,
        pass: residual < INDUCTION_TOL,
    })
}

/// Closed-form trivial torsion against Cheeger's expression. Groups without
/// a free action have no expected value; their discrepancy is measured
/// against the volume term `ln(2π²/|G|)` alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheegerReport {
    pub group: String,
    pub closed_form: LogLinearValue,
    pub expected: Option<LogLinearValue>,
    pub discrepancy: LogLinearValue,
}

pub fn cheeger_check(g: &FiniteSymmetryGroup) -> Result<CheegerReport, TorsionError> {
    let ones = ClassFunction::constant(g.num_classes(), 1.0);
    let (_, closed) = raw_group_average(g, &ones);
    let closed = closed.ok_or_else(|| TorsionError::TwistUnsupported("trivial value not exact".into()))?;
    let expected = match torsion_trivial_expected(&g.spec) {
        Ok(v) => Some(v),
        Err(TorsionError::Homology(HomologyError::HomologyUnavailable(_))) => None,
        Err(e) => return Err(e),
    };
    let reference = expected
        .clone()
        .unwrap_or_else(|| LogLinearValue::ln_sphere_volume_over(g.order() as i64));
    let discrepancy = (closed.clone() - reference).canonicalize();
    Ok(CheegerReport {
        group: g.spec.to_string(),
        closed_form: closed,
        expected,
        discrepancy,
    })
}
