//! Formal log-series of Ruelle and Selberg zeta functions over finite lists
//! of closed-geodesic classes, the factorization check, graded
//! determinants over finite spectrum tables and leading-term bookkeeping.
//!
//! Everything here is coefficientwise. A log-series Σ c·e^{−σℓ} is stored
//! as its (ℓ, c) pairs; σ-evaluation exists only for diagnostics.

use crate::eta_pipeline::EtaFamily;
use crate::exact::{C, Q};
use crate::group_model::{ad_determinant_factor, GroupModel, ModelError};
use crate::lie_characters::{evaluate_character, TorusElement, VirtualCharacter, Weight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Lengths closer than this are merged into one term.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ZetaError {
    #[error("class {0}: holonomy is elliptic")]
    EllipticClass(String),
    #[error("class {id}: {reason}")]
    InvalidRecord { id: String, reason: String },
    #[error("σ = {sigma} is a pole of order {order}")]
    EvaluationAtPole { sigma: String, order: i64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn default_one() -> u32 {
    1
}

/// One conjugacy class [γ] with γ ∼ e^a·k⁻¹ in the fundamental Cartan
/// subgroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyClassRecord {
    pub id: String,
    pub ell: f64,
    pub holonomy: TorusElement,
    pub chi_orb: Q,
    pub m_mult: u32,
    #[serde(default = "default_one")]
    pub n_mult: u32,
}

impl ConjugacyClassRecord {
    pub fn validate(&self) -> Result<(), ZetaError> {
        let bad = |reason: &str| Err(ZetaError::InvalidRecord { id: self.id.clone(), reason: reason.into() });
        if !(self.ell.is_finite() && self.ell > 0.0) {
            return bad("length must be positive");
        }
        if self.m_mult == 0 || self.n_mult == 0 {
            return bad("multiplicities must be at least 1");
        }
        match self.holonomy.a_part.first() {
            Some(a) if *a > 0.0 && a.is_finite() => {}
            _ => return bad("holonomy a-part must be positive"),
        }
        if self.holonomy.t_angles.iter().any(|t| !t.is_finite()) {
            return bad("non-finite angle");
        }
        Ok(())
    }

    /// χ_orb / m_[γ] as a float.
    pub fn weight(&self) -> f64 {
        (&self.chi_orb / &Q::int(self.m_mult as i64)).to_f64()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogZetaSeries {
    /// Strictly increasing lengths (after merge) with their coefficients.
    pub terms: Vec<(f64, Complex64)>,
}

impl LogZetaSeries {
    pub fn from_terms(mut raw: Vec<(f64, Complex64)>) -> LogZetaSeries {
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut terms: Vec<(f64, Complex64)> = Vec::new();
        for (l, c) in raw {
            match terms.last_mut() {
                Some(last) if (l - last.0).abs() < MERGE_TOL => last.1 += c,
                _ => terms.push((l, c)),
            }
        }
        LogZetaSeries { terms }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &LogZetaSeries) -> LogZetaSeries {
        LogZetaSeries::from_terms(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn conj(&self) -> LogZetaSeries {
        LogZetaSeries { terms: self.terms.iter().map(|(l, c)| (*l, c.conj())).collect() }
    }

    /// Σ c·e^{−σℓ}, the log of the zeta function (diagnostic).
    pub fn eval(&self, sigma: Complex64) -> Complex64 {
        self.terms.iter().map(|(l, c)| c * (-sigma * l).exp()).sum()
    }

    /// Worst coefficient difference after aligning lengths.
    pub fn max_diff(&self, o: &LogZetaSeries) -> f64 {
        let neg = LogZetaSeries { terms: o.terms.iter().map(|(l, c)| (*l, -c)).collect() };
        self.add(&neg).terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

/// log R_ρ: coefficient (χ_orb/m)·Tr[ρ(e^a k⁻¹)] at length ℓ.
pub fn ruelle_log_series(classes: &[ConjugacyClassRecord], rep_char: &VirtualCharacter) -> Result<LogZetaSeries, ZetaError> {
    let mut raw = Vec::with_capacity(classes.len());
    for c in classes {
        c.validate()?;
        raw.push((c.ell, evaluate_character(rep_char, &c.holonomy) * c.weight()));
    }
    Ok(LogZetaSeries::from_terms(raw))
}

fn selberg_coefficient(c: &ConjugacyClassRecord, eta: &VirtualCharacter, model: &GroupModel) -> Result<Complex64, ZetaError> {
    c.validate()?;
    let det = ad_determinant_factor(model, &c.holonomy).map_err(|e| match e {
        ModelError::EllipticClass => ZetaError::EllipticClass(c.id.clone()),
        other => other.into(),
    })?;
    Ok(-evaluate_character(eta, &c.holonomy) * (c.weight() / det))
}

/// log Z_η: coefficient −(χ_orb/m)·Tr_s[η(k⁻¹)]/|det(1−Ad)|_{z⊥(b)}|^{1/2}.
pub fn selberg_log_series(
    classes: &[ConjugacyClassRecord],
    eta: &VirtualCharacter,
    model: &GroupModel,
) -> Result<LogZetaSeries, ZetaError> {
    let mut raw = Vec::with_capacity(classes.len());
    for c in classes {
        raw.push((c.ell, selberg_coefficient(c, eta, model)?));
    }
    Ok(LogZetaSeries::from_terms(raw))
}

/// |β|·|a| for the holonomy of a class.
fn beta_length(fam: &EtaFamily, beta: &Weight, x: &TorusElement) -> Result<f64, ZetaError> {
    let a0 = fam.model.a0_norm_sq()?.to_f64().sqrt();
    Ok(fam.norm_sq(beta).to_f64().sqrt() * x.a_part[0].abs() * a0)
}

/// Per-class defect of log R_ρ = −log Z_{η₀} − Σ_{β>0}[log Z_{η_β}(σ+|β|) + log Z_{η_β}(σ−|β|)]:
/// c_R + c_{η₀} + Σ_{β>0}(e^{−|β|ℓ} + e^{|β|ℓ})·c_{η_β}.
pub fn factorization_defects(
    classes: &[ConjugacyClassRecord],
    fam: &EtaFamily,
    rep_char: &VirtualCharacter,
) -> Result<Vec<(f64, Complex64)>, ZetaError> {
    let model = &fam.model;
    let zero = model.zero_weight();
    let eta0 = fam.eta(&zero);
    let pos: Vec<(Weight, VirtualCharacter)> = fam.positive_betas().into_iter().map(|b| (b.clone(), fam.eta(&b))).collect();
    let mut out = Vec::with_capacity(classes.len());
    for c in classes {
        c.validate()?;
        let mut d = evaluate_character(rep_char, &c.holonomy) * c.weight();
        d += selberg_coefficient(c, &eta0, model)?;
        for (beta, eta) in &pos {
            let s = beta_length(fam, beta, &c.holonomy)?;
            d += selberg_coefficient(c, eta, model)? * ((-s).exp() + s.exp());
        }
        out.push((c.ell, d));
    }
    Ok(out)
}

/// Worst per-length residual of the factorization, after merging classes of
/// equal length.
pub fn factorization_check(
    classes: &[ConjugacyClassRecord],
    fam: &EtaFamily,
    rep_char: &VirtualCharacter,
) -> Result<f64, ZetaError> {
    let merged = LogZetaSeries::from_terms(factorization_defects(classes, fam, rep_char)?);
    Ok(merged.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max))
}

/// Worst |c_{ρ^θ}(ℓ) − conj(c_ρ(ℓ))| over lengths.
pub fn conjugation_symmetry_check(
    classes: &[ConjugacyClassRecord],
    rep_char: &VirtualCharacter,
    rep_theta_char: &VirtualCharacter,
) -> Result<f64, ZetaError> {
    let a = ruelle_log_series(classes, rep_char)?;
    let b = ruelle_log_series(classes, rep_theta_char)?;
    Ok(b.max_diff(&a.conj()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub lambda: Q,
    pub mult_plus: u64,
    pub mult_minus: u64,
}

impl SpectrumRow {
    pub fn net(&self) -> i64 {
        self.mult_plus as i64 - self.mult_minus as i64
    }
}

/// Finite stand-in for the spectrum of a Casimir or Laplacian, with ± graded
/// multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub label: String,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn new(label: &str, rows: Vec<(Q, u64, u64)>) -> Result<SpectrumTable, ZetaError> {
        let mut out: Vec<SpectrumRow> = Vec::new();
        for (lambda, p, m) in rows {
            if out.iter().any(|r| r.lambda == lambda) {
                return Err(ZetaError::InvalidRecord { id: label.into(), reason: format!("repeated eigenvalue {lambda}") });
            }
            out.push(SpectrumRow { lambda, mult_plus: p, mult_minus: m });
        }
        out.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        Ok(SpectrumTable { label: label.into(), rows: out })
    }

    /// m_η(λ) = mult₊ − mult₋ at λ (0 if absent).
    pub fn m_at(&self, lambda: &Q) -> i64 {
        self.rows.iter().find(|r| &r.lambda == lambda).map(SpectrumRow::net).unwrap_or(0)
    }

    /// The same table with ± multiplicities exchanged.
    pub fn negated(&self) -> SpectrumTable {
        SpectrumTable {
            label: format!("{}-negated", self.label),
            rows: self.rows.iter().map(|r| SpectrumRow { lambda: r.lambda.clone(), mult_plus: r.mult_minus, mult_minus: r.mult_plus }).collect(),
        }
    }
}

/// Order of zero (positive) or pole (negative) of Π(λ+σ)^{m(λ)} at σ.
pub fn order_at(spec: &SpectrumTable, sigma: &Q) -> i64 {
    spec.m_at(&-sigma.clone())
}

/// Π(λ+σ)^{mult₊−mult₋}, exactly over Q(i). A pole is reported with its
/// order; a zero evaluates to 0.
pub fn graded_determinant(spec: &SpectrumTable, sigma: &C) -> Result<C, ZetaError> {
    let mut out = C::one();
    let mut zero = false;
    for r in &spec.rows {
        let n = r.net();
        if n == 0 {
            continue;
        }
        let f = C::real(r.lambda.clone()) + sigma.clone();
        if f.is_zero() {
            if n < 0 {
                return Err(ZetaError::EvaluationAtPole { sigma: format!("{sigma:?}"), order: n });
            }
            zero = true;
            continue;
        }
        let p = f.pow(n.unsigned_abs() as u32);
        out = if n > 0 { out * p } else { out * p.inv() };
    }
    Ok(if zero { C::zero() } else { out })
}

/// Float version of the graded determinant.
pub fn graded_determinant_f64(spec: &SpectrumTable, sigma: Complex64) -> Complex64 {
    spec.rows.iter().map(|r| (Complex64::new(r.lambda.to_f64(), 0.0) + sigma).powi(r.net() as i32)).product()
}

/// A predicted zero (order > 0) or pole (order < 0) of Z_η.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroPrediction {
    /// σ² at the location: σ = ±√(−(λ+σ_η)).
    pub sigma_squared: Q,
    /// +1 or −1 for the two roots, 0 for the origin.
    pub branch: i8,
    pub order: i64,
}

impl ZeroPrediction {
    pub fn location(&self) -> Complex64 {
        let r = Complex64::new(self.sigma_squared.to_f64(), 0.0).sqrt();
        r * self.branch as f64
    }
}

/// Locations ±√−1·√(λ+σ_η) with order m_η(λ); the origin carries order
/// 2·m_η(−σ_η).
pub fn selberg_zero_predictions(spec: &SpectrumTable, sigma_eta: &Q) -> Vec<ZeroPrediction> {
    let mut out = Vec::new();
    for r in &spec.rows {
        let m = r.net();
        if m == 0 {
            continue;
        }
        let s = &r.lambda + sigma_eta;
        if s.is_zero() {
            out.push(ZeroPrediction { sigma_squared: Q::zero(), branch: 0, order: 2 * m });
        } else {
            for branch in [1i8, -1] {
                out.push(ZeroPrediction { sigma_squared: -s.clone(), branch, order: m });
            }
        }
    }
    out
}

/// r_{η_β} = m(C^{u,ρ}) in the table of η̂_β.
pub fn r_eta_beta(spec_beta: &SpectrumTable, c_u_rho: &Q) -> i64 {
    spec_beta.m_at(c_u_rho)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeadingConstants {
    pub c_rho: Q,
    pub r_rho: i64,
    /// (β, |β|², r_{η_β}) for β ∈ {0} ∪ b*₊.
    pub r: Vec<(Q, Q, i64)>,
}

/// C_ρ = Π_{β>0}(−4|β|²)^{−r_{η_β}}, r_ρ = −2·Σ_{β≥0} r_{η_β}; tables are
/// given as (β, |β|², table of η̂_β).
pub fn leading_constants(tables: &[(Q, Q, SpectrumTable)], c_u_rho: &Q) -> LeadingConstants {
    let mut c_rho = Q::one();
    let mut sum = 0i64;
    let mut r = Vec::new();
    for (beta, nsq, t) in tables {
        let k = r_eta_beta(t, c_u_rho);
        sum += k;
        if beta.signum() > 0 && k != 0 {
            c_rho = c_rho * (Q::int(-4) * nsq.clone()).pow(-k as i32);
        }
        r.push((beta.clone(), nsq.clone(), k));
    }
    LeadingConstants { c_rho, r_rho: -2 * sum, r }
}

/// Table of η̂_β at λ = C^{u,ρ} built from prescribed cohomology dimensions
/// h_i of the flat bundle F_β: degree i contributes (−1)^{i−1}·i copies.
pub fn eta_hat_table_from_cohomology(label: &str, h: &[u64], c_u_rho: &Q) -> SpectrumTable {
    let (mut p, mut m) = (0u64, 0u64);
    for (i, d) in h.iter().enumerate() {
        if i % 2 == 1 {
            p += i as u64 * d;
        } else {
            m += i as u64 * d;
        }
    }
    SpectrumTable { label: label.into(), rows: vec![SpectrumRow { lambda: c_u_rho.clone(), mult_plus: p, mult_minus: m }] }
}

/// T(σ) = Π_i det(σ + table_i)^{(−1)^i·i}, exactly.
pub fn torsion_series(spectra: &[SpectrumTable], sigma: &C) -> Result<C, ZetaError> {
    let mut out = C::one();
    for (i, t) in spectra.iter().enumerate() {
        if i == 0 {
            continue;
        }
        let d = graded_determinant(t, sigma)?;
        let e = i as i64;
        let positive = i % 2 == 0;
        if d.is_zero() {
            if positive {
                return Ok(C::zero());
            }
            return Err(ZetaError::EvaluationAtPole { sigma: format!("{sigma:?}"), order: -e });
        }
        let p = d.pow(e as u32);
        out = if positive { out * p } else { out * p.inv() };
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionLeading {
    /// The nonzero factor at σ = 0, standing in for T(F)².
    pub t_squared: Q,
    /// χ' = Σ(−1)^i·i·dim ker in degree i.
    pub exponent: i64,
    /// χ = Σ(−1)^i·dim ker in degree i.
    pub euler: i64,
}

pub fn torsion_leading_term(spectra: &[SpectrumTable]) -> TorsionLeading {
    let mut t2 = Q::one();
    let mut exponent = 0i64;
    let mut euler = 0i64;
    for (i, t) in spectra.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let w = sign * i as i64;
        let k = t.m_at(&Q::zero());
        exponent += w * k;
        euler += sign * k;
        for r in &t.rows {
            if !r.lambda.is_zero() && w != 0 {
                t2 = t2 * r.lambda.pow((w * r.net()) as i32);
            }
        }
    }
    TorsionLeading { t_squared: t2, exponent, euler }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub label_mismatches: Vec<String>,
    pub factorization_residual: f64,
    pub leading: Option<LeadingConstants>,
    pub torsion: TorsionLeading,
    pub passed: bool,
}

/// Checks the combinatorial skeleton of the torsion/zeta identity: the
/// geodesic side factorizes through the η-family, and every β ∈ {0} ∪ b*₊
/// has a spectrum table labelled "beta=<β>". The spectral side is only
/// reported, never compared numerically.
pub fn torsion_zeta_consistency(
    classes: &[ConjugacyClassRecord],
    fam: &EtaFamily,
    rep_char: &VirtualCharacter,
    eta_tables: &[SpectrumTable],
    degree_tables: &[SpectrumTable],
    tol: f64,
) -> Result<ConsistencyReport, ZetaError> {
    let residual = factorization_check(classes, fam, rep_char)?;
    let mut wanted: Vec<Weight> = vec![fam.model.zero_weight()];
    wanted.extend(fam.positive_betas());
    let mut mismatches = Vec::new();
    let mut rows = Vec::new();
    for beta in &wanted {
        let label = format!("beta={}", beta.b[0]);
        match eta_tables.iter().find(|t| t.label == label) {
            Some(t) => rows.push((beta.b[0].clone(), fam.norm_sq(beta), t.clone())),
            None => mismatches.push(format!("missing table {label}")),
        }
    }
    for t in eta_tables {
        if !wanted.iter().any(|b| t.label == format!("beta={}", b.b[0])) {
            mismatches.push(format!("table {} matches no β of the family", t.label));
        }
    }
    let leading = if mismatches.is_empty() { Some(leading_constants(&rows, &fam.c_u_rho)) } else { None };
    Ok(ConsistencyReport {
        passed: mismatches.is_empty() && residual <= tol,
        label_mismatches: mismatches,
        factorization_residual: residual,
        leading,
        torsion: torsion_leading_term(degree_tables),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn rec(id: &str, ell: f64, a: f64, th: f64, chi: Q, m: u32) -> ConjugacyClassRecord {
        ConjugacyClassRecord { id: id.into(), ell, holonomy: TorusElement::new(vec![a], vec![th]), chi_orb: chi, m_mult: m, n_mult: 1 }
    }

    #[test]
    fn ruelle_basic() {
        let one = VirtualCharacter::from_weight(Weight::zero(1, 1), 2);
        assert!(ruelle_log_series(&[], &one).unwrap().is_empty());
        let s = ruelle_log_series(&[rec("a", 1.0, 1.0, 0.3, Q::one(), 1)], &one).unwrap();
        assert_eq!(s.terms, vec![(1.0, Complex64::new(2.0, 0.0))]);
        let bad = rec("b", -1.0, 1.0, 0.0, Q::one(), 1);
        assert!(matches!(ruelle_log_series(&[bad], &one), Err(ZetaError::InvalidRecord { .. })));
    }

    #[test]
    fn merge_and_additivity() {
        let s = LogZetaSeries::from_terms(vec![(2.0, Complex64::new(1.0, 0.0)), (1.0, Complex64::new(1.0, 0.0)), (2.0 + 1e-12, Complex64::new(0.5, 0.0))]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms[1].1, Complex64::new(1.5, 0.0));
    }

    #[test]
    fn determinants() {
        let empty = SpectrumTable::default();
        assert_eq!(graded_determinant(&empty, &C::int(5)).unwrap(), C::one());
        let t = SpectrumTable::new("x", vec![(Q::one(), 2, 0)]).unwrap();
        assert_eq!(graded_determinant(&t, &C::one()).unwrap(), C::int(4));
        let bal = SpectrumTable::new("y", vec![(q(3, 2), 3, 3), (Q::int(7), 1, 1)]).unwrap();
        assert_eq!(graded_determinant(&bal, &C::new(q(1, 3), q(2, 5))).unwrap(), C::one());
        let pole = SpectrumTable::new("z", vec![(Q::int(2), 0, 1)]).unwrap();
        assert_eq!(graded_determinant(&pole, &C::int(-2)), Err(ZetaError::EvaluationAtPole { sigma: format!("{:?}", C::int(-2)), order: -1 }));
        assert_eq!(order_at(&pole, &Q::int(-2)), -1);
    }

    #[test]
    fn zero_predictions() {
        let s = q(-1, 3);
        let t = SpectrumTable::new("e", vec![(q(1, 3), 1, 0)]).unwrap();
        assert_eq!(selberg_zero_predictions(&t, &s), vec![ZeroPrediction { sigma_squared: Q::zero(), branch: 0, order: 2 }]);
        let t = SpectrumTable::new("e", vec![(q(4, 3), 1, 0)]).unwrap();
        let z = selberg_zero_predictions(&t, &s);
        assert_eq!(z.len(), 2);
        assert!((z[0].location() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(selberg_zero_predictions(&SpectrumTable::default(), &s).is_empty());
    }

    #[test]
    fn leading_constants_rules() {
        let c = Q::int(-3);
        let empty = SpectrumTable::new("beta=0", vec![(Q::int(5), 1, 0)]).unwrap();
        let lc = leading_constants(&[(Q::zero(), Q::zero(), empty.clone()), (Q::one(), Q::int(2), empty)], &c);
        assert_eq!((lc.c_rho.clone(), lc.r_rho), (Q::one(), 0));
        let one = SpectrumTable::new("beta=1", vec![(c.clone(), 1, 0)]).unwrap();
        let lc = leading_constants(&[(Q::one(), q(1, 4), one)], &c);
        assert_eq!((lc.c_rho, lc.r_rho), (Q::int(-1), -2));
    }

    #[test]
    fn torsion_rules() {
        let k1 = SpectrumTable::new("1", vec![(Q::zero(), 1, 0), (Q::int(3), 1, 0)]).unwrap();
        let d0 = SpectrumTable::new("0", vec![(Q::int(2), 1, 0)]).unwrap();
        let lt = torsion_leading_term(&[d0.clone(), k1]);
        assert_eq!((lt.exponent, lt.t_squared), (-1, Q::int(3).pow(-1)));
        let d2 = SpectrumTable::new("2", vec![(Q::int(5), 1, 0)]).unwrap();
        let lt = torsion_leading_term(&[d0, SpectrumTable::new("1", vec![(Q::int(5), 2, 0)]).unwrap(), d2]);
        assert_eq!((lt.exponent, lt.t_squared), (0, Q::one()));
    }
}
