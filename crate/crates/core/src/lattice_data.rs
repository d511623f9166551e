//! Conjugacy-class files, a seeded synthetic generator, and word enumeration
//! for explicit 2×2 complex lattices (demo quality).
//!
//! File format: a JSON document `{header, records}`. Rationals are "p/q"
//! strings, angles are radians. Field order is fixed by the struct layout,
//! so save∘load is byte-stable.

use crate::exact::{C, Q};
use crate::lie_characters::TorusElement;
use crate::matrix::CMat;
use crate::zeta_engine::{ConjugacyClassRecord, ZetaError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;
pub const FRIED_PRIMITIVE: &str = "fried-primitive";
/// Upper bound on the number of reduced words visited by `enumerate_words`.
pub const WORD_CAP: usize = 2_000_000;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum LatticeError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },
    #[error("record {id}: {reason}")]
    InvariantViolation { id: String, reason: String },
    #[error("duplicate record id {0}")]
    DuplicateId(String),
    #[error("generator {0} is not invertible")]
    NonInvertibleGenerator(usize),
    #[error("generator {0} does not have determinant 1")]
    NotUnimodular(usize),
    #[error("generator {0} is not a 2×2 matrix")]
    BadGenerator(usize),
    #[error("more than {0} words to enumerate")]
    Overflow(usize),
    #[error("i/o: {0}")]
    Io(String),
}

/// How `ell` relates to the holonomy: `B` means ℓ = |a| for the form B,
/// `Alpha0` means ℓ = α₀(a) (the hyperbolic length for sl2c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    B,
    Alpha0,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassHeader {
    pub model: String,
    pub schema_version: u32,
    pub length_unit: LengthUnit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disclaimer: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub header: ClassHeader,
    pub records: Vec<ConjugacyClassRecord>,
}

impl ClassFile {
    pub fn new(model: &str, unit: LengthUnit) -> ClassFile {
        ClassFile {
            header: ClassHeader { model: model.into(), schema_version: SCHEMA_VERSION, length_unit: unit, convention: None, disclaimer: None },
            records: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.header.schema_version != SCHEMA_VERSION {
            return Err(LatticeError::SchemaVersionMismatch { found: self.header.schema_version, expected: SCHEMA_VERSION });
        }
        let mut ids = BTreeSet::new();
        for r in &self.records {
            r.validate().map_err(|e| match e {
                ZetaError::InvalidRecord { id, reason } => LatticeError::InvariantViolation { id, reason },
                other => LatticeError::InvariantViolation { id: r.id.clone(), reason: other.to_string() },
            })?;
            if !ids.insert(r.id.clone()) {
                return Err(LatticeError::DuplicateId(r.id.clone()));
            }
        }
        Ok(())
    }

    /// Checks ℓ against the holonomy, given |a₀| for the model.
    pub fn check_lengths(&self, a0_norm: f64, tol: f64) -> Vec<String> {
        let mut bad = Vec::new();
        for r in &self.records {
            let a = r.holonomy.a_part[0];
            let expect = match self.header.length_unit {
                LengthUnit::B => a * a0_norm,
                LengthUnit::Alpha0 => a,
            };
            if (expect - r.ell).abs() > tol * (1.0 + r.ell) {
                bad.push(format!("{}: ell {} but holonomy gives {}", r.id, r.ell, expect));
            }
        }
        bad
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("class file serialization");
        s.push('\n');
        s
    }

    pub fn from_str_strict(s: &str) -> Result<ClassFile, LatticeError> {
        let cf = ClassFile::from_str_unvalidated(s)?;
        cf.validate()?;
        Ok(cf)
    }

    /// Parses and checks the schema version only, leaving per-record
    /// invariants to the caller.
    pub fn from_str_unvalidated(s: &str) -> Result<ClassFile, LatticeError> {
        let cf: ClassFile = serde_json::from_str(s).map_err(|e| LatticeError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if cf.header.schema_version != SCHEMA_VERSION {
            return Err(LatticeError::SchemaVersionMismatch { found: cf.header.schema_version, expected: SCHEMA_VERSION });
        }
        Ok(cf)
    }
}

pub fn load_classes(path: &Path) -> Result<ClassFile, LatticeError> {
    let s = std::fs::read_to_string(path).map_err(|e| LatticeError::Io(format!("{}: {e}", path.display())))?;
    ClassFile::from_str_strict(&s)
}

pub fn save_classes(cf: &ClassFile, path: &Path) -> Result<(), LatticeError> {
    cf.validate()?;
    std::fs::write(path, cf.to_canonical_string()).map_err(|e| LatticeError::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AngleDistribution {
    /// Uniform in [−π, π).
    Uniform,
    /// All angles zero.
    Zero,
    /// Multiples of 2π/n.
    Discrete(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub seed: u64,
    pub count: usize,
    /// Range of the a-part (open at 0).
    pub a_range: (f64, f64),
    pub angles: AngleDistribution,
    /// Number of torus angles per holonomy.
    pub nt: usize,
    pub model: String,
    pub unit: LengthUnit,
    /// |a₀| for the model, used when `unit` is `B`.
    pub a0_norm: f64,
}

impl SynthSpec {
    pub fn sl2c(seed: u64, count: usize) -> SynthSpec {
        SynthSpec {
            seed,
            count,
            a_range: (0.3, 4.0),
            angles: AngleDistribution::Uniform,
            nt: 1,
            model: "sl2c".into(),
            unit: LengthUnit::B,
            a0_norm: 0.5f64.sqrt(),
        }
    }
}

/// Deterministic synthetic class list; χ_orb is drawn from {0, 1, 1/2, 1/3}
/// and m from {1, 2, 3}.
pub fn synthesize_classes(spec: &SynthSpec) -> ClassFile {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let chis = [Q::zero(), Q::one(), Q::new(1, 2), Q::new(1, 3)];
    let (lo, hi) = spec.a_range;
    let lo = lo.max(1e-6);
    let mut cf = ClassFile::new(&spec.model, spec.unit);
    cf.header.convention = Some("synthetic".into());
    for i in 0..spec.count {
        let a: f64 = rng.gen_range(lo..hi.max(lo * (1.0 + 1e-9)));
        let t_angles = (0..spec.nt)
            .map(|_| match spec.angles {
                AngleDistribution::Uniform => rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                AngleDistribution::Zero => 0.0,
                AngleDistribution::Discrete(n) => {
                    let k = rng.gen_range(0..n.max(1));
                    2.0 * std::f64::consts::PI * k as f64 / n.max(1) as f64
                }
            })
            .collect();
        let ell = match spec.unit {
            LengthUnit::B => a * spec.a0_norm,
            LengthUnit::Alpha0 => a,
        };
        cf.records.push(ConjugacyClassRecord {
            id: format!("c{i:04}"),
            ell,
            holonomy: TorusElement::new(vec![a], t_angles),
            chi_orb: chis[rng.gen_range(0..chis.len())].clone(),
            m_mult: rng.gen_range(1..=3),
            n_mult: 1,
        });
    }
    cf
}

fn det2(m: &CMat) -> C {
    &(&m[(0, 0)] * &m[(1, 1)]) - &(&m[(0, 1)] * &m[(1, 0)])
}

fn inverse_sl2(m: &CMat) -> CMat {
    CMat::from_rows(vec![vec![m[(1, 1)].clone(), -&m[(0, 1)]], vec![-&m[(1, 0)], m[(0, 0)].clone()]])
}

/// Elliptic, parabolic or central: tr real with |tr| ≤ 2.
pub fn is_degenerate_trace(t: &C) -> bool {
    t.im.is_zero() && t.re.abs() <= Q::int(2)
}

/// Conjugacy key in PSL₂(C): tr² identifies γ, −γ and γ⁻¹.
fn trace_key(t: &C) -> C {
    t * t
}

/// Trace of γ^k from tr γ: t_k = t·t_{k−1} − t_{k−2}.
pub fn trace_of_power(t: &C, k: usize) -> C {
    let (mut prev, mut cur) = (C::int(2), t.clone());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &(t * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenvalue of modulus > 1 of an SL₂ element with trace t.
pub fn expanding_eigenvalue(t: &C) -> Complex64 {
    let t = t.to_c64();
    let d = (t * t - 4.0).sqrt();
    let l = (t + d) / 2.0;
    if l.norm() >= 1.0 {
        l
    } else {
        (t - d) / 2.0
    }
}

/// A loxodromic word with its exact trace.
#[derive(Clone, Debug)]
pub struct WordClass {
    pub word: Vec<usize>,
    pub matrix: CMat,
    pub trace: C,
}

/// All reduced words of length 1..=max_len in the generators and their
/// inverses whose trace is loxodromic. Letters 2i and 2i+1 are g_i, g_i⁻¹.
pub fn loxodromic_words(generators: &[CMat], max_len: usize) -> Result<Vec<WordClass>, LatticeError> {
    let mut letters = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(LatticeError::BadGenerator(i));
        }
        let d = det2(g);
        if d.is_zero() {
            return Err(LatticeError::NonInvertibleGenerator(i));
        }
        if d != C::one() {
            return Err(LatticeError::NotUnimodular(i));
        }
        letters.push(g.clone());
        letters.push(inverse_sl2(g));
    }
    let n = letters.len();
    if n > 0 {
        let mut total = 0usize;
        let mut level = n;
        for _ in 0..max_len {
            total = total.saturating_add(level);
            level = level.saturating_mul(n.saturating_sub(1).max(1));
        }
        if total > WORD_CAP {
            return Err(LatticeError::Overflow(WORD_CAP));
        }
    }
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<usize>, CMat)> = vec![(Vec::new(), CMat::identity(2))];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for (l, g) in letters.iter().enumerate() {
                if let Some(&last) = w.last() {
                    if last ^ 1 == l {
                        continue;
                    }
                }
                let mut w2 = w.clone();
                w2.push(l);
                next.push((w2, m.mul(g)));
            }
        }
        for (w, m) in &next {
            let t = m.trace();
            if !is_degenerate_trace(&t) {
                out.push(WordClass { word: w.clone(), matrix: m.clone(), trace: t });
            }
        }
        frontier = next;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub file: ClassFile,
    /// Exact trace of a representative per record, in record order.
    pub traces: Vec<C>,
    /// Power k of the primitive class per record.
    pub powers: Vec<usize>,
}

/// Enumerate classes of loxodromic words up to `max_len`, deduplicated by
/// the PSL₂ trace invariant. Records are sorted by length; ℓ = 2·log|λ| and
/// the torus angle is arg λ (so the rotation angle is 2·arg λ). χ_orb = 1
/// and m = k for the k-th power of a primitive class.
pub fn enumerate_words(generators: &[CMat], max_len: usize) -> Result<Enumeration, LatticeError> {
    let words = loxodromic_words(generators, max_len)?;
    let mut by_key: BTreeMap<String, C> = BTreeMap::new();
    for w in &words {
        let k = trace_key(&w.trace);
        by_key.entry(format!("{k:?}")).or_insert_with(|| w.trace.clone());
    }
    let mut classes: Vec<(f64, C)> = by_key
        .into_values()
        .map(|t| (2.0 * expanding_eigenvalue(&t).norm().ln(), t))
        .collect();
    classes.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| format!("{:?}", a.1).cmp(&format!("{:?}", b.1))));
    let mut primitives: Vec<(f64, C)> = Vec::new();
    let mut cf = ClassFile::new("sl2c", LengthUnit::Alpha0);
    cf.header.convention = Some(format!("convention: {FRIED_PRIMITIVE}"));
    cf.header.disclaimer = Some(format!("words of length at most {max_len} only; longer classes and roots are missing"));
    let mut traces = Vec::new();
    let mut powers = Vec::new();
    for (i, (ell, t)) in classes.into_iter().enumerate() {
        let key = trace_key(&t);
        let mut power = 1usize;
        for (pl, pt) in &primitives {
            let k = (ell / pl).round() as usize;
            if k >= 2 && (ell - k as f64 * pl).abs() < 1e-9 * ell.max(1.0) && trace_key(&trace_of_power(pt, k)) == key {
                power = k;
                break;
            }
        }
        if power == 1 {
            primitives.push((ell, t.clone()));
        }
        let lam = expanding_eigenvalue(&t);
        cf.records.push(ConjugacyClassRecord {
            id: format!("w{i:04}"),
            ell,
            holonomy: TorusElement::new(vec![ell], vec![lam.arg()]),
            chi_orb: Q::one(),
            m_mult: power as u32,
            n_mult: 1,
        });
        traces.push(t);
        powers.push(power);
    }
    Ok(Enumeration { file: cf, traces, powers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn synth_is_deterministic() {
        let a = synthesize_classes(&SynthSpec::sl2c(7, 20));
        let b = synthesize_classes(&SynthSpec::sl2c(7, 20));
        assert_eq!(a, b);
        assert_ne!(a, synthesize_classes(&SynthSpec::sl2c(8, 20)));
        assert!(synthesize_classes(&SynthSpec::sl2c(7, 0)).records.is_empty());
        assert!(a.validate().is_ok());
        assert!(a.check_lengths(0.5f64.sqrt(), 1e-12).is_empty());
    }

    #[test]
    fn round_trip_and_errors() {
        let a = synthesize_classes(&SynthSpec::sl2c(3, 50));
        let s = a.to_canonical_string();
        let b = ClassFile::from_str_strict(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(s, b.to_canonical_string());
        let bad = s.replacen("\"m_mult\": ", "\"m_mult\": \"x\", \"y\": ", 1);
        assert!(matches!(ClassFile::from_str_strict(&bad), Err(LatticeError::Parse { .. })));
        let v2 = s.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
        assert!(matches!(ClassFile::from_str_strict(&v2), Err(LatticeError::SchemaVersionMismatch { found: 2, .. })));
        let empty = ClassFile::new("sl2c", LengthUnit::B);
        assert!(ClassFile::from_str_strict(&empty.to_canonical_string()).unwrap().records.is_empty());
    }

    #[test]
    fn powers_of_diagonal() {
        let g = CMat::diag(&[C::int(2), C::real(q(1, 2))]);
        let e = enumerate_words(&[g], 5).unwrap();
        assert_eq!(e.file.records.len(), 5);
        for (k, r) in e.file.records.iter().enumerate() {
            let k = k + 1;
            assert!((r.ell - 2.0 * k as f64 * 2f64.ln()).abs() < 1e-12);
            assert_eq!(r.m_mult as usize, k);
            assert_eq!(r.holonomy.t_angles, vec![0.0]);
        }
        assert!(enumerate_words(&[CMat::identity(2)], 4).unwrap().file.records.is_empty());
        assert!(matches!(enumerate_words(&[CMat::zeros(2, 2)], 2), Err(LatticeError::NonInvertibleGenerator(0))));
    }
}
