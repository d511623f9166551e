//! Exact models of real reductive Lie algebras with a Cartan involution, a
//! fundamental Cartan subalgebra h = b ⊕ t, and the splitting of the
//! centralizer complement z⊥(b) = n ⊕ n̄.
//!
//! Vectors of g are coordinate columns in the model basis. Complex columns
//! are elements of g_C = g ⊗ C, with the complex unit acting on
//! coordinates; it is unrelated to any basis element that happens to be
//! labelled with an `i`.

use crate::exact::{C, Q};
use crate::lie_characters::{CharacterError, TorusElement, VirtualCharacter, Weight, WeightForm, WeylGroupData};
use crate::matrix::{
    column_basis, intersect, inverse, is_positive_definite, joint_eigenspaces, nullspace, rank, rational_eigenspaces,
    restrict, solve, span_contains, span_eq, CMat, LinalgError,
};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("model validation failed: {0:?}")]
    ValidationFailed(Vec<String>),
    #[error("t is not a maximal torus: {0}")]
    NotMaximalTorus(String),
    #[error("ad(f_b) on z⊥(b) is not semisimple with nonzero real eigenvalues: {0}")]
    NonSemisimpleAction(String),
    #[error("operation requires fundamental rank 1, model has {0}")]
    NotRankOne(usize),
    #[error("operation requires fundamental rank ≥ 1")]
    ZeroRank,
    #[error("elliptic element: a-part vanishes")]
    EllipticClass,
    #[error("malformed model data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// Raw model data before validation.
///
/// `ad[i]` is the matrix of ad(e_i): column j holds the coordinates of
/// [e_i, e_j]. `t_basis` and `b_basis` are coordinate columns; `f_b` and
/// `t_reg` are coordinates in the b and t bases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelData {
    pub name: String,
    pub labels: Vec<String>,
    pub ad: Vec<CMat>,
    pub theta: CMat,
    pub form: CMat,
    pub t_basis: CMat,
    pub b_basis: CMat,
    pub f_b: Vec<Q>,
    pub t_reg: Vec<Q>,
    pub rank_c: usize,
    /// Complex matrices of a faithful realization, one per basis element.
    pub defining: Option<Vec<CMat>>,
    pub form_convention: String,
}

impl ModelData {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn ad_of(&self, v: &[C]) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out.axpy(x, &self.ad[i]);
            }
        }
        out
    }

    pub fn bracket(&self, x: &[C], y: &[C]) -> Vec<C> {
        self.ad_of(x).mul_vec(y)
    }

    /// Gram matrix of B on the columns of `basis`.
    pub fn gram(&self, basis: &CMat) -> CMat {
        basis.transpose().mul(&self.form).mul(basis)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization")
    }

    pub fn from_json(s: &str) -> Result<ModelData, ModelError> {
        serde_json::from_str(s).map_err(|e| ModelError::Malformed(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.to_string(), passed, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}", self.model)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// A root of (h_C, g_C) with its root space.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSpace {
    pub root: Weight,
    pub space: CMat,
}

/// A validated model together with all derived subspaces.
#[derive(Clone, Debug)]
pub struct GroupModel {
    pub data: ModelData,
    pub p: CMat,
    pub k: CMat,
    pub t: CMat,
    pub b: CMat,
    pub m: CMat,
    pub p_m: CMat,
    pub k_m: CMat,
    pub zperp: CMat,
    pub p_perp: CMat,
    pub k_perp: CMat,
    pub n: CMat,
    pub nbar: CMat,
    pub delta: usize,
    pub ell: usize,
    pub center_compact: bool,
    pub form: WeightForm,
    pub roots: Vec<RootSpace>,
    pub weyl_tk: WeylGroupData,
}

/// Bases of the compact form u = √−1·p ⊕ k and its pieces, with the
/// trace constant (1/8)·Tr[C^{u(b),u⊥(b)}].
#[derive(Clone, Debug)]
pub struct CompactFormData {
    pub u: CMat,
    pub u_b: CMat,
    pub u_perp: CMat,
    pub u_m: CMat,
    pub trace_constant: Q,
}

#[derive(Clone, Debug)]
pub struct ZbSplit {
    pub m: CMat,
    pub n: CMat,
    pub nbar: CMat,
    pub alpha0: Option<Weight>,
    pub ell: usize,
}

fn ci(n: i64) -> C {
    C::int(n)
}

fn unit(n: usize, i: usize, s: C) -> Vec<C> {
    let mut v = vec![C::zero(); n];
    v[i] = s;
    v
}

fn flatten(m: &CMat) -> Vec<C> {
    let mut v: Vec<C> = m.entries().iter().map(|x| C::real(x.re.clone())).collect();
    v.extend(m.entries().iter().map(|x| C::real(x.im.clone())));
    v
}

/// Builds model data from a real Lie algebra of complex matrices closed
/// under X ↦ −X^†, with θ(X) = −X^† and B(X,Y) = Re tr(XY).
pub fn model_from_matrices(
    name: &str,
    labels: Vec<String>,
    mats: Vec<CMat>,
    t_basis: CMat,
    b_basis: CMat,
    f_b: Vec<Q>,
    t_reg: Vec<Q>,
    rank_c: usize,
) -> Result<ModelData, ModelError> {
    let n = mats.len();
    let flat: Vec<Vec<C>> = mats.iter().map(flatten).collect();
    let big = CMat::from_cols(&flat, flat[0].len());
    if rank(&big) != n {
        return Err(ModelError::Malformed("basis matrices are dependent".into()));
    }
    let coords = |m: &CMat| -> Result<Vec<C>, ModelError> {
        let rhs = CMat::column_vector(&flatten(m));
        let x = solve(&big, &rhs).ok_or_else(|| ModelError::Malformed("not closed".into()))?;
        Ok(x.col(0))
    };
    let mut ad = Vec::with_capacity(n);
    for i in 0..n {
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(coords(&mats[i].commutator(&mats[j]))?);
        }
        ad.push(CMat::from_cols(&cols, n));
    }
    let theta_cols: Result<Vec<Vec<C>>, ModelError> = mats.iter().map(|m| coords(&m.adjoint().neg())).collect();
    let theta = CMat::from_cols(&theta_cols?, n);
    let form = CMat::from_fn(n, n, |i, j| C::real(mats[i].mul(&mats[j]).trace().re));
    Ok(ModelData {
        name: name.to_string(),
        labels,
        ad,
        theta,
        form,
        t_basis,
        b_basis,
        f_b,
        t_reg,
        rank_c,
        defining: Some(mats),
        form_convention: "B(X,Y) = Re tr(XY) in the defining realization".into(),
    })
}

fn embed(m: &CMat, offset: usize, size: usize) -> CMat {
    let mut out = CMat::zeros(size, size);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out[(offset + r, offset + c)] = m[(r, c)].clone();
        }
    }
    out
}

fn h_mat() -> CMat {
    CMat::from_ints(&[&[1, 0], &[0, -1]], None)
}
fn e_mat() -> CMat {
    CMat::from_ints(&[&[0, 1], &[0, 0]], None)
}
fn f_mat() -> CMat {
    CMat::from_ints(&[&[0, 0], &[1, 0]], None)
}

/// sl(2,C) as a real algebra: H, iH, E, iE, F, iF.
fn sl2c_block(suffix: &str) -> (Vec<String>, Vec<CMat>) {
    let base = [("H", h_mat()), ("E", e_mat()), ("F", f_mat())];
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for (l, m) in base {
        labels.push(format!("{l}{suffix}"));
        mats.push(m.clone());
        labels.push(format!("i{l}{suffix}"));
        mats.push(m.mul_i());
    }
    (labels, mats)
}

/// su(2): iH, E−F, i(E+F).
fn su2_block(suffix: &str) -> (Vec<String>, Vec<CMat>) {
    let labels = vec![format!("iH{suffix}"), format!("(E-F){suffix}"), format!("i(E+F){suffix}")];
    let mats = vec![h_mat().mul_i(), e_mat().sub(&f_mat()), e_mat().add(&f_mat()).mul_i()];
    (labels, mats)
}

fn cols_from(n: usize, entries: &[(usize, C)]) -> CMat {
    let cols: Vec<Vec<C>> = entries.iter().map(|(i, s)| unit(n, *i, s.clone())).collect();
    CMat::from_cols(&cols, n)
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::int(x)).collect()
}

pub const PRESETS: [&str; 7] = ["sl2c", "sl2r", "su2", "sl2c_cubed", "sl2c_x_su2", "rline_x_su2", "rline"];

/// Raw data of a named preset.
pub fn preset_data(name: &str) -> Result<ModelData, ModelError> {
    let half = C::real(Q::new(1, 2));
    match name {
        "sl2c" => {
            let (labels, mats) = sl2c_block("");
            let t = cols_from(6, &[(1, ci(1))]);
            let b = cols_from(6, &[(0, half)]);
            model_from_matrices(name, labels, mats, t, b, qs(&[1]), qs(&[1]), 2)
        }
        "sl2r" => {
            let labels = vec!["H".into(), "E".into(), "F".into()];
            let mats = vec![h_mat(), e_mat(), f_mat()];
            let t = CMat::from_cols(&[vec![ci(0), ci(1), ci(-1)]], 3);
            model_from_matrices(name, labels, mats, t, CMat::zeros(3, 0), vec![], qs(&[1]), 1)
        }
        "su2" => {
            let (labels, mats) = su2_block("");
            let t = cols_from(3, &[(0, ci(1))]);
            model_from_matrices(name, labels, mats, t, CMat::zeros(3, 0), vec![], qs(&[1]), 1)
        }
        "sl2c_cubed" => {
            let mut labels = Vec::new();
            let mut mats = Vec::new();
            for k in 0..3 {
                let (l, ms) = sl2c_block(&format!("_{}", k + 1));
                labels.extend(l);
                mats.extend(ms.iter().map(|m| embed(m, 2 * k, 6)));
            }
            let t = cols_from(18, &[(1, ci(1)), (7, ci(1)), (13, ci(1))]);
            let b = cols_from(18, &[(0, half.clone()), (6, half.clone()), (12, half)]);
            model_from_matrices(name, labels, mats, t, b, qs(&[1, 1, 1]), qs(&[1, 1, 1]), 6)
        }
        "sl2c_x_su2" => {
            let (mut labels, m1) = sl2c_block("");
            let (l2, m2) = su2_block("'");
            labels.extend(l2);
            let mut mats: Vec<CMat> = m1.iter().map(|m| embed(m, 0, 4)).collect();
            mats.extend(m2.iter().map(|m| embed(m, 2, 4)));
            let t = cols_from(9, &[(1, ci(1)), (6, ci(1))]);
            let b = cols_from(9, &[(0, half)]);
            model_from_matrices(name, labels, mats, t, b, qs(&[1]), qs(&[1, 1]), 3)
        }
        "rline_x_su2" => {
            let mut labels = vec!["X".to_string()];
            let mut mats = vec![CMat::diag(&[ci(1), ci(0), ci(0)])];
            let (l2, m2) = su2_block("");
            labels.extend(l2);
            mats.extend(m2.iter().map(|m| embed(m, 1, 3)));
            let t = cols_from(4, &[(1, ci(1))]);
            let b = cols_from(4, &[(0, ci(1))]);
            model_from_matrices(name, labels, mats, t, b, qs(&[1]), qs(&[1]), 2)
        }
        "rline" => {
            let mats = vec![CMat::diag(&[ci(1)])];
            let b = cols_from(1, &[(0, ci(1))]);
            model_from_matrices(name, vec!["X".into()], mats, CMat::zeros(1, 0), b, qs(&[1]), vec![], 1)
        }
        _ => Err(ModelError::UnknownPreset(name.to_string())),
    }
}

pub fn build_preset(name: &str) -> Result<GroupModel, ModelError> {
    GroupModel::new(preset_data(name)?)
}

/// Deliberate corruptions used to exercise the validator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    StructureConstant,
    NegateForm,
    PerturbTheta,
    AsymmetricForm,
    EmptyTorus,
    NonInvariantForm,
}

impl Corruption {
    pub const ALL: [Corruption; 6] = [
        Corruption::StructureConstant,
        Corruption::NegateForm,
        Corruption::PerturbTheta,
        Corruption::AsymmetricForm,
        Corruption::EmptyTorus,
        Corruption::NonInvariantForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Corruption::StructureConstant => "structure-constant",
            Corruption::NegateForm => "negate-form",
            Corruption::PerturbTheta => "perturb-theta",
            Corruption::AsymmetricForm => "asymmetric-form",
            Corruption::EmptyTorus => "empty-torus",
            Corruption::NonInvariantForm => "non-invariant-form",
        }
    }

    pub fn from_name(s: &str) -> Option<Corruption> {
        Corruption::ALL.into_iter().find(|c| c.name() == s)
    }
}

pub fn corrupt(data: &ModelData, how: Corruption) -> ModelData {
    let mut d = data.clone();
    let n = d.dim();
    match how {
        Corruption::StructureConstant => {
            // keeps antisymmetry so only Jacobi-type checks can notice
            let k = n - 1;
            let v = &d.ad[0][(k, 1)] + &C::one();
            d.ad[0][(k, 1)] = v;
            let w = &d.ad[1][(k, 0)] - &C::one();
            d.ad[1][(k, 0)] = w;
        }
        Corruption::NegateForm => d.form = d.form.neg(),
        Corruption::PerturbTheta => {
            let v = &d.theta[(0, 0)] + &C::one();
            d.theta[(0, 0)] = v;
        }
        Corruption::AsymmetricForm => {
            let v = &d.form[(0, n - 1)] + &C::one();
            d.form[(0, n - 1)] = v;
        }
        Corruption::EmptyTorus => d.t_basis = CMat::zeros(n, 0),
        Corruption::NonInvariantForm => {
            // rescaling B on a central direction stays invariant, so pick a
            // basis vector that does not commute with everything
            let i = (0..n)
                .find(|&i| d.ad[i].max_abs() > 0.0 && !d.form[(i, i)].is_zero())
                .unwrap_or(0);
            let v = &d.form[(i, i)] * &C::int(2);
            d.form[(i, i)] = v;
        }
    }
    d
}

/// Operators whose joint eigenvalues give h-weights: ρ(b_j) followed by
/// −√−1·ρ(T_j), from matrices of ρ on the model basis.
pub fn h_operators(data: &ModelData, mats: &[CMat]) -> Vec<CMat> {
    let combine = |v: Vec<C>| -> CMat {
        let dim = mats[0].rows();
        let mut out = CMat::zeros(dim, dim);
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out.axpy(x, &mats[i]);
            }
        }
        out
    };
    let mut ops = Vec::new();
    for j in 0..data.b_basis.cols() {
        ops.push(combine(data.b_basis.col(j)));
    }
    for j in 0..data.t_basis.cols() {
        ops.push(combine(data.t_basis.col(j)).mul_i().neg());
    }
    ops
}

/// Joint h-weights of ρ on the span of `basis`.
pub fn weights_on(data: &ModelData, ops: &[CMat], basis: &CMat) -> Result<Vec<(Weight, CMat)>, LinalgError> {
    let nb = data.b_basis.cols();
    let parts = joint_eigenspaces(ops, basis)?;
    Ok(parts.into_iter().map(|(v, sp)| (Weight::from_coords(nb, &v), sp)).collect())
}

/// Joint torus weights (b-part zero) from the operators −√−1·ρ(T_j).
pub fn t_weights_on(data: &ModelData, t_ops: &[CMat], basis: &CMat) -> Result<Vec<(Weight, CMat)>, LinalgError> {
    let nb = data.b_basis.cols();
    let parts = joint_eigenspaces(t_ops, basis)?;
    Ok(parts.into_iter().map(|(v, sp)| (Weight::new(vec![Q::zero(); nb], v), sp)).collect())
}

pub fn character_of(parts: &[(Weight, CMat)]) -> VirtualCharacter {
    let mut chi = VirtualCharacter::new();
    for (w, sp) in parts {
        chi.insert(w.clone(), sp.cols() as i64);
    }
    chi
}

fn check_bool(rep: &mut ValidationReport, name: &str, ok: bool, fail: &str) -> bool {
    rep.push(name, ok, if ok { String::new() } else { fail.to_string() });
    ok
}

/// Intermediate structures computed during validation.
struct Derived {
    p: CMat,
    k: CMat,
    b: CMat,
    m: CMat,
    p_m: CMat,
    k_m: CMat,
    zperp: CMat,
    p_perp: CMat,
    k_perp: CMat,
    n: CMat,
    nbar: CMat,
    center_compact: bool,
    form: WeightForm,
    roots: Vec<RootSpace>,
    weyl: Option<WeylGroupData>,
}

fn orth_complement(form: &CMat, inside: &CMat, of: &CMat) -> CMat {
    // {x ∈ span(inside) : B(x, of) = 0}
    if of.cols() == 0 {
        return inside.clone();
    }
    let conds = of.transpose().mul(form).mul(inside);
    inside.mul(&nullspace(&conds))
}

fn derive(data: &ModelData, rep: &mut ValidationReport) -> Option<Derived> {
    let n = data.dim();
    let id = CMat::identity(n);
    let ads = &data.ad;

    let mut anti = true;
    for i in 0..n {
        for j in 0..n {
            if ads[i].col(j) != ads[j].col(i).iter().map(|x| -x.clone()).collect::<Vec<_>>() {
                anti = false;
            }
        }
    }
    check_bool(rep, "antisymmetry", anti, "[e_i,e_j] ≠ −[e_j,e_i]");

    let mut jac = true;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let lhs = ads[i].commutator(&ads[j]);
            if lhs != data.ad_of(&ads[i].col(j)) {
                jac = false;
                break 'outer;
            }
        }
    }
    check_bool(rep, "jacobi", jac, "ad([x,y]) ≠ [ad x, ad y]");

    let th = &data.theta;
    check_bool(rep, "theta_involution", th.mul(th) == id, "θ² ≠ 1");
    let mut aut = true;
    for i in 0..n {
        if th.mul(&ads[i]) != data.ad_of(&th.col(i)).mul(th) {
            aut = false;
            break;
        }
    }
    check_bool(rep, "theta_automorphism", aut, "θ[x,y] ≠ [θx,θy]");

    let f = &data.form;
    check_bool(rep, "b_symmetric", *f == f.transpose(), "B not symmetric");
    let inv = ads.iter().all(|a| a.transpose().mul(f).add(&f.mul(a)).is_zero());
    check_bool(rep, "b_ad_invariant", inv, "B([x,y],z) + B(y,[x,z]) ≠ 0");
    check_bool(rep, "b_theta_invariant", th.transpose().mul(f).mul(th) == *f, "B(θx,θy) ≠ B(x,y)");

    let p = nullspace(&th.add(&id));
    let k = nullspace(&th.sub(&id));
    let dims_ok = p.cols() + k.cols() == n;
    check_bool(rep, "dims_p_k", dims_ok, "θ not diagonalizable with eigenvalues ±1");
    let gp = data.gram(&p);
    let gk = data.gram(&k);
    check_bool(rep, "b_positive_on_p", p.cols() == 0 || is_positive_definite(&gp), "B not positive definite on p");
    check_bool(rep, "b_negative_on_k", k.cols() == 0 || is_positive_definite(&gk.neg()), "B not negative definite on k");

    let in_span = |target: &CMat, x: &CMat, y: &CMat| -> bool {
        (0..x.cols()).all(|i| {
            let ax = data.ad_of(&x.col(i));
            (0..y.cols()).all(|j| span_contains(target, &CMat::column_vector(&ax.mul_vec(&y.col(j)))))
        })
    };
    let cartan = in_span(&k, &p, &p) && in_span(&p, &k, &p) && in_span(&k, &k, &k);
    check_bool(rep, "cartan_brackets", cartan, "[p,p] ⊄ k, [k,p] ⊄ p or [k,k] ⊄ k");

    let t = data.t_basis.clone();
    let zero_t = CMat::zeros(n, 0);
    let t_in_k = span_contains(&k, &t) && in_span(&zero_t, &t, &t);
    check_bool(
        rep,
        "t_abelian_in_k",
        t_in_k && (t.cols() > 0 || k.cols() == 0),
        "t is not an abelian subalgebra of k (or is empty while k ≠ 0)",
    );
    let cent_k = centralizer(data, &t, &k);
    check_bool(rep, "t_maximal", span_eq(&cent_k, &t) && (t.cols() > 0 || k.cols() == 0), "centralizer of t in k is larger than t");

    let b_kernel = centralizer(data, &t, &p);
    let b = data.b_basis.clone();
    check_bool(rep, "b_kernel", span_eq(&b_kernel, &b) && b.cols() == rank(&b), "b basis does not span {a ∈ p : [a,t] = 0}");
    let delta = b.cols();
    check_bool(rep, "parity", (p.cols() + delta) % 2 == 0, "dim p and δ have different parity");
    let f_ok = data.f_b.len() == delta && data.t_reg.len() == t.cols();
    check_bool(rep, "metadata", f_ok, "f_b or t_reg has the wrong length");

    if !rep.all_passed() {
        return None;
    }

    let h = CMat::hstack(&[&b, &t]);
    let h_abelian = in_span(&zero_t, &h, &h);
    let ops = h_operators(data, &data.ad);
    let weights = match weights_on(data, &ops, &id) {
        Ok(w) => w,
        Err(e) => {
            check_bool(rep, "h_cartan", false, &format!("ad(h) not diagonalizable: {e}"));
            return None;
        }
    };
    let zero_dim: usize = weights.iter().filter(|(w, _)| w.is_zero()).map(|(_, s)| s.cols()).sum();
    let h_ok = h_abelian && zero_dim == h.cols() && h.cols() == data.rank_c;
    check_bool(rep, "h_cartan", h_ok, &format!("h not a Cartan subalgebra (zero weight dim {zero_dim}, rank {})", data.rank_c));
    let roots: Vec<RootSpace> =
        weights.into_iter().filter(|(w, _)| !w.is_zero()).map(|(w, s)| RootSpace { root: w, space: s }).collect();

    let gb = data.gram(&b);
    let gt = data.gram(&t);
    let form = WeightForm {
        b_inv: if delta > 0 { inverse(&gb).ok()? } else { CMat::zeros(0, 0) },
        t_inv: if t.cols() > 0 { inverse(&gt.neg()).ok()? } else { CMat::zeros(0, 0) },
    };

    // z(b), m and z⊥(b)
    let zb = centralizer(data, &b, &id);
    let m = orth_complement(f, &zb, &b);
    let zperp = orth_complement(f, &id, &zb);
    let p_m = intersect(&m, &p);
    let k_m = intersect(&m, &k);
    let p_perp = intersect(&zperp, &p);
    let k_perp = intersect(&zperp, &k);
    let split_ok = zb.cols() + zperp.cols() == n && m.cols() + delta == zb.cols();
    check_bool(rep, "zperp_split", split_ok, "z(b) ⊕ z⊥(b) ≠ g");

    let center = centralizer(data, &id, &id);
    let center_compact = intersect(&center, &p).cols() == 0;

    let (nn, nbar) = if delta > 0 && zperp.cols() > 0 {
        let fb: Vec<C> = b.mul_vec(&data.f_b.iter().cloned().map(C::real).collect::<Vec<_>>());
        let adf = restrict(&data.ad_of(&fb), &zperp).ok()?;
        match rational_eigenspaces(&adf) {
            Ok(parts) => {
                let pos: Vec<&CMat> = parts.iter().filter(|(l, _)| l.signum() > 0).map(|(_, s)| s).collect();
                let neg: Vec<&CMat> = parts.iter().filter(|(l, _)| l.signum() < 0).map(|(_, s)| s).collect();
                let zero = parts.iter().any(|(l, _)| l.is_zero());
                check_bool(rep, "fb_regular", !zero, "f_b has a zero eigenvalue on z⊥(b)");
                let up = if pos.is_empty() { CMat::zeros(zperp.cols(), 0) } else { CMat::hstack(&pos) };
                let dn = if neg.is_empty() { CMat::zeros(zperp.cols(), 0) } else { CMat::hstack(&neg) };
                (zperp.mul(&up), zperp.mul(&dn))
            }
            Err(e) => {
                check_bool(rep, "fb_regular", false, &format!("ad(f_b) on z⊥(b) not semisimple: {e}"));
                return None;
            }
        }
    } else {
        (CMat::zeros(n, 0), CMat::zeros(n, 0))
    };
    let even = nn.cols() == nbar.cols() && nn.cols() + nbar.cols() == zperp.cols();
    check_bool(rep, "n_nbar_dims", even, "dim n ≠ dim n̄ or n ⊕ n̄ ≠ z⊥(b)");
    check_bool(rep, "theta_n_nbar", span_eq(&th.mul(&nn), &nbar), "θ(n) ≠ n̄");
    let vanish = data.gram(&nn).is_zero() && data.gram(&nbar).is_zero();
    check_bool(rep, "b_vanishes_on_n_nbar", vanish, "B does not vanish on n or n̄");
    let pairing = rank(&nn.transpose().mul(f).mul(&nbar)) == nn.cols();
    check_bool(rep, "b_pairing_n_nbar", pairing, "B on n × n̄ is degenerate");
    let proj_p = nn.sub(&th.mul(&nn));
    let proj_k = nn.add(&th.mul(&nn));
    let inj = rank(&proj_p) == nn.cols()
        && rank(&proj_k) == nn.cols()
        && span_contains(&p_perp, &proj_p)
        && span_contains(&k_perp, &proj_k)
        && p_perp.cols() == nn.cols()
        && k_perp.cols() == nn.cols();
    check_bool(rep, "projections_injective", inj, "projections of n to p⊥, k⊥ are not isomorphisms");

    let t_only: Vec<CMat> = ops[delta..].to_vec();
    let tchar = |s: &CMat| t_weights_on(data, &t_only, s).map(|w| character_of(&w));
    let km = match (tchar(&nn), tchar(&nbar), tchar(&p_perp), tchar(&k_perp)) {
        (Ok(a), Ok(b1), Ok(c), Ok(d)) => a == b1 && a == c && a == d,
        _ => false,
    };
    check_bool(rep, "km_equivalence", km, "n, n̄, p_m⊥, k_m⊥ have different T-characters");

    if delta == 1 {
        let a0 = b.col(0);
        let ad0 = data.ad_of(&a0);
        let sc = ad0.mul(&nn) == nn && ad0.mul(&nbar) == nbar.neg();
        check_bool(rep, "scalar_action", sc, "ad(a₀) is not ±1 on n, n̄");
    } else {
        rep.push("scalar_action", true, "n/a (δ ≠ 1)");
    }

    let roots_only: Vec<Weight> = roots.iter().map(|r| r.root.clone()).collect();
    let weyl = build_weyl(data, &form, &k, &roots_only, &ops);
    match &weyl {
        Ok(w) => {
            let mut bad = w.self_check();
            for g in &w.generators {
                for r in &roots {
                    let img = WeylGroupData::act(g, &r.root);
                    if !roots.iter().any(|s| s.root == img && s.space.cols() == r.space.cols()) {
                        bad.push(format!("generator does not permute roots ({} ↦ {img})", r.root));
                        break;
                    }
                }
            }
            check_bool(rep, "weyl_group", bad.is_empty(), &bad.join("; "));
        }
        Err(e) => {
            check_bool(rep, "weyl_group", false, &e.to_string());
        }
    }

    Some(Derived {
        p,
        k,
        b,
        m,
        p_m,
        k_m,
        zperp,
        p_perp,
        k_perp,
        n: nn,
        nbar,
        center_compact,
        form,
        roots,
        weyl: weyl.ok(),
    })
}

/// {x ∈ span(inside) : [y, x] = 0 for all columns y of `of`}.
fn centralizer(data: &ModelData, of: &CMat, inside: &CMat) -> CMat {
    if of.cols() == 0 || inside.cols() == 0 {
        return inside.clone();
    }
    let blocks: Vec<CMat> = (0..of.cols()).map(|j| data.ad_of(&of.col(j)).mul(inside)).collect();
    let refs: Vec<&CMat> = blocks.iter().collect();
    let stacked = CMat::vstack(&refs);
    column_basis(&inside.mul(&nullspace(&stacked)))
}

fn reflection(form: &WeightForm, nb: usize, gamma: &Weight) -> CMat {
    let dim = gamma.b.len() + gamma.t.len();
    let gg = form.norm_sq(gamma);
    let cols: Vec<Vec<C>> = (0..dim)
        .map(|i| {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::one();
            let w = Weight::from_coords(nb, &e);
            let c = Q::int(2) * form.pair(&w, gamma) / gg.clone();
            w.sub(&gamma.scale(&c)).coords().into_iter().map(C::real).collect()
        })
        .collect();
    CMat::from_cols(&cols, dim)
}

fn positive_on(v: &[Q], reg: &[Q]) -> i32 {
    let s: Q = v.iter().zip(reg).map(|(a, b)| a * b).sum();
    s.signum()
}

/// W(T:K) from the roots of (t,k): imaginary roots give their own
/// reflection; a torus root that is only the restriction of complex roots
/// γ, θγ gives s_γ·s_θγ, which requires γ ⊥ θγ.
fn build_weyl(
    data: &ModelData,
    form: &WeightForm,
    k: &CMat,
    roots: &[Weight],
    ops: &[CMat],
) -> Result<WeylGroupData, ModelError> {
    let nb = data.b_basis.cols();
    let nt = data.t_basis.cols();
    let t_ops: Vec<CMat> = ops[nb..].to_vec();
    let mut k_roots: Vec<Weight> = Vec::new();
    if nt > 0 && k.cols() > 0 {
        for (w, _) in t_weights_on(data, &t_ops, k)? {
            if !w.is_zero() {
                k_roots.push(w);
            }
        }
    }
    let positive: Vec<Weight> = k_roots.iter().filter(|w| positive_on(&w.t, &data.t_reg) > 0).cloned().collect();
    let mut gens = Vec::new();
    for a in &positive {
        if roots.contains(a) {
            gens.push(reflection(form, nb, a));
            continue;
        }
        let gamma = roots
            .iter()
            .find(|g| g.t == a.t && g.b.iter().any(|x| !x.is_zero()))
            .ok_or_else(|| ModelError::Malformed(format!("torus root {a} is not a restricted root")))?;
        let tg = gamma.theta();
        if !form.pair(gamma, &tg).is_zero() {
            return Err(ModelError::Malformed(format!("complex root {gamma} not orthogonal to its θ-image")));
        }
        gens.push(reflection(form, nb, gamma).mul(&reflection(form, nb, &tg)));
    }
    Ok(WeylGroupData::from_generators(nb, nt, gens, positive, form.clone())?)
}

pub fn validate_model(data: &ModelData) -> ValidationReport {
    let mut rep = ValidationReport { model: data.name.clone(), checks: Vec::new() };
    let _ = derive(data, &mut rep);
    rep
}

impl GroupModel {
    pub fn new(data: ModelData) -> Result<GroupModel, ModelError> {
        let mut rep = ValidationReport { model: data.name.clone(), checks: Vec::new() };
        let d = derive(&data, &mut rep);
        match d {
            Some(d) if rep.all_passed() => {
                let delta = d.b.cols();
                let ell = d.n.cols() / 2;
                let t = data.t_basis.clone();
                Ok(GroupModel {
                    data,
                    p: d.p,
                    k: d.k,
                    t,
                    b: d.b,
                    m: d.m,
                    p_m: d.p_m,
                    k_m: d.k_m,
                    zperp: d.zperp,
                    p_perp: d.p_perp,
                    k_perp: d.k_perp,
                    n: d.n,
                    nbar: d.nbar,
                    delta,
                    ell,
                    center_compact: d.center_compact,
                    form: d.form,
                    roots: d.roots,
                    weyl_tk: d.weyl.expect("weyl group present when validation passes"),
                })
            }
            _ => Err(ModelError::ValidationFailed(rep.failures())),
        }
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    pub fn nt(&self) -> usize {
        self.t.cols()
    }

    pub fn report(&self) -> ValidationReport {
        validate_model(&self.data)
    }

    pub fn ad_of(&self, v: &[C]) -> CMat {
        self.data.ad_of(v)
    }

    pub fn bracket(&self, x: &[C], y: &[C]) -> Vec<C> {
        self.data.bracket(x, y)
    }

    pub fn gram(&self, basis: &CMat) -> CMat {
        self.data.gram(basis)
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::zero(self.delta, self.nt())
    }

    /// Operators giving h-weights of a representation with the given
    /// matrices on the model basis.
    pub fn h_operators(&self, mats: &[CMat]) -> Vec<CMat> {
        h_operators(&self.data, mats)
    }

    /// h-character of an ad(h)-invariant subspace of g_C.
    pub fn subspace_character(&self, basis: &CMat) -> Result<VirtualCharacter, ModelError> {
        let ops = self.h_operators(&self.data.ad);
        Ok(character_of(&weights_on(&self.data, &ops, basis)?))
    }

    /// The f_b-positive complex roots and the t_reg-positive imaginary roots.
    pub fn positive_roots(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        for r in &self.roots {
            let w = &r.root;
            let fb = positive_on(&w.b, &self.data.f_b);
            let pos = if w.b.iter().any(|x| !x.is_zero()) { fb > 0 } else { positive_on(&w.t, &self.data.t_reg) > 0 };
            if pos {
                for _ in 0..r.space.cols() {
                    out.push(w.clone());
                }
            }
        }
        out
    }

    /// Half-sum of the positive roots.
    pub fn rho_u(&self) -> Weight {
        let mut s = self.zero_weight();
        for w in self.positive_roots() {
            s = s.add(&w);
        }
        s.scale(&Q::new(1, 2))
    }

    /// Half-sum of the roots occurring in n.
    pub fn rho_n(&self) -> Weight {
        let mut s = self.zero_weight();
        for r in &self.roots {
            if positive_on(&r.root.b, &self.data.f_b) > 0 {
                s = s.add(&r.root.scale(&Q::int(r.space.cols() as i64)));
            }
        }
        s.scale(&Q::new(1, 2))
    }

    /// Half-sum of the positive imaginary roots (roots of m).
    pub fn rho_m(&self) -> Weight {
        let mut s = self.zero_weight();
        for w in self.positive_roots() {
            if w.b.iter().all(Q::is_zero) {
                s = s.add(&w);
            }
        }
        s.scale(&Q::new(1, 2))
    }

    /// α₀ for fundamental rank one with n ≠ 0: the weight with b-part 1 and
    /// torus part 0.
    pub fn alpha0(&self) -> Result<Weight, ModelError> {
        if self.delta != 1 {
            return Err(ModelError::NotRankOne(self.delta));
        }
        Ok(Weight::new(vec![Q::one()], vec![Q::zero(); self.nt()]))
    }

    /// Coordinates of a₀ in the model basis.
    pub fn a0(&self) -> Result<Vec<C>, ModelError> {
        if self.delta != 1 {
            return Err(ModelError::NotRankOne(self.delta));
        }
        Ok(self.b.col(0))
    }

    /// |a₀|² = B(a₀,a₀).
    pub fn a0_norm_sq(&self) -> Result<Q, ModelError> {
        let a = self.a0()?;
        Ok(self.data.form.bilinear(&a, &a).re)
    }

    /// Matrices ad(x_i)|_S for the basis elements of a subalgebra acting on
    /// an invariant subspace S of g_C.
    pub fn ad_restricted(&self, sub: &CMat, on: &CMat) -> Result<Vec<CMat>, ModelError> {
        (0..sub.cols()).map(|i| Ok(restrict(&self.ad_of(&sub.col(i)), on)?)).collect()
    }

    /// Σ G⁻¹_ij·ops_i·ops_j with G the Gram matrix of −B on `sub`.
    pub fn casimir(&self, sub: &CMat, ops: &[CMat]) -> Result<CMat, ModelError> {
        casimir_of(ops, &self.gram(sub).neg())
    }

    /// (1/8)·Tr of the Casimir of `sub` (with −B) acting on `on` by ad.
    pub fn casimir_trace_eighth(&self, sub: &CMat, on: &CMat) -> Result<Q, ModelError> {
        if on.cols() == 0 || sub.cols() == 0 {
            return Ok(Q::zero());
        }
        let ops = self.ad_restricted(sub, on)?;
        let c = self.casimir(sub, &ops)?;
        let tr = c.trace();
        if !tr.is_real() {
            return Err(ModelError::Malformed("non-real Casimir trace".into()));
        }
        Ok(tr.re * Q::new(1, 8))
    }
}

/// Σ G⁻¹_ij·ops_i·ops_j.
pub fn casimir_of(ops: &[CMat], gram: &CMat) -> Result<CMat, ModelError> {
    let n = ops.first().map(|o| o.rows()).unwrap_or(0);
    let ginv = inverse(gram)?;
    let mut out = CMat::zeros(n, n);
    for i in 0..ops.len() {
        for j in 0..ops.len() {
            let g = &ginv[(i, j)];
            if !g.is_zero() {
                out.axpy(g, &ops[i].mul(&ops[j]));
            }
        }
    }
    Ok(out)
}

/// Returns (b, t, h) with b recomputed as the kernel of a ↦ [a,·]|_t on p.
pub fn fundamental_cartan(m: &GroupModel) -> Result<(CMat, CMat, CMat), ModelError> {
    let b = centralizer(&m.data, &m.t, &m.p);
    let cent_k = centralizer(&m.data, &m.t, &m.k);
    if !span_eq(&cent_k, &m.t) {
        return Err(ModelError::NotMaximalTorus(format!("centralizer of t in k has dim {}", cent_k.cols())));
    }
    let h = CMat::hstack(&[&b, &m.t]);
    if h.cols() != m.data.rank_c {
        return Err(ModelError::NotMaximalTorus(format!("dim h = {} but rank is {}", h.cols(), m.data.rank_c)));
    }
    Ok((b, m.t.clone(), h))
}

pub fn split_zb(m: &GroupModel) -> Result<ZbSplit, ModelError> {
    if m.delta == 0 {
        return Err(ModelError::ZeroRank);
    }
    let alpha0 = if m.delta == 1 && m.n.cols() > 0 { Some(m.alpha0()?) } else { None };
    Ok(ZbSplit { m: m.m.clone(), n: m.n.clone(), nbar: m.nbar.clone(), alpha0, ell: m.ell })
}

/// |det(1 − Ad(x))|_{z⊥(b)}|^{1/2}, from the roots in z⊥(b).
pub fn ad_determinant_factor(m: &GroupModel, x: &TorusElement) -> Result<f64, ModelError> {
    if x.is_elliptic() {
        return Err(ModelError::EllipticClass);
    }
    let mut prod = 1.0f64;
    for r in &m.roots {
        if r.root.b.iter().all(Q::is_zero) {
            continue;
        }
        let v = (num_complex::Complex64::new(1.0, 0.0) - r.root.eval(x)).norm();
        prod *= v.powi(r.space.cols() as i32);
    }
    Ok(prod.sqrt())
}

pub fn compact_form_data(m: &GroupModel) -> Result<CompactFormData, ModelError> {
    let u = CMat::hstack(&[&m.p.mul_i(), &m.k]);
    let u_b = CMat::hstack(&[&m.b.mul_i(), &m.k_m]);
    let u_perp = CMat::hstack(&[&m.p_perp.mul_i(), &m.k_perp]);
    let u_m = CMat::hstack(&[&m.p_m.mul_i(), &m.k_m]);
    let trace_constant = m.casimir_trace_eighth(&u_b, &m.zperp)?;
    Ok(CompactFormData { u, u_b, u_perp, u_m, trace_constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn sl2c_dimensions() {
        let m = build_preset("sl2c").unwrap();
        assert_eq!((m.p.cols(), m.k.cols(), m.delta, m.ell, m.n.cols()), (3, 3, 1, 1, 2));
        assert_eq!(m.roots.len(), 4);
        assert_eq!(m.weyl_tk.order(), 2);
        assert_eq!(m.a0_norm_sq().unwrap(), q(1, 2));
        assert_eq!(m.form.norm_sq(&m.alpha0().unwrap()), Q::int(2));
        assert!(m.center_compact);
    }

    #[test]
    fn all_presets_validate() {
        for name in PRESETS {
            let rep = validate_model(&preset_data(name).unwrap());
            assert!(rep.all_passed(), "{name}: {:?}", rep.failures());
        }
        assert!(matches!(build_preset("e8"), Err(ModelError::UnknownPreset(_))));
    }

    #[test]
    fn corruptions_detected() {
        let base = preset_data("sl2c").unwrap();
        let cases = [
            (Corruption::StructureConstant, "jacobi"),
            (Corruption::NegateForm, "b_positive_on_p"),
            (Corruption::PerturbTheta, "theta_involution"),
            (Corruption::AsymmetricForm, "b_symmetric"),
            (Corruption::EmptyTorus, "t_maximal"),
            (Corruption::NonInvariantForm, "b_ad_invariant"),
        ];
        for (c, check) in cases {
            let rep = validate_model(&corrupt(&base, c));
            assert!(!rep.get(check).unwrap().passed, "{c:?} not caught by {check}");
            assert!(GroupModel::new(corrupt(&base, c)).is_err());
        }
    }

    #[test]
    fn compact_and_split() {
        let su2 = build_preset("su2").unwrap();
        assert_eq!((su2.p.cols(), su2.delta), (0, 0));
        assert!(matches!(split_zb(&su2), Err(ModelError::ZeroRank)));
        let rl = build_preset("rline_x_su2").unwrap();
        assert_eq!(split_zb(&rl).unwrap().n.cols(), 0);
        assert!(!rl.center_compact);
        assert_eq!(compact_form_data(&rl).unwrap().trace_constant, Q::zero());
        let cubed = build_preset("sl2c_cubed").unwrap();
        assert_eq!((cubed.delta, cubed.p.cols()), (3, 9));
        assert_eq!(fundamental_cartan(&cubed).unwrap().0.cols(), 3);
    }

    #[test]
    fn trace_constant_matches_rho_n() {
        for name in ["sl2c", "sl2c_x_su2", "sl2c_cubed"] {
            let m = build_preset(name).unwrap();
            let tc = compact_form_data(&m).unwrap().trace_constant;
            assert_eq!(tc, -m.form.norm_sq(&m.rho_n()), "{name}");
        }
        let m = build_preset("sl2c").unwrap();
        let ell = Q::int(m.ell as i64);
        assert_eq!(compact_form_data(&m).unwrap().trace_constant, -(ell.clone() * ell) * Q::int(2));
        let cubed = build_preset("sl2c_cubed").unwrap();
        assert_eq!(compact_form_data(&cubed).unwrap().trace_constant, Q::int(-6));
    }

    #[test]
    fn determinant_factor_sl2c() {
        let m = build_preset("sl2c").unwrap();
        let (l, th) = (0.8f64, 0.3f64);
        let x = TorusElement::new(vec![l], vec![th]);
        let z = |r: f64, s: f64| (num_complex::Complex64::new(1.0, 0.0) - num_complex::Complex64::from_polar(r.exp(), s)).norm();
        let expect = (z(l, 2.0 * th) * z(l, -2.0 * th) * z(-l, 2.0 * th) * z(-l, -2.0 * th)).sqrt();
        assert!((ad_determinant_factor(&m, &x).unwrap() - expect).abs() < 1e-12);
        assert!(matches!(ad_determinant_factor(&m, &TorusElement::new(vec![0.0], vec![0.3])), Err(ModelError::EllipticClass)));
        let rl = build_preset("rline_x_su2").unwrap();
        assert_eq!(ad_determinant_factor(&rl, &TorusElement::new(vec![1.0], vec![0.2])).unwrap(), 1.0);
    }

    #[test]
    fn model_json_round_trip() {
        let d = preset_data("sl2r").unwrap();
        assert_eq!(ModelData::from_json(&d.to_json()).unwrap(), d);
    }
}
