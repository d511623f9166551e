//! Finite-dimensional matrix representations of a model, admissible
//! metrics, Casimir operators, the θ-twist and weight decompositions.

use crate::exact::{C, Q};
use crate::group_model::{casimir_of, character_of, weights_on, GroupModel, ModelError};
use crate::lie_characters::{VirtualCharacter, Weight};
use crate::matrix::{
    column_basis, inverse, is_positive_definite, nullspace, rank, rational_eigenspaces, restrict, CMat, LinalgError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum RepError {
    #[error("representation property fails for basis pair ({0},{1})")]
    NotHomomorphism(usize, usize),
    #[error("wrong number or size of matrices: {0}")]
    Shape(String),
    #[error("Casimir is not scalar (off-scalar max entry {0:.3e})")]
    NotScalar(f64),
    #[error("Casimir through g and through u disagree")]
    CompactFormMismatch,
    #[error("no admissible metric: {0}")]
    Infeasible(String),
    #[error("ρ(a₀) is not semisimple with rational eigenvalues")]
    NonSemisimpleBAction,
    #[error("an admissible metric must be installed first")]
    RequiresAdmissibleMetric,
    #[error("representations of different models")]
    ModelMismatch,
    #[error("unsupported representation spec '{0}'")]
    BadSpec(String),
    #[error("representation is not irreducible")]
    NotIrreducible,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub model: Arc<GroupModel>,
    pub matrices: Vec<CMat>,
    pub metric: Option<CMat>,
    pub label: String,
}

/// A ρ(a₀)-eigenspace with the restricted action of m.
#[derive(Clone, Debug)]
pub struct BWeightBlock {
    pub beta: Weight,
    pub basis: CMat,
    pub m_action: Vec<CMat>,
}

/// Exportable form of a representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDocument {
    pub model: String,
    pub label: String,
    pub matrices: Vec<CMat>,
    pub metric: Option<CMat>,
}

impl MatrixRep {
    /// Builds a representation and checks [ρ(e_i),ρ(e_j)] = ρ([e_i,e_j]).
    pub fn new(model: Arc<GroupModel>, matrices: Vec<CMat>, label: &str) -> Result<MatrixRep, RepError> {
        if matrices.len() != model.dim() {
            return Err(RepError::Shape(format!("{} matrices for dim g = {}", matrices.len(), model.dim())));
        }
        let d = matrices[0].rows();
        if matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(RepError::Shape("matrices are not square of a common size".into()));
        }
        let r = MatrixRep { model, matrices, metric: None, label: label.to_string() };
        r.check_homomorphism()?;
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    fn check_homomorphism(&self) -> Result<(), RepError> {
        let n = self.matrices.len();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.matrices[i].commutator(&self.matrices[j]);
                let rhs = self.of(&self.model.data.ad[i].col(j));
                if lhs != rhs {
                    return Err(RepError::NotHomomorphism(i, j));
                }
            }
        }
        Ok(())
    }

    /// ρ(v) for a coordinate vector of g_C.
    pub fn of(&self, v: &[C]) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out.axpy(x, &self.matrices[i]);
            }
        }
        out
    }

    /// ρ applied to each column of `basis`.
    pub fn on_basis(&self, basis: &CMat) -> Vec<CMat> {
        (0..basis.cols()).map(|j| self.of(&basis.col(j))).collect()
    }

    pub fn trivial(model: Arc<GroupModel>) -> MatrixRep {
        let n = model.dim();
        MatrixRep { model, matrices: vec![CMat::zeros(1, 1); n], metric: Some(CMat::identity(1)), label: "trivial".into() }
    }

    pub fn defining(model: Arc<GroupModel>) -> Result<MatrixRep, RepError> {
        let mats = model.data.defining.clone().ok_or_else(|| RepError::BadSpec("defining".into()))?;
        MatrixRep::new(model, mats, "defining")
    }

    pub fn adjoint(model: Arc<GroupModel>) -> Result<MatrixRep, RepError> {
        let mats = model.data.ad.clone();
        MatrixRep::new(model, mats, "adjoint")
    }

    pub fn direct_sum(&self, o: &MatrixRep) -> Result<MatrixRep, RepError> {
        if !Arc::ptr_eq(&self.model, &o.model) && self.model.name() != o.model.name() {
            return Err(RepError::ModelMismatch);
        }
        let mats = self.matrices.iter().zip(&o.matrices).map(|(a, b)| CMat::block_diag(&[a, b])).collect();
        let metric = match (&self.metric, &o.metric) {
            (Some(a), Some(b)) => Some(CMat::block_diag(&[a, b])),
            _ => None,
        };
        Ok(MatrixRep { model: self.model.clone(), matrices: mats, metric, label: format!("{}+{}", self.label, o.label) })
    }

    pub fn tensor(&self, o: &MatrixRep) -> Result<MatrixRep, RepError> {
        if self.model.name() != o.model.name() {
            return Err(RepError::ModelMismatch);
        }
        let ia = CMat::identity(self.dim());
        let ib = CMat::identity(o.dim());
        let mats = self.matrices.iter().zip(&o.matrices).map(|(a, b)| a.kron(&ib).add(&ia.kron(b))).collect();
        let metric = match (&self.metric, &o.metric) {
            (Some(a), Some(b)) => Some(a.kron(b)),
            _ => None,
        };
        Ok(MatrixRep { model: self.model.clone(), matrices: mats, metric, label: format!("{}*{}", self.label, o.label) })
    }

    pub fn to_document(&self) -> RepDocument {
        RepDocument {
            model: self.model.name().to_string(),
            label: self.label.clone(),
            matrices: self.matrices.clone(),
            metric: self.metric.clone(),
        }
    }

    pub fn from_document(model: Arc<GroupModel>, doc: &RepDocument) -> Result<MatrixRep, RepError> {
        if doc.model != model.name() {
            return Err(RepError::ModelMismatch);
        }
        let mut r = MatrixRep::new(model, doc.matrices.clone(), &doc.label)?;
        if let Some(g) = &doc.metric {
            r.install_metric(g.clone())?;
        }
        Ok(r)
    }

    /// Installs a metric after checking admissibility exactly.
    pub fn install_metric(&mut self, g: CMat) -> Result<(), RepError> {
        if !is_admissible(self, &g) {
            return Err(RepError::Infeasible("supplied metric is not admissible".into()));
        }
        self.metric = Some(g);
        Ok(())
    }

    pub fn with_metric(mut self) -> Result<MatrixRep, RepError> {
        if self.metric.is_none() {
            let g = find_admissible_metric(&self)?;
            self.metric = Some(g);
        }
        Ok(self)
    }
}

/// Matrix of Sym^p of a 2×2 matrix acting as a derivation on homogeneous
/// polynomials of degree p in the basis x^{p−k}·y^k.
pub fn sym_power(x: &CMat, p: usize) -> CMat {
    let (a, b, c, d) = (&x[(0, 0)], &x[(0, 1)], &x[(1, 0)], &x[(1, 1)]);
    let mut out = CMat::zeros(p + 1, p + 1);
    for k in 0..=p {
        let pk = C::int((p - k) as i64);
        let kk = C::int(k as i64);
        // x ↦ a·x + c·y,  y ↦ b·x + d·y
        let diag = &(&pk * a) + &(&kk * d);
        out[(k, k)] = &out[(k, k)] + &diag;
        if k < p {
            out[(k + 1, k)] = &out[(k + 1, k)] + &(&pk * c);
        }
        if k > 0 {
            out[(k - 1, k)] = &out[(k - 1, k)] + &(&kk * b);
        }
    }
    out
}

fn tensor_sum(a: &[CMat], b: &[CMat]) -> Vec<CMat> {
    let ia = CMat::identity(a[0].rows());
    let ib = CMat::identity(b[0].rows());
    a.iter().zip(b).map(|(x, y)| x.kron(&ib).add(&ia.kron(y))).collect()
}

/// Sym^p(std) ⊗ Sym^q(conjugate std) for the sl2c preset.
pub fn build_irrep_sl2c(model: Arc<GroupModel>, p: usize, q: usize) -> Result<MatrixRep, RepError> {
    let defs = model.data.defining.clone().ok_or_else(|| RepError::BadSpec("no defining realization".into()))?;
    if defs[0].rows() != 2 {
        return Err(RepError::BadSpec(format!("V_{{{p},{q}}} needs a 2×2 realization")));
    }
    let a: Vec<CMat> = defs.iter().map(|x| sym_power(x, p)).collect();
    let b: Vec<CMat> = defs.iter().map(|x| sym_power(&x.conj(), q)).collect();
    MatrixRep::new(model, tensor_sum(&a, &b), &format!("V({p},{q})"))
}

/// Sym^n of the block of the defining realization starting at `offset`.
fn block_sym(defs: &[CMat], offset: usize, n: usize, conj: bool) -> Vec<CMat> {
    defs.iter()
        .map(|x| {
            let blk = x.block(offset, offset, 2, 2);
            sym_power(&if conj { blk.conj() } else { blk }, n)
        })
        .collect()
}

fn parse_usize(s: &str, spec: &str) -> Result<usize, RepError> {
    s.trim().parse::<usize>().map_err(|_| RepError::BadSpec(spec.to_string()))
}

fn parse_component(model: &Arc<GroupModel>, comp: &str) -> Result<MatrixRep, RepError> {
    let bad = || RepError::BadSpec(comp.to_string());
    match comp.trim() {
        "trivial" => return Ok(MatrixRep::trivial(model.clone())),
        "defining" => return MatrixRep::defining(model.clone()),
        "adjoint" => return MatrixRep::adjoint(model.clone()),
        _ => {}
    }
    let defs = model.data.defining.clone().ok_or_else(bad)?;
    let pair = |s: &str| -> Result<(usize, usize), RepError> {
        let mut it = s.split(',');
        let p = parse_usize(it.next().ok_or_else(bad)?, comp)?;
        let q = parse_usize(it.next().ok_or_else(bad)?, comp)?;
        if it.next().is_some() {
            return Err(bad());
        }
        Ok((p, q))
    };
    let mats = match model.name() {
        "sl2c" => {
            let (p, q) = pair(comp)?;
            return build_irrep_sl2c(model.clone(), p, q);
        }
        "su2" | "sl2r" => block_sym(&defs, 0, parse_usize(comp, comp)?, false),
        "sl2c_x_su2" => {
            let (a, n) = comp.split_once(';').ok_or_else(bad)?;
            let (p, q) = pair(a)?;
            let n = parse_usize(n, comp)?;
            let s1 = tensor_sum(&block_sym(&defs, 0, p, false), &block_sym(&defs, 0, q, true));
            tensor_sum(&s1, &block_sym(&defs, 2, n, false))
        }
        "sl2c_cubed" => {
            let parts: Vec<&str> = comp.split(';').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let mut acc: Option<Vec<CMat>> = None;
            for (k, part) in parts.iter().enumerate() {
                let (p, q) = pair(part)?;
                let f = tensor_sum(&block_sym(&defs, 2 * k, p, false), &block_sym(&defs, 2 * k, q, true));
                acc = Some(match acc {
                    None => f,
                    Some(a) => tensor_sum(&a, &f),
                });
            }
            acc.expect("three factors")
        }
        "rline_x_su2" => {
            let (beta, n) = comp.split_once(':').ok_or_else(bad)?;
            let beta: Q = beta.trim().parse().map_err(|_| bad())?;
            let n = parse_usize(n, comp)?;
            let su = block_sym(&defs, 1, n, false);
            let d = n + 1;
            su.iter()
                .enumerate()
                .map(|(i, m)| if i == 0 { CMat::scalar(d, &C::real(beta.clone())) } else { m.clone() })
                .collect()
        }
        _ => return Err(bad()),
    };
    MatrixRep::new(model.clone(), mats, comp.trim())
}

/// Parses a representation spec: components joined by `+`, optionally
/// ending in `+theta` to add the θ-twist of the whole sum.
///
/// Components: `trivial`, `defining`, `adjoint`, and per preset `p,q`
/// (sl2c), `n` (su2, sl2r), `p,q;n` (sl2c_x_su2), `p,q;p,q;p,q`
/// (sl2c_cubed), `beta:n` (rline_x_su2).
pub fn parse_rep_spec(model: &Arc<GroupModel>, spec: &str) -> Result<MatrixRep, RepError> {
    let mut comps: Vec<&str> = spec.split('+').map(str::trim).collect();
    let augment = comps.last() == Some(&"theta");
    if augment {
        comps.pop();
    }
    if comps.is_empty() || comps.iter().any(|c| c.is_empty()) {
        return Err(RepError::BadSpec(spec.to_string()));
    }
    let mut rep = parse_component(model, comps[0])?;
    for c in &comps[1..] {
        rep = rep.direct_sum(&parse_component(model, c)?)?;
    }
    if augment {
        rep = augment_theta(&rep)?;
    }
    rep.label = spec.to_string();
    Ok(rep)
}

/// ρ^θ = ρ∘θ.
pub fn theta_twist(r: &MatrixRep) -> MatrixRep {
    let th = &r.model.data.theta;
    let mats: Vec<CMat> = (0..r.matrices.len()).map(|i| r.of(&th.col(i))).collect();
    MatrixRep { model: r.model.clone(), matrices: mats, metric: r.metric.clone(), label: format!("{}^theta", r.label) }
}

/// ρ ⊕ ρ^θ.
pub fn augment_theta(r: &MatrixRep) -> Result<MatrixRep, RepError> {
    r.direct_sum(&theta_twist(r))
}

/// Joint h-weight spaces of ρ.
pub fn h_weight_spaces(r: &MatrixRep) -> Result<Vec<(Weight, CMat)>, RepError> {
    let ops = r.model.h_operators(&r.matrices);
    let id = CMat::identity(r.dim());
    if ops.is_empty() {
        return Ok(vec![(r.model.zero_weight(), id)]);
    }
    Ok(weights_on(&r.model.data, &ops, &id)?)
}

pub fn full_h_character(r: &MatrixRep) -> Result<VirtualCharacter, RepError> {
    Ok(character_of(&h_weight_spaces(r)?))
}

pub fn is_theta_invariant(r: &MatrixRep) -> Result<bool, RepError> {
    Ok(full_h_character(r)? == full_h_character(&theta_twist(r))?)
}

/// C^{g,ρ} = −Σ ρ(x_i)ρ(x̃_i) with x̃ the B-dual basis.
pub fn casimir_matrix(r: &MatrixRep) -> Result<CMat, RepError> {
    let n = r.model.dim();
    Ok(casimir_of(&r.matrices, &r.model.gram(&CMat::identity(n)).neg())?)
}

/// C^{u,ρ} computed through the compact form u = √−1·p ⊕ k.
pub fn casimir_matrix_u(r: &MatrixRep) -> Result<CMat, RepError> {
    let m = &r.model;
    let u = CMat::hstack(&[&m.p.mul_i(), &m.k]);
    Ok(m.casimir(&u, &r.on_basis(&u))?)
}

/// Scalar value of the Casimir, after checking C^{g,ρ} = C^{u,ρ}.
pub fn casimir_scalar(r: &MatrixRep) -> Result<Q, RepError> {
    let cg = casimir_matrix(r)?;
    if cg != casimir_matrix_u(r)? {
        return Err(RepError::CompactFormMismatch);
    }
    match cg.as_scalar() {
        Some(s) if s.is_real() => Ok(s.re),
        _ => {
            let d = cg.entries()[0].clone();
            let off = cg.sub(&CMat::scalar(cg.rows(), &d)).max_abs();
            Err(RepError::NotScalar(off))
        }
    }
}

/// Exact check of G = G^† > 0 with p acting self-adjointly and k
/// skew-adjointly.
pub fn is_admissible(r: &MatrixRep, g: &CMat) -> bool {
    if g.rows() != r.dim() || !is_positive_definite(g) {
        return false;
    }
    let m = &r.model;
    let ok = |basis: &CMat, sign: i64| {
        r.on_basis(basis).iter().all(|x| {
            let lhs = g.mul(x);
            let rhs = x.adjoint().mul(g);
            if sign > 0 {
                lhs == rhs
            } else {
                lhs == rhs.neg()
            }
        })
    };
    ok(&m.p, 1) && ok(&m.k, -1)
}

fn hermitian_real_basis(sols: &[CMat]) -> Vec<CMat> {
    // real span of {S + S†, i(S − S†)}, reduced to an independent set
    let mut cands = Vec::new();
    for s in sols {
        let sa = s.adjoint();
        cands.push(s.add(&sa));
        cands.push(s.sub(&sa).mul_i());
    }
    let flat = |m: &CMat| -> Vec<C> {
        let mut v: Vec<C> = m.entries().iter().map(|x| C::real(x.re.clone())).collect();
        v.extend(m.entries().iter().map(|x| C::real(x.im.clone())));
        v
    };
    let mut out: Vec<CMat> = Vec::new();
    let mut cols: Vec<Vec<C>> = Vec::new();
    for c in cands {
        if c.is_zero() {
            continue;
        }
        let f = flat(&c);
        let mut trial = cols.clone();
        trial.push(f.clone());
        let len = f.len();
        if rank(&CMat::from_cols(&trial, len)) == trial.len() {
            cols = trial;
            out.push(c);
        }
    }
    out
}

/// Finds an admissible Hermitian metric, normalized to unit trace.
///
/// With an admissible metric ρ(b) is Hermitian and ρ(t) skew-Hermitian, so
/// h acts semisimply and distinct h-weight spaces are orthogonal. The
/// search runs in an h-weight basis with a block-diagonal ansatz; a
/// non-semisimple h-action is a certificate of infeasibility.
pub fn find_admissible_metric(r: &MatrixRep) -> Result<CMat, RepError> {
    let d = r.dim();
    let spaces = match h_weight_spaces(r) {
        Ok(s) => s,
        Err(RepError::Linalg(e)) => return Err(RepError::Infeasible(format!("h does not act semisimply ({e})"))),
        Err(e) => return Err(e),
    };
    let refs: Vec<&CMat> = spaces.iter().map(|(_, s)| s).collect();
    let pmat = CMat::hstack(&refs);
    let pinv = inverse(&pmat)?;
    let conj = |x: &CMat| pinv.mul(x).mul(&pmat);
    // unknown positions: (row, col) inside diagonal blocks
    let mut pos = Vec::new();
    let mut off = 0;
    for (_, s) in &spaces {
        for i in 0..s.cols() {
            for j in 0..s.cols() {
                pos.push((off + i, off + j));
            }
        }
        off += s.cols();
    }
    let nu = pos.len();
    let m = &r.model;
    let mut rows: Vec<Vec<C>> = Vec::new();
    let mut add_constraints = |x: &CMat, sign: i64| {
        // G·X − sign·X†·G = 0 for G = Σ g_u E_u
        let xa = x.adjoint();
        let mut eqs = vec![vec![C::zero(); nu]; d * d];
        for (u, &(a, b)) in pos.iter().enumerate() {
            // (E_ab X)_{a,c} = X_{b,c};  (X† E_ab)_{c,b} = X†_{c,a}
            for c in 0..d {
                let v = x[(b, c)].clone();
                if !v.is_zero() {
                    eqs[a * d + c][u] += &v;
                }
                let w = xa[(c, a)].clone();
                if !w.is_zero() {
                    let t = &C::int(sign) * &w;
                    eqs[c * d + b][u] -= &t;
                }
            }
        }
        rows.extend(eqs.into_iter().filter(|e| e.iter().any(|z| !z.is_zero())));
    };
    for x in r.on_basis(&m.p) {
        add_constraints(&conj(&x), 1);
    }
    for x in r.on_basis(&m.k) {
        add_constraints(&conj(&x), -1);
    }
    let sys = if rows.is_empty() { CMat::zeros(1, nu) } else { CMat::from_rows(rows) };
    let ns = nullspace(&sys);
    let sols: Vec<CMat> = (0..ns.cols())
        .map(|j| {
            let mut g = CMat::zeros(d, d);
            for (u, &(a, b)) in pos.iter().enumerate() {
                g[(a, b)] = ns[(u, j)].clone();
            }
            g
        })
        .collect();
    let herm = hermitian_real_basis(&sols);
    if herm.is_empty() {
        return Err(RepError::Infeasible("only the zero form satisfies the admissibility equations".into()));
    }
    let to_orig = |g: &CMat| pinv.adjoint().mul(g).mul(&pinv);
    let finish = |g: CMat| -> Result<CMat, RepError> {
        let tr = g.trace();
        let g = g.scale(&tr.inv());
        if !is_admissible(r, &g) {
            return Err(RepError::Infeasible("post-verification failed".into()));
        }
        Ok(g)
    };
    // candidate: Frobenius projection of the identity (in the original basis)
    let herm_orig: Vec<CMat> = herm.iter().map(to_orig).collect();
    if let Some(g) = project_identity(&herm_orig) {
        if is_positive_definite(&g) {
            return finish(g);
        }
        if is_positive_definite(&g.neg()) {
            return finish(g.neg());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let mut g = CMat::zeros(d, d);
        for h in &herm_orig {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                g.axpy(&C::int(c), h);
            }
        }
        if is_positive_definite(&g) {
            return finish(g);
        }
    }
    Err(RepError::Infeasible("no positive-definite element found in the solution space".into()))
}

fn project_identity(basis: &[CMat]) -> Option<CMat> {
    // real Frobenius inner product ⟨A,B⟩ = Re tr(A†B)
    let ip = |a: &CMat, b: &CMat| C::real(a.adjoint().mul(b).trace().re);
    let n = basis.len();
    let d = basis[0].rows();
    let id = CMat::identity(d);
    let gram = CMat::from_fn(n, n, |i, j| ip(&basis[i], &basis[j]));
    let rhs = CMat::from_fn(n, 1, |i, _| ip(&basis[i], &id));
    let coef = crate::matrix::solve(&gram, &rhs)?;
    let mut g = CMat::zeros(d, d);
    for (i, b) in basis.iter().enumerate() {
        g.axpy(&coef[(i, 0)], b);
    }
    Some(g)
}

/// Eigenspaces of ρ(a₀) with the restricted m-action.
pub fn decompose_by_b(r: &MatrixRep) -> Result<Vec<BWeightBlock>, RepError> {
    let m = &r.model;
    if m.delta != 1 {
        return Err(ModelError::NotRankOne(m.delta).into());
    }
    let g = r.metric.as_ref().ok_or(RepError::RequiresAdmissibleMetric)?;
    let a0 = r.of(&m.a0()?);
    let parts = rational_eigenspaces(&a0).map_err(|_| RepError::NonSemisimpleBAction)?;
    let mut out = Vec::new();
    for (lam, basis) in parts {
        let mut m_action = Vec::new();
        for x in r.on_basis(&m.m) {
            m_action.push(restrict(&x, &basis)?);
        }
        let beta = Weight::new(vec![lam], vec![Q::zero(); m.nt()]);
        out.push(BWeightBlock { beta, basis, m_action });
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if !out[i].basis.adjoint().mul(g).mul(&out[j].basis).is_zero() {
                return Err(RepError::Infeasible("b-blocks are not metric-orthogonal".into()));
            }
        }
    }
    Ok(out)
}

/// K_M-character (torus weights, b-part zero) of a subspace on which m acts.
pub fn block_t_character(r: &MatrixRep, basis: &CMat) -> Result<VirtualCharacter, RepError> {
    let m = &r.model;
    let all = m.h_operators(&r.matrices);
    let t_ops: Vec<CMat> = all[m.delta..].to_vec();
    if t_ops.is_empty() {
        let mut v = VirtualCharacter::new();
        v.insert(m.zero_weight(), basis.cols() as i64);
        return Ok(v);
    }
    let parts = crate::group_model::t_weights_on(&m.data, &t_ops, basis)?;
    Ok(character_of(&parts))
}

/// True when only scalars commute with every ρ(e_i).
pub fn is_irreducible(r: &MatrixRep) -> bool {
    let d = r.dim();
    let mut rows: Vec<Vec<C>> = Vec::new();
    for x in &r.matrices {
        // (Y X − X Y)_{ac} = Σ_b Y_ab X_bc − X_ab Y_bc
        for a in 0..d {
            for c in 0..d {
                let mut row = vec![C::zero(); d * d];
                for b in 0..d {
                    row[a * d + b] += &x[(b, c)];
                    row[b * d + c] -= &x[(a, b)];
                }
                if row.iter().any(|z| !z.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return d == 1;
    }
    nullspace(&CMat::from_rows(rows)).cols() == 1
}

/// Columns spanning a ρ-invariant subspace, for tests and diagnostics.
pub fn invariant_span(r: &MatrixRep, seed: &CMat) -> CMat {
    let mut basis = column_basis(seed);
    loop {
        let mut cols = vec![basis.clone()];
        for x in &r.matrices {
            cols.push(x.mul(&basis));
        }
        let refs: Vec<&CMat> = cols.iter().collect();
        let next = column_basis(&CMat::hstack(&refs));
        if next.cols() == basis.cols() {
            return basis;
        }
        basis = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::group_model::build_preset;

    fn sl2c() -> Arc<GroupModel> {
        Arc::new(build_preset("sl2c").unwrap())
    }

    #[test]
    fn irreps_and_casimirs() {
        let m = sl2c();
        for (p, q_) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (2, 1)] {
            let r = build_irrep_sl2c(m.clone(), p, q_).unwrap();
            assert_eq!(r.dim(), (p + 1) * (q_ + 1));
            assert!(is_irreducible(&r));
        }
        assert_eq!(casimir_scalar(&MatrixRep::trivial(m.clone())).unwrap(), Q::zero());
        assert_eq!(casimir_scalar(&build_irrep_sl2c(m.clone(), 1, 0).unwrap()).unwrap(), Q::int(-3));
        assert_eq!(casimir_scalar(&MatrixRep::adjoint(m.clone()).unwrap()).unwrap(), Q::int(-8));
        let s = parse_rep_spec(&m, "1,0+2,0").unwrap();
        assert!(matches!(casimir_scalar(&s), Err(RepError::NotScalar(_))));
    }

    #[test]
    fn theta_twist_behaviour() {
        let m = sl2c();
        let v10 = build_irrep_sl2c(m.clone(), 1, 0).unwrap();
        let v01 = build_irrep_sl2c(m.clone(), 0, 1).unwrap();
        let tw = theta_twist(&v10);
        assert_eq!(full_h_character(&tw).unwrap(), full_h_character(&v01).unwrap());
        assert_ne!(full_h_character(&tw).unwrap(), full_h_character(&v10).unwrap());
        assert_eq!(theta_twist(&tw).matrices, v10.matrices);
        assert!(!is_theta_invariant(&v10).unwrap());
        assert!(is_theta_invariant(&v10.direct_sum(&v01).unwrap()).unwrap());
        let t = MatrixRep::trivial(m);
        assert_eq!(theta_twist(&t).matrices, t.matrices);
    }

    #[test]
    fn metrics() {
        let m = sl2c();
        for (p, q_) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
            let r = build_irrep_sl2c(m.clone(), p, q_).unwrap();
            let g = find_admissible_metric(&r).unwrap();
            assert!(is_admissible(&r, &g));
            assert_eq!(g.trace(), C::one());
        }
        let t = find_admissible_metric(&MatrixRep::trivial(m)).unwrap();
        assert!(t.is_identity());
        let rl = Arc::new(build_preset("rline").unwrap());
        let bad = MatrixRep::new(rl, vec![CMat::from_ints(&[&[0, 1], &[0, 0]], None)], "jordan").unwrap();
        assert!(matches!(find_admissible_metric(&bad), Err(RepError::Infeasible(_))));
    }

    #[test]
    fn b_blocks() {
        let m = sl2c();
        let v10 = build_irrep_sl2c(m.clone(), 1, 0).unwrap().with_metric().unwrap();
        let blocks = decompose_by_b(&v10).unwrap();
        let betas: Vec<Q> = blocks.iter().map(|b| b.beta.b[0].clone()).collect();
        assert_eq!(betas, vec![q(-1, 2), q(1, 2)]);
        assert!(blocks.iter().all(|b| b.basis.cols() == 1));
        let triv = decompose_by_b(&MatrixRep::trivial(m.clone())).unwrap();
        assert_eq!(triv.len(), 1);
        let nometric = build_irrep_sl2c(m, 1, 0).unwrap();
        assert!(matches!(decompose_by_b(&nometric), Err(RepError::RequiresAdmissibleMetric)));
    }

    #[test]
    fn spec_parsing() {
        let m = sl2c();
        assert_eq!(parse_rep_spec(&m, "1,0+theta").unwrap().dim(), 4);
        assert!(matches!(parse_rep_spec(&m, "7"), Err(RepError::BadSpec(_))));
        let rl = Arc::new(build_preset("rline_x_su2").unwrap());
        let r = parse_rep_spec(&rl, "1/2:1").unwrap();
        assert_eq!(r.dim(), 2);
        let su2 = Arc::new(build_preset("su2").unwrap());
        assert_eq!(casimir_scalar(&parse_rep_spec(&su2, "1").unwrap()).unwrap(), q(-3, 2));
    }
}
