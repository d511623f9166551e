//! The virtual (m, K_M)-modules η_β attached to a representation ρ of G,
//! their lifts η̂_β to R(K), the scalars σ_η, and exact checks of the
//! character identities they satisfy.
//!
//! Two constructions are provided. `Dirac` takes ker D on S^{u⊥(b)}⊗E,
//! graded by chirality and by b-weight. `Direct` applies when z⊥(b) = 0,
//! where η_β is simply the β-eigenspace of ρ(a₀).

use crate::clifford_dirac::{dirac_operator, k_spinor_action, spinor_b_m_characters, supertrace_full, uperp_clifford, CliffordError};
use crate::exact::{C, Q};
use crate::group_model::{ad_determinant_factor, character_of, compact_form_data, t_weights_on, GroupModel, ModelError};
use crate::lie_characters::{
    evaluate_character, exterior_powers, is_w_invariant, lift_to_rk, CharacterError, RkCharacter, TorusElement,
    VirtualCharacter, Weight,
};
use crate::matrix::{joint_eigenspaces, nullspace, restrict, CMat, LinalgError};
use crate::representations::{
    block_t_character, casimir_scalar, decompose_by_b, full_h_character, is_irreducible, is_theta_invariant, MatrixRep,
    RepError,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum EtaError {
    #[error("representation is not θ-invariant; augment with its θ-twist first")]
    RequiresThetaInvariant,
    #[error("Casimir does not act by a scalar: {0}")]
    NotScalarCasimir(String),
    #[error("construction does not apply to this model: {0}")]
    WrongBranch(String),
    #[error("family invariants violated: {0:?}")]
    InvariantViolation(Vec<String>),
    #[error("representation is not irreducible")]
    NotIrreducible,
    #[error("torus element is elliptic")]
    EllipticClass,
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EtaMode {
    Dirac,
    Direct,
}

/// One graded piece: a subspace with its u_m-action and K_M-character.
#[derive(Clone, Debug)]
pub struct EtaBlock {
    pub basis: CMat,
    pub u_m_action: Vec<CMat>,
    /// Torus weights, b-part zero.
    pub character: VirtualCharacter,
    /// Scalar by which C^{u_m} acts; None on an empty block.
    pub casimir: Option<Q>,
}

impl EtaBlock {
    fn empty() -> EtaBlock {
        EtaBlock { basis: CMat::zeros(0, 0), u_m_action: vec![], character: VirtualCharacter::new(), casimir: None }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Clone, Debug)]
pub struct EtaEntry {
    /// b-part β, torus part zero.
    pub beta: Weight,
    pub plus: EtaBlock,
    pub minus: EtaBlock,
}

impl EtaEntry {
    /// η_β = η_β⁺ − η_β⁻.
    pub fn virtual_character(&self) -> VirtualCharacter {
        self.plus.character.sub(&self.minus.character)
    }
}

#[derive(Clone, Debug)]
pub struct EtaFamily {
    pub model: Arc<GroupModel>,
    pub mode: EtaMode,
    pub source_rep: String,
    pub entries: BTreeMap<Weight, EtaEntry>,
    pub sigma: BTreeMap<Weight, Q>,
    pub c_u_rho: Q,
    /// (1/8)Tr[C^{u(b),u⊥(b)}]; zero when z⊥(b) = 0.
    pub trace_constant: Q,
    /// dim ker D (Dirac mode) or dim E (direct mode).
    pub kernel_dim: usize,
}

impl EtaFamily {
    pub fn eta(&self, beta: &Weight) -> VirtualCharacter {
        self.entries.get(beta).map(EtaEntry::virtual_character).unwrap_or_default()
    }

    pub fn betas(&self) -> Vec<Weight> {
        self.entries.keys().cloned().collect()
    }

    /// β with positive b-part, in increasing order.
    pub fn positive_betas(&self) -> Vec<Weight> {
        self.entries.keys().filter(|b| b.b.iter().any(|x| x.signum() != 0) && b.b[0].signum() > 0).cloned().collect()
    }

    pub fn norm_sq(&self, beta: &Weight) -> Q {
        self.model.form.norm_sq(beta)
    }

    /// Σ_β C_β ⊠ η_β as one (b ⊕ t)-character.
    pub fn total_character(&self) -> VirtualCharacter {
        let mut out = VirtualCharacter::new();
        for (beta, e) in &self.entries {
            out = out.add(&e.virtual_character().shift(beta));
        }
        out
    }

    /// Invariants every family must satisfy: η_{−β} = η_β for both signs,
    /// and C^{u_m} acts on η_β⁺ and η_β⁻ by the same scalar.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (beta, e) in &self.entries {
            match self.entries.get(&beta.neg()) {
                Some(o) => {
                    if o.plus.character != e.plus.character || o.minus.character != e.minus.character {
                        out.push(format!("η at β={:?} differs from η at −β", beta.b));
                    }
                }
                None => out.push(format!("β={:?} present without −β", beta.b)),
            }
            if let (Some(a), Some(b)) = (&e.plus.casimir, &e.minus.casimir) {
                if a != b {
                    out.push(format!("C^u_m differs on η⁺ and η⁻ at β={:?}", beta.b));
                }
            }
        }
        out
    }
}

/// (−√−1·c̃(√−1·a_j))⊗1 + 1⊗ρ(a_j) for a_j ∈ b and (c̃(T)⊗1 + 1⊗ρ(T))·(−√−1)
/// for T ∈ t: their joint eigenvalues are the (b ⊕ t)-weights on S⊗E.
fn product_h_ops(model: &GroupModel, dd: &crate::clifford_dirac::DiracData) -> Result<(Vec<CMat>, Vec<CMat>), EtaError> {
    let cm = &dd.clifford;
    let ie = CMat::identity(dd.rep.dim());
    let is = CMat::identity(cm.spinor_dim());
    let mut b_ops = Vec::new();
    for j in 0..model.b.cols() {
        let a = model.b.col(j);
        let ja: Vec<C> = a.iter().map(C::mul_i).collect();
        let s = k_spinor_action(cm, model, &ja)?.mul_i().neg();
        b_ops.push(s.kron(&ie).add(&is.kron(&dd.rep.of(&a))));
    }
    let mut t_ops = Vec::new();
    for j in 0..model.t.cols() {
        let t = model.t.col(j);
        let s = k_spinor_action(cm, model, &t)?;
        t_ops.push(s.kron(&ie).add(&is.kron(&dd.rep.of(&t))).mul_i().neg());
    }
    Ok((b_ops, t_ops))
}

fn make_block(model: &GroupModel, basis: CMat, u_m: &CMat, u_m_ops: &[CMat], t_ops: &[CMat]) -> Result<EtaBlock, EtaError> {
    if basis.cols() == 0 {
        return Ok(EtaBlock::empty());
    }
    let mut u_m_action = Vec::new();
    for op in u_m_ops {
        u_m_action.push(restrict(op, &basis)?);
    }
    let cas = if u_m.cols() == 0 {
        Some(Q::zero())
    } else {
        let c = model.casimir(u_m, &u_m_action)?;
        match c.as_scalar() {
            Some(s) if s.is_real() => Some(s.re),
            _ => return Err(EtaError::NotScalarCasimir("C^{u_m} on an η-block".into())),
        }
    };
    let character = if t_ops.is_empty() {
        VirtualCharacter::from_weight(model.zero_weight(), basis.cols() as i64)
    } else {
        character_of(&t_weights_on(&model.data, t_ops, &basis)?)
    };
    Ok(EtaBlock { basis, u_m_action, character, casimir: cas })
}

/// Build η_β⁺, η_β⁻ for every β.
pub fn compute_eta_family(rep: &MatrixRep, mode: EtaMode) -> Result<EtaFamily, EtaError> {
    let model = rep.model.clone();
    if !is_theta_invariant(rep)? {
        return Err(EtaError::RequiresThetaInvariant);
    }
    let c_u_rho = casimir_scalar(rep).map_err(|e| EtaError::NotScalarCasimir(e.to_string()))?;
    let rep = if rep.metric.is_some() { rep.clone() } else { rep.clone().with_metric()? };
    let cf = compact_form_data(&model)?;
    let mut entries = BTreeMap::new();
    let kernel_dim;
    match mode {
        EtaMode::Direct => {
            if model.zperp.cols() != 0 {
                return Err(EtaError::WrongBranch("direct construction needs z⊥(b) = 0".into()));
            }
            if model.delta != 1 {
                return Err(EtaError::WrongBranch(format!("fundamental rank {} ≠ 1", model.delta)));
            }
            let u_m_ops = rep.on_basis(&cf.u_m);
            let all = model.h_operators(&rep.matrices);
            let t_ops = all[model.delta..].to_vec();
            for blk in decompose_by_b(&rep)? {
                let plus = make_block(&model, blk.basis, &cf.u_m, &u_m_ops, &t_ops)?;
                entries.insert(blk.beta.clone(), EtaEntry { beta: blk.beta, plus, minus: EtaBlock::empty() });
            }
            kernel_dim = rep.dim();
        }
        EtaMode::Dirac => {
            if model.delta != 1 || model.n.cols() == 0 {
                return Err(EtaError::WrongBranch("Dirac construction needs δ = 1 and n ≠ 0".into()));
            }
            let cm = uperp_clifford(&model)?;
            let dd = dirac_operator(&rep, &cm)?;
            let ker = nullspace(&dd.d.mul(&dd.d));
            kernel_dim = ker.cols();
            let (b_ops, t_ops) = product_h_ops(&model, &dd)?;
            let ie = CMat::identity(rep.dim());
            let is = CMat::identity(cm.spinor_dim());
            let mut u_m_ops = Vec::new();
            for j in 0..cf.u_m.cols() {
                let x = cf.u_m.col(j);
                u_m_ops.push(k_spinor_action(&cm, &model, &x)?.kron(&ie).add(&is.kron(&rep.of(&x))));
            }
            let mut graded = vec![dd.chirality.clone()];
            graded.extend(b_ops);
            let mut split: BTreeMap<Weight, (CMat, CMat)> = BTreeMap::new();
            for (vals, sp) in joint_eigenspaces(&graded, &ker)? {
                let beta = Weight::new(vals[1..].to_vec(), vec![Q::zero(); model.nt()]);
                let slot = split.entry(beta).or_insert_with(|| (CMat::zeros(sp.rows(), 0), CMat::zeros(sp.rows(), 0)));
                if vals[0].signum() > 0 {
                    slot.0 = sp;
                } else {
                    slot.1 = sp;
                }
            }
            for (beta, (p, m)) in split {
                let plus = make_block(&model, p, &cf.u_m, &u_m_ops, &t_ops)?;
                let minus = make_block(&model, m, &cf.u_m, &u_m_ops, &t_ops)?;
                entries.insert(beta.clone(), EtaEntry { beta, plus, minus });
            }
        }
    }
    let mut sigma = BTreeMap::new();
    for (beta, e) in &entries {
        if let Some(c) = e.plus.casimir.clone().or_else(|| e.minus.casimir.clone()) {
            sigma.insert(beta.clone(), &cf.trace_constant - &c);
        }
    }
    let fam = EtaFamily {
        model,
        mode,
        source_rep: rep.label.clone(),
        entries,
        sigma,
        c_u_rho,
        trace_constant: cf.trace_constant,
        kernel_dim,
    };
    let mut bad = fam.invariant_failures();
    if fam.entries.values().map(|e| e.plus.dim() + e.minus.dim()).sum::<usize>() != fam.kernel_dim {
        bad.push("graded pieces do not exhaust the kernel".into());
    }
    for e in fam.entries.values() {
        if lift_to_rk(&e.virtual_character(), &fam.model.weyl_tk).is_err() {
            bad.push(format!("η at β={:?} is not W(T:K)-invariant", e.beta.b));
        }
    }
    if !bad.is_empty() {
        return Err(EtaError::InvariantViolation(bad));
    }
    Ok(fam)
}

/// Worst |C^{u_m,η_β^±} − (|β|² + C^{u,ρ} + trace constant)| over all
/// nonempty blocks.
pub fn verify_casimir_scalar_eta(fam: &EtaFamily) -> Q {
    let mut worst = Q::zero();
    for (beta, e) in &fam.entries {
        let expect = fam.norm_sq(beta) + fam.c_u_rho.clone() + fam.trace_constant.clone();
        for blk in [&e.plus, &e.minus] {
            if let Some(c) = &blk.casimir {
                let r = (c - &expect).abs();
                if r > worst {
                    worst = r;
                }
            }
        }
    }
    worst
}

/// Action of e^a·exp(Σθ_j T_j) on E, as a float matrix.
pub fn rep_torus_action(rep: &MatrixRep, x: &TorusElement) -> DMatrix<Complex64> {
    let m = &rep.model;
    let n = rep.dim();
    let mut gen = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..m.b.cols() {
        gen += rep.of(&m.b.col(j)).to_nalgebra() * Complex64::new(x.a_part[j], 0.0);
    }
    for j in 0..m.t.cols() {
        gen += rep.of(&m.t.col(j)).to_nalgebra() * Complex64::new(x.t_angles[j], 0.0);
    }
    gen.exp()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identity530Report {
    /// (S⁺ − S⁻) ⊗ ρ = Σ_β C_β ⊠ η_β as weight multisets.
    pub module_exact: bool,
    pub module_diff: Vec<(Weight, i64)>,
    /// Worst pointwise residual over the samples.
    pub max_pointwise: f64,
}

impl Identity530Report {
    pub fn passed(&self, tol: f64) -> bool {
        self.module_exact && self.max_pointwise <= tol
    }
}

/// Character of S⁺ − S⁻ (the trivial character when z⊥(b) = 0).
fn spinor_supercharacter(model: &GroupModel) -> Result<VirtualCharacter, EtaError> {
    if model.zperp.cols() == 0 {
        return Ok(VirtualCharacter::trivial(model.delta, model.nt()));
    }
    let cm = uperp_clifford(model)?;
    let (p, m) = spinor_b_m_characters(&cm, model)?;
    Ok(p.sub(&m))
}

/// Left side of the pointwise identity: Tr_s[η₀] + Σ_{β>0}(e^{|β||a|} + e^{−|β||a|})Tr_s[η_β].
pub fn eta_side(fam: &EtaFamily, x: &TorusElement) -> Result<Complex64, EtaError> {
    let m = &fam.model;
    let a_len = x.a_part[0].abs() * m.a0_norm_sq()?.to_f64().sqrt();
    let zero = m.zero_weight();
    let mut s = evaluate_character(&fam.eta(&zero), x);
    for beta in fam.positive_betas() {
        let nb = fam.norm_sq(&beta).to_f64().sqrt();
        let w = (nb * a_len).exp() + (-nb * a_len).exp();
        s += evaluate_character(&fam.eta(&beta), x) * w;
    }
    Ok(s)
}

pub fn verify_identity_530(fam: &EtaFamily, rep: &MatrixRep, samples: &[TorusElement]) -> Result<Identity530Report, EtaError> {
    let model = &fam.model;
    let lhs = spinor_supercharacter(model)?.mul(&full_h_character(rep)?);
    let rhs = fam.total_character();
    let module_diff = lhs.diff(&rhs);
    let mut worst = 0.0f64;
    for x in samples {
        if x.is_elliptic() {
            return Err(EtaError::EllipticClass);
        }
        let det = ad_determinant_factor(model, x)?;
        let tr = rep_torus_action(rep, x).trace();
        let r = (eta_side(fam, x)? - tr * det).norm();
        worst = worst.max(r);
    }
    Ok(Identity530Report { module_exact: module_diff.is_empty(), module_diff, max_pointwise: worst })
}

/// Supertrace localization: Tr_s of x on ker D against Tr_s of x on all of
/// S⊗E, worst residual over the samples.
pub fn verify_localization(fam: &EtaFamily, rep: &MatrixRep, samples: &[TorusElement]) -> Result<f64, EtaError> {
    if fam.mode != EtaMode::Dirac {
        return Err(EtaError::WrongBranch("localization needs the Dirac construction".into()));
    }
    let rep = if rep.metric.is_some() { rep.clone() } else { rep.clone().with_metric()? };
    let dd = dirac_operator(&rep, &uperp_clifford(&fam.model)?)?;
    let total = fam.total_character();
    let mut worst = 0.0f64;
    for x in samples {
        let full = supertrace_full(&dd, x)?;
        worst = worst.max((full - evaluate_character(&total, x)).norm());
    }
    Ok(worst)
}

#[derive(Clone, Debug)]
pub struct EtaHatEntry {
    pub plus: VirtualCharacter,
    pub minus: VirtualCharacter,
    pub lifted: RkCharacter,
}

#[derive(Clone, Debug)]
pub struct EtaHat {
    pub entries: BTreeMap<Weight, EtaHatEntry>,
}

impl EtaHat {
    pub fn total(&self) -> VirtualCharacter {
        let mut out = VirtualCharacter::new();
        for e in self.entries.values() {
            out = out.add(&e.lifted.character);
        }
        out
    }
}

/// Torus character of an ad(t)-invariant subspace of g_C.
fn t_character_of_subspace(model: &GroupModel, basis: &CMat) -> Result<VirtualCharacter, EtaError> {
    if basis.cols() == 0 {
        return Ok(VirtualCharacter::new());
    }
    let ops = model.h_operators(&model.data.ad)[model.delta..].to_vec();
    if ops.is_empty() {
        return Ok(VirtualCharacter::from_weight(model.zero_weight(), basis.cols() as i64));
    }
    Ok(character_of(&t_weights_on(&model.data, &ops, basis)?))
}

/// η̂_β = Λ*(p*_m) ⊗̂ η_β with its lift to R(K).
pub fn compute_eta_hat(fam: &EtaFamily) -> Result<EtaHat, EtaError> {
    let model = &fam.model;
    let pm = t_character_of_subspace(model, &model.p_m)?.dual();
    let mut even = VirtualCharacter::trivial(model.delta, model.nt());
    let mut odd = VirtualCharacter::new();
    if !pm.is_empty() {
        even = VirtualCharacter::new();
        for (i, l) in exterior_powers(&pm)?.iter().enumerate() {
            if i % 2 == 0 {
                even = even.add(l);
            } else {
                odd = odd.add(l);
            }
        }
    }
    let mut entries = BTreeMap::new();
    for (beta, e) in &fam.entries {
        let (p, m) = (&e.plus.character, &e.minus.character);
        let plus = even.mul(p).add(&odd.mul(m));
        let minus = odd.mul(p).add(&even.mul(m));
        let lifted = lift_to_rk(&plus.sub(&minus), &model.weyl_tk)?;
        entries.insert(beta.clone(), EtaHatEntry { plus, minus, lifted });
    }
    Ok(EtaHat { entries })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identity531Report {
    pub equal: bool,
    pub diff: Vec<(Weight, i64)>,
    pub w_invariant: bool,
}

/// Σ_β η̂_β = Σ_{i≥1} (−1)^{i−1}·i·Λ^i(p*) ⊗ ρ|_K on the torus.
pub fn verify_identity_531(eh: &EtaHat, rep: &MatrixRep) -> Result<Identity531Report, EtaError> {
    let model = &rep.model;
    let p_dual = t_character_of_subspace(model, &model.p)?.dual();
    let mut weighted = VirtualCharacter::new();
    for (i, l) in exterior_powers(&p_dual)?.iter().enumerate().skip(1) {
        let s = if i % 2 == 1 { i as i64 } else { -(i as i64) };
        weighted = weighted.add(&l.scale(s));
    }
    let rho_k = block_t_character(rep, &CMat::identity(rep.dim()))?;
    let rhs = weighted.mul(&rho_k);
    let lhs = eh.total();
    let diff = lhs.diff(&rhs);
    let w_invariant = is_w_invariant(&lhs, &model.weyl_tk) && eh.entries.values().all(|e| is_w_invariant(&e.lifted.character, &model.weyl_tk));
    Ok(Identity531Report { equal: diff.is_empty(), diff, w_invariant })
}

/// σ_η = (1/8)Tr[C^{u(b),u⊥(b)}] − C^{u_m,η}.
pub fn sigma_eta(fam: &EtaFamily, beta: &Weight) -> Option<Q> {
    fam.sigma.get(beta).cloned()
}

#[derive(Clone, Debug, PartialEq)]
pub struct KostantReport {
    /// (1/8)Tr[C^{u(b),u⊥(b)}] and −|ρ_n|² (= −ℓ²|α₀|² when δ = 1).
    pub trace_lhs: Q,
    pub trace_rhs: Q,
    /// |ρ^u|² and −(1/24)Tr^u[C^{u,u}].
    pub strange_lhs: Q,
    pub strange_rhs: Q,
    /// ρ^u and ρ^{u(b)} + ρ_n.
    pub rho_lhs: Weight,
    pub rho_rhs: Weight,
}

impl KostantReport {
    pub fn passed(&self) -> bool {
        self.trace_lhs == self.trace_rhs && self.strange_lhs == self.strange_rhs && self.rho_lhs == self.rho_rhs
    }
}

/// Half-sum of the t_reg-positive roots of z(b)_C = b_C ⊕ m_C, computed
/// from m directly.
fn rho_ub(model: &GroupModel) -> Result<Weight, EtaError> {
    let chi = t_character_of_subspace(model, &model.m)?;
    let mut s = model.zero_weight();
    for (w, k) in chi.terms() {
        let dot: Q = w.t.iter().zip(&model.data.t_reg).map(|(a, b)| a * b).fold(Q::zero(), |x, y| x + y);
        if dot.signum() > 0 {
            s = s.add(&w.scale(&Q::int(*k)));
        }
    }
    Ok(s.scale(&Q::new(1, 2)))
}

pub fn kostant_checks(model: &GroupModel) -> Result<KostantReport, EtaError> {
    let cf = compact_form_data(model)?;
    let n_chi = model.subspace_character(&model.n)?;
    let mut rho_n = model.zero_weight();
    for (w, k) in n_chi.terms() {
        rho_n = rho_n.add(&w.scale(&Q::int(*k)));
    }
    let rho_n = rho_n.scale(&Q::new(1, 2));
    let trace_rhs = if model.delta == 1 && model.n.cols() > 0 {
        let l = Q::int(model.ell as i64);
        -(&l * &l) * model.form.norm_sq(&model.alpha0()?)
    } else {
        -model.form.norm_sq(&rho_n)
    };
    let rho_u = model.rho_u();
    let strange_rhs = -(model.casimir_trace_eighth(&cf.u, &cf.u)? * Q::int(8)) / Q::int(24);
    Ok(KostantReport {
        trace_lhs: cf.trace_constant,
        trace_rhs,
        strange_lhs: model.form.norm_sq(&rho_u),
        strange_rhs,
        rho_rhs: rho_ub(model)?.add(&rho_n),
        rho_lhs: rho_u,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HcReport {
    pub highest_weight: Weight,
    /// Λ = λ + ρ^u.
    pub parameter: Weight,
    /// C^{g,ρ} with the −B Gram matrix (negative on nontrivial reps).
    pub casimir: Q,
    /// Ω_ρ = Σρ(X_i)ρ(X̃_i) with X̃ the B-dual basis, the normalization of the
    /// Harish-Chandra isomorphism. Computed from the matrices, not from C^{g,ρ}.
    pub omega: Q,
    /// B*(Λ,Λ) − B*(ρ^u,ρ^u).
    pub hc_value: Q,
    /// |B*(Λ,Λ) − B*(ρ^u,ρ^u) − Ω_ρ|.
    pub residual: Q,
    /// |Ω_ρ + C^{g,ρ}|: the two Casimir normalizations differ by a sign.
    pub normalization_residual: Q,
}

impl HcReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero() && self.normalization_residual.is_zero()
    }
}

pub fn hc_casimir_crosscheck(rep: &MatrixRep) -> Result<HcReport, EtaError> {
    if !is_irreducible(rep) {
        return Err(EtaError::NotIrreducible);
    }
    let model = &rep.model;
    let cas = casimir_scalar(rep).map_err(|e| EtaError::NotScalarCasimir(e.to_string()))?;
    let om = crate::group_model::casimir_of(&rep.matrices, &model.data.form)?;
    let omega = match om.as_scalar() {
        Some(s) if s.is_real() => s.re,
        _ => return Err(EtaError::NotScalarCasimir("B-dual Casimir".into())),
    };
    let chi = full_h_character(rep)?;
    let pos = model.positive_roots();
    let highest: Vec<Weight> =
        chi.terms().map(|(w, _)| w.clone()).filter(|w| pos.iter().all(|a| chi.mult(&w.add(a)) == 0)).collect();
    if highest.len() != 1 || chi.mult(&highest[0]) != 1 {
        return Err(EtaError::NotIrreducible);
    }
    let lambda = highest[0].clone();
    let rho = model.rho_u();
    let big = lambda.add(&rho);
    let hc_value = model.form.norm_sq(&big) - model.form.norm_sq(&rho);
    Ok(HcReport {
        highest_weight: lambda,
        parameter: big,
        residual: (&hc_value - &omega).abs(),
        normalization_residual: (&omega + &cas).abs(),
        casimir: cas,
        omega,
        hc_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::build_preset;
    use crate::representations::{augment_theta, build_irrep_sl2c, parse_rep_spec};

    fn sl2c_pair() -> MatrixRep {
        let m = Arc::new(build_preset("sl2c").unwrap());
        parse_rep_spec(&m, "1,0+0,1").unwrap().with_metric().unwrap()
    }

    #[test]
    fn trivial_rep_family() {
        let m = Arc::new(build_preset("sl2c").unwrap());
        let r = MatrixRep::trivial(m.clone()).with_metric().unwrap();
        let fam = compute_eta_family(&r, EtaMode::Dirac).unwrap();
        assert_eq!(fam.kernel_dim, 4);
        assert_eq!(fam.entries.len(), 3);
        let zero = m.zero_weight();
        assert_eq!(fam.eta(&zero).dim(), -2);
        // C^{u_m} on η₀ equals the trace constant, so σ vanishes at β = 0
        assert_eq!(sigma_eta(&fam, &zero), Some(Q::zero()));
        assert_eq!(fam.trace_constant, Q::int(-2));
        assert_eq!(verify_casimir_scalar_eta(&fam), Q::zero());
    }

    #[test]
    fn pair_family() {
        let r = sl2c_pair();
        let fam = compute_eta_family(&r, EtaMode::Dirac).unwrap();
        assert_eq!(verify_casimir_scalar_eta(&fam), Q::zero());
        let xs = vec![TorusElement::new(vec![0.9], vec![1.3]), TorusElement::new(vec![-0.4], vec![0.2])];
        let rep = verify_identity_530(&fam, &r, &xs).unwrap();
        assert!(rep.passed(1e-9), "{rep:?}");
        assert!(verify_localization(&fam, &r, &xs).unwrap() < 1e-10);
        let eh = compute_eta_hat(&fam).unwrap();
        let r531 = verify_identity_531(&eh, &r).unwrap();
        assert!(r531.equal && r531.w_invariant, "{r531:?}");
        for (beta, s) in &fam.sigma {
            assert_eq!(s + &fam.norm_sq(beta), -fam.c_u_rho.clone());
        }
    }

    #[test]
    fn dropping_spinor_twist_is_detected() {
        // the spinor weights carry the det(n)^{-1/2} shift by −ρ_n; undoing it
        // must break the module identity
        let r = sl2c_pair();
        let fam = compute_eta_family(&r, EtaMode::Dirac).unwrap();
        let m = &fam.model;
        let chi = full_h_character(&r).unwrap();
        let s = spinor_supercharacter(m).unwrap();
        let rhs = fam.total_character();
        assert!(s.mul(&chi).diff(&rhs).is_empty());
        let untwisted = s.shift(&m.rho_n()).mul(&chi);
        assert!(!untwisted.diff(&rhs).is_empty());
    }

    #[test]
    fn theta_required() {
        let m = Arc::new(build_preset("sl2c").unwrap());
        let r = build_irrep_sl2c(m.clone(), 1, 0).unwrap();
        assert!(matches!(compute_eta_family(&r, EtaMode::Dirac), Err(EtaError::RequiresThetaInvariant)));
        let aug = augment_theta(&r).unwrap();
        assert!(compute_eta_family(&aug, EtaMode::Dirac).is_ok());
        assert!(matches!(compute_eta_family(&aug, EtaMode::Direct), Err(EtaError::WrongBranch(_))));
    }

    #[test]
    fn direct_branch() {
        let m = Arc::new(build_preset("rline_x_su2").unwrap());
        let r = parse_rep_spec(&m, "1:1+-1:1").unwrap().with_metric().unwrap();
        let fam = compute_eta_family(&r, EtaMode::Direct).unwrap();
        assert_eq!(fam.entries.len(), 2);
        assert!(fam.eta(&m.zero_weight()).is_empty());
        assert_eq!(verify_casimir_scalar_eta(&fam), Q::zero());
        let xs = vec![TorusElement::new(vec![0.5], vec![0.7])];
        assert!(verify_identity_530(&fam, &r, &xs).unwrap().passed(1e-12));
        let eh = compute_eta_hat(&fam).unwrap();
        assert!(verify_identity_531(&eh, &r).unwrap().equal);
    }

    #[test]
    fn kostant_and_hc() {
        for name in ["sl2c", "sl2c_cubed", "su2", "sl2c_x_su2"] {
            let m = build_preset(name).unwrap();
            let k = kostant_checks(&m).unwrap();
            assert!(k.passed(), "{name}: {k:?}");
        }
        let m = Arc::new(build_preset("sl2c").unwrap());
        let r = build_irrep_sl2c(m.clone(), 1, 0).unwrap();
        let hc = hc_casimir_crosscheck(&r).unwrap();
        assert_eq!((hc.casimir.clone(), hc.omega.clone()), (Q::int(-3), Q::int(3)));
        assert!(hc.passed(), "{hc:?}");
        assert!(matches!(hc_casimir_crosscheck(&sl2c_pair()), Err(EtaError::NotIrreducible)));
    }
}
