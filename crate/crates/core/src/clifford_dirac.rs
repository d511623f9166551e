//! Clifford modules over Gaussian rationals, spin lifts, Dirac operators on
//! S⊗E and the quadratic identities they satisfy.
//!
//! A Clifford module is built on an orthogonal basis f_i of a real space
//! with positive form q, with c(f_i)c(f_j) + c(f_j)c(f_i) = −2q(f_i,f_j).
//! Generators are grouped in pairs; for a pair with norms (q_a, q_b) we use
//! A = [[0,−q_a],[1,0]] and B = [[0,q_a·y],[y,0]] with y² = −q_b/q_a, so
//! all entries stay in Q(i) as long as q_b/q_a is a rational square.

use crate::exact::{C, Q};
use crate::group_model::{ad_determinant_factor, character_of, compact_form_data, GroupModel, ModelError};
use crate::lie_characters::{evaluate_character, exterior_powers, TorusElement, VirtualCharacter, Weight};
use crate::matrix::{coordinates, joint_eigenspaces, orthogonalize, CMat, LinalgError};
use crate::representations::{casimir_matrix, casimir_matrix_u, MatrixRep, RepError};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CliffordError {
    #[error("odd-dimensional space (dim {0}) has no spinor module without an auxiliary generator")]
    OddDimension(usize),
    #[error("norm ratio {0} is not a rational square; gamma matrices would leave Q(i)")]
    IrrationalRatio(String),
    #[error("form is not positive definite on the generating space")]
    NotPositive,
    #[error("element does not stabilize the generating space")]
    NotStabilizing,
    #[error("Clifford module and representation do not match: {0}")]
    BasisMismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which space the Clifford module is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinorPath {
    /// (p, B); the module is doubled by an auxiliary generator when dim p is odd.
    P,
    /// (u⊥(b), −B) with u⊥(b) = √−1·p⊥ ⊕ k⊥.
    UPerp,
    /// An arbitrary space supplied by the caller.
    Custom,
}

#[derive(Clone, Debug)]
pub struct CliffordModule {
    pub path: SpinorPath,
    /// Orthogonal basis of the generating space (model coordinates).
    pub space: CMat,
    pub norms: Vec<Q>,
    pub gammas: Vec<CMat>,
    pub aux_gamma: Option<CMat>,
    pub chirality: CMat,
    /// Hermitian metric for which every gamma is skew-adjoint.
    pub metric: CMat,
}

fn z2() -> CMat {
    CMat::diag(&[C::one(), C::int(-1)])
}

fn chain(factors: &[CMat]) -> CMat {
    let mut out = CMat::identity(1);
    for f in factors {
        out = out.kron(f);
    }
    out
}

/// Gamma matrices for a list of positive norms; an odd count gets an extra
/// generator with the same norm as the last one.
fn gamma_matrices(norms: &[Q], allow_aux: bool) -> Result<(Vec<CMat>, Option<CMat>, CMat, CMat), CliffordError> {
    let n = norms.len();
    if n % 2 == 1 && !allow_aux {
        return Err(CliffordError::OddDimension(n));
    }
    let mut all = norms.to_vec();
    if n % 2 == 1 {
        all.push(norms[n - 1].clone());
    }
    let pairs = all.len() / 2;
    let mut gammas = Vec::new();
    let mut metric_factors = Vec::new();
    for k in 0..pairs {
        let qa = &all[2 * k];
        let qb = &all[2 * k + 1];
        let ratio = qb / qa;
        let s = ratio.sqrt_exact().ok_or_else(|| CliffordError::IrrationalRatio(ratio.to_string()))?;
        let y = C::new(Q::zero(), s);
        let a = CMat::from_rows(vec![vec![C::zero(), C::real(-qa.clone())], vec![C::one(), C::zero()]]);
        let b = CMat::from_rows(vec![vec![C::zero(), y.scale(qa)], vec![y, C::zero()]]);
        for x in [a, b] {
            let mut f: Vec<CMat> = (0..k).map(|_| z2()).collect();
            f.push(x);
            f.extend((k + 1..pairs).map(|_| CMat::identity(2)));
            gammas.push(chain(&f));
        }
        metric_factors.push(CMat::diag(&[C::one(), C::real(qa.clone())]));
    }
    let tau = chain(&vec![z2(); pairs]);
    let metric = chain(&metric_factors);
    let aux = if n % 2 == 1 { gammas.pop() } else { None };
    Ok((gammas, aux, tau, metric))
}

/// Clifford module on the span of `space` for the positive form `form`
/// (given on model coordinates).
pub fn build_clifford_module(space: &CMat, form: &CMat, allow_aux: bool) -> Result<CliffordModule, CliffordError> {
    if space.cols() == 0 {
        return Ok(CliffordModule {
            path: SpinorPath::Custom,
            space: space.clone(),
            norms: vec![],
            gammas: vec![],
            aux_gamma: None,
            chirality: CMat::identity(1),
            metric: CMat::identity(1),
        });
    }
    let (basis, norms) = orthogonalize(space, form)?;
    let mut qn = Vec::new();
    for n in norms {
        if !n.is_real() || n.re.signum() <= 0 {
            return Err(CliffordError::NotPositive);
        }
        qn.push(n.re);
    }
    let (gammas, aux_gamma, chirality, metric) = gamma_matrices(&qn, allow_aux)?;
    Ok(CliffordModule { path: SpinorPath::Custom, space: basis, norms: qn, gammas, aux_gamma, chirality, metric })
}

/// Spinor module of an even-dimensional space.
pub fn build_spinor(space: &CMat, form: &CMat) -> Result<CliffordModule, CliffordError> {
    build_clifford_module(space, form, false)
}

impl CliffordModule {
    pub fn dim_space(&self) -> usize {
        self.gammas.len()
    }

    pub fn spinor_dim(&self) -> usize {
        self.chirality.rows()
    }

    /// c(v) for coefficients in the orthogonal basis.
    pub fn c_coeffs(&self, x: &[C]) -> CMat {
        let d = self.spinor_dim();
        let mut out = CMat::zeros(d, d);
        for (g, c) in self.gammas.iter().zip(x) {
            if !c.is_zero() {
                out.axpy(c, g);
            }
        }
        out
    }

    /// c(v) for v in model coordinates; v must lie in the generating space.
    pub fn c_of(&self, v: &[C]) -> Result<CMat, CliffordError> {
        let x = coordinates(&self.space, &CMat::column_vector(v)).map_err(|_| CliffordError::NotStabilizing)?;
        Ok(self.c_coeffs(&x.col(0)))
    }

    /// Clifford relations, chirality and metric compatibility, exactly.
    pub fn check_relations(&self) -> bool {
        let d = self.spinor_dim();
        let mut all: Vec<(CMat, Q)> = self.gammas.iter().cloned().zip(self.norms.iter().cloned()).collect();
        if let Some(a) = &self.aux_gamma {
            all.push((a.clone(), self.norms.last().cloned().unwrap_or_else(Q::one)));
        }
        for (i, (gi, qi)) in all.iter().enumerate() {
            for (j, (gj, _)) in all.iter().enumerate() {
                let ac = gi.anticommutator(gj);
                let expect = if i == j { CMat::scalar(d, &C::real(Q::int(-2) * qi.clone())) } else { CMat::zeros(d, d) };
                if ac != expect {
                    return false;
                }
            }
            if !self.chirality.anticommutator(gi).is_zero() {
                return false;
            }
            if self.metric.mul(gi) != gi.adjoint().mul(&self.metric).neg() {
                return false;
            }
        }
        self.chirality.mul(&self.chirality).is_identity()
    }
}

/// Spin lift c̃(a) = ¼·Σ_i c(f_i)·c([a,f_i])/q_i of an element preserving
/// the generating space; satisfies [c̃(a), c(v)] = c([a,v]).
pub fn k_spinor_action(cm: &CliffordModule, model: &GroupModel, a: &[C]) -> Result<CMat, CliffordError> {
    let d = cm.spinor_dim();
    let mut out = CMat::zeros(d, d);
    if cm.dim_space() == 0 {
        return Ok(out);
    }
    let ad = model.ad_of(a);
    let images = ad.mul(&cm.space);
    let coords = coordinates(&cm.space, &images).map_err(|_| CliffordError::NotStabilizing)?;
    let quarter = Q::new(1, 4);
    for i in 0..cm.dim_space() {
        let c_img = cm.c_coeffs(&coords.col(i));
        let s = C::real(&quarter / &cm.norms[i]);
        out.axpy(&s, &cm.gammas[i].mul(&c_img));
    }
    Ok(out)
}

/// Clifford module on (p, B), doubled when dim p is odd.
pub fn p_clifford(model: &GroupModel) -> Result<CliffordModule, CliffordError> {
    let mut cm = build_clifford_module(&model.p, &model.data.form, true)?;
    cm.path = SpinorPath::P;
    Ok(cm)
}

/// The spinor S^{u⊥(b)} of (u⊥(b), −B), with chirality oriented so that the
/// line of weight −ρ_n (the Λ⁰ piece) is even.
pub fn uperp_clifford(model: &GroupModel) -> Result<CliffordModule, CliffordError> {
    let cf = compact_form_data(model)?;
    let mut cm = build_spinor(&cf.u_perp, &model.data.form.neg())?;
    cm.path = SpinorPath::UPerp;
    if cm.dim_space() > 0 {
        let parts = spinor_weight_spaces(&cm, model)?;
        let low = model.rho_n().neg();
        if let Some((_, sp)) = parts.iter().find(|(w, _)| *w == low) {
            let v = sp.col(0);
            let tv = cm.chirality.mul_vec(&v);
            if tv != v {
                cm.chirality = cm.chirality.neg();
            }
        }
    }
    Ok(cm)
}

/// Basis of u(b) = √−1·b ⊕ k_m.
pub fn u_b_basis(model: &GroupModel) -> CMat {
    CMat::hstack(&[&model.b.mul_i(), &model.k_m])
}

/// Operators on S whose joint eigenvalues are the (b ⊕ t)-weights: a ∈ b
/// acts by −√−1·c̃(√−1·a), T ∈ t by −√−1·c̃(T) after the usual rotation.
fn spinor_h_ops(cm: &CliffordModule, model: &GroupModel) -> Result<Vec<CMat>, CliffordError> {
    let mut ops = Vec::new();
    for j in 0..model.b.cols() {
        let ja: Vec<C> = model.b.col(j).iter().map(C::mul_i).collect();
        ops.push(k_spinor_action(cm, model, &ja)?.mul_i().neg());
    }
    for j in 0..model.t.cols() {
        ops.push(k_spinor_action(cm, model, &model.t.col(j))?.mul_i().neg());
    }
    Ok(ops)
}

fn spinor_weight_spaces(cm: &CliffordModule, model: &GroupModel) -> Result<Vec<(Weight, CMat)>, CliffordError> {
    let ops = spinor_h_ops(cm, model)?;
    let id = CMat::identity(cm.spinor_dim());
    if ops.is_empty() {
        return Ok(vec![(model.zero_weight(), id)]);
    }
    let parts = joint_eigenspaces(&ops, &id)?;
    Ok(parts.into_iter().map(|(v, s)| (Weight::from_coords(model.delta, &v), s)).collect())
}

/// Characters of S⁺ and S⁻ as (b ⊕ m, K_M)-modules.
pub fn spinor_b_m_characters(
    cm: &CliffordModule,
    model: &GroupModel,
) -> Result<(VirtualCharacter, VirtualCharacter), CliffordError> {
    if model.delta != 1 {
        return Err(ModelError::NotRankOne(model.delta).into());
    }
    let parts = spinor_weight_spaces(cm, model)?;
    let mut plus = VirtualCharacter::new();
    let mut minus = VirtualCharacter::new();
    let d = cm.spinor_dim();
    let ptau = CMat::identity(d).add(&cm.chirality).scale(&C::real(Q::new(1, 2)));
    for (w, sp) in parts {
        let up = crate::matrix::rank(&ptau.mul(&sp));
        plus.insert(w.clone(), up as i64);
        minus.insert(w, (sp.cols() - up) as i64);
    }
    Ok((plus, minus))
}

/// Outcome of the exact spinor decomposition checks.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorDecompositionCheck {
    /// S⁺ ⊕ S⁻ = Λ*(n̄*) ⊗ det(n)^{−1/2}.
    pub total: bool,
    /// S± = Λ^{even/odd}(n̄*) ⊗ det(n)^{−1/2}.
    pub parity: bool,
    /// The slice of S at b-weight j·α₀ restricted to T is Λ^{ℓ−j}(n*).
    pub graded: bool,
    /// Λ^{ℓ−j}(n*) = Λ^{ℓ+j}(n*) on T.
    pub symmetric: bool,
    pub dim_plus: usize,
    pub dim_minus: usize,
}

impl SpinorDecompositionCheck {
    pub fn passed(&self) -> bool {
        self.total && self.parity && self.graded && self.symmetric
    }
}

pub fn spinor_decomposition_check(model: &GroupModel) -> Result<SpinorDecompositionCheck, CliffordError> {
    let cm = uperp_clifford(model)?;
    let (plus, minus) = spinor_b_m_characters(&cm, model)?;
    let nbar_dual = model.subspace_character(&model.nbar)?.dual();
    let n_dual = model.subspace_character(&model.n)?.dual();
    let twist = model.rho_n().neg();
    let lam = exterior_powers(&nbar_dual).map_err(ModelError::from)?;
    let mut even = VirtualCharacter::new();
    let mut odd = VirtualCharacter::new();
    for (k, l) in lam.iter().enumerate() {
        let s = l.shift(&twist);
        if k % 2 == 0 {
            even = even.add(&s);
        } else {
            odd = odd.add(&s);
        }
    }
    let total = plus.add(&minus) == even.add(&odd);
    let parity = plus == even && minus == odd;
    let eta = exterior_powers(&n_dual.restrict_t()).map_err(ModelError::from)?;
    let ell = model.ell as i64;
    let s_all = plus.add(&minus);
    let mut graded = true;
    let mut symmetric = true;
    for j in -ell..=ell {
        let slice = s_all.b_slice(&[Q::int(j)]).restrict_t();
        let e = eta.get((ell - j) as usize).cloned().unwrap_or_default();
        if slice != e {
            graded = false;
        }
        if eta.get((ell + j) as usize).cloned().unwrap_or_default() != e {
            symmetric = false;
        }
    }
    Ok(SpinorDecompositionCheck {
        total,
        parity,
        graded,
        symmetric,
        dim_plus: plus.dim() as usize,
        dim_minus: minus.dim() as usize,
    })
}

/// |Tr_s^S[x] − |det(1 − Ad(x))|_{u⊥(b)}|^{1/2}|.
pub fn supertrace_determinant_check(
    cm: &CliffordModule,
    model: &GroupModel,
    x: &TorusElement,
) -> Result<f64, CliffordError> {
    let det = ad_determinant_factor(model, x)?;
    if cm.dim_space() == 0 {
        return Ok((1.0 - det).abs());
    }
    let (plus, minus) = spinor_b_m_characters(cm, model)?;
    let ts = evaluate_character(&plus.sub(&minus), x);
    Ok((ts - Complex64::new(det, 0.0)).norm())
}

/// Assembled Dirac operator on S⊗E (Kronecker order: spinor first).
#[derive(Clone, Debug)]
pub struct DiracData {
    pub rep: MatrixRep,
    pub clifford: CliffordModule,
    pub d: CMat,
    /// Basis of the subalgebra acting diagonally (k or u(b)).
    pub sub: CMat,
    /// Its action c̃(x)⊗1 + 1⊗ρ(x) on S⊗E.
    pub sub_action: Vec<CMat>,
    pub chirality: CMat,
    pub metric: CMat,
}

pub fn dirac_operator(rep: &MatrixRep, cm: &CliffordModule) -> Result<DiracData, CliffordError> {
    let model = rep.model.clone();
    let e_metric = rep.metric.clone().ok_or(RepError::RequiresAdmissibleMetric)?;
    let sub = match cm.path {
        SpinorPath::P => {
            if !crate::matrix::span_eq(&cm.space, &model.p) {
                return Err(CliffordError::BasisMismatch("module is not built on p".into()));
            }
            model.k.clone()
        }
        SpinorPath::UPerp => u_b_basis(&model),
        SpinorPath::Custom => return Err(CliffordError::BasisMismatch("custom module has no Dirac path".into())),
    };
    let ds = cm.spinor_dim();
    let de = rep.dim();
    let ie = CMat::identity(de);
    let is = CMat::identity(ds);
    let mut d = CMat::zeros(ds * de, ds * de);
    for i in 0..cm.dim_space() {
        let f = cm.space.col(i);
        let r = rep.of(&f).scale(&C::real(cm.norms[i].recip()));
        d.add_assign(&cm.gammas[i].kron(&r));
    }
    let mut sub_action = Vec::new();
    for j in 0..sub.cols() {
        let x = sub.col(j);
        let s = k_spinor_action(cm, &model, &x)?;
        sub_action.push(s.kron(&ie).add(&is.kron(&rep.of(&x))));
    }
    let chirality = cm.chirality.kron(&ie);
    let metric = cm.metric.kron(&e_metric);
    Ok(DiracData { rep: rep.clone(), clifford: cm.clone(), d, sub, sub_action, chirality, metric })
}

impl DiracData {
    pub fn is_odd(&self) -> bool {
        self.d.mul(&self.chirality).add(&self.chirality.mul(&self.d)).is_zero()
    }

    /// Self-adjointness (sign +1) or skew-adjointness (sign −1) for the
    /// product metric.
    pub fn adjointness(&self) -> Option<i64> {
        let lhs = self.metric.mul(&self.d);
        let rhs = self.d.adjoint().mul(&self.metric);
        if lhs == rhs {
            Some(1)
        } else if lhs == rhs.neg() {
            Some(-1)
        } else {
            None
        }
    }

    /// Casimir of the diagonal subalgebra on S⊗E.
    pub fn sub_casimir(&self) -> Result<CMat, CliffordError> {
        let m = &self.rep.model;
        Ok(m.casimir(&self.sub, &self.sub_action)?)
    }

    /// Both sides of the quadratic identity:
    /// p-path:  D² = C^{g,V} + (1/8)Tr[C^{k,p}] − C^{k,S⊗V};
    /// u⊥-path: −D² = C^{u,ρ} + (1/8)Tr[C^{u(b),u⊥(b)}] − C^{u(b),S⊗E}.
    pub fn parthasarathy_sides(&self) -> Result<(CMat, CMat), CliffordError> {
        let m = &self.rep.model;
        let is = CMat::identity(self.clifford.spinor_dim());
        let n = self.d.rows();
        let d2 = self.d.mul(&self.d);
        let (lhs, cas, tc) = match self.clifford.path {
            SpinorPath::P => (d2, casimir_matrix(&self.rep)?, m.casimir_trace_eighth(&m.k, &m.p)?),
            _ => (d2.neg(), casimir_matrix_u(&self.rep)?, compact_form_data(m)?.trace_constant),
        };
        let rhs = is.kron(&cas).add(&CMat::scalar(n, &C::real(tc))).sub(&self.sub_casimir()?);
        Ok((lhs, rhs))
    }
}

/// Max entry of |LHS − RHS| of the quadratic identity; exactly 0.0 when
/// the identity holds exactly.
pub fn verify_parthasarathy(dd: &DiracData) -> Result<f64, CliffordError> {
    let (l, r) = dd.parthasarathy_sides()?;
    Ok(if l == r { 0.0 } else { l.sub(&r).max_abs().max(f64::MIN_POSITIVE) })
}

fn to_na(m: &CMat) -> DMatrix<Complex64> {
    m.to_nalgebra()
}

/// Action of x = e^a·exp(Σθ_j T_j) on S⊗E as a float matrix.
pub fn torus_action(dd: &DiracData, x: &TorusElement) -> Result<DMatrix<Complex64>, CliffordError> {
    let m = &dd.rep.model;
    let cm = &dd.clifford;
    let ie = CMat::identity(dd.rep.dim());
    let is = CMat::identity(cm.spinor_dim());
    let n = dd.d.rows();
    let mut gen = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..m.b.cols() {
        let a = m.b.col(j);
        let ja: Vec<C> = a.iter().map(C::mul_i).collect();
        let s = k_spinor_action(cm, m, &ja)?.mul_i().neg();
        let op = s.kron(&ie).add(&is.kron(&dd.rep.of(&a)));
        gen += to_na(&op) * Complex64::new(x.a_part[j], 0.0);
    }
    for j in 0..m.t.cols() {
        let t = m.t.col(j);
        let s = k_spinor_action(cm, m, &t)?;
        let op = s.kron(&ie).add(&is.kron(&dd.rep.of(&t)));
        gen += to_na(&op) * Complex64::new(x.t_angles[j], 0.0);
    }
    Ok(gen.exp())
}

/// |Tr_s[x·exp(−t₁D²)] − Tr_s[x·exp(−t₂D²)]|.
pub fn mckean_singer_check(dd: &DiracData, x: &TorusElement, t1: f64, t2: f64) -> Result<f64, CliffordError> {
    let g = torus_action(dd, x)?;
    let tau = to_na(&dd.chirality);
    let d2 = to_na(&dd.d.mul(&dd.d));
    let st = |t: f64| -> Complex64 {
        let heat = (d2.clone() * Complex64::new(-t, 0.0)).exp();
        (&tau * &g * heat).trace()
    };
    Ok((st(t1) - st(t2)).norm())
}

/// Supertrace of x on all of S⊗E (float).
pub fn supertrace_full(dd: &DiracData, x: &TorusElement) -> Result<Complex64, CliffordError> {
    let g = torus_action(dd, x)?;
    Ok((to_na(&dd.chirality) * g).trace())
}

/// T-character of S (b-part kept), for diagnostics.
pub fn spinor_character(cm: &CliffordModule, model: &GroupModel) -> Result<VirtualCharacter, CliffordError> {
    Ok(character_of(&spinor_weight_spaces(cm, model)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::build_preset;
    use crate::representations::build_irrep_sl2c;
    use std::sync::Arc;

    #[test]
    fn small_modules() {
        let form = CMat::identity(2);
        let cm = build_spinor(&CMat::identity(2), &form).unwrap();
        assert_eq!((cm.dim_space(), cm.spinor_dim()), (2, 2));
        assert!(cm.check_relations());
        let z = build_spinor(&CMat::zeros(3, 0), &CMat::identity(3)).unwrap();
        assert_eq!(z.spinor_dim(), 1);
        assert!(matches!(build_spinor(&CMat::identity(3), &CMat::identity(3)), Err(CliffordError::OddDimension(3))));
        let two = CMat::diag(&[C::int(1), C::int(2)]);
        assert!(matches!(build_spinor(&CMat::identity(2), &two), Err(CliffordError::IrrationalRatio(_))));
    }

    #[test]
    fn sl2c_modules() {
        let m = build_preset("sl2c").unwrap();
        let u = uperp_clifford(&m).unwrap();
        assert_eq!((u.dim_space(), u.spinor_dim()), (4, 4));
        assert!(u.check_relations());
        let tr = u.chirality.trace();
        assert_eq!(tr, C::zero());
        let p = p_clifford(&m).unwrap();
        assert!(p.check_relations());
        assert!(p.aux_gamma.is_some());
        // representation property of the spin lift on u(b)
        let ub = u_b_basis(&m);
        let acts: Vec<CMat> = (0..ub.cols()).map(|j| k_spinor_action(&u, &m, &ub.col(j)).unwrap()).collect();
        for i in 0..ub.cols() {
            for j in 0..ub.cols() {
                let br = m.bracket(&ub.col(i), &ub.col(j));
                assert_eq!(acts[i].commutator(&acts[j]), k_spinor_action(&u, &m, &br).unwrap());
            }
        }
    }

    #[test]
    fn parthasarathy_small() {
        let m = Arc::new(build_preset("sl2c").unwrap());
        for (p, q) in [(0, 0), (1, 0), (1, 1)] {
            let r = build_irrep_sl2c(m.clone(), p, q).unwrap().with_metric().unwrap();
            for cm in [p_clifford(&m).unwrap(), uperp_clifford(&m).unwrap()] {
                let dd = dirac_operator(&r, &cm).unwrap();
                assert!(dd.is_odd());
                assert_eq!(verify_parthasarathy(&dd).unwrap(), 0.0, "V({p},{q}) {:?}", cm.path);
            }
        }
    }

    #[test]
    fn spinor_decomposition_sl2c() {
        let m = build_preset("sl2c").unwrap();
        let chk = spinor_decomposition_check(&m).unwrap();
        assert!(chk.passed(), "{chk:?}");
        assert_eq!((chk.dim_plus, chk.dim_minus), (2, 2));
        let u = uperp_clifford(&m).unwrap();
        let x = TorusElement::new(vec![0.7], vec![0.4]);
        assert!(supertrace_determinant_check(&u, &m, &x).unwrap() < 1e-12);
        let expect = 2.0 * 0.7f64.cosh() - 2.0 * 0.8f64.cos();
        let (plus, minus) = spinor_b_m_characters(&u, &m).unwrap();
        assert!((evaluate_character(&plus.sub(&minus), &x).re - expect).abs() < 1e-12);
    }
}
