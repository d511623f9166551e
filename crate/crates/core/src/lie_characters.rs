//! Weights on the fundamental Cartan subalgebra, virtual characters as
//! signed weight multisets, the Weyl group W(T:K), and evaluation of
//! characters at torus elements.
//!
//! A weight is stored by its values on fixed bases: `b[i]` is the value on
//! the i-th basis vector of b (for rank-one models that vector is a₀, so
//! `b[0]` is the coefficient of α₀), and `t[j]` is the eigenvalue of the
//! j-th torus generator divided by √−1. Both parts are rational so that
//! half-weights such as det(n)^{-1/2} can be represented.

use crate::exact::{C, Q};
use crate::matrix::CMat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CharacterError {
    #[error("weight dimension mismatch: expected ({eb},{et}), got ({gb},{gt})")]
    DimensionMismatch { eb: usize, et: usize, gb: usize, gt: usize },
    #[error("character is not W(T:K)-invariant; first offending weight {0}")]
    NotLiftable(String),
    #[error("exterior power of a virtual character with negative multiplicity at {0}")]
    NegativeMultiplicity(String),
    #[error("weight has non-integral torus part: {0}")]
    NonIntegral(String),
    #[error("Weyl group closure exceeded {0} elements")]
    InfiniteGroup(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub b: Vec<Q>,
    pub t: Vec<Q>,
}

impl Weight {
    pub fn new(b: Vec<Q>, t: Vec<Q>) -> Weight {
        Weight { b, t }
    }

    pub fn zero(nb: usize, nt: usize) -> Weight {
        Weight { b: vec![Q::zero(); nb], t: vec![Q::zero(); nt] }
    }

    pub fn from_ints(b: &[i64], t: &[i64]) -> Weight {
        Weight { b: b.iter().map(|&x| Q::int(x)).collect(), t: t.iter().map(|&x| Q::int(x)).collect() }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.b.len(), self.t.len())
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().all(Q::is_zero) && self.t.iter().all(Q::is_zero)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight {
            b: self.b.iter().zip(&o.b).map(|(x, y)| x + y).collect(),
            t: self.t.iter().zip(&o.t).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Weight {
        Weight { b: self.b.iter().map(|x| -x).collect(), t: self.t.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, s: &Q) -> Weight {
        Weight { b: self.b.iter().map(|x| x * s).collect(), t: self.t.iter().map(|x| x * s).collect() }
    }

    /// Torus part only (b-part zeroed), i.e. restriction to T.
    pub fn restrict_t(&self) -> Weight {
        Weight { b: vec![Q::zero(); self.b.len()], t: self.t.clone() }
    }

    /// Image under θ, which is −1 on b and +1 on t.
    pub fn theta(&self) -> Weight {
        Weight { b: self.b.iter().map(|x| -x).collect(), t: self.t.clone() }
    }

    pub fn t_integral(&self) -> bool {
        self.t.iter().all(Q::is_integer)
    }

    pub fn coords(&self) -> Vec<Q> {
        self.b.iter().chain(self.t.iter()).cloned().collect()
    }

    pub fn from_coords(nb: usize, v: &[Q]) -> Weight {
        Weight { b: v[..nb].to_vec(), t: v[nb..].to_vec() }
    }

    pub fn eval(&self, x: &TorusElement) -> Complex64 {
        let re: f64 = self.b.iter().zip(&x.a_part).map(|(b, a)| b.to_f64() * a).sum();
        let im: f64 = self.t.iter().zip(&x.t_angles).map(|(t, th)| t.to_f64() * th).sum();
        Complex64::from_polar(re.exp(), im)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        let t: Vec<String> = self.t.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", b.join(","), t.join(","))
    }
}

/// The form B* on b* ⊕ √−1·t* in weight coordinates.
///
/// `b_inv` is the inverse Gram matrix of B on the b basis and `t_inv` the
/// negated inverse Gram matrix of B on the t basis; both are positive
/// definite, and B*(w,w') = bᵀ·b_inv·b' + tᵀ·t_inv·t'.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightForm {
    pub b_inv: CMat,
    pub t_inv: CMat,
}

impl WeightForm {
    pub fn pair(&self, x: &Weight, y: &Weight) -> Q {
        let bx: Vec<C> = x.b.iter().cloned().map(C::real).collect();
        let by: Vec<C> = y.b.iter().cloned().map(C::real).collect();
        let tx: Vec<C> = x.t.iter().cloned().map(C::real).collect();
        let ty: Vec<C> = y.t.iter().cloned().map(C::real).collect();
        let mut s = C::zero();
        if !bx.is_empty() {
            s += &self.b_inv.bilinear(&bx, &by);
        }
        if !tx.is_empty() {
            s += &self.t_inv.bilinear(&tx, &ty);
        }
        s.re
    }

    pub fn norm_sq(&self, x: &Weight) -> Q {
        self.pair(x, x)
    }
}

/// Element e^a·exp(Σ θ_j T_j) of H = exp(b) × T. `a_part[i]` is the
/// coefficient of the i-th basis vector of b.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusElement {
    pub a_part: Vec<f64>,
    pub t_angles: Vec<f64>,
}

impl TorusElement {
    pub fn new(a_part: Vec<f64>, t_angles: Vec<f64>) -> TorusElement {
        TorusElement { a_part, t_angles }
    }

    pub fn is_elliptic(&self) -> bool {
        self.a_part.iter().all(|a| *a == 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VirtualCharacter {
    terms: BTreeMap<Weight, i64>,
}

impl VirtualCharacter {
    pub fn new() -> VirtualCharacter {
        VirtualCharacter { terms: BTreeMap::new() }
    }

    pub fn trivial(nb: usize, nt: usize) -> VirtualCharacter {
        VirtualCharacter::from_weight(Weight::zero(nb, nt), 1)
    }

    pub fn from_weight(w: Weight, m: i64) -> VirtualCharacter {
        let mut v = VirtualCharacter::new();
        v.insert(w, m);
        v
    }

    pub fn from_weights<I: IntoIterator<Item = Weight>>(ws: I) -> VirtualCharacter {
        let mut v = VirtualCharacter::new();
        for w in ws {
            v.insert(w, 1);
        }
        v
    }

    pub fn insert(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn mult(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Signed dimension Σ mult.
    pub fn dim(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_genuine(&self) -> bool {
        self.terms.values().all(|m| *m > 0)
    }

    pub fn add(&self, o: &VirtualCharacter) -> VirtualCharacter {
        let mut out = self.clone();
        for (w, m) in &o.terms {
            out.insert(w.clone(), *m);
        }
        out
    }

    pub fn sub(&self, o: &VirtualCharacter) -> VirtualCharacter {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> VirtualCharacter {
        self.scale(-1)
    }

    pub fn scale(&self, s: i64) -> VirtualCharacter {
        let mut out = VirtualCharacter::new();
        for (w, m) in &self.terms {
            out.insert(w.clone(), m * s);
        }
        out
    }

    /// Ring product (Minkowski sum of weights).
    pub fn mul(&self, o: &VirtualCharacter) -> VirtualCharacter {
        let mut out = VirtualCharacter::new();
        for (w1, m1) in &self.terms {
            for (w2, m2) in &o.terms {
                out.insert(w1.add(w2), m1 * m2);
            }
        }
        out
    }

    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> VirtualCharacter {
        let mut out = VirtualCharacter::new();
        for (w, m) in &self.terms {
            out.insert(f(w), *m);
        }
        out
    }

    pub fn restrict_t(&self) -> VirtualCharacter {
        self.map_weights(Weight::restrict_t)
    }

    pub fn dual(&self) -> VirtualCharacter {
        self.map_weights(Weight::neg)
    }

    pub fn shift(&self, by: &Weight) -> VirtualCharacter {
        self.map_weights(|w| w.add(by))
    }

    pub fn theta(&self) -> VirtualCharacter {
        self.map_weights(Weight::theta)
    }

    /// Sub-character of weights whose b-part equals `b`.
    pub fn b_slice(&self, b: &[Q]) -> VirtualCharacter {
        let mut out = VirtualCharacter::new();
        for (w, m) in &self.terms {
            if w.b == b {
                out.insert(w.clone(), *m);
            }
        }
        out
    }

    pub fn b_support(&self) -> BTreeSet<Vec<Q>> {
        self.terms.keys().map(|w| w.b.clone()).collect()
    }

    pub fn check_dims(&self, nb: usize, nt: usize) -> Result<(), CharacterError> {
        for w in self.terms.keys() {
            let (gb, gt) = w.dims();
            if gb != nb || gt != nt {
                return Err(CharacterError::DimensionMismatch { eb: nb, et: nt, gb, gt });
            }
        }
        Ok(())
    }

    pub fn t_integral(&self) -> bool {
        self.terms.keys().all(Weight::t_integral)
    }

    /// Weight-by-weight difference `self − o`, listed for diagnostics.
    pub fn diff(&self, o: &VirtualCharacter) -> Vec<(Weight, i64)> {
        self.sub(o).terms.into_iter().collect()
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(w, m)| format!("{m}·{w}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Σ mult(w)·w(x).
pub fn evaluate_character(chi: &VirtualCharacter, x: &TorusElement) -> Complex64 {
    chi.terms().map(|(w, m)| w.eval(x) * (*m as f64)).sum()
}

/// Λ^k of a genuine character.
pub fn exterior_power_character(chi: &VirtualCharacter, k: usize) -> Result<VirtualCharacter, CharacterError> {
    Ok(exterior_powers(chi)?.get(k).cloned().unwrap_or_default())
}

/// All exterior powers Λ⁰ … Λ^dim of a genuine character, through the
/// generating product Π_w (1 + s·e^w)^{mult(w)}.
pub fn exterior_powers(chi: &VirtualCharacter) -> Result<Vec<VirtualCharacter>, CharacterError> {
    if let Some((w, _)) = chi.terms().find(|(_, m)| **m < 0) {
        return Err(CharacterError::NegativeMultiplicity(w.to_string()));
    }
    let (nb, nt) = chi.terms().next().map(|(w, _)| w.dims()).unwrap_or((0, 0));
    let mut powers = vec![VirtualCharacter::trivial(nb, nt)];
    for (w, m) in chi.terms() {
        for _ in 0..*m {
            let mut next = powers.clone();
            next.push(VirtualCharacter::new());
            for k in 0..powers.len() {
                let shifted = powers[k].shift(w);
                next[k + 1] = next[k + 1].add(&shifted);
            }
            powers = next;
        }
    }
    Ok(powers)
}

/// Alternating sum Σ (−1)^k Λ^k.
pub fn alternating_exterior(chi: &VirtualCharacter) -> Result<VirtualCharacter, CharacterError> {
    let mut out = VirtualCharacter::new();
    for (k, l) in exterior_powers(chi)?.into_iter().enumerate() {
        out = out.add(&l.scale(if k % 2 == 0 { 1 } else { -1 }));
    }
    Ok(out)
}

/// W(T:K) acting linearly on weight coordinates (b-part then t-part).
#[derive(Clone, Debug, PartialEq)]
pub struct WeylGroupData {
    pub nb: usize,
    pub nt: usize,
    pub generators: Vec<CMat>,
    pub elements: Vec<CMat>,
    /// Positive roots of (t, k) as torus coordinates.
    pub positive_k_roots: Vec<Weight>,
    pub form: WeightForm,
}

const WEYL_LIMIT: usize = 100_000;

impl WeylGroupData {
    pub fn from_generators(
        nb: usize,
        nt: usize,
        generators: Vec<CMat>,
        positive_k_roots: Vec<Weight>,
        form: WeightForm,
    ) -> Result<WeylGroupData, CharacterError> {
        let id = CMat::identity(nb + nt);
        let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
        let key = |m: &CMat| m.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let mut elements = vec![id.clone()];
        seen.insert(key(&id));
        let mut queue = VecDeque::from(vec![id]);
        while let Some(e) = queue.pop_front() {
            for g in &generators {
                let n = g.mul(&e);
                let k = key(&n);
                if seen.insert(k) {
                    if elements.len() >= WEYL_LIMIT {
                        return Err(CharacterError::InfiniteGroup(WEYL_LIMIT));
                    }
                    elements.push(n.clone());
                    queue.push_back(n);
                }
            }
        }
        Ok(WeylGroupData { nb, nt, generators, elements, positive_k_roots, form })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn act(m: &CMat, w: &Weight) -> Weight {
        let nb = w.b.len();
        let v: Vec<C> = w.coords().into_iter().map(C::real).collect();
        let out: Vec<Q> = m.mul_vec(&v).into_iter().map(|x| x.re).collect();
        Weight::from_coords(nb, &out)
    }

    fn check(&self, w: &Weight) -> Result<(), CharacterError> {
        let (gb, gt) = w.dims();
        if gb != self.nb || gt != self.nt {
            return Err(CharacterError::DimensionMismatch { eb: self.nb, et: self.nt, gb, gt });
        }
        Ok(())
    }

    /// Determinant sign of an element on the torus coordinates.
    pub fn t_sign(&self, m: &CMat) -> i64 {
        let tb = m.block(self.nb, self.nb, self.nt, self.nt);
        let d = det(&tb);
        if d.re.signum() < 0 {
            -1
        } else {
            1
        }
    }

    /// B*-orthogonality and closure checks; returns a list of failures.
    pub fn self_check(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.nb + self.nt;
        let basis: Vec<Weight> = (0..n)
            .map(|i| {
                let mut v = vec![Q::zero(); n];
                v[i] = Q::one();
                Weight::from_coords(self.nb, &v)
            })
            .collect();
        for (k, e) in self.elements.iter().enumerate() {
            for x in &basis {
                for y in &basis {
                    if self.form.pair(&WeylGroupData::act(e, x), &WeylGroupData::act(e, y)) != self.form.pair(x, y) {
                        bad.push(format!("element {k} is not B*-orthogonal"));
                    }
                }
            }
        }
        bad.dedup();
        for g in &self.generators {
            for e in &self.elements {
                if !self.elements.contains(&g.mul(e)) {
                    bad.push("closure fails".into());
                }
            }
        }
        bad
    }
}

fn det(m: &CMat) -> C {
    let n = m.rows();
    let mut a = m.clone();
    let mut d = C::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[(r, k)].is_zero()) else {
            return C::zero();
        };
        if p != k {
            for c in 0..n {
                let t = a[(p, c)].clone();
                a[(p, c)] = a[(k, c)].clone();
                a[(k, c)] = t;
            }
            d = -d;
        }
        let piv = a[(k, k)].clone();
        d = &d * &piv;
        let inv = piv.inv();
        for r in k + 1..n {
            let f = &a[(r, k)] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let t = &a[(r, c)] - &(&f * &a[(k, c)]);
                a[(r, c)] = t;
            }
        }
    }
    d
}

/// Exact determinant over the Gaussian rationals.
pub fn determinant(m: &CMat) -> C {
    det(m)
}

pub fn weyl_orbit(w: &Weight, wg: &WeylGroupData) -> Result<BTreeSet<Weight>, CharacterError> {
    wg.check(w)?;
    Ok(wg.elements.iter().map(|e| WeylGroupData::act(e, w)).collect())
}

pub fn is_w_invariant(chi: &VirtualCharacter, wg: &WeylGroupData) -> bool {
    if chi.check_dims(wg.nb, wg.nt).is_err() {
        return false;
    }
    wg.generators.iter().all(|g| chi.map_weights(|w| WeylGroupData::act(g, w)) == *chi)
}

/// A T-character certified to lie in the image of R(K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RkCharacter {
    pub character: VirtualCharacter,
}

/// The lift from R(T)^W to R(K): certification of W(T:K)-invariance of an
/// integral torus character.
pub fn lift_to_rk(chi_on_t: &VirtualCharacter, wg: &WeylGroupData) -> Result<RkCharacter, CharacterError> {
    chi_on_t.check_dims(wg.nb, wg.nt)?;
    if let Some((w, _)) = chi_on_t.terms().find(|(w, _)| !w.t_integral()) {
        return Err(CharacterError::NonIntegral(w.to_string()));
    }
    for g in &wg.generators {
        let moved = chi_on_t.map_weights(|w| WeylGroupData::act(g, w));
        if moved != *chi_on_t {
            let d = moved.diff(chi_on_t);
            return Err(CharacterError::NotLiftable(d.first().map(|x| x.0.to_string()).unwrap_or_default()));
        }
    }
    Ok(RkCharacter { character: chi_on_t.clone() })
}

impl RkCharacter {
    /// Multiplicities of K-irreducibles by highest weight, from the
    /// identity χ·Δ = Σ n_λ·Σ_w sign(w) e^{w(λ+ρ)} with Δ the Weyl
    /// denominator: n_λ = Σ_w sign(w)·mult(λ + ρ − wρ) for dominant λ.
    pub fn irreducible_decomposition(&self, wg: &WeylGroupData) -> Vec<(Weight, i64)> {
        let nb = wg.nb;
        let nt = wg.nt;
        let mut rho = Weight::zero(nb, nt);
        for a in &wg.positive_k_roots {
            rho = rho.add(&a.scale(&Q::new(1, 2)));
        }
        let dominant = |w: &Weight| wg.positive_k_roots.iter().all(|a| wg.form.pair(w, a).signum() >= 0);
        let mut out = Vec::new();
        for (lam, _) in self.character.terms() {
            if !dominant(lam) {
                continue;
            }
            let mut n = 0i64;
            for e in &wg.elements {
                let wr = WeylGroupData::act(e, &rho);
                n += wg.t_sign(e) * self.character.mult(&lam.add(&rho).sub(&wr));
            }
            if n != 0 {
                out.push((lam.clone(), n));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn flip_group() -> WeylGroupData {
        let g = CMat::diag(&[C::int(-1), C::int(-1)]);
        let form = WeightForm { b_inv: CMat::diag(&[C::int(2)]), t_inv: CMat::diag(&[C::real(q(1, 2))]) };
        WeylGroupData::from_generators(1, 1, vec![g], vec![Weight::from_ints(&[0], &[2])], form).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let w = flip_group();
        assert_eq!(w.order(), 2);
        assert!(w.self_check().is_empty());
        let o = weyl_orbit(&Weight::from_ints(&[0], &[1]), &w).unwrap();
        assert_eq!(o.len(), 2);
        assert!(o.contains(&Weight::from_ints(&[0], &[-1])));
        assert_eq!(weyl_orbit(&Weight::zero(1, 1), &w).unwrap().len(), 1);
        assert!(weyl_orbit(&Weight::zero(2, 1), &w).is_err());
    }

    #[test]
    fn invariance_and_lift() {
        let w = flip_group();
        assert!(is_w_invariant(&VirtualCharacter::new(), &w));
        let single = VirtualCharacter::from_weight(Weight::from_ints(&[0], &[1]), 1);
        assert!(!is_w_invariant(&single, &w));
        assert!(matches!(lift_to_rk(&single, &w), Err(CharacterError::NotLiftable(_))));
        let orbit = VirtualCharacter::from_weights(weyl_orbit(&Weight::from_ints(&[0], &[1]), &w).unwrap());
        assert!(is_w_invariant(&orbit, &w));
        let lifted = lift_to_rk(&orbit, &w).unwrap();
        assert_eq!(lifted.irreducible_decomposition(&w), vec![(Weight::from_ints(&[0], &[1]), 1)]);
    }

    #[test]
    fn highest_weight_subtraction_on_spin_one() {
        let w = flip_group();
        // weights 2, 0, -2 plus an extra 0: spin-one plus trivial.
        let chi = VirtualCharacter::from_weights(
            [2, 0, -2, 0].iter().map(|&n| Weight::from_ints(&[0], &[n])),
        );
        let mut dec = lift_to_rk(&chi, &w).unwrap().irreducible_decomposition(&w);
        dec.sort();
        assert_eq!(dec, vec![(Weight::from_ints(&[0], &[0]), 1), (Weight::from_ints(&[0], &[2]), 1)]);
    }

    #[test]
    fn exterior_examples() {
        let chi = VirtualCharacter::from_weights([Weight::from_ints(&[0], &[1]), Weight::from_ints(&[0], &[3])]);
        assert_eq!(exterior_power_character(&chi, 0).unwrap(), VirtualCharacter::trivial(1, 1));
        assert_eq!(
            exterior_power_character(&chi, 2).unwrap(),
            VirtualCharacter::from_weight(Weight::from_ints(&[0], &[4]), 1)
        );
        assert!(exterior_power_character(&chi, 3).unwrap().is_empty());
        assert!(matches!(exterior_power_character(&chi.neg(), 1), Err(CharacterError::NegativeMultiplicity(_))));
    }

    #[test]
    fn evaluation_examples() {
        let x = TorusElement::new(vec![0.3], vec![0.7]);
        assert_eq!(evaluate_character(&VirtualCharacter::new(), &x), Complex64::new(0.0, 0.0));
        assert!((evaluate_character(&VirtualCharacter::trivial(1, 1), &x) - 1.0).norm() < 1e-15);
        let chi = VirtualCharacter::from_weights([Weight::from_ints(&[0], &[1]), Weight::from_ints(&[0], &[-1])]);
        assert!((evaluate_character(&chi, &x) - 2.0 * 0.7f64.cos()).norm() < 1e-14);
    }

    fn arb_char() -> impl Strategy<Value = VirtualCharacter> {
        prop::collection::vec(((-3i64..4), (-4i64..5), (1i64..3)), 0..5).prop_map(|v| {
            let mut c = VirtualCharacter::new();
            for (b, t, m) in v {
                c.insert(Weight::new(vec![q(b, 2)], vec![Q::int(t)]), m);
            }
            c
        })
    }

    proptest! {
        #[test]
        fn alternating_exterior_is_determinant(chi in arb_char(), a in -1.0f64..1.0, th in -3.0f64..3.0) {
            let x = TorusElement::new(vec![a], vec![th]);
            let lhs = evaluate_character(&alternating_exterior(&chi).unwrap(), &x);
            let mut rhs = Complex64::new(1.0, 0.0);
            for (w, m) in chi.terms() {
                for _ in 0..*m { rhs *= Complex64::new(1.0, 0.0) - w.eval(&x); }
            }
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        }

        #[test]
        fn evaluation_is_ring_hom(c1 in arb_char(), c2 in arb_char(), a in -1.0f64..1.0, th in -3.0f64..3.0) {
            let x = TorusElement::new(vec![a], vec![th]);
            let e1 = evaluate_character(&c1, &x);
            let e2 = evaluate_character(&c2, &x);
            let s = evaluate_character(&c1.add(&c2), &x);
            let p = evaluate_character(&c1.mul(&c2), &x);
            prop_assert!((s - (e1 + e2)).norm() <= 1e-9 * (1.0 + s.norm()));
            prop_assert!((p - e1 * e2).norm() <= 1e-9 * (1.0 + p.norm()));
        }

        #[test]
        fn orbits_partition(b1 in -3i64..4, t1 in -4i64..5, b2 in -3i64..4, t2 in -4i64..5) {
            let w = flip_group();
            let o1 = weyl_orbit(&Weight::from_ints(&[b1], &[t1]), &w).unwrap();
            let o2 = weyl_orbit(&Weight::from_ints(&[b2], &[t2]), &w).unwrap();
            prop_assert!(o1 == o2 || o1.is_disjoint(&o2));
        }
    }
}
