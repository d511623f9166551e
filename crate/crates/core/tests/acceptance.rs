//! Acceptance suite: twelve criteria, one PASS/FAIL line each. Exits with a
//! nonzero status if any criterion fails.

use friedlab_core::clifford_dirac::{
    dirac_operator, p_clifford, spinor_decomposition_check, supertrace_determinant_check, uperp_clifford, verify_parthasarathy,
};
use friedlab_core::eta_pipeline::{
    compute_eta_family, compute_eta_hat, hc_casimir_crosscheck, kostant_checks, verify_casimir_scalar_eta, verify_identity_530,
    verify_identity_531, EtaFamily, EtaMode,
};
use friedlab_core::exact::{C, Q};
use friedlab_core::group_model::{ad_determinant_factor, build_preset, corrupt, preset_data, validate_model, Corruption, GroupModel};
use friedlab_core::lattice_data::{enumerate_words, loxodromic_words, synthesize_classes, SynthSpec};
use friedlab_core::lie_characters::TorusElement;
use friedlab_core::matrix::{nullspace, CMat};
use friedlab_core::representations::{augment_theta, build_irrep_sl2c, full_h_character, parse_rep_spec, MatrixRep};
use friedlab_core::zeta_engine::{
    conjugation_symmetry_check, eta_hat_table_from_cohomology, factorization_check, graded_determinant, leading_constants,
    ruelle_log_series, selberg_zero_predictions, torsion_leading_term, torsion_series, SpectrumTable, ZeroPrediction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn samples(seed: u64, n: usize, nt: usize) -> Vec<TorusElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a: f64 = rng.gen_range(0.05..2.5);
            let s = if rng.gen_bool(0.5) { a } else { -a };
            let th = (0..nt).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
            TorusElement::new(vec![s], th)
        })
        .collect()
}

fn sl2c() -> Arc<GroupModel> {
    Arc::new(build_preset("sl2c").expect("sl2c preset"))
}

fn pair_rep(m: &Arc<GroupModel>) -> Result<MatrixRep, String> {
    parse_rep_spec(m, "1,0+0,1").and_then(|r| r.with_metric()).map_err(e2s)
}

fn pair_family(m: &Arc<GroupModel>) -> Result<(MatrixRep, EtaFamily), String> {
    let r = pair_rep(m)?;
    let fam = compute_eta_family(&r, EtaMode::Dirac).map_err(e2s)?;
    Ok((r, fam))
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let presets = ["sl2c", "sl2r", "su2", "sl2c_cubed", "rline_x_su2"];
    let mut checks = 0;
    for name in presets {
        let data = preset_data(name).map_err(e2s)?;
        let rep = validate_model(&data);
        ensure(rep.all_passed(), format!("{name}: {:?}", rep.failures()))?;
        checks += rep.checks.len();
        build_preset(name).map_err(e2s)?;
        for c in Corruption::ALL {
            let bad = validate_model(&corrupt(&data, c));
            ensure(!bad.all_passed(), format!("{name}: corruption {c:?} not detected"))?;
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt < 5.0, format!("runtime {dt:.2}s exceeds 5s"))?;
    Ok(format!("{} presets, {checks} exact checks, {} corruptions each detected, {dt:.2}s", presets.len(), Corruption::ALL.len()))
}

fn criterion_2() -> Outcome {
    let t0 = Instant::now();
    let m = sl2c();
    let cp = p_clifford(&m).map_err(e2s)?;
    let cu = uperp_clifford(&m).map_err(e2s)?;
    let mut n = 0;
    for p in 0..=2 {
        for q in 0..=2 {
            let base = build_irrep_sl2c(m.clone(), p, q).map_err(e2s)?;
            let aug = augment_theta(&base).map_err(e2s)?;
            for r in [base, aug] {
                let r = r.with_metric().map_err(e2s)?;
                for cm in [&cp, &cu] {
                    let dd = dirac_operator(&r, cm).map_err(e2s)?;
                    let res = verify_parthasarathy(&dd).map_err(e2s)?;
                    ensure(res == 0.0, format!("V({p},{q}) {:?}: residual {res}", cm.path))?;
                    ensure(dd.is_odd(), format!("V({p},{q}) {:?}: D is not odd", cm.path))?;
                    n += 1;
                }
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt < 30.0, format!("runtime {dt:.2}s exceeds 30s"))?;
    Ok(format!("{n} Dirac operators, every residual exactly 0, {dt:.2}s"))
}

fn criterion_3() -> Outcome {
    let m = sl2c();
    let chk = spinor_decomposition_check(&m).map_err(e2s)?;
    ensure(chk.passed(), format!("spinor decomposition: {chk:?}"))?;
    let cm = uperp_clifford(&m).map_err(e2s)?;
    let mut worst = 0.0f64;
    for x in samples(3, 100, 1) {
        worst = worst.max(supertrace_determinant_check(&cm, &m, &x).map_err(e2s)?);
    }
    ensure(worst <= 1e-10, format!("supertrace residual {worst:e}"))?;
    Ok(format!("graded spinor multisets equal (S+ dim {}, S- dim {}); supertrace residual {worst:.1e} over 100 samples", chk.dim_plus, chk.dim_minus))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for name in ["sl2c", "sl2c_cubed"] {
        let k = kostant_checks(&build_preset(name).map_err(e2s)?).map_err(e2s)?;
        ensure(k.passed(), format!("{name}: {k:?}"))?;
        parts.push(format!("{name}: trace {} , |rho_u|^2 {}", k.trace_lhs, k.strange_lhs));
    }
    Ok(parts.join("; "))
}

fn criterion_5() -> Outcome {
    let t0 = Instant::now();
    let m = sl2c();
    let (r, fam) = pair_family(&m)?;
    let inv = fam.invariant_failures();
    ensure(inv.is_empty(), format!("symmetry: {inv:?}"))?;
    let cas = verify_casimir_scalar_eta(&fam);
    ensure(cas.is_zero(), format!("Casimir residual {cas}"))?;
    let rep = verify_identity_530(&fam, &r, &samples(5, 100, 1)).map_err(e2s)?;
    ensure(rep.module_exact, format!("module identity differs: {:?}", rep.module_diff))?;
    ensure(rep.max_pointwise <= 1e-9, format!("pointwise residual {:e}", rep.max_pointwise))?;
    let eh = compute_eta_hat(&fam).map_err(e2s)?;
    let r531 = verify_identity_531(&eh, &r).map_err(e2s)?;
    ensure(r531.equal, format!("R(K) identity differs: {:?}", r531.diff))?;
    ensure(r531.w_invariant, "lift is not W(T:K)-invariant")?;
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt < 60.0, format!("runtime {dt:.2}s exceeds 60s"))?;
    Ok(format!(
        "{} beta values, kernel dim {}, pointwise residual {:.1e}, {dt:.2}s",
        fam.entries.len(),
        fam.kernel_dim,
        rep.max_pointwise
    ))
}

fn criterion_6() -> Outcome {
    let m = Arc::new(build_preset("rline_x_su2").map_err(e2s)?);
    let r = parse_rep_spec(&m, "0:2+2:0+-2:0").and_then(|r| r.with_metric()).map_err(e2s)?;
    let fam = compute_eta_family(&r, EtaMode::Direct).map_err(e2s)?;
    let inv = fam.invariant_failures();
    ensure(inv.is_empty(), format!("symmetry: {inv:?}"))?;
    ensure(fam.trace_constant.is_zero(), "nonzero trace constant without z-perp")?;
    let cas = verify_casimir_scalar_eta(&fam);
    ensure(cas.is_zero(), format!("Casimir residual {cas}"))?;
    let total = fam.total_character();
    let full = full_h_character(&r).map_err(e2s)?;
    ensure(total == full, format!("character decomposition differs: {:?}", total.diff(&full)))?;
    let xs = samples(6, 100, 1);
    for x in &xs {
        let d = ad_determinant_factor(&m, x).map_err(e2s)?;
        ensure(d == 1.0, format!("denominator {d} at {x:?}"))?;
    }
    let rep = verify_identity_530(&fam, &r, &xs).map_err(e2s)?;
    ensure(rep.module_exact && rep.max_pointwise <= 1e-12, format!("trace identity: {rep:?}"))?;
    Ok(format!("{} beta values; characters equal exactly; denominator identically 1; pointwise {:.1e}", fam.entries.len(), rep.max_pointwise))
}

fn criterion_7() -> Outcome {
    let m = sl2c();
    let (r, fam) = pair_family(&m)?;
    let chi = full_h_character(&r).map_err(e2s)?;
    let cf = synthesize_classes(&SynthSpec::sl2c(2024, 50));
    ensure(cf.records.len() == 50, "synthetic file size")?;
    let res = factorization_check(&cf.records, &fam, &chi).map_err(e2s)?;
    ensure(res <= 1e-10, format!("factorization residual {res:e}"))?;
    let mut zero = cf.clone();
    for rec in &mut zero.records {
        rec.chi_orb = Q::zero();
    }
    let s = ruelle_log_series(&zero.records, &chi).map_err(e2s)?;
    ensure(s.terms.iter().all(|(_, c)| c.re == 0.0 && c.im == 0.0), "log R has a nonzero coefficient with all chi_orb = 0")?;
    let z = factorization_check(&zero.records, &fam, &chi).map_err(e2s)?;
    ensure(z == 0.0, format!("zero-chi factorization residual {z:e}"))?;
    Ok(format!("50 classes, max per-length residual {res:.1e}; chi_orb = 0 gives log R identically 0"))
}

fn criterion_8() -> Outcome {
    let m = sl2c();
    let v10 = full_h_character(&build_irrep_sl2c(m.clone(), 1, 0).map_err(e2s)?).map_err(e2s)?;
    let v01 = full_h_character(&build_irrep_sl2c(m.clone(), 0, 1).map_err(e2s)?).map_err(e2s)?;
    let cf = synthesize_classes(&SynthSpec::sl2c(2024, 50));
    let res = conjugation_symmetry_check(&cf.records, &v10, &v01).map_err(e2s)?;
    ensure(res <= 1e-12, format!("conjugation residual {res:e}"))?;
    let nontrivial = ruelle_log_series(&cf.records, &v10).map_err(e2s)?.terms.iter().any(|(_, c)| c.im.abs() > 1e-6);
    ensure(nontrivial, "coefficients are all real, the check would be vacuous")?;
    Ok(format!("max coefficient residual {res:.1e}"))
}

fn criterion_9() -> Outcome {
    let m = sl2c();
    let (_, fam) = pair_family(&m)?;
    let mut checked = 0;
    for sigma in fam.sigma.values() {
        let at_zero = SpectrumTable::new("a", vec![(-sigma.clone(), 1, 0)]).map_err(e2s)?;
        let z = selberg_zero_predictions(&at_zero, sigma);
        ensure(z == vec![ZeroPrediction { sigma_squared: Q::zero(), branch: 0, order: 2 }], format!("order at 0: {z:?}"))?;
        let rows = vec![(-sigma.clone(), 3, 1), (Q::one() - sigma.clone(), 1, 0), (Q::int(5), 0, 2), (Q::int(9), 4, 4)];
        let t = SpectrumTable::new("b", rows.clone()).map_err(e2s)?;
        let got = selberg_zero_predictions(&t, sigma);
        let mut expect = Vec::new();
        for (l, p, q) in &t.rows.iter().map(|r| (r.lambda.clone(), r.mult_plus as i64, r.mult_minus as i64)).collect::<Vec<_>>() {
            let mm = p - q;
            if mm == 0 {
                continue;
            }
            let s = l + sigma;
            if s.is_zero() {
                expect.push(ZeroPrediction { sigma_squared: Q::zero(), branch: 0, order: 2 * mm });
            } else {
                expect.push(ZeroPrediction { sigma_squared: -s.clone(), branch: 1, order: mm });
                expect.push(ZeroPrediction { sigma_squared: -s, branch: -1, order: mm });
            }
        }
        ensure(got == expect, format!("predictions {got:?} vs {expect:?}"))?;
        ensure(got.iter().any(|z| z.branch == 0 && z.order == 4), "order 2m at the origin")?;
        let unit = got.iter().find(|z| z.sigma_squared == Q::int(-1)).ok_or("missing ±i zero")?;
        ensure(unit.order == 1 && (unit.location().im.abs() - 1.0).abs() < 1e-15, "zero at ±i")?;
        checked += 1;
    }
    let empty = SpectrumTable::default();
    let bal = SpectrumTable::new("bal", vec![(Q::new(1, 3), 2, 2), (Q::int(4), 5, 5)]).map_err(e2s)?;
    let gen = SpectrumTable::new("gen", vec![(Q::new(1, 3), 2, 0), (Q::int(4), 1, 3)]).map_err(e2s)?;
    for s in [C::int(1), C::new(Q::new(1, 7), Q::new(-2, 3)), C::new(Q::zero(), Q::one())] {
        ensure(graded_determinant(&empty, &s).map_err(e2s)? == C::one(), "empty table")?;
        ensure(graded_determinant(&bal, &s).map_err(e2s)? == C::one(), "balanced table")?;
        let a = graded_determinant(&gen, &s).map_err(e2s)?;
        let b = graded_determinant(&gen.negated(), &s).map_err(e2s)?;
        ensure(&a * &b == C::one(), "determinant times negated determinant")?;
    }
    Ok(format!("zero/pole rules reproduced for {checked} sigma values; determinant identities exact"))
}

fn chi_prime(h: &[u64]) -> i64 {
    h.iter().enumerate().map(|(i, d)| if i % 2 == 0 { i as i64 * *d as i64 } else { -(i as i64) * *d as i64 }).sum()
}

fn criterion_10() -> Outcome {
    let c_u_rho = Q::int(-3);
    let free = |l: &str| SpectrumTable::new(l, vec![(Q::int(7), 2, 1), (Q::new(1, 2), 1, 0)]);
    let lc = leading_constants(
        &[(Q::zero(), Q::zero(), free("beta=0").map_err(e2s)?), (Q::new(1, 2), Q::new(1, 2), free("beta=1/2").map_err(e2s)?)],
        &c_u_rho,
    );
    ensure(lc.c_rho == Q::one() && lc.r_rho == 0, format!("kernel-free: {lc:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut cases = 0;
    for _ in 0..20 {
        let betas = [Q::zero(), Q::new(1, 2), Q::new(3, 2)];
        let mut tables = Vec::new();
        let mut expect_c = Q::one();
        let mut expect_sum = 0i64;
        for b in betas.iter() {
            let h: Vec<u64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let t = eta_hat_table_from_cohomology(&format!("beta={b}"), &h, &c_u_rho);
            let r = -chi_prime(&h);
            let nsq = Q::int(2) * b.clone() * b.clone();
            if b.signum() > 0 {
                expect_c = expect_c * (Q::int(-4) * nsq.clone()).pow(-r as i32);
            }
            expect_sum += r;
            // degree tables with kernels h_i plus positive eigenvalues
            let mut degree = Vec::new();
            for (i, d) in h.iter().enumerate() {
                let mut rows = vec![(Q::int(rng.gen_range(1..9)), rng.gen_range(1..3), 0)];
                rows.push((Q::new(2 * rng.gen_range(5..20) + 1, 4), 1, 0));
                if *d > 0 {
                    rows.push((Q::zero(), *d, 0));
                }
                degree.push(SpectrumTable::new(&format!("{i}"), rows).map_err(e2s)?);
            }
            let lt = torsion_leading_term(&degree);
            ensure(lt.exponent == chi_prime(&h), format!("exponent {} vs {}", lt.exponent, chi_prime(&h)))?;
            ensure(r == -lt.exponent, "r_eta differs from -chi'")?;
            let mut oracle = 1.0f64;
            for (i, t) in degree.iter().enumerate() {
                let w = if i % 2 == 0 { i as i32 } else { -(i as i32) };
                for row in &t.rows {
                    if !row.lambda.is_zero() {
                        oracle *= row.lambda.to_f64().powi(w * row.net() as i32);
                    }
                }
            }
            let got = lt.t_squared.to_f64();
            ensure(((got - oracle) / oracle).abs() <= 1e-9, format!("factor {got} vs oracle {oracle}"))?;
            let eps = Q::new(1, 1_000_000);
            let ts = torsion_series(&degree, &C::real(eps.clone())).map_err(e2s)?;
            let scaled = ts.re.to_f64() / eps.to_f64().powi(lt.exponent as i32);
            ensure(((scaled - got) / got).abs() < 1e-4, format!("small-sigma behaviour {scaled} vs {got}"))?;
            tables.push((b.clone(), nsq, t));
            cases += 1;
        }
        let lc = leading_constants(&tables, &c_u_rho);
        ensure(lc.c_rho == expect_c && lc.r_rho == -2 * expect_sum, format!("constants {lc:?}"))?;
    }
    Ok(format!("kernel-free gives C=1, r=0; {cases} constructed cases match exactly"))
}

fn criterion_11() -> Outcome {
    let mut reps: Vec<MatrixRep> = Vec::new();
    let m = sl2c();
    for p in 0..=2 {
        for q in 0..=2 {
            reps.push(build_irrep_sl2c(m.clone(), p, q).map_err(e2s)?);
        }
    }
    let su2 = Arc::new(build_preset("su2").map_err(e2s)?);
    let sl2r = Arc::new(build_preset("sl2r").map_err(e2s)?);
    for n in 0..=4 {
        reps.push(parse_rep_spec(&su2, &n.to_string()).map_err(e2s)?);
        reps.push(parse_rep_spec(&sl2r, &n.to_string()).map_err(e2s)?);
    }
    let mx = Arc::new(build_preset("sl2c_x_su2").map_err(e2s)?);
    reps.push(parse_rep_spec(&mx, "1,0;1").map_err(e2s)?);
    reps.push(parse_rep_spec(&mx, "1,1;2").map_err(e2s)?);
    let cube = Arc::new(build_preset("sl2c_cubed").map_err(e2s)?);
    reps.push(parse_rep_spec(&cube, "1,0;0,1;0,0").map_err(e2s)?);
    for r in &reps {
        let hc = hc_casimir_crosscheck(r).map_err(|e| format!("{}: {e}", r.label))?;
        ensure(hc.residual.is_zero(), format!("{}: |Λ|²−|ρ|² = {} but Ω = {}", r.label, hc.hc_value, hc.omega))?;
        ensure(hc.normalization_residual.is_zero(), format!("{}: Ω = {} vs C = {}", r.label, hc.omega, hc.casimir))?;
    }
    Ok(format!(
        "{} irreducible reps: B*(Λ,Λ) − B*(ρu,ρu) equals the B-dual Casimir exactly (the −B Casimir used elsewhere is its negative)",
        reps.len()
    ))
}

/// Exhaustive PSL₂ conjugacy test (with inversion): X g = ±h^{±1} X for an
/// invertible X.
fn conjugate(g: &CMat, h: &CMat) -> bool {
    let hinv = CMat::from_rows(vec![vec![h[(1, 1)].clone(), -&h[(0, 1)]], vec![-&h[(1, 0)], h[(0, 0)].clone()]]);
    for target in [h.clone(), h.neg(), hinv.clone(), hinv.neg()] {
        // unknown X = [x0 x1; x2 x3]; rows of X g − target X = 0
        let mut rows = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let mut row = vec![C::zero(); 4];
                for k in 0..2 {
                    row[i * 2 + k] = &row[i * 2 + k] + &g[(k, j)];
                    row[k * 2 + j] = &row[k * 2 + j] - &target[(i, k)];
                }
                rows.push(row);
            }
        }
        let ns = nullspace(&CMat::from_rows(rows));
        let det = |v: &[C]| &(&v[0] * &v[3]) - &(&v[1] * &v[2]);
        match ns.cols() {
            0 => {}
            1 => {
                if !det(&ns.col(0)).is_zero() {
                    return true;
                }
            }
            _ => {
                let (a, b) = (ns.col(0), ns.col(1));
                for c in 0..3 {
                    let v: Vec<C> = a.iter().zip(&b).map(|(x, y)| x + &(&C::int(c) * y)).collect();
                    if !det(&v).is_zero() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn criterion_12() -> Outcome {
    let g = CMat::diag(&[C::int(2), C::real(Q::new(1, 2))]);
    let e = enumerate_words(&[g], 5).map_err(e2s)?;
    ensure(e.file.records.len() == 5, format!("{} records", e.file.records.len()))?;
    for (i, r) in e.file.records.iter().enumerate() {
        let k = i + 1;
        let exact_trace = Q::int(2).pow(k as i32) + Q::int(2).pow(-(k as i32));
        ensure(e.traces[i] == C::real(exact_trace) || e.traces[i] == C::real(-Q::int(2).pow(k as i32) - Q::int(2).pow(-(k as i32))), "trace")?;
        ensure(r.m_mult as usize == k && r.chi_orb == Q::one(), format!("coefficient 1/{} expected, got {}/{}", k, r.chi_orb, r.m_mult))?;
        ensure((r.ell - 2.0 * k as f64 * 2f64.ln()).abs() < 1e-12, format!("length {} for k={k}", r.ell))?;
        ensure(r.holonomy.t_angles == vec![0.0], "angle")?;
    }
    let a = CMat::from_ints(&[&[2, 1], &[1, 1]], None);
    let b = CMat::from_rows(vec![vec![C::int(2), C::i()], vec![C::new(Q::zero(), Q::int(-1)), C::int(1)]]);
    let gens = [a, b];
    let en = enumerate_words(&gens, 6).map_err(e2s)?;
    let words = loxodromic_words(&gens, 6).map_err(e2s)?;
    let mut reps: Vec<CMat> = Vec::new();
    for w in &words {
        if !reps.iter().any(|r| conjugate(&w.matrix, r)) {
            reps.push(w.matrix.clone());
        }
    }
    ensure(reps.len() == en.file.records.len(), format!("oracle {} classes vs enumerated {}", reps.len(), en.file.records.len()))?;
    Ok(format!("diag(2,1/2): 5 powers with lengths 2k·log 2 and coefficient 1/k; free pair: {} classes from {} words match the oracle", reps.len(), words.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("model validation and corruption detection", criterion_1),
        ("quadratic Dirac identity on both paths", criterion_2),
        ("spinor decomposition and supertrace", criterion_3),
        ("trace constant, strange formula, rho splitting", criterion_4),
        ("eta family identities", criterion_5),
        ("noncompact-center branch", criterion_6),
        ("zeta factorization", criterion_7),
        ("conjugation symmetry", criterion_8),
        ("zero and pole order bookkeeping", criterion_9),
        ("leading-term constants and torsion exponent", criterion_10),
        ("Harish-Chandra Casimir crosscheck", criterion_11),
        ("lattice word enumeration", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let dt = t0.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{dt:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail} [{dt:.2}s]", i + 1)
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
