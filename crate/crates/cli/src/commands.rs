//! One function per subcommand. Each builds a [`Runner`], records checks
//! in a fixed order and returns the finished report.

use crate::gaussian::parse_matrix2;
use crate::{CliError, Outcome, RunReport, Runner, Settings};
use friedlab_core::clifford_dirac::{
    dirac_operator, p_clifford, spinor_decomposition_check, uperp_clifford, verify_parthasarathy, CliffordModule,
};
use friedlab_core::eta_pipeline::{
    compute_eta_family, compute_eta_hat, hc_casimir_crosscheck, kostant_checks, verify_casimir_scalar_eta, verify_identity_530,
    verify_identity_531, EtaFamily, EtaMode,
};
use friedlab_core::group_model::{build_preset, corrupt, preset_data, validate_model, Corruption, GroupModel, ModelError, PRESETS};
use friedlab_core::lattice_data::{
    enumerate_words, save_classes, synthesize_classes, AngleDistribution, ClassFile, LengthUnit, SynthSpec,
};
use friedlab_core::lie_characters::{TorusElement, VirtualCharacter, Weight};
use friedlab_core::representations::{
    casimir_scalar, full_h_character, is_irreducible, is_theta_invariant, parse_rep_spec, MatrixRep, RepError,
};
use friedlab_core::zeta_engine::{
    conjugation_symmetry_check, factorization_check, ruelle_log_series, selberg_log_series, ConjugacyClassRecord, LogZetaSeries,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathChoice {
    P,
    UPerp,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeChoice {
    Auto,
    Dirac,
    Direct,
}

pub fn default_rep(preset: &str) -> &'static str {
    if preset == "sl2c" {
        "1,0+0,1"
    } else {
        "trivial"
    }
}

pub fn load_model(preset: &str) -> Result<Arc<GroupModel>, CliError> {
    match build_preset(preset) {
        Ok(m) => Ok(Arc::new(m)),
        Err(ModelError::UnknownPreset(p)) => {
            Err(CliError::Usage(format!("unknown preset '{p}' (known: {})", PRESETS.join(", "))))
        }
        Err(e) => Err(CliError::Usage(format!("preset '{preset}' does not build: {e}"))),
    }
}

pub fn load_rep(model: &Arc<GroupModel>, spec: &str) -> Result<MatrixRep, CliError> {
    parse_rep_spec(model, spec).map_err(|e| CliError::Usage(format!("rep spec '{spec}': {e}")))
}

fn with_metric(run: &mut Runner, rep: &MatrixRep) -> Option<MatrixRep> {
    let mut out = None;
    run.check("admissible metric", |_| match rep.clone().with_metric() {
        Ok(r) => {
            out = Some(r);
            Ok(Outcome::flag(true, "positive definite, p self-adjoint, k skew-adjoint"))
        }
        Err(e) => Err(e.to_string()),
    });
    out
}

fn samples(model: &GroupModel, seed: u64, n: usize) -> Vec<TorusElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nb = model.b.cols().max(1);
    (0..n)
        .map(|_| {
            let a = (0..nb)
                .map(|_| {
                    let x: f64 = rng.gen_range(0.05..2.5);
                    if rng.gen_bool(0.5) {
                        x
                    } else {
                        -x
                    }
                })
                .collect();
            let t = (0..model.nt()).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
            TorusElement::new(a, t)
        })
        .collect()
}

fn character_json(chi: &VirtualCharacter) -> Value {
    Value::Array(chi.terms().map(|(w, m)| json!([w.to_string(), m])).collect())
}

fn series_json(s: &LogZetaSeries) -> Value {
    Value::Array(s.terms.iter().map(|(l, c)| json!([l, c.re, c.im])).collect())
}

// ---------------------------------------------------------------- model

pub fn cmd_model(command: Vec<String>, settings: &Settings, preset: &str, corruption: Option<Corruption>) -> Result<RunReport, CliError> {
    let data = preset_data(preset).map_err(|e| CliError::Usage(e.to_string()))?;
    let data = match corruption {
        Some(c) => corrupt(&data, c),
        None => data,
    };
    let mut run = Runner::new(command, settings);
    model_checks(&mut run, &data, "");
    if let Ok(m) = GroupModel::new(data) {
        run.data(
            "dimensions",
            json!({
                "g": m.dim(), "k": m.k.cols(), "p": m.p.cols(), "t": m.t.cols(), "b": m.b.cols(),
                "delta": m.delta, "n": m.n.cols(), "z_perp": m.zperp.cols(), "roots": m.roots.len(),
                "center_compact": m.center_compact,
            }),
        );
    }
    Ok(run.finish())
}

fn model_checks(run: &mut Runner, data: &friedlab_core::group_model::ModelData, prefix: &str) {
    let rep = validate_model(data);
    for c in rep.checks {
        run.check(&format!("{prefix}{}", c.name), |_| Ok(Outcome::flag(c.passed, c.detail.clone())));
    }
}

// ---------------------------------------------------------------- rep

pub fn cmd_rep(command: Vec<String>, settings: &Settings, preset: &str, spec: &str) -> Result<RunReport, CliError> {
    let model = load_model(preset)?;
    let rep = load_rep(&model, spec)?;
    let mut run = Runner::new(command, settings);
    run.check("casimir scalar (g and u agree)", |_| {
        casimir_scalar(&rep).map(|c| Outcome::flag(true, format!("C = {c}"))).map_err(|e| e.to_string())
    });
    with_metric(&mut run, &rep);
    let chi = full_h_character(&rep).map_err(|e| CliError::Usage(e.to_string()))?;
    run.data(
        "summary",
        json!({
            "label": rep.label,
            "dim": rep.dim(),
            "irreducible": is_irreducible(&rep),
            "theta_invariant": is_theta_invariant(&rep).ok(),
        }),
    );
    run.data("weights", character_json(&chi));
    Ok(run.finish())
}

// ---------------------------------------------------------------- dirac

fn clifford_for(model: &GroupModel, which: PathChoice) -> Result<CliffordModule, String> {
    match which {
        PathChoice::P => p_clifford(model).map_err(|e| e.to_string()),
        _ => uperp_clifford(model).map_err(|e| e.to_string()),
    }
}

fn dirac_checks(run: &mut Runner, rep: &MatrixRep, which: PathChoice, prefix: &str) {
    let name = if which == PathChoice::P { "p" } else { "u-perp" };
    let model = rep.model.clone();
    if which == PathChoice::UPerp && model.zperp.cols() == 0 {
        run.skip(&format!("{prefix}dirac[{name}]"), "z-perp(b) is zero, no u-perp spinors");
        return;
    }
    let cm = match clifford_for(&model, which) {
        Ok(cm) => cm,
        Err(e) => {
            run.check(&format!("{prefix}clifford[{name}]"), |_| Err(e));
            return;
        }
    };
    run.check(&format!("{prefix}clifford[{name}] relations"), |_| {
        Ok(Outcome::flag(cm.check_relations(), format!("{} generators on {} spinors", cm.dim_space(), cm.spinor_dim())))
    });
    let dd = match dirac_operator(rep, &cm) {
        Ok(d) => d,
        Err(e) => {
            run.check(&format!("{prefix}dirac[{name}]"), |_| Err(e.to_string()));
            return;
        }
    };
    run.check(&format!("{prefix}dirac[{name}] odd"), |_| Ok(Outcome::flag(dd.is_odd(), "anticommutes with chirality")));
    run.check(&format!("{prefix}dirac[{name}] adjointness"), |_| {
        Ok(match dd.adjointness() {
            Some(1) => Outcome::flag(true, "self-adjoint"),
            Some(_) => Outcome::flag(true, "skew-adjoint"),
            None => Outcome::flag(false, "neither self- nor skew-adjoint"),
        })
    });
    run.check(&format!("{prefix}dirac[{name}] quadratic identity"), |r| {
        let res = verify_parthasarathy(&dd).map_err(|e| e.to_string())?;
        Ok(r.exact(res, format!("dim S⊗V = {}", dd.d.rows())))
    });
}

pub fn cmd_dirac(command: Vec<String>, settings: &Settings, preset: &str, spec: &str, which: PathChoice) -> Result<RunReport, CliError> {
    let model = load_model(preset)?;
    let rep = load_rep(&model, spec)?;
    let mut run = Runner::new(command, settings);
    if let Some(rep) = with_metric(&mut run, &rep) {
        let paths: &[PathChoice] = match which {
            PathChoice::Both => &[PathChoice::P, PathChoice::UPerp],
            PathChoice::P => &[PathChoice::P],
            PathChoice::UPerp => &[PathChoice::UPerp],
        };
        for &p in paths {
            dirac_checks(&mut run, &rep, p, "");
        }
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------- eta

fn resolve_mode(model: &GroupModel, mode: ModeChoice) -> EtaMode {
    match mode {
        ModeChoice::Dirac => EtaMode::Dirac,
        ModeChoice::Direct => EtaMode::Direct,
        ModeChoice::Auto if model.zperp.cols() == 0 => EtaMode::Direct,
        ModeChoice::Auto => EtaMode::Dirac,
    }
}

fn family(run: &mut Runner, rep: &MatrixRep, mode: EtaMode, prefix: &str) -> Option<EtaFamily> {
    let mut out = None;
    run.check(&format!("{prefix}eta family"), |_| match compute_eta_family(rep, mode) {
        Ok(f) => {
            let d = format!("{} beta values, {:?} mode, kernel dim {}", f.entries.len(), f.mode, f.kernel_dim);
            out = Some(f);
            Ok(Outcome::flag(true, d))
        }
        Err(e) => {
            let hint = if matches!(e, friedlab_core::eta_pipeline::EtaError::RequiresThetaInvariant) {
                " (append +theta to the rep spec)"
            } else {
                ""
            };
            Err(format!("{e}{hint}"))
        }
    });
    out
}

fn eta_checks(run: &mut Runner, rep: &MatrixRep, fam: &EtaFamily, prefix: &str) {
    run.check(&format!("{prefix}eta symmetry and lifts"), |_| {
        let bad = fam.invariant_failures();
        Ok(Outcome::flag(bad.is_empty(), if bad.is_empty() { "beta -> -beta symmetric, lifts exist".into() } else { bad.join("; ") }))
    });
    run.check(&format!("{prefix}eta casimir formula"), |r| {
        let res = verify_casimir_scalar_eta(fam);
        Ok(r.exact(res.to_f64().abs(), format!("C(u,rho) = {}, trace constant = {}", fam.c_u_rho, fam.trace_constant)))
    });
    let xs = samples(&fam.model, run.settings().seed, run.settings().samples);
    run.check(&format!("{prefix}spinor-twisted module identity"), |_| {
        let rep530 = verify_identity_530(fam, rep, &xs[..0]).map_err(|e| e.to_string())?;
        Ok(Outcome::flag(rep530.module_exact, format!("{} differing weights", rep530.module_diff.len())))
    });
    run.check(&format!("{prefix}trace identity at sample points"), |r| {
        let rep530 = verify_identity_530(fam, rep, &xs).map_err(|e| e.to_string())?;
        Ok(r.numeric(rep530.max_pointwise, format!("{} samples", xs.len())))
    });
    run.check(&format!("{prefix}R(K) identity"), |_| {
        let eh = compute_eta_hat(fam).map_err(|e| e.to_string())?;
        let r = verify_identity_531(&eh, rep).map_err(|e| e.to_string())?;
        Ok(Outcome::flag(r.equal && r.w_invariant, format!("equal: {}, W(T:K)-invariant: {}", r.equal, r.w_invariant)))
    });
}

fn family_table(fam: &EtaFamily) -> Value {
    Value::Array(
        fam.entries
            .iter()
            .map(|(beta, e)| {
                json!({
                    "beta": beta.to_string(),
                    "norm_sq": fam.norm_sq(beta).to_string(),
                    "dim_plus": e.plus.dim(),
                    "dim_minus": e.minus.dim(),
                    "sigma": fam.sigma.get(beta).map(|s| s.to_string()),
                    "eta": character_json(&e.virtual_character()),
                })
            })
            .collect(),
    )
}

pub fn cmd_eta(command: Vec<String>, settings: &Settings, preset: &str, spec: &str, mode: ModeChoice) -> Result<RunReport, CliError> {
    let model = load_model(preset)?;
    let rep = load_rep(&model, spec)?;
    let mut run = Runner::new(command, settings);
    if let Some(rep) = with_metric(&mut run, &rep) {
        if let Some(fam) = family(&mut run, &rep, resolve_mode(&model, mode), "") {
            eta_checks(&mut run, &rep, &fam, "");
            run.data("eta", family_table(&fam));
        }
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------- zeta

fn read_classes(path: &Path) -> Result<ClassFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    ClassFile::from_str_unvalidated(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Character of the complex conjugate representation: t-part negated.
fn conjugate_character(chi: &VirtualCharacter) -> VirtualCharacter {
    chi.map_weights(|w| Weight::new(w.b.clone(), w.t.iter().map(|x| -x.clone()).collect()))
}

pub fn cmd_zeta(
    command: Vec<String>,
    settings: &Settings,
    preset: &str,
    spec: &str,
    classes: &Path,
    mode: ModeChoice,
) -> Result<RunReport, CliError> {
    let model = load_model(preset)?;
    let rep = load_rep(&model, spec)?;
    let file = read_classes(classes)?;
    let mut run = Runner::new(command, settings);
    if file.header.model != preset {
        run.check("class file model", |_| Ok(Outcome::flag(false, format!("file is for '{}', preset is '{preset}'", file.header.model))));
    }
    let mut good: Vec<ConjugacyClassRecord> = Vec::new();
    for r in &file.records {
        match r.validate() {
            Ok(()) => good.push(r.clone()),
            Err(e) => {
                run.check(&format!("record {}", r.id), |_| Err(e.to_string()));
            }
        }
    }
    let a0 = model.a0_norm_sq().map(|q| q.to_f64().sqrt()).unwrap_or(1.0);
    let checked = ClassFile { header: file.header.clone(), records: good.clone() };
    run.check("lengths match holonomies", |r| {
        let bad = checked.check_lengths(a0, r.settings().tol);
        Ok(Outcome::flag(bad.is_empty(), if bad.is_empty() { format!("{} records", good.len()) } else { bad.join("; ") }))
    });
    let Some(rep) = with_metric(&mut run, &rep) else {
        return Ok(run.finish());
    };
    let chi = full_h_character(&rep).map_err(|e: RepError| CliError::Usage(e.to_string()))?;
    let Some(fam) = family(&mut run, &rep, resolve_mode(&model, mode), "") else {
        return Ok(run.finish());
    };

    let (ruelle, selberg) = if settings.parallel {
        std::thread::scope(|s| {
            let h = s.spawn(|| ruelle_log_series(&good, &chi));
            let sel: Vec<_> = fam.entries.keys().map(|b| (b.clone(), selberg_log_series(&good, &fam.eta(b), &model))).collect();
            (h.join().expect("ruelle worker"), sel)
        })
    } else {
        let r = ruelle_log_series(&good, &chi);
        let sel: Vec<_> = fam.entries.keys().map(|b| (b.clone(), selberg_log_series(&good, &fam.eta(b), &model))).collect();
        (r, sel)
    };
    run.check("ruelle series", |_| {
        ruelle.as_ref().map(|s| Outcome::flag(true, format!("{} distinct lengths", s.len()))).map_err(|e| e.to_string())
    });
    run.check("factorization through eta family", |r| {
        let res = factorization_check(&good, &fam, &chi).map_err(|e| e.to_string())?;
        Ok(r.numeric(res, "worst per-length coefficient defect"))
    });
    run.check("conjugation symmetry", |r| {
        let res = conjugation_symmetry_check(&good, &chi, &conjugate_character(&chi)).map_err(|e| e.to_string())?;
        Ok(r.numeric(res, "conjugate rep against conjugated coefficients"))
    });
    if let Ok(s) = &ruelle {
        run.data("log_ruelle", series_json(s));
    }
    let sel: serde_json::Map<String, Value> =
        selberg.iter().filter_map(|(b, s)| s.as_ref().ok().map(|s| (b.to_string(), series_json(s)))).collect();
    run.data("log_selberg", Value::Object(sel));
    run.data("eta", family_table(&fam));
    Ok(run.finish())
}

// ---------------------------------------------------------------- lattice

pub fn cmd_lattice_synth(
    command: Vec<String>,
    settings: &Settings,
    preset: &str,
    count: usize,
    out: Option<&Path>,
) -> Result<(RunReport, Option<String>), CliError> {
    let model = load_model(preset)?;
    let a0 = model.a0_norm_sq().map_err(|e| CliError::Usage(format!("preset '{preset}' has no a0: {e}")))?.to_f64().sqrt();
    let spec = SynthSpec {
        seed: settings.seed,
        count,
        a_range: (0.3, 4.0),
        angles: AngleDistribution::Uniform,
        nt: model.nt(),
        model: preset.into(),
        unit: LengthUnit::B,
        a0_norm: a0,
    };
    let file = synthesize_classes(&spec);
    let mut run = Runner::new(command, settings);
    run.check("class file invariants", |_| file.validate().map(|_| Outcome::flag(true, format!("{count} records"))).map_err(|e| e.to_string()));
    run.check("lengths match holonomies", |r| {
        let bad = file.check_lengths(a0, r.settings().tol);
        Ok(Outcome::flag(bad.is_empty(), bad.join("; ")))
    });
    let text = emit(&file, out)?;
    Ok((run.finish(), text))
}

pub fn cmd_lattice_enumerate(
    command: Vec<String>,
    settings: &Settings,
    gens: &[String],
    max_len: usize,
    out: Option<&Path>,
) -> Result<(RunReport, Option<String>), CliError> {
    let mats = gens.iter().map(|g| parse_matrix2(g)).collect::<Result<Vec<_>, _>>().map_err(CliError::Usage)?;
    if mats.is_empty() {
        return Err(CliError::Usage("at least one --gen is required".into()));
    }
    let mut run = Runner::new(command, settings);
    let e = match enumerate_words(&mats, max_len) {
        Ok(e) => e,
        Err(err) => {
            run.check("enumeration", |_| Err(err.to_string()));
            return Ok((run.finish(), None));
        }
    };
    run.check("class file invariants", |_| {
        e.file.validate().map(|_| Outcome::flag(true, format!("{} classes", e.file.records.len()))).map_err(|x| x.to_string())
    });
    run.data(
        "classes",
        Value::Array(
            e.file
                .records
                .iter()
                .zip(&e.traces)
                .zip(&e.powers)
                .map(|((r, t), k)| json!({"id": r.id, "ell": r.ell, "trace": format!("{t:?}"), "power": k}))
                .collect(),
        ),
    );
    let text = emit(&e.file, out)?;
    Ok((run.finish(), text))
}

/// Writes to `out` when given; otherwise hands back the canonical text.
fn emit(file: &ClassFile, out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(p) => {
            save_classes(file, p).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(None)
        }
        None => Ok(Some(file.to_canonical_string())),
    }
}

// ---------------------------------------------------------------- verify-all

/// Components of a rep spec, without a trailing `theta`.
fn components(spec: &str) -> Vec<&str> {
    spec.split('+').map(str::trim).filter(|c| *c != "theta" && !c.is_empty()).collect()
}

pub fn cmd_verify_all(
    command: Vec<String>,
    settings: &Settings,
    preset: &str,
    spec: &str,
    corruption: Option<Corruption>,
) -> Result<RunReport, CliError> {
    let data = preset_data(preset).map_err(|e| CliError::Usage(e.to_string()))?;
    let data = match corruption {
        Some(c) => corrupt(&data, c),
        None => data,
    };
    // parse against the clean preset first so a bad spec is a usage error
    let clean = load_model(preset)?;
    load_rep(&clean, spec)?;

    let mut run = Runner::new(command, settings);
    model_checks(&mut run, &data, "model/");
    let model = match GroupModel::new(data) {
        Ok(m) => Arc::new(m),
        Err(e) => {
            run.check("model/build", |_| Err(e.to_string()));
            return Ok(run.finish());
        }
    };
    let rep = load_rep(&model, spec)?;
    let Some(rep) = with_metric(&mut run, &rep) else {
        return Ok(run.finish());
    };

    dirac_checks(&mut run, &rep, PathChoice::P, "");
    dirac_checks(&mut run, &rep, PathChoice::UPerp, "");

    let rank_one = model.delta == 1;
    if rank_one && model.zperp.cols() > 0 {
        run.check("spinor decomposition and supertrace", |_| {
            let c = spinor_decomposition_check(&model).map_err(|e| e.to_string())?;
            Ok(Outcome::flag(c.passed(), format!("S+ dim {}, S- dim {}", c.dim_plus, c.dim_minus)))
        });
    } else {
        run.skip("spinor decomposition and supertrace", "needs fundamental rank 1 and nonzero z-perp(b)");
    }
    if model.delta >= 1 {
        run.check("kostant identities", |_| {
            let k = kostant_checks(&model).map_err(|e| e.to_string())?;
            Ok(Outcome::flag(k.passed(), format!("trace constant {}, |rho_u|^2 {}", k.trace_lhs, k.strange_lhs)))
        });
    } else {
        run.skip("kostant identities", "fundamental rank 0");
    }
    if rank_one {
        if let Some(fam) = family(&mut run, &rep, resolve_mode(&model, ModeChoice::Auto), "") {
            eta_checks(&mut run, &rep, &fam, "");
        }
    } else {
        run.skip("eta family", "needs fundamental rank 1");
    }
    for c in components(spec) {
        let r = load_rep(&model, c)?;
        if !is_irreducible(&r) {
            run.skip(&format!("harish-chandra casimir [{c}]"), "component is reducible");
            continue;
        }
        run.check(&format!("harish-chandra casimir [{c}]"), |_| {
            let h = hc_casimir_crosscheck(&r).map_err(|e| e.to_string())?;
            Ok(Outcome {
                passed: h.passed(),
                residual: Some(h.residual.to_f64()),
                detail: format!("lambda {} ; B-dual Casimir {} ; C {}", h.highest_weight, h.omega, h.casimir),
            })
        });
    }
    Ok(run.finish())
}
