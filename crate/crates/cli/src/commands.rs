use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use coxops::arrangement::Arrangement;
use coxops::bases::{build_basis_with, BasisSet, BuildOptions};
use coxops::diffop::{saito_holm_certify_with, Certificate, CertifyMethod, DiffOperator, MultiIndex};
use coxops::group::{act_op, invariance_suite, SignedPermutation};
use coxops::matrix::PolyMatrix;
use coxops::schur::{schur_identity_report, Partition};
use coxops::{Error, Kind, Polynomial, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Ctx, Format, KindL, Outcome};

const MAX_UNFORCED_L: usize = 8;

fn emit(ctx: &Ctx, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) -> anyhow::Result<()> {
    let body = match ctx.format {
        Format::Text => text(),
        Format::Json => serde_json::to_string_pretty(&value())?,
    };
    match writeln!(std::io::stdout().lock(), "{body}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))
}

fn read_op(path: &Path) -> anyhow::Result<DiffOperator> {
    serde_json::from_value(read_json(path)?).with_context(|| format!("{} is not an operator", path.display()))
}

/// A JSON array of operators, or an object with an `operators` array.
fn read_ops(path: &Path) -> anyhow::Result<Vec<DiffOperator>> {
    let v = read_json(path)?;
    let list = match v {
        Value::Array(_) => v,
        Value::Object(mut o) => o.remove("operators").context("expected an `operators` array")?,
        _ => bail!("{}: expected an array of operators", path.display()),
    };
    Ok(serde_json::from_value(list)?)
}

fn guard_size(l: usize, force: bool) -> anyhow::Result<()> {
    ensure!(
        l <= MAX_UNFORCED_L || force,
        "certification for l = {l} > {MAX_UNFORCED_L} can take very long; pass --force to run it anyway"
    );
    Ok(())
}

fn labels(set: &BasisSet) -> Vec<String> {
    (1..=set.etas.len())
        .map(|k| format!("eta_{k}"))
        .chain(set.thetas.iter().map(|(lam, _)| format!("theta_{lam}")))
        .collect()
}

#[derive(Serialize)]
struct CertificateSummary<'a> {
    is_basis: bool,
    c: Option<&'a Rational>,
    t_m: usize,
    exponents: &'a [i32],
    method: CertifyMethod,
}

impl<'a> From<&'a Certificate> for CertificateSummary<'a> {
    fn from(c: &'a Certificate) -> Self {
        CertificateSummary { is_basis: c.is_basis, c: c.c.as_ref(), t_m: c.t_m, exponents: &c.exponents, method: c.method }
    }
}

fn certificate_text(c: &Certificate) -> String {
    let constant = c.c.as_ref().map_or("none".to_string(), Rational::to_string);
    format!(
        "is_basis: {}\nc: {constant}\nt_m: {}\nexponents: {:?}\nmethod: {}",
        c.is_basis,
        c.t_m,
        c.exponents,
        serde_json::to_value(c.method).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
    )
}

pub fn basis(
    ctx: &Ctx,
    kl: KindL,
    m: u32,
    certify: bool,
    method: CertifyMethod,
    json_out: Option<PathBuf>,
    force: bool,
) -> Outcome {
    ensure!(m == 2, "bases are constructed for m = 2 only");
    if certify {
        guard_size(kl.l, force)?;
    }
    let set = build_basis_with(kl.kind.into(), kl.l, BuildOptions { certify, method })?;
    let names = labels(&set);
    let ops = set.operators();
    let value = json!({
        "kind": set.kind,
        "l": set.l,
        "m": set.m,
        "certificate": set.certificate.as_ref().map(CertificateSummary::from),
        "labels": names,
        "operators": ops,
    });
    if let Some(path) = json_out {
        fs::write(&path, serde_json::to_string_pretty(&value)?).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(
        ctx,
        || {
            let mut out = format!("type {} l = {} m = {}: {} operators\n", set.kind, set.l, set.m, ops.len());
            if let Some(c) = &set.certificate {
                out.push_str(&certificate_text(c));
                out.push('\n');
            }
            for (name, op) in names.iter().zip(&ops) {
                out.push_str(&format!("{name} = {op}\n"));
            }
            out.trim_end().to_string()
        },
        || value.clone(),
    )?;
    Ok(!certify || set.is_certified())
}

pub fn certify(ctx: &Ctx, path: &Path, kl: KindL, method: CertifyMethod, force: bool) -> Outcome {
    guard_size(kl.l, force)?;
    let ops = read_ops(path)?;
    let arr = Arrangement::build(kl.kind.into(), kl.l)?;
    if let Some(op) = ops.iter().find(|op| op.l() != kl.l) {
        bail!("operator in dimension {} but --l {}", op.l(), kl.l);
    }
    match saito_holm_certify_with(&ops, &arr, method) {
        Ok(cert) => {
            emit(ctx, || certificate_text(&cert), || json!(CertificateSummary::from(&cert)))?;
            Ok(cert.is_basis)
        }
        Err(e @ (Error::NonMember { .. } | Error::NonHomogeneous { .. })) => {
            emit(ctx, || format!("is_basis: false\nreason: {e}"), || json!({ "is_basis": false, "reason": e.to_string() }))?;
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn membership(ctx: &Ctx, path: &Path, kl: KindL) -> Outcome {
    let op = read_op(path)?;
    let arr = Arrangement::build(kl.kind.into(), kl.l)?;
    ensure!(op.l() == kl.l, "operator in dimension {} but --l {}", op.l(), kl.l);
    let mut failing = Vec::new();
    for form in &arr.forms {
        if !op.member_of_form(form)? {
            failing.push(form.to_string());
        }
    }
    let member = failing.is_empty();
    emit(
        ctx,
        || {
            if member {
                format!("member of D^({})({}{}): true", op.order(), Kind::from(kl.kind), kl.l)
            } else {
                format!("member: false\nfailing forms: {}", failing.join("; "))
            }
        },
        || json!({ "member": member, "failing_forms": failing }),
    )?;
    Ok(member)
}

pub fn schur(ctx: &Ctx, kind: Kind, parts: Vec<u32>, m: usize, l: Option<usize>) -> Outcome {
    ensure!(parts.len() == m, "λ has {} parts but m = {m}", parts.len());
    let l = l.unwrap_or(parts.first().copied().unwrap_or(0) as usize + m);
    let lam = Partition::new(parts, l)?;
    let f = coxops::schur::schur(kind, &lam, m)?;
    emit(ctx, || f.to_string(), || json!({ "kind": kind, "lambda": lam, "m": m, "polynomial": f, "text": f.to_string() }))?;
    Ok(true)
}

pub fn compound(ctx: &Ctx, path: &Path, m: usize, det_only: bool) -> Outcome {
    let a: PolyMatrix = serde_json::from_value(read_json(path)?).context("expected a matrix")?;
    let c = a.compound_matrix(m)?;
    if det_only {
        let d = c.determinant()?;
        emit(ctx, || d.to_string(), || json!({ "det": d }))?;
    } else {
        emit(ctx, || c.to_string(), || json!(c))?;
    }
    Ok(true)
}

fn random_matrix(rng: &mut ChaCha8Rng, l: usize, nvars: usize) -> anyhow::Result<PolyMatrix> {
    if nvars == 0 {
        let rows: Vec<Vec<i64>> = (0..l).map(|_| (0..l).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        return Ok(PolyMatrix::from_integers(&rows, 1)?);
    }
    let mut entries = Vec::with_capacity(l * l);
    for _ in 0..l * l {
        let mut coefs: Vec<Rational> = (0..nvars).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect();
        let constant = Polynomial::constant(nvars, Rational::from_int(rng.gen_range(-5..=5)));
        if rng.gen_bool(0.5) {
            coefs.iter_mut().for_each(|c| *c = Rational::zero());
        }
        entries.push(&Polynomial::linear(&coefs) + &constant);
    }
    Ok(PolyMatrix::new(l, l, entries)?)
}

pub fn cauchy_sylvester(ctx: &Ctx, l: usize, m: usize, trials: usize, nvars: usize) -> Outcome {
    ensure!(m >= 1 && m <= l, "need 1 <= m <= l");
    ensure!(nvars <= coxops::poly::MAX_VARS, "at most {} variables", coxops::poly::MAX_VARS);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let a = random_matrix(&mut rng, l, nvars)?;
        if !a.verify_cauchy_sylvester(m)? {
            failures.push(t);
        }
    }
    let passed = failures.is_empty();
    emit(
        ctx,
        || format!("cauchy-sylvester l={l} m={m}: {} of {trials} passed (seed {})", trials - failures.len(), ctx.seed),
        || json!({ "suite": "cauchy-sylvester", "l": l, "m": m, "trials": trials, "seed": ctx.seed, "failures": failures, "passed": passed }),
    )?;
    Ok(passed)
}

pub fn schur_identity(ctx: &Ctx, kl: KindL, m: usize) -> Outcome {
    let kind: Kind = kl.kind.into();
    let r = schur_identity_report(kind, kl.l, m)?;
    emit(
        ctx,
        || {
            format!(
                "schur-identity type {kind} l={} m={m}: {}\nsign: {:+}\nrhs: {}",
                kl.l,
                if r.holds() { "pass" } else { "FAIL" },
                r.sign,
                r.rhs
            )
        },
        || json!({ "suite": "schur-identity", "kind": kind, "l": kl.l, "m": m, "passed": r.holds(), "sign": r.sign, "rhs": r.rhs.to_string() }),
    )?;
    Ok(r.holds())
}

pub fn invariance(ctx: &Ctx, kl: KindL) -> Outcome {
    let set = build_basis_with(kl.kind.into(), kl.l, BuildOptions { certify: false, ..Default::default() })?;
    let r = invariance_suite(&set)?;
    let passed = r.passed();
    emit(
        ctx,
        || {
            let mut out = format!("invariance type {} l={}: {}\n", r.kind, r.l, if passed { "pass" } else { "FAIL" });
            out.push_str(&format!("thetas invariant: {}\n", r.thetas_invariant));
            out.push_str(&format!("eta action is the standard representation: {}\n", r.eta_matches_standard));
            out.push_str(&format!("block decomposition: {}\n", r.block_decomposition));
            out.push_str(&format!("closed under generators: {}\n", r.closed));
            out.push_str(&format!("defining property: {}\n", r.defining_property));
            out.push_str(&format!("invariant eta combinations: dimension {}", r.invariant_dimension));
            for v in &r.invariant_basis {
                let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
                out.push_str(&format!("\n  ({})", parts.join(", ")));
            }
            for (name, m) in &r.eta_matrices {
                out.push_str(&format!("\n{name}:"));
                for row in m {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
                    out.push_str(&format!("\n  {}", cells.join(" ")));
                }
            }
            out
        },
        || {
            let mut v = json!(r);
            v["passed"] = json!(passed);
            v
        },
    )?;
    Ok(passed)
}

pub fn verify_membership(ctx: &Ctx, kl: KindL) -> Outcome {
    let kind: Kind = kl.kind.into();
    let set = build_basis_with(kind, kl.l, BuildOptions { certify: false, ..Default::default() })?;
    let arr = Arrangement::build(kind, kl.l)?;
    let names = labels(&set);
    let mut failing = Vec::new();
    for (name, op) in names.iter().zip(set.operators()) {
        if !op.member_of(&arr)? {
            failing.push(name.clone());
        }
    }
    let control = DiffOperator::single(MultiIndex::pure(kl.l, 0, 2), Polynomial::one(kl.l))?;
    let control_rejected = !control.member_of(&arr)?;
    let passed = failing.is_empty() && control_rejected;
    emit(
        ctx,
        || {
            format!(
                "membership type {kind} l={}: {}\n{} of {} operators are members\nd1^2 rejected: {control_rejected}",
                kl.l,
                if passed { "pass" } else { "FAIL" },
                names.len() - failing.len(),
                names.len()
            )
        },
        || json!({ "suite": "membership", "kind": kind, "l": kl.l, "failing": failing, "control_rejected": control_rejected, "passed": passed }),
    )?;
    Ok(passed)
}

pub fn act(ctx: &Ctx, word: &str, path: &Path) -> Outcome {
    let op = read_op(path)?;
    let w = SignedPermutation::parse(word, op.l())?;
    let image = act_op(&w, &op)?;
    emit(ctx, || image.to_string(), || json!(image))?;
    Ok(true)
}

pub fn arrangement(ctx: &Ctx, kl: KindL, show_q: bool) -> Outcome {
    let arr = Arrangement::build(kl.kind.into(), kl.l)?;
    emit(
        ctx,
        || {
            let forms: Vec<String> = arr.forms.iter().map(Polynomial::to_string).collect();
            let mut out = format!("type {} l={}: {} hyperplanes\n{}", arr.kind, arr.l, arr.len(), forms.join("\n"));
            if show_q {
                out.push_str(&format!("\nQ = {}", arr.q));
            }
            out
        },
        || {
            let mut v = json!({ "kind": arr.kind, "l": arr.l, "forms": arr.forms });
            if show_q {
                v["q"] = json!(arr.q);
            }
            v
        },
    )?;
    Ok(true)
}
