use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use super::input::{load_actions, load_generators, load_lattice, parse_generators};
use super::{
    BuildArgs, CliError, Command, FormArgs, FormOnly, Format, NliArgs, OutputArgs, Report, RescaleArgs, RunConfig,
    Suite, TelArgs, VerifyArgs,
};
use crate::dihedral::Dihedral2aReport;
use crate::exact::parse_rational;
use crate::forms::manifest::FormManifest;
use crate::forms::*;
use crate::latgroup::LatGroupError;
use crate::voa::literal::format_element;
use crate::voa::{EvenLattice, GradedVector, Truncation, TruncatedVOA};

pub(super) fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a),
        Command::Rescale(a) => rescale(a),
        Command::Dual(a) => dual(a),
        Command::Tel(a) => tel(a),
        Command::Dihedral2a(a) => Ok(dihedral(a)),
        Command::NliTransfer(a) => nli(a),
    }
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text(),
    }
}

fn mark(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Host VOA, truncated generators and the generated form.
struct Built {
    host: Arc<TruncatedVOA>,
    form: TruncatedForm,
    trace: SaturationTrace,
    config: RunConfig,
}

fn truncate_generators(host: &TruncatedVOA, gens: Vec<GradedVector>, mode: Truncation) -> Result<Vec<GradedVector>, CliError> {
    let n = host.cutoff();
    gens.into_iter()
        .enumerate()
        .map(|(i, g)| {
            let parts = g.components(host.lattice());
            if parts.keys().any(|&d| d > n) {
                if mode == Truncation::Error {
                    return Err(CliError::Input(format!("generators[{i}] has a component above degree {n}")));
                }
                let mut kept = GradedVector::zero();
                for (_, c) in parts.into_iter().filter(|(d, _)| *d <= n) {
                    kept = &kept + &c;
                }
                return Ok(kept);
            }
            Ok(g)
        })
        .collect()
}

fn build_form(lattice: EvenLattice, gens: Vec<GradedVector>, config: RunConfig) -> Result<Built, CliError> {
    let host = Arc::new(TruncatedVOA::new(lattice, config.cutoff));
    let gens = truncate_generators(&host, gens, config.truncation)?;
    let (form, trace) = generate_form(&host, &gens, config.saturation)?;
    Ok(Built { host, form, trace, config })
}

fn build_from_args(form: &FormArgs, output: &OutputArgs) -> Result<Built, CliError> {
    let config = RunConfig::new(form, output)?;
    let lattice = load_lattice(&form.lattice)?;
    let gens = match &form.generators {
        Some(p) => load_generators(p, lattice.rank())?,
        None => Vec::new(),
    };
    build_form(lattice, gens, config)
}

impl Built {
    fn gen_degree(&self) -> u32 {
        self.config.gen_degree.unwrap_or(self.form.gen_degree())
    }
}

fn build(args: &BuildArgs) -> Result<Report, CliError> {
    let b = build_from_args(&args.form, &args.output)?;
    let manifest = FormManifest::from_form(&b.form);
    let Some(out) = &args.out else {
        return Ok(Report { text: manifest.to_json() + "\n", passed: true });
    };
    std::fs::write(out, manifest.to_json() + "\n").map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
    let summary = json!({
        "manifest": out.display().to_string(),
        "scope": format!("degrees<={}", b.config.cutoff),
        "ranks": b.form.ranks(),
        "passes": b.trace.passes.len(),
        "denominators": b.trace.denominator_sequences(),
    });
    let text = render(args.output.format, &summary, || {
        let mut s = format!("wrote {}\nranks by degree: {:?}\n", out.display(), b.form.ranks());
        for (d, seq) in b.trace.denominator_sequences() {
            let _ = writeln!(s, "degree {d} denominators per pass: {}", seq.join(" "));
        }
        s
    });
    Ok(Report { text, passed: true })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    statement: &'static str,
    applicable: bool,
    passed: bool,
    detail: Value,
}

#[derive(Serialize)]
struct VerifyReport {
    scope: String,
    seed: u64,
    ranks: Vec<usize>,
    checks: Vec<Check>,
    passed: bool,
}

fn manifest_li(manifest: &FormManifest) -> Result<Option<LiWitness>, CliError> {
    for (s, entry) in &manifest.degrees {
        for (i, row) in entry.gram.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let v = parse_rational(x).map_err(|e| CliError::Input(format!("degrees.{s}.gram[{i}][{j}]: {e}")))?;
                if !v.is_integer() {
                    let degree = s.parse().map_err(|_| CliError::Input(format!("degrees.{s}: not a degree")))?;
                    return Ok(Some(LiWitness { degree, i, j, value: x.clone() }));
                }
            }
        }
    }
    Ok(None)
}

fn verify(args: &VerifyArgs) -> Result<Report, CliError> {
    if args.suite == Suite::Dihedral2a {
        return Ok(dihedral(&args.output));
    }
    let path = args.manifest.as_ref().ok_or_else(|| CliError::Input("verify needs --manifest".into()))?;
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let manifest = FormManifest::from_json(&raw)?;
    let lattice = EvenLattice::from_json(&manifest.lattice).map_err(|e| CliError::Input(format!("lattice: {e}")))?;
    let gens = parse_generators(&manifest.generators, lattice.rank())?;
    let config = RunConfig {
        cutoff: manifest.cutoff,
        gen_degree: None,
        saturation: SaturationConfig { iteration_bound: args.iter_bound },
        truncation: Truncation::Error,
        format: args.output.format,
        seed: args.output.seed,
    };
    let b = build_form(lattice, gens, config)?;
    let checks = suite(&b, &manifest)?;
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        scope: format!("degrees<={}", manifest.cutoff),
        seed: args.output.seed,
        ranks: b.form.ranks(),
        checks,
        passed,
    };
    let text = render(args.output.format, &report, || {
        let mut s = format!("scope {} seed {}\n", report.scope, report.seed);
        for c in &report.checks {
            let state = if c.applicable { mark(c.passed) } else { "N/A " };
            let _ = writeln!(s, "{state} {}: {}", c.name, c.statement);
            if !c.passed || !c.applicable {
                let _ = writeln!(s, "     {}", c.detail);
            }
        }
        let _ = writeln!(s, "{}", if passed { "all checks passed" } else { "some checks failed" });
        s
    });
    Ok(Report { text, passed })
}

fn check(name: &'static str, statement: &'static str, passed: bool, detail: Value) -> Check {
    Check { name, statement, applicable: true, passed, detail }
}

fn suite(b: &Built, manifest: &FormManifest) -> Result<Vec<Check>, CliError> {
    let form = &b.form;
    let host = &b.host;
    let n = host.cutoff();
    let mut checks = Vec::new();

    let recomputed = FormManifest::from_form(form);
    let mismatch: Vec<&String> = recomputed
        .degrees
        .iter()
        .filter(|(s, e)| manifest.degrees.get(*s) != Some(e))
        .map(|(s, _)| s)
        .collect();
    checks.push(check(
        "manifest",
        "recorded ranks and Gram matrices match a fresh generation",
        mismatch.is_empty() && recomputed.degrees.len() == manifest.degrees.len(),
        json!({ "mismatched_degrees": mismatch }),
    ));

    let witness = manifest_li(manifest)?;
    checks.push(check("check_li", "every recorded Gram entry is an integer", witness.is_none(), json!({ "witness": witness })));

    let m = minimal_li_scale(form);
    let lemma1 = match lemma1_construct(form, &m, b.config.seed) {
        Ok(r) => json!({ "m": m.to_string(), "ranks": r.form.ranks(), "closure_samples": r.closure.checked }),
        Err(e) => json!({ "m": m.to_string(), "error": e.to_string() }),
    };
    let ok = lemma1.get("error").is_none();
    checks.push(check("lemma1", "mJ + Z vac is closed and lattice integral when mJ is", ok, lemma1));

    let mut stability = Vec::new();
    for k in 1..=n {
        stability.push(dual_stability_check(form, k)?);
    }
    checks.push(check(
        "dual_stability",
        "L(1)^n/n! maps J° into J° for 1 <= n <= N",
        stability.iter().all(|r| r.holds),
        json!({ "failures": stability.iter().filter(|r| !r.holds).collect::<Vec<_>>() }),
    ));

    let rescaled = dongl1_rescale(form, b.gen_degree(), b.config.saturation);
    let detail = match &rescaled {
        Ok(r) => json!({ "m1": r.m1.to_string(), "m2": r.m2.to_string(), "ranks": r.form.ranks() }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    checks.push(check("rescale", "Z vac + m1 m2 (J_1 + ... + J_t) generates a lattice integral form", rescaled.is_ok(), detail));

    let quasi: Vec<bool> = form
        .generators()
        .iter()
        .map(|g| host.is_quasi_primary(g))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let li = check_li(form);
    let mut qp = check(
        "quasi_primary",
        "a form generated by quasi-primary vectors is lattice integral",
        li.passed,
        json!({ "quasi_primary": quasi, "witness": li.witness }),
    );
    if !quasi.iter().all(|&q| q) {
        qp.applicable = false;
        qp.passed = true;
    }
    checks.push(qp);

    let theta = VOAAutomorphism::minus_one(host.lattice());
    let tel = tel_summary(form, &[theta])?;
    checks.push(check(
        "tel",
        "2^r J is contained in Tel(J) for the lift of -1 (r = 1)",
        tel.iter().all(|t| t.within_bound),
        json!({ "exponents": tel.iter().map(|t| t.exponent.clone()).collect::<Vec<_>>() }),
    ));

    let vac = vac_intersection(form);
    checks.push(check(
        "vacuum",
        "J_0 = nZ vac for a positive integer n",
        vac.is_ok(),
        match vac {
            Ok(v) => json!({ "n": v.to_string() }),
            Err(e) => json!({ "error": e.to_string() }),
        },
    ));

    let mut vac_failures = Vec::new();
    for d in 0..=n {
        for mono in host.graded_basis(d).map_err(|e| CliError::Input(e.to_string()))? {
            let a = GradedVector::monomial(mono.clone());
            for (kind, k) in host.vacuum_identity_failures(&a).map_err(|e| CliError::Input(e.to_string()))? {
                vac_failures.push(json!({ "element": format_element(&a), "identity": kind, "k": k }));
            }
        }
    }
    checks.push(check(
        "vacuum_products",
        "vac_k a = δ_{k,-1} a and a_k vac = L(-1)^(-k-1) a / (-k-1)! for k <= -1, 0 for k >= 0",
        vac_failures.is_empty(),
        json!({ "failures": vac_failures }),
    ));
    Ok(checks)
}

fn scaled_input(b: &Built, args: &RescaleArgs) -> Result<TruncatedForm, CliError> {
    match (args.scale_degree, &args.scale) {
        (Some(s), Some(c)) => {
            if s > b.config.cutoff {
                return Err(CliError::Input(format!("--scale-degree {s} exceeds --max-degree")));
            }
            let c = parse_rational(c).map_err(|e| CliError::Input(format!("--scale: {e}")))?;
            if c == BigInt::from(0).into() {
                return Err(CliError::Input("--scale must be nonzero".into()));
            }
            Ok(b.form.with_piece(s, b.form.piece(s).scaled(&c)))
        }
        _ => Ok(b.form.clone()),
    }
}

fn rescale(args: &RescaleArgs) -> Result<Report, CliError> {
    let b = build_from_args(&args.form, &args.output)?;
    let input = scaled_input(&b, args)?;
    let t = b.gen_degree();
    let input_li = check_li(&input);
    let r = match dongl1_rescale(&input, t, b.config.saturation) {
        Ok(r) => r,
        Err(FormError::NotIntegral(w)) => {
            let v = json!({ "passed": false, "witness": w });
            return Ok(Report { text: render(args.output.format, &v, || format!("FAIL rescaled form not integral: {v}\n")), passed: false });
        }
        Err(e) => return Err(e.into()),
    };
    let v = json!({
        "scope": r.li.scope,
        "seed": b.config.seed,
        "gen_degree": t,
        "input_li": input_li.passed,
        "input_minimal_scale": minimal_li_scale(&input).to_string(),
        "m1": r.m1.to_string(),
        "m2": r.m2.to_string(),
        "m": r.m().to_string(),
        "ranks": r.form.ranks(),
        "li": r.li.passed,
    });
    let text = render(args.output.format, &v, || {
        format!(
            "{} J(m) lattice integral ({})\nm1 = {}, m2 = {}, m = {}\ninput LI: {}\nranks of J(m): {:?}\n",
            mark(r.li.passed),
            r.li.scope,
            r.m1,
            r.m2,
            r.m(),
            input_li.passed,
            r.form.ranks()
        )
    });
    Ok(Report { text, passed: r.li.passed })
}

#[derive(Serialize)]
struct DualDegree {
    degree: u32,
    rank: usize,
    full_rank: bool,
    contained: bool,
    self_dual: bool,
    /// Exponent of `J°/(J ∩ J°)`.
    exponent: String,
}

fn dual(args: &FormOnly) -> Result<Report, CliError> {
    let b = build_from_args(&args.form, &args.output)?;
    let d = dual_form(&b.form)?;
    let mut rows = Vec::new();
    for s in 0..=b.config.cutoff {
        let (j, dd) = (b.form.piece(s), d.piece(s));
        let meet = j.intersect(dd).map_err(FormError::from)?;
        rows.push(DualDegree {
            degree: s,
            rank: j.rank(),
            full_rank: !d.partial.contains(&s),
            contained: dd.contains_lattice(j),
            self_dual: j == dd,
            exponent: dd.quotient_exponent(&meet).map_err(FormError::from)?.to_string(),
        });
    }
    let li = check_li(&b.form).passed;
    let consistent = li == rows.iter().all(|r| r.contained);
    let v = json!({ "scope": format!("degrees<={}", b.config.cutoff), "li": li, "degrees": rows, "consistent": consistent });
    let text = render(args.output.format, &v, || {
        let mut s = format!("{:>6} {:>5} {:>9} {:>9} {:>9} {:>8}\n", "degree", "rank", "full", "J<=J°", "self-dual", "exponent");
        for r in &rows {
            let _ = writeln!(
                s,
                "{:>6} {:>5} {:>9} {:>9} {:>9} {:>8}",
                r.degree, r.rank, r.full_rank, r.contained, r.self_dual, r.exponent
            );
        }
        let _ = writeln!(s, "{} lattice integral iff contained in dual", mark(consistent));
        s
    });
    Ok(Report { text, passed: consistent })
}

fn tel(args: &TelArgs) -> Result<Report, CliError> {
    let b = build_from_args(&args.form, &args.output)?;
    let auts = match &args.action {
        Some(p) => load_actions(p, b.host.lattice())?,
        None => vec![VOAAutomorphism::minus_one(b.host.lattice())],
    };
    let rows = tel_summary(&b.form, &auts).map_err(|e| match e {
        FormError::Group(LatGroupError::NotPreserved(i)) => {
            CliError::Input(format!("automorphisms[{i}] does not preserve the form"))
        }
        other => other.into(),
    })?;
    let passed = rows.iter().all(|r| r.within_bound && r.eigen_ranks.iter().map(|(_, k)| k).sum::<usize>() == r.rank);
    let v = json!({ "scope": format!("degrees<={}", b.config.cutoff), "r": auts.len(), "degrees": rows, "passed": passed });
    let text = render(args.output.format, &v, || {
        let mut s = format!("{:>6} {:>5} {:>24} {:>8} {:>6}\n", "degree", "rank", "eigen ranks", "exponent", "bound");
        for r in &rows {
            let ranks: Vec<String> = r.eigen_ranks.iter().map(|(c, k)| format!("{c:?}:{k}")).collect();
            let _ = writeln!(s, "{:>6} {:>5} {:>24} {:>8} {:>6}", r.degree, r.rank, ranks.join(" "), r.exponent, r.bound);
        }
        let _ = writeln!(s, "{} exponent of J/Tel(J) divides 2^r in every degree", mark(passed));
        s
    });
    Ok(Report { text, passed })
}

fn dihedral(args: &OutputArgs) -> Report {
    let r = Dihedral2aReport::compute();
    let passed = r.nu_associative.associative && !r.killing_associative.associative && r.proportional.is_none();
    Report { text: render(args.format, &r, || r.to_string()), passed }
}

fn nli(args: &NliArgs) -> Result<Report, CliError> {
    let b = build_from_args(&args.form, &args.output)?;
    let other = load_generators(&args.other_generators, b.host.lattice().rank())?;
    let other = truncate_generators(&b.host, other, b.config.truncation)?;
    let (k, _) = generate_form(&b.host, &other, b.config.saturation)?;
    let report = match NliTransfer::new(&b.form, &k) {
        Ok(r) => r,
        Err(FormError::RankMismatch { degree, left, right }) => {
            return Err(CliError::Input(format!("forms have ranks {left} and {right} in degree {degree}")))
        }
        Err(e) => return Err(e.into()),
    };
    let text = render(args.output.format, &report, || {
        format!("{}\nmJ <= K for m = {}\nmK <= J for m = {}\n", report.scope, report.j_into_k, report.k_into_j)
    });
    Ok(Report { text, passed: true })
}
