//! `vbetti`: batch front end for scene files and the built-in example suite.
//!
//! Exit status: 0 success, 1 fixture failure, 2 usage or unknown name,
//! 3 validation failure. Errors go to stderr as one JSON object
//! `{"code", "message", "context"}`.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use vbetti_core::fixtures::{self, FixtureOutcome, FIXTURES};
use vbetti_core::mvss::{compute_pages, mv_report, row_alternating_sums, SpectralPage};
use vbetti_core::scene::{BetaSection, Scene, SceneError};
use vbetti_core::simplicial::betti_mod2;
use vbetti_core::strata::EngineOptions;
use vbetti_core::weights::{
    constraint_filter, mv_profile_vs_virtual_betti, parse_constraints, solve_weight_system,
    LinearConstraint, WeightArray,
};
use vbetti_core::IntPolynomial;

#[derive(Debug, Parser)]
#[command(name = "vbetti", version, about = "Virtual Betti numbers of real varieties from simplicial models")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Treat dimension-law violations as errors.
    #[arg(long, global = true)]
    strict: bool,
    /// Suppress warnings, and PASS lines of the fixture suite.
    #[arg(long, global = true)]
    quiet: bool,
    /// Scene file to load instead of the built-in scene.
    #[arg(long, global = true, value_name = "FILE")]
    scene: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mod-2 Betti numbers of a complex (or the total space of a pair or arrangement).
    Betti { name: String },
    /// Virtual Poincaré polynomial of an expression, cover, stratification, atom or arrangement.
    Vbetti {
        name: String,
        /// Also print beta(-1) and the independently computed chi_c.
        #[arg(long)]
        chi_c: bool,
        /// Look the name up in one section only.
        #[arg(long, value_parser = ["expression", "cover", "stratification", "atom", "arrangement"])]
        section: Option<String>,
    },
    /// Mayer–Vietoris spectral sequence of an arrangement.
    Mvss {
        name: String,
        /// Print E_1 through E_R (pages past E_infinity repeat it).
        #[arg(long, value_name = "R")]
        pages: Option<usize>,
    },
    /// Solve the weight system of a named input.
    Weights {
        name: String,
        /// Extra constraints, one per line.
        #[arg(long, value_name = "FILE")]
        constraints: Option<PathBuf>,
    },
    /// Run or list the built-in example suite.
    Fixtures {
        #[arg(long, conflicts_with = "run")]
        list: bool,
        /// Run one fixture, or all of them when no name is given.
        #[arg(long, value_name = "NAME", num_args = 0..=1, default_missing_value = "")]
        run: Option<String>,
    },
    /// Print the loaded scene as JSON.
    Export,
}

#[derive(Debug)]
struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
    context: Value,
}

impl Failure {
    fn usage(message: impl Display, context: Value) -> Self {
        Failure {
            exit: 2,
            code: "usage",
            message: message.to_string(),
            context,
        }
    }

    fn validation(message: impl Display, context: Value) -> Self {
        Failure {
            exit: 3,
            code: "validation",
            message: message.to_string(),
            context,
        }
    }
}

impl From<SceneError> for Failure {
    fn from(e: SceneError) -> Self {
        match &e {
            SceneError::UnknownName { section, name } => Failure {
                exit: 2,
                code: "unknown-name",
                message: e.to_string(),
                context: json!({ "section": section, "name": name }),
            },
            _ => Failure::validation(&e, json!({})),
        }
    }
}

/// Stdout lines plus warnings, assembled before anything is printed.
struct Output {
    text: Vec<String>,
    json: Value,
    warnings: Vec<String>,
    exit: u8,
}

impl Output {
    fn new(text: Vec<String>, json: Value) -> Self {
        Output {
            text,
            json,
            warnings: Vec::new(),
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let message = e.kind().to_string();
            report(&Failure::usage(message, json!({ "detail": e.to_string().trim_end() })));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if !cli.quiet {
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
            }
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json value")
            } else {
                out.text.join("\n")
            };
            // a closed pipe is not worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(out.exit)
        }
        Err(f) => {
            report(&f);
            ExitCode::from(f.exit)
        }
    }
}

fn report(f: &Failure) {
    let v = json!({ "code": f.code, "message": f.message, "context": f.context });
    eprintln!("{v}");
}

fn load_scene(cli: &Cli) -> Result<Scene, Failure> {
    let options = EngineOptions { strict: cli.strict };
    let Some(path) = &cli.scene else {
        return Ok(fixtures::builtin_scene(options));
    };
    let src = std::fs::read_to_string(path).map_err(|e| {
        Failure::usage(
            format!("cannot read scene file: {e}"),
            json!({ "path": path.display().to_string() }),
        )
    })?;
    Scene::from_json(&src, options).map_err(|e| {
        let mut f = Failure::from(e);
        f.context["path"] = json!(path.display().to_string());
        f
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if let Command::Fixtures { list: true, .. } = cli.command {
        return Ok(list_fixtures());
    }
    let scene = load_scene(cli)?;
    let mut out = match &cli.command {
        Command::Betti { name } => cmd_betti(&scene, name)?,
        Command::Vbetti {
            name,
            chi_c,
            section,
        } => cmd_vbetti(&scene, name, *chi_c, section.as_deref())?,
        Command::Mvss { name, pages } => cmd_mvss(&scene, name, *pages)?,
        Command::Weights { name, constraints } => cmd_weights(&scene, name, constraints.as_ref())?,
        Command::Fixtures { run, .. } => cmd_fixtures(&scene, run.as_deref().unwrap_or(""), cli.quiet)?,
        Command::Export => Output::new(
            vec![scene.to_json()],
            serde_json::from_str(&scene.to_json()).expect("scene json"),
        ),
    };
    out.warnings.splice(0..0, scene.warnings.iter().cloned());
    Ok(out)
}

fn spaced<T: Display>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_betti(scene: &Scene, name: &str) -> Result<Output, Failure> {
    let k = scene.homology_target(name)?;
    let b = betti_mod2(k);
    Ok(Output::new(
        vec![format!("b: {b}")],
        json!({ "name": name, "b": b.dims(), "euler": b.euler() }),
    ))
}

fn section_of(label: &str) -> BetaSection {
    BetaSection::SEARCH_ORDER
        .into_iter()
        .find(|s| s.label() == label)
        .expect("clap restricts the section names")
}

fn coeff_list(p: &IntPolynomial) -> Vec<i64> {
    p.coeffs().to_vec()
}

fn cmd_vbetti(scene: &Scene, name: &str, chi_c: bool, section: Option<&str>) -> Result<Output, Failure> {
    let v = match section {
        None => scene.virtual_betti(name)?,
        Some(label) => {
            let s = section_of(label);
            scene.virtual_betti_in(s, name)?.ok_or(SceneError::UnknownName {
                section: s.label(),
                name: name.to_string(),
            })?
        }
    };
    let coeffs = coeff_list(&v.beta);
    let mut text = vec![
        format!("beta: {}", v.beta),
        format!("beta_i: {}", if coeffs.is_empty() { "0".into() } else { spaced(&coeffs) }),
    ];
    let mut js = json!({
        "name": name,
        "kind": v.kind,
        "beta": v.beta.to_string(),
        "coefficients": coeffs,
        "declared": v.declared,
    });
    if chi_c {
        let at_minus_one = v
            .beta
            .eval(-1)
            .map_err(|e| Failure::validation(e, json!({ "name": name })))?;
        text.push(format!("beta(-1): {at_minus_one}"));
        match v.chi_c {
            Some(c) => {
                let agree = if c == at_minus_one { "agrees" } else { "DISAGREES" };
                text.push(format!("chi_c: {c} ({agree})"));
            }
            None => text.push("chi_c: unavailable (declared data)".into()),
        }
        js["beta_at_minus_one"] = json!(at_minus_one);
        js["chi_c"] = json!(v.chi_c);
    }
    if !v.declared.is_empty() {
        text.push(format!("declared: {}", v.declared.join(", ")));
    }
    let mut out = Output::new(text, js);
    out.warnings = v.warnings;
    Ok(out)
}

fn page_json(page: &SpectralPage) -> Value {
    let rows: Vec<Value> = (0..=page.max_q().unwrap_or(0))
        .map(|q| json!(page.row(q)))
        .collect();
    json!({ "r": page.r, "rows": rows })
}

fn cmd_mvss(scene: &Scene, name: &str, pages: Option<usize>) -> Result<Output, Failure> {
    let a = scene.arrangement(name)?;
    let fail = |e: &dyn Display| Failure::validation(e, json!({ "arrangement": name }));
    let rep = mv_report(a).map_err(|e| fail(&e))?;
    let beta = a.inclusion_exclusion_beta().map_err(|e| fail(&e))?;
    let degrees = rep.profile.len();
    let beta_list: Vec<i64> = (0..degrees).map(|j| beta.coeff(j)).collect();
    let ss = &rep.sequence;
    let shown = match pages {
        Some(r) => compute_pages(a, r).map_err(|e| fail(&e))?,
        None => ss.pages.clone(),
    };

    let mut text = vec![format!(
        "arrangement {name}: {} pieces ({})",
        a.len(),
        a.names().join(", ")
    )];
    let mut pages_js = Vec::new();
    for page in &shown {
        text.push(format!("E_{}:", page.r));
        text.extend(page.render().lines().map(|l| format!("  {l}")));
        let sums = row_alternating_sums(page);
        let ok = sums.iter().zip(&beta_list).all(|(s, b)| s == b) && sums.len() == beta_list.len();
        text.push(format!(
            "  row sums: {} ({} beta {})",
            spaced(&sums),
            if ok { "=" } else { "!=" },
            spaced(&beta_list)
        ));
        if let Some(d) = ss.differentials.get(page.r - 1).filter(|_| page.r <= ss.pages.len()) {
            let nonzero: Vec<String> = d
                .nonzero()
                .map(|((p, q), rank)| format!("({p},{q})->({},{}) rank {rank}", p + d.r, q + 1 - d.r))
                .collect();
            if !nonzero.is_empty() {
                text.push(format!("  d_{}: {}", d.r, nonzero.join(", ")));
            }
        }
        let mut pj = page_json(page);
        pj["row_sums"] = json!(sums);
        pages_js.push(pj);
    }
    let cert = &ss.certificate;
    text.push(format!(
        "E_infinity = E_{}: computed d_s = 0 for s = {}; d_s has no room to act for s >= {}",
        cert.page,
        spaced(&cert.checked),
        cert.structural_bound
    ));
    text.push(format!("b: {}", rep.betti));
    text.push(format!("profile: {}", rep.profile.inline()));
    text.push(rep.profile.to_string());
    let verdict = mv_profile_vs_virtual_betti(&rep.profile, &beta_list);
    if verdict.holds() {
        text.push("virtual Betti condition: holds".into());
    } else {
        let rows: Vec<String> = verdict
            .rows
            .iter()
            .filter(|r| r.alternating_sum != r.beta)
            .map(|r| format!("row {}: {} != {}", r.j, r.alternating_sum, r.beta))
            .collect();
        text.push(format!("virtual Betti condition: fails ({})", rows.join(", ")));
    }
    let differentials: Vec<Value> = ss
        .differentials
        .iter()
        .map(|d| {
            let nz: Vec<Value> = d
                .nonzero()
                .map(|((p, q), rank)| json!({ "from": [p, q], "to": [p + d.r, q + 1 - d.r], "rank": rank }))
                .collect();
            json!({ "r": d.r, "nonzero": nz })
        })
        .collect();
    let js = json!({
        "name": name,
        "pieces": a.names(),
        "pages": pages_js,
        "differentials": differentials,
        "certificate": cert,
        "b": rep.betti.dims(),
        "profile": rep.profile,
        "beta": beta_list,
        "virtual_betti_condition": verdict,
    });
    Ok(Output::new(text, js))
}

fn cmd_weights(scene: &Scene, name: &str, extra: Option<&PathBuf>) -> Result<Output, Failure> {
    let wi = scene.weight_input(name)?;
    let mut constraints: Vec<LinearConstraint> = wi.constraints.clone();
    if let Some(path) = extra {
        let ctx = json!({ "path": path.display().to_string() });
        let src = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read constraints file: {e}"), ctx.clone()))?;
        constraints.extend(parse_constraints(&src).map_err(|e| Failure::validation(e, ctx))?);
    }
    let input = &wi.input;
    let solutions = solve_weight_system(input);
    let filtered = constraint_filter(&solutions, &constraints)
        .map_err(|e| Failure::validation(e, json!({ "weight_input": name })))?;

    let mut text = vec![
        format!("b: {}", spaced(&input.b)),
        format!("beta: {}", spaced(&input.beta)),
        format!("{} solution{}", solutions.len(), if solutions.len() == 1 { "" } else { "s" }),
    ];
    for (k, w) in solutions.iter().enumerate() {
        text.push(format!("solution {}: {}", k + 1, w.inline()));
        text.extend(w.to_string().lines().map(|l| format!("  {l}")));
    }
    let note_of = |text: &str| {
        constraints
            .iter()
            .find(|c| c.text == text)
            .and_then(|c| c.note.clone())
    };
    if !constraints.is_empty() {
        text.push(format!(
            "constraints: {}",
            constraints.iter().map(|c| c.text.as_str()).collect::<Vec<_>>().join(", ")
        ));
        for (w, c) in &filtered.eliminated {
            let idx = solutions.iter().position(|s| s == w).map_or(0, |i| i + 1);
            let note = note_of(c).map(|n| format!(" ({n})")).unwrap_or_default();
            text.push(format!("solution {idx} eliminated by {c}{note}"));
        }
        match filtered.infeasibility_message() {
            Some(m) => text.push(m),
            None => text.push(format!(
                "{} surviving: {}",
                filtered.survivors.len(),
                filtered
                    .survivors
                    .iter()
                    .map(WeightArray::inline)
                    .collect::<Vec<_>>()
                    .join(" | ")
            )),
        }
    }
    let eliminated: Vec<Value> = filtered
        .eliminated
        .iter()
        .map(|(w, c)| json!({ "solution": w, "violates": c, "note": note_of(c) }))
        .collect();
    let js = json!({
        "name": name,
        "b": input.b,
        "beta": input.beta,
        "solutions": solutions,
        "constraints": constraints.iter().map(|c| c.text.clone()).collect::<Vec<_>>(),
        "survivors": filtered.survivors,
        "eliminated": eliminated,
        "infeasible": !constraints.is_empty() && filtered.is_infeasible(),
    });
    Ok(Output::new(text, js))
}

fn list_fixtures() -> Output {
    let text = FIXTURES.iter().map(|(n, d)| format!("{n:<28} {d}")).collect();
    let js = FIXTURES
        .iter()
        .map(|(n, d)| json!({ "name": n, "description": d }))
        .collect();
    Output::new(text, Value::Array(js))
}

fn outcome_json(o: &FixtureOutcome) -> Value {
    let checks: Vec<Value> = o
        .checks
        .iter()
        .map(|c| json!({ "label": c.label, "expected": c.expected, "actual": c.actual, "passed": c.passed() }))
        .collect();
    json!({ "name": o.name, "passed": o.passed(), "error": o.error, "checks": checks })
}

fn cmd_fixtures(scene: &Scene, name: &str, quiet: bool) -> Result<Output, Failure> {
    let outcomes = if name.is_empty() {
        fixtures::run_all(scene)
    } else {
        let o = fixtures::run_fixture(scene, name).ok_or_else(|| Failure {
            exit: 2,
            code: "unknown-name",
            message: format!("no fixture named {name:?}"),
            context: json!({ "section": "fixture", "name": name }),
        })?;
        vec![o]
    };
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let mut text: Vec<String> = outcomes
        .iter()
        .filter(|o| !quiet || !o.passed())
        .map(FixtureOutcome::summary)
        .collect();
    if outcomes.len() > 1 {
        text.push(format!("{} passed, {failed} failed", outcomes.len() - failed));
    }
    let js = json!({
        "passed": outcomes.len() - failed,
        "failed": failed,
        "fixtures": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
    });
    let mut out = Output::new(text, js);
    out.exit = if failed > 0 { 1 } else { 0 };
    Ok(out)
}
