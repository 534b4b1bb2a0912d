//! `qshap`: command-line front end for qshap-core.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use qshap_core::acceptance::Suite;
use qshap_core::centre::{central_truncation, invariant_search, t_g, z_membership};
use qshap_core::enveloping::Uea;
use qshap_core::modrep::{
    character_coefficients, check_generic_vector, classify_weight, default_cutoff, default_rho_prime,
    hyperplanes_through, is_simple_weyl, jantzen_orders, sum_formula_check, MatrixFamily, ModuleKind,
};
use qshap_core::shapovalov::{basis_labels, shapovalov_matrix, verify_factorization, ShapovalovReport, Side};
use qshap_core::{parse_poly, AlgebraKind, Error, Polynomial, RootVector, Weight};

const SCHEMA: &str = "qshap/1";

#[derive(Parser, Debug)]
#[command(name = "qshap", version, about = "Shapovalov determinants for q(n), sq(n), pq(n), psq(n)")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// q, sq, pq or psq
    #[arg(long, default_value = "q")]
    kind: String,
    /// n in q(n)
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// JSON output
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Print the Shapovalov matrix B_ν
    Matrix {
        #[command(flatten)]
        common: Common,
        /// ν in simple-root coordinates, e.g. 1,1
        #[arg(long)]
        nu: String,
    },
    /// det B_ν and its Norm
    Det {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        nu: String,
    },
    /// Check det B_ν against the closed form for one ν or all ν up to a height
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "max_height")]
        nu: Option<String>,
        #[arg(long)]
        max_height: Option<u32>,
    },
    /// Is the Weyl module N(λ) simple?
    Simple {
        #[command(flatten)]
        common: Common,
        /// λ in h-coordinates, e.g. 1/3,0,-2
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Regular, subregular or degenerate
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Vanishing orders of det B_ν(λ + xρ') at x = 0
    Jantzen {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        rho_prime: Option<String>,
        #[arg(long)]
        max_height: Option<u32>,
    },
    /// Vanishing order against the determinant formula
    Sumcheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        rho_prime: Option<String>,
        #[arg(long, conflicts_with = "max_height")]
        nu: Option<String>,
        #[arg(long)]
        max_height: Option<u32>,
    },
    /// Weight multiplicities of M(λ) and N(λ)
    Char {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        max_height: Option<u32>,
    },
    /// Is a polynomial in the image of the centre?
    CentreCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// t_g = HC(T_g²)
    Tg {
        #[command(flatten)]
        common: Common,
    },
    /// Bounded search for central (or anticentral) elements
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long)]
        twisted: bool,
    },
    /// Build z = Σ z_ν from φ up to a cutoff ν
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        nu: String,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long)]
        json: bool,
        /// Only these criteria, e.g. 2,8 (default: all twelve)
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

/// Exit status: 0 success, 1 verification mismatch, 2 usage error.
enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FactorizationMismatch(_) | Error::DivisibilityFailure(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, String, bool), Failure>;

fn kind_of(c: &Common) -> Result<AlgebraKind, Error> {
    AlgebraKind::parse(&c.kind, c.rank)
}

fn weight(kind: AlgebraKind, src: &str) -> Result<Weight, Error> {
    let w: Weight = src.parse()?;
    kind.check_weight(&w)?;
    Ok(w)
}

fn root_vector(kind: AlgebraKind, src: &str) -> Result<RootVector, Error> {
    let nu: RootVector = src.parse()?;
    kind.check_root_vector(&nu)?;
    Ok(nu)
}

fn rho_prime(kind: AlgebraKind, src: &Option<String>) -> Result<Weight, Error> {
    let rho = match src {
        Some(s) => s.parse()?,
        None => default_rho_prime(kind),
    };
    check_generic_vector(kind, &rho)?;
    Ok(rho)
}

fn nus(kind: AlgebraKind, nu: &Option<String>, max_height: Option<u32>, default: u32) -> Result<Vec<RootVector>, Error> {
    match nu {
        Some(s) => Ok(vec![root_vector(kind, s)?]),
        None => Ok(RootVector::up_to_height(kind.rank(), max_height.unwrap_or(default))),
    }
}

fn names(kind: AlgebraKind) -> Vec<String> {
    Polynomial::default_names(kind.arity())
}

fn report_json(r: &ShapovalovReport) -> Value {
    let nm = names(r.kind);
    let matrix: Vec<Vec<String>> =
        (0..r.size).map(|i| (0..r.size).map(|j| r.matrix.get(i, j).fmt_with(&nm)).collect()).collect();
    json!({
        "kind": r.kind.to_string(),
        "n": r.kind.rank(),
        "nu": r.nu.0,
        "size": r.size,
        "matrix": matrix,
        "det": r.det.fmt_with(&nm),
        "closedForm": r.closed_form.fmt_with(&nm),
        "scalar": r.scalar.to_string(),
        "norm": r.norm.fmt_with(&nm),
        "leadingOk": r.leading_ok,
        "degreeOk": r.degree_ok,
        "method": format!("{:?}", r.method),
    })
}

fn run(verb: Verb) -> Outcome {
    match verb {
        Verb::Matrix { common, nu } => {
            let kind = kind_of(&common)?;
            let nu = root_vector(kind, &nu)?;
            let uea = Uea::new(kind);
            let sm = shapovalov_matrix(&uea, kind, &nu)?;
            let nm = names(kind);
            let rows = basis_labels(&uea, Side::Minus, &nu)?;
            let cols = basis_labels(&uea, Side::Plus, &nu)?;
            let entries: Vec<Vec<String>> = (0..sm.size())
                .map(|i| (0..sm.size()).map(|j| sm.matrix.get(i, j).fmt_with(&nm)).collect())
                .collect();
            let mut text = format!("B_{nu} for {kind}, size {}\n", sm.size());
            for (i, row) in entries.iter().enumerate() {
                text.push_str(&format!("{:<20} | {}\n", rows[i], row.join(" | ")));
            }
            text.push_str(&format!("columns: {}", cols.join(", ")));
            Ok((json!({"nu": nu.to_string(), "rows": rows, "columns": cols, "entries": entries}), text, true))
        }
        Verb::Det { common, nu } => {
            let kind = kind_of(&common)?;
            let nu = root_vector(kind, &nu)?;
            let r = verify_factorization(&Uea::new(kind), kind, &nu)?;
            let nm = names(kind);
            let text = format!("{kind} nu={nu}\n  det  = {}\n  Norm = {}", r.det.fmt_with(&nm), r.norm.fmt_with(&nm));
            Ok((report_json(&r), text, r.leading_ok && r.degree_ok))
        }
        Verb::Verify { common, nu, max_height } => {
            let kind = kind_of(&common)?;
            let list = nus(kind, &nu, max_height, 2)?;
            let results: Vec<(RootVector, Result<ShapovalovReport, Error>)> = list
                .into_par_iter()
                .map_init(|| Uea::new(kind), |uea, nu| {
                    let r = verify_factorization(uea, kind, &nu);
                    (nu, r)
                })
                .collect();
            let mut ok = true;
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for (nu, r) in results {
                match r {
                    Ok(rep) => {
                        let good = rep.leading_ok && rep.degree_ok;
                        ok &= good;
                        lines.push(format!(
                            "{:<8} size {:>4}  {}  leading {}  degree {}",
                            nu.to_string(),
                            rep.size,
                            if good { "ok" } else { "MISMATCH" },
                            rep.leading_ok,
                            rep.degree_ok
                        ));
                        items.push(report_json(&rep));
                    }
                    Err(e) => {
                        ok = false;
                        lines.push(format!("{:<8} MISMATCH  {e}", nu.to_string()));
                        items.push(json!({"nu": nu.0, "error": e.to_string()}));
                    }
                }
            }
            Ok((json!({"ok": ok, "results": items}), format!("{kind}\n{}", lines.join("\n")), ok))
        }
        Verb::Simple { common, lambda } => {
            let kind = kind_of(&common)?;
            let w = weight(kind, &lambda)?;
            let simple = is_simple_weyl(kind, &w)?;
            let witnesses: Vec<String> = hyperplanes_through(kind, &w)?.iter().map(ToString::to_string).collect();
            let text = if simple {
                format!("N({w}) is simple")
            } else {
                format!("N({w}) is not simple: {}", witnesses.join(", "))
            };
            Ok((json!({"lambda": w.to_string(), "simple": simple, "witnesses": witnesses}), text, true))
        }
        Verb::Classify { common, lambda } => {
            let kind = kind_of(&common)?;
            let w = weight(kind, &lambda)?;
            let class = classify_weight(kind, &w)?;
            let hs: Vec<String> = class.hyperplanes().iter().map(ToString::to_string).collect();
            let text = format!("{w}: {}{}", class.name(), if hs.is_empty() { String::new() } else { format!(" ({})", hs.join(", ")) });
            Ok((json!({"lambda": w.to_string(), "class": class.name(), "hyperplanes": hs}), text, true))
        }
        Verb::Jantzen { common, lambda, rho_prime: rho, max_height } => {
            let kind = kind_of(&common)?;
            let w = weight(kind, &lambda)?;
            let rho = rho_prime(kind, &rho)?;
            let family = MatrixFamily::new(kind, max_height.unwrap_or(default_cutoff(kind)))?;
            let orders = jantzen_orders(&family, &w, &rho)?;
            let lines: Vec<String> = orders.iter().map(|(nu, k)| format!("{:<8} {k}", nu.to_string())).collect();
            let map: serde_json::Map<String, Value> = orders.iter().map(|(nu, k)| (nu.to_string(), json!(k))).collect();
            Ok((json!({"lambda": w.to_string(), "rho_prime": rho.to_string(), "orders": map}), lines.join("\n"), true))
        }
        Verb::Sumcheck { common, lambda, rho_prime: rho, nu, max_height } => {
            let kind = kind_of(&common)?;
            let w = weight(kind, &lambda)?;
            let rho = rho_prime(kind, &rho)?;
            let list = nus(kind, &nu, max_height, default_cutoff(kind))?;
            let top = list.iter().map(RootVector::height).max().unwrap_or(0);
            let family = MatrixFamily::new(kind, top)?;
            let mut ok = true;
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for nu in &list {
                let c = sum_formula_check(&family, &w, nu, &rho)?;
                ok &= c.ok;
                let terms: Vec<String> = c.terms.iter().map(|(h, d)| format!("{h}: {d}")).collect();
                lines.push(format!(
                    "{:<8} order {:>3}  predicted {:>3}  {}  {}",
                    nu.to_string(),
                    c.order,
                    c.predicted,
                    if c.ok { "ok" } else { "MISMATCH" },
                    terms.join(", ")
                ));
                items.push(json!({"nu": nu.to_string(), "order": c.order, "predicted": c.predicted, "ok": c.ok, "terms": terms}));
            }
            Ok((json!({"ok": ok, "results": items}), lines.join("\n"), ok))
        }
        Verb::Char { common, lambda, max_height } => {
            let kind = kind_of(&common)?;
            let w = weight(kind, &lambda)?;
            let cutoff = max_height.unwrap_or(default_cutoff(kind));
            let verma = character_coefficients(kind, &w, ModuleKind::Verma, cutoff)?;
            let weyl = character_coefficients(kind, &w, ModuleKind::Weyl, cutoff)?;
            let mut lines = vec![format!("{:<8} {:>6} {:>6}", "nu", "M", "N")];
            let mut items = Vec::new();
            for (nu, m) in &verma {
                lines.push(format!("{:<8} {m:>6} {:>6}", nu.to_string(), weyl[nu]));
                items.push(json!({"nu": nu.to_string(), "verma": m, "weyl": weyl[nu]}));
            }
            Ok((json!({"lambda": w.to_string(), "coefficients": items}), lines.join("\n"), true))
        }
        Verb::CentreCheck { common, poly } => {
            let kind = kind_of(&common)?;
            let p = parse_poly(&poly, kind.arity())?;
            let r = z_membership(kind, &p)?;
            let witness = r.witness.as_ref().map(ToString::to_string);
            let text = match &witness {
                None => format!("{p} is in Z"),
                Some(w) => format!("{p} is not in Z: {w}"),
            };
            Ok((json!({"poly": p.to_string(), "member": r.member, "witness": witness}), text, true))
        }
        Verb::Tg { common } => {
            let kind = kind_of(&common)?;
            let t = t_g(kind)?;
            Ok((json!({"t_g": t.to_string()}), format!("t_g = {t}"), true))
        }
        Verb::Search { common, degree, twisted } => {
            let kind = kind_of(&common)?;
            let uea = Uea::new(kind);
            let r = invariant_search(kind, degree, twisted)?;
            let items: Vec<Value> = r
                .basis
                .iter()
                .zip(&r.hc_images)
                .zip(&r.parities)
                .map(|((z, hc), odd)| json!({"element": uea.fmt_element(z), "hc": hc.to_string(), "odd": odd}))
                .collect();
            let mut text = format!(
                "{} {} invariants of degree <= {degree}: {}",
                kind,
                if twisted { "twisted" } else { "untwisted" },
                r.basis.len()
            );
            for hc in &r.hc_images {
                text.push_str(&format!("\n  HC = {hc}"));
            }
            Ok((json!({"twisted": twisted, "degree": degree, "basis": items}), text, true))
        }
        Verb::Construct { common, poly, nu } => {
            let kind = kind_of(&common)?;
            let p = parse_poly(&poly, kind.arity())?;
            let cutoff = root_vector(kind, &nu)?;
            let kc = match central_truncation(kind, &p, &cutoff) {
                Err(Error::MembershipFailure(m)) => return Err(Failure::Usage(format!("not a centre polynomial: {m}"))),
                other => other?,
            };
            let uea = Uea::new(kind);
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for t in &kc.terms {
                let z = uea.fmt_element(&t.z);
                lines.push(format!("z_{} = {}", t.nu, if t.z.is_zero() { "0".into() } else { z.clone() }));
                items.push(json!({"nu": t.nu.to_string(), "z": z, "system_det": t.system_det.to_string()}));
            }
            lines.push(format!("residual zero: {}", kc.residual_zero));
            Ok((json!({"phi": p.to_string(), "terms": items, "residual_zero": kc.residual_zero}), lines.join("\n"), kc.residual_zero))
        }
        Verb::Selftest { criteria, .. } => {
            if let Some(bad) = criteria.iter().find(|&&id| !(1..=12).contains(&id)) {
                return Err(Failure::Usage(format!("no criterion {bad}; they are numbered 1 to 12")));
            }
            let mut suite = Suite::new();
            let results: Vec<_> = if criteria.is_empty() {
                suite.run_all(|r| eprintln!("{r}"))
            } else {
                criteria
                    .iter()
                    .map(|&id| {
                        let r = suite.run(id);
                        eprintln!("{r}");
                        r
                    })
                    .collect()
            };
            let ok = results.iter().all(|r| r.passed);
            let items: Vec<Value> = results
                .iter()
                .map(|r| json!({"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": r.elapsed.as_secs_f64()}))
                .collect();
            let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            let scope = if criteria.is_empty() { "all" } else { "selected" };
            let text = if ok { format!("{scope} criteria passed") } else { format!("failed criteria: {failed:?}") };
            Ok((json!({"ok": ok, "criteria": items}), text, ok))
        }
    }
}

fn verb_info(verb: &Verb) -> (&'static str, Option<Common>, bool) {
    match verb {
        Verb::Matrix { common, .. } => ("matrix", Some(common.clone()), common.json),
        Verb::Det { common, .. } => ("det", Some(common.clone()), common.json),
        Verb::Verify { common, .. } => ("verify", Some(common.clone()), common.json),
        Verb::Simple { common, .. } => ("simple", Some(common.clone()), common.json),
        Verb::Classify { common, .. } => ("classify", Some(common.clone()), common.json),
        Verb::Jantzen { common, .. } => ("jantzen", Some(common.clone()), common.json),
        Verb::Sumcheck { common, .. } => ("sumcheck", Some(common.clone()), common.json),
        Verb::Char { common, .. } => ("char", Some(common.clone()), common.json),
        Verb::CentreCheck { common, .. } => ("centre-check", Some(common.clone()), common.json),
        Verb::Tg { common } => ("tg", Some(common.clone()), common.json),
        Verb::Search { common, .. } => ("search", Some(common.clone()), common.json),
        Verb::Construct { common, .. } => ("construct", Some(common.clone()), common.json),
        Verb::Selftest { json, .. } => ("selftest", None, *json),
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn configure_threads() {
    if let Some(n) = std::env::var("QSHAP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    let (name, common, as_json) = verb_info(&cli.verb);
    let header = |v: &mut Value| {
        if let Value::Object(m) = v {
            m.insert("schema".into(), json!(SCHEMA));
            m.insert("verb".into(), json!(name));
            if let Some(c) = &common {
                m.insert("kind".into(), json!(format!("{}({})", c.kind, c.rank)));
            }
        }
    };
    match run(cli.verb) {
        Ok((mut value, text, ok)) => {
            if as_json {
                value["ok"] = json!(ok);
                header(&mut value);
                emit(&serde_json::to_string_pretty(&value).expect("json"));
            } else {
                emit(&text);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Mismatch(m) => (1, m),
                Failure::Usage(m) => (2, m),
            };
            if as_json {
                let mut value = json!({"ok": false, "error": msg});
                header(&mut value);
                emit(&serde_json::to_string_pretty(&value).expect("json"));
            } else {
                eprintln!("qshap: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
