//! The `germ` command line.
//!
//! Every subcommand is a thin wrapper over one library call. Exit status is 0
//! on success, 1 on a domain error and 2 on a usage error. With `--json`,
//! domain errors are printed to stdout as `{"error": kind, "message": text}`.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{flow, formal_centralizer, formally_conjugate, iterative_log, parabolic_invariants, p_invariant};
use crate::error::{GermError, Result};
use crate::format::{scalar_record, series_record, series_text};
use crate::germ::{averaging_linearizer, conjugate, solve_conjugacy, Germ};
use crate::parse::{parse_germ, parse_scalar};
use crate::reversal::{
    example_family, find_reverser, is_reversible, reversal_factorization, reverser_orders, symmetric_form_check,
    FamilyKind,
};
use crate::scalar::{conductor_cap, set_conductor_cap, CycloScalar};
use crate::selftest;
use crate::series::TruncatedSeries;

pub const DEFAULT_TRUNC: usize = 24;

#[derive(Parser, Debug)]
#[command(name = "germ", version, about = "Exact computations with formal germs at the origin")]
struct Cli {
    /// Highest certified power of z (default 24, or 4p+3 for families with a known p).
    #[arg(long, global = true)]
    trunc: Option<usize>,
    #[arg(long, global = true)]
    json: bool,
    /// Largest cyclotomic conductor any scalar may use.
    #[arg(long = "conductor-cap", global = true)]
    conductor_cap: Option<u32>,
    /// Seed for randomized families.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplier f'(0).
    Mult { #[arg(allow_hyphen_values = true)] f: String },
    /// The invariant p of a germ tangent to the identity.
    P { #[arg(allow_hyphen_values = true)] f: String },
    /// The invariants p and a of a germ tangent to the identity.
    A { #[arg(allow_hyphen_values = true)] f: String },
    /// f o g.
    Compose {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Compositional inverse.
    Inverse { #[arg(allow_hyphen_values = true)] f: String },
    /// h^-1 o f o h.
    Conj {
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// n-fold iterate, negative n for the inverse.
    Iterate {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Order of a periodic germ.
    Order {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 64)]
        bound: u32,
    },
    /// Linearizing conjugator of a periodic germ by averaging.
    Linearize {
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Period; defaults to the order of the multiplier.
        #[arg(long)]
        delta: Option<u32>,
    },
    /// Iterative logarithm v with exp(v d/dz) z = f.
    Log { #[arg(allow_hyphen_values = true)] f: String },
    /// Time-t flow of a germ tangent to the identity.
    Flow {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        time: String,
    },
    /// Solve h^-1 f h = g.
    Conjugacy {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Decide formal conjugacy.
    Classify {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Formal reversibility report.
    Reversible { #[arg(allow_hyphen_values = true)] f: String },
    /// Construct a reverser, optionally of a given order.
    Reverser {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Possible reverser orders for a given p.
    Orders {
        #[arg(long)]
        p: u32,
    },
    /// h = g o f for a reverser g of f.
    Factorize {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Formal centralizer: torsion generator and flow generator.
    Centralizer { #[arg(allow_hyphen_values = true)] f: String },
    /// A reversible germ with a reverser.
    Example {
        kind: ExampleKind,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        /// Family conjugated by `conjugated-random`.
        #[arg(long, value_enum, default_value_t = BaseKind::Model)]
        base: BaseKind,
    },
    /// Test the rotationally symmetric form for s.
    Symcheck {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        s: usize,
    },
    /// Run the built-in acceptance checks.
    Selftest {
        /// Run only the check with this number.
        #[arg(long)]
        check: Option<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExampleKind {
    Model,
    Twisted,
    #[value(name = "conjugated-random", alias = "conjugated_random")]
    ConjugatedRandom,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BaseKind {
    Model,
    Twisted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Reply {
    Text(String),
    Json(Value),
}

fn scalar_json(c: &CycloScalar) -> Value {
    let rec = scalar_record(c);
    json!({ "text": c.to_string(), "conductor": rec.conductor, "coeffs": rec.coeffs })
}

fn series_json(f: &TruncatedSeries) -> Value {
    serde_json::to_value(series_record(f)).expect("series record serializes")
}

fn germ_json(g: &Germ) -> Value {
    series_json(g.series())
}

/// Order of a germ of finite order: the order of its multiplier, if the
/// corresponding iterate is the identity.
fn finite_order(g: &Germ) -> Option<u32> {
    let r = if g.multiplier().is_one() { 1 } else { g.multiplier().detect_root_of_unity()?.order() };
    g.iterate(r as i64).is_identity().then_some(r)
}

#[derive(Serialize)]
struct ReversibleJson {
    formally_reversible: bool,
    p: Option<usize>,
    a: Option<String>,
    strongly_reversible: bool,
    multiplier_class: &'static str,
    reverser: Option<Value>,
    order_spectrum: Vec<u32>,
}

struct Ctx {
    trunc: Option<usize>,
    json: bool,
    seed: u64,
}

impl Ctx {
    fn n(&self) -> usize {
        self.trunc.unwrap_or(DEFAULT_TRUNC)
    }

    fn germ(&self, text: &str) -> Result<Germ> {
        parse_germ(text, self.n())
    }

    fn series_reply(&self, f: &TruncatedSeries) -> Reply {
        if self.json {
            Reply::Json(series_json(f))
        } else {
            Reply::Text(series_text(f))
        }
    }

    fn reply(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) -> Reply {
        if self.json {
            Reply::Json(value())
        } else {
            Reply::Text(text())
        }
    }
}

fn family(kind: ExampleKind, base: BaseKind, p: Option<usize>, s: Option<usize>, ctx: &Ctx) -> Result<FamilyKind> {
    let model = |p: Option<usize>| {
        let p = p.ok_or_else(|| GermError::BadParameters("model family needs --p".into()))?;
        Ok::<_, GermError>(FamilyKind::Model { p, trunc: ctx.trunc.unwrap_or(4 * p + 3) })
    };
    let twisted = |s: Option<usize>| {
        let s = s.ok_or_else(|| GermError::BadParameters("twisted family needs --s".into()))?;
        Ok::<_, GermError>(FamilyKind::Twisted { s, trunc: ctx.trunc.unwrap_or(4 * s + 3) })
    };
    Ok(match kind {
        ExampleKind::Model => model(p)?,
        ExampleKind::Twisted => twisted(s)?,
        ExampleKind::ConjugatedRandom => {
            let base = match base {
                BaseKind::Model => model(p)?,
                BaseKind::Twisted => twisted(s)?,
            };
            FamilyKind::ConjugatedRandom { base: Box::new(base), seed: ctx.seed }
        }
    })
}

fn execute(command: Command, ctx: &Ctx) -> Result<(Reply, bool)> {
    let done = |r: Reply| Ok((r, true));
    match command {
        Command::Mult { f } => {
            let m = ctx.germ(&f)?.multiplier();
            done(ctx.reply(|| m.to_string(), || json!({ "multiplier": scalar_json(&m) })))
        }
        Command::P { f } => {
            let p = p_invariant(&ctx.germ(&f)?)?;
            done(ctx.reply(|| p.to_string(), || json!({ "p": p })))
        }
        Command::A { f } => {
            let inv = parabolic_invariants(&ctx.germ(&f)?)?;
            done(ctx.reply(
                || inv.a.to_string(),
                || json!({ "p": inv.p, "lead": scalar_json(&inv.lead), "a": scalar_json(&inv.a) }),
            ))
        }
        Command::Compose { f, g } => done(ctx.series_reply(ctx.germ(&f)?.compose(&ctx.germ(&g)?).series())),
        Command::Inverse { f } => done(ctx.series_reply(ctx.germ(&f)?.inverse().series())),
        Command::Conj { h, f } => done(ctx.series_reply(conjugate(&ctx.germ(&h)?, &ctx.germ(&f)?).series())),
        Command::Iterate { f, n } => done(ctx.series_reply(ctx.germ(&f)?.iterate(n).series())),
        Command::Order { f, bound } => {
            let order = ctx.germ(&f)?.order_of(bound);
            done(ctx.reply(
                || order.map_or_else(|| format!("none up to {bound}"), |o| o.to_string()),
                || json!({ "order": order, "bound": bound }),
            ))
        }
        Command::Linearize { g, delta } => {
            let g = ctx.germ(&g)?;
            let delta = match delta {
                Some(d) => d,
                None => g.multiplier().detect_root_of_unity().map(|r| r.order()).ok_or(GermError::NotPeriodic(0))?,
            };
            done(ctx.series_reply(averaging_linearizer(&g, delta)?.series()))
        }
        Command::Log { f } => done(ctx.series_reply(&iterative_log(&ctx.germ(&f)?)?)),
        Command::Flow { f, time } => {
            let t = parse_scalar(&time)?;
            done(ctx.series_reply(flow(&ctx.germ(&f)?, &t)?.series()))
        }
        Command::Conjugacy { f, g } => {
            let w = solve_conjugacy(&ctx.germ(&f)?, &ctx.germ(&g)?)?;
            done(ctx.reply(
                || match &w {
                    Some(w) => format!("{}\nverified through degree {}", w.conjugator.series(), w.verified_to),
                    None => "absent".into(),
                },
                || match &w {
                    Some(w) => json!({
                        "conjugate": true,
                        "conjugator": germ_json(&w.conjugator),
                        "verified_to": w.verified_to,
                        "resonant_choices": w.resonant_choices.iter().map(|(k, c)| json!([k, c.to_string()])).collect::<Vec<_>>(),
                    }),
                    None => json!({ "conjugate": false, "conjugator": null }),
                },
            ))
        }
        Command::Classify { f, g } => {
            let c = formally_conjugate(&ctx.germ(&f)?, &ctx.germ(&g)?)?;
            done(ctx.reply(
                || if c { "formally conjugate" } else { "not formally conjugate" }.into(),
                || json!({ "formally_conjugate": c }),
            ))
        }
        Command::Reversible { f } => {
            let r = is_reversible(&ctx.germ(&f)?)?;
            let spectrum: Vec<u32> = r.order_spectrum.iter().copied().collect();
            let reply = if ctx.json {
                let record = ReversibleJson {
                    formally_reversible: r.formally_reversible,
                    p: r.p,
                    a: r.a.as_ref().map(|a| a.to_string()),
                    strongly_reversible: r.strongly_reversible,
                    multiplier_class: r.multiplier_class.name(),
                    reverser: r.reverser.as_ref().map(germ_json),
                    order_spectrum: spectrum,
                };
                Reply::Json(serde_json::to_value(record).expect("report serializes"))
            } else {
                let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                let lines = [
                    format!("formally reversible: {}", r.formally_reversible),
                    format!("p: {}", opt(r.p.map(|p| p.to_string()))),
                    format!("a: {}", opt(r.a.as_ref().map(|a| a.to_string()))),
                    format!("strongly reversible: {}", r.strongly_reversible),
                    format!("multiplier class: {}", r.multiplier_class.name()),
                    format!("reverser: {}", opt(r.reverser.as_ref().map(|g| series_text(g.series())))),
                    format!("order spectrum: {}", spectrum.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")),
                ];
                Reply::Text(lines.join("\n"))
            };
            done(reply)
        }
        Command::Reverser { f, order } => {
            let g = find_reverser(&ctx.germ(&f)?, order)?;
            let o = finite_order(&g);
            done(ctx.reply(|| series_text(g.series()), || json!({ "reverser": germ_json(&g), "order": o })))
        }
        Command::Orders { p } => {
            let orders: Vec<u32> = reverser_orders(p).into_iter().collect();
            done(ctx.reply(
                || orders.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
                || json!({ "p": p, "orders": orders }),
            ))
        }
        Command::Factorize { f, g } => {
            let (f, g) = (ctx.germ(&f)?, ctx.germ(&g)?);
            let h = reversal_factorization(&f, &g)?;
            done(ctx.reply(|| series_text(h.series()), || json!({ "h": germ_json(&h), "h_squared": germ_json(&h.compose(&h)) })))
        }
        Command::Centralizer { f } => {
            let c = formal_centralizer(&ctx.germ(&f)?)?;
            done(ctx.reply(
                || {
                    let torsion = c.torsion_generator.as_ref().map_or("-".into(), |g| series_text(g.series()));
                    format!(
                        "torsion order: {}\ntorsion generator: {torsion}\nflow generator: {}",
                        c.torsion_order,
                        series_text(&c.flow_generator)
                    )
                },
                || {
                    json!({
                        "torsion_order": c.torsion_order,
                        "torsion_generator": c.torsion_generator.as_ref().map(germ_json),
                        "flow_generator": series_json(&c.flow_generator),
                    })
                },
            ))
        }
        Command::Example { kind, p, s, base } => {
            let fam = family(kind, base, p, s, ctx)?;
            let (f, g) = example_family(&fam)?;
            let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
            done(ctx.reply(
                || format!("f = {}\ng = {}", f.series(), g.series()),
                || json!({ "kind": name, "f": germ_json(&f), "g": germ_json(&g), "g_order": finite_order(&g) }),
            ))
        }
        Command::Symcheck { f, s } => {
            let r = symmetric_form_check(&ctx.germ(&f)?, s)?;
            let terms: Vec<Value> = r
                .inverse_terms
                .iter()
                .map(|t| {
                    json!({
                        "k": t.k,
                        "degree": t.degree,
                        "coefficient": t.coefficient.to_string(),
                        "inverse_coefficient": t.inverse_coefficient.to_string(),
                        "sign_matches": t.sign_matches,
                    })
                })
                .collect();
            done(ctx.reply(
                || {
                    let mut lines = vec![
                        format!("passes: {}", r.passes),
                        format!("p: {}, s: {}", r.p, r.s),
                        format!("support: {}", r.support.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")),
                        format!("support in pattern: {}", r.support_in_pattern),
                    ];
                    for t in &r.inverse_terms {
                        lines.push(format!(
                            "k = {}: degree {}, c_k = {}, inverse {} ({})",
                            t.k,
                            t.degree,
                            t.coefficient,
                            t.inverse_coefficient,
                            if t.sign_matches { "= (-1)^(k+1) c_k" } else { "differs" }
                        ));
                    }
                    lines.join("\n")
                },
                || {
                    json!({
                        "passes": r.passes,
                        "p": r.p,
                        "s": r.s,
                        "support": r.support,
                        "support_in_pattern": r.support_in_pattern,
                        "inverse_terms": terms,
                    })
                },
            ))
        }
        Command::Selftest { check } => {
            let outcomes = match check {
                Some(id) => vec![selftest::run(id)],
                None => selftest::run_all(),
            };
            let all = outcomes.iter().all(|o| o.passed);
            let reply = ctx.reply(
                || outcomes.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
                || {
                    Value::Array(
                        outcomes
                            .iter()
                            .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail, "seconds": o.elapsed.as_secs_f64() }))
                            .collect(),
                    )
                },
            );
            Ok((reply, all))
        }
    }
}

/// Run one invocation; `argv[0]` is the program name.
pub fn run_command<I, S>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return CommandOutput { code, stdout, stderr };
        }
    };
    let previous_cap = conductor_cap();
    if let Some(cap) = cli.conductor_cap {
        set_conductor_cap(cap);
    }
    let ctx = Ctx { trunc: cli.trunc, json: cli.json, seed: cli.seed.unwrap_or(0) };
    let result = execute(cli.command, &ctx);
    if cli.conductor_cap.is_some() {
        set_conductor_cap(previous_cap);
    }
    let render = |r: Reply| match r {
        Reply::Text(t) => t + "\n",
        Reply::Json(v) => serde_json::to_string(&v).expect("json value serializes") + "\n",
    };
    match result {
        Ok((reply, success)) => CommandOutput { code: if success { 0 } else { 1 }, stdout: render(reply), stderr: String::new() },
        Err(e) if ctx.json => CommandOutput {
            code: 1,
            stdout: render(Reply::Json(json!({ "error": e.kind(), "message": e.to_string() }))),
            stderr: String::new(),
        },
        Err(e) => CommandOutput { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
