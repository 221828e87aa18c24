mod emit;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use avoid_core::conjectures::{counterexample_gap, injection_certificate, verify_conj27};
use avoid_core::constructions::{ab_set, best_multi_interval, multi_interval, residue_set, top_interval, two_var_extremal};
use avoid_core::exact::{all_extremal, max_avoiding, max_avoiding_two_var, prefix_profile, rho_best, rho_m, ModularDensity};
use avoid_core::family1::{def1_transform, lemma26_deficiency, quantities_s, theorem25_candidates};
use avoid_core::family2::family2_extremal;
use avoid_core::generate::RandomAvoiding;
use avoid_core::rational::{ratio, ratio_string};
use avoid_core::{parse_equation, Budget, Error, IntSet, LinearForm, SearchConfig, SearchStats, ThreeVarEquation};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use emit::{Emitter, Format};

#[derive(Parser)]
#[command(name = "avoid", version, about = "Extremal subsets of [1,n] avoiding ax+by=cz")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads. The exact search itself runs on one thread, so this
    /// never changes a result.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    #[arg(long, global = true)]
    time_budget_ms: Option<u64>,
    /// Report zero elapsed time so identical runs give identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum avoiding subset of [1,n] (or all of them with --all).
    Solve {
        #[arg(long)]
        eq: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 100)]
        cap: usize,
    },
    /// Explicit avoiding sets.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Equations x+by=cz with b>1.
    Family1 {
        #[command(subcommand)]
        op: Family1,
    },
    /// Closed-form extremal set for b(x+y)=cz.
    Family2 {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
    },
    /// Best residue set modulo m (or over all m <= m-max).
    Rho {
        #[arg(long)]
        eq: String,
        #[arg(long, conflicts_with = "m_max", required_unless_present = "m_max")]
        m: Option<u64>,
        #[arg(long)]
        m_max: Option<u64>,
    },
    /// The x+by=b^2 z sets.
    Conjecture {
        #[command(subcommand)]
        op: Conjecture,
    },
    /// Table of exact r(n) and r(n)/n, optionally next to constructions.
    Report {
        #[arg(long)]
        eq: String,
        /// Comma-separated n values.
        #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
        n_list: Option<String>,
        /// Inclusive range `lo..hi`.
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        with_constructions: bool,
    },
}

#[derive(Args)]
struct FormArg {
    /// Three-variable equation, e.g. "x+y=4z".
    #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
    eq: Option<String>,
    /// Coefficients of sum a_i x_i = 0, e.g. "1,1,1,-4".
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
}

#[derive(Subcommand)]
enum Construct {
    Residue {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
    },
    Top {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        n: u64,
    },
    Multi {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        xi: Option<u64>,
    },
    BestMulti {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
    },
    /// Largest set with no ax = by.
    TwoVar {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
        /// Also run the exact search for comparison.
        #[arg(long)]
        exact: bool,
    },
    Ab {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum Family1 {
    Quantities {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
    },
    Candidates {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
    },
    Def1 {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
        /// Members, e.g. "5,6,7". Defaults to the top interval.
        #[arg(long)]
        set: Option<String>,
    },
    Lemma26 {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        set: String,
        #[arg(long)]
        z: u64,
        #[arg(long, default_value_t = 0)]
        d: u64,
    },
}

#[derive(Subcommand)]
enum Conjecture {
    Gap {
        #[arg(long)]
        b: u64,
    },
    Verify27 {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
    },
    Inject {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        set: Option<String>,
        /// Certify this many seeded random avoiding sets instead.
        #[arg(long)]
        random: Option<usize>,
        /// Keep probability for random sets.
        #[arg(long, default_value_t = 1.0)]
        keep: f64,
    },
}

struct Ctx {
    out: Emitter,
    cfg: SearchConfig,
    seed: u64,
    deterministic: bool,
}

impl Ctx {
    fn emit(&mut self, value: Value) -> Result<(), Error> {
        let Value::Object(mut record) = value else {
            unreachable!("records are objects");
        };
        if self.deterministic {
            if let Some(m) = record.get_mut("millis") {
                *m = json!(0);
            }
        }
        self.out
            .emit(record)
            .map_err(|e| Error::InvariantViolation(format!("cannot write output: {e}")))
    }

    fn millis(&self, stats: &SearchStats) -> u64 {
        if self.deterministic {
            0
        } else {
            stats.elapsed.as_millis() as u64
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

/// The form plus the label records carry for it.
fn parse_form(f: &FormArg) -> Result<(LinearForm, String), Error> {
    match (&f.eq, &f.coeffs) {
        (Some(text), _) => {
            let eq = parse_equation(text)?;
            Ok((eq.to_form(), eq.to_string()))
        }
        (None, Some(list)) => {
            let coeffs = list
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::MalformedEquation(format!("bad coefficient list {list:?}")))?;
            let form = LinearForm::new(coeffs)?;
            let label = form.to_string();
            Ok((form, label))
        }
        (None, None) => Err(Error::MalformedEquation("give --eq or --coeffs".into())),
    }
}

fn parse_set(n: u64, text: &str) -> Result<IntSet, Error> {
    IntSet::parse(n, text)
}

fn parse_ns(list: Option<&str>, range: Option<&str>) -> Result<Vec<u64>, Error> {
    let bad = |t: &str| Error::InvariantViolation(format!("cannot read n values from {t:?}"));
    let mut ns = match (list, range) {
        (Some(l), _) => l
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad(l)))
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(r)) => {
            let (lo, hi) = r.split_once("..").ok_or_else(|| bad(r))?;
            let lo: u64 = lo.trim().parse().map_err(|_| bad(r))?;
            let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad(r))?;
            (lo..=hi).collect()
        }
        (None, None) => Vec::new(),
    };
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() || ns[0] == 0 {
        return Err(Error::InvariantViolation("n values must be positive and nonempty".into()));
    }
    Ok(ns)
}

fn set_record(equation: String, set: &IntSet) -> Value {
    json!({"equation": equation, "n": set.bound(), "size": set.len(), "set": set.to_text()})
}

fn modular_record(eq: &ThreeVarEquation, d: &ModularDensity) -> Value {
    json!({"equation": eq.to_string(), "m": d.m, "rho": ratio_string(&d.rho), "witness": d.witness.to_text()})
}

fn run(cli: Cli) -> Result<(), Error> {
    let g = cli.global;
    if g.threads == 0 || g.node_budget == Some(0) || g.time_budget_ms == Some(0) {
        return Err(Error::InvariantViolation("threads and budgets must be positive".into()));
    }
    let budget = Budget {
        max_nodes: g.node_budget,
        max_time: g.time_budget_ms.map(Duration::from_millis),
    };
    let out = Emitter::new(g.format, g.output.as_deref())
        .map_err(|e| Error::InvariantViolation(format!("cannot open output: {e}")))?;
    let mut ctx = Ctx {
        out,
        cfg: SearchConfig::with_budget(budget),
        seed: g.seed,
        deterministic: g.deterministic,
    };
    match cli.command {
        Command::Solve { eq, n, all, cap } => solve(&mut ctx, &eq, n, all, cap),
        Command::Construct { kind } => construct(&mut ctx, kind),
        Command::Family1 { op } => family1(&mut ctx, op),
        Command::Family2 { b, c, n } => ctx.emit(to_value(&family2_extremal(b, c, n)?)),
        Command::Rho { eq, m, m_max } => {
            let e = parse_equation(&eq)?;
            let d = match (m, m_max) {
                (Some(m), _) => rho_m(&e, m, &ctx.cfg)?,
                (None, Some(mm)) => rho_best(&e, mm, &ctx.cfg)?,
                (None, None) => unreachable!("clap requires one of --m, --m-max"),
            };
            ctx.emit(modular_record(&e, &d))
        }
        Command::Conjecture { op } => conjecture(&mut ctx, op),
        Command::Report {
            eq,
            n_list,
            n_range,
            with_constructions,
        } => report(&mut ctx, &eq, n_list.as_deref(), n_range.as_deref(), with_constructions),
    }
}

fn solve(ctx: &mut Ctx, eq: &str, n: u64, all: bool, cap: usize) -> Result<(), Error> {
    let e = parse_equation(eq)?;
    if all {
        let sets = all_extremal(&e, n, cap, &ctx.cfg)?;
        let millis = ctx.millis(&sets.stats);
        return ctx.emit(json!({
            "equation": e.to_string(),
            "n": n,
            "size": sets.size,
            "sets": sets.sets.iter().map(IntSet::to_text).collect::<Vec<_>>(),
            "truncated": sets.truncated,
            "nodes": sets.stats.nodes,
            "millis": millis,
        }));
    }
    match max_avoiding(&e, n, &ctx.cfg) {
        Ok(r) => ctx.emit(to_value(&r)),
        Err(Error::BudgetExceeded { nodes, best }) => {
            if let Some(best) = &best {
                ctx.emit(to_value(best.as_ref()))?;
            }
            Err(Error::BudgetExceeded { nodes, best })
        }
        Err(e) => Err(e),
    }
}

fn construct(ctx: &mut Ctx, kind: Construct) -> Result<(), Error> {
    match kind {
        Construct::Residue { form, q, n } => {
            let (f, label) = parse_form(&form)?;
            ctx.emit(set_record(label, &residue_set(&f, q, n)?))
        }
        Construct::Top { form, n } => {
            let (f, label) = parse_form(&form)?;
            ctx.emit(set_record(label, &top_interval(&f, n)?))
        }
        Construct::Multi { form, n, k, xi } => {
            let (f, _) = parse_form(&form)?;
            ctx.emit(to_value(&multi_interval(&f, n, k, xi)?))
        }
        Construct::BestMulti { form, n, k_max } => {
            let (f, _) = parse_form(&form)?;
            ctx.emit(to_value(&best_multi_interval(&f, n, k_max)?))
        }
        Construct::TwoVar { a, b, n, exact } => {
            let t = two_var_extremal(a, b, n)?;
            let mut record = json!({"equation": format!("{a}x={b}y"), "n": n, "size": t.size, "set": t.set.to_text()});
            if exact {
                let r = max_avoiding_two_var(a, b, n, &ctx.cfg)?;
                record["exact_size"] = json!(r.max_size);
            }
            ctx.emit(record)
        }
        Construct::Ab { b, n } => {
            let (set, density) = ab_set(b, n)?;
            let mut record = set_record(format!("x+{b}y={}z", b * b), &set);
            record["density"] = json!(ratio_string(&density));
            ctx.emit(record)
        }
    }
}

fn family1_eq(b: u64, c: u64) -> Result<ThreeVarEquation, Error> {
    ThreeVarEquation::new(1, b, c)
}

fn family1(ctx: &mut Ctx, op: Family1) -> Result<(), Error> {
    match op {
        Family1::Quantities { b, c, n } => {
            let q = quantities_s(n, b, c)?;
            ctx.emit(json!({"b": b, "c": c, "n": n, "S": q.s_big, "s_prime": q.s_prime, "within_bound": q.within_bound()}))
        }
        Family1::Candidates { b, c, n } => {
            for cand in theorem25_candidates(n, b, c)? {
                let mut v = to_value(&cand);
                v["set"] = json!(cand.set.to_text());
                ctx.emit(v)?;
            }
            Ok(())
        }
        Family1::Def1 { b, c, n, set } => {
            let e = family1_eq(b, c)?;
            let a = match set {
                Some(text) => parse_set(n, &text)?,
                None => top_interval(&e.to_form(), n)?,
            };
            let tr = def1_transform(&e, &a)?;
            ctx.emit(json!({
                "n": tr.n,
                "s": tr.s,
                "t": tr.t,
                "r": tr.r,
                "l": tr.l,
                "alpha": tr.alpha,
                "sizes": tr.sizes(),
                "monotone": tr.is_monotone(),
                "final": tr.last().to_text(),
            }))
        }
        Family1::Lemma26 { b, c, n, set, z, d } => {
            let e = family1_eq(b, c)?;
            let a = parse_set(n, &set)?;
            let count = lemma26_deficiency(&e, &a, z, d)?;
            ctx.emit(json!({"z": z, "d": d, "missing": count, "bound_holds": count as u64 > d}))
        }
    }
}

fn conjecture(ctx: &mut Ctx, op: Conjecture) -> Result<(), Error> {
    match op {
        Conjecture::Gap { b } => ctx.emit(to_value(&counterexample_gap(b)?)),
        Conjecture::Verify27 { b, n } => ctx.emit(to_value(&verify_conj27(b, n, &ctx.cfg)?)),
        Conjecture::Inject { b, n, set, random, keep } => {
            if let Some(text) = set {
                let cert = injection_certificate(b, &parse_set(n, &text)?, n)?;
                return ctx.emit(to_value(&cert));
            }
            let eq = ThreeVarEquation::new(1, b, b * b)?;
            let mut gen = RandomAvoiding::new(ctx.seed);
            for _ in 0..random.unwrap_or(0) {
                let s = gen.sample(&eq, n, keep);
                let cert = injection_certificate(b, &s, n)?;
                ctx.emit(to_value(&cert))?;
            }
            Ok(())
        }
    }
}

fn report_row(ctx: &Ctx, eq: &ThreeVarEquation, n: u64, method: &str, size: usize, optimal: bool, stats: Option<&SearchStats>) -> Value {
    let r = ratio(size as i128, n as i128);
    let mut record = Map::new();
    record.insert("equation".into(), json!(eq.to_string()));
    record.insert("n".into(), json!(n));
    record.insert("method".into(), json!(method));
    record.insert("size".into(), json!(size));
    record.insert("ratio_num".into(), json!(*r.numer() as i64));
    record.insert("ratio_den".into(), json!(*r.denom() as i64));
    record.insert("optimal".into(), json!(optimal));
    record.insert("nodes".into(), json!(stats.map_or(0, |s| s.nodes)));
    record.insert("millis".into(), json!(stats.map_or(0, |s| ctx.millis(s))));
    Value::Object(record)
}

/// The construction sizes that apply to `eq` at `n`.
fn construction_sizes(eq: &ThreeVarEquation, n: u64) -> Vec<(&'static str, usize)> {
    let form = eq.to_form();
    let mut rows = Vec::new();
    if let Ok(s) = top_interval(&form, n) {
        rows.push(("top", s.len()));
    }
    if let Some(best) = (2..=20).filter_map(|q| residue_set(&form, q, n).ok()).map(|s| s.len()).max() {
        rows.push(("residue", best));
    }
    if let Ok(m) = best_multi_interval(&form, n, 6) {
        rows.push(("best-multi", m.set.size() as usize));
    }
    if eq.a() == eq.b() {
        if let Ok(f) = family2_extremal(eq.b(), eq.c(), n) {
            rows.push(("family2", f.size as usize));
        }
    }
    if eq.a() == 1 && eq.c() == eq.b() * eq.b() {
        if let Ok((s, _)) = ab_set(eq.b(), n) {
            rows.push(("ab", s.len()));
        }
    }
    rows
}

fn report(ctx: &mut Ctx, eq: &str, list: Option<&str>, range: Option<&str>, with_constructions: bool) -> Result<(), Error> {
    let e = parse_equation(eq)?;
    let ns = parse_ns(list, range)?;
    let n_max = *ns.last().unwrap();
    let cfg = ctx.cfg.clone();
    let mut pending = ns.iter().copied().peekable();
    let mut failure = None;
    let profile = prefix_profile(&e, n_max, &cfg, &mut |k, size, stats| {
        if failure.is_some() || pending.peek() != Some(&k) {
            return;
        }
        pending.next();
        let mut rows = vec![report_row(ctx, &e, k, "exact", size, true, Some(&stats))];
        if with_constructions {
            for (method, s) in construction_sizes(&e, k) {
                rows.push(report_row(ctx, &e, k, method, s, false, None));
            }
        }
        for row in rows {
            if let Err(err) = ctx.emit(row) {
                failure = Some(err);
                return;
            }
        }
    })?;
    if let Some(err) = failure {
        return Err(err);
    }
    if !profile.complete {
        return Err(Error::BudgetExceeded {
            nodes: profile.stats.nodes,
            best: None,
        });
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvariantViolation(_)
        | Error::MalformedEquation(_)
        | Error::QDividesS { .. }
        | Error::NotAvoiding(_)
        | Error::EmptyInput
        | Error::IntervalOutOfRange { .. } => 2,
        Error::BudgetExceeded { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", json!({"error": err.kind(), "message": err.to_string()}));
            ExitCode::from(exit_code(&err))
        }
    }
}
