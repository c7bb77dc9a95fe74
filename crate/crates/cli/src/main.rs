//! `sdcat`: subshifts and block maps from the command line.
//!
//! Exit codes: 0 YES / exists, 1 NO / does not exist, 2 UNDECIDED,
//! 64 unreadable input, 65 input that is well formed but not valid for the
//! request, 66 missing file, 69 enumeration budget exceeded.

mod files;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sdcat::analysis::periods::{is_peric, periods};
use sdcat::analysis::structure::{constituents, has_positive_entropy, is_countable, is_finite, is_mixing, is_transitive, sft_report};
use sdcat::analysis::{is_injective, is_preinjective};
use sdcat::classify::{exists_morphism, is_epic, is_monic, is_regular_epic, is_regular_monic, is_split_epic, is_split_monic};
use sdcat::colimits::coequalizer_id;
use sdcat::dynamics::{
    chain_transitivity_failure, eventual_periodicity, is_reversible, is_visibly_eventually_periodic, spreading_nilpotent,
    EventualPeriodicity, POWER_TABLE_LIMIT,
};
use sdcat::limits::{coproduct, equalizer, image_factorization, kernel_pair, product_in, pullback, subobject_union, LimitResult, LimitStatus};
use sdcat::oracle::{census, Bounds, Property};
use sdcat::{Answer, BlockMap, Caps, CategoryTag, Error, Result};

use files::{sibling, Files};

#[derive(Parser)]
#[command(name = "sdcat", version, about = "Subshifts, block maps, and their categorical properties")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural invariants of a subshift.
    Analyze(AnalyzeArgs),
    /// Build a limit or colimit and write it with its legs.
    Build(BuildArgs),
    /// Decide a morphism class in one category.
    Check(CheckArgs),
    /// Coequalizer of a map and the identity.
    CoeqId(CoeqArgs),
    /// Dynamical report for a cellular automaton.
    Dynamics(DynamicsArgs),
    /// Brute-force reference runs.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// List the periods up to this bound.
    #[arg(long, default_value_t = 12)]
    periods_upto: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildOp {
    Product,
    Coproduct,
    Pullback,
    Equalizer,
    KernelPair,
    Image,
    Union,
}

#[derive(Args)]
struct BuildArgs {
    op: BuildOp,
    /// `.shift` files for product and coproduct, `.bmap` files otherwise.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    category: CategoryTag,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckProp {
    Epic,
    Monic,
    SplitEpic,
    SplitMonic,
    RegularEpic,
    RegularMonic,
    Preinjective,
    Injective,
    Peric,
    ExistsMorphism,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long)]
    p_cap: Option<usize>,
    #[arg(long)]
    radius_cap: Option<usize>,
    #[arg(long)]
    window_cap: Option<usize>,
    #[arg(long)]
    level_cap: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    property: CheckProp,
    #[arg(long)]
    category: CategoryTag,
    #[command(flatten)]
    caps: CapArgs,
    /// One `.bmap`, or two `.shift` files for exists-morphism.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Where certificates go; defaults to the directory of the input.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CoeqArgs {
    file: PathBuf,
    #[arg(long)]
    category: CategoryTag,
    #[command(flatten)]
    caps: CapArgs,
    /// Output `.shift` for the quotient; the map goes next to it.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DynamicsArgs {
    file: PathBuf,
    /// Largest power tried for eventual periodicity.
    #[arg(long, default_value_t = 16)]
    cap: usize,
    /// Chain-transitivity levels checked.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, default_value_t = 3)]
    radius_cap: usize,
    /// Largest rule table built for a power of the map.
    #[arg(long, default_value_t = POWER_TABLE_LIMIT)]
    table_cap: u128,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Engine against brute force on every endomorphism of a full shift.
    Census(CensusArgs),
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 1)]
    radius: usize,
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    /// Comma-separated properties.
    #[arg(long, value_delimiter = ',', default_value = "epic,injective,monic,preinjective")]
    check: Vec<Property>,
    #[arg(long, default_value_t = 3)]
    period: usize,
    #[arg(long, default_value_t = 5)]
    word: usize,
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 64,
        Error::Io { .. } => 66,
        Error::Budget { .. } => 69,
        Error::Invalid(_) | Error::Mismatch(_) | Error::Category { .. } => 65,
    }
}

fn base_caps() -> std::result::Result<Caps, String> {
    let mut caps = Caps::default();
    if let Ok(b) = std::env::var("SDCAT_BUDGET") {
        caps.budget = b.trim().parse().map_err(|_| format!("SDCAT_BUDGET must be a positive integer, got {b:?}"))?;
    }
    Ok(caps)
}

fn caps_from(base: &Caps, a: &CapArgs) -> Caps {
    let mut c = base.clone();
    c.p_cap = a.p_cap.unwrap_or(c.p_cap);
    c.radius_cap = a.radius_cap.unwrap_or(c.radius_cap);
    c.window_cap = a.window_cap.unwrap_or(c.window_cap);
    c.level_cap = a.level_cap.unwrap_or(c.level_cap);
    c
}

/// A finished command: its report and exit code.
struct Outcome {
    body: Value,
    code: u8,
    /// Printed as is instead of the text rendering.
    raw: Option<String>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let caps = match base_caps() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(64);
        }
    };
    let started = Instant::now();
    let mut files = Files::default();
    match run(&cli.command, &caps, &mut files) {
        Ok(out) => {
            let body = report::finish(out.body, &argv[1..], &files, started);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&body).expect("reports serialize"));
            } else if let Some(raw) = out.raw {
                print!("{raw}");
            } else {
                print!("{}", report::text(&body));
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = error_code(&e);
            if cli.json {
                let body = json!({ "error": e.to_string(), "exit_code": code });
                println!("{}", serde_json::to_string_pretty(&report::finish(body, &argv[1..], &files, started)).expect("reports serialize"));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: &Command, caps: &Caps, files: &mut Files) -> Result<Outcome> {
    match cmd {
        Command::Analyze(a) => analyze(a, files),
        Command::Build(a) => build(a, files),
        Command::Check(a) => check(a, caps, files),
        Command::CoeqId(a) => coeq(a, caps, files),
        Command::Dynamics(a) => dynamics(a, files),
        Command::Oracle(OracleCommand::Census(a)) => run_census(a, caps),
    }
}

fn analyze(a: &AnalyzeArgs, files: &mut Files) -> Result<Outcome> {
    let x = files.shift(&a.file)?;
    let sft = sft_report(&x);
    let per = periods(&x)?;
    let monoid = x.syntactic_monoid()?;
    let alphabet = x.alphabet();
    let body = json!({
        "alphabet": alphabet.names(),
        "point": x.point().map(|p| alphabet.name(p).to_string()),
        "empty": x.is_empty(),
        "transitive": is_transitive(&x)?,
        "mixing": is_mixing(&x)?,
        "sft": sft.window.is_some(),
        "window": sft.window,
        "finite": is_finite(&x)?,
        "countable": is_countable(&x),
        "positive_entropy": has_positive_entropy(&x),
        "constituents": constituents(&x)?.len(),
        "periods_upto": per.up_to(a.periods_upto),
        "period_residues": per.residues(),
        "period_modulus": per.modulus(),
        "period_threshold": per.threshold(),
        "monoid_size": monoid.size(),
    });
    Ok(Outcome { body, code: 0, raw: None })
}

fn limit_code(r: &LimitResult) -> u8 {
    match r.status {
        LimitStatus::Exists => 0,
        LimitStatus::NotExists(_) => 1,
        LimitStatus::Undecided(_) => 2,
    }
}

fn limit_body(r: &LimitResult) -> Value {
    let (status, reason) = match &r.status {
        LimitStatus::Exists => ("exists", None),
        LimitStatus::NotExists(s) => ("not-exists", Some(s.clone())),
        LimitStatus::Undecided(s) => ("undecided", Some(s.clone())),
    };
    json!({ "status": status, "reason": reason })
}

fn expect_inputs(inputs: &[PathBuf], n: usize, what: &str) -> Result<()> {
    if inputs.len() != n {
        return Err(Error::Parse { line: 0, msg: format!("expected {n} {what}, got {}", inputs.len()) });
    }
    Ok(())
}

fn build(a: &BuildArgs, files: &mut Files) -> Result<Outcome> {
    let cat = a.category;
    let maps = |files: &mut Files, n: usize| -> Result<Vec<BlockMap>> {
        expect_inputs(&a.inputs, n, ".bmap inputs")?;
        let ms = a.inputs.iter().map(|p| files.map(p)).collect::<Result<Vec<_>>>()?;
        for f in &ms {
            cat.check_morphism(f)?;
        }
        Ok(ms)
    };
    let result = match a.op {
        BuildOp::Product | BuildOp::Coproduct => {
            expect_inputs(&a.inputs, 2, ".shift inputs")?;
            let x = files.shift(&a.inputs[0])?;
            let y = files.shift(&a.inputs[1])?;
            cat.check_object(&x)?;
            cat.check_object(&y)?;
            if matches!(a.op, BuildOp::Product) {
                product_in(&x, &y, cat)?
            } else {
                coproduct(&x, &y, cat)?
            }
        }
        BuildOp::Pullback => {
            let ms = maps(files, 2)?;
            pullback(&ms[0], &ms[1])?
        }
        BuildOp::Equalizer => {
            let ms = maps(files, 2)?;
            equalizer(&ms[0], &ms[1], cat)?
        }
        BuildOp::KernelPair => kernel_pair(&maps(files, 1)?[0])?,
        BuildOp::Image => image_factorization(&maps(files, 1)?[0], cat)?,
        BuildOp::Union => {
            let ms = maps(files, 2)?;
            let i = subobject_union(&ms[0], &ms[1])?;
            LimitResult::exists(i.source().clone(), vec![i])
        }
    };
    let mut body = limit_body(&result);
    if let Some(obj) = &result.object {
        let out = files.write_shift(obj, &a.output)?;
        let mut legs = Vec::new();
        for (i, leg) in result.legs.iter().enumerate() {
            let p = files.write_map(leg, &sibling(&a.output, &format!(".leg{}.bmap", i + 1)))?;
            legs.push(p.display().to_string());
        }
        body["object"] = json!(out.display().to_string());
        body["legs"] = json!(legs);
        body["alphabet"] = json!(obj.alphabet().names());
    }
    Ok(Outcome { code: limit_code(&result), body, raw: None })
}

fn cert_dir(a: &CheckArgs) -> PathBuf {
    a.out_dir
        .clone()
        .or_else(|| a.files[0].parent().map(Path::to_path_buf))
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or_else(|| PathBuf::from("."))
}

fn check(a: &CheckArgs, base: &Caps, files: &mut Files) -> Result<Outcome> {
    let caps = caps_from(base, &a.caps);
    let cat = a.category;
    let name = a.property.to_possible_value().expect("no skipped variants").get_name().to_string();
    let v = if let CheckProp::ExistsMorphism = a.property {
        expect_inputs(&a.files, 2, ".shift inputs (source, target)")?;
        let z = files.shift(&a.files[0])?;
        let y = files.shift(&a.files[1])?;
        cat.check_object(&z)?;
        cat.check_object(&y)?;
        exists_morphism(&z, &y)?
    } else {
        expect_inputs(&a.files, 1, ".bmap input")?;
        let f = files.map(&a.files[0])?;
        cat.check_morphism(&f)?;
        match a.property {
            CheckProp::Epic => is_epic(&f, cat)?,
            CheckProp::Monic => is_monic(&f, cat)?,
            CheckProp::SplitEpic => is_split_epic(&f, cat, &caps)?,
            CheckProp::SplitMonic => is_split_monic(&f, cat, &caps)?,
            CheckProp::RegularEpic => is_regular_epic(&f, cat, &caps)?,
            CheckProp::RegularMonic => is_regular_monic(&f, cat, &caps)?,
            CheckProp::Preinjective => is_preinjective(&f)?,
            CheckProp::Injective => is_injective(&f)?,
            CheckProp::Peric => is_peric(&f)?,
            CheckProp::ExistsMorphism => unreachable!("handled above"),
        }
    };
    let dir = cert_dir(a);
    if a.out_dir.is_some() {
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.display().to_string(), msg: e.to_string() })?;
    }
    let stem = a.files[0].file_stem().and_then(|s| s.to_str()).unwrap_or("map");
    let cert_path = dir.join(format!("{stem}.{name}.cert.bmap"));
    let mut body = report::verdict(&v, &cert_path, files)?;
    body["property"] = json!(name);
    body["category"] = json!(cat.to_string());
    Ok(Outcome { code: report::exit_code(v.answer), body, raw: None })
}

fn coeq(a: &CoeqArgs, base: &Caps, files: &mut Files) -> Result<Outcome> {
    let caps = caps_from(base, &a.caps);
    let f = files.map(&a.file)?;
    a.category.check_morphism(&f)?;
    let r = coequalizer_id(&f, a.category, &caps)?;
    let mut body = limit_body(&r);
    body["category"] = json!(a.category.to_string());
    if let (Some(obj), Some(q)) = (&r.object, r.legs.first()) {
        let out = a.output.clone().unwrap_or_else(|| sibling(&a.file, ".coeq.shift"));
        files.write_shift(obj, &out)?;
        let qp = files.write_map(q, &sibling(&out, ".bmap"))?;
        body["object"] = json!(out.display().to_string());
        body["map"] = json!(qp.display().to_string());
        body["radius"] = json!(q.radius());
        body["classes"] = json!(obj.alphabet().len());
    }
    Ok(Outcome { code: limit_code(&r), body, raw: None })
}

fn dynamics(a: &DynamicsArgs, files: &mut Files) -> Result<Outcome> {
    let f = files.map(&a.file)?;
    if !f.is_endomorphism() {
        return Err(Error::Invalid("dynamics needs a map from a subshift to itself".into()));
    }
    let rev = is_reversible(&f, a.radius_cap)?;
    let rev_json = report::verdict(&rev, &sibling(&a.file, ".inverse.bmap"), files)?;
    let (ep, visible) = match eventual_periodicity(&f, a.cap, a.table_cap)? {
        EventualPeriodicity::Found { preperiod, period } => {
            let v = is_visibly_eventually_periodic(&f, preperiod, period)?;
            (json!({ "preperiod": preperiod, "period": period }), json!(v.answer.as_str()))
        }
        EventualPeriodicity::NotFoundBelowCap(cap) => (json!({ "cap": cap }), Value::Null),
        EventualPeriodicity::TableLimit { power, table_limit } => {
            (json!({ "cap": power - 1, "table_cap": table_limit.to_string() }), Value::Null)
        }
    };
    let chain = match chain_transitivity_failure(&f, a.levels)? {
        None => json!({ "transitive_up_to": a.levels, "fails_at": null }),
        Some(n) => json!({ "transitive_up_to": n - 1, "fails_at": n }),
    };
    let s = spreading_nilpotent(&f, a.cap)?;
    let names = f.source().alphabet();
    let body = json!({
        "reversible": rev_json,
        "eventual_periodicity": ep,
        "visibly_eventually_periodic": visible,
        "chain_transitivity": chain,
        "spreading_state": s.spreading.map(|x| names.name(x).to_string()),
        "nilpotent": s.nilpotent.map(|(n, x)| json!({ "steps": n, "state": names.name(x) })),
        "image_sequence_cap_reached": s.cap_reached,
    });
    Ok(Outcome { body, code: 0, raw: None })
}

fn run_census(a: &CensusArgs, caps: &Caps) -> Result<Outcome> {
    let bounds = Bounds { period: a.period, word: a.word, radius: a.radius, budget: caps.budget, ..Bounds::default() };
    let rows = census(a.alphabet, a.radius, &a.check, &bounds, caps)?;
    let mut csv = String::from("index,rule");
    for p in &a.check {
        csv.push_str(&format!(",{p}_engine,{p}_oracle"));
    }
    csv.push('\n');
    let mut disagreements = 0;
    let mut json_rows = Vec::new();
    for r in &rows {
        let rule: String = r.rule.iter().map(|s| s.to_string()).collect();
        csv.push_str(&format!("{},{rule}", r.index));
        let mut cells = serde_json::Map::new();
        for (p, engine, oracle) in &r.results {
            let o = Answer::from_bool(*oracle);
            csv.push_str(&format!(",{engine},{o}"));
            cells.insert(p.to_string(), json!({ "engine": engine.as_str(), "oracle": o.as_str() }));
        }
        csv.push('\n');
        disagreements += usize::from(!r.disagreements().is_empty());
        json_rows.push(json!({ "index": r.index, "rule": rule, "results": cells }));
    }
    let body = json!({ "maps": rows.len(), "disagreements": disagreements, "rows": json_rows });
    Ok(Outcome { body, code: u8::from(disagreements > 0), raw: Some(csv) })
}
