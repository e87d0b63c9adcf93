use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use realiz_core::corpus;
use realiz_core::domain::{denote_closed, level, seq_check, theta, SeqConfig, SeqVerdict, MAX_N_PRIME, MAX_RANK};
use realiz_core::models::{default_family, parse_family, valid_all_bas, Limits};
use realiz_core::pole::{in_pole, in_pole_limit, realizes_bounded};
use realiz_core::suite::{self, Shared, CRITERIA};
use realiz_core::typing::parse_derivation;
use realiz_core::{
    check_derivation, evaluate, parse_bterm, parse_formula, parse_process, parse_stack, parse_term, BASpec, DomainError, Fin,
    ModelError, PoleConfig, PoleError, TheoryOracle, ValidityConfig, Verdict,
};

const OK: u8 = 0;
const NO: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 64;
const PARSE: u8 = 65;

#[derive(Parser)]
#[command(name = "realiz", version, about = "Realizability machinery over Boolean-algebra theories")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Emit one JSON object per result line.
    #[arg(long, global = true)]
    json: bool,
    /// File of `key = value` lines supplying defaults for the options below.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Algebras used as the theory, e.g. `pf1-4,atomless`.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long = "k-max", global = true)]
    k_max: Option<usize>,
    /// Machine steps followed before giving up.
    #[arg(long, global = true)]
    fuel: Option<usize>,
    #[arg(long = "rank-cap", global = true, env = "REALIZ_RANK_CAP")]
    rank_cap: Option<usize>,
    /// Rank at which cc is approximated.
    #[arg(long = "n-prime", global = true)]
    n_prime: Option<usize>,
    /// Depth of canonical falsity stacks.
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Formula,
    Term,
    Bterm,
    Stack,
    Process,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusKind {
    Formulas,
    Terms,
    Processes,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and print back in canonical form.
    Parse {
        text: String,
        #[arg(long, value_enum, default_value = "formula")]
        kind: Kind,
    },
    /// Run the machine, one line per step.
    Eval { process: String },
    /// Check a derivation file (`-` reads stdin).
    Typecheck { file: PathBuf },
    /// Is a closed formula true in every Boolean algebra?
    Validity { formula: String },
    /// Does the family's theory contain a formula?
    Theory {
        #[arg(long)]
        contains: String,
    },
    /// Membership of a process in the pole.
    PoleMember {
        process: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check a term against the canonical falsity stacks of a formula.
    Realizes { term: String, formula: String },
    /// Components of a closed term's denotation up to a rank.
    Denote {
        term: String,
        #[arg(long)]
        rank: usize,
    },
    /// Describe a level of the domain.
    Lattice {
        #[arg(long)]
        rank: usize,
        /// Print every element with its table.
        #[arg(long)]
        list: bool,
    },
    /// The formula coding an element.
    Theta {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        element: u32,
    },
    /// Decide whether an element lies below some term's denotation.
    SeqCheck {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        element: u32,
        #[arg(long = "search-budget")]
        search_budget: Option<usize>,
    },
    /// Reproducible random formulas, terms or processes.
    Corpus {
        #[arg(value_enum)]
        kind: CorpusKind,
        #[arg(default_value_t = 20)]
        count: usize,
        /// Node bound for generated terms.
        #[arg(long = "term-size", default_value_t = 10)]
        term_size: usize,
    },
    /// Run acceptance criteria by id (all when none given).
    Suite { names: Vec<String> },
}

#[derive(Debug)]
struct RunConfig {
    family: Vec<BASpec>,
    k_max: usize,
    fuel: usize,
    rank_cap: usize,
    n_prime: usize,
    depth: usize,
    seed: u64,
    json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: default_family(),
            k_max: 32,
            fuel: 10_000,
            rank_cap: MAX_RANK,
            n_prime: realiz_core::domain::DEFAULT_N_PRIME,
            depth: 2,
            seed: 0,
            json: false,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

type Res = Result<u8, Failure>;

fn usage(m: impl Into<String>) -> Failure {
    Failure::new(USAGE, m)
}

fn model_failure(e: ModelError) -> Failure {
    match e {
        ModelError::BadSpec(_) => usage(e.to_string()),
        ModelError::Open(_) => Failure::new(PARSE, e.to_string()),
        _ => Failure::new(UNKNOWN, e.to_string()),
    }
}

fn domain_failure(e: DomainError) -> Failure {
    match e {
        DomainError::NoSuchElement { .. } => usage(e.to_string()),
        DomainError::Unbound(_) | DomainError::OpenFormula(_) => Failure::new(PARSE, e.to_string()),
        _ => Failure::new(UNKNOWN, e.to_string()),
    }
}

fn pole_failure(e: PoleError) -> Failure {
    match e {
        PoleError::Model(m) => model_failure(m),
        e => Failure::new(PARSE, e.to_string()),
    }
}

fn parsed<T, E: std::fmt::Display>(what: &str, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::new(PARSE, format!("{what}: {e}")))
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Failure> {
    v.parse().map_err(|_| usage(format!("config: bad value `{v}` for `{key}`")))
}

fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!("config line {}: expected `key = value`", n + 1)));
        };
        let (key, value) = (key.trim().replace('-', "_"), value.trim());
        match key.as_str() {
            "family" => cfg.family = parse_family(value).map_err(model_failure)?,
            "k_max" => cfg.k_max = number(&key, value)?,
            "fuel" => cfg.fuel = number(&key, value)?,
            "rank_cap" => cfg.rank_cap = number(&key, value)?,
            "n_prime" => cfg.n_prime = number(&key, value)?,
            "depth" => cfg.depth = number(&key, value)?,
            "seed" => cfg.seed = number(&key, value)?,
            "output" => {
                cfg.json = match value {
                    "json" | "structured" => true,
                    "human" => false,
                    _ => return Err(usage(format!("config: output is `human` or `json`, not `{value}`"))),
                }
            }
            _ => return Err(usage(format!("config line {}: unknown key `{key}`", n + 1))),
        }
    }
    Ok(())
}

fn resolve(opts: &Opts) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig { n_prime: usize::MAX, ..RunConfig::default() };
    if let Some(path) = &opts.config {
        apply_config_file(&mut cfg, path)?;
    }
    if let Some(f) = &opts.family {
        cfg.family = parse_family(f).map_err(model_failure)?;
    }
    cfg.k_max = opts.k_max.unwrap_or(cfg.k_max);
    cfg.fuel = opts.fuel.unwrap_or(cfg.fuel);
    cfg.rank_cap = opts.rank_cap.unwrap_or(cfg.rank_cap);
    cfg.n_prime = opts.n_prime.unwrap_or(cfg.n_prime);
    cfg.depth = opts.depth.unwrap_or(cfg.depth);
    cfg.seed = opts.seed.unwrap_or(cfg.seed);
    cfg.json |= opts.json;
    if cfg.rank_cap > MAX_RANK {
        return Err(usage(format!("rank cap {} is above the largest supported rank {MAX_RANK}", cfg.rank_cap)));
    }
    let most = MAX_N_PRIME.min(cfg.rank_cap.saturating_sub(2));
    if cfg.n_prime == usize::MAX {
        cfg.n_prime = realiz_core::domain::DEFAULT_N_PRIME.min(most);
    } else if cfg.n_prime > most {
        return Err(usage(format!("n-prime {} must be at most {most} under rank cap {}", cfg.n_prime, cfg.rank_cap)));
    }
    Ok(cfg)
}

impl RunConfig {
    fn emit(&self, human: impl AsRef<str>, structured: Value) {
        if self.json {
            println!("{structured}");
        } else {
            println!("{}", human.as_ref());
        }
    }

    fn rank(&self, n: usize) -> Result<usize, Failure> {
        if n > self.rank_cap {
            return Err(usage(format!("rank {n} is above the rank cap {}", self.rank_cap)));
        }
        Ok(n)
    }

    fn validity(&self) -> ValidityConfig {
        ValidityConfig { family: self.family.clone(), assume_family_complete: false, limits: Limits::default() }
    }

    fn pole(&self) -> PoleConfig {
        PoleConfig::new(TheoryOracle::Family(self.family.clone()), self.k_max, self.fuel)
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Valid(j) => json!({"verdict": "Valid", "justification": format!("{j:?}")}),
        Verdict::Refuted { witness, trace } => json!({"verdict": "Refuted", "witness": witness.to_string(), "trace": trace}),
        Verdict::Unknown(why) => json!({"verdict": "Unknown", "reason": why}),
    }
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Valid(_) => OK,
        Verdict::Refuted { .. } => NO,
        Verdict::Unknown(_) => UNKNOWN,
    }
}

fn run(cmd: Cmd, cfg: &RunConfig) -> Res {
    match cmd {
        Cmd::Parse { text, kind } => {
            let (name, printed) = match kind {
                Kind::Formula => ("formula", parsed("formula", parse_formula(&text))?.to_string()),
                Kind::Term => ("term", parsed("term", parse_term(&text))?.to_string()),
                Kind::Bterm => ("bterm", parsed("term", parse_bterm(&text))?.to_string()),
                Kind::Stack => ("stack", parsed("stack", parse_stack(&text))?.to_string()),
                Kind::Process => ("process", parsed("process", parse_process(&text))?.to_string()),
            };
            cfg.emit(&printed, json!({"kind": name, "printed": printed}));
            Ok(OK)
        }
        Cmd::Eval { process } => {
            let p = parsed("process", parse_process(&process))?;
            let trace = evaluate(&p, cfg.fuel);
            for (i, (rule, q)) in trace.transitions().enumerate() {
                cfg.emit(format!("{rule}: {q}"), json!({"step": i + 1, "rule": rule.to_string(), "process": q.to_string()}));
            }
            let label = if trace.stuck { "stuck" } else { "fuel" };
            cfg.emit(
                format!("{label}: {}", trace.last),
                json!({"steps": trace.steps.len(), "stuck": trace.stuck, "process": trace.last.to_string()}),
            );
            Ok(if trace.stuck { OK } else { UNKNOWN })
        }
        Cmd::Typecheck { file } => {
            let src = if file.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
                s
            } else {
                fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?
            };
            let d = parsed("derivation", parse_derivation(&src))?;
            match check_derivation(&d) {
                Ok(j) => {
                    cfg.emit(format!("accepted: {j}"), json!({"accepted": true, "conclusion": j.to_string()}));
                    Ok(OK)
                }
                Err(e) => {
                    let path: Vec<usize> = e.path.clone();
                    cfg.emit(
                        format!("rejected {e}"),
                        json!({"accepted": false, "path": path, "rule": e.rule.to_string(), "violation": e.violation.to_string()}),
                    );
                    Ok(NO)
                }
            }
        }
        Cmd::Validity { formula } => {
            let a = parsed("formula", parse_formula(&formula))?;
            let v = valid_all_bas(&a, &cfg.validity()).map_err(model_failure)?;
            let mut human = v.to_string();
            if let Verdict::Refuted { trace, .. } = &v {
                for line in trace {
                    human.push_str("\n  ");
                    human.push_str(line);
                }
            }
            let mut obj = verdict_json(&v);
            obj["formula"] = json!(a.to_string());
            cfg.emit(human, obj);
            Ok(verdict_code(&v))
        }
        Cmd::Theory { contains } => {
            let a = parsed("formula", parse_formula(&contains))?;
            let yes = TheoryOracle::Family(cfg.family.clone()).contains(&a).map_err(model_failure)?;
            let family: Vec<String> = cfg.family.iter().map(ToString::to_string).collect();
            cfg.emit(yes.to_string(), json!({"formula": a.to_string(), "family": family, "contains": yes}));
            Ok(if yes { OK } else { NO })
        }
        Cmd::PoleMember { process, k } => {
            let p = parsed("process", parse_process(&process))?;
            let pole = cfg.pole();
            let least = in_pole_limit(&p, &pole).map_err(pole_failure)?;
            let (member, code) = match k {
                Some(k) => {
                    let m = in_pole(&p, k, &pole).map_err(pole_failure)?;
                    (Some(m), if m { OK } else { NO })
                }
                None => (least.map(|_| true), if least.is_some() { OK } else { UNKNOWN }),
            };
            let human = match (member, least) {
                (Some(true), Some(l)) => format!("true, least k = {l}"),
                (Some(true), None) => "true".to_string(),
                (Some(false), Some(l)) => format!("false at k = {}, least k = {l}", k.expect("asked")),
                (Some(false), None) => format!("false, not in the pole up to k = {}", cfg.k_max),
                (None, _) => format!("unknown, not in the pole up to k = {}", cfg.k_max),
            };
            cfg.emit(human, json!({"process": p.to_string(), "k": k, "member": member, "least": least}));
            Ok(code)
        }
        Cmd::Realizes { term, formula } => {
            let t = parsed("term", parse_term(&term))?;
            let a = parsed("formula", parse_formula(&formula))?;
            let report = realizes_bounded(&t, &a, &cfg.pole(), cfg.depth).map_err(pole_failure)?;
            for (pi, l) in &report.results {
                let human = match l {
                    Some(k) => format!("{pi}: in the pole at k = {k}"),
                    None => format!("{pi}: not found up to k = {}", cfg.k_max),
                };
                cfg.emit(human, json!({"stack": pi.to_string(), "least": l}));
            }
            let clean = report.is_clean();
            cfg.emit(
                format!("{} stacks, {} failures", report.results.len(), report.failures().len()),
                json!({"term": t.to_string(), "formula": a.to_string(), "stacks": report.results.len(), "clean": clean}),
            );
            Ok(if clean { OK } else { NO })
        }
        Cmd::Denote { term, rank } => {
            let rank = cfg.rank(rank)?;
            let t = parsed("term", parse_term(&term))?;
            let d = denote_closed(&t, cfg.n_prime).map_err(domain_failure)?;
            let mut comps = Vec::new();
            for n in 0..=rank {
                let c = d.comp(n).map_err(domain_failure)?;
                comps.push(c);
                cfg.emit(format!("rank {n}: {}", Fin { rank: n, idx: c }), json!({"rank": n, "element": c}));
            }
            if let Some(n) = d.truncation() {
                cfg.emit(format!("cc approximated at rank {n}"), json!({"truncation": n}));
            }
            Ok(OK)
        }
        Cmd::Lattice { rank, list } => {
            let rank = cfg.rank(rank)?;
            let l = level(rank).map_err(domain_failure)?;
            cfg.emit(
                format!("D{rank}: {} elements, bottom {}, top {}", l.size(), l.bottom(), l.top()),
                json!({"rank": rank, "size": l.size(), "bottom": l.bottom(), "top": l.top()}),
            );
            if list {
                for i in l.elements() {
                    let table: Vec<u8> = if rank == 0 { Vec::new() } else { l.table(i).to_vec() };
                    let shown = if rank == 0 {
                        if i == 0 { "bottom".to_string() } else { "top".to_string() }
                    } else {
                        format!("{table:?}")
                    };
                    cfg.emit(format!("{i}: {shown}"), json!({"rank": rank, "index": i, "table": table}));
                }
            }
            Ok(OK)
        }
        Cmd::Theta { rank, element } => {
            let rank = cfg.rank(rank)?;
            let x = Fin::new(rank, element).map_err(domain_failure)?;
            let a = theta(x).map_err(domain_failure)?;
            cfg.emit(a.to_string(), json!({"rank": rank, "element": element, "formula": a.to_string()}));
            Ok(OK)
        }
        Cmd::SeqCheck { rank, element, search_budget } => {
            let rank = cfg.rank(rank)?;
            let x = Fin::new(rank, element).map_err(domain_failure)?;
            let scfg = SeqConfig { validity: cfg.validity(), search_budget, work_rank: 0, n_prime: cfg.n_prime };
            let r = seq_check(x, &scfg).map_err(domain_failure)?;
            let mut human = format!("{}\n  code: {}\n  validity: {}", r.verdict, r.formula, r.validity);
            let mut obj = json!({
                "rank": rank,
                "element": element,
                "verdict": match &r.verdict {
                    SeqVerdict::Unknown(_) => "Unknown".to_string(),
                    v => v.to_string(),
                },
                "formula": r.formula.to_string(),
                "validity": verdict_json(&r.validity),
            });
            if let Some(s) = &r.search {
                let w = s.witness.as_ref().map(ToString::to_string);
                human.push_str(&format!(
                    "\n  search: {} ({} terms examined, {} skipped)",
                    w.as_deref().unwrap_or("no witness"),
                    s.examined,
                    s.skipped
                ));
                obj["search"] = json!({"witness": w, "examined": s.examined, "skipped": s.skipped});
            }
            cfg.emit(human, obj);
            Ok(match r.verdict {
                SeqVerdict::Sequentialisable => OK,
                SeqVerdict::NotSequentialisable => NO,
                SeqVerdict::Unknown(_) => UNKNOWN,
            })
        }
        Cmd::Corpus { kind, count, term_size } => {
            let (name, items): (&str, Vec<String>) = match kind {
                CorpusKind::Formulas => ("formula", corpus::formulas(count, cfg.seed).iter().map(ToString::to_string).collect()),
                CorpusKind::Terms => {
                    ("term", corpus::terms(count, term_size, cfg.seed, true).iter().map(ToString::to_string).collect())
                }
                CorpusKind::Processes => ("process", corpus::processes(count, cfg.seed).iter().map(ToString::to_string).collect()),
            };
            for (i, item) in items.iter().enumerate() {
                cfg.emit(item, json!({"index": i, "kind": name, "item": item}));
            }
            Ok(OK)
        }
        Cmd::Suite { names } => {
            for n in &names {
                if suite::find(n).is_none() {
                    let ids: Vec<&str> = CRITERIA.iter().map(|c| c.id).collect();
                    return Err(usage(format!("unknown criterion `{n}` (known: {})", ids.join(", "))));
                }
            }
            let mut shared = Shared::default();
            let mut all = true;
            for c in CRITERIA.iter().filter(|c| names.is_empty() || names.iter().any(|n| n == c.id)) {
                let o = c.run(&mut shared);
                all &= o.passed;
                cfg.emit(
                    o.to_string(),
                    json!({
                        "id": o.id,
                        "title": o.title,
                        "passed": o.passed,
                        "detail": o.detail,
                        "elapsed_ms": o.elapsed.as_secs_f64() * 1e3,
                        "limit_ms": o.limit.map(|l| l.as_millis() as u64),
                    }),
                );
            }
            Ok(if all { OK } else { NO })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => OK,
                _ => USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json_requested = cli.opts.json;
    let result = resolve(&cli.opts).and_then(|cfg| run(cli.cmd, &cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if json_requested {
                println!("{}", json!({"error": f.message, "exit": f.code}));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
