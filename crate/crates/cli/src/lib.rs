//! Command-line front end: argument parsing, output formatting, cache use.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multituran_core::berge::{ex_berge, BergeSearchResult};
use multituran_core::cache::{CacheKey, Payload, ResultCache, ResultRecord};
use multituran_core::coloring::EdgeColoring;
use multituran_core::constructions::{Built, ConstructionSpec};
use multituran_core::counting::{count_all, count_colored, CompiledPattern, CountVector};
use multituran_core::search::{bipartite_scan, cex_multi, ex_multi, SearchOptions, SearchProblem, SearchResult};
use multituran_core::symmetrize::SymmetrizationState;
use multituran_core::verify::run_suite;
use multituran_core::{Error, PatternSpec, SmallGraph};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "multituran", version, about = "Exact generalized Turan numbers for several counted graphs")]
pub struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count pattern copies in a graph, a colored graph or a construction.
    Count {
        /// graph6, `<graph6>:<colors>` or a construction such as `turan:2,5`.
        #[arg(long)]
        host: String,
        #[arg(long, value_parser = parse_patterns)]
        patterns: Patterns,
    },
    /// Exhaustive ex or cex over all F-free graphs on n vertices.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_patterns)]
        patterns: Patterns,
        #[arg(long, value_parser = parse_pattern)]
        forbid: PatternSpec,
        /// Color pattern i in color i and maximize over edge colorings.
        #[arg(long)]
        colored: bool,
        /// Number of colors; must match the number of patterns.
        #[arg(long, requires = "colored")]
        k: Option<usize>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Build a named construction and optionally evaluate patterns on it.
    Construct {
        #[arg(long)]
        spec: ConstructionSpec,
        #[arg(long, value_parser = parse_patterns)]
        patterns: Option<Patterns>,
    },
    /// Pattern totals on every complete bipartite graph K_{x,n-x}.
    ScanBipartite {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_patterns)]
        patterns: Patterns,
    },
    /// Largest r-uniform Berge-F-free hypergraph on n vertices.
    Berge {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = parse_pattern)]
        forbid: PatternSpec,
        /// Skip the result cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Run Zykov symmetrization on a colored K_m-free host.
    Symmetrize {
        /// `<graph6>:<colors>`, bare graph6 (all color 1) or a construction.
        #[arg(long)]
        host: String,
        #[arg(long, value_parser = parse_patterns)]
        patterns: Patterns,
        #[arg(long)]
        m: usize,
        /// Write the step trace as JSON lines to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Also run the full colored exhaustion for the S7 example.
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Debug, Args)]
pub struct Limits {
    /// Refuse enumeration above this many vertices.
    #[arg(long, default_value_t = multituran_core::enumerate::DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    /// Branch-and-bound node budget per host for colored searches.
    #[arg(long, default_value_t = multituran_core::colorsearch::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Report enumeration progress on stderr.
    #[arg(long)]
    pub progress: bool,
    /// Skip the result cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
}

#[derive(Clone, Debug)]
pub struct Patterns(pub Vec<PatternSpec>);

fn parse_patterns(s: &str) -> Result<Patterns, String> {
    PatternSpec::parse_list(s).map(Patterns).map_err(|e| e.to_string())
}

fn parse_pattern(s: &str) -> Result<PatternSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Host {
    Plain(SmallGraph),
    Colored(EdgeColoring),
}

fn parse_host(text: &str, k: usize) -> multituran_core::Result<Host> {
    if let Ok(spec) = text.parse::<ConstructionSpec>() {
        return Ok(match spec.build()? {
            Built::Plain(g) => Host::Plain(g),
            Built::Colored(c) => Host::Colored(c),
        });
    }
    if text.contains(':') {
        Ok(Host::Colored(EdgeColoring::parse(text, k)?))
    } else {
        Ok(Host::Plain(SmallGraph::from_graph6(text)?))
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::InvariantViolation(_) => EXIT_VIOLATION,
        Error::Io(_) | Error::Json(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit status.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, json: bool, value: &Value, table: &str) -> multituran_core::Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    } else {
        write!(out, "{table}")?;
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> multituran_core::Result<i32> {
    match &cli.command {
        Command::Count { host, patterns } => count(cli.json, host, &patterns.0, out),
        Command::Extremal {
            n,
            patterns,
            forbid,
            colored,
            k,
            limits,
        } => extremal(cli.json, *n, &patterns.0, forbid, *colored, *k, limits, out),
        Command::Construct { spec, patterns } => construct(cli.json, spec, patterns.as_ref().map(|p| &p.0[..]), out),
        Command::ScanBipartite { n, patterns } => {
            let scan = bipartite_scan(*n, &patterns.0)?;
            let mut table = format!("{:>4}  {}\n", "x", "total");
            for row in &scan.table {
                let mark = if row.x == scan.best_x { "  *" } else { "" };
                table.push_str(&format!("{:>4}  {}{mark}\n", row.x, row.value));
            }
            table.push_str(&format!("best x = {}, value = {}\n", scan.best_x, scan.value));
            emit(out, cli.json, &serde_json::to_value(&scan)?, &table)?;
            Ok(EXIT_OK)
        }
        Command::Berge { n, r, forbid, no_cache } => berge(cli.json, *n, *r, forbid, *no_cache, out),
        Command::Symmetrize {
            host,
            patterns,
            m,
            trace,
        } => symmetrize(cli.json, host, &patterns.0, *m, trace.as_ref(), out),
        Command::Verify { suite: Suite::Paper, extended } => {
            let report = run_suite(*extended, SearchOptions::default(), |r| {
                if !cli.json {
                    let _ = writeln!(err, "{}", r.line());
                }
            });
            emit(out, cli.json, &serde_json::to_value(&report)?, &report.table())?;
            Ok(if report.passed { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn counts_table(patterns: &[PatternSpec], v: &CountVector) -> String {
    let mut t = String::new();
    for (i, (p, c)) in patterns.iter().zip(&v.entries).enumerate() {
        t.push_str(&format!("{:<12} {c}\n", format!("{}. {p}", i + 1)));
    }
    t.push_str(&format!("{:<12} {}\n", "sum", v.sum));
    t
}

fn count(json: bool, host: &str, patterns: &[PatternSpec], out: &mut dyn Write) -> multituran_core::Result<i32> {
    let (v, text) = match parse_host(host, patterns.len())? {
        Host::Plain(g) => {
            let compiled = patterns.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>, _>>()?;
            (count_all(&compiled, &g), g.to_graph6())
        }
        Host::Colored(c) => (count_colored(patterns, &c)?, c.to_text()),
    };
    let value = json!({
        "host": text,
        "patterns": patterns,
        "counts": serde_json::to_value(&v)?,
    });
    let table = if patterns.len() == 1 {
        format!("{}\n", v.sum)
    } else {
        counts_table(patterns, &v)
    };
    emit(out, json, &value, &table)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn extremal(
    json: bool,
    n: usize,
    patterns: &[PatternSpec],
    forbid: &PatternSpec,
    colored: bool,
    k: Option<usize>,
    limits: &Limits,
    out: &mut dyn Write,
) -> multituran_core::Result<i32> {
    if let Some(k) = k {
        if k != patterns.len() {
            return Err(Error::InvalidColoring(format!("--k {k} but {} patterns were given", patterns.len())));
        }
    }
    let problem = if colored {
        SearchProblem::colored(n, patterns.to_vec(), forbid.clone())?
    } else {
        SearchProblem::monochrome(n, patterns.to_vec(), forbid.clone())?
    };
    let opts = SearchOptions {
        enumeration_cap: limits.cap,
        node_budget: limits.budget,
        progress: limits.progress,
    };
    let cache = if limits.no_cache { None } else { ResultCache::from_env()? };
    let key = CacheKey::search(&problem)?;
    let cached = match &cache {
        Some(c) => match c.get(&key)?.map(|r| r.payload) {
            Some(Payload::Search(r)) if r.exact => Some(r),
            _ => None,
        },
        None => None,
    };
    let hit = cached.is_some();
    let result: SearchResult = match cached {
        Some(r) => r,
        None => {
            let r = if colored { cex_multi(&problem, &opts)? } else { ex_multi(&problem, &opts)? };
            if let Some(c) = &cache {
                c.put(&ResultRecord::new(key, Payload::Search(r.clone())))?;
            }
            r
        }
    };
    let mut value = serde_json::to_value(&result)?;
    value["cached"] = Value::Bool(hit);
    let table = if patterns.len() == 1 && !colored {
        format!("{}\n", result.value)
    } else {
        let mut t = format!("{}\n", result.value);
        t.push_str(&format!("witness {}", result.witness_graph));
        if let Some(colors) = &result.witness_coloring {
            let digits: String = colors.iter().map(|c| char::from(b'0' + c)).collect();
            t.push_str(&format!(":{digits}"));
        }
        t.push_str(&format!(
            "\nexact {}, {} graphs, {} colorings, {:.3}s{}\n",
            result.exact,
            result.graphs_enumerated,
            result.colorings_explored,
            result.elapsed,
            if hit { " (cached)" } else { "" }
        ));
        t
    };
    emit(out, json, &value, &table)?;
    Ok(EXIT_OK)
}

fn construct(
    json: bool,
    spec: &ConstructionSpec,
    patterns: Option<&[PatternSpec]>,
    out: &mut dyn Write,
) -> multituran_core::Result<i32> {
    let built = spec.build()?;
    let g = built.graph();
    let counts = patterns.map(|p| spec.evaluate(p)).transpose()?;
    let coloring = built.coloring().map(EdgeColoring::to_text);
    let value = json!({
        "spec": spec.to_string(),
        "order": g.order(),
        "edges": g.edge_count(),
        "graph6": g.to_graph6(),
        "coloring": coloring,
        "designated_forbidden": spec.designated_forbidden(),
        "counts": counts.as_ref().map(serde_json::to_value).transpose()?,
    });
    let mut table = format!(
        "{spec}: {} vertices, {} edges\ngraph6 {}\n",
        g.order(),
        g.edge_count(),
        g.to_graph6()
    );
    if let Some(c) = &coloring {
        table.push_str(&format!("colored {c}\n"));
    }
    if let (Some(p), Some(v)) = (patterns, &counts) {
        table.push_str(&counts_table(p, v));
    }
    emit(out, json, &value, &table)?;
    Ok(EXIT_OK)
}

fn berge(json: bool, n: usize, r: usize, forbid: &PatternSpec, no_cache: bool, out: &mut dyn Write) -> multituran_core::Result<i32> {
    let cache = if no_cache { None } else { ResultCache::from_env()? };
    let key = CacheKey::berge(n, r, forbid)?;
    let cached = match &cache {
        Some(c) => match c.get(&key)?.map(|r| r.payload) {
            Some(Payload::Berge(b)) if b.exact => Some(b),
            _ => None,
        },
        None => None,
    };
    let hit = cached.is_some();
    let result: BergeSearchResult = match cached {
        Some(b) => b,
        None => {
            let b = ex_berge(n, r, forbid)?;
            if let Some(c) = &cache {
                c.put(&ResultRecord::new(key, Payload::Berge(b.clone())))?;
            }
            b
        }
    };
    let mut value = serde_json::to_value(&result)?;
    value["cached"] = Value::Bool(hit);
    let table = format!("{}\nwitness\n{}", result.value, result.witness.to_text());
    emit(out, json, &value, &table)?;
    Ok(EXIT_OK)
}

fn symmetrize(
    json: bool,
    host: &str,
    patterns: &[PatternSpec],
    m: usize,
    trace: Option<&PathBuf>,
    out: &mut dyn Write,
) -> multituran_core::Result<i32> {
    let coloring = match parse_host(host, patterns.len())? {
        Host::Plain(g) => EdgeColoring::uniform(g, patterns.len(), 1)?,
        Host::Colored(c) => c,
    };
    let initial = coloring.to_text();
    let mut state = SymmetrizationState::new(coloring, patterns.to_vec(), m)?;
    let before = state.objective();
    let outcome = state.run_pipeline()?;
    if let Some(path) = trace {
        std::fs::write(path, state.trace_jsonl()?)?;
    }
    let value = json!({
        "initial": initial,
        "final": state.coloring().to_text(),
        "objective_before": before,
        "objective_after": state.objective(),
        "outcome": serde_json::to_value(&outcome)?,
        "trace": serde_json::to_value(state.trace())?,
    });
    let mut table = format!(
        "objective {before} -> {}\nfinal {}\nsmall packs {:?}\n",
        state.objective(),
        state.coloring().to_text(),
        outcome.packs.small
    );
    table.push_str(&format!(
        "medium packs {:?}\nlarge packs {:?}\n{} steps ({} class steps applied, {} rejected)\n",
        outcome.packs.medium,
        outcome.packs.large,
        state.trace().len(),
        outcome.applied,
        outcome.rejected
    ));
    emit(out, json, &value, &table)?;
    Ok(EXIT_OK)
}
