mod error;
mod figure;
mod input;
mod table;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tracemap_core::autact::{alphabet, sigma7_image};
use tracemap_core::checks::{run_suite, SUITES};
use tracemap_core::classify::classify_batch;
use tracemap_core::matgroups::{catalog_group, closure, GroupKind};
use tracemap_core::orbits::{enumerate_orbit, factor_string, orbit_stats, perm_image_order, slice_table};
use tracemap_core::quadforms::{
    cholesky, coxeter_classify, gram2, gram3, is_positive_definite, reflections_from, GramForm,
};
use tracemap_core::tracepoints::fano_graph;
use tracemap_core::Limits;

use error::{core_code, CliError, CliResult};
use table::{diff, failures, TableOpts};

#[derive(Parser, Debug)]
#[command(name = "tracemap", version, about = "Exact trace-map dynamics for Aut(F2) and Aut(F3)")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Orbit enumeration bound (points).
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    /// Matrix group closure bound (elements).
    #[arg(long, global = true, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    closure_bound: u64,
    #[arg(long, global = true, default_value_t = 240, value_parser = clap::value_parser!(u32).range(1..))]
    conductor_cap: u32,
    /// Largest permutation degree handed to the stabilizer chain.
    #[arg(long, global = true, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    degree_cap: u64,
    /// Interval precision in bits for floating summaries.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(53..))]
    precision: u32,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Single-threaded, order-stable execution.
    #[arg(long, global = true)]
    deterministic: bool,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
}

impl RunConfig {
    fn limits(&self) -> Limits {
        Limits {
            conductor_cap: self.conductor_cap,
            orbit_bound: self.bound as usize,
            closure_bound: self.closure_bound as usize,
            degree_cap: self.degree_cap as usize,
            deterministic: self.deterministic,
            ..Limits::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify tuples read as JSONL; writes one verdict per line.
    Classify {
        /// Input file (stdin when absent or `-`).
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Classify these points instead of reading input.
        #[arg(long = "point", short)]
        points: Vec<String>,
    },
    /// Enumerate an orbit: JSONL points plus a stats footer.
    Orbit {
        /// `O1`..`O5`, a comma list, or a JSON tuple.
        point: String,
        /// Emit the slice table of this coordinate label as CSV instead.
        #[arg(long)]
        table: Option<String>,
        /// Include the permutation image order in the footer.
        #[arg(long)]
        perm_order: bool,
    },
    /// Regenerate a table; with `--check`, diff against the expected values.
    Table {
        /// slices, levels, inventories or perm_orders.
        which: String,
        #[arg(long)]
        check: bool,
        /// Largest rank-3 orbit degree in perm_orders.
        #[arg(long, default_value_t = 520)]
        max_degree: usize,
    },
    /// Catalog group generators and closure sizes.
    Groups {
        /// Groups to list, e.g. BT24 BD12 C5 (default: the polyhedral three and BD8..BD20).
        kinds: Vec<String>,
    },
    /// Gram matrix, leading minors, definiteness and Coxeter type of a tuple.
    Gram {
        point: String,
    },
    /// Incidence graph of the coordinate subspaces and the S7 image.
    Fano,
    /// Run property suites; exit 1 when any check fails.
    Verify {
        /// identities, presentation, invariance, fano, coxeter (default: all).
        suites: Vec<String>,
        /// Random points per property (default: 500, and 200 for presentation).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Per-point ellipse memberships of a finite rank-2 orbit (CSV).
    FigureData {
        orbit: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = if cli.cfg.deterministic { 1 } else { cli.cfg.threads };
    if threads > 0 {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tracemap: {e}");
            e.exit()
        }
    }
}

fn run(cli: &Cli) -> CliResult<u8> {
    let cfg = &cli.cfg;
    let limits = cfg.limits();
    let mut out = io::BufWriter::new(io::stdout().lock());
    let code = match &cli.cmd {
        Command::Classify { input, points } => cmd_classify(&mut out, input.as_deref(), points, &limits)?,
        Command::Orbit { point, table, perm_order } => {
            cmd_orbit(&mut out, point, table.as_deref(), *perm_order, &limits)?
        }
        Command::Table { which, check, max_degree } => {
            cmd_table(&mut out, which, *check, TableOpts { limits, max_degree: *max_degree }, cfg.json)?
        }
        Command::Groups { kinds } => cmd_groups(&mut out, kinds, &limits, cfg.csv)?,
        Command::Gram { point } => cmd_gram(&mut out, point, &limits, cfg.precision)?,
        Command::Fano => {
            let img = sigma7_image();
            let v = json!({ "fano": fano_graph(), "sigma7": { "images": img.images, "order": img.order.to_string() } });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            0
        }
        Command::Verify { suites, samples, seed } => cmd_verify(&mut out, suites, *samples, *seed, cfg.csv)?,
        Command::FigureData { orbit } => {
            write!(out, "{}", figure::figure_data(orbit, &limits)?)?;
            0
        }
    };
    out.flush()?;
    Ok(code)
}

fn cmd_classify(out: &mut impl Write, input: Option<&std::path::Path>, points: &[String], limits: &Limits) -> CliResult<u8> {
    let pts = if points.is_empty() {
        input::read_jsonl(input)?
    } else {
        points.iter().map(|s| input::parse_point(s)).collect::<CliResult<Vec<_>>>()?
    };
    let mut code = 0;
    for (p, r) in pts.iter().zip(classify_batch(&pts, limits)) {
        match r {
            Ok(v) => writeln!(out, "{}", serde_json::to_string(&v)?)?,
            Err(e) => {
                code = code.max(core_code(&e));
                writeln!(out, "{}", json!({ "point": p, "error": e.to_string() }))?;
            }
        }
    }
    Ok(code)
}

fn cmd_orbit(out: &mut impl Write, point: &str, table: Option<&str>, perm_order: bool, limits: &Limits) -> CliResult<u8> {
    let p = input::parse_point(point)?;
    let o = enumerate_orbit(&p, alphabet(p.arity()), limits.orbit_bound)?;
    if let Some(label) = table {
        if !o.exhausted {
            return Err(tracemap_core::Error::NotExhausted { bound: limits.orbit_bound }.into());
        }
        if !p.labels().contains(&label) {
            return Err(CliError::Usage(format!("unknown coordinate `{label}`; expected one of {}", p.labels().join(", "))));
        }
        write!(out, "{}", slice_table(&o, label)?.to_csv())?;
        return Ok(0);
    }
    for q in &o.points {
        writeln!(out, "{}", serde_json::to_string(q)?)?;
    }
    if !o.exhausted {
        writeln!(out, "{}", json!({ "stats": { "size": o.len(), "exhausted": false, "bound": limits.orbit_bound } }))?;
        return Ok(3);
    }
    let st = orbit_stats(&o)?;
    let mut stats = json!({
        "size": st.size,
        "exhausted": true,
        "level": st.level.to_string(),
        "inventory": st.inventory.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    if perm_order {
        stats["perm_order"] = json!(factor_string(&perm_image_order(&o, limits.degree_cap)?));
    }
    writeln!(out, "{}", json!({ "stats": stats }))?;
    Ok(0)
}

fn cmd_table(out: &mut impl Write, which: &str, check: bool, opts: TableOpts, as_json: bool) -> CliResult<u8> {
    let computed = table::compute(which, &opts)?;
    if !check {
        if as_json {
            writeln!(out, "{}", serde_json::to_string_pretty(&computed.to_json())?)?;
        } else {
            write!(out, "{}", computed.to_csv())?;
        }
        return Ok(0);
    }
    let d = diff(&table::expected(which)?, &computed);
    let bad = failures(&d);
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "table": which, "rows": d, "failures": bad }))?)?;
    } else {
        writeln!(out, "key,expected,computed,status")?;
        for r in &d {
            writeln!(out, "{},{},{},{}", r.key, r.expected, r.computed, serde_json::to_value(r.status)?.as_str().unwrap_or(""))?;
        }
    }
    if bad > 0 {
        out.flush()?;
        return Err(CliError::Mismatch(format!("{which}: {bad} row(s) differ from the expected values")));
    }
    Ok(0)
}

fn default_groups() -> Vec<GroupKind> {
    let mut v = vec![GroupKind::BT24, GroupKind::BO48, GroupKind::BI120];
    v.extend((2..=5).map(GroupKind::BinaryDihedral));
    v
}

fn cmd_groups(out: &mut impl Write, kinds: &[String], limits: &Limits, as_csv: bool) -> CliResult<u8> {
    let kinds: Vec<GroupKind> = if kinds.is_empty() {
        default_groups()
    } else {
        kinds.iter().map(|s| s.parse().map_err(|e: tracemap_core::Error| CliError::Usage(e.to_string()))).collect::<CliResult<_>>()?
    };
    if as_csv {
        writeln!(out, "group,expected_order,closure_size")?;
    }
    let mut code = 0;
    for k in kinds {
        let gens = catalog_group(k)?;
        let size = closure(&gens, limits.closure_bound.max(k.order()))?.elements().map(<[_]>::len);
        if size != Some(k.order()) {
            code = 1;
        }
        let size_s = size.map_or("unbounded".to_string(), |s| s.to_string());
        if as_csv {
            writeln!(out, "{k},{},{size_s}", k.order())?;
        } else {
            let g: Vec<String> = gens.iter().map(|m| m.to_string()).collect();
            writeln!(out, "{}", json!({ "group": k.to_string(), "expected_order": k.order(), "closure_size": size, "generators": g }))?;
        }
    }
    Ok(code)
}

fn cmd_gram(out: &mut impl Write, point: &str, limits: &Limits, prec: u32) -> CliResult<u8> {
    let p = input::parse_point(point)?;
    let g: GramForm = if p.arity() == 2 { gram2(&p)? } else { gram3(&p)? };
    let minors: Vec<String> = g.leading_minors().iter().map(|c| c.to_string()).collect();
    let def = is_positive_definite(&g)?;
    let rs = reflections_from(&g, limits.product_order_cap)?;
    let mut v = json!({
        "point": p,
        "gram": g.g.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "minors": minors,
        "definiteness": def,
        "coxeter": coxeter_classify(&rs),
    });
    if def.is_positive() {
        let ch = cholesky(&g, prec)?;
        v["cholesky"] = json!(ch.to_f64());
        v["cholesky_residual"] = json!(ch.residual(&g, prec));
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    Ok(0)
}

fn cmd_verify(out: &mut impl Write, suites: &[String], samples: Option<usize>, seed: u64, as_csv: bool) -> CliResult<u8> {
    let names: Vec<&str> = if suites.is_empty() { SUITES.to_vec() } else { suites.iter().map(String::as_str).collect() };
    for s in &names {
        if !SUITES.contains(s) {
            return Err(CliError::Usage(format!("unknown suite `{s}`; expected one of {}", SUITES.join(", "))));
        }
    }
    if as_csv {
        writeln!(out, "suite,check,samples,result")?;
    }
    let mut failed = 0;
    for s in names {
        let n = samples.unwrap_or(if s == "presentation" { 200 } else { 500 });
        for c in run_suite(s, n, seed)? {
            failed += usize::from(!c.passed);
            if as_csv {
                writeln!(out, "{},{},{},{}", c.suite, c.name.replace(',', ";"), c.samples, if c.passed { "pass" } else { "fail" })?;
            } else {
                writeln!(out, "{}", serde_json::to_string(&c)?)?;
            }
        }
    }
    Ok(if failed > 0 { 1 } else { 0 })
}
