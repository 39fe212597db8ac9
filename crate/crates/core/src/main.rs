use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use even_lines::arrangement::canonical_form;
use even_lines::catalog::{builtin_catalog, builtin_ledger, catalog_index, classify_survivors, parse_ledger, Ledger};
use even_lines::chern::{chern_numbers, chern_table, ChernReport, NOT_GENERAL_TYPE};
use even_lines::cli::*;
use even_lines::enumerator::{enumerate, EnumerationError, EnumerationTask};
use even_lines::filters::run_pipeline;
use even_lines::lattice::{weight_distribution, EvenSetCode};

#[derive(Parser)]
#[command(name = "evenlines", version, about = "Even sets of lines on smooth quartic surfaces")]
struct Cli {
    /// Write a run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate admissible arrangements of N lines up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Restrict to one number of intersecting pairs.
        #[arg(long)]
        k: Option<usize>,
        /// Directory for survivors.g6, summary.json and manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Node budget; exceeding it exits with status 3.
        #[arg(long)]
        budget: Option<u64>,
        /// Neither read nor write the results cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Run the filter pipeline on every graph6 line of FILE ("-" for stdin).
    Check { file: PathBuf },
    /// Split arrangements into catalog matches, ledger exclusions and unknowns.
    Classify {
        file: PathBuf,
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Chern numbers of the double cover for every graph6 line of FILE.
    Chern {
        file: PathBuf,
        /// Aligned text table instead of JSON lines.
        #[arg(long)]
        table: bool,
    },
    /// Show or export the builtin catalog and exclusion ledger.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Weight distribution of a binary code.
    Code {
        /// One generator per line as a 0/1 string.
        #[arg(long)]
        generators: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Export {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    G6,
}

struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

type Outcome = Result<i32, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut manifest = RunManifest::new("", Value::Null);
    let result = run(cli.command, &mut manifest);
    let code = match result {
        Ok(c) => c,
        Err(f) => {
            eprintln!("evenlines: {}", f.msg);
            f.code
        }
    };
    manifest.wall_time_ms = start.elapsed().as_millis();
    if let Some(path) = cli.manifest {
        if let Err(e) = write_json(&path, &manifest) {
            eprintln!("evenlines: cannot write manifest {}: {e}", path.display());
        }
    }
    ExitCode::from(code as u8)
}

fn run(command: Command, manifest: &mut RunManifest) -> Outcome {
    match command {
        Command::Enumerate { n, k, out, jobs, budget, no_cache } => {
            let start = Instant::now();
            *manifest = RunManifest::new("enumerate", json!({ "n": n, "k": k, "budget": budget }));
            let code = cmd_enumerate(manifest, n, k, out.as_deref(), jobs, budget, no_cache)?;
            if let Some(dir) = out {
                manifest.wall_time_ms = start.elapsed().as_millis();
                write_json(&dir.join("manifest.json"), manifest).map_err(|e| fail(EXIT_VERIFY, e.to_string()))?;
            }
            Ok(code)
        }
        Command::Check { file } => {
            *manifest = RunManifest::new("check", json!({ "file": file }));
            cmd_check(manifest, &file)
        }
        Command::Classify { file, ledger } => {
            *manifest = RunManifest::new("classify", json!({ "file": file, "ledger": ledger }));
            cmd_classify(manifest, &file, ledger.as_deref())
        }
        Command::Chern { file, table } => {
            *manifest = RunManifest::new("chern", json!({ "file": file, "table": table }));
            cmd_chern(manifest, &file, table)
        }
        Command::Catalog { action } => {
            let (name, fmt) = match action {
                CatalogAction::List => ("list", None),
                CatalogAction::Export { format } => ("export", Some(format)),
            };
            *manifest = RunManifest::new(
                "catalog",
                json!({ "action": name, "format": fmt.map(|f| match f { Format::Json => "json", Format::G6 => "g6" }) }),
            );
            cmd_catalog(fmt)
        }
        Command::Code { generators } => {
            *manifest = RunManifest::new("code", json!({ "generators": generators }));
            cmd_code(manifest, &generators)
        }
    }
}

fn read_input(manifest: &mut RunManifest, path: &Path) -> Result<String, Failure> {
    let mut bytes = Vec::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        fs::read(path).map(|b| bytes = b)
    };
    res.map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    manifest.add_input(path, &bytes);
    String::from_utf8(bytes).map_err(|_| fail(EXIT_USAGE, format!("{} is not UTF-8", path.display())))
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    fs::write(path, text)
}

fn emit(text: &str) -> Result<(), Failure> {
    io::stdout().lock().write_all(text.as_bytes()).map_err(|e| fail(EXIT_VERIFY, e.to_string()))
}

fn cmd_enumerate(
    manifest: &mut RunManifest,
    n: usize,
    k: Option<usize>,
    out: Option<&Path>,
    jobs: Option<usize>,
    budget: Option<u64>,
    no_cache: bool,
) -> Outcome {
    let cache = if no_cache { None } else { cache_dir().map(|d| d.join(manifest.cache_key())) };
    let cached = cache.as_deref().and_then(|d| EnumerationPayload::load(d).ok()).filter(|p| p.complete());

    let (payload, code) = match cached {
        Some(p) => {
            manifest.cache_hit = true;
            (p, EXIT_OK)
        }
        None => {
            let mut task = EnumerationTask::new(n);
            if let Some(k) = k {
                task = task.with_k(k);
            }
            if let Some(b) = budget {
                task = task.with_budget(b);
            }
            if let Some(j) = jobs {
                task = task.with_jobs(j);
            }
            match enumerate(&task) {
                Ok(set) => {
                    let p = EnumerationPayload::of(&set);
                    if let Some(dir) = &cache {
                        // a failed cache write only costs a recomputation later
                        let _ = p.store(dir);
                    }
                    (p, EXIT_OK)
                }
                Err(EnumerationError::ResourceLimit { budget, used, partial }) => {
                    eprintln!(
                        "evenlines: node budget {budget} exhausted after {used} nodes; output is incomplete ({} partial survivor(s))",
                        partial.len()
                    );
                    (EnumerationPayload::of(&partial), EXIT_RESOURCE)
                }
                Err(e) => return Err(fail(EXIT_USAGE, e.to_string())),
            }
        }
    };
    manifest.complete = payload.complete();

    match out {
        Some(dir) => {
            let files = payload.store(dir).map_err(|e| fail(EXIT_VERIFY, format!("{}: {e}", dir.display())))?;
            for (p, b) in files {
                manifest.add_output(&p, b);
            }
            emit(&payload.summary)?;
        }
        None => {
            emit(&payload.graph6)?;
            eprint!("{}", payload.summary);
        }
    }
    Ok(code)
}

fn cmd_check(manifest: &mut RunManifest, file: &Path) -> Outcome {
    let text = read_input(manifest, file)?;
    let mut all_ok = true;
    let mut out = String::new();
    for line in parse_graph6_lines(&text) {
        let v = match line {
            Graph6Line::Ok { arrangement, .. } => {
                let r = run_pipeline(&arrangement);
                all_ok &= r.overall;
                serde_json::to_value(r).expect("report serializes")
            }
            Graph6Line::Err { line, text, error } => {
                all_ok = false;
                line_error(line, &text, &error)
            }
        };
        out.push_str(&v.to_string());
        out.push('\n');
    }
    emit(&out)?;
    manifest.complete = all_ok;
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_classify(manifest: &mut RunManifest, file: &Path, ledger_path: Option<&Path>) -> Outcome {
    let text = read_input(manifest, file)?;
    let ledger: Ledger = match ledger_path {
        Some(p) => {
            let t = read_input(manifest, p)?;
            parse_ledger(&t).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", p.display())))?
        }
        None => builtin_ledger(),
    };
    let mut arrangements = Vec::new();
    let mut errors = Vec::new();
    for line in parse_graph6_lines(&text) {
        match line {
            Graph6Line::Ok { arrangement, .. } => arrangements.push(arrangement),
            Graph6Line::Err { line, text, error } => errors.push(line_error(line, &text, &error)),
        }
    }
    let c = classify_survivors(&arrangements, &builtin_catalog(), &ledger);
    let open: Vec<&_> = ledger.open.iter().filter(|o| c.unknown.contains(&o.graph6)).collect();
    let report = json!({
        "counts": {
            "matched": c.matched.len(),
            "excluded": c.excluded.len(),
            "unknown": c.unknown.len(),
            "errors": errors.len(),
        },
        "matched": c.matched,
        "excluded": c.excluded,
        "unknown": c.unknown,
        "open_notes": open,
        "errors": errors,
    });
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    emit(&s)?;
    let ok = c.unknown.is_empty() && errors.is_empty();
    manifest.complete = ok;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_chern(manifest: &mut RunManifest, file: &Path, table: bool) -> Outcome {
    let text = read_input(manifest, file)?;
    let index = catalog_index(&builtin_catalog());
    let mut rows: Vec<(String, ChernReport, bool)> = Vec::new();
    let mut out = String::new();
    let mut ok = true;
    for line in parse_graph6_lines(&text) {
        match line {
            Graph6Line::Ok { arrangement, text, .. } => {
                let r = chern_numbers(&arrangement);
                let ids = index.get(&canonical_form(&arrangement)).cloned().unwrap_or_default();
                let noether_checked = !ids.iter().any(|id| NOT_GENERAL_TYPE.contains(&id.as_str()));
                if !table {
                    let v = json!({
                        "graph6": text,
                        "catalog": ids,
                        "report": r,
                        "noether_checked": noether_checked,
                    });
                    out.push_str(&v.to_string());
                    out.push('\n');
                }
                rows.push((if ids.is_empty() { text } else { ids.join("=") }, r, noether_checked));
            }
            Graph6Line::Err { line, text, error } => {
                ok = false;
                if !table {
                    out.push_str(&line_error(line, &text, &error).to_string());
                    out.push('\n');
                } else {
                    eprintln!("evenlines: line {line}: {error}");
                }
            }
        }
    }
    if table {
        out = chern_table(rows.iter().map(|(l, r, c)| (l.as_str(), r, *c)));
    }
    emit(&out)?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_catalog(format: Option<Format>) -> Outcome {
    let catalog = builtin_catalog();
    let text = match format {
        None => {
            let mut s = String::new();
            for e in &catalog {
                let graphs: Vec<&str> = e.graphs.iter().map(|g| g.as_str()).collect();
                s.push_str(&format!(
                    "{:<9} n={:<2} k={:<2} {:<9} {}\n",
                    e.id,
                    e.n,
                    e.k,
                    serde_json::to_value(e.realization).expect("serializes").as_str().unwrap_or(""),
                    graphs.join(" ")
                ));
            }
            let ledger = builtin_ledger();
            s.push_str(&format!("ledger: {} exclusion(s), {} open case(s)\n", ledger.entries.len(), ledger.open.len()));
            s
        }
        Some(Format::Json) => {
            let mut s = serde_json::to_string_pretty(&json!({ "catalog": catalog, "ledger": builtin_ledger() }))
                .expect("catalog serializes");
            s.push('\n');
            s
        }
        Some(Format::G6) => {
            let mut seen = std::collections::BTreeSet::new();
            let mut s = String::new();
            for g in catalog.iter().flat_map(|e| &e.graphs) {
                if seen.insert(g.clone()) {
                    s.push_str(g.as_str());
                    s.push('\n');
                }
            }
            s
        }
    };
    emit(&text)?;
    Ok(EXIT_OK)
}

fn cmd_code(manifest: &mut RunManifest, path: &Path) -> Outcome {
    let text = read_input(manifest, path)?;
    let code = EvenSetCode::parse(&text).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let dist = weight_distribution(&code).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let v = json!({
        "length": code.length(),
        "dimension": code.dimension(),
        "weights": dist,
    });
    emit(&format!("{v}\n"))?;
    Ok(EXIT_OK)
}
