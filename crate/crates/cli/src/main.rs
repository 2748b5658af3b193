use clap::{Parser, Subcommand};
use gctt_core::conv::{set_fuel, DEFAULT_FUEL};
use gctt_core::driver::{at_endpoints, decl_value, eval_expr, normal_form, LoadError, Loader};
use gctt_core::interval::{Dir, Name};
use gctt_core::parser::parse_module;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Type checker and normalizer for guarded cubical type theory.
#[derive(Parser, Debug)]
#[command(name = "gctt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directories searched for imported modules, separated by `:`.
    #[arg(long, global = true, env = "GCTT_PATH", value_delimiter = ':')]
    path: Vec<PathBuf>,

    /// Step bound for judgemental equality checks.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,

    /// Re-check imported modules for every input file.
    #[arg(long, global = true)]
    no_corpus_cache: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check modules, imports first.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Print one JSON record per declaration.
        #[arg(long)]
        report: bool,
    },
    /// Print the normal form of a declaration or an expression.
    Normalize {
        file: PathBuf,
        /// Declaration to normalize.
        name: Option<String>,
        /// Expression to normalize in the scope of the module.
        #[arg(long, conflicts_with = "name")]
        expr: Option<String>,
        /// Take a path endpoint before printing, e.g. `--at i=0`.
        #[arg(long, value_parser = parse_endpoint)]
        at: Vec<(Name, Dir)>,
    },
    /// Parse a module and print it back.
    Parse { file: PathBuf },
}

fn parse_endpoint(s: &str) -> Result<(Name, Dir), String> {
    let (name, d) = s.split_once('=').ok_or("expected NAME=0 or NAME=1")?;
    let d = match d.trim() {
        "0" => Dir::Zero,
        "1" => Dir::One,
        other => return Err(format!("endpoint must be 0 or 1, not `{}`", other)),
    };
    Ok((Name::new(name.trim()), d))
}

fn fail(e: &LoadError) -> ExitCode {
    eprintln!("{}", e);
    ExitCode::from(e.exit_code() as u8)
}

fn missing(files: &[&Path]) -> Option<ExitCode> {
    for f in files {
        if !f.is_file() {
            eprintln!("{}: [io] no such file", f.display());
            return Some(ExitCode::from(2));
        }
    }
    None
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    set_fuel(cli.fuel);
    let mut loader = Loader::new(cli.path.clone());
    if cli.no_corpus_cache {
        loader = loader.without_cache();
    }
    match cli.command {
        Command::Check { files, report } => {
            let refs: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
            if let Some(code) = missing(&refs) {
                return code;
            }
            if report {
                loader.on_decl(|module, r| {
                    let record = serde_json::json!({
                        "decl": format!("{}.{}", module, r.name),
                        "status": if r.ok { "ok" } else { "error" },
                        "millis": r.elapsed.as_millis() as u64,
                    });
                    println!("{}", record);
                });
            }
            for f in &files {
                set_fuel(cli.fuel);
                if let Err(e) = loader.load_file(f) {
                    return fail(&e);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Normalize { file, name, expr, at } => {
            if let Some(code) = missing(&[&file]) {
                return code;
            }
            let m = match loader.load_file(&file) {
                Ok(m) => m,
                Err(e) => return fail(&e),
            };
            let v = match (name, expr) {
                (Some(n), _) => match decl_value(&m, &n) {
                    Some(v) => v,
                    None => {
                        eprintln!("{}: [unbound] expected a declaration found `{}`", file.display(), n);
                        return ExitCode::from(1);
                    }
                },
                (None, Some(e)) => match eval_expr(&m, &e) {
                    Ok((v, _)) => v,
                    Err(msg) => {
                        eprintln!("<expr>: {}", msg);
                        return ExitCode::from(if msg.starts_with("[parse]") { 2 } else { 1 });
                    }
                },
                (None, None) => {
                    eprintln!("normalize needs a declaration name or --expr");
                    return ExitCode::from(2);
                }
            };
            match at_endpoints(&v, &at) {
                Ok(v) => {
                    println!("{}", normal_form(&v));
                    ExitCode::SUCCESS
                }
                Err(msg) => {
                    eprintln!("{}: [mismatch] {}", file.display(), msg);
                    ExitCode::from(1)
                }
            }
        }
        Command::Parse { file } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: [io] {}", file.display(), e);
                    return ExitCode::from(2);
                }
            };
            match parse_module(&src) {
                Ok(m) => {
                    print!("{}", m);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}:{}:{}: {}", file.display(), e.span.line, e.span.col, e);
                    ExitCode::from(2)
                }
            }
        }
    }
}
