//! The `specseq` command line: validate filtered-complex files, compute and
//! render pages, take décalage, run the Atiyah–Hirzebruch comparisons, and
//! drive the randomized verification campaigns.
//!
//! Exit codes: 0 success, 1 a verified property failed (counterexample
//! emitted), 2 invalid input.

use clap::{Parser, Subcommand};
use specseq::indexing::Convention;
use specseq::pages::{einfty_page, er_classical, er_lurie, PageIndex};
use specseq::Ring;
use specseq_cli::{campaign, chart, io};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "specseq", version, about = "Exact spectral sequences of filtered chain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a *.fc.json file: structure, strictness, d-compatibility.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compute pages E^1..E^rmax (and E^∞ with --infinity).
    Pages {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
        /// One of the twelve indexing conventions, e.g. homology-decreasing-serre.
        #[arg(long, default_value = "homology-decreasing-serre")]
        convention: String,
        /// classical (cycles/boundaries) or lurie (interval images).
        #[arg(long, default_value = "classical")]
        oracle: String,
        /// json, ascii, or svg.
        #[arg(long, default_value = "ascii")]
        format: String,
        /// Include the stable page.
        #[arg(long)]
        infinity: bool,
        /// Output path (json/ascii) or prefix (svg, one file per page).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply Deligne décalage and write the resulting filtration.
    Decalage {
        #[arg(long)]
        input: PathBuf,
        /// How many times to apply the functor.
        #[arg(long, default_value_t = 1)]
        iterate: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Atiyah–Hirzebruch: skeletal vs Whitehead filtrations on Hom(C_*(X), M).
    Ahss {
        /// CW complex file (*.cw.json).
        #[arg(long)]
        cw: PathBuf,
        /// Coefficient complex file (*.fc.json; filtration ignored).
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
        /// Also print the skeletal pages in this format (ascii or json).
        #[arg(long)]
        format: Option<String>,
    },
    /// Run a randomized verification campaign.
    Verify {
        /// decalage, convergence, leibniz, maunder, or oracles.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
        /// all, integers, rationals, or a prime field like f2 or f97.
        #[arg(long, default_value = "all")]
        ring: String,
        /// Deliberately corrupt one oracle to confirm detection:
        /// term-rank, zero-differential, transform, or product-entry.
        #[arg(long)]
        inject_fault: Option<String>,
        /// Where to write the counterexample on failure.
        #[arg(long, default_value = "counterexample.fc.json")]
        counterexample: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_filtered(
    path: &PathBuf,
) -> Result<(specseq::FilteredComplex, Option<specseq::multiplicative::FilteredDGA>, Vec<specseq::filtered::Violation>), String> {
    let json = read(path)?;
    io::parse_filtered_json(&json).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_convention(name: &str) -> Result<Convention, String> {
    Convention::parse(name).map_err(|e| e.to_string())
}

fn parse_rings(name: &str) -> Result<Vec<Ring>, String> {
    match name {
        "all" => Ok(vec![Ring::PrimeField(2), Ring::PrimeField(97), Ring::Rationals, Ring::Integers]),
        "integers" | "z" => Ok(vec![Ring::Integers]),
        "rationals" | "q" => Ok(vec![Ring::Rationals]),
        other => {
            if let Some(p) = other.strip_prefix('f') {
                let p: u64 = p.parse().map_err(|_| format!("bad ring {other:?}"))?;
                if !Ring::valid_characteristic(p) {
                    return Err(format!("{p} is not prime"));
                }
                Ok(vec![Ring::PrimeField(p)])
            } else {
                Err(format!("bad ring {other:?}"))
            }
        }
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Validate { input } => {
            let (filtered, dga, violations) = load_filtered(&input)?;
            let blocking: Vec<_> = violations.iter().filter(|v| v.blocks_pages()).collect();
            if !blocking.is_empty() {
                // parse_filtered_json already rejects these, so this is
                // unreachable in practice; keep the message for safety.
                eprintln!("invalid: {blocking:?}");
                return Ok(ExitCode::from(2));
            }
            for v in &violations {
                println!("warning: {v:?}");
            }
            if let Some(dga) = dga {
                let dga_violations = dga.validate();
                if !dga_violations.is_empty() {
                    eprintln!("invalid dga: {dga_violations:?}");
                    return Ok(ExitCode::from(2));
                }
                println!("dga block: valid");
            }
            let (lo, hi) = filtered.weight_support();
            println!(
                "valid: degrees [{}, {}], weights [{lo}, {hi}]",
                filtered.complex().degree_range().0,
                filtered.complex().degree_range().1
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Pages { input, rmax, convention, oracle, format, infinity, output } => {
            let (filtered, _, _) = load_filtered(&input)?;
            let convention = parse_convention(&convention)?;
            let compute = |r: u32| match oracle.as_str() {
                "classical" => er_classical(&filtered, r).map_err(|e| e.to_string()),
                "lurie" => er_lurie(&filtered, r).map_err(|e| e.to_string()),
                other => Err(format!("unknown oracle {other:?}")),
            };
            let mut pages = Vec::new();
            for r in 1..=rmax.max(1) {
                pages.push(compute(r)?);
            }
            if infinity {
                pages.push(einfty_page(&filtered).map_err(|e| e.to_string())?);
            }
            match format.as_str() {
                "json" => {
                    let reports: Vec<_> =
                        pages.iter().map(|p| io::page_report(p, convention)).collect();
                    let doc = serde_json::json!({
                        "format_version": io::FORMAT_VERSION,
                        "pages": reports,
                    });
                    emit(&output, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
                }
                "ascii" => {
                    let mut text = String::new();
                    for p in &pages {
                        text.push_str(&chart::render_ascii(p, convention));
                        text.push('\n');
                    }
                    emit(&output, &text)?;
                }
                "svg" => match &output {
                    Some(prefix) => {
                        for p in &pages {
                            let label = match p.index {
                                PageIndex::R(r) => format!("r{r}"),
                                PageIndex::Infinity => "rinf".into(),
                            };
                            let path = PathBuf::from(format!("{}.{label}.svg", prefix.display()));
                            std::fs::write(&path, chart::render_svg(p, convention))
                                .map_err(|e| format!("{}: {e}", path.display()))?;
                            println!("wrote {}", path.display());
                        }
                    }
                    None => {
                        for p in &pages {
                            print!("{}", chart::render_svg(p, convention));
                        }
                    }
                },
                other => return Err(format!("unknown format {other:?}")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decalage { input, iterate, output } => {
            let (filtered, _, _) = load_filtered(&input)?;
            let result = specseq::decalage::decalage_iterate(&filtered, iterate)
                .map_err(|e| e.to_string())?;
            emit(&output, &format!("{}\n", io::filtered_to_json(&result, None)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ahss { cw, coeff, rmax, format } => {
            let x = io::parse_cw_json(&read(&cw)?).map_err(|e| format!("{}: {e}", cw.display()))?;
            let coeff_json = read(&coeff)?;
            let file: io::FilteredComplexFile = serde_json::from_str(&coeff_json)
                .map_err(|e| format!("{}: {e}", coeff.display()))?;
            let m = io::complex_from_file(&file).map_err(|e| format!("{}: {e}", coeff.display()))?;
            let report =
                specseq::ahss::maunder_compare(&x, &m, rmax).map_err(|e| e.to_string())?;
            if let Some(format) = format {
                let skeletal =
                    specseq::ahss::skeletal_filtration(&x, &m).map_err(|e| e.to_string())?;
                let convention = Convention::parse("cohomology-decreasing-serre").unwrap();
                for r in 1..=rmax {
                    let page = er_classical(&skeletal, r).map_err(|e| e.to_string())?;
                    match format.as_str() {
                        "ascii" => print!("{}", chart::render_ascii(&page, convention)),
                        "json" => println!(
                            "{}",
                            io::page_report_to_json(&io::page_report(&page, convention))
                        ),
                        other => return Err(format!("unknown format {other:?}")),
                    }
                }
            }
            println!(
                "E_2 identification: {}",
                if report.e2_mismatches.is_empty() { "ok" } else { "FAILED" }
            );
            for (r, cmp) in &report.dec_vs_whitehead {
                println!(
                    "Dec(skeletal) vs Whitehead at r = {r}: {}",
                    if cmp.is_clean() { "ok" } else { "FAILED" }
                );
            }
            for (r, cmp) in &report.maunder_reindexed {
                println!(
                    "skeletal E^{r} vs reindexed Whitehead: {}",
                    if cmp.is_clean() { "ok" } else { "FAILED" }
                );
            }
            println!(
                "stable-page assembly: skeletal {} / whitehead {}",
                if report.skeletal_convergence == 0 { "ok" } else { "FAILED" },
                if report.whitehead_convergence == 0 { "ok" } else { "FAILED" }
            );
            if report.is_clean() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{report:?}");
                Ok(ExitCode::from(1))
            }
        }
        Command::Verify { theorem, seed, count, rmax, ring, inject_fault, counterexample } => {
            let theorem = campaign::Theorem::parse(&theorem)
                .ok_or_else(|| format!("unknown theorem {theorem:?}"))?;
            let fault = match inject_fault {
                None => None,
                Some(name) => Some(
                    campaign::Fault::parse(&name)
                        .ok_or_else(|| format!("unknown fault {name:?}"))?,
                ),
            };
            let config = campaign::CampaignConfig {
                seed,
                count,
                rings: parse_rings(&ring)?,
                rmax,
                fault,
            };
            let outcome = campaign::run(theorem, &config);
            match outcome.counterexample {
                None => {
                    println!("ok: {} checks passed", outcome.checks);
                    Ok(ExitCode::SUCCESS)
                }
                Some(ce) => {
                    eprintln!("property violated: {}", ce.description);
                    if !ce.artifact.is_empty() {
                        std::fs::write(&counterexample, &ce.artifact)
                            .map_err(|e| format!("{}: {e}", counterexample.display()))?;
                        eprintln!("counterexample written to {}", counterexample.display());
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}
