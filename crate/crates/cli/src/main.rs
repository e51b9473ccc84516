//! `qdisk`: command-line front end for the quantized polydisk and ball toolkit.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::json;

use qdisk_core::deform::{bundle_scan, max_jump_ratio, star_product, write_csv, ScanPath};
use qdisk_core::elements::{free_mul, laurent_mul, normal_order, qpoly_mul};
use qdisk_core::fock::op_norm_bounds;
use qdisk_core::io::{parse_element, serialize_element};
use qdisk_core::spectral::{
    contractive_check, radius_sequence, Generators, TupleSpec, CONTRACTIVE_MARGIN,
};
use qdisk_core::verify::{run_suite, Formula, SuiteConfig, SuiteReport, SUITES};
use qdisk_core::{norm, Element, Family, HSeriesElement, NormSpec, QParam};

#[derive(Parser)]
#[command(
    name = "qdisk",
    version,
    about = "Quantized polydisk and ball algebras: arithmetic, norms and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two elements of the same kind.
    Mul {
        #[arg(long = "in", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
        /// Drop terms above this degree (word length for free elements).
        #[arg(long)]
        degree_cap: Option<u64>,
    },
    /// Normal-order a free element into the q-plane algebra.
    NormalOrder {
        #[arg(long = "in")]
        input: PathBuf,
        /// Real part of q; defaults to the q stored in the document.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q_im: f64,
    },
    /// Norm of an element in one family.
    Norm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        tau: Option<f64>,
        /// Truncation order for the formal family.
        #[arg(long)]
        bign: Option<u32>,
    },
    /// Depth-d joint spectral radius estimates of a coordinate tuple.
    Radius {
        #[arg(long, value_enum)]
        tuple: TupleKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Real part of q (coordinate tuples only).
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q_im: f64,
        #[arg(long)]
        family: String,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        depth: usize,
        /// 1, 2 or inf.
        #[arg(long, default_value = "2")]
        p: String,
        /// Also report the contractivity verdict against this r.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Truncated Fock operator norm bounds of a q-plane element.
    FockNorm {
        #[arg(long = "in")]
        input: PathBuf,
        /// Real q in (0, 1); defaults to the document's q.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        depth: u32,
    },
    /// Truncated star product of two h-series (or q-plane) elements.
    Star {
        #[arg(long = "in", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        order: u32,
    },
    /// Fiber norms of a Laurent element along a path in the q-plane.
    Scan {
        #[arg(long = "in")]
        input: PathBuf,
        /// circle:R or ray:THETA[:MIN:MAX].
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        family: String,
        #[arg(long)]
        rho: f64,
        /// CSV destination; JSON rows on standard output otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Perturb one formula by 1e-6 (mutation smoke test).
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TupleKind {
    Coords,
    FreeCoords,
}

/// Outcome of a command: success, or a failed check (exit 1).
enum Status {
    Ok,
    ChecksFailed,
}

fn read_element(path: &Path) -> Result<Element> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_element(&text).with_context(|| format!("parsing {}", path.display()))
}

fn q_param(re: f64, im: f64) -> Result<QParam> {
    Ok(QParam::new(C64::new(re, im))?)
}

fn parse_p(p: &str) -> Result<f64> {
    match p {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => {
            let v: f64 = other
                .parse()
                .map_err(|_| anyhow!("--p must be 1, 2 or inf, got `{other}`"))?;
            if v < 1.0 {
                bail!("--p must be at least 1");
            }
            Ok(v)
        }
    }
}

fn as_hseries(e: Element, order: u32) -> Result<HSeriesElement> {
    match e {
        Element::HSeries(f) => Ok(f),
        Element::QPoly(a) => Ok(HSeriesElement::from_qpoly(&a, order)),
        other => bail!(
            "star needs hseries or qpoly documents, got {}",
            other.kind()
        ),
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn mul(inputs: &[PathBuf], cap: Option<u64>) -> Result<Element> {
    let [a, b] = inputs else {
        bail!("mul takes exactly two --in documents")
    };
    let (a, b) = (read_element(a)?, read_element(b)?);
    Ok(match (a, b) {
        (Element::QPoly(a), Element::QPoly(b)) => Element::QPoly(qpoly_mul(&a, &b, cap)?),
        (Element::Free(a, qa), Element::Free(b, _)) => {
            Element::Free(free_mul(&a, &b, cap.map(|c| c as usize))?, qa)
        }
        (Element::Laurent(a), Element::Laurent(b)) => Element::Laurent(laurent_mul(&a, &b, cap)?),
        (Element::HSeries(a), Element::HSeries(b)) => {
            let order = a.order().min(b.order());
            Element::HSeries(star_product(&a, &b, order, cap)?)
        }
        (a, b) => bail!(
            "cannot multiply a {} element by a {} element",
            a.kind(),
            b.kind()
        ),
    })
}

fn print_report_text(r: &SuiteReport) {
    let status = if r.passed { "PASS" } else { "FAIL" };
    println!(
        "{status} {} ({} checks, {} ms)",
        r.suite,
        r.checks.len(),
        r.wall_ms
    );
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!(
            "  {mark} {} [cases {}, worst {:.3e}, limit {:.1e}]",
            c.name, c.cases, c.worst, c.limit
        );
        if !c.passed && !c.detail.is_empty() {
            println!("       at {}", c.detail);
        }
    }
}

fn verify(suite: &str, seed: u64, as_json: bool, perturb: Option<&str>) -> Result<Status> {
    let perturb = perturb.map(str::parse::<Formula>).transpose()?;
    let config = SuiteConfig { seed, perturb };
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports = Vec::with_capacity(names.len());
    for name in names {
        let report = run_suite(name, &config)?;
        if !as_json {
            print_report_text(&report);
        }
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    if as_json {
        let v = if suite == "all" {
            serde_json::to_value(&reports)?
        } else {
            serde_json::to_value(&reports[0])?
        };
        print_json(&v)?;
    } else if suite == "all" {
        let failed = reports.iter().filter(|r| !r.passed).count();
        println!("{} suites, {} failed", reports.len(), failed);
    }
    Ok(if passed {
        Status::Ok
    } else {
        Status::ChecksFailed
    })
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Mul { inputs, degree_cap } => {
            println!("{}", serialize_element(&mul(&inputs, degree_cap)?));
        }
        Command::NormalOrder { input, q, q_im } => {
            let Element::Free(f, stored) = read_element(&input)? else {
                bail!("normal-order needs a free document");
            };
            let q = match (q, stored) {
                (Some(re), _) => q_param(re, q_im)?,
                (None, Some(q)) => q,
                (None, None) => bail!("no q given and the document stores none"),
            };
            println!(
                "{}",
                serialize_element(&Element::QPoly(normal_order(&f, q)?))
            );
        }
        Command::Norm {
            input,
            family,
            rho,
            tau,
            bign,
        } => {
            let e = read_element(&input)?;
            let spec = NormSpec::new(family.parse()?, rho, tau, bign)?;
            let v = norm(&e, &spec)?;
            print_json(&json!({ "family": family, "rho": rho, "norm": v }))?;
        }
        Command::Radius {
            tuple,
            n,
            q,
            q_im,
            family,
            rho,
            tau,
            depth,
            p,
            r,
        } => {
            let family: Family = family.parse()?;
            let generators = match tuple {
                TupleKind::Coords => Generators::Coordinates {
                    n,
                    q: q_param(q, q_im)?,
                },
                TupleKind::FreeCoords => Generators::FreeCoordinates { n },
            };
            let spec = TupleSpec::new(
                generators,
                NormSpec::new(family, rho, tau, None)?,
                parse_p(&p)?,
                depth,
            )?;
            let estimates = radius_sequence(&spec)?;
            let mut out = json!({
                "family": family.name(),
                "rho": rho,
                "p": p,
                "depths": (1..=depth).collect::<Vec<_>>(),
                "estimates": estimates,
            });
            if let Some(r) = r {
                out["contractive"] =
                    serde_json::to_value(contractive_check(&spec, r, CONTRACTIVE_MARGIN)?)?;
            }
            print_json(&out)?;
        }
        Command::FockNorm {
            input,
            q,
            rho,
            depth,
        } => {
            let Element::QPoly(mut a) = read_element(&input)? else {
                bail!("fock-norm needs a qpoly document");
            };
            if let Some(q) = q {
                a = a.with_q(QParam::real(q)?);
            }
            print_json(&serde_json::to_value(op_norm_bounds(&a, rho, depth)?)?)?;
        }
        Command::Star { inputs, order } => {
            let [a, b] = inputs.as_slice() else {
                bail!("star takes exactly two --in documents")
            };
            let f = as_hseries(read_element(a)?, order)?;
            let g = as_hseries(read_element(b)?, order)?;
            println!(
                "{}",
                serialize_element(&Element::HSeries(star_product(&f, &g, order, None)?))
            );
        }
        Command::Scan {
            input,
            path,
            samples,
            family,
            rho,
            out,
        } => {
            let Element::Laurent(a) = read_element(&input)? else {
                bail!("scan needs a laurent document");
            };
            let path: ScanPath = path.parse()?;
            let family: Family = family.parse()?;
            let rows = bundle_scan(&a, family, rho, &path.samples(samples))?;
            match out {
                Some(file) => {
                    let f = fs::File::create(&file)
                        .with_context(|| format!("creating {}", file.display()))?;
                    write_csv(&rows, std::io::BufWriter::new(f))?;
                    print_json(&json!({
                        "out": file.display().to_string(),
                        "rows": rows.len(),
                        "max_jump_ratio": max_jump_ratio(&rows),
                    }))?;
                }
                None => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|r| json!({ "q_re": r.q.re, "q_im": r.q.im, "norm": r.norm }))
                        .collect();
                    print_json(&json!(v))?;
                }
            }
        }
        Command::Verify {
            suite,
            seed,
            json,
            perturb,
        } => {
            return verify(&suite, seed, json, perturb.as_deref());
        }
    }
    Ok(Status::Ok)
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QDISK_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow!("QDISK_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
