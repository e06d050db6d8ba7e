//! `bitruss` — per-edge bitruss numbers for a bipartite edge list.
//!
//! Decompose:  `bitruss --input g.txt --algorithm pc --output phi.tsv --stats s.json`
//! Generate:   `bitruss --gen bloom --k 1001 --output bloom.txt`

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bitruss::synthetic::{self, SkewedHub};
use bitruss::{
    build_index, decompose_bruteforce, load_edge_list, Algorithm, BipartiteGraph,
    DecompositionResult, Error, DEFAULT_ORACLE_LIMIT,
};
use clap::{Parser, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Bs,
    Be,
    BeBatch,
    Pc,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Bs => Algorithm::Bs,
            AlgorithmArg::Be => Algorithm::Be,
            AlgorithmArg::BeBatch => Algorithm::BeBatch,
            AlgorithmArg::Pc => Algorithm::Pc,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Bloom,
    SkewedHub,
}

#[derive(Debug, Parser)]
#[command(name = "bitruss", version, about = "Bitruss decomposition of bipartite graphs")]
struct Cli {
    /// Edge list: one `upper lower` pair per line, `%` comments. Reads stdin if omitted.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "pc")]
    algorithm: AlgorithmArg,

    /// Step fraction for `pc`, in (0, 1].
    #[arg(long, default_value_t = bitruss::peel::DEFAULT_TAU)]
    tau: f64,

    /// TSV (or generated edge list) destination; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Write a flat JSON stats record here.
    #[arg(long)]
    stats: Option<PathBuf>,

    /// Compare against the brute-force oracle.
    #[arg(long)]
    verify: bool,

    /// Like --verify, but an oversized graph is an error.
    #[arg(long)]
    verify_strict: bool,

    /// Oracle size guard, in edges.
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: usize,

    /// Write the initial index (one bloom per line) here.
    #[arg(long)]
    dump_index: Option<PathBuf>,

    /// Emit a synthetic edge list instead of decomposing.
    #[arg(long, value_enum)]
    gen: Option<GenKind>,

    /// Bloom size for `--gen bloom`.
    #[arg(long, default_value_t = 2)]
    k: u64,

    /// Shared lower vertices of the hub bloom for `--gen skewed-hub`.
    #[arg(long, default_value_t = SkewedHub::default().bloom)]
    bloom: u64,

    #[arg(long, default_value_t = SkewedHub::default().pendants)]
    pendants: u64,

    #[arg(long, default_value_t = SkewedHub::default().fan)]
    fan: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Serialize)]
struct StatsRecord {
    algorithm: &'static str,
    tau: Option<f64>,
    upper_vertices: usize,
    lower_vertices: usize,
    edges: usize,
    duplicates_dropped: usize,
    butterflies: u64,
    max_support: u64,
    k_max: u64,
    max_phi: u64,
    support_updates: u64,
    peak_links: usize,
    iterations: usize,
    #[serde(flatten)]
    phase_ms: serde_json::Map<String, serde_json::Value>,
    total_ms: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        context: format!("creating {}", path.display()),
        source,
    })
}

fn io_err(context: &str) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        context: context.to_string(),
        source,
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    if let Some(kind) = cli.gen {
        let pairs = match kind {
            GenKind::Bloom => synthetic::bloom(cli.k)?,
            GenKind::SkewedHub => synthetic::skewed_hub(SkewedHub {
                bloom: cli.bloom,
                pendants: cli.pendants,
                fan: cli.fan,
                seed: cli.seed,
            })?,
        };
        let mut out = sink(cli.output.as_deref())?;
        synthetic::write_edge_list(&mut out, &pairs).map_err(io_err("writing edge list"))?;
        out.flush().map_err(io_err("writing edge list"))?;
        return Ok(ExitCode::SUCCESS);
    }

    let algorithm = Algorithm::from(cli.algorithm);
    let g = read_graph(cli.input.as_deref())?;

    let started = Instant::now();
    let result = algorithm.run(&g, cli.tau)?;
    let total_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut out = sink(cli.output.as_deref())?;
    write_phi(&mut out, &g, &result.phi).map_err(io_err("writing output"))?;
    out.flush().map_err(io_err("writing output"))?;

    if let Some(path) = &cli.stats {
        let record = stats_record(algorithm, cli.tau, &g, &result, total_ms);
        let mut w = create(path)?;
        serde_json::to_writer(&mut w, &record).map_err(|e| Error::Io {
            context: "writing stats".into(),
            source: e.into(),
        })?;
        writeln!(w).and_then(|_| w.flush()).map_err(io_err("writing stats"))?;
    }

    if let Some(path) = &cli.dump_index {
        let (index, _) = build_index(&g);
        let mut w = create(path)?;
        w.write_all(index.dump().as_bytes())
            .and_then(|_| w.flush())
            .map_err(io_err("writing index dump"))?;
    }

    if cli.verify || cli.verify_strict {
        match decompose_bruteforce(&g, cli.oracle_limit) {
            Ok(truth) => {
                let mismatches = truth.iter().zip(&result.phi).filter(|(a, b)| a != b).count();
                if mismatches == 0 {
                    eprintln!("verify: PASS ({} edges)", g.edge_count());
                } else {
                    eprintln!("verify: FAIL ({mismatches} of {} edges differ)", g.edge_count());
                    return Ok(ExitCode::from(1));
                }
            }
            Err(err @ Error::OracleRefused { .. }) => {
                if cli.verify_strict {
                    return Err(err);
                }
                eprintln!("verify: skipped, {err}");
            }
            Err(err) => return Err(err),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_graph(path: Option<&Path>) -> Result<BipartiteGraph, Error> {
    let reader: Box<dyn BufRead> = match path {
        Some(p) => Box::new(BufReader::new(File::open(p).map_err(|source| Error::Io {
            context: format!("opening {}", p.display()),
            source,
        })?)),
        None => Box::new(BufReader::new(io::stdin().lock())),
    };
    load_edge_list(reader)
}

fn write_phi(out: &mut impl Write, g: &BipartiteGraph, phi: &[u64]) -> io::Result<()> {
    for (e, p) in phi.iter().enumerate() {
        let (u, v) = g.edge_labels(e as u32);
        writeln!(out, "{u}\t{v}\t{p}")?;
    }
    Ok(())
}

fn stats_record(
    algorithm: Algorithm,
    tau: f64,
    g: &BipartiteGraph,
    r: &DecompositionResult,
    total_ms: f64,
) -> StatsRecord {
    let phase_ms = r
        .stats
        .phases
        .iter()
        .map(|p| {
            let ms = p.elapsed.as_secs_f64() * 1e3;
            (format!("phase_{}_ms", p.name), ms.into())
        })
        .collect();
    StatsRecord {
        algorithm: algorithm.name(),
        tau: matches!(algorithm, Algorithm::Pc).then_some(tau),
        upper_vertices: g.upper_count(),
        lower_vertices: g.lower_count(),
        edges: g.edge_count(),
        duplicates_dropped: g.duplicates_dropped(),
        butterflies: r.stats.butterflies,
        max_support: r.stats.max_support,
        k_max: r.stats.k_max,
        max_phi: r.max_phi(),
        support_updates: r.stats.support_updates,
        peak_links: r.stats.peak_links,
        iterations: r.stats.iterations,
        phase_ms,
        total_ms,
    }
}
