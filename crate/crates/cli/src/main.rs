use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sparsepave_core::census::{self, CensusCache, CensusConfig, ExportFormat};
use sparsepave_core::maps::{Injector, Which};
use sparsepave_core::matroid::{sparse_from_circuits, Matroid, MatroidSpec};
use sparsepave_core::partition::{build_partition, default_pivot, gamma_count};
use sparsepave_core::starstar::{
    greedy_guarantee, greedy_star_star, max_star_star_exact, random_star_star,
    sparse_count_lower_bound, star_star_upper_bound,
};
use sparsepave_core::{Error, Family, GroundSet, Subset};

const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Sparse-paving matroid constructions, injections and censuses.
#[derive(Debug, Parser)]
#[command(name = "sparsepave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shape {
    /// Ground set size.
    #[arg(long)]
    n: usize,
    /// Rank.
    #[arg(long)]
    r: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition of the r-subsets into (**)-classes around a pivot.
    Partition {
        #[command(flatten)]
        shape: Shape,
        /// Pivot r-subset, e.g. 1,2,3 (default {1..r}).
        #[arg(long, value_delimiter = ',')]
        pivot: Option<Vec<usize>>,
    },
    /// Sparse-paving matroid from its r-circuits, or a seeded random one.
    Construct {
        #[command(flatten)]
        shape: Shape,
        /// JSON array of 1-based r-subsets.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        circuits: Option<String>,
        /// Sample a random (**)-family instead.
        #[arg(long, requires = "seed")]
        random: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a matroid JSON file by exhaustive basis exchange.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// The (**) upper bound, the sparse-count lower bound and gamma.
    Bounds {
        #[command(flatten)]
        shape: Shape,
    },
    /// Apply psi, psibar or gamma to a matroid JSON file.
    Map {
        #[arg(long, value_parser = parse_which)]
        which: Which,
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        pivot: Option<Vec<usize>>,
    },
    /// Exhaustive matroid and sparse-paving counts with bound checks.
    Census {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        min_n: usize,
        #[arg(long, value_parser = parse_format, default_value = "csv")]
        format: ExportFormat,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Reuse rows from the cache directory.
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Cache location; falls back to $SPARSEPAVE_CACHE_DIR, then
        /// ./.sparsepave-cache.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = CensusConfig::default().matroid_ceiling)]
        matroid_ceiling: u32,
        #[arg(long, default_value_t = CensusConfig::default().sparse_ceiling)]
        sparse_ceiling: u32,
    },
    /// Greedy and (optionally) exact maximum (**)-families.
    Maxstar {
        #[command(flatten)]
        shape: Shape,
        /// Also run the exact branch-and-bound search.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn parse_which(s: &str) -> Result<Which, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a subcommand: the core error plus optional JSON for stdout.
struct Failure {
    error: Error,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            error,
            report: None,
        }
    }
}

type CmdResult = Result<Vec<u8>, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_DOMAIN);
            }
            ExitCode::SUCCESS
        }
        Err(Failure { error, report }) => {
            if let Some(report) = report {
                println!("{}", pretty(&report));
            }
            eprintln!("sparsepave: {error}");
            if error.is_verification_failure() {
                ExitCode::from(EXIT_VERIFY)
            } else {
                ExitCode::from(EXIT_DOMAIN)
            }
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("in-memory JSON")
}

fn json_out(value: &impl serde::Serialize) -> CmdResult {
    let mut s = pretty(value);
    s.push('\n');
    Ok(s.into_bytes())
}

fn pivot_or_default(
    ground: GroundSet,
    r: usize,
    pivot: Option<Vec<usize>>,
) -> Result<Subset, Error> {
    match pivot {
        Some(p) => ground.subset(&p),
        None => Ok(default_pivot(r)),
    }
}

fn read_spec(path: &Path) -> Result<MatroidSpec, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn set_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Partition { shape, pivot } => {
            let ground = GroundSet::new(shape.n)?;
            let pivot = pivot_or_default(ground, shape.r, pivot)?;
            json_out(&build_partition(ground, shape.r, pivot)?)
        }
        Command::Construct {
            shape,
            circuits,
            random: _,
            seed,
        } => {
            let ground = GroundSet::new(shape.n)?;
            let circuits = match circuits {
                Some(text) => serde_json::from_str::<Family>(&text).map_err(Error::from)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.expect("clap requires --seed"));
                    random_star_star(ground, shape.r, &mut rng)?
                }
            };
            json_out(&sparse_from_circuits(ground, shape.r, &circuits)?)
        }
        Command::Verify { file } => verify(&file),
        Command::Bounds { shape } => {
            let (n, r) = (shape.n, shape.r);
            json_out(&json!({
                "n": n,
                "r": r,
                "star_star_upper_bound": star_star_upper_bound(n, r)?.to_string(),
                "sparse_count_lower_bound": sparse_count_lower_bound(n, r)?.to_string(),
                "gamma_count": gamma_count(n, r)?.to_string(),
            }))
        }
        Command::Map { which, file, pivot } => {
            let m = read_spec(&file)?.build()?;
            let pivot = pivot_or_default(m.ground(), m.rank(), pivot)?;
            let injector = Injector::new(m.ground(), m.rank(), pivot)?;
            json_out(&injector.apply(which, &m)?)
        }
        Command::Census {
            max_n,
            min_n,
            format,
            output,
            resume,
            threads,
            cache_dir,
            matroid_ceiling,
            sparse_ceiling,
        } => {
            set_threads(threads);
            let config = CensusConfig {
                matroid_ceiling,
                sparse_ceiling,
            };
            let rows = census_rows(min_n.max(3), max_n, config, resume, cache_dir)?;
            match output {
                Some(path) => {
                    census::census_export(&rows, &path, format)?;
                    Ok(Vec::new())
                }
                None => Ok(census::render(&rows, format)?),
            }
        }
        Command::Maxstar {
            shape,
            exact,
            threads,
        } => {
            set_threads(threads);
            let ground = GroundSet::new(shape.n)?;
            let greedy = greedy_star_star(ground, shape.r)?;
            let mut out = json!({
                "n": shape.n,
                "r": shape.r,
                "guarantee": greedy_guarantee(shape.n, shape.r).to_string(),
                "upper_bound": star_star_upper_bound(shape.n, shape.r)?.to_string(),
                "greedy_size": greedy.len(),
                "greedy": greedy,
            });
            if exact {
                let best = max_star_star_exact(ground, shape.r)?;
                out["exact_size"] = json!(best.family.len());
                out["exact"] = json!(best.family);
            }
            json_out(&out)
        }
    }
}

fn verify(file: &Path) -> CmdResult {
    let spec = read_spec(file)?;
    match spec.build() {
        Ok(m) => json_out(&verified_report(&m)),
        Err(error) if error.is_verification_failure() => {
            let mut report = json!({"valid": false, "reason": error.to_string()});
            match &error {
                Error::Exchange { b1, b2, x } => {
                    report["witness"] = json!({"b1": b1, "b2": b2, "x": x});
                }
                Error::StarStar { x, y, shared, .. } => {
                    report["witness"] = json!({"x": x, "y": y, "shared": shared});
                }
                _ => {}
            }
            Err(Failure {
                error,
                report: Some(report),
            })
        }
        Err(error) => Err(error.into()),
    }
}

fn verified_report(m: &Matroid) -> Value {
    json!({
        "valid": true,
        "n": m.n(),
        "r": m.rank(),
        "bases": m.bases().len(),
        "paving": m.is_paving(),
        "sparse_paving": m.is_sparse_paving(),
    })
}

fn census_rows(
    min_n: usize,
    max_n: usize,
    config: CensusConfig,
    resume: bool,
    cache_dir: Option<PathBuf>,
) -> Result<Vec<census::CensusRow>, Error> {
    let cache_path = resume.then(|| {
        cache_dir
            .or_else(|| std::env::var_os("SPARSEPAVE_CACHE_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".sparsepave-cache"))
            .join("census.json")
    });
    let mut cache = match &cache_path {
        Some(path) => CensusCache::load(path, config)?,
        None => CensusCache {
            ceiling_version: census::CEILING_VERSION,
            config: Some(config),
            rows: Vec::new(),
        },
    };
    let mut rows = Vec::new();
    for n in min_n..=max_n {
        for r in 2..n {
            let row = cache.row(n, r);
            if let Some(path) = &cache_path {
                // keep finished rows even if a later one fails
                cache.save(path)?;
            }
            rows.push(row?);
        }
    }
    Ok(rows)
}
