//! Command-line dispatcher: every check and experiment behind one binary
//! with reproducible seeds and machine-readable output.
//!
//! Exit codes: 0 when all requested checks pass, 2 when any mathematical
//! check fails, 1 on usage or environment errors. When `--out` is given the
//! report is written there and a run manifest (flags, seed, version, wall
//! clock, sha256 of the report bytes) lands next to it as
//! `<out>.manifest.json`.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use ekrlab::characters::{mn_character, partitions_of};
use ekrlab::fkn::{
    corpus_suite, fkn_inequality_suite, largest_non_star_independent, stability_check_at,
    star_approximation, FknContext,
};
use ekrlab::graph::{FamilyKind, GraphFamily, GraphView, VertexSet};
use ekrlab::mis::{enumerate_maximum_independent_sets, max_independent_set, DenseGraph};
use ekrlab::rng::SplitMix64;
use ekrlab::sim::{
    critical_probability, expected_superstar_count, fauxstar_expectation_bound, threshold_sweep,
    SimConfig,
};
use ekrlab::spectral::{asymptotic_table, dense_spectrum, gamma_spectrum, iso_check, Spectrum};
use ekrlab::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Family {
    Perm,
    Pm,
}

impl Family {
    fn kind(self) -> FamilyKind {
        match self {
            Family::Perm => FamilyKind::Permutation,
            Family::Pm => FamilyKind::Matching,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum SpectrumMethod {
    /// Characters for the permutation family, dense diagonalization otherwise.
    Auto,
    Dense,
    Characters,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Parser, Debug)]
#[command(
    name = "ekrlab",
    version,
    about = "Exact verification lab for star-extremal independent sets on derangement and perfect-matching graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to this file instead of stdout; a run manifest is
    /// written alongside as `<out>.manifest.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format, where a subcommand supports both.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Thread budget for parallel trials (0 = library default). Results are
    /// identical for every value.
    #[arg(long, global = true, env = "EKRLAB_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact parameter rows (V, d, N, M, K) with p_c and K/(V-N)^(1/2).
    Params {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Emit rows for n..=n_max instead of a single row.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Eigenvalue multiset: family,n,eigenvalue,multiplicity.
    Spectrum {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SpectrumMethod::Auto)]
        method: SpectrumMethod,
    },
    /// Symmetric-group character table: lambda,mu,chi.
    Characters {
        #[arg(long)]
        n: usize,
    },
    /// Exact independence number and maximum-independent-set census.
    EkrVerify {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Spectral and ratio edge lower bounds on seeded random sets.
    IsoCheck {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Exact identity and inequality suite on seeded random subsets of the
    /// matching family.
    FknCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Rounded-star approximation of a union of stars (optionally perturbed).
    FknApprox {
        #[arg(long)]
        n: usize,
        /// Star centers as 1-based vertex pairs, e.g. "1-2,3-4".
        #[arg(long)]
        stars: String,
        /// Swap this many members for outside vertices before approximating.
        #[arg(long, default_value_t = 0)]
        perturb: usize,
    },
    /// Maximal independent sets above a size threshold with star containment
    /// and the star-deficiency bound.
    Stability {
        #[arg(long)]
        n: usize,
        /// Size slack as a rational, e.g. "1/15" or "0.2"; threshold is
        /// ceil((1-delta) * N).
        #[arg(long, conflicts_with = "threshold")]
        delta: Option<String>,
        /// Explicit size threshold.
        #[arg(long)]
        threshold: Option<usize>,
        /// Also compute the largest independent set contained in no star.
        #[arg(long, default_value_t = false)]
        find_largest: bool,
    },
    /// Threshold probability for keeping the independence number.
    Pc {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo threshold sweep; CSV rows per grid probability.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Probability grid: "a:b:k" (k points, inclusive), or one value.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// "on" solves exact alpha per trial; "off" only scans superstars and
        /// counts trials with no survivor.
        #[arg(long, value_enum, default_value_t = OnOff::On)]
        alpha: OnOff,
    },
    /// Closed-form expectations: E[Y] and faux-star bounds.
    Expect {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// Star-deficiency index for the faux-star bound.
        #[arg(long, requires = "j")]
        i: Option<u64>,
        /// Outside-vertex count for the faux-star bound.
        #[arg(long, requires = "i")]
        j: Option<u64>,
        /// Emit the whole series j..=j_max for the given i.
        #[arg(long)]
        j_max: Option<u64>,
    },
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    argv: Vec<String>,
    seed: u64,
    threads: usize,
    artifact_version: String,
    started_unix_ms: u128,
    elapsed_ms: u128,
    output_path: String,
    output_digest_sha256: String,
}

struct Report {
    body: String,
    /// Number of failed mathematical checks; nonzero exits with code 2.
    failures: u64,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let timer = Instant::now();
    let subcommand = subcommand_name(&cli.command);

    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.body.as_bytes()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
        let manifest = RunManifest {
            subcommand: subcommand.to_string(),
            argv: std::env::args().collect(),
            seed: cli.seed,
            threads: cli.threads,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: started,
            elapsed_ms: timer.elapsed().as_millis(),
            output_path: path.display().to_string(),
            output_digest_sha256: hex_digest(report.body.as_bytes()),
        };
        let manifest_path = manifest_path_for(path);
        let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = std::fs::write(&manifest_path, body) {
            eprintln!("error: cannot write {}: {e}", manifest_path.display());
            return 1;
        }
    } else {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(report.body.as_bytes()).is_err() {
            return 1;
        }
    }

    if report.failures > 0 {
        eprintln!("{} check(s) failed", report.failures);
        2
    } else {
        0
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Params { .. } => "params",
        Command::Spectrum { .. } => "spectrum",
        Command::Characters { .. } => "characters",
        Command::EkrVerify { .. } => "ekr-verify",
        Command::IsoCheck { .. } => "iso-check",
        Command::FknCheck { .. } => "fkn-check",
        Command::FknApprox { .. } => "fkn-approx",
        Command::Stability { .. } => "stability",
        Command::Pc { .. } => "pc",
        Command::Sweep { .. } => "sweep",
        Command::Expect { .. } => "expect",
    }
}

fn manifest_path_for(out: &std::path::Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn dispatch(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Params { family, n, n_max } => {
            params_report(family.kind(), *n, n_max.unwrap_or(*n), cli.format)
        }
        Command::Spectrum { family, n, method } => {
            spectrum_report(family.kind(), *n, *method)
        }
        Command::Characters { n } => characters_report(*n),
        Command::EkrVerify { family, n } => ekr_verify_report(family.kind(), *n),
        Command::IsoCheck { family, n, samples } => {
            iso_check_report(family.kind(), *n, *samples, cli.seed)
        }
        Command::FknCheck { n, samples } => fkn_check_report(*n, *samples, cli.seed),
        Command::FknApprox { n, stars, perturb } => {
            fkn_approx_report(*n, stars, *perturb, cli.seed)
        }
        Command::Stability {
            n,
            delta,
            threshold,
            find_largest,
        } => stability_report(*n, delta.as_deref(), *threshold, *find_largest),
        Command::Pc { family, n } => pc_report(family.kind(), *n, cli.format),
        Command::Sweep {
            family,
            n,
            p,
            trials,
            alpha,
        } => sweep_report(
            family.kind(),
            *n,
            p,
            *trials,
            *alpha == OnOff::On,
            cli.seed,
            cli.threads,
        ),
        Command::Expect {
            family,
            n,
            p,
            i,
            j,
            j_max,
        } => expect_report(family.kind(), *n, *p, *i, *j, *j_max),
    }
}

// ============================================================================
// Subcommand bodies
// ============================================================================

fn params_report(
    kind: FamilyKind,
    n: usize,
    n_max: usize,
    format: Option<Format>,
) -> Result<Report, Error> {
    if n_max < n {
        return Err(Error::InvalidParameter("--n-max below --n".into()));
    }
    let rows = asymptotic_table(kind, n, n_max)?;
    let body = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("family,n,V,d,N,M,K,pc,k_over_sqrt_v_minus_n\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{:.6},{:.6}\n",
                    kind.label(),
                    r.n,
                    r.vertices,
                    r.valency,
                    r.independence,
                    r.tau_abs,
                    r.star_count,
                    r.p_c,
                    r.k_ratio
                ));
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "family": kind.label(),
                        "n": r.n,
                        "V": r.vertices.to_string(),
                        "d": r.valency.to_string(),
                        "N": r.independence.to_string(),
                        "M": r.tau_abs.to_string(),
                        "K": r.star_count.to_string(),
                        "pc": r.p_c,
                        "k_over_sqrt_v_minus_n": r.k_ratio,
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).unwrap())
        }
    };
    Ok(Report { body, failures: 0 })
}

fn spectrum_csv(kind: FamilyKind, n: usize, spec: &Spectrum) -> String {
    let mut out = String::from("family,n,eigenvalue,multiplicity\n");
    for &(ev, mult) in spec.entries() {
        out.push_str(&format!("{},{n},{ev},{mult}\n", kind.label()));
    }
    out
}

fn spectrum_report(kind: FamilyKind, n: usize, method: SpectrumMethod) -> Result<Report, Error> {
    let family = GraphFamily::new(kind, n)?;
    let spec = match (method, kind) {
        (SpectrumMethod::Characters, FamilyKind::Matching) => {
            return Err(Error::InvalidParameter(
                "no character formula is wired for the matching family; use dense".into(),
            ))
        }
        (SpectrumMethod::Characters, FamilyKind::Permutation) => gamma_spectrum(n)?,
        (SpectrumMethod::Auto, FamilyKind::Permutation) => gamma_spectrum(n)?,
        _ => dense_spectrum(&GraphView::new(family)?)?,
    };
    Ok(Report {
        body: spectrum_csv(kind, n, &spec),
        failures: 0,
    })
}

fn characters_report(n: usize) -> Result<Report, Error> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidParameter(
            "character tables are emitted for 1 <= n <= 12".into(),
        ));
    }
    let parts = partitions_of(n);
    let mut out = String::from("lambda,mu,chi\n");
    for lambda in &parts {
        for mu in &parts {
            out.push_str(&format!("{lambda},{mu},{}\n", mn_character(lambda, mu)?));
        }
    }
    Ok(Report {
        body: out,
        failures: 0,
    })
}

fn ekr_verify_report(kind: FamilyKind, n: usize) -> Result<Report, Error> {
    let family = GraphFamily::new(kind, n)?;
    let params = family.params()?;
    let expected_alpha = params.independence.to_usize().ok_or(Error::BudgetExceeded {
        name: "MIS_MAX_V",
        limit: ekrlab::budget::MIS_MAX_V as u64,
        requested: u64::MAX,
    })?;
    let view = GraphView::new(family)?;
    let dense = DenseGraph::from_view(&view)?;
    let mis = max_independent_set(&dense, expected_alpha)?;

    let (census, enumeration) = match enumerate_maximum_independent_sets(&dense) {
        Ok(sets) => {
            let stars: std::collections::HashSet<Vec<usize>> = view
                .all_stars()?
                .into_iter()
                .map(|(_, s)| s.members())
                .collect();
            let all_stars = sets.iter().all(|s| stars.contains(&s.members()));
            (Some((sets.len(), all_stars)), "complete")
        }
        Err(Error::BudgetExceeded { .. }) => (None, "skipped:enumeration-budget"),
        Err(e) => return Err(e),
    };

    let alpha_ok = mis.size == expected_alpha;
    let census_ok = census.map(|(count, all_stars)| {
        all_stars && BigInt::from(count) == params.star_count
    });
    let pass = alpha_ok && census_ok.unwrap_or(true);

    let body = json!({
        "family": kind.label(),
        "n": n,
        "alpha": mis.size,
        "alpha_expected": expected_alpha,
        "maximum_sets": census.map(|(c, _)| c),
        "stars_expected": params.star_count.to_string(),
        "all_maximum_sets_are_stars": census.map(|(_, a)| a),
        "enumeration": enumeration,
        "status": if pass { "pass" } else { "fail" },
    });
    Ok(Report {
        body: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        failures: (!pass) as u64,
    })
}

fn iso_check_report(kind: FamilyKind, n: usize, samples: u64, seed: u64) -> Result<Report, Error> {
    let view = GraphView::new(GraphFamily::new(kind, n)?)?;
    let report = iso_check(&view, samples, seed)?;
    let failures = report.violations();
    let mut value = serde_json::to_value(&report).unwrap();
    value["status"] = json!(if failures == 0 { "pass" } else { "fail" });
    Ok(Report {
        body: format!("{}\n", serde_json::to_string_pretty(&value).unwrap()),
        failures,
    })
}

fn fkn_check_report(n: usize, samples: u64, seed: u64) -> Result<Report, Error> {
    let ctx = FknContext::new(n)?;
    let corpus = corpus_suite(&ctx, samples, seed)?;
    // Reference outcomes at the first star, with exact sides.
    let star = ctx.star(0).clone();
    let reference = fkn_inequality_suite(&ctx, &star)?;
    let failures = corpus.failures + reference.iter().filter(|c| c.failed()).count() as u64;
    let body = json!({
        "n": n,
        "samples": samples,
        "seed": seed,
        "failures": failures,
        "corpus": corpus.aggregates,
        "reference_star": reference,
        "status": if failures == 0 { "pass" } else { "fail" },
    });
    Ok(Report {
        body: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        failures,
    })
}

fn parse_star_list(n: usize, stars: &str) -> Result<Vec<(usize, usize)>, Error> {
    let mut out = Vec::new();
    for part in stars.split(',') {
        let Some((a, b)) = part.trim().split_once('-') else {
            return Err(Error::InvalidParameter(format!(
                "cannot parse star center {part:?}; expected like 1-2"
            )));
        };
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad vertex in {part:?}")))?;
        let b: usize = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad vertex in {part:?}")))?;
        if a == 0 || b == 0 || a > 2 * n || b > 2 * n || a == b {
            return Err(Error::InvalidParameter(format!(
                "star center {part:?} outside 1..{}",
                2 * n
            )));
        }
        out.push((a - 1, b - 1));
    }
    Ok(out)
}

fn fkn_approx_report(n: usize, stars: &str, perturb: usize, seed: u64) -> Result<Report, Error> {
    let ctx = FknContext::new(n)?;
    let centers = parse_star_list(n, stars)?;
    let v = ctx.view().vertex_count();
    let mut set = VertexSet::new(v);
    for (a, b) in &centers {
        set = set.union(ctx.star(ctx.edge_idx(*a, *b)));
    }
    if perturb > 0 {
        let mut rng = SplitMix64::new(seed);
        let members = set.members();
        let outside: Vec<usize> = (0..v).filter(|x| !set.contains(*x)).collect();
        let k = perturb.min(members.len()).min(outside.len());
        for idx in rng.subset(members.len(), k) {
            set.remove(members[idx]);
        }
        for idx in rng.subset(outside.len(), k) {
            set.insert(outside[idx]);
        }
    }
    let approx = star_approximation(&ctx, &set);
    let body = json!({
        "n": n,
        "set_size": set.card(),
        "c": approx.c.to_string(),
        "round_c": approx.round_c,
        "centers": approx
            .centers
            .iter()
            .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect::<Vec<_>>(),
        "union_size": approx.union_set.card(),
        "symmetric_difference": approx.symdiff,
    });
    Ok(Report {
        body: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        failures: 0,
    })
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad rational {s:?}")))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad rational {s:?}")))?;
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        return Ok(BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let scale = 10i64.pow(frac.len() as u32);
        let int: i64 = if int.is_empty() {
            0
        } else {
            int.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad decimal {s:?}")))?
        };
        let frac: i64 = frac
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad decimal {s:?}")))?;
        return Ok(BigRational::new(
            BigInt::from(int * scale + frac),
            BigInt::from(scale),
        ));
    }
    let int: i64 = s
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad number {s:?}")))?;
    Ok(BigRational::from_integer(BigInt::from(int)))
}

fn stability_report(
    n: usize,
    delta: Option<&str>,
    threshold: Option<usize>,
    find_largest: bool,
) -> Result<Report, Error> {
    let ctx = FknContext::new(n)?;
    let threshold = match (threshold, delta) {
        (Some(t), _) => t,
        (None, Some(d)) => {
            let delta = parse_rational(d)?;
            let n_alpha = BigRational::from_integer(BigInt::from(ctx.independence_number() as u64));
            ((BigRational::from_integer(1.into()) - delta) * n_alpha)
                .ceil()
                .to_integer()
                .to_usize()
                .unwrap_or(0)
        }
        (None, None) => ctx.independence_number(),
    };
    let report = stability_check_at(&ctx, threshold)?;
    let failures = report.intlb_violations
        + report
            .largest_non_star_contained
            .map_or(0, |l| (l >= ctx.independence_number()) as u64);
    let mut value = serde_json::to_value(&report).unwrap();
    if find_largest {
        value["largest_non_star_independent_overall"] =
            json!(largest_non_star_independent(&ctx)?);
    }
    value["status"] = json!(if failures == 0 { "pass" } else { "fail" });
    Ok(Report {
        body: format!("{}\n", serde_json::to_string_pretty(&value).unwrap()),
        failures,
    })
}

fn pc_report(kind: FamilyKind, n: usize, format: Option<Format>) -> Result<Report, Error> {
    let pc = critical_probability(GraphFamily::new(kind, n)?)?;
    let body = match format.unwrap_or(Format::Csv) {
        Format::Csv => format!("{pc:.5}\n"),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "family": kind.label(),
                "n": n,
                "pc": pc,
            }))
            .unwrap()
        ),
    };
    Ok(Report { body, failures: 0 })
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => {
            let p: f64 = single
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad probability {single:?}")))?;
            Ok(vec![p])
        }
        [a, b, k] => {
            let a: f64 = a
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad grid start {a:?}")))?;
            let b: f64 = b
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad grid end {b:?}")))?;
            let k: usize = k
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad grid count {k:?}")))?;
            if k == 0 {
                return Err(Error::InvalidParameter("grid needs at least 1 point".into()));
            }
            if k == 1 {
                return Ok(vec![a]);
            }
            Ok((0..k)
                .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                .collect())
        }
        _ => Err(Error::InvalidParameter(format!(
            "grid {spec:?} is not \"a:b:k\" or a single value"
        ))),
    }
}

fn sweep_report(
    kind: FamilyKind,
    n: usize,
    grid: &str,
    trials: u64,
    alpha_mode: bool,
    seed: u64,
    threads: usize,
) -> Result<Report, Error> {
    let cfg = SimConfig {
        family: GraphFamily::new(kind, n)?,
        p_grid: parse_grid(grid)?,
        trials,
        seed,
        threads,
        alpha_mode,
    };
    let report = threshold_sweep(&cfg)?;
    Ok(Report {
        body: report.to_csv(),
        failures: 0,
    })
}

fn expect_report(
    kind: FamilyKind,
    n: usize,
    p: f64,
    i: Option<u64>,
    j: Option<u64>,
    j_max: Option<u64>,
) -> Result<Report, Error> {
    let family = GraphFamily::new(kind, n)?;
    let e_y = expected_superstar_count(family, p)?;
    let mut body = json!({
        "family": kind.label(),
        "n": n,
        "p": p,
        "expected_superstars": e_y,
    });
    if let (Some(i), Some(j)) = (i, j) {
        let j_hi = j_max.unwrap_or(j).max(j);
        let series: Result<Vec<_>, Error> = (j..=j_hi)
            .map(|jj| {
                fauxstar_expectation_bound(family, p, i, jj)
                    .map(|v| json!({"i": i, "j": jj, "bound": v}))
            })
            .collect();
        body["fauxstar_bounds"] = json!(series?);
    }
    Ok(Report {
        body: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        failures: 0,
    })
}
