//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{check_bidirectional, check_cover};
use crate::point::{orbit_trace, remn, thread, trace_to_csv, PointAnchor};
use crate::report::{Report, Summary};
use crate::scramble::{
    all_anchors, common_horizon, coverage_check, dense_anchor, depth_trend, equicontinuity_witness,
    first_meet_base, joint_meet, no_periodic_check, separation_report,
};
use crate::tower::{Tower, TowerConfig};
use crate::walk::{
    gap_spectrum, project_to, verify_interleaving, verify_spectrum, verify_tail, SymWalk,
};

pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Debug, Parser)]
#[command(name = "covertower", version, about = "Towers of figure-8 graph covers")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Tower config file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Tower depth; overrides the config file.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Largest explicit expansion (vertices, edges or windows).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: Option<u64>,
    /// Resolution level.
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Number of orbit steps.
    #[arg(long, global = true)]
    pub steps: Option<BigUint>,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write output files into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Dot,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Gaps,
    Scramble,
    Periodic,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the tower and print its length table and cover checks.
    Build,
    /// Run verifier suites; exit status 0 iff all pass.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Largest level n for the gap suite.
        #[arg(long)]
        max_n: Option<usize>,
        /// Largest resolution N for the gap and scramble suites.
        #[arg(long, default_value_t = 3)]
        max_resolution: usize,
        /// Random pairs sampled per depth beyond the exhaustive range.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Level-N trace of an orbit.
    Orbit { anchor: String },
    /// Pair report for two anchors.
    Pair { x: String, y: String },
    /// First-preimage anchor over v_{N,1,1} and its coverage of lower levels.
    Dense {
        /// Anchor depth; defaults to the tower depth.
        #[arg(long)]
        anchor_depth: Option<usize>,
        /// Check that the orbit visits every vertex of this level.
        #[arg(long)]
        cover: Option<usize>,
    },
    /// Two cylinder-mates of the anchor that separate at level N.
    Witness { anchor: String },
    /// Export a materialized level as DOT or as a vertex table.
    Export {
        /// Shorthand for `--format dot`.
        #[arg(long, conflicts_with = "csv")]
        dot: bool,
        /// Shorthand for `--format csv`.
        #[arg(long)]
        csv: bool,
    },
    /// Gap spectrum of c_{N,l} inside the projection of c_{n,l}.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        /// Copies of c_{n,l} to concatenate before projecting.
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Project a symbolic walk such as "3:E C1^2 C2" to a lower level.
    Project {
        walk: String,
        #[arg(long)]
        to: usize,
    },
}

/// Output of one command: named files plus a pass/fail verdict.
pub struct Output {
    pub files: Vec<(String, String)>,
    pub passed: bool,
}

impl Output {
    fn one(name: &str, body: String) -> Self {
        Output {
            files: vec![(name.to_string(), body)],
            passed: true,
        }
    }
}

pub fn load_tower(g: &GlobalOpts) -> Result<Tower> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            TowerConfig::parse(&text)?
        }
        None => TowerConfig::new(DEFAULT_DEPTH),
    };
    if let Some(d) = g.depth {
        cfg.depth = d;
    }
    let mut t = Tower::build(cfg)?;
    if let Some(limit) = g.limit {
        t = t.with_explicit_limit(limit);
    }
    Ok(t)
}

fn level(g: &GlobalOpts, default: usize) -> usize {
    g.level.unwrap_or(default)
}

/// Runs a parsed command line and returns what it produced.
pub fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let t = load_tower(g)?;
    match &cli.command {
        Command::Build => cmd_build(&t),
        Command::Verify {
            suite,
            max_n,
            max_resolution,
            samples,
        } => cmd_verify(&t, *suite, max_n.unwrap_or(t.depth()), *max_resolution, *samples, g.seed),
        Command::Orbit { anchor } => {
            let a = PointAnchor::parse(&t, anchor)?;
            let n = level(g, 1);
            let steps = match (&g.steps, a.horizon(&t)) {
                (Some(s), _) => s.clone(),
                (None, Some(h)) => h,
                (None, None) => BigUint::from(10u32),
            };
            let trace = orbit_trace(&t, &a, n, &steps)?;
            match g.format.unwrap_or(Format::Csv) {
                Format::Report => {
                    let names: Vec<String> = trace.iter().map(ToString::to_string).collect();
                    let mut r = Report::new("orbit")
                        .param("anchor", &a)
                        .param("N", n)
                        .param("steps", &steps);
                    r.detail("trace", names.join(","));
                    Ok(Output::one("orbit.txt", format!("{r}\n")))
                }
                _ => Ok(Output::one("orbit.csv", trace_to_csv(&trace)?)),
            }
        }
        Command::Pair { x, y } => {
            let x = PointAnchor::parse(&t, x)?;
            let y = PointAnchor::parse(&t, y)?;
            let horizon = g.steps.clone().unwrap_or_else(|| common_horizon(&t, &x, &y));
            let r = separation_report(&t, &x, &y, level(g, 1), &horizon)?;
            Ok(Output::one("pair.txt", format!("{r}\n")))
        }
        Command::Dense { anchor_depth, cover } => {
            let n = level(g, 1);
            let a = dense_anchor(&t, n, anchor_depth.unwrap_or(t.depth()))?;
            let mut r = Report::new("dense").param("N", n).param("anchor", &a);
            let coords: Vec<String> = thread(&t, &a).coords().iter().map(ToString::to_string).collect();
            r.detail("thread", coords.join(","));
            if let Some(m) = cover {
                if !coverage_check(&t, &a, *m)? {
                    r.detail("cover_level", m);
                    r.fail("orbit misses a vertex");
                }
            }
            Ok(Output {
                passed: r.passed,
                files: vec![("dense.txt".into(), format!("{r}\n"))],
            })
        }
        Command::Witness { anchor } => {
            let a = PointAnchor::parse(&t, anchor)?;
            let w = equicontinuity_witness(&t, &a, level(g, 1))?;
            Ok(Output::one("witness.txt", format!("{w}\n")))
        }
        Command::Export { dot, csv } => {
            let n = level(g, t.depth());
            let format = match (dot, csv) {
                (true, _) => Format::Dot,
                (_, true) => Format::Csv,
                _ => g.format.unwrap_or(Format::Dot),
            };
            match format {
                Format::Dot => {
                    let graph = t.materialize_level(n)?;
                    let dot = graph.to_dot_with(&format!("level{n}"), |id| {
                        t.vertex_of_id(n, id).map(|v| v.to_string()).unwrap_or_default()
                    });
                    Ok(Output::one(&format!("level{n}.dot"), dot))
                }
                _ => Ok(Output::one(&format!("level{n}.csv"), vertex_table(&t, n)?)),
            }
        }
        Command::Spectrum { n, l, copies } => {
            let big_n = level(g, 1);
            let walk = project_to(&t, &SymWalk::circuit(*n, *l)?.repeat(*copies), big_n)?;
            let s = gap_spectrum(&t, &walk, *l)?;
            match g.format.unwrap_or(Format::Report) {
                Format::Csv => Ok(Output::one("spectrum.csv", s.to_csv()?)),
                _ => Ok(Output::one(
                    "spectrum.txt",
                    format!("n={n} N={big_n} copies={copies} {}\n", s.render()),
                )),
            }
        }
        Command::Project { walk, to } => {
            let w: SymWalk = walk.parse()?;
            let p = project_to(&t, &w, *to)?;
            Ok(Output::one(
                "project.txt",
                format!("level={} length={} walk={}\n", p.level(), p.length(&t), p),
            ))
        }
    }
}

fn vertex_table(t: &Tower, n: usize) -> Result<String> {
    let graph = t.materialize_level(n)?;
    let cover = if n > 0 { Some(t.materialize_cover(n - 1)?) } else { None };
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    wtr.write_record(["id", "vertex", "circuit", "position", "image"])
        .map_err(io)?;
    for id in graph.vertices() {
        let v = t.vertex_of_id(n, id)?;
        let image = match &cover {
            Some(h) => t.vertex_of_id(n - 1, h.apply(id))?.to_string(),
            None => String::new(),
        };
        wtr.write_record([
            id.to_string(),
            v.to_string(),
            v.circuit().to_string(),
            v.position().to_string(),
            image,
        ])
        .map_err(io)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_build(t: &Tower) -> Result<Output> {
    let mut out = format!("depth={}\n", t.depth());
    for n in 0..=t.depth() {
        let lengths: Vec<String> = (1..=n)
            .map(|i| t.circuit_length(n, i).map(ToString::to_string))
            .collect::<Result<_>>()?;
        out.push_str(&format!(
            "level={n} vertices={} lengths={}\n",
            t.vertex_count(n)?,
            if lengths.is_empty() { "-".into() } else { lengths.join(",") }
        ));
    }
    let mut summary = Summary::default();
    for n in 0..t.depth() {
        let mut r = Report::new("cover").param("n", n);
        match t.materialize_cover(n) {
            Ok(h) => {
                if !check_cover(&h) {
                    r.fail("not a cover");
                } else if !check_bidirectional(&h) {
                    r.fail("not bidirectional");
                }
            }
            Err(Error::ExplicitLimitExceeded { .. }) => {
                r.detail("skipped", "explicit_limit");
            }
            Err(e) => return Err(e),
        }
        summary.add(&r);
        out.push_str(&format!("{r}\n"));
    }
    out.push_str(&format!("{summary}\n"));
    Ok(Output {
        passed: summary.all_passed(),
        files: vec![("build.txt".into(), out)],
    })
}

fn cmd_verify(
    t: &Tower,
    suite: Suite,
    max_n: usize,
    max_res: usize,
    samples: usize,
    seed: u64,
) -> Result<Output> {
    let mut reports = Vec::new();
    let max_n = max_n.min(t.depth());
    if matches!(suite, Suite::Gaps | Suite::All) {
        for n in 2..=max_n {
            for big_n in 1..n.min(max_res + 1) {
                for l in 1..=big_n {
                    reports.push(verify_spectrum(t, n, l, big_n)?);
                    reports.push(verify_interleaving(t, n, l, big_n)?);
                    if l < big_n && n >= big_n + 2 {
                        reports.push(verify_tail(t, n, l, big_n)?);
                    }
                }
            }
        }
    }
    if matches!(suite, Suite::Scramble | Suite::All) {
        reports.extend(scramble_suite(t, max_n.min(5), max_res, samples, seed)?);
    }
    if matches!(suite, Suite::Periodic | Suite::All) {
        if t.depth() == 0 {
            return Err(Error::OutOfRange("the periodic check needs depth >= 1".into()));
        }
        reports.push(no_periodic_check(t, t.depth() - 1)?);
    }
    let mut summary = Summary::default();
    let mut body = String::new();
    for r in &reports {
        summary.add(r);
        body.push_str(&format!("{r}\n"));
    }
    body.push_str(&format!("{summary}\n"));
    if let Some(first) = &summary.first_failure {
        body.push_str(&format!("first_failure {first}\n"));
    }
    Ok(Output {
        passed: summary.all_passed(),
        files: vec![("verify.txt".into(), body)],
    })
}

/// Per-depth sweeps: base visits, joint base visits for pairs with
/// `D >= N + 2`, witness divergences, and depth trends on sampled pairs.
fn scramble_suite(t: &Tower, max_depth: usize, max_res: usize, samples: usize, seed: u64) -> Result<Vec<Report>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for d in 1..=max_depth {
        let anchors = all_anchors(t, d)?;
        for n in 1..=d.min(max_res) {
            let mut r = Report::new("meet_base").param("D", d).param("N", n);
            for a in &anchors {
                let s = first_meet_base(t, a, n)?;
                if s > remn(t, a.vertex().expect("anchored"))? {
                    r.detail("anchor", a);
                    r.fail("base visit beyond horizon");
                    break;
                }
            }
            r.detail("anchors", anchors.len());
            out.push(r);
        }
        for n in 1..=d.min(max_res) {
            if d < n + 2 {
                continue;
            }
            let mut r = Report::new("joint_meet").param("D", d).param("N", n);
            let mut misses = 0u64;
            let mut pairs = 0u64;
            for (p, x) in anchors.iter().enumerate() {
                for y in &anchors[p..] {
                    pairs += 1;
                    if joint_meet(t, x, y, n)?.is_none() {
                        if misses == 0 {
                            r.detail("first_miss", format!("{x}|{y}"));
                        }
                        misses += 1;
                    }
                }
            }
            r.detail("pairs", pairs);
            r.detail("misses", misses);
            if misses > 0 {
                r.fail("pair without a joint base visit within the horizon");
            }
            out.push(r);
        }
        let mut r = Report::new("witness").param("D", d).param("N", 1);
        let mut found = 0u64;
        if d < t.depth() {
            for a in anchors.iter().filter(|a| a.vertex().is_some_and(|v| v.circuit() == 1)) {
                match equicontinuity_witness(t, a, 1) {
                    Ok(_) => found += 1,
                    Err(Error::NoDivergenceWithinHorizon { .. }) => {
                        r.detail("anchor", a);
                        r.fail("no divergence within the horizon");
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            r.detail("witnesses", found);
            out.push(r);
        }
    }
    if max_depth >= 2 && max_depth < t.depth() {
        for _ in 0..samples.min(50) {
            let pick = |rng: &mut ChaCha8Rng| -> Result<PointAnchor> {
                let i = rng.gen_range(1..=2usize);
                let len = t.circuit_length(2, i)?.clone();
                let j: u64 = rng.gen_range(1..len.to_u64_digits()[0]);
                PointAnchor::new(t, 2, i, j)
            };
            let x = pick(&mut rng)?;
            let y = pick(&mut rng)?;
            out.push(depth_trend(t, &x, &y, 1, max_depth)?);
        }
    }
    Ok(out)
}

/// Entry point for the binary. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(output) => match emit(&cli.global, &output) {
            Ok(()) => i32::from(!output.passed),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::HorizonExhausted { max, .. } = &e {
                eprintln!("hint: the largest usable step count is {max}");
            }
            2
        }
    }
}

fn emit(g: &GlobalOpts, output: &Output) -> std::io::Result<()> {
    match &g.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (name, body) in &output.files {
                fs::write(dir.join(name), body)?;
            }
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (_, body) in &output.files {
                stdout.write_all(body.as_bytes())?;
            }
            Ok(())
        }
    }
}
