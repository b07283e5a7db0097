//! Command-line front end: parses inputs, dispatches to `harbourne` and
//! renders exact tables.

pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use harbourne::cluster::{h_passing_bound, harbourne_constant, hilbert_samuel_check, ClusterJson, WeightedCluster};
use harbourne::exec::Mode;
use harbourne::field::{PolyJson, Rational, Tower};
use harbourne::local::{base_points, map_multiplicity, mult_cluster, Germ, LocalMap, PreparedCluster};
use harbourne::plane::sweeps::{fermat_sweep, h_bound_sweep, klein_sweep, theorem_b_sweep};
use harbourne::plane::{
    fermat, h_index, harbourne_h, klein_lines, klein_polars, klein_s_cluster, klein_term_comparison,
    kummer_pullback, pullback_theorem_check, wiman, KummerSpec, PlaneConfig,
};
use harbourne::Error;
use serde::Deserialize;

pub use report::{Cell, Format, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "harbourne", version, about = "Exact weighted clusters, map pullbacks and Harbourne indices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub kmax: Option<u32>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl Flags {
    fn mode(&self) -> Mode {
        if self.sequential {
            Mode::Sequential
        } else {
            Mode::default()
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weighted clusters given as cluster JSON.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// Curve germs given as polynomial JSON.
    #[command(subcommand)]
    Germ(GermCmd),
    /// Map germs given as `{"f1": poly, "f2": poly}`.
    #[command(subcommand)]
    Map(MapCmd),
    /// Plane configurations given as config JSON.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// Built-in configurations.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Family sweeps over k.
    #[command(subcommand)]
    Sweep(SweepCmd),
}

#[derive(Subcommand, Debug)]
pub enum ClusterCmd {
    /// Validate the forest and the proximity inequalities.
    Check { input: PathBuf },
    /// Harbourne constant H(C, K) for a curve with self-intersection C².
    Hc {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
    },
    /// Virtual codimension and the Hilbert–Samuel check up to --kmax.
    Codim { input: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GermCmd {
    MultCluster { input: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum MapCmd {
    /// Cluster of base points.
    Bp { input: PathBuf },
    /// Multiplicity and local degree.
    Degree { input: PathBuf },
    /// Pull a weighted cluster back.
    Pullback {
        input: PathBuf,
        #[arg(long)]
        cluster: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConfigCmd {
    HIndex { input: PathBuf },
    /// Kummer pullback of degree k².
    Kummer {
        input: PathBuf,
        #[arg(long)]
        k: u32,
        /// Emit the pulled-back configuration as JSON instead of a table.
        #[arg(long)]
        config: bool,
    },
    /// Compare H before and after the Kummer pullback.
    VerifyPullback {
        input: PathBuf,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenCmd {
    /// One k, or all of 2..=kmax.
    Fermat {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        config: bool,
    },
    Wiman {
        #[arg(long)]
        config: bool,
    },
    /// Klein's 21 lines and the chains S_k for k up to --kmax (default 10).
    Klein {
        #[arg(long)]
        config: bool,
    },
    KleinPolars {
        #[arg(long)]
        config: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum SweepCmd {
    /// k = 2..=kmax (default 50).
    TheoremB,
    /// k = 2..=kmax (default 8).
    KleinBound,
    /// Transported h-bound of a configuration for k = 2..=kmax (default 10).
    HBound { input: PathBuf },
}

/// Failures, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input: exit 2.
    Parse(String),
    /// A domain error from the library: exit 1.
    Domain(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn diagnostic(&self) -> String {
        match self {
            Failure::Parse(m) => format!("ParseError: {m}"),
            Failure::Domain(e) => format!("{}: {e}", e.name()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(f) => Failure::Parse(f.to_string()),
            e => Failure::Domain(e),
        }
    }
}

type Out<T> = std::result::Result<T, Failure>;

/// Rendered output of a command.
pub enum Output {
    Report(Report),
    Json(String),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Report(r) => r.render(format),
            Output::Json(s) => s.clone(),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Out<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_cluster(path: &Path) -> Out<WeightedCluster> {
    Ok(read_json::<ClusterJson>(path)?.to_cluster()?)
}

fn read_germ(path: &Path) -> Out<Germ> {
    let (p, t) = read_json::<PolyJson>(path)?.to_poly(&Tower::rational()).map_err(Error::from)?;
    Ok(Germ::new(p, t)?)
}

#[derive(Deserialize)]
struct MapJson {
    f1: PolyJson,
    f2: PolyJson,
}

fn read_map(path: &Path) -> Out<LocalMap> {
    let m: MapJson = read_json(path)?;
    let (f1, t) = m.f1.to_poly(&Tower::rational()).map_err(Error::from)?;
    let (f2, t2) = m.f2.to_poly(&t).map_err(Error::from)?;
    if t2 != t {
        return Err(Failure::Parse("f1 and f2 are over different towers".into()));
    }
    Ok(LocalMap::new(f1, f2, t)?)
}

/// Config files are validated on load; a failed validation is a domain
/// error, malformed JSON a parse error.
fn read_config(path: &Path) -> Out<PlaneConfig> {
    let shape: ConfigShape = read_json(path)?;
    let mut sing = Vec::new();
    for s in shape.sing {
        sing.push(harbourne::plane::SingEntry { cluster: s.cluster.to_cluster()?, count: s.count, placement: s.placement });
    }
    Ok(PlaneConfig::new(shape.degree, shape.components, sing)?)
}

#[derive(Deserialize)]
struct ConfigShape {
    degree: u64,
    #[serde(default)]
    components: Vec<harbourne::plane::Component>,
    sing: Vec<SingShape>,
}

#[derive(Deserialize)]
struct SingShape {
    cluster: ClusterJson,
    count: u64,
    #[serde(default = "generic")]
    placement: harbourne::plane::Placement,
}

fn generic() -> harbourne::plane::Placement {
    harbourne::plane::Placement::Generic
}

fn opt(s: Option<&str>) -> Cell {
    Cell::Text(s.unwrap_or("").to_string())
}

pub fn cluster_table(title: &str, k: &WeightedCluster, provenance: &str) -> Table {
    let mut t = Table::new(title, &["id", "parent", "second_proximity", "orbit", "mult", "excess"]);
    let f = k.forest();
    let ex = k.excesses();
    for i in 0..k.len() {
        t.push(
            vec![
                f.id(i).into(),
                opt(f.parent(i).map(|p| f.id(p))),
                opt(f.second_proximity(i).map(|p| f.id(p))),
                f.orbit(i).into(),
                k.weight(i).into(),
                ex[i].into(),
            ],
            provenance,
        );
    }
    t
}

fn config_json(c: &PlaneConfig) -> Output {
    let mut s = serde_json::to_string_pretty(c).expect("configs serialize");
    s.push('\n');
    Output::Json(s)
}

fn placement_text(p: harbourne::plane::Placement) -> String {
    use harbourne::plane::Placement::*;
    match p {
        Generic => "generic".into(),
        CoordinateVertex(i) => format!("vertex {i}"),
        CoordinateLine(i) => format!("line {i}"),
    }
}

fn config_tables(name: &str, c: &PlaneConfig, provenance: &str) -> Out<Vec<Table>> {
    let mut s = Table::new(format!("{name}: summary"), &["degree", "lines", "C2", "marked_points", "h"]);
    s.push(
        vec![c.degree().into(), c.line_count().into(), c.self_intersection().into(), c.proper_points().into(), h_index(c)?.into()],
        format!("h_index({provenance})"),
    );
    let mut p = Table::new(format!("{name}: marked points"), &["weights", "count", "placement", "square", "size"]);
    for e in c.sing() {
        let w: Vec<String> = e.cluster.weights().iter().map(|w| w.to_string()).collect();
        p.push(
            vec![
                format!("({})", w.join(",")).into(),
                e.count.into(),
                placement_text(e.placement).into(),
                e.cluster.self_intersection().into(),
                e.cluster.point_count().into(),
            ],
            provenance,
        );
    }
    Ok(vec![s, p])
}

fn range(kmax: Option<u32>, default: u32) -> Out<Vec<u32>> {
    let kmax = kmax.unwrap_or(default);
    if kmax < 2 {
        return Err(Failure::Domain(Error::PreconditionViolated(format!("--kmax must be at least 2, got {kmax}"))));
    }
    Ok((2..=kmax).collect())
}

fn rat(r: &Rational) -> Cell {
    Cell::Rat(r.clone())
}

pub fn run(cmd: &Command, flags: &Flags) -> Out<Output> {
    let seed = flags.seed;
    let mode = flags.mode();
    let report = |tables: Vec<Table>| Ok(Output::Report(Report { tables }));
    match cmd {
        Command::Cluster(c) => match c {
            ClusterCmd::Check { input } => {
                let k = read_cluster(input)?;
                k.require_consistent()?;
                let mut s = Table::new("consistency", &["points", "self_intersection", "consistent"]);
                s.push(vec![k.point_count().into(), k.self_intersection().into(), true.into()], "is_consistent");
                report(vec![cluster_table("cluster", &k, "excesses"), s])
            }
            ClusterCmd::Hc { input, c2 } => {
                let k = read_cluster(input)?;
                let mut t = Table::new("harbourne constant", &["C2", "square", "size", "H"]);
                t.push(
                    vec![(*c2).into(), k.self_intersection().into(), k.point_count().into(), harbourne_constant(*c2, &k)?.into()],
                    "harbourne_constant",
                );
                let mut tables = vec![t];
                if k.is_consistent() {
                    let mut b = Table::new("passing bound", &["bound"]);
                    b.push(vec![h_passing_bound(*c2, &k)?.into()], "h_passing_bound");
                    tables.push(b);
                }
                report(tables)
            }
            ClusterCmd::Codim { input } => {
                let k = read_cluster(input)?;
                let kmax = flags.kmax.unwrap_or(5);
                let mut t = Table::new("codimension", &["square", "virtual_codimension", "kmax", "hilbert_samuel"]);
                t.push(
                    vec![
                        k.self_intersection().into(),
                        k.virtual_codimension().into(),
                        kmax.into(),
                        hilbert_samuel_check(&k, kmax)?.into(),
                    ],
                    "virtual_codimension, hilbert_samuel_check",
                );
                report(vec![t])
            }
        },
        Command::Germ(GermCmd::MultCluster { input }) => {
            let g = read_germ(input)?;
            let k = mult_cluster(&g)?;
            let mut s = Table::new("summary", &["mult", "square", "consistent"]);
            s.push(vec![g.mult()?.into(), k.self_intersection().into(), k.is_consistent().into()], "mult_cluster");
            report(vec![cluster_table("multiplicity cluster", &k, "mult_cluster"), s])
        }
        Command::Map(m) => match m {
            MapCmd::Bp { input } => {
                let f = read_map(input)?;
                let bp = base_points(&f)?;
                let mut t = cluster_table("base points", &bp.cluster, "base_points");
                let mut fm = Table::new("contracted curve", &["id", "mult_F"]);
                for i in 0..bp.cluster.len() {
                    fm.push(vec![bp.cluster.forest().id(i).into(), bp.f_mults[i].into()], "fixed_part");
                }
                t.title = "base points".into();
                report(vec![t, fm])
            }
            MapCmd::Degree { input } => {
                let f = read_map(input)?;
                let mut t = Table::new("map", &["multiplicity", "local_degree"]);
                t.push(vec![map_multiplicity(&f)?.into(), base_points(&f)?.local_degree().into()], "local_degree");
                report(vec![t])
            }
            MapCmd::Pullback { input, cluster } => {
                let f = read_map(input)?;
                let k = read_cluster(cluster)?;
                let pk = PreparedCluster::new(&k, seed)?.pull(&f)?;
                let deg = base_points(&f)?.local_degree();
                let mut s = Table::new("pullback laws", &["deg", "square", "pulled_square", "size", "pulled_size"]);
                s.push(
                    vec![
                        deg.into(),
                        k.self_intersection().into(),
                        pk.self_intersection().into(),
                        k.point_count().into(),
                        pk.point_count().into(),
                    ],
                    "pullback_cluster",
                );
                report(vec![cluster_table("pullback", &pk, "pullback_cluster"), s])
            }
        },
        Command::Config(c) => match c {
            ConfigCmd::HIndex { input } => {
                let cfg = read_config(input)?;
                let mut t = Table::new("index", &["C2", "h", "H_all_marked"]);
                t.push(vec![cfg.self_intersection().into(), h_index(&cfg)?.into(), harbourne_h(&cfg)?.into()], "h_index");
                report(vec![t])
            }
            ConfigCmd::Kummer { input, k, config } => {
                let cfg = read_config(input)?;
                let new = kummer_pullback(&cfg, KummerSpec::new(*k)?, seed)?;
                if *config {
                    return Ok(config_json(&new));
                }
                report(config_tables(&format!("kummer k={k}"), &new, "kummer_pullback")?)
            }
            ConfigCmd::VerifyPullback { input, k } => {
                let cfg = read_config(input)?;
                let c = pullback_theorem_check(&cfg, KummerSpec::new(*k)?, seed)?;
                let mut t = Table::new("pullback check", &["k", "lhs", "rhs", "strict_expected", "holds"]);
                t.push(vec![(*k).into(), rat(&c.lhs), rat(&c.rhs), c.strict_expected.into(), c.holds.into()], "pullback_theorem_check");
                report(vec![t])
            }
        },
        Command::Gen(g) => match g {
            GenCmd::Fermat { k, config } => {
                let ks = match k {
                    Some(k) => vec![*k],
                    None => range(flags.kmax, 10)?,
                };
                if *config {
                    let [k] = ks[..] else {
                        return Err(Failure::Parse("--config needs a single --k".into()));
                    };
                    return Ok(config_json(&fermat(k, seed)?));
                }
                let mut t = Table::new("fermat", &["k", "degree", "lines", "h", "expected", "matches"]);
                for r in fermat_sweep(ks, mode, seed)? {
                    let c = 3 * r.k as u64;
                    t.push(
                        vec![r.k.into(), c.into(), c.into(), rat(&r.value), rat(&r.expected), r.matches().into()],
                        "h_index(kummer_pullback(three concurrent lines)) vs -3k^2/(k^2+3)",
                    );
                }
                report(vec![t])
            }
            GenCmd::Wiman { config } => {
                let w = wiman();
                if *config {
                    return Ok(config_json(&w));
                }
                let mut tables = config_tables("wiman", &w, "wiman")?;
                let pairs: u64 = w.sing().iter().map(|e| e.count * (e.cluster.weight(0) as u64).pow(2).saturating_sub(e.cluster.weight(0) as u64) / 2).sum();
                let mut t = Table::new("wiman: identities", &["points", "line_pairs", "expected_pairs"]);
                t.push(vec![w.proper_points().into(), pairs.into(), (45u64 * 44 / 2).into()], "wiman");
                tables.push(t);
                report(tables)
            }
            GenCmd::Klein { config } => {
                let c = klein_lines();
                if *config {
                    return Ok(config_json(&c));
                }
                let mut tables = config_tables("klein", &c, "klein_lines")?;
                let mut s = Table::new("klein: S chains", &["k", "points", "expected_points", "square_x42", "expected_square_x42"]);
                for k in range(flags.kmax, 10)? {
                    let sk = klein_s_cluster(k)?;
                    s.push(
                        vec![
                            k.into(),
                            sk.point_count().into(),
                            (2 * 3u64.pow(k - 2)).into(),
                            (42 * sk.self_intersection()).into(),
                            (588 * 3i64.pow(k - 2) - 42).into(),
                        ],
                        "klein_s_cluster vs 2*3^(k-2), 588*3^(k-2)-42",
                    );
                }
                tables.push(s);
                report(tables)
            }
            GenCmd::KleinPolars { config } => {
                let c = klein_polars();
                if *config {
                    return Ok(config_json(&c));
                }
                report(config_tables("klein polars", &c, "klein_polars")?)
            }
        },
        Command::Sweep(s) => match s {
            SweepCmd::TheoremB => {
                let mut t = Table::new("theorem b", &["k", "h", "expected", "matches"]);
                for r in theorem_b_sweep(range(flags.kmax, 50)?, mode, seed)? {
                    t.push(
                        vec![r.k.into(), rat(&r.value), rat(&r.expected), r.matches().into()],
                        "h_index(kummer_pullback(wiman, vertices at triple points)) vs -(225/67)*201k^2/(198k^2+3)",
                    );
                }
                report(vec![t])
            }
            SweepCmd::KleinBound => {
                let kmax = *range(flags.kmax, 8)?.last().expect("nonempty");
                let rows = klein_sweep(kmax, mode)?;
                let mut b = Table::new("klein bound", &["k", "K2", "size_bound", "h_bound", "expected", "matches"]);
                let mut d = Table::new(
                    "klein closed forms",
                    &["k", "K2", "K2_closed_form", "size_bound", "size_closed_form", "discrepancy"],
                );
                let mut terms = Table::new("klein per-term", &["k", "l", "recursion", "closed_form", "equal"]);
                for r in &rows {
                    b.push(
                        vec![
                            r.k.into(),
                            r.k2.clone().into(),
                            r.size_bound.clone().into(),
                            rat(&r.h_bound),
                            rat(&r.expected),
                            (r.h_bound == r.expected).into(),
                        ],
                        "klein_recursion vs -(1283*9^k-81)/(410*9^k)",
                    );
                    d.push(
                        vec![
                            r.k.into(),
                            r.k2.clone().into(),
                            rat(&r.k2_closed),
                            r.size_bound.clone().into(),
                            rat(&r.size_closed),
                            r.discrepancy().into(),
                        ],
                        "klein_recursion vs klein_closed_forms",
                    );
                    for c in klein_term_comparison(r.k)? {
                        terms.push(
                            vec![r.k.into(), c.l.into(), c.recursion.clone().into(), c.closed_form.clone().into(), (c.recursion == c.closed_form).into()],
                            "klein_term_comparison",
                        );
                    }
                }
                report(vec![b, d, terms])
            }
            SweepCmd::HBound { input } => {
                let cfg = read_config(input)?;
                let mut t = Table::new("h bound", &["k", "value", "limit"]);
                for r in h_bound_sweep(&cfg, range(flags.kmax, 10)?, mode)? {
                    t.push(vec![r.k.into(), rat(&r.value), rat(&r.limit)], "h_bound_gap");
                }
                report(vec![t])
            }
        },
    }
}

/// Run a parsed command line and write its output; returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = run(&cli.command, &cli.flags).and_then(|o| {
        let text = o.render(cli.flags.format);
        match &cli.flags.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::Parse(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.diagnostic());
            f.exit_code()
        }
    }
}
