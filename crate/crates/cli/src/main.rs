use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capregion::corpus::{gen_corpus, CorpusSpec};
use capregion::gf::Field;
use capregion::lincode::WeightTable;
use capregion::packing::{RayAnswer, RayOracle, DEFAULT_BASIS_CAP};
use capregion::plot::{cloud_boundary, outer_boundary, render_csv, render_svg, Layer, Style};
use capregion::polytope::{membership, RegionDescription};
use capregion::rational::{self, Rational};
use capregion::reconstruct::{reconstruct_exact_rays_2d, sample_rays_2d, RayCloud, DEFAULT_MAX_RAYS};
use capregion::routing::{build_routing_polytope, GkConfig, GkRouting, RoutingPolytope, SteinerOracle};
use capregion::semilinear::{build_semi_polytope, GkSemi, SemiGkConfig, SemiPolytope};
use capregion::steiner::enumerate_minimal_steiner_trees;
use capregion::{Exec, Network};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "capregion", version, about = "Routing and semi-linear coding capacity regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check acyclicity, reachability and source/receiver rules.
    Validate { net: PathBuf },
    /// List the minimal Steiner trees of every message.
    Trees { net: PathBuf },
    /// List associated weight vectors and their minimal partial solutions.
    Weights {
        #[arg(long, default_value = "2", value_parser = parse_prime)]
        field: u32,
        net: PathBuf,
    },
    /// Print a region description.
    Region {
        kind: Kind,
        #[command(flatten)]
        opts: Opts,
        net: PathBuf,
    },
    /// Boundary scale along one direction.
    Ray {
        kind: Kind,
        #[arg(long, value_parser = parse_list)]
        q: RateList,
        #[command(flatten)]
        opts: Opts,
        net: PathBuf,
    },
    /// Decide membership of a rate vector.
    Member {
        kind: Kind,
        #[arg(long, value_parser = parse_list)]
        rate: RateList,
        #[command(flatten)]
        opts: Opts,
        net: PathBuf,
    },
    /// Write boundary curves as SVG or exact CSV samples.
    Plot {
        kind: PlotKind,
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        out: PathBuf,
        net: PathBuf,
    },
    /// Generate a seeded corpus of random admissible networks.
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 2)]
        messages: usize,
        #[arg(long, default_value_t = 3)]
        max_capacity: u64,
        /// Directory for the generated files; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Routing,
    Semilinear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    Routing,
    Semilinear,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Vertices,
    Rays,
    Gk,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Exact,
    Sp,
}

#[derive(Args, Clone)]
struct Opts {
    #[arg(long, value_enum, default_value = "exact")]
    method: Method,
    #[arg(long, default_value = "1/10", value_parser = parse_omega)]
    omega: Rational,
    #[arg(long, default_value = "2", value_parser = parse_prime)]
    field: u32,
    #[arg(long, value_enum, default_value = "exact")]
    steiner_oracle: OracleArg,
    #[arg(long, default_value_t = 64)]
    rays: usize,
    #[arg(long, default_value_t = false)]
    sequential: bool,
}

fn parse_prime(s: &str) -> Result<u32, String> {
    let q: u32 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    Field::new(q).map(|_| q).map_err(|e| e.to_string())
}

fn parse_omega(s: &str) -> Result<Rational, String> {
    let w = rational::parse(s).map_err(|e| e.to_string())?;
    if w <= Rational::from_integer(0.into()) {
        return Err("omega must be positive".into());
    }
    Ok(w)
}

/// Comma-separated rationals, kept as one clap value.
#[derive(Clone)]
struct RateList(Vec<Rational>);

fn parse_list(s: &str) -> Result<RateList, String> {
    rational::parse_list(s).map(RateList).map_err(|e| e.to_string())
}

type Res<T> = Result<T, String>;

fn read_net(path: &Path) -> Res<Network> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Network::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, data: &str) -> Res<()> {
    fs::write(path, data).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn exec(o: &Opts) -> Exec {
    if o.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn gk_config(o: &Opts) -> GkConfig {
    GkConfig {
        omega: o.omega.clone(),
        steiner_oracle: match o.steiner_oracle {
            OracleArg::Exact => SteinerOracle::Exact,
            OracleArg::Sp => SteinerOracle::ShortestPaths,
        },
        ..GkConfig::default()
    }
}

fn semi_config(o: &Opts) -> SemiGkConfig {
    SemiGkConfig {
        omega: o.omega.clone(),
        ..SemiGkConfig::default()
    }
}

enum Engine {
    Routing(RoutingPolytope),
    Semi(SemiPolytope),
}

impl Engine {
    fn build(kind: Kind, net: &Network, o: &Opts) -> Res<Engine> {
        Ok(match kind {
            Kind::Routing => Engine::Routing(build_routing_polytope(net, exec(o)).map_err(s)?),
            Kind::Semilinear => {
                let f = Field::new(o.field).map_err(s)?;
                Engine::Semi(build_semi_polytope(net, f, exec(o)).map_err(s)?)
            }
        })
    }

    fn exact(&self) -> &dyn RayOracle {
        match self {
            Engine::Routing(p) => p,
            Engine::Semi(p) => p,
        }
    }

    fn with_gk<R>(&self, o: &Opts, f: impl FnOnce(&dyn RayOracle) -> R) -> R {
        match self {
            Engine::Routing(p) => f(&GkRouting {
                poly: p,
                cfg: gk_config(o),
            }),
            Engine::Semi(p) => f(&GkSemi {
                poly: p,
                cfg: semi_config(o),
            }),
        }
    }

    fn support_region(&self) -> Res<RegionDescription> {
        match self {
            Engine::Routing(p) => p.exact_region_2d(),
            Engine::Semi(p) => p.exact_region_2d(),
        }
        .map_err(s)
    }

    fn vertex_region(&self) -> Res<RegionDescription> {
        match self {
            Engine::Routing(p) => p.exact_region_via_vertices(DEFAULT_BASIS_CAP),
            Engine::Semi(p) => p.exact_region_via_vertices(DEFAULT_BASIS_CAP),
        }
        .map_err(s)
    }

    /// Exact region by the chosen method; vertex enumeration serves any
    /// dimension, the other methods need two messages.
    fn region(&self, o: &Opts) -> Res<RegionDescription> {
        match o.method {
            Method::Exact => {
                if self.exact().dimension() == 2 {
                    self.support_region()
                } else {
                    self.vertex_region()
                }
            }
            Method::Vertices => self.vertex_region(),
            Method::Rays => reconstruct_exact_rays_2d(self.exact(), DEFAULT_MAX_RAYS).map_err(s),
            Method::Gk => Err("the gk method yields samples, not a region".into()),
        }
    }

    fn gamma(&self) -> Vec<Rational> {
        match self {
            Engine::Routing(p) => p.net.rate_upper_bounds(),
            Engine::Semi(p) => p.net.rate_upper_bounds(),
        }
    }
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn fmt_list(v: &[Rational]) -> String {
    v.iter().map(rational::fmt).collect::<Vec<_>>().join(",")
}

fn cmd_validate(net: &Network) -> Res<String> {
    let report = net.validate();
    if report.is_admissible() {
        Ok("ok\n".into())
    } else {
        let lines: Vec<String> = report.violations.iter().map(|(_, m)| m.clone()).collect();
        Err(format!("invalid network: {}", lines.join("; ")))
    }
}

fn cmd_trees(net: &Network) -> Res<String> {
    net.ensure_structural().map_err(s)?;
    let mut out = String::new();
    for (i, m) in net.messages().iter().enumerate() {
        let trees = enumerate_minimal_steiner_trees(net, i).map_err(s)?;
        writeln!(out, "{}: {} trees", m.name, trees.len()).unwrap();
        for t in trees {
            let labels: Vec<String> = t.edges.iter().map(|&e| net.edge_label(e)).collect();
            writeln!(out, "  {}", labels.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn cmd_weights(net: &Network, q: u32) -> Res<String> {
    net.ensure_structural().map_err(s)?;
    let f = Field::for_alphabet(q, net.alphabet_size()).map_err(s)?;
    let table = WeightTable::build(net, f, Exec::default()).map_err(s)?;
    let mut out = String::new();
    writeln!(out, "{} weight vectors over GF({q})", table.count()).unwrap();
    for (w, sols) in &table.entries {
        writeln!(out, "{w}: {} minimal solutions", sols.len()).unwrap();
        for sol in sols {
            let labels: Vec<String> = sol.active_edges.iter().map(|&e| net.edge_label(e)).collect();
            writeln!(out, "  {}", labels.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn cloud(engine: &Engine, o: &Opts) -> Res<RayCloud> {
    if engine.exact().dimension() != 2 {
        return Err("ray sampling needs exactly two messages".into());
    }
    if o.method == Method::Gk {
        engine.with_gk(o, |or| sample_rays_2d(or, o.rays, exec(o)))
    } else {
        sample_rays_2d(engine.exact(), o.rays, exec(o))
    }
    .map_err(s)
}

fn cmd_region(engine: &Engine, o: &Opts) -> Res<String> {
    if o.method != Method::Gk {
        return Ok(engine.region(o)?.to_string());
    }
    let c = cloud(engine, o)?;
    let mut out = String::new();
    for p in &c.points {
        let (lo, hi) = p.answer.bracket.clone().expect("approximate answers carry a bracket");
        writeln!(
            out,
            "sample {} lambda {} bracket {} {}",
            fmt_list(&p.direction),
            rational::fmt(&p.answer.lambda),
            rational::fmt(&lo),
            rational::fmt(&hi)
        )
        .unwrap();
    }
    writeln!(out, "sketch (hull of samples, no guarantee)").unwrap();
    out.push_str(&c.sketch.to_string());
    Ok(out)
}

fn print_answer(a: &RayAnswer) -> String {
    let mut out = format!("lambda = {}\n", rational::fmt(&a.lambda));
    if let Some((lo, hi)) = &a.bracket {
        writeln!(out, "bracket = [{}, {}]", rational::fmt(lo), rational::fmt(hi)).unwrap();
    }
    for (j, x) in a.packing.iter().enumerate() {
        if *x != Rational::from_integer(0.into()) {
            writeln!(out, "x[{j}] = {}", rational::fmt(x)).unwrap();
        }
    }
    out
}

fn cmd_ray(engine: &Engine, q: &[Rational], o: &Opts) -> Res<String> {
    let a = match o.method {
        Method::Gk => engine.with_gk(o, |or| or.ray(q)),
        _ => engine.exact().ray(q),
    }
    .map_err(s)?;
    let mut out = print_answer(&a);
    if let Engine::Routing(p) = engine {
        for (j, x) in a.packing.iter().enumerate() {
            if *x != Rational::from_integer(0.into()) {
                let t = &p.trees[j];
                let labels: Vec<String> = t.edges.iter().map(|&e| p.net.edge_label(e)).collect();
                writeln!(out, "tree[{j}] {} {}", p.net.messages()[t.message].name, labels.join(" ")).unwrap();
            }
        }
    }
    Ok(out)
}

fn cmd_member(engine: &Engine, rate: &[Rational], o: &Opts) -> Res<String> {
    let mut o = o.clone();
    if o.method == Method::Gk {
        o.method = Method::Exact;
    }
    let region = engine.region(&o)?;
    let yes = membership(&region, rate).map_err(s)?;
    Ok(if yes { "yes\n" } else { "no\n" }.into())
}

fn cmd_plot(net: &Network, kind: PlotKind, o: &Opts, out: &Path) -> Res<String> {
    let kinds: Vec<Kind> = match kind {
        PlotKind::Routing => vec![Kind::Routing],
        PlotKind::Semilinear => vec![Kind::Semilinear],
        PlotKind::Both => vec![Kind::Routing, Kind::Semilinear],
    };
    let engines: Vec<(Kind, Engine)> = kinds
        .iter()
        .map(|&k| Engine::build(k, net, o).map(|e| (k, e)))
        .collect::<Res<_>>()?;
    if engines[0].1.exact().dimension() != 2 {
        return Err("plots need exactly two messages".into());
    }
    let label = |k: Kind| match k {
        Kind::Routing => "routing",
        Kind::Semilinear => "semilinear",
    };
    let is_csv = out.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let clouds: Vec<(String, RayCloud)> = engines
            .iter()
            .map(|(k, e)| cloud(e, o).map(|c| (label(*k).to_string(), c)))
            .collect::<Res<_>>()?;
        let rows: Vec<(String, &[capregion::reconstruct::CloudPoint])> =
            clouds.iter().map(|(l, c)| (l.clone(), c.points.as_slice())).collect();
        write_file(out, &render_csv(&rows))?;
    } else {
        let mut layers = Vec::new();
        for (k, e) in &engines {
            let (boundary, style) = if o.method == Method::Gk {
                let c = cloud(e, o)?;
                let st = if *k == Kind::Routing { Style::RoutingApprox } else { Style::SemiApprox };
                (cloud_boundary(&c.points), st)
            } else {
                let r = e.region(o)?;
                let st = if *k == Kind::Routing { Style::RoutingExact } else { Style::SemiExact };
                (outer_boundary(&r).map_err(s)?, st)
            };
            layers.push(Layer {
                label: label(*k).to_string(),
                boundary,
                style,
            });
        }
        let one = Rational::from_integer(1.into());
        let gamma: Vec<Rational> = engines[0]
            .1
            .gamma()
            .into_iter()
            .map(|g| if g > Rational::from_integer(0.into()) { g } else { one.clone() })
            .collect();
        write_file(out, &render_svg(&layers, &gamma).map_err(s)?)?;
    }
    Ok(format!("wrote {}\n", out.display()))
}

fn cmd_corpus(spec: &CorpusSpec, out: Option<&Path>) -> Res<String> {
    let nets = gen_corpus(spec).map_err(s)?;
    let mut text = String::new();
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
            for (i, n) in nets.iter().enumerate() {
                let path = dir.join(format!("net_{i:03}.net"));
                write_file(&path, &n.serialize())?;
                writeln!(text, "{}", path.display()).unwrap();
            }
        }
        None => {
            for (i, n) in nets.iter().enumerate() {
                writeln!(text, "# net_{i:03}").unwrap();
                text.push_str(&n.serialize());
            }
        }
    }
    Ok(text)
}

fn run(cli: Cli) -> Res<String> {
    match cli.command {
        Command::Validate { net } => cmd_validate(&read_net(&net)?),
        Command::Trees { net } => cmd_trees(&read_net(&net)?),
        Command::Weights { field, net } => cmd_weights(&read_net(&net)?, field),
        Command::Region { kind, opts, net } => {
            let n = read_net(&net)?;
            cmd_region(&Engine::build(kind, &n, &opts)?, &opts)
        }
        Command::Ray { kind, q, opts, net } => {
            let n = read_net(&net)?;
            cmd_ray(&Engine::build(kind, &n, &opts)?, &q.0, &opts)
        }
        Command::Member { kind, rate, opts, net } => {
            let n = read_net(&net)?;
            cmd_member(&Engine::build(kind, &n, &opts)?, &rate.0, &opts)
        }
        Command::Plot { kind, opts, out, net } => cmd_plot(&read_net(&net)?, kind, &opts, &out),
        Command::Corpus {
            seed,
            count,
            max_nodes,
            max_edges,
            messages,
            max_capacity,
            out,
        } => {
            let spec = CorpusSpec {
                count,
                min_nodes: CorpusSpec::default().min_nodes.min(max_nodes),
                max_nodes,
                min_edges: CorpusSpec::default().min_edges.min(max_edges),
                max_edges,
                messages,
                max_capacity,
                seed,
                ..CorpusSpec::default()
            };
            cmd_corpus(&spec, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
