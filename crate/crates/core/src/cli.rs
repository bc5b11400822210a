//! The `sublevel` command line.
//!
//! Every file written embeds the resolved configuration: diagram JSON under
//! a `config` key, CSV files as leading `# key=value` lines.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::barcode::minima_saddle_pairs;
use crate::bench::Benchmark;
use crate::error::{Error, Result};
use crate::experiment::{
    barcode_of, log_spaced_sizes, run_converge, run_nn, AtStage, ConvergeSpec, NnSpec, Stage,
    StageResult,
};
use crate::graph::{build_graph, GraphMethod, GraphSpec};
use crate::io;
use crate::metrics::bottleneck_distance;
use crate::nnloss::{Activation, LossSpec, MlpArchitecture, NnLoss, DEFAULT_L2, DEFAULT_WEIGHT_BOUND};
use crate::reduction::{build_filtered_complex, canonical_form, degree0_barcode, degree1_births};
use crate::sampling::{evaluate, sample_uniform, Objective, SampleSpec};
use crate::types::{BoundingBox, PointCloud, ScalarField};

/// Overrides `--threads` when set.
pub const THREADS_ENV: &str = "BARCODE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sublevel", version, about = "Barcodes of local minima for sampled functions")]
pub struct Cli {
    /// Base seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). BARCODE_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Main output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a box uniformly and write the point CSV.
    Sample(SampleArgs),
    /// Barcode of a sampled or given function.
    Barcode(BarcodeArgs),
    /// Barcode through the boundary-matrix reduction.
    OracleBarcode(OracleArgs),
    /// Bottleneck distance between two diagram files.
    Bottleneck(BottleneckArgs),
    /// Mean bottleneck distance between independent samples, per size.
    Converge(ConvergeArgs),
    /// Barcode of a network loss surface, with range statistics.
    Nn(NnArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    /// A benchmark name, or `nn` for a network loss surface.
    #[arg(long)]
    pub function: Option<String>,
    /// Dimension of the parametric benchmarks.
    #[arg(long)]
    pub dim: Option<usize>,
    /// JSON file `{"a": [...], "b": [...], "c": [...]}` replacing the
    /// standard Langermann constants.
    #[arg(long)]
    pub langermann_params: Option<PathBuf>,
    #[command(flatten)]
    pub net: NetArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NetArgs {
    /// Hidden layer widths, e.g. `2x2`.
    #[arg(long)]
    pub arch: Option<String>,
    #[arg(long, default_value_t = DEFAULT_L2)]
    pub l2: f64,
    #[arg(long, default_value_t = Activation::Tanh)]
    pub activation: Activation,
    /// Half-width of the weight box.
    #[arg(long, default_value_t = DEFAULT_WEIGHT_BOUND)]
    pub weight_bound: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub graph_method: Option<GraphMethod>,
    /// Neighbor count for `knn` (default: twice the dimension).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub cutoff_scale: Option<f64>,
    /// Also write the graph as a `u,v` edge list.
    #[arg(long)]
    pub edges_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Box as `lo:hi,lo:hi,...` (default: the function's domain).
    #[arg(long = "box")]
    pub bbox: Option<String>,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub function: FunctionArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Point CSV to read instead of sampling.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Column of `--points` holding the values.
    #[arg(long, requires = "points", conflicts_with = "function")]
    pub values_column: Option<String>,
    #[arg(long = "box")]
    pub bbox: Option<String>,
    /// Sample size when no `--points` are given.
    #[arg(long, conflicts_with = "points")]
    pub n: Option<usize>,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub graph: GraphArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BarcodeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Minimum/saddle pairs CSV (default: `pairs.csv` beside `--out`).
    #[arg(long)]
    pub pairs_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Births of the unpaired edges, CSV with header `birth`.
    #[arg(long)]
    pub degree1_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BottleneckArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub function: String,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Explicit comma-separated sizes; overrides the log grid.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3.0)]
    pub log_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub log_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub log_step: f64,
    /// Pairs per size.
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
    /// Give both clouds of a pair the same seed.
    #[arg(long)]
    pub same_seed: bool,
    /// Per-pair distances, CSV `n,r,distance`.
    #[arg(long)]
    pub distances_out: Option<PathBuf>,
    #[command(flatten)]
    pub graph: GraphArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NnArgs {
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[command(flatten)]
    pub net: NetArgs,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub pairs_out: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> StageResult<()> {
    configure_threads(cli.threads).at(Stage::Config)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Sample(args) => cmd_sample(args, cli.seed, out),
        Command::Barcode(args) => cmd_barcode(args, cli.seed, out),
        Command::OracleBarcode(args) => cmd_oracle(args, cli.seed, out),
        Command::Bottleneck(args) => cmd_bottleneck(args),
        Command::Converge(args) => cmd_converge(args, cli.seed, out),
        Command::Nn(args) => cmd_nn(args, cli.seed, out),
    }
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            Error::Config(format!("{THREADS_ENV}=`{v}` is not a thread count"))
        })?),
        Err(_) => flag,
    };
    if let Some(n) = threads {
        // A pool may already exist when called more than once in a process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// A scalar function selectable on the command line.
enum Function {
    Bench(Benchmark),
    Net(NnLoss, f64),
}

impl Objective for Function {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Function::Bench(b) => b.eval(x),
            Function::Net(loss, _) => loss.eval(x),
        }
    }
}

impl Function {
    fn resolve(args: &FunctionArgs, dim_hint: Option<usize>) -> Result<Option<Function>> {
        let Some(name) = args.function.as_deref() else {
            return Ok(None);
        };
        if name == "nn" {
            return Ok(Some(net_function(&args.net)?));
        }
        let mut bench = Benchmark::from_name(name, args.dim.or(dim_hint))?;
        if let Some(path) = &args.langermann_params {
            let Benchmark::Langermann(params) = &mut bench else {
                return Err(Error::Config("--langermann-params only applies to langermann".into()));
            };
            *params = serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?;
            params.validate()?;
        }
        Ok(Some(Function::Bench(bench)))
    }

    fn dim(&self) -> usize {
        match self {
            Function::Bench(b) => b.dim(),
            Function::Net(loss, _) => loss.spec().arch.n_params(),
        }
    }

    fn default_box(&self) -> Result<BoundingBox> {
        match self {
            Function::Bench(b) => Ok(b.default_box()),
            Function::Net(loss, bound) => loss.spec().arch.weight_box(*bound),
        }
    }
}

fn architecture(net: &NetArgs) -> Result<MlpArchitecture> {
    let arch = net.arch.as_deref().ok_or_else(|| Error::Config("--arch is required".into()))?;
    MlpArchitecture::parse(arch, net.activation)
}

fn net_function(net: &NetArgs) -> Result<Function> {
    let loss = LossSpec::new(architecture(net)?, net.l2)?;
    Ok(Function::Net(loss.objective(), net.weight_bound))
}

fn function_config(config: &mut Map<String, Value>, args: &FunctionArgs, f: Option<&Function>) {
    let Some(f) = f else { return };
    config.insert("function".into(), json!(args.function));
    config.insert("dim".into(), json!(f.dim()));
    match f {
        Function::Net(loss, bound) => net_config(config, &loss.spec().arch, loss.spec().l2_coeff, *bound),
        Function::Bench(Benchmark::Langermann(params)) => {
            config.insert("langermann".into(), json!(params));
        }
        Function::Bench(_) => {}
    }
}

fn net_config(config: &mut Map<String, Value>, arch: &MlpArchitecture, l2: f64, bound: f64) {
    config.insert("arch".into(), json!(arch.label()));
    config.insert("activation".into(), json!(arch.activation().to_string()));
    config.insert("l2".into(), json!(l2));
    config.insert("weight_bound".into(), json!(bound));
}

fn parse_box(text: Option<&str>, f: Option<&Function>) -> Result<Option<BoundingBox>> {
    let bbox = match (text, f) {
        (Some(t), _) => BoundingBox::parse(t)?,
        (None, Some(f)) => f.default_box()?,
        (None, None) => return Ok(None),
    };
    if let Some(f) = f {
        if f.dim() != bbox.dim() {
            return Err(Error::Config(format!(
                "box has {} axes but the function takes {} coordinates",
                bbox.dim(),
                f.dim()
            )));
        }
    }
    Ok(Some(bbox))
}

fn resolve_graph(args: &GraphArgs, dim: usize, default: GraphMethod) -> GraphSpec {
    let mut spec = GraphSpec::for_dim(dim).with_method(args.graph_method.unwrap_or(default));
    if let Some(k) = args.k {
        spec.k = k;
    }
    if let Some(s) = args.cutoff_scale {
        spec.cutoff_scale = s;
    }
    spec
}

fn graph_config(config: &mut Map<String, Value>, spec: &GraphSpec) {
    config.insert("graph_method".into(), json!(spec.method.to_string()));
    config.insert("k".into(), json!(spec.k));
    config.insert("cutoff_scale".into(), json!(spec.cutoff_scale));
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

/// Writes to `path`, or to standard output.
fn with_sink(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = io::create(p)?;
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_sample(args: &SampleArgs, seed: u64, out: Option<&Path>) -> StageResult<()> {
    let box_dim = match &args.bbox {
        Some(t) => Some(BoundingBox::parse(t).at(Stage::Config)?.dim()),
        None => None,
    };
    let f = Function::resolve(&args.function, box_dim).at(Stage::Config)?;
    let bbox = parse_box(args.bbox.as_deref(), f.as_ref())
        .at(Stage::Config)?
        .ok_or_else(|| Error::Config("--box or --function is required".into()))
        .at(Stage::Config)?;
    let spec = SampleSpec { bbox, n_points: args.n, seed };
    let cloud = sample_uniform(&spec).at(Stage::Sample)?;
    let values = match &f {
        Some(f) => Some(evaluate(f, &cloud).at(Stage::Evaluate)?),
        None => None,
    };

    let mut config = Map::new();
    config.insert("command".into(), json!("sample"));
    config.insert("seed".into(), json!(seed));
    config.insert("n".into(), json!(args.n));
    config.insert("box".into(), json!(spec.bbox.to_flag()));
    function_config(&mut config, &args.function, f.as_ref());
    let config = Value::Object(config);
    with_sink(out, |w| io::write_cloud_csv(w, &cloud, values.as_ref(), Some(&config))).at(Stage::Io)
}

/// Cloud, field and the configuration that produced them.
struct Input {
    cloud: PointCloud,
    field: ScalarField,
    config: Map<String, Value>,
}

fn load_input(args: &SourceArgs, command: &str, seed: u64) -> StageResult<Input> {
    let mut config = Map::new();
    config.insert("command".into(), json!(command));
    match &args.points {
        Some(path) => {
            let given_box = match &args.bbox {
                Some(t) => Some(BoundingBox::parse(t).at(Stage::Config)?),
                None => None,
            };
            // The dimension of a CSV is known only after reading it, so a
            // parametric benchmark resolves its dimension from the header.
            let header_dim = peek_dim(path).at(Stage::Io)?;
            let f = Function::resolve(&args.function, Some(header_dim)).at(Stage::Config)?;
            let bbox = match given_box {
                Some(b) => Some(b),
                None => f.as_ref().map(Function::default_box).transpose().at(Stage::Config)?,
            };
            let file = io::load_cloud_csv(path, bbox, args.values_column.as_deref()).at(Stage::Io)?;
            let field = match (&f, file.values) {
                (Some(f), _) => {
                    if f.dim() != file.cloud.dim() {
                        return Err(Error::Config(format!(
                            "points have {} coordinates but the function takes {}",
                            file.cloud.dim(),
                            f.dim()
                        )))
                        .at(Stage::Config);
                    }
                    evaluate(f, &file.cloud).at(Stage::Evaluate)?
                }
                (None, Some(values)) => values,
                (None, None) => {
                    return Err(Error::Config(
                        "points carry no values: pass --function or --values-column".into(),
                    ))
                    .at(Stage::Config)
                }
            };
            config.insert("points".into(), json!(path_string(path)));
            if let Some(col) = &args.values_column {
                config.insert("values_column".into(), json!(col));
            }
            config.insert("box".into(), json!(file.cloud.bbox().to_flag()));
            config.insert("n".into(), json!(file.cloud.len()));
            function_config(&mut config, &args.function, f.as_ref());
            Ok(Input { cloud: file.cloud, field, config })
        }
        None => {
            let box_dim = match &args.bbox {
                Some(t) => Some(BoundingBox::parse(t).at(Stage::Config)?.dim()),
                None => None,
            };
            let f = Function::resolve(&args.function, box_dim)
                .and_then(|f| f.ok_or_else(|| Error::Config("--points or --function is required".into())))
                .at(Stage::Config)?;
            let n = args
                .n
                .ok_or_else(|| Error::Config("--n is required when sampling".into()))
                .at(Stage::Config)?;
            let bbox = parse_box(args.bbox.as_deref(), Some(&f)).at(Stage::Config)?.expect("function given");
            let spec = SampleSpec { bbox, n_points: n, seed };
            let cloud = sample_uniform(&spec).at(Stage::Sample)?;
            let field = evaluate(&f, &cloud).at(Stage::Evaluate)?;
            config.insert("seed".into(), json!(seed));
            config.insert("n".into(), json!(n));
            config.insert("box".into(), json!(spec.bbox.to_flag()));
            function_config(&mut config, &args.function, Some(&f));
            Ok(Input { cloud, field, config })
        }
    }
}

/// Number of leading `x<d>` columns in a point CSV header.
fn peek_dim(path: &Path) -> Result<usize> {
    let file = std::fs::File::open(path)?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(file);
    Ok(rdr.headers()?.iter().take_while(|h| h.starts_with('x')).count())
}

fn write_edges(args: &GraphArgs, graph: &crate::types::NeighborGraph, config: &Value) -> StageResult<()> {
    if let Some(path) = &args.edges_out {
        with_sink(Some(path), |w| io::write_edges_csv(w, graph, Some(config))).at(Stage::Io)?;
    }
    Ok(())
}

/// Explicit path, else `pairs.csv` beside the diagram, else nothing.
fn pairs_path(explicit: Option<&Path>, out: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| out.map(|o| o.with_file_name("pairs.csv")))
}

fn cmd_barcode(args: &BarcodeArgs, seed: u64, out: Option<&Path>) -> StageResult<()> {
    let Input { cloud, field, mut config } = load_input(&args.source, "barcode", seed)?;
    let spec = resolve_graph(&args.source.graph, cloud.dim(), GraphMethod::Grid);
    graph_config(&mut config, &spec);
    let config = Value::Object(config);
    let dim = cloud.dim();
    let run = barcode_of(cloud, field, &spec)?;
    write_edges(&args.source.graph, &run.graph, &config)?;
    with_sink(out, |w| io::write_diagram_json(w, &run.diagram, Some(&config))).at(Stage::Io)?;
    if let Some(path) = pairs_path(args.pairs_out.as_deref(), out) {
        let pairs = minima_saddle_pairs(&run.diagram, &run.cloud).at(Stage::Barcode)?;
        with_sink(Some(&path), |w| io::write_pairs_csv(w, &pairs, dim, Some(&config))).at(Stage::Io)?;
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs, seed: u64, out: Option<&Path>) -> StageResult<()> {
    let Input { cloud, field, mut config } = load_input(&args.source, "oracle-barcode", seed)?;
    let spec = resolve_graph(&args.source.graph, cloud.dim(), GraphMethod::Grid);
    graph_config(&mut config, &spec);
    let config = Value::Object(config);
    let graph = build_graph(&cloud, &spec).at(Stage::Graph)?;
    write_edges(&args.source.graph, &graph, &config)?;
    let complex = build_filtered_complex(&graph, &field).at(Stage::Reduction)?;
    let cf = canonical_form(&complex).at(Stage::Reduction)?;
    let diagram = degree0_barcode(&cf, &complex);
    with_sink(out, |w| io::write_diagram_json(w, &diagram, Some(&config))).at(Stage::Io)?;
    if let Some(path) = &args.degree1_out {
        let births = degree1_births(&cf, &complex);
        with_sink(Some(path), |w| io::write_births_csv(w, &births, Some(&config))).at(Stage::Io)?;
    }
    Ok(())
}

fn cmd_bottleneck(args: &BottleneckArgs) -> StageResult<()> {
    let a = io::load_diagram_json(&args.a).at(Stage::Io)?;
    let b = io::load_diagram_json(&args.b).at(Stage::Io)?;
    println!("{}", bottleneck_distance(&a, &b));
    Ok(())
}

fn cmd_converge(args: &ConvergeArgs, seed: u64, out: Option<&Path>) -> StageResult<()> {
    let bench = Benchmark::from_name(&args.function, args.dim).at(Stage::Config)?;
    if !(args.log_step > 0.0 && args.log_min <= args.log_max) {
        return Err(Error::Config("need --log-step > 0 and --log-min <= --log-max".into()))
            .at(Stage::Config);
    }
    let sizes = match &args.sizes {
        Some(s) => s.clone(),
        None => log_spaced_sizes(args.log_min, args.log_max, args.log_step),
    };
    let spec = ConvergeSpec {
        function: bench.name().to_string(),
        dim: bench.dim(),
        sizes,
        pairs: args.pairs,
        base_seed: seed,
        graph: resolve_graph(&args.graph, bench.dim(), GraphMethod::Knn),
        same_seed: args.same_seed,
    };
    let result = run_converge(&spec)?;

    let mut config = Map::new();
    config.insert("command".into(), json!("converge"));
    config.insert("seed".into(), json!(seed));
    config.insert("function".into(), json!(spec.function));
    config.insert("dim".into(), json!(spec.dim));
    config.insert("box".into(), json!(bench.default_box().to_flag()));
    config.insert(
        "sizes".into(),
        json!(spec.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
    );
    config.insert("pairs".into(), json!(spec.pairs));
    config.insert("same_seed".into(), json!(spec.same_seed));
    graph_config(&mut config, &spec.graph);
    let config = Value::Object(config);

    with_sink(out, |w| {
        io::write_comments(w, Some(&config))?;
        writeln!(w, "n,mean,stderr")?;
        for row in &result.rows {
            writeln!(w, "{},{},{}", row.n, row.mean, row.stderr)?;
        }
        writeln!(w, "# slope={}", result.slope)?;
        writeln!(w, "# slope_upper_half={}", result.slope_upper_half)?;
        Ok(())
    })
    .at(Stage::Io)?;
    if let Some(path) = &args.distances_out {
        with_sink(Some(path), |w| {
            io::write_comments(w, Some(&config))?;
            writeln!(w, "n,r,distance")?;
            for row in &result.rows {
                for (r, d) in row.distances.iter().enumerate() {
                    writeln!(w, "{},{r},{d}", row.n)?;
                }
            }
            Ok(())
        })
        .at(Stage::Io)?;
    }
    if out.is_some() {
        println!("slope over the largest half of the sizes: {}", result.slope_upper_half);
    }
    Ok(())
}

fn cmd_nn(args: &NnArgs, seed: u64, out: Option<&Path>) -> StageResult<()> {
    let arch = architecture(&args.net).at(Stage::Config)?;
    let mut spec = NnSpec::new(arch, args.n, seed);
    spec.l2_coeff = args.net.l2;
    spec.weight_bound = args.net.weight_bound;
    spec.graph = resolve_graph(&args.graph, spec.arch.n_params(), GraphMethod::Knn);
    let nn = run_nn(&spec)?;

    let mut config = Map::new();
    config.insert("command".into(), json!("nn"));
    config.insert("seed".into(), json!(seed));
    config.insert("n".into(), json!(args.n));
    config.insert("dim".into(), json!(spec.arch.n_params()));
    net_config(&mut config, &spec.arch, spec.l2_coeff, spec.weight_bound);
    graph_config(&mut config, &spec.graph);
    let config = Value::Object(config);
    let mut report = serde_json::to_value(&nn.report).at(Stage::Io)?;
    report["death_fraction"] = json!(nn.report.death_fraction());

    write_edges(&args.graph, &nn.run.graph, &config)?;
    with_sink(out, |w| {
        io::write_diagram_json_with_report(w, &nn.run.diagram, Some(&config), Some(&report))
    })
    .at(Stage::Io)?;
    if let Some(path) = &args.pairs_out {
        let pairs = minima_saddle_pairs(&nn.run.diagram, &nn.run.cloud).at(Stage::Barcode)?;
        let dim = nn.run.cloud.dim();
        with_sink(Some(path), |w| io::write_pairs_csv(w, &pairs, dim, Some(&config))).at(Stage::Io)?;
    }
    eprintln!(
        "max {} min {} highest finite death {:?} ({} finite bars)",
        nn.report.max_value, nn.report.min_value, nn.report.highest_finite_death, nn.report.n_finite_bars
    );
    Ok(())
}
