use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;

use dicke::synth::{prepare_symmetric, synth_for};
use dicke::verify::{audit_lower_bound, dicke_reference, fidelity, simulate_basis, SIM_CAP};
use dicke::{Circuit64, ConnectivityGraph, Topology};

const CSV_HEADER: &str = "topology,n1,n2,k,depth,size,bound,ratio";

#[derive(Parser)]
#[command(name = "dicke", version, about = "Dicke and symmetric state circuit synthesis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a Dicke state unitary (or a symmetric state preparation).
    Synth(SynthArgs),
    /// Simulate a circuit file against the analytic Dicke states.
    Verify(VerifyArgs),
    /// Depth and size table over a parameter range.
    Bench(BenchArgs),
    /// Light-cone lower-bound audit of a circuit file.
    Lightcone(LightconeArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// complete | path | grid N1xN2
    #[arg(long, num_args = 1..=2, default_values = ["complete"])]
    topology: Vec<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Circuit output file; the plan report goes to FILE.plan.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Amplitudes α_0..α_k, one `re im` pair per line.
    #[arg(long, value_name = "AMPFILE")]
    symmetric: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Check every weight ℓ ≤ k instead of ℓ = k only.
    #[arg(long)]
    all_ell: bool,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// complete | path | grid AxB, where A or B may be `N` for the swept value
    #[arg(long, num_args = 1..=2, default_values = ["complete"])]
    topology: Vec<String>,
    /// `lo..hi` (doubling), `a,b,c`, or a single value
    #[arg(long, default_value = "64..4096")]
    n_range: String,
    #[arg(long, default_value = "2..32")]
    k_range: String,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct LightconeArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, num_args = 1..=2, default_values = ["complete"])]
    topology: Vec<String>,
    /// `n,k` of the Dicke state the circuit claims to prepare
    #[arg(long, value_name = "N,K")]
    target_dicke: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verify(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verify(_) => 3,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verify(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<dicke::Error> for Failure {
    fn from(e: dicke::Error) -> Self {
        match e {
            dicke::Error::InvalidParameters(_)
            | dicke::Error::NotNormalized(_)
            | dicke::Error::Parse { .. }
            | dicke::Error::CapExceeded { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Internal(format!("{}: {e}", path.display()))
}

/// Topology words as given on the command line; `N` in grid dims is
/// replaced by `swept`.
#[derive(Debug, Clone, PartialEq)]
enum TopoSpec {
    Complete,
    Path,
    Grid(Dim, Dim),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Dim {
    Fixed(usize),
    Swept,
}

fn parse_topology(words: &[String]) -> Result<TopoSpec, Failure> {
    let joined = words.join(" ");
    let mut it = joined.split_whitespace();
    let kind = it.next().unwrap_or("complete");
    let rest: Vec<&str> = it.collect();
    let bad = || Failure::Usage(format!("unknown topology `{joined}`"));
    match (kind, rest.as_slice()) {
        ("complete", []) => Ok(TopoSpec::Complete),
        ("path", []) => Ok(TopoSpec::Path),
        ("grid", [dims]) => {
            let (a, b) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
            let dim = |s: &str| -> Result<Dim, Failure> {
                if s == "N" || s == "n" {
                    Ok(Dim::Swept)
                } else {
                    s.parse().map(Dim::Fixed).map_err(|_| bad())
                }
            };
            Ok(TopoSpec::Grid(dim(a)?, dim(b)?))
        }
        _ => Err(bad()),
    }
}

/// Builds the graph; `n` is required for complete and path, and fills `N`.
fn graph_for(spec: &TopoSpec, n: Option<usize>) -> Result<ConnectivityGraph, Failure> {
    let need = || n.ok_or_else(|| Failure::Usage("--n is required for this topology".into()));
    let g = match *spec {
        TopoSpec::Complete => ConnectivityGraph::complete(need()?),
        TopoSpec::Path => ConnectivityGraph::path(need()?),
        TopoSpec::Grid(a, b) => {
            let get = |d: Dim| match d {
                Dim::Fixed(v) => Ok(v),
                Dim::Swept => need(),
            };
            let (n1, n2) = (get(a)?, get(b)?);
            if n1 == 0 || n1 > n2 {
                return Err(Failure::Usage(format!("grid needs 1 <= n1 <= n2, got {n1}x{n2}")));
            }
            if let Some(n) = n {
                if !matches!((a, b), (Dim::Swept, _) | (_, Dim::Swept)) && n != n1 * n2 {
                    return Err(Failure::Usage(format!("--n {n} does not match grid {n1}x{n2}")));
                }
            }
            ConnectivityGraph::grid(n1, n2)
        }
    };
    Ok(g)
}

fn check_k(n: usize, k: usize) -> Result<(), Failure> {
    if k == 0 || 2 * k > n {
        return Err(Failure::Usage(format!("need 1 <= k <= n/2, got n={n} k={k}")));
    }
    Ok(())
}

fn read_amplitudes(path: &Path) -> Result<Vec<Complex64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<f64> = line
            .split_whitespace()
            .map(|w| w.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        match parts.as_slice() {
            [re] => out.push(Complex64::new(*re, 0.0)),
            [re, im] => out.push(Complex64::new(*re, *im)),
            _ => return Err(Failure::Usage(format!("{}:{}: expected `re im`", path.display(), i + 1))),
        }
    }
    Ok(out)
}

fn cmd_synth(a: SynthArgs) -> Result<(), Failure> {
    let spec = parse_topology(&a.topology)?;
    let g = graph_for(&spec, a.n)?;
    let n = g.num_vertices;
    check_k(n, a.k)?;
    let (circuit, report) = match &a.symmetric {
        Some(path) => {
            let amps = read_amplitudes(path)?;
            if amps.len() != a.k + 1 {
                return Err(Failure::Usage(format!("expected {} amplitudes, got {}", a.k + 1, amps.len())));
            }
            (prepare_symmetric::<f64>(&g, &amps)?, None)
        }
        None => {
            let (c, plan) = synth_for::<f64>(&g, a.k)?;
            (c, Some(plan.report()))
        }
    };
    let text = circuit.to_text();
    match &a.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| io_err(path, e))?;
            if let Some(r) = report {
                let mut plan_path = path.clone().into_os_string();
                plan_path.push(".plan");
                let plan_path = PathBuf::from(plan_path);
                fs::write(&plan_path, r).map_err(|e| io_err(&plan_path, e))?;
            }
            eprintln!("depth {} size {} cx {}", circuit.depth(), circuit.len(), circuit.cx_count());
        }
        None => {
            print!("{text}");
            if let Some(r) = report {
                eprint!("{r}");
            }
        }
    }
    Ok(())
}

fn load_circuit(path: &Path) -> Result<Circuit64, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Circuit64::from_text(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    check_k(a.n, a.k)?;
    if a.n > SIM_CAP {
        return Err(Failure::Usage(format!("n={} exceeds the simulator cap {SIM_CAP}", a.n)));
    }
    let c = load_circuit(&a.circuit)?;
    if c.num_qubits != a.n {
        return Err(Failure::Usage(format!("circuit has {} qubits, expected {}", c.num_qubits, a.n)));
    }
    let ells: Vec<usize> = if a.all_ell { (0..=a.k).collect() } else { vec![a.k] };
    let mut ok = true;
    for l in ells {
        let out = simulate_basis(&c, (1usize << l) - 1)?;
        let f = fidelity(&out, &dicke_reference(a.n, l)?)?;
        let pass = f >= 1.0 - a.tol;
        ok &= pass;
        println!("ell={l} fidelity={f:.12} {}", if pass { "ok" } else { "FAIL" });
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify("fidelity below tolerance".into()))
    }
}

fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = |_| Failure::Usage(format!("bad range `{s}`"));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(bad)?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(bad)?;
        if lo == 0 {
            return Err(Failure::Usage(format!("bad range `{s}`: lower end must be positive")));
        }
        let mut out = Vec::new();
        let mut v = lo;
        while v <= hi {
            out.push(v);
            v *= 2;
        }
        return Ok(out);
    }
    s.split(',').map(|w| w.trim().parse::<usize>().map_err(bad)).collect()
}

/// Reference depth from the asymptotic bounds, without constants.
fn bound_value(g: &ConnectivityGraph, k: usize) -> f64 {
    let n = g.num_vertices as f64;
    let kf = k as f64;
    let (n1, n2) = match g.topology {
        Topology::Grid { n1, n2 } => (n1, n2),
        _ => (1, g.num_vertices),
    };
    match g.topology {
        Topology::Complete => kf.log2() * (n / kf).log2() + kf,
        _ if k * n1 >= n2 => kf * (n / kf).log2() + n2 as f64,
        _ => n2 as f64,
    }
}

fn topo_name(g: &ConnectivityGraph) -> (&'static str, usize, usize) {
    match g.topology {
        Topology::Complete => ("complete", 1, g.num_vertices),
        Topology::Grid { n1, n2 } => ("grid", n1, n2),
        Topology::Path => ("path", 1, g.num_vertices),
        Topology::Custom => ("custom", 1, g.num_vertices),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let spec = parse_topology(&a.topology)?;
    let ns = parse_range(&a.n_range)?;
    let ks = parse_range(&a.k_range)?;
    let sweeps = !matches!(spec, TopoSpec::Grid(Dim::Fixed(_), Dim::Fixed(_)));
    let mut jobs = Vec::new();
    if sweeps {
        for &n in &ns {
            for &k in &ks {
                jobs.push((graph_for(&spec, Some(n))?, k));
            }
        }
    } else if !ks.is_empty() {
        let g = graph_for(&spec, None)?;
        jobs.extend(ks.iter().map(|&k| (g.clone(), k)));
    }
    jobs.retain(|(g, k)| *k >= 1 && 2 * k <= g.num_vertices);
    jobs.sort_by_key(|(g, k)| (g.num_vertices, *k));
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|(g, k)| -> Result<String, Failure> {
            let (c, _) = synth_for::<f64>(g, *k)?;
            let (name, n1, n2) = topo_name(g);
            let bound = bound_value(g, *k);
            let depth = c.depth();
            Ok(format!("{name},{n1},{n2},{k},{depth},{},{bound:.4},{:.4}", c.len(), depth as f64 / bound))
        })
        .collect::<Result<_, _>>()?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    match &a.csv {
        Some(path) => fs::write(path, out).map_err(|e| io_err(path, e))?,
        None => std::io::stdout().write_all(out.as_bytes()).map_err(|e| Failure::Internal(e.to_string()))?,
    }
    Ok(())
}

fn cmd_lightcone(a: LightconeArgs) -> Result<(), Failure> {
    let spec = parse_topology(&a.topology)?;
    let (n, k) = a
        .target_dicke
        .split_once(',')
        .and_then(|(n, k)| Some((n.trim().parse::<usize>().ok()?, k.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| Failure::Usage(format!("bad --target-dicke `{}`, expected n,k", a.target_dicke)))?;
    let g = graph_for(&spec, Some(n))?;
    if g.num_vertices != n {
        return Err(Failure::Usage(format!("topology has {} qubits, target has {n}", g.num_vertices)));
    }
    check_k(n, k)?;
    let c = load_circuit(&a.circuit)?;
    if c.num_qubits != n {
        return Err(Failure::Usage(format!("circuit has {} qubits, expected {n}", c.num_qubits)));
    }
    let report = audit_lower_bound(&c, &g);
    print!("{}", report.to_text());
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verify("light-cone audit failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Synth(a) => cmd_synth(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Lightcone(a) => cmd_lightcone(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
