use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use wbrauer::bratteli::{irr_labels, IrrepLabel, Tower};
use wbrauer::combinat::{GtPattern, MixedDiagram, Staircase};
use wbrauer::irreps::{irrep_generator, verify_relations};
use wbrauer::pbt::{build_measurement, simulate_pbt, verify_measurement, InputState, Protocol};
use wbrauer::schur::{SchurLabel, SchurTransform};
use wbrauer::sdp::{reduce_sdp, SdpProblem};
use wbrauer::{Error, Result};

const MAX_SYSTEMS: usize = 10;
const MAX_D: usize = 10;

#[derive(Parser)]
#[command(
    name = "wbrauer",
    version,
    about = "Walled Brauer algebra irreps, mixed Schur transform, SDP reduction and PBT"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone, Copy)]
struct Shape {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    d: usize,
}

#[derive(Args, Clone, Copy)]
struct PbtShape {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    d: usize,
}

#[derive(Subcommand)]
enum Verb {
    /// List irrep labels with dimensions and multiplicities.
    Irreps {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump psi_lambda(sigma_i) in the Gelfand-Tsetlin basis.
    GtMatrix {
        #[command(flatten)]
        shape: Shape,
        /// `((2,1),(2))` or a staircase `2,1,-2`.
        #[arg(long)]
        irrep: String,
        #[arg(long)]
        gen: usize,
        #[arg(long)]
        float: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the defining relations in every irrep.
    Verify {
        #[command(flatten)]
        shape: Shape,
    },
    /// One entry of the mixed Schur transform.
    SchurEntry {
        #[command(flatten)]
        shape: Shape,
        /// Staircases separated by `;`, root first.
        #[arg(long)]
        path: String,
        /// Rows top to bottom separated by `;`.
        #[arg(long)]
        pattern: String,
        /// Letters 0..d-1, as `0,1,2` or `012`.
        #[arg(long)]
        string: String,
    },
    /// Dense mixed Schur transform, one labelled row per line.
    SchurMatrix {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a JSON problem to SDPA sparse format plus a JSON manifest.
    SdpReduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to `<out>.json`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Build the PBT POVM and its dilation and dump them as JSON.
    PbtBuild {
        #[command(flatten)]
        shape: PbtShape,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate PBT with maximally entangled pairs and print the outcomes.
    PbtSimulate {
        #[command(flatten)]
        shape: PbtShape,
        /// Amplitudes such as `0.6,0.8i` (normalized on input).
        #[arg(long, conflicts_with = "seed")]
        state: Option<String>,
        /// Haar-random input from this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ProtocolArg::PrettyGood)]
        protocol: ProtocolArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    PrettyGood,
    ProbabilisticExact,
}

fn check_shape(s: Shape) -> Result<()> {
    if s.d == 0 || s.d > MAX_D {
        return Err(Error::InvalidArgument(format!("d must be in 1..={MAX_D}")));
    }
    if s.p + s.q == 0 || s.p + s.q > MAX_SYSTEMS {
        return Err(Error::InvalidArgument(format!("p + q must be in 1..={MAX_SYSTEMS}")));
    }
    Ok(())
}

fn check_pbt(s: PbtShape) -> Result<()> {
    if s.p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    check_shape(Shape { p: s.p, q: 1, d: s.d })
}

fn parse_label(s: &str, shape: Shape) -> Result<IrrepLabel> {
    let t = s.trim();
    let mixed = if t.starts_with('(') || t.contains('|') {
        MixedDiagram::parse(t, shape.d)?
    } else {
        let st: Staircase = t.parse()?;
        if st.d() != shape.d {
            return Err(Error::InvalidShape(format!("staircase {st} does not have {} entries", shape.d)));
        }
        MixedDiagram::from_staircase(&st)
    };
    Ok(IrrepLabel { shape: mixed, level: shape.p + shape.q })
}

fn parse_string(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("bad string `{s}`"));
    if s.contains(',') {
        s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
    } else {
        s.trim().chars().map(|c| c.to_digit(10).map(|v| v as usize).ok_or_else(bad)).collect()
    }
}

fn parse_state(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .map(|x| x.trim().parse::<Complex64>().map_err(|_| Error::Parse(format!("bad amplitude `{x}`"))))
        .collect()
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.verb {
        Verb::Irreps { shape, out } => {
            check_shape(shape)?;
            let tower = Tower::new(shape.p, shape.q, shape.d)?;
            let labels = irr_labels(shape.p, shape.q, shape.d)?;
            let mut text = String::from("irrep\tstaircase\tdim\tmultiplicity\n");
            let mut total: u128 = 0;
            for l in &labels {
                let dim = tower.path_count(tower.n(), &l.shape);
                total += dim * l.m();
                text.push_str(&format!("{l}\t{}\t{dim}\t{}\n", l.staircase(), l.m()));
            }
            emit(&out, &text)?;
            eprintln!("{} irreps; sum d*m = {total} = {}^{}", labels.len(), shape.d, shape.p + shape.q);
        }
        Verb::GtMatrix { shape, irrep, gen, float: as_float, out } => {
            check_shape(shape)?;
            let label = parse_label(&irrep, shape)?;
            let m = irrep_generator(&label, gen, shape.p, shape.q, shape.d)?;
            let mut text = format!("# irrep {} staircase {} generator {}\n", m.label, label.staircase(), gen);
            text.push_str(&format!("# paths {}\n", m.paths.join(" ")));
            for r in 0..m.paths.len() {
                let row: Vec<String> = if as_float {
                    m.matrix[r].iter().map(|&x| float(x)).collect()
                } else {
                    m.scalar_entries[r].clone()
                };
                text.push_str(&row.join(" "));
                text.push('\n');
            }
            emit(&out, &text)?;
        }
        Verb::Verify { shape } => {
            check_shape(shape)?;
            let report = verify_relations(shape.p, shape.q, shape.d)?;
            for (rel, s) in &report.relations {
                eprintln!(
                    "({rel}) instances {} exact {} failures {} float residual {:e}",
                    s.instances, s.exact_checks, s.exact_failures, s.max_float_residual
                );
            }
            if report.all_ok(1e-12) {
                println!("all relations OK");
            } else {
                println!("relations FAILED");
                return Err(Error::CheckFailed("relation check failed".into()));
            }
        }
        Verb::SchurEntry { shape, path, pattern, string } => {
            check_shape(shape)?;
            let st = SchurTransform::new(shape.p, shape.q, shape.d)?;
            let path = st.tower().parse_path(&path)?;
            let pattern: GtPattern = pattern.parse()?;
            let x = parse_string(&string)?;
            let v = st.entry(&SchurLabel { path, pattern }, &x)?;
            println!("{}", float(v));
        }
        Verb::SchurMatrix { shape, out } => {
            check_shape(shape)?;
            let st = SchurTransform::new(shape.p, shape.q, shape.d)?;
            let u = st.dense()?;
            let n = shape.p + shape.q;
            let cols: Vec<String> = (0..u.ncols())
                .map(|c| {
                    let mut s = String::new();
                    let mut k = c;
                    let mut digits = vec![0; n];
                    for i in (0..n).rev() {
                        digits[i] = k % shape.d;
                        k /= shape.d;
                    }
                    for v in digits {
                        s.push_str(&v.to_string());
                    }
                    s
                })
                .collect();
            let mut text = format!("label,{}\n", cols.join(","));
            for (r, label) in st.row_labels().iter().enumerate() {
                let row: Vec<String> = (0..u.ncols()).map(|c| float(u[(r, c)])).collect();
                text.push_str(&format!("\"{label}\",{}\n", row.join(",")));
            }
            emit(&out, &text)?;
        }
        Verb::SdpReduce { input, out, manifest } => {
            let raw = fs::read_to_string(&input)?;
            let prob: SdpProblem = serde_json::from_str(&raw)?;
            check_shape(Shape { p: prob.p, q: prob.q, d: prob.d })?;
            let red = reduce_sdp(&prob)?;
            let mut f = io::BufWriter::new(fs::File::create(&out)?);
            red.write_sdpa(&mut f)?;
            f.flush()?;
            let mpath = manifest.unwrap_or_else(|| {
                let mut s = out.clone().into_os_string();
                s.push(".json");
                PathBuf::from(s)
            });
            fs::write(&mpath, serde_json::to_string_pretty(&red.manifest())?)?;
            eprintln!(
                "{} blocks, {} variables ({} symmetric), {} constraints",
                red.blocks.len(),
                red.variable_count(),
                red.symmetric_variable_count(),
                red.constraints.len()
            );
        }
        Verb::PbtBuild { shape, out } => {
            check_pbt(shape)?;
            let m = build_measurement(shape.p, shape.d)?;
            let r = verify_measurement(&m)?;
            emit(&out, &serde_json::to_string_pretty(&m.to_json()?)?)?;
            eprintln!(
                "complete {} psd {} pvm {} compress {}",
                r.povm_complete,
                r.povm_psd,
                r.pvm_idempotent && r.pvm_orthogonal,
                r.compress_matches
            );
        }
        Verb::PbtSimulate { shape, state, seed, protocol } => {
            check_pbt(shape)?;
            let input = match (state, seed) {
                (Some(s), _) => InputState::Vector(parse_state(&s)?),
                (None, Some(seed)) => InputState::Random(seed),
                (None, None) => InputState::Random(0),
            };
            let protocol = match protocol {
                ProtocolArg::PrettyGood => Protocol::PrettyGood,
                ProtocolArg::ProbabilisticExact => Protocol::ProbabilisticExact,
            };
            let sim = simulate_pbt(shape.p, shape.d, &input, protocol)?;
            println!("k\tport\tprobability\tfidelity");
            for o in &sim.outcomes {
                let port = o.port.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                let fid = o.fidelity.map(float).unwrap_or_else(|| "-".into());
                println!("{}\t{port}\t{}\t{fid}", o.k, float(o.probability));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
