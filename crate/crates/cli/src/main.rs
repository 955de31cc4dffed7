use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use flowgap::cutcheck::{check_any, DEFAULT_BRUTE_LIMIT};
use flowgap::cutcover::{seymour_multicut, verify_certificate, wgmv};
use flowgap::facedemands::uncross_all;
use flowgap::format::{
    parse_cutcover, parse_instance, print_certificate, print_flow, print_instance, to_dot,
};
use flowgap::generate::{self, DemandKind, InstanceSpec};
use flowgap::laminar::{approximate, Phase};
use flowgap::pipeline::{approx_sparsest_cut, load_bound, route_with_gap};
use flowgap::planar::FaceInstance;
use flowgap::rational::fmt as rat;
use flowgap::route::{edge_loads, max_concurrent_flow};
use flowgap::Error;

#[derive(Parser)]
#[command(
    name = "flowgap",
    version,
    about = "Planar face multicommodity flow tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance and report its shape.
    Validate { file: PathBuf },
    /// Exact cut condition check with a certificate.
    CheckCut {
        file: PathBuf,
        /// Largest vertex count for central-set enumeration on crossing faces.
        #[arg(long, default_value_t = DEFAULT_BRUTE_LIMIT)]
        brute_limit: usize,
    },
    /// Uncross the demands of every face into a laminar set.
    Uncross { file: PathBuf },
    /// Laminar approximating family of every face.
    Laminar { file: PathBuf },
    /// Route the demands: concurrent flow, or with `--gap` in full within the
    /// scaled capacities.
    Route {
        file: PathBuf,
        #[arg(long)]
        gap: bool,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Write the flow here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Approximate sparsest cut.
    SparsestCut { file: PathBuf },
    /// Multicut for laminar face demands, with its dual certificate.
    Multicut { file: PathBuf },
    /// Primal-dual run on a cut cover instance, with the certificate report.
    Wgmv { file: PathBuf },
    /// Graphviz rendering, with loads from a gap routing if `--loads`.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        loads: bool,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Random instance; the seed defaults to FLOWGAP_SEED.
    Generate {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Separable)]
        kind: Kind,
        #[arg(long, default_value_t = 4)]
        demands: usize,
        #[arg(long, default_value_t = 1)]
        faces: usize,
        /// Capacities from an explicit routing, so the cut condition holds.
        #[arg(long)]
        routable: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Separable,
    General,
    Laminar,
}

/// Outcome of a command that ran: success, or a certified negative answer.
enum Status {
    Ok,
    Certified,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<FaceInstance> {
    parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Validate { file } => {
            let inst = load(&file)?;
            let g = &inst.graph;
            println!("vertices {}", g.n());
            println!("edges {}", g.m());
            println!("faces {}", g.faces().len());
            println!("demands {}", inst.demands.len());
            println!("connected {}", yes(g.is_connected()));
            println!("separable {}", yes(inst.is_separable()));
            let laminar = inst.face_demand_sets().iter().all(|(_, d)| d.is_laminar());
            println!("laminar {}", yes(laminar));
            Ok(Status::Ok)
        }
        Command::CheckCut { file, brute_limit } => {
            let inst = load(&file)?;
            let cert = check_any(&inst, brute_limit)?;
            print!("{}", print_certificate(&cert));
            Ok(if cert.is_violated() {
                Status::Certified
            } else {
                Status::Ok
            })
        }
        Command::Uncross { file } => {
            let inst = load(&file)?;
            let g = &inst.graph;
            for (fi, d) in inst.face_demand_sets() {
                let face = &g.faces()[fi];
                let (out, stats) = uncross_all(&d);
                println!("face {} iterations {}", face.id, stats.iterations);
                for c in out.chords() {
                    println!(
                        "chord {} {} {}",
                        face.vertices[c.a],
                        face.vertices[c.b],
                        rat(&c.weight)
                    );
                }
            }
            Ok(Status::Ok)
        }
        Command::Laminar { file } => {
            let inst = load(&file)?;
            let g = &inst.graph;
            for (fi, d) in inst.face_demand_sets() {
                let face = &g.faces()[fi];
                let fam = approximate(&d)?;
                println!(
                    "face {} members {} alpha-sum {}",
                    face.id,
                    fam.len(),
                    rat(&fam.alpha_sum())
                );
                for m in &fam.members {
                    let level = m.level.map_or("-".to_string(), |l| l.to_string());
                    let phase = if m.phase == Phase::One { 1 } else { 2 };
                    println!("member alpha {} level {level} phase {phase}", rat(&m.alpha));
                    for c in m.set.chords() {
                        println!(
                            "chord {} {} {}",
                            face.vertices[c.a],
                            face.vertices[c.b],
                            rat(&c.weight)
                        );
                    }
                }
            }
            Ok(Status::Ok)
        }
        Command::Route {
            file,
            gap,
            eps,
            out,
        } => {
            let inst = load(&file)?;
            let (flow, report) = if gap {
                let r = match route_with_gap(&inst, eps) {
                    Err(Error::CutViolated(cert)) => {
                        print!("{}", print_certificate(&cert));
                        return Ok(Status::Certified);
                    }
                    other => other?,
                };
                let bound = load_bound(&r.gap_bound, eps);
                let mut s = String::new();
                writeln!(s, "gap-bound {}", rat(&r.gap_bound))?;
                writeln!(
                    s,
                    "max-load-ratio {} ({:.4})",
                    rat(&r.max_load_ratio),
                    flowgap::rational::to_f64(&r.max_load_ratio)
                )?;
                writeln!(s, "load-bound {:.4}", flowgap::rational::to_f64(&bound))?;
                writeln!(s, "within-bound {}", yes(r.max_load_ratio <= bound))?;
                (r.flow, s)
            } else {
                let f = max_concurrent_flow(&inst.graph, &inst.commodities(), eps)?;
                (f, String::new())
            };
            let text = print_flow(&flow);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            print!("{report}");
            Ok(Status::Ok)
        }
        Command::SparsestCut { file } => {
            let inst = load(&file)?;
            let s = approx_sparsest_cut(&inst)?;
            match &s.ratio {
                None => println!("ratio unbounded"),
                Some(r) => {
                    println!(
                        "set {}",
                        s.set
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                    println!("supply {}", rat(&s.supply));
                    println!("demand {}", rat(&s.demand));
                    println!("ratio {}", rat(r));
                }
            }
            println!("factor {}", rat(&s.factor));
            println!("probes {}", s.probes);
            Ok(Status::Ok)
        }
        Command::Multicut { file } => {
            let inst = load(&file)?;
            let mc = seymour_multicut(&inst.graph, &inst.face_demand_sets())?;
            println!(
                "edges {}",
                mc.edges
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!("cost {}", rat(&mc.cost));
            println!("dual-value {}", rat(&mc.dual_value));
            let two = flowgap::rational::int(2) * &mc.dual_value;
            println!("within-twice-dual {}", yes(mc.cost <= two));
            Ok(Status::Ok)
        }
        Command::Wgmv { file } => {
            let text = read(&file)?;
            let inst = parse_cutcover(&text).with_context(|| format!("in {}", file.display()))?;
            let res = match wgmv(&inst) {
                Err(Error::Infeasible) => {
                    println!("infeasible");
                    return Ok(Status::Certified);
                }
                other => other?,
            };
            let rep = verify_certificate(&inst, &res.picked, &res.duals, &res.trace);
            println!(
                "picked {}",
                res.picked
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!("cost {}", rat(&rep.cost));
            println!("dual-value {}", rat(&rep.dual_value));
            for (set, y) in &res.duals {
                let s: Vec<String> = set.iter().map(|v| v.to_string()).collect();
                println!("dual {} {}", rat(y), s.join(" "));
            }
            println!("iterations {}", res.trace.iterations.len());
            println!(
                "dual-feasible {}",
                yes(rep.overpaid.is_empty() && rep.negative_duals == 0)
            );
            println!("feasible {}", yes(rep.feasible));
            println!("within-twice-dual {}", yes(rep.ratio_holds));
            println!(
                "degree-bound {}",
                yes(rep.degrees.iter().all(|d| d.within()))
            );
            println!(
                "certificate {}",
                if rep.is_valid() { "valid" } else { "invalid" }
            );
            Ok(Status::Ok)
        }
        Command::ExportDot { file, loads, eps } => {
            let inst = load(&file)?;
            let l = if loads {
                let r = route_with_gap(&inst, eps)?;
                Some(edge_loads(&inst.graph, &r.flow.paths))
            } else {
                None
            };
            print!("{}", to_dot(&inst, l.as_deref()));
            Ok(Status::Ok)
        }
        Command::Generate {
            n,
            kind,
            demands,
            faces,
            routable,
            seed,
        } => {
            anyhow::ensure!(n >= 3, "need at least 3 vertices");
            let seed = seed.unwrap_or_else(|| generate::seed_from_env(generate::DEFAULT_SEED));
            let kind = match kind {
                Kind::Separable => DemandKind::Separable,
                Kind::General => DemandKind::General,
                Kind::Laminar => DemandKind::Laminar,
            };
            let mut spec = InstanceSpec::new(n, kind);
            spec.demands = demands;
            spec.faces = faces;
            let mut rng = generate::rng(seed);
            let inst = if routable {
                generate::random_routable_instance(&mut rng, &spec, 1)
            } else {
                generate::random_instance(&mut rng, &spec)
            };
            println!("# seed {seed}");
            print!("{}", print_instance(&inst));
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Certified) => ExitCode::from(2),
        Err(e) => {
            if let Some(Error::CutViolated(cert)) = e.downcast_ref::<Error>() {
                print!("{}", print_certificate(cert));
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
