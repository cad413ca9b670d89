use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use banlab_core::delay::{
    delay_annotated_atg, deterministic_run, event_simulation, extended_graph, DelayedNetwork,
    ExtendedConfiguration,
};
use banlab_core::infer::{infer, validate_observed, HypothesisMode, InferenceMethod};
use banlab_core::io::{parse_network_file, parse_observed, truth_tables_json};
use banlab_core::schedule::{count_block_sequential, count_bs_classes, reachable_sets};
use banlab_core::stochastic::{build_alpha_matrix, long_run, Distribution};
use banlab_core::tgraph::{
    attractors, build_atg, build_eff_atg, build_eff_gtg, build_gtg, build_t_delta, build_t_delta_elem,
};
use banlab_core::{Configuration, Network, TransitionGraph, UpdateSchedule};

#[derive(Parser)]
#[command(name = "banlab", version, about = "Boolean automata networks: dynamics, inference and delays")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphChoice {
    Gtg,
    Atg,
    EffGtg,
    EffAtg,
    Tdelta,
    TdeltaElem,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a network file and print it back.
    Validate {
        #[arg(long)]
        net: PathBuf,
    },
    /// Interaction graph.
    Igraph {
        #[arg(long)]
        net: PathBuf,
    },
    /// General transition graph.
    Gtg {
        #[arg(long)]
        net: PathBuf,
        /// Keep only effective transitions, with null loops.
        #[arg(long)]
        effective: bool,
    },
    /// Asynchronous transition graph.
    Atg {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        effective: bool,
    },
    /// Transition graph of a periodic schedule.
    Tdelta {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        schedule: String,
        /// Show every intermediate step instead of whole periods.
        #[arg(long)]
        elementary: bool,
    },
    /// Stable configurations and oscillations of a transition graph.
    Attractors {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphChoice::EffGtg)]
        graph: GraphChoice,
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Markov chain where each automaton updates with probability alpha.
    Markov {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Starting configuration for the long-run analysis (uniform if absent).
        #[arg(long)]
        start: Option<String>,
    },
    /// Infer local transition functions from observed transitions.
    Infer {
        /// Observation file: `src -> dst [W={..}]` lines or JSON.
        #[arg(long)]
        obs: PathBuf,
        /// deterministic, async, elementary or schedule.
        #[arg(long, default_value = "elementary")]
        mode: String,
        #[arg(long)]
        schedule: Option<String>,
        /// Check the observations against this network instead of only inferring.
        #[arg(long)]
        net: Option<PathBuf>,
        /// Observations are assumed complete.
        #[arg(long)]
        complete: bool,
        /// Configurations without observed successor are assumed stable.
        #[arg(long)]
        fixity: bool,
    },
    /// Classify a schedule; with a network, list its reachable sets.
    Schedule {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        net: Option<PathBuf>,
    },
    /// Delay semantics.
    Delays {
        #[arg(long)]
        net: PathBuf,
        /// Fastest-first run from this configuration.
        #[arg(long)]
        run: Option<String>,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        /// Show the graph over configurations [x; f(x)].
        #[arg(long)]
        extended: bool,
        /// Event simulation from protein states X (genes from --genes, default f(X)).
        #[arg(long)]
        simulate: Option<String>,
        /// Gene states G for --simulate.
        #[arg(long)]
        genes: Option<String>,
        #[arg(long, default_value_t = 1000.0)]
        horizon: f64,
    },
    /// Count block-sequential schedules.
    CountBs { n: usize },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<banlab_core::Error> for Failure {
    fn from(e: banlab_core::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Rendered output and whether it reports findings.
struct Output {
    body: String,
    findings: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, findings: false }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_net(path: &Path) -> Result<DelayedNetwork, Failure> {
    Ok(parse_network_file(&read(path)?, &path.display().to_string())?)
}

fn parse_schedule(text: &str, n: usize) -> Result<UpdateSchedule, Failure> {
    let s: UpdateSchedule = text.parse()?;
    s.check_size(n)?;
    Ok(s)
}

fn parse_config(text: &str, n: usize) -> Result<Configuration, Failure> {
    let x: Configuration = text
        .parse()
        .map_err(|e| Failure::usage(format!("invalid configuration '{text}': {e}")))?;
    if x.len() != n {
        return Err(Failure::usage(format!(
            "configuration '{text}' has length {}, the network has {n} automata",
            x.len()
        )));
    }
    Ok(x)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn no_dot(what: &str) -> Failure {
    Failure::usage(format!("--format dot is not available for {what}"))
}

fn render_graph(tg: &TransitionGraph, format: Format) -> String {
    match format {
        Format::Text => tg.to_text(),
        Format::Dot => tg.to_dot(),
        Format::Json => pretty(&tg.to_json()),
    }
}

fn choose_graph(net: &Network, graph: GraphChoice, schedule: Option<&str>) -> Result<TransitionGraph, Failure> {
    let needs = |s: Option<&str>| {
        s.ok_or_else(|| Failure::usage("this graph needs --schedule"))
            .and_then(|s| parse_schedule(s, net.n()))
    };
    Ok(match graph {
        GraphChoice::Gtg => build_gtg(net)?,
        GraphChoice::Atg => build_atg(net)?,
        GraphChoice::EffGtg => build_eff_gtg(net)?,
        GraphChoice::EffAtg => build_eff_atg(net)?,
        GraphChoice::Tdelta => build_t_delta(net, &needs(schedule)?)?,
        GraphChoice::TdeltaElem => build_t_delta_elem(net, &needs(schedule)?)?,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { net } => {
            let d = load_net(net)?;
            let n = d.n();
            match format {
                Format::Dot => Err(no_dot("validate")),
                Format::Text => {
                    let mut body = banlab_core::io::write_network_file(&d);
                    body.push_str(&format!("ok: {n} automata\n"));
                    Ok(Output::ok(body))
                }
                Format::Json => {
                    let up: Vec<Option<f64>> = (0..n).map(|i| d.up(i)).collect();
                    let down: Vec<Option<f64>> = (0..n).map(|i| d.down(i)).collect();
                    let signals: Vec<Value> =
                        d.responses().iter().map(|(&(i, j), v)| json!([i, j, v])).collect();
                    let mut v = truth_tables_json(d.base())?;
                    v["functions"] = json!(d.base().ltfs().iter().map(|e| e.to_string()).collect::<Vec<_>>());
                    v["delay_up"] = json!(up);
                    v["delay_down"] = json!(down);
                    v["delay_signal"] = json!(signals);
                    Ok(Output::ok(pretty(&v)))
                }
            }
        }
        Command::Igraph { net } => {
            let d = load_net(net)?;
            let ig = d.base().interaction_graph()?;
            let body = match format {
                Format::Text => {
                    let mut s = format!("{ig}\n");
                    for (j, i) in ig.arcs() {
                        let w = ig.witness(j, i).expect("arcs have witnesses");
                        s.push_str(&format!("{j} -> {i} (witness {w})\n"));
                    }
                    s
                }
                Format::Dot => ig.to_dot(),
                Format::Json => {
                    let arcs: Vec<Value> = ig
                        .arcs()
                        .into_iter()
                        .map(|(j, i)| json!({ "source": j, "target": i, "witness": ig.witness(j, i) }))
                        .collect();
                    pretty(&json!({ "schema": 1, "n": ig.n, "arcs": arcs }))
                }
            };
            Ok(Output::ok(body))
        }
        Command::Gtg { net, effective } => {
            let d = load_net(net)?;
            let choice = if *effective { GraphChoice::EffGtg } else { GraphChoice::Gtg };
            Ok(Output::ok(render_graph(&choose_graph(d.base(), choice, None)?, format)))
        }
        Command::Atg { net, effective } => {
            let d = load_net(net)?;
            let choice = if *effective { GraphChoice::EffAtg } else { GraphChoice::Atg };
            Ok(Output::ok(render_graph(&choose_graph(d.base(), choice, None)?, format)))
        }
        Command::Tdelta {
            net,
            schedule,
            elementary,
        } => {
            let d = load_net(net)?;
            let choice = if *elementary { GraphChoice::TdeltaElem } else { GraphChoice::Tdelta };
            Ok(Output::ok(render_graph(
                &choose_graph(d.base(), choice, Some(schedule))?,
                format,
            )))
        }
        Command::Attractors { net, graph, schedule } => {
            let d = load_net(net)?;
            let tg = choose_graph(d.base(), *graph, schedule.as_deref())?;
            let report = attractors(&tg);
            let body = match format {
                Format::Text => report.to_string(),
                Format::Dot => tg.to_dot(),
                Format::Json => pretty(&json!({ "schema": 1, "graph": tg.kind, "n": tg.n, "report": report })),
            };
            Ok(Output::ok(body))
        }
        Command::Markov { net, alpha, start } => {
            let d = load_net(net)?;
            let n = d.n();
            let p = build_alpha_matrix(d.base(), *alpha)?;
            let mu = match start {
                Some(s) => Distribution::point(parse_config(s, n)?),
                None => Distribution::uniform(n),
            };
            let lr = long_run(&p, &mu)?;
            let body = match format {
                Format::Dot => return Err(no_dot("markov")),
                Format::Json => {
                    let mut v = p.to_json();
                    v["long_run"] = serde_json::to_value(&lr).expect("reports serialize");
                    pretty(&v)
                }
                Format::Text => {
                    let mut s = format!("alpha = {alpha}\n");
                    for x in Configuration::all(n) {
                        let row: Vec<String> = p.row(x).map(|(y, pr)| format!("{y}:{pr}")).collect();
                        s.push_str(&format!("{x} -> {}\n", row.join(" ")));
                    }
                    s.push_str("long run:\n");
                    for c in &lr.components {
                        let members: Vec<String> = c.members.iter().map(|x| x.to_string()).collect();
                        s.push_str(&format!("  {{{}}} mass {:.6}\n", members.join(", "), c.mass));
                    }
                    if !lr.converged {
                        s.push_str(&format!("  not converged, transient mass {:e}\n", lr.transient_mass));
                    }
                    s
                }
            };
            Ok(Output::ok(body))
        }
        Command::Infer {
            obs,
            mode,
            schedule,
            net,
            complete,
            fixity,
        } => {
            let t = parse_observed(&read(obs)?, &obs.display().to_string())?;
            let method: InferenceMethod = mode.parse()?;
            let sched = schedule.as_deref().map(|s| parse_schedule(s, t.n)).transpose()?;
            let mut hyp = HypothesisMode::for_method(method, sched)?;
            hyp.assume_complete = *complete;
            hyp.fixity = hyp.fixity || *fixity;
            if let Some(path) = net {
                let cand = load_net(path)?;
                let v = validate_observed(&t, cand.base(), &hyp)?;
                let body = match format {
                    Format::Dot => return Err(no_dot("infer")),
                    Format::Text => v.to_string(),
                    Format::Json => pretty(&json!({ "schema": 1, "validation": v })),
                };
                return Ok(Output {
                    body,
                    findings: !v.is_consistent(),
                });
            }
            let report = infer(&t, &hyp)?;
            let body = match format {
                Format::Dot => return Err(no_dot("infer")),
                Format::Text => report.to_string(),
                Format::Json => pretty(&json!({ "schema": 1, "inference": report })),
            };
            Ok(Output {
                body,
                findings: !report.is_consistent(),
            })
        }
        Command::Schedule { schedule, n, net } => {
            let d = net.as_deref().map(load_net).transpose()?;
            let n = match (n, &d) {
                (Some(n), Some(d)) if *n != d.n() => {
                    return Err(Failure::usage(format!("--n {n} disagrees with the network size {}", d.n())))
                }
                (Some(n), _) => *n,
                (None, Some(d)) => d.n(),
                (None, None) => return Err(Failure::usage("schedule needs --n or --net")),
            };
            let s = parse_schedule(schedule, n)?;
            let classes: Vec<String> = s.classify(n)?.iter().map(|c| c.to_string()).collect();
            let view = s.function_view(n);
            let reach = match &d {
                Some(d) if s.is_periodic() => Some(reachable_sets(d.base(), &s, None)?),
                _ => None,
            };
            let body = match format {
                Format::Dot => return Err(no_dot("schedule")),
                Format::Json => pretty(&json!({
                    "schema": 1,
                    "schedule": s,
                    "classes": classes,
                    "function_view": view,
                    "reachable": reach,
                })),
                Format::Text => {
                    let mut out = format!("schedule: {s}\nclasses: {}\n", classes.join(", "));
                    for (i, times) in view.iter().enumerate() {
                        let ts: Vec<String> = times.iter().map(|t| t.to_string()).collect();
                        out.push_str(&format!("delta({i}) = {{{}}}\n", ts.join(",")));
                    }
                    if let Some(r) = &reach {
                        for (t, set) in r.sets.iter().enumerate() {
                            let xs: Vec<String> = set.iter().map(|x| x.to_string()).collect();
                            out.push_str(&format!("X_{t} = {{{}}}\n", xs.join(", ")));
                        }
                        if let Some((t0, q)) = r.tail {
                            out.push_str(&format!("periodic from t0 = {t0} with period {q}\n"));
                        }
                    }
                    out
                }
            };
            Ok(Output::ok(body))
        }
        Command::Delays {
            net,
            run,
            max_steps,
            extended,
            simulate,
            genes,
            horizon,
        } => {
            let d = load_net(net)?;
            let n = d.n();
            if let Some(x) = simulate {
                let x = parse_config(x, n)?;
                let g = match genes {
                    Some(g) => parse_config(g, n)?,
                    None => d.base().evaluate_all(x),
                };
                let trace = event_simulation(&d, ExtendedConfiguration::new(x, g)?, *horizon)?;
                let body = match format {
                    Format::Dot => return Err(no_dot("event simulation")),
                    Format::Text => format!("{trace}\n"),
                    Format::Json => pretty(&trace.to_json()),
                };
                return Ok(Output::ok(body));
            }
            if let Some(x) = run {
                let r = deterministic_run(&d, parse_config(x, n)?, *max_steps)?;
                let body = match format {
                    Format::Dot => return Err(no_dot("delay runs")),
                    Format::Text => format!("{r}\n"),
                    Format::Json => pretty(&json!({ "schema": 1, "run": r })),
                };
                return Ok(Output::ok(body));
            }
            if *extended {
                let g = extended_graph(&d)?;
                let body = match format {
                    Format::Dot => return Err(no_dot("extended graphs")),
                    Format::Text => g.to_text(),
                    Format::Json => pretty(&json!({ "schema": 1, "extended_graph": g })),
                };
                return Ok(Output::ok(body));
            }
            let dg = delay_annotated_atg(&d)?;
            let body = match format {
                Format::Dot => dg.graph.to_dot(),
                Format::Text => dg.to_text(Some(&d)),
                Format::Json => pretty(&dg.to_json()),
            };
            Ok(Output::ok(body))
        }
        Command::CountBs { n } => {
            if *n == 0 {
                return Err(Failure::usage("count-bs needs n >= 1"));
            }
            let bs = count_block_sequential(*n);
            let classes = count_bs_classes(*n);
            let body = match format {
                Format::Dot => return Err(no_dot("count-bs")),
                Format::Json => pretty(&json!({
                    "schema": 1,
                    "n": n,
                    "bs": bs.to_string(),
                    "classes": classes.to_string(),
                })),
                Format::Text if *n == 1 => format!("bs_1 = {bs}, classes = {classes}\n"),
                Format::Text => format!("bs_{n} = {bs}, classes = 2*bs_{} = {classes}\n", n - 1),
            };
            Ok(Output::ok(body))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &out.body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.body);
            }
            if out.findings {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
