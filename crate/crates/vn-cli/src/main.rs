//! `vn`: batch front end for exact computation in the Higman-Thompson
//! groups. Exit codes: 0 success or certificate, 1 input error, 2
//! undecided or budget exhausted.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use vn::element::TreePair;
use vn::parse;
use vn::revealing::{classify_leaves, dynamics, to_revealing, LeafKind};
use vn::tits::{
    decide, harmonic_estimate, orbit_closure, Certificate, DecideConfig, HarmonicParams, Subgroup,
};
use vn::vbar::phi;
use vn::words::{
    c_class, c_word, cooper_check, CooperOutcome, FreeAutomorphism, Gen, Word,
};

#[derive(Parser)]
#[command(name = "vn", version, about = "Exact computation in the Higman-Thompson groups V_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose elements left to right (the first argument acts first).
    Compose { elements: Vec<String> },
    /// Invert an element.
    Inverse { element: String },
    /// Print the reduced tree pair diagram.
    Reduce { element: String },
    /// Compare two elements; prints EQUAL or DISTINCT.
    Equal { left: String, right: String },
    /// Apply an element to a point `pre(period)`.
    Apply { element: String, point: String },
    /// Enumerate the orbit of a point under a generator file.
    Orbit {
        #[command(flatten)]
        input: GroupInput,
        point: String,
        /// Give up once the orbit exceeds this size.
        #[arg(long, default_value_t = 4096)]
        budget: usize,
    },
    /// Compute a revealing pair and classify its leaves.
    Reveal { element: String },
    /// Print the attracting/repelling periodic orbits and the U/V split.
    Dynamics { element: String },
    /// Apply the doubling embedding to a signed binary element.
    Phi { element: String },
    /// Run the finite-orbit / free-subgroup decision procedure.
    Decide(DecideArgs),
    /// Compute c(w) on the genus-g surface.
    Cword {
        #[arg(long)]
        genus: u32,
        #[arg(short = 'w', long)]
        word: String,
        /// Maximize over the conjugacy class instead of the single word.
        #[arg(long)]
        class: bool,
    },
    /// Exhaustively check co(f(w), f(w')) <= Lambda(f)^2 on short pairs.
    #[command(name = "cooper-check")]
    CooperCheck {
        /// Forward images, e.g. "a0 = a0 a1 ; a1 = a1".
        #[arg(long)]
        map: String,
        /// Images under the inverse automorphism, same syntax.
        #[arg(long)]
        inverse: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Monte-Carlo estimate of the averaged random-walk measure.
    Harmonic {
        #[command(flatten)]
        input: GroupInput,
        /// Start point of the walk.
        point: String,
        /// Comma-separated positive weights: one per generator and inverse,
        /// in the order g0, g0^-1, g1, g1^-1, ... Defaults to uniform.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        walk: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct GroupInput {
    /// Generator file: one element per line, `#` comments.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    input: GroupInput,
    /// Maximum generator-word length searched.
    #[arg(long, default_value_t = 6)]
    budget: usize,
    #[arg(long, default_value_t = 4096)]
    orbit_budget: usize,
    #[arg(long, default_value_t = 64)]
    m_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the certificate as JSON.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Replay a stored certificate instead of searching.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Re-verify the certificate (stored or fresh) and fail loudly on any
    /// mismatch.
    #[arg(long)]
    verify: bool,
}

fn load_group(input: &GroupInput) -> Result<Subgroup> {
    let text = std::fs::read_to_string(&input.input)
        .with_context(|| format!("reading {}", input.input.display()))?;
    let gens = parse::parse_group(&text).map_err(|e| anyhow!("{e}"))?;
    Subgroup::new(gens).map_err(|e| anyhow!("{e}"))
}

fn parse_elem(s: &str) -> Result<TreePair> {
    parse::parse_element(s).map_err(|e| anyhow!("{e}"))
}

fn parse_word_arg(s: &str) -> Result<Word> {
    parse::parse_word(s).map_err(|e| anyhow!("{e}"))
}

/// "a0 = a0 a1 ; a1 = a1" -> generator-to-word map.
fn parse_auto_map(s: &str) -> Result<BTreeMap<Gen, Word>> {
    let mut map = BTreeMap::new();
    for entry in s.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (lhs, rhs) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("expected `gen = word`, got `{entry}`"))?;
        let gen_word = parse_word_arg(lhs.trim())?;
        let [letter] = gen_word.letters() else {
            bail!("left side of `{entry}` must be a single generator");
        };
        if letter.exp != 1 {
            bail!("left side of `{entry}` must be a positive generator");
        }
        map.insert(letter.gen.clone(), parse_word_arg(rhs.trim())?);
    }
    Ok(map)
}

fn print_certificate(cert: &Certificate) {
    match cert {
        Certificate::FiniteOrbit(c) => {
            let orbit: Vec<String> = c.orbit.iter().map(|p| p.to_string()).collect();
            println!("FINITE-ORBIT point={} orbit=[{}]", c.point, orbit.join(", "));
        }
        Certificate::FreeSubgroup(c) => {
            println!(
                "FREE u={} v={} m={} epsilon=n^-{}",
                c.u_word, c.v_word, c.m, c.epsilon_k
            );
            println!("X = {}", c.x);
            println!("U+ = {}", c.u_plus);
            println!("U- = {}", c.u_minus);
            println!("V+ = {}", c.v_plus);
            println!("V- = {}", c.v_minus);
            for inc in &c.inclusions {
                println!("CHECK ({})({}) in {}", inc.word, inc.source, inc.target);
            }
        }
        Certificate::Undecided {
            word_budget,
            orbit_budget,
        } => {
            println!("UNDECIDED word_budget={word_budget} orbit_budget={orbit_budget}");
        }
    }
}

fn run_decide(args: &DecideArgs) -> Result<u8> {
    let group = load_group(&args.input)?;
    let cert = if let Some(path) = &args.cert {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str::<Certificate>(&text).context("parsing certificate JSON")?
    } else {
        let cfg = DecideConfig {
            word_budget: args.budget,
            orbit_budget: args.orbit_budget,
            m_cap: args.m_cap,
            seed: args.seed,
            ..DecideConfig::default()
        };
        decide(&group, &cfg).map_err(|e| anyhow!("{e}"))?
    };
    print_certificate(&cert);
    if let Some(path) = &args.emit {
        std::fs::write(path, serde_json::to_string_pretty(&cert)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let undecided = matches!(cert, Certificate::Undecided { .. });
    if args.verify && !undecided {
        cert.verify(&group)
            .map_err(|e| anyhow!("certificate verification failed: {e}"))?;
        println!("VERIFIED");
    }
    Ok(if undecided { 2 } else { 0 })
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Compose { elements } => {
            if elements.is_empty() {
                bail!("compose needs at least one element");
            }
            let mut acc = parse_elem(&elements[0])?;
            for s in &elements[1..] {
                acc = acc
                    .compose(&parse_elem(s)?)
                    .map_err(|e| anyhow!("{e}"))?
                    .reduce()
                    .into_inner();
            }
            println!("{}", acc.reduce().as_pair());
            Ok(0)
        }
        Command::Inverse { element } => {
            println!("{}", parse_elem(element)?.inverse().reduce().as_pair());
            Ok(0)
        }
        Command::Reduce { element } => {
            println!("{}", parse_elem(element)?.reduce().as_pair());
            Ok(0)
        }
        Command::Equal { left, right } => {
            let l = parse_elem(left)?;
            let r = parse_elem(right)?;
            let eq = l.equal(&r).map_err(|e| anyhow!("{e}"))?;
            println!("{}", if eq { "EQUAL" } else { "DISTINCT" });
            Ok(0)
        }
        Command::Apply { element, point } => {
            let f = parse_elem(element)?;
            let p = parse::parse_point(point, f.arity()).map_err(|e| anyhow!("{e}"))?;
            println!("{}", f.apply(&p).map_err(|e| anyhow!("{e}"))?);
            Ok(0)
        }
        Command::Orbit {
            input,
            point,
            budget,
        } => {
            let group = load_group(input)?;
            let p = parse::parse_point(point, group.arity()).map_err(|e| anyhow!("{e}"))?;
            match orbit_closure(&group, &p, *budget).map_err(|e| anyhow!("{e}"))? {
                Some(orbit) => {
                    for q in &orbit {
                        println!("{q}");
                    }
                    println!("SIZE {}", orbit.len());
                    Ok(0)
                }
                None => {
                    println!("EXHAUSTED budget={budget}");
                    Ok(2)
                }
            }
        }
        Command::Reveal { element } => {
            let f = parse_elem(element)?;
            let rp = to_revealing(&f, vn::revealing::default_cap(&f)).map_err(|e| anyhow!("{e}"))?;
            println!("{}", rp.base());
            let roots = |rs: &[vn::cantor::Address]| {
                rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
            };
            println!("X-ROOTS [{}]", roots(rp.x_roots()));
            println!("Y-ROOTS [{}]", roots(rp.y_roots()));
            for class in classify_leaves(&rp).map_err(|e| anyhow!("{e}"))? {
                let kind = match &class.kind {
                    LeafKind::NeutralPeriodic { period } => format!("NEUTRAL period={period}"),
                    LeafKind::Attractor { root, s, r } => {
                        format!("ATTRACTOR root={root} s={s} r={r}")
                    }
                    LeafKind::Repeller { root, s, r } => {
                        format!("REPELLER root={root} s={s} r={r}")
                    }
                    LeafKind::Transient { source, target } => {
                        format!("TRANSIENT source={source} target={target}")
                    }
                };
                println!("LEAF {} {kind}", class.leaf);
            }
            Ok(0)
        }
        Command::Dynamics { element } => {
            let f = parse_elem(element)?;
            let d = dynamics(&f).map_err(|e| anyhow!("{e}"))?;
            for (p, s) in &d.att {
                println!("ATT {p} period={s}");
            }
            for (p, r) in &d.rep {
                println!("REP {p} period={r}");
            }
            println!("U = {}", d.u);
            println!("V = {}", d.v);
            Ok(0)
        }
        Command::Phi { element } => {
            let f = parse::parse_signed_element(element).map_err(|e| anyhow!("{e}"))?;
            println!("{}", phi(&f).reduce().as_pair());
            Ok(0)
        }
        Command::Decide(args) => run_decide(args),
        Command::Cword { genus, word, class } => {
            let w = parse_word_arg(word)?;
            let c = if *class {
                c_class(&w, *genus)
            } else {
                c_word(&w, *genus)
            }
            .map_err(|e| anyhow!("{e}"))?;
            println!("{c}");
            Ok(0)
        }
        Command::CooperCheck {
            map,
            inverse,
            max_len,
        } => {
            let auto = FreeAutomorphism::new(parse_auto_map(map)?, parse_auto_map(inverse)?)
                .map_err(|e| anyhow!("{e}"))?;
            match cooper_check(&auto, *max_len).map_err(|e| anyhow!("{e}"))? {
                CooperOutcome::Pass {
                    bound,
                    max_observed,
                } => {
                    println!("PASS bound={bound} max_observed={max_observed}");
                    Ok(0)
                }
                CooperOutcome::Counterexample { w, w2, observed } => {
                    println!("COUNTEREXAMPLE w={w} w'={w2} co={observed}");
                    Ok(0)
                }
            }
        }
        Command::Harmonic {
            input,
            point,
            weights,
            samples,
            walk,
            depth,
            seed,
        } => {
            let group = load_group(input)?;
            let p = parse::parse_point(point, group.arity()).map_err(|e| anyhow!("{e}"))?;
            let w = match weights {
                Some(s) => s
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().context("parsing weight"))
                    .collect::<Result<Vec<f64>>>()?,
                None => vec![1.0; 2 * group.generators().len()],
            };
            let params = HarmonicParams {
                walk_length: *walk,
                samples: *samples,
                cell_depth: *depth,
                seed: *seed,
            };
            let cells =
                harmonic_estimate(&group, &w, &[p], &params).map_err(|e| anyhow!("{e}"))?;
            for (cell, mass) in cells {
                let addrs: Vec<String> = cell.iter().map(|a| a.to_string()).collect();
                println!("{} {mass:.4}", addrs.join(","));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
