use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use relhyp_core::graphs::GraphKind;
use relhyp_core::{Group, Report};

mod commands;

#[derive(Parser)]
#[command(name = "relhyp", version, about = "Relative hyperbolicity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Human-readable rendering instead of the machine format.
    #[arg(long, global = true)]
    explain: bool,
}

#[derive(Args, Clone, Debug)]
pub struct Budget {
    #[arg(short = 'R', long, default_value_t = 4)]
    pub radius: usize,
    #[arg(long, default_value_t = 64)]
    pub cap: usize,
    /// Truncation `M` of cyclic peripheral alphabets.
    #[arg(short = 'M', long, default_value_t = 3)]
    pub truncation: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 12)]
    pub area_cap: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Graph {
    Plain,
    Relative,
    Coned,
}

impl Graph {
    pub fn kind(self) -> GraphKind {
        match self {
            Graph::Plain => GraphKind::Plain,
            Graph::Relative => GraphKind::Relative,
            Graph::Coned => GraphKind::Coned,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Summary of a group file.
    Info {
        group: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Canonical form of a word.
    Reduce {
        group: PathBuf,
        word: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Distance between two elements.
    Dist {
        group: PathBuf,
        from: String,
        to: String,
        #[arg(long, value_enum, default_value_t = Graph::Relative)]
        graph: Graph,
        #[command(flatten)]
        budget: Budget,
    },
    /// Geodesics between two elements.
    Geo {
        group: PathBuf,
        from: String,
        to: String,
        #[arg(long, value_enum, default_value_t = Graph::Relative)]
        graph: Graph,
        #[arg(long, default_value_t = 32)]
        max: usize,
        #[command(flatten)]
        budget: Budget,
    },
    #[command(subcommand)]
    Path(PathCmd),
    #[command(subcommand)]
    Subgroup(SubgroupCmd),
    #[command(subcommand)]
    Cond(CondCmd),
    #[command(subcommand)]
    Qc(QcCmd),
    /// Same as `cond fineness`.
    Fineness(FinenessArgs),
}

#[derive(Args)]
pub struct PathArgs {
    pub group: PathBuf,
    /// Dotted edge labels, read from `--start`.
    pub path: String,
    #[arg(long, default_value = "1")]
    pub start: String,
    #[arg(long, value_enum, default_value_t = Graph::Relative)]
    pub graph: Graph,
    #[command(flatten)]
    pub budget: Budget,
}

#[derive(Subcommand)]
enum PathCmd {
    Classify(PathArgs),
    Decompose(PathArgs),
    Pi(PathArgs),
    Lift(PathArgs),
}

#[derive(Args)]
pub struct SubArgs {
    pub group: PathBuf,
    pub subgroup: PathBuf,
    #[command(flatten)]
    pub budget: Budget,
}

#[derive(Subcommand)]
enum SubgroupCmd {
    Fold(SubArgs),
    Contains {
        #[command(flatten)]
        sub: SubArgs,
        element: String,
    },
    Intersect {
        #[command(flatten)]
        sub: SubArgs,
        other: PathBuf,
    },
    /// The families `ℍ_{L,Y}` and `ℍ^r_{L,Y}` for the file's `y`.
    Peripherals(SubArgs),
    ReduceY(SubArgs),
}

#[derive(Args)]
pub struct FinenessArgs {
    pub group: PathBuf,
    #[arg(long)]
    pub edge: String,
    #[arg(short = 'n', default_value_t = 6)]
    pub n: usize,
    #[command(flatten)]
    pub budget: Budget,
}

#[derive(Subcommand)]
enum CondCmd {
    /// Factors meeting `L·y·H·y′⁻¹`.
    B {
        #[command(flatten)]
        sub: SubArgs,
        y: String,
        y2: String,
    },
    Decompose {
        group: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    Fineness(FinenessArgs),
    Embedded {
        group: PathBuf,
        #[arg(long)]
        factor: String,
        #[arg(short = 'n', default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        budget: Budget,
    },
    Bcp {
        group: PathBuf,
        /// `P|Q`, two dotted paths from 1.
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        /// `name=literal` generators of the auxiliary system.
        #[arg(long = "y-gen", required = true)]
        y: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[command(flatten)]
        budget: Budget,
    },
    Delta {
        group: PathBuf,
        #[arg(long, value_enum, default_value_t = Graph::Relative)]
        graph: Graph,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        budget: Budget,
    },
    Area {
        group: PathBuf,
        word: String,
        #[command(flatten)]
        budget: Budget,
    },
    Dehn {
        group: PathBuf,
        #[arg(short = 'n', default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Subcommand)]
enum QcCmd {
    /// Quasiconvexity on the radius ball with the file's `y`.
    Check {
        #[command(flatten)]
        sub: SubArgs,
        /// Check only the first geodesic to each element.
        #[arg(long)]
        first: bool,
    },
    Strong(SubArgs),
    Distortion {
        #[command(flatten)]
        sub: SubArgs,
        /// Peripheral factors contained in the subgroup, used when it
        /// cannot be folded.
        #[arg(long = "inner-factor")]
        inner_factor: Vec<String>,
    },
    Induce(SubArgs),
    Iota(SubArgs),
    TreeCertify(SubArgs),
}

fn load_group(path: &PathBuf) -> anyhow::Result<Group> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Group::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn dispatch(cmd: Command) -> anyhow::Result<Report> {
    use commands as c;
    Ok(match cmd {
        Command::Info { group, budget } => c::info(&load_group(&group)?, &budget),
        Command::Reduce { group, word, budget } => c::reduce(&load_group(&group)?, &word, &budget)?,
        Command::Dist {
            group,
            from,
            to,
            graph,
            budget,
        } => c::dist(&load_group(&group)?, &from, &to, graph, &budget)?,
        Command::Geo {
            group,
            from,
            to,
            graph,
            max,
            budget,
        } => c::geo(&load_group(&group)?, &from, &to, graph, max, &budget)?,
        Command::Path(p) => {
            let (op, a) = match p {
                PathCmd::Classify(a) => ("path-classify", a),
                PathCmd::Decompose(a) => ("path-decompose", a),
                PathCmd::Pi(a) => ("path-pi", a),
                PathCmd::Lift(a) => ("path-lift", a),
            };
            c::path(op, &load_group(&a.group)?, &a)?
        }
        Command::Subgroup(s) => match s {
            SubgroupCmd::Fold(a) => c::fold(&load_group(&a.group)?, &a)?,
            SubgroupCmd::Contains { sub, element } => c::contains(&load_group(&sub.group)?, &sub, &element)?,
            SubgroupCmd::Intersect { sub, other } => c::intersect(&load_group(&sub.group)?, &sub, &other)?,
            SubgroupCmd::Peripherals(a) => c::peripherals(&load_group(&a.group)?, &a)?,
            SubgroupCmd::ReduceY(a) => c::reduce_y(&load_group(&a.group)?, &a)?,
        },
        Command::Cond(cnd) => match cnd {
            CondCmd::B { sub, y, y2 } => c::cond_b(&load_group(&sub.group)?, &sub, &y, &y2)?,
            CondCmd::Decompose { group, budget } => c::cond_decompose(&load_group(&group)?, &budget)?,
            CondCmd::Fineness(a) => c::fineness(&load_group(&a.group)?, &a)?,
            CondCmd::Embedded {
                group,
                factor,
                n,
                budget,
            } => c::embedded(&load_group(&group)?, &factor, n, &budget)?,
            CondCmd::Bcp {
                group,
                pairs,
                y,
                mu,
                c: cc,
                budget,
            } => c::bcp(&load_group(&group)?, &pairs, &y, mu, cc, &budget)?,
            CondCmd::Delta {
                group,
                graph,
                trials,
                budget,
            } => c::delta(&load_group(&group)?, graph, trials, &budget)?,
            CondCmd::Area { group, word, budget } => c::area(&load_group(&group)?, &word, &budget)?,
            CondCmd::Dehn { group, n, budget } => c::dehn(&load_group(&group)?, n, &budget)?,
        },
        Command::Qc(q) => match q {
            QcCmd::Check { sub, first } => c::qc_check(&load_group(&sub.group)?, &sub, first)?,
            QcCmd::Strong(a) => c::qc_strong(&load_group(&a.group)?, &a)?,
            QcCmd::Distortion { sub, inner_factor } => {
                c::qc_distortion(&load_group(&sub.group)?, &sub, &inner_factor)?
            }
            QcCmd::Induce(a) => c::qc_induce(&load_group(&a.group)?, &a)?,
            QcCmd::Iota(a) => c::qc_iota(&load_group(&a.group)?, &a)?,
            QcCmd::TreeCertify(a) => c::qc_tree(&load_group(&a.group)?, &a)?,
        },
        Command::Fineness(a) => c::fineness(&load_group(&a.group)?, &a)?,
    })
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let report = dispatch(cli.command)?;
    let text = if cli.explain {
        report.explain()
    } else {
        report.render()
    };
    match &cli.output {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

pub(crate) fn need_seed(b: &Budget) -> anyhow::Result<u64> {
    match b.seed {
        Some(s) => Ok(s),
        None => bail!("this sampler needs --seed"),
    }
}
