//! `kgain`: profile analysis for sealed-bid division and the collusion
//! side-payment game, reported as structured JSON or human tables.

mod rational_text;
mod report;
mod table;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kgain::attitude::{ladder, LadderKind};
use kgain::coalitions::{analyze, form_coalition, FormationCriterion};
use kgain::gain_game::{Coalition, GainGame};
use kgain::identities::identity_sums;
use kgain::knaster::allocate;
use kgain::shapley::{
    shapley_bruteforce_capped, shapley_closed_form, shapley_fast, ShapleyResult,
    DEFAULT_ORACLE_CAP,
};
use kgain::{ExactGame, Rational, Scalar};

use rational_text::{parse_rational, Quantity};
use report::{
    AgentRef, AllocationPayload, AllocationRow, BoundsPayload, CoalitionsPayload,
    FormationPayload, FormationStepPayload, IdentitiesPayload, IdentityFailure, IncrementRow,
    InputAgent, OracleCheck, PatternReport, PatternRow, ProfileContext, ProfileReport,
    ShapleyPayload, ShapleyRow, SizeRowPayload, VerifyReport, WorthPayload,
};

#[derive(Parser)]
#[command(
    name = "kgain",
    version,
    about = "Sealed-bid division of one object: allocations, collusion gains, \
             Shapley values, and coalition analysis over exact rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divide the object: equal shares, surplus split, and side payments
    Allocate {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Worth of one coalition in the side-payment game
    Worth {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Comma-separated agent labels forming the coalition
        #[arg(long, value_name = "LABELS")]
        members: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Shapley value of every agent in the side-payment game
    Shapley {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Evaluation strategy; all three agree exactly
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Re-derive the values by exhaustive enumeration and compare
        #[arg(long)]
        check: bool,
        /// Largest group size the exhaustive enumeration accepts
        #[arg(long, value_name = "N", default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Which positions are averse to collusion, for each group size
    Pattern {
        /// Largest group size in the grid
        #[arg(long, value_name = "K", default_value_t = 15)]
        max_n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best coalition per size, optimal sizes, bounds, and greedy formation
    Coalitions {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Admission rule for the greedy formation trace
        #[arg(long, value_enum, default_value_t = CriterionArg::Total)]
        criterion: CriterionArg,
        /// Nonnegative tolerance the admission rule applies
        #[arg(long, value_name = "R", default_value = "0", allow_hyphen_values = true)]
        threshold: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recompute the summation identities behind the closed form
    Verify {
        /// Check the two binomial summation identities (the only check, on
        /// by default)
        #[arg(long, default_value_t = true)]
        identities: bool,
        /// Largest j and t to sweep
        #[arg(long, value_name = "K", default_value_t = 30)]
        max: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct ProfileArgs {
    /// Valuations as a comma-separated list (integers, fractions, decimals),
    /// agents labeled 1..n by input position
    #[arg(
        long,
        value_name = "CSV",
        allow_hyphen_values = true,
        conflicts_with = "input",
        required_unless_present = "input"
    )]
    values: Option<String>,
    /// Path of a JSON document {"agents": [{"label", "valuation"}, ..]},
    /// or - for standard input
    #[arg(long, value_name = "PATH")]
    input: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Report shape on standard output
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Decimal places in the fixed-point renderings
    #[arg(long, value_name = "D", default_value_t = 6)]
    precision: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Closed,
    Fast,
    Bruteforce,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Total,
    #[value(name = "percapita")]
    PerCapita,
}

/// A failed run: machine-readable kind and message, plus the exit code.
struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            kind: "invalid-input",
            message: message.into(),
            code: 1,
        }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure {
            kind: "invariant-violation",
            message: message.into(),
            code: 2,
        }
    }

    fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message }
        })
        .to_string()
    }
}

impl From<kgain::Error> for Failure {
    fn from(error: kgain::Error) -> Self {
        Failure::input(error.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = match error.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Allocate { profile, output } => cmd_allocate(&profile, &output),
        Command::Worth {
            profile,
            members,
            output,
        } => cmd_worth(&profile, &members, &output),
        Command::Shapley {
            profile,
            method,
            check,
            oracle_cap,
            output,
        } => cmd_shapley(&profile, method, check, oracle_cap, &output),
        Command::Pattern { max_n, output } => cmd_pattern(max_n, &output),
        Command::Coalitions {
            profile,
            criterion,
            threshold,
            output,
        } => cmd_coalitions(&profile, criterion, &threshold, &output),
        Command::Verify {
            identities,
            max,
            output,
        } => cmd_verify(identities, max, &output),
    }
}

fn load_profile(args: &ProfileArgs) -> Result<ProfileContext, Failure> {
    let agents: Vec<InputAgent> = if let Some(csv) = &args.values {
        report::parse_values_flag(csv).map_err(Failure::input)?
    } else {
        let path = args.input.as_deref().expect("clap requires one source");
        let text = if path == "-" {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| Failure::input(format!("cannot read standard input: {e}")))?;
            buffer
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?
        };
        report::parse_document(&text).map_err(Failure::input)?
    };
    Ok(ProfileContext::new(agents)?)
}

fn check_precision(output: &OutputArgs) -> Result<usize, Failure> {
    if output.precision > 50 {
        return Err(Failure::input(format!(
            "precision is capped at 50 decimal places, got {}",
            output.precision
        )));
    }
    Ok(output.precision)
}

fn render<P: Serialize>(
    output: &OutputArgs,
    report: &P,
    table: impl FnOnce(&P) -> String,
) -> Result<String, Failure> {
    match output.format {
        Format::Json => {
            Ok(serde_json::to_string_pretty(report).expect("reports serialize cleanly"))
        }
        Format::Table => Ok(table(report).trim_end().to_string()),
    }
}

fn agent_ref(ctx: &ProfileContext, position: usize) -> AgentRef {
    AgentRef {
        position,
        label: ctx.label_of_position(position).to_owned(),
    }
}

fn cmd_allocate(profile: &ProfileArgs, output: &OutputArgs) -> Result<String, Failure> {
    let precision = check_precision(output)?;
    let ctx = load_profile(profile)?;
    let outcome = allocate(&ctx.profile);
    let rows = (1..=ctx.n())
        .map(|i| AllocationRow {
            position: i,
            label: ctx.label_of_position(i).to_owned(),
            valuation: Quantity::of(ctx.profile.value(i), precision),
            initial_share: Quantity::of(&outcome.initial_shares[i - 1], precision),
            adjusted_share: Quantity::of(&outcome.adjusted_shares[i - 1], precision),
            compensation: Quantity::of(&outcome.compensations[i - 1], precision),
        })
        .collect();
    let report = ProfileReport {
        command: "allocate",
        n: ctx.n(),
        agents: ctx.echo(precision),
        result: AllocationPayload {
            winner: agent_ref(&ctx, outcome.winner),
            surplus: Quantity::of(&outcome.surplus, precision),
            rows,
        },
    };
    render(output, &report, table::allocation)
}

fn cmd_worth(
    profile: &ProfileArgs,
    members: &str,
    output: &OutputArgs,
) -> Result<String, Failure> {
    let precision = check_precision(output)?;
    let ctx = load_profile(profile)?;
    let positions = members
        .split(',')
        .map(|token| {
            let label = token.trim();
            ctx.position_of_label(label)
                .ok_or_else(|| Failure::input(format!("no agent is labeled {label:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let coalition = Coalition::new(positions)?;
    let game = ExactGame::new(ctx.profile.clone());
    let worth = game.worth(&coalition)?;
    let per_capita = &worth / Rational::from_int(coalition.len() as i64);
    let report = ProfileReport {
        command: "worth",
        n: ctx.n(),
        agents: ctx.echo(precision),
        result: WorthPayload {
            members: coalition.members().iter().map(|&i| agent_ref(&ctx, i)).collect(),
            size: coalition.len(),
            worth: Quantity::of(&worth, precision),
            per_capita: Quantity::of(&per_capita, precision),
        },
    };
    render(output, &report, table::worth)
}

fn cmd_shapley(
    profile: &ProfileArgs,
    method: Method,
    check: bool,
    oracle_cap: usize,
    output: &OutputArgs,
) -> Result<String, Failure> {
    let precision = check_precision(output)?;
    let ctx = load_profile(profile)?;
    let game = GainGame::new(ctx.profile.clone());
    let (method_name, result): (&'static str, ShapleyResult<Rational>) = match method {
        Method::Closed => ("closed", shapley_closed_form(&game)),
        Method::Fast => ("fast", shapley_fast(&game)),
        Method::Bruteforce => ("bruteforce", shapley_bruteforce_capped(&game, oracle_cap)?),
    };
    let mut oracle_check = OracleCheck {
        requested: check,
        ran: false,
        cap: oracle_cap,
        matches: None,
    };
    if check {
        match shapley_bruteforce_capped(&game, oracle_cap) {
            Ok(oracle) => {
                let matches = oracle == shapley_closed_form(&game) && oracle == result;
                oracle_check.ran = true;
                oracle_check.matches = Some(matches);
                if !matches {
                    return Err(Failure::invariant(
                        "exhaustive enumeration disagrees with the closed form",
                    ));
                }
            }
            Err(kgain::Error::OracleTooLarge { .. }) => {}
            Err(error) => return Err(error.into()),
        }
    }
    let values = (1..=ctx.n())
        .map(|i| ShapleyRow {
            position: i,
            label: ctx.label_of_position(i).to_owned(),
            phi: Quantity::of(result.value(i), precision),
        })
        .collect();
    let report = ProfileReport {
        command: "shapley",
        n: ctx.n(),
        agents: ctx.echo(precision),
        result: ShapleyPayload {
            method: method_name,
            values,
            oracle_check,
        },
    };
    render(output, &report, table::shapley)
}

fn cmd_pattern(max_n: usize, output: &OutputArgs) -> Result<String, Failure> {
    check_precision(output)?;
    let rows = ladder(max_n)?
        .into_iter()
        .map(|entry| PatternRow {
            n: entry.n,
            kind: match entry.kind {
                LadderKind::TwoWeak => "two-weak",
                LadderKind::OneStrong => "one-strong",
            },
            positions: entry.positions,
        })
        .collect();
    let report = PatternReport {
        command: "pattern",
        max_n,
        rows,
    };
    render(output, &report, table::pattern)
}

fn cmd_coalitions(
    profile: &ProfileArgs,
    criterion: CriterionArg,
    threshold: &str,
    output: &OutputArgs,
) -> Result<String, Failure> {
    let precision = check_precision(output)?;
    let ctx = load_profile(profile)?;
    let game = ExactGame::new(ctx.profile.clone());
    let analysis = analyze(&game)?;
    let threshold = parse_rational(threshold)
        .map_err(|e| Failure::input(format!("threshold: {e}")))?;
    let (criterion_name, criterion) = match criterion {
        CriterionArg::Total => ("total", FormationCriterion::Total),
        CriterionArg::PerCapita => ("percapita", FormationCriterion::PerCapita),
    };
    let trace = form_coalition(&game, criterion, threshold.clone())?;

    let sizes = analysis
        .per_size
        .iter()
        .map(|row| SizeRowPayload {
            size: row.size,
            members: row.coalition.members().iter().map(|&i| agent_ref(&ctx, i)).collect(),
            worth: Quantity::of(&row.worth, precision),
            per_capita: Quantity::of(&row.per_capita, precision),
        })
        .collect();
    let increments = analysis
        .deltas
        .iter()
        .zip(&analysis.small_deltas)
        .enumerate()
        .map(|(index, (total, per_capita))| IncrementRow {
            size: index + 2,
            total: Quantity::of(total, precision),
            per_capita: Quantity::of(per_capita, precision),
        })
        .collect();
    let report = ProfileReport {
        command: "coalitions",
        n: ctx.n(),
        agents: ctx.echo(precision),
        result: CoalitionsPayload {
            sizes,
            increments,
            s_star: analysis.s_star,
            s_double_star: analysis.s_double_star,
            bounds: analysis.bounds.map(|b| BoundsPayload {
                order_ok: b.order_ok,
                s_star_ok: b.s_star_ok,
                s_double_star_ok: b.s_double_star_ok,
                sharper_even: b.sharper_even,
                sharper_tie: b.sharper_tie,
            }),
            formation: FormationPayload {
                criterion: criterion_name,
                threshold: Quantity::of(&threshold, precision),
                steps: trace
                    .steps
                    .iter()
                    .map(|step| FormationStepPayload {
                        agent: agent_ref(&ctx, step.agent),
                        increment: Quantity::of(&step.increment, precision),
                        accepted: step.accepted,
                    })
                    .collect(),
                final_members: trace
                    .final_coalition
                    .members()
                    .iter()
                    .map(|&i| agent_ref(&ctx, i))
                    .collect(),
                final_worth: Quantity::of(&trace.final_worth, precision),
            },
        },
    };
    render(output, &report, table::coalitions)
}

fn cmd_verify(identities: bool, max: u64, output: &OutputArgs) -> Result<String, Failure> {
    check_precision(output)?;
    if !identities {
        return Err(Failure::input(
            "nothing to verify: --identities is the only check",
        ));
    }
    if max < 1 {
        return Err(Failure::input("--max must be at least 1"));
    }
    let mut failures = Vec::new();
    for j in 1..=max {
        for t in 1..=max {
            if !identity_sums(j, t)?.holds() {
                failures.push(IdentityFailure { j, t });
            }
        }
    }
    let report = VerifyReport {
        command: "verify",
        identities: IdentitiesPayload {
            max,
            points_checked: max * max,
            all_hold: failures.is_empty(),
            failures,
        },
    };
    if !report.identities.all_hold {
        let rendered = table::verify(&report);
        return Err(Failure::invariant(rendered.trim_end().to_string()));
    }
    render(output, &report, table::verify)
}
