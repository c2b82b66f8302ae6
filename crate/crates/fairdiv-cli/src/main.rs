use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fairdiv_cli::bench;
use fairdiv_cli::format::{format_allocation, format_scenario, parse_allocation, parse_scenario};
use fairdiv_cli::report::Report;
use fairdiv_core::allocators::{alg_identical, gamma, gamma_star, AllocatorTrace};
use fairdiv_core::checkers::{
    efx0_sufficient_condition, in_msw_u, is_ef, is_ef1, is_efx, is_efx0, is_po, welfare,
    CheckError, EnvyWitness, PoMode, UnknownReason, Verdict, DEFAULT_ENUMERATION_CAP,
};
use fairdiv_core::generators::{generate, GenSpec};
use fairdiv_core::model::{classify_scenario, Allocation, Scenario, ScenarioClass};
use fairdiv_core::oracle::{enumerate_all, verify_theorems, OracleError};
use fairdiv_core::rational::{format_rational, parse_rational};

/// Exit codes: 0 success, 2 input error, 3 algorithm/scenario-class
/// mismatch, 4 enumeration cap exceeded. clap's own usage errors also
/// exit with 2.
const EXIT_INPUT: u8 = 2;
const EXIT_CLASS: u8 = 3;
const EXIT_CAP: u8 = 4;

const ENUM_CAP_ENV: &str = "FAIRDIV_ENUM_CAP";

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, msg: msg.to_string() }
    }
    fn class(msg: impl ToString) -> Self {
        Failure { code: EXIT_CLASS, msg: msg.to_string() }
    }
    fn cap(msg: impl ToString) -> Self {
        Failure { code: EXIT_CAP, msg: msg.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Exact-arithmetic fair division of indivisible goods: greedy allocators, fairness checkers, and an enumeration oracle"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded random scenario file.
    Gen(GenArgs),
    /// Run an allocator on a scenario and report welfare.
    Allocate(AllocateArgs),
    /// Evaluate fairness and efficiency predicates on an allocation.
    Check(CheckArgs),
    /// Enumerate all allocations: welfare optima, Pareto set, counts.
    Enumerate(EnumerateArgs),
    /// Time the two identical-scenario allocators over a size grid.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Buyer,
    Identical,
    General,
}

impl From<ClassArg> for ScenarioClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Buyer => ScenarioClass::Buyer,
            ClassArg::Identical => ScenarioClass::Identical,
            ClassArg::General => ScenarioClass::General,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Number of agents.
    #[arg(long)]
    n: usize,
    /// Number of resources.
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long, default_value_t = 1)]
    price_min: u64,
    #[arg(long, default_value_t = 1000)]
    price_max: u64,
    /// Probability that an agent values a resource at 0 (buyer class).
    /// Exact rational, e.g. "0.3" or "3/10". Defaults to 3/10 for the
    /// buyer class and 0 otherwise.
    #[arg(long)]
    zero_prob: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output scenario file.
    #[arg(long)]
    out: PathBuf,
    /// Optional comment written at the top of the file.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    /// Greedy: each resource to the poorest of its maximum-value agents.
    Gamma,
    /// Greedy over resources sorted by descending maximum value.
    GammaStar,
    /// Sort shared values descending, assign each to the poorest agent.
    AlgIdentical,
}

impl AlgoArg {
    fn as_str(self) -> &'static str {
        match self {
            AlgoArg::Gamma => "gamma",
            AlgoArg::GammaStar => "gamma-star",
            AlgoArg::AlgIdentical => "alg-identical",
        }
    }
}

#[derive(Args)]
struct AllocateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Output allocation file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print one report line per greedy step.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PoModeArg {
    /// Buyer shortcut when the scenario is buyer-class, else brute force
    /// within the cap.
    Auto,
    Brute,
    Buyer,
    Off,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    allocation: PathBuf,
    #[arg(long, value_enum, default_value_t = PoModeArg::Auto)]
    po_mode: PoModeArg,
    /// Enumerate all allocations to decide Nash-optimum membership.
    #[arg(long)]
    enumerate: bool,
    /// Enumeration cap (number of allocations). Overrides the
    /// FAIRDIV_ENUM_CAP environment variable.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Also print every member of the optimum and Pareto sets.
    #[arg(long)]
    dump: bool,
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Size grid: "8000" (single), "1000,2000" (list), or
    /// "1000:10000:1000" (start:stop:step, inclusive). n = m = size.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 30)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Allocate(args) => cmd_allocate(args),
        Cmd::Check(args) => cmd_check(args),
        Cmd::Enumerate(args) => cmd_enumerate(args),
        Cmd::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_scenario(path: &PathBuf) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn effective_cap(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(ENUM_CAP_ENV) {
        Ok(text) => text
            .parse()
            .map_err(|_| Failure::input(format!("{ENUM_CAP_ENV}={text:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_CAP),
    }
}

fn one_based_list(a: &Allocation) -> String {
    a.one_based()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn agent_set(agents: &[usize]) -> String {
    let inner = agents
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{inner}}}")
}

fn envy_witness(w: &EnvyWitness) -> String {
    match w.good {
        Some(k) => format!("({},{},r_{})", w.envier + 1, w.envied + 1, k + 1),
        None => format!("({},{})", w.envier + 1, w.envied + 1),
    }
}

fn verdict_line<W>(v: &Verdict<W>, witness: impl Fn(&W) -> String) -> String {
    match v {
        Verdict::Pass => "Pass".to_owned(),
        Verdict::Fail(w) => format!("Fail witness={}", witness(w)),
        Verdict::Unknown(reason) => format!("Unknown ({reason})"),
    }
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::NotBuyerScenario => Failure::class(e.to_string()),
        _ => Failure::input(e.to_string()),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::CapExceeded { .. } => Failure::cap(e.to_string()),
        OracleError::MismatchedInput => Failure::input(e.to_string()),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let default_prob = match args.class {
        ClassArg::Buyer => "3/10",
        _ => "0",
    };
    let zero_prob = parse_rational(args.zero_prob.as_deref().unwrap_or(default_prob))
        .map_err(|e| Failure::input(format!("--zero-prob: {e}")))?;
    let spec = GenSpec::new(
        args.n,
        args.m,
        args.class.into(),
        (args.price_min, args.price_max),
        zero_prob,
        args.seed,
    )
    .map_err(Failure::input)?;
    let mut scenario = generate(&spec).map_err(Failure::input)?;
    if let Some(label) = args.label {
        scenario = scenario.with_label(label);
    }
    fs::write(&args.out, format_scenario(&scenario))
        .map_err(|e| Failure::input(format!("{}: {e}", args.out.display())))?;

    let mut report = Report::new();
    report.push("path", args.out.display());
    report.push("class", classify_scenario(&scenario).as_str());
    report.push("agents", scenario.agents());
    report.push("resources", scenario.resources());
    report.push("seed", args.seed);
    print!("{}", report.render());
    Ok(())
}

fn push_trace(report: &mut Report, trace: &AllocatorTrace) {
    for (i, step) in trace.steps.iter().enumerate() {
        let partials = step
            .partials
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",");
        report.push(
            format!("step_{}", i + 1),
            format!(
                "resource=r_{} alpha={} maximizers={} poorest={} chosen={} partials=({})",
                step.resource + 1,
                format_rational(&step.max_value),
                agent_set(&step.maximizers),
                agent_set(&step.poorest),
                step.chosen + 1,
                partials,
            ),
        );
    }
}

fn cmd_allocate(args: AllocateArgs) -> Result<(), Failure> {
    let scenario = read_scenario(&args.scenario)?;
    let (allocation, trace) = match args.algo {
        AlgoArg::Gamma => {
            let (a, t) = gamma(&scenario);
            (a, Some(t))
        }
        AlgoArg::GammaStar => {
            let (a, t) = gamma_star(&scenario);
            (a, Some(t))
        }
        AlgoArg::AlgIdentical => {
            let a = alg_identical(&scenario).map_err(Failure::class)?;
            (a, None)
        }
    };
    let w = welfare(&scenario, &allocation).map_err(check_failure)?;

    let mut report = Report::new();
    report.push("algorithm", args.algo.as_str());
    report.push("class", classify_scenario(&scenario).as_str());
    report.push("allocation", one_based_list(&allocation));
    for (i, u) in w.per_agent.iter().enumerate() {
        report.push(format!("utility_{}", i + 1), format_rational(u));
    }
    report.push("sw_u", format_rational(&w.sw_u));
    report.push("sw_nash", format_rational(&w.sw_nash));
    report.push("max_sw_u", format_rational(&w.max_sw_u));
    if args.trace {
        if let Some(trace) = &trace {
            push_trace(&mut report, trace);
        }
    }
    if let Some(out) = &args.out {
        fs::write(out, format_allocation(&allocation))
            .map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
        report.push("path", out.display());
    }
    print!("{}", report.render());
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), Failure> {
    let scenario = read_scenario(&args.scenario)?;
    let text = fs::read_to_string(&args.allocation)
        .map_err(|e| Failure::input(format!("{}: {e}", args.allocation.display())))?;
    let allocation = parse_allocation(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", args.allocation.display())))?;
    let cap = effective_cap(args.cap)?;
    let class = classify_scenario(&scenario);

    let ef = is_ef(&scenario, &allocation).map_err(check_failure)?;
    let efx0 = is_efx0(&scenario, &allocation).map_err(check_failure)?;
    let efx = is_efx(&scenario, &allocation).map_err(check_failure)?;
    let ef1 = is_ef1(&scenario, &allocation).map_err(check_failure)?;
    let msw_u = in_msw_u(&scenario, &allocation).map_err(check_failure)?;
    let w = welfare(&scenario, &allocation).map_err(check_failure)?;

    let po = match args.po_mode {
        PoModeArg::Off => Verdict::Unknown(UnknownReason::NotEvaluated),
        PoModeArg::Brute => {
            is_po(&scenario, &allocation, PoMode::BruteForce { cap }).map_err(check_failure)?
        }
        PoModeArg::Buyer => {
            is_po(&scenario, &allocation, PoMode::BuyerShortcut).map_err(check_failure)?
        }
        PoModeArg::Auto => {
            let mode = if class.satisfies(ScenarioClass::Buyer) {
                PoMode::BuyerShortcut
            } else {
                PoMode::BruteForce { cap }
            };
            is_po(&scenario, &allocation, mode).map_err(check_failure)?
        }
    };

    let in_msw_nash = if args.enumerate {
        let result = enumerate_all(&scenario, cap).map_err(oracle_failure)?;
        if result.msw_nash_set.contains(&allocation) {
            Verdict::Pass
        } else {
            Verdict::Fail(result.msw_nash_set[0].clone())
        }
    } else {
        Verdict::Unknown(UnknownReason::NotEvaluated)
    };

    let mut report = Report::new();
    report.push("class", class.as_str());
    report.push("agents", scenario.agents());
    report.push("resources", scenario.resources());
    report.push("allocation", one_based_list(&allocation));
    report.push("sw_u", format_rational(&w.sw_u));
    report.push("sw_nash", format_rational(&w.sw_nash));
    report.push("max_sw_u", format_rational(&w.max_sw_u));
    report.push("ef", verdict_line(&ef, envy_witness));
    report.push("efx0", verdict_line(&efx0, envy_witness));
    report.push("efx", verdict_line(&efx, envy_witness));
    report.push("ef1", verdict_line(&ef1, envy_witness));
    report.push("po", verdict_line(&po, |a| format!("({})", one_based_list(a))));
    report.push("in_msw_u", verdict_line(&msw_u, |a| format!("({})", one_based_list(a))));
    report.push(
        "in_msw_nash",
        verdict_line(&in_msw_nash, |a| format!("({})", one_based_list(a))),
    );
    // The sufficient condition is only defined for EFX allocations in
    // buyer scenarios.
    if class.satisfies(ScenarioClass::Buyer) && efx.is_pass() {
        let cond = efx0_sufficient_condition(&scenario, &allocation).map_err(check_failure)?;
        report.push("efx0_sufficient_condition", verdict_line(&cond, envy_witness));
    }
    print!("{}", report.render());
    Ok(())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let scenario = read_scenario(&args.scenario)?;
    let cap = effective_cap(args.cap)?;
    let result = enumerate_all(&scenario, cap).map_err(oracle_failure)?;
    let checks = verify_theorems(&scenario, &result).map_err(oracle_failure)?;

    let mut report = Report::new();
    report.push("class", classify_scenario(&scenario).as_str());
    report.push("agents", result.agents);
    report.push("resources", result.resources);
    report.push("total_allocations", result.counts.total);
    report.push("msw_u_value", format_rational(&result.msw_u_value));
    report.push("msw_u_count", result.msw_u_set.len());
    report.push("msw_nash_value", format_rational(&result.msw_nash_value));
    report.push("msw_nash_count", result.msw_nash_set.len());
    report.push(
        "msw_nash_maximal_support_count",
        result.msw_nash_maximal_support_set.len(),
    );
    report.push("po_count", result.po_set.len());
    report.push("ef_count", result.counts.ef);
    report.push("efx0_count", result.counts.efx0);
    report.push("efx_count", result.counts.efx);
    report.push("ef1_count", result.counts.ef1);
    for check in &checks {
        let value = if check.holds {
            "holds".to_owned()
        } else {
            // A failing structural guarantee is a bug in this tool, not a
            // property of the input; surface it loudly.
            match &check.counterexample {
                Some(a) => format!("FAILS counterexample=({})", one_based_list(a)),
                None => "FAILS".to_owned(),
            }
        };
        report.push(format!("theorem_{}", check.id), value);
    }
    if args.dump {
        for (name, set) in [
            ("msw_u", &result.msw_u_set),
            ("msw_nash", &result.msw_nash_set),
            ("msw_nash_maximal_support", &result.msw_nash_maximal_support_set),
            ("po", &result.po_set),
        ] {
            for (i, a) in set.iter().enumerate() {
                report.push(format!("{name}_{}", i + 1), one_based_list(a));
            }
        }
    }
    print!("{}", report.render());
    Ok(())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::input(format!("--sizes {text:?}: expected SIZE, S1,S2,... or START:STOP:STEP"));
    let sizes: Vec<usize> = if let Some((start, rest)) = text.split_once(':') {
        let (stop, step) = rest.split_once(':').ok_or_else(bad)?;
        let (start, stop, step): (usize, usize, usize) = match
            (start.parse(), stop.parse(), step.parse())
        {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => return Err(bad()),
        };
        if step == 0 || start > stop {
            return Err(bad());
        }
        (start..=stop).step_by(step).collect()
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad());
    }
    Ok(sizes)
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let sizes = parse_sizes(&args.sizes)?;
    if args.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    let records = bench::run(&sizes, args.trials, args.seed);
    println!("{}", bench::BENCH_HEADER);
    for record in &records {
        println!("{}", record.csv_row());
    }
    for algo in ["buyer-identical", "alg-identical"] {
        let linear = bench::fit_records(&records, algo, bench::product_model);
        let sorted = bench::fit_records(&records, algo, bench::sort_model);
        println!(
            "# fit {algo} t=c*n*m: c={:.6e} r_squared={:.4}",
            linear.coefficient, linear.r_squared
        );
        println!(
            "# fit {algo} t=c*(m*log2(m)+n*m): c={:.6e} r_squared={:.4}",
            sorted.coefficient, sorted.r_squared
        );
    }
    // Context only: previously reported means on different hardware.
    // Absolute times are never a target.
    for &(size, buyer, alg) in bench::REFERENCE_MEANS {
        if sizes.contains(&size) {
            println!(
                "# reference n={size} buyer-identical={buyer:.4}s alg-identical={alg:.4}s (prior measurement, different hardware)"
            );
        }
    }
    Ok(())
}
