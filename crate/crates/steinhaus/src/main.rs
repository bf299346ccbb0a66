//! Command-line front end: verification, enumeration, search, the
//! heuristic table and the descent, over the file formats defined in
//! the library. Exit codes: 0 valid / found / success, 1 invalid /
//! not found / infeasible, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use steinhaus::csp::{search, SearchBudget, SearchOptions, SearchOutcome, SearchStats};
use steinhaus::descent::{
    descend_trace, is_squared_lattice_distance, random_sphere_rational, Dimension,
    SphereRationalPoint,
};
use steinhaus::heuristic::log_m_p;
use steinhaus::io;
use steinhaus::lattice::{build_w, complement_plane, conic_points, enumerate_lambda};
use steinhaus::linear::{build_system, solve_and_sample, AffineAnsatz};
use steinhaus::partial_map::{pi_table, restrict_map};
use steinhaus::verify::{
    verify_bruteforce, verify_perms, verify_point_set, DistanceWitness, PermWitness, Verdict,
};
use steinhaus::{CubePoint, Error, IntVec3, IsoVector, PartialMap, Prime, RationalPoint};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser)]
#[command(name = "steinhaus", version, about = "Partial Steinhaus sets in dimension 3")]
struct Cli {
    /// Emit a single machine-readable JSON document
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a map file (JSON) against the distance condition
    VerifyMap(VerifyMapArgs),
    /// Verify a point-set file (one point per line, rationals a/b)
    VerifySet(VerifySetArgs),
    /// Print one value table pi for a map, direction and base point
    Pi(PiArgs),
    /// List the isotropic directions Lambda with their d invariants
    Lambda(PrimeArg),
    /// List the projective conic points x^2 + y^2 + z^2 = 0
    Conic(PrimeArg),
    /// List the p + 1 conic representatives W
    W(PrimeArg),
    /// Solve the affine-slope linear system and sample solutions
    SearchLinear(SearchLinearArgs),
    /// Backtracking search for a p-partial Steinhaus function
    SearchCsp(SearchCspArgs),
    /// Evaluate the heuristic count M_p
    Heuristic(HeuristicArgs),
    /// Turn a rational representation of N as a sum of three squares
    /// into an integer one
    Descent(DescentArgs),
    /// Restrict a valid map on X_m to a divisor m' of m
    Restrict(RestrictArgs),
    /// Print or emit the bundled 27-point witness for m = 3
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct VerifyMapArgs {
    /// Map file (JSON)
    file: PathBuf,
    /// Which verifier(s) to run
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Pairwise oracle, plus the permutation test when m is an odd prime
    Auto,
    Bruteforce,
    Perms,
    Both,
}

#[derive(Args)]
struct VerifySetArgs {
    /// Point-set file
    file: PathBuf,
    /// Grid modulus m
    #[arg(long)]
    m: i64,
}

#[derive(Args)]
struct PiArgs {
    /// Map file (JSON); the modulus must be an odd prime
    #[arg(long)]
    map: PathBuf,
    /// Direction lambda as a,b,c
    #[arg(long)]
    lambda: String,
    /// Base point x as a,b,c
    #[arg(long)]
    x: String,
}

#[derive(Args)]
struct PrimeArg {
    /// Odd prime p
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct SearchLinearArgs {
    /// Odd prime p
    #[arg(long)]
    p: u64,
    /// Slope prescription
    #[arg(long, value_enum, default_value_t = SlopeMode::Unit)]
    slopes: SlopeMode,
    /// Seed for random slopes and kernel sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of solutions to sample
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Write the first sampled solution to this map file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SlopeMode {
    /// All slopes 1 (the published p = 3 construction)
    Unit,
    /// Seeded random nonzero slopes
    Random,
}

#[derive(Args)]
struct SearchCspArgs {
    /// Odd prime p
    #[arg(long)]
    p: u64,
    /// Initial (possibly partial) map file
    #[arg(long)]
    initial: Option<PathBuf>,
    /// Node budget
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock budget in seconds
    #[arg(long)]
    time_limit_secs: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker count; 1 is the deterministic sequential mode
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Pin L(0,0,0) = (0,0,0) (symmetry reduction; sound for empty initials)
    #[arg(long)]
    fix_origin: bool,
    /// Restart with a reshuffled value order every this many nodes
    #[arg(long)]
    restart_nodes: Option<u64>,
    /// Write the found map here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeuristicArgs {
    /// A single prime
    #[arg(long, conflicts_with = "range")]
    p: Option<u64>,
    /// An inclusive prime range lo:hi
    #[arg(long)]
    range: Option<String>,
    /// Also print the Stirling residual ln M_p + p^4 - 3.5 p^3 ln p
    #[arg(long)]
    stirling: bool,
}

#[derive(Args)]
struct DescentArgs {
    /// The integer to represent
    #[arg(long)]
    n: u64,
    /// Optional rational start a,b,c,m with (a/m)^2+(b/m)^2+(c/m)^2 = n;
    /// a seeded start is generated when absent
    #[arg(long)]
    point: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RestrictArgs {
    /// Map file (JSON)
    file: PathBuf,
    /// Divisor of the map modulus
    #[arg(long)]
    m_prime: i64,
    /// Write the restricted map here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureArgs {
    /// Write to a file instead of stdout
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Emit the map (JSON) form instead of the point set
    #[arg(long)]
    as_map: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// A JSON document accumulated field by field, printed once at the end.
struct Output {
    json: bool,
    doc: Map<String, Value>,
}

impl Output {
    fn new(json: bool, command: &str) -> Self {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(command));
        Output { json, doc }
    }

    fn field(&mut self, key: &str, value: Value) {
        self.doc.insert(key.into(), value);
    }

    /// Prints `line` in text mode; the field goes into the document
    /// either way when `key` is set.
    fn line(&mut self, line: &str) {
        if !self.json {
            println!("{line}");
        }
    }

    fn finish(self) {
        if self.json {
            println!("{}", serde_json::to_string(&Value::Object(self.doc)).unwrap());
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::VerifyMap(args) => verify_map_cmd(cli.json, args),
        Command::VerifySet(args) => verify_set_cmd(cli.json, args),
        Command::Pi(args) => pi_cmd(cli.json, args),
        Command::Lambda(args) => lambda_cmd(cli.json, args),
        Command::Conic(args) => conic_cmd(cli.json, args),
        Command::W(args) => w_cmd(cli.json, args),
        Command::SearchLinear(args) => search_linear_cmd(cli.json, args),
        Command::SearchCsp(args) => search_csp_cmd(cli.json, args),
        Command::Heuristic(args) => heuristic_cmd(cli.json, args),
        Command::Descent(args) => descent_cmd(cli.json, args),
        Command::Restrict(args) => restrict_cmd(cli.json, args),
        Command::Fixture(args) => fixture_cmd(cli.json, args),
    }
}

fn parse_triple(s: &str) -> Result<IntVec3, Error> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Parse(format!("expected a,b,c with integers, got {s:?}")))?;
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected three components in {s:?}")));
    }
    Ok(IntVec3::new(parts[0], parts[1], parts[2]))
}

fn distance_witness_json(w: &DistanceWitness) -> Value {
    json!({
        "x": w.x.vec().coords(),
        "z": w.z.vec().coords(),
        "squared_distance": w.squared_distance,
    })
}

fn perm_witness_json(w: &PermWitness) -> Value {
    json!({
        "lambda": w.lambda.vec().coords(),
        "d": w.lambda.d().value(),
        "x": w.x.vec().coords(),
        "s": w.s,
        "t": w.t,
        "value": w.value.value(),
    })
}

fn stats_json(s: &SearchStats) -> Value {
    json!({
        "nodes": s.nodes,
        "backtracks": s.backtracks,
        "prunings": s.prunings,
        "restarts": s.restarts,
        "wall_ms": s.wall.as_millis() as u64,
    })
}

fn verify_map_cmd(json_mode: bool, args: &VerifyMapArgs) -> Result<u8, Error> {
    let map = io::read_map(&args.file)?;
    let mut out = Output::new(json_mode, "verify-map");
    out.field("m", json!(map.m()));
    let is_odd_prime = u64::try_from(map.m())
        .ok()
        .and_then(|m| Prime::new(m).ok())
        .is_some();

    let run_bf = matches!(args.method, Method::Auto | Method::Bruteforce | Method::Both);
    let run_perms = match args.method {
        Method::Perms | Method::Both => true,
        Method::Auto => is_odd_prime,
        Method::Bruteforce => false,
    };

    let mut valid = true;
    if run_bf {
        let verdict = verify_bruteforce(&map)?;
        match &verdict {
            Verdict::Valid => out.line("bruteforce: Valid"),
            Verdict::Invalid(w) => {
                valid = false;
                out.line(&format!(
                    "bruteforce: Invalid — points of cells {} and {} at squared distance {}",
                    w.x, w.z, w.squared_distance
                ));
                out.field("bruteforce_witness", distance_witness_json(w));
            }
        }
        out.field("bruteforce_valid", json!(verdict.is_valid()));
    }
    if run_perms {
        let verdict = verify_perms(&map)?;
        match &verdict {
            Verdict::Valid => out.line("permutations: Valid"),
            Verdict::Invalid(w) => {
                valid = false;
                out.line(&format!(
                    "permutations: Invalid — table at lambda={} x={} repeats value {} at t={},{}",
                    w.lambda, w.x, w.value, w.s, w.t
                ));
                out.field("perm_witness", perm_witness_json(w));
            }
        }
        out.field("perms_valid", json!(verdict.is_valid()));
    }
    out.field("valid", json!(valid));
    out.line(if valid { "Valid" } else { "Invalid" });
    out.finish();
    Ok(if valid { 0 } else { 1 })
}

fn verify_set_cmd(json_mode: bool, args: &VerifySetArgs) -> Result<u8, Error> {
    let points = io::read_points(&args.file)?;
    let mut out = Output::new(json_mode, "verify-set");
    out.field("m", json!(args.m));
    out.field("points", json!(points.len()));
    match verify_point_set(&points, args.m) {
        Ok(Verdict::Valid) => {
            out.field("valid", json!(true));
            out.line("Valid");
            out.finish();
            Ok(0)
        }
        Ok(Verdict::Invalid(w)) => {
            out.field("valid", json!(false));
            out.field(
                "witness",
                json!({
                    "a": io::format_point(&w.a),
                    "b": io::format_point(&w.b),
                    "squared_distance": w.squared_distance.to_string(),
                }),
            );
            out.line(&format!(
                "Invalid — points {} and {} at integer squared distance {}",
                io::format_point(&w.a),
                io::format_point(&w.b),
                w.squared_distance
            ));
            out.finish();
            Ok(1)
        }
        Err(e @ Error::CosetCoverage { .. }) => {
            out.field("valid", json!(false));
            if let Error::CosetCoverage {
                missing,
                duplicated,
                off_grid,
                ..
            } = &e
            {
                out.field(
                    "coverage",
                    json!({
                        "missing": missing,
                        "duplicated": duplicated,
                        "off_grid_lines": off_grid,
                    }),
                );
            }
            out.line(&format!("Invalid — {e}"));
            out.finish();
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

fn pi_cmd(json_mode: bool, args: &PiArgs) -> Result<u8, Error> {
    let map = io::read_map(&args.map)?;
    let p = Prime::new(u64::try_from(map.m()).map_err(|_| Error::UnsupportedModulus(map.m()))?)?;
    let lam = parse_triple(&args.lambda)?;
    let xv = parse_triple(&args.x)?;
    let iso = IsoVector::from_coords(lam.x, lam.y, lam.z, p)?;
    let x = CubePoint::new(xv.x, xv.y, xv.z, p.get() as i64)?;
    let tab = pi_table(&map, &iso, x)?;
    let values: Vec<u64> = tab.values().iter().map(|v| v.value()).collect();
    let mut out = Output::new(json_mode, "pi");
    out.field("lambda", json!(iso.vec().coords()));
    out.field("d", json!(iso.d().value()));
    out.field("x", json!(x.vec().coords()));
    out.field("values", json!(values));
    out.field("is_permutation", json!(tab.is_permutation()));
    out.line(&format!(
        "pi^{}_{}: {:?}  ({})",
        iso,
        x,
        values,
        if tab.is_permutation() {
            "permutation"
        } else {
            "not a permutation"
        }
    ));
    out.finish();
    Ok(0)
}

fn lambda_cmd(json_mode: bool, args: &PrimeArg) -> Result<u8, Error> {
    let p = Prime::new(args.p)?;
    let lambda = enumerate_lambda(p);
    let mut out = Output::new(json_mode, "lambda");
    out.field("p", json!(p.get()));
    out.field("count", json!(lambda.len()));
    out.field(
        "vectors",
        json!(lambda
            .iter()
            .map(|iso| json!({"lambda": iso.vec().coords(), "d": iso.d().value()}))
            .collect::<Vec<_>>()),
    );
    for iso in &lambda {
        out.line(&format!("{iso}"));
    }
    out.line(&format!("|Lambda| = {}", lambda.len()));
    out.finish();
    Ok(0)
}

fn conic_cmd(json_mode: bool, args: &PrimeArg) -> Result<u8, Error> {
    let p = Prime::new(args.p)?;
    let points = conic_points(p);
    let mut out = Output::new(json_mode, "conic");
    out.field("p", json!(p.get()));
    out.field("count", json!(points.len()));
    out.field(
        "points",
        json!(points.iter().map(|q| q.values()).collect::<Vec<_>>()),
    );
    for q in &points {
        out.line(&format!("{q}"));
    }
    out.line(&format!("{} projective points", points.len()));
    out.finish();
    Ok(0)
}

fn w_cmd(json_mode: bool, args: &PrimeArg) -> Result<u8, Error> {
    let p = Prime::new(args.p)?;
    let w = build_w(p);
    let mut out = Output::new(json_mode, "w");
    out.field("p", json!(p.get()));
    out.field("count", json!(w.len()));
    out.field(
        "vectors",
        json!(w
            .iter()
            .map(|iso| json!({"lambda": iso.vec().coords(), "d": iso.d().value()}))
            .collect::<Vec<_>>()),
    );
    for iso in &w {
        out.line(&format!(
            "{iso}  (plane of {} base points)",
            complement_plane(iso).points().len()
        ));
    }
    out.finish();
    Ok(0)
}

fn search_linear_cmd(json_mode: bool, args: &SearchLinearArgs) -> Result<u8, Error> {
    let p = Prime::new(args.p)?;
    let ansatz = match args.slopes {
        SlopeMode::Unit => AffineAnsatz::unit(p),
        SlopeMode::Random => AffineAnsatz::seeded(p, args.seed),
    };
    let system = build_system(p, &ansatz);
    let (outcome, maps) = solve_and_sample(&system, args.samples.max(1), args.seed)?;
    let mut out = Output::new(json_mode, "search-linear");
    out.field("p", json!(p.get()));
    out.field("rows", json!(system.num_rows()));
    out.field("variables", json!(system.num_vars()));
    out.field("rank", json!(outcome.rank));
    out.field("kernel_dim", json!(outcome.kernel_dim));
    out.field("solutions_sampled", json!(maps.len()));
    out.line(&format!(
        "system: {} rows, {} variables, rank {}, kernel dimension {}",
        system.num_rows(),
        system.num_vars(),
        outcome.rank,
        outcome.kernel_dim
    ));
    if maps.is_empty() {
        out.field("consistent", json!(false));
        out.line("inconsistent: no solution under this slope prescription");
        out.finish();
        return Ok(1);
    }
    out.field("consistent", json!(true));
    for map in &maps {
        let verdict = verify_perms(map)?;
        assert!(
            verdict.is_valid(),
            "solutions of the slope system are valid by construction"
        );
    }
    out.line(&format!(
        "sampled {} solution(s); all verify as valid maps",
        maps.len()
    ));
    if let Some(path) = &args.out {
        io::write_map(path, &maps[0])?;
        out.field("out", json!(path.display().to_string()));
        out.line(&format!("first solution written to {}", path.display()));
    }
    out.finish();
    Ok(0)
}

fn search_csp_cmd(json_mode: bool, args: &SearchCspArgs) -> Result<u8, Error> {
    let p = Prime::new(args.p)?;
    let initial = match &args.initial {
        Some(path) => io::read_map(path)?,
        None => PartialMap::new(p.get() as i64)?,
    };
    let budget = SearchBudget {
        max_nodes: args.max_nodes,
        max_wall: args.time_limit_secs.map(Duration::from_secs),
    };
    let options = SearchOptions {
        seed: args.seed,
        threads: args.threads.max(1),
        fix_origin: args.fix_origin,
        restart_nodes: args.restart_nodes,
    };
    let outcome = search(p, &initial, &budget, &options)?;
    let mut out = Output::new(json_mode, "search-csp");
    out.field("p", json!(p.get()));
    out.field("outcome", json!(outcome.label()));
    out.field("stats", stats_json(outcome.stats()));
    let s = outcome.stats();
    out.line(&format!(
        "{}: nodes={} backtracks={} prunings={} restarts={} wall={:?}",
        outcome.label(),
        s.nodes,
        s.backtracks,
        s.prunings,
        s.restarts,
        s.wall
    ));
    let code = match &outcome {
        SearchOutcome::Found { map, .. } => {
            if let Some(path) = &args.out {
                io::write_map(path, map)?;
                out.field("out", json!(path.display().to_string()));
                out.line(&format!("map written to {}", path.display()));
            } else if !json_mode {
                println!(
                    "{}",
                    serde_json::to_string(&io::MapDocument::from_map(map))
                        .map_err(|e| Error::Parse(e.to_string()))?
                );
            } else {
                out.field(
                    "map",
                    serde_json::to_value(io::MapDocument::from_map(map))
                        .map_err(|e| Error::Parse(e.to_string()))?,
                );
            }
            0
        }
        SearchOutcome::Infeasible { witness, .. } => {
            out.field("witness", perm_witness_json(witness));
            out.line(&format!(
                "initial assignment collides: lambda={} x={} t={},{}",
                witness.lambda, witness.x, witness.s, witness.t
            ));
            1
        }
        _ => 1,
    };
    out.finish();
    Ok(code)
}

fn parse_range(s: &str) -> Result<(u64, u64), Error> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected lo:hi, got {s:?}")))?;
    let lo = lo
        .parse()
        .map_err(|_| Error::Parse(format!("bad range start {lo:?}")))?;
    let hi = hi
        .parse()
        .map_err(|_| Error::Parse(format!("bad range end {hi:?}")))?;
    Ok((lo, hi))
}

fn heuristic_cmd(json_mode: bool, args: &HeuristicArgs) -> Result<u8, Error> {
    let primes: Vec<u64> = match (&args.p, &args.range) {
        (Some(p), _) => vec![*p],
        (None, Some(range)) => {
            let (lo, hi) = parse_range(range)?;
            (lo..=hi).filter(|&n| Prime::new(n).is_ok()).collect()
        }
        (None, None) => vec![3, 5, 7, 11, 13],
    };
    let mut out = Output::new(json_mode, "heuristic");
    let mut rows = Vec::new();
    for q in primes {
        let p = Prime::new(q)?;
        let m = log_m_p(p);
        let mut row = json!({
            "p": q,
            "display": m.table_format(),
            "log10": m.log10_f64(),
            "mantissa": m.mantissa(),
            "exponent": m.exponent(),
        });
        let mut text = format!("{q} {}", m.table_format());
        if args.stirling {
            let r = steinhaus::heuristic::stirling_residual(p);
            row["stirling_residual"] = json!(r);
            text = format!("{text} residual={r:.3}");
        }
        out.line(&text);
        rows.push(row);
    }
    out.field("rows", json!(rows));
    out.finish();
    Ok(0)
}

fn descent_cmd(json_mode: bool, args: &DescentArgs) -> Result<u8, Error> {
    let mut out = Output::new(json_mode, "descent");
    out.field("n", json!(args.n));
    let start = match &args.point {
        Some(raw) => {
            let parts: Vec<i64> = raw
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Parse(format!("expected a,b,c,m in {raw:?}")))?;
            if parts.len() != 4 {
                return Err(Error::Parse(format!("expected four components in {raw:?}")));
            }
            let point = RationalPoint::new(IntVec3::new(parts[0], parts[1], parts[2]), parts[3])?;
            SphereRationalPoint::new(point, args.n)?
        }
        None => {
            if !is_squared_lattice_distance(args.n, Dimension::Three) {
                out.field("representable", json!(false));
                out.line(&format!("{} is not a sum of three integer squares", args.n));
                out.finish();
                return Ok(1);
            }
            random_sphere_rational(args.n, args.seed)?
        }
    };
    out.field("start", json!(io::format_point(start.point())));
    let (v, trail) = descend_trace(&start)?;
    out.field("witness", json!(v.coords()));
    out.field(
        "denominators",
        json!(trail.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
    );
    out.line(&format!("start: {}", io::format_point(start.point())));
    out.line(&format!(
        "descent denominators: {}",
        trail
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" > ")
    ));
    let sq = |c: i64| {
        if c < 0 {
            format!("({c})^2")
        } else {
            format!("{c}^2")
        }
    };
    out.line(&format!(
        "{} = {} + {} + {}",
        args.n,
        sq(v.x),
        sq(v.y),
        sq(v.z)
    ));
    out.finish();
    Ok(0)
}

fn restrict_cmd(json_mode: bool, args: &RestrictArgs) -> Result<u8, Error> {
    let map = io::read_map(&args.file)?;
    let restricted = restrict_map(&map, args.m_prime)?;
    let mut out = Output::new(json_mode, "restrict");
    out.field("m", json!(map.m()));
    out.field("m_prime", json!(args.m_prime));
    match &args.out {
        Some(path) => {
            io::write_map(path, &restricted)?;
            out.field("out", json!(path.display().to_string()));
            out.line(&format!("restricted map written to {}", path.display()));
        }
        None => {
            let doc = serde_json::to_value(io::MapDocument::from_map(&restricted))
                .map_err(|e| Error::Parse(e.to_string()))?;
            if json_mode {
                out.field("map", doc);
            } else {
                println!("{doc}");
            }
        }
    }
    out.finish();
    Ok(0)
}

fn fixture_cmd(json_mode: bool, args: &FixtureArgs) -> Result<u8, Error> {
    let mut out = Output::new(json_mode, "fixture");
    if args.as_map {
        let map = steinhaus::fixture::fixture_map();
        let doc = serde_json::to_value(io::MapDocument::from_map(&map))
            .map_err(|e| Error::Parse(e.to_string()))?;
        match &args.emit {
            Some(path) => {
                io::write_map(path, &map)?;
                out.field("out", json!(path.display().to_string()));
                out.line(&format!("fixture map written to {}", path.display()));
            }
            None => {
                if json_mode {
                    out.field("map", doc);
                } else {
                    println!("{doc}");
                }
            }
        }
    } else {
        let points = steinhaus::fixture::fixture_points();
        match &args.emit {
            Some(path) => {
                io::write_points(path, &points)?;
                out.field("out", json!(path.display().to_string()));
                out.line(&format!("fixture point set written to {}", path.display()));
            }
            None => {
                if json_mode {
                    out.field(
                        "points",
                        json!(points.iter().map(io::format_point).collect::<Vec<_>>()),
                    );
                } else {
                    for pt in &points {
                        println!("{}", io::format_point(pt));
                    }
                }
            }
        }
    }
    out.finish();
    Ok(0)
}
