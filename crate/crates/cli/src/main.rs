//! `toricdiv`: construct, analyze, classify and contract toric fans, and run
//! the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 classification failure (a fan contradicting the classification).

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toricdiv::classifier::classify;
use toricdiv::constructions::{bundle_over_p1, flop_target, projective_space, weighted_projective, TwistVector, WeightVector};
use toricdiv::divisor::{
    canonical_divisor, cartier_data, class_group, divisibility_index, divisor_from_json, divisor_to_json, is_ample,
    is_nef, picard_lattice, Divisibility,
};
use toricdiv::fan::{fan_from_json, FanJson};
use toricdiv::lattice::{format_rat, parse_rat, Rat};
use toricdiv::mori::{
    class_to_strings, contract_ray, extremal_length, intersection_numbers, mori_cone, CurveClass, ExtremalRay,
};
use toricdiv::verification::{render_table, run_suite, suite_json, VerifyOptions};
use toricdiv::{Error, Fan};

#[derive(Parser)]
#[command(name = "toricdiv", version, about = "Exact toric geometry and divisibility of the anticanonical class")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the fan JSON of a named family.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        /// `pn n`, `wps a_1 … a_{n+1}`, `bundle q_1 … q_n`, `floptarget n`.
        #[arg(allow_negative_numbers = true, required = true)]
        params: Vec<i64>,
    },
    /// Invariants of a fan: walls, class group, Picard number, −K, Mori cone.
    Analyze {
        /// Fan JSON file, or `-` for standard input.
        path: String,
        /// Also analyze this divisor (`{"coeffs": [...]}`).
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Classify a fan by the divisibility index of −K.
    Classify { path: String },
    /// Contract an extremal ray of the Mori cone.
    Contract {
        path: String,
        /// Index into the list of extremal rays, or a class such as `1,-2`.
        #[arg(long, allow_hyphen_values = true)]
        ray: String,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Paper)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 6)]
        weight_bound: i64,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_corrupt: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pn,
    Wps,
    Bundle,
    Floptarget,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

enum Failure {
    Input(String),
    Classification(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TheoremViolation(m) => Failure::Classification(m),
            e => Failure::Input(format!("{}: {e}", e.code())),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Classification(m)) => {
            eprintln!("classification failure: {m}");
            ExitCode::from(3)
        }
    }
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    println!("{}", text.unwrap_or_default());
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Construct { kind, params } => construct(*kind, params),
        Command::Analyze { path, divisor } => analyze(&read_fan(path)?, divisor.as_deref()),
        Command::Classify { path } => {
            let fan = read_fan(path)?;
            let report = classify(&fan)?;
            Ok(with_header(&fan, report.to_json()))
        }
        Command::Contract { path, ray } => contract(&read_fan(path)?, ray),
        Command::Verify { suite: Suite::Paper, max_n, weight_bound, seed, inject_corrupt } => {
            if *max_n < 1 || *weight_bound < 2 {
                return Err(Failure::Input("need --max-n ≥ 1 and --weight-bound ≥ 2".into()));
            }
            let opts = VerifyOptions { max_n: *max_n, weight_bound: *weight_bound, inject_corrupt: *inject_corrupt, seed: *seed };
            let results = run_suite(&opts);
            eprint!("{}", render_table(&results));
            let out = suite_json(&opts, &results);
            if results.iter().all(|r| r.passed) {
                Ok(out)
            } else {
                emit(&out, cli.pretty);
                Err(Failure::Verification)
            }
        }
    }
}

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn read_fan(path: &str) -> Result<Fan, Failure> {
    Ok(fan_from_json(&read_text(path)?)?)
}

fn fan_value(fan: &Fan) -> Result<Value, Failure> {
    serde_json::to_value(FanJson::from_fan(fan)?).map_err(|e| Failure::Input(e.to_string()))
}

fn with_header(fan: &Fan, body: Value) -> Value {
    let mut out = json!({ "version": env!("CARGO_PKG_VERSION"), "fan_digest": fan.digest() });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn single(params: &[i64], what: &str) -> Result<usize, Failure> {
    match params {
        [n] if *n >= 0 => Ok(*n as usize),
        _ => Err(Failure::Input(format!("{what} takes one nonnegative integer"))),
    }
}

fn construct(kind: Kind, params: &[i64]) -> Result<Value, Failure> {
    let fan = match kind {
        Kind::Pn => projective_space(single(params, "pn")?)?,
        Kind::Wps => weighted_projective(&WeightVector::new(params.to_vec())?)?,
        Kind::Bundle => bundle_over_p1(&TwistVector::new(params.to_vec()))?,
        Kind::Floptarget => flop_target(single(params, "floptarget")?)?,
    };
    fan_value(&fan)
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn analyze(fan: &Fan, divisor: Option<&str>) -> Result<Value, Failure> {
    fan.check_complete()?;
    let walls = fan.walls()?;
    let k = canonical_divisor(fan);
    let k_status = cartier_data(fan, &k)?;
    let cg = class_group(fan)?;
    let pic = picard_lattice(fan)?;
    let degrees = if k_status.is_q_cartier { Some(rats(&intersection_numbers(fan, &k.neg())?)) } else { None };
    let rays = mori_cone(fan)?;
    let mut mori = Vec::new();
    for r in &rays {
        let length = if k_status.is_q_cartier { Some(format_rat(&extremal_length(fan, &r.class)?)) } else { None };
        mori.push(json!({ "class": class_to_strings(&r.class), "walls": r.walls, "length": length }));
    }
    let divisibility = match divisibility_index(fan)? {
        Divisibility::Index { n, witness } => json!({ "N": n.to_string(), "witness": divisor_to_json(&witness) }),
        Divisibility::KNotQCartier => json!("k_not_q_cartier"),
        Divisibility::NotDivisible => json!("not_divisible"),
    };
    let mut body = json!({
        "n": fan.dim(),
        "rays": fan.num_rays(),
        "max_cones": fan.max_cones().len(),
        "simplicial": fan.is_simplicial(),
        "smooth": fan.is_smooth(),
        "class_group": {
            "free_rank": cg.free_rank,
            "torsion": cg.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
        },
        "rho": pic.rho(),
        "k": {
            "q_cartier": k_status.is_q_cartier,
            "cartier_index": k_status.cartier_index.as_ref().map(ToString::to_string),
            "nef": if k_status.is_q_cartier { Some(is_nef(fan, &k)?) } else { None },
        },
        "walls": walls.iter().enumerate().map(|(i, w)| json!({
            "cone": w.cone.rays(),
            "between": [w.left, w.right],
            "anticanonical_degree": degrees.as_ref().map(|d| d[i].clone()),
        })).collect::<Vec<_>>(),
        "mori_cone": mori,
        "divisibility": divisibility,
    });
    if let Some(path) = divisor {
        let d = divisor_from_json(&read_text(path)?)?;
        let status = cartier_data(fan, &d)?;
        let mut dj = json!({
            "coeffs": divisor_to_json(&d)["coeffs"].clone(),
            "q_cartier": status.is_q_cartier,
            "cartier": status.is_cartier,
            "cartier_index": status.cartier_index.as_ref().map(ToString::to_string),
            "class": rats(&cg.project(&d).free),
        });
        if status.is_q_cartier {
            dj["picard_coordinates"] = json!(pic.coordinates(&d).map(|c| rats(&c)));
            dj["intersections"] = json!(rats(&intersection_numbers(fan, &d)?));
            dj["nef"] = json!(is_nef(fan, &d)?);
            dj["ample"] = json!(is_ample(fan, &d)?);
        }
        body["divisor"] = dj;
    }
    Ok(with_header(fan, body))
}

fn parse_class(s: &str) -> Option<CurveClass> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let vals: Option<Vec<Rat>> = inner.split(',').map(|t| parse_rat(t.trim().trim_matches('"'))).collect();
    vals.map(CurveClass)
}

fn describe(rays: &[ExtremalRay]) -> String {
    rays.iter()
        .enumerate()
        .map(|(i, r)| format!("{i}: [{}]", class_to_strings(&r.class).join(",")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn contract(fan: &Fan, designation: &str) -> Result<Value, Failure> {
    let rays = mori_cone(fan)?;
    let class = if let Ok(i) = designation.trim().parse::<usize>() {
        rays.get(i).map(|r| r.class.clone())
    } else {
        parse_class(designation).filter(|c| rays.iter().any(|r| r.class.same_ray(c)))
    };
    let Some(class) = class else {
        return Err(Failure::Input(format!("ray {designation:?} is not extremal; extremal rays are {}", describe(&rays))));
    };
    let c = contract_ray(fan, &class)?;
    Ok(with_header(fan, c.to_json()?))
}
