//! The `anglelab` command line: file formats, subcommands and result records.
//!
//! Every invocation prints one JSON record on stdout (or to `--out`):
//! `command`, `inputs_digest`, the command's outputs, `resolved`,
//! `outputs_digest`, and finally `wall_time_ms`. Both digests are SHA-256;
//! the outputs digest covers everything before it, so it is identical across
//! runs and `--jobs` settings. Exit codes: 0 resolved, 2 unresolved interval
//! bounds, 1 error (the record is then `{"error": code, "detail": text}`).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::constructions::{
    circle_angle_count, generate_base_set, BaseSet, BaseSpec, ConstructionSpec,
};
use crate::error::{Error, Result};
use crate::geometry::{
    apex_angle_count, beck_apex, direction_set, distinct_angle_count, k_connected_stats,
    rich_line_profile, ApexMode, Point, PointSet,
};
use crate::pipeline::{exponent_fit, run_pipeline};
use crate::rational::Rational;
use crate::sumset::{
    combo_cardinality, concavity_check, expander_check, near_neighbor_gap, pluennecke_check,
    squeeze_case_split, Cardinality, CoeffPattern, ComboOptions, CountMode, ExactRealSet,
    ExpanderInput, Presentation, DEFAULT_BUDGET,
};

#[derive(Parser, Debug)]
#[command(name = "anglelab", version, about = "Exact distinct-angle and arctangent sumset experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct GlobalArgs {
    /// Counting mode for sumset-based commands.
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Precision cap for interval escalation.
    #[arg(long, global = true, env = "ANGLELAB_MAX_PRECISION_BITS", default_value_t = 8192)]
    pub max_bits: u32,
    /// Largest staged-convolution candidate count before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Exact,
    Interval,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationArg {
    Additive,
    Ratio,
}

impl From<PresentationArg> for Presentation {
    fn from(p: PresentationArg) -> Self {
        match p {
            PresentationArg::Additive => Presentation::Additive,
            PresentationArg::Ratio => Presentation::Ratio,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    Grid,
    Cartesian,
    Circle,
    Line,
    Random,
    Base,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKindArg {
    Range,
    Geometric,
    Random,
}

/// Path fields are skipped in the inputs digest; file contents are hashed instead.
#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Distinct angles of a point set.
    Angles {
        #[arg(long)]
        #[serde(skip)]
        input: PathBuf,
        /// Also list the angle values (radians, for display).
        #[arg(long)]
        list: bool,
    },
    /// Distinct angles with a fixed apex.
    Apex {
        #[arg(long)]
        #[serde(skip)]
        input: PathBuf,
        /// Apex as `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        apex: String,
        /// Unsigned angles in [0, pi] instead of signed arctangent differences.
        #[arg(long)]
        unsigned: bool,
        /// Reject vertical directions instead of mapping them to pi/2.
        #[arg(long)]
        no_vertical: bool,
    },
    /// Directions from a point to a point set.
    Directions {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        #[serde(skip)]
        input: PathBuf,
    },
    /// The point of P seeing the most directions to Q.
    Beck {
        #[arg(long)]
        #[serde(skip)]
        p: PathBuf,
        #[arg(long)]
        #[serde(skip)]
        q: PathBuf,
    },
    /// Rich-line histogram.
    Lines {
        #[arg(long)]
        #[serde(skip)]
        input: PathBuf,
    },
    /// k-connected pair statistics between P and Q.
    Kstats {
        #[arg(long)]
        #[serde(skip)]
        p: PathBuf,
        #[arg(long)]
        #[serde(skip)]
        q: PathBuf,
    },
    /// Build a point-set family or base set, optionally counting angles.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated sizes; implies --count.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
        /// Tangent step for the line family.
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinate range for random point sets.
        #[arg(long, default_value_t = 100)]
        range: i64,
        #[arg(long, value_enum, default_value = "range")]
        base_kind: BaseKindArg,
        #[arg(long, default_value = "2")]
        ratio: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 1_000_000, allow_hyphen_values = true)]
        hi: i64,
        /// Base set file for the cartesian family.
        #[arg(long)]
        #[serde(skip)]
        base: Option<PathBuf>,
        /// Count distinct angles of the result.
        #[arg(long)]
        count: bool,
        /// Write sweep rows as `n,count,family` CSV.
        #[arg(long)]
        #[serde(skip)]
        csv: Option<PathBuf>,
    },
    /// Cardinality of a signed iterated sumset.
    Sumset {
        /// Coefficients, e.g. `4,-3`.
        #[arg(long, allow_hyphen_values = true)]
        pattern: String,
        /// One set for all positions, or one per coefficient.
        #[arg(long = "set", required = true)]
        #[serde(skip)]
        sets: Vec<PathBuf>,
    },
    /// Nearest-neighbour gap selection for X, Y.
    Gap {
        #[arg(long)]
        #[serde(skip)]
        x: PathBuf,
        #[arg(long)]
        #[serde(skip)]
        y: PathBuf,
        #[arg(long, value_enum, default_value = "additive")]
        presentation: PresentationArg,
    },
    /// Case split of the squeezing argument.
    Squeeze {
        #[arg(long)]
        #[serde(skip)]
        x: PathBuf,
        #[arg(long)]
        #[serde(skip)]
        y: PathBuf,
        #[arg(long, value_enum, default_value = "additive")]
        presentation: PresentationArg,
    },
    /// Expander-theorem factors for A and shifts h.
    Expander {
        #[arg(long)]
        #[serde(skip)]
        a: PathBuf,
        /// Shifts `h1,h2,h3`.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, value_enum, default_value = "ratio")]
        presentation: PresentationArg,
        /// Downgrade a spacing violation to a warning.
        #[arg(long)]
        force: bool,
    },
    /// Closed-form curvature versus finite differences.
    Concavity {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-2,-1,0,1,2")]
        samples: String,
    },
    /// Plünnecke-Ruzsa inequality for kS - lS.
    Pluennecke {
        #[arg(long)]
        #[serde(skip)]
        set: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        l: u32,
    },
    /// Full trace on a base set (file or inline values).
    Pipeline {
        #[arg(long)]
        #[serde(skip)]
        base: Option<PathBuf>,
        /// Inline values, e.g. `1,2,3,4`.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
    },
    /// Log-log slope of (n, count) records.
    Fit {
        #[arg(long)]
        #[serde(skip)]
        records: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Angles { .. } => "angles",
            Command::Apex { .. } => "apex",
            Command::Directions { .. } => "directions",
            Command::Beck { .. } => "beck",
            Command::Lines { .. } => "lines",
            Command::Kstats { .. } => "kstats",
            Command::Construct { .. } => "construct",
            Command::Sumset { .. } => "sumset",
            Command::Gap { .. } => "gap",
            Command::Squeeze { .. } => "squeeze",
            Command::Expander { .. } => "expander",
            Command::Concavity { .. } => "concavity",
            Command::Pluennecke { .. } => "pluennecke",
            Command::Pipeline { .. } => "pipeline",
            Command::Fit { .. } => "fit",
        }
    }
}

// ---------------------------------------------------------------- formats

fn schema(msg: impl Into<String>) -> Error {
    Error::SchemaError(msg.into())
}

fn rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => Rational::parse(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().expect("i64"))),
        other => Err(schema(format!("expected a rational string, got {other}"))),
    }
}

fn parse_json(doc: &str) -> Result<Value> {
    serde_json::from_str(doc).map_err(|e| schema(e.to_string()))
}

/// `{"points": [[x, y], ...]}` with `"num/den"` or exact decimal strings.
pub fn parse_pointset(doc: &str) -> Result<PointSet> {
    let v = parse_json(doc)?;
    let arr = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("expected {\"points\": [[x, y], ...]}"))?;
    let points = arr
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(Point::new(rational_value(x)?, rational_value(y)?)),
            _ => Err(schema(format!("point must be [x, y], got {p}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(points)
}

pub fn pointset_document(set: &PointSet) -> Value {
    json!({
        "points": set
            .iter()
            .map(|p| json!([p.x.to_string(), p.y.to_string()]))
            .collect::<Vec<_>>()
    })
}

/// `{"values": [...]}`.
pub fn parse_base_set(doc: &str) -> Result<BaseSet> {
    let v = parse_json(doc)?;
    let arr = v
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("expected {\"values\": [...]}"))?;
    Ok(BaseSet::explicit(arr.iter().map(rational_value).collect::<Result<Vec<_>>>()?))
}

/// An exact real set document; a bare `{"values": [...]}` is read as rational.
pub fn parse_real_set(doc: &str) -> Result<ExactRealSet> {
    let v = parse_json(doc)?;
    if v.get("kind").is_some() {
        serde_json::from_value(v).map_err(|e| schema(e.to_string()))
    } else {
        Ok(ExactRealSet::rationals(parse_base_set(doc)?.values))
    }
}

/// `[[n, count], ...]`, `[{"n": .., "count": ..}, ...]` or `{"records": [...]}`.
pub fn parse_records(doc: &str) -> Result<Vec<(u64, u64)>> {
    let v = parse_json(doc)?;
    let arr = v
        .get("records")
        .unwrap_or(&v)
        .as_array()
        .ok_or_else(|| schema("expected a list of records"))?;
    arr.iter()
        .map(|r| {
            let (n, c) = match r {
                Value::Array(a) if a.len() == 2 => (&a[0], &a[1]),
                Value::Object(o) => (
                    o.get("n").ok_or_else(|| schema("record needs n"))?,
                    o.get("count").ok_or_else(|| schema("record needs count"))?,
                ),
                other => return Err(schema(format!("bad record {other}"))),
            };
            match (n.as_u64(), c.as_u64()) {
                (Some(n), Some(c)) => Ok((n, c)),
                _ => Err(schema(format!("record values must be non-negative integers: {r}"))),
            }
        })
        .collect()
}

fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|s| Rational::parse(s.trim())).collect()
}

fn parse_point(text: &str) -> Result<Point> {
    match parse_rational_list(text)?.as_slice() {
        [x, y] => Ok(Point::new(x.clone(), y.clone())),
        _ => Err(Error::BadParams(format!("expected x,y, got {text:?}"))),
    }
}

fn parse_shifts(text: &str) -> Result<[Rational; 3]> {
    <[Rational; 3]>::try_from(parse_rational_list(text)?)
        .map_err(|_| Error::BadParams(format!("expected h1,h2,h3, got {text:?}")))
}

// ---------------------------------------------------------------- execution

/// Reads input files and feeds their bytes into the inputs digest.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }
}

struct Output {
    fields: Map<String, Value>,
    resolved: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

fn object<T: Serialize>(v: &T) -> Map<String, Value> {
    match to_value(v) {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn resolved(fields: Map<String, Value>) -> Output {
    Output {
        fields,
        resolved: true,
    }
}

fn cardinality_output(c: &Cardinality) -> Output {
    Output {
        fields: object(c),
        resolved: c.resolved,
    }
}

fn exact_count(count: usize) -> Output {
    let mut m = Map::new();
    m.insert("cardinality".into(), json!(count));
    resolved(m)
}

fn options(g: &GlobalArgs) -> ComboOptions {
    ComboOptions {
        mode: match g.mode {
            ModeArg::Exact => CountMode::Exact,
            ModeArg::Interval => CountMode::Interval,
        },
        max_bits: g.max_bits,
        budget: g.budget,
    }
}

fn execute_command(cli: &Cli, inputs: &mut Inputs) -> Result<Output> {
    let g = &cli.global;
    let opts = options(g);
    match &cli.command {
        Command::Angles { input, list } => {
            let set = parse_pointset(&inputs.read(input)?)?;
            eprintln!("anglelab: counting angles of {} points", set.len());
            let (count, keys) = distinct_angle_count(&set)?;
            let mut out = exact_count(count);
            if *list {
                out.fields.insert(
                    "angles".into(),
                    json!(keys.iter().map(|k| k.radians()).collect::<Vec<_>>()),
                );
            }
            Ok(out)
        }
        Command::Apex {
            input,
            apex,
            unsigned,
            no_vertical,
        } => {
            let set = parse_pointset(&inputs.read(input)?)?;
            let mode = if *unsigned {
                ApexMode::Unsigned
            } else {
                ApexMode::Signed {
                    vertical: !no_vertical,
                }
            };
            Ok(exact_count(apex_angle_count(&set, &parse_point(apex)?, mode)?))
        }
        Command::Directions { point, input } => {
            let set = parse_pointset(&inputs.read(input)?)?;
            let dirs = direction_set(&parse_point(point)?, &set)?;
            let mut m = Map::new();
            m.insert("cardinality".into(), json!(dirs.len()));
            m.insert(
                "directions".into(),
                json!(dirs.iter().map(|d| d.to_tangent().to_string()).collect::<Vec<_>>()),
            );
            Ok(resolved(m))
        }
        Command::Beck { p, q } => {
            let p = parse_pointset(&inputs.read(p)?)?;
            let q = parse_pointset(&inputs.read(q)?)?;
            let (apex, count) = beck_apex(&p, &q)?;
            let mut m = Map::new();
            m.insert("apex".into(), json!([apex.x.to_string(), apex.y.to_string()]));
            m.insert("direction_count".into(), json!(count));
            Ok(resolved(m))
        }
        Command::Lines { input } => {
            let set = parse_pointset(&inputs.read(input)?)?;
            Ok(resolved(object(&rich_line_profile(&set)?)))
        }
        Command::Kstats { p, q } => {
            let p = parse_pointset(&inputs.read(p)?)?;
            let q = parse_pointset(&inputs.read(q)?)?;
            let stats = k_connected_stats(&p, &q)?;
            let mut m = Map::new();
            m.insert("stats".into(), to_value(&stats));
            Ok(resolved(m))
        }
        Command::Construct { .. } => construct(cli, inputs),
        Command::Sumset { pattern, sets } => {
            let pattern = CoeffPattern::parse(pattern)?;
            let sets = sets
                .iter()
                .map(|p| parse_real_set(&inputs.read(p)?))
                .collect::<Result<Vec<_>>>()?;
            eprintln!("anglelab: sumset {pattern}");
            Ok(cardinality_output(&combo_cardinality(&sets, &pattern, &opts)?))
        }
        Command::Gap { x, y, presentation } => {
            let x = parse_real_set(&inputs.read(x)?)?;
            let y = parse_real_set(&inputs.read(y)?)?;
            Ok(resolved(object(&near_neighbor_gap(&x, &y, (*presentation).into())?)))
        }
        Command::Squeeze { x, y, presentation } => {
            let x = parse_real_set(&inputs.read(x)?)?;
            let y = parse_real_set(&inputs.read(y)?)?;
            Ok(resolved(object(&squeeze_case_split(&x, &y, (*presentation).into())?)))
        }
        Command::Expander {
            a,
            h,
            presentation,
            force,
        } => {
            let a = parse_real_set(&inputs.read(a)?)?;
            let input = ExpanderInput {
                presentation: (*presentation).into(),
                a: a.as_rationals()?.to_vec(),
                h: parse_shifts(h)?,
            };
            let report = expander_check(&input, &opts, *force)?;
            Ok(Output {
                resolved: report.resolved,
                fields: object(&report),
            })
        }
        Command::Concavity { h, samples } => {
            let h = parse_shifts(h)?.map(|v| v.to_f64());
            let t: Vec<f64> = parse_rational_list(samples)?.iter().map(Rational::to_f64).collect();
            Ok(resolved(object(&concavity_check(h, &t)?)))
        }
        Command::Pluennecke { set, k, l } => {
            let s = parse_real_set(&inputs.read(set)?)?;
            let report = pluennecke_check(&s, *k, *l, &opts)?;
            Ok(Output {
                resolved: report.lhs.resolved,
                fields: object(&report),
            })
        }
        Command::Pipeline { base, values } => {
            let b = match (base, values) {
                (Some(p), None) => parse_base_set(&inputs.read(p)?)?,
                (None, Some(v)) => BaseSet::explicit(parse_rational_list(v)?),
                _ => return Err(Error::BadParams("give exactly one of --base, --values".into())),
            };
            eprintln!("anglelab: pipeline on |B| = {}", b.len());
            let report = run_pipeline(&b, &opts)?;
            Ok(Output {
                resolved: report.resolved,
                fields: object(&report),
            })
        }
        Command::Fit { records } => {
            let recs = parse_records(&inputs.read(records)?)?;
            let mut m = Map::new();
            m.insert("slope".into(), json!(exponent_fit(&recs)?));
            Ok(resolved(m))
        }
    }
}

fn construct(cli: &Cli, inputs: &mut Inputs) -> Result<Output> {
    let Command::Construct {
        family,
        n,
        sweep,
        t,
        seed,
        range,
        base_kind,
        ratio,
        lo,
        hi,
        base,
        count,
        csv,
    } = &cli.command
    else {
        unreachable!("construct dispatch");
    };
    let max_bits = cli.global.max_bits;
    let base_set = match base {
        Some(p) => Some(parse_base_set(&inputs.read(p)?)?),
        None => None,
    };
    if let FamilyArg::Base = family {
        let n = n.ok_or_else(|| Error::BadParams("--n is required".into()))?;
        let spec = match base_kind {
            BaseKindArg::Range => BaseSpec::Range,
            BaseKindArg::Geometric => BaseSpec::Geometric {
                ratio: Rational::parse(ratio)?,
            },
            BaseKindArg::Random => BaseSpec::Random {
                seed: *seed,
                lo: *lo,
                hi: *hi,
            },
        };
        return Ok(resolved(object(&generate_base_set(&spec, n)?)));
    }
    let spec_for = |n: usize| -> Result<Option<ConstructionSpec>> {
        Ok(Some(match family {
            FamilyArg::Grid => ConstructionSpec::Grid { n },
            FamilyArg::Cartesian => ConstructionSpec::Cartesian {
                base: base_set
                    .clone()
                    .ok_or_else(|| Error::BadParams("--base is required".into()))?,
            },
            FamilyArg::Circle => return Ok(None),
            FamilyArg::Line => ConstructionSpec::LineSymmetricPair {
                n,
                t: Rational::parse(t.as_deref().unwrap_or("1/10"))?,
            },
            FamilyArg::Random => ConstructionSpec::Random {
                n,
                seed: *seed,
                range: *range,
            },
            FamilyArg::Base => unreachable!("handled above"),
        }))
    };
    let count_for = |n: usize| -> Result<Cardinality> {
        match spec_for(n)? {
            None => circle_angle_count(n, max_bits),
            Some(spec) => Ok(Cardinality::exact(distinct_angle_count(&spec.build()?)?.0 as u64)),
        }
    };
    let family_name = match family {
        FamilyArg::Circle => "circle_center",
        _ => spec_for(0)?.map_or("", |s| s.name()),
    };

    let mut m = Map::new();
    m.insert("family".into(), json!(family_name));
    if !sweep.is_empty() {
        let mut rows = Vec::new();
        let mut all = true;
        let mut text = String::from("n,count,family\n");
        for &size in sweep {
            eprintln!("anglelab: {family_name} n = {size}");
            let c = count_for(size)?;
            all &= c.resolved;
            text.push_str(&format!("{size},{},{family_name}\n", c.lower));
            let mut row = object(&c);
            row.insert("n".into(), json!(size));
            rows.push(Value::Object(row));
        }
        if let Some(path) = csv {
            fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        m.insert("records".into(), Value::Array(rows));
        return Ok(Output {
            fields: m,
            resolved: all,
        });
    }
    let n = match family {
        FamilyArg::Cartesian => base_set.as_ref().map_or(0, BaseSet::len),
        _ => n.ok_or_else(|| Error::BadParams("--n or --sweep is required".into()))?,
    };
    m.insert("n".into(), json!(n));
    let mut all = true;
    if let Some(spec) = spec_for(n)? {
        m.insert("points".into(), pointset_document(&spec.build()?)["points"].clone());
    }
    if *count || matches!(family, FamilyArg::Circle) {
        let c = count_for(n)?;
        all = c.resolved;
        m.insert("angle_count".into(), to_value(&c));
    }
    Ok(Output {
        fields: m,
        resolved: all,
    })
}

/// The result of one invocation: exit code, text for stdout or `--out`.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub out: Option<PathBuf>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn error_record(e: &Error) -> String {
    json!({"error": e.code(), "detail": e.to_string()}).to_string()
}

/// Parses `argv` (including the program name) and runs the command.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome {
                code: 0,
                text: e.to_string(),
                out: None,
            }
        }
        Err(e) => {
            eprintln!("{e}");
            let err = Error::BadParams(e.kind().to_string());
            return Outcome {
                code: 1,
                text: error_record(&err),
                out: None,
            };
        }
    };
    let out = cli.global.out.clone();
    let start = Instant::now();
    let mut inputs = Inputs {
        hasher: Sha256::new(),
    };
    inputs.hasher.update(cli.command.name().as_bytes());
    inputs
        .hasher
        .update(serde_json::to_vec(&(&cli.global, &cli.command)).expect("serializable args"));
    let result = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool.install(|| execute_command(&cli, &mut inputs)),
        Err(e) => Err(Error::BadParams(format!("thread pool: {e}"))),
    };
    match result {
        Ok(output) => {
            let mut record = Map::new();
            record.insert("command".into(), json!(cli.command.name()));
            record.insert(
                "inputs_digest".into(),
                json!(hex::encode(inputs.hasher.finalize())),
            );
            for (k, v) in output.fields {
                record.insert(k, v);
            }
            record.insert("resolved".into(), json!(output.resolved));
            let covered = Value::Object(record.clone()).to_string();
            record.insert("outputs_digest".into(), json!(sha256_hex(covered.as_bytes())));
            let body = Value::Object(record).to_string();
            let ms = start.elapsed().as_millis();
            let text = format!("{},\"wall_time_ms\":{ms}}}", &body[..body.len() - 1]);
            Outcome {
                code: if output.resolved { 0 } else { 2 },
                text,
                out,
            }
        }
        Err(e) => {
            eprintln!("anglelab: {e}");
            Outcome {
                code: 1,
                text: error_record(&e),
                out,
            }
        }
    }
}

/// Runs `execute` and writes the record; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = execute(argv);
    match &outcome.out {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{}\n", outcome.text)) {
                eprintln!("anglelab: cannot write {}: {e}", path.display());
                println!("{}", error_record(&Error::Io(e.to_string())));
                return 1;
            }
        }
        None => println!("{}", outcome.text),
    }
    outcome.code
}

/// Drops `wall_time_ms` from a record, leaving the reproducible part.
pub fn reproducible_part(record: &str) -> String {
    match serde_json::from_str::<Value>(record) {
        Ok(Value::Object(mut m)) => {
            m.remove("wall_time_ms");
            Value::Object(m).to_string()
        }
        _ => record.to_string(),
    }
}
