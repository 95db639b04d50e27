//! JSON scenario files: cocycle data, the module `F^α(V, ψ)`, sampling
//! windows, trial counts and suite selection.
//!
//! ```json
//! {"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "alpha": ["0", "1/2"],
//!  "B": {"kind": "laurent", "psi": "2"}, "V": "natural",
//!  "trials": 200, "seed": 1, "suites": ["cocycle", "rep"]}
//! ```
//!
//! Scalars are strings in `z = ζ_{2N}` (e.g. `"1/2 - z^3"`) or plain integers.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::field::Cyclotomic;
use crate::fock::{FockModule, ModuleParams};
use crate::gln::GlnModule;
use crate::lattice::{CocycleContext, SqrtBranch};
use crate::lie::{BAlgebra, BKind};

pub const DEFAULT_WINDOW: i64 = 6;
pub const DEFAULT_PROBE_WINDOW: i64 = 2;
pub const DEFAULT_RADF_WINDOW: i64 = 4;
pub const DEFAULT_TRIALS: u64 = 200;

/// An invalid field, located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "invalid config at {at}: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = Result<T, ConfigError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Cocycle,
    Torus,
    Lie,
    Rep,
    Section3,
    Lattice,
    Probe,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Cocycle,
        Suite::Torus,
        Suite::Lie,
        Suite::Rep,
        Suite::Section3,
        Suite::Lattice,
        Suite::Probe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Torus => "torus",
            Suite::Lie => "lie",
            Suite::Rep => "rep",
            Suite::Section3 => "section3",
            Suite::Lattice => "lattice",
            Suite::Probe => "probe",
        }
    }

    /// Stable small id mixed into per-trial seeds.
    pub fn id(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64 + 1
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The `V` part of a scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VSpec {
    Trivial,
    Natural,
    Dual,
    Sym2,
    Wedge2,
    Tensor(Box<VSpec>, Box<VSpec>),
}

impl VSpec {
    pub fn build(&self, ctx: &CocycleContext) -> crate::error::Result<GlnModule> {
        let (f, n) = (ctx.field(), ctx.n());
        Ok(match self {
            VSpec::Trivial => GlnModule::trivial(f, n),
            VSpec::Natural => GlnModule::natural(f, n),
            VSpec::Dual => GlnModule::natural(f, n).dual(),
            VSpec::Sym2 => GlnModule::natural(f, n).sym2()?,
            VSpec::Wedge2 => GlnModule::natural(f, n).wedge2()?,
            VSpec::Tensor(a, b) => a.build(ctx)?.tensor(&b.build(ctx)?)?,
        })
    }
}

impl fmt::Display for VSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VSpec::Trivial => f.write_str("trivial"),
            VSpec::Natural => f.write_str("natural"),
            VSpec::Dual => f.write_str("dual"),
            VSpec::Sym2 => f.write_str("sym2"),
            VSpec::Wedge2 => f.write_str("wedge2"),
            VSpec::Tensor(a, b) => write!(f, "tensor({a},{b})"),
        }
    }
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub v_spec: VSpec,
    pub module: FockModule,
    pub window: i64,
    pub probe_window: i64,
    pub radf_window: i64,
    pub trials: u64,
    pub seed: u64,
    pub suites: Vec<Suite>,
}

const KEYS: [&str; 16] = [
    "name",
    "n",
    "N",
    "K",
    "alpha",
    "B",
    "V",
    "window",
    "probe_window",
    "radf_window",
    "trials",
    "seed",
    "suites",
    "sqrt_branch",
    "description",
    "expect",
];

fn ptr(base: &str, key: impl fmt::Display) -> String {
    format!("{base}/{key}")
}

fn get_int(obj: &Map<String, Value>, key: &str, default: Option<i64>) -> CResult<i64> {
    match obj.get(key) {
        None => default.ok_or_else(|| ConfigError::new(ptr("", key), "missing required field")),
        Some(v) => v
            .as_i64()
            .ok_or_else(|| ConfigError::new(ptr("", key), "expected an integer")),
    }
}

fn parse_scalar(ctx: &CocycleContext, v: &Value, at: &str) -> CResult<Cyclotomic> {
    match v {
        Value::Number(x) => x
            .as_i64()
            .map(|i| ctx.int(i))
            .ok_or_else(|| ConfigError::new(at, "numeric scalars must be integers; use a string like \"1/2\"")),
        Value::String(s) => Cyclotomic::parse(ctx.field(), s).map_err(|e| ConfigError::new(at, e.to_string())),
        _ => Err(ConfigError::new(at, "expected a scalar string")),
    }
}

fn parse_v(v: &Value, at: &str) -> CResult<VSpec> {
    match v {
        Value::String(s) => match s.as_str() {
            "trivial" => Ok(VSpec::Trivial),
            "natural" => Ok(VSpec::Natural),
            "dual" => Ok(VSpec::Dual),
            "sym2" => Ok(VSpec::Sym2),
            "wedge2" => Ok(VSpec::Wedge2),
            other => Err(ConfigError::new(at, format!("unknown module {other:?}"))),
        },
        Value::Object(o) => {
            let at_t = ptr(at, "tensor");
            let Some(Value::Array(parts)) = o.get("tensor") else {
                return Err(ConfigError::new(at, "expected {\"tensor\": [spec, spec]}"));
            };
            if o.len() != 1 || parts.len() != 2 {
                return Err(ConfigError::new(at_t, "tensor takes exactly two factors"));
            }
            let a = parse_v(&parts[0], &ptr(&at_t, 0))?;
            let b = parse_v(&parts[1], &ptr(&at_t, 1))?;
            Ok(VSpec::Tensor(Box::new(a), Box::new(b)))
        }
        _ => Err(ConfigError::new(at, "expected a module name or tensor object")),
    }
}

fn parse_k(obj: &Map<String, Value>, n: usize, order: i64) -> CResult<Vec<Vec<i64>>> {
    let Some(Value::Array(rows)) = obj.get("K") else {
        return Err(ConfigError::new("/K", "expected an n x n integer matrix"));
    };
    if rows.len() != n {
        return Err(ConfigError::new("/K", format!("expected {n} rows, got {}", rows.len())));
    }
    let mut k = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(row) = row else {
            return Err(ConfigError::new(ptr("/K", i), "expected a row"));
        };
        if row.len() != n {
            return Err(ConfigError::new(ptr("/K", i), format!("expected {n} entries")));
        }
        let mut r = Vec::with_capacity(n);
        for (j, x) in row.iter().enumerate() {
            r.push(
                x.as_i64()
                    .ok_or_else(|| ConfigError::new(format!("/K/{i}/{j}"), "expected an integer"))?,
            );
        }
        k.push(r);
    }
    for i in 0..n {
        if k[i][i].rem_euclid(order) != 0 {
            return Err(ConfigError::new(format!("/K/{i}/{i}"), "diagonal entries must be 0 mod N (q_ii = 1)"));
        }
        for j in 0..i {
            if (k[i][j] + k[j][i]).rem_euclid(order) != 0 {
                return Err(ConfigError::new(
                    format!("/K/{i}/{j}"),
                    format!("K must be skew mod N: K[{i}][{j}] + K[{j}][{i}] = {} is not 0 mod {order}", k[i][j] + k[j][i]),
                ));
            }
        }
    }
    Ok(k)
}

fn parse_b(obj: &Map<String, Value>, ctx: &CocycleContext) -> CResult<BAlgebra> {
    let Some(Value::Object(b)) = obj.get("B") else {
        return Ok(BAlgebra::new(BKind::Laurent, ctx.one()).expect("ψ(z) = 1 is valid"));
    };
    if let Some(key) = b.keys().find(|k| !["kind", "k", "psi"].contains(&k.as_str())) {
        return Err(ConfigError::new(ptr("/B", key), "unknown field"));
    }
    let kind = match b.get("kind").and_then(Value::as_str) {
        Some("laurent") => BKind::Laurent,
        Some("truncated") => {
            let k = b
                .get("k")
                .and_then(Value::as_u64)
                .filter(|&k| (1..=64).contains(&k))
                .ok_or_else(|| ConfigError::new("/B/k", "truncated B needs an order k in 1..=64"))?;
            BKind::Truncated(k as u32)
        }
        _ => return Err(ConfigError::new("/B/kind", "expected \"laurent\" or \"truncated\"")),
    };
    let psi = match b.get("psi") {
        Some(v) => parse_scalar(ctx, v, "/B/psi")?,
        None if kind == BKind::Laurent => ctx.one(),
        None => ctx.zero(),
    };
    BAlgebra::new(kind, psi).map_err(|e| ConfigError::new("/B/psi", e.to_string()))
}

impl Scenario {
    pub fn load(path: &Path) -> CResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::from_json_str(&text, &default_name)
    }

    pub fn from_json_str(text: &str, default_name: &str) -> CResult<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::new("", format!("malformed JSON: {e}")))?;
        Self::from_value(&value, default_name)
    }

    pub fn from_value(value: &Value, default_name: &str) -> CResult<Self> {
        let Value::Object(obj) = value else {
            return Err(ConfigError::new("", "expected a JSON object"));
        };
        if let Some(key) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::new(ptr("", key), "unknown field"));
        }
        let name = match obj.get("name") {
            None => default_name.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(ConfigError::new("/name", "expected a string")),
        };
        let n = get_int(obj, "n", None)?;
        if !(1..=8).contains(&n) {
            return Err(ConfigError::new("/n", "rank must be in 1..=8"));
        }
        let n = n as usize;
        let order = get_int(obj, "N", None)?;
        if !(1..=1000).contains(&order) {
            return Err(ConfigError::new("/N", "N must be in 1..=1000"));
        }
        let k = parse_k(obj, n, order)?;
        let branch = match obj.get("sqrt_branch") {
            None => SqrtBranch::default(),
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|_| ConfigError::new("/sqrt_branch", "expected \"refined\" or \"diagonal\""))?,
        };
        let ctx = CocycleContext::with_branch(n, order, k, branch).map_err(|e| ConfigError::new("/K", e.to_string()))?;

        let alpha = match obj.get("alpha") {
            None => vec![ctx.zero(); n],
            Some(Value::Array(a)) if a.len() == n => a
                .iter()
                .enumerate()
                .map(|(i, x)| parse_scalar(&ctx, x, &ptr("/alpha", i)))
                .collect::<CResult<Vec<_>>>()?,
            Some(_) => return Err(ConfigError::new("/alpha", format!("expected {n} scalars"))),
        };
        let b = parse_b(obj, &ctx)?;
        let v_spec = match obj.get("V") {
            None => VSpec::Natural,
            Some(v) => parse_v(v, "/V")?,
        };
        let v = v_spec.build(&ctx).map_err(|e| ConfigError::new("/V", e.to_string()))?;
        let module = FockModule::new(ModuleParams {
            ctx: Arc::clone(&ctx),
            v,
            alpha,
            b,
        })
        .map_err(|e| ConfigError::new("/V", e.to_string()))?;

        let window = get_int(obj, "window", Some(DEFAULT_WINDOW))?;
        let probe_window = get_int(obj, "probe_window", Some(DEFAULT_PROBE_WINDOW))?;
        let radf_window = get_int(obj, "radf_window", Some(DEFAULT_RADF_WINDOW))?;
        for (key, w, hi) in [("window", window, 64), ("probe_window", probe_window, 4), ("radf_window", radf_window, 8)] {
            if !(1..=hi).contains(&w) {
                return Err(ConfigError::new(ptr("", key), format!("must be in 1..={hi}")));
            }
        }
        let trials = get_int(obj, "trials", Some(DEFAULT_TRIALS as i64))?;
        if !(1..=1_000_000).contains(&trials) {
            return Err(ConfigError::new("/trials", "must be in 1..=1000000"));
        }
        let seed = match obj.get("seed") {
            None => 0,
            Some(v) => v.as_u64().ok_or_else(|| ConfigError::new("/seed", "expected a non-negative integer"))?,
        };
        let suites = match obj.get("suites") {
            None => Suite::ALL.to_vec(),
            Some(Value::Array(a)) if !a.is_empty() => {
                let mut out = Vec::new();
                for (i, s) in a.iter().enumerate() {
                    let at = ptr("/suites", i);
                    let suite: Suite = s
                        .as_str()
                        .ok_or_else(|| ConfigError::new(&at, "expected a suite name"))?
                        .parse()
                        .map_err(|e: String| ConfigError::new(&at, e))?;
                    if !out.contains(&suite) {
                        out.push(suite);
                    }
                }
                out
            }
            Some(_) => return Err(ConfigError::new("/suites", "expected a non-empty list of suite names")),
        };
        Ok(Self {
            name,
            v_spec,
            module,
            window,
            probe_window,
            radf_window,
            trials: trials as u64,
            seed,
            suites,
        })
    }

    pub fn ctx(&self) -> &Arc<CocycleContext> {
        self.module.ctx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> CResult<Scenario> {
        Scenario::from_json_str(s, "t")
    }

    #[test]
    fn minimal_defaults() {
        let s = load(r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(s.suites, Suite::ALL.to_vec());
        assert_eq!(s.module.dim_v(), 2);
        assert_eq!(s.window, DEFAULT_WINDOW);
    }

    #[test]
    fn pointers() {
        let cases = [
            (r#"{"n": 2, "N": 3, "K": [[0, 1], [1, 0]]}"#, "/K/1/0"),
            (r#"{"n": 2, "N": 3, "K": [[1, 1], [2, 0]]}"#, "/K/0/0"),
            (r#"{"n": 2, "N": 2, "K": [[0, 1]]}"#, "/K"),
            (r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "alpha": ["0", "x"]}"#, "/alpha/1"),
            (r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "B": {"kind": "truncated", "k": 2, "psi": "1"}}"#, "/B/psi"),
            (r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "V": {"tensor": ["natural", "spin"]}}"#, "/V/tensor/1"),
            (r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "suites": ["lie", "nope"]}"#, "/suites/1"),
            (r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "extra": 1}"#, "/extra"),
            (r#"{"N": 2}"#, "/n"),
        ];
        for (text, pointer) in cases {
            assert_eq!(load(text).unwrap_err().pointer, pointer, "{text}");
        }
    }

    #[test]
    fn tensor_spec() {
        let s = load(r#"{"n": 2, "N": 2, "K": [[0, 1], [1, 0]], "V": {"tensor": ["natural", "dual"]}}"#).unwrap();
        assert_eq!(s.module.dim_v(), 4);
        assert_eq!(s.v_spec.to_string(), "tensor(natural,dual)");
    }
}
