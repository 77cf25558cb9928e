use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{lcd, BigInt, Rat, Surd};
use crate::linalg::{IntMatrix, NormKind};
use crate::ser::{json_rat, surd_from_json, surd_json};

/// An approximation factor `coeff * sqrt(radicand)`.
///
/// Top-level inputs are rational and at least 1; gaps derived inside a
/// reduction can be smaller and can carry a square-root factor.
pub type Gap = Surd;

pub fn gap(a: i64, b: i64) -> Gap {
    Surd::rational(Rat::new(BigInt::from(a), BigInt::from(b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvpInstance {
    pub gap: Gap,
    pub matrix: IntMatrix,
    pub norm: NormKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SapInstance {
    pub gap: Gap,
    pub x: Vec<Rat>,
    pub norm: NormKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GdaInstance {
    pub gap: Gap,
    /// The range bound, rational or `r * sqrt(s)`.
    pub bound: Surd,
    pub x: Vec<Rat>,
    pub norm: NormKind,
}

impl SvpInstance {
    pub fn new(gap: Gap, matrix: IntMatrix, norm: NormKind) -> Result<Self> {
        if matrix.det().is_zero() {
            return precondition("SVP matrix must be nonsingular");
        }
        Ok(SvpInstance { gap, matrix, norm })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

impl SapInstance {
    pub fn new(gap: Gap, x: Vec<Rat>, norm: NormKind) -> Result<Self> {
        if x.is_empty() {
            return precondition("empty target vector");
        }
        Ok(SapInstance { gap, x, norm })
    }

    pub fn lcd(&self) -> BigInt {
        lcd(&self.x)
    }
}

impl GdaInstance {
    pub fn new(gap: Gap, bound: Surd, x: Vec<Rat>, norm: NormKind) -> Result<Self> {
        if x.is_empty() {
            return precondition("empty target vector");
        }
        Ok(GdaInstance { gap, bound, x, norm })
    }

    pub fn lcd(&self) -> BigInt {
        lcd(&self.x)
    }

    /// `floor(N)`.
    pub fn range(&self) -> BigInt {
        self.bound.floor()
    }

    /// `floor(gap * N)`, the largest admissible output.
    pub fn output_range(&self) -> BigInt {
        self.gap.mul(&self.bound).floor()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Svp(SvpInstance),
    Sap(SapInstance),
    Gda(GdaInstance),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Svp,
    Sap,
    Gda,
}

impl ProblemKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svp" => Ok(ProblemKind::Svp),
            "sap" => Ok(ProblemKind::Sap),
            "gda" => Ok(ProblemKind::Gda),
            other => Err(Error::Parse(format!("unknown problem {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Svp => "svp",
            ProblemKind::Sap => "sap",
            ProblemKind::Gda => "gda",
        }
    }
}

fn rats_json(x: &[Rat]) -> Value {
    Value::Array(x.iter().map(|v| Value::String(v.to_string())).collect())
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Svp(_) => ProblemKind::Svp,
            Instance::Sap(_) => ProblemKind::Sap,
            Instance::Gda(_) => ProblemKind::Gda,
        }
    }

    pub fn norm(&self) -> NormKind {
        match self {
            Instance::Svp(i) => i.norm,
            Instance::Sap(i) => i.norm,
            Instance::Gda(i) => i.norm,
        }
    }

    pub fn gap(&self) -> &Gap {
        match self {
            Instance::Svp(i) => &i.gap,
            Instance::Sap(i) => &i.gap,
            Instance::Gda(i) => &i.gap,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Instance::Svp(i) => i.dim(),
            Instance::Sap(i) => i.x.len(),
            Instance::Gda(i) => i.x.len(),
        }
    }

    /// Replaces the norm, e.g. from a command-line override.
    pub fn with_norm(mut self, norm: NormKind) -> Self {
        match &mut self {
            Instance::Svp(i) => i.norm = norm,
            Instance::Sap(i) => i.norm = norm,
            Instance::Gda(i) => i.norm = norm,
        }
        self
    }

    pub fn to_json(&self) -> Value {
        match self {
            Instance::Svp(i) => json!({
                "problem": "svp",
                "norm": i.norm.as_str(),
                "alpha": surd_json(&i.gap),
                "matrix": i.matrix,
            }),
            Instance::Sap(i) => json!({
                "problem": "sap",
                "norm": i.norm.as_str(),
                "alpha": surd_json(&i.gap),
                "x": rats_json(&i.x),
            }),
            Instance::Gda(i) => json!({
                "problem": "gda",
                "norm": i.norm.as_str(),
                "alpha": surd_json(&i.gap),
                "x": rats_json(&i.x),
                "N": surd_json(&i.bound),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")));
        let kind = match field("problem")? {
            Value::String(s) => ProblemKind::parse(s)?,
            other => return Err(Error::Parse(format!("\"problem\" must be a string, got {other}"))),
        };
        let norm = match field("norm")? {
            Value::String(s) => NormKind::parse(s)?,
            Value::Number(n) => NormKind::parse(&n.to_string())?,
            other => return Err(Error::Parse(format!("bad norm {other}"))),
        };
        let gap = match v.get("alpha") {
            None => Surd::integer(1),
            Some(a) => surd_from_json(a)?,
        };
        if gap.is_zero() {
            return Err(Error::Parse("alpha must be positive".into()));
        }
        let x = || -> Result<Vec<Rat>> {
            match field("x")? {
                Value::Array(items) => items.iter().map(json_rat).collect(),
                other => Err(Error::Parse(format!("\"x\" must be an array, got {other}"))),
            }
        };
        Ok(match kind {
            ProblemKind::Svp => {
                let matrix: IntMatrix =
                    serde_json::from_value(field("matrix")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                Instance::Svp(SvpInstance::new(gap, matrix, norm)?)
            }
            ProblemKind::Sap => Instance::Sap(SapInstance::new(gap, x()?, norm)?),
            ProblemKind::Gda => {
                let bound = surd_from_json(field("N")?)?;
                Instance::Gda(GdaInstance::new(gap, bound, x()?, norm)?)
            }
        })
    }


    /// Checks the constraints on user-supplied instances: `alpha >= 1` and,
    /// for GDA, `N >= 1`.
    pub fn validate_input(&self) -> Result<()> {
        if self.gap().cmp_rat(&Rat::from_integer(BigInt::from(1))).is_lt() {
            return precondition(format!("alpha must be at least 1, got {}", self.gap()));
        }
        if let Instance::Gda(g) = self {
            if g.bound.cmp_rat(&Rat::from_integer(BigInt::from(1))).is_lt() {
                return precondition(format!("N must be at least 1, got {}", g.bound));
            }
        }
        Ok(())
    }

    /// SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(&self.to_json()).expect("instances always serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

impl std::str::FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Instance::from_json(&v)
    }
}

impl From<SvpInstance> for Instance {
    fn from(i: SvpInstance) -> Self {
        Instance::Svp(i)
    }
}

impl From<SapInstance> for Instance {
    fn from(i: SapInstance) -> Self {
        Instance::Sap(i)
    }
}

impl From<GdaInstance> for Instance {
    fn from(i: GdaInstance) -> Self {
        Instance::Gda(i)
    }
}
