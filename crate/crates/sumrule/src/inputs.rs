//! Measure and coefficient inputs: built-in families, measure JSON files and
//! coefficient files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sumrule_core::jacobi::{
    geronimus_inverse, kesten_mckay_verblunsky, reference_coefficients, szego_pushforward,
    z_decompose, JacobiCoefficients, PushforwardDirection, VerblunskySeq, ZChain,
};
use sumrule_core::measures::{AcShape, Atom, MeasureS1};
use sumrule_core::sumrules::{CoefficientSide, Ensemble};

use crate::error::{CliError, Result};

/// A measure together with the coefficient input used for its sum side.
#[derive(Debug, Clone)]
pub struct VerifyInput {
    pub label: String,
    pub measure: MeasureS1,
    pub coefficients: CoefficientSide,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn params(spec: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut map = BTreeMap::new();
    for pair in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("expected key=value in {spec:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("{k} is not a number in {spec:?}")))?;
        map.insert(k.trim().to_owned(), v);
    }
    Ok((name.trim().to_ascii_lowercase(), map))
}

fn param(map: &BTreeMap<String, f64>, key: &str, spec: &str) -> Result<f64> {
    map.get(key)
        .copied()
        .ok_or_else(|| CliError::config(format!("{spec:?} needs {key}=<value>")))
}

/// Resolves `--measure`: a built-in family or a measure JSON file.
pub fn resolve_measure(spec: &str, ensemble: &Ensemble, depth: usize) -> Result<VerifyInput> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let file: MeasureFile =
            serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
                context: spec.to_owned(),
                source,
            })?;
        return Ok(VerifyInput {
            label: spec.to_owned(),
            measure: file.build(ensemble)?,
            coefficients: CoefficientSide::FromMeasure { depth },
        });
    }
    let (name, map) = params(spec)?;
    let law = ensemble.law();
    let wrong = || {
        Err(CliError::config(format!(
            "measure {spec:?} is not available for the {ensemble:?} ensemble"
        )))
    };
    let (measure, coefficients) = match (name.as_str(), *ensemble) {
        ("sc", Ensemble::Hermite)
        | ("mp", Ensemble::Laguerre { .. })
        | ("kmk", Ensemble::Jacobi { .. })
        | ("equilibrium", _) => (
            MeasureS1::equilibrium(law),
            reference_side(ensemble, depth)?,
        ),
        ("rank-one", Ensemble::Hermite) => {
            let c = param(&map, "c", spec)?;
            let mut b = vec![0.0; depth];
            b[0] = c;
            let j = JacobiCoefficients::new(b, vec![1.0; depth - 1])?;
            (MeasureS1::rank_one(c)?, CoefficientSide::Hermite(j))
        }
        ("atom-at-zero", Ensemble::Laguerre { tau }) => {
            let z = (0..2 * depth - 1)
                .map(|k| if k % 2 == 0 { tau } else { 1.0 })
                .collect();
            (
                MeasureS1::mp_with_atom_at_zero(tau)?,
                CoefficientSide::Laguerre(ZChain::new(z)?),
            )
        }
        ("bernstein-szego", Ensemble::Jacobi { kappa1, kappa2 })
            if kappa1 == 0.0 && kappa2 == 0.0 =>
        {
            let r = param(&map, "r", spec)?;
            let mut alpha = vec![0.0; 2 * depth - 1];
            alpha[0] = r;
            (
                MeasureS1::bernstein_szego_unit(r)?,
                CoefficientSide::Jacobi(VerblunskySeq::new(alpha)?),
            )
        }
        ("sc" | "mp" | "kmk" | "rank-one" | "atom-at-zero" | "bernstein-szego", _) => {
            return wrong()
        }
        _ => return Err(CliError::config(format!("unknown measure {spec:?}"))),
    };
    Ok(VerifyInput {
        label: spec.to_owned(),
        measure,
        coefficients,
    })
}

fn reference_side(ensemble: &Ensemble, depth: usize) -> Result<CoefficientSide> {
    Ok(match *ensemble {
        Ensemble::Hermite => {
            CoefficientSide::Hermite(reference_coefficients(&ensemble.law(), depth)?)
        }
        Ensemble::Laguerre { .. } => CoefficientSide::Laguerre(z_decompose(
            &reference_coefficients(&ensemble.law(), depth)?,
        )?),
        Ensemble::Jacobi { kappa1, kappa2 } => {
            CoefficientSide::Jacobi(kesten_mckay_verblunsky(kappa1, kappa2, 2 * depth - 1)?)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomRecord {
    pub position: f64,
    pub weight: f64,
}

/// `{"kind", "params", "atoms_plus", "atoms_minus", "ac_mass"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    /// `equilibrium`, `rank-one`, `bernstein-szego`, `poly-modulated`, `gapped` or `none`.
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub atoms_plus: Vec<AtomRecord>,
    #[serde(default)]
    pub atoms_minus: Vec<AtomRecord>,
    pub ac_mass: f64,
}

impl MeasureFile {
    fn number(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .and_then(serde_json::Value::as_f64)
            .ok_or_else(|| {
                CliError::config(format!(
                    "measure kind {:?} needs numeric params.{key}",
                    self.kind
                ))
            })
    }

    pub fn build(&self, ensemble: &Ensemble) -> Result<MeasureS1> {
        let law = ensemble.law();
        let on_unit = matches!(ensemble, Ensemble::Jacobi { .. });
        let shape = match self.kind.as_str() {
            "none" => AcShape::None,
            "equilibrium" => AcShape::Equilibrium(law),
            "rank-one" => AcShape::RankOne {
                c: self.number("c")?,
            },
            "bernstein-szego" => {
                let r = self.number("r")?;
                if !(r.abs() < 1.0) {
                    return Err(CliError::config("params.r must satisfy |r| < 1"));
                }
                let inner = AcShape::BernsteinSzego { r };
                if on_unit {
                    AcShape::OnUnitInterval(Box::new(inner))
                } else {
                    inner
                }
            }
            "poly-modulated" => {
                let coeffs = self
                    .params
                    .get("coeffs")
                    .and_then(|v| v.as_array())
                    .and_then(|a| {
                        a.iter()
                            .map(serde_json::Value::as_f64)
                            .collect::<Option<Vec<_>>>()
                    })
                    .ok_or_else(|| {
                        CliError::config("poly-modulated needs params.coeffs, an array of numbers")
                    })?;
                AcShape::poly_modulated(law, coeffs)?
            }
            "gapped" => AcShape::gapped(law, self.number("lo")?, self.number("hi")?)?,
            other => return Err(CliError::config(format!("unknown measure kind {other:?}"))),
        };
        let atoms = |v: &[AtomRecord]| v.iter().map(|a| Atom::new(a.position, a.weight)).collect();
        Ok(MeasureS1::new(
            shape,
            self.ac_mass,
            atoms(&self.atoms_plus),
            atoms(&self.atoms_minus),
            0.0,
        )?)
    }
}

/// Coefficients as stored in files (`a` has one entry fewer than `b`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Reads a JSON (`{"a", "b"}`) or CSV (`k,a_k,b_k`) coefficient file.
pub fn read_coefficients(path: &Path) -> Result<JacobiCoefficients> {
    let text = read(path)?;
    let file = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        parse_coefficient_csv(&text)?
    } else {
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            context: path.display().to_string(),
            source,
        })?
    };
    if file.b.is_empty() || file.a.len() + 1 != file.b.len() {
        return Err(CliError::config(format!(
            "coefficient file needs len(a) = len(b) - 1, got {} and {}",
            file.a.len(),
            file.b.len()
        )));
    }
    Ok(JacobiCoefficients::new(file.b, file.a)?)
}

/// Rows `k,a_k,b_k` for `k = 1..n`; `a_n` is left empty.
pub fn parse_coefficient_csv(text: &str) -> Result<CoefficientFile> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["k", "a_k", "b_k"] {
        return Err(CliError::config(
            "coefficient CSV must have the header k,a_k,b_k",
        ));
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::config(format!("row {}: {s:?} is not a number", i + 1)))
        };
        if row[0].parse::<usize>().ok() != Some(i + 1) {
            return Err(CliError::config(format!(
                "row {} must have k = {}",
                i + 1,
                i + 1
            )));
        }
        b.push(num(&row[2])?);
        if !row[1].is_empty() {
            a.push(num(&row[1])?);
        }
    }
    Ok(CoefficientFile { a, b })
}

/// Coefficient side of `ensemble` from a Jacobi matrix (on `[0, 1]` for Jacobi).
pub fn coefficient_side(ensemble: &Ensemble, j: JacobiCoefficients) -> Result<CoefficientSide> {
    Ok(match ensemble {
        Ensemble::Hermite => CoefficientSide::Hermite(j),
        Ensemble::Laguerre { .. } => CoefficientSide::Laguerre(z_decompose(&j)?),
        Ensemble::Jacobi { .. } => CoefficientSide::Jacobi(geronimus_inverse(&szego_pushforward(
            &j,
            PushforwardDirection::From01,
        ))?),
    })
}
