//! JSON file formats for games, measurements and strategies.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays of
//! rows. Every document carries `format_version`.

use std::path::Path;

use num_complex::Complex64;
use qgame_core::game::QuantumGame;
use qgame_core::linalg::{tol, ComplexMatrix};
use qgame_core::quantum::{chi_to_kraus, kraus_to_chi, validate_chi, validate_density, validate_kraus, validate_povm};
use qgame_core::quantum::{ChiMatrix, KrausChannel, Povm};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

pub type Matrix = Vec<Vec<[f64; 2]>>;

pub fn to_matrix(m: &ComplexMatrix) -> Matrix {
    m.rows().into_iter().map(|row| row.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn from_matrix(m: &Matrix) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> =
        m.iter().map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSpec {
    pub elements: Vec<Matrix>,
    #[serde(rename = "payoffs_I")]
    pub payoffs_i: Vec<f64>,
    #[serde(rename = "payoffs_II")]
    pub payoffs_ii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n1: usize,
    pub n2: usize,
    pub rho: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoff_ops: Option<[Matrix; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm: Option<MeasurementSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub measurement: MeasurementSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Strategy {
    Kraus { operators: Vec<Matrix> },
    Chi { matrix: Matrix },
    Unitary { matrix: Matrix },
    Classical { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub strategy: Strategy,
}

pub fn parse_document<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))?;
    let version = value.get("format_version").and_then(serde_json::Value::as_u64);
    match version {
        Some(v) if v == FORMAT_VERSION as u64 => {}
        Some(v) => return Err(CliError::Parse(format!("{origin}: unsupported format_version {v}"))),
        None => return Err(CliError::Parse(format!("{origin}: missing format_version"))),
    }
    // Re-parse from text so positions in error messages refer to the file.
    serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: cannot read: {e}", path.display())))?;
    parse_document(&text, &path.display().to_string())
}

/// Validation tolerance, overridable through `QGAME_TOL`.
pub fn tolerance() -> Result<f64, CliError> {
    match std::env::var("QGAME_TOL") {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(CliError::Parse(format!("QGAME_TOL must be a positive number, got {s:?}"))),
        },
        Err(_) => Ok(tol::VALIDATION),
    }
}

pub fn build_povm(spec: &MeasurementSpec, tol: f64) -> Result<Povm, CliError> {
    let elements = spec.elements.iter().map(from_matrix).collect::<Result<Vec<_>, _>>()?;
    Ok(validate_povm(elements, tol)?)
}

/// A loaded game together with its referee measurement, when the file has one.
pub struct LoadedGame {
    pub game: QuantumGame,
    pub measurement: Option<(Povm, Vec<f64>, Vec<f64>)>,
}

pub fn build_game(file: &GameFile, tol: f64) -> Result<LoadedGame, CliError> {
    let rho = validate_density(from_matrix(&file.rho)?, tol)?;
    match (&file.payoff_ops, &file.povm) {
        (Some([r1, r2]), None) => Ok(LoadedGame {
            game: QuantumGame::new(rho, from_matrix(r1)?, from_matrix(r2)?, file.n1, file.n2)?,
            measurement: None,
        }),
        (None, Some(spec)) => {
            let povm = build_povm(spec, tol)?;
            let game = QuantumGame::from_measurement(rho, &povm, &spec.payoffs_i, &spec.payoffs_ii, file.n1, file.n2)?;
            Ok(LoadedGame {
                game,
                measurement: Some((povm, spec.payoffs_i.clone(), spec.payoffs_ii.clone())),
            })
        }
        _ => Err(CliError::Parse("game file needs exactly one of payoff_ops or povm".into())),
    }
}

pub fn load_game(path: &Path) -> Result<LoadedGame, CliError> {
    build_game(&read_document(path)?, tolerance()?)
}

/// A strategy in χ form, plus Kraus operators when the file gave them.
#[derive(Debug, Clone)]
pub struct LoadedStrategy {
    pub chi: ChiMatrix,
    pub kraus: Option<KrausChannel>,
}

impl LoadedStrategy {
    pub fn channel(&self) -> Result<KrausChannel, CliError> {
        match &self.kraus {
            Some(k) => Ok(k.clone()),
            None => Ok(chi_to_kraus(&self.chi)?),
        }
    }
}

pub fn build_strategy(s: &Strategy, n: usize, tol: f64) -> Result<LoadedStrategy, CliError> {
    let from_kraus = |ops: Vec<ComplexMatrix>| -> Result<LoadedStrategy, CliError> {
        let ch = validate_kraus(ops, tol)?;
        if ch.dim() != n {
            return Err(qgame_core::Error::DimensionMismatch {
                expected: n,
                found: ch.dim(),
            }
            .into());
        }
        Ok(LoadedStrategy {
            chi: kraus_to_chi(&ch),
            kraus: Some(ch),
        })
    };
    match s {
        Strategy::Kraus { operators } => from_kraus(operators.iter().map(from_matrix).collect::<Result<_, _>>()?),
        Strategy::Unitary { matrix } => from_kraus(vec![from_matrix(matrix)?]),
        Strategy::Classical { index } => {
            if *index >= n {
                return Err(CliError::Validation(format!(
                    "classical strategy index {index} out of range for dimension {n}"
                )));
            }
            from_kraus(vec![ComplexMatrix::cyclic_shift(n, *index)])
        }
        Strategy::Chi { matrix } => Ok(LoadedStrategy {
            chi: validate_chi(from_matrix(matrix)?, n, tol)?,
            kraus: None,
        }),
    }
}

pub fn load_strategy(path: &Path, n: usize) -> Result<LoadedStrategy, CliError> {
    let file: StrategyFile = read_document(path)?;
    build_strategy(&file.strategy, n, tolerance()?)
}
