//! State files.

use serde::Deserialize;

use qchernoff::gaussian::GaussianState;
use qchernoff::matcore::HermitianMatrix;
use qchernoff::states::{to_bloch, DensityMatrix, DiscreteDistribution, QubitState, StateSpec};

use crate::CliError;

/// One state per file, as a single-key JSON object.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpecFile {
    Matrix {
        dim: usize,
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
    Bloch([f64; 3]),
    Ket {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
    Gaussian {
        beta: BetaField,
        #[serde(default)]
        q: f64,
        #[serde(default)]
        p: f64,
        #[serde(default)]
        r: f64,
        #[serde(default)]
        phi: f64,
    },
    /// Classical probability vector.
    Distribution(Vec<f64>),
}

/// `beta` as a number or the string `"inf"` for a pure state.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum BetaField {
    Number(f64),
    Text(String),
}

impl BetaField {
    fn value(&self) -> Result<f64, CliError> {
        match self {
            BetaField::Number(b) => Ok(*b),
            BetaField::Text(t) if t == "inf" || t == "infinity" => Ok(f64::INFINITY),
            BetaField::Text(t) => Err(CliError::Validation(format!("beta must be a number or \"inf\", got {t:?}"))),
        }
    }
}

/// A parsed input.
#[derive(Clone, Debug)]
pub enum Loaded {
    Density(DensityMatrix),
    Distribution(DiscreteDistribution),
    Gaussian(GaussianState),
}

impl StateSpecFile {
    fn core_spec(&self) -> Option<StateSpec> {
        match self {
            StateSpecFile::Matrix { dim, re, im } => {
                Some(StateSpec::Matrix { dim: *dim, re: re.clone(), im: im.clone() })
            }
            StateSpecFile::Bloch(r) => Some(StateSpec::Bloch(*r)),
            StateSpecFile::Ket { re, im } => Some(StateSpec::Ket { re: re.clone(), im: im.clone() }),
            _ => None,
        }
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        match self {
            StateSpecFile::Gaussian { beta, q, p, r, phi } => {
                Ok(Loaded::Gaussian(GaussianState::new(beta.value()?, [*q, *p], *r, *phi)?))
            }
            StateSpecFile::Distribution(p) => Ok(Loaded::Distribution(DiscreteDistribution::new(p.clone())?)),
            _ => Ok(Loaded::Density(DensityMatrix::from_spec(&self.core_spec().expect("finite-dimensional"))?)),
        }
    }

    /// A traceless perturbation: a matrix as given, or `½ v·σ` for a Bloch vector `v`.
    pub fn direction(&self) -> Result<HermitianMatrix, CliError> {
        match self {
            StateSpecFile::Matrix { .. } => Ok(self.core_spec().expect("matrix").hermitian()?),
            StateSpecFile::Bloch(v) => {
                let mut m = HermitianMatrix::zeros(2);
                for (axis, x) in v.iter().enumerate() {
                    m = &m + &(&qchernoff::matcore::pauli(axis) * (x / 2.0));
                }
                Ok(m)
            }
            _ => Err(CliError::Validation("a direction must be a matrix or a Bloch vector".into())),
        }
    }
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Density(_) => "quantum",
            Loaded::Distribution(_) => "classical",
            Loaded::Gaussian(_) => "gaussian",
        }
    }

    /// Finite-dimensional density matrix; distributions become diagonal states.
    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        match self {
            Loaded::Density(rho) => Ok(rho.clone()),
            Loaded::Distribution(p) => Ok(DensityMatrix::diagonal(p.probs())?),
            Loaded::Gaussian(_) => Err(CliError::Validation("expected a finite-dimensional state, got a Gaussian state".into())),
        }
    }

    pub fn qubit(&self) -> Result<QubitState, CliError> {
        let rho = self.density()?;
        if rho.dim() != 2 {
            return Err(CliError::Validation(format!("expected a qubit, got dimension {}", rho.dim())));
        }
        Ok(to_bloch(&rho)?)
    }

    pub fn gaussian(&self) -> Result<GaussianState, CliError> {
        match self {
            Loaded::Gaussian(g) => Ok(*g),
            _ => Err(CliError::Validation("expected a Gaussian state".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<StateSpecFile, serde_json::Error> {
        serde_json::from_str(s)
    }

    #[test]
    fn variants_parse() {
        assert!(matches!(parse(r#"{"bloch": [0, 0, 0.5]}"#).unwrap(), StateSpecFile::Bloch(_)));
        assert!(matches!(parse(r#"{"ket": {"re": [1, 0]}}"#).unwrap(), StateSpecFile::Ket { .. }));
        let m = parse(r#"{"matrix": {"dim": 2, "re": [[0.5, 0], [0, 0.5]], "im": [[0, 0], [0, 0]]}}"#).unwrap();
        assert!(matches!(m.load().unwrap(), Loaded::Density(_)));
        let g = parse(r#"{"gaussian": {"beta": "inf", "q": 1, "p": 0, "r": 0.2, "phi": 0}}"#).unwrap();
        assert!(g.load().unwrap().gaussian().unwrap().beta.is_pure());
        assert!(matches!(parse(r#"{"distribution": [0.2, 0.8]}"#).unwrap().load().unwrap(), Loaded::Distribution(_)));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse(r#"{"bloch": [0, 0, 0.5], "ket": {"re": [1, 0]}}"#).is_err());
        assert!(parse(r#"{"spin": 1}"#).is_err());
        assert!(parse(r#"{"bloch": [0, 0]}"#).is_err());
        let bad = parse(r#"{"gaussian": {"beta": "hot"}}"#).unwrap();
        assert!(matches!(bad.load(), Err(CliError::Validation(_))));
    }

    #[test]
    fn bloch_direction_is_traceless() {
        let d = parse(r#"{"bloch": [0.2, 0, -0.4]}"#).unwrap().direction().unwrap();
        assert!(d.trace().abs() < 1e-16);
        assert!((d.as_matrix()[(0, 0)].re + 0.2).abs() < 1e-16);
    }
}
