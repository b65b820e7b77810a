//! Single-object JSON state files and 17-significant-digit number output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use bellforge_core::linalg::CMatrix;
use bellforge_core::{Density2Q, PureState2Q, C64};
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{CliError, CliResult};

/// `{"kind": "pure", "amplitudes": [[re, im] × 4]}` or
/// `{"kind": "mixed", "matrix": [[[re, im] × 4] × 4]}`, with an optional `label`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateFile {
    Pure {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        amplitudes: [[f64; 2]; 4],
    },
    Mixed {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        matrix: [[[f64; 2]; 4]; 4],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState2Q),
    Mixed(Density2Q),
}

impl State {
    pub fn kind(&self) -> &'static str {
        match self {
            State::Pure(_) => "pure",
            State::Mixed(_) => "mixed",
        }
    }
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl StateFile {
    pub fn from_pure(s: &PureState2Q, label: Option<String>) -> Self {
        StateFile::Pure { label, amplitudes: s.amplitudes().map(pair) }
    }

    pub fn from_density(rho: &Density2Q, label: Option<String>) -> Self {
        let m = rho.matrix();
        StateFile::Mixed { label, matrix: std::array::from_fn(|r| std::array::from_fn(|c| pair(m[(r, c)]))) }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            StateFile::Pure { label, .. } | StateFile::Mixed { label, .. } => label.as_deref(),
        }
    }

    /// Validates normalization (and Hermiticity, PSD, unit trace for mixed).
    pub fn to_state(&self) -> CliResult<State> {
        match self {
            StateFile::Pure { amplitudes, .. } => {
                let amps = amplitudes.map(|[re, im]| C64::new(re, im));
                let s = PureState2Q::new(amps)?;
                if !s.is_normalized() {
                    return Err(CliError::InvalidState(format!("amplitudes have norm² {}", s.norm_sqr())));
                }
                Ok(State::Pure(s))
            }
            StateFile::Mixed { matrix, .. } => {
                let data = matrix.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
                Ok(State::Mixed(Density2Q::new(CMatrix::new(4, data)?)?))
            }
        }
    }

    pub fn parse(text: &str, context: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse { context: context.to_owned(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }
}

/// Writes every `f64` as `d.ddddddddddddddddde±x` so doubles survive a round trip.
#[derive(Debug, Clone, Copy, Default)]
pub struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellforge_core::BellState;

    #[test]
    fn pure_round_trip_is_exact() {
        let s = PureState2Q::new([
            C64::new(0.1, -0.3),
            C64::new(1.0 / 3.0, 0.0),
            C64::new(-0.2, 0.7),
            C64::new(std::f64::consts::PI / 10.0, 1e-300),
        ])
        .unwrap()
        .normalize()
        .unwrap();
        let text = StateFile::from_pure(&s, Some("x".into())).to_json();
        let back = StateFile::parse(&text, "test").unwrap();
        assert_eq!(back.label(), Some("x"));
        assert_eq!(back.to_state().unwrap(), State::Pure(s));
    }

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
        let text = StateFile::from_pure(&BellState::PhiPlus.state(), None).to_json();
        assert!(text.contains("7.0710678118654757e-1"), "{text}");
        assert!(!text.contains("label"));
    }

    #[test]
    fn parses_hand_written_pure_file() {
        let text = r#"{"kind": "pure", "label": "phi+", "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}"#;
        let state = StateFile::parse(text, "test").unwrap().to_state().unwrap();
        assert_eq!(state, State::Pure(BellState::PhiPlus.state()));
    }

    #[test]
    fn rejects_unnormalized_and_malformed() {
        let text = r#"{"kind": "pure", "amplitudes": [[1, 0], [1, 0], [0, 0], [0, 0]]}"#;
        let err = StateFile::parse(text, "t").unwrap().to_state().unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = StateFile::parse(r#"{"kind": "pure", "amplitudes": [[1, 0]]}"#, "t").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = StateFile::parse(r#"{"kind": "qutrit"}"#, "t").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_non_positive_matrix() {
        let mut matrix = [[[0.0; 2]; 4]; 4];
        matrix[0][0] = [1.5, 0.0];
        matrix[1][1] = [-0.5, 0.0];
        let err = StateFile::Mixed { label: None, matrix }.to_state().unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn mixed_round_trip_is_exact() {
        let rho = Density2Q::from_pure(&BellState::PsiMinus.state())
            .mix(&Density2Q::new(CMatrix::identity(4).unwrap().scale_real(0.25)).unwrap(), 0.1);
        let text = StateFile::from_density(&rho, None).to_json();
        match StateFile::parse(&text, "t").unwrap().to_state().unwrap() {
            State::Mixed(back) => assert_eq!(back.matrix().max_abs_diff(rho.matrix()), 0.0),
            other => panic!("{other:?}"),
        }
    }
}
