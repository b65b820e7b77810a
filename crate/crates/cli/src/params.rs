//! Sign and noise names shared by flags and sweep files.

use std::fmt;
use std::str::FromStr;

use bellforge_core::{NoiseKind, Sign};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SignArg(pub Sign);

impl FromStr for SignArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+" | "plus" => Ok(SignArg(Sign::Plus)),
            "-" | "minus" => Ok(SignArg(Sign::Minus)),
            _ => Err(format!("unknown sign {s:?} (expected + or -)")),
        }
    }
}

impl TryFrom<String> for SignArg {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<SignArg> for String {
    fn from(s: SignArg) -> String {
        s.to_string()
    }
}

impl fmt::Display for SignArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NoiseArg(pub NoiseKind);

impl FromStr for NoiseArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "white" => Ok(NoiseArg(NoiseKind::White)),
            "dephasing" => Ok(NoiseArg(NoiseKind::Dephasing)),
            "ginibre" => Ok(NoiseArg(NoiseKind::Ginibre)),
            _ => Err(format!("unknown noise {s:?} (expected white, dephasing or ginibre)")),
        }
    }
}

impl TryFrom<String> for NoiseArg {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<NoiseArg> for String {
    fn from(n: NoiseArg) -> String {
        n.to_string()
    }
}

impl fmt::Display for NoiseArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.name())
    }
}
