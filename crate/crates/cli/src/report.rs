use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::doc::SCHEMA_VERSION;
use crate::error::ErrorObject;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FALSE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
/// An oracle contradicted the main computation.
pub const EXIT_ORACLE_DISAGREES: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Outcome of one independent cross-check. `agrees` is `None` when the
/// oracle could not run, with the reason in `detail`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub agrees: Option<bool>,
    pub detail: String,
}

impl VerifyCheck {
    pub fn new(name: impl Into<String>, agrees: Option<bool>, detail: impl Into<String>) -> Self {
        VerifyCheck {
            name: name.into(),
            agrees,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub ok: bool,
    pub exit_code: i32,
    pub result: Option<Value>,
    pub errors: Vec<ErrorObject>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<Vec<VerifyCheck>>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<InputDigest>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            ok: true,
            exit_code: EXIT_OK,
            result: None,
            errors: Vec::new(),
            verify: None,
        }
    }
}
