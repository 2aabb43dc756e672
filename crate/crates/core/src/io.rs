// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! JSON input with located errors.

use std::path::Path;

use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("{origin}: cannot read: {message}")]
    Io { origin: String, message: String },
    /// Malformed JSON, or a value that fails validation (bad token, ...).
    #[error("{origin}:{line}:{column}: parse error: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON of the wrong shape.
    #[error("{origin}: schema error at `{field}`: {message}")]
    Schema {
        origin: String,
        field: String,
        message: String,
    },
}

/// Shape errors detected by serde itself, as opposed to validation failures
/// raised by our own types.
fn is_shape_error(msg: &str) -> bool {
    [
        "missing field",
        "unknown field",
        "invalid type",
        "invalid length",
        "unknown variant",
        "duplicate field",
    ]
    .iter()
    .any(|p| msg.starts_with(p))
}

/// Deserializes `text`. Syntax errors and rejected values (such as an
/// unknown fiber token) are [`InputError::Parse`]; structural mismatches
/// become [`InputError::Schema`] naming the JSON path of the field.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let result: Result<T, _> = serde_path_to_error::deserialize(de);
    result.map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        let message = strip_position(&inner.to_string());
        if inner.is_data() && is_shape_error(&message) {
            InputError::Schema {
                origin: origin.into(),
                field,
                message,
            }
        } else {
            InputError::Parse {
                origin: origin.into(),
                line: inner.line(),
                column: inner.column(),
                message: if field == "." || inner.is_syntax() || inner.is_eof() {
                    message
                } else {
                    format!("at `{field}`: {message}")
                },
            }
        }
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        origin: origin.clone(),
        message: e.to_string(),
    })?;
    parse_json(&text, &origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{BranchSpec, SurfaceConfig};

    #[test]
    fn errors_are_located() {
        let bad_token =
            "{\"name\":\"X\",\"base_genus\":0,\n\"fibers\":[{\"label\":\"0\",\"type\":\"V*\"}]}";
        match parse_json::<SurfaceConfig>(bad_token, "c.json") {
            Err(InputError::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("V*"), "{message}");
                assert!(message.contains("fibers[0].type"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match parse_json::<SurfaceConfig>("{\"name\":\"X\",\"fibers\":[]}", "c.json") {
            Err(InputError::Schema { message, .. }) => assert!(message.contains("base_genus")),
            other => panic!("{other:?}"),
        }
        match parse_json::<SurfaceConfig>(
            "{\"name\":\"X\",\"base_genus\":\"0\",\"fibers\":[]}",
            "c.json",
        ) {
            Err(InputError::Schema { field, .. }) => assert_eq!(field, "base_genus"),
            other => panic!("{other:?}"),
        }
        match parse_json::<BranchSpec>("{\"branch\":[\"0\",]}", "b.json") {
            Err(InputError::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_json::<BranchSpec>("{\"branch\":[\"0\"],\"extra\":1}", "b.json") {
            Err(InputError::Schema { message, .. }) => assert!(message.contains("extra")),
            other => panic!("{other:?}"),
        }
    }
}
