//! Flag values are either inline JSON or a path to a JSON file.

use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use serde::de::DeserializeOwned;

use freeset_core::boundedfam::GrowthFunction;
use freeset_core::ratio::parse_ratio;

/// Malformed input; always exits with status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<freeset_core::Error> for InputError {
    fn from(e: freeset_core::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Input<T> = Result<T, InputError>;

pub fn load<T: DeserializeOwned>(flag: &str, value: &str) -> Input<T> {
    let trimmed = value.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        value.to_string()
    } else {
        std::fs::read_to_string(Path::new(value))
            .map_err(|e| InputError(format!("--{flag}: cannot read {value}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| InputError(format!("--{flag}: {e}")))
}

pub fn load_all<T: DeserializeOwned>(flag: &str, values: &[String]) -> Input<Vec<T>> {
    values.iter().map(|v| load(flag, v)).collect()
}

pub fn ratio(flag: &str, value: &str) -> Input<BigRational> {
    parse_ratio(value).map_err(|e| InputError(format!("--{flag}: {e}")))
}

/// `--g 3` is the constant 3; `--g '[2,3,5]'` repeats its last value.
pub fn growth(value: &str) -> Input<GrowthFunction> {
    match value.trim().parse::<u64>() {
        Ok(c) => GrowthFunction::constant(c).map_err(InputError::from),
        Err(_) => load("g", value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use freeset_core::FiniteFunction;

    #[test]
    fn inline_and_file() {
        let f: FiniteFunction = load("fn", r#"{"n":2,"values":[1,0]}"#).unwrap();
        assert_eq!(f.values(), &[1, 0]);
        let dir = std::env::temp_dir().join(format!("freeset-lab-input-{}", std::process::id()));
        std::fs::write(&dir, "[0, 3]").unwrap();
        let s: Vec<usize> = load("set", dir.to_str().unwrap()).unwrap();
        assert_eq!(s, vec![0, 3]);
        std::fs::remove_file(&dir).unwrap();
        assert!(load::<Vec<usize>>("set", "/nonexistent/file.json").is_err());
        assert!(load::<FiniteFunction>("fn", r#"{"n":3,"values":[1,0]}"#).is_err());
    }

    #[test]
    fn growth_forms() {
        assert_eq!(growth("2").unwrap().values(), &[2]);
        assert_eq!(growth("[2, 3]").unwrap().values(), &[2, 3]);
        assert!(growth("1").is_err());
    }
}
