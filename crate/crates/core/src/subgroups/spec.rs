//! Subgroup files: `{"generators": [...], "y": [...]}` with element literals.

use serde::Deserialize;

use crate::algebra::spec::json_error;
use crate::algebra::{Element, Group};
use crate::error::{Error, Result};
use crate::literal::parse_element;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubgroup {
    generators: Vec<String>,
    #[serde(default)]
    y: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Element>,
    pub y: Vec<Element>,
}

fn locate(text: &str, lit: &str) -> (usize, usize) {
    let quoted = format!("\"{lit}\"");
    for (i, line) in text.lines().enumerate() {
        if let Some(c) = line.find(&quoted) {
            return (i + 1, c + 1);
        }
    }
    (1, 1)
}

pub fn parse_subgroup_spec(g: &Group, text: &str) -> Result<SubgroupSpec> {
    let raw: RawSubgroup = serde_json::from_str(text).map_err(json_error)?;
    let conv = |lits: &[String]| -> Result<Vec<Element>> {
        lits.iter()
            .map(|s| {
                parse_element(g, s).map_err(|e| {
                    let (line, column) = locate(text, s);
                    Error::Parse {
                        line,
                        column,
                        message: e.to_string(),
                    }
                })
            })
            .collect()
    };
    Ok(SubgroupSpec {
        generators: conv(&raw.generators)?,
        y: conv(&raw.y)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn reads_generators_and_y() {
        let g = instances::z2_z3();
        let s = parse_subgroup_spec(&g, r#"{"generators": ["a.b"], "y": ["a"]}"#).unwrap();
        assert_eq!(s.generators.len(), 1);
        assert_eq!(s.y, vec![parse_element(&g, "a").unwrap()]);
    }

    #[test]
    fn bad_literal_reports_position() {
        let g = instances::z2_z3();
        let e = parse_subgroup_spec(&g, "{\n \"generators\": [\"a.q\"]\n}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 17, .. }), "{e:?}");
    }
}
