//! Group spec files: JSON schema and validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Value;

use super::{
    Backend, Engine, Factor, FactorElem, FactorKind, FiniteTable, GeneratorSymbol, Group, Letter,
    NormalForm, Word,
};
use crate::error::{Error, Result};
use crate::literal;

/// A word written either as a dot-joined string or as a list of tokens.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WordLiteral {
    Dotted(String),
    Tokens(Vec<String>),
}

impl WordLiteral {
    pub fn as_dotted(&self) -> String {
        match self {
            WordLiteral::Dotted(s) => s.clone(),
            WordLiteral::Tokens(v) => {
                if v.is_empty() {
                    "1".to_string()
                } else {
                    v.join(".")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawGenerator {
    pub name: String,
    #[serde(default)]
    pub inverse: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawFactor {
    pub id: String,
    pub kind: String,
    #[serde(default)]
    pub elements: Vec<String>,
    #[serde(default)]
    pub table: Vec<Vec<String>>,
    #[serde(default)]
    pub peripheral: Option<bool>,
    #[serde(default)]
    pub embedding: Option<WordLiteral>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawSpec {
    #[serde(default)]
    pub backend: Option<String>,
    #[serde(default)]
    pub generators: Vec<RawGenerator>,
    #[serde(default)]
    pub factors: Vec<Value>,
    #[serde(default)]
    pub relators: Vec<WordLiteral>,
    #[serde(default)]
    pub embeddings: BTreeMap<String, WordLiteral>,
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn check_name(n: &str) -> Result<()> {
    let bad = n.is_empty()
        || n == "1"
        || n.chars().any(|c| c.is_whitespace() || ".:~>|\t".contains(c));
    if bad {
        return Err(Error::InvalidSpec(format!("`{n}` is not a usable name")));
    }
    Ok(())
}

fn swap_case(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_uppercase() {
                c.to_lowercase().next().unwrap_or(c)
            } else {
                c.to_uppercase().next().unwrap_or(c)
            }
        })
        .collect()
}

/// Validates a multiplication table and moves the identity to index 0.
pub fn validate_table(id: &str, elements: &[String], rows: &[Vec<String>]) -> Result<FiniteTable> {
    let bad = |reason: String| Error::InvalidTable {
        factor: id.to_string(),
        reason,
    };
    let n = elements.len();
    if n == 0 {
        return Err(bad("no elements".into()));
    }
    if n == 1 {
        return Err(Error::TrivialFactor(id.to_string()));
    }
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(bad(format!("duplicate element `{e}`")));
        }
    }
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(format!("table must be {n}x{n}")));
    }
    let mut t = vec![vec![0usize; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            t[i][j] = *index
                .get(e)
                .ok_or_else(|| bad(format!("unknown element `{e}` in table")))?;
        }
    }
    for i in 0..n {
        let row: BTreeSet<usize> = t[i].iter().copied().collect();
        let col: BTreeSet<usize> = (0..n).map(|j| t[j][i]).collect();
        if row.len() != n || col.len() != n {
            return Err(bad(format!("row or column {} is not a permutation", elements[i])));
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|x| t[e][x] == x && t[x][e] == x))
        .ok_or_else(|| bad("no identity element".into()))?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t[a][t[b][c]] != t[t[a][b]][c] {
                    return Err(bad(format!(
                        "{}·({}·{}) ≠ ({}·{})·{}",
                        elements[a], elements[b], elements[c], elements[a], elements[b], elements[c]
                    )));
                }
            }
        }
    }
    let mut order = vec![e];
    order.extend((0..n).filter(|&i| i != e));
    let mut pos = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let names: Vec<String> = order.iter().map(|&o| elements[o].clone()).collect();
    let mul: Vec<Vec<u32>> = order
        .iter()
        .map(|&a| order.iter().map(|&b| pos[t[a][b]] as u32).collect())
        .collect();
    let inv: Vec<u32> = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| mul[a][b] == 0)
                .map(|b| b as u32)
                .ok_or_else(|| bad(format!("{} has no inverse", names[a])))
        })
        .collect::<Result<_>>()?;
    Ok(FiniteTable { names, mul, inv })
}

/// Parses and validates a JSON group spec.
pub fn parse_spec(text: &str) -> Result<Group> {
    let raw: RawSpec = serde_json::from_str(text).map_err(json_error)?;
    build(raw)
}

fn build(raw: RawSpec) -> Result<Group> {
    let backend = match raw.backend.as_deref().unwrap_or("free_product") {
        "free_product" | "FreeProduct" => Backend::FreeProduct,
        "presented" | "Presented" => Backend::Presented,
        other => return Err(Error::InvalidSpec(format!("unknown backend `{other}`"))),
    };
    let mut gens = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for g in &raw.generators {
        check_name(&g.name)?;
        let inverse = g.inverse.clone().unwrap_or_else(|| swap_case(&g.name));
        check_name(&inverse)?;
        for n in [&g.name, &inverse] {
            if used.contains(n) {
                return Err(Error::NonSymmetricSystem(format!(
                    "symbol `{n}` is paired twice"
                )));
            }
        }
        used.insert(g.name.clone());
        used.insert(inverse.clone());
        gens.push(GeneratorSymbol {
            name: g.name.clone(),
            inverse_name: inverse,
        });
    }
    let mut raw_factors = Vec::new();
    for (i, v) in raw.factors.iter().enumerate() {
        if !v.is_object() {
            return Err(Error::FactorNotObject(i));
        }
        let f: RawFactor = serde_json::from_value(v.clone()).map_err(|_| Error::FactorNotObject(i))?;
        raw_factors.push(f);
    }
    let mut factors = Vec::new();
    let mut ids = BTreeSet::new();
    let mut elem_names: BTreeMap<String, usize> = BTreeMap::new();
    for f in &raw_factors {
        check_name(&f.id)?;
        if !ids.insert(f.id.clone()) {
            return Err(Error::InvalidSpec(format!("duplicate factor id `{}`", f.id)));
        }
        let kind = match f.kind.as_str() {
            "Z" | "z" | "cyclic" | "infinite_cyclic" => FactorKind::Cyclic,
            "table" | "finite" => {
                let t = validate_table(&f.id, &f.elements, &f.table)?;
                for n in t.names.iter().skip(1) {
                    check_name(n)?;
                    *elem_names.entry(n.clone()).or_default() += 1;
                }
                FactorKind::Finite(t)
            }
            other => {
                return Err(Error::InvalidSpec(format!(
                    "factor `{}` has unknown kind `{other}`",
                    f.id
                )))
            }
        };
        factors.push(Factor {
            id: f.id.clone(),
            kind,
            peripheral: f.peripheral.unwrap_or(true),
            embedding: None,
        });
    }
    for n in elem_names.keys() {
        if used.contains(n) {
            return Err(Error::InvalidSpec(format!(
                "element name `{n}` collides with a generator"
            )));
        }
    }
    let mut group = Group::assemble(backend, gens, factors);
    match backend {
        Backend::FreeProduct => {
            if !raw.relators.is_empty() {
                return Err(Error::InvalidSpec(
                    "the free_product backend takes no relators".into(),
                ));
            }
            if raw_factors.iter().any(|f| f.embedding.is_some()) {
                return Err(Error::InvalidSpec(
                    "factor embeddings belong to the presented backend".into(),
                ));
            }
            let mut values = Vec::new();
            for g in &group.gens {
                let lit = raw.embeddings.get(&g.name).ok_or_else(|| {
                    Error::InvalidSpec(format!("generator `{}` has no embedding", g.name))
                })?;
                let w = literal::parse_word_with(&group, &lit.as_dotted(), false)?;
                values.push(group.reduce(&w)?);
            }
            for k in raw.embeddings.keys() {
                if !group.gens.iter().any(|g| &g.name == k) {
                    return Err(Error::InvalidSpec(format!("embedding for unknown symbol `{k}`")));
                }
            }
            group.gen_values = values;
            for (i, g) in group.gens.iter().enumerate() {
                let v = &group.gen_values[i];
                if g.self_inverse() && !group.nf_mul(v, v).is_identity() {
                    return Err(Error::NonSymmetricSystem(format!(
                        "`{}` is its own inverse but its value is not an involution",
                        g.name
                    )));
                }
                if v.is_identity() {
                    group
                        .warnings
                        .push(format!("generator `{}` evaluates to the identity", g.name));
                }
            }
        }
        Backend::Presented => {
            if !raw.embeddings.is_empty() {
                return Err(Error::InvalidSpec(
                    "presented generators are abstract; use factor embeddings".into(),
                ));
            }
            group.gen_values = vec![NormalForm::identity(); group.gens.len()];
            let mut embedding_relators = Vec::new();
            for (i, f) in raw_factors.iter().enumerate() {
                if let Some(lit) = &f.embedding {
                    if group.factors[i].is_finite() {
                        return Err(Error::InvalidSpec(format!(
                            "finite factor `{}` cannot carry an embedding word",
                            f.id
                        )));
                    }
                    let w = literal::parse_word(&group, &lit.as_dotted())?;
                    let gen = Word(vec![Letter::H {
                        factor: i,
                        elem: FactorElem::Int(BigInt::from(1)),
                    }]);
                    embedding_relators.push(gen.concat(&group.word_inv(&w)));
                    group.factors[i].embedding = Some(w);
                }
            }
            let mut relators = Vec::new();
            for r in &raw.relators {
                relators.push(literal::parse_word(&group, &r.as_dotted())?);
            }
            let (engine, closed) = Engine::new(&group, &relators, &embedding_relators);
            if !closed {
                group.warnings.push(
                    "relators were closed under inversion and cyclic shifts".to_string(),
                );
            }
            let mut omega = BTreeSet::new();
            for r in relators.iter().chain(embedding_relators.iter()) {
                for l in &r.0 {
                    if let Letter::H { factor, .. } = l {
                        if group.factors[*factor].peripheral {
                            omega.insert(l.clone());
                            omega.insert(group.letter_inv(l));
                        }
                    }
                }
            }
            group.omega = omega;
            group.relators = relators.into_iter().chain(embedding_relators).collect();
            group.budget.max_len = group
                .budget
                .max_len
                .max(2 * engine.max_relator_len());
            group.engine = Some(engine);
        }
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[&str]]) -> Vec<Vec<String>> {
        v.iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cyclic_three_table() {
        let t = validate_table(
            "B",
            &names(&["1", "b", "b2"]),
            &rows(&[&["1", "b", "b2"], &["b", "b2", "1"], &["b2", "1", "b"]]),
        )
        .unwrap();
        assert_eq!(t.inv, vec![0, 2, 1]);
    }

    #[test]
    fn identity_moves_to_front() {
        let t = validate_table(
            "A",
            &names(&["a", "e"]),
            &rows(&[&["e", "a"], &["a", "e"]]),
        )
        .unwrap();
        assert_eq!(t.names, names(&["e", "a"]));
        assert_eq!(t.mul[1][1], 0);
    }

    #[test]
    fn trivial_factor_rejected() {
        let e = validate_table("T", &names(&["1"]), &rows(&[&["1"]])).unwrap_err();
        assert_eq!(e, Error::TrivialFactor("T".into()));
    }

    #[test]
    fn non_associative_table_rejected() {
        // A Latin square with identity 0 that is not associative.
        let t = rows(&[
            &["0", "1", "2", "3", "4"],
            &["1", "0", "3", "4", "2"],
            &["2", "4", "0", "1", "3"],
            &["3", "2", "4", "0", "1"],
            &["4", "3", "1", "2", "0"],
        ]);
        let e = validate_table("Q", &names(&["0", "1", "2", "3", "4"]), &t).unwrap_err();
        assert!(matches!(e, Error::InvalidTable { .. }));
    }

    #[test]
    fn factor_given_as_string_rejected() {
        let text = r#"{"backend":"presented","generators":[{"name":"x","inverse":"X"},{"name":"t","inverse":"T"}],
            "factors":["x"],"relators":["x.t.X.T"]}"#;
        assert_eq!(parse_spec(text).unwrap_err(), Error::FactorNotObject(0));
    }

    #[test]
    fn parse_error_has_position() {
        let e = parse_spec("{\n  \"backend\": }").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn open_relators_get_closed_with_warning() {
        let text = r#"{"backend":"presented","generators":[{"name":"x","inverse":"X"},{"name":"t","inverse":"T"}],
            "relators":["x.t.X.T"]}"#;
        let g = parse_spec(text).unwrap();
        assert_eq!(g.engine().unwrap().relator_count(), 8);
        assert_eq!(g.warnings.len(), 1);
        assert!(g.omega.is_empty());
    }
}
