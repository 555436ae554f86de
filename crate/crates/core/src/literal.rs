//! Dot-joined word literals such as `x.T`, `A:a.B:b2` or `a:-3`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Element, FactorElem, FactorKind, Group, Letter, Word};
use crate::error::{Error, Result};

/// Splits a literal into trimmed tokens; `1` and the empty string are empty.
pub fn tokens(s: &str) -> Vec<String> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Vec::new();
    }
    s.split('.').map(|t| t.trim().to_string()).collect()
}

/// Resolves one token to a letter. `Ok(None)` means the token denotes the
/// identity.
pub fn parse_letter(g: &Group, tok: &str, allow_x: bool) -> Result<Option<Letter>> {
    if tok == "1" {
        return Ok(None);
    }
    if let Some((fid, rest)) = tok.split_once(':') {
        let f = g.factor_index(fid)?;
        return match &g.factors[f].kind {
            FactorKind::Cyclic => {
                let k: BigInt = rest
                    .parse()
                    .map_err(|_| Error::UnknownLetter(tok.to_string()))?;
                Ok((!k.is_zero()).then_some(Letter::H {
                    factor: f,
                    elem: FactorElem::Int(k),
                }))
            }
            FactorKind::Finite(t) => {
                let i = t
                    .names
                    .iter()
                    .position(|n| n == rest)
                    .ok_or_else(|| Error::UnknownLetter(tok.to_string()))?;
                Ok((i != 0).then_some(Letter::H {
                    factor: f,
                    elem: FactorElem::Fin(i as u32),
                }))
            }
        };
    }
    if allow_x {
        for (i, gen) in g.gens.iter().enumerate() {
            if gen.name == tok {
                return Ok(Some(Letter::X { gen: i, inv: false }));
            }
            if gen.inverse_name == tok {
                return Ok(Some(Letter::X {
                    gen: i,
                    inv: !gen.self_inverse(),
                }));
            }
        }
    }
    let mut hits = Vec::new();
    for (f, factor) in g.factors.iter().enumerate() {
        if let FactorKind::Finite(t) = &factor.kind {
            if let Some(i) = t.names.iter().skip(1).position(|n| n == tok) {
                hits.push(Letter::H {
                    factor: f,
                    elem: FactorElem::Fin(i as u32 + 1),
                });
            }
        }
    }
    if hits.len() == 1 {
        return Ok(hits.pop());
    }
    if hits.len() > 1 {
        return Err(Error::UnknownLetter(format!("{tok} (ambiguous)")));
    }
    if let Some(f) = g
        .factors
        .iter()
        .position(|f| f.id == tok && !f.is_finite())
    {
        return Ok(Some(Letter::H {
            factor: f,
            elem: FactorElem::Int(BigInt::from(1)),
        }));
    }
    Err(Error::UnknownLetter(tok.to_string()))
}

pub(crate) fn parse_word_with(g: &Group, s: &str, allow_x: bool) -> Result<Word> {
    let mut out = Vec::new();
    for t in tokens(s) {
        if let Some(l) = parse_letter(g, &t, allow_x)? {
            out.push(l);
        }
    }
    Ok(Word(out))
}

/// Parses a word over `X ⊔ 𝓗`.
pub fn parse_word(g: &Group, s: &str) -> Result<Word> {
    parse_word_with(g, s, true)
}

/// Parses and evaluates a word.
pub fn parse_element(g: &Group, s: &str) -> Result<Element> {
    Ok(g.evaluate(&parse_word(g, s)?))
}
