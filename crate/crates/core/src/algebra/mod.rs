//! Generating systems, words over `X ⊔ 𝓗`, free-product normal forms and
//! bounded word problems for finite relative presentations.

mod presented;
pub(crate) mod spec;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use presented::{collected_vector, AreaOutcome, Certificate, Engine};
pub use spec::{parse_spec, RawSpec};

/// Which equality regime a group lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    FreeProduct,
    Presented,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::FreeProduct => "free_product",
            Backend::Presented => "presented",
        }
    }
}

/// A finite group given by its multiplication table. Index 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    pub names: Vec<String>,
    pub mul: Vec<Vec<u32>>,
    pub inv: Vec<u32>,
}

impl FiniteTable {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    Finite(FiniteTable),
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub id: String,
    pub kind: FactorKind,
    /// Member of the peripheral family. Non-peripheral cyclic factors model
    /// free generators of the ambient free product.
    pub peripheral: bool,
    /// For a cyclic factor of a presented group: the word its generator equals.
    pub embedding: Option<Word>,
}

impl Factor {
    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FactorKind::Finite(_))
    }

    pub fn table(&self) -> Option<&FiniteTable> {
        match &self.kind {
            FactorKind::Finite(t) => Some(t),
            FactorKind::Cyclic => None,
        }
    }
}

/// A symbol of the relative generating system and the name of its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSymbol {
    pub name: String,
    pub inverse_name: String,
}

impl GeneratorSymbol {
    pub fn self_inverse(&self) -> bool {
        self.name == self.inverse_name
    }
}

/// An element of a single factor: a table index or an integer exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorElem {
    Fin(u32),
    Int(BigInt),
}

impl FactorElem {
    pub fn is_identity(&self) -> bool {
        match self {
            FactorElem::Fin(i) => *i == 0,
            FactorElem::Int(k) => k.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub elem: FactorElem,
}

/// Alternating syllable form in a free product: no identity syllables and no
/// two adjacent syllables from the same factor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(pub Vec<Syllable>);

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X { gen: usize, inv: bool },
    H { factor: usize, elem: FactorElem },
}

impl Letter {
    pub fn is_h(&self) -> bool {
        matches!(self, Letter::H { .. })
    }

    pub fn factor(&self) -> Option<usize> {
        match self {
            Letter::H { factor, .. } => Some(*factor),
            Letter::X { .. } => None,
        }
    }
}

/// A word over `X ⊔ 𝓗`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

/// A group element in its backend's representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Nf(NormalForm),
    Word(Word),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

/// Budget for presented equality: relator applications and the longest
/// intermediate cyclic word allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqBudget {
    pub area: usize,
    pub max_len: usize,
}

impl Default for EqBudget {
    fn default() -> Self {
        EqBudget { area: 4, max_len: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equality {
    pub verdict: Tri,
    pub certificate: Option<Certificate>,
}

/// A validated group with its peripheral family and relative generating system.
#[derive(Debug)]
pub struct Group {
    pub backend: Backend,
    pub gens: Vec<GeneratorSymbol>,
    pub factors: Vec<Factor>,
    /// Free-product values of the generators.
    pub gen_values: Vec<NormalForm>,
    /// Relators as supplied, plus the embedding relators of cyclic factors.
    pub relators: Vec<Word>,
    pub omega: BTreeSet<Letter>,
    pub warnings: Vec<String>,
    pub(crate) engine: Option<Engine>,
    registry: Mutex<Vec<Word>>,
    pub budget: EqBudget,
}

impl Group {
    pub(crate) fn assemble(
        backend: Backend,
        gens: Vec<GeneratorSymbol>,
        factors: Vec<Factor>,
    ) -> Self {
        Group {
            backend,
            gens,
            factors,
            gen_values: Vec::new(),
            relators: Vec::new(),
            omega: BTreeSet::new(),
            warnings: Vec::new(),
            engine: None,
            registry: Mutex::new(Vec::new()),
            budget: EqBudget::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Group> {
        parse_spec(text)
    }

    pub fn engine(&self) -> Option<&Engine> {
        self.engine.as_ref()
    }

    pub fn factor_index(&self, id: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.id == id)
            .ok_or_else(|| Error::UnknownFactor(id.to_string()))
    }

    /// Indices of peripheral factors, in declaration order.
    pub fn peripheral(&self) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|&i| self.factors[i].peripheral)
            .collect()
    }

    /// True when the abelian collector gives exact canonical forms.
    pub fn is_exact(&self) -> bool {
        match self.backend {
            Backend::FreeProduct => true,
            Backend::Presented => self
                .engine
                .as_ref()
                .map(|e| e.collector().is_some())
                .unwrap_or(false),
        }
    }

    pub fn identity(&self) -> Element {
        match self.backend {
            Backend::FreeProduct => Element::Nf(NormalForm::identity()),
            Backend::Presented => Element::Word(Word::empty()),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        match g {
            Element::Nf(nf) => nf.is_identity(),
            Element::Word(w) => w.is_empty(),
        }
    }

    pub fn factor_elem_inv(&self, factor: usize, e: &FactorElem) -> FactorElem {
        match e {
            FactorElem::Fin(i) => FactorElem::Fin(
                self.factors[factor]
                    .table()
                    .expect("finite element in finite factor")
                    .inv(*i),
            ),
            FactorElem::Int(k) => FactorElem::Int(-k),
        }
    }

    pub fn factor_elem_mul(&self, factor: usize, a: &FactorElem, b: &FactorElem) -> FactorElem {
        match (a, b) {
            (FactorElem::Fin(x), FactorElem::Fin(y)) => FactorElem::Fin(
                self.factors[factor]
                    .table()
                    .expect("finite element in finite factor")
                    .mul(*x, *y),
            ),
            (FactorElem::Int(x), FactorElem::Int(y)) => FactorElem::Int(x + y),
            _ => panic!("mixed factor element kinds"),
        }
    }

    pub fn factor_identity(&self, factor: usize) -> FactorElem {
        if self.factors[factor].is_finite() {
            FactorElem::Fin(0)
        } else {
            FactorElem::Int(BigInt::zero())
        }
    }

    pub fn letter_inv(&self, l: &Letter) -> Letter {
        match l {
            Letter::X { gen, inv } => {
                if self.gens[*gen].self_inverse() {
                    Letter::X {
                        gen: *gen,
                        inv: false,
                    }
                } else {
                    Letter::X {
                        gen: *gen,
                        inv: !inv,
                    }
                }
            }
            Letter::H { factor, elem } => Letter::H {
                factor: *factor,
                elem: self.factor_elem_inv(*factor, elem),
            },
        }
    }

    pub fn word_inv(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|l| self.letter_inv(l)).collect())
    }

    fn push_syllable(&self, out: &mut Vec<Syllable>, s: Syllable) {
        if s.elem.is_identity() {
            return;
        }
        if let Some(last) = out.last() {
            if last.factor == s.factor {
                let merged = self.factor_elem_mul(s.factor, &last.elem, &s.elem);
                out.pop();
                if !merged.is_identity() {
                    out.push(Syllable {
                        factor: s.factor,
                        elem: merged,
                    });
                }
                return;
            }
        }
        out.push(s);
    }

    pub fn nf_mul(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut out = a.0.clone();
        for s in &b.0 {
            self.push_syllable(&mut out, s.clone());
        }
        NormalForm(out)
    }

    pub fn nf_inv(&self, a: &NormalForm) -> NormalForm {
        NormalForm(
            a.0.iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    elem: self.factor_elem_inv(s.factor, &s.elem),
                })
                .collect(),
        )
    }

    /// The unique reduced form of a word in the free-product backend.
    pub fn reduce(&self, w: &Word) -> Result<NormalForm> {
        if self.backend != Backend::FreeProduct {
            return Err(Error::BackendMismatch {
                expected: "free_product",
            });
        }
        let mut out = Vec::new();
        for l in &w.0 {
            match l {
                Letter::H { factor, elem } => self.push_syllable(
                    &mut out,
                    Syllable {
                        factor: *factor,
                        elem: elem.clone(),
                    },
                ),
                Letter::X { gen, inv } => {
                    let v = if *inv {
                        self.nf_inv(&self.gen_values[*gen])
                    } else {
                        self.gen_values[*gen].clone()
                    };
                    for s in v.0 {
                        self.push_syllable(&mut out, s);
                    }
                }
            }
        }
        Ok(NormalForm(out))
    }

    /// Free reduction in `F = F(X) ∗ (∗H)`, merging adjacent letters of a factor.
    pub fn free_reduce(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for l in &w.0 {
            let mut l = l.clone();
            if let Letter::H { elem, .. } = &l {
                if elem.is_identity() {
                    continue;
                }
            }
            loop {
                match out.last() {
                    Some(last) if *last == self.letter_inv(&l) => {
                        out.pop();
                        break;
                    }
                    Some(Letter::H { factor, elem }) if l.factor() == Some(*factor) => {
                        let f = *factor;
                        let e2 = match &l {
                            Letter::H { elem, .. } => elem.clone(),
                            _ => unreachable!(),
                        };
                        let merged = self.factor_elem_mul(f, elem, &e2);
                        out.pop();
                        if merged.is_identity() {
                            break;
                        }
                        l = Letter::H {
                            factor: f,
                            elem: merged,
                        };
                    }
                    _ => {
                        out.push(l);
                        break;
                    }
                }
            }
        }
        Word(out)
    }

    /// Presented elements are freely reduced and, when the collector applies,
    /// put in collected form.
    fn presented_normal(&self, w: Word) -> Word {
        let w = self.free_reduce(&w);
        match self.engine.as_ref().and_then(|e| e.collector()) {
            Some(c) => c.canonical_word(self, &c.vector(self, &w)),
            None => w,
        }
    }

    pub fn evaluate(&self, w: &Word) -> Element {
        match self.backend {
            Backend::FreeProduct => Element::Nf(self.reduce(w).expect("free product")),
            Backend::Presented => Element::Word(self.presented_normal(w.clone())),
        }
    }

    pub fn letter_value(&self, l: &Letter) -> Element {
        self.evaluate(&Word(vec![l.clone()]))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (a, b) {
            (Element::Nf(x), Element::Nf(y)) => Element::Nf(self.nf_mul(x, y)),
            (Element::Word(x), Element::Word(y)) => {
                Element::Word(self.presented_normal(x.concat(y)))
            }
            _ => panic!("elements from different backends"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match a {
            Element::Nf(x) => Element::Nf(self.nf_inv(x)),
            Element::Word(w) => Element::Word(self.presented_normal(self.word_inv(w))),
        }
    }

    pub fn mul_letter(&self, g: &Element, l: &Letter) -> Element {
        self.mul(g, &self.letter_value(l))
    }

    /// A word spelling the element.
    pub fn element_word(&self, g: &Element) -> Word {
        match g {
            Element::Nf(nf) => Word(
                nf.0.iter()
                    .map(|s| Letter::H {
                        factor: s.factor,
                        elem: s.elem.clone(),
                    })
                    .collect(),
            ),
            Element::Word(w) => w.clone(),
        }
    }

    pub fn nf_element(&self, factor: usize, elem: FactorElem) -> Element {
        match self.backend {
            Backend::FreeProduct => {
                let mut v = Vec::new();
                self.push_syllable(&mut v, Syllable { factor, elem });
                Element::Nf(NormalForm(v))
            }
            Backend::Presented => self.letter_value(&Letter::H { factor, elem }),
        }
    }

    /// Tri-valued equality. Free products decide exactly; presented groups
    /// answer yes only with a certificate and no only through abelianization.
    pub fn equal(&self, g: &Element, h: &Element, budget: EqBudget) -> Equality {
        match (g, h) {
            (Element::Nf(a), Element::Nf(b)) => Equality {
                verdict: if a == b { Tri::Yes } else { Tri::No },
                certificate: None,
            },
            (Element::Word(a), Element::Word(b)) => {
                let engine = self.engine.as_ref().expect("presented engine");
                let w = self.free_reduce(&a.concat(&self.word_inv(b)));
                engine.decide_trivial(self, &w, budget)
            }
            _ => panic!("elements from different backends"),
        }
    }

    /// Canonical representative for use as a graph vertex.
    pub fn canonical(&self, g: &Element) -> Result<Element> {
        match g {
            Element::Nf(_) => Ok(g.clone()),
            Element::Word(w) => {
                if self.is_exact() {
                    return Ok(Element::Word(self.presented_normal(w.clone())));
                }
                let w = self.free_reduce(w);
                let mut reg = self.registry.lock().expect("registry lock");
                if let Some(hit) = reg.iter().find(|r| **r == w) {
                    return Ok(Element::Word(hit.clone()));
                }
                for r in reg.iter() {
                    match self
                        .equal(&Element::Word(w.clone()), &Element::Word(r.clone()), self.budget)
                        .verdict
                    {
                        Tri::Yes => return Ok(Element::Word(r.clone())),
                        Tri::No => {}
                        Tri::Unknown => return Err(Error::CosetKeyUnknown),
                    }
                }
                reg.push(w.clone());
                Ok(Element::Word(w))
            }
        }
    }

    /// `Some(h)` when `g` lies in the factor, `None` when it does not.
    pub fn factor_member(&self, g: &Element, factor: usize) -> Result<Option<FactorElem>> {
        match g {
            Element::Nf(nf) => Ok(match nf.0.as_slice() {
                [] => Some(self.factor_identity(factor)),
                [s] if s.factor == factor => Some(s.elem.clone()),
                _ => None,
            }),
            Element::Word(w) => {
                if let Some(c) = self.engine.as_ref().and_then(|e| e.collector()) {
                    return Ok(c.factor_member(self, w, factor));
                }
                match w.0.as_slice() {
                    [] => Ok(Some(self.factor_identity(factor))),
                    [Letter::H { factor: f, elem }] if *f == factor => Ok(Some(elem.clone())),
                    _ => Err(Error::CosetKeyUnknown),
                }
            }
        }
    }

    /// Canonical representative of the left coset `gH`.
    pub fn coset_key(&self, g: &Element, factor: usize) -> Result<Element> {
        match g {
            Element::Nf(nf) => {
                let mut v = nf.0.clone();
                if v.last().map(|s| s.factor) == Some(factor) {
                    v.pop();
                }
                Ok(Element::Nf(NormalForm(v)))
            }
            Element::Word(w) => match self.engine.as_ref().and_then(|e| e.collector()) {
                Some(c) => Ok(Element::Word(c.coset_key(self, w, factor))),
                None => Err(Error::CosetKeyUnknown),
            },
        }
    }

    /// Letters of the relative alphabet in oracle order: finite factors list
    /// every non-identity element, cyclic factors `±1, ±2, …, ±m`.
    pub fn h_letters(&self, factor: usize, m: u64) -> Vec<Letter> {
        match &self.factors[factor].kind {
            FactorKind::Finite(t) => (1..t.order() as u32)
                .map(|i| Letter::H {
                    factor,
                    elem: FactorElem::Fin(i),
                })
                .collect(),
            FactorKind::Cyclic => {
                let mut v = Vec::new();
                for k in 1..=m {
                    for sign in [1i64, -1] {
                        v.push(Letter::H {
                            factor,
                            elem: FactorElem::Int(BigInt::from(sign) * BigInt::from(k)),
                        });
                    }
                }
                v
            }
        }
    }

    /// X-letters in oracle order: each symbol, then its inverse when distinct.
    pub fn x_letters(&self) -> Vec<Letter> {
        let mut v = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            v.push(Letter::X { gen: i, inv: false });
            if !g.self_inverse() {
                v.push(Letter::X { gen: i, inv: true });
            }
        }
        v
    }

    pub fn factor_elem_str(&self, factor: usize, e: &FactorElem) -> String {
        match e {
            FactorElem::Fin(i) => self.factors[factor]
                .table()
                .map(|t| t.names[*i as usize].clone())
                .unwrap_or_default(),
            FactorElem::Int(k) => k.to_string(),
        }
    }

    pub fn letter_str(&self, l: &Letter) -> String {
        match l {
            Letter::X { gen, inv } => {
                let g = &self.gens[*gen];
                if *inv {
                    g.inverse_name.clone()
                } else {
                    g.name.clone()
                }
            }
            Letter::H { factor, elem } => format!(
                "{}:{}",
                self.factors[*factor].id,
                self.factor_elem_str(*factor, elem)
            ),
        }
    }

    pub fn word_str(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|l| self.letter_str(l))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn nf_str(&self, nf: &NormalForm) -> String {
        if nf.is_identity() {
            return "1".to_string();
        }
        nf.0.iter()
            .map(|s| {
                format!(
                    "{}:{}",
                    self.factors[s.factor].id,
                    self.factor_elem_str(s.factor, &s.elem)
                )
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn elem_str(&self, g: &Element) -> String {
        match g {
            Element::Nf(nf) => self.nf_str(nf),
            Element::Word(w) => self.word_str(w),
        }
    }

    /// Length of the element's word in `X ⊔ 𝓗` as written (syllable count for
    /// normal forms).
    pub fn syllable_length(&self, g: &Element) -> usize {
        match g {
            Element::Nf(nf) => nf.len(),
            Element::Word(w) => w.len(),
        }
    }

    /// Largest absolute cyclic exponent appearing in the element.
    pub fn max_exponent(&self, g: &Element) -> BigInt {
        let elems: Vec<&FactorElem> = match g {
            Element::Nf(nf) => nf.0.iter().map(|s| &s.elem).collect(),
            Element::Word(w) => w
                .0
                .iter()
                .filter_map(|l| match l {
                    Letter::H { elem, .. } => Some(elem),
                    _ => None,
                })
                .collect(),
        };
        elems
            .into_iter()
            .filter_map(|e| match e {
                FactorElem::Int(k) => Some(k.abs()),
                _ => None,
            })
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::literal::{parse_element, parse_word};

    fn el(g: &Group, s: &str) -> Element {
        parse_element(g, s).unwrap()
    }

    #[test]
    fn involution_cancels() {
        let g = instances::z2_z3();
        assert!(g.reduce(&parse_word(&g, "a.a").unwrap()).unwrap().is_identity());
        assert!(g.reduce(&parse_word(&g, "b.b2").unwrap()).unwrap().is_identity());
    }

    #[test]
    fn inner_syllables_merge() {
        let g = instances::z2_z3();
        let nf = g.reduce(&parse_word(&g, "a.b.b2").unwrap()).unwrap();
        assert_eq!(g.nf_str(&nf), "A:a");
    }

    #[test]
    fn products_serialize_canonically() {
        let g = instances::z2_z3();
        let ab = el(&g, "a.b");
        assert_eq!(g.elem_str(&g.mul(&ab, &ab)), "A:a.B:b.A:a.B:b");
        assert!(g.is_identity(&g.mul(&ab, &g.inv(&ab))));
        assert_eq!(g.mul(&g.identity(), &ab), ab);
        assert_eq!(g.elem_str(&g.identity()), "1");
    }

    #[test]
    fn free_product_equality_is_exact() {
        let g = instances::z2_z3();
        let r = g.equal(&el(&g, "a.b.a.b"), &el(&g, "b.a.b.a"), EqBudget::default());
        assert_eq!(r.verdict, Tri::No);
    }

    #[test]
    fn commutator_needs_one_relator() {
        let g = instances::z2();
        let budget = EqBudget { area: 1, max_len: 8 };
        let xt = Element::Word(parse_word(&g, "x.t").unwrap());
        let tx = Element::Word(parse_word(&g, "t.x").unwrap());
        let r = g.equal(&xt, &tx, budget);
        assert_eq!(r.verdict, Tri::Yes);
        let w = parse_word(&g, "x.t.X.T").unwrap();
        assert!(r.certificate.unwrap().verify(&g, &w));
    }

    #[test]
    fn abelianization_separates_generators() {
        let g = instances::z2();
        for area in [0, 3] {
            let budget = EqBudget { area, max_len: 8 };
            let r = g.equal(&el(&g, "x"), &el(&g, "t"), budget);
            assert_eq!(r.verdict, Tri::No);
        }
    }

    #[test]
    fn evaluation_of_short_words() {
        let g = instances::z2_z3();
        assert!(g.is_identity(&g.evaluate(&Word::empty())));
        assert_eq!(g.elem_str(&el(&g, "b2")), "B:b2");
        let z = instances::z2();
        assert_eq!(z.elem_str(&el(&z, "x")), "x");
        assert_eq!(z.elem_str(&el(&z, "t.x.T")), "x");
    }

    #[test]
    fn omega_collects_peripheral_letters() {
        let q = instances::example_q();
        let names: Vec<String> = q.omega.iter().map(|l| q.letter_str(l)).collect();
        assert_eq!(names, vec!["H:-1", "H:1"]);
        let z = instances::z2_rel_x();
        assert_eq!(z.omega.len(), 2);
        assert!(instances::z2_z3().omega.is_empty());
    }

    #[test]
    fn collector_applies_to_free_abelian_specs() {
        assert!(instances::z2().is_exact());
        assert!(instances::z2_rel_x().is_exact());
        assert!(instances::example_q().is_exact());
    }

    #[test]
    fn embedded_factor_is_its_word() {
        let g = instances::z2_rel_x();
        let a3 = el(&g, "A:3");
        assert_eq!(g.elem_str(&a3), "x.x.x");
        assert_eq!(g.factor_member(&a3, 0).unwrap(), Some(FactorElem::Int(3.into())));
        let k1 = g.coset_key(&el(&g, "t.x.x"), 0).unwrap();
        let k2 = g.coset_key(&el(&g, "X.t"), 0).unwrap();
        assert_eq!(k1, k2);
        assert_eq!(g.elem_str(&k1), "t");
    }

    #[test]
    fn coset_key_strips_trailing_factor_syllable() {
        let g = instances::z2_z3();
        let k = g.coset_key(&el(&g, "a.b"), 1).unwrap();
        assert_eq!(g.elem_str(&k), "A:a");
        let k = g.coset_key(&el(&g, "a.b"), 0).unwrap();
        assert_eq!(g.elem_str(&k), "A:a.B:b");
    }

    #[test]
    fn free_generator_modelled_by_cyclic_factor() {
        let g = instances::free_rel_a();
        assert_eq!(g.elem_str(&el(&g, "a.b.b.B")), "a:1.b:1");
        assert_eq!(g.peripheral(), vec![0]);
    }

    #[test]
    fn reduce_rejects_presented() {
        let g = instances::z2();
        assert!(matches!(
            g.reduce(&Word::empty()),
            Err(Error::BackendMismatch { .. })
        ));
    }
}
