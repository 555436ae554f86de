//! Bounded word problem for finite relative presentations.
//!
//! Words are encoded letter by letter into small integer codes. Cyclic factor
//! letters expand into unit codes so that relator matching is purely
//! syntactic.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Element, EqBudget, Equality, FactorElem, FactorKind, Group, Letter, Tri, Word};

type Code = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CodeKind {
    X { gen: usize, inv: bool },
    Unit { factor: usize, positive: bool },
    Fin { factor: usize, elem: u32 },
}

/// A product of conjugated relators: `W = Π aᵢ Rᵢ aᵢ⁻¹` in the free group.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    pub steps: Vec<(Word, Word)>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Multiplies the certificate out and compares with `w` in the free group.
    pub fn verify(&self, group: &Group, w: &Word) -> bool {
        let mut acc = Word::empty();
        for (a, r) in &self.steps {
            acc = acc.concat(a).concat(r).concat(&group.word_inv(a));
        }
        group.free_reduce(&acc) == group.free_reduce(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AreaOutcome {
    Found(Certificate),
    /// No certificate with at most `cap` relator applications inside the
    /// length bound.
    CapExceeded,
    /// The abelianization already shows the word is nontrivial.
    NotTrivial,
}

#[derive(Debug, Clone)]
pub struct Engine {
    kinds: Vec<CodeKind>,
    inv: Vec<Code>,
    x_code: Vec<(Code, Code)>,
    unit_code: HashMap<usize, (Code, Code)>,
    fin_code: HashMap<(usize, u32), Code>,
    relators: Vec<Vec<Code>>,
    abel: Abelianizer,
    collector: Option<Collector>,
}

impl Engine {
    pub(crate) fn new(group: &Group, user_relators: &[Word], embedding_relators: &[Word]) -> (Engine, bool) {
        let mut kinds = Vec::new();
        let mut inv = Vec::new();
        let mut x_code = Vec::new();
        for (i, g) in group.gens.iter().enumerate() {
            let c = kinds.len() as Code;
            if g.self_inverse() {
                kinds.push(CodeKind::X { gen: i, inv: false });
                inv.push(c);
                x_code.push((c, c));
            } else {
                kinds.push(CodeKind::X { gen: i, inv: false });
                kinds.push(CodeKind::X { gen: i, inv: true });
                inv.push(c + 1);
                inv.push(c);
                x_code.push((c, c + 1));
            }
        }
        let mut unit_code = HashMap::new();
        let mut fin_code = HashMap::new();
        for (f, factor) in group.factors.iter().enumerate() {
            match &factor.kind {
                FactorKind::Cyclic => {
                    let c = kinds.len() as Code;
                    kinds.push(CodeKind::Unit { factor: f, positive: true });
                    kinds.push(CodeKind::Unit { factor: f, positive: false });
                    inv.push(c + 1);
                    inv.push(c);
                    unit_code.insert(f, (c, c + 1));
                }
                FactorKind::Finite(t) => {
                    let base = kinds.len() as Code;
                    for e in 1..t.order() as u32 {
                        kinds.push(CodeKind::Fin { factor: f, elem: e });
                        fin_code.insert((f, e), base + e as Code - 1);
                    }
                    for e in 1..t.order() as u32 {
                        inv.push(base + t.inv(e) as Code - 1);
                    }
                }
            }
        }
        let mut engine = Engine {
            kinds,
            inv,
            x_code,
            unit_code,
            fin_code,
            relators: Vec::new(),
            abel: Abelianizer::default(),
            collector: None,
        };
        let mut supplied = BTreeSet::new();
        let mut closed = BTreeSet::new();
        for r in user_relators.iter().chain(embedding_relators.iter()) {
            let codes = engine.reduce_codes(group, &engine.encode(r));
            let (core, _) = engine.cyclic_reduce(group, &codes);
            if core.is_empty() {
                continue;
            }
            supplied.insert(codes);
            let n = core.len();
            let ri = engine.inverse(&core);
            for k in 0..n {
                let mut a = core[k..].to_vec();
                a.extend_from_slice(&core[..k]);
                closed.insert(a);
                let mut b = ri[k..].to_vec();
                b.extend_from_slice(&ri[..k]);
                closed.insert(b);
            }
        }
        let was_closed = supplied == closed;
        engine.relators = closed.into_iter().collect();
        engine.abel = Abelianizer::new(&engine, group);
        engine.collector = Collector::detect(&engine, group, user_relators);
        (engine, was_closed)
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    pub(crate) fn collector(&self) -> Option<&Collector> {
        self.collector.as_ref()
    }

    /// The closed relator set, decoded.
    pub fn closed_relators(&self, group: &Group) -> Vec<Word> {
        self.relators.iter().map(|r| self.decode(group, r)).collect()
    }

    fn encode(&self, w: &Word) -> Vec<Code> {
        let mut out = Vec::new();
        for l in &w.0 {
            match l {
                Letter::X { gen, inv } => {
                    let (a, b) = self.x_code[*gen];
                    out.push(if *inv { b } else { a });
                }
                Letter::H { factor, elem } => match elem {
                    FactorElem::Int(k) => {
                        let (p, m) = self.unit_code[factor];
                        let c = if k.is_positive() { p } else { m };
                        let n = k.abs().to_usize().expect("exponent fits in memory");
                        out.extend(std::iter::repeat_n(c, n));
                    }
                    FactorElem::Fin(e) => {
                        if *e != 0 {
                            out.push(self.fin_code[&(*factor, *e)]);
                        }
                    }
                },
            }
        }
        out
    }

    fn decode(&self, group: &Group, codes: &[Code]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &c in codes {
            match self.kinds[c as usize] {
                CodeKind::X { gen, inv } => out.push(Letter::X { gen, inv }),
                CodeKind::Fin { factor, elem } => out.push(Letter::H {
                    factor,
                    elem: FactorElem::Fin(elem),
                }),
                CodeKind::Unit { factor, positive } => {
                    let step = BigInt::from(if positive { 1 } else { -1 });
                    if let Some(Letter::H {
                        factor: f,
                        elem: FactorElem::Int(k),
                    }) = out.last_mut()
                    {
                        if *f == factor && k.is_positive() == positive {
                            *k += step;
                            continue;
                        }
                    }
                    out.push(Letter::H {
                        factor,
                        elem: FactorElem::Int(step),
                    });
                }
            }
        }
        let _ = group;
        Word(out)
    }

    fn inverse(&self, codes: &[Code]) -> Vec<Code> {
        codes.iter().rev().map(|&c| self.inv[c as usize]).collect()
    }

    fn finite_merge(&self, group: &Group, a: Code, b: Code) -> Option<Option<Code>> {
        match (self.kinds[a as usize], self.kinds[b as usize]) {
            (CodeKind::Fin { factor: f, elem: x }, CodeKind::Fin { factor: g, elem: y }) if f == g => {
                let t = group.factors[f].table().expect("finite factor");
                let p = t.mul(x, y);
                Some(if p == 0 { None } else { Some(self.fin_code[&(f, p)]) })
            }
            _ => None,
        }
    }

    fn reduce_codes(&self, group: &Group, codes: &[Code]) -> Vec<Code> {
        let mut out: Vec<Code> = Vec::with_capacity(codes.len());
        for &c in codes {
            match out.last() {
                Some(&t) if self.inv[t as usize] == c => {
                    out.pop();
                }
                Some(&t) => match self.finite_merge(group, t, c) {
                    Some(m) => {
                        out.pop();
                        if let Some(m) = m {
                            out.push(m);
                        }
                    }
                    None => out.push(c),
                },
                None => out.push(c),
            }
        }
        out
    }

    /// Splits a freely reduced word as `d · w' · d⁻¹` with `w'` cyclically reduced.
    fn cyclic_reduce(&self, group: &Group, codes: &[Code]) -> (Vec<Code>, Vec<Code>) {
        let mut w = codes.to_vec();
        let mut d = Vec::new();
        loop {
            if w.len() < 2 {
                break;
            }
            let first = w[0];
            let last = w[w.len() - 1];
            if self.inv[last as usize] == first {
                d.push(first);
                w = w[1..w.len() - 1].to_vec();
                continue;
            }
            if self.finite_merge(group, last, first).is_some() {
                // w = a M b  ==  b⁻¹ (b a M) b
                d.push(self.inv[last as usize]);
                let mut nw = vec![last];
                nw.extend_from_slice(&w[..w.len() - 1]);
                w = self.reduce_codes(group, &nw);
                continue;
            }
            break;
        }
        (w, self.reduce_codes(group, &d))
    }

    fn canonical_rotation(w: &[Code]) -> Vec<Code> {
        let n = w.len();
        if n == 0 {
            return Vec::new();
        }
        (0..n)
            .map(|k| {
                let mut r = w[k..].to_vec();
                r.extend_from_slice(&w[..k]);
                r
            })
            .min()
            .expect("nonempty")
    }

    fn rotation_offset(u: &[Code], target: &[Code]) -> usize {
        let n = u.len();
        (0..n.max(1))
            .find(|&k| {
                if n == 0 {
                    return true;
                }
                u[k..].iter().chain(u[..k].iter()).eq(target.iter())
            })
            .expect("rotation of canonical form")
    }

    fn cyclic_moves(&self, group: &Group, c: &[Code], max_len: usize) -> Vec<(Vec<Code>, (usize, usize, usize))> {
        let n = c.len();
        let mut out = Vec::new();
        for i in 0..n.max(1) {
            let rot: Vec<Code> = if n == 0 {
                Vec::new()
            } else {
                c[i..].iter().chain(c[..i].iter()).copied().collect()
            };
            for (ri, r) in self.relators.iter().enumerate() {
                let m = r.len();
                for s in 0..=m.min(n) {
                    if s > 0 && rot[s - 1] != r[s - 1] {
                        break;
                    }
                    let mut nw = self.inverse(&r[s..]);
                    nw.extend_from_slice(&rot[s..]);
                    let nw = self.reduce_codes(group, &nw);
                    let (core, _) = self.cyclic_reduce(group, &nw);
                    if core.len() > max_len {
                        continue;
                    }
                    out.push((Self::canonical_rotation(&core), (i, ri, s)));
                }
            }
        }
        out
    }

    /// Breadth-first search for a shortest product of conjugated relators.
    pub fn area_codes(&self, group: &Group, w: &Word, cap: usize, max_len: usize) -> AreaOutcome {
        let codes = self.reduce_codes(group, &self.encode(w));
        if !self.abel.trivial_image(&self.abel.image(self, &codes)) {
            return AreaOutcome::NotTrivial;
        }
        let (core, _) = self.cyclic_reduce(group, &codes);
        let start = Self::canonical_rotation(&core);
        let max_len = max_len.max(start.len());
        struct Node {
            word: Vec<Code>,
            parent: usize,
            mv: (usize, usize, usize),
        }
        let mut nodes = vec![Node {
            word: start.clone(),
            parent: usize::MAX,
            mv: (0, 0, 0),
        }];
        let mut seen: HashMap<Vec<Code>, usize> = HashMap::new();
        seen.insert(start.clone(), 0);
        let mut frontier = vec![0usize];
        let mut found = if start.is_empty() { Some(0) } else { None };
        let mut depth = 0;
        while found.is_none() && depth < cap && !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            'outer: for &idx in &frontier {
                let word = nodes[idx].word.clone();
                for (nw, mv) in self.cyclic_moves(group, &word, max_len) {
                    if seen.contains_key(&nw) {
                        continue;
                    }
                    let id = nodes.len();
                    seen.insert(nw.clone(), id);
                    let empty = nw.is_empty();
                    nodes.push(Node { word: nw, parent: idx, mv });
                    if empty {
                        found = Some(id);
                        break 'outer;
                    }
                    next.push(id);
                }
            }
            frontier = next;
        }
        let Some(end) = found else {
            return AreaOutcome::CapExceeded;
        };
        let mut chain = Vec::new();
        let mut cur = end;
        while nodes[cur].parent != usize::MAX {
            chain.push(cur);
            cur = nodes[cur].parent;
        }
        chain.reverse();
        // Replay the moves on linear words to recover conjugators.
        let (mut u, d) = self.cyclic_reduce(group, &codes);
        let mut conj = d;
        let mut steps = Vec::new();
        let mut prev = 0usize;
        for id in chain {
            let canon = &nodes[prev].word;
            let (i, ri, s) = nodes[id].mv;
            let n = u.len();
            let t = if n == 0 {
                0
            } else {
                (Self::rotation_offset(&u, canon) + i) % n
            };
            let mut nc = conj.clone();
            nc.extend_from_slice(&u[..t]);
            conj = self.reduce_codes(group, &nc);
            let rotated: Vec<Code> = u[t..].iter().chain(u[..t].iter()).copied().collect();
            let r = &self.relators[ri];
            steps.push((self.decode(group, &conj), self.decode(group, r)));
            let mut nw = self.inverse(&r[s..]);
            nw.extend_from_slice(&rotated[s..]);
            let nw = self.reduce_codes(group, &nw);
            let (core, d) = self.cyclic_reduce(group, &nw);
            let mut nc = conj.clone();
            nc.extend_from_slice(&d);
            conj = self.reduce_codes(group, &nc);
            u = core;
            prev = id;
        }
        AreaOutcome::Found(Certificate { steps })
    }

    pub(crate) fn decide_trivial(&self, group: &Group, w: &Word, budget: EqBudget) -> Equality {
        if w.is_empty() {
            return Equality {
                verdict: Tri::Yes,
                certificate: Some(Certificate::default()),
            };
        }
        match self.area_codes(group, w, budget.area, budget.max_len) {
            AreaOutcome::Found(c) => Equality {
                verdict: Tri::Yes,
                certificate: Some(c),
            },
            AreaOutcome::NotTrivial => Equality {
                verdict: Tri::No,
                certificate: None,
            },
            AreaOutcome::CapExceeded => Equality {
                verdict: Tri::Unknown,
                certificate: None,
            },
        }
    }

    /// True when the abelianization separates `w` from the identity.
    pub fn abelian_nontrivial(&self, group: &Group, w: &Word) -> bool {
        let codes = self.reduce_codes(group, &self.encode(w));
        !self.abel.trivial_image(&self.abel.image(self, &codes))
    }

    /// Length of the word in unit codes.
    pub fn code_length(&self, w: &Word) -> usize {
        self.encode(w).len()
    }
}

/// Rational abelianization: coordinates for non-involutive X-symbols and
/// cyclic factors; relator images span the kernel.
#[derive(Debug, Clone, Default)]
struct Abelianizer {
    dim: usize,
    coord: Vec<Option<(usize, i64)>>,
    basis: Vec<(usize, Vec<BigRational>)>,
}

impl Abelianizer {
    fn new(engine: &Engine, group: &Group) -> Self {
        let mut coord = vec![None; engine.kinds.len()];
        let mut dim = 0;
        let mut gen_dim = HashMap::new();
        for (i, g) in group.gens.iter().enumerate() {
            if !g.self_inverse() {
                gen_dim.insert(i, dim);
                dim += 1;
            }
        }
        let mut fac_dim = HashMap::new();
        for (f, factor) in group.factors.iter().enumerate() {
            if !factor.is_finite() {
                fac_dim.insert(f, dim);
                dim += 1;
            }
        }
        for (c, k) in engine.kinds.iter().enumerate() {
            coord[c] = match *k {
                CodeKind::X { gen, inv } => gen_dim.get(&gen).map(|&d| (d, if inv { -1 } else { 1 })),
                CodeKind::Unit { factor, positive } => {
                    Some((fac_dim[&factor], if positive { 1 } else { -1 }))
                }
                CodeKind::Fin { .. } => None,
            };
        }
        let mut ab = Abelianizer {
            dim,
            coord,
            basis: Vec::new(),
        };
        for r in &engine.relators {
            let v = ab.image(engine, r);
            ab.insert(v);
        }
        ab
    }

    fn image(&self, _engine: &Engine, codes: &[Code]) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim];
        for &c in codes {
            if let Some((d, s)) = self.coord[c as usize] {
                v[d] += BigRational::from_integer(BigInt::from(s));
            }
        }
        v
    }

    fn eliminate(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (p, row) in &self.basis {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (a, b) in v.iter_mut().zip(row.iter()) {
                    *a -= &f * b;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<BigRational>) {
        let v = self.eliminate(v);
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let piv = v[p].clone();
            let row: Vec<BigRational> = v.iter().map(|x| x / &piv).collect();
            for (_, other) in self.basis.iter_mut() {
                if !other[p].is_zero() {
                    let f = other[p].clone();
                    for (a, b) in other.iter_mut().zip(row.iter()) {
                        *a -= &f * b;
                    }
                }
            }
            self.basis.push((p, row));
        }
    }

    fn trivial_image(&self, v: &[BigRational]) -> bool {
        self.eliminate(v.to_vec()).iter().all(|x| x.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coord {
    Gen(usize),
    Factor(usize),
}

/// Exact canonical forms when the presentation is the standard one of `ℤⁿ`:
/// every relator is a commutator of two coordinates, every pair of
/// coordinates commutes, and cyclic factors are either coordinates or
/// embedded words.
#[derive(Debug, Clone)]
pub(crate) struct Collector {
    coords: Vec<Coord>,
    gen_pos: HashMap<usize, usize>,
    factor_vec: HashMap<usize, Vec<BigInt>>,
}

impl Collector {
    fn detect(engine: &Engine, group: &Group, user_relators: &[Word]) -> Option<Collector> {
        if group.factors.iter().any(|f| f.is_finite()) {
            return None;
        }
        if group.gens.iter().any(|g| g.self_inverse()) {
            return None;
        }
        let mut coords = Vec::new();
        let mut gen_pos = HashMap::new();
        for i in 0..group.gens.len() {
            gen_pos.insert(i, coords.len());
            coords.push(Coord::Gen(i));
        }
        let mut fac_pos = HashMap::new();
        for (f, factor) in group.factors.iter().enumerate() {
            if factor.embedding.is_none() {
                fac_pos.insert(f, coords.len());
                coords.push(Coord::Factor(f));
            }
        }
        let n = coords.len();
        let code_coord = |c: Code| -> Option<usize> {
            match engine.kinds[c as usize] {
                CodeKind::X { gen, .. } => gen_pos.get(&gen).copied(),
                CodeKind::Unit { factor, .. } => fac_pos.get(&factor).copied(),
                CodeKind::Fin { .. } => None,
            }
        };
        let mut pairs = BTreeSet::new();
        for r in user_relators {
            let codes = engine.reduce_codes(group, &engine.encode(r));
            let (core, _) = engine.cyclic_reduce(group, &codes);
            if core.len() != 4 {
                return None;
            }
            if engine.inv[core[0] as usize] != core[2] || engine.inv[core[1] as usize] != core[3] {
                return None;
            }
            let a = code_coord(core[0])?;
            let b = code_coord(core[1])?;
            if a == b {
                return None;
            }
            pairs.insert((a.min(b), a.max(b)));
        }
        if pairs.len() != n * n.saturating_sub(1) / 2 {
            return None;
        }
        let mut c = Collector {
            coords,
            gen_pos,
            factor_vec: HashMap::new(),
        };
        for (f, &p) in &fac_pos {
            let mut v = vec![BigInt::zero(); n];
            v[p] = BigInt::from(1);
            c.factor_vec.insert(*f, v);
        }
        for (f, factor) in group.factors.iter().enumerate() {
            if let Some(e) = &factor.embedding {
                if e.0.iter().any(|l| matches!(l, Letter::H { factor, .. } if !fac_pos.contains_key(factor))) {
                    return None;
                }
                let v = c.vector(group, e);
                c.factor_vec.insert(f, v);
            }
        }
        Some(c)
    }

    pub(crate) fn vector(&self, _group: &Group, w: &Word) -> Vec<BigInt> {
        let n = self.coords.len();
        let mut v = vec![BigInt::zero(); n];
        for l in &w.0 {
            match l {
                Letter::X { gen, inv } => {
                    let p = self.gen_pos[gen];
                    if *inv {
                        v[p] -= 1;
                    } else {
                        v[p] += 1;
                    }
                }
                Letter::H { factor, elem } => {
                    if let FactorElem::Int(k) = elem {
                        for (a, b) in v.iter_mut().zip(self.factor_vec[factor].iter()) {
                            *a += k * b;
                        }
                    }
                }
            }
        }
        v
    }

    pub(crate) fn canonical_word(&self, _group: &Group, v: &[BigInt]) -> Word {
        let mut out = Vec::new();
        for (c, x) in self.coords.iter().zip(v.iter()) {
            if x.is_zero() {
                continue;
            }
            match *c {
                Coord::Gen(g) => {
                    let n = x.abs().to_usize().expect("exponent fits in memory");
                    for _ in 0..n {
                        out.push(Letter::X {
                            gen: g,
                            inv: x.is_negative(),
                        });
                    }
                }
                Coord::Factor(f) => out.push(Letter::H {
                    factor: f,
                    elem: FactorElem::Int(x.clone()),
                }),
            }
        }
        Word(out)
    }

    fn pivot(e: &[BigInt]) -> Option<usize> {
        e.iter().position(|x| !x.is_zero())
    }

    pub(crate) fn factor_member(&self, group: &Group, w: &Word, factor: usize) -> Option<FactorElem> {
        let v = self.vector(group, w);
        let e = &self.factor_vec[&factor];
        let Some(p) = Self::pivot(e) else {
            return v.iter().all(|x| x.is_zero()).then(|| FactorElem::Int(BigInt::zero()));
        };
        let (k, r) = v[p].div_rem(&e[p]);
        if !r.is_zero() {
            return None;
        }
        v.iter()
            .zip(e.iter())
            .all(|(a, b)| *a == &k * b)
            .then_some(FactorElem::Int(k))
    }

    pub(crate) fn coset_key(&self, group: &Group, w: &Word, factor: usize) -> Word {
        let mut v = self.vector(group, w);
        let e = &self.factor_vec[&factor];
        if let Some(p) = Self::pivot(e) {
            let q = v[p].div_floor(&e[p].abs()) * e[p].signum();
            for (a, b) in v.iter_mut().zip(e.iter()) {
                *a -= &q * b;
            }
        }
        self.canonical_word(group, &v)
    }
}

/// Convenience: the collected vector of an element, when available.
pub fn collected_vector(group: &Group, g: &Element) -> Option<Vec<BigInt>> {
    let c = group.engine.as_ref()?.collector()?;
    match g {
        Element::Word(w) => Some(c.vector(group, w)),
        Element::Nf(_) => None,
    }
}
