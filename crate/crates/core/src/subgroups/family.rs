//! Double cosets, the peripheral families `ℍ_{L,Y}` and `ℍ^r_{L,Y}`, and
//! representative sets for right cosets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{nf, require_free, SubgroupGraph};
use crate::algebra::{Element, FactorElem, FactorKind, Group, NormalForm};
use crate::error::{Error, Result};
use crate::graphs::{GraphKind, Oracle, Vertex};

/// A subset of one factor: an explicit list, or `offset + period·ℤ`
/// (a single value when the period is zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberSet {
    Finite(Vec<FactorElem>),
    Progression { offset: BigInt, period: BigInt },
}

impl MemberSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, MemberSet::Finite(v) if v.is_empty())
    }

    /// Whether the set is `{1}`.
    pub fn is_trivial(&self) -> bool {
        match self {
            MemberSet::Finite(v) => v.len() == 1 && v[0].is_identity(),
            MemberSet::Progression { offset, period } => offset.is_zero() && period.is_zero(),
        }
    }

    pub fn contains(&self, e: &FactorElem) -> bool {
        match (self, e) {
            (MemberSet::Finite(v), _) => v.contains(e),
            (MemberSet::Progression { offset, period }, FactorElem::Int(k)) => {
                if period.is_zero() {
                    k == offset
                } else {
                    (k - offset).mod_floor(period).is_zero()
                }
            }
            _ => false,
        }
    }

    pub fn render(&self, g: &Group, factor: usize) -> String {
        match self {
            MemberSet::Finite(v) => {
                let items: Vec<String> = v.iter().map(|e| g.factor_elem_str(factor, e)).collect();
                format!("{{{}}}", items.join(","))
            }
            MemberSet::Progression { offset, period } => {
                if period.is_zero() {
                    format!("{{{offset}}}")
                } else {
                    format!("{offset}+{period}Z")
                }
            }
        }
    }
}

/// Splits off a trailing syllable of the given factor.
fn strip(y: &Element, f: usize) -> Result<(Element, BigInt)> {
    let mut v = nf(y)?.0.clone();
    let mut k = BigInt::zero();
    if let Some(last) = v.last() {
        if last.factor == f {
            if let FactorElem::Int(e) = &last.elem {
                k = e.clone();
            }
            v.pop();
        }
    }
    Ok((Element::Nf(NormalForm(v)), k))
}

fn finite_members(
    g: &Group,
    l: &SubgroupGraph,
    y: &Element,
    f: usize,
    y2: &Element,
    order: usize,
) -> Result<MemberSet> {
    let y2i = g.inv(y2);
    let mut out = Vec::new();
    for s in 0..order as u32 {
        let h = g.nf_element(f, FactorElem::Fin(s));
        if l.contains(g, &g.mul(&g.mul(y, &h), &y2i))? {
            out.push(FactorElem::Fin(s));
        }
    }
    Ok(MemberSet::Finite(out))
}

/// `{h ∈ H : y·h·y′⁻¹ ∈ L}` for the factor `H`.
pub fn double_coset_members(
    g: &Group,
    l: &SubgroupGraph,
    y: &Element,
    f: usize,
    y2: &Element,
) -> Result<MemberSet> {
    require_free(g)?;
    match &g.factors[f].kind {
        FactorKind::Finite(t) => finite_members(g, l, y, f, y2, t.order()),
        FactorKind::Cyclic => {
            // y·h·y′⁻¹ = u·F^{a+h−b}·u′⁻¹ with u, u′ not ending in F.
            let (u, a) = strip(y, f)?;
            let (u2, b) = strip(y2, f)?;
            let shift = &b - &a;
            let v = l.read(g, l.base, &u)?;
            let v2 = l.read(g, l.base, &u2)?;
            if let (Some(v), Some(v2)) = (v, v2) {
                if let Some(e) = l.chain_offset(v, v2, f) {
                    let d = l.period(v, f);
                    let offset = BigInt::from(e) + &shift;
                    let period = BigInt::from(d);
                    let offset = if d > 0 { offset.mod_floor(&period) } else { offset };
                    return Ok(MemberSet::Progression { offset, period });
                }
                return Ok(MemberSet::Finite(Vec::new()));
            }
            if l.contains(g, &g.mul(&u, &g.inv(&u2)))? {
                return Ok(MemberSet::Progression {
                    offset: shift,
                    period: BigInt::zero(),
                });
            }
            Ok(MemberSet::Finite(Vec::new()))
        }
    }
}

/// `{h ∈ H : y·h·y⁻¹ ∈ L}`, so that `L ∩ yHy⁻¹ = y·(this)·y⁻¹`.
pub fn factor_conjugate_intersection(
    g: &Group,
    l: &SubgroupGraph,
    y: &Element,
    f: usize,
) -> Result<MemberSet> {
    double_coset_members(g, l, y, f, y)
}

/// An ordered list of elements, flagged when they lie in mutually distinct
/// right cosets of the subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSet {
    pub elems: Vec<Element>,
    pub distinct_right_cosets: bool,
}

impl YSet {
    pub fn unchecked(elems: Vec<Element>) -> Self {
        YSet {
            elems,
            distinct_right_cosets: false,
        }
    }

    /// Flags the list when its right cosets are pairwise distinct.
    pub fn checked(g: &Group, l: &SubgroupGraph, elems: Vec<Element>) -> Result<Self> {
        let mut ok = true;
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                if l.coset_equal(g, &elems[i], &elems[j])? {
                    ok = false;
                }
            }
        }
        Ok(YSet {
            elems,
            distinct_right_cosets: ok,
        })
    }
}

/// Keeps the first representative of each right coset `Ly`.
pub fn reduce_y(g: &Group, l: &SubgroupGraph, raw: &[Element]) -> Result<YSet> {
    let mut elems: Vec<Element> = Vec::new();
    for y in raw {
        let mut fresh = true;
        for z in &elems {
            if l.coset_equal(g, z, y)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            elems.push(y.clone());
        }
    }
    Ok(YSet {
        elems,
        distinct_right_cosets: true,
    })
}

/// A non-trivial `L ∩ yHy⁻¹`, stored as the set of `h ∈ H` with
/// `y·h·y⁻¹ ∈ L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeripheralInstance {
    pub y_index: usize,
    pub y: Element,
    pub factor: usize,
    pub members: MemberSet,
}

impl PeripheralInstance {
    /// Elements of the intersection: finite lists in full, cyclic ones by
    /// their generator.
    pub fn elements(&self, g: &Group) -> Vec<Element> {
        let conj = |h: FactorElem| {
            let x = g.nf_element(self.factor, h);
            g.mul(&g.mul(&self.y, &x), &g.inv(&self.y))
        };
        match &self.members {
            MemberSet::Finite(v) => v.iter().cloned().map(conj).collect(),
            MemberSet::Progression { period, .. } => vec![conj(FactorElem::Int(period.clone()))],
        }
    }

    pub fn render(&self, g: &Group) -> String {
        format!(
            "{}\t{}\t{}",
            g.factors[self.factor].id,
            g.elem_str(&self.y),
            self.members.render(g, self.factor)
        )
    }
}

/// `ℍ_{L,Y}` ordered by factor and then by position in `Y`.
pub fn peripheral_family(g: &Group, l: &SubgroupGraph, y: &YSet) -> Result<Vec<PeripheralInstance>> {
    if !y.distinct_right_cosets {
        return Err(Error::YNotReduced);
    }
    let mut out = Vec::new();
    for f in g.peripheral() {
        for (j, yj) in y.elems.iter().enumerate() {
            let m = factor_conjugate_intersection(g, l, yj, f)?;
            if !m.is_trivial() && !m.is_empty() {
                out.push(PeripheralInstance {
                    y_index: j,
                    y: yj.clone(),
                    factor: f,
                    members: m,
                });
            }
        }
    }
    Ok(out)
}

/// `ℍ^r_{L,Y}`: members of `ℍ_{L,Y}` at `y_j` with `L ∩ y_iHy_j⁻¹ = ∅` for
/// every `i < j`.
pub fn reduced_family(g: &Group, l: &SubgroupGraph, y: &YSet) -> Result<Vec<PeripheralInstance>> {
    let mut out = Vec::new();
    for inst in peripheral_family(g, l, y)? {
        let mut keep = true;
        for yi in &y.elems[..inst.y_index] {
            if !double_coset_members(g, l, yi, inst.factor, &inst.y)?.is_empty() {
                keep = false;
                break;
            }
        }
        if keep {
            out.push(inst);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeqOutcome {
    pub y: Vec<Element>,
    /// Some pair `(x₁, x₂)` found no witness among the enumerated elements.
    pub truncated: bool,
}

/// Representatives `z = a·h·x₁ = b·k·x₂`, one for each pair `(x₁,x₂)` of
/// `X ∪ {1}` with a witness `h` found among elements of `H` of relative
/// length at most `radius`. Witnesses are the first found in ball order.
#[allow(clippy::too_many_arguments)]
pub fn teq_y(
    g: &Group,
    a: &Element,
    h: &SubgroupGraph,
    b: &Element,
    k: &SubgroupGraph,
    x: &[Element],
    radius: usize,
) -> Result<TeqOutcome> {
    require_free(g)?;
    let mut xs = vec![g.identity()];
    for e in x {
        if !xs.contains(e) {
            xs.push(e.clone());
        }
    }
    let oracle = Oracle::new(g, GraphKind::Relative, radius as u64);
    let ball = oracle.ball(&Vertex::Group(g.identity()), radius as i64)?;
    let mut hs = Vec::new();
    for e in ball.elements() {
        if h.contains(g, &e)? {
            hs.push(e);
        }
    }
    let bi_a = g.mul(&g.inv(b), a);
    let mut y = Vec::new();
    let mut truncated = false;
    for x1 in &xs {
        for x2 in &xs {
            let tail = g.mul(x1, &g.inv(x2));
            let mut found = None;
            for hh in &hs {
                if k.contains(g, &g.mul(&g.mul(&bi_a, hh), &tail))? {
                    found = Some(g.mul(&g.mul(a, hh), x1));
                    break;
                }
            }
            match found {
                Some(z) => {
                    if !y.contains(&z) {
                        y.push(z);
                    }
                }
                None => truncated = true,
            }
        }
    }
    Ok(TeqOutcome { y, truncated })
}
