//! Vertex-set constructions behind the four expansion theorems, their exact
//! edge-count chains in the sum-product graph, the field-case Vinh
//! inequality and the geometric-progression sharpness probe.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, SpGraph, SpectralCert, Vertex, VertexSet};
use crate::ring::{RingElem, RingError, RingFamily, RingSpec};
use crate::sets::{
    apply_f, product_set, sum_set, ElemSet, FuncTable, SetError, SetFamily, ElemLiteral, TwoVarForm,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("set {0} is empty")]
    EmptySet(&'static str),
    #[error("{0} needs a second function h")]
    MissingH(Theorem),
    #[error("set {0} is not contained in the function domain")]
    OutsideDomain(&'static str),
    #[error("function domain is not closed under multiplication")]
    DomainNotClosed,
    #[error("graph is over {graph}, sets are over {sets}")]
    GraphRingMismatch { graph: String, sets: String },
    #[error("{0} needs a prime field Z/p")]
    NotPrimeField(String),
    #[error("degenerate progression: {0}")]
    Degenerate(String),
}

impl From<RingError> for HarnessError {
    fn from(e: RingError) -> Self {
        HarnessError::Set(SetError::Ring(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// `|f(A,B)||B.C|`, `f = g(x)(h(x)+y)`, `m = mu(g.h)`.
    Mult,
    /// `|f(A,B)||B+C|`, `f = g(x)(h(x)+y)`, `m = mu(g)`.
    Add,
    /// `|f(A,B)||A.C||B.C|`, `f = g(x)h(y)(x+y)`, `m = max_u mu(g.h_u.id)`.
    ThreeSets,
    /// `|f(A,B)||B.C|`, `f = xy(g(x)+y)`, `m = mu(g^2.id)`.
    Special,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::Mult, Theorem::Add, Theorem::ThreeSets, Theorem::Special];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Mult => "T-mult",
            Theorem::Add => "T-add",
            Theorem::ThreeSets => "T-three-sets",
            Theorem::Special => "T-special",
        }
    }

    pub fn form(self) -> TwoVarForm {
        match self {
            Theorem::Mult | Theorem::Add => TwoVarForm::ShiftedProduct,
            Theorem::ThreeSets => TwoVarForm::WeightedSum,
            Theorem::Special => TwoVarForm::ProductShift,
        }
    }

    pub fn needs_h(self) -> bool {
        !matches!(self, Theorem::Special)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Theorem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Measurements of the three-sets hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `max_z |{g(xz)/g(x) : x in G}|`.
    pub ratio_count_g: usize,
    /// `max_z |{h(xz)/h(x) : x in G}|`.
    pub ratio_count_h: usize,
    /// Triples where the second coordinate of `T` as printed differs from
    /// the simplified `z h(yz) / (g(x) h(y))`.
    pub printed_form_mismatches: u64,
}

/// The vertex sets `S`, `T` of one theorem instance.
#[derive(Debug, Clone)]
pub struct ProofConstruction {
    pub theorem: Theorem,
    pub ring: RingSpec,
    pub s: VertexSet,
    pub t: VertexSet,
    /// The multiplicity bounding the fibres of `(x, y, z) -> (s, t)`.
    pub m: u64,
    pub sizes: [u64; 3],
    pub triple_count: u64,
    pub f_size: u64,
    /// `|B.C|`, or `|B+C|` for the additive theorem.
    pub bc_size: u64,
    /// `|A.C|`, three-sets only.
    pub ac_size: Option<u64>,
    pub s_cap: u64,
    pub t_cap: u64,
    /// Every triple produced an adjacent pair `(s, t)`.
    pub triples_are_edges: bool,
    /// Distinct second coordinates of `T`.
    pub t_second_coords: u64,
    pub hypotheses: Option<Hypotheses>,
}

impl ProofConstruction {
    pub fn caps_hold(&self) -> bool {
        self.s.len() as u64 <= self.s_cap && self.t.len() as u64 <= self.t_cap
    }

    /// The product of set sizes the theorem bounds from below.
    pub fn lhs(&self) -> u64 {
        self.f_size * self.bc_size * self.ac_size.unwrap_or(1)
    }

    /// `D` with `lhs * D >= |S||T|`.
    fn lhs_divisor(&self) -> u64 {
        let [a, _, c] = self.sizes;
        match self.hypotheses {
            Some(h) => c * h.ratio_count_h as u64,
            None => a * c,
        }
    }
}

fn require_nonempty(set: &ElemSet, role: &'static str) -> Result<(), HarnessError> {
    if set.is_empty() {
        return Err(HarnessError::EmptySet(role));
    }
    Ok(())
}

fn require_in_domain(set: &ElemSet, f: &FuncTable, role: &'static str) -> Result<(), HarnessError> {
    if !set.is_subset_of(f.domain()) {
        return Err(HarnessError::OutsideDomain(role));
    }
    Ok(())
}

/// Largest number of distinct ratios `f(xz)/f(x)` over `z` in the domain.
fn max_ratio_count(f: &FuncTable) -> Result<usize, HarnessError> {
    let mut best = 0;
    for z in f.domain().iter() {
        best = best.max(f.ratio_value_count(z)?);
    }
    Ok(best)
}

/// Build `S` and `T` for `theorem` from the triples `A x B x C`.
pub fn construct_st(
    theorem: Theorem,
    g: &FuncTable,
    h: Option<&FuncTable>,
    a: &ElemSet,
    b: &ElemSet,
    c: &ElemSet,
) -> Result<ProofConstruction, HarnessError> {
    require_nonempty(a, "A")?;
    require_nonempty(b, "B")?;
    require_nonempty(c, "C")?;
    let ring = a.ring().clone();
    if b.ring() != &ring || c.ring() != &ring || g.domain().ring() != &ring {
        return Err(RingError::MixedRings.into());
    }
    a.require_units("A")?;
    b.require_units("B")?;
    c.require_units("C")?;
    require_in_domain(a, g, "A")?;
    let h = match (theorem.needs_h(), h) {
        (true, None) => return Err(HarnessError::MissingH(theorem)),
        (true, Some(h)) => {
            if h.domain().ring() != &ring {
                return Err(RingError::MixedRings.into());
            }
            require_in_domain(a, h, "A")?;
            Some(h)
        }
        (false, _) => None,
    };

    let sizes = [a.len() as u64, b.len() as u64, c.len() as u64];
    let triple_count = sizes[0] * sizes[1] * sizes[2];
    let f_size = apply_f(theorem.form(), g, h, a, b)?.len() as u64;
    let bc = if theorem == Theorem::Add {
        sum_set(b, c)?
    } else {
        product_set(b, c)?
    };
    let bc_size = bc.len() as u64;

    let mut s = BTreeSet::new();
    let mut t = BTreeSet::new();
    let mut triples_are_edges = true;
    let mut mismatches = 0;
    let mut push = |su: (RingElem, RingElem), tv: (RingElem, RingElem)| -> Result<(), HarnessError> {
        let sum = ring.add(su.0, tv.0)?;
        let prod = ring.mul(su.1, tv.1)?;
        triples_are_edges &= sum == prod;
        s.insert(Vertex::new(su.0, su.1));
        t.insert(Vertex::new(tv.0, tv.1));
        Ok(())
    };

    let (m, ac_size, s_cap, t_cap, hypotheses);
    match theorem {
        Theorem::Mult => {
            let h = h.expect("checked");
            m = g.product(h)?.multiplicity() as u64;
            for x in a.iter() {
                let (gx, hx) = (g.at(x)?, h.at(x)?);
                let gx_inv = ring.invert(gx)?;
                for z in c.iter() {
                    let sv = (ring.mul(z, hx)?, ring.mul(z, gx_inv)?);
                    for y in b.iter() {
                        let tv = (ring.mul(y, z)?, ring.mul(gx, ring.add(hx, y)?)?);
                        push(sv, tv)?;
                    }
                }
            }
            ac_size = None;
            s_cap = sizes[0] * sizes[2];
            t_cap = triple_count.min(f_size * bc_size);
            hypotheses = None;
        }
        Theorem::Add => {
            let h = h.expect("checked");
            m = g.multiplicity() as u64;
            for x in a.iter() {
                let (gx, hx) = (g.at(x)?, h.at(x)?);
                let gx_inv = ring.invert(gx)?;
                for y in b.iter() {
                    let fxy = ring.mul(gx, ring.add(hx, y)?)?;
                    for z in c.iter() {
                        let sv = (ring.add(y, z)?, fxy);
                        let tv = (ring.sub(hx, z)?, gx_inv);
                        push(sv, tv)?;
                    }
                }
            }
            ac_size = None;
            s_cap = triple_count.min(f_size * bc_size);
            t_cap = sizes[0] * sizes[2];
            hypotheses = None;
        }
        Theorem::ThreeSets => {
            let h = h.expect("checked");
            let group = g.domain();
            if h.domain().elements() != group.elements() {
                return Err(SetError::DomainMismatch.into());
            }
            if product_set(group, group)?.elements() != group.elements() {
                return Err(HarnessError::DomainNotClosed);
            }
            require_in_domain(b, g, "B")?;
            require_in_domain(c, g, "C")?;
            let mut worst = 0;
            for u in group.iter() {
                worst = worst.max(g.product_translate_identity(h, u)?.multiplicity());
            }
            m = worst as u64;
            for x in a.iter() {
                let gx = g.at(x)?;
                for y in b.iter() {
                    let hy = h.at(y)?;
                    let xy_sum = ring.add(x, y)?;
                    for z in c.iter() {
                        let yz = ring.mul(y, z)?;
                        let xz = ring.mul(x, z)?;
                        let (hyz, gxz) = (h.at(yz)?, g.at(xz)?);
                        let s_second = ring.div(ring.mul(ring.mul(gx, hy)?, xy_sum)?, hyz)?;
                        let numerator = ring.mul(ring.mul(ring.mul(z, gxz)?, hyz)?, ring.invert(gx)?)?;
                        let printed = ring.div(ring.mul(numerator, ring.invert(hy)?)?, gxz)?;
                        let simplified = ring.div(ring.mul(z, hyz)?, ring.mul(gx, hy)?)?;
                        if printed != simplified {
                            mismatches += 1;
                        }
                        push((yz, s_second), (xz, printed))?;
                    }
                }
            }
            let ac = product_set(a, c)?.len() as u64;
            let hyp = Hypotheses {
                ratio_count_g: max_ratio_count(g)?,
                ratio_count_h: max_ratio_count(h)?,
                printed_form_mismatches: mismatches,
            };
            ac_size = Some(ac);
            s_cap = triple_count.min(f_size * bc_size);
            t_cap = triple_count.min(sizes[2] * hyp.ratio_count_h as u64 * ac);
            hypotheses = Some(hyp);
        }
        Theorem::Special => {
            m = g.square_times_identity()?.multiplicity() as u64;
            for x in a.iter() {
                let gx = g.at(x)?;
                let x_inv = ring.invert(x)?;
                for z in c.iter() {
                    let tv = (ring.mul(z, gx)?, ring.mul(ring.mul(z, z)?, x_inv)?);
                    for y in b.iter() {
                        let yz = ring.mul(y, z)?;
                        let fxy = ring.mul(ring.mul(x, y)?, ring.add(gx, y)?)?;
                        push((yz, ring.div(fxy, yz)?), tv)?;
                    }
                }
            }
            ac_size = None;
            s_cap = triple_count.min(f_size * bc_size);
            t_cap = sizes[0] * sizes[2];
            hypotheses = None;
        }
    }

    let t_second_coords = t.iter().map(|v| v.b).collect::<BTreeSet<_>>().len() as u64;
    Ok(ProofConstruction {
        theorem,
        ring,
        s: s.into_iter().collect(),
        t: t.into_iter().collect(),
        m,
        sizes,
        triple_count,
        f_size,
        bc_size,
        ac_size,
        s_cap,
        t_cap,
        triples_are_edges,
        t_second_coords,
        hypotheses,
    })
}

/// Exact lower end of the edge-count chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeLowerBound {
    pub e_st: u64,
    pub m: u64,
    pub triple_count: u64,
    /// `e(S,T) * m >= |A||B||C|`.
    pub holds: bool,
}

fn check_graph_ring(pc: &ProofConstruction, graph: &SpGraph) -> Result<(), HarnessError> {
    if graph.ring() != &pc.ring {
        return Err(HarnessError::GraphRingMismatch {
            graph: graph.ring().to_string(),
            sets: pc.ring.to_string(),
        });
    }
    Ok(())
}

pub fn verify_edge_lower_bound(
    pc: &ProofConstruction,
    graph: &SpGraph,
) -> Result<EdgeLowerBound, HarnessError> {
    check_graph_ring(pc, graph)?;
    let e_st = graph.edge_count(&pc.s, &pc.t);
    Ok(EdgeLowerBound {
        e_st,
        m: pc.m,
        triple_count: pc.triple_count,
        holds: e_st as u128 * pc.m as u128 >= pc.triple_count as u128,
    })
}

/// Every measured quantity of one theorem instance.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub ring: String,
    pub q: u64,
    pub r: u32,
    pub theorem: Theorem,
    pub a_size: u64,
    pub b_size: u64,
    pub c_size: u64,
    pub m: u64,
    pub f_size: u64,
    pub bc_size: u64,
    pub ac_size: Option<u64>,
    pub s_size: u64,
    pub t_size: u64,
    pub s_cap: u64,
    pub t_cap: u64,
    pub caps_ok: bool,
    pub triples_are_edges: bool,
    pub t_second_coords: u64,
    pub triple_count: u64,
    pub e_st: u64,
    /// `|A||B||C| / m`.
    pub lower_bound: f64,
    pub lower_ok: bool,
    /// `|S||T| / q^r + lambda sqrt(|S||T|)`.
    pub upper_bound: f64,
    pub upper_ok: bool,
    pub chain_ok: bool,
    pub lambda: f64,
    pub lhs: u64,
    /// `min(q^r X / 2, X^2 / (8 r q^(2r-1))) / D` with `X = |A||B||C|/m`.
    pub explicit_rhs: f64,
    pub explicit_ok: bool,
    pub delta_emp: Option<f64>,
    pub hypotheses: Option<Hypotheses>,
}

/// Construct `S`, `T`, count their edges and evaluate the proof chain with
/// the certified second eigenvalue.
pub fn evaluate_theorem(
    theorem: Theorem,
    g: &FuncTable,
    h: Option<&FuncTable>,
    sets: [&ElemSet; 3],
    graph: &SpGraph,
    cert: &SpectralCert,
) -> Result<ExpansionReport, HarnessError> {
    let pc = construct_st(theorem, g, h, sets[0], sets[1], sets[2])?;
    let lower = verify_edge_lower_bound(&pc, graph)?;
    Ok(report_from(&pc, lower, cert))
}

pub fn report_from(pc: &ProofConstruction, lower: EdgeLowerBound, cert: &SpectralCert) -> ExpansionReport {
    let ring = &pc.ring;
    let (q, r) = (ring.q(), ring.r());
    let qr = ring.order();
    let [a_size, b_size, c_size] = pc.sizes;
    let (s_size, t_size) = (pc.s.len() as u64, pc.t.len() as u64);
    let n = pc.triple_count;
    let m = pc.m.max(1);

    let st = (s_size * t_size) as f64;
    let upper_bound = st / qr as f64 + cert.lambda * st.sqrt();
    let e = lower.e_st as f64;
    let upper_ok = e <= upper_bound + 1e-9 * (1.0 + upper_bound);

    // lhs * D >= q^r N / (2m)  or  lhs * D >= N^2 / (8 r m^2 q^(2r-1))
    let lhs = pc.lhs();
    let d = pc.lhs_divisor() as u128;
    let q_big = q as u128;
    let qr_big = qr as u128;
    let q_2r1 = q_big.pow(2 * r - 1);
    let (n_big, m_big, l_big) = (n as u128, m as u128, lhs as u128);
    let explicit_ok = 2 * m_big * l_big * d >= qr_big * n_big
        || 8 * r as u128 * m_big * m_big * q_2r1 * l_big * d >= n_big * n_big;
    let x = n as f64 / m as f64;
    let explicit_rhs = (qr as f64 * x / 2.0).min(x * x / (8.0 * r as f64 * q_2r1 as f64)) / d as f64;

    let delta_emp = if a_size == b_size && a_size > 1 {
        let biggest = [Some(pc.f_size), Some(pc.bc_size), pc.ac_size]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(1);
        Some((biggest as f64).ln() / (a_size as f64).ln() - 1.0)
    } else {
        None
    };

    ExpansionReport {
        ring: ring.to_string(),
        q,
        r,
        theorem: pc.theorem,
        a_size,
        b_size,
        c_size,
        m: pc.m,
        f_size: pc.f_size,
        bc_size: pc.bc_size,
        ac_size: pc.ac_size,
        s_size,
        t_size,
        s_cap: pc.s_cap,
        t_cap: pc.t_cap,
        caps_ok: pc.caps_hold(),
        triples_are_edges: pc.triples_are_edges,
        t_second_coords: pc.t_second_coords,
        triple_count: n,
        e_st: lower.e_st,
        lower_bound: n as f64 / m as f64,
        lower_ok: lower.holds,
        upper_bound,
        upper_ok,
        chain_ok: lower.holds && upper_ok,
        lambda: cert.lambda,
        lhs,
        explicit_rhs,
        explicit_ok,
        delta_emp,
        hypotheses: pc.hypotheses,
    }
}

/// `|A|^2 <= m n |A| / q + sqrt(q m n)` with `m = |A+A|`, `n = |A.A|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VinhReport {
    pub q: u64,
    pub size: u64,
    pub sum_size: u64,
    pub product_size: u64,
    pub lhs: u64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Check the field-case sum-product inequality in exact integers.
pub fn vinh_field_check(a: &ElemSet) -> Result<VinhReport, HarnessError> {
    let ring = a.ring();
    if ring.r() != 1 {
        return Err(HarnessError::NotPrimeField(ring.to_string()));
    }
    let q = ring.q();
    let size = a.len() as u64;
    let sum_size = sum_set(a, a)?.len() as u64;
    let product_size = product_set(a, a)?.len() as u64;
    let mn = (sum_size * product_size) as i128;
    let excess = q as i128 * (size as i128).pow(2) - mn * size as i128;
    let holds = excess <= 0 || excess * excess <= (q as i128).pow(3) * mn;
    let rhs = mn as f64 * size as f64 / q as f64 + (q as f64 * mn as f64).sqrt();
    let lhs = size * size;
    Ok(VinhReport {
        q,
        size,
        sum_size,
        product_size,
        lhs,
        rhs,
        slack: rhs - lhs as f64,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub ring: String,
    pub p: u64,
    pub base: u64,
    pub length: usize,
    pub a_size: u64,
    pub f_size: u64,
    pub product_size: u64,
    /// `|f(A,A)| |A.A| / (p |A|)` for `f = xy(x+y)`.
    pub ratio: f64,
}

/// Smallest generator of `(Z/p)*`.
pub fn smallest_primitive_root(ring: &RingSpec) -> Result<RingElem, HarnessError> {
    if ring.family() != RingFamily::IntegerModular || ring.r() != 1 {
        return Err(HarnessError::NotPrimeField(ring.to_string()));
    }
    let p = ring.p();
    let mut factors = Vec::new();
    let mut rest = p - 1;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            factors.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    for c in 2..p {
        let g = ring.elem(c)?;
        if factors.iter().all(|&l| ring.pow(g, (p - 1) / l).map(|x| x != ring.one()).unwrap_or(false)) {
            return Ok(g);
        }
    }
    // p = 3 lands here only if 2 failed, which cannot happen
    Ok(ring.elem(p - 1)?)
}

/// Measure `|f(A,A)||A.A| / (p|A|)` for a geometric progression `A` of the
/// given length and `f = xy(x+y)`. The base defaults to the smallest
/// primitive root.
pub fn sharpness_probe(
    ring: &RingSpec,
    length: usize,
    base: Option<RingElem>,
) -> Result<SharpnessReport, HarnessError> {
    if ring.family() != RingFamily::IntegerModular || ring.r() != 1 {
        return Err(HarnessError::NotPrimeField(ring.to_string()));
    }
    if length == 0 {
        return Err(HarnessError::Degenerate("length 0".into()));
    }
    let base = match base {
        Some(b) => b,
        None => smallest_primitive_root(ring)?,
    };
    let family = SetFamily::Geometric {
        base: ElemLiteral::Code(base.code()),
        length,
        start: ElemLiteral::Code(1),
    };
    let a = crate::sets::set_family(ring, &family, 0, None, ring.order())?;
    let id = FuncTable::identity(&a)?;
    let f_size = apply_f(TwoVarForm::ProductShift, &id, None, &a, &a)?.len() as u64;
    let product_size = product_set(&a, &a)?.len() as u64;
    let p = ring.p();
    let a_size = a.len() as u64;
    Ok(SharpnessReport {
        ring: ring.to_string(),
        p,
        base: base.code(),
        length,
        a_size,
        f_size,
        product_size,
        ratio: (f_size * product_size) as f64 / (p * a_size) as f64,
    })
}
