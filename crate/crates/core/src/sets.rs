//! Finite subsets of a ring, multiplicative subgroups, tabulated functions
//! and the two-variable maps whose images the expansion bounds control.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{RingElem, RingError, RingFamily, RingSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SetError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("{what} must be a unit, got {elem}")]
    NonUnit { what: &'static str, elem: String },
    #[error("function domains differ")]
    DomainMismatch,
    #[error("{elem} is outside the domain of {func}")]
    NotInDomain { elem: String, func: String },
    #[error("requested {requested} elements but only {available} are available")]
    SizeOverflow { requested: usize, available: usize },
    #[error("interval sets need the integer family, got {0}")]
    NotIntegerFamily(String),
    #[error("table for {0} is not total on its domain")]
    PartialTable(String),
}

/// How a set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    RandomUnits,
    RandomElements,
    GeometricProgression,
    Interval,
    Subgroup,
    Explicit,
}

/// A sorted, duplicate-free set of elements of one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ElemSet {
    ring: RingSpec,
    elems: Vec<RingElem>,
    provenance: Provenance,
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.elems.iter().map(|&x| self.ring.display(x)).collect();
        write!(f, "{{{}}}", shown.join(", "))
    }
}

impl ElemSet {
    pub fn new(
        ring: &RingSpec,
        elems: impl IntoIterator<Item = RingElem>,
        provenance: Provenance,
    ) -> Result<Self, SetError> {
        let set: BTreeSet<RingElem> = elems.into_iter().collect();
        if set.iter().any(|&x| !ring.owns(x)) {
            return Err(RingError::MixedRings.into());
        }
        Ok(ElemSet {
            ring: ring.clone(),
            elems: set.into_iter().collect(),
            provenance,
        })
    }

    /// Explicit set from canonical codes.
    pub fn from_codes(ring: &RingSpec, codes: &[u64]) -> Result<Self, SetError> {
        let elems = codes
            .iter()
            .map(|&c| ring.elem(c))
            .collect::<Result<Vec<_>, _>>()?;
        ElemSet::new(ring, elems, Provenance::Explicit)
    }

    pub fn all_units(ring: &RingSpec, cap: u64) -> Result<Self, SetError> {
        ElemSet::new(ring, ring.enumerate_units(cap)?, Provenance::Subgroup)
    }

    pub(crate) fn from_codes_unchecked(
        ring: &RingSpec,
        codes: impl IntoIterator<Item = u64>,
        provenance: Provenance,
    ) -> Self {
        let set: BTreeSet<u64> = codes.into_iter().collect();
        ElemSet {
            ring: ring.clone(),
            elems: set.into_iter().map(|c| ring.elem_unchecked(c)).collect(),
            provenance,
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[RingElem] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = RingElem> + '_ {
        self.elems.iter().copied()
    }

    pub fn codes(&self) -> Vec<u64> {
        self.elems.iter().map(|x| x.code()).collect()
    }

    pub fn contains(&self, x: RingElem) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    fn position(&self, x: RingElem) -> Option<usize> {
        self.elems.binary_search(&x).ok()
    }

    pub fn all_units_in(&self) -> bool {
        self.elems.iter().all(|&x| self.ring.is_unit(x))
    }

    pub fn is_subset_of(&self, other: &ElemSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    /// Fail unless every member is a unit.
    pub fn require_units(&self, what: &'static str) -> Result<(), SetError> {
        match self.elems.iter().find(|&&x| !self.ring.is_unit(x)) {
            Some(&x) => Err(SetError::NonUnit {
                what,
                elem: self.ring.display(x),
            }),
            None => Ok(()),
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

fn same_ring(a: &ElemSet, b: &ElemSet) -> Result<(), SetError> {
    if a.ring != b.ring {
        return Err(RingError::MixedRings.into());
    }
    Ok(())
}

/// `A + B`.
pub fn sum_set(a: &ElemSet, b: &ElemSet) -> Result<ElemSet, SetError> {
    same_ring(a, b)?;
    let ring = &a.ring;
    Ok(ElemSet::from_codes_unchecked(
        ring,
        a.iter()
            .flat_map(|x| b.iter().map(move |y| ring.add_code(x.code(), y.code()))),
        Provenance::Explicit,
    ))
}

/// `A . B`.
pub fn product_set(a: &ElemSet, b: &ElemSet) -> Result<ElemSet, SetError> {
    same_ring(a, b)?;
    let ring = &a.ring;
    Ok(ElemSet::from_codes_unchecked(
        ring,
        a.iter()
            .flat_map(|x| b.iter().map(move |y| ring.mul_code(x.code(), y.code()))),
        Provenance::Explicit,
    ))
}

/// A multiplicative subgroup of the unit group.
#[derive(Debug, Clone)]
pub struct SubgroupSet {
    generators: Vec<RingElem>,
    elements: ElemSet,
}

impl SubgroupSet {
    pub fn generators(&self) -> &[RingElem] {
        &self.generators
    }

    pub fn elements(&self) -> &ElemSet {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The full unit group `R*`.
    pub fn unit_group(ring: &RingSpec, cap: u64) -> Result<Self, SetError> {
        let elements = ElemSet::all_units(ring, cap)?;
        Ok(SubgroupSet {
            generators: elements.elements().to_vec(),
            elements,
        })
    }
}

/// Cyclic subgroup generated by the unit `g`.
pub fn subgroup_generate(ring: &RingSpec, g: RingElem) -> Result<SubgroupSet, SetError> {
    subgroup_generated_by(ring, &[g])
}

/// Subgroup generated by a list of units (closure under multiplication).
pub fn subgroup_generated_by(ring: &RingSpec, gens: &[RingElem]) -> Result<SubgroupSet, SetError> {
    for &g in gens {
        if !ring.owns(g) {
            return Err(RingError::MixedRings.into());
        }
        if !ring.is_unit(g) {
            return Err(SetError::NonUnit {
                what: "subgroup generator",
                elem: ring.display(g),
            });
        }
    }
    let mut seen = BTreeSet::from([ring.one().code()]);
    let mut frontier = vec![ring.one().code()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = ring.mul_code(x, g.code());
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(SubgroupSet {
        generators: gens.to_vec(),
        elements: ElemSet::from_codes_unchecked(ring, seen, Provenance::Subgroup),
    })
}

/// Provenance of a tabulated function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FuncTag {
    Identity,
    Monomial(u64),
    Constant,
    Table,
    Composite(String),
}

impl fmt::Display for FuncTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncTag::Identity => write!(f, "id"),
            FuncTag::Monomial(k) => write!(f, "x^{k}"),
            FuncTag::Constant => write!(f, "const"),
            FuncTag::Table => write!(f, "table"),
            FuncTag::Composite(s) => write!(f, "{s}"),
        }
    }
}

/// A unit-valued function tabulated on a finite domain.
#[derive(Debug, Clone)]
pub struct FuncTable {
    domain: ElemSet,
    values: Vec<RingElem>,
    tag: FuncTag,
}

impl FuncTable {
    fn build(
        domain: &ElemSet,
        tag: FuncTag,
        mut f: impl FnMut(RingElem) -> Result<RingElem, SetError>,
    ) -> Result<Self, SetError> {
        let ring = domain.ring();
        let values = domain
            .iter()
            .map(|x| {
                let y = f(x)?;
                if !ring.owns(y) {
                    return Err(SetError::from(RingError::MixedRings));
                }
                if !ring.is_unit(y) {
                    return Err(SetError::NonUnit {
                        what: "function value",
                        elem: ring.display(y),
                    });
                }
                Ok(y)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FuncTable {
            domain: domain.clone(),
            values,
            tag,
        })
    }

    /// Tabulate `f` on `domain`; every value must be a unit.
    pub fn from_fn(
        domain: &ElemSet,
        tag: FuncTag,
        f: impl FnMut(RingElem) -> Result<RingElem, SetError>,
    ) -> Result<Self, SetError> {
        FuncTable::build(domain, tag, f)
    }

    pub fn identity(domain: &ElemSet) -> Result<Self, SetError> {
        FuncTable::build(domain, FuncTag::Identity, Ok)
    }

    pub fn monomial(domain: &ElemSet, k: u64) -> Result<Self, SetError> {
        let ring = domain.ring().clone();
        FuncTable::build(domain, FuncTag::Monomial(k), |x| Ok(ring.pow(x, k)?))
    }

    pub fn constant(domain: &ElemSet, c: RingElem) -> Result<Self, SetError> {
        FuncTable::build(domain, FuncTag::Constant, |_| Ok(c))
    }

    /// Explicit `(x, g(x))` pairs; must cover the domain exactly once.
    pub fn from_pairs(domain: &ElemSet, pairs: &[(RingElem, RingElem)]) -> Result<Self, SetError> {
        let map: BTreeMap<RingElem, RingElem> = pairs.iter().copied().collect();
        if map.len() != pairs.len()
            || map.len() != domain.len()
            || map.keys().any(|&x| !domain.contains(x))
        {
            return Err(SetError::PartialTable("table".into()));
        }
        FuncTable::build(domain, FuncTag::Table, |x| Ok(map[&x]))
    }

    pub fn domain(&self) -> &ElemSet {
        &self.domain
    }

    pub fn tag(&self) -> &FuncTag {
        &self.tag
    }

    pub fn values(&self) -> &[RingElem] {
        &self.values
    }

    pub fn eval(&self, x: RingElem) -> Option<RingElem> {
        self.domain.position(x).map(|i| self.values[i])
    }

    /// `eval` with a domain error naming this function.
    pub fn at(&self, x: RingElem) -> Result<RingElem, SetError> {
        self.eval(x).ok_or_else(|| SetError::NotInDomain {
            elem: self.domain.ring().display(x),
            func: self.tag.to_string(),
        })
    }

    /// Largest fibre size `max_t |{x : g(x) = t}|`.
    pub fn multiplicity(&self) -> usize {
        let mut fibres: BTreeMap<RingElem, usize> = BTreeMap::new();
        for &y in &self.values {
            *fibres.entry(y).or_default() += 1;
        }
        fibres.into_values().max().unwrap_or(0)
    }

    /// Pointwise product `g . h` on a shared domain.
    pub fn product(&self, other: &FuncTable) -> Result<FuncTable, SetError> {
        if self.domain != other.domain && self.domain.elems != other.domain.elems {
            return Err(SetError::DomainMismatch);
        }
        let ring = self.domain.ring().clone();
        let tag = FuncTag::Composite(format!("({})*({})", self.tag, other.tag));
        let mut vals = other.values.iter();
        FuncTable::build(&self.domain, tag, |x| {
            let h = *vals.next().expect("same length");
            Ok(ring.mul(self.at(x)?, h)?)
        })
    }

    /// `h_u(x) = h(u x)`, on the same domain; needs `u x` in the domain for
    /// every `x`.
    pub fn translate(&self, u: RingElem) -> Result<FuncTable, SetError> {
        let ring = self.domain.ring().clone();
        let tag = FuncTag::Composite(format!("({})_{}", self.tag, ring.display(u)));
        FuncTable::build(&self.domain, tag, |x| self.at(ring.mul(u, x)?))
    }

    /// `g . id`.
    pub fn times_identity(&self) -> Result<FuncTable, SetError> {
        let ring = self.domain.ring().clone();
        let tag = FuncTag::Composite(format!("({})*id", self.tag));
        FuncTable::build(&self.domain, tag, |x| Ok(ring.mul(self.at(x)?, x)?))
    }

    /// `g^2 . id`.
    pub fn square_times_identity(&self) -> Result<FuncTable, SetError> {
        self.product(self)?.times_identity()
    }

    /// `g . h_u . id`.
    pub fn product_translate_identity(&self, h: &FuncTable, u: RingElem) -> Result<FuncTable, SetError> {
        self.product(&h.translate(u)?)?.times_identity()
    }

    /// Number of distinct values of `g(x z) / g(x)` as `x` runs over the domain.
    pub fn ratio_value_count(&self, z: RingElem) -> Result<usize, SetError> {
        let ring = self.domain.ring();
        let mut seen = BTreeSet::new();
        for (x, &gx) in self.domain.iter().zip(&self.values) {
            let gxz = self.at(ring.mul(x, z)?)?;
            seen.insert(ring.div(gxz, gx)?);
        }
        Ok(seen.len())
    }
}

/// The two-variable maps of the expansion theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoVarForm {
    /// `g(x)(h(x) + y)`
    ShiftedProduct,
    /// `g(x) h(y) (x + y)`
    WeightedSum,
    /// `x y (g(x) + y)`
    ProductShift,
}

impl TwoVarForm {
    /// `f(x, y)`.
    pub fn eval(
        self,
        g: &FuncTable,
        h: Option<&FuncTable>,
        x: RingElem,
        y: RingElem,
    ) -> Result<RingElem, SetError> {
        let ring = g.domain().ring();
        let need_h = || h.ok_or(SetError::DomainMismatch);
        Ok(match self {
            TwoVarForm::ShiftedProduct => {
                let hx = need_h()?.at(x)?;
                ring.mul(g.at(x)?, ring.add(hx, y)?)?
            }
            TwoVarForm::WeightedSum => {
                let hy = need_h()?.at(y)?;
                ring.mul(ring.mul(g.at(x)?, hy)?, ring.add(x, y)?)?
            }
            TwoVarForm::ProductShift => {
                ring.mul(ring.mul(x, y)?, ring.add(g.at(x)?, y)?)?
            }
        })
    }
}

/// The image `f(A, B) = {f(a, b) : a in A, b in B}`; `B` must consist of units.
pub fn apply_f(
    form: TwoVarForm,
    g: &FuncTable,
    h: Option<&FuncTable>,
    a: &ElemSet,
    b: &ElemSet,
) -> Result<ElemSet, SetError> {
    same_ring(a, b)?;
    b.require_units("second argument")?;
    let mut image = BTreeSet::new();
    for x in a.iter() {
        for y in b.iter() {
            image.insert(form.eval(g, h, x, y)?);
        }
    }
    ElemSet::new(a.ring(), image, Provenance::Explicit)
}

/// An element literal: a canonical code or a coefficient list (low-to-high).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemLiteral {
    Code(u64),
    Coeffs(Vec<u64>),
}

impl ElemLiteral {
    pub fn resolve(&self, ring: &RingSpec) -> Result<RingElem, SetError> {
        match self {
            ElemLiteral::Code(c) => Ok(ring.elem(*c)?),
            ElemLiteral::Coeffs(cs) => Ok(ring.from_coeffs(cs)),
        }
    }
}

fn one_literal() -> ElemLiteral {
    ElemLiteral::Code(1)
}

/// Descriptor of a set family, as written in experiment configs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetFamily {
    RandomUnits {
        size: usize,
    },
    RandomElements {
        size: usize,
    },
    Geometric {
        base: ElemLiteral,
        length: usize,
        #[serde(default = "one_literal")]
        start: ElemLiteral,
    },
    Interval {
        start: u64,
        length: u64,
        #[serde(default)]
        units_only: bool,
    },
    AllUnits,
    Explicit {
        elements: Vec<ElemLiteral>,
    },
}

/// Materialize a set family. Random kinds draw from `within` when given
/// (restricted to units for `random-units`), otherwise from the whole ring.
pub fn set_family(
    ring: &RingSpec,
    family: &SetFamily,
    seed: u64,
    within: Option<&ElemSet>,
    cap: u64,
) -> Result<ElemSet, SetError> {
    let sample = |population: Vec<RingElem>, size: usize, prov: Provenance| {
        if size > population.len() {
            return Err(SetError::SizeOverflow {
                requested: size,
                available: population.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked = index::sample(&mut rng, population.len(), size)
            .into_iter()
            .map(|i| population[i]);
        ElemSet::new(ring, picked, prov)
    };
    match family {
        SetFamily::RandomUnits { size } => {
            let population = match within {
                Some(set) => set.iter().filter(|&x| ring.is_unit(x)).collect(),
                None => ring.enumerate_units(cap)?,
            };
            sample(population, *size, Provenance::RandomUnits)
        }
        SetFamily::RandomElements { size } => {
            let population = match within {
                Some(set) => set.elements().to_vec(),
                None => ring.enumerate_elements(cap)?,
            };
            sample(population, *size, Provenance::RandomElements)
        }
        SetFamily::Geometric {
            base,
            length,
            start,
        } => {
            let base = base.resolve(ring)?;
            if !ring.is_unit(base) {
                return Err(SetError::NonUnit {
                    what: "progression base",
                    elem: ring.display(base),
                });
            }
            let mut term = start.resolve(ring)?;
            let mut terms = Vec::with_capacity(*length);
            for _ in 0..*length {
                terms.push(term);
                term = ring.mul(term, base)?;
            }
            ElemSet::new(ring, terms, Provenance::GeometricProgression)
        }
        SetFamily::Interval {
            start,
            length,
            units_only,
        } => {
            if ring.family() != RingFamily::IntegerModular {
                return Err(SetError::NotIntegerFamily(ring.to_string()));
            }
            if *length > ring.order() {
                return Err(SetError::SizeOverflow {
                    requested: *length as usize,
                    available: ring.order() as usize,
                });
            }
            let codes = (0..*length)
                .map(|i| (start + i) % ring.order())
                .filter(|&c| !units_only || ring.is_unit_code(c));
            Ok(ElemSet::from_codes_unchecked(ring, codes, Provenance::Interval))
        }
        SetFamily::AllUnits => {
            let set = match within {
                Some(set) => ElemSet::new(ring, set.iter().filter(|&x| ring.is_unit(x)), Provenance::Subgroup)?,
                None => ElemSet::all_units(ring, cap)?,
            };
            Ok(set)
        }
        SetFamily::Explicit { elements } => {
            let elems = elements
                .iter()
                .map(|lit| lit.resolve(ring))
                .collect::<Result<Vec<_>, _>>()?;
            ElemSet::new(ring, elems, Provenance::Explicit)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_ENUMERATION_CAP as CAP;

    fn ring(text: &str) -> RingSpec {
        text.parse().unwrap()
    }

    fn set(r: &RingSpec, codes: &[u64]) -> ElemSet {
        ElemSet::from_codes(r, codes).unwrap()
    }

    #[test]
    fn sum_and_product_examples() {
        let z9 = ring("zpr:3,2");
        let a = set(&z9, &[1, 2]);
        let b = set(&z9, &[1, 4]);
        assert_eq!(sum_set(&a, &b).unwrap().codes(), vec![2, 3, 5, 6]);
        assert_eq!(product_set(&a, &b).unwrap().codes(), vec![1, 2, 4, 8]);
        let zero = set(&z9, &[0]);
        assert_eq!(sum_set(&zero, &zero).unwrap().codes(), vec![0]);

        let z7 = ring("zpr:7,1");
        let squares = set(&z7, &[1, 2, 4]);
        assert_eq!(product_set(&squares, &squares).unwrap(), squares);
    }

    #[test]
    fn mixed_ring_sets_rejected() {
        let a = set(&ring("zpr:3,2"), &[1]);
        let b = set(&ring("zpr:3,3"), &[1]);
        assert!(matches!(sum_set(&a, &b), Err(SetError::Ring(RingError::MixedRings))));
    }

    #[test]
    fn subgroup_examples() {
        let z9 = ring("zpr:3,2");
        let e = |c| z9.elem(c).unwrap();
        assert_eq!(subgroup_generate(&z9, e(8)).unwrap().elements().codes(), vec![1, 8]);
        let full = subgroup_generate(&z9, e(2)).unwrap();
        assert_eq!(full.elements().codes(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(full.order(), 6);
        assert_eq!(subgroup_generate(&z9, e(1)).unwrap().elements().codes(), vec![1]);
        assert!(matches!(
            subgroup_generate(&z9, e(3)),
            Err(SetError::NonUnit { .. })
        ));
    }

    #[test]
    fn multiplicity_examples() {
        let z9 = ring("zpr:3,2");
        let units = ElemSet::all_units(&z9, CAP).unwrap();
        assert_eq!(FuncTable::identity(&units).unwrap().multiplicity(), 1);
        assert_eq!(FuncTable::monomial(&units, 2).unwrap().multiplicity(), 2);
        let c = FuncTable::constant(&units, z9.elem(4).unwrap()).unwrap();
        assert_eq!(c.multiplicity(), 6);
        // x^3 on units of Z/9: 1,8,1,8,1,8
        let id = FuncTable::identity(&units).unwrap();
        assert_eq!(id.square_times_identity().unwrap().multiplicity(), 3);
    }

    #[test]
    fn pointwise_examples() {
        let z9 = ring("zpr:3,2");
        let g2 = subgroup_generate(&z9, z9.elem(2).unwrap()).unwrap();
        let id = FuncTable::identity(g2.elements()).unwrap();
        assert_eq!(id.product(&id).unwrap().multiplicity(), 2);
        let h = FuncTable::monomial(g2.elements(), 2).unwrap();
        assert_eq!(h.translate(z9.one()).unwrap().values(), h.values());

        let small = set(&z9, &[1, 2]);
        let g = FuncTable::identity(&small).unwrap();
        // 2 * 2 = 4 is outside {1, 2}
        assert!(matches!(
            g.translate(z9.elem(2).unwrap()),
            Err(SetError::NotInDomain { .. })
        ));
        let other = FuncTable::identity(&set(&z9, &[1, 4])).unwrap();
        assert_eq!(g.product(&other).unwrap_err(), SetError::DomainMismatch);
    }

    #[test]
    fn non_unit_values_rejected() {
        let z9 = ring("zpr:3,2");
        let dom = set(&z9, &[1, 2]);
        assert!(matches!(
            FuncTable::constant(&dom, z9.elem(3).unwrap()),
            Err(SetError::NonUnit { .. })
        ));
    }

    #[test]
    fn apply_f_examples() {
        let z9 = ring("zpr:3,2");
        let units = ElemSet::all_units(&z9, CAP).unwrap();
        let id = FuncTable::identity(&units).unwrap();
        let one = FuncTable::constant(&units, z9.one()).unwrap();
        let a = set(&z9, &[1, 2]);
        let b = set(&z9, &[1, 4]);
        let img = apply_f(TwoVarForm::ShiftedProduct, &id, Some(&one), &a, &b).unwrap();
        assert_eq!(img.codes(), vec![1, 2, 4, 5]);

        let single = set(&z9, &[1]);
        let f3 = apply_f(TwoVarForm::ProductShift, &id, None, &single, &single).unwrap();
        assert_eq!(f3.codes(), vec![2]);
        let f2 = apply_f(TwoVarForm::WeightedSum, &id, Some(&id), &a, &b).unwrap();
        let f3 = apply_f(TwoVarForm::ProductShift, &id, None, &a, &b).unwrap();
        assert_eq!(f2, f3);

        let non_units = set(&z9, &[3]);
        assert!(apply_f(TwoVarForm::ProductShift, &id, None, &a, &non_units).is_err());
        let outside = set(&z9, &[0]);
        assert!(matches!(
            apply_f(TwoVarForm::ProductShift, &id, None, &outside, &b),
            Err(SetError::NotInDomain { .. })
        ));
    }

    #[test]
    fn set_family_examples() {
        let z101 = ring("zpr:101,1");
        let geo = SetFamily::Geometric {
            base: ElemLiteral::Code(2),
            length: 10,
            start: ElemLiteral::Code(1),
        };
        let s = set_family(&z101, &geo, 0, None, CAP).unwrap();
        let mut expected: Vec<u64> = (0..10).map(|i| (1u64 << i) % 101).collect();
        expected.sort();
        assert_eq!(s.codes(), expected);

        let z9 = ring("zpr:3,2");
        let all = set_family(&z9, &SetFamily::RandomUnits { size: 6 }, 3, None, CAP).unwrap();
        assert_eq!(all, ElemSet::all_units(&z9, CAP).unwrap().with_provenance(Provenance::RandomUnits));
        assert!(matches!(
            set_family(&z9, &SetFamily::RandomUnits { size: 7 }, 3, None, CAP),
            Err(SetError::SizeOverflow { requested: 7, available: 6 })
        ));
        let one = SetFamily::Geometric {
            base: ElemLiteral::Code(2),
            length: 1,
            start: ElemLiteral::Code(5),
        };
        assert_eq!(set_family(&z9, &one, 0, None, CAP).unwrap().codes(), vec![5]);
        let bad = SetFamily::Geometric {
            base: ElemLiteral::Code(3),
            length: 2,
            start: ElemLiteral::Code(1),
        };
        assert!(matches!(set_family(&z9, &bad, 0, None, CAP), Err(SetError::NonUnit { .. })));
        // powers of 8 repeat after two terms
        let short = SetFamily::Geometric {
            base: ElemLiteral::Code(8),
            length: 5,
            start: ElemLiteral::Code(1),
        };
        assert_eq!(set_family(&z9, &short, 0, None, CAP).unwrap().len(), 2);
    }

    #[test]
    fn interval_family() {
        let z9 = ring("zpr:3,2");
        let fam = SetFamily::Interval {
            start: 7,
            length: 4,
            units_only: true,
        };
        assert_eq!(set_family(&z9, &fam, 0, None, CAP).unwrap().codes(), vec![1, 7, 8]);
        let poly = ring("polyq:3,2,0,1");
        assert!(matches!(
            set_family(&poly, &fam, 0, None, CAP),
            Err(SetError::NotIntegerFamily(_))
        ));
    }

    #[test]
    fn random_family_is_seeded() {
        let z25 = ring("zpr:5,2");
        let fam = SetFamily::RandomUnits { size: 7 };
        let a = set_family(&z25, &fam, 11, None, CAP).unwrap();
        let b = set_family(&z25, &fam, 11, None, CAP).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 7);
        assert!(a.all_units_in());
    }

    #[test]
    fn family_descriptors_parse() {
        let geo: SetFamily =
            serde_json::from_str(r#"{"kind":"geometric","base":2,"length":10}"#).unwrap();
        assert_eq!(
            geo,
            SetFamily::Geometric {
                base: ElemLiteral::Code(2),
                length: 10,
                start: ElemLiteral::Code(1)
            }
        );
        let exp: SetFamily =
            serde_json::from_str(r#"{"kind":"explicit","elements":[1,[1,2]]}"#).unwrap();
        let poly = ring("polyq:3,2,0,1");
        let s = set_family(&poly, &exp, 0, None, CAP).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(poly.from_coeffs(&[1, 2])));
    }
}
