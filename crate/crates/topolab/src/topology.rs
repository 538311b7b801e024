//! Finite topologies as explicit open-set families.
//!
//! Opens are stored canonically (deduplicated, sorted by mask), so equality
//! of topologies is structural equality. Alongside the usual point-set
//! toolkit (closure, interior, density, subspaces, comparability, separation
//! profile) this module provides the density topology in closed form: for a
//! strict nonempty `F` its opens are every subset of `F` plus the whole
//! space, and `F` is dense in it.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::set::{Subset, Universe, ENUMERATION_BOUND};
use crate::{Error, Result};

/// Brute-force enumeration filters `2^(2^n)` candidate families.
pub const ENUMERATE_TOPOLOGIES_BOUND: usize = 4;

/// Random lattice generation can touch the whole powerset, so the carrier
/// is held small.
pub const RANDOM_TOPOLOGY_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteTopology {
    universe: Universe,
    opens: Vec<Subset>,
}

impl FiniteTopology {
    /// Canonicalizes and validates an arbitrary family of subsets.
    pub fn new(universe: Universe, mut opens: Vec<Subset>) -> Result<Self> {
        opens.sort_unstable();
        opens.dedup();
        let report = verify_topology(&opens, &universe)?;
        if !report.valid() {
            return Err(Error::InvalidTopology(Box::new(report)));
        }
        Ok(FiniteTopology { universe, opens })
    }

    /// Trusted constructor for families already canonical and known valid.
    pub(crate) fn from_canonical_opens(universe: Universe, opens: Vec<Subset>) -> Self {
        debug_assert!(opens.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(verify_topology(&opens, &universe).is_ok_and(|r| r.valid()));
        FiniteTopology { universe, opens }
    }

    pub fn discrete(universe: Universe) -> Result<Self> {
        let n = universe.size();
        if n > ENUMERATION_BOUND {
            return Err(Error::BoundExceeded {
                size: n,
                bound: ENUMERATION_BOUND,
            });
        }
        let opens = crate::set::enumerate_subsets(&universe)?.collect();
        Ok(FiniteTopology { universe, opens })
    }

    pub fn indiscrete(universe: Universe) -> Self {
        let opens = vec![universe.empty(), universe.full()];
        FiniteTopology { universe, opens }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, s: Subset) -> Result<bool> {
        self.check(s)?;
        Ok(self.opens.binary_search(&s).is_ok())
    }

    pub fn closed_sets(&self) -> Vec<Subset> {
        let mut closed: Vec<Subset> = self.opens.iter().map(|o| o.complement()).collect();
        closed.sort_unstable();
        closed
    }

    /// Smallest closed superset, computed by intersecting closed supersets.
    pub fn closure_of(&self, a: Subset) -> Result<Subset> {
        self.check(a)?;
        let mut acc = self.universe.full();
        for open in &self.opens {
            let closed = open.complement();
            if a.is_subset_of(closed)? {
                acc = acc.intersect(closed)?;
            }
        }
        Ok(acc)
    }

    /// Largest open subset, computed by uniting contained opens (not via
    /// complement duality, so the duality identity stays a real check).
    pub fn interior_of(&self, a: Subset) -> Result<Subset> {
        self.check(a)?;
        let mut acc = self.universe.empty();
        for open in &self.opens {
            if open.is_subset_of(a)? {
                acc = acc.union(*open)?;
            }
        }
        Ok(acc)
    }

    pub fn is_dense(&self, a: Subset) -> Result<bool> {
        Ok(self.closure_of(a)?.is_full())
    }

    /// Opens containing the given point, in canonical order.
    pub fn opens_containing(&self, point: usize) -> Result<Vec<Subset>> {
        if point >= self.universe.size() {
            return Err(Error::IndexOutOfRange {
                index: point,
                size: self.universe.size(),
            });
        }
        Ok(self.opens.iter().copied().filter(|o| o.contains(point)).collect())
    }

    /// Induced topology on a nonempty carrier `Y`, with elements re-indexed
    /// to `0..|Y|-1` and the embedding back into the parent recorded.
    pub fn subspace(&self, y: Subset) -> Result<SubspaceTopology> {
        self.check(y)?;
        if y.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let embedding = y.indices();
        let sub_universe = match self.universe.labels() {
            Some(labels) => {
                let picked: Vec<String> =
                    embedding.iter().map(|&i| labels[i].clone()).collect();
                Universe::with_labels(embedding.len(), picked)?
            }
            None => Universe::new(embedding.len())?,
        };
        let mut traces: Vec<Subset> = Vec::with_capacity(self.opens.len());
        for open in &self.opens {
            let trace = open.intersect(y)?;
            let mut mask = 0u64;
            for (sub_index, &parent_index) in embedding.iter().enumerate() {
                if trace.contains(parent_index) {
                    mask |= 1u64 << sub_index;
                }
            }
            traces.push(sub_universe.subset_from_mask(mask)?);
        }
        traces.sort_unstable();
        traces.dedup();
        Ok(SubspaceTopology {
            topology: FiniteTopology {
                universe: sub_universe,
                opens: traces,
            },
            embedding,
        })
    }

    /// True iff every open of `self` is an open of `other`.
    pub fn is_coarser(&self, other: &FiniteTopology) -> Result<bool> {
        if self.universe.size() != other.universe.size() {
            return Err(Error::UniverseMismatch {
                left: self.universe.size(),
                right: other.universe.size(),
            });
        }
        Ok(self
            .opens
            .iter()
            .all(|o| other.opens.binary_search(o).is_ok()))
    }

    /// Exhaustive separation check over point pairs and open pairs. On a
    /// non-Hausdorff space the witness is the first inseparable pair.
    pub fn separation_profile(&self) -> SeparationProfile {
        let n = self.universe.size();
        let mut t0 = true;
        let mut hausdorff = true;
        let mut witness = None;
        for x in 0..n {
            for y in x + 1..n {
                let mut distinguishable = false;
                for open in &self.opens {
                    if open.contains(x) != open.contains(y) {
                        distinguishable = true;
                        break;
                    }
                }
                t0 &= distinguishable;

                let mut separable = false;
                'outer: for u in &self.opens {
                    if !u.contains(x) {
                        continue;
                    }
                    for v in &self.opens {
                        if v.contains(y) && u.intersect(*v).unwrap().is_empty() {
                            separable = true;
                            break 'outer;
                        }
                    }
                }
                if !separable {
                    hausdorff = false;
                    if witness.is_none() {
                        witness = Some((x, y));
                    }
                }
            }
        }
        let mut t1 = true;
        for x in 0..n {
            let singleton = self.universe.singleton(x).unwrap();
            if self.closure_of(singleton).unwrap() != singleton {
                t1 = false;
                break;
            }
        }
        SeparationProfile {
            t0,
            t1,
            hausdorff,
            witness,
        }
    }

    fn check(&self, s: Subset) -> Result<()> {
        if s.universe_size() != self.universe.size() {
            return Err(Error::UniverseMismatch {
                left: s.universe_size(),
                right: self.universe.size(),
            });
        }
        Ok(())
    }
}

/// Induced topology together with the map from sub-universe indices back to
/// parent elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceTopology {
    pub topology: FiniteTopology,
    pub embedding: Vec<usize>,
}

impl SubspaceTopology {
    /// Views a subset of the sub-universe as a subset of the parent.
    pub fn embed(&self, s: Subset, parent: &Universe) -> Result<Subset> {
        if s.universe_size() != self.embedding.len() {
            return Err(Error::UniverseMismatch {
                left: s.universe_size(),
                right: self.embedding.len(),
            });
        }
        let mut mask = 0u64;
        for sub_index in s.iter() {
            mask |= 1u64 << self.embedding[sub_index];
        }
        parent.subset_from_mask(mask)
    }

    pub fn is_discrete(&self) -> bool {
        self.topology.opens.len() == 1usize << self.topology.universe.size()
    }
}

/// One closure-axiom check over pairs; `witness` pins the first failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Subset, Subset)>,
}

impl PairCheck {
    fn pass() -> Self {
        PairCheck {
            pass: true,
            witness: None,
        }
    }

    fn fail(a: Subset, b: Subset) -> Self {
        PairCheck {
            pass: false,
            witness: Some((a, b)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub has_empty: bool,
    pub has_full: bool,
    pub union_closed: PairCheck,
    pub intersection_closed: PairCheck,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.has_empty && self.has_full && self.union_closed.pass && self.intersection_closed.pass
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.has_empty {
            out.push("has_empty");
        }
        if !self.has_full {
            out.push("has_full");
        }
        if !self.union_closed.pass {
            out.push("union_closed");
        }
        if !self.intersection_closed.pass {
            out.push("intersection_closed");
        }
        out
    }
}

/// Checks the open-family axioms for an arbitrary collection of subsets.
/// Duplicates are ignored; witnesses are reported in canonical mask order.
pub fn verify_topology(family: &[Subset], universe: &Universe) -> Result<ValidityReport> {
    let n = universe.size();
    let mut members: Vec<Subset> = Vec::with_capacity(family.len());
    for &s in family {
        if s.universe_size() != n {
            return Err(Error::UniverseMismatch {
                left: s.universe_size(),
                right: n,
            });
        }
        members.push(s);
    }
    members.sort_unstable();
    members.dedup();

    let has_empty = members.binary_search(&universe.empty()).is_ok();
    let has_full = members.binary_search(&universe.full()).is_ok();

    let mut union_closed = PairCheck::pass();
    let mut intersection_closed = PairCheck::pass();
    'pairs: for i in 0..members.len() {
        for j in i + 1..members.len() {
            let a = members[i];
            let b = members[j];
            if union_closed.pass && members.binary_search(&a.union(b)?).is_err() {
                union_closed = PairCheck::fail(a, b);
            }
            if intersection_closed.pass && members.binary_search(&a.intersect(b)?).is_err() {
                intersection_closed = PairCheck::fail(a, b);
            }
            if !union_closed.pass && !intersection_closed.pass {
                break 'pairs;
            }
        }
    }

    Ok(ValidityReport {
        has_empty,
        has_full,
        union_closed,
        intersection_closed,
    })
}

/// The density topology for a strict nonempty `F`, in closed form: every
/// subset of `F` is open, plus the whole space. `2^|F| + 1` opens.
pub fn mu_topology(universe: &Universe, f: Subset) -> Result<FiniteTopology> {
    if f.universe_size() != universe.size() {
        return Err(Error::UniverseMismatch {
            left: f.universe_size(),
            right: universe.size(),
        });
    }
    if f.is_empty() {
        return Err(Error::EmptyF);
    }
    if f.is_full() {
        return Err(Error::FullF);
    }
    if f.cardinality() > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            size: f.cardinality(),
            bound: ENUMERATION_BOUND,
        });
    }
    let fm = f.mask();
    let mut opens = Vec::with_capacity((1usize << f.cardinality()) + 1);
    let mut sub = fm;
    loop {
        opens.push(universe.subset_from_mask(sub)?);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & fm;
    }
    opens.push(universe.full());
    opens.sort_unstable();
    opens.dedup();
    Ok(FiniteTopology::from_canonical_opens(universe.clone(), opens))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparationProfile {
    pub t0: bool,
    pub t1: bool,
    pub hausdorff: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

/// All labeled topologies on the universe, by filtering every family of
/// subsets that contains the empty set and the full set. Kept brute-force
/// so it can serve as an oracle for the constructive paths.
pub fn enumerate_topologies(universe: &Universe) -> Result<Vec<FiniteTopology>> {
    let n = universe.size();
    if n > ENUMERATE_TOPOLOGIES_BOUND {
        return Err(Error::BoundExceeded {
            size: n,
            bound: ENUMERATE_TOPOLOGIES_BOUND,
        });
    }
    let subset_count = 1usize << n;
    let family_count: u64 = 1u64 << subset_count;
    let mut out = Vec::new();
    for code in 0..family_count {
        if code & 1 == 0 || code >> (subset_count - 1) & 1 == 0 {
            continue;
        }
        let members: Vec<Subset> = (0..subset_count as u64)
            .filter(|m| code >> m & 1 == 1)
            .map(|m| universe.subset_from_mask(m).unwrap())
            .collect();
        if verify_topology(&members, universe)?.valid() {
            out.push(FiniteTopology {
                universe: universe.clone(),
                opens: members,
            });
        }
    }
    Ok(out)
}

/// A random topology: a few uniform subsets closed under union and
/// intersection to a fixpoint, together with the empty and full sets.
pub fn random_topology<R: Rng>(universe: &Universe, rng: &mut R) -> Result<FiniteTopology> {
    let n = universe.size();
    if n > RANDOM_TOPOLOGY_BOUND {
        return Err(Error::BoundExceeded {
            size: n,
            bound: RANDOM_TOPOLOGY_BOUND,
        });
    }
    let full = universe.full().mask();
    let generators = rng.gen_range(0..=2 * n);
    let mut sets: BTreeSet<u64> = BTreeSet::new();
    sets.insert(0);
    sets.insert(full);
    for _ in 0..generators {
        sets.insert(rng.gen::<u64>() & full);
    }
    loop {
        let snapshot: Vec<u64> = sets.iter().copied().collect();
        let mut grew = false;
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                grew |= sets.insert(snapshot[i] | snapshot[j]);
                grew |= sets.insert(snapshot[i] & snapshot[j]);
            }
        }
        if !grew {
            break;
        }
    }
    let opens: Vec<Subset> = sets
        .into_iter()
        .map(|m| universe.subset_from_mask(m).unwrap())
        .collect();
    Ok(FiniteTopology::from_canonical_opens(universe.clone(), opens))
}

/// For each open of `g`, the complement of its value under the density rule
/// for `F`. Offered for inspection only; no structure is asserted of it.
pub fn mu_image_complements(g: &FiniteTopology, f: Subset) -> Result<Vec<Subset>> {
    if f.universe_size() != g.universe().size() {
        return Err(Error::UniverseMismatch {
            left: f.universe_size(),
            right: g.universe().size(),
        });
    }
    if f.is_empty() {
        return Err(Error::EmptyF);
    }
    if f.is_full() {
        return Err(Error::FullF);
    }
    let fc = f.complement();
    let mut out: Vec<Subset> = g
        .opens()
        .iter()
        .map(|theta| {
            if theta.is_empty() {
                g.universe().full()
            } else {
                theta.union(fc).unwrap().complement()
            }
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// JSON form of a topology: a universe and its opens as index arrays.
#[derive(Debug, Clone, Deserialize)]
pub struct TopologyInput {
    pub universe: Universe,
    pub opens: Vec<Vec<usize>>,
}

impl TopologyInput {
    pub fn into_topology(self) -> Result<FiniteTopology> {
        let universe = self.universe.validated()?;
        let mut opens = Vec::with_capacity(self.opens.len());
        for indices in &self.opens {
            opens.push(universe.subset(indices)?);
        }
        FiniteTopology::new(universe, opens)
    }
}
