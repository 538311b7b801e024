//! Finite directed sets, nets, and convergence.
//!
//! A net indexed by a finite directed set carries enough structure to
//! characterize closure: a point lies in the closure of `A` exactly when
//! some net with points in `A` converges to it, and the witness is built
//! constructively from the neighbourhood filter ordered by reverse
//! inclusion.
//!
//! Tails are reflexive (`α ≥ β`). On a finite carrier directedness forces a
//! greatest element, whose strict tail is empty, so the strict form
//! (`α > β`) is vacuously true for every target set; it is kept available
//! behind [`TailMode`] for differential tests only.

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::set::{Subset, Universe};
use crate::topology::{mu_topology, FiniteTopology};
use crate::{Error, Result};

/// Exhaustive closure-theorem scans cover `2^n` subsets times `n` points.
pub const NET_THEOREM_BOUND: usize = 8;

/// Carrier cap for directed sets. Neighbourhood filters of topologies at
/// the theorem bound need up to `2^7` elements, so one word is not enough;
/// rows are block bitsets.
pub const MAX_CARRIER: usize = 4096;

/// A finite carrier `0..size-1` with an explicit binary relation, one
/// bitset row per element (`bit b of row a` ⟺ `a ≤ b`). The relation is
/// stored as given; [`verify_directed`] reports whether it is a directed
/// partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedSet {
    size: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl DirectedSet {
    fn with_empty_relation(size: usize) -> Result<Self> {
        if !(1..=MAX_CARRIER).contains(&size) {
            return Err(Error::BadParameter("directed-set size must be in 1..=4096"));
        }
        let words_per_row = size.div_ceil(64);
        Ok(DirectedSet {
            size,
            words_per_row,
            rows: vec![0u64; size * words_per_row],
        })
    }

    /// Builds the relation from explicit pairs `(a, b)` meaning `a ≤ b`.
    /// Only index bounds are enforced here.
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut d = DirectedSet::with_empty_relation(size)?;
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    size,
                });
            }
            d.set(a, b);
        }
        Ok(d)
    }

    /// Total order `0 ≤ 1 ≤ … ≤ len-1`.
    pub fn chain(len: usize) -> Result<Self> {
        let mut d = DirectedSet::with_empty_relation(len)?;
        for a in 0..len {
            for b in a..len {
                d.set(a, b);
            }
        }
        Ok(d)
    }

    /// Componentwise order on a `rows × cols` grid, element `(r, c)` at
    /// index `r·cols + c`.
    pub fn grid(grid_rows: usize, grid_cols: usize) -> Result<Self> {
        let size = grid_rows
            .checked_mul(grid_cols)
            .filter(|&s| (1..=MAX_CARRIER).contains(&s))
            .ok_or(Error::BadParameter("directed-set size must be in 1..=4096"))?;
        let mut d = DirectedSet::with_empty_relation(size)?;
        for r1 in 0..grid_rows {
            for c1 in 0..grid_cols {
                for r2 in r1..grid_rows {
                    for c2 in c1..grid_cols {
                        d.set(r1 * grid_cols + c1, r2 * grid_cols + c2);
                    }
                }
            }
        }
        Ok(d)
    }

    fn set(&mut self, a: usize, b: usize) {
        self.rows[a * self.words_per_row + b / 64] |= 1u64 << (b % 64);
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.rows[a * self.words_per_row..(a + 1) * self.words_per_row]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a < self.size
            && b < self.size
            && self.rows[a * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for (w, &word) in self.row(a).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    out.push((a, b));
                }
            }
        }
        out
    }
}

impl Serialize for DirectedSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DirectedSet", 2)?;
        s.serialize_field("size", &self.size)?;
        s.serialize_field("leq", &self.pairs())?;
        s.end()
    }
}

/// JSON form of a directed set: `{"size":k,"leq":[[a,b],...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct DirectedSetInput {
    pub size: usize,
    pub leq: Vec<(usize, usize)>,
}

impl DirectedSetInput {
    pub fn into_directed_set(self) -> Result<DirectedSet> {
        DirectedSet::new(self.size, &self.leq)
    }
}

/// One order-axiom check; the witness lists the offending indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl OrderCheck {
    fn pass() -> Self {
        OrderCheck {
            pass: true,
            witness: None,
        }
    }

    fn fail(witness: Vec<usize>) -> Self {
        OrderCheck {
            pass: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedReport {
    pub reflexive: OrderCheck,
    pub antisymmetric: OrderCheck,
    pub transitive: OrderCheck,
    pub directed: OrderCheck,
}

impl DirectedReport {
    pub fn valid(&self) -> bool {
        self.reflexive.pass && self.antisymmetric.pass && self.transitive.pass && self.directed.pass
    }
}

/// Checks the partial-order axioms and pairwise upper bounds, with the
/// first counterexample per axiom.
pub fn verify_directed(d: &DirectedSet) -> DirectedReport {
    let k = d.size();

    let mut reflexive = OrderCheck::pass();
    for i in 0..k {
        if !d.leq(i, i) {
            reflexive = OrderCheck::fail(vec![i]);
            break;
        }
    }

    let mut antisymmetric = OrderCheck::pass();
    'anti: for i in 0..k {
        for j in i + 1..k {
            if d.leq(i, j) && d.leq(j, i) {
                antisymmetric = OrderCheck::fail(vec![i, j]);
                break 'anti;
            }
        }
    }

    let mut transitive = OrderCheck::pass();
    'trans: for i in 0..k {
        for j in 0..k {
            if !d.leq(i, j) {
                continue;
            }
            let ri = d.row(i);
            let rj = d.row(j);
            for w in 0..d.words_per_row {
                let excess = rj[w] & !ri[w];
                if excess != 0 {
                    let l = w * 64 + excess.trailing_zeros() as usize;
                    transitive = OrderCheck::fail(vec![i, j, l]);
                    break 'trans;
                }
            }
        }
    }

    let mut directed = OrderCheck::pass();
    'dir: for i in 0..k {
        for j in i + 1..k {
            let ri = d.row(i);
            let rj = d.row(j);
            if (0..d.words_per_row).all(|w| ri[w] & rj[w] == 0) {
                directed = OrderCheck::fail(vec![i, j]);
                break 'dir;
            }
        }
    }

    DirectedReport {
        reflexive,
        antisymmetric,
        transitive,
        directed,
    }
}

/// Tail convention for eventually-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// `α ≥ β`: the informative convention on finite carriers.
    Reflexive,
    /// `α > β`: vacuous at a greatest element; differential testing only.
    Strict,
}

/// A map from a directed carrier into a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    index: DirectedSet,
    points: Vec<usize>,
    universe_size: usize,
}

impl Net {
    pub fn new(index: DirectedSet, points: Vec<usize>, universe: &Universe) -> Result<Self> {
        if points.len() != index.size() {
            return Err(Error::BadParameter("net points must cover the index carrier"));
        }
        for &p in &points {
            if p >= universe.size() {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    size: universe.size(),
                });
            }
        }
        Ok(Net {
            index,
            points,
            universe_size: universe.size(),
        })
    }

    pub fn constant(index: DirectedSet, point: usize, universe: &Universe) -> Result<Self> {
        let points = vec![point; index.size()];
        Net::new(index, points, universe)
    }

    pub fn index(&self) -> &DirectedSet {
        &self.index
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn eventually_in(&self, a: Subset) -> Result<bool> {
        self.eventually_in_with(a, TailMode::Reflexive)
    }

    /// True iff some index bounds a tail wholly inside `A`, the tail being
    /// reflexive or strict per `mode`. A tail at `β` lies in `A` exactly
    /// when `β`'s relation row has no bit at an index mapped outside `A`.
    pub fn eventually_in_with(&self, a: Subset, mode: TailMode) -> Result<bool> {
        if a.universe_size() != self.universe_size {
            return Err(Error::UniverseMismatch {
                left: a.universe_size(),
                right: self.universe_size,
            });
        }
        let wpr = self.index.words_per_row;
        let mut outside = vec![0u64; wpr];
        for (alpha, &p) in self.points.iter().enumerate() {
            if !a.contains(p) {
                outside[alpha / 64] |= 1u64 << (alpha % 64);
            }
        }
        for beta in 0..self.index.size() {
            let row = self.index.row(beta);
            let ok = (0..wpr).all(|w| {
                let mut tail = row[w];
                if mode == TailMode::Strict && w == beta / 64 {
                    tail &= !(1u64 << (beta % 64));
                }
                tail & outside[w] == 0
            });
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn converges_to(&self, x: usize, t: &FiniteTopology) -> Result<bool> {
        self.converges_to_with(x, t, TailMode::Reflexive)
    }

    pub fn converges_to_with(&self, x: usize, t: &FiniteTopology, mode: TailMode) -> Result<bool> {
        if t.universe().size() != self.universe_size {
            return Err(Error::UniverseMismatch {
                left: t.universe().size(),
                right: self.universe_size,
            });
        }
        for open in t.opens_containing(x)? {
            if !self.eventually_in_with(open, mode)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for Net {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Net", 2)?;
        s.serialize_field("index", &self.index)?;
        s.serialize_field("points", &self.points)?;
        s.end()
    }
}

/// JSON form of a net: `{"index":{...},"points":[...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct NetInput {
    pub index: DirectedSetInput,
    pub points: Vec<usize>,
}

impl NetInput {
    pub fn into_net(self, universe: &Universe) -> Result<Net> {
        Net::new(self.index.into_directed_set()?, self.points, universe)
    }
}

/// If `x` lies in the closure of `A`, builds the canonical witness: the net
/// indexed by the neighbourhood filter of `x` under reverse inclusion,
/// picking the minimum-index element of `U ∩ A` for each neighbourhood `U`.
/// Returns `None` when `x` is outside the closure.
pub fn witness_net(t: &FiniteTopology, a: Subset, x: usize) -> Result<Option<Net>> {
    if x >= t.universe().size() {
        return Err(Error::IndexOutOfRange {
            index: x,
            size: t.universe().size(),
        });
    }
    if !t.closure_of(a)?.contains(x) {
        return Ok(None);
    }
    let neighbourhoods = t.opens_containing(x)?;
    let mut index = DirectedSet::with_empty_relation(neighbourhoods.len())?;
    for (i, u) in neighbourhoods.iter().enumerate() {
        for (j, v) in neighbourhoods.iter().enumerate() {
            if v.is_subset_of(*u)? {
                index.set(i, j);
            }
        }
    }
    let mut points = Vec::with_capacity(neighbourhoods.len());
    for u in &neighbourhoods {
        // Nonempty because x in the closure means every neighbourhood of x
        // meets A.
        let pick = u.intersect(a)?.iter().next().expect("closure guarantees U meets A");
        points.push(pick);
    }
    Ok(Some(Net::new(index, points, t.universe())?))
}

/// Exhaustively confirms, for every subset and point, that closure
/// membership coincides with the existence of a converging witness net.
pub fn check_closure_net_theorem(t: &FiniteTopology) -> Result<bool> {
    let n = t.universe().size();
    if n > NET_THEOREM_BOUND {
        return Err(Error::BoundExceeded {
            size: n,
            bound: NET_THEOREM_BOUND,
        });
    }
    for mask in 0..1u64 << n {
        let a = t.universe().subset_from_mask(mask)?;
        let closure = t.closure_of(a)?;
        for x in 0..n {
            match witness_net(t, a, x)? {
                Some(net) => {
                    if !closure.contains(x) {
                        return Ok(false);
                    }
                    if !net.points().iter().all(|&p| a.contains(p)) {
                        return Ok(false);
                    }
                    if !net.converges_to(x, t)? {
                        return Ok(false);
                    }
                }
                None => {
                    if closure.contains(x) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// A random net: a chain or grid carrier of at most 8 elements with
/// uniformly chosen points, occasionally collapsed to a constant so the
/// convergent case is exercised.
pub fn random_net<R: Rng>(universe: &Universe, rng: &mut R) -> Net {
    const GRIDS: [(usize, usize); 5] = [(2, 2), (2, 3), (2, 4), (3, 2), (4, 2)];
    let index = if rng.gen_bool(0.5) {
        DirectedSet::chain(rng.gen_range(1..=8)).unwrap()
    } else {
        let (r, c) = GRIDS[rng.gen_range(0..GRIDS.len())];
        DirectedSet::grid(r, c).unwrap()
    };
    let n = universe.size();
    if rng.gen_bool(1.0 / 3.0) {
        Net::constant(index, rng.gen_range(0..n), universe).unwrap()
    } else {
        let points = (0..index.size()).map(|_| rng.gen_range(0..n)).collect();
        Net::new(index, points, universe).unwrap()
    }
}

/// For a set `F` closed in `g`, checks on random nets that convergence to
/// `x` in the density topology of `F` forces the net eventually into every
/// open of the induced topology on `F` that contains `x` (opens compared
/// after embedding back into the ambient universe). Vacuously true for
/// limits outside `F`.
pub fn check_final_lemma(g: &FiniteTopology, f: Subset, trials: u32, seed: u64) -> Result<bool> {
    use rand::SeedableRng;
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
    if !g.is_open(f.complement())? {
        return Err(Error::FNotClosed);
    }
    let universe = g.universe();
    let mu = mu_topology(universe, f)?;
    let induced = g.subspace(f)?;
    let embedded_opens: Vec<Subset> = induced
        .topology
        .opens()
        .iter()
        .map(|o| induced.embed(*o, universe))
        .collect::<Result<_>>()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let net = random_net(universe, &mut rng);
        for x in 0..universe.size() {
            if !net.converges_to(x, &mu)? {
                continue;
            }
            for theta in &embedded_opens {
                if theta.contains(x) && !net.eventually_in(*theta)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{enumerate_topologies, random_topology, verify_topology};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn mu_t(n: usize, f: &[usize]) -> (Universe, Subset, FiniteTopology) {
        let x = u(n);
        let f = x.subset(f).unwrap();
        let t = mu_topology(&x, f).unwrap();
        (x, f, t)
    }

    #[test]
    fn chains_and_grids_are_directed() {
        for len in 1..=8 {
            assert!(verify_directed(&DirectedSet::chain(len).unwrap()).valid());
        }
        assert!(verify_directed(&DirectedSet::grid(2, 4).unwrap()).valid());
        assert!(verify_directed(&DirectedSet::grid(3, 2).unwrap()).valid());
    }

    #[test]
    fn large_carriers_use_multiple_words() {
        let chain = DirectedSet::chain(130).unwrap();
        assert!(chain.leq(0, 129));
        assert!(chain.leq(64, 65));
        assert!(!chain.leq(65, 64));
        assert!(verify_directed(&chain).valid());
    }

    #[test]
    fn antichain_fails_directedness_with_witness() {
        let d = DirectedSet::new(2, &[(0, 0), (1, 1)]).unwrap();
        let report = verify_directed(&d);
        assert!(report.reflexive.pass);
        assert!(report.antisymmetric.pass);
        assert!(report.transitive.pass);
        assert!(!report.directed.pass);
        assert_eq!(report.directed.witness, Some(vec![0, 1]));
    }

    #[test]
    fn order_axiom_witnesses() {
        let missing_reflexive = DirectedSet::new(2, &[(0, 1), (1, 1)]).unwrap();
        let r = verify_directed(&missing_reflexive);
        assert_eq!(r.reflexive.witness, Some(vec![0]));

        let two_cycle = DirectedSet::new(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap();
        let r = verify_directed(&two_cycle);
        assert_eq!(r.antisymmetric.witness, Some(vec![0, 1]));

        let not_transitive =
            DirectedSet::new(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
        let r = verify_directed(&not_transitive);
        assert_eq!(r.transitive.witness, Some(vec![0, 1, 2]));
    }

    #[test]
    fn eventually_in_examples() {
        let x = u(2);
        let chain = DirectedSet::chain(3).unwrap();
        let at0 = Net::constant(chain.clone(), 0, &x).unwrap();
        assert!(at0.eventually_in(x.subset(&[0]).unwrap()).unwrap());
        assert!(!at0.eventually_in(x.subset(&[1]).unwrap()).unwrap());

        let tail = Net::new(DirectedSet::chain(4).unwrap(), vec![1, 1, 0, 0], &x).unwrap();
        assert!(tail.eventually_in(x.subset(&[0]).unwrap()).unwrap());
        assert!(!tail.eventually_in(x.empty()).unwrap());
    }

    #[test]
    fn strict_tails_degenerate_at_the_greatest_element() {
        // A finite directed carrier has a greatest element; its strict tail
        // is empty, so the strict form accepts even the empty target.
        let x = u(2);
        let net = Net::new(DirectedSet::chain(4).unwrap(), vec![1, 1, 0, 0], &x).unwrap();
        assert!(net.eventually_in_with(x.empty(), TailMode::Strict).unwrap());
        assert!(!net.eventually_in_with(x.empty(), TailMode::Reflexive).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let xu = u(n);
            let net = random_net(&xu, &mut rng);
            let mask = rng.gen::<u64>() & xu.full().mask();
            let a = xu.subset_from_mask(mask).unwrap();
            assert!(net.eventually_in_with(a, TailMode::Strict).unwrap());
            if net.eventually_in_with(a, TailMode::Reflexive).unwrap() {
                assert!(net.eventually_in_with(a, TailMode::Strict).unwrap());
            }
        }
    }

    #[test]
    fn convergence_in_density_topology() {
        let (x, f, t) = mu_t(3, &[0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let net = random_net(&x, &mut rng);
            // The only neighbourhood of a point outside F is the whole
            // space, so every net converges there.
            assert!(net.converges_to(2, &t).unwrap());
            // Inside F the singleton is open: convergence means the net is
            // eventually constantly there.
            for point in f.iter() {
                let singleton = x.singleton(point).unwrap();
                assert_eq!(
                    net.converges_to(point, &t).unwrap(),
                    net.eventually_in(singleton).unwrap()
                );
            }
        }
    }

    #[test]
    fn discrete_convergence_is_eventual_constancy() {
        let x = u(3);
        let d = FiniteTopology::discrete(x.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let net = random_net(&x, &mut rng);
            for point in 0..3 {
                assert_eq!(
                    net.converges_to(point, &d).unwrap(),
                    net.eventually_in(x.singleton(point).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn witness_net_examples() {
        let (x, _, t) = mu_t(3, &[0, 1]);

        let net = witness_net(&t, x.subset(&[0]).unwrap(), 2).unwrap().unwrap();
        assert_eq!(net.index().size(), 1);
        assert_eq!(net.points(), &[0]);
        assert!(net.converges_to(2, &t).unwrap());

        assert!(witness_net(&t, x.subset(&[2]).unwrap(), 0).unwrap().is_none());

        // A singleton target makes the canonical pick the point itself.
        let d = FiniteTopology::discrete(x.clone()).unwrap();
        let constant = witness_net(&d, x.subset(&[1]).unwrap(), 1).unwrap().unwrap();
        assert!(constant.points().iter().all(|&p| p == 1));
    }

    #[test]
    fn witness_net_filters_verify_directed() {
        for n in 2..=5 {
            let x = u(n);
            for fm in 1..x.full().mask() {
                let f = x.subset_from_mask(fm).unwrap();
                let t = mu_topology(&x, f).unwrap();
                for am in 0..1u64 << n {
                    let a = x.subset_from_mask(am).unwrap();
                    for point in 0..n {
                        if let Some(net) = witness_net(&t, a, point).unwrap() {
                            assert!(verify_directed(net.index()).valid());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closure_net_theorem_on_enumerated_topologies() {
        for n in 1..=3 {
            for t in enumerate_topologies(&u(n)).unwrap() {
                assert!(check_closure_net_theorem(&t).unwrap());
            }
        }
    }

    #[test]
    fn closure_net_theorem_on_density_topologies() {
        for n in 2..=5 {
            let x = u(n);
            for fm in 1..x.full().mask() {
                let f = x.subset_from_mask(fm).unwrap();
                let t = mu_topology(&x, f).unwrap();
                assert!(check_closure_net_theorem(&t).unwrap());
            }
        }
        assert!(check_closure_net_theorem(&FiniteTopology::discrete(u(8)).unwrap()).unwrap());
    }

    #[test]
    fn convergence_is_monotone_in_coarseness() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=4 {
            let x = u(n);
            let topologies = enumerate_topologies(&x).unwrap();
            for t1 in &topologies {
                for t2 in &topologies {
                    if !t1.is_coarser(t2).unwrap() {
                        continue;
                    }
                    for _ in 0..2 {
                        let net = random_net(&x, &mut rng);
                        for point in 0..n {
                            if net.converges_to(point, t2).unwrap() {
                                assert!(net.converges_to(point, t1).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn every_net_converges_to_every_point_outside_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let x = u(n);
            let fm = rng.gen_range(1..x.full().mask());
            let f = x.subset_from_mask(fm).unwrap();
            let t = mu_topology(&x, f).unwrap();
            let net = random_net(&x, &mut rng);
            for point in f.complement().iter() {
                assert!(net.converges_to(point, &t).unwrap());
            }
        }
    }

    #[test]
    fn final_lemma_on_fixed_instances() {
        let x = u(4);
        let f = x.subset(&[0, 1]).unwrap();

        let discrete = FiniteTopology::discrete(x.clone()).unwrap();
        assert!(check_final_lemma(&discrete, f, 200, 41).unwrap());

        // Smallest topology in which F is closed.
        let minimal =
            FiniteTopology::new(x.clone(), vec![x.empty(), f.complement(), x.full()]).unwrap();
        assert!(check_final_lemma(&minimal, f, 200, 42).unwrap());

        let indiscrete = FiniteTopology::indiscrete(x.clone());
        assert!(matches!(
            check_final_lemma(&indiscrete, f, 10, 43),
            Err(Error::FNotClosed)
        ));
    }

    #[test]
    fn final_lemma_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut ran = 0;
        while ran < 100 {
            let n = rng.gen_range(2..=6);
            let x = u(n);
            let g = random_topology(&x, &mut rng).unwrap();
            // Pick F as the complement of a random open, so it is closed.
            let open = g.opens()[rng.gen_range(0..g.opens().len())];
            let f = open.complement();
            if f.is_empty() || f.is_full() {
                continue;
            }
            assert!(check_final_lemma(&g, f, 10, rng.gen()).unwrap());
            ran += 1;
        }
    }

    #[test]
    fn net_theorem_bound_is_enforced() {
        let t = FiniteTopology::indiscrete(u(9));
        assert!(matches!(
            check_closure_net_theorem(&t),
            Err(Error::BoundExceeded { size: 9, bound: 8 })
        ));
    }

    #[test]
    fn json_forms() {
        let d = DirectedSet::chain(2).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"size":2,"leq":[[0,0],[0,1],[1,1]]}"#
        );
        let parsed: DirectedSetInput =
            serde_json::from_str(r#"{"size":2,"leq":[[0,0],[0,1],[1,1]]}"#).unwrap();
        assert_eq!(parsed.into_directed_set().unwrap(), d);

        let x = u(2);
        let net = Net::new(d, vec![1, 0], &x).unwrap();
        let json = serde_json::to_string(&net).unwrap();
        assert_eq!(
            json,
            r#"{"index":{"size":2,"leq":[[0,0],[0,1],[1,1]]},"points":[1,0]}"#
        );
        let parsed: NetInput = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.into_net(&x).unwrap(), net);
    }

    #[test]
    fn random_nets_have_valid_carriers_and_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let x = u(n);
            let net = random_net(&x, &mut rng);
            assert!(net.index().size() <= 8);
            assert!(verify_directed(net.index()).valid());
            assert!(net.points().iter().all(|&p| p < n));
        }
    }

    #[test]
    fn neighbourhood_filter_orders_by_reverse_inclusion() {
        let (x, f, t) = mu_t(3, &[0, 1]);
        let net = witness_net(&t, f, 0).unwrap().unwrap();
        // Opens containing 0: {0}, {0,1}, X in canonical order; reverse
        // inclusion makes the singleton the greatest element.
        assert_eq!(net.index().size(), 3);
        assert!(net.index().leq(2, 0));
        assert!(net.index().leq(1, 0));
        assert!(!net.index().leq(0, 1));
        assert!(verify_topology(t.opens(), &x).unwrap().valid());
    }
}
