//! Closure operators on the powerset of a finite universe.
//!
//! A map `gamma: P(X) -> P(X)` satisfying the four Kuratowski axioms
//! (preserves the empty set, is extensive, idempotent, and distributes over
//! binary union) determines a topology whose opens are the complements of
//! the closure values. The workhorse here is the density rule: fix a strict
//! nonempty subset `F` and send every nonempty `A` to `A ∪ F^c`; the induced
//! topology is the one in which `F` is dense.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::set::{Subset, Universe};
use crate::topology::FiniteTopology;
use crate::{Error, Result};

/// Axiom verification over all `4^n` subset pairs is kept below this size.
pub const EXHAUSTIVE_AXIOM_BOUND: usize = 12;

/// Tabulated rules store `2^n` entries; larger universes must use a rule.
pub const TABLE_BOUND: usize = 16;

/// Default trial count for sampled verification.
pub const DEFAULT_SAMPLED_TRIALS: u32 = 10_000;

#[derive(Debug, Clone, PartialEq)]
enum ClosureRule {
    /// `A -> A ∪ F^c` for nonempty `A`, the empty set staying fixed.
    Mu { f: Subset },
    Identity,
    /// Explicit total map, indexed by the argument's membership mask.
    Table(Vec<Subset>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureOperator {
    universe: Universe,
    rule: ClosureRule,
}

impl ClosureOperator {
    /// The density rule for a strict nonempty `F`.
    pub fn mu(universe: Universe, f: Subset) -> Result<Self> {
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
        Ok(ClosureOperator {
            universe,
            rule: ClosureRule::Mu { f },
        })
    }

    pub fn identity(universe: Universe) -> Self {
        ClosureOperator {
            universe,
            rule: ClosureRule::Identity,
        }
    }

    /// Explicit rule given as `(argument, value)` pairs; the map must cover
    /// every subset exactly once.
    pub fn table(universe: Universe, entries: &[(Subset, Subset)]) -> Result<Self> {
        let n = universe.size();
        if n > TABLE_BOUND {
            return Err(Error::BoundExceeded {
                size: n,
                bound: TABLE_BOUND,
            });
        }
        let mut slots: Vec<Option<Subset>> = vec![None; 1usize << n];
        for &(a, g) in entries {
            if a.universe_size() != n || g.universe_size() != n {
                return Err(Error::UniverseMismatch {
                    left: a.universe_size(),
                    right: n,
                });
            }
            let slot = &mut slots[a.mask() as usize];
            if slot.is_some() {
                return Err(Error::IncompleteTable);
            }
            *slot = Some(g);
        }
        let table: Option<Vec<Subset>> = slots.into_iter().collect();
        match table {
            Some(table) => Ok(ClosureOperator {
                universe,
                rule: ClosureRule::Table(table),
            }),
            None => Err(Error::IncompleteTable),
        }
    }

    pub fn from_spec(universe: Universe, spec: &RuleSpec) -> Result<Self> {
        match spec {
            RuleSpec::Mu { f } => {
                let f = universe.subset(f)?;
                ClosureOperator::mu(universe, f)
            }
            RuleSpec::Identity => Ok(ClosureOperator::identity(universe)),
            RuleSpec::Table { entries } => {
                let mut pairs = Vec::with_capacity(entries.len());
                for (a, g) in entries {
                    pairs.push((universe.subset(a)?, universe.subset(g)?));
                }
                ClosureOperator::table(universe, &pairs)
            }
        }
    }

    pub fn spec(&self) -> RuleSpec {
        match &self.rule {
            ClosureRule::Mu { f } => RuleSpec::Mu { f: f.indices() },
            ClosureRule::Identity => RuleSpec::Identity,
            ClosureRule::Table(table) => RuleSpec::Table {
                entries: table
                    .iter()
                    .enumerate()
                    .map(|(mask, g)| {
                        let a = self.universe.subset_from_mask(mask as u64).unwrap();
                        (a.indices(), g.indices())
                    })
                    .collect(),
            },
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn apply(&self, a: Subset) -> Result<Subset> {
        if a.universe_size() != self.universe.size() {
            return Err(Error::UniverseMismatch {
                left: a.universe_size(),
                right: self.universe.size(),
            });
        }
        Ok(self.apply_raw(a))
    }

    fn apply_raw(&self, a: Subset) -> Subset {
        match &self.rule {
            ClosureRule::Mu { f } => {
                if a.is_empty() {
                    a
                } else {
                    a.union(f.complement()).unwrap()
                }
            }
            ClosureRule::Identity => a,
            ClosureRule::Table(table) => table[a.mask() as usize],
        }
    }

    /// Checks the four closure axioms, either over every subset pair or on a
    /// seeded uniform sample of pairs. The report carries the first
    /// counterexample found per axiom.
    pub fn verify_kuratowski(&self, mode: VerifyMode) -> Result<AxiomReport> {
        let n = self.universe.size();
        let empty = self.universe.empty();

        let preserves_empty = AxiomCheck::of(self.apply_raw(empty) == empty, empty, None);

        match mode {
            VerifyMode::Exhaustive => {
                if n > EXHAUSTIVE_AXIOM_BOUND {
                    return Err(Error::BoundExceeded {
                        size: n,
                        bound: EXHAUSTIVE_AXIOM_BOUND,
                    });
                }
                let count = 1u64 << n;
                let mut extensive = AxiomCheck::pass();
                let mut idempotent = AxiomCheck::pass();
                for mask in 0..count {
                    let a = self.universe.subset_from_mask(mask).unwrap();
                    let g = self.apply_raw(a);
                    if extensive.pass && !a.is_subset_of(g).unwrap() {
                        extensive = AxiomCheck::fail(a, None);
                    }
                    if idempotent.pass && self.apply_raw(g) != g {
                        idempotent = AxiomCheck::fail(a, None);
                    }
                    if !extensive.pass && !idempotent.pass {
                        break;
                    }
                }
                let mut additive = AxiomCheck::pass();
                'pairs: for amask in 0..count {
                    let a = self.universe.subset_from_mask(amask).unwrap();
                    let ga = self.apply_raw(a);
                    for bmask in 0..count {
                        let b = self.universe.subset_from_mask(bmask).unwrap();
                        let lhs = self.apply_raw(a.union(b).unwrap());
                        if lhs != ga.union(self.apply_raw(b)).unwrap() {
                            additive = AxiomCheck::fail(a, Some(b));
                            break 'pairs;
                        }
                    }
                }
                Ok(AxiomReport {
                    mode: VerifyModeTag::Exhaustive,
                    preserves_empty,
                    extensive,
                    idempotent,
                    additive,
                })
            }
            VerifyMode::Sampled { seed, trials } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let full = self.universe.full().mask();
                let mut extensive = AxiomCheck::pass();
                let mut idempotent = AxiomCheck::pass();
                let mut additive = AxiomCheck::pass();
                for _ in 0..trials {
                    let a = self.universe.subset_from_mask(rng.gen::<u64>() & full).unwrap();
                    let b = self.universe.subset_from_mask(rng.gen::<u64>() & full).unwrap();
                    let ga = self.apply_raw(a);
                    if extensive.pass && !a.is_subset_of(ga).unwrap() {
                        extensive = AxiomCheck::fail(a, None);
                    }
                    if idempotent.pass && self.apply_raw(ga) != ga {
                        idempotent = AxiomCheck::fail(a, None);
                    }
                    if additive.pass
                        && self.apply_raw(a.union(b).unwrap()) != ga.union(self.apply_raw(b)).unwrap()
                    {
                        additive = AxiomCheck::fail(a, Some(b));
                    }
                    if !extensive.pass && !idempotent.pass && !additive.pass {
                        break;
                    }
                }
                Ok(AxiomReport {
                    mode: VerifyModeTag::Sampled,
                    preserves_empty,
                    extensive,
                    idempotent,
                    additive,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, trials: u32 },
}

impl VerifyMode {
    pub fn sampled(seed: u64) -> Self {
        VerifyMode::Sampled {
            seed,
            trials: DEFAULT_SAMPLED_TRIALS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyModeTag {
    Exhaustive,
    Sampled,
}

/// Result of one axiom check; on failure `witness_a` (and `witness_b` for
/// the union axiom) pin a concrete counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub pass: bool,
    #[serde(rename = "witnessA", skip_serializing_if = "Option::is_none")]
    pub witness_a: Option<Subset>,
    #[serde(rename = "witnessB", skip_serializing_if = "Option::is_none")]
    pub witness_b: Option<Subset>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            pass: true,
            witness_a: None,
            witness_b: None,
        }
    }

    fn fail(a: Subset, b: Option<Subset>) -> Self {
        AxiomCheck {
            pass: false,
            witness_a: Some(a),
            witness_b: b,
        }
    }

    fn of(pass: bool, a: Subset, b: Option<Subset>) -> Self {
        if pass {
            AxiomCheck::pass()
        } else {
            AxiomCheck::fail(a, b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub mode: VerifyModeTag,
    pub preserves_empty: AxiomCheck,
    pub extensive: AxiomCheck,
    pub idempotent: AxiomCheck,
    pub additive: AxiomCheck,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.preserves_empty.pass && self.extensive.pass && self.idempotent.pass && self.additive.pass
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.preserves_empty.pass {
            out.push("preserves_empty");
        }
        if !self.extensive.pass {
            out.push("extensive");
        }
        if !self.idempotent.pass {
            out.push("idempotent");
        }
        if !self.additive.pass {
            out.push("additive");
        }
        out
    }
}

/// Free-function form of [`ClosureOperator::mu`].
pub fn make_mu(universe: Universe, f: Subset) -> Result<ClosureOperator> {
    ClosureOperator::mu(universe, f)
}

/// JSON form of a closure operator, without its universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum RuleSpec {
    Mu {
        #[serde(rename = "F")]
        f: Vec<usize>,
    },
    Identity,
    Table {
        entries: Vec<(Vec<usize>, Vec<usize>)>,
    },
}

/// Builds the topology whose opens are the complements of the operator's
/// values, after verifying the operator exhaustively. An operator failing
/// any axiom is rejected, never repaired.
pub fn topology_from_closure(op: &ClosureOperator) -> Result<FiniteTopology> {
    let report = op.verify_kuratowski(VerifyMode::Exhaustive)?;
    if !report.all_pass() {
        return Err(Error::NotAClosureOperator(Box::new(report)));
    }
    let n = op.universe().size();
    let mut opens: Vec<Subset> = (0..1u64 << n)
        .map(|mask| {
            let a = op.universe().subset_from_mask(mask).unwrap();
            op.apply_raw(a).complement()
        })
        .collect();
    opens.sort_unstable();
    opens.dedup();
    Ok(FiniteTopology::from_canonical_opens(op.universe().clone(), opens))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    /// Independent restatement of the density rule on raw masks; the tests'
    /// oracle for expected closure values and opens.
    fn mu_oracle(n: usize, f_mask: u64, a_mask: u64) -> u64 {
        let full = (1u64 << n) - 1;
        if a_mask == 0 {
            0
        } else {
            a_mask | (full & !f_mask)
        }
    }

    #[test]
    fn mu_apply_examples() {
        let x = u(3);
        let f = x.subset(&[0, 1]).unwrap();
        let mu = ClosureOperator::mu(x.clone(), f).unwrap();
        assert_eq!(mu.apply(x.empty()).unwrap(), x.empty());
        assert_eq!(
            mu.apply(x.subset(&[0]).unwrap()).unwrap(),
            x.subset(&[0, 2]).unwrap()
        );
        assert_eq!(mu.apply(f).unwrap(), x.full());
    }

    #[test]
    fn mu_constructor_preconditions() {
        let x = u(3);
        assert!(matches!(
            ClosureOperator::mu(x.clone(), x.empty()),
            Err(Error::EmptyF)
        ));
        assert!(matches!(
            ClosureOperator::mu(x.clone(), x.full()),
            Err(Error::FullF)
        ));
        // One-element universes admit no strict nonempty subset.
        let tiny = u(1);
        assert!(ClosureOperator::mu(tiny.clone(), tiny.empty()).is_err());
        assert!(ClosureOperator::mu(tiny.clone(), tiny.full()).is_err());
    }

    #[test]
    fn mu_satisfies_all_axioms_small_sweep() {
        for n in 2..=5 {
            let x = u(n);
            for f_mask in 1..x.full().mask() {
                let f = x.subset_from_mask(f_mask).unwrap();
                let mu = ClosureOperator::mu(x.clone(), f).unwrap();
                let report = mu.verify_kuratowski(VerifyMode::Exhaustive).unwrap();
                assert!(report.all_pass(), "n={n} F={f:?}: {report:?}");
            }
        }
    }

    #[test]
    fn identity_is_a_closure_operator() {
        let report = ClosureOperator::identity(u(4))
            .verify_kuratowski(VerifyMode::Exhaustive)
            .unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn constant_empty_table_fails_extensive() {
        let x = u(2);
        let entries: Vec<(Subset, Subset)> = (0..4)
            .map(|m| (x.subset_from_mask(m).unwrap(), x.empty()))
            .collect();
        let op = ClosureOperator::table(x.clone(), &entries).unwrap();
        let report = op.verify_kuratowski(VerifyMode::Exhaustive).unwrap();
        assert!(report.preserves_empty.pass);
        assert!(!report.extensive.pass);
        assert_eq!(report.extensive.witness_a, Some(x.subset(&[0]).unwrap()));
        assert!(report.idempotent.pass);
        assert!(report.additive.pass);
        assert_eq!(report.failures(), vec!["extensive"]);
    }

    #[test]
    fn sampled_mode_is_deterministic_and_finds_failures() {
        let x = u(6);
        let entries: Vec<(Subset, Subset)> = (0..64)
            .map(|m| (x.subset_from_mask(m).unwrap(), x.empty()))
            .collect();
        let op = ClosureOperator::table(x.clone(), &entries).unwrap();
        let r1 = op.verify_kuratowski(VerifyMode::sampled(7)).unwrap();
        let r2 = op.verify_kuratowski(VerifyMode::sampled(7)).unwrap();
        assert_eq!(r1, r2);
        assert!(!r1.extensive.pass);
    }

    #[test]
    fn table_must_be_total() {
        let x = u(2);
        let entries = vec![(x.empty(), x.empty())];
        assert!(matches!(
            ClosureOperator::table(x.clone(), &entries),
            Err(Error::IncompleteTable)
        ));
        let dup = vec![
            (x.empty(), x.empty()),
            (x.empty(), x.full()),
            (x.subset(&[0]).unwrap(), x.full()),
            (x.subset(&[1]).unwrap(), x.full()),
        ];
        assert!(matches!(
            ClosureOperator::table(x, &dup),
            Err(Error::IncompleteTable)
        ));
    }

    #[test]
    fn topology_from_mu_matches_brute_force() {
        let x = u(3);
        let f = x.subset(&[0, 1]).unwrap();
        let mu = ClosureOperator::mu(x.clone(), f).unwrap();
        let topo = topology_from_closure(&mu).unwrap();

        // Oracle: collect complements of the rule's values over all subsets.
        let mut expected: Vec<u64> = (0..8u64)
            .map(|m| !mu_oracle(3, f.mask(), m) & 0b111)
            .collect();
        expected.sort_unstable();
        expected.dedup();
        let got: Vec<u64> = topo.opens().iter().map(|s| s.mask()).collect();
        assert_eq!(got, expected);

        // Frozen value: opens are exactly the subsets of F plus the universe.
        let frozen = vec![
            x.empty(),
            x.subset(&[0]).unwrap(),
            x.subset(&[1]).unwrap(),
            x.subset(&[0, 1]).unwrap(),
            x.full(),
        ];
        assert_eq!(topo.opens(), frozen.as_slice());
    }

    #[test]
    fn topology_from_identity_is_discrete() {
        let x = u(2);
        let topo = topology_from_closure(&ClosureOperator::identity(x.clone())).unwrap();
        assert_eq!(topo.opens().len(), 4);
    }

    #[test]
    fn sierpinski_from_mu_on_two_points() {
        let x = u(2);
        let f = x.subset(&[0]).unwrap();
        let topo = topology_from_closure(&ClosureOperator::mu(x.clone(), f).unwrap()).unwrap();
        let frozen = vec![x.empty(), x.subset(&[0]).unwrap(), x.full()];
        assert_eq!(topo.opens(), frozen.as_slice());
    }

    #[test]
    fn invalid_operator_is_rejected_with_report() {
        let x = u(2);
        let entries: Vec<(Subset, Subset)> = (0..4)
            .map(|m| (x.subset_from_mask(m).unwrap(), x.empty()))
            .collect();
        let op = ClosureOperator::table(x, &entries).unwrap();
        match topology_from_closure(&op) {
            Err(Error::NotAClosureOperator(report)) => assert!(!report.extensive.pass),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn additivity_implies_monotonicity() {
        for n in 2..=5 {
            let x = u(n);
            for f_mask in 1..x.full().mask() {
                let f = x.subset_from_mask(f_mask).unwrap();
                let mu = ClosureOperator::mu(x.clone(), f).unwrap();
                for am in 0..1u64 << n {
                    let a = x.subset_from_mask(am).unwrap();
                    for bm in 0..1u64 << n {
                        let b = x.subset_from_mask(bm).unwrap();
                        if a.is_subset_of(b).unwrap() {
                            let ga = mu.apply(a).unwrap();
                            let gb = mu.apply(b).unwrap();
                            assert!(ga.is_subset_of(gb).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rule_spec_round_trip() {
        let x = u(3);
        let spec: RuleSpec = serde_json::from_str(r#"{"rule":"mu","F":[0,1]}"#).unwrap();
        let op = ClosureOperator::from_spec(x.clone(), &spec).unwrap();
        assert_eq!(op.spec(), spec);
        assert_eq!(
            serde_json::to_string(&spec).unwrap(),
            r#"{"rule":"mu","F":[0,1]}"#
        );
        let ident: RuleSpec = serde_json::from_str(r#"{"rule":"identity"}"#).unwrap();
        assert_eq!(ident, RuleSpec::Identity);
    }
}
