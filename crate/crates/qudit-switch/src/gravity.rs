//! Rebuilds the switch from event orderings.
//!
//! A massive body placed in superposition of d locations puts Alice's single
//! event A and Bob's chain B_1 → … → B_{d-1} into d coherent temporal
//! configurations. Each event carries a fixed local shift-gate power, chosen
//! conditionally on which signals reached the agent first; composing the
//! per-branch products must land exactly on the canonical switch lists. All
//! geometry (masses, radii, proper times) is abstracted away: only the
//! which-event-precedes-which structure matters here, so a configuration is
//! just its ordering label.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_pow, UnitaryMatrix};
use crate::states::shift;
use crate::switch::SwitchConfig;

/// One mass configuration, identified by its branch index `m`: event A
/// occurs after exactly `d - 1 - m` of Bob's events. Branch 0 is
/// `B_1 → … → B_{d-1} → A`; branch d-1 is `A → B_1 → … → B_{d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventOrdering {
    d: usize,
    branch: usize,
}

impl EventOrdering {
    pub fn new(d: usize, branch: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if branch >= d {
            return Err(Error::IndexOutOfRange {
                index: branch,
                dim: d,
            });
        }
        Ok(Self { d, branch })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    /// Number of Bob events in A's causal past.
    pub fn bob_events_before_alice(&self) -> usize {
        self.d - 1 - self.branch
    }

    /// Bob events that precede A (unconditioned operations), as 1-based
    /// event numbers.
    pub fn unconditioned_bob_events(&self) -> Vec<usize> {
        (1..=self.bob_events_before_alice()).collect()
    }

    /// Bob events that follow A and therefore see Alice's signal
    /// (conditioned operations), as 1-based event numbers.
    pub fn conditioned_bob_events(&self) -> Vec<usize> {
        (self.bob_events_before_alice() + 1..=self.d - 1).collect()
    }

    /// The time-ordered event chain, e.g. `B1→A→B2` for d = 3, branch 1.
    pub fn label(&self) -> String {
        let before = self.bob_events_before_alice();
        let mut parts: Vec<String> = (1..=before).map(|k| format!("B{k}")).collect();
        parts.push("A".to_string());
        parts.extend((before + 1..self.d).map(|k| format!("B{k}")));
        parts.join("→")
    }

    /// Which of Bob's signals reach Alice before she acts.
    pub fn alice_signal_summary(&self) -> String {
        let before = self.bob_events_before_alice();
        if before == 0 {
            "no signal received".to_string()
        } else {
            let sigs: Vec<String> = (1..=before).map(|k| format!("b{k}")).collect();
            format!("receives {}", sigs.join(", "))
        }
    }

    /// Which of Bob's events see Alice's signal `a` before they fire.
    pub fn bob_signal_summary(&self) -> String {
        let conditioned = self.conditioned_bob_events();
        if conditioned.is_empty() {
            "no signal received".to_string()
        } else {
            let evs: Vec<String> = conditioned.iter().map(|k| format!("B{k}")).collect();
            format!("receives a before {}", evs.join(", "))
        }
    }

    /// Label of the single Alice operation in this ordering.
    pub fn alice_op_label(&self) -> String {
        let before = self.bob_events_before_alice();
        if before == 0 {
            "U_A".to_string()
        } else {
            format!("U_A|B{before}")
        }
    }

    /// Labels of Bob's operations in application order (latest event left).
    pub fn bob_op_label(&self) -> String {
        let before = self.bob_events_before_alice();
        (1..self.d)
            .rev()
            .map(|k| {
                if k <= before {
                    format!("U_B{k}")
                } else {
                    format!("U_B{k}|A")
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Shift-gate exponents assigned to every event, conditioned and not.
/// Exponents are plain integers; everything reduces mod d since
/// `shift^d = I`.
#[derive(Debug, Clone, Serialize)]
pub struct EventUnitaryAssignment {
    d: usize,
    /// Exponent for `U_A` (no signal received).
    pub alice_unconditioned_exp: u64,
    /// Exponent for `U_{A|B_k}`, indexed by k - 1 for k = 1..d-1.
    pub alice_conditioned_exps: Vec<u64>,
    /// Exponent for `U_{B_k}`, indexed by k - 1.
    pub bob_unconditioned_exps: Vec<u64>,
    /// Exponent for `U_{B_k|A}`, indexed by k - 1.
    pub bob_conditioned_exps: Vec<u64>,
}

impl EventUnitaryAssignment {
    pub fn d(&self) -> usize {
        self.d
    }
}

/// The assignment that reproduces the canonical switch:
/// `U_A = shift^{d-1}`, `U_{A|B_k} = shift^{d-1-k}`, `U_{B_k} = shift^{d-1}`,
/// and every conditioned Bob operation is the identity.
pub fn standard_assignment(d: usize) -> Result<EventUnitaryAssignment> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let dm1 = (d - 1) as u64;
    Ok(EventUnitaryAssignment {
        d,
        alice_unconditioned_exp: dm1,
        alice_conditioned_exps: (1..d).map(|k| dm1 - k as u64).collect(),
        bob_unconditioned_exps: vec![dm1; d - 1],
        bob_conditioned_exps: vec![0; d - 1],
    })
}

/// The local operations an ordering induces on Alice's and Bob's qudits,
/// with the shift exponents reported both raw-summed and reduced mod d.
#[derive(Debug, Clone)]
pub struct BranchComposition {
    pub ordering: EventOrdering,
    pub alice_op: UnitaryMatrix,
    pub bob_op: UnitaryMatrix,
    pub alice_exp_raw: u64,
    pub bob_exp_raw: u64,
    pub alice_exp_mod_d: u64,
    pub bob_exp_mod_d: u64,
}

/// Composes one branch: Alice contributes her single event unitary
/// (conditioned on the last Bob event in her past, or unconditioned if A is
/// first); Bob's product runs over B_{d-1} … B_1 with the earliest event
/// applied first, conditioned exponents for events after A.
pub fn compose_branch(
    assign: &EventUnitaryAssignment,
    ordering: EventOrdering,
) -> Result<BranchComposition> {
    let d = assign.d();
    if ordering.d() != d {
        return Err(Error::ShapeMismatch(format!(
            "assignment dimension {} vs ordering dimension {}",
            d,
            ordering.d()
        )));
    }
    let before = ordering.bob_events_before_alice();
    let alice_exp_raw = if before == 0 {
        assign.alice_unconditioned_exp
    } else {
        assign.alice_conditioned_exps[before - 1]
    };

    let s = shift(d)?;
    let mut bob_op = UnitaryMatrix::identity(d);
    let mut bob_exp_raw = 0u64;
    for k in 1..d {
        let exp = if k <= before {
            assign.bob_unconditioned_exps[k - 1]
        } else {
            assign.bob_conditioned_exps[k - 1]
        };
        bob_exp_raw += exp;
        // event k fires after everything accumulated so far
        bob_op = &mat_pow(&s, exp as usize) * &bob_op;
    }

    let alice_op = mat_pow(&s, alice_exp_raw as usize);
    Ok(BranchComposition {
        ordering,
        alice_op,
        bob_op,
        alice_exp_raw,
        bob_exp_raw,
        alice_exp_mod_d: alice_exp_raw % d as u64,
        bob_exp_mod_d: bob_exp_raw % d as u64,
    })
}

/// Per-branch entry of the correspondence ledger.
#[derive(Debug, Clone, Serialize)]
pub struct BranchLedger {
    pub branch: usize,
    pub label: String,
    pub alice_signals: String,
    pub bob_signals: String,
    pub alice_op: String,
    pub bob_op: String,
    pub alice_exp_raw: u64,
    pub alice_exp_mod: u64,
    pub bob_exp_raw: u64,
    pub bob_exp_mod: u64,
    pub alice_matches: bool,
    pub bob_matches: bool,
    pub exponent_law_ok: bool,
}

impl BranchLedger {
    pub fn pass(&self) -> bool {
        self.alice_matches && self.bob_matches && self.exponent_law_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub d: usize,
    pub branches: Vec<BranchLedger>,
}

impl CorrespondenceReport {
    pub fn all_match(&self) -> bool {
        self.branches.iter().all(BranchLedger::pass)
    }
}

/// Certifies that every branch composition of the standard assignment equals
/// the canonical switch lists, entrywise exactly (both sides are integer
/// permutation matrices), and that the exponent bookkeeping obeys
///
///   raw Bob exponent = (d-1)(d-1-m) ≡ m+1 (mod d),  Alice exponent = m,
///
/// the latter in pure integer arithmetic, independent of the matrices.
/// Mismatches are reported per branch, not raised.
pub fn verify_correspondence(d: usize) -> Result<CorrespondenceReport> {
    let assign = standard_assignment(d)?;
    let canonical = crate::switch::canonical_config(d)?;
    let mut branches = Vec::with_capacity(d);
    for m in 0..d {
        let ordering = EventOrdering::new(d, m)?;
        let comp = compose_branch(&assign, ordering)?;
        let alice_matches = comp.alice_op.max_abs_diff(&canonical.u_ops()[m])? == 0.0;
        let bob_matches = comp.bob_op.max_abs_diff(&canonical.v_ops()[m])? == 0.0;
        let dm = d as u64;
        let mu = m as u64;
        let exponent_law_ok = comp.bob_exp_raw == (dm - 1) * (dm - 1 - mu)
            && comp.bob_exp_raw % dm == (mu + 1) % dm
            && comp.alice_exp_raw == mu;
        branches.push(BranchLedger {
            branch: m,
            label: ordering.label(),
            alice_signals: ordering.alice_signal_summary(),
            bob_signals: ordering.bob_signal_summary(),
            alice_op: ordering.alice_op_label(),
            bob_op: ordering.bob_op_label(),
            alice_exp_raw: comp.alice_exp_raw,
            alice_exp_mod: comp.alice_exp_mod_d,
            bob_exp_raw: comp.bob_exp_raw,
            bob_exp_mod: comp.bob_exp_mod_d,
            alice_matches,
            bob_matches,
            exponent_law_ok,
        });
    }
    Ok(CorrespondenceReport { d, branches })
}

/// A switch built from the branch compositions. Behaviorally identical to
/// `canonical_config(d)`.
pub fn gravitational_switch(d: usize) -> Result<SwitchConfig> {
    let assign = standard_assignment(d)?;
    let mut u_ops = Vec::with_capacity(d);
    let mut v_ops = Vec::with_capacity(d);
    for m in 0..d {
        let comp = compose_branch(&assign, EventOrdering::new(d, m)?)?;
        u_ops.push(comp.alice_op);
        v_ops.push(comp.bob_op);
    }
    SwitchConfig::new(u_ops, v_ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::apply_full;
    use crate::states::{bell_state, fourier_state, BellIndex, FourierIndex};
    use crate::switch::{apply_branchwise, build_dense, canonical_config, prepare_input};

    #[test]
    fn standard_assignment_d3() {
        let a = standard_assignment(3).unwrap();
        assert_eq!(a.alice_conditioned_exps, vec![1, 0]); // U_{A|B1}=shift, U_{A|B2}=I
        assert_eq!(a.alice_unconditioned_exp, 2);
        assert_eq!(a.bob_unconditioned_exps, vec![2, 2]);
        assert_eq!(a.bob_conditioned_exps, vec![0, 0]);
    }

    #[test]
    fn standard_assignment_d4() {
        let a = standard_assignment(4).unwrap();
        assert_eq!(a.alice_conditioned_exps, vec![2, 1, 0]);
        assert_eq!(a.alice_unconditioned_exp, 3);
        assert_eq!(a.bob_unconditioned_exps, vec![3, 3, 3]);
        assert_eq!(a.bob_conditioned_exps, vec![0, 0, 0]);
    }

    #[test]
    fn standard_assignment_d2() {
        let a = standard_assignment(2).unwrap();
        assert_eq!(a.alice_unconditioned_exp, 1);
        assert_eq!(a.bob_unconditioned_exps, vec![1]);
        assert_eq!(a.alice_conditioned_exps, vec![0]);
        assert_eq!(a.bob_conditioned_exps, vec![0]);
    }

    #[test]
    fn compose_branch_d3_first_branch() {
        // Bob: U_{B2} U_{B1} = shift^2 · shift^2 = shift^4 ≡ shift;
        // Alice: U_{A|B2} = I.
        let a = standard_assignment(3).unwrap();
        let comp = compose_branch(&a, EventOrdering::new(3, 0).unwrap()).unwrap();
        assert_eq!(comp.bob_exp_raw, 4);
        assert_eq!(comp.bob_exp_mod_d, 1);
        let s = shift(3).unwrap();
        let direct = &mat_pow(&s, 2) * &mat_pow(&s, 2);
        assert_eq!(comp.bob_op.max_abs_diff(&direct).unwrap(), 0.0);
        assert_eq!(comp.bob_op.max_abs_diff(&mat_pow(&s, 1)).unwrap(), 0.0);
        assert_eq!(comp.alice_exp_raw, 0);
        assert_eq!(
            comp.alice_op
                .max_abs_diff(&UnitaryMatrix::identity(3))
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn compose_branch_d4_second_branch() {
        // Bob: U_{B3|A} U_{B2} U_{B1} = shift^6 ≡ shift^2; Alice: U_{A|B2} = shift.
        let a = standard_assignment(4).unwrap();
        let comp = compose_branch(&a, EventOrdering::new(4, 1).unwrap()).unwrap();
        assert_eq!(comp.bob_exp_raw, 6);
        assert_eq!(comp.bob_exp_mod_d, 2);
        assert_eq!(comp.alice_exp_raw, 1);
        let s = shift(4).unwrap();
        assert_eq!(comp.bob_op.max_abs_diff(&mat_pow(&s, 2)).unwrap(), 0.0);
        assert_eq!(comp.alice_op.max_abs_diff(&s).unwrap(), 0.0);
    }

    #[test]
    fn compose_branch_d3_last_branch() {
        // Bob: U_{B2|A} U_{B1|A} = I; Alice: U_A = shift^2.
        let a = standard_assignment(3).unwrap();
        let comp = compose_branch(&a, EventOrdering::new(3, 2).unwrap()).unwrap();
        assert_eq!(comp.bob_exp_raw, 0);
        assert_eq!(
            comp.bob_op
                .max_abs_diff(&UnitaryMatrix::identity(3))
                .unwrap(),
            0.0
        );
        let s = shift(3).unwrap();
        assert_eq!(comp.alice_op.max_abs_diff(&mat_pow(&s, 2)).unwrap(), 0.0);
    }

    #[test]
    fn correspondence_small_dimensions() {
        for d in [3usize, 4, 11] {
            let report = verify_correspondence(d).unwrap();
            assert_eq!(report.branches.len(), d);
            assert!(report.all_match(), "d={d}");
        }
    }

    #[test]
    fn correspondence_is_exact_for_all_supported_dimensions() {
        for d in 2..=12 {
            let report = verify_correspondence(d).unwrap();
            for b in &report.branches {
                assert!(
                    b.alice_matches && b.bob_matches,
                    "d={d} branch {}",
                    b.branch
                );
            }
        }
    }

    #[test]
    fn exponent_law_pure_integers() {
        // no floating point anywhere in this loop
        for d in 2u64..=12 {
            for m in 0..d {
                let raw = (d - 1) * (d - 1 - m);
                assert_eq!(raw % d, (m + 1) % d, "d={d} m={m}");
            }
        }
    }

    #[test]
    fn ordering_sanity_at_the_extremes() {
        for d in 2..=8 {
            let first = EventOrdering::new(d, 0).unwrap();
            assert!(first.conditioned_bob_events().is_empty());
            let last = EventOrdering::new(d, d - 1).unwrap();
            assert_eq!(last.conditioned_bob_events().len(), d - 1);
            let a = standard_assignment(d).unwrap();
            let comp = compose_branch(&a, last).unwrap();
            assert_eq!(
                comp.bob_op
                    .max_abs_diff(&UnitaryMatrix::identity(d))
                    .unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn gravitational_switch_reproduces_listed_transitions() {
        // d=3: |F_0>|Ψ_{0,2}> -> |F_0>|Ψ_{0,0}>
        let cfg = gravitational_switch(3).unwrap();
        let out = apply_branchwise(&cfg, &prepare_input(BellIndex::new(3, 0, 2).unwrap())).unwrap();
        let expected = fourier_state(FourierIndex::new(3, 0).unwrap())
            .tensor(&bell_state(BellIndex::new(3, 0, 0).unwrap()));
        assert!(out.max_abs_diff(&expected).unwrap() <= 1e-12);

        // d=4: |H_0>|ψ_{3,3}> -> |H_1>|ψ_{3,0}>
        let cfg = gravitational_switch(4).unwrap();
        let out = apply_branchwise(&cfg, &prepare_input(BellIndex::new(4, 3, 3).unwrap())).unwrap();
        let expected = fourier_state(FourierIndex::new(4, 1).unwrap())
            .tensor(&bell_state(BellIndex::new(4, 3, 0).unwrap()));
        assert!(out.max_abs_diff(&expected).unwrap() <= 1e-12);
    }

    #[test]
    fn gravitational_switch_equals_canonical_entrywise() {
        let grav = gravitational_switch(6).unwrap();
        let canon = canonical_config(6).unwrap();
        for m in 0..6 {
            assert_eq!(
                grav.u_ops()[m].max_abs_diff(&canon.u_ops()[m]).unwrap(),
                0.0
            );
            assert_eq!(
                grav.v_ops()[m].max_abs_diff(&canon.v_ops()[m]).unwrap(),
                0.0
            );
        }
        // and as dense operators
        let a = build_dense(&grav).unwrap();
        let b = build_dense(&canon).unwrap();
        assert_eq!(a.max_abs_diff(&b).unwrap(), 0.0);
        let input = prepare_input(BellIndex::new(6, 2, 5).unwrap());
        let out = apply_full(&a, &input).unwrap();
        let expected = fourier_state(FourierIndex::new(6, 4).unwrap())
            .tensor(&bell_state(BellIndex::new(6, 2, 0).unwrap()));
        assert!(out.max_abs_diff(&expected).unwrap() <= 1e-12);
    }

    #[test]
    fn branch_composition_matches_its_reduced_exponent() {
        for d in 2..=8 {
            let s = shift(d).unwrap();
            let a = standard_assignment(d).unwrap();
            for m in 0..d {
                let comp = compose_branch(&a, EventOrdering::new(d, m).unwrap()).unwrap();
                assert_eq!(
                    comp.alice_op
                        .max_abs_diff(&mat_pow(&s, comp.alice_exp_mod_d as usize))
                        .unwrap(),
                    0.0
                );
                assert_eq!(
                    comp.bob_op
                        .max_abs_diff(&mat_pow(&s, comp.bob_exp_mod_d as usize))
                        .unwrap(),
                    0.0
                );
            }
        }
    }

    #[test]
    fn signal_ledger_matches_the_three_dimensional_table() {
        let rows: Vec<(String, String, String, String, String)> = (0..3)
            .map(|m| {
                let o = EventOrdering::new(3, m).unwrap();
                (
                    o.label(),
                    o.alice_signal_summary(),
                    o.bob_signal_summary(),
                    o.alice_op_label(),
                    o.bob_op_label(),
                )
            })
            .collect();
        assert_eq!(
            rows[0],
            (
                "B1→B2→A".into(),
                "receives b1, b2".into(),
                "no signal received".into(),
                "U_A|B2".into(),
                "U_B2·U_B1".into()
            )
        );
        assert_eq!(
            rows[1],
            (
                "B1→A→B2".into(),
                "receives b1".into(),
                "receives a before B2".into(),
                "U_A|B1".into(),
                "U_B2|A·U_B1".into()
            )
        );
        assert_eq!(
            rows[2],
            (
                "A→B1→B2".into(),
                "no signal received".into(),
                "receives a before B1, B2".into(),
                "U_A".into(),
                "U_B2|A·U_B1|A".into()
            )
        );
    }

    #[test]
    fn signal_ledger_matches_the_four_dimensional_table() {
        let expected_alice = [
            "receives b1, b2, b3",
            "receives b1, b2",
            "receives b1",
            "no signal received",
        ];
        let expected_bob = [
            "no signal received",
            "receives a before B3",
            "receives a before B2, B3",
            "receives a before B1, B2, B3",
        ];
        let expected_bob_ops = [
            "U_B3·U_B2·U_B1",
            "U_B3|A·U_B2·U_B1",
            "U_B3|A·U_B2|A·U_B1",
            "U_B3|A·U_B2|A·U_B1|A",
        ];
        for m in 0..4 {
            let o = EventOrdering::new(4, m).unwrap();
            assert_eq!(o.alice_signal_summary(), expected_alice[m]);
            assert_eq!(o.bob_signal_summary(), expected_bob[m]);
            assert_eq!(o.bob_op_label(), expected_bob_ops[m]);
        }
    }
}
