//! Left T-nilpotency, annihilator towers, and the radical sets built on
//! them.
//!
//! Everything here is decided by enumeration over tabulated rings. The
//! T-nilpotency test walks the graph of nonzero prefix products: a set is
//! left T-nilpotent exactly when no cycle is reachable, and a reachable
//! cycle yields a concrete sequence whose prefix products never vanish.

use crate::ring::{
    ideal_generated, quotient_ring, Derivation, Elem, FiniteRing, Ideal, IdealViolation,
    Sidedness,
};
use crate::set::ElemSet;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// A sequence from the tested set whose prefix products cycle instead of
/// dying: generators[0..m] with products[i] = generators[0] * ... *
/// generators[i], all nonzero, and products[m-1] == products[repeat_at].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    pub generators: Vec<Elem>,
    pub products: Vec<Elem>,
    pub repeat_at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TNilpVerdict {
    /// Every product of `bound` factors from the set is zero.
    TNilpotent { bound: usize },
    NotTNilpotent(CycleWitness),
}

impl TNilpVerdict {
    pub fn is_t_nilpotent(&self) -> bool {
        matches!(self, TNilpVerdict::TNilpotent { .. })
    }

    pub fn witness(&self) -> Option<&CycleWitness> {
        match self {
            TNilpVerdict::NotTNilpotent(w) => Some(w),
            TNilpVerdict::TNilpotent { .. } => None,
        }
    }
}

/// Decides left T-nilpotency of a subset: must every sequence s1, s2, ...
/// from `set` have some prefix product s1 s2 ... sk = 0?
///
/// Prefix products that stay nonzero form a finitely branching graph on
/// ring elements (v steps to v*s), so the answer is "no" exactly when a
/// cycle is reachable from some starting element of the set. With no cycle,
/// the longest path bounds how long any product can stay nonzero.
pub fn is_left_t_nilpotent(ring: &FiniteRing, set: &ElemSet) -> TNilpVerdict {
    let zero = ring.zero();
    let elems: Vec<Elem> = set.iter().filter(|&s| s != zero).collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let n = ring.order();
    let mut color = vec![Color::White; n];
    // How each discovered node was first reached: (predecessor, generator).
    let mut pred: Vec<Option<(Elem, Elem)>> = vec![None; n];
    let mut finish_order: Vec<Elem> = Vec::new();

    for &start in &elems {
        if color[start] != Color::White {
            continue;
        }
        // Frame: node plus index into `elems` for the next edge to try.
        let mut stack: Vec<(Elem, usize)> = vec![(start, 0)];
        color[start] = Color::Gray;
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < elems.len() {
                let s = elems[*idx];
                *idx += 1;
                let w = ring.mul(v, s);
                if w == zero {
                    continue;
                }
                match color[w] {
                    Color::White => {
                        color[w] = Color::Gray;
                        pred[w] = Some((v, s));
                        stack.push((w, 0));
                    }
                    Color::Gray => {
                        // Cycle: walk pred links from v back to the start,
                        // then append the closing edge into w.
                        let mut rev_products = vec![v];
                        let mut rev_gens = Vec::new();
                        let mut cur = v;
                        while let Some((p, g)) = pred[cur] {
                            rev_gens.push(g);
                            rev_products.push(p);
                            cur = p;
                        }
                        // cur is a start node: its first product is itself.
                        rev_gens.push(cur);
                        let mut generators: Vec<Elem> = rev_gens.into_iter().rev().collect();
                        let mut products: Vec<Elem> = rev_products.into_iter().rev().collect();
                        generators.push(s);
                        products.push(w);
                        let repeat_at = products
                            .iter()
                            .position(|&p| p == w)
                            .expect("w occurs at least at the end");
                        debug_assert!(repeat_at + 1 < products.len());
                        return TNilpVerdict::NotTNilpotent(CycleWitness {
                            generators,
                            products,
                            repeat_at,
                        });
                    }
                    Color::Black => {}
                }
            } else {
                color[v] = Color::Black;
                finish_order.push(v);
                stack.pop();
            }
        }
    }

    // No cycle: longest[v] = most nodes on a path starting at v. Children
    // finish before parents, so ascending finish order is bottom-up.
    let mut longest: HashMap<Elem, usize> = HashMap::new();
    for &v in &finish_order {
        let mut best = 1;
        for &s in &elems {
            let w = ring.mul(v, s);
            if w != zero {
                best = best.max(1 + longest[&w]);
            }
        }
        longest.insert(v, best);
    }
    let max_path = elems.iter().map(|s| longest[s]).max().unwrap_or(0);
    TNilpVerdict::TNilpotent {
        bound: max_path + 1,
    }
}

/// The tower 0 = I(0) <= I(1) <= ... with I(k+1) = everything whose right
/// multiples land in I(k), taken inside the ring `n_ring` itself.
#[derive(Clone, Debug)]
pub struct AnnihilatorSeries {
    /// Stages from I(0) = {0} up to and including the stable stage.
    pub stages: Vec<ElemSet>,
    /// Whether the stable stage is all of the ring.
    pub reached_top: bool,
    /// First k with I(k) = I(k+1).
    pub stabilization_step: usize,
    /// Per-stage delta-stability, when a derivation was supplied.
    pub delta_stable: Option<Vec<bool>>,
}

/// Upper left annihilator series of `n_ring` (an ideal repackaged as a
/// ring, or any finite ring). Stabilizes after at most |N| proper steps.
pub fn upper_left_annihilator_series(
    n_ring: &FiniteRing,
    delta: Option<&Derivation>,
) -> AnnihilatorSeries {
    let n = n_ring.order();
    let zero = n_ring.zero();
    let mut stages = vec![ElemSet::singleton(n, zero)];
    loop {
        let last = stages.last().unwrap();
        let mut next = ElemSet::empty(n);
        for a in n_ring.elements() {
            if (0..n).all(|b| last.contains(n_ring.mul(a, b))) {
                next.insert(a);
            }
        }
        if &next == last {
            break;
        }
        stages.push(next);
    }
    let reached_top = stages.last().unwrap().len() == n;
    let stabilization_step = stages.len() - 1;
    let delta_stable = delta.map(|d| {
        stages
            .iter()
            .map(|stage| stage.iter().all(|a| stage.contains(d.apply(a))))
            .collect()
    });
    AnnihilatorSeries {
        stages,
        reached_top,
        stabilization_step,
        delta_stable,
    }
}

/// Both characterizations of left T-nilpotency side by side: the prefix
/// product graph and the annihilator tower reaching the top.
#[derive(Clone, Debug)]
pub struct LevitzkiOutcome {
    pub verdict: TNilpVerdict,
    pub series: AnnihilatorSeries,
    pub agree: bool,
}

pub fn levitzki_equivalence(n_ring: &FiniteRing, delta: Option<&Derivation>) -> LevitzkiOutcome {
    let verdict = is_left_t_nilpotent(n_ring, &ElemSet::full(n_ring.order()));
    let series = upper_left_annihilator_series(n_ring, delta);
    let agree = verdict.is_t_nilpotent() == series.reached_top;
    LevitzkiOutcome {
        verdict,
        series,
        agree,
    }
}

#[derive(Debug, Error)]
pub enum RadidealError {
    #[error("computed member set is not an ideal: {0}")]
    NotAnIdeal(IdealViolation),
    #[error("computed member set is not left T-nilpotent as a whole")]
    NotTNilpotentAsSet,
}

/// The left T-nilpotent radideal: all a whose principal two-sided ideal is
/// left T-nilpotent. Summing these element sweeps is sound because a sum of
/// left T-nilpotent ideals is left T-nilpotent; the result is re-verified
/// to be a two-sided ideal and left T-nilpotent as a set before returning.
pub fn radideal_il(ring: &Arc<FiniteRing>) -> Result<Ideal, RadidealError> {
    let mut members = ElemSet::empty(ring.order());
    for a in ring.elements() {
        let principal = ideal_generated(ring, &[a], Sidedness::TwoSided);
        if is_left_t_nilpotent(ring, principal.members()).is_t_nilpotent() {
            members.insert(a);
        }
    }
    if !is_left_t_nilpotent(ring, &members).is_t_nilpotent() {
        return Err(RadidealError::NotTNilpotentAsSet);
    }
    Ideal::new(Arc::clone(ring), members, Sidedness::TwoSided).map_err(RadidealError::NotAnIdeal)
}

/// The set of single-term products delta^j(a) r together with the data to
/// rebuild each one, and the T-nilpotency verdict for it.
///
/// The defining object is the right ideal summing all delta^j(a)R. Over a
/// finite ring that sum is left T-nilpotent exactly when the plain union
/// is: T-nilpotency here is equivalent to a uniform vanishing length L,
/// and every length-L product of sums expands into length-L products of
/// single terms. Testing the union keeps witnesses decomposable.
///
/// In a nonunital ring the bare orbit values delta^j(a) are included
/// alongside the products, since they need not arise as delta^j(a)r.
#[derive(Clone, Debug)]
pub struct OrbitSetAnalysis {
    pub union_set: ElemSet,
    /// decomp[e] = (j, r) with delta^j(a) * r = e for e in the union set;
    /// r = None marks a bare orbit value delta^j(a) itself.
    pub decomp: Vec<Option<(u32, Option<Elem>)>>,
    pub verdict: TNilpVerdict,
}

pub fn delta_orbit_set(ring: &FiniteRing, delta: &Derivation, a: Elem) -> OrbitSetAnalysis {
    let n = ring.order();
    let mut union_set = ElemSet::empty(n);
    let mut decomp: Vec<Option<(u32, Option<Elem>)>> = vec![None; n];
    // Distinct orbit values delta^j(a); a zero or repeated value adds
    // nothing new to the union.
    let mut j = 0u32;
    let mut seen = vec![false; n];
    let mut cur = a;
    while cur != ring.zero() && !seen[cur] {
        seen[cur] = true;
        if ring.one().is_none() && union_set.insert(cur) {
            decomp[cur] = Some((j, None));
        }
        for r in ring.elements() {
            let e = ring.mul(cur, r);
            if union_set.insert(e) {
                decomp[e] = Some((j, Some(r)));
            }
        }
        cur = delta.apply(cur);
        j += 1;
    }
    union_set.insert(ring.zero());
    let verdict = is_left_t_nilpotent(ring, &union_set);
    OrbitSetAnalysis {
        union_set,
        decomp,
        verdict,
    }
}

/// The delta-sensitive radideal: membership requires the whole delta orbit
/// of the element to generate a left T-nilpotent right ideal.
///
/// Unlike [`radideal_il`] this returns the raw member set along with
/// measured structure: whether it is an ideal and whether it is
/// delta-stable are empirical findings here, not assumptions.
#[derive(Clone, Debug)]
pub struct DeltaRadideal {
    pub members: ElemSet,
    pub is_ideal: bool,
    pub is_delta_stable: bool,
}

pub fn radideal_il_delta(ring: &Arc<FiniteRing>, delta: &Derivation) -> DeltaRadideal {
    let mut members = ElemSet::empty(ring.order());
    for a in ring.elements() {
        if delta_orbit_set(ring, delta, a).verdict.is_t_nilpotent() {
            members.insert(a);
        }
    }
    let is_ideal = Ideal::new(Arc::clone(ring), members.clone(), Sidedness::TwoSided).is_ok();
    let is_delta_stable = members.iter().all(|a| members.contains(delta.apply(a)));
    DeltaRadideal {
        members,
        is_ideal,
        is_delta_stable,
    }
}

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("stage {stage} member set is not a two-sided ideal")]
    NotAnIdeal { stage: usize },
    #[error("stage {stage} is not delta-stable at element {witness}, cannot form the next quotient")]
    NotDeltaStable { stage: usize, witness: Elem },
}

/// The ascending chain I(1) <= I(2) <= ... where each I(k+1) pulls back
/// the delta radideal of R / I(k).
#[derive(Clone, Debug)]
pub struct RadidealChain {
    /// Stages in parent-ring indexing, starting with I(1).
    pub stages: Vec<ElemSet>,
    /// First k (1-based) with I(k) = I(k+1).
    pub stabilization_step: usize,
    pub limit: ElemSet,
}

pub fn higher_radideals(
    ring: &Arc<FiniteRing>,
    delta: Option<&Derivation>,
) -> Result<RadidealChain, ChainError> {
    let n = ring.order();
    let mut stages: Vec<ElemSet> = Vec::new();
    // Current quotient, its projection from the parent, and its derivation.
    let mut q_ring = Arc::clone(ring);
    let mut q_delta = delta.cloned();
    let mut proj: Vec<Elem> = (0..n).collect();

    loop {
        let stage_no = stages.len() + 1;
        let members = match &q_delta {
            Some(d) => radideal_il_delta(&q_ring, d).members,
            None => radideal_il(&q_ring)
                .map_err(|_| ChainError::NotAnIdeal { stage: stage_no })?
                .members()
                .clone(),
        };
        let pulled = ElemSet::from_elems(n, (0..n).filter(|&e| members.contains(proj[e])));
        if let Some(prev) = stages.last() {
            if prev == &pulled {
                break;
            }
        } else if pulled.len() == 1 {
            // I(1) = 0: the chain can never grow.
            stages.push(pulled);
            break;
        }
        stages.push(pulled);
        if stages.len() > n {
            unreachable!("strictly ascending chain exceeded ring order");
        }

        // Build the next quotient.
        let ideal = Ideal::new(Arc::clone(&q_ring), members, Sidedness::TwoSided)
            .map_err(|_| ChainError::NotAnIdeal { stage: stage_no })?;
        let data = quotient_ring(&ideal, q_delta.as_ref()).map_err(|e| match e {
            crate::ring::QuotientError::NotDeltaIdeal { witness } => ChainError::NotDeltaStable {
                stage: stage_no,
                witness,
            },
            crate::ring::QuotientError::NotTwoSided { .. } => {
                ChainError::NotAnIdeal { stage: stage_no }
            }
        })?;
        proj = (0..n).map(|e| data.projection[proj[e]]).collect();
        q_delta = q_delta.as_ref().map(|_| data.induced.expect("delta-stable quotient"));
        q_ring = data.quotient;
    }

    let stabilization_step = stages.len();
    let limit = stages.last().unwrap().clone();
    Ok(RadidealChain {
        stages,
        stabilization_step,
        limit,
    })
}

/// Least k with (additive span of k-fold products) = 0, or None when the
/// descending power chain stabilizes above zero.
pub fn nilpotency_index(ideal: &Ideal) -> Option<u32> {
    let ring = ideal.ring();
    let zero = ring.zero();
    let mut power = subgroup_closure(ring, ideal.members());
    let mut k = 1;
    loop {
        if power.len() == 1 && power.contains(zero) {
            return Some(k);
        }
        let mut products = ElemSet::empty(ring.order());
        for a in ideal.iter() {
            for b in power.iter() {
                products.insert(ring.mul(a, b));
            }
        }
        let next = subgroup_closure(ring, &products);
        // Powers of an ideal only shrink, so repetition means a nonzero
        // stable stage.
        if next == power {
            return None;
        }
        power = next;
        k += 1;
    }
}

/// Prime radical as the sum of all nilpotent ideals: over a finite ring
/// this is the set of elements whose principal two-sided ideal is
/// nilpotent. Verified to be an ideal before returning.
pub fn prime_radical(ring: &Arc<FiniteRing>) -> Result<Ideal, RadidealError> {
    let mut members = ElemSet::empty(ring.order());
    for a in ring.elements() {
        let principal = ideal_generated(ring, &[a], Sidedness::TwoSided);
        if nilpotency_index(&principal).is_some() {
            members.insert(a);
        }
    }
    Ideal::new(Arc::clone(ring), members, Sidedness::TwoSided).map_err(RadidealError::NotAnIdeal)
}

/// All prime two-sided ideals, by the ideal-pair definition: P is prime
/// when AB <= P forces A <= P or B <= P. Exhaustive over all ideals, so
/// only sensible on small rings; used to cross-check [`prime_radical`].
pub fn all_prime_ideals(ring: &Arc<FiniteRing>) -> Vec<Ideal> {
    let ideals = crate::ring::all_ideals(ring, Sidedness::TwoSided);
    let product_in = |a: &Ideal, b: &Ideal, p: &Ideal| {
        a.iter().all(|x| b.iter().all(|y| p.contains(ring.mul(x, y))))
    };
    ideals
        .iter()
        .filter(|p| {
            if p.is_full() {
                return false;
            }
            ideals.iter().all(|a| {
                ideals.iter().all(|b| {
                    !product_in(a, b, p) || a.members().is_subset(p.members())
                        || b.members().is_subset(p.members())
                })
            })
        })
        .cloned()
        .collect()
}

/// Additive subgroup generated by a set.
fn subgroup_closure(ring: &FiniteRing, set: &ElemSet) -> ElemSet {
    let mut out = ElemSet::empty(ring.order());
    out.insert(ring.zero());
    let mut queue: Vec<Elem> = Vec::new();
    for e in set.iter() {
        if out.insert(e) {
            queue.push(e);
        }
    }
    while let Some(x) = queue.pop() {
        let snapshot: Vec<Elem> = out.iter().collect();
        for y in snapshot {
            let s = ring.add(x, y);
            if out.insert(s) {
                queue.push(s);
            }
        }
        let n = ring.neg(x);
        if out.insert(n) {
            queue.push(n);
        }
    }
    out
}
