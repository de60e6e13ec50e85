//! Ideals as verified bitmap subsets, ideal generation and annihilators.

use super::derivation::Derivation;
use super::{Elem, FiniteRing, Structure};
use crate::set::ElemSet;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sidedness {
    Left,
    Right,
    TwoSided,
}

impl Sidedness {
    pub fn absorbs_left(self) -> bool {
        matches!(self, Sidedness::Left | Sidedness::TwoSided)
    }

    pub fn absorbs_right(self) -> bool {
        matches!(self, Sidedness::Right | Sidedness::TwoSided)
    }
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sidedness::Left => write!(f, "left"),
            Sidedness::Right => write!(f, "right"),
            Sidedness::TwoSided => write!(f, "two-sided"),
        }
    }
}

/// A witness where a claimed ideal fails closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealViolation {
    Empty,
    NotAdditivelyClosed { a: Elem, b: Elem },
    NotLeftAbsorbing { r: Elem, a: Elem },
    NotRightAbsorbing { a: Elem, r: Elem },
}

impl fmt::Display for IdealViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealViolation::Empty => write!(f, "ideal has no members"),
            IdealViolation::NotAdditivelyClosed { a, b } => {
                write!(f, "not closed under addition at ({a}, {b})")
            }
            IdealViolation::NotLeftAbsorbing { r, a } => {
                write!(f, "left absorption fails at r={r}, a={a}")
            }
            IdealViolation::NotRightAbsorbing { a, r } => {
                write!(f, "right absorption fails at a={a}, r={r}")
            }
        }
    }
}

/// A verified ideal of a finite ring.
///
/// A nonempty subset of a finite ring closed under addition automatically
/// contains zero and negatives, so construction checks only additive closure
/// and the absorption laws matching `sidedness`.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<FiniteRing>,
    members: ElemSet,
    sidedness: Sidedness,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({}, {})", self.sidedness, self.ring.display_set(&self.members))
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.sidedness == other.sidedness
    }
}
impl Eq for Ideal {}

impl Ideal {
    pub fn new(
        ring: Arc<FiniteRing>,
        members: ElemSet,
        sidedness: Sidedness,
    ) -> Result<Ideal, IdealViolation> {
        if let Some(violation) = closure_violation(&ring, &members, sidedness) {
            return Err(violation);
        }
        Ok(Ideal {
            ring,
            members,
            sidedness,
        })
    }

    pub fn zero(ring: Arc<FiniteRing>) -> Ideal {
        let members = ElemSet::singleton(ring.order(), ring.zero());
        Ideal {
            ring,
            members,
            sidedness: Sidedness::TwoSided,
        }
    }

    pub fn full(ring: Arc<FiniteRing>) -> Ideal {
        let members = ElemSet::full(ring.order());
        Ideal {
            ring,
            members,
            sidedness: Sidedness::TwoSided,
        }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.ring.order()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter()
    }

    /// The ideal viewed as a ring in its own right, with `embedding`
    /// mapping its element indices to parent elements in ascending order.
    pub fn as_ring(&self) -> SubringData {
        let embedding: Vec<Elem> = self.members.iter().collect();
        let m = embedding.len();
        let mut index_of = vec![usize::MAX; self.ring.order()];
        for (i, &e) in embedding.iter().enumerate() {
            index_of[e] = i;
        }
        let mut add = Vec::with_capacity(m * m);
        let mut mul = Vec::with_capacity(m * m);
        let mut neg = Vec::with_capacity(m);
        for &a in &embedding {
            for &b in &embedding {
                add.push(index_of[self.ring.add(a, b)]);
                mul.push(index_of[self.ring.mul(a, b)]);
            }
            neg.push(index_of[self.ring.neg(a)]);
        }
        let zero = index_of[self.ring.zero()];
        let mut ring = FiniteRing::from_raw(m, add, mul, neg, zero, None)
            .expect("closed subset yields well formed tables");
        // Identity may exist inside the subset even when the parent one does
        // not belong to it; detect by scan.
        let one = (0..m).find(|&e| {
            (0..m).all(|a| {
                let ea = embedding[a];
                let ee = embedding[e];
                self.ring.mul(ee, ea) == ea && self.ring.mul(ea, ee) == ea
            })
        });
        ring.set_one(one);
        ring.set_names(
            embedding
                .iter()
                .map(|&e| self.ring.elem_name(e).to_string())
                .collect(),
        );
        ring.set_structure(Structure::Opaque);
        SubringData {
            ring: Arc::new(ring),
            embedding,
        }
    }
}

/// A subset of a ring repackaged as a standalone ring.
#[derive(Clone)]
pub struct SubringData {
    pub ring: Arc<FiniteRing>,
    /// Subring element index to parent element.
    pub embedding: Vec<Elem>,
}

fn closure_violation(
    ring: &FiniteRing,
    members: &ElemSet,
    sidedness: Sidedness,
) -> Option<IdealViolation> {
    if members.is_empty() {
        return Some(IdealViolation::Empty);
    }
    for a in members.iter() {
        for b in members.iter() {
            if !members.contains(ring.add(a, b)) {
                return Some(IdealViolation::NotAdditivelyClosed { a, b });
            }
        }
    }
    for a in members.iter() {
        for r in ring.elements() {
            if sidedness.absorbs_left() && !members.contains(ring.mul(r, a)) {
                return Some(IdealViolation::NotLeftAbsorbing { r, a });
            }
            if sidedness.absorbs_right() && !members.contains(ring.mul(a, r)) {
                return Some(IdealViolation::NotRightAbsorbing { a, r });
            }
        }
    }
    None
}

/// Smallest ideal of the requested sidedness containing `gens`.
///
/// Works in nonunital rings too: the closure explicitly includes additive
/// multiples, so the result always contains the generators themselves.
pub fn ideal_generated(
    ring: &Arc<FiniteRing>,
    gens: &[Elem],
    sidedness: Sidedness,
) -> Ideal {
    let n = ring.order();
    let mut members = ElemSet::empty(n);
    members.insert(ring.zero());
    let mut queue: Vec<Elem> = Vec::new();
    for &g in gens {
        if members.insert(g) {
            queue.push(g);
        }
    }
    while let Some(x) = queue.pop() {
        let push = |e: Elem, members: &mut ElemSet, queue: &mut Vec<Elem>| {
            if members.insert(e) {
                queue.push(e);
            }
        };
        push(ring.neg(x), &mut members, &mut queue);
        let snapshot: Vec<Elem> = members.iter().collect();
        for y in snapshot {
            push(ring.add(x, y), &mut members, &mut queue);
        }
        for r in ring.elements() {
            if sidedness.absorbs_left() {
                push(ring.mul(r, x), &mut members, &mut queue);
            }
            if sidedness.absorbs_right() {
                push(ring.mul(x, r), &mut members, &mut queue);
            }
        }
    }
    Ideal {
        ring: Arc::clone(ring),
        members,
        sidedness,
    }
}

/// Whether `delta` maps the ideal into itself.
pub fn is_delta_ideal(ideal: &Ideal, delta: &Derivation) -> bool {
    delta_ideal_witness(ideal, delta).is_none()
}

/// First member whose image escapes the ideal, if any.
pub fn delta_ideal_witness(ideal: &Ideal, delta: &Derivation) -> Option<Elem> {
    ideal.iter().find(|&a| !ideal.contains(delta.apply(a)))
}

/// Whether `ab = 0` forces `a delta(b) = 0` across the whole ring.
pub fn is_delta_compatible(delta: &Derivation) -> bool {
    delta_compat_witness(delta).is_none()
}

/// First pair with `ab = 0` but `a delta(b) != 0`, if any.
pub fn delta_compat_witness(delta: &Derivation) -> Option<(Elem, Elem)> {
    let ring = delta.ring();
    let zero = ring.zero();
    for a in ring.elements() {
        for b in ring.elements() {
            if ring.mul(a, b) == zero && ring.mul(a, delta.apply(b)) != zero {
                return Some((a, b));
            }
        }
    }
    None
}

/// Left annihilator of a subset: all `a` with `a x = 0` for every `x` in it.
pub fn left_annihilator(ring: &Arc<FiniteRing>, set: &ElemSet) -> ElemSet {
    let zero = ring.zero();
    let mut out = ElemSet::empty(ring.order());
    for a in ring.elements() {
        if set.iter().all(|x| ring.mul(a, x) == zero) {
            out.insert(a);
        }
    }
    out
}

/// Every ideal of the ring, as the join closure of the principal ideals.
///
/// Each ideal is the sum of the principal ideals of its members, so closing
/// the principal ideals under pairwise sums yields all of them.
pub fn all_ideals(ring: &Arc<FiniteRing>, sidedness: Sidedness) -> Vec<Ideal> {
    let mut sets: Vec<ElemSet> = vec![ElemSet::singleton(ring.order(), ring.zero())];
    for e in ring.elements() {
        let p = ideal_generated(ring, &[e], sidedness);
        if !sets.contains(p.members()) {
            sets.push(p.members().clone());
        }
    }
    // Sum of two ideals is their elementwise sum set, already an ideal.
    let mut i = 0;
    while i < sets.len() {
        let mut j = 0;
        while j <= i {
            let mut sum = ElemSet::empty(ring.order());
            for a in sets[i].iter() {
                for b in sets[j].iter() {
                    sum.insert(ring.add(a, b));
                }
            }
            if !sets.contains(&sum) {
                sets.push(sum);
            }
            j += 1;
        }
        i += 1;
    }
    sets.sort();
    sets.into_iter()
        .map(|members| Ideal {
            ring: Arc::clone(ring),
            members,
            sidedness,
        })
        .collect()
}
