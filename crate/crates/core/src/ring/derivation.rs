//! Table-backed derivations with precomputed orbit data.

use super::{Elem, FiniteRing, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Pair checks are O(n^2); beyond this order we sample instead.
const EXHAUSTIVE_PAIR_LIMIT: usize = 2048;
const SAMPLED_PAIRS: usize = 20_000;

#[derive(Debug, Error)]
pub enum DerivationError {
    #[error("derivation table has {got} entries, ring has order {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("derivation table entry {value} is outside ring of order {order}")]
    IndexRange { value: usize, order: usize },
    #[error("element {value} is outside ring of order {order}")]
    ElementRange { value: usize, order: usize },
    #[error("partial derivative requires a truncated polynomial ring")]
    NotTruncatedPoly,
    #[error("generator index {index} out of range, ring has {count} generators")]
    GeneratorIndex { index: usize, count: usize },
    #[error("d/d{generator} does not descend: {exponent} is not divisible by {modulus}")]
    DoesNotDescend {
        generator: String,
        exponent: usize,
        modulus: usize,
    },
}

/// A witness pair where a derivation axiom fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationViolation {
    /// d(a+b) != d(a) + d(b)
    NotAdditive { a: Elem, b: Elem },
    /// d(ab) != d(a)b + a d(b)
    NotLeibniz { a: Elem, b: Elem },
}

impl fmt::Display for DerivationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationViolation::NotAdditive { a, b } => {
                write!(f, "additivity fails at ({a}, {b})")
            }
            DerivationViolation::NotLeibniz { a, b } => {
                write!(f, "Leibniz rule fails at ({a}, {b})")
            }
        }
    }
}

/// An additive map delta on a finite ring, stored as a full value table.
///
/// `death[a]` is the least `t` with `delta^t(a) = 0`, or `None` when the
/// orbit of `a` cycles without reaching zero.
#[derive(Clone)]
pub struct Derivation {
    ring: Arc<FiniteRing>,
    table: Vec<u32>,
    death: Vec<Option<u32>>,
    label: String,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation({}, order {})", self.label, self.ring.order())
    }
}

impl Derivation {
    pub fn from_table(
        ring: Arc<FiniteRing>,
        table: Vec<u32>,
    ) -> Result<Derivation, DerivationError> {
        let n = ring.order();
        if table.len() != n {
            return Err(DerivationError::TableSize {
                got: table.len(),
                expected: n,
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= n) {
            return Err(DerivationError::IndexRange {
                value: bad as usize,
                order: n,
            });
        }
        let death = compute_deaths(&table, ring.zero());
        Ok(Derivation {
            ring,
            table,
            death,
            label: "table".to_string(),
        })
    }

    /// The zero map.
    pub fn zero(ring: Arc<FiniteRing>) -> Derivation {
        let n = ring.order();
        let zero = ring.zero();
        let table = vec![zero as u32; n];
        let death = compute_deaths(&table, zero);
        Derivation {
            ring,
            table,
            death,
            label: "0".to_string(),
        }
    }

    /// The inner derivation a -> ca - ac.
    pub fn inner(ring: Arc<FiniteRing>, c: Elem) -> Result<Derivation, DerivationError> {
        let n = ring.order();
        if c >= n {
            return Err(DerivationError::ElementRange { value: c, order: n });
        }
        let table: Vec<u32> = (0..n)
            .map(|a| ring.sub(ring.mul(c, a), ring.mul(a, c)) as u32)
            .collect();
        let death = compute_deaths(&table, ring.zero());
        let label = format!("inner({})", ring.elem_name(c));
        Ok(Derivation {
            ring,
            table,
            death,
            label,
        })
    }

    /// d/da_g on a truncated polynomial ring.
    ///
    /// Descends to the quotient only when the modulus divides the truncation
    /// exponent of the chosen generator, since d(a^e) = e a^{e-1}.
    pub fn partial(ring: Arc<FiniteRing>, generator: usize) -> Result<Derivation, DerivationError> {
        let Structure::TruncPoly(meta) = ring.structure() else {
            return Err(DerivationError::NotTruncatedPoly);
        };
        let meta = meta.clone();
        if generator >= meta.exponents.len() {
            return Err(DerivationError::GeneratorIndex {
                index: generator,
                count: meta.exponents.len(),
            });
        }
        let e_g = meta.exponents[generator];
        if e_g % meta.modulus != 0 {
            return Err(DerivationError::DoesNotDescend {
                generator: meta.generator_name(generator),
                exponent: e_g,
                modulus: meta.modulus,
            });
        }
        let m = meta.modulus;
        let table: Vec<u32> = (0..ring.order())
            .map(|e| {
                let coeffs = meta.decode(e);
                let mut out = vec![0usize; meta.dim];
                for (mono, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut exps = meta.monomial_exponents(mono);
                    if exps[generator] == 0 {
                        continue;
                    }
                    let factor = exps[generator];
                    exps[generator] -= 1;
                    let target = meta
                        .monomial_index(&exps)
                        .expect("lowering an exponent stays in range");
                    out[target] = (out[target] + c * factor) % m;
                }
                meta.encode(&out) as u32
            })
            .collect();
        let death = compute_deaths(&table, ring.zero());
        let label = format!("d/d{}", meta.generator_name(generator));
        Ok(Derivation {
            ring,
            table,
            death,
            label,
        })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a] as Elem
    }

    /// delta^t(a); uses the death table to short-circuit into zero.
    pub fn apply_pow(&self, a: Elem, t: u64) -> Elem {
        if let Some(d) = self.death[a] {
            if t >= u64::from(d) {
                return self.ring.zero();
            }
        }
        let mut cur = a;
        for _ in 0..t {
            cur = self.table[cur] as Elem;
        }
        cur
    }

    /// Least t with delta^t(a) = 0, or None when the orbit never dies.
    #[inline]
    pub fn death(&self, a: Elem) -> Option<u32> {
        self.death[a]
    }

    /// Distinct nonzero values delta^j(a), j >= 0, in first-appearance order.
    /// Stops on reaching zero or revisiting a value.
    pub fn orbit(&self, a: Elem) -> Vec<Elem> {
        let zero = self.ring.zero();
        let mut seen = vec![false; self.ring.order()];
        let mut out = Vec::new();
        let mut cur = a;
        while cur != zero && !seen[cur] {
            seen[cur] = true;
            out.push(cur);
            cur = self.table[cur] as Elem;
        }
        out
    }

    /// Checks additivity and the Leibniz rule, exhaustively on small rings
    /// and by sampling beyond `EXHAUSTIVE_PAIR_LIMIT`.
    pub fn validate(&self) -> Vec<DerivationViolation> {
        let n = self.ring.order();
        let mut violations = Vec::new();
        let check = |a: Elem, b: Elem, violations: &mut Vec<DerivationViolation>| {
            let r = &self.ring;
            if self.apply(r.add(a, b)) != r.add(self.apply(a), self.apply(b)) {
                violations.push(DerivationViolation::NotAdditive { a, b });
            }
            let lhs = self.apply(r.mul(a, b));
            let rhs = r.add(r.mul(self.apply(a), b), r.mul(a, self.apply(b)));
            if lhs != rhs {
                violations.push(DerivationViolation::NotLeibniz { a, b });
            }
        };
        if n <= EXHAUSTIVE_PAIR_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    check(a, b, &mut violations);
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_PAIRS {
                check(rng.gen_range(0..n), rng.gen_range(0..n), &mut violations);
            }
        }
        violations
    }

    /// Restriction to a subring presented by `embedding` (subring index to
    /// parent element), if the image set is closed under the derivation.
    ///
    /// `sub_ring` must be the induced ring on that image with matching
    /// indexing; in particular its zero embeds to the parent zero.
    pub fn restrict_to(
        &self,
        sub_ring: Arc<FiniteRing>,
        embedding: &[Elem],
    ) -> Option<Derivation> {
        debug_assert_eq!(sub_ring.order(), embedding.len());
        debug_assert_eq!(embedding[sub_ring.zero()], self.ring.zero());
        let mut index_of = vec![None; self.ring.order()];
        for (i, &e) in embedding.iter().enumerate() {
            index_of[e] = Some(i);
        }
        let mut table = Vec::with_capacity(embedding.len());
        for &e in embedding {
            table.push(index_of[self.apply(e)]? as u32);
        }
        let death = compute_deaths(&table, sub_ring.zero());
        let label = format!("{}|sub", self.label);
        Some(Derivation {
            ring: sub_ring,
            table,
            death,
            label,
        })
    }

    /// Raw table access for maps built on top of this one.
    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

/// Resolves the functional graph `table` into least-power-of-zero data.
fn compute_deaths(table: &[u32], zero: Elem) -> Vec<Option<u32>> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Unknown,
        Done,
    }
    let n = table.len();
    let mut death: Vec<Option<u32>> = vec![None; n];
    let mut state = vec![State::Unknown; n];
    if n == 0 {
        return death;
    }
    death[zero] = Some(0);
    state[zero] = State::Done;

    let mut on_path = vec![false; n];
    for start in 0..n {
        if state[start] == State::Done {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while state[cur] == State::Unknown && !on_path[cur] {
            on_path[cur] = true;
            path.push(cur);
            cur = table[cur] as usize;
        }
        let terminal = if on_path[cur] {
            // Walk closed a cycle not containing zero: nothing on it dies.
            None
        } else {
            death[cur]
        };
        for (i, &node) in path.iter().enumerate() {
            on_path[node] = false;
            state[node] = State::Done;
            death[node] = terminal.map(|d| d + (path.len() - i) as u32);
        }
    }
    death
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_triangular_matrix_ring, make_truncated_poly, make_zn, DEFAULT_MAX_ORDER};

    #[test]
    fn partial_on_dual_numbers() {
        let r = make_truncated_poly(2, &[2], DEFAULT_MAX_ORDER).unwrap();
        let d = Derivation::partial(Arc::clone(&r), 0).unwrap();
        assert!(d.validate().is_empty());
        let a = r.lookup_symbol("a").unwrap();
        assert_eq!(d.apply(a), r.one().unwrap());
        assert_eq!(d.apply(r.one().unwrap()), r.zero());
        assert_eq!(d.death(a), Some(2));
        assert_eq!(d.death(r.zero()), Some(0));
        assert_eq!(d.orbit(a), vec![a, r.one().unwrap()]);
    }

    #[test]
    fn partial_requires_divisible_exponent() {
        // d/da on Z2[a]/(a^3) would send a^3 = 0 to 3a^2 = a^2 != 0.
        let r = make_truncated_poly(2, &[3], DEFAULT_MAX_ORDER).unwrap();
        let err = Derivation::partial(r, 0).unwrap_err();
        assert!(matches!(err, DerivationError::DoesNotDescend { .. }));
    }

    #[test]
    fn scaling_map_on_z3_dual_is_a_derivation() {
        // On Z3[a]/(a^2), d(c0 + c1 a) = c1 a is additive and Leibniz, and
        // the orbit of a never reaches zero.
        let r = make_truncated_poly(3, &[2], DEFAULT_MAX_ORDER).unwrap();
        let a = r.lookup_symbol("a").unwrap();
        // Element encoding is index = c0 + 3*c1, so dropping the constant
        // part is e - (e mod 3).
        let table: Vec<u32> = (0..r.order()).map(|e| (e - e % 3) as u32).collect();
        let d = Derivation::from_table(Arc::clone(&r), table).unwrap();
        assert!(d.validate().is_empty());
        assert_eq!(d.apply(a), a);
        assert_eq!(d.death(a), None);
        assert_eq!(d.orbit(a), vec![a]);
    }

    #[test]
    fn inner_derivation_on_triangular_ring() {
        let r = make_triangular_matrix_ring(2, 2, DEFAULT_MAX_ORDER).unwrap();
        let e11 = r.lookup_symbol("e11").unwrap();
        let e12 = r.lookup_symbol("e12").unwrap();
        let e22 = r.lookup_symbol("e22").unwrap();
        let d = Derivation::inner(Arc::clone(&r), e12).unwrap();
        assert!(d.validate().is_empty());
        // e12*e11 = 0 and e11*e12 = e12, so d(e11) = -e12 = e12 over Z2.
        assert_eq!(d.apply(e11), e12);
        assert_eq!(d.apply(e22), e12);
        assert_eq!(d.apply(e12), r.zero());
        assert_eq!(d.death(e11), Some(2));
    }

    #[test]
    fn broken_table_is_caught() {
        let r = make_zn(4, DEFAULT_MAX_ORDER).unwrap();
        // x -> x is additive but violates Leibniz on Z4.
        let table: Vec<u32> = (0..4).collect();
        let d = Derivation::from_table(r, table).unwrap();
        let violations = d.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, DerivationViolation::NotLeibniz { .. })));
    }

    #[test]
    fn zero_derivation_is_valid_everywhere() {
        let r = make_zn(6, DEFAULT_MAX_ORDER).unwrap();
        let d = Derivation::zero(r);
        assert!(d.validate().is_empty());
        assert_eq!(d.death(3), Some(1));
        assert_eq!(d.apply_pow(5, 7), 0);
    }
}
