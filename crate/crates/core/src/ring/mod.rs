//! Finite coefficient rings given by operation tables.
//!
//! Every ring here is finite and fully tabulated, so every axiom and every
//! predicate in the rest of the crate is decidable by enumeration. Rings may
//! lack a multiplicative identity; ideals viewed as rings usually do.

mod build;
mod derivation;
mod ideal;
mod quotient;

pub use build::{
    make_product, make_triangular_matrix_ring, make_truncated_poly, make_zn, product_derivation,
    TruncPolyMeta, DEFAULT_MAX_ORDER,
};
pub use derivation::{Derivation, DerivationError, DerivationViolation};
pub use ideal::{
    all_ideals, delta_compat_witness, delta_ideal_witness, ideal_generated, is_delta_compatible,
    is_delta_ideal, left_annihilator, Ideal, IdealViolation, Sidedness, SubringData,
};
pub use quotient::{quotient_ring, QuotientData, QuotientError};

use crate::set::ElemSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Index of a ring element in its table representation.
pub type Elem = usize;

/// Orders up to this are validated exhaustively; larger rings are spot-checked
/// on seeded random triples and the outcome is flagged as sampled.
pub const EXHAUSTIVE_VALIDATION_LIMIT: usize = 256;

const SAMPLED_TRIPLES: usize = 20_000;

/// Structural description of how a ring was built, kept for display and for
/// constructions (partial derivatives, component lifts) that need more than
/// the raw tables.
#[derive(Clone, Debug)]
pub enum Structure {
    /// Raw tables with no extra structure.
    Opaque,
    Zn {
        n: usize,
    },
    TruncPoly(TruncPolyMeta),
    Triangular {
        modulus: usize,
        size: usize,
    },
    Product {
        left: Arc<FiniteRing>,
        right: Arc<FiniteRing>,
    },
}

/// A finite associative ring given by full addition and multiplication tables.
pub struct FiniteRing {
    order: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: Elem,
    one: Option<Elem>,
    elem_names: Vec<String>,
    symbols: Vec<(String, Elem)>,
    structure: Structure,
    additive_exponent: u64,
}

/// Shape problems that prevent the tables from describing a ring candidate at
/// all; distinct from axiom violations, which `validate` reports.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("order must be positive")]
    EmptyRing,
    #[error("{table} table has {got} entries, expected {expected}")]
    TableSize {
        table: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("{table} table entry {value} is out of range for order {order}")]
    IndexRange {
        table: &'static str,
        value: usize,
        order: usize,
    },
    #[error("no additive identity found in the addition table")]
    NoAdditiveIdentity,
    #[error("element {elem} has no additive inverse")]
    NoAdditiveInverse { elem: Elem },
    #[error("requested order {order} exceeds the configured bound {bound}")]
    OrderBound { order: usize, bound: usize },
}

/// A ring axiom that failed, with the witnessing elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    AddNotCommutative { a: Elem, b: Elem },
    AddNotAssociative { a: Elem, b: Elem, c: Elem },
    ZeroNotIdentity { a: Elem },
    NegNotInverse { a: Elem },
    MulNotAssociative { a: Elem, b: Elem, c: Elem },
    NotLeftDistributive { a: Elem, b: Elem, c: Elem },
    NotRightDistributive { a: Elem, b: Elem, c: Elem },
    OneNotIdentity { a: Elem },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AxiomViolation::*;
        match self {
            AddNotCommutative { a, b } => write!(f, "a+b != b+a at (a,b)=({a},{b})"),
            AddNotAssociative { a, b, c } => {
                write!(f, "(a+b)+c != a+(b+c) at (a,b,c)=({a},{b},{c})")
            }
            ZeroNotIdentity { a } => write!(f, "0+a != a at a={a}"),
            NegNotInverse { a } => write!(f, "a+(-a) != 0 at a={a}"),
            MulNotAssociative { a, b, c } => {
                write!(f, "(a*b)*c != a*(b*c) at (a,b,c)=({a},{b},{c})")
            }
            NotLeftDistributive { a, b, c } => {
                write!(f, "a*(b+c) != a*b+a*c at (a,b,c)=({a},{b},{c})")
            }
            NotRightDistributive { a, b, c } => {
                write!(f, "(a+b)*c != a*c+b*c at (a,b,c)=({a},{b},{c})")
            }
            OneNotIdentity { a } => write!(f, "1*a != a or a*1 != a at a={a}"),
        }
    }
}

/// Result of an axiom sweep. `exhaustive` is false when the ring was too large
/// for a full O(n^3) pass and random triples were used instead.
#[derive(Debug, Clone)]
pub struct Validation {
    pub violations: Vec<AxiomViolation>,
    pub exhaustive: bool,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteRing {
    /// Builds a ring candidate from explicit tables without checking any ring
    /// axiom. Only shapes and index ranges are enforced; feed the result to
    /// [`FiniteRing::validate`] to find axiom violations.
    pub fn from_raw(
        order: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        neg: Vec<usize>,
        zero: Elem,
        one: Option<Elem>,
    ) -> Result<Self, StructureError> {
        if order == 0 {
            return Err(StructureError::EmptyRing);
        }
        check_table("add", &add, order, order * order)?;
        check_table("mul", &mul, order, order * order)?;
        check_table("neg", &neg, order, order)?;
        if zero >= order {
            return Err(StructureError::IndexRange {
                table: "zero",
                value: zero,
                order,
            });
        }
        if let Some(o) = one {
            if o >= order {
                return Err(StructureError::IndexRange {
                    table: "one",
                    value: o,
                    order,
                });
            }
        }
        let mut ring = FiniteRing {
            order,
            add: add.into_iter().map(|v| v as u32).collect(),
            mul: mul.into_iter().map(|v| v as u32).collect(),
            neg: neg.into_iter().map(|v| v as u32).collect(),
            zero,
            one,
            elem_names: (0..order).map(|e| e.to_string()).collect(),
            symbols: Vec::new(),
            structure: Structure::Opaque,
            additive_exponent: 0,
        };
        ring.additive_exponent = ring.compute_additive_exponent();
        Ok(ring)
    }

    /// Builds a ring from addition and multiplication tables alone, deriving
    /// the zero element, the negation table and the identity (when one
    /// exists). Fails when the addition table has no identity or misses an
    /// inverse, since negation cannot then be derived.
    pub fn from_add_mul(
        order: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if order == 0 {
            return Err(StructureError::EmptyRing);
        }
        check_table("add", &add, order, order * order)?;
        check_table("mul", &mul, order, order * order)?;
        let zero = (0..order)
            .find(|&z| (0..order).all(|a| add[z * order + a] == a && add[a * order + z] == a))
            .ok_or(StructureError::NoAdditiveIdentity)?;
        let mut neg = vec![0usize; order];
        for a in 0..order {
            neg[a] = (0..order)
                .find(|&b| add[a * order + b] == zero)
                .ok_or(StructureError::NoAdditiveInverse { elem: a })?;
        }
        let one = (0..order)
            .find(|&o| (0..order).all(|a| mul[o * order + a] == a && mul[a * order + o] == a));
        Self::from_raw(order, add, mul, neg, zero, one)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.order + b] as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b] as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a] as Elem
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Option<Elem> {
        self.one
    }

    pub fn is_unital(&self) -> bool {
        self.one.is_some()
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub(crate) fn set_structure(&mut self, s: Structure) {
        self.structure = s;
    }

    pub(crate) fn set_one(&mut self, one: Option<Elem>) {
        self.one = one;
    }

    pub(crate) fn set_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.order);
        self.elem_names = names;
    }

    pub(crate) fn set_symbols(&mut self, symbols: Vec<(String, Elem)>) {
        self.symbols = symbols;
    }

    pub fn elem_name(&self, a: Elem) -> &str {
        &self.elem_names[a]
    }

    /// Named atoms (generators, matrix units) the expression parser resolves.
    pub fn symbols(&self) -> &[(String, Elem)] {
        &self.symbols
    }

    pub fn lookup_symbol(&self, name: &str) -> Option<Elem> {
        self.symbols
            .iter()
            .find(|(s, _)| s == name)
            .map(|&(_, e)| e)
    }

    /// m·a in the additive group, by repeated doubling; negative m negates.
    pub fn int_scale(&self, m: i64, a: Elem) -> Elem {
        let (mut m, mut base) = if m < 0 {
            (m.unsigned_abs(), self.neg(a))
        } else {
            (m as u64, a)
        };
        let mut acc = self.zero;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            m >>= 1;
        }
        acc
    }

    /// Order of `a` in the additive group.
    pub fn additive_order(&self, a: Elem) -> u64 {
        let mut acc = a;
        let mut k = 1u64;
        while acc != self.zero {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    /// Least E > 0 with E·a = 0 for all a.
    pub fn additive_exponent(&self) -> u64 {
        self.additive_exponent
    }

    fn compute_additive_exponent(&self) -> u64 {
        let mut e = 1u64;
        for a in 0..self.order {
            let o = self.additive_order(a);
            e = lcm(e, o);
        }
        e
    }

    /// Sweeps the ring axioms and reports every violation found, each with a
    /// witness. Rings over [`EXHAUSTIVE_VALIDATION_LIMIT`] are sampled.
    pub fn validate(&self) -> Validation {
        let n = self.order;
        let mut violations = Vec::new();

        for a in 0..n {
            if self.add(self.zero, a) != a {
                violations.push(AxiomViolation::ZeroNotIdentity { a });
            }
            if self.add(a, self.neg(a)) != self.zero {
                violations.push(AxiomViolation::NegNotInverse { a });
            }
            if let Some(one) = self.one {
                if self.mul(one, a) != a || self.mul(a, one) != a {
                    violations.push(AxiomViolation::OneNotIdentity { a });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    violations.push(AxiomViolation::AddNotCommutative { a, b });
                }
            }
        }

        let exhaustive = n <= EXHAUSTIVE_VALIDATION_LIMIT;
        let check_triple = |a: Elem, b: Elem, c: Elem, out: &mut Vec<AxiomViolation>| {
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                out.push(AxiomViolation::AddNotAssociative { a, b, c });
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                out.push(AxiomViolation::MulNotAssociative { a, b, c });
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                out.push(AxiomViolation::NotLeftDistributive { a, b, c });
            }
            if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                out.push(AxiomViolation::NotRightDistributive { a, b, c });
            }
        };

        if exhaustive {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check_triple(a, b, c, &mut violations);
                    }
                }
            }
        } else {
            // Deterministic spot check; flagged as non-exhaustive in the result.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let c = rng.gen_range(0..n);
                check_triple(a, b, c, &mut violations);
            }
        }

        Validation {
            violations,
            exhaustive,
        }
    }

    /// Renders a subset as `{name, name, ...}` in ascending element order.
    pub fn display_set(&self, s: &ElemSet) -> String {
        let mut out = String::from("{");
        for (i, e) in s.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(self.elem_name(e));
        }
        out.push('}');
        out
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("order", &self.order)
            .field("zero", &self.zero)
            .field("one", &self.one)
            .finish()
    }
}

fn check_table(
    name: &'static str,
    table: &[usize],
    order: usize,
    expected: usize,
) -> Result<(), StructureError> {
    if table.len() != expected {
        return Err(StructureError::TableSize {
            table: name,
            got: table.len(),
            expected,
        });
    }
    for &v in table {
        if v >= order {
            return Err(StructureError::IndexRange {
                table: name,
                value: v,
                order,
            });
        }
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zn_tables_are_valid() {
        let r = make_zn(4, DEFAULT_MAX_ORDER).unwrap();
        let v = r.validate();
        assert!(v.is_valid() && v.exhaustive);
        assert_eq!(r.one(), Some(1));
        assert_eq!(r.add(2, 3), 1);
        assert_eq!(r.mul(2, 2), 0);
        assert_eq!(r.neg(1), 3);
        assert_eq!(r.additive_exponent(), 4);
    }

    #[test]
    fn corrupted_z4_is_caught_with_witness() {
        let mut mul: Vec<usize> = (0..4)
            .flat_map(|a| (0..4).map(move |b| a * b % 4))
            .collect();
        mul[2 * 4 + 2] = 1; // 2*2 := 1
        let bad = FiniteRing::from_raw(
            4,
            (0..4).flat_map(|a| (0..4).map(move |b| (a + b) % 4)).collect(),
            mul,
            (0..4).map(|a| (4 - a) % 4).collect(),
            0,
            Some(1),
        )
        .unwrap();
        let v = bad.validate();
        assert!(!v.is_valid());
        assert!(v.violations.iter().any(|x| matches!(
            x,
            AxiomViolation::MulNotAssociative { .. } | AxiomViolation::NotLeftDistributive { .. }
                | AxiomViolation::NotRightDistributive { .. }
        )));
    }

    #[test]
    fn structural_errors_are_not_axiom_violations() {
        let err = FiniteRing::from_add_mul(2, vec![0, 1, 1], vec![0, 0, 0, 0]).unwrap_err();
        assert!(matches!(err, StructureError::TableSize { .. }));
    }

    #[test]
    fn int_scale_matches_repeated_addition() {
        let r = make_zn(7, DEFAULT_MAX_ORDER).unwrap();
        for a in r.elements() {
            let mut acc = r.zero();
            for m in 0..30i64 {
                assert_eq!(r.int_scale(m, a), acc);
                assert_eq!(r.int_scale(-m, a), r.neg(acc));
                acc = r.add(acc, a);
            }
        }
    }

    #[test]
    fn int_scale_pinned_values() {
        let z4 = make_zn(4, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(z4.int_scale(3, 2), 2);
        assert_eq!(z4.int_scale(0, 3), 0);
        let dual = make_truncated_poly(2, &[2], DEFAULT_MAX_ORDER).unwrap();
        let a = dual.lookup_symbol("a").unwrap();
        assert_eq!(dual.int_scale(-1, a), a);
    }
}
