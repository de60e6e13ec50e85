//! The (ring, derivation) pairs every suite runs against.
//!
//! The catalog spans the behaviors the engine distinguishes: modular rings
//! with zero derivations, truncated polynomial rings with partial
//! derivatives (not delta-compatible) and with a scaling derivation whose
//! orbits never die (delta-compatible), a noncommutative triangular ring
//! with an inner derivation, and product rings with componentwise maps.

use crate::ring::{
    is_delta_compatible, make_product, make_triangular_matrix_ring, make_truncated_poly, make_zn,
    product_derivation, Derivation, FiniteRing, DEFAULT_MAX_ORDER,
};
use std::sync::Arc;

#[derive(Clone)]
pub struct Fixture {
    pub name: String,
    pub ring: Arc<FiniteRing>,
    pub delta: Derivation,
    /// Measured: ab = 0 forces a delta(b) = 0 across the ring.
    pub delta_compatible: bool,
    pub commutative: bool,
    pub unital: bool,
    /// Measured: the derivation table is identically zero.
    pub zero_delta: bool,
}

impl Fixture {
    fn new(name: &str, ring: Arc<FiniteRing>, delta: Derivation) -> Fixture {
        let delta_compatible = is_delta_compatible(&delta);
        let commutative = ring
            .elements()
            .all(|a| ring.elements().all(|b| ring.mul(a, b) == ring.mul(b, a)));
        let unital = ring.one().is_some();
        let zero = ring.zero() as u32;
        let zero_delta = delta.table().iter().all(|&v| v == zero);
        Fixture {
            name: name.to_string(),
            ring,
            delta,
            delta_compatible,
            commutative,
            unital,
            zero_delta,
        }
    }
}

/// Z3[a]/(a^2) with d(c0 + c1 a) = c1 a. Valid, delta-compatible, and the
/// orbit of a never reaches zero, so series expansions must truncate.
fn scaling_derivation(ring: &Arc<FiniteRing>) -> Derivation {
    let table: Vec<u32> = (0..ring.order()).map(|e| (e - e % 3) as u32).collect();
    Derivation::from_table(Arc::clone(ring), table).expect("scaling map is a derivation")
}

pub fn default_catalog() -> Vec<Fixture> {
    let mut out = Vec::new();

    for n in [2usize, 4, 6, 8] {
        let ring = make_zn(n, DEFAULT_MAX_ORDER).expect("zn fits");
        let delta = Derivation::zero(Arc::clone(&ring));
        out.push(Fixture::new(&format!("z{n}"), ring, delta));
    }

    {
        let z2 = make_zn(2, DEFAULT_MAX_ORDER).unwrap();
        let ring = make_product(&z2, &z2, DEFAULT_MAX_ORDER).expect("product fits");
        let delta = Derivation::zero(Arc::clone(&ring));
        out.push(Fixture::new("z2xz2", ring, delta));
    }

    {
        let ring = make_truncated_poly(2, &[2], DEFAULT_MAX_ORDER).expect("dual numbers fit");
        let delta = Derivation::partial(Arc::clone(&ring), 0).expect("exponent divisible");
        out.push(Fixture::new("dual_z2", ring, delta));
    }

    {
        let ring = make_truncated_poly(3, &[2], DEFAULT_MAX_ORDER).expect("dual numbers fit");
        let delta = scaling_derivation(&ring);
        out.push(Fixture::new("dual_z3_scaling", ring, delta));
    }

    {
        let ring = make_truncated_poly(2, &[2, 3], DEFAULT_MAX_ORDER).expect("order 64 fits");
        let delta = Derivation::zero(Arc::clone(&ring));
        out.push(Fixture::new("tp23", ring, delta));
    }

    {
        let ring = make_triangular_matrix_ring(2, 2, DEFAULT_MAX_ORDER).expect("order 8 fits");
        let e12 = ring.lookup_symbol("e12").expect("matrix unit named");
        let delta = Derivation::inner(Arc::clone(&ring), e12).expect("inner map");
        out.push(Fixture::new("tri2_inner", ring, delta));
    }

    {
        let z4 = make_zn(4, DEFAULT_MAX_ORDER).unwrap();
        let dual = make_truncated_poly(2, &[2], DEFAULT_MAX_ORDER).unwrap();
        let ring = make_product(&z4, &dual, DEFAULT_MAX_ORDER).expect("order 16 fits");
        let d_left = Derivation::zero(Arc::clone(&z4));
        let d_right = Derivation::partial(Arc::clone(&dual), 0).unwrap();
        let delta =
            product_derivation(&ring, &d_left, &d_right).expect("componentwise derivation");
        out.push(Fixture::new("z4xdual", ring, delta));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_are_valid() {
        let catalog = default_catalog();
        assert_eq!(catalog.len(), 10);
        for fx in &catalog {
            let v = fx.ring.validate();
            assert!(v.violations.is_empty(), "{}: {:?}", fx.name, v.violations);
            assert!(v.exhaustive, "{}: catalog rings are small", fx.name);
            let dv = fx.delta.validate();
            assert!(dv.is_empty(), "{}: {:?}", fx.name, dv);
        }
    }

    #[test]
    fn catalog_metadata_matches_known_facts() {
        let catalog = default_catalog();
        let get = |name: &str| catalog.iter().find(|f| f.name == name).unwrap();

        // Zero derivations are always compatible.
        for name in ["z2", "z4", "z6", "z8", "z2xz2", "tp23"] {
            let fx = get(name);
            assert!(fx.zero_delta && fx.delta_compatible && fx.commutative && fx.unital);
        }

        // d/da on dual numbers: a*a = 0 but a*d(a) = a.
        let dual = get("dual_z2");
        assert!(!dual.delta_compatible && !dual.zero_delta);

        // The scaling map keeps multiples of a inside (a), so it stays
        // compatible even though orbits never die.
        let scaling = get("dual_z3_scaling");
        assert!(scaling.delta_compatible && !scaling.zero_delta);

        let tri = get("tri2_inner");
        assert!(!tri.commutative);

        let prod = get("z4xdual");
        assert!(!prod.zero_delta && prod.unital);
    }

    #[test]
    fn catalog_names_are_unique() {
        let catalog = default_catalog();
        let mut names: Vec<&str> = catalog.iter().map(|f| f.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), catalog.len());
    }
}
