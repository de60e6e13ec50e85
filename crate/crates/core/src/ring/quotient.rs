//! Quotients by two-sided ideals, with induced derivations when the ideal
//! is stable under the map.

use super::derivation::Derivation;
use super::ideal::Ideal;
use super::{Elem, FiniteRing, Structure};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuotientError {
    #[error("ideal is not two-sided: r={r}, a={a} escapes")]
    NotTwoSided { r: Elem, a: Elem },
    #[error("ideal is not delta-stable: delta({witness}) escapes")]
    NotDeltaIdeal { witness: Elem },
}

/// A quotient ring together with the projection map and, when requested and
/// well defined, the induced derivation.
#[derive(Debug)]
pub struct QuotientData {
    pub quotient: Arc<FiniteRing>,
    /// Parent element to quotient element.
    pub projection: Vec<Elem>,
    pub induced: Option<Derivation>,
}

/// Builds R/I for a two-sided ideal. Cosets are labeled in ascending order
/// of their least member, which is also the displayed representative.
///
/// When `delta` is given, the ideal must additionally be stable under it;
/// the induced map on cosets is then returned alongside.
pub fn quotient_ring(
    ideal: &Ideal,
    delta: Option<&Derivation>,
) -> Result<QuotientData, QuotientError> {
    let ring = ideal.ring();
    let n = ring.order();

    // The ideal was verified for its declared sidedness at construction;
    // quotients need both absorption laws regardless of that declaration.
    for a in ideal.iter() {
        for r in ring.elements() {
            if !ideal.contains(ring.mul(r, a)) || !ideal.contains(ring.mul(a, r)) {
                return Err(QuotientError::NotTwoSided { r, a });
            }
        }
    }
    if let Some(d) = delta {
        if let Some(witness) = super::ideal::delta_ideal_witness(ideal, d) {
            return Err(QuotientError::NotDeltaIdeal { witness });
        }
    }

    // rep[a] = least element of the coset a + I.
    let mut rep = vec![usize::MAX; n];
    for a in ring.elements() {
        let mut least = a;
        for i in ideal.iter() {
            least = least.min(ring.add(a, i));
        }
        rep[a] = least;
    }
    let mut reps: Vec<Elem> = rep.iter().copied().collect();
    reps.sort_unstable();
    reps.dedup();
    let m = reps.len();
    debug_assert_eq!(m * ideal.len(), n);

    let mut label = vec![usize::MAX; n];
    for (k, &r) in reps.iter().enumerate() {
        label[r] = k;
    }
    let projection: Vec<Elem> = (0..n).map(|a| label[rep[a]]).collect();

    let add = reps
        .iter()
        .flat_map(|&a| reps.iter().map(|&b| projection[ring.add(a, b)]).collect::<Vec<_>>())
        .collect();
    let mul = reps
        .iter()
        .flat_map(|&a| reps.iter().map(|&b| projection[ring.mul(a, b)]).collect::<Vec<_>>())
        .collect();
    let neg = reps.iter().map(|&a| projection[ring.neg(a)]).collect();
    let zero = projection[ring.zero()];
    let one = ring.one().map(|o| projection[o]);

    let mut quotient = FiniteRing::from_raw(m, add, mul, neg, zero, one)
        .expect("coset tables are well formed");
    quotient.set_names(
        reps.iter()
            .map(|&r| format!("[{}]", ring.elem_name(r)))
            .collect(),
    );
    quotient.set_symbols(
        ring.symbols()
            .iter()
            .map(|(name, e)| (name.clone(), projection[*e]))
            .collect(),
    );
    quotient.set_structure(Structure::Opaque);
    let quotient = Arc::new(quotient);

    let induced = match delta {
        Some(d) => {
            let table: Vec<u32> = reps.iter().map(|&r| projection[d.apply(r)] as u32).collect();
            let mut induced = Derivation::from_table(Arc::clone(&quotient), table)
                .expect("projection keeps indices in range");
            induced.set_label(format!("{}~", d.label()));
            Some(induced)
        }
        None => None,
    };

    Ok(QuotientData {
        quotient,
        projection,
        induced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{
        ideal_generated, make_triangular_matrix_ring, make_truncated_poly, make_zn, Sidedness,
        DEFAULT_MAX_ORDER,
    };

    /// Exhaustive ring homomorphism check for the projection map.
    fn assert_projection_hom(parent: &FiniteRing, q: &QuotientData) {
        let p = &q.projection;
        let quo = &q.quotient;
        for a in parent.elements() {
            for b in parent.elements() {
                assert_eq!(p[parent.add(a, b)], quo.add(p[a], p[b]));
                assert_eq!(p[parent.mul(a, b)], quo.mul(p[a], p[b]));
            }
        }
    }

    #[test]
    fn z8_mod_four_is_z4() {
        let z8 = make_zn(8, DEFAULT_MAX_ORDER).unwrap();
        let four = ideal_generated(&z8, &[4], Sidedness::TwoSided);
        let q = quotient_ring(&four, None).unwrap();
        assert_eq!(q.quotient.order(), 4);
        assert!(q.quotient.validate().is_valid());
        assert_projection_hom(&z8, &q);
        assert_eq!(q.quotient.elem_name(q.projection[5]), "[1]");
    }

    #[test]
    fn induced_derivation_on_quotient() {
        // Z2[a1,a2]/(a1^2,a2^2) with d/da1; killing (a2) leaves the dual
        // numbers with their own d/da.
        let r = make_truncated_poly(2, &[2, 2], DEFAULT_MAX_ORDER).unwrap();
        let d = Derivation::partial(Arc::clone(&r), 0).unwrap();
        let a2 = r.lookup_symbol("a2").unwrap();
        let ideal = ideal_generated(&r, &[a2], Sidedness::TwoSided);
        let q = quotient_ring(&ideal, Some(&d)).unwrap();
        assert_eq!(q.quotient.order(), 4);
        let induced = q.induced.unwrap();
        assert!(induced.validate().is_empty());
        for a in r.elements() {
            assert_eq!(q.projection[d.apply(a)], induced.apply(q.projection[a]));
        }
    }

    #[test]
    fn delta_unstable_ideal_is_rejected() {
        // d/da on dual numbers sends a to 1, so (a) is not delta-stable.
        let r = make_truncated_poly(2, &[2], DEFAULT_MAX_ORDER).unwrap();
        let d = Derivation::partial(Arc::clone(&r), 0).unwrap();
        let a = r.lookup_symbol("a").unwrap();
        let ideal = ideal_generated(&r, &[a], Sidedness::TwoSided);
        let err = quotient_ring(&ideal, Some(&d)).unwrap_err();
        assert!(matches!(err, QuotientError::NotDeltaIdeal { witness } if witness == a));
    }

    #[test]
    fn one_sided_ideal_is_rejected() {
        let tri = make_triangular_matrix_ring(2, 2, DEFAULT_MAX_ORDER).unwrap();
        let e11 = tri.lookup_symbol("e11").unwrap();
        let left = ideal_generated(&tri, &[e11], Sidedness::Left);
        assert_eq!(left.len(), 2);
        let err = quotient_ring(&left, None).unwrap_err();
        assert!(matches!(err, QuotientError::NotTwoSided { .. }));
    }

    #[test]
    fn quotient_by_full_ideal_is_trivial() {
        let z4 = make_zn(4, DEFAULT_MAX_ORDER).unwrap();
        let full = ideal_generated(&z4, &[1], Sidedness::TwoSided);
        let q = quotient_ring(&full, None).unwrap();
        assert_eq!(q.quotient.order(), 1);
        assert_eq!(q.quotient.one(), Some(0));
    }
}
