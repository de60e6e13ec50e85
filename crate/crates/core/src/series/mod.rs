//! Skew inverse Laurent series: finite-above, possibly infinite-below formal
//! sums over a finite coefficient ring, with x a = a x + delta(a).
//!
//! A [`Series`] stores a dense coefficient window and tracks what is known:
//! an exact series is zero outside its window, an inexact one is unknown
//! below its floor. Multiplication uses
//!
//! x^k a = sum over t >= 0 of C(k, t) delta^t(a) x^(k-t)
//!
//! for any integer k. Products whose expansion terminates stay exact: the
//! t-sum is finite when k >= 0 (the binomial vanishes past t = k) and
//! whenever the delta orbit of the right coefficient reaches zero. Only a
//! negative-degree left factor against a non-terminating orbit forces
//! truncation to the precision window with the result marked inexact.

mod binom;

pub use binom::binom_int;
use binom::BinomCache;

use crate::ring::{Derivation, Elem, FiniteRing};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("derivation belongs to a different ring")]
    RingMismatch,
    #[error("coefficient ring has no identity, x^k alone is not an element")]
    NotUnital,
    #[error("element {value} is outside ring of order {order}")]
    ElementRange { value: usize, order: usize },
    #[error("insufficient precision: need degree {needed}, known only down to {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
}

/// Truncation rule for operations whose exact result would extend
/// infinitely far down: keep `floor_drop` coefficients below the top.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub floor_drop: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { floor_drop: 24 }
    }
}

impl PrecisionPolicy {
    pub fn new(floor_drop: u32) -> Self {
        assert!(floor_drop > 0, "window must keep at least one coefficient");
        PrecisionPolicy { floor_drop }
    }

    /// Lowest degree kept when the top of the result is `top`.
    fn floor_for(&self, top: i64) -> i64 {
        top - i64::from(self.floor_drop) + 1
    }
}

/// One element of R((x^-1; delta)), or a truncation of one.
///
/// `coeffs[i]` is the coefficient of `x^(floor + i)`. When `exact`, all
/// coefficients outside the window are zero and both window ends are
/// nonzero (the zero series has an empty window). When inexact, degrees
/// above the window are zero but degrees below `floor` are unknown; only
/// the top is trimmed, since dropping the floor would forget how far the
/// series is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Elem>,
    floor: i64,
    exact: bool,
}

/// What is known about one coefficient of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffValue {
    Known(Elem),
    Unknown,
}

impl CoeffValue {
    pub fn known(self) -> Option<Elem> {
        match self {
            CoeffValue::Known(e) => Some(e),
            CoeffValue::Unknown => None,
        }
    }
}

/// The leading term of a series, when it is determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeadingTerm {
    /// The series is exactly zero.
    Zero,
    Term { degree: i64, coeff: Elem },
    /// Inexact with no known nonzero coefficient: the leading term, if any,
    /// is hidden below the floor.
    Unknown,
}

impl Series {
    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Highest degree with a stored coefficient; `floor - 1` when empty.
    pub fn top(&self) -> i64 {
        self.floor + self.coeffs.len() as i64 - 1
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// Highest degree that could carry a nonzero coefficient.
    /// None means no degree can (the series is exactly zero).
    pub fn hi_possible(&self) -> Option<i64> {
        if self.exact {
            if self.coeffs.is_empty() {
                None
            } else {
                Some(self.top())
            }
        } else {
            // Known zero above the window, unknown below the floor; when the
            // window is empty this is floor - 1.
            Some(self.top())
        }
    }

    pub fn leading(&self) -> LeadingTerm {
        match self.coeffs.last() {
            Some(&c) => LeadingTerm::Term {
                degree: self.top(),
                coeff: c,
            },
            None if self.exact => LeadingTerm::Zero,
            None => LeadingTerm::Unknown,
        }
    }

    /// The coefficient of x^d, or Unknown below the floor of an inexact
    /// series. `zero` is the ring's zero element.
    pub fn coefficient_at(&self, d: i64, zero: Elem) -> CoeffValue {
        if d > self.top() {
            CoeffValue::Known(zero)
        } else if d >= self.floor {
            CoeffValue::Known(self.coeffs[(d - self.floor) as usize])
        } else if self.exact {
            CoeffValue::Known(zero)
        } else {
            CoeffValue::Unknown
        }
    }

    /// Stored nonzero terms, ascending by degree.
    pub fn terms<'a>(&'a self, zero: Elem) -> impl Iterator<Item = (i64, Elem)> + 'a {
        let floor = self.floor;
        self.coeffs
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c != zero)
            .map(move |(i, &c)| (floor + i as i64, c))
    }

    fn normalize(mut coeffs: Vec<Elem>, mut floor: i64, exact: bool, zero: Elem) -> Series {
        while coeffs.last() == Some(&zero) {
            coeffs.pop();
        }
        if exact {
            let leading_zeros = coeffs.iter().take_while(|&&c| c == zero).count();
            if leading_zeros > 0 {
                coeffs.drain(..leading_zeros);
                floor += leading_zeros as i64;
            }
            if coeffs.is_empty() {
                floor = 0;
            }
        }
        Series {
            coeffs,
            floor,
            exact,
        }
    }
}

/// Left operand of the multiplication kernel: either a stored series or the
/// formal power x^k, which has no coefficient and so never needs a ring
/// identity.
enum LeftFactor<'a> {
    Series(&'a Series),
    XPower(i64),
}

/// The ring R((x^-1; delta)) with a fixed truncation policy.
///
/// All series arithmetic goes through this context: series values are plain
/// data and do not know their ring.
pub struct SeriesRing {
    ring: Arc<FiniteRing>,
    delta: Derivation,
    policy: PrecisionPolicy,
    binom: Mutex<BinomCache>,
}

impl SeriesRing {
    pub fn new(
        ring: Arc<FiniteRing>,
        delta: Derivation,
        policy: PrecisionPolicy,
    ) -> Result<SeriesRing, SeriesError> {
        if !Arc::ptr_eq(&ring, delta.ring()) {
            return Err(SeriesError::RingMismatch);
        }
        let binom = Mutex::new(BinomCache::new(ring.additive_exponent()));
        Ok(SeriesRing {
            ring,
            delta,
            policy,
            binom,
        })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn delta(&self) -> &Derivation {
        &self.delta
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    pub fn zero(&self) -> Series {
        Series {
            coeffs: Vec::new(),
            floor: 0,
            exact: true,
        }
    }

    pub fn one(&self) -> Result<Series, SeriesError> {
        let one = self.ring.one().ok_or(SeriesError::NotUnital)?;
        self.from_terms(&[(0, one)])
    }

    pub fn x_power(&self, k: i64) -> Result<Series, SeriesError> {
        let one = self.ring.one().ok_or(SeriesError::NotUnital)?;
        self.from_terms(&[(k, one)])
    }

    pub fn embed_scalar(&self, a: Elem) -> Result<Series, SeriesError> {
        self.from_terms(&[(0, a)])
    }

    /// Exact series from (degree, coefficient) terms; repeated degrees add.
    pub fn from_terms(&self, terms: &[(i64, Elem)]) -> Result<Series, SeriesError> {
        let order = self.ring.order();
        for &(_, c) in terms {
            if c >= order {
                return Err(SeriesError::ElementRange { value: c, order });
            }
        }
        let zero = self.ring.zero();
        let nonzero: Vec<(i64, Elem)> = terms.iter().copied().filter(|&(_, c)| c != zero).collect();
        let Some(&(d0, _)) = nonzero.first() else {
            return Ok(self.zero());
        };
        let floor = nonzero.iter().map(|&(d, _)| d).min().unwrap_or(d0);
        let top = nonzero.iter().map(|&(d, _)| d).max().unwrap_or(d0);
        let mut coeffs = vec![zero; (top - floor + 1) as usize];
        for &(d, c) in &nonzero {
            let idx = (d - floor) as usize;
            coeffs[idx] = self.ring.add(coeffs[idx], c);
        }
        Ok(Series::normalize(coeffs, floor, true, zero))
    }

    /// A truncation marker: nothing known at or below `top`.
    pub fn unknown_below(&self, top: i64) -> Series {
        Series {
            coeffs: Vec::new(),
            floor: top + 1,
            exact: false,
        }
    }

    pub fn add(&self, f: &Series, g: &Series) -> Series {
        let zero = self.ring.zero();
        let exact = f.exact && g.exact;
        // An exact operand is known everywhere, so only inexact floors
        // limit what the sum knows.
        let mut floor = i64::MIN;
        if !f.exact {
            floor = floor.max(f.floor);
        }
        if !g.exact {
            floor = floor.max(g.floor);
        }
        if exact {
            floor = match (f.coeffs.is_empty(), g.coeffs.is_empty()) {
                (true, true) => return self.zero(),
                (true, false) => g.floor,
                (false, true) => f.floor,
                (false, false) => f.floor.min(g.floor),
            };
        }
        let top = f.top().max(g.top());
        if top < floor {
            return Series {
                coeffs: Vec::new(),
                floor,
                exact,
            };
        }
        let mut coeffs = vec![zero; (top - floor + 1) as usize];
        for (slot, d) in coeffs.iter_mut().zip(floor..) {
            let a = f.coefficient_at(d, zero).known().unwrap_or(zero);
            let b = g.coefficient_at(d, zero).known().unwrap_or(zero);
            *slot = self.ring.add(a, b);
        }
        Series::normalize(coeffs, floor, exact, zero)
    }

    pub fn neg(&self, f: &Series) -> Series {
        let coeffs = f.coeffs.iter().map(|&c| self.ring.neg(c)).collect();
        // Negation cannot create or destroy zeros.
        Series {
            coeffs,
            floor: f.floor,
            exact: f.exact,
        }
    }

    pub fn sub(&self, f: &Series, g: &Series) -> Series {
        self.add(f, &self.neg(g))
    }

    /// a * f, multiplying every coefficient on the left; no commutation.
    pub fn scale_left(&self, a: Elem, f: &Series) -> Series {
        let zero = self.ring.zero();
        let coeffs = f.coeffs.iter().map(|&c| self.ring.mul(a, c)).collect();
        Series::normalize(coeffs, f.floor, f.exact, zero)
    }

    /// m * f in the additive group, coefficient by coefficient.
    pub fn scale_int(&self, m: i64, f: &Series) -> Series {
        let zero = self.ring.zero();
        let coeffs = f.coeffs.iter().map(|&c| self.ring.int_scale(m, c)).collect();
        Series::normalize(coeffs, f.floor, f.exact, zero)
    }

    /// f * x^k: a pure degree shift, since coefficients sit left of powers.
    pub fn shift(&self, f: &Series, k: i64) -> Series {
        Series {
            coeffs: f.coeffs.clone(),
            floor: f.floor + k,
            exact: f.exact,
        }
    }

    /// delta applied to every coefficient.
    pub fn delta_series(&self, f: &Series) -> Series {
        let zero = self.ring.zero();
        let coeffs = f.coeffs.iter().map(|&c| self.delta.apply(c)).collect();
        Series::normalize(coeffs, f.floor, f.exact, zero)
    }

    /// x^k a as a series: sum of C(k, t) delta^t(a) x^(k-t) over t >= 0.
    /// Exact whenever k >= 0 or the delta orbit of `a` reaches zero.
    pub fn commute_pow(&self, k: i64, a: Elem) -> Result<Series, SeriesError> {
        let f = self.embed_scalar(a)?;
        Ok(self.mul_kernel(LeftFactor::XPower(k), &f))
    }

    /// x^k * f without requiring a ring identity.
    pub fn x_mul(&self, k: i64, f: &Series) -> Series {
        self.mul_kernel(LeftFactor::XPower(k), f)
    }

    pub fn mul(&self, f: &Series, g: &Series) -> Series {
        self.mul_kernel(LeftFactor::Series(f), g)
    }

    fn mul_kernel(&self, left: LeftFactor<'_>, g: &Series) -> Series {
        let zero = self.ring.zero();
        // Exact zero on either side gives exact zero, even against an
        // inexact operand.
        if g.is_zero() {
            return self.zero();
        }
        let (left_terms, left_exact, left_floor, left_hi): (Vec<(i64, Elem)>, bool, i64, Option<i64>) =
            match left {
                LeftFactor::Series(f) => {
                    if f.is_zero() {
                        return self.zero();
                    }
                    (
                        f.terms(zero).collect(),
                        f.exact,
                        f.floor,
                        f.hi_possible(),
                    )
                }
                // The marker element below is never read for XPower.
                LeftFactor::XPower(k) => (vec![(k, usize::MAX)], true, k, Some(k)),
            };
        let is_xpower = matches!(left, LeftFactor::XPower(_));

        // Degrees above this are zero in the result.
        let top = match (left_hi, g.hi_possible()) {
            (Some(a), Some(b)) => a + b,
            // One side exactly zero was handled; this covers inexact-empty
            // against exact-zero only, already returned above.
            _ => unreachable!("exact zero handled earlier"),
        };

        // Does the expansion terminate? Only the right factor's coefficients
        // pass through delta, and a pair (i, b) is finite when i >= 0 (the
        // binomial vanishes past t = i) or the orbit of b dies.
        let g_deaths: Vec<(i64, Option<u32>)> = g
            .terms(zero)
            .map(|(j, b)| (j, self.delta.death(b)))
            .collect();
        let all_die = g_deaths.iter().all(|&(_, d)| d.is_some());
        let exact = left_exact && g.exact && (all_die || left_floor >= 0);

        let floor = if exact {
            // Lowest degree any pair can contribute to: i + j - t_max.
            let mut lo = i64::MAX;
            for &(i, _) in &left_terms {
                for &(j, d) in &g_deaths {
                    let t_max = match d {
                        Some(0) => continue,
                        Some(db) if i >= 0 => i64::from(db - 1).min(i),
                        Some(db) => i64::from(db - 1),
                        None => i,
                    };
                    lo = lo.min(i + j - t_max);
                }
            }
            if lo == i64::MAX {
                return self.zero();
            }
            lo
        } else {
            let mut floor = self.policy.floor_for(top);
            if !left_exact {
                // Unknown coefficients of the left factor only reach degrees
                // strictly below left_floor + hi(g).
                floor = floor.max(left_floor + g.hi_possible().expect("g not exact zero"));
            }
            if !g.exact {
                floor = floor.max(left_hi.expect("left not exact zero") + g.floor);
            }
            floor
        };

        if top < floor {
            return Series {
                coeffs: Vec::new(),
                floor,
                exact,
            };
        }

        let mut coeffs = vec![zero; (top - floor + 1) as usize];
        let mut binom = self.binom.lock().unwrap();
        for (j, b) in g.terms(zero) {
            // delta powers of b, up to the largest t any left term can use.
            let t_cap = left_hi.unwrap() + j - floor;
            if t_cap < 0 {
                continue;
            }
            let mut powers = Vec::with_capacity(t_cap as usize + 1);
            let mut cur = b;
            for _ in 0..=t_cap {
                powers.push(cur);
                if cur == zero {
                    break;
                }
                cur = self.delta.apply(cur);
            }
            for &(i, a) in &left_terms {
                let t_lo = (i + j - top).max(0);
                let t_hi = (i + j - floor).min(powers.len() as i64 - 1);
                for t in t_lo..=t_hi {
                    let pb = powers[t as usize];
                    if pb == zero {
                        break;
                    }
                    let c = binom.get(i, t as u64);
                    if c == 0 {
                        continue;
                    }
                    let val = if is_xpower { pb } else { self.ring.mul(a, pb) };
                    let contrib = self.ring.int_scale(c as i64, val);
                    let d = (i + j - t - floor) as usize;
                    coeffs[d] = self.ring.add(coeffs[d], contrib);
                }
            }
        }
        drop(binom);
        Series::normalize(coeffs, floor, exact, zero)
    }

    /// Whether f and g agree on every degree down to `floor`.
    /// Errors when either side is not known that far.
    pub fn equal_to_floor(&self, f: &Series, g: &Series, floor: i64) -> Result<bool, SeriesError> {
        let zero = self.ring.zero();
        let mut available = i64::MIN;
        if !f.exact {
            available = available.max(f.floor);
        }
        if !g.exact {
            available = available.max(g.floor);
        }
        if available > floor {
            return Err(SeriesError::InsufficientPrecision {
                needed: floor,
                available,
            });
        }
        let top = f.top().max(g.top());
        for d in floor..=top {
            let a = f.coefficient_at(d, zero).known().unwrap_or(zero);
            let b = g.coefficient_at(d, zero).known().unwrap_or(zero);
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest floor to which both series are known: compare down to here.
    pub fn common_floor(&self, f: &Series, g: &Series) -> Option<i64> {
        let mut floor = None;
        if !f.exact {
            floor = Some(f.floor);
        }
        if !g.exact {
            floor = Some(floor.map_or(g.floor, |x: i64| x.max(g.floor)));
        }
        floor
    }

    pub fn is_zero_to_floor(&self, f: &Series, floor: i64) -> Result<bool, SeriesError> {
        if !f.exact && f.floor > floor {
            return Err(SeriesError::InsufficientPrecision {
                needed: floor,
                available: f.floor,
            });
        }
        let zero = self.ring.zero();
        Ok(f.coeffs.iter().all(|&c| c == zero))
    }

    /// Checks delta^j(f) = sum over i of (-1)^(j-i) C(j, i) x^i f x^(j-i),
    /// comparing down to the deepest degree both sides know.
    pub fn conjugation_check(&self, f: &Series, j: u32) -> ConjugationOutcome {
        let mut lhs = f.clone();
        for _ in 0..j {
            lhs = self.delta_series(&lhs);
        }
        let mut rhs = self.zero();
        for i in 0..=j {
            let xi_f = self.x_mul(i64::from(i), f);
            let term = self.shift(&xi_f, i64::from(j - i));
            let c = self.binom.lock().unwrap().get(i64::from(j), u64::from(i)) as i64;
            let signed = if (j - i) % 2 == 1 { -c } else { c };
            let scaled = self.scale_int(signed, &term);
            rhs = self.add(&rhs, &scaled);
        }
        let compared_floor = self
            .common_floor(&lhs, &rhs)
            .unwrap_or_else(|| lhs.floor.min(rhs.floor).min(0));
        let zero = self.ring.zero();
        let top = lhs.top().max(rhs.top());
        let mut mismatch = None;
        for d in compared_floor..=top {
            let a = lhs.coefficient_at(d, zero).known().unwrap_or(zero);
            let b = rhs.coefficient_at(d, zero).known().unwrap_or(zero);
            if a != b {
                mismatch = Some(d);
                break;
            }
        }
        ConjugationOutcome {
            holds: mismatch.is_none(),
            compared_floor,
            exact: lhs.exact && rhs.exact,
            mismatch_degree: mismatch,
        }
    }

    /// Renders a series with terms in descending degree, `O(x^m)` tail for
    /// inexact values.
    pub fn display(&self, f: &Series) -> String {
        let zero = self.ring.zero();
        let one = self.ring.one();
        let mut parts: Vec<String> = Vec::new();
        for (d, c) in f.terms(zero).collect::<Vec<_>>().into_iter().rev() {
            let name = self.ring.elem_name(c);
            let coeff = if name.contains('+') {
                format!("({name})")
            } else {
                name.to_string()
            };
            let is_one = one == Some(c);
            let mut term = String::new();
            if d == 0 {
                term.push_str(&coeff);
            } else {
                if !is_one {
                    let _ = write!(term, "{coeff}*");
                }
                if d == 1 {
                    term.push('x');
                } else {
                    let _ = write!(term, "x^{d}");
                }
            }
            parts.push(term);
        }
        if !f.exact {
            parts.push(format!("O(x^{})", f.floor - 1));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Result of comparing delta^j(f) against its commutator expansion.
#[derive(Clone, Debug)]
pub struct ConjugationOutcome {
    pub holds: bool,
    /// Lowest degree compared; everything from here up agreed or the first
    /// disagreement is reported.
    pub compared_floor: i64,
    /// True when both sides were exact and the comparison was complete.
    pub exact: bool,
    pub mismatch_degree: Option<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_truncated_poly, make_zn, Derivation, DEFAULT_MAX_ORDER};
    use proptest::prelude::*;

    fn dual_ring() -> (Arc<FiniteRing>, SeriesRing) {
        let r = make_truncated_poly(2, &[2], DEFAULT_MAX_ORDER).unwrap();
        let d = Derivation::partial(Arc::clone(&r), 0).unwrap();
        let s = SeriesRing::new(Arc::clone(&r), d, PrecisionPolicy::default()).unwrap();
        (r, s)
    }

    /// Z3[a]/(a^2) with d(c0 + c1 a) = c1 a: nonzero multiples of a have
    /// orbits that never die, so expansions truncate.
    fn euler_ring(drop: u32) -> (Arc<FiniteRing>, SeriesRing) {
        let r = make_truncated_poly(3, &[2], DEFAULT_MAX_ORDER).unwrap();
        let table: Vec<u32> = (0..r.order()).map(|e| (e - e % 3) as u32).collect();
        let d = Derivation::from_table(Arc::clone(&r), table).unwrap();
        let s = SeriesRing::new(Arc::clone(&r), d, PrecisionPolicy::new(drop)).unwrap();
        (r, s)
    }

    #[test]
    fn deeper_policies_only_extend_products() {
        // Recomputing with a deeper floor must reproduce every coefficient
        // the shallower run guaranteed.
        let (r, shallow) = euler_ring(6);
        let (_, deep) = euler_ring(30);
        let a = r.lookup_symbol("a").unwrap();
        let two_a = r.add(a, a);
        for f_terms in [vec![(2, a), (0, two_a)], vec![(1, two_a), (-1, a), (-2, 1)]] {
            let f1 = shallow.from_terms(&f_terms).unwrap();
            let g1 = shallow.x_power(-2).unwrap();
            let p_shallow = shallow.mul(&g1, &f1);
            let f2 = deep.from_terms(&f_terms).unwrap();
            let g2 = deep.x_power(-2).unwrap();
            let p_deep = deep.mul(&g2, &f2);
            assert!(p_deep.floor() <= p_shallow.floor());
            for d in p_shallow.floor()..=p_shallow.top().max(p_shallow.floor()) {
                assert_eq!(
                    p_shallow.coefficient_at(d, r.zero()).known(),
                    p_deep.coefficient_at(d, r.zero()).known(),
                    "degree {d}"
                );
            }
        }
    }

    #[test]
    fn ax_squared_is_ax() {
        let (r, s) = dual_ring();
        let a = r.lookup_symbol("a").unwrap();
        let ax = s.from_terms(&[(1, a)]).unwrap();
        let sq = s.mul(&ax, &ax);
        assert!(sq.is_exact());
        assert_eq!(sq, ax);
        assert_eq!(s.display(&sq), "a*x");
    }

    #[test]
    fn x_and_x_inverse_are_mutually_inverse() {
        let (_, s) = dual_ring();
        let x = s.x_power(1).unwrap();
        let xinv = s.x_power(-1).unwrap();
        let one = s.one().unwrap();
        assert_eq!(s.mul(&x, &xinv), one);
        assert_eq!(s.mul(&xinv, &x), one);
    }

    #[test]
    fn inverse_commutation_matches_expansion() {
        // x^-1 a = a x^-1 - delta(a) x^-2 + ... ; over the dual numbers the
        // orbit of a dies after delta(a) = 1, and -1 = 1 mod 2.
        let (r, s) = dual_ring();
        let a = r.lookup_symbol("a").unwrap();
        let got = s.commute_pow(-1, a).unwrap();
        let one = r.one().unwrap();
        let expect = s.from_terms(&[(-1, a), (-2, one)]).unwrap();
        assert!(got.is_exact());
        assert_eq!(got, expect);
        assert_eq!(s.display(&got), "a*x^-1 + x^-2");
    }

    #[test]
    fn nonterminating_orbit_truncates() {
        let (r, s) = euler_ring(4);
        let a = r.lookup_symbol("a").unwrap();
        let got = s.commute_pow(-1, a).unwrap();
        assert!(!got.is_exact());
        // x^-1 a = a x^-1 + 2a x^-2 + a x^-3 + 2a x^-4 + O(x^-5)
        assert_eq!(got.top(), -1);
        assert_eq!(got.floor(), -4);
        let two_a = r.int_scale(2, a);
        assert_eq!(got.coefficient_at(-1, 0), CoeffValue::Known(a));
        assert_eq!(got.coefficient_at(-2, 0), CoeffValue::Known(two_a));
        assert_eq!(got.coefficient_at(-3, 0), CoeffValue::Known(a));
        assert_eq!(got.coefficient_at(-4, 0), CoeffValue::Known(two_a));
        assert_eq!(got.coefficient_at(-5, 0), CoeffValue::Unknown);
        assert_eq!(s.display(&got), "a*x^-1 + 2*a*x^-2 + a*x^-3 + 2*a*x^-4 + O(x^-5)");
    }

    #[test]
    fn nonnegative_powers_stay_exact_without_orbit_death() {
        // x^k a has a finite expansion for k >= 0 (the binomial vanishes
        // past t = k) even when the orbit of a never reaches zero.
        let (r, s) = euler_ring(4);
        let a = r.lookup_symbol("a").unwrap();
        let xa = s.commute_pow(1, a).unwrap();
        assert!(xa.is_exact());
        assert_eq!(xa, s.from_terms(&[(1, a), (0, a)]).unwrap());
        assert_eq!(s.display(&xa), "a*x + a");

        // Degree-zero products commute past nothing at all.
        let a0 = s.from_terms(&[(0, a)]).unwrap();
        let aa = s.mul(&a0, &a0);
        assert!(aa.is_exact());
        assert!(aa.is_zero());

        // A left factor reaching below degree zero still truncates.
        let f = s.from_terms(&[(1, a), (-1, a)]).unwrap();
        let p = s.mul(&f, &a0);
        assert!(!p.is_exact());
    }

    #[test]
    fn add_keeps_the_weaker_floor() {
        let (r, s) = euler_ring(4);
        let a = r.lookup_symbol("a").unwrap();
        let trunc = s.commute_pow(-1, a).unwrap(); // floor -4
        let exact = s.from_terms(&[(-9, a), (0, a)]).unwrap();
        let sum = s.add(&trunc, &exact);
        assert!(!sum.is_exact());
        assert_eq!(sum.floor(), -4);
        assert_eq!(sum.coefficient_at(0, 0), CoeffValue::Known(a));
        assert_eq!(sum.coefficient_at(-9, 0), CoeffValue::Unknown);

        let deeper = s.x_mul(-1, &trunc); // floor drops further
        assert!(!deeper.is_exact());
        let sum2 = s.add(&trunc, &deeper);
        assert_eq!(sum2.floor(), trunc.floor().max(deeper.floor()));
    }

    #[test]
    fn product_floor_of_two_truncations() {
        let (r, s) = euler_ring(24);
        let a = r.lookup_symbol("a").unwrap();
        let f = s.commute_pow(-1, a).unwrap(); // top -1, floor -24
        let g = f.clone();
        let p = s.mul(&f, &g);
        // Unknown-side bounds: floor(f) + top(g) = -25 and top(f) + floor(g)
        // = -25; the policy window from top -2 also allows -25.
        assert!(p.top() <= -2);
        assert_eq!(p.floor(), -25);
        assert!(!p.is_exact());
    }

    #[test]
    fn mixed_product_keeps_exact_side_knowledge() {
        let (r, s) = euler_ring(6);
        let a = r.lookup_symbol("a").unwrap();
        let trunc = s.commute_pow(-1, a).unwrap(); // inexact, floor -6, top -1
        let shift = s.x_power(3).unwrap(); // exact
        let p = s.mul(&trunc, &shift);
        // Right factor exact: only the left floor bound applies, shifted.
        assert_eq!(p.floor(), trunc.floor() + 3);
        assert_eq!(p.top(), 2);
    }

    #[test]
    fn delta_series_applies_coefficientwise() {
        let (r, s) = dual_ring();
        let a = r.lookup_symbol("a").unwrap();
        let one = r.one().unwrap();
        let f = s.from_terms(&[(2, a), (0, one), (-1, a)]).unwrap();
        let df = s.delta_series(&f);
        let expect = s.from_terms(&[(2, one), (-1, one)]).unwrap();
        assert_eq!(df, expect);
    }

    #[test]
    fn x_commutator_is_delta() {
        // x f - f x = delta(f), coefficientwise, for exact f.
        let (r, s) = dual_ring();
        let a = r.lookup_symbol("a").unwrap();
        let one = r.one().unwrap();
        let f = s.from_terms(&[(1, a), (0, one), (-3, a)]).unwrap();
        let lhs = s.sub(&s.x_mul(1, &f), &s.shift(&f, 1));
        assert_eq!(lhs, s.delta_series(&f));
    }

    #[test]
    fn conjugation_small_orders() {
        let (r, s) = dual_ring();
        let a = r.lookup_symbol("a").unwrap();
        let one = r.one().unwrap();
        let f = s.from_terms(&[(2, a), (1, one), (-1, a)]).unwrap();
        for j in 0..=5 {
            let out = s.conjugation_check(&f, j);
            assert!(out.holds, "j={j}: mismatch at {:?}", out.mismatch_degree);
            assert!(out.exact);
        }
    }

    #[test]
    fn conjugation_with_truncation() {
        let (r, s) = euler_ring(12);
        let a = r.lookup_symbol("a").unwrap();
        let f = s.commute_pow(-2, a).unwrap();
        assert!(!f.is_exact());
        for j in 0..=3 {
            let out = s.conjugation_check(&f, j);
            assert!(out.holds, "j={j}: mismatch at {:?}", out.mismatch_degree);
            assert!(!out.exact);
        }
    }

    #[test]
    fn zero_products_are_exact_zero() {
        let (r, s) = euler_ring(8);
        let a = r.lookup_symbol("a").unwrap();
        let trunc = s.commute_pow(-1, a).unwrap();
        let z = s.zero();
        assert!(s.mul(&z, &trunc).is_zero());
        assert!(s.mul(&trunc, &z).is_zero());
    }

    #[test]
    fn display_zero_and_tail_only() {
        let (_, s) = euler_ring(8);
        assert_eq!(s.display(&s.zero()), "0");
        let tail = s.unknown_below(-3);
        assert_eq!(s.display(&tail), "O(x^-3)");
    }

    /// With the zero derivation the product must be the plain Laurent
    /// convolution; an independent convolution is the oracle here.
    #[test]
    fn zero_derivation_degenerates_to_convolution() {
        let r = make_zn(6, DEFAULT_MAX_ORDER).unwrap();
        let d = Derivation::zero(Arc::clone(&r));
        let s = SeriesRing::new(Arc::clone(&r), d, PrecisionPolicy::default()).unwrap();
        let f = s.from_terms(&[(2, 5), (0, 3), (-1, 4)]).unwrap();
        let g = s.from_terms(&[(1, 2), (-2, 1)]).unwrap();
        let p = s.mul(&f, &g);
        assert!(p.is_exact());
        for d in -5..=5 {
            let mut acc = 0;
            for i in -1..=2i64 {
                let j = d - i;
                let a = f.coefficient_at(i, 0).known().unwrap();
                let b = g.coefficient_at(j, 0).known().unwrap();
                acc = r.add(acc, r.mul(a, b));
            }
            assert_eq!(p.coefficient_at(d, 0), CoeffValue::Known(acc), "degree {d}");
        }
    }

    fn arb_series() -> impl Strategy<Value = Vec<(i64, usize)>> {
        proptest::collection::vec((-4i64..=4, 0usize..4), 0..5)
    }

    proptest! {
        /// Every delta orbit over the dual numbers dies, so arithmetic stays
        /// exact and the ring axioms can be checked on the nose.
        #[test]
        fn exact_ring_axioms_over_dual(ft in arb_series(), gt in arb_series(), ht in arb_series()) {
            let (_, s) = dual_ring();
            let f = s.from_terms(&ft).unwrap();
            let g = s.from_terms(&gt).unwrap();
            let h = s.from_terms(&ht).unwrap();
            prop_assert!(f.is_exact() && g.is_exact() && h.is_exact());
            let assoc_l = s.mul(&s.mul(&f, &g), &h);
            let assoc_r = s.mul(&f, &s.mul(&g, &h));
            prop_assert_eq!(assoc_l, assoc_r);
            let dist_l = s.mul(&f, &s.add(&g, &h));
            let dist_r = s.add(&s.mul(&f, &g), &s.mul(&f, &h));
            prop_assert_eq!(dist_l, dist_r);
            let comm = s.sub(&s.x_mul(1, &f), &s.shift(&f, 1));
            prop_assert_eq!(comm, s.delta_series(&f));
        }
    }
}
