//! Growth of nilpotence degree in Z_m[a_1..a_n]/(a_i^(i+1)).
//!
//! Every generator a_i is nilpotent, yet f = a_1 + a_2 x^-1 + ... +
//! a_n x^(1-n) needs more than n factors to vanish: f^n keeps the monomial
//! a_n^n at degree n(1-n). The ring for n = 3 has 2^24 elements, far past
//! what operation tables can hold, so this module works structurally:
//! elements are coefficient vectors over the truncated monomial basis and
//! the derivation is zero, making series multiplication plain convolution.

use std::fmt::Write as _;
use thiserror::Error;

/// Monomial count cap: dim = (e_1)(e_2)...(e_n) monomials, each coefficient
/// vector dim long, so products cost dim^2 per coefficient pair.
const MAX_DIM: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CounterexampleError {
    #[error("modulus must be at least 2")]
    ModulusRange,
    #[error("need at least one generator")]
    NoGenerators,
    #[error("monomial basis has {dim} elements, cap is {cap}")]
    TooLarge { dim: usize, cap: usize },
}

/// Z_m[a_1..a_n] with a_i^(i+1) = 0, represented by exponent bookkeeping
/// instead of tables.
pub(crate) struct GrowthRing {
    modulus: u32,
    /// Basis size per generator: generator g carries powers 0..exponents[g],
    /// so exponents[g] is also its vanishing power.
    exponents: Vec<u32>,
    dim: usize,
    /// Row-major strides for the mixed-radix monomial index.
    strides: Vec<usize>,
}

/// Coefficient vector over the monomial basis, entries reduced mod m.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct GrowthElem(pub(crate) Vec<u32>);

impl GrowthRing {
    /// Z_m[a_1..a_n]/(a_i^(i+1)): generator i (1-based) has exponent cap
    /// i + 1, so its monomial powers run 0..=i.
    pub(crate) fn counterexample(modulus: u32, n: usize) -> Result<GrowthRing, CounterexampleError> {
        let exponents: Vec<u32> = (1..=n).map(|i| (i + 1) as u32).collect();
        GrowthRing::new(modulus, &exponents)
    }

    pub(crate) fn new(modulus: u32, exponents: &[u32]) -> Result<GrowthRing, CounterexampleError> {
        if modulus < 2 {
            return Err(CounterexampleError::ModulusRange);
        }
        if exponents.is_empty() {
            return Err(CounterexampleError::NoGenerators);
        }
        let mut dim = 1usize;
        for &e in exponents {
            dim = dim.saturating_mul(e as usize);
        }
        if dim > MAX_DIM {
            return Err(CounterexampleError::TooLarge { dim, cap: MAX_DIM });
        }
        let mut strides = vec![0usize; exponents.len()];
        let mut acc = 1usize;
        for (i, &e) in exponents.iter().enumerate() {
            strides[i] = acc;
            acc *= e as usize;
        }
        Ok(GrowthRing {
            modulus,
            exponents: exponents.to_vec(),
            dim,
            strides,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn zero(&self) -> GrowthElem {
        GrowthElem(vec![0; self.dim])
    }

    pub(crate) fn generator(&self, i: usize) -> GrowthElem {
        let mut v = vec![0; self.dim];
        v[self.strides[i]] = 1;
        GrowthElem(v)
    }

    pub(crate) fn monomial_exponents(&self, mono: usize) -> Vec<u32> {
        let mut rest = mono;
        self.exponents
            .iter()
            .map(|&e| {
                let d = (rest % e as usize) as u32;
                rest /= e as usize;
                d
            })
            .collect()
    }

    pub(crate) fn index_of_exponents(&self, exps: &[u32]) -> Option<usize> {
        let mut idx = 0usize;
        for ((&d, &e), &s) in exps.iter().zip(&self.exponents).zip(&self.strides) {
            if d >= e {
                return None;
            }
            idx += d as usize * s;
        }
        Some(idx)
    }

    /// Product of basis monomials: add exponent vectors, truncating to zero
    /// when any generator power reaches its cap.
    fn mono_product(&self, p: usize, q: usize) -> Option<usize> {
        let pe = self.monomial_exponents(p);
        let qe = self.monomial_exponents(q);
        let sum: Vec<u32> = pe.iter().zip(&qe).map(|(a, b)| a + b).collect();
        self.index_of_exponents(&sum)
    }

    pub(crate) fn add(&self, a: &GrowthElem, b: &GrowthElem) -> GrowthElem {
        GrowthElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.modulus)
                .collect(),
        )
    }

    pub(crate) fn mul(&self, a: &GrowthElem, b: &GrowthElem) -> GrowthElem {
        let mut out = vec![0u64; self.dim];
        for (p, &ca) in a.0.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (q, &cb) in b.0.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                if let Some(t) = self.mono_product(p, q) {
                    out[t] += u64::from(ca) * u64::from(cb);
                }
            }
        }
        GrowthElem(
            out.into_iter()
                .map(|v| (v % u64::from(self.modulus)) as u32)
                .collect(),
        )
    }

    pub(crate) fn pow(&self, a: &GrowthElem, k: u32) -> GrowthElem {
        let mut acc: Option<GrowthElem> = None;
        for _ in 0..k {
            acc = Some(match acc {
                None => a.clone(),
                Some(v) => self.mul(&v, a),
            });
        }
        acc.unwrap_or_else(|| {
            // k = 0: the empty product needs the identity monomial.
            let mut v = vec![0; self.dim];
            v[0] = 1;
            GrowthElem(v)
        })
    }

    pub(crate) fn is_zero(&self, a: &GrowthElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub(crate) fn elem_name(&self, a: &GrowthElem) -> String {
        let mut parts = Vec::new();
        for (mono, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let exps = self.monomial_exponents(mono);
            let mut term = String::new();
            if c != 1 || exps.iter().all(|&d| d == 0) {
                write!(term, "{c}").unwrap();
            }
            for (g, &d) in exps.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                if !term.is_empty() {
                    term.push('*');
                }
                write!(term, "a{}", g + 1).unwrap();
                if d > 1 {
                    write!(term, "^{d}").unwrap();
                }
            }
            parts.push(term);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// Exact series over a GrowthRing with the zero derivation: multiplication
/// is plain convolution of coefficient vectors.
#[derive(Clone)]
pub(crate) struct GrowthSeries {
    pub(crate) floor: i64,
    /// Ascending by degree from `floor`.
    pub(crate) coeffs: Vec<GrowthElem>,
}

impl GrowthSeries {
    pub(crate) fn mul(&self, ring: &GrowthRing, other: &GrowthSeries) -> GrowthSeries {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return GrowthSeries {
                floor: 0,
                coeffs: Vec::new(),
            };
        }
        let floor = self.floor + other.floor;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![ring.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = ring.mul(a, b);
                coeffs[i + j] = ring.add(&coeffs[i + j], &t);
            }
        }
        GrowthSeries { floor, coeffs }
    }

    pub(crate) fn is_zero(&self, ring: &GrowthRing) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    pub(crate) fn coefficient_at(&self, ring: &GrowthRing, d: i64) -> GrowthElem {
        let idx = d - self.floor;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            ring.zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }
}

/// What the growth run found, ready for reporting.
#[derive(Clone, Debug)]
pub struct CounterexampleOutcome {
    pub modulus: u32,
    pub generators: usize,
    /// generator_nilpotent[i]: a_(i+1)^(i+2) = 0 with a_(i+1)^(i+1) != 0.
    pub generator_nilpotent: Vec<bool>,
    /// power_nonzero[k-1]: f^k != 0, with the nonzero coefficient found.
    pub power_nonzero: Vec<(bool, String)>,
}

/// Builds R_n = Z_m[a_1..a_n]/(a_i^(i+1)), certifies each generator
/// nilpotent, and raises f = sum of a_i x^(1-i) to powers 1..=k_max.
pub fn counterexample_growth(
    modulus: u32,
    n: usize,
    k_max: u32,
) -> Result<CounterexampleOutcome, CounterexampleError> {
    let ring = GrowthRing::counterexample(modulus, n)?;

    let mut generator_nilpotent = Vec::new();
    for i in 0..n {
        let a = ring.generator(i);
        let vanish = ring.is_zero(&ring.pow(&a, (i + 2) as u32));
        let sharp = !ring.is_zero(&ring.pow(&a, (i + 1) as u32));
        generator_nilpotent.push(vanish && sharp);
    }

    // f = a_1 x^0 + a_2 x^-1 + ... + a_n x^(1-n), stored ascending.
    let coeffs: Vec<GrowthElem> = (0..n).rev().map(|i| ring.generator(i)).collect();
    let f = GrowthSeries {
        floor: 1 - n as i64,
        coeffs,
    };

    let mut power_nonzero = Vec::new();
    let mut acc = f.clone();
    for k in 1..=k_max {
        if k > 1 {
            acc = acc.mul(&ring, &f);
        }
        let nonzero = !acc.is_zero(&ring);
        // The bottom term of f^k is a_n^k x^(k(1-n)), a single monomial no
        // cross term can reach, so it is the canonical survivor.
        let witness = if nonzero {
            let (d, c) = acc
                .coeffs
                .iter()
                .enumerate()
                .find(|(_, c)| !ring.is_zero(c))
                .map(|(i, c)| (acc.floor + i as i64, c))
                .expect("nonzero series has a nonzero coefficient");
            format!("({})*x^{}", ring.elem_name(c), d)
        } else {
            String::new()
        };
        power_nonzero.push((nonzero, witness));
    }

    Ok(CounterexampleOutcome {
        modulus,
        generators: n,
        generator_nilpotent,
        power_nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_generator_dies_at_square() {
        let out = counterexample_growth(2, 1, 2).unwrap();
        assert_eq!(out.generator_nilpotent, vec![true]);
        assert!(out.power_nonzero[0].0, "f = a1 is nonzero");
        assert!(!out.power_nonzero[1].0, "a1^2 = 0");
    }

    #[test]
    fn two_generators_survive_squaring() {
        let out = counterexample_growth(2, 2, 2).unwrap();
        assert_eq!(out.generator_nilpotent, vec![true, true]);
        assert!(out.power_nonzero[1].0);
        // Lowest term of f^2 is a2^2 x^-2.
        assert_eq!(out.power_nonzero[1].1, "(a2^2)*x^-2");
    }

    #[test]
    fn three_generators_survive_cubing() {
        let out = counterexample_growth(2, 3, 3).unwrap();
        assert_eq!(out.generator_nilpotent, vec![true, true, true]);
        assert!(out.power_nonzero.iter().all(|(nz, _)| *nz));
        assert_eq!(out.power_nonzero[2].1, "(a3^3)*x^-6");
    }

    #[test]
    fn monomial_indexing_round_trips() {
        let ring = GrowthRing::counterexample(2, 3).unwrap();
        assert_eq!(ring.dim(), 24);
        for mono in 0..ring.dim() {
            let exps = ring.monomial_exponents(mono);
            assert_eq!(ring.index_of_exponents(&exps), Some(mono));
        }
        // a1^2 truncates away.
        assert_eq!(ring.index_of_exponents(&[2, 0, 0]), None);
    }

    #[test]
    fn size_cap_is_enforced() {
        assert_eq!(
            counterexample_growth(2, 4, 1).unwrap_err(),
            CounterexampleError::TooLarge { dim: 120, cap: 64 }
        );
        assert_eq!(
            counterexample_growth(1, 2, 1).unwrap_err(),
            CounterexampleError::ModulusRange
        );
    }

    #[test]
    fn modulus_three_keeps_integer_coefficients_honest() {
        // (a1 + a2 x^-1)^2 over Z3 has cross term 2 a1 a2 x^-1.
        let ring = GrowthRing::counterexample(3, 2).unwrap();
        let f = GrowthSeries {
            floor: -1,
            coeffs: vec![ring.generator(1), ring.generator(0)],
        };
        let sq = f.mul(&ring, &f);
        let cross = sq.coefficient_at(&ring, -1);
        assert_eq!(ring.elem_name(&cross), "2*a1*a2");
    }
}
