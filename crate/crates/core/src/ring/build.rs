//! Ring constructors: Z_n, truncated polynomial rings, upper triangular
//! matrix rings and direct products.

use super::derivation::Derivation;
use super::{Elem, FiniteRing, Structure, StructureError};
use std::sync::Arc;

/// Default cap on constructed ring orders; exhaustive sweeps are O(n^2)/O(n^3).
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Monomial basis data for Z_m[a_1..a_k]/(a_i^{e_i}).
///
/// Monomial index: mixed radix over exponent vectors, generator 1 fastest.
/// Element index: mixed radix base `m` over monomial coefficients.
#[derive(Clone, Debug)]
pub struct TruncPolyMeta {
    pub modulus: usize,
    pub exponents: Vec<usize>,
    /// Number of basis monomials, the product of the exponents.
    pub dim: usize,
}

impl TruncPolyMeta {
    pub fn new(modulus: usize, exponents: &[usize]) -> Self {
        let dim = exponents.iter().product();
        TruncPolyMeta {
            modulus,
            exponents: exponents.to_vec(),
            dim,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.modulus.checked_pow(self.dim.try_into().ok()?)
    }

    pub fn monomial_exponents(&self, mono: usize) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.exponents.len());
        let mut m = mono;
        for &e in &self.exponents {
            v.push(m % e);
            m /= e;
        }
        v
    }

    pub fn monomial_index(&self, exps: &[usize]) -> Option<usize> {
        let mut idx = 0;
        let mut stride = 1;
        for (&v, &e) in exps.iter().zip(&self.exponents) {
            if v >= e {
                return None; // truncated away
            }
            idx += v * stride;
            stride *= e;
        }
        Some(idx)
    }

    /// Coefficient vector (one entry per monomial) of the element index.
    pub fn decode(&self, e: Elem) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.dim);
        let mut e = e;
        for _ in 0..self.dim {
            v.push(e % self.modulus);
            e /= self.modulus;
        }
        v
    }

    pub fn encode(&self, coeffs: &[usize]) -> Elem {
        let mut idx = 0;
        let mut stride = 1;
        for &c in coeffs {
            idx += (c % self.modulus) * stride;
            stride *= self.modulus;
        }
        idx
    }

    pub fn generator(&self, g: usize) -> Elem {
        let mut exps = vec![0; self.exponents.len()];
        exps[g] = 1;
        let mono = self.monomial_index(&exps).expect("exponent 1 in range");
        let mut coeffs = vec![0; self.dim];
        coeffs[mono] = 1;
        self.encode(&coeffs)
    }

    pub fn generator_name(&self, g: usize) -> String {
        if self.exponents.len() == 1 {
            "a".to_string()
        } else {
            format!("a{}", g + 1)
        }
    }

    pub fn monomial_name(&self, mono: usize) -> String {
        let exps = self.monomial_exponents(mono);
        let mut parts = Vec::new();
        for (g, &v) in exps.iter().enumerate() {
            match v {
                0 => {}
                1 => parts.push(self.generator_name(g)),
                _ => parts.push(format!("{}^{}", self.generator_name(g), v)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn elem_name(&self, e: Elem) -> String {
        let coeffs = self.decode(e);
        let mut parts = Vec::new();
        for (mono, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = self.monomial_name(mono);
            let part = if c == 1 {
                name
            } else if name == "1" {
                c.to_string()
            } else {
                format!("{c}*{name}")
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// Z_n with its usual modular tables.
pub fn make_zn(n: usize, max_order: usize) -> Result<Arc<FiniteRing>, StructureError> {
    if n == 0 {
        return Err(StructureError::EmptyRing);
    }
    if n > max_order {
        return Err(StructureError::OrderBound {
            order: n,
            bound: max_order,
        });
    }
    let add = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a * b) % n)).collect();
    let neg = (0..n).map(|a| (n - a) % n).collect();
    let one = if n == 1 { Some(0) } else { Some(1) };
    let mut ring = FiniteRing::from_raw(n, add, mul, neg, 0, one)?;
    ring.set_structure(Structure::Zn { n });
    Ok(Arc::new(ring))
}

/// Z_m[a_1..a_k]/(a_1^{e_1}, .., a_k^{e_k}) on its monomial basis.
pub fn make_truncated_poly(
    modulus: usize,
    exponents: &[usize],
    max_order: usize,
) -> Result<Arc<FiniteRing>, StructureError> {
    if modulus < 2 || exponents.is_empty() || exponents.iter().any(|&e| e == 0) {
        return Err(StructureError::EmptyRing);
    }
    let meta = TruncPolyMeta::new(modulus, exponents);
    let order = meta.order().unwrap_or(usize::MAX);
    if order > max_order {
        return Err(StructureError::OrderBound {
            order,
            bound: max_order,
        });
    }

    // Product of basis monomials: zero when any exponent overflows.
    let mono_prod: Vec<Option<usize>> = (0..meta.dim * meta.dim)
        .map(|p| {
            let (u, v) = (p / meta.dim, p % meta.dim);
            let eu = meta.monomial_exponents(u);
            let ev = meta.monomial_exponents(v);
            let sum: Vec<usize> = eu.iter().zip(&ev).map(|(a, b)| a + b).collect();
            meta.monomial_index(&sum)
        })
        .collect();

    let m = modulus;
    let coeffs: Vec<Vec<usize>> = (0..order).map(|e| meta.decode(e)).collect();
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    let mut neg = Vec::with_capacity(order);
    for a in 0..order {
        let ca = &coeffs[a];
        for b in 0..order {
            let cb = &coeffs[b];
            let sum: Vec<usize> = ca.iter().zip(cb).map(|(x, y)| (x + y) % m).collect();
            add.push(meta.encode(&sum));
            let mut out = vec![0usize; meta.dim];
            for (u, &cu) in ca.iter().enumerate() {
                if cu == 0 {
                    continue;
                }
                for (v, &cv) in cb.iter().enumerate() {
                    if cv == 0 {
                        continue;
                    }
                    if let Some(w) = mono_prod[u * meta.dim + v] {
                        out[w] = (out[w] + cu * cv) % m;
                    }
                }
            }
            mul.push(meta.encode(&out));
        }
        let nc: Vec<usize> = ca.iter().map(|&c| (m - c) % m).collect();
        neg.push(meta.encode(&nc));
    }

    let one = meta.encode(&{
        let mut c = vec![0; meta.dim];
        c[0] = 1;
        c
    });
    let mut ring = FiniteRing::from_raw(order, add, mul, neg, 0, Some(one))?;
    ring.set_names((0..order).map(|e| meta.elem_name(e)).collect());
    ring.set_symbols(
        (0..exponents.len())
            .map(|g| (meta.generator_name(g), meta.generator(g)))
            .collect(),
    );
    ring.set_structure(Structure::TruncPoly(meta));
    Ok(Arc::new(ring))
}

/// Upper triangular size x size matrices over Z_m.
pub fn make_triangular_matrix_ring(
    modulus: usize,
    size: usize,
    max_order: usize,
) -> Result<Arc<FiniteRing>, StructureError> {
    if modulus < 2 || size == 0 {
        return Err(StructureError::EmptyRing);
    }
    let cells: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i..size).map(move |j| (i, j)))
        .collect();
    let dim = cells.len();
    let order = modulus
        .checked_pow(dim as u32)
        .filter(|&o| o <= max_order)
        .ok_or(StructureError::OrderBound {
            order: usize::MAX,
            bound: max_order,
        })?;

    let decode = |e: Elem| -> Vec<usize> {
        let mut v = Vec::with_capacity(dim);
        let mut e = e;
        for _ in 0..dim {
            v.push(e % modulus);
            e /= modulus;
        }
        v
    };
    let encode = |v: &[usize]| -> Elem {
        let mut idx = 0;
        let mut stride = 1;
        for &c in v {
            idx += (c % modulus) * stride;
            stride *= modulus;
        }
        idx
    };
    let cell_pos = |i: usize, j: usize| cells.iter().position(|&c| c == (i, j));

    let coeffs: Vec<Vec<usize>> = (0..order).map(decode).collect();
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    let mut neg = Vec::with_capacity(order);
    for a in 0..order {
        let ca = &coeffs[a];
        for b in 0..order {
            let cb = &coeffs[b];
            let s: Vec<usize> = ca.iter().zip(cb).map(|(x, y)| (x + y) % modulus).collect();
            add.push(encode(&s));
            let mut out = vec![0usize; dim];
            for (p, &(i, k)) in cells.iter().enumerate() {
                if ca[p] == 0 {
                    continue;
                }
                for (q, &(k2, j)) in cells.iter().enumerate() {
                    if k2 != k || cb[q] == 0 {
                        continue;
                    }
                    let t = cell_pos(i, j).expect("upper triangular closed");
                    out[t] = (out[t] + ca[p] * cb[q]) % modulus;
                }
            }
            mul.push(encode(&out));
        }
        let nc: Vec<usize> = ca.iter().map(|&c| (modulus - c) % modulus).collect();
        neg.push(encode(&nc));
    }

    let cell_name = |i: usize, j: usize| {
        if size <= 3 {
            format!("e{}{}", i + 1, j + 1)
        } else {
            format!("e{}_{}", i + 1, j + 1)
        }
    };
    let names = (0..order)
        .map(|e| {
            let c = decode(e);
            let mut parts = Vec::new();
            for (p, &(i, j)) in cells.iter().enumerate() {
                match c[p] {
                    0 => {}
                    1 => parts.push(cell_name(i, j)),
                    v => parts.push(format!("{v}*{}", cell_name(i, j))),
                }
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join("+")
            }
        })
        .collect();
    let one = encode(
        &cells
            .iter()
            .map(|&(i, j)| usize::from(i == j))
            .collect::<Vec<_>>(),
    );

    let mut ring = FiniteRing::from_raw(order, add, mul, neg, 0, Some(one))?;
    ring.set_names(names);
    ring.set_symbols(
        cells
            .iter()
            .enumerate()
            .map(|(p, &(i, j))| {
                let mut v = vec![0; dim];
                v[p] = 1;
                (cell_name(i, j), encode(&v))
            })
            .collect(),
    );
    ring.set_structure(Structure::Triangular {
        modulus,
        size,
    });
    Ok(Arc::new(ring))
}

/// Direct product R1 x R2 with componentwise operations.
///
/// Element index: l + order(R1) * r.
pub fn make_product(
    left: &Arc<FiniteRing>,
    right: &Arc<FiniteRing>,
    max_order: usize,
) -> Result<Arc<FiniteRing>, StructureError> {
    let (n1, n2) = (left.order(), right.order());
    let order = n1.checked_mul(n2).ok_or(StructureError::OrderBound {
        order: usize::MAX,
        bound: max_order,
    })?;
    if order > max_order {
        return Err(StructureError::OrderBound {
            order,
            bound: max_order,
        });
    }
    let enc = |l: Elem, r: Elem| l + n1 * r;
    let pairs = || (0..order).flat_map(|a| (0..order).map(move |b| (a, b)));
    let add = pairs()
        .map(|(a, b)| enc(left.add(a % n1, b % n1), right.add(a / n1, b / n1)))
        .collect();
    let mul = pairs()
        .map(|(a, b)| enc(left.mul(a % n1, b % n1), right.mul(a / n1, b / n1)))
        .collect();
    let neg = (0..order)
        .map(|a| enc(left.neg(a % n1), right.neg(a / n1)))
        .collect();
    let zero = enc(left.zero(), right.zero());
    let one = match (left.one(), right.one()) {
        (Some(l), Some(r)) => Some(enc(l, r)),
        _ => None,
    };

    let names = (0..order)
        .map(|a| {
            format!(
                "({},{})",
                left.elem_name(a % n1),
                right.elem_name(a / n1)
            )
        })
        .collect();
    let mut symbols: Vec<(String, Elem)> = Vec::new();
    for (name, e) in left.symbols() {
        symbols.push((name.clone(), enc(*e, right.zero())));
    }
    for (name, e) in right.symbols() {
        let mut candidate = name.clone();
        if symbols.iter().any(|(n, _)| n == &candidate) {
            candidate = format!("{name}.2");
        }
        symbols.push((candidate, enc(left.zero(), *e)));
    }

    let mut ring = FiniteRing::from_raw(order, add, mul, neg, zero, one)?;
    ring.set_names(names);
    ring.set_symbols(symbols);
    ring.set_structure(Structure::Product {
        left: Arc::clone(left),
        right: Arc::clone(right),
    });
    Ok(Arc::new(ring))
}

/// Componentwise derivation (d1, d2) on a product ring.
pub fn product_derivation(
    product: &Arc<FiniteRing>,
    d_left: &Derivation,
    d_right: &Derivation,
) -> Result<Derivation, StructureError> {
    let Structure::Product { left, .. } = product.structure() else {
        return Err(StructureError::EmptyRing);
    };
    let n1 = left.order();
    let table = (0..product.order())
        .map(|a| (d_left.apply(a % n1) + n1 * d_right.apply(a / n1)) as u32)
        .collect();
    Derivation::from_table(Arc::clone(product), table).map_err(|_| StructureError::EmptyRing)
}
