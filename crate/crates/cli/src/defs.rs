//! Line-based ring and derivation definitions.
//!
//! Rings: `zn 4`, `truncpoly mod=2 exps=2,3`, `table n=4 add=... mul=...`
//! with semicolon-separated rows and comma-separated indices. Derivations:
//! `zero`, `inner c=<element-expr>`, `table 0,0,1,1`.

use pdo_core::ring::{
    make_truncated_poly, make_zn, Derivation, FiniteRing, Structure, StructureError,
};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DefError {
    #[error("unknown ring form '{0}'; known forms: zn, truncpoly, table")]
    UnknownRingForm(String),
    #[error("unknown derivation form '{0}'; known forms: zero, inner, table")]
    UnknownDerivationForm(String),
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("bad value for {key}: '{value}'")]
    BadValue { key: &'static str, value: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("table ring fails validation: {0}")]
    RingAxioms(String),
    #[error("derivation fails validation: {0}")]
    DerivationAxioms(String),
    #[error("{0}")]
    Derivation(String),
}

pub fn parse_ring(args: &str, max_order: usize) -> Result<(Arc<FiniteRing>, String), DefError> {
    let parts: Vec<&str> = args.split_whitespace().collect();
    match parts.as_slice() {
        ["zn", n] => {
            let n: usize = n.parse().map_err(|_| DefError::BadValue {
                key: "zn",
                value: n.to_string(),
            })?;
            let ring = make_zn(n, max_order)?;
            Ok((ring, format!("Z_{n}")))
        }
        ["truncpoly", rest @ ..] => {
            let modulus: usize = parse_kv(rest, "mod")?;
            let exps: Vec<usize> = parse_kv_list(rest, "exps")?;
            let ring = make_truncated_poly(modulus, &exps, max_order)?;
            let desc = truncpoly_desc(&ring);
            Ok((ring, desc))
        }
        ["table", rest @ ..] => {
            let n: usize = parse_kv(rest, "n")?;
            if n > max_order {
                return Err(StructureError::OrderBound {
                    order: n,
                    bound: max_order,
                }
                .into());
            }
            let add = parse_rows(rest, "add")?;
            let mul = parse_rows(rest, "mul")?;
            let ring = FiniteRing::from_add_mul(n, add, mul)?;
            let validation = ring.validate();
            if let Some(first) = validation.violations.first() {
                return Err(DefError::RingAxioms(first.to_string()));
            }
            Ok((Arc::new(ring), format!("table ring of order {n}")))
        }
        [form, ..] => Err(DefError::UnknownRingForm((*form).to_string())),
        [] => Err(DefError::Missing("ring form (zn, truncpoly, table)")),
    }
}

pub fn parse_derivation_table(list: &str, ring: &Arc<FiniteRing>) -> Result<Derivation, DefError> {
    let values: Result<Vec<u32>, _> = list
        .split(',')
        .map(|v| v.trim().parse::<u32>())
        .collect();
    let values = values.map_err(|_| DefError::BadValue {
        key: "table",
        value: list.to_string(),
    })?;
    let d = Derivation::from_table(Arc::clone(ring), values)
        .map_err(|e| DefError::Derivation(e.to_string()))?;
    checked(d)
}

/// Rejects maps that are not additive or break the Leibniz rule.
pub fn checked(d: Derivation) -> Result<Derivation, DefError> {
    match d.validate().first() {
        Some(v) => Err(DefError::DerivationAxioms(v.to_string())),
        None => Ok(d),
    }
}

fn find_kv<'a>(parts: &[&'a str], key: &'static str) -> Result<&'a str, DefError> {
    parts
        .iter()
        .find_map(|p| p.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or(DefError::Missing(key))
}

fn parse_kv(parts: &[&str], key: &'static str) -> Result<usize, DefError> {
    let raw = find_kv(parts, key)?;
    raw.parse().map_err(|_| DefError::BadValue {
        key,
        value: raw.to_string(),
    })
}

fn parse_kv_list(parts: &[&str], key: &'static str) -> Result<Vec<usize>, DefError> {
    let raw = find_kv(parts, key)?;
    raw.split(',')
        .map(|v| v.trim().parse())
        .collect::<Result<Vec<usize>, _>>()
        .map_err(|_| DefError::BadValue {
            key,
            value: raw.to_string(),
        })
}

/// `r00,r01;r10,r11` flattened row-major; size checks happen downstream.
fn parse_rows(parts: &[&str], key: &'static str) -> Result<Vec<usize>, DefError> {
    let raw = find_kv(parts, key)?;
    raw.split(';')
        .flat_map(|row| row.split(','))
        .map(|v| v.trim().parse())
        .collect::<Result<Vec<usize>, _>>()
        .map_err(|_| DefError::BadValue {
            key,
            value: raw.to_string(),
        })
}

fn truncpoly_desc(ring: &FiniteRing) -> String {
    let Structure::TruncPoly(meta) = ring.structure() else {
        return "truncated polynomial ring".to_string();
    };
    let gens: Vec<String> = (0..meta.exponents.len())
        .map(|g| meta.generator_name(g))
        .collect();
    let rels: Vec<String> = meta
        .exponents
        .iter()
        .enumerate()
        .map(|(g, e)| format!("{}^{}", meta.generator_name(g), e))
        .collect();
    format!(
        "Z_{}[{}]/({})",
        meta.modulus,
        gens.join(","),
        rels.join(",")
    )
}
