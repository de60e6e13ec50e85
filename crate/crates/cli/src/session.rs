//! Stateful command interpreter behind the binary.
//!
//! One command per line. `#` starts a comment. Every command either prints
//! deterministic text and succeeds, or returns an error that the caller
//! surfaces with a nonzero exit. Rebinding the ring clears all series
//! bindings and resets the derivation to zero.

use crate::defs::{self, DefError};
use crate::expr::{self, EvalError, ParseError};
use pdo_core::radicals::{
    higher_radideals, is_left_t_nilpotent, prime_radical, radideal_il, radideal_il_delta,
    upper_left_annihilator_series, TNilpVerdict,
};
use pdo_core::ring::{ideal_generated, is_delta_ideal, Derivation, Sidedness};
use pdo_core::series::{PrecisionPolicy, Series, SeriesRing};
use pdo_core::verify::{
    default_catalog, reports_to_jsonl, run_all, suite_counterexample, suite_delta_compat,
    suite_delta_orbit, suite_higher_and_prime, suite_ideal_lifts, suite_main_theorem,
    suite_series_tnilp, Fixture, ReportStatus, VerificationReport, VerifyConfig,
};
use pdo_core::{Elem, ElemSet, FiniteRing};
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportFormat::Text => write!(f, "text"),
            ReportFormat::Structured => write!(f, "structured"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CmdError {
    #[error("unknown command '{0}'")]
    UnknownCommand(String),
    #[error("usage: {0}")]
    Usage(&'static str),
    #[error("no ring set; run `ring zn 4` or similar first")]
    NoRing,
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Def(#[from] DefError),
    #[error("{0}")]
    Domain(String),
    #[error("verification failed: {failed} of {total} suites")]
    VerifyFailed { failed: usize, total: usize },
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("output error: {0}")]
    Out(#[from] std::io::Error),
}

pub struct SessionConfig {
    pub seed: u64,
    pub floor_drop: u32,
    pub max_order: usize,
    pub out: Option<PathBuf>,
    pub format: ReportFormat,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            seed: 0,
            floor_drop: 24,
            max_order: 4096,
            out: None,
            format: ReportFormat::Text,
        }
    }
}

pub struct Session {
    ring: Option<Arc<FiniteRing>>,
    delta: Option<Derivation>,
    sring: Option<SeriesRing>,
    bindings: BTreeMap<String, Series>,
    floor_drop: u32,
    seed: u64,
    max_order: usize,
    default_out: Option<PathBuf>,
    format: ReportFormat,
    last_reports: Vec<VerificationReport>,
}

impl Session {
    pub fn new(cfg: SessionConfig) -> Session {
        Session {
            ring: None,
            delta: None,
            sring: None,
            bindings: BTreeMap::new(),
            floor_drop: cfg.floor_drop,
            seed: cfg.seed,
            max_order: cfg.max_order,
            default_out: cfg.out,
            format: cfg.format,
            last_reports: Vec::new(),
        }
    }

    pub fn run_line(&mut self, line: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return Ok(());
        }
        let (cmd, rest) = match line.split_once(char::is_whitespace) {
            Some((c, r)) => (c, r.trim()),
            None => (line, ""),
        };
        match cmd {
            "ring" => self.cmd_ring(rest, out),
            "derivation" => self.cmd_derivation(rest, out),
            "let" => self.cmd_let(rest, out),
            "eval" => self.cmd_eval(rest, out),
            "radical" => self.cmd_radical(rest, out),
            "annseries" => self.cmd_annseries(rest, out),
            "tnilp" => self.cmd_tnilp(rest, out),
            "verify" => self.cmd_verify(rest, out),
            "precision" => self.cmd_precision(rest, out),
            "report" => self.cmd_report(rest, out),
            other => Err(CmdError::UnknownCommand(other.to_string())),
        }
    }

    fn ring(&self) -> Result<&Arc<FiniteRing>, CmdError> {
        self.ring.as_ref().ok_or(CmdError::NoRing)
    }

    fn delta(&self) -> Result<&Derivation, CmdError> {
        self.delta.as_ref().ok_or(CmdError::NoRing)
    }

    fn sring(&self) -> Result<&SeriesRing, CmdError> {
        self.sring.as_ref().ok_or(CmdError::NoRing)
    }

    fn rebuild_series_ring(&mut self) {
        let (Some(ring), Some(delta)) = (&self.ring, &self.delta) else {
            return;
        };
        let policy = PrecisionPolicy::new(self.floor_drop);
        self.sring = Some(
            SeriesRing::new(Arc::clone(ring), delta.clone(), policy)
                .expect("session derivation lives on the session ring"),
        );
    }

    fn eval(&self, src: &str) -> Result<Series, CmdError> {
        let e = expr::parse_expr(src)?;
        Ok(expr::eval_expr(self.sring()?, &self.bindings, &e)?)
    }

    /// Evaluates an expression that must denote a single ring element.
    fn eval_scalar(&self, src: &str) -> Result<Elem, CmdError> {
        let f = self.eval(src)?;
        self.scalar_of(&f)
    }

    fn cmd_ring(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let (ring, desc) = defs::parse_ring(rest, self.max_order)?;
        let unital = if ring.one().is_some() {
            "unital"
        } else {
            "no identity"
        };
        writeln!(out, "ring: {desc}; order {}; {unital}", ring.order())?;
        self.delta = Some(Derivation::zero(Arc::clone(&ring)));
        self.ring = Some(ring);
        self.bindings.clear();
        self.last_reports.clear();
        self.rebuild_series_ring();
        Ok(())
    }

    fn cmd_derivation(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let ring = Arc::clone(self.ring()?);
        let (form, args) = match rest.split_once(char::is_whitespace) {
            Some((f, a)) => (f, a.trim()),
            None => (rest, ""),
        };
        let delta = match form {
            "zero" => Derivation::zero(ring),
            "inner" => {
                let src = args
                    .strip_prefix("c=")
                    .ok_or(CmdError::Usage("derivation inner c=<element-expr>"))?;
                let c = self.eval_scalar(src)?;
                let d = Derivation::inner(ring, c)
                    .map_err(|e| CmdError::Domain(e.to_string()))?;
                defs::checked(d)?
            }
            "table" => defs::parse_derivation_table(args, &ring)?,
            other => return Err(CmdError::Def(DefError::UnknownDerivationForm(
                other.to_string(),
            ))),
        };
        writeln!(out, "derivation: {}", delta.label())?;
        self.delta = Some(delta);
        self.rebuild_series_ring();
        Ok(())
    }

    fn cmd_let(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let (name, src) = rest
            .split_once('=')
            .ok_or(CmdError::Usage("let <name> = <expr>"))?;
        let name = name.trim();
        let valid = !name.is_empty()
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || name == "x" || name == "D" {
            return Err(CmdError::Usage("let <name> = <expr> with an identifier name"));
        }
        if self.ring()?.lookup_symbol(name).is_some() {
            return Err(CmdError::Domain(format!(
                "'{name}' names a ring generator and cannot be rebound"
            )));
        }
        let f = self.eval(src)?;
        writeln!(out, "{name} = {}", self.sring()?.display(&f))?;
        self.bindings.insert(name.to_string(), f);
        Ok(())
    }

    fn cmd_eval(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let f = self.eval(rest)?;
        writeln!(out, "{}", self.sring()?.display(&f))?;
        Ok(())
    }

    fn cmd_radical(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let ring = self.ring()?;
        match rest.trim() {
            "il" => {
                let ideal =
                    radideal_il(ring).map_err(|e| CmdError::Domain(e.to_string()))?;
                writeln!(out, "{}", ring.display_set(ideal.members()))?;
            }
            "ildelta" => {
                let rad = radideal_il_delta(ring, self.delta()?);
                writeln!(out, "{}", ring.display_set(&rad.members))?;
                if !rad.is_ideal {
                    writeln!(out, "note: not an ideal in this ring")?;
                }
                if !rad.is_delta_stable {
                    writeln!(out, "note: not closed under the derivation")?;
                }
            }
            "prime" => {
                let p = prime_radical(ring).map_err(|e| CmdError::Domain(e.to_string()))?;
                writeln!(out, "{}", ring.display_set(p.members()))?;
            }
            "chain" => {
                let chain = higher_radideals(ring, Some(self.delta()?))
                    .map_err(|e| CmdError::Domain(e.to_string()))?;
                for (i, stage) in chain.stages.iter().enumerate() {
                    writeln!(out, "I({}) = {}", i + 1, ring.display_set(stage))?;
                }
                writeln!(
                    out,
                    "limit = {}; stabilized at step {}",
                    ring.display_set(&chain.limit),
                    chain.stabilization_step
                )?;
            }
            _ => return Err(CmdError::Usage("radical il|ildelta|prime|chain")),
        }
        Ok(())
    }

    fn cmd_annseries(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        if rest.is_empty() {
            return Err(CmdError::Usage("annseries <element>[, <element>...]"));
        }
        let gens: Vec<Elem> = expr::parse_expr_list(rest)?
            .iter()
            .map(|e| {
                let f = expr::eval_expr(self.sring()?, &self.bindings, e)?;
                self.scalar_of(&f)
            })
            .collect::<Result<_, _>>()?;
        let ring = Arc::clone(self.ring()?);
        let delta = self.delta()?.clone();
        let ideal = ideal_generated(&ring, &gens, Sidedness::TwoSided);
        writeln!(out, "ideal: {}", ring.display_set(ideal.members()))?;

        let sub = ideal.as_ring();
        let d_sub = if is_delta_ideal(&ideal, &delta) {
            delta.restrict_to(Arc::clone(&sub.ring), &sub.embedding)
        } else {
            writeln!(out, "note: not a delta-ideal; tower computed without derivation")?;
            None
        };
        let tower = upper_left_annihilator_series(&sub.ring, d_sub.as_ref());
        for (alpha, stage) in tower.stages.iter().enumerate() {
            let parent = ElemSet::from_elems(
                ring.order(),
                stage.iter().map(|i| sub.embedding[i]),
            );
            writeln!(out, "I({alpha}) = {}", ring.display_set(&parent))?;
        }
        writeln!(
            out,
            "reached top: {}; stabilized at step {}",
            if tower.reached_top { "yes" } else { "no" },
            tower.stabilization_step
        )?;
        if let Some(flags) = &tower.delta_stable {
            match flags.iter().position(|ok| !ok) {
                None => writeln!(out, "delta-stable: yes")?,
                Some(i) => writeln!(out, "delta-stable: no (stage {i} escapes)")?,
            }
        }
        Ok(())
    }

    fn scalar_of(&self, f: &Series) -> Result<Elem, CmdError> {
        let sr = self.sring()?;
        let zero = sr.ring().zero();
        if *f == sr.zero() {
            return Ok(zero);
        }
        if f.is_exact() && f.floor() == 0 && f.top() == 0 {
            if let Some(a) = f.coefficient_at(0, zero).known() {
                return Ok(a);
            }
        }
        Err(CmdError::Domain(format!(
            "expected a ring element, got the series {}",
            sr.display(f)
        )))
    }

    fn cmd_tnilp(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        if rest.is_empty() {
            return Err(CmdError::Usage("tnilp <element>[, <element>...]"));
        }
        let elems: Vec<Elem> = expr::parse_expr_list(rest)?
            .iter()
            .map(|e| {
                let f = expr::eval_expr(self.sring()?, &self.bindings, e)?;
                self.scalar_of(&f)
            })
            .collect::<Result<_, _>>()?;
        let ring = self.ring()?;
        let set = ElemSet::from_elems(ring.order(), elems);
        match is_left_t_nilpotent(ring, &set) {
            TNilpVerdict::TNilpotent { bound } => {
                writeln!(out, "left T-nilpotent; every product of {bound} factors vanishes")?;
            }
            TNilpVerdict::NotTNilpotent(w) => {
                let cycle: Vec<&str> = w.products[w.repeat_at..]
                    .iter()
                    .map(|&p| ring.elem_name(p))
                    .collect();
                writeln!(out, "NOT left T-nilpotent; cycle: {}", cycle.join(" -> "))?;
            }
        }
        Ok(())
    }

    fn cmd_verify(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let mut parts = rest.split_whitespace();
        let target = parts
            .next()
            .ok_or(CmdError::Usage("verify <suite|all> [--seed N] [--trials N]"))?;
        let mut cfg = VerifyConfig {
            seed: self.seed,
            floor_drop: self.floor_drop,
            ..VerifyConfig::default()
        };
        while let Some(flag) = parts.next() {
            let value = parts
                .next()
                .ok_or(CmdError::Usage("verify <suite|all> [--seed N] [--trials N]"))?;
            match flag {
                "--seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| CmdError::Domain(format!("bad seed '{value}'")))?;
                }
                "--trials" => {
                    cfg.trials = value
                        .parse()
                        .map_err(|_| CmdError::Domain(format!("bad trial count '{value}'")))?;
                }
                _ => return Err(CmdError::Usage("verify <suite|all> [--seed N] [--trials N]")),
            }
        }

        type SuiteFn = fn(&Fixture, &VerifyConfig) -> VerificationReport;
        let suites: &[(&str, SuiteFn)] = &[
            ("delta_compat", suite_delta_compat),
            ("ideal_lifts", suite_ideal_lifts),
            ("delta_orbit", suite_delta_orbit),
            ("series_tnilp", suite_series_tnilp),
            ("main_theorem", suite_main_theorem),
            ("higher_and_prime", suite_higher_and_prime),
        ];
        let catalog = default_catalog();
        let reports: Vec<VerificationReport> = if target == "all" {
            run_all(&catalog, &cfg)
        } else if target == "counterexample" {
            vec![suite_counterexample(2, 3, 3, &cfg)]
        } else if let Some((_, f)) = suites.iter().find(|(n, _)| *n == target) {
            catalog.iter().map(|fx| f(fx, &cfg)).collect()
        } else {
            return Err(CmdError::Domain(format!(
                "unknown suite '{target}'; known: all, counterexample, {}",
                suites
                    .iter()
                    .map(|(n, _)| *n)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        };

        let mut passed = 0usize;
        let mut failed = 0usize;
        let mut skipped = 0usize;
        let mut partial = 0usize;
        for r in &reports {
            writeln!(out, "{}", r.summary_line())?;
            match r.status {
                ReportStatus::Passed => passed += 1,
                ReportStatus::Failed => failed += 1,
                ReportStatus::Skipped { .. } => skipped += 1,
                ReportStatus::Partial { .. } => partial += 1,
            }
        }
        writeln!(
            out,
            "total: {} suites, {passed} passed, {failed} failed, {skipped} skipped, {partial} partial",
            reports.len()
        )?;
        let total = reports.len();
        self.last_reports = reports;
        if failed > 0 {
            return Err(CmdError::VerifyFailed { failed, total });
        }
        Ok(())
    }

    fn cmd_precision(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let drop: u32 = rest
            .trim()
            .parse()
            .map_err(|_| CmdError::Usage("precision <floor-drop>, a positive integer"))?;
        if drop == 0 {
            return Err(CmdError::Usage("precision <floor-drop>, a positive integer"));
        }
        self.floor_drop = drop;
        self.rebuild_series_ring();
        writeln!(out, "precision: floor drop {drop}")?;
        Ok(())
    }

    fn cmd_report(&mut self, rest: &str, out: &mut dyn Write) -> Result<(), CmdError> {
        let mut parts = rest.split_whitespace();
        let mut path: Option<PathBuf> = self.default_out.clone();
        let mut format = self.format;
        while let Some(flag) = parts.next() {
            let value = parts
                .next()
                .ok_or(CmdError::Usage("report --out <path> [--format text|structured]"))?;
            match flag {
                "--out" => path = Some(PathBuf::from(value)),
                "--format" => {
                    format = match value {
                        "text" => ReportFormat::Text,
                        "structured" => ReportFormat::Structured,
                        _ => {
                            return Err(CmdError::Usage(
                                "report --out <path> [--format text|structured]",
                            ))
                        }
                    }
                }
                _ => {
                    return Err(CmdError::Usage(
                        "report --out <path> [--format text|structured]",
                    ))
                }
            }
        }
        let path = path.ok_or(CmdError::Usage(
            "report --out <path> [--format text|structured]",
        ))?;
        if self.last_reports.is_empty() {
            return Err(CmdError::Domain(
                "no verification results to report; run `verify` first".to_string(),
            ));
        }
        let content = match format {
            ReportFormat::Text => {
                let mut s = String::new();
                for r in &self.last_reports {
                    s.push_str(&r.summary_line());
                    s.push('\n');
                }
                s
            }
            ReportFormat::Structured => reports_to_jsonl(&self.last_reports),
        };
        std::fs::write(&path, content).map_err(|source| CmdError::File {
            path: path.display().to_string(),
            source,
        })?;
        writeln!(
            out,
            "report written to {} ({} suites, {format})",
            path.display(),
            self.last_reports.len()
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(session: &mut Session, line: &str) -> Result<String, CmdError> {
        let mut buf = Vec::new();
        session.run_line(line, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    fn fresh() -> Session {
        Session::new(SessionConfig::default())
    }

    #[test]
    fn prime_radical_of_z4() {
        let mut s = fresh();
        run(&mut s, "ring zn 4").unwrap();
        assert_eq!(run(&mut s, "radical prime").unwrap(), "{0, 2}\n");
        assert_eq!(run(&mut s, "radical il").unwrap(), "{0, 2}\n");
    }

    #[test]
    fn tnilp_cycle_text() {
        let mut s = fresh();
        run(&mut s, "ring zn 4").unwrap();
        assert_eq!(
            run(&mut s, "tnilp 1").unwrap(),
            "NOT left T-nilpotent; cycle: 1 -> 1\n"
        );
        assert_eq!(
            run(&mut s, "tnilp 2").unwrap(),
            "left T-nilpotent; every product of 2 factors vanishes\n"
        );
    }

    #[test]
    fn ring_rebinding_clears_bindings() {
        let mut s = fresh();
        run(&mut s, "ring zn 4").unwrap();
        run(&mut s, "let f = 2*x + 1").unwrap();
        assert_eq!(run(&mut s, "eval f*f").unwrap(), "1\n");
        run(&mut s, "ring zn 6").unwrap();
        let err = run(&mut s, "eval f").unwrap_err();
        assert!(matches!(err, CmdError::Eval(EvalError::UnknownIdent { .. })));
    }

    #[test]
    fn derivation_table_session() {
        let mut s = fresh();
        run(&mut s, "ring truncpoly mod=2 exps=2").unwrap();
        run(&mut s, "derivation table 0,0,1,1").unwrap();
        assert_eq!(run(&mut s, "eval x*a").unwrap(), "a*x + 1\n");
        assert_eq!(run(&mut s, "eval x^-1 * a").unwrap(), "a*x^-1 + x^-2\n");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let mut s = fresh();
        assert_eq!(run(&mut s, "  # just a comment").unwrap(), "");
        assert_eq!(run(&mut s, "").unwrap(), "");
        run(&mut s, "ring zn 4 # inline comment").unwrap();
        assert_eq!(run(&mut s, "eval 2 + 2").unwrap(), "0\n");
    }

    #[test]
    fn stateful_preconditions() {
        let mut s = fresh();
        assert!(matches!(
            run(&mut s, "eval 1 + 1").unwrap_err(),
            CmdError::NoRing
        ));
        assert!(matches!(
            run(&mut s, "radical prime").unwrap_err(),
            CmdError::NoRing
        ));
        assert!(matches!(
            run(&mut s, "report --out r.txt").unwrap_err(),
            CmdError::Domain(_)
        ));
        run(&mut s, "ring zn 4").unwrap();
        assert!(matches!(
            run(&mut s, "radical bogus").unwrap_err(),
            CmdError::Usage(_)
        ));
        assert!(matches!(
            run(&mut s, "let x = 1").unwrap_err(),
            CmdError::Usage(_)
        ));
        assert!(matches!(
            run(&mut s, "frobnicate").unwrap_err(),
            CmdError::UnknownCommand(_)
        ));
    }

    #[test]
    fn generator_names_cannot_be_rebound() {
        let mut s = fresh();
        run(&mut s, "ring truncpoly mod=2 exps=2").unwrap();
        assert!(matches!(
            run(&mut s, "let a = 1").unwrap_err(),
            CmdError::Domain(_)
        ));
    }

    #[test]
    fn annseries_tower_of_z8() {
        let mut s = fresh();
        run(&mut s, "ring zn 8").unwrap();
        let text = run(&mut s, "annseries 2").unwrap();
        assert_eq!(
            text,
            "ideal: {0, 2, 4, 6}\nI(0) = {0}\nI(1) = {0, 4}\nI(2) = {0, 2, 4, 6}\nreached top: yes; stabilized at step 2\ndelta-stable: yes\n"
        );
    }

    #[test]
    fn radical_chain_of_truncated_ring() {
        let mut s = fresh();
        run(&mut s, "ring truncpoly mod=2 exps=2").unwrap();
        let text = run(&mut s, "radical chain").unwrap();
        assert_eq!(text, "I(1) = {0, a}\nlimit = {0, a}; stabilized at step 1\n");
    }

    #[test]
    fn verify_single_suite_and_report() {
        let mut s = fresh();
        let text = run(&mut s, "verify counterexample").unwrap();
        assert!(text.contains("counterexample"));
        assert!(text.contains("total: 1 suites, 1 passed, 0 failed, 0 skipped, 0 partial"));

        let dir = std::env::temp_dir().join("pdo-session-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("r.jsonl");
        let line = format!("report --out {} --format structured", path.display());
        let text = run(&mut s, &line).unwrap();
        assert!(text.contains("1 suites, structured"));
        let written = std::fs::read_to_string(&path).unwrap();
        assert!(written.contains("\"suite\":\"counterexample\""));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn inner_derivation_on_commutative_ring_is_zero() {
        let mut s = fresh();
        run(&mut s, "ring zn 4").unwrap();
        let text = run(&mut s, "derivation inner c=2").unwrap();
        assert_eq!(text, "derivation: inner(2)\n");
        assert_eq!(run(&mut s, "eval x*3").unwrap(), "3*x\n");
    }
}
