//! One suite per verified statement. Each returns a report; hypothesis
//! failures become skip or partial records, never silent passes.

use super::counterexample::{counterexample_growth, GrowthRing, GrowthSeries};
use super::fixtures::Fixture;
use super::{SuiteRun, VerificationReport, VerifyConfig};
use crate::radicals::{
    delta_orbit_set, higher_radideals, is_left_t_nilpotent, nilpotency_index, prime_radical,
    radideal_il_delta, upper_left_annihilator_series, CycleWitness,
};
use crate::ring::{
    all_ideals, delta_compat_witness, delta_ideal_witness, make_truncated_poly, quotient_ring,
    Derivation, Elem, FiniteRing, Ideal, Sidedness, Structure, DEFAULT_MAX_ORDER,
};
use crate::series::{LeadingTerm, PrecisionPolicy, Series, SeriesRing};
use crate::set::ElemSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn series_ring(fx: &Fixture, cfg: &VerifyConfig) -> SeriesRing {
    SeriesRing::new(
        Arc::clone(&fx.ring),
        fx.delta.clone(),
        PrecisionPolicy::new(cfg.floor_drop),
    )
    .expect("fixture derivation lives on the fixture ring")
}

/// Random series shape used everywhere: top in [-3,3], support width up to
/// 6, coefficients uniform over the pool.
fn sample_series(sr: &SeriesRing, rng: &mut ChaCha8Rng, pool: &[Elem]) -> Series {
    let top: i64 = rng.gen_range(-3..=3);
    let width: i64 = rng.gen_range(1..=6);
    let terms: Vec<(i64, Elem)> = (0..width)
        .map(|off| (top - off, pool[rng.gen_range(0..pool.len())]))
        .collect();
    sr.from_terms(&terms).expect("pool elements are in range")
}

/// Distinct values delta^j(a) with their exponents, starting at j = 0,
/// stopping at zero or the first repeat.
fn orbit_chain(delta: &Derivation, a: Elem) -> Vec<(u32, Elem)> {
    let ring = delta.ring();
    let mut out = Vec::new();
    let mut seen = vec![false; ring.order()];
    let mut v = a;
    let mut j = 0u32;
    while v != ring.zero() && !seen[v] {
        seen[v] = true;
        out.push((j, v));
        v = delta.apply(v);
        j += 1;
    }
    out
}

/// First stored nonzero coefficient outside `set`, if any. Coefficients
/// above the window are zero and below the floor are out of scope.
fn known_escape(ring: &FiniteRing, f: &Series, set: &ElemSet) -> Option<(i64, Elem)> {
    f.terms(ring.zero()).find(|&(_, c)| !set.contains(c))
}

fn known_zero(ring: &FiniteRing, f: &Series) -> bool {
    f.terms(ring.zero()).next().is_none()
}

/// The right set aR, with a itself included when there is no identity.
fn right_set(ring: &FiniteRing, a: Elem) -> ElemSet {
    let mut s = ElemSet::from_elems(ring.order(), ring.elements().map(|r| ring.mul(a, r)));
    if ring.one().is_none() {
        s.insert(a);
    }
    s
}

fn cycle_text(ring: &FiniteRing, w: &CycleWitness) -> String {
    w.products[w.repeat_at..]
        .iter()
        .map(|&p| ring.elem_name(p).to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Vanishing transfer: whenever ab = 0, every a*delta^n(b) and
/// delta^m(a)*b vanishes too. Exhaustive over pairs and orbit exponents.
pub fn suite_delta_compat(fx: &Fixture, cfg: &VerifyConfig) -> VerificationReport {
    let mut run = SuiteRun::new("delta_compat", &fx.name, cfg);
    if let Some((a, b)) = delta_compat_witness(&fx.delta) {
        return run.skip(format!(
            "not delta-compatible: witness ({}, {})",
            fx.ring.elem_name(a),
            fx.ring.elem_name(b)
        ));
    }
    let ring = &fx.ring;
    let zero = ring.zero();
    for a in ring.elements() {
        for b in ring.elements() {
            if ring.mul(a, b) != zero {
                continue;
            }
            let mut bad: Option<String> = None;
            for (n, v) in orbit_chain(&fx.delta, b) {
                if ring.mul(a, v) != zero {
                    bad = Some(format!(
                        "a*d^{n}(b) = {}",
                        ring.elem_name(ring.mul(a, v))
                    ));
                    break;
                }
            }
            if bad.is_none() {
                for (m, w) in orbit_chain(&fx.delta, a) {
                    if ring.mul(w, b) != zero {
                        bad = Some(format!(
                            "d^{m}(a)*b = {}",
                            ring.elem_name(ring.mul(w, b))
                        ));
                        break;
                    }
                }
            }
            let case = format!("a={}, b={}", ring.elem_name(a), ring.elem_name(b));
            match bad {
                None => run.pass(),
                Some(got) => run.fail(case, "0".into(), got, "orbit vanishing".into()),
            }
        }
    }
    run.finish()
}

/// Series-level ideal behavior for every two-sided ideal of the fixture:
/// right absorption always holds, left absorption holds exactly for
/// delta-ideals, and nilpotent delta-ideals kill length-k products.
pub fn suite_ideal_lifts(fx: &Fixture, cfg: &VerifyConfig) -> VerificationReport {
    let mut run = SuiteRun::new("ideal_lifts", &fx.name, cfg);
    let mut rng = run.rng();
    let sr = series_ring(fx, cfg);
    let ring = &fx.ring;
    let ideals = all_ideals(ring, Sidedness::TwoSided);
    let per = (cfg.trials / ideals.len().max(1)).max(8);
    let ring_pool: Vec<Elem> = ring.elements().collect();

    for ideal in &ideals {
        let label = ring.display_set(ideal.members());
        let pool: Vec<Elem> = ideal.iter().collect();

        for _ in 0..per {
            let f = sample_series(&sr, &mut rng, &pool);
            let g = sample_series(&sr, &mut rng, &ring_pool);
            let p = sr.mul(&f, &g);
            match known_escape(ring, &p, ideal.members()) {
                None => run.pass(),
                Some((d, c)) => run.fail(
                    format!("right absorption in {label}"),
                    "coefficients stay in the ideal".into(),
                    format!("{} at degree {d}", ring.elem_name(c)),
                    format!("f={}, g={}", sr.display(&f), sr.display(&g)),
                ),
            }
        }

        match delta_ideal_witness(ideal, &fx.delta) {
            Some(w) => {
                // Not a delta-ideal: left multiplication by x must push some
                // coefficient out, witnessed on w itself since x*w has
                // coefficient delta(w) at degree 0.
                let f = sr.embed_scalar(w).expect("member in range");
                let xf = sr.x_mul(1, &f);
                let escaped = known_escape(ring, &xf, ideal.members()).is_some();
                run.check(
                    escaped,
                    &format!("left absorption fails for non-delta-ideal {label}"),
                    "x*f leaves the ideal",
                    if escaped { "escaped" } else { "stayed inside" },
                    &format!("w={}", ring.elem_name(w)),
                );
            }
            None => {
                for _ in 0..per {
                    let h = sample_series(&sr, &mut rng, &ring_pool);
                    let f = sample_series(&sr, &mut rng, &pool);
                    let hf = sr.mul(&h, &f);
                    let xf = sr.x_mul(1, &f);
                    let ok = known_escape(ring, &hf, ideal.members()).is_none()
                        && known_escape(ring, &xf, ideal.members()).is_none();
                    run.check(
                        ok,
                        &format!("left absorption in delta-ideal {label}"),
                        "coefficients stay in the ideal",
                        if ok { "stayed" } else { "escaped" },
                        &format!("h={}, f={}", sr.display(&h), sr.display(&f)),
                    );
                }
            }
        }

        if delta_ideal_witness(ideal, &fx.delta).is_none() {
            if let Some(k) = nilpotency_index(ideal) {
                for _ in 0..per {
                    let mut prod: Option<Series> = None;
                    let mut factors = Vec::new();
                    for _ in 0..k {
                        let f = sample_series(&sr, &mut rng, &pool);
                        factors.push(sr.display(&f));
                        prod = Some(match prod {
                            None => f,
                            Some(p) => sr.mul(&p, &f),
                        });
                    }
                    let prod = prod.expect("k >= 1");
                    run.check(
                        known_zero(ring, &prod),
                        &format!("length-{k} products over nilpotent {label} vanish"),
                        "0",
                        &sr.display(&prod),
                        &factors.join(" | "),
                    );
                }
            }
        }
    }
    run.finish()
}

/// When aR is left T-nilpotent in a delta-compatible ring, so is every
/// delta^i(a)R along the orbit.
pub fn suite_delta_orbit(fx: &Fixture, cfg: &VerifyConfig) -> VerificationReport {
    let mut run = SuiteRun::new("delta_orbit", &fx.name, cfg);
    if let Some((a, b)) = delta_compat_witness(&fx.delta) {
        return run.skip(format!(
            "not delta-compatible: witness ({}, {})",
            fx.ring.elem_name(a),
            fx.ring.elem_name(b)
        ));
    }
    let ring = &fx.ring;
    for a in ring.elements() {
        if !is_left_t_nilpotent(ring, &right_set(ring, a)).is_t_nilpotent() {
            continue;
        }
        for (i, v) in orbit_chain(&fx.delta, a) {
            let verdict = is_left_t_nilpotent(ring, &right_set(ring, v));
            match verdict.witness() {
                None => run.pass(),
                Some(w) => run.fail(
                    format!("d^{i}(a)R with a={}", ring.elem_name(a)),
                    "left T-nilpotent".into(),
                    "cycle".into(),
                    cycle_text(ring, w),
                ),
            }
        }
    }
    run.finish()
}

/// Left T-nilpotent delta-ideals lift: length-k products of I-coefficient
/// series vanish, the annihilator tower of I reaches the top with
/// delta-stable stages, and products drop one tower stage per factor.
pub fn suite_series_tnilp(fx: &Fixture, cfg: &VerifyConfig) -> VerificationReport {
    let mut run = SuiteRun::new("series_tnilp", &fx.name, cfg);
    let mut rng = run.rng();
    let sr = series_ring(fx, cfg);
    let ring = &fx.ring;
    let ideals: Vec<Ideal> = all_ideals(ring, Sidedness::TwoSided)
        .into_iter()
        .filter(|i| delta_ideal_witness(i, &fx.delta).is_none())
        .filter(|i| is_left_t_nilpotent(ring, i.members()).is_t_nilpotent())
        .collect();
    let per = (cfg.trials / ideals.len().max(1)).max(8);

    for ideal in &ideals {
        let label = ring.display_set(ideal.members());
        let pool: Vec<Elem> = ideal.iter().collect();
        let k = match nilpotency_index(ideal) {
            Some(k) => k,
            None => {
                run.fail(
                    format!("nilpotency of T-nilpotent {label}"),
                    "finite index".into(),
                    "power chain stabilized above zero".into(),
                    String::new(),
                );
                continue;
            }
        };

        for _ in 0..per {
            let mut prod: Option<Series> = None;
            for _ in 0..k {
                let f = sample_series(&sr, &mut rng, &pool);
                prod = Some(match prod {
                    None => f,
                    Some(p) => sr.mul(&p, &f),
                });
            }
            let prod = prod.expect("k >= 1");
            run.check(
                known_zero(ring, &prod),
                &format!("length-{k} product over {label}"),
                "0",
                &sr.display(&prod),
                String::new().as_str(),
            );
        }

        // Annihilator tower of I as a ring, with the restricted derivation.
        let sub = ideal.as_ring();
        let d_sub = fx
            .delta
            .restrict_to(Arc::clone(&sub.ring), &sub.embedding)
            .expect("delta-ideal is closed under the derivation");
        let tower = upper_left_annihilator_series(&sub.ring, Some(&d_sub));
        run.check(
            tower.reached_top,
            &format!("tower of {label} reaches the top"),
            "reached",
            if tower.reached_top { "reached" } else { "stalled" },
            &format!("stabilized at step {}", tower.stabilization_step),
        );
        for (alpha, ok) in tower
            .delta_stable
            .as_ref()
            .expect("derivation supplied")
            .iter()
            .enumerate()
        {
            run.check(
                *ok,
                &format!("stage {alpha} of {label} is delta-stable"),
                "stable",
                if *ok { "stable" } else { "escapes" },
                "",
            );
        }
        // stage(alpha) * I lands in stage(alpha - 1), at series level.
        for alpha in 1..tower.stages.len() {
            let upper: Vec<Elem> = tower.stages[alpha].iter().map(|i| sub.embedding[i]).collect();
            let lower = ElemSet::from_elems(
                ring.order(),
                tower.stages[alpha - 1].iter().map(|i| sub.embedding[i]),
            );
            for _ in 0..per.min(16) {
                let f = sample_series(&sr, &mut rng, &upper);
                let g = sample_series(&sr, &mut rng, &pool);
                let p = sr.mul(&f, &g);
                match known_escape(ring, &p, &lower) {
                    None => run.pass(),
                    Some((d, c)) => run.fail(
                        format!("stage drop {alpha} -> {} in {label}", alpha - 1),
                        "coefficients in the lower stage".into(),
                        format!("{} at degree {d}", ring.elem_name(c)),
                        format!("f={}, g={}", sr.display(&f), sr.display(&g)),
                    ),
                }
            }
        }
    }
    run.finish()
}

/// Extends a cycle witness to `len` generators by pumping the cycle part.
fn pump_generators(w: &CycleWitness, len: usize) -> Vec<Elem> {
    let mut gens = w.generators.clone();
    let cycle = &w.generators[w.repeat_at + 1..];
    let mut i = 0usize;
    while gens.len() < len {
        gens.push(cycle[i % cycle.len()]);
        i += 1;
    }
    gens.truncate(len);
    gens
}

/// Both directions of the radideal correspondence at series level.
///
/// Inclusion of the lifted radideal: products interleaving k copies of a
/// radideal-coefficient series with arbitrary series vanish, k being the
/// nilpotency index of the prime radical. Exclusion: for a outside the
/// radideal, the cycle witness lifts to series products whose leading
/// coefficient walks the nonzero prefix products, for every tested length.
pub fn suite_main_theorem(fx: &Fixture, cfg: &VerifyConfig) -> VerificationReport {
    let mut run = SuiteRun::new("main_theorem", &fx.name, cfg);
    let mut rng = run.rng();
    let sr = series_ring(fx, cfg);
    let ring = &fx.ring;

    let p = match prime_radical(ring) {
        Ok(p) => p,
        Err(e) => {
            run.fail(
                "prime radical".into(),
                "an ideal".into(),
                e.to_string(),
                String::new(),
            );
            return run.finish();
        }
    };
    let k = match nilpotency_index(&p) {
        Some(k) => k,
        None => {
            run.fail(
                "nilpotency of the prime radical".into(),
                "finite index".into(),
                "not nilpotent".into(),
                ring.display_set(p.members()),
            );
            return run.finish();
        }
    };
    let rad = radideal_il_delta(ring, &fx.delta);
    run.check(
        rad.members.iter().all(|a| p.contains(a)),
        "radideal sits inside the prime radical",
        "subset",
        "escape",
        &ring.display_set(&rad.members),
    );

    let rad_pool: Vec<Elem> = rad.members.iter().collect();
    let ring_pool: Vec<Elem> = ring.elements().collect();
    for _ in 0..cfg.trials {
        let f = sample_series(&sr, &mut rng, &rad_pool);
        let mut prod = f.clone();
        for i in 1..=k {
            let g = sample_series(&sr, &mut rng, &ring_pool);
            prod = sr.mul(&prod, &g);
            if i < k {
                prod = sr.mul(&prod, &f);
            }
        }
        run.check(
            known_zero(ring, &prod),
            &format!("interleaved length-{k} product over the radideal"),
            "0",
            &sr.display(&prod),
            &format!("f={}", sr.display(&f)),
        );
    }

    for a in ring.elements() {
        if rad.members.contains(a) {
            continue;
        }
        let analysis = delta_orbit_set(ring, &fx.delta, a);
        let w = match analysis.verdict.witness() {
            Some(w) => w,
            None => {
                run.fail(
                    format!("witness for non-member {}", ring.elem_name(a)),
                    "cycle".into(),
                    "T-nilpotent verdict".into(),
                    String::new(),
                );
                continue;
            }
        };
        let gens = pump_generators(w, cfg.witness_len);
        // Recompute the prefix products the series product must realize.
        let mut prods: Vec<Elem> = Vec::new();
        for (i, &s) in gens.iter().enumerate() {
            let next = if i == 0 {
                s
            } else {
                ring.mul(prods[i - 1], s)
            };
            prods.push(next);
        }
        for n in -2i64..=2 {
            let f = sr.from_terms(&[(n, a)]).expect("element in range");
            let mut running: Option<Series> = None;
            let mut failed_at: Option<(usize, String)> = None;
            for (i, &s) in gens.iter().enumerate() {
                let (j, r) = analysis.decomp[s].expect("generator from the union set");
                let mut fj = f.clone();
                for _ in 0..j {
                    fj = sr.delta_series(&fj);
                }
                let factor = match r {
                    Some(r) => sr.mul(&fj, &sr.embed_scalar(r).expect("in range")),
                    None => fj,
                };
                let next = match running {
                    None => factor,
                    Some(p) => sr.mul(&p, &factor),
                };
                let want_deg = n * (i as i64 + 1);
                let want = LeadingTerm::Term {
                    degree: want_deg,
                    coeff: prods[i],
                };
                if next.leading() != want {
                    failed_at = Some((i + 1, format!("{:?}", next.leading())));
                    break;
                }
                running = Some(next);
            }
            let case = format!(
                "witness products for a={}, f=a*x^{n}",
                ring.elem_name(a)
            );
            match failed_at {
                None => run.pass(),
                Some((len, got)) => run.fail(
                    case,
                    "leading term follows the prefix products".into(),
                    got,
                    format!("failed at length {len}, cycle {}", cycle_text(ring, w)),
                ),
            }
        }
    }
    run.finish()
}

/// The ascending radideal chain: stabilization, stage consistency against
/// direct quotients, and prime-radical proxies for the limit.
pub fn suite_higher_and_prime(fx: &Fixture, cfg: &VerifyConfig) -> VerificationReport {
    let mut run = SuiteRun::new("higher_and_prime", &fx.name, cfg);
    let mut rng = run.rng();
    let sr = series_ring(fx, cfg);
    let ring = &fx.ring;

    let chain = match higher_radideals(ring, Some(&fx.delta)) {
        Ok(c) => c,
        Err(e) => return run.partial(format!("chain construction: {e}")),
    };
    run.check(
        chain.stabilization_step <= ring.order(),
        "chain stabilizes within the ring order",
        "bounded",
        "unbounded",
        &format!("step {}", chain.stabilization_step),
    );

    // Stage consistency via direct quotients of the parent, an independent
    // path from the iterated quotients the chain itself used.
    let mut prev = ElemSet::singleton(ring.order(), ring.zero());
    for (idx, stage) in chain.stages.iter().enumerate() {
        let ideal = match Ideal::new(Arc::clone(ring), prev.clone(), Sidedness::TwoSided) {
            Ok(i) => i,
            Err(e) => return run.partial(format!("stage {idx} not an ideal: {e}")),
        };
        let data = match quotient_ring(&ideal, Some(&fx.delta)) {
            Ok(d) => d,
            Err(e) => return run.partial(format!("stage {idx} quotient: {e}")),
        };
        let induced = data.induced.expect("delta-stable stage");
        let rad_q = radideal_il_delta(&data.quotient, &induced);
        let pulled = ElemSet::from_elems(
            ring.order(),
            ring.elements()
                .filter(|&e| rad_q.members.contains(data.projection[e])),
        );
        run.check(
            &pulled == stage,
            &format!("stage {} matches the direct quotient", idx + 1),
            &ring.display_set(stage),
            &ring.display_set(&pulled),
            "",
        );
        prev = stage.clone();
    }

    // The limit behaves like a delta prime radical: zero radideal upstairs,
    // vanishing interleaved products downstairs.
    let limit_ideal = match Ideal::new(Arc::clone(ring), chain.limit.clone(), Sidedness::TwoSided)
    {
        Ok(i) => i,
        Err(e) => return run.partial(format!("limit not an ideal: {e}")),
    };
    match quotient_ring(&limit_ideal, Some(&fx.delta)) {
        Ok(data) => {
            let induced = data.induced.expect("delta-stable limit");
            let rad_q = radideal_il_delta(&data.quotient, &induced);
            run.check(
                rad_q.members.len() == 1,
                "quotient by the limit has zero radideal",
                "{0}",
                &data.quotient.display_set(&rad_q.members),
                "",
            );
        }
        Err(e) => return run.partial(format!("limit quotient: {e}")),
    }
    match nilpotency_index(&limit_ideal) {
        Some(k) => {
            let pool: Vec<Elem> = chain.limit.iter().collect();
            let ring_pool: Vec<Elem> = ring.elements().collect();
            for _ in 0..cfg.trials.min(100) {
                let f = sample_series(&sr, &mut rng, &pool);
                let mut prod = f.clone();
                for i in 1..=k {
                    let g = sample_series(&sr, &mut rng, &ring_pool);
                    prod = sr.mul(&prod, &g);
                    if i < k {
                        prod = sr.mul(&prod, &f);
                    }
                }
                run.check(
                    known_zero(ring, &prod),
                    &format!("limit-coefficient products vanish at length {k}"),
                    "0",
                    &sr.display(&prod),
                    &format!("f={}", sr.display(&f)),
                );
            }
        }
        None => run.fail(
            "nilpotency of the limit".into(),
            "finite index".into(),
            "not nilpotent".into(),
            ring.display_set(&chain.limit),
        ),
    }

    if fx.zero_delta {
        match prime_radical(ring) {
            Ok(p) => run.check(
                &chain.limit == p.members(),
                "zero derivation: limit equals the prime radical",
                &ring.display_set(p.members()),
                &ring.display_set(&chain.limit),
                "",
            ),
            Err(e) => run.fail(
                "prime radical".into(),
                "an ideal".into(),
                e.to_string(),
                String::new(),
            ),
        }
    }
    run.finish()
}

/// Nilpotence degree growth in Z_m[a_1..a_n]/(a_i^(i+1)): every generator
/// is nilpotent yet f = sum of a_i x^(1-i) survives k_max powers. Small
/// instances are cross-checked against the table-backed engine.
pub fn suite_counterexample(
    modulus: u32,
    n: usize,
    k_max: u32,
    cfg: &VerifyConfig,
) -> VerificationReport {
    let label = format!("growth_m{modulus}_n{n}");
    let mut run = SuiteRun::new("counterexample", &label, cfg);
    let outcome = match counterexample_growth(modulus, n, k_max) {
        Ok(o) => o,
        Err(e) => return run.skip(e.to_string()),
    };
    for (i, ok) in outcome.generator_nilpotent.iter().enumerate() {
        run.check(
            *ok,
            &format!("a{} vanishes exactly at power {}", i + 1, i + 2),
            "nilpotent with sharp index",
            if *ok { "confirmed" } else { "broken" },
            "",
        );
    }
    for (k, (nonzero, witness)) in outcome.power_nonzero.iter().enumerate() {
        run.check(
            *nonzero,
            &format!("f^{} is nonzero", k + 1),
            "nonzero",
            if *nonzero { witness } else { "vanished" },
            witness,
        );
    }

    // Cross-checks against the table engine at sizes where tables exist.
    for small_n in 1..=n.min(2) {
        let ok = table_cross_check(modulus as usize, small_n, small_n as u32 + 1);
        run.check(
            ok,
            &format!("structured powers match the table engine at n={small_n}"),
            "identical coefficients",
            if ok { "identical" } else { "diverged" },
            "",
        );
        // Generators really are members of the radideal at table scale.
        let exps: Vec<usize> = (1..=small_n).map(|i| i + 1).collect();
        let ring =
            make_truncated_poly(modulus as usize, &exps, DEFAULT_MAX_ORDER).expect("small ring");
        let delta = Derivation::zero(Arc::clone(&ring));
        let rad = radideal_il_delta(&ring, &delta);
        let all_in = ring
            .symbols()
            .iter()
            .all(|(_, e)| rad.members.contains(*e));
        run.check(
            all_in,
            &format!("generators lie in the radideal at n={small_n}"),
            "members",
            if all_in { "members" } else { "outside" },
            &ring.display_set(&rad.members),
        );
    }
    run.finish()
}

/// Raises f to `k_max` powers in both representations and compares every
/// coefficient through the monomial basis.
fn table_cross_check(modulus: usize, n: usize, k_max: u32) -> bool {
    let exps: Vec<usize> = (1..=n).map(|i| i + 1).collect();
    let ring = make_truncated_poly(modulus, &exps, DEFAULT_MAX_ORDER).expect("small ring");
    let meta = match ring.structure() {
        Structure::TruncPoly(meta) => meta.clone(),
        _ => return false,
    };
    let delta = Derivation::zero(Arc::clone(&ring));
    let sr = SeriesRing::new(Arc::clone(&ring), delta, PrecisionPolicy::default())
        .expect("zero derivation");

    let growth = GrowthRing::counterexample(modulus as u32, n).expect("within cap");
    if growth.dim() != meta.dim {
        return false;
    }
    let name = |i: usize| {
        if n == 1 {
            "a".to_string()
        } else {
            format!("a{}", i + 1)
        }
    };
    let table_terms: Vec<(i64, Elem)> = (0..n)
        .map(|i| {
            (
                -(i as i64),
                ring.lookup_symbol(&name(i)).expect("generator named"),
            )
        })
        .collect();
    let f_table = sr.from_terms(&table_terms).expect("valid terms");
    let f_growth = GrowthSeries {
        floor: 1 - n as i64,
        coeffs: (0..n).rev().map(|i| growth.generator(i)).collect(),
    };

    let mut p_table = f_table.clone();
    let mut p_growth = f_growth.clone();
    for _ in 1..k_max {
        p_table = sr.mul(&p_table, &f_table);
        p_growth = p_growth.mul(&growth, &f_growth);
    }

    // Compare over a window safely covering both supports.
    let lo = p_growth.floor.min(p_table.floor()) - 1;
    let hi = p_table.top().max(p_growth.floor + p_growth.coeffs.len() as i64) + 1;
    for d in lo..=hi {
        let t = match p_table.coefficient_at(d, ring.zero()).known() {
            Some(t) => t,
            None => return false,
        };
        // Table element -> coefficient vector over the growth basis.
        let coeffs = meta.decode(t);
        let mut g = growth.zero();
        for (mono, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let exps: Vec<u32> = meta
                .monomial_exponents(mono)
                .into_iter()
                .map(|e| e as u32)
                .collect();
            let idx = match growth.index_of_exponents(&exps) {
                Some(i) => i,
                None => return false,
            };
            g.0[idx] = c as u32;
        }
        if g != p_growth.coefficient_at(&growth, d) {
            return false;
        }
    }
    true
}
