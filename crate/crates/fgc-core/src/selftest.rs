//! The acceptance suite: one executable check per criterion, shared by
//! the CLI `selftest` subcommand and the integration tests.
//!
//! Every check is deterministic for a fixed seed and configuration, and
//! each is expected to finish well inside a minute on commodity hardware.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charclass::{
    genus_cpn, hirzebruch_series, sigma_back_substitute, symmetric_expand, BundleData, ExpClass,
};
use crate::error::Result;
use crate::fgl::FglKind;
use crate::json;
use crate::ring::{GradedRing, RingElement};
use crate::scalar::{BaseRing, Scalar};
use crate::series::TruncSeries;
use crate::tate::{
    beta_coefficient, beta_from_coefficients, tch_on_bundle, tch_via_expansion,
    total_chern_check, TateContext,
};

/// Configuration for a selftest run.
#[derive(Debug, Clone, Default)]
pub struct Config {
    /// Optional cap on the per-criterion orders (the stated orders are
    /// the defaults; lower caps give strictly weaker, subsumed checks).
    pub order_cap: Option<u32>,
    pub seed: u64,
}

impl Config {
    fn order(&self, stated: u32) -> u32 {
        match self.order_cap {
            Some(cap) => stated.min(cap).max(1),
            None => stated,
        }
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

fn run<F>(id: u32, name: &str, f: F) -> Criterion
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let start = Instant::now();
    let (pass, detail) = match f() {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, format!("error: {}", e)),
    };
    Criterion {
        id,
        name: name.to_string(),
        pass,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all(cfg: &Config) -> Vec<Criterion> {
    vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(cfg),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(cfg),
        criterion_7(cfg),
        criterion_8(cfg),
        criterion_9(cfg),
        criterion_10(cfg),
    ]
}

pub fn all_pass(results: &[Criterion]) -> bool {
    results.iter().all(|c| c.pass)
}

/// 1. FGL axiom suite at order 9, plus the broken law's located failure.
pub fn criterion_1(cfg: &Config) -> Criterion {
    let order = cfg.order(9);
    run(1, "fgl axiom suite", move || {
        let mut details = Vec::new();
        for kind in [
            FglKind::Additive,
            FglKind::Multiplicative,
            FglKind::UniversalRational(6),
            FglKind::JacobiQuartic,
        ] {
            let mut law = kind.build(order)?;
            let report = law.verify(order)?;
            if !report.passed() {
                return Ok((
                    false,
                    format!("{} failed: {:?}", law.name(), report.failures),
                ));
            }
            details.push(format!("{} ok to {}", law.name(), order));
        }
        let mut broken = FglKind::BrokenExample.build(order.min(4))?;
        let report = broken.verify(order.min(4))?;
        let located = !report.unital
            && report
                .failures
                .iter()
                .any(|f| f.contains("unitality") && f.contains("x^2"));
        if !located {
            return Ok((
                false,
                format!("broken law not diagnosed: {:?}", report.failures),
            ));
        }
        details.push("broken-example fails unitality at x^2".into());
        Ok((true, details.join("; ")))
    })
}

/// 2. Total Chern reproduction for the additive law, root counts <= 5.
pub fn criterion_2(cfg: &Config) -> Criterion {
    let degree = cfg.order(8);
    let seed = cfg.seed;
    run(2, "total Chern class via t^{-1}", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0201);
        let mut counts: Vec<u32> = (1..=5).collect();
        counts.push(rng.gen_range(1..=5));
        for n in counts {
            let ctx = TateContext::build(
                FglKind::Additive,
                (-((n + degree) as i64), 2),
                degree,
                n,
            )?;
            let v = BundleData::standard_roots(n as usize);
            let report = total_chern_check(&ctx, &v, degree)?;
            if !report.pass {
                return Ok((
                    false,
                    format!("rank {}: {}", n, report.mismatch.unwrap_or_default()),
                ));
            }
        }
        Ok((true, format!("ranks 1..=5 at degree {}", degree)))
    })
}

/// 3. Two-formula agreement: Euler-quotient vs splitting expansion.
pub fn criterion_3(cfg: &Config) -> Criterion {
    let degree = cfg.order(6);
    run(3, "two-formula agreement", move || {
        for kind in [
            FglKind::Additive,
            FglKind::Multiplicative,
            FglKind::UniversalRational(4),
        ] {
            // The heavy-coefficient universal law runs with a smaller
            // positive window; the negative (Chern) side is identical.
            let high = if matches!(kind, FglKind::UniversalRational(_)) {
                3.min(degree as i64)
            } else {
                degree as i64
            };
            for rank in 1..=4u32 {
                let ctx = TateContext::build(
                    kind,
                    (-((rank + degree) as i64), high),
                    degree,
                    rank,
                )?;
                let v = BundleData::standard_roots(rank as usize);
                let a = tch_on_bundle(&ctx, &v)?;
                let b = tch_via_expansion(&ctx, &v)?;
                if !a.eq_to_precision(&b, ctx.window(), degree)? {
                    let diff = a.first_difference(&b, ctx.window(), degree)?;
                    return Ok((
                        false,
                        format!("{} rank {}: {:?}", ctx.law().name(), rank, diff),
                    ));
                }
            }
        }
        Ok((true, format!("ranks 1..=4 at degree {}", degree)))
    })
}

/// 4. The beta series is t^{-1}(1 + a_11 t + ...) with a unit verdict.
pub fn criterion_4(cfg: &Config) -> Criterion {
    let top = cfg.order(3);
    run(4, "beta unit", move || {
        // Universal law: compare against the independently assembled
        // t^{-1} sum a_{1j} t^j and pin a_11 = -2 m1.
        let ctx = TateContext::build(FglKind::UniversalRational(4), (-2, top as i64), 1, 1)?;
        let (beta, unit) = beta_coefficient(&ctx)?;
        if !unit {
            return Ok((false, "universal beta not a unit".into()));
        }
        let direct = beta_from_coefficients(ctx.law(), top)?;
        if !beta.eq_to_precision(&direct, (-2, top as i64 - 1), 0)? {
            return Ok((false, "universal beta disagrees with a_{1j}".into()));
        }
        let m1 = RingElement::generator(ctx.law().ring(), "m1")?;
        let want = m1.mul_scalar(&Scalar::from_i64(BaseRing::Rationals, -2));
        if beta.body(0).constant_term() != want {
            return Ok((
                false,
                format!("a_11 = {} (expected -2*m1)", beta.body(0).constant_term()),
            ));
        }

        // Multiplicative law: exactly t^{-1} + u.
        let ctx = TateContext::build(FglKind::Multiplicative, (-2, top as i64), 1, 1)?;
        let (beta, unit) = beta_coefficient(&ctx)?;
        let u = RingElement::generator(ctx.law().ring(), "u")?;
        let ok = unit
            && beta.body(-1).constant_term().is_one()
            && beta.body(0).constant_term() == u
            && (1..=top as i64).all(|j| beta.body(j).is_zero());
        if !ok {
            return Ok((false, format!("multiplicative beta = {}", beta)));
        }
        Ok((true, "t^{-1}(1 - 2 m1 t + ...) and t^{-1} + u".into()))
    })
}

/// 5. Cocycle suite: the exact multiplicative C^1, random coboundaries
///    at levels 2 and 3, and the simplicial relations.
pub fn criterion_5(cfg: &Config) -> Criterion {
    let degree = cfg.order(6);
    let seed = cfg.seed;
    run(5, "cocycle suite", move || {
        use crate::cnstruct::{bar_differential, bar_face, compose_faces, CnStructure};

        // Exact C^1 for the multiplicative law.
        let mlaw = FglKind::Multiplicative.build(degree + 2)?;
        let u = RingElement::generator(mlaw.ring(), "u")?;
        let f = TruncSeries::one(mlaw.ring(), &["x1"], degree + 2)
            .add(&TruncSeries::var(mlaw.ring(), "x1", degree + 2).mul_element(&u)?)?;
        let mut s = CnStructure::new_plain(1, mlaw.clone(), f)?;
        let report = s.verify(degree + 2)?;
        if !report.passed() {
            return Ok((false, format!("1 + u x: {:?}", report.failures)));
        }

        // Twenty random unit series: ten of arity 1 (level-2 checks) and
        // ten of arity 2 (level-3 checks), over additive and
        // multiplicative laws.
        let alaw = FglKind::Additive.build(degree + 2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0501);
        for law in [&alaw, &mlaw] {
            for case in 0..10 {
                let g1 = random_unit_series(&mut rng, law.ring(), 1, degree);
                let d = bar_differential(&g1, law)?;
                let mut s2 = CnStructure::new_plain(2, law.clone(), d)?;
                let r2 = s2.verify(degree)?;
                if !r2.passed() {
                    return Ok((
                        false,
                        format!("{} level-2 case {}: {:?}", law.name(), case, r2.failures),
                    ));
                }
                // Level 3: the bar differential of a symmetric series is
                // bar-closed and normalized; permutation invariance is not
                // preserved one level up, so the essential conditions are
                // what coboundaries certify.
                let g2 = random_unit_series(&mut rng, law.ring(), 2, degree);
                let d3 = bar_differential(&g2, law)?;
                let mut s3 = CnStructure::new_plain(3, law.clone(), d3)?;
                let r3 = s3.verify(degree)?;
                if !r3.essential_passed() {
                    return Ok((
                        false,
                        format!("{} level-3 case {}: {:?}", law.name(), case, r3.failures),
                    ));
                }
            }
        }

        // Simplicial relations d_i d_j = d_{j-1} d_i for i < j, n <= 3.
        for law in [&alaw, &mlaw] {
            for n in 1..=3usize {
                for j in 0..=(n + 1) {
                    for i in 0..j {
                        let lhs = compose_faces(
                            &bar_face(law, n + 1, i, 4)?,
                            &bar_face(law, n + 2, j, 4)?,
                        )?;
                        let rhs = compose_faces(
                            &bar_face(law, n + 1, j - 1, 4)?,
                            &bar_face(law, n + 2, i, 4)?,
                        )?;
                        for (a, b) in lhs.iter().zip(rhs.iter()) {
                            if !a.eq_to(b, 4)? {
                                return Ok((
                                    false,
                                    format!("simplicial d_{} d_{} at n = {}", i, j, n),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok((true, format!("20 coboundaries at degree {}", degree)))
    })
}

/// 6. Sharp suite: sharps of generated coboundaries verify over the
///    Tate ring; sharp0 satisfies the unit condition for every built-in
///    law.
pub fn criterion_6(cfg: &Config) -> Criterion {
    let degree = cfg.order(6);
    let seed = cfg.seed;
    run(6, "sharp suite", move || {
        use crate::cnstruct::{bar_differential_in_box, sharp, sharp0, CnStructure};

        let window = (-(degree as i64), degree as i64);
        let gen_trunc = degree * 2;
        for kind in [
            FglKind::Additive,
            FglKind::Multiplicative,
            FglKind::JacobiQuartic,
        ] {
            let law = kind.build(gen_trunc)?;
            let ctx = TateContext::new(law.clone(), window, degree)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0601);
            for arity in [1usize, 2] {
                for case in 0..3 {
                    let g = random_unit_series(&mut rng, law.ring(), arity, gen_trunc);
                    let mut caps = BTreeMap::new();
                    for k in 1..=(arity + 1) {
                        caps.insert(format!("x{}", k), degree);
                    }
                    let d = bar_differential_in_box(&g, &law, gen_trunc, &caps)?;
                    let mut s = CnStructure::new_plain(arity + 1, law.clone(), d)?;
                    let rin = s.verify(degree)?;
                    let rin_ok = if arity == 1 {
                        rin.passed()
                    } else {
                        rin.essential_passed()
                    };
                    if !rin_ok {
                        return Ok((
                            false,
                            format!(
                                "{} C^{} input case {}: {:?}",
                                law.name(),
                                arity + 1,
                                case,
                                rin.failures
                            ),
                        ));
                    }
                    let mut sh = sharp(&s, &ctx)?;
                    let rout = sh.verify(degree)?;
                    let rout_ok = if arity == 1 {
                        rout.passed()
                    } else {
                        rout.essential_passed()
                    };
                    if !rout_ok {
                        return Ok((
                            false,
                            format!(
                                "{} sharp C^{} case {}: {:?}",
                                law.name(),
                                arity + 1,
                                case,
                                rout.failures
                            ),
                        ));
                    }
                }
            }
        }

        for kind in [
            FglKind::Additive,
            FglKind::Multiplicative,
            FglKind::UniversalRational(4),
            FglKind::JacobiQuartic,
        ] {
            let ctx = TateContext::build(kind, (-3, 3), 3, 1)?;
            let mut s0 = sharp0(&ctx)?;
            let r0 = s0.verify(3)?;
            if !r0.passed() {
                return Ok((
                    false,
                    format!("sharp0 over {}: {:?}", ctx.law().name(), r0.failures),
                ));
            }
        }
        Ok((true, format!("C^2/C^3 sharps at window [-{0}, {0}]", degree)))
    })
}

/// 7. Twisted Euler classes invert in the Laurent ring.
pub fn criterion_7(cfg: &Config) -> Criterion {
    let degree = cfg.order(4);
    run(7, "tate invertibility", move || {
        for kind in [
            FglKind::Additive,
            FglKind::Multiplicative,
            FglKind::UniversalRational(4),
            FglKind::JacobiQuartic,
        ] {
            for rank in 1..=3u32 {
                // Inversion headroom: degree + 2*rank extra t-orders
                // keep the inverse exact over the whole declared window.
                let ctx = TateContext::build(
                    kind,
                    (-((rank + degree) as i64), degree as i64),
                    degree,
                    degree + 2 * rank,
                )?;
                let v = BundleData::standard_roots(rank as usize);
                let report = crate::tate::check_euler_inverse(&ctx, &v)?;
                if !report.pass {
                    return Ok((
                        false,
                        format!(
                            "{} rank {}: {}",
                            ctx.law().name(),
                            rank,
                            report.mismatch.unwrap_or_default()
                        ),
                    ));
                }
            }
        }
        Ok((true, format!("ranks 1..=3 at degree {}", degree)))
    })
}

/// 8. Genus oracles: Todd, signature, the unit class, and the additive
///    Hirzebruch series.
pub fn criterion_8(cfg: &Config) -> Criterion {
    let top = cfg.order(6);
    run(8, "genus oracles", move || {
        let todd = ExpClass::todd(top + 2)?;
        for n in 0..=top {
            let g = genus_cpn(&todd, n)?;
            if !g.is_one() {
                return Ok((false, format!("Todd genus of P^{} = {}", n, g)));
            }
        }
        let l = ExpClass::l_genus(top)?;
        if top >= 2 && !genus_cpn(&l, 2)?.is_one() {
            return Ok((false, "signature of P^2 != 1".into()));
        }
        let one = ExpClass::one(&GradedRing::rationals(), top + 2);
        for n in 1..=top {
            if !genus_cpn(&one, n)?.is_zero() {
                return Ok((false, format!("unit-class genus of P^{} != 0", n)));
            }
        }
        let add = FglKind::Additive.build(top + 2)?;
        if !hirzebruch_series(&add)?.series().is_one_to(top) {
            return Ok((false, "additive Hirzebruch series != 1".into()));
        }
        Ok((true, format!("Todd/L/unit through P^{}", top)))
    })
}

/// 9. Round-trip and property suite.
pub fn criterion_9(cfg: &Config) -> Criterion {
    let seed = cfg.seed;
    let deg = cfg.order(8);
    run(9, "round-trip suite", move || {
        let ring = GradedRing::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0901);

        // Symmetric expansion round trip on 50 random symmetric inputs.
        for case in 0..50 {
            let n = rng.gen_range(1..=4usize);
            let p = random_symmetric_poly(&mut rng, &ring, n, deg);
            let g = symmetric_expand(&p, n)?;
            let vars: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
            let back = sigma_back_substitute(&g, &vars)?;
            if !back.eq_to(&p, deg)? {
                return Ok((false, format!("symmetric round trip case {}", case)));
            }
        }

        // Inversion, reversion, and square-root round trips.
        for case in 0..50 {
            let trunc = rng.gen_range(3..=7u32);
            match case % 3 {
                0 => {
                    let f = random_unit_series(&mut rng, &ring, 2, trunc);
                    let g = f.invert()?;
                    if !f.mul(&g)?.is_one_to(trunc) {
                        return Ok((false, format!("inversion case {}", case)));
                    }
                }
                1 => {
                    let mut f = TruncSeries::var(&ring, "x", trunc);
                    for k in 2..=trunc {
                        let c = rng.gen_range(-3i64..=3);
                        if c != 0 {
                            f = f.add(&TruncSeries::from_terms(
                                &ring,
                                &["x"],
                                trunc,
                                [(vec![k], RingElement::from_i64(&ring, c))],
                            )?)?;
                        }
                    }
                    let g = f.reversion()?;
                    let mut bind = BTreeMap::new();
                    bind.insert("x".to_string(), g.clone());
                    let fwd = f.substitute(&bind)?;
                    let mut bind2 = BTreeMap::new();
                    bind2.insert("x".to_string(), f.clone());
                    let bwd = g.substitute(&bind2)?;
                    let x = TruncSeries::var(&ring, "x", trunc);
                    if !fwd.eq_to(&x, trunc)? || !bwd.eq_to(&x, trunc)? {
                        return Ok((false, format!("reversion case {}", case)));
                    }
                }
                _ => {
                    let f = random_unit_series(&mut rng, &ring, 1, trunc);
                    let s = f.sqrt()?;
                    if !s.mul(&s)?.eq_to(&f, trunc)? {
                        return Ok((false, format!("sqrt case {}", case)));
                    }
                }
            }
        }

        // Multiplicativity of tch on random splits.
        let d = 3u32;
        for _ in 0..6 {
            let total = rng.gen_range(2..=4u32);
            let split = rng.gen_range(1..total);
            let ctx = TateContext::build(
                FglKind::Multiplicative,
                (-((total + d) as i64), d as i64),
                d,
                total,
            )?;
            let names: Vec<String> = (1..=total).map(|i| format!("x{}", i)).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let vw = BundleData::roots(&refs);
            let v = BundleData::roots(&refs[..split as usize]);
            let w = BundleData::roots(&refs[split as usize..]);
            let lhs = tch_on_bundle(&ctx, &vw)?;
            let rhs = tch_on_bundle(&ctx, &v)?.mul(&tch_on_bundle(&ctx, &w)?)?;
            if !lhs.eq_to_precision(&rhs, ctx.window(), d)? {
                return Ok((false, format!("tch split {}|{}", split, total - split)));
            }
        }
        Ok((true, "50 + 50 + 6 random cases".into()))
    })
}

/// 10. Determinism of canonical emission (the byte-level CLI check
///     lives in the CLI's own integration tests).
pub fn criterion_10(cfg: &Config) -> Criterion {
    let _ = cfg;
    run(10, "canonical output determinism", move || {
        let build = || -> Result<String> {
            let ctx = TateContext::build(FglKind::Multiplicative, (-4, 4), 4, 1)?;
            let ets = crate::tate::euler_tate_series(&ctx)?;
            Ok(json::to_canonical_string(&json::tate_to_json(&ets)))
        };
        let a = build()?;
        let b = build()?;
        if a != b {
            return Ok((false, "repeated canonical serialization differs".into()));
        }
        Ok((true, format!("{} canonical bytes", a.len())))
    })
}

/// A random unit series with bounded small coefficients over `ring`'s
/// generators; symmetric and normalized for arity 2.
pub fn random_unit_series(
    rng: &mut ChaCha8Rng,
    ring: &std::sync::Arc<GradedRing>,
    arity: usize,
    trunc: u32,
) -> TruncSeries {
    let vars: Vec<String> = (1..=arity).map(|i| format!("x{}", i)).collect();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut terms = vec![(vec![0u32; arity], RingElement::one(ring))];
    let coeff = |rng: &mut ChaCha8Rng| -> RingElement {
        let c = rng.gen_range(-3i64..=3);
        if c == 0 {
            return RingElement::zero(ring);
        }
        let mut e = RingElement::from_i64(ring, c);
        if !ring.generators().is_empty() {
            let idx = rng.gen_range(0..ring.generators().len());
            let p = rng.gen_range(0..=2u32);
            let g = RingElement::generator(ring, &ring.generators()[idx].name.clone())
                .expect("generator");
            e = e.mul(&g.pow(p)).expect("same ring");
        }
        e
    };
    match arity {
        1 => {
            for k in 1..=trunc.min(6) {
                let c = coeff(rng);
                if !c.is_zero() {
                    terms.push((vec![k], c));
                }
            }
        }
        2 => {
            // Normalized (every term touches both slots) and symmetric.
            for a in 1..=trunc.min(5) {
                for b in a..=trunc.min(5) {
                    if a + b > trunc.min(6) {
                        continue;
                    }
                    let c = coeff(rng);
                    if c.is_zero() {
                        continue;
                    }
                    terms.push((vec![a, b], c.clone()));
                    if a != b {
                        terms.push((vec![b, a], c));
                    }
                }
            }
        }
        _ => {}
    }
    TruncSeries::from_terms(ring, &var_refs, trunc, terms).expect("random series")
}

/// A random symmetric polynomial: a random polynomial in the elementary
/// symmetric series, expanded back into the variables.
fn random_symmetric_poly(
    rng: &mut ChaCha8Rng,
    ring: &std::sync::Arc<GradedRing>,
    n: usize,
    trunc: u32,
) -> TruncSeries {
    let vars: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut acc = TruncSeries::zero(ring, &var_refs, trunc);
    for _ in 0..4 {
        let mut term = TruncSeries::constant(
            ring,
            &var_refs,
            trunc,
            RingElement::from_i64(ring, rng.gen_range(-4i64..=4)),
        );
        for k in 1..=n {
            let e = rng.gen_range(0..=2u32);
            if e > 0 {
                let ek = crate::charclass::elementary_symmetric(ring, &vars, k, trunc)
                    .expect("elementary symmetric");
                for _ in 0..e {
                    term = term.mul(&ek).expect("product");
                }
            }
        }
        acc = acc.add(&term).expect("sum");
    }
    acc
}
