//! Property suites behind `qprog verify --suite <name>`. Each suite prints
//! one line per check group with the counts it ran; any violation aborts the
//! run with a numeric failure (exit 2).

use std::fmt::Write as _;

use qprog_core::bounds;
use qprog_core::circuit::{self, Geometry};
use qprog_core::lightcone::{self, TradeoffConstants};
use qprog_core::matrixcore::{self, CMat, Ensemble};
use qprog_core::mosim::{self, MeasureEnsemble, ProbeConfig};
use qprog_core::processor;
use qprog_core::repr;
use qprog_core::sched;
use rand::Rng;

use crate::{CliError, Result};

fn fail(suite: &str, detail: String) -> CliError {
    CliError::Numeric(format!("verify {suite}: {detail}"))
}

pub fn run_suite(name: &str, seed: u64) -> Result<String> {
    let mut out = String::new();
    let suites: Vec<&str> = match name {
        "all" => vec!["repr", "bounds", "matrixcore", "circuit", "lightcone", "processor", "mosim"],
        other => vec![other],
    };
    for suite in suites {
        let lines = match suite {
            "repr" => verify_repr()?,
            "bounds" => verify_bounds(seed)?,
            "matrixcore" => verify_matrixcore(seed)?,
            "circuit" => verify_circuit(seed)?,
            "lightcone" => verify_lightcone(seed)?,
            "processor" => verify_processor(seed)?,
            "mosim" => verify_mosim(seed)?,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown suite `{other}` (all|repr|bounds|matrixcore|circuit|lightcone|processor|mosim)"
                )))
            }
        };
        for line in lines {
            let _ = writeln!(out, "[{suite}] {line}");
        }
    }
    out.push_str("verify: all checks passed");
    Ok(out)
}

fn verify_repr() -> Result<Vec<String>> {
    let mut cauchy = 0;
    for d in 1..=4usize {
        for n in 0..=8u64 {
            let mut total = num_bigint::BigUint::from(0u32);
            for lambda in repr::partitions(n, d) {
                let w = repr::weyl_dimension(&lambda, d)
                    .map_err(|e| fail("repr", e.to_string()))?;
                total += &w * &w;
            }
            if total != repr::program_dimension_dn(n, d as u64) {
                return Err(fail("repr", format!("identity failed at d = {d}, n = {n}")));
            }
            cauchy += 1;
        }
    }
    let mut lemma = 0;
    for m in 0..=200u64 {
        for k in 0..=200u64 {
            if repr::binomial_lb_margin(m, k) < 0.0 {
                return Err(fail("repr", format!("binomial bound failed at ({m}, {k})")));
            }
            lemma += 1;
        }
    }
    Ok(vec![
        format!("cauchy-identity checks: {cauchy} exact"),
        format!("binomial-bound checks: {lemma} ok"),
    ])
}

fn verify_bounds(seed: u64) -> Result<Vec<String>> {
    let mut consistency = 0;
    for i in 0..1000u64 {
        let mut rng = sched::rng_for(seed ^ 0xb0b0, i);
        let k = rng.gen_range(1..=3u64);
        let n = rng.gen_range(k..=64);
        let gates = rng.gen_range(0..=200u64);
        let eps = 10f64.powf(rng.gen_range(-6.0..0.0));
        let a = bounds::program_cost_upper(n, k, gates, eps)?.value_bits;
        let b = bounds::covering_log2_brickwork(n, k, gates, eps)?;
        if (a - b).abs() > 1e-9 * b.abs().max(1.0) {
            return Err(fail("bounds", format!("upper/covering mismatch at tuple {i}")));
        }
        consistency += 1;
    }
    let mut monotone = 0;
    let mut prev = f64::INFINITY;
    for i in 0..30 {
        let eps = 10f64.powf(-5.0 + i as f64 * 0.16);
        if eps >= 1.0 / 32.0 {
            break;
        }
        let (_, low) = bounds::optimize_lower(100, eps, 0.5, 64)?;
        if low.value_bits > prev + 1e-9 {
            return Err(fail("bounds", format!("lower bound not monotone at eps = {eps}")));
        }
        prev = low.value_bits;
        monotone += 1;
    }
    Ok(vec![
        format!("upper-vs-covering consistency: {consistency} tuples"),
        format!("epsilon monotonicity points: {monotone}"),
    ])
}

fn verify_matrixcore(seed: u64) -> Result<Vec<String>> {
    let mut sandwich = 0;
    for i in 0..200u64 {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let u = matrixcore::haar_unitary(d, sched::subseed(seed ^ 0x51de, 2 * i));
        let v = matrixcore::haar_unitary(d, sched::subseed(seed ^ 0x51de, 2 * i + 1));
        let dia = matrixcore::diamond_distance_unitary(&u, &v)?;
        let pon = matrixcore::phase_optimized_opnorm(&u, &v)?;
        if dia - pon < -1e-8 || 2.0 * pon - dia < -1e-8 {
            return Err(fail("matrixcore", format!("sandwich violated at pair {i}")));
        }
        sandwich += 1;
    }
    let mut entropy = 0;
    for i in 0..100u64 {
        let mut rng = sched::rng_for(seed ^ 0xe17, i);
        let mix = |rng: &mut rand_chacha::ChaCha12Rng| {
            let u = matrixcore::haar_unitary_with(2, rng);
            let lam: f64 = rng.gen();
            let mut diag = CMat::zeros(2, 2);
            diag[(0, 0)] = num_complex_one(lam);
            diag[(1, 1)] = num_complex_one(1.0 - lam);
            &u * diag * u.adjoint()
        };
        let rho = mix(&mut rng);
        let sigma = mix(&mut rng);
        if matrixcore::afw_slack(&rho, &sigma, 2)? < 0.0 {
            return Err(fail("matrixcore", format!("entropy continuity violated at {i}")));
        }
        entropy += 1;
    }
    let mut holevo = 0;
    for i in 0..20u64 {
        let mut rng = sched::rng_for(seed ^ 0x40e, i);
        let members: Vec<(f64, CMat)> = (0..4)
            .map(|_| {
                let u = matrixcore::haar_unitary_with(2, &mut rng);
                let mut pure = CMat::zeros(2, 2);
                pure[(0, 0)] = num_complex_one(1.0);
                (0.25, &u * pure * u.adjoint())
            })
            .collect();
        let chi = matrixcore::holevo_information(&Ensemble::states(members)?)?;
        if !(-1e-9..=2.0f64.ln() + 1e-9).contains(&chi) {
            return Err(fail("matrixcore", format!("holevo bound violated at {i}")));
        }
        holevo += 1;
    }
    Ok(vec![
        format!("diamond sandwich pairs: {sandwich}"),
        format!("entropy continuity pairs: {entropy}"),
        format!("holevo ensembles: {holevo}"),
    ])
}

fn num_complex_one(x: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(x, 0.0)
}

fn verify_circuit(seed: u64) -> Result<Vec<String>> {
    let mut roundtrips = 0;
    for i in 0..20u64 {
        let n = 2 + (i % 5) as usize;
        let c = circuit::random_brickwork(n, 1 + (i % 3) as usize, 2, Geometry::Line1D, seed ^ i)?;
        let back = circuit::parse_circuit(&circuit::serialize_circuit(&c))?;
        if back != c {
            return Err(fail("circuit", format!("roundtrip mismatch at {i}")));
        }
        roundtrips += 1;
    }
    let mut unitarity = 0;
    for n in [2usize, 4, 6] {
        let c = circuit::random_brickwork(n, 3, 2, Geometry::Line1D, seed ^ 0xc1c)?;
        let u = c.unitary()?;
        if matrixcore::unitarity_defect(&u) > 1e-9 {
            return Err(fail("circuit", format!("unitarity defect at N = {n}")));
        }
        unitarity += 1;
    }
    Ok(vec![
        format!("serialize/parse roundtrips: {roundtrips}"),
        format!("dense unitarity checks: {unitarity}"),
    ])
}

fn verify_lightcone(seed: u64) -> Result<Vec<String>> {
    let mut replays = 0;
    for i in 0..20u64 {
        let n = 3 + (i % 5) as usize;
        let depth = 1 + (i % 4) as usize;
        let c = circuit::random_brickwork(n, depth, 2, Geometry::Line1D, seed ^ (0xfade + i))?;
        let w = 1 + (i as usize % depth);
        let dec = lightcone::decompose(&c, w)?;
        let report = lightcone::verify_decomposition(&c, &dec)?;
        if !report.disjoint || !report.order_ok || report.unitary_gap > 1e-9 {
            return Err(fail("lightcone", format!("replay failed at circuit {i}")));
        }
        replays += 1;
    }
    let r = lightcone::generic_tradeoff(64, 4, 2, 0.1, TradeoffConstants::default())?;
    if !(r.reduced_bits.is_finite() && r.primitive_bits.is_finite()) {
        return Err(fail("lightcone", "trade-off produced non-finite values".into()));
    }
    Ok(vec![format!("decomposition replays: {replays}"), "trade-off formulas: finite".into()])
}

fn verify_processor(seed: u64) -> Result<Vec<String>> {
    let net = processor::build_net_u2(0.3)?;
    let cert = net.audit(2000, seed ^ 0xa0d1)?;
    if cert.max_observed_gap > net.target_eps {
        return Err(fail(
            "processor",
            format!("coverage gap {} exceeds radius", cert.max_observed_gap),
        ));
    }
    for t in (0..net.len()).step_by((net.len() as usize / 64).max(1)) {
        let (found, gap) = net.nearest(&net.element(t)?)?;
        if found != t || gap > 1e-9 {
            return Err(fail("processor", format!("idempotence failed at element {t}")));
        }
    }
    let c = circuit::random_brickwork(4, 3, 1, Geometry::Line1D, seed ^ 0x9a9a)?;
    let p = processor::program_circuit(&c, 0.5)?;
    if p.achieved_error > 0.5 {
        return Err(fail("processor", format!("achieved error {}", p.achieved_error)));
    }
    Ok(vec![
        format!("net coverage audit: 2000 samples, max gap {:.4}", cert.max_observed_gap),
        "nearest-element idempotence: ok".into(),
        format!("programmed test circuit error: {:.4} <= 0.5", p.achieved_error),
    ])
}

fn verify_mosim(seed: u64) -> Result<Vec<String>> {
    let group = mosim::clifford_group_u2();
    if group.len() != 24 {
        return Err(fail("mosim", format!("clifford group size {}", group.len())));
    }
    let m4: f64 = group
        .iter()
        .map(|c| (c[(0, 0)] + c[(1, 1)]).norm().powi(4))
        .sum::<f64>()
        / group.len() as f64;
    if (m4 - 2.0).abs() > 1e-9 {
        return Err(fail("mosim", format!("2-design moment {m4}")));
    }
    let cfg = ProbeConfig::uniform(1).map_err(|e| fail("mosim", e.to_string()))?;
    let u = matrixcore::haar_unitary(2, seed ^ 3);
    let est = mosim::estimate_p(&u, &cfg, 0, MeasureEnsemble::Clifford, 0)
        .map_err(|e| fail("mosim", e.to_string()))?;
    if (est.p_hat - 1.0 / 3.0).abs() > 1e-9 {
        return Err(fail("mosim", format!("clifford estimate {}", est.p_hat)));
    }
    Ok(vec![
        "clifford group: 24 elements, closed, exact 2-design".into(),
        format!("exact depolarizing coefficient: {:.6}", est.p_hat),
    ])
}
