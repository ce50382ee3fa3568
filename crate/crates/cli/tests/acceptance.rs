//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion. Exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use qpc_cli::commands::{cmd_efficiency, cmd_run, ScenarioOptions};
use qpc_core::adversary::{estimate_detection_probability, AttackKind, AttackScenario};
use qpc_core::analysis::stats::{chi_square_uniform, two_proportion_test};
use qpc_core::analysis::ReportFormat;
use qpc_core::protocol::{run_protocol, ForcedRandomness, Link, PrivacyVector, ProtocolConfig};
use qpc_core::qudit::{audit_x_covariance, audit_z_shift, qft_matrix, shift_operator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn golden_example() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut opts = ScenarioOptions::new("paper-example");
    opts.out = Some(dir.path().to_path_buf());
    let start = Instant::now();
    let run = cmd_run(&opts, &mut std::io::sink()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = [
        ("w0", "(4,7)"),
        ("w1", "(2,6)"),
        ("w2", "(6,2)"),
        ("pbar0", "(6,7)"),
        ("pbar1", "(0,6)"),
        ("pbar2", "(5,2)"),
        ("t0", "(1,5)"),
        ("t1", "(2,3)"),
        ("t2", "(2,4)"),
        ("t(0,1)", "(8,2)"),
        ("s(0,1)", "(-1,1)"),
        ("s(1,2)", "(0,-1)"),
        ("R1", "0<1=2"),
        ("R2", "1<2<0"),
    ];
    let outcome = std::fs::read_to_string(dir.path().join("outcome.txt")).map_err(|e| e.to_string())?;
    for (key, value) in expected {
        let line = format!("{key}={value}");
        check(outcome.lines().any(|l| l == line), format!("outcome.txt lacks `{line}`"))?;
    }
    check(run.exit_code() == 0, "run did not complete")?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("{} values match, {elapsed:.2?}", expected.len()))
}

fn sorted_chain(values: &[usize]) -> String {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by_key(|&i| (values[i], i));
    let mut out = idx[0].to_string();
    for w in idx.windows(2) {
        out.push(if values[w[0]] == values[w[1]] { '=' } else { '<' });
        out.push_str(&w[1].to_string());
    }
    out
}

fn ordering_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    let cases: Vec<(usize, usize, usize, u64)> = (0..1000)
        .map(|_| {
            let d = [3, 5, 7, 9, 11, 13][rng.random_range(0..6)];
            (d, rng.random_range(3..=5), rng.random_range(1..=8), rng.random())
        })
        .collect();
    let start = Instant::now();
    let mismatches: usize = cases
        .par_iter()
        .map(|&(d, k, m, seed)| {
            let config = ProtocolConfig::with_modulus(d, k, m).unwrap().seed(seed);
            let mut prng = ChaCha8Rng::seed_from_u64(seed);
            let privacies: Vec<_> = (0..k).map(|i| PrivacyVector::random(i, m, config.l, &mut prng)).collect();
            let out = run_protocol::<f64>(&config, &privacies, &ForcedRandomness::default(), None).unwrap();
            let Some(done) = out.completed() else { return m };
            (0..m)
                .filter(|&j| {
                    let column: Vec<usize> = privacies.iter().map(|p| p.values[j]).collect();
                    done.outcome.relations[j].to_string() != sorted_chain(&column)
                })
                .count()
        })
        .sum();
    let elapsed = start.elapsed();
    check(mismatches == 0, format!("{mismatches} indices disagree with the plaintext sort"))?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("1000 runs, every index matches, {elapsed:.2?}"))
}

fn collapse_uniformity() -> Outcome {
    let config = ProtocolConfig::with_modulus(5, 3, 1).unwrap();
    let privacies: Vec<_> = (0..3).map(|i| PrivacyVector::new(i, vec![i], 2).unwrap()).collect();
    let values: Vec<usize> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let out = run_protocol::<f64>(&config.clone().seed(seed), &privacies, &ForcedRandomness::default(), None).unwrap();
            out.completed().unwrap().common_values[0].unwrap()
        })
        .collect();
    let mut counts = [0u64; 5];
    for v in values {
        counts[v] += 1;
    }
    let test = chi_square_uniform(&counts);
    check(test.passes(0.01), format!("counts {counts:?}, p = {:.4}", test.p_value))?;
    Ok(format!("counts {counts:?}, chi2 = {:.3}, p = {:.4}", test.statistic, test.p_value))
}

fn eve_detection() -> Outcome {
    let start = Instant::now();
    let single = ProtocolConfig::new(4, 3, 1).unwrap().decoys(1);
    let r1 = estimate_detection_probability(&AttackScenario::new(AttackKind::ExternalInterceptResend, 10_000, 0xacce_0004), &single)
        .map_err(|e| e.to_string())?;
    check((r1.detection_rate - 4.0 / 9.0).abs() <= 0.02, format!("one decoy: rate {:.4}", r1.detection_rate))?;

    let ten = ProtocolConfig::new(4, 3, 1).unwrap().decoys(10);
    let r10 = estimate_detection_probability(&AttackScenario::new(AttackKind::ExternalInterceptResend, 10_000, 0xacce_0014), &ten)
        .map_err(|e| e.to_string())?;
    let escapes = r10.trials - r10.detections;
    let derived_escape = (10.0f64 / 18.0).powi(10);
    check((1.0 - r10.derived_formula() - derived_escape).abs() < 1e-15, "derived formula")?;
    check(r10.consistent_with(r10.derived_formula(), 3.0), format!("ten decoys: {escapes} escapes vs expected {:.1}", 1e4 * derived_escape))?;
    check(!r10.consistent_with(r10.printed_formula(), 3.0), "printed formula not rejected")?;
    let records = r10.records();
    let field = |k: &str| records.iter().find(|(key, _)| key == k).map(|(_, v)| v.clone()).unwrap_or_default();
    check(field("derived_within_3sd") == "yes" && field("printed_within_3sd") == "no", "report does not show the disagreement")?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "one decoy {:.4}; ten decoys {escapes} escapes/10^4 (derived {:.1}, printed {:.1}), {elapsed:.2?}",
        r1.detection_rate,
        1e4 * derived_escape,
        1e4 * (8.0f64 / 18.0).powi(10)
    ))
}

fn tp_masking() -> Outcome {
    let (d, k, m) = (5, 3, 2);
    let p = [[0, 2], [1, 1], [2, 0]];
    let config = ProtocolConfig::with_modulus(d, k, m).unwrap();
    let privacies: Vec<_> = p.iter().enumerate().map(|(i, v)| PrivacyVector::new(i, v.to_vec(), 2).unwrap()).collect();
    let runs: Vec<(Vec<Vec<usize>>, bool)> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let out = run_protocol::<f64>(&config.clone().seed(seed), &privacies, &ForcedRandomness::default(), None).unwrap();
            let done = out.completed().unwrap();
            let exact = done.outcome.differences.iter().all(|(&(i, i2), diff)| (0..m).all(|j| diff[j] == (p[i][j] + d - p[i2][j]) % d));
            (done.outcome.t.clone(), exact)
        })
        .collect();
    let exact = runs.iter().filter(|(_, e)| *e).count();
    check(exact == runs.len(), format!("differences exact in {exact}/{} runs", runs.len()))?;
    let mut worst = 1.0f64;
    for i in 0..k {
        for j in 0..m {
            let mut counts = vec![0u64; d];
            for (t, _) in &runs {
                counts[t[i][j]] += 1;
            }
            let test = chi_square_uniform(&counts);
            check(test.passes(0.01), format!("t[{i}][{j}] counts {counts:?}, p = {:.4}", test.p_value))?;
            worst = worst.min(test.p_value);
        }
    }
    Ok(format!("{} marginals uniform (min p = {worst:.4}), differences exact in all runs", k * m))
}

fn efficiency_table() -> Outcome {
    let text = cmd_efficiency("3..10", ReportFormat::Text).map_err(|e| e.to_string())?;
    let blocks: Vec<&str> = text.split("\n\n").collect();
    check(blocks.len() == 8, format!("{} blocks", blocks.len()))?;
    for (block, k) in blocks.iter().zip(3u64..) {
        let expected = [("CTH2013", 3), ("HHH2017", 8), ("LYS2014", 3), ("HHG2015", 6), ("Ours", 3)];
        for (name, factor) in expected {
            let line = block.lines().find(|l| l.starts_with(&format!("{name}, "))).ok_or(format!("k={k}: no {name} row"))?;
            let eta: Ratio<u64> = line.split(", ").nth(1).unwrap().parse().map_err(|_| format!("k={k}: bad eta `{line}`"))?;
            check(eta == Ratio::new(1, factor * k), format!("k={k} {name}: {eta}"))?;
        }
    }
    Ok("5 protocols x k=3..10 exact".into())
}

fn engine_algebra() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=13 {
        worst = worst.max(qft_matrix::<f64>(d).unwrap().unitarity_deviation());
        for r in 0..d {
            worst = worst.max(shift_operator::<f64>(d, r).unwrap().unitarity_deviation());
        }
    }
    check(worst < 1e-10, format!("unitarity deviation {worst:e}"))?;
    let z = audit_z_shift::<f64>(13).map_err(|e| e.to_string())?;
    check(z.all_hold(), format!("Z law holds for {}/{}", z.holding(), z.verdicts.len()))?;
    let x = audit_x_covariance::<f64>(13).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut opts = ScenarioOptions::new("paper-example");
    opts.out = Some(dir.path().to_path_buf());
    opts.format = ReportFormat::Records;
    cmd_run(&opts, &mut std::io::sink()).map_err(|e| e.to_string())?;
    let report = std::fs::read_to_string(dir.path().join("report.records")).map_err(|e| e.to_string())?;
    let section = report.split("[shift covariance audit X-basis]").nth(1).ok_or("report lacks the X-basis audit")?;
    for d in 2..=13 {
        check(section.contains(&format!("d={d} verdicts=")), format!("report lacks d={d} X verdicts"))?;
    }
    Ok(format!(
        "max deviation {worst:.1e}; Z law {}/{}; X audit recorded ({}/{} hold)",
        z.holding(),
        z.verdicts.len(),
        x.holding(),
        x.verdicts.len()
    ))
}

fn dishonest_participant() -> Outcome {
    let config = ProtocolConfig::new(4, 3, 2).unwrap().decoys(1);
    let trials = 10_000;
    let insider = AttackScenario { target: 0, victim: 1, ..AttackScenario::new(AttackKind::DishonestParticipant, trials, 0xacce_0008) };
    let outsider = AttackScenario { target: 1, link: Link::Return, ..AttackScenario::new(AttackKind::ExternalInterceptResend, trials, 0xacce_0018) };
    let a = estimate_detection_probability(&insider, &config).map_err(|e| e.to_string())?;
    let b = estimate_detection_probability(&outsider, &config).map_err(|e| e.to_string())?;
    let matched = a.knowledge.get("branch_matched").copied().unwrap_or(0);
    check(matched == trials, format!("branch matched in {matched}/{trials} trials"))?;
    let p = two_proportion_test(a.detections, a.trials, b.detections, b.trials);
    check(p > 0.01, format!("detection {} vs {} of {trials}, p = {p:.4}", a.detections, b.detections))?;
    Ok(format!("branch matched {matched}/{trials}; detections {} vs {} (p = {p:.3})", a.detections, b.detections))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden example", golden_example),
        ("ordering oracle", ordering_oracle),
        ("collapse uniformity", collapse_uniformity),
        ("eve detection", eve_detection),
        ("tp masking", tp_masking),
        ("efficiency table", efficiency_table),
        ("engine algebra", engine_algebra),
        ("dishonest participant", dishonest_participant),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("[PASS] criterion {} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {} {name}: {detail}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
