//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::{Command, Output};

use mixmeas::discrimination::{bayes_optimal_commuting, helstrom};
use mixmeas::infotheory::{holevo_quantity, shannon_entropy, success_probability_bound, von_neumann_entropy};
use mixmeas::statespace::{thermal_state, DiagonalState, HermitianState, ThermalSpec};
use mixmeas::sweep::{run_sweep, Method, SweepConfig, SweepResult, SweepRow};
use mixmeas::thermal_model::{
    bound_closed_form, build_ensemble, low_temperature_approximation, member_entropy_closed_form,
    mixture_entropy_closed_form, threshold_beta, two_level_pc_closed_form, ModelConfig,
};
use mixmeas::{Ensemble, State};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 10f64.powf(lo.log10() + (hi.log10() - lo.log10()) * k as f64 / (n - 1) as f64))
        .collect()
}

fn mixmeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixmeas"))
        .args(args)
        .output()
        .expect("running mixmeas")
}

fn run_to_file(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap();
    full.extend(["--out", out_str]);
    let output = mixmeas(&full);
    check(output.status.success(), format!("{args:?} exited with {:?}", output.status.code()))?;
    std::fs::read(out).map_err(|e| e.to_string())
}

fn parse(bytes: &[u8]) -> Result<SweepResult, String> {
    SweepResult::read_csv(bytes).map_err(|e| e.to_string())
}

fn random_diagonal(rng: &mut ChaCha8Rng, d: usize) -> DiagonalState {
    loop {
        let w: Vec<f64> = (0..d)
            .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
            .collect();
        if w.iter().sum::<f64>() > 0.0 {
            return DiagonalState::from_weights(w).unwrap();
        }
    }
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in log_spaced(0.05, 20.0, 51) {
        let ens = build_ensemble(&ModelConfig::new(beta, 2).unwrap()).map_err(|e| e.to_string())?;
        let s = ens.states();
        let numeric = helstrom(&s[0], &s[1], 0.5).map_err(|e| e.to_string())?;
        worst = worst.max((two_level_pc_closed_form(beta).unwrap() - numeric).abs());
    }
    check(worst < 1e-9, format!("max deviation {worst:e} >= 1e-9"))?;
    Ok(format!("max |closed - numeric| = {worst:.3e} over 51 points"))
}

fn criterion_2(dir: &Path) -> Outcome {
    let bytes = run_to_file(&["fig1", "--beta-max", "20"], &dir.join("fig1_to20.csv"))?;
    let curve = parse(&bytes)?.curve(2, Method::HelstromClosed);
    let first = curve.first().ok_or("empty curve")?;
    let last = curve.last().ok_or("empty curve")?;
    check(first.beta == 1e-3 && last.beta == 20.0, "grid endpoints are not 1e-3 and 20")?;
    check((0.5..=0.501).contains(&first.p_c), format!("p_c(1e-3) = {}", first.p_c))?;
    check((1.0 - 1e-8..=1.0).contains(&last.p_c), format!("p_c(20) = {}", last.p_c))?;
    check(curve.windows(2).all(|w| w[1].p_c > w[0].p_c), "curve not strictly increasing")?;

    // the default grid runs to beta = 100, where p_c rounds to 1 in double precision
    let default = parse(&run_to_file(&["fig1"], &dir.join("fig1_default.csv"))?)?.curve(2, Method::HelstromClosed);
    check(default.windows(2).all(|w| w[1].p_c >= w[0].p_c), "default fig1 curve decreases")?;
    Ok(format!(
        "p_c(1e-3) = {}, p_c(20) = {}, {} points strictly increasing",
        first.p_c,
        last.p_c,
        curve.len()
    ))
}

fn criterion_3() -> Outcome {
    let beta = threshold_beta(0.8).map_err(|e| e.to_string())?;
    check((beta - 2.5f64.ln()).abs() < 1e-6, format!("beta* = {beta}"))?;
    check((beta - 0.916291).abs() < 1e-6, format!("beta* = {beta}"))?;
    let at_one = two_level_pc_closed_form(1.0).unwrap();
    check(at_one > 0.8 && (at_one - 0.8161).abs() < 1e-4, format!("p_c(1) = {at_one}"))?;
    Ok(format!("beta* = {beta:.9} (ln 2.5 = {:.9}); p_c(beta = 1) = {at_one:.6}", 2.5f64.ln()))
}

fn criterion_4(dir: &Path) -> Outcome {
    let result = parse(&run_to_file(&["fig2"], &dir.join("fig2_c4.csv"))?)?;
    let mut notes = Vec::new();
    for levels in [2usize, 4, 8] {
        let target = 1.0 / levels as f64;
        let curve: Vec<SweepRow> = result.curve(levels, Method::HolevoBound);
        check(curve.len() == 101, format!("levels {levels}: {} rows", curve.len()))?;
        let low = bound_closed_form(1e-3, levels).map_err(|e| e.to_string())?;
        check((low - target).abs() <= 1e-3, format!("levels {levels}: bound(1e-3) = {low}"))?;
        check(
            curve[0].beta == 1e-3 && (curve[0].p_c - target).abs() <= 1e-3,
            format!("levels {levels}: curve starts at {}", curve[0].p_c),
        )?;
        let ens = build_ensemble(&ModelConfig::new(20.0, levels).unwrap()).map_err(|e| e.to_string())?;
        let high = success_probability_bound(&ens).map_err(|e| e.to_string())?;
        check(high >= 1.0 - 1e-6, format!("levels {levels}: bound(20) = {high}"))?;
        check(
            curve.windows(2).all(|w| w[1].p_c >= w[0].p_c),
            format!("levels {levels}: curve not monotone"),
        )?;
        notes.push(format!("N+1={levels}: {low:.6} -> {high:.9}"));
    }
    Ok(notes.join("; "))
}

fn criterion_5() -> Outcome {
    let ens = build_ensemble(&ModelConfig::new(5.0, 2).unwrap()).map_err(|e| e.to_string())?;
    let exact = success_probability_bound(&ens).map_err(|e| e.to_string())?;
    let approx = low_temperature_approximation(5.0).unwrap();
    let rel = (exact - approx).abs() / exact;
    check((0.005..=0.05).contains(&rel), format!("relative difference {rel}"))?;
    Ok(format!("bound = {exact:.6}, approximation = {approx:.6}, relative difference = {:.3}%", rel * 100.0))
}

fn criterion_6() -> Outcome {
    let mut worst_member: f64 = 0.0;
    for beta in [0.5, 1.0, 2.0, 5.0] {
        let numeric = von_neumann_entropy(&State::Diagonal(thermal_state(&ThermalSpec::new(beta).unwrap()).unwrap()))
            .map_err(|e| e.to_string())?;
        worst_member = worst_member.max((member_entropy_closed_form(beta).unwrap() - numeric).abs());
    }
    check(worst_member < 1e-9, format!("member entropy deviation {worst_member:e}"))?;
    let mut worst_mixture: f64 = 0.0;
    for levels in [2usize, 4, 8] {
        for beta in [0.5, 1.0, 2.0] {
            let ens = build_ensemble(&ModelConfig::new(beta, levels).unwrap()).map_err(|e| e.to_string())?;
            let numeric = von_neumann_entropy(&ens.average_state().unwrap()).map_err(|e| e.to_string())?;
            let closed = mixture_entropy_closed_form(beta, levels).map_err(|e| e.to_string())?;
            worst_mixture = worst_mixture.max((closed - numeric).abs());
        }
    }
    check(worst_mixture < 1e-8, format!("mixture entropy deviation {worst_mixture:e}"))?;
    Ok(format!("member max dev {worst_member:.2e}, mixture max dev {worst_mixture:.2e}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d = rng.gen_range(1..=32);
        let r0 = State::Diagonal(random_diagonal(&mut rng, d));
        let d1 = rng.gen_range(1..=32);
        let r1 = State::Diagonal(random_diagonal(&mut rng, d1));
        let p0: f64 = rng.gen();
        let ens = Ensemble::new(vec![(p0, r0.clone()), (1.0 - p0, r1.clone())]).map_err(|e| e.to_string())?;
        let a = helstrom(&r0, &r1, p0).map_err(|e| e.to_string())?;
        let b = bayes_optimal_commuting(&ens).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs());
    }
    check(worst < 1e-10, format!("max deviation {worst:e}"))?;
    Ok(format!("1000 pairs, max |helstrom - bayes| = {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut min_slack = f64::INFINITY;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=8);
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let members = raw
            .iter()
            .map(|w| {
                let d = rng.gen_range(1..=32);
                (w / total, State::Diagonal(random_diagonal(&mut rng, d)))
            })
            .collect();
        let ens = Ensemble::new(members).map_err(|e| e.to_string())?;
        let h = holevo_quantity(&ens).map_err(|e| e.to_string())?;
        let cap = shannon_entropy(ens.priors()).unwrap().min((ens.dim() as f64).ln());
        check(h >= 0.0, format!("H = {h} < 0"))?;
        check(h <= cap + 1e-9, format!("H = {h} exceeds {cap}"))?;
        min_slack = min_slack.min(cap - h);
    }
    Ok(format!("1000 ensembles, min(cap - H) = {min_slack:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for c in [0.0, 0.25, 0.5, 0.9, 1.0] {
        let psi0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let psi1 = [Complex64::new(c, 0.0), Complex64::new((1.0 - c * c).sqrt(), 0.0)];
        let r0 = State::Dense(HermitianState::pure(&psi0).map_err(|e| e.to_string())?);
        let r1 = State::Dense(HermitianState::pure(&psi1).map_err(|e| e.to_string())?);
        let value = helstrom(&r0, &r1, 0.5).map_err(|e| e.to_string())?;
        worst = worst.max((value - 0.5 * (1.0 + (1.0 - c * c).sqrt())).abs());
    }
    check(worst < 1e-10, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e} over c in {{0, 0.25, 0.5, 0.9, 1}}"))
}

fn criterion_10(dir: &Path) -> Outcome {
    for (fig, config) in [("fig1", SweepConfig::fig1()), ("fig2", SweepConfig::fig2())] {
        let a = run_to_file(&[fig], &dir.join(format!("{fig}_a.csv")))?;
        let b = run_to_file(&[fig], &dir.join(format!("{fig}_b.csv")))?;
        check(a == b, format!("{fig}: outputs differ between runs"))?;
        let sequential = run_to_file(&["--sequential", fig], &dir.join(format!("{fig}_seq.csv")))?;
        check(a == sequential, format!("{fig}: sequential output differs"))?;
        let parsed = parse(&a)?;
        check(parsed.to_csv_string().as_bytes() == a.as_slice(), format!("{fig}: re-serialization differs"))?;
        let direct = run_sweep(&config).map_err(|e| e.to_string())?.result;
        check(parsed == direct, format!("{fig}: parsed CSV differs from in-memory sweep"))?;
    }
    Ok("fig1/fig2 byte-identical across runs and execution modes; CSV round-trips exactly".into())
}

fn criterion_11(dir: &Path) -> Outcome {
    let out = dir.join("validity.csv");
    let output = mixmeas(&["validity", "--levels", "2", "--out", out.to_str().unwrap()]);
    check(output.status.success(), format!("validity exited with {:?}", output.status.code()))?;
    let stdout = String::from_utf8_lossy(&output.stdout).trim().to_string();
    check(stdout.contains("min(bound - exact)") && stdout.contains("at beta"), "summary missing")?;
    let table = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    check(table.lines().count() == 26, format!("{} lines in report", table.lines().count()))?;
    Ok(stdout)
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let dir = dir.path();
    let criteria: Vec<Criterion> = vec![
        ("1 two-level closed form vs numeric", Box::new(criterion_1)),
        ("2 fig1 limits and monotonicity", Box::new(|| criterion_2(dir))),
        ("3 threshold beta for p_c = 0.8", Box::new(criterion_3)),
        ("4 fig2 limits and monotonicity", Box::new(|| criterion_4(dir))),
        ("5 low-temperature approximation at beta = 5", Box::new(criterion_5)),
        ("6 entropy identities", Box::new(criterion_6)),
        ("7 helstrom vs bayes oracle", Box::new(criterion_7)),
        ("8 holevo sanity", Box::new(criterion_8)),
        ("9 pure-state helstrom", Box::new(criterion_9)),
        ("10 determinism and csv round-trip", Box::new(|| criterion_10(dir))),
        ("11 validity report", Box::new(|| criterion_11(dir))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
