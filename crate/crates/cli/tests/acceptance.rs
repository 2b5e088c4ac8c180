//! Acceptance checks. All criteria run sequentially inside one test so the
//! wall-clock budgets are not distorted by sibling tests; each prints one
//! `criterion N: PASS|FAIL` line and the test fails if any criterion does.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fracroot::ensemble::{generate_initials, EnsembleConfig};
use fracroot::lle::{knn_gmae, lyapunov_profile, read_profile_csv, train_test_split, LleParams};
use fracroot::numeric::{caputo_derivative, classical_derivative, Polynomial};
use fracroot::presets::{Example, EXAMPLE_1, EXAMPLE_2};
use fracroot::solvers::{
    coc_from_trace, invm_step, invm_step_full_form, nourein_step, run_solver, wdk_step, zhm_step, Method, SolverParams,
    Status,
};
use fracroot::tuning::{adaptive_solve, features_from_lambda1, TuningReport, Watch};
use fracroot::C64;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, budget: f64) -> bool {
    elapsed.as_secs_f64() < budget
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fracroot"));
    cmd.env_remove("FRACROOT_OUT");
    cmd
}

fn run(args: &[&str]) {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "fracroot {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn random_c64(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> C64 {
    C64::from_polar(rng.random_range(r_min..r_max), rng.random_range(-PI..PI))
}

// 1 --------------------------------------------------------------------------

fn fixed_points() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for ex in [&EXAMPLE_1, &EXAMPLE_2] {
        let f = ex.polynomial();
        let roots = ex.roots();
        let params = SolverParams::new(3.0, 1.0);
        let images = [
            wdk_step(&f, &roots).unwrap(),
            nourein_step(&f, &roots).unwrap(),
            zhm_step(&f, &roots).unwrap(),
            invm_step(&f, &roots, &params).unwrap(),
        ];
        for img in &images {
            for (a, r) in img.iter().zip(&roots) {
                worst = worst.max((a - r).norm());
            }
        }
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-12 && within(el, 1.0),
        format!("max displacement {worst:.2e} (tol 1e-12), {}", secs(el)),
    )
}

// 2 --------------------------------------------------------------------------

fn caputo_consistency() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let deg = rng.random_range(0..=10);
        let coeffs: Vec<C64> = (0..=deg)
            .map(|_| C64::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)))
            .collect();
        let f = Polynomial::new(coeffs).unwrap();
        let df = classical_derivative(&f);
        for _ in 0..10 {
            let x = random_c64(&mut rng, 0.1, 10.0);
            let want = df.eval(x);
            let got = caputo_derivative(&f, 1.0, x).unwrap();
            worst = worst.max((got - want).norm() / (1.0 + want.norm()));
        }
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-12 && within(el, 1.0),
        format!("max scaled error {worst:.2e} (tol 1e-12), {}", secs(el)),
    )
}

// 3 --------------------------------------------------------------------------

fn order_check() -> Outcome {
    let t = Instant::now();
    let f = EXAMPLE_1.polynomial();
    let roots = EXAMPLE_1.roots();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut invm = Vec::new();
    let mut wdk = Vec::new();
    for _ in 0..20 {
        let x0: Vec<C64> = roots.iter().map(|r| r + random_c64(&mut rng, 0.002, 0.01)).collect();
        let invm_params = SolverParams::new(3.0, 1.0).with_tol(1e-15);
        let a = run_solver(&f, &x0, &invm_params, Method::Invm).unwrap();
        invm.push(coc_from_trace(&a, Some(&roots), 1e-13).unwrap_or(f64::NAN));
        let b = run_solver(&f, &x0, &SolverParams::new(0.0, 1.0).with_tol(1e-15), Method::Wdk).unwrap();
        wdk.push(coc_from_trace(&b, Some(&roots), 1e-13).unwrap_or(f64::NAN));
    }
    let el = t.elapsed();
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (il, ih) = range(&invm);
    let (wl, wh) = range(&wdk);
    let invm_ok = invm.iter().all(|q| (4.0..=6.0).contains(q));
    let wdk_ok = wdk.iter().all(|q| (1.7..=2.3).contains(q));
    outcome(
        invm_ok && wdk_ok && within(el, 1.0),
        format!(
            "INVM COC [{il:.3}, {ih:.3}] want [4, 6]; WDK COC [{wl:.3}, {wh:.3}] want [1.7, 2.3]; 20 starts, {}",
            secs(el)
        ),
    )
}

// 4 --------------------------------------------------------------------------

fn form_equivalence() -> Outcome {
    let t = Instant::now();
    let f = EXAMPLE_1.polynomial();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut compared = 0;
    while compared < 100 {
        let x: Vec<C64> = (0..3).map(|_| random_c64(&mut rng, 0.3, 2.5)).collect();
        let params = SolverParams::new(rng.random_range(0.0..5.0), 1.0);
        let (Ok(a), Ok(b)) = (invm_step(&f, &x, &params), invm_step_full_form(&f, &x, &params)) else {
            continue;
        };
        for (p, q) in a.iter().zip(&b) {
            worst = worst.max((p - q).norm() / q.norm().max(1e-300));
        }
        compared += 1;
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-10 && within(el, 1.0),
        format!("max relative gap {worst:.2e} (tol 1e-10), {}", secs(el)),
    )
}

// 5 --------------------------------------------------------------------------

fn generate_and_profile(example: u32, case: u32, dir: &Path) {
    let ex = example.to_string();
    let case = case.to_string();
    run(&["generate", "--example", &ex, "--case", &case, "--out", path_str(dir)]);
    run(&["profile", "--input", path_str(dir)]);
}

fn pipeline_shape(dir: &Path) -> (Outcome, Duration) {
    let t = Instant::now();
    generate_and_profile(1, 1, dir);
    let el = t.elapsed();
    let mut matrices = 0;
    let mut bad = Vec::new();
    let mut profiles = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        let text = fs::read_to_string(&p).unwrap();
        if name.ends_with("_sk.csv") || name.ends_with("_rk.csv") {
            matrices += 1;
            let rows = text.lines().count();
            let cols = text.lines().next().map_or(0, |l| l.split(',').count());
            if rows != 1000 || cols != 50 || text.lines().any(|l| l.split(',').count() != 50) {
                bad.push(format!("{name}: {rows}x{cols}"));
            }
        } else if name.ends_with("_profile.csv") {
            profiles += 1;
            let windows = text.lines().count() - 1;
            if windows != 41 {
                bad.push(format!("{name}: {windows} windows"));
            }
        }
    }
    let pass = matrices == 12 && profiles == 12 && bad.is_empty() && within(el, 60.0);
    (
        outcome(
            pass,
            format!(
                "{matrices} matrices 1000x50, {profiles} profiles of 41 windows, problems {bad:?}, {}",
                secs(el)
            ),
        ),
        el,
    )
}

// 6 --------------------------------------------------------------------------

/// Brute-force kNN forecast and geometric mean: repeated minimum search over
/// the train rows and a product of n-th roots.
fn gmae_oracle(u: &Array2<f64>, h: usize, p: &LleParams<f64>) -> f64 {
    let (train, test) = train_test_split(u.nrows(), p.test_fraction, p.split_seed);
    let col = p.look_back - 1 + h;
    let n = test.len() as f64;
    let mut gm = 1.0;
    for &t in &test {
        let mut taken = vec![false; train.len()];
        let mut pred = 0.0;
        for _ in 0..p.k_neighbors {
            let mut best: Option<(f64, usize)> = None;
            for (slot, &r) in train.iter().enumerate() {
                if taken[slot] {
                    continue;
                }
                let d: f64 = (0..p.look_back).map(|c| (u[[t, c]] - u[[r, c]]).powi(2)).sum();
                let closer = match best {
                    None => true,
                    Some((bd, bs)) => d < bd || (d == bd && r < train[bs]),
                };
                if closer {
                    best = Some((d, slot));
                }
            }
            let (_, slot) = best.unwrap();
            taken[slot] = true;
            pred += u[[train[slot], col]];
        }
        pred /= p.k_neighbors as f64;
        gm *= (pred - u[[t, col]]).abs().max(p.gmae_floor).powf(1.0 / n);
    }
    gm
}

fn estimator_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let rows = rng.random_range(8..=24);
        let u = Array2::from_shape_fn((rows, 10), |_| rng.random_range(-2.0..2.0));
        let p = LleParams {
            split_seed: trial,
            ..LleParams::default()
        };
        for h in 1..=5 {
            let got = knn_gmae(u.view(), h, &p).unwrap();
            let want = gmae_oracle(&u, h, &p);
            worst = worst.max((got - want).abs() / want);
        }
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-12 && within(el, 5.0),
        format!(
            "max relative gap {worst:.2e} over 50 batches x 5 horizons, {}",
            secs(el)
        ),
    )
}

// 7 --------------------------------------------------------------------------

fn synthetic_recovery() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = rand_distr::Normal::new(0.0, 0.01).unwrap();
    let a: Vec<f64> = (0..1000).map(|_| rng.random_range(0.5..1.5)).collect();
    let x = Array2::from_shape_fn((1000, 50), |(j, k)| {
        a[j] * 0.8f64.powi(k as i32) * (1.0 + rand_distr::Distribution::sample(&noise, &mut rng))
    });
    let prof = lyapunov_profile(x.view(), &LleParams::default()).unwrap();
    let mut l = prof.lambda1();
    let negative = l.iter().filter(|&&v| v < 0.0).count() as f64 / l.len() as f64;
    l.sort_by(f64::total_cmp);
    let median = l[l.len() / 2];
    let el = t.elapsed();
    outcome(
        (median - 0.8f64.ln()).abs() <= 0.05 && negative >= 0.8 && within(el, 30.0),
        format!(
            "median lambda1 {median:.4} vs ln 0.8 = {:.4}, negative fraction {negative:.3}, {}",
            0.8f64.ln(),
            secs(el)
        ),
    )
}

// 8 --------------------------------------------------------------------------

fn full_pipeline(dir: &Path) {
    generate_and_profile(1, 1, dir);
    run(&["tune", "--input", path_str(dir)]);
}

fn comparable_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let n = p.file_name().unwrap().to_string_lossy();
            n.ends_with(".csv") || n == "tuning_report.json"
        })
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn determinism(a: &Path, b: &Path, baseline: Duration) -> Outcome {
    let t = Instant::now();
    full_pipeline(a);
    full_pipeline(b);
    let el = t.elapsed();
    let fa = comparable_files(a);
    let fb = comparable_files(b);
    let differing: Vec<&String> = fa.keys().filter(|k| fb.get(*k) != fa.get(*k)).collect();
    let same_set = fa.keys().eq(fb.keys());
    let budget = 2.0 * 60.0;
    outcome(
        same_set && differing.is_empty() && !fa.is_empty() && within(el, budget),
        format!(
            "{} files compared, differing {differing:?}, {} (criterion 5 took {}, budget {budget}s)",
            fa.len(),
            secs(el),
            secs(baseline)
        ),
    )
}

// 9 --------------------------------------------------------------------------

fn tune_example(ex: &Example, dir: &Path) -> TuningReport {
    let id = ex.id.to_string();
    for case in ["1", "2"] {
        run(&["generate", "--example", &id, "--case", case, "--out", path_str(dir)]);
    }
    run(&["profile", "--input", path_str(dir)]);
    run(&["tune", "--input", path_str(dir)]);
    serde_json::from_str(&fs::read_to_string(dir.join("tuning_report.json")).unwrap()).unwrap()
}

/// Mean late-window λ₁ of every profile, keyed by (case, observable), for one α.
fn late_means(dir: &Path, alpha: f64) -> BTreeMap<(String, String), f64> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if !p.to_string_lossy().ends_with("_profile.csv") {
            continue;
        }
        let prof = read_profile_csv(&p).unwrap();
        let meta = prof.meta.clone().unwrap();
        if meta.alpha != alpha {
            continue;
        }
        let feats = features_from_lambda1(&prof.lambda1(), 0.5).unwrap();
        out.insert((meta.case_label, meta.observable.to_string()), feats.mean_late_lambda1);
    }
    out
}

fn tuning_contract(dir1: &Path, dir2: &Path) -> Outcome {
    let t = Instant::now();
    let report = tune_example(&EXAMPLE_1, dir1);
    let chosen = report
        .per_alpha
        .iter()
        .find(|r| r.alpha == report.selected_alpha)
        .unwrap();
    let well_behaved = serde_json::to_value(chosen.classification).unwrap() == "well_behaved";
    let sel = late_means(dir1, report.selected_alpha);
    let zero = late_means(dir1, 0.0);
    let no_worse = !sel.is_empty() && sel.iter().all(|(k, v)| zero.get(k).is_some_and(|z| v <= z));
    let classes: Vec<String> = report
        .per_alpha
        .iter()
        .map(|r| {
            format!(
                "{}:{}",
                r.alpha,
                serde_json::to_value(r.classification).unwrap().as_str().unwrap()
            )
        })
        .collect();

    let report2 = tune_example(&EXAMPLE_2, dir2);
    let el = t.elapsed();
    let soft = format!(
        "soft: example 1 picked {} (reference 3), example 2 picked {} (reference 2)",
        report.selected_alpha, report2.selected_alpha
    );
    outcome(
        well_behaved && no_worse,
        format!(
            "selected alpha {} well_behaved={well_behaved} fallback={} late lambda1 <= alpha 0 on every profile={no_worse}; classes [{}]; {soft}; {}",
            report.selected_alpha,
            report.fallback,
            classes.join(", "),
            secs(el)
        ),
    )
}

// 10 -------------------------------------------------------------------------

fn adaptive_rule() -> Outcome {
    let f = EXAMPLE_1.polynomial();
    let p3 = SolverParams::new(3.0, 1.0).with_max_iters(60);
    let mut identical = true;
    for x0 in [EXAMPLE_1.base(1).unwrap(), EXAMPLE_1.base(2).unwrap()] {
        let plain = run_solver(&f, &x0, &p3, Method::Invm).unwrap();
        let ad = adaptive_solve(&f, &x0, &p3, &[3.0], &Watch::default()).unwrap();
        identical &= ad.trace == plain && ad.switches.is_empty();
    }
    let start = [C64::new(0.25, 0.0), C64::new(-0.5, 2.25), C64::new(2.0, -0.5)];
    let p0 = SolverParams::new(0.0, 1.0).with_max_iters(60);
    let baseline = run_solver(&f, &start, &p0, Method::Invm).unwrap();
    let ad = adaptive_solve(&f, &start, &p0, &[0.0, 3.0], &Watch::default()).unwrap();
    let base_r = baseline.final_residual().unwrap();
    let ad_r = ad.trace.final_residual().unwrap();
    outcome(
        identical && !ad.switches.is_empty() && ad_r < base_r,
        format!(
            "single-candidate trace identical={identical}; {} switch(es), final residual {ad_r:.2e} vs fixed alpha 0 {base_r:.2e}",
            ad.switches.len()
        ),
    )
}

// 11 -------------------------------------------------------------------------

fn desk_convergence() -> Outcome {
    let f = EXAMPLE_1.polynomial();
    let cfg = EnsembleConfig::new(EXAMPLE_1.base(2).unwrap(), "2", Example::default_seed(2)).with_runs(100);
    let params = SolverParams::new(3.0, 1.0).with_max_iters(200).with_tol(1e-10);
    let initials = generate_initials(&cfg);
    let mut converged = 0;
    let mut zero_collapse = 0;
    for x0 in &initials {
        let trace = run_solver(&f, x0, &params, Method::Invm).unwrap();
        if trace.status == Status::Converged {
            converged += 1;
        } else if trace.final_iterate().iter().any(|z| z.norm() < 1e-6) {
            zero_collapse += 1;
        }
    }
    outcome(
        converged >= 90,
        format!("{converged}/100 runs reached residual <= 1e-10 within 200 iterations (want >= 90); {zero_collapse} stalled with a component at the origin"),
    )
}

#[test]
fn acceptance_criteria() {
    let c5 = tempfile::tempdir().unwrap();
    let c8a = tempfile::tempdir().unwrap();
    let c8b = tempfile::tempdir().unwrap();
    let c9a = tempfile::tempdir().unwrap();
    let c9b = tempfile::tempdir().unwrap();

    let mut results = vec![fixed_points(), caputo_consistency(), order_check(), form_equivalence()];
    let (shape, c5_time) = pipeline_shape(c5.path());
    results.push(shape);
    results.push(estimator_oracle());
    results.push(synthetic_recovery());
    results.push(determinism(c8a.path(), c8b.path(), c5_time));
    results.push(tuning_contract(c9a.path(), c9b.path()));
    results.push(adaptive_rule());
    results.push(desk_convergence());

    let mut failed = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let n = i + 1;
        println!("criterion {n}: {} {}", if r.pass { "PASS" } else { "FAIL" }, r.detail);
        if !r.pass {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
