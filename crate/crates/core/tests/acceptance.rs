//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use sta_coupler::experiments::{
    minimum_switch_length, power_trace, profile_report, CouplerMode, SwitchSearch, TraceOptions,
};
use sta_coupler::hamiltonian::diabatic_hamiltonian;
use sta_coupler::propagation::{
    adiabatic_eigenstate, adiabatic_following_prediction, convergence_check, propagate_amplitudes,
    propagate_density, Representation,
};
use sta_coupler::{AllenEberlyScheme, CounterdiabaticSpec, DensityMatrix2, Trajectory, ZGrid};

type Outcome = Result<String, String>;

/// Largest conservation errors seen across every run in the suite.
#[derive(Default)]
struct Conservation {
    norm: f64,
    trace: f64,
    purity: f64,
    runs: usize,
}

impl Conservation {
    fn record(&mut self, t: &Trajectory) {
        let d = &t.diagnostics;
        match d.representation {
            Representation::Amplitudes => self.norm = self.norm.max(d.max_norm_drift),
            Representation::DensityMatrix => {
                self.trace = self.trace.max(d.max_norm_drift);
                self.purity = self.purity.max(d.max_purity_drift.unwrap_or(f64::INFINITY));
            }
        }
        self.runs += 1;
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scheme(total_length: f64) -> AllenEberlyScheme {
    AllenEberlyScheme::with_total_length(1.0, 1.0, total_length).unwrap()
}

fn trace(c: &mut Conservation, s: &AllenEberlyScheme, mode: CouplerMode, repr: Representation) -> Trajectory {
    let options = TraceOptions { representation: repr, ..TraceOptions::default() };
    let t = power_trace(s, &mode, &options).unwrap().trajectory;
    c.record(&t);
    t
}

fn switch_panel(c: &mut Conservation, total_length: f64, limit: Duration) -> Outcome {
    let s = scheme(total_length);
    let start = Instant::now();
    let gauss = trace(c, &s, CouplerMode::sta_gauss(), Representation::DensityMatrix);
    let adiabatic = trace(c, &s, CouplerMode::Adiabatic, Representation::DensityMatrix);
    let elapsed = start.elapsed();
    for mode in [CouplerMode::sta_gauss(), CouplerMode::Adiabatic] {
        trace(c, &s, mode, Representation::Amplitudes);
    }
    let (g, a) = (gauss.final_transfer(), adiabatic.final_transfer());
    let detail = format!("sta-gauss {g:.6}, adiabatic {a:.6}, {:.3} s", elapsed.as_secs_f64());
    if total_length < 5.0 {
        check(g >= 0.99 && a <= g - 0.03 && elapsed < limit, detail)
    } else {
        check(a >= 0.95 && elapsed < limit, detail)
    }
}

fn criterion_1(c: &mut Conservation) -> Outcome {
    switch_panel(c, 4.0, Duration::from_secs(1))
}

fn criterion_2(c: &mut Conservation) -> Outcome {
    switch_panel(c, 10.0, Duration::from_secs(1))
}

fn criterion_3(c: &mut Conservation) -> Outcome {
    // κ₀ = 0.5 needs 2L ≈ 69 mm adiabatically, beyond the default search bound.
    let search = SwitchSearch { max_total_length: 200.0, ..SwitchSearch::default() };
    let start = Instant::now();
    let mut detail = String::new();
    let mut ok = true;
    let mut found = Vec::new();
    for kappa0 in [0.5, 1.0, 2.0] {
        let adiabatic = minimum_switch_length(1.0, kappa0, &CouplerMode::Adiabatic, &search);
        let gauss = minimum_switch_length(1.0, kappa0, &CouplerMode::sta_gauss(), &search);
        match (adiabatic, gauss) {
            (Ok(a), Ok(g)) => {
                let ratio = a / g;
                ok &= ratio >= 2.0;
                write!(detail, "κ₀={kappa0}: {a:.3}/{g:.3} mm = {ratio:.2}; ").unwrap();
                found.push((kappa0, a, g));
            }
            (a, g) => {
                ok = false;
                write!(detail, "κ₀={kappa0}: search failed ({a:?}, {g:?}); ").unwrap();
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    write!(detail, "{:.2} s", elapsed.as_secs_f64()).unwrap();
    // Feed the switching devices into the conservation audit.
    for (kappa0, a, g) in found {
        for (mode, length) in [(CouplerMode::Adiabatic, a), (CouplerMode::sta_gauss(), g)] {
            let s = AllenEberlyScheme::with_total_length(1.0, kappa0, length).unwrap();
            trace(c, &s, mode, Representation::Amplitudes);
            trace(c, &s, mode, Representation::DensityMatrix);
        }
    }
    check(ok, detail)
}

fn criterion_4(c: &mut Conservation) -> Outcome {
    let expected_final = 1.0 - 3.49e-6;
    let mut worst_pointwise = 0.0f64;
    let mut worst_final = 0.0f64;
    for half_length in [0.5, 1.0, 2.0, 5.0] {
        let s = AllenEberlyScheme::new(1.0, 1.0, half_length).unwrap();
        let path = CouplerMode::StaExact.path(&s).unwrap();
        let grid = ZGrid::across(&s, 4096).unwrap();
        let start = adiabatic_eigenstate(&s, -half_length).unwrap();
        let amplitudes = propagate_amplitudes(&path, start, &grid).unwrap();
        let density = propagate_density(&path, DensityMatrix2::pure(&start), &grid).unwrap();
        for t in [&amplitudes, &density] {
            c.record(t);
            for sample in &t.samples {
                let (p1, p2) = adiabatic_following_prediction(&s, sample.z).unwrap();
                worst_pointwise = worst_pointwise.max((sample.p1 - p1).abs()).max((sample.p2 - p2).abs());
            }
            worst_final = worst_final.max((t.final_transfer() - expected_final).abs());
        }
    }
    check(
        worst_pointwise < 1e-6 && worst_final < 1e-5,
        format!("max |P − P_pred| = {worst_pointwise:.2e}, max |P2(L) − (1 − 3.49e-6)| = {worst_final:.2e}"),
    )
}

fn criterion_6(c: &mut Conservation) -> Outcome {
    let s = scheme(4.0);
    let amplitudes = trace(c, &s, CouplerMode::sta_gauss(), Representation::Amplitudes);
    let density = trace(c, &s, CouplerMode::sta_gauss(), Representation::DensityMatrix);
    if amplitudes.samples.len() != density.samples.len() {
        return Err("sample grids differ".into());
    }
    let worst = amplitudes
        .samples
        .iter()
        .zip(&density.samples)
        .map(|(a, d)| (a.p2 - d.p2).abs())
        .fold(0.0, f64::max);
    check(worst < 1e-8, format!("max |ΔP2| = {worst:.2e} over {} samples", amplitudes.samples.len()))
}

fn rabi() -> impl Fn(f64) -> sta_coupler::Result<sta_coupler::HermitianMatrix2> + Sync {
    |_| Ok(diabatic_hamiltonian(0.0, 1.0))
}

fn criterion_7(c: &mut Conservation) -> Outcome {
    let grid = ZGrid::with_steps(0.0, PI / 2.0, 4096).unwrap();
    let start = sta_coupler::Amplitudes::first_guide();
    let amplitudes = propagate_amplitudes(&rabi(), start, &grid).unwrap();
    let density = propagate_density(&rabi(), DensityMatrix2::pure(&start), &grid).unwrap();
    c.record(&amplitudes);
    c.record(&density);
    let err = (amplitudes.final_transfer() - 1.0).abs().max((density.final_transfer() - 1.0).abs());
    check(err < 1e-8, format!("|P2(π/2) − 1| = {err:.2e}"))
}

fn criterion_8() -> Outcome {
    let grid = ZGrid::with_steps(0.0, PI / 2.0, 16).unwrap();
    match convergence_check(&rabi(), sta_coupler::Amplitudes::first_guide(), &grid) {
        Ok(order) => check((3.7..=4.3).contains(&order), format!("order {order:.4}")),
        Err(e) => Err(e.to_string()),
    }
}

fn criterion_9() -> Outcome {
    let s = scheme(4.0);
    let sech_2pi = 1.0 / (2.0 * PI).cosh();
    let end_error = [-2.0, 2.0]
        .map(|z| (s.coupling_at(z) / s.kappa0() - sech_2pi).abs())
        .into_iter()
        .fold(0.0, f64::max);

    let mut fd_error = 0.0f64;
    for total in [1.0, 4.0, 10.0] {
        let s = scheme(total);
        let l = s.half_length();
        let h = 1e-5 * l;
        for i in 0..=200 {
            let z = (-l + 2.0 * l * i as f64 / 200.0).clamp(-l + h, l - h);
            let fd = (s.mixing_angle(z + h).unwrap() - s.mixing_angle(z - h).unwrap()) / (2.0 * h);
            let exact = s.mixing_angle_rate(z).unwrap();
            fd_error = fd_error.max(((fd - exact) / exact).abs());
        }
    }

    let spec = CounterdiabaticSpec::default_gaussian(&s);
    let samples = profile_report(&s, &spec, 401).unwrap();
    let kappa_eff_max = samples.iter().map(|p| p.kappa_eff).fold(0.0, f64::max);
    let kappa_max = samples.iter().map(|p| p.kappa).fold(0.0, f64::max);
    let ends: Vec<_> = samples.iter().filter(|p| p.z.abs() >= 0.9 * s.half_length()).collect();
    let ends_enhanced = ends.iter().all(|p| p.delta_eff.abs() > p.delta.abs());

    check(
        end_error < 1e-10 && fd_error < 1e-6 && kappa_eff_max > kappa_max && ends_enhanced,
        format!(
            "|κ(±L)/κ₀ − sech 2π| = {end_error:.1e}, θ̇ FD rel. error {fd_error:.1e}, \
             max κ_eff {kappa_eff_max:.4} vs max κ {kappa_max:.4}, |Δ_eff| > |Δ| on {}/{} outer samples",
            ends.iter().filter(|p| p.delta_eff.abs() > p.delta.abs()).count(),
            ends.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for jobs in ["1", "8"] {
        let out = dir.path().join(format!("sweep-{jobs}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_sta-coupler"))
            .args(["sweep", "--jobs", jobs, "--no-timestamp", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("sweep --jobs {jobs} exited with {}", status.status));
        }
        files.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let rows = files[0].iter().filter(|&&b| b == b'\n').count();
    check(files[0] == files[1], format!("{rows} lines, {} bytes each", files[0].len()))
}

fn main() -> ExitCode {
    let mut conservation = Conservation::default();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "short device: Gaussian shortcut switches, adiabatic does not", criterion_1(&mut conservation)),
        (2, "long device: adiabatic switches", criterion_2(&mut conservation)),
        (3, "adiabatic needs at least twice the Gaussian length", criterion_3(&mut conservation)),
        (4, "exact shortcut follows the adiabatic state", criterion_4(&mut conservation)),
    ];
    let later = [
        (6, "amplitude and density representations agree", criterion_6(&mut conservation)),
        (7, "constant-coupling oracle", criterion_7(&mut conservation)),
        (8, "RK4 convergence order", criterion_8()),
        (9, "profile checks", criterion_9()),
        (10, "sweep output independent of thread count", criterion_10()),
    ];
    let c = &conservation;
    results.push((
        5,
        "conservation over every run",
        check(
            c.norm < 1e-8 && c.trace < 1e-8 && c.purity < 1e-8,
            format!(
                "{} runs: |‖a‖²−1| ≤ {:.1e}, |tr ρ−1| ≤ {:.1e}, |tr ρ²−1| ≤ {:.1e}",
                c.runs, c.norm, c.trace, c.purity
            ),
        ),
    ));
    results.extend(later);
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (n, title, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:>2}: PASS  {title} — {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {title} — {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
