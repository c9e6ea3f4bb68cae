//! Command-line interface: derived-parameter tables, single runs, lifetime
//! sweeps, verification suites, convergence studies and chart rendering.

use catphase_core::cat::{
    cat_basis, decode_logical, ideal_output_coeffs, logical_encode, LogicalState,
};
use catphase_core::gate::{full_gate, logical_truth_table, timing_defect, verify_commutation};
use catphase_core::hamiltonians::{build_effective, build_full, EffectiveForm};
use catphase_core::hilbert::HilbertLayout;
use catphase_core::lindblad::{
    dissipation_jump_list, evolve, evolve_state, DissipationSpec, IntegratorConfig,
};
use catphase_core::operators::{embed, number};
use catphase_core::params::{validate_regime, DerivedParams, DEFAULT_REGIME_THRESHOLD};
use catphase_core::propagator::piecewise_propagator;
use catphase_core::state::{DensityMatrix, StateVector};
use catphase_core::units::lifetime_us_to_rate;
use catphase_harness::csvio;
use catphase_harness::operating_point::reference_operating_point;
use catphase_harness::plot::emit_plot;
use catphase_harness::run::{
    convergence_study, default_kappa_grid, run_scenario, sweep_kappa, ResultRow,
};
use catphase_harness::scenario::ScenarioConfig;
use catphase_harness::HarnessError;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "catphase",
    about = "Cat-qubit multi-target controlled-phase gate simulator",
    version
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Scenario config JSON; defaults to the reference operating point.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived-parameter table and regime report.
    Params {
        #[command(flatten)]
        config: ConfigArg,
        /// Regime-ratio warning threshold.
        #[arg(long, default_value_t = DEFAULT_REGIME_THRESHOLD)]
        threshold: f64,
    },
    /// Run the scenario(s) in the config and print result rows.
    Evolve {
        #[command(flatten)]
        config: ConfigArg,
        /// Also write the rows as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep cavity lifetimes and write a CSV table.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// Output CSV path.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Run the property verification suites.
    Verify {
        /// Also run the slow brute-force propagator cross-check over the
        /// full gate time (minutes).
        #[arg(long)]
        full: bool,
    },
    /// Fidelity grid over Fock truncations and step sizes.
    Convergence {
        #[command(flatten)]
        config: ConfigArg,
        /// Comma-separated truncations.
        #[arg(long, default_value = "6,8,10", value_delimiter = ',')]
        n_cuts: Vec<usize>,
        /// Comma-separated step sizes in ns.
        #[arg(long, default_value = "0.02,0.01,0.005", value_delimiter = ',')]
        dts: Vec<f64>,
    },
    /// Render a CSV results table as an SVG chart.
    Plot {
        /// Input CSV (as written by `sweep` or `evolve --out`).
        #[arg(long)]
        input: PathBuf,
        /// Output SVG path.
        #[arg(long, default_value = "fidelity.svg")]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn load_config(arg: &ConfigArg) -> Result<ScenarioConfig, HarnessError> {
    match &arg.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
            ScenarioConfig::from_json(&text)
        }
        None => Ok(ScenarioConfig::default()),
    }
}

fn dispatch(cmd: Command) -> Result<(), HarnessError> {
    match cmd {
        Command::Params { config, threshold } => cmd_params(&config, threshold),
        Command::Evolve { config, out } => cmd_evolve(&config, out.as_deref()),
        Command::Sweep { config, out } => cmd_sweep(&config, &out),
        Command::Verify { full } => cmd_verify(full),
        Command::Convergence {
            config,
            n_cuts,
            dts,
        } => cmd_convergence(&config, &n_cuts, &dts),
        Command::Plot { input, out } => {
            let rows = csvio::load_rows(&input)?;
            let n = emit_plot(&out, &rows)?;
            println!("wrote {} with {n} data points", out.display());
            Ok(())
        }
    }
}

fn cmd_params(config: &ConfigArg, threshold: f64) -> Result<(), HarnessError> {
    let cfg = load_config(config)?;
    let params = cfg.params.apply(&reference_operating_point());
    params.validate()?;
    let d = DerivedParams::from_params(&params)?;
    let n = params.n_cavities();

    println!("raw parameters");
    println!("  omega_eg/2pi = {} GHz, omega_fe/2pi = {} GHz, omega_fg/2pi = {} GHz",
        params.omega_eg_ghz, params.omega_fe_ghz, params.omega_fg_ghz());
    for (i, wc) in params.omega_c_ghz.iter().enumerate() {
        println!("  cavity {}: omega_c/2pi = {wc} GHz, kappa^-1 = {} us", i + 1, params.kappa_inv_us[i]);
    }
    println!("  alpha = {}", params.alpha);
    println!();
    println!("detunings (GHz)");
    println!("  delta_1 = {:+.6}   (|delta_1| = {:.6})", d.detunings.delta1_ghz, d.detunings.delta1_ghz.abs());
    for l in 2..=n {
        println!(
            "  delta_{l} = {:+.6}   Delta_1{l} = {:.6}   delta~_{l} = {:+.6}",
            d.detunings.delta_l_ghz[l - 2],
            d.detunings.big_delta_1l_ghz[l - 2],
            d.detunings.delta_l_tilde_ghz[l - 2]
        );
    }
    println!("  delta~_1 = {:+.6}", d.detunings.delta1_tilde_ghz);
    for &((k, l), v) in &d.detunings.cavity_diff_ghz {
        println!("  Delta~_{k}{l} = {v:+.6}");
    }
    println!();
    println!("couplings (MHz)");
    for l in 1..=n {
        println!("  g_{l} = {:.4}   g~_{l} = {:.4}", d.g_mhz[l - 1], d.g_tilde_mhz[l - 1]);
    }
    println!("  g_crosstalk = {:.4}", d.g_crosstalk_mhz);
    println!();
    println!("second-order rates (MHz)");
    println!("  lambda_1 = {:.6}", d.lambda1_mhz);
    for l in 2..=n {
        println!(
            "  lambda_{l} = {:.6}   lambda_1{l} = {:.6}   chi_1{l} = {:.6}",
            d.lambda_l_mhz[l - 2],
            d.lambda_1l_mhz[l - 2],
            d.chi_1l_mhz[l - 2]
        );
    }
    for &((k, l), v) in &d.lambda_kl_mhz {
        println!("  lambda_{k}{l} = {v:.6}");
    }
    println!();
    println!("gate time = {:.6} us", d.gate_time_us);
    for (i, q) in d.q_factors.iter().enumerate() {
        println!("  Q_{} = {:.4e}", i + 1, q);
    }
    println!();
    let report = validate_regime(&d, threshold);
    println!("regime ratios (threshold {threshold})");
    for r in &report.ratios {
        println!(
            "  {} = {:.3}{}",
            r.label,
            r.value,
            if r.flagged { "   ** below threshold **" } else { "" }
        );
    }
    Ok(())
}

fn print_rows(rows: &[ResultRow]) {
    println!("{}", csvio::CSV_HEADER);
    for r in rows {
        println!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.scenario_id,
            r.model,
            r.label,
            r.kappa_inv_us,
            r.alpha,
            r.n_cut,
            r.dt_ns,
            r.fidelity,
            r.trace_error,
            r.leakage,
            r.wall_time_s
        );
    }
}

fn cmd_evolve(config: &ConfigArg, out: Option<&std::path::Path>) -> Result<(), HarnessError> {
    let cfg = load_config(config)?;
    let scenarios = cfg.scenarios()?;
    let mut rows = Vec::new();
    for s in &scenarios {
        rows.push(run_scenario(s)?);
    }
    print_rows(&rows);
    if let Some(path) = out {
        csvio::write_rows(path, &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep(config: &ConfigArg, out: &std::path::Path) -> Result<(), HarnessError> {
    let cfg = load_config(config)?;
    let scenarios = cfg.scenarios()?;
    let kappas: Vec<f64> = if cfg.kappa_inv_us.is_some() {
        scenarios.iter().map(|s| s.kappa_inv_us).collect()
    } else {
        default_kappa_grid()
    };
    let base = scenarios
        .first()
        .ok_or_else(|| HarnessError::Config("config yields no scenarios".into()))?;
    let results = sweep_kappa(base, &kappas);
    let mut rows = Vec::new();
    let mut failure: Option<HarnessError> = None;
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                eprintln!("row failed: {e}");
                if failure.is_none() {
                    failure = Some(e);
                }
            }
        }
    }
    csvio::write_rows(out, &rows)?;
    print_rows(&rows);
    println!("wrote {} ({} rows)", out.display(), rows.len());
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cmd_convergence(
    config: &ConfigArg,
    n_cuts: &[usize],
    dts: &[f64],
) -> Result<(), HarnessError> {
    let cfg = load_config(config)?;
    let base = cfg
        .scenarios()?
        .into_iter()
        .next()
        .ok_or_else(|| HarnessError::Config("config yields no scenarios".into()))?;
    if n_cuts.is_empty() || dts.is_empty() {
        return Err(HarnessError::Config("need at least one n_cut and dt".into()));
    }
    let report = convergence_study(&base, n_cuts, dts)?;
    println!("fidelity grid (rows: n_cut, cols: dt_ns {dts:?})");
    for (i, &nc) in report.n_cuts.iter().enumerate() {
        let vals: Vec<String> = report.fidelity[i]
            .iter()
            .map(|f| format!("{f:.8}"))
            .collect();
        println!("  n_cut {nc}: {}", vals.join("  "));
    }
    for i in 0..report.n_cuts.len().saturating_sub(1) {
        for j in 0..report.dts.len() {
            println!(
                "  |F(n_cut {}) - F(n_cut {})| at dt {} = {:.3e}",
                report.n_cuts[i],
                report.n_cuts[i + 1],
                report.dts[j],
                report.n_cut_delta(i, j)
            );
        }
    }
    for i in 0..report.n_cuts.len() {
        for j in 0..report.dts.len().saturating_sub(1) {
            println!(
                "  |F(dt {}) - F(dt {})| at n_cut {} = {:.3e}",
                report.dts[j],
                report.dts[j + 1],
                report.n_cuts[i],
                report.dt_delta(i, j)
            );
        }
    }
    Ok(())
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn cmd_verify(full: bool) -> Result<(), HarnessError> {
    let params = reference_operating_point();
    let d = DerivedParams::from_params(&params)?;
    let mut checks: Vec<Check> = Vec::new();

    // truth tables through the exact gate on encoded cats
    {
        let layout = HilbertLayout::new(3, 8)?;
        let cat = cat_basis(params.alpha, 8)?;
        let gate = full_gate(&d, &layout)?;
        let table = logical_truth_table(3)?;
        let mut worst: f64 = 0.0;
        for k in 0..8usize {
            let psi = logical_encode(&LogicalState::basis(3, k), &cat, &layout)?;
            let out = gate.apply_state(&psi)?;
            let dot = psi.inner(&out);
            let expect = Complex64::new(table[k] as f64, 0.0);
            worst = worst.max((dot - expect).norm());
        }
        checks.push(Check {
            name: "truth table n=3 (basis states)",
            pass: worst <= 1e-8,
            detail: format!("max deviation {worst:.3e}"),
        });

        // 50 pseudo-random logical inputs
        let mut seed = 0xA5A5_5A5A_1234_5678u64;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut worst_rand: f64 = 0.0;
        for _ in 0..50 {
            let mut s = LogicalState::new(
                (0..8)
                    .map(|_| Complex64::new(rnd(), rnd()))
                    .collect::<Vec<_>>(),
            )
            .expect("8 coefficients");
            s.normalize();
            let psi = logical_encode(&s, &cat, &layout)?;
            let out = gate.apply_state(&psi)?;
            let dec = decode_logical(&out, &cat, &layout)?;
            let ideal = ideal_output_coeffs(&s);
            for k in 0..8 {
                worst_rand = worst_rand.max((dec.coeffs[k] - ideal.coeffs[k]).norm());
            }
        }
        checks.push(Check {
            name: "truth table n=3 (50 random logical inputs)",
            pass: worst_rand <= 1e-8,
            detail: format!("max coefficient deviation {worst_rand:.3e}"),
        });
    }

    // n = 2 controlled-Z and n = 4 extension tables
    {
        let t2 = logical_truth_table(2)?;
        let t4 = logical_truth_table(4)?;
        let cz_ok = t2 == vec![1, 1, 1, -1];
        let t4_ok = t4[0b1111] == -1 && t4[0b1000] == 1 && t4[0b1011] == 1 && t4[0b0111] == 1;
        checks.push(Check {
            name: "controlled-Z table n=2 and n=4 extension",
            pass: cz_ok && t4_ok,
            detail: format!("n2 {t2:?}, n4[1111] = {}", t4[0b1111]),
        });
    }

    // timing and commutation
    {
        let defect = timing_defect(&d);
        checks.push(Check {
            name: "timing conditions chi T = pi, lambda_1 T = 2 pi",
            pass: defect <= 1e-9,
            detail: format!("relative defect {defect:.3e}"),
        });
        let layout = HilbertLayout::new(3, 6)?;
        let norm = verify_commutation(&d, &layout)?;
        checks.push(Check {
            name: "commuting split of the diagonal gate Hamiltonian",
            pass: norm <= 1e-14,
            detail: format!("commutator max-norm {norm:.3e}"),
        });
    }

    // analytic single-mode decay
    {
        let layout = HilbertLayout::new(1, 4)?;
        let h = catphase_core::modulated::ModulatedHamiltonian::new(layout.clone());
        let kappa = lifetime_us_to_rate(300.0);
        let mut spec = DissipationSpec::none(1);
        spec.kappa_per_ns = vec![kappa];
        let rho0 = DensityMatrix::from_pure(&StateVector::basis(layout.clone(), &[0, 1]));
        let t_final = d.gate_time_ns();
        let cfg = IntegratorConfig {
            dt_ns: 0.05,
            ..Default::default()
        };
        let (rho, _) = evolve(&rho0, &h, &spec, t_final, &cfg)?;
        let n_op = embed(1, &number(4)?, &layout)?;
        let mean = rho.expectation(&n_op).re;
        let expect = (-kappa * t_final).exp();
        let rel = ((mean - expect) / expect).abs();
        checks.push(Check {
            name: "single-mode decay vs exp(-kappa t)",
            pass: rel <= 1e-6,
            detail: format!("relative error {rel:.3e}"),
        });
    }

    // closed-system equivalence: static ground-sector evolution vs the gate
    {
        let layout = HilbertLayout::new(3, 8)?;
        let cat = cat_basis(params.alpha, 8)?;
        let h = build_effective(&d, &layout, EffectiveForm::Reduced)?;
        let gate = full_gate(&d, &layout)?;
        let input = catphase_core::cat::input_coeffs(
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_4,
        );
        let psi0 = logical_encode(&input, &cat, &layout)?;
        let cfg = IntegratorConfig {
            dt_ns: 0.01,
            ..Default::default()
        };
        let evolved = evolve_state(&psi0, &h, d.gate_time_ns(), &cfg)?;
        let expect = gate.apply_state(&psi0)?;
        let overlap = evolved.overlap(&expect);
        checks.push(Check {
            name: "closed-system evolution matches the diagonal gate",
            pass: overlap >= 1.0 - 1e-6,
            detail: format!("overlap {overlap:.9}"),
        });
    }

    // brute-force propagator cross-check on a reduced instance
    {
        let mut p2 = params.clone();
        p2.omega_c_ghz.truncate(2);
        p2.kappa_inv_us.truncate(2);
        let d2 = DerivedParams::from_params(&p2)?;
        let layout = HilbertLayout::new(2, 3)?;
        let h = build_full(&d2, &layout)?;
        let spec = DissipationSpec::from_params(&p2);
        let cat = cat_basis(p2.alpha, 3)?;
        let mut s = LogicalState::basis(2, 0);
        s.coeffs = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ];
        let psi0 = logical_encode(&s, &cat, &layout)?;
        let rho0 = DensityMatrix::from_pure(&psi0);
        let t_final = if full { d2.gate_time_ns() } else { 25.0 };
        let cfg = IntegratorConfig {
            dt_ns: 0.0025,
            ..Default::default()
        };
        let (rho_rk4, _) = evolve(&rho0, &h, &spec, t_final, &cfg)?;
        let jumps = dissipation_jump_list(&spec, &layout)?;
        // slicing error is ~3.4e-6 * (T / 408 ns) * (slice / 1 ps)^2
        let slice = if full { 0.00033 } else { 0.0005 };
        let slices = (t_final / slice).ceil() as usize;
        let rho_oracle = piecewise_propagator(&h, &jumps, &rho0, 0.0, t_final, slices)?;
        let diff = rho_rk4.mat.max_abs_diff(&rho_oracle.mat);
        checks.push(Check {
            name: if full {
                "RK4 vs brute-force propagator (full gate time)"
            } else {
                "RK4 vs brute-force propagator (short segment)"
            },
            pass: diff <= 1e-6,
            detail: format!("max-norm difference {diff:.3e} over {t_final} ns"),
        });
    }

    let mut all_pass = true;
    for c in &checks {
        println!(
            "{}  {} ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        all_pass &= c.pass;
    }
    if !all_pass {
        std::process::exit(1);
    }
    Ok(())
}
