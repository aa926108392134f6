//! Command-line interface for the exact XXZ / alternating-sign-matrix
//! verification toolkit.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 on
//! usage errors. All numbers in JSON output are strings (exact rationals
//! as `p/q`, floats as fixed-precision decimals) so downstream tooling
//! never loses precision; repeated invocations emit byte-identical JSON.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use xxz_asm::asm;
use xxz_asm::bethe::{self, BetheRootSet};
use xxz_asm::checks::standard_registry;
use xxz_asm::rational::Rational;
use xxz_asm::report::{Status, VerificationReport};
use xxz_asm::spin::{self, SpinBasisState};
use xxz_asm::symfun;
use xxz_asm::tq;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "xxz-asm",
    about = "Exact and numeric verification of the XXZ chain ground-state candidate at anisotropy -1/2 and its alternating-sign-matrix identities",
    version
)]
struct Cli {
    /// Optional TOML config file (precision, seed, tolerances).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the refined enumeration triangle A(M, r) through a given order.
    AsmTable {
        /// Largest order to print.
        order: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print the T-Q solution polynomial phi(u).
    Phi {
        m: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print chi(z), the monic polynomial with the Bethe roots as zeros.
    Chi {
        m: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print the elementary symmetric polynomials e_0 .. e_M.
    Esym {
        m: u32,
        #[arg(long)]
        json: bool,
    },
    /// Solve for the -3N/4 eigenvector and print its components.
    Groundstate {
        /// Chain length (odd, at least 3).
        n: u32,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Order components the way the component tables are usually
        /// printed (grouped by last position).
        #[arg(long)]
        table: bool,
    },
    /// Print the increment sums of the ground-state candidate, r = 0..M.
    Sums {
        /// Chain length (odd, at least 3).
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Find the Bethe roots numerically and report residuals and energy.
    BetheRoots {
        m: u32,
        /// Polish roots to this many bits and print them in decimal.
        #[arg(long, value_name = "BITS")]
        precision: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the permutation-sum Bethe eigenvector with the exact solve.
    Oracle {
        /// Chain length (odd, 3 through 13).
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run the full cross-check suite for a chain length.
    Verify {
        /// Chain length (odd, at least 3).
        n: u32,
        /// Run only the named checks (repeatable); see --list.
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
        /// List available check names and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run only the T-Q polynomial checks for a given M.
    VerifyTq {
        m: u32,
        #[arg(long)]
        json: bool,
    },
}

/// The subset of checks that make up the T-Q report.
const TQ_CHECKS: &[&str] = &[
    "phi-cyclic",
    "phi-symmetries",
    "phi-ode",
    "phi-unique",
    "tq-identity",
];

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let settings = match config::resolve(cli.config.as_deref()) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.command, settings) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            eprintln!("usage: xxz-asm --help");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command, settings: config::Settings) -> anyhow::Result<ExitCode> {
    match command {
        Command::AsmTable { order, json } => asm_table(order, json),
        Command::Phi { m, json } => phi(m, json),
        Command::Chi { m, json } => chi(m, json),
        Command::Esym { m, json } => esym(m, json),
        Command::Groundstate { n, json, table } => groundstate(n, json, table),
        Command::Sums { n, json } => sums(n, json),
        Command::BetheRoots { m, precision, json } => {
            bethe_roots(m, precision.or(settings.precision), json, &settings)
        }
        Command::Oracle { n, json } => oracle(n, json, &settings),
        Command::Verify { n, checks, list, json } => verify(n, checks, list, json, &settings),
        Command::VerifyTq { m, json } => verify_tq(m, json, &settings),
    }
}

fn require_odd_chain(n: u32) -> anyhow::Result<u32> {
    if n < 3 || n % 2 == 0 {
        anyhow::bail!("chain length must be odd and at least 3, got {n}");
    }
    Ok((n - 1) / 2)
}

fn require_order(m: u32) -> anyhow::Result<()> {
    if m < 1 {
        anyhow::bail!("M must be at least 1");
    }
    Ok(())
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn asm_table(order: u32, json: bool) -> anyhow::Result<ExitCode> {
    if order < 1 {
        anyhow::bail!("order must be at least 1");
    }
    let rows: Vec<asm::AsmRow> = (1..=order)
        .map(|m| asm::asm_row(m).expect("valid order"))
        .collect();
    if json {
        let value = json!({
            "rows": rows.iter().map(|row| json!({
                "order": row.order.to_string(),
                "counts": row.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "total": row.total().to_string(),
            })).collect::<Vec<_>>(),
        });
        emit(&value);
    } else {
        let width = rows
            .last()
            .map(|row| row.counts.iter().map(|c| c.to_string().len()).max().unwrap_or(1))
            .unwrap_or(1)
            + 2;
        for row in &rows {
            let cells: Vec<String> = row
                .counts
                .iter()
                .map(|c| format!("{:>width$}", c.to_string()))
                .collect();
            let pad = (order - row.order) as usize * width / 2;
            println!("{}{}", " ".repeat(pad), cells.join(""));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn phi(m: u32, json: bool) -> anyhow::Result<ExitCode> {
    require_order(m)?;
    let phi = tq::build_phi(m)?;
    if json {
        let value = json!({
            "m": m.to_string(),
            "normalization": phi.normalization.to_string(),
            "coefficients": phi.poly.to_pairs().iter()
                .map(|(k, c)| json!([k.to_string(), c]))
                .collect::<Vec<_>>(),
        });
        emit(&value);
    } else {
        println!("{}", phi.poly);
    }
    Ok(ExitCode::SUCCESS)
}

fn chi(m: u32, json: bool) -> anyhow::Result<ExitCode> {
    require_order(m)?;
    let chi = symfun::chi_from_esym(&symfun::elementary_sym(m)?);
    if json {
        let value = json!({
            "m": m.to_string(),
            "coefficients": chi.coeffs.iter().enumerate().rev()
                .map(|(power, c)| json!([power.to_string(), c.to_string()]))
                .collect::<Vec<_>>(),
        });
        emit(&value);
    } else {
        let terms: Vec<String> = chi
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(power, c)| match power {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{power}"),
            })
            .collect();
        println!("{}", terms.join(" + "));
    }
    Ok(ExitCode::SUCCESS)
}

fn esym(m: u32, json: bool) -> anyhow::Result<ExitCode> {
    require_order(m)?;
    let esym = symfun::elementary_sym(m)?;
    if json {
        let value = json!({
            "m": m.to_string(),
            "values": esym.values.iter().map(Rational::to_string).collect::<Vec<_>>(),
        });
        emit(&value);
    } else {
        for (r, e) in esym.values.iter().enumerate() {
            println!("e_{r} = {e}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Component-table order: by last minus position, then reverse
/// lexicographically, which groups components the way the tables are
/// usually read.
fn table_order(entries: &mut [(SpinBasisState, Rational)]) {
    entries.sort_by(|a, b| {
        let pa = a.0.positions();
        let pb = b.0.positions();
        pa.last().cmp(&pb.last()).then_with(|| pb.cmp(&pa))
    });
}

fn groundstate(n: u32, json: bool, table: bool) -> anyhow::Result<ExitCode> {
    require_odd_chain(n)?;
    let gs = spin::ground_candidate(n)?;
    let mut entries = gs.vector.entries();
    if table {
        table_order(&mut entries);
    }
    if json {
        let value = json!({
            "n": n.to_string(),
            "k": gs.vector.k().to_string(),
            "eigenvalue": gs.eigenvalue.to_string(),
            "orbit_count": gs.vector.orbit_count().to_string(),
            "positive": gs.positive,
            "integral": gs.integral,
            "max_component": gs.vector.max_component().to_string(),
            "components": entries.iter().map(|(state, value)| json!({
                "positions": state.positions().iter().map(u32::to_string).collect::<Vec<_>>(),
                "value": value.to_string(),
            })).collect::<Vec<_>>(),
        });
        emit(&value);
    } else {
        println!(
            "N = {n}, K = {}, eigenvalue {}, {} independent components",
            gs.vector.k(),
            gs.eigenvalue,
            gs.vector.orbit_count()
        );
        for (state, value) in &entries {
            let positions: Vec<String> = state.positions().iter().map(u32::to_string).collect();
            println!("psi[{}] = {}", positions.join(","), value);
        }
        if !gs.positive || !gs.integral {
            println!(
                "note: positivity = {}, integrality = {}",
                gs.positive, gs.integral
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sums(n: u32, json: bool) -> anyhow::Result<ExitCode> {
    let m = require_odd_chain(n)?;
    let gs = spin::ground_candidate(n)?;
    let sums: Vec<Rational> = (0..=m)
        .map(|r| spin::increment_sum(&gs.vector, r).expect("r <= M"))
        .collect();
    if json {
        let value = json!({
            "n": n.to_string(),
            "sums": sums.iter().map(Rational::to_string).collect::<Vec<_>>(),
        });
        emit(&value);
    } else {
        for (r, sum) in sums.iter().enumerate() {
            println!("r = {r}: {sum}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": format_f64(z.re), "im": format_f64(z.im) })
}

fn root_entry(rs: &BetheRootSet, i: usize) -> Value {
    let z = rs.roots[i];
    json!({
        "z": complex_json(z),
        "u": complex_json(rs.u_params[i]),
        "abs": format_f64(z.norm()),
        "arg": format_f64(z.arg()),
    })
}

fn bethe_roots(
    m: u32,
    precision: Option<u32>,
    json: bool,
    settings: &config::Settings,
) -> anyhow::Result<ExitCode> {
    require_order(m)?;
    let config = settings.root_config();
    let rs = bethe::roots_of_chi(m, &config)?;
    let residual = bethe::bethe_residual(&rs)?;
    let pairing = bethe::pairing_defect(&rs);
    let energy = bethe::energy(&rs, -0.5, 2 * m + 1);
    let refined = precision.map(|bits| {
        let digits = (f64::from(bits) * std::f64::consts::LOG10_2).ceil() as usize + 1;
        bethe::refine_roots(m, &rs.roots, bits)
            .iter()
            .map(|g| g.to_decimal(digits))
            .collect::<Vec<_>>()
    });
    if json {
        let mut value = json!({
            "m": m.to_string(),
            "roots": (0..rs.roots.len()).map(|i| root_entry(&rs, i)).collect::<Vec<_>>(),
            "residual": format_f64(residual),
            "pairing_defect": format_f64(pairing),
            "energy": complex_json(energy),
        });
        if let Some(refined) = &refined {
            value["refined"] = json!(refined
                .iter()
                .map(|(re, im)| json!({ "re": re, "im": im }))
                .collect::<Vec<_>>());
            value["precision_bits"] = json!(precision.expect("set").to_string());
        }
        emit(&value);
    } else {
        println!("M = {m}, N = {}", 2 * m + 1);
        for (i, z) in rs.roots.iter().enumerate() {
            println!(
                "z_{} = {:+.15} {:+.15}i   (|z| = {:.15}, u = {:+.15} {:+.15}i)",
                i + 1,
                z.re,
                z.im,
                z.norm(),
                rs.u_params[i].re,
                rs.u_params[i].im
            );
        }
        if let Some(refined) = &refined {
            println!("refined to {} bits:", precision.expect("set"));
            for (i, (re, im)) in refined.iter().enumerate() {
                println!("z_{} = {} + {}i", i + 1, re, im);
            }
        }
        println!("bethe residual   = {residual:.3e}");
        println!("pairing defect   = {pairing:.3e}");
        println!("energy           = {:+.12} {:+.3e}i", energy.re, energy.im);
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle(n: u32, json: bool, settings: &config::Settings) -> anyhow::Result<ExitCode> {
    let m = require_odd_chain(n)?;
    if m > 6 {
        anyhow::bail!("oracle is factorial in M; N must be at most 13, got {n}");
    }
    let deviation = bethe::oracle_vs_exact(n, &settings.root_config())?;
    let pass = deviation < settings.tolerances.oracle_relative;
    if json {
        emit(&json!({
            "n": n.to_string(),
            "max_relative_deviation": format_f64(deviation),
            "tolerance": format_f64(settings.tolerances.oracle_relative),
            "pass": pass,
        }));
    } else {
        println!(
            "oracle vs exact at N = {n}: max relative deviation {deviation:.3e} (tolerance {:.0e}) -> {}",
            settings.tolerances.oracle_relative,
            if pass { "pass" } else { "FAIL" }
        );
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    })
}

fn report_json(report: &VerificationReport) -> Value {
    json!({
        "check": report.check,
        "n": report.n.to_string(),
        "m": report.m.to_string(),
        "status": report.status,
        "mode": report.mode,
        "items": report.items.iter().map(|item| json!({
            "label": item.label,
            "pass": item.pass,
            "detail": item.detail,
        })).collect::<Vec<_>>(),
    })
}

fn verify(
    n: u32,
    checks: Vec<String>,
    list: bool,
    json: bool,
    settings: &config::Settings,
) -> anyhow::Result<ExitCode> {
    let registry = standard_registry(settings.root_config(), settings.tolerances);
    if list {
        for name in registry.names() {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let m = require_odd_chain(n)?;
    let reports: Vec<VerificationReport> = if checks.is_empty() {
        registry.run_all(m)
    } else {
        let mut out = Vec::new();
        for name in &checks {
            match registry.run_one(name, m) {
                Some(report) => out.push(report),
                None => anyhow::bail!(
                    "unknown check {name:?}; available: {}",
                    registry.names().collect::<Vec<_>>().join(", ")
                ),
            }
        }
        out
    };
    Ok(emit_reports(n, &reports, json))
}

fn verify_tq(m: u32, json: bool, settings: &config::Settings) -> anyhow::Result<ExitCode> {
    require_order(m)?;
    let registry = standard_registry(settings.root_config(), settings.tolerances);
    let reports: Vec<VerificationReport> = TQ_CHECKS
        .iter()
        .map(|name| registry.run_one(name, m).expect("registered"))
        .collect();
    Ok(emit_reports(2 * m + 1, &reports, json))
}

fn emit_reports(n: u32, reports: &[VerificationReport], json: bool) -> ExitCode {
    let all_passed = reports.iter().all(VerificationReport::passed);
    if json {
        emit(&json!({
            "n": n.to_string(),
            "pass": all_passed,
            "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
        }));
    } else {
        for report in reports {
            println!(
                "{:<9} {:<20} [{:>7.1?}]",
                report.status.to_string(),
                report.check,
                report.wall
            );
            for item in report.items.iter().filter(|i| !i.pass) {
                println!("          - {}: {}", item.label, item.detail);
            }
        }
        println!(
            "{} of {} checks passed at N = {n}",
            reports
                .iter()
                .filter(|r| r.status != Status::Fail)
                .count(),
            reports.len()
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
