use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use toeplipz_core::dc::decompose_rank_with_tol;
use toeplipz_core::lipbound::gamma_gap_with;
use toeplipz_core::{
    compare_all, lipbound, CompareOptions, ConvKernel, Error as CoreError, GridSpec, Limits, Method, Timing,
};

use crate::error::CliError;
use crate::files::{read_kernel, read_matrix, write_json, FactorFile};
use crate::{Cli, Command, OutputMode};

pub type NList = Vec<usize>;

/// `4,8`, `5..24` (inclusive) or any comma-separated mix.
pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("no sizes given".into());
    }
    Ok(out)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let limits = Limits::from_env();
    match cli.command {
        Command::Lipbound { kernel, samples, corrected, output } => {
            let k = read_kernel(&kernel)?;
            print!("{}", lipbound_report(&k, grid_for(&k, samples)?, corrected, output)?);
        }
        Command::Compare {
            kernel,
            input_size,
            iters,
            samples,
            corrected,
            runs,
            warmup,
            output,
        } => {
            let seed = cli.seed.unwrap_or_else(|| {
                let s = rand::random::<u64>();
                eprintln!("seed: {s}");
                s
            });
            let opts = |k: &ConvKernel| -> Result<CompareOptions, CliError> {
                Ok(CompareOptions {
                    n: input_size,
                    grid: grid_for(k, samples)?,
                    corrected,
                    iters,
                    seed,
                    timing: Timing { warmup, runs },
                    limits,
                })
            };
            if kernel.is_dir() {
                let mut sweeps = Vec::new();
                for path in kernel_files(&kernel)? {
                    let k = read_kernel(&path)?;
                    sweeps.push(compare_one(&k, &opts(&k)?, &path)?);
                }
                print!("{}", batch_report(input_size, &sweeps, output));
            } else {
                let k = read_kernel(&kernel)?;
                let sweep = compare_one(&k, &opts(&k)?, &kernel)?;
                print!("{}", compare_report(input_size, &sweep, output));
            }
        }
        Command::Decompose { matrix, rank, out, tol } => {
            let m = read_matrix(&matrix)?;
            let f = decompose_rank_with_tol(&m, rank, tol)?;
            write_json(&out, &FactorFile::from_factorization(&f))?;
            println!("factors: {}", f.len());
            println!("reconstruction_error: {:?}", f.reconstruction_error().unwrap_or(0.0));
        }
        Command::Gamma {
            kernel,
            n_list,
            samples,
            corrected,
            out,
        } => {
            let k = read_kernel(&kernel)?;
            let grid = grid_for(&k, samples)?;
            let mut csv = String::from("n,gamma\n");
            for n in n_list {
                match gamma_gap_with(&k, n, &grid, corrected, &limits) {
                    Ok(g) => writeln!(csv, "{n},{g:.16e}").expect("write to string"),
                    Err(e @ CoreError::CapExceeded { .. }) => eprintln!("warning: n = {n} skipped: {e}"),
                    Err(e) => return Err(e.into()),
                }
            }
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn grid_for(k: &ConvKernel, samples: Option<usize>) -> Result<GridSpec, CliError> {
    Ok(match samples {
        Some(s) => GridSpec::new(s)?,
        None => GridSpec::default_for_degree(k.degree()),
    })
}

fn kernel_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()).map_err(io))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Io(format!("{}: no kernel .json files", dir.display())));
    }
    Ok(paths)
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn lipbound_report(k: &ConvKernel, grid: GridSpec, corrected: bool, output: OutputMode) -> Result<String, CliError> {
    let r = lipbound(k, &grid, corrected)?;
    if output.json {
        let channels: Vec<Value> = (0..r.per_channel_sups.len())
            .map(|i| {
                json!({
                    "sup": r.per_channel_sups[i],
                    "grid_max_raw": r.grid_max_raw[i],
                    "argmax": [r.argmax_points[i].0, r.argmax_points[i].1],
                })
            })
            .collect();
        let v = json!({
            "bound": r.bound,
            "samples": r.samples,
            "corrected": r.corrected,
            "guarantee_factor": r.guarantee_factor,
            "channels": channels,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
    }
    let mut s = String::new();
    writeln!(s, "bound: {}", num(r.bound)).unwrap();
    writeln!(s, "samples: {}", r.samples).unwrap();
    writeln!(s, "corrected: {}", r.corrected).unwrap();
    match r.guarantee_factor {
        Some(f) => writeln!(s, "guarantee_factor: {}", num(f)).unwrap(),
        None => writeln!(s, "guarantee_factor: none").unwrap(),
    }
    for i in 0..r.per_channel_sups.len() {
        let (w1, w2) = r.argmax_points[i];
        writeln!(
            s,
            "channel {i}: sup {}, grid_max_raw {}, argmax ({}, {})",
            num(r.per_channel_sups[i]),
            num(r.grid_max_raw[i]),
            num(w1),
            num(w2)
        )
        .unwrap();
    }
    Ok(s)
}

struct Row {
    method: Method,
    value: f64,
    ratio: Option<f64>,
    seconds: f64,
}

struct Sweep {
    rows: Vec<Row>,
    skipped: Vec<(Method, String)>,
}

fn compare_one(k: &ConvKernel, opts: &CompareOptions, path: &Path) -> Result<Sweep, CliError> {
    let outcomes = compare_all(k, opts);
    let exact = outcomes
        .iter()
        .find(|o| o.method == Method::ExactSvd)
        .and_then(|o| o.result.as_ref().ok())
        .map(|e| e.value);
    let mut sweep = Sweep {
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for o in outcomes {
        match o.result {
            Ok(est) => sweep.rows.push(Row {
                method: o.method,
                value: est.value,
                ratio: exact.filter(|&e| e > 0.0).map(|e| est.value / e),
                seconds: est.elapsed.as_secs_f64(),
            }),
            Err(e @ (CoreError::CapExceeded { .. } | CoreError::InvalidArgument(_))) => {
                let what = if o.method == Method::ExactSvd {
                    "exact oracle".to_string()
                } else {
                    o.method.name().to_string()
                };
                eprintln!("warning: {}: {what} skipped: {e}", path.display());
                sweep.skipped.push((o.method, e.to_string()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(sweep)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), num)
}

fn compare_report(n: usize, sweep: &Sweep, output: OutputMode) -> String {
    if output.json {
        let rows: Vec<Value> = sweep
            .rows
            .iter()
            .map(|r| {
                json!({
                    "method": r.method.name(),
                    "value": r.value,
                    "ratio_to_exact": r.ratio,
                    "elapsed_seconds": r.seconds,
                })
            })
            .collect();
        let skipped: Vec<Value> = sweep
            .skipped
            .iter()
            .map(|(m, why)| json!({"method": m.name(), "reason": why}))
            .collect();
        let v = json!({"n": n, "rows": rows, "skipped": skipped});
        return format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"));
    }
    let mut s = String::new();
    writeln!(s, "n: {n}").unwrap();
    writeln!(s, "{:<18} {:<24} {:<24} {}", "method", "value", "ratio_to_exact", "elapsed_seconds").unwrap();
    for r in &sweep.rows {
        writeln!(
            s,
            "{:<18} {:<24} {:<24} {}",
            r.method.name(),
            num(r.value),
            cell(r.ratio),
            num(r.seconds)
        )
        .unwrap();
    }
    s
}

struct Summary {
    method: Method,
    count: usize,
    ratio_mean: Option<f64>,
    ratio_std: Option<f64>,
    value_mean: f64,
    seconds_mean: f64,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
    (m, var.sqrt())
}

fn summarize(sweeps: &[Sweep]) -> Vec<Summary> {
    Method::ALL
        .iter()
        .filter_map(|&method| {
            let rows: Vec<&Row> = sweeps.iter().flat_map(|s| s.rows.iter().filter(move |r| r.method == method)).collect();
            if rows.is_empty() {
                return None;
            }
            let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
            let (ratio_mean, ratio_std) = if ratios.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_std(&ratios);
                (Some(m), Some(s))
            };
            let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
            let secs: Vec<f64> = rows.iter().map(|r| r.seconds).collect();
            Some(Summary {
                method,
                count: rows.len(),
                ratio_mean,
                ratio_std,
                value_mean: mean_std(&values).0,
                seconds_mean: mean_std(&secs).0,
            })
        })
        .collect()
}

fn batch_report(n: usize, sweeps: &[Sweep], output: OutputMode) -> String {
    let summary = summarize(sweeps);
    if output.json {
        let rows: Vec<Value> = summary
            .iter()
            .map(|s| {
                json!({
                    "method": s.method.name(),
                    "count": s.count,
                    "ratio_mean": s.ratio_mean,
                    "ratio_std": s.ratio_std,
                    "value_mean": s.value_mean,
                    "elapsed_seconds_mean": s.seconds_mean,
                })
            })
            .collect();
        let v = json!({"n": n, "files": sweeps.len(), "methods": rows});
        return format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"));
    }
    let mut out = String::new();
    writeln!(out, "n: {n}").unwrap();
    writeln!(out, "files: {}", sweeps.len()).unwrap();
    writeln!(
        out,
        "{:<18} {:<6} {:<24} {:<24} {:<24} {}",
        "method", "count", "ratio_mean", "ratio_std", "value_mean", "elapsed_seconds_mean"
    )
    .unwrap();
    for s in &summary {
        writeln!(
            out,
            "{:<18} {:<6} {:<24} {:<24} {:<24} {}",
            s.method.name(),
            s.count,
            cell(s.ratio_mean),
            cell(s.ratio_std),
            num(s.value_mean),
            num(s.seconds_mean)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_list_forms() {
        assert_eq!(parse_n_list("4,8").unwrap(), vec![4, 8]);
        assert_eq!(parse_n_list("5..8").unwrap(), vec![5, 6, 7, 8]);
        assert_eq!(parse_n_list("3, 5..6 ,10").unwrap(), vec![3, 5, 6, 10]);
        assert!(parse_n_list("8..4").is_err());
        assert!(parse_n_list("x").is_err());
        assert!(parse_n_list("").is_err());
    }

    #[test]
    fn mean_std_small() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }
}
