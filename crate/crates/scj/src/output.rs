//! CSV and JSON emission.
//!
//! Floats are written with 9 significant digits. Nothing time- or
//! host-dependent is written unless timing was requested, so identical
//! inputs give byte-identical files.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, Format, Mode};
use crate::run::{OptimizeReport, Row, SweepReport};

/// `v` with 9 significant digits.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn metadata(config: &ExperimentConfig) -> Vec<(String, String)> {
    let mut meta = vec![
        ("generator".into(), format!("scj {}", env!("CARGO_PKG_VERSION"))),
        ("mode".into(), config.mode.name().into()),
    ];
    if config.mode != Mode::Optimize {
        meta.push(("scheme".into(), config.scheme.name().into()));
        meta.push(("engine".into(), config.engine.name().into()));
    }
    meta.push(("scenario".into(), config.scenario.name().into()));
    meta.push(("seed".into(), config.seed.to_string()));
    if config.engine.monte_carlo() {
        meta.push(("trials".into(), config.trials.to_string()));
        meta.push(("secrecy_trials".into(), config.secrecy_trials.to_string()));
        meta.push(("window_radius".into(), float(config.window_radius)));
    }
    if config.mode == Mode::Validate {
        meta.push(("tolerance".into(), float(config.tolerance)));
    }
    let grid: Vec<String> = config
        .sweep
        .iter()
        .map(|a| {
            let keys: Vec<&str> = a.keys.iter().map(|k| k.name()).collect();
            format!("{}[{}]", keys.join("+"), a.points.len())
        })
        .collect();
    meta.push(("grid".into(), if grid.is_empty() { "single point".into() } else { grid.join(" x ") }));
    let params: Vec<String> =
        crate::config::Key::PARAMS.iter().map(|k| format!("{}={}", k.name(), float(k.get(&config.params)))).collect();
    meta.push(("params".into(), params.join(" ")));
    meta
}

fn columns(config: &ExperimentConfig) -> Vec<String> {
    let mut cols: Vec<String> = config.sweep.iter().flat_map(|a| a.keys.iter().map(|k| k.name().to_owned())).collect();
    if config.engine.analytic() {
        cols.extend(["pc", "ps", "stc", "nsee"].map(String::from));
    }
    if config.engine.monte_carlo() {
        cols.extend(["mc_pc", "mc_pc_hw95", "mc_ps", "mc_ps_hw95", "mc_stc", "mc_nsee"].map(String::from));
    }
    if config.mode == Mode::Validate {
        cols.extend(["pc_delta", "ps_delta", "pass"].map(String::from));
    }
    cols.push("error".into());
    if config.timing {
        cols.push("wall_ms".into());
    }
    cols
}

fn fields(config: &ExperimentConfig, row: &Row) -> Vec<String> {
    let mut out: Vec<String> = row.point.iter().map(|&(_, v)| float(v)).collect();
    if config.engine.analytic() {
        let a = row.analytic.unwrap_or_default();
        out.extend([opt(a.pc), opt(a.ps), opt(a.stc), opt(a.nsee)]);
    }
    if config.engine.monte_carlo() {
        let m = row.mc.unwrap_or_default();
        out.extend([
            opt(m.pc.map(|e| e.mean)),
            opt(m.pc.map(|e| e.half_width_95)),
            opt(m.ps.map(|e| e.mean)),
            opt(m.ps.map(|e| e.half_width_95)),
            opt(m.stc),
            opt(m.nsee),
        ]);
    }
    if config.mode == Mode::Validate {
        let c = row.check;
        out.extend([
            opt(c.and_then(|c| c.pc_delta)),
            opt(c.and_then(|c| c.ps_delta)),
            c.map(|c| c.passed.to_string()).unwrap_or_default(),
        ]);
    }
    out.push(row.error.clone().unwrap_or_default());
    if config.timing {
        out.push(opt(row.wall_ms));
    }
    out
}

pub fn write_sweep<W: Write>(config: &ExperimentConfig, report: &SweepReport, mut w: W) -> io::Result<()> {
    match config.format {
        Format::Csv => {
            for (k, v) in metadata(config) {
                writeln!(w, "# {k}: {v}")?;
            }
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(columns(config))?;
            for row in &report.rows {
                csv.write_record(fields(config, row))?;
            }
            csv.flush()?;
            Ok(())
        }
        Format::Json => {
            let cols = columns(config);
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|row| {
                    let map: Map<String, Value> = cols
                        .iter()
                        .zip(fields(config, row))
                        .map(|(c, f)| (c.clone(), if f.is_empty() { Value::Null } else { Value::String(f) }))
                        .collect();
                    Value::Object(map)
                })
                .collect();
            write_json(&json!({ "metadata": meta_object(config), "rows": rows }), w)
        }
    }
}

fn meta_object(config: &ExperimentConfig) -> Value {
    Value::Object(metadata(config).into_iter().map(|(k, v)| (k, Value::String(v))).collect())
}

#[derive(Serialize)]
struct Evaluation {
    jamming: f64,
    lambda_t: f64,
    lambda_p: f64,
    stc: f64,
}

pub fn write_optimize<W: Write>(config: &ExperimentConfig, report: &OptimizeReport, w: W) -> io::Result<()> {
    let settings = config.optimize.as_ref().expect("optimize settings are present in optimize mode");
    let results: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let point: Map<String, Value> = row.point.iter().map(|&(k, v)| (k.name().to_owned(), json!(v))).collect();
            let mut entry = json!({
                "point": point,
                "problem": row.problem.name(),
                "scheme": row.problem.scheme().name(),
                "epsilon": row.epsilon,
            });
            let obj = entry.as_object_mut().expect("object literal");
            match &row.result {
                Ok((r, nsee)) => {
                    obj.insert(
                        "argmax".into(),
                        json!({ "jamming": r.argmax.jamming, "lambda_t": r.argmax.lambda_t, "lambda_p": r.argmax.lambda_p }),
                    );
                    obj.insert("stc".into(), json!(r.value));
                    obj.insert("nsee".into(), json!(nsee));
                    obj.insert("evaluations".into(), json!(r.trace.len()));
                    if settings.trace {
                        let trace: Vec<Evaluation> = r
                            .trace
                            .iter()
                            .map(|&(p, v)| Evaluation { jamming: p.jamming, lambda_t: p.lambda_t, lambda_p: p.lambda_p, stc: v })
                            .collect();
                        obj.insert("trace".into(), json!(trace));
                    }
                }
                Err(e) => {
                    obj.insert("error".into(), json!(e));
                }
            }
            if let Some(ms) = row.wall_ms {
                obj.insert("wall_ms".into(), json!(ms));
            }
            entry
        })
        .collect();
    let mut meta = meta_object(config);
    let solver = &settings.solver;
    meta.as_object_mut().expect("object").insert(
        "solver".into(),
        json!({
            "problems": settings.problems.iter().map(|p| p.name()).collect::<Vec<_>>(),
            "objective": format!("{:?}", settings.objective).to_lowercase(),
            "grid_points": solver.grid_points,
            "refinements": solver.refinements,
            "lattice_steps": solver.lattice_steps,
            "density_step": solver.density_step,
        }),
    );
    write_json(&json!({ "metadata": meta, "results": results }), w)
}

fn write_json<W: Write>(value: &Value, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(float(0.123456789123), "1.23456789e-1");
        assert_eq!(float(1e-4), "1.00000000e-4");
        assert_eq!(float(0.0), "0.00000000e0");
    }
}
