//! Subcommand implementations. Each returns the text to print.

use std::fmt::Write as _;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context};
use eigenlogic::basis::tuples;
use eigenlogic::binary::{connective_bits, connective_name, named_connective};
use eigenlogic::formula::{compile, eval_classical, parse, Formula};
use eigenlogic::fuzzy::{fuzzify, membership};
use eigenlogic::world::{write_csv, StepRecord};
use eigenlogic::LogicalObservable;

use crate::config::SimConfig;

/// Resolves a connective name, bit string, `min`/`max`, or formula.
fn resolve(input: &str, m: u32) -> anyhow::Result<(String, Vec<String>, LogicalObservable)> {
    let ab = || vec!["A".to_string(), "B".to_string()];
    let lower = input.trim().to_ascii_lowercase();
    if lower == "min" || lower == "max" {
        let f = compile(&parse(&format!("{lower}(A, B)"))?, m)?;
        return Ok((lower, ab(), f));
    }
    if let Some(bits) = connective_bits(input.trim()) {
        if m != 2 {
            bail!("named connective `{input}` is two-valued; pass a formula for m = {m}");
        }
        let name = connective_name(bits).unwrap_or(bits).to_string();
        let f = named_connective(&name).context("connective table is inconsistent")?;
        return Ok((name, ab(), f));
    }
    let ast = parse(input)?;
    if let Formula::Var(name) = &ast {
        bail!("unknown connective `{name}`");
    }
    let f = compile(&ast, m)?;
    Ok((ast.to_string(), ast.variables(), f))
}

fn fmt_value(x: f64) -> String {
    if x == x.trunc() {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

pub fn truth_table(input: &str, m: u32) -> anyhow::Result<String> {
    let (label, vars, f) = resolve(input, m)?;
    let mut out = String::new();
    writeln!(out, "{} | {label}", vars.join(" "))?;
    for (digits, value) in tuples(m as usize, vars.len()).zip(f.diagonal()) {
        let row: Vec<String> = digits.iter().zip(&vars).map(|(d, v)| format!("{d:>w$}", w = v.len())).collect();
        writeln!(out, "{} | {}", row.join(" "), fmt_value(*value))?;
    }
    let diag: Vec<String> = f.diagonal().iter().map(|&x| fmt_value(x)).collect();
    writeln!(out, "diagonal: {}", diag.join(","))?;
    Ok(out)
}

pub fn membership_of(formula: &str, mus: &[f64]) -> anyhow::Result<f64> {
    let ast = parse(formula)?;
    let vars = ast.variables();
    if vars.len() != mus.len() {
        bail!("formula has {} variable(s) ({}) but {} value(s) were given", vars.len(), vars.join(", "), mus.len());
    }
    let states = mus.iter().map(|&mu| fuzzify(mu)).collect::<Result<Vec<_>, _>>()?;
    let f = compile(&ast, 2)?;
    Ok(membership(&states, &f)?.value())
}

pub fn membership_report(formula: &str, mus: &[f64]) -> anyhow::Result<String> {
    Ok(format!("{:.12}\n", membership_of(formula, mus)?))
}

pub fn eval_report(formula: &str, values: &[u32], m: u32) -> anyhow::Result<String> {
    let ast: Formula = parse(formula)?;
    Ok(format!("{}\n", eval_classical(&ast, values, m)?))
}

/// Runs the configured simulation, writes the CSV and returns a summary.
pub fn simulate(config: &Path, out: &Path) -> anyhow::Result<String> {
    let config = SimConfig::load(config)?;
    let world = config.world()?;
    let (end, trajectory) = world.run(config.dt, config.steps)?;
    let file = std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_csv(&trajectory, BufWriter::new(file)).with_context(|| format!("writing {}", out.display()))?;

    let mut s = String::new();
    writeln!(s, "steps: {}  dt: {}  final time: {:.4}", config.steps, config.dt, end.time)?;
    for (start, v) in world.vehicles.iter().zip(&end.vehicles) {
        let rows: Vec<&StepRecord> = trajectory.iter().filter(|r| r.vehicle_id == v.id).collect();
        writeln!(
            s,
            "vehicle {} ({}, {}): final x={:.4} y={:.4} heading={:.4}",
            v.id,
            v.archetype.name(),
            v.mode.name(),
            v.x,
            v.y,
            v.heading
        )?;
        match rows.last() {
            Some(last) => {
                let mean = rows.iter().map(|r| (r.v_l + r.v_r) / 2.0).sum::<f64>() / rows.len() as f64;
                writeln!(s, "  final speeds vL={:.4} vR={:.4}  mean speed={:.4}", last.v_l, last.v_r, mean)?;
            }
            None => writeln!(s, "  no steps taken")?,
        }
        for l in &world.lights {
            let d = |x: f64, y: f64| (x - l.x).hypot(y - l.y);
            let min = rows.iter().map(|r| d(r.x, r.y)).fold(d(start.x, start.y), f64::min);
            writeln!(s, "  light {}: min distance={:.4} final distance={:.4}", l.id, min, d(v.x, v.y))?;
        }
    }
    Ok(s)
}
