use std::path::Path;

use qca_core::io::{read_seed, read_seed_file, read_text, seed_to_json, write_text};
use qca_core::seed::QuantumSeed;
use qca_core::{Error, Result};
use serde_json::json;

use crate::output::Outcome;
use crate::{Context, SeedCmd};

pub fn run(_ctx: &Context, cmd: SeedCmd) -> Result<Outcome> {
    match cmd {
        SeedCmd::Check { file } => check(&file),
        SeedCmd::Mutate { file, k, output } => {
            let seed = read_seed(&file)?;
            let idx = k.checked_sub(1).ok_or(Error::IndexOutOfRange { index: 0, bound: seed.n() + 1 })?;
            emit_seed(&seed.mutate(idx)?, output.as_deref())
        }
        SeedCmd::Principal { b, d, output } => {
            let text = read_text(&b)?;
            let matrix: Vec<Vec<i64>> = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", b.display())))?;
            emit_seed(&QuantumSeed::principal(&matrix, &d)?, output.as_deref())
        }
        SeedCmd::Double { file, output } => emit_seed(&read_seed(&file)?.double()?, output.as_deref()),
    }
}

fn one_based(order: &[usize]) -> String {
    let inner: Vec<String> = order.iter().map(|k| (k + 1).to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn check(path: &Path) -> Result<Outcome> {
    let seed = QuantumSeed::from_file_unchecked(&read_seed_file(path)?)?;
    let report = seed.validate();
    let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    let acyclic = seed.is_acyclic();
    let orders: Vec<Vec<usize>> = if acyclic { seed.compatible_orders() } else { Vec::new() };
    let mut text = vec![if report.is_valid() { "valid".to_string() } else { "invalid".to_string() }];
    text.push(if acyclic { "acyclic".into() } else { "not acyclic".into() });
    if acyclic {
        let listed: Vec<String> = orders.iter().map(|o| one_based(o)).collect();
        text.push(format!("compatible orders: {}", listed.join(", ")));
    }
    let mut text = text.join("; ");
    for v in &violations {
        text.push_str(&format!("\n  {v}"));
    }
    let machine = json!({
        "valid": report.is_valid(),
        "acyclic": acyclic,
        "compatible_orders": orders.iter().map(|o| o.iter().map(|k| k + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "violations": violations,
    });
    Ok(Outcome { text, machine, ok: report.is_valid() })
}

fn emit_seed(seed: &QuantumSeed, output: Option<&Path>) -> Result<Outcome> {
    let text = seed_to_json(seed);
    let machine: serde_json::Value = serde_json::from_str(&text).expect("seed json is valid");
    match output {
        Some(path) => {
            write_text(path, &text)?;
            Ok(Outcome::ok(format!("wrote {}", path.display()), json!({ "written": path, "seed": machine })))
        }
        None => Ok(Outcome::ok(text, machine)),
    }
}
