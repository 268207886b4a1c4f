use sympsim_core::io::{EvolveInput, TrajectoryReport};

use crate::failure::{read_input, Failure};
use crate::output::{csv_text, emit, json_line};
use crate::{EvolveArgs, MethodArg, OutFormat};

fn trajectory_csv(report: &TrajectoryReport) -> Result<String, Failure> {
    let n = report.q.first().map_or(0, Vec::len);
    csv_text(|w| {
        let mut header = vec!["t".to_string(), "hsym".into(), "hsym_drift".into(), "norm".into()];
        header.extend((0..n).map(|i| format!("q{i}")));
        header.extend((0..n).map(|i| format!("p{i}")));
        w.write_record(&header)?;
        for i in 0..report.times.len() {
            let mut row = vec![report.times[i], report.hsym[i], report.hsym_drift[i], report.norm[i]];
            row.extend(&report.q[i]);
            row.extend(&report.p[i]);
            w.write_record(row.iter().map(f64::to_string))?;
        }
        Ok(())
    })
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<(), Failure> {
    let text = read_input(&args.input)?;
    let mut input: EvolveInput =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", args.input.display())))?;
    if let Some(dt) = args.dt {
        input.dt = dt;
    }
    if let Some(method) = args.method {
        input.method = match method {
            MethodArg::Midpoint => "midpoint",
            MethodArg::Strang => "strang",
        }
        .into();
    }
    let report = input.run().map_err(Failure::from_validation)?;
    if !report.is_finite() {
        return Err(Failure::runtime("trajectory contains non-finite values; nothing written"));
    }
    let text = match args.out {
        OutFormat::Json => json_line(&report)? + "\n",
        OutFormat::Csv => trajectory_csv(&report)?,
    };
    emit(&text)
}
