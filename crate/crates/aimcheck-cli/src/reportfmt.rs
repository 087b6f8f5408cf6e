//! Plain-text and CSV renderings of the evaluation report.

use std::fmt::Write as _;

use aimcheck::eval::metrics::det_points;
use aimcheck::pipeline::EvalReport;
use aimcheck::Error;

pub fn summary(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "== Hit accuracy (percent)");
    for (name, acc) in &report.accuracy {
        let _ = writeln!(out, "  {name:<7} {acc:5.1}");
    }

    let _ = writeln!(out, "\n== Movement statistics");
    let _ = writeln!(
        out,
        "  {:<7} {:>10} {:>10} {:>9} {:>9} {:>9}",
        "dataset", "avg|dyaw|", "avg|dpit|", "axiscorr", "lag1 yaw", "lag1 pit"
    );
    for (name, m) in &report.movement {
        let _ = writeln!(
            out,
            "  {:<7} {:>10.3} {:>10.3} {:>9.3} {:>9.3} {:>9.3}",
            name, m.avg_abs_yaw, m.avg_abs_pitch, m.axis_corr, m.step_corr_yaw, m.step_corr_pitch
        );
    }

    let _ = writeln!(out, "\n== Scenario results (EER percent, normalized min-DCF)");
    let mut header = format!("  {:<13} {:<7} {:>6}", "scenario", "aimbot", "EER%");
    for p in &report.scenarios.priors {
        let _ = write!(header, " {:>9}", format!("dcf@{p}"));
    }
    let _ = writeln!(out, "{header}");
    for row in &report.scenarios.rows {
        if !row.applicable {
            let _ = writeln!(
                out,
                "  {:<13} {:<7} {:>6}",
                row.scenario.as_str(),
                row.aimbot.as_str(),
                "-"
            );
            continue;
        }
        let mut line = format!(
            "  {:<13} {:<7} {:>6.2}",
            row.scenario.as_str(),
            row.aimbot.as_str(),
            100.0 * row.eer.unwrap()
        );
        for (_, dcf) in &row.min_dcf {
            let _ = write!(line, " {dcf:>9.3}");
        }
        let _ = writeln!(out, "{line}");
    }

    if !report.aggregation.is_empty() {
        let _ = writeln!(out, "\n== Whole-game EER (oracle scores, mean +- std percent)");
        for (bot, curve) in &report.aggregation {
            let pts: Vec<String> = curve
                .iter()
                .map(|a| {
                    format!(
                        "n={}: {:.1}+-{:.1}",
                        a.n_vectors,
                        100.0 * a.mean_eer,
                        100.0 * a.std_eer
                    )
                })
                .collect();
            let _ = writeln!(out, "  {:<7} {}", bot, pts.join("  "));
        }
    }
    out
}

/// One CSV of every applicable DET curve: scenario,aimbot,threshold,fpr,fnr.
pub fn det_csv(report: &EvalReport) -> Result<String, Error> {
    let mut out = String::from("scenario,aimbot,threshold,fpr,fnr\n");
    for row in &report.scenarios.rows {
        if !row.applicable {
            continue;
        }
        for p in det_points(&row.scores)? {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.scenario.as_str(),
                row.aimbot.as_str(),
                p.threshold,
                p.fpr,
                p.fnr
            );
        }
    }
    Ok(out)
}
