use std::fmt::Write;

use clap::ValueEnum;
use ginv::analysis::{ClassificationReport, ClassificationRule, ConcentrationTable};

use crate::experiments::{ExperimentResult, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(alias = "markdown")]
    Md,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Scientific notation for very small or large magnitudes, for tables.
fn num(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e6) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| "n/a".into())
}

/// Renders a result. `f64` values use the shortest round-trip form, so the
/// CSV loses nothing of the per-item or per-size data.
pub fn render(result: &ExperimentResult, format: Format) -> String {
    match format {
        Format::Csv => csv(result),
        Format::Md => markdown(result),
    }
}

fn csv(r: &ExperimentResult) -> String {
    let mut out = String::new();
    match &r.report {
        Report::Classification(_) | Report::Graph { .. } => {
            out.push_str("index,label,value\n");
            for (i, (v, l)) in r.values.iter().zip(&r.labels).enumerate() {
                let _ = writeln!(out, "{i},{},{v}", l.index());
            }
        }
        Report::Commutant(c) => {
            out.push_str("index,singular_value,kept\n");
            for (i, s) in c.singular_values.iter().enumerate() {
                let _ = writeln!(out, "{i},{s},{}", *s > c.cutoff);
            }
        }
        Report::Concentration { unitary, orthogonal } => {
            out.push_str("n,empirical_var,analytic_var,label,d,empirical_mean,var_stderr\n");
            for t in [unitary, orthogonal] {
                for row in &t.rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        row.n,
                        row.empirical_var,
                        opt(row.analytic_var),
                        t.label.index(),
                        row.d,
                        row.empirical_mean,
                        row.var_stderr
                    );
                }
            }
        }
    }
    out
}

fn rule_text(rule: &ClassificationRule) -> String {
    match rule {
        ClassificationRule::Threshold { c, eps } => format!("threshold c = {c}, ε = {eps}"),
        ClassificationRule::Midpoint => "midpoint".into(),
        ClassificationRule::NearestClassMean => "nearest class mean".into(),
    }
}

fn classification_md(out: &mut String, c: &ClassificationReport) {
    let m = &c.confusion;
    let _ = writeln!(out, "Rule: {}\n", rule_text(&c.rule));
    out.push_str("| true \\ predicted | 0 | 1 |\n|---|---|---|\n");
    let _ = writeln!(out, "| 0 | {} | {} |", m.true0_pred0, m.true0_pred1);
    let _ = writeln!(out, "| 1 | {} | {} |\n", m.true1_pred0, m.true1_pred1);
    out.push_str("| statistic | value |\n|---|---|\n");
    let _ = writeln!(out, "| accuracy | {} |", num(c.accuracy));
    let _ = writeln!(out, "| mean 0 | {} |", num(c.mean_0));
    let _ = writeln!(out, "| mean 1 | {} |", num(c.mean_1));
    let _ = writeln!(out, "| var 0 | {} |", num(c.var_0));
    let _ = writeln!(out, "| var 1 | {} |", num(c.var_1));
    let _ = writeln!(out, "| P(c\\|0) | {} |", num(c.p_c_given_0));
    let _ = writeln!(out, "| P(0\\|c) | {} |", num(c.misclassification));
    let _ = writeln!(out, "| Cantelli bound | {} |", opt_num(c.cantelli));
    let _ = writeln!(out, "| shots | {} |", c.shots);
}

fn concentration_md(out: &mut String, title: &str, t: &ConcentrationTable) {
    let _ = writeln!(out, "### {title}\n");
    out.push_str("| n | d | mean | variance | stderr | analytic variance |\n|---|---|---|---|---|---|\n");
    for r in &t.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.n,
            r.d,
            num(r.empirical_mean),
            num(r.empirical_var),
            num(r.var_stderr),
            opt_num(r.analytic_var)
        );
    }
    let _ = writeln!(
        out,
        "\nlog₂ variance slope: empirical {}, analytic {}\n",
        opt_num(t.empirical_slope),
        opt_num(t.analytic_slope)
    );
}

fn markdown(r: &ExperimentResult) -> String {
    let mut out = String::new();
    let name = serde_json::to_value(r.experiment).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let _ = writeln!(out, "## {name} ({})\n", r.version);
    match &r.report {
        Report::Classification(c) => classification_md(&mut out, c),
        Report::Graph { classification, theta, loss_trace } => {
            let _ = writeln!(out, "Trained θ = [{}, {}, {}]", theta[0], theta[1], theta[2]);
            let _ = writeln!(
                out,
                "Loss {} → {} over {} steps\n",
                opt_num(loss_trace.first().copied()),
                opt_num(loss_trace.last().copied()),
                loss_trace.len().saturating_sub(1)
            );
            classification_md(&mut out, classification);
        }
        Report::Commutant(c) => {
            out.push_str("| quantity | value |\n|---|---|\n");
            let _ = writeln!(out, "| dimension | {} |", c.dimension);
            let _ = writeln!(out, "| cutoff | {} |", num(c.cutoff));
            let _ = writeln!(out, "| rank gap | {} |", num(c.rank_gap));
            let _ = writeln!(out, "| ambiguous | {} |", c.ambiguous);
        }
        Report::Concentration { unitary, orthogonal } => {
            concentration_md(&mut out, "unitary (label 0)", unitary);
            concentration_md(&mut out, "orthogonal (label 1)", orthogonal);
        }
    }
    out
}
