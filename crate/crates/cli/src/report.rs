//! Analysis report: everything `ncfkit analyze` knows about one function,
//! with a stable JSON form and a human text form.

use serde::Serialize;
use serde_json::{json, Value};

use ncfkit_core::canalyze::{
    canalyzing_triples, decompose_essential, ncf_decompose, DecomposeVerdict, NotNcfReason,
};
use ncfkit_core::formulas::{activity_of_layer, average_sensitivity, sensitivity_bounds, weight_from_composition};
use ncfkit_core::oracle::{activity_bruteforce, sensitivity_profile};
use ncfkit_core::{Dyadic, TruthTable};

/// Oracle cross-checks run only up to this size; brute force beyond it is
/// not desk-scale.
pub const ORACLE_MAX_VARS: u32 = 8;

#[derive(Serialize)]
pub struct AnalysisReport {
    pub format: &'static str,
    pub input: String,
    pub n: u32,
    pub table_hex: String,
    /// Popcount of the table, always available.
    pub weight: u64,
    pub essential_variables: Vec<u32>,
    pub canalyzing_triples: Vec<ncfkit_core::CanalyzingTriple>,
    pub ncf: bool,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer_number: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub most_dominant_variables: Option<Vec<u32>>,
    /// Closed-form weight from the composition; must equal `weight`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activities: Option<Vec<ActivityEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_sensitivity: Option<SideBySide>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sensitivity_bounds: Option<BoundsEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_ncf: Option<Value>,
    /// Whether the brute-force cross-check ran (requires --oracle, n <= 8).
    pub oracle_checked: bool,
}

#[derive(Serialize)]
pub struct ActivityEntry {
    pub var: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<Dyadic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Dyadic>,
}

#[derive(Serialize)]
pub struct SideBySide {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<Dyadic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Dyadic>,
}

#[derive(Serialize)]
pub struct BoundsEntry {
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub within: bool,
    pub attains_lower: bool,
}

/// A formula/oracle disagreement; by construction this indicates a bug,
/// so analysis aborts loudly instead of reporting half-truths.
#[derive(Debug)]
pub struct CrossCheckError(pub String);

impl std::fmt::Display for CrossCheckError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "formula/oracle cross-check failed: {}", self.0)
    }
}

impl std::error::Error for CrossCheckError {}

pub fn analyze(
    format: &'static str,
    input: String,
    table: &TruthTable,
    oracle: bool,
) -> Result<AnalysisReport, CrossCheckError> {
    let n = table.n();
    let run_oracle = oracle && (1..=ORACLE_MAX_VARS).contains(&n);
    let verdict = ncf_decompose(table);

    let mut report = AnalysisReport {
        format,
        input,
        n,
        table_hex: table.to_hex_str(),
        weight: table.hamming_weight(),
        essential_variables: table.essential_variables(),
        canalyzing_triples: canalyzing_triples(table),
        ncf: verdict.is_ncf(),
        degenerate: matches!(verdict.structure(), Some(s) if s.is_degenerate()),
        structure: None,
        structure_text: None,
        composition: None,
        layer_number: None,
        most_dominant_variables: None,
        weight_formula: None,
        activities: None,
        average_sensitivity: None,
        sensitivity_bounds: None,
        not_ncf: None,
        oracle_checked: run_oracle,
    };

    match &verdict {
        DecomposeVerdict::Ncf(s) => {
            report.structure = Some(serde_json::to_value(s).expect("structure serializes"));
            report.structure_text = Some(s.to_string());
            report.layer_number = Some(s.layer_number());
            report.most_dominant_variables = Some(s.most_dominant_variables());
            if let Some(comp) = s.composition() {
                report.composition = Some(comp.parts().to_vec());
                let weight = weight_from_composition(&comp, s.b());
                if weight != table.hamming_weight().into() {
                    return Err(CrossCheckError(format!(
                        "weight formula {weight} vs table popcount {}",
                        table.hamming_weight()
                    )));
                }
                report.weight_formula = Some(weight.to_string());

                let mut activities = Vec::new();
                for var in 1..=n {
                    let layer = s.layer_of(var);
                    let formula = layer.map(|l| activity_of_layer(&comp, l).expect("layer in range"));
                    let oracle_value = run_oracle.then(|| activity_bruteforce(table, var));
                    if let (Some(f), Some(o)) = (&formula, &oracle_value) {
                        if f != o {
                            return Err(CrossCheckError(format!(
                                "activity of x{var}: formula {f} vs oracle {o}"
                            )));
                        }
                    }
                    activities.push(ActivityEntry { var, layer, formula, oracle: oracle_value });
                }
                report.activities = Some(activities);

                let sens = average_sensitivity(&comp);
                let sens_oracle = run_oracle.then(|| sensitivity_profile(table).average);
                if let Some(o) = &sens_oracle {
                    if *o != sens {
                        return Err(CrossCheckError(format!(
                            "average sensitivity: formula {sens} vs oracle {o}"
                        )));
                    }
                }
                if n >= 3 {
                    let (lower, upper) = sensitivity_bounds(n).expect("n >= 3");
                    report.sensitivity_bounds = Some(BoundsEntry {
                        within: sens >= lower && sens < upper,
                        attains_lower: sens == lower,
                        lower,
                        upper,
                    });
                }
                report.average_sensitivity = Some(SideBySide { formula: Some(sens), oracle: sens_oracle });
            } else if run_oracle {
                // Degenerate single variable: oracle values only.
                report.average_sensitivity =
                    Some(SideBySide { formula: None, oracle: Some(sensitivity_profile(table).average) });
            }
        }
        DecomposeVerdict::NotNcf(reason) => {
            report.not_ncf = Some(not_ncf_json(table, reason));
            if run_oracle {
                report.average_sensitivity =
                    Some(SideBySide { formula: None, oracle: Some(sensitivity_profile(table).average) });
                report.activities = Some(
                    (1..=n)
                        .map(|var| ActivityEntry {
                            var,
                            layer: None,
                            formula: None,
                            oracle: Some(activity_bruteforce(table, var)),
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(report)
}

fn not_ncf_json(table: &TruthTable, reason: &NotNcfReason) -> Value {
    match reason {
        NotNcfReason::InessentialVariable(var) => {
            let projected = decompose_essential(table);
            json!({
                "reason": "inessential_variable",
                "var": var,
                "projection": {
                    "essential": projected.essential,
                    "ncf": projected.verdict.is_ncf(),
                    "structure_text": projected.verdict.structure().map(|s| s.to_string()),
                },
            })
        }
        NotNcfReason::NoCanalyzingVariableAtDepth { depth, residual } => json!({
            "reason": "no_canalyzing_variable",
            "depth": depth,
            "residual_vars": residual.vars,
            "residual_anf": residual.anf_text(),
            "residual_hex": residual.table.to_hex_str(),
        }),
        NotNcfReason::ConstantFunction => json!({ "reason": "constant_function" }),
        NotNcfReason::TooFewVariables => json!({ "reason": "too_few_variables" }),
    }
}

fn var_list(vars: &[u32]) -> String {
    if vars.is_empty() {
        "none".to_string()
    } else {
        vars.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join(" ")
    }
}

fn dyadic_text(d: &Dyadic) -> String {
    format!("{d} ({})", d.to_decimal_string())
}

impl AnalysisReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("input ({}): {} (n = {})", self.format, self.input, self.n));
        line(format!("table (hex): {}", self.table_hex));
        line(format!("weight: {}", self.weight));
        line(format!("essential variables: {}", var_list(&self.essential_variables)));
        let triples = if self.canalyzing_triples.is_empty() {
            "none".to_string()
        } else {
            self.canalyzing_triples
                .iter()
                .map(|t| format!("<{}:{}:{}>", t.var, t.input as u8, t.output as u8))
                .collect::<Vec<_>>()
                .join(" ")
        };
        line(format!("canalyzing triples: {triples}"));
        if self.ncf {
            let degenerate = if self.degenerate { ", degenerate single variable" } else { "" };
            line(format!("verdict: NCF (layer number {}{})", self.layer_number.unwrap_or(1), degenerate));
            if let Some(text) = &self.structure_text {
                line(format!("structure: {text}"));
            }
            if let Some(comp) = &self.composition {
                let parts: Vec<String> = comp.iter().map(|k| k.to_string()).collect();
                line(format!("composition: ({})", parts.join(",")));
            }
            if let Some(dom) = &self.most_dominant_variables {
                line(format!("most dominant variables: {}", var_list(dom)));
            }
            if let Some(w) = &self.weight_formula {
                line(format!("weight (formula): {w}"));
            }
        } else {
            line("verdict: not NCF".to_string());
            if let Some(reason) = &self.not_ncf {
                match reason["reason"].as_str() {
                    Some("inessential_variable") => {
                        line(format!("reason: variable x{} is inessential", reason["var"]));
                        if let Some(text) = reason["projection"]["structure_text"].as_str() {
                            line(format!(
                                "projection on essential variables {}: NCF, structure: {text}",
                                reason["projection"]["essential"]
                            ));
                        } else {
                            line(format!(
                                "projection on essential variables {}: not NCF",
                                reason["projection"]["essential"]
                            ));
                        }
                    }
                    Some("no_canalyzing_variable") => {
                        line(format!("reason: no canalyzing variable at depth {}", reason["depth"]));
                        line(format!(
                            "residual: {} (hex {})",
                            reason["residual_anf"].as_str().unwrap_or("?"),
                            reason["residual_hex"].as_str().unwrap_or("?"),
                        ));
                    }
                    Some("constant_function") => line("reason: constant function".to_string()),
                    _ => line(format!("reason: {reason}")),
                }
            }
        }
        if let Some(acts) = &self.activities {
            let rendered: Vec<String> = acts
                .iter()
                .map(|a| {
                    let value = a
                        .formula
                        .as_ref()
                        .or(a.oracle.as_ref())
                        .map(dyadic_text)
                        .unwrap_or_else(|| "?".to_string());
                    match a.layer {
                        Some(l) => format!("x{} = {value} [layer {l}]", a.var),
                        None => format!("x{} = {value}", a.var),
                    }
                })
                .collect();
            line(format!("activities: {}", rendered.join(", ")));
        }
        if let Some(s) = &self.average_sensitivity {
            if let Some(f) = &s.formula {
                line(format!("average sensitivity: {}", dyadic_text(f)));
            } else if let Some(o) = &s.oracle {
                line(format!("average sensitivity (oracle): {}", dyadic_text(o)));
            }
        }
        if let Some(b) = &self.sensitivity_bounds {
            line(format!(
                "bounds: {} <= s < {}: {}; lower attained: {}",
                dyadic_text(&b.lower),
                dyadic_text(&b.upper),
                if b.within { "within" } else { "VIOLATED" },
                if b.attains_lower { "yes (single layer)" } else { "no" },
            ));
        }
        if self.oracle_checked {
            line("oracle cross-check: agreed".to_string());
        }
        out
    }
}
