//! Report structure and its text and json renderings.

use std::fmt::Write;

use brieskorn_core::brieskorn::HbarCertificate;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "brieskorn-lab/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub input: InputEcho,
    pub smooth: Option<bool>,
    pub jacobian: Option<JacobianSection>,
    pub pole: Option<PoleSection>,
    pub charts: Option<Vec<ChartSection>>,
    /// `"inf"` for smooth hypersurfaces.
    pub alpha_y: Option<String>,
    pub hodge: Option<Vec<HodgeRow>>,
    pub briancon_skoda: Option<BsSection>,
    pub milnor: Option<MilnorSection>,
    pub family: Option<FamilySection>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub variables: Vec<String>,
    pub polynomial: String,
    pub n: usize,
    pub d: u32,
    pub policy: PolicyEcho,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyEcho {
    pub window: usize,
    pub max_power: u32,
    pub min_target_degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianSection {
    /// `dims[k] = dim R_k`.
    pub dims: Vec<usize>,
    pub smoothness_degree: i64,
    pub tjurina: Option<usize>,
    pub tjurina_start_degree: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleSection {
    /// `dims[q] = dim P^{n-q} H^n(U)`.
    pub dims: Vec<usize>,
    pub h_n: usize,
    pub certificates: Vec<HbarCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSection {
    pub point: Vec<String>,
    pub chart: String,
    pub weights: Vec<String>,
    pub local_equation: String,
    pub principal_part: String,
    pub semi_weighted: bool,
    pub milnor_number: u64,
    pub alpha: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeRow {
    pub q: u32,
    pub jq_dim: usize,
    pub hodge_dim: usize,
    pub pole_dim: usize,
    pub certificate: HbarCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsSection {
    pub holds: bool,
    pub witness_power: Option<u32>,
    pub certificate: HbarCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorSection {
    pub eigenspaces: Vec<MilnorRow>,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorRow {
    pub i: i64,
    pub dim: usize,
    pub cross_check: usize,
    pub certificate: HbarCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySection {
    pub direction: String,
    pub s0: String,
    pub samples: Vec<String>,
    pub pole_dims: Vec<Vec<usize>>,
    pub pole_dims_constant: bool,
    pub tjurina: Vec<Option<u64>>,
    pub tjurina_jumps: Vec<String>,
    pub nabla: Vec<NablaSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NablaSection {
    pub q: u32,
    pub source_basis: Vec<String>,
    pub target_basis: Vec<String>,
    /// Row-major, `target × source`.
    pub matrix: Vec<Vec<String>>,
    pub powers: [u32; 2],
    pub power_independent: bool,
    pub well_defined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, input: InputEcho) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            input,
            smooth: None,
            jacobian: None,
            pole: None,
            charts: None,
            alpha_y: None,
            hodge: None,
            briancon_skoda: None,
            milnor: None,
            family: None,
            checks: Vec::new(),
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.input;
        let _ = writeln!(out, "{} ({})", self.command, self.schema);
        kv(&mut out, &[
            ("polynomial", i.polynomial.clone()),
            ("variables", i.variables.join(", ")),
            ("n, d", format!("{}, {}", i.n, i.d)),
            (
                "policy",
                format!(
                    "window {}, max power {}, min target degree {}",
                    i.policy.window, i.policy.max_power, i.policy.min_target_degree
                ),
            ),
        ]);
        if let Some(s) = self.smooth {
            kv(&mut out, &[("smooth", s.to_string())]);
        }
        if let Some(j) = &self.jacobian {
            section(&mut out, "jacobian ring");
            let mut rows = Vec::new();
            for (k, d) in j.dims.iter().enumerate() {
                rows.push(vec![k.to_string(), d.to_string()]);
            }
            table(&mut out, &["k", "dim R_k"], &rows);
            kv(&mut out, &[
                ("smoothness degree", j.smoothness_degree.to_string()),
                ("tjurina", opt(&j.tjurina)),
            ]);
        }
        if let Some(p) = &self.pole {
            section(&mut out, "pole order filtration");
            let n = self.input.n;
            let rows: Vec<Vec<String>> = p
                .dims
                .iter()
                .zip(&p.certificates)
                .enumerate()
                .map(|(q, (d, c))| {
                    vec![
                        q.to_string(),
                        format!("P^{}", n - q),
                        c.k.to_string(),
                        d.to_string(),
                        c.power.to_string(),
                        trace(&c.trace),
                    ]
                })
                .collect();
            table(&mut out, &["q", "piece", "k", "dim", "power", "rank trace"], &rows);
            kv(&mut out, &[("dim H^n(U)", p.h_n.to_string())]);
        }
        if let Some(charts) = &self.charts {
            section(&mut out, "singular points");
            let rows: Vec<Vec<String>> = charts
                .iter()
                .map(|c| {
                    vec![
                        format!("({})", c.point.join(":")),
                        c.chart.clone(),
                        c.weights.join(", "),
                        c.principal_part.clone(),
                        c.milnor_number.to_string(),
                        c.alpha.clone(),
                        if c.semi_weighted { "yes" } else { "no" }.to_string(),
                    ]
                })
                .collect();
            table(
                &mut out,
                &["point", "chart", "weights", "principal part", "mu", "alpha", "semi"],
                &rows,
            );
        }
        if let Some(a) = &self.alpha_y {
            kv(&mut out, &[("alpha_Y", a.clone())]);
        }
        if let Some(h) = &self.hodge {
            section(&mut out, "hodge filtration");
            let n = self.input.n;
            let rows: Vec<Vec<String>> = h
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        format!("F^{}", n - r.q as usize),
                        r.jq_dim.to_string(),
                        r.hodge_dim.to_string(),
                        r.pole_dim.to_string(),
                        r.certificate.power.to_string(),
                    ]
                })
                .collect();
            table(&mut out, &["q", "piece", "dim J^(q)", "dim F", "dim P", "power"], &rows);
        }
        if let Some(b) = &self.briancon_skoda {
            section(&mut out, "briancon-skoda");
            kv(&mut out, &[
                ("holds", b.holds.to_string()),
                ("witness power", opt(&b.witness_power)),
                ("rank trace", trace(&b.certificate.trace)),
            ]);
        }
        if let Some(m) = &self.milnor {
            section(&mut out, "milnor fiber eigenspaces");
            let rows: Vec<Vec<String>> = m
                .eigenspaces
                .iter()
                .map(|e| {
                    vec![
                        e.i.to_string(),
                        e.certificate.k.to_string(),
                        e.dim.to_string(),
                        e.cross_check.to_string(),
                        e.certificate.power.to_string(),
                    ]
                })
                .collect();
            table(&mut out, &["i", "k", "dim", "one period lower", "power"], &rows);
            kv(&mut out, &[("total", m.total.to_string())]);
        }
        if let Some(f) = &self.family {
            section(&mut out, "family f + s g");
            kv(&mut out, &[("g", f.direction.clone()), ("s0", f.s0.clone())]);
            let rows: Vec<Vec<String>> = f
                .samples
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    vec![
                        s.clone(),
                        trace(f.pole_dims.get(j).map(Vec::as_slice).unwrap_or(&[])),
                        opt(&f.tjurina.get(j).copied().flatten()),
                    ]
                })
                .collect();
            table(&mut out, &["s", "pole dims", "tjurina"], &rows);
            kv(&mut out, &[
                ("pole dims constant", f.pole_dims_constant.to_string()),
                ("tjurina jumps", list(&f.tjurina_jumps)),
            ]);
            for nb in &f.nabla {
                let _ = writeln!(
                    out,
                    "\n  Gr nabla at q = {}: {} x {} (powers {}, {}; power independent {}, well defined {})",
                    nb.q,
                    nb.target_basis.len(),
                    nb.source_basis.len(),
                    nb.powers[0],
                    nb.powers[1],
                    nb.power_independent,
                    nb.well_defined
                );
                if !nb.source_basis.is_empty() && !nb.target_basis.is_empty() {
                    let mut headers = vec![String::new()];
                    headers.extend(nb.source_basis.iter().cloned());
                    let rows: Vec<Vec<String>> = nb
                        .target_basis
                        .iter()
                        .zip(&nb.matrix)
                        .map(|(t, row)| {
                            let mut r = vec![t.clone()];
                            r.extend(row.iter().cloned());
                            r
                        })
                        .collect();
                    let h: Vec<&str> = headers.iter().map(String::as_str).collect();
                    table(&mut out, &h, &rows);
                }
            }
        }
        if !self.checks.is_empty() {
            section(&mut out, "checks");
            let rows: Vec<Vec<String>> = self
                .checks
                .iter()
                .map(|c| vec![if c.passed { "pass" } else { "FAIL" }.to_string(), c.name.clone()])
                .collect();
            table(&mut out, &["result", "check"], &rows);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time: {t} ms");
        }
        out
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn trace(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn list(v: &[String]) -> String {
    if v.is_empty() {
        "none".to_string()
    } else {
        v.join(", ")
    }
}

fn section(out: &mut String, title: &str) {
    let _ = writeln!(out, "\n{title}");
}

fn kv(out: &mut String, pairs: &[(&str, String)]) {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in pairs {
        let _ = writeln!(out, "  {k:<width$}  {v}");
    }
}

fn table(out: &mut String, headers: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("  {}", padded.join("  ").trim_end())
    };
    let _ = writeln!(out, "{}", line(headers.to_vec()));
    for r in rows {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
}
