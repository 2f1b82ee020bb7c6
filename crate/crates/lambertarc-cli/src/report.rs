//! Rendering of command results in the three output formats.
//!
//! All numbers arriving here are already in user units. JSON documents
//! carry `"schemaVersion": 1`; CSV tables use fixed headers with one
//! record per line and no quoting (no field ever contains a comma).

use serde_json::{json, Value};

/// A planar state in user units: position, velocity.
pub type StateOut = ([f64; 2], [f64; 2]);

/// One solved arc, ready for printing.
#[derive(Debug, Clone)]
pub struct SolutionRow {
    pub revs: u32,
    pub class: &'static str,
    pub va: f64,
    pub eta: f64,
    pub beta_hat: f64,
    pub energy: f64,
    pub tof_residual: f64,
    pub certified: bool,
    pub multiplicity: u32,
    pub state: StateOut,
    pub mirror_state: Option<StateOut>,
}

impl SolutionRow {
    pub fn arcs(&self) -> u32 {
        self.multiplicity
    }
}

/// One census row in user-facing form.
#[derive(Debug, Clone, Copy)]
pub struct CountRow {
    pub n: u32,
    pub direct: u32,
    pub indirect: u32,
    pub direct_certified: bool,
    pub indirect_certified: bool,
}

/// One sample of a time-of-flight sweep. The finite differences are
/// central and divided by the parameter step, so they approximate
/// `dT/dp` and `d²T/dp²`; they are absent at the endpoints.
#[derive(Debug, Clone, Copy)]
pub struct CurveRow {
    pub value: f64,
    pub tof: f64,
    pub dtof: Option<f64>,
    pub d2tof: Option<f64>,
}

/// One verified arc.
#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub revs: u32,
    pub class: &'static str,
    pub va: f64,
    pub tof_residual: f64,
    /// Arrival distance from `B` after propagating the reconstructed
    /// departure state; absent when propagation is not applicable.
    pub miss: Option<f64>,
    /// Same check on the mirror arc of a multiplicity-2 root.
    pub mirror_miss: Option<f64>,
    pub method: &'static str,
    pub ok: bool,
}

fn state_json(state: &StateOut) -> Value {
    json!({ "position": [state.0[0], state.0[1]], "velocity": [state.1[0], state.1[1]] })
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Common document head shared by every JSON report.
pub fn json_head(command: &str, mu: f64, tof: Option<f64>, problem: Value) -> Value {
    let mut doc = json!({
        "schemaVersion": 1,
        "command": command,
        "mu": mu,
        "problem": problem,
    });
    if let Some(t) = tof {
        doc["tof"] = json!(t);
    }
    doc
}

pub fn solve_json(mut head: Value, rows: &[SolutionRow]) -> String {
    let solutions: Vec<Value> = rows.iter().map(solution_json).collect();
    head["count"] = json!(rows.iter().map(SolutionRow::arcs).sum::<u32>());
    head["solutions"] = Value::Array(solutions);
    pretty(&head)
}

pub fn solution_json(row: &SolutionRow) -> Value {
    let mut sol = json!({
        "revs": row.revs,
        "arcClass": row.class,
        "vA": row.va,
        "eta": row.eta,
        "betaHat": row.beta_hat,
        "H": row.energy,
        "tofResidual": row.tof_residual,
        "certified": row.certified,
        "multiplicity": row.multiplicity,
        "initialState": state_json(&row.state),
    });
    if let Some(mirror) = &row.mirror_state {
        sol["mirrorState"] = state_json(mirror);
    }
    sol
}

pub fn solve_csv(rows: &[SolutionRow]) -> String {
    let mut out = String::from(
        "revs,class,vA,eta,betaHat,H,tofResidual,certified,multiplicity,x0,y0,vx0,vy0\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.revs,
            r.class,
            r.va,
            r.eta,
            r.beta_hat,
            r.energy,
            r.tof_residual,
            r.certified,
            r.multiplicity,
            r.state.0[0],
            r.state.0[1],
            r.state.1[0],
            r.state.1[1],
        ));
    }
    out
}

pub fn solve_human(header: &str, rows: &[SolutionRow]) -> String {
    let mut out = format!("{header}\n");
    if rows.is_empty() {
        out.push_str("no arcs in the requested classes reach B at this time\n");
        return out;
    }
    out.push_str(&format!(
        "{:>4}  {:<9} {:>15} {:>12} {:>12} {:>15} {:>10}  {:<5} {:>4}\n",
        "revs", "class", "vA", "eta", "betaHat", "H", "residual", "cert", "mult"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:>4}  {:<9} {:>15.8} {:>12.8} {:>12.8} {:>15.8} {:>10.2e}  {:<5} {:>4}\n",
            r.revs,
            r.class,
            r.va,
            r.eta,
            r.beta_hat,
            r.energy,
            r.tof_residual,
            if r.certified { "yes" } else { "no" },
            r.multiplicity,
        ));
    }
    let arcs: u32 = rows.iter().map(SolutionRow::arcs).sum();
    out.push_str(&format!("{} arc(s) from {} root(s)\n", arcs, rows.len()));
    out
}

pub fn count_json(mut head: Value, rows: &[CountRow]) -> String {
    let census: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "direct": r.direct,
                "indirect": r.indirect,
                "directCertified": r.direct_certified,
                "indirectCertified": r.indirect_certified,
            })
        })
        .collect();
    head["census"] = Value::Array(census);
    head["total"] = json!(rows.iter().map(|r| r.direct + r.indirect).sum::<u32>());
    pretty(&head)
}

pub fn count_csv(rows: &[CountRow]) -> String {
    let mut out = String::from("n,direct,indirect,directCertified,indirectCertified\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.direct, r.indirect, r.direct_certified, r.indirect_certified
        ));
    }
    out
}

pub fn count_human(header: &str, rows: &[CountRow]) -> String {
    let mut out = format!("{header}\n");
    out.push_str(&format!(
        "{:>4} {:>7} {:>9}  {:<9} {:<9}\n",
        "n", "direct", "indirect", "cert(dir)", "cert(ind)"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>7} {:>9}  {:<9} {:<9}\n",
            r.n,
            r.direct,
            r.indirect,
            if r.direct_certified { "yes" } else { "no" },
            if r.indirect_certified { "yes" } else { "no" },
        ));
    }
    let total: u32 = rows.iter().map(|r| r.direct + r.indirect).sum();
    out.push_str(&format!("total: {total} arc(s)\n"));
    out
}

pub fn curve_json(mut head: Value, class: &str, parameter: &str, rows: &[CurveRow]) -> String {
    let samples: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "value": r.value,
                "tof": r.tof,
                "dtof": r.dtof,
                "d2tof": r.d2tof,
            })
        })
        .collect();
    head["class"] = json!(class);
    head["parameter"] = json!(parameter);
    head["rows"] = Value::Array(samples);
    pretty(&head)
}

pub fn curve_csv(class: &str, parameter: &str, rows: &[CurveRow]) -> String {
    let mut out = String::from("class,parameter,value,tof,dtof,d2tof\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            class,
            parameter,
            r.value,
            r.tof,
            opt_cell(r.dtof),
            opt_cell(r.d2tof),
        ));
    }
    out
}

pub fn curve_human(header: &str, parameter: &str, rows: &[CurveRow]) -> String {
    let mut out = format!("{header}\n");
    out.push_str(&format!(
        "{:>16} {:>16} {:>16} {:>16}\n",
        parameter, "tof", "dtof", "d2tof"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:>16.9} {:>16.9} {:>16} {:>16}\n",
            r.value,
            r.tof,
            r.dtof.map(|d| format!("{d:.9}")).unwrap_or_default(),
            r.d2tof.map(|d| format!("{d:.9}")).unwrap_or_default(),
        ));
    }
    out
}

pub fn verify_json(mut head: Value, rows: &[VerifyRow]) -> String {
    let results: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "revs": r.revs,
                "arcClass": r.class,
                "vA": r.va,
                "tofResidual": r.tof_residual,
                "miss": r.miss,
                "mirrorMiss": r.mirror_miss,
                "method": r.method,
                "ok": r.ok,
            })
        })
        .collect();
    head["results"] = Value::Array(results);
    head["allOk"] = json!(rows.iter().all(|r| r.ok));
    pretty(&head)
}

pub fn verify_csv(rows: &[VerifyRow]) -> String {
    let mut out = String::from("revs,class,vA,tofResidual,miss,mirrorMiss,method,ok\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.revs,
            r.class,
            r.va,
            r.tof_residual,
            opt_cell(r.miss),
            opt_cell(r.mirror_miss),
            r.method,
            r.ok,
        ));
    }
    out
}

pub fn verify_human(header: &str, rows: &[VerifyRow]) -> String {
    let mut out = format!("{header}\n");
    if rows.is_empty() {
        out.push_str("no arcs in the requested classes reach B at this time\n");
        return out;
    }
    out.push_str(&format!(
        "{:>4}  {:<9} {:>15} {:>10} {:>10}  {:<13} {}\n",
        "revs", "class", "vA", "residual", "miss", "method", "status"
    ));
    for r in rows {
        let worst = match (r.miss, r.mirror_miss) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (m, None) | (None, m) => m,
        };
        out.push_str(&format!(
            "{:>4}  {:<9} {:>15.8} {:>10.2e} {:>10}  {:<13} {}\n",
            r.revs,
            r.class,
            r.va,
            r.tof_residual,
            worst.map(|m| format!("{m:.2e}")).unwrap_or_default(),
            r.method,
            if r.ok { "ok" } else { "FLAGGED" },
        ));
    }
    let good = rows.iter().filter(|r| r.ok).count();
    out.push_str(&format!("{good}/{} root(s) verified\n", rows.len()));
    out
}

fn pretty(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports are always serializable");
    s.push('\n');
    s
}
