//! Implementations of the four subcommands.
//!
//! Each command resolves the query once, runs the library in normalized
//! units, converts the results back, and hands rows to the renderer.

use std::path::Path;

use lambertarc::propagator::{self, KeplerState};
use lambertarc::rectilinear::{self, ArcQuery};
use lambertarc::solver::{self, ArcClass, LambertSolution, SolverError, Tail};
use lambertarc::{maps, reconstruct, RectilinearEquivalent, Vec2};
use serde_json::Value;

use crate::problem::{Problem, ProblemSpec, Scaling};
use crate::report::{self, CountRow, CurveRow, SolutionRow, StateOut, VerifyRow};
use crate::{ClassFilter, CurveClass, Failure, Format, ParamKind};
use crate::{EXIT_EMPTY, EXIT_NUMERICAL, EXIT_OK};

/// Arrival-miss budget for `verify`, as a fraction of the departure
/// radius: the same round-trip bound the solver's own reconstruction
/// probe enforces, so a healthy solution passes with wide margin.
const VERIFY_MISS_SCALE: f64 = 1e-8;

/// Relative time-of-flight residual that counts as verified when
/// propagation is not applicable (rectilinear arcs that bounce at the
/// focus). Accepted roots sit orders of magnitude below this.
const VERIFY_RESIDUAL_TOL: f64 = 1e-9;

/// A fully resolved query: the user's input mode, the problem it
/// resolves to, and the μ-rescaling for reporting.
pub struct Query {
    pub spec: ProblemSpec,
    pub problem: Problem,
    pub scaling: Scaling,
}

impl Query {
    pub fn new(spec: ProblemSpec, mu: f64) -> Result<Self, Failure> {
        let scaling = Scaling::new(mu)?;
        let problem = spec.resolve()?;
        Ok(Query {
            spec,
            problem,
            scaling,
        })
    }

    /// One-line human summary of the query (user units).
    fn header(&self, tof: Option<f64>) -> String {
        let mut s = match &self.problem {
            Problem::Planar(p) => format!(
                "rA = {:.9}  rB = {:.9}  theta = {:.9}  chord = {:.9}",
                p.r_a(),
                p.r_b(),
                p.transfer_angle(),
                p.chord()
            ),
            Problem::Rect(re) => format!(
                "xA = {:.9}  xB = {:.9}  vE = {:.9}",
                re.xa(),
                re.xb(),
                self.scaling.velocity_out(re.escape_velocity())
            ),
        };
        if let Some(t) = tof {
            s.push_str(&format!("  T = {t}"));
        }
        if self.scaling.mu() != 1.0 {
            s.push_str(&format!("  mu = {}", self.scaling.mu()));
        }
        s
    }

    fn json_head(&self, command: &str, tof: Option<f64>) -> Value {
        report::json_head(
            command,
            self.scaling.mu(),
            tof,
            self.spec.describe(&self.problem),
        )
    }
}

pub fn cmd_solve(
    q: &Query,
    tof_user: f64,
    filter: ClassFilter,
    revs: Option<u32>,
    nmax: Option<u32>,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let t_int = q.scaling.time_in(tof_user);
    let re = q.problem.reduce();
    let sols = collect_solutions(&re, t_int, filter, revs, nmax)?;
    let rows = solution_rows(q, t_int, &sols)?;
    let text = match format {
        Format::Human => report::solve_human(&q.header(Some(tof_user)), &rows),
        Format::Json => report::solve_json(q.json_head("solve", Some(tof_user)), &rows),
        Format::Csv => report::solve_csv(&rows),
    };
    emit(out, &text)?;
    Ok(if rows.is_empty() { EXIT_EMPTY } else { EXIT_OK })
}

pub fn cmd_count(
    q: &Query,
    tof_user: f64,
    nmax: u32,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let t_int = q.scaling.time_in(tof_user);
    let re = q.problem.reduce();
    let census = solver::count_solutions_rect(&re, t_int, nmax).map_err(Failure::from_lib)?;
    let rows: Vec<CountRow> = census
        .rows
        .iter()
        .map(|r| CountRow {
            n: r.n,
            direct: r.direct,
            indirect: r.indirect,
            direct_certified: r.direct_certified,
            indirect_certified: r.indirect_certified,
        })
        .collect();
    let text = match format {
        Format::Human => report::count_human(&q.header(Some(tof_user)), &rows),
        Format::Json => report::count_json(q.json_head("count", Some(tof_user)), &rows),
        Format::Csv => report::count_csv(&rows),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_curve(
    q: &Query,
    class: CurveClass,
    param: ParamKind,
    from: f64,
    to: f64,
    samples: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    if samples < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {samples}"
        )));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(Failure::Usage(format!(
            "sweep range needs --from < --to, got [{from}, {to}]"
        )));
    }
    let re = q.problem.reduce();
    let tail = match class {
        CurveClass::Direct => Tail::Direct,
        CurveClass::Indirect => Tail::Indirect,
    };
    if tail == Tail::Direct && re.is_degenerate() {
        return Err(Failure::Usage(SolverError::DegenerateDirect.to_string()));
    }

    let step = (to - from) / (samples - 1) as f64;
    let mut times = Vec::with_capacity(samples);
    for i in 0..samples {
        let value = from + step * i as f64;
        let point = (|| -> Result<f64, Failure> {
            let va = va_of_param(&re, &q.scaling, param, tail, value)?;
            let query = ArcQuery::new(re.xa(), re.xb(), va).map_err(Failure::from_lib)?;
            let t = match tail {
                Tail::Direct => rectilinear::tof_direct(&query),
                Tail::Indirect => rectilinear::tof_indirect(&query),
            }
            .map_err(Failure::from_lib)?;
            Ok(q.scaling.time_out(t))
        })()
        .map_err(|f| f.with_context(&format!("sample {i} (value {value})")))?;
        times.push((value, point));
    }

    let rows: Vec<CurveRow> = (0..samples)
        .map(|i| {
            let (value, tof) = times[i];
            let (dtof, d2tof) = if i == 0 || i == samples - 1 {
                (None, None)
            } else {
                let before = times[i - 1].1;
                let after = times[i + 1].1;
                (
                    Some((after - before) / (2.0 * step)),
                    Some((after - 2.0 * tof + before) / (step * step)),
                )
            };
            CurveRow {
                value,
                tof,
                dtof,
                d2tof,
            }
        })
        .collect();

    let class_name = match class {
        CurveClass::Direct => "direct",
        CurveClass::Indirect => "indirect",
    };
    let param_name = param.name();
    let text = match format {
        Format::Human => report::curve_human(&q.header(None), param_name, &rows),
        Format::Json => {
            report::curve_json(q.json_head("curve", None), class_name, param_name, &rows)
        }
        Format::Csv => report::curve_csv(class_name, param_name, &rows),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    q: &Query,
    tof_user: f64,
    filter: ClassFilter,
    revs: Option<u32>,
    nmax: Option<u32>,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let t_int = q.scaling.time_in(tof_user);
    let re = q.problem.reduce();
    let sols = collect_solutions(&re, t_int, filter, revs, nmax)?;

    let mut rows = Vec::with_capacity(sols.len());
    match &q.problem {
        Problem::Planar(p) => {
            let timed = p.clone().with_tof(t_int).map_err(Failure::from_lib)?;
            let tol = VERIFY_MISS_SCALE * p.r_a();
            for s in &sols {
                let state = reconstruct::initial_state(&timed, s).map_err(Failure::from_lib)?;
                let miss = propagate_miss(&state, t_int, p.pos_b())?;
                let mirror =
                    reconstruct::mirror_initial_state(&timed, s).map_err(Failure::from_lib)?;
                let mirror_miss = match &mirror {
                    Some(m) => Some(propagate_miss(m, t_int, p.pos_b())?),
                    None => None,
                };
                let ok = miss <= tol
                    && mirror_miss.is_none_or(|m| m <= tol)
                    && s.tof_residual <= VERIFY_RESIDUAL_TOL;
                rows.push(verify_row(
                    &q.scaling,
                    s,
                    Some(miss),
                    mirror_miss,
                    "propagated",
                    ok,
                ));
            }
        }
        Problem::Rect(re) => {
            for s in &sols {
                let can_propagate =
                    s.arc_class.tail() == Tail::Direct && s.arc_class.revs() == 0 && re.xb() > 0.0;
                if can_propagate {
                    let state = KeplerState::new(Vec2::new(re.xa(), 0.0), Vec2::new(s.va, 0.0));
                    let miss = propagate_miss(&state, t_int, Vec2::new(re.xb(), 0.0))?;
                    let ok = miss <= VERIFY_MISS_SCALE * re.xa()
                        && s.tof_residual <= VERIFY_RESIDUAL_TOL;
                    rows.push(verify_row(
                        &q.scaling,
                        s,
                        Some(miss),
                        None,
                        "propagated",
                        ok,
                    ));
                } else {
                    // The arc bounces at the focus, which the propagation
                    // oracle refuses to cross; the time residual is the
                    // checkable part.
                    let ok = s.tof_residual <= VERIFY_RESIDUAL_TOL;
                    rows.push(verify_row(&q.scaling, s, None, None, "residual-only", ok));
                }
            }
        }
    }

    let text = match format {
        Format::Human => report::verify_human(&q.header(Some(tof_user)), &rows),
        Format::Json => report::verify_json(q.json_head("verify", Some(tof_user)), &rows),
        Format::Csv => report::verify_csv(&rows),
    };
    emit(out, &text)?;
    if rows.is_empty() {
        Ok(EXIT_EMPTY)
    } else if rows.iter().all(|r| r.ok) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_NUMERICAL)
    }
}

/// One problem per line: a JSON object with the same fields as the
/// geometry/time flags (`ra`, `rb`, `theta`, `chord`, `ax`…`by`,
/// `rectilinear`, `xa`, `xb`, `tof`, `class`, `revs`, `nmax`, `mu`).
#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchRequest {
    #[serde(default)]
    ax: Option<f64>,
    #[serde(default)]
    ay: Option<f64>,
    #[serde(default)]
    bx: Option<f64>,
    #[serde(default)]
    by: Option<f64>,
    #[serde(default)]
    ra: Option<f64>,
    #[serde(default)]
    rb: Option<f64>,
    #[serde(default)]
    theta: Option<f64>,
    #[serde(default)]
    chord: Option<f64>,
    #[serde(default)]
    rectilinear: bool,
    #[serde(default)]
    xa: Option<f64>,
    #[serde(default)]
    xb: Option<f64>,
    tof: f64,
    #[serde(default)]
    class: Option<String>,
    #[serde(default)]
    revs: Option<u32>,
    #[serde(default)]
    nmax: Option<u32>,
    #[serde(default)]
    mu: Option<f64>,
}

/// Solve one problem per JSONL line, in parallel, emitting one JSON
/// result line per input line (input order preserved). Per-line errors
/// are reported inline; the exit code is the worst line's class.
pub fn cmd_solve_batch(path: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read batch file {}: {e}", path.display())))?;
    let lines: Vec<(usize, &str)> = content
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .collect();

    use rayon::prelude::*;
    let results: Vec<(Value, i32)> = lines
        .par_iter()
        .map(|&(index, line)| batch_line(index, line))
        .collect();

    let mut text = String::new();
    let mut code = EXIT_OK;
    for (doc, line_code) in &results {
        text.push_str(&serde_json::to_string(doc).expect("reports are always serializable"));
        text.push('\n');
        code = code.max(*line_code);
    }
    emit(out, &text)?;
    Ok(code)
}

fn batch_line(index: usize, line: &str) -> (Value, i32) {
    match batch_solve(line) {
        Ok(rows) => {
            let solutions: Vec<Value> = rows.iter().map(report::solution_json).collect();
            let arcs: u32 = rows.iter().map(SolutionRow::arcs).sum();
            (
                serde_json::json!({
                    "index": index,
                    "status": "ok",
                    "count": arcs,
                    "solutions": solutions,
                }),
                EXIT_OK,
            )
        }
        Err(f) => (
            serde_json::json!({
                "index": index,
                "status": "error",
                "errorClass": match f { Failure::Usage(_) => "usage", Failure::Numerical(_) => "numerical" },
                "error": f.message(),
            }),
            f.exit_code(),
        ),
    }
}

fn batch_solve(line: &str) -> Result<Vec<SolutionRow>, Failure> {
    let req: BatchRequest =
        serde_json::from_str(line).map_err(|e| Failure::Usage(format!("bad request: {e}")))?;
    let spec = crate::problem::resolve_mode(
        req.ax,
        req.ay,
        req.bx,
        req.by,
        req.ra,
        req.rb,
        req.theta,
        req.chord,
        req.rectilinear,
        req.xa,
        req.xb,
    )?;
    let filter = match req.class.as_deref() {
        None | Some("all") => ClassFilter::All,
        Some("direct") => ClassFilter::Direct,
        Some("indirect") => ClassFilter::Indirect,
        Some(other) => {
            return Err(Failure::Usage(format!(
                "unknown class {other:?} (expected direct, indirect, or all)"
            )))
        }
    };
    if req.revs.is_some() && req.nmax.is_some() {
        return Err(Failure::Usage(
            "revs and nmax are mutually exclusive".into(),
        ));
    }
    let q = Query::new(spec, req.mu.unwrap_or(1.0))?;
    let t_int = q.scaling.time_in(req.tof);
    let re = q.problem.reduce();
    let sols = collect_solutions(&re, t_int, filter, req.revs, req.nmax)?;
    solution_rows(&q, t_int, &sols)
}

/// Gather every root in the requested classes, sorted by
/// `(revolutions, class, vA)`. A class that provably has no arcs on
/// this geometry (direct with the focus on the chord) contributes
/// nothing rather than failing, so `--class all` just works there.
fn collect_solutions(
    re: &RectilinearEquivalent,
    t_int: f64,
    filter: ClassFilter,
    revs: Option<u32>,
    nmax: Option<u32>,
) -> Result<Vec<LambertSolution>, Failure> {
    let (n_lo, n_hi) = match (revs, nmax) {
        (Some(n), _) => (n, n),
        (None, Some(m)) => (0, m),
        (None, None) => (0, 0),
    };
    let mut sols: Vec<LambertSolution> = Vec::new();
    for n in n_lo..=n_hi {
        for &tail in filter.tails() {
            let found = if n == 0 {
                match solver::solve_simple(re, t_int, tail) {
                    Ok(s) => vec![s],
                    Err(SolverError::DegenerateDirect) => vec![],
                    Err(e) => return Err(Failure::from_lib(e)),
                }
            } else {
                match solver::solve_multirev(re, n, t_int, tail) {
                    Ok(v) => v,
                    Err(SolverError::DegenerateDirect) => vec![],
                    Err(e) => return Err(Failure::from_lib(e)),
                }
            };
            sols.extend(found);
        }
    }
    sols.sort_by(|a, b| {
        let key_a = (a.arc_class.revs(), tail_rank(a.arc_class.tail()));
        let key_b = (b.arc_class.revs(), tail_rank(b.arc_class.tail()));
        key_a.cmp(&key_b).then(a.va.total_cmp(&b.va))
    });
    Ok(sols)
}

fn tail_rank(tail: Tail) -> u8 {
    match tail {
        Tail::Direct => 0,
        Tail::Indirect => 1,
    }
}

fn class_name(class: ArcClass) -> &'static str {
    match class.tail() {
        Tail::Direct => "direct",
        Tail::Indirect => "indirect",
    }
}

/// Convert solver output to user units, reconstructing the departure
/// state (planar problems get the full two-dimensional state; bare
/// rectilinear ones report the on-axis state).
fn solution_rows(
    q: &Query,
    t_int: f64,
    sols: &[LambertSolution],
) -> Result<Vec<SolutionRow>, Failure> {
    match &q.problem {
        Problem::Planar(p) => {
            let timed = p.clone().with_tof(t_int).map_err(Failure::from_lib)?;
            sols.iter()
                .map(|s| {
                    let state = reconstruct::initial_state(&timed, s).map_err(Failure::from_lib)?;
                    let mirror =
                        reconstruct::mirror_initial_state(&timed, s).map_err(Failure::from_lib)?;
                    Ok(base_row(
                        &q.scaling,
                        s,
                        state_out(&q.scaling, &state),
                        mirror.as_ref().map(|m| state_out(&q.scaling, m)),
                    ))
                })
                .collect()
        }
        Problem::Rect(re) => sols
            .iter()
            .map(|s| {
                let state = ([re.xa(), 0.0], [q.scaling.velocity_out(s.va), 0.0]);
                Ok(base_row(&q.scaling, s, state, None))
            })
            .collect(),
    }
}

fn state_out(sc: &Scaling, state: &KeplerState) -> StateOut {
    (
        [state.pos.x, state.pos.y],
        [sc.velocity_out(state.vel.x), sc.velocity_out(state.vel.y)],
    )
}

fn base_row(
    sc: &Scaling,
    s: &LambertSolution,
    state: StateOut,
    mirror_state: Option<StateOut>,
) -> SolutionRow {
    SolutionRow {
        revs: s.arc_class.revs(),
        class: class_name(s.arc_class),
        va: sc.velocity_out(s.va),
        eta: s.eta,
        beta_hat: s.beta_hat,
        energy: sc.energy_out(s.energy),
        tof_residual: s.tof_residual,
        certified: s.certified,
        multiplicity: s.multiplicity,
        state,
        mirror_state,
    }
}

fn verify_row(
    sc: &Scaling,
    s: &LambertSolution,
    miss: Option<f64>,
    mirror_miss: Option<f64>,
    method: &'static str,
    ok: bool,
) -> VerifyRow {
    VerifyRow {
        revs: s.arc_class.revs(),
        class: class_name(s.arc_class),
        va: sc.velocity_out(s.va),
        tof_residual: s.tof_residual,
        miss,
        mirror_miss,
        method,
        ok,
    }
}

fn propagate_miss(state: &KeplerState, t: f64, target: Vec2) -> Result<f64, Failure> {
    let arrived = propagator::propagate(state, t).map_err(Failure::from_lib)?;
    Ok((arrived.pos - target).norm())
}

fn va_of_param(
    re: &RectilinearEquivalent,
    sc: &Scaling,
    param: ParamKind,
    tail: Tail,
    value: f64,
) -> Result<f64, Failure> {
    match param {
        ParamKind::Va => Ok(sc.velocity_in(value)),
        ParamKind::X => Ok(value * re.escape_velocity()),
        // β̂ equals the conic parameter η arc-by-arc, so both sweep the
        // same underlying velocity grid.
        ParamKind::Eta | ParamKind::Betahat => match tail {
            Tail::Direct => maps::va_from_eta_direct(re, value),
            Tail::Indirect => maps::va_from_eta_indirect(re, value),
        }
        .map_err(Failure::from_lib),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
