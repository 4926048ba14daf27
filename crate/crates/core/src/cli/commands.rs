use num_traits::Zero;
use serde_json::{json, Value};

use super::report::Report;
use super::{exit, RunConfig};
use crate::ce::{betti_partial, coboundary_witness, is_cocycle, sample_closedness, ComplexSlice, SliceKind};
use crate::classes::{class_image, ClassExpression};
use crate::descent::{
    d_ce, dbar_t, descent_solution, divergence_scalar, is_total_divergence, parse_trace_density, verify_descent,
    JetPoly,
};
use crate::error::Error;
use crate::linalg::rational_to_string;
use crate::model::model_betti_with_fault;

/// Random tuples drawn by `verify`.
const SAMPLES: usize = 32;

#[derive(Debug)]
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit(_) => exit::RESOURCE_CAP,
            Error::Parse(_) => exit::USAGE,
            _ => exit::PRECONDITION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn config_json(c: &RunConfig, class: Option<&str>) -> Value {
    let format = match c.format {
        super::Format::Text => "text",
        super::Format::Json => "json",
        super::Format::Csv => "csv",
    };
    json!({
        "n": c.n,
        "q_max": c.q_max,
        "margin": c.margin,
        "max_slice_dim": c.max_slice_dim,
        "max_degree": c.max_degree,
        "format": format,
        "seed": c.seed,
        "enable_3d": c.enable_3d,
        "class": class,
    })
}

fn report(c: &RunConfig, class: Option<&str>) -> Report {
    Report {
        command: c.command.clone(),
        config: config_json(c, class),
        results: json!({}),
        certificates: json!({}),
        timing: json!({}),
        exit_code: exit::SUCCESS,
        text: Vec::new(),
        csv: None,
        diagnostics: Vec::new(),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn parse_class(s: &str) -> std::result::Result<ClassExpression, Failure> {
    s.parse::<ClassExpression>().map_err(|e| Failure {
        code: exit::USAGE,
        message: e.to_string(),
    })
}

pub(crate) fn betti(c: &RunConfig) -> Outcome {
    if c.q_max == 0 {
        return Err(Failure {
            code: exit::USAGE,
            message: "--q-max must be at least 1 for betti".into(),
        });
    }
    let (table, error) = betti_partial(c.n, c.q_max, c.max_slice_dim);
    let mut r = report(c, None);
    let rows: Vec<Value> = table.entries.iter().map(|(q, d)| json!({"degree": q, "dim": d})).collect();
    let slices: Vec<Value> = table.slice_dims.iter().map(|(q, d)| json!({"degree": q, "dim": d})).collect();
    r.results = json!({
        "betti": rows,
        "reduced": true,
        "partial": table.capped_at.is_some(),
        "capped_at": table.capped_at,
    });
    r.timing = json!({
        "max_bits": table.max_bits,
        "slice_dims": slices,
    });
    r.text.push(format!("reduced Betti numbers of vect({}), weight-zero slices", c.n));
    for (q, d) in &table.entries {
        r.text.push(format!("H^{q} = {d}   (slice dim {})", table.slice_dims[q]));
    }
    let mut csv = vec![vec!["degree".to_string(), "dim".to_string()]];
    csv.extend(table.entries.iter().map(|(q, d)| vec![q.to_string(), d.to_string()]));
    r.csv = Some(csv);
    if let Some(e) = error {
        let q = table.capped_at.unwrap_or(c.q_max);
        r.text.push(format!("partial table: stopped at degree {q}: {e}"));
        r.diagnostics.push(e.to_string());
        r.exit_code = match e {
            Error::ResourceLimit(_) => exit::RESOURCE_CAP,
            _ => exit::PRECONDITION,
        };
    }
    Ok(r)
}

pub(crate) fn verify(c: &RunConfig, class: &str) -> Outcome {
    let e = parse_class(class)?;
    if e.max_index() > c.n {
        return Err(Error::GeneratorIndex {
            index: e.max_index(),
            n: c.n,
        }
        .into());
    }
    let q = e.total_degree();
    let img = class_image(&e, c.n, c.margin)?;
    let ce = is_cocycle(&img.cochain, false, c.margin)?;
    let total = &img.certificate;
    let mut r = report(c, Some(class));
    let mut slice_dim = Value::Null;
    let (exact, witness, reason) = if img.cochain.is_zero() {
        (Some(true), Some("0".to_string()), "the product vanishes identically")
    } else if !total.closed {
        (None, None, "not closed for the total differential")
    } else {
        let slice = ComplexSlice::build(c.n, q - 1, SliceKind::Trivial { weight: 0 }, c.max_slice_dim)?;
        slice_dim = json!(slice.dim());
        match coboundary_witness(&img.image, &slice)? {
            Some(w) => (Some(true), Some(w.to_string()), "Phi image is a coboundary"),
            None => (Some(false), None, "Phi image is not a coboundary in the weight-zero slice"),
        }
    };
    let sample = sample_closedness(&img.cochain, true, SAMPLES, c.seed)?;
    let disagree = sample.failures > 0 && total.closed;
    r.results = json!({
        "class": e.to_string(),
        "form_degree": e.form_degree(),
        "cochain_degree": e.cochain_degree(),
        "image_degree": q,
        "cocycle": ce.closed,
        "total_cocycle": total.closed,
        "exact": exact,
        "exactness_basis": reason,
        "witness": witness,
    });
    r.certificates = json!({
        "d_ce": {"closed": ce.closed, "bound": ce.bound, "margin": ce.margin, "stabilized": ce.stabilized},
        "total": {"closed": total.closed, "bound": total.bound, "margin": total.margin, "stabilized": total.stabilized},
        "sampled": {"seed": sample.seed, "samples": sample.samples, "failures": sample.failures, "agrees": !disagree},
    });
    r.timing = json!({
        "cochain_terms": img.cochain.len(),
        "image_terms": img.image.len(),
        "slice_dim": slice_dim,
    });
    r.text.push(format!("class {e} in H(vect({}); Omega^{})", c.n, e.form_degree()));
    r.text.push(format!("cocycle: {} (d_CE, jet bound {})", yes_no(ce.closed), ce.bound));
    r.text.push(format!("total cocycle: {} (jet bound {})", yes_no(total.closed), total.bound));
    r.text.push(match exact {
        Some(x) => format!("exact: {} ({reason})", yes_no(x)),
        None => format!("exact: undetermined ({reason})"),
    });
    if let Some(w) = &witness {
        r.text.push(format!("witness: {w}"));
    }
    r.text.push(format!(
        "sampled: {} of {} random tuples nonclosed (seed {})",
        sample.failures, sample.samples, sample.seed
    ));
    if disagree {
        r.exit_code = exit::MISMATCH;
        r.diagnostics.push("random sampling contradicts the symbolic cocycle check".into());
    }
    Ok(r)
}

/// Reference local functional for a class, when one is known.
fn reference_density(n: usize, e: &ClassExpression) -> Option<&'static str> {
    match (n, e.to_string().as_str()) {
        (1, "a1*t1") => Some("Tr(J)Tr(dJ)"),
        (2, "a1*t2") => Some("Tr(J)Tr(dJ dJ)"),
        (2, "a1*t1^2") => Some("Tr(J)Tr(dJ)Tr(dJ)"),
        (3, "a2*t2") => Some("Tr(J dJ)Tr(dJ dJ)"),
        _ => None,
    }
}

struct DensityChecks {
    divergence: bool,
    d_ce: bool,
    dbar_t: bool,
    d_t: bool,
}

fn density_checks(rho: &JetPoly) -> Result<DensityChecks, Failure> {
    let d_ce = is_total_divergence(&d_ce(rho))?;
    let dbar_t = is_total_divergence(&dbar_t(rho))?;
    Ok(DensityChecks {
        divergence: is_total_divergence(rho)?,
        d_ce,
        dbar_t,
        // d_CE adds a jet variable and dbar_T does not; D and the Euler
        // operator respect that count, so the two parts are tested apart.
        d_t: d_ce && dbar_t,
    })
}

fn density_json(k: &DensityChecks) -> Value {
    json!({
        "is_divergence": k.divergence,
        "d_ce_is_divergence": k.d_ce,
        "dbar_t_is_divergence": k.dbar_t,
        "d_t_is_divergence": k.d_t,
    })
}

pub(crate) fn descend(c: &RunConfig, class: &str) -> Outcome {
    let e = parse_class(class)?;
    if e.max_index() > c.n {
        return Err(Error::GeneratorIndex {
            index: e.max_index(),
            n: c.n,
        }
        .into());
    }
    if c.n >= 3 {
        return descend_3d(c, class, &e);
    }
    let img = class_image(&e, c.n, c.margin)?;
    if !img.certificate.closed {
        return Err(Failure {
            code: exit::PRECONDITION,
            message: format!("{e} is not closed for the total differential"),
        });
    }
    let sol = descent_solution(&img.image)?;
    // Exhaustive input enumeration is only affordable in one variable.
    let inputs = (c.n == 1).then_some((c.max_degree, c.margin));
    let cert = verify_descent(&sol, inputs);
    let integrand = sol.integrand();
    let rho = &integrand.density;
    let checks = density_checks(rho)?;
    let mut r = report(c, Some(class));
    let components: Vec<Value> = sol
        .bidegrees()
        .into_iter()
        .map(|(i, j)| {
            let p = sol.component(i, j);
            json!({"bidegree": [i, j], "terms": p.len(), "body": p.to_string()})
        })
        .collect();
    let reference = reference_density(c.n, &e);
    let scalar = match reference {
        Some(s) => divergence_scalar(rho, &parse_trace_density(c.n, s)?)?,
        None => None,
    };
    let equivalent = reference.map(|_| scalar.as_ref().is_some_and(|s| !s.is_zero()));
    r.results = json!({
        "class": e.to_string(),
        "image_degree": e.total_degree(),
        "components": components,
        "integrand": {"terms": rho.len(), "body": rho.to_string()},
        "reference": reference,
        "reference_scalar": scalar.as_ref().map(rational_to_string),
        "equivalent_to_reference": equivalent,
    });
    let equations: Vec<Value> = cert
        .checks
        .iter()
        .map(|k| json!({"equation": k.equation, "bidegree": [k.bidegree.0, k.bidegree.1], "holds": k.holds}))
        .collect();
    let input_json = cert.inputs.as_ref().map(|i| {
        json!({
            "bound": i.bound,
            "margin": i.margin,
            "tuples": i.tuples,
            "nonvacuous": i.nonvacuous,
            "failures": i.failures,
            "stabilized": i.stabilized,
        })
    });
    r.certificates = json!({
        "class_total_cocycle": {"closed": img.certificate.closed, "bound": img.certificate.bound, "stabilized": img.certificate.stabilized},
        "descent_equations": equations,
        "total_vanishes": cert.total_vanishes,
        "inputs": input_json,
        "euler": density_json(&checks),
    });
    r.timing = json!({
        "image_terms": img.image.len(),
        "phi0_terms": sol.phi0.len(),
        "solution_terms": sol.total.len(),
        "integrand_terms": rho.len(),
    });
    r.text.push(format!("descent of {e} on C^{}", c.n));
    for (i, j) in sol.bidegrees() {
        let p = sol.component(i, j);
        r.text.push(format!("phi^{{{i},{j}}} ({} terms): {p}", p.len()));
    }
    let holds = cert.checks.iter().filter(|k| k.holds).count();
    r.text.push(format!("descent equations: {holds} of {} hold", cert.checks.len()));
    r.text.push(format!("(del + delbar + d_T) Phi = 0: {}", yes_no(cert.total_vanishes)));
    match &cert.inputs {
        Some(i) => r.text.push(format!(
            "input check: {} tuples up to degree {} (+{}), {} nonvacuous, {} failures, stabilized {}",
            i.tuples,
            i.bound,
            i.margin,
            i.nonvacuous,
            i.failures,
            yes_no(i.stabilized)
        )),
        None => r.text.push("input check: skipped for n > 1".into()),
    }
    r.text.push(format!("integrand ({} terms): {rho}", rho.len()));
    r.text.push(format!(
        "integrand is a divergence: {}; d_CE, dbar_T, d_T images are divergences: {}, {}, {}",
        yes_no(checks.divergence),
        yes_no(checks.d_ce),
        yes_no(checks.dbar_t),
        yes_no(checks.d_t)
    ));
    if let Some(s) = reference {
        match &scalar {
            Some(l) => r.text.push(format!("integrand = {} * {s} modulo divergence", rational_to_string(l))),
            None => r.text.push(format!("integrand is not a multiple of {s} modulo divergence")),
        }
    }
    let passed = cert.passed() && checks.d_ce && checks.dbar_t && checks.d_t && equivalent != Some(false);
    if !passed {
        r.exit_code = exit::MISMATCH;
    }
    Ok(r)
}

/// In three variables only the reference local functional is checked, behind `--enable-3d`.
fn descend_3d(c: &RunConfig, class: &str, e: &ClassExpression) -> Outcome {
    let Some(reference) = reference_density(c.n, e).filter(|_| c.n == 3) else {
        return Err(Failure {
            code: exit::RESOURCE_CAP,
            message: format!("descent in {} variables is only available for a2*t2 in 3", c.n),
        });
    };
    if !c.enable_3d {
        return Err(Failure {
            code: exit::RESOURCE_CAP,
            message: "the three-dimensional check is gated; pass --enable-3d".into(),
        });
    }
    let rho = parse_trace_density(3, reference)?;
    let checks = density_checks(&rho)?;
    let mut r = report(c, Some(class));
    r.results = json!({
        "class": e.to_string(),
        "reference": reference,
        "integrand": {"terms": rho.len()},
        "note": "the class display writes dX4 for the last factor; the check uses dJX4",
    });
    r.certificates = json!({"euler": density_json(&checks)});
    r.timing = json!({"integrand_terms": rho.len()});
    r.text.push(format!("local functional {reference} on C^3 ({} terms)", rho.len()));
    r.text.push(format!(
        "is a divergence: {}; d_CE, dbar_T, d_T images are divergences: {}, {}, {}",
        yes_no(checks.divergence),
        yes_no(checks.d_ce),
        yes_no(checks.dbar_t),
        yes_no(checks.d_t)
    ));
    r.text.push("note: the class display writes dX4 for the last factor; the check uses dJX4".into());
    if checks.divergence || !(checks.d_ce && checks.dbar_t && checks.d_t) {
        r.exit_code = exit::MISMATCH;
    }
    Ok(r)
}

pub(crate) fn compare(c: &RunConfig, fault: Option<usize>) -> Outcome {
    let (engine, error) = betti_partial(c.n, c.q_max, c.max_slice_dim);
    let model = model_betti_with_fault(c.n, c.q_max, fault);
    let mut r = report(c, None);
    let mut rows = Vec::new();
    let mut csv = vec![["degree", "engine", "model", "match"].map(String::from).to_vec()];
    let mut mismatch = false;
    r.text.push(format!("vect({}): engine against model (engine H^0 = 1 by the constants)", c.n));
    for q in 0..=c.q_max {
        // The engine complex is reduced; the constants give H^0 = 1.
        let ours = if q == 0 { Some(1) } else { engine.get(q) };
        let theirs = model.get(q);
        let agree = ours.map(|x| Some(x) == theirs);
        mismatch |= agree == Some(false);
        rows.push(json!({"degree": q, "engine": ours, "model": theirs, "match": agree}));
        let show = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        let verdict = match agree {
            Some(true) => "match",
            Some(false) => "mismatch",
            None => "capped",
        };
        r.text.push(format!("H^{q}: engine {} model {} {verdict}", show(ours), show(theirs)));
        csv.push(vec![q.to_string(), show(ours), show(theirs), verdict.to_string()]);
    }
    let verdict = if mismatch {
        "mismatch"
    } else if error.is_some() {
        "partial"
    } else {
        "match"
    };
    r.results = json!({"rows": rows, "verdict": verdict, "fault_injected": fault.is_some()});
    r.timing = json!({"engine_max_bits": engine.max_bits, "model_max_bits": model.max_bits});
    r.text.push(format!("verdict: {verdict}"));
    r.csv = Some(csv);
    if mismatch {
        r.exit_code = exit::MISMATCH;
    } else if let Some(e) = error {
        r.diagnostics.push(e.to_string());
        r.exit_code = exit::RESOURCE_CAP;
    }
    Ok(r)
}
