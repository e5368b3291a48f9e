//! One function per subcommand, each returning a document or a domain error.

use conesphere::charvar::{
    boundary_data, component_of, cusp_geometry, inequality_report, polygon_certificate, simple_length,
    singular_point_near, GeometricPoint, ParamTriple,
};
use conesphere::growth::{bowditch_check, expand_tree, length_census, FeMode, StartEdge};
use conesphere::mcg::{
    in_fundamental_domain, induced_map_detailed, reduce_to_domain, Automorphism, Involution,
};
use conesphere::verify::{run_suite, Suite, VerifyConfig};
use conesphere::volume::{darboux_check, domain_volume, fenchel_nielsen, volume_table, VolumeResult};
use conesphere::{Error, Execution, Result};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::emit::{Document, Table};

pub const MAX_REDUCTION_STEPS: usize = 10_000;
pub const MAX_TREE_DEPTH: usize = 22;

pub struct Context {
    pub cfg: RunConfig,
}

impl Context {
    fn exec(&self) -> Execution {
        if self.cfg.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

fn geometric(t: [f64; 3]) -> Result<GeometricPoint> {
    GeometricPoint::from_coords(t[0], t[1], t[2])
}

fn ok_or_null<T: serde::Serialize>(r: Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("plain data"),
        Err(e) => json!({ "unavailable": e.code(), "reason": e.to_string() }),
    }
}

pub fn classify(ctx: &Context, t: [f64; 3]) -> Result<Document> {
    let tol = ctx.cfg.tolerances;
    let p = ParamTriple::new(t[0], t[1], t[2]);
    if let Some([a, b, c]) = singular_point_near(&p, tol.residual) {
        return Err(Error::SingularPoint { a, b, c });
    }
    let geo = GeometricPoint::new(p);
    let lengths: Vec<Value> = p
        .products()
        .iter()
        .map(|&x| simple_length(x).map_or(Value::Null, Value::from))
        .collect();
    Ok(Document::new(json!({
        "triple": p.coords(),
        "kappa": p.kappa,
        "boundary": ok_or_null(boundary_data(p.kappa, tol.classify)),
        "component": ok_or_null(component_of(p.a, p.b, tol.identity)),
        "geometric": geo.is_ok(),
        "in_fundamental_domain": in_fundamental_domain(&p),
        "products": p.products(),
        "simple_lengths": lengths,
        "inequalities": ok_or_null(geo.and_then(|g| inequality_report(&g, tol.classify))),
        "cusp_geometry": ok_or_null(cusp_geometry(&p)),
    })))
}

pub fn reduce(ctx: &Context, t: [f64; 3]) -> Result<Document> {
    let trace = reduce_to_domain(&geometric(t)?, MAX_REDUCTION_STEPS, &ctx.cfg.tolerances)?;
    Ok(Document::new(json!({
        "start": trace.start.coords(),
        "kappa": trace.start.kappa,
        "word": trace.word,
        "steps": trace.word.len(),
        "end": trace.end.coords(),
        "end_kappa": trace.end.kappa,
        "energies": trace.energies,
    })))
}

pub fn induced(ctx: &Context, name: &str, t: [f64; 3]) -> Result<Document> {
    let f = Automorphism::named(name)?;
    let p = ParamTriple::new(t[0], t[1], t[2]);
    let m = induced_map_detailed(&f, &p, &ctx.cfg.tolerances)?;
    Ok(Document::new(json!({
        "automorphism": name,
        "images": [f.image_alpha, f.image_beta, f.image_gamma],
        "triple": p.coords(),
        "kappa": p.kappa,
        "result": m.result.coords(),
        "result_kappa": m.result.kappa,
        "image_matrices": m.images,
        "fixed_points": m.fixed_points,
        "gamma_image_at_alpha_fixed": m.gamma_image_at_alpha_fixed,
    })))
}

pub struct TreeArgs {
    pub root: [f64; 3],
    pub depth: usize,
    pub census: Option<f64>,
    pub start: Involution,
    pub mode: FeMode,
}

pub fn tree(ctx: &Context, args: &TreeArgs) -> Result<Document> {
    if args.depth > MAX_TREE_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "depth {} exceeds the limit {MAX_TREE_DEPTH}",
            args.depth
        )));
    }
    let root = geometric(args.root)?;
    let tree = expand_tree(&root, StartEdge(args.start), args.depth, ctx.exec())?;
    let growth = bowditch_check(&tree, args.mode, ctx.exec());
    let mut body = json!({
        "root": root.coords(),
        "kappa": root.kappa,
        "start": args.start,
        "depth": args.depth,
        "nodes": tree.root.count(),
        "growth": growth,
    });
    let Some(max_f) = args.census else {
        return Ok(Document::new(body));
    };
    let census = length_census(&root, max_f, &ctx.cfg.tolerances)?;
    let table = Table {
        columns: vec!["value", "length", "multiplicity", "depth_first_seen"],
        rows: census
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.value.into(),
                    r.length.into(),
                    r.multiplicity.into(),
                    r.depth_first_seen.into(),
                ]
            })
            .collect(),
    };
    body["census"] = json!({
        "reduced_root": census.root.coords(),
        "max_f": census.max_f,
        "count": census.count(),
        "rows": census.rows,
    });
    Ok(Document::new(body).with_table(table))
}

fn volume_json(v: &VolumeResult) -> Value {
    json!({
        "kappa": v.kappa,
        "value": v.value,
        "abs_error_estimate": v.abs_error_estimate,
        "reference": v.reference,
        "source": v.reference_source,
        "abs_diff": v.abs_diff,
        "boundary": v.boundary,
        "moduli_value": 4.0 * v.value,
        "moduli_reference": 4.0 * v.reference,
    })
}

const VOLUME_COLUMNS: [&str; 6] = [
    "kappa",
    "value",
    "reference",
    "abs_diff",
    "abs_error_estimate",
    "source",
];

fn volume_row(v: &VolumeResult) -> Vec<Value> {
    vec![
        v.kappa.into(),
        v.value.into(),
        v.reference.into(),
        v.abs_diff.into(),
        v.abs_error_estimate.into(),
        v.reference_source.clone().into(),
    ]
}

pub fn volume(ctx: &Context, kappa: Option<f64>, table: Option<&[f64]>) -> Result<Document> {
    let quad = &ctx.cfg.quadrature;
    if let Some(kappas) = table {
        let results = volume_table(kappas, quad, ctx.exec())
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let rows = results.iter().map(volume_json).collect::<Vec<_>>();
        let table = Table {
            columns: VOLUME_COLUMNS.to_vec(),
            rows: results.iter().map(volume_row).collect(),
        };
        return Ok(Document::new(json!({ "table": rows })).with_table(table));
    }
    let kappa = kappa.ok_or_else(|| Error::InvalidArgument("need --kappa or --table".into()))?;
    let v = domain_volume(kappa, quad, ctx.exec())?;
    let table = Table {
        columns: VOLUME_COLUMNS.to_vec(),
        rows: vec![volume_row(&v)],
    };
    Ok(Document::new(volume_json(&v)).with_table(table))
}

pub fn fncheck(point: [f64; 2], step: f64) -> Result<Document> {
    let [a, b] = point;
    let fnc = fenchel_nielsen(a, b)?;
    let d = darboux_check(a, b, step)?;
    Ok(Document::new(json!({
        "point": point,
        "fenchel_nielsen": fnc,
        "darboux": d,
        "within_1e-5": d.rel_err <= 1e-5,
    })))
}

pub fn polygon(ctx: &Context, t: [f64; 3]) -> Result<Document> {
    let cert = polygon_certificate(&geometric(t)?, &ctx.cfg.tolerances)?;
    Ok(Document::new(cert))
}

/// The report and whether every check passed.
pub fn verify(ctx: &Context, suite: Suite) -> (Document, bool) {
    let cfg = VerifyConfig {
        seed: ctx.cfg.seed,
        tol: ctx.cfg.tolerances,
        quad: ctx.cfg.quadrature,
        exec: ctx.exec(),
    };
    let report = run_suite(suite, &cfg);
    let table = Table {
        columns: vec!["id", "passed", "title", "detail"],
        rows: report
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.id.clone().into(),
                    c.passed.into(),
                    c.title.clone().into(),
                    c.detail.clone().into(),
                ]
            })
            .collect(),
    };
    let passed = report.passed;
    (Document::new(report).with_table(table), passed)
}
