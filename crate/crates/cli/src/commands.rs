//! One function per subcommand. Input problems are returned as `Err` and
//! become exit code 2; everything that goes wrong after the inputs parsed
//! is recorded in the report as a failed verdict or error.

use std::path::Path;

use bq_core::chains::{self, ChainMode, RationalBudget};
use bq_core::decompose::{self, DecompositionResult};
use bq_core::fields::{Field, Homomorphism};
use bq_core::geometry::{self, Point, TransformIdentity};
use bq_core::maps::{self, AffineOrthoMap, MapTable, PlaneMap, SemiAffineMap};
use bq_core::syntax::{self, MapExpr};
use bq_core::{Domain, Error, Result};
use serde_json::json;

use crate::report::RunReport;

/// `--exhaustive`, `--samples N`, or the default for the field.
#[derive(Clone, Copy, Debug)]
pub struct DomainChoice {
    pub exhaustive: bool,
    pub samples: Option<usize>,
    pub seed: u64,
}

pub const DEFAULT_SAMPLES: usize = 200;

impl DomainChoice {
    pub fn resolve(&self, k: &Field) -> Result<Domain> {
        if self.exhaustive {
            if !k.is_finite() {
                return Err(Error::FieldNotFinite(k.to_string()));
            }
            return Ok(Domain::Exhaustive);
        }
        Ok(match self.samples {
            Some(count) => Domain::Samples {
                count,
                seed: self.seed,
            },
            None if k.is_finite() => Domain::Exhaustive,
            None => Domain::Samples {
                count: DEFAULT_SAMPLES,
                seed: self.seed,
            },
        })
    }
}

fn new_report(command: &'static str, k: &Field, d: &DomainChoice, domain: Domain) -> RunReport {
    RunReport::new(command, k.to_string(), d.seed, domain.to_string())
}

pub fn verify_identities(field: &str, d: &DomainChoice) -> Result<RunReport> {
    let k = syntax::parse_field(field)?;
    let domain = d.resolve(&k)?;
    let mut rep = new_report("verify-identities", &k, d, domain);
    match geometry::verify_transform_identities(&k, domain) {
        Ok(r) => {
            for id in TransformIdentity::ALL {
                rep.record(json!({ "identity": id.name(), "violations": r.violations_of(id) }));
            }
            for v in r.violations.iter().take(5) {
                rep.witness(format!("{v:?}"));
            }
            rep.verdict(
                "transform identities",
                r.passed(),
                format!(
                    "{} pairs, {} points, {} violations",
                    r.pairs_checked,
                    r.points_checked,
                    r.violations.len()
                ),
            );
        }
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}

pub fn chain(
    field: &str,
    from: &str,
    to: &str,
    mode: ChainMode,
    budget: RationalBudget,
    d: &DomainChoice,
) -> Result<RunReport> {
    let k = syntax::parse_field(field)?;
    let (s, t) = (syntax::parse_point(from, &k)?, syntax::parse_point(to, &k)?);
    k.ensure_real()?;
    let mut rep = new_report("chain", &k, d, Domain::Exhaustive);
    rep.domain = "constructive".into();
    rep.input("from", &s);
    rep.input("to", &t);
    rep.input(
        "mode",
        match mode {
            ChainMode::AutoExtend => "auto",
            ChainMode::RationalOnly => "rational",
        },
    );
    match chains::build_real_chain(&s, &t, mode, budget) {
        Ok(c) => {
            rep.record(json!({ "field": c.chain.field().to_string() }));
            for (j, p) in c.chain.points().iter().enumerate() {
                rep.record(json!({ "index": j, "point": p.to_string() }));
            }
            let r = chains::verify_chain(&c.chain, false);
            rep.verdict(
                "unit edges",
                r.passed(),
                format!(
                    "{} edges (lower bound {}, bound {})",
                    c.chain.edge_count(),
                    c.euclidean_ceil,
                    c.step_bound
                ),
            );
            for v in &r.violations {
                rep.witness(v);
            }
        }
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}

pub fn imaginary_chain(field: &str, point: &str, d: &DomainChoice) -> Result<RunReport> {
    let k = syntax::parse_field(field)?;
    let x = syntax::parse_point(point, &k)?;
    k.real_subfield()?;
    let mut rep = new_report("imaginary-chain", &k, d, Domain::Exhaustive);
    rep.domain = "constructive".into();
    rep.input("point", &x);
    match chains::build_imaginary_chain(&x) {
        Ok(c) => {
            rep.record(json!({ "field": c.chain.field().to_string(), "swapped": c.swapped }));
            for (j, p) in c.chain.points().iter().enumerate() {
                rep.record(json!({ "index": j, "point": p.to_string() }));
            }
            let r = chains::verify_chain(&c.chain, true);
            for e in &r.edges {
                rep.record(json!({
                    "edge": e.edge,
                    "phi": e.phi_value.to_string(),
                    "psi": e.psi_value.as_ref().map(ToString::to_string),
                }));
            }
            for v in &r.violations {
                rep.witness(v);
            }
            rep.verdict(
                "unit edges with nonzero psi",
                r.passed(),
                format!("{} edges", c.chain.edge_count()),
            );
        }
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}

/// The map to decompose, from an expression or a table file.
pub enum MapSource<'a> {
    Expr(&'a str),
    Table(&'a Path),
}

fn load_map(src: &MapSource<'_>, k: &Field) -> Result<(String, Box<dyn PlaneMap>)> {
    match src {
        MapSource::Expr(s) => {
            let e = MapExpr::parse(s, k)?;
            let m = e.elaborate()?;
            Ok((e.to_string(), Box::new(m)))
        }
        MapSource::Table(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                pos: 0,
                msg: format!("cannot read {}: {e}", path.display()),
            })?;
            let t: MapTable = syntax::parse_map_table(&text, k)?;
            Ok((path.display().to_string(), Box::new(t)))
        }
    }
}

fn report_decomposition(rep: &mut RunReport, d: &DecompositionResult) {
    rep.record(json!({
        "normalizer": d.normalizer.to_string(),
        "gamma": d.gamma.to_string(),
        "branch": d.branch.to_string(),
        "verified_on": d.verified_on.to_string(),
    }));
    if let Some(l) = &d.lorentz {
        rep.record(json!({
            "a": l.a.to_string(),
            "case": l.case.to_string(),
            "matrix": l.matrix.to_string(),
        }));
    }
    match d.reconstruction() {
        Some(r) => {
            rep.record(json!({ "reconstruction": r.to_string() }));
            rep.verdict("decomposition", true, format!("f = {r}"));
        }
        None => rep.verdict(
            "decomposition",
            false,
            format!("gamma is not in the catalog: {}", d.gamma),
        ),
    }
}

pub fn decompose(
    field: &str,
    src: MapSource<'_>,
    lorentz: bool,
    d: &DomainChoice,
) -> Result<RunReport> {
    let k = syntax::parse_field(field)?;
    let domain = d.resolve(&k)?;
    let (text, f) = load_map(&src, &k)?;
    let command = if lorentz {
        "decompose-lorentz"
    } else {
        "decompose"
    };
    let mut rep = new_report(command, &k, d, domain);
    rep.input(
        match src {
            MapSource::Expr(_) => "map",
            MapSource::Table(_) => "table",
        },
        text,
    );
    let out = if lorentz {
        decompose::decompose_lorentz(f.as_ref(), domain)
    } else {
        decompose::decompose(f.as_ref(), domain)
    };
    match out {
        Ok(res) => report_decomposition(&mut rep, &res),
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}

pub fn enumerate_ortho(field: &str, d: &DomainChoice) -> Result<RunReport> {
    let k = syntax::parse_field(field)?;
    if !k.is_finite() {
        return Err(Error::FieldNotFinite(k.to_string()));
    }
    let mut rep = new_report("enumerate-ortho", &k, d, Domain::Exhaustive);
    match maps::enumerate_orthogonal_group(&k) {
        Ok(group) => {
            let mut bad = 0;
            for (j, q) in group.iter().enumerate() {
                let qtq = q.transpose().mul(q);
                if qtq.as_ref().ok() != Some(&maps::OrthoMatrix2::identity(&k)) {
                    bad += 1;
                }
                rep.record(json!({
                    "index": j,
                    "matrix": q.to_string(),
                    "det": q.det().to_string(),
                    "kind": if q.is_rotation() { "rotation" } else { "reflection" },
                }));
            }
            rep.verdict(
                "orthogonal group",
                bad == 0,
                format!("{} matrices, {bad} failing Q^T Q = I", group.len()),
            );
        }
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}

pub fn search_preservers(
    field: &str,
    budget: u64,
    list: bool,
    d: &DomainChoice,
) -> Result<RunReport> {
    let k = syntax::parse_field(field)?;
    let p = k
        .modulus()
        .ok_or_else(|| Error::FieldNotFinite(k.to_string()))?;
    let mut rep = new_report("search-preservers", &k, d, Domain::Exhaustive);
    rep.input("budget", budget);
    match decompose::search_unit_preservers(p, budget) {
        Ok(out) => {
            let c = &out.census;
            rep.record(json!({
                "found": c.found,
                "expected": c.expected,
                "complete": c.complete,
                "nodes": c.nodes,
                "anomalies": c.anomalies.len(),
            }));
            if list {
                for (j, t) in out.maps.iter().enumerate() {
                    rep.record(json!({ "map": j, "images": t.images() }));
                }
            }
            for a in &c.anomalies {
                rep.witness(format!(
                    "{}\n{}",
                    a.reason,
                    syntax::format_map_table(&a.table)
                ));
            }
            rep.verdict(
                "no anomalies",
                c.anomalies.is_empty(),
                format!("{} maps decomposed", c.found),
            );
            rep.verdict(
                "census",
                c.confirms(),
                if c.complete {
                    format!("{} found, {} expected", c.found, c.expected)
                } else {
                    format!(
                        "incomplete after {} nodes: {} found so far",
                        c.nodes, c.found
                    )
                },
            );
        }
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}

/// Over `Q(sqrt 2)(i)`, `(gamma, gamma)` with `gamma` the `sqrt 2`
/// conjugation keeps unit pairs at unit distance but sends a pair at
/// distance `sqrt 2` to one at `-sqrt 2`.
pub fn witness_nonisometry(d: &DomainChoice) -> Result<RunReport> {
    let k = syntax::parse_field("Q[sqrt 2][i]")?;
    let domain = match d.resolve(&k)? {
        Domain::Exhaustive => unreachable!("infinite field"),
        s => s,
    };
    let mut rep = new_report("witness-nonisometry", &k, d, domain);
    let gamma = Homomorphism::LevelConjugation(1);
    let f = SemiAffineMap::new(AffineOrthoMap::identity(&k), gamma)?;
    rep.input("map", "hom(conj@1)");
    let y = syntax::parse_point("(1/2 + 1/2*r1, -1/2*i + 1/2*r1*i)", &k)?;
    let x = Point::origin(&k);
    match maps::preserves_unit_distance(&f, domain) {
        Ok(v) => {
            rep.verdict(
                "unit distance preserved",
                v.passed(),
                format!("{} unit pairs", v.pairs_checked),
            );
            if let Some(w) = v.witness {
                rep.witness(w);
            }
        }
        Err(e) => rep.fail(e),
    }
    match maps::phi_on_pair(&f, &x, &y) {
        Ok((phi, image_phi)) => {
            rep.record(json!({
                "x": x.to_string(),
                "y": y.to_string(),
                "phi": phi.to_string(),
                "image_phi": image_phi.to_string(),
            }));
            let r2 = k.generator(1)?;
            rep.verdict(
                "not an isometry",
                phi == r2 && image_phi == -&r2,
                format!("phi = {phi}, phi of images = {image_phi}"),
            );
        }
        Err(e) => rep.fail(e),
    }
    Ok(rep)
}
