use std::f64::consts::TAU;
use std::path::Path;

use polycurv::curvature::{self, Convexity};
use polycurv::curve::{self, PolyCurve};
use polycurv::holonomy;
use polycurv::mesh::{read_mesh, write_off, MeshFormat};
use polycurv::relations::{self, Patch, Quantity, RelationReport};
use polycurv::steiner;
use polycurv::variational::{self, Constraint, FlowOptions};
use polycurv::{geom, TriMesh, Vec3};
use serde_json::{json, Map, Value};

use crate::output::{csv_num, csv_opt, csv_table, emit, num, opt, pretty, vec3};
use crate::{
    Check, ConstraintArg, CurveArgs, Failure, FlowArgs, HolonomyArgs, InputFormat, MeshInput, OutFormat, ReportArgs,
    SteinerArgs, Table, VerifyArgs,
};

const CONVENTION: &str = "outward unit normals; H_e = e x (nu_2 - nu_1) with e along the first triangle's halfedge; \
H_p = 1/2 sum H_e = -grad_p Area (points inward on convex surfaces); A_p = grad_p Vol; angles in radians";

fn load(input: &MeshInput) -> Result<TriMesh, Failure> {
    let format = input.input_format.map(|f| match f {
        InputFormat::Off => MeshFormat::Off,
        InputFormat::Obj => MeshFormat::Obj,
    });
    read_mesh(&input.mesh, format).map_err(|e| Failure::Error(format!("{}: {e}", input.mesh.display())))
}

fn path_value(p: Option<&Path>) -> Value {
    p.map_or(Value::Null, |p| Value::String(p.display().to_string()))
}

fn input_config(command: &str, input: &MeshInput) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), command.into());
    m.insert("input".into(), input.mesh.display().to_string().into());
    m.insert(
        "input_format".into(),
        input.input_format.map_or(Value::Null, |f| format!("{f:?}").to_lowercase().into()),
    );
    m
}

fn finish_config(mut m: Map<String, Value>, seed: Option<u64>, output: Option<&Path>) -> Value {
    m.insert("seed".into(), seed.map_or(Value::Null, Value::from));
    m.insert("output".into(), path_value(output));
    Value::Object(m)
}

fn quantity(q: &Quantity) -> Value {
    match q {
        Quantity::Scalar(x) => num(*x),
        Quantity::Vector(v) => vec3(v),
    }
}

pub fn report(a: &ReportArgs) -> Result<(), Failure> {
    let mesh = load(&a.input)?;
    let mut cfg = input_config("report", &a.input);
    cfg.insert("format".into(), format!("{:?}", a.format).to_lowercase().into());
    if a.format == OutFormat::Csv {
        cfg.insert("table".into(), format!("{:?}", a.table).to_lowercase().into());
    }
    let config = finish_config(cfg, None, a.output.as_deref());
    let rep = curvature::curvature_report(&mesh)?;
    let text = match a.format {
        OutFormat::Json => {
            let topo = mesh.topology();
            let vertices: Vec<Value> = rep
                .vertices
                .iter()
                .map(|v| {
                    json!({
                        "vertex": v.vertex,
                        "boundary": v.is_boundary,
                        "angle_sum": num(v.angle_sum),
                        "K": opt(v.gauss),
                        "boundary_turn": opt(v.boundary_turn),
                        "k_plus": opt(v.split.map(|s| s.k_plus)),
                        "k_minus": opt(v.split.map(|s| s.k_minus)),
                        "H": vec3(&v.mean_curvature),
                        "vector_area": v.vector_area.as_ref().map_or(Value::Null, vec3),
                        "area": num(v.area),
                        "density": opt(v.density),
                    })
                })
                .collect();
            let edges: Vec<Value> = rep
                .edges
                .iter()
                .map(|e| {
                    let [p, q] = mesh.edges()[e.edge].vertices;
                    json!({
                        "edge": e.edge,
                        "vertices": [p, q],
                        "theta": num(e.theta),
                        "convexity": convexity_name(e.convexity),
                        "H_e": vec3(&e.h_vec),
                        "steiner": num(e.h_steiner),
                        "length": num(e.length),
                    })
                })
                .collect();
            pretty(&json!({
                "config": config,
                "convention": CONVENTION,
                "summary": {
                    "vertices": topo.vertices,
                    "edges": topo.edges,
                    "faces": topo.faces,
                    "chi": topo.chi,
                    "components": topo.components,
                    "boundary_loops": topo.boundary_loops,
                    "genus": topo.genus,
                    "area": num(mesh.area()),
                    "volume": if topo.is_closed { num(mesh.signed_volume()) } else { Value::Null },
                    "total_gauss": num(rep.total_gauss),
                    "willmore": {
                        "w_hp": num(rep.willmore.w_hp),
                        "w_legacy": num(rep.willmore.w_legacy),
                        "skipped": rep.willmore.skipped,
                    },
                },
                "vertices": vertices,
                "edges": edges,
            }))
        }
        OutFormat::Csv => match a.table {
            Table::Vertices => {
                let rows: Vec<Vec<String>> = rep
                    .vertices
                    .iter()
                    .map(|v| {
                        let h = v.mean_curvature;
                        let va = v.vector_area;
                        vec![
                            v.vertex.to_string(),
                            (v.is_boundary as u8).to_string(),
                            csv_num(v.angle_sum),
                            csv_opt(v.gauss),
                            csv_opt(v.boundary_turn),
                            csv_opt(v.split.map(|s| s.k_plus)),
                            csv_opt(v.split.map(|s| s.k_minus)),
                            csv_num(h.x),
                            csv_num(h.y),
                            csv_num(h.z),
                            csv_opt(va.map(|a| a.x)),
                            csv_opt(va.map(|a| a.y)),
                            csv_opt(va.map(|a| a.z)),
                            csv_num(v.area),
                            csv_opt(v.density),
                        ]
                    })
                    .collect();
                csv_table(
                    &config,
                    &[
                        "vertex", "boundary", "angle_sum", "K", "boundary_turn", "k_plus", "k_minus", "Hx", "Hy", "Hz",
                        "Ax", "Ay", "Az", "area", "density",
                    ],
                    &rows,
                )
            }
            Table::Edges => {
                let rows: Vec<Vec<String>> = rep
                    .edges
                    .iter()
                    .map(|e| {
                        let [p, q] = mesh.edges()[e.edge].vertices;
                        vec![
                            e.edge.to_string(),
                            p.to_string(),
                            q.to_string(),
                            csv_num(e.theta),
                            convexity_name(e.convexity).to_string(),
                            csv_num(e.h_vec.x),
                            csv_num(e.h_vec.y),
                            csv_num(e.h_vec.z),
                            csv_num(e.h_steiner),
                            csv_num(e.length),
                        ]
                    })
                    .collect();
                csv_table(
                    &config,
                    &["edge", "a", "b", "theta", "convexity", "Hx", "Hy", "Hz", "steiner", "length"],
                    &rows,
                )
            }
        },
    };
    emit(a.output.as_deref(), &text)?;
    Ok(())
}

fn convexity_name(c: Convexity) -> &'static str {
    match c {
        Convexity::Convex => "convex",
        Convexity::Flat => "flat",
        Convexity::Concave => "concave",
    }
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::GaussBonnet => "gauss-bonnet",
        Check::ForceBalance => "force-balance",
        Check::Torque => "torque",
        Check::Position => "position",
        Check::VectorArea => "vector-area",
        Check::Holonomy => "holonomy",
        Check::Subdivision => "subdivision",
    }
}

struct Tally {
    lines: Vec<String>,
    passed: usize,
    failed: usize,
    skipped: usize,
    tol: Option<f64>,
}

impl Tally {
    fn push(&mut self, scope: &str, id: Option<usize>, mut r: RelationReport) {
        if let Some(t) = self.tol {
            r.tol = t;
            r.pass = r.residual <= t;
        }
        if r.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        let v = json!({
            "relation": r.name,
            "scope": scope,
            "id": id,
            "lhs": quantity(&r.lhs),
            "rhs": quantity(&r.rhs),
            "residual": num(r.residual),
            "tol": num(r.tol),
            "pass": r.pass,
        });
        self.lines.push(v.to_string());
    }

    fn skip(&mut self, relation: &str, scope: &str, id: usize, reason: &str) {
        self.skipped += 1;
        let v = json!({ "relation": relation, "scope": scope, "id": id, "skipped": reason });
        self.lines.push(v.to_string());
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let mesh = load(&a.input)?;
    let mut checks: Vec<Check> = Vec::new();
    let requested = if a.check.is_empty() {
        vec![
            Check::GaussBonnet,
            Check::ForceBalance,
            Check::Torque,
            Check::Position,
            Check::VectorArea,
            Check::Holonomy,
            Check::Subdivision,
        ]
    } else {
        a.check.clone()
    };
    for c in requested {
        if !checks.contains(&c) {
            checks.push(c);
        }
    }
    let mut cfg = input_config("verify", &a.input);
    cfg.insert("checks".into(), checks.iter().map(|&c| check_name(c)).collect::<Vec<_>>().into());
    cfg.insert("tol".into(), opt(a.tol));
    let config = finish_config(cfg, None, a.output.as_deref());

    let mut tally = Tally { lines: vec![json!({ "config": config }).to_string()], passed: 0, failed: 0, skipped: 0, tol: a.tol };
    let whole = Patch::whole(&mesh)?;
    for &c in &checks {
        match c {
            Check::GaussBonnet => tally.push("mesh", None, relations::check_gauss_bonnet(&mesh, None)?),
            Check::ForceBalance | Check::Torque | Check::Position | Check::VectorArea => {
                let run = |p: &Patch| -> polycurv::Result<RelationReport> {
                    match c {
                        Check::ForceBalance => relations::check_force_balance(&mesh, p),
                        Check::Torque => relations::check_torque_balance(&mesh, p),
                        Check::Position => relations::check_position_relation(&mesh, p),
                        _ => relations::check_vector_area(&mesh, p),
                    }
                };
                tally.push("mesh", None, run(&whole)?);
                for v in 0..mesh.vertex_count() {
                    if mesh.is_isolated(v) {
                        continue;
                    }
                    if mesh.is_boundary_vertex(v) {
                        tally.skip(check_name(c), "star", v, "boundary");
                        continue;
                    }
                    tally.push("star", Some(v), run(&Patch::star(&mesh, v)?)?);
                }
            }
            Check::Holonomy => {
                for row in holonomy::holonomy_table(&mesh)? {
                    let r = RelationReport {
                        name: "holonomy",
                        lhs: Quantity::Scalar(row.angle_mod_2pi),
                        rhs: Quantity::Scalar(row.angle_defect),
                        residual: row.residual,
                        tol: 1e-10,
                        pass: row.residual <= 1e-10,
                    };
                    tally.push("vertex", Some(row.vertex), r);
                }
                for v in (0..mesh.vertex_count()).filter(|&v| mesh.is_boundary_vertex(v)) {
                    tally.skip("holonomy", "vertex", v, "boundary");
                }
            }
            Check::Subdivision => {
                let tol = 1e-12 * mesh.bbox_diagonal().max(1.0);
                for e in 0..mesh.edge_count() {
                    if mesh.edges()[e].is_boundary() {
                        tally.skip("subdivision", "edge", e, "boundary");
                        continue;
                    }
                    let he = curvature::edge_mean_curvature(&mesh, e)?.h_vec;
                    let mut residual: f64 = 0.0;
                    let mut mid = Vec3::zeros();
                    for t in [0.1, 0.5, 0.9] {
                        let (m2, q) = curvature::subdivide_edge(&mesh, e, t)?;
                        let h2 = 2.0 * curvature::vertex_mean_curvature(&m2, q)?.edge_sum;
                        residual = residual.max((h2 - he).norm());
                        if t == 0.5 {
                            mid = h2;
                        }
                    }
                    let r = RelationReport {
                        name: "subdivision",
                        lhs: Quantity::Vector(mid),
                        rhs: Quantity::Vector(he),
                        residual,
                        tol,
                        pass: residual <= tol,
                    };
                    tally.push("edge", Some(e), r);
                }
            }
        }
    }
    tally.lines.push(
        json!({ "summary": { "passed": tally.passed, "failed": tally.failed, "skipped": tally.skipped } }).to_string(),
    );
    let mut text = tally.lines.join("\n");
    text.push('\n');
    emit(a.output.as_deref(), &text)?;
    if tally.failed > 0 {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

pub fn steiner(a: &SteinerArgs) -> Result<(), Failure> {
    let mesh = load(&a.input)?;
    let mut cfg = input_config("steiner", &a.input);
    cfg.insert("t".into(), num(a.t));
    cfg.insert("samples".into(), a.samples.into());
    let config = finish_config(cfg, Some(a.seed), a.output.as_deref());
    let s = steiner::steiner_polynomial(&mesh, a.t, a.samples, a.seed)?;
    let z = (s.poly_volume - s.mc_volume) / s.mc_stderr;
    let pass = (s.poly_volume - s.mc_volume).abs() <= 4.0 * s.mc_stderr;
    let text = pretty(&json!({
        "config": config,
        "t": num(s.t),
        "poly_volume": num(s.poly_volume),
        "mc_volume": num(s.mc_volume),
        "mc_stderr": num(s.mc_stderr),
        "z": num(z),
        "samples": s.samples,
        "seed": s.seed,
        "pass": pass,
    }));
    emit(a.output.as_deref(), &text)?;
    if !pass {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

pub fn flow(a: &FlowArgs) -> Result<(), Failure> {
    let mesh = load(&a.input)?;
    let mut fixed = a.fix.clone();
    if a.fix_boundary {
        fixed.extend((0..mesh.vertex_count()).filter(|&v| mesh.is_boundary_vertex(v)));
    }
    fixed.sort_unstable();
    fixed.dedup();
    let mut cfg = input_config("flow", &a.input);
    cfg.insert("steps".into(), a.steps.into());
    cfg.insert("step_size".into(), num(a.step_size));
    cfg.insert("fix_boundary".into(), a.fix_boundary.into());
    cfg.insert("fix".into(), a.fix.clone().into());
    cfg.insert("constraint".into(), format!("{:?}", a.constraint).to_lowercase().into());
    cfg.insert("tol".into(), num(a.tol));
    cfg.insert("max_halvings".into(), a.max_halvings.into());
    cfg.insert("trace".into(), path_value(a.trace.as_deref()));
    cfg.insert("mesh_out".into(), path_value(a.mesh_out.as_deref()));
    let config = finish_config(cfg, None, a.output.as_deref());
    let opts = FlowOptions {
        steps: a.steps,
        step_size: a.step_size,
        constraint: match a.constraint {
            ConstraintArg::None => Constraint::None,
            ConstraintArg::Volume => Constraint::Volume,
        },
        tol: a.tol,
        fixed,
        max_halvings: a.max_halvings,
    };
    let s = variational::minimize_area(&mesh, &opts)?;
    if let Some(path) = &a.trace {
        let rows: Vec<Vec<String>> = (0..s.area_trace.len())
            .map(|i| {
                vec![
                    i.to_string(),
                    csv_num(s.area_trace[i]),
                    csv_num(s.volume_trace[i]),
                    csv_num(s.residual_trace[i]),
                    if i == 0 { csv_num(0.0) } else { csv_num(s.step_trace[i - 1]) },
                    if i == 0 { csv_num(0.0) } else { csv_num(s.area_change[i - 1]) },
                ]
            })
            .collect();
        emit(Some(path), &csv_table(&config, &["iter", "area", "volume", "max_Hp", "step_size", "dA"], &rows))?;
    }
    if let Some(path) = &a.mesh_out {
        emit(Some(path), &write_off(&s.mesh))?;
    }
    let max_hp = variational::minimality_residual(&s.mesh)?.max;
    let text = pretty(&json!({
        "config": config,
        "iterations": s.iterations,
        "converged": s.converged,
        "final_area": num(*s.area_trace.last().unwrap()),
        "final_volume": num(*s.volume_trace.last().unwrap()),
        "max_residual": num(s.max_residual()),
        "max_Hp": num(max_hp),
        "cmc_H": opt(s.cmc_h),
    }));
    emit(a.output.as_deref(), &text)?;
    Ok(())
}

pub fn holonomy(a: &HolonomyArgs) -> Result<(), Failure> {
    let mesh = load(&a.input)?;
    let mut cfg = input_config("holonomy", &a.input);
    cfg.insert("format".into(), format!("{:?}", a.format).to_lowercase().into());
    let config = finish_config(cfg, None, a.output.as_deref());
    let rows = holonomy::holonomy_table(&mesh)?;
    let tol = 1e-10;
    let pass = rows.iter().all(|r| r.residual <= tol);
    let text = match a.format {
        OutFormat::Json => {
            let vertices: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "vertex": r.vertex,
                        "angle_mod_2pi": num(r.angle_mod_2pi),
                        "angle_defect": num(r.angle_defect),
                        "residual": num(r.residual),
                    })
                })
                .collect();
            let max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
            pretty(&json!({ "config": config, "vertices": vertices, "max_residual": num(max), "tol": num(tol), "pass": pass }))
        }
        OutFormat::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![r.vertex.to_string(), csv_num(r.angle_mod_2pi), csv_num(r.angle_defect), csv_num(r.residual)]
                })
                .collect();
            csv_table(&config, &["vertex", "angle_mod_2pi", "angle_defect", "residual"], &table)
        }
    };
    emit(a.output.as_deref(), &text)?;
    if !pass {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

pub fn curve(a: &CurveArgs) -> Result<(), Failure> {
    let c: PolyCurve = curve::read_curve(&a.curve, a.closed)
        .map_err(|e| Failure::Error(format!("{}: {e}", a.curve.display())))?;
    let mut cfg = Map::new();
    cfg.insert("command".into(), "curve".into());
    cfg.insert("input".into(), a.curve.display().to_string().into());
    cfg.insert("closed".into(), a.closed.into());
    cfg.insert("writhe".into(), a.writhe.into());
    cfg.insert("frames".into(), a.frames.into());
    cfg.insert(
        "seed_normal".into(),
        a.seed_normal.as_ref().map_or(Value::Null, |v| v.iter().map(|&x| num(x)).collect()),
    );
    let config = finish_config(cfg, None, a.output.as_deref());

    let mut doc = Map::new();
    doc.insert("config".into(), config);
    doc.insert("points".into(), c.len().into());
    doc.insert("closed".into(), c.is_closed().into());
    doc.insert("length".into(), num(c.length()));
    if c.len() >= 3 {
        let t = curve::turning_angles(&c)?;
        doc.insert(
            "turning".into(),
            json!({
                "vertices": t.vertices,
                "angles": t.angles.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                "total": num(t.total),
                "total_2sin": num(t.total_sin),
                "total_2tan": num(t.total_tan),
            }),
        );
        if c.is_closed() {
            doc.insert("fenchel".into(), (t.total >= TAU - 1e-12).into());
        }
    }
    let seed = match &a.seed_normal {
        Some(v) => Vec3::new(v[0], v[1], v[2]),
        None => curve::default_seed_normal(&c),
    };
    if a.frames || c.is_closed() {
        let f = curve::parallel_transport_frame(&c, &seed)?;
        doc.insert("holonomy".into(), opt(f.holonomy));
        if a.frames {
            let frames: Vec<Value> = f
                .frames
                .iter()
                .map(|fr| json!({ "tangent": vec3(&fr.tangent), "normal1": vec3(&fr.normal1), "normal2": vec3(&fr.normal2) }))
                .collect();
            doc.insert("frames".into(), frames.into());
        }
    }
    if a.writhe {
        let w = curve::writhe(&c, false)?;
        let mut wr = Map::new();
        wr.insert("mod_2pi".into(), num(w.mod_2pi));
        match curve::gauss_writhe(&c) {
            Ok(real) => {
                wr.insert("real".into(), num(real));
                wr.insert("writhe".into(), num(real / TAU));
                wr.insert("residual".into(), num(geom::angle_distance(w.mod_2pi, real)));
            }
            Err(e) => {
                wr.insert("real".into(), Value::Null);
                wr.insert("real_error".into(), e.to_string().into());
            }
        }
        doc.insert("writhe".into(), Value::Object(wr));
    }
    emit(a.output.as_deref(), &pretty(&Value::Object(doc)))?;
    Ok(())
}
