use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mwknot::hyperbolicity::{find_hyperbolic_lines, hyp_region, HypRegion};
use mwknot::knotdiag::{build_diagram, diagram_from_set, identify_diagram, u1_center, Verdict};
use mwknot::mwgen::{generate, verify_mw, CurveRecipe, MwReport};
use mwknot::projection::{double_points, project};
use mwknot::projgeom::ProjPoint3;
use mwknot::spacecurve::{check_smooth, torsion_profile, SpaceCurve};
use mwknot::svg::{lifted_svg, projective_svg};
use mwknot::tangentsurf::{classify_viewpoint, winding_classes};
use mwknot::writhe::{encomplexed_writhe, generic_center, random_center, WritheReport};
use mwknot::{max_writhe, projgeom::AffineChart3, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{Command, Failure, Outcome, RunConfig};

type CmdResult = Result<Outcome, Failure>;

fn load(path: &Path) -> Result<SpaceCurve, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(SpaceCurve::from_json(&s)?)
}

/// Loads a curve and refuses non-smooth input.
fn load_smooth(path: &Path) -> Result<SpaceCurve, Failure> {
    let k = load(path)?;
    check_smooth(&k).map_err(|e| Failure::input(format!("smoothness gate: {e}")))?;
    Ok(k)
}

fn parse_point(s: &str) -> Result<ProjPoint3, Failure> {
    let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
    ProjPoint3::try_from(parts).map_err(|e| Failure::input(format!("point {s:?}: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn write_artifact(cfg: &RunConfig, name: &str, body: &str) -> Result<String, Failure> {
    fs::create_dir_all(&cfg.output_dir).map_err(|e| Failure::input(format!("{}: {e}", cfg.output_dir.display())))?;
    let path = cfg.output_dir.join(name);
    fs::write(&path, body).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

/// Search failures of the random center loop count as budget exhaustion.
fn searched<T>(r: mwknot::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::NonGenericProjection(m) => Failure { code: 3, kind: "budget", message: format!("no generic center: {m}") },
        other => other.into(),
    })
}

pub fn run(cmd: Command, cfg: &RunConfig) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let retries = cfg.retry_budget as usize;
    match cmd {
        Command::Inspect { curve } => inspect(&curve),
        Command::Writhe { curve, center, centers, expect_mw } => {
            let k = load_smooth(&curve)?;
            let reports: Vec<WritheReport> = match center {
                Some(c) => vec![encomplexed_writhe(&k, &parse_point(&c)?).map_err(|e| match e {
                    Error::NonGenericProjection(m) => Failure::input(format!("non-generic center: {m}")),
                    other => other.into(),
                })?],
                None => (0..centers.max(1))
                    .map(|_| searched(generic_center(&k, &mut rng, retries)).map(|(p, _, s)| WritheReport::from_set(&p, &s)))
                    .collect::<Result<_, _>>()?,
            };
            let w = reports[0].w;
            let constant = reports.iter().all(|r| r.w == w);
            let n = max_writhe(k.degree());
            let mw = w.abs() == n;
            let code = if !constant || (expect_mw && !mw) { 1 } else { 0 };
            Ok(Outcome {
                summary: format!(
                    "degree {}: w = {w} over {} center(s){}; N_d = {n}{}",
                    k.degree(),
                    reports.len(),
                    if constant { "" } else { " (NOT constant)" },
                    if mw { ", maximally writhed" } else { "" }
                ),
                result: json!({ "degree": k.degree(), "w": w, "n_d": n, "constant": constant, "maximally_writhed": mw, "reports": reports }),
                code,
            })
        }
        Command::Project { curve, center, svg } => {
            let k = load_smooth(&curve)?;
            let (p, pp, set) = match center {
                Some(c) => {
                    let p = parse_point(&c)?;
                    let pp = project(&k, &p)?;
                    let set = double_points(&pp)?;
                    (p, pp, set)
                }
                None => searched(generic_center(&k, &mut rng, retries))?,
            };
            let report = WritheReport::from_set(&p, &set);
            let dg = diagram_from_set(&k, &p, &set, pp.forms.clone())?;
            let path = write_artifact(cfg, &svg, &projective_svg(&dg, None))?;
            Ok(Outcome {
                summary: format!(
                    "{} crossings, {} solitary, {} imaginary pairs; w = {}; diagram written to {path}",
                    report.census.crossing, report.census.solitary, report.census.imaginary_pair, report.w
                ),
                result: json!({ "center": p, "double_points": set, "writhe": report, "gauss_code": dg.gauss_code(), "svg": path }),
                code: 0,
            })
        }
        Command::Hyp { curve, center, lines, summary_only, svg } => {
            let k = load_smooth(&curve)?;
            let (p, pp, set) = match center {
                Some(c) => {
                    let p = parse_point(&c)?;
                    let pp = project(&k, &p)?;
                    let set = double_points(&pp)?;
                    (p, pp, set)
                }
                None => searched(generic_center(&k, &mut rng, retries))?,
            };
            let region = hyp_region(&pp, cfg.raster_resolution as usize);
            let dg = diagram_from_set(&k, &p, &set, pp.forms.clone())?;
            let path = write_artifact(cfg, &svg, &projective_svg(&dg, Some(&region)))?;
            let mut result = json!({ "center": p, "region": region_json(&region, !summary_only), "svg": path });
            let mut summary = format!("hyperbolicity region {:?}, {} flagged cells", region.shape, region.flagged);
            if lines {
                let h = find_hyperbolic_lines(&k, cfg.seed, retries)?;
                let wc = winding_classes(&k, &h.l1, &h.l2)?;
                summary.push_str(&format!("; hyperbolic lines found, winding classes {wc:?}"));
                result["lines"] = to_value(&h);
                result["winding_classes"] = json!([wc.0, wc.1]);
            }
            Ok(Outcome { result, summary, code: 0 })
        }
        Command::Classify { curve, point, samples } => {
            let k = load_smooth(&curve)?;
            let mut labels = Vec::new();
            let mut tally: BTreeMap<String, usize> = BTreeMap::new();
            let given = !point.is_empty();
            let targets: Vec<Option<ProjPoint3>> = if given {
                point.iter().map(|s| parse_point(s).map(Some)).collect::<Result<_, _>>()?
            } else {
                vec![None; samples]
            };
            for t in targets {
                let mut attempts = 0;
                let label = loop {
                    let p = match &t {
                        Some(p) => p.clone(),
                        None => random_center(&mut rng),
                    };
                    match classify_viewpoint(&k, &p) {
                        Ok(l) => break l,
                        Err(e @ (Error::NonGenericProjection(_) | Error::PointOnCurve)) if !given => {
                            attempts += 1;
                            if attempts >= retries {
                                return Err(Failure { code: 3, kind: "budget", message: e.to_string() });
                            }
                        }
                        Err(e) => return Err(e.into()),
                    }
                };
                *tally.entry(to_value(&label.label).as_str().unwrap_or("?").to_string()).or_default() += 1;
                labels.push(label);
            }
            Ok(Outcome {
                summary: format!("{} viewpoints: {tally:?}", labels.len()),
                result: json!({ "labels": labels, "tally": tally }),
                code: 0,
            })
        }
        Command::Identify { curve, center } => {
            let k = load_smooth(&curve)?;
            let dg = match center {
                Some(c) => build_diagram(&k, &parse_point(&c)?)?,
                None => searched(u1_center(&k, &mut rng, retries))?.1,
            };
            let (report, lift) = identify_diagram(&dg, cfg.invariant_budget as usize)?;
            let a = write_artifact(cfg, "diagram.svg", &projective_svg(&dg, None))?;
            let b = write_artifact(cfg, "lifted.svg", &lifted_svg(&dg, &lift))?;
            let ok = report.verdict == Verdict::Consistent;
            Ok(Outcome {
                summary: format!(
                    "degree {}: lifted diagram with {} crossings, {} component(s); {:?} with T({},{}). {}",
                    report.degree,
                    report.lifted_crossings,
                    report.components,
                    report.verdict,
                    report.torus_type.0,
                    report.torus_type.1,
                    report.note
                ),
                result: json!({ "identify": report, "gauss_code": dg.gauss_code(), "svg": [a, b] }),
                code: if ok { 0 } else { 1 },
            })
        }
        Command::Generate { degree, centers } => {
            let (k, recipe, report) = generate(degree, cfg.seed, retries, centers)?;
            Ok(Outcome {
                summary: format!("degree {degree}: MW specimen found, writhes {:?}", report.writhes),
                result: json!({ "curve": k, "recipe": recipe, "report": report }),
                code: 0,
            })
        }
        Command::Corpus { dir, write, centers, degrees } => corpus(cfg, &dir, write, centers, &degrees),
    }
}

fn inspect(path: &Path) -> CmdResult {
    let k = load(path)?;
    let d = k.degree();
    match check_smooth(&k) {
        Ok(cert) => {
            let prof = torsion_profile(&k, &AffineChart3::standard())?;
            let pos = prof.is_positive();
            Ok(Outcome {
                summary: format!("degree {d}: smooth; torsion {}", if pos { "positive everywhere" } else { "changes sign or is negative" }),
                result: json!({ "degree": d, "smooth": true, "smoothness": cert, "torsion": prof, "torsion_positive": pos }),
                code: 0,
            })
        }
        Err(e) => Ok(Outcome {
            summary: format!("degree {d}: not smooth ({e})"),
            result: json!({ "degree": d, "smooth": false, "failure": e.to_string() }),
            code: 1,
        }),
    }
}

fn region_json(r: &HypRegion, rows: bool) -> Value {
    let mut v = json!({
        "resolution": r.resolution,
        "flagged": r.flagged,
        "shape": r.shape,
        "convex": r.convex,
        "special_points": r.special_points,
    });
    if rows {
        let charts: Vec<Value> = r
            .charts
            .iter()
            .map(|c| {
                let rows: Vec<String> = c
                    .flags
                    .chunks(r.resolution)
                    .map(|row| row.iter().map(|f| if *f { '1' } else { '0' }).collect())
                    .collect();
                json!({ "chart": c.chart, "rows": rows })
            })
            .collect();
        v["charts"] = json!(charts);
    }
    v
}

/// A shipped specimen with its verification report.
#[derive(Serialize, Deserialize)]
struct Specimen {
    schema: u32,
    degree: usize,
    seed: u64,
    centers: usize,
    curve: SpaceCurve,
    recipe: Value,
    report: Value,
}

fn corpus(cfg: &RunConfig, dir: &Path, write: bool, centers: usize, degrees: &[usize]) -> CmdResult {
    let mut entries = Vec::new();
    let mut all_ok = true;
    for &d in degrees {
        let file: PathBuf = dir.join(format!("mw_d{d}.json"));
        let fresh: Result<(SpaceCurve, CurveRecipe, MwReport), Error> = generate(d, cfg.seed, cfg.retry_budget as usize, centers);
        let (k, recipe, report) = match fresh {
            Ok(x) => x,
            Err(Error::SearchFailed(m)) => {
                all_ok = false;
                entries.push(json!({ "degree": d, "status": "gap", "message": m }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let spec = Specimen {
            schema: 1,
            degree: d,
            seed: cfg.seed,
            centers,
            curve: k,
            recipe: to_value(&recipe),
            report: to_value(&report),
        };
        if write {
            fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            let body = serde_json::to_string_pretty(&spec).expect("specimen serializes") + "\n";
            fs::write(&file, body).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            entries.push(json!({ "degree": d, "status": "written", "file": file.display().to_string(), "is_mw": report.is_mw }));
            continue;
        }
        let stored = fs::read_to_string(&file).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
        let stored: Specimen = serde_json::from_str(&stored).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
        let stored_check = verify_mw(&stored.curve, stored.centers, stored.seed)?;
        let same_curve = stored.curve == spec.curve;
        let same_report = stored.report == spec.report && to_value(&stored_check) == stored.report;
        let ok = same_curve && same_report && stored_check.is_mw;
        all_ok &= ok;
        entries.push(json!({
            "degree": d,
            "status": if ok { "verified" } else { "mismatch" },
            "same_curve": same_curve,
            "same_report": same_report,
            "is_mw": stored_check.is_mw,
        }));
    }
    Ok(Outcome {
        summary: format!("corpus: {} specimen(s), {}", entries.len(), if all_ok { "all verified" } else { "problems found" }),
        result: json!({ "entries": entries }),
        code: if all_ok { 0 } else { 1 },
    })
}
