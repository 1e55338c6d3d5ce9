//! The `k3cover` command line: smoothness, tangency data, certificates,
//! point enumeration, verification, torsion tests, the explicit family, the
//! density report, and point counts — all artifacts exact JSON, every run
//! recorded in a manifest.
//!
//! Exit codes: 0 success, 1 mathematically negative or inconclusive
//! outcomes (singular, torsion, exhausted sweeps), 2 usage or parse errors.

use clap::{Args, Parser, Subcommand};
use k3cover::field::{rational_from_string, rational_to_string};
use k3cover::io::{self, CertificateJson, SurfaceJson};
use k3cover::pipeline::{
    certify_bound12, certify_rational, enumerate_points, verify_certificate, Certificate,
};
use k3cover::surface::{
    branch_point_search, count_points_fq, is_smooth_sextic_tower, SearchCaps, WP3Point,
};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "k3cover",
    version,
    about = "Exact certificates of infinitely many rational points on degree-2 K3 surfaces"
)]
struct Cli {
    /// Sweep caps, e.g. --caps y0=50,alpha=200,prime=500
    #[arg(long, global = true)]
    caps: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output artifact path (stdout when omitted); the manifest lands next
    /// to the artifact, or in k3cover.manifest.json.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smoothness of the branch sextic, with a certificate of the path used.
    Smooth {
        surface: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Branch point with tangent line (the tangency datum).
    Tangent {
        surface: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// #X(F_q) by the quadratic-character count.
    Count {
        #[arg(long)]
        q: u64,
        surface: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Produce an infinitude certificate.
    Certify {
        #[arg(long, value_parser = ["bound12", "rational"])]
        mode: String,
        surface: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Enumerate distinct surface points from a certificate.
    Points {
        certificate: PathBuf,
        #[arg(short, long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Re-verify a certificate from scratch.
    Verify { certificate: PathBuf },
    /// Torsion / non-torsion certificate for a point on a curve.
    Torsion {
        curve: PathBuf,
        point: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// The explicit family: build from h, test membership, or normalize.
    Family {
        #[arg(long = "h")]
        h_file: Option<PathBuf>,
        #[arg(long = "check-mprime")]
        check_mprime: Option<PathBuf>,
        #[arg(long = "normalize")]
        normalize: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// The two-fibration density report on w² = x⁶ + y⁶ − z⁶.
    Density {
        /// The point as "x,y,z,w" with exact rational entries.
        #[arg(long)]
        point: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    inputs: BTreeMap<String, String>,
    caps: CapsJson,
    version: String,
    outcome: String,
}

#[derive(Serialize, Clone, Copy)]
struct CapsJson {
    y0: i64,
    alpha: i64,
    prime: u64,
}

fn parse_caps(spec: &Option<String>) -> Result<SearchCaps, String> {
    let mut caps = SearchCaps::default();
    let Some(s) = spec else { return Ok(caps) };
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("bad caps entry `{part}`"))?;
        match k.trim() {
            "y0" => caps.y0_cap = v.trim().parse().map_err(|e| format!("y0: {e}"))?,
            "alpha" => caps.alpha_cap = v.trim().parse().map_err(|e| format!("alpha: {e}"))?,
            "prime" => caps.prime_cap = v.trim().parse().map_err(|e| format!("prime: {e}"))?,
            other => return Err(format!("unknown cap `{other}`")),
        }
    }
    Ok(caps)
}

fn sha256_file(path: &Path) -> Result<String, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

struct Run {
    command: String,
    inputs: BTreeMap<String, String>,
    caps: SearchCaps,
}

impl Run {
    fn add_input(&mut self, path: &Path) -> Result<(), String> {
        self.inputs
            .insert(path.display().to_string(), sha256_file(path)?);
        Ok(())
    }

    fn finish<T: Serialize>(
        &self,
        artifact: &T,
        out: &Option<PathBuf>,
        outcome: &str,
        code: i32,
    ) -> i32 {
        let text = serde_json::to_string_pretty(artifact).expect("serializable artifact");
        match out {
            Some(p) => {
                if let Err(e) = std::fs::write(p, text + "\n") {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    return 2;
                }
            }
            None => println!("{text}"),
        }
        let manifest = RunManifest {
            command: self.command.clone(),
            inputs: self.inputs.clone(),
            caps: CapsJson {
                y0: self.caps.y0_cap,
                alpha: self.caps.alpha_cap,
                prime: self.caps.prime_cap,
            },
            version: env!("CARGO_PKG_VERSION").to_string(),
            outcome: outcome.to_string(),
        };
        let manifest_path = match out {
            Some(p) => {
                let mut q = p.clone();
                let stem = q
                    .file_stem()
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_else(|| "out".into());
                q.set_file_name(format!("{stem}.manifest.json"));
                q
            }
            None => PathBuf::from("k3cover.manifest.json"),
        };
        let mtext = serde_json::to_string_pretty(&manifest).unwrap();
        if let Err(e) = std::fs::write(&manifest_path, mtext + "\n") {
            eprintln!("error: cannot write {}: {e}", manifest_path.display());
            return 2;
        }
        code
    }
}

pub fn run_command(argv: &[String]) -> i32 {
    let mut full = vec!["k3cover".to_string()];
    full.extend_from_slice(argv);
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success-class "errors".
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let caps = match parse_caps(&cli.caps) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match dispatch(cli.command, caps) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn new_run(command: &str, caps: SearchCaps) -> Run {
    Run {
        command: command.to_string(),
        inputs: BTreeMap::new(),
        caps,
    }
}

type TowerSurface = (
    k3cover::surface::K3DoubleCover<k3cover::tower::TowerElement>,
    std::sync::Arc<k3cover::tower::TowerField>,
);

fn load_surface(run: &mut Run, path: &Path) -> Result<TowerSurface, String> {
    run.add_input(path)?;
    let j: SurfaceJson = read_json(path)?;
    io::surface_from_json(&j).map_err(|e| e.to_string())
}

fn dispatch(cmd: Command, caps: SearchCaps) -> Result<i32, String> {
    match cmd {
        Command::Smooth { surface, out } => {
            let mut run = new_run("smooth", caps);
            let (x, _tower) = load_surface(&mut run, &surface)?;
            match is_smooth_sextic_tower(&x.form) {
                Ok((smooth, proof)) => {
                    let artifact = serde_json::json!({
                        "smooth": smooth,
                        "certificate": match proof {
                            k3cover::surface::SmoothnessProof::ModP { p } =>
                                serde_json::json!({"path": "mod-p", "p": p}),
                            k3cover::surface::SmoothnessProof::Exact =>
                                serde_json::json!({"path": "exact"}),
                        },
                    });
                    let (outcome, code) = if smooth { ("smooth", 0) } else { ("singular", 1) };
                    Ok(run.finish(&artifact, &out.output, outcome, code))
                }
                Err(e) => {
                    let artifact = serde_json::json!({"smooth": null, "error": e.to_string()});
                    Ok(run.finish(&artifact, &out.output, "inconclusive", 1))
                }
            }
        }
        Command::Tangent { surface, out } => {
            let mut run = new_run("tangent", caps);
            let (x, _) = load_surface(&mut run, &surface)?;
            match branch_point_search(&x, caps) {
                Ok(datum) => {
                    let artifact = io::datum_to_json(&datum);
                    Ok(run.finish(&artifact, &out.output, "found", 0))
                }
                Err(e) => {
                    let artifact = serde_json::json!({"error": e.to_string()});
                    Ok(run.finish(&artifact, &out.output, "exhausted", 1))
                }
            }
        }
        Command::Count { q, surface, out } => {
            let mut run = new_run("count", caps);
            run.add_input(&surface)?;
            let j: SurfaceJson = read_json(&surface)?;
            let x = io::rational_surface_from_json(&j).map_err(|e| e.to_string())?;
            match count_points_fq(&x, q) {
                Ok(n) => {
                    let artifact = serde_json::json!({"q": q, "count": n});
                    Ok(run.finish(&artifact, &out.output, "counted", 0))
                }
                Err(e) => {
                    let artifact = serde_json::json!({"q": q, "error": e.to_string()});
                    Ok(run.finish(&artifact, &out.output, "failed", 1))
                }
            }
        }
        Command::Certify { mode, surface, out } => {
            let mut run = new_run(&format!("certify --mode {mode}"), caps);
            if mode == "bound12" {
                let (x, _) = load_surface(&mut run, &surface)?;
                match certify_bound12(&x, caps) {
                    Ok(cert) => {
                        let artifact = io::certificate_to_json(&Certificate::Bound12(cert));
                        Ok(run.finish(&artifact, &out.output, "certified", 0))
                    }
                    Err(e) => {
                        let artifact = serde_json::json!({"error": e.to_string()});
                        Ok(run.finish(&artifact, &out.output, "inconclusive", 1))
                    }
                }
            } else {
                run.add_input(&surface)?;
                let j: SurfaceJson = read_json(&surface)?;
                let x = io::rational_surface_from_json(&j).map_err(|e| e.to_string())?;
                match certify_rational(&x, caps) {
                    Ok(cert) => {
                        let artifact = io::certificate_to_json(&Certificate::Rational(cert));
                        Ok(run.finish(&artifact, &out.output, "certified", 0))
                    }
                    Err(e) => {
                        let artifact = serde_json::json!({"error": e.to_string()});
                        Ok(run.finish(&artifact, &out.output, "inconclusive", 1))
                    }
                }
            }
        }
        Command::Points {
            certificate,
            n,
            out,
        } => {
            let mut run = new_run("points", caps);
            run.add_input(&certificate)?;
            let j: CertificateJson = read_json(&certificate)?;
            let cert = io::certificate_from_json(&j).map_err(|e| e.to_string())?;
            match enumerate_points(&cert, n) {
                Ok(pts) => {
                    let artifact = serde_json::json!({
                        "on_original_surface": pts.on_original,
                        "points": pts.points.iter().map(io::wp3_to_json).collect::<Vec<_>>(),
                    });
                    Ok(run.finish(&artifact, &out.output, "enumerated", 0))
                }
                Err(e) => {
                    let artifact = serde_json::json!({"error": e.to_string()});
                    Ok(run.finish(&artifact, &out.output, "failed", 1))
                }
            }
        }
        Command::Verify { certificate } => {
            let mut run = new_run("verify", caps);
            run.add_input(&certificate)?;
            let j: CertificateJson = read_json(&certificate)?;
            let cert = io::certificate_from_json(&j).map_err(|e| e.to_string())?;
            let (ok, reasons) = verify_certificate(&cert);
            let artifact = serde_json::json!({"valid": ok, "reasons": reasons});
            let (outcome, code) = if ok { ("valid", 0) } else { ("invalid", 1) };
            Ok(run.finish(&artifact, &None, outcome, code))
        }
        Command::Torsion { curve, point, out } => {
            let mut run = new_run("torsion", caps);
            run.add_input(&curve)?;
            run.add_input(&point)?;
            let cj: io::CurveJson = read_json(&curve)?;
            let (e, tower) = io::curve_from_json(&cj).map_err(|er| er.to_string())?;
            let pj: io::PointJson = read_json(&point)?;
            let (p, _) = io::ecpoint_from_json(&pj, &tower).map_err(|er| er.to_string())?;
            match k3cover::genus1::torsion::torsion_certificate(&e, &p, &caps) {
                Ok(k3cover::genus1::torsion::TorsionCertificate::Torsion { order }) => {
                    let artifact = serde_json::json!({"kind": "torsion", "order": order});
                    Ok(run.finish(&artifact, &out.output, "torsion", 1))
                }
                Ok(k3cover::genus1::torsion::TorsionCertificate::NonTorsion(nt)) => {
                    let artifact = serde_json::json!({
                        "kind": "non-torsion",
                        "certificate": io::nontorsion_to_json(&nt),
                    });
                    Ok(run.finish(&artifact, &out.output, "non-torsion", 0))
                }
                Err(e) => {
                    let artifact = serde_json::json!({"error": e.to_string()});
                    Ok(run.finish(&artifact, &out.output, "inconclusive", 1))
                }
            }
        }
        Command::Family {
            h_file,
            check_mprime,
            normalize,
            out,
        } => family_command(h_file, check_mprime, normalize, out, caps),
        Command::Density { point, out } => {
            let run = new_run("density", caps);
            let coords: Vec<&str> = point.split(',').collect();
            if coords.len() != 4 {
                return Err("expected --point \"x,y,z,w\"".into());
            }
            let vals: Result<Vec<_>, String> =
                coords.iter().map(|s| rational_from_string(s)).collect();
            let vals = vals?;
            let p = WP3Point::new(
                vals[0].clone(),
                vals[1].clone(),
                vals[2].clone(),
                vals[3].clone(),
            );
            match k3cover::density::density_check(&p, caps) {
                Ok(report) => {
                    let artifact = density_report_json(&report);
                    let (outcome, code) = if report.criteria_met {
                        ("criteria met", 0)
                    } else {
                        ("criteria not met", 1)
                    };
                    Ok(run.finish(&artifact, &out.output, outcome, code))
                }
                Err(e) => {
                    let artifact = serde_json::json!({"error": e.to_string()});
                    Ok(run.finish(&artifact, &out.output, "failed", 1))
                }
            }
        }
    }
}

fn family_command(
    h_file: Option<PathBuf>,
    check_mprime: Option<PathBuf>,
    normalize: Option<PathBuf>,
    out: OutArg,
    caps: SearchCaps,
) -> Result<i32, String> {
    use k3cover::family;
    let selected = [h_file.is_some(), check_mprime.is_some(), normalize.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if selected != 1 {
        return Err("family needs exactly one of --h, --check-mprime, --normalize".into());
    }
    if let Some(hf) = h_file {
        let mut run = new_run("family --h", caps);
        run.add_input(&hf)?;
        let j: HFileJson = read_json(&hf)?;
        let mut poly = k3cover::poly::MultiPoly::zero_poly();
        for (key, val) in &j.coefficients {
            let parts: Vec<&str> = key.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("bad exponent key `{key}`"));
            }
            let e: Vec<u32> = parts
                .iter()
                .map(|p| p.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|er| format!("{key}: {er}"))?;
            poly.add_term([e[0], e[1], e[2]], rational_from_string(val)?);
        }
        let hp = family::HPolynomial::new(poly).map_err(|e| e.to_string())?;
        let x = family::build_xh(&hp);
        let artifact =
            io::surface_to_json(&x.to_tower(), &k3cover::tower::TowerField::rationals());
        return Ok(run.finish(&artifact, &out.output, "built", 0));
    }
    if let Some(sf) = check_mprime {
        let mut run = new_run("family --check-mprime", caps);
        run.add_input(&sf)?;
        let j: SurfaceJson = read_json(&sf)?;
        let x = io::rational_surface_from_json(&j).map_err(|e| e.to_string())?;
        let member = family::mprime_membership(&x);
        let artifact = serde_json::json!({"mprime_member": member});
        let (outcome, code) = if member { ("member", 0) } else { ("not a member", 1) };
        return Ok(run.finish(&artifact, &out.output, outcome, code));
    }
    let sf = normalize.unwrap();
    let mut run = new_run("family --normalize", caps);
    run.add_input(&sf)?;
    let j: SurfaceJson = read_json(&sf)?;
    let (x, _) = io::surface_from_json(&j).map_err(|e| e.to_string())?;
    let datum = match branch_point_search(&x, caps) {
        Ok(d) => d,
        Err(e) => {
            let artifact = serde_json::json!({"error": e.to_string()});
            return Ok(run.finish(&artifact, &out.output, "no branch point", 1));
        }
    };
    match family::normalize_to_mprime(&x, &datum) {
        Ok((tr, surf)) => {
            let artifact = serde_json::json!({
                "tower": io::tower_to_json(&tr.tower),
                "surface": io::surface_to_json(&surf, &tr.tower),
                "a2_params": {
                    "a": io::elem_to_json(&tr.a2_params.0),
                    "b": io::elem_to_json(&tr.a2_params.1),
                    "c": io::elem_to_json(&tr.a2_params.2),
                    "d": io::elem_to_json(&tr.a2_params.3),
                },
                "sixth_root": io::elem_to_json(&tr.sixth_root),
            });
            Ok(run.finish(&artifact, &out.output, "normalized", 0))
        }
        Err(e) => {
            let artifact = serde_json::json!({"error": e.to_string()});
            Ok(run.finish(&artifact, &out.output, "failed", 1))
        }
    }
}

#[derive(serde::Deserialize)]
struct HFileJson {
    coefficients: BTreeMap<String, String>,
}

fn density_report_json(r: &k3cover::density::DensityReport) -> serde_json::Value {
    let point: Vec<String> = [&r.point.x, &r.point.y, &r.point.z, &r.point.w]
        .iter()
        .map(|c| rational_to_string(c))
        .collect();
    let checks: Vec<serde_json::Value> = r
        .checks
        .iter()
        .map(|c| {
            let rec = &c.record;
            serde_json::json!({
                "fibration": format!("{:?}", rec.index),
                "parameter": format!(
                    "[{}:{}]",
                    rational_to_string(&rec.parameter.a),
                    rational_to_string(&rec.parameter.b)
                ),
                "fiber_smooth": c.fiber_smooth,
                "splitting_tower_degree": rec.splitting_tower.total_degree(),
                "alpha_on_surface": [
                    rational_to_string(&rec.r_surface.x),
                    rational_to_string(&rec.r_surface.y),
                    rational_to_string(&rec.r_surface.z),
                    rational_to_string(&rec.r_surface.w),
                ],
                "torsion": c.torsion.as_ref().map(|t| match t {
                    k3cover::genus1::torsion::TorsionCertificate::Torsion { order } =>
                        serde_json::json!({"kind": "torsion", "order": order}),
                    k3cover::genus1::torsion::TorsionCertificate::NonTorsion(nt) =>
                        serde_json::json!({
                            "kind": "non-torsion",
                            "certificate": io::nontorsion_to_json(nt),
                        }),
                }),
            })
        })
        .collect();
    serde_json::json!({
        "point": point,
        "checks": checks,
        "criteria_met": r.criteria_met,
        "failures": r.failures,
    })
}
