use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use latcube::cubeface::recognize_cube;
use latcube::gen::{gen_smooth_cube_with_stats, gen_smooth_prismatoid, GenParams};
use latcube::idp::{is_idp, is_idp_pair_ra};
use latcube::io::{
    idp_report_json, lattice_json, polytope_json, read_manifest, read_polytope, write_manifest,
    write_polytope, InstanceKind, ManifestEntry, TOOL, VERSION,
};
use latcube::prismatoid::detect_prismatoid;
use latcube::report::{TheoremId, TheoremReport};
use latcube::smooth::is_smooth;
use latcube::verify::{verify, Instance, VerifyOptions};
use latcube::Error;

#[derive(Parser)]
#[command(name = "latcube", version, about = "Exact checks on lattice polytopes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a corpus of generated polytopes and its manifest.
    Generate {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, env = "LATCUBE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        coord_bound: i64,
        #[arg(long, default_value_t = 2)]
        scramble_rounds: u32,
        #[arg(long, value_enum, default_value_t = Kind::Cube)]
        kind: Kind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check one property of a polytope file (or a pair, for idp-pair).
    Check {
        file: PathBuf,
        file2: Option<PathBuf>,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long, default_value_t = 0)]
        extra_k: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a statement on every applicable instance of one or more corpora.
    Verify {
        theorem_id: String,
        #[arg(long, required = true, num_args = 1..)]
        corpus: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        extra_k: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cube,
    Prismatoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Smooth,
    Cube,
    Prismatoid,
    Idp,
    IdpPair,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    tool: &'static str,
    version: &'static str,
    extra_k: u64,
    #[serde(flatten)]
    report: &'a TheoremReport,
}

fn emit(doc: &Value, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(doc).expect("serializable")
        ),
        Format::Text => {
            if let Value::Object(m) = doc {
                for (k, v) in m {
                    match v {
                        Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
        }
    }
}

fn generate(params: GenParams, count: usize, kind: Kind, out: &Path) -> Result<bool, Error> {
    std::fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    let mut entries = Vec::with_capacity(count);
    let (mut attempts, mut rejected, mut fallbacks) = (0, 0, 0);
    for i in 0..count as u64 {
        let p = params.with_seed(params.seed.wrapping_add(i));
        let (poly, kind) = match kind {
            Kind::Cube => {
                let (c, stats) = gen_smooth_cube_with_stats(&p)?;
                attempts += stats.attempts;
                rejected += stats.rejected;
                fallbacks += stats.fallback as usize;
                (c.polytope().clone(), InstanceKind::Cube)
            }
            Kind::Prismatoid => (gen_smooth_prismatoid(&p)?, InstanceKind::Prismatoid),
        };
        let name = match kind {
            InstanceKind::Cube => format!("cube_d{}_{i:04}.json", p.dim),
            InstanceKind::Prismatoid => format!("prismatoid_d{}_{i:04}.json", p.dim),
        };
        write_polytope(&out.join(&name), &poly)?;
        entries.push(ManifestEntry {
            path: name,
            kind,
            params: p,
        });
    }
    let manifest = out.join("manifest.json");
    write_manifest(&manifest, &entries)?;
    emit(
        &json!({
            "tool": TOOL,
            "version": VERSION,
            "generated": entries.len(),
            "manifest": "manifest.json",
            "lift_attempts": attempts,
            "lift_rejected": rejected,
            "lift_fallbacks": fallbacks,
        }),
        Format::Json,
    );
    Ok(true)
}

fn check(
    file: &Path,
    file2: Option<&Path>,
    property: Property,
    extra_k: u64,
    format: Format,
) -> Result<bool, Error> {
    let p = read_polytope(file)?;
    let mut doc = json!({"tool": TOOL, "version": VERSION});
    let holds = match property {
        Property::Smooth => {
            let r = is_smooth(&p)?;
            doc["property"] = json!("smooth");
            doc["witness"] = json!(r.witness.map(|w| w.to_string()));
            r.smooth
        }
        Property::Cube => {
            doc["property"] = json!("cube");
            match recognize_cube(&p) {
                Ok(c) => {
                    doc["dim"] = json!(c.dim());
                    doc["parallel_axis"] = json!(c.parallel_facet_pair());
                    true
                }
                Err(e) => {
                    doc["reason"] = json!(e.to_string());
                    false
                }
            }
        }
        Property::Prismatoid => {
            doc["property"] = json!("prismatoid");
            match detect_prismatoid(&p) {
                Ok(pr) => {
                    doc["bottom"] = polytope_json(&p.face_polytope(p.facet_face_id(pr.bottom))?);
                    doc["top"] = polytope_json(&p.face_polytope(p.facet_face_id(pr.top))?);
                    doc["up_normal"] = lattice_json(&pr.up_normal);
                    true
                }
                Err(e) => {
                    doc["reason"] = json!(e.to_string());
                    false
                }
            }
        }
        Property::Idp => {
            let r = is_idp(&p, extra_k)?;
            doc["property"] = json!("idp");
            doc["report"] = idp_report_json(&r);
            r.verdict
        }
        Property::IdpPair => {
            let f2 = file2.ok_or_else(|| Error::Parse("idp-pair needs a second file".into()))?;
            let q = read_polytope(f2)?;
            let r = is_idp_pair_ra(&p, &q)?;
            doc["property"] = json!("idp-pair");
            doc["report"] = idp_report_json(&r);
            r.verdict
        }
    };
    doc["holds"] = json!(holds);
    emit(&doc, format);
    Ok(holds)
}

fn load_corpus(manifests: &[PathBuf]) -> Result<Vec<Instance>, Error> {
    let mut out = Vec::new();
    for (k, m) in manifests.iter().enumerate() {
        for (path, entry) in read_manifest(m)? {
            let id = if manifests.len() == 1 {
                entry.path.clone()
            } else {
                format!("{k}:{}", entry.path)
            };
            out.push(Instance::new(id, read_polytope(&path)?));
        }
    }
    Ok(out)
}

fn verify_cmd(
    theorem_id: &str,
    corpus: &[PathBuf],
    extra_k: u64,
    jobs: Option<usize>,
    format: Format,
    out: Option<&Path>,
) -> Result<bool, Error> {
    let theorem: TheoremId = theorem_id.parse()?;
    let instances = load_corpus(corpus)?;
    let opts = VerifyOptions { extra_k };
    let report = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| verify(theorem, &instances, &opts)),
        None => verify(theorem, &instances, &opts),
    };
    let doc = VerifyDoc {
        tool: TOOL,
        version: VERSION,
        extra_k,
        report: &report,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
        Format::Text => {
            let mut s = format!(
                "{} {}: {} instances, {} passed, {} failed, {} skipped\n",
                TOOL,
                report.theorem_id,
                report.instances,
                report.passes,
                report.failures.len(),
                report.skipped.len()
            );
            for f in &report.failures {
                s += &format!("FAIL {}: {}\n", f.instance, f.witness);
            }
            for n in &report.skipped {
                s += &format!("skip {n}\n");
            }
            s
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        None => print!("{text}"),
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Generate {
            dim,
            count,
            seed,
            coord_bound,
            scramble_rounds,
            kind,
            out,
        } => generate(
            GenParams::new(dim, coord_bound, scramble_rounds, seed),
            count,
            kind,
            &out,
        ),
        Cmd::Check {
            file,
            file2,
            property,
            extra_k,
            format,
        } => check(&file, file2.as_deref(), property, extra_k, format),
        Cmd::Verify {
            theorem_id,
            corpus,
            extra_k,
            jobs,
            format,
            out,
        } => verify_cmd(&theorem_id, &corpus, extra_k, jobs, format, out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("latcube: {e}");
            ExitCode::from(2)
        }
    }
}
