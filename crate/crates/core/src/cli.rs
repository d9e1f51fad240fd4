//! Command-line front end. Every command prints one JSON document (or CSV for `vertex --format csv`).
//! Exit status: 0 on success, 1 when a checked identity fails, 2 on usage errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::annulus::ModuleVector;
use crate::finite_rank::{
    charvar_relation_residuals, cvec_pentagon_check, face_qde_residual, loc_quiver_canoe_seed,
    loc_quiver_seed, macdonald_eigen_check, uv_embedding_check, uv_pentagon_check,
    whittaker_wavefunction_check, CharvarCoeffs,
};
use crate::quantum_cluster::{
    auto_series_with, cvec_mutate_signed, cvec_sequence_with, CSeed, Composition,
};
use crate::torus_skein::{
    normal_order, normal_order_random, pentagon_check_form, PentagonForm, Vec2,
};
use crate::wavefunction::{
    ad_kappa_check, canoe_face_residual, inverse_identity_check, unknot_residual,
    wavefunction_framed,
};

pub const SCHEMA: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "skein",
    version,
    about = "Skein-valued cluster and wavefunction computations"
)]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
    /// Worker threads for data-parallel steps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Framed one-leg vertex coefficients.
    Vertex(VertexArgs),
    /// Baxter pentagon in the torus skein.
    Pentagon(PentagonArgs),
    /// c-vector mutation sequence on a seed.
    Mutate(MutateArgs),
    /// Finite-rank checks.
    FiniteRank(FiniteRankArgs),
    /// Wavefunction and property checks.
    Verify(VerifyArgs),
    /// Lists every named check.
    ListChecks,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct VertexArgs {
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub framing: i64,
    #[arg(long, default_value_t = 3)]
    pub max_boxes: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormArg {
    Standard,
    Reversed,
    Swapped,
}

#[derive(Args, Debug)]
pub struct PentagonArgs {
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, default_value_t = 4)]
    pub order: u32,
    #[arg(long, value_enum, default_value_t = FormArg::Standard)]
    pub form: FormArg,
    /// Accepted for compatibility; output is always JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Builtin {
    LocQuiver,
    LocQuiverCanoe,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CompositionArg {
    RightToLeft,
    LeftToRight,
}

#[derive(Args, Debug)]
pub struct MutateArgs {
    /// Seed JSON file `{rank, B, frozen, faces, labels, C}`.
    #[arg(long, conflicts_with = "builtin")]
    pub seed: Option<std::path::PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Comma-separated one-based vertices, written as a composition.
    #[arg(long)]
    pub sequence: String,
    #[arg(long, value_enum, default_value_t = CompositionArg::RightToLeft)]
    pub composition: CompositionArg,
    /// Also print the automorphism series to this order.
    #[arg(long)]
    pub auto_order: Option<i64>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum FiniteCheck {
    Macdonald,
    Charvar,
    Qde,
    Whittaker,
    UvEmbedding,
    UvPentagon,
    CvecPentagon,
}

#[derive(Args, Debug)]
pub struct FiniteRankArgs {
    #[arg(long, value_enum)]
    pub check: FiniteCheck,
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub order: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum VerifyCheck {
    Canoe,
    Unknot,
    Inverse,
    Adkappa,
    Confluence,
    SignCoherence,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyCheck::All)]
    pub check: VerifyCheck,
    #[arg(long, default_value_t = 4)]
    pub order: u32,
    /// Number of random samples for confluence and sign coherence.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

/// Outcome of a command: the JSON document and the exit status.
pub struct Outcome {
    pub doc: Value,
    pub status: i32,
    pub csv: Option<String>,
}

fn ok(doc: Value, pass: bool) -> Outcome {
    Outcome {
        doc,
        status: if pass { 0 } else { 1 },
        csv: None,
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn first_module_failure(v: &ModuleVector) -> Value {
    match v.iter().next() {
        Some((p, c)) => json!({"partition": p, "coeff": c, "text": c.to_text()}),
        None => Value::Null,
    }
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected two integers, got '{s}'"));
    }
    let a = parts[0].parse::<i64>().map_err(|e| e.to_string())?;
    let b = parts[1].parse::<i64>().map_err(|e| e.to_string())?;
    Ok([a, b])
}

fn vertex(a: &VertexArgs) -> Result<Outcome, String> {
    let w = wavefunction_framed(a.framing, a.max_boxes).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = crate::partitions::partitions_up_to(a.max_boxes)
        .into_iter()
        .map(|p| {
            let c = w.coeff(&p);
            json!({"partition": p, "coeff": c, "text": c.to_text()})
        })
        .collect();
    let csv = match a.format {
        Format::Json => None,
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["partition", "coeff"])
                .map_err(|e| e.to_string())?;
            for p in crate::partitions::partitions_up_to(a.max_boxes) {
                let c = w.coeff(&p);
                wtr.write_record([p.to_string(), c.to_text()])
                    .map_err(|e| e.to_string())?;
            }
            Some(
                String::from_utf8(wtr.into_inner().map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?,
            )
        }
    };
    Ok(Outcome {
        doc: json!({"schema": SCHEMA, "command": "vertex", "framing": a.framing, "max_boxes": a.max_boxes, "rows": rows}),
        status: 0,
        csv,
    })
}

fn pentagon(a: &PentagonArgs) -> Result<Outcome, String> {
    let x = parse_vec2(&a.x)?;
    let y = parse_vec2(&a.y)?;
    let form = match a.form {
        FormArg::Standard => PentagonForm::Standard,
        FormArg::Reversed => PentagonForm::Reversed,
        FormArg::Swapped => PentagonForm::SwappedRhs,
    };
    let r = pentagon_check_form(x, y, a.order, form).map_err(|e| e.to_string())?;
    Ok(ok(
        json!({"schema": SCHEMA, "command": "pentagon", "x": x, "y": y, "form": value_name(a.form), "pass": r.pass, "report": r}),
        r.pass,
    ))
}

fn load_seed(a: &MutateArgs) -> Result<CSeed, String> {
    let mut seed = match (&a.seed, a.builtin) {
        (Some(path), _) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str::<CSeed>(&text).map_err(|e| e.to_string())?
        }
        (None, Some(Builtin::LocQuiver)) => loc_quiver_seed(),
        (None, Some(Builtin::LocQuiverCanoe)) => loc_quiver_canoe_seed(),
        (None, None) => return Err("one of --seed or --builtin is required".into()),
    };
    if seed.c.is_empty() {
        seed.c = (0..seed.rank)
            .map(|i| (0..seed.rank).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    if seed.rank == 0 {
        seed.rank = seed.b.len();
    }
    seed.validate().map_err(|e| e.to_string())?;
    Ok(seed)
}

fn mutate(a: &MutateArgs) -> Result<Outcome, String> {
    let seed = load_seed(a)?;
    let ks: Vec<usize> = a
        .sequence
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad vertex '{s}': {e}"))
        })
        .collect::<Result<_, _>>()?;
    if let Some(k) = ks.iter().find(|&&k| k == 0 || k > seed.rank) {
        return Err(format!("vertex {k} out of range 1..={}", seed.rank));
    }
    let comp = match a.composition {
        CompositionArg::RightToLeft => Composition::RightToLeft,
        CompositionArg::LeftToRight => Composition::LeftToRight,
    };
    let run = match cvec_sequence_with(&seed, &ks, comp) {
        Ok(r) => r,
        Err(e) => {
            return Ok(ok(
                json!({"schema": SCHEMA, "command": "mutate", "pass": false, "error": e.to_string()}),
                false,
            ));
        }
    };
    let auto = match a.auto_order {
        Some(o) => Some(
            auto_series_with(&seed, &ks, comp, o)
                .map_err(|e| e.to_string())?
                .elem,
        ),
        None => None,
    };
    Ok(ok(
        json!({
            "schema": SCHEMA,
            "command": "mutate",
            "pass": true,
            "sequence": ks,
            "signs": run.signs,
            "tropical": run.tropical,
            "cvectors": run.cvectors,
            "seed": run.seed,
            "auto_series": auto,
            "auto_order": a.auto_order,
        }),
        true,
    ))
}

fn finite_rank(a: &FiniteRankArgs) -> Result<Outcome, String> {
    let e = |x: crate::finite_rank::FiniteRankError| x.to_string();
    let head = |pass: bool, extra: Value| {
        let mut doc = json!({"schema": SCHEMA, "command": "finite-rank", "check": value_name(a.check), "N": a.n, "order": a.order, "pass": pass});
        if let (Value::Object(m), Value::Object(x)) = (&mut doc, extra) {
            m.extend(x);
        }
        ok(doc, pass)
    };
    if a.n == 0 {
        return Err("--N must be at least 1".into());
    }
    Ok(match a.check {
        FiniteCheck::Macdonald => {
            let pass = macdonald_eigen_check(a.n, a.order).map_err(e)?;
            head(pass, json!({}))
        }
        FiniteCheck::Charvar => {
            if a.n != 2 {
                return Err("charvar is defined for --N 2".into());
            }
            let rs = charvar_relation_residuals(&CharvarCoeffs::default(), a.order).map_err(e)?;
            let fail = rs.iter().find(|(_, r)| !r.is_zero());
            let first = fail.map(|(l, r)| {
                let (mu, c) = r.terms().iter().next().expect("nonzero");
                json!({"input": l, "monomial": mu, "coeff": c})
            });
            head(fail.is_none(), json!({"first_failure": first}))
        }
        FiniteCheck::Qde => {
            let r = face_qde_residual(a.n, a.order).map_err(e)?;
            let first = r
                .terms()
                .iter()
                .next()
                .map(|(mu, c)| json!({"monomial": mu, "coeff": c}));
            head(r.is_zero(), json!({"first_failure": first}))
        }
        FiniteCheck::Whittaker => {
            let r = whittaker_wavefunction_check(a.order).map_err(e)?;
            head(r.pass, json!({"report": r}))
        }
        FiniteCheck::UvEmbedding => {
            let r = uv_embedding_check(a.order).map_err(e)?;
            head(r.pass, json!({"report": r}))
        }
        FiniteCheck::UvPentagon => {
            let pass = uv_pentagon_check(a.order as i64).map_err(e)?;
            head(pass, json!({}))
        }
        FiniteCheck::CvecPentagon => {
            let r = cvec_pentagon_check(a.order as i64).map_err(e)?;
            head(r.pass, json!({"report": r}))
        }
    })
}

fn random_word(rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    let len = rng.gen_range(2..=4);
    (0..len)
        .map(|_| loop {
            let v = [rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
            if v != [0, 0] {
                break v;
            }
        })
        .collect()
}

/// Normal ordering along random rewrite paths agrees with the canonical one.
pub fn confluence_check(samples: usize, rng_seed: u64) -> (bool, Option<Vec<Vec2>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..samples {
        let w = random_word(&mut rng);
        let a = normal_order(&w, crate::coeff::ScalarQ::one()).expect("nonzero letters");
        let b = normal_order_random(&w, &mut rng).expect("nonzero letters");
        if a != b {
            return (false, Some(w));
        }
    }
    (true, None)
}

/// Random mutation sequences on the local quiver never produce a mixed-sign c-vector.
pub fn sign_coherence_check(
    samples: usize,
    max_len: usize,
    rng_seed: u64,
) -> (bool, Option<Vec<usize>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let base = loc_quiver_seed();
    for _ in 0..samples {
        let len = rng.gen_range(1..=max_len);
        let mut seq = Vec::with_capacity(len);
        let mut cur = base.clone();
        for _ in 0..len {
            let k = rng.gen_range(0..base.rank);
            seq.push(k + 1);
            match cvec_mutate_signed(&cur, k) {
                Ok((next, _)) => cur = next,
                Err(_) => return (false, Some(seq)),
            }
            if (0..cur.rank)
                .any(|j| crate::quantum_cluster::tropical_sign(&cur.cvector(j)).is_none())
            {
                return (false, Some(seq));
            }
        }
    }
    (true, None)
}

fn verify_one(
    check: VerifyCheck,
    order: u32,
    samples: usize,
    rng_seed: u64,
) -> Result<Value, String> {
    let e = |x: crate::annulus::AnnulusError| x.to_string();
    let (pass, first) = match check {
        VerifyCheck::Canoe => {
            let r = canoe_face_residual(order).map_err(e)?;
            (r.is_zero(), first_module_failure(&r))
        }
        VerifyCheck::Unknot => {
            let r = unknot_residual(order).map_err(e)?;
            (r.is_zero(), first_module_failure(&r))
        }
        VerifyCheck::Inverse => {
            let mut fail = Value::Null;
            for p in 0..=2 {
                if !inverse_identity_check(p, order).map_err(e)? {
                    fail = json!({"p": p});
                    break;
                }
            }
            (fail.is_null(), fail)
        }
        VerifyCheck::Adkappa => {
            let mut fail = Value::Null;
            'outer: for p in [-1, 1, 2] {
                for n in 1..=2 {
                    if !ad_kappa_check(p, n, order).map_err(e)? {
                        fail = json!({"p": p, "n": n});
                        break 'outer;
                    }
                }
            }
            (fail.is_null(), fail)
        }
        VerifyCheck::Confluence => {
            let (pass, w) = confluence_check(samples, rng_seed);
            (pass, json!(w.map(|w| json!({"word": w}))))
        }
        VerifyCheck::SignCoherence => {
            let (pass, s) = sign_coherence_check(samples, (order as usize).max(1) * 2, rng_seed);
            (pass, json!(s.map(|s| json!({"applied": s}))))
        }
        VerifyCheck::All => unreachable!(),
    };
    Ok(json!({"check": value_name(check), "pass": pass, "first_failure": first}))
}

fn verify(a: &VerifyArgs, rng_seed: u64) -> Result<Outcome, String> {
    let checks: Vec<VerifyCheck> = if a.check == VerifyCheck::All {
        vec![
            VerifyCheck::Canoe,
            VerifyCheck::Unknot,
            VerifyCheck::Inverse,
            VerifyCheck::Adkappa,
            VerifyCheck::Confluence,
            VerifyCheck::SignCoherence,
        ]
    } else {
        vec![a.check]
    };
    let mut results = Vec::new();
    let mut pass = true;
    for c in checks {
        let r = verify_one(c, a.order, a.samples, rng_seed)?;
        pass &= r["pass"].as_bool().unwrap_or(false);
        results.push(r);
    }
    let first = results.iter().find(|r| r["pass"] == json!(false)).cloned();
    Ok(ok(
        json!({"schema": SCHEMA, "command": "verify", "order": a.order, "rng_seed": rng_seed, "pass": pass, "results": results, "first_failure": first}),
        pass,
    ))
}

fn list_checks() -> Outcome {
    let checks = json!([
        {"command": "verify", "check": "canoe", "description": "canoe face relation on the framing-zero wavefunction"},
        {"command": "verify", "check": "unknot", "description": "unknot conormal difference equation"},
        {"command": "verify", "check": "inverse", "description": "inverse Baxter identity for p = 0, 1, 2"},
        {"command": "verify", "check": "adkappa", "description": "conjugation by the framing operator"},
        {"command": "verify", "check": "confluence", "description": "normal ordering along random rewrite paths"},
        {"command": "verify", "check": "sign-coherence", "description": "random mutation sequences stay sign-coherent"},
        {"command": "pentagon", "check": "pentagon", "description": "Baxter pentagon in the torus skein"},
        {"command": "finite-rank", "check": "macdonald", "description": "Macdonald eigenvalues against the solid torus spectrum"},
        {"command": "finite-rank", "check": "charvar", "description": "rank 2 character variety relation"},
        {"command": "finite-rank", "check": "qde", "description": "face difference equation for the dilogarithm product"},
        {"command": "finite-rank", "check": "whittaker", "description": "q-Whittaker expansion of the rank 2 wavefunction"},
        {"command": "finite-rank", "check": "uv-embedding", "description": "UV torus embedding and difference ideal"},
        {"command": "finite-rank", "check": "uv-pentagon", "description": "abelianized Baxter pentagon"},
        {"command": "finite-rank", "check": "cvec-pentagon", "description": "c-vectors of the two rank 2 mutation sequences"},
    ]);
    ok(
        json!({"schema": SCHEMA, "command": "list-checks", "checks": checks}),
        true,
    )
}

/// Parses `args` (including the program name) and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
    let res = match &cli.command {
        Command::Vertex(a) => vertex(a),
        Command::Pentagon(a) => pentagon(a),
        Command::Mutate(a) => mutate(a),
        Command::FiniteRank(a) => finite_rank(a),
        Command::Verify(a) => verify(a, cli.rng_seed),
        Command::ListChecks => Ok(list_checks()),
    };
    match res {
        Ok(o) => {
            match o.csv {
                Some(c) => {
                    let _ = write!(out, "{c}");
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&o.doc).expect("json")
                    );
                }
            }
            o.status
        }
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
