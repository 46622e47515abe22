use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matchkit::classification::{classify, classify_mp_type, is_permutable_matchgate};
use matchkit::dichotomy::{decide, ProblemVariant};
use matchkit::exactnum::{format_scalar, parse_scalar, Mode, Scalar};
use matchkit::gadget::{
    contract, gadget_to_json, realize_binary_or_001, realize_nondeg_binary, realize_symmetric_from_mp,
    synthesize_star, GadgetError,
};
use matchkit::holant::{
    count_pm, csp_to_holant, eval_csp, eval_holant, load_instance, Instance, InstanceFileError,
};
use matchkit::matchgate::{
    describe_witness, is_matchgate_by_expansion, mgi_check, normalize, permutation_preserves_matchgate,
    MatchgateError, MgiVerdict, Normalized,
};
use matchkit::signature::{
    bits_string, load_signature, parse_signature_json, signature_to_json, BinaryMatrix, Signature,
    SignatureFileError,
};

#[derive(Parser)]
#[command(name = "matchkit", version, about = "Matchgate signatures, gadgets and #CSP dichotomies")]
struct Cli {
    /// Arithmetic mode (defaults to MATCHKIT_MODE, then exact).
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Print machine-readable JSON instead of a report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Matchgate checks.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Membership in A, P, M, M_hat, M_P, M_P_hat and the M_P type.
    Classify { sig: String },
    /// Normal form with its shift and scale.
    Normalize { sig: String },
    /// Gadget synthesis.
    Synth {
        #[command(subcommand)]
        what: SynthCmd,
    },
    /// Brute-force evaluation of an instance file.
    Eval {
        #[arg(value_enum)]
        kind: EvalKind,
        inst: String,
    },
    /// Applies a 2x2 matrix to every variable: `a,b;c,d` or `hadamard`.
    Transform { sig: String, matrix: String },
    /// Decides a signature set for one problem variant.
    Decide {
        sigset: String,
        #[arg(long)]
        variant: String,
        /// Occurrence bound for the rd variants.
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Scans the matchgate identities.
    Mgi { sig: String },
    /// Matchgate membership by both the identities and the pairing expansion.
    Matchgate { sig: String },
    /// Whether permuting the variables by π keeps a matchgate a matchgate.
    Perm {
        sig: String,
        /// 1-based images, space or comma separated: "1 3 2 4".
        pi: String,
    },
}

#[derive(Subcommand)]
enum SynthCmd {
    /// Star gadget of a permutable matchgate.
    Star { sig: String },
    /// Symmetric non-affine matchgate from a signature in M_P minus A.
    Sym { sig: String },
    /// Non-degenerate binary from a non-degenerate signature.
    Nondeg { sig: String },
    /// Non-degenerate binary or [0,0,1] without the [0,0,1] helper.
    Binary { sig: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalKind {
    Holant,
    Csp,
    Pm,
}

/// Exit 2 for violated preconditions, 3 for unreadable input.
enum CliError {
    Precondition(String),
    Parse(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Precondition(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

impl From<SignatureFileError> for CliError {
    fn from(e: SignatureFileError) -> Self {
        match e {
            SignatureFileError::Signature(e) => pre(e),
            e => parse_err(e),
        }
    }
}

impl From<InstanceFileError> for CliError {
    fn from(e: InstanceFileError) -> Self {
        match e {
            InstanceFileError::Instance(e) => pre(e),
            e => parse_err(e),
        }
    }
}

impl From<GadgetError> for CliError {
    fn from(e: GadgetError) -> Self {
        pre(e)
    }
}

impl From<MatchgateError> for CliError {
    fn from(e: MatchgateError) -> Self {
        pre(e)
    }
}

struct Output {
    report: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let mode = match cli.mode {
        Some(ModeArg::Exact) => Mode::Exact,
        Some(ModeArg::Float) => Mode::Float,
        None => Mode::from_env(),
    };
    match run(cli.command, mode) {
        Ok(out) => {
            let text = if cli.json { serde_json::to_string(&out.json).expect("JSON output") } else { out.report };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (CliError::Precondition(msg) | CliError::Parse(msg)) = &e;
            eprintln!("matchkit: {msg}");
            ExitCode::from(e.code())
        }
    }
}

fn sig(spec: &str, mode: Mode) -> Result<Signature, CliError> {
    Ok(load_signature(spec, mode)?.1)
}

fn mgi_json(v: &MgiVerdict, arity: usize) -> Value {
    match v {
        MgiVerdict::Pass => json!({"pass": true}),
        MgiVerdict::Fail { beta, gamma } => json!({
            "pass": false,
            "witness": {"beta": bits_string(*beta, arity), "gamma": bits_string(*gamma, arity)},
        }),
    }
}

fn mgi_report(v: &MgiVerdict, arity: usize) -> String {
    match describe_witness(v, arity) {
        None => "pass".to_string(),
        Some(w) => format!("fail, witness {w}"),
    }
}

fn run(cmd: Command, mode: Mode) -> Result<Output, CliError> {
    match cmd {
        Command::Check { what } => check(what, mode),
        Command::Classify { sig: s } => classify_cmd(&sig(&s, mode)?),
        Command::Normalize { sig: s } => normalize_cmd(&sig(&s, mode)?),
        Command::Synth { what } => synth(what, mode),
        Command::Eval { kind, inst } => eval(kind, &inst, mode),
        Command::Transform { sig: s, matrix } => {
            let f = sig(&s, mode)?;
            let t = parse_matrix(&matrix, mode)?;
            if !t.is_invertible() {
                return Err(pre("matrix is singular"));
            }
            let g = f.transform(&t);
            Ok(Output { report: g.to_string(), json: json!({"signature": signature_to_json(None, &g)}) })
        }
        Command::Decide { sigset, variant, d } => {
            let v = ProblemVariant::parse(&variant, d).map_err(pre)?;
            let fs = load_sigset(&sigset, mode)?;
            let verdict = decide(&fs, v).map_err(pre)?;
            Ok(Output { report: verdict.to_string(), json: verdict.to_json() })
        }
    }
}

fn check(what: CheckCmd, mode: Mode) -> Result<Output, CliError> {
    match what {
        CheckCmd::Mgi { sig: s } => {
            let f = sig(&s, mode)?;
            let v = mgi_check(&f);
            Ok(Output { report: mgi_report(&v, f.arity()), json: mgi_json(&v, f.arity()) })
        }
        CheckCmd::Matchgate { sig: s } => {
            let f = sig(&s, mode)?;
            let v = mgi_check(&f);
            let expansion = is_matchgate_by_expansion(&f);
            let exp_text = match expansion {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "not applicable",
            };
            let verdict = if v.passed() { "matchgate" } else { "not a matchgate" };
            let report = format!("{verdict}\nidentities: {}\nexpansion:  {exp_text}", mgi_report(&v, f.arity()));
            let json = json!({"matchgate": v.passed(), "mgi": mgi_json(&v, f.arity()), "expansion": expansion});
            Ok(Output { report, json })
        }
        CheckCmd::Perm { sig: s, pi } => {
            let f = sig(&s, mode)?;
            let pi = parse_permutation(&pi)?;
            let kept = permutation_preserves_matchgate(&f, &pi)?;
            let report = if kept { "preserved" } else { "not preserved" }.to_string();
            Ok(Output { report, json: json!({"preserved": kept}) })
        }
    }
}

fn parse_permutation(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(format!("bad permutation entry {t:?}"))))
        .collect()
}

fn parse_matrix(text: &str, mode: Mode) -> Result<BinaryMatrix, CliError> {
    if matches!(text, "hadamard" | "H2") {
        return Ok(BinaryMatrix::hadamard(mode));
    }
    let cells: Vec<Scalar> = text
        .split([';', ','])
        .map(|t| parse_scalar(t.trim(), mode).map_err(|e| parse_err(format!("bad matrix entry {t:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    match <[Scalar; 4]>::try_from(cells) {
        Ok([a, b, c, d]) => Ok(BinaryMatrix::new(a, b, c, d)),
        Err(_) => Err(parse_err("matrix needs four entries: a,b;c,d")),
    }
}

fn classify_cmd(f: &Signature) -> Result<Output, CliError> {
    let v = classify(f);
    let mp_type = if v.in_mp() {
        match normalize(f) {
            Normalized::Normal { f: norm, .. } => Some(classify_mp_type(&norm).map_err(pre)?),
            Normalized::Trivial => None,
        }
    } else {
        None
    };
    let mut report = format!("signature: {f}\n{v}");
    if let Some(t) = &mp_type {
        report.push_str(&format!("\ntype:   {t}"));
    }
    let json = json!({
        "A": v.in_a(),
        "P": v.in_p(),
        "M": v.in_m(),
        "M_hat": v.in_m_hat(),
        "MP": v.in_mp(),
        "MP_hat": v.in_mp_hat(),
        "mp_type": mp_type.as_ref().map(|t| t.name()),
        "affine_constraints": v.affine.as_ref().map(|w| w.constraints()),
        "mgi": mgi_json(&v.matchgate, f.arity()),
    });
    Ok(Output { report, json })
}

fn normalize_cmd(f: &Signature) -> Result<Output, CliError> {
    match normalize(f) {
        Normalized::Trivial => Ok(Output { report: "zero signature".into(), json: json!({"zero": true}) }),
        Normalized::Normal { f: norm, cert } => {
            let shift = cert.shift_bits(f.arity());
            let report = format!("normalized: {norm}\nshift:      {shift}\nscale:      {}", cert.scale);
            let json = json!({
                "zero": false,
                "normalized": signature_to_json(None, &norm),
                "shift": shift,
                "scale": format_scalar(&cert.scale),
            });
            Ok(Output { report, json })
        }
    }
}

fn synth(what: SynthCmd, mode: Mode) -> Result<Output, CliError> {
    match what {
        SynthCmd::Star { sig: s } => {
            let f = sig(&s, mode)?;
            let star = synthesize_star(&f)?;
            let chains: Vec<Vec<Value>> = star
                .chains
                .iter()
                .map(|c| c.iter().map(|e| signature_to_json(None, e)).collect())
                .collect();
            let json = json!({
                "type": star.mp_type.name(),
                "center": signature_to_json(None, &star.center),
                "chains": chains,
                "scale": format_scalar(&star.scale),
                "gadget": gadget_to_json(&star.to_gadget()?),
            });
            Ok(Output { report: star.to_string(), json })
        }
        SynthCmd::Sym { sig: s } => {
            let f = sig(&s, mode)?;
            if !is_permutable_matchgate(&f).holds {
                return Err(pre("signature is not a permutable matchgate"));
            }
            let r = realize_symmetric_from_mp(&f)?;
            let report = format!(
                "g:        {}\nform:     {}\ncase:     {}\nvertices: {}",
                r.g,
                r.form,
                r.case,
                r.gadget.vertices().len()
            );
            let json = json!({
                "g": r.g.values.iter().map(format_scalar).collect::<Vec<_>>(),
                "form": r.form.form,
                "r": r.form.r.as_ref().map(format_scalar),
                "case": r.case,
                "gadget": gadget_to_json(&r.gadget),
            });
            Ok(Output { report, json })
        }
        SynthCmd::Nondeg { sig: s } => {
            let f = sig(&s, mode)?;
            let g = realize_nondeg_binary(&f)?;
            binary_output(&g, "nondeg_binary")
        }
        SynthCmd::Binary { sig: s } => {
            let f = sig(&s, mode)?;
            let (g, kind) = realize_binary_or_001(&f)?;
            binary_output(&g, kind.name())
        }
    }
}

fn binary_output(g: &matchkit::gadget::GadgetGraph, kind: &str) -> Result<Output, CliError> {
    let b = contract(g)?;
    let report = format!("kind:        {kind}\ncontraction: {b}\nvertices:    {}", g.vertices().len());
    let json = json!({"kind": kind, "contraction": signature_to_json(None, &b), "gadget": gadget_to_json(g)});
    Ok(Output { report, json })
}

fn eval(kind: EvalKind, path: &str, mode: Mode) -> Result<Output, CliError> {
    let inst = load_instance(path, mode)?;
    let value = match (kind, inst) {
        (EvalKind::Holant, Instance::Holant(h)) => eval_holant(&h),
        (EvalKind::Holant, Instance::Csp(c)) => csp_to_holant(&c).and_then(|h| eval_holant(&h)),
        (EvalKind::Csp, Instance::Csp(c)) => eval_csp(&c),
        (EvalKind::Pm, Instance::Graph(g)) => count_pm(&g),
        _ => return Err(parse_err("instance kind does not match the requested evaluation")),
    }
    .map_err(pre)?;
    Ok(Output { report: value.to_string(), json: json!({"value": format_scalar(&value)}) })
}

/// A JSON array of signature objects or references (inline `sym:`/`table:`
/// or paths relative to the set file), optionally wrapped as
/// `{"format": 1, "signatures": [...]}`.
fn load_sigset(path: &str, mode: Mode) -> Result<Vec<Signature>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {path}: {e}")))?;
    let doc: Value = serde_json::from_str(&text).map_err(parse_err)?;
    let items = match &doc {
        Value::Array(items) => items.clone(),
        Value::Object(obj) => {
            if let Some(v) = obj.get("format").and_then(Value::as_u64).filter(|&v| v != 1) {
                return Err(parse_err(format!("unsupported format version {v}")));
            }
            match obj.get("signatures") {
                Some(Value::Array(items)) => items.clone(),
                _ => return Err(parse_err("signature set needs a \"signatures\" array")),
            }
        }
        _ => return Err(parse_err("signature set must be a JSON array")),
    };
    let base = Path::new(path).parent().map(Path::to_path_buf).unwrap_or_default();
    items
        .iter()
        .map(|item| match item {
            Value::String(s) if s.starts_with("sym:") || s.starts_with("table:") => sig(s, mode),
            Value::String(s) => sig(&base.join(s).to_string_lossy(), mode),
            other => Ok(parse_signature_json(other, mode)?.1),
        })
        .collect()
}
