//! `chowmod`: check cycles with modulus, compute boundaries and residues,
//! build and re-verify witness certificates, and run the randomized suites.
//!
//! Reports are JSON on stdout (or `--out`); certificates are pretty-printed.
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad input,
//! with `{"error":{"kind":..,"message":..}}` as the report.

mod input;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chowmod::cycle::{
    check_modulus_codim1, check_modulus_zerocycle, BoundaryOptions, Convention, CoordModel, ModulusDatum,
    ModulusVerdict, ParamCurve,
};
use chowmod::field::FieldSpec;
use chowmod::milnor::{
    k2_presentation_oracle, symbol_reduce, tame_symbol, total_delta, verify_mult_curve, verify_steinberg_curve,
    verify_xi_curve, CurveCheck, ReduceMode,
};
use chowmod::poly::Place;
use chowmod::suite::{run_suite, SuiteSizes};
use chowmod::wire::{parse_element, CurveJson, CycleJson, ElementJson, PlaceJson, ZeroCycleJson};
use chowmod::witness::{
    bounding_surface, generator_cycle, rho, verify_certificate, verify_rho_reciprocity, zero_cycle_vanishing_witness,
    Variant, WitnessCertificate,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use input::{AnyCycle, CycleFlags, Source};

#[derive(Parser, Debug)]
#[command(name = "chowmod", version, about = "Exact calculus of algebraic cycles with modulus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ground field: Q, Fp:p, Fq:q, Fq:p:mu or Q:mu.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Coordinate model: original or psi.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Exponents m1,...,mr of the modulus t1^m1...tr^mr.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Treat faces of level-1 cycles as degenerate at level 0.
    #[arg(long, global = true, value_enum, default_value_t = Toggle::On)]
    level0_degeneracy: Toggle,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit (or use) a certificate rather than a bare value.
    #[arg(long, global = true)]
    certificate: bool,
    /// Inline input text.
    #[arg(long, global = true)]
    inline: Option<String>,
    /// JSON input file.
    #[arg(long, global = true)]
    file: Option<String>,
    /// Number of affine coordinates t1..tr for inline cycles.
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Number of cube coordinates y1..yn for inline cycles.
    #[arg(long, global = true)]
    n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Face condition and modulus condition of a cycle.
    CheckCycle,
    /// Boundary of a hypersurface cycle or a parametric curve.
    Boundary {
        /// Use the negated sign convention.
        #[arg(long)]
        reversed: bool,
    },
    /// The residue invariant of a level-1 cycle; of the boundary at level 2.
    Rho,
    /// Bounding-surface certificate for a level-0 cycle.
    WitnessBounding,
    /// Vanishing certificate for the class of a closed point.
    WitnessZeroCycle {
        /// Push forward from the product with this base point.
        #[arg(long)]
        product_base: Option<String>,
    },
    /// The generator cycle Z_a on A^r x cube^1.
    Generator {
        #[arg(long)]
        a: String,
    },
    /// Milnor K-theory computations.
    Ktheory {
        #[command(subcommand)]
        command: KCommand,
    },
    /// Witness curves and curve boundaries.
    Curves {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// Rewrite a cycle or curve in the other coordinate model (--model).
    ConvertModel,
    /// Run every randomized suite with --seed.
    Suite {
        /// Override a suite size, as name=count.
        #[arg(long = "size", value_parser = parse_size)]
        sizes: Vec<(String, u128)>,
    },
    /// Re-check a witness certificate.
    Verify,
}

#[derive(Subcommand, Debug)]
enum KCommand {
    /// Sound rewrites, and vanishing over finite fields in degree >= 2.
    Reduce,
    /// Tame symbol at a place of k(t).
    Tame {
        /// Monic irreducible polynomial in t, or "inf".
        #[arg(long)]
        place: String,
    },
    /// Tame symbols at every place where the element can be nonzero.
    Delta,
    /// Presentation of K_2(F_q) for every prime power q up to --max-q.
    K2Table {
        #[arg(long, default_value_t = 16)]
        max_q: u128,
    },
}

#[derive(Subcommand, Debug)]
enum CurveCommand {
    /// Steinberg (f1, f3, ...) or multiplicativity (f, g) curve over a point.
    Totaro {
        #[arg(long, conflicts_with = "mult")]
        steinberg: Option<String>,
        #[arg(long)]
        mult: Option<String>,
        /// Coordinates of the base point.
        #[arg(long)]
        base: Option<String>,
    },
    /// The curve realizing the residues of {f1, ..., fn, u pi^r}.
    Xi {
        #[arg(long)]
        entries: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        order: i64,
    },
    /// Boundary 0-cycle of a parametric curve.
    Boundary {
        /// Base coordinates for an inline curve.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        reversed: bool,
    },
}

fn parse_size(s: &str) -> Result<(String, u128), String> {
    let (name, count) = s.split_once('=').ok_or_else(|| format!("expected name=count, got {s:?}"))?;
    let count = count.parse::<u128>().map_err(|e| format!("{count:?}: {e}"))?;
    Ok((name.to_string(), count))
}

#[derive(Debug)]
pub struct CliError {
    kind: String,
    message: String,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> CliError {
        CliError {
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::new("Usage", message)
    }

    pub fn io(path: &str, e: &std::io::Error) -> CliError {
        CliError::new("Io", format!("{path}: {e}"))
    }

    fn report(&self) -> String {
        json!({"error": {"kind": self.kind, "message": self.message}}).to_string()
    }
}

impl From<chowmod::Error> for CliError {
    fn from(e: chowmod::Error) -> CliError {
        CliError::new(e.kind(), e.to_string())
    }
}

macro_rules! lib {
    ($e:expr) => {
        $e.map_err(|e| CliError::from(chowmod::Error::from(e)))
    };
}

/// A finished report and whether everything it certifies held.
struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn value(v: Value, ok: bool) -> Report {
        Report { text: v.to_string(), ok }
    }

    fn ser<T: serde::Serialize>(v: &T, ok: bool) -> Report {
        Report {
            text: serde_json::to_string(v).expect("wire types serialize"),
            ok,
        }
    }

    fn certificate(c: &WitnessCertificate) -> Report {
        Report {
            text: c.to_json(),
            ok: c.is_valid(),
        }
    }
}

impl Cli {
    fn source(&self) -> Source<'_> {
        Source {
            file: self.file.as_deref(),
            inline: self.inline.as_deref(),
        }
    }

    fn cycle_flags(&self) -> CycleFlags<'_> {
        CycleFlags {
            field: self.field.as_deref(),
            model: self.model.as_deref(),
            modulus: self.modulus.as_deref(),
            r: self.r,
            n: self.n,
        }
    }

    fn cycle(&self) -> Result<AnyCycle, CliError> {
        input::cycle(&self.source(), &self.cycle_flags())
    }

    fn options(&self, reversed: bool) -> BoundaryOptions {
        BoundaryOptions {
            level0_degeneracy: self.level0_degeneracy == Toggle::On,
            convention: if reversed { Convention::Reversed } else { Convention::ModelDefault },
        }
    }

    fn field(&self) -> Result<FieldSpec, CliError> {
        input::field(self.field.as_deref())
    }

    fn target_model(&self) -> Result<CoordModel, CliError> {
        if self.model.is_none() {
            return Err(CliError::usage("--model is required"));
        }
        input::model(self.model.as_deref(), CoordModel::Psi)
    }
}

fn ones(spec: &FieldSpec, r: usize) -> Result<ModulusDatum, CliError> {
    lib!(ModulusDatum::monomial(spec, &vec![1; r]))
}

fn require_modulus(d: Option<ModulusDatum>) -> Result<ModulusDatum, CliError> {
    d.ok_or_else(|| CliError::usage("a modulus is required: --modulus m1,...,mr or a modulus in the input"))
}

fn check_cycle(cli: &Cli) -> Result<Report, CliError> {
    let mut out = serde_json::Map::new();
    let (face, modulus) = match cli.cycle()? {
        AnyCycle::Hyper(z, d) => {
            let face = z.check_face_condition();
            let modulus = match d {
                Some(d) => {
                    let psi = lib!(z.convert(CoordModel::Psi))?;
                    let report = lib!(check_modulus_codim1(&psi, &d))?;
                    if report.verdict != ModulusVerdict::Certified {
                        out.insert("modulus_components".into(), json!(report.components));
                    }
                    Some(report.verdict)
                }
                None => None,
            };
            (face, modulus)
        }
        AnyCycle::Zero(z, d) => {
            let face = z.check_face_condition();
            let modulus = match d {
                Some(d) => Some(if lib!(check_modulus_zerocycle(&z, &d))? {
                    ModulusVerdict::Certified
                } else {
                    ModulusVerdict::ViolatesNecessary
                }),
                None => None,
            };
            (face, modulus)
        }
        AnyCycle::Curve(_) => return Err(CliError::usage("check-cycle takes a hypersurface cycle or a 0-cycle")),
    };
    out.insert("face".into(), json!(if face.passed() { "pass" } else { "fail" }));
    if !face.passed() {
        out.insert("face_violations".into(), json!(face.violations));
    }
    let ok = face.passed() && matches!(modulus, None | Some(ModulusVerdict::Certified));
    out.insert("modulus".into(), modulus.map_or(json!("unchecked"), |v| json!(v)));
    Ok(Report::value(Value::Object(out), ok))
}

fn boundary(cli: &Cli, reversed: bool) -> Result<Report, CliError> {
    match cli.cycle()? {
        AnyCycle::Hyper(z, d) => {
            let b = lib!(z.boundary(cli.options(reversed)))?;
            Ok(Report::ser(&CycleJson::from_cycle(&b, d.as_ref()), true))
        }
        AnyCycle::Curve(c) => curve_boundary(&c, reversed),
        AnyCycle::Zero(..) => Err(CliError::usage("0-cycles of the cube have no boundary here")),
    }
}

fn curve_boundary(c: &ParamCurve, reversed: bool) -> Result<Report, CliError> {
    let convention = if reversed { Convention::Reversed } else { Convention::ModelDefault };
    let b = lib!(c.boundary(convention))?;
    Ok(Report::ser(&ZeroCycleJson::from_zero_cycle(&b, None), true))
}

fn rho_cmd(cli: &Cli) -> Result<Report, CliError> {
    let (z, d) = cli.cycle()?.hyper()?;
    let d = match d {
        Some(d) => d,
        None => ones(z.spec(), z.vars().r)?,
    };
    match z.level() {
        2 if cli.certificate => Ok(Report::certificate(&lib!(verify_rho_reciprocity(&z, &d))?)),
        2 => {
            let b = lib!(z.boundary(cli.options(false)))?;
            Ok(Report::value(json!({"rho_boundary": lib!(rho(&b, &d))?.to_string()}), true))
        }
        _ => Ok(Report::value(json!({"rho": lib!(rho(&z, &d))?.to_string()}), true)),
    }
}

fn witness_bounding(cli: &Cli) -> Result<Report, CliError> {
    let (z, d) = cli.cycle()?.hyper()?;
    let d = require_modulus(d)?;
    Ok(Report::certificate(&lib!(bounding_surface(&z, &d))?))
}

fn witness_zero_cycle(cli: &Cli, product_base: Option<&str>) -> Result<Report, CliError> {
    let (p, d) = input::point(&cli.source(), cli.field.as_deref())?;
    let d = match (cli.modulus.as_deref(), d) {
        (Some(m), _) => {
            let k = if p.spec().degree() > 1 && cli.field.is_none() { p.spec().base() } else { cli.field()? };
            lib!(ModulusDatum::monomial(&k, &input::exponents(m)?))?
        }
        (None, d) => require_modulus(d)?,
    };
    let variant = match product_base {
        Some(b) => Variant::ProductBase {
            base: input::split_list(b).into_iter().map(String::from).collect(),
        },
        None => Variant::Plain,
    };
    Ok(Report::certificate(&lib!(zero_cycle_vanishing_witness(&p, &d, &variant))?))
}

fn generator(cli: &Cli, a: &str) -> Result<Report, CliError> {
    let k = cli.field()?;
    let a = lib!(parse_element(&k, a))?;
    let r = cli.r.unwrap_or(2);
    let (z, cert) = lib!(generator_cycle(&a, r))?;
    if cli.certificate {
        return Ok(Report::certificate(&cert));
    }
    Ok(Report::ser(&CycleJson::from_cycle(&z, Some(&ones(&k, r)?)), cert.is_valid()))
}

fn place(spec: &FieldSpec, text: &str) -> Result<Place, CliError> {
    let j = match text.trim() {
        "inf" | "infinity" => PlaceJson::Infinity { infinity: true },
        pi => PlaceJson::Finite { pi: pi.to_string() },
    };
    lib!(j.to_place(spec))
}

fn ktheory(cli: &Cli, command: &KCommand) -> Result<Report, CliError> {
    match command {
        KCommand::Reduce => {
            let e = input::k_element(&cli.source(), cli.field.as_deref())?;
            let mode = if cli.certificate { ReduceMode::Certificate } else { ReduceMode::TheoremBacked };
            let r = lib!(symbol_reduce(&e, mode))?;
            let v = json!({"element": ElementJson::from_element(&r.element), "justification": r.justification});
            Ok(Report::value(v, true))
        }
        KCommand::Tame { place: v } => {
            let s = input::function_element(&cli.source(), cli.field.as_deref())?;
            let v = place(s.spec(), v)?;
            Ok(Report::ser(&ElementJson::from_element(&lib!(tame_symbol(&v, &s))?), true))
        }
        KCommand::Delta => {
            let s = input::function_element(&cli.source(), cli.field.as_deref())?;
            let places: Vec<Value> = lib!(total_delta(&s))?
                .iter()
                .map(|(v, e)| json!({"place": PlaceJson::from_place(v), "value": ElementJson::from_element(e)}))
                .collect();
            Ok(Report::value(json!({ "places": places }), true))
        }
        KCommand::K2Table { max_q } => {
            let mut rows = Vec::new();
            let mut all = true;
            for q in (2..=*max_q).filter(|&q| is_prime_power(q)) {
                let p = lib!(k2_presentation_oracle(q))?;
                all &= p.is_trivial();
                let invariants: Vec<String> = p.invariants.iter().map(ToString::to_string).collect();
                rows.push(json!({
                    "q": q,
                    "generator": p.generator,
                    "relations": p.relations.len(),
                    "invariants": invariants,
                    "trivial": p.is_trivial(),
                }));
            }
            Ok(Report::value(json!({"all_trivial": all, "table": rows}), all))
        }
    }
}

fn is_prime_power(q: u128) -> bool {
    let Some(p) = (2..=q).find(|p| q.is_multiple_of(*p)) else { return false };
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

fn curve_check(c: &CurveCheck) -> Report {
    let v = json!({
        "curve": CurveJson::from_curve(&c.curve),
        "boundary": ZeroCycleJson::from_zero_cycle(&c.boundary, None),
        "expected": ZeroCycleJson::from_zero_cycle(&c.expected, None),
        "expected_sign": c.expected_sign,
        "global_sign": c.global_sign,
        "holds": c.holds(),
    });
    Report::value(v, c.holds())
}

fn curves(cli: &Cli, command: &CurveCommand) -> Result<Report, CliError> {
    match command {
        CurveCommand::Totaro { steinberg, mult, base } => {
            let k = cli.field()?;
            let x = base.as_deref().map(|b| input::elements(&k, b)).transpose()?.unwrap_or_default();
            let check = match (steinberg, mult) {
                (Some(s), None) => {
                    let f = input::elements(&k, s)?;
                    let (f1, rest) = f.split_first().ok_or_else(|| CliError::usage("--steinberg needs f1"))?;
                    lib!(verify_steinberg_curve(&x, f1, rest))?
                }
                (None, Some(m)) => {
                    let [f, g] = input::elements(&k, m)?.try_into().map_err(|_| CliError::usage("--mult takes f,g"))?;
                    lib!(verify_mult_curve(&x, &f, &g))?
                }
                _ => return Err(CliError::usage("give --steinberg f1,f3,... or --mult f,g")),
            };
            Ok(curve_check(&check))
        }
        CurveCommand::Xi { entries, u, pi, order } => {
            let k = cli.field()?;
            let entries = input::ratfuncs(&k, entries)?;
            let [u] = input::ratfuncs(&k, u)?.try_into().map_err(|_| CliError::usage("--u takes one function"))?;
            let Place::Finite(pi) = place(&k, pi)? else {
                return Err(CliError::usage("--pi must be a finite place"));
            };
            Ok(curve_check(&lib!(verify_xi_curve(&entries, &u, &pi, *order))?))
        }
        CurveCommand::Boundary { base, reversed } => {
            let c = match cli.source().read()? {
                input::Text::Json(v) => lib!(input::decode::<CurveJson>(v, "curve")?.to_curve())?,
                input::Text::Inline(s) => {
                    let k = cli.field()?;
                    let base = base.as_deref().map(|b| input::ratfuncs(&k, b)).transpose()?.unwrap_or_default();
                    let model = input::model(cli.model.as_deref(), CoordModel::Original)?;
                    lib!(ParamCurve::new(&k, model, base, input::ratfuncs(&k, &s)?))?
                }
            };
            curve_boundary(&c, *reversed)
        }
    }
}

fn convert_model(cli: &Cli) -> Result<Report, CliError> {
    let target = cli.target_model()?;
    match cli.cycle()? {
        AnyCycle::Hyper(z, d) => Ok(Report::ser(&CycleJson::from_cycle(&lib!(z.convert(target))?, d.as_ref()), true)),
        AnyCycle::Zero(z, d) => Ok(Report::ser(
            &ZeroCycleJson::from_zero_cycle(&lib!(z.convert(target))?, d.as_ref()),
            true,
        )),
        AnyCycle::Curve(c) => Ok(Report::ser(&CurveJson::from_curve(&lib!(c.convert(target))?), true)),
    }
}

fn suite(cli: &Cli, sizes: &[(String, u128)]) -> Result<Report, CliError> {
    let sizes = SuiteSizes::default().with_overrides(sizes).map_err(CliError::usage)?;
    let report = run_suite(cli.seed, &sizes);
    Ok(Report {
        text: report.to_json(),
        ok: report.all_passed,
    })
}

fn verify(cli: &Cli) -> Result<Report, CliError> {
    let cert: WitnessCertificate = input::decode(cli.source().read_json()?, "certificate")?;
    let valid = lib!(verify_certificate(&cert))?;
    Ok(Report::value(json!({ "valid": valid }), valid))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::CheckCycle => check_cycle(cli),
        Command::Boundary { reversed } => boundary(cli, *reversed),
        Command::Rho => rho_cmd(cli),
        Command::WitnessBounding => witness_bounding(cli),
        Command::WitnessZeroCycle { product_base } => witness_zero_cycle(cli, product_base.as_deref()),
        Command::Generator { a } => generator(cli, a),
        Command::Ktheory { command } => ktheory(cli, command),
        Command::Curves { command } => curves(cli, command),
        Command::ConvertModel => convert_model(cli),
        Command::Suite { sizes } => suite(cli, sizes),
        Command::Verify => verify(cli),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(&path.display().to_string(), &e)),
        None => {
            let mut stdout = io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::new("Io", e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = emit(&CliError::usage(e.to_string().trim_end()).report(), None);
            return ExitCode::from(2);
        }
    };
    let result = run(&cli).and_then(|r| emit(&r.text, cli.out.as_ref()).map(|()| r.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = emit(&e.report(), None);
            ExitCode::from(2)
        }
    }
}
