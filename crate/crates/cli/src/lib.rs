//! Batch front end: each subcommand reads one JSON file, runs the matching
//! computation and returns a [`Report`].

mod report;
mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use projgraft::framed::{
    classify_phi_image, image_has_order_two, is_degenerate, is_trivial, nondegenerate_framing_search,
    rep_is_degenerate_unframed, triangulation_well_defined, SearchOptions,
};
use projgraft::grafting::{
    cusp_c_closed_form, geodesic_closed_form_map, grafting_exponent, infer_end_from_monodromy, pole_order,
    signed_c_parameter, EndSpec, SignedEndData, Spiral,
};
use projgraft::moebius::{classify, multiplier_pair, SpherePoint};
use projgraft::schema::{self, SchemaError};
use projgraft::schwarzian::{
    closed_form_schwarzian, closed_form_schwarzian_at, continue_along_loop, eval_model, exponent_from_leading,
    model_map_for_end, numeric_schwarzian, ModelMapKind, MIN_LOOP_STEPS,
};
use projgraft::surfaces::{chi, dt_parameter_count};
use projgraft::tolerance::Tolerance;
use projgraft::Error;

pub use report::{Field, Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "projgraft",
    version,
    about = "Grafting, Schwarzian and framed-representation checks"
)]
pub struct Cli {
    /// One epsilon for every tolerance (the algebraic one is kept 1000x tighter).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed for randomized searches and sampled suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Reject model-map evaluation points on the negative real axis.
    #[arg(long, global = true)]
    pub strict_branch: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Peripheral monodromy, pole order and exponent of a grafted end.
    GraftEnd { spec: PathBuf },
    /// End type, length and weight class read off a peripheral matrix.
    InferEnd { matrix: PathBuf },
    /// Exponent from the model Schwarzian, checked against the grafting side.
    Exponent {
        spec: PathBuf,
        /// Evaluate the model map at this point (JSON point syntax, repeatable).
        #[arg(long = "at")]
        at: Vec<String>,
    },
    /// Euler characteristic and Dehn-Thurston count of a signature.
    Surface { signature: PathBuf },
    /// Whether a representation is the monodromy of a signed structure.
    ClassifyRep { rep: PathBuf },
    /// Degeneracy of a framed representation.
    CheckFraming { framed: PathBuf },
    /// Edge coordinates of a framed triangulation.
    FgCoords { triangulation: PathBuf },
    /// Built-in verification suite.
    VerifyPaper,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GraftEnd { .. } => "graft-end",
            Command::InferEnd { .. } => "infer-end",
            Command::Exponent { .. } => "exponent",
            Command::Surface { .. } => "surface",
            Command::ClassifyRep { .. } => "classify-rep",
            Command::CheckFraming { .. } => "check-framing",
            Command::FgCoords { .. } => "fg-coords",
            Command::VerifyPaper => "verify-paper",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub tolerance: Tolerance,
    pub seed: u64,
    pub strict_branch: bool,
}

/// Parsed arguments to a report; the exit code is `report.exit_code()`.
pub fn run_cli(cli: &Cli) -> Report {
    let name = cli.command.name();
    let tolerance = match cli.tolerance {
        None => Tolerance::default(),
        Some(eps) if eps.is_finite() && eps > 0.0 => Tolerance::uniform(eps),
        Some(eps) => {
            return Report::invalid(
                name,
                None,
                format!("--tolerance must be positive and finite, got {eps}"),
            )
        }
    };
    let options = Options {
        tolerance,
        seed: cli.seed,
        strict_branch: cli.strict_branch,
    };
    run(&cli.command, &options)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

/// A failure before or during a command: bad input or a numeric breakdown.
enum Failure {
    Schema(SchemaError),
    Io(String),
    Core(Error),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Schema(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Numeric breakdowns are verification failures; everything else is input.
fn is_numeric(e: &Error) -> bool {
    matches!(
        e,
        Error::StepTooLarge(_) | Error::DivergentLimit | Error::FitResidualTooLarge(_) | Error::DepthExceeded
    )
}

pub fn run(command: &Command, options: &Options) -> Report {
    let name = command.name();
    let mut report = Report::new(name);
    let outcome = match command {
        Command::GraftEnd { spec } => graft_end(&mut report, spec, options),
        Command::InferEnd { matrix } => infer_end(&mut report, matrix, options),
        Command::Exponent { spec, at } => exponent(&mut report, spec, at, options),
        Command::Surface { signature } => surface(&mut report, signature),
        Command::ClassifyRep { rep } => classify_rep(&mut report, rep, options),
        Command::CheckFraming { framed } => check_framing(&mut report, framed, options),
        Command::FgCoords { triangulation } => fg_coords(&mut report, triangulation, options),
        Command::VerifyPaper => {
            verify::run(&mut report, options);
            Ok(())
        }
    };
    match outcome {
        Ok(()) => report,
        Err(Failure::Schema(e)) => Report::invalid(name, Some(&e.pointer), e.message),
        Err(Failure::Io(msg)) => Report::invalid(name, None, msg),
        Err(Failure::Core(e)) if is_numeric(&e) => {
            report.status = Status::Failed;
            report.push("error", e.to_string(), None);
            report
        }
        Err(Failure::Core(e)) => Report::invalid(name, None, e),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn end_kind(end: &SignedEndData) -> &'static str {
    match end.spec() {
        EndSpec::Cusp(_) => "cusp",
        EndSpec::Geodesic(_) => "geodesic",
    }
}

fn push_signs(report: &mut Report, end: &SignedEndData) {
    report.push("end", end_kind(end), None);
    if let EndSpec::Geodesic(g) = end.spec() {
        report.push("length", g.length(), None);
        report.push("spiral", g.spiral(), Some("clockwise iff σ = τ"));
    }
    report.push("end_sign", end.end_sign(), None);
    report.push("weight_sign", end.weight_sign(), None);
}

const EXPONENT_FORMULA_CUSP: &str = "r = ±iα";
const EXPONENT_FORMULA_GEODESIC: &str = "r = ±(l ∓ iα), l - iα anticlockwise, l + iα clockwise";

fn exponent_formula(end: &SignedEndData) -> &'static str {
    match end.spec() {
        EndSpec::Cusp(_) => EXPONENT_FORMULA_CUSP,
        EndSpec::Geodesic(_) => EXPONENT_FORMULA_GEODESIC,
    }
}

fn graft_end(report: &mut Report, path: &Path, options: &Options) -> Result<(), Failure> {
    let tol = &options.tolerance;
    let end = schema::parse_graft_spec(&read(path)?)?;
    push_signs(report, &end);
    let spec = end.spec();
    let m = spec.monodromy();
    report.push("total_weight", m.total_weight, Some("α = Σ α_j"));
    let deck = match spec {
        EndSpec::Cusp(_) => "E_1(a_1)∘…∘E_r(a_r)∘(z ↦ z + 1), E_j(z) = e^{-iα_j}(z - a_j) + a_j",
        EndSpec::Geodesic(g) if g.spiral() == Spiral::Clockwise => {
            "E_1(a_1)∘…∘E_r(a_r)∘(z ↦ λz), E_j(z) = e^{+iα_j}(z - a_j) + a_j, λ = e^l"
        }
        EndSpec::Geodesic(_) => "E_1(a_1)∘…∘E_r(a_r)∘(z ↦ λz), E_j(z) = e^{-iα_j}(z - a_j) + a_j, λ = e^l",
    };
    report.push("monodromy", m.monodromy, Some(deck));
    report.push(
        "class",
        classify(&m.monodromy, tol),
        Some("trace² of the unit-determinant matrix"),
    );
    let mu_formula = match spec {
        EndSpec::Cusp(_) => "μ = Π e^{-iα_j}",
        EndSpec::Geodesic(_) => "μ = λ Π e^{∓iα_j}",
    };
    report.push("multiplier", m.multiplier, Some(mu_formula));
    report.push("constant", m.constant, Some("z ↦ μz + C from the composition"));
    match spec {
        EndSpec::Cusp(c) if !c.leaves().is_empty() => {
            let closed = cusp_c_closed_form(c)?;
            report.push(
                "constant_closed_form",
                closed,
                Some("C = a_1 + Σ_i e^{-i(α_1+…+α_i)}(a_{i+1} - a_i), a_{r+1} = 1"),
            );
            let residual = (closed - m.constant).norm();
            report.push("constant_residual", residual, None);
            report.check("closed_form_agrees", residual <= tol.algebraic.max(1e-12), None);
        }
        EndSpec::Geodesic(g) => {
            let closed = geodesic_closed_form_map(g).trace_squared();
            report.push("trace_squared", m.monodromy.trace_squared(), None);
            report.push(
                "trace_squared_closed_form",
                closed,
                Some("tr² of z ↦ λ Π e^{∓iα_j} z + c"),
            );
            let residual = (closed - m.monodromy.trace_squared()).norm();
            report.push("trace_squared_residual", residual, None);
            report.check("closed_form_agrees", residual <= tol.knife_edge, None);
        }
        EndSpec::Cusp(_) => {}
    }
    let pole_formula = match spec {
        EndSpec::Cusp(_) => "weight 2π: none iff C = 0, simple iff C ≠ 0; any other weight: double",
        EndSpec::Geodesic(_) => "double at every geodesic end",
    };
    report.push("pole_order", pole_order(spec, tol), Some(pole_formula));
    report.push("exponent", grafting_exponent(&end), Some(exponent_formula(&end)));
    report.push("signed_parameter", signed_c_parameter(&end), Some("c = σl + iτα"));
    Ok(())
}

fn infer_end(report: &mut Report, path: &Path, options: &Options) -> Result<(), Failure> {
    let tol = &options.tolerance;
    let m = schema::parse_matrix(&read(path)?)?;
    let inferred = infer_end_from_monodromy(&m, tol);
    report.push("monodromy", m, None);
    report.push("trace_squared", m.trace_squared(), None);
    report.push("class", inferred.class, Some("trace² of the unit-determinant matrix"));
    report.push(
        "end",
        inferred.end_type,
        Some("elliptic, parabolic or identity: cusp; loxodromic: geodesic"),
    );
    if let Ok(pair) = multiplier_pair(&m, tol) {
        report.push("multipliers", pair.0, Some("{μ, 1/μ} at the two fixed points"));
    }
    report.push("boundary_length", inferred.boundary_length, Some("l = |log|μ||"));
    report.push(
        "weight_class",
        inferred.weight_class,
        Some("{β, -β} mod 2π with β = arg μ"),
    );
    Ok(())
}

/// `0.5·e^{0.3i}`, the sample point of the numeric checks: off the cut and
/// clear of the poles of the `w^{-n} + log w` Schwarzian at `w^n = n`.
const SAMPLE: Complex64 = Complex64::new(0.4776682550320319, 0.1477601033306698);

fn leading_formula(kind: &ModelMapKind) -> &'static str {
    match kind {
        ModelMapKind::PowerTheta { .. } => "a = (1 - θ²)/2 for w^θ",
        ModelMapKind::PowerN { .. } => "a = (1 - n²)/2 for w^n",
        ModelMapKind::PowerPlusLog { n: 0 } => "a = 1/2 for log w",
        ModelMapKind::PowerPlusLog { .. } => "a = (1 - n²)/2 for w^{-n} + log w",
        ModelMapKind::LogEnd { .. } => "a = (4π² + l²)/8π²",
        ModelMapKind::GeodesicPower { .. } => "a = (4π² - (α ± il)²)/8π²",
    }
}

fn exponent(report: &mut Report, path: &Path, at: &[String], options: &Options) -> Result<(), Failure> {
    let tol = &options.tolerance;
    let end = schema::parse_graft_spec(&read(path)?)?;
    let points = at
        .iter()
        .enumerate()
        .map(|(i, s)| {
            // Bare words such as `inf` are read as JSON strings.
            let value = serde_json::from_str(s).unwrap_or_else(|_| serde_json::Value::String(s.clone()));
            serde_json::from_value::<SpherePoint>(value).map_err(|e| at_point(i, e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    push_signs(report, &end);
    let kind = model_map_for_end(end.spec(), tol);
    report.push("model_map", kind, None);
    let closed = closed_form_schwarzian(&kind)?;
    report.push("leading_coefficient", closed.leading, Some(leading_formula(&kind)));
    report.push("subleading_order", closed.subleading_order, None);
    report.push(
        "schwarzian_pole_order",
        closed.pole_order,
        Some("order of the pole of a w⁻² + …"),
    );
    report.check(
        "pole_orders_agree",
        closed.pole_order == pole_order(end.spec(), tol),
        Some("grafting side vs Schwarzian side"),
    );
    let r = exponent_from_leading(closed.leading, end.resolved_sign()).r;
    report.push("exponent", r, Some("r = ±2πi√(1 - 2a), principal root"));
    let g = grafting_exponent(&end);
    report.push("grafting_exponent", g, Some(exponent_formula(&end)));
    let residual = (r - g).norm().min((r + g).norm());
    report.push("exponent_residual", residual, None);
    report.check(
        "exponents_agree",
        residual <= tol.knife_edge.max(1e-10),
        Some("up to sign"),
    );

    let numeric = numeric_schwarzian(&kind.local_branch(SAMPLE), SAMPLE, None)?;
    let exact = closed_form_schwarzian_at(&kind, SAMPLE);
    let error = if exact.norm() == 0.0 {
        numeric.norm()
    } else {
        (numeric - exact).norm() / exact.norm()
    };
    report.push("sample_point", SAMPLE, None);
    report.push(
        "schwarzian_numeric",
        numeric,
        Some("(f''/f')' - ½(f''/f')² by contour differences"),
    );
    report.push("schwarzian_closed_form", exact, None);
    report.push(
        "schwarzian_error",
        error,
        Some("relative, absolute where the Schwarzian vanishes"),
    );
    report.check("schwarzian_agrees", error < 1e-6, None);

    let loop_map = continue_along_loop(&kind, SAMPLE, 4 * MIN_LOOP_STEPS)?;
    let expected = kind.expected_monodromy();
    report.push("loop_monodromy", loop_map, Some("continuation once around |w| = |w₀|"));
    report.push(
        "expected_monodromy",
        expected,
        Some("z ↦ e^{2πiθ}z for w^θ, z ↦ z + 2πi for w^{-n} + log w"),
    );
    let distance = loop_map.distance(&expected);
    report.push("monodromy_residual", distance, None);
    report.check("monodromy_agrees", distance < 1e-8, None);

    if !points.is_empty() {
        let values = points
            .iter()
            .enumerate()
            .map(|(i, w)| eval_model(&kind, w, options.strict_branch).map_err(|e| at_point(i, e)))
            .collect::<Result<Vec<_>, _>>()?;
        report.push("evaluated_at", points, None);
        report.push(
            "model_values",
            values,
            Some("principal branch, cut along the negative reals"),
        );
    }
    Ok(())
}

fn at_point(i: usize, e: impl std::fmt::Display) -> Failure {
    Failure::Schema(SchemaError {
        pointer: format!("/at/{i}"),
        message: e.to_string(),
    })
}

fn surface(report: &mut Report, path: &Path) -> Result<(), Failure> {
    let sig = schema::parse_signature(&read(path)?)?;
    let chi = chi(&sig)?;
    let count = dt_parameter_count(&sig)?;
    report.push("signature", &sig, None);
    report.push("chi", chi, Some("χ = 6g - 6 + Σ(n_i + 1) + 3m"));
    report.push(
        "boundary_marked_points",
        sig.boundary_marked_points(),
        Some("Σ(n_i - 2)"),
    );
    report.push("geodesic_ends", sig.geodesic_ends(), Some("m - p"));
    report.push(
        "dehn_thurston",
        &count,
        Some("2t + (m - p + k) + p + Σ(n_i - 2), t = 3g - 3 + m + k"),
    );
    report.check("count_equals_chi", count.total == chi, None);
    Ok(())
}

fn classify_rep(report: &mut Report, path: &Path, options: &Options) -> Result<(), Failure> {
    let tol = &options.tolerance;
    let rep = schema::parse_rep(&read(path)?)?;
    let classes: Vec<_> = (0..rep.peripheral_words().len())
        .map(|j| classify(&rep.peripheral(j), tol))
        .collect();
    report.push("peripheral_classes", classes, None);
    report.push("trivial", is_trivial(&rep, tol), None);
    report.push(
        "order_two",
        image_has_order_two(&rep, tol),
        Some("image {1, σ} with σ² = 1"),
    );
    report.push(
        "degenerate",
        rep_is_degenerate_unframed(&rep, tol),
        Some("global fixed point or invariant pair, fixed by every puncture peripheral"),
    );
    let verdict = classify_phi_image(&rep, tol);
    report.push("clause", verdict.clause, None);
    report.push("in_image", verdict.in_image, Some("some framing is non-degenerate"));
    let opts = SearchOptions {
        seed: options.seed,
        ..SearchOptions::default()
    };
    let found = nondegenerate_framing_search(&rep, &opts, tol);
    report.push("search", opts, None);
    report.push("witness_framing", found.as_ref().map(|fr| fr.framing().to_vec()), None);
    report.check("search_agrees", found.is_some() == verdict.in_image, None);
    Ok(())
}

fn check_framing(report: &mut Report, path: &Path, options: &Options) -> Result<(), Failure> {
    let tol = &options.tolerance;
    let fr = schema::parse_framed(&read(path)?, tol)?;
    let verdict = is_degenerate(&fr, tol)?;
    report.push("framing", fr.framing(), None);
    report.push(
        "signing",
        fr.signing(),
        Some("+ at the fixed point with multiplier e^{-r/2}"),
    );
    report.push(
        "degenerate",
        verdict.degenerate,
        Some("every flip has orbit image of at most two points, or adjacent boundary values coincide"),
    );
    report.push("witness", verdict.witness, None);
    Ok(())
}

fn fg_coords(report: &mut Report, path: &Path, options: &Options) -> Result<(), Failure> {
    let tol = &options.tolerance;
    let (fr, tri) = schema::parse_triangulation(&read(path)?, tol)?;
    let edges = tri.edge_coordinates(&fr, tol)?;
    report.push(
        "edges",
        &edges,
        Some("(a - b)(c - d)/((b - c)(d - a)) on the quadrilateral a b c d"),
    );
    report.push(
        "well_defined",
        triangulation_well_defined(&fr, &tri, tol)?,
        Some("every coordinate finite and nonzero"),
    );
    Ok(())
}
