//! Instance files and the text reports behind the `expmap` binary.
//!
//! An instance is a small TOML document:
//!
//! ```text
//! field = "Q"               # or "Fp:<prime>"
//! vars = [ "u", "v" ]
//! sigma.u = "u"
//! sigma.v = "v + u*x"
//! slice = "v"               # optional
//! factors = [ "u" ]         # optional
//! window = 4                # optional, default 3
//! domain_assert = [ true ]  # optional, parallel to factors
//! ```
//!
//! Every command returns its full report and an exit code: 0 success,
//! 1 mathematical failure, 2 input error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::decompose::{self, DecomposeError};
use crate::expmap::ExpMap;
use crate::field::{FieldError, FieldSpec};
use crate::invariants::{self, DegreeWindow, InvariantsError, MinimalSlice, SliceRecord};
use crate::poly::{parse_poly, parse_sigma_image, MPoly, PolyError, PolyRing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_WINDOW: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("malformed instance file: {0}")]
    Format(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("in {context}: {source}")]
    Expr { context: String, source: PolyError },
    #[error("no sigma entry for variable `{0}`")]
    MissingSigma(String),
    #[error("sigma entry for undeclared variable `{0}`")]
    UnknownSigma(String),
    #[error("window must be a positive integer")]
    BadWindow,
    #[error("domain_assert has {got} entries but there are {factors} factors")]
    DomainAssertLength { got: usize, factors: usize },
    #[error("instance has no slice")]
    MissingSlice,
    #[error("lc_σ(s) = {0} is not a unit, so factors are required")]
    MissingFactors(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    field: String,
    vars: Vec<String>,
    sigma: BTreeMap<String, String>,
    slice: Option<String>,
    factors: Option<Vec<String>>,
    window: Option<i64>,
    domain_assert: Option<Vec<bool>>,
}

/// A parsed instance file.
#[derive(Debug, Clone)]
pub struct Instance {
    pub field: FieldSpec,
    pub ring: PolyRing,
    pub map: ExpMap,
    pub slice: Option<MPoly>,
    pub factors: Vec<MPoly>,
    pub window: DegreeWindow,
    pub domain_assertions: Vec<bool>,
}

fn expr_err(context: impl Into<String>) -> impl FnOnce(PolyError) -> InstanceError {
    let context = context.into();
    move |source| InstanceError::Expr { context, source }
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance = toml::from_str(text).map_err(|e| InstanceError::Format(e.message().to_string()))?;
        let field: FieldSpec = raw.field.parse()?;
        let ring = PolyRing::new(field, &raw.vars).map_err(expr_err("vars"))?;
        if let Some(extra) = raw.sigma.keys().find(|k| ring.var_index(k).is_none()) {
            return Err(InstanceError::UnknownSigma(extra.clone()));
        }
        let images = ring
            .vars()
            .iter()
            .map(|v| {
                let text = raw.sigma.get(v).ok_or_else(|| InstanceError::MissingSigma(v.clone()))?;
                parse_sigma_image(text, &ring).map_err(expr_err(format!("sigma.{v}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let map = ExpMap::new(&ring, images).expect("one image per variable");
        let slice = raw
            .slice
            .as_deref()
            .map(|s| parse_poly(s, &ring).map_err(expr_err("slice")))
            .transpose()?;
        let factors = raw
            .factors
            .unwrap_or_default()
            .iter()
            .enumerate()
            .map(|(i, s)| parse_poly(s, &ring).map_err(expr_err(format!("factors[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let window = match raw.window {
            None => DegreeWindow::new(DEFAULT_WINDOW).expect("positive default"),
            Some(w) => u32::try_from(w)
                .ok()
                .and_then(|w| DegreeWindow::new(w).ok())
                .ok_or(InstanceError::BadWindow)?,
        };
        let domain_assertions = raw.domain_assert.unwrap_or_default();
        if !domain_assertions.is_empty() && domain_assertions.len() != factors.len() {
            return Err(InstanceError::DomainAssertLength {
                got: domain_assertions.len(),
                factors: factors.len(),
            });
        }
        Ok(Instance {
            field,
            ring,
            map,
            slice,
            factors,
            window,
            domain_assertions,
        })
    }

    fn window_or(&self, maxdeg: Option<u32>) -> Result<DegreeWindow, InstanceError> {
        match maxdeg {
            None => Ok(self.window),
            Some(d) => DegreeWindow::new(d).map_err(|_| InstanceError::BadWindow),
        }
    }
}

/// Report text and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub text: String,
}

impl CommandOutput {
    fn new(code: i32, text: String) -> Self {
        CommandOutput { code, text }
    }

    pub fn input_error(msg: impl std::fmt::Display) -> Self {
        CommandOutput::new(EXIT_INPUT, format!("INPUT ERROR: {msg}\n"))
    }
}

fn header(inst: &Instance, out: &mut String) {
    writeln!(out, "ring: {}", inst.ring).unwrap();
    for (v, img) in inst.ring.vars().iter().zip(inst.map.images()) {
        writeln!(out, "sigma({v}) = {img}").unwrap();
    }
}

/// Validates the map; on failure returns the finished (failing) report.
fn require_valid(inst: &Instance, out: &mut String) -> Result<(), CommandOutput> {
    let rep = inst.map.validate();
    if rep.valid {
        return Ok(());
    }
    writeln!(out, "{rep}").unwrap();
    Err(CommandOutput::new(EXIT_FAILURE, std::mem::take(out)))
}

pub fn cmd_validate(inst: &Instance) -> CommandOutput {
    let mut out = String::new();
    header(inst, &mut out);
    let rep = inst.map.validate();
    writeln!(out, "{rep}").unwrap();
    CommandOutput::new(if rep.valid { EXIT_OK } else { EXIT_FAILURE }, out)
}

pub fn cmd_invariants(inst: &Instance, maxdeg: Option<u32>) -> CommandOutput {
    let window = match inst.window_or(maxdeg) {
        Ok(w) => w,
        Err(e) => return CommandOutput::input_error(e),
    };
    let mut out = String::new();
    header(inst, &mut out);
    if let Err(fail) = require_valid(inst, &mut out) {
        return fail;
    }
    let basis = invariants::invariant_basis(&inst.map, window);
    writeln!(out, "invariants (window {window}, dimension {}):", basis.len()).unwrap();
    for b in basis {
        writeln!(out, "{b}").unwrap();
    }
    CommandOutput::new(EXIT_OK, out)
}

pub fn cmd_slices(inst: &Instance, maxdeg: Option<u32>) -> CommandOutput {
    let window = match inst.window_or(maxdeg) {
        Ok(w) => w,
        Err(e) => return CommandOutput::input_error(e),
    };
    let mut out = String::new();
    header(inst, &mut out);
    if let Err(fail) = require_valid(inst, &mut out) {
        return fail;
    }
    if !inst.map.is_nontrivial() {
        writeln!(out, "TRIVIAL MAP").unwrap();
        return CommandOutput::new(EXIT_FAILURE, out);
    }
    let found = match invariants::find_local_slices(&inst.map, window) {
        Ok(f) => f,
        Err(e) => {
            writeln!(out, "{e}").unwrap();
            return CommandOutput::new(EXIT_FAILURE, out);
        }
    };
    writeln!(out, "m_star: {} (window-minimal, window {window})", found.m_star).unwrap();
    for s in &found.slices {
        writeln!(out, "slice: {}  lc: {}", s.element, s.lc).unwrap();
    }
    let samples = invariants::plinth_sample(&inst.map, window).expect("slices exist");
    let joined: Vec<String> = samples.iter().map(|p| p.to_string()).collect();
    writeln!(out, "plinth sample: {}", joined.join(", ")).unwrap();
    match invariants::minimal_local_slice(&inst.map, window).expect("slices exist") {
        MinimalSlice::Found(s) => writeln!(out, "minimal slice: {}  lc: {}", s.element, s.lc).unwrap(),
        MinimalSlice::Inconclusive { samples, divides } => {
            writeln!(out, "minimal slice: INCONCLUSIVE").unwrap();
            for (a, row) in samples.iter().zip(&divides) {
                let cells: Vec<&str> = row.iter().map(|&d| if d { "1" } else { "0" }).collect();
                writeln!(out, "divides[{a}]: {}", cells.join(" ")).unwrap();
            }
        }
    }
    CommandOutput::new(EXIT_OK, out)
}

fn decompose_error_kind(e: &DecomposeError) -> &'static str {
    match e {
        DecomposeError::NotASlice(_) => "NotASlice",
        DecomposeError::DegreeNotDivisible { .. } => "DegreeNotDivisible",
        DecomposeError::ZeroLeadingCoefficient => "ZeroLeadingCoefficient",
        DecomposeError::ZeroElement => "ZeroElement",
        DecomposeError::InvariantSlice => "InvariantSlice",
        DecomposeError::FactorizationMismatch { .. } => "FactorizationMismatch",
        DecomposeError::NotInvariantFactor(_) => "NotInvariantFactor",
        DecomposeError::HypothesisViolation { .. } => "HypothesisViolation",
        DecomposeError::NonInvariantQuotient(_) => "NonInvariantQuotient",
        DecomposeError::ExpMap(_) => "ExpMapError",
        DecomposeError::Invariants(InvariantsError::NotInvariant(_)) => "NotInvariant",
        DecomposeError::Invariants(_) => "InvariantsError",
    }
}

fn fail_with(mut out: String, e: &DecomposeError, factors: &[MPoly]) -> CommandOutput {
    write!(out, "{}: {e}", decompose_error_kind(e)).unwrap();
    if let DecomposeError::HypothesisViolation { factor, .. } = e {
        if let Some(p) = factors.get(factor - 1) {
            write!(out, " = {p}").unwrap();
        }
    }
    writeln!(out).unwrap();
    CommandOutput::new(EXIT_FAILURE, out)
}

fn slice_record(inst: &Instance, out: &mut String) -> Result<SliceRecord, CommandOutput> {
    let s = inst
        .slice
        .as_ref()
        .ok_or_else(|| CommandOutput::input_error(InstanceError::MissingSlice))?;
    match SliceRecord::of(&inst.map, s) {
        Ok(r) => Ok(r),
        Err(e) => {
            writeln!(out, "slice {s} rejected: {e}").unwrap();
            Err(CommandOutput::new(EXIT_FAILURE, std::mem::take(out)))
        }
    }
}

pub fn cmd_decompose(inst: &Instance, element: &str) -> CommandOutput {
    let f = match parse_poly(element, &inst.ring) {
        Ok(f) => f,
        Err(e) => return CommandOutput::input_error(format!("in element: {e}")),
    };
    let mut out = String::new();
    header(inst, &mut out);
    if let Err(fail) = require_valid(inst, &mut out) {
        return fail;
    }
    let s_rec = match slice_record(inst, &mut out) {
        Ok(r) => r,
        Err(fail) => return fail,
    };
    writeln!(out, "element: {f}").unwrap();
    writeln!(out, "slice: {}  lc: {}  deg_sigma: {}", s_rec.element, s_rec.lc, s_rec.deg_sigma).unwrap();
    let result = if s_rec.lc.is_one() {
        writeln!(out, "method: slice").unwrap();
        decompose::decompose_with_slice(&inst.map, &s_rec.element, &f)
    } else {
        writeln!(out, "method: localized").unwrap();
        decompose::decompose_localized(&inst.map, &s_rec, &f).and_then(|dec| {
            if inst.factors.is_empty() && !s_rec.lc.is_unit() {
                Ok(dec)
            } else {
                decompose::reduce_denominator(&inst.map, &dec, &inst.factors)
            }
        })
    };
    let dec = match result {
        Ok(d) => d,
        Err(e) => return fail_with(out, &e, &inst.factors),
    };
    writeln!(out, "{dec}").unwrap();
    let ok = dec.round_trips(&f) && dec.coeffs_invariant(&inst.map);
    writeln!(out, "round-trip: {}", if ok { "PASS" } else { "FAIL" }).unwrap();
    CommandOutput::new(if ok { EXIT_OK } else { EXIT_FAILURE }, out)
}

pub fn cmd_verify(inst: &Instance, maxdeg: Option<u32>) -> CommandOutput {
    let window = match inst.window_or(maxdeg) {
        Ok(w) => w,
        Err(e) => return CommandOutput::input_error(e),
    };
    let mut out = String::new();
    header(inst, &mut out);
    if let Err(fail) = require_valid(inst, &mut out) {
        return fail;
    }
    let s_rec = match slice_record(inst, &mut out) {
        Ok(r) => r,
        Err(fail) => return fail,
    };
    if inst.factors.is_empty() && !s_rec.lc.is_unit() {
        return CommandOutput::input_error(InstanceError::MissingFactors(s_rec.lc.to_string()));
    }
    writeln!(out, "slice: {}  lc: {}  window: {window}", s_rec.element, s_rec.lc).unwrap();

    let pf = |b: bool| if b { "PASS" } else { "FAIL" };
    let mut first_failure: Option<String> = None;
    match decompose::check_theorem_main_hypotheses(&inst.map, &s_rec, &inst.factors, window, &inst.domain_assertions) {
        Err(e) => {
            writeln!(out, "HYPOTHESES: FAIL").unwrap();
            return fail_with(out, &e, &inst.factors);
        }
        Ok(rep) => {
            for (i, fc) in rep.factors.iter().enumerate() {
                writeln!(
                    out,
                    "factor p_{} = {}: residue {}, domain {}{}, slice mod p {}",
                    i + 1,
                    fc.factor,
                    pf(fc.residue_is_base_field),
                    pf(fc.domain),
                    if fc.domain_asserted { " (asserted)" } else { "" },
                    pf(fc.slice_not_invariant_mod_factor),
                )
                .unwrap();
                if !fc.pass() && first_failure.is_none() {
                    first_failure = Some(format!("hypothesis on factor p_{} = {}", i + 1, fc.factor));
                }
            }
            writeln!(out, "HYPOTHESES: {}", pf(rep.pass)).unwrap();
        }
    }

    let rep = match decompose::verify_polynomial_ring(&inst.map, &s_rec.element, &inst.factors, window) {
        Ok(r) => r,
        Err(e) => return fail_with(out, &e, &inst.factors),
    };
    for m in &rep.monomials {
        match &m.error {
            Some(e) => writeln!(out, "monomial {}: FAIL ({e})", m.monomial).unwrap(),
            None => writeln!(out, "monomial {}: {} (n={})", m.monomial, pf(m.pass()), m.exponent).unwrap(),
        }
        if !m.pass() && first_failure.is_none() {
            first_failure = Some(format!("monomial {}", m.monomial));
        }
    }
    writeln!(
        out,
        "INDEPENDENCE: {}/{} {}",
        rep.independence_trials - rep.independence_failures,
        rep.independence_trials,
        pf(rep.independence_failures == 0)
    )
    .unwrap();
    if rep.independence_failures > 0 && first_failure.is_none() {
        first_failure = Some("independence trial".to_string());
    }
    writeln!(
        out,
        "MONOMIALS: {}/{} {}",
        rep.passed_monomials(),
        rep.monomials.len(),
        pf(rep.passed_monomials() == rep.monomials.len())
    )
    .unwrap();
    match first_failure {
        None => {
            writeln!(out, "VERIFIED").unwrap();
            CommandOutput::new(EXIT_OK, out)
        }
        Some(what) => {
            writeln!(out, "FAILED: {what}").unwrap();
            CommandOutput::new(EXIT_FAILURE, out)
        }
    }
}

/// Dispatch target for the binary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    Invariants,
    Slices,
    Decompose { element: String },
    Verify,
}

pub fn run(command: &Command, instance_text: &str, maxdeg: Option<u32>) -> CommandOutput {
    let inst = match Instance::parse(instance_text) {
        Ok(i) => i,
        Err(e) => return CommandOutput::input_error(e),
    };
    match command {
        Command::Validate => cmd_validate(&inst),
        Command::Invariants => cmd_invariants(&inst, maxdeg),
        Command::Slices => cmd_slices(&inst, maxdeg),
        Command::Decompose { element } => cmd_decompose(&inst, element),
        Command::Verify => cmd_verify(&inst, maxdeg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UV: &str = r#"
field = "Q"
vars = [ "u", "v" ]
sigma.u = "u"
sigma.v = "v + u*x"
slice = "v"            # optional
factors = [ "u" ]      # optional
window = 4             # optional, default 3
domain_assert = [ true ]  # optional, parallel to factors
"#;

    #[test]
    fn parses_full_instance() {
        let inst = Instance::parse(UV).unwrap();
        assert_eq!(inst.field, FieldSpec::Rationals);
        assert_eq!(inst.window.max_degree(), 4);
        assert_eq!(inst.factors.len(), 1);
        assert_eq!(inst.slice.unwrap().to_string(), "v");
    }

    #[test]
    fn input_errors() {
        let cases = [
            "field = \"Q\"\nvars = [\"u\"]\n",
            "field = \"Fp:4\"\nvars = [\"u\"]\nsigma.u = \"u\"\n",
            "field = \"Q\"\nvars = [\"x\"]\nsigma.x = \"x\"\n",
            "field = \"Q\"\nvars = [\"u\"]\nsigma.u = \"u\"\nsigma.w = \"w\"\n",
            "field = \"Q\"\nvars = [\"u\"]\nsigma.u = \"u + y\"\n",
            "field = \"Q\"\nvars = [\"u\"]\nsigma.u = \"u\"\nwindow = 0\n",
            "field = \"Q\"\nvars = [\"u\"]\nsigma.u = \"u\"\nbogus = 1\n",
            "field = \"Q\"\nvars = [\"u\"]\nsigma.u = \"u\"\nfactors = [\"u\"]\ndomain_assert = [true, false]\n",
            "field = Q\n",
        ];
        for c in cases {
            let out = run(&Command::Validate, c, None);
            assert_eq!(out.code, EXIT_INPUT, "{c}\n{}", out.text);
        }
    }

    #[test]
    fn maxdeg_zero_is_input_error() {
        assert_eq!(run(&Command::Invariants, UV, Some(0)).code, EXIT_INPUT);
    }
}
