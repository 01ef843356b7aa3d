use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_expmap")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const HEADER_UV: &str = "ring: Q[u, v]\nsigma(u) = u\nsigma(v) = v + u*x\n";

#[test]
fn validate_accepts_and_rejects() {
    let (code, out, _) = run(&["validate", &fixture("uv.toml")]);
    assert_eq!(code, 0);
    assert!(out.starts_with(HEADER_UV));
    assert!(out.ends_with("generator v: E1 PASS, E2 PASS\nnote: both sides of (E2) are ring homomorphisms A -> A[x,y] in the element (a -> sigma_y(sigma(a)) and a -> sigma(a)(x+y)), so agreement on generators implies agreement on A\nVALID\n"));

    let (code, out, _) = run(&["validate", &fixture("uv_bad.toml")]);
    assert_eq!(code, 1);
    assert!(out.contains("generator v: E1 PASS, E2 FAIL (discrepancy 2*x*y)\n"));
    assert!(out.ends_with("INVALID: E2 fails at generator v\n"));
}

#[test]
fn invariants_golden() {
    let (code, out, _) = run(&["invariants", &fixture("uv.toml"), "--maxdeg", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, format!("{HEADER_UV}invariants (window 2, dimension 3):\n1\nu\nu^2\n"));
}

#[test]
fn slices_golden() {
    let (code, out, _) = run(&["slices", &fixture("uv.toml"), "--maxdeg", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        format!(
            "{HEADER_UV}m_star: 1 (window-minimal, window 2)\nslice: v  lc: u\nslice: u*v  lc: u^2\n\
             plinth sample: u, u^2\nminimal slice: v  lc: u\n"
        )
    );
    let (code, out, _) = run(&["slices", &fixture("two_slices.toml")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("minimal slice: INCONCLUSIVE\ndivides[w]: 1 0\ndivides[u]: 0 1\n"));

    let (code, out, _) = run(&["slices", &fixture("identity.toml")]);
    assert_eq!(code, 1);
    assert!(out.ends_with("TRIVIAL MAP\n"));
}

#[test]
fn decompose_golden() {
    let (code, out, _) = run(&["decompose", &fixture("uv.toml"), "--element", "v^2 + u"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        format!(
            "{HEADER_UV}element: v^2 + u\nslice: v  lc: u  deg_sigma: 1\nmethod: localized\n\
             denom_exponent: 0\ncoeff[0]: u\ncoeff[2]: 1\nround-trip: PASS\n"
        )
    );
    let (code, out, _) = run(&["decompose", &fixture("translation.toml"), "--element", "v^3"]);
    assert_eq!(code, 0);
    assert!(out.contains("method: slice\ndenom_exponent: 0\ncoeff[3]: 1\nround-trip: PASS\n"));

    let (code, out, _) = run(&["decompose", &fixture("uv_scaled_slice.toml"), "--element", "v"]);
    assert_eq!(code, 1);
    assert!(out.ends_with("HypothesisViolation: coefficient 1 is not divisible by factor p_2 = u\n"));
}

#[test]
fn verify_golden() {
    let (code, out, _) = run(&["verify", &fixture("uv.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("factor p_1 = u: residue PASS, domain PASS, slice mod p PASS\nHYPOTHESES: PASS\n"));
    assert!(out.ends_with("INDEPENDENCE: 20/20 PASS\nMONOMIALS: 15/15 PASS\nVERIFIED\n"));

    let (code, out, _) = run(&["verify", &fixture("uv_square_factor.toml")]);
    assert_eq!(code, 1);
    assert!(out.ends_with("HYPOTHESES: FAIL\nFactorizationMismatch: factors multiply to u^2, not lc_σ(s) = u\n"));

    let (code, out, _) = run(&["verify", &fixture("uv_scaled_slice.toml")]);
    assert_eq!(code, 1);
    assert!(out.ends_with("FAILED: hypothesis on factor p_1 = u\n"));

    let (code, out, _) = run(&["verify", &fixture("frobenius_f2.toml")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("MONOMIALS: 4/4 PASS\nVERIFIED\n"));
}

#[test]
fn input_errors_exit_2() {
    let (code, out, err) = run(&["validate", &fixture("malformed.toml")]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert_eq!(err, "INPUT ERROR: in sigma.v: syntax error at position 4: unexpected token `*`\n");

    let (code, _, err) = run(&["verify", &fixture("uv_nolc.toml")]);
    assert_eq!(code, 2);
    assert!(err.contains("factors are required"));

    let (code, _, _) = run(&["decompose", &fixture("uv.toml"), "--element", "v + q"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["invariants", &fixture("uv.toml"), "--maxdeg", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["validate", &fixture("missing.toml")]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}
