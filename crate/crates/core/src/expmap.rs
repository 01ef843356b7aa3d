//! Exponential maps `σ: A → A[x]` given by generator images.
//!
//! An exponential map is a ring homomorphism with
//! * (E1) `σ(a)|_{x=0} = a`, and
//! * (E2) `Σ σ(a_i) y^i = Σ a_i (x + y)^i` in `A[x, y]`, where `σ(a) = Σ a_i x^i`.
//!
//! The coefficient family `δ_i(a) = a_i` is the associated locally finite
//! iterative higher derivation; it is recovered per element from
//! [`SigmaImage`] coefficients rather than stored.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{parse_sigma_image, substitute_x_plus_y, BiPoly, MPoly, PolyError, PolyRing, SigmaImage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpMapError {
    #[error("expected {expected} generator images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("generator image belongs to a different ring")]
    RingMismatch,
    #[error("the zero element has no σ-degree")]
    ZeroElement,
    #[error("element is σ-invariant")]
    InvariantElement,
    #[error("not a slice: lc_σ(s) = {0} is not 1")]
    NotASlice(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("lc_σ({element}) = {lc} is not invariant; the map is not exponential")]
    LeadingCoefficientNotInvariant { element: String, lc: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `σ` on `K[v_1, ..., v_r]`, one image per variable, extended as the
/// unique ring homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpMap {
    ring: PolyRing,
    images: Vec<SigmaImage>,
}

/// Why checking (E2) on generators is enough.
pub const GENERATOR_JUSTIFICATION: &str = "both sides of (E2) are ring homomorphisms A -> A[x,y] in the element \
(a -> sigma_y(sigma(a)) and a -> sigma(a)(x+y)), so agreement on generators implies agreement on A";

impl ExpMap {
    pub fn new(ring: &PolyRing, images: Vec<SigmaImage>) -> Result<Self, ExpMapError> {
        if images.len() != ring.nvars() {
            return Err(ExpMapError::WrongImageCount {
                expected: ring.nvars(),
                got: images.len(),
            });
        }
        if images.iter().any(|img| img.ring() != ring) {
            return Err(ExpMapError::RingMismatch);
        }
        Ok(ExpMap {
            ring: ring.clone(),
            images,
        })
    }

    /// Parses one image expression (in the ring variables and `x`) per variable.
    pub fn from_strs<S: AsRef<str>>(ring: &PolyRing, images: &[S]) -> Result<Self, ExpMapError> {
        let imgs = images
            .iter()
            .map(|s| parse_sigma_image(s.as_ref(), ring))
            .collect::<Result<Vec<_>, _>>()?;
        ExpMap::new(ring, imgs)
    }

    pub fn identity(ring: &PolyRing) -> Self {
        let images = (0..ring.nvars())
            .map(|i| SigmaImage::constant(MPoly::var(ring, i)))
            .collect();
        ExpMap {
            ring: ring.clone(),
            images,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn images(&self) -> &[SigmaImage] {
        &self.images
    }

    /// `σ(f)`, by substituting generator images into `f`.
    pub fn apply(&self, f: &MPoly) -> SigmaImage {
        assert!(f.ring() == &self.ring, "ring mismatch");
        let mut powers: HashMap<(usize, u32), SigmaImage> = HashMap::new();
        let mut acc = SigmaImage::constant(MPoly::zero(&self.ring));
        for (m, c) in f.terms() {
            let mut t = SigmaImage::constant(MPoly::constant(&self.ring, c.clone()));
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((j, e))
                    .or_insert_with(|| self.images[j].pow(e));
                t = t.mul(p);
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn is_invariant(&self, f: &MPoly) -> bool {
        self.apply(f).degree() == 0
    }

    /// `deg_σ(f)`; zero for invariants (including zero itself).
    pub fn deg_sigma(&self, f: &MPoly) -> usize {
        self.apply(f).degree()
    }

    pub fn profile(&self, f: &MPoly) -> Result<SigmaProfile, ExpMapError> {
        if f.is_zero() {
            return Err(ExpMapError::ZeroElement);
        }
        let image = self.apply(f);
        let lc = image.leading().clone();
        if !self.is_invariant(&lc) {
            return Err(ExpMapError::LeadingCoefficientNotInvariant {
                element: f.to_string(),
                lc: lc.to_string(),
            });
        }
        Ok(SigmaProfile {
            element: f.clone(),
            deg_sigma: image.degree(),
            lc_sigma: lc,
            image,
        })
    }

    /// True iff some generator is moved, i.e. `A^σ ≠ A`.
    pub fn is_nontrivial(&self) -> bool {
        self.images.iter().any(|img| img.degree() >= 1)
    }

    /// `Σ σ(a_i) y^i`, the left side of (E2) for `σ(f) = Σ a_i x^i`.
    pub fn iterated_image(&self, f: &MPoly) -> BiPoly {
        let img = self.apply(f);
        let mut out = BiPoly::zero(&self.ring);
        for (i, a) in img.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in self.apply(a).coeffs().iter().enumerate() {
                out.add_term(k as u32, i as u32, b);
            }
        }
        out
    }

    /// Right side minus left side of (E2) for `f`; zero iff (E2) holds at `f`.
    pub fn e2_discrepancy(&self, f: &MPoly) -> BiPoly {
        substitute_x_plus_y(&self.apply(f)).sub(&self.iterated_image(f))
    }

    pub fn e1_holds(&self, f: &MPoly) -> bool {
        self.apply(f).coeff(0) == *f
    }

    pub fn validate(&self) -> ValidationReport {
        let generators = self
            .ring
            .vars()
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let v = MPoly::var(&self.ring, j);
                let discrepancy = self.e2_discrepancy(&v);
                GeneratorCheck {
                    var: name.clone(),
                    e1: self.images[j].coeff(0) == v,
                    e2: discrepancy.is_zero(),
                    discrepancy,
                }
            })
            .collect::<Vec<_>>();
        ValidationReport {
            valid: generators.iter().all(|g| g.e1 && g.e2),
            generators,
            justification: GENERATOR_JUSTIFICATION,
        }
    }

    /// Executable form of the three-part lemma on the coefficients
    /// `a_0, ..., a_m` of `σ(f)`.
    pub fn check_lemma_iterative(&self, f: &MPoly) -> Result<LemmaReport, ExpMapError> {
        let img = self.apply(f);
        let m = img.degree();
        if m == 0 {
            return Err(ExpMapError::InvariantElement);
        }
        let coeffs = img.coeffs();

        // (i) deg_σ(a_i) <= m - i
        let degree_bound = coeffs
            .iter()
            .enumerate()
            .all(|(i, a)| a.is_zero() || self.deg_sigma(a) <= m - i);

        // (ii) char p, m = l p^e with p ∤ l: deg_σ(a_{(l-1)p^e}) = p^e
        let p = self.ring.field().characteristic() as usize;
        let char_p_degree = if p > 0 {
            let (l, pe) = split_prime_power(m, p);
            let idx = (l - 1) * pe;
            Some(self.deg_sigma(&coeffs[idx]) == pe)
        } else {
            None
        };

        // (iii) invariant a_i (i >= 1) make g = σ(f) - f additive
        let additivity = if coeffs[1..].iter().all(|a| self.is_invariant(a)) {
            let mut g = coeffs.to_vec();
            g[0] = MPoly::zero(&self.ring);
            Some(is_additive(&SigmaImage::new(&self.ring, g)))
        } else {
            None
        };

        Ok(LemmaReport {
            degree: m,
            degree_bound,
            char_p_degree,
            additivity,
        })
    }

    /// For a slice `s` (lc 1): `deg_σ(s)` must be 1 or a power of the
    /// characteristic.
    pub fn check_slice_degree_form(&self, s: &MPoly) -> Result<SliceDegreeReport, ExpMapError> {
        let prof = self.profile(s)?;
        if prof.deg_sigma == 0 {
            return Err(ExpMapError::InvariantElement);
        }
        if !prof.lc_sigma.is_one() {
            return Err(ExpMapError::NotASlice(prof.lc_sigma.to_string()));
        }
        let n = prof.deg_sigma;
        let p = self.ring.field().characteristic();
        let form = if n == 1 {
            DegreeForm::One
        } else if p > 0 {
            let (l, pe) = split_prime_power(n, p as usize);
            if l == 1 {
                DegreeForm::PrimePower {
                    p,
                    d: log_base(pe, p as usize),
                }
            } else {
                DegreeForm::Violation
            }
        } else {
            DegreeForm::Violation
        };
        Ok(SliceDegreeReport {
            degree: n,
            characteristic: p,
            form,
        })
    }
}

fn log_base(mut n: usize, p: usize) -> u32 {
    let mut d = 0;
    while n > 1 {
        n /= p;
        d += 1;
    }
    d
}

/// Writes `m = l * p^e` with `p ∤ l`; returns `(l, p^e)`.
fn split_prime_power(mut m: usize, p: usize) -> (usize, usize) {
    let mut pe = 1;
    while m % p == 0 {
        m /= p;
        pe *= p;
    }
    (m, pe)
}

/// `g(x + y) = g(x) + g(y)` in `A[x, y]`.
pub fn is_additive(g: &SigmaImage) -> bool {
    let lhs = substitute_x_plus_y(g);
    let rhs = BiPoly::from_image_in(g, false).add(&BiPoly::from_image_in(g, true));
    lhs == rhs
}

/// `gcd(C(n, 1), ..., C(n, n-1))`: `p` when `n = p^d`, otherwise 1.
pub fn d_of_n(n: u64) -> Result<BigUint, ExpMapError> {
    if n < 2 {
        return Err(ExpMapError::BadArgument(format!("d(n) needs n >= 2, got {n}")));
    }
    let mut g = BigUint::zero();
    let mut c = BigUint::one();
    for i in 1..n {
        c = c * BigUint::from(n - i + 1) / BigUint::from(i);
        g = g.gcd(&c);
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaProfile {
    pub element: MPoly,
    pub image: SigmaImage,
    pub deg_sigma: usize,
    pub lc_sigma: MPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub var: String,
    pub e1: bool,
    pub e2: bool,
    /// `Σ a_i (x+y)^i - Σ σ(a_i) y^i`.
    pub discrepancy: BiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub generators: Vec<GeneratorCheck>,
    pub justification: &'static str,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pf = |b: bool| if b { "PASS" } else { "FAIL" };
        for g in &self.generators {
            write!(f, "generator {}: E1 {}, E2 {}", g.var, pf(g.e1), pf(g.e2))?;
            if !g.e2 {
                write!(f, " (discrepancy {})", g.discrepancy)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "note: {}", self.justification)?;
        match self.generators.iter().find(|g| !(g.e1 && g.e2)) {
            None => write!(f, "VALID"),
            Some(g) => {
                let which = if g.e1 { "E2" } else { "E1" };
                write!(f, "INVALID: {which} fails at generator {}", g.var)
            }
        }
    }
}

/// Outcomes of the three checks; `None` means the hypotheses of that part
/// do not apply to the element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub degree: usize,
    pub degree_bound: bool,
    pub char_p_degree: Option<bool>,
    pub additivity: Option<bool>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.degree_bound && self.char_p_degree != Some(false) && self.additivity != Some(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeForm {
    One,
    PrimePower { p: u64, d: u32 },
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceDegreeReport {
    pub degree: usize,
    pub characteristic: u64,
    pub form: DegreeForm,
}

impl SliceDegreeReport {
    pub fn ok(&self) -> bool {
        self.form != DegreeForm::Violation
    }
}
