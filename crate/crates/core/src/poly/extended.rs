//! The extended rings `A[x]` and `A[x, y]` with coefficients in `A`.

use std::collections::BTreeMap;
use std::fmt;

use super::{MPoly, Monomial, PolyRing};
use crate::field::FieldElem;

/// A polynomial `a_0 + a_1 x + ... + a_m x^m` in `A[x]`, the value of an
/// exponential map on one element. The trailing coefficient is nonzero
/// whenever `m >= 1`; the zero image is stored as `[0]`.
#[derive(Clone, PartialEq, Eq)]
pub struct SigmaImage {
    ring: PolyRing,
    coeffs: Vec<MPoly>,
}

impl SigmaImage {
    pub fn new(ring: &PolyRing, mut coeffs: Vec<MPoly>) -> Self {
        for c in &coeffs {
            assert!(c.ring() == ring, "ring mismatch");
        }
        while coeffs.len() > 1 && coeffs.last().map_or(false, MPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(MPoly::zero(ring));
        }
        SigmaImage {
            ring: ring.clone(),
            coeffs,
        }
    }

    /// The image `[f]` of an invariant element.
    pub fn constant(f: MPoly) -> Self {
        let ring = f.ring().clone();
        SigmaImage::new(&ring, vec![f])
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &MPoly {
        self.coeffs.last().expect("at least one coefficient")
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> MPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| MPoly::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn add(&self, other: &SigmaImage) -> SigmaImage {
        let n = self.coeffs.len().max(other.coeffs.len());
        SigmaImage::new(&self.ring, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &SigmaImage) -> SigmaImage {
        let n = self.coeffs.len().max(other.coeffs.len());
        SigmaImage::new(&self.ring, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &SigmaImage) -> SigmaImage {
        if self.is_zero() || other.is_zero() {
            return SigmaImage::constant(MPoly::zero(&self.ring));
        }
        let mut out = vec![MPoly::zero(&self.ring); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        SigmaImage::new(&self.ring, out)
    }

    pub fn scale(&self, c: &MPoly) -> SigmaImage {
        SigmaImage::new(&self.ring, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> SigmaImage {
        let mut acc = SigmaImage::constant(MPoly::one(&self.ring));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Flattens into the ring `A` extended by the variable `x`.
    pub fn to_flat(&self) -> MPoly {
        let flat = self.ring.extended(&["x"]);
        let xi = flat.nvars() - 1;
        let mut acc = MPoly::zero(&flat);
        for (i, a) in self.coeffs.iter().enumerate() {
            let xm = {
                let mut e = vec![0; flat.nvars()];
                e[xi] = i as u32;
                Monomial(e)
            };
            acc = &acc + &a.embed(&flat).mul_term(&xm, &flat.field().one());
        }
        acc
    }

    /// Inverse of [`SigmaImage::to_flat`]: splits a polynomial over
    /// `A` extended by `x` by powers of `x`.
    pub(crate) fn from_flat(ring: &PolyRing, flat: &MPoly) -> SigmaImage {
        let r = ring.nvars();
        let mut by_power: BTreeMap<usize, Vec<(Monomial, FieldElem)>> = BTreeMap::new();
        for (m, c) in flat.terms() {
            let e = m.exponents();
            by_power
                .entry(e[r] as usize)
                .or_default()
                .push((Monomial(e[..r].to_vec()), c.clone()));
        }
        let top = by_power.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![MPoly::zero(ring); top + 1];
        for (i, terms) in by_power {
            coeffs[i] = MPoly::from_terms(ring, terms);
        }
        SigmaImage::new(ring, coeffs)
    }
}

impl fmt::Display for SigmaImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && !(i == 0 && self.coeffs.len() == 1) {
                continue;
            }
            let xpow = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let body = if i == 0 {
                a.to_string()
            } else if a.is_one() {
                xpow
            } else if (-a).is_one() {
                format!("-{xpow}")
            } else if a.num_terms() == 1 {
                format!("{a}*{xpow}")
            } else {
                format!("({a})*{xpow}")
            };
            if first {
                write!(f, "{body}")?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SigmaImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

/// An element of `A[x, y]`, keyed by `(deg_x, deg_y)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    ring: PolyRing,
    terms: BTreeMap<(u32, u32), MPoly>,
}

impl BiPoly {
    pub fn zero(ring: &PolyRing) -> Self {
        BiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &MPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> MPoly {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| MPoly::zero(&self.ring))
    }

    /// Adds `c * x^i * y^j`.
    pub fn add_term(&mut self, i: u32, j: u32, c: &MPoly) {
        if c.is_zero() {
            return;
        }
        let s = &self.coeff(i, j) + c;
        if s.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), s);
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, &-c);
        }
        out
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c);
        }
        out
    }

    /// Embeds `g(x)` (as `y = 0`) or `g(y)` (as `x = 0`).
    pub fn from_image_in(img: &SigmaImage, in_y: bool) -> BiPoly {
        let mut out = BiPoly::zero(img.ring());
        for (k, a) in img.coeffs().iter().enumerate() {
            let (i, j) = if in_y { (0, k as u32) } else { (k as u32, 0) };
            out.add_term(i, j, a);
        }
        out
    }

    /// Flattens into the ring `A` extended by `x, y`.
    pub fn to_flat(&self) -> MPoly {
        let flat = self.ring.extended(&["x", "y"]);
        let n = flat.nvars();
        let mut acc = MPoly::zero(&flat);
        for (&(i, j), c) in &self.terms {
            let mut e = vec![0; n];
            e[n - 2] = i;
            e[n - 1] = j;
            acc = &acc + &c.embed(&flat).mul_term(&Monomial(e), &flat.field().one());
        }
        acc
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_flat())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

/// Row `n` of Pascal's triangle reduced into the field.
fn binomial_row(ring: &PolyRing, n: usize) -> Vec<FieldElem> {
    let field = ring.field();
    let mut row = vec![field.one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(field.one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(field.one());
        row = next;
    }
    row
}

/// `sum_i a_i (x + y)^i` expanded in `A[x, y]`.
pub fn substitute_x_plus_y(img: &SigmaImage) -> BiPoly {
    let mut out = BiPoly::zero(img.ring());
    for (i, a) in img.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, c) in binomial_row(img.ring(), i).iter().enumerate() {
            if !c.is_zero() {
                out.add_term(k as u32, (i - k) as u32, &a.scale(c));
            }
        }
    }
    out
}
