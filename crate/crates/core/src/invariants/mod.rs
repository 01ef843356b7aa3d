//! Exact linear algebra on bounded-degree windows of `A`: invariant
//! subspaces, local-slice search, plinth-ideal sampling and the residue
//! checks used by the decomposition hypotheses.
//!
//! Everything here is relative to a [`DegreeWindow`]: the `K`-span of the
//! monomials of total degree `<= D`. Results are window-minimal, never
//! claimed globally minimal.

pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::expmap::{ExpMap, ExpMapError};
use crate::field::{FieldElem, FieldSpec};
use crate::poly::{MPoly, Monomial, PolyRing, SigmaImage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("window degree must be at least 1")]
    BadWindow,
    #[error("no non-invariant element in the degree window")]
    NoNonInvariantInWindow,
    #[error("{0} is not σ-invariant")]
    NotInvariant(String),
    #[error("{0} is a unit")]
    UnitElement(String),
    #[error("the zero element is not allowed here")]
    ZeroElement,
    #[error(transparent)]
    ExpMap(#[from] ExpMapError),
}

/// Search space: polynomials of total degree `<= D`, `D >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeWindow(u32);

impl DegreeWindow {
    pub fn new(max_degree: u32) -> Result<Self, InvariantsError> {
        if max_degree == 0 {
            Err(InvariantsError::BadWindow)
        } else {
            Ok(DegreeWindow(max_degree))
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.0
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A window local slice with its σ-degree and leading σ-coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceRecord {
    pub element: MPoly,
    pub deg_sigma: usize,
    pub lc: MPoly,
}

impl SliceRecord {
    /// Profiles `s` under `map`; fails if `s` is zero or invariant.
    pub fn of(map: &ExpMap, s: &MPoly) -> Result<Self, InvariantsError> {
        let prof = map.profile(s)?;
        if prof.deg_sigma == 0 {
            return Err(ExpMapError::InvariantElement.into());
        }
        Ok(SliceRecord {
            element: prof.element,
            deg_sigma: prof.deg_sigma,
            lc: prof.lc_sigma,
        })
    }
}

/// Output of [`find_local_slices`]. `m_star` is the minimum σ-degree of a
/// non-invariant window element: window-minimal, an upper bound for the
/// global minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSlices {
    pub m_star: usize,
    pub slices: Vec<SliceRecord>,
}

/// The σ-images of the window monomials, with the coordinate system used by
/// every linear-algebra routine below.
struct WindowImages {
    field: FieldSpec,
    monomials: Vec<Monomial>,
    images: Vec<SigmaImage>,
}

impl WindowImages {
    fn new(map: &ExpMap, window: DegreeWindow) -> Self {
        let ring = map.ring();
        let monomials = ring.monomials_up_to(window.max_degree());
        let images = monomials
            .iter()
            .map(|m| map.apply(&MPoly::monomial(ring, m.clone(), ring.field().one())))
            .collect();
        WindowImages {
            field: ring.field(),
            monomials,
            images,
        }
    }

    fn max_sigma_degree(&self) -> usize {
        self.images.iter().map(SigmaImage::degree).max().unwrap_or(0)
    }

    /// Matrix of `f -> (δ_i(f))_{i > above}` in window coordinates.
    fn delta_matrix(&self, above: usize) -> Vec<Vec<FieldElem>> {
        let mut rows: BTreeMap<(usize, Monomial), Vec<FieldElem>> = BTreeMap::new();
        let n = self.monomials.len();
        for (col, img) in self.images.iter().enumerate() {
            for (i, a) in img.coeffs().iter().enumerate().skip(above + 1) {
                for (m, c) in a.terms() {
                    rows.entry((i, m.clone()))
                        .or_insert_with(|| vec![self.field.zero(); n])[col] = c.clone();
                }
            }
        }
        rows.into_values().collect()
    }

    /// Elements `f` of the window with `δ_i(f) = 0` for all `i > above`.
    fn kernel(&self, ring: &PolyRing, above: usize) -> Vec<MPoly> {
        let rows = self.delta_matrix(above);
        linalg::nullspace(self.field, &rows, self.monomials.len())
            .into_iter()
            .map(|v| vector_to_poly(ring, &self.monomials, &v))
            .collect()
    }
}

fn vector_to_poly(ring: &PolyRing, monomials: &[Monomial], v: &[FieldElem]) -> MPoly {
    MPoly::from_terms(ring, monomials.iter().cloned().zip(v.iter().cloned()))
}

fn poly_to_vector(f: &MPoly, index: &BTreeMap<Monomial, usize>) -> Vec<FieldElem> {
    let mut v = vec![f.ring().field().zero(); index.len()];
    for (m, c) in f.terms() {
        v[index[m]] = c.clone();
    }
    v
}

fn monomial_index(ring: &PolyRing, max_deg: u32) -> BTreeMap<Monomial, usize> {
    ring.monomials_up_to(max_deg)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect()
}

/// Is `target` in the span of `basis`? All polynomials must have total
/// degree `<= max_deg`.
fn in_span(basis: &[MPoly], target: &MPoly, max_deg: u32) -> bool {
    let ring = target.ring();
    let index = monomial_index(ring, max_deg);
    let mut rows: Vec<_> = basis.iter().map(|b| poly_to_vector(b, &index)).collect();
    let before = linalg::rank(ring.field(), &rows, index.len());
    rows.push(poly_to_vector(target, &index));
    linalg::rank(ring.field(), &rows, index.len()) == before
}

/// `K`-basis of the window invariants `{f : σ(f) = f}`. Each basis element
/// is monic with a distinct leading monomial; the list is ordered by
/// leading monomial (ascending graded-lex).
pub fn invariant_basis(map: &ExpMap, window: DegreeWindow) -> Vec<MPoly> {
    WindowImages::new(map, window).kernel(map.ring(), 0)
}

/// Minimum positive σ-degree over the window and a basis of the
/// corresponding local slices (modulo invariants).
pub fn find_local_slices(map: &ExpMap, window: DegreeWindow) -> Result<LocalSlices, InvariantsError> {
    let wi = WindowImages::new(map, window);
    let ring = map.ring();
    let dim0 = wi.kernel(ring, 0).len();
    for m in 1..=wi.max_sigma_degree() {
        let vm = wi.kernel(ring, m);
        if vm.len() > dim0 {
            let slices = vm
                .iter()
                .filter(|f| !map.is_invariant(f))
                .map(|f| SliceRecord::of(map, f))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(LocalSlices { m_star: m, slices });
        }
    }
    Err(InvariantsError::NoNonInvariantInWindow)
}

/// Leading σ-coefficients of the window local slices, made monic and
/// deduplicated, ordered by leading monomial.
pub fn plinth_sample(map: &ExpMap, window: DegreeWindow) -> Result<Vec<MPoly>, InvariantsError> {
    let found = find_local_slices(map, window)?;
    Ok(sample_from(&found.slices))
}

fn sample_from(slices: &[SliceRecord]) -> Vec<MPoly> {
    let mut seen: BTreeMap<(Monomial, String), MPoly> = BTreeMap::new();
    for s in slices {
        let lc = s.lc.monic();
        let key = (lc.leading_term().map(|(m, _)| m.clone()).expect("nonzero lc"), lc.to_string());
        seen.entry(key).or_insert(lc);
    }
    seen.into_values().collect()
}

/// Spot-checks the ideal structure of the plinth sample: for window slices
/// `s, s'` with `lc(s) + lc(s') != 0`, `s + s'` is a local slice with
/// `lc = lc(s) + lc(s')`; for window invariants `a`, `a·s` is a local slice
/// with `lc = a·lc(s)`.
pub fn check_plinth_closure(map: &ExpMap, window: DegreeWindow) -> Result<bool, InvariantsError> {
    let found = find_local_slices(map, window)?;
    let invariants = invariant_basis(map, window);
    let is_slice_with = |f: &MPoly, lc: &MPoly| -> Result<bool, InvariantsError> {
        let prof = map.profile(f)?;
        Ok(prof.deg_sigma == found.m_star && prof.lc_sigma == *lc)
    };
    for (i, s) in found.slices.iter().enumerate() {
        for t in &found.slices[i..] {
            let sum = &s.lc + &t.lc;
            if !sum.is_zero() && !is_slice_with(&(&s.element + &t.element), &sum)? {
                return Ok(false);
            }
        }
        for a in &invariants {
            let lc = a * &s.lc;
            if !is_slice_with(&(a * &s.element), &lc)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalSlice {
    /// A window slice whose lc divides every sampled plinth element.
    Found(SliceRecord),
    /// No sampled lc divides all others. `divides[i][j]` records whether
    /// `samples[i]` divides `samples[j]`.
    Inconclusive {
        samples: Vec<MPoly>,
        divides: Vec<Vec<bool>>,
    },
}

/// Picks a window local slice whose lc generates the largest sampled
/// principal ideal, preferring lcs of low total degree.
pub fn minimal_local_slice(map: &ExpMap, window: DegreeWindow) -> Result<MinimalSlice, InvariantsError> {
    let found = find_local_slices(map, window)?;
    Ok(select_minimal(&found.slices))
}

fn select_minimal(slices: &[SliceRecord]) -> MinimalSlice {
    let samples = sample_from(slices);
    let divides_all = |lc: &MPoly| samples.iter().all(|t| t.exact_divide(lc).is_ok());
    let mut order: Vec<&SliceRecord> = slices.iter().collect();
    order.sort_by_key(|s| s.lc.leading_term().map(|(m, _)| m.clone()));
    if let Some(s) = order.into_iter().find(|s| divides_all(&s.lc)) {
        return MinimalSlice::Found(s.clone());
    }
    let divides = samples
        .iter()
        .map(|a| samples.iter().map(|b| b.exact_divide(a).is_ok()).collect())
        .collect();
    MinimalSlice::Inconclusive { samples, divides }
}

fn require_invariant_nonunit(map: &ExpMap, p: &MPoly) -> Result<(), InvariantsError> {
    if p.is_zero() {
        return Err(InvariantsError::ZeroElement);
    }
    if !map.is_invariant(p) {
        return Err(InvariantsError::NotInvariant(p.to_string()));
    }
    if p.is_unit() {
        return Err(InvariantsError::UnitElement(p.to_string()));
    }
    Ok(())
}

/// Window check that `A^σ / p A^σ` is the base field: every window
/// invariant is congruent to a constant modulo `p`·(window invariants).
pub fn residue_is_base_field(map: &ExpMap, p: &MPoly, window: DegreeWindow) -> Result<bool, InvariantsError> {
    require_invariant_nonunit(map, p)?;
    let d = window.max_degree();
    let inv = invariant_basis(map, window);
    let pdeg = p.total_degree().unwrap_or(0);
    let mut span: Vec<MPoly> = inv
        .iter()
        .filter(|b| b.total_degree().unwrap_or(0) + pdeg <= d)
        .map(|b| p * b)
        .collect();
    span.push(MPoly::one(map.ring()));
    Ok(inv.iter().all(|b| in_span(&span, b, d)))
}

/// True iff no window invariant `b` has `q | s - b`, i.e. the image of `s`
/// in `A/qA` is outside the image of the window invariants.
pub fn remark_check_min_slice(
    map: &ExpMap,
    s: &MPoly,
    q: &MPoly,
    window: DegreeWindow,
) -> Result<bool, InvariantsError> {
    require_invariant_nonunit(map, q)?;
    let ring = map.ring();
    let top = window.max_degree().max(s.total_degree().unwrap_or(0));
    let qdeg = q.total_degree().unwrap_or(0);
    let mut span = invariant_basis(map, window);
    if top >= qdeg {
        for m in ring.monomials_up_to(top - qdeg) {
            span.push(q.mul_term(&m, &ring.field().one()));
        }
    }
    Ok(!in_span(&span, s, top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::parse_poly;

    fn map(field: FieldSpec, vars: &[&str], images: &[&str]) -> ExpMap {
        let r = PolyRing::new(field, vars).unwrap();
        ExpMap::from_strs(&r, images).unwrap()
    }

    fn uv() -> ExpMap {
        map(FieldSpec::Rationals, &["u", "v"], &["u", "v + u*x"])
    }

    fn w(d: u32) -> DegreeWindow {
        DegreeWindow::new(d).unwrap()
    }

    fn strs(v: &[MPoly]) -> Vec<String> {
        v.iter().map(|p| p.to_string()).collect()
    }

    fn p(m: &ExpMap, s: &str) -> MPoly {
        parse_poly(s, m.ring()).unwrap()
    }

    #[test]
    fn invariant_basis_examples() {
        assert_eq!(strs(&invariant_basis(&uv(), w(2))), ["1", "u", "u^2"]);
        let r = PolyRing::new(FieldSpec::Rationals, &["u", "v"]).unwrap();
        assert_eq!(invariant_basis(&ExpMap::identity(&r), w(2)).len(), 6);
        let t = map(FieldSpec::Rationals, &["v"], &["v + x"]);
        assert_eq!(strs(&invariant_basis(&t, w(3))), ["1"]);
    }

    #[test]
    fn window_must_be_positive() {
        assert_eq!(DegreeWindow::new(0), Err(InvariantsError::BadWindow));
    }

    #[test]
    fn local_slice_examples() {
        let ls = find_local_slices(&uv(), w(1)).unwrap();
        assert_eq!(ls.m_star, 1);
        assert_eq!(ls.slices.len(), 1);
        assert_eq!(ls.slices[0].element.to_string(), "v");
        assert_eq!(ls.slices[0].lc.to_string(), "u");

        let f2 = map(FieldSpec::PrimeField(2), &["y0"], &["y0 + x^2"]);
        let ls = find_local_slices(&f2, w(1)).unwrap();
        assert_eq!(ls.m_star, 2);
        assert_eq!(ls.slices[0].element.to_string(), "y0");
        assert!(ls.slices[0].lc.is_one());

        let t = map(FieldSpec::Rationals, &["u", "v"], &["u", "v + x"]);
        let ls = find_local_slices(&t, w(1)).unwrap();
        assert_eq!(ls.m_star, 1);
        assert_eq!(strs(&ls.slices.iter().map(|s| s.element.clone()).collect::<Vec<_>>()), ["v"]);
        assert!(ls.slices[0].lc.is_one());

        let r = PolyRing::new(FieldSpec::Rationals, &["u"]).unwrap();
        assert_eq!(
            find_local_slices(&ExpMap::identity(&r), w(3)),
            Err(InvariantsError::NoNonInvariantInWindow)
        );
    }

    #[test]
    fn plinth_examples() {
        assert_eq!(strs(&plinth_sample(&uv(), w(2)).unwrap()), ["u", "u^2"]);
        let t = map(FieldSpec::Rationals, &["v"], &["v + x"]);
        assert_eq!(strs(&plinth_sample(&t, w(2)).unwrap()), ["1"]);
        let f2 = map(FieldSpec::PrimeField(2), &["y0"], &["y0 + x^2"]);
        assert_eq!(strs(&plinth_sample(&f2, w(2)).unwrap()), ["1"]);
        assert!(check_plinth_closure(&uv(), w(2)).unwrap());
        assert!(check_plinth_closure(&f2, w(3)).unwrap());
    }

    #[test]
    fn minimal_slice_examples() {
        match minimal_local_slice(&uv(), w(2)).unwrap() {
            MinimalSlice::Found(s) => {
                assert_eq!(s.element.to_string(), "v");
                assert_eq!(s.lc.to_string(), "u");
            }
            other => panic!("{other:?}"),
        }
        let t = map(FieldSpec::Rationals, &["v"], &["v + x"]);
        match minimal_local_slice(&t, w(1)).unwrap() {
            MinimalSlice::Found(s) => assert!(s.lc.is_one()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_principal_plinth_is_inconclusive() {
        // plinth ideal (u, w): no sampled lc divides the other
        let m = map(FieldSpec::Rationals, &["u", "w", "v", "t"], &["u", "w", "v + u*x", "t + w*x"]);
        assert!(m.validate().valid);
        match minimal_local_slice(&m, w(1)).unwrap() {
            MinimalSlice::Inconclusive { samples, divides } => {
                assert_eq!(strs(&samples), ["w", "u"]);
                assert_eq!(divides, vec![vec![true, false], vec![false, true]]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn residue_examples() {
        let m = uv();
        assert!(residue_is_base_field(&m, &p(&m, "u"), w(3)).unwrap());
        assert!(!residue_is_base_field(&m, &p(&m, "u^2"), w(3)).unwrap());
        let t = map(FieldSpec::Rationals, &["u", "v"], &["u", "v + x"]);
        assert!(residue_is_base_field(&t, &p(&t, "u - 1"), w(3)).unwrap());
        assert!(matches!(
            residue_is_base_field(&m, &p(&m, "v"), w(3)),
            Err(InvariantsError::NotInvariant(_))
        ));
        assert!(matches!(
            residue_is_base_field(&m, &p(&m, "2"), w(3)),
            Err(InvariantsError::UnitElement(_))
        ));
    }

    #[test]
    fn remark_examples() {
        let m = uv();
        assert!(remark_check_min_slice(&m, &p(&m, "v"), &p(&m, "u"), w(3)).unwrap());
        assert!(!remark_check_min_slice(&m, &p(&m, "u*v"), &p(&m, "u"), w(3)).unwrap());
        let t = map(FieldSpec::Rationals, &["u", "v"], &["u", "v + x"]);
        assert!(remark_check_min_slice(&t, &p(&t, "v"), &p(&t, "u - 1"), w(3)).unwrap());
        // v + u*(anything invariant) shifts by an invariant: still not constant mod u
        assert!(remark_check_min_slice(&m, &p(&m, "v + u^2"), &p(&m, "u"), w(3)).unwrap());
        assert!(matches!(
            remark_check_min_slice(&m, &p(&m, "v"), &p(&m, "v"), w(3)),
            Err(InvariantsError::NotInvariant(_))
        ));
    }
}
