use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::PolyError;
use crate::field::FieldSpec;

/// Names reserved for the exponential-map variables of `A[x, y]`.
pub const RESERVED: [&str; 2] = ["x", "y"];

/// Ring context `K[v_1, ..., v_r]`: a coefficient field and an ordered
/// variable list. Cheap to clone.
#[derive(Clone)]
pub struct PolyRing {
    inner: Arc<RingInner>,
}

struct RingInner {
    field: FieldSpec,
    vars: Vec<String>,
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(field: FieldSpec, vars: &[S]) -> Result<Self, PolyError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if RESERVED.contains(&v.as_str()) {
                return Err(PolyError::ReservedVariable(v.clone()));
            }
            if !valid_identifier(v) {
                return Err(PolyError::BadIdentifier(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Self::new_unchecked(field, vars))
    }

    /// Skips the reserved-name check; used internally to build `A[x]`
    /// and `A[x, y]` as flat rings for parsing and printing.
    pub(crate) fn new_unchecked(field: FieldSpec, vars: Vec<String>) -> Self {
        PolyRing {
            inner: Arc::new(RingInner { field, vars }),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.inner.field
    }

    pub fn vars(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn nvars(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v == name)
    }

    /// Same field, variables extended by `extra` (appended last).
    pub(crate) fn extended(&self, extra: &[&str]) -> PolyRing {
        let mut vars = self.inner.vars.clone();
        vars.extend(extra.iter().map(|s| s.to_string()));
        PolyRing::new_unchecked(self.inner.field, vars)
    }

    /// All monomials of total degree `<= max_deg`, ascending graded-lex.
    pub fn monomials_up_to(&self, max_deg: u32) -> Vec<Monomial> {
        let n = self.nvars();
        let mut out = Vec::new();
        for d in 0..=max_deg {
            let mut cur = vec![0u32; n];
            compositions(d, 0, &mut cur, &mut out);
        }
        out.sort();
        out
    }
}

fn compositions(rest: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos + 1 >= cur.len() {
        if cur.is_empty() {
            if rest == 0 {
                out.push(Monomial(Vec::new()));
            }
            return;
        }
        cur[pos] = rest;
        out.push(Monomial(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=rest {
        cur[pos] = e;
        compositions(rest - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field && self.inner.vars == other.inner.vars)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.inner.field, self.inner.vars.join(", "))
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exponent vector, ordered graded-lexicographically: total degree first,
/// then lexicographic with the first declared variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_and_duplicate_names() {
        let q = FieldSpec::Rationals;
        assert!(matches!(PolyRing::new(q, &["u", "x"]), Err(PolyError::ReservedVariable(_))));
        assert!(matches!(PolyRing::new(q, &["y"]), Err(PolyError::ReservedVariable(_))));
        assert!(matches!(PolyRing::new(q, &["u", "u"]), Err(PolyError::DuplicateVariable(_))));
        assert!(matches!(PolyRing::new(q, &["1u"]), Err(PolyError::BadIdentifier(_))));
        assert!(PolyRing::new(q, &["y0", "u_1"]).is_ok());
    }

    #[test]
    fn grlex_window() {
        let r = PolyRing::new(FieldSpec::Rationals, &["u", "v"]).unwrap();
        let ms: Vec<Vec<u32>> = r.monomials_up_to(2).into_iter().map(|m| m.0).collect();
        assert_eq!(
            ms,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(r.monomials_up_to(4).len(), 15);
    }

    #[test]
    fn window_of_zero_variables() {
        let r = PolyRing::new::<&str>(FieldSpec::Rationals, &[]).unwrap();
        assert_eq!(r.monomials_up_to(3), vec![Monomial(vec![])]);
    }
}
