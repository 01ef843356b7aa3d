//! Oracles shared by the integration tests. Nothing here calls the
//! library's σ-application, degree or linear-algebra routines; images are
//! substituted by hand in a flat ring with an extra variable `t`.

#![allow(dead_code)]

use expmap::{ExpMap, FieldElem, FieldSpec, MPoly, Monomial, PolyRing};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Oracle {
    pub ring: PolyRing,
    /// `vars + [tflow]`
    pub flat: PolyRing,
    images: Vec<MPoly>,
}

fn lift(flat: &PolyRing, f: &MPoly) -> MPoly {
    MPoly::from_terms(
        flat,
        f.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.push(0);
            (Monomial(e), c.clone())
        }),
    )
}

impl Oracle {
    pub fn new(map: &ExpMap) -> Self {
        let ring = map.ring().clone();
        let mut names: Vec<String> = ring.vars().to_vec();
        names.push("tflow".into());
        let flat = PolyRing::new(ring.field(), &names).unwrap();
        let r = ring.nvars();
        let images = map
            .images()
            .iter()
            .map(|img| {
                let mut acc = MPoly::zero(&flat);
                for (i, a) in img.coeffs().iter().enumerate() {
                    let mut tpow = vec![0; r + 1];
                    tpow[r] = i as u32;
                    let ti = MPoly::monomial(&flat, Monomial(tpow), ring.field().one());
                    acc = &acc + &(&lift(&flat, a) * &ti);
                }
                acc
            })
            .collect();
        Oracle { ring, flat, images }
    }

    pub fn lift(&self, f: &MPoly) -> MPoly {
        lift(&self.flat, f)
    }

    /// `σ(f) = f(σ(v_1), ..., σ(v_r))` with `x` renamed `t`.
    pub fn sigma(&self, f: &MPoly) -> MPoly {
        let mut acc = MPoly::zero(&self.flat);
        for (m, c) in f.terms() {
            let mut term = MPoly::constant(&self.flat, c.clone());
            for (img, &e) in self.images.iter().zip(m.exponents()) {
                for _ in 0..e {
                    term = &term * img;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Coefficients of `σ(f)` as a polynomial in `t`.
    pub fn coeffs(&self, f: &MPoly) -> Vec<MPoly> {
        let r = self.ring.nvars();
        let s = self.sigma(f);
        let deg = s.terms().map(|(m, _)| m.exponents()[r]).max().unwrap_or(0) as usize;
        let mut out = vec![Vec::new(); deg + 1];
        for (m, c) in s.terms() {
            let e = m.exponents();
            out[e[r] as usize].push((Monomial(e[..r].to_vec()), c.clone()));
        }
        out.into_iter().map(|t| MPoly::from_terms(&self.ring, t)).collect()
    }

    pub fn deg(&self, f: &MPoly) -> usize {
        self.coeffs(f).len() - 1
    }

    pub fn lc(&self, f: &MPoly) -> MPoly {
        self.coeffs(f).pop().unwrap()
    }

    pub fn is_invariant(&self, f: &MPoly) -> bool {
        self.sigma(f) == self.lift(f)
    }

    /// The point map `P -> (σ(v_i)(P, t))_i`.
    pub fn flow(&self, point: &[FieldElem], t: &FieldElem) -> Vec<FieldElem> {
        let mut full = point.to_vec();
        full.push(t.clone());
        self.images.iter().map(|g| g.eval(&full)).collect()
    }
}

pub fn random_elem(rng: &mut ChaCha8Rng, field: FieldSpec) -> FieldElem {
    match field {
        FieldSpec::Rationals => {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=4);
            field.from_fraction(&BigInt::from(num), &BigInt::from(den)).unwrap()
        }
        FieldSpec::PrimeField(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Vec<FieldElem> {
    (0..n).map(|_| random_elem(rng, field)).collect()
}

/// Random polynomial with at most `terms` terms of total degree `<= deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &PolyRing, terms: usize, deg: u32) -> MPoly {
    let monos = ring.monomials_up_to(deg);
    let n = rng.gen_range(1..=terms);
    MPoly::from_terms(
        ring,
        (0..n).map(|_| {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            (m, random_elem(rng, ring.field()))
        }),
    )
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense Gaussian elimination over `Q`; returns the rank.
pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(k) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, k);
        let piv = m[rank][col].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &piv;
                for j in 0..ncols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn to_rational(c: &FieldElem) -> BigRational {
    match c {
        FieldElem::Rational(q) => q.clone(),
        FieldElem::Residue { .. } => panic!("expected a rational"),
    }
}

pub fn is_one(q: &BigRational) -> bool {
    q.is_one()
}
