//! Monomial ideals in canonical minimal-generator form.
//!
//! An ideal in `k` variables is stored as the lexicographically sorted antichain
//! of its minimal exponent vectors. The zero ideal has no generators; the unit
//! ideal has the single generator `0`. Structural equality is ideal equality.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::newton_geometry::{newton_polyhedron, NewtonPolyhedron};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "exponent vectors need at least one entry".into(),
            ));
        }
        Ok(ExponentVector(entries))
    }

    pub fn zero(k: usize) -> Self {
        ExponentVector(vec![0; k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// `|v| = Σ v_i`
    pub fn total_degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn max(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Componentwise `max(self − other, 0)`.
    pub fn saturating_sub(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.saturating_sub(*b)).collect(),
        )
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&e| Rational::from_integer(BigInt::from(e))).collect()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<ExponentVector>,
}

/// Canonical antichain of the ideal generated by `gens` in `k` variables.
/// An empty generating set gives the zero ideal.
pub fn minimalize(gens: Vec<ExponentVector>, k: usize) -> Result<MonomialIdeal> {
    if k == 0 {
        return Err(Error::InvalidParameter("ambient dimension must be at least 1".into()));
    }
    if let Some(bad) = gens.iter().find(|g| g.dim() != k) {
        return Err(Error::dims(k, bad.dim()));
    }
    Ok(MonomialIdeal { dim: k, gens: antichain(gens) })
}

fn antichain(mut gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    gens.sort_unstable();
    gens.dedup();
    if gens.first().is_some_and(|g| g.dim() == 2) {
        // lex order: x ascending; keep strictly decreasing y
        let mut kept: Vec<ExponentVector> = Vec::with_capacity(gens.len());
        let mut best_y = u64::MAX;
        for g in gens {
            if g.0[1] < best_y {
                best_y = g.0[1];
                kept.push(g);
            }
        }
        return kept;
    }
    // Any dominated vector is preceded in lex order by a kept vector below it.
    let mut kept: Vec<ExponentVector> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|h| g.dominates(h)) {
            kept.push(g);
        }
    }
    kept
}

impl MonomialIdeal {
    pub fn new(gens: Vec<ExponentVector>, k: usize) -> Result<Self> {
        minimalize(gens, k)
    }

    /// Convenience constructor from raw exponent rows.
    pub fn from_exponents(k: usize, rows: &[&[u64]]) -> Result<Self> {
        let gens = rows
            .iter()
            .map(|r| ExponentVector::new(r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        minimalize(gens, k)
    }

    pub fn zero(k: usize) -> Self {
        MonomialIdeal { dim: k, gens: Vec::new() }
    }

    pub fn unit(k: usize) -> Self {
        MonomialIdeal { dim: k, gens: vec![ExponentVector::zero(k)] }
    }

    /// The maximal ideal `(x_1, …, x_k)`.
    pub fn maximal(k: usize) -> Self {
        let gens = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                ExponentVector(e)
            })
            .collect();
        MonomialIdeal { dim: k, gens: antichain(gens) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_zero()
    }

    fn check_dim(&self, other: &MonomialIdeal) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MonomialIdeal::zero(self.dim));
        }
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let mut sums = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                sums.push(a.add(b));
            }
        }
        Ok(MonomialIdeal { dim: self.dim, gens: antichain(sums) })
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MonomialIdeal::zero(self.dim));
        }
        let mut lcms = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                lcms.push(a.max(b));
            }
        }
        Ok(MonomialIdeal { dim: self.dim, gens: antichain(lcms) })
    }

    /// `(self : other) = ∩_{w ∈ gens(other)} (self : x^w)`.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_dim(other)?;
        if other.is_zero() {
            return Err(Error::ZeroDivisorIdeal);
        }
        let mut acc = MonomialIdeal::unit(self.dim);
        for w in &other.gens {
            let quotient: Vec<ExponentVector> =
                self.gens.iter().map(|v| v.saturating_sub(w)).collect();
            let quotient = MonomialIdeal { dim: self.dim, gens: antichain(quotient) };
            acc = acc.intersect(&quotient)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// `self^n`; any `n ≤ 0` gives the unit ideal.
    pub fn power(&self, n: i64) -> MonomialIdeal {
        if n <= 0 {
            return MonomialIdeal::unit(self.dim);
        }
        if self.is_zero() || self.is_unit() {
            return self.clone();
        }
        let mut result = MonomialIdeal::unit(self.dim);
        let mut base = self.clone();
        let mut e = n as u64;
        // same dimension throughout, products cannot fail
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base).expect("dimensions agree");
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base).expect("dimensions agree");
            }
        }
        result
    }

    pub fn contains_monomial(&self, v: &ExponentVector) -> Result<bool> {
        if v.dim() != self.dim {
            return Err(Error::dims(self.dim, v.dim()));
        }
        Ok(self.gens.iter().any(|g| v.dominates(g)))
    }

    /// Ideal containment `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.gens.iter().all(|g| other.gens.iter().any(|h| g.dominates(h))))
    }

    /// Pure-power exponent on each axis, if every axis carries one.
    pub fn axis_powers(&self) -> Option<Vec<u64>> {
        (0..self.dim)
            .map(|i| {
                self.gens
                    .iter()
                    .filter(|g| g.0.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                    .map(|g| g.0[i])
                    .min()
            })
            .collect()
    }

    pub fn is_cofinite(&self) -> bool {
        !self.is_zero() && self.axis_powers().is_some()
    }

    /// Number of monomials outside the ideal, `l(R/a)`.
    pub fn colength(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::NotCofinite);
        }
        let bounds = self.axis_powers().ok_or(Error::NotCofinite)?;
        let mut count = 0u64;
        let mut point = vec![0u64; self.dim];
        if bounds.contains(&0) {
            return Ok(0);
        }
        'scan: loop {
            let v = ExponentVector(point.clone());
            if !self.gens.iter().any(|g| v.dominates(g)) {
                count += 1;
            }
            for i in 0..self.dim {
                point[i] += 1;
                if point[i] < bounds[i] {
                    continue 'scan;
                }
                point[i] = 0;
            }
            break;
        }
        Ok(count)
    }

    /// `min_g ⟨w, g⟩` over generators; `w = 𝟏` gives `ord₀`.
    pub fn weighted_order(&self, w: &[Rational]) -> Result<Rational> {
        if w.len() != self.dim {
            return Err(Error::dims(self.dim, w.len()));
        }
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::NegativeWeight);
        }
        if self.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let value = self
            .gens
            .iter()
            .map(|g| g.to_rational().iter().zip(w).map(|(a, b)| a * b).sum::<Rational>())
            .min()
            .expect("nonzero ideal has generators");
        Ok(value)
    }

    /// `ord₀`, the least total degree of a monomial in the ideal.
    pub fn order(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(int(self.gens.iter().map(|g| g.total_degree()).min().unwrap_or(0) as i64))
    }

    pub fn newton_polyhedron(&self) -> Result<NewtonPolyhedron> {
        newton_polyhedron(self)
    }

    /// Arnold multiplicity: the diagonal value `λ(P(a))` of the Newton polyhedron.
    pub fn arn(&self) -> Result<Rational> {
        Ok(self.newton_polyhedron()?.diagonal_lambda())
    }

    /// Log-canonical threshold `1/Arn`; `None` encodes `+∞` (unit ideal).
    pub fn lct(&self) -> Result<Option<Rational>> {
        let arn = self.arn()?;
        Ok(if arn.is_zero() { None } else { Some(arn.recip()) })
    }

    /// Samuel multiplicity `k! · Vol(orthant \ P(a))`.
    pub fn multiplicity(&self) -> Result<Rational> {
        if !self.is_cofinite() {
            return Err(Error::NotCofinite);
        }
        let covolume = self.newton_polyhedron()?.covolume()?;
        Ok(covolume * factorial(self.dim))
    }
}

pub fn factorial(k: usize) -> Rational {
    int((1..=k as i64).product())
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "(0)");
        }
        if self.is_unit() {
            return write!(f, "(1)");
        }
        let names = |i: usize| -> String {
            if self.dim <= 3 {
                ["x", "y", "z"][i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        };
        let mons: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                let parts: Vec<String> = g
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
                    .collect();
                parts.join("*")
            })
            .collect();
        write!(f, "({})", mons.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ideal(rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(rows[0].len(), rows).unwrap()
    }

    fn ev(v: &[u64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    /// Brute-force membership table over the box [0, side]^2.
    fn table(a: &MonomialIdeal, side: u64) -> Vec<bool> {
        let mut out = Vec::new();
        for x in 0..=side {
            for y in 0..=side {
                out.push(a.contains_monomial(&ev(&[x, y])).unwrap());
            }
        }
        out
    }

    #[test]
    fn minimalize_examples() {
        let a = ideal(&[&[2, 0], &[0, 3], &[2, 1]]);
        assert_eq!(a.generators(), &[ev(&[0, 3]), ev(&[2, 0])]);
        assert!(ideal(&[&[0, 0], &[5, 5]]).is_unit());
        let z = minimalize(vec![], 2).unwrap();
        assert!(z.is_zero());
        assert!(!z.is_unit());
        assert_ne!(z, MonomialIdeal::unit(2));
    }

    #[test]
    fn minimalize_rejects_bad_dimension() {
        let err = minimalize(vec![ev(&[1, 2]), ev(&[1, 2, 3])], 2).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
        assert!(ExponentVector::new(vec![]).is_err());
    }

    #[test]
    fn minimalize_general_dimension() {
        let a = ideal(&[&[1, 0, 0], &[1, 1, 0], &[0, 2, 1], &[0, 3, 1], &[0, 0, 4]]);
        assert_eq!(a.generators(), &[ev(&[0, 0, 4]), ev(&[0, 2, 1]), ev(&[1, 0, 0])]);
    }

    #[test]
    fn product_examples() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        assert_eq!(MonomialIdeal::unit(2).product(&a).unwrap(), a);
        let x = ideal(&[&[1, 0]]);
        let y = ideal(&[&[0, 1]]);
        assert_eq!(x.product(&y).unwrap(), ideal(&[&[1, 1]]));
        assert_eq!(a.product(&a).unwrap(), ideal(&[&[4, 0], &[2, 3], &[0, 6]]));
        assert!(MonomialIdeal::zero(2).product(&a).unwrap().is_zero());
        assert!(a.product(&MonomialIdeal::unit(3)).is_err());
    }

    #[test]
    fn intersect_examples_against_membership_scan() {
        let a = ideal(&[&[2, 3], &[2, 0], &[0, 9]]);
        assert_eq!(a.intersect(&MonomialIdeal::unit(2)).unwrap(), a);
        let x2 = ideal(&[&[2, 0]]);
        let y3 = ideal(&[&[0, 3]]);
        assert_eq!(x2.intersect(&y3).unwrap(), ideal(&[&[2, 3]]));

        let p = ideal(&[&[2, 0], &[0, 1]]);
        let q = ideal(&[&[1, 0], &[0, 2]]);
        let meet = p.intersect(&q).unwrap();
        assert_eq!(meet, ideal(&[&[2, 0], &[1, 1], &[0, 2]]));
        let expected: Vec<bool> =
            table(&p, 3).iter().zip(table(&q, 3)).map(|(a, b)| *a && b).collect();
        assert_eq!(table(&meet, 3), expected);
        assert!(p.intersect(&MonomialIdeal::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn colon_examples_against_membership_scan() {
        let a = ideal(&[&[2, 1]]);
        let y = ideal(&[&[0, 1]]);
        let c = a.colon(&y).unwrap();
        assert_eq!(c, ideal(&[&[2, 0]]));
        // m ∈ (a : y) iff m·y ∈ a
        for x in 0..=4 {
            for z in 0..=4 {
                let inside = a.contains_monomial(&ev(&[x, z + 1])).unwrap();
                assert_eq!(c.contains_monomial(&ev(&[x, z])).unwrap(), inside);
            }
        }
        let m = MonomialIdeal::maximal(2);
        assert!(m.colon(&m).unwrap().is_unit());
        assert_eq!(a.colon(&MonomialIdeal::unit(2)).unwrap(), a);
        assert_eq!(a.colon(&MonomialIdeal::zero(2)).unwrap_err(), Error::ZeroDivisorIdeal);
    }

    #[test]
    fn power_examples() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        assert!(a.power(0).is_unit());
        assert!(a.power(-3).is_unit());
        assert_eq!(
            MonomialIdeal::maximal(2).power(2),
            ideal(&[&[2, 0], &[1, 1], &[0, 2]])
        );
        let cube = a.power(3);
        assert_eq!(cube, ideal(&[&[6, 0], &[4, 3], &[2, 6], &[0, 9]]));
        let repeated = a.product(&a).unwrap().product(&a).unwrap();
        assert_eq!(cube, repeated);
        assert!(MonomialIdeal::zero(2).power(2).is_zero());
        assert!(MonomialIdeal::zero(2).power(0).is_unit());
    }

    #[test]
    fn contains_examples() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        assert!(a.contains_monomial(&ev(&[1, 3])).unwrap());
        assert!(!a.contains_monomial(&ev(&[1, 2])).unwrap());
        assert!(!MonomialIdeal::zero(2).contains_monomial(&ev(&[0, 0])).unwrap());
        assert!(MonomialIdeal::unit(2).contains_monomial(&ev(&[0, 0])).unwrap());
        assert!(a.contains_monomial(&ev(&[1, 1, 1])).is_err());
    }

    #[test]
    fn colength_examples() {
        assert_eq!(MonomialIdeal::maximal(2).colength().unwrap(), 1);
        assert_eq!(ideal(&[&[2, 0], &[0, 3]]).colength().unwrap(), 6);
        assert_eq!(ideal(&[&[2, 0], &[1, 1], &[0, 2]]).colength().unwrap(), 3);
        assert_eq!(MonomialIdeal::unit(2).colength().unwrap(), 0);
        assert_eq!(ideal(&[&[1, 0]]).colength().unwrap_err(), Error::NotCofinite);
        assert_eq!(MonomialIdeal::zero(2).colength().unwrap_err(), Error::NotCofinite);
        assert_eq!(MonomialIdeal::maximal(3).power(2).colength().unwrap(), 4);
    }

    #[test]
    fn weighted_order_examples() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        assert_eq!(a.weighted_order(&[int(1), int(1)]).unwrap(), int(2));
        assert_eq!(a.order().unwrap(), int(2));
        assert_eq!(a.weighted_order(&[int(1), int(0)]).unwrap(), int(0));
        assert_eq!(
            MonomialIdeal::unit(2).weighted_order(&[rat(7, 2), int(3)]).unwrap(),
            int(0)
        );
        assert_eq!(
            MonomialIdeal::zero(2).weighted_order(&[int(1), int(1)]).unwrap_err(),
            Error::ZeroIdeal
        );
        assert_eq!(a.weighted_order(&[int(-1), int(1)]).unwrap_err(), Error::NegativeWeight);
    }

    #[test]
    fn arn_and_lct_examples() {
        let m = MonomialIdeal::maximal(2);
        assert_eq!(m.arn().unwrap(), rat(1, 2));
        assert_eq!(m.lct().unwrap(), Some(int(2)));
        assert_eq!(ideal(&[&[2, 0], &[0, 3]]).arn().unwrap(), rat(6, 5));
        assert_eq!(MonomialIdeal::unit(2).arn().unwrap(), int(0));
        assert_eq!(MonomialIdeal::unit(2).lct().unwrap(), None);
        assert_eq!(MonomialIdeal::zero(2).arn().unwrap_err(), Error::ZeroIdeal);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(MonomialIdeal::maximal(2).multiplicity().unwrap(), int(1));
        assert_eq!(ideal(&[&[2, 0], &[0, 3]]).multiplicity().unwrap(), int(6));
        assert_eq!(ideal(&[&[2, 0], &[1, 1], &[0, 2]]).multiplicity().unwrap(), int(4));
        assert_eq!(ideal(&[&[1, 0]]).multiplicity().unwrap_err(), Error::NotCofinite);
        assert_eq!(MonomialIdeal::maximal(3).multiplicity().unwrap(), int(1));
        assert_eq!(ideal(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]).multiplicity().unwrap(), int(30));
    }

    /// Samuel's definition as an oracle: 2!·l(R/aⁿ)/n² approaches e(a).
    fn colength_limit(a: &MonomialIdeal, n: i64) -> f64 {
        2.0 * a.power(n).colength().unwrap() as f64 / (n * n) as f64
    }

    #[test]
    fn multiplicity_of_pure_powers_matches_colength_limit() {
        for a in 1..=6u64 {
            for b in 1..=6u64 {
                let i = ideal(&[&[a, 0], &[0, b]]);
                let e = i.multiplicity().unwrap();
                assert_eq!(e, int((a * b) as i64));
                // l(R/aⁿ) = ab·n(n+1)/2 exactly, so the limit oracle converges like 1/n
                let approx = colength_limit(&i, 16);
                let exact = (a * b) as f64;
                assert!((approx - exact).abs() <= exact / 16.0 + 1e-9, "{a} {b} {approx}");
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(ideal(&[&[2, 0], &[1, 1], &[0, 3]]).to_string(), "(y^3, x*y, x^2)");
        assert_eq!(MonomialIdeal::zero(2).to_string(), "(0)");
        assert_eq!(MonomialIdeal::unit(2).to_string(), "(1)");
    }
}
