//! Symbolic growth measurement for the reciprocal-derivative numerators.
//!
//! Treats `f, f′, f″, …` as independent indeterminates `v₀, v₁, v₂, …` and
//! runs the numerator recurrence `B_{j+1} = v₀·B_j′ − (j+1)·v₁·B_j`, where
//! the formal derivative maps `v_i ↦ v_{i+1}` (chain rule through the
//! underlying variable). The number of distinct monomials in `B_k` equals
//! the number of integer partitions of `k`, so the expression swell is
//! super-geometric; this module makes that measurable.

use std::collections::BTreeMap;

use rug::Integer;

/// Multivariate polynomial in the indeterminates `v₀, v₁, v₂, …` with
/// integer coefficients. The key is the exponent vector (trailing zeros
/// trimmed so each monomial has one canonical key).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    terms: BTreeMap<Vec<u16>, Integer>,
}

fn trim(mut exps: Vec<u16>) -> Vec<u16> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl SymPoly {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Integer::from(1));
        Self { terms }
    }

    /// The indeterminate `v_i`.
    pub fn var(i: usize) -> Self {
        let mut exps = vec![0u16; i + 1];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, Integer::from(1));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct monomials with nonzero coefficient.
    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coefficient(&self, exps: &[u16]) -> Integer {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    fn insert(terms: &mut BTreeMap<Vec<u16>, Integer>, exps: Vec<u16>, coeff: Integer) {
        if coeff == 0 {
            return;
        }
        match terms.entry(trim(exps)) {
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (exps, coeff) in &other.terms {
            Self::insert(&mut terms, exps.clone(), coeff.clone());
        }
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (exps, coeff) in &other.terms {
            Self::insert(&mut terms, exps.clone(), Integer::from(-coeff.clone()));
        }
        Self { terms }
    }

    pub fn scale(&self, factor: i64) -> Self {
        if factor == 0 {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), Integer::from(c * factor)))
            .collect();
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut exps = vec![0u16; ea.len().max(eb.len())];
                for (i, &e) in ea.iter().enumerate() {
                    exps[i] += e;
                }
                for (i, &e) in eb.iter().enumerate() {
                    exps[i] += e;
                }
                Self::insert(&mut terms, exps, Integer::from(ca * cb));
            }
        }
        Self { terms }
    }

    /// Formal derivative with each `v_i` standing for the i-th derivative
    /// of one underlying function: `d(v_i)/dx = v_{i+1}`, extended by the
    /// product rule. A monomial `∏ v_i^{e_i}` maps to
    /// `Σ_i e_i · v_{i+1} · ∏ v_j^{e_j − [j=i]}`.
    pub fn derivative(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            for i in 0..exps.len() {
                if exps[i] == 0 {
                    continue;
                }
                let mut shifted = exps.clone();
                shifted[i] -= 1;
                if shifted.len() < i + 2 {
                    shifted.resize(i + 2, 0);
                }
                shifted[i + 1] += 1;
                Self::insert(
                    &mut terms,
                    shifted,
                    Integer::from(coeff * i64::from(exps[i])),
                );
            }
        }
        Self { terms }
    }
}

impl std::fmt::Display for SymPoly {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write!(out, "{coeff}")?;
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(out, "·v{i}")?,
                    _ => write!(out, "·v{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// The symbolic numerators `B_0, …, B_k` of the reciprocal derivatives.
pub fn b_sequence(k: usize) -> Vec<SymPoly> {
    let mut seq = Vec::with_capacity(k + 1);
    seq.push(SymPoly::one());
    let v0 = SymPoly::var(0);
    let v1 = SymPoly::var(1);
    for j in 0..k {
        let b = &seq[j];
        let next = v0
            .mul(&b.derivative())
            .sub(&v1.mul(b).scale((j + 1) as i64));
        seq.push(next);
    }
    seq
}

/// `(k, monomial count of B_k)` for `k = 1 ..= k_max`.
pub fn monomial_growth(k_max: usize) -> Vec<(usize, usize)> {
    b_sequence(k_max)
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, b)| (k, b.monomial_count()))
        .collect()
}
