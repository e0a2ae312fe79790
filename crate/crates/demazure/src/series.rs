//! Truncated multivariate power series over an exact coefficient ring.
//!
//! A series carries its retained maximal total degree `prec`: stored
//! terms all have total degree <= prec, and the element is understood
//! modulo terms of degree > prec.  Every operation propagates precision
//! explicitly: binary operations take the minimum, each division by a
//! degree-one element costs exactly one degree.  Divisions verify their
//! result by multiplying back; the check is unconditional.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{complete_unimodular_row, IntMatrix};
use crate::ring::{Coef, Monomial, Ring};
use crate::stats;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    ring: Ring,
    nvars: usize,
    prec: u32,
    terms: BTreeMap<Monomial, Coef>,
}

impl TruncSeries {
    pub fn zero(ring: &Ring, nvars: usize, prec: u32) -> Self {
        TruncSeries { ring: ring.clone(), nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, nvars: usize, prec: u32, c: Coef) -> Self {
        let mut s = Self::zero(ring, nvars, prec);
        if !c.is_zero() {
            s.terms.insert(Monomial::unit(nvars), c);
        }
        s
    }

    pub fn one(ring: &Ring, nvars: usize, prec: u32) -> Self {
        Self::constant(ring, nvars, prec, ring.one())
    }

    pub fn variable(ring: &Ring, nvars: usize, prec: u32, i: usize) -> Self {
        let mut s = Self::zero(ring, nvars, prec);
        if prec >= 1 {
            s.terms.insert(Monomial::var(i, nvars), ring.one());
        }
        s
    }

    pub fn monomial(ring: &Ring, nvars: usize, prec: u32, m: Monomial, c: Coef) -> Self {
        let mut s = Self::zero(ring, nvars, prec);
        if !c.is_zero() && m.degree() <= prec {
            s.terms.insert(m, c);
        }
        s
    }

    pub fn from_terms(
        ring: &Ring,
        nvars: usize,
        prec: u32,
        terms: impl IntoIterator<Item = (Monomial, Coef)>,
    ) -> Result<Self> {
        let mut s = Self::zero(ring, nvars, prec);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            if m.degree() <= prec && !c.is_zero() {
                let cur = match s.terms.remove(&m) {
                    None => c,
                    Some(prev) => ring.add(&prev, &c)?,
                };
                if !cur.is_zero() {
                    s.terms.insert(m, cur);
                }
            }
        }
        Ok(s)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, m: &Monomial) -> Coef {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Coef {
        self.coef(&Monomial::unit(self.nvars))
    }

    /// Lowest total degree of a stored term, or None for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    fn compat(&self, other: &TruncSeries) -> Result<()> {
        if self.ring != other.ring || self.nvars != other.nvars {
            return Err(Error::RingMismatch {
                expected: format!("{} in {} vars", self.ring, self.nvars),
                found: format!("{} in {} vars", other.ring, other.nvars),
            });
        }
        Ok(())
    }

    /// Restrict to terms of total degree <= prec (never raises precision
    /// knowledge, only forgets).
    pub fn truncated(&self, prec: u32) -> TruncSeries {
        let prec = prec.min(self.prec);
        let mut s = Self::zero(&self.ring, self.nvars, prec);
        for (m, c) in &self.terms {
            if m.degree() <= prec {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.compat(other)?;
        let prec = self.prec.min(other.prec);
        let mut out = Self::zero(&self.ring, self.nvars, prec);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if m.degree() > prec {
                continue;
            }
            let cur = match out.terms.remove(m) {
                None => c.clone(),
                Some(prev) => self.ring.add(&prev, c)?,
            };
            if !cur.is_zero() {
                out.terms.insert(m.clone(), cur);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncSeries {
        let mut out = Self::zero(&self.ring, self.nvars, self.prec);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c).expect("same ring"));
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coef) -> Result<TruncSeries> {
        let mut out = Self::zero(&self.ring, self.nvars, self.prec);
        for (m, x) in &self.terms {
            let p = self.ring.mul(x, c)?;
            if !p.is_zero() {
                out.terms.insert(m.clone(), p);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.compat(other)?;
        let prec = self.prec.min(other.prec);
        let mut acc: BTreeMap<Monomial, Coef> = BTreeMap::new();
        // both maps iterate in increasing total degree, so the inner loop
        // can stop as soon as the degree budget is exceeded
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > prec {
                break;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > prec {
                    break;
                }
                let m = ma.mul(mb);
                let p = self.ring.mul(ca, cb)?;
                match acc.remove(&m) {
                    None => {
                        if !p.is_zero() {
                            acc.insert(m, p);
                        }
                    }
                    Some(prev) => {
                        let s = self.ring.add(&prev, &p)?;
                        if !s.is_zero() {
                            acc.insert(m, s);
                        }
                    }
                }
            }
        }
        Ok(TruncSeries { ring: self.ring.clone(), nvars: self.nvars, prec, terms: acc })
    }

    /// Substitute `images[i]` for variable `i`.  Images must have zero
    /// constant term; the result is truncated at the minimum of all
    /// involved precisions.
    pub fn substitute(&self, images: &[TruncSeries]) -> Result<TruncSeries> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target_vars = images.first().map_or(self.nvars, |s| s.nvars);
        let mut prec = self.prec;
        for (i, img) in images.iter().enumerate() {
            if !img.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: i });
            }
            prec = prec.min(img.prec);
        }
        let ring = images.first().map_or(&self.ring, |s| &s.ring);
        // cache powers of each image
        let mut pows: Vec<Vec<TruncSeries>> =
            (0..self.nvars).map(|_| vec![TruncSeries::one(ring, target_vars, prec)]).collect();
        let mut out = TruncSeries::zero(ring, target_vars, prec);
        for (m, c) in &self.terms {
            if m.degree() > prec {
                break;
            }
            let mut term = TruncSeries::constant(ring, target_vars, prec, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&images[i].truncated(prec))?;
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Linear change of variables `x_i -> sum_j A[i][j] x_j`.  Precision
    /// is preserved (linear substitution maps each degree to itself).
    pub fn change_vars(&self, a: &IntMatrix) -> Result<TruncSeries> {
        assert_eq!(a.rows, self.nvars);
        assert_eq!(a.cols, self.nvars);
        let images: Vec<TruncSeries> = (0..self.nvars)
            .map(|i| {
                let mut s = TruncSeries::zero(&self.ring, self.nvars, self.prec);
                for j in 0..self.nvars {
                    let c = self.ring.from_bigint(a[(i, j)].clone());
                    if !c.is_zero() && self.prec >= 1 {
                        s.terms.insert(Monomial::var(j, self.nvars), c);
                    }
                }
                s
            })
            .collect();
        self.substitute(&images)
    }

    /// Quotient by the coordinate `x_i` (exponent shift).  Fails with the
    /// witness monomial if some retained term omits `x_i`.
    pub fn divide_by_coordinate(&self, i: usize) -> Result<TruncSeries> {
        let prec = self.prec.checked_sub(1).ok_or(Error::PrecisionExhausted {
            needed: 1,
            available: 0,
        })?;
        let mut out = Self::zero(&self.ring, self.nvars, prec);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return Err(Error::NotDivisibleSeries {
                    degree: m.degree(),
                    witness: format!("{:?}", m.0),
                });
            }
            let mut e = m.clone();
            e.0[i] -= 1;
            if e.degree() <= prec {
                out.terms.insert(e, c.clone());
            }
        }
        // multiply-back: out * x_i == self to the output precision
        stats::record_division();
        let back = out.mul(&TruncSeries::variable(&self.ring, self.nvars, self.prec, i))?;
        assert!(
            back == self.truncated(prec),
            "coordinate division failed multiply-back verification"
        );
        stats::record_verification();
        Ok(out)
    }

    fn homogeneous_part(&self, d: u32) -> Vec<(Monomial, Coef)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// Exact division by a series `g` with zero constant term whose linear
    /// part is a regular integer constant times a unimodular row.  Costs
    /// one degree of precision.  The quotient is found by moving the
    /// linear part onto a single coordinate with a unimodular change of
    /// variables and solving degree by degree.
    pub fn exact_div_linear(&self, g: &TruncSeries) -> Result<TruncSeries> {
        self.compat(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !g.constant_term().is_zero() {
            return Err(Error::NotUnimodularLinearPart {
                detail: "divisor has a nonzero constant term".into(),
            });
        }
        let prec = self.prec.min(g.prec);
        let out_prec = prec.checked_sub(1).ok_or(Error::PrecisionExhausted {
            needed: 1,
            available: 0,
        })?;

        // integer row of linear coefficients
        let mut row: Vec<BigInt> = Vec::with_capacity(self.nvars);
        for j in 0..self.nvars {
            let c = g.coef(&Monomial::var(j, self.nvars));
            match self.ring.as_integer(&c) {
                Some(v) => row.push(v),
                None => {
                    return Err(Error::NotUnimodularLinearPart {
                        detail: format!(
                            "linear coefficient {} is not an integer multiple of 1",
                            self.ring.to_string_canonical(&c)
                        ),
                    })
                }
            }
        }
        let content = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if content.is_zero() {
            return Err(Error::NotUnimodularLinearPart {
                detail: "divisor has zero linear part".into(),
            });
        }
        let content_elem = self.ring.from_bigint(content.clone());
        if !self.ring.is_regular(&content_elem) {
            return Err(Error::NotUnimodularLinearPart {
                detail: format!("linear content {content} is not regular in {}", self.ring),
            });
        }
        let reduced: Vec<BigInt> = row.iter().map(|v| v / &content).collect();
        let basis = complete_unimodular_row(&reduced).expect("content-free row has gcd 1");
        let to_new = basis.inverse_unimodular().expect("unimodular");

        let f1 = self.truncated(prec).change_vars(&to_new)?;
        let g1 = g.truncated(prec).change_vars(&to_new)?;
        debug_assert_eq!(
            self.ring.as_integer(&g1.coef(&Monomial::var(0, self.nvars))),
            Some(content.clone())
        );

        let mut q = TruncSeries::zero(&self.ring, self.nvars, out_prec);
        let mut r = f1.clone();
        if !r.constant_term().is_zero() {
            return Err(Error::NotDivisibleSeries {
                degree: 0,
                witness: format!("{:?}", vec![0u32; self.nvars]),
            });
        }
        for m in 0..=out_prec {
            let h = r.homogeneous_part(m + 1);
            if h.is_empty() {
                continue;
            }
            // the cancellation term is kept at full precision so the
            // remainder keeps its top-degree information
            let mut qm = TruncSeries::zero(&self.ring, self.nvars, prec);
            for (mono, c) in h {
                if mono.0[0] == 0 {
                    return Err(Error::NotDivisibleSeries {
                        degree: m + 1,
                        witness: format!("{:?}", mono.0),
                    });
                }
                let c = if content.is_one() {
                    c
                } else {
                    self.ring.exact_div(&c, &content_elem).map_err(|_| {
                        Error::NotDivisibleSeries {
                            degree: m + 1,
                            witness: format!("{:?}", mono.0),
                        }
                    })?
                };
                let mut e = mono.clone();
                e.0[0] -= 1;
                qm.terms.insert(e, c);
            }
            r = r.sub(&qm.mul(&g1)?)?;
            q = q.add(&qm.truncated(out_prec))?;
        }
        if let Some((mono, _)) = r.terms.iter().next() {
            return Err(Error::NotDivisibleSeries {
                degree: mono.degree(),
                witness: format!("{:?}", mono.0),
            });
        }
        let out = q.change_vars(&basis)?;
        // multiply-back in the original coordinates
        stats::record_division();
        let back = out.mul(g)?;
        assert!(
            back == self.truncated(out_prec),
            "linear division failed multiply-back verification"
        );
        stats::record_verification();
        Ok(out)
    }

    /// Inverse of a series whose constant term is a unit; precision is
    /// preserved.
    pub fn invert_unit(&self) -> Result<TruncSeries> {
        let c0 = self.constant_term();
        let c0_inv = self.ring.inv_unit(&c0)?;
        let one = TruncSeries::one(&self.ring, self.nvars, self.prec);
        let mut q = TruncSeries::constant(&self.ring, self.nvars, self.prec, c0_inv.clone());
        let mut r = one.sub(&q.mul(self)?)?;
        for m in 1..=self.prec {
            let h = r.homogeneous_part(m);
            if h.is_empty() {
                continue;
            }
            let mut qm = TruncSeries::zero(&self.ring, self.nvars, self.prec);
            for (mono, c) in h {
                qm.terms.insert(mono, self.ring.mul(&c, &c0_inv)?);
            }
            r = r.sub(&qm.mul(self)?)?;
            q = q.add(&qm)?;
        }
        stats::record_division();
        let back = q.mul(self)?;
        assert!(back == one, "unit inversion failed multiply-back verification");
        stats::record_verification();
        Ok(q)
    }

    /// Serialization with terms in graded-lexicographic order; golden
    /// files depend on this byte layout.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "exp": m.0,
                    "coef": self.ring.to_string_canonical(c),
                })
            })
            .collect();
        serde_json::json!({ "prec": self.prec, "terms": terms })
    }
}

impl std::fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(deg {})", self.prec + 1);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                    .collect();
                let cs = self.ring.to_string_canonical(c);
                if mono.is_empty() {
                    cs
                } else if cs == "1" {
                    mono.join("*")
                } else {
                    format!("({cs})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{} + O(deg {})", parts.join(" + "), self.prec + 1)
    }
}
