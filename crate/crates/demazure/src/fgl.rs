//! Formal group laws as validated bivariate truncated series, together
//! with the derived univariate series the operator calculus consumes:
//! the formal inverse, integer multiples and their coordinate quotients,
//! the bivariate quotient G(u,v) = (F(u,v) - u)/v, and the kappa series.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::{Coef, Monomial, Ring};
use crate::series::TruncSeries;

#[derive(Debug, Clone)]
pub struct FormalGroupLaw {
    ring: Ring,
    prec: u32,
    /// F(u, v) in two variables.
    f: TruncSeries,
    inverse: TruncSeries,
    /// Inverse of the unit i(t)/t, so that 1/i(t) = inverse_quot_inv(t)/t.
    inverse_quot_inv: TruncSeries,
    quotient_g: TruncSeries,
    kappa: TruncSeries,
    multiples: BTreeMap<i64, TruncSeries>,
    psis: BTreeMap<i64, TruncSeries>,
}

impl FormalGroupLaw {
    /// F(u,v) = u + v.
    pub fn additive(ring: &Ring, prec: u32, cache_to: i64) -> Result<Self> {
        let u = TruncSeries::variable(ring, 2, prec, 0);
        let v = TruncSeries::variable(ring, 2, prec, 1);
        Self::custom(u.add(&v)?, cache_to)
    }

    /// F(u,v) = u + v - beta*u*v.
    pub fn multiplicative(ring: &Ring, prec: u32, beta: &Coef, cache_to: i64) -> Result<Self> {
        let u = TruncSeries::variable(ring, 2, prec, 0);
        let v = TruncSeries::variable(ring, 2, prec, 1);
        let uv = u.mul(&v)?.scale(beta)?;
        Self::custom(u.add(&v)?.sub(&uv)?, cache_to)
    }

    /// Any bivariate series; the unit, commutativity and associativity
    /// axioms are verified to the series precision.
    pub fn custom(f: TruncSeries, cache_to: i64) -> Result<Self> {
        assert_eq!(f.nvars(), 2, "a formal group law is bivariate");
        let ring = f.ring().clone();
        let prec = f.prec();
        check_axioms(&f)?;

        let inverse = solve_inverse(&f)?;
        let inverse_quot_inv = inverse.divide_by_coordinate(0)?.invert_unit()?;
        let quotient_g = {
            // F(u,0) = u, so every term of F - u contains v
            let u = TruncSeries::variable(&ring, 2, prec, 0);
            f.sub(&u)?.divide_by_coordinate(1)?
        };

        let mut law = FormalGroupLaw {
            ring,
            prec,
            f,
            inverse,
            inverse_quot_inv,
            quotient_g,
            kappa: TruncSeries::zero(&Ring::integers(), 1, 0),
            multiples: BTreeMap::new(),
            psis: BTreeMap::new(),
        };
        law.kappa = law.compute_kappa()?;
        let mut multiples = BTreeMap::new();
        let mut psis = BTreeMap::new();
        for m in -cache_to.abs()..=cache_to.abs() {
            let mult = law.compute_multiple(m)?;
            psis.insert(m, law.compute_psi(&mult)?);
            multiples.insert(m, mult);
        }
        law.multiples = multiples;
        law.psis = psis;
        Ok(law)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn series(&self) -> &TruncSeries {
        &self.f
    }

    /// The series i(x) with F(x, i(x)) = 0; i = -x + O(x^2).
    pub fn formal_inverse(&self) -> &TruncSeries {
        &self.inverse
    }

    /// The unit series U with 1/i(t) = U(t)/t; U(0) = -1.
    pub fn inverse_quot_inv(&self) -> &TruncSeries {
        &self.inverse_quot_inv
    }

    /// G(u,v) with v*G(u,v) = F(u,v) - u; G(0,0) = 1.
    pub fn quotient_g(&self) -> &TruncSeries {
        &self.quotient_g
    }

    /// k(t) = (t + i(t)) / (t * i(t)), a genuine series; k(0) is the
    /// negated uv-coefficient of F.
    pub fn kappa_series(&self) -> &TruncSeries {
        &self.kappa
    }

    /// m-fold formal sum of x with itself (negative m through the formal
    /// inverse).  Cached values are returned by reference-clone; values
    /// outside the cache are computed on the fly.
    pub fn multiple(&self, m: i64) -> TruncSeries {
        match self.multiples.get(&m) {
            Some(s) => s.clone(),
            None => self.compute_multiple(m).expect("multiple computation cannot fail"),
        }
    }

    /// psi_m = (m-fold sum of x) / x; psi_m(0) = m.
    pub fn psi(&self, m: i64) -> TruncSeries {
        match self.psis.get(&m) {
            Some(s) => s.clone(),
            None => {
                let mult = self.compute_multiple(m).expect("multiple computation cannot fail");
                self.compute_psi(&mult).expect("psi computation cannot fail")
            }
        }
    }

    /// F applied to two series (same variable space, zero constant terms).
    pub fn formal_sum(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
        self.f.substitute(&[a.clone(), b.clone()])
    }

    fn compute_multiple(&self, m: i64) -> Result<TruncSeries> {
        let x = TruncSeries::variable(&self.ring, 1, self.prec, 0);
        if m == 0 {
            return Ok(TruncSeries::zero(&self.ring, 1, self.prec));
        }
        let n = m.unsigned_abs();
        let mut acc = x.clone();
        for _ in 1..n {
            acc = self.formal_sum(&acc, &x)?;
        }
        if m < 0 {
            // formal inverse of the m-fold sum
            acc = self.inverse.substitute(&[acc])?;
        }
        Ok(acc)
    }

    fn compute_psi(&self, mult: &TruncSeries) -> Result<TruncSeries> {
        if mult.is_zero() {
            // psi_0 = 0 at the ledger precision of a coordinate division
            return Ok(TruncSeries::zero(&self.ring, 1, self.prec.saturating_sub(1)));
        }
        mult.divide_by_coordinate(0)
    }

    fn compute_kappa(&self) -> Result<TruncSeries> {
        // k = (t + i(t)) / t^2 divided by (i(t)/t); the latter is a unit
        // with constant term -1 over any ring.
        let t = TruncSeries::variable(&self.ring, 1, self.prec, 0);
        let num = t.add(&self.inverse)?;
        let num = if num.is_zero() {
            TruncSeries::zero(&self.ring, 1, self.prec.saturating_sub(2))
        } else {
            num.divide_by_coordinate(0)?.divide_by_coordinate(0)?
        };
        let unit = self.inverse.divide_by_coordinate(0)?.invert_unit()?;
        num.mul(&unit)
    }
}

fn check_axioms(f: &TruncSeries) -> Result<()> {
    let ring = f.ring();
    let prec = f.prec();
    let u = TruncSeries::variable(ring, 2, prec, 0);
    let v = TruncSeries::variable(ring, 2, prec, 1);
    let zero2 = TruncSeries::zero(ring, 2, prec);

    // F(u, 0) = u and F(0, v) = v
    let fu0 = f.substitute(&[u.clone(), zero2.clone()])?;
    if fu0 != u {
        return Err(axiom_fail("unit F(u,0)=u", &fu0.sub(&u)?));
    }
    let f0v = f.substitute(&[zero2, v.clone()])?;
    if f0v != v {
        return Err(axiom_fail("unit F(0,v)=v", &f0v.sub(&v)?));
    }

    // commutativity
    let swapped = f.substitute(&[v.clone(), u.clone()])?;
    if swapped != *f {
        return Err(axiom_fail("commutativity F(u,v)=F(v,u)", &swapped.sub(f)?));
    }

    // associativity in three variables
    let u3 = TruncSeries::variable(ring, 3, prec, 0);
    let v3 = TruncSeries::variable(ring, 3, prec, 1);
    let w3 = TruncSeries::variable(ring, 3, prec, 2);
    let fuv = f.substitute(&[u3.clone(), v3.clone()])?;
    let fvw = f.substitute(&[v3, w3.clone()])?;
    let left = f.substitute(&[fuv, w3])?;
    let right = f.substitute(&[u3, fvw])?;
    if left != right {
        return Err(axiom_fail("associativity", &left.sub(&right)?));
    }
    Ok(())
}

fn axiom_fail(axiom: &str, difference: &TruncSeries) -> Error {
    Error::AxiomViolation {
        axiom: axiom.to_string(),
        degree: difference.valuation().unwrap_or(0),
    }
}

/// Specification of a law in configs.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FglSpec {
    Additive,
    Multiplicative { beta: String },
    Custom { terms: Vec<CustomTerm>, prec: Option<u32> },
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct CustomTerm {
    pub exp: [u32; 2],
    pub coef: String,
}

impl FglSpec {
    pub fn build(&self, ring: &Ring, prec: u32, cache_to: i64) -> Result<FormalGroupLaw> {
        match self {
            FglSpec::Additive => FormalGroupLaw::additive(ring, prec, cache_to),
            FglSpec::Multiplicative { beta } => {
                let beta = ring.parse_coef(beta)?;
                FormalGroupLaw::multiplicative(ring, prec, &beta, cache_to)
            }
            FglSpec::Custom { terms, prec: tprec } => {
                let prec = tprec.unwrap_or(prec).min(prec);
                let mut pairs = Vec::new();
                for t in terms {
                    pairs.push((Monomial(t.exp.to_vec()), ring.parse_coef(&t.coef)?));
                }
                let f = TruncSeries::from_terms(ring, 2, prec, pairs)?;
                FormalGroupLaw::custom(f, cache_to)
            }
        }
    }
}

/// Truncation of the "velocity addition" law F = (u + v) / (1 + a*u*v):
/// a genuine one-parameter law that is neither additive nor
/// multiplicative in these coordinates, handy as a test law.
pub fn lorentz_law(ring: &Ring, prec: u32, a: &Coef, cache_to: i64) -> Result<FormalGroupLaw> {
    let u = TruncSeries::variable(ring, 2, prec, 0);
    let v = TruncSeries::variable(ring, 2, prec, 1);
    let auv = u.mul(&v)?.scale(a)?;
    let geom = TruncSeries::one(ring, 2, prec).add(&auv)?.invert_unit()?;
    FormalGroupLaw::custom(u.add(&v)?.mul(&geom)?, cache_to)
}


fn solve_inverse(f: &TruncSeries) -> Result<TruncSeries> {
    let ring = f.ring();
    let prec = f.prec();
    let x = TruncSeries::variable(ring, 1, prec, 0);
    let mut inv = x.neg();
    // Newton-style degree peeling: the residual F(x, inv) determines the
    // next coefficient directly because dF/dv = 1 + higher terms.
    for _ in 2..=prec {
        let residual = f.substitute(&[x.clone(), inv.clone()])?;
        if residual.is_zero() {
            break;
        }
        inv = inv.sub(&residual)?;
    }
    let residual = f.substitute(&[x.clone(), inv.clone()])?;
    debug_assert!(residual.is_zero(), "inverse solve left a residual");
    Ok(inv)
}
