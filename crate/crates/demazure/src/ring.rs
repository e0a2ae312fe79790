//! Exact coefficient rings: integers, integers mod m, integers with a
//! finite set of inverted primes, and one layer of polynomial variables
//! over any of those.
//!
//! Elements are kept in canonical normal form at all times: residues
//! reduced into `[0, m)`, fractions reduced with positive denominators
//! built from the allowed primes, polynomials with no stored zero
//! coefficients.  All operations are exact; `exact_div` either returns a
//! true quotient or reports `NotDivisibleRing`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector with graded-lexicographic ordering (total degree
/// first, then lexicographic on the exponents).  Shared between ring
/// polynomials and truncated power series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Description of a supported coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Integers,
    IntegersMod { m: u64 },
    IntegersInv { primes: Vec<u64> },
    Poly {
        base: Box<RingDescriptor>,
        vars: Vec<String>,
    },
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::IntegersMod { m } => write!(f, "Z/{m}"),
            RingDescriptor::IntegersInv { primes } => {
                let inv: Vec<String> = primes.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "Z[{}]", inv.join(","))
            }
            RingDescriptor::Poly { base, vars } => write!(f, "{}[{}]", base, vars.join(",")),
        }
    }
}

/// Internal representation of a ring element, interpreted relative to a
/// `Ring`.  Kept canonical by the `Ring` operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coef {
    Int(BigInt),
    /// Residue in `[0, m)`.
    Mod(BigInt),
    /// Reduced fraction, positive denominator, denominator a product of
    /// the allowed primes.
    Frac(BigInt, BigInt),
    /// Sparse polynomial over the base representation, no zero
    /// coefficients stored.
    Poly(BTreeMap<Monomial, Coef>),
}

impl Coef {
    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Int(a) | Coef::Mod(a) => a.is_zero(),
            Coef::Frac(n, _) => n.is_zero(),
            Coef::Poly(t) => t.is_empty(),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A coefficient ring: the descriptor plus all arithmetic.  Cheap to
/// clone; values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    desc: Arc<RingDescriptor>,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.desc.fmt(f)
    }
}

impl Ring {
    pub fn new(desc: RingDescriptor) -> Result<Ring> {
        Self::validate(&desc, true)?;
        Ok(Ring { desc: Arc::new(desc) })
    }

    pub fn integers() -> Ring {
        Ring::new(RingDescriptor::Integers).unwrap()
    }

    pub fn integers_mod(m: u64) -> Result<Ring> {
        Ring::new(RingDescriptor::IntegersMod { m })
    }

    pub fn integers_inv(primes: &[u64]) -> Result<Ring> {
        Ring::new(RingDescriptor::IntegersInv { primes: primes.to_vec() })
    }

    pub fn poly(base: &Ring, vars: &[&str]) -> Result<Ring> {
        Ring::new(RingDescriptor::Poly {
            base: Box::new(base.descriptor().clone()),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn validate(desc: &RingDescriptor, allow_poly: bool) -> Result<()> {
        match desc {
            RingDescriptor::Integers => Ok(()),
            RingDescriptor::IntegersMod { m } => {
                if *m < 2 {
                    return Err(Error::UnknownType {
                        detail: format!("modulus {m} must be at least 2"),
                    });
                }
                Ok(())
            }
            RingDescriptor::IntegersInv { primes } => {
                for &p in primes {
                    if !is_prime(p) {
                        return Err(Error::UnknownType {
                            detail: format!("{p} is not prime"),
                        });
                    }
                }
                Ok(())
            }
            RingDescriptor::Poly { base, vars } => {
                if !allow_poly {
                    return Err(Error::UnknownType {
                        detail: "polynomial rings nest at most one level".into(),
                    });
                }
                let mut seen = vars.clone();
                seen.sort();
                seen.dedup();
                if seen.len() != vars.len() || vars.is_empty() {
                    return Err(Error::UnknownType {
                        detail: "polynomial variable names must be distinct and nonempty".into(),
                    });
                }
                Self::validate(base, false)
            }
        }
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.desc
    }

    fn base_ring(&self) -> Ring {
        match &*self.desc {
            RingDescriptor::Poly { base, .. } => Ring { desc: Arc::new((**base).clone()) },
            _ => self.clone(),
        }
    }

    fn poly_nvars(&self) -> usize {
        match &*self.desc {
            RingDescriptor::Poly { vars, .. } => vars.len(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> Coef {
        match &*self.desc {
            RingDescriptor::Integers => Coef::Int(BigInt::zero()),
            RingDescriptor::IntegersMod { .. } => Coef::Mod(BigInt::zero()),
            RingDescriptor::IntegersInv { .. } => Coef::Frac(BigInt::zero(), BigInt::one()),
            RingDescriptor::Poly { .. } => Coef::Poly(BTreeMap::new()),
        }
    }

    pub fn one(&self) -> Coef {
        self.from_bigint(BigInt::one())
    }

    pub fn from_int(&self, v: i64) -> Coef {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(&self, v: BigInt) -> Coef {
        match &*self.desc {
            RingDescriptor::Integers => Coef::Int(v),
            RingDescriptor::IntegersMod { m } => {
                Coef::Mod(v.mod_floor(&BigInt::from(*m)))
            }
            RingDescriptor::IntegersInv { .. } => Coef::Frac(v, BigInt::one()),
            RingDescriptor::Poly { base, vars } => {
                let base_ring = Ring { desc: Arc::new((**base).clone()) };
                let c = base_ring.from_bigint(v);
                let mut t = BTreeMap::new();
                if !c.is_zero() {
                    t.insert(Monomial::unit(vars.len()), c);
                }
                Coef::Poly(t)
            }
        }
    }

    /// The generator named `name` in a polynomial ring.
    pub fn var(&self, name: &str) -> Result<Coef> {
        match &*self.desc {
            RingDescriptor::Poly { base, vars } => {
                let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownType {
                    detail: format!("no polynomial variable named {name}"),
                })?;
                let base_ring = Ring { desc: Arc::new((**base).clone()) };
                let mut t = BTreeMap::new();
                t.insert(Monomial::var(i, vars.len()), base_ring.one());
                Ok(Coef::Poly(t))
            }
            _ => Err(Error::UnknownType {
                detail: format!("{self} has no polynomial variables"),
            }),
        }
    }

    fn mismatch(&self, c: &Coef) -> Error {
        Error::RingMismatch {
            expected: self.to_string(),
            found: format!("{c:?}"),
        }
    }

    fn check(&self, c: &Coef) -> Result<()> {
        let ok = matches!(
            (&*self.desc, c),
            (RingDescriptor::Integers, Coef::Int(_))
                | (RingDescriptor::IntegersMod { .. }, Coef::Mod(_))
                | (RingDescriptor::IntegersInv { .. }, Coef::Frac(..))
                | (RingDescriptor::Poly { .. }, Coef::Poly(_))
        );
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(c))
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Result<Coef> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (&*self.desc, a, b) {
            (RingDescriptor::Integers, Coef::Int(x), Coef::Int(y)) => Coef::Int(x + y),
            (RingDescriptor::IntegersMod { m }, Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod((x + y).mod_floor(&BigInt::from(*m)))
            }
            (RingDescriptor::IntegersInv { .. }, Coef::Frac(xn, xd), Coef::Frac(yn, yd)) => {
                self.reduce_frac(xn * yd + yn * xd, xd * yd)
            }
            (RingDescriptor::Poly { .. }, Coef::Poly(xt), Coef::Poly(yt)) => {
                let base = self.base_ring();
                let mut t = xt.clone();
                for (m, c) in yt {
                    match t.remove(m) {
                        None => {
                            t.insert(m.clone(), c.clone());
                        }
                        Some(existing) => {
                            let s = base.add(&existing, c)?;
                            if !s.is_zero() {
                                t.insert(m.clone(), s);
                            }
                        }
                    }
                }
                Coef::Poly(t)
            }
            _ => unreachable!(),
        })
    }

    pub fn neg(&self, a: &Coef) -> Result<Coef> {
        self.check(a)?;
        Ok(match (&*self.desc, a) {
            (RingDescriptor::Integers, Coef::Int(x)) => Coef::Int(-x),
            (RingDescriptor::IntegersMod { m }, Coef::Mod(x)) => {
                Coef::Mod((-x).mod_floor(&BigInt::from(*m)))
            }
            (RingDescriptor::IntegersInv { .. }, Coef::Frac(n, d)) => Coef::Frac(-n, d.clone()),
            (RingDescriptor::Poly { .. }, Coef::Poly(t)) => {
                let base = self.base_ring();
                let mut out = BTreeMap::new();
                for (m, c) in t {
                    out.insert(m.clone(), base.neg(c)?);
                }
                Coef::Poly(out)
            }
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Result<Coef> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Result<Coef> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (&*self.desc, a, b) {
            (RingDescriptor::Integers, Coef::Int(x), Coef::Int(y)) => Coef::Int(x * y),
            (RingDescriptor::IntegersMod { m }, Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod((x * y).mod_floor(&BigInt::from(*m)))
            }
            (RingDescriptor::IntegersInv { .. }, Coef::Frac(xn, xd), Coef::Frac(yn, yd)) => {
                self.reduce_frac(xn * yn, xd * yd)
            }
            (RingDescriptor::Poly { .. }, Coef::Poly(xt), Coef::Poly(yt)) => {
                let base = self.base_ring();
                let mut t: BTreeMap<Monomial, Coef> = BTreeMap::new();
                for (mx, cx) in xt {
                    for (my, cy) in yt {
                        let m = mx.mul(my);
                        let p = base.mul(cx, cy)?;
                        match t.remove(&m) {
                            None => {
                                if !p.is_zero() {
                                    t.insert(m, p);
                                }
                            }
                            Some(existing) => {
                                let s = base.add(&existing, &p)?;
                                if !s.is_zero() {
                                    t.insert(m, s);
                                }
                            }
                        }
                    }
                }
                Coef::Poly(t)
            }
            _ => unreachable!(),
        })
    }

    fn reduce_frac(&self, mut n: BigInt, mut d: BigInt) -> Coef {
        debug_assert!(!d.is_zero());
        if n.is_zero() {
            return Coef::Frac(BigInt::zero(), BigInt::one());
        }
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        Coef::Frac(n / &g, d / g)
    }

    /// Exact division: a quotient `q` with `q * b == a`, or
    /// `NotDivisibleRing`.  In non-domains the canonical (smallest under
    /// the normal-form order) solution is returned.
    pub fn exact_div(&self, a: &Coef, b: &Coef) -> Result<Coef> {
        self.check(a)?;
        self.check(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (&*self.desc, a, b) {
            (RingDescriptor::Integers, Coef::Int(x), Coef::Int(y)) => {
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Ok(Coef::Int(q))
                } else {
                    Err(self.not_divisible(a, b))
                }
            }
            (RingDescriptor::IntegersMod { m }, Coef::Mod(x), Coef::Mod(y)) => {
                // Solve q*y = x mod m: canonical smallest nonnegative q.
                let m = BigInt::from(*m);
                let g = y.gcd(&m);
                if !(x % &g).is_zero() {
                    return Err(self.not_divisible(a, b));
                }
                let m1 = &m / &g;
                let y1 = y / &g;
                let x1 = x / &g;
                let inv = modular_inverse(&y1, &m1).expect("y/g is invertible mod m/g");
                Ok(Coef::Mod((x1 * inv).mod_floor(&m1)))
            }
            (RingDescriptor::IntegersInv { primes }, Coef::Frac(xn, xd), Coef::Frac(yn, yd)) => {
                let q = self.reduce_frac(xn * yd, xd * yn);
                if let Coef::Frac(_, d) = &q {
                    if denominator_allowed(d, primes) {
                        return Ok(q);
                    }
                }
                Err(self.not_divisible(a, b))
            }
            (RingDescriptor::Poly { base, .. }, Coef::Poly(_), Coef::Poly(_)) => {
                match self.poly_exact_div(a, b) {
                    Ok(q) => Ok(q),
                    Err(e) => {
                        // Leading-term division is complete over domain
                        // bases, but over Z/m a regular divisor can have a
                        // nilpotent leading coefficient (e.g. 2t+1 over
                        // Z/4).  Fall back to a bounded linear solve.
                        if let RingDescriptor::IntegersMod { m } = &**base {
                            self.poly_div_modular(a, b, *m).ok_or(e)
                        } else {
                            Err(e)
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    /// Solve q*b = a over (Z/m)[vars] as a linear system in the
    /// coefficients of q, raising the degree bound up to the nilpotency
    /// headroom of m.  Returns the canonical (SNF-parameterized) solution.
    fn poly_div_modular(&self, a: &Coef, b: &Coef, m: u64) -> Option<Coef> {
        use crate::intlinalg::{solve_linear, IntMatrix};
        let (at, bt) = match (a, b) {
            (Coef::Poly(at), Coef::Poly(bt)) => (at, bt),
            _ => unreachable!(),
        };
        let nvars = self.poly_nvars();
        let deg = |t: &BTreeMap<Monomial, Coef>| t.keys().map(|k| k.degree()).max().unwrap_or(0);
        let lift = |c: &Coef| match c {
            Coef::Mod(x) => x.clone(),
            _ => unreachable!(),
        };
        let nil = {
            let mut v = m;
            let mut p = 2u64;
            let mut worst = 1u32;
            while v > 1 {
                if v % p == 0 {
                    let mut k = 0u32;
                    while v % p == 0 {
                        v /= p;
                        k += 1;
                    }
                    worst = worst.max(k);
                }
                p += 1;
            }
            worst
        };
        let bound = deg(at) + nil * deg(bt).max(1) + 1;
        let monos_to = |d: u32| -> Vec<Monomial> {
            let mut out = vec![Monomial::unit(nvars)];
            let mut frontier = out.clone();
            for _ in 0..d {
                let mut next = Vec::new();
                for mono in &frontier {
                    for i in 0..nvars {
                        let mut e = mono.clone();
                        e.0[i] += 1;
                        if !out.contains(&e) {
                            out.push(e.clone());
                            next.push(e);
                        }
                    }
                }
                frontier = next;
            }
            out.sort();
            out
        };
        let modulus = BigInt::from(m);
        for d in 0..=bound {
            let cols = monos_to(d);
            let rows = monos_to(d + deg(bt));
            let mat = IntMatrix::from_fn(rows.len(), cols.len(), |i, j| {
                if cols[j].divides(&rows[i]) {
                    let need = cols[j].quotient(&rows[i]);
                    bt.get(&need).map(&lift).unwrap_or_default()
                } else {
                    BigInt::zero()
                }
            });
            let rhs: Vec<BigInt> = rows
                .iter()
                .map(|mono| at.get(mono).map(&lift).unwrap_or_default())
                .collect();
            if let Ok(x) = solve_linear(&mat, &rhs, Some(&modulus)) {
                let mut terms = BTreeMap::new();
                for (j, mono) in cols.iter().enumerate() {
                    let r = x[j].mod_floor(&modulus);
                    if !r.is_zero() {
                        terms.insert(mono.clone(), Coef::Mod(r));
                    }
                }
                let q = Coef::Poly(terms);
                if self.mul(&q, b).ok()? == *a {
                    return Some(q);
                }
            }
        }
        None
    }

    /// Leading-term polynomial division in graded-lex order.  Complete
    /// over domain bases; over Z/m the canonical per-step choice is used.
    fn poly_exact_div(&self, a: &Coef, b: &Coef) -> Result<Coef> {
        let base = self.base_ring();
        let bt = match b {
            Coef::Poly(t) => t,
            _ => unreachable!(),
        };
        let (bm, bc) = bt.iter().next_back().expect("b is nonzero");
        let mut rem = a.clone();
        let mut quot: BTreeMap<Monomial, Coef> = BTreeMap::new();
        loop {
            let rt = match &rem {
                Coef::Poly(t) => t,
                _ => unreachable!(),
            };
            let Some((rm, rc)) = rt.iter().next_back() else {
                return Ok(Coef::Poly(quot));
            };
            if !bm.divides(rm) {
                return Err(self.not_divisible(a, b));
            }
            let qc = base
                .exact_div(rc, bc)
                .map_err(|_| self.not_divisible(a, b))?;
            let qm = bm.quotient(rm);
            let mut term = BTreeMap::new();
            term.insert(qm.clone(), qc.clone());
            let term = Coef::Poly(term);
            let prod = self.mul(&term, b)?;
            rem = self.sub(&rem, &prod)?;
            quot.insert(qm, qc);
        }
    }

    fn not_divisible(&self, a: &Coef, b: &Coef) -> Error {
        Error::NotDivisibleRing {
            a: self.to_string_canonical(a),
            b: self.to_string_canonical(b),
        }
    }

    /// True iff multiplication by `a` is injective.
    ///
    /// For polynomials over Z/m this is the McCoy content criterion:
    /// a nonzero annihilator exists exactly when gcd(m, content) > 1.
    pub fn is_regular(&self, a: &Coef) -> bool {
        match (&*self.desc, a) {
            (RingDescriptor::Integers, Coef::Int(x)) => !x.is_zero(),
            (RingDescriptor::IntegersMod { m }, Coef::Mod(x)) => {
                x.gcd(&BigInt::from(*m)).is_one()
            }
            (RingDescriptor::IntegersInv { .. }, Coef::Frac(n, _)) => !n.is_zero(),
            (RingDescriptor::Poly { base, .. }, Coef::Poly(t)) => match &**base {
                RingDescriptor::Integers | RingDescriptor::IntegersInv { .. } => !t.is_empty(),
                RingDescriptor::IntegersMod { m } => {
                    let mut g = BigInt::from(*m);
                    for c in t.values() {
                        if let Coef::Mod(x) = c {
                            g = g.gcd(x);
                        }
                    }
                    !t.is_empty() && g.is_one()
                }
                RingDescriptor::Poly { .. } => unreachable!("nesting depth is 1"),
            },
            _ => false,
        }
    }

    pub fn is_unit(&self, a: &Coef) -> bool {
        self.inv_unit(a).is_ok()
    }

    /// Multiplicative inverse of a unit.
    pub fn inv_unit(&self, a: &Coef) -> Result<Coef> {
        self.check(a)?;
        let non_unit = || Error::NonUnitConstantTerm {
            term: self.to_string_canonical(a),
        };
        match (&*self.desc, a) {
            (RingDescriptor::Integers, Coef::Int(x)) => {
                if x.abs().is_one() {
                    Ok(Coef::Int(x.clone()))
                } else {
                    Err(non_unit())
                }
            }
            (RingDescriptor::IntegersMod { m }, Coef::Mod(x)) => {
                modular_inverse(x, &BigInt::from(*m))
                    .map(Coef::Mod)
                    .ok_or_else(non_unit)
            }
            (RingDescriptor::IntegersInv { primes }, Coef::Frac(n, d)) => {
                if n.is_zero() || !denominator_allowed(&n.abs(), primes) {
                    return Err(non_unit());
                }
                Ok(self.reduce_frac(d.clone(), n.clone()))
            }
            (RingDescriptor::Poly { base, vars }, Coef::Poly(t)) => {
                // Unit iff the constant term is a unit and every other
                // coefficient is nilpotent; Newton iteration converges in
                // that case and hits a fixed point.
                let base_ring = Ring { desc: Arc::new((**base).clone()) };
                let unitm = Monomial::unit(vars.len());
                let c0 = t.get(&unitm).ok_or_else(non_unit)?;
                let c0_inv = base_ring.inv_unit(c0).map_err(|_| non_unit())?;
                let mut inv = {
                    let mut m = BTreeMap::new();
                    m.insert(unitm, c0_inv);
                    Coef::Poly(m)
                };
                let one = self.one();
                let two = self.from_int(2);
                // Nilpotency gives quadratic convergence; degree growth is
                // bounded, so cap the iterations and verify at the end.
                for _ in 0..64 {
                    let prod = self.mul(a, &inv)?;
                    if prod == one {
                        return Ok(inv);
                    }
                    let corr = self.sub(&two, &prod)?;
                    inv = self.mul(&inv, &corr)?;
                }
                Err(non_unit())
            }
            _ => unreachable!(),
        }
    }

    /// The integer `n` such that `a = n * 1`, if there is one.
    pub fn as_integer(&self, a: &Coef) -> Option<BigInt> {
        match a {
            Coef::Int(x) => Some(x.clone()),
            Coef::Mod(x) => Some(x.clone()),
            Coef::Frac(n, d) => d.is_one().then(|| n.clone()),
            Coef::Poly(t) => {
                if t.is_empty() {
                    return Some(BigInt::zero());
                }
                if t.len() == 1 {
                    let (m, c) = t.iter().next().unwrap();
                    if m.degree() == 0 {
                        return self.base_ring().as_integer(c);
                    }
                }
                None
            }
        }
    }

    /// Canonical display form; polynomial terms in descending grlex order.
    pub fn to_string_canonical(&self, a: &Coef) -> String {
        match (&*self.desc, a) {
            (_, Coef::Int(x)) | (_, Coef::Mod(x)) => x.to_string(),
            (_, Coef::Frac(n, d)) => {
                if d.is_one() {
                    n.to_string()
                } else {
                    format!("{n}/{d}")
                }
            }
            (RingDescriptor::Poly { vars, .. }, Coef::Poly(t)) => {
                if t.is_empty() {
                    return "0".into();
                }
                let base = self.base_ring();
                let mut parts = Vec::new();
                for (m, c) in t.iter().rev() {
                    let cs = base.to_string_canonical(c);
                    let mono: Vec<String> = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| {
                            if e == 1 {
                                vars[i].clone()
                            } else {
                                format!("{}^{}", vars[i], e)
                            }
                        })
                        .collect();
                    let term = if mono.is_empty() {
                        cs
                    } else if cs == "1" {
                        mono.join("*")
                    } else if cs == "-1" {
                        format!("-{}", mono.join("*"))
                    } else {
                        format!("{}*{}", cs, mono.join("*"))
                    };
                    parts.push(term);
                }
                let mut out = parts[0].clone();
                for p in &parts[1..] {
                    if let Some(stripped) = p.strip_prefix('-') {
                        out.push_str(" - ");
                        out.push_str(stripped);
                    } else {
                        out.push_str(" + ");
                        out.push_str(p);
                    }
                }
                out
            }
            _ => unreachable!(),
        }
    }

    /// Parse a constant: an integer literal, a fraction `n/d`, or a bare
    /// polynomial variable name.
    pub fn parse_coef(&self, text: &str) -> Result<Coef> {
        let text = text.trim();
        if let Ok(v) = text.parse::<BigInt>() {
            return Ok(self.from_bigint(v));
        }
        if let Some((n, d)) = text.split_once('/') {
            if let (Ok(n), Ok(d)) = (n.trim().parse::<BigInt>(), d.trim().parse::<BigInt>()) {
                if let RingDescriptor::IntegersInv { primes } = &*self.desc {
                    let q = self.reduce_frac(n, d);
                    if let Coef::Frac(_, den) = &q {
                        if denominator_allowed(den, primes) {
                            return Ok(q);
                        }
                    }
                }
                return Err(Error::UnknownType {
                    detail: format!("fraction {text} is not an element of {self}"),
                });
            }
        }
        self.var(text)
    }

    /// JSON form of a standalone element: `{"ring": ..., "value": ...}`.
    pub fn elem_to_json(&self, a: &Coef) -> serde_json::Value {
        serde_json::json!({
            "ring": self.descriptor(),
            "value": self.to_string_canonical(a),
        })
    }
}

fn denominator_allowed(d: &BigInt, primes: &[u64]) -> bool {
    let mut d = d.clone();
    for &p in primes {
        let p = BigInt::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    d.is_one()
}

fn modular_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_arithmetic() {
        let z = Ring::integers();
        let five = z.add(&z.from_int(2), &z.from_int(3)).unwrap();
        assert_eq!(five, z.from_int(5));
        assert_eq!(z.exact_div(&z.from_int(6), &z.from_int(2)).unwrap(), z.from_int(3));
        assert!(z.exact_div(&z.from_int(3), &z.from_int(2)).is_err());
        assert!(z.is_regular(&z.from_int(-7)));
        assert!(!z.is_regular(&z.zero()));
    }

    #[test]
    fn mod_arithmetic() {
        let z3 = Ring::integers_mod(3).unwrap();
        assert_eq!(z3.mul(&z3.from_int(2), &z3.from_int(2)).unwrap(), z3.from_int(1));
        let z4 = Ring::integers_mod(4).unwrap();
        // canonical solution of 2q = 2 mod 4 is q = 1
        assert_eq!(z4.exact_div(&z4.from_int(2), &z4.from_int(2)).unwrap(), z4.from_int(1));
        assert!(!z4.is_regular(&z4.from_int(2)));
        assert!(z4.exact_div(&z4.from_int(1), &z4.from_int(2)).is_err());
    }

    #[test]
    fn inverted_primes() {
        let r = Ring::integers_inv(&[2]).unwrap();
        let half = r.exact_div(&r.one(), &r.from_int(2)).unwrap();
        assert_eq!(half, Coef::Frac(BigInt::from(1), BigInt::from(2)));
        assert!(r.exact_div(&r.one(), &r.from_int(3)).is_err());
        assert!(r.is_unit(&r.from_int(-4)));
        assert!(!r.is_unit(&r.from_int(6)));
        assert!(Ring::integers_inv(&[4]).is_err());
    }

    #[test]
    fn poly_arithmetic() {
        let r = Ring::poly(&Ring::integers(), &["b"]).unwrap();
        let b = r.var("b").unwrap();
        let b2 = r.mul(&b, &b).unwrap();
        assert_eq!(r.to_string_canonical(&b2), "b^2");
        let q = r.exact_div(&b2, &b).unwrap();
        assert_eq!(q, b);
        let s = r.add(&b2, &r.one()).unwrap();
        assert!(r.exact_div(&s, &b).is_err());
    }

    #[test]
    fn poly_mod_regularity() {
        // 2t+2 over Z/4: annihilated by 2 (found by the brute-force oracle).
        let z4 = Ring::integers_mod(4).unwrap();
        let r = Ring::poly(&z4, &["t"]).unwrap();
        let t = r.var("t").unwrap();
        let f = r.add(
            &r.mul(&r.from_int(2), &t).unwrap(),
            &r.from_int(2),
        ).unwrap();
        assert!(!r.is_regular(&f));
        // brute-force annihilator oracle over Z/4 constants
        let mut witness = None;
        for c in 1..4 {
            let prod = r.mul(&r.from_int(c), &f).unwrap();
            if prod.is_zero() {
                witness = Some(c);
                break;
            }
        }
        assert_eq!(witness, Some(2));
        let g = r.add(&r.mul(&r.from_int(2), &t).unwrap(), &r.one()).unwrap();
        assert!(r.is_regular(&g));
    }

    #[test]
    fn poly_unit_with_nilpotents() {
        // 1 + 2t is a unit over Z/4: (1+2t)(1+2t) = 1 + 4t + 4t^2 = 1.
        let z4 = Ring::integers_mod(4).unwrap();
        let r = Ring::poly(&z4, &["t"]).unwrap();
        let t = r.var("t").unwrap();
        let f = r.add(&r.one(), &r.mul(&r.from_int(2), &t).unwrap()).unwrap();
        let inv = r.inv_unit(&f).unwrap();
        assert_eq!(r.mul(&f, &inv).unwrap(), r.one());
        assert!(r.inv_unit(&t).is_err());
    }

    #[test]
    fn exact_div_roundtrip_randomized() {
        // exact_div(a*b, b)*b == a*b across all ring kinds.
        let rings = vec![
            Ring::integers(),
            Ring::integers_mod(12).unwrap(),
            Ring::integers_inv(&[2, 5]).unwrap(),
            Ring::poly(&Ring::integers_mod(4).unwrap(), &["t"]).unwrap(),
        ];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 13) as i64 - 6
        };
        for ring in rings {
            for _ in 0..50 {
                let mk = |ring: &Ring, v: i64, w: i64| -> Coef {
                    if let RingDescriptor::Poly { .. } = ring.descriptor() {
                        let t = ring.var("t").unwrap();
                        ring.add(&ring.mul(&ring.from_int(v), &t).unwrap(), &ring.from_int(w))
                            .unwrap()
                    } else {
                        ring.from_int(v.wrapping_mul(w) + w)
                    }
                };
                let a = mk(&ring, next(), next());
                let b = mk(&ring, next(), next());
                if b.is_zero() {
                    continue;
                }
                let ab = ring.mul(&a, &b).unwrap();
                let c = ring.exact_div(&ab, &b).unwrap_or_else(|e| {
                    panic!("exact_div(a*b, b) must succeed in {ring}: {e}")
                });
                assert_eq!(ring.mul(&c, &b).unwrap(), ab, "in {ring}");
            }
        }
    }

    #[test]
    fn ring_axioms_randomized() {
        let rings = vec![
            Ring::integers(),
            Ring::integers_mod(6).unwrap(),
            Ring::poly(&Ring::integers(), &["a", "b"]).unwrap(),
        ];
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 15) as i64 - 7
        };
        for ring in rings {
            for _ in 0..30 {
                let elems: Vec<Coef> = (0..3)
                    .map(|_| {
                        if let RingDescriptor::Poly { .. } = ring.descriptor() {
                            let a = ring.var("a").unwrap();
                            ring.add(&ring.mul(&ring.from_int(next()), &a).unwrap(), &ring.from_int(next()))
                                .unwrap()
                        } else {
                            ring.from_int(next())
                        }
                    })
                    .collect();
                let (a, b, c) = (&elems[0], &elems[1], &elems[2]);
                let ab_c = ring.mul(&ring.mul(a, b).unwrap(), c).unwrap();
                let a_bc = ring.mul(a, &ring.mul(b, c).unwrap()).unwrap();
                assert_eq!(ab_c, a_bc);
                let lhs = ring.mul(a, &ring.add(b, c).unwrap()).unwrap();
                let rhs = ring.add(&ring.mul(a, b).unwrap(), &ring.mul(a, c).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn descriptor_mismatch() {
        let z = Ring::integers();
        let z3 = Ring::integers_mod(3).unwrap();
        let e = z.add(&z.one(), &z3.one());
        assert!(matches!(e, Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn json_form() {
        let r = Ring::poly(&Ring::integers(), &["b"]).unwrap();
        let b = r.var("b").unwrap();
        let v = r.elem_to_json(&r.sub(&r.mul(&b, &b).unwrap(), &b).unwrap());
        assert_eq!(v["value"], "b^2 - b");
    }
}
