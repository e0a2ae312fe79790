//! The formal group algebra of a root datum realized in coordinates:
//! series in one variable per lattice basis vector, the Weyl action,
//! Demazure operators, B-operators, and the product-formula coefficients.
//!
//! Demazure operators are computed division-free through the twisted
//! Leibniz rule, which works over every coefficient ring; the
//! division-based formula is kept as a validator.  Heavy operators are
//! memoized per monomial behind mutexes, so a warmed-up context is cheap
//! to query from many threads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::ring::{Coef, Monomial, Ring};
use crate::rootdata::{RootDatum, WeylGroup};
use crate::series::TruncSeries;

/// Extra working degrees beyond the slack consumed by one Demazure
/// application per letter of the longest word.
const EXTRA_SLACK: u32 = 2;

pub struct FgaContext {
    datum: Arc<RootDatum>,
    weyl: Arc<WeylGroup>,
    law: Arc<FormalGroupLaw>,
    ring: Ring,
    user_prec: u32,
    work_prec: u32,
    x_cache: Mutex<HashMap<Vec<i64>, TruncSeries>>,
    /// (w, variable, exponent) -> image power under w
    pow_cache: Mutex<HashMap<(usize, usize, u32), TruncSeries>>,
    /// (w, monomial) -> image series
    weyl_memo: Mutex<HashMap<(usize, Monomial), TruncSeries>>,
    /// (root, monomial) -> Demazure value
    dem_memo: Mutex<HashMap<(usize, Monomial), TruncSeries>>,
    /// root -> Weyl element of its reflection
    refl_cache: Mutex<HashMap<usize, usize>>,
    /// positive root -> unit series U(x_root) with 1/x_{-root} = U/x_root
    neg_unit_cache: Mutex<HashMap<usize, TruncSeries>>,
}

impl FgaContext {
    /// Working precision holds `user_prec` certified degrees after one
    /// denominator clearing per letter of the longest word.
    pub fn working_precision(datum: &RootDatum, weyl: &WeylGroup, user_prec: u32) -> u32 {
        let _ = datum;
        user_prec + weyl.length(weyl.longest()) + EXTRA_SLACK
    }

    /// Bound on the formal multiples needed by the Demazure recursion.
    pub fn multiple_cache_bound(datum: &RootDatum) -> i64 {
        datum.max_pairing() * datum.max_root_coordinate() + 1
    }

    pub fn new(
        datum: Arc<RootDatum>,
        weyl: Arc<WeylGroup>,
        law: Arc<FormalGroupLaw>,
        user_prec: u32,
    ) -> Self {
        let work_prec = Self::working_precision(&datum, &weyl, user_prec);
        assert!(
            law.prec() >= work_prec,
            "law must be built at working precision {work_prec} (got {})",
            law.prec()
        );
        FgaContext {
            ring: law.ring().clone(),
            datum,
            weyl,
            law,
            user_prec,
            work_prec,
            x_cache: Mutex::new(HashMap::new()),
            pow_cache: Mutex::new(HashMap::new()),
            weyl_memo: Mutex::new(HashMap::new()),
            dem_memo: Mutex::new(HashMap::new()),
            refl_cache: Mutex::new(HashMap::new()),
            neg_unit_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.datum.rank
    }

    pub fn prec(&self) -> u32 {
        self.user_prec
    }

    pub fn work_prec(&self) -> u32 {
        self.work_prec
    }

    pub fn zero(&self) -> TruncSeries {
        TruncSeries::zero(&self.ring, self.nvars(), self.work_prec)
    }

    pub fn one(&self) -> TruncSeries {
        TruncSeries::one(&self.ring, self.nvars(), self.work_prec)
    }

    pub fn variable(&self, i: usize) -> TruncSeries {
        TruncSeries::variable(&self.ring, self.nvars(), self.work_prec, i)
    }

    /// Constant term: the augmentation S -> R.
    pub fn augmentation(&self, u: &TruncSeries) -> Coef {
        u.constant_term()
    }

    /// The canonical series of a lattice vector: fold the formal group
    /// law over the coordinates.  Cached.
    pub fn x_of(&self, lambda: &[i64]) -> TruncSeries {
        assert_eq!(lambda.len(), self.nvars());
        if let Some(hit) = self.x_cache.lock().unwrap().get(lambda) {
            return hit.clone();
        }
        let mut acc = self.zero();
        for (i, &m) in lambda.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let term = self
                .law
                .multiple(m)
                .substitute(&[self.variable(i)])
                .expect("coordinate image has zero constant term");
            if acc.is_zero() {
                acc = term;
            } else {
                acc = self.law.formal_sum(&acc, &term).expect("same context");
            }
        }
        self.x_cache.lock().unwrap().insert(lambda.to_vec(), acc.clone());
        acc
    }

    /// Series of a root by index.
    pub fn x_root(&self, root_index: usize) -> TruncSeries {
        self.x_of(&self.datum.root(root_index).lattice.clone())
    }

    /// Weyl element implementing the reflection along a root.
    pub fn reflection_element(&self, root_index: usize) -> usize {
        if let Some(&w) = self.refl_cache.lock().unwrap().get(&root_index) {
            return w;
        }
        let mat = self.datum.reflection_action(root_index).expect("valid root index");
        let w = self
            .weyl
            .element_of_matrix(&mat)
            .expect("reflections lie in the Weyl group");
        self.refl_cache.lock().unwrap().insert(root_index, w);
        w
    }

    /// The unit series U(x_gamma) with 1/x_{-gamma} = U(x_gamma)/x_gamma,
    /// for a positive root gamma.  Invertible over every ring since the
    /// constant term is -1.
    pub fn negative_root_unit_inv(&self, positive_root: usize) -> TruncSeries {
        if let Some(hit) = self.neg_unit_cache.lock().unwrap().get(&positive_root) {
            return hit.clone();
        }
        let u = self
            .law
            .inverse_quot_inv()
            .substitute(&[self.x_root(positive_root)])
            .expect("zero constant term");
        self.neg_unit_cache
            .lock()
            .unwrap()
            .insert(positive_root, u.clone());
        u
    }

    fn image_power(&self, w: usize, var: usize, exp: u32) -> TruncSeries {
        if exp == 0 {
            return self.one();
        }
        if let Some(hit) = self.pow_cache.lock().unwrap().get(&(w, var, exp)) {
            return hit.clone();
        }
        let value = if exp == 1 {
            let col = self.weyl.element(w).matrix.column(var);
            self.x_of(&col)
        } else {
            let lower = self.image_power(w, var, exp - 1);
            lower
                .mul(&self.image_power(w, var, 1))
                .expect("same context")
        };
        self.pow_cache.lock().unwrap().insert((w, var, exp), value.clone());
        value
    }

    fn weyl_monomial(&self, w: usize, mono: &Monomial) -> TruncSeries {
        if let Some(hit) = self.weyl_memo.lock().unwrap().get(&(w, mono.clone())) {
            return hit.clone();
        }
        let mut acc = self.one();
        for (i, &e) in mono.0.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.image_power(w, i, e)).expect("same context");
            }
        }
        self.weyl_memo.lock().unwrap().insert((w, mono.clone()), acc.clone());
        acc
    }

    /// Action of a Weyl element: the ring automorphism sending each
    /// coordinate to the series of its image vector.  Precision is
    /// preserved.
    pub fn weyl_act(&self, w: usize, u: &TruncSeries) -> TruncSeries {
        if w == self.weyl.identity() {
            return u.clone();
        }
        let mut acc = TruncSeries::zero(&self.ring, self.nvars(), u.prec());
        for (mono, c) in u.terms() {
            let img = self.weyl_monomial(w, mono);
            acc = acc.add(&img.scale(c).expect("same ring")).expect("same context");
        }
        acc
    }

    /// Division-free Demazure value on a single monomial, memoized.
    ///
    /// On a variable: psi_m(x_alpha) * G(x_{s(b_i)}, x_{m.alpha}) with
    /// m the coroot pairing; on a product x_i * rest the twisted Leibniz
    /// rule recurses.
    fn demazure_monomial(&self, root: usize, mono: &Monomial) -> TruncSeries {
        let deg = mono.degree();
        if deg == 0 {
            return TruncSeries::zero(&self.ring, self.nvars(), self.work_prec.saturating_sub(1));
        }
        if let Some(hit) = self.dem_memo.lock().unwrap().get(&(root, mono.clone())) {
            return hit.clone();
        }
        let s_alpha = self.reflection_element(root);
        let value = if deg == 1 {
            let i = mono.0.iter().position(|&e| e > 0).unwrap();
            let alpha = self.datum.root(root);
            let mut unit = vec![0i64; self.nvars()];
            unit[i] = 1;
            let m = alpha.pair(&unit);
            let reflected = self.weyl.element(s_alpha).matrix.column(i);
            let m_alpha: Vec<i64> = alpha.lattice.iter().map(|v| v * m).collect();
            let psi = self
                .law
                .psi(m)
                .substitute(&[self.x_root(root)])
                .expect("zero constant term");
            let g = self
                .law
                .quotient_g()
                .substitute(&[self.x_of(&reflected), self.x_of(&m_alpha)])
                .expect("zero constant terms");
            psi.mul(&g).expect("same context")
        } else {
            let i = mono.0.iter().position(|&e| e > 0).unwrap();
            let mut rest = mono.clone();
            rest.0[i] -= 1;
            let var = Monomial::var(i, self.nvars());
            let d_var = self.demazure_monomial(root, &var);
            let d_rest = self.demazure_monomial(root, &rest);
            let rest_series =
                TruncSeries::monomial(&self.ring, self.nvars(), self.work_prec, rest, self.ring.one());
            let s_var = {
                let col = self.weyl.element(s_alpha).matrix.column(i);
                self.x_of(&col)
            };
            d_var
                .mul(&rest_series)
                .expect("same context")
                .add(&s_var.mul(&d_rest).expect("same context"))
                .expect("same context")
        };
        let value = value.truncated(self.work_prec.saturating_sub(1));
        self.dem_memo.lock().unwrap().insert((root, mono.clone()), value.clone());
        value
    }

    /// Demazure operator along any root; output precision is one less
    /// than the input precision.
    pub fn demazure(&self, root: usize, u: &TruncSeries) -> Result<TruncSeries> {
        let out_prec = u.prec().checked_sub(1).ok_or(Error::PrecisionExhausted {
            needed: 1,
            available: 0,
        })?;
        let mut acc = TruncSeries::zero(&self.ring, self.nvars(), out_prec);
        for (mono, c) in u.terms() {
            let d = self.demazure_monomial(root, mono).truncated(out_prec);
            acc = acc.add(&d.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Division-based Demazure value: (u - s(u)) / x_alpha.  Fails where
    /// the series division hypotheses fail; used to cross-check the
    /// division-free path.
    pub fn demazure_by_division(&self, root: usize, u: &TruncSeries) -> Result<TruncSeries> {
        let s_alpha = self.reflection_element(root);
        let diff = u.sub(&self.weyl_act(s_alpha, u))?;
        diff.exact_div_linear(&self.x_root(root).truncated(u.prec()))
    }

    /// Division-free value with the division-based validator; reports a
    /// Sigma-regularity pathology when the two disagree.
    pub fn demazure_crosschecked(&self, root: usize, u: &TruncSeries) -> Result<TruncSeries> {
        let fast = self.demazure(root, u)?;
        match self.demazure_by_division(root, u) {
            Ok(slow) => {
                if slow != fast {
                    return Err(Error::DivisionCrossCheck { root });
                }
                Ok(fast)
            }
            // the division route is only a validator: unavailable is fine
            Err(Error::NotUnimodularLinearPart { .. }) => Ok(fast),
            Err(e) => Err(e),
        }
    }

    /// B-operators: j = -1 is the Demazure operator, j = 0 the simple
    /// reflection, j = +1 multiplication by minus the simple-root series.
    /// The filtration shift deg >= deg + j is asserted on monomials.
    pub fn b_op(&self, i: usize, j: i32, u: &TruncSeries) -> Result<TruncSeries> {
        let out = match j {
            -1 => self.demazure(i, u)?,
            0 => self.weyl_act(self.reflection_element(i), u),
            1 => self.x_root(i).neg().truncated(u.prec()).mul(u)?,
            _ => panic!("b_op exponent must be -1, 0 or 1"),
        };
        if u.num_terms() == 1 && !out.is_zero() {
            let d = u.valuation().unwrap() as i64;
            let v = out.valuation().unwrap() as i64;
            assert!(v >= d + i64::from(j), "B filtration shift violated");
        }
        Ok(out)
    }

    /// Composite of Demazure operators along a word (leftmost letter
    /// applied last).  Output precision drops by the word length.
    pub fn demazure_word(&self, word: &[usize], u: &TruncSeries) -> Result<TruncSeries> {
        if (u.prec() as usize) < word.len() {
            return Err(Error::PrecisionExhausted {
                needed: word.len() as u32 - u.prec(),
                available: u.prec(),
            });
        }
        let mut acc = u.clone();
        for &i in word.iter().rev() {
            acc = self.demazure(i, &acc)?;
        }
        Ok(acc)
    }

    /// Constant term of the composite Demazure value.  Truncating to the
    /// number of remaining letters at every step is sound because each
    /// operator lowers the filtration by exactly one.
    pub fn demazure_word_eps(&self, word: &[usize], u: &TruncSeries) -> Result<Coef> {
        let l = word.len() as u32;
        if u.prec() < l {
            return Err(Error::PrecisionExhausted { needed: l - u.prec(), available: u.prec() });
        }
        let mut acc = u.truncated(l);
        for (k, &i) in word.iter().rev().enumerate() {
            let remaining = l - k as u32 - 1;
            acc = self.demazure(i, &acc)?.truncated(remaining);
        }
        Ok(self.augmentation(&acc))
    }

    /// Product-formula coefficient: the composite B-chain applied to 1,
    /// with the operator at position j selected by membership of j in the
    /// two subsets.
    pub fn product_coeff(&self, word: &[usize], e1: &[bool], e2: &[bool]) -> Result<TruncSeries> {
        let l = word.len();
        assert_eq!(e1.len(), l);
        assert_eq!(e2.len(), l);
        let mut acc = self.one();
        for j in (0..l).rev() {
            let i = word[j];
            acc = match (e1[j], e2[j]) {
                (true, true) => self.b_op(i, 1, &self.b_op(i, 0, &acc)?)?,
                (false, false) => self.b_op(i, -1, &acc)?,
                _ => self.b_op(i, 0, &acc)?,
            };
        }
        // valuation >= |E1| + |E2| - l
        let lower: i64 = e1.iter().filter(|&&b| b).count() as i64
            + e2.iter().filter(|&&b| b).count() as i64
            - l as i64;
        if let Some(v) = acc.valuation() {
            assert!((v as i64) >= lower, "product coefficient filtration violated");
        }
        Ok(acc)
    }

    /// kappa of a root: the law's kappa series evaluated at the root's
    /// series.  An element of S.
    pub fn kappa(&self, root: usize) -> TruncSeries {
        self.law
            .kappa_series()
            .substitute(&[self.x_root(root)])
            .expect("zero constant term")
    }
}

/// Deterministic pseudo-random series for the seeded property suites.
/// xorshift over the seed; recorded seeds make reruns byte-identical.
pub fn seeded_series(
    ring: &Ring,
    nvars: usize,
    prec: u32,
    seed: u64,
    max_degree: u32,
    terms: usize,
) -> TruncSeries {
    let mut state = seed ^ 0x9e3779b97f4a7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut out = TruncSeries::zero(ring, nvars, prec);
    for _ in 0..terms {
        let mut exp = vec![0u32; nvars];
        let deg = (next() % u64::from(max_degree + 1)) as u32;
        for _ in 0..deg {
            let i = (next() as usize) % nvars;
            exp[i] += 1;
        }
        let c = (next() % 7) as i64 - 3;
        let mono = TruncSeries::monomial(ring, nvars, prec, Monomial(exp), ring.from_int(c));
        out = out.add(&mono).expect("same context");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::lorentz_law;
    use crate::rootdata::{LatticeKind, RootDatum, WeylGroup, DEFAULT_WEYL_CAP};

    fn context(ty: &str, lattice: LatticeKind, ring: Ring, law: &str, prec: u32) -> FgaContext {
        let datum = Arc::new(RootDatum::parse(ty, lattice).unwrap());
        let weyl = Arc::new(WeylGroup::enumerate(&datum, DEFAULT_WEYL_CAP).unwrap());
        let wp = FgaContext::working_precision(&datum, &weyl, prec);
        let bound = FgaContext::multiple_cache_bound(&datum);
        let law = match law {
            "additive" => FormalGroupLaw::additive(&ring, wp, bound).unwrap(),
            "mult" => FormalGroupLaw::multiplicative(&ring, wp, &ring.one(), bound).unwrap(),
            "lorentz" => {
                let a = ring.var("a").unwrap();
                lorentz_law(&ring, wp, &a, bound).unwrap()
            }
            _ => unreachable!(),
        };
        FgaContext::new(datum, weyl, Arc::new(law), prec)
    }

    #[test]
    fn x_of_weight_lattice_relations() {
        // over Z/3, A2 weight lattice, additive law:
        // alpha_1 + 2 alpha_2 = 3 omega_2 maps to 3 x_2 = 0
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers_mod(3).unwrap(), "additive", 4);
        // alpha_1 = (2,-1), alpha_2 = (-1,2) in weight coordinates
        let v = [2 + 2 * (-1), -1 + 2 * 2];
        assert_eq!(v, [0, 3]);
        assert!(ctx.x_of(&[0, 3]).is_zero());
        // while in adjoint coordinates the same vector is x_1 + 2 x_2 != 0
        let adj = context("A2", LatticeKind::Adjoint, Ring::integers_mod(3).unwrap(), "additive", 4);
        assert!(!adj.x_of(&[1, 2]).is_zero());
        assert!(ctx.x_of(&[0, 0]).is_zero());
    }

    #[test]
    fn x_of_c1_multiplicative_mod2() {
        // C1 simply connected over Z/2 with the multiplicative law:
        // x_alpha = x_{2 omega} = 2x - x^2 = x^2
        let ctx = context("C1", LatticeKind::SimplyConnected, Ring::integers_mod(2).unwrap(), "mult", 4);
        let x = ctx.variable(0);
        assert_eq!(ctx.x_of(&[2]), x.mul(&x).unwrap());
    }

    #[test]
    fn weyl_action_is_ring_automorphism() {
        let r = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        let ctx = context("B2", LatticeKind::SimplyConnected, r.clone(), "lorentz", 4);
        let u = seeded_series(&r, 2, ctx.work_prec(), 11, 3, 4);
        let v = seeded_series(&r, 2, ctx.work_prec(), 12, 3, 4);
        assert_eq!(ctx.weyl_act(ctx.weyl().identity(), &u), u);
        for w in 0..ctx.weyl().size() {
            let lhs = ctx.weyl_act(w, &u.mul(&v).unwrap());
            let rhs = ctx.weyl_act(w, &u).mul(&ctx.weyl_act(w, &v)).unwrap();
            assert_eq!(lhs, rhs);
        }
        // additive s_1 sends x_{alpha_1} to -x_{alpha_1}
        let actx = context("A2", LatticeKind::Adjoint, Ring::integers(), "additive", 4);
        let s1 = actx.reflection_element(0);
        assert_eq!(actx.weyl_act(s1, &actx.x_of(&[1, 0])), actx.x_of(&[1, 0]).neg());
    }

    #[test]
    fn demazure_base_cases() {
        // additive A2 simply connected: the first fundamental weight has
        // pairing 1 with alpha_1, so the operator value is 1
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "additive", 5);
        let d = ctx.demazure(0, &ctx.x_of(&[1, 0])).unwrap();
        assert_eq!(d, ctx.one().truncated(ctx.work_prec() - 1));
        // constants die
        assert!(ctx.demazure(0, &ctx.one()).unwrap().is_zero());
        // invariant elements die: x_{omega_2} is s_1-invariant
        let u = ctx.x_of(&[0, 1]);
        assert!(ctx.demazure(0, &u).unwrap().is_zero());
    }

    #[test]
    fn demazure_matches_division_everywhere_possible() {
        for (ty, ring, law) in [
            ("A2", Ring::integers(), "additive"),
            ("B2", Ring::integers(), "mult"),
            ("C1", Ring::integers(), "mult"),
        ] {
            let ctx = context(ty, LatticeKind::SimplyConnected, ring.clone(), law, 4);
            for root in 0..ctx.datum().roots().len() {
                let u = seeded_series(&ring, ctx.nvars(), ctx.work_prec(), 7 + root as u64, 3, 5);
                let fast = ctx.demazure_crosschecked(root, &u).unwrap();
                let _ = fast;
            }
        }
    }

    #[test]
    fn demazure_leibniz_rule() {
        let r = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        let ctx = context("B2", LatticeKind::SimplyConnected, r.clone(), "lorentz", 4);
        for root in 0..2 {
            let s = ctx.reflection_element(root);
            for seed in 0..4 {
                let u = seeded_series(&r, 2, ctx.work_prec(), 100 + seed, 3, 4);
                let v = seeded_series(&r, 2, ctx.work_prec(), 200 + seed, 3, 4);
                let lhs = ctx.demazure(root, &u.mul(&v).unwrap()).unwrap();
                let t1 = ctx.demazure(root, &u).unwrap().mul(&v.truncated(ctx.work_prec() - 1)).unwrap();
                let t2 = ctx.weyl_act(s, &u).truncated(ctx.work_prec() - 1).mul(&ctx.demazure(root, &v).unwrap()).unwrap();
                assert_eq!(lhs, t1.add(&t2).unwrap());
            }
        }
    }

    #[test]
    fn demazure_squared_is_kappa_demazure() {
        // operator identity: Delta_alpha^2 = kappa_alpha * Delta_alpha
        for law in ["additive", "mult"] {
            let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), law, 5);
            for root in 0..ctx.datum().roots().len() {
                let u = seeded_series(&Ring::integers(), 2, ctx.work_prec(), 31 + root as u64, 3, 5);
                let dd = ctx.demazure(root, &ctx.demazure(root, &u).unwrap()).unwrap();
                let kd = ctx.kappa(root)
                    .truncated(dd.prec())
                    .mul(&ctx.demazure(root, &u).unwrap())
                    .unwrap();
                assert_eq!(dd, kd.truncated(dd.prec()));
            }
        }
    }

    #[test]
    fn kappa_values() {
        let actx = context("G2", LatticeKind::Adjoint, Ring::integers(), "additive", 4);
        for root in 0..actx.datum().roots().len() {
            assert!(actx.kappa(root).is_zero());
        }
        let mctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 4);
        for root in 0..mctx.datum().roots().len() {
            let k = mctx.kappa(root);
            assert_eq!(k, TruncSeries::one(&Ring::integers(), 2, k.prec()));
        }
    }

    #[test]
    fn b_ops() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "additive", 5);
        let one = ctx.one();
        assert_eq!(ctx.b_op(0, 1, &one).unwrap(), ctx.x_of(&[2, -1]).neg());
        assert_eq!(ctx.b_op(0, 0, &one).unwrap(), one);
        // additive: Delta(x_alpha) = (x_alpha - x_{-alpha})/x_alpha = 2
        let d = ctx.b_op(0, -1, &ctx.x_of(&[2, -1])).unwrap();
        assert_eq!(d, TruncSeries::constant(&Ring::integers(), 2, d.prec(), Ring::integers().from_int(2)));
    }

    #[test]
    fn word_composites_and_eps() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "additive", 5);
        let u = seeded_series(&Ring::integers(), 2, ctx.work_prec(), 5, 4, 6);
        assert_eq!(ctx.demazure_word(&[], &u).unwrap(), u);
        // classical additive operators are word independent
        let a = ctx.demazure_word(&[0, 1, 0], &u).unwrap();
        let b = ctx.demazure_word(&[1, 0, 1], &u).unwrap();
        assert_eq!(a, b);
        // low-pass epsilon agrees with the full composite
        let full = ctx.augmentation(&ctx.demazure_word(&[0, 1], &u).unwrap());
        let eps = ctx.demazure_word_eps(&[0, 1], &u).unwrap();
        assert_eq!(full, eps);
        // precision exhaustion
        let shallow = u.truncated(1);
        assert!(matches!(
            ctx.demazure_word(&[0, 1, 0], &shallow),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn word_dependence_for_generic_law() {
        // a non-classical law: composites along different reduced words of
        // the same element differ
        let r = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        let ctx = context("B2", LatticeKind::SimplyConnected, r.clone(), "lorentz", 6);
        let u = seeded_series(&r, 2, ctx.work_prec(), 17, 3, 6);
        let a = ctx.demazure_word(&[0, 1, 0, 1], &u).unwrap();
        let b = ctx.demazure_word(&[1, 0, 1, 0], &u).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn product_coeff_length_one() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "additive", 5);
        let p = ctx.product_coeff(&[0], &[false], &[false]).unwrap();
        assert!(p.is_zero());
        let p = ctx.product_coeff(&[0], &[true], &[false]).unwrap();
        assert_eq!(p, ctx.one());
        let p = ctx.product_coeff(&[0], &[true], &[true]).unwrap();
        assert_eq!(p, ctx.x_of(&[2, -1]).neg());
    }

    #[test]
    fn product_coeff_vanishing() {
        // E1 and E2 disjoint with union smaller than the whole word
        let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let word = [0, 1, 0];
        let cases = [
            (vec![true, false, false], vec![false, false, false]),
            (vec![false, true, false], vec![false, false, false]),
            (vec![false, false, false], vec![false, true, false]),
        ];
        for (e1, e2) in cases {
            let p = ctx.product_coeff(&word, &e1, &e2).unwrap();
            assert!(p.is_zero(), "E1={e1:?} E2={e2:?}");
        }
    }

    #[test]
    fn product_formula() {
        // Delta_I(uv) expands through the subset-pair coefficients
        let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let words: Vec<Vec<usize>> = vec![vec![0], vec![0, 1], vec![1, 0, 1], vec![0, 1, 0, 1]];
        for word in words {
            let l = word.len();
            for seed in 0..3u64 {
                let u = seeded_series(&Ring::integers(), 2, ctx.work_prec(), 40 + seed, 2, 4);
                let v = seeded_series(&Ring::integers(), 2, ctx.work_prec(), 80 + seed, 2, 4);
                let lhs = ctx.demazure_word(&word, &u.mul(&v).unwrap()).unwrap();
                let mut rhs = TruncSeries::zero(&Ring::integers(), 2, lhs.prec());
                for m1 in 0..(1usize << l) {
                    for m2 in 0..(1usize << l) {
                        let e1: Vec<bool> = (0..l).map(|k| m1 & (1 << k) != 0).collect();
                        let e2: Vec<bool> = (0..l).map(|k| m2 & (1 << k) != 0).collect();
                        let p = ctx.product_coeff(&word, &e1, &e2).unwrap();
                        if p.is_zero() {
                            continue;
                        }
                        let sub1: Vec<usize> =
                            word.iter().enumerate().filter(|(k, _)| e1[*k]).map(|(_, &g)| g).collect();
                        let sub2: Vec<usize> =
                            word.iter().enumerate().filter(|(k, _)| e2[*k]).map(|(_, &g)| g).collect();
                        let t = p
                            .truncated(lhs.prec())
                            .mul(&ctx.demazure_word(&sub1, &u).unwrap().truncated(lhs.prec()))
                            .unwrap()
                            .mul(&ctx.demazure_word(&sub2, &v).unwrap().truncated(lhs.prec()))
                            .unwrap();
                        rhs = rhs.add(&t).unwrap();
                    }
                }
                assert_eq!(lhs, rhs.truncated(lhs.prec()), "word {word:?}");
            }
        }
    }
}
