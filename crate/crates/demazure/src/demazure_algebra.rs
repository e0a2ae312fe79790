//! The Demazure subalgebra on the word basis: rewriting arbitrary words
//! with certified series coefficients, braid-deviation coefficients, the
//! coefficient-passing rule, the restricted coproduct with its counit,
//! and the action on the base algebra.
//!
//! Certification failures are surfaced, not silenced: a denominator that
//! refuses to clear is exactly the diagnostic the regularity hypotheses
//! predict.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fga::FgaContext;
use crate::ring::Coef;
use crate::series::TruncSeries;
use crate::twisted::{demazure_elem, rebase, word_element, RootFraction, TwistedElem, TwistedTensor, WordBasis};

/// An element of the Demazure subalgebra expressed on the word basis,
/// every coefficient certified denominator-free.
#[derive(Debug, Clone)]
pub struct AlgebraElem {
    pub coeffs: BTreeMap<usize, TruncSeries>,
}

impl AlgebraElem {
    pub fn certified_prec(&self) -> Option<u32> {
        self.coeffs.values().map(|s| s.prec()).min()
    }

    pub fn to_twisted(&self, ctx: &FgaContext, basis: &WordBasis) -> Result<TwistedElem> {
        let mut out = TwistedElem::zero();
        for (&w, c) in &self.coeffs {
            let scaled = basis.element(w).scale(ctx, &RootFraction::from_series(c.clone()))?;
            out = out.add(ctx, &scaled)?;
        }
        Ok(out)
    }

    pub fn to_json(&self, ctx: &FgaContext) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&w, c)| {
                serde_json::json!({
                    "w": ctx.weyl().word(w).iter().map(|&g| g + 1).collect::<Vec<_>>(),
                    "coef": c.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "terms": entries })
    }
}

/// Coproduct structure constants on the word basis:
/// `sigma[w][(u,v)]` is the coefficient of the (u,v) tensor pair in the
/// coproduct of the basis element of w.
#[derive(Debug)]
pub struct CoproductTable {
    pub sigma: Vec<BTreeMap<(usize, usize), TruncSeries>>,
}

impl CoproductTable {
    pub fn entry(&self, w: usize, u: usize, v: usize) -> Option<&TruncSeries> {
        self.sigma[w].get(&(u, v))
    }

    pub fn to_json(&self, ctx: &FgaContext) -> serde_json::Value {
        let weyl = ctx.weyl();
        let word_key = |w: usize| {
            weyl.word(w)
                .iter()
                .map(|&g| (g + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut rows = Vec::new();
        for (w, slice) in self.sigma.iter().enumerate() {
            for ((u, v), s) in slice {
                rows.push(serde_json::json!({
                    "w": word_key(w),
                    "u": word_key(*u),
                    "v": word_key(*v),
                    "coef": s.to_json(),
                }));
            }
        }
        serde_json::json!(rows)
    }
}

/// The Demazure algebra bound to a context and a word choice.
pub struct DemazureAlgebra {
    ctx: Arc<FgaContext>,
    basis: WordBasis,
}

impl DemazureAlgebra {
    pub fn new(ctx: Arc<FgaContext>, basis: WordBasis) -> Self {
        DemazureAlgebra { ctx, basis }
    }

    pub fn canonical(ctx: Arc<FgaContext>) -> Result<Self> {
        let basis = WordBasis::canonical(&ctx)?;
        Ok(DemazureAlgebra { ctx, basis })
    }

    pub fn ctx(&self) -> &FgaContext {
        &self.ctx
    }

    pub fn basis(&self) -> &WordBasis {
        &self.basis
    }

    fn certify(&self, coords: BTreeMap<usize, RootFraction>) -> Result<AlgebraElem> {
        let mut coeffs = BTreeMap::new();
        for (w, q) in coords {
            let s = q.clear_denominators(&self.ctx)?;
            if !s.is_zero() {
                coeffs.insert(w, s);
            }
        }
        Ok(AlgebraElem { coeffs })
    }

    /// Rewrite the product of Demazure elements along an arbitrary word on
    /// the basis.  For a reduced word the support is the Bruhat ideal with
    /// unit leading coefficient; for a non-reduced word the support sits
    /// strictly below the word length.
    pub fn rebase_word(&self, word: &[usize]) -> Result<AlgebraElem> {
        let ctx = &self.ctx;
        let weyl = ctx.weyl();
        let elem = word_element(ctx, word)?;
        let coords = rebase(ctx, &elem, &self.basis)?;
        let out = self.certify(coords)?;
        let target = weyl.word_to_element(word);
        if weyl.is_reduced(word) {
            for (&w, _) in &out.coeffs {
                assert!(weyl.bruhat_leq(w, target), "support escapes the Bruhat ideal");
            }
            let lead = out.coeffs.get(&target).expect("leading coefficient present");
            assert_eq!(
                *lead,
                TruncSeries::one(ctx.ring(), ctx.nvars(), lead.prec()),
                "reduced word must have unit leading coefficient"
            );
        } else {
            for (&w, _) in &out.coeffs {
                assert!(
                    (weyl.length(w) as usize) < word.len(),
                    "non-reduced word expansion must lower length"
                );
            }
        }
        Ok(out)
    }

    /// Coefficients of the braid deviation: the difference of the two
    /// alternating products of length m(i,j), expanded on basis words of
    /// elements strictly below the rank-two longest element, certified,
    /// and verified by re-expansion.
    pub fn braid_deviation(&self, i: usize, j: usize) -> Result<AlgebraElem> {
        assert_ne!(i, j);
        let ctx = &self.ctx;
        let weyl = ctx.weyl();
        let m = ctx.datum().braid_order(i, j);
        let alternating = |a: usize, b: usize| -> Vec<usize> {
            (0..m).map(|k| if k % 2 == 0 { a } else { b }).collect()
        };
        let wij = alternating(i, j);
        let wji = alternating(j, i);
        let top = weyl.word_to_element(&wij);
        debug_assert_eq!(top, weyl.word_to_element(&wji));
        let diff = word_element(ctx, &wij)?.sub(ctx, &word_element(ctx, &wji)?)?;
        let coords = rebase(ctx, &diff, &self.basis)?;
        let out = self.certify(coords)?;
        for (&w, _) in &out.coeffs {
            assert!(
                weyl.bruhat_leq(w, top) && w != top,
                "braid deviation must sit strictly below the rank-two longest element"
            );
        }
        // re-expansion residual is exactly zero
        let residual = diff.sub(ctx, &out.to_twisted(ctx, &self.basis)?)?;
        assert!(residual.is_zero(), "braid deviation re-expansion residual");
        Ok(out)
    }

    /// Coefficient passing: X_I * q = sum over subsets E of
    /// phi_{I,E}(q) * X_{I|E}, with phi the mixed reflection/Demazure
    /// composite.  The identity is verified in the twisted algebra.
    /// Keys are subset bitmasks over the word positions.
    pub fn pass_coefficient(&self, word: &[usize], q: &TruncSeries) -> Result<BTreeMap<u32, TruncSeries>> {
        let ctx = &self.ctx;
        let l = word.len();
        assert!(l < 31, "word too long for subset masks");
        let mut out = BTreeMap::new();
        for mask in 0..(1u32 << l) {
            let mut acc = q.clone();
            for jpos in (0..l).rev() {
                let i = word[jpos];
                acc = if mask & (1 << jpos) != 0 {
                    ctx.b_op(i, 0, &acc)?
                } else {
                    ctx.b_op(i, -1, &acc)?
                };
            }
            if !acc.is_zero() {
                out.insert(mask, acc);
            }
        }
        // verify in the twisted algebra
        let lhs = word_element(ctx, word)?
            .mul(ctx, &TwistedElem::from_series(ctx, q.clone()))?;
        let mut rhs = TwistedElem::zero();
        for (&mask, phi) in &out {
            let sub: Vec<usize> = (0..l).filter(|k| mask & (1 << k) != 0).map(|k| word[k]).collect();
            let term = word_element(ctx, &sub)?
                .scale(ctx, &RootFraction::from_series(phi.clone()))?;
            rhs = rhs.add(ctx, &term)?;
        }
        assert!(
            lhs.equivalent(ctx, &rhs),
            "coefficient passing identity failed in the twisted algebra"
        );
        Ok(out)
    }

    /// Word-basis coefficients of a word's subsequence product, cached by
    /// the caller when needed.
    fn rebased_subword(&self, word: &[usize], mask: u32) -> Result<BTreeMap<usize, TruncSeries>> {
        let sub: Vec<usize> = (0..word.len())
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| word[k])
            .collect();
        Ok(self.rebase_word(&sub)?.coeffs)
    }

    /// Coproduct of the basis element of `w` through the subset-pair
    /// formula: the product coefficient times the two rebased
    /// subsequences, collected per pair of basis indices.
    pub fn coproduct_of_basis_word(&self, w: usize) -> Result<BTreeMap<(usize, usize), TruncSeries>> {
        let ctx = &self.ctx;
        let word = self.basis.words[w].clone();
        let l = word.len();
        let mut sub_cache: BTreeMap<u32, BTreeMap<usize, TruncSeries>> = BTreeMap::new();
        for mask in 0..(1u32 << l) {
            sub_cache.insert(mask, self.rebased_subword(&word, mask)?);
        }
        let mut sigma: BTreeMap<(usize, usize), TruncSeries> = BTreeMap::new();
        for m1 in 0..(1u32 << l) {
            for m2 in 0..(1u32 << l) {
                let e1: Vec<bool> = (0..l).map(|k| m1 & (1 << k) != 0).collect();
                let e2: Vec<bool> = (0..l).map(|k| m2 & (1 << k) != 0).collect();
                let p = ctx.product_coeff(&word, &e1, &e2)?;
                if p.is_zero() {
                    continue;
                }
                for (&u, bu) in &sub_cache[&m1] {
                    for (&v, bv) in &sub_cache[&m2] {
                        let term = p.mul(&bu.truncated(p.prec()))?.mul(&bv.truncated(p.prec()))?;
                        if term.is_zero() {
                            continue;
                        }
                        match sigma.remove(&(u, v)) {
                            None => {
                                sigma.insert((u, v), term);
                            }
                            Some(prev) => {
                                let s = prev.add(&term)?;
                                if !s.is_zero() {
                                    sigma.insert((u, v), s);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(sigma)
    }

    /// Coproduct computed through the transported tensor product: the
    /// diagonal image of the word element, rebased on the tensor-square
    /// basis and certified.  Cross-check route for the formula.
    pub fn coproduct_by_tensor(&self, w: usize) -> Result<BTreeMap<(usize, usize), TruncSeries>> {
        let ctx = &self.ctx;
        let elem = self.basis.element(w);
        let tensor = TwistedTensor::coproduct(ctx, elem)?;
        let coords = tensor.rebase(ctx, &self.basis)?;
        let mut out = BTreeMap::new();
        for (k, q) in coords {
            let s = q.clear_denominators(ctx)?;
            if !s.is_zero() {
                out.insert(k, s);
            }
        }
        Ok(out)
    }

    /// Full table over every basis word, via the formula route.  When
    /// `threads > 1` basis words are processed in parallel; the result is
    /// identical either way.
    pub fn coproduct_table(&self, threads: usize) -> Result<CoproductTable> {
        let size = self.ctx.weyl().size();
        let mut sigma: Vec<BTreeMap<(usize, usize), TruncSeries>> = Vec::with_capacity(size);
        if threads <= 1 {
            for w in 0..size {
                sigma.push(self.coproduct_of_basis_word(w)?);
            }
        } else {
            let mut slots: Vec<Option<Result<BTreeMap<(usize, usize), TruncSeries>>>> =
                (0..size).map(|_| None).collect();
            let chunk = size.div_ceil(threads);
            std::thread::scope(|scope| {
                for (t, slot_chunk) in slots.chunks_mut(chunk).enumerate() {
                    let start = t * chunk;
                    let me = &*self;
                    scope.spawn(move || {
                        for (off, slot) in slot_chunk.iter_mut().enumerate() {
                            *slot = Some(me.coproduct_of_basis_word(start + off));
                        }
                    });
                }
            });
            for slot in slots {
                sigma.push(slot.expect("all slots filled")?);
            }
        }
        Ok(CoproductTable { sigma })
    }

    /// Counit: the coefficient at the identity; verified against the
    /// action on 1 elsewhere.
    pub fn counit(&self, d: &AlgebraElem) -> TruncSeries {
        d.coeffs
            .get(&self.ctx.weyl().identity())
            .cloned()
            .unwrap_or_else(|| {
                TruncSeries::zero(
                    self.ctx.ring(),
                    self.ctx.nvars(),
                    d.certified_prec().unwrap_or_else(|| self.ctx.work_prec()),
                )
            })
    }

    /// Action on the base algebra: the sum of coefficients times word
    /// composites of Demazure operators.
    pub fn act_on(&self, d: &AlgebraElem, s: &TruncSeries) -> Result<TruncSeries> {
        let ctx = &self.ctx;
        let max_len = d
            .coeffs
            .keys()
            .map(|&w| ctx.weyl().length(w))
            .max()
            .unwrap_or(0);
        let out_prec = s.prec().checked_sub(max_len).ok_or_else(|| {
            Error::PrecisionExhausted { needed: max_len - s.prec(), available: s.prec() }
        })?;
        let mut acc = TruncSeries::zero(ctx.ring(), ctx.nvars(), out_prec);
        for (&w, c) in &d.coeffs {
            let word = &self.basis.words[w];
            let val = ctx.demazure_word(word, s)?;
            acc = acc.add(&c.truncated(out_prec).mul(&val.truncated(out_prec))?)?;
        }
        Ok(acc)
    }

    /// The augmentation collapse of the coproduct of one generator: modulo
    /// the augmentation ideal the generator is primitive.  Returns the
    /// witness pair on failure.
    pub fn augmented_coproduct_check(&self, i: usize) -> Result<std::result::Result<(), (usize, usize)>> {
        let ctx = &self.ctx;
        let weyl = ctx.weyl();
        let si = weyl.word_to_element(&[i]);
        let sigma = self.coproduct_of_basis_word(si)?;
        let e = weyl.identity();
        for ((u, v), s) in &sigma {
            let eps: Coef = ctx.augmentation(s);
            let expected_one = (*u, *v) == (si, e) || (*u, *v) == (e, si);
            let ok = if expected_one {
                eps == ctx.ring().one()
            } else {
                eps.is_zero()
            };
            if !ok {
                return Ok(Err((*u, *v)));
            }
        }
        // both primitive legs must actually be present
        if !sigma.contains_key(&(si, e)) || !sigma.contains_key(&(e, si)) {
            return Ok(Err((si, e)));
        }
        Ok(Ok(()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::seeded_series;
    use crate::fgl::{lorentz_law, FormalGroupLaw};
    use crate::ring::Ring;
    use crate::rootdata::{LatticeKind, RootDatum, WeylGroup, DEFAULT_WEYL_CAP};

    fn eq_min(a: &TruncSeries, b: &TruncSeries) -> bool {
        let p = a.prec().min(b.prec());
        a.truncated(p) == b.truncated(p)
    }

    fn algebra(ty: &str, lattice: LatticeKind, ring: Ring, law: &str, prec: u32) -> DemazureAlgebra {
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
        let ctx = Arc::new(FgaContext::new(datum, weyl, Arc::new(law), prec));
        DemazureAlgebra::canonical(ctx).unwrap()
    }

    #[test]
    fn rebase_reduced_and_nonreduced() {
        let alg = algebra("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let weyl = alg.ctx().weyl();
        // reduced: unit leading coefficient (asserted internally)
        let d = alg.rebase_word(&[0, 1, 0]).unwrap();
        let target = weyl.word_to_element(&[0, 1, 0]);
        assert!(d.coeffs.contains_key(&target));
        // (i, i): kappa at s_i, nothing of length >= 2
        let d = alg.rebase_word(&[0, 0]).unwrap();
        let si = weyl.word_to_element(&[0]);
        let kappa = alg.ctx().kappa(0);
        assert_eq!(d.coeffs.len(), 1);
        assert_eq!(d.coeffs[&si], kappa.truncated(d.coeffs[&si].prec()));
        // longer non-reduced word stays short in support (asserted inside)
        let d = alg.rebase_word(&[0, 1, 1, 0]).unwrap();
        for (&w, _) in &d.coeffs {
            assert!((weyl.length(w) as usize) < 4);
        }
    }

    #[test]
    fn braid_deviation_classical_laws_vanish() {
        for law in ["additive", "mult"] {
            let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), law, 6);
            let eta = alg.braid_deviation(0, 1).unwrap();
            assert!(eta.coeffs.is_empty(), "{law} deviation should vanish");
            let alg = algebra("B2", LatticeKind::SimplyConnected, Ring::integers(), law, 6);
            let eta = alg.braid_deviation(0, 1).unwrap();
            assert!(eta.coeffs.is_empty(), "{law} deviation should vanish");
        }
    }

    #[test]
    fn braid_deviation_generic_law_nonzero() {
        // the velocity-addition law genuinely breaks the braid relations
        // in the twisted algebra; the deviation is certified and verified
        // by re-expansion inside braid_deviation
        let r = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        let alg = algebra("B2", LatticeKind::SimplyConnected, r, "lorentz", 6);
        let eta = alg.braid_deviation(0, 1).unwrap();
        assert!(!eta.coeffs.is_empty(), "generic law should deviate");
    }

    #[test]
    fn pass_coefficient_rank_one() {
        let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let ctx = alg.ctx();
        let q = ctx.x_of(&[1, 0]);
        let out = alg.pass_coefficient(&[0], &q).unwrap();
        // E = {} gives Delta(q), E = {1} gives s(q)
        assert_eq!(out[&0], ctx.demazure(0, &q).unwrap());
        let s = ctx.weyl_act(ctx.reflection_element(0), &q);
        assert_eq!(out[&1], s);
        // q = 1: only the full subset survives
        let out = alg.pass_coefficient(&[0, 1], &ctx.one()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[&3], ctx.one());
    }

    #[test]
    fn pass_coefficient_length_two_random() {
        let alg = algebra("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let ctx = alg.ctx();
        for seed in 0..3 {
            let q = seeded_series(ctx.ring(), 2, ctx.work_prec(), 900 + seed, 3, 4);
            // the identity itself is asserted inside
            let _ = alg.pass_coefficient(&[0, 1], &q).unwrap();
        }
    }

    #[test]
    fn coproduct_of_generators() {
        let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let ctx = alg.ctx();
        let weyl = ctx.weyl();
        let e = weyl.identity();
        // identity basis element is group-like
        let sigma = alg.coproduct_of_basis_word(e).unwrap();
        assert_eq!(sigma.len(), 1);
        assert!(eq_min(&sigma[&(e, e)], &ctx.one()));
        // generator: X tensor 1 + 1 tensor X - x_i X tensor X
        for i in 0..2 {
            let si = weyl.word_to_element(&[i]);
            let sigma = alg.coproduct_of_basis_word(si).unwrap();
            assert_eq!(sigma.len(), 3);
            assert!(eq_min(&sigma[&(si, e)], &ctx.one()));
            assert!(eq_min(&sigma[&(e, si)], &ctx.one()));
            assert!(eq_min(&sigma[&(si, si)], &ctx.x_root(i).neg()));
        }
    }

    #[test]
    fn coproduct_formula_matches_tensor_route() {
        for law in ["additive", "mult"] {
            let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), law, 5);
            for w in 0..alg.ctx().weyl().size() {
                let by_formula = alg.coproduct_of_basis_word(w).unwrap();
                let by_tensor = alg.coproduct_by_tensor(w).unwrap();
                assert_eq!(
                    by_formula.keys().collect::<Vec<_>>(),
                    by_tensor.keys().collect::<Vec<_>>(),
                    "support mismatch at w={w} ({law})"
                );
                for (k, s) in &by_formula {
                    let t = &by_tensor[k];
                    let p = s.prec().min(t.prec());
                    assert_eq!(s.truncated(p), t.truncated(p), "entry {k:?} at w={w} ({law})");
                }
            }
        }
    }

    #[test]
    fn coproduct_counit_rows() {
        let alg = algebra("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let ctx = alg.ctx();
        let e = ctx.weyl().identity();
        for w in 0..ctx.weyl().size() {
            let sigma = alg.coproduct_of_basis_word(w).unwrap();
            for ((u, v), s) in &sigma {
                if *u == e {
                    // (e, v) rows are the Kronecker delta at v = w
                    if *v == w {
                        assert!(eq_min(s, &ctx.one()));
                    } else {
                        panic!("unexpected counit-row entry ({u},{v}) at w={w}");
                    }
                }
            }
            assert!(sigma.contains_key(&(e, w)));
            assert!(sigma.contains_key(&(w, e)));
        }
    }

    #[test]
    fn coproduct_cocommutative() {
        let alg = algebra("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        for w in 0..alg.ctx().weyl().size() {
            let sigma = alg.coproduct_of_basis_word(w).unwrap();
            for ((u, v), s) in &sigma {
                let t = &sigma[&(*v, *u)];
                assert_eq!(s, t, "cocommutativity at w={w} ({u},{v})");
            }
        }
    }

    #[test]
    fn counit_and_action() {
        let alg = algebra("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let ctx = alg.ctx();
        let weyl = ctx.weyl();
        // counit of a basis element: 1 at the identity, 0 otherwise
        for w in 0..weyl.size() {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(w, ctx.one());
            let d = AlgebraElem { coeffs };
            let c = alg.counit(&d);
            if w == weyl.identity() {
                assert!(eq_min(&c, &ctx.one()));
            } else {
                assert!(c.is_zero());
            }
            // the counit equals the action on 1
            let act = alg.act_on(&d, &ctx.one()).unwrap();
            assert!(eq_min(&act, &c));
        }
        // action realizes the operator: X_alpha acts as the Demazure
        // operator
        let s = seeded_series(ctx.ring(), 2, ctx.work_prec(), 321, 3, 5);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(weyl.word_to_element(&[1]), ctx.one());
        let d = AlgebraElem { coeffs };
        let lhs = alg.act_on(&d, &s).unwrap();
        let rhs = ctx.demazure(1, &s).unwrap();
        assert_eq!(lhs, rhs.truncated(lhs.prec()));
        // 1 - x_alpha X_alpha acts as the reflection
        let i = 0usize;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(weyl.identity(), ctx.one());
        coeffs.insert(weyl.word_to_element(&[i]), ctx.x_root(i).neg());
        let d = AlgebraElem { coeffs };
        let lhs = alg.act_on(&d, &s).unwrap();
        let rhs = ctx.weyl_act(ctx.reflection_element(i), &s);
        assert_eq!(lhs, rhs.truncated(lhs.prec()));
    }

    #[test]
    fn action_is_multiplicative_over_products() {
        // act(a*b, s) = act(a, act(b, s)) with the product computed by
        // rewriting the concatenated word
        let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let ctx = alg.ctx();
        let s = seeded_series(ctx.ring(), 2, ctx.work_prec(), 7777, 2, 4);
        let a = alg.rebase_word(&[0]).unwrap();
        let b = alg.rebase_word(&[1, 0]).unwrap();
        let ab = alg.rebase_word(&[0, 1, 0]).unwrap();
        let lhs = alg.act_on(&ab, &s).unwrap();
        let rhs = alg.act_on(&a, &alg.act_on(&b, &s).unwrap()).unwrap();
        assert!(eq_min(&lhs, &rhs));
    }

    #[test]
    fn augmented_coproduct_primitivity() {
        for (ty, law) in [("A2", "additive"), ("B2", "mult")] {
            let alg = algebra(ty, LatticeKind::SimplyConnected, Ring::integers(), law, 5);
            for i in 0..2 {
                assert_eq!(alg.augmented_coproduct_check(i).unwrap(), Ok(()));
            }
        }
    }

    #[test]
    fn augmented_coproduct_detects_corruption() {
        // mutate a sigma entry and re-run the collapse check by hand
        let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let ctx = alg.ctx();
        let weyl = ctx.weyl();
        let si = weyl.word_to_element(&[0]);
        let mut sigma = alg.coproduct_of_basis_word(si).unwrap();
        let e = weyl.identity();
        sigma.insert((si, si), ctx.one());
        // replicate the collapse test on the corrupted table
        let mut ok = true;
        for ((u, v), s) in &sigma {
            let eps = ctx.augmentation(s);
            let expected_one = (*u, *v) == (si, e) || (*u, *v) == (e, si);
            let fine = if expected_one { eps == ctx.ring().one() } else { eps.is_zero() };
            if !fine {
                ok = false;
            }
        }
        assert!(!ok, "corruption must be detected");
    }

    #[test]
    fn coproduct_table_threads_agree() {
        let alg = algebra("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 4);
        let t1 = alg.coproduct_table(1).unwrap();
        let t2 = alg.coproduct_table(3).unwrap();
        for w in 0..alg.ctx().weyl().size() {
            assert_eq!(t1.sigma[w], t2.sigma[w]);
        }
    }
}
