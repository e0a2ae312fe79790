//! The twisted group algebra over the localized formal group algebra:
//! fractions with positive-root denominators, finitely supported sums of
//! group symbols with the twisted product, Demazure elements, the
//! anti-involution, the word-basis change of basis with denominator
//! certification, and the tensor algebra carrying the transported
//! product.
//!
//! Coefficients sit on the left throughout; the anti-involution converts
//! to right form when needed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fga::FgaContext;
use crate::ring::Coef;
use crate::series::TruncSeries;

/// An element of the localization: `num / prod x_gamma^mult` with the
/// denominator a multiset of positive roots.  Normalized so that no
/// denominator factor exactly divides the numerator.
#[derive(Debug, Clone)]
pub struct RootFraction {
    num: TruncSeries,
    den: BTreeMap<usize, u32>,
}

impl RootFraction {
    pub fn from_series(num: TruncSeries) -> Self {
        RootFraction { num, den: BTreeMap::new() }
    }

    pub fn new(ctx: &FgaContext, num: TruncSeries, den: BTreeMap<usize, u32>) -> Self {
        let mut out = RootFraction { num, den };
        out.normalize(ctx);
        out
    }

    pub fn zero(ctx: &FgaContext) -> Self {
        RootFraction::from_series(ctx.zero())
    }

    pub fn one(ctx: &FgaContext) -> Self {
        RootFraction::from_series(ctx.one())
    }

    pub fn num(&self) -> &TruncSeries {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<usize, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Certified degree of the fraction: the numerator's precision.
    pub fn prec(&self) -> u32 {
        self.num.prec()
    }

    fn normalize(&mut self, ctx: &FgaContext) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        loop {
            // cheap reject: a factor can only cancel if the numerator has
            // positive valuation
            if self.den.is_empty() || self.num.valuation() == Some(0) {
                return;
            }
            let mut cancelled = false;
            let roots: Vec<usize> = self.den.keys().copied().collect();
            for root in roots {
                let x = ctx.x_root(root).truncated(self.num.prec());
                if let Ok(q) = self.num.exact_div_linear(&x) {
                    self.num = q;
                    let m = self.den.get_mut(&root).unwrap();
                    *m -= 1;
                    if *m == 0 {
                        self.den.remove(&root);
                    }
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                return;
            }
        }
    }

    pub fn neg(&self) -> Self {
        RootFraction { num: self.num.neg(), den: self.den.clone() }
    }

    /// Multiply by a plain series (no new denominator factors).
    pub fn scale_series(&self, ctx: &FgaContext, s: &TruncSeries) -> Result<Self> {
        Ok(RootFraction::new(ctx, self.num.mul(s)?, self.den.clone()))
    }

    pub fn mul(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        let num = self.num.mul(&other.num)?;
        let mut den = self.den.clone();
        for (&r, &m) in &other.den {
            *den.entry(r).or_insert(0) += m;
        }
        Ok(RootFraction::new(ctx, num, den))
    }

    pub fn add(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        // common denominator: max multiplicity per root
        let mut den = self.den.clone();
        for (&r, &m) in &other.den {
            let e = den.entry(r).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |f: &Self, den: &BTreeMap<usize, u32>| -> Result<TruncSeries> {
            let mut num = f.num.clone();
            for (&r, &m) in den {
                let have = f.den.get(&r).copied().unwrap_or(0);
                for _ in have..m {
                    num = num.mul(&ctx.x_root(r).truncated(num.prec()))?;
                }
            }
            Ok(num)
        };
        let a = lift(self, &den)?;
        let b = lift(other, &den)?;
        Ok(RootFraction::new(ctx, a.add(&b)?, den))
    }

    pub fn sub(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        self.add(ctx, &other.neg())
    }

    /// Apply a Weyl element: act on the numerator and permute the
    /// denominator roots, rewriting factors sent to negative roots with
    /// the inverse-unit series so the denominator stays positive.
    pub fn weyl_apply(&self, ctx: &FgaContext, w: usize) -> Result<Self> {
        let mut num = ctx.weyl_act(w, &self.num);
        let mut den: BTreeMap<usize, u32> = BTreeMap::new();
        for (&r, &m) in &self.den {
            let img = ctx.weyl().act_on_root(ctx.datum(), w, r);
            if ctx.datum().root(img).positive {
                *den.entry(img).or_insert(0) += m;
            } else {
                let pos = ctx.datum().negate_root(img);
                let unit = ctx.negative_root_unit_inv(pos).truncated(num.prec());
                for _ in 0..m {
                    num = num.mul(&unit)?;
                }
                *den.entry(pos).or_insert(0) += m;
            }
        }
        Ok(RootFraction::new(ctx, num, den))
    }

    /// Equality by cross-multiplication at the common precision.
    pub fn equivalent(&self, ctx: &FgaContext, other: &Self) -> bool {
        match self.sub(ctx, other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Clear every denominator factor by exact division, certifying the
    /// fraction as a genuine series.  Fails with the offending root and
    /// degree.
    pub fn clear_denominators(&self, ctx: &FgaContext) -> Result<TruncSeries> {
        let mut num = self.num.clone();
        for (&r, &m) in &self.den {
            for _ in 0..m {
                let x = ctx.x_root(r).truncated(num.prec());
                num = num.exact_div_linear(&x).map_err(|e| match e {
                    Error::NotDivisibleSeries { degree, .. } => Error::NotInRing { root: r, degree },
                    Error::PrecisionExhausted { .. } | Error::NotUnimodularLinearPart { .. } => {
                        Error::NotInRing { root: r, degree: 0 }
                    }
                    other => other,
                })?;
            }
        }
        Ok(num)
    }

    pub fn to_json(&self, ctx: &FgaContext) -> serde_json::Value {
        let _ = ctx;
        let den: Vec<serde_json::Value> = self
            .den
            .iter()
            .map(|(&r, &m)| serde_json::json!({ "root": r, "mult": m }))
            .collect();
        serde_json::json!({ "num": self.num.to_json(), "den": den })
    }
}

/// Finitely supported sum of group symbols with fraction coefficients on
/// the left.
#[derive(Debug, Clone)]
pub struct TwistedElem {
    coeffs: BTreeMap<usize, RootFraction>,
}

impl TwistedElem {
    pub fn zero() -> Self {
        TwistedElem { coeffs: BTreeMap::new() }
    }

    pub fn delta(w: usize, ctx: &FgaContext) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(w, RootFraction::one(ctx));
        TwistedElem { coeffs }
    }

    pub fn from_series(ctx: &FgaContext, s: TruncSeries) -> Self {
        let mut out = TwistedElem::zero();
        out.set(ctx.weyl().identity(), RootFraction::from_series(s));
        out
    }

    pub fn coeff(&self, w: usize) -> Option<&RootFraction> {
        self.coeffs.get(&w)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &RootFraction)> {
        self.coeffs.iter().map(|(&w, q)| (w, q))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn set(&mut self, w: usize, q: RootFraction) {
        if !q.is_zero() {
            self.coeffs.insert(w, q);
        }
    }

    fn accumulate(&mut self, ctx: &FgaContext, w: usize, q: RootFraction) -> Result<()> {
        let cur = match self.coeffs.remove(&w) {
            None => q,
            Some(prev) => prev.add(ctx, &q)?,
        };
        self.set(w, cur);
        Ok(())
    }

    pub fn add(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (w, q) in other.terms() {
            out.accumulate(ctx, w, q.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TwistedElem {
            coeffs: self.coeffs.iter().map(|(&w, q)| (w, q.neg())).collect(),
        }
    }

    pub fn sub(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        self.add(ctx, &other.neg())
    }

    /// Left multiplication by a fraction.
    pub fn scale(&self, ctx: &FgaContext, q: &RootFraction) -> Result<Self> {
        let mut out = TwistedElem::zero();
        for (w, c) in self.terms() {
            out.set(w, q.mul(ctx, c)?);
        }
        Ok(out)
    }

    /// Twisted product: the symbol acts on the incoming coefficient.
    pub fn mul(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        let mut out = TwistedElem::zero();
        for (v, qv) in self.terms() {
            for (w, qw) in other.terms() {
                let twisted = qw.weyl_apply(ctx, v)?;
                let c = qv.mul(ctx, &twisted)?;
                out.accumulate(ctx, ctx.weyl().multiply(v, w), c)?;
            }
        }
        Ok(out)
    }

    /// q delta_w -> w^{-1}(q) delta_{w^{-1}}, linearly.
    pub fn anti_involution(&self, ctx: &FgaContext) -> Result<Self> {
        let mut out = TwistedElem::zero();
        for (w, q) in self.terms() {
            let winv = ctx.weyl().inverse(w);
            out.accumulate(ctx, winv, q.weyl_apply(ctx, winv)?)?;
        }
        Ok(out)
    }

    /// Left action on the localization: sum of q_w * w(s).
    pub fn act_on(&self, ctx: &FgaContext, s: &RootFraction) -> Result<RootFraction> {
        let mut out = RootFraction::zero(ctx);
        for (w, q) in self.terms() {
            out = out.add(ctx, &q.mul(ctx, &s.weyl_apply(ctx, w)?)?)?;
        }
        Ok(out)
    }

    pub fn equivalent(&self, ctx: &FgaContext, other: &Self) -> bool {
        match self.sub(ctx, other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    pub fn to_json(&self, ctx: &FgaContext) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(w, q)| {
                let word: Vec<usize> = ctx.weyl().word(w).iter().map(|&g| g + 1).collect();
                let mut obj = serde_json::json!({ "w": word });
                let frac = q.to_json(ctx);
                obj["num"] = frac["num"].clone();
                obj["den"] = frac["den"].clone();
                obj
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

/// The Demazure element of a root: coefficient 1/x at the identity and
/// -1/x at the reflection.  Negative roots rewrite through the
/// inverse-unit series to keep denominators positive.
pub fn demazure_elem(ctx: &FgaContext, root: usize) -> Result<TwistedElem> {
    let datum = ctx.datum();
    let s = ctx.reflection_element(root);
    let (pos, unit) = if datum.root(root).positive {
        (root, None)
    } else {
        let pos = datum.negate_root(root);
        (pos, Some(ctx.negative_root_unit_inv(pos)))
    };
    let mut den = BTreeMap::new();
    den.insert(pos, 1);
    let num = match &unit {
        None => ctx.one(),
        Some(u) => u.clone(),
    };
    let mut out = TwistedElem::zero();
    out.set(ctx.weyl().identity(), RootFraction::new(ctx, num.clone(), den.clone()));
    out.accumulate(
        ctx,
        s,
        RootFraction::new(ctx, num.neg(), den),
    )?;
    Ok(out)
}

/// Product of Demazure elements along a word of simple indices.
pub fn word_element(ctx: &FgaContext, word: &[usize]) -> Result<TwistedElem> {
    let mut acc = TwistedElem::delta(ctx.weyl().identity(), ctx);
    for &i in word {
        acc = acc.mul(ctx, &demazure_elem(ctx, i)?)?;
    }
    Ok(acc)
}

/// A choice of reduced word per Weyl element together with the word
/// elements and the closed-form diagonal inverses.
pub struct WordBasis {
    pub words: Vec<Vec<usize>>,
    elems: Vec<TwistedElem>,
    /// (-1)^{l(v)} * prod of x_alpha over the inversion set: a plain
    /// series, the inverse of the leading fraction of the word element.
    diag_inv: Vec<TruncSeries>,
}

impl WordBasis {
    pub fn new(ctx: &FgaContext, words: Vec<Vec<usize>>) -> Result<WordBasis> {
        let weyl = ctx.weyl();
        assert_eq!(words.len(), weyl.size());
        let mut elems = Vec::with_capacity(words.len());
        let mut diag_inv = Vec::with_capacity(words.len());
        for (v, word) in words.iter().enumerate() {
            if weyl.word_to_element(word) != v || !weyl.is_reduced(word) {
                return Err(Error::BadWord { word: word.clone() });
            }
            let elem = word_element(ctx, word)?;
            // triangularity: support below v, leading fraction the closed
            // form (-1)^l / prod x_alpha
            let mut diag = ctx.one();
            for p in weyl.inversion_set(ctx.datum(), v) {
                diag = diag.mul(&ctx.x_root(p))?;
            }
            if word.len() % 2 == 1 {
                diag = diag.neg();
            }
            for w in elem.support() {
                assert!(weyl.bruhat_leq(w, v), "word element escapes the Bruhat ideal");
            }
            let lead = elem.coeff(v).expect("leading coefficient present");
            let expect = RootFraction::new(
                ctx,
                if word.len() % 2 == 1 { ctx.one().neg() } else { ctx.one() },
                weyl
                    .inversion_set(ctx.datum(), v)
                    .into_iter()
                    .map(|p| (p, 1))
                    .collect(),
            );
            assert!(
                lead.equivalent(ctx, &expect),
                "leading coefficient differs from the closed form"
            );
            elems.push(elem);
            diag_inv.push(diag);
        }
        Ok(WordBasis { words, elems, diag_inv })
    }

    pub fn canonical(ctx: &FgaContext) -> Result<WordBasis> {
        let words = crate::rootdata::canonical_words(ctx.weyl());
        WordBasis::new(ctx, words)
    }

    pub fn element(&self, v: usize) -> &TwistedElem {
        &self.elems[v]
    }

    pub fn diag_inverse(&self, v: usize) -> &TruncSeries {
        &self.diag_inv[v]
    }
}

/// Express an element in the word basis: descending-length triangular
/// elimination using the closed-form diagonal, no series inversions.
pub fn rebase(
    ctx: &FgaContext,
    a: &TwistedElem,
    basis: &WordBasis,
) -> Result<BTreeMap<usize, RootFraction>> {
    let weyl = ctx.weyl();
    let mut out = BTreeMap::new();
    let mut rem = a.clone();
    while !rem.is_zero() {
        let w = rem
            .support()
            .max_by_key(|&w| (weyl.length(w), w))
            .expect("nonempty support");
        let c = rem
            .coeff(w)
            .unwrap()
            .scale_series(ctx, basis.diag_inverse(w))?;
        rem = rem.sub(ctx, &basis.element(w).scale(ctx, &c)?)?;
        assert!(
            rem.coeff(w).is_none(),
            "elimination must clear the leading coefficient"
        );
        out.insert(w, c);
    }
    Ok(out)
}

/// Tensor with canonical representatives: fraction coefficients pulled
/// into the left slot, bare symbols on the right.
#[derive(Debug, Clone)]
pub struct TwistedTensor {
    coeffs: BTreeMap<(usize, usize), RootFraction>,
}

impl TwistedTensor {
    pub fn zero() -> Self {
        TwistedTensor { coeffs: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &RootFraction)> {
        self.coeffs.iter().map(|(&k, q)| (k, q))
    }

    pub fn coeff(&self, v: usize, w: usize) -> Option<&RootFraction> {
        self.coeffs.get(&(v, w))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn accumulate(&mut self, ctx: &FgaContext, k: (usize, usize), q: RootFraction) -> Result<()> {
        let cur = match self.coeffs.remove(&k) {
            None => q,
            Some(prev) => prev.add(ctx, &q)?,
        };
        if !cur.is_zero() {
            self.coeffs.insert(k, cur);
        }
        Ok(())
    }

    /// The tensor of two algebra elements; coefficients of the right
    /// factor move untwisted into the left slot.
    pub fn of(ctx: &FgaContext, a: &TwistedElem, b: &TwistedElem) -> Result<Self> {
        let mut out = TwistedTensor::zero();
        for (v, qa) in a.terms() {
            for (w, qb) in b.terms() {
                out.accumulate(ctx, (v, w), qa.mul(ctx, qb)?)?;
            }
        }
        Ok(out)
    }

    /// Diagonal coproduct of an algebra element.
    pub fn coproduct(ctx: &FgaContext, a: &TwistedElem) -> Result<Self> {
        let mut out = TwistedTensor::zero();
        for (w, q) in a.terms() {
            out.accumulate(ctx, (w, w), q.clone())?;
        }
        Ok(out)
    }

    pub fn add(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, q) in other.terms() {
            out.accumulate(ctx, k, q.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TwistedTensor {
            coeffs: self.coeffs.iter().map(|(&k, q)| (k, q.neg())).collect(),
        }
    }

    pub fn sub(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        self.add(ctx, &other.neg())
    }

    /// Transported product: multiply in the left slot, compose symbols in
    /// the right slot.
    pub fn mul(&self, ctx: &FgaContext, other: &Self) -> Result<Self> {
        let weyl = ctx.weyl();
        let mut out = TwistedTensor::zero();
        for ((v, w), q) in self.terms() {
            for ((v2, w2), q2) in other.terms() {
                let twisted = q2.weyl_apply(ctx, v)?;
                let c = q.mul(ctx, &twisted)?;
                out.accumulate(ctx, (weyl.multiply(v, v2), weyl.multiply(w, w2)), c)?;
            }
        }
        Ok(out)
    }

    pub fn equivalent(&self, ctx: &FgaContext, other: &Self) -> bool {
        match self.sub(ctx, other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Express in the word-basis tensor square by double triangular
    /// elimination; diagonal inverses are plain series products.
    pub fn rebase(
        &self,
        ctx: &FgaContext,
        basis: &WordBasis,
    ) -> Result<BTreeMap<(usize, usize), RootFraction>> {
        let weyl = ctx.weyl();
        let mut out = BTreeMap::new();
        let mut rem = self.clone();
        while !rem.is_zero() {
            let (u1, u2) = rem
                .coeffs
                .keys()
                .max_by_key(|&&(v, w)| (weyl.length(v) + weyl.length(w), v, w))
                .copied()
                .expect("nonempty support");
            let c = rem
                .coeff(u1, u2)
                .unwrap()
                .scale_series(ctx, basis.diag_inverse(u1))?
                .scale_series(ctx, basis.diag_inverse(u2))?;
            let expansion = TwistedTensor::of(ctx, basis.element(u1), basis.element(u2))?;
            let mut scaled = TwistedTensor::zero();
            for (k, q) in expansion.terms() {
                scaled.accumulate(ctx, k, c.mul(ctx, q)?)?;
            }
            rem = rem.sub(ctx, &scaled)?;
            assert!(rem.coeff(u1, u2).is_none(), "tensor elimination must clear the pivot");
            out.insert((u1, u2), c);
        }
        Ok(out)
    }
}

/// Counit value of an algebra element: its action on 1, which lands in
/// the localization; for elements of the Demazure subalgebra this is the
/// identity-coefficient sum evaluated on 1.
pub fn counit(ctx: &FgaContext, a: &TwistedElem) -> Result<RootFraction> {
    a.act_on(ctx, &RootFraction::one(ctx))
}

/// Certified series coefficient of the augmentation at a Weyl element, as
/// a ring constant.
pub fn augmentation_of(ctx: &FgaContext, q: &RootFraction) -> Result<Coef> {
    Ok(ctx.augmentation(&q.clear_denominators(ctx)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::{lorentz_law, FormalGroupLaw};
    use crate::ring::Ring;
    use crate::rootdata::{LatticeKind, RootDatum, WeylGroup, DEFAULT_WEYL_CAP};
    use std::sync::Arc;

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
    fn twisted_product_basics() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 4);
        let weyl = ctx.weyl();
        // delta_v * delta_w = delta_{vw}
        for v in 0..weyl.size() {
            for w in 0..weyl.size() {
                let p = TwistedElem::delta(v, &ctx).mul(&ctx, &TwistedElem::delta(w, &ctx)).unwrap();
                let expect = TwistedElem::delta(weyl.multiply(v, w), &ctx);
                assert!(p.equivalent(&ctx, &expect));
            }
        }
        // series coefficients multiply through the identity symbol
        let q = ctx.x_of(&[1, 0]);
        let qp = ctx.x_of(&[0, 1]);
        let a = TwistedElem::from_series(&ctx, q.clone());
        let b = TwistedElem::from_series(&ctx, qp.clone());
        let p = a.mul(&ctx, &b).unwrap();
        let expect = TwistedElem::from_series(&ctx, q.mul(&qp).unwrap());
        assert!(p.equivalent(&ctx, &expect));
    }

    #[test]
    fn twisted_product_negative_root_rewrite() {
        // delta_{s_alpha} * x_alpha delta_e = x_{-alpha} delta_{s_alpha},
        // verified by cross-multiplication
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 4);
        let alpha = 0usize;
        let s = ctx.reflection_element(alpha);
        let lhs = TwistedElem::delta(s, &ctx)
            .mul(&ctx, &TwistedElem::from_series(&ctx, ctx.x_root(alpha)))
            .unwrap();
        let neg = ctx.datum().negate_root(alpha);
        let mut expect = TwistedElem::zero();
        expect.set(s, RootFraction::from_series(ctx.x_root(neg)));
        assert!(lhs.equivalent(&ctx, &expect));
    }

    #[test]
    fn demazure_element_shape_and_relations() {
        let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        for alpha in 0..ctx.datum().roots().len() {
            let x = demazure_elem(&ctx, alpha).unwrap();
            let s = ctx.reflection_element(alpha);
            let pos = if ctx.datum().root(alpha).positive {
                alpha
            } else {
                ctx.datum().negate_root(alpha)
            };
            // denominators are the positive root, multiplicity one
            for (_, q) in x.terms() {
                assert_eq!(q.den().len(), 1);
                assert_eq!(q.den().get(&pos), Some(&1));
            }
            assert_eq!(x.support().collect::<Vec<_>>(), {
                let mut v = vec![ctx.weyl().identity(), s];
                v.sort();
                v
            });

            // X_alpha * x_alpha = Delta(x_alpha) + s(x_alpha) X_alpha
            let xa = ctx.x_root(alpha);
            let lhs = x.mul(&ctx, &TwistedElem::from_series(&ctx, xa.clone())).unwrap();
            let d = ctx.demazure(alpha, &xa).unwrap();
            let rhs = TwistedElem::from_series(&ctx, d)
                .add(&ctx, &x.scale(&ctx, &RootFraction::from_series(ctx.weyl_act(s, &xa))).unwrap())
                .unwrap();
            assert!(lhs.equivalent(&ctx, &rhs), "commutation at root {alpha}");

            // X_alpha^2 = kappa_alpha X_alpha
            let sq = x.mul(&ctx, &x).unwrap();
            let kx = x.scale(&ctx, &RootFraction::from_series(ctx.kappa(alpha))).unwrap();
            assert!(sq.equivalent(&ctx, &kx), "square relation at root {alpha}");
        }
    }

    #[test]
    fn anti_involution_properties() {
        let r = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        let ctx = context("B2", LatticeKind::SimplyConnected, r.clone(), "lorentz", 4);
        let weyl = ctx.weyl();
        for w in 0..weyl.size() {
            let t = TwistedElem::delta(w, &ctx).anti_involution(&ctx).unwrap();
            assert!(t.equivalent(&ctx, &TwistedElem::delta(weyl.inverse(w), &ctx)));
        }
        let q = TwistedElem::from_series(&ctx, ctx.x_of(&[1, 1]));
        assert!(q.anti_involution(&ctx).unwrap().equivalent(&ctx, &q));
        // (ab)^t = b^t a^t on sample pairs
        let a = word_element(&ctx, &[0, 1]).unwrap();
        let b = word_element(&ctx, &[1]).unwrap()
            .scale(&ctx, &RootFraction::from_series(ctx.x_of(&[0, 1])))
            .unwrap();
        let lhs = a.mul(&ctx, &b).unwrap().anti_involution(&ctx).unwrap();
        let rhs = b
            .anti_involution(&ctx)
            .unwrap()
            .mul(&ctx, &a.anti_involution(&ctx).unwrap())
            .unwrap();
        assert!(lhs.equivalent(&ctx, &rhs));
    }

    #[test]
    fn word_element_triangularity() {
        // exhaustive over A2 and B2: support within the Bruhat ideal and
        // closed-form leading fraction (asserted inside WordBasis::new)
        for ty in ["A2", "B2"] {
            for law in ["additive", "mult"] {
                let ctx = context(ty, LatticeKind::SimplyConnected, Ring::integers(), law, 4);
                let basis = WordBasis::canonical(&ctx).unwrap();
                assert_eq!(basis.words.len(), ctx.weyl().size());
            }
        }
    }

    #[test]
    fn empty_word_is_identity() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "additive", 4);
        let e = word_element(&ctx, &[]).unwrap();
        assert!(e.equivalent(&ctx, &TwistedElem::delta(ctx.weyl().identity(), &ctx)));
    }

    #[test]
    fn rebase_basics() {
        let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let basis = WordBasis::canonical(&ctx).unwrap();
        // a basis element rebases to its own indicator
        for v in 0..ctx.weyl().size() {
            let coords = rebase(&ctx, basis.element(v), &basis).unwrap();
            assert_eq!(coords.len(), 1);
            assert!(coords[&v].equivalent(&ctx, &RootFraction::one(&ctx)));
        }
        // delta_{s_alpha} = 1*X_e - x_alpha*X_alpha
        let alpha = 0;
        let s = ctx.reflection_element(alpha);
        let coords = rebase(&ctx, &TwistedElem::delta(s, &ctx), &basis).unwrap();
        assert_eq!(coords.len(), 2);
        assert!(coords[&ctx.weyl().identity()].equivalent(&ctx, &RootFraction::one(&ctx)));
        assert!(coords[&s].equivalent(&ctx, &RootFraction::from_series(ctx.x_root(alpha).neg())));
        // X_alpha * X_alpha = kappa X_alpha
        let x = demazure_elem(&ctx, alpha).unwrap();
        let coords = rebase(&ctx, &x.mul(&ctx, &x).unwrap(), &basis).unwrap();
        assert_eq!(coords.len(), 1);
        assert!(coords[&s].equivalent(&ctx, &RootFraction::from_series(ctx.kappa(alpha))));
        // rebase then re-expand is the identity
        let a = word_element(&ctx, &[0, 1, 0]).unwrap();
        let coords = rebase(&ctx, &a, &basis).unwrap();
        let mut back = TwistedElem::zero();
        for (w, c) in coords {
            back = back.add(&ctx, &basis.element(w).scale(&ctx, &c).unwrap()).unwrap();
        }
        assert!(back.equivalent(&ctx, &a));
    }

    #[test]
    fn certification() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let alpha = 0;
        let xa = ctx.x_root(alpha);
        // x_alpha^2 / x_alpha certifies to x_alpha
        let q = RootFraction {
            num: xa.mul(&xa).unwrap(),
            den: [(alpha, 1)].into_iter().collect(),
        };
        let s = q.clear_denominators(&ctx).unwrap();
        assert_eq!(s, xa.truncated(s.prec()));
        // 1/x_alpha + 1/x_{-alpha} certifies to kappa (the negative root
        // factor is rewritten through the unit series)
        let inv_pos = RootFraction::new(&ctx, ctx.one(), [(alpha, 1)].into_iter().collect());
        let inv_neg = RootFraction::new(
            &ctx,
            ctx.negative_root_unit_inv(alpha),
            [(alpha, 1)].into_iter().collect(),
        );
        let q = inv_pos.add(&ctx, &inv_neg).unwrap();
        let s = q.clear_denominators(&ctx).unwrap();
        assert_eq!(s, ctx.kappa(alpha).truncated(s.prec()));
        // same through the additive law, where kappa vanishes
        let actx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "additive", 5);
        let inv_pos = RootFraction::new(&actx, actx.one(), [(alpha, 1)].into_iter().collect());
        let inv_neg = RootFraction::new(
            &actx,
            actx.negative_root_unit_inv(alpha),
            [(alpha, 1)].into_iter().collect(),
        );
        let q = inv_pos.add(&actx, &inv_neg).unwrap();
        assert!(q.clear_denominators(&actx).unwrap().is_zero());
        // 1 / x_alpha is not in the base algebra
        let q = RootFraction {
            num: ctx.one(),
            den: [(alpha, 1)].into_iter().collect(),
        };
        assert!(matches!(
            q.clear_denominators(&ctx),
            Err(Error::NotInRing { root: 0, degree: 0 })
        ));
    }

    #[test]
    fn tensor_unit_and_grouplikes() {
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 4);
        let e = ctx.weyl().identity();
        let unit = TwistedTensor::coproduct(&ctx, &TwistedElem::delta(e, &ctx)).unwrap();
        let z = TwistedTensor::of(
            &ctx,
            &word_element(&ctx, &[0, 1]).unwrap(),
            &word_element(&ctx, &[1]).unwrap(),
        )
        .unwrap();
        assert!(unit.mul(&ctx, &z).unwrap().equivalent(&ctx, &z));
        assert!(z.mul(&ctx, &unit).unwrap().equivalent(&ctx, &z));
        // group symbols are group-like: coproduct is multiplicative on them
        for v in 0..ctx.weyl().size() {
            for w in 0..ctx.weyl().size() {
                let dv = TwistedElem::delta(v, &ctx);
                let dw = TwistedElem::delta(w, &ctx);
                let lhs = TwistedTensor::coproduct(&ctx, &dv.mul(&ctx, &dw).unwrap()).unwrap();
                let rhs = TwistedTensor::coproduct(&ctx, &dv)
                    .unwrap()
                    .mul(&ctx, &TwistedTensor::coproduct(&ctx, &dw).unwrap())
                    .unwrap();
                assert!(lhs.equivalent(&ctx, &rhs));
            }
        }
    }

    #[test]
    fn tensor_associativity_and_coproduct_multiplicativity() {
        let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 6);
        let a = word_element(&ctx, &[0]).unwrap();
        let b = word_element(&ctx, &[1, 0]).unwrap();
        let c = word_element(&ctx, &[0, 1]).unwrap();
        let ta = TwistedTensor::coproduct(&ctx, &a).unwrap();
        let tb = TwistedTensor::coproduct(&ctx, &b).unwrap();
        let tc = TwistedTensor::of(&ctx, &c, &word_element(&ctx, &[1]).unwrap()).unwrap();
        let lhs = ta.mul(&ctx, &tb).unwrap().mul(&ctx, &tc).unwrap();
        let rhs = ta.mul(&ctx, &tb.mul(&ctx, &tc).unwrap()).unwrap();
        assert!(lhs.equivalent(&ctx, &rhs));
        // coproduct is an algebra map
        let lhs = TwistedTensor::coproduct(&ctx, &a.mul(&ctx, &b).unwrap()).unwrap();
        let rhs = ta.mul(&ctx, &tb).unwrap();
        assert!(lhs.equivalent(&ctx, &rhs));
    }

    #[test]
    fn tensor_representative_independence() {
        // moving a coefficient across the tensor sign before multiplying
        // does not change the transported product
        let ctx = context("A2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let q = ctx.x_of(&[1, 1]);
        let a = word_element(&ctx, &[0]).unwrap();
        let b = word_element(&ctx, &[1]).unwrap();
        // representative 1: (q a) tensor b; representative 2: a tensor (q b)
        let rep1 = TwistedTensor::of(&ctx, &a.scale(&ctx, &RootFraction::from_series(q.clone())).unwrap(), &b).unwrap();
        let rep2 = TwistedTensor::of(&ctx, &a, &b.scale(&ctx, &RootFraction::from_series(q)).unwrap()).unwrap();
        assert!(rep1.equivalent(&ctx, &rep2));
        let z = TwistedTensor::coproduct(&ctx, &word_element(&ctx, &[0, 1]).unwrap()).unwrap();
        let p1 = rep1.mul(&ctx, &z).unwrap();
        let p2 = rep2.mul(&ctx, &z).unwrap();
        assert!(p1.equivalent(&ctx, &p2));
    }

    #[test]
    fn counit_matches_identity_rebase_coefficient() {
        // the action on 1 equals the augmentation-compatible combination
        // of rebase coefficients at the identity
        let ctx = context("B2", LatticeKind::SimplyConnected, Ring::integers(), "mult", 5);
        let basis = WordBasis::canonical(&ctx).unwrap();
        let a = word_element(&ctx, &[0, 1]).unwrap()
            .scale(&ctx, &RootFraction::from_series(ctx.x_of(&[1, 0])))
            .unwrap()
            .add(&ctx, &TwistedElem::delta(ctx.weyl().identity(), &ctx))
            .unwrap();
        let cu = counit(&ctx, &a).unwrap();
        let coords = rebase(&ctx, &a, &basis).unwrap();
        let at_e = coords
            .get(&ctx.weyl().identity())
            .cloned()
            .unwrap_or_else(|| RootFraction::zero(&ctx));
        assert!(cu.equivalent(&ctx, &at_e));
    }
}
