//! Steenrod squares on Stiefel-Whitney generators via the Wu formula and
//! the Milnor primitives Q0 (degree +1) and Q1 (degree +3).
//!
//! Q_i acts on generators through Sq composites (Q0 = Sq^1,
//! Q1 = Sq^3 + Sq^2 Sq^1) and extends to monomials as a derivation. The
//! all-Sq route [`SteenrodContext::q1_via_sq`] stays available as an
//! independent oracle for the derivation route.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2poly::{multiply, Monomial, PolynomialF2, RingSpec};

/// The two Milnor primitives handled by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Q {
    Q0,
    Q1,
}

impl Q {
    /// Degree shift of the operation.
    pub fn shift(self) -> usize {
        match self {
            Q::Q0 => 1,
            Q::Q1 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Q::Q0 => "Q0",
            Q::Q1 => "Q1",
        }
    }
}

/// C(a, b) mod 2 by the Lucas criterion: 1 iff the bits of b are a subset
/// of the bits of a. C(a, 0) = 1 for every a, including a = -1 (the
/// empty-product convention forced by Sq^m(w_m) = w_m^2). Negative a with
/// b > 0 never arises from the Wu formula and signals a caller bug.
pub fn binom_mod2(a: i64, b: u64) -> Result<bool> {
    if b == 0 {
        return Ok(true);
    }
    if a < 0 {
        return Err(Error::BinomDomain { a, b });
    }
    let a = a as u64;
    Ok(b & a == b)
}

/// Precomputed Sq and Q actions on the generators of one ring.
///
/// All tables are filled at construction, so a shared reference is safe to
/// use from parallel phases.
pub struct SteenrodContext {
    spec: RingSpec,
    sq_gen: HashMap<(u32, u32), PolynomialF2>, // (k, m) for 1 <= k <= m
    q_gen: [HashMap<u32, PolynomialF2>; 2],
}

impl SteenrodContext {
    pub fn new(spec: RingSpec) -> Self {
        let mut ctx = SteenrodContext {
            spec,
            sq_gen: HashMap::new(),
            q_gen: [HashMap::new(), HashMap::new()],
        };
        for m in spec.generator_indices() {
            for k in 1..=m {
                let v = ctx.wu_formula(k, m);
                ctx.sq_gen.insert((k, m), v);
            }
        }
        // Generator Q-actions from the Sq composites, once.
        for m in spec.generator_indices() {
            let gen = PolynomialF2::generator(m);
            let q0 = ctx.sq(1, &gen).expect("valid generator");
            let q1 = ctx.q1_via_sq(&gen).expect("valid generator");
            ctx.q_gen[0].insert(m, q0);
            ctx.q_gen[1].insert(m, q1);
        }
        ctx
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// Wu formula: Sq^k(w_m) = sum_{t=0}^{k} C(m-k+t-1, t) w_{k-t} w_{m+t},
    /// with w_0 = 1 and the ring's vanishing relations applied.
    fn wu_formula(&self, k: u32, m: u32) -> PolynomialF2 {
        debug_assert!(k >= 1 && k <= m);
        let mut out = PolynomialF2::zero();
        for t in 0..=k {
            let a = m as i64 - k as i64 + t as i64 - 1;
            if !binom_mod2(a, t as u64).expect("t = 0 whenever a < 0") {
                continue;
            }
            let (i1, i2) = (k - t, m + t);
            if self.spec.vanishes(i1) || self.spec.vanishes(i2) {
                continue;
            }
            let mut factors = Vec::new();
            if i1 != 0 {
                factors.push((i1, 1));
            }
            if i2 != 0 {
                factors.push((i2, 1));
            }
            out.toggle(Monomial::from_exponents(&factors));
        }
        out
    }

    /// Sq^k on a single generator: k = 0 is the identity, k > m vanishes
    /// (unstability), 1 <= k <= m is the Wu formula.
    pub fn sq_on_generator(&self, k: u32, m: u32) -> Result<PolynomialF2> {
        if !self.spec.is_generator(m) {
            return Err(Error::InvalidIndex {
                index: m,
                ring: self.spec.to_string(),
            });
        }
        if k == 0 {
            return Ok(PolynomialF2::generator(m));
        }
        if k > m {
            return Ok(PolynomialF2::zero());
        }
        Ok(self.sq_gen[&(k, m)].clone())
    }

    /// Sq^k on a polynomial via the Cartan formula, iterated over the
    /// single-generator factors of each monomial.
    pub fn sq(&self, k: u32, p: &PolynomialF2) -> Result<PolynomialF2> {
        let mut out = PolynomialF2::zero();
        for mono in p.terms() {
            if let Some(&(bad, _)) = mono
                .factors()
                .iter()
                .find(|&&(i, _)| !self.spec.is_generator(i))
            {
                return Err(Error::InvalidIndex {
                    index: bad,
                    ring: self.spec.to_string(),
                });
            }
            // table[j] = Sq^j of the prefix of factors folded so far.
            let mut table: Vec<PolynomialF2> = vec![PolynomialF2::zero(); k as usize + 1];
            table[0] = PolynomialF2::one();
            for &(m, e) in mono.factors() {
                for _ in 0..e {
                    let mut next: Vec<PolynomialF2> = vec![PolynomialF2::zero(); k as usize + 1];
                    for j in 0..=k {
                        for i in 0..=j {
                            let part = &table[i as usize];
                            if part.is_zero() {
                                continue;
                            }
                            let s = self.sq_on_generator(j - i, m)?;
                            if s.is_zero() {
                                continue;
                            }
                            let prod = multiply(part, &s, &self.spec)?;
                            next[j as usize] = next[j as usize].add(&prod);
                        }
                    }
                    table = next;
                }
            }
            out = out.add(&table[k as usize]);
        }
        Ok(out)
    }

    /// The stored generator action Q_i(w_m).
    pub fn q_on_generator(&self, q: Q, m: u32) -> Result<&PolynomialF2> {
        self.q_gen[q as usize].get(&m).ok_or(Error::InvalidIndex {
            index: m,
            ring: self.spec.to_string(),
        })
    }

    /// Q_i on a polynomial by the derivation (Leibniz) rule over the stored
    /// generator actions. Factors with even exponent contribute nothing.
    pub fn q(&self, q: Q, p: &PolynomialF2) -> Result<PolynomialF2> {
        let mut out = PolynomialF2::zero();
        for mono in p.terms() {
            for &(m, e) in mono.factors() {
                if e % 2 == 0 {
                    continue;
                }
                let rest = mono.div_generator(m).expect("factor present");
                let action = self.q_on_generator(q, m)?;
                let prod = multiply(&PolynomialF2::from_monomial(rest), action, &self.spec)?;
                out = out.add(&prod);
            }
        }
        Ok(out)
    }

    /// Q1 computed entirely through Steenrod squares:
    /// Sq^3(p) + Sq^2(Sq^1(p)). Independent of the derivation route.
    pub fn q1_via_sq(&self, p: &PolynomialF2) -> Result<PolynomialF2> {
        let a = self.sq(3, p)?;
        let b = self.sq(2, &self.sq(1, p)?)?;
        Ok(a.add(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2poly::parse_poly;

    fn ctx_bso(n: u32, d: usize) -> SteenrodContext {
        SteenrodContext::new(RingSpec::bso(n, d).unwrap())
    }

    fn p(text: &str, ctx: &SteenrodContext) -> PolynomialF2 {
        parse_poly(text, ctx.spec()).unwrap()
    }

    #[test]
    fn binom_examples() {
        assert!(binom_mod2(3, 1).unwrap());
        assert!(!binom_mod2(2, 1).unwrap());
        assert!(binom_mod2(-1, 0).unwrap());
        assert!(matches!(binom_mod2(-1, 1), Err(Error::BinomDomain { .. })));
    }

    #[test]
    fn binom_matches_parity_oracle() {
        // Oracle: actual binomial coefficients via Pascal's rule.
        let mut row = vec![1u64];
        for a in 0..=20i64 {
            for b in 0..=20u64 {
                let c = row.get(b as usize).copied().unwrap_or(0);
                assert_eq!(binom_mod2(a, b).unwrap(), c % 2 == 1, "C({a}, {b}) = {c}");
            }
            let mut next = vec![1u64];
            for i in 1..row.len() {
                next.push(row[i - 1] + row[i]);
            }
            next.push(1);
            row = next;
        }
    }

    #[test]
    fn sq_on_generator_examples() {
        let ctx = ctx_bso(5, 20);
        assert_eq!(ctx.sq_on_generator(1, 2).unwrap(), p("w3", &ctx));
        assert_eq!(ctx.sq_on_generator(2, 2).unwrap(), p("w2^2", &ctx));
        assert_eq!(ctx.sq_on_generator(2, 3).unwrap(), p("w2*w3 + w5", &ctx));
        // Above the degree the square vanishes; Sq^0 is the identity.
        assert!(ctx.sq_on_generator(4, 3).unwrap().is_zero());
        assert_eq!(ctx.sq_on_generator(0, 4).unwrap(), p("w4", &ctx));
        assert!(matches!(
            ctx.sq_on_generator(1, 9),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn sq_on_poly_examples() {
        let ctx = ctx_bso(5, 20);
        let e = p("w2*w3 + w5", &ctx);
        assert_eq!(ctx.sq(0, &e).unwrap(), e);
        assert!(ctx.sq(1, &p("w2^2", &ctx)).unwrap().is_zero());
        assert_eq!(ctx.sq(1, &p("w2*w3", &ctx)).unwrap(), p("w3^2", &ctx));
    }

    #[test]
    fn q_examples() {
        let ctx = ctx_bso(5, 20);
        assert_eq!(ctx.q(Q::Q0, &p("w4", &ctx)).unwrap(), p("w5", &ctx));
        assert_eq!(ctx.q(Q::Q1, &p("w2", &ctx)).unwrap(), p("w2*w3 + w5", &ctx));
        assert_eq!(
            ctx.q(Q::Q0, &p("w2*w4", &ctx)).unwrap(),
            p("w3*w4 + w2*w5", &ctx)
        );

        // Top generator of BSO(2n): Q0 kills it, Q1 twists by w3.
        let ctx4 = ctx_bso(4, 20);
        assert!(ctx4.q(Q::Q0, &p("w4", &ctx4)).unwrap().is_zero());
        assert_eq!(ctx4.q(Q::Q1, &p("w4", &ctx4)).unwrap(), p("w3*w4", &ctx4));
    }

    #[test]
    fn q1_via_sq_examples() {
        let ctx = ctx_bso(5, 20);
        let w2 = p("w2", &ctx);
        assert_eq!(ctx.q1_via_sq(&w2).unwrap(), p("w2*w3 + w5", &ctx));
        assert_eq!(ctx.q1_via_sq(&w2).unwrap(), ctx.q(Q::Q1, &w2).unwrap());
        assert!(ctx.q1_via_sq(&PolynomialF2::one()).unwrap().is_zero());
        assert!(ctx.q1_via_sq(&p("w2^2", &ctx)).unwrap().is_zero());
    }

    #[test]
    fn bso2_actions_vanish() {
        let ctx = ctx_bso(2, 16);
        for e in 1..=8u32 {
            let x = PolynomialF2::from_monomial(Monomial::from_exponents(&[(2, e)]));
            assert!(ctx.q(Q::Q0, &x).unwrap().is_zero());
            assert!(ctx.q(Q::Q1, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn bo_generator_actions_via_wu() {
        // In BO the Wu formula keeps the w1 terms: Q0(w1) = w1^2,
        // Q0(w2) = w1*w2 + w3, and the dual routes still agree.
        let ctx = SteenrodContext::new(RingSpec::bo(3, 20).unwrap());
        assert_eq!(ctx.q(Q::Q0, &p("w1", &ctx)).unwrap(), p("w1^2", &ctx));
        assert_eq!(ctx.q(Q::Q0, &p("w2", &ctx)).unwrap(), p("w1*w2 + w3", &ctx));
        assert_eq!(ctx.q(Q::Q1, &p("w1", &ctx)).unwrap(), p("w1^4", &ctx));
        for m in 1..=3u32 {
            let g = PolynomialF2::generator(m);
            assert_eq!(ctx.q(Q::Q1, &g).unwrap(), ctx.q1_via_sq(&g).unwrap());
        }
    }

    // The generator table: Q0(w_{2m}) = w_{2m+1},
    // Q1(w_{2m}) = w3*w_{2m} + w_{2m+3}, Q0(w_{2m+1}) = 0,
    // Q1(w_{2m+1}) = w3*w_{2m+1}, with truncation relations.
    fn table_q(spec: &RingSpec, q: Q, m: u32) -> PolynomialF2 {
        let mut out = PolynomialF2::zero();
        match (q, m % 2) {
            (Q::Q0, 0) => {
                if !spec.vanishes(m + 1) {
                    out.toggle(Monomial::generator(m + 1));
                }
            }
            (Q::Q0, _) => {}
            (Q::Q1, 0) => {
                if !spec.vanishes(3) {
                    out.toggle(Monomial::from_exponents(&[(3, 1), (m, 1)]));
                }
                if !spec.vanishes(m + 3) {
                    out.toggle(Monomial::generator(m + 3));
                }
            }
            (Q::Q1, _) => {
                if !spec.vanishes(3) {
                    out.toggle(Monomial::from_exponents(&[(3, 1), (m, 1)]));
                }
            }
        }
        out
    }

    #[test]
    fn generator_table_bso_small() {
        for n in 2..=8u32 {
            let ctx = ctx_bso(n, 24);
            for m in ctx.spec().generator_indices() {
                let g = PolynomialF2::generator(m);
                for q in [Q::Q0, Q::Q1] {
                    assert_eq!(
                        ctx.q(q, &g).unwrap(),
                        table_q(ctx.spec(), q, m),
                        "{} {} on w{m}",
                        ctx.spec(),
                        q.name()
                    );
                }
            }
        }
    }

    #[test]
    fn cache_transparency() {
        // Stored generator tables must equal values recomputed from scratch.
        let ctx = ctx_bso(6, 24);
        for m in ctx.spec().generator_indices() {
            for k in 1..=m {
                assert_eq!(ctx.sq_gen[&(k, m)], ctx.wu_formula(k, m));
            }
            let g = PolynomialF2::generator(m);
            assert_eq!(
                *ctx.q_on_generator(Q::Q0, m).unwrap(),
                ctx.sq(1, &g).unwrap()
            );
            assert_eq!(
                *ctx.q_on_generator(Q::Q1, m).unwrap(),
                ctx.q1_via_sq(&g).unwrap()
            );
        }
    }

    #[test]
    fn unstability() {
        let ctx = ctx_bso(5, 30);
        for text in ["w2*w3", "w5", "w2^2*w3", "w3*w4"] {
            let x = p(text, &ctx);
            let d = x.homogeneous_degree().unwrap() as u32;
            assert!(ctx.sq(d + 1, &x).unwrap().is_zero(), "Sq^{} {text}", d + 1);
            let square = multiply(&x, &x, ctx.spec()).unwrap();
            assert_eq!(ctx.sq(d, &x).unwrap(), square, "Sq^{d} {text}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(n: u32, max_exp: u32) -> impl Strategy<Value = PolynomialF2> {
            proptest::collection::vec(
                proptest::collection::vec((2..=n, 1..=max_exp), 0..3),
                0..4,
            )
            .prop_map(|monos| {
                let mut p = PolynomialF2::zero();
                for pairs in monos {
                    p.toggle(Monomial::from_exponents(&pairs));
                }
                p
            })
        }

        proptest! {
            #[test]
            fn nilpotence_and_commutation(x in arb_poly(6, 3)) {
                let ctx = SteenrodContext::new(RingSpec::bso(6, 64).unwrap());
                for q in [Q::Q0, Q::Q1] {
                    let once = ctx.q(q, &x).unwrap();
                    prop_assert!(ctx.q(q, &once).unwrap().is_zero());
                }
                let q01 = ctx.q(Q::Q0, &ctx.q(Q::Q1, &x).unwrap()).unwrap();
                let q10 = ctx.q(Q::Q1, &ctx.q(Q::Q0, &x).unwrap()).unwrap();
                prop_assert_eq!(q01, q10);
            }

            #[test]
            fn leibniz(x in arb_poly(5, 2), y in arb_poly(5, 2)) {
                let ctx = SteenrodContext::new(RingSpec::bso(5, 64).unwrap());
                let spec = *ctx.spec();
                let xy = multiply(&x, &y, &spec).unwrap();
                for q in [Q::Q0, Q::Q1] {
                    let lhs = ctx.q(q, &xy).unwrap();
                    let rhs = multiply(&ctx.q(q, &x).unwrap(), &y, &spec).unwrap()
                        .add(&multiply(&x, &ctx.q(q, &y).unwrap(), &spec).unwrap());
                    prop_assert_eq!(lhs, rhs);
                }
            }

            #[test]
            fn squares_annihilated(x in arb_poly(6, 2)) {
                let ctx = SteenrodContext::new(RingSpec::bso(6, 64).unwrap());
                let sq = multiply(&x, &x, ctx.spec()).unwrap();
                prop_assert!(ctx.q(Q::Q0, &sq).unwrap().is_zero());
                prop_assert!(ctx.q(Q::Q1, &sq).unwrap().is_zero());
            }

            #[test]
            fn dual_route_q1(x in arb_poly(6, 3)) {
                let ctx = SteenrodContext::new(RingSpec::bso(6, 64).unwrap());
                prop_assert_eq!(ctx.q(Q::Q1, &x).unwrap(), ctx.q1_via_sq(&x).unwrap());
            }
        }
    }
}
