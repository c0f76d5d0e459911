//! Noncommutative polynomials over a free algebra, oriented rewriting for
//! ideal membership, bounded confluence via critical pairs, derivation
//! tests on generators, and extraction of finite-dimensional quotients.
//!
//! Words are sequences of generator indices listed in decreasing
//! precedence, compared in degree-lexicographic order; every rule rewrites
//! its leading word to strictly smaller terms and reduction is leftmost on
//! the largest reducible monomial, so normal forms are deterministic.

use std::collections::BTreeMap;

use num::integer::lcm;

use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::matrix::vec_zero;
use crate::scalar::Cyclotomic;

/// A word in the free monoid over the generator alphabet. Generator index 0
/// has the highest precedence. Ordering is degree-lexicographic and a
/// larger word compares as `Greater`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Leftmost occurrence of `pat` as a subword, if any.
    fn find(&self, pat: &Word) -> Option<usize> {
        if pat.0.is_empty() || pat.0.len() > self.0.len() {
            return None;
        }
        (0..=self.0.len() - pat.0.len()).find(|&i| self.0[i..i + pat.0.len()] == pat.0[..])
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // longer words are larger; at equal length, smaller generator index
        // (higher precedence) earlier means larger word
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Noncommutative polynomial: a map from words to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCPoly {
    terms: BTreeMap<Word, Cyclotomic>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: u64) -> NCPoly {
        NCPoly::monomial(Word::empty(), Cyclotomic::one(order))
    }

    pub fn monomial(w: Word, c: Cyclotomic) -> NCPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { terms }
    }

    pub fn generator(i: u32, order: u64) -> NCPoly {
        NCPoly::monomial(Word(vec![i]), Cyclotomic::one(order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Largest term in the word order.
    pub fn leading(&self) -> Option<(&Word, &Cyclotomic)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, w: Word, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let s = existing.add_ref(c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), &c.neg_ref());
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x.mul_ref(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &c1.mul_ref(c2));
            }
        }
        out
    }

    /// u * self * v for words u, v.
    fn sandwich(&self, u: &Word, v: &Word) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (u.concat(w).concat(v), c.clone()))
                .collect(),
        }
    }
}

/// An oriented rule: the leading word rewrites to a strictly smaller
/// polynomial.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

/// An oriented, order-decreasing rule set over a declared alphabet.
#[derive(Clone)]
pub struct RewriteSystem {
    pub generators: Vec<String>,
    pub order: u64,
    pub rules: Vec<Rule>,
}

impl RewriteSystem {
    /// Orient relations by their leading terms. Rejects duplicate leading
    /// words and relations whose remaining terms do not drop in the order.
    pub fn from_relations(
        generators: Vec<String>,
        order: u64,
        relations: &[NCPoly],
    ) -> Result<RewriteSystem> {
        let mut rules: Vec<Rule> = Vec::new();
        for rel in relations {
            let (lw, lc) = rel
                .leading()
                .ok_or_else(|| Error::BadOrientation("zero relation".into()))?;
            if lw.is_empty() {
                return Err(Error::BadOrientation(
                    "relation with constant leading term".into(),
                ));
            }
            let inv = lc.inv()?;
            let mut rhs = NCPoly::zero();
            for (w, c) in rel.terms() {
                if w != lw {
                    rhs.add_term(w.clone(), &c.mul_ref(&inv).neg_ref());
                }
            }
            if let Some((rw, _)) = rhs.leading() {
                if rw >= lw {
                    return Err(Error::BadOrientation(format!(
                        "rule does not decrease the term order: {:?} -> {:?}",
                        lw, rw
                    )));
                }
            }
            if rules.iter().any(|r| r.lhs == *lw) {
                return Err(Error::DuplicateLeadingWord(format!("{:?}", lw)));
            }
            rules.push(Rule {
                lhs: lw.clone(),
                rhs,
            });
        }
        Ok(RewriteSystem {
            generators,
            order,
            rules,
        })
    }

    /// Leftmost reducible position of a word under the first matching rule.
    fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (ri, rule) in self.rules.iter().enumerate() {
            if let Some(pos) = w.find(&rule.lhs) {
                best = match best {
                    None => Some((pos, ri)),
                    Some((bp, bi)) => {
                        if pos < bp {
                            Some((pos, ri))
                        } else {
                            Some((bp, bi))
                        }
                    }
                };
            }
        }
        best
    }
}

/// Normal form: repeatedly rewrite the largest reducible monomial at its
/// leftmost redex with the first matching rule.
pub fn nf(p: &NCPoly, r: &RewriteSystem, step_cap: usize) -> Result<NCPoly> {
    let mut cur = p.clone();
    let mut steps = 0usize;
    loop {
        // largest reducible term
        let redex = cur.terms.iter().rev().find_map(|(w, c)| {
            r.find_redex(w)
                .map(|(pos, ri)| (w.clone(), c.clone(), pos, ri))
        });
        let Some((w, c, pos, ri)) = redex else {
            return Ok(cur);
        };
        if steps >= step_cap {
            return Err(Error::StepCapExceeded(step_cap));
        }
        steps += 1;
        let rule = &r.rules[ri];
        let u = Word(w.0[..pos].to_vec());
        let v = Word(w.0[pos + rule.lhs.len()..].to_vec());
        cur.add_term(w.clone(), &c.neg_ref());
        let replaced = rule.rhs.sandwich(&u, &v).scale(&c);
        cur = cur.add(&replaced);
    }
}

/// A critical pair that failed to resolve.
#[derive(Clone, Debug)]
pub struct UnresolvedPair {
    pub rule_a: usize,
    pub rule_b: usize,
    pub ambiguity: Word,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub degree_bound: usize,
    pub checked_pairs: usize,
    pub unresolved: Vec<UnresolvedPair>,
}

impl ConfluenceReport {
    pub fn ok(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Resolve all overlap and inclusion ambiguities of the rule leading words
/// whose ambiguity word has length at most `degree_bound`.
pub fn confluence_check(
    r: &RewriteSystem,
    degree_bound: usize,
    step_cap: usize,
) -> Result<ConfluenceReport> {
    let mut unresolved = Vec::new();
    let mut checked = 0usize;
    let n = r.rules.len();
    for a in 0..n {
        for b in 0..n {
            let la = &r.rules[a].lhs;
            let lb = &r.rules[b].lhs;
            // proper overlaps: a suffix of la equals a prefix of lb
            for k in 1..la.len().min(lb.len()) {
                if la.0[la.len() - k..] == lb.0[..k] {
                    let amb = Word(
                        la.0.iter()
                            .chain(lb.0[k..].iter())
                            .copied()
                            .collect::<Vec<_>>(),
                    );
                    if amb.len() > degree_bound {
                        continue;
                    }
                    checked += 1;
                    // reduce via rule a at position 0 and via rule b at the end
                    let tail = Word(lb.0[k..].to_vec());
                    let head = Word(la.0[..la.len() - k].to_vec());
                    let via_a = r.rules[a].rhs.sandwich(&Word::empty(), &tail);
                    let via_b = r.rules[b].rhs.sandwich(&head, &Word::empty());
                    if nf(&via_a, r, step_cap)? != nf(&via_b, r, step_cap)? {
                        unresolved.push(UnresolvedPair {
                            rule_a: a,
                            rule_b: b,
                            ambiguity: amb,
                        });
                    }
                }
            }
            // inclusion: lb occurs strictly inside la
            if a != b && lb.len() < la.len() {
                if let Some(pos) = la.find(lb) {
                    if la.len() <= degree_bound {
                        checked += 1;
                        let u = Word(la.0[..pos].to_vec());
                        let v = Word(la.0[pos + lb.len()..].to_vec());
                        let via_a = r.rules[a].rhs.clone();
                        let via_b = r.rules[b].rhs.sandwich(&u, &v);
                        if nf(&via_a, r, step_cap)? != nf(&via_b, r, step_cap)? {
                            unresolved.push(UnresolvedPair {
                                rule_a: a,
                                rule_b: b,
                                ambiguity: la.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(ConfluenceReport {
        degree_bound,
        checked_pairs: checked,
        unresolved,
    })
}

/// Two-sided ideal membership through normal forms; requires confluence
/// established at a bound covering the degree of p.
pub fn ideal_member(
    p: &NCPoly,
    r: &RewriteSystem,
    report: &ConfluenceReport,
    step_cap: usize,
) -> Result<bool> {
    if !report.ok() || report.degree_bound < p.degree() {
        return Err(Error::ConfluenceNotEstablished {
            required: p.degree(),
            available: if report.ok() {
                Some(report.degree_bound)
            } else {
                None
            },
        });
    }
    Ok(nf(p, r, step_cap)?.is_zero())
}

/// A derivation of the free algebra, given by its images on the generators
/// and extended by the Leibniz rule.
#[derive(Clone, Debug)]
pub struct FreeDerivation {
    pub images: Vec<NCPoly>,
}

impl FreeDerivation {
    pub fn apply_word(&self, w: &Word, order: u64) -> NCPoly {
        let mut out = NCPoly::zero();
        for i in 0..w.len() {
            let prefix = NCPoly::monomial(Word(w.0[..i].to_vec()), Cyclotomic::one(order));
            let suffix = NCPoly::monomial(Word(w.0[i + 1..].to_vec()), Cyclotomic::one(order));
            let mid = &self.images[w.0[i] as usize];
            out = out.add(&prefix.mul(mid).mul(&suffix));
        }
        out
    }

    pub fn apply(&self, p: &NCPoly, order: u64) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out = out.add(&self.apply_word(w, order).scale(c));
        }
        out
    }
}

/// D preserves the ideal iff D(g) lies in the ideal for every listed
/// generator g: by Leibniz, D(u g v) = D(u) g v + u D(g) v + u g D(v) and
/// the first and last summands already lie in the ideal, so membership of
/// every D(g) is equivalent to D(C) inside C.
pub fn derivation_preserves_ideal(
    d: &FreeDerivation,
    ideal_gens: &[NCPoly],
    r: &RewriteSystem,
    report: &ConfluenceReport,
    step_cap: usize,
) -> Result<bool> {
    for g in ideal_gens {
        let dg = d.apply(g, r.order);
        if !ideal_member(&dg, r, report, step_cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerate the irreducible words; when there are finitely many below the
/// cap, assemble the quotient algebra with structure constants nf(w_i w_j).
pub fn finite_quotient(
    r: &RewriteSystem,
    report: &ConfluenceReport,
    word_cap: usize,
    step_cap: usize,
) -> Result<(FDAlgebra, Vec<Word>)> {
    if !report.ok() {
        return Err(Error::ConfluenceNotEstablished {
            required: 0,
            available: None,
        });
    }
    let gens = r.generators.len() as u32;
    // Irreducible words are closed under taking subwords, so grow by one
    // letter at a time; a new leading-word occurrence must be a suffix.
    let mut words: Vec<Word> = vec![Word::empty()];
    let mut frontier: Vec<Word> = vec![Word::empty()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..gens {
                let mut cand = w.0.clone();
                cand.push(g);
                let cand = Word(cand);
                let reducible = r.rules.iter().any(|rule| {
                    rule.lhs.len() <= cand.len()
                        && cand.0[cand.len() - rule.lhs.len()..] == rule.lhs.0[..]
                });
                if !reducible {
                    next.push(cand);
                }
            }
        }
        words.extend(next.iter().cloned());
        if words.len() > word_cap {
            return Err(Error::QuotientNotFinite(word_cap));
        }
        frontier = next;
    }
    words.sort();
    let dim = words.len();
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let order = r.order;
    let mut sc = vec![Cyclotomic::zero(order); dim * dim * dim];
    let mut max_deg = 0usize;
    for (i, wi) in words.iter().enumerate() {
        for (j, wj) in words.iter().enumerate() {
            let prod = NCPoly::monomial(wi.concat(wj), Cyclotomic::one(order));
            max_deg = max_deg.max(wi.len() + wj.len());
            let normal = nf(&prod, r, step_cap)?;
            for (w, c) in normal.terms() {
                let k = *index.get(w).ok_or_else(|| {
                    Error::Internal("normal form contains a word outside the basis".into())
                })?;
                sc[(i * dim + j) * dim + k] = c.clone();
            }
        }
    }
    if report.degree_bound < max_deg {
        return Err(Error::ConfluenceNotEstablished {
            required: max_deg,
            available: Some(report.degree_bound),
        });
    }
    let mut unit = vec_zero(dim, order);
    unit[0] = Cyclotomic::one(order);
    debug_assert!(words[0].is_empty());
    let labels = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.0.iter()
                    .map(|&g| r.generators[g as usize].clone())
                    .collect::<Vec<_>>()
                    .join("")
            }
        })
        .collect();
    let alg = FDAlgebra::new(labels, unit, sc)?;
    Ok((alg, words))
}

/// The Heisenberg presentation: x y - y x - i over Q(zeta_4), oriented
/// with x above y.
pub fn heisenberg_system() -> RewriteSystem {
    let order = lcm(4, 1);
    let i = Cyclotomic::root_of_unity(4, 1);
    let mut rel = NCPoly::monomial(Word(vec![0, 1]), Cyclotomic::one(order));
    rel.add_term(Word(vec![1, 0]), &Cyclotomic::from_integer(-1, order));
    rel.add_term(Word::empty(), &i.neg_ref());
    RewriteSystem::from_relations(vec!["x".into(), "y".into()], order, &[rel])
        .expect("heisenberg relation orients")
}

/// The clock-and-shift presentation: x y - q y x, x^n - 1, y^n - 1 with
/// q = zeta_n.
pub fn clock_shift_system(n: usize) -> RewriteSystem {
    let order = n as u64;
    let q = Cyclotomic::root_of_unity(order, 1);
    let mut r1 = NCPoly::monomial(Word(vec![0, 1]), Cyclotomic::one(order));
    r1.add_term(Word(vec![1, 0]), &q.neg_ref());
    let mut r2 = NCPoly::monomial(Word(vec![0; n]), Cyclotomic::one(order));
    r2.add_term(Word::empty(), &Cyclotomic::from_integer(-1, order));
    let mut r3 = NCPoly::monomial(Word(vec![1; n]), Cyclotomic::one(order));
    r3.add_term(Word::empty(), &Cyclotomic::from_integer(-1, order));
    RewriteSystem::from_relations(vec!["x".into(), "y".into()], order, &[r1, r2, r3])
        .expect("clock/shift relations orient")
}
