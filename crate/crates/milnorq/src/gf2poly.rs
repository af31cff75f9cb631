//! GF(2) polynomial algebra on Stiefel-Whitney generators.
//!
//! Monomials are sparse exponent vectors over the generator set of a
//! [`RingSpec`]; polynomials are finite sets of monomials (coefficients in
//! GF(2) are implicit, addition is symmetric difference). Graded bases and
//! Poincaré series are truncated at the spec's degree cap.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Which family of classifying spaces the ring presents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// H*(BSO(n)) = Z/2[w2, ..., wn], w1 = 0.
    Bso,
    /// H*(BO(n)) = Z/2[w1, ..., wn].
    Bo,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Bso => write!(f, "BSO"),
            Family::Bo => write!(f, "BO"),
        }
    }
}

/// A truncated cohomology ring: family, rank and degree cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    family: Family,
    rank: u32,
    max_degree: usize,
}

impl RingSpec {
    pub fn new(family: Family, rank: u32, max_degree: usize) -> Result<Self> {
        let min = match family {
            Family::Bso => 2,
            Family::Bo => 1,
        };
        if rank < min {
            return Err(Error::InvalidRank {
                rank,
                family: family.to_string(),
                need: format!("rank >= {min}"),
            });
        }
        if max_degree < 1 {
            return Err(Error::Usage("max_degree must be >= 1".into()));
        }
        Ok(RingSpec {
            family,
            rank,
            max_degree,
        })
    }

    pub fn bso(rank: u32, max_degree: usize) -> Result<Self> {
        Self::new(Family::Bso, rank, max_degree)
    }

    pub fn bo(rank: u32, max_degree: usize) -> Result<Self> {
        Self::new(Family::Bo, rank, max_degree)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn with_max_degree(&self, max_degree: usize) -> Result<Self> {
        Self::new(self.family, self.rank, max_degree)
    }

    /// Smallest generator index (2 for BSO, 1 for BO).
    pub fn min_index(&self) -> u32 {
        match self.family {
            Family::Bso => 2,
            Family::Bo => 1,
        }
    }

    pub fn generator_indices(&self) -> impl Iterator<Item = u32> {
        self.min_index()..=self.rank
    }

    pub fn is_generator(&self, index: u32) -> bool {
        index >= self.min_index() && index <= self.rank
    }

    /// True iff the class w_index is identically zero in this ring.
    /// Index 0 denotes the unit and is not zero.
    pub fn vanishes(&self, index: u32) -> bool {
        index != 0 && !self.is_generator(index)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.rank)
    }
}

/// A monomial in the Stiefel-Whitney generators: sorted sparse exponent
/// vector, no zero exponents stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(u32, u32)>, // (generator index, exponent >= 1), sorted by index
}

impl Monomial {
    /// The empty monomial (unit of the ring).
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
        }
    }

    pub fn generator(index: u32) -> Self {
        Monomial {
            factors: vec![(index, 1)],
        }
    }

    /// Builds from (index, exponent) pairs; zero exponents are dropped and
    /// repeated indices merged.
    pub fn from_exponents(pairs: &[(u32, u32)]) -> Self {
        let mut map: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        let mut sorted: Vec<(u32, u32)> = pairs.to_vec();
        sorted.sort_by_key(|&(i, _)| i);
        for (i, e) in sorted {
            if e == 0 {
                continue;
            }
            match map.last_mut() {
                Some((j, acc)) if *j == i => *acc += e,
                _ => map.push((i, e)),
            }
        }
        Monomial { factors: map }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|&(i, e)| i as usize * e as usize)
            .sum()
    }

    pub fn exponent_of(&self, index: u32) -> u32 {
        self.factors
            .iter()
            .find(|&&(i, _)| i == index)
            .map_or(0, |&(_, e)| e)
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn is_valid_in(&self, spec: &RingSpec) -> bool {
        self.factors.iter().all(|&(i, _)| spec.is_generator(i))
    }

    /// Raw product (no relations).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (ia, ea) = self.factors[i];
            let (ib, eb) = other.factors[j];
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => {
                    out.push((ia, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((ib, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((ia, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Product with the spec's relations applied; `None` when the result
    /// vanishes (some factor index is not a generator of the ring).
    pub fn mul_in(&self, other: &Monomial, spec: &RingSpec) -> Option<Monomial> {
        let m = self.mul(other);
        if m.is_valid_in(spec) {
            Some(m)
        } else {
            None
        }
    }

    /// Divides by one copy of generator `index`, if present.
    pub fn div_generator(&self, index: u32) -> Option<Monomial> {
        let pos = self.factors.iter().position(|&(i, _)| i == index)?;
        let mut factors = self.factors.clone();
        if factors[pos].1 == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some(Monomial { factors })
    }

    /// The sequence of generator indices with multiplicity, ascending.
    /// Only used by tests as the ordering oracle; `Ord` below matches it.
    pub fn index_sequence(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.factors.len());
        for &(i, e) in &self.factors {
            for _ in 0..e {
                out.push(i);
            }
        }
        out
    }
}

/// Canonical order: lexicographic on the sequence of generator indices with
/// multiplicity (so w2^3 < w3^2 and w2*w3 < w5). Within a fixed degree this
/// is the order of every graded basis; printing also uses it.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let a = &self.factors;
        let b = &other.factors;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ia, ea) = a[i];
            let (ib, eb) = b[j];
            match ia.cmp(&ib) {
                Less => return Less,
                Greater => return Greater,
                Equal => match ea.cmp(&eb) {
                    Equal => {
                        i += 1;
                        j += 1;
                    }
                    // The side that runs out of copies of this index next
                    // shows either a larger index or the end of the word.
                    Less => return if i + 1 == a.len() { Less } else { Greater },
                    Greater => return if j + 1 == b.len() { Greater } else { Less },
                },
            }
        }
        match (i < a.len(), j < b.len()) {
            (true, false) => Greater,
            (false, true) => Less,
            _ => Equal,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(i, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "w{i}")?;
            } else {
                write!(f, "w{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A polynomial over GF(2): a finite set of monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolynomialF2 {
    terms: BTreeSet<Monomial>,
}

impl PolynomialF2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        PolynomialF2 { terms }
    }

    pub fn generator(index: u32) -> Self {
        Self::from_monomial(Monomial::generator(index))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// XOR-inserts a monomial (GF(2) addition of one term).
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// GF(2) sum.
    pub fn add(&self, other: &PolynomialF2) -> PolynomialF2 {
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    /// The degree when homogeneous and nonzero, else `None`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.iter();
        let d = it.next()?.degree();
        if it.all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn max_term_degree(&self) -> Option<usize> {
        self.terms.iter().map(|m| m.degree()).max()
    }

    pub fn is_valid_in(&self, spec: &RingSpec) -> bool {
        self.terms.iter().all(|m| m.is_valid_in(spec))
    }
}

impl fmt::Display for PolynomialF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for m in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolynomialF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// GF(2) product with the spec's relations applied: any product monomial
/// containing an index outside the generator set (in particular w1 in BSO,
/// or an index above the rank) is dropped; identical monomials cancel.
pub fn multiply(p: &PolynomialF2, q: &PolynomialF2, spec: &RingSpec) -> Result<PolynomialF2> {
    for m in p.terms().chain(q.terms()) {
        if let Some(&(i, _)) = m.factors().iter().find(|&&(i, _)| !spec.is_generator(i)) {
            return Err(Error::InvalidIndex {
                index: i,
                ring: spec.to_string(),
            });
        }
    }
    let mut out = PolynomialF2::zero();
    for a in p.terms() {
        for b in q.terms() {
            if let Some(m) = a.mul_in(b, spec) {
                out.toggle(m);
            }
        }
    }
    Ok(out)
}

/// Every monomial of total degree `d`, in canonical order.
pub fn enumerate_basis(spec: &RingSpec, d: usize) -> Result<Vec<Monomial>> {
    if d > spec.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            max: spec.max_degree(),
        });
    }
    let gens: Vec<u32> = spec.generator_indices().collect();
    let mut out = Vec::new();
    let mut stack: Vec<(u32, u32)> = Vec::new();
    enumerate_rec(&gens, d, &mut stack, &mut out);
    Ok(out)
}

fn enumerate_rec(gens: &[u32], d: usize, stack: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
    if d == 0 {
        out.push(Monomial {
            factors: stack.clone(),
        });
        return;
    }
    let Some((&g, rest)) = gens.split_first() else {
        return;
    };
    if rest.is_empty() {
        if d % g as usize == 0 {
            stack.push((g, (d / g as usize) as u32));
            out.push(Monomial {
                factors: stack.clone(),
            });
            stack.pop();
        }
        return;
    }
    // Highest power of the smallest generator first: that is exactly the
    // canonical (index-sequence) order within the degree.
    for e in (1..=(d / g as usize) as u32).rev() {
        stack.push((g, e));
        enumerate_rec(rest, d - g as usize * e as usize, stack, out);
        stack.pop();
    }
    enumerate_rec(rest, d, stack, out);
}

/// Per-degree ordered monomial bases for degrees 0..=D with an index map.
#[derive(Clone)]
pub struct GradedBasis {
    spec: RingSpec,
    by_degree: Vec<Vec<Monomial>>,
    index: HashMap<Monomial, (usize, usize)>,
}

impl GradedBasis {
    pub fn new(spec: RingSpec) -> Self {
        let mut by_degree = Vec::with_capacity(spec.max_degree() + 1);
        let mut index = HashMap::new();
        for d in 0..=spec.max_degree() {
            let list = enumerate_basis(&spec, d).expect("degree within cap");
            for (pos, m) in list.iter().enumerate() {
                index.insert(m.clone(), (d, pos));
            }
            by_degree.push(list);
        }
        GradedBasis {
            spec,
            by_degree,
            index,
        }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn max_degree(&self) -> usize {
        self.spec.max_degree()
    }

    pub fn degree_list(&self, d: usize) -> &[Monomial] {
        &self.by_degree[d]
    }

    pub fn dim(&self, d: usize) -> usize {
        self.by_degree.get(d).map_or(0, |v| v.len())
    }

    pub fn position(&self, m: &Monomial) -> Option<(usize, usize)> {
        self.index.get(m).copied()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(|v| v.len()).collect()
    }
}

/// Exact per-degree dimension counts up to the cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoincareSeries {
    coeffs: Vec<u64>,
}

impl PoincareSeries {
    pub fn new(coeffs: Vec<u64>) -> Self {
        PoincareSeries { coeffs }
    }

    pub fn zeros(max_degree: usize) -> Self {
        PoincareSeries {
            coeffs: vec![0; max_degree + 1],
        }
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn set(&mut self, d: usize, v: u64) {
        self.coeffs[d] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Degrees with a nonzero coefficient, with multiplicity.
    pub fn support_multiset(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (d, &c) in self.coeffs.iter().enumerate() {
            for _ in 0..c {
                out.push(d);
            }
        }
        out
    }

    pub fn eq_upto(&self, other: &PoincareSeries, hi: usize) -> bool {
        (0..=hi).all(|d| self.coeff(d) == other.coeff(d))
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.coeffs {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Poincaré series of the ring: coeffs[d] = number of degree-d monomials.
/// Computed by the standard partition DP; the enumeration route serves as
/// the oracle in tests.
pub fn poincare(spec: &RingSpec, reduced: bool) -> PoincareSeries {
    let d_max = spec.max_degree();
    let mut coeffs = vec![0u64; d_max + 1];
    coeffs[0] = 1;
    for g in spec.generator_indices() {
        let g = g as usize;
        for d in g..=d_max {
            coeffs[d] += coeffs[d - g];
        }
    }
    if reduced {
        coeffs[0] = 0;
    }
    PoincareSeries { coeffs }
}

/// Parses the element grammar:
///
/// ```text
/// poly   := term ('+' term)* | '0'
/// term   := '1' | factor ('*' factor)*
/// factor := 'w' INT ('^' INT)?      INT: decimal >= 1
/// ```
///
/// Whitespace is allowed around '+' and '*' (and at the ends). The literal
/// '1' denotes the empty monomial, so printing and parsing are mutually
/// inverse on every polynomial. Errors carry the byte offset; indices
/// outside the spec's generator set and explicit zero exponents are
/// rejected.
pub fn parse_poly(text: &str, spec: &RingSpec) -> Result<PolynomialF2> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
        spec,
    }
    .parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    spec: &'a RingSpec,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<PolynomialF2> {
        self.skip_ws();
        if self.peek() == Some(b'0') {
            let at = self.pos;
            self.pos += 1;
            self.skip_ws();
            if self.pos != self.bytes.len() {
                return self.err(self.pos, "trailing input after '0'");
            }
            let _ = at;
            return Ok(PolynomialF2::zero());
        }
        let mut poly = PolynomialF2::zero();
        loop {
            let term = self.parse_term()?;
            poly.toggle(term);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                }
                Some(c) => {
                    return self.err(self.pos, format!("expected '+' or end, found {:?}", c as char))
                }
            }
        }
        Ok(poly)
    }

    fn parse_term(&mut self) -> Result<Monomial> {
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Monomial::one());
        }
        let mut m = self.parse_factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                let f = self.parse_factor()?;
                m = m.mul(&f);
            } else {
                return Ok(m);
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Monomial> {
        match self.peek() {
            Some(b'w') => self.pos += 1,
            Some(c) => return self.err(self.pos, format!("expected 'w', found {:?}", c as char)),
            None => return self.err(self.pos, "expected 'w', found end of input"),
        }
        let idx_at = self.pos;
        let index = self.parse_int()?;
        if index == 0 {
            return self.err(idx_at, "generator index must be >= 1");
        }
        if !self.spec.is_generator(index as u32) {
            return self.err(
                idx_at,
                format!("index {index} out of range for {}", self.spec),
            );
        }
        let mut exp = 1u64;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp_at = self.pos;
            exp = self.parse_int()?;
            if exp == 0 {
                return self.err(exp_at, "exponent 0 rejected");
            }
        }
        Ok(Monomial::from_exponents(&[(index as u32, exp as u32)]))
    }

    fn parse_int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(start, "expected a decimal integer");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse::<u64>()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "integer too large".into(),
            })
    }
}
