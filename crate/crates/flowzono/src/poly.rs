//! Sparse truncated multivariate polynomials over a fixed variable set.
//!
//! Terms are kept in a `BTreeMap` under graded-lexicographic monomial order,
//! which makes iteration (and therefore rendering and serialization)
//! deterministic. Operations that can introduce coefficient rounding return
//! an accompanying error interval so that Taylor-model remainders can absorb
//! it; truncation spill is reported the same way, as a symmetric interval
//! valid over the normalized domain `[-1, 1]^n`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::interval::{add_up, two_sum, Interval, IntervalBox};

/// Exponent vector of a single monomial; ordered by total degree first, then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u8>,
}

impl Monomial {
    pub fn new(exps: Vec<u8>) -> Monomial {
        Monomial { exps }
    }

    pub fn constant(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Range of the monomial over `[-1, 1]^n`: `[0, 1]` when all exponents
    /// are even, `[-1, 1]` otherwise.
    fn unit_range(&self) -> Interval {
        if self.exps.iter().all(|&e| e % 2 == 0) {
            Interval::new(0.0, 1.0).unwrap()
        } else {
            Interval::UNIT
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial with real coefficients; no zero coefficients are
/// stored and every monomial degree is at most `max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, f64>,
    nvars: usize,
    max_order: u32,
}

impl Polynomial {
    pub fn zero(nvars: usize, max_order: u32) -> Polynomial {
        Polynomial {
            terms: BTreeMap::new(),
            nvars,
            max_order,
        }
    }

    pub fn constant(nvars: usize, max_order: u32, c: f64) -> Polynomial {
        let mut p = Polynomial::zero(nvars, max_order);
        if c != 0.0 {
            p.terms.insert(Monomial::constant(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, max_order: u32, i: usize) -> Polynomial {
        assert!(i < nvars && max_order >= 1);
        let mut p = Polynomial::zero(nvars, max_order);
        p.terms.insert(Monomial::var(nvars, i), 1.0);
        p
    }

    pub fn from_terms(
        nvars: usize,
        max_order: u32,
        terms: impl IntoIterator<Item = (Monomial, f64)>,
    ) -> Result<Polynomial> {
        let mut p = Polynomial::zero(nvars, max_order);
        for (m, c) in terms {
            if m.exps().len() != nvars {
                return Err(Error::DimMismatch(format!(
                    "monomial over {} vars in polynomial over {}",
                    m.exps().len(),
                    nvars
                )));
            }
            if m.degree() > max_order {
                return Err(Error::Domain(format!(
                    "monomial degree {} exceeds order {}",
                    m.degree(),
                    max_order
                )));
            }
            if c != 0.0 {
                let slot = p.terms.entry(m).or_insert(0.0);
                *slot += c;
                if *slot == 0.0 {
                    // keep canonical form
                }
            }
        }
        p.terms.retain(|_, c| *c != 0.0);
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&Monomial::constant(self.nvars))
    }

    /// Iterates terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    fn check_nvars(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimMismatch(format!(
                "polynomials over {} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    /// Coefficient-wise sum. The second component bounds the rounding error
    /// of the coefficient additions over `[-1, 1]^n` (zero when every
    /// addition was exact).
    pub fn add_with_err(&self, other: &Polynomial) -> Result<(Polynomial, Interval)> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        out.max_order = self.max_order.max(other.max_order);
        let mut err = 0.0f64;
        for (m, &c) in &other.terms {
            match out.terms.get_mut(m) {
                Some(slot) => {
                    let (s, round) = two_sum(*slot, c);
                    if !s.is_finite() {
                        return Err(Error::IntervalBlowup);
                    }
                    if round != 0.0 {
                        err = add_up(err, s.abs() * f64::EPSILON);
                    }
                    if s == 0.0 {
                        out.terms.remove(m);
                    } else {
                        *slot = s;
                    }
                }
                None => {
                    out.terms.insert(m.clone(), c);
                }
            }
        }
        Ok((out, Interval::symmetric(err)?))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        Ok(self.add_with_err(other)?.0)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    /// Scales by a scalar; returns the rounding-error bound over the unit
    /// domain alongside.
    pub fn scale_with_err(&self, c: f64) -> Result<(Polynomial, Interval)> {
        if !c.is_finite() {
            return Err(Error::IntervalBlowup);
        }
        let mut out = Polynomial::zero(self.nvars, self.max_order);
        let mut err = 0.0f64;
        for (m, &a) in &self.terms {
            let p = a * c;
            if !p.is_finite() {
                return Err(Error::IntervalBlowup);
            }
            if a.mul_add(c, -p) != 0.0 {
                err = add_up(err, p.abs() * f64::EPSILON);
            }
            if p != 0.0 {
                out.terms.insert(m.clone(), p);
            }
        }
        Ok((out, Interval::symmetric(err)?))
    }

    pub fn scale(&self, c: f64) -> Result<Polynomial> {
        Ok(self.scale_with_err(c)?.0)
    }

    /// Truncated product. Monomials of degree at most `order` are kept; the
    /// discarded tail and all coefficient rounding are returned as a
    /// symmetric interval bound valid over `[-1, 1]^n`.
    pub fn mul_trunc(&self, other: &Polynomial, order: u32) -> Result<(Polynomial, Interval)> {
        self.check_nvars(other)?;
        let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
        let mut spill = 0.0f64;
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let c = ca * cb;
                if !c.is_finite() {
                    return Err(Error::IntervalBlowup);
                }
                if ca.mul_add(cb, -c) != 0.0 {
                    spill = add_up(spill, c.abs() * f64::EPSILON);
                }
                let deg = ma.degree() + mb.degree();
                if deg > order {
                    spill = add_up(spill, c.abs());
                    continue;
                }
                let m = ma.mul(mb);
                let slot = acc.entry(m).or_insert(0.0);
                let (s, round) = two_sum(*slot, c);
                if !s.is_finite() {
                    return Err(Error::IntervalBlowup);
                }
                if round != 0.0 {
                    spill = add_up(spill, s.abs() * f64::EPSILON);
                }
                *slot = s;
            }
        }
        acc.retain(|_, c| *c != 0.0);
        Ok((
            Polynomial {
                terms: acc,
                nvars: self.nvars,
                max_order: order,
            },
            Interval::symmetric(spill)?,
        ))
    }

    /// Drops all monomials of degree greater than `order`, returning the
    /// symmetric spill bound over the unit domain.
    pub fn truncate(&self, order: u32) -> Result<(Polynomial, Interval)> {
        let mut out = Polynomial::zero(self.nvars, order);
        let mut spill = 0.0f64;
        for (m, &c) in &self.terms {
            if m.degree() > order {
                spill = add_up(spill, c.abs());
            } else {
                out.terms.insert(m.clone(), c);
            }
        }
        Ok((out, Interval::symmetric(spill)?))
    }

    /// Interval enclosure of the range over `dom`, evaluated
    /// monomial-by-monomial so even powers stay tight.
    pub fn eval_box(&self, dom: &IntervalBox) -> Result<Interval> {
        if dom.dim() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "evaluating {}-variable polynomial over {}-dimensional box",
                self.nvars,
                dom.dim()
            )));
        }
        let unit = dom
            .dims()
            .iter()
            .all(|iv| iv.lo() == -1.0 && iv.hi() == 1.0);
        let mut acc = Interval::ZERO;
        for (m, c) in &self.terms {
            let range = if unit {
                m.unit_range().scale(*c)?
            } else {
                let mut r = Interval::new(*c, *c)?;
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        r = r.mul(&dom.get(i).pow(e as u32)?)?;
                    }
                }
                r
            };
            acc = acc.add(&range)?;
        }
        Ok(acc)
    }

    /// Evaluates at a point (plain floating arithmetic; used by oracles and
    /// rendering, not by the validated pipeline).
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t *= x[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Splits into the linear part `b + Σ A_k x_k` and the nonlinear rest
    /// (all monomials of degree >= 2). The three parts recombine exactly.
    pub fn linear_split(&self) -> (Vec<f64>, f64, Polynomial) {
        let mut a = vec![0.0; self.nvars];
        let mut b = 0.0;
        let mut nl = Polynomial::zero(self.nvars, self.max_order);
        for (m, &c) in &self.terms {
            match m.degree() {
                0 => b = c,
                1 => {
                    let idx = m.exps().iter().position(|&e| e == 1).unwrap();
                    a[idx] = c;
                }
                _ => {
                    nl.terms.insert(m.clone(), c);
                }
            }
        }
        (a, b, nl)
    }

    /// Substitutes `x_i <- subs[i]` (each a polynomial over a common target
    /// variable set), truncating at `order`. Returns the result and a spill
    /// bound over the target unit domain.
    pub fn compose(&self, subs: &[Polynomial], order: u32) -> Result<(Polynomial, Interval)> {
        if subs.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "compose: {} substitutions for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let target_nvars = subs
            .first()
            .map(|p| p.nvars)
            .unwrap_or(0);
        let mut acc = Polynomial::zero(target_nvars, order);
        let mut spill = Interval::ZERO;
        for (m, &c) in &self.terms {
            let mut term = Polynomial::constant(target_nvars, order, c);
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    let (t, s) = term.mul_trunc(&subs[i], order)?;
                    term = t;
                    spill = spill.add(&s)?;
                }
            }
            let (sum, err) = acc.add_with_err(&term)?;
            acc = sum;
            spill = spill.add(&err)?;
        }
        Ok((acc, spill))
    }
}

impl std::fmt::Display for Polynomial {
    /// Renders in descending graded-lex order, e.g.
    /// `0.6*x1^2 - 0.5*x1 + 0.4*x2 + 1.7`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else if *c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if mag != 1.0 || m.is_constant() {
                factors.push(format!("{mag}"));
            }
            for (v, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", v + 1)),
                    _ => factors.push(format!("x{}^{}", v + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(nvars: usize, order: u32, terms: &[(&[u8], f64)]) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            order,
            terms
                .iter()
                .map(|(e, c)| (Monomial::new(e.to_vec()), *c)),
        )
        .unwrap()
    }

    /// Dense coefficient-array oracle for small polynomials (up to 3 vars).
    fn dense(p: &Polynomial, size: usize) -> Vec<f64> {
        let n = p.nvars();
        let mut out = vec![0.0; size.pow(n as u32)];
        for (m, c) in p.terms() {
            let mut idx = 0;
            for &e in m.exps() {
                idx = idx * size + e as usize;
            }
            out[idx] += c;
        }
        out
    }

    #[test]
    fn add_cancels_and_merges() {
        let a = poly(2, 3, &[(&[1, 0], 1.0)]);
        let b = poly(2, 3, &[(&[1, 0], -1.0)]);
        assert!(a.add(&b).unwrap().is_zero());

        let c = poly(2, 3, &[(&[2, 0], 0.6), (&[0, 0], 1.7)]);
        let d = poly(2, 3, &[(&[0, 1], 0.4)]);
        let sum = c.add(&d).unwrap();
        assert_eq!(sum.num_terms(), 3);
        assert_eq!(sum.to_string(), "0.6*x1^2 + 0.4*x2 + 1.7");
    }

    #[test]
    fn add_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let mut mk = || {
                let mut terms = Vec::new();
                for _ in 0..rng.random_range(0..8) {
                    let e = [rng.random_range(0u8..3), rng.random_range(0u8..3)];
                    terms.push((Monomial::new(e.to_vec()), rng.random_range(-2.0..2.0)));
                }
                Polynomial::from_terms(2, 4, terms).unwrap()
            };
            let a = mk();
            let b = mk();
            let sum = a.add(&b).unwrap();
            let da = dense(&a, 5);
            let db = dense(&b, 5);
            let ds = dense(&sum, 5);
            for i in 0..da.len() {
                assert_eq!(ds[i], da[i] + db[i]);
            }
        }
    }

    #[test]
    fn mul_trunc_keeps_and_spills() {
        let x = poly(1, 2, &[(&[1], 1.0)]);
        let (sq, spill) = x.mul_trunc(&x, 2).unwrap();
        assert_eq!(sq.to_string(), "x1^2");
        assert_eq!(spill, Interval::ZERO);

        let (zero, spill) = x.mul_trunc(&x, 1).unwrap();
        assert!(zero.is_zero());
        assert_eq!(spill, Interval::new(-1.0, 1.0).unwrap());
    }

    #[test]
    fn mul_trunc_vs_dense_oracle_with_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let mut mk = || {
                let mut terms = Vec::new();
                for _ in 0..rng.random_range(1..6) {
                    let e = [rng.random_range(0u8..4), rng.random_range(0u8..4)];
                    if (e[0] + e[1]) as u32 <= 3 {
                        terms.push((Monomial::new(e.to_vec()), rng.random_range(-2.0..2.0)));
                    }
                }
                Polynomial::from_terms(2, 3, terms).unwrap()
            };
            let a = mk();
            let b = mk();
            let (t, spill) = a.mul_trunc(&b, 3).unwrap();
            for _ in 0..200 {
                let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                let exact = a.eval_point(&x) * b.eval_point(&x);
                let kept = t.eval_point(&x);
                let resid = exact - kept;
                assert!(
                    spill.lo() - 1e-12 <= resid && resid <= spill.hi() + 1e-12,
                    "tail {resid} outside spill {spill}"
                );
            }
        }
    }

    #[test]
    fn eval_box_even_power_tight() {
        let p = poly(2, 2, &[(&[2, 0], 0.6)]);
        let r = p.eval_box(&IntervalBox::unit(2)).unwrap();
        assert_eq!(r.lo(), 0.0);
        assert!((r.hi() - 0.6).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn eval_box_constant() {
        let p = poly(1, 2, &[(&[0], 1.7)]);
        let dom = IntervalBox::new(vec![Interval::new(-3.0, 5.0).unwrap()]).unwrap();
        let r = p.eval_box(&dom).unwrap();
        assert!(r.contains(1.7) && r.width() <= 2.0 * f64::EPSILON * 1.7);
    }

    #[test]
    fn eval_box_monomialwise_is_sound_not_tight() {
        // -0.5x^2 + 3x over [-1,1]: exact range [-3.5, 2.5]
        let p = poly(1, 2, &[(&[2], -0.5), (&[1], 3.0)]);
        let r = p.eval_box(&IntervalBox::unit(1)).unwrap();
        assert!(r.lo() <= -3.5 && r.lo() >= -3.5 - 1e-12);
        assert!(r.hi() >= 2.5 && r.hi() <= 3.5 + 1e-12);
        for i in 0..=1000 {
            let x = -1.0 + 2.0 * (i as f64) / 1000.0;
            assert!(r.contains(-0.5 * x * x + 3.0 * x));
        }
    }

    #[test]
    fn linear_split_paper_shape() {
        let p = poly(2, 2, &[(&[2, 0], 0.6), (&[1, 0], -0.5), (&[0, 1], 0.4), (&[0, 0], 1.7)]);
        let (a, b, nl) = p.linear_split();
        assert_eq!(a, vec![-0.5, 0.4]);
        assert_eq!(b, 1.7);
        assert_eq!(nl.to_string(), "0.6*x1^2");
    }

    #[test]
    fn linear_split_constant() {
        let p = poly(2, 2, &[(&[0, 0], 5.0)]);
        let (a, b, nl) = p.linear_split();
        assert_eq!(a, vec![0.0, 0.0]);
        assert_eq!(b, 5.0);
        assert!(nl.is_zero());
    }

    #[test]
    fn linear_split_recombines() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut terms = Vec::new();
            for _ in 0..rng.random_range(1..10) {
                let e = [
                    rng.random_range(0u8..3),
                    rng.random_range(0u8..3),
                    rng.random_range(0u8..2),
                ];
                terms.push((Monomial::new(e.to_vec()), rng.random_range(-5.0..5.0)));
            }
            let p = Polynomial::from_terms(3, 6, terms).unwrap();
            let (a, b, nl) = p.linear_split();
            let mut rebuilt = Polynomial::constant(3, 6, b);
            for (i, &c) in a.iter().enumerate() {
                rebuilt = rebuilt
                    .add(&Polynomial::var(3, 6, i).scale(c).unwrap())
                    .unwrap();
            }
            rebuilt = rebuilt.add(&nl).unwrap();
            assert_eq!(rebuilt, p);
        }
    }

    #[test]
    fn display_zero_and_signs() {
        assert_eq!(Polynomial::zero(2, 3).to_string(), "0");
        let p = poly(2, 2, &[(&[1, 0], -1.0), (&[0, 0], -1.7)]);
        assert_eq!(p.to_string(), "-x1 - 1.7");
    }

    #[test]
    fn compose_affine() {
        // p(x) = x^2, substitute x <- 1 + y  =>  1 + 2y + y^2
        let p = poly(1, 2, &[(&[2], 1.0)]);
        let sub = poly(1, 2, &[(&[0], 1.0), (&[1], 1.0)]);
        let (q, spill) = p.compose(&[sub], 2).unwrap();
        assert_eq!(q.to_string(), "x1^2 + 2*x1 + 1");
        assert_eq!(spill, Interval::ZERO);
    }
}
