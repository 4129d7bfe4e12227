//! Factorization of monic polynomials with n-complex coefficients.
//!
//! Each spectral slot carries an ordinary polynomial. Its roots are found
//! independently, and a root set of the n-complex polynomial takes one root
//! from every slot per factor. Different assignments give the many distinct
//! factorizations of one polynomial.
//!
//! Real slots (`v_+`, `v_-`) whose polynomial has complex roots cannot
//! produce linear factors with real components; those conjugate pairs are
//! fused into quadratic factors.

use crate::algebra::{NComplex, Variant};
use crate::error::{Error, Result};
use crate::spectral::{slots, Slot, Spectrum};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashSet;
use std::f64::consts::TAU;

/// Default cap on enumerated factorizations.
pub const DEFAULT_LIMIT: usize = 10_000;

const MAX_ITER: usize = 500;
const RESTARTS: usize = 3;
const CLUSTER_REL: f64 = 1e-6;

/// `u^m + a_1 u^(m-1) + ... + a_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NPolynomial {
    variant: Variant,
    n: usize,
    coefficients: Vec<NComplex>,
}

impl NPolynomial {
    pub fn new(variant: Variant, n: usize, coefficients: Vec<NComplex>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::domain("polynomial degree must be at least 1"));
        }
        for c in &coefficients {
            if c.variant() != variant || c.n() != n {
                return Err(Error::DimensionMismatch {
                    left: format!("{variant}:n={n}"),
                    right: format!("{}:n={}", c.variant(), c.n()),
                });
            }
        }
        Ok(NPolynomial {
            variant,
            n,
            coefficients,
        })
    }

    /// Polynomial with scalar coefficients `a_l * 1`.
    pub fn scalar(variant: Variant, n: usize, a: &[f64]) -> Result<Self> {
        let one = NComplex::one(variant, n)?;
        let c = a.iter().map(|&v| one.scale(v)).collect::<Result<_>>()?;
        Self::new(variant, n, c)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// `a_1 .. a_m`.
    pub fn coefficients(&self) -> &[NComplex] {
        &self.coefficients
    }

    pub fn eval(&self, u: &NComplex) -> Result<NComplex> {
        let mut acc = NComplex::one(self.variant, self.n)?;
        for a in &self.coefficients {
            acc = acc.mul(u)?.add(a)?;
        }
        Ok(acc)
    }

    /// `|u|^m + sum |a_l| |u|^(m-l)`, the natural size of `P(u)`.
    pub fn eval_scale(&self, u: &NComplex) -> f64 {
        let r = u.modulus();
        let mut acc = 1.0;
        for a in &self.coefficients {
            acc = acc * r + a.modulus();
        }
        acc
    }
}

/// Monic polynomial of one slot, `c[0] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotPolynomial {
    pub slot: Slot,
    pub coefficients: Vec<Complex64>,
}

pub fn component_polynomials(p: &NPolynomial) -> Vec<SlotPolynomial> {
    let spectra: Vec<Vec<Complex64>> = p
        .coefficients
        .iter()
        .map(|a| Spectrum::of(a).values())
        .collect();
    slots(p.variant, p.n)
        .into_iter()
        .enumerate()
        .map(|(i, slot)| {
            let mut c = vec![Complex64::new(1.0, 0.0)];
            c.extend(spectra.iter().map(|v| v[i]));
            SlotPolynomial {
                slot,
                coefficients: c,
            }
        })
        .collect()
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &a in c {
        d = d * z + p;
        p = p * z + a;
    }
    (p, d)
}

fn backward_ok(c: &[Complex64], z: Complex64, tol: f64) -> bool {
    let r = z.norm();
    let scale = c.iter().fold(0.0, |acc, a| acc * r + a.norm());
    horner(c, z).norm() <= tol * scale
}

/// Durand-Kerner iteration on a monic polynomial, followed by Newton polishing.
fn simultaneous_roots(c: &[Complex64], tol: f64, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let m = c.len() - 1;
    if m == 1 {
        return Ok(vec![-c[1]]);
    }
    // Fujiwara-type bound on the root moduli
    let bound = (1..=m)
        .map(|l| c[l].norm().powf(1.0 / l as f64))
        .fold(0.0f64, f64::max)
        * 2.0;
    if bound == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); m]);
    }
    for attempt in 0..=RESTARTS {
        let mut z: Vec<Complex64> = (0..m)
            .map(|j| {
                if attempt == 0 {
                    Complex64::from_polar(0.5 * bound, TAU * j as f64 / m as f64 + 0.4)
                } else {
                    let r = bound * rng.gen_range(0.1..1.0);
                    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
                }
            })
            .collect();
        for _ in 0..MAX_ITER {
            let mut step = 0.0f64;
            for j in 0..m {
                let mut denom = Complex64::new(1.0, 0.0);
                for k in 0..m {
                    if k != j {
                        denom *= z[j] - z[k];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = Complex64::new(bound * 1e-12, 0.0);
                }
                let delta = horner(c, z[j]) / denom;
                if delta.is_finite() {
                    z[j] -= delta;
                    step = step.max(delta.norm());
                }
            }
            if step <= 1e-15 * bound {
                break;
            }
        }
        for r in z.iter_mut() {
            for _ in 0..4 {
                let (p, d) = horner_with_derivative(c, *r);
                if d.norm() == 0.0 {
                    break;
                }
                let next = *r - p / d;
                if next.is_finite() && horner(c, next).norm() < p.norm() {
                    *r = next;
                } else {
                    break;
                }
            }
        }
        if z.iter().all(|r| r.is_finite() && backward_ok(c, *r, tol)) {
            return Ok(z);
        }
    }
    Err(Error::NotConverged {
        what: "polynomial roots".into(),
        iterations: MAX_ITER * (RESTARTS + 1),
    })
}

fn cmp_root(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Merges roots closer than `CLUSTER_REL` (relative) into their mean.
fn cluster(roots: &mut [Complex64]) {
    let m = roots.len();
    let mut group: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in 0..i {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= CLUSTER_REL * scale {
                let (g, gi) = (group[j], group[i]);
                for x in group.iter_mut() {
                    if *x == gi {
                        *x = g;
                    }
                }
            }
        }
    }
    for g in 0..m {
        let members: Vec<usize> = (0..m).filter(|&i| group[i] == g).collect();
        if members.len() > 1 {
            let mean = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            for i in members {
                roots[i] = mean;
            }
        }
    }
}

/// Snaps roots of a real polynomial to the real axis or to exact conjugate pairs.
fn realize(roots: &mut Vec<Complex64>, tol: f64) -> Result<()> {
    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &r in roots.iter() {
        if r.im.abs() <= tol * r.norm().max(1.0) {
            reals.push(Complex64::new(r.re, 0.0));
        } else if r.im > 0.0 {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::NotConverged {
            what: "conjugate root pairing".into(),
            iterations: 0,
        });
    }
    let mut out = reals;
    for u in upper {
        let (idx, _) = lower
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.conj() - u).norm().total_cmp(&(b.1.conj() - u).norm()))
            .expect("same count");
        let l = lower.swap_remove(idx);
        let z = Complex64::new(0.5 * (u.re + l.re), 0.5 * (u.im - l.im));
        out.push(z.conj());
        out.push(z);
    }
    *roots = out;
    Ok(())
}

/// Roots of every slot polynomial in canonical order: sorted by real then
/// imaginary part, except that conjugate pairs of a real slot come first,
/// each pair adjacent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRoots {
    pub variant: Variant,
    pub n: usize,
    pub slots: Vec<Slot>,
    /// `roots[s]` lists the `m` roots of slot `s` with multiplicity.
    pub roots: Vec<Vec<Complex64>>,
}

impl ComponentRoots {
    /// Number of conjugate pairs in the real slot `s`.
    pub fn conjugate_pairs(&self, s: usize) -> usize {
        if !self.slots[s].is_real() {
            return 0;
        }
        self.roots[s].iter().filter(|r| r.im > 0.0).count()
    }

    /// True when some real slot has non-real roots.
    pub fn needs_quadratics(&self) -> bool {
        (0..self.slots.len()).any(|s| self.conjugate_pairs(s) > 0)
    }
}

pub fn roots(p: &NPolynomial, tol: &Tolerances) -> Result<ComponentRoots> {
    roots_seeded(p, tol, 0x5eed)
}

/// As [`roots`], with an explicit seed for the random restarts.
pub fn roots_seeded(p: &NPolynomial, tol: &Tolerances, seed: u64) -> Result<ComponentRoots> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys = component_polynomials(p);
    let mut all = Vec::with_capacity(polys.len());
    for sp in &polys {
        let mut r = simultaneous_roots(&sp.coefficients, tol.factor_tol, &mut rng)?;
        cluster(&mut r);
        if sp.slot.is_real() {
            realize(&mut r, tol.factor_tol)?;
        }
        r.sort_by(cmp_root);
        if sp.slot.is_real() {
            r = canonical_order(&r);
        }
        all.push(r);
    }
    Ok(ComponentRoots {
        variant: p.variant,
        n: p.n,
        slots: polys.into_iter().map(|s| s.slot).collect(),
        roots: all,
    })
}

/// `u^2 + b u + c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticFactor {
    pub b: NComplex,
    pub c: NComplex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factorization {
    pub linear_roots: Vec<NComplex>,
    pub quadratic_factors: Vec<QuadraticFactor>,
    pub ordering_id: usize,
    pub mixed: bool,
}

/// Multiplies the factors back into a monic polynomial.
pub fn expand(f: &Factorization, variant: Variant, n: usize) -> Result<NPolynomial> {
    let one = NComplex::one(variant, n)?;
    // coefficient list, highest power first
    let mut poly = vec![one.clone()];
    let times = |factor: &[NComplex], poly: &mut Vec<NComplex>| -> Result<()> {
        let mut out = vec![NComplex::zero(variant, n)?; poly.len() + factor.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        *poly = out;
        Ok(())
    };
    for q in &f.quadratic_factors {
        times(&[one.clone(), q.b.clone(), q.c.clone()], &mut poly)?;
    }
    for r in &f.linear_roots {
        times(&[one.clone(), r.neg()], &mut poly)?;
    }
    NPolynomial::new(variant, n, poly.split_off(1))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Class labels: equal roots share a label, labels follow canonical order.
fn labels(roots: &[Complex64]) -> Vec<usize> {
    let mut out = Vec::with_capacity(roots.len());
    for (i, r) in roots.iter().enumerate() {
        let l = if i > 0 && roots[i - 1] == *r { out[i - 1] } else { i };
        out.push(l);
    }
    out
}

fn multiset_permutations(l: &[usize]) -> u128 {
    let fact = |k: usize| (1..=k as u128).fold(1u128, |a, b| a.saturating_mul(b));
    let mut total = fact(l.len());
    let mut i = 0;
    while i < l.len() {
        let j = (i..l.len()).find(|&j| l[j] != l[i]).unwrap_or(l.len());
        total /= fact(j - i);
        i = j;
    }
    total
}

fn root_key(z: Complex64) -> (u64, u64) {
    // +0.0 and -0.0 are the same root
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

/// Lazy enumeration of distinct factorizations.
pub struct Factorizations<'a> {
    roots: &'a ComponentRoots,
    labels: Vec<Vec<usize>>,
    perms: Vec<Vec<usize>>,
    /// Slots whose order is permuted; the rest stay canonical.
    free: Vec<usize>,
    blocks: usize,
    dedup: bool,
    seen: HashSet<Vec<Vec<(u64, u64)>>>,
    done: bool,
    emitted: usize,
    limit: usize,
}

/// Number of conjugate-pair blocks shared by all factorizations.
fn block_count(r: &ComponentRoots) -> usize {
    (0..r.slots.len()).map(|s| r.conjugate_pairs(s)).max().unwrap_or(0)
}

/// Canonical order with conjugate pairs first, each pair adjacent.
fn canonical_order(r: &[Complex64]) -> Vec<Complex64> {
    let mut pairs: Vec<Complex64> = r.iter().filter(|z| z.im > 0.0).copied().collect();
    pairs.sort_by(cmp_root);
    let mut out = Vec::with_capacity(r.len());
    for z in &pairs {
        out.push(z.conj());
        out.push(*z);
    }
    out.extend(r.iter().filter(|z| z.im == 0.0));
    out
}

pub fn factorizations(roots: &ComponentRoots, limit: usize) -> Factorizations<'_> {
    let blocks = block_count(roots);
    let labels: Vec<Vec<usize>> = roots.roots.iter().map(|r| labels(r)).collect();
    let anchor_repeats = labels
        .first()
        .map_or(false, |l| l.windows(2).any(|w| w[0] == w[1]));
    let free: Vec<usize> = if blocks > 0 {
        (0..roots.slots.len()).collect()
    } else {
        (1..roots.slots.len()).collect()
    };
    Factorizations {
        roots,
        perms: labels.clone(),
        labels,
        free,
        blocks,
        dedup: blocks > 0 || anchor_repeats,
        seen: HashSet::new(),
        done: false,
        emitted: 0,
        limit,
    }
}

impl Factorizations<'_> {
    fn advance(&mut self) {
        for &s in self.free.iter().rev() {
            if next_permutation(&mut self.perms[s]) {
                return;
            }
        }
        self.done = true;
    }

    /// Root of slot `s` at factor position `p` under the current permutation.
    fn root_at(&self, s: usize, p: usize) -> Complex64 {
        self.roots.roots[s][self.perms[s][p]]
    }

    fn valid(&self) -> bool {
        let m = self.perms.first().map_or(0, Vec::len);
        for s in 0..self.roots.slots.len() {
            if !self.roots.slots[s].is_real() {
                continue;
            }
            for b in 0..self.blocks {
                let (x, y) = (self.root_at(s, 2 * b), self.root_at(s, 2 * b + 1));
                let both_real = x.im == 0.0 && y.im == 0.0;
                if !(both_real || (x.im != 0.0 && x == y.conj())) {
                    return false;
                }
            }
            if (2 * self.blocks..m).any(|p| self.root_at(s, p).im != 0.0) {
                return false;
            }
        }
        true
    }

    fn key(&self) -> Vec<Vec<(u64, u64)>> {
        let m = self.perms.first().map_or(0, Vec::len);
        let slots = self.roots.slots.len();
        let mut factors: Vec<Vec<(u64, u64)>> = Vec::new();
        for b in 0..self.blocks {
            let mut k = vec![(u64::MAX, 0)];
            for s in 0..slots {
                let mut pair = [root_key(self.root_at(s, 2 * b)), root_key(self.root_at(s, 2 * b + 1))];
                pair.sort();
                k.extend(pair);
            }
            factors.push(k);
        }
        for p in 2 * self.blocks..m {
            factors.push((0..slots).map(|s| root_key(self.root_at(s, p))).collect());
        }
        factors.sort();
        factors
    }

    fn build(&self) -> Result<Factorization> {
        let r = self.roots;
        let m = self.perms.first().map_or(0, Vec::len);
        let slots = r.slots.len();
        let mut quadratic_factors = Vec::with_capacity(self.blocks);
        for b in 0..self.blocks {
            let mut bv = Vec::with_capacity(slots);
            let mut cv = Vec::with_capacity(slots);
            for s in 0..slots {
                let (x, y) = (self.root_at(s, 2 * b), self.root_at(s, 2 * b + 1));
                bv.push(-(x + y));
                cv.push(x * y);
            }
            quadratic_factors.push(QuadraticFactor {
                b: Spectrum::from_values(r.variant, r.n, &bv)?.to_ncomplex()?,
                c: Spectrum::from_values(r.variant, r.n, &cv)?.to_ncomplex()?,
            });
        }
        let linear_roots = (2 * self.blocks..m)
            .map(|p| {
                let v: Vec<Complex64> = (0..slots).map(|s| self.root_at(s, p)).collect();
                Spectrum::from_values(r.variant, r.n, &v)?.to_ncomplex()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Factorization {
            linear_roots,
            quadratic_factors,
            ordering_id: self.emitted,
            mixed: self.blocks > 0,
        })
    }
}

impl Iterator for Factorizations<'_> {
    type Item = Result<Factorization>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done && self.emitted < self.limit {
            let fresh = self.valid() && (!self.dedup || self.seen.insert(self.key()));
            let out = fresh.then(|| self.build());
            self.advance();
            if let Some(f) = out {
                self.emitted += 1;
                return Some(f);
            }
        }
        None
    }
}

/// Count of distinct factorizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorCount {
    pub count: u128,
    /// False when the count stopped at the enumeration limit.
    pub exact: bool,
}

pub fn count_factorizations(roots: &ComponentRoots, limit: usize) -> Result<FactorCount> {
    let it = factorizations(roots, limit);
    if !it.dedup {
        let count = it.labels[1..]
            .iter()
            .fold(1u128, |a, l| a.saturating_mul(multiset_permutations(l)));
        return Ok(FactorCount { count, exact: true });
    }
    let mut count = 0u128;
    let mut it = it;
    for f in it.by_ref() {
        f?;
        count += 1;
    }
    Ok(FactorCount {
        count,
        exact: it.done,
    })
}
