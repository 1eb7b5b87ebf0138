//! Exhaustive enumeration of `d`-dimensional subspaces of `Mat_n(F_q)`, `q` in {2, 3, 5}.
//!
//! Each subspace is visited once through its reduced row echelon basis: pivot
//! patterns in lexicographic order, then free entries with the first free
//! position (row-major) varying slowest. Work is cut into units, a pivot
//! pattern plus a contiguous range of free assignments, and tallies are merged
//! in unit order, so the report does not depend on how units are scheduled.
//!
//! Matrices are encoded as integers `sum_k a_k q^k` over row-major entries.
//! Over GF(2) this is the bit-packed form and elements of a subspace are
//! walked in Gray-code order with one XOR per step.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::predicates::{self, SearchConfig, DEFAULT_BUDGET};
use crate::recovery::{self, Outcome};
use crate::space::{MatSpace, RowSpace, StandardKind, TransformMode};

pub const DEFAULT_CAP: u128 = 10_000_000;
/// Enumerations larger than this need `heavy`.
pub const HEAVY_THRESHOLD: u128 = 250_000;
pub const DEFAULT_WITNESS_LIMIT: usize = 8;
pub const CENSUS_FIELDS: [u64; 3] = [2, 3, 5];

const UNIT_SIZE: u128 = 1 << 14;
const FLAG_TABLE_LIMIT: u64 = 1 << 21;
const STAB_TABLE_LIMIT: u64 = 1 << 22;
const DIAG: u8 = 1;
const TS: u8 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PredicateSet {
    pub diag: bool,
    pub trivial_spectrum: bool,
    pub irreducible: bool,
}

impl PredicateSet {
    pub const DIAG: PredicateSet = PredicateSet { diag: true, trivial_spectrum: false, irreducible: false };
    pub const TS_IRR: PredicateSet = PredicateSet { diag: false, trivial_spectrum: true, irreducible: true };
    pub const ALL: PredicateSet = PredicateSet { diag: true, trivial_spectrum: true, irreducible: true };

    /// Parses `diag`, `ts` and `irr` names.
    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Option<PredicateSet> {
        let mut set = PredicateSet::default();
        for name in names {
            match name.trim() {
                "diag" => set.diag = true,
                "ts" => set.trivial_spectrum = true,
                "irr" => set.irreducible = true,
                _ => return None,
            }
        }
        Some(set)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.diag {
            out.push("diag");
        }
        if self.trivial_spectrum {
            out.push("ts");
        }
        if self.irreducible {
            out.push("irr");
        }
        out
    }

    fn needs_elements(&self) -> bool {
        self.diag || self.trivial_spectrum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub cap: u128,
    pub heavy: bool,
    /// Upper bound on `q^d`, the elements walked per subspace.
    pub budget: u64,
    pub witness_limit: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig { cap: DEFAULT_CAP, heavy: false, budget: DEFAULT_BUDGET, witness_limit: DEFAULT_WITNESS_LIMIT }
    }
}

/// Number of `d`-dimensional subspaces of `F_q^m`; `None` on overflow.
pub fn gaussian_binomial(m: usize, d: usize, q: u64) -> Option<u128> {
    if d > m {
        return Some(0);
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for k in 1..=d {
        let num = q.checked_pow((m - k + 1) as u32)? - 1;
        let den = q.checked_pow(k as u32)? - 1;
        acc = acc.checked_mul(num)? / den;
    }
    Some(acc)
}

/// `d`-subsets of `0..m` in lexicographic order.
pub fn pivot_patterns(m: usize, d: usize) -> PivotPatterns {
    PivotPatterns { m, next: (d <= m).then(|| (0..d).collect()) }
}

pub struct PivotPatterns {
    m: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for PivotPatterns {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let d = current.len();
        let mut c = current.clone();
        if let Some(i) = (0..d).rev().find(|&i| c[i] < self.m - d + i) {
            c[i] += 1;
            for j in i + 1..d {
                c[j] = c[j - 1] + 1;
            }
            self.next = Some(c);
        }
        Some(current)
    }
}

/// `(row, column)` of every free entry of an echelon basis with these pivots.
pub fn free_positions(pivots: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        out.extend((p + 1..m).filter(|c| !pivots.contains(c)).map(|c| (r, c)));
    }
    out
}

/// The echelon basis for free assignment `idx`, first free position most significant.
fn echelon_rows(pivots: &[usize], free: &[(usize, usize)], m: usize, q: u32, mut idx: u128) -> Vec<Vec<u32>> {
    let mut rows = vec![vec![0u32; m]; pivots.len()];
    for (r, &p) in pivots.iter().enumerate() {
        rows[r][p] = 1;
    }
    for &(r, c) in free.iter().rev() {
        rows[r][c] = (idx % q as u128) as u32;
        idx /= q as u128;
    }
    rows
}

fn check_field(q: u64) -> Result<()> {
    if CENSUS_FIELDS.contains(&q) {
        Ok(())
    } else {
        Err(Error::UnsupportedCensusField(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    pub pattern: usize,
    pub pivots: Vec<usize>,
    pub start: u128,
    pub end: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusPlan {
    pub n: usize,
    pub q: u64,
    pub d: usize,
    pub total: u128,
    pub patterns: usize,
    pub units: Vec<Unit>,
}

/// Validates the field, shape, cap and heavy gate, and splits the work into units.
pub fn plan(n: usize, q: u64, d: usize, cfg: &CensusConfig) -> Result<CensusPlan> {
    check_field(q)?;
    let m = n * n;
    let codes_fit = (q as u128).checked_pow(m as u32).is_some_and(|c| c < 1 << 63);
    if n == 0 || d > m || !codes_fit {
        return Err(Error::ShapeMismatch);
    }
    let total = gaussian_binomial(m, d, q).unwrap_or(u128::MAX);
    if total > cfg.cap {
        return Err(Error::CapExceeded(total));
    }
    if total > HEAVY_THRESHOLD && !cfg.heavy {
        return Err(Error::HeavyRunRequired(total));
    }
    let mut units = Vec::new();
    let mut patterns = 0;
    for (pattern, pivots) in pivot_patterns(m, d).enumerate() {
        let size = (q as u128).pow(free_positions(&pivots, m).len() as u32);
        let mut start = 0;
        while start < size {
            let end = (start + UNIT_SIZE).min(size);
            units.push(Unit { pattern, pivots: pivots.clone(), start, end });
            start = end;
        }
        patterns += 1;
    }
    debug_assert_eq!(units.iter().map(|u| u.end - u.start).sum::<u128>(), total);
    Ok(CensusPlan { n, q, d, total, patterns, units })
}

/// Every `d`-dimensional subspace, in enumeration order.
pub fn subspace_stream(n: usize, q: u64, d: usize, cfg: &CensusConfig) -> Result<impl Iterator<Item = MatSpace>> {
    let plan = plan(n, q, d, cfg)?;
    let f = Field::prime(q)?;
    let m = n * n;
    Ok(plan.units.into_iter().flat_map(move |unit| {
        let free = free_positions(&unit.pivots, m);
        (unit.start..unit.end).map(move |idx| {
            let rows = echelon_rows(&unit.pivots, &free, m, q as u32, idx);
            space_from_rows(f, n, &rows)
        })
    }))
}

fn space_from_rows(f: Field, n: usize, rows: &[Vec<u32>]) -> MatSpace {
    let vectors: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Scalar::Residue(x)).collect()).collect();
    let space = RowSpace::span(f, n * n, &vectors).expect("rows have the ambient length");
    debug_assert_eq!(space.dim(), rows.len());
    MatSpace::from_row_space(n, space)
}

/// Per-unit counts and the first witnesses (subspaces satisfying every selected predicate).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub total: u128,
    pub diag: u128,
    pub trivial_spectrum: u128,
    pub irreducible: u128,
    pub ts_and_irr: u128,
    pub all_selected: u128,
    /// Echelon bases as encoded rows.
    pub witnesses: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Flags {
    diag: Option<bool>,
    ts: Option<bool>,
    irr: Option<bool>,
}

impl Tally {
    fn record(&mut self, flags: Flags, codes: &[u64], limit: usize) {
        self.total += 1;
        let count = |c: &mut u128, b: Option<bool>| *c += (b == Some(true)) as u128;
        count(&mut self.diag, flags.diag);
        count(&mut self.trivial_spectrum, flags.ts);
        count(&mut self.irreducible, flags.irr);
        self.ts_and_irr += (flags.ts == Some(true) && flags.irr == Some(true)) as u128;
        if [flags.diag, flags.ts, flags.irr].iter().all(|b| *b != Some(false)) {
            self.all_selected += 1;
            if self.witnesses.len() < limit {
                self.witnesses.push(codes.to_vec());
            }
        }
    }

    /// Appends `later`, which must come after `self` in enumeration order.
    pub fn absorb(&mut self, later: Tally, limit: usize) {
        self.total += later.total;
        self.diag += later.diag;
        self.trivial_spectrum += later.trivial_spectrum;
        self.irreducible += later.irreducible;
        self.ts_and_irr += later.ts_and_irr;
        self.all_selected += later.all_selected;
        let room = limit.saturating_sub(self.witnesses.len());
        self.witnesses.extend(later.witnesses.into_iter().take(room));
    }
}

/// A proper nonzero subspace of `F_q^n` in echelon form.
#[derive(Clone, Debug)]
struct SmallSpace {
    pivots: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

/// Evaluates predicates on encoded subspaces, with lookup tables where they fit.
pub struct CensusEngine {
    n: usize,
    q: u32,
    m: usize,
    preds: PredicateSet,
    witness_limit: usize,
    pow: Vec<u64>,
    flags: Option<Vec<u8>>,
    lattice: Vec<SmallSpace>,
    words: usize,
    stab: Option<Vec<u64>>,
}

impl CensusEngine {
    pub fn new(n: usize, q: u64, preds: PredicateSet, witness_limit: usize) -> Result<CensusEngine> {
        check_field(q)?;
        let m = n * n;
        let count = (q as u128).checked_pow(m as u32).filter(|&c| c < 1 << 63).ok_or(Error::ShapeMismatch)? as u64;
        let qs = q as u32;
        let pow = (0..m).scan(1u64, |acc, _| {
            let cur = *acc;
            *acc = acc.saturating_mul(q);
            Some(cur)
        });
        let mut engine = CensusEngine {
            n,
            q: qs,
            m,
            preds,
            witness_limit,
            pow: pow.collect(),
            flags: None,
            lattice: Vec::new(),
            words: 0,
            stab: None,
        };
        if preds.needs_elements() && count <= FLAG_TABLE_LIMIT {
            engine.flags = Some((0..count).map(|c| engine.compute_flags(c)).collect());
        }
        if preds.irreducible {
            for k in 1..n {
                for pivots in pivot_patterns(n, k) {
                    let free = free_positions(&pivots, n);
                    let size = (q as u128).pow(free.len() as u32);
                    for idx in 0..size {
                        let rows = echelon_rows(&pivots, &free, n, qs, idx);
                        engine.lattice.push(SmallSpace { pivots: pivots.clone(), rows });
                    }
                }
            }
            engine.words = engine.lattice.len().div_ceil(64);
            if count.saturating_mul(engine.words as u64) <= STAB_TABLE_LIMIT {
                let mut table = Vec::with_capacity(count as usize * engine.words);
                for c in 0..count {
                    table.extend(engine.compute_stab(c));
                }
                engine.stab = Some(table);
            }
        }
        Ok(engine)
    }

    pub fn predicates(&self) -> PredicateSet {
        self.preds
    }

    /// Number of proper nonzero subspaces of `F_q^n` tested for stability.
    pub fn lattice_size(&self) -> usize {
        self.lattice.len()
    }

    pub fn encode(&self, digits: &[u32]) -> u64 {
        digits.iter().zip(&self.pow).map(|(&x, &p)| x as u64 * p).sum()
    }

    pub fn decode(&self, mut code: u64) -> Vec<u32> {
        let q = self.q as u64;
        (0..self.m)
            .map(|_| {
                let x = (code % q) as u32;
                code /= q;
                x
            })
            .collect()
    }

    pub fn to_matrix(&self, code: u64) -> Matrix {
        let f = Field::Prime(self.q);
        let data = self.decode(code).into_iter().map(Scalar::Residue).collect();
        Matrix::from_data(f, self.n, self.n, data)
    }

    /// Whether the encoded matrix is diagonalizable over `F_q`.
    pub fn is_diagonalizable(&self, code: u64) -> bool {
        self.flags_of(code) & DIAG != 0
    }

    /// Whether the encoded matrix has no nonzero eigenvalue in `F_q`.
    pub fn has_trivial_spectrum(&self, code: u64) -> bool {
        self.flags_of(code) & TS != 0
    }

    fn flags_of(&self, code: u64) -> u8 {
        match &self.flags {
            Some(table) => table[code as usize],
            None => self.compute_flags(code),
        }
    }

    fn compute_flags(&self, code: u64) -> u8 {
        let n = self.n;
        if self.q == 2 {
            let mask = (1u64 << n) - 1;
            let m = BitMatrix::new((0..n).map(|i| (code >> (i * n)) & mask).collect(), n);
            let diag = m.mul(&m) == m;
            let ts = m.add(&BitMatrix::identity(n)).rank() == n;
            return (diag as u8 * DIAG) | (ts as u8 * TS);
        }
        let q = self.q;
        let a = self.decode(code);
        // Over F_q, diagonalizable iff the minimal polynomial divides t^q - t.
        let mut power = a.clone();
        for _ in 1..q {
            power = small_mul(&power, &a, n, q);
        }
        let diag = power == a;
        let ts = (1..q).all(|lambda| {
            let mut b = a.clone();
            for i in 0..n {
                b[i * n + i] = (b[i * n + i] + q - lambda) % q;
            }
            small_rank(&mut b, n, n, q) == n
        });
        (diag as u8 * DIAG) | (ts as u8 * TS)
    }

    fn stab_of(&self, code: u64) -> StabMask<'_> {
        match &self.stab {
            Some(table) => {
                let start = code as usize * self.words;
                StabMask::Borrowed(&table[start..start + self.words])
            }
            None => StabMask::Owned(self.compute_stab(code)),
        }
    }

    /// Bit `i` set when the encoded matrix maps lattice member `i` into itself.
    fn compute_stab(&self, code: u64) -> Vec<u64> {
        let a = self.decode(code);
        let mut mask = vec![0u64; self.words];
        for (i, sub) in self.lattice.iter().enumerate() {
            if self.is_stable(&a, sub) {
                mask[i / 64] |= 1 << (i % 64);
            }
        }
        mask
    }

    fn is_stable(&self, a: &[u32], sub: &SmallSpace) -> bool {
        let (n, q) = (self.n, self.q);
        sub.rows.iter().all(|u| {
            let mut x: Vec<u32> =
                (0..n).map(|i| (0..n).map(|j| a[i * n + j] * u[j]).sum::<u32>() % q).collect();
            for (row, &p) in sub.rows.iter().zip(&sub.pivots) {
                let c = x[p];
                if c != 0 {
                    for (xk, rk) in x.iter_mut().zip(row) {
                        *xk = (*xk + (q - c) * rk) % q;
                    }
                }
            }
            x.iter().all(|&v| v == 0)
        })
    }

    fn evaluate(&self, codes: &[u64], rows: &[Vec<u32>]) -> Flags {
        let mut flags = Flags::default();
        if self.preds.irreducible {
            let mut acc = vec![u64::MAX; self.words];
            for &code in codes {
                let mask = self.stab_of(code);
                for (a, b) in acc.iter_mut().zip(mask.as_slice()) {
                    *a &= b;
                }
            }
            flags.irr = Some(acc.iter().all(|&w| w == 0));
        }
        if self.preds.needs_elements() {
            let (diag, ts) = self.walk_elements(codes, rows);
            flags.diag = self.preds.diag.then_some(diag);
            flags.ts = self.preds.trivial_spectrum.then_some(ts);
        }
        flags
    }

    /// `(all diagonalizable, all trivial spectrum)` over every element of the span,
    /// stopping once both selected answers are false.
    fn walk_elements(&self, codes: &[u64], rows: &[Vec<u32>]) -> (bool, bool) {
        let mut diag = self.preds.diag;
        let mut ts = self.preds.trivial_spectrum;
        let mut visit = |code: u64| {
            let fl = self.flags_of(code);
            diag &= fl & DIAG != 0;
            ts &= fl & TS != 0;
            diag || ts
        };
        let d = codes.len();
        if self.q == 2 {
            let mut cur = 0u64;
            for i in 1u64..1 << d {
                cur ^= codes[i.trailing_zeros() as usize];
                if !visit(cur) {
                    break;
                }
            }
        } else {
            let q = self.q;
            let steps = (q as u64).pow(d as u32);
            let mut coeffs = vec![0u32; d];
            let mut digits = vec![0u32; self.m];
            let mut code = 0u64;
            for _ in 1..steps {
                let mut j = 0;
                loop {
                    for (k, &r) in rows[j].iter().enumerate() {
                        if r != 0 {
                            let old = digits[k];
                            let new = (old + r) % q;
                            digits[k] = new;
                            code = code - old as u64 * self.pow[k] + new as u64 * self.pow[k];
                        }
                    }
                    coeffs[j] += 1;
                    if coeffs[j] < q {
                        break;
                    }
                    coeffs[j] = 0;
                    j += 1;
                }
                if !visit(code) {
                    break;
                }
            }
        }
        (self.preds.diag && diag, self.preds.trivial_spectrum && ts)
    }

    /// Checks `q^d` against the per-subspace element budget.
    pub fn check_budget(&self, d: usize, budget: u64) -> Result<()> {
        if !self.preds.needs_elements() {
            return Ok(());
        }
        let elements = (self.q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if elements > budget as u128 {
            return Err(Error::BudgetExceeded(elements));
        }
        Ok(())
    }

    pub fn run(&self, unit: &Unit) -> Tally {
        let free = free_positions(&unit.pivots, self.m);
        let mut tally = Tally::default();
        for idx in unit.start..unit.end {
            let rows = echelon_rows(&unit.pivots, &free, self.m, self.q, idx);
            let codes: Vec<u64> = rows.iter().map(|r| self.encode(r)).collect();
            let flags = self.evaluate(&codes, &rows);
            tally.record(flags, &codes, self.witness_limit);
        }
        tally
    }

    fn witness_space(&self, codes: &[u64]) -> MatSpace {
        let rows: Vec<Vec<u32>> = codes.iter().map(|&c| self.decode(c)).collect();
        space_from_rows(Field::Prime(self.q), self.n, &rows)
    }
}

enum StabMask<'a> {
    Borrowed(&'a [u64]),
    Owned(Vec<u64>),
}

impl StabMask<'_> {
    fn as_slice(&self) -> &[u64] {
        match self {
            StabMask::Borrowed(s) => s,
            StabMask::Owned(v) => v,
        }
    }
}

fn small_mul(a: &[u32], b: &[u32], n: usize, q: u32) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum::<u32>() % q;
        }
    }
    out
}

fn small_rank(a: &mut [u32], rows: usize, cols: usize, q: u32) -> usize {
    let inv = |x: u32| (1..q).find(|&y| x * y % q == 1).unwrap();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        for k in 0..cols {
            a.swap(r * cols + k, p * cols + k);
        }
        let s = inv(a[r * cols + c]);
        for k in 0..cols {
            a[r * cols + k] = a[r * cols + k] * s % q;
        }
        for i in 0..rows {
            let factor = a[i * cols + c];
            if i != r && factor != 0 {
                for k in 0..cols {
                    a[i * cols + k] = (a[i * cols + k] + (q - factor) * a[r * cols + k]) % q;
                }
            }
        }
        r += 1;
    }
    r
}

/// Executes a list of units, returning one tally per unit in the same order.
pub trait Runner {
    fn run(&self, engine: &CensusEngine, units: &[Unit]) -> Vec<Tally>;
}

pub struct Serial;

impl Runner for Serial {
    fn run(&self, engine: &CensusEngine, units: &[Unit]) -> Vec<Tally> {
        units.iter().map(|u| engine.run(u)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub diag: Option<u128>,
    pub trivial_spectrum: Option<u128>,
    pub irreducible: Option<u128>,
    pub ts_and_irr: Option<u128>,
    /// Subspaces satisfying every selected predicate.
    pub all_selected: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub q: u64,
    pub d: usize,
    pub predicates: PredicateSet,
    pub cap: u128,
    pub total: u128,
    pub counts: Counts,
    /// The first subspaces satisfying every selected predicate.
    pub witnesses: Vec<MatSpace>,
    pub patterns: usize,
    pub units: usize,
    pub seedless: bool,
    pub elapsed: Option<Duration>,
}

impl CensusReport {
    /// Whether every enumerated subspace satisfies every selected predicate.
    pub fn all_satisfy(&self) -> bool {
        self.counts.all_selected == self.total
    }
}

fn assemble(plan: &CensusPlan, preds: PredicateSet, cfg: &CensusConfig, tallies: Vec<Tally>, witness: impl Fn(&[u64]) -> MatSpace) -> CensusReport {
    assert_eq!(tallies.len(), plan.units.len(), "one tally per unit");
    let mut merged = Tally::default();
    for t in tallies {
        merged.absorb(t, cfg.witness_limit);
    }
    assert_eq!(merged.total, plan.total, "enumeration visits every subspace once");
    let pick = |on: bool, c: u128| on.then_some(c);
    CensusReport {
        n: plan.n,
        q: plan.q,
        d: plan.d,
        predicates: preds,
        cap: cfg.cap,
        total: merged.total,
        counts: Counts {
            diag: pick(preds.diag, merged.diag),
            trivial_spectrum: pick(preds.trivial_spectrum, merged.trivial_spectrum),
            irreducible: pick(preds.irreducible, merged.irreducible),
            ts_and_irr: pick(preds.trivial_spectrum && preds.irreducible, merged.ts_and_irr),
            all_selected: merged.all_selected,
        },
        witnesses: merged.witnesses.iter().map(|w| witness(w)).collect(),
        patterns: plan.patterns,
        units: plan.units.len(),
        seedless: true,
        elapsed: None,
    }
}

pub fn census_with(n: usize, q: u64, d: usize, preds: PredicateSet, cfg: &CensusConfig, runner: &dyn Runner) -> Result<CensusReport> {
    let plan = plan(n, q, d, cfg)?;
    let engine = CensusEngine::new(n, q, preds, cfg.witness_limit)?;
    census_on(&engine, &plan, cfg, runner)
}

fn census_on(engine: &CensusEngine, plan: &CensusPlan, cfg: &CensusConfig, runner: &dyn Runner) -> Result<CensusReport> {
    engine.check_budget(plan.d, cfg.budget)?;
    let tallies = runner.run(engine, &plan.units);
    Ok(assemble(plan, engine.preds, cfg, tallies, |w| engine.witness_space(w)))
}

pub fn census(n: usize, q: u64, d: usize, preds: PredicateSet, cfg: &CensusConfig) -> Result<CensusReport> {
    census_with(n, q, d, preds, cfg, &Serial)
}

/// Same contract as [`census`], evaluated with the general predicates on [`MatSpace`] values.
pub fn census_generic(n: usize, q: u64, d: usize, preds: PredicateSet, cfg: &CensusConfig) -> Result<CensusReport> {
    let plan = plan(n, q, d, cfg)?;
    if preds.needs_elements() && (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX) > cfg.budget as u128 {
        return Err(Error::BudgetExceeded((q as u128).pow(d as u32)));
    }
    let search = SearchConfig { budget: cfg.budget, seed: 0 };
    let f = Field::prime(q)?;
    let m = n * n;
    let mut tallies = Vec::with_capacity(plan.units.len());
    let mut spaces = Vec::new();
    for unit in &plan.units {
        let free = free_positions(&unit.pivots, m);
        let mut tally = Tally::default();
        for idx in unit.start..unit.end {
            let rows = echelon_rows(&unit.pivots, &free, m, q as u32, idx);
            let space = space_from_rows(f, n, &rows);
            let flags = Flags {
                diag: preds.diag.then(|| predicates::all_diagonalizable(&space, &search).map(|v| v.is_holds())).transpose()?,
                ts: preds.trivial_spectrum.then(|| predicates::trivial_spectrum(&space, &search).map(|v| v.is_holds())).transpose()?,
                irr: preds.irreducible.then(|| predicates::irreducible(&space, &search).is_holds()),
            };
            let key = [spaces.len() as u64];
            let before = tally.witnesses.len();
            tally.record(flags, &key, cfg.witness_limit);
            if tally.witnesses.len() > before {
                spaces.push(space);
            }
        }
        tallies.push(tally);
    }
    Ok(assemble(&plan, preds, cfg, tallies, |w| spaces[w[0] as usize].clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxDiagReport {
    pub n: usize,
    pub q: u64,
    pub d_max: usize,
    pub witness: MatSpace,
    /// One census per dimension, from 1 up to the first empty level or `n(n+1)/2`.
    pub levels: Vec<CensusReport>,
}

/// Largest `d` with a `d`-dimensional all-diagonalizable subspace, with a witness.
///
/// A subspace of an all-diagonalizable space is all-diagonalizable, so the scan
/// stops at the first empty level.
pub fn max_diag_dim(n: usize, q: u64, cfg: &CensusConfig, runner: &dyn Runner) -> Result<MaxDiagReport> {
    let cfg = CensusConfig { witness_limit: cfg.witness_limit.max(1), ..*cfg };
    let engine = CensusEngine::new(n, q, PredicateSet::DIAG, cfg.witness_limit)?;
    let mut levels = Vec::new();
    let mut best: Option<(usize, MatSpace)> = None;
    for d in 1..=n * (n + 1) / 2 {
        let plan = plan(n, q, d, &cfg)?;
        let report = census_on(&engine, &plan, &cfg, runner)?;
        let found = report.witnesses.first().cloned();
        levels.push(report);
        match found {
            Some(w) => best = Some((d, w)),
            None => break,
        }
    }
    let (d_max, witness) = best.expect("the scalar matrices span an all-diagonalizable line");
    Ok(MaxDiagReport { n, q, d_max, witness, levels })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltInstance {
    pub space: MatSpace,
    /// First non-isotropic `P` (enumeration order) with `space = P Alt_n`.
    pub p: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymInstance {
    pub space: MatSpace,
    pub outcome: Outcome,
    pub s: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub n: usize,
    pub q: u64,
    pub alt_census: CensusReport,
    /// `|GL_n(F_q)|`, all searched.
    pub general_linear: u128,
    pub non_isotropic: u128,
    pub alt_instances: Vec<AltInstance>,
    pub sym_census: CensusReport,
    pub sym_instances: Vec<SymInstance>,
}

impl ClassificationReport {
    pub fn alt_consistent(&self) -> bool {
        self.alt_instances.iter().all(|i| i.p.is_some())
    }

    pub fn sym_consistent(&self) -> bool {
        self.sym_instances.iter().all(|i| matches!(i.outcome, Outcome::Success | Outcome::ConditionalSuccess))
    }

    pub fn sym_vacuous(&self) -> bool {
        self.sym_instances.is_empty()
    }
}

/// Checks both classifications over `F_q`, `q` in {2, 3}:
/// every irreducible trivial-spectrum subspace of dimension `n(n-1)/2` is `P Alt_n`
/// for a non-isotropic `P`, and every all-diagonalizable subspace of dimension
/// `n(n+1)/2` is recovered as a conjugate of `Sym_n`.
pub fn verify_classification(n: usize, q: u64, cfg: &CensusConfig, runner: &dyn Runner) -> Result<ClassificationReport> {
    if q != 2 && q != 3 {
        return Err(Error::UnsupportedCensusField(q));
    }
    if n == 0 {
        return Err(Error::ShapeMismatch);
    }
    let f = Field::prime(q)?;
    let unlimited = CensusConfig { witness_limit: usize::MAX, ..*cfg };
    let alt_census = census_with(n, q, n * (n - 1) / 2, PredicateSet::TS_IRR, &unlimited, runner)?;
    let sym_census = census_with(n, q, n * (n + 1) / 2, PredicateSet::DIAG, &unlimited, runner)?;

    let search = SearchConfig { budget: cfg.budget, seed: 0 };
    let alt = MatSpace::standard(StandardKind::Alt, n, f);
    let mut general_linear = 0u128;
    let mut candidates: Vec<(Matrix, MatSpace)> = Vec::new();
    for p in MatSpace::full(f, n).elements(cfg.budget)? {
        if !p.is_invertible() {
            continue;
        }
        general_linear += 1;
        if predicates::non_isotropic(&p, &search).is_holds() {
            let image = alt.transform(&p, TransformMode::Left)?;
            candidates.push((p, image));
        }
    }
    let alt_instances = alt_census
        .witnesses
        .iter()
        .map(|space| AltInstance {
            space: space.clone(),
            p: candidates.iter().find(|(_, image)| image == space).map(|(p, _)| p.clone()),
        })
        .collect();
    let mut sym_instances = Vec::new();
    for space in &sym_census.witnesses {
        let report = recovery::recover(space, &search)?;
        sym_instances.push(SymInstance { space: space.clone(), outcome: report.outcome, s: report.s });
    }
    Ok(ClassificationReport {
        n,
        q,
        alt_census,
        general_linear,
        non_isotropic: candidates.len() as u128,
        alt_instances,
        sym_census,
        sym_instances,
    })
}
