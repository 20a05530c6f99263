use super::complex::{BddComplex, ChainMap};
use crate::error::{Error, Result};
use crate::modkernel::{FgModule, Matrix};
use crate::ringkernel::lift;

/// One step `X_(i+1) -> X_i -> H^(s_i)(X_i)[-s_i]` of the series.
#[derive(Clone, Debug)]
pub struct TruncationStage {
    pub complex: BddComplex,
    pub s: i64,
    pub head: FgModule,
    /// `X_(i+1) -> X_i`.
    pub inclusion: ChainMap,
}

#[derive(Clone, Debug)]
pub struct TruncationSeries {
    pub stages: Vec<TruncationStage>,
}

impl TruncationSeries {
    pub fn degrees(&self) -> Vec<i64> {
        self.stages.iter().map(|s| s.s).collect()
    }
}

/// Soft truncation `τ^(≤m) X = (... -> X^(m-1) -> Z^m -> 0)` with its inclusion into `X`.
pub fn soft_truncate_le(x: &BddComplex, m: i64) -> Result<(BddComplex, ChainMap)> {
    let ring = x.ring();
    if m >= x.hi() {
        let maps = (x.lo()..=x.hi()).map(|i| Matrix::identity(ring, x.rank(i))).collect();
        return Ok((x.clone(), ChainMap { lo: x.lo(), maps }));
    }
    if m < x.lo() {
        return Ok((BddComplex::zero(ring), ChainMap { lo: 0, maps: Vec::new() }));
    }
    let t = x.term(m).expect("in range");
    let next = x.term(m + 1).expect("in range");
    let z = t.kernel_of(&x.diff(m), next)?;
    let pruned = z.module.prune()?;
    let gens = z.gens.mul(ring, &pruned.to_old);
    let mut terms: Vec<FgModule> = (x.lo()..m).map(|i| x.term(i).expect("in range").clone()).collect();
    let mut diffs: Vec<Matrix> = (x.lo()..m - 1).map(|i| x.diff(i)).collect();
    let mut maps: Vec<Matrix> = (x.lo()..m).map(|i| Matrix::identity(ring, x.rank(i))).collect();
    if m > x.lo() {
        let g = gens.cols();
        let mut cols = gens.columns();
        cols.extend(t.relations().columns());
        let targets = x.diff(m - 1).columns();
        let lifted = lift(ring, t.rank(), &cols, &targets)?;
        let mut into_z = Matrix::zero(g, targets.len());
        for (j, c) in lifted.into_iter().enumerate() {
            let c = c.ok_or_else(|| Error::Internal(format!("boundary in degree {m} is not a cycle")))?;
            for (k, e) in c.into_iter().take(g).enumerate() {
                into_z.set(k, j, e);
            }
        }
        diffs.push(into_z);
    }
    terms.push(pruned.module.clone());
    maps.push(gens);
    let y = BddComplex::new(ring, x.lo(), terms, diffs)?;
    Ok((y, ChainMap { lo: x.lo(), maps }))
}

/// `X_0 = X`, `X_(i+1) = τ^(≤ s_i - 1) X_i`, with `s_i = sup X_i`, down to `inf X`.
pub fn truncation_series(x: &BddComplex) -> Result<TruncationSeries> {
    let mut cur = x.clone();
    let mut stages = Vec::new();
    loop {
        let nz = cur.nonzero_degrees()?;
        let Some(&s) = nz.last() else { break };
        let head = cur.cohomology_module(s)?;
        let (next, inclusion) = soft_truncate_le(&cur, s - 1)?;
        stages.push(TruncationStage { complex: cur, s, head, inclusion });
        cur = next;
    }
    if stages.is_empty() {
        return Err(Error::Precondition("truncation series of an acyclic complex".into()));
    }
    Ok(TruncationSeries { stages })
}
