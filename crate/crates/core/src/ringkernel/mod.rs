//! Polynomial arithmetic, Gröbner bases and ideal operations over
//! `k[x_1..x_n] / I_R` with `k` the rationals or a prime field.

mod cache;
mod field;
pub(crate) mod gb;
mod ideal;
mod linalg;
pub(crate) mod modgb;
mod order;
mod poly;
mod ring;

use std::cell::{Cell, RefCell};
use std::path::PathBuf;

pub use field::{BaseField, Scalar};
pub use ideal::{Ideal, PrimeCertificate, PrimeIdeal};
pub use linalg::{span_rank, DenseMatrix};
pub use modgb::{lift, syzygies, ModuleGb, SyzygyGb};
pub use order::{Exps, OrderKind};
pub use poly::Poly;
pub use ring::PolyRing;

pub(crate) use ideal::split_top_level;

/// Default number of S-pair reductions allowed per Gröbner computation.
pub const DEFAULT_STEP_BUDGET: usize = 200_000;

thread_local! {
    static BUDGET: Cell<usize> = const { Cell::new(DEFAULT_STEP_BUDGET) };
    static CACHE_DIR: RefCell<Option<PathBuf>> = const { RefCell::new(None) };
}

/// The S-pair budget in effect on this thread.
pub fn step_budget() -> usize {
    BUDGET.with(|b| b.get())
}

pub fn set_step_budget(n: usize) {
    BUDGET.with(|b| b.set(n));
}

/// Runs `f` with a temporary S-pair budget.
pub fn with_step_budget<T>(n: usize, f: impl FnOnce() -> T) -> T {
    let old = step_budget();
    set_step_budget(n);
    let out = f();
    set_step_budget(old);
    out
}

/// Directory for the on-disk Gröbner cache of this thread (`None` disables it).
pub fn set_cache_dir(dir: Option<PathBuf>) {
    CACHE_DIR.with(|c| *c.borrow_mut() = dir);
}

pub fn cache_dir() -> Option<PathBuf> {
    CACHE_DIR.with(|c| c.borrow().clone())
}
