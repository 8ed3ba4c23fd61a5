//! Counted trigonometric functions.
//!
//! Every trigonometric evaluation on a derivative path goes through this
//! module so the number of calls per evaluation can be measured. The counter
//! is thread-local; counting one evaluation on one thread never sees calls
//! made by another.

use std::cell::Cell;

thread_local! {
    static CALLS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
fn bump(n: u64) {
    CALLS.with(|c| c.set(c.get().wrapping_add(n)));
}

#[inline]
pub fn sin(x: f64) -> f64 {
    bump(1);
    x.sin()
}

#[inline]
pub fn cos(x: f64) -> f64 {
    bump(1);
    x.cos()
}

#[inline]
pub fn tan(x: f64) -> f64 {
    bump(1);
    x.tan()
}

#[inline]
pub fn asin(x: f64) -> f64 {
    bump(1);
    x.asin()
}

#[inline]
pub fn acos(x: f64) -> f64 {
    bump(1);
    x.acos()
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    bump(1);
    y.atan2(x)
}

/// `(sin x, cos x)`, counted as two calls.
#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    bump(2);
    x.sin_cos()
}

/// Number of counted calls made on this thread so far.
pub fn calls() -> u64 {
    CALLS.with(|c| c.get())
}

/// Runs `f` and returns its result along with the number of trigonometric
/// calls it made on this thread.
pub fn count<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let before = calls();
    let out = f();
    (out, calls().wrapping_sub(before))
}
