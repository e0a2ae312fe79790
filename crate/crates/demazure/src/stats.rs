//! Global counters certifying that every exact division performed
//! anywhere in the library was verified by multiplying back.

use std::sync::atomic::{AtomicU64, Ordering};

static DIVISIONS_PERFORMED: AtomicU64 = AtomicU64::new(0);
static DIVISIONS_VERIFIED: AtomicU64 = AtomicU64::new(0);

pub(crate) fn record_division() {
    DIVISIONS_PERFORMED.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn record_verification() {
    DIVISIONS_VERIFIED.fetch_add(1, Ordering::Relaxed);
}

/// (performed, verified) division counts since process start.
pub fn division_counters() -> (u64, u64) {
    (
        DIVISIONS_PERFORMED.load(Ordering::Relaxed),
        DIVISIONS_VERIFIED.load(Ordering::Relaxed),
    )
}
