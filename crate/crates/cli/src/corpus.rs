//! Documents shipped with the binary, addressable by file stem.

pub const ENTRIES: &[(&str, &str)] = &[
    ("bits", include_str!("../corpus/bits.json")),
    ("blink", include_str!("../corpus/blink.json")),
    ("c3", include_str!("../corpus/c3.json")),
    ("coin", include_str!("../corpus/coin.json")),
    ("delay", include_str!("../corpus/delay.json")),
    ("flip", include_str!("../corpus/flip.json")),
    ("i2", include_str!("../corpus/i2.json")),
    ("id", include_str!("../corpus/id.json")),
    ("nonfugal", include_str!("../corpus/nonfugal.json")),
    ("obs", include_str!("../corpus/obs.json")),
    ("parity-set", include_str!("../corpus/parity-set.json")),
    ("parity", include_str!("../corpus/parity.json")),
    ("step", include_str!("../corpus/step.json")),
    ("swap-monad", include_str!("../corpus/swap-monad.json")),
    ("swap", include_str!("../corpus/swap.json")),
    ("watch", include_str!("../corpus/watch.json")),
    ("xor-loop", include_str!("../corpus/xor-loop.json")),
    ("xor-swap", include_str!("../corpus/xor-swap.json")),
    ("xor", include_str!("../corpus/xor.json")),
    ("z2", include_str!("../corpus/z2.json")),
    ("z2cat", include_str!("../corpus/z2cat.json")),
];

/// Looks up an entry by stem, with or without the `.json` suffix.
pub fn get(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    ENTRIES.iter().find(|(n, _)| *n == stem).map(|(_, text)| *text)
}
