//! Named test elements used across the suite and shipped as text files in
//! `fixtures/`. Built programmatically so unit tests do not depend on the
//! parser.

use crate::cantor::Address;
use crate::element::TreePair;

fn addr(arity: u8, s: &str) -> Address {
    Address::new(arity, s.bytes().map(|b| b - b'0').collect()).unwrap()
}

fn pair(arity: u8, pieces: &[(&str, &str)]) -> TreePair {
    TreePair::from_pieces(
        arity,
        pieces
            .iter()
            .map(|(d, r)| (addr(arity, d), addr(arity, r)))
            .collect(),
    )
    .unwrap()
}

/// Order-preserving baker-style element: one attracting fixed point `(0)`,
/// one repelling fixed point `(1)`, no neutral leaves.
pub fn f0() -> TreePair {
    pair(2, &[("0", "00"), ("10", "01"), ("11", "1")])
}

/// Order-preserving companion to [`f0`] with the opposite skew; `h f0 h^-1`
/// and `f0` generate a free group.
pub fn h() -> TreePair {
    pair(2, &[("0", "10"), ("10", "11"), ("11", "0")])
}

/// The order-2 digit swap `0 <-> 1`.
pub fn swap() -> TreePair {
    pair(2, &[("0", "1"), ("1", "0")])
}

/// Order-4 cycle on the four depth-2 intervals.
pub fn c4() -> TreePair {
    pair(2, &[("00", "01"), ("01", "10"), ("10", "11"), ("11", "00")])
}

/// Nine-leaf element with a mixed inventory: one fixed attracting point,
/// one period-2 repelling orbit, one period-4 attracting orbit.
pub fn showcase() -> TreePair {
    pair(
        2,
        &[
            ("000", "01"),
            ("0010", "1001"),
            ("0011", "11110"),
            ("01", "00"),
            ("100", "101"),
            ("101", "110"),
            ("110", "1110"),
            ("1110", "1000"),
            ("1111", "11111"),
        ],
    )
}
