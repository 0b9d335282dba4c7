//! The 27-letter ternary word used throughout the boosting example, with its
//! 3-twins of length 5 (each spelling `aabcc`).

use crate::witness::TwinWitness;
use crate::word::{Alphabet, Word};

pub const EXAMPLE_WORD: &str = "baacacbbabcacacabbcbacccbab";

/// The same word with a fourth letter `d` placed right after positions 2, 5 and 12.
pub const EXAMPLE_EXTENDED: &str = "badacadcbbabcadcacabbcbacccbab";

pub fn example_word() -> Word {
    Word::parse_with(EXAMPLE_WORD, Alphabet::new(3).unwrap()).unwrap()
}

pub fn example_extended() -> Word {
    Word::parse_with(EXAMPLE_EXTENDED, Alphabet::new(4).unwrap()).unwrap()
}

pub fn example_witness() -> TwinWitness {
    TwinWitness::new(vec![
        vec![2, 3, 8, 11, 19],
        vec![5, 9, 10, 13, 23],
        vec![12, 16, 20, 22, 24],
    ])
}
