use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

pub const MAX_WORD_LEN: u32 = 128;

/// Binary address in `{l, r}*`, `l = 0`, packed from the most significant bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u128,
    len: u32,
}

impl Word {
    pub const ROOT: Word = Word { bits: 0, len: 0 };

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Digit `k`: `false` for `l`, `true` for `r`.
    pub fn digit(&self, k: u32) -> bool {
        debug_assert!(k < self.len);
        (self.bits >> (127 - k)) & 1 == 1
    }

    pub fn child(&self, right: bool) -> Word {
        assert!(self.len < MAX_WORD_LEN, "word longer than {MAX_WORD_LEN} digits");
        let bits = if right { self.bits | (1u128 << (127 - self.len)) } else { self.bits };
        Word { bits, len: self.len + 1 }
    }

    /// Append `count` copies of a digit.
    pub fn extend(&self, right: bool, count: u32) -> Word {
        (0..count).fold(*self, |w, _| w.child(right))
    }

    pub fn prefix(&self, n: u32) -> Word {
        let n = n.min(self.len);
        let mask = if n == 0 { 0 } else { u128::MAX << (128 - n) };
        Word { bits: self.bits & mask, len: n }
    }

    pub fn parent(&self) -> Option<Word> {
        (self.len > 0).then(|| self.prefix(self.len - 1))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && other.prefix(self.len) == *self
    }

    /// Length of the longest common prefix.
    pub fn lcp(&self, other: &Word) -> u32 {
        (self.bits ^ other.bits).leading_zeros().min(self.len).min(other.len)
    }

    pub fn toggle(&self, k: u32) -> Word {
        debug_assert!(k < self.len);
        Word { bits: self.bits ^ (1u128 << (127 - k)), len: self.len }
    }

    pub fn digits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|k| self.digit(k))
    }

    pub fn parse(s: &str) -> Option<Word> {
        s.chars().try_fold(Word::ROOT, |w, c| match c {
            'l' => Some(w.child(false)),
            'r' => Some(w.child(true)),
            _ => None,
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            f.write_str(if d { "r" } else { "l" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which end of an interval a point sits at: `w l^∞` or `w r^∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Left,
    Right,
}

/// An eventually constant infinite address, `word` followed by a constant tail.
#[derive(Debug, Clone, Copy)]
pub struct TailWord {
    pub word: Word,
    pub tail: End,
}

impl TailWord {
    pub fn new(word: Word, tail: End) -> Self {
        Self { word, tail }
    }

    pub fn digit(&self, k: u32) -> bool {
        if k < self.word.len() {
            self.word.digit(k)
        } else {
            self.tail == End::Right
        }
    }

    /// Common prefix length, capped at [`MAX_WORD_LEN`] when both addresses agree forever.
    pub fn lcp(&self, other: &TailWord) -> u32 {
        let short = self.word.len().min(other.word.len());
        let k = self.word.lcp(&other.word);
        if k < short {
            return k;
        }
        (short..MAX_WORD_LEN).find(|&k| self.digit(k) != other.digit(k)).unwrap_or(MAX_WORD_LEN)
    }

    /// Write tail digits out explicitly up to length `n`.
    pub fn materialize(&self, n: u32) -> TailWord {
        let extra = n.saturating_sub(self.word.len());
        TailWord { word: self.word.extend(self.tail == End::Right, extra), tail: self.tail }
    }
}

impl Ord for TailWord {
    fn cmp(&self, other: &Self) -> Ordering {
        let k = self.lcp(other);
        if k >= MAX_WORD_LEN {
            return Ordering::Equal;
        }
        self.digit(k).cmp(&other.digit(k))
    }
}

impl PartialEq for TailWord {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for TailWord {}

impl PartialOrd for TailWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for TailWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let tail = if self.tail == End::Right { "r" } else { "l" };
        s.collect_str(&format_args!("{}({tail})", self.word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let w = Word::parse("lrr").unwrap();
        assert_eq!(w.to_string(), "lrr");
        assert_eq!(w.len(), 3);
        assert!(!w.digit(0) && w.digit(2));
        assert_eq!(w.parent().unwrap().to_string(), "lr");
        assert_eq!(w.lcp(&Word::parse("lrl").unwrap()), 2);
        assert_eq!(w.lcp(&Word::parse("lr").unwrap()), 2);
        assert!(Word::parse("lr").unwrap().is_prefix_of(&w));
        assert_eq!(w.toggle(0).to_string(), "rrr");
        assert!(Word::parse("lx").is_none());
        assert_eq!(Word::ROOT.to_string(), "");
    }

    #[test]
    fn tail_words_order() {
        let a = TailWord::new(Word::parse("l").unwrap(), End::Right);
        let b = TailWord::new(Word::parse("r").unwrap(), End::Left);
        assert!(a < b);
        assert_eq!(a.lcp(&b), 0);
        let c = TailWord::new(Word::parse("lrr").unwrap(), End::Right);
        assert_eq!(a, TailWord::new(Word::parse("l").unwrap(), End::Right));
        assert_eq!(a.cmp(&c), Ordering::Equal);
        let d = TailWord::new(Word::parse("lr").unwrap(), End::Left);
        assert!(d < a);
        assert_eq!(d.lcp(&a), 2);
        assert_eq!(a.materialize(3).word.to_string(), "lrr");
    }
}
