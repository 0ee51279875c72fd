use serde::{Deserialize, Serialize};

const WORDS_PER_SUPERBLOCK: usize = 8;

/// Static bitvector with constant-time rank.
///
/// Rank support is a two-level directory: an absolute count every 512 bits
/// and a 16-bit relative count per 64-bit word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBitVec {
    len: usize,
    words: Vec<u64>,
    superblocks: Vec<u64>,
    blocks: Vec<u16>,
}

impl RankBitVec {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(64) {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1u64 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    pub(crate) fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        // One trailing word so that rank(len) never indexes past the end.
        words.resize(len / 64 + 1, 0);
        let mut superblocks = Vec::with_capacity(words.len() / WORDS_PER_SUPERBLOCK + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0u64;
        let mut rel = 0u64;
        for (i, w) in words.iter().enumerate() {
            if i % WORDS_PER_SUPERBLOCK == 0 {
                total += rel;
                rel = 0;
                superblocks.push(total);
            }
            blocks.push(rel as u16);
            rel += w.count_ones() as u64;
        }
        RankBitVec { len, words, superblocks, blocks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words[..self.len.div_ceil(64)]
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Number of ones in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let w = i / 64;
        let base = self.superblocks[w / WORDS_PER_SUPERBLOCK] + self.blocks[w] as u64;
        let mask = (1u64 << (i % 64)) - 1;
        base as usize + (self.words[w] & mask).count_ones() as usize
    }

    /// Number of zeros in `[0, i)`.
    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    pub fn count_ones(&self) -> usize {
        self.rank1(self.len)
    }

    pub fn size_in_bytes(&self) -> usize {
        self.words.len() * 8 + self.superblocks.len() * 8 + self.blocks.len() * 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rank_matches_prefix_count(bits in proptest::collection::vec(any::<bool>(), 0..2000)) {
            let bv = RankBitVec::from_bits(bits.iter().copied());
            let mut ones = 0;
            for i in 0..=bits.len() {
                prop_assert_eq!(bv.rank1(i), ones);
                prop_assert_eq!(bv.rank0(i), i - ones);
                if i < bits.len() {
                    prop_assert_eq!(bv.get(i), bits[i]);
                    ones += bits[i] as usize;
                }
            }
        }
    }

    #[test]
    fn exact_word_boundary() {
        let bv = RankBitVec::from_bits(std::iter::repeat_n(true, 1024));
        assert_eq!(bv.rank1(1024), 1024);
        assert_eq!(bv.count_ones(), 1024);
        let empty = RankBitVec::from_bits(std::iter::empty());
        assert_eq!(empty.rank1(0), 0);
    }
}
