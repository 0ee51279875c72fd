//! Online modus: reading the first `k` results of a sorted stream, with
//! prefixes that stay consistent as `k` grows.

/// First `k` items of `it`, in order.
pub fn online_collect<I: Iterator>(it: I, k: usize) -> Vec<I::Item> {
    it.take(k).collect()
}

/// Buffers a sorted stream and serves growing prefixes of it. The stream is
/// pulled in batches that double in size, so a consumer asking for
/// `k_1 < k_2 < ...` pays for `O(k_last)` items in total.
#[derive(Clone, Debug)]
pub struct Online<I: Iterator> {
    source: I,
    buffer: Vec<I::Item>,
    batch: usize,
    exhausted: bool,
}

impl<I: Iterator> Online<I> {
    pub fn new(source: I) -> Self {
        Online { source, buffer: Vec::new(), batch: 1, exhausted: false }
    }

    /// The first `min(k, total)` items.
    pub fn prefix(&mut self, k: usize) -> &[I::Item] {
        while self.buffer.len() < k && !self.exhausted {
            let want = self.batch.max(k - self.buffer.len());
            let before = self.buffer.len();
            self.buffer.extend(self.source.by_ref().take(want));
            if self.buffer.len() - before < want {
                self.exhausted = true;
            }
            self.batch = self.batch.saturating_mul(2);
        }
        &self.buffer[..k.min(self.buffer.len())]
    }

    /// Items pulled from the source so far.
    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn into_buffer(self) -> Vec<I::Item> {
        self.buffer
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collect_prefixes() {
        assert!(online_collect(1..10, 0).is_empty());
        assert_eq!(online_collect(1..4, 10), vec![1, 2, 3]);
    }

    #[test]
    fn growing_prefixes_are_consistent() {
        let mut o = Online::new(0..100);
        let a = o.prefix(5).to_vec();
        let b = o.prefix(10).to_vec();
        assert_eq!(&b[..5], &a[..]);
        assert_eq!(o.prefix(3), &[0, 1, 2]);
        assert_eq!(o.prefix(1000).len(), 100);
        assert!(o.is_exhausted());
    }

    #[test]
    fn batches_double() {
        let mut o = Online::new(0..1000);
        o.prefix(1);
        o.prefix(2);
        assert_eq!(o.buffered(), 3);
        o.prefix(3);
        assert_eq!(o.buffered(), 3);
        o.prefix(4);
        // batches 1, 2, 4
        assert_eq!(o.buffered(), 7);
    }
}
