//! Fixed-width rows of `u64` words used as bitsets.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitRows {
    words: usize,
    bits: usize,
    data: Vec<u64>,
}

impl BitRows {
    pub fn new(rows: usize, bits: usize) -> Self {
        let words = bits.div_ceil(64).max(1);
        BitRows {
            words,
            bits,
            data: vec![0; rows * words],
        }
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Row with every valid bit set.
    pub fn full(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        let tail = self.bits % 64;
        if tail != 0 {
            v[self.words - 1] = (1u64 << tail) - 1;
        }
        if self.bits == 0 {
            v.iter_mut().for_each(|w| *w = 0);
        }
        v
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|w| w.count_ones() as u64).sum()
    }
}

pub(crate) fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub(crate) fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

pub(crate) fn ones(a: &[u64]) -> impl Iterator<Item = usize> + '_ {
    a.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}
