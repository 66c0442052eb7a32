/// Fixed-width bitset used for Safra labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Box<[u64]>);

impl Bits {
    pub fn new(width: usize) -> Bits {
        Bits(vec![0; width.div_ceil(64).max(1)].into_boxed_slice())
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, o: &Bits) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, o: &Bits) {
        self.0.iter_mut().zip(o.0.iter()).for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, o: &Bits) {
        self.0.iter_mut().zip(o.0.iter()).for_each(|(a, b)| *a &= b);
    }

    pub fn difference_with(&mut self, o: &Bits) {
        self.0.iter_mut().zip(o.0.iter()).for_each(|(a, b)| *a &= !b);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}
