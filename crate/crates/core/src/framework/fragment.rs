/// A finite lattice fragment on which evaluators are checked exhaustively.
pub trait Fragment {
    type Elem: Clone + std::fmt::Debug;

    fn elements(&self) -> Vec<Self::Elem>;
    /// Position of `x` in [`Fragment::elements`].
    fn index(&self, x: &Self::Elem) -> usize;
    fn bottom(&self) -> Self::Elem;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `None` when the fragment has no orthocomplement.
    fn complement(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn render(&self, x: &Self::Elem) -> String;
}

/// The power set of `{1, …, k}` as bitmasks, bit `n − 1` standing for `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerSet {
    k: u32,
}

impl PowerSet {
    pub fn new(k: u32) -> Self {
        assert!(k <= 20, "power set fragment limited to 20 points");
        PowerSet { k }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    /// `{1, …, n} ∩ {1, …, k}`.
    pub fn initial(&self, n: u64) -> u64 {
        if n >= self.k as u64 {
            self.full()
        } else {
            (1u64 << n) - 1
        }
    }
}

impl Fragment for PowerSet {
    type Elem = u64;

    fn elements(&self) -> Vec<u64> {
        (0..=self.full()).collect()
    }

    fn index(&self, x: &u64) -> usize {
        *x as usize
    }

    fn bottom(&self) -> u64 {
        0
    }

    fn leq(&self, x: &u64, y: &u64) -> bool {
        x & !y == 0
    }

    fn join(&self, x: &u64, y: &u64) -> u64 {
        x | y
    }

    fn meet(&self, x: &u64, y: &u64) -> u64 {
        x & y
    }

    fn complement(&self, x: &u64) -> Option<u64> {
        Some(self.full() & !x)
    }

    fn render(&self, x: &u64) -> String {
        let items: Vec<String> = (0..self.k)
            .filter(|b| x >> b & 1 == 1)
            .map(|b| (b + 1).to_string())
            .collect();
        format!("{{{}}}", items.join(","))
    }
}
