use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector of a monomial.
pub type Exps = SmallVec<[u16; 8]>;

/// User-facing monomial order choice; variable priority follows declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GrevLex,
}

impl OrderKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::GrevLex => "grevlex",
        }
    }
}

/// A concrete monomial order: kind, variable weights, and an optional
/// elimination block made of the first `block` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoOrder {
    pub kind: OrderKind,
    pub weights: Vec<u32>,
    pub block: usize,
}

impl MonoOrder {
    pub fn new(kind: OrderKind, weights: Vec<u32>) -> Self {
        MonoOrder { kind, weights, block: 0 }
    }

    pub fn with_block(mut self, block: usize) -> Self {
        self.block = block;
        self
    }

    fn grevlex_range(&self, a: &[u16], b: &[u16], lo: usize, hi: usize) -> Ordering {
        let da: u64 = (lo..hi).map(|i| a[i] as u64 * self.weights[i] as u64).sum();
        let db: u64 = (lo..hi).map(|i| b[i] as u64 * self.weights[i] as u64).sum();
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (lo..hi).rev() {
            if a[i] != b[i] {
                return if a[i] < b[i] { Ordering::Greater } else { Ordering::Less };
            }
        }
        Ordering::Equal
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.cmp(b),
            OrderKind::GrevLex => {
                let n = a.len();
                if self.block > 0 && self.block < n {
                    match self.grevlex_range(a, b, 0, self.block) {
                        Ordering::Equal => self.grevlex_range(a, b, self.block, n),
                        o => o,
                    }
                } else {
                    self.grevlex_range(a, b, 0, n)
                }
            }
        }
    }
}

pub fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

pub fn add_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn grevlex_breaks_ties_by_last_variable() {
        let o = MonoOrder::new(OrderKind::GrevLex, vec![1, 1, 1]);
        let xz: Exps = smallvec![1, 0, 1];
        let yy: Exps = smallvec![0, 2, 0];
        // x*z < y^2 in grevlex since z appears in x*z
        assert_eq!(o.cmp(&xz, &yy), Ordering::Less);
        let x2: Exps = smallvec![2, 0, 0];
        assert_eq!(o.cmp(&x2, &yy), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_first_variables() {
        let o = MonoOrder::new(OrderKind::GrevLex, vec![1, 1, 1]).with_block(1);
        let t: Exps = smallvec![1, 0, 0];
        let big: Exps = smallvec![0, 5, 5];
        assert_eq!(o.cmp(&t, &big), Ordering::Greater);
    }
}
