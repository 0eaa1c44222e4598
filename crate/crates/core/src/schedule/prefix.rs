use super::FiniteSchedule;
use crate::Scalar;

/// Aggregates `A_n = alpha_1 + ... + alpha_{n-1}` and `C_n = A_n (A_n + 1) / 2`
/// for `n = 1, ..., len + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixSums<T> {
    a: Vec<T>,
    c: Vec<T>,
}

impl<T: Scalar> PrefixSums<T> {
    /// Largest valid index `n` (schedule length + 1).
    pub fn last_index(&self) -> usize {
        self.a.len()
    }

    /// `A_n`, 1-based.
    pub fn a(&self, n: usize) -> T {
        self.a[n - 1]
    }

    /// `C_n`, 1-based.
    pub fn c(&self, n: usize) -> T {
        self.c[n - 1]
    }

    pub fn a_values(&self) -> &[T] {
        &self.a
    }

    pub fn c_values(&self) -> &[T] {
        &self.c
    }
}

pub(crate) fn c_of<T: Scalar>(a: T) -> T {
    a * (a + T::one()) / (T::one() + T::one())
}

pub fn prefix_sums<T: Scalar>(s: &FiniteSchedule<T>) -> PrefixSums<T> {
    let mut a = Vec::with_capacity(s.len() + 1);
    let mut acc = T::zero();
    a.push(acc);
    for &v in s.values() {
        acc += v;
        a.push(acc);
    }
    let c = a.iter().map(|&x| c_of(x)).collect();
    PrefixSums { a, c }
}
