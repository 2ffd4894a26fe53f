//! Prime-field arithmetic and small dense linear algebra over GF(q).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    q: u32,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(q: u32) -> Result<Field> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field { q })
    }

    /// A field large enough for the network's alphabet.
    pub fn for_alphabet(q: u32, alphabet: u32) -> Result<Field> {
        let f = Field::new(q)?;
        if q < alphabet {
            return Err(Error::FieldTooSmall { q, alphabet });
        }
        Ok(f)
    }

    pub fn order(self) -> u32 {
        self.q
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.q - b % self.q)
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.q - a % self.q) % self.q
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.q;
        (a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }

    /// `acc += c * v`, elementwise.
    pub fn axpy(self, acc: &mut [u32], c: u32, v: &[u32]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }

    /// Coefficients `c` with `Σ c_k · columns[k] = target`, if any exist.
    pub fn solve(self, columns: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
        let dim = target.len();
        let n = columns.len();
        // Augmented matrix, rows = coordinates.
        let mut m: Vec<Vec<u32>> = (0..dim)
            .map(|r| {
                let mut row: Vec<u32> = columns.iter().map(|c| c[r]).collect();
                row.push(target[r]);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..dim).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, p);
            let inv = self.inv(m[row][col]).expect("nonzero pivot");
            for x in m[row].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let prow = m[row].clone();
            for (r, other) in m.iter_mut().enumerate() {
                if r != row && other[col] != 0 {
                    let f = self.neg(other[col]);
                    self.axpy(other, f, &prow);
                }
            }
            pivots.push(col);
            row += 1;
            if row == dim {
                break;
            }
        }
        if m[row..].iter().any(|r| r[n] != 0) {
            return None;
        }
        let mut coeffs = vec![0; n];
        for (r, &col) in pivots.iter().enumerate() {
            coeffs[col] = m[r][n];
        }
        Some(coeffs)
    }
}

/// Row-reduced basis of a subspace of GF(q)^dim, supporting membership tests
/// and enumeration of its elements.
#[derive(Debug, Clone)]
pub struct Span {
    field: Field,
    dim: usize,
    /// Reduced rows with distinct pivot columns.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(field: Field, dim: usize) -> Span {
        Span {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] != 0 {
                let c = f.neg(v[p]);
                f.axpy(&mut v, c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn insert(&mut self, v: &[u32]) {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = f.inv(r[p]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            if row[p] != 0 {
                let c = f.neg(row[p]);
                f.axpy(row, c, &r);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
    }

    /// Nonzero elements whose first nonzero coordinate is one (one per line).
    pub fn projective_points(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let q = f.order() as u64;
        let k = self.rows.len();
        let mut out = Vec::new();
        let total = q.pow(k as u32);
        for code in 1..total {
            let mut c = code;
            let mut v = vec![0u32; self.dim];
            for row in &self.rows {
                f.axpy(&mut v, (c % q) as u32, row);
                c /= q;
            }
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                out.push(v);
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_field_facts() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.inv(2), Some(2));
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.mul(3, 4), 2);
        assert_eq!(f5.inv(0), None);
        assert_eq!(Field::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Field::new(1), Err(Error::NotPrime(1)));
        assert!(matches!(Field::for_alphabet(2, 3), Err(Error::FieldTooSmall { .. })));
    }

    #[test]
    fn solve_and_span() {
        let f = Field::new(2).unwrap();
        let cols = vec![vec![1, 0], vec![1, 1]];
        assert_eq!(f.solve(&cols, &[0, 1]), Some(vec![1, 1]));
        assert_eq!(f.solve(&[vec![1, 1]], &[1, 0]), None);

        let mut s = Span::new(f, 2);
        s.insert(&[1, 1]);
        assert!(s.contains(&[1, 1]) && !s.contains(&[1, 0]));
        assert_eq!(s.projective_points(), vec![vec![1, 1]]);
        s.insert(&[0, 1]);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.projective_points().len(), 3);

        let f3 = Field::new(3).unwrap();
        let mut s = Span::new(f3, 2);
        s.insert(&[1, 0]);
        s.insert(&[0, 2]);
        // (q^2 - 1) / (q - 1) lines.
        assert_eq!(s.projective_points().len(), 4);
    }

    proptest! {
        #[test]
        fn field_axioms(qi in 0usize..4, a in 0u32..7, b in 0u32..7, c in 0u32..7) {
            let q = [2u32, 3, 5, 7][qi];
            let f = Field::new(q).unwrap();
            let (a, b, c) = (a % q, b % q, c % q);
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
