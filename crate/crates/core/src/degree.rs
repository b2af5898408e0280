use std::fmt;

/// A multidegree in N^k with the componentwise partial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(pub Vec<usize>);

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// The degree with a single 1 in colour `i` (1-based).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i - 1] = 1;
        Degree(v)
    }

    /// The degree (1,...,1).
    pub fn ones(k: usize) -> Self {
        Degree(vec![1; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Total number of edges in a path of this degree.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` if any component would go negative.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    /// Componentwise partial order.
    pub fn leq(&self, other: &Degree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn scale(&self, n: usize) -> Degree {
        Degree(self.0.iter().map(|c| c * n).collect())
    }

    /// Signed vector view, for exponent arithmetic.
    pub fn signed(&self) -> Vec<i64> {
        self.0.iter().map(|&c| c as i64).collect()
    }

    /// Signed difference `self - other`.
    pub fn signed_sub(&self, other: &Degree) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect()
    }

    /// All degrees q with 0 <= q <= bound, in lexicographic order.
    pub fn boxed(bound: &Degree) -> Vec<Degree> {
        let mut out = vec![Degree::zero(bound.k())];
        for i in 0..bound.k() {
            let mut next = Vec::new();
            for d in &out {
                for c in 0..=bound.0[i] {
                    let mut v = d.0.clone();
                    v[i] = c;
                    next.push(Degree(v));
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_meet_order() {
        let p = Degree(vec![2, 0]);
        let q = Degree(vec![1, 3]);
        assert_eq!(p.join(&q), Degree(vec![2, 3]));
        assert_eq!(p.meet(&q), Degree(vec![1, 0]));
        assert!(!p.leq(&q));
        assert!(p.meet(&q).leq(&p));
    }

    #[test]
    fn boxed_enumerates_full_box() {
        let all = Degree::boxed(&Degree(vec![2, 1]));
        assert_eq!(all.len(), 6);
        assert!(all.contains(&Degree(vec![2, 1])));
        assert!(all.contains(&Degree(vec![0, 0])));
    }
}
