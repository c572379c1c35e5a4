use serde::Serialize;

use crate::error::{domain, Result};

/// μ_2(d) for d = 1..10. The last two entries are not tabulated anywhere; they
/// are the values forced by the published bounds for n = 283 and n = 409.
pub const MU_2: [u64; 10] = [1, 3, 6, 9, 13, 15, 22, 24, 30, 33];
/// μ_3(d) for d = 1..8.
pub const MU_3: [u64; 8] = [1, 3, 6, 9, 12, 15, 19, 21];
/// μ_q(d) for q ≥ 4: Karatsuba-style bounds valid over every field.
pub const MU_GENERIC: [u64; 4] = [1, 3, 6, 9];
/// M̂(u) for u = 1..8, the same for every q.
pub const M_HAT: [u64; 8] = [1, 3, 5, 8, 11, 15, 19, 24];

/// Bilinear multiplication counts for one base field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostTable {
    pub q: u64,
    pub mu: Vec<u64>,
    pub m_hat: Vec<u64>,
}

impl CostTable {
    pub fn new(q: u64) -> CostTable {
        let mu = match q {
            2 => MU_2.to_vec(),
            3 => MU_3.to_vec(),
            _ => MU_GENERIC.to_vec(),
        };
        CostTable { q, mu, m_hat: M_HAT.to_vec() }
    }

    /// Largest place degree with a known μ_q.
    pub fn max_degree(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self, d: usize) -> Result<u64> {
        match d.checked_sub(1).and_then(|i| self.mu.get(i)) {
            Some(&m) => Ok(m),
            None => domain(format!("mu_{}({d}) is outside the cost table (1..={})", self.q, self.mu.len())),
        }
    }

    pub fn m_hat(&self, u: usize) -> Result<u64> {
        match u.checked_sub(1).and_then(|i| self.m_hat.get(i)) {
            Some(&m) => Ok(m),
            None => domain(format!("M^({u}) is outside the cost table (1..={})", self.m_hat.len())),
        }
    }

    /// μ_q(d, u) ≤ μ_q(d)·M̂(u).
    pub fn cost(&self, d: usize, u: usize) -> Result<u64> {
        Ok(self.mu(d)? * self.m_hat(u)?)
    }
}

/// Shorthand for `CostTable::new(q).cost(d, u)`.
pub fn cost(q: u64, d: usize, u: usize) -> Result<u64> {
    CostTable::new(q).cost(d, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries() {
        assert_eq!(cost(2, 4, 1).unwrap(), 9);
        assert_eq!(cost(3, 1, 3).unwrap(), 5);
        assert_eq!(cost(2, 2, 2).unwrap(), 9);
        assert_eq!(cost(2, 1, 1).unwrap(), 1);
        assert!(cost(3, 9, 1).is_err());
        assert!(cost(2, 1, 9).is_err());
        assert!(cost(5, 5, 1).is_err());
    }

    #[test]
    fn monotone() {
        for q in [2, 3, 4] {
            let t = CostTable::new(q);
            assert!(t.mu.windows(2).all(|w| w[0] <= w[1]));
        }
        assert!(M_HAT.windows(2).all(|w| w[0] <= w[1]));
    }
}
