//! Exact sums of roots of unity, reduced in `ℚ(ζ_N)` modulo the cyclotomic polynomial.

use std::collections::HashMap;

use num_integer::Integer;

use crate::roots::RootOfUnity;

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    fn go(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        // x^n - 1 divided by Φ_d for every proper divisor d
        let mut num = vec![0i64; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        for d in 1..n {
            if n % d == 0 {
                let phi = go(d, memo);
                num = exact_div(&num, &phi);
            }
        }
        memo.insert(n, num.clone());
        num
    }
    go(n, &mut HashMap::new())
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1);
    let mut q = vec![0i64; r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd] / lead;
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// A formal integer combination of roots of unity.
#[derive(Clone, Debug, Default)]
pub struct RootSum {
    terms: HashMap<RootOfUnity, i64>,
}

impl RootSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: RootOfUnity, c: i64) {
        *self.terms.entry(z).or_insert(0) += c;
    }

    /// Power-basis coordinates in `ℚ(ζ_N)`, `N` the lcm of the orders present.
    pub fn reduce(&self) -> (u64, Vec<i64>) {
        let n = self.terms.keys().fold(1u64, |acc, z| acc.lcm(&z.order()));
        let mut poly = vec![0i64; n as usize];
        for (z, &c) in &self.terms {
            poly[z.exponent_in(n).expect("order divides lcm") as usize] += c;
        }
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        for i in (deg..poly.len()).rev() {
            let c = poly[i];
            if c != 0 {
                for (j, &p) in phi.iter().enumerate() {
                    poly[i - deg + j] -= c * p;
                }
            }
        }
        poly.truncate(deg.max(1));
        (n, poly)
    }

    /// The value, if it is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        let (_, p) = self.reduce();
        p[1..].iter().all(|&c| c == 0).then_some(p[0])
    }

    pub fn is_zero(&self) -> bool {
        self.reduce().1.iter().all(|&c| c == 0)
    }
}
