//! Prime sets and pi-number arithmetic.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A finite set of primes, the "pi" of pi-separability.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeSet(BTreeSet<u64>);

impl PrimeSet {
    pub fn new<I: IntoIterator<Item = u64>>(primes: I) -> crate::Result<Self> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if set.is_empty() {
            return Err(crate::Error::InvalidArg("pi must be non-empty".into()));
        }
        for &p in &set {
            if !is_prime(p) {
                return Err(crate::Error::InvalidArg(format!("{p} is not prime")));
            }
        }
        Ok(PrimeSet(set))
    }

    pub fn parse(text: &str) -> crate::Result<Self> {
        let mut primes = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let p: u64 = part
                .parse()
                .map_err(|_| crate::Error::InvalidArg(format!("bad prime '{part}'")))?;
            primes.push(p);
        }
        PrimeSet::new(primes)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// n is a pi-number: every prime factor lies in the set.
    pub fn is_pi_number(&self, n: u64) -> bool {
        factorize(n).iter().all(|&(p, _)| self.contains(p))
    }

    /// n is a pi'-number: no prime factor lies in the set.
    pub fn is_pi_prime_number(&self, n: u64) -> bool {
        factorize(n).iter().all(|&(p, _)| !self.contains(p))
    }

    /// Largest divisor of n that is a pi-number.
    pub fn pi_part(&self, n: u64) -> u64 {
        factorize(n)
            .iter()
            .filter(|&&(p, _)| self.contains(p))
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    /// Largest divisor of n that is a pi'-number.
    pub fn pi_prime_part(&self, n: u64) -> u64 {
        n / self.pi_part(n)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_parts() {
        let pi = PrimeSet::new([3]).unwrap();
        assert_eq!(pi.pi_part(63), 9);
        assert_eq!(pi.pi_prime_part(63), 7);
        assert!(pi.is_pi_number(27));
        assert!(pi.is_pi_prime_number(14));
        assert!(!pi.is_pi_number(6));
        assert!(!pi.is_pi_prime_number(6));
        // 1 is both a pi-number and a pi'-number
        assert!(pi.is_pi_number(1));
        assert!(pi.is_pi_prime_number(1));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(1323), vec![(3, 3), (7, 2)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(PrimeSet::parse("4").is_err());
        assert!(PrimeSet::parse("").is_err());
        assert!(PrimeSet::parse("3,7").is_ok());
    }
}
