//! Permutations on `{1..degree}` with disjoint-cycle text notation.
//!
//! Internally points are 0-based; all text I/O is 1-based.

use std::fmt;

/// A permutation stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Build from an image table (0-based). Must be a bijection.
    pub fn from_images(images: Vec<u16>) -> crate::Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if (img as usize) >= n || seen[img as usize] {
                return Err(crate::Error::BadPerm("image table is not a bijection".into()));
            }
            seen[img as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Parse disjoint-cycle notation like `"(1 2 3)(4 5)"`. Commas and
    /// whitespace both separate points. `"()"` and `""` denote the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> crate::Result<Perm> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut moved = vec![false; degree];
        let body = text.trim();
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| crate::Error::BadPerm(format!("expected '(' in '{text}'")))?;
            if !rest[..open].trim().is_empty() {
                return Err(crate::Error::BadPerm(format!("junk before cycle in '{text}'")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| crate::Error::BadPerm(format!("unclosed cycle in '{text}'")))?;
            if close < open {
                return Err(crate::Error::BadPerm(format!("mismatched parens in '{text}'")));
            }
            let inner = &rest[open + 1..close];
            rest = &rest[close + 1..];
            let mut cycle = Vec::new();
            for tok in inner.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| crate::Error::BadPerm(format!("bad point '{tok}'")))?;
                if p == 0 || p > degree {
                    return Err(crate::Error::BadPerm(format!(
                        "point {p} out of range 1..{degree}"
                    )));
                }
                cycle.push(p - 1);
            }
            if cycle.len() < 2 {
                continue; // fixed point, no-op
            }
            for &p in &cycle {
                if moved[p] {
                    return Err(crate::Error::BadPerm(format!(
                        "point {} repeated across cycles",
                        p + 1
                    )));
                }
                moved[p] = true;
            }
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                images[from] = to as u16;
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &m)| i == m as usize)
    }

    /// Composition "self then other": `(self * other)(x) = other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&m| other.images[m as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &m) in self.images.iter().enumerate() {
            images[m as usize] = i as u16;
        }
        Perm { images }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| crate::primes::lcm(acc, c.len() as u64))
    }

    /// Cycle decomposition including only cycles of length >= 2, each cycle
    /// starting at its least point and cycles sorted by least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Restrict to a sorted list of points that the permutation stabilizes
    /// setwise, re-indexed to 0..points.len().
    pub fn restrict(&self, points: &[usize]) -> crate::Result<Perm> {
        let pos = |p: usize| points.binary_search(&p).ok();
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let q = self.apply(p);
            match pos(q) {
                Some(i) => images.push(i as u16),
                None => {
                    return Err(crate::Error::BadPerm(
                        "point set is not stabilized by the permutation".into(),
                    ))
                }
            }
        }
        Perm::from_images(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let pts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p = Perm::parse_cycles(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        let q = Perm::parse_cycles(5, &p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn identity_forms() {
        assert!(Perm::parse_cycles(3, "").unwrap().is_identity());
        assert!(Perm::parse_cycles(3, "()").unwrap().is_identity());
        assert!(Perm::parse_cycles(3, "(1)").unwrap().is_identity());
        assert_eq!(Perm::identity(4).to_string(), "()");
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse_cycles(3, "(1 4)").is_err());
        assert!(Perm::parse_cycles(3, "(0 1)").is_err());
        assert!(Perm::parse_cycles(3, "(1 2").is_err());
        assert!(Perm::parse_cycles(3, "(1 2)(2 3)").is_err());
        assert!(Perm::parse_cycles(3, "(1 x)").is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::parse_cycles(3, "(1 2)").unwrap();
        let b = Perm::parse_cycles(3, "(2 3)").unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).apply(0), 2);
    }

    #[test]
    fn order_and_pow() {
        let p = Perm::parse_cycles(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(5), p.inverse());
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm() -> impl Strategy<Value = Perm> {
        (1usize..12).prop_flat_map(|n| {
            Just((0..n as u16).collect::<Vec<u16>>()).prop_shuffle().prop_map(Perm::from_images)
        })
        .prop_map(|p| p.unwrap())
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(p in arb_perm()) {
            let q = Perm::parse_cycles(p.degree(), &p.to_string()).unwrap();
            prop_assert_eq!(p, q);
        }

        #[test]
        fn inverse_composes_to_identity(p in arb_perm()) {
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert!(p.inverse().then(&p).is_identity());
        }

        #[test]
        fn order_annihilates(p in arb_perm()) {
            prop_assert!(p.pow(p.order() as i64).is_identity());
        }
    }
}
