//! Built-in group constructors and the .perm file format.

use crate::group::{semidirect_product, Group, Subgroup};
use crate::perm::Perm;
use crate::primes::PrimeSet;
use crate::series::NormalPiSeries;
use crate::{Error, Result};

pub fn cyclic(n: usize, cap: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::InvalidArg("cyclic group order must be positive".into()));
    }
    let images: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
    let g = Group::from_generators(n, vec![Perm::from_images(images)?], cap)?;
    Ok(g.with_name(&format!("c{n}")))
}

/// Dihedral group of order 2n (order must be even, at least 4).
pub fn dihedral(order: usize, cap: usize) -> Result<Group> {
    if order < 4 || order % 2 != 0 {
        return Err(Error::InvalidArg("dihedral order must be even and >= 4".into()));
    }
    let n = order / 2;
    if n == 2 {
        // Klein four group on 4 points
        let g = Group::from_cycle_strings(4, &["(1 2)", "(3 4)"], cap)?;
        return Ok(g.with_name("d4"));
    }
    let rot: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
    let refl: Vec<u16> = (0..n).map(|i| ((n - i) % n) as u16).collect();
    let g = Group::from_generators(
        n,
        vec![Perm::from_images(rot)?, Perm::from_images(refl)?],
        cap,
    )?;
    Ok(g.with_name(&format!("d{order}")))
}

pub fn symmetric(n: usize, cap: usize) -> Result<Group> {
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidArg("symmetric group degree must be 1..=5".into()));
    }
    if n == 1 {
        return Ok(Group::from_generators(1, vec![], cap)?.with_name("s1"));
    }
    let cycle: String = format!(
        "({})",
        (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    );
    let g = Group::from_cycle_strings(n, &["(1 2)", &cycle], cap)?;
    Ok(g.with_name(&format!("s{n}")))
}

pub fn alternating(n: usize, cap: usize) -> Result<Group> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidArg("alternating group degree must be 3..=5".into()));
    }
    let g = match n {
        3 => Group::from_cycle_strings(3, &["(1 2 3)"], cap)?,
        4 => Group::from_cycle_strings(4, &["(1 2 3)", "(2 3 4)"], cap)?,
        _ => Group::from_cycle_strings(5, &["(1 2 3 4 5)", "(1 2 3)"], cap)?,
    };
    Ok(g.with_name(&format!("a{n}")))
}

/// Frobenius group of order 21 acting on F_7.
pub fn c7_c3(cap: usize) -> Result<Group> {
    let g = Group::from_cycle_strings(7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], cap)?;
    assert_eq!(g.order(), 21);
    Ok(g.with_name("c7c3"))
}

/// SL(2,3) of order 24 acting on the 8 nonzero vectors of F_3^2.
pub fn sl_2_3(cap: usize) -> Result<Group> {
    let vectors: Vec<(u8, u8)> = (0..3u8)
        .flat_map(|a| (0..3u8).map(move |b| (a, b)))
        .filter(|&(a, b)| a != 0 || b != 0)
        .collect();
    let idx = |a: u8, b: u8| vectors.iter().position(|&v| v == (a, b)).unwrap() as u16;
    let s: Vec<u16> = vectors.iter().map(|&(a, b)| idx((3 - b) % 3, a)).collect();
    let t: Vec<u16> = vectors.iter().map(|&(a, b)| idx((a + b) % 3, b)).collect();
    let g = Group::from_generators(8, vec![Perm::from_images(s)?, Perm::from_images(t)?], cap)?;
    assert_eq!(g.order(), 24);
    Ok(g.with_name("sl23"))
}

/// The extraspecial group of order 27 and exponent 3, on 9 points: affine
/// maps (u,v) -> (u+a, v+c+bu) of F_3^2.
pub fn extraspecial_27_exponent3(cap: usize) -> Result<Group> {
    let idx = |u: u8, v: u8| (3 * u + v) as u16;
    let mut x = vec![0u16; 9];
    let mut y = vec![0u16; 9];
    for u in 0..3u8 {
        for v in 0..3u8 {
            x[idx(u, v) as usize] = idx((u + 1) % 3, v);
            y[idx(u, v) as usize] = idx(u, (v + u) % 3);
        }
    }
    let g = Group::from_generators(9, vec![Perm::from_images(x)?, Perm::from_images(y)?], cap)?;
    assert_eq!(g.order(), 27);
    assert_eq!(g.exponent(), 3);
    Ok(g.with_name("es27"))
}

/// The bundled order-1323 case-study group and its named subgroups:
/// an extraspecial group of order 27 acting on C7 x C7, with the two
/// elementary factors having different maximal subgroups as kernels.
pub struct Section4Group {
    pub g: Group,
    pub e: Subgroup,
    pub v: Subgroup,
    pub v1: Subgroup,
    pub v2: Subgroup,
    pub m1: Subgroup,
    pub m2: Subgroup,
    pub z: Subgroup,
    pub x: Subgroup,
    pub m1v: Subgroup,
    pub m2v: Subgroup,
}

pub fn section4_group(cap: usize) -> Result<Section4Group> {
    // V = C7 x C7 on 14 points
    let v1_perm = Perm::parse_cycles(14, "(1 2 3 4 5 6 7)")?;
    let v2_perm = Perm::parse_cycles(14, "(8 9 10 11 12 13 14)")?;
    let v_group = Group::from_generators(14, vec![v1_perm.clone(), v2_perm.clone()], cap)?;
    let e_group = extraspecial_27_exponent3(cap)?;

    // x inverts-squares V1 and fixes V2; y fixes V1 and squares V2.
    // The kernel of the action on V1 is then <y, [x,y]> and on V2 is
    // <x, [x,y]>, two distinct maximal subgroups of E.
    let square = |p: &Perm| p.then(p);
    let action = vec![
        vec![square(&v1_perm), v2_perm.clone()],
        vec![v1_perm.clone(), square(&v2_perm)],
    ];
    let sd = semidirect_product(&v_group, &e_group, &action)?;
    let g = sd.group.clone().with_name("sec4");
    // rebuild subgroup handles against the renamed group instance
    let v = g.subgroup(sd.normal_part.members().to_vec())?;
    let e = g.subgroup(sd.acting_part.members().to_vec())?;

    let v1 = g.subgroup_generated(&[sd.embed_normal[v_group.element_id(&v1_perm).unwrap()]]);
    let v2 = g.subgroup_generated(&[sd.embed_normal[v_group.element_id(&v2_perm).unwrap()]]);
    let xg = sd.embed_acting[e_group.element_id(&e_group.generators()[0]).unwrap()];
    let yg = sd.embed_acting[e_group.element_id(&e_group.generators()[1]).unwrap()];
    let zg = g.mul(g.mul(g.mul(g.inv(xg), g.inv(yg)), xg), yg);
    let m1 = g.subgroup_generated(&[yg, zg]);
    let m2 = g.subgroup_generated(&[xg, zg]);
    let z = g.center();
    let x = z.product(&v)?;
    let m1v = m1.product(&v)?;
    let m2v = m2.product(&v)?;

    // construction self-checks
    if g.order() != 1323 {
        return Err(Error::Internal(format!("case-study group has order {}", g.order())));
    }
    for (sub, expect, label) in [
        (&v, 49, "V"),
        (&e, 27, "E"),
        (&v1, 7, "V1"),
        (&v2, 7, "V2"),
        (&m1, 9, "M1"),
        (&m2, 9, "M2"),
        (&z, 3, "Z"),
        (&x, 147, "X"),
        (&m1v, 441, "M1V"),
        (&m2v, 441, "M2V"),
    ] {
        if sub.order() != expect {
            return Err(Error::Internal(format!("|{label}| = {}, expected {expect}", sub.order())));
        }
    }
    if m1 == m2 {
        return Err(Error::Internal("kernels M1 and M2 coincide".into()));
    }
    // M_i is exactly the kernel of E acting on V_i
    for (m, vi) in [(&m1, &v1), (&m2, &v2)] {
        for &h in e.members() {
            let fixes_vi = vi.members().iter().all(|&w| g.conj(w, h) == w);
            if fixes_vi != m.contains(h) {
                return Err(Error::Internal("action kernel mismatch".into()));
            }
        }
    }
    // X = Z x V
    if z.intersection(&v).order() != 1 {
        return Err(Error::Internal("Z meets V nontrivially".into()));
    }
    Ok(Section4Group {
        g,
        e,
        v,
        v1,
        v2,
        m1,
        m2,
        z,
        x,
        m1v,
        m2v,
    })
}

impl Section4Group {
    /// The series {1 < V < G}.
    pub fn series_n(&self, pi: &PrimeSet) -> Result<NormalPiSeries> {
        NormalPiSeries::new(
            pi.clone(),
            vec![self.g.trivial_subgroup(), self.v.clone(), self.g.full_subgroup()],
        )
    }

    /// The series {1 < V < M1V < G}.
    pub fn series_n1(&self, pi: &PrimeSet) -> Result<NormalPiSeries> {
        NormalPiSeries::new(
            pi.clone(),
            vec![
                self.g.trivial_subgroup(),
                self.v.clone(),
                self.m1v.clone(),
                self.g.full_subgroup(),
            ],
        )
    }

    /// The series {1 < V < M2V < G}.
    pub fn series_n2(&self, pi: &PrimeSet) -> Result<NormalPiSeries> {
        NormalPiSeries::new(
            pi.clone(),
            vec![
                self.g.trivial_subgroup(),
                self.v.clone(),
                self.m2v.clone(),
                self.g.full_subgroup(),
            ],
        )
    }
}

/// Resolve a builtin group name like "s3", "c12", "d8", "sec4".
pub fn builtin(name: &str, cap: usize) -> Result<Group> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "s1" | "s2" | "s3" | "s4" | "s5" => symmetric(lower[1..].parse().unwrap(), cap),
        "a3" | "a4" | "a5" => alternating(lower[1..].parse().unwrap(), cap),
        "c7c3" => c7_c3(cap),
        "sl23" => sl_2_3(cap),
        "es27" => extraspecial_27_exponent3(cap),
        "sec4" | "section4" | "g1323" => Ok(section4_group(cap)?.g),
        _ => {
            if let Some(rest) = lower.strip_prefix('c') {
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::InvalidArg(format!("unknown builtin '{name}'")))?;
                cyclic(n, cap)
            } else if let Some(rest) = lower.strip_prefix('d') {
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::InvalidArg(format!("unknown builtin '{name}'")))?;
                dihedral(n, cap)
            } else {
                Err(Error::InvalidArg(format!("unknown builtin '{name}'")))
            }
        }
    }
}

/// Parse the .perm format: first line "degree N", then one generator per
/// line in cycle notation; '#' starts a comment.
pub fn group_from_perm_str(text: &str, cap: usize) -> Result<Group> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<Perm> = Vec::new();
    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        match degree {
            None => {
                let rest = line
                    .strip_prefix("degree")
                    .ok_or_else(|| Error::InvalidArg("first line must be 'degree N'".into()))?;
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArg("bad degree".into()))?;
                if n == 0 || n > u16::MAX as usize {
                    return Err(Error::InvalidArg("degree out of range".into()));
                }
                degree = Some(n);
            }
            Some(n) => gens.push(Perm::parse_cycles(n, line)?),
        }
    }
    let degree = degree.ok_or_else(|| Error::InvalidArg("missing 'degree N' line".into()))?;
    Group::from_generators(degree, gens, cap)
}

pub fn group_from_perm_file(path: &std::path::Path, cap: usize) -> Result<Group> {
    let text = std::fs::read_to_string(path)?;
    group_from_perm_str(&text, cap)
}

/// Render a group's generators in the .perm format.
pub fn group_to_perm_str(group: &Group) -> String {
    let mut out = format!("degree {}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}
