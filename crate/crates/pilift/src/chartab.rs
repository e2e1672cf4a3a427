//! Exact irreducible character tables via the Dixon-Schneider method, and
//! the induction / restriction / conjugation toolkit built on them.
//!
//! The table is computed from simultaneous eigenvectors of the class-sum
//! matrices over a prime field F_p with p = 1 (mod exponent), then lifted to
//! exact cyclotomic values by recovering eigenvalue multiplicities through
//! discrete Fourier sums over cyclic subgroups. Row and column orthogonality
//! are verified exactly before a table is returned.

use crate::cyclotomic::{reduce_int_mod_phi, Cyc};
use crate::fp::{Fp, Mat, Subspace};
use crate::group::{Group, Subgroup};
use crate::{Error, Result};
use num::{BigRational, One};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A character value as a multiset of roots of unity at the table conductor:
/// (exponent, multiplicity) pairs. Used for fast exact inner products.
#[derive(Debug, Clone, Default)]
pub struct RootSum(pub Vec<(u64, i64)>);

/// Exact irreducible character table of a group.
pub struct CharTable {
    group: Group,
    exponent: u64,
    /// canonical cyclotomic values, rows x classes
    values: Vec<Vec<Cyc>>,
    /// eigenvalue multisets backing each value
    roots: Vec<Vec<RootSum>>,
    degrees: Vec<u64>,
}

/// One row of a table; cheap to clone and compare.
#[derive(Clone)]
pub struct Character {
    table: Arc<CharTable>,
    row: usize,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.table.group.id() == other.table.group.id() && self.row == other.row
    }
}
impl Eq for Character {}
impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Character {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.table.group.id(), self.row).cmp(&(other.table.group.id(), other.row))
    }
}

impl std::fmt::Debug for Character {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "chi[{}] (degree {})", self.row, self.degree())
    }
}

/// An exact class function, not necessarily irreducible or a character.
#[derive(Clone)]
pub struct ClassFunction {
    pub group: Group,
    pub values: Arc<Vec<Cyc>>,
}

impl std::fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassFunction(group={}, deg={:?})", self.group.id(), self.values.first())
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group.id() == other.group.id()
            && self
                .values
                .iter()
                .zip(other.values.iter())
                .all(|(a, b)| a.equals(b))
    }
}
impl Eq for ClassFunction {}

static TABLE_CACHE: Lazy<Mutex<HashMap<u64, Arc<CharTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The exact character table, computed once per group and cached.
pub fn character_table(group: &Group) -> Result<Arc<CharTable>> {
    if let Some(hit) = TABLE_CACHE.lock().unwrap().get(&group.id()) {
        return Ok(hit.clone());
    }
    let table = Arc::new(build_table(group)?);
    let mut cache = TABLE_CACHE.lock().unwrap();
    Ok(cache.entry(group.id()).or_insert(table).clone())
}

fn next_dixon_prime(exponent: u64, order: u64, after: u64) -> u64 {
    let bound = {
        // smallest p with p*p > 4*order, i.e. p > 2*sqrt(order)
        let mut b = 1u64;
        while b * b <= 4 * order {
            b += 1;
        }
        b
    };
    let mut p = after.max(exponent); // candidates are 1 mod exponent
    loop {
        p += 1;
        if (p - 1) % exponent == 0 && p >= bound && crate::primes::is_prime(p) {
            return p;
        }
    }
}

fn build_table(group: &Group) -> Result<CharTable> {
    let classes = group.conjugacy_classes();
    let r = classes.len();
    let exponent = group.exponent();
    if r == 1 {
        return Ok(CharTable {
            group: group.clone(),
            exponent,
            values: vec![vec![Cyc::one()]],
            roots: vec![vec![RootSum(vec![(0, 1)])]],
            degrees: vec![1],
        });
    }
    let order = group.order() as u64;
    let mut p = 0;
    let mut last_err = String::new();
    for _attempt in 0..4 {
        p = next_dixon_prime(exponent, order, p);
        match dixon_with_prime(group, p) {
            Ok(table) => return Ok(table),
            Err(Error::Table(msg)) => last_err = msg,
            Err(other) => return Err(other),
        }
    }
    Err(Error::Table(format!(
        "table construction failed for group of order {order}: {last_err}"
    )))
}

fn dixon_with_prime(group: &Group, p: u64) -> Result<CharTable> {
    let f = Fp::new(p);
    let classes = group.conjugacy_classes();
    let r = classes.len();
    let order = group.order() as u64;
    let exponent = group.exponent();

    // class of the inverse of each class representative
    let inv_class: Vec<usize> = (0..r)
        .map(|j| group.class_of(group.inv(classes.classes[j].rep)))
        .collect();
    let class_sizes: Vec<u64> = classes.classes.iter().map(|c| c.size() as u64).collect();

    // class-sum matrix M_i with (M_i)[j][k] = #{(x,y) in C_i x C_j : xy = z_k}
    let class_matrix = |i: usize| -> Mat {
        let mut m = Mat::zero(r, r);
        for (k, ck) in classes.classes.iter().enumerate() {
            let zk = ck.rep;
            for &x in &classes.classes[i].members {
                let j = group.class_of(group.mul(group.inv(x), zk));
                let v = f.add(m.at(j, k), 1);
                m.set(j, k, v);
            }
        }
        m
    };

    // split into common eigenspaces
    let mut spaces = vec![Subspace::full(r)];
    for i in 1..r {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let m = class_matrix(i);
        let mut next = Vec::with_capacity(spaces.len());
        for s in spaces {
            if s.dim() == 1 {
                next.push(s);
            } else {
                let restricted = s.restrict_operator(&m, f);
                next.extend(s.split_by(&restricted, f));
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.dim() != 1) {
        return Err(Error::Table(format!(
            "class algebra did not split into {r} lines over F_{p}"
        )));
    }

    // central characters, normalized at the identity class
    let size_inv: Vec<u64> = class_sizes.iter().map(|&s| f.inv(s % p)).collect();
    let mut rows_mod_p: Vec<(u64, Vec<u64>)> = Vec::with_capacity(r);
    for s in &spaces {
        let w = s.basis.row(0);
        if w[0] == 0 {
            return Err(Error::Table("eigenvector vanishes at the identity class".into()));
        }
        let scale = f.inv(w[0]);
        let omega: Vec<u64> = w.iter().map(|&c| f.mul(c, scale)).collect();
        // degree from the second orthogonality of central characters
        let mut s_sum = 0u64;
        for j in 0..r {
            s_sum = f.add(s_sum, f.mul(f.mul(omega[j], omega[inv_class[j]]), size_inv[j]));
        }
        if s_sum == 0 {
            return Err(Error::Table("degenerate central character".into()));
        }
        let d_sq = f.mul(order % p, f.inv(s_sum));
        let mut degree = 0u64;
        let mut d = 1u64;
        while d * d <= order {
            if f.mul(d % p, d % p) == d_sq {
                degree = d;
                break;
            }
            d += 1;
        }
        if degree == 0 {
            return Err(Error::Table("no integer degree matches".into()));
        }
        // chi(g_j) = degree * omega_j / |C_j| (mod p)
        let chi: Vec<u64> = (0..r)
            .map(|j| f.mul(f.mul(degree % p, omega[j]), size_inv[j]))
            .collect();
        rows_mod_p.push((degree, chi));
    }

    // lift each value by Fourier inversion over the cyclic group <g>
    let g_root = f.primitive_root();
    let mut rows: Vec<(u64, Vec<Cyc>, Vec<RootSum>)> = Vec::with_capacity(r);
    for (degree, chi) in &rows_mod_p {
        let mut values = Vec::with_capacity(r);
        let mut roots = Vec::with_capacity(r);
        for j in 0..r {
            let m = classes.classes[j].rep_order;
            let rep = classes.classes[j].rep;
            // classes of powers rep^l
            let power_class: Vec<usize> = (0..m)
                .map(|l| group.class_of(power_of(group, rep, l)))
                .collect();
            let theta = f.pow(g_root, (p - 1) / m);
            let theta_inv = f.inv(theta);
            let m_inv = f.inv(m % p);
            let mut terms: Vec<(u64, i64)> = Vec::new();
            let mut total = 0u64;
            for k in 0..m {
                let mut acc = 0u64;
                for (l, &cl) in power_class.iter().enumerate() {
                    acc = f.add(acc, f.mul(chi[cl], f.pow(theta_inv, k * l as u64)));
                }
                let mu = f.mul(acc, m_inv);
                if mu > *degree {
                    return Err(Error::Table("eigenvalue multiplicity exceeds the degree".into()));
                }
                total += mu;
                if mu > 0 {
                    terms.push((k * (exponent / m), mu as i64));
                }
            }
            if total != *degree {
                return Err(Error::Table("eigenvalue multiplicities do not sum to the degree".into()));
            }
            values.push(Cyc::from_root_sum(exponent, &terms));
            roots.push(RootSum(terms));
        }
        rows.push((*degree, values, roots));
    }

    // deterministic row order: degree ascending, then lexicographic values
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            for (x, y) in a.1.iter().zip(b.1.iter()) {
                let c = x.cmp_key(y);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let table = CharTable {
        group: group.clone(),
        exponent,
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.iter().map(|r| r.1.clone()).collect(),
        roots: rows.into_iter().map(|r| r.2).collect(),
    };
    table.verify_orthogonality()?;
    Ok(table)
}

fn power_of(group: &Group, elem: usize, l: u64) -> usize {
    let p = group.perm(elem).pow(l as i64);
    group.element_id(&p).expect("power stays in the group")
}

impl CharTable {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.group.conjugacy_classes().len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn row_values(&self, row: usize) -> &[Cyc] {
        &self.values[row]
    }

    pub fn row_roots(&self, row: usize) -> &[RootSum] {
        &self.roots[row]
    }

    /// Histogram of character degrees as (degree, count), ascending.
    pub fn degree_histogram(&self) -> Vec<(u64, usize)> {
        let mut hist: Vec<(u64, usize)> = Vec::new();
        for &d in &self.degrees {
            match hist.iter_mut().find(|(deg, _)| *deg == d) {
                Some((_, c)) => *c += 1,
                None => hist.push((d, 1)),
            }
        }
        hist.sort();
        hist
    }

    /// Map class -> class of k-th powers of its elements.
    pub fn power_map(&self, k: i64) -> Vec<usize> {
        let classes = self.group.conjugacy_classes();
        classes
            .classes
            .iter()
            .map(|c| {
                let p = self.group.perm(c.rep).pow(k);
                self.group.class_of(self.group.element_id(&p).unwrap())
            })
            .collect()
    }

    /// Re-run the exact row and column orthogonality checks and the degree
    /// sum identity (they already ran when the table was built).
    pub fn verify(&self) -> Result<()> {
        self.verify_orthogonality()
    }

    fn verify_orthogonality(&self) -> Result<()> {
        let r = self.len();
        let e = self.exponent;
        let order = self.group.order() as i128;
        let sizes: Vec<i128> = self
            .group
            .conjugacy_classes()
            .classes
            .iter()
            .map(|c| c.size() as i128)
            .collect();
        let sq: i128 = self.degrees.iter().map(|&d| (d as i128) * (d as i128)).sum();
        if sq != order {
            return Err(Error::Table("degree squares do not sum to the group order".into()));
        }
        // rows: sum_c |C| chi_i(c) conj(chi_j(c)) = delta_ij |G|
        let mut buf = vec![0i128; e as usize];
        for i in 0..r {
            for j in i..r {
                buf.iter_mut().for_each(|v| *v = 0);
                for c in 0..r {
                    for &(ea, ma) in &self.roots[i][c].0 {
                        for &(eb, mb) in &self.roots[j][c].0 {
                            let idx = ((ea + e - eb) % e) as usize;
                            buf[idx] += sizes[c] * (ma as i128) * (mb as i128);
                        }
                    }
                }
                reduce_int_mod_phi(&mut buf, e);
                let expect = if i == j { order } else { 0 };
                if buf[0] != expect || buf.iter().skip(1).any(|&v| v != 0) {
                    return Err(Error::Table(format!("row orthogonality fails at ({i},{j})")));
                }
            }
        }
        // columns: sum_rows chi(c_i) conj(chi(c_j)) = delta_ij |G| / |C_i|
        for ci in 0..r {
            for cj in ci..r {
                buf.iter_mut().for_each(|v| *v = 0);
                for row in 0..r {
                    for &(ea, ma) in &self.roots[row][ci].0 {
                        for &(eb, mb) in &self.roots[row][cj].0 {
                            let idx = ((ea + e - eb) % e) as usize;
                            buf[idx] += (ma as i128) * (mb as i128);
                        }
                    }
                }
                reduce_int_mod_phi(&mut buf, e);
                let expect = if ci == cj { order / sizes[ci] } else { 0 };
                if buf[0] != expect || buf.iter().skip(1).any(|&v| v != 0) {
                    return Err(Error::Table(format!(
                        "column orthogonality fails at ({ci},{cj})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Characters of a table, in row order.
pub fn irreducibles(table: &Arc<CharTable>) -> Vec<Character> {
    (0..table.len())
        .map(|row| Character {
            table: table.clone(),
            row,
        })
        .collect()
}

impl Character {
    pub fn new(table: Arc<CharTable>, row: usize) -> Character {
        Character { table, row }
    }

    pub fn table(&self) -> &Arc<CharTable> {
        &self.table
    }

    pub fn group(&self) -> &Group {
        self.table.group()
    }

    pub fn row(&self) -> usize {
        self.row
    }

    pub fn degree(&self) -> u64 {
        self.table.degrees[self.row]
    }

    pub fn values(&self) -> &[Cyc] {
        &self.table.values[self.row]
    }

    pub fn value(&self, class: usize) -> &Cyc {
        &self.table.values[self.row][class]
    }

    pub fn is_linear(&self) -> bool {
        self.degree() == 1
    }

    pub fn cf(&self) -> ClassFunction {
        ClassFunction {
            group: self.table.group.clone(),
            values: Arc::new(self.values().to_vec()),
        }
    }

    /// Order of the character as a linear character (lcm of value orders).
    /// Only meaningful for degree 1.
    pub fn multiplicative_order(&self) -> Result<u64> {
        if !self.is_linear() {
            return Err(Error::InvalidArg("order is defined for linear characters".into()));
        }
        let e = self.table.exponent;
        let mut order = 1u64;
        for roots in &self.table.roots[self.row] {
            debug_assert_eq!(roots.0.len(), 1);
            let (exp, _) = roots.0[0];
            let k = crate::primes::gcd(exp, e);
            order = crate::primes::lcm(order, e / k);
        }
        Ok(order)
    }
}

impl ClassFunction {
    pub fn from_values(group: &Group, values: Vec<Cyc>) -> ClassFunction {
        debug_assert_eq!(values.len(), group.conjugacy_classes().len());
        ClassFunction {
            group: group.clone(),
            values: Arc::new(values),
        }
    }

    pub fn degree_value(&self) -> &Cyc {
        &self.values[0]
    }

    pub fn degree_u64(&self) -> Option<u64> {
        self.values[0].as_u64()
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        if self.group.id() != other.group.id() {
            return Err(Error::GroupMismatch);
        }
        Ok(ClassFunction {
            group: self.group.clone(),
            values: Arc::new(
                self.values
                    .iter()
                    .zip(other.values.iter())
                    .map(|(a, b)| a.add(b))
                    .collect(),
            ),
        })
    }

    pub fn scale_u64(&self, k: u64) -> ClassFunction {
        let r = BigRational::from_integer((k as i64).into());
        ClassFunction {
            group: self.group.clone(),
            values: Arc::new(self.values.iter().map(|v| v.scale(&r)).collect()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Class-wise product of two class functions on the same group.
pub fn pointwise_product(a: &ClassFunction, b: &ClassFunction) -> Result<ClassFunction> {
    if a.group.id() != b.group.id() {
        return Err(Error::GroupMismatch);
    }
    Ok(ClassFunction {
        group: a.group.clone(),
        values: Arc::new(
            a.values
                .iter()
                .zip(b.values.iter())
                .map(|(x, y)| x.mul(y))
                .collect(),
        ),
    })
}

/// Exact inner product (1/|G|) sum_c |C| f(c) conj(g(c)).
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<Cyc> {
    if a.group.id() != b.group.id() {
        return Err(Error::GroupMismatch);
    }
    let group = &a.group;
    let classes = group.conjugacy_classes();
    let order = group.order() as i64;
    // common conductor for everything in sight
    let mut e = group.exponent();
    for v in a.values.iter().chain(b.values.iter()) {
        e = crate::primes::lcm(e, v.conductor());
    }
    // fast path: all values are algebraic integers
    if let Some(sum) = int_inner_sum(a, b, e) {
        let cyc = Cyc::from_int_canonical(e, &sum);
        return Ok(cyc.scale(&BigRational::new(1.into(), order.into())));
    }
    let mut acc = Cyc::zero();
    for (c, class) in classes.classes.iter().enumerate() {
        let term = a.values[c].mul(&b.values[c].conjugate());
        let size = BigRational::from_integer((class.size() as i64).into());
        acc = acc.add(&term.scale(&size));
    }
    Ok(acc.scale(&BigRational::new(1.into(), order.into())))
}

/// Integer-path accumulation of sum_c |C| f(c) conj(g(c)), reduced mod Phi_e.
fn int_inner_sum(a: &ClassFunction, b: &ClassFunction, e: u64) -> Option<Vec<i128>> {
    let classes = a.group.conjugacy_classes();
    let ee = e as usize;
    let mut buf = vec![0i128; ee];
    for (c, class) in classes.classes.iter().enumerate() {
        let av = a.values[c].to_int_canonical(e)?;
        let bv = b.values[c].to_int_canonical(e)?;
        let size = class.size() as i128;
        for (i, &ai) in av.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in bv.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                // conj(zeta^j) = zeta^(e-j)
                let idx = (i + ee - j) % ee;
                buf[idx] += size * ai * bj;
            }
        }
    }
    reduce_int_mod_phi(&mut buf, e);
    Some(buf)
}

/// Non-negative integer multiplicity <a, b>, or an error when the inner
/// product is not a non-negative rational integer.
pub fn multiplicity(a: &ClassFunction, b: &ClassFunction) -> Result<u64> {
    let ip = inner_product(a, b)?;
    ip.as_u64()
        .ok_or_else(|| Error::Internal(format!("inner product {ip} is not a non-negative integer")))
}

impl Subgroup {
    /// Character table of the standalone realization.
    pub fn table(&self) -> Result<Arc<CharTable>> {
        character_table(&self.realize().group)
    }

    /// Restrict an ambient class function to this subgroup (values on the
    /// standalone realization's classes).
    pub fn restrict(&self, f: &ClassFunction) -> Result<ClassFunction> {
        if f.group.id() != self.ambient().id() {
            return Err(Error::GroupMismatch);
        }
        let std = self.realize();
        let classes = std.group.conjugacy_classes();
        let values: Vec<Cyc> = classes
            .classes
            .iter()
            .map(|c| {
                let amb = std.to_ambient[c.rep];
                f.values[self.ambient().class_of(amb)].clone()
            })
            .collect();
        Ok(ClassFunction {
            group: std.group.clone(),
            values: Arc::new(values),
        })
    }

    /// Frobenius induction of a class function on this subgroup up to the
    /// ambient group, via class fusion.
    pub fn induce(&self, theta: &ClassFunction) -> Result<ClassFunction> {
        let std = self.realize();
        if theta.group.id() != std.group.id() {
            return Err(Error::GroupMismatch);
        }
        let amb = self.ambient();
        let amb_classes = amb.conjugacy_classes();
        let h_classes = std.group.conjugacy_classes();
        let h_order = self.order() as i64;
        let g_order = amb.order() as i64;
        let mut contrib: Vec<Cyc> = vec![Cyc::zero(); amb_classes.len()];
        for (c, class) in h_classes.classes.iter().enumerate() {
            let amb_class = amb.class_of(std.to_ambient[class.rep]);
            let size = BigRational::from_integer((class.size() as i64).into());
            contrib[amb_class] = contrib[amb_class].add(&theta.values[c].scale(&size));
        }
        let values: Vec<Cyc> = contrib
            .into_iter()
            .enumerate()
            .map(|(j, acc)| {
                // |C_G(g)| / |H| = |G| / (|C_j| |H|)
                let scale = BigRational::new(
                    g_order.into(),
                    ((amb_classes.classes[j].size() as i64) * h_order).into(),
                );
                acc.scale(&scale)
            })
            .collect();
        Ok(ClassFunction {
            group: amb.clone(),
            values: Arc::new(values),
        })
    }
}

/// Clifford decomposition of the restriction of `chi` to `sub`:
/// constituents with multiplicities, plus the homogeneity report when there
/// is exactly one constituent.
pub struct Restriction {
    pub constituents: Vec<(Character, u64)>,
    pub homogeneous: Option<(u64, Character)>,
}

type DecompKey = (u64, usize, u64, Vec<usize>);
static DECOMP_CACHE: Lazy<Mutex<HashMap<DecompKey, Arc<Vec<(usize, u64)>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn restrict_constituents(chi: &Character, sub: &Subgroup) -> Result<Restriction> {
    let key: DecompKey = (
        chi.group().id(),
        chi.row(),
        sub.ambient().id(),
        sub.members().to_vec(),
    );
    let table = sub.table()?;
    if let Some(hit) = DECOMP_CACHE.lock().unwrap().get(&key) {
        return Ok(make_restriction(&table, &hit));
    }
    let restricted = sub.restrict(&chi.cf())?;
    let rows = decompose_character(&restricted, &table)?;
    let rows = Arc::new(rows);
    DECOMP_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| rows.clone());
    Ok(make_restriction(&table, &rows))
}

fn make_restriction(table: &Arc<CharTable>, rows: &[(usize, u64)]) -> Restriction {
    let constituents: Vec<(Character, u64)> = rows
        .iter()
        .map(|&(row, m)| (Character::new(table.clone(), row), m))
        .collect();
    let homogeneous = if constituents.len() == 1 {
        Some((constituents[0].1, constituents[0].0.clone()))
    } else {
        None
    };
    Restriction {
        constituents,
        homogeneous,
    }
}

/// Decompose an arbitrary character (class function with non-negative
/// integral inner products) into table rows. Errors if the decomposition
/// does not reconstruct the input exactly.
pub fn decompose_character(
    f: &ClassFunction,
    table: &Arc<CharTable>,
) -> Result<Vec<(usize, u64)>> {
    let degree = f
        .degree_u64()
        .ok_or_else(|| Error::Internal("class function degree is not a positive integer".into()))?;
    // fast path: extract the integer form of f once, then run every row's
    // inner product against the stored root multisets
    let fast = decompose_by_roots(f, table, degree)?;
    if let Some(rows) = fast {
        return Ok(rows);
    }
    let mut remaining = degree;
    let mut out = Vec::new();
    for row in 0..table.len() {
        if remaining == 0 {
            break;
        }
        if table.degrees[row] > remaining {
            continue;
        }
        let eta = Character::new(table.clone(), row);
        let m = multiplicity(f, &eta.cf())?;
        if m > 0 {
            remaining = remaining
                .checked_sub(m * eta.degree())
                .ok_or_else(|| Error::Internal("constituent degrees exceed the input degree".into()))?;
            out.push((row, m));
        }
    }
    if remaining != 0 {
        return Err(Error::Internal(
            "constituent degrees do not reconstruct the input".into(),
        ));
    }
    Ok(out)
}

/// Integer-path decomposition against a table, using the eigenvalue
/// multisets stored with each row. Returns None when any value of f is not
/// an algebraic integer at a common conductor (the caller then falls back
/// to generic exact arithmetic).
fn decompose_by_roots(
    f: &ClassFunction,
    table: &Arc<CharTable>,
    degree: u64,
) -> Result<Option<Vec<(usize, u64)>>> {
    let mut e = table.exponent();
    for v in f.values.iter() {
        e = crate::primes::lcm(e, v.conductor());
    }
    let classes = f.group.conjugacy_classes();
    let order = f.group.order() as i128;
    let mut f_ints: Vec<Vec<i128>> = Vec::with_capacity(f.values.len());
    for v in f.values.iter() {
        match v.to_int_canonical(e) {
            Some(iv) => f_ints.push(iv),
            None => return Ok(None),
        }
    }
    let scale = e / table.exponent();
    let ee = e as usize;
    let mut out = Vec::new();
    let mut remaining = degree;
    let mut buf = vec![0i128; ee];
    for row in 0..table.len() {
        if remaining == 0 {
            break;
        }
        if table.degrees[row] > remaining {
            continue;
        }
        buf.iter_mut().for_each(|v| *v = 0);
        for (c, class) in classes.classes.iter().enumerate() {
            let size = class.size() as i128;
            for &(a, m) in &table.roots[row][c].0 {
                // conj(zeta^a) contributes at exponent e - a*scale
                let shift = (ee - (a * scale) as usize % ee) % ee;
                let w = size * m as i128;
                for (i, &fi) in f_ints[c].iter().enumerate() {
                    if fi != 0 {
                        buf[(i + shift) % ee] += w * fi;
                    }
                }
            }
        }
        crate::cyclotomic::reduce_int_mod_phi(&mut buf, e);
        if buf.iter().skip(1).any(|&v| v != 0) || buf[0] % order != 0 || buf[0] < 0 {
            return Err(Error::Internal(
                "inner product with a table row is not a non-negative integer".into(),
            ));
        }
        let m = (buf[0] / order) as u64;
        if m > 0 {
            remaining = remaining
                .checked_sub(m * table.degrees[row])
                .ok_or_else(|| Error::Internal("constituent degrees exceed the input degree".into()))?;
            out.push((row, m));
        }
    }
    if remaining != 0 {
        return Err(Error::Internal(
            "constituent degrees do not reconstruct the input".into(),
        ));
    }
    Ok(Some(out))
}

/// The conjugate character chi^g(x) = chi(g x g^-1) of a character of a
/// normal subgroup, matched back to a row of the subgroup's table.
pub fn conjugate_character(chi: &Character, sub: &Subgroup, g: usize) -> Result<Character> {
    let std = sub.realize();
    if chi.group().id() != std.group.id() {
        return Err(Error::GroupMismatch);
    }
    let amb = sub.ambient();
    let classes = std.group.conjugacy_classes();
    let values: Vec<Cyc> = classes
        .classes
        .iter()
        .map(|c| {
            let t = std.to_ambient[c.rep];
            let conj = amb.mul(amb.mul(g, t), amb.inv(g));
            let sid = std
                .from_ambient
                .get(&conj)
                .copied()
                .ok_or(Error::NotNormal)?;
            Ok(chi.value(std.group.class_of(sid)).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let cf = ClassFunction {
        group: std.group.clone(),
        values: Arc::new(values),
    };
    find_row(&cf, chi.table())?
        .ok_or_else(|| Error::Internal("conjugate of an irreducible is not a table row".into()))
}

/// Match a class function to a table row by exact value comparison.
pub fn find_row(f: &ClassFunction, table: &Arc<CharTable>) -> Result<Option<Character>> {
    if f.group.id() != table.group().id() {
        return Err(Error::GroupMismatch);
    }
    for row in 0..table.len() {
        if f.values
            .iter()
            .zip(table.values[row].iter())
            .all(|(a, b)| a.equals(b))
        {
            return Ok(Some(Character::new(table.clone(), row)));
        }
    }
    Ok(None)
}

type DetKey = (u64, usize);
static DET_CACHE: Lazy<Mutex<HashMap<DetKey, u64>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Order of the determinant of a representation affording `chi`: per class,
/// the eigenvalues of a representative are multiplied and the multiplicative
/// order of the resulting root is folded in. The eigenvalue multisets are
/// the ones recovered by Fourier inversion over <g> when the table was
/// built; `determinant_order_by_fourier` redoes that inversion in exact
/// arithmetic and is cross-checked against this in the test suite.
pub fn determinant_order(chi: &Character) -> Result<u64> {
    let key = (chi.group().id(), chi.row());
    if let Some(&hit) = DET_CACHE.lock().unwrap().get(&key) {
        return Ok(hit);
    }
    let table = chi.table();
    let e = table.exponent();
    let mut order = 1u64;
    for roots in table.row_roots(chi.row()) {
        let mut total = 0u64;
        let mut det_exp = 0u64;
        for &(exp, mult) in &roots.0 {
            if mult < 0 {
                return Err(Error::Internal(
                    "recovered eigenvalue multiplicity is negative".into(),
                ));
            }
            total += mult as u64;
            det_exp = (det_exp + exp * (mult as u64)) % e;
        }
        if total != chi.degree() {
            return Err(Error::Internal(
                "recovered eigenvalue multiplicities do not sum to the degree".into(),
            ));
        }
        let val_order = e / crate::primes::gcd(e, det_exp);
        order = crate::primes::lcm(order, val_order);
    }
    debug_assert!(e % order == 0);
    DET_CACHE.lock().unwrap().insert(key, order);
    Ok(order)
}

/// Determinant order recomputed from scratch: per class, recover the
/// eigenvalue multiset of a representative by exact discrete Fourier
/// inversion over <g> using power maps, multiply the eigenvalues, and take
/// the multiplicative order of the resulting linear character.
pub fn determinant_order_by_fourier(chi: &Character) -> Result<u64> {
    let group = chi.group().clone();
    let classes = group.conjugacy_classes();
    let mut order = 1u64;
    for (j, class) in classes.classes.iter().enumerate() {
        let m = class.rep_order;
        let mut det_exp: u64 = 0;
        let mut total: u64 = 0;
        for k in 0..m {
            let mu = eigenvalue_multiplicity(chi, &group, j, k)?;
            det_exp = (det_exp + k * mu) % m;
            total += mu;
        }
        if total != chi.degree() {
            return Err(Error::Internal(
                "recovered eigenvalue multiplicities do not sum to the degree".into(),
            ));
        }
        let val_order = m / crate::primes::gcd(m, det_exp);
        order = crate::primes::lcm(order, val_order);
    }
    Ok(order)
}

/// Multiplicity of zeta_m^k as an eigenvalue of a representative of class j:
/// (1/m) sum_l chi(g^l) zeta_m^(-kl), which must be a non-negative integer.
fn eigenvalue_multiplicity(chi: &Character, group: &Group, j: usize, k: u64) -> Result<u64> {
    let classes = group.conjugacy_classes();
    let m = classes.classes[j].rep_order;
    let rep = classes.classes[j].rep;
    let mut acc = Cyc::zero();
    for l in 0..m {
        let cl = group.class_of(power_of(group, rep, l));
        let root = Cyc::root(m, -((k * l % m) as i64));
        acc = acc.add(&chi.value(cl).mul(&root));
    }
    let acc = acc.scale(&BigRational::new(BigRational::one().numer().clone(), (m as i64).into()));
    acc.as_u64().ok_or_else(|| {
        Error::Internal("recovered eigenvalue multiplicity is not a non-negative integer".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    const CAP: usize = 5000;

    #[test]
    fn c3_table() {
        let c3 = builtins::cyclic(3, CAP).unwrap();
        let t = character_table(&c3).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 1]);
        // rows are the trivial character and the two faithful ones
        let w = Cyc::root(3, 1);
        let w2 = Cyc::root(3, 2);
        let trivial: Vec<Cyc> = vec![Cyc::one(), Cyc::one(), Cyc::one()];
        assert!(t
            .row_values(0)
            .iter()
            .zip(trivial.iter())
            .all(|(a, b)| a.equals(b)));
        // remaining rows carry w and w2 in some order on the generator class
        let vals: Vec<&Cyc> = vec![&t.row_values(1)[1], &t.row_values(2)[1]];
        assert!(
            (vals[0].equals(&w) && vals[1].equals(&w2))
                || (vals[0].equals(&w2) && vals[1].equals(&w))
        );
    }

    #[test]
    fn s3_table() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let t = character_table(&s3).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2]);
        // classes: identity, transpositions, 3-cycles
        let chi2 = t.row_values(2);
        assert!(chi2[0].equals(&Cyc::from_integer(2)));
        assert!(chi2[1].is_zero());
        assert!(chi2[2].equals(&Cyc::from_integer(-1)));
    }

    #[test]
    fn s4_and_a4_degree_patterns() {
        let s4 = builtins::symmetric(4, CAP).unwrap();
        let t = character_table(&s4).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2, 3, 3]);
        let a4 = builtins::alternating(4, CAP).unwrap();
        let t = character_table(&a4).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 1, 3]);
    }

    #[test]
    fn extraspecial_27_degrees() {
        let e = builtins::extraspecial_27_exponent3(CAP).unwrap();
        let t = character_table(&e).unwrap();
        assert_eq!(t.degree_histogram(), vec![(1, 9), (3, 2)]);
        assert_eq!(t.class_count(), 11);
    }

    #[test]
    fn power_maps() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let t = character_table(&s3).unwrap();
        // squaring: transpositions -> identity, 3-cycles -> 3-cycles
        assert_eq!(t.power_map(2), vec![0, 0, 2]);
        assert_eq!(t.power_map(1), vec![0, 1, 2]);
        let c4 = builtins::cyclic(4, CAP).unwrap();
        let t4 = character_table(&c4).unwrap();
        let classes = c4.conjugacy_classes();
        let gen_class = c4.class_of(c4.element_id(&c4.generators()[0]).unwrap());
        let sq = t4.power_map(2)[gen_class];
        assert_eq!(classes.classes[sq].rep_order, 2);
    }

    #[test]
    fn inner_products_on_s3() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let t = character_table(&s3).unwrap();
        let rows = irreducibles(&t);
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                let ip = inner_product(&a.cf(), &b.cf()).unwrap();
                let expect = if i == j { Cyc::one() } else { Cyc::zero() };
                assert!(ip.equals(&expect));
            }
        }
        // <regular character, chi> = chi(1)
        let mut reg = vec![Cyc::zero(); 3];
        reg[0] = Cyc::from_integer(6);
        let reg = ClassFunction::from_values(&s3, reg);
        for chi in &rows {
            let ip = inner_product(&reg, &chi.cf()).unwrap();
            assert!(ip.equals(&Cyc::from_integer(chi.degree() as i64)));
        }
    }

    #[test]
    fn induction_from_a3_to_s3() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let a3 = s3.normal_subgroups()[1].clone();
        let ta3 = a3.table().unwrap();
        let ts3 = character_table(&s3).unwrap();
        // nontrivial character of A3 induces to the degree-2 irreducible
        let omega = Character::new(ta3.clone(), 1);
        let ind = a3.induce(&omega.cf()).unwrap();
        let found = find_row(&ind, &ts3).unwrap().unwrap();
        assert_eq!(found.degree(), 2);
        // trivial character of A3 induces to 1 + sgn
        let one = Character::new(ta3.clone(), 0);
        let ind = one.cf();
        let ind = a3.induce(&ind).unwrap();
        let rows = decompose_character(&ind, &ts3).unwrap();
        assert_eq!(rows, vec![(0, 1), (1, 1)]);
        // induction from the trivial subgroup gives the regular character
        let triv = s3.trivial_subgroup();
        let t1 = triv.table().unwrap();
        let ind = triv.induce(&Character::new(t1, 0).cf()).unwrap();
        assert_eq!(ind.degree_u64(), Some(6));
    }

    #[test]
    fn restriction_to_a3() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let ts3 = character_table(&s3).unwrap();
        let a3 = s3.normal_subgroups()[1].clone();
        let chi2 = Character::new(ts3.clone(), 2);
        let r = restrict_constituents(&chi2, &a3).unwrap();
        assert_eq!(r.constituents.len(), 2);
        assert!(r.homogeneous.is_none());
        let sgn = Character::new(ts3.clone(), 1);
        let r = restrict_constituents(&sgn, &a3).unwrap();
        let (a, eta) = r.homogeneous.unwrap();
        assert_eq!(a, 1);
        assert_eq!(eta.row(), 0);
    }

    #[test]
    fn determinant_orders_on_s3() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let t = character_table(&s3).unwrap();
        assert_eq!(determinant_order(&Character::new(t.clone(), 0)).unwrap(), 1);
        assert_eq!(determinant_order(&Character::new(t.clone(), 1)).unwrap(), 2);
        // det of the degree-2 character is sgn
        assert_eq!(determinant_order(&Character::new(t.clone(), 2)).unwrap(), 2);
    }

    #[test]
    fn conjugation_swaps_omega() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let a3 = s3.normal_subgroups()[1].clone();
        let ta3 = a3.table().unwrap();
        let omega = Character::new(ta3.clone(), 1);
        let transposition = s3
            .element_id(&crate::perm::Perm::parse_cycles(3, "(1 2)").unwrap())
            .unwrap();
        let conj = conjugate_character(&omega, &a3, transposition).unwrap();
        assert_eq!(conj.row(), 2);
        // conjugating by an element of A3 fixes it
        let inner = a3.members()[1];
        let conj = conjugate_character(&omega, &a3, inner).unwrap();
        assert_eq!(conj.row(), 1);
    }

    #[test]
    fn pointwise_products() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let t = character_table(&s3).unwrap();
        let sgn = Character::new(t.clone(), 1);
        let chi2 = Character::new(t.clone(), 2);
        let prod = pointwise_product(&chi2.cf(), &sgn.cf()).unwrap();
        let row = find_row(&prod, &t).unwrap().unwrap();
        assert_eq!(row.row(), 2);
        let prod = pointwise_product(&Character::new(t.clone(), 0).cf(), &chi2.cf()).unwrap();
        assert_eq!(find_row(&prod, &t).unwrap().unwrap().row(), 2);
    }

    #[test]
    fn linear_character_orders() {
        let c6 = builtins::cyclic(6, CAP).unwrap();
        let t = character_table(&c6).unwrap();
        let orders: Vec<u64> = irreducibles(&t)
            .iter()
            .map(|c| c.multiplicative_order().unwrap())
            .collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3, 3, 6, 6]);
    }
}

/// Restrict a class function on `big` (values on its realization) to the
/// smaller subgroup `small` of the same ambient group.
pub fn restrict_between(
    small: &Subgroup,
    big: &Subgroup,
    f: &ClassFunction,
) -> Result<ClassFunction> {
    if small.ambient().id() != big.ambient().id() {
        return Err(Error::GroupMismatch);
    }
    let sstd = small.realize();
    let bstd = big.realize();
    if f.group.id() != bstd.group.id() {
        return Err(Error::GroupMismatch);
    }
    let classes = sstd.group.conjugacy_classes();
    let values = classes
        .classes
        .iter()
        .map(|c| {
            let amb = sstd.to_ambient[c.rep];
            let bsid = bstd.from_ambient.get(&amb).ok_or(Error::NotSubgroup)?;
            Ok(f.values[bstd.group.class_of(*bsid)].clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassFunction {
        group: sstd.group.clone(),
        values: Arc::new(values),
    })
}

/// Frobenius induction from `small` up to `big`, both subgroups of the same
/// ambient group, via class fusion.
pub fn induce_between(
    small: &Subgroup,
    big: &Subgroup,
    theta: &ClassFunction,
) -> Result<ClassFunction> {
    if small.ambient().id() != big.ambient().id() {
        return Err(Error::GroupMismatch);
    }
    let sstd = small.realize();
    let bstd = big.realize();
    if theta.group.id() != sstd.group.id() {
        return Err(Error::GroupMismatch);
    }
    let b_classes = bstd.group.conjugacy_classes();
    let s_classes = sstd.group.conjugacy_classes();
    let mut contrib: Vec<Cyc> = vec![Cyc::zero(); b_classes.len()];
    for (c, class) in s_classes.classes.iter().enumerate() {
        let amb = sstd.to_ambient[class.rep];
        let bsid = bstd.from_ambient.get(&amb).ok_or(Error::NotSubgroup)?;
        let bclass = bstd.group.class_of(*bsid);
        let size = BigRational::from_integer((class.size() as i64).into());
        contrib[bclass] = contrib[bclass].add(&theta.values[c].scale(&size));
    }
    let b_order = big.order() as i64;
    let s_order = small.order() as i64;
    let values: Vec<Cyc> = contrib
        .into_iter()
        .enumerate()
        .map(|(j, acc)| {
            let scale = BigRational::new(
                b_order.into(),
                ((b_classes.classes[j].size() as i64) * s_order).into(),
            );
            acc.scale(&scale)
        })
        .collect();
    Ok(ClassFunction {
        group: bstd.group.clone(),
        values: Arc::new(values),
    })
}

type BetweenKey = (u64, usize, Vec<usize>);
static BETWEEN_CACHE: Lazy<Mutex<HashMap<BetweenKey, Arc<Vec<(usize, u64)>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Decomposition of the restriction of a table row of `big` to `small`
/// (both subgroups of one ambient group), as rows of `small`'s table.
/// Cached on (big realization, row, small members).
pub fn decompose_restriction_cached(
    chi: &Character,
    small: &Subgroup,
    big: &Subgroup,
) -> Result<Arc<Vec<(usize, u64)>>> {
    let bstd = big.realize();
    if chi.group().id() != bstd.group.id() {
        return Err(Error::GroupMismatch);
    }
    if small.members() == big.members() {
        return Ok(Arc::new(vec![(chi.row(), 1)]));
    }
    let key: BetweenKey = (bstd.group.id(), chi.row(), small.members().to_vec());
    if let Some(hit) = BETWEEN_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let table = small.table()?;
    let restricted = restrict_between(small, big, &chi.cf())?;
    let rows = Arc::new(decompose_character(&restricted, &table)?);
    let mut cache = BETWEEN_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(rows).clone())
}

#[cfg(test)]
mod det_cross_check {
    use super::*;
    use crate::builtins;

    #[test]
    fn fourier_route_agrees_with_root_route() {
        for name in ["s3", "s4", "a4", "c6", "d8", "c7c3", "sl23", "es27"] {
            let g = builtins::builtin(name, 5000).unwrap();
            let t = character_table(&g).unwrap();
            for chi in irreducibles(&t) {
                assert_eq!(
                    determinant_order(&chi).unwrap(),
                    determinant_order_by_fourier(&chi).unwrap(),
                    "{name} row {}",
                    chi.row()
                );
            }
        }
    }
}

type InduceKey = (u64, usize, u64);
static INDUCE_CACHE: Lazy<Mutex<HashMap<InduceKey, Arc<ClassFunction>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Induction of a table row of `small` up to `big`, cached by the two
/// realizations (which identify the member sets) and the row.
pub fn induce_row_cached(
    small: &Subgroup,
    big: &Subgroup,
    chi: &Character,
) -> Result<Arc<ClassFunction>> {
    let sgid = small.realize().group.id();
    let bgid = big.realize().group.id();
    if chi.group().id() != sgid {
        return Err(Error::GroupMismatch);
    }
    let key: InduceKey = (sgid, chi.row(), bgid);
    if let Some(hit) = INDUCE_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let out = Arc::new(induce_between(small, big, &chi.cf())?);
    let mut cache = INDUCE_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}
