//! Finite permutation groups: element enumeration, conjugacy classes,
//! subgroup structure, quotients, and products.

use crate::perm::Perm;
use crate::{Error, Result};
use once_cell::sync::{Lazy, OnceCell};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Order cap taken from PILIFT_ORDER_CAP when set.
pub fn order_cap_from_env() -> usize {
    std::env::var("PILIFT_ORDER_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORDER_CAP)
}

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// One conjugacy class: representative, sorted member element ids, size.
#[derive(Debug, Clone)]
pub struct ConjClass {
    pub rep: usize,
    pub members: Vec<usize>,
    pub rep_order: u64,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// All conjugacy classes, in deterministic order (identity first).
#[derive(Debug, Clone)]
pub struct ConjClassSet {
    pub classes: Vec<ConjClass>,
    /// element id -> class id
    pub class_of: Vec<usize>,
}

impl ConjClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Debug)]
pub struct GroupData {
    id: u64,
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inverses: Vec<usize>,
    name: Option<String>,
    classes: OnceCell<ConjClassSet>,
    normals: OnceCell<Vec<Subgroup>>,
    subnormals: OnceCell<Vec<Subgroup>>,
    center: OnceCell<Vec<usize>>,
    exponent: OnceCell<u64>,
}

/// A finite group realized by a faithful permutation action. Cheap to clone.
#[derive(Clone)]
pub struct Group(Arc<GroupData>);

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Group(id={}, degree={}, order={}{})",
            self.id(),
            self.degree(),
            self.order(),
            match self.name() {
                Some(n) => format!(", {n}"),
                None => String::new(),
            }
        )
    }
}

impl Group {
    /// Generate from permutations; enumerates all elements by closure.
    pub fn from_generators(degree: usize, gens: Vec<Perm>, cap: usize) -> Result<Group> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::BadPerm("generator degree mismatch".into()));
            }
        }
        let mut gens = gens;
        if gens.is_empty() {
            gens.push(Perm::identity(degree));
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), 0usize);
        let mut queue = VecDeque::new();
        queue.push_back(0usize);
        while let Some(i) = queue.pop_front() {
            let base = elements[i].clone();
            for g in &gens {
                let prod = base.then(g);
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCap { cap });
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let inverses = elements
            .iter()
            .map(|e| index[&e.inverse()])
            .collect();
        Ok(Group(Arc::new(GroupData {
            id: NEXT_GROUP_ID.fetch_add(1, AtomicOrdering::Relaxed),
            degree,
            gens,
            elements,
            index,
            inverses,
            name: None,
            classes: OnceCell::new(),
            normals: OnceCell::new(),
            subnormals: OnceCell::new(),
            center: OnceCell::new(),
            exponent: OnceCell::new(),
        })))
    }

    /// Parse generators in cycle notation and generate the group.
    pub fn from_cycle_strings(degree: usize, gens: &[&str], cap: usize) -> Result<Group> {
        let perms = gens
            .iter()
            .map(|t| Perm::parse_cycles(degree, t))
            .collect::<Result<Vec<_>>>()?;
        Group::from_generators(degree, perms, cap)
    }

    pub fn with_name(self, name: &str) -> Group {
        let mut data = match Arc::try_unwrap(self.0) {
            Ok(d) => d,
            Err(arc) => {
                // keep the same identity; name is cosmetic
                return Group(arc);
            }
        };
        data.name = Some(name.to_string());
        Group(Arc::new(data))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn order(&self) -> usize {
        self.0.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.0.gens
    }

    pub fn elements(&self) -> &[Perm] {
        &self.0.elements
    }

    pub fn perm(&self, id: usize) -> &Perm {
        &self.0.elements[id]
    }

    pub fn element_id(&self, p: &Perm) -> Option<usize> {
        self.0.index.get(p).copied()
    }

    pub fn identity_id(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.index[&self.0.elements[a].then(&self.0.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.inverses[a]
    }

    /// g^-1 a g
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.0.elements[a].order()
    }

    pub fn exponent(&self) -> u64 {
        *self.0.exponent.get_or_init(|| {
            self.conjugacy_classes()
                .classes
                .iter()
                .fold(1, |acc, c| crate::primes::lcm(acc, c.rep_order))
        })
    }

    /// Conjugacy classes in deterministic order: identity class first, then
    /// sorted by (representative order, class size, minimal member image).
    pub fn conjugacy_classes(&self) -> &ConjClassSet {
        self.0.classes.get_or_init(|| {
            let n = self.order();
            let mut class_of = vec![usize::MAX; n];
            let mut raw: Vec<Vec<usize>> = Vec::new();
            for start in 0..n {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let cid = raw.len();
                let mut members = vec![start];
                class_of[start] = cid;
                let mut queue = VecDeque::new();
                queue.push_back(start);
                while let Some(x) = queue.pop_front() {
                    for gi in 0..self.0.gens.len() {
                        let g = self.element_id(&self.0.gens[gi]).unwrap();
                        let y = self.conj(x, g);
                        if class_of[y] == usize::MAX {
                            class_of[y] = cid;
                            members.push(y);
                            queue.push_back(y);
                        }
                    }
                }
                members.sort_unstable();
                raw.push(members);
            }
            // deterministic ordering
            let mut order: Vec<usize> = (0..raw.len()).collect();
            let keys: Vec<(u64, usize, &Perm)> = raw
                .iter()
                .map(|members| {
                    let min = members
                        .iter()
                        .map(|&m| &self.0.elements[m])
                        .min()
                        .unwrap();
                    (min.order(), members.len(), min)
                })
                .collect();
            order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
            let mut classes = Vec::with_capacity(raw.len());
            let mut final_class_of = vec![0usize; n];
            for (new_id, &old_id) in order.iter().enumerate() {
                let members = raw[old_id].clone();
                let rep = *members
                    .iter()
                    .min_by(|&&a, &&b| self.0.elements[a].cmp(&self.0.elements[b]))
                    .unwrap();
                for &m in &members {
                    final_class_of[m] = new_id;
                }
                classes.push(ConjClass {
                    rep,
                    rep_order: self.0.elements[rep].order(),
                    members,
                });
            }
            ConjClassSet {
                classes,
                class_of: final_class_of,
            }
        })
    }

    pub fn class_of(&self, elem: usize) -> usize {
        self.conjugacy_classes().class_of[elem]
    }

    /// Subgroup closure of a set of element ids.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[0] = true;
        let mut list = vec![0usize];
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        let seed: Vec<usize> = seed.to_vec();
        while let Some(x) = queue.pop_front() {
            for &s in &seed {
                let y = self.mul(x, s);
                if !members[y] {
                    members[y] = true;
                    list.push(y);
                    queue.push_back(y);
                }
            }
        }
        list.sort_unstable();
        list
    }

    pub fn subgroup(&self, members: Vec<usize>) -> Result<Subgroup> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        let sub = Subgroup {
            ambient: self.clone(),
            members: Arc::new(members),
        };
        if !sub.is_subgroup() {
            return Err(Error::NotSubgroup);
        }
        Ok(sub)
    }

    pub fn subgroup_generated(&self, seed: &[usize]) -> Subgroup {
        Subgroup {
            ambient: self.clone(),
            members: Arc::new(self.closure(seed)),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            ambient: self.clone(),
            members: Arc::new(vec![0]),
        }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            ambient: self.clone(),
            members: Arc::new((0..self.order()).collect()),
        }
    }

    /// All normal subgroups: joins of normal closures of conjugacy classes,
    /// sorted by (order, member list). The join of two normal subgroups is
    /// their product set, so no closure re-enumeration is needed.
    pub fn normal_subgroups(&self) -> &[Subgroup] {
        self.0.normals.get_or_init(|| {
            let classes = self.conjugacy_classes();
            let product = |a: &[usize], b: &[usize]| -> Vec<usize> {
                let mut mark = vec![false; self.order()];
                for &x in a {
                    for &y in b {
                        mark[self.mul(x, y)] = true;
                    }
                }
                (0..self.order()).filter(|&i| mark[i]).collect()
            };
            let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
            seen.insert(vec![0], ());
            let mut worklist: Vec<Vec<usize>> = Vec::new();
            for c in &classes.classes {
                let clo = self.closure(&c.members);
                if !seen.contains_key(&clo) {
                    seen.insert(clo.clone(), ());
                    worklist.push(clo);
                }
            }
            while let Some(a) = worklist.pop() {
                let current: Vec<Vec<usize>> = seen.keys().cloned().collect();
                for b in &current {
                    if *b == a || b.len() == self.order() || a.len() == self.order() {
                        continue;
                    }
                    let join = product(&a, b);
                    if !seen.contains_key(&join) {
                        seen.insert(join.clone(), ());
                        worklist.push(join);
                    }
                }
            }
            let mut subs: Vec<Subgroup> = seen
                .keys()
                .map(|m| Subgroup {
                    ambient: self.clone(),
                    members: Arc::new(m.clone()),
                })
                .collect();
            subs.sort_by(|a, b| {
                (a.order(), a.members()).cmp(&(b.order(), b.members()))
            });
            subs
        })
    }

    /// Breadth-first closure of "normal subgroup of" starting at the whole
    /// group. Members are returned as subgroups of this group.
    pub fn subnormal_subgroups(&self) -> &[Subgroup] {
        self.0.subnormals.get_or_init(|| {
            let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
            let all: Vec<usize> = (0..self.order()).collect();
            seen.insert(all.clone(), ());
            let mut queue = VecDeque::new();
            queue.push_back(all);
            while let Some(members) = queue.pop_front() {
                let sub = Subgroup {
                    ambient: self.clone(),
                    members: Arc::new(members),
                };
                let std = sub.realize();
                for n in std.group.normal_subgroups() {
                    let g_members: Vec<usize> = n
                        .members()
                        .iter()
                        .map(|&i| std.to_ambient[i])
                        .collect();
                    let mut g_members = g_members;
                    g_members.sort_unstable();
                    if !seen.contains_key(&g_members) {
                        seen.insert(g_members.clone(), ());
                        queue.push_back(g_members);
                    }
                }
            }
            let mut subs: Vec<Subgroup> = seen
                .keys()
                .map(|m| Subgroup {
                    ambient: self.clone(),
                    members: Arc::new(m.clone()),
                })
                .collect();
            subs.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
            subs
        })
    }

    pub fn center(&self) -> Subgroup {
        let members = self.0.center.get_or_init(|| {
            let gen_ids: Vec<usize> = self
                .0
                .gens
                .iter()
                .map(|g| self.element_id(g).unwrap())
                .collect();
            (0..self.order())
                .filter(|&x| gen_ids.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
                .collect()
        });
        Subgroup {
            ambient: self.clone(),
            members: Arc::new(members.clone()),
        }
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.full_subgroup().derived_subgroup()
    }

    /// The quotient by a normal subgroup, realized by the action on right
    /// cosets, together with the projection map on element ids.
    pub fn quotient(&self, n: &Subgroup) -> Result<(Group, Vec<usize>)> {
        if n.ambient.id() != self.id() {
            return Err(Error::GroupMismatch);
        }
        if !n.is_normal() {
            return Err(Error::NotNormal);
        }
        let (quotient, proj, _) = self.coset_action(n)?;
        Ok((quotient, proj))
    }

    /// Action on right cosets of an arbitrary subgroup. Returns the image
    /// group, the map element -> image element, and the coset point of each
    /// element. Faithful iff the core of the subgroup is trivial.
    pub fn coset_action(&self, h: &Subgroup) -> Result<(Group, Vec<usize>, Vec<usize>)> {
        if h.ambient.id() != self.id() {
            return Err(Error::GroupMismatch);
        }
        // coset of x = min member of Hx
        let n = self.order();
        let mut coset_min = vec![usize::MAX; n];
        let mut coset_ids: Vec<usize> = Vec::new();
        let mut coset_index: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            if coset_min[x] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = h.members().iter().map(|&m| self.mul(m, x)).collect();
            let min = *members.iter().min().unwrap();
            for &m in &members {
                coset_min[m] = min;
            }
        }
        for x in 0..n {
            let m = coset_min[x];
            if let std::collections::hash_map::Entry::Vacant(e) = coset_index.entry(m) {
                e.insert(coset_ids.len());
                coset_ids.push(m);
            }
        }
        let points = coset_ids.len();
        let coset_point: Vec<usize> = (0..n).map(|x| coset_index[&coset_min[x]]).collect();
        // generators act by right multiplication on cosets
        let mut image_gens = Vec::new();
        for g in &self.0.gens {
            let gid = self.element_id(g).unwrap();
            let mut images = vec![0u16; points];
            for (ci, &rep) in coset_ids.iter().enumerate() {
                images[ci] = coset_point[self.mul(rep, gid)] as u16;
            }
            image_gens.push(Perm::from_images(images)?);
        }
        let image = Group::from_generators(points, image_gens, self.order() + 1)?;
        // element -> image element
        let mut proj = Vec::with_capacity(n);
        for x in 0..n {
            let mut images = vec![0u16; points];
            for (ci, &rep) in coset_ids.iter().enumerate() {
                images[ci] = coset_point[self.mul(rep, x)] as u16;
            }
            let p = Perm::from_images(images)?;
            proj.push(
                image
                    .element_id(&p)
                    .ok_or_else(|| Error::Internal("coset action image mismatch".into()))?,
            );
        }
        Ok((image, proj, coset_point))
    }
}

/// A subgroup given by its sorted member ids inside an ambient group.
#[derive(Clone)]
pub struct Subgroup {
    pub(crate) ambient: Group,
    pub(crate) members: Arc<Vec<usize>>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup(order={}, ambient={})",
            self.order(),
            self.ambient.id()
        )
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.id() == other.ambient.id() && self.members == other.members
    }
}
impl Eq for Subgroup {}

/// Standalone realization of a subgroup: the group on the induced faithful
/// action of its own moved points, plus element id translations.
pub struct SubgroupStd {
    pub group: Group,
    pub to_ambient: Vec<usize>,
    pub from_ambient: HashMap<usize, usize>,
}

type RealizeKey = (u64, Vec<usize>);
static REALIZE_CACHE: Lazy<Mutex<HashMap<RealizeKey, Arc<SubgroupStd>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl Subgroup {
    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.members.binary_search(&elem).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.ambient.order()
    }

    pub fn is_subgroup(&self) -> bool {
        if !self.contains(self.ambient.identity_id()) {
            return false;
        }
        let gens = self.generating_set();
        for &m in self.members.iter() {
            for &g in &gens {
                if !self.contains(self.ambient.mul(m, g)) {
                    return false;
                }
            }
            if !self.contains(self.ambient.inv(m)) {
                return false;
            }
        }
        self.ambient.closure(&gens).len() == self.order()
    }

    pub fn is_normal(&self) -> bool {
        let gen_ids: Vec<usize> = self
            .ambient
            .generators()
            .iter()
            .map(|g| self.ambient.element_id(g).unwrap())
            .collect();
        self.members
            .iter()
            .all(|&m| gen_ids.iter().all(|&g| self.contains(self.ambient.conj(m, g))))
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.members.iter().all(|&m| self.contains(m))
    }

    /// Greedy small generating set.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut closed = vec![0usize]; // trivial closure
        for &m in self.members.iter() {
            if closed.binary_search(&m).is_err() {
                gens.push(m);
                closed = self.ambient.closure(&gens);
                if closed.len() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        debug_assert_eq!(self.ambient.id(), other.ambient.id());
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Subgroup {
            ambient: self.ambient.clone(),
            members: Arc::new(members),
        }
    }

    /// Product set H*K; a subgroup when one factor normalizes the other
    /// (checked by closure).
    pub fn product(&self, other: &Subgroup) -> Result<Subgroup> {
        debug_assert_eq!(self.ambient.id(), other.ambient.id());
        let mut members: Vec<usize> = Vec::new();
        for &a in self.members.iter() {
            for &b in other.members.iter() {
                members.push(self.ambient.mul(a, b));
            }
        }
        members.sort_unstable();
        members.dedup();
        let sub = Subgroup {
            ambient: self.ambient.clone(),
            members: Arc::new(members),
        };
        if !sub.is_subgroup() {
            return Err(Error::NotSubgroup);
        }
        Ok(sub)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut seed: Vec<usize> = self.members.to_vec();
        seed.extend(other.members.iter());
        self.ambient.subgroup_generated(&seed)
    }

    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&m| self.ambient.conj(m, g))
            .collect();
        members.sort_unstable();
        Subgroup {
            ambient: self.ambient.clone(),
            members: Arc::new(members),
        }
    }

    /// Derived subgroup: normal closure (within this subgroup) of the
    /// commutators of a generating set.
    pub fn derived_subgroup(&self) -> Subgroup {
        let g = &self.ambient;
        let gens = self.generating_set();
        let mut seed: Vec<usize> = Vec::new();
        for &a in &gens {
            for &b in &gens {
                // a^-1 b^-1 a b
                let c = g.mul(g.mul(g.mul(g.inv(a), g.inv(b)), a), b);
                seed.push(c);
            }
        }
        seed.sort_unstable();
        seed.dedup();
        loop {
            let closure = g.closure(&seed);
            let mut grew = false;
            for &x in &seed.clone() {
                for &s in &gens {
                    let y = g.conj(x, s);
                    if closure.binary_search(&y).is_err() {
                        seed.push(y);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Subgroup {
                    ambient: g.clone(),
                    members: Arc::new(closure),
                };
            }
            seed.sort_unstable();
            seed.dedup();
        }
    }

    /// Standalone realization on the support points, cached globally.
    pub fn realize(&self) -> Arc<SubgroupStd> {
        let key: RealizeKey = (self.ambient.id(), self.members.to_vec());
        if let Some(hit) = REALIZE_CACHE.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let std = self.realize_uncached();
        let arc = Arc::new(std);
        let mut cache = REALIZE_CACHE.lock().unwrap();
        cache.entry(key).or_insert_with(|| arc.clone()).clone()
    }

    fn realize_uncached(&self) -> SubgroupStd {
        let amb = &self.ambient;
        if self.is_full() {
            // the whole group realizes as itself, keeping table identity
            let to_ambient: Vec<usize> = (0..amb.order()).collect();
            let from_ambient = to_ambient.iter().map(|&i| (i, i)).collect();
            return SubgroupStd {
                group: amb.clone(),
                to_ambient,
                from_ambient,
            };
        }
        // support: points moved by at least one member
        let degree = amb.degree();
        let mut moved = vec![false; degree];
        for &m in self.members.iter() {
            let p = amb.perm(m);
            for pt in 0..degree {
                if p.apply(pt) != pt {
                    moved[pt] = true;
                }
            }
        }
        let mut support: Vec<usize> = (0..degree).filter(|&p| moved[p]).collect();
        if support.is_empty() {
            support.push(0); // trivial subgroup: degree-1 identity action
        }
        let gens = self.generating_set();
        let gen_perms: Vec<Perm> = gens
            .iter()
            .map(|&g| amb.perm(g).restrict(&support).expect("support is invariant"))
            .collect();
        let group = Group::from_generators(support.len(), gen_perms, self.order() + 1)
            .expect("subgroup realization within cap");
        assert_eq!(group.order(), self.order(), "restricted action must stay faithful");
        let mut to_ambient = vec![0usize; self.order()];
        let mut from_ambient = HashMap::new();
        for &m in self.members.iter() {
            let restricted = amb.perm(m).restrict(&support).unwrap();
            let sid = group
                .element_id(&restricted)
                .expect("member maps into realization");
            to_ambient[sid] = m;
            from_ambient.insert(m, sid);
        }
        SubgroupStd {
            group,
            to_ambient,
            from_ambient,
        }
    }
}

/// Result of a semidirect product construction N x| H, acting on the
/// elements of N joined with H's own points.
pub struct SemidirectProduct {
    pub group: Group,
    /// image of N inside the product
    pub normal_part: Subgroup,
    /// image of H inside the product
    pub acting_part: Subgroup,
    /// N element id -> product element id
    pub embed_normal: Vec<usize>,
    /// H element id -> product element id
    pub embed_acting: Vec<usize>,
}

/// Build N x| H from automorphism images of N's generators, one list per
/// generator of H. The product acts on |N| affine points (the elements of N)
/// joined with H's own points, which is always faithful.
pub fn semidirect_product(
    normal: &Group,
    acting: &Group,
    action: &[Vec<Perm>],
) -> Result<SemidirectProduct> {
    if action.len() != acting.generators().len() {
        return Err(Error::BadAction(
            "need one automorphism per generator of the acting group".into(),
        ));
    }
    let n = normal.order();
    // extend each generator automorphism over all of N by the Cayley graph
    let mut autos: Vec<Vec<usize>> = Vec::new();
    for images in action {
        if images.len() != normal.generators().len() {
            return Err(Error::BadAction(
                "need one image per generator of the normal group".into(),
            ));
        }
        let gen_ids: Vec<usize> = normal
            .generators()
            .iter()
            .map(|g| normal.element_id(g).unwrap())
            .collect();
        let image_ids: Vec<usize> = images
            .iter()
            .map(|p| {
                normal
                    .element_id(p)
                    .ok_or_else(|| Error::BadAction("image is not an element of the normal group".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut phi = vec![usize::MAX; n];
        phi[0] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(0usize);
        while let Some(x) = queue.pop_front() {
            for (k, &g) in gen_ids.iter().enumerate() {
                let y = normal.mul(x, g);
                if phi[y] == usize::MAX {
                    phi[y] = normal.mul(phi[x], image_ids[k]);
                    queue.push_back(y);
                }
            }
        }
        if phi.iter().any(|&v| v == usize::MAX) {
            return Err(Error::BadAction("normal group generators do not generate".into()));
        }
        // verify automorphism on all pairs
        let mut seen = vec![false; n];
        for &v in &phi {
            if seen[v] {
                return Err(Error::BadAction("action image is not a bijection".into()));
            }
            seen[v] = true;
        }
        for x in 0..n {
            for y in 0..n {
                if phi[normal.mul(x, y)] != normal.mul(phi[x], phi[y]) {
                    return Err(Error::BadAction("action image is not a homomorphism".into()));
                }
            }
        }
        autos.push(phi);
    }

    let h_deg = acting.degree();
    let degree = n + h_deg;
    let mut gens: Vec<Perm> = Vec::new();
    // N generators: right multiplication on affine points, identity on H points
    for g in normal.generators() {
        let gid = normal.element_id(g).unwrap();
        let mut images = vec![0u16; degree];
        for (x, im) in images.iter_mut().enumerate().take(n) {
            *im = normal.mul(x, gid) as u16;
        }
        for pt in 0..h_deg {
            images[n + pt] = (n + pt) as u16;
        }
        gens.push(Perm::from_images(images)?);
    }
    // H generators: automorphism on affine points, own action on H points
    for (k, g) in acting.generators().iter().enumerate() {
        let mut images = vec![0u16; degree];
        for (x, phi_x) in autos[k].iter().enumerate() {
            images[x] = *phi_x as u16;
        }
        for pt in 0..h_deg {
            images[n + pt] = (n + g.apply(pt)) as u16;
        }
        gens.push(Perm::from_images(images)?);
    }
    let expected = n * acting.order();
    let group = Group::from_generators(degree, gens, expected + 1).map_err(|e| match e {
        Error::OrderCap { .. } => {
            Error::BadAction("generated group exceeds |N|*|H|; action does not respect relations".into())
        }
        other => other,
    })?;
    if group.order() != expected {
        return Err(Error::BadAction(format!(
            "generated order {} != |N|*|H| = {}",
            group.order(),
            expected
        )));
    }
    // identify the embedded copies
    let n_gen_ids: Vec<usize> = (0..normal.generators().len())
        .map(|i| group.element_id(&group.generators()[i]).unwrap())
        .collect();
    let h_gen_ids: Vec<usize> = (0..acting.generators().len())
        .map(|i| {
            group
                .element_id(&group.generators()[normal.generators().len() + i])
                .unwrap()
        })
        .collect();
    let normal_part = group.subgroup_generated(&n_gen_ids);
    let acting_part = group.subgroup_generated(&h_gen_ids);
    if normal_part.order() != n || acting_part.order() != acting.order() {
        return Err(Error::Internal("embedded factor has wrong order".into()));
    }
    // element embeddings by generator words (BFS mirror)
    let embed_via = |src: &Group, gen_ids: &[usize]| -> Vec<usize> {
        let src_gens: Vec<usize> = src
            .generators()
            .iter()
            .map(|g| src.element_id(g).unwrap())
            .collect();
        let mut map = vec![usize::MAX; src.order()];
        map[0] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(0usize);
        while let Some(x) = queue.pop_front() {
            for (k, &g) in src_gens.iter().enumerate() {
                let y = src.mul(x, g);
                if map[y] == usize::MAX {
                    map[y] = group.mul(map[x], gen_ids[k]);
                    queue.push_back(y);
                }
            }
        }
        map
    };
    let embed_normal = embed_via(normal, &n_gen_ids);
    let embed_acting = embed_via(acting, &h_gen_ids);
    Ok(SemidirectProduct {
        group,
        normal_part,
        acting_part,
        embed_normal,
        embed_acting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    const CAP: usize = 5000;

    #[test]
    fn s3_structure() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        assert_eq!(s3.order(), 6);
        let classes = s3.conjugacy_classes();
        let sizes: Vec<usize> = classes.classes.iter().map(|c| c.size()).collect();
        // identity first; deterministic order by (rep order, size)
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(classes.classes[0].rep_order, 1);
        // class equation
        assert_eq!(sizes.iter().sum::<usize>(), 6);
        for s in sizes {
            assert_eq!(6 % s, 0);
        }
    }

    #[test]
    fn c4_classes_singletons() {
        let c4 = builtins::cyclic(4, CAP).unwrap();
        let classes = c4.conjugacy_classes();
        assert_eq!(classes.len(), 4);
        assert!(classes.classes.iter().all(|c| c.size() == 1));
    }

    #[test]
    fn s3_normal_subgroups() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let normals = s3.normal_subgroups();
        let orders: Vec<usize> = normals.iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 3, 6]);
    }

    #[test]
    fn a4_normal_subgroups() {
        let a4 = builtins::alternating(4, CAP).unwrap();
        let orders: Vec<usize> = a4.normal_subgroups().iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 4, 12]);
    }

    #[test]
    fn klein_four_all_normal() {
        let v4 = builtins::dihedral(4, CAP).unwrap();
        assert_eq!(v4.order(), 4);
        let orders: Vec<usize> = v4.normal_subgroups().iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);
    }

    #[test]
    fn s3_subnormals_equal_normals() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let subnormals = s3.subnormal_subgroups();
        assert_eq!(subnormals.len(), 3);
        // <(1 2)> is not subnormal
        let t = s3
            .element_id(&crate::perm::Perm::parse_cycles(3, "(1 2)").unwrap())
            .unwrap();
        let h = s3.subgroup_generated(&[t]);
        assert!(!subnormals.contains(&h));
    }

    #[test]
    fn d8_subnormals_are_all_subgroups() {
        let d8 = builtins::dihedral(8, CAP).unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.subnormal_subgroups().len(), 10);
    }

    #[test]
    fn a4_subnormals() {
        let a4 = builtins::alternating(4, CAP).unwrap();
        let orders: Vec<usize> = a4
            .subnormal_subgroups()
            .iter()
            .map(|n| n.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4, 12]);
    }

    #[test]
    fn derived_subgroups() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let d = s3.derived_subgroup();
        assert_eq!(d.order(), 3);
        let c6 = builtins::cyclic(6, CAP).unwrap();
        assert_eq!(c6.derived_subgroup().order(), 1);
    }

    #[test]
    fn quotients() {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let a3 = s3.normal_subgroups()[1].clone();
        let (q, proj) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        // projection is a homomorphism with kernel A3
        for a in 0..s3.order() {
            for b in 0..s3.order() {
                assert_eq!(proj[s3.mul(a, b)], q.mul(proj[a], proj[b]));
            }
        }
        let kernel: Vec<usize> = (0..s3.order()).filter(|&x| proj[x] == 0).collect();
        assert_eq!(kernel, a3.members());
        // quotient by the whole group is trivial
        let (t, _) = s3.quotient(&s3.full_subgroup()).unwrap();
        assert_eq!(t.order(), 1);
        // non-normal subgroup is rejected
        let t_elem = s3
            .element_id(&crate::perm::Perm::parse_cycles(3, "(1 2)").unwrap())
            .unwrap();
        let h = s3.subgroup_generated(&[t_elem]);
        assert!(s3.quotient(&h).is_err());
    }

    #[test]
    fn semidirect_c3_by_c2_is_s3() {
        let c3 = builtins::cyclic(3, CAP).unwrap();
        let c2 = builtins::cyclic(2, CAP).unwrap();
        // inversion action
        let inv = c3.generators()[0].inverse();
        let sd = semidirect_product(&c3, &c2, &[vec![inv]]).unwrap();
        assert_eq!(sd.group.order(), 6);
        // same class sizes as S3
        let sizes: Vec<usize> = sd
            .group
            .conjugacy_classes()
            .classes
            .iter()
            .map(|c| c.size())
            .collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert!(sd.normal_part.is_normal());
    }

    #[test]
    fn semidirect_trivial_action_is_direct_product() {
        let c3 = builtins::cyclic(3, CAP).unwrap();
        let c1 = Group::from_generators(1, vec![], CAP).unwrap();
        // one identity automorphism for the (identity) generator of C1
        let sd = semidirect_product(&c3, &c1, &[vec![c3.generators()[0].clone()]]).unwrap();
        assert_eq!(sd.group.order(), 3);
    }

    #[test]
    fn semidirect_rejects_non_homomorphism() {
        // C2 acting on C4 by an order-4 "automorphism" image: g -> g^2 is not
        // even an automorphism (not injective); squaring map rejected.
        let c4 = builtins::cyclic(4, CAP).unwrap();
        let c2 = builtins::cyclic(2, CAP).unwrap();
        let sq = c4.generators()[0].then(&c4.generators()[0]);
        assert!(semidirect_product(&c4, &c2, &[vec![sq]]).is_err());
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            builtins::cyclic(10, 5),
            Err(Error::OrderCap { cap: 5 })
        ));
    }

    #[test]
    fn subgroup_realization_round_trip() {
        let s4 = builtins::symmetric(4, CAP).unwrap();
        let v4 = s4.normal_subgroups()[1].clone();
        assert_eq!(v4.order(), 4);
        let std = v4.realize();
        assert_eq!(std.group.order(), 4);
        for (sid, &amb) in std.to_ambient.iter().enumerate() {
            assert_eq!(std.from_ambient[&amb], sid);
        }
    }

    #[test]
    fn center_of_dihedral() {
        let d8 = builtins::dihedral(8, CAP).unwrap();
        assert_eq!(d8.center().order(), 2);
    }
}
