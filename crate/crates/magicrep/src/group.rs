//! Permutation groups by full enumeration. Subgroups are index sets into
//! the parent table so that every object shares one element numbering.
//!
//! Products are read left to right: `mul(a, b)` applies `a` first.
//! Conjugation is `x^g = g⁻¹ x g`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 10_000;
const TABLE_LIMIT: usize = 2048;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images: images.into_iter().map(|x| x as u32).collect() })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self` followed by `o`.
    pub fn then(&self, o: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&x| o.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Parses 1-based cycle notation such as `(1,2)(3,4,5)` or `()`.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
        let mut images: Vec<usize> = (0..degree).collect();
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let mut rest = t.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("bad cycle notation '{s}'")));
            }
            let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in '{s}'")))?;
            let body = &rest[1..close];
            rest = &rest[close + 1..];
            if body.is_empty() {
                continue;
            }
            let pts: Vec<usize> = body
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad point '{x}' in '{s}'"))))
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!("point {p} outside 1..{degree}")));
                }
            }
            let mut sorted = pts.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != pts.len() {
                return Err(Error::Parse(format!("repeated point in cycle '{body}'")));
            }
            // compose this cycle after what has been read so far
            let mut cyc: Vec<usize> = (0..degree).collect();
            for k in 0..pts.len() {
                cyc[pts[k] - 1] = pts[(k + 1) % pts.len()] - 1;
            }
            images = images.iter().map(|&x| cyc[x]).collect();
        }
        Perm::from_images(images)
    }

    /// Largest point mentioned in a cycle string.
    pub fn max_point(s: &str) -> usize {
        s.split(|c: char| !c.is_ascii_digit()).filter_map(|x| x.parse::<usize>().ok()).max().unwrap_or(0)
    }

    pub fn to_cycles(&self) -> String {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for i in 0..n {
            if seen[i] || self.images[i] as usize == i {
                continue;
            }
            let mut cyc = vec![i + 1];
            seen[i] = true;
            let mut j = self.images[i] as usize;
            while j != i {
                seen[j] = true;
                cyc.push(j + 1);
                j = self.images[j] as usize;
            }
            out.push('(');
            out.push_str(&cyc.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// A finite permutation group with every element enumerated.
pub struct GroupTable {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    exponent: usize,
    gens: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupTable(order {}, degree {})", self.order(), self.degree)
    }
}

pub fn generate_group(gens: &[Perm]) -> Result<Arc<GroupTable>> {
    GroupTable::generate_with_cap(gens, DEFAULT_CAP)
}

impl GroupTable {
    pub fn generate_with_cap(gens: &[Perm], cap: usize) -> Result<Arc<GroupTable>> {
        if gens.is_empty() {
            return Err(Error::Validation("no generators".into()));
        }
        let degree = gens[0].degree();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = elements[x].then(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let table = if n <= TABLE_LIMIT {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&elements[a].then(&elements[b])] as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        let inv: Vec<usize> = elements.iter().map(|p| index[&p.inverse()]).collect();
        let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).collect();
        let mut gt = GroupTable {
            degree,
            elements,
            index,
            table,
            inv,
            orders: vec![],
            exponent: 1,
            gens: gen_idx,
            classes: vec![],
            class_of: vec![],
        };
        gt.orders = (0..n).map(|x| gt.order_of(x)).collect();
        gt.exponent = gt.orders.iter().fold(1, |a, &b| num_integer::lcm(a, b));
        let all: Vec<usize> = (0..n).collect();
        let (classes, class_of) = conjugacy_classes(&gt, &all, &gt.gens.clone());
        gt.classes = classes;
        gt.class_of = class_of;
        Ok(Arc::new(gt))
    }

    /// Parses generators in 1-based cycle notation; the degree is the
    /// largest point mentioned.
    pub fn from_cycle_strings(gens: &[&str]) -> Result<Arc<GroupTable>> {
        let degree = gens.iter().map(|s| Perm::max_point(s)).max().unwrap_or(0).max(1);
        let perms: Vec<Perm> = gens.iter().map(|s| Perm::parse_cycles(s, degree)).collect::<Result<_>>()?;
        generate_group(&perms)
    }

    fn order_of(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn identity(&self) -> usize {
        0
    }
    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    pub fn exponent(&self) -> usize {
        self.exponent
    }
    pub fn element_order(&self, x: usize) -> usize {
        self.orders[x]
    }
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// x^g = g⁻¹ x g.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv[g], x), g)
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let o = self.orders[x] as i64;
        let k = k.rem_euclid(o);
        let mut y = 0;
        for _ in 0..k {
            y = self.mul(y, x);
        }
        y
    }

    /// The whole group as a subgroup handle.
    pub fn full(self: &Arc<Self>) -> Arc<Subgroup> {
        Subgroup::generated(self, &self.gens.clone())
    }
}

fn conjugacy_classes(g: &GroupTable, elems: &[usize], gens: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut class_of = vec![usize::MAX; g.order()];
    let mut classes = Vec::new();
    for &x in elems {
        if class_of[x] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        let mut cls = vec![x];
        class_of[x] = cid;
        let mut k = 0;
        while k < cls.len() {
            let y = cls[k];
            for &s in gens {
                let z = g.conj(y, s);
                if class_of[z] == usize::MAX {
                    class_of[z] = cid;
                    cls.push(z);
                }
            }
            k += 1;
        }
        cls.sort();
        classes.push(cls);
    }
    (classes, class_of)
}

fn closure(g: &GroupTable, gens: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut elems = vec![0usize];
    let mut k = 0;
    while k < elems.len() {
        let x = elems[k];
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                elems.push(y);
            }
        }
        k += 1;
    }
    elems.sort();
    elems
}

/// A subgroup of a `GroupTable`, with its own conjugacy classes.
pub struct Subgroup {
    g: Arc<GroupTable>,
    elems: Vec<usize>,
    member: Vec<bool>,
    gens: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} in {:?})", self.order(), self.g)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.g, &o.g) && self.elems == o.elems
    }
}

/// Subgroup generated by the given element indices.
pub fn subgroup(g: &Arc<GroupTable>, gens: &[usize]) -> Result<Arc<Subgroup>> {
    for &x in gens {
        if x >= g.order() {
            return Err(Error::Index(x));
        }
    }
    Ok(Subgroup::generated(g, gens))
}

impl Subgroup {
    pub fn generated(g: &Arc<GroupTable>, gens: &[usize]) -> Arc<Subgroup> {
        let elems = closure(g, gens);
        Self::build(g, elems, gens.to_vec())
    }

    /// Subgroup from a closed element set (closure is checked).
    pub fn from_elements(g: &Arc<GroupTable>, elems: &[usize]) -> Result<Arc<Subgroup>> {
        let mut member = vec![false; g.order()];
        for &x in elems {
            member[x] = true;
        }
        for &a in elems {
            for &b in elems {
                if !member[g.mul(a, b)] {
                    return Err(Error::Validation("element set not closed".into()));
                }
            }
        }
        // small generating set, greedily
        let mut gens = Vec::new();
        let mut have = vec![0usize];
        let mut sorted = elems.to_vec();
        sorted.sort();
        for &x in &sorted {
            if have.binary_search(&x).is_err() {
                gens.push(x);
                have = closure(g, &gens);
            }
        }
        Ok(Self::build(g, have, gens))
    }

    fn build(g: &Arc<GroupTable>, elems: Vec<usize>, gens: Vec<usize>) -> Arc<Subgroup> {
        let mut member = vec![false; g.order()];
        for &x in &elems {
            member[x] = true;
        }
        let (classes, class_of) = conjugacy_classes(g, &elems, &gens);
        Arc::new(Subgroup { g: g.clone(), elems, member, gens, classes, class_of })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.g
    }
    pub fn elements(&self) -> &[usize] {
        &self.elems
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
    pub fn class_reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }
    pub fn exponent(&self) -> usize {
        self.elems.iter().fold(1, |a, &x| num_integer::lcm(a, self.g.element_order(x)))
    }

    pub fn is_subgroup_of(&self, o: &Subgroup) -> bool {
        self.elems.iter().all(|&x| o.contains(x))
    }

    /// Normality inside an overgroup (which must contain `self`).
    pub fn is_normal_in(&self, over: &Subgroup) -> bool {
        self.is_subgroup_of(over)
            && over.gens.iter().all(|&g| self.gens.iter().all(|&x| self.contains(self.g.conj(x, g))))
    }

    pub fn is_normalized_by(&self, g: usize) -> bool {
        self.gens.iter().all(|&x| self.contains(self.g.conj(x, g)))
    }

    /// Representatives of the right cosets `self·x` in `over`, smallest index first.
    pub fn right_transversal(&self, over: &Subgroup) -> Vec<usize> {
        self.transversal(over, true).0
    }

    /// Representatives of the left cosets `x·self` in `over`, smallest index first.
    pub fn left_transversal(&self, over: &Subgroup) -> Vec<usize> {
        self.transversal(over, false).0
    }

    /// Right-coset labelling: for each element of the parent table, the
    /// index of its coset `self·x` among `right_transversal` (usize::MAX
    /// outside `over`).
    pub fn right_coset_map(&self, over: &Subgroup) -> Vec<usize> {
        self.transversal(over, true).1
    }

    fn transversal(&self, over: &Subgroup, right: bool) -> (Vec<usize>, Vec<usize>) {
        let mut label = vec![usize::MAX; self.g.order()];
        let mut reps = Vec::new();
        for &x in &over.elems {
            if label[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &h in &self.elems {
                let y = if right { self.g.mul(h, x) } else { self.g.mul(x, h) };
                label[y] = id;
            }
        }
        (reps, label)
    }

    pub fn intersection(&self, o: &Subgroup) -> Arc<Subgroup> {
        let elems: Vec<usize> = self.elems.iter().copied().filter(|&x| o.contains(x)).collect();
        Subgroup::from_elements(&self.g, &elems).expect("intersection is closed")
    }

    pub fn join(&self, o: &Subgroup) -> Arc<Subgroup> {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&o.gens);
        Subgroup::generated(&self.g, &gens)
    }

    /// The conjugate subgroup self^g.
    pub fn conjugate(&self, g: usize) -> Arc<Subgroup> {
        let gens: Vec<usize> = self.gens.iter().map(|&x| self.g.conj(x, g)).collect();
        Subgroup::generated(&self.g, &gens)
    }

    /// C_over(self).
    pub fn centralizer_in(&self, over: &Subgroup) -> Arc<Subgroup> {
        let elems: Vec<usize> = over
            .elems
            .iter()
            .copied()
            .filter(|&g| self.gens.iter().all(|&x| self.g.mul(x, g) == self.g.mul(g, x)))
            .collect();
        Subgroup::from_elements(&self.g, &elems).expect("centralizer is closed")
    }

    /// N_over(self).
    pub fn normalizer_in(&self, over: &Subgroup) -> Arc<Subgroup> {
        let elems: Vec<usize> = over.elems.iter().copied().filter(|&g| self.is_normalized_by(g)).collect();
        Subgroup::from_elements(&self.g, &elems).expect("normalizer is closed")
    }

    /// The set product self·o as a sorted element list.
    pub fn product_set(&self, o: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.g.order()];
        for &a in &self.elems {
            for &b in &o.elems {
                seen[self.g.mul(a, b)] = true;
            }
        }
        (0..self.g.order()).filter(|&x| seen[x]).collect()
    }

    pub fn is_p_group(&self, p: usize) -> bool {
        let mut n = self.order();
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    /// A Sylow p-subgroup (deterministic greedy construction).
    pub fn sylow(&self, p: usize) -> Arc<Subgroup> {
        let mut target = 1;
        let mut n = self.order();
        while n % p == 0 {
            n /= p;
            target *= p;
        }
        let mut cur = Subgroup::generated(&self.g, &[]);
        while cur.order() < target {
            let norm = cur.normalizer_in(self);
            // an element of p-power order normalising cur and outside it
            let pick = norm.elems.iter().copied().find(|&x| {
                !cur.contains(x) && {
                    let mut o = self.g.element_order(x);
                    while o % p == 0 {
                        o /= p;
                    }
                    o == 1
                } && {
                    let mut gens = cur.gens.clone();
                    gens.push(x);
                    Subgroup::generated(&self.g, &gens).is_p_group(p)
                }
            });
            match pick {
                Some(x) => {
                    let mut gens = cur.gens.clone();
                    gens.push(x);
                    cur = Subgroup::generated(&self.g, &gens);
                }
                None => break,
            }
        }
        cur
    }

    /// All subgroups of a p-group (or any small group), by closure of
    /// generated subgroups; deterministic order by (order, elements).
    pub fn all_subgroups(&self) -> Vec<Arc<Subgroup>> {
        let mut found: Vec<Vec<usize>> = vec![vec![0]];
        let mut k = 0;
        while k < found.len() {
            let cur = found[k].clone();
            let gens = Subgroup::from_elements(&self.g, &cur).unwrap().gens.clone();
            for &x in &self.elems {
                if cur.binary_search(&x).is_ok() {
                    continue;
                }
                let mut gg = gens.clone();
                gg.push(x);
                let e = closure(&self.g, &gg);
                if !found.contains(&e) {
                    found.push(e);
                }
            }
            k += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        found.into_iter().map(|e| Subgroup::from_elements(&self.g, &e).unwrap()).collect()
    }
}

/// (C_G(P), N_G(P)).
pub fn centralizer_normalizer(g: &Subgroup, p: &Subgroup) -> (Arc<Subgroup>, Arc<Subgroup>) {
    (p.centralizer_in(g), p.normalizer_in(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<GroupTable> {
        GroupTable::from_cycle_strings(&["(1,2)", "(1,2,3)"]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let p = Perm::parse_cycles("(1,2)(3,4,5)", 5).unwrap();
        assert_eq!(p.to_cycles(), "(1,2)(3,4,5)");
        assert_eq!(p.images(), vec![1, 0, 3, 4, 2]);
        assert!(Perm::parse_cycles("(1,2", 3).is_err());
        assert!(Perm::parse_cycles("(1,1)", 3).is_err());
        assert!(Perm::parse_cycles("()", 3).unwrap().is_identity());
    }

    #[test]
    fn trivial_group() {
        let g = generate_group(&[Perm::identity(3)]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.classes().len(), 1);
    }

    #[test]
    fn s3_table() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.classes().len(), 3);
        assert_eq!(g.classes()[0], vec![0]);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn degree_mismatch_and_cap() {
        let a = Perm::identity(3);
        let b = Perm::identity(4);
        assert!(matches!(generate_group(&[a, b]), Err(Error::DegreeMismatch { .. })));
        let gens = [Perm::parse_cycles("(1,2)", 8).unwrap(), Perm::parse_cycles("(1,2,3,4,5,6,7,8)", 8).unwrap()];
        assert!(matches!(GroupTable::generate_with_cap(&gens, 1000), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn subgroups_of_s3() {
        let g = s3();
        let full = g.full();
        let c3 = g.index_of(&Perm::parse_cycles("(1,2,3)", 3).unwrap()).unwrap();
        let t = g.index_of(&Perm::parse_cycles("(1,2)", 3).unwrap()).unwrap();
        let a3 = subgroup(&g, &[c3]).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(a3.is_normal_in(&full));
        let c2 = subgroup(&g, &[t]).unwrap();
        assert_eq!(c2.order(), 2);
        assert!(!c2.is_normal_in(&full));
        let (c, n) = centralizer_normalizer(&full, &c2);
        assert_eq!(n.order(), 2);
        assert_eq!(c.order(), 2);
        assert_eq!(a3.right_transversal(&full).len(), 2);
        assert_eq!(full.all_subgroups().len(), 6);
        assert_eq!(full.sylow(3).order(), 3);
        assert_eq!(full.sylow(2).order(), 2);
    }
}
