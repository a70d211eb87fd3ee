//! Finite permutation groups with materialized elements, and the two
//! classical forms of Gaßmann's criterion for arithmetic equivalence.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::number_field::SplittingType;

pub type Perm = Vec<u32>;

pub const DEFAULT_GROUP_CAP: usize = 100_000;

fn check_perm(p: &[u32], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::InvalidPermutation(format!("{p:?} has length {}, expected {degree}", p.len())));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        let x = x as usize;
        if x >= degree || seen[x] {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a bijection of 0..{degree}")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// `(a * b)(x) = a(b(x))`.
pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn invert(a: &[u32]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

pub fn identity(degree: usize) -> Perm {
    (0..degree as u32).collect()
}

/// A permutation group with all elements listed in sorted order, together
/// with its multiplication structure and conjugacy classes.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl PermGroup {
    pub fn generate(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::generate_with_cap(degree, generators, DEFAULT_GROUP_CAP)
    }

    /// Breadth-first closure of the generators.
    pub fn generate_with_cap(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        for g in &generators {
            check_perm(g, degree)?;
        }
        let id = identity(degree);
        let mut seen: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = compose(g, &x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge(cap));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Perm> = seen.into_iter().collect();
        let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut group = PermGroup {
            degree,
            generators,
            elements,
            index,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    /// Conjugacy classes as orbits of conjugation by the generators.
    fn compute_classes(&mut self) {
        let n = self.elements.len();
        let gens: Vec<(Perm, Perm)> = self.generators.iter().map(|g| (g.clone(), invert(g))).collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![start];
            class_of[start] = c;
            let mut i = 0;
            while i < members.len() {
                let x = &self.elements[members[i]];
                for (g, gi) in &gens {
                    let y = self.index[&compose(&compose(g, x), gi)];
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&invert(&self.elements[a])]
    }

    pub fn identity_index(&self) -> usize {
        self.index[&identity(self.degree)]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    /// The subgroup generated by the given permutations.
    pub fn subgroup(&self, generators: &[Perm]) -> Result<Subgroup> {
        let mut gens = Vec::new();
        for g in generators {
            check_perm(g, self.degree)?;
            gens.push(
                self.index_of(g)
                    .ok_or_else(|| Error::NotSubgroup(format!("{g:?} is not in the group")))?,
            );
        }
        let id = self.identity_index();
        let mut members = BTreeSet::from([id]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(g, x);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(Subgroup { members })
    }

    /// Checks that an explicit element set is a subgroup.
    pub fn subgroup_from_elements(&self, elems: &[Perm]) -> Result<Subgroup> {
        let mut members = BTreeSet::new();
        for e in elems {
            members.insert(
                self.index_of(e)
                    .ok_or_else(|| Error::NotSubgroup(format!("{e:?} is not in the group")))?,
            );
        }
        let h = Subgroup { members };
        self.check_subgroup(&h)?;
        Ok(h)
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<()> {
        if h.members.iter().any(|&x| x >= self.order()) {
            return Err(Error::NotSubgroup("element index out of range".into()));
        }
        if !h.members.contains(&self.identity_index()) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for &a in &h.members {
            for &b in &h.members {
                if !h.members.contains(&self.mul(a, b)) {
                    return Err(Error::NotSubgroup("not closed under composition".into()));
                }
            }
        }
        Ok(())
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        Subgroup { members: h.members.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect() }
    }

    /// Coset label of every element for the left cosets `xH`, plus one
    /// representative per coset.
    fn left_cosets(&self, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
        let mut label = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if label[x] != usize::MAX {
                continue;
            }
            for &k in &h.members {
                label[self.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
        (label, reps)
    }

    /// Number of cosets `xH` fixed by `g`.
    fn fixed_cosets(&self, g: usize, label: &[usize], reps: &[usize]) -> usize {
        reps.iter()
            .enumerate()
            .filter(|&(c, &x)| label[self.mul(g, x)] == c)
            .count()
    }
}

/// A subgroup, stored as indices into the parent's element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: BTreeSet<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GassmannReport {
    pub equivalent: bool,
    /// First conjugacy class meeting the subgroups in different numbers.
    pub witness_class: Option<usize>,
    pub conjugate: bool,
    /// `|C cap H1|` and `|C cap H2|` per class.
    pub class_counts: Vec<(usize, usize)>,
}

/// `|C cap H1| = |C cap H2|` for every class `C`, plus an exhaustive
/// conjugacy test.
pub fn gassmann_equivalent(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<GassmannReport> {
    g.check_subgroup(h1)?;
    g.check_subgroup(h2)?;
    let mut class_counts = vec![(0, 0); g.classes().len()];
    for &x in &h1.members {
        class_counts[g.class_of(x)].0 += 1;
    }
    for &x in &h2.members {
        class_counts[g.class_of(x)].1 += 1;
    }
    let witness_class = class_counts.iter().position(|(a, b)| a != b);
    let conjugate = h1.order() == h2.order() && (0..g.order()).any(|x| g.conjugate(h1, x) == *h2);
    Ok(GassmannReport { equivalent: witness_class.is_none(), witness_class, conjugate, class_counts })
}

/// Cycle type of `g` on `G/H`, read as the splitting type of an unramified
/// prime with Frobenius `g`.
pub fn splitting_from_frobenius(grp: &PermGroup, h: &Subgroup, g: usize) -> Result<SplittingType> {
    grp.check_subgroup(h)?;
    if g >= grp.order() {
        return Err(Error::NotSubgroup(format!("element {g} is not in the group")));
    }
    let (label, reps) = grp.left_cosets(h);
    let mut seen = vec![false; reps.len()];
    let mut pairs = Vec::new();
    for start in 0..reps.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            len += 1;
            c = label[grp.mul(g, reps[c])];
        }
        pairs.push((1, len));
    }
    Ok(SplittingType::new(pairs))
}

/// Whether every `g` fixes equally many cosets of `H1` and of `H2`.
pub fn permutation_character_equal(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool> {
    g.check_subgroup(h1)?;
    g.check_subgroup(h2)?;
    if h1.order() != h2.order() {
        return Err(Error::IndexMismatch(g.order() / h1.order(), g.order() / h2.order()));
    }
    let (l1, r1) = g.left_cosets(h1);
    let (l2, r2) = g.left_cosets(h2);
    // the permutation character is a class function: one element per class
    let equal = g
        .classes()
        .iter()
        .all(|c| g.fixed_cosets(c[0], &l1, &r1) == g.fixed_cosets(c[0], &l2, &r2));
    debug_assert_eq!(equal, gassmann_equivalent(g, h1, h2).map(|r| r.equivalent).unwrap_or(equal));
    Ok(equal)
}

/// Fixed-coset counts for every element (not only class representatives).
pub fn fixed_point_counts(g: &PermGroup, h: &Subgroup) -> Vec<usize> {
    let (label, reps) = g.left_cosets(h);
    (0..g.order()).map(|x| g.fixed_cosets(x, &label, &reps)).collect()
}
