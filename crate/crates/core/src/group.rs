//! Concrete finite groups with a dense multiplication table, plus the
//! subgroup, coset and double-coset machinery everything else builds on.
//!
//! Elements are identifiers `0..order` with `0` the identity. Groups are
//! immutable after construction and cheap to clone (the table sits behind
//! an `Arc`), so all operations here are pure and thread-safe.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Element identifier inside a [`FiniteGroup`]; `0` is always the identity.
pub type ElementId = u16;

/// Hard cap on group order. Galois closures at desk scale stay far below
/// this; the cap guards the dense-table memory footprint.
pub const MAX_GROUP_ORDER: usize = 10_000;

const ASSOC_EXHAUSTIVE_LIMIT: usize = 64;
const ASSOC_SAMPLES: usize = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator #{index} is not a bijection of 0..{degree}")]
    NonBijectiveGenerator { index: usize, degree: usize },
    #[error("generated group exceeds the order cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("element {0} is not an element of the group")]
    UnknownElement(usize),
    #[error("subgroup belongs to a different parent group")]
    SubgroupParentMismatch,
    #[error("not a valid multiplication table: {0}")]
    InvalidTable(String),
    #[error("cannot resolve word {word:?}: {reason}")]
    WordUnresolved { word: String, reason: String },
}

struct GroupInner {
    order: usize,
    /// Row-major dense Cayley table: `table[a * order + b] = a * b`.
    table: Vec<ElementId>,
    inverse: Vec<ElementId>,
    labels: Option<Vec<String>>,
    /// Declared generators (name, element), in declaration order.
    generators: Vec<(String, ElementId)>,
}

/// A finite group with a dense multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order = {})", self.order())
    }
}

impl FiniteGroup {
    /// Builds a group from an explicit multiplication table. Row/column 0
    /// must be the identity; closure, inverses and (for small orders
    /// exhaustively, otherwise on a deterministic sample) associativity
    /// are verified.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::OrderCapExceeded {
                cap: MAX_GROUP_ORDER,
            });
        }
        if let Some(ref ls) = labels {
            if ls.len() != n {
                return Err(GroupError::InvalidTable(format!(
                    "{} labels for {} elements",
                    ls.len(),
                    n
                )));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(GroupError::InvalidTable("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {v} out of range 0..{n}"
                    )));
                }
                flat.push(v as ElementId);
            }
        }
        for a in 0..n {
            if flat[a * n] as usize != a || flat[a] as usize != a {
                return Err(GroupError::InvalidTable(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        // Each row and column must be a permutation (cancellation laws).
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let v = flat[a * n + b] as usize;
                if seen[v] {
                    return Err(GroupError::InvalidTable(format!("row {a} repeats {v}")));
                }
                seen[v] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let v = flat[b * n + a] as usize;
                if seen[v] {
                    return Err(GroupError::InvalidTable(format!("column {a} repeats {v}")));
                }
                seen[v] = true;
            }
        }
        let mut inverse = vec![0 as ElementId; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| flat[a * n + b] == 0)
                .expect("row is a permutation, so it hits the identity");
            if flat[b * n + a] != 0 {
                return Err(GroupError::InvalidTable(format!(
                    "right inverse of {a} is not a left inverse"
                )));
            }
            inverse[a] = b as ElementId;
        }
        let check = |a: usize, b: usize, c: usize| -> bool {
            let ab = flat[a * n + b] as usize;
            let bc = flat[b * n + c] as usize;
            flat[ab * n + c] == flat[a * n + bc]
        };
        if n <= ASSOC_EXHAUSTIVE_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(GroupError::InvalidTable(format!(
                                "associativity fails on ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // splitmix64 stream; deterministic sample of triples.
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state = state.wrapping_add(0x9e3779b97f4a7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
                z ^ (z >> 31)
            };
            for _ in 0..ASSOC_SAMPLES {
                let a = (next() % n as u64) as usize;
                let b = (next() % n as u64) as usize;
                let c = (next() % n as u64) as usize;
                if !check(a, b, c) {
                    return Err(GroupError::InvalidTable(format!(
                        "associativity fails on ({a}, {b}, {c})"
                    )));
                }
            }
        }
        Ok(FiniteGroup {
            inner: Arc::new(GroupInner {
                order: n,
                table: flat,
                inverse,
                labels,
                generators: Vec::new(),
            }),
        })
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub const fn identity(&self) -> ElementId {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        0..self.inner.order as ElementId
    }

    #[inline]
    pub fn product(&self, a: ElementId, b: ElementId) -> ElementId {
        self.inner.table[a as usize * self.inner.order + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: ElementId) -> ElementId {
        self.inner.inverse[a as usize]
    }

    /// `a^k` for any signed exponent.
    pub fn power(&self, a: ElementId, k: i64) -> ElementId {
        let base = if k < 0 { self.inverse(a) } else { a };
        let mut e = k.unsigned_abs();
        // Exponents are reduced modulo the element order, which is at most
        // the group order, so the loop below stays short.
        let ord = self.element_order(base) as u64;
        e %= ord;
        let mut acc = self.identity();
        for _ in 0..e {
            acc = self.product(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: ElementId) -> usize {
        let mut cur = a;
        let mut k = 1;
        while cur != 0 {
            cur = self.product(cur, a);
            k += 1;
        }
        k
    }

    /// True iff `a` commutes with every element.
    pub fn is_central(&self, a: ElementId) -> Result<bool, GroupError> {
        self.check_element(a)?;
        Ok(self
            .elements()
            .all(|g| self.product(a, g) == self.product(g, a)))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.inner.order as ElementId;
        (0..n).all(|a| (0..a).all(|b| self.product(a, b) == self.product(b, a)))
    }

    pub fn label(&self, a: ElementId) -> String {
        match &self.inner.labels {
            Some(ls) => ls[a as usize].clone(),
            None => a.to_string(),
        }
    }

    pub fn has_labels(&self) -> bool {
        self.inner.labels.is_some()
    }

    /// Declared generators, in declaration order.
    pub fn generators(&self) -> &[(String, ElementId)] {
        &self.inner.generators
    }

    /// Identity of representation: two handles are the same group only if
    /// they share storage.
    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn check_element(&self, a: ElementId) -> Result<(), GroupError> {
        if (a as usize) < self.inner.order {
            Ok(())
        } else {
            Err(GroupError::UnknownElement(a as usize))
        }
    }

    /// Exhaustive associativity check over all triples. Quadratic groups of
    /// order up to ~10^3 finish quickly; intended for tests.
    pub fn verify_associativity_exhaustive(&self) -> bool {
        let n = self.inner.order;
        for a in 0..n as ElementId {
            for b in 0..n as ElementId {
                let ab = self.product(a, b);
                for c in 0..n as ElementId {
                    if self.product(ab, c) != self.product(a, self.product(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Resolves a word over the declared generator names, e.g. `"xy^3"` or
    /// `"y^-1 x"`. `"1"` denotes the identity; whitespace and `*` are
    /// ignored. Names are matched longest-first so multi-character
    /// generator names work.
    pub fn evaluate_word(&self, word: &str) -> Result<ElementId, GroupError> {
        let fail = |reason: &str| GroupError::WordUnresolved {
            word: word.to_string(),
            reason: reason.to_string(),
        };
        let chars: Vec<char> = word.chars().collect();
        let mut pos = 0usize;
        let mut acc = self.identity();
        let mut any = false;
        while pos < chars.len() {
            let c = chars[pos];
            if c.is_whitespace() || c == '*' {
                pos += 1;
                continue;
            }
            if c == '1' {
                pos += 1;
                any = true;
                continue;
            }
            // longest generator-name match at this position
            let rest: String = chars[pos..].iter().collect();
            let mut best: Option<(usize, ElementId)> = None;
            for (name, elem) in &self.inner.generators {
                if rest.starts_with(name.as_str())
                    && best.map_or(true, |(len, _)| name.len() > len)
                {
                    best = Some((name.len(), *elem));
                }
            }
            let (len, base) = best.ok_or_else(|| {
                if self.inner.generators.is_empty() {
                    fail("group has no named generators")
                } else {
                    fail(&format!("no generator name matches at {:?}", rest))
                }
            })?;
            pos += len;
            let mut exp = 1i64;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let mut sign = 1i64;
                if pos < chars.len() && chars[pos] == '-' {
                    sign = -1;
                    pos += 1;
                }
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(fail("'^' must be followed by an integer"));
                }
                let digits: String = chars[start..pos].iter().collect();
                exp = sign
                    * digits
                        .parse::<i64>()
                        .map_err(|_| fail("exponent out of range"))?;
            }
            acc = self.product(acc, self.power(base, exp));
            any = true;
        }
        if !any {
            return Err(fail("empty word"));
        }
        Ok(acc)
    }
}

/// Composition of permutations in one-line notation: `(f * g)(i) = f(g(i))`,
/// i.e. `g` is applied first.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&i| f[i]).collect()
}

/// Converts disjoint-cycle notation into one-line notation on `0..degree`.
/// Points absent from every cycle are fixed.
pub fn permutation_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..degree).collect();
    for cycle in cycles {
        for i in 0..cycle.len() {
            perm[cycle[i]] = cycle[(i + 1) % cycle.len()];
        }
    }
    perm
}

fn is_bijection(perm: &[usize], degree: usize) -> bool {
    if perm.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &v in perm {
        if v >= degree || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Word over generator indices; ordered by length, then number of
/// generator runs, then lexicographically. Shortest-and-tidiest wins, so
/// labels come out as `"y^3"` rather than `"xyx"`.
#[derive(Clone, PartialEq, Eq)]
struct GenWord(Vec<u8>);

impl GenWord {
    fn runs(&self) -> usize {
        let mut r = 0;
        let mut prev = None;
        for &g in &self.0 {
            if prev != Some(g) {
                r += 1;
                prev = Some(g);
            }
        }
        r
    }

    fn better_than(&self, other: &GenWord) -> bool {
        (self.0.len(), self.runs(), &self.0) < (other.0.len(), other.runs(), &other.0)
    }

    fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == g {
                j += 1;
            }
            out.push_str(&names[g as usize]);
            if j - i > 1 {
                out.push_str(&format!("^{}", j - i));
            }
            i = j;
        }
        out
    }
}

/// Closure of a set of permutations under composition, with breadth-first
/// identifier assignment (identity is 0) and shortest-word labels.
pub fn group_from_generators(
    degree: usize,
    generators: &[(&str, Vec<usize>)],
) -> Result<FiniteGroup, GroupError> {
    for (index, (_, perm)) in generators.iter().enumerate() {
        if !is_bijection(perm, degree) {
            return Err(GroupError::NonBijectiveGenerator { index, degree });
        }
    }
    let names: Vec<String> = generators.iter().map(|(n, _)| n.to_string()).collect();
    let gen_perms: Vec<&Vec<usize>> = generators.iter().map(|(_, p)| p).collect();
    let ngens = gen_perms.len();

    let identity: Vec<usize> = (0..degree).collect();
    let mut elems: Vec<Vec<usize>> = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(identity, 0);
    // gen_mult[e][j] = e * g_j, filled in BFS order
    let mut gen_mult: Vec<Vec<ElementId>> = Vec::new();
    let mut head = 0usize;
    while head < elems.len() {
        let mut row = Vec::with_capacity(ngens);
        for j in 0..ngens {
            let prod = compose(&elems[head], gen_perms[j]);
            let id = match index.get(&prod) {
                Some(&id) => id,
                None => {
                    let id = elems.len();
                    if id >= MAX_GROUP_ORDER {
                        return Err(GroupError::OrderCapExceeded {
                            cap: MAX_GROUP_ORDER,
                        });
                    }
                    index.insert(prod.clone(), id);
                    elems.push(prod);
                    id
                }
            };
            row.push(id as ElementId);
        }
        gen_mult.push(row);
        head += 1;
    }
    let n = elems.len();

    // Fill the table column by column: every b != 0 was first produced as
    // parent * g_j, so a*b = (a*parent)*g_j costs one lookup.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    for e in 0..n {
        for j in 0..ngens {
            let f = gen_mult[e][j] as usize;
            if f != 0 && parent[f].is_none() && f > e {
                parent[f] = Some((e, j));
            }
        }
    }
    let mut table = vec![0 as ElementId; n * n];
    for a in 0..n {
        table[a * n] = a as ElementId;
    }
    // BFS order guarantees parents are filled before children.
    for b in 1..n {
        let (pb, j) = parent[b].expect("non-identity element has a BFS parent");
        for a in 0..n {
            let ap = table[a * n + pb] as usize;
            table[a * n + b] = gen_mult[ap][j];
        }
    }
    let mut inverse = vec![0 as ElementId; n];
    for a in 0..n {
        let b = (0..n)
            .find(|&b| table[a * n + b] == 0)
            .expect("finite group rows are permutations");
        inverse[a] = b as ElementId;
    }

    // Shortest-word labels via Dijkstra on the Cayley graph.
    let mut best: Vec<Option<GenWord>> = vec![None; n];
    best[0] = Some(GenWord(Vec::new()));
    let mut frontier = vec![0usize];
    while let Some(e) = frontier.pop() {
        let word = best[e].clone().expect("frontier nodes have words");
        for j in 0..ngens {
            let f = gen_mult[e][j] as usize;
            let mut cand = word.clone();
            cand.0.push(j as u8);
            let improved = match &best[f] {
                None => true,
                Some(cur) => cand.better_than(cur),
            };
            if improved {
                best[f] = Some(cand);
                frontier.push(f);
            }
        }
    }
    let labels: Vec<String> = best
        .into_iter()
        .map(|w| w.expect("generators reach every element").render(&names))
        .collect();

    let gen_ids: Vec<(String, ElementId)> = (0..ngens)
        .map(|j| (names[j].clone(), gen_mult[0][j]))
        .collect();

    Ok(FiniteGroup {
        inner: Arc::new(GroupInner {
            order: n,
            table,
            inverse,
            labels: Some(labels),
            generators: gen_ids,
        }),
    })
}

/// Cyclic group of order `n` as the rotation group of an `n`-gon.
pub fn cyclic_group(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    if n == 1 {
        return group_from_generators(1, &[]).expect("trivial group");
    }
    let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    group_from_generators(n, &[("r", r)]).expect("cyclic generator is a bijection")
}

/// Dihedral group of order `2m` (symmetries of the `m`-gon), `m >= 2`.
pub fn dihedral_group(m: usize) -> FiniteGroup {
    assert!(m >= 2);
    let r: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    let s: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
    group_from_generators(m, &[("s", s), ("r", r)]).expect("dihedral generators")
}

/// Symmetric group on `n` letters, `2 <= n <= 7` (order 5040 cap).
pub fn symmetric_group(n: usize) -> FiniteGroup {
    assert!((2..=7).contains(&n));
    let t = permutation_from_cycles(n, &[vec![0, 1]]);
    let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    group_from_generators(n, &[("t", t), ("c", c)]).expect("symmetric generators")
}

/// Direct product; element `(a, b)` gets identifier `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    assert!(n <= MAX_GROUP_ORDER);
    let mut table = vec![vec![0usize; n]; n];
    for x in 0..n {
        let (xa, xb) = ((x / nb) as ElementId, (x % nb) as ElementId);
        for y in 0..n {
            let (ya, yb) = ((y / nb) as ElementId, (y % nb) as ElementId);
            table[x][y] =
                a.product(xa, ya) as usize * nb + b.product(xb, yb) as usize;
        }
    }
    let labels: Vec<String> = (0..n)
        .map(|x| {
            format!(
                "({},{})",
                a.label((x / nb) as ElementId),
                b.label((x % nb) as ElementId)
            )
        })
        .collect();
    FiniteGroup::from_table(table, Some(labels)).expect("product of valid tables")
}

/// A subgroup, stored as the sorted set of its member identifiers.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<ElementId>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_group(&other.parent) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Smallest subgroup containing `seeds`. The empty seed set gives the
    /// trivial subgroup.
    pub fn generated(parent: &FiniteGroup, seeds: &[ElementId]) -> Result<Self, GroupError> {
        for &s in seeds {
            parent.check_element(s)?;
        }
        let mut in_set = vec![false; parent.order()];
        in_set[0] = true;
        let mut members: Vec<ElementId> = vec![0];
        let mut head = 0;
        // Close under products with the seeds; in a finite group that
        // already yields inverses.
        while head < members.len() {
            let m = members[head];
            head += 1;
            for &s in seeds {
                let p = parent.product(m, s);
                if !in_set[p as usize] {
                    in_set[p as usize] = true;
                    members.push(p);
                }
            }
        }
        // The sweep above only walks right-multiplications from the
        // identity; iterate to a fixed point for full closure.
        loop {
            let mut added = false;
            let snapshot = members.clone();
            for &x in &snapshot {
                for &y in &snapshot {
                    let p = parent.product(x, y);
                    if !in_set[p as usize] {
                        in_set[p as usize] = true;
                        members.push(p);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        members.sort_unstable();
        Ok(Subgroup {
            parent: parent.clone(),
            members,
        })
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: vec![0],
        }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: parent.elements().collect(),
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: ElementId) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent.same_group(&other.parent)
            && self.members.iter().all(|&m| other.contains(m))
    }

    /// The conjugate subgroup `x S x^-1`.
    pub fn conjugate_by(&self, x: ElementId) -> Subgroup {
        let g = &self.parent;
        let xi = g.inverse(x);
        let mut members: Vec<ElementId> = self
            .members
            .iter()
            .map(|&s| g.product(g.product(x, s), xi))
            .collect();
        members.sort_unstable();
        Subgroup {
            parent: g.clone(),
            members,
        }
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        debug_assert!(self.parent.same_group(&other.parent));
        let members: Vec<ElementId> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Subgroup {
            parent: self.parent.clone(),
            members,
        }
    }

    /// True iff `x S x^-1 = S` for every `x` in the parent group.
    pub fn is_normal(&self) -> bool {
        self.parent
            .elements()
            .all(|x| self.conjugate_by(x).members == self.members)
    }

    /// True iff `other` normalises `self` elementwise (requires
    /// `self ⊆ other` to mean "normal in `other`").
    pub fn is_normal_in(&self, other: &Subgroup) -> bool {
        other
            .members
            .iter()
            .all(|&x| self.conjugate_by(x).members == self.members)
    }

    /// True iff the quotient `other / self` is cyclic; requires `self`
    /// normal in `other` so the quotient is a group.
    pub fn has_cyclic_quotient_in(&self, other: &Subgroup) -> bool {
        let g = &self.parent;
        let index = other.order() / self.order();
        if index == 1 {
            return true;
        }
        // The coset of d generates the quotient iff the least k >= 1 with
        // d^k in `self` equals the index.
        other.members.iter().any(|&d| {
            let mut cur = d;
            let mut k = 1usize;
            while !self.contains(cur) {
                cur = g.product(cur, d);
                k += 1;
            }
            k == index
        })
    }
}

/// One double coset `D g H`, with `g` the minimal member identifier.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    representative: ElementId,
    members: Vec<ElementId>,
    left: Subgroup,
    right: Subgroup,
}

impl DoubleCoset {
    pub fn representative(&self) -> ElementId {
        self.representative
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: ElementId) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn left(&self) -> &Subgroup {
        &self.left
    }

    pub fn right(&self) -> &Subgroup {
        &self.right
    }
}

fn check_pair(g: &FiniteGroup, d: &Subgroup, h: &Subgroup) -> Result<(), GroupError> {
    if !d.parent().same_group(g) || !h.parent().same_group(g) {
        return Err(GroupError::SubgroupParentMismatch);
    }
    Ok(())
}

/// Partition of `G` into double cosets `D \ G / H`, ordered by minimal
/// representative. Output is fully deterministic.
pub fn double_cosets(
    g: &FiniteGroup,
    d: &Subgroup,
    h: &Subgroup,
) -> Result<Vec<DoubleCoset>, GroupError> {
    check_pair(g, d, h)?;
    let n = g.order();
    let mut visited = vec![false; n];
    let mut out = Vec::new();
    let mut mask = vec![false; n];
    for rep in 0..n as ElementId {
        if visited[rep as usize] {
            continue;
        }
        let mut members: Vec<ElementId> = Vec::new();
        for &dd in d.members() {
            let dg = g.product(dd, rep);
            for &hh in h.members() {
                let m = g.product(dg, hh);
                if !mask[m as usize] {
                    mask[m as usize] = true;
                    members.push(m);
                }
            }
        }
        for &m in &members {
            mask[m as usize] = false;
            visited[m as usize] = true;
        }
        members.sort_unstable();
        debug_assert_eq!(members[0], rep);
        out.push(DoubleCoset {
            representative: rep,
            members,
            left: d.clone(),
            right: h.clone(),
        });
    }
    Ok(out)
}

/// Reference implementation of [`double_cosets`]: forms `D g H` for every
/// single `g` and deduplicates. Quadratically slower; kept as an
/// independent oracle for equivalence testing.
pub fn double_cosets_naive(
    g: &FiniteGroup,
    d: &Subgroup,
    h: &Subgroup,
) -> Result<Vec<DoubleCoset>, GroupError> {
    check_pair(g, d, h)?;
    let n = g.order();
    let mut by_rep: Vec<Option<Vec<ElementId>>> = vec![None; n];
    let mut mask = vec![false; n];
    for rep in 0..n as ElementId {
        let mut members: Vec<ElementId> = Vec::new();
        for &dd in d.members() {
            let dg = g.product(dd, rep);
            for &hh in h.members() {
                let m = g.product(dg, hh);
                if !mask[m as usize] {
                    mask[m as usize] = true;
                    members.push(m);
                }
            }
        }
        for &m in &members {
            mask[m as usize] = false;
        }
        members.sort_unstable();
        let canon = members[0] as usize;
        match &by_rep[canon] {
            Some(existing) => debug_assert_eq!(existing, &members),
            None => by_rep[canon] = Some(members),
        }
    }
    Ok(by_rep
        .into_iter()
        .enumerate()
        .filter_map(|(rep, members)| {
            members.map(|members| DoubleCoset {
                representative: rep as ElementId,
                members,
                left: d.clone(),
                right: h.clone(),
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d8() -> FiniteGroup {
        // x^2 = 1 = y^4, x y x = y^3
        let x = permutation_from_cycles(4, &[vec![1, 3]]);
        let y = permutation_from_cycles(4, &[vec![0, 1, 2, 3]]);
        group_from_generators(4, &[("x", x), ("y", y)]).unwrap()
    }

    fn elems(g: &FiniteGroup, words: &[&str]) -> Vec<ElementId> {
        let mut ids: Vec<ElementId> =
            words.iter().map(|w| g.evaluate_word(w).unwrap()).collect();
        ids.sort_unstable();
        ids
    }

    #[test]
    fn trivial_group() {
        let g = group_from_generators(1, &[]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.product(0, 0), 0);
        assert_eq!(g.label(0), "1");
    }

    #[test]
    fn s3_closure_matches_brute_force() {
        // Independent oracle: close {(0 1), (0 1 2)} by hand over raw
        // permutation vectors.
        let a = permutation_from_cycles(3, &[vec![0, 1]]);
        let b = permutation_from_cycles(3, &[vec![0, 1, 2]]);
        let mut set: Vec<Vec<usize>> = vec![(0..3).collect()];
        loop {
            let mut added = false;
            let snapshot = set.clone();
            for p in &snapshot {
                for q in [&a, &b] {
                    let r = compose(p, q);
                    if !set.contains(&r) {
                        set.push(r);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        assert_eq!(set.len(), 6);

        let g = group_from_generators(3, &[("a", a), ("b", b)]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.verify_associativity_exhaustive());
    }

    #[test]
    fn d8_satisfies_presentation() {
        let g = d8();
        assert_eq!(g.order(), 8);
        let x = g.evaluate_word("x").unwrap();
        let y = g.evaluate_word("y").unwrap();
        assert_eq!(g.product(x, x), 0);
        assert_eq!(g.power(y, 4), 0);
        // x y x = y^3
        let xyx = g.product(g.product(x, y), x);
        assert_eq!(xyx, g.power(y, 3));
        assert!(g.verify_associativity_exhaustive());
        // all eight words resolve to distinct elements
        let all = elems(&g, &["1", "y", "y^2", "y^3", "x", "xy", "xy^2", "xy^3"]);
        assert_eq!(all.len(), 8);
        assert_eq!(all, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn generator_rejection() {
        let bad = vec![0usize, 0, 2];
        let err = group_from_generators(3, &[("a", bad)]).unwrap_err();
        assert_eq!(
            err,
            GroupError::NonBijectiveGenerator {
                index: 0,
                degree: 3
            }
        );
    }

    #[test]
    fn order_cap() {
        // A 101-cycle and a 103-cycle on disjoint points generate a cyclic
        // group of order 101 * 103 = 10403 > 10^4.
        let mut c1: Vec<usize> = (0..204).collect();
        for i in 0..101 {
            c1[i] = (i + 1) % 101;
        }
        let mut c2: Vec<usize> = (0..204).collect();
        for i in 0..103 {
            c2[101 + i] = 101 + (i + 1) % 103;
        }
        let err = group_from_generators(204, &[("a", c1), ("b", c2)]).unwrap_err();
        assert_eq!(err, GroupError::OrderCapExceeded { cap: 10_000 });
    }

    #[test]
    fn subgroup_generated_examples() {
        let g = d8();
        let empty = Subgroup::generated(&g, &[]).unwrap();
        assert_eq!(empty.members(), &[0]);

        let xy = g.evaluate_word("xy").unwrap();
        let dd = Subgroup::generated(&g, &[xy]).unwrap();
        assert_eq!(dd.members(), elems(&g, &["1", "xy"]).as_slice());

        let err = Subgroup::generated(&g, &[42]).unwrap_err();
        assert_eq!(err, GroupError::UnknownElement(42));
    }

    #[test]
    fn double_cosets_d8_golden() {
        let g = d8();
        let h = Subgroup::generated(&g, &elems(&g, &["x"])).unwrap();

        let d1 = Subgroup::generated(&g, &elems(&g, &["xy"])).unwrap();
        let cosets = double_cosets(&g, &d1, &h).unwrap();
        assert_eq!(cosets.len(), 2);
        assert_eq!(cosets[0].members(), elems(&g, &["1", "xy", "x", "y^3"]));
        assert_eq!(
            cosets[1].members(),
            elems(&g, &["y^2", "xy^3", "y", "xy^2"])
        );

        let d2 = Subgroup::generated(&g, &elems(&g, &["xy^3"])).unwrap();
        let cosets = double_cosets(&g, &d2, &h).unwrap();
        assert_eq!(cosets.len(), 2);
        assert_eq!(cosets[0].members(), elems(&g, &["1", "xy^3", "x", "y"]));
        assert_eq!(
            cosets[1].members(),
            elems(&g, &["y^2", "xy", "xy^2", "y^3"])
        );
    }

    #[test]
    fn double_cosets_trivial_pair() {
        let g = d8();
        let t = Subgroup::trivial(&g);
        let cosets = double_cosets(&g, &t, &t).unwrap();
        assert_eq!(cosets.len(), 8);
        for (i, c) in cosets.iter().enumerate() {
            assert_eq!(c.members(), &[i as ElementId]);
        }
    }

    #[test]
    fn naive_agrees_on_d8() {
        let g = d8();
        let h = Subgroup::generated(&g, &elems(&g, &["x"])).unwrap();
        for dw in [&["xy"][..], &["xy^3"][..], &["y"][..], &["y^2"][..]] {
            let d = Subgroup::generated(&g, &elems(&g, dw)).unwrap();
            let fast = double_cosets(&g, &d, &h).unwrap();
            let slow = double_cosets_naive(&g, &d, &h).unwrap();
            assert_eq!(fast.len(), slow.len());
            for (a, b) in fast.iter().zip(slow.iter()) {
                assert_eq!(a.representative(), b.representative());
                assert_eq!(a.members(), b.members());
            }
        }
    }

    #[test]
    fn parent_mismatch_detected() {
        let g1 = d8();
        let g2 = d8();
        let d = Subgroup::trivial(&g1);
        let h = Subgroup::trivial(&g2);
        assert_eq!(
            double_cosets(&g1, &d, &h).unwrap_err(),
            GroupError::SubgroupParentMismatch
        );
    }

    #[test]
    fn centrality() {
        let g = d8();
        assert!(g.is_central(0).unwrap());
        let y2 = g.evaluate_word("y^2").unwrap();
        assert!(g.is_central(y2).unwrap());
        let x = g.evaluate_word("x").unwrap();
        assert!(!g.is_central(x).unwrap());
        // center of D8 is exactly {1, y^2}
        let center: Vec<ElementId> = g
            .elements()
            .filter(|&a| g.is_central(a).unwrap())
            .collect();
        assert_eq!(center, elems(&g, &["1", "y^2"]));
        assert_eq!(g.is_central(99).unwrap_err(), GroupError::UnknownElement(99));
    }

    #[test]
    fn word_evaluator() {
        let g = d8();
        assert_eq!(g.evaluate_word("1").unwrap(), 0);
        assert_eq!(
            g.evaluate_word("x y^3").unwrap(),
            g.evaluate_word("xy^3").unwrap()
        );
        assert_eq!(
            g.evaluate_word("y^-1").unwrap(),
            g.evaluate_word("y^3").unwrap()
        );
        assert_eq!(
            g.evaluate_word("x*y*x").unwrap(),
            g.evaluate_word("y^3").unwrap()
        );
        assert!(g.evaluate_word("z").is_err());
        assert!(g.evaluate_word("").is_err());
        assert!(g.evaluate_word("y^").is_err());
    }

    #[test]
    fn labels_are_reduced_words() {
        let g = d8();
        let mut labels: Vec<String> = g.elements().map(|a| g.label(a)).collect();
        labels.sort();
        let mut expected: Vec<String> =
            ["1", "x", "xy", "xy^2", "xy^3", "y", "y^2", "y^3", ]
                .iter()
                .map(|s| s.to_string())
                .collect();
        // "xy^3" and "yx" denote the same element; accept the shorter form.
        expected = expected
            .into_iter()
            .map(|s| if s == "xy^3" { "yx".to_string() } else { s })
            .collect();
        expected.sort();
        assert_eq!(labels, expected);
        // every label resolves back to its element
        for a in g.elements() {
            assert_eq!(g.evaluate_word(&g.label(a)).unwrap(), a);
        }
    }

    #[test]
    fn catalog_groups() {
        assert_eq!(cyclic_group(1).order(), 1);
        assert_eq!(cyclic_group(6).order(), 6);
        assert_eq!(dihedral_group(4).order(), 8);
        assert_eq!(symmetric_group(4).order(), 24);
        let c2 = cyclic_group(2);
        let c4 = cyclic_group(4);
        let p = direct_product(&c2, &c4);
        assert_eq!(p.order(), 8);
        assert!(p.verify_associativity_exhaustive());
        // (r, 1) and (1, r) commute
        assert!(p.is_central(4).unwrap());
    }

    #[test]
    fn from_table_rejects_bad_tables() {
        // identity broken
        let t = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            FiniteGroup::from_table(t, None),
            Err(GroupError::InvalidTable(_))
        ));
        // non-square
        let t = vec![vec![0, 1]];
        assert!(matches!(
            FiniteGroup::from_table(t, None),
            Err(GroupError::InvalidTable(_))
        ));
        // valid C2
        let t = vec![vec![0, 1], vec![1, 0]];
        assert!(FiniteGroup::from_table(t, None).is_ok());
    }

    #[test]
    fn subgroup_helpers() {
        let g = d8();
        let h = Subgroup::generated(&g, &elems(&g, &["x"])).unwrap();
        let hp = Subgroup::generated(&g, &elems(&g, &["x", "y^2"])).unwrap();
        assert!(h.is_subgroup_of(&hp));
        assert!(!hp.is_subgroup_of(&h));
        assert_eq!(h.intersection(&hp).members(), h.members());
        assert!(hp.is_normal()); // index 2
        assert!(!h.is_normal()); // x conjugates outside
        let y = g.evaluate_word("y").unwrap();
        let conj = h.conjugate_by(y);
        assert_eq!(conj.members(), elems(&g, &["1", "xy^2"]).as_slice());
    }

    #[test]
    fn cyclic_quotients() {
        let g = d8();
        let whole = Subgroup::whole(&g);
        let rot = Subgroup::generated(&g, &[g.evaluate_word("y").unwrap()]).unwrap();
        let triv = Subgroup::trivial(&g);
        assert!(rot.has_cyclic_quotient_in(&whole)); // D8 / <y> = C2
        assert!(triv.has_cyclic_quotient_in(&rot)); // <y> cyclic
        assert!(!triv.has_cyclic_quotient_in(&whole)); // D8 not cyclic
    }

    proptest! {
        // Partition + size identity + oracle equivalence on random
        // subgroup pairs of S4.
        #[test]
        fn double_coset_laws_s4(
            dseeds in proptest::collection::vec(0u16..24, 0..3),
            hseeds in proptest::collection::vec(0u16..24, 0..3),
        ) {
            let g = symmetric_group(4);
            let d = Subgroup::generated(&g, &dseeds).unwrap();
            let h = Subgroup::generated(&g, &hseeds).unwrap();
            let cosets = double_cosets(&g, &d, &h).unwrap();

            // partition
            let total: usize = cosets.iter().map(|c| c.len()).sum();
            prop_assert_eq!(total, g.order());
            let mut seen = vec![false; g.order()];
            for c in &cosets {
                for &m in c.members() {
                    prop_assert!(!seen[m as usize]);
                    seen[m as usize] = true;
                }
            }

            // |DgH| * |D ∩ gHg^-1| = |D| * |H|
            for c in &cosets {
                let conj = h.conjugate_by(c.representative());
                let meet = d.intersection(&conj);
                prop_assert_eq!(c.len() * meet.order(), d.order() * h.order());
            }

            // oracle equivalence
            let slow = double_cosets_naive(&g, &d, &h).unwrap();
            prop_assert_eq!(cosets.len(), slow.len());
            for (a, b) in cosets.iter().zip(slow.iter()) {
                prop_assert_eq!(a.representative(), b.representative());
                prop_assert_eq!(a.members(), b.members());
            }
        }
    }
}
