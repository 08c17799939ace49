//! Finite groupoids: validation from raw tables, the standard constructions
//! (pair groupoid, groups, transformation groupoids, disjoint unions,
//! products) and reductions by invariant unit subsets.
//!
//! Arrows and units are addressed by dense indices ([`ArrowId`], [`UnitId`]).
//! Every unit carries an explicit identity arrow whose label equals the unit
//! label; the unit space is identified with these identity arrows.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{AxiomViolation, Error, Result, ViolationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitId(pub usize);

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// Source and range of an arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: UnitId,
    pub range: UnitId,
}

/// Raw, unvalidated tables in label form. This is the in-memory shape of the
/// groupoid file format.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawGroupoid {
    pub units: Vec<String>,
    /// `(id, source, range)`
    pub arrows: Vec<(String, String, String)>,
    /// `(a, b, a·b)`
    pub compose: Vec<(String, String, String)>,
    /// `(a, a⁻¹)`
    pub invert: Vec<(String, String)>,
}

/// A validated finite groupoid. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    unit_labels: Vec<String>,
    arrow_labels: Vec<String>,
    arrows: Vec<Arrow>,
    unit_arrow: Vec<ArrowId>,
    compose: HashMap<(ArrowId, ArrowId), ArrowId>,
    inverse: Vec<ArrowId>,
    source_fibres: Vec<Vec<ArrowId>>,
    range_fibres: Vec<Vec<ArrowId>>,
    unit_index: HashMap<String, UnitId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.unit_labels == other.unit_labels
            && self.arrow_labels == other.arrow_labels
            && self.arrows == other.arrows
            && self.unit_arrow == other.unit_arrow
            && self.compose == other.compose
            && self.inverse == other.inverse
    }
}

impl Eq for FiniteGroupoid {}

impl FiniteGroupoid {
    /// Assembles a groupoid from trusted tables. Callers guarantee the axioms;
    /// debug builds re-check them.
    fn assemble(
        unit_labels: Vec<String>,
        arrow_labels: Vec<String>,
        arrows: Vec<Arrow>,
        unit_arrow: Vec<ArrowId>,
        compose: HashMap<(ArrowId, ArrowId), ArrowId>,
        inverse: Vec<ArrowId>,
    ) -> Self {
        let mut source_fibres = vec![Vec::new(); unit_labels.len()];
        let mut range_fibres = vec![Vec::new(); unit_labels.len()];
        for (i, a) in arrows.iter().enumerate() {
            source_fibres[a.source.0].push(ArrowId(i));
            range_fibres[a.range.0].push(ArrowId(i));
        }
        let unit_index = unit_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), UnitId(i)))
            .collect();
        let arrow_index = arrow_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), ArrowId(i)))
            .collect();
        let g = FiniteGroupoid {
            unit_labels,
            arrow_labels,
            arrows,
            unit_arrow,
            compose,
            inverse,
            source_fibres,
            range_fibres,
            unit_index,
            arrow_index,
        };
        debug_assert!(g.axiom_violations().is_empty(), "{:?}", g.axiom_violations());
        g
    }

    /// The groupoid with no units and no arrows.
    pub fn empty() -> Self {
        Self::assemble(vec![], vec![], vec![], vec![], HashMap::new(), vec![])
    }

    pub fn num_units(&self) -> usize {
        self.unit_labels.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn units(&self) -> impl Iterator<Item = UnitId> + '_ {
        (0..self.unit_labels.len()).map(UnitId)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn source(&self, a: ArrowId) -> UnitId {
        self.arrows[a.0].source
    }

    pub fn range(&self, a: ArrowId) -> UnitId {
        self.arrows[a.0].range
    }

    pub fn unit_arrow(&self, x: UnitId) -> ArrowId {
        self.unit_arrow[x.0]
    }

    pub fn is_unit_arrow(&self, a: ArrowId) -> bool {
        self.unit_arrow[self.source(a).0] == a
    }

    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a.0]
    }

    /// `a·b`, defined exactly when `source(a) = range(b)`.
    pub fn compose(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        self.compose.get(&(a, b)).copied()
    }

    /// Composition of a pair known to be composable.
    pub(crate) fn mul(&self, a: ArrowId, b: ArrowId) -> ArrowId {
        self.compose[&(a, b)]
    }

    /// The source fibre `s⁻¹(x)` in arrow declaration order.
    pub fn source_fibre(&self, x: UnitId) -> &[ArrowId] {
        &self.source_fibres[x.0]
    }

    /// The range fibre `r⁻¹(x)` in arrow declaration order.
    pub fn range_fibre(&self, x: UnitId) -> &[ArrowId] {
        &self.range_fibres[x.0]
    }

    pub fn unit_label(&self, x: UnitId) -> &str {
        &self.unit_labels[x.0]
    }

    pub fn arrow_label(&self, a: ArrowId) -> &str {
        &self.arrow_labels[a.0]
    }

    pub fn unit_by_label(&self, label: &str) -> Result<UnitId> {
        self.unit_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownUnit(label.to_string()))
    }

    pub fn arrow_by_label(&self, label: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(label.to_string()))
    }

    /// Number of composable pairs.
    pub fn num_composable(&self) -> usize {
        self.compose.len()
    }

    /// Checks every groupoid law on the stored tables.
    pub fn axiom_violations(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let lab = |a: ArrowId| self.arrow_labels[a.0].clone();
        let viol = |kind, arrows: Vec<String>, detail: String| AxiomViolation { kind, arrows, detail };

        for x in self.units() {
            let e = self.unit_arrow(x);
            if self.source(e) != x || self.range(e) != x {
                out.push(viol(
                    ViolationKind::MissingUnitArrow,
                    vec![lab(e)],
                    format!("identity arrow of unit {} is not a loop at it", self.unit_label(x)),
                ));
            }
        }
        // Composability and totality over the composable pairs.
        for (&(a, b), &c) in &self.compose {
            if self.source(a) != self.range(b) {
                out.push(viol(
                    ViolationKind::Composability,
                    vec![lab(a), lab(b)],
                    "composite defined although source(a) != range(b)".into(),
                ));
            } else if self.range(c) != self.range(a) || self.source(c) != self.source(b) {
                out.push(viol(
                    ViolationKind::Endpoints,
                    vec![lab(a), lab(b), lab(c)],
                    "composite has wrong source or range".into(),
                ));
            }
        }
        for a in self.arrows() {
            for &b in self.range_fibre(self.source(a)) {
                if self.compose(a, b).is_none() {
                    out.push(viol(
                        ViolationKind::MissingComposite,
                        vec![lab(a), lab(b)],
                        "composable pair without a composite".into(),
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in self.arrows() {
            let (s, r) = (self.source(a), self.range(a));
            if self.mul(a, self.unit_arrow(s)) != a || self.mul(self.unit_arrow(r), a) != a {
                out.push(viol(
                    ViolationKind::UnitLaw,
                    vec![lab(a)],
                    "identity arrows do not act trivially".into(),
                ));
            }
            let inv = self.inverse(a);
            if self.source(inv) != r || self.range(inv) != s {
                out.push(viol(
                    ViolationKind::Inverse,
                    vec![lab(a), lab(inv)],
                    "inverse has wrong endpoints".into(),
                ));
                continue;
            }
            if self.inverse(inv) != a
                || self.mul(a, inv) != self.unit_arrow(r)
                || self.mul(inv, a) != self.unit_arrow(s)
            {
                out.push(viol(
                    ViolationKind::Inverse,
                    vec![lab(a), lab(inv)],
                    "inverse laws fail".into(),
                ));
            }
        }
        for a in self.arrows() {
            for &b in self.range_fibre(self.source(a)) {
                let ab = self.mul(a, b);
                for &c in self.range_fibre(self.source(b)) {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        out.push(viol(
                            ViolationKind::Associativity,
                            vec![lab(a), lab(b), lab(c)],
                            "(ab)c != a(bc)".into(),
                        ));
                    }
                }
            }
        }
        out
    }

    /// Exports the tables in label form, in declaration order.
    pub fn to_raw(&self) -> RawGroupoid {
        let mut compose: Vec<_> = self.compose.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        compose.sort();
        RawGroupoid {
            units: self.unit_labels.clone(),
            arrows: self
                .arrows()
                .map(|a| {
                    (
                        self.arrow_label(a).to_string(),
                        self.unit_label(self.source(a)).to_string(),
                        self.unit_label(self.range(a)).to_string(),
                    )
                })
                .collect(),
            compose: compose
                .into_iter()
                .map(|(a, b, c)| {
                    (
                        self.arrow_label(a).to_string(),
                        self.arrow_label(b).to_string(),
                        self.arrow_label(c).to_string(),
                    )
                })
                .collect(),
            invert: self
                .arrows()
                .map(|a| {
                    (
                        self.arrow_label(a).to_string(),
                        self.arrow_label(self.inverse(a)).to_string(),
                    )
                })
                .collect(),
        }
    }
}

/// Validates raw tables, returning every violated law on failure.
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<FiniteGroupoid> {
    let mut violations = Vec::new();
    let viol = |kind, arrows: Vec<String>, detail: String| AxiomViolation { kind, arrows, detail };

    let mut unit_index = HashMap::new();
    for (i, u) in raw.units.iter().enumerate() {
        if unit_index.insert(u.clone(), UnitId(i)).is_some() {
            violations.push(viol(
                ViolationKind::DuplicateLabel,
                vec![u.clone()],
                "unit declared twice".into(),
            ));
        }
    }
    let mut arrow_index = HashMap::new();
    let mut arrows = Vec::with_capacity(raw.arrows.len());
    for (i, (id, s, r)) in raw.arrows.iter().enumerate() {
        if arrow_index.insert(id.clone(), ArrowId(i)).is_some() {
            violations.push(viol(
                ViolationKind::DuplicateLabel,
                vec![id.clone()],
                "arrow declared twice".into(),
            ));
        }
        match (unit_index.get(s), unit_index.get(r)) {
            (Some(&source), Some(&range)) => arrows.push(Arrow { source, range }),
            _ => {
                violations.push(viol(
                    ViolationKind::UnknownUnit,
                    vec![id.clone()],
                    format!("endpoints ({s}, {r}) are not declared units"),
                ));
                arrows.push(Arrow {
                    source: UnitId(0),
                    range: UnitId(0),
                });
            }
        }
    }
    let mut unit_arrow = Vec::with_capacity(raw.units.len());
    for u in &raw.units {
        match arrow_index.get(u) {
            Some(&a) => unit_arrow.push(a),
            None => {
                violations.push(viol(
                    ViolationKind::MissingUnitArrow,
                    vec![u.clone()],
                    format!("no identity arrow labelled {u}"),
                ));
                unit_arrow.push(ArrowId(0));
            }
        }
    }
    let lookup = |l: &String, violations: &mut Vec<AxiomViolation>| -> Option<ArrowId> {
        let a = arrow_index.get(l).copied();
        if a.is_none() {
            violations.push(AxiomViolation {
                kind: ViolationKind::UnknownArrow,
                arrows: vec![l.clone()],
                detail: "arrow referenced but not declared".into(),
            });
        }
        a
    };
    let mut compose = HashMap::new();
    for (a, b, c) in &raw.compose {
        let ids = (
            lookup(a, &mut violations),
            lookup(b, &mut violations),
            lookup(c, &mut violations),
        );
        if let (Some(a_id), Some(b_id), Some(c_id)) = ids {
            if let Some(prev) = compose.insert((a_id, b_id), c_id) {
                if prev != c_id {
                    violations.push(viol(
                        ViolationKind::ConflictingComposite,
                        vec![a.clone(), b.clone()],
                        "pair listed with two different composites".into(),
                    ));
                }
            }
        }
    }
    let mut inverse: Vec<Option<ArrowId>> = vec![None; raw.arrows.len()];
    for (a, b) in &raw.invert {
        if let (Some(a_id), Some(b_id)) = (lookup(a, &mut violations), lookup(b, &mut violations)) {
            if inverse[a_id.0].replace(b_id).is_some_and(|p| p != b_id) {
                violations.push(viol(
                    ViolationKind::Inverse,
                    vec![a.clone()],
                    "arrow listed with two different inverses".into(),
                ));
            }
        }
    }
    for (i, inv) in inverse.iter().enumerate() {
        if inv.is_none() {
            violations.push(viol(
                ViolationKind::Inverse,
                vec![raw.arrows[i].0.clone()],
                "arrow has no inverse".into(),
            ));
        }
    }
    if !violations.is_empty() {
        return Err(Error::Axioms(violations));
    }

    let g = FiniteGroupoid {
        source_fibres: Vec::new(),
        range_fibres: Vec::new(),
        unit_labels: raw.units.clone(),
        arrow_labels: raw.arrows.iter().map(|(id, _, _)| id.clone()).collect(),
        arrows,
        unit_arrow,
        compose,
        inverse: inverse.into_iter().map(|i| i.unwrap()).collect(),
        unit_index,
        arrow_index,
    };
    // Recompute the fibre listings before running the law checks.
    let g = FiniteGroupoid::assemble_unchecked(g);
    let violations = g.axiom_violations();
    if violations.is_empty() {
        Ok(g)
    } else {
        Err(Error::Axioms(violations))
    }
}

impl FiniteGroupoid {
    fn assemble_unchecked(mut g: FiniteGroupoid) -> Self {
        g.source_fibres = vec![Vec::new(); g.unit_labels.len()];
        g.range_fibres = vec![Vec::new(); g.unit_labels.len()];
        for (i, a) in g.arrows.iter().enumerate() {
            g.source_fibres[a.source.0].push(ArrowId(i));
            g.range_fibres[a.range.0].push(ArrowId(i));
        }
        g
    }
}

/// The pair groupoid on `{1..n}`: arrow `(i,j)` goes from `j` to `i`.
///
/// Arrow `(i,j)` has index `(i-1)·n + (j-1)`. Units are labelled `"i"`,
/// non-identity arrows `"(i,j)"`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    let idx = |i: usize, j: usize| ArrowId(i * n + j);
    let unit_labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut arrow_labels = Vec::with_capacity(n * n);
    let mut arrows = Vec::with_capacity(n * n);
    let mut inverse = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            arrow_labels.push(if i == j {
                (i + 1).to_string()
            } else {
                format!("({},{})", i + 1, j + 1)
            });
            arrows.push(Arrow {
                source: UnitId(j),
                range: UnitId(i),
            });
            inverse.push(idx(j, i));
        }
    }
    let mut compose = HashMap::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                compose.insert((idx(i, j), idx(j, k)), idx(i, k));
            }
        }
    }
    let unit_arrow = (0..n).map(|i| idx(i, i)).collect();
    FiniteGroupoid::assemble(unit_labels, arrow_labels, arrows, unit_arrow, compose, inverse)
}

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    labels: Vec<String>,
    identity: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl GroupSpec {
    /// Checks closure, associativity, identity and inverses. The inverse table
    /// is derived; [`GroupSpec::with_inverse`] additionally checks a supplied one.
    pub fn new(labels: Vec<String>, identity: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let bad = |m: String| Err(Error::InvalidGroup(m));
        if n == 0 {
            return bad("group has no elements".into());
        }
        if identity >= n {
            return bad(format!("identity index {identity} out of range"));
        }
        if labels.iter().collect::<HashSet<_>>().len() != n {
            return bad("duplicate element labels".into());
        }
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&c| c >= n)) {
            return bad(format!("Cayley table must be {n}x{n} with entries < {n}"));
        }
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return bad(format!("{} is not an identity for {}", labels[identity], labels[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        ));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return bad(format!("{} has no inverse", labels[a])),
            }
        }
        Ok(GroupSpec {
            labels,
            identity,
            table,
            inverse,
        })
    }

    pub fn with_inverse(
        labels: Vec<String>,
        identity: usize,
        table: Vec<Vec<usize>>,
        inverse: &[usize],
    ) -> Result<Self> {
        let g = Self::new(labels, identity, table)?;
        if inverse != g.inverse.as_slice() {
            return Err(Error::InvalidGroup(
                "inverse table disagrees with the Cayley table".into(),
            ));
        }
        Ok(g)
    }

    /// ℤ/n with elements labelled `"0".."n-1"`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), 0, table).expect("cyclic group")
    }

    /// The dihedral group of order `2n`; `r^k` is index `k`, `s r^k` is `n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        // (f1, k1)·(f2, k2) = (f1 ^ f2, (-1)^{f2} k1 + k2)
        let enc = |f: usize, k: usize| f * n + k;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for f1 in 0..2 {
            for k1 in 0..n {
                for f2 in 0..2 {
                    for k2 in 0..n {
                        let k1s = if f2 == 1 { (n - k1) % n } else { k1 };
                        table[enc(f1, k1)][enc(f2, k2)] = enc(f1 ^ f2, (k1s + k2) % n);
                    }
                }
            }
        }
        let labels = (0..2 * n)
            .map(|i| if i < n { format!("r{i}") } else { format!("sr{}", i - n) })
            .collect();
        Self::new(labels, 0, table).expect("dihedral group")
    }

    /// The symmetric group on `k` letters, elements in lexicographic order of
    /// their one-line notation; composition `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(k: usize) -> Self {
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..k).collect();
        loop {
            perms.push(p.clone());
            let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
        }
        let index: HashMap<Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
            .collect();
        Self::new(labels, 0, table).expect("symmetric group")
    }

    /// Direct product; element `(a, b)` has index `a·|other| + b`.
    pub fn direct_product(&self, other: &GroupSpec) -> GroupSpec {
        let (n, m) = (self.order(), other.order());
        let mut table = vec![vec![0; n * m]; n * m];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, t) in row.iter_mut().enumerate() {
                *t = self.table[a / m][b / m] * m + other.table[a % m][b % m];
            }
        }
        let labels = (0..n * m)
            .map(|i| format!("{}x{}", self.labels[i / m], other.labels[i % m]))
            .collect();
        Self::new(labels, self.identity * m + other.identity, table).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The group as a one-unit groupoid; the unit carries the identity's label.
    pub fn as_groupoid(&self) -> FiniteGroupoid {
        let n = self.order();
        let arrows = vec![
            Arrow {
                source: UnitId(0),
                range: UnitId(0)
            };
            n
        ];
        let mut compose = HashMap::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                compose.insert((ArrowId(a), ArrowId(b)), ArrowId(self.table[a][b]));
            }
        }
        FiniteGroupoid::assemble(
            vec![self.labels[self.identity].clone()],
            self.labels.clone(),
            arrows,
            vec![ArrowId(self.identity)],
            compose,
            self.inverse.iter().map(|&i| ArrowId(i)).collect(),
        )
    }
}

/// A left action of a finite group on a finite point set by permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    group: GroupSpec,
    points: Vec<String>,
    /// `perm[g][x] = g·x`
    perm: Vec<Vec<usize>>,
}

impl ActionSpec {
    pub fn new(group: GroupSpec, points: Vec<String>, perm: Vec<Vec<usize>>) -> Result<Self> {
        let (n, k) = (group.order(), points.len());
        let bad = |m: String| Err(Error::InvalidAction(m));
        if points.iter().collect::<HashSet<_>>().len() != k {
            return bad("duplicate point labels".into());
        }
        if perm.len() != n {
            return bad(format!("expected {n} permutations, got {}", perm.len()));
        }
        for (g, p) in perm.iter().enumerate() {
            let mut seen = vec![false; k];
            if p.len() != k || p.iter().any(|&y| y >= k || std::mem::replace(&mut seen[y], true)) {
                return bad(format!(
                    "image of {} is not a permutation of the points",
                    group.label(g)
                ));
            }
        }
        if perm[group.identity()].iter().enumerate().any(|(x, &y)| x != y) {
            return bad("identity does not act trivially".into());
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                if (0..k).any(|x| perm[gh][x] != perm[g][perm[h][x]]) {
                    return bad(format!(
                        "perm({}·{}) != perm({})∘perm({})",
                        group.label(g),
                        group.label(h),
                        group.label(g),
                        group.label(h)
                    ));
                }
            }
        }
        Ok(ActionSpec { group, points, perm })
    }

    /// The trivial action on `k` points labelled `"1".."k"`.
    pub fn trivial(group: GroupSpec, k: usize) -> Self {
        let perm = vec![(0..k).collect(); group.order()];
        Self::new(group, (1..=k).map(|i| i.to_string()).collect(), perm).expect("trivial action")
    }

    /// Left multiplication of the group on itself.
    pub fn left_regular(group: GroupSpec) -> Self {
        let n = group.order();
        let perm = (0..n).map(|g| (0..n).map(|x| group.mul(g, x)).collect()).collect();
        let points = group.labels().to_vec();
        Self::new(group, points, perm).expect("left regular action")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perm[g][x]
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perm
    }

    pub fn point_index(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// Index of the arrow `(x, γ)` in [`transformation_groupoid`].
    pub fn arrow(&self, x: usize, g: usize) -> ArrowId {
        ArrowId(x * self.group.order() + g)
    }
}

/// The transformation groupoid `X ⋊ G`: arrows `(x, γ)` with
/// `s(x,γ) = γ⁻¹x`, `r(x,γ) = x`, `(x,γ)(γ⁻¹x,γ₁) = (x,γγ₁)`.
///
/// Arrow `(x, γ)` has index `x·|G| + γ` (see [`ActionSpec::arrow`]); units are
/// the points.
pub fn transformation_groupoid(a: &ActionSpec) -> FiniteGroupoid {
    let g = a.group();
    let (n, k) = (g.order(), a.num_points());
    let mut arrow_labels = Vec::with_capacity(n * k);
    let mut arrows = Vec::with_capacity(n * k);
    let mut inverse = Vec::with_capacity(n * k);
    for x in 0..k {
        for h in 0..n {
            let src = a.act(g.inv(h), x);
            arrow_labels.push(if h == g.identity() {
                a.points()[x].clone()
            } else {
                format!("({},{})", a.points()[x], g.label(h))
            });
            arrows.push(Arrow {
                source: UnitId(src),
                range: UnitId(x),
            });
            inverse.push(a.arrow(src, g.inv(h)));
        }
    }
    let mut compose = HashMap::with_capacity(n * n * k);
    for x in 0..k {
        for h in 0..n {
            let y = a.act(g.inv(h), x);
            for h1 in 0..n {
                compose.insert((a.arrow(x, h), a.arrow(y, h1)), a.arrow(x, g.mul(h, h1)));
            }
        }
    }
    let unit_arrow = (0..k).map(|x| a.arrow(x, g.identity())).collect();
    FiniteGroupoid::assemble(a.points().to_vec(), arrow_labels, arrows, unit_arrow, compose, inverse)
}

/// Disjoint union; labels of component `i` are prefixed with `"i."` when the
/// components' labels would otherwise collide.
pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> FiniteGroupoid {
    // Unit labels coincide with identity-arrow labels, so arrows suffice.
    let mut seen = HashSet::new();
    let clash = !parts.iter().flat_map(|g| g.arrow_labels.iter()).all(|l| seen.insert(l));
    let relabel = |i: usize, l: &str| if clash { format!("{i}.{l}") } else { l.to_string() };

    let mut unit_labels = Vec::new();
    let mut arrow_labels = Vec::new();
    let mut arrows = Vec::new();
    let mut unit_arrow = Vec::new();
    let mut compose = HashMap::new();
    let mut inverse = Vec::new();
    for (i, g) in parts.iter().enumerate() {
        let (u0, a0) = (unit_labels.len(), arrow_labels.len());
        unit_labels.extend(g.unit_labels.iter().map(|l| relabel(i, l)));
        arrow_labels.extend(g.arrow_labels.iter().map(|l| relabel(i, l)));
        arrows.extend(g.arrows.iter().map(|a| Arrow {
            source: UnitId(a.source.0 + u0),
            range: UnitId(a.range.0 + u0),
        }));
        unit_arrow.extend(g.unit_arrow.iter().map(|a| ArrowId(a.0 + a0)));
        inverse.extend(g.inverse.iter().map(|a| ArrowId(a.0 + a0)));
        compose.extend(
            g.compose
                .iter()
                .map(|(&(a, b), &c)| ((ArrowId(a.0 + a0), ArrowId(b.0 + a0)), ArrowId(c.0 + a0))),
        );
    }
    FiniteGroupoid::assemble(unit_labels, arrow_labels, arrows, unit_arrow, compose, inverse)
}

/// Cartesian product; arrow `(a, b)` has index `a·|H| + b`, and is labelled
/// `"(a;b)"` with the components' labels.
pub fn product(g: &FiniteGroupoid, h: &FiniteGroupoid) -> FiniteGroupoid {
    let (ng, nh) = (g.num_arrows(), h.num_arrows());
    let (ug, uh) = (g.num_units(), h.num_units());
    let aid = |a: ArrowId, b: ArrowId| ArrowId(a.0 * nh + b.0);
    let uid = |x: UnitId, y: UnitId| UnitId(x.0 * uh + y.0);
    let mut unit_labels = Vec::with_capacity(ug * uh);
    for x in g.units() {
        for y in h.units() {
            unit_labels.push(format!("({};{})", g.unit_label(x), h.unit_label(y)));
        }
    }
    let mut arrow_labels = Vec::with_capacity(ng * nh);
    let mut arrows = Vec::with_capacity(ng * nh);
    let mut inverse = Vec::with_capacity(ng * nh);
    for a in g.arrows() {
        for b in h.arrows() {
            arrow_labels.push(format!("({};{})", g.arrow_label(a), h.arrow_label(b)));
            arrows.push(Arrow {
                source: uid(g.source(a), h.source(b)),
                range: uid(g.range(a), h.range(b)),
            });
            inverse.push(aid(g.inverse(a), h.inverse(b)));
        }
    }
    let mut compose = HashMap::with_capacity(g.num_composable() * h.num_composable());
    for (&(a1, a2), &a3) in &g.compose {
        for (&(b1, b2), &b3) in &h.compose {
            compose.insert((aid(a1, b1), aid(a2, b2)), aid(a3, b3));
        }
    }
    let mut unit_arrow = Vec::with_capacity(ug * uh);
    for x in g.units() {
        for y in h.units() {
            unit_arrow.push(aid(g.unit_arrow(x), h.unit_arrow(y)));
        }
    }
    FiniteGroupoid::assemble(unit_labels, arrow_labels, arrows, unit_arrow, compose, inverse)
}

/// Outcome of [`invariance_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invariance {
    pub invariant: bool,
    pub witness: Option<ArrowId>,
}

/// Tests `r⁻¹(Y) = s⁻¹(Y)`; on failure returns an arrow with exactly one
/// endpoint in `Y`.
pub fn invariance_check(g: &FiniteGroupoid, units: &[UnitId]) -> Invariance {
    let mut inside = vec![false; g.num_units()];
    for &x in units {
        inside[x.0] = true;
    }
    let witness = g.arrows().find(|&a| inside[g.source(a).0] != inside[g.range(a).0]);
    Invariance {
        invariant: witness.is_none(),
        witness,
    }
}

/// Orbits `r(s⁻¹(x))`, the minimal nonempty invariant subsets, ordered by
/// their first unit.
pub fn orbits(g: &FiniteGroupoid) -> Vec<Vec<UnitId>> {
    let mut seen = vec![false; g.num_units()];
    let mut out = Vec::new();
    for x in g.units() {
        if seen[x.0] {
            continue;
        }
        let orbit: Vec<UnitId> = g.source_fibre(x).iter().map(|&a| g.range(a)).collect();
        let mut orbit: Vec<UnitId> = orbit
            .into_iter()
            .filter(|y| !std::mem::replace(&mut seen[y.0], true))
            .collect();
        orbit.sort();
        out.push(orbit);
    }
    out
}

/// A unit subset that passed the invariance check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSubset {
    members: Vec<bool>,
}

impl InvariantSubset {
    pub fn new(g: &FiniteGroupoid, units: &[UnitId]) -> Result<Self> {
        if let Some(&x) = units.iter().find(|x| x.0 >= g.num_units()) {
            return Err(Error::UnknownUnit(x.to_string()));
        }
        let check = invariance_check(g, units);
        if let Some(a) = check.witness {
            return Err(Error::NotInvariant {
                arrow: g.arrow_label(a).to_string(),
            });
        }
        let mut members = vec![false; g.num_units()];
        for &x in units {
            members[x.0] = true;
        }
        Ok(InvariantSubset { members })
    }

    pub fn from_labels(g: &FiniteGroupoid, labels: &[&str]) -> Result<Self> {
        let units = labels.iter().map(|l| g.unit_by_label(l)).collect::<Result<Vec<_>>>()?;
        Self::new(g, &units)
    }

    pub fn contains(&self, x: UnitId) -> bool {
        self.members.get(x.0).copied().unwrap_or(false)
    }

    pub fn units(&self) -> Vec<UnitId> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| UnitId(i))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    /// The complement `units ∖ Y`, invariant whenever `Y` is.
    pub fn complement(&self) -> InvariantSubset {
        InvariantSubset {
            members: self.members.iter().map(|m| !m).collect(),
        }
    }
}

/// The reduction `𝒢(Y)` together with the embedding of its arrows into `g`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub groupoid: FiniteGroupoid,
    /// `arrow_map[i]` is the arrow of the ambient groupoid behind arrow `i`.
    pub arrow_map: Vec<ArrowId>,
    /// `unit_map[i]` is the ambient unit behind unit `i`.
    pub unit_map: Vec<UnitId>,
}

/// Reduction by an invariant subset: arrows with both endpoints in `Y`, in
/// declaration order, with inherited structure.
pub fn reduction(g: &FiniteGroupoid, y: &InvariantSubset) -> Reduction {
    let unit_map: Vec<UnitId> = g.units().filter(|&x| y.contains(x)).collect();
    let arrow_map: Vec<ArrowId> = g
        .arrows()
        .filter(|&a| y.contains(g.source(a)) && y.contains(g.range(a)))
        .collect();
    let mut unit_new = vec![usize::MAX; g.num_units()];
    for (i, x) in unit_map.iter().enumerate() {
        unit_new[x.0] = i;
    }
    let mut arrow_new = vec![usize::MAX; g.num_arrows()];
    for (i, a) in arrow_map.iter().enumerate() {
        arrow_new[a.0] = i;
    }
    let na = |a: ArrowId| ArrowId(arrow_new[a.0]);
    let arrows = arrow_map
        .iter()
        .map(|&a| Arrow {
            source: UnitId(unit_new[g.source(a).0]),
            range: UnitId(unit_new[g.range(a).0]),
        })
        .collect();
    let mut compose = HashMap::new();
    for &a in &arrow_map {
        for &b in g.range_fibre(g.source(a)) {
            compose.insert((na(a), na(b)), na(g.mul(a, b)));
        }
    }
    let groupoid = FiniteGroupoid::assemble(
        unit_map.iter().map(|&x| g.unit_label(x).to_string()).collect(),
        arrow_map.iter().map(|&a| g.arrow_label(a).to_string()).collect(),
        arrows,
        unit_map.iter().map(|&x| na(g.unit_arrow(x))).collect(),
        compose,
        arrow_map.iter().map(|&a| na(g.inverse(a))).collect(),
    );
    Reduction {
        groupoid,
        arrow_map,
        unit_map,
    }
}

/// Brute-force isomorphism search. Returns `(unit map, arrow map)` from `g` to
/// `h` when one exists.
pub fn find_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Option<(Vec<UnitId>, Vec<ArrowId>)> {
    if g.num_units() != h.num_units() || g.num_arrows() != h.num_arrows() || g.num_composable() != h.num_composable() {
        return None;
    }
    // Identity arrows first so unit images are fixed early.
    let mut order: Vec<ArrowId> = g.units().map(|x| g.unit_arrow(x)).collect();
    order.extend(g.arrows().filter(|&a| !g.is_unit_arrow(a)));

    struct Search<'a> {
        g: &'a FiniteGroupoid,
        h: &'a FiniteGroupoid,
        order: Vec<ArrowId>,
        amap: Vec<Option<ArrowId>>,
        used: Vec<bool>,
        umap: Vec<Option<UnitId>>,
        uused: Vec<bool>,
    }

    impl Search<'_> {
        fn consistent(&self, a: ArrowId, b: ArrowId) -> bool {
            let g = self.g;
            // Composites with already mapped arrows, in both positions.
            for &c in g.range_fibre(g.source(a)) {
                if let (Some(cb), Some(ac)) = (self.amap[c.0], self.amap[g.mul(a, c).0]) {
                    if self.h.compose(b, cb) != Some(ac) {
                        return false;
                    }
                }
            }
            for &c in g.source_fibre(g.range(a)) {
                if let (Some(cb), Some(ca)) = (self.amap[c.0], self.amap[g.mul(c, a).0]) {
                    if self.h.compose(cb, b) != Some(ca) {
                        return false;
                    }
                }
            }
            if let Some(ib) = self.amap[g.inverse(a).0] {
                if self.h.inverse(b) != ib {
                    return false;
                }
            }
            true
        }

        fn run(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            let a = self.order[depth];
            let (s, r) = (self.g.source(a), self.g.range(a));
            let is_unit = self.g.is_unit_arrow(a);
            for b in self.h.arrows() {
                if self.used[b.0] || self.h.is_unit_arrow(b) != is_unit {
                    continue;
                }
                let (hs, hr) = (self.h.source(b), self.h.range(b));
                let fits = |x: UnitId, y: UnitId| match self.umap[x.0] {
                    Some(m) => m == y,
                    None => !self.uused[y.0],
                };
                if (s == r) != (hs == hr) || !fits(s, hs) || !fits(r, hr) || !self.consistent(a, b) {
                    continue;
                }
                let set_s = self.umap[s.0].is_none();
                if set_s {
                    self.umap[s.0] = Some(hs);
                    self.uused[hs.0] = true;
                }
                let set_r = self.umap[r.0].is_none();
                if set_r {
                    self.umap[r.0] = Some(hr);
                    self.uused[hr.0] = true;
                }
                self.amap[a.0] = Some(b);
                self.used[b.0] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.amap[a.0] = None;
                self.used[b.0] = false;
                if set_r {
                    self.umap[r.0] = None;
                    self.uused[hr.0] = false;
                }
                if set_s {
                    self.umap[s.0] = None;
                    self.uused[hs.0] = false;
                }
            }
            false
        }
    }

    let mut search = Search {
        g,
        h,
        order,
        amap: vec![None; g.num_arrows()],
        used: vec![false; h.num_arrows()],
        umap: vec![None; g.num_units()],
        uused: vec![false; h.num_units()],
    };
    if !search.run(0) {
        return None;
    }
    Some((
        search.umap.into_iter().map(Option::unwrap).collect(),
        search.amap.into_iter().map(Option::unwrap).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_of(g: &FiniteGroupoid) -> RawGroupoid {
        g.to_raw()
    }

    #[test]
    fn pair_groupoid_sizes() {
        let g1 = pair_groupoid(1);
        assert_eq!((g1.num_units(), g1.num_arrows()), (1, 1));
        let g2 = pair_groupoid(2);
        assert_eq!((g2.num_units(), g2.num_arrows()), (2, 4));
        let g3 = validate_groupoid(&raw_of(&pair_groupoid(3))).unwrap();
        assert_eq!(g3.num_arrows(), 9);
        let a12 = g3.arrow_by_label("(1,2)").unwrap();
        let a23 = g3.arrow_by_label("(2,3)").unwrap();
        assert_eq!(g3.compose(a12, a23), g3.arrow_by_label("(1,3)").ok());
    }

    #[test]
    fn bad_composability_is_reported() {
        let mut raw = raw_of(&pair_groupoid(3));
        raw.compose.push(("(1,2)".into(), "(1,2)".into(), "(1,2)".into()));
        let Err(Error::Axioms(v)) = validate_groupoid(&raw) else {
            panic!("expected violations")
        };
        assert!(v
            .iter()
            .any(|v| v.kind == ViolationKind::Composability
                && v.arrows == vec!["(1,2)".to_string(), "(1,2)".to_string()]));
    }

    #[test]
    fn missing_identity_and_inverse_are_reported() {
        let mut raw = raw_of(&pair_groupoid(2));
        raw.invert.retain(|(a, _)| a != "(1,2)");
        raw.units.push("9".into());
        let Err(Error::Axioms(v)) = validate_groupoid(&raw) else {
            panic!()
        };
        assert!(v.iter().any(|v| v.kind == ViolationKind::MissingUnitArrow));
        assert!(v.iter().any(|v| v.kind == ViolationKind::Inverse));
    }

    #[test]
    fn broken_associativity_is_caught() {
        let mut raw = raw_of(&GroupSpec::cyclic(3).as_groupoid());
        // Swap two composites, keeping the table total.
        for row in raw.compose.iter_mut() {
            if row.0 == "1" && row.1 == "1" {
                row.2 = "0".into();
            }
        }
        let Err(Error::Axioms(v)) = validate_groupoid(&raw) else {
            panic!()
        };
        assert!(!v.is_empty());
    }

    #[test]
    fn cyclic_group_as_groupoid() {
        let g = validate_groupoid(&raw_of(&GroupSpec::cyclic(3).as_groupoid())).unwrap();
        assert_eq!((g.num_units(), g.num_arrows()), (1, 3));
    }

    #[test]
    fn group_constructors_are_groups() {
        assert_eq!(GroupSpec::dihedral(3).order(), 6);
        assert_eq!(GroupSpec::symmetric(3).order(), 6);
        let k4 = GroupSpec::cyclic(2).direct_product(&GroupSpec::cyclic(2));
        assert!((0..4).all(|a| k4.mul(a, a) == k4.identity()));
        // S3 is non-abelian.
        let s3 = GroupSpec::symmetric(3);
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
    }

    #[test]
    fn invalid_cayley_table_rejected() {
        let t = vec![vec![0, 1], vec![1, 1]];
        assert!(GroupSpec::new(vec!["e".into(), "a".into()], 0, t).is_err());
        let t = vec![vec![0, 1], vec![1, 0]];
        assert!(GroupSpec::with_inverse(vec!["e".into(), "a".into()], 0, t, &[0, 0]).is_err());
    }

    #[test]
    fn action_must_be_homomorphism() {
        let z2 = GroupSpec::cyclic(2);
        let pts = vec!["a".to_string(), "b".to_string()];
        assert!(ActionSpec::new(z2.clone(), pts.clone(), vec![vec![0, 1], vec![1, 0]]).is_ok());
        let z3 = GroupSpec::cyclic(3);
        let bad = ActionSpec::new(z3, pts, vec![vec![0, 1], vec![1, 0], vec![1, 0]]);
        assert!(matches!(bad, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn trivial_action_splits() {
        let a = ActionSpec::trivial(GroupSpec::cyclic(2), 2);
        let t = transformation_groupoid(&a);
        assert_eq!(t.num_arrows(), 4);
        let z2 = GroupSpec::cyclic(2).as_groupoid();
        let two = disjoint_union(&[&z2, &z2]);
        assert!(find_isomorphism(&t, &two).is_some());
        assert!(find_isomorphism(&t, &pair_groupoid(2)).is_none());
    }

    #[test]
    fn swap_action_is_pair_groupoid() {
        let a = ActionSpec::new(
            GroupSpec::cyclic(2),
            vec!["1".into(), "2".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let t = transformation_groupoid(&a);
        assert_eq!(t.num_arrows(), 4);
        assert!(find_isomorphism(&t, &pair_groupoid(2)).is_some());
    }

    #[test]
    fn left_regular_action_is_pair_groupoid() {
        // Explicit map (x,γ) ↦ (x, γ⁻¹x) checked against the composition tables.
        for grp in [GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::symmetric(3)] {
            let n = grp.order();
            let a = ActionSpec::left_regular(grp.clone());
            let t = transformation_groupoid(&a);
            let p = pair_groupoid(n);
            assert_eq!(t.num_arrows(), n * n);
            let phi = |x: usize, h: usize| ArrowId(x * n + a.act(grp.inv(h), x));
            for x in 0..n {
                for h in 0..n {
                    let arr = a.arrow(x, h);
                    for &b in t.range_fibre(t.source(arr)) {
                        let (y, h1) = (b.0 / n, b.0 % n);
                        let c = t.compose(arr, b).unwrap();
                        let (z, h2) = (c.0 / n, c.0 % n);
                        assert_eq!(p.compose(phi(x, h), phi(y, h1)), Some(phi(z, h2)));
                    }
                }
            }
        }
        assert!(find_isomorphism(
            &transformation_groupoid(&ActionSpec::left_regular(GroupSpec::cyclic(4))),
            &pair_groupoid(4)
        )
        .is_some());
    }

    #[test]
    fn reduction_examples() {
        let p3 = pair_groupoid(3);
        let y = [UnitId(0), UnitId(1)];
        let inv = invariance_check(&p3, &y);
        assert!(!inv.invariant);
        let w = inv.witness.unwrap();
        assert!((p3.source(w) == UnitId(2)) != (p3.range(w) == UnitId(2)));
        assert!(matches!(InvariantSubset::new(&p3, &y), Err(Error::NotInvariant { .. })));

        let p2 = pair_groupoid(2);
        let u = disjoint_union(&[&p2, &p3]);
        let first = InvariantSubset::new(&u, &[UnitId(0), UnitId(1)]).unwrap();
        let red = reduction(&u, &first);
        assert!(find_isomorphism(&red.groupoid, &p2).is_some());
        assert_eq!(red.groupoid.num_arrows(), 4);

        // ℤ/2 swapping 1,2 and fixing 3,4.
        let act = ActionSpec::new(
            GroupSpec::cyclic(2),
            (1..=4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3]],
        )
        .unwrap();
        let t = transformation_groupoid(&act);
        let y = InvariantSubset::from_labels(&t, &["3", "4"]).unwrap();
        let red = reduction(&t, &y);
        let z2 = GroupSpec::cyclic(2).as_groupoid();
        assert_eq!(red.groupoid.num_arrows(), 4);
        assert!(find_isomorphism(&red.groupoid, &disjoint_union(&[&z2, &z2])).is_some());
        assert!(invariance_check(&t, &y.complement().units()).invariant);
    }

    #[test]
    fn reduction_by_everything_and_nothing() {
        let g = transformation_groupoid(&ActionSpec::left_regular(GroupSpec::dihedral(2)));
        let all = InvariantSubset::new(&g, &g.units().collect::<Vec<_>>()).unwrap();
        assert_eq!(reduction(&g, &all).groupoid, g);
        let none = InvariantSubset::new(&g, &[]).unwrap();
        assert_eq!(reduction(&g, &none).groupoid, FiniteGroupoid::empty());
    }

    #[test]
    fn product_and_union_validate() {
        let g = product(&pair_groupoid(2), &GroupSpec::cyclic(3).as_groupoid());
        assert_eq!(g.num_arrows(), 12);
        assert!(validate_groupoid(&g.to_raw()).is_ok());
        let u = disjoint_union(&[&g, &pair_groupoid(2)]);
        assert!(validate_groupoid(&u.to_raw()).is_ok());
    }
}
