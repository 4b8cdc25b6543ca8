//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..order` with the identity pinned at `0`.
//! Conjugacy classes are ordered by their minimal member, which makes every
//! downstream matrix reproducible.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TqftError};

/// Default cap on the order of groups built from presets or files.
pub const DEFAULT_MAX_ORDER: usize = 5040;

/// Tables up to this order are checked for associativity exhaustively;
/// larger ones use Light's test over a generating set.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub size: usize,
}

/// A finite group given by its Cayley table.
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    classes: OnceLock<ClassData>,
}

struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            name: self.name.clone(),
            order: self.order,
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            classes: OnceLock::new(),
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    ///
    /// Checks: square shape, entries in range, identity at index 0, every
    /// row and column a permutation, and associativity.
    pub fn from_cayley(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        Self::from_cayley_capped(name, rows, DEFAULT_MAX_ORDER)
    }

    pub fn from_cayley_capped(
        name: impl Into<String>,
        rows: &[Vec<usize>],
        max_order: usize,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(TqftError::InvalidTable("empty table".into()));
        }
        if n > max_order {
            return Err(TqftError::OrderCap {
                order: n,
                cap: max_order,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TqftError::InvalidTable(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(TqftError::InvalidTable(format!(
                        "entry {x} in row {i} out of range 0..{n}"
                    )));
                }
                table.push(x as u32);
            }
        }
        Self::from_flat(name.into(), n, table)
    }

    fn from_flat(name: String, n: usize, table: Vec<u32>) -> Result<Self> {
        for x in 0..n {
            if table[x] as usize != x || table[x * n] as usize != x {
                return Err(TqftError::InvalidTable(format!(
                    "index 0 is not a two-sided identity (fails at element {x})"
                )));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let v = table[i * n + j] as usize;
                if seen[v] == i {
                    return Err(TqftError::InvalidTable(format!(
                        "row {i} is not a permutation (value {v} repeats)"
                    )));
                }
                seen[v] = i;
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        for j in 0..n {
            for i in 0..n {
                let v = table[i * n + j] as usize;
                if seen[v] == j {
                    return Err(TqftError::InvalidTable(format!(
                        "column {j} is not a permutation (value {v} repeats)"
                    )));
                }
                seen[v] = j;
            }
        }
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            // Latin square with identity: exactly one right inverse per row.
            let y = (0..n)
                .find(|&y| table[x * n + y] == 0)
                .expect("latin row contains the identity");
            if table[y * n + x] != 0 {
                return Err(TqftError::InvalidTable(format!(
                    "element {x} has no two-sided inverse"
                )));
            }
            inverse[x] = y as u32;
        }
        let g = FiniteGroup {
            name,
            order: n,
            table,
            inverse,
            classes: OnceLock::new(),
        };
        g.check_associativity()?;
        Ok(g)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let middles: Vec<usize> = if n <= EXHAUSTIVE_ASSOC_LIMIT {
            (0..n).collect()
        } else {
            self.magma_generators()
        };
        for &y in &middles {
            for x in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(TqftError::InvalidTable(format!(
                            "not associative: ({x}*{y})*{z} != {x}*({y}*{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Greedy generating set of the table under multiplication alone.
    fn magma_generators(&self) -> Vec<usize> {
        let n = self.order;
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut gens = Vec::new();
        for cand in 1..n {
            if inside[cand] {
                continue;
            }
            gens.push(cand);
            // Close under right multiplication by all generators.
            let mut frontier = members.clone();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let p = self.mul(x, s);
                    if !inside[p] {
                        inside[p] = true;
                        members.push(p);
                        frontier.push(p);
                    }
                }
            }
        }
        gens
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `h g h⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// `a b a⁻¹ b⁻¹`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.mul(i, j)).collect())
            .collect()
    }

    pub fn inverses(&self) -> Vec<usize> {
        self.inverse.iter().map(|&x| x as usize).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for g in 0..n {
                if class_of[g] != usize::MAX {
                    continue;
                }
                let idx = classes.len();
                let mut members: Vec<usize> = (0..n).map(|h| self.conjugate(g, h)).collect();
                members.sort_unstable();
                members.dedup();
                for &m in &members {
                    class_of[m] = idx;
                }
                classes.push(ConjugacyClass {
                    representative: g,
                    size: members.len(),
                    members,
                });
            }
            ClassData { classes, class_of }
        })
    }

    /// Conjugacy classes ordered by minimal member; class 0 is `{e}`.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.class_data().classes
    }

    pub fn num_classes(&self) -> usize {
        self.class_data().classes.len()
    }

    /// Index of the conjugacy class containing `g`.
    pub fn class_of(&self, g: usize) -> usize {
        self.class_data().class_of[g]
    }

    pub fn class_index_map(&self) -> &[usize] {
        &self.class_data().class_of
    }

    /// Class index of the inverses of class `a`.
    pub fn inverse_class(&self, a: usize) -> usize {
        let rep = self.conjugacy_classes()[a].representative;
        self.class_of(self.inv(rep))
    }

    pub fn centralizer(&self, g: usize) -> Result<Subgroup> {
        if g >= self.order {
            return Err(TqftError::OutOfRange {
                index: g,
                size: self.order,
            });
        }
        let elements: Vec<usize> = (0..self.order)
            .filter(|&h| self.mul(h, g) == self.mul(g, h))
            .collect();
        Subgroup::new(self, elements, format!("Z({g}) in {}", self.name))
    }

    /// Integer tensor `N[a][b][c]`: number of pairs `(x, y) ∈ a × b` with
    /// `x y` equal to the representative of class `c`.
    pub fn class_structure_constants(&self) -> ClassConstants {
        let classes = self.conjugacy_classes();
        let r = classes.len();
        let mut data = vec![0u64; r * r * r];
        for (a, ca) in classes.iter().enumerate() {
            for (b, cb) in classes.iter().enumerate() {
                for &x in &ca.members {
                    for &y in &cb.members {
                        let z = self.mul(x, y);
                        let c = self.class_of(z);
                        if classes[c].representative == z {
                            data[(a * r + b) * r + c] += 1;
                        }
                    }
                }
            }
        }
        ClassConstants { rank: r, data }
    }

    /// Direct product `self × other`, element `(a, b)` at index `a·|other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a1, b1) = (x / m, x % m);
            for y in 0..order {
                let (a2, b2) = (y / m, y % m);
                table.push((self.mul(a1, a2) * m + other.mul(b1, b2)) as u32);
            }
        }
        FiniteGroup::from_flat(format!("{}x{}", self.name, other.name), order, table)
    }
}

/// Dense rank-3 table of class multiplication coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassConstants {
    rank: usize,
    data: Vec<u64>,
}

impl ClassConstants {
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.data[(a * self.rank + b) * self.rank + c]
    }

    /// Multiplies two class-basis vectors in the centre of the group algebra.
    pub fn multiply<T>(&self, u: &[T], v: &[T]) -> Vec<T>
    where
        T: Clone + num_traits::Zero + std::ops::Mul<Output = T> + From<u64>,
    {
        let r = self.rank;
        let mut out = vec![T::zero(); r];
        for a in 0..r {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..r {
                if v[b].is_zero() {
                    continue;
                }
                let uv = u[a].clone() * v[b].clone();
                for (c, slot) in out.iter_mut().enumerate() {
                    let n = self.get(a, b, c);
                    if n != 0 {
                        *slot = slot.clone() + uv.clone() * T::from(n);
                    }
                }
            }
        }
        out
    }
}

/// A subgroup together with its own re-indexed Cayley table.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
    position: HashMap<usize, usize>,
    embedded: FiniteGroup,
}

impl Subgroup {
    /// Builds the subgroup on `elements` (must contain the identity and be
    /// closed). The identity is placed first; other elements keep their
    /// parent order.
    pub fn new(parent: &FiniteGroup, mut elements: Vec<usize>, name: String) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(TqftError::InvalidTable(
                "subgroup must contain the identity".into(),
            ));
        }
        if parent.order() % elements.len() != 0 {
            return Err(TqftError::invariant(
                "lagrange",
                format!(
                    "subgroup size {} does not divide {}",
                    elements.len(),
                    parent.order()
                ),
            ));
        }
        let position: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let k = elements.len();
        let mut table = Vec::with_capacity(k * k);
        for &x in &elements {
            if !position.contains_key(&parent.inv(x)) {
                return Err(TqftError::InvalidTable(format!(
                    "subset not closed under inverse at {x}"
                )));
            }
            for &y in &elements {
                let p = parent.mul(x, y);
                match position.get(&p) {
                    Some(&i) => table.push(i as u32),
                    None => {
                        return Err(TqftError::InvalidTable(format!(
                            "subset not closed: {x}*{y} = {p}"
                        )))
                    }
                }
            }
        }
        let embedded = FiniteGroup::from_flat(name, k, table)?;
        Ok(Subgroup {
            parent_order: parent.order(),
            elements,
            position,
            embedded,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    /// Parent indices of the members, sorted.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position.contains_key(&g)
    }

    /// Index of parent element `g` inside the embedded table.
    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.position.get(&g).copied()
    }

    pub fn embedded(&self) -> &FiniteGroup {
        &self.embedded
    }
}

/// Named group constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Trivial,
    Cyclic(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Product(Box<Preset>, Box<Preset>),
}

impl Preset {
    /// Resolves a preset identifier plus integer parameters, e.g.
    /// `("cyclic", [4])`. Products are built with [`Preset::Product`].
    pub fn from_parts(name: &str, params: &[usize]) -> Result<Self> {
        let one = |what: &str| -> Result<usize> {
            match params {
                [n] => Ok(*n),
                _ => Err(TqftError::Input(format!(
                    "preset `{what}` takes exactly one integer parameter"
                ))),
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "trivial" => Ok(Preset::Trivial),
            "cyclic" => Ok(Preset::Cyclic(one("cyclic")?)),
            "dihedral" => Ok(Preset::Dihedral(one("dihedral")?)),
            "symmetric" => Ok(Preset::Symmetric(one("symmetric")?)),
            "quaternion8" | "quaternion" => Ok(Preset::Quaternion8),
            "product" => match params {
                [a, b] => Ok(Preset::Product(
                    Box::new(Preset::Cyclic(*a)),
                    Box::new(Preset::Cyclic(*b)),
                )),
                _ => Err(TqftError::Input(
                    "preset `product` takes two cyclic orders; use `A x B` names for general products"
                        .into(),
                )),
            },
            other => Err(TqftError::UnknownPreset(other.to_string())),
        }
    }

    /// Parses short names: `trivial`, `Z5`, `D4`, `S3`, `Q8`, and products
    /// joined with `x` such as `Z2xS3`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("trivial") || s == "1" {
            return Ok(Preset::Trivial);
        }
        if s.contains(['x', 'X', '×']) {
            let mut parts = s.split(['x', 'X', '×']).map(Preset::parse);
            let first = parts
                .next()
                .ok_or_else(|| TqftError::UnknownPreset(s.to_string()))??;
            return parts.try_fold(first, |acc, p| {
                Ok(Preset::Product(Box::new(acc), Box::new(p?)))
            });
        }
        let bad = || TqftError::UnknownPreset(s.to_string());
        let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let n: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "Z" | "C" | "z" | "c" => Ok(Preset::Cyclic(n)),
            "D" | "d" => Ok(Preset::Dihedral(n)),
            "S" | "s" => Ok(Preset::Symmetric(n)),
            "Q" | "q" if n == 8 => Ok(Preset::Quaternion8),
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Preset::Trivial => 1,
            Preset::Cyclic(n) => *n,
            Preset::Dihedral(n) => 2 * n,
            Preset::Symmetric(n) => (1..=*n).product(),
            Preset::Quaternion8 => 8,
            Preset::Product(a, b) => a.order().saturating_mul(b.order()),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        self.build_capped(DEFAULT_MAX_ORDER)
    }

    pub fn build_capped(&self, max_order: usize) -> Result<FiniteGroup> {
        let order = self.order();
        if order > max_order {
            return Err(TqftError::OrderCap {
                order,
                cap: max_order,
            });
        }
        let name = self.to_string();
        match self {
            Preset::Trivial => FiniteGroup::from_flat(name, 1, vec![0]),
            Preset::Cyclic(n) => {
                let n = *n;
                if n == 0 {
                    return Err(TqftError::Input("cyclic group needs n >= 1".into()));
                }
                let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
                FiniteGroup::from_flat(name, n, table)
            }
            Preset::Dihedral(n) => {
                let n = *n;
                if n == 0 {
                    return Err(TqftError::Input("dihedral group needs n >= 1".into()));
                }
                // r^k s^f at index k + n f, with s r = r^{-1} s.
                let order = 2 * n;
                let mut table = Vec::with_capacity(order * order);
                for x in 0..order {
                    let (k1, f1) = (x % n, x / n);
                    for y in 0..order {
                        let (k2, f2) = (y % n, y / n);
                        let k = if f1 == 0 { k1 + k2 } else { k1 + n - k2 } % n;
                        table.push((k + n * ((f1 + f2) % 2)) as u32);
                    }
                }
                FiniteGroup::from_flat(name, order, table)
            }
            Preset::Symmetric(n) => symmetric_group(*n, name),
            Preset::Quaternion8 => {
                // 1, -1, i, -i, j, -j, k, -k as (unit, sign).
                const UNIT: [[(usize, bool); 4]; 4] = [
                    [(0, false), (1, false), (2, false), (3, false)],
                    [(1, false), (0, true), (3, false), (2, true)],
                    [(2, false), (3, true), (0, true), (1, false)],
                    [(3, false), (2, false), (1, true), (0, true)],
                ];
                let mut table = Vec::with_capacity(64);
                for x in 0..8 {
                    for y in 0..8 {
                        let (u, neg) = UNIT[x / 2][y / 2];
                        let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
                        table.push((2 * u + sign as usize) as u32);
                    }
                }
                FiniteGroup::from_flat(name, 8, table)
            }
            Preset::Product(a, b) => Ok(a
                .build_capped(max_order)?
                .product(&b.build_capped(max_order)?)?
                .with_name(name)),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Trivial => write!(f, "trivial"),
            Preset::Cyclic(n) => write!(f, "Z{n}"),
            Preset::Dihedral(n) => write!(f, "D{n}"),
            Preset::Symmetric(n) => write!(f, "S{n}"),
            Preset::Quaternion8 => write!(f, "Q8"),
            Preset::Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

fn symmetric_group(n: usize, name: String) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(TqftError::Input("symmetric group needs n >= 1".into()));
    }
    // Lexicographic enumeration puts the identity first.
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        perms.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    let index: HashMap<Vec<u8>, u32> = perms
        .iter()
        .enumerate()
        .map(|(i, q)| (q.clone(), i as u32))
        .collect();
    let order = perms.len();
    let mut table = Vec::with_capacity(order * order);
    let mut buf = vec![0u8; n];
    for a in &perms {
        for b in &perms {
            // (a·b)(x) = a(b(x))
            for x in 0..n {
                buf[x] = a[b[x] as usize];
            }
            table.push(index[&buf]);
        }
    }
    FiniteGroup::from_flat(name, order, table)
}

/// Small presets used by cross-checks, in increasing order.
pub fn catalog(max_order: usize) -> Vec<Preset> {
    use Preset::*;
    let z = |n| Box::new(Cyclic(n));
    let all = vec![
        Trivial,
        Cyclic(2),
        Cyclic(3),
        Cyclic(4),
        Product(z(2), z(2)),
        Cyclic(5),
        Cyclic(6),
        Symmetric(3),
        Cyclic(7),
        Cyclic(8),
        Product(z(2), z(4)),
        Dihedral(4),
        Quaternion8,
        Cyclic(9),
        Dihedral(5),
        Product(z(2), Box::new(Symmetric(3))),
        Dihedral(6),
        Product(z(3), z(4)),
        Dihedral(7),
        Product(z(2), Box::new(Quaternion8)),
        Dihedral(8),
        Product(z(3), Box::new(Symmetric(3))),
        Symmetric(4),
        Dihedral(12),
        Product(z(3), Box::new(Quaternion8)),
    ];
    all.into_iter().filter(|p| p.order() <= max_order).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut cls = Vec::new();
            for y in 0..n {
                // y ~ x iff some h has h x h^-1 = y
                if (0..n).any(|h| g.mul(g.mul(h, x), g.inv(h)) == y) {
                    cls.push(y);
                    seen[y] = true;
                }
            }
            out.push(cls);
        }
        out
    }

    #[test]
    fn z2_table() {
        let g = Preset::Cyclic(2).build().unwrap();
        assert_eq!(g.cayley_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(Preset::Trivial.build().unwrap().order(), 1);
    }

    #[test]
    fn s3_classes_by_brute_force() {
        let g = Preset::Symmetric(3).build().unwrap();
        assert_eq!(g.order(), 6);
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let brute = brute_classes(&g);
        let ours: Vec<Vec<usize>> = g
            .conjugacy_classes()
            .iter()
            .map(|c| c.members.clone())
            .collect();
        assert_eq!(brute, ours);
    }

    #[test]
    fn load_rejects_bad_tables() {
        assert!(FiniteGroup::from_cayley("z2", &[vec![0, 1], vec![1, 0]]).is_ok());
        let err = FiniteGroup::from_cayley("bad", &[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.to_string().contains("permutation"), "{err}");
        let err = FiniteGroup::from_cayley("noid", &[vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(err.to_string().contains("identity"), "{err}");
        // A Latin square with identity that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_cayley("loop", &loop5).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }

    #[test]
    fn s3_transpositions_are_involutions() {
        let s3 = Preset::Symmetric(3).build().unwrap();
        let reloaded = FiniteGroup::from_cayley("S3", &s3.cayley_rows()).unwrap();
        for &t in &reloaded.conjugacy_classes()[1].members {
            assert_eq!(reloaded.inv(t), t);
            assert_eq!(reloaded.element_order(t), 2);
        }
    }

    #[test]
    fn centralizers() {
        let s3 = Preset::Symmetric(3).build().unwrap();
        assert_eq!(s3.centralizer(0).unwrap().order(), 6);
        let t = s3.conjugacy_classes()[1].representative;
        assert_eq!(s3.centralizer(t).unwrap().order(), 2);
        let z5 = Preset::Cyclic(5).build().unwrap();
        assert!((0..5).all(|g| z5.centralizer(g).unwrap().order() == 5));
        assert!(s3.centralizer(6).is_err());
    }

    #[test]
    fn class_constants_examples() {
        let triv = Preset::Trivial.build().unwrap();
        assert_eq!(triv.class_structure_constants().get(0, 0, 0), 1);
        let z2 = Preset::Cyclic(2).build().unwrap();
        assert_eq!(z2.class_structure_constants().get(1, 1, 0), 1);
        let s3 = Preset::Symmetric(3).build().unwrap();
        assert_eq!(s3.class_structure_constants().get(1, 1, 0), 3);
    }

    #[test]
    fn class_constants_match_group_algebra_products() {
        for p in catalog(24) {
            let g = p.build().unwrap();
            let n = g.order();
            let cls = g.conjugacy_classes();
            let nn = g.class_structure_constants();
            for (a, ca) in cls.iter().enumerate() {
                for (b, cb) in cls.iter().enumerate() {
                    let mut prod = vec![0u64; n];
                    for &x in &ca.members {
                        for &y in &cb.members {
                            prod[g.mul(x, y)] += 1;
                        }
                    }
                    for (c, cc) in cls.iter().enumerate() {
                        for &z in &cc.members {
                            assert_eq!(prod[z], nn.get(a, b, c), "{p} {a} {b} {c}");
                        }
                        assert_eq!(nn.get(a, b, c), nn.get(b, a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn preset_invariants() {
        for p in catalog(24) {
            let g = p.build().unwrap();
            assert_eq!(g.order(), p.order(), "{p}");
            let cls = g.conjugacy_classes();
            assert_eq!(cls[0].members, vec![0]);
            assert_eq!(cls.iter().map(|c| c.size).sum::<usize>(), g.order());
            for c in cls {
                assert_eq!(g.order() % c.size, 0);
                assert_eq!(g.centralizer(c.representative).unwrap().order() * c.size, g.order());
            }
            for x in 0..g.order() {
                assert_eq!(g.mul(x, g.inv(x)), 0);
            }
        }
    }

    #[test]
    fn parsing_names() {
        assert_eq!(Preset::parse("S3").unwrap(), Preset::Symmetric(3));
        assert_eq!(Preset::parse("Q8").unwrap(), Preset::Quaternion8);
        assert_eq!(Preset::parse("Z2xS3").unwrap().order(), 12);
        assert!(Preset::parse("W7").is_err());
        assert!(matches!(
            Preset::Symmetric(8).build(),
            Err(TqftError::OrderCap { .. })
        ));
        assert!(Preset::from_parts("nope", &[]).is_err());
    }

    #[test]
    fn lights_test_path_on_larger_groups() {
        // Order > EXHAUSTIVE_ASSOC_LIMIT takes the generator path.
        let g = Preset::Symmetric(6).build().unwrap();
        assert_eq!(g.order(), 720);
        assert_eq!(g.num_classes(), 11);
    }
}
