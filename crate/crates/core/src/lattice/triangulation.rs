//! Oriented triangulated surfaces as glued triangle slots.
//!
//! Triangle `t` owns slots `3t, 3t+1, 3t+2`; slot `3t+i` is the edge from
//! corner `i` to corner `i+1 (mod 3)`, so each triangle carries the cyclic
//! orientation of its corners. Two paired slots are identified with opposite
//! orientations. Unpaired slots are boundary edges and must be listed in
//! boundary circles. Repeated vertices and multi-edges are allowed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TqftError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    partner: Vec<Option<usize>>,
    boundary: Vec<Vec<usize>>,
}

/// Interchange form: edge labels per triangle, slot pairings, and boundary
/// circles as slot lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationSpec {
    pub triangles: Vec<[usize; 3]>,
    pub pairings: Vec<[usize; 2]>,
    #[serde(default)]
    pub boundary: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl Counts {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    Flip { slot: usize },
    Subdivide { triangle: usize },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn next(slot: usize) -> usize {
    slot - slot % 3 + (slot % 3 + 1) % 3
}

fn prev(slot: usize) -> usize {
    slot - slot % 3 + (slot % 3 + 2) % 3
}

impl Triangulation {
    /// Builds and validates from per-slot partners and boundary circles.
    pub fn new(partner: Vec<Option<usize>>, boundary: Vec<Vec<usize>>) -> Result<Self> {
        let t = Triangulation { partner, boundary };
        t.validate()?;
        Ok(t)
    }

    pub fn from_pairs(num_triangles: usize, pairs: &[[usize; 2]], boundary: Vec<Vec<usize>>) -> Result<Self> {
        let n = 3 * num_triangles;
        let mut partner = vec![None; n];
        for &[a, b] in pairs {
            for s in [a, b] {
                if s >= n {
                    return Err(TqftError::Triangulation(format!("slot {s} out of range")));
                }
                if partner[s].is_some() {
                    return Err(TqftError::Triangulation(format!("slot {s} paired twice")));
                }
            }
            if a == b {
                return Err(TqftError::Triangulation(format!("slot {a} paired with itself")));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        Self::new(partner, boundary)
    }

    /// Reads the interchange form. Paired slots must carry the same edge
    /// label; boundary slots must carry labels used nowhere else.
    pub fn from_spec(spec: &TriangulationSpec) -> Result<Self> {
        let t = Self::from_pairs(spec.triangles.len(), &spec.pairings, spec.boundary.clone())?;
        let label = |s: usize| spec.triangles[s / 3][s % 3];
        let mut uses = std::collections::HashMap::new();
        for s in 0..t.num_slots() {
            *uses.entry(label(s)).or_insert(0usize) += 1;
        }
        for s in 0..t.num_slots() {
            match t.partner[s] {
                Some(p) if label(p) != label(s) => {
                    return Err(TqftError::Triangulation(format!(
                        "paired slots {s} and {p} carry edge labels {} and {}",
                        label(s),
                        label(p)
                    )))
                }
                None if uses[&label(s)] != 1 => {
                    return Err(TqftError::Triangulation(format!(
                        "boundary slot {s} shares edge label {}",
                        label(s)
                    )))
                }
                _ => {}
            }
        }
        Ok(t)
    }

    /// Interchange form with edge labels numbered by first occurrence.
    pub fn to_spec(&self) -> TriangulationSpec {
        let mut label = vec![usize::MAX; self.num_slots()];
        let mut next_label = 0;
        for s in 0..self.num_slots() {
            if label[s] == usize::MAX {
                label[s] = next_label;
                if let Some(p) = self.partner[s] {
                    label[p] = next_label;
                }
                next_label += 1;
            }
        }
        TriangulationSpec {
            triangles: (0..self.num_triangles())
                .map(|t| [label[3 * t], label[3 * t + 1], label[3 * t + 2]])
                .collect(),
            pairings: self.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            boundary: self.boundary.clone(),
        }
    }

    pub fn num_triangles(&self) -> usize {
        self.partner.len() / 3
    }

    pub fn num_slots(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, slot: usize) -> Option<usize> {
        self.partner[slot]
    }

    pub fn boundary(&self) -> &[Vec<usize>] {
        &self.boundary
    }

    /// Boundary slots in circle order.
    pub fn boundary_slots(&self) -> Vec<usize> {
        self.boundary.iter().flatten().copied().collect()
    }

    /// Paired slots as `(a, b)` with `a < b`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.num_slots())
            .filter_map(|s| self.partner[s].filter(|&p| s < p).map(|p| (s, p)))
            .collect()
    }

    /// Vertex class of each corner (corner `3t+i` is corner `i` of `t`).
    fn corner_classes(&self) -> (Vec<usize>, usize) {
        let n = self.num_slots();
        let mut uf = UnionFind::new(n);
        for (s, p) in self.pairs() {
            // slot s runs corner(s) → corner(next(s)); p runs the other way.
            uf.union(s, next(p));
            uf.union(next(s), p);
        }
        let mut ids = vec![usize::MAX; n];
        let mut count = 0;
        let mut class = vec![0; n];
        for (c, slot) in class.iter_mut().enumerate() {
            let r = uf.find(c);
            if ids[r] == usize::MAX {
                ids[r] = count;
                count += 1;
            }
            *slot = ids[r];
        }
        (class, count)
    }

    pub fn counts(&self) -> Counts {
        let (_, vertices) = self.corner_classes();
        let paired = self.partner.iter().filter(|p| p.is_some()).count();
        Counts {
            vertices,
            edges: paired / 2 + (self.num_slots() - paired),
            faces: self.num_triangles(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().euler()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_slots();
        if n == 0 || n % 3 != 0 {
            return Err(TqftError::Triangulation("need at least one triangle".into()));
        }
        for s in 0..n {
            if let Some(p) = self.partner[s] {
                if p >= n || p == s || self.partner[p] != Some(s) {
                    return Err(TqftError::Triangulation(format!(
                        "pairing is not an involution at slot {s}"
                    )));
                }
            }
        }
        let mut listed = vec![false; n];
        for circle in &self.boundary {
            if circle.is_empty() {
                return Err(TqftError::Triangulation("empty boundary circle".into()));
            }
            for &s in circle {
                if s >= n || self.partner[s].is_some() {
                    return Err(TqftError::Triangulation(format!(
                        "boundary slot {s} is missing or paired"
                    )));
                }
                if std::mem::replace(&mut listed[s], true) {
                    return Err(TqftError::Triangulation(format!("boundary slot {s} listed twice")));
                }
            }
        }
        if let Some(s) = (0..n).find(|&s| self.partner[s].is_none() && !listed[s]) {
            return Err(TqftError::Triangulation(format!(
                "unpaired slot {s} is not on a boundary circle"
            )));
        }
        self.check_face_maps()?;
        let (class, _) = self.corner_classes();
        for circle in &self.boundary {
            for (k, &s) in circle.iter().enumerate() {
                let following = circle[(k + 1) % circle.len()];
                if class[next(s)] != class[following] {
                    return Err(TqftError::Triangulation(format!(
                        "boundary circle breaks between slots {s} and {following}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Face maps in vertex classes: `d₀`, `d₁`, `d₂` of each triangle are
    /// its edges opposite corners 0, 1, 2, and an edge `u → v` has
    /// `d₀ = v`, `d₁ = u`. Checks the simplicial identities, with edges
    /// resolved through the pairing.
    pub fn check_face_maps(&self) -> Result<()> {
        let (class, _) = self.corner_classes();
        // Endpoints of the edge carried by a slot, read from the canonical
        // (smaller) slot of its pair and reoriented to the slot's direction.
        let ends = |s: usize| -> (usize, usize) {
            match self.partner[s] {
                Some(p) if p < s => (class[next(p)], class[p]),
                _ => (class[s], class[next(s)]),
            }
        };
        for t in 0..self.num_triangles() {
            let b = 3 * t;
            let d0 = ends(b + 1); // c1 → c2
            let (c2, c0) = ends(b + 2);
            let d1 = (c0, c2); // c0 → c2
            let d2 = ends(b); // c0 → c1
            let ok = d1.1 == d0.1 // d₀d₁ = d₀d₀
                && d2.1 == d0.0 // d₀d₂ = d₁d₀
                && d2.0 == d1.0; // d₁d₂ = d₁d₁
            if !ok {
                return Err(TqftError::Triangulation(format!(
                    "face maps inconsistent on triangle {t}"
                )));
            }
        }
        Ok(())
    }

    /// Two triangles glued along all three edges.
    pub fn sphere() -> Self {
        Self::from_pairs(2, &[[0, 3], [1, 5], [2, 4]], vec![]).expect("static sphere")
    }

    /// Closed orientable surface of genus `g`: the sphere for `g = 0`, else
    /// the fan triangulation of the `4g`-gon with sides glued as
    /// `a₁ b₁ a₁⁻¹ b₁⁻¹ ⋯`.
    pub fn standard_surface(genus: usize) -> Self {
        if genus == 0 {
            return Self::sphere();
        }
        let sides = 4 * genus;
        let tris = sides - 2;
        // Triangle i-1 = (P0, P_i, P_{i+1}) for i = 1..=4g-2.
        let side_slot = |s: usize| -> usize {
            if s == 0 {
                0
            } else if s == sides - 1 {
                3 * (tris - 1) + 2
            } else {
                3 * (s - 1) + 1
            }
        };
        let mut pairs = Vec::new();
        for i in 0..tris - 1 {
            pairs.push([3 * i + 2, 3 * (i + 1)]);
        }
        for j in 0..genus {
            pairs.push([side_slot(4 * j), side_slot(4 * j + 2)]);
            pairs.push([side_slot(4 * j + 1), side_slot(4 * j + 3)]);
        }
        Self::from_pairs(tris, &pairs, vec![]).expect("fan triangulation")
    }

    /// Annulus from a square with one pair of sides glued. Boundary circle
    /// 0 is slot 0 (incoming), circle 1 is slot 4 (outgoing).
    pub fn cylinder() -> Self {
        // T0 = (P, Q, R): bottom, right seam, diagonal R → P.
        // T1 = (P, R, S): diagonal P → R, top, left seam.
        Self::from_pairs(2, &[[2, 3], [1, 5]], vec![vec![0], vec![4]]).expect("static cylinder")
    }

    /// Applies a new slot layout: `map[old] = new` for surviving slots.
    fn relabel(&self, size: usize, map: &[Option<usize>], internal: &[(usize, usize)]) -> Self {
        let mut partner = vec![None; size];
        for (old, p) in self.partner.iter().enumerate() {
            if let (Some(new), Some(p)) = (map[old], p) {
                partner[new] = map[*p];
            }
        }
        for &(a, b) in internal {
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        let boundary = self
            .boundary
            .iter()
            .map(|c| c.iter().map(|&s| map[s].expect("boundary slots survive")).collect())
            .collect();
        Triangulation { partner, boundary }
    }

    /// 1-3 move: cone triangle `t` off a new interior vertex.
    pub fn pachner_13(&self, t: usize) -> Result<Self> {
        if t >= self.num_triangles() {
            return Err(TqftError::OutOfRange {
                index: t,
                size: self.num_triangles(),
            });
        }
        let n = self.num_slots();
        let (a, b, c) = (3 * t, n, n + 3);
        // A = (c0, c1, v) reuses t; B = (c1, c2, v); C = (c2, c0, v).
        let mut map: Vec<Option<usize>> = (0..n).map(Some).collect();
        map[3 * t + 1] = Some(b);
        map[3 * t + 2] = Some(c);
        let internal = [(a + 1, b + 2), (b + 1, c + 2), (c + 1, a + 2)];
        let out = self.relabel(n + 6, &map, &internal);
        out.validate()?;
        Ok(out)
    }

    /// 2-2 move: flip the interior edge carried by `slot`.
    pub fn pachner_22(&self, slot: usize) -> Result<Self> {
        let n = self.num_slots();
        if slot >= n {
            return Err(TqftError::OutOfRange { index: slot, size: n });
        }
        let Some(other) = self.partner[slot] else {
            return Err(TqftError::Triangulation(format!("slot {slot} is a boundary edge")));
        };
        let (t, u) = (slot / 3, other / 3);
        if t == u {
            return Err(TqftError::Triangulation(format!(
                "edge at slot {slot} has both sides on triangle {t}"
            )));
        }
        // t = (a, b, c) from `slot`; u = (b, a, d) from `other`.
        let (t1, t2) = (next(slot), prev(slot)); // b → c, c → a
        let (u1, u2) = (next(other), prev(other)); // a → d, d → b
        let mut map: Vec<Option<usize>> = (0..n).map(Some).collect();
        for s in [3 * t, 3 * t + 1, 3 * t + 2, 3 * u, 3 * u + 1, 3 * u + 2] {
            map[s] = None;
        }
        // New t = (c, a, d), new u = (d, b, c).
        map[t2] = Some(3 * t);
        map[u1] = Some(3 * t + 1);
        map[u2] = Some(3 * u);
        map[t1] = Some(3 * u + 1);
        let out = self.relabel(n, &map, &[(3 * t + 2, 3 * u + 2)]);
        out.validate()?;
        Ok(out)
    }

    /// Slots whose edge can be flipped.
    pub fn flippable_slots(&self) -> Vec<usize> {
        (0..self.num_slots())
            .filter(|&s| matches!(self.partner[s], Some(p) if p / 3 != s / 3))
            .collect()
    }

    pub fn apply(&self, m: Move) -> Result<Self> {
        match m {
            Move::Flip { slot } => self.pachner_22(slot),
            Move::Subdivide { triangle } => self.pachner_13(triangle),
        }
    }

    /// One random move: a subdivision with probability 0.4, else a flip
    /// (falling back to a subdivision when nothing is flippable).
    pub fn random_move(&self, rng: &mut impl Rng) -> Move {
        let flips = self.flippable_slots();
        if flips.is_empty() || rng.random_bool(0.4) {
            Move::Subdivide {
                triangle: rng.random_range(0..self.num_triangles()),
            }
        } else {
            Move::Flip {
                slot: flips[rng.random_range(0..flips.len())],
            }
        }
    }

    /// Applies `count` random moves and returns the result with the moves.
    pub fn shuffle(&self, count: usize, rng: &mut impl Rng) -> Result<(Self, Vec<Move>)> {
        let mut t = self.clone();
        let mut moves = Vec::with_capacity(count);
        for _ in 0..count {
            let m = t.random_move(rng);
            t = t.apply(m)?;
            moves.push(m);
        }
        Ok((t, moves))
    }

    /// [`Triangulation::shuffle`] driven by a ChaCha8 stream from `seed`.
    pub fn shuffle_seeded(&self, count: usize, seed: u64) -> Result<(Self, Vec<Move>)> {
        use rand::SeedableRng;
        self.shuffle(count, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_counts() {
        let s = Triangulation::sphere();
        assert_eq!(
            s.counts(),
            Counts {
                vertices: 3,
                edges: 3,
                faces: 2
            }
        );
        let t = Triangulation::standard_surface(1);
        assert_eq!(
            t.counts(),
            Counts {
                vertices: 1,
                edges: 3,
                faces: 2
            }
        );
        for g in 0..5 {
            let tri = Triangulation::standard_surface(g);
            assert_eq!(tri.euler_characteristic(), 2 - 2 * g as i64, "genus {g}");
        }
        let c = Triangulation::cylinder();
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.counts().vertices, 2);
    }

    #[test]
    fn rejects_bad_gluings() {
        assert!(Triangulation::from_pairs(1, &[[0, 0]], vec![]).is_err());
        assert!(Triangulation::from_pairs(1, &[[0, 1]], vec![]).is_err());
        assert!(Triangulation::from_pairs(2, &[[0, 3], [0, 4]], vec![]).is_err());
        // Boundary circle that does not close up.
        assert!(Triangulation::from_pairs(2, &[[2, 3], [1, 5]], vec![vec![0, 4]]).is_err());
    }

    #[test]
    fn moves_preserve_euler_and_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in 0..3 {
            let t = Triangulation::standard_surface(g);
            let (s, moves) = t.shuffle(40, &mut rng).unwrap();
            assert_eq!(moves.len(), 40);
            assert_eq!(s.euler_characteristic(), t.euler_characteristic());
        }
        let c = Triangulation::cylinder();
        let (s, _) = c.shuffle(30, &mut rng).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.boundary().len(), 2);
    }

    #[test]
    fn move_errors() {
        let c = Triangulation::cylinder();
        assert!(c.pachner_22(0).is_err());
        assert!(c.pachner_13(5).is_err());
        let s = Triangulation::sphere();
        let sub = s.pachner_13(0).unwrap();
        assert_eq!(sub.counts().vertices, 4);
        assert_eq!(sub.num_triangles(), 4);
    }

    #[test]
    fn spec_round_trip() {
        let t = Triangulation::standard_surface(2);
        let spec = t.to_spec();
        assert_eq!(Triangulation::from_spec(&spec).unwrap(), t);
        let mut bad = spec.clone();
        bad.triangles[0][0] = 999;
        assert!(Triangulation::from_spec(&bad).is_err());
    }
}
