//! The relabeling symmetries of the twelve branch-curve labels, together with
//! their induced integer matrix actions on the cocharacter lattices.
//!
//! Groups are tiny (order at most 48), so everything is done by exhaustive
//! enumeration: closure under composition, orbits by breadth-first search,
//! stabilizers and centers by filtering.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{quotient_map_matrix, IntMat, LatticeVector, Sublattice};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    /// A label permutation that does not respect the three color classes.
    #[error("permutation does not preserve the color class partition")]
    NotPartitionPreserving,
    /// A lattice operation on a group element that carries no matrices.
    #[error("group element has no lattice matrices")]
    MissingMatrices,
    /// A lattice-action query on a group that moves the sublattice.
    #[error("group does not preserve the sublattice")]
    DoesNotPreserve,
}

// ---------------------------------------------------------------------------
// Curve labels
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    R,
    G,
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];
}

/// One of the twelve curve labels. Indices 0 and 3 are boundary curves,
/// 1 and 2 are interior curves.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveLabel {
    pub color: Color,
    pub index: u8,
}

impl CurveLabel {
    pub fn new(color: Color, index: u8) -> Self {
        assert!(index < 4);
        CurveLabel { color, index }
    }

    pub fn is_boundary(&self) -> bool {
        self.index == 0 || self.index == 3
    }

    /// Position in the fixed label order R0, R1, R2, R3, G0, ..., B3.
    pub fn position(&self) -> usize {
        let c = match self.color {
            Color::R => 0,
            Color::G => 1,
            Color::B => 2,
        };
        c * 4 + self.index as usize
    }

    pub fn from_position(p: usize) -> Self {
        assert!(p < 12);
        CurveLabel::new(Color::ALL[p / 4], (p % 4) as u8)
    }
}

impl fmt::Debug for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.color, self.index)
    }
}

pub fn all_labels() -> Vec<CurveLabel> {
    (0..12).map(CurveLabel::from_position).collect()
}

/// An unordered triple with one curve of each color.
pub type LabelTriple = BTreeSet<CurveLabel>;

pub fn triple(r: u8, g: u8, b: u8) -> LabelTriple {
    [
        CurveLabel::new(Color::R, r),
        CurveLabel::new(Color::G, g),
        CurveLabel::new(Color::B, b),
    ]
    .into_iter()
    .collect()
}

// ---------------------------------------------------------------------------
// Permutations of the twelve labels
// ---------------------------------------------------------------------------

/// A permutation of the twelve labels; entry `i` is the image of position `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm12(pub [u8; 12]);

impl Perm12 {
    pub fn identity() -> Self {
        let mut p = [0u8; 12];
        for (i, x) in p.iter_mut().enumerate() {
            *x = i as u8;
        }
        Perm12(p)
    }

    pub fn is_identity(&self) -> bool {
        *self == Perm12::identity()
    }

    pub fn apply(&self, l: CurveLabel) -> CurveLabel {
        CurveLabel::from_position(self.0[l.position()] as usize)
    }

    /// `self` after `other`: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &Perm12) -> Perm12 {
        let mut p = [0u8; 12];
        for i in 0..12 {
            p[i] = self.0[other.0[i] as usize];
        }
        Perm12(p)
    }

    pub fn inverse(&self) -> Perm12 {
        let mut p = [0u8; 12];
        for i in 0..12 {
            p[self.0[i] as usize] = i as u8;
        }
        Perm12(p)
    }

    /// Build from disjoint transpositions of labels; unlisted labels are fixed.
    pub fn from_swaps(swaps: &[(CurveLabel, CurveLabel)]) -> Perm12 {
        let mut p = Perm12::identity();
        for (a, b) in swaps {
            assert_eq!(p.0[a.position()], a.position() as u8, "swaps must be disjoint");
            assert_eq!(p.0[b.position()], b.position() as u8, "swaps must be disjoint");
            p.0[a.position()] = b.position() as u8;
            p.0[b.position()] = a.position() as u8;
        }
        p
    }

    /// Does the permutation map each color class onto a single color class?
    pub fn preserves_color_partition(&self) -> bool {
        Color::ALL.iter().all(|&c| {
            let images: BTreeSet<Color> =
                (0..4).map(|i| self.apply(CurveLabel::new(c, i)).color).collect();
            images.len() == 1
        })
    }
}

impl fmt::Debug for Perm12 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let moved: Vec<String> = all_labels()
            .into_iter()
            .filter(|&l| self.apply(l) != l)
            .map(|l| format!("{:?}->{:?}", l, self.apply(l)))
            .collect();
        if moved.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", moved.join(" "))
        }
    }
}

// ---------------------------------------------------------------------------
// Group elements
// ---------------------------------------------------------------------------

/// Matrix representations of a relabeling on the rank-6 and rank-4 lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAction {
    pub on_product: IntMat, // 6x6, on (r1, r2, g1, g2, b1, b2) cocharacters
    pub on_quotient: IntMat, // 4x4, on the quotient lattice
}

/// A relabeling symmetry. Elements of the order-48 group carry matrices;
/// extra label symmetries (used to enlarge a stabilizer) do not, and lattice
/// operations reject them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub perm: Perm12,
    pub action: Option<LatticeAction>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            perm: Perm12::identity(),
            action: Some(LatticeAction {
                on_product: IntMat::identity(6),
                on_quotient: IntMat::identity(4),
            }),
        }
    }

    pub fn perm_only(perm: Perm12) -> Self {
        GroupElement { perm, action: None }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let action = match (&self.action, &other.action) {
            (Some(a), Some(b)) => Some(LatticeAction {
                on_product: a.on_product.mul(&b.on_product),
                on_quotient: a.on_quotient.mul(&b.on_quotient),
            }),
            _ => None,
        };
        GroupElement { perm: self.perm.compose(&other.perm), action }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            perm: self.perm.inverse(),
            action: self.action.as_ref().map(|a| LatticeAction {
                on_product: a.on_product.inverse_unimodular(),
                on_quotient: a.on_quotient.inverse_unimodular(),
            }),
        }
    }

    pub fn quotient_matrix(&self) -> Result<&IntMat, GroupError> {
        self.action.as_ref().map(|a| &a.on_quotient).ok_or(GroupError::MissingMatrices)
    }

    /// Serialization form: the 12-entry image array over the fixed label order.
    pub fn perm_array(&self) -> [u8; 12] {
        self.perm.0
    }
}

// Generators of the full relabeling group.

/// Cyclic color rotation R -> G -> B -> R, all indices kept.
pub fn color_rotation() -> GroupElement {
    let mut p = [0u8; 12];
    for l in all_labels() {
        let image_color = match l.color {
            Color::R => Color::G,
            Color::G => Color::B,
            Color::B => Color::R,
        };
        p[l.position()] = CurveLabel::new(image_color, l.index).position() as u8;
    }
    // Cocharacters of the three colors rotate the same way.
    let mut on_product = IntMat::zero(6, 6);
    for (src, dst) in [(0, 2), (1, 3), (2, 4), (3, 5), (4, 0), (5, 1)] {
        on_product[(dst, src)] = 1;
    }
    let on_quotient = IntMat::from_rows(&[
        vec![1, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
    ]);
    GroupElement { perm: Perm12(p), action: Some(LatticeAction { on_product, on_quotient }) }
}

/// Swap the two interior curves of one color.
pub fn interior_swap(color: Color) -> GroupElement {
    let a = CurveLabel::new(color, 1);
    let b = CurveLabel::new(color, 2);
    let perm = Perm12::from_swaps(&[(a, b)]);
    let mut on_product = IntMat::identity(6);
    let i = match color {
        Color::R => 0,
        Color::G => 2,
        Color::B => 4,
    };
    on_product[(i, i)] = 0;
    on_product[(i + 1, i + 1)] = 0;
    on_product[(i, i + 1)] = 1;
    on_product[(i + 1, i)] = 1;
    let mut on_quotient = IntMat::identity(4);
    on_quotient[(1 + i / 2, 1 + i / 2)] = -1;
    GroupElement { perm, action: Some(LatticeAction { on_product, on_quotient }) }
}

/// The Cremona involution: swaps boundary indices 0 and 3 in every color and
/// inverts all six interior coordinates.
pub fn cremona() -> GroupElement {
    let swaps: Vec<_> = Color::ALL
        .iter()
        .map(|&c| (CurveLabel::new(c, 0), CurveLabel::new(c, 3)))
        .collect();
    let perm = Perm12::from_swaps(&swaps);
    let mut on_product = IntMat::identity(6);
    let mut on_quotient = IntMat::identity(4);
    for i in 0..6 {
        on_product[(i, i)] = -1;
    }
    for i in 0..4 {
        on_quotient[(i, i)] = -1;
    }
    GroupElement { perm, action: Some(LatticeAction { on_product, on_quotient }) }
}

/// The extra label symmetry of the non-nodal degree 4 case: swaps the six
/// exterior labels with the six interior ones. It is not a symmetry of the
/// lattices, so it carries no matrices.
pub fn exterior_interior_swap() -> GroupElement {
    use Color::*;
    let l = CurveLabel::new;
    GroupElement::perm_only(Perm12::from_swaps(&[
        (l(R, 0), l(R, 1)),
        (l(R, 3), l(R, 2)),
        (l(G, 0), l(B, 1)),
        (l(G, 3), l(B, 2)),
        (l(B, 0), l(G, 1)),
        (l(B, 3), l(G, 2)),
    ]))
}

/// Recover the lattice matrices of a relabeling from its permutation alone,
/// when the permutation is of the order-48 group's shape: a cyclic color
/// rotation, optional interior swaps per color, and an optional boundary
/// 0 <-> 3 flip acting as global negation.
pub fn action_from_perm(perm: &Perm12) -> Option<LatticeAction> {
    // Color rotation part, read off the image of the R class.
    if !perm.preserves_color_partition() {
        return None;
    }
    let rot = match perm.apply(CurveLabel::new(Color::R, 1)).color {
        Color::R => 0,
        Color::G => 1,
        Color::B => 2,
    };
    // The order-48 group contains only the cyclic color permutations.
    let g_to = perm.apply(CurveLabel::new(Color::G, 1)).color;
    let expected_g = Color::ALL[(1 + rot) % 3];
    if g_to != expected_g {
        return None;
    }
    // Boundary flip: index 0 must go to 0 everywhere or to 3 everywhere.
    let flips: BTreeSet<u8> = Color::ALL
        .iter()
        .map(|&c| perm.apply(CurveLabel::new(c, 0)).index)
        .collect();
    let flip = match flips.iter().collect::<Vec<_>>()[..] {
        [0] if flips.len() == 1 => false,
        [3] => true,
        _ => return None,
    };
    // Interior swaps per color; index 1 must stay interior.
    let mut g = GroupElement::identity();
    for _ in 0..rot {
        g = color_rotation().compose(&g);
    }
    for &c in &Color::ALL {
        match perm.apply(CurveLabel::new(c, 1)).index {
            1 => {}
            2 => g = g.compose(&interior_swap(c)),
            _ => return None,
        }
    }
    if flip {
        g = g.compose(&cremona());
    }
    if g.perm == *perm {
        g.action
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Enumerated groups
// ---------------------------------------------------------------------------

/// A finite group of relabelings, stored as its full element list in a
/// canonical order (sorted by permutation).
#[derive(Clone, Debug)]
pub struct PermGroup {
    elements: Vec<GroupElement>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.perm_set() == other.perm_set()
    }
}
impl Eq for PermGroup {}

impl PermGroup {
    pub fn trivial() -> Self {
        PermGroup { elements: vec![GroupElement::identity()] }
    }

    /// Closure of the generators under composition.
    pub fn generate(generators: &[GroupElement]) -> Self {
        let mut seen: HashMap<Perm12, GroupElement> = HashMap::new();
        let id = GroupElement::identity();
        seen.insert(id.perm, id);
        let mut frontier: Vec<Perm12> = vec![Perm12::identity()];
        while let Some(p) = frontier.pop() {
            let current = seen[&p].clone();
            for g in generators {
                let next = g.compose(&current);
                if !seen.contains_key(&next.perm) {
                    frontier.push(next.perm);
                    seen.insert(next.perm, next);
                }
            }
        }
        let mut elements: Vec<GroupElement> = seen.into_values().collect();
        elements.sort_by_key(|e| e.perm);
        PermGroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    fn perm_set(&self) -> BTreeSet<Perm12> {
        self.elements.iter().map(|e| e.perm).collect()
    }

    pub fn contains_perm(&self, p: &Perm12) -> bool {
        self.elements.binary_search_by_key(p, |e| e.perm).is_ok()
    }

    pub fn element_order(&self, g: &GroupElement) -> usize {
        let mut acc = g.perm;
        let mut n = 1;
        while !acc.is_identity() {
            acc = g.perm.compose(&acc);
            n += 1;
        }
        n
    }

    /// Orbit of a lattice vector under the quotient-lattice matrices.
    pub fn orbit_vectors(&self, v: &LatticeVector) -> BTreeSet<LatticeVector> {
        self.elements
            .iter()
            .map(|g| {
                g.quotient_matrix().expect("orbit requires lattice matrices").apply(v)
            })
            .collect()
    }

    pub fn vector_stabilizer(&self, v: &LatticeVector) -> PermGroup {
        self.filter(|g| {
            g.quotient_matrix().expect("stabilizer requires lattice matrices").apply(v) == *v
        })
    }

    /// Subgroup fixing a set of unordered color triples setwise; the triples
    /// may permute among themselves.
    pub fn stabilizer_of_triple_set(&self, triples: &BTreeSet<LabelTriple>) -> PermGroup {
        for t in triples {
            let colors: BTreeSet<Color> = t.iter().map(|l| l.color).collect();
            assert_eq!(colors.len(), 3, "each triple must contain one label of each color");
        }
        self.filter(|g| {
            let image: BTreeSet<LabelTriple> = triples
                .iter()
                .map(|t| t.iter().map(|&l| g.perm.apply(l)).collect())
                .collect();
            image == *triples
        })
    }

    /// Closure of this group together with one extra relabeling.
    pub fn extend(&self, extra: &GroupElement) -> Result<PermGroup, GroupError> {
        if !extra.perm.preserves_color_partition() {
            return Err(GroupError::NotPartitionPreserving);
        }
        let mut gens = self.elements.clone();
        gens.push(extra.clone());
        Ok(PermGroup::generate(&gens))
    }

    pub fn center(&self) -> PermGroup {
        self.filter(|g| {
            self.elements
                .iter()
                .all(|h| g.perm.compose(&h.perm) == h.perm.compose(&g.perm))
        })
    }

    /// Elements acting as the identity on the sublattice. Errors if some
    /// element does not map the sublattice to itself.
    pub fn kernel_of_lattice_action(&self, sub: &Sublattice) -> Result<PermGroup, GroupError> {
        for g in &self.elements {
            let m = g.quotient_matrix()?;
            if !sub.basis().iter().all(|b| sub.contains(&m.apply(b))) {
                return Err(GroupError::DoesNotPreserve);
            }
        }
        Ok(self.filter(|g| {
            let m = g.quotient_matrix().expect("checked above");
            sub.basis().iter().all(|b| m.apply(b) == *b)
        }))
    }

    /// `{g : g . sub = sub}`. Matrices are unimodular, so mapping the basis
    /// into the sublattice already forces equality.
    pub fn setwise_lattice_stabilizer(&self, sub: &Sublattice) -> Result<PermGroup, GroupError> {
        for g in &self.elements {
            g.quotient_matrix()?;
        }
        Ok(self.filter(|g| {
            let m = g.quotient_matrix().expect("checked above");
            sub.basis().iter().all(|b| sub.contains(&m.apply(b)))
        }))
    }

    fn filter(&self, keep: impl Fn(&GroupElement) -> bool) -> PermGroup {
        PermGroup { elements: self.elements.iter().filter(|g| keep(g)).cloned().collect() }
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|g| {
            self.elements
                .iter()
                .all(|h| g.perm.compose(&h.perm) == h.perm.compose(&g.perm))
        })
    }

    /// Multiset of element orders, as order -> multiplicity.
    pub fn element_order_census(&self) -> BTreeMap<usize, usize> {
        let mut census = BTreeMap::new();
        for g in &self.elements {
            *census.entry(self.element_order(g)).or_insert(0) += 1;
        }
        census
    }
}

/// The full relabeling group of the twelve labels, of order 48.
pub fn gamma6() -> PermGroup {
    PermGroup::generate(&[
        color_rotation(),
        interior_swap(Color::R),
        interior_swap(Color::G),
        interior_swap(Color::B),
        cremona(),
    ])
}

// ---------------------------------------------------------------------------
// Small-group recognition
// ---------------------------------------------------------------------------

/// Isomorphism types distinguished by (order, abelianness, element orders).
/// That data separates all the groups arising from these relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupLabel {
    Trivial,
    C2,
    C3,
    C4,
    C2xC2,
    /// Cyclic of order 6, i.e. C3 x C2.
    C6,
    S3,
    C3xC2xC2,
    Unrecognized(usize),
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupLabel::Trivial => "trivial",
            GroupLabel::C2 => "C2",
            GroupLabel::C3 => "C3",
            GroupLabel::C4 => "C4",
            GroupLabel::C2xC2 => "C2xC2",
            GroupLabel::C6 => "C3xC2",
            GroupLabel::S3 => "S3",
            GroupLabel::C3xC2xC2 => "C3xC2xC2",
            GroupLabel::Unrecognized(n) => return write!(f, "unrecognized({n})"),
        };
        write!(f, "{s}")
    }
}

pub fn identify_small_group(g: &PermGroup) -> GroupLabel {
    let order = g.order();
    let abelian = g.is_abelian();
    let census = g.element_order_census();
    let orders: Vec<(usize, usize)> = census.into_iter().collect();
    match (order, abelian, orders.as_slice()) {
        (1, _, _) => GroupLabel::Trivial,
        (2, _, _) => GroupLabel::C2,
        (3, _, _) => GroupLabel::C3,
        (4, true, [(1, 1), (2, 3)]) => GroupLabel::C2xC2,
        (4, true, [(1, 1), (2, 1), (4, 2)]) => GroupLabel::C4,
        (6, true, _) => GroupLabel::C6,
        (6, false, _) => GroupLabel::S3,
        (12, true, [(1, 1), (2, 3), (3, 2), (6, 6)]) => GroupLabel::C3xC2xC2,
        _ => GroupLabel::Unrecognized(order),
    }
}

/// Check that a quotient matrix is compatible with the product-lattice matrix
/// through the quotient map. Holds for every element of the order-48 group.
pub fn action_factors_through_quotient(g: &GroupElement) -> bool {
    match &g.action {
        None => false,
        Some(a) => {
            let q = quotient_map_matrix();
            a.on_quotient.mul(&q) == q.mul(&a.on_product)
        }
    }
}
