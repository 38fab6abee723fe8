//! Assembly of the four degeneration cases (degrees 3, 4a, 4b, 5): their
//! defining monomial conditions, the sublattices those conditions cut out,
//! the restricted fans, the relabeling symmetry of each case, the
//! distinguished one-parameter curves, and the boundary divisor bookkeeping.
//!
//! Everything derivable from the lattice data is computed from the
//! conditions; the handful of facts that come from non-toric geometry are
//! carried as recorded constants and flagged as such downstream.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fans::{
    complete_from_seed, cyclic_fan, restrict_rays, Fan, FanError, RayOrbits, RayType,
};
use crate::groups::{gamma6, triple, GroupError, LabelTriple, PermGroup};
use crate::lattice::{character_pushforward, lattice_n6, LatticeVector, Sublattice};

/// The four cases, named by the degree of the generic surface.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    Deg3,
    Deg4a,
    Deg4b,
    Deg5,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::Deg3, CaseId::Deg4a, CaseId::Deg4b, CaseId::Deg5];

    /// Degree of the generic surface of the case.
    pub fn degree(self) -> i64 {
        match self {
            CaseId::Deg3 => 3,
            CaseId::Deg4a | CaseId::Deg4b => 4,
            CaseId::Deg5 => 5,
        }
    }

    /// Short token used on the command line and in reports.
    pub fn token(self) -> &'static str {
        match self {
            CaseId::Deg3 => "3",
            CaseId::Deg4a => "4a",
            CaseId::Deg4b => "4b",
            CaseId::Deg5 => "5",
        }
    }
}

impl fmt::Debug for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg{}", self.token())
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg{}", self.token())
    }
}

impl FromStr for CaseId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3" | "deg3" => Ok(CaseId::Deg3),
            "4a" | "deg4a" => Ok(CaseId::Deg4a),
            "4b" | "deg4b" => Ok(CaseId::Deg4b),
            "5" | "deg5" => Ok(CaseId::Deg5),
            other => Err(format!("unknown case {other:?}; expected 3, 4a, 4b or 5")),
        }
    }
}

/// Kinds of non-toric boundary data recorded per case.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DivisorType {
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl fmt::Debug for DivisorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            DivisorType::B => 'B',
            DivisorType::C => 'C',
            DivisorType::D => 'D',
            DivisorType::E => 'E',
            DivisorType::F => 'F',
            DivisorType::G => 'G',
            DivisorType::H => 'H',
        };
        write!(f, "{c}")
    }
}

impl fmt::Display for DivisorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl From<RayType> for DivisorType {
    fn from(t: RayType) -> Self {
        match t {
            RayType::A => unreachable!("type A rays never survive restriction"),
            RayType::B => DivisorType::B,
            RayType::C => DivisorType::C,
            RayType::D => DivisorType::D,
        }
    }
}

/// Frozen expectations for a case fan, used by the verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedFanData {
    pub ray_count: usize,
    pub ray_type_census: BTreeMap<RayType, usize>,
    pub cone_census: BTreeMap<String, usize>,
    /// Human name of the standard fan the case fan is equivalent to.
    pub target_fan: &'static str,
}

/// A fully assembled case: conditions, computed sublattice, symmetry input,
/// frozen expectations, and recorded (non-computed) boundary data.
#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub id: CaseId,
    /// Monomial exponent tuples (r1, r2, g1, g2, b1, b2) of the defining
    /// conditions.
    pub conditions: Vec<[i64; 6]>,
    /// Annihilator of the pushed-forward condition characters; computed, not
    /// hard-coded.
    pub sublattice: Sublattice,
    /// The point triples matching the conditions, as stabilizer input.
    pub triples: BTreeSet<LabelTriple>,
    pub expected: ExpectedFanData,
    /// Divisor counts that come from non-toric geometry; recorded, never
    /// computed.
    pub recorded_divisors: BTreeMap<DivisorType, usize>,
    /// Recorded loci that are excluded from the boundary divisor count, with
    /// the stated reason.
    pub excluded_loci: Vec<(DivisorType, &'static str)>,
    /// Recorded loci contracted to points rather than divisors.
    pub contracted_points: Vec<(DivisorType, &'static str)>,
    pub fcurve_count: usize,
}

fn condition_triple(exponent: &[i64; 6]) -> LabelTriple {
    let pick = |a: i64, _b: i64| if a == 1 { 1 } else { 2 };
    triple(
        pick(exponent[0], exponent[1]),
        pick(exponent[2], exponent[3]),
        pick(exponent[4], exponent[5]),
    )
}

/// Build the full case description. The sublattice is derived from the
/// conditions via the character pushforward, never written down directly.
pub fn case_spec(id: CaseId) -> CaseSpec {
    let conditions: Vec<[i64; 6]> = match id {
        CaseId::Deg3 => vec![
            [0, 1, 1, 0, 1, 0],
            [1, 0, 0, 1, 1, 0],
            [1, 0, 1, 0, 0, 1],
        ],
        CaseId::Deg4a => vec![[1, 0, 1, 0, 1, 0], [0, 1, 0, 1, 0, 1]],
        CaseId::Deg4b => vec![[1, 0, 1, 0, 1, 0], [1, 0, 0, 1, 0, 1]],
        CaseId::Deg5 => vec![[1, 0, 1, 0, 1, 0]],
    };
    let covectors: Vec<_> = conditions
        .iter()
        .map(|c| character_pushforward(c).expect("conditions are balanced monomials"))
        .collect();
    let sublattice = Sublattice::annihilator(&lattice_n6(), &covectors);
    let triples: BTreeSet<LabelTriple> = conditions.iter().map(condition_triple).collect();

    let census = |pairs: &[(RayType, usize)]| pairs.iter().cloned().collect::<BTreeMap<_, _>>();
    let cones = |pairs: &[(&str, usize)]| {
        pairs
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>()
    };

    let (expected, recorded_divisors, excluded_loci, contracted_points, fcurve_count) = match id {
        CaseId::Deg3 => (
            ExpectedFanData {
                ray_count: 2,
                ray_type_census: census(&[(RayType::C, 2)]),
                cone_census: cones(&[("C", 2)]),
                target_fan: "fan of the projective line",
            },
            BTreeMap::from([(DivisorType::E, 1)]),
            vec![],
            vec![],
            0,
        ),
        CaseId::Deg4a => (
            ExpectedFanData {
                ray_count: 6,
                ray_type_census: census(&[(RayType::D, 6)]),
                cone_census: cones(&[("DD", 6)]),
                target_fan: "hexagon fan of the degree-6 del Pezzo surface",
            },
            BTreeMap::new(),
            vec![],
            vec![(
                DivisorType::E,
                "all fibers over this locus are isomorphic, so it contracts to a point",
            )],
            0,
        ),
        CaseId::Deg4b => (
            ExpectedFanData {
                ray_count: 8,
                ray_type_census: census(&[(RayType::B, 2), (RayType::C, 4), (RayType::D, 2)]),
                cone_census: cones(&[("BC", 4), ("CD", 4)]),
                target_fan: "eight-ray fan of the quadric blown up in four points",
            },
            BTreeMap::from([(DivisorType::E, 1), (DivisorType::G, 1)]),
            vec![(
                DivisorType::F,
                "surfaces over this locus are canonical, so it is not a boundary divisor",
            )],
            vec![],
            1,
        ),
        CaseId::Deg5 => (
            ExpectedFanData {
                ray_count: 18,
                ray_type_census: census(&[(RayType::B, 6), (RayType::C, 6), (RayType::D, 6)]),
                cone_census: cones(&[
                    ("BBB", 2),
                    ("BBC", 6),
                    ("BCD", 12),
                    ("BDD", 6),
                    ("CDD", 6),
                ]),
                target_fan: "complete smooth fan with 18 rays and 32 maximal cones",
            },
            BTreeMap::from([(DivisorType::E, 1), (DivisorType::G, 1), (DivisorType::H, 2)]),
            vec![(
                DivisorType::F,
                "surfaces over this locus are canonical, so it is not a boundary divisor",
            )],
            vec![],
            3,
        ),
    };

    CaseSpec {
        id,
        conditions,
        sublattice,
        triples,
        expected,
        recorded_divisors,
        excluded_loci,
        contracted_points,
        fcurve_count,
    }
}

/// The rays of the 42-ray fan lying in the case sublattice, with types.
pub fn case_rays(spec: &CaseSpec) -> Result<Vec<(LatticeVector, RayType)>, FanError> {
    let orbits = RayOrbits::new(&gamma6());
    restrict_rays(&orbits.all_rays(), &spec.sublattice, &orbits)
}

/// Seed maximal cones of the rank-3 case, given by ray generators in
/// ambient coordinates: one representative per symmetry orbit.
pub fn rank3_seed_cones() -> Vec<Vec<LatticeVector>> {
    let v = |c: [i64; 4]| LatticeVector::new(c.to_vec());
    vec![
        // three rays of the first orbit type
        vec![v([1, 0, 0, -1]), v([1, -1, 0, 0]), v([1, 0, -1, 0])],
        vec![v([1, 1, -1, -1]), v([1, 0, 0, -1]), v([1, 0, -1, 0])],
        vec![v([1, 1, -1, -1]), v([1, 0, 0, -1]), v([0, 1, 0, -1])],
        vec![v([1, 0, 0, -1]), v([0, 1, 0, -1]), v([0, 0, 1, -1])],
        vec![v([1, 1, -1, -1]), v([0, 1, -1, 0]), v([0, 1, 0, -1])],
    ]
}

/// Construct the complete case fan: restriction of the 42 rays, then either
/// the opposite-ray fan (rank 1), the cyclic fan (rank 2), or symmetry-orbit
/// seeding plus deterministic completion (rank 3).
pub fn build_case_fan(id: CaseId) -> Result<Fan, FanError> {
    let spec = case_spec(id);
    let rays = case_rays(&spec)?;
    match spec.sublattice.rank() {
        1 => {
            let fan = Fan {
                lattice: spec.sublattice.clone(),
                rays: rays.iter().map(|(r, _)| r.clone()).collect(),
                ray_types: Some(rays.iter().map(|(_, t)| *t).collect()),
                max_cones: (0..rays.len())
                    .map(|i| crate::fans::Cone::new(vec![i]))
                    .collect(),
            }
            .canonical();
            crate::fans::validate_fan(&fan)?;
            Ok(fan)
        }
        2 => {
            let fan = cyclic_fan(&spec.sublattice, &rays);
            crate::fans::validate_fan(&fan)?;
            Ok(fan)
        }
        3 => {
            let group = relabeling_group(id)?.group;
            complete_from_seed(&spec.sublattice, &rays, &rank3_seed_cones(), &group)
        }
        r => Err(FanError::UnsupportedRank(r)),
    }
}

/// One of the six distinguished one-parameter subgroups, as a cocharacter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FCurve {
    pub cocharacter: LatticeVector,
}

/// The six distinguished cocharacters: images of the standard basis of the
/// product lattice under the quotient map.
pub fn all_f_curves() -> Vec<FCurve> {
    [
        [1, 1, 0, 0],
        [1, -1, 0, 0],
        [1, 0, 1, 0],
        [1, 0, -1, 0],
        [1, 0, 0, 1],
        [1, 0, 0, -1],
    ]
    .iter()
    .map(|c| FCurve { cocharacter: LatticeVector::new(c.to_vec()) })
    .collect()
}

/// Split of the six distinguished curves relative to a case sublattice.
#[derive(Clone, Debug)]
pub struct FCurveSplit {
    /// Curves whose cocharacter lies in the sublattice.
    pub members: Vec<FCurve>,
    /// Curves meeting the case transversally: the cocharacter is not even in
    /// the rational span of the sublattice.
    pub transversal: Vec<FCurve>,
}

pub fn f_curves_in_case(id: CaseId) -> FCurveSplit {
    let spec = case_spec(id);
    let mut members = Vec::new();
    let mut transversal = Vec::new();
    for fc in all_f_curves() {
        if spec.sublattice.contains(&fc.cocharacter) {
            members.push(fc);
        } else if !spec.sublattice.in_rational_span(&fc.cocharacter) {
            transversal.push(fc);
        }
    }
    FCurveSplit { members, transversal }
}

/// Symmetry data of a case: the stabilizer of the defining point triples,
/// its kernel on the case sublattice, and the faithful quotient order.
#[derive(Clone, Debug)]
pub struct RelabelingData {
    pub group: PermGroup,
    pub kernel: PermGroup,
    pub faithful_quotient_order: usize,
}

pub fn relabeling_group(id: CaseId) -> Result<RelabelingData, GroupError> {
    let spec = case_spec(id);
    let group = gamma6().stabilizer_of_triple_set(&spec.triples);
    let kernel = group.kernel_of_lattice_action(&spec.sublattice)?;
    let faithful_quotient_order = group.order() / kernel.order();
    Ok(RelabelingData { group, kernel, faithful_quotient_order })
}

/// Boundary divisor bookkeeping for a case: computed toric orbit counts
/// merged with the recorded non-toric counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryReport {
    /// Orbit counts of the fan's rays under the case symmetry, by ray type.
    pub toric: BTreeMap<DivisorType, usize>,
    /// Non-toric divisor counts, recorded rather than computed.
    pub recorded: BTreeMap<DivisorType, usize>,
    /// Loci contracted to points (counted separately from divisors).
    pub contracted_points: Vec<(DivisorType, String)>,
    /// Loci excluded from the boundary, with reasons.
    pub excluded: Vec<(DivisorType, String)>,
    pub total_divisors: usize,
}

pub fn boundary_divisors(id: CaseId) -> Result<BoundaryReport, FanError> {
    let spec = case_spec(id);
    let fan = build_case_fan(id)?;
    let symmetry = relabeling_group(id)?;
    let orbits = crate::fans::orbits_of_rays(&fan, &symmetry.group)?;
    let types = fan.ray_types.as_ref().expect("case fans carry ray types");
    let mut toric: BTreeMap<DivisorType, usize> = BTreeMap::new();
    for orbit in &orbits {
        let t = types[orbit[0]];
        debug_assert!(orbit.iter().all(|&i| types[i] == t), "orbits respect ray types");
        *toric.entry(t.into()).or_insert(0) += 1;
    }
    let total_divisors =
        toric.values().sum::<usize>() + spec.recorded_divisors.values().sum::<usize>();
    Ok(BoundaryReport {
        toric,
        recorded: spec.recorded_divisors.clone(),
        contracted_points: spec
            .contracted_points
            .iter()
            .map(|&(t, s)| (t, s.to_string()))
            .collect(),
        excluded: spec.excluded_loci.iter().map(|&(t, s)| (t, s.to_string())).collect(),
        total_divisors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: [i64; 4]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn sublattices_match_their_closed_forms() {
        let s3 = case_spec(CaseId::Deg3).sublattice;
        assert_eq!(s3, Sublattice::from_generators(4, &[v([-1, 1, 1, 1])]));

        let s4a = case_spec(CaseId::Deg4a).sublattice;
        assert_eq!(
            s4a,
            Sublattice::from_generators(4, &[v([0, 1, -1, 0]), v([0, 0, 1, -1])])
        );

        let s4b = case_spec(CaseId::Deg4b).sublattice;
        assert_eq!(
            s4b,
            Sublattice::from_generators(4, &[v([1, -1, 0, 0]), v([0, 0, 1, -1])])
        );

        let s5 = case_spec(CaseId::Deg5).sublattice;
        assert_eq!(s5.rank(), 3);
        // Sum-zero sublattice of the ambient even-sum lattice.
        for b in s5.basis() {
            assert_eq!(b.0.iter().sum::<i64>(), 0);
        }
        assert!(s5.contains(&v([1, -1, 0, 0])));
        assert!(s5.contains(&v([1, 1, -1, -1])));
        assert!(!s5.contains(&v([1, 1, 0, 0])));
    }

    #[test]
    fn case_tokens_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.token().parse::<CaseId>().unwrap(), id);
        }
        assert!("6".parse::<CaseId>().is_err());
    }

    #[test]
    fn degree_3_fan_is_the_projective_line() {
        let fan = build_case_fan(CaseId::Deg3).unwrap();
        assert_eq!(fan.rays.len(), 2);
        assert_eq!(fan.max_cones.len(), 2);
        assert!(crate::fans::is_complete(&fan));
        assert_eq!(fan.ray_types, Some(vec![RayType::C, RayType::C]));
    }

    #[test]
    fn degree_4a_fan_is_the_hexagon() {
        let fan = build_case_fan(CaseId::Deg4a).unwrap();
        assert_eq!(fan.rays.len(), 6);
        assert_eq!(fan.max_cones.len(), 6);
        assert!(crate::fans::is_complete(&fan));
        assert_eq!(fan.cone_type_census(), BTreeMap::from([("DD".to_string(), 6)]));

        // Explicit unimodular identification with the standard hexagon.
        let hexagon = {
            let lattice = Sublattice::full(2);
            let rays: Vec<(LatticeVector, RayType)> =
                [[1i64, 0], [0, 1], [1, 1], [-1, 0], [0, -1], [-1, -1]]
                    .iter()
                    .map(|r| (LatticeVector::new(r.to_vec()), RayType::D))
                    .collect();
            cyclic_fan(&lattice, &rays)
        };
        let map = crate::fans::fan_isomorphic_2d(&fan, &hexagon).expect("hexagon");
        assert!(map.is_unimodular());
    }

    #[test]
    fn degree_4b_fan_matches_the_four_point_blowup_of_the_quadric() {
        let fan = build_case_fan(CaseId::Deg4b).unwrap();
        assert_eq!(fan.rays.len(), 8);
        assert_eq!(fan.max_cones.len(), 8);
        assert!(crate::fans::is_complete(&fan));
        assert_eq!(
            fan.cone_type_census(),
            BTreeMap::from([("BC".to_string(), 4), ("CD".to_string(), 4)])
        );
        let target = {
            let lattice = Sublattice::full(2);
            let rays: Vec<(LatticeVector, RayType)> = [
                [1i64, 0],
                [0, 1],
                [-1, 0],
                [0, -1],
                [1, 1],
                [1, -1],
                [-1, 1],
                [-1, -1],
            ]
            .iter()
            .map(|r| (LatticeVector::new(r.to_vec()), RayType::D))
            .collect();
            cyclic_fan(&lattice, &rays)
        };
        let map = crate::fans::fan_isomorphic_2d(&fan, &target).expect("equivalent fans");
        assert!(map.is_unimodular());
    }

    #[test]
    fn degree_5_fan_completion() {
        let fan = build_case_fan(CaseId::Deg5).unwrap();
        assert_eq!(fan.rays.len(), 18);
        assert_eq!(fan.max_cones.len(), 32);
        assert!(crate::fans::is_complete(&fan));
        assert_eq!(
            fan.ray_type_census(),
            BTreeMap::from([(RayType::B, 6), (RayType::C, 6), (RayType::D, 6)])
        );
        assert_eq!(
            fan.cone_type_census(),
            BTreeMap::from([
                ("BBB".to_string(), 2),
                ("BBC".to_string(), 6),
                ("BCD".to_string(), 12),
                ("BDD".to_string(), 6),
                ("CDD".to_string(), 6),
            ])
        );
        // Euler characteristic of the induced sphere triangulation.
        let ridges = crate::fans::ridge_count(&fan) as i64;
        assert_eq!(18 - ridges + 32, 2);
        assert_eq!(ridges, 48);
        // Every maximal cone is smooth.
        for cone in &fan.max_cones {
            assert!(crate::fans::is_smooth_cone(&fan.cone_generators(cone)));
        }
    }

    #[test]
    fn degree_5_seed_orbits_have_26_cones() {
        let spec = case_spec(CaseId::Deg5);
        let rays = case_rays(&spec).unwrap();
        let group = relabeling_group(CaseId::Deg5).unwrap().group;
        assert_eq!(group.order(), 6);
        let mut seed_closure: BTreeSet<BTreeSet<LatticeVector>> = BTreeSet::new();
        for seed in rank3_seed_cones() {
            for g in group.elements() {
                let m = g.quotient_matrix().unwrap();
                seed_closure.insert(seed.iter().map(|v| m.apply(v)).collect());
            }
        }
        assert_eq!(seed_closure.len(), 26);
        // All seed rays are among the restricted rays.
        let ray_set: BTreeSet<_> = rays.iter().map(|(r, _)| r.clone()).collect();
        for cone in seed_closure {
            for r in cone {
                assert!(ray_set.contains(&r));
            }
        }
    }

    #[test]
    fn f_curve_membership() {
        let expected = [
            (CaseId::Deg3, 0),
            (CaseId::Deg4a, 0),
            (CaseId::Deg4b, 1),
            (CaseId::Deg5, 3),
        ];
        for (id, count) in expected {
            let split = f_curves_in_case(id);
            assert_eq!(split.members.len(), count, "{id}");
            // Every non-member is transversal in every case.
            assert_eq!(split.members.len() + split.transversal.len(), 6, "{id}");
            assert_eq!(case_spec(id).fcurve_count, count);
        }
        assert_eq!(
            f_curves_in_case(CaseId::Deg4b).members,
            vec![FCurve { cocharacter: v([1, -1, 0, 0]) }]
        );
        let five: Vec<_> = f_curves_in_case(CaseId::Deg5)
            .members
            .iter()
            .map(|fc| fc.cocharacter.clone())
            .collect();
        assert_eq!(five, vec![v([1, -1, 0, 0]), v([1, 0, -1, 0]), v([1, 0, 0, -1])]);
    }

    #[test]
    fn relabeling_groups_have_the_stated_orders() {
        let expected = [
            (CaseId::Deg3, 6, 3, 2),
            (CaseId::Deg4a, 12, 2, 6),
            (CaseId::Deg4b, 4, 1, 4),
            (CaseId::Deg5, 6, 1, 6),
        ];
        for (id, order, kernel, quotient) in expected {
            let data = relabeling_group(id).unwrap();
            assert_eq!(data.group.order(), order, "{id} group");
            assert_eq!(data.kernel.order(), kernel, "{id} kernel");
            assert_eq!(data.faithful_quotient_order, quotient, "{id} quotient");
        }
    }

    #[test]
    fn triple_stabilizer_agrees_with_setwise_lattice_stabilizer_in_degree_5() {
        let spec = case_spec(CaseId::Deg5);
        let by_triples = gamma6().stabilizer_of_triple_set(&spec.triples);
        let by_lattice = gamma6().setwise_lattice_stabilizer(&spec.sublattice).unwrap();
        assert_eq!(by_triples, by_lattice);
    }

    #[test]
    fn boundary_divisor_totals() {
        let b3 = boundary_divisors(CaseId::Deg3).unwrap();
        assert_eq!(b3.toric, BTreeMap::from([(DivisorType::C, 1)]));
        assert_eq!(b3.total_divisors, 2);

        let b4a = boundary_divisors(CaseId::Deg4a).unwrap();
        assert_eq!(b4a.toric, BTreeMap::from([(DivisorType::D, 1)]));
        assert_eq!(b4a.total_divisors, 1);
        assert_eq!(b4a.contracted_points.len(), 1);

        let b4b = boundary_divisors(CaseId::Deg4b).unwrap();
        assert_eq!(
            b4b.toric,
            BTreeMap::from([(DivisorType::B, 1), (DivisorType::C, 1), (DivisorType::D, 1)])
        );
        assert_eq!(b4b.total_divisors, 5);
        assert_eq!(b4b.excluded.len(), 1);

        let b5 = boundary_divisors(CaseId::Deg5).unwrap();
        assert_eq!(
            b5.toric,
            BTreeMap::from([(DivisorType::B, 1), (DivisorType::C, 1), (DivisorType::D, 1)])
        );
        assert_eq!(b5.recorded[&DivisorType::H], 2);
        assert_eq!(b5.total_divisors, 7);
    }

    #[test]
    fn no_type_a_ray_survives_any_restriction() {
        for id in CaseId::ALL {
            let spec = case_spec(id);
            let rays = case_rays(&spec).unwrap();
            assert_eq!(rays.len(), spec.expected.ray_count, "{id}");
            assert!(rays.iter().all(|(_, t)| *t != RayType::A), "{id}");
        }
    }
}
