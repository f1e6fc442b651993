//! Simple closed curves as transverse paths.
//!
//! A curve is stored as the cyclic sequence of its crossings with the
//! 1-skeleton of the fixed complex. A crossing is a directed edge `d`:
//! the curve crosses `edge(d)` moving from the face on the left of `d`
//! to the face on its right. Between consecutive crossings the curve
//! runs as a chord through the shared face.
//!
//! The sequence alone determines the embedded curve up to isotopy: the
//! relative order of parallel strands along an edge is forced at the
//! point where the strands diverge, and the overlay engine
//! ([`crate::overlay`]) reconstructs those orders whenever an operation
//! needs them. A sequence whose forced orders would make two strands of
//! the same curve cross is rejected as [`CurveError::NotSimple`].

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::overlay;
use crate::surface::{CellularMap, CurveName, Dir, SurfaceModel, EDGE_NAMES};

/// A simple closed curve transverse to the 1-skeleton.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransversePath {
    crossings: Vec<Dir>,
}

impl TransversePath {
    /// Builds a path from a crossing sequence, checking that consecutive
    /// crossings share a face (cyclically).
    pub fn new(model: &SurfaceModel, crossings: Vec<Dir>) -> Result<Self, CurveError> {
        if crossings.is_empty() {
            return Err(CurveError::Empty);
        }
        for i in 0..crossings.len() {
            let j = (i + 1) % crossings.len();
            if model.right(crossings[i]) != model.left(crossings[j]) {
                return Err(CurveError::Disconnected(i, j));
            }
        }
        Ok(TransversePath { crossings })
    }

    pub(crate) fn from_vec_unchecked(crossings: Vec<Dir>) -> Self {
        TransversePath { crossings }
    }

    pub fn crossings(&self) -> &[Dir] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The same curve with reversed orientation.
    pub fn reversed(&self) -> TransversePath {
        TransversePath {
            crossings: self.crossings.iter().rev().map(|d| d.rev()).collect(),
        }
    }

    /// Number of crossings with the edges of a named curve's cycle.
    pub fn crossings_with_cycle(&self, model: &SurfaceModel, name: CurveName) -> usize {
        self.crossings
            .iter()
            .filter(|d| model.edge_curve[d.edge()] == name)
            .count()
    }

    /// Removes spurs (a crossing immediately undone through the same edge)
    /// until none remain, including across the cyclic seam. Returns `false`
    /// if the curve vanishes.
    pub(crate) fn remove_spurs(&mut self) -> bool {
        let mut stack: Vec<Dir> = Vec::with_capacity(self.crossings.len());
        for &d in &self.crossings {
            if stack.last() == Some(&d.rev()) {
                stack.pop();
            } else {
                stack.push(d);
            }
        }
        let mut lo = 0usize;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo] == stack[hi - 1].rev() {
            lo += 1;
            hi -= 1;
        }
        self.crossings = stack[lo..hi].to_vec();
        !self.crossings.is_empty()
    }

    /// Cyclic rotation so that the lexicographically least crossing comes
    /// first; gives sequences a canonical phase for comparisons.
    pub fn canonical_rotation(&self) -> TransversePath {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let n = self.crossings.len();
        let best = (0..n)
            .min_by_key(|&s| (0..n).map(|k| self.crossings[(s + k) % n].0).collect::<Vec<_>>())
            .unwrap();
        TransversePath {
            crossings: (0..n).map(|k| self.crossings[(best + k) % n]).collect(),
        }
    }
}

/// Parallel transverse representative of a named curve's edge cycle, pushed
/// off to the left of the cycle's reference orientation.
///
/// At each vertex of the cycle the push-off crosses the fan of edges on the
/// chosen side; alongside each edge it runs through the adjacent face.
pub fn pushoff(model: &SurfaceModel, cycle: &[Dir], left_side: bool) -> TransversePath {
    let mut crossings = Vec::new();
    let k = cycle.len();
    for j in 0..k {
        let incoming = cycle[j];
        let outgoing = cycle[(j + 1) % k];
        crossings.extend(fan_crossings(model, incoming, outgoing, left_side));
    }
    TransversePath::new(model, crossings).expect("push-off is a valid transverse path")
}

/// Crossings made by a strand that travels alongside `incoming` into the
/// vertex `head(incoming)` and leaves alongside `outgoing`, passing the
/// vertex on the given side.
pub(crate) fn fan_crossings(
    model: &SurfaceModel,
    incoming: Dir,
    outgoing: Dir,
    left_side: bool,
) -> Vec<Dir> {
    debug_assert_eq!(model.head(incoming), model.tail(outgoing));
    if left_side {
        // Ends strictly CCW between the outgoing edge and the reversed
        // incoming edge lie to the traveler's left; they are crossed in
        // clockwise order, each from its own left.
        let mut fan = model.ccw_between(outgoing, incoming.rev());
        fan.reverse();
        fan
    } else {
        model
            .ccw_between(incoming.rev(), outgoing)
            .into_iter()
            .map(|d| d.rev())
            .collect()
    }
}

/// Relabels a path by a cellular symmetry. Orientation-preserving maps send
/// left-to-right crossings to left-to-right crossings, so the image of each
/// crossing is just the image of its directed edge.
pub fn apply_cellular(model: &SurfaceModel, map: &CellularMap, p: &TransversePath) -> TransversePath {
    let crossings = p.crossings.iter().map(|&d| map.map_dir(d)).collect();
    TransversePath::new(model, crossings).expect("cellular image is a valid transverse path")
}

// ---------------------------------------------------------------------------
// Curve JSON schema
// ---------------------------------------------------------------------------

/// Serialized crossing: `side` is `"L"` when the curve crosses the edge
/// coming from the edge's left (the reference direction's left face).
#[derive(Serialize, Deserialize)]
pub struct CrossingJson {
    pub edge: String,
    pub side: char,
}

#[derive(Serialize, Deserialize)]
pub struct CurveJson {
    pub crossings: Vec<CrossingJson>,
}

pub fn to_json(p: &TransversePath) -> CurveJson {
    CurveJson {
        crossings: p
            .crossings
            .iter()
            .map(|d| CrossingJson {
                edge: EDGE_NAMES[d.edge()].to_string(),
                side: if d.is_forward() { 'L' } else { 'R' },
            })
            .collect(),
    }
}

pub fn from_json(model: &SurfaceModel, j: &CurveJson) -> Result<TransversePath, CurveError> {
    let mut crossings = Vec::with_capacity(j.crossings.len());
    for c in &j.crossings {
        let e = model
            .edge_by_name(&c.edge)
            .ok_or_else(|| CurveError::UnknownEdge(c.edge.clone()))?;
        let d = match c.side {
            'L' | 'l' => Dir::forward(e),
            'R' | 'r' => Dir::backward(e),
            other => return Err(CurveError::UnknownEdge(format!("{}:{}", c.edge, other))),
        };
        crossings.push(d);
    }
    TransversePath::new(model, crossings)
}

// ---------------------------------------------------------------------------
// Tautening
// ---------------------------------------------------------------------------

/// Puts `p` in minimal position with respect to every named curve.
///
/// Spur removal is unconditional; bigons against each of the seven edge
/// cycles are then removed innermost-first (each removal is certified by a
/// disk check in the overlay engine). The passes repeat until no cycle
/// admits a bigon. Returns [`CurveError::NullHomotopic`] if the curve
/// reduces to nothing.
pub fn taut(model: &SurfaceModel, p: &TransversePath) -> Result<TransversePath, CurveError> {
    let mut cur = p.clone();
    if !cur.remove_spurs() {
        return Err(CurveError::NullHomotopic);
    }
    // Reject non-embeddable input up front.
    overlay::check_simple(model, &cur)?;
    loop {
        let mut changed = false;
        for name in CurveName::ALL {
            let (next, _count, was_changed) =
                overlay::minimize_vs_cycle(model, &cur, name)?;
            cur = next;
            changed |= was_changed;
            if !cur.remove_spurs() {
                return Err(CurveError::NullHomotopic);
            }
        }
        if !changed {
            break;
        }
    }
    Ok(cur)
}

/// Geometric intersection number of two taut curves: the minimal crossing
/// count over both isotopy classes, computed by overlaying the curves and
/// removing certified bigons until none remain.
pub fn geometric_intersection(
    model: &SurfaceModel,
    p: &TransversePath,
    q: &TransversePath,
) -> Result<u64, CurveError> {
    let (_moved, count) = overlay::minimize_vs_path(model, p, q)?;
    Ok(count as u64)
}

/// Signed crossing sum of two oriented curves. Isotopy-invariant, so no
/// bigon removal is needed; excess crossings cancel in pairs.
pub fn algebraic_intersection(
    model: &SurfaceModel,
    p: &TransversePath,
    q: &TransversePath,
) -> Result<i64, CurveError> {
    overlay::signed_crossings(model, p, q)
}

/// Geometric intersection with a named curve, computed against its edge
/// cycle.
pub fn intersection_with_named(
    model: &SurfaceModel,
    p: &TransversePath,
    name: CurveName,
) -> Result<u64, CurveError> {
    let (_moved, count, _) = overlay::minimize_vs_cycle(model, p, name)?;
    Ok(count as u64)
}

/// Minimal-position representative of `p` against the cycle of `name`,
/// together with the intersection number.
pub fn minimal_vs_named(
    model: &SurfaceModel,
    p: &TransversePath,
    name: CurveName,
) -> Result<(TransversePath, u64), CurveError> {
    let (moved, count, _) = overlay::minimize_vs_cycle(model, p, name)?;
    Ok((moved, count as u64))
}

/// Strand order of `p` along each edge (crossing indices sorted along the
/// edge's forward direction); used by rendering.
pub fn strand_orders(
    model: &SurfaceModel,
    p: &TransversePath,
) -> Result<Vec<Vec<usize>>, CurveError> {
    overlay::strand_orders(model, p)
}

// ---------------------------------------------------------------------------
// Triples, homology, separation
// ---------------------------------------------------------------------------

/// Geometric intersection counts with A, B, C.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IntersectionTriple {
    pub n_a: u64,
    pub n_b: u64,
    pub n_c: u64,
}

impl IntersectionTriple {
    pub fn all_even(&self) -> bool {
        self.n_a % 2 == 0 && self.n_b % 2 == 0 && self.n_c % 2 == 0
    }
}

impl std::fmt::Display for IntersectionTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n_a, self.n_b, self.n_c)
    }
}

/// Geometric intersections of a taut curve with A, B, C.
pub fn intersection_triple(
    model: &SurfaceModel,
    p: &TransversePath,
) -> Result<IntersectionTriple, CurveError> {
    Ok(IntersectionTriple {
        n_a: intersection_with_named(model, p, CurveName::A)?,
        n_b: intersection_with_named(model, p, CurveName::B)?,
        n_c: intersection_with_named(model, p, CurveName::C)?,
    })
}

/// Homology class of an oriented curve in the ordered basis [B],[Z],[C],[Y].
pub fn homology_class(
    model: &SurfaceModel,
    p: &TransversePath,
) -> Result<[i64; 4], CurveError> {
    crate::mcg::homology_vector(model, p)
}

/// A curve is separating exactly when its mod-2 homology class vanishes,
/// i.e. its algebraic pairing with each basis curve is even.
pub fn is_separating(model: &SurfaceModel, p: &TransversePath) -> Result<bool, CurveError> {
    let v = crate::mcg::homology_vector(model, p)?;
    Ok(v.iter().all(|x| x % 2 == 0))
}

// ---------------------------------------------------------------------------
// Arc census
// ---------------------------------------------------------------------------

/// Arc types of a separating curve against the pants decomposition A∪B∪C.
/// Index order: (a,a), (b,b), (c,c), (a,b), (a,c), (b,c).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ArcCensus {
    pub side_one: [u64; 6],
    pub side_two: [u64; 6],
}

pub const ARC_TYPE_NAMES: [&str; 6] = ["aa", "bb", "cc", "ab", "ac", "bc"];

fn arc_type_index(u: CurveName, v: CurveName) -> usize {
    use CurveName::*;
    match (u.min(v), u.max(v)) {
        (A, A) => 0,
        (B, B) => 1,
        (C, C) => 2,
        (A, B) => 3,
        (A, C) => 4,
        (B, C) => 5,
        other => unreachable!("not a pants arc type: {other:?}"),
    }
}

impl ArcCensus {
    pub fn total(&self, side: usize) -> u64 {
        let s = if side == 0 { &self.side_one } else { &self.side_two };
        s.iter().sum()
    }

    fn present(&self, idx: usize) -> bool {
        self.side_one[idx] + self.side_two[idx] > 0
    }

    /// First violated coexistence exclusion, if any.
    pub fn table_violation(&self) -> Option<(&'static str, &'static str)> {
        const EXCLUSIONS: [(usize, usize); 10] = [
            (0, 1),
            (0, 5),
            (0, 2),
            (1, 0),
            (1, 2),
            (1, 4),
            (2, 0),
            (2, 1),
            (2, 3),
            (3, 2),
        ];
        for (have, banned) in EXCLUSIONS {
            if self.present(have) && self.present(banned) {
                return Some((ARC_TYPE_NAMES[have], ARC_TYPE_NAMES[banned]));
            }
        }
        // (a,c) excludes (b,b); (b,c) excludes (a,a) — covered above by
        // symmetry of the pairs listed.
        None
    }

    /// A non-standard reducing curve must carry an (a,a), (b,b), (c,c) or
    /// (b,c) arc.
    pub fn has_required_arc(&self) -> bool {
        self.present(0) || self.present(1) || self.present(2) || self.present(5)
    }

    /// Endpoint bookkeeping per side: each (x,x) arc uses two endpoints on
    /// the curve X, each mixed arc one.
    pub fn endpoint_counts(&self, side: usize) -> (u64, u64, u64) {
        let s = if side == 0 { &self.side_one } else { &self.side_two };
        (
            2 * s[0] + s[3] + s[4],
            2 * s[1] + s[3] + s[5],
            2 * s[2] + s[4] + s[5],
        )
    }
}

/// Classifies the arcs of a separating curve in the two pants cut out by
/// A∪B∪C. The curve is first put in minimal position with each of A, B, C
/// (the three passes do not disturb one another because the pants curves are
/// disjoint).
pub fn arc_census(model: &SurfaceModel, p: &TransversePath) -> Result<ArcCensus, CurveError> {
    if !is_separating(model, p)? {
        return Err(CurveError::NotSeparating);
    }
    let mut cur = p.clone();
    for name in [CurveName::A, CurveName::B, CurveName::C] {
        cur = overlay::minimize_vs_cycle(model, &cur, name)?.0;
    }
    let is_pants_curve = |d: Dir| {
        matches!(
            model.edge_curve[d.edge()],
            CurveName::A | CurveName::B | CurveName::C
        )
    };
    let crossings = cur.crossings();
    let hits: Vec<usize> = (0..crossings.len())
        .filter(|&i| is_pants_curve(crossings[i]))
        .collect();
    let mut census = ArcCensus::default();
    if hits.is_empty() {
        return Ok(census);
    }
    for w in 0..hits.len() {
        let i = hits[w];
        let j = hits[(w + 1) % hits.len()];
        let side = model.pants_side[model.right(crossings[i])];
        let idx = arc_type_index(
            model.edge_curve[crossings[i].edge()],
            model.edge_curve[crossings[j].edge()],
        );
        if side == 0 {
            census.side_one[idx] += 1;
        } else {
            census.side_two[idx] += 1;
        }
    }
    Ok(census)
}

// ---------------------------------------------------------------------------
// Fingerprints
// ---------------------------------------------------------------------------

/// The fixed probe family: the seven named curves, the twisted duals
/// tA(Y), tC(Y), tB(Z), and the collar probe tP(X). The twisted probes
/// separate twist directions that bare intersection numbers cannot see;
/// tP(X) in particular distinguishes opposite powers of the half twist,
/// which agree on every other probe.
pub fn probe_paths(model: &SurfaceModel) -> &'static Vec<TransversePath> {
    use std::sync::OnceLock;
    static PROBES: OnceLock<Vec<TransversePath>> = OnceLock::new();
    let _ = model;
    PROBES.get_or_init(|| {
        let m = crate::surface::build_standard_model();
        let named = |n: CurveName| pushoff(m, m.curve_cycle(n), true);
        let mut probes: Vec<TransversePath> = CurveName::ALL.iter().map(|&n| named(n)).collect();
        let twisted = [
            (CurveName::A, CurveName::Y),
            (CurveName::C, CurveName::Y),
            (CurveName::B, CurveName::Z),
            (CurveName::P, CurveName::X),
        ];
        for (about, target) in twisted {
            let img = crate::mcg::apply_twist(m, about, 1, &named(target))
                .expect("twisted probe");
            probes.push(taut(m, &img).expect("twisted probe is essential"));
        }
        probes
    })
}

pub const PROBE_NAMES: [&str; 11] = [
    "A", "B", "C", "X", "Y", "Z", "P", "tA(Y)", "tC(Y)", "tB(Z)", "tP(X)",
];

/// Isotopy-class fingerprint: geometric intersection numbers with the probe
/// family. Equal for isotopic curves.
pub fn fingerprint(model: &SurfaceModel, p: &TransversePath) -> Result<Vec<u64>, CurveError> {
    let mut out = Vec::with_capacity(11);
    for name in CurveName::ALL {
        out.push(intersection_with_named(model, p, name)?);
    }
    for probe in probe_paths(model).iter().skip(7) {
        out.push(geometric_intersection(model, p, probe)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_standard_model;

    #[test]
    fn pushoffs_are_valid_and_match_crossing_pattern() {
        let m = build_standard_model();
        for name in CurveName::ALL {
            for side in [true, false] {
                let p = pushoff(m, m.curve_cycle(name), side);
                assert!(!p.is_empty(), "{name:?} push-off nonempty");
            }
        }
        // The left push-off of A crosses P twice and Y, Z once each.
        let a = pushoff(m, m.curve_cycle(CurveName::A), true);
        let count = |target: CurveName| a.crossings_with_cycle(m, target);
        assert_eq!(count(CurveName::P), 2);
        assert_eq!(count(CurveName::Y), 1);
        assert_eq!(count(CurveName::Z), 1);
        assert_eq!(count(CurveName::B), 0);
        assert_eq!(count(CurveName::C), 0);
        assert_eq!(count(CurveName::X), 0);
        assert_eq!(count(CurveName::A), 0);
    }

    #[test]
    fn spur_removal_cancels_inserted_spur() {
        let m = build_standard_model();
        let p = pushoff(m, m.curve_cycle(CurveName::B), true);
        let mut crossings = p.crossings().to_vec();
        // Insert a spur after the first crossing: dart across the next
        // face's first boundary edge and back.
        let f = m.right(crossings[0]);
        let d = m.faces[f][0];
        crossings.insert(1, d.rev());
        crossings.insert(1, d);
        let mut spurred = TransversePath::new(m, crossings).unwrap();
        assert!(spurred.remove_spurs());
        assert_eq!(
            spurred.canonical_rotation().crossings(),
            p.canonical_rotation().crossings()
        );
    }

    #[test]
    fn reversal_is_an_involution() {
        let m = build_standard_model();
        let p = pushoff(m, m.curve_cycle(CurveName::X), false);
        assert_eq!(p.reversed().reversed(), p);
    }
}
