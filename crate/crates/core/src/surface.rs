//! The fixed combinatorial model of the genus-2 surface.
//!
//! Seven curves live on the standard genus-2 splitting surface: three
//! pairwise-disjoint tube meridians `A`, `B`, `C` whose union cuts the
//! surface into two pairs of pants, three hole curves `X`, `Y`, `Z`
//! (`X` crosses `B` and `C` once each, `Y` crosses `A` and `C`, `Z`
//! crosses `A` and `B`), and the standard reducing curve `P`, which
//! crosses `A` and `X` twice each and bounds the two one-holed-torus
//! summands: `B`, `Z` on one side, `C`, `Y` on the other.
//!
//! Drawn in minimal position, these curves induce a cell structure with
//! 10 vertices (the pairwise crossings), 20 edges (the arcs between
//! them) and 8 pentagonal faces. That complex is frozen below as static
//! data, together with the two rigid symmetries of the picture:
//!
//! * `alpha` — the hyperelliptic involution. It fixes all six
//!   non-separating curves setwise, fixes the six meridian/hole
//!   crossing points (the Weierstrass points of the model), and swaps
//!   the two pairs of pants.
//! * `nu` — the order-two rotation about the axis through the tips.
//!   It fixes `A` and `X` setwise, exchanges `B` with `C` and `Y` with
//!   `Z`, and preserves `P` while swapping the two summands.
//!
//! Every derived quantity (face list, adjacency, parallel transverse
//! representatives of the curves) is computed from the rotation system
//! at construction time and re-checked by [`validate_model`].

use std::fmt;

use serde::Serialize;

/// Index of a vertex of the cell complex (a crossing of two named curves).
pub type VertexId = usize;
/// Index of an undirected edge (an arc of a named curve between crossings).
pub type EdgeId = usize;
/// Index of a face (a complementary pentagon).
pub type FaceId = usize;

pub const NUM_VERTICES: usize = 10;
pub const NUM_EDGES: usize = 20;
pub const NUM_FACES: usize = 8;

/// A directed edge, encoded as `2*edge + (0|1)`; the odd value is the
/// reversal of the even one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dir(pub u8);

impl Dir {
    #[inline]
    pub fn forward(e: EdgeId) -> Dir {
        Dir((2 * e) as u8)
    }
    #[inline]
    pub fn backward(e: EdgeId) -> Dir {
        Dir((2 * e + 1) as u8)
    }
    #[inline]
    pub fn edge(self) -> EdgeId {
        (self.0 / 2) as usize
    }
    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }
    #[inline]
    pub fn rev(self) -> Dir {
        Dir(self.0 ^ 1)
    }
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_forward() {
            write!(f, "+{}", EDGE_NAMES[self.edge()])
        } else {
            write!(f, "-{}", EDGE_NAMES[self.edge()])
        }
    }
}

/// The seven named curves.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
pub enum CurveName {
    A,
    B,
    C,
    X,
    Y,
    Z,
    P,
}

impl CurveName {
    pub const ALL: [CurveName; 7] = [
        CurveName::A,
        CurveName::B,
        CurveName::C,
        CurveName::X,
        CurveName::Y,
        CurveName::Z,
        CurveName::P,
    ];

    pub fn letter(self) -> char {
        match self {
            CurveName::A => 'A',
            CurveName::B => 'B',
            CurveName::C => 'C',
            CurveName::X => 'X',
            CurveName::Y => 'Y',
            CurveName::Z => 'Z',
            CurveName::P => 'P',
        }
    }

    pub fn from_letter(c: char) -> Option<CurveName> {
        match c.to_ascii_uppercase() {
            'A' => Some(CurveName::A),
            'B' => Some(CurveName::B),
            'C' => Some(CurveName::C),
            'X' => Some(CurveName::X),
            'Y' => Some(CurveName::Y),
            'Z' => Some(CurveName::Z),
            'P' => Some(CurveName::P),
            _ => None,
        }
    }
}

/// The two cellular symmetries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum SymName {
    Alpha,
    Nu,
}

pub const VERTEX_NAMES: [&str; NUM_VERTICES] = [
    "AZ", "AY", "AP1", "AP2", "BZ", "BX", "CY", "CX", "XP1", "XP2",
];

pub const EDGE_NAMES: [&str; NUM_EDGES] = [
    "a1", "a2", "a3", "a4", "b1", "b2", "c1", "c2", "x1", "x2", "x3", "x4", "y1", "y2", "z1",
    "z2", "p1", "p2", "p3", "p4",
];

/// (tail, head) of each edge, oriented along its curve's reference direction.
const EDGE_ENDS: [(VertexId, VertexId); NUM_EDGES] = [
    (0, 2), // a1  AZ -> AP1
    (2, 1), // a2  AP1 -> AY
    (1, 3), // a3  AY -> AP2
    (3, 0), // a4  AP2 -> AZ
    (5, 4), // b1  BX -> BZ (front half)
    (4, 5), // b2  BZ -> BX (back half)
    (6, 7), // c1  CY -> CX (front half)
    (7, 6), // c2  CX -> CY (back half)
    (5, 9), // x1  BX -> XP2
    (9, 7), // x2  XP2 -> CX
    (7, 8), // x3  CX -> XP1
    (8, 5), // x4  XP1 -> BX
    (1, 6), // y1  AY -> CY
    (6, 1), // y2  CY -> AY
    (0, 4), // z1  AZ -> BZ
    (4, 0), // z2  BZ -> AZ
    (2, 9), // p1  AP1 -> XP2
    (9, 3), // p2  XP2 -> AP2
    (3, 8), // p3  AP2 -> XP1
    (8, 2), // p4  XP1 -> AP1
];

/// Rotation system: at each vertex the four away-pointing directed edges in
/// counterclockwise order around the outward normal. Transcribed from the
/// tube-and-pants picture; two curves cross transversally at every vertex, so
/// the two pairs alternate.
const ROTATIONS: [[u8; 4]; NUM_VERTICES] = [
    [0, 28, 7, 31],   // AZ : +a1 +z1 -a4 -z2
    [3, 27, 4, 24],   // AY : -a2 -y2 +a3 +y1
    [32, 1, 39, 2],   // AP1: +p1 -a1 -p4 +a2
    [35, 5, 36, 6],   // AP2: -p2 -a3 +p3 +a4
    [9, 30, 10, 29],  // BZ : -b1 +z2 +b2 -z1
    [8, 16, 11, 23],  // BX : +b1 +x1 -b2 -x4
    [12, 25, 15, 26], // CY : +c1 -y1 -c2 +y2
    [13, 20, 14, 19], // CX : -c1 +x3 +c2 -x2
    [22, 37, 21, 38], // XP1: +x4 -p3 -x3 +p4
    [17, 33, 18, 34], // XP2: -x1 -p1 +x2 +p2
];

/// Edge cycles of the named curves (reference orientations).
const CURVE_CYCLES: [&[EdgeId]; 7] = [
    &[0, 1, 2, 3],   // A
    &[4, 5],         // B
    &[6, 7],         // C
    &[8, 9, 10, 11], // X
    &[12, 13],       // Y
    &[14, 15],       // Z
    &[16, 17, 18, 19], // P
];

/// `alpha` on forward directed edges (hyperelliptic involution).
const ALPHA_EDGE: [u8; NUM_EDGES] = [
    7, 5, 3, 1, // a1->-a4, a2->-a3, a3->-a2, a4->-a1
    11, 9, // b1->-b2, b2->-b1
    15, 13, // c1->-c2, c2->-c1
    23, 21, 19, 17, // x1->-x4, x2->-x3, x3->-x2, x4->-x1
    27, 25, // y1->-y2, y2->-y1
    31, 29, // z1->-z2, z2->-z1
    36, 38, 32, 34, // p1->+p3, p2->+p4, p3->+p1, p4->+p2
];

/// `nu` on forward directed edges (order-two rotation).
const NU_EDGE: [u8; NUM_EDGES] = [
    4, 6, 0, 2, // a1->+a3, a2->+a4, a3->+a1, a4->+a2
    14, 12, // b1->+c2, b2->+c1
    10, 8, // c1->+b2, c2->+b1
    19, 17, 23, 21, // x1->-x2, x2->-x1, x3->-x4, x4->-x3
    28, 30, // y1->+z1, y2->+z2
    24, 26, // z1->+y1, z2->+y2
    35, 33, 39, 37, // p1->-p2, p2->-p1, p3->-p4, p4->-p3
];

const ALPHA_VERTEX: [VertexId; NUM_VERTICES] = [0, 1, 3, 2, 4, 5, 6, 7, 9, 8];
const NU_VERTEX: [VertexId; NUM_VERTICES] = [1, 0, 3, 2, 6, 7, 4, 5, 8, 9];

/// A cellular automorphism of the complex: compatible permutations of
/// vertices and directed edges (the face permutation is derived).
#[derive(Clone, Debug)]
pub struct CellularMap {
    pub name: SymName,
    pub vertex_map: [VertexId; NUM_VERTICES],
    /// Image of each directed edge, indexed by `Dir::index()`.
    pub dir_map: [Dir; 2 * NUM_EDGES],
}

impl CellularMap {
    fn from_tables(name: SymName, vmap: [VertexId; NUM_VERTICES], fwd: [u8; NUM_EDGES]) -> Self {
        let mut dir_map = [Dir(0); 2 * NUM_EDGES];
        for e in 0..NUM_EDGES {
            let img = Dir(fwd[e]);
            dir_map[Dir::forward(e).index()] = img;
            dir_map[Dir::backward(e).index()] = img.rev();
        }
        CellularMap {
            name,
            vertex_map: vmap,
            dir_map,
        }
    }

    #[inline]
    pub fn map_dir(&self, d: Dir) -> Dir {
        self.dir_map[d.index()]
    }

    #[inline]
    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }
}

/// The fixed cell complex with its named curves and symmetries.
///
/// Immutable after construction; all operations elsewhere borrow it.
pub struct SurfaceModel {
    /// (tail, head) per edge.
    pub edge_ends: [(VertexId, VertexId); NUM_EDGES],
    /// Away-pointing directed edges, CCW per vertex.
    pub rotations: [[Dir; 4]; NUM_VERTICES],
    /// Faces as cyclic words of directed edges (face lies on the left).
    pub faces: Vec<Vec<Dir>>,
    /// Face on the left of each directed edge.
    pub left_face: [FaceId; 2 * NUM_EDGES],
    /// Boundary slot of each directed edge within its left face.
    pub slot_in_left_face: [usize; 2 * NUM_EDGES],
    /// Edge cycles of the named curves.
    pub curve_cycles: [Vec<Dir>; 7],
    /// Which named curve owns each edge.
    pub edge_curve: [CurveName; NUM_EDGES],
    pub alpha: CellularMap,
    pub nu: CellularMap,
    /// Which pair of pants of the A∪B∪C decomposition each face lies in.
    pub pants_side: [u8; NUM_FACES],
    /// Which one-holed-torus summand of the P decomposition each face lies
    /// in: 0 for the B,Z side, 1 for the C,Y side.
    pub summand_side: [u8; NUM_FACES],
}

impl SurfaceModel {
    #[inline]
    pub fn head(&self, d: Dir) -> VertexId {
        let (t, h) = self.edge_ends[d.edge()];
        if d.is_forward() {
            h
        } else {
            t
        }
    }

    #[inline]
    pub fn tail(&self, d: Dir) -> VertexId {
        self.head(d.rev())
    }

    #[inline]
    pub fn left(&self, d: Dir) -> FaceId {
        self.left_face[d.index()]
    }

    #[inline]
    pub fn right(&self, d: Dir) -> FaceId {
        self.left_face[d.rev().index()]
    }

    /// Away-pointing representative of `d` at its tail.
    #[inline]
    fn away_at_tail(&self, d: Dir) -> Dir {
        d
    }

    /// Position of away-end `d` in the rotation at its tail vertex.
    fn rotation_pos(&self, d: Dir) -> usize {
        let v = self.tail(d);
        self.rotations[v]
            .iter()
            .position(|&x| x == d)
            .expect("directed edge present in rotation at its tail")
    }

    /// The away-ends strictly counterclockwise between `from` and `to` at
    /// their common vertex.
    pub fn ccw_between(&self, from: Dir, to: Dir) -> Vec<Dir> {
        let v = self.tail(from);
        debug_assert_eq!(v, self.tail(to));
        let rot = &self.rotations[v];
        let i = self.rotation_pos(from);
        let mut out = Vec::new();
        let mut k = (i + 1) % 4;
        while rot[k] != to {
            out.push(rot[k]);
            k = (k + 1) % 4;
        }
        out
    }

    pub fn curve_cycle(&self, name: CurveName) -> &[Dir] {
        &self.curve_cycles[name as usize]
    }

    pub fn sym(&self, s: SymName) -> &CellularMap {
        match s {
            SymName::Alpha => &self.alpha,
            SymName::Nu => &self.nu,
        }
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        EDGE_NAMES.iter().position(|&n| n == name)
    }
}

fn trace_faces(
    edge_ends: &[(VertexId, VertexId); NUM_EDGES],
    rotations: &[[Dir; 4]; NUM_VERTICES],
) -> Vec<Vec<Dir>> {
    let head = |d: Dir| -> VertexId {
        let (t, h) = edge_ends[d.edge()];
        if d.is_forward() {
            h
        } else {
            t
        }
    };
    // next(d) = ccw-predecessor of rev(d) in the rotation at head(d);
    // this traverses each face with the face on the left.
    let next = |d: Dir| -> Dir {
        let v = head(d);
        let rot = &rotations[v];
        let i = rot
            .iter()
            .position(|&x| x == d.rev())
            .expect("reversal present at head");
        rot[(i + 3) % 4]
    };
    let mut seen = [false; 2 * NUM_EDGES];
    let mut faces = Vec::new();
    for start in 0..2 * NUM_EDGES {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = Dir(start as u8);
        loop {
            seen[d.index()] = true;
            cycle.push(d);
            d = next(d);
            if d.index() == start {
                break;
            }
        }
        faces.push(cycle);
    }
    faces
}

fn build() -> SurfaceModel {
    let mut rotations = [[Dir(0); 4]; NUM_VERTICES];
    for v in 0..NUM_VERTICES {
        for k in 0..4 {
            rotations[v][k] = Dir(ROTATIONS[v][k]);
        }
    }
    let faces = trace_faces(&EDGE_ENDS, &rotations);
    assert_eq!(faces.len(), NUM_FACES, "curve system must fill the surface");

    let mut left_face = [usize::MAX; 2 * NUM_EDGES];
    let mut slot_in_left_face = [usize::MAX; 2 * NUM_EDGES];
    for (f, cycle) in faces.iter().enumerate() {
        for (s, d) in cycle.iter().enumerate() {
            left_face[d.index()] = f;
            slot_in_left_face[d.index()] = s;
        }
    }

    let curve_cycles: [Vec<Dir>; 7] = std::array::from_fn(|i| {
        CURVE_CYCLES[i].iter().map(|&e| Dir::forward(e)).collect()
    });
    let mut edge_curve = [CurveName::A; NUM_EDGES];
    for name in CurveName::ALL {
        for &e in CURVE_CYCLES[name as usize] {
            edge_curve[e] = name;
        }
    }

    let mut model = SurfaceModel {
        edge_ends: EDGE_ENDS,
        rotations,
        faces,
        left_face,
        slot_in_left_face,
        curve_cycles,
        edge_curve,
        alpha: CellularMap::from_tables(SymName::Alpha, ALPHA_VERTEX, ALPHA_EDGE),
        nu: CellularMap::from_tables(SymName::Nu, NU_VERTEX, NU_EDGE),
        pants_side: [0; NUM_FACES],
        summand_side: [0; NUM_FACES],
    };
    let abc: Vec<EdgeId> = (0..8).collect();
    let comps = face_components(&model, &abc);
    assert_eq!(comps.len(), 2, "A∪B∪C must cut into two pants");
    for &f in &comps[1] {
        model.pants_side[f] = 1;
    }
    let pcut: Vec<EdgeId> = vec![16, 17, 18, 19];
    let comps = face_components(&model, &pcut);
    assert_eq!(comps.len(), 2, "P must cut into two summands");
    // Side 0 carries B and Z.
    let b_face = model.left(Dir::forward(4));
    let side_of_b = usize::from(!comps[0].contains(&b_face));
    for (ci, comp) in comps.iter().enumerate() {
        let side = if ci == side_of_b { 0u8 } else { 1u8 };
        for &f in comp {
            model.summand_side[f] = side;
        }
    }
    model
}

/// The fixed model; deterministic, identical on every call.
pub fn build_standard_model() -> &'static SurfaceModel {
    use std::sync::OnceLock;
    static MODEL: OnceLock<SurfaceModel> = OnceLock::new();
    MODEL.get_or_init(build)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// One invariant check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationEntry {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of [`validate_model`]; failures are data, not errors.
#[derive(Debug, Clone, Serialize, Default)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn push(&mut self, check: &str, pass: bool, detail: String) {
        self.entries.push(ValidationEntry {
            check: check.to_string(),
            pass,
            detail,
        });
    }

    pub fn failures(&self) -> Vec<&ValidationEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Components of the face set when gluing is forbidden across `cut` edges.
fn face_components(m: &SurfaceModel, cut: &[EdgeId]) -> Vec<Vec<FaceId>> {
    let is_cut = |e: EdgeId| cut.contains(&e);
    let mut comp = vec![usize::MAX; m.faces.len()];
    let mut n = 0;
    for f0 in 0..m.faces.len() {
        if comp[f0] != usize::MAX {
            continue;
        }
        let mut stack = vec![f0];
        comp[f0] = n;
        while let Some(f) = stack.pop() {
            for &d in &m.faces[f] {
                if is_cut(d.edge()) {
                    continue;
                }
                let g = m.right(d);
                if comp[g] == usize::MAX {
                    comp[g] = n;
                    stack.push(g);
                }
            }
        }
        n += 1;
    }
    let mut out = vec![Vec::new(); n];
    for (f, &c) in comp.iter().enumerate() {
        out[c].push(f);
    }
    out
}

/// Euler characteristic of the bordered piece spanned by `faces` after
/// cutting along `cut` (each cut edge contributes two boundary copies).
fn piece_euler(m: &SurfaceModel, faces: &[FaceId], cut: &[EdgeId]) -> i64 {
    use std::collections::HashSet;
    let fset: HashSet<_> = faces.iter().copied().collect();
    let mut interior_edges = HashSet::new();
    let mut boundary_sides = 0i64;
    for &f in faces {
        for &d in &m.faces[f] {
            if cut.contains(&d.edge()) {
                boundary_sides += 1;
            } else {
                interior_edges.insert(d.edge());
            }
        }
    }
    // Interior vertices: no incident cut edge and all four corners in the
    // piece. Boundary vertex copies cancel against boundary edge copies
    // (the boundary circles alternate the two), so they drop out of chi.
    let mut interior_vertices = 0i64;
    for v in 0..NUM_VERTICES {
        let incident_cut = m.rotations[v].iter().any(|&d| cut.contains(&d.edge()));
        if incident_cut {
            continue;
        }
        let on_piece = m.rotations[v].iter().all(|&d| fset.contains(&m.left(d)));
        if on_piece {
            interior_vertices += 1;
        }
    }
    let _ = boundary_sides;
    interior_vertices - interior_edges.len() as i64 + faces.len() as i64
}

/// Checks every structural invariant of the model and reports per-invariant
/// pass/fail. A passing model has an empty failure list.
pub fn validate_model(m: &SurfaceModel) -> ValidationReport {
    let mut r = ValidationReport::default();

    // Rotation sanity: each vertex sees 4 distinct away-ends whose tails match.
    let mut rotation_ok = true;
    let mut seen = [0u8; 2 * NUM_EDGES];
    for v in 0..NUM_VERTICES {
        for &d in &m.rotations[v] {
            if m.tail(d) != v {
                rotation_ok = false;
            }
            seen[d.index()] += 1;
        }
    }
    rotation_ok &= seen.iter().all(|&c| c == 1);
    r.push(
        "rotation-system",
        rotation_ok,
        "each directed edge appears exactly once, at its tail".into(),
    );

    // Curves cross transversally at vertices: rotations alternate the two
    // incident curves.
    let mut alternating = true;
    for v in 0..NUM_VERTICES {
        let c: Vec<_> = m.rotations[v]
            .iter()
            .map(|d| m.edge_curve[d.edge()])
            .collect();
        if !(c[0] == c[2] && c[1] == c[3] && c[0] != c[1]) {
            alternating = false;
        }
    }
    r.push(
        "transverse-crossings",
        alternating,
        "two curves alternate around every vertex".into(),
    );

    // Euler characteristic V - E + F = -2.
    let chi = NUM_VERTICES as i64 - NUM_EDGES as i64 + m.faces.len() as i64;
    r.push(
        "euler-characteristic",
        chi == -2,
        format!("V - E + F = {chi} (want -2)"),
    );

    // Face words reduced: no directed edge immediately followed by its reversal.
    let mut reduced = true;
    for cycle in &m.faces {
        for i in 0..cycle.len() {
            if cycle[(i + 1) % cycle.len()] == cycle[i].rev() {
                reduced = false;
            }
        }
    }
    r.push("faces-reduced", reduced, "no spur in any face word".into());

    // Each edge borders two distinct faces and each face has distinct edges.
    let mut proper = true;
    for e in 0..NUM_EDGES {
        if m.left(Dir::forward(e)) == m.left(Dir::backward(e)) {
            proper = false;
        }
    }
    for cycle in &m.faces {
        let mut es: Vec<_> = cycle.iter().map(|d| d.edge()).collect();
        es.sort_unstable();
        es.dedup();
        if es.len() != cycle.len() {
            proper = false;
        }
    }
    r.push(
        "faces-proper",
        proper,
        "edges separate two distinct faces; face boundaries repeat no edge".into(),
    );

    // Named curves are closed edge cycles.
    let mut cycles_ok = true;
    for name in CurveName::ALL {
        let cyc = m.curve_cycle(name);
        for i in 0..cyc.len() {
            if m.head(cyc[i]) != m.tail(cyc[(i + 1) % cyc.len()]) {
                cycles_ok = false;
            }
        }
    }
    r.push("curve-cycles-closed", cycles_ok, "named curves are closed edge cycles".into());

    // A, B, C pairwise disjoint (no shared vertex).
    let mut abc_disjoint = true;
    for (i, a) in [CurveName::A, CurveName::B, CurveName::C].iter().enumerate() {
        for b in &[CurveName::A, CurveName::B, CurveName::C][i + 1..] {
            let va: Vec<_> = m.curve_cycle(*a).iter().map(|&d| m.tail(d)).collect();
            let vb: Vec<_> = m.curve_cycle(*b).iter().map(|&d| m.tail(d)).collect();
            if va.iter().any(|v| vb.contains(v)) {
                abc_disjoint = false;
            }
        }
    }
    r.push("abc-disjoint", abc_disjoint, "A, B, C share no vertex".into());

    // Cutting along A∪B∪C yields two components, each a pair of pants (χ=-1).
    let abc: Vec<EdgeId> = [0usize, 1, 2, 3, 4, 5, 6, 7].to_vec();
    let comps = face_components(m, &abc);
    let pants_ok = comps.len() == 2
        && comps
            .iter()
            .all(|c| piece_euler(m, c, &abc) == -1);
    r.push(
        "abc-cuts-two-pants",
        pants_ok,
        format!(
            "A∪B∪C cuts into {} component(s) with χ = {:?}",
            comps.len(),
            comps
                .iter()
                .map(|c| piece_euler(m, c, &abc))
                .collect::<Vec<_>>()
        ),
    );

    // Cutting along P yields two one-holed tori; B,Z on one side, C,Y on the other.
    let pcut: Vec<EdgeId> = vec![16, 17, 18, 19];
    let comps = face_components(m, &pcut);
    let mut summands_ok = comps.len() == 2 && comps.iter().all(|c| piece_euler(m, c, &pcut) == -1);
    if summands_ok {
        let side_of = |e: EdgeId| -> usize {
            let f = m.left(Dir::forward(e));
            comps.iter().position(|c| c.contains(&f)).unwrap()
        };
        let (b, z, c, y) = (side_of(4), side_of(14), side_of(6), side_of(12));
        summands_ok = b == z && c == y && b != c;
    }
    r.push(
        "p-cuts-two-summands",
        summands_ok,
        "P cuts into two one-holed tori, B,Z in one and C,Y in the other".into(),
    );

    // Symmetries are cellular automorphisms: incidence- and rotation-preserving.
    for sym in [&m.alpha, &m.nu] {
        let mut ok = true;
        for e in 0..NUM_EDGES {
            let d = Dir::forward(e);
            let img = sym.map_dir(d);
            if sym.map_vertex(m.tail(d)) != m.tail(img)
                || sym.map_vertex(m.head(d)) != m.head(img)
            {
                ok = false;
            }
        }
        // Orientation-preserving: rotations map to rotations with the same
        // cyclic order.
        for v in 0..NUM_VERTICES {
            let w = sym.map_vertex(v);
            let img: Vec<Dir> = m.rotations[v].iter().map(|&d| sym.map_dir(d)).collect();
            let rot = &m.rotations[w];
            let start = rot.iter().position(|&x| x == img[0]);
            match start {
                None => ok = false,
                Some(s) => {
                    for k in 0..4 {
                        if rot[(s + k) % 4] != img[k] {
                            ok = false;
                        }
                    }
                }
            }
        }
        // Involution.
        for e in 0..2 * NUM_EDGES {
            if sym.map_dir(sym.map_dir(Dir(e as u8))) != Dir(e as u8) {
                ok = false;
            }
        }
        let name = match sym.name {
            SymName::Alpha => "alpha",
            SymName::Nu => "nu",
        };
        r.push(
            &format!("symmetry-{name}-cellular-involution"),
            ok,
            "incidence- and orientation-preserving involution".into(),
        );
    }

    // Action tables on named curves (setwise).
    let image_curve = |sym: &CellularMap, name: CurveName| -> Option<CurveName> {
        let img_edge = sym.map_dir(Dir::forward(m.curve_cycle(name)[0].edge())).edge();
        let target = m.edge_curve[img_edge];
        let img: Vec<EdgeId> = m
            .curve_cycle(name)
            .iter()
            .map(|&d| sym.map_dir(d).edge())
            .collect();
        let mut want: Vec<EdgeId> = m.curve_cycle(target).iter().map(|d| d.edge()).collect();
        let mut got = img;
        got.sort_unstable();
        want.sort_unstable();
        (got == want).then_some(target)
    };
    let mut alpha_table = true;
    for name in CurveName::ALL {
        if image_curve(&m.alpha, name) != Some(name) {
            alpha_table = false;
        }
    }
    r.push(
        "alpha-fixes-all-curves",
        alpha_table,
        "alpha maps each named curve to itself".into(),
    );
    let nu_expect = [
        (CurveName::A, CurveName::A),
        (CurveName::B, CurveName::C),
        (CurveName::C, CurveName::B),
        (CurveName::X, CurveName::X),
        (CurveName::Y, CurveName::Z),
        (CurveName::Z, CurveName::Y),
        (CurveName::P, CurveName::P),
    ];
    let nu_table = nu_expect
        .iter()
        .all(|&(from, to)| image_curve(&m.nu, from) == Some(to));
    r.push(
        "nu-action-table",
        nu_table,
        "nu fixes A, X, P and exchanges B<->C, Y<->Z".into(),
    );

    r
}

// ---------------------------------------------------------------------------
// JSON dump
// ---------------------------------------------------------------------------

/// Serializable snapshot of the model for the `dump-model` CLI command.
#[derive(Serialize)]
pub struct ModelDump {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDump>,
    pub rotations: Vec<Vec<String>>,
    pub faces: Vec<Vec<String>>,
    pub curves: Vec<CurveDump>,
    pub symmetries: Vec<SymDump>,
}

#[derive(Serialize)]
pub struct EdgeDump {
    pub name: String,
    pub tail: String,
    pub head: String,
    pub curve: char,
}

#[derive(Serialize)]
pub struct CurveDump {
    pub name: char,
    pub cycle: Vec<String>,
}

#[derive(Serialize)]
pub struct SymDump {
    pub name: String,
    pub vertex_map: Vec<String>,
    pub edge_map: Vec<String>,
}

pub fn dir_token(d: Dir) -> String {
    if d.is_forward() {
        format!("+{}", EDGE_NAMES[d.edge()])
    } else {
        format!("-{}", EDGE_NAMES[d.edge()])
    }
}

pub fn dump_model(m: &SurfaceModel) -> ModelDump {
    ModelDump {
        vertices: VERTEX_NAMES.iter().map(|s| s.to_string()).collect(),
        edges: (0..NUM_EDGES)
            .map(|e| EdgeDump {
                name: EDGE_NAMES[e].into(),
                tail: VERTEX_NAMES[m.edge_ends[e].0].into(),
                head: VERTEX_NAMES[m.edge_ends[e].1].into(),
                curve: m.edge_curve[e].letter(),
            })
            .collect(),
        rotations: m
            .rotations
            .iter()
            .map(|rot| rot.iter().map(|&d| dir_token(d)).collect())
            .collect(),
        faces: m
            .faces
            .iter()
            .map(|f| f.iter().map(|&d| dir_token(d)).collect())
            .collect(),
        curves: CurveName::ALL
            .iter()
            .map(|&n| CurveDump {
                name: n.letter(),
                cycle: m.curve_cycle(n).iter().map(|&d| dir_token(d)).collect(),
            })
            .collect(),
        symmetries: [&m.alpha, &m.nu]
            .iter()
            .map(|s| SymDump {
                name: match s.name {
                    SymName::Alpha => "alpha".into(),
                    SymName::Nu => "nu".into(),
                },
                vertex_map: (0..NUM_VERTICES)
                    .map(|v| VERTEX_NAMES[s.map_vertex(v)].to_string())
                    .collect(),
                edge_map: (0..NUM_EDGES)
                    .map(|e| dir_token(s.map_dir(Dir::forward(e))))
                    .collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_model_validates() {
        let m = build_standard_model();
        let report = validate_model(m);
        for e in report.failures() {
            eprintln!("FAIL {}: {}", e.check, e.detail);
        }
        assert!(report.all_pass());
    }

    #[test]
    fn eight_pentagonal_faces() {
        let m = build_standard_model();
        assert_eq!(m.faces.len(), 8);
        assert!(m.faces.iter().all(|f| f.len() == 5));
    }

    #[test]
    fn curves_are_straight_through_vertices() {
        // At every vertex each curve enters and leaves through opposite
        // rotation slots; this is what makes twist push-offs well defined.
        let m = build_standard_model();
        for name in CurveName::ALL {
            let cyc = m.curve_cycle(name);
            for i in 0..cyc.len() {
                let incoming = cyc[i].rev();
                let outgoing = cyc[(i + 1) % cyc.len()];
                let v = m.tail(outgoing);
                let pi = m.rotations[v].iter().position(|&d| d == incoming).unwrap();
                let po = m.rotations[v].iter().position(|&d| d == outgoing).unwrap();
                assert_eq!((pi + 2) % 4, po, "curve {name:?} bends at vertex {v}");
            }
        }
    }

    #[test]
    fn validation_flags_broken_nu() {
        let mut m = build();
        // Swap nu's images of b1 and b2 so it no longer exchanges B and C.
        m.nu.dir_map.swap(Dir::forward(4).index(), Dir::forward(14).index());
        let report = validate_model(&m);
        assert!(!report.all_pass());
        assert!(report
            .failures()
            .iter()
            .any(|e| e.check.contains("nu")));
    }

    #[test]
    fn validation_flags_unreduced_face() {
        let mut m = build();
        let f = m.faces[0].clone();
        m.faces[0] = vec![f[0], f[0].rev(), f[0], f[1], f[2], f[3], f[4]];
        let report = validate_model(&m);
        assert!(report
            .failures()
            .iter()
            .any(|e| e.check == "faces-reduced"));
    }
}
