//! The overlay engine: exact positional calculus for transverse paths.
//!
//! Given a subject curve and an obstacle (another curve, a disjoint
//! multicurve, or the edge cycle of a named curve), this module
//! reconstructs a full combinatorial embedding of the union:
//!
//! 1. Parallel strands along each edge are ordered by where they
//!    diverge. The divergence comparison is a lexicographic order on
//!    "turn words" (for each step, the counterclockwise offset of the
//!    exit slot from the entry slot in the face being crossed), so the
//!    orders of all strands are computed with one cyclic suffix-doubling
//!    pass instead of pairwise walks.
//! 2. Chords are placed in their faces using those orders; crossings
//!    between subject and obstacle chords are the interleaved pairs.
//! 3. The union's complementary regions are assembled from the refined
//!    cell decomposition. A region that is a disk with exactly two
//!    corners is a bigon; removing it (rerouting the subject along the
//!    far side of the obstacle arc) drops the crossing count by two.
//!
//! Iterating step 3 to exhaustion puts the pair in minimal position, so
//! the surviving crossing count is the geometric intersection number.
//! Every disk certificate is an Euler-characteristic count over the
//! refined cells; no heuristic is involved.

use std::collections::HashMap;

use crate::curve::{fan_crossings, TransversePath};
use crate::error::CurveError;
use crate::surface::{CurveName, Dir, SurfaceModel, NUM_EDGES, NUM_VERTICES};

/// What the subject is overlaid against.
pub(crate) enum Obstacle<'a> {
    /// Disjoint simple closed curves (e.g. one curve, or the A,B,C family).
    Paths(&'a [TransversePath]),
    /// The edge cycle of a named curve; its edges become walls.
    Cycle(CurveName),
    /// Nothing: self-overlay, used for simplicity checks and strand orders.
    None,
}

const CLASS_OPEN: u8 = 0;
const CLASS_SUBJECT: u8 = 1;
const CLASS_OBSTACLE: u8 = 2;

pub(crate) struct Overlay<'m> {
    model: &'m SurfaceModel,
    paths: Vec<Vec<Dir>>,
    wall: [bool; NUM_EDGES],

    // Skeleton crossings, flattened over paths.
    offsets: Vec<usize>,
    nx: usize,
    xdir: Vec<Dir>,
    xpath: Vec<usize>,
    xidx: Vec<usize>,

    /// Crossings on each edge, sorted along the edge's forward direction.
    edge_order: Vec<Vec<usize>>,
    /// Rank of each crossing within its edge's order.
    pos_in_edge: Vec<usize>,

    /// Boundary points of each face in cyclic order (crossing ids).
    face_points: Vec<Vec<usize>>,
    /// Coordinate of a crossing on the boundary of a face.
    coord: HashMap<(usize, usize), usize>,

    /// Chord-chord crossing records: (subject chord, obstacle chord, face,
    /// subject rank along its chord, obstacle rank, positive sign).
    xx: Vec<ChordCrossing>,
    /// Interior crossings along each chord, sorted from the chord's start.
    chord_hits: Vec<Vec<usize>>,

    arr: Option<Arrangement>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ChordCrossing {
    s_chord: usize,
    o_chord: usize,
    /// True when the obstacle's source endpoint lies in the CCW arc from the
    /// subject chord's source to its target: the frame (subject direction,
    /// obstacle direction) is positively oriented.
    positive: bool,
}

/// Lexicographic turn-offset of the step `prev -> next` through the face to
/// the right of `prev`.
fn kappa(model: &SurfaceModel, prev: Dir, next: Dir) -> u8 {
    let f = model.right(prev);
    debug_assert_eq!(model.left(next), f);
    let s0 = model.slot_in_left_face[prev.rev().index()];
    let s1 = model.slot_in_left_face[next.index()];
    ((s1 + 5 - s0) % 5) as u8
}

/// Cyclic suffix-doubling ranks over a family of cyclic strings, with every
/// intermediate round kept so that longest-common-prefix depths of any two
/// positions can be recovered. Two positions get equal final rank exactly
/// when their infinite periodic expansions agree.
struct CyclicRanks {
    /// `rounds[r][s][i]`: rank of the length-2^r window at position `i` of
    /// string `s`.
    rounds: Vec<Vec<Vec<u32>>>,
    lens: Vec<usize>,
    cap: usize,
}

impl CyclicRanks {
    fn build(strings: &[Vec<u8>]) -> CyclicRanks {
        let total: usize = strings.iter().map(|s| s.len()).sum();
        let maxlen = strings.iter().map(|s| s.len()).max().unwrap_or(0);
        let lens: Vec<usize> = strings.iter().map(|s| s.len()).collect();
        let mut rank: Vec<Vec<u32>> = strings
            .iter()
            .map(|s| s.iter().map(|&k| k as u32).collect())
            .collect();
        let mut rounds = vec![rank.clone()];
        let mut step = 1usize;
        let cap = 2 * maxlen.max(1);
        while step < cap {
            let mut items: Vec<((u32, u32), (u32, u32))> = Vec::with_capacity(total);
            for (s, r) in rank.iter().enumerate() {
                let n = r.len();
                for i in 0..n {
                    items.push(((r[i], r[(i + step) % n]), (s as u32, i as u32)));
                }
            }
            items.sort_unstable();
            let mut cur = 0u32;
            let mut prev_key = None;
            for (key, (s, i)) in items {
                if prev_key.is_some() && prev_key != Some(key) {
                    cur += 1;
                }
                prev_key = Some(key);
                rank[s as usize][i as usize] = cur;
            }
            rounds.push(rank.clone());
            step *= 2;
        }
        CyclicRanks { rounds, lens, cap }
    }

    fn final_rank(&self, item: (usize, usize)) -> u32 {
        self.rounds.last().unwrap()[item.0][item.1]
    }

    /// Divergence depth of two ray positions, capped; `cap` means the rays
    /// agree forever (the curves run parallel).
    fn lcp(&self, a: (usize, usize), b: (usize, usize)) -> usize {
        if self.final_rank(a) == self.final_rank(b) {
            return self.cap;
        }
        let (sa, mut ia) = a;
        let (sb, mut ib) = b;
        let (na, nb) = (self.lens[sa], self.lens[sb]);
        let mut l = 0usize;
        for r in (0..self.rounds.len()).rev() {
            let width = 1usize << r;
            if l + width > self.cap {
                continue;
            }
            if self.rounds[r][sa][ia] == self.rounds[r][sb][ib] {
                l += width;
                ia = (ia + width) % na;
                ib = (ib + width) % nb;
            }
        }
        l.min(self.cap)
    }
}

impl<'m> Overlay<'m> {
    pub(crate) fn build(
        model: &'m SurfaceModel,
        subject: &TransversePath,
        obstacle: &Obstacle<'_>,
    ) -> Result<Self, CurveError> {
        if subject.is_empty() {
            return Err(CurveError::Empty);
        }
        let mut paths = vec![subject.crossings().to_vec()];
        let mut wall = [false; NUM_EDGES];
        match obstacle {
            Obstacle::Paths(qs) => {
                for q in *qs {
                    paths.push(q.crossings().to_vec());
                }
            }
            Obstacle::Cycle(name) => {
                for d in model.curve_cycle(*name) {
                    wall[d.edge()] = true;
                }
            }
            Obstacle::None => {}
        }

        let mut offsets = Vec::with_capacity(paths.len());
        let mut nx = 0usize;
        for p in &paths {
            offsets.push(nx);
            nx += p.len();
        }
        let mut xdir = Vec::with_capacity(nx);
        let mut xpath = Vec::with_capacity(nx);
        let mut xidx = Vec::with_capacity(nx);
        for (pi, p) in paths.iter().enumerate() {
            for (i, &d) in p.iter().enumerate() {
                xdir.push(d);
                xpath.push(pi);
                xidx.push(i);
            }
        }

        // Turn-word strings: forward and reversed per path.
        let mut strings = Vec::with_capacity(2 * paths.len());
        for p in &paths {
            let n = p.len();
            let fwd: Vec<u8> = (0..n).map(|i| kappa(model, p[i], p[(i + 1) % n])).collect();
            let rev_path: Vec<Dir> = p.iter().rev().map(|d| d.rev()).collect();
            let bwd: Vec<u8> = (0..n)
                .map(|i| kappa(model, rev_path[i], rev_path[(i + 1) % n]))
                .collect();
            strings.push(fwd);
            strings.push(bwd);
        }
        let ranks = CyclicRanks::build(&strings);

        // Ray item of a crossing on the side of `right(forward(e))` (true) or
        // `left(forward(e))` (false).
        let ray = |x: usize, into_right: bool| -> (usize, usize) {
            let p = xpath[x];
            let i = xidx[x];
            let n = paths[p].len();
            let fwd_travel = xdir[x].is_forward();
            if fwd_travel == into_right {
                (2 * p, i)
            } else {
                (2 * p + 1, n - 1 - i)
            }
        };

        let mut edge_order: Vec<Vec<usize>> = vec![Vec::new(); NUM_EDGES];
        for x in 0..nx {
            edge_order[xdir[x].edge()].push(x);
        }
        // Nearest-divergence order: two strands sharing a corridor are
        // ordered by the end of the corridor closer to this edge. When the
        // two ends disagree the pair crosses once, and deciding every edge
        // by its nearer end places that single crossing consistently in the
        // middle of the corridor.
        for order in edge_order.iter_mut() {
            order.sort_by(|&a, &b| {
                let (r_a, r_b) = (ray(a, true), ray(b, true));
                let (l_a, l_b) = (ray(a, false), ray(b, false));
                let d_r = ranks.lcp(r_a, r_b);
                let d_l = ranks.lcp(l_a, l_b);
                if d_r >= ranks.cap && d_l >= ranks.cap {
                    // Fully parallel strands. Distinct curves are cabled with
                    // the higher path on the lower path's travel-left; the
                    // flip with crossing direction is what keeps the cables
                    // disjoint in every face.
                    if xpath[a] == xpath[b] {
                        return xidx[a].cmp(&xidx[b]);
                    }
                    let lo = if xpath[a] < xpath[b] { a } else { b };
                    let lo_first = xdir[lo].is_forward();
                    return if (lo == a) == lo_first {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    };
                }
                if d_r <= d_l {
                    // Rays into the right face diverge sooner: smaller turn
                    // word sits earlier along the forward edge.
                    ranks.final_rank(r_a).cmp(&ranks.final_rank(r_b))
                } else {
                    // Left-side divergence orders the other way around.
                    ranks.final_rank(l_b).cmp(&ranks.final_rank(l_a))
                }
            });
        }
        let mut pos_in_edge = vec![0usize; nx];
        for order in &edge_order {
            for (r, &x) in order.iter().enumerate() {
                pos_in_edge[x] = r;
            }
        }

        // Face boundary coordinates.
        let nf = model.faces.len();
        let mut face_points: Vec<Vec<usize>> = vec![Vec::new(); nf];
        let mut coord = HashMap::new();
        for (f, cycle) in model.faces.iter().enumerate() {
            for &slot in cycle {
                let e = slot.edge();
                let along: Vec<usize> = if slot.is_forward() {
                    edge_order[e].clone()
                } else {
                    edge_order[e].iter().rev().copied().collect()
                };
                for x in along {
                    coord.insert((f, x), face_points[f].len());
                    face_points[f].push(x);
                }
            }
        }

        let mut ov = Overlay {
            model,
            paths,
            wall,
            offsets,
            nx,
            xdir,
            xpath,
            xidx,
            edge_order,
            pos_in_edge,
            face_points,
            coord,
            xx: Vec::new(),
            chord_hits: Vec::new(),
            arr: None,
        };
        ov.find_chord_crossings()?;
        Ok(ov)
    }

    fn xid(&self, path: usize, idx: usize) -> usize {
        self.offsets[path] + idx
    }

    /// Chord `c` runs from crossing `c` to the next crossing of its path.
    fn chord_face(&self, c: usize) -> usize {
        self.model.right(self.xdir[c])
    }

    fn next_on_path(&self, x: usize) -> usize {
        let p = self.xpath[x];
        let n = self.paths[p].len();
        self.xid(p, (self.xidx[x] + 1) % n)
    }

    fn chord_ends(&self, c: usize) -> (usize, usize) {
        (c, self.next_on_path(c))
    }

    fn class_of_path(&self, p: usize) -> u8 {
        if p == 0 {
            CLASS_SUBJECT
        } else {
            CLASS_OBSTACLE
        }
    }

    /// Locates subject-obstacle chord crossings in every face, verifies that
    /// no single path self-interleaves, and sorts the hits along each chord.
    fn find_chord_crossings(&mut self) -> Result<(), CurveError> {
        let nf = self.model.faces.len();
        // Gather chords per face.
        let mut by_face: Vec<Vec<usize>> = vec![Vec::new(); nf];
        for c in 0..self.nx {
            by_face[self.chord_face(c)].push(c);
        }

        self.chord_hits = vec![Vec::new(); self.nx];

        for f in 0..nf {
            let nb = self.face_points[f].len();
            if nb == 0 {
                continue;
            }
            // Each same-class chord family must be non-interleaving.
            for class in [CLASS_SUBJECT, CLASS_OBSTACLE] {
                let mut open: Vec<usize> = Vec::new();
                let mut seen: HashMap<usize, bool> = HashMap::new();
                let mut at: HashMap<usize, Vec<usize>> = HashMap::new();
                for &c in &by_face[f] {
                    if self.class_of_path(self.xpath[c]) != class {
                        continue;
                    }
                    let (a, b) = self.chord_ends(c);
                    at.entry(self.coord[&(f, a)]).or_default().push(c);
                    at.entry(self.coord[&(f, b)]).or_default().push(c);
                    seen.insert(c, false);
                }
                for t in 0..nb {
                    if let Some(cs) = at.get(&t) {
                        for &c in cs {
                            let was_open = seen[&c];
                            if !was_open {
                                open.push(c);
                                seen.insert(c, true);
                            } else if open.last() == Some(&c) {
                                open.pop();
                            } else {
                                // Interleaved with a same-class chord.
                                return Err(CurveError::NotSimple(format!(
                                    "strands interleave in face {f}"
                                )));
                            }
                        }
                    }
                }
                if !open.is_empty() {
                    return Err(CurveError::NotSimple(format!(
                        "unbalanced strands in face {f}"
                    )));
                }
            }

            // Subject x obstacle crossings.
            let subj: Vec<usize> = by_face[f]
                .iter()
                .copied()
                .filter(|&c| self.xpath[c] == 0)
                .collect();
            let obst: Vec<usize> = by_face[f]
                .iter()
                .copied()
                .filter(|&c| self.xpath[c] != 0)
                .collect();
            if subj.is_empty() || obst.is_empty() {
                continue;
            }
            let arc_len = |from: usize, to: usize| (to + nb - from) % nb;
            for &sc in &subj {
                let (a, b) = self.chord_ends(sc);
                let (ca, cb) = (self.coord[&(f, a)], self.coord[&(f, b)]);
                let span = arc_len(ca, cb);
                for &oc in &obst {
                    let (c, d) = self.chord_ends(oc);
                    let (cc, cd) = (self.coord[&(f, c)], self.coord[&(f, d)]);
                    let c_in = arc_len(ca, cc) > 0 && arc_len(ca, cc) < span;
                    let d_in = arc_len(ca, cd) > 0 && arc_len(ca, cd) < span;
                    if c_in != d_in {
                        self.xx.push(ChordCrossing {
                            s_chord: sc,
                            o_chord: oc,
                            positive: c_in,
                        });
                    }
                }
            }
        }

        // Sort hits along each chord by the crossing chord's endpoint inside
        // the span, measured from the chord's source. Crossing chords of one
        // class are pairwise disjoint, so this is the traversal order.
        let mut hit_key: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.nx];
        for (t, xc) in self.xx.iter().enumerate() {
            let f = self.chord_face(xc.s_chord);
            let nb = self.face_points[f].len();
            let arc_len = |from: usize, to: usize| (to + nb - from) % nb;
            let (a, _) = self.chord_ends(xc.s_chord);
            let (c, d) = self.chord_ends(xc.o_chord);
            let (ca, cc, cd) = (
                self.coord[&(f, a)],
                self.coord[&(f, c)],
                self.coord[&(f, d)],
            );
            let inside = if xc.positive { cc } else { cd };
            hit_key[xc.s_chord].push((arc_len(ca, inside), t));
            // Along the obstacle chord, measured from its source.
            let inside_s = {
                let (sa, sb) = self.chord_ends(xc.s_chord);
                let (csa, csb) = (self.coord[&(f, sa)], self.coord[&(f, sb)]);
                let span_o = arc_len(cc, cd);
                let a_in = arc_len(cc, csa) > 0 && arc_len(cc, csa) < span_o;
                debug_assert_ne!(
                    a_in,
                    arc_len(cc, csb) > 0 && arc_len(cc, csb) < span_o
                );
                if a_in {
                    csa
                } else {
                    csb
                }
            };
            hit_key[xc.o_chord].push((arc_len(cc, inside_s), t));
        }
        for c in 0..self.nx {
            hit_key[c].sort_unstable();
            self.chord_hits[c] = hit_key[c].iter().map(|&(_, t)| t).collect();
        }
        Ok(())
    }

    /// Corner count: subject-obstacle crossings (chord crossings, or wall
    /// crossings when the obstacle is an edge cycle).
    pub(crate) fn corner_count(&self) -> usize {
        if self.wall.iter().any(|&w| w) {
            (0..self.paths[0].len())
                .filter(|&i| self.wall[self.paths[0][i].edge()])
                .count()
        } else {
            self.xx.len()
        }
    }

    pub(crate) fn signed_count(&self) -> i64 {
        self.xx
            .iter()
            .map(|xc| if xc.positive { 1 } else { -1 })
            .sum()
    }

    /// Per-edge crossing orders (used by rendering).
    pub(crate) fn orders(&self) -> (Vec<Vec<(usize, usize)>>, Vec<usize>) {
        let orders = self
            .edge_order
            .iter()
            .map(|v| v.iter().map(|&x| (self.xpath[x], self.xidx[x])).collect())
            .collect();
        (orders, self.pos_in_edge.clone())
    }
}

// ---------------------------------------------------------------------------
// Refined arrangement: nodes, fragments, regions
// ---------------------------------------------------------------------------

struct Arrangement {
    /// (tail node, head node) per fragment, in the fragment's own direction.
    frag_ends: Vec<(usize, usize)>,
    /// Class per fragment: open skeleton, subject chord, obstacle (chord or wall).
    frag_class: Vec<u8>,
    /// CCW rotation of away-pointing directed fragments per node.
    rotations: Vec<[usize; 4]>,
    /// Rotation position of each directed fragment at its tail node.
    rot_pos: Vec<(usize, usize)>,
    /// Refined face to the left of each directed fragment.
    left_face: Vec<usize>,
    n_faces: usize,
    /// Region id per refined face (after gluing across open fragments).
    region: Vec<usize>,
    n_regions: usize,
    /// Corner nodes: subject-obstacle crossing nodes.
    corner: std::collections::HashSet<usize>,
    /// For skeleton-crossing nodes: node id = NUM_VERTICES + xid.
    /// For chord-chord nodes: NUM_VERTICES + nx + t.
    nx: usize,
}

/// A certified bigon: the data needed to reroute the subject across it.
pub(crate) struct Bigon {
    /// Subject crossings to delete, in subject order; may be empty.
    remove: Vec<usize>,
    /// Position after which the transported arc is inserted: the subject
    /// crossing index that precedes the removed block (the corner chord's
    /// start).
    anchor: usize,
    /// Replacement crossings, already oriented along the subject.
    insert: Vec<Dir>,
}

impl<'m> Overlay<'m> {
    fn build_arrangement(&mut self) {
        if self.arr.is_some() {
            return;
        }
        let model = self.model;
        let nx = self.nx;
        let n_chord_nodes = self.xx.len();
        let n_nodes = NUM_VERTICES + nx + n_chord_nodes;

        // Fragment tables.
        let mut frag_ends: Vec<(usize, usize)> = Vec::new();
        let mut frag_class: Vec<u8> = Vec::new();
        // Skeleton fragments per edge.
        let mut edge_frag_base = [0usize; NUM_EDGES];
        for e in 0..NUM_EDGES {
            edge_frag_base[e] = frag_ends.len();
            let (t, h) = model.edge_ends[e];
            let pts: Vec<usize> = std::iter::once(t)
                .chain(self.edge_order[e].iter().map(|&x| NUM_VERTICES + x))
                .chain(std::iter::once(h))
                .collect();
            for w in pts.windows(2) {
                frag_ends.push((w[0], w[1]));
                frag_class.push(if self.wall[e] { CLASS_OBSTACLE } else { CLASS_OPEN });
            }
        }
        // Chord fragments per chord.
        let mut chord_frag_base = vec![0usize; nx];
        for c in 0..nx {
            chord_frag_base[c] = frag_ends.len();
            let (a, b) = self.chord_ends(c);
            let pts: Vec<usize> = std::iter::once(NUM_VERTICES + a)
                .chain(
                    self.chord_hits[c]
                        .iter()
                        .map(|&t| NUM_VERTICES + nx + t),
                )
                .chain(std::iter::once(NUM_VERTICES + b))
                .collect();
            for w in pts.windows(2) {
                frag_ends.push((w[0], w[1]));
                frag_class.push(self.class_of_path(self.xpath[c]));
            }
        }
        let n_frags = frag_ends.len();

        // Away-pointing directed fragment at a node, for each incident slot.
        let df = |frag: usize, fwd: bool| -> usize { frag * 2 + usize::from(!fwd) };

        let mut rotations: Vec<[usize; 4]> = vec![[usize::MAX; 4]; n_nodes];
        // Complex vertices: the model rotation, lifted to fragments.
        for v in 0..NUM_VERTICES {
            for (k, &d) in model.rotations[v].iter().enumerate() {
                let e = d.edge();
                let base = edge_frag_base[e];
                let count = self.edge_order[e].len() + 1;
                rotations[v][k] = if d.is_forward() {
                    df(base, true)
                } else {
                    df(base + count - 1, false)
                };
            }
        }
        // Skeleton-crossing nodes.
        for x in 0..nx {
            let d = self.xdir[x];
            let e = d.edge();
            let base = edge_frag_base[e];
            let r = self.pos_in_edge[x];
            let toward_head_fwd = df(base + r + 1, true);
            let toward_tail_fwd = df(base + r, false);
            let (toward_head_d, toward_tail_d) = if d.is_forward() {
                (toward_head_fwd, toward_tail_fwd)
            } else {
                (toward_tail_fwd, toward_head_fwd)
            };
            // Incoming chord (previous chord of the path) ends here; outgoing
            // chord starts here.
            let p = self.xpath[x];
            let n = self.paths[p].len();
            let prev_chord = self.xid(p, (self.xidx[x] + n - 1) % n);
            let out_chord = x;
            let incoming_end = df(
                chord_frag_base[prev_chord] + self.chord_hits[prev_chord].len(),
                false,
            );
            let outgoing_end = df(chord_frag_base[out_chord], true);
            rotations[NUM_VERTICES + x] =
                [toward_head_d, incoming_end, toward_tail_d, outgoing_end];
        }
        // Chord-chord nodes.
        for (t, xc) in self.xx.iter().enumerate() {
            let node = NUM_VERTICES + nx + t;
            let s_rank = self.chord_hits[xc.s_chord]
                .iter()
                .position(|&u| u == t)
                .unwrap();
            let o_rank = self.chord_hits[xc.o_chord]
                .iter()
                .position(|&u| u == t)
                .unwrap();
            let toward_a = df(chord_frag_base[xc.s_chord] + s_rank, false);
            let toward_b = df(chord_frag_base[xc.s_chord] + s_rank + 1, true);
            let toward_c = df(chord_frag_base[xc.o_chord] + o_rank, false);
            let toward_d = df(chord_frag_base[xc.o_chord] + o_rank + 1, true);
            rotations[node] = if xc.positive {
                // Obstacle source endpoint inside the CCW arc a -> b.
                [toward_a, toward_c, toward_b, toward_d]
            } else {
                [toward_a, toward_d, toward_b, toward_c]
            };
        }

        // Rotation positions and sanity.
        let mut rot_pos = vec![(usize::MAX, usize::MAX); 2 * n_frags];
        for (node, rot) in rotations.iter().enumerate() {
            for (k, &end) in rot.iter().enumerate() {
                debug_assert_ne!(end, usize::MAX, "incomplete rotation at node {node}");
                rot_pos[end] = (node, k);
            }
        }
        debug_assert!(rot_pos.iter().all(|&(n, _)| n != usize::MAX));

        let head_of = |dirfrag: usize| -> usize {
            let (t, h) = frag_ends[dirfrag / 2];
            if dirfrag % 2 == 0 {
                h
            } else {
                t
            }
        };

        // Trace refined faces: next = CCW-predecessor of the reversal.
        let mut left_face = vec![usize::MAX; 2 * n_frags];
        let mut n_faces = 0usize;
        for start in 0..2 * n_frags {
            if left_face[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            loop {
                left_face[d] = n_faces;
                let at = head_of(d);
                let (node, pos) = rot_pos[d ^ 1];
                debug_assert_eq!(node, at);
                d = rotations[at][(pos + 3) % 4];
                if d == start {
                    break;
                }
            }
            n_faces += 1;
        }
        debug_assert_eq!(
            n_nodes as i64 - n_frags as i64 + n_faces as i64,
            -2,
            "refined complex must still be a genus-2 surface"
        );

        // Regions: glue refined faces across open fragments.
        let mut parent: Vec<usize> = (0..n_faces).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for frag in 0..n_frags {
            if frag_class[frag] == CLASS_OPEN {
                let a = find(&mut parent, left_face[frag * 2]);
                let b = find(&mut parent, left_face[frag * 2 + 1]);
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut region_of_face = vec![usize::MAX; n_faces];
        let mut n_regions = 0usize;
        for f in 0..n_faces {
            let r = find(&mut parent, f);
            if region_of_face[r] == usize::MAX {
                region_of_face[r] = n_regions;
                n_regions += 1;
            }
            region_of_face[f] = region_of_face[r];
        }

        // Corners.
        let mut corner = std::collections::HashSet::new();
        if self.wall.iter().any(|&w| w) {
            for x in 0..nx {
                if self.xpath[x] == 0 && self.wall[self.xdir[x].edge()] {
                    corner.insert(NUM_VERTICES + x);
                }
            }
        }
        for t in 0..self.xx.len() {
            corner.insert(NUM_VERTICES + nx + t);
        }

        self.arr = Some(Arrangement {
            frag_ends,
            frag_class,
            rotations,
            rot_pos,
            left_face,
            n_faces,
            region: region_of_face,
            n_regions,
            corner,
            nx,
        });
    }

    /// Finds a bigon region if one exists: a disk with exactly one boundary
    /// walk carrying exactly two corners, one subject run and one obstacle
    /// run.
    pub(crate) fn find_bigon(&mut self) -> Option<Bigon> {
        if self.corner_count() == 0 {
            return None;
        }
        self.build_arrangement();
        let arr = self.arr.as_ref().unwrap();
        let model = self.model;
        let n_frags = arr.frag_ends.len();

        let head_of = |dirfrag: usize| -> usize {
            let (t, h) = arr.frag_ends[dirfrag / 2];
            if dirfrag % 2 == 0 {
                h
            } else {
                t
            }
        };

        // Boundary walks: next barrier end clockwise from the reversal,
        // skipping open ends (the region extends across those fragments).
        let next_walk = |d: usize| -> usize {
            let at = head_of(d);
            let (_, mut pos) = arr.rot_pos[d ^ 1];
            loop {
                pos = (pos + 3) % 4;
                let cand = arr.rotations[at][pos];
                if arr.frag_class[cand / 2] != CLASS_OPEN {
                    return cand;
                }
            }
        };

        // Region stats.
        let mut faces_in_region = vec![0usize; arr.n_regions];
        for f in 0..arr.n_faces {
            faces_in_region[arr.region[f]] += 1;
        }
        use std::collections::HashSet;
        let mut frags_in_region: Vec<HashSet<usize>> = vec![HashSet::new(); arr.n_regions];
        let mut nodes_in_region: Vec<HashSet<usize>> = vec![HashSet::new(); arr.n_regions];
        for frag in 0..n_frags {
            for side in 0..2 {
                let r = arr.region[arr.left_face[frag * 2 + side]];
                frags_in_region[r].insert(frag);
                let (t, h) = arr.frag_ends[frag];
                nodes_in_region[r].insert(t);
                nodes_in_region[r].insert(h);
            }
        }

        // Walk boundaries per region.
        let mut visited = vec![false; 2 * n_frags];
        let mut boundary_components = vec![0usize; arr.n_regions];
        let mut walks: Vec<(usize, Vec<usize>)> = Vec::new(); // (region, walk)
        for start in 0..2 * n_frags {
            if visited[start] || arr.frag_class[start / 2] == CLASS_OPEN {
                continue;
            }
            let r = arr.region[arr.left_face[start]];
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                visited[d] = true;
                walk.push(d);
                d = next_walk(d);
                if d == start {
                    break;
                }
            }
            boundary_components[r] += 1;
            walks.push((r, walk));
        }

        for (r, walk) in walks {
            if boundary_components[r] != 1 {
                continue;
            }
            let chi = nodes_in_region[r].len() as i64 - frags_in_region[r].len() as i64
                + faces_in_region[r] as i64;
            if chi != 1 {
                continue;
            }
            // Corner visits: transitions between subject and obstacle runs.
            let n = walk.len();
            let mut transitions = Vec::new();
            for i in 0..n {
                let cur = arr.frag_class[walk[i] / 2];
                let nxt = arr.frag_class[walk[(i + 1) % n] / 2];
                if cur != nxt {
                    transitions.push(i);
                }
            }
            if transitions.len() != 2 {
                continue;
            }
            // The transition node must actually be a subject-obstacle
            // crossing (not, say, two runs abutting elsewhere).
            let node_after = |i: usize| head_of(walk[i]);
            if !arr.corner.contains(&node_after(transitions[0]))
                || !arr.corner.contains(&node_after(transitions[1]))
            {
                continue;
            }
            return Some(self.extract_bigon(&walk, &transitions, model));
        }
        None
    }

    /// Turns a certified bigon walk into a reroute instruction.
    fn extract_bigon(
        &self,
        walk: &[usize],
        transitions: &[usize],
        model: &SurfaceModel,
    ) -> Bigon {
        let arr = self.arr.as_ref().unwrap();
        let n = walk.len();
        let head_of = |dirfrag: usize| -> usize {
            let (t, h) = arr.frag_ends[dirfrag / 2];
            if dirfrag % 2 == 0 {
                h
            } else {
                t
            }
        };

        // Identify the subject run: rotate the walk so it starts right after
        // a corner with a subject fragment.
        let (t0, t1) = (transitions[0], transitions[1]);
        let first_of_run = |t: usize| (t + 1) % n;
        let (s_start, o_start) =
            if arr.frag_class[walk[first_of_run(t0)] / 2] == CLASS_SUBJECT {
                (first_of_run(t0), first_of_run(t1))
            } else {
                (first_of_run(t1), first_of_run(t0))
            };
        let mut s_run = Vec::new();
        let mut i = s_start;
        loop {
            s_run.push(walk[i]);
            if arr.frag_class[walk[(i + 1) % n] / 2] != CLASS_SUBJECT {
                break;
            }
            i = (i + 1) % n;
        }
        let mut o_run = Vec::new();
        let mut i = o_start;
        loop {
            o_run.push(walk[i]);
            if arr.frag_class[walk[(i + 1) % n] / 2] != CLASS_OBSTACLE {
                break;
            }
            i = (i + 1) % n;
        }

        // Subject crossings passed inside the subject run, in walk order.
        let mut passed: Vec<usize> = Vec::new();
        for w in s_run.windows(2) {
            let node = head_of(w[0]);
            let _ = w;
            if node >= NUM_VERTICES && node < NUM_VERTICES + arr.nx {
                passed.push(node - NUM_VERTICES);
            }
        }
        // Direction of the subject run along the subject's own orientation.
        let forward = s_run[0] % 2 == 0;

        // Obstacle arc, transported to subject crossings.
        // Walk order is (subject run x..y), then (obstacle run y..x); the
        // replacement arc must run y -> x in subject orientation terms when
        // the subject run was forward (the removed block sits between), i.e.
        // the transported arc traverses the obstacle run reversed; when the
        // subject run was backward the obstacle run is traversed as walked.
        let transported = if self.wall.iter().any(|&w| w) {
            self.transport_wall_arc(&o_run, forward, model)
        } else {
            self.transport_chord_arc(&o_run, forward, head_of)
        };

        let wall_mode = self.wall.iter().any(|&w| w);
        let n_subject = self.paths[0].len();
        let prev_idx = |x: usize| {
            let p = self.xpath[x];
            debug_assert_eq!(p, 0);
            self.xid(p, (self.xidx[x] + n_subject - 1) % n_subject)
        };

        let (mut remove, anchor, insert): (Vec<usize>, usize, Vec<Dir>);
        if forward {
            remove = passed.clone();
            if wall_mode {
                // The corner crossings are the subject's own crossings with
                // the wall and disappear with the bigon.
                let tail_node = {
                    let first = s_run[0];
                    let (t, h) = arr.frag_ends[first / 2];
                    if first % 2 == 0 {
                        t
                    } else {
                        h
                    }
                };
                let corner_x = tail_node - NUM_VERTICES;
                let corner_y = head_of(*s_run.last().unwrap()) - NUM_VERTICES;
                remove.insert(0, corner_x);
                remove.push(corner_y);
                anchor = prev_idx(corner_x);
            } else {
                // The anchor is the subject crossing starting the chord that
                // holds corner x.
                anchor = self.chord_of_dirfrag(s_run[0]);
            }
            insert = transported;
        } else {
            // Reverse the walk data into subject orientation.
            remove = passed.iter().rev().copied().collect();
            if wall_mode {
                let corner_y = {
                    let first = s_run[0];
                    let (t, h) = arr.frag_ends[first / 2];
                    if first % 2 == 0 {
                        t
                    } else {
                        h
                    }
                };
                let corner_x = head_of(*s_run.last().unwrap());
                let (cx, cy) = (corner_x - NUM_VERTICES, corner_y - NUM_VERTICES);
                remove.insert(0, cx);
                remove.push(cy);
                anchor = prev_idx(cx);
            } else {
                anchor = self.chord_of_dirfrag(*s_run.last().unwrap());
            }
            insert = transported;
        }
        Bigon {
            remove,
            anchor,
            insert,
        }
    }

    /// The subject chord index a chord fragment belongs to.
    fn chord_of_dirfrag(&self, dirfrag: usize) -> usize {
        let arr = self.arr.as_ref().unwrap();
        let frag = dirfrag / 2;
        // Chord fragments are laid out after all skeleton fragments, chord by
        // chord in crossing order; recover by scanning the layout.
        let mut base = 0usize;
        for e in 0..NUM_EDGES {
            base += self.edge_order[e].len() + 1;
        }
        debug_assert!(frag >= base);
        let mut offset = frag - base;
        for c in 0..self.nx {
            let count = self.chord_hits[c].len() + 1;
            if offset < count {
                debug_assert_eq!(arr.frag_class[frag], CLASS_SUBJECT);
                return c;
            }
            offset -= count;
        }
        unreachable!("fragment beyond chord table");
    }

    /// Transport along an obstacle chord arc: the subject's rerouted piece
    /// crosses the same skeleton edges the obstacle arc crosses.
    fn transport_chord_arc(
        &self,
        o_run: &[usize],
        subject_forward: bool,
        head_of: impl Fn(usize) -> usize,
    ) -> Vec<Dir> {
        let arr = self.arr.as_ref().unwrap();
        let mut arc: Vec<Dir> = Vec::new();
        for w in o_run.windows(2) {
            let node = head_of(w[0]);
            if node >= NUM_VERTICES && node < NUM_VERTICES + arr.nx {
                let x = node - NUM_VERTICES;
                // Traversal direction at this crossing: canonical fragments
                // travel with the obstacle's own orientation.
                let as_stored = w[1] % 2 == 0;
                arc.push(if as_stored {
                    self.xdir[x]
                } else {
                    self.xdir[x].rev()
                });
            }
        }
        if subject_forward {
            arc.reverse();
            arc.iter_mut().for_each(|d| *d = d.rev());
        }
        arc
    }

    /// Transport along a wall (edge-cycle) arc: the rerouted piece crosses
    /// the fan edges at each complex vertex the wall arc passes, on the side
    /// away from the bigon.
    fn transport_wall_arc(
        &self,
        o_run: &[usize],
        subject_forward: bool,
        model: &SurfaceModel,
    ) -> Vec<Dir> {
        let arr = self.arr.as_ref().unwrap();
        let head_of = |dirfrag: usize| -> usize {
            let (t, h) = arr.frag_ends[dirfrag / 2];
            if dirfrag % 2 == 0 {
                h
            } else {
                t
            }
        };
        // Vertices passed by the wall arc and the directed model edges
        // around them, in walk order (region on the left of the walk).
        let mut steps: Vec<(Dir, Dir)> = Vec::new(); // (incoming, outgoing) at a vertex
        let dir_of = |dirfrag: usize| -> Dir {
            // Which model edge a skeleton fragment belongs to.
            let frag = dirfrag / 2;
            let mut base = 0usize;
            for e in 0..NUM_EDGES {
                let count = self.edge_order[e].len() + 1;
                if frag < base + count {
                    return if dirfrag % 2 == 0 {
                        Dir::forward(e)
                    } else {
                        Dir::backward(e)
                    };
                }
                base += count;
            }
            unreachable!("wall fragment beyond skeleton table")
        };
        for w in o_run.windows(2) {
            let node = head_of(w[0]);
            if node < NUM_VERTICES {
                steps.push((dir_of(w[0]), dir_of(w[1])));
            }
        }

        // Fan side: walking the boundary keeps the region on the left, so
        // traversing the arc as walked puts the far side on the right; the
        // reversed traversal puts it on the left.
        let mut arc: Vec<Dir> = Vec::new();
        if subject_forward {
            // Transported arc travels against the walk: reversed steps,
            // far side on the traveler's left.
            for &(inc, out) in steps.iter().rev() {
                let (inc, out) = (out.rev(), inc.rev());
                arc.extend(fan_crossings(model, inc, out, true));
            }
        } else {
            // As walked: far side on the traveler's right.
            for &(inc, out) in &steps {
                arc.extend(fan_crossings(model, inc, out, false));
            }
        }
        arc
    }

    /// Applies a bigon reroute to the subject and returns the new path.
    pub(crate) fn remove_bigon(&self, b: &Bigon) -> TransversePath {
        let p = &self.paths[0];
        let n = p.len();
        let removed: std::collections::HashSet<usize> =
            b.remove.iter().map(|&x| self.xidx[x]).collect();
        let anchor_idx = self.xidx[b.anchor];
        let mut out: Vec<Dir> = Vec::with_capacity(n + b.insert.len());
        if removed.len() == n {
            // The bigon swallows every crossing; the reroute is the
            // transported arc alone.
            out.extend(b.insert.iter().copied());
        } else {
            debug_assert!(!removed.contains(&anchor_idx));
            for k in 0..n {
                let i = (anchor_idx + k) % n;
                if removed.contains(&i) {
                    continue;
                }
                out.push(p[i]);
                if k == 0 {
                    out.extend(b.insert.iter().copied());
                }
            }
        }
        if cfg!(debug_assertions) {
            if let Err(e) = TransversePath::new(self.model, out.clone()) {
                panic!(
                    "bigon reroute broke the path: {e:?}\n  subject {:?}\n  anchor idx {}\n  removed {:?}\n  insert {:?}\n  out {:?}",
                    p,
                    anchor_idx,
                    b.remove.iter().map(|&x| self.xidx[x]).collect::<Vec<_>>(),
                    b.insert,
                    out
                );
            }
        }
        TransversePath::from_vec_unchecked(out)
    }
}

// ---------------------------------------------------------------------------
// Public driver functions
// ---------------------------------------------------------------------------

/// Rejects crossing sequences that cannot be embedded.
pub(crate) fn check_simple(
    model: &SurfaceModel,
    p: &TransversePath,
) -> Result<(), CurveError> {
    if p.is_empty() {
        return Ok(());
    }
    Overlay::build(model, p, &Obstacle::None).map(|_| ())
}

/// Puts the subject in minimal position with a named curve's edge cycle;
/// returns the moved subject, the crossing count, and whether it changed.
pub(crate) fn minimize_vs_cycle(
    model: &SurfaceModel,
    p: &TransversePath,
    name: CurveName,
) -> Result<(TransversePath, usize, bool), CurveError> {
    let mut cur = p.clone();
    let mut changed = false;
    loop {
        let mut ov = Overlay::build(model, &cur, &Obstacle::Cycle(name))?;
        match ov.find_bigon() {
            None => return Ok((cur, ov.corner_count(), changed)),
            Some(b) => {
                cur = ov.remove_bigon(&b);
                changed = true;
                if !cur.remove_spurs() {
                    return Err(CurveError::NullHomotopic);
                }
            }
        }
    }
}

/// Puts the subject in minimal position with another curve; returns the
/// moved subject and the geometric intersection number.
pub(crate) fn minimize_vs_path(
    model: &SurfaceModel,
    p: &TransversePath,
    q: &TransversePath,
) -> Result<(TransversePath, usize), CurveError> {
    let qs = [q.clone()];
    let mut cur = p.clone();
    loop {
        let mut ov = Overlay::build(model, &cur, &Obstacle::Paths(&qs))?;
        match ov.find_bigon() {
            None => return Ok((cur, ov.corner_count())),
            Some(b) => {
                cur = ov.remove_bigon(&b);
                if !cur.remove_spurs() {
                    // A null-homotopic subject meets everything zero times.
                    return Ok((cur, 0));
                }
            }
        }
    }
}

/// Signed crossing sum of two oriented curves (isotopy-invariant; no bigon
/// removal required).
pub(crate) fn signed_crossings(
    model: &SurfaceModel,
    p: &TransversePath,
    q: &TransversePath,
) -> Result<i64, CurveError> {
    let qs = [q.clone()];
    let ov = Overlay::build(model, p, &Obstacle::Paths(&qs))?;
    Ok(ov.signed_count())
}

/// Per-edge strand orders of a single curve (for rendering).
pub(crate) fn strand_orders(
    model: &SurfaceModel,
    p: &TransversePath,
) -> Result<Vec<Vec<usize>>, CurveError> {
    let ov = Overlay::build(model, p, &Obstacle::None)?;
    Ok(ov
        .edge_order
        .iter()
        .map(|v| v.iter().map(|&x| ov.xidx[x]).collect())
        .collect())
}
