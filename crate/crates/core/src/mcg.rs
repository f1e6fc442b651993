//! Words in the mapping class group and their action on curves.
//!
//! A word is a sequence of tokens over the alphabet
//! `alpha nu beta phi gamma delta tA tB tC tX tY tZ tP`, with optional
//! integer exponents. The leftmost token is applied **last** (standard
//! function-composition order: in `T_w T_t`, `T_t` acts first).
//!
//! Sugar tokens expand into atomic moves by the fixed recipes
//!
//! ```text
//! beta  = tC tY tC tY tC tY
//! phi   = tZ^-1 tY tC tY tX tC tY
//! gamma = alpha nu
//! delta = nu phi nu phi
//! ```
//!
//! A Dehn twist acts on a transverse path by first putting the path in
//! minimal position with the twisting curve's edge cycle, then splicing
//! one full lap of the cycle's parallel push-off at every crossing; the
//! lap's side is the side the strand lands on and its direction flips
//! with the crossing direction, which is what makes the homology effect
//! of the twist the transvection `x -> x + <x, w> w`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::curve::{self, TransversePath};
use crate::error::{CurveError, ParseError};
use crate::overlay;
use crate::surface::{build_standard_model, CurveName, Dir, SurfaceModel, SymName};

/// Global handedness of `tK`: chosen so that the computed action of `phi`
/// matches the action table (`phi(A) = B` and friends). Flipping this
/// constant swaps every twist with its inverse.
const TWIST_LAP_FORWARD: bool = true;

/// One atomic move: a Dehn twist about a named curve, or a symmetry.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AtomicMove {
    Twist { curve: CurveName, power: i8 },
    Sym(SymName),
}

/// A generator token of the word grammar.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gen {
    Alpha,
    Nu,
    Beta,
    Phi,
    Gamma,
    Delta,
    Twist(CurveName),
}

impl Gen {
    fn name(self) -> String {
        match self {
            Gen::Alpha => "alpha".into(),
            Gen::Nu => "nu".into(),
            Gen::Beta => "beta".into(),
            Gen::Phi => "phi".into(),
            Gen::Gamma => "gamma".into(),
            Gen::Delta => "delta".into(),
            Gen::Twist(c) => format!("t{}", c.letter()),
        }
    }

    /// Generators that square to the identity; their exponents are kept
    /// nonnegative when printing and inverting.
    fn involutive(self) -> bool {
        matches!(self, Gen::Alpha | Gen::Nu | Gen::Phi | Gen::Gamma)
    }
}

/// A token with its exponent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Token {
    pub gen: Gen,
    pub exp: i64,
}

/// A word over the generator alphabet; index 0 is the leftmost token,
/// applied last.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupWord(pub Vec<Token>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn single(gen: Gen, exp: i64) -> Self {
        GroupWord(vec![Token { gen, exp }])
    }

    /// Concatenation: `self` written to the left of `other`, so `other`
    /// acts first.
    pub fn then_first(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        GroupWord(v)
    }

    pub fn is_identity_word(&self) -> bool {
        self.0.iter().all(|t| t.exp == 0)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.0 {
            let mut exp = t.exp;
            if t.gen.involutive() {
                exp = exp.rem_euclid(2);
            }
            if exp == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "{}", t.gen.name())?;
            } else {
                write!(f, "{}^{}", t.gen.name(), exp)?;
            }
        }
        if first {
            // Identity prints as the empty word.
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parses a word. Tokens are whitespace-separated (parentheses are treated
/// as whitespace, so printed normal forms re-parse); each token is a
/// generator name with an optional `^<integer>`.
pub fn parse_word(text: &str) -> Result<GroupWord, ParseError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0usize;
    let is_sep = |c: u8| c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b'*';
    while i < bytes.len() {
        if is_sep(bytes[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !is_sep(bytes[i]) {
            i += 1;
        }
        let word = &text[start..i];
        let (name, exp) = match word.find('^') {
            None => (word, 1i64),
            Some(p) => {
                let (n, e) = (&word[..p], &word[p + 1..]);
                let exp: i64 = e.parse().map_err(|_| ParseError {
                    offset: start + p + 1,
                    message: format!("bad exponent `{e}`"),
                })?;
                (n, exp)
            }
        };
        let gen = match name {
            "alpha" => Gen::Alpha,
            "nu" => Gen::Nu,
            "beta" => Gen::Beta,
            "phi" => Gen::Phi,
            "gamma" => Gen::Gamma,
            "delta" => Gen::Delta,
            _ => {
                if let Some(rest) = name.strip_prefix('t') {
                    let mut chars = rest.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => match CurveName::from_letter(c) {
                            Some(curve) => Gen::Twist(curve),
                            None => {
                                return Err(ParseError {
                                    offset: start,
                                    message: format!("unknown twist `{name}`"),
                                })
                            }
                        },
                        _ => {
                            return Err(ParseError {
                                offset: start,
                                message: format!("unknown token `{name}`"),
                            })
                        }
                    }
                } else {
                    return Err(ParseError {
                        offset: start,
                        message: format!("unknown token `{name}`"),
                    });
                }
            }
        };
        tokens.push(Token { gen, exp });
    }
    Ok(GroupWord(tokens))
}

// ---------------------------------------------------------------------------
// Expansion and inversion
// ---------------------------------------------------------------------------

fn gen_atoms(gen: Gen) -> Vec<AtomicMove> {
    use AtomicMove::*;
    let t = |c: CurveName, p: i8| Twist { curve: c, power: p };
    match gen {
        Gen::Alpha => vec![Sym(SymName::Alpha)],
        Gen::Nu => vec![Sym(SymName::Nu)],
        Gen::Beta => vec![
            t(CurveName::C, 1),
            t(CurveName::Y, 1),
            t(CurveName::C, 1),
            t(CurveName::Y, 1),
            t(CurveName::C, 1),
            t(CurveName::Y, 1),
        ],
        Gen::Phi => vec![
            t(CurveName::Z, -1),
            t(CurveName::Y, 1),
            t(CurveName::C, 1),
            t(CurveName::Y, 1),
            t(CurveName::X, 1),
            t(CurveName::C, 1),
            t(CurveName::Y, 1),
        ],
        Gen::Gamma => vec![Sym(SymName::Alpha), Sym(SymName::Nu)],
        Gen::Delta => {
            let phi = gen_atoms(Gen::Phi);
            let mut v = vec![Sym(SymName::Nu)];
            v.extend(phi.iter().copied());
            v.push(Sym(SymName::Nu));
            v.extend(phi);
            v
        }
        Gen::Twist(c) => vec![t(c, 1)],
    }
}

fn invert_atoms(atoms: &[AtomicMove]) -> Vec<AtomicMove> {
    atoms
        .iter()
        .rev()
        .map(|a| match *a {
            AtomicMove::Twist { curve, power } => AtomicMove::Twist {
                curve,
                power: -power,
            },
            AtomicMove::Sym(s) => AtomicMove::Sym(s),
        })
        .collect()
}

/// Expands sugar into a sugar-free move sequence, leftmost applied last.
pub fn expand(w: &GroupWord) -> Vec<AtomicMove> {
    let mut out = Vec::new();
    for t in &w.0 {
        let base = gen_atoms(t.gen);
        let (reps, block) = if t.exp >= 0 {
            (t.exp as usize, base)
        } else {
            ((-t.exp) as usize, invert_atoms(&base))
        };
        for _ in 0..reps {
            out.extend(block.iter().copied());
        }
    }
    out
}

/// Inverse word: reversed tokens with negated exponents; involutive
/// generators keep nonnegative exponents.
pub fn invert(w: &GroupWord) -> GroupWord {
    GroupWord(
        w.0.iter()
            .rev()
            .map(|t| {
                let exp = if t.gen.involutive() {
                    t.exp.rem_euclid(2)
                } else {
                    -t.exp
                };
                Token { gen: t.gen, exp }
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Action on curves
// ---------------------------------------------------------------------------

/// Image of `p` under one Dehn twist about a named curve.
///
/// The path is first put in minimal position with the twisting curve's edge
/// cycle, so every remaining crossing is essential; each crossing is then
/// replaced by the crossing followed by a full lap alongside the cycle on
/// the landing side.
pub fn apply_twist(
    model: &SurfaceModel,
    curve: CurveName,
    power: i8,
    p: &TransversePath,
) -> Result<TransversePath, CurveError> {
    debug_assert!(power == 1 || power == -1);
    let (clean, count, _) = overlay::minimize_vs_cycle(model, p, curve)?;
    if count == 0 {
        return Ok(clean);
    }
    let cycle = model.curve_cycle(curve);
    let k = cycle.len();
    // Uniform transition depth: every image strand crosses the core after
    // passing this many stubs counted from the annulus's left end. A
    // uniform depth keeps the image spirals parallel, so the spliced
    // family stays embedded.
    let h = k.div_ceil(2);
    // Step index of each edge in the cycle.
    let mut step_of_edge: HashMap<usize, usize> = HashMap::new();
    for (j, d) in cycle.iter().enumerate() {
        step_of_edge.insert(d.edge(), j);
    }

    let mut out: Vec<Dir> = Vec::with_capacity(clean.len() * (k + 1));
    for &g in clean.crossings() {
        let Some(&j) = step_of_edge.get(&g.edge()) else {
            out.push(g);
            continue;
        };
        // The crossing is replaced by a full spiral: entry-side stubs, one
        // core crossing in the transition interval, exit-side stubs.
        let along = g == cycle[j];
        // Entering from the cycle's left exactly when aligned with it.
        let mut on_left = along;
        // Travel direction of the winding, in cycle terms.
        let travel_fwd = ((power == 1) == along) == TWIST_LAP_FORWARD;
        let h_in = if on_left { h } else { k - h };
        let mut step = j;
        for stub in 0..k {
            // Pass the next vertex in the travel direction, crossing its
            // stub on the current side (given in traveler terms).
            let traveler_left = on_left == travel_fwd;
            if travel_fwd {
                out.extend(curve::fan_crossings(
                    model,
                    cycle[step],
                    cycle[(step + 1) % k],
                    traveler_left,
                ));
                step = (step + 1) % k;
            } else {
                let prev = (step + k - 1) % k;
                out.extend(curve::fan_crossings(
                    model,
                    cycle[step].rev(),
                    cycle[prev].rev(),
                    traveler_left,
                ));
                step = prev;
            }
            if stub + 1 == h_in {
                let d = cycle[step];
                out.push(if on_left { d } else { d.rev() });
                on_left = !on_left;
            }
        }
        debug_assert_eq!(step, j);
        debug_assert_eq!(on_left, !along);
    }
    let mut result = TransversePath::new(model, out)?;
    if !result.remove_spurs() {
        return Err(CurveError::NullHomotopic);
    }
    Ok(result)
}

/// Applies one atomic move.
pub fn apply_atom(
    model: &SurfaceModel,
    atom: AtomicMove,
    p: &TransversePath,
) -> Result<TransversePath, CurveError> {
    match atom {
        AtomicMove::Twist { curve, power } => apply_twist(model, curve, power, p),
        AtomicMove::Sym(s) => Ok(curve::apply_cellular(model, model.sym(s), p)),
    }
}

/// Image of a curve under a word: atoms act rightmost-first; the result is
/// returned taut.
pub fn apply_word(
    model: &SurfaceModel,
    w: &GroupWord,
    p: &TransversePath,
) -> Result<TransversePath, CurveError> {
    let atoms = expand(w);
    let mut cur = p.clone();
    for atom in atoms.iter().rev() {
        cur = apply_atom(model, *atom, &cur)?;
    }
    curve::taut(model, &cur)
}

// ---------------------------------------------------------------------------
// Homology representation
// ---------------------------------------------------------------------------

/// 4x4 integer matrix in the ordered basis ([B], [Z], [C], [Y]).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct HomologyMatrix(pub [[i64; 4]; 4]);

impl HomologyMatrix {
    pub fn identity() -> Self {
        let mut m = [[0i64; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        HomologyMatrix(m)
    }

    pub fn neg_identity() -> Self {
        let mut m = Self::identity();
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        m
    }

    pub fn mul(&self, other: &HomologyMatrix) -> HomologyMatrix {
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        HomologyMatrix(out)
    }

    pub fn apply(&self, v: [i64; 4]) -> [i64; 4] {
        let mut out = [0i64; 4];
        for i in 0..4 {
            out[i] = (0..4).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    pub fn det(&self) -> i64 {
        fn det3(m: [[i64; 3]; 3]) -> i64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        let mut acc = 0i64;
        for j in 0..4 {
            let mut minor = [[0i64; 3]; 3];
            for (r, row) in self.0[1..].iter().enumerate() {
                let mut cc = 0;
                for (c, &x) in row.iter().enumerate() {
                    if c != j {
                        minor[r][cc] = x;
                        cc += 1;
                    }
                }
            }
            let s = if j % 2 == 0 { 1 } else { -1 };
            acc += s * self.0[0][j] * det3(minor);
        }
        acc
    }

    /// Checks `M^T J M = J` for the model's symplectic pairing matrix.
    pub fn is_symplectic(&self) -> bool {
        let j = pairing_matrix();
        let mt = {
            let mut t = [[0i64; 4]; 4];
            for i in 0..4 {
                for k in 0..4 {
                    t[i][k] = self.0[k][i];
                }
            }
            HomologyMatrix(t)
        };
        mt.mul(&j).mul(self) == j
    }
}

impl fmt::Display for HomologyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            writeln!(f, "{:>3} {:>3} {:>3} {:>3}", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

/// The four basis curves as oriented paths, in basis order B, Z, C, Y.
pub fn basis_paths(model: &SurfaceModel) -> &'static [TransversePath; 4] {
    static BASIS: OnceLock<[TransversePath; 4]> = OnceLock::new();
    let _ = model;
    BASIS.get_or_init(|| {
        let m = build_standard_model();
        [
            curve::pushoff(m, m.curve_cycle(CurveName::B), true),
            curve::pushoff(m, m.curve_cycle(CurveName::Z), true),
            curve::pushoff(m, m.curve_cycle(CurveName::C), true),
            curve::pushoff(m, m.curve_cycle(CurveName::Y), true),
        ]
    })
}

/// Gram matrix of the algebraic intersection pairing on the basis.
pub fn pairing_matrix() -> HomologyMatrix {
    static GRAM: OnceLock<HomologyMatrix> = OnceLock::new();
    *GRAM.get_or_init(|| {
        let m = build_standard_model();
        let basis = basis_paths(m);
        let mut g = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = curve::algebraic_intersection(m, &basis[i], &basis[j])
                    .expect("basis pairing");
            }
        }
        HomologyMatrix(g)
    })
}

/// Homology class of an oriented path in the fixed basis.
pub fn homology_vector(model: &SurfaceModel, p: &TransversePath) -> Result<[i64; 4], CurveError> {
    let basis = basis_paths(model);
    let mut pair = [0i64; 4];
    for j in 0..4 {
        pair[j] = curve::algebraic_intersection(model, p, &basis[j])?;
    }
    // coeffs * G = pair, with G the (unimodular) Gram matrix.
    let g = pairing_matrix();
    let det = g.det();
    debug_assert_eq!(det.abs(), 1);
    // Solve by Cramer's rule over the integers.
    let mut coeffs = [0i64; 4];
    for i in 0..4 {
        let mut gi = g;
        for j in 0..4 {
            gi.0[i][j] = pair[j];
        }
        coeffs[i] = gi.det() / det;
    }
    Ok(coeffs)
}

fn atom_matrix(model: &SurfaceModel, atom: AtomicMove) -> HomologyMatrix {
    static CACHE: OnceLock<HashMap<AtomicMove, HomologyMatrix>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let m = build_standard_model();
        let basis = basis_paths(m);
        let mut map = HashMap::new();
        let mut atoms = vec![
            AtomicMove::Sym(SymName::Alpha),
            AtomicMove::Sym(SymName::Nu),
        ];
        for c in CurveName::ALL {
            atoms.push(AtomicMove::Twist { curve: c, power: 1 });
            atoms.push(AtomicMove::Twist {
                curve: c,
                power: -1,
            });
        }
        for atom in atoms {
            let mut cols = [[0i64; 4]; 4];
            for (j, b) in basis.iter().enumerate() {
                let img = apply_atom(m, atom, b).expect("atom action on basis");
                let v = homology_vector(m, &img).expect("homology of basis image");
                for i in 0..4 {
                    cols[i][j] = v[i];
                }
            }
            map.insert(atom, HomologyMatrix(cols));
        }
        map
    });
    let _ = model;
    cache[&atom]
}

/// Homology representation of a word: the product of its atoms' matrices
/// (computed once from the geometric action on the basis curves).
pub fn homology_rep(model: &SurfaceModel, w: &GroupWord) -> HomologyMatrix {
    let mut acc = HomologyMatrix::identity();
    // Leftmost token acts last: multiply left-to-right.
    for atom in expand(w) {
        acc = acc.mul(&atom_matrix(model, atom));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_standard_model;

    fn named(model: &SurfaceModel, name: CurveName) -> TransversePath {
        curve::pushoff(model, model.curve_cycle(name), true)
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let w = parse_word("phi beta^-1 phi").unwrap();
        assert_eq!(w.0.len(), 3);
        assert_eq!(format!("{w}"), "phi beta^-1 phi");
        assert!(parse_word("").unwrap().0.is_empty());
        let err = parse_word("beta^^2").unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn expansions_have_documented_lengths() {
        assert_eq!(expand(&GroupWord::single(Gen::Beta, 1)).len(), 6);
        assert_eq!(expand(&GroupWord::single(Gen::Phi, 1)).len(), 7);
        assert_eq!(expand(&GroupWord::single(Gen::Delta, 1)).len(), 16);
        let binv = expand(&GroupWord::single(Gen::Beta, -1));
        assert_eq!(
            binv[0],
            AtomicMove::Twist {
                curve: CurveName::Y,
                power: -1
            }
        );
    }

    #[test]
    fn invert_is_an_involution() {
        let w = parse_word("phi beta^-1 nu tA^3").unwrap();
        assert_eq!(invert(&invert(&w)), w);
        assert!(invert(&GroupWord::identity()).0.is_empty());
    }

    #[test]
    fn twist_about_disjoint_curve_is_identity() {
        let m = build_standard_model();
        let b = named(m, CurveName::B);
        let img = apply_twist(m, CurveName::A, 1, &b).unwrap();
        assert_eq!(
            img.canonical_rotation().crossings(),
            b.canonical_rotation().crossings()
        );
    }

    #[test]
    fn twist_preserves_crossing_count_with_its_own_curve() {
        let m = build_standard_model();
        let y = named(m, CurveName::Y);
        let img = apply_twist(m, CurveName::C, 1, &y).unwrap();
        assert_eq!(
            curve::intersection_with_named(m, &img, CurveName::C).unwrap(),
            1
        );
    }

    #[test]
    fn pairing_matrix_is_symplectic_unimodular() {
        let g = pairing_matrix();
        assert_eq!(g.det().abs(), 1);
        for i in 0..4 {
            assert_eq!(g.0[i][i], 0);
            for j in 0..4 {
                assert_eq!(g.0[i][j], -g.0[j][i]);
            }
        }
    }

    #[test]
    fn alpha_negates_homology() {
        let m = build_standard_model();
        let w = GroupWord::single(Gen::Alpha, 1);
        assert_eq!(homology_rep(m, &w), HomologyMatrix::neg_identity());
    }

    #[test]
    fn twist_about_p_is_trivial_on_homology() {
        let m = build_standard_model();
        let w = GroupWord::single(Gen::Twist(CurveName::P), 1);
        assert_eq!(homology_rep(m, &w), HomologyMatrix::identity());
    }
}
