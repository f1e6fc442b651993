//! Complexity reduction and normal forms for the genus-2 Goeritz group.
//!
//! Every reducing curve carries the complexity
//! `C(Q) = n_A/2 + n_B + n_C`, built from its intersection triple with
//! the pants curves. The standard reducing curve is the unique one of
//! complexity 1, and a three-step loop reduces any other:
//!
//! * if `n_B = n_C = 0` the curve is standard — stop;
//! * while `n_A > n_B + n_C`, exactly one of `beta`, `beta^-1` strictly
//!   drops the complexity — apply it;
//! * otherwise `n_A < n_B + n_C` and `n_B != n_C`; apply `phi` (when
//!   `n_B > n_C`) or `phi nu` (when `n_C > n_B`), which drops the
//!   complexity and restores `n_A > n_B + n_C`.
//!
//! A separating curve on which the loop gets stuck (`n_A = n_B + n_C`,
//! or `n_B = n_C` away from the standard curve, or no decreasing `beta`
//! direction) is certified **not** to be a reducing curve; the stuck
//! condition names the violated lemma.
//!
//! Undoing the reduction word and resolving the stabilizer exponents
//! writes any group element uniquely as
//! `alpha^a nu^b beta^c (phi nu^{s_n} beta^{r_n}) ... (phi nu^{s_1} beta^{r_1})`,
//! the factors applied right to left. Equality of elements is equality
//! of normal forms.

use serde::Serialize;

use crate::curve::{self, IntersectionTriple, TransversePath};
use crate::error::GoeritzError;
use crate::mcg::{self, Gen, GroupWord, HomologyMatrix, Token};
use crate::surface::{CurveName, SurfaceModel};

/// The complexity measure `n_A/2 + n_B + n_C`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Complexity(pub u64);

/// Computes the complexity, rejecting odd triples (a non-taut or
/// non-separating input upstream).
pub fn complexity(t: IntersectionTriple) -> Result<Complexity, GoeritzError> {
    if !t.all_even() {
        return Err(GoeritzError::OddIntersection(t.n_a, t.n_b, t.n_c));
    }
    Ok(Complexity(t.n_a / 2 + t.n_b + t.n_c))
}

/// Step classification of the reduction loop.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Move {
    Done,
    BetaPlus,
    BetaMinus,
    Phi,
    PhiNu,
}

impl Move {
    pub fn label(self) -> &'static str {
        match self {
            Move::Done => "done",
            Move::BetaPlus => "beta",
            Move::BetaMinus => "beta^-1",
            Move::Phi => "phi",
            Move::PhiNu => "phi nu",
        }
    }

    /// The move as a word (leftmost applied last).
    pub fn word(self) -> GroupWord {
        match self {
            Move::Done => GroupWord::identity(),
            Move::BetaPlus => GroupWord::single(Gen::Beta, 1),
            Move::BetaMinus => GroupWord::single(Gen::Beta, -1),
            Move::Phi => GroupWord::single(Gen::Phi, 1),
            Move::PhiNu => GroupWord(vec![
                Token { gen: Gen::Phi, exp: 1 },
                Token { gen: Gen::Nu, exp: 1 },
            ]),
        }
    }
}

/// One step of the reduction trace: the state before the move.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceRecord {
    pub triple: IntersectionTriple,
    pub complexity: Complexity,
    #[serde(rename = "move")]
    pub mov: Move,
}

/// The full reduction trace; complexity strictly decreases record to
/// record and the final record carries `Move::Done` at triple (2,0,0).
#[derive(Clone, Debug, Default, Serialize)]
pub struct ReductionTrace {
    pub records: Vec<TraceRecord>,
}

impl ReductionTrace {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("step\tn_A\tn_B\tn_C\tC\tmove\n");
        for (i, r) in self.records.iter().enumerate() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                i, r.triple.n_a, r.triple.n_b, r.triple.n_c, r.complexity.0, r.mov.label()
            ));
        }
        out
    }
}

/// True exactly when the triple is the standard one's; a reducing curve
/// with `n_B = n_C = 0` must have `n_A = 2`.
pub fn is_standard(t: IntersectionTriple) -> Result<bool, GoeritzError> {
    if t.n_b == 0 && t.n_c == 0 {
        if t.n_a != 2 {
            return Err(GoeritzError::InvariantViolation(format!(
                "curve disjoint from B and C must be standard, but n_A = {}",
                t.n_a
            )));
        }
        return Ok(true);
    }
    Ok(false)
}

fn complexity_of_curve(
    model: &SurfaceModel,
    q: &TransversePath,
) -> Result<(IntersectionTriple, Complexity), GoeritzError> {
    let t = curve::intersection_triple(model, q)?;
    let c = complexity(t)?;
    Ok((t, c))
}

/// Classifies the next reduction move for a taut, essential, separating
/// curve; `BetaPlus`/`BetaMinus` are chosen by trial application.
pub fn classify_step(model: &SurfaceModel, q: &TransversePath) -> Result<Move, GoeritzError> {
    let (t, c) = complexity_of_curve(model, q)?;
    if is_standard(t)? {
        return Ok(Move::Done);
    }
    if t.n_a > t.n_b + t.n_c {
        let plus = mcg::apply_word(model, &Move::BetaPlus.word(), q)?;
        let (_, cp) = complexity_of_curve(model, &plus)?;
        if cp < c {
            return Ok(Move::BetaPlus);
        }
        let minus = mcg::apply_word(model, &Move::BetaMinus.word(), q)?;
        let (_, cm) = complexity_of_curve(model, &minus)?;
        if cm < c {
            return Ok(Move::BetaMinus);
        }
        return Err(GoeritzError::NotReducing {
            diagnostic: format!(
                "n_A > n_B + n_C at {t} but neither beta direction decreases C = {}",
                c.0
            ),
        });
    }
    if t.n_a == t.n_b + t.n_c {
        return Err(GoeritzError::NotReducing {
            diagnostic: format!(
                "n_A = n_B + n_C at {t}: a non-standard reducing curve satisfies n_A != n_B + n_C"
            ),
        });
    }
    if t.n_b > t.n_c {
        Ok(Move::Phi)
    } else if t.n_c > t.n_b {
        Ok(Move::PhiNu)
    } else {
        Err(GoeritzError::NotReducing {
            diagnostic: format!(
                "n_B = n_C at {t}: a non-standard reducing curve satisfies n_B != n_C"
            ),
        })
    }
}

/// Runs the reduction loop. On success, the returned word `u` (leftmost
/// applied last) satisfies `u(q) isotopic to P`, and the strictly
/// decreasing trace certifies that `q` is a reducing curve.
pub fn reduce(
    model: &SurfaceModel,
    q: &TransversePath,
) -> Result<(GroupWord, ReductionTrace), GoeritzError> {
    let mut cur = curve::taut(model, q)?;
    if !curve::is_separating(model, &cur)? {
        return Err(GoeritzError::Curve(crate::error::CurveError::NotSeparating));
    }
    let mut trace = ReductionTrace::default();
    let mut moves: Vec<Move> = Vec::new();
    // The decreasing beta direction is constant within one while-run; it is
    // found by trial at the start of each run and re-verified after every
    // application.
    let mut beta_dir: Option<Move> = None;
    loop {
        let (t, c) = complexity_of_curve(model, &cur)?;
        if is_standard(t)? {
            trace.records.push(TraceRecord {
                triple: t,
                complexity: c,
                mov: Move::Done,
            });
            break;
        }
        let mov = if t.n_a > t.n_b + t.n_c {
            match beta_dir {
                Some(m) => m,
                None => {
                    let m = trial_beta(model, &cur, c)?;
                    beta_dir = Some(m);
                    m
                }
            }
        } else {
            beta_dir = None;
            if t.n_a == t.n_b + t.n_c {
                return Err(GoeritzError::NotReducing {
                    diagnostic: format!(
                        "n_A = n_B + n_C at {t}: a non-standard reducing curve satisfies n_A != n_B + n_C"
                    ),
                });
            } else if t.n_b > t.n_c {
                Move::Phi
            } else if t.n_c > t.n_b {
                Move::PhiNu
            } else {
                return Err(GoeritzError::NotReducing {
                    diagnostic: format!(
                        "n_B = n_C at {t}: a non-standard reducing curve satisfies n_B != n_C"
                    ),
                });
            }
        };
        trace.records.push(TraceRecord {
            triple: t,
            complexity: c,
            mov,
        });
        let next = mcg::apply_word(model, &mov.word(), &cur)?;
        let (_, cn) = complexity_of_curve(model, &next)?;
        if cn >= c {
            if matches!(mov, Move::BetaPlus | Move::BetaMinus) {
                // The cached direction stopped decreasing mid-run: the
                // monotonicity theorem fails, so the curve is not reducing
                // (or the other direction works, which the theorem forbids).
                let other = trial_beta(model, &cur, c);
                return match other {
                    Ok(_) => Err(GoeritzError::InvariantViolation(format!(
                        "beta direction reversed within a run at {t}"
                    ))),
                    Err(e) => Err(e),
                };
            }
            return Err(GoeritzError::InvariantViolation(format!(
                "{} failed to decrease complexity at {t}",
                mov.label()
            )));
        }
        cur = next;
        moves.push(mov);
    }
    // Word: later moves act later, so they sit further left.
    let mut word = GroupWord::identity();
    for mov in moves.iter().rev() {
        word = word.then_first(&mov.word());
    }
    Ok((merge_adjacent(&word), trace))
}

fn trial_beta(
    model: &SurfaceModel,
    cur: &TransversePath,
    c: Complexity,
) -> Result<Move, GoeritzError> {
    let plus = mcg::apply_word(model, &Move::BetaPlus.word(), cur)?;
    if complexity_of_curve(model, &plus)?.1 < c {
        return Ok(Move::BetaPlus);
    }
    let minus = mcg::apply_word(model, &Move::BetaMinus.word(), cur)?;
    if complexity_of_curve(model, &minus)?.1 < c {
        return Ok(Move::BetaMinus);
    }
    Err(GoeritzError::NotReducing {
        diagnostic: "neither beta direction decreases the complexity".into(),
    })
}

/// Merges adjacent tokens of the same generator (`beta beta -> beta^2`).
fn merge_adjacent(w: &GroupWord) -> GroupWord {
    let mut out: Vec<Token> = Vec::new();
    for &t in &w.0 {
        if t.exp == 0 {
            continue;
        }
        match out.last_mut() {
            Some(prev) if prev.gen == t.gen => {
                prev.exp += t.exp;
                if prev.exp == 0 {
                    out.pop();
                }
            }
            _ => out.push(t),
        }
    }
    GroupWord(out)
}

/// The standard reducing curve as a transverse path.
pub fn standard_curve(model: &SurfaceModel) -> TransversePath {
    curve::pushoff(model, model.curve_cycle(CurveName::P), true)
}

// ---------------------------------------------------------------------------
// Stabilizer resolution and normal forms
// ---------------------------------------------------------------------------

/// Resolves a word that stabilizes the standard sphere into exponents
/// `(a, b, c)` with `g = alpha^a nu^b beta^c`.
///
/// `b` is read off the image of B; `c` by scanning powers of `beta`
/// against the image of X (bounded by the crossing count with A, which
/// grows strictly with the power); `a` from the homology representation,
/// the only layer that sees the hyperelliptic involution.
pub fn stabilizer_resolve(
    model: &SurfaceModel,
    g: &GroupWord,
) -> Result<(u8, u8, i64), GoeritzError> {
    let p_path = standard_curve(model);
    let fp_p = curve::fingerprint(model, &p_path)?;
    let img_p = mcg::apply_word(model, g, &p_path)?;
    if curve::fingerprint(model, &img_p)? != fp_p {
        return Err(GoeritzError::NotStabilizer);
    }

    let named = |n: CurveName| curve::pushoff(model, model.curve_cycle(n), true);
    let b_img = mcg::apply_word(model, g, &named(CurveName::B))?;
    let fp_b_img = curve::fingerprint(model, &b_img)?;
    let b = if fp_b_img == curve::fingerprint(model, &named(CurveName::C))? {
        1u8
    } else if fp_b_img == curve::fingerprint(model, &named(CurveName::B))? {
        0u8
    } else {
        return Err(GoeritzError::ResolutionFailure(
            "stabilizer image of B is neither B nor C".into(),
        ));
    };

    let mut g2 = GroupWord::identity();
    if b == 1 {
        g2.0.push(Token { gen: Gen::Nu, exp: 1 });
    }
    let g2 = g2.then_first(g);

    let x_path = named(CurveName::X);
    let target = mcg::apply_word(model, &g2, &x_path)?;
    let target_fp = curve::fingerprint(model, &target)?;
    let bound = curve::intersection_with_named(model, &target, CurveName::A)? as i64 + 2;

    let mut c: Option<i64> = None;
    let mut pos = x_path.clone();
    let mut neg = x_path.clone();
    if target_fp == curve::fingerprint(model, &x_path)? {
        c = Some(0);
    } else {
        for k in 1..=bound {
            pos = mcg::apply_word(model, &Move::BetaPlus.word(), &pos)?;
            if curve::fingerprint(model, &pos)? == target_fp {
                c = Some(k);
                break;
            }
            neg = mcg::apply_word(model, &Move::BetaMinus.word(), &neg)?;
            if curve::fingerprint(model, &neg)? == target_fp {
                c = Some(-k);
                break;
            }
        }
    }
    let c = c.ok_or_else(|| {
        GoeritzError::ResolutionFailure(format!(
            "no beta power within |c| <= {bound} matches the stabilizer action on X"
        ))
    })?;

    let mut h = GroupWord::single(Gen::Beta, -c);
    if b == 1 {
        h.0.push(Token { gen: Gen::Nu, exp: 1 });
    }
    let h = h.then_first(g);
    let rep = mcg::homology_rep(model, &h);
    let a = if rep == HomologyMatrix::identity() {
        0u8
    } else if rep == HomologyMatrix::neg_identity() {
        1u8
    } else {
        return Err(GoeritzError::ResolutionFailure(
            "residual stabilizer word is not plus or minus identity on homology".into(),
        ));
    };
    Ok((a, b, c))
}

/// The unique representation `alpha^a nu^b beta^c prod(phi nu^{s_i} beta^{r_i})`.
/// Factors are stored in application order: `factors[0]` acts first.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NormalForm {
    pub a: u8,
    pub b: u8,
    pub c: i64,
    pub factors: Vec<(u8, i64)>,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm {
            a: 0,
            b: 0,
            c: 0,
            factors: Vec::new(),
        }
    }

    /// The normal form as a word (leftmost applied last): the prefix, then
    /// the factors from last-applied to first-applied.
    pub fn to_word(&self) -> GroupWord {
        let mut tokens = Vec::new();
        if self.a != 0 {
            tokens.push(Token { gen: Gen::Alpha, exp: 1 });
        }
        if self.b != 0 {
            tokens.push(Token { gen: Gen::Nu, exp: 1 });
        }
        if self.c != 0 {
            tokens.push(Token { gen: Gen::Beta, exp: self.c });
        }
        for &(s, r) in self.factors.iter().rev() {
            tokens.push(Token { gen: Gen::Phi, exp: 1 });
            if s != 0 {
                tokens.push(Token { gen: Gen::Nu, exp: 1 });
            }
            if r != 0 {
                tokens.push(Token { gen: Gen::Beta, exp: r });
            }
        }
        GroupWord(tokens)
    }
}

impl std::fmt::Display for NormalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// Splits a reduction word into beta-runs and `phi nu^s` steps, reading
/// from the first-applied (rightmost) token: returns `(l_0, [(s_1, l_1),
/// ..., (s_n, l_n)])` for `u = beta^{l_n} (phi nu^{s_n}) ... beta^{l_1}
/// (phi nu^{s_1}) beta^{l_0}` in application order.
fn split_reduction_word(u: &GroupWord) -> Result<(i64, Vec<(u8, i64)>), GoeritzError> {
    let mut runs: Vec<(u8, i64)> = Vec::new();
    let mut l0 = 0i64;
    let mut iter = u.0.iter().rev().peekable();
    // Leading beta-run (first applied).
    while let Some(t) = iter.peek() {
        if t.gen == Gen::Beta {
            l0 += t.exp;
            iter.next();
        } else {
            break;
        }
    }
    while let Some(t) = iter.next() {
        let s = match t.gen {
            Gen::Nu => {
                let next = iter.next().ok_or_else(|| {
                    GoeritzError::MalformedWord("nu not preceded by phi".into())
                })?;
                if next.gen != Gen::Phi || next.exp != 1 {
                    return Err(GoeritzError::MalformedWord(
                        "expected phi to the left of nu".into(),
                    ));
                }
                if t.exp.rem_euclid(2) != 1 {
                    return Err(GoeritzError::MalformedWord("nu with even exponent".into()));
                }
                1u8
            }
            Gen::Phi => {
                if t.exp != 1 {
                    return Err(GoeritzError::MalformedWord("phi with exponent != 1".into()));
                }
                0u8
            }
            other => {
                return Err(GoeritzError::MalformedWord(format!(
                    "unexpected generator {other:?} in reduction word"
                )))
            }
        };
        let mut l = 0i64;
        while let Some(next) = iter.peek() {
            if next.gen == Gen::Beta {
                l += next.exp;
                iter.next();
            } else {
                break;
            }
        }
        runs.push((s, l));
    }
    Ok((l0, runs))
}

/// Assembles the normal form of `f = u^{-1} (alpha^a nu^b beta^c)` from a
/// reduction word `u` and the resolved stabilizer exponents.
///
/// Inverting the reduction and sliding each `nu` leftward across the beta
/// powers (they commute) fuses it with the `phi` on its left; the
/// stabilizer's `nu^b beta^c` folds into the first-applied factor and
/// `alpha` stays global.
pub fn assemble_normal_form(
    u: &GroupWord,
    stab: (u8, u8, i64),
) -> Result<NormalForm, GoeritzError> {
    let (a, b, c) = stab;
    let (l0, runs) = split_reduction_word(u)?;
    if runs.is_empty() {
        return Ok(NormalForm {
            a,
            b,
            c: c - l0,
            factors: Vec::new(),
        });
    }
    let n = runs.len();
    // Application-order factors: the first-applied factor absorbs the
    // stabilizer's nu^b and beta^c together with the last beta-run of the
    // reduction; the prefix absorbs the first
    // reduction step's nu and the leading beta-run.
    let mut factors = Vec::with_capacity(n);
    factors.push((b, c - runs[n - 1].1));
    for i in (1..n).rev() {
        factors.push((runs[i].0, -runs[i - 1].1));
    }
    Ok(NormalForm {
        a,
        b: runs[0].0,
        c: -l0,
        factors,
    })
}

/// The unique normal form of a word over the generator alphabet.
///
/// The reduction word is inverted and reshaped by the curve-level
/// commutations; those hold only up to the hyperelliptic involution
/// (sliding `nu` across `beta` powers flips the homology sign), so the
/// final `alpha` exponent is re-resolved against the homology
/// representation, the one layer that sees it.
pub fn normal_form(model: &SurfaceModel, w: &GroupWord) -> Result<NormalForm, GoeritzError> {
    let p_path = standard_curve(model);
    let q = mcg::apply_word(model, w, &p_path)?;
    let (u, _trace) = reduce(model, &q)?;
    let g = u.then_first(w);
    let stab = stabilizer_resolve(model, &g)?;
    let mut nf = assemble_normal_form(&u, stab)?;
    let target = mcg::homology_rep(model, w);
    let got = mcg::homology_rep(model, &nf.to_word());
    if got != target {
        if got.mul(&HomologyMatrix::neg_identity()) != target {
            return Err(GoeritzError::InvariantViolation(
                "assembled form differs from the input by more than the hyperelliptic \
                 involution on homology"
                    .into(),
            ));
        }
        nf.a ^= 1;
        debug_assert_eq!(mcg::homology_rep(model, &nf.to_word()), target);
    }
    Ok(nf)
}

/// Element equality: equality of normal forms.
pub fn equal_elements(
    model: &SurfaceModel,
    w1: &GroupWord,
    w2: &GroupWord,
) -> Result<bool, GoeritzError> {
    Ok(normal_form(model, w1)? == normal_form(model, w2)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_rejects_odd_triples() {
        let t = IntersectionTriple {
            n_a: 4,
            n_b: 1,
            n_c: 1,
        };
        assert!(matches!(
            complexity(t),
            Err(GoeritzError::OddIntersection(4, 1, 1))
        ));
        let t = IntersectionTriple {
            n_a: 2,
            n_b: 0,
            n_c: 0,
        };
        assert_eq!(complexity(t).unwrap(), Complexity(1));
    }

    #[test]
    fn is_standard_flags_impossible_triple() {
        let t = IntersectionTriple {
            n_a: 4,
            n_b: 0,
            n_c: 0,
        };
        assert!(matches!(
            is_standard(t),
            Err(GoeritzError::InvariantViolation(_))
        ));
    }

    #[test]
    fn split_reduction_word_reads_runs() {
        let u = mcg::parse_word("phi beta^-1 phi").unwrap();
        let (l0, runs) = split_reduction_word(&u).unwrap();
        assert_eq!(l0, 0);
        assert_eq!(runs, vec![(0, -1), (0, 0)]);
        let u = mcg::parse_word("phi nu beta^-1 phi").unwrap();
        let (l0, runs) = split_reduction_word(&u).unwrap();
        assert_eq!(l0, 0);
        assert_eq!(runs, vec![(0, -1), (1, 0)]);
    }

    #[test]
    fn assemble_matches_worked_example() {
        // u = phi beta^-1 phi with trivial stabilizer: factors (0,0) then
        // (0,1), i.e. the element phi beta phi.
        let u = mcg::parse_word("phi beta^-1 phi").unwrap();
        let nf = assemble_normal_form(&u, (0, 0, 0)).unwrap();
        assert_eq!(nf.a, 0);
        assert_eq!(nf.b, 0);
        assert_eq!(nf.c, 0);
        assert_eq!(nf.factors, vec![(0, 0), (0, 1)]);
        assert_eq!(format!("{nf}"), "phi beta phi");
    }

    #[test]
    fn assemble_pure_stabilizer() {
        let u = GroupWord::identity();
        let nf = assemble_normal_form(&u, (1, 1, -2)).unwrap();
        assert_eq!(
            nf,
            NormalForm {
                a: 1,
                b: 1,
                c: -2,
                factors: vec![]
            }
        );
        assert_eq!(format!("{nf}"), "alpha nu beta^-2");
    }
}
