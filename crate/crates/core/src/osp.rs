//! Orthosymplectic tableaux: two-column pieces, spin columns, the split
//! `(^L T, ^R T)`, admissibility and enumeration by shape.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, AlphabetKind, Letter};
use crate::error::{Error, Result};
use crate::signatures::{pair_signature, r_matrix, Signature};
use crate::tableau::{column_step_ok, row_step_ok, Column, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GKind {
    #[serde(rename = "b")]
    B,
    #[serde(rename = "bb")]
    BBullet,
    #[serde(rename = "c")]
    C,
}

impl GKind {
    pub fn is_b(self) -> bool {
        matches!(self, GKind::B | GKind::BBullet)
    }

    /// Level contributed by one two-column piece.
    pub fn piece_level(self) -> i64 {
        if self.is_b() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for GKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GKind::B => "b",
            GKind::BBullet => "bb",
            GKind::C => "c",
        })
    }
}

impl FromStr for GKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GKind> {
        match s {
            "b" => Ok(GKind::B),
            "bb" | "b_bullet" => Ok(GKind::BBullet),
            "c" => Ok(GKind::C),
            _ => Err(Error::Parse(format!("unknown type `{s}` (expected b, bb or c)"))),
        }
    }
}

/// A two-column piece `(T^L, T^R)` or a spin column `(empty, T)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Piece {
    pub left: Column,
    pub right: Column,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub spin: bool,
}

impl Piece {
    pub fn new(left: Column, right: Column) -> Piece {
        Piece { left, right, spin: false }
    }

    pub fn spin(column: Column) -> Piece {
        Piece { left: Column::empty(), right: column, spin: true }
    }

    pub fn empty() -> Piece {
        Piece::new(Column::empty(), Column::empty())
    }

    pub fn size(&self) -> usize {
        self.left.height() + self.right.height()
    }

    /// `(b, c)` of the shape `λ(a, b, c)` carrying these column heights.
    pub fn bc(&self, a: usize) -> Option<(usize, usize)> {
        let c = self.left.height().checked_sub(a)?;
        let b = self.right.height().checked_sub(c)?;
        Some((b, c))
    }

    /// The piece as a skew tableau of shape `λ(a, b, c)`.
    pub fn as_tableau(&self, a: usize) -> Option<Tableau> {
        if self.spin {
            return Some(Tableau::from_columns(vec![self.right.entries().to_vec()]));
        }
        let (b, _) = self.bc(a)?;
        Tableau::from_skew_columns(
            vec![self.left.entries().to_vec(), self.right.entries().to_vec()],
            vec![b, 0],
        )
        .ok()
    }

    fn semistandard_on(&self, b: usize) -> bool {
        if !self.left.is_semistandard() || !self.right.is_semistandard() {
            return false;
        }
        let l = self.left.entries();
        let r = self.right.entries();
        // left row j (from the left column's top) sits beside right entry b + j
        l.iter().enumerate().all(|(j, &x)| r.get(b + j).is_none_or(|&y| row_step_ok(x, y)))
    }

    pub fn signature(&self) -> Signature {
        pair_signature(&self.left, &self.right)
    }

    /// Membership in the set of pieces of type `g` for parameter `a`.
    pub fn is_member(&self, g: GKind, a: usize, alphabet: &Alphabet) -> bool {
        let letters_ok = self.left.entries().iter().chain(self.right.entries()).all(|&x| alphabet.contains(x));
        if !letters_ok {
            return false;
        }
        if self.spin {
            return self.left.is_empty() && self.right.is_semistandard();
        }
        let Some((b, _)) = self.bc(a) else { return false };
        if !self.semistandard_on(b) {
            return false;
        }
        match g {
            GKind::C => b == 0,
            GKind::B | GKind::BBullet => self.signature() == Signature::new(a, b),
        }
    }

    /// `(^L T, ^R T) = R(T^L -> T^R)`; a spin column splits as `(empty, T)`.
    pub fn split(&self) -> (Column, Column) {
        if self.spin {
            return (Column::empty(), self.right.clone());
        }
        let p = Tableau::from_columns(vec![self.right.entries().to_vec()]).inserted(self.left.entries());
        let first = p.column(0);
        let second = p.column(1);
        r_matrix(&first, &second).expect("the first column of an insertion is the tallest")
    }

    pub fn content(&self) -> impl Iterator<Item = Letter> + '_ {
        self.left.entries().iter().chain(self.right.entries()).copied()
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &Column| c.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.spin {
            write!(f, "sp[{}]", show(&self.right))
        } else {
            write!(f, "[{}|{}]", show(&self.left), show(&self.right))
        }
    }
}

/// Admissibility `S < T` for `S` with parameter `p` and `T` with parameter `q`.
pub fn is_admissible(s: &Piece, p: usize, t: &Piece, q: usize) -> Result<bool> {
    let p = if s.spin { 0 } else { p };
    if p > q {
        return Err(Error::Precondition(format!("admissibility needs p = {p} <= q = {q}")));
    }
    if s.right.height() + p > t.left.height() {
        return Ok(false);
    }
    let strict_ok = |x: Letter, y: Letter| x < y || (x == y && x.is_even());
    let (_, rs) = s.split();
    let (lt, _) = t.split();
    for i in 1..=rs.height().min(t.left.height()) {
        if !strict_ok(rs.from_bottom(i).unwrap(), t.left.from_bottom(i).unwrap()) {
            return Ok(false);
        }
    }
    let shift = q - p;
    for i in 1..=lt.height() {
        if let Some(x) = s.right.from_bottom(i + shift) {
            if !strict_ok(x, lt.from_bottom(i).unwrap()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A shape `(λ, ℓ)` of type `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PShape {
    pub g: GKind,
    pub lambda: Vec<usize>,
    pub ell: usize,
}

impl PShape {
    pub fn new(g: GKind, mut lambda: Vec<usize>, ell: usize) -> Result<PShape> {
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec("λ must be weakly decreasing".into()));
        }
        if ell == 0 {
            return Err(Error::InvalidSpec("ℓ must be positive".into()));
        }
        let l1 = lambda.first().copied().unwrap_or(0);
        let ok = match g {
            GKind::C => ell >= l1,
            GKind::B => ell >= 2 * l1,
            GKind::BBullet => ell >= 2 * l1 && (ell - 2 * l1).is_multiple_of(2),
        };
        if !ok {
            return Err(Error::InvalidSpec(format!("({lambda:?}, {ell}) is not a shape of type {g}")));
        }
        Ok(PShape { g, lambda, ell })
    }

    /// Whether the last slot holds a spin column.
    pub fn has_spin(&self) -> bool {
        self.g == GKind::B && (self.ell - 2 * self.lambda.first().copied().unwrap_or(0)) % 2 == 1
    }

    pub fn tuple_length(&self) -> usize {
        match self.g {
            GKind::C => self.ell,
            GKind::BBullet => self.ell / 2,
            GKind::B if self.has_spin() => self.ell.div_ceil(2),
            GKind::B => self.ell / 2,
        }
    }

    /// `λ'_k`, 1-based.
    pub fn conj(&self, k: usize) -> usize {
        self.lambda.iter().filter(|&&p| p >= k).count()
    }

    /// Whether the shape survives truncation to the given alphabet.
    pub fn fits(&self, alphabet: &Alphabet) -> bool {
        let m = alphabet.m() as usize;
        let n = alphabet.n() as usize;
        match alphabet.kind() {
            AlphabetKind::Plus => self.lambda.len() <= m + n,
            AlphabetKind::Super => self.lambda.get(m).copied().unwrap_or(0) <= n,
            AlphabetKind::Custom => true,
        }
    }

    pub fn check_fits(&self, alphabet: &Alphabet) -> Result<()> {
        if self.fits(alphabet) {
            Ok(())
        } else {
            Err(Error::NotRepresentable(format!("λ = {:?} does not fit {alphabet}", self.lambda)))
        }
    }
}

impl fmt::Display for PShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda.iter().map(|p| p.to_string()).collect();
        write!(f, "{}(({}),{})", self.g, parts.join(","), self.ell)
    }
}

/// An orthosymplectic tableau; `pieces[k - 1]` is `T_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OspTableau {
    pub shape: PShape,
    pub pieces: Vec<Piece>,
}

impl OspTableau {
    pub fn new(shape: PShape, pieces: Vec<Piece>) -> OspTableau {
        OspTableau { shape, pieces }
    }

    /// Parameter `a` of slot `k` (1-based); 0 for the spin slot.
    pub fn slot_param(shape: &PShape, k: usize) -> usize {
        shape.conj(k)
    }

    pub fn piece(&self, k: usize) -> &Piece {
        &self.pieces[k - 1]
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.pieces.iter().map(Piece::size).sum()
    }

    pub fn content(&self) -> BTreeMap<Letter, usize> {
        let mut m = BTreeMap::new();
        for x in self.pieces.iter().flat_map(|p| p.content()) {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }

    /// Full membership check, with a reason on failure.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        let l = self.shape.tuple_length();
        if self.pieces.len() != l {
            return Err(Error::InvalidInput(format!("expected {l} pieces, found {}", self.pieces.len())));
        }
        for (idx, piece) in self.pieces.iter().enumerate() {
            let k = idx + 1;
            let spin_slot = self.shape.has_spin() && k == l;
            if piece.spin != spin_slot {
                return Err(Error::InvalidInput(format!("slot {k} has the wrong spin flag")));
            }
            if !piece.is_member(self.shape.g, self.shape.conj(k), alphabet) {
                return Err(Error::InvalidInput(format!("piece {k} = {piece} is not a member")));
            }
        }
        for k in 1..l {
            let (s, t) = (&self.pieces[k], &self.pieces[k - 1]);
            if !is_admissible(s, self.shape.conj(k + 1), t, self.shape.conj(k))? {
                return Err(Error::InvalidInput(format!("T_{} < T_{k} fails", k + 1)));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, alphabet: &Alphabet) -> bool {
        self.validate(alphabet).is_ok()
    }

    /// Content as a vector over the alphabet, for ordering.
    pub fn weight_vector(&self, alphabet: &Alphabet) -> Vec<usize> {
        let c = self.content();
        alphabet.letters().iter().map(|x| c.get(x).copied().unwrap_or(0)).collect()
    }
}

impl fmt::Display for OspTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().rev().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct OspRepr {
    g: GKind,
    lambda: Vec<usize>,
    ell: usize,
    pieces: Vec<PieceRepr>,
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    #[serde(flatten)]
    tableau: Tableau,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    spin: bool,
}

impl Serialize for OspTableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .rev()
            .map(|(idx, p)| {
                let tableau = if p.spin {
                    Tableau::from_columns(vec![p.right.entries().to_vec()])
                } else {
                    let (b, _) = p.bc(self.shape.conj(idx + 1)).unwrap_or((0, 0));
                    Tableau::from_skew_columns(vec![p.left.entries().to_vec(), p.right.entries().to_vec()], vec![b, 0])
                        .unwrap_or_else(|_| Tableau::from_columns(vec![p.left.entries().to_vec(), p.right.entries().to_vec()]))
                };
                PieceRepr { tableau, spin: p.spin }
            })
            .collect();
        OspRepr { g: self.shape.g, lambda: self.shape.lambda.clone(), ell: self.shape.ell, pieces }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OspTableau {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<OspTableau, D::Error> {
        let repr = OspRepr::deserialize(d)?;
        let shape = PShape::new(repr.g, repr.lambda, repr.ell).map_err(serde::de::Error::custom)?;
        let mut pieces: Vec<Piece> = repr
            .pieces
            .into_iter()
            .map(|p| {
                let cols = p.tableau.columns();
                let col = |i: usize| Column::new(cols.get(i).cloned().unwrap_or_default());
                if p.spin {
                    Piece::spin(col(0))
                } else {
                    Piece::new(col(0), col(1))
                }
            })
            .collect();
        pieces.reverse();
        Ok(OspTableau { shape, pieces })
    }
}

/// All semistandard columns over `alphabet` of the given height.
pub fn columns_of_height(alphabet: &Alphabet, height: usize) -> Vec<Column> {
    fn go(letters: &[Letter], start: usize, left: usize, cur: &mut Vec<Letter>, out: &mut Vec<Column>) {
        if left == 0 {
            out.push(Column::new(cur.clone()));
            return;
        }
        for i in start..letters.len() {
            let x = letters[i];
            if cur.last().is_some_and(|&y| !column_step_ok(y, x)) {
                continue;
            }
            cur.push(x);
            go(letters, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(alphabet.letters(), 0, height, &mut Vec::new(), &mut out);
    out
}

/// Columns indexed by height, up to `max_height`.
pub fn columns_up_to(alphabet: &Alphabet, max_height: usize) -> Vec<Vec<Column>> {
    (0..=max_height).map(|h| columns_of_height(alphabet, h)).collect()
}

/// Largest column height the alphabet allows within `budget` cells.
fn height_cap(alphabet: &Alphabet, budget: usize) -> usize {
    if alphabet.has_odd() {
        budget
    } else {
        budget.min(alphabet.len())
    }
}

/// Every piece of type `g` for parameter `a` with at most `budget` cells.
pub fn pieces_for(g: GKind, a: usize, alphabet: &Alphabet, budget: usize) -> Vec<Piece> {
    let cap = height_cap(alphabet, budget);
    let cols = columns_up_to(alphabet, cap);
    let mut out = Vec::new();
    for hl in a..=cap {
        let c = hl - a;
        for left in &cols[hl] {
            let hr_range: Vec<usize> = match g {
                GKind::C => vec![c],
                _ => (c..=cap).collect(),
            };
            for hr in hr_range {
                if hl + hr > budget || hr > cap {
                    continue;
                }
                for right in &cols[hr] {
                    let p = Piece::new(left.clone(), right.clone());
                    if p.is_member(g, a, alphabet) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Every spin column with at most `budget` cells.
pub fn spin_pieces(alphabet: &Alphabet, budget: usize) -> Vec<Piece> {
    let cap = height_cap(alphabet, budget);
    (0..=cap).flat_map(|h| columns_of_height(alphabet, h)).map(Piece::spin).collect()
}

/// All orthosymplectic tableaux of the shape with at most `degree_bound`
/// cells, sorted by weight vector and then structurally.
pub fn enumerate(shape: &PShape, alphabet: &Alphabet, degree_bound: usize) -> Vec<OspTableau> {
    if !shape.fits(alphabet) {
        return Vec::new();
    }
    let l = shape.tuple_length();
    let per_slot: Vec<Vec<Piece>> = (1..=l)
        .map(|k| {
            if shape.has_spin() && k == l {
                spin_pieces(alphabet, degree_bound)
            } else {
                pieces_for(shape.g, shape.conj(k), alphabet, degree_bound)
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<Piece> = Vec::with_capacity(l);
    fn go(
        shape: &PShape,
        per_slot: &[Vec<Piece>],
        budget: usize,
        cur: &mut Vec<Piece>,
        out: &mut Vec<OspTableau>,
    ) {
        let k = cur.len() + 1;
        if k > per_slot.len() {
            out.push(OspTableau::new(shape.clone(), cur.clone()));
            return;
        }
        for p in &per_slot[k - 1] {
            if p.size() > budget {
                continue;
            }
            if let Some(prev) = cur.last() {
                if !is_admissible(p, shape.conj(k), prev, shape.conj(k - 1)).unwrap_or(false) {
                    continue;
                }
            }
            cur.push(p.clone());
            go(shape, per_slot, budget - p.size(), cur, out);
            cur.pop();
        }
    }
    go(shape, &per_slot, degree_bound, &mut cur, &mut out);
    out.sort_by_cached_key(|t| (t.degree(), t.weight_vector(alphabet), t.pieces.clone()));
    out
}

/// Partitions of `n` with parts at most `max_part` and at most `max_len` parts.
pub fn partitions(n: usize, max_part: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max_part: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if max_len == 0 {
            return;
        }
        for p in (1..=max_part.min(n)).rev() {
            cur.push(p);
            go(n - p, p, max_len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// Every shape of type `g` with `ℓ <= max_ell` and `|λ| <= max_size`.
pub fn shapes_up_to(g: GKind, max_ell: usize, max_size: usize) -> Vec<PShape> {
    let mut out = Vec::new();
    for ell in 1..=max_ell {
        for size in 0..=max_size {
            for lambda in partitions(size, usize::MAX, usize::MAX) {
                if let Ok(s) = PShape::new(g, lambda, ell) {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(s: &str) -> Column {
        Column::new(s.split_whitespace().map(|x| x.parse().unwrap()).collect())
    }

    fn example_s() -> Piece {
        Piece::new(col("b4 b3 b1 1/2 1/2"), col("b3 b2 3/2"))
    }

    fn example_t() -> Piece {
        Piece::new(col("b3 b1 1/2 3/2 3/2 5/2"), col("b4 b3 b2 b1 5/2"))
    }

    #[test]
    fn example_pieces_are_members() {
        let a = Alphabet::sup(4, 3);
        assert!(example_s().is_member(GKind::B, 2, &a));
        assert!(example_t().is_member(GKind::B, 3, &a));
        assert_eq!(example_t().bc(3), Some((2, 3)));
        assert!(Piece::empty().is_member(GKind::C, 0, &a));
        assert!(example_s().is_member(GKind::C, 2, &a));
        assert!(!example_t().is_member(GKind::C, 3, &a));
    }

    #[test]
    fn example_splits() {
        let (ls, rs) = example_s().split();
        assert_eq!((ls.clone(), rs.clone()), (col("b4 b3 1/2"), col("b3 b2 b1 1/2 3/2")));
        let s = example_s();
        let joined = Tableau::from_columns(vec![rs.entries().to_vec()]).inserted(ls.entries());
        assert_eq!(joined, Tableau::from_columns(vec![s.left.entries().to_vec(), s.right.entries().to_vec()]));
        assert_eq!(example_t().split(), (col("b3 b1 3/2"), col("b4 b3 b2 b1 1/2 3/2 5/2 5/2")));
        let sp = Piece::spin(col("b2 1/2"));
        assert_eq!(sp.split(), (Column::empty(), col("b2 1/2")));
    }

    #[test]
    fn example_pair_is_admissible() {
        assert!(is_admissible(&example_s(), 2, &example_t(), 3).unwrap());
        assert!(is_admissible(&Piece::empty(), 0, &example_t(), 3).unwrap());
        assert!(is_admissible(&example_t(), 3, &example_s(), 2).is_err());
        let mut bad = example_s();
        bad.right = col("b3 b2 5/2");
        assert!(!is_admissible(&bad, 2, &example_t(), 3).unwrap());
    }

    #[test]
    fn tuple_lengths() {
        assert_eq!(PShape::new(GKind::C, vec![1], 1).unwrap().tuple_length(), 1);
        let sp = PShape::new(GKind::B, vec![], 1).unwrap();
        assert_eq!(sp.tuple_length(), 1);
        assert!(sp.has_spin());
        assert_eq!(PShape::new(GKind::BBullet, vec![1], 4).unwrap().tuple_length(), 2);
        assert!(PShape::new(GKind::BBullet, vec![1], 3).is_err());
        assert!(PShape::new(GKind::C, vec![2], 1).is_err());
    }

    #[test]
    fn small_enumerations() {
        let c1 = PShape::new(GKind::C, vec![1], 1).unwrap();
        assert_eq!(enumerate(&c1, &Alphabet::plus(2, 0), 100).len(), 4);
        let c0 = PShape::new(GKind::C, vec![], 1).unwrap();
        let one = enumerate(&c0, &Alphabet::plus(1, 0), 100);
        assert_eq!(one.len(), 2);
        let sup = enumerate(&c0, &Alphabet::sup(1, 1), 2);
        assert_eq!(sup.len(), 3);
        let rows: Vec<String> = sup.iter().map(|t| t.to_string()).collect();
        assert!(rows.contains(&"([b1|1/2])".to_string()), "{rows:?}");
    }

    #[test]
    fn json_round_trip() {
        let shape = PShape::new(GKind::B, vec![3, 2], 6).unwrap();
        let t = OspTableau::new(shape, vec![example_t(), example_s(), Piece::empty()]);
        let s = serde_json::to_string(&t).unwrap();
        let back: OspTableau = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
