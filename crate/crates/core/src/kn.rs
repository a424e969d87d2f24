//! Conversion of orthosymplectic tableaux over `J(m+0)` into
//! Kashiwara-Nakashima tableaux of types B and C.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, AlphabetKind, Letter};
use crate::character::classical_weight;
use crate::crystal::weight_of;
use crate::error::{Error, Result};
use crate::osp::{enumerate, pieces_for, spin_pieces, GKind, OspTableau, PShape, Piece};
use crate::tableau::Column;
use crate::weyl::{self, ClassicalType};

/// Ordered `1 < ... < m < 0 < bar m < ... < bar 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KnLetter {
    Pos(u32),
    Zero,
    Bar(u32),
}

impl KnLetter {
    fn rank(self) -> (u8, i64) {
        match self {
            KnLetter::Pos(k) => (0, k as i64),
            KnLetter::Zero => (1, 0),
            KnLetter::Bar(k) => (2, -(k as i64)),
        }
    }
}

impl Ord for KnLetter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for KnLetter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KnLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnLetter::Pos(k) => write!(f, "{k}"),
            KnLetter::Zero => write!(f, "0"),
            KnLetter::Bar(k) => write!(f, "b{k}"),
        }
    }
}

impl FromStr for KnLetter {
    type Err = Error;

    fn from_str(s: &str) -> Result<KnLetter> {
        let bad = || Error::Parse(format!("bad KN letter `{s}`"));
        if s == "0" {
            return Ok(KnLetter::Zero);
        }
        if let Some(rest) = s.strip_prefix('b') {
            return rest.parse().ok().filter(|&k| k > 0).map(KnLetter::Bar).ok_or_else(bad);
        }
        s.parse().ok().filter(|&k| k > 0).map(KnLetter::Pos).ok_or_else(bad)
    }
}

impl Serialize for KnLetter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KnLetter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<KnLetter, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnColumn {
    pub entries: Vec<KnLetter>,
    /// Spin columns carry half weights.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub spin: bool,
}

impl fmt::Display for KnColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "{}[{}]", if self.spin { "sp" } else { "" }, body.join(","))
    }
}

/// Columns listed left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnTableau {
    pub columns: Vec<KnColumn>,
}

impl KnTableau {
    pub fn heights(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.entries.len()).collect()
    }

    /// Doubled classical weight.
    pub fn weight(&self, m: u32) -> Vec<i64> {
        let mut w = vec![0i64; m as usize];
        for c in &self.columns {
            let unit = if c.spin { 1 } else { 2 };
            for &x in &c.entries {
                match x {
                    KnLetter::Pos(k) => w[k as usize - 1] += unit,
                    KnLetter::Bar(k) => w[k as usize - 1] -= unit,
                    KnLetter::Zero => {}
                }
            }
        }
        w
    }
}

impl fmt::Display for KnTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", body.join(" "))
    }
}

fn bars(col: &Column) -> Result<Vec<u32>> {
    col.entries()
        .iter()
        .map(|x| x.bar_index().ok_or_else(|| Error::Unsupported(format!("letter {x} outside J(m+0)"))))
        .collect()
}

/// The KN column of one piece with parameter `a`.
pub fn to_kn_column(piece: &Piece, a: usize, g: GKind, m: u32) -> Result<KnColumn> {
    if piece.spin {
        let present = bars(&piece.right)?;
        let entries = (1..=m)
            .map(|k| if present.contains(&k) { KnLetter::Bar(k) } else { KnLetter::Pos(k) })
            .collect::<Vec<_>>();
        let mut entries = entries;
        entries.sort();
        return Ok(KnColumn { entries, spin: true });
    }
    let (left, right) = piece.split();
    let right_bars = bars(&right)?;
    let left_bars = bars(&left)?;
    let mut entries: Vec<KnLetter> = (1..=m).filter(|k| !right_bars.contains(k)).map(KnLetter::Pos).collect();
    if g.is_b() {
        let zeros = (a + piece.right.height())
            .checked_sub(piece.left.height())
            .ok_or_else(|| Error::Precondition(format!("piece {piece} is not of parameter {a}")))?;
        entries.extend(std::iter::repeat_n(KnLetter::Zero, zeros));
    }
    entries.extend(left_bars.into_iter().map(KnLetter::Bar));
    Ok(KnColumn { entries, spin: false })
}

fn require_plus(alphabet_m: u32, t: &OspTableau) -> Result<()> {
    for (a, _) in t.content() {
        if !a.is_barred() || a.bar_index().is_some_and(|k| k > alphabet_m) {
            return Err(Error::Unsupported(format!("KN conversion needs letters of J({alphabet_m}+0), found {a}")));
        }
    }
    Ok(())
}

pub fn to_kn_tableau(t: &OspTableau, m: u32) -> Result<KnTableau> {
    require_plus(m, t)?;
    let g = t.shape.g;
    let mut columns = Vec::with_capacity(t.len());
    for (k, piece) in t.pieces.iter().enumerate() {
        let a = OspTableau::slot_param(&t.shape, k + 1);
        columns.push(to_kn_column(piece, a, g, m)?);
    }
    // the k-th piece is the k-th column from the right
    columns.reverse();
    let heights: Vec<usize> = columns.iter().filter(|c| !c.spin).map(|c| c.entries.len()).collect();
    if heights.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Verification(format!("KN columns of {t} do not form a Young shape")));
    }
    Ok(KnTableau { columns })
}

/// Recovers a piece from its KN column by search over the finite piece set.
pub fn from_kn_column(col: &KnColumn, a: usize, g: GKind, m: u32) -> Result<Piece> {
    let alphabet = Alphabet::plus(m, 0);
    let candidates =
        if col.spin { spin_pieces(&alphabet, m as usize) } else { pieces_for(g, a, &alphabet, 2 * m as usize) };
    let mut found = None;
    for p in candidates {
        if to_kn_column(&p, a, g, m)? == *col {
            if found.is_some() {
                return Err(Error::Verification(format!("KN column {col} has several preimages")));
            }
            found = Some(p);
        }
    }
    found.ok_or_else(|| Error::Reversal(format!("KN column {col} has no preimage")))
}

pub fn from_kn_tableau(kn: &KnTableau, shape: &PShape, m: u32) -> Result<OspTableau> {
    let l = shape.tuple_length();
    if kn.columns.len() != l {
        return Err(Error::Reversal(format!("expected {l} KN columns, found {}", kn.columns.len())));
    }
    let pieces = kn
        .columns
        .iter()
        .rev()
        .enumerate()
        .map(|(k, c)| from_kn_column(c, OspTableau::slot_param(shape, k + 1), shape.g, m))
        .collect::<Result<Vec<_>>>()?;
    let t = OspTableau::new(shape.clone(), pieces);
    t.validate(&Alphabet::plus(m, 0)).map_err(|e| Error::Reversal(e.to_string()))?;
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KnReport {
    pub count: usize,
    pub shape: Vec<usize>,
    pub highest_weight: Vec<i64>,
    pub oracle_dimension: u64,
    pub failures: Vec<String>,
}

impl KnReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Injectivity, shape coherence, weight agreement, the inverse, and the
/// dimension count against the Weyl oracle.
pub fn verify_kn_correspondence(shape: &PShape, m: u32) -> Result<KnReport> {
    if shape.g == GKind::BBullet {
        return Err(Error::Unsupported("KN conversion covers types b and c".into()));
    }
    let alphabet = Alphabet::standard(AlphabetKind::Plus, m, 0)?;
    shape.check_fits(&alphabet)?;
    let all = enumerate(shape, &alphabet, usize::MAX);
    let mut failures = Vec::new();
    let mut seen: HashMap<KnTableau, OspTableau> = HashMap::new();
    let mut shapes: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut highest = None;
    for t in &all {
        let kn = match to_kn_tableau(t, m) {
            Ok(kn) => kn,
            Err(e) => {
                failures.push(format!("{t}: {e}"));
                continue;
            }
        };
        *shapes.entry(kn.heights()).or_insert(0) += 1;
        let wt = classical_weight(&weight_of(t), shape.g, m);
        if kn.weight(m) != wt {
            failures.push(format!("{t}: KN weight {:?} differs from {wt:?}", kn.weight(m)));
        }
        if highest.as_ref().is_none_or(|h: &Vec<i64>| wt > *h) {
            highest = Some(wt);
        }
        match from_kn_tableau(&kn, shape, m) {
            Ok(back) if back == *t => {}
            Ok(back) => failures.push(format!("{t}: inverse gives {back}")),
            Err(e) => failures.push(format!("{t}: inverse failed: {e}")),
        }
        if let Some(prev) = seen.insert(kn.clone(), t.clone()) {
            failures.push(format!("{prev} and {t} share the KN tableau {kn}"));
        }
    }
    if shapes.len() > 1 {
        failures.push(format!("KN images have several shapes: {:?}", shapes.keys().collect::<Vec<_>>()));
    }
    let expected: Vec<usize> = (1..=shape.tuple_length())
        .rev()
        .map(|k| m as usize - if shape.has_spin() && k == shape.tuple_length() { 0 } else { shape.conj(k) })
        .collect();
    let kn_shape = shapes.keys().next().cloned().unwrap_or(expected.clone());
    if kn_shape != expected {
        failures.push(format!("KN shape {kn_shape:?}, expected heights {expected:?}"));
    }
    let ty = if shape.g == GKind::C { ClassicalType::C } else { ClassicalType::B };
    let hw = highest.unwrap_or_else(|| vec![0; m as usize]);
    let dim = weyl::dimension(ty, &hw)?;
    if dim != all.len() as u64 {
        failures.push(format!("{} tableaux but the oracle dimension is {dim}", all.len()));
    }
    Ok(KnReport { count: all.len(), shape: kn_shape, highest_weight: hw, oracle_dimension: dim, failures })
}

/// Parses a KN column written as `2,5,b5,b2`.
pub fn parse_kn_column(s: &str) -> Result<Vec<KnLetter>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse()).collect()
}

pub fn letter_to_kn(a: Letter) -> Option<KnLetter> {
    a.bar_index().map(KnLetter::Bar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(s: &str) -> Column {
        Column::new(s.split_whitespace().map(|x| x.parse().unwrap()).collect())
    }

    #[test]
    fn type_c_example() {
        let p = Piece::new(col("b5 b3 b2"), col("b4 b1"));
        let kn = to_kn_column(&p, 1, GKind::C, 5).unwrap();
        assert_eq!(kn.entries, parse_kn_column("2,5,b5,b2").unwrap());
    }

    #[test]
    fn type_b_example() {
        let p = Piece::new(col("b5 b3 b1"), col("b5 b4 b1"));
        let kn = to_kn_column(&p, 1, GKind::B, 5).unwrap();
        assert_eq!(kn.entries, parse_kn_column("2,0,b5,b1").unwrap());
    }

    #[test]
    fn letter_order() {
        let mut v = parse_kn_column("b1,0,b5,2,5").unwrap();
        v.sort();
        assert_eq!(v, parse_kn_column("2,5,0,b5,b1").unwrap());
    }

    #[test]
    fn full_column_gives_empty() {
        let p = Piece::new(col("b2 b1"), Column::empty());
        assert!(to_kn_column(&p, 2, GKind::C, 2).unwrap().entries.is_empty());
    }

    #[test]
    fn empty_tableau_is_rectangular() {
        let shape = PShape::new(GKind::C, vec![], 2).unwrap();
        let t = OspTableau::new(shape, vec![Piece::empty(), Piece::empty()]);
        let kn = to_kn_tableau(&t, 3).unwrap();
        assert_eq!(kn.heights(), vec![3, 3]);
        assert!(kn.columns.iter().all(|c| c.entries == parse_kn_column("1,2,3").unwrap()));
    }

    #[test]
    fn correspondence_examples() {
        let r = verify_kn_correspondence(&PShape::new(GKind::C, vec![1], 1).unwrap(), 2).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!((r.count, r.oracle_dimension), (4, 4));
        let r = verify_kn_correspondence(&PShape::new(GKind::C, vec![], 1).unwrap(), 1).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.count, 2);
        let r = verify_kn_correspondence(&PShape::new(GKind::B, vec![], 1).unwrap(), 2).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.count, 4);
    }

    #[test]
    fn rejects_positive_letters() {
        let shape = PShape::new(GKind::C, vec![], 1).unwrap();
        let one = col("1");
        let t = OspTableau::new(shape, vec![Piece::new(one.clone(), one)]);
        assert!(matches!(to_kn_tableau(&t, 2), Err(Error::Unsupported(_))));
    }
}
