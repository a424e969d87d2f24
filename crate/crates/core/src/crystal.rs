//! Kashiwara operators on words and orthosymplectic tableaux, highest
//! elements, crystal graphs and their checks.
//!
//! Every operator on an orthosymplectic tableau is computed on one base word
//! `W = w(T_1) w(T_2) ... w(T_L)` with `w(T_k) = w(T_k^R) w(T_k^L)`, each column
//! read top to bottom. In the `m+n` convention the tensor word is `W`; in the
//! `m|n` convention it is the reverse of `W`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, AlphabetKind, Letter};
use crate::error::{Error, Result};
use crate::osp::{GKind, OspTableau, PShape, Piece};
use crate::tableau::{Column, Tableau, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    MPlusN,
    MSuperN,
}

impl Convention {
    pub fn for_alphabet(alphabet: &Alphabet) -> Convention {
        match alphabet.kind() {
            AlphabetKind::Super => Convention::MSuperN,
            _ => Convention::MPlusN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dir {
    E,
    F,
}

/// A crystal index. `Bar(m)` is the distinguished index; `Bar(k)` for
/// `k < m` joins `bar(k+1) -> bar(k)`; `Int(k)` joins `k -> k+1`; `Half(j)`
/// joins `j - 1/2 -> j + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Bar(u32),
    Zero,
    Int(u32),
    Half(u32),
}

impl Index {
    /// All indices for an alphabet, distinguished index first.
    pub fn all(alphabet: &Alphabet) -> Vec<Index> {
        let (m, n) = (alphabet.m(), alphabet.n());
        let mut out: Vec<Index> = (1..=m).rev().map(Index::Bar).collect();
        if n >= 1 {
            out.push(Index::Zero);
        }
        for k in 1..n {
            out.push(match alphabet.kind() {
                AlphabetKind::Super => Index::Half(k),
                _ => Index::Int(k),
            });
        }
        out
    }

    pub fn is_top(self, m: u32) -> bool {
        self == Index::Bar(m)
    }

    /// `(lo, hi)` with `f` sending `lo` to `hi`; `None` for the distinguished index.
    pub fn lo_hi(self, alphabet: &Alphabet) -> Option<(Letter, Letter)> {
        let m = alphabet.m();
        match self {
            Index::Bar(k) if k >= m => None,
            Index::Bar(k) => Some((Letter::bar(k + 1), Letter::bar(k))),
            Index::Zero => Some(match alphabet.kind() {
                AlphabetKind::Super => (Letter::bar(1), Letter::half(1)),
                _ => (Letter::bar(1), Letter::int(1)),
            }),
            Index::Int(k) => Some((Letter::int(k), Letter::int(k + 1))),
            Index::Half(j) => Some((Letter::half(j), Letter::half(j + 1))),
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Bar(k) => write!(f, "b{k}"),
            Index::Zero => write!(f, "0"),
            Index::Int(k) => write!(f, "{k}"),
            Index::Half(j) => write!(f, "{}/2", 2 * j - 1),
        }
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Index> {
        if s == "0" {
            return Ok(Index::Zero);
        }
        let l: Letter = s.parse().map_err(|_| Error::Parse(format!("bad crystal index `{s}`")))?;
        Ok(if let Some(k) = l.bar_index() {
            Index::Bar(k)
        } else if let Some(k) = l.int_value() {
            Index::Int(k)
        } else {
            Index::Half(l.half_index().expect("half-integer"))
        })
    }
}

impl Serialize for Index {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Index, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `level * Λ + Σ mult[a] δ_a`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub level: i64,
    pub mult: BTreeMap<Letter, i64>,
}

impl Weight {
    pub fn new(level: i64) -> Weight {
        Weight { level, mult: BTreeMap::new() }
    }

    pub fn add_letter(&mut self, a: Letter, k: i64) {
        let e = self.mult.entry(a).or_insert(0);
        *e += k;
        if *e == 0 {
            self.mult.remove(&a);
        }
    }

    pub fn get(&self, a: Letter) -> i64 {
        self.mult.get(&a).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.mult.values().sum()
    }

    pub fn plus(&self, other: &Weight) -> Weight {
        let mut w = self.clone();
        w.level += other.level;
        for (&a, &k) in &other.mult {
            w.add_letter(a, k);
        }
        w
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}L", self.level)?;
        for (a, k) in &self.mult {
            write!(f, " {k}d[{a}]")?;
        }
        Ok(())
    }
}

pub fn weight_of(t: &OspTableau) -> Weight {
    let mut w = Weight::new(t.shape.ell as i64);
    for (a, k) in t.content() {
        w.add_letter(a, k as i64);
    }
    w
}

/// Reduces `-^eps +^phi` per factor, cancelling `(+, -)` pairs. Returns the
/// surviving `(eps, phi)` and the factors acted on by `e` and `f`.
fn lower_rule(factors: &[(usize, usize)]) -> (usize, usize, Option<usize>, Option<usize>) {
    let mut open: Vec<usize> = Vec::new();
    let mut minus: Vec<usize> = Vec::new();
    for (j, &(eps, phi)) in factors.iter().enumerate() {
        for _ in 0..eps {
            if open.pop().is_none() {
                minus.push(j);
            }
        }
        for _ in 0..phi {
            open.push(j);
        }
    }
    (minus.len(), open.len(), minus.last().copied(), open.first().copied())
}

fn letter_factors(word: &[Letter], lo: Letter, hi: Letter) -> Vec<(usize, usize)> {
    word.iter()
        .map(|&x| {
            if x == lo {
                (0, 1)
            } else if x == hi {
                (1, 0)
            } else {
                (0, 0)
            }
        })
        .collect()
}

/// How a non-distinguished index reads the base word.
enum Rule {
    /// Lower signature rule on the word as given.
    Forward,
    /// Lower signature rule on the reversed word.
    Reversed,
    /// The isotropic index: acts on the first letter among `lo`, `hi`.
    First,
}

fn base_rule(i: Index, conv: Convention) -> Rule {
    match (conv, i) {
        (Convention::MSuperN, Index::Half(_)) => Rule::Reversed,
        (Convention::MSuperN, Index::Zero) => Rule::First,
        _ => Rule::Forward,
    }
}

/// Acts on a base word; returns `(eps, phi, changed position)`.
fn act_on_base(word: &[Letter], lo: Letter, hi: Letter, rule: Rule, dir: Dir) -> (usize, usize, Option<usize>) {
    match rule {
        Rule::First => match word.iter().position(|&x| x == lo || x == hi) {
            None => (0, 0, None),
            Some(j) => {
                let is_hi = word[j] == hi;
                let (eps, phi) = if is_hi { (1, 0) } else { (0, 1) };
                let hit = match dir {
                    Dir::E if is_hi => Some(j),
                    Dir::F if !is_hi => Some(j),
                    _ => None,
                };
                (eps, phi, hit)
            }
        },
        Rule::Forward => {
            let (eps, phi, e, f) = lower_rule(&letter_factors(word, lo, hi));
            (eps, phi, if dir == Dir::E { e } else { f })
        }
        Rule::Reversed => {
            let rev: Vec<Letter> = word.iter().rev().copied().collect();
            let (eps, phi, e, f) = lower_rule(&letter_factors(&rev, lo, hi));
            let hit = if dir == Dir::E { e } else { f };
            (eps, phi, hit.map(|j| word.len() - 1 - j))
        }
    }
}

/// Kashiwara operator on a tensor word `w_1 ⊗ ... ⊗ w_r`. The distinguished
/// index has no meaning on plain words.
pub fn word_op(word: &[Letter], i: Index, dir: Dir, conv: Convention, alphabet: &Alphabet) -> Result<Option<Word>> {
    let (lo, hi) = i
        .lo_hi(alphabet)
        .ok_or_else(|| Error::Unsupported(format!("index {i} acts on pieces, not on words")))?;
    // the tensor word relates to the base word by reversal in the super convention
    let base: Word = match conv {
        Convention::MPlusN => word.to_vec(),
        Convention::MSuperN => word.iter().rev().copied().collect(),
    };
    let (_, _, hit) = act_on_base(&base, lo, hi, base_rule(i, conv), dir);
    Ok(hit.map(|j| {
        let mut out = base.clone();
        out[j] = if dir == Dir::E { lo } else { hi };
        if conv == Convention::MSuperN {
            out.reverse();
        }
        out
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn base_word(t: &OspTableau) -> (Word, Vec<(usize, Side, usize)>) {
    let mut w = Vec::new();
    let mut slots = Vec::new();
    for (k, p) in t.pieces.iter().enumerate() {
        for (side, col) in [(Side::Right, &p.right), (Side::Left, &p.left)] {
            for (pos, &x) in col.entries().iter().enumerate() {
                w.push(x);
                slots.push((k, side, pos));
            }
        }
    }
    (w, slots)
}

/// Factors for the distinguished index, in base-word order.
fn top_factors(t: &OspTableau, m: u32) -> Vec<(usize, Option<Side>)> {
    let mut out = Vec::new();
    for (k, p) in t.pieces.iter().enumerate() {
        if p.spin {
            out.push((k, Some(Side::Right)));
        } else if t.shape.g == GKind::C {
            out.push((k, None));
        } else {
            out.push((k, Some(Side::Right)));
            out.push((k, Some(Side::Left)));
        }
    }
    let _ = m;
    out
}

fn top_eps_phi(p: &Piece, side: Option<Side>, mbar: Letter) -> (usize, usize) {
    let is_top = |c: &Column| c.top() == Some(mbar);
    match side {
        None => {
            if is_top(&p.left) && is_top(&p.right) {
                (1, 0)
            } else if !is_top(&p.left) && !is_top(&p.right) {
                (0, 1)
            } else {
                (0, 0)
            }
        }
        Some(Side::Left) => if is_top(&p.left) { (1, 0) } else { (0, 1) },
        Some(Side::Right) => if is_top(&p.right) { (1, 0) } else { (0, 1) },
    }
}

fn top_action(t: &OspTableau, m: u32, dir: Dir) -> (usize, usize, Option<OspTableau>) {
    let mbar = Letter::bar(m);
    let factors = top_factors(t, m);
    let data: Vec<(usize, usize)> =
        factors.iter().map(|&(k, side)| top_eps_phi(&t.pieces[k], side, mbar)).collect();
    let (eps, phi, e, f) = lower_rule(&data);
    let hit = if dir == Dir::E { e } else { f };
    let out = hit.map(|j| {
        let (k, side) = factors[j];
        let mut res = t.clone();
        let piece = &mut res.pieces[k];
        let cols: Vec<&mut Column> = match side {
            None => vec![&mut piece.left, &mut piece.right],
            Some(Side::Left) => vec![&mut piece.left],
            Some(Side::Right) => vec![&mut piece.right],
        };
        for c in cols {
            match dir {
                Dir::E => {
                    c.pop_top();
                }
                Dir::F => c.push_top(mbar),
            }
        }
        res
    });
    (eps, phi, out)
}

/// `(eps_i, phi_i)` of an orthosymplectic tableau.
pub fn eps_phi(t: &OspTableau, i: Index, conv: Convention, alphabet: &Alphabet) -> (usize, usize) {
    if i.is_top(alphabet.m()) {
        let (eps, phi, _) = top_action(t, alphabet.m(), Dir::E);
        return (eps, phi);
    }
    let (lo, hi) = i.lo_hi(alphabet).expect("non-distinguished index");
    let (w, _) = base_word(t);
    let (eps, phi, _) = act_on_base(&w, lo, hi, base_rule(i, conv), Dir::E);
    (eps, phi)
}

/// `e_i` or `f_i` on an orthosymplectic tableau; `None` is the zero element.
pub fn osp_op(t: &OspTableau, i: Index, dir: Dir, conv: Convention, alphabet: &Alphabet) -> Option<OspTableau> {
    if i.is_top(alphabet.m()) {
        return top_action(t, alphabet.m(), dir).2;
    }
    let (lo, hi) = i.lo_hi(alphabet)?;
    let (w, slots) = base_word(t);
    let (_, _, hit) = act_on_base(&w, lo, hi, base_rule(i, conv), dir);
    let j = hit?;
    let (k, side, pos) = slots[j];
    let mut res = t.clone();
    let col = match side {
        Side::Left => &mut res.pieces[k].left,
        Side::Right => &mut res.pieces[k].right,
    };
    col.entries_mut()[pos] = if dir == Dir::E { lo } else { hi };
    Some(res)
}

/// `e_i` / `f_i` on a single piece of type `g` for parameter `a`.
pub fn piece_op(
    piece: &Piece,
    a: usize,
    g: GKind,
    i: Index,
    dir: Dir,
    conv: Convention,
    alphabet: &Alphabet,
) -> Option<Piece> {
    let (shape, spin) = single_piece_shape(g, a, piece.spin);
    let t = OspTableau::new(shape, vec![piece.clone()]);
    let _ = spin;
    osp_op(&t, i, dir, conv, alphabet).map(|r| r.pieces.into_iter().next().expect("one piece"))
}

fn single_piece_shape(g: GKind, a: usize, spin: bool) -> (PShape, bool) {
    if spin {
        return (PShape { g: GKind::B, lambda: vec![], ell: 1 }, true);
    }
    let lambda = if a == 0 { vec![] } else { vec![1; a] };
    let ell = if g.is_b() { 2 } else { 1 };
    (PShape { g, lambda, ell }, false)
}

/// The shift `wt(f_i b) - wt(b)`.
pub fn f_shift(i: Index, g: GKind, alphabet: &Alphabet) -> Weight {
    let mut w = Weight::new(0);
    match i.lo_hi(alphabet) {
        Some((lo, hi)) => {
            w.add_letter(lo, -1);
            w.add_letter(hi, 1);
        }
        None => w.add_letter(Letter::bar(alphabet.m()), if g == GKind::C { 2 } else { 1 }),
    }
    w
}

/// `<h_i, wt>` for the even indices; `None` for the isotropic index of the
/// super convention.
pub fn coroot_pairing(wt: &Weight, i: Index, g: GKind, conv: Convention, alphabet: &Alphabet) -> Option<i64> {
    if conv == Convention::MSuperN && i == Index::Zero {
        return None;
    }
    match i.lo_hi(alphabet) {
        Some((lo, hi)) => Some(wt.get(lo) - wt.get(hi)),
        None => {
            let mm = wt.get(Letter::bar(alphabet.m()));
            Some(if g == GKind::C { wt.level - mm } else { wt.level - 2 * mm })
        }
    }
}

/// The highest element of `T(λ, ℓ)` for the convention of the alphabet.
pub fn highest_element(shape: &PShape, alphabet: &Alphabet, conv: Convention) -> Result<OspTableau> {
    shape.check_fits(alphabet)?;
    let l = shape.tuple_length();
    match conv {
        Convention::MPlusN => {
            let pieces = (1..=l)
                .map(|k| {
                    if shape.has_spin() && k == l {
                        Piece::spin(Column::empty())
                    } else {
                        let h = shape.conj(k);
                        Piece::new(Column::new(alphabet.letters()[..h].to_vec()), Column::empty())
                    }
                })
                .collect();
            let t = OspTableau::new(shape.clone(), pieces);
            t.validate(alphabet)?;
            Ok(t)
        }
        Convention::MSuperN => super_highest(shape, alphabet),
    }
}

/// The genuine highest weight tableau of straight shape `λ` over `J(m|n)`.
pub fn genuine_highest(lambda: &[usize], alphabet: &Alphabet) -> Result<Tableau> {
    let m = alphabet.m() as usize;
    let conj = crate::tableau::conjugate(lambda);
    if lambda.get(m).copied().unwrap_or(0) > alphabet.n() as usize {
        return Err(Error::NotRepresentable(format!("λ = {lambda:?} does not fit {alphabet}")));
    }
    let cols: Vec<Vec<Letter>> = conj
        .iter()
        .enumerate()
        .map(|(j, &h)| {
            (0..h)
                .map(|r| if r < m { Letter::bar((m - r) as u32) } else { Letter::half(j as u32 + 1) })
                .collect()
        })
        .collect();
    Ok(Tableau::from_columns(cols))
}

fn super_highest(shape: &PShape, alphabet: &Alphabet) -> Result<OspTableau> {
    let target = genuine_highest(&shape.lambda, alphabet)?;
    let l = shape.tuple_length();
    let content: BTreeMap<Letter, usize> = target.content();
    let heights: Vec<usize> = (1..=l).map(|k| if shape.has_spin() && k == l { 0 } else { shape.conj(k) }).collect();
    let mut found: Option<OspTableau> = None;
    let mut chosen: Vec<Column> = Vec::new();
    fn columns_from(content: &BTreeMap<Letter, usize>, h: usize) -> Vec<Column> {
        let letters: Vec<(Letter, usize)> = content.iter().filter(|(_, &k)| k > 0).map(|(&a, &k)| (a, k)).collect();
        let mut out = Vec::new();
        fn go(letters: &[(Letter, usize)], i: usize, left: usize, cur: &mut Vec<Letter>, out: &mut Vec<Column>) {
            if left == 0 {
                out.push(Column::new(cur.clone()));
                return;
            }
            if i == letters.len() {
                return;
            }
            let (a, avail) = letters[i];
            let max_take = if a.is_even() { avail.min(1) } else { avail };
            for take in (0..=max_take.min(left)).rev() {
                for _ in 0..take {
                    cur.push(a);
                }
                go(letters, i + 1, left - take, cur, out);
                for _ in 0..take {
                    cur.pop();
                }
            }
        }
        go(&letters, 0, h, &mut Vec::new(), &mut out);
        out
    }
    fn search(
        shape: &PShape,
        alphabet: &Alphabet,
        heights: &[usize],
        content: &mut BTreeMap<Letter, usize>,
        chosen: &mut Vec<Column>,
        target: &Tableau,
        found: &mut Option<OspTableau>,
    ) {
        if found.is_some() {
            return;
        }
        let k = chosen.len();
        if k == heights.len() {
            let mut p = Tableau::from_columns(vec![chosen[0].entries().to_vec()]);
            for c in &chosen[1..] {
                p.insert_word(c.entries());
            }
            if p != *target {
                return;
            }
            let l = heights.len();
            let pieces = chosen
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    if shape.has_spin() && idx + 1 == l {
                        Piece::spin(c.clone())
                    } else {
                        Piece::new(c.clone(), Column::empty())
                    }
                })
                .collect();
            let t = OspTableau::new(shape.clone(), pieces);
            if t.is_valid(alphabet) {
                let conv = Convention::MSuperN;
                let top = Index::all(alphabet).into_iter().all(|i| osp_op(&t, i, Dir::E, conv, alphabet).is_none());
                if top {
                    *found = Some(t);
                }
            }
            return;
        }
        for c in columns_from(content, heights[k]) {
            for &x in c.entries() {
                *content.get_mut(&x).unwrap() -= 1;
            }
            chosen.push(c.clone());
            search(shape, alphabet, heights, content, chosen, target, found);
            chosen.pop();
            for &x in c.entries() {
                *content.get_mut(&x).unwrap() += 1;
            }
        }
    }
    let mut content = content;
    search(shape, alphabet, &heights, &mut content, &mut chosen, &target, &mut found);
    found.ok_or_else(|| Error::NotRepresentable(format!("no highest element for {shape} over {alphabet}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub tableau: OspTableau,
    pub weight: Weight,
    pub eps: Vec<usize>,
    pub phi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub index: Index,
}

/// A crystal graph; `edges` are `f`-edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub convention: Convention,
    pub indices: Vec<Index>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// `f`-edges whose target lies beyond the degree bound.
    pub truncated_edges: Vec<(usize, Index)>,
    /// Set when the node budget stopped the search.
    pub truncated: bool,
    pub degree_bound: usize,
}

fn node_key(t: &OspTableau, alphabet: &Alphabet) -> (usize, Vec<usize>, Vec<Piece>) {
    (t.degree(), t.weight_vector(alphabet), t.pieces.clone())
}

/// Closure of `seed` under all `e_i`, `f_i` within the degree bound.
pub fn build_graph(
    seed: &OspTableau,
    alphabet: &Alphabet,
    conv: Convention,
    degree_bound: usize,
    node_budget: usize,
) -> CrystalGraph {
    let indices = Index::all(alphabet);
    let mut ids: HashMap<OspTableau, usize> = HashMap::new();
    let mut order: Vec<OspTableau> = Vec::new();
    let mut raw_edges: Vec<(usize, usize, Index)> = Vec::new();
    let mut raw_trunc: Vec<(usize, Index)> = Vec::new();
    let mut truncated = false;
    let mut queue = VecDeque::new();
    if seed.degree() <= degree_bound {
        ids.insert(seed.clone(), 0);
        order.push(seed.clone());
        queue.push_back(0usize);
    }
    let intern = |t: OspTableau, ids: &mut HashMap<OspTableau, usize>, order: &mut Vec<OspTableau>, queue: &mut VecDeque<usize>, truncated: &mut bool| -> Option<usize> {
        if let Some(&id) = ids.get(&t) {
            return Some(id);
        }
        if order.len() >= node_budget {
            *truncated = true;
            return None;
        }
        let id = order.len();
        ids.insert(t.clone(), id);
        order.push(t);
        queue.push_back(id);
        Some(id)
    };
    while let Some(id) = queue.pop_front() {
        let t = order[id].clone();
        for &i in &indices {
            if let Some(u) = osp_op(&t, i, Dir::F, conv, alphabet) {
                if u.degree() > degree_bound {
                    raw_trunc.push((id, i));
                } else if let Some(to) = intern(u, &mut ids, &mut order, &mut queue, &mut truncated) {
                    raw_edges.push((id, to, i));
                }
            }
            if let Some(u) = osp_op(&t, i, Dir::E, conv, alphabet) {
                if let Some(from) = intern(u, &mut ids, &mut order, &mut queue, &mut truncated) {
                    raw_edges.push((from, id, i));
                }
            }
        }
    }
    // renumber deterministically
    let mut perm: Vec<usize> = (0..order.len()).collect();
    perm.sort_by_cached_key(|&j| node_key(&order[j], alphabet));
    let mut new_id = vec![0; order.len()];
    for (n, &old) in perm.iter().enumerate() {
        new_id[old] = n;
    }
    let nodes: Vec<Node> = perm
        .iter()
        .enumerate()
        .map(|(n, &old)| {
            let t = order[old].clone();
            let (eps, phi): (Vec<usize>, Vec<usize>) =
                indices.iter().map(|&i| eps_phi(&t, i, conv, alphabet)).unzip();
            Node { id: n, weight: weight_of(&t), tableau: t, eps, phi }
        })
        .collect();
    let mut edges: Vec<Edge> =
        raw_edges.into_iter().map(|(a, b, i)| Edge { from: new_id[a], to: new_id[b], index: i }).collect();
    edges.sort_by_key(|e| (e.from, e.index, e.to));
    edges.dedup();
    let mut truncated_edges: Vec<(usize, Index)> = raw_trunc.into_iter().map(|(a, i)| (new_id[a], i)).collect();
    truncated_edges.sort();
    truncated_edges.dedup();
    CrystalGraph { convention: conv, indices, nodes, edges, truncated_edges, truncated, degree_bound }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond && self.failures.len() < 20 {
            self.failures.push(msg());
        } else if !cond {
            self.failures.push(String::from("..."));
            self.failures.dedup();
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

/// Checks the crystal axioms on every node and edge of the graph.
pub fn verify_axioms(graph: &CrystalGraph, alphabet: &Alphabet) -> Report {
    let conv = graph.convention;
    let mut rep = Report::default();
    let index_pos: HashMap<Index, usize> = graph.indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    for edge in &graph.edges {
        let (b, b2) = (&graph.nodes[edge.from], &graph.nodes[edge.to]);
        let i = edge.index;
        let g = b.tableau.shape.g;
        rep.check(osp_op(&b.tableau, i, Dir::F, conv, alphabet).as_ref() == Some(&b2.tableau), || {
            format!("f_{i} of node {} is not node {}", b.id, b2.id)
        });
        rep.check(osp_op(&b2.tableau, i, Dir::E, conv, alphabet).as_ref() == Some(&b.tableau), || {
            format!("e_{i} of node {} is not node {}", b2.id, b.id)
        });
        rep.check(b2.weight == b.weight.plus(&f_shift(i, g, alphabet)), || {
            format!("weight shift of f_{i} at node {}", b.id)
        });
    }
    for node in &graph.nodes {
        let t = &node.tableau;
        rep.check(t.is_valid(alphabet), || format!("node {} = {t} is not an orthosymplectic tableau", node.id));
        for (p, &i) in graph.indices.iter().enumerate() {
            let mut eps = 0;
            let mut cur = t.clone();
            while let Some(u) = osp_op(&cur, i, Dir::E, conv, alphabet) {
                eps += 1;
                cur = u;
            }
            rep.check(eps == node.eps[p], || format!("eps_{i} of node {} is {} but the string has {eps}", node.id, node.eps[p]));
            let mut phi = 0;
            let mut cur = t.clone();
            let mut complete = true;
            while let Some(u) = osp_op(&cur, i, Dir::F, conv, alphabet) {
                phi += 1;
                if u.degree() > graph.degree_bound.saturating_add(2 * alphabet.len()) {
                    complete = false;
                    break;
                }
                cur = u;
            }
            if complete {
                rep.check(phi == node.phi[p], || format!("phi_{i} of node {} is {} but the string has {phi}", node.id, node.phi[p]));
            }
            if let Some(pair) = coroot_pairing(&node.weight, i, t.shape.g, conv, alphabet) {
                rep.check(node.phi[p] as i64 - node.eps[p] as i64 == pair, || {
                    format!("phi - eps = <h_{i}, wt> fails at node {}", node.id)
                });
            }
        }
    }
    for &(from, i) in &graph.truncated_edges {
        rep.check(index_pos.contains_key(&i), || format!("unknown index on truncated edge from {from}"));
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    pub components: usize,
    /// Nodes killed by every `e_i`.
    pub sources: Vec<usize>,
}

pub fn check_connected(graph: &CrystalGraph) -> Connectivity {
    let n = graph.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for e in &graph.edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a] = b;
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    roots.sort();
    roots.dedup();
    let sources = graph.nodes.iter().filter(|v| v.eps.iter().all(|&e| e == 0)).map(|v| v.id).collect();
    Connectivity { connected: roots.len() <= 1, components: roots.len(), sources }
}

/// Whether every node reaches `target` by repeated `e` moves inside the graph.
pub fn all_reach_by_e(graph: &CrystalGraph, target: usize) -> bool {
    let n = graph.nodes.len();
    let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &graph.edges {
        down[e.from].push(e.to);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([target]);
    seen[target] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &down[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn to_dot(graph: &CrystalGraph) -> String {
    let mut out = String::from("digraph crystal {\n  node [shape=box, fontname=\"monospace\"];\n");
    for v in &graph.nodes {
        let label = format!("{}\\n{}", v.tableau, v.weight).replace('"', "'");
        out.push_str(&format!("  n{} [label=\"{}\"];\n", v.id, label));
    }
    for e in &graph.edges {
        out.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", e.from, e.to, e.index));
    }
    for (from, i) in &graph.truncated_edges {
        out.push_str(&format!("  n{from} -> cut_{from}_{} [label=\"{i}\", style=dashed];\n", i.to_string().replace('/', "_")));
        out.push_str(&format!("  cut_{from}_{} [shape=point];\n", i.to_string().replace('/', "_")));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(s: &str) -> Column {
        Column::new(s.split_whitespace().map(|x| x.parse().unwrap()).collect())
    }
    fn word(s: &str) -> Word {
        s.split_whitespace().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn word_op_super_zero() {
        let a = Alphabet::sup(2, 2);
        let sup = Convention::MSuperN;
        assert_eq!(word_op(&word("b1"), Index::Zero, Dir::F, sup, &a).unwrap(), Some(word("1/2")));
        assert_eq!(word_op(&word("b1 1/2"), Index::Zero, Dir::F, sup, &a).unwrap(), None);
        assert_eq!(word_op(&word("b2 b2"), Index::Bar(1), Dir::E, sup, &a).unwrap(), None);
        assert!(word_op(&word("b2"), Index::Bar(2), Dir::E, sup, &a).is_err());
    }

    #[test]
    fn word_op_signature_rule() {
        let a = Alphabet::plus(2, 3);
        let p = Convention::MPlusN;
        assert_eq!(word_op(&word("1 2 2 1"), Index::Int(1), Dir::F, p, &a).unwrap(), Some(word("1 2 2 2")));
        assert_eq!(word_op(&word("1 2 2 1"), Index::Int(1), Dir::E, p, &a).unwrap(), Some(word("1 2 1 1")));
    }

    #[test]
    fn spin_column_top_operators() {
        let a = Alphabet::plus(2, 0);
        let p = Convention::MPlusN;
        let sp = Piece::spin(col("b2"));
        let e = piece_op(&sp, 0, GKind::B, Index::Bar(2), Dir::E, p, &a).unwrap();
        assert_eq!(e, Piece::spin(Column::empty()));
        assert!(piece_op(&sp, 0, GKind::B, Index::Bar(2), Dir::F, p, &a).is_none());
    }

    #[test]
    fn c_domino_added_on_top() {
        let a = Alphabet::plus(2, 0);
        let p = Convention::MPlusN;
        let piece = Piece::new(col("b1"), col("b1"));
        let f = piece_op(&piece, 0, GKind::C, Index::Bar(2), Dir::F, p, &a).unwrap();
        assert_eq!(f, Piece::new(col("b2 b1"), col("b2 b1")));
        let h = Piece::new(col("b2"), Column::empty());
        assert!(piece_op(&h, 1, GKind::C, Index::Bar(2), Dir::E, p, &a).is_none());
    }

    #[test]
    fn four_node_graph() {
        let a = Alphabet::plus(2, 0);
        let shape = PShape::new(GKind::C, vec![1], 1).unwrap();
        let h = highest_element(&shape, &a, Convention::MPlusN).unwrap();
        assert_eq!(h.pieces, vec![Piece::new(col("b2"), Column::empty())]);
        let g = build_graph(&h, &a, Convention::MPlusN, 100, 10_000);
        assert_eq!(g.nodes.len(), 4);
        assert!(verify_axioms(&g, &a).ok());
        let c = check_connected(&g);
        assert!(c.connected);
        assert_eq!(c.sources.len(), 1);
        assert_eq!(g.nodes[c.sources[0]].tableau, h);
    }

    #[test]
    fn corrupted_edge_is_reported() {
        let a = Alphabet::plus(2, 0);
        let shape = PShape::new(GKind::C, vec![1], 1).unwrap();
        let h = highest_element(&shape, &a, Convention::MPlusN).unwrap();
        let mut g = build_graph(&h, &a, Convention::MPlusN, 100, 10_000);
        let e = g.edges[0].clone();
        g.edges[0].to = (e.to + 1) % g.nodes.len();
        if g.edges[0].to == e.from {
            g.edges[0].to = (e.to + 2) % g.nodes.len();
        }
        let rep = verify_axioms(&g, &a);
        assert!(!rep.ok());
    }

    #[test]
    fn super_truncated_graph() {
        let a = Alphabet::sup(1, 1);
        let shape = PShape::new(GKind::C, vec![], 1).unwrap();
        let h = highest_element(&shape, &a, Convention::MSuperN).unwrap();
        let g = build_graph(&h, &a, Convention::MSuperN, 2, 10_000);
        assert_eq!(g.nodes.len(), 3);
        assert!(verify_axioms(&g, &a).ok(), "{:?}", verify_axioms(&g, &a));
        assert!(all_reach_by_e(&g, 0));
    }

    #[test]
    fn natural_weight_example() {
        let a = Alphabet::sup(1, 2);
        let t = genuine_highest(&[2, 2, 1], &a).unwrap();
        let c = t.content();
        assert_eq!(c.get(&Letter::bar(1)), Some(&2));
        assert_eq!(c.get(&Letter::half(1)), Some(&2));
        assert_eq!(c.get(&Letter::half(2)), Some(&1));
    }

    #[test]
    fn lone_node_graph() {
        let a = Alphabet::plus(1, 0);
        let shape = PShape::new(GKind::C, vec![1], 1).unwrap();
        let h = highest_element(&shape, &a, Convention::MPlusN).unwrap();
        let g = build_graph(&h, &a, Convention::MPlusN, 10, 100);
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
    }
}
