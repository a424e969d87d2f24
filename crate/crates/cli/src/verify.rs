//! Named verification profiles. Each profile is a list of checks; a failing
//! check carries the objects that failed, serialized like regular output.

use std::fmt::Write as _;

use clap::ValueEnum;
use osp_core::character::{osp_character, psi, psi_inverse, schur_expand};
use osp_core::crystal::{build_graph, check_connected, highest_element, verify_axioms, weight_of, Convention};
use osp_core::kn::{parse_kn_column, to_kn_column, verify_kn_correspondence};
use osp_core::osp::{columns_up_to, enumerate, is_admissible, shapes_up_to, GKind, PShape, Piece};
use osp_core::signatures::{pair_signature, r_matrix};
use osp_core::{Alphabet, Column, Letter, Tableau};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::render::Rendered;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    PaperExamples,
    Signatures,
    Crystal,
    Characters,
    Kn,
    All,
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    instances: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Check {
        Check { name: name.into(), pass: true, instances: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < 10 {
                self.failures.push(witness());
            }
        }
    }
}

fn col(s: &str) -> Column {
    Column::new(s.split_whitespace().map(|x| x.parse().expect("fixed letters")).collect())
}

fn one_column(c: &Column) -> Tableau {
    Tableau::from_columns(vec![c.entries().to_vec()])
}

fn compact(t: &Tableau) -> String {
    t.columns().iter().map(|c| Column::new(c.clone()).to_string()).collect()
}

fn worked_examples() -> Vec<Check> {
    let a = Alphabet::sup(4, 3);
    let s = Piece::new(col("b4 b3 b1 1/2 1/2"), col("b3 b2 3/2"));
    let t = Piece::new(col("b3 b1 1/2 3/2 3/2 5/2"), col("b4 b3 b2 b1 5/2"));
    let mut out = Vec::new();

    let mut c = Check::new("membership of S and T");
    c.expect(s.is_member(GKind::B, 2, &a), || json!({ "piece": s.to_string(), "a": 2 }));
    c.expect(t.is_member(GKind::B, 3, &a), || json!({ "piece": t.to_string(), "a": 3 }));
    out.push(c);

    let mut c = Check::new("signatures of the column pairs");
    for (p, want) in [(&s, (2, 0)), (&t, (3, 2))] {
        let got = pair_signature(&p.left, &p.right).pair();
        c.expect(got == want, || json!({ "piece": p.to_string(), "signature": got, "expected": want }));
    }
    out.push(c);

    let mut c = Check::new("insertion of the columns of T");
    let inserted = one_column(&t.right).inserted(t.left.entries());
    let shown = Tableau::from_columns(vec![
        col("b4 b3 b2 b1 1/2 3/2 3/2 5/2").into_entries(),
        col("b3 b1 5/2").into_entries(),
    ]);
    c.expect(inserted == shown, || json!({ "computed": inserted, "expected": shown }));
    out.push(c);

    let mut c = Check::new("R-matrix on the insertion of T");
    let r = r_matrix(&shown.column(0), &shown.column(1));
    let want = (col("b3 b1 3/2"), col("b4 b3 b2 b1 1/2 3/2 5/2 5/2"));
    c.expect(r.as_ref().ok() == Some(&want), || json!({ "computed": format!("{r:?}") }));
    c.expect(t.split() == want, || json!({ "computed": format!("{:?}", t.split()) }));
    out.push(c);

    let mut c = Check::new("split of S re-inserts to the insertion of S");
    let (ls, rs) = s.split();
    let direct = one_column(&s.right).inserted(s.left.entries());
    let back = one_column(&rs).inserted(ls.entries());
    c.expect(back == direct, || json!({ "split": [ls.to_string(), rs.to_string()], "insertion": direct }));
    let expected = (col("b3 b1 1/2"), col("b4 b3 b2 1/2 3/2"));
    if (ls.clone(), rs.clone()) != expected {
        let shown_back = one_column(&expected.1).inserted(expected.0.entries());
        c.notes.push(format!(
            "the expected split ({}, {}) differs from the computed ({ls}, {rs}); it re-inserts to {}, not {}",
            expected.0,
            expected.1,
            compact(&shown_back),
            compact(&direct)
        ));
    }
    out.push(c);

    let mut c = Check::new("admissibility of (S, T)");
    let adm = is_admissible(&s, 2, &t, 3);
    c.expect(adm == Ok(true), || json!({ "result": format!("{adm:?}") }));
    out.push(c);

    let mut c = Check::new("KN columns");
    for (g, left, right, shown) in [
        (GKind::C, "b5 b3 b2", "b4 b1", "2,5,b5,b2"),
        (GKind::B, "b5 b3 b1", "b5 b4 b1", "2,0,b5,b1"),
    ] {
        let piece = Piece::new(col(left), col(right));
        let got = to_kn_column(&piece, 1, g, 5).map(|k| k.entries);
        let want = parse_kn_column(shown);
        c.expect(got.is_ok() && got.as_ref().ok() == want.as_ref().ok(), || {
            json!({ "g": g, "piece": piece.to_string(), "computed": format!("{got:?}"), "expected": shown })
        });
    }
    out.push(c);

    let mut c = Check::new("tableau count for c, m = 2, λ = (1), ℓ = 1");
    let shape = PShape::new(GKind::C, vec![1], 1).expect("valid shape");
    let n = enumerate(&shape, &Alphabet::plus(2, 0), usize::MAX).len();
    c.expect(n == 4, || json!({ "count": n }));
    out.push(c);
    out
}

fn random_column(rng: &mut StdRng, alphabet: &Alphabet, max_height: usize) -> Column {
    let h = rng.gen_range(0..=max_height);
    let mut picked: Vec<Letter> = (0..h).map(|_| alphabet.letters()[rng.gen_range(0..alphabet.len())]).collect();
    picked.sort();
    picked.dedup_by(|x, y| x == y && x.is_even());
    Column::sorted(picked)
}

fn signatures(seed: u64) -> Vec<Check> {
    let mut cond = Check::new("signature condition, heights up to 4");
    for alphabet in [Alphabet::sup(2, 2), Alphabet::plus(2, 2)] {
        let columns: Vec<Column> = columns_up_to(&alphabet, 4).into_iter().flatten().collect();
        for s1 in &columns {
            for s2 in &columns {
                let (x, y) = pair_signature(s1, s2).pair();
                let piece = Piece::new(s1.clone(), s2.clone());
                for c in 0..=s1.height().min(s2.height()) {
                    let (a, b) = (s1.height() - c, s2.height() - c);
                    let sst = piece.as_tableau(a).is_some_and(|t| t.is_semistandard());
                    let by_sig = (0..=a.min(b)).any(|p| (x, y) == (a - p, b - p));
                    cond.expect(sst == by_sig, || json!({ "left": s1, "right": s2, "abc": [a, b, c] }));
                }
            }
        }
    }
    let mut knuth = Check::new("R-matrix keeps the insertion tableau");
    let mut rng = StdRng::seed_from_u64(seed);
    let alphabet = Alphabet::sup(3, 3);
    for _ in 0..2000 {
        let (x, y) = (random_column(&mut rng, &alphabet, 6), random_column(&mut rng, &alphabet, 6));
        let (s, t) = if x.height() >= y.height() { (x, y) } else { (y, x) };
        let (t2, s2) = r_matrix(&s, &t).expect("heights ordered");
        let lhs = one_column(&s2).inserted(t2.entries());
        let rhs = one_column(&t).inserted(s.entries());
        knuth.expect(lhs == rhs, || json!({ "left": s, "right": t }));
    }
    vec![cond, knuth]
}

fn crystal() -> Vec<Check> {
    let mut axioms = Check::new("crystal axioms and connectedness");
    let mut sources = Check::new("one source for m+0 graphs");
    for g in [GKind::B, GKind::BBullet, GKind::C] {
        for shape in shapes_up_to(g, 2, 2) {
            for (m, n) in [(1, 0), (2, 0), (1, 1), (2, 1)] {
                let alphabet = Alphabet::sup(m, n);
                if !shape.fits(&alphabet) {
                    continue;
                }
                let conv = Convention::for_alphabet(&alphabet);
                let Ok(h) = highest_element(&shape, &alphabet, conv) else {
                    axioms.expect(false, || json!({ "shape": shape, "m": m, "n": n, "error": "no highest element" }));
                    continue;
                };
                let graph = build_graph(&h, &alphabet, conv, 5, 100_000);
                let rep = verify_axioms(&graph, &alphabet);
                let conn = check_connected(&graph);
                axioms.expect(rep.ok() && conn.connected, || {
                    json!({ "shape": shape, "m": m, "n": n, "failures": rep.failures, "components": conn.components })
                });
                if n == 0 {
                    let one = conn.sources.len() == 1 && graph.nodes[conn.sources[0]].weight == weight_of(&h);
                    sources.expect(one, || json!({ "shape": shape, "m": m, "sources": conn.sources }));
                }
            }
        }
    }
    vec![axioms, sources]
}

fn characters() -> Vec<Check> {
    let mut bij = Check::new("insertion bijection round trip");
    let mut expand = Check::new("Schur expansion");
    for g in [GKind::B, GKind::BBullet, GKind::C] {
        for shape in shapes_up_to(g, 2, 2) {
            let alphabet = Alphabet::sup(2, 1);
            for t in enumerate(&shape, &alphabet, 5) {
                let (p, q) = psi(&t);
                let back = psi_inverse(&p, &q, &shape, &alphabet);
                bij.expect(back.as_ref() == Ok(&t), || json!({ "tableau": t, "p": p, "q": q }));
            }
            let rep = schur_expand(&shape, &alphabet, 5);
            let nonneg = osp_character(&shape, &alphabet, 5).terms.values().all(|&c| c > 0);
            expand.expect(rep.ok() && nonneg, || json!({ "shape": shape, "mismatches": rep.mismatches.len() }));
        }
    }
    vec![bij, expand]
}

fn kn() -> Vec<Check> {
    let mut c = Check::new("KN correspondence against the Weyl dimension");
    for g in [GKind::B, GKind::C] {
        for m in 2..=3 {
            for shape in shapes_up_to(g, 2, 3) {
                if !shape.fits(&Alphabet::plus(m, 0)) {
                    continue;
                }
                match verify_kn_correspondence(&shape, m) {
                    Ok(rep) => c.expect(rep.ok(), || json!({ "shape": shape, "m": m, "failures": rep.failures })),
                    Err(e) => c.expect(false, || json!({ "shape": shape, "m": m, "error": e.to_string() })),
                }
            }
        }
    }
    vec![c]
}

/// Runs the profile; `Err` carries the report when a check fails.
pub fn run(profile: Profile, seed: u64) -> Result<Rendered, Rendered> {
    let checks: Vec<Check> = match profile {
        Profile::PaperExamples => worked_examples(),
        Profile::Signatures => signatures(seed),
        Profile::Crystal => crystal(),
        Profile::Characters => characters(),
        Profile::Kn => kn(),
        Profile::All => {
            let mut all = worked_examples();
            all.extend(signatures(seed));
            all.extend(crystal());
            all.extend(characters());
            all.extend(kn());
            all
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(text, "{} {} ({} instances)", if c.pass { "ok  " } else { "FAIL" }, c.name, c.instances);
        for f in &c.failures {
            let _ = writeln!(text, "     {f}");
        }
        for note in &c.notes {
            let _ = writeln!(text, "     note: {note}");
        }
    }
    let name = profile.to_possible_value().expect("named").get_name().to_string();
    let json = json!({ "profile": name, "seed": seed, "pass": pass, "checks": checks });
    let out = Rendered::new(json, text);
    if pass {
        Ok(out)
    } else {
        Err(out)
    }
}
