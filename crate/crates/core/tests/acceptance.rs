//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p btu-core --test acceptance`.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use btu_core::format::{matrix_to_text, parse_alist, parse_matrix, to_alist, SearchReport};
use btu_core::params::{closed_form_partitions, partition_loop};
use btu_core::{
    admissible_rotations, enumerate_candidates, enumerate_z, factorize, phi_census, rank_candidate,
    search, unrank_candidate, verify_search, Btu, CandidateWord, EngineOutcome, PartitionP2,
    Permutation, SearchConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- independent reference helpers (0-based images) ----

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for smaller in all_perms(n - 1) {
        for pos in 0..n {
            let mut v = smaller.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

fn fact(n: usize) -> usize {
    (1..=n).product()
}

/// Alternating cycle lengths of the 2-regular graph `p ∪ q`, walking
/// row -> column via `p`, column -> row via `q⁻¹`.
fn traverse_parts(p: &[usize], q: &[usize]) -> Vec<usize> {
    let n = p.len();
    let mut q_inv = vec![0; n];
    for (i, &c) in q.iter().enumerate() {
        q_inv[c] = i;
    }
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut row = start;
        while !seen[row] {
            seen[row] = true;
            len += 1;
            row = q_inv[p[row]];
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn perm(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

fn part(s: &str) -> PartitionP2 {
    s.parse().unwrap()
}

// ---- criteria ----

fn c1_candidate_count() -> Outcome {
    let mut checked = 0;
    for n in 3..=6 {
        let bases = [
            Permutation::identity(n).unwrap(),
            Permutation::circular_rotation(n, 1).unwrap(),
        ];
        for base in &bases {
            let b = base.as_slice();
            let brute: BTreeSet<Vec<usize>> = all_perms(n)
                .into_iter()
                .filter(|q| q.iter().zip(b).all(|(x, y)| x != y) && traverse_parts(b, q) == vec![n])
                .collect();
            let stream: Vec<Vec<usize>> = enumerate_candidates(base, None)
                .map_err(|e| e.to_string())?
                .map(|(_, q)| q.as_slice().to_vec())
                .collect();
            let distinct: BTreeSet<Vec<usize>> = stream.iter().cloned().collect();
            ensure(
                stream.len() == fact(n - 1) && distinct.len() == fact(n - 1),
                || {
                    format!(
                        "n={n} base={base}: {} streamed, {} distinct",
                        stream.len(),
                        distinct.len()
                    )
                },
            )?;
            ensure(distinct == brute, || {
                format!("n={n} base={base}: stream differs from brute force")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (n, base) cases match (n-1)! and brute force"
    ))
}

fn c2_bijection() -> Outcome {
    let mut total = 0;
    for n in 2..=6 {
        let bases = [
            Permutation::identity(n).unwrap(),
            Permutation::circular_rotation(n, 1).unwrap(),
        ];
        for base in &bases {
            for w in all_perms(n - 1) {
                let word = CandidateWord::new(
                    Permutation::new(w.iter().map(|x| x + 1).collect()).unwrap(),
                );
                let q = unrank_candidate(&word, base).map_err(|e| e.to_string())?;
                let back = rank_candidate(&q, base).map_err(|e| e.to_string())?;
                ensure(back == word, || {
                    format!(
                        "n={n} base={base}: word {} came back as {}",
                        word.word, back.word
                    )
                })?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} words round-trip"))
}

fn c3_rotation_law() -> Outcome {
    let mut total = 0;
    for n in 2..=12 {
        let id = Permutation::identity(n).unwrap();
        for j in 1..n {
            let c = Permutation::circular_rotation(n, j).unwrap();
            let got = id.union_cycle_partition(&c).map_err(|e| e.to_string())?;
            let g = gcd(j, n);
            let expected = vec![n / g; g];
            let walked = traverse_parts(id.as_slice(), c.as_slice());
            ensure(got.parts() == expected && walked == expected, || {
                format!("n={n} j={j}: library {got}, traversal {walked:?}, expected {expected:?}")
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} (n, j) pairs obey gcd law"))
}

fn c4_scaling_golden() -> Outcome {
    let scaled = perm(&[3, 4, 1, 2]).scale(2).map_err(|e| e.to_string())?;
    ensure(scaled == perm(&[3, 4, 1, 2, 7, 8, 5, 6]), || {
        format!("scaled to {scaled}")
    })?;
    let figure = "\
0 0 1 0 0 0 0 0
0 0 0 1 0 0 0 0
1 0 0 0 0 0 0 0
0 1 0 0 0 0 0 0
0 0 0 0 0 0 1 0
0 0 0 0 0 0 0 1
0 0 0 0 1 0 0 0
0 0 0 0 0 1 0 0
";
    let mat = Btu::new(vec![scaled])
        .map_err(|e| e.to_string())?
        .to_biadjacency();
    ensure(matrix_to_text(&mat) == figure, || {
        format!("matrix differs:\n{mat}")
    })?;
    let left = Btu::new(vec![perm(&[3, 4, 1, 2])])
        .unwrap()
        .to_biadjacency();
    ensure(
        matrix_to_text(&left) == "0 0 1 0\n0 0 0 1\n1 0 0 0\n0 1 0 0\n",
        || "4x4 matrix differs".into(),
    )?;
    Ok("(3 4 1 2) -> (3 4 1 2 7 8 5 6), 8x8 matrix bit-exact".into())
}

fn c5_optimal_partitions() -> Outcome {
    let mut total = 0;
    for b in 1..=4 {
        for k in 1..=4 {
            for r in 2..=5 {
                let looped = partition_loop(b, k, r).map_err(|e| e.to_string())?;
                let closed = closed_form_partitions(b, k, r).map_err(|e| e.to_string())?;
                // reference: β_i has k^(r-1-i) parts of b·k^i
                let reference: Vec<Vec<usize>> = (1..r)
                    .map(|i| vec![b * k.pow(i as u32); k.pow((r - 1 - i) as u32)])
                    .collect();
                let as_vec =
                    |v: &[PartitionP2]| v.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>();
                ensure(looped == closed && as_vec(&closed) == reference, || {
                    format!("b={b} k={k} r={r}: loop {looped:?} closed {closed:?}")
                })?;
                total += 1;
            }
        }
    }
    let spot1 = partition_loop(1, 3, 3).map_err(|e| e.to_string())?;
    ensure(spot1 == vec![part("3+3+3"), part("9")], || {
        format!("(1,3,3) -> {spot1:?}")
    })?;
    let spot2 = partition_loop(1, 2, 4).map_err(|e| e.to_string())?;
    ensure(
        spot2 == vec![part("2+2+2+2"), part("4+4"), part("8")],
        || format!("(1,2,4) -> {spot2:?}"),
    )?;
    Ok(format!("{total} (b, k, r) cases agree, spot values match"))
}

fn c6_oracle_equivalence() -> Outcome {
    let cases = [
        ((4, 2), 8),
        ((5, 2), 10),
        ((6, 2), 12),
        ((8, 2), 16),
        ((4, 3), 6),
    ];
    let mut notes = Vec::new();
    let mut failed = false;
    for ((m, r), stated) in cases {
        let rep = verify_search(m, r).map_err(|e| e.to_string())?;
        let engine = match &rep.engine {
            EngineOutcome::Ran { girth, .. } => Some(*girth),
            EngineOutcome::Inapplicable { .. } => None,
        };
        let ok = rep.equal && engine == Some(stated) && rep.oracle.max_girth == stated;
        failed |= !ok;
        notes.push(format!(
            "({m},{r}) engine={} oracle={} stated={stated}{}",
            engine.map_or("-".into(), |g| g.to_string()),
            rep.oracle.max_girth,
            if ok { "" } else { " MISMATCH" }
        ));
    }
    let detail = notes.join("; ");
    if failed {
        Err(detail)
    } else {
        Ok(detail)
    }
}

fn c7_z_census() -> Outcome {
    let f = factorize(9, 3).map_err(|e| e.to_string())?;
    ensure((f.b, f.k) == (1, 3), || {
        format!("(9,3) factors as b={} k={}", f.b, f.k)
    })?;
    let rotations = admissible_rotations(9, f.b * f.k);
    let expected = fact(f.k - 1) * rotations.len();
    let res = search(9, 3, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let last = res.traces.last().ok_or("no traces")?;
    ensure(last.candidates_evaluated as usize == expected, || {
        format!(
            "engine evaluated {} configurations, expected {expected}",
            last.candidates_evaluated
        )
    })?;
    let rotation_perms: Vec<Permutation> = rotations
        .iter()
        .map(|&j| Permutation::circular_rotation(9, j).unwrap())
        .collect();
    let z_rot = enumerate_z(9, 3, None)
        .map_err(|e| e.to_string())?
        .filter(|b| rotation_perms.contains(&b.perms()[2]))
        .count();
    ensure(z_rot == expected, || {
        format!("Z(9,3) has {z_rot} members with an admissible rotation last, expected {expected}")
    })?;

    let f4 = factorize(4, 3).map_err(|e| e.to_string())?;
    let slot1: BTreeSet<Permutation> = enumerate_z(4, 3, None)
        .map_err(|e| e.to_string())?
        .map(|b| b.perms()[0].clone())
        .collect();
    ensure(slot1.len() == fact(f4.k - 1), || {
        format!("(4,3) has {} slot-1 choices", slot1.len())
    })?;
    Ok(format!(
        "(9,3): {expected} = {}!*|{rotations:?}| by engine and Z sweep; (4,3): {} slot-1 choice",
        f.k - 1,
        slot1.len()
    ))
}

fn c8_census() -> Outcome {
    let census = phi_census(4, 2, true).map_err(|e| e.to_string())?;
    let four = census.get(&vec![part("4")]).copied().unwrap_or(0);
    let two_two = census.get(&vec![part("2+2")]).copied().unwrap_or(0);
    let total: u64 = census.values().sum();
    ensure(
        four == 6 && two_two == 3 && total == 9 && census.len() == 2,
        || format!("{census:?}"),
    )?;
    Ok("(4) -> 6, (2,2) -> 3, total 9".into())
}

fn c9_round_trips() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (m, r) in [(4, 3), (8, 3), (9, 3)] {
        let res = search(m, r, &SearchConfig::default()).map_err(|e| e.to_string())?;
        let mat = res.btu.to_biadjacency();
        let text = matrix_to_text(&mat);
        let mat_path = dir.join(format!("b_{m}_{r}.txt"));
        let alist_path = dir.join(format!("b_{m}_{r}.alist"));
        fs::write(&mat_path, &text).map_err(|e| e.to_string())?;
        fs::write(&alist_path, to_alist(&mat)).map_err(|e| e.to_string())?;

        let from_alist = parse_alist(&fs::read_to_string(&alist_path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let from_text = parse_matrix(&fs::read_to_string(&mat_path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(matrix_to_text(&from_alist) == text, || {
            format!("({m},{r}): alist round trip differs")
        })?;
        ensure(matrix_to_text(&from_text) == text, || {
            format!("({m},{r}): matrix file round trip differs")
        })?;

        let decomposed = mat.decompose().map_err(|e| e.to_string())?;
        ensure(matrix_to_text(&decomposed.to_biadjacency()) == text, || {
            format!("({m},{r}): decompose/recompose differs")
        })?;
        let girths = [
            res.girth,
            res.btu.girth().girth.unwrap_or(0),
            from_alist
                .decompose()
                .map_err(|e| e.to_string())?
                .girth()
                .girth
                .unwrap_or(0),
            decomposed.girth().girth.unwrap_or(0),
        ];
        ensure(girths.iter().all(|&g| g == res.girth), || {
            format!("({m},{r}): girths {girths:?}")
        })?;
        notes.push(format!("({m},{r}) g={}", res.girth));
    }
    Ok(notes.join(", "))
}

fn c10_determinism() -> Outcome {
    let json = |workers| -> Result<String, String> {
        let cfg = SearchConfig {
            worker_count: workers,
            ..Default::default()
        };
        let res = search(9, 3, &cfg).map_err(|e| e.to_string())?;
        serde_json::to_string_pretty(&SearchReport::from_result(&res, None))
            .map_err(|e| e.to_string())
    };
    let one = json(1)?;
    let four = json(4)?;
    ensure(one == four, || {
        "JSON differs between 1 and 4 workers".into()
    })?;
    let back: SearchReport = serde_json::from_str(&one).map_err(|e| e.to_string())?;
    ensure(serde_json::to_string_pretty(&back).unwrap() == one, || {
        "JSON does not re-serialize".into()
    })?;
    Ok(format!("{} bytes identical", one.len()))
}

/// Criteria whose stated value cannot hold; they still print FAIL.
/// (4,3) -> 6: a 3-regular bipartite graph on 8 vertices cannot have girth 6,
/// which needs at least 14 vertices. Engine and oracle agree on 4.
const KNOWN_UNATTAINABLE: &[usize] = &[6];

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("candidate count law", c1_candidate_count),
        ("bijection round-trip", c2_bijection),
        ("rotation partition law", c3_rotation_law),
        ("scaling golden case", c4_scaling_golden),
        ("optimal partitions", c5_optimal_partitions),
        ("oracle equivalence", c6_oracle_equivalence),
        ("Z-census consistency", c7_z_census),
        ("derangement census (4,2)", c8_census),
        ("format round-trips", c9_round_trips),
        ("determinism under parallelism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        match run() {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                println!("criterion {id:>2} FAIL  {name}: {detail}");
                failed.push(id);
            }
        }
    }
    let passed = criteria.len() - failed.len();
    println!("acceptance: {passed}/{} PASS", criteria.len());
    if failed == KNOWN_UNATTAINABLE {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "unexpected acceptance result: failing {failed:?}, expected {KNOWN_UNATTAINABLE:?}"
        );
        ExitCode::FAILURE
    }
}
