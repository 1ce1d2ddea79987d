//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regge_core::complex::Gluing;
use regge_core::moves::{apply_move, enumerate_moves, MoveKind};
use regge_core::sampler::{run_chain_observed, SamplerConfig};
use regge_core::{GluedTriangulation, IsoSignature, Perm4};

pub type Table = Vec<[(u32, u8, u8); 4]>;

pub fn table(t: &GluedTriangulation) -> Table {
    t.gluings().iter().map(|row| row.map(|g| (g.tet, g.face, g.perm.index()))).collect()
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Every relabelling of `t`, by exhaustive search.
pub fn all_relabelings(t: &GluedTriangulation) -> Vec<Table> {
    let k = t.tet_count();
    let perms: Vec<Perm4> = Perm4::all().collect();
    let mut out = Vec::new();
    for tet_map in permutations(k) {
        let mut idx = vec![0usize; k];
        loop {
            let vmaps: Vec<Perm4> = idx.iter().map(|&i| perms[i]).collect();
            out.push(table(&t.relabel(&tet_map, &vmaps)));
            let mut j = 0;
            while j < k {
                idx[j] += 1;
                if idx[j] < 24 {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
    }
    out
}

pub fn brute_canonical(t: &GluedTriangulation) -> Table {
    all_relabelings(t).into_iter().min().unwrap()
}

pub fn brute_automorphisms(t: &GluedTriangulation) -> usize {
    let own = table(t);
    all_relabelings(t).into_iter().filter(|x| *x == own).count()
}

pub fn random_relabel(t: &GluedTriangulation, seed: u64) -> GluedTriangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = t.tet_count();
    let mut tet_map: Vec<usize> = (0..k).collect();
    tet_map.shuffle(&mut rng);
    let perms: Vec<Perm4> = Perm4::all().collect();
    let vmaps: Vec<Perm4> = (0..k).map(|_| *perms.choose(&mut rng).unwrap()).collect();
    t.relabel(&tet_map, &vmaps)
}

/// All perfect matchings of `faces` as index pairs.
pub fn matchings(faces: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if faces.is_empty() {
        return vec![vec![]];
    }
    let first = faces[0];
    let mut out = Vec::new();
    for i in 1..faces.len() {
        let rest: Vec<usize> = faces[1..].iter().enumerate().filter(|&(j, _)| j + 1 != i).map(|(_, &f)| f).collect();
        for mut m in matchings(&rest) {
            m.push((first, faces[i]));
            out.push(m);
        }
    }
    out
}

/// Unpruned search over every face pairing and gluing permutation.
pub fn brute_force_census(k: usize) -> BTreeSet<Table> {
    let faces: Vec<usize> = (0..4 * k).collect();
    let mut out = BTreeSet::new();
    for m in matchings(&faces) {
        let choices: Vec<Vec<Perm4>> = m
            .iter()
            .map(|&(a, b)| Perm4::all().filter(|p| p.apply((a % 4) as u8) == (b % 4) as u8).collect())
            .collect();
        let mut idx = vec![0usize; m.len()];
        loop {
            let mut rows = vec![[Gluing::new(0, 0, Perm4::IDENTITY); 4]; k];
            for (i, &(a, b)) in m.iter().enumerate() {
                let p = choices[i][idx[i]];
                rows[a / 4][a % 4] = Gluing::new((b / 4) as u32, (b % 4) as u8, p);
                rows[b / 4][b % 4] = Gluing::new((a / 4) as u32, (a % 4) as u8, p.inverse());
            }
            if let Ok(t) = GluedTriangulation::from_gluings(rows) {
                if t.validate_manifold().is_valid() {
                    out.insert(brute_canonical(&t));
                }
            }
            let mut j = 0;
            while j < idx.len() {
                idx[j] += 1;
                if idx[j] < 6 {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == idx.len() {
                break;
            }
        }
    }
    out
}

/// Isomorphism classes reachable from `t0` with every step inside `lo..=hi`.
pub fn reachable_classes(t0: &GluedTriangulation, lo: usize, hi: usize) -> BTreeSet<IsoSignature> {
    let mut seen = BTreeSet::from([t0.iso_signature()]);
    let mut queue = VecDeque::from([t0.clone()]);
    while let Some(t) = queue.pop_front() {
        for m in enumerate_moves(&t, &MoveKind::ALL) {
            let n3 = t.tet_count() as i64 + m.kind.tet_delta();
            if n3 < lo as i64 || n3 > hi as i64 {
                continue;
            }
            let next = apply_move(&t, &m).unwrap();
            if seen.insert(next.iso_signature()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Pairwise detailed-balance χ² statistic and its degrees of freedom.
///
/// For a Markov chain the transition counts out of each state are
/// multinomial given the visit counts, whatever the mixing. Under
/// `π(a)P(a,b) = π(b)P(b,a)` the forward share of the `{a,b}` transitions is
/// `q = N(a)π(b) / (N(a)π(b) + N(b)π(a))`.
pub fn detailed_balance_chi2(
    path: &[IsoSignature],
    pi: &dyn Fn(&IsoSignature) -> f64,
) -> (f64, usize) {
    let mut visits: BTreeMap<&IsoSignature, f64> = BTreeMap::new();
    let mut flow: BTreeMap<(&IsoSignature, &IsoSignature), f64> = BTreeMap::new();
    for w in path.windows(2) {
        *visits.entry(&w[0]).or_default() += 1.0;
        if w[0] != w[1] {
            *flow.entry((&w[0], &w[1])).or_default() += 1.0;
        }
    }
    let (mut chi2, mut df) = (0.0, 0);
    for (&(a, b), &x) in &flow {
        if a > b {
            continue;
        }
        let y = flow.get(&(b, a)).copied().unwrap_or(0.0);
        let n = x + y;
        if n < 10.0 {
            continue;
        }
        let (fa, fb) = (visits[a] * pi(b), visits.get(b).copied().unwrap_or(0.0) * pi(a));
        let q = fa / (fa + fb);
        chi2 += (x - n * q).powi(2) / (n * q * (1.0 - q));
        df += 1;
    }
    (chi2, df)
}

pub fn record(t0: &GluedTriangulation, cfg: &SamplerConfig) -> Vec<IsoSignature> {
    let mut path: Vec<IsoSignature> = Vec::new();
    let mut last: Option<GluedTriangulation> = None;
    run_chain_observed(t0, cfg, |t| {
        // Rejected proposals leave the labelled state untouched.
        let sig = match (&last, path.last()) {
            (Some(prev), Some(sig)) if prev == t => sig.clone(),
            _ => t.iso_signature(),
        };
        last = Some(t.clone());
        path.push(sig);
    })
    .unwrap();
    path
}
