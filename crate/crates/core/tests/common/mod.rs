//! Independent reference implementations used as test oracles. Nothing here
//! calls into the engines; they work from raw rankings, raw graphs, or the
//! raw instance tables.

#![allow(dead_code)]

use interview_match::{ApplicantId, Instance, InterviewLedger, Matching, PositionId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Strict complete rankings: `app[i]` lists position indices best first,
/// `pos[j]` lists applicant indices best first.
#[derive(Debug, Clone)]
pub struct Rankings {
    pub app: Vec<Vec<usize>>,
    pub pos: Vec<Vec<usize>>,
}

impl Rankings {
    pub fn random(n: usize, m: usize, seed: u64) -> Rankings {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffled = |len: usize, rng: &mut ChaCha8Rng| {
            let mut v: Vec<usize> = (0..len).collect();
            v.shuffle(rng);
            v
        };
        Rankings {
            app: (0..n).map(|_| shuffled(m, &mut rng)).collect(),
            pos: (0..m).map(|_| shuffled(n, &mut rng)).collect(),
        }
    }

    fn app_rank(&self, i: usize, j: usize) -> usize {
        self.app[i].iter().position(|&x| x == j).unwrap()
    }

    fn pos_rank(&self, j: usize, i: usize) -> usize {
        self.pos[j].iter().position(|&x| x == i).unwrap()
    }

    /// Does `i` strictly prefer `j` to `current`? Unmatched is worst.
    pub fn app_prefers(&self, i: usize, j: usize, current: Option<usize>) -> bool {
        current.is_none_or(|c| self.app_rank(i, j) < self.app_rank(i, c))
    }

    pub fn pos_prefers(&self, j: usize, i: usize, current: Option<usize>) -> bool {
        current.is_none_or(|c| self.pos_rank(j, i) < self.pos_rank(j, c))
    }
}

/// `assign[i]` is applicant `i`'s position.
pub type Assignment = Vec<Option<usize>>;

/// Every injective partial assignment of `n` applicants into `m` positions.
pub fn all_assignments(n: usize, m: usize) -> Vec<Assignment> {
    fn rec(i: usize, n: usize, used: &mut Vec<bool>, cur: &mut Assignment, out: &mut Vec<Assignment>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        rec(i + 1, n, used, cur, out);
        cur.pop();
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(Some(j));
                rec(i + 1, n, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

pub fn holder(assign: &Assignment, j: usize) -> Option<usize> {
    assign.iter().position(|&x| x == Some(j))
}

pub fn blocking_pairs(r: &Rankings, assign: &Assignment) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &cur) in assign.iter().enumerate() {
        for j in 0..r.pos.len() {
            if cur == Some(j) {
                continue;
            }
            if r.app_prefers(i, j, cur) && r.pos_prefers(j, i, holder(assign, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn stable_matchings(r: &Rankings) -> Vec<Assignment> {
    all_assignments(r.app.len(), r.pos.len())
        .into_iter()
        .filter(|a| blocking_pairs(r, a).is_empty())
        .collect()
}

/// The stable matching every applicant weakly prefers to every other stable
/// matching.
pub fn applicant_optimal(r: &Rankings) -> Assignment {
    let stable = stable_matchings(r);
    let weakly_better = |x: &Assignment, y: &Assignment| {
        x.iter()
            .zip(y)
            .enumerate()
            .all(|(i, (&a, &b))| a == b || r.app_prefers(i, a.expect("complete lists"), b))
    };
    stable
        .iter()
        .find(|x| stable.iter().all(|y| weakly_better(x, y)))
        .cloned()
        .expect("an applicant-optimal stable matching exists")
}

/// Size of a maximum matching, by trying every way to assign lefts in order.
pub fn brute_max_matching(right: usize, adjacency: &[Vec<usize>]) -> usize {
    fn rec(i: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
        if i == adj.len() {
            return 0;
        }
        let mut best = rec(i + 1, adj, used);
        for &r in &adj[i] {
            if !used[r] {
                used[r] = true;
                best = best.max(1 + rec(i + 1, adj, used));
                used[r] = false;
            }
        }
        best
    }
    rec(0, adjacency, &mut vec![false; right])
}

pub fn random_graph(left: usize, right: usize, density: f64, seed: u64) -> Vec<Vec<usize>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..left)
        .map(|_| (0..right).filter(|_| rng.gen::<f64>() < density).collect())
        .collect()
}

fn v_of(inst: &Instance, z: &InterviewLedger, i: usize, j: usize) -> f64 {
    z.get(ApplicantId(i), PositionId(j))
        .map_or_else(|| inst.applicant_priors().get(i, j).to_owned(), |r| r.v)
}

fn u_of(inst: &Instance, z: &InterviewLedger, j: usize, i: usize) -> f64 {
    z.get(ApplicantId(i), PositionId(j))
        .map_or_else(|| inst.position_priors().get(j, i).to_owned(), |r| r.u)
}

/// Interim blocking pairs straight from the definition.
pub fn interim_blocking_pairs(inst: &Instance, z: &InterviewLedger, mu: &Matching) -> Vec<(usize, usize)> {
    let (n, m) = (inst.n(), inst.m());
    let mut out = Vec::new();
    for i in 0..n {
        let cur = mu.position_of(ApplicantId(i)).map(|p| p.0);
        for j in 0..m {
            if cur == Some(j) {
                continue;
            }
            let app_wants = cur.is_none_or(|c| v_of(inst, z, i, j) > v_of(inst, z, i, c));
            let held = mu.applicant_of(PositionId(j)).map(|a| a.0);
            let pos_wants = held.is_none_or(|h| u_of(inst, z, j, i) > u_of(inst, z, j, h));
            if app_wants && pos_wants {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn oracle_interim_stable(inst: &Instance, z: &InterviewLedger, mu: &Matching) -> bool {
    mu.pairs().all(|(a, p)| z.contains(a, p)) && interim_blocking_pairs(inst, z, mu).is_empty()
}

pub fn pairs_1based(list: &[(usize, usize)]) -> Vec<(ApplicantId, PositionId)> {
    list.iter()
        .map(|&(a, p)| (ApplicantId(a - 1), PositionId(p - 1)))
        .collect()
}
