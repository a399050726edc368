#![allow(dead_code)]

use latinlab::{Intercalate, LatinGrid};

/// Latin squares of order `n`, counted row by row over permutations.
pub fn count_squares_by_rows(n: usize) -> u64 {
    fn go(n: usize, rows: &mut Vec<Vec<usize>>, perms: &[Vec<usize>]) -> u64 {
        if rows.len() == n {
            return 1;
        }
        let mut total = 0;
        for p in perms {
            if rows.iter().all(|r| r.iter().zip(p).all(|(a, b)| a != b)) {
                rows.push(p.clone());
                total += go(n, rows, perms);
                rows.pop();
            }
        }
        total
    }
    let mut perms = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permutations(n, &mut cur, &mut perms);
    go(n, &mut Vec::new(), &perms)
}

fn heap_permutations(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

/// Intercalates of a grid from its cells: every row pair and column pair
/// whose 2x2 block is `[[a,b],[b,a]]`.
pub fn cell_scan(g: &impl LatinGrid) -> Vec<Intercalate> {
    let (k, n) = (g.rows(), g.order());
    let mut out = Vec::new();
    for r1 in 0..k {
        for r2 in r1 + 1..k {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    let (a, b) = (g.row(r1)[c1], g.row(r1)[c2]);
                    if g.row(r2)[c1] == b && g.row(r2)[c2] == a {
                        out.push(Intercalate {
                            rows: (r1, r2),
                            cols: (c1, c2),
                            syms: (a as usize, b as usize),
                        });
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn brute_shared_pairs(list: &[Intercalate]) -> usize {
    let mut count = 0;
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if a.triples().iter().any(|t| b.triples().contains(t)) {
                count += 1;
            }
        }
    }
    count
}

/// Largest pairwise triple-disjoint family, trying every subset.
pub fn brute_disjoint(list: &[Intercalate]) -> usize {
    assert!(list.len() <= 24);
    let m = list.len();
    let mut clash = vec![0u32; m];
    for i in 0..m {
        for j in 0..m {
            if i != j && list[i].triples().iter().any(|t| list[j].triples().contains(t)) {
                clash[i] |= 1 << j;
            }
        }
    }
    let mut best = 0;
    for mask in 0u32..(1u32 << m) {
        if (0..m).all(|i| mask >> i & 1 == 0 || clash[i] & mask == 0) {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}
