//! Dense GF(2) oracle for page turns, independent of the engine's linear algebra.

#![allow(dead_code)]

use rhobock_core::{BocksteinRun, F2Vector, TriDegree};

pub fn bits(v: &F2Vector) -> Vec<bool> {
    (0..v.len()).map(|i| v.get(i)).collect()
}

fn xor(a: &mut [bool], b: &[bool]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

pub fn rank(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] {
                xor(row, &pivot);
            }
        }
        r += 1;
    }
    r
}

/// Coefficients expressing `v` in `basis`, if `v` lies in its span.
pub fn solve(basis: &[Vec<bool>], v: &[bool]) -> Option<Vec<bool>> {
    let n = basis.len();
    let mut pivots: Vec<(usize, Vec<bool>, Vec<bool>)> = Vec::new();
    let reduce =
        |pivots: &[(usize, Vec<bool>, Vec<bool>)], vec: &mut Vec<bool>, combo: &mut Vec<bool>| {
            for (c, pv, pc) in pivots {
                if vec[*c] {
                    xor(vec, pv);
                    xor(combo, pc);
                }
            }
        };
    for (i, b) in basis.iter().enumerate() {
        let mut vec = b.clone();
        let mut combo = vec![false; n];
        combo[i] = true;
        reduce(&pivots, &mut vec, &mut combo);
        if let Some(c) = vec.iter().position(|&x| x) {
            for (_, pv, pc) in pivots.iter_mut() {
                if pv[c] {
                    xor(pv, &vec);
                    xor(pc, &combo);
                }
            }
            pivots.push((c, vec, combo));
        }
    }
    let mut vec = v.to_vec();
    let mut combo = vec![false; n];
    reduce(&pivots, &mut vec, &mut combo);
    vec.iter().all(|&x| !x).then_some(combo)
}

/// Checks every page turn in stems `≤ max_stem`: `dim E_{r+1} = dim E_r - rank out - rank in`,
/// images are cycles, and `d_r ∘ d_r` lands in the boundaries. Returns failures.
pub fn page_turn_failures(run: &BocksteinRun, max_stem: i64) -> Vec<String> {
    let shift = TriDegree::BOCKSTEIN_SHIFT;
    let mut fails = Vec::new();
    let rows = |it: &mut dyn Iterator<Item = &F2Vector>| it.map(bits).collect::<Vec<_>>();
    for (p, page) in run.pages.iter().enumerate() {
        if page.r as usize != p + 1 {
            fails.push(format!("page {p} is labelled {}", page.r));
        }
        let next = run.pages.get(p + 1).map_or(&run.e_inf, |n| &n.states);
        let image_rank = |src: TriDegree, tgt: TriDegree| -> usize {
            let (Some(im), Some(t)) = (page.images.get(&src), page.states.get(&tgt)) else {
                return 0;
            };
            let b = rows(&mut t.boundaries.basis());
            let mut all = b.clone();
            all.extend(im.iter().map(bits));
            rank(&all) - rank(&b)
        };
        for (&d, st) in &page.states {
            if d.s > max_stem {
                continue;
            }
            let z = rows(&mut st.cycles.basis());
            let b = rows(&mut st.boundaries.basis());
            let mut zb = z.clone();
            zb.extend(b.iter().cloned());
            if rank(&zb) != rank(&z) {
                fails.push(format!("E_{}: boundaries not inside cycles at {d}", page.r));
            }
            let dim = rank(&z) - rank(&b);
            if dim != st.dim() {
                fails.push(format!(
                    "E_{}: dimension {} vs oracle {dim} at {d}",
                    page.r,
                    st.dim()
                ));
            }
            let out = image_rank(d, d + shift);
            let inc = image_rank(d - shift, d);
            let nd = next.get(&d).map_or(0, |n| {
                rank(&rows(&mut n.cycles.basis())) - rank(&rows(&mut n.boundaries.basis()))
            });
            if nd + out + inc != dim {
                fails.push(format!(
                    "E_{}→E_{} at {d}: {dim} - {out} - {inc} != {nd}",
                    page.r,
                    page.r + 1
                ));
            }
            let Some(im) = page.images.get(&d) else {
                continue;
            };
            let t = d + shift;
            let Some(ts) = page.states.get(&t) else {
                fails.push(format!("E_{}: image of {d} outside the page", page.r));
                continue;
            };
            let reps: Vec<Vec<bool>> = ts.reps().iter().map(bits).collect();
            let mut basis = reps.clone();
            basis.extend(rows(&mut ts.boundaries.basis()));
            let im2 = page.images.get(&(t + shift));
            let b2 = page
                .states
                .get(&(t + shift))
                .map(|s| rows(&mut s.boundaries.basis()));
            for v in im {
                let Some(c) = solve(&basis, &bits(v)) else {
                    fails.push(format!("E_{}: image of {d} is not a cycle", page.r));
                    continue;
                };
                let (Some(im2), Some(b2)) = (im2, &b2) else {
                    continue;
                };
                let mut w = vec![false; im2.first().map_or(0, F2Vector::len)];
                for (i, &on) in c.iter().take(reps.len()).enumerate() {
                    if on {
                        xor(&mut w, &bits(&im2[i]));
                    }
                }
                if solve(b2, &w).is_none() {
                    fails.push(format!("E_{}: d∘d ≠ 0 from {d}", page.r));
                }
            }
        }
    }
    fails
}
