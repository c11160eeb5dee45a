use rayon::prelude::*;

use crate::mdp::FiniteMdp;

/// `𝐋(v) = min(1, max(0, v))`.
#[inline]
pub fn truncate(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// One maximizing backup: `V(i, q) = 𝐋(max_j Σ_k T[i][j][k] w(k, q) + shift)`.
/// The argmax is taken on the untruncated sum; the lowest index wins ties.
pub(crate) fn backup_max(mdp: &FiniteMdp, w: &[f64], nq: usize, shift: f64) -> (Vec<f64>, Vec<u32>) {
    let n = mdp.num_states();
    let m = mdp.num_inputs();
    let mut v = vec![0.0; n * nq];
    let mut mu = vec![0u32; n * nq];
    v.par_chunks_mut(nq).zip(mu.par_chunks_mut(nq)).enumerate().for_each(|(i, (vc, mc))| {
        let mut acc = vec![0.0; nq];
        let mut best = vec![f64::NEG_INFINITY; nq];
        for j in 0..m {
            acc.fill(0.0);
            for &(k, p) in mdp.row(i, j) {
                let wk = &w[k as usize * nq..(k as usize + 1) * nq];
                for (a, &x) in acc.iter_mut().zip(wk) {
                    *a += p * x;
                }
            }
            for q in 0..nq {
                if acc[q] > best[q] {
                    best[q] = acc[q];
                    mc[q] = j as u32;
                }
            }
        }
        for q in 0..nq {
            vc[q] = truncate(best[q] + shift);
        }
    });
    (v, mu)
}

/// Backup under a fixed choice table.
pub(crate) fn backup_fixed(mdp: &FiniteMdp, w: &[f64], nq: usize, shift: f64, choice: &[u32]) -> Vec<f64> {
    let n = mdp.num_states();
    let mut v = vec![0.0; n * nq];
    v.par_chunks_mut(nq).enumerate().for_each(|(i, vc)| {
        for q in 0..nq {
            let j = choice[i * nq + q] as usize;
            let s: f64 = mdp.row(i, j).iter().map(|&(k, p)| p * w[k as usize * nq + q]).sum();
            vc[q] = truncate(s + shift);
        }
    });
    v
}
