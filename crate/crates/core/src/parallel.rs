// SPDX-License-Identifier: Apache-2.0

//! Static work decomposition over contiguous output slabs.

use std::thread;

/// Calls `f(slab_index, slab)` for every `slab_len`-sized chunk of `out`.
///
/// Slabs are dealt out to at most `workers` scoped threads in contiguous
/// runs; each slab is written by exactly one worker.
pub(crate) fn for_each_slab<V, F>(out: &mut [V], slab_len: usize, workers: usize, f: F)
where
    V: Send,
    F: Fn(usize, &mut [V]) + Sync,
{
    let slabs: Vec<(usize, &mut [V])> = out.chunks_mut(slab_len).enumerate().collect();
    let workers = workers.clamp(1, slabs.len().max(1));
    if workers == 1 {
        for (index, slab) in slabs {
            f(index, slab);
        }
        return;
    }

    let per_worker = slabs.len().div_ceil(workers);
    let mut slabs = slabs.into_iter();
    let f = &f;
    thread::scope(|scope| {
        loop {
            let group: Vec<_> = slabs.by_ref().take(per_worker).collect();
            if group.is_empty() {
                break;
            }
            scope.spawn(move || {
                for (index, slab) in group {
                    f(index, slab);
                }
            });
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_slab_visited_once() {
        for workers in [1, 2, 3, 8, 64] {
            let mut out = vec![0usize; 103];
            for_each_slab(&mut out, 10, workers, |index, slab| {
                for v in slab.iter_mut() {
                    *v += index + 1;
                }
            });
            for (i, v) in out.iter().enumerate() {
                assert_eq!(*v, i / 10 + 1);
            }
        }
    }
}
