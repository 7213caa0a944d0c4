//! Row-band parallel fill of a preallocated buffer.

use std::sync::Mutex;
use std::thread;

/// Number of workers to use when the caller does not specify one.
pub fn default_workers() -> usize {
    thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Calls `f(row, row_slice)` for every row of `buf` (rows of `width`
/// elements). Rows are handed out in bands from a shared queue; every row
/// writes only its own slice, so the result does not depend on scheduling.
pub fn fill_rows<T, F>(buf: &mut [T], width: usize, workers: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    if width == 0 || buf.is_empty() {
        return;
    }
    let rows = buf.len() / width;
    let workers = workers.max(1).min(rows);
    if workers == 1 {
        for (j, row) in buf.chunks_mut(width).enumerate() {
            f(j, row);
        }
        return;
    }
    let band = (rows / (workers * 8)).max(1);
    let queue = Mutex::new(buf.chunks_mut(width * band).enumerate());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let next = queue.lock().unwrap().next();
                let Some((b, chunk)) = next else { break };
                for (r, row) in chunk.chunks_mut(width).enumerate() {
                    f(b * band + r, row);
                }
            });
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fills_every_row_once() {
        for workers in [1, 2, 3, 8] {
            let mut buf = vec![0usize; 7 * 13];
            fill_rows(&mut buf, 7, workers, |j, row| {
                for (i, x) in row.iter_mut().enumerate() {
                    *x += j * 7 + i;
                }
            });
            assert!(buf.iter().enumerate().all(|(k, &x)| k == x));
        }
    }
}
