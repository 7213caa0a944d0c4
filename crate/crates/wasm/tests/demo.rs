use chdyn::Complex;
use chdyn_wasm::{dynamical_plane_rgba, parameter_plane_rgba, summary};

#[test]
fn parameter_plane_is_rgba() {
    let px = parameter_plane_rgba(3, -1.4, 4.6, -2.0, 2.0, 30, 20, 150).unwrap();
    assert_eq!(px.len(), 30 * 20 * 4);
    assert!(px.chunks_exact(4).all(|c| c[3] == 255));
    // the strange-fixed disk around 2.5 is non-converged, hence black
    let (i, j) = (((2.5 + 1.4) / 6.0 * 30.0) as usize, 10);
    assert_eq!(&px[4 * (j * 30 + i)..][..3], &[0, 0, 0]);
}

#[test]
fn markers_change_the_dynamical_plane() {
    let a = Complex::new(0.2, 1.592);
    let plain = dynamical_plane_rgba(3, a, -1.0, 1.5, -1.25, 1.25, 64, 64, 75, false).unwrap();
    let marked = dynamical_plane_rgba(3, a, -1.0, 1.5, -1.25, 1.25, 64, 64, 75, true).unwrap();
    assert_eq!(plain.len(), marked.len());
    assert_ne!(plain, marked);
    // root 1 is marked blue
    let i = ((1.0 + 1.0) / 2.5 * 64.0) as usize;
    let j = (1.25 / 2.5 * 64.0) as usize;
    assert_eq!(&marked[4 * (j * 64 + i)..][..4], &[0, 0, 255, 255]);
}

#[test]
fn summaries() {
    let s = summary(3, Complex::new(0.2, 1.592)).unwrap();
    assert!(s.contains("julia set: disconnected"), "{s}");
    let s = summary(3, Complex::new(2.5, 0.0)).unwrap();
    assert!(s.contains("attracting strange fixed point"), "{s}");
    assert!(s.contains("julia set: connected"), "{s}");
    let s = summary(3, Complex::new(0.5, 0.0)).unwrap();
    assert!(s.contains("no free critical points"), "{s}");
    assert!(summary(1, Complex::new(0.0, 0.0)).is_err());
}

#[test]
fn bad_sizes_are_errors() {
    assert!(parameter_plane_rgba(3, -1.0, 1.0, -1.0, 1.0, 0, 10, 10).is_err());
    assert!(parameter_plane_rgba(3, 1.0, -1.0, -1.0, 1.0, 10, 10, 10).is_err());
}
