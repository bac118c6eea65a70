//! Independent reference implementations used as test oracles. Nothing here
//! calls into the geometry, DSP or statistics code under test.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tvkit::Point;

pub type P = (f64, f64);

pub fn pt(p: P) -> Point {
    Point::new(p.0, p.1)
}

fn hypot(a: P, b: P) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Samples every segment at spacing at most `step`, endpoints included.
pub fn densify(poly: &[P], step: f64) -> impl Iterator<Item = P> + '_ {
    poly.windows(2).flat_map(move |w| {
        let n = (hypot(w[0], w[1]) / step).ceil().max(1.0) as usize;
        (0..=n).map(move |k| {
            let t = k as f64 / n as f64;
            (w[0].0 + (w[1].0 - w[0].0) * t, w[0].1 + (w[1].1 - w[0].1) * t)
        })
    })
}

/// Brute-force point-to-polyline distance over a densified polyline.
pub fn dense_point_polyline(p: P, poly: &[P], step: f64) -> f64 {
    densify(poly, step).map(|q| hypot(p, q)).fold(f64::INFINITY, f64::min)
}

/// Brute-force circle-to-polyline distance: densified polyline against the
/// closed-form point-to-circle distance. Also returns the x of the circle
/// point nearest each sample within `near` of the minimum.
pub fn dense_circle_polyline(center: P, r: f64, poly: &[P], step: f64, near: f64) -> (f64, Vec<f64>) {
    let samples: Vec<(f64, f64)> = densify(poly, step)
        .map(|q| {
            let d = hypot(q, center);
            let x = if d > 0.0 { center.0 + r * (q.0 - center.0) / d } else { f64::NAN };
            ((d - r).abs(), x)
        })
        .collect();
    let best = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let xs = samples.iter().filter(|s| s.0 <= best + near).map(|s| s.1).collect();
    (best, xs)
}

/// Exact distance from `p` to segment `a`-`b`, written out longhand.
pub fn seg_dist(p: P, a: P, b: P) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    hypot(p, (a.0 + t * dx, a.1 + t * dy))
}

/// Circle sampled at `n` points, each measured exactly to the polyline.
/// Only meaningful where the polyline does not enter the circle.
pub fn sampled_circle_polyline(center: P, r: f64, poly: &[P], n: usize) -> f64 {
    (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let c = (center.0 + r * th.cos(), center.1 + r * th.sin());
            poly.windows(2).map(|w| seg_dist(c, w[0], w[1])).fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn random_polyline(rng: &mut ChaCha8Rng, n: usize, half: f64) -> Vec<P> {
    (0..n)
        .map(|_| (rng.gen_range(-half..half), rng.gen_range(-half..half)))
        .collect()
}

/// Centre and radius from the perpendicular-bisector equations, solved by
/// Cramer's rule.
pub fn circumcircle_ref(a: P, b: P, c: P) -> (P, f64) {
    let (a1, b1) = (2.0 * (b.0 - a.0), 2.0 * (b.1 - a.1));
    let (a2, b2) = (2.0 * (c.0 - a.0), 2.0 * (c.1 - a.1));
    let c1 = b.0 * b.0 - a.0 * a.0 + b.1 * b.1 - a.1 * a.1;
    let c2 = c.0 * c.0 - a.0 * a.0 + c.1 * c.1 - a.1 * a.1;
    let det = a1 * b2 - a2 * b1;
    let center = ((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
    (center, hypot(center, a))
}

/// Power spectrum of a Hamming-windowed frame by direct O(N^2) DFT.
pub fn dft_power(frame: &[f64], nfft: usize) -> Vec<f64> {
    let n = frame.len();
    let w: Vec<f64> = (0..n)
        .map(|i| 0.54 - 0.46 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos())
        .collect();
    (0..=nfft / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for i in 0..n {
                let ph = -2.0 * std::f64::consts::PI * (k * i) as f64 / nfft as f64;
                re += frame[i] * w[i] * ph.cos();
                im += frame[i] * w[i] * ph.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// Index of the mel filter whose peak frequency is closest to `hz`, for
/// `n_mels` HTK-mel triangles spanning `[0, fmax]`.
pub fn expected_mel_band(hz: f64, n_mels: usize, fmax: f64) -> usize {
    let mel = |f: f64| 2595.0 * (1.0 + f / 700.0).log10();
    let target = mel(hz);
    let step = mel(fmax) / (n_mels + 1) as f64;
    (0..n_mels)
        .min_by(|&a, &b| {
            let da = ((a + 1) as f64 * step - target).abs();
            let db = ((b + 1) as f64 * step - target).abs();
            da.total_cmp(&db)
        })
        .unwrap()
}

/// Two-pass textbook Pearson correlation.
pub fn pearson_ref(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Rotation by `theta` followed by translation by `t`.
#[derive(Clone, Copy, Debug)]
pub struct Rigid {
    pub theta: f64,
    pub t: P,
}

impl Rigid {
    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.theta.sin_cos();
        Point::new(c * p.x - s * p.y + self.t.0, s * p.x + c * p.y + self.t.1)
    }

    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        Rigid {
            theta: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            t: (rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)),
        }
    }
}
