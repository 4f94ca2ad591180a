use alloc::vec::Vec;

/// Squared distance from `p` to `{anchor + t·dir : t ∈ [t_lo, t_hi]}`.
///
/// `dir` must be unit. Infinite bounds give the full line; the arithmetic is
/// the same in both cases, so a segment and the line it lies on agree
/// bit-for-bit wherever the foot of the perpendicular is interior.
#[inline]
pub fn segment_distance_sq(anchor: &[f64], dir: &[f64], t_lo: f64, t_hi: f64, p: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..p.len() {
        s += (p[i] - anchor[i]) * dir[i];
    }
    let s = s.clamp(t_lo, t_hi);
    let mut d2 = 0.0;
    for i in 0..p.len() {
        let r = (p[i] - anchor[i]) - s * dir[i];
        d2 += r * r;
    }
    d2
}

#[inline]
fn box_distance_sq_at(anchor: &[f64], dir: &[f64], t: f64, lo: &[f64], hi: &[f64]) -> f64 {
    let mut d2 = 0.0;
    for i in 0..anchor.len() {
        let x = anchor[i] + t * dir[i];
        let v = if x < lo[i] {
            lo[i] - x
        } else if x > hi[i] {
            x - hi[i]
        } else {
            0.0
        };
        d2 += v * v;
    }
    d2
}

/// Squared distance between the (possibly unbounded) segment
/// `{anchor + t·dir : t ∈ [t_lo, t_hi]}` and the box `[lo, hi]`.
///
/// `f(t) = dist(anchor + t·dir, box)²` is convex and piecewise quadratic with
/// breakpoints where a coordinate crosses a face. On each piece the active
/// faces are fixed, so the piece's minimiser has a closed form; the global
/// minimum is the least of those clamped minimisers and the breakpoints.
pub fn line_box_distance_sq(anchor: &[f64], dir: &[f64], t_lo: f64, t_hi: f64, lo: &[f64], hi: &[f64]) -> f64 {
    let n = anchor.len();
    let mut knots: Vec<f64> = Vec::with_capacity(2 * n + 2);
    for i in 0..n {
        if dir[i] != 0.0 {
            for face in [lo[i], hi[i]] {
                let t = (face - anchor[i]) / dir[i];
                if t > t_lo && t < t_hi {
                    knots.push(t);
                }
            }
        }
    }
    if t_lo.is_finite() {
        knots.push(t_lo);
    }
    if t_hi.is_finite() {
        knots.push(t_hi);
    }
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let mut best = f64::INFINITY;
    for &t in &knots {
        best = best.min(box_distance_sq_at(anchor, dir, t, lo, hi));
    }

    // Pieces: (-inf, k0], [k0, k1], ..., [k_last, inf), restricted to [t_lo, t_hi].
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(knots.len() + 1);
    match (knots.first(), knots.last()) {
        (None, _) | (_, None) => pieces.push((t_lo, t_hi)),
        (Some(&first), Some(&last)) => {
            if t_lo < first {
                pieces.push((t_lo, first));
            }
            for w in knots.windows(2) {
                pieces.push((w[0], w[1]));
            }
            if last < t_hi {
                pieces.push((last, t_hi));
            }
        }
    }

    for (a, b) in pieces {
        let probe = match (a.is_finite(), b.is_finite()) {
            (true, true) => 0.5 * (a + b),
            (true, false) => a + 1.0,
            (false, true) => b - 1.0,
            (false, false) => 0.0,
        };
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            if dir[i] == 0.0 {
                continue;
            }
            let x = anchor[i] + probe * dir[i];
            let target = if x < lo[i] {
                lo[i]
            } else if x > hi[i] {
                hi[i]
            } else {
                continue;
            };
            num += dir[i] * (anchor[i] - target);
            den += dir[i] * dir[i];
        }
        let t = if den > 0.0 { (-num / den).clamp(a, b) } else { probe };
        best = best.min(box_distance_sq_at(anchor, dir, t, lo, hi));
    }
    best
}
