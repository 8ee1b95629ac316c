//! Scalar search helpers: grids and golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `count` points from `min` to `max`, inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![min],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// `count` log-spaced points from `min` to `max`, inclusive. Both must be > 0.
pub fn logspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    let (a, b) = (min.ln(), max.ln());
    let mut v: Vec<f64> = linspace(a, b, count).into_iter().map(f64::exp).collect();
    if let Some(first) = v.first_mut() {
        *first = min;
    }
    if count > 1 {
        v[count - 1] = max;
    }
    v
}

/// Minimizes `f` on `[a, b]` by golden-section search until the bracket is
/// narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while (b - a).abs() > tol && iterations < 200 {
        // ties move toward the lower end
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Index of the smallest value; NaN entries are skipped and ties go to the
/// first occurrence.
pub fn argmin(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_nan())
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}

pub fn argmax(values: &[f64]) -> Option<usize> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    argmin(&negated)
}

/// Indices of interior strict local minima (plateaus count once, at their
/// first point).
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = values.len();
    let mut i = 1;
    while i + 1 < n {
        if values[i] < values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] > values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    local_minima(&negated)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_min(|x| (x - 1.3).powi(2) + 2.0, -4.0, 5.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = logspace(1e-4, 1e8, 241);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[240], 1e8);
        assert!((g[20] / 1e-3 - 1.0).abs() < 1e-12);
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn extrema_detection() {
        let v = [3.0, 1.0, 2.0, 2.0, 0.5, 0.5, 4.0, 1.0];
        assert_eq!(local_minima(&v), vec![1, 4]);
        assert_eq!(local_maxima(&v), vec![2, 6]);
        assert_eq!(argmin(&v), Some(4));
        assert_eq!(argmax(&[f64::NAN, 1.0, 1.0]), Some(1));
    }
}
