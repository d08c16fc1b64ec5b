//! Real-root isolation for low-degree polynomials by Sturm sequences.
//!
//! Coefficients are stored in ascending order, `c[0] + c[1] x + …`.

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("invalid interval ({lo}, {hi})")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("non-finite coefficient at degree {0}")]
    NonFinite(usize),
}

/// Leading coefficients below this fraction of the largest one are dropped.
const TRIM_REL: f64 = 1e-14;
/// Isolation stops once an interval is narrower than this.
const ROOT_WIDTH: f64 = 1e-13;
/// Roots closer than this are merged.
const MERGE_TOL: f64 = 1e-10;

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

fn trim(c: &[f64]) -> Vec<f64> {
    let scale = c.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let mut v: Vec<f64> = c.iter().map(|a| a / scale).collect();
    while v.len() > 1 && v.last().is_some_and(|a| a.abs() <= TRIM_REL) {
        v.pop();
    }
    v
}

/// Remainder of `a / b`, both ascending, `b` with nonzero leading term.
fn poly_rem(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let q = r[r.len() - 1] / lead;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] -= q * bi;
        }
        r.pop();
    }
    r
}

fn sturm_chain(p: &[f64]) -> Vec<Vec<f64>> {
    let mut chain = vec![p.to_vec()];
    let dp = derivative(p);
    if dp.is_empty() {
        return chain;
    }
    chain.push(dp);
    loop {
        let n = chain.len();
        if chain[n - 1].len() <= 1 {
            break;
        }
        let prev_scale = chain[n - 2].iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        let mut r = poly_rem(&chain[n - 2], &chain[n - 1]);
        let r_scale = r.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        // A relatively negligible remainder means the last element is the gcd.
        if r_scale <= 1e-11 * prev_scale {
            break;
        }
        while r.len() > 1 && r.last().is_some_and(|a| a.abs() <= 1e-13 * r_scale) {
            r.pop();
        }
        chain.push(r.into_iter().map(|a| -a / r_scale).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<f64>], x: f64) -> usize {
    let mut count = 0;
    let mut last = 0.0;
    for p in chain {
        let v = eval(p, x);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Distinct real roots in `(a, b]`.
fn count_roots(chain: &[Vec<f64>], a: f64, b: f64) -> usize {
    sign_changes(chain, a).saturating_sub(sign_changes(chain, b))
}

fn refine(p: &[f64], chain: &[Vec<f64>], mut a: f64, mut b: f64) -> f64 {
    let mut fa = eval(p, a);
    let fb = eval(p, b);
    if fb == 0.0 {
        return b;
    }
    if fa != 0.0 && (fa > 0.0) != (fb > 0.0) {
        while b - a > ROOT_WIDTH {
            let m = 0.5 * (a + b);
            let fm = eval(p, m);
            if fm == 0.0 {
                return m;
            }
            if (fm > 0.0) == (fa > 0.0) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }
    // Even multiplicity: no sign change, follow the Sturm count instead.
    while b - a > ROOT_WIDTH {
        let m = 0.5 * (a + b);
        if count_roots(chain, a, m) >= 1 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn isolate(p: &[f64], chain: &[Vec<f64>], a: f64, b: f64, out: &mut Vec<f64>) {
    let n = count_roots(chain, a, b);
    if n == 0 {
        return;
    }
    if n == 1 || b - a <= ROOT_WIDTH {
        out.push(refine(p, chain, a, b));
        return;
    }
    let m = 0.5 * (a + b);
    isolate(p, chain, a, m, out);
    isolate(p, chain, m, b, out);
}

/// All distinct real roots of `Σ c_k x^k` in the open interval `(lo, hi)`,
/// ascending.
pub fn poly_real_roots_in_open_interval(coeffs: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>, PolyError> {
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(PolyError::InvalidInterval { lo, hi });
    }
    if let Some(k) = coeffs.iter().position(|a| !a.is_finite()) {
        return Err(PolyError::NonFinite(k));
    }
    if coeffs.iter().all(|&a| a == 0.0) {
        return Err(PolyError::ZeroPolynomial);
    }
    let p = trim(coeffs);
    if p.len() == 1 {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(&p);
    let mut roots = Vec::new();
    isolate(&p, &chain, lo, hi, &mut roots);
    roots.retain(|&x| x > lo && x < hi);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    Ok(roots)
}

/// Ascending coefficients of `Π (x − r)`.
pub fn from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= r * a;
        }
        c = next;
    }
    c
}

/// Product of two ascending coefficient vectors.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let r = poly_real_roots_in_open_interval(&[-0.25, 0.0, 1.0], -1.0, 1.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] + 0.5).abs() < 1e-12 && (r[1] - 0.5).abs() < 1e-12);
        assert!(poly_real_roots_in_open_interval(&[1.0, 0.0, 1.0], -1.0, 1.0).unwrap().is_empty());
    }

    #[test]
    fn planted_sextic() {
        let p = mul(&from_roots(&[-0.7, 0.1, 0.9, 1.5]), &[1.0, 0.0, 1.0]);
        assert_eq!(p.len(), 7);
        let r = poly_real_roots_in_open_interval(&p, -1.0, 1.0).unwrap();
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-0.7, 0.1, 0.9]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn double_root_collapsed() {
        let p = from_roots(&[0.3, 0.3, -0.2]);
        let r = poly_real_roots_in_open_interval(&p, -1.0, 1.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] + 0.2).abs() < 1e-12);
        assert!((r[1] - 0.3).abs() < 1e-7);
    }

    #[test]
    fn endpoints_are_excluded() {
        let p = from_roots(&[-1.0, 1.0, 0.25]);
        let r = poly_real_roots_in_open_interval(&p, -1.0, 1.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            poly_real_roots_in_open_interval(&[0.0, 0.0], -1.0, 1.0),
            Err(PolyError::ZeroPolynomial)
        );
        assert!(poly_real_roots_in_open_interval(&[3.0], -1.0, 1.0).unwrap().is_empty());
        assert!(matches!(
            poly_real_roots_in_open_interval(&[1.0, 1.0], 1.0, -1.0),
            Err(PolyError::InvalidInterval { .. })
        ));
        // Leading coefficient at rounding level is dropped.
        let r = poly_real_roots_in_open_interval(&[-0.5, 1.0, 1e-17], -1.0, 1.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-12);
    }
}
