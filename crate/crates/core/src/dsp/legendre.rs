use crate::error::{Error, Result};

fn check(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Legendre argument {x} outside [-1, 1]")));
    }
    Ok(())
}

/// `P_0(x), ..., P_n(x)` by Bonnet's recurrence.
pub fn legendre_series(n: usize, x: f64) -> Result<Vec<f64>> {
    check(x)?;
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(x);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
        p.push(next);
    }
    Ok(p)
}

/// Legendre polynomial `P_n(x)`.
pub fn legendre_p(n: usize, x: f64) -> Result<f64> {
    Ok(legendre_series(n, x)?[n])
}
