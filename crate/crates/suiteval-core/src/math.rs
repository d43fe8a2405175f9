//! Float helpers routed through libm so the crate builds without std and
//! produces the same bits everywhere.

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// ln(1 + e^z) without overflow for large |z|.
pub fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z
    } else if z < -30.0 {
        exp(z)
    } else {
        ln(1.0 + exp(z))
    }
}

/// 1 / (1 + e^-z).
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + exp(-z))
    } else {
        let e = exp(z);
        e / (1.0 + e)
    }
}
