/// Which estimator family suits the shape of the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Standard,
    /// Many more layers than node pairs: regress each pair separately.
    PerEdge,
    /// Too few layers for the distance estimate: smooth each network alone.
    PerNetwork,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Standard => "standard",
            Regime::PerEdge => "per_edge",
            Regime::PerNetwork => "per_network",
        }
    }
}

/// `PerEdge` when `m > n^2`, otherwise `PerNetwork` when
/// `m < (n rho^2)^(-1/2)`, otherwise `Standard`.
pub fn select_regime(n: usize, m: usize, rho_hat: f64) -> Regime {
    let nf = n as f64;
    if (m as f64) > nf * nf {
        return Regime::PerEdge;
    }
    let limit = (nf * rho_hat * rho_hat).powf(-0.5);
    if (m as f64) < limit {
        Regime::PerNetwork
    } else {
        Regime::Standard
    }
}
