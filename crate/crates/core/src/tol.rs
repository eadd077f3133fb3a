/// Tolerances governing every approximate comparison in the crate.
///
/// All closed forms are evaluated in double precision, so the defaults are
/// tight: `rel`/`abs` bound arithmetic noise, `pairing` is the absolute
/// threshold for orthogonality and activity decisions on pairing values, and
/// `certificate` is the slack allowed when checking variational inequalities
/// against sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rel: f64,
    pub abs: f64,
    pub pairing: f64,
    pub certificate: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rel: 1e-9,
            abs: 1e-12,
            pairing: 1e-9,
            certificate: 1e-7,
        }
    }
}

impl ToleranceConfig {
    /// Mixed absolute/relative closeness test.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }

    /// Is `v` indistinguishable from zero at absolute scale?
    pub fn is_zero(&self, v: f64) -> bool {
        v.abs() <= self.abs
    }

    /// Orthogonality/activity test on a pairing value.
    pub fn pairing_zero(&self, v: f64) -> bool {
        v.abs() <= self.pairing
    }

    /// Slack for membership on/inside a ball of radius `r`.
    pub fn ball_slack(&self, r: f64) -> f64 {
        self.abs + self.rel * r
    }
}
