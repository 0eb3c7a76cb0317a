//! Closed-form crossing bounds, arc-count bounds and proof thresholds.
//!
//! Every evaluator is a pure function of its arguments. Reports always carry
//! the raw value, even when a hypothesis fails, so that callers can chart a
//! bound outside its range of validity. Negative values are never clamped.

use serde::{Deserialize, Serialize};

/// Orientable surface of genus `genus` with `punctures` marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    pub genus: u64,
    pub punctures: u64,
}

impl Surface {
    pub fn new(genus: u64, punctures: u64) -> Self {
        Self { genus, punctures }
    }

    /// Sphere with `punctures` marked points.
    pub fn sphere(punctures: u64) -> Self {
        Self::new(0, punctures)
    }

    pub fn euler_char(&self) -> i64 {
        euler_characteristic(self.genus, self.punctures)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.euler_char() < 0
    }
}

/// Summary statistics of an arc system, as consumed by the bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemStats {
    pub arc_count: u64,
    pub k: u64,
    pub degrees: Vec<u64>,
    pub crossings: u64,
}

impl SystemStats {
    pub fn degree_sum(&self) -> u64 {
        self.degrees.iter().sum()
    }

    pub fn degree_square_sum(&self) -> u64 {
        self.degrees.iter().map(|d| d * d).sum()
    }
}

/// A named bound value together with the hypotheses it was evaluated under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub value: f64,
    pub applicable: bool,
    pub branch: Option<String>,
    pub constants: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(name: &str, value: f64, applicable: bool) -> Self {
        Self {
            bound_name: name.to_string(),
            value,
            applicable,
            branch: None,
            constants: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn constant(mut self, name: &str, value: f64) -> Self {
        self.constants.push((name.to_string(), value));
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn constant_value(&self, name: &str) -> Option<f64> {
        self.constants
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

pub fn euler_characteristic(genus: u64, punctures: u64) -> i64 {
    2 - 2 * genus as i64 - punctures as i64
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Upper bound on the size of a k-system of arcs on a surface of Euler
/// characteristic `euler_char`.
pub fn przytycki_max_arcs(k: u64, euler_char: i64) -> BoundReport {
    let chi = euler_char.unsigned_abs() as f64;
    let value = if k <= 1 {
        2.0 * chi * (chi + 1.0)
    } else {
        factorial(k + 2) * chi.powi((k + 1) as i32)
    };
    let mut report = BoundReport::new("przytycki_max_arcs", value, euler_char < 0 && k >= 1)
        .constant("k", k as f64)
        .constant("euler_char", euler_char as f64);
    report.branch = Some(if k <= 1 { "k=1" } else { "k>1" }.to_string());
    if euler_char >= 0 {
        report = report.note("surface is not hyperbolic (euler_char >= 0)");
    }
    if k == 0 {
        report = report.note("k=0 evaluated with the k=1 formula (a 0-system is a 1-system)");
    }
    report
}

/// `m^{2+1/k} / n^{1+1/k}` with all powers taken in double precision.
fn scaling_term(k: u64, m: f64, n: f64) -> f64 {
    let inv = 1.0 / k as f64;
    m.powf(2.0 + inv) / n.powf(1.0 + inv)
}

/// Crossing lower bound for k-systems of `m` arcs on an `n`-punctured sphere.
pub fn sphere_crossing_lower_bound(k: u64, m: u64, n: u64) -> BoundReport {
    let c_k = 1.0 / (1e6 * k as f64);
    let value = c_k * scaling_term(k, m as f64, n as f64);
    let mut report = BoundReport::new("sphere_crossing_lower_bound", value, m > 4 * n && k >= 1)
        .constant("c_k", c_k)
        .constant("k", k as f64);
    if m <= 4 * n {
        report = report.note("hypothesis m > 4n fails");
    }
    report
}

/// Branch threshold `5^{7k} k^k / 2^{5k} * n^{k+1} / g^k` of the genus bound.
pub fn genus_branch_threshold(k: u64, n: u64, g: u64) -> f64 {
    let kf = k as f64;
    let ki = k as i32;
    5f64.powi(7 * ki) * kf.powi(ki) / 2f64.powi(5 * ki) * (n as f64).powi(ki + 1)
        / (g as f64).powi(ki)
}

/// Crossing lower bound for k-systems on a genus `g` surface with `n`
/// punctures. `g = 0` delegates to [`sphere_crossing_lower_bound`].
pub fn genus_crossing_lower_bound(k: u64, m: u64, n: u64, g: u64) -> BoundReport {
    if g == 0 {
        let mut report = sphere_crossing_lower_bound(k, m, n);
        report.branch = Some("sphere".to_string());
        return report;
    }
    let threshold = genus_branch_threshold(k, n, g);
    let applicable = m > 16 * n && (n as f64) > 2f64.powi(17) * g as f64;
    let mf = m as f64;
    let (branch, value) = if mf <= threshold {
        ("few-arcs", scaling_term(k, mf, n as f64) / (1e8 * k as f64))
    } else {
        ("many-arcs", mf * mf / (4096.0 * g as f64))
    };
    let mut report = BoundReport::new("genus_crossing_lower_bound", value, applicable)
        .constant("threshold", threshold)
        .constant("c_k", 1.0 / (1e8 * k as f64))
        .constant("many_arcs_constant", 1.0 / 4096.0);
    report.branch = Some(branch.to_string());
    if m <= 16 * n {
        report = report.note("hypothesis m > 16n fails");
    }
    if (n as f64) <= 2f64.powi(17) * g as f64 {
        report = report.note("hypothesis n > 2^17 g fails");
    }
    report
}

/// The three pair-count lower bounds (pairs meeting at least once, at least
/// twice, at least k times) for `m` pairwise non-homotopic arcs.
pub fn turan_pair_lower_bounds(m: u64, euler_char: i64, k: u64) -> [BoundReport; 3] {
    let applicable = euler_char < 0;
    let chi = euler_char.unsigned_abs() as f64;
    let mf = m as f64;
    let half_sq = mf * mf / 2.0;
    let once = half_sq / (3.0 * chi) - mf / 2.0;
    let twice = half_sq / (2.0 * (chi + 1.0) * chi) - mf / 2.0;
    let kth_denominator = factorial(k + 2) * chi.powi(k as i32);
    let kth = half_sq / kth_denominator - mf / 2.0;
    let mut reports = [
        BoundReport::new("pairs_at_least_once", once, applicable),
        BoundReport::new("pairs_at_least_twice", twice, applicable),
        BoundReport::new("pairs_at_least_k", kth, applicable)
            .constant("k", k as f64)
            .constant("denominator", kth_denominator)
            .note("evaluated as stated for 'at least k'; the Turan argument only yields 'at least k-1'"),
    ];
    if !applicable {
        for r in reports.iter_mut() {
            r.notes
                .push("surface is not hyperbolic (euler_char >= 0)".to_string());
        }
    }
    reports
}

pub fn bisection_width_bound(crossings: f64, degree_square_sum: f64, vertex_count: f64) -> f64 {
    20.0 * (crossings + degree_square_sum + vertex_count).sqrt()
}

/// Bound on the number of arcs hit by a planarizing multicurve. Zero for
/// planar input.
pub fn planarize_arc_bound(g: u64, crossings: f64, degree_square_sum: f64, n: f64) -> f64 {
    if g == 0 {
        return 0.0;
    }
    let g = g as f64;
    20.0 * (g * (crossings + degree_square_sum + n + 2.0 * g)).sqrt()
}

/// Number of edges whose removal planarizes a graph of maximum degree `d`
/// and `m` edges on a genus `g` surface: `4 sqrt(2 d g m)`.
pub fn dv_edge_bound(max_degree: f64, g: f64, m: f64) -> f64 {
    4.0 * (2.0 * max_degree * g * m).sqrt()
}

/// Earlier crossing bounds for 1-systems without loops, for comparison.
/// The second bound uses the natural logarithm.
pub fn prior_bounds(m: u64, n: u64) -> [BoundReport; 2] {
    let mf = m as f64;
    let nf = n as f64;
    let cubic = mf.powi(3) / (1e7 * nf * nf) - 4.0 * nf;
    let log_form = mf.powi(3) / (1e25 * nf * nf * (mf / nf).ln()) - 8.0 * nf;
    let log_applicable = m > n && n >= 1;
    let mut second = BoundReport::new("prior_bound_log", log_form, log_applicable)
        .constant("c", 1e-25)
        .constant("log_base", std::f64::consts::E)
        .note("natural logarithm");
    if !log_applicable {
        second = second.note("requires m > n");
    }
    [
        BoundReport::new("prior_bound_cubic", cubic, n >= 1).constant("c", 1e-7),
        second,
    ]
}

/// Vertex-splitting degree `ceil(2m/n)` and crossing-density threshold `t`.
pub fn split_parameters(m: u64, n: u64, k: u64) -> (u64, f64) {
    let delta = (2 * m).div_ceil(n);
    let exponent = 1.0 + 1.0 / k as f64;
    let t = 1e-4 / (k as f64 + 2.0) * (m as f64).powf(exponent) / (n as f64).powf(exponent);
    (delta, t)
}

/// Intermediate crossing lower bound `e^2/(2^9 g) - 4 m^2/n - 2n - 2g` used
/// when passing from genus g to the sphere.
pub fn genus_proof_accounting(e: u64, g: u64, m: u64, n: u64) -> BoundReport {
    let (e, gf, m, nf) = (e as f64, g as f64, m as f64, n as f64);
    let value = e * e / (512.0 * gf) - 4.0 * m * m / nf - 2.0 * nf - 2.0 * gf;
    BoundReport::new("genus_proof_accounting", value, g >= 1 && n >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1e-300)
    }

    #[test]
    fn euler() {
        assert_eq!(euler_characteristic(0, 3), -1);
        assert_eq!(euler_characteristic(1, 1), -1);
        assert_eq!(euler_characteristic(0, 5), -3);
        assert_eq!(Surface::new(2, 3).euler_char(), -5);
    }

    #[test]
    fn przytycki_values() {
        assert_eq!(przytycki_max_arcs(1, -1).value, 4.0);
        assert_eq!(przytycki_max_arcs(1, -2).value, 12.0);
        assert_eq!(przytycki_max_arcs(2, -2).value, 192.0);
        let r = przytycki_max_arcs(1, 0);
        assert!(!r.applicable);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn sphere_bound_values() {
        assert!(close(
            sphere_crossing_lower_bound(1, 500, 100).value,
            0.0125
        ));
        let expected = 100f64.powf(2.5) / (2e6 * 10f64.powf(1.5));
        assert!(close(
            sphere_crossing_lower_bound(2, 100, 10).value,
            expected
        ));
        assert!((expected - 1.581e-3).abs() < 1e-6);
        assert!(!sphere_crossing_lower_bound(1, 20, 10).applicable);
        assert!(sphere_crossing_lower_bound(1, 500, 100).applicable);
    }

    #[test]
    fn genus_bound_branches() {
        assert!(close(genus_branch_threshold(1, 10, 1), 244140.625));
        let r = genus_crossing_lower_bound(1, 1000, 10, 1);
        assert_eq!(r.branch.as_deref(), Some("few-arcs"));
        assert!(close(r.value, 0.1));
        assert!(!r.applicable);
        let r = genus_crossing_lower_bound(1, 1_000_000, 10, 1);
        assert_eq!(r.branch.as_deref(), Some("many-arcs"));
        assert!(close(r.value, 1e12 / 4096.0));
    }

    #[test]
    fn genus_zero_delegates() {
        for (k, m, n) in [(1, 50, 3), (2, 500, 30), (3, 7, 1)] {
            let a = genus_crossing_lower_bound(k, m, n, 0);
            let b = sphere_crossing_lower_bound(k, m, n);
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.applicable, b.applicable);
        }
    }

    #[test]
    fn turan_values() {
        let [once, _, kth] = turan_pair_lower_bounds(100, -3, 1);
        assert!(close(once.value, 1e4 / 18.0 - 50.0));
        assert!((once.value - 505.56).abs() < 0.01);
        assert!(close(kth.value, 1e4 / 36.0 - 50.0));
        assert!((kth.value - 227.78).abs() < 0.01);
        let [a, b, c] = turan_pair_lower_bounds(0, -1, 2);
        assert_eq!((a.value, b.value, c.value), (0.0, 0.0, 0.0));
        assert!(!turan_pair_lower_bounds(10, 0, 1)[0].applicable);
    }

    #[test]
    fn sqrt_bounds() {
        assert!(close(
            bisection_width_bound(0.0, 16.0, 4.0),
            20.0 * 20f64.sqrt()
        ));
        assert_eq!(bisection_width_bound(0.0, 0.0, 0.0), 0.0);
        assert!(close(bisection_width_bound(100.0, 0.0, 0.0), 200.0));
        assert!(close(
            planarize_arc_bound(1, 1.0, 16.0, 1.0),
            20.0 * 20f64.sqrt()
        ));
        assert!(close(
            planarize_arc_bound(1, 0.0, 0.0, 0.0),
            20.0 * 2f64.sqrt()
        ));
        assert_eq!(planarize_arc_bound(0, 5.0, 5.0, 5.0), 0.0);
        assert!(close(dv_edge_bound(4.0, 1.0, 8.0), 32.0));
        assert_eq!(dv_edge_bound(3.0, 0.0, 9.0), 0.0);
        assert!(close(dv_edge_bound(2.0, 2.0, 4.0), 4.0 * 32f64.sqrt()));
    }

    #[test]
    fn prior_values() {
        let [cubic, log] = prior_bounds(10_000, 100);
        assert!(close(cubic.value, -390.0));
        assert!(log.applicable);
        assert!(!prior_bounds(50, 50)[1].applicable);
        let [cubic, log] = prior_bounds(0, 1);
        assert!(close(cubic.value, -4.0));
        assert!(!log.applicable);
    }

    #[test]
    fn split_values() {
        let (delta, t) = split_parameters(1000, 100, 1);
        assert_eq!(delta, 20);
        assert!(close(t, 1.0 / 300.0));
        assert_eq!(split_parameters(1, 1, 1).0, 2);
        let (delta, t) = split_parameters(100, 100, 2);
        assert_eq!(delta, 2);
        assert!(close(t, 2.5e-5));
    }

    #[test]
    fn accounting_values() {
        assert!(close(genus_proof_accounting(0, 1, 0, 1).value, -4.0));
        assert!(close(genus_proof_accounting(64, 1, 10, 100).value, -198.0));
        assert!(close(genus_proof_accounting(512, 2, 0, 1).value, 250.0));
    }
}
