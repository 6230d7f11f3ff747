use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{Bits, PureState, Register, RegisterLayout};

/// Tolerance for the probabilities summing to one.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Tolerance for μ(x,y|z) = μ(x|z)μ(y|z).
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// One support point of a distribution over (x, y, z).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub x: Bits,
    pub y: Bits,
    pub z: u64,
    pub p: f64,
}

/// Joint distribution of the inputs and an auxiliary label z.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    n: usize,
    support: Vec<Outcome>,
}

impl InputDistribution {
    /// Zero-probability points are dropped; duplicates are rejected.
    pub fn new(n: usize, support: Vec<Outcome>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        let mut total = 0.0;
        let mut kept = Vec::new();
        for o in support {
            if o.x.len() != n || o.y.len() != n {
                return Err(Error::Invalid(format!(
                    "outcome ({},{},{}) is not {n}-bit",
                    o.x, o.y, o.z
                )));
            }
            if o.p.is_nan() || o.p < 0.0 || !o.p.is_finite() {
                return Err(Error::Invalid(format!(
                    "probability {} is not a nonnegative number",
                    o.p
                )));
            }
            if seen.insert((o.x.clone(), o.y.clone(), o.z), ()).is_some() {
                return Err(Error::Invalid(format!(
                    "outcome ({},{},{}) listed twice",
                    o.x, o.y, o.z
                )));
            }
            total += o.p;
            if o.p > 0.0 {
                kept.push(o);
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Invalid(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(InputDistribution { n, support: kept })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[Outcome] {
        &self.support
    }

    /// Distinct z labels in increasing order.
    pub fn z_labels(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.support.iter().map(|o| o.z).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Qubits used to encode z: max(1, ⌈log₂ #labels⌉); a label is encoded by its rank.
    pub fn z_width(&self) -> usize {
        let k = self.z_labels().len();
        (usize::BITS - (k.max(2) - 1).leading_zeros()) as usize
    }

    /// (p(z), outcomes with z and their conditional probabilities).
    pub fn conditional(&self, z: u64) -> (f64, Vec<Outcome>) {
        let pz: f64 = self.support.iter().filter(|o| o.z == z).map(|o| o.p).sum();
        let v = self
            .support
            .iter()
            .filter(|o| o.z == z)
            .map(|o| Outcome {
                p: o.p / pz,
                ..o.clone()
            })
            .collect();
        (pz, v)
    }

    /// Text format: one `p(<x>,<y>,<z>) = <prob>` per line, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut support = Vec::new();
        let mut n = None;
        for (i, line) in text.lines().enumerate() {
            let no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || {
                Error::parse(
                    no,
                    format!("expected `p(<x>,<y>,<z>) = <prob>`, got `{line}`"),
                )
            };
            let (lhs, rhs) = line.split_once('=').ok_or_else(bad)?;
            let inner = lhs
                .trim()
                .strip_prefix("p(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(bad)?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let x: Bits = parts[0]
                .parse()
                .map_err(|e: Error| Error::parse(no, e.to_string()))?;
            let y: Bits = parts[1]
                .parse()
                .map_err(|e: Error| Error::parse(no, e.to_string()))?;
            let z: u64 = parts[2].parse().map_err(|_| bad())?;
            let p: f64 = rhs.trim().parse().map_err(|_| bad())?;
            if x.is_empty() || x.len() != y.len() || n.is_some_and(|n| n != x.len()) {
                return Err(Error::parse(no, "inconsistent input lengths"));
            }
            n = Some(x.len());
            support.push(Outcome { x, y, z, p });
        }
        let n = n.ok_or_else(|| Error::parse(1, "empty distribution"))?;
        InputDistribution::new(n, support)
            .map_err(|e| Error::parse(text.lines().count().max(1), e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for o in &self.support {
            writeln!(s, "p({},{},{}) = {}", o.x, o.y, o.z, o.p).unwrap();
        }
        s
    }

    /// Uniform over all (x, y), single z.
    pub fn uniform_product(n: usize) -> Self {
        let w = 1.0 / (1u64 << (2 * n)) as f64;
        let support = Bits::all(n)
            .flat_map(|x| Bits::all(n).map(move |y| (x.clone(), y)))
            .map(|(x, y)| Outcome { x, y, z: 0, p: w })
            .collect();
        InputDistribution::new(n, support).expect("uniform is normalised")
    }

    /// Uniform over intersecting pairs, single z. Not conditionally independent for n ≥ 1.
    pub fn uniform_intersecting(n: usize) -> Self {
        let pairs: Vec<(Bits, Bits)> = Bits::all(n)
            .flat_map(|x| Bits::all(n).map(move |y| (x.clone(), y)))
            .filter(|(x, y)| (x.value() & y.value()) != 0)
            .collect();
        let w = 1.0 / pairs.len() as f64;
        let support = pairs
            .into_iter()
            .map(|(x, y)| Outcome { x, y, z: 0, p: w })
            .collect();
        InputDistribution::new(n, support).expect("normalised")
    }

    /// Intersecting pairs with a planted common index: z = i uniform,
    /// x_i = y_i = 1, all other bits independent and uniform.
    pub fn planted_intersection(n: usize) -> Self {
        let mut support = Vec::new();
        let free = (n - 1) as u32;
        let w = 1.0 / (n as f64 * 4f64.powi(free as i32));
        for i in 0..n {
            for x in Bits::all(n).filter(|x| x.get(i)) {
                for y in Bits::all(n).filter(|y| y.get(i)) {
                    support.push(Outcome {
                        x: x.clone(),
                        y,
                        z: i as u64,
                        p: w,
                    });
                }
            }
        }
        InputDistribution::new(n, support).expect("normalised")
    }

    /// Mixture of two product distributions selected by z ∈ {0, 1}:
    /// z = 0: x bits Bernoulli(1/4), y uniform; z = 1: x uniform, y bits Bernoulli(3/4).
    pub fn z_mixture(n: usize) -> Self {
        let bern = |b: &Bits, q: f64| -> f64 {
            (0..b.len())
                .map(|i| if b.get(i) { q } else { 1.0 - q })
                .product()
        };
        let mut support = Vec::new();
        for z in 0..2u64 {
            for x in Bits::all(n) {
                for y in Bits::all(n) {
                    let p = if z == 0 {
                        bern(&x, 0.25) * bern(&y, 0.5)
                    } else {
                        bern(&x, 0.5) * bern(&y, 0.75)
                    };
                    support.push(Outcome {
                        x: x.clone(),
                        y,
                        z,
                        p: 0.5 * p,
                    });
                }
            }
        }
        InputDistribution::new(n, support).expect("normalised")
    }

    /// Point mass.
    pub fn point(x: Bits, y: Bits, z: u64) -> Self {
        let n = x.len();
        InputDistribution::new(n, vec![Outcome { x, y, z, p: 1.0 }]).expect("valid")
    }
}

/// True iff μ(x,y|z) = μ(x|z)·μ(y|z) for every z, within 1e-10.
pub fn verify_conditional_independence(mu: &InputDistribution) -> bool {
    mu.z_labels().into_iter().all(|z| {
        let (_, cond) = mu.conditional(z);
        let mut px: BTreeMap<&Bits, f64> = BTreeMap::new();
        let mut py: BTreeMap<&Bits, f64> = BTreeMap::new();
        let mut pxy: BTreeMap<(&Bits, &Bits), f64> = BTreeMap::new();
        for o in &cond {
            *px.entry(&o.x).or_default() += o.p;
            *py.entry(&o.y).or_default() += o.p;
            *pxy.entry((&o.x, &o.y)).or_default() += o.p;
        }
        px.iter().all(|(x, a)| {
            py.iter().all(|(y, b)| {
                let joint = pxy.get(&(*x, *y)).copied().unwrap_or(0.0);
                (joint - a * b).abs() <= INDEPENDENCE_TOL
            })
        })
    })
}

/// Registers of the purified input, in order.
pub const PURIFIED_REGISTERS: [&str; 6] = ["Xh", "Yh", "Zh", "X", "Y", "Z"];

/// Σ √μ(x,y,z) |x y z⟩_{Xh Yh Zh} |x y z⟩_{X Y Z}.
pub fn canonical_purification(mu: &InputDistribution) -> Result<PureState> {
    let n = mu.n();
    let zw = mu.z_width();
    let widths = [n, n, zw, n, n, zw];
    let layout = RegisterLayout::new(
        PURIFIED_REGISTERS
            .iter()
            .zip(widths)
            .map(|(r, w)| Register::new(*r, w))
            .collect(),
    )?;
    let labels = mu.z_labels();
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.dimension()];
    for o in mu.support() {
        let rank = labels.binary_search(&o.z).expect("label present") as u64;
        let block = (((o.x.value() << n) | o.y.value()) << zw) | rank;
        let idx = (block << (2 * n + zw)) | block;
        amps[idx as usize] = Complex64::new(o.p.sqrt(), 0.0);
    }
    PureState::from_amplitudes(layout, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn independence_examples() {
        assert!(verify_conditional_independence(
            &InputDistribution::uniform_product(2)
        ));
        let corr = InputDistribution::new(
            1,
            vec![
                Outcome {
                    x: b("0"),
                    y: b("0"),
                    z: 0,
                    p: 0.5,
                },
                Outcome {
                    x: b("1"),
                    y: b("1"),
                    z: 0,
                    p: 0.5,
                },
            ],
        )
        .unwrap();
        assert!(!verify_conditional_independence(&corr));
        let xyz = InputDistribution::new(
            1,
            vec![
                Outcome {
                    x: b("0"),
                    y: b("0"),
                    z: 0,
                    p: 0.5,
                },
                Outcome {
                    x: b("1"),
                    y: b("1"),
                    z: 1,
                    p: 0.5,
                },
            ],
        )
        .unwrap();
        assert!(verify_conditional_independence(&xyz));
        assert!(!verify_conditional_independence(
            &InputDistribution::uniform_intersecting(2)
        ));
        assert!(verify_conditional_independence(
            &InputDistribution::planted_intersection(2)
        ));
        assert!(verify_conditional_independence(
            &InputDistribution::z_mixture(2)
        ));
    }

    #[test]
    fn families_are_normalised() {
        for n in 1..=3 {
            for mu in [
                InputDistribution::uniform_product(n),
                InputDistribution::uniform_intersecting(n),
                InputDistribution::planted_intersection(n),
                InputDistribution::z_mixture(n),
            ] {
                let s: f64 = mu.support().iter().map(|o| o.p).sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
        assert!(InputDistribution::planted_intersection(3)
            .support()
            .iter()
            .all(|o| o.x.value() & o.y.value() != 0));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let mu = InputDistribution::z_mixture(2);
        assert_eq!(InputDistribution::parse(&mu.to_text()).unwrap(), mu);
        assert!(InputDistribution::parse("p(0,1,0) = 0.5\n").is_err());
        assert!(matches!(
            InputDistribution::parse("p(0,1,0) = 1\nq(0,0,0)=0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(InputDistribution::parse("p(0,1,0) = 0.5\np(0,1,0) = 0.5\n").is_err());
    }

    #[test]
    fn purification_examples() {
        let point = canonical_purification(&InputDistribution::point(b("10"), b("01"), 0)).unwrap();
        assert_eq!(
            point.amplitudes().iter().filter(|a| a.norm() > 0.0).count(),
            1
        );
        // uniform x, fixed y and z: X̂X is a Bell pair
        let mu = InputDistribution::new(
            1,
            vec![
                Outcome {
                    x: b("0"),
                    y: b("1"),
                    z: 0,
                    p: 0.5,
                },
                Outcome {
                    x: b("1"),
                    y: b("1"),
                    z: 0,
                    p: 0.5,
                },
            ],
        )
        .unwrap();
        let s = canonical_purification(&mu).unwrap();
        assert!((s.mutual_information(&["Xh"], &["X"]).unwrap() - 2.0).abs() < 1e-9);
        assert!(s.entropy(&["Y", "Yh", "Z", "Zh"]).unwrap().abs() < 1e-9);
        // XY marginal is diagonal with entries μ(x,y)
        let mu = InputDistribution::z_mixture(1);
        let s = canonical_purification(&mu).unwrap();
        let rho = s.reduced_density(&["X", "Y"]).unwrap();
        for x in 0..2u64 {
            for y in 0..2u64 {
                let want: f64 = mu
                    .support()
                    .iter()
                    .filter(|o| o.x.value() == x && o.y.value() == y)
                    .map(|o| o.p)
                    .sum();
                let i = (x * 2 + y) as usize;
                assert!((rho.matrix()[(i, i)].re - want).abs() < 1e-12);
                for j in 0..4 {
                    if j != i {
                        assert!(rho.matrix()[(i, j)].norm() < 1e-12);
                    }
                }
            }
        }
        assert_eq!(mu.z_width(), 1);
        assert_eq!(InputDistribution::planted_intersection(3).z_width(), 2);
    }
}
