use std::fmt;
use std::sync::Arc;

type Membership = Arc<dyn Fn(u64) -> bool + Send + Sync>;
type Certificate = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A density-zero set given by a membership test and a counting bound
/// `|A ∩ [1, N]| ≤ certificate(N)` with `certificate(N)/N → 0`.
#[derive(Clone)]
pub struct NullOracle {
    name: String,
    member: Membership,
    certificate: Certificate,
}

impl fmt::Debug for NullOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NullOracle")
            .field("name", &self.name)
            .finish()
    }
}

impl PartialEq for NullOracle {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl NullOracle {
    pub fn new(
        name: impl Into<String>,
        member: impl Fn(u64) -> bool + Send + Sync + 'static,
        certificate: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        NullOracle {
            name: name.into(),
            member: Arc::new(member),
            certificate: Arc::new(certificate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && (self.member)(n)
    }

    pub fn certificate(&self, n: u64) -> u64 {
        (self.certificate)(n)
    }

    /// `|A ∩ [1, n]|` by direct enumeration.
    pub fn count(&self, n: u64) -> u64 {
        (1..=n).filter(|&k| self.contains(k)).count() as u64
    }

    /// Whether the certificate bounds the actual count at `n`.
    pub fn certificate_holds(&self, n: u64) -> bool {
        self.count(n) <= self.certificate(n)
    }

    pub fn squares() -> Self {
        NullOracle::new("SQUARES", |n| isqrt(n).pow(2) == n, isqrt)
    }

    /// Certificate: `π(N) < 1.25506 N / ln N` for `N ≥ 17`.
    pub fn primes() -> Self {
        NullOracle::new("PRIMES", is_prime, |n| {
            if n < 17 {
                n.min(6)
            } else {
                (1.25506 * n as f64 / (n as f64).ln()).ceil() as u64
            }
        })
    }

    /// `{1, 2, 4, 8, …}`.
    pub fn powers_of_2() -> Self {
        NullOracle::new(
            "POW2",
            |n| n.is_power_of_two(),
            |n| {
                if n == 0 {
                    0
                } else {
                    64 - n.leading_zeros() as u64
                }
            },
        )
    }

    /// `{1, 2, 6, 24, …}`.
    pub fn factorials() -> Self {
        NullOracle::new(
            "FACTORIALS",
            |n| {
                let mut f = 1u64;
                let mut k = 1u64;
                while f < n {
                    k += 1;
                    f = match f.checked_mul(k) {
                        Some(v) => v,
                        None => return false,
                    };
                }
                f == n
            },
            |n| {
                let mut f = 1u64;
                let mut count = 0;
                let mut k = 1u64;
                while f <= n {
                    count += 1;
                    k += 1;
                    f = match f.checked_mul(k) {
                        Some(v) => v,
                        None => break,
                    };
                }
                count
            },
        )
    }

    /// `A ∩ B`, bounded by the smaller certificate.
    pub fn conjunction(a: &NullOracle, b: &NullOracle) -> Self {
        let (ma, mb) = (a.member.clone(), b.member.clone());
        let (ca, cb) = (a.certificate.clone(), b.certificate.clone());
        NullOracle::new(
            format!("({} & {})", a.name, b.name),
            move |n| ma(n) && mb(n),
            move |n| ca(n).min(cb(n)),
        )
    }

    /// A subset of the union of `sources` described by `member`.
    pub fn derived(
        name: impl Into<String>,
        member: impl Fn(u64) -> bool + Send + Sync + 'static,
        sources: &[NullOracle],
    ) -> Self {
        let certs: Vec<Certificate> = sources.iter().map(|o| o.certificate.clone()).collect();
        NullOracle::new(name, member, move |n| certs.iter().map(|c| c(n)).sum())
    }

    /// Same membership with a tighter certificate `min(c, bound)`.
    pub fn with_bound(&self, bound: &NullOracle) -> Self {
        let c = self.certificate.clone();
        let b = bound.certificate.clone();
        NullOracle {
            certificate: Arc::new(move |n| c(n).min(b(n))),
            ..self.clone()
        }
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
