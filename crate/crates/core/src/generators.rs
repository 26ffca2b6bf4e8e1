//! Seeded random instance generators, one per structural family.
//!
//! All sampled times are integer multiples of 1/1000 of the horizon and
//! all works integer multiples of 1/1000 of the work span, so generated
//! instances have small exact denominators. Generation is a pure
//! function of the spec: the same [`GenSpec`] always yields the same
//! instance. Instances reproduce across implementations via their
//! serialized form, not the seed; the generator name is recorded in the
//! file metadata for that reason.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{classify, Instance, Job};
use crate::oracle::gap_instance;
use crate::rational::{int, Rational};

/// Name of the pseudo-random generator backing [`generate`], recorded in
/// instance-file metadata.
pub const GENERATOR_NAME: &str = "chacha8";

const GRID: i64 = 1000;
const ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    CommonRelease,
    CommonDeadline,
    Clique,
    Agreeable,
    PureLaminar,
    Gap,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::CommonRelease,
        Family::CommonDeadline,
        Family::Clique,
        Family::Agreeable,
        Family::PureLaminar,
        Family::Gap,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::CommonRelease => "common-release",
            Family::CommonDeadline => "common-deadline",
            Family::Clique => "clique",
            Family::Agreeable => "agreeable",
            Family::PureLaminar => "pure-laminar",
            Family::Gap => "gap",
        };
        f.write_str(name)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "common-release" => Ok(Family::CommonRelease),
            "common-deadline" => Ok(Family::CommonDeadline),
            "clique" => Ok(Family::Clique),
            "agreeable" => Ok(Family::Agreeable),
            "pure-laminar" => Ok(Family::PureLaminar),
            "gap" => Ok(Family::Gap),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

/// Everything that determines a generated instance.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
    pub work_range: (Rational, Rational),
    pub horizon: Rational,
    /// Size of the gap family (Gap only); defaults to `n`.
    pub gap_n: Option<usize>,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, m: usize, alpha: f64, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            m,
            alpha,
            seed,
            work_range: (int(1), int(10)),
            horizon: int(10),
            gap_n: None,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.n < 1 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.m < 1 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        if !self.work_range.0.is_positive() || self.work_range.1 < self.work_range.0 {
            return Err(Error::InvalidArgument(
                "work range must be positive and ordered".into(),
            ));
        }
        if !self.horizon.is_positive() {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(())
    }
}

/// Generate an instance of the requested family. The result is
/// post-checked against [`classify`]; deterministic in the spec.
pub fn generate(spec: &GenSpec) -> Result<Instance, Error> {
    spec.validate()?;
    if spec.family == Family::Gap {
        return gap_instance(spec.gap_n.unwrap_or(spec.n), spec.alpha);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..ATTEMPTS {
        let Some(windows) = sample_windows(spec, &mut rng) else {
            continue;
        };
        let jobs: Vec<Job> = windows
            .into_iter()
            .enumerate()
            .map(|(k, (release, deadline))| Job {
                id: format!("j{k:04}"),
                work: sample_work(spec, &mut rng),
                release,
                deadline,
            })
            .collect();
        let instance = Instance::new(jobs, spec.m, spec.alpha)?;
        let flags = classify(&instance);
        let sound = match spec.family {
            Family::CommonRelease => flags.common_release,
            Family::CommonDeadline => flags.common_deadline,
            Family::Clique => flags.clique,
            Family::Agreeable => flags.agreeable,
            Family::PureLaminar => flags.pure_laminar && flags.laminar && flags.clique,
            Family::Gap => unreachable!(),
        };
        if sound {
            return Ok(instance);
        }
    }
    Err(Error::GenerationFailure(format!(
        "could not satisfy family {} after {ATTEMPTS} attempts",
        spec.family
    )))
}

fn tick(spec: &GenSpec, k: i64) -> Rational {
    &spec.horizon * Rational::new(BigInt::from(k), BigInt::from(GRID))
}

fn sample_work(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Rational {
    let k = rng.random_range(0..=GRID);
    let span = &spec.work_range.1 - &spec.work_range.0;
    &spec.work_range.0 + span * Rational::new(BigInt::from(k), BigInt::from(GRID))
}

fn sample_windows(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Option<Vec<(Rational, Rational)>> {
    let n = spec.n;
    match spec.family {
        Family::CommonRelease => Some(
            (0..n)
                .map(|_| (tick(spec, 0), tick(spec, rng.random_range(1..=GRID))))
                .collect(),
        ),
        Family::CommonDeadline => Some(
            (0..n)
                .map(|_| (tick(spec, rng.random_range(0..GRID)), tick(spec, GRID)))
                .collect(),
        ),
        Family::Clique => {
            let shared = rng.random_range(1..GRID);
            Some(
                (0..n)
                    .map(|_| {
                        let r = rng.random_range(0..=shared);
                        let mut d = rng.random_range(shared..=GRID);
                        if d <= r {
                            d = r + 1;
                        }
                        (tick(spec, r), tick(spec, d))
                    })
                    .collect(),
            )
        }
        Family::Agreeable => {
            // Rank-match independently sampled releases and deadlines.
            // Zero-length windows get their deadline resampled above the
            // paired release; each fix strictly grows the deadline
            // multiset, so this settles quickly.
            let mut releases: Vec<i64> = (0..n).map(|_| rng.random_range(0..GRID)).collect();
            let mut deadlines: Vec<i64> = (0..n).map(|_| rng.random_range(1..=GRID)).collect();
            releases.sort_unstable();
            deadlines.sort_unstable();
            for _ in 0..64 {
                let mut degenerate = false;
                for i in 0..n {
                    if releases[i] >= deadlines[i] {
                        deadlines[i] = rng.random_range(releases[i] + 1..=GRID);
                        degenerate = true;
                    }
                }
                if !degenerate {
                    return Some(
                        releases
                            .into_iter()
                            .zip(deadlines)
                            .map(|(r, d)| (tick(spec, r), tick(spec, d)))
                            .collect(),
                    );
                }
                deadlines.sort_unstable();
            }
            None
        }
        Family::PureLaminar => {
            // A nested chain: ascending releases paired with descending
            // deadlines from one sorted draw of 2n grid points.
            let mut points: Vec<i64> = (0..2 * n).map(|_| rng.random_range(0..=GRID)).collect();
            points.sort_unstable();
            if points[n - 1] == points[n] {
                return None;
            }
            Some(
                (0..n)
                    .map(|i| (tick(spec, points[i]), tick(spec, points[2 * n - 1 - i])))
                    .collect(),
            )
        }
        Family::Gap => unreachable!(),
    }
}
