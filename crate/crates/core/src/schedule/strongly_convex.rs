use super::{AnytimeParams, AnytimeStream, FiniteSchedule, ScheduleKind, PREFIX_CAP};
use crate::error::{domain, Error, Result};
use crate::scalar::varsigma;
use crate::Scalar;

/// Parameters of the periodic schedule for `mu`-strongly convex objectives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrongConvexParams<T> {
    pub kappa: T,
    pub mu: T,
    pub c0: T,
    /// Period length: smallest `tau >= 1` with `A_{tau+1} >= 4 C0 kappa`.
    pub tau: usize,
    /// Rate exponent, `1 / theta`.
    pub varsigma: T,
}

/// The anytime prefix of length `tau`, repeated forever.
#[derive(Clone, Debug)]
pub struct StronglyConvexSchedule<T> {
    params: StrongConvexParams<T>,
    period: FiniteSchedule<T>,
}

impl<T: Scalar> StronglyConvexSchedule<T> {
    pub fn params(&self) -> &StrongConvexParams<T> {
        &self.params
    }

    pub fn tau(&self) -> usize {
        self.params.tau
    }

    pub fn period(&self) -> &FiniteSchedule<T> {
        &self.period
    }

    /// `alpha_{i tau + j} = alpha_j(period)`, 1-based.
    pub fn value_at(&self, position: usize) -> T {
        self.period.values()[(position - 1) % self.params.tau]
    }

    /// Infinite stream of `(value, is_join)`; join flags follow the period.
    pub fn stream(&self) -> impl Iterator<Item = (T, bool)> + '_ {
        (0..).map(move |i| {
            let j = i % self.params.tau;
            (self.period.values()[j], self.period.is_join(j + 1))
        })
    }

    /// Bound `144 C0 kappa^varsigma` on `tau` that holds when `C0` is the
    /// anytime rate constant; reported, never asserted.
    pub fn tau_bound(&self) -> T {
        T::lit(144.0) * self.params.c0 * self.params.kappa.powf(self.params.varsigma)
    }

    /// First `n` values as a finite schedule.
    pub fn prefix(&self, n: usize) -> FiniteSchedule<T> {
        let values: Vec<T> = (1..=n).map(|p| self.value_at(p)).collect();
        let joins = (1..=n).filter(|&p| self.period.is_join((p - 1) % self.params.tau + 1)).collect();
        FiniteSchedule::from_parts_unchecked(values, self.period.kind().clone(), joins)
    }
}

pub fn strongly_convex_schedule<T: Scalar>(
    kappa: T,
    c0: T,
    params: AnytimeParams<T>,
) -> Result<StronglyConvexSchedule<T>> {
    if !(kappa.is_finite() && kappa >= T::one()) {
        return domain(format!("condition number must be >= 1, got {kappa}"));
    }
    if !(c0.is_finite() && c0 > T::zero()) {
        return domain(format!("C0 must be positive, got {c0}"));
    }
    let four = T::lit(4.0);
    let threshold = four * c0 * kappa;

    let mut values = Vec::new();
    let mut joins = Vec::new();
    let mut aggregate = T::zero();
    for step in AnytimeStream::new(params) {
        values.push(step.value);
        if step.is_join {
            joins.push(values.len());
        }
        aggregate += step.value;
        if aggregate >= threshold {
            break;
        }
        if values.len() >= PREFIX_CAP {
            return Err(Error::Resource {
                what: "strongly convex period",
                requested: values.len() as u64 + 1,
                cap: PREFIX_CAP as u64,
            });
        }
    }
    let tau = values.len();
    let period = FiniteSchedule::from_parts_unchecked(
        values,
        ScheduleKind::StronglyConvex {
            kappa: kappa.as_f64(),
            c0: c0.as_f64(),
            tau,
        },
        joins,
    );
    Ok(StronglyConvexSchedule {
        params: StrongConvexParams {
            kappa,
            mu: kappa.recip(),
            c0,
            tau,
            varsigma: varsigma(),
        },
        period,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{anytime_prefix, prefix_sums};
    use super::*;

    #[test]
    fn kappa_one_small_c0() {
        let s = strongly_convex_schedule(1.0f64, 0.01, AnytimeParams::default()).unwrap();
        assert_eq!(s.tau(), 1);
    }

    #[test]
    fn kappa_hundred_is_minimal() {
        let p = AnytimeParams::<f64>::default();
        let s = strongly_convex_schedule(100.0f64, 0.5, p).unwrap();
        let tau = s.tau();
        let sums = prefix_sums(&anytime_prefix(tau + 1, p).unwrap());
        assert!(sums.a(tau + 1) >= 200.0);
        assert!(sums.a(tau) < 200.0);
        // regression value from the first computation
        assert_eq!(tau, 71);
        assert!((tau as f64) <= s.tau_bound());
    }

    #[test]
    fn periodic_bit_exact() {
        let s = strongly_convex_schedule(10.0f64, 0.5, AnytimeParams::default()).unwrap();
        let tau = s.tau();
        let v: Vec<f64> = s.stream().take(5 * tau).map(|(v, _)| v).collect();
        for i in 0..5 * tau {
            assert_eq!(v[i].to_bits(), v[i % tau].to_bits());
            assert_eq!(v[i], s.value_at(i + 1));
        }
        assert_eq!(s.prefix(3 * tau).values(), &v[..3 * tau]);
    }

    #[test]
    fn domain_errors() {
        let p = AnytimeParams::<f64>::default();
        assert!(strongly_convex_schedule(0.5, 1.0, p).is_err());
        assert!(strongly_convex_schedule(10.0, 0.0, p).is_err());
        assert!(strongly_convex_schedule(10.0, -1.0, p).is_err());
    }

    #[test]
    fn varsigma_times_theta_is_one() {
        let s = strongly_convex_schedule(10.0f64, 0.5, AnytimeParams::default()).unwrap();
        assert!((s.params().varsigma * crate::scalar::theta::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(s.params().mu, 0.1);
    }
}
