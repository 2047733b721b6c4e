//! Theorem checkers: every explicit inequality is evaluated as an enclosure
//! comparison with three-valued verdicts, escalating the working precision
//! (doubling, capped) whenever the enclosures overlap. Exact integers come
//! from the oracles; nothing floating enters a verdict.

pub mod report;

use crate::ball::{constants, format, functions, Enclosure, Trilean, PREC_CAP};
use crate::error::{Error, Result};
use crate::series::oracles::ExactTables;
use crate::series::{spt_series, Mode};
use crate::special::{lambda, lambda_f64};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

/// One verified inequality: exact value(s), main term, error term, bound,
/// and the margin ratio |error|/bound.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub theorem: String,
    pub n: u64,
    pub exact: String,
    pub main: Enclosure,
    pub error: Enclosure,
    pub bound: Enclosure,
    pub margin_ratio: Enclosure,
    pub pass: Trilean,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.pass == Trilean::True
    }
}

fn start_prec(n: u64) -> u32 {
    let lam = lambda_f64(n);
    ((0.8 * 1.4427 * lam) as u32 + 96).min(PREC_CAP)
}

/// Evaluate `build` at doubling precision until the verdict is determinate;
/// at the cap the Unknown report is returned as-is.
fn resolve_report(n: u64, build: impl Fn(u32) -> Result<BoundReport>) -> Result<BoundReport> {
    let mut prec = start_prec(n);
    loop {
        let rep = build(prec)?;
        if rep.pass != Trilean::Unknown || prec >= PREC_CAP {
            return Ok(rep);
        }
        prec = (prec * 2).min(PREC_CAP);
    }
}

fn make_report(
    theorem: &str,
    n: u64,
    exact: String,
    main: Enclosure,
    error: Enclosure,
    bound: Enclosure,
    prec: u32,
) -> BoundReport {
    let abs_err = error.abs_enclosure(prec);
    let pass = abs_err.lt(&bound);
    let margin_ratio = abs_err
        .div(&bound, prec)
        .unwrap_or_else(|_| Enclosure::from_i64(1));
    BoundReport { theorem: theorem.into(), n, exact, main, error, bound, margin_ratio, pass }
}

/// sqrt(3)/(pi sqrt(24n-1)) e^lam.
fn spt_main_term(n: u64, prec: u32) -> Result<Enclosure> {
    let lam = lambda(&BigInt::from(n), prec)?;
    let e = functions::exp(&lam, prec);
    let s3 = Enclosure::from_i64(3).sqrt(prec)?;
    let denom = constants::pi(prec).mul(&Enclosure::from_bigint(&(BigInt::from(n) * 24 - 1)).sqrt(prec)?, prec);
    Ok(s3.div(&denom, prec)?.mul(&e, prec))
}

/// spt(n) = sqrt3/(pi sqrt(24n-1)) e^lam + E_s(n), |E_s| < 4.1 e^{lam/2}.
pub fn check_thm12(n: u64, exact_spt: &BigUint) -> Result<BoundReport> {
    resolve_report(n, |prec| {
        let main = spt_main_term(n, prec)?;
        let error = Enclosure::from_bigint(&BigInt::from(exact_spt.clone())).sub(&main, prec);
        let lam = lambda(&BigInt::from(n), prec)?;
        let bound = constants::rational_ball(&BigRational::new(BigInt::from(41), BigInt::from(10)), prec)
            .mul(&functions::exp(&lam.shl(-1), prec), prec);
        Ok(make_report("thm12", n, exact_spt.to_string(), main, error, bound, prec))
    })
}

/// Two-term refinement: spt(n) = main + (-1)^n sqrt6/(pi sqrt(24n-1)) e^{lam/2}
/// + E, |E| < 8 e^{lam/3}.
pub fn check_thm13(n: u64, exact_spt: &BigUint) -> Result<BoundReport> {
    resolve_report(n, |prec| {
        let lam = lambda(&BigInt::from(n), prec)?;
        let first = spt_main_term(n, prec)?;
        let s6 = Enclosure::from_i64(6).sqrt(prec)?;
        let denom = constants::pi(prec)
            .mul(&Enclosure::from_bigint(&(BigInt::from(n) * 24 - 1)).sqrt(prec)?, prec);
        let mut second = s6.div(&denom, prec)?.mul(&functions::exp(&lam.shl(-1), prec), prec);
        if n % 2 == 1 {
            second = second.neg();
        }
        let main = first.add(&second, prec);
        let error = Enclosure::from_bigint(&BigInt::from(exact_spt.clone())).sub(&main, prec);
        // bound 8 e^{lam/3}
        let third = lam.div_bigint(&BigInt::from(3), prec);
        let bound = functions::exp(&third, prec).mul_bigint(&BigInt::from(8), prec);
        Ok(make_report("thm13", n, exact_spt.to_string(), main, error, bound, prec))
    })
}

/// S(n) = 2 sqrt3 e^lam + E_S(n), |E_S| < 44.11 e^{lam/2}.
pub fn check_thm15(n: u64, exact_s: &BigInt) -> Result<BoundReport> {
    resolve_report(n, |prec| {
        let lam = lambda(&BigInt::from(n), prec)?;
        let main = Enclosure::from_i64(3).sqrt(prec)?.shl(1).mul(&functions::exp(&lam, prec), prec);
        let error = Enclosure::from_bigint(exact_s).sub(&main, prec);
        let bound = constants::rational_ball(&BigRational::new(BigInt::from(4411), BigInt::from(100)), prec)
            .mul(&functions::exp(&lam.shl(-1), prec), prec);
        Ok(make_report("thm15", n, exact_s.to_string(), main, error, bound, prec))
    })
}

/// spt(n) = sqrt(24n-1)/(2 pi) p(n) + 6 sqrt3/(pi^2 (24n-1)) e^lam + E(n),
/// |E| < 4.11 e^{lam/2}.
pub fn check_cor14(n: u64, exact_spt: &BigUint, exact_p: &BigUint) -> Result<BoundReport> {
    resolve_report(n, |prec| {
        let lam = lambda(&BigInt::from(n), prec)?;
        let m24 = BigInt::from(n) * 24 - 1;
        let t1 = Enclosure::from_bigint(&m24)
            .sqrt(prec)?
            .div(&constants::pi(prec).shl(1), prec)?
            .mul_bigint(&BigInt::from(exact_p.clone()), prec);
        let pi2 = constants::pi(prec).mul(&constants::pi(prec), prec);
        let t2 = Enclosure::from_i64(3)
            .sqrt(prec)?
            .mul_bigint(&BigInt::from(6), prec)
            .div(&pi2.mul_bigint(&m24, prec), prec)?
            .mul(&functions::exp(&lam, prec), prec);
        let main = t1.add(&t2, prec);
        let error = Enclosure::from_bigint(&BigInt::from(exact_spt.clone())).sub(&main, prec);
        let bound = constants::rational_ball(&BigRational::new(BigInt::from(411), BigInt::from(100)), prec)
            .mul(&functions::exp(&lam.shl(-1), prec), prec);
        Ok(make_report(
            "cor14",
            n,
            format!("spt={exact_spt}, p={exact_p}"),
            main,
            error,
            bound,
            prec,
        ))
    })
}

/// p(n) = 2 sqrt3/(24n-1) (1 - 1/lam) e^lam + E_p(n),
/// |E_p| <= 5 e^{lam/2}/(24n-1).
pub fn check_lemma_p(n: u64, exact_p: &BigUint) -> Result<BoundReport> {
    resolve_report(n, |prec| {
        let lam = lambda(&BigInt::from(n), prec)?;
        let m24 = BigInt::from(n) * 24 - 1;
        let one_minus = Enclosure::one().sub(&Enclosure::one().div(&lam, prec)?, prec);
        let main = Enclosure::from_i64(3)
            .sqrt(prec)?
            .shl(1)
            .div_bigint(&m24, prec)
            .mul(&one_minus, prec)
            .mul(&functions::exp(&lam, prec), prec);
        let error = Enclosure::from_bigint(&BigInt::from(exact_p.clone())).sub(&main, prec);
        let bound = functions::exp(&lam.shl(-1), prec)
            .mul_bigint(&BigInt::from(5), prec)
            .div_bigint(&m24, prec);
        Ok(make_report("lemma-p", n, exact_p.to_string(), main, error, bound, prec))
    })
}

/// Per-side verdicts for sqrt6/pi sqrt(n) p(n) < spt(n) < sqrt(n) p(n).
#[derive(Debug, Clone)]
pub struct ChanMaoReport {
    pub n: u64,
    pub left: Trilean,
    pub right: Trilean,
    pub boundary: bool,
}

pub fn check_chan_mao(n: u64, exact_spt: &BigUint, exact_p: &BigUint) -> Result<ChanMaoReport> {
    let mut prec = 96u32.max(start_prec(n));
    loop {
        let sqrt_n = Enclosure::from_i64(n as i64).sqrt(prec)?;
        let p_ball = Enclosure::from_bigint(&BigInt::from(exact_p.clone()));
        let spt_ball = Enclosure::from_bigint(&BigInt::from(exact_spt.clone()));
        let rhs = sqrt_n.mul(&p_ball, prec);
        let lhs = Enclosure::from_i64(6)
            .sqrt(prec)?
            .div(&constants::pi(prec), prec)?
            .mul(&rhs, prec);
        let left = lhs.lt(&spt_ball);
        let right = spt_ball.lt(&rhs);
        let unknown = left == Trilean::Unknown || right == Trilean::Unknown;
        if !unknown || prec >= PREC_CAP {
            // Perfect squares can sit exactly on the right boundary; flag
            // rows where the right side is not strictly satisfied.
            let boundary = right != Trilean::True;
            return Ok(ChanMaoReport { n, left, right, boundary });
        }
        prec = (prec * 2).min(PREC_CAP);
    }
}

/// The prior error bound (3.59e22) 2^{q(n)} (24n-1)^2 e^{lam/2} against the
/// new 4.1 e^{lam/2}.
#[derive(Debug, Clone)]
pub struct OldNewComparison {
    pub n: u64,
    pub old_bound: Enclosure,
    pub new_bound: Enclosure,
    pub ratio: Enclosure,
}

pub fn compare_old_new(n: u64, prec: u32) -> Result<OldNewComparison> {
    let m24 = BigInt::from(n) * 24 - 1;
    let log_m = functions::ln(&Enclosure::from_bigint(&m24), prec)?;
    let loglog = functions::ln(&log_m, prec)?;
    let shift = loglog.sub(
        &constants::rational_ball(&BigRational::new(BigInt::from(11714), BigInt::from(10000)), prec),
        prec,
    );
    if shift.contains_zero() {
        return Err(Error::Domain(format!(
            "n = {n} sits at the excluded point log(log(24n-1)) = 1.1714"
        )));
    }
    let q = log_m.div(&shift.abs_enclosure(prec), prec)?;
    // 2^q = exp(q ln 2)
    let two_q = functions::exp(&q.mul(&constants::ln2(prec), prec), prec);
    let lam = lambda(&BigInt::from(n), prec)?;
    let e_half = functions::exp(&lam.shl(-1), prec);
    let c_old = Enclosure::from_bigint(&(BigInt::from(359) * BigInt::from(10u64).pow(20)));
    let old_bound = c_old
        .mul(&two_q, prec)
        .mul_bigint(&(&m24 * &m24), prec)
        .mul(&e_half, prec);
    let new_bound = constants::rational_ball(&BigRational::new(BigInt::from(41), BigInt::from(10)), prec)
        .mul(&e_half, prec);
    let ratio = old_bound.div(&new_bound, prec)?;
    Ok(OldNewComparison { n, old_bound, new_bound, ratio })
}

/// One row of the published comparison table: n, spt(n), |E_s(n)|, and
/// 4.1 e^{lam/2}, each rendered to two significant figures.
#[derive(Debug, Clone)]
pub struct Fig1Row {
    pub n: u64,
    pub spt_sci: (u32, i64),
    pub err_sci: (u32, i64),
    pub bound_sci: (u32, i64),
}

impl Fig1Row {
    pub fn spt_string(&self) -> String {
        format::format_two_sig_figs(self.spt_sci.0, self.spt_sci.1)
    }
    pub fn err_string(&self) -> String {
        format::format_two_sig_figs(self.err_sci.0, self.err_sci.1)
    }
    pub fn bound_string(&self) -> String {
        format::format_two_sig_figs(self.bound_sci.0, self.bound_sci.1)
    }
}

/// How figure rows obtain exact spt values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigMode {
    /// Generating-function oracle (n within the table range).
    Oracle,
    /// Oracle-validated series evaluation with certified rounding.
    Series,
}

pub fn figure1_row(n: u64, tables: Option<&ExactTables>, mode: FigMode) -> Result<Fig1Row> {
    let spt: BigUint = match mode {
        FigMode::Oracle => match tables {
            Some(t) if n <= t.n_max() => t.spt[n as usize].clone(),
            _ => {
                return Err(Error::ResourceLimit(format!(
                    "no oracle table covering n = {n}; rerun with the series mode"
                )))
            }
        },
        FigMode::Series => {
            let cert = spt_series(n, None, Mode::Heuristic, None)?;
            match cert.rounded {
                Some(v) => v.to_biguint().expect("spt positive"),
                None => {
                    return Err(Error::ResourceLimit(format!(
                        "series evaluation for n = {n} did not round; raise the cutoff"
                    )))
                }
            }
        }
    };
    let mut prec = start_prec(n);
    loop {
        let main = spt_main_term(n, prec)?;
        let err = Enclosure::from_bigint(&BigInt::from(spt.clone()))
            .sub(&main, prec)
            .abs_enclosure(prec);
        let lam = lambda(&BigInt::from(n), prec)?;
        let bound = constants::rational_ball(&BigRational::new(BigInt::from(41), BigInt::from(10)), prec)
            .mul(&functions::exp(&lam.shl(-1), prec), prec);
        let spt_ball = Enclosure::from_bigint(&BigInt::from(spt.clone()));
        let renders = (
            format::two_sig_figs(&spt_ball),
            format::two_sig_figs(&err),
            format::two_sig_figs(&bound),
        );
        if let (Some(s), Some(e), Some(b)) = renders {
            return Ok(Fig1Row { n, spt_sci: s, err_sci: e, bound_sci: b });
        }
        if prec >= PREC_CAP {
            return Err(Error::UnknownAtCap(prec));
        }
        prec = (prec * 2).min(PREC_CAP);
    }
}

pub fn figure1_table(rows: &[u64], tables: Option<&ExactTables>, mode: FigMode) -> Result<Vec<Fig1Row>> {
    rows.iter().map(|&n| figure1_row(n, tables, mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> ExactTables {
        ExactTables::build(64)
    }

    #[test]
    fn thm12_small_n() {
        let t = tables();
        for n in [1u64, 4, 10, 40] {
            let r = check_thm12(n, &t.spt[n as usize]).unwrap();
            assert!(r.passed(), "thm12 fails at n={n}: margin {}", r.margin_ratio);
        }
    }

    #[test]
    fn thm13_parity_of_second_term() {
        let t = tables();
        // The reports must pass for consecutive n (sign flip exercised).
        for n in [2u64, 3, 8, 9] {
            let r = check_thm13(n, &t.spt[n as usize]).unwrap();
            assert!(r.passed(), "thm13 fails at n={n}");
        }
    }

    #[test]
    fn thm15_and_cor14_small_n() {
        let t = tables();
        for n in [1u64, 4, 16, 50] {
            let tr = t.triple(n);
            assert!(check_thm15(n, &tr.s).unwrap().passed(), "thm15 at {n}");
            assert!(check_cor14(n, &tr.spt, &tr.p).unwrap().passed(), "cor14 at {n}");
        }
    }

    #[test]
    fn lemma_p_small_n() {
        let t = tables();
        for n in [1u64, 2, 10, 60] {
            let r = check_lemma_p(n, &t.p[n as usize]).unwrap();
            assert!(r.passed(), "lemma-p fails at n={n}");
        }
    }

    #[test]
    fn chan_mao_boundaries() {
        let t = tables();
        // n=1: right side reads 1 < 1 and fails as stated.
        let r1 = check_chan_mao(1, &t.spt[1], &t.p[1]).unwrap();
        assert_eq!(r1.left, Trilean::True);
        assert_eq!(r1.right, Trilean::False);
        assert!(r1.boundary);
        // n=4: spt(4)=10 vs sqrt4 p(4) = 10: boundary again.
        let r4 = check_chan_mao(4, &t.spt[4], &t.p[4]).unwrap();
        assert_eq!(r4.left, Trilean::True);
        assert_eq!(r4.right, Trilean::False);
        // generic row passes strictly on both sides
        let r10 = check_chan_mao(10, &t.spt[10], &t.p[10]).unwrap();
        assert_eq!(r10.left, Trilean::True);
        assert_eq!(r10.right, Trilean::True);
        assert!(!r10.boundary);
    }

    #[test]
    fn old_vs_new_bound_ratio_is_astronomical() {
        for n in [1u64, 10, 1000] {
            let c = compare_old_new(n, 160).unwrap();
            // ratio > 3.59e22/4.1 > 8.7e21 for every n
            let floor = Enclosure::from_bigint(&(BigInt::from(87) * BigInt::from(10u64).pow(20)));
            assert_eq!(floor.lt(&c.ratio), Trilean::True, "ratio too small at n={n}");
        }
    }

    #[test]
    fn fig1_row_small_sanity() {
        let t = tables();
        let row = figure1_row(60, Some(&t), FigMode::Oracle).unwrap();
        // the spt column must render exactly like the brute-force value
        let brute = crate::series::oracles::spt_bruteforce(60).unwrap();
        let expect = format::two_sig_figs(&Enclosure::from_bigint(&BigInt::from(brute))).unwrap();
        assert_eq!(row.spt_sci, expect);
        // |E_s| < bound, visible already at two significant figures
        assert!(
            (row.err_sci.1, row.err_sci.0) < (row.bound_sci.1, row.bound_sci.0),
            "error column {} not below bound column {}",
            row.err_string(),
            row.bound_string()
        );
    }

    #[test]
    fn fig1_requires_oracle_coverage() {
        let t = tables();
        assert!(matches!(
            figure1_row(100, Some(&t), FigMode::Oracle),
            Err(Error::ResourceLimit(_))
        ));
    }
}
