//! Numeric validators for the explicit analytic inequalities: each sampler
//! sweeps a grid, computes the margin bound - value as an enclosure at every
//! point, and reports the worst one. A report passes only when the worst
//! margin is strictly positive as an interval statement.

use super::bessel::{bessel_i, HalfOrder};
use super::k0::k0_quadrature;
use crate::ball::{constants, functions, Enclosure, Trilean};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;

/// Outcome of one inequality sweep.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub lemma: String,
    pub grid: String,
    pub points: usize,
    pub worst_margin: Enclosure,
    pub pass: Trilean,
}

impl InequalityReport {
    fn from_margins(lemma: &str, grid: String, margins: Vec<Enclosure>) -> Self {
        let points = margins.len();
        let mut worst: Option<Enclosure> = None;
        for m in margins {
            worst = Some(match worst {
                None => m,
                Some(w) => {
                    if m.lower().cmp_value(&w.lower()) == Ordering::Less {
                        m
                    } else {
                        w
                    }
                }
            });
        }
        let worst_margin = worst.unwrap_or_else(Enclosure::zero);
        let pass = if worst_margin.lower().is_positive() {
            Trilean::True
        } else if !worst_margin.upper().is_positive() {
            Trilean::False
        } else {
            Trilean::Unknown
        };
        InequalityReport { lemma: lemma.to_string(), grid, points, worst_margin, pass }
    }

    pub fn passed(&self) -> bool {
        self.pass == Trilean::True
    }
}

impl std::fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} over {} ({} points), worst margin {}",
            self.lemma,
            match self.pass {
                Trilean::True => "PASS",
                Trilean::False => "FAIL",
                Trilean::Unknown => "UNKNOWN",
            },
            self.grid,
            self.points,
            self.worst_margin.display_string(6)
        )
    }
}

/// |e^z - 1| <= 1.682 |z|^{1/4} on Re(z) <= 0, sampled on a rectangle grid
/// in [re_min, 0] x [-im_max, im_max]. The origin is excluded (both sides
/// vanish there).
pub fn check_exp_inequality(grid_per_axis: u32, prec: u32) -> Result<InequalityReport> {
    let re_min = -50i64;
    let im_max = 50i64;
    check_exp_inequality_on(re_min, im_max, grid_per_axis, prec)
}

pub fn check_exp_inequality_on(
    re_min: i64,
    im_max: i64,
    grid_per_axis: u32,
    prec: u32,
) -> Result<InequalityReport> {
    if re_min > 0 {
        return Err(Error::Domain("grid must satisfy Re(z) <= 0".into()));
    }
    let wp = prec + 16;
    let npts = grid_per_axis as i64;
    let c_bound = constants::rational_ball(&BigRational::new(BigInt::from(1682), BigInt::from(1000)), wp);
    let mut margins = Vec::new();
    for i in 0..=npts {
        // x = re_min * i / npts in [re_min, 0]
        let x = Enclosure::from_ratio(&BigInt::from(re_min * i), &BigInt::from(npts), wp);
        for j in -npts..=npts {
            if i == 0 && j == 0 {
                continue; // z = 0: both sides vanish
            }
            let y = Enclosure::from_ratio(&BigInt::from(im_max * j), &BigInt::from(npts), wp);
            // |e^z - 1|^2 = e^{2x} - 2 e^x cos y + 1
            let ex = functions::exp(&x, wp);
            let lhs = ex
                .mul(&ex, wp)
                .sub(&ex.mul(&functions::cos(&y, wp), wp).shl(1), wp)
                .add(&Enclosure::one(), wp)
                .sqrt(wp)?;
            // |z|^{1/4} = (x^2 + y^2)^{1/8}
            let z2 = x.mul(&x, wp).add(&y.mul(&y, wp), wp);
            let z_quarter = functions::root4(&z2.sqrt(wp)?, wp)?;
            let margin = c_bound.mul(&z_quarter, wp).sub(&lhs, wp);
            margins.push(margin);
        }
    }
    Ok(InequalityReport::from_margins(
        "|e^z - 1| <= 1.682 |z|^(1/4)",
        format!("Re in [{re_min},0], |Im| <= {im_max}, {0}x{1} grid", npts + 1, 2 * npts + 1),
        margins,
    ))
}

/// Geometric sample points a (b/a)^(i/n) as exact rationals (f64-seeded).
fn log_grid(a: f64, b: f64, n: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let x = a * (b / a).powf(i as f64 / n as f64);
        // encode to a rational with ~12 significant digits
        let scaled = (x * 1e12).round();
        let num = BigInt::from(scaled as i128);
        out.push(BigRational::new(num, BigInt::from(10u64.pow(12))));
    }
    out
}

/// K_0(y) < 0.975 y^{-1/2} and K_0(y) < 1.7 y^{-7/2} on a log grid over
/// [1e-3, 1e3].
pub fn check_k0_bounds(points: u32, prec: u32) -> Result<(InequalityReport, InequalityReport)> {
    let wp = prec + 16;
    let grid = log_grid(1e-3, 1e3, points);
    let c1 = constants::rational_ball(&BigRational::new(BigInt::from(975), BigInt::from(1000)), wp);
    let c2 = constants::rational_ball(&BigRational::new(BigInt::from(17), BigInt::from(10)), wp);
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for y_r in &grid {
        let y = constants::rational_ball(y_r, wp);
        let k0 = k0_quadrature(&y, prec)?;
        let inv_sqrt = Enclosure::one().div(&y.sqrt(wp)?, wp)?;
        m1.push(c1.mul(&inv_sqrt, wp).sub(&k0, wp));
        // y^{-7/2} = (y^{-1/2})^7
        let pow7 = functions::powi(&inv_sqrt, 7, wp);
        m2.push(c2.mul(&pow7, wp).sub(&k0, wp));
    }
    Ok((
        InequalityReport::from_margins(
            "K_0(y) < 0.975 y^(-1/2)",
            format!("log grid [1e-3, 1e3], {} points", grid.len()),
            m1,
        ),
        InequalityReport::from_margins(
            "K_0(y) < 1.7 y^(-7/2)",
            format!("log grid [1e-3, 1e3], {} points", grid.len()),
            m2,
        ),
    ))
}

/// I_{-1/2}(x) + I_{3/2}(x) < 4.146 x^{-1/2} e^{-x} on (0,1] and
/// < 0.798 x^{-1/2} e^{x} on [1,100], each sampled on a log grid.
pub fn check_i_sum_bounds(points: u32, prec: u32) -> Result<(InequalityReport, InequalityReport)> {
    let wp = prec + 16;
    let c_small = constants::rational_ball(&BigRational::new(BigInt::from(4146), BigInt::from(1000)), wp);
    let c_large = constants::rational_ball(&BigRational::new(BigInt::from(798), BigInt::from(1000)), wp);
    let isum = |x: &Enclosure| -> Result<Enclosure> {
        Ok(bessel_i(HalfOrder::MinusHalf, x, wp)?.add(&bessel_i(HalfOrder::ThreeHalves, x, wp)?, wp))
    };
    let mut m_small = Vec::new();
    for x_r in &log_grid(1e-6, 1.0, points) {
        let x = constants::rational_ball(x_r, wp);
        let rhs = c_small
            .mul(&Enclosure::one().div(&x.sqrt(wp)?, wp)?, wp)
            .mul(&functions::exp(&x.neg(), wp), wp);
        m_small.push(rhs.sub(&isum(&x)?, wp));
    }
    let mut m_large = Vec::new();
    for x_r in &log_grid(1.0, 100.0, points) {
        let x = constants::rational_ball(x_r, wp);
        let rhs = c_large
            .mul(&Enclosure::one().div(&x.sqrt(wp)?, wp)?, wp)
            .mul(&functions::exp(&x, wp), wp);
        m_large.push(rhs.sub(&isum(&x)?, wp));
    }
    Ok((
        InequalityReport::from_margins(
            "I_(-1/2)+I_(3/2) < 4.146 x^(-1/2) e^(-x) on (0,1]",
            format!("log grid (0,1], {} points", points + 1),
            m_small,
        ),
        InequalityReport::from_margins(
            "I_(-1/2)+I_(3/2) < 0.798 x^(-1/2) e^x on [1,100]",
            format!("log grid [1,100], {} points", points + 1),
            m_large,
        ),
    ))
}

/// int_y^lam e^{lam/t} t^{-3/2+q} dt <= 4/(3-2q) lam^{-1} y^{1/2+q} e^{lam/y};
/// requires y >= 2, q <= 1, lam >= y. The integrand is strictly decreasing,
/// so bracketing Riemann sums enclose the integral; cells are refined until
/// the verdict is determinate.
pub fn check_integral_bound(
    y: &BigRational,
    q: &BigRational,
    lam: &BigRational,
    prec: u32,
) -> Result<InequalityReport> {
    if y < &BigRational::from_integer(BigInt::from(2)) {
        return Err(Error::Domain("integral bound needs y >= 2".into()));
    }
    if q > &BigRational::one() {
        return Err(Error::Domain("integral bound needs q <= 1".into()));
    }
    if lam < y {
        return Err(Error::Domain("integral bound needs lam >= y".into()));
    }
    let wp = prec + 32;
    let yb = constants::rational_ball(y, wp);
    let lamb = constants::rational_ball(lam, wp);
    // rhs = 4/(3-2q) lam^-1 y^{1/2+q} e^{lam/y}
    let three_minus_2q = constants::rational_ball(&(BigRational::from_integer(BigInt::from(3)) - q * BigRational::from_integer(BigInt::from(2))), wp);
    let half_plus_q = constants::rational_ball(&(BigRational::new(BigInt::one(), BigInt::from(2)) + q), wp);
    let y_pow = functions::exp(&half_plus_q.mul(&functions::ln(&yb, wp)?, wp), wp);
    let rhs = Enclosure::from_i64(4)
        .div(&three_minus_2q, wp)?
        .div(&lamb, wp)?
        .mul(&y_pow, wp)
        .mul(&functions::exp(&lamb.div(&yb, wp)?, wp), wp);
    if y == lam {
        // empty integral: margin is the full rhs
        return Ok(InequalityReport::from_margins(
            "int_y^lam e^(lam/t) t^(q-3/2) dt <= 4/(3-2q) lam^-1 y^(q+1/2) e^(lam/y)",
            format!("y={y}, q={q}, lam={lam} (empty integral)"),
            vec![rhs],
        ));
    }
    // f(t) = e^{lam/t} t^{q - 3/2}, strictly decreasing on [y, lam].
    let a_exp = q - BigRational::new(BigInt::from(3), BigInt::from(2));
    let f = |t: &Enclosure| -> Result<Enclosure> {
        let p = functions::exp(&lamb.div(t, wp)?, wp);
        let tp = functions::exp(&constants::rational_ball(&a_exp, wp).mul(&functions::ln(t, wp)?, wp), wp);
        Ok(p.mul(&tp, wp))
    };
    let width = lam - y;
    let mut cells = 64u32;
    loop {
        let mut lo_sum = Enclosure::zero();
        let mut hi_sum = Enclosure::zero();
        let dt = constants::rational_ball(&(&width / BigRational::from_integer(BigInt::from(cells))), wp);
        let mut f_prev = f(&yb)?;
        for i in 1..=cells {
            let t_i = y + &width * BigRational::new(BigInt::from(i), BigInt::from(cells));
            let f_i = f(&constants::rational_ball(&t_i, wp))?;
            // decreasing: f_i <= f on cell <= f_prev
            lo_sum = lo_sum.add(&f_i, wp);
            hi_sum = hi_sum.add(&f_prev, wp);
            f_prev = f_i;
        }
        let lo = lo_sum.mul(&dt, wp);
        let hi = hi_sum.mul(&dt, wp);
        let integral = Enclosure::from_interval(&lo.lower(), &hi.upper(), wp);
        let margin = rhs.sub(&integral, wp);
        let determinate = margin.lower().is_positive() || !margin.upper().is_positive();
        if determinate || cells >= 1 << 14 {
            return Ok(InequalityReport::from_margins(
                "int_y^lam e^(lam/t) t^(q-3/2) dt <= 4/(3-2q) lam^-1 y^(q+1/2) e^(lam/y)",
                format!("y={y}, q={q}, lam={lam}, {cells} cells"),
                vec![margin],
            ));
        }
        cells *= 2;
    }
}

/// The default 3x3x3 grid for the integral lemma.
pub fn check_integral_bound_grid(prec: u32) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    for y in [2i64, 5, 10] {
        for (qn, qd) in [(0i64, 1i64), (1, 2), (1, 1)] {
            for lam_mult in [1i64, 4, 10] {
                let y_r = BigRational::from_integer(BigInt::from(y));
                let q_r = BigRational::new(BigInt::from(qn), BigInt::from(qd));
                let lam_r = BigRational::from_integer(BigInt::from(y * lam_mult));
                out.push(check_integral_bound(&y_r, &q_r, &lam_r, prec)?);
            }
        }
    }
    Ok(out)
}
