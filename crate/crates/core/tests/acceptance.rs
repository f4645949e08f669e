//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gfock::bargmann::{
    dka, kernel_a, kernel_ap, kernel_cal_ap, kernel_gram, transform, transform_coeffs, BargmannKind, L2Function,
    QuadratureRule,
};
use gfock::coeffspace::{inner, norm, weight_exact, weights, CoeffSeq, KernelSpec, Space};
use gfock::kernels::{kernel_fp, kernel_hp, kernel_section};
use gfock::moments::{carleman_bound_check, hankel, stieltjes_certificate, MomentMatrix, MomentSeq, PsdMode};
use gfock::operators::{
    adjoint_of, commutator_diag_formula, commutator_matrix, composed_adjoint, diag_unitary, expr, lambda_table,
    BaseOp, CommutatorPair, DiagonalOp, OpMatrix, Rat, UnitaryKind,
};
use gfock::specfun::hermite_fn;
use gfock::Complex64;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    loop {
        let z = c(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        if z.norm() <= r {
            return z;
        }
    }
}

fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `base^e` for a possibly negative exponent.
fn rpow(base: i64, e: i64) -> Rat {
    let b = int(base);
    if e >= 0 {
        num_traits::Pow::pow(&b, e as u32)
    } else {
        Rat::one() / num_traits::Pow::pow(&b, (-e) as u32)
    }
}

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::default(), |acc, &a| acc * z + a)
}

// 1
fn reproducing() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let p = i % 4;
        let deg = rng.gen_range(0..=32);
        let coeffs: Vec<Complex64> = (0..=deg).map(|_| rand_c(&mut rng, 1.0)).collect();
        let f = CoeffSeq::new(coeffs.clone()).unwrap();
        let w = rand_c(&mut rng, 2.0);
        let fw = horner(&coeffs, w);
        for spec in [KernelSpec::hp(p), KernelSpec::fp(p)] {
            let k = kernel_section(spec, w, 32);
            worst = worst.max((inner(spec, &f, &k) - fw).norm() / (1.0 + fw.norm()));
        }
    }
    let t = start.elapsed();
    verdict(
        worst <= 1e-10 && t < Duration::from_secs(2),
        format!("max |<f,K_w> - f(w)|/(1+|f(w)|) = {worst:.2e} (tol 1e-10), {:.2} s (limit 2 s)", t.as_secs_f64()),
    )
}

/// Points with `|z conj(w)| <= 4` for the kernel grids.
fn kernel_grid() -> Vec<(Complex64, Complex64)> {
    let mut pts = Vec::new();
    for r in [0.0, 0.5, 1.0, 1.5, 2.0] {
        for k in 0..8 {
            let th = k as f64 * std::f64::consts::FRAC_PI_4;
            let z = Complex64::from_polar(r, th);
            for w in [c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 1.0), c(0.3, -0.4)] {
                pts.push((z, w));
            }
        }
    }
    pts
}

/// `sum_{n<80} t^n (n+1)^{2s} / n!` in exact arithmetic for integer `t`.
fn exact_kernel(t: i64, s: i64) -> f64 {
    let mut sum = Rat::zero();
    for n in 0..80usize {
        sum += rpow(t, n as i64) * rpow(n as i64 + 1, 2 * s) / Rat::from_integer(fact(n));
    }
    sum.to_f64().unwrap()
}

// 2
fn touchard_closed_form() -> Verdict {
    let mut worst = 0.0f64;
    for p in 0..=4 {
        for (z, w) in kernel_grid() {
            let k = kernel_hp(p, z, w, 60).unwrap();
            worst = worst.max(k.abs_gap / (1.0 + k.closed_value.norm()));
        }
    }
    let mut oracle = 0.0f64;
    for p in 0..=4u32 {
        for t in [-4i64, -1, 1, 2, 4] {
            let k = kernel_hp(p, c(t as f64, 0.0), c(1.0, 0.0), 60).unwrap().closed_value;
            let want = exact_kernel(t, p as i64);
            oracle = oracle.max((k - want).norm() / (1.0 + want.abs()));
        }
    }
    let k11 = kernel_hp(1, c(1.0, 0.0), c(1.0, 0.0), 60).unwrap();
    let e5 = 5.0 * std::f64::consts::E;
    let spot = (k11.series_value - e5).norm().max((k11.closed_value - e5).norm());
    verdict(
        worst <= 1e-12 && oracle <= 1e-12 && spot <= 1e-12,
        format!("two-route gap {worst:.2e}, exact-series oracle {oracle:.2e} (tol 1e-12); |K_1(1,1) - 5e| = {spot:.2e}"),
    )
}

// 3
fn hypergeometric_closed_form() -> Verdict {
    let mut worst = 0.0f64;
    for p in 0..=4 {
        for (z, w) in kernel_grid() {
            let k = kernel_fp(p, z, w, 60);
            worst = worst.max(k.abs_gap / (1.0 + k.closed_value.norm()));
        }
    }
    let mut oracle = 0.0f64;
    for p in 0..=4u32 {
        for t in [-4i64, -1, 1, 2, 4] {
            let k = kernel_fp(p, c(t as f64, 0.0), c(1.0, 0.0), 60).closed_value;
            let want = exact_kernel(t, -(p as i64));
            oracle = oracle.max((k - want).norm() / (1.0 + want.abs()));
        }
    }
    verdict(
        worst <= 1e-12 && oracle <= 1e-12,
        format!("two-route gap {worst:.2e}, exact-series oracle {oracle:.2e} (tol 1e-12)"),
    )
}

/// Adjoint weights and shifts as tabulated for each space.
fn tabulated(op: BaseOp, spec: KernelSpec, n: i64) -> (i64, Rat) {
    let q = 2 * spec.p as i64;
    match (spec.space, op) {
        (Space::Hp, BaseOp::R0) => (1, rpow(n + 2, q) / rpow(n + 1, q + 1)),
        (Space::Hp, BaseOp::Dz) => (1, rpow(n + 2, q) / rpow(n + 1, q)),
        (Space::Hp, BaseOp::Mz) => (-1, rpow(n, q + 1) / rpow(n + 1, q)),
        (Space::Hp, BaseOp::I) => (-1, if n == 0 { Rat::zero() } else { rpow(n, q) / rpow(n + 1, q) }),
        (Space::Fp, BaseOp::R0) => (1, rpow(n + 1, q - 1) / rpow(n + 2, q)),
        (Space::Fp, BaseOp::Dz) => (1, rpow(n + 1, q) / rpow(n + 2, q)),
        (Space::Fp, BaseOp::Mz) => (-1, if n == 0 { Rat::zero() } else { rpow(n + 1, q) / rpow(n, q - 1) }),
        (Space::Fp, BaseOp::I) => (-1, if n == 0 { Rat::zero() } else { rpow(n + 1, q) / rpow(n, q) }),
        (Space::Fock, _) => unreachable!(),
    }
}

// 4
fn adjoint_pairing() -> Verdict {
    let mut defects = 0usize;
    let mut table_mismatch = 0usize;
    let mut pairs = 0usize;
    for p in 0..=3 {
        for spec in [KernelSpec::hp(p), KernelSpec::fp(p)] {
            let w = |k: i64| weight_exact(spec, k as usize);
            for op in BaseOp::ALL {
                let t = op.op();
                let star = adjoint_of(op, spec);
                for n in 0..=30i64 {
                    let (s, want) = tabulated(op, spec, n);
                    if star.shift() != s || star.weight(n as usize) != want {
                        table_mismatch += 1;
                    }
                    for m in 0..=30i64 {
                        // <T z^n, z^m> and <z^n, T* z^m>, weights real
                        let lhs = if n + t.shift() == m && m >= 0 { t.weight(n as usize) * w(m) } else { Rat::zero() };
                        let rhs = if m + star.shift() == n { star.weight(m as usize) * w(n) } else { Rat::zero() };
                        pairs += 1;
                        if lhs != rhs {
                            defects += 1;
                        }
                    }
                }
            }
        }
    }
    verdict(
        defects == 0 && table_mismatch == 0,
        format!("{pairs} exact pairings, {defects} nonzero defects; {table_mismatch} deviations from the adjoint tables"),
    )
}

fn composed_source(op: BaseOp, spec: KernelSpec) -> String {
    let q = 2 * spec.p;
    match (spec.space, op) {
        (Space::Hp, BaseOp::R0) => format!("I*(Id + R0*I)^{q}"),
        (Space::Hp, BaseOp::Dz) => format!("Mz*(Id + R0*I)^{q}"),
        (Space::Hp, BaseOp::Mz) => format!("D*(Id - R0*I)^{q}"),
        (Space::Hp, BaseOp::I) => format!("R0*(Id - R0*I)^{q}"),
        (Space::Fp, BaseOp::R0) => format!("I*(Id - R0^2*I*Mz)^{q}"),
        (Space::Fp, BaseOp::Dz) => format!("Mz*(Id - R0^2*I*Mz)^{q}"),
        (Space::Fp, BaseOp::Mz) => format!("D*(Id + I*R0)^{q}"),
        (Space::Fp, BaseOp::I) => format!("R0*(Id + I*R0)^{q}"),
        (Space::Fock, _) => unreachable!(),
    }
}

// 5
fn composed_adjoints() -> Verdict {
    let trunc = 40;
    let mut bad = 0usize;
    let mut min_cols = usize::MAX;
    for p in 0..=3 {
        for spec in [KernelSpec::hp(p), KernelSpec::fp(p)] {
            for op in BaseOp::ALL {
                let table = adjoint_of(op, spec).matrix(trunc);
                let by_matrix = composed_adjoint(op, spec, trunc);
                let by_expr = expr::parse(&composed_source(op, spec)).unwrap().matrix(trunc);
                for m in [&by_matrix, &by_expr] {
                    let cols = m.exact_cols();
                    min_cols = min_cols.min(cols);
                    bad += (0..cols).filter(|&j| m.column(j) != table.column(j)).count();
                }
            }
        }
    }
    verdict(
        bad == 0 && min_cols >= trunc - 1,
        format!("{bad} mismatching columns; at least {min_cols} interior columns compared per operator (truncation {trunc})"),
    )
}

fn commutator(op: BaseOp, spec: KernelSpec, trunc: usize) -> OpMatrix {
    commutator_matrix(&op.op().matrix(trunc), &adjoint_of(op, spec).matrix(trunc)).unwrap()
}

/// The closed diagonal formulas, written out.
fn closed_diag(pair: CommutatorPair, spec: KernelSpec, n: i64) -> Rat {
    let q = 2 * spec.p as i64;
    match (spec.space, pair) {
        (Space::Hp, CommutatorPair::MzMzStar) => rpow(n, q + 1) / rpow(n + 1, q) - rpow(n + 1, q + 1) / rpow(n + 2, q),
        (Space::Hp, CommutatorPair::R0R0Star) => {
            let prev = if n == 0 { Rat::zero() } else { rpow(n + 1, q) / rpow(n, q + 1) };
            rpow(n + 2, q) / rpow(n + 1, q + 1) - prev
        }
        (Space::Fp, CommutatorPair::MzMzStar) => {
            let here = if n == 0 { Rat::zero() } else { rpow(n + 1, q) / rpow(n, q - 1) };
            here - rpow(n + 2, q) / rpow(n + 1, q - 1)
        }
        (Space::Fp, CommutatorPair::R0R0Star) => {
            let prev = if n == 0 { Rat::zero() } else { rpow(n, q - 1) / rpow(n + 1, q) };
            rpow(n + 1, q - 1) / rpow(n + 2, q) - prev
        }
        (Space::Fock, _) => unreachable!(),
    }
}

// 6
fn commutator_diagonals() -> Verdict {
    let trunc = 34;
    let mut bad = 0usize;
    for p in 0..=3 {
        for spec in [KernelSpec::hp(p), KernelSpec::fp(p)] {
            for (pair, op) in [(CommutatorPair::MzMzStar, BaseOp::Mz), (CommutatorPair::R0R0Star, BaseOp::R0)] {
                let m = commutator(op, spec, trunc);
                for j in 0..=30usize {
                    let formula = commutator_diag_formula(pair, spec, j);
                    if formula != closed_diag(pair, spec, j as i64) {
                        bad += 1;
                    }
                    for i in 0..m.dim() {
                        let want = if i == j { formula.clone() } else { Rat::zero() };
                        if m.get(i, j) != &want {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    let mut boundary = 0usize;
    for p in 0..=3u32 {
        let four = rpow(4, p as i64);
        let cases = [
            (BaseOp::R0, KernelSpec::hp(p), four.clone()),
            (BaseOp::R0, KernelSpec::fp(p), Rat::one() / &four),
            (BaseOp::Mz, KernelSpec::fp(p), -four.clone()),
        ];
        for (op, spec, want) in cases {
            if commutator(op, spec, 8).get(0, 0) != &want {
                boundary += 1;
            }
        }
    }
    verdict(
        bad == 0 && boundary == 0,
        format!("{bad} interior mismatches (n <= 30, p <= 3); {boundary} boundary mismatches against 4^p, 4^-p, -4^p"),
    )
}

// 7
fn lambda_recurrence() -> Verdict {
    let trunc = 30;
    let table = lambda_table(6);
    let i = BaseOp::I.op().matrix(trunc);
    let r0 = BaseOp::R0.op().matrix(trunc);
    let ir0 = i.mul(&r0).unwrap();
    let mut bad = 0usize;
    let mut min_cols = usize::MAX;
    for n in 1..=6u32 {
        let lhs = ir0.pow(n);
        let mut rhs = OpMatrix::zeros(trunc);
        for k in 0..=n {
            let lam = table.get(k as usize, n as usize).to_shift().matrix(trunc);
            rhs = rhs.add(&lam.mul(&i.pow(k)).unwrap().mul(&r0.pow(k)).unwrap()).unwrap();
        }
        let cols = lhs.exact_cols().min(rhs.exact_cols());
        min_cols = min_cols.min(cols);
        bad += (0..cols).filter(|&j| lhs.column(j) != rhs.column(j)).count();
    }
    verdict(
        bad == 0 && min_cols >= trunc,
        format!("{bad} mismatching columns over n <= 6, {min_cols} columns compared (truncation {trunc})"),
    )
}

// 8
fn isometries_and_bridges() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let p = i % 5;
        let w = weights(KernelSpec::FOCK, 40);
        let f = CoeffSeq::new((0..=40).map(|k| rand_c(&mut rng, 1.0) / w[k].sqrt()).collect()).unwrap();
        let nf = norm(KernelSpec::FOCK, &f);
        let e = diag_unitary(UnitaryKind::Ep, p).to_shift().apply(&f);
        let v = diag_unitary(UnitaryKind::Vp, p).to_shift().apply(&f);
        worst = worst.max((norm(KernelSpec::hp(p), &e) - nf).abs() / nf);
        worst = worst.max((norm(KernelSpec::fp(p), &v) - nf).abs() / nf);
    }
    let mut bad = 0usize;
    for p in 0..=4 {
        let (e, v) = (diag_unitary(UnitaryKind::Ep, p), diag_unitary(UnitaryKind::Vp, p));
        let (t, l) = (diag_unitary(UnitaryKind::Thetap, p), diag_unitary(UnitaryKind::Lambdap, p));
        for ok in [
            t.agrees_with(&e.mul(&e), 100),
            l.agrees_with(&v.mul(&v), 100),
            t.mul(&l).agrees_with(&DiagonalOp::identity(), 100),
        ] {
            bad += usize::from(!ok);
        }
        // Theta_p = (n+1)^{2p} on z^n
        bad += (0..100).filter(|&n| t.entry(n) != rpow(n as i64 + 1, 2 * p as i64)).count();
    }
    verdict(
        worst <= 1e-12 && bad == 0,
        format!("max relative norm defect {worst:.2e} on 100 f (tol 1e-12); {bad} exact bridge mismatches"),
    )
}

fn sampled_hermite(n: usize) -> L2Function {
    L2Function::from_fn(move |x| c(hermite_fn(n, x), 0.0))
}

// 9
fn eigenrelations(quad: &QuadratureRule) -> Verdict {
    let zs = [c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(0.6, 1.2), c(-1.0, -1.5), c(0.0, 2.0)];
    let mut worst_b = 0.0f64;
    let mut worst_p = 0.0f64;
    for n in 0..=20usize {
        let phi = sampled_hermite(n);
        let nf: f64 = (1..=n).map(|k| k as f64).product::<f64>().sqrt();
        for &z in &zs {
            let want = z.powu(n as u32) / nf;
            let b = transform(BargmannKind::B, 0, &phi, z, 32, quad).unwrap();
            worst_b = worst_b.max((b.value - want).norm());
            for p in 1..=2 {
                let f = ((n + 1) as f64).powi(p as i32);
                let bp = transform(BargmannKind::Bp, p, &phi, z, 32, quad).unwrap();
                let sbp = transform(BargmannKind::SBp, p, &phi, z, 32, quad).unwrap();
                worst_p = worst_p.max((bp.value - want * f).norm());
                worst_p = worst_p.max((sbp.value - want / f).norm());
            }
        }
    }
    verdict(
        worst_b <= 1e-8 && worst_p <= 1e-8,
        format!("B: max |B xi_n - z^n/sqrt(n!)| = {worst_b:.2e}; B_p, SB_p (p <= 2): {worst_p:.2e} (tol 1e-8, M = {})", quad.len()),
    )
}

// 10
fn parseval(quad: &QuadratureRule) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for i in 0..30 {
        let p = i % 4;
        let coeffs = CoeffSeq::new((0..20).map(|_| rand_c(&mut rng, 1.0)).collect()).unwrap();
        let stored = L2Function::from_hermite(coeffs);
        let phi = L2Function::from_fn(move |x| stored.eval(x));
        let l2 = quad.integrate(|x| phi.eval(x).norm_sqr()).sqrt();
        let extracted = phi.hermite_coeffs(32, quad);
        let bp = transform_coeffs(BargmannKind::Bp, p, &extracted);
        let sbp = transform_coeffs(BargmannKind::SBp, p, &extracted);
        worst = worst.max((norm(KernelSpec::hp(p), &bp) - l2).abs() / l2);
        worst = worst.max((norm(KernelSpec::fp(p), &sbp) - l2).abs() / l2);
    }
    verdict(worst <= 1e-10, format!("max relative Parseval defect {worst:.2e} over 30 random 20-mode functions (tol 1e-10)"))
}

// 11
fn derivative_formula() -> Verdict {
    // He_k has real roots only, so Im z != 0 keeps the relative error defined
    let zs = [c(-1.0, 0.25), c(-0.5, 0.3), c(0.2, -0.6), c(0.5, -0.4), c(1.0, 0.5)];
    let xs = [-2.0, -1.0, 0.0, 1.1, 2.0];
    let h = 1e-3;
    let mut worst = 0.0f64;
    for k in 1..=6usize {
        for &z in &zs {
            for &x in &xs {
                let exact = dka(k, z, x);
                let f = |z: Complex64| dka(k - 1, z, x);
                let s = c(h, 0.0);
                let fd = (f(z - s * 2.0) - f(z - s) * 8.0 + f(z + s) * 8.0 - f(z + s * 2.0)) / (s * 12.0);
                worst = worst.max((fd - exact).norm() / exact.norm());
            }
        }
    }
    verdict(
        worst <= 1e-6,
        format!("max relative error of 4th-order differences {worst:.2e} over k <= 6, 5x5 grid (tol 1e-6)"),
    )
}

// 12
fn gram_integrals(quad: &QuadratureRule) -> Verdict {
    let mut worst = 0.0f64;
    for p in 0..=2 {
        for (z, w) in [(c(1.0, 0.0), c(1.0, 0.0)), (c(0.5, 0.3), c(1.2, 0.0))] {
            let g = kernel_gram(Space::Hp, p, z, w, quad, 40);
            worst = worst.max((g - kernel_hp(p, z, w, 60).unwrap().closed_value).norm());
            let g = kernel_gram(Space::Fp, p, z, w, quad, 40);
            worst = worst.max((g - kernel_fp(p, z, w, 60).closed_value).norm());
        }
    }
    verdict(worst <= 1e-7, format!("max |quadrature Gram - closed kernel| = {worst:.2e} (tol 1e-7)"))
}

/// Determinant by plain Gaussian elimination over the rationals.
fn det_gauss(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        let (top, bottom) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in bottom.iter_mut() {
            let f = &row[col] / &pv;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

fn exact_hankel(s: &MomentSeq, order: usize, shifted: bool) -> Vec<Vec<Rat>> {
    match hankel(s, order, shifted).unwrap() {
        MomentMatrix::Exact(m) => m,
        MomentMatrix::Float(_) => unreachable!(),
    }
}

// 13
fn moment_certificates() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in 1..=3 {
        let s = MomentSeq::hp(p);
        let cert = stieltjes_certificate(&s, 6, PsdMode::ExactMinors).unwrap();
        // oracle: every leading minor of both Hankel families is positive
        let positive = (0..=6).all(|n| {
            [false, true]
                .iter()
                .all(|&sh| (0..=n).all(|k| det_gauss(exact_hankel(&s, k, sh)).is_positive()))
        });
        ok &= cert.stieltjes && positive;
    }
    notes.push(format!("H_p sequences PSD for p = 1..3, N <= 6: {ok}"));
    let d1 = det_gauss(exact_hankel(&MomentSeq::fp(1), 2, false));
    let d2 = det_gauss(exact_hankel(&MomentSeq::fp(2), 1, false));
    let fails = (1..=3).all(|p| !stieltjes_certificate(&MomentSeq::fp(p), 3, PsdMode::ExactMinors).unwrap().stieltjes);
    ok &= d1 == int(-24) && d2 == int(-94) && fails;
    notes.push(format!("F_p witnesses det = {d1} (p=1, N=2), {d2} (p=2, N=1)"));
    let carleman = (1..=3).all(|p| carleman_bound_check(&MomentSeq::hp(p), 1.0, 40).unwrap());
    ok &= carleman;
    notes.push(format!("Carleman s_n <= (2n)! for N <= 40: {carleman}"));
    verdict(ok, notes.join("; "))
}

// 14
fn p0_degeneration(quad: &QuadratureRule) -> Verdict {
    let mut bad = 0usize;
    for n in 0..=100 {
        let f = weight_exact(KernelSpec::FOCK, n);
        bad += usize::from(weight_exact(KernelSpec::hp(0), n) != f || weight_exact(KernelSpec::fp(0), n) != f);
        bad += usize::from(f != Rat::from_integer(fact(n)));
    }
    let fock_star = [(BaseOp::R0, BaseOp::I), (BaseOp::Dz, BaseOp::Mz), (BaseOp::Mz, BaseOp::Dz), (BaseOp::I, BaseOp::R0)];
    for (op, star) in fock_star {
        for spec in [KernelSpec::FOCK, KernelSpec::hp(0), KernelSpec::fp(0)] {
            let a = adjoint_of(op, spec);
            let b = star.op();
            bad += usize::from(a.shift() != b.shift() || (0..40).any(|n| a.weight(n) != b.weight(n)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (z, w) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
        let e = (z * w.conj()).exp();
        for k in [kernel_hp(0, z, w, 60).unwrap(), kernel_fp(0, z, w, 60)] {
            worst = worst.max((k.closed_value - e).norm().max((k.series_value - e).norm()) / e.norm().max(1.0));
        }
        let x = rng.gen_range(-3.0..=3.0);
        let a = kernel_a(z, x);
        worst = worst.max((kernel_ap(0, z, x, 60) - a).norm()).max((kernel_cal_ap(0, z, x, 60) - a).norm());
        let phi = L2Function::hermite_basis(rng.gen_range(0..=10));
        let b = transform(BargmannKind::B, 0, &phi, z, 12, quad).unwrap().value;
        for kind in [BargmannKind::Bp, BargmannKind::SBp] {
            worst = worst.max((transform(kind, 0, &phi, z, 12, quad).unwrap().value - b).norm());
        }
    }
    verdict(
        bad == 0 && worst <= 1e-12,
        format!("{bad} exact mismatches (weights, adjoints); max evaluation gap {worst:.2e} (tol 1e-12)"),
    )
}

// 15
fn cli_determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_gfock");
    let quick = || Command::new(exe).args(["verify", "--profile", "quick", "--seed", "1"]).output().unwrap();
    let (a, b) = (quick(), quick());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let start = Instant::now();
    let full = Command::new(exe).args(["verify", "--profile", "full", "--seed", "1"]).output().unwrap();
    let t = start.elapsed();
    verdict(
        a.status.code() == Some(0) && b.status.code() == Some(0) && same && full.status.code() == Some(0) && t < Duration::from_secs(60),
        format!(
            "quick exit codes {:?}/{:?}, byte-identical: {same}; full exit {:?} in {:.1} s (limit 60 s)",
            a.status.code(),
            b.status.code(),
            full.status.code(),
            t.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let quad = QuadratureRule::gauss_hermite(200).unwrap();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("reproducing property", Box::new(reproducing)),
        ("Touchard closed form of the H_p kernel", Box::new(touchard_closed_form)),
        ("hypergeometric closed form of the F_p kernel", Box::new(hypergeometric_closed_form)),
        ("adjoint pairing", Box::new(adjoint_pairing)),
        ("composed adjoint forms", Box::new(composed_adjoints)),
        ("commutator diagonals", Box::new(commutator_diagonals)),
        ("Lambda recurrence", Box::new(lambda_recurrence)),
        ("isometries and bridges", Box::new(isometries_and_bridges)),
        ("Bargmann eigenrelations", Box::new(|| eigenrelations(&quad))),
        ("unitarity of B_p and SB_p", Box::new(|| parseval(&quad))),
        ("derivative formula", Box::new(derivative_formula)),
        ("kernel Gram integrals", Box::new(|| gram_integrals(&quad))),
        ("moment certificates", Box::new(moment_certificates)),
        ("p = 0 degeneration", Box::new(|| p0_degeneration(&quad))),
        ("CLI determinism", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.pass);
        println!("criterion {:>2} {} {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
