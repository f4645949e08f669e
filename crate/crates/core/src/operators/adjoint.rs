use num_traits::{One, Signed, Zero};

use super::{
    diag_a, diag_d0, diag_e, int, powi, ratio, BaseOp, DiagonalOp, OpMatrix, Rat, WeightedShiftOp,
};
use crate::coeffspace::{weight_exact, KernelSpec, Space};

/// `(space, p)` with Fock folded into `H_0`, whose tables coincide with it.
fn normalized(spec: KernelSpec) -> (Space, i64) {
    match spec.space {
        Space::Fock => (Space::Hp, 0),
        s => (s, spec.p as i64),
    }
}

fn n1(n: usize, k: i64) -> Rat {
    int(n as i64 + k)
}

/// Adjoint of a base operator in the given space, from the closed tables.
///
/// `H_p`: `R0* z^n = (n+2)^{2p}/(n+1)^{2p+1} z^{n+1}`, `D* z^n = (n+2)^{2p}/(n+1)^{2p} z^{n+1}`,
/// `Mz* z^n = n^{2p+1}/(n+1)^{2p} z^{n-1}`, `I* z^n = n^{2p}/(n+1)^{2p} z^{n-1}`.
///
/// `F_p`: `R0* z^n = (n+1)^{2p-1}/(n+2)^{2p} z^{n+1}`, `D* z^n = (n+1)^{2p}/(n+2)^{2p} z^{n+1}`,
/// `Mz* z^n = (n+1)^{2p}/n^{2p-1} z^{n-1}`, `I* z^n = (n+1)^{2p}/n^{2p} z^{n-1}`.
///
/// Lowering adjoints send `1` to `0`.
pub fn adjoint_of(op: BaseOp, spec: KernelSpec) -> WeightedShiftOp {
    let (space, p) = normalized(spec);
    let label = format!("adj({},{spec})", op.name());
    let q = 2 * p;
    match (space, op) {
        (Space::Hp, BaseOp::R0) => {
            WeightedShiftOp::new(1, label, move |n| powi(&n1(n, 2), q) * powi(&n1(n, 1), -(q + 1)))
        }
        (Space::Hp, BaseOp::Dz) => {
            WeightedShiftOp::new(1, label, move |n| powi(&n1(n, 2), q) * powi(&n1(n, 1), -q))
        }
        (Space::Hp, BaseOp::Mz) => {
            WeightedShiftOp::new(-1, label, move |n| powi(&n1(n, 0), q + 1) * powi(&n1(n, 1), -q))
        }
        (Space::Hp, BaseOp::I) => {
            WeightedShiftOp::new(-1, label, move |n| powi(&n1(n, 0), q) * powi(&n1(n, 1), -q))
        }
        (Space::Fp, BaseOp::R0) => {
            WeightedShiftOp::new(1, label, move |n| powi(&n1(n, 1), q - 1) * powi(&n1(n, 2), -q))
        }
        (Space::Fp, BaseOp::Dz) => {
            WeightedShiftOp::new(1, label, move |n| powi(&n1(n, 1), q) * powi(&n1(n, 2), -q))
        }
        (Space::Fp, BaseOp::Mz) => {
            WeightedShiftOp::new(-1, label, move |n| powi(&n1(n, 1), q) * powi(&n1(n, 0), -(q - 1)))
        }
        (Space::Fp, BaseOp::I) => {
            WeightedShiftOp::new(-1, label, move |n| powi(&n1(n, 1), q) * powi(&n1(n, 0), -q))
        }
        (Space::Fock, _) => unreachable!("folded into H_0"),
    }
}

/// Adjoint of an arbitrary weighted shift, from the space weights:
/// `T* z^m = c(m - s) w_m / w_{m-s} z^{m-s}`.
pub fn adjoint_generic(op: &WeightedShiftOp, spec: KernelSpec) -> WeightedShiftOp {
    let s = op.shift();
    let inner = op.clone();
    WeightedShiftOp::new(-s, format!("adj({},{spec})", op.label()), move |m| {
        let src = m as i64 - s;
        if src < 0 {
            return Rat::zero();
        }
        let src = src as usize;
        inner.weight(src) * weight_exact(spec, m) / weight_exact(spec, src)
    })
}

/// Builds the adjoint literally as a product of base-operator sections:
///
/// | space | `R0*`                 | `D*`                   | `Mz*`               | `I*`                 |
/// |-------|-----------------------|------------------------|---------------------|----------------------|
/// | `H_p` | `I (Id + R0 I)^2p`    | `Mz (Id + R0 I)^2p`    | `D (Id - R0 I)^2p`  | `R0 (Id - R0 I)^2p`  |
/// | `F_p` | `I (Id - R0^2 I Mz)^2p` | `Mz (Id - R0^2 I Mz)^2p` | `D (Id + I R0)^2p` | `R0 (Id + I R0)^2p` |
///
/// Compare against [`adjoint_of`] on the first [`OpMatrix::exact_cols`] columns.
pub fn composed_adjoint(op: BaseOp, spec: KernelSpec, truncation: usize) -> OpMatrix {
    let (space, p) = normalized(spec);
    let m = |b: BaseOp| b.op().matrix(truncation);
    let (r0, i, d, mz) = (m(BaseOp::R0), m(BaseOp::I), m(BaseOp::Dz), m(BaseOp::Mz));
    let id = OpMatrix::identity(truncation);
    let mul = |a: &OpMatrix, b: &OpMatrix| a.mul(b).expect("same truncation");
    let q = 2 * p as u32;
    let (outer, core) = match space {
        Space::Hp => {
            let r0i = mul(&r0, &i);
            match op {
                BaseOp::R0 => (i, id.add(&r0i)),
                BaseOp::Dz => (mz, id.add(&r0i)),
                BaseOp::Mz => (d, id.sub(&r0i)),
                BaseOp::I => (r0, id.sub(&r0i)),
            }
        }
        Space::Fp => {
            let lift = mul(&mul(&mul(&r0, &r0), &i), &mz);
            let ir0 = mul(&i, &r0);
            match op {
                BaseOp::R0 => (i, id.sub(&lift)),
                BaseOp::Dz => (mz, id.sub(&lift)),
                BaseOp::Mz => (d, id.add(&ir0)),
                BaseOp::I => (r0, id.add(&ir0)),
            }
        }
        Space::Fock => unreachable!("folded into H_0"),
    };
    mul(&outer, &core.expect("same truncation").pow(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorPair {
    /// `[Mz, Mz*]`
    MzMzStar,
    /// `[R0, R0*]`
    R0R0Star,
}

/// Diagonal entry `n` of the commutator, from its closed form.
pub fn commutator_diag_formula(pair: CommutatorPair, spec: KernelSpec, n: usize) -> Rat {
    let (space, p) = normalized(spec);
    let q = 2 * p;
    let nn = int(n as i64);
    let one = Rat::one();
    let four_p = powi(&int(4), p);
    match (space, pair) {
        // n (1 - 1/(n+1))^{2p} - (n+1) (1 - 1/(n+2))^{2p}
        (Space::Hp, CommutatorPair::MzMzStar) => {
            &nn * powi(&(&one - ratio(1, n as i64 + 1)), q)
                - n1(n, 1) * powi(&(&one - ratio(1, n as i64 + 2)), q)
        }
        (Space::Hp, CommutatorPair::R0R0Star) => {
            if n == 0 {
                four_p
            } else {
                // -1/(n(n+1)) ((n+1)(1 + 1/n)^{2p} - n (1 + 1/(n+1))^{2p})
                -ratio(1, (n * (n + 1)) as i64)
                    * (n1(n, 1) * powi(&(&one + ratio(1, n as i64)), q)
                        - &nn * powi(&(&one + ratio(1, n as i64 + 1)), q))
            }
        }
        (Space::Fp, CommutatorPair::MzMzStar) => {
            if n == 0 {
                -four_p
            } else {
                // n (1 + 1/n)^{2p} - (n+1) (1 + 1/(n+1))^{2p}
                &nn * powi(&(&one + ratio(1, n as i64)), q)
                    - n1(n, 1) * powi(&(&one + ratio(1, n as i64 + 1)), q)
            }
        }
        (Space::Fp, CommutatorPair::R0R0Star) => {
            if n == 0 {
                one / four_p
            } else {
                // -1/(n(n+1)) ((n+1)(1 - 1/(n+1))^{2p} - n (1 - 1/(n+2))^{2p})
                -ratio(1, (n * (n + 1)) as i64)
                    * (n1(n, 1) * powi(&(&one - ratio(1, n as i64 + 1)), q)
                        - &nn * powi(&(&one - ratio(1, n as i64 + 2)), q))
            }
        }
        (Space::Fock, _) => unreachable!("folded into H_0"),
    }
}

/// The commutator written in diagonal-operator calculus with
/// `A = diag(0,1,2,...)`, `E = diag(1,1,1/2,1/3,...)`, `D0` and their shifts:
///
/// * `H_p`, `[Mz,Mz*] = A (Id - [A^(-1)]^-1)^2p - A^(-1) (Id - [A^(-2)]^-1)^2p`
/// * `H_p`, `[R0,R0*] = D0 (A^(-1) (Id + E)^2p - A (Id + E^(-1))^2p)`
/// * `F_p`, `[Mz,Mz*] = A (Id + E)^2p - A^(-1) (Id + E^(-1))^2p`
/// * `F_p`, `[R0,R0*] = D0 (A^(-1) (Id - [A^(-1)]^-1)^2p - A (Id - [A^(-2)]^-1)^2p)`
///
/// The last form only holds for `n >= 1` when `p >= 1`: at `n = 0` it gives `0`
/// while the commutator is `4^{-p}`.
pub fn commutator_diag_operator(pair: CommutatorPair, spec: KernelSpec) -> DiagonalOp {
    let (space, p) = normalized(spec);
    let q = 2 * p as u32;
    let (a, e, d0, id) = (diag_a(), diag_e(), diag_d0(), DiagonalOp::identity());
    let a1 = a.backward();
    let a2 = a.backward_by(2);
    match (space, pair) {
        (Space::Hp, CommutatorPair::MzMzStar) => a
            .mul(&id.sub(&a1.inverse()).pow(q))
            .sub(&a1.mul(&id.sub(&a2.inverse()).pow(q))),
        (Space::Hp, CommutatorPair::R0R0Star) => d0.mul(
            &a1.mul(&id.add(&e).pow(q))
                .sub(&a.mul(&id.add(&e.backward()).pow(q))),
        ),
        (Space::Fp, CommutatorPair::MzMzStar) => a
            .mul(&id.add(&e).pow(q))
            .sub(&a1.mul(&id.add(&e.backward()).pow(q))),
        (Space::Fp, CommutatorPair::R0R0Star) => d0.mul(
            &a1.mul(&id.sub(&a1.inverse()).pow(q))
                .sub(&a.mul(&id.sub(&a2.inverse()).pow(q))),
        ),
        (Space::Fock, _) => unreachable!("folded into H_0"),
    }
}

/// `max_{n,m <= N} |<T z^n, z^m> - <z^n, T* z^m>|` in exact arithmetic, with
/// `T*` taken from [`adjoint_of`].
pub fn adjoint_pairing_check(op: BaseOp, spec: KernelSpec, truncation: usize) -> Rat {
    pairing_defect(&op.op(), &adjoint_of(op, spec), spec, truncation)
}

pub(crate) fn pairing_defect(
    t: &WeightedShiftOp,
    t_star: &WeightedShiftOp,
    spec: KernelSpec,
    truncation: usize,
) -> Rat {
    let w: Vec<Rat> = (0..=truncation).map(|k| weight_exact(spec, k)).collect();
    let mut worst = Rat::zero();
    for n in 0..=truncation {
        for m in 0..=truncation {
            let lhs = match t.image_degree(n) {
                Some(d) if d == m => t.weight(n) * &w[m],
                _ => Rat::zero(),
            };
            let rhs = match t_star.image_degree(m) {
                Some(d) if d == n => t_star.weight(m) * &w[n],
                _ => Rat::zero(),
            };
            let defect = (lhs - rhs).abs();
            if defect > worst {
                worst = defect;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let r0s = adjoint_of(BaseOp::R0, KernelSpec::hp(1));
        assert_eq!(r0s.shift(), 1);
        assert_eq!(r0s.weight(2), ratio(16, 27));
        assert_eq!(r0s.weight(3), ratio(25, 64));
        let ds = adjoint_of(BaseOp::Dz, KernelSpec::FOCK);
        let mz = BaseOp::Mz.op();
        assert_eq!(ds.shift(), mz.shift());
        assert!((0..20).all(|n| ds.weight(n) == mz.weight(n)));
        let is = adjoint_of(BaseOp::I, KernelSpec::fp(1));
        assert_eq!(is.shift(), -1);
        assert_eq!(is.weight(3), ratio(16, 9));
        assert_eq!(is.weight(2), ratio(9, 4));
    }

    #[test]
    fn lowering_adjoints_kill_constants() {
        for spec in [KernelSpec::hp(2), KernelSpec::fp(2)] {
            for op in [BaseOp::Mz, BaseOp::I] {
                let a = adjoint_of(op, spec);
                assert_eq!(a.image_degree(0), None);
                assert!(a.weight(0).is_zero());
            }
        }
    }

    #[test]
    fn pairing_is_exact() {
        assert!(adjoint_pairing_check(BaseOp::R0, KernelSpec::hp(2), 30).is_zero());
        assert!(adjoint_pairing_check(BaseOp::Mz, KernelSpec::fp(1), 30).is_zero());
        assert!(adjoint_pairing_check(BaseOp::I, KernelSpec::FOCK, 30).is_zero());
    }

    #[test]
    fn wrong_adjoint_is_caught() {
        // the H_p table used in F_p
        let d = pairing_defect(&BaseOp::R0.op(), &adjoint_of(BaseOp::R0, KernelSpec::hp(1)), KernelSpec::fp(1), 5);
        assert!(!d.is_zero());
    }

    #[test]
    fn generic_adjoint_matches_table() {
        for spec in [KernelSpec::FOCK, KernelSpec::hp(3), KernelSpec::fp(3)] {
            for op in BaseOp::ALL {
                let table = adjoint_of(op, spec);
                let generic = adjoint_generic(&op.op(), spec);
                assert_eq!(table.shift(), generic.shift());
                for n in 0..25 {
                    assert_eq!(table.weight(n), generic.weight(n), "{op:?} {spec} n={n}");
                }
            }
        }
    }

    #[test]
    fn composed_r0_star_in_hp() {
        let n = 16;
        for p in 0..=3 {
            let spec = KernelSpec::hp(p);
            let composed = composed_adjoint(BaseOp::R0, spec, n);
            let table = adjoint_of(BaseOp::R0, spec).matrix(n);
            assert_eq!(composed.exact_cols(), n);
            assert!(composed.agrees_on(&table, n));
        }
    }

    #[test]
    fn composed_p0_is_fock() {
        let n = 10;
        let composed = composed_adjoint(BaseOp::R0, KernelSpec::hp(0), n);
        assert!(composed.agrees_on(&BaseOp::I.op().matrix(n), n));
    }

    #[test]
    fn composed_mz_star_in_fp() {
        let n = 12;
        let composed = composed_adjoint(BaseOp::Mz, KernelSpec::fp(1), n);
        for j in 1..composed.exact_cols() {
            let want = powi(&int(j as i64 + 1), 2) / int(j as i64);
            assert_eq!(composed.get(j - 1, j), &want);
        }
    }

    #[test]
    fn commutator_examples() {
        for p in 0..4 {
            assert_eq!(
                commutator_diag_formula(CommutatorPair::R0R0Star, KernelSpec::hp(p), 0),
                powi(&int(4), p as i64)
            );
            assert_eq!(
                commutator_diag_formula(CommutatorPair::MzMzStar, KernelSpec::fp(p), 0),
                -powi(&int(4), p as i64)
            );
            assert_eq!(
                commutator_diag_formula(CommutatorPair::R0R0Star, KernelSpec::fp(p), 0),
                powi(&int(4), -(p as i64))
            );
        }
        assert_eq!(
            commutator_diag_formula(CommutatorPair::MzMzStar, KernelSpec::hp(1), 0),
            ratio(-1, 4)
        );
    }

    #[test]
    fn diagonal_calculus_matches_closed_form() {
        for p in 0..=3 {
            for spec in [KernelSpec::hp(p), KernelSpec::fp(p)] {
                for pair in [CommutatorPair::MzMzStar, CommutatorPair::R0R0Star] {
                    let op = commutator_diag_operator(pair, spec);
                    let first = if spec.space == Space::Fp && pair == CommutatorPair::R0R0Star && p > 0 {
                        1
                    } else {
                        0
                    };
                    for n in first..30 {
                        assert_eq!(op.entry(n), commutator_diag_formula(pair, spec, n), "{spec} {pair:?} {n}");
                    }
                }
            }
        }
        let op = commutator_diag_operator(CommutatorPair::R0R0Star, KernelSpec::fp(1));
        assert!(op.entry(0).is_zero());
    }
}
