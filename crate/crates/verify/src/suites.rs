//! The verification suites run by the `verify` binary.

use halfspin_core::exterior::{self, degree_profile, Parity};
use halfspin_core::field::{is_norm, random_element, random_nonzero};
use halfspin_core::forms::{
    build_psi_delta_k, permute_good_basis, permuted_discriminant, preserves_b, preserves_psi,
    standard_rep_analysis, HermitianData, StandardRepVerdict,
};
use halfspin_core::hodge::{
    build_l, check_commutes_g0, check_term_exchange, hodge_star, starcomps_failures, StarOperator,
};
use halfspin_core::rationality::{
    classify_rationality, flip_weights_check, l_scalars, main_scenario, real_form, realcase_table,
    spin_weights, w_plus_analysis, weights_half_spin, RealForm, RepVerdict, ScenarioOutcome,
};
use halfspin_core::spinrep::{check_equivariance, check_homomorphism, g0_basis, so_decompose, so_generators, SoElement};
use halfspin_core::{Error, FieldElement, LinOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Scenario, Suite};
use crate::report::{Recorder, SuiteReport};
use crate::serial::element_to_strings;

fn fe(x: &FieldElement) -> Value {
    json!(element_to_strings(x))
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "S+",
        Parity::Odd => "S-",
    }
}

fn verdict_json(v: &RepVerdict) -> Value {
    match v {
        RepVerdict::Defined(c) => json!({"defined": true, "witness": fe(c)}),
        RepVerdict::NotDefined(r) => json!({"defined": false, "reason": format!("{r:?}")}),
        RepVerdict::Undetermined => json!({"defined": null}),
    }
}

fn verdict_word(v: &RepVerdict) -> &'static str {
    match v {
        RepVerdict::Defined(_) => "defined",
        RepVerdict::NotDefined(_) => "not defined",
        RepVerdict::Undetermined => "undetermined",
    }
}

/// Runs one suite with its own deterministic random stream.
pub fn run_suite(suite: Suite, sc: &Scenario) -> SuiteReport {
    let mut rec = Recorder::new(suite.name());
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    rng.set_stream(suite as u64);
    let res = match suite {
        Suite::Clifford => clifford(sc, &mut rec),
        Suite::Forms => forms(sc, &mut rec, &mut rng),
        Suite::Lie => lie(sc, &mut rec),
        Suite::Spin => spin(sc, &mut rec, &mut rng),
        Suite::Star => star(sc, &mut rec, &mut rng),
        Suite::L => l_ops(sc, &mut rec),
        Suite::Rationality => rationality(sc, &mut rec),
        Suite::Real => real(sc, &mut rec),
        Suite::Weights => weights(sc, &mut rec),
    };
    if let Err(e) = res {
        rec.check(false, || json!({"error": e.to_string()}));
    }
    rec.finish()
}

fn psi(sc: &Scenario) -> Result<HermitianData, Error> {
    build_psi_delta_k(&sc.tower, sc.n, sc.k, &sc.delta)
}

/// Pairs `(a, r)` allowed by the good-basis construction.
fn all_perms(n: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=k).flat_map(move |a| (0..=n - k).map(move |r| (a, r)))
}

fn clifford(sc: &Scenario, rec: &mut Recorder) -> Result<(), Error> {
    let (t, n) = (&sc.tower, sc.n);
    let dim = 1usize << n;
    let gammas: Vec<LinOp> = (1..=2 * n).map(|j| exterior::gamma(t, j, n)).collect::<Result<_, _>>()?;
    for j in 1..=2 * n {
        for l in j..=2 * n {
            let ac = gammas[j - 1].anticommutator(&gammas[l - 1])?;
            let want = if l == j + n { LinOp::identity(t, dim) } else { LinOp::zero(t, dim, halfspin_core::Linearity::Linear) };
            rec.check(ac == want, || json!({"relation": "anticommutator", "j": j, "l": l}));
        }
    }
    for i in 1..=n {
        let shift = |op: &LinOp| degree_profile(op).into_iter().collect::<Vec<_>>();
        rec.check(shift(&gammas[i - 1]) == vec![1], || json!({"relation": "wedge degree", "i": i}));
        rec.check(shift(&gammas[n + i - 1]) == vec![-1], || json!({"relation": "contraction degree", "i": i}));
    }
    rec.note(format!("{} generators on a space of dimension {dim}", 2 * n));
    Ok(())
}

fn forms(sc: &Scenario, rec: &mut Recorder, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let (t, n, k) = (&sc.tower, sc.n, sc.k);
    let h = psi(sc)?;
    let lambda = h.compatibility_lambda()?;
    rec.check(lambda == -sc.delta.clone(), || json!({"check": "lambda = -delta", "lambda": fe(&lambda)}));
    rec.check(h.dual_form_check()?, || json!({"check": "dual forms proportional"}));
    let j = h.build_j();
    for p in 0..2 * n {
        let q = if p < n { p + n } else { p - n };
        let ok = j.matrix().entry(q, p) == h.coeffs()[p] && j.matrix().nnz() == 2 * n;
        rec.check(ok, || json!({"check": "J on basis", "index": p + 1}));
    }
    let basis = g0_basis(&h)?;
    let ws: Vec<_> = basis.iter().map(|b| b.w_matrix.clone()).collect();
    let pairs: Vec<_> = (0..sc.trials)
        .map(|_| (random_element(t, rng, 6, false), random_element(t, rng, 6, false)))
        .collect();
    let rep = standard_rep_analysis(&h, &ws, &pairs)?;
    rec.check(rep.j_squared_is_lambda, || json!({"check": "J^2 = lambda"}));
    rec.passed(rep.product_checks as u64 - rep.product_failure.is_some() as u64);
    if let Some((a, b)) = &rep.product_failure {
        rec.check(false, || json!({"check": "product identity", "alpha": fe(a), "beta": fe(b)}));
    }
    rec.passed(rep.commute_checks as u64 - rep.commute_failure.is_some() as u64);
    if let Some(idx) = rep.commute_failure {
        let b = &basis[idx];
        rec.check(false, || json!({"check": "J commutes with g0", "family": format!("{:?}", b.family), "i": b.i, "j": b.j}));
    }
    match &rep.verdict {
        StandardRepVerdict::Defined(c) => rec.note(format!("standard representation defined over E0 (lambda = Nm({c}))")),
        StandardRepVerdict::NotDefined(r) => rec.note(format!("standard representation not defined over E0 ({r:?})")),
        StandardRepVerdict::Undetermined => rec.unknown(format!("norm status of lambda = {lambda} undetermined")),
    }
    for (a, r) in all_perms(n, k) {
        let (hp, _) = permute_good_basis(&h, k, a, r)?;
        let closed = permuted_discriminant(&sc.delta, n, k, a, r)?;
        let d = hp.discriminant();
        rec.check(d == closed, || json!({"check": "permuted discriminant", "a": a, "r": r, "got": fe(&d), "want": fe(&closed)}));
        rec.check(hp.compatibility_lambda()? == lambda, || json!({"check": "lambda after permutation", "a": a, "r": r}));
    }
    Ok(())
}

fn lie(sc: &Scenario, rec: &mut Recorder) -> Result<(), Error> {
    let n = sc.n;
    let h = psi(sc)?;
    let basis = g0_basis(&h)?;
    rec.check(basis.len() == 2 * n * n - n, || json!({"check": "basis size", "got": basis.len()}));
    for b in &basis {
        let ce = || json!({"family": format!("{:?}", b.family), "i": b.i, "j": b.j});
        rec.check(preserves_b(&b.w_matrix)?, || json!({"check": "preserves b", "element": ce()}));
        rec.check(preserves_psi(&h, &b.w_matrix), || json!({"check": "preserves psi", "element": ce()}));
        rec.check(so_decompose(&b.w_matrix)? == b.element, || json!({"check": "decomposition", "element": ce()}));
    }
    for (p, x) in basis.iter().enumerate() {
        for y in &basis[p + 1..] {
            let br = x.w_matrix.mul(&y.w_matrix)?.sub(&y.w_matrix.mul(&x.w_matrix)?)?;
            let ok = preserves_b(&br)? && preserves_psi(&h, &br);
            rec.check(ok, || {
                json!({"check": "bracket closure", "x": [format!("{:?}", x.family), x.i, x.j], "y": [format!("{:?}", y.family), y.i, y.j]})
            });
        }
    }
    rec.note(format!("g0 basis of size {}", basis.len()));
    Ok(())
}

fn spin(sc: &Scenario, rec: &mut Recorder, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let (t, n) = (&sc.tower, sc.n);
    let gens: Vec<SoElement> = so_generators(t, n)?
        .iter()
        .map(|g| SoElement::generator(t, g.r, g.s, n))
        .collect::<Result<_, _>>()?;
    let label = |x: &SoElement| {
        let (_, r, s) = &x.terms()[0];
        json!([r, s])
    };
    for x in &gens {
        for v in 1..=2 * n {
            rec.check(check_equivariance(t, x, v)?, || json!({"check": "equivariance", "generator": label(x), "v": v}));
        }
    }
    if n <= 4 {
        for x in &gens {
            for y in &gens {
                rec.check(check_homomorphism(t, x, y)?, || json!({"check": "homomorphism", "x": label(x), "y": label(y)}));
            }
        }
        rec.note("homomorphism checked on all generator pairs");
    } else {
        for _ in 0..sc.trials {
            let (x, y) = (&gens[rng.gen_range(0..gens.len())], &gens[rng.gen_range(0..gens.len())]);
            rec.check(check_homomorphism(t, x, y)?, || json!({"check": "homomorphism", "x": label(x), "y": label(y)}));
        }
        rec.note(format!("homomorphism checked on {} random generator pairs", sc.trials));
    }
    let basis = g0_basis(&psi(sc)?)?;
    for _ in 0..sc.trials.min(basis.len() * basis.len()) {
        let (x, y) = (&basis[rng.gen_range(0..basis.len())], &basis[rng.gen_range(0..basis.len())]);
        rec.check(check_homomorphism(t, &x.element, &y.element)?, || {
            json!({"check": "homomorphism on g0", "x": [format!("{:?}", x.family), x.i, x.j], "y": [format!("{:?}", y.family), y.i, y.j]})
        });
    }
    Ok(())
}

fn star(sc: &Scenario, rec: &mut Recorder, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let (t, n) = (&sc.tower, sc.n);
    let h = psi(sc)?;
    let st = StarOperator::from_hermitian(&h)?;
    for k in 0..=n {
        rec.check(st.check_square(k)?, || json!({"check": "star squared", "form": "psi", "k": k}));
    }
    for trial in 0..sc.trials {
        let w1: Vec<_> = (0..n).map(|_| random_nonzero(t, rng, 6, true)).collect();
        let s = hodge_star(t, &w1)?;
        for k in 0..=n {
            let ok = s.check_square(k)?;
            rec.check(ok, || {
                json!({"check": "star squared", "trial": trial, "k": k, "coefficients": w1.iter().map(fe).collect::<Vec<_>>()})
            });
        }
    }
    for k in 0..=n {
        let fails = starcomps_failures(&h, k)?;
        rec.check(fails.is_empty(), || {
            let f = &fails[0];
            json!({"check": "star/Clifford identity", "identity": format!("{:?}", f.identity), "i": f.i, "k": f.k})
        });
    }
    Ok(())
}

fn l_ops(sc: &Scenario, rec: &mut Recorder) -> Result<(), Error> {
    let (n, k) = (sc.n, sc.k);
    let m = n / 2;
    let h = psi(sc)?;
    let basis = g0_basis(&h)?;
    let lambda = h.compatibility_lambda()?;
    let (plus, minus) = l_scalars(m, &h.discriminant(), &lambda);
    for p in [Parity::Even, Parity::Odd] {
        let l = build_l(&h, p)?;
        let name = parity_name(p);
        let want = if p == Parity::Even { &plus } else { &minus };
        rec.check(&l.scalar_expected == want, || json!({"check": "expected scalar", "L": name}));
        rec.check(l.check_square()?, || json!({"check": "L^2", "L": name, "scalar": fe(&l.scalar_expected)}));
        let fail = check_commutes_g0(&l, &basis)?;
        rec.check(fail.is_none(), || {
            let f = fail.as_ref().unwrap();
            json!({"check": "commutes with g0", "L": name, "family": format!("{:?}", f.family), "i": f.i, "j": f.j})
        });
        let fail = check_term_exchange(&l, &basis)?;
        rec.check(fail.is_none(), || {
            let f = fail.as_ref().unwrap();
            json!({"check": "term exchange", "L": name, "family": format!("{:?}", f.family), "i": f.i, "j": f.j})
        });
        rec.note(format!("{name}: L^2 = {}", l.scalar_expected));
    }
    for (a, r) in all_perms(n, k) {
        let (hp, _) = permute_good_basis(&h, k, a, r)?;
        for p in [Parity::Even, Parity::Odd] {
            let l = build_l(&hp, p)?;
            rec.check(l.check_square()?, || json!({"check": "L^2 after permutation", "a": a, "r": r, "L": parity_name(p)}));
        }
    }
    Ok(())
}

fn rationality(sc: &Scenario, rec: &mut Recorder) -> Result<(), Error> {
    let (t, n, k) = (&sc.tower, sc.n, sc.k);
    let h = psi(sc)?;
    let direct = classify_rationality(n / 2, &h.discriminant(), &h.compatibility_lambda()?, is_norm)?;
    rec.note(format!(
        "original basis: case {}, S+ {}, S- {}",
        direct.case_label.roman(),
        verdict_word(&direct.s_plus),
        verdict_word(&direct.s_minus)
    ));
    rec.passed(1);
    for (name, v) in [("S+", &direct.s_plus), ("S-", &direct.s_minus)] {
        if v.is_undetermined() {
            rec.unknown(format!("original basis: norm status for {name} undetermined"));
        }
    }
    let Some((a, r)) = sc.permutation_or_default() else {
        rec.unknown("no admissible permutation");
        return Ok(());
    };
    let rep = main_scenario(t, n, k, &sc.delta, a, r)?;
    match &rep.outcome {
        ScenarioOutcome::Pipeline(p) => {
            rec.check(p.d_prime == p.d_prime_closed_form, || json!({"check": "permuted discriminant", "a": a, "r": r}));
            rec.check(p.l_square_ok, || json!({"check": "L^2", "scalar": fe(&p.l_scalar)}));
            rec.check(p.commute_failure.is_none(), || json!({"check": "commutes with g0", "failure": format!("{:?}", p.commute_failure)}));
            rec.check(p.transported_to == Parity::Even, || json!({"check": "transport lands on S+", "got": parity_name(p.transported_to)}));
            match &p.verdict {
                RepVerdict::Undetermined => rec.unknown("norm status of the L^2 scalar undetermined"),
                v => {
                    rec.check(v.is_defined(), || json!({"check": "S+ defined", "verdict": verdict_json(v)}));
                }
            }
            rec.note(format!(
                "(a, r) = ({a}, {r}); {} swaps; L on {}(e') with L^2 = {}; S+(e) {}",
                p.perm.swap_count(),
                parity_name(p.l_parity),
                p.l_scalar,
                verdict_word(&p.verdict)
            ));
            // Same transported verdict for every admissible (a, r).
            for (a2, r2) in all_perms(n, k).filter(|&(a2, r2)| (a2 + n - k - r2) % 2 == 0) {
                let other = main_scenario(t, n, k, &sc.delta, a2, r2)?;
                let same = other.s_plus_verdict().is_defined() == rep.s_plus_verdict().is_defined();
                rec.check(same, || json!({"check": "permutation invariance", "a": a2, "r": r2}));
            }
        }
        ScenarioOutcome::Fallback { reason, verdict } => {
            rec.check(verdict == &direct, || json!({"check": "fallback matches the original-basis criterion"}));
            rec.note(format!("pipeline not applicable ({reason}); the original-basis verdict stands"));
        }
    }
    for r in &rep.real_forms {
        rec.note(format!("embedding {}: {:?}", r.embedding, r.classification));
    }
    Ok(())
}

fn real(sc: &Scenario, rec: &mut Recorder) -> Result<(), Error> {
    let (t, n, k) = (&sc.tower, sc.n, sc.k);
    for e in 1..=t.num_embeddings() {
        let r = real_form(t, n, k, &sc.delta, e)?;
        let want_sig = match r.classification {
            RealForm::SoStar(_) => (n, n),
            RealForm::SoPq(p, q) => (p, q),
        };
        rec.check(r.signature_psi == want_sig, || {
            json!({"check": "signature", "embedding": e, "got": [r.signature_psi.0, r.signature_psi.1]})
        });
        rec.note(format!("embedding {e}: {:?}, psi signature {:?}", r.classification, r.signature_psi));
    }
    let w = w_plus_analysis(n, k)?;
    rec.check(w.fixed_by_j, || json!({"check": "W(+1) basis fixed by J"}));
    rec.check(w.orthogonal, || json!({"check": "W(+1) basis orthogonal"}));
    let two = halfspin_core::Tower::imaginary_quadratic(-1)?.int(2);
    rec.check(w.diagonal.iter().all(|x| *x == two || *x == -two.clone()), || json!({"check": "diagonal entries are +-2"}));
    rec.check(w.signature == (2 * n - 2 * k, 2 * k), || json!({"check": "W(+1) signature", "got": [w.signature.0, w.signature.1]}));
    rec.note(format!("W(+1) signature {:?}", w.signature));
    if n % 2 == 0 {
        for kk in 0..=n {
            for row in realcase_table(n / 2, kk)? {
                rec.check(row.agrees(), || json!({"check": "real case table", "m": n / 2, "k": kk, "form": format!("{:?}", row.real_form)}));
            }
        }
    }
    Ok(())
}

fn weights(sc: &Scenario, rec: &mut Recorder) -> Result<(), Error> {
    let (t, n) = (&sc.tower, sc.n);
    for p in [Parity::Even, Parity::Odd] {
        rec.check(spin_weights(t, n, p)? == weights_half_spin(n, p)?, || json!({"check": "torus weights", "space": parity_name(p)}));
    }
    for mask in 0u32..1 << n {
        let subset: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let f = flip_weights_check(n, &subset)?;
        rec.check(f.agrees_with_rule, || json!({"check": "flip parity", "subset": subset}));
    }
    if let Some((a, r)) = sc.permutation_or_default() {
        let (_, perm) = permute_good_basis(&psi(sc)?, sc.k, a, r)?;
        let f = flip_weights_check(n, &perm.swapped)?;
        rec.note(format!("swap set {:?} maps S+ weights onto {}", perm.swapped, parity_name(f.image)));
    }
    Ok(())
}
