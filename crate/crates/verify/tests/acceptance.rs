//! Acceptance criteria A1-A10. Every comparison is exact; a criterion
//! passes only if all of its checks hold. Prints one line per criterion
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use halfspin_core::exterior::{self, Parity};
use halfspin_core::field::{random_element, random_nonzero};
use halfspin_core::forms::{build_psi_delta_k, permute_good_basis, standard_rep_analysis, HermitianData};
use halfspin_core::hodge::{build_l, check_commutes_g0, check_starcomps, hodge_star, StarOperator};
use halfspin_core::rationality::{
    flip_weights_check, main_scenario, real_form, realcase_table, w_plus_analysis, RealForm,
    RepVerdict, ScenarioOutcome,
};
use halfspin_core::spinrep::{check_equivariance, check_homomorphism, g0_basis, so_generators, SoElement};
use halfspin_core::{Error, LinOp, Linearity, Tower};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn tower() -> Tower {
    Tower::biquadratic(2, -1).expect("Q(sqrt2)(i)")
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn a1() -> Outcome {
    let start = Instant::now();
    let t = tower();
    let delta = t.sqrt_m1().map_err(e)?;
    let rep = main_scenario(&t, 6, 1, &delta, 1, 4).map_err(e)?;
    let ScenarioOutcome::Pipeline(p) = &rep.outcome else {
        return Err("preconditions rejected".into());
    };
    let delta_sq = &delta * &delta;
    ensure(p.l_parity == Parity::Odd, || "L does not act on S-(e')".into())?;
    ensure(p.l_scalar == delta_sq, || format!("L^2 scalar {} != delta^2", p.l_scalar))?;
    ensure(p.l_square_ok, || "L^2 != delta^2 Id".into())?;
    // Independent rebuild of the permuted form, L and the g0 basis.
    let (hp, _) = permute_good_basis(&build_psi_delta_k(&t, 6, 1, &delta).map_err(e)?, 1, 1, 4).map_err(e)?;
    let l = build_l(&hp, Parity::Odd).map_err(e)?;
    ensure(l.op.dim() == 32, || format!("block dimension {}", l.op.dim()))?;
    let sq = l.op.compose(&l.op).map_err(e)?;
    ensure(sq == LinOp::scalar(&delta_sq, 32), || "rebuilt L^2 != delta^2 Id".into())?;
    let basis = g0_basis(&hp).map_err(e)?;
    ensure(basis.len() == 66, || format!("g0 basis size {}", basis.len()))?;
    let fail = check_commutes_g0(&l, &basis).map_err(e)?;
    ensure(fail.is_none(), || format!("rebuilt L fails to commute: {fail:?}"))?;
    ensure(p.commute_checks == 66 && p.commute_failure.is_none(), || {
        format!("{} commutation checks, failure {:?}", p.commute_checks, p.commute_failure)
    })?;
    ensure(p.transported_to == Parity::Even, || "verdict not transported to S+(e)".into())?;
    match &p.verdict {
        RepVerdict::Defined(w) => ensure(*w == delta, || format!("witness {w}"))?,
        v => return Err(format!("verdict {v:?}")),
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(60), || format!("took {el:?}"))?;
    Ok(format!("L-(e')^2 = delta^2 on 32 dims, 66 commutations, S+(e) defined with witness delta ({el:.1?})"))
}

fn a2() -> Outcome {
    let t = tower();
    let mut count = 0;
    for n in [2usize, 4, 6] {
        let dim = 1 << n;
        let g: Vec<LinOp> = (1..=2 * n).map(|j| exterior::gamma(&t, j, n)).collect::<Result<_, _>>().map_err(e)?;
        for j in 1..=2 * n {
            for l in 1..=2 * n {
                let ac = g[j - 1].anticommutator(&g[l - 1]).map_err(e)?;
                let want = if j + n == l || l + n == j {
                    LinOp::identity(&t, dim)
                } else {
                    LinOp::zero(&t, dim, Linearity::Linear)
                };
                ensure(ac == want, || format!("n={n} j={j} l={l}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} anticommutators"))
}

fn a3() -> Outcome {
    let t = tower();
    let delta = t.sqrt_m1().map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    for n in [2usize, 4, 6] {
        for k in 1..=n {
            let st = StarOperator::from_hermitian(&build_psi_delta_k(&t, n, k, &delta).map_err(e)?).map_err(e)?;
            for deg in 0..=n {
                ensure(st.check_square(deg).map_err(e)?, || format!("psi n={n} k={k} degree {deg}"))?;
                count += 1;
            }
        }
        for trial in 0..100 {
            let w1: Vec<_> = (0..n).map(|_| random_nonzero(&t, &mut rng, 9, true)).collect();
            let st = hodge_star(&t, &w1).map_err(e)?;
            for deg in 0..=n {
                ensure(st.check_square(deg).map_err(e)?, || format!("random n={n} trial {trial} degree {deg}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} degree-wise identities"))
}

fn a4() -> Outcome {
    let t = tower();
    let delta = t.sqrt_m1().map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for n in [2usize, 4, 6] {
        let mut forms = Vec::new();
        for k in 1..=n {
            forms.push(build_psi_delta_k(&t, n, k, &delta).map_err(e)?);
        }
        for _ in 0..3 {
            let half: Vec<_> = (0..n).map(|_| random_nonzero(&t, &mut rng, 7, true)).collect();
            let lambda = random_nonzero(&t, &mut rng, 7, true);
            forms.push(HermitianData::from_half(&t, &half, &lambda).map_err(e)?);
        }
        for (idx, h) in forms.iter().enumerate() {
            for k in 0..=n {
                ensure(check_starcomps(h, k).map_err(e)?, || format!("n={n} form {idx} k={k}"))?;
                count += 4 * n;
            }
        }
    }
    Ok(format!("{count} operator identities"))
}

fn a5() -> Outcome {
    let start = Instant::now();
    let t = tower();
    let (mut h1, mut h2) = (0usize, 0usize);
    for n in [2usize, 4, 6] {
        let gens: Vec<SoElement> = so_generators(&t, n)
            .map_err(e)?
            .iter()
            .map(|g| SoElement::generator(&t, g.r, g.s, n))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        for x in &gens {
            for v in 1..=2 * n {
                ensure(check_equivariance(&t, x, v).map_err(e)?, || format!("H2 n={n} {:?} v={v}", x.terms()))?;
                h2 += 1;
            }
            for y in &gens {
                ensure(check_homomorphism(&t, x, y).map_err(e)?, || format!("H1 n={n} {:?} {:?}", x.terms(), y.terms()))?;
                h1 += 1;
            }
        }
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(300), || format!("full sweep took {el:?}"))?;
    Ok(format!("full sweep: {h1} homomorphism and {h2} equivariance checks ({el:.1?})"))
}

fn a6() -> Outcome {
    let t = tower();
    let delta = t.sqrt_m1().map_err(e)?;
    let mut count = 0;
    for n in [2usize, 4, 6] {
        for k in 1..=n {
            let h = build_psi_delta_k(&t, n, k, &delta).map_err(e)?;
            for a in 0..=k {
                for r in 0..=n - k {
                    let (hp, _) = permute_good_basis(&h, k, a, r).map_err(e)?;
                    let lambda = hp.compatibility_lambda().map_err(e)?;
                    // (−1)^m D belongs to L+ when m is even and to L- when m is odd.
                    let m = n / 2;
                    let sd = if m % 2 == 0 { hp.discriminant() } else { -hp.discriminant() };
                    let sdl = &sd * &lambda;
                    let (plus, minus) = if m % 2 == 0 { (sd, sdl) } else { (sdl, sd) };
                    for (p, want) in [(Parity::Even, plus), (Parity::Odd, minus)] {
                        let l = build_l(&hp, p).map_err(e)?;
                        let sq = l.op.compose(&l.op).map_err(e)?;
                        ensure(sq == LinOp::scalar(&want, l.op.dim()), || {
                            format!("n={n} k={k} a={a} r={r} {p:?}")
                        })?;
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} squares"))
}

fn a7() -> Outcome {
    let t = tower();
    let delta = t.sqrt_m1().map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs_total = 0;
    for n in [2usize, 4, 6] {
        let h = build_psi_delta_k(&t, n, 1, &delta).map_err(e)?;
        let ws: Vec<_> = g0_basis(&h).map_err(e)?.into_iter().map(|b| b.w_matrix).collect();
        let pairs: Vec<_> = (0..100)
            .map(|_| (random_element(&t, &mut rng, 8, false), random_element(&t, &mut rng, 8, false)))
            .collect();
        let rep = standard_rep_analysis(&h, &ws, &pairs).map_err(e)?;
        ensure(rep.all_checks_pass(), || format!("n={n}: {rep:?}"))?;
        ensure(rep.commute_checks == 2 * n * n - n, || format!("n={n}: {} commutation checks", rep.commute_checks))?;
        ensure(h.build_j().realify().rows() == 4 * n, || "restriction of scalars dimension".into())?;
        pairs_total += rep.product_checks;
    }
    Ok(format!("J^2 = lambda, J commutes with g0 on Res W, {pairs_total} product identities"))
}

fn a8() -> Outcome {
    for mask in 0u32..64 {
        let subset: Vec<usize> = (1..=6).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let f = flip_weights_check(6, &subset).map_err(e)?;
        ensure(f.agrees_with_rule, || format!("subset {subset:?}"))?;
    }
    Ok("64 subsets".into())
}

fn a9() -> Outcome {
    let t = tower();
    let delta = t.sqrt_m1().map_err(e)?;
    let r1 = real_form(&t, 6, 1, &delta, 1).map_err(e)?;
    ensure(r1.classification == RealForm::SoStar(12), || format!("{r1:?}"))?;
    let r2 = real_form(&t, 6, 1, &delta, 2).map_err(e)?;
    ensure(r2.classification == RealForm::SoPq(10, 2), || format!("{r2:?}"))?;
    let w = w_plus_analysis(6, 1).map_err(e)?;
    let q = Tower::imaginary_quadratic(-1).map_err(e)?;
    let two = q.int(2);
    ensure(w.fixed_by_j && w.orthogonal, || "W(+1) basis".into())?;
    ensure(w.diagonal.iter().all(|x| *x == two || *x == -two.clone()), || "diagonal entries".into())?;
    ensure(w.signature == (10, 2), || format!("signature {:?}", w.signature))?;
    Ok("SO*(12) at embedding 1, SO(10,2) at embedding 2, W(+1) signature (10, 2)".into())
}

fn a10() -> Outcome {
    let mut rows = 0;
    for m in 1..=3 {
        for k in 0..=2 * m {
            let [star, pq] = realcase_table(m, k).map_err(e)?;
            ensure(star.expected == (true, false) && star.agrees(), || format!("SO* m={m} k={k}: {star:?}"))?;
            let both = k % 2 == m % 2;
            ensure(pq.expected == (both, both) && pq.agrees(), || format!("SO(p,q) m={m} k={k}: {pq:?}"))?;
            rows += 2;
        }
    }
    Ok(format!("{rows} rows"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("{name} PASS: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
