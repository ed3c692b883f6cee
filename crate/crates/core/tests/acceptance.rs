//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::Instant;

use isr_core::exact::{bareiss_det, char_poly_faddeev, inverse, RatFun};
use isr_core::generate::{
    perturb, planted_instance, random_graph, random_subset, random_symmetric_rational, rng, PlantedInstance,
    PlantedKind,
};
use isr_core::exact::Poly;
use isr_core::isr::{isr_exact, reduced_char_poly, reduced_spectrum_exact, spectral_identity, PartitionedOperator};
use isr_core::lift::{lift_symmetry, LiftedSymmetry};
use isr_core::symmetry::{
    check_isr_commutation, check_latent_symmetry, eigenvector_dichotomy, find_cospectral_pairs, sample_lambdas,
    swap_automorphism, AutomorphismSearch, DichotomyOptions, EigvecClass,
};
use isr_core::{Complex64, Matrix, Rational, Ring};
use rand::Rng;

const TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// `det(λ0 I − R(λ0))` with R evaluated exactly at a rational point.
fn reduced_det_at(h: &Matrix<Rational>, subset: &[usize], lambda: &Rational) -> Option<Rational> {
    let comp: Vec<usize> = (0..h.rows()).filter(|i| !subset.contains(i)).collect();
    let h_ss = h.submatrix(subset, subset);
    let r = if comp.is_empty() {
        h_ss
    } else {
        let h_cc = h.submatrix(&comp, &comp);
        let shifted = Matrix::from_fn(comp.len(), comp.len(), |i, j| {
            let d = if i == j { lambda.clone() } else { Rational::zero() };
            d - h_cc[(i, j)].clone()
        });
        let inv = inverse(&shifted).ok()?;
        let tail = h.submatrix(subset, &comp).try_mul(&inv).ok()?.try_mul(&h.submatrix(&comp, subset)).ok()?;
        h_ss.try_add(&tail).ok()?
    };
    let s = subset.len();
    let m = Matrix::from_fn(s, s, |i, j| {
        let d = if i == j { lambda.clone() } else { Rational::zero() };
        d - r[(i, j)].clone()
    });
    bareiss_det(&m).ok()
}

fn criterion_spectral_identity() -> Outcome {
    let mut r = rng(1);
    let mut ok = 0;
    let total = 200;
    for case in 0..total {
        let n = r.random_range(2..=8);
        let h = random_symmetric_rational(n, &mut r);
        let subset = random_subset(n, n, &mut r);
        let p = PartitionedOperator::new(h.clone(), subset.clone(), 0.0).unwrap();
        let id = spectral_identity(&p).unwrap();

        // independent characteristic polynomials
        let ch = char_poly_faddeev(&h).unwrap();
        let comp = p.complement().to_vec();
        let cc = char_poly_faddeev(&h.submatrix(&comp, &comp)).unwrap();
        let symbolic = id.holds
            && id.char_h == ch
            && id.char_complement == cc
            && RatFun::from_poly(ch.clone()) == RatFun::from_poly(cc.clone()) * id.reduced_det.clone();

        // pointwise at rational points away from σ(H_S̄S̄)
        let mut pointwise = true;
        let mut tried = 0;
        for k in 0..20 {
            if tried == 4 {
                break;
            }
            let x = Rational::new(2 * k + 1, 7);
            let cc_x = cc.eval(&x);
            if cc_x.is_zero() {
                continue;
            }
            tried += 1;
            match reduced_det_at(&h, &subset, &x) {
                Some(d) => pointwise &= ch.eval(&x) == cc_x * d,
                None => pointwise = false,
            }
        }
        if symbolic && pointwise && tried > 0 {
            ok += 1;
        } else {
            println!("  identity failure in case {case}: n={n} S={subset:?}");
        }
    }
    outcome(ok == total, format!("{ok}/{total} random rational matrices"))
}

struct PlantedCase {
    inst: PlantedInstance,
    certified: bool,
    lift: Result<LiftedSymmetry<Complex64>, isr_core::Error>,
}

fn planted_cases() -> Vec<PlantedCase> {
    let mut r = rng(2);
    let kinds = [PlantedKind::Permutation, PlantedKind::Involution, PlantedKind::DiagonalUnitary];
    (0..100)
        .map(|k| {
            let n = r.random_range(3..=20);
            let inst = planted_instance(n, 6, kinds[k % 3], &mut r);
            let p = PartitionedOperator::new(inst.h.clone(), inst.subset.clone(), TOL).unwrap();
            let certified = check_latent_symmetry(&p, &inst.t, None, TOL).unwrap().verdict;
            let lift = lift_symmetry(&p, &inst.t, None, TOL);
            PlantedCase { inst, certified, lift }
        })
        .collect()
}

fn lift_residuals(l: &LiftedSymmetry<Complex64>) -> f64 {
    l.report.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
}

fn criterion_planted_round_trip(cases: &[PlantedCase]) -> Outcome {
    let mut certified = 0;
    let mut lifted = 0;
    let mut worst = 0.0f64;
    for (k, c) in cases.iter().enumerate() {
        certified += c.certified as usize;
        match &c.lift {
            Ok(l) => {
                let w = lift_residuals(l);
                worst = worst.max(w);
                if w <= 1e-9 {
                    lifted += 1;
                } else {
                    println!("  case {k}: residual {w:e}");
                }
            }
            Err(e) => println!("  case {k}: lift failed: {e}"),
        }
    }
    let n = cases.len();
    outcome(
        certified == n && lifted == n,
        format!("certified {certified}/{n}, lifted within 1e-9 {lifted}/{n}, worst residual {worst:.2e}"),
    )
}

struct Control {
    certified: bool,
    max_sampled: f64,
    verdict_kmax_2n: bool,
}

fn negative_controls() -> Vec<Control> {
    let mut r = rng(3);
    let kinds = [PlantedKind::Permutation, PlantedKind::Involution, PlantedKind::DiagonalUnitary];
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < 100 {
        let n = r.random_range(4..=20);
        let inst = planted_instance(n, 6, kinds[k % 3], &mut r);
        k += 1;
        // a 1×1 T commutes with anything
        if inst.subset.len() < 2 {
            continue;
        }
        let t = perturb(&inst.t, 1e-3, &mut r);
        let p = PartitionedOperator::new(inst.h.clone(), inst.subset.clone(), TOL).unwrap();
        let certified = check_latent_symmetry(&p, &t, None, TOL).unwrap().verdict;
        let verdict_kmax_2n = check_latent_symmetry(&p, &t, Some(2 * n), TOL).unwrap().verdict;
        let samples = sample_lambdas(&p, 10, out.len() as u64);
        let max_sampled = check_isr_commutation(&p, &t, &samples, TOL).unwrap().max_residual;
        out.push(Control { certified, max_sampled, verdict_kmax_2n });
    }
    out
}

fn criterion_sampled_equivalence(cases: &[PlantedCase], controls: &[Control]) -> Outcome {
    let mut ok = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    for (k, c) in cases.iter().enumerate().filter(|(_, c)| c.certified) {
        total += 1;
        let p = PartitionedOperator::new(c.inst.h.clone(), c.inst.subset.clone(), TOL).unwrap();
        let samples = sample_lambdas(&p, 10, 100 + k as u64);
        let cert = check_isr_commutation(&p, &c.inst.t, &samples, TOL).unwrap();
        worst = worst.max(cert.max_residual);
        if cert.max_residual <= 1e-8 {
            ok += 1;
        }
    }
    let rejected = controls
        .iter()
        .filter(|c| !c.certified && c.max_sampled > 1e-5)
        .count();
    let smallest = controls.iter().map(|c| c.max_sampled).fold(f64::INFINITY, f64::min);
    outcome(
        ok == total && total > 0 && rejected == controls.len(),
        format!(
            "certified commute at samples {ok}/{total} (worst {worst:.2e}); controls rejected {rejected}/{} (smallest max residual {smallest:.2e})",
            controls.len()
        ),
    )
}

fn criterion_dichotomy(cases: &[PlantedCase]) -> Outcome {
    let mut checked = 0;
    let mut good = 0;
    let mut sub = 0;
    let mut sub_good = 0;
    let mut record = |inst: &PlantedInstance| {
        let p = PartitionedOperator::new(inst.h.clone(), inst.subset.clone(), TOL).unwrap();
        let rep = eigenvector_dichotomy(&p, &inst.t, DichotomyOptions::default()).unwrap();
        if rep.degenerate {
            return;
        }
        checked += 1;
        let neither = rep.count(|c| matches!(c, EigvecClass::Neither { .. }));
        if neither == 0 && !rep.falsified {
            good += 1;
        }
        if rep.disjoint_spectra && rep.t_simple {
            sub += 1;
            if rep.count(|c| matches!(c, EigvecClass::Fulfills { .. })) == rep.entries.len() {
                sub_good += 1;
            }
        }
    };
    for c in cases.iter().filter(|c| c.certified) {
        record(&c.inst);
    }
    // extra instances aimed at the disjoint-spectra, simple-T sub-family
    let mut r = rng(4);
    let mut extra = 0;
    while extra < 40 {
        let n = r.random_range(3..=12);
        let inst = planted_instance(n, 4, PlantedKind::DiagonalUnitary, &mut r);
        record(&inst);
        extra += 1;
    }
    outcome(
        checked > 0 && good == checked && sub > 0 && sub_good == sub,
        format!("nondegenerate classified (a)/(b) {good}/{checked}; disjoint-spectra simple-T all (a) {sub_good}/{sub}"),
    )
}

fn criterion_proof_steps(cases: &[PlantedCase]) -> Outcome {
    let mut ok = 0;
    let mut total = 0;
    for (k, c) in cases.iter().enumerate() {
        let Ok(l) = &c.lift else { continue };
        total += 1;
        let b = &l.bundle;
        let spec = l.report.spectrum_deviation.as_ref().map(|r| r.value).unwrap_or(f64::INFINITY);
        let pass = b.generator_error <= 1e-9
            && b.cross_overlap <= 1e-9
            && b.residual_on_s <= 1e-9
            && b.total_dim() == c.inst.h.rows()
            && spec <= 1e-8;
        if pass {
            ok += 1;
        } else {
            println!(
                "  case {k}: generators {:.1e}, overlap {:.1e}, on S {:.1e}, dims {} of {}, spectrum {spec:.1e}",
                b.generator_error,
                b.cross_overlap,
                b.residual_on_s,
                b.total_dim(),
                c.inst.h.rows()
            );
        }
    }
    outcome(ok == total && total == cases.len(), format!("{ok}/{total} lifts (of {})", cases.len()))
}

fn criterion_micro_example() -> Outcome {
    let q = |v: i64| Rational::from_i64(v);
    let p_mat = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
    let p1 = PartitionedOperator::new(p_mat.clone(), vec![0], 0.0).unwrap();
    let r = isr_exact(&p1).unwrap();
    let one_over_lambda = RatFun::new(Poly::constant(q(1)), Poly::lambda());
    let reduction = r.rows() == 1 && r[(0, 0)] == one_over_lambda && r[(0, 0)].to_string() == "1 / λ";
    let spectrum = reduced_spectrum_exact(&p1).unwrap();
    let spec_ok = reduced_char_poly(&p1).unwrap() == Poly::from_roots(&[q(-1), q(1)])
        && spectrum.len() == 2 && (spectrum[0] + 1.0).abs() < 1e-15 && (spectrum[1] - 1.0).abs() < 1e-15;
    let p2 = PartitionedOperator::new(p_mat.clone(), vec![0, 1], 0.0).unwrap();
    let lift_ok = matches!(lift_symmetry(&p2, &p_mat, None, 0.0), Ok(l) if l.q == p_mat);
    outcome(
        reduction && spec_ok && lift_ok,
        format!("reduction [[1 / λ]]: {reduction}, spectrum {spectrum:?}: {spec_ok}, lift Q = P: {lift_ok}"),
    )
}

fn criterion_truncation(cases: &[PlantedCase], controls: &[Control]) -> Outcome {
    let mut agree = 0;
    for c in cases {
        let p = PartitionedOperator::new(c.inst.h.clone(), c.inst.subset.clone(), TOL).unwrap();
        let long = check_latent_symmetry(&p, &c.inst.t, Some(2 * p.dim()), TOL).unwrap().verdict;
        agree += (long == c.certified) as usize;
    }
    agree += controls.iter().filter(|c| c.verdict_kmax_2n == c.certified).count();
    let total = cases.len() + controls.len();
    outcome(agree == total, format!("verdicts agree on {agree}/{total} instances"))
}

/// Exhaustive search for an automorphism mapping `u` to `v`.
fn oracle_similar(h: &Matrix<Rational>, u: usize, v: usize) -> bool {
    fn consistent(h: &Matrix<Rational>, k: usize, perm: &[usize]) -> bool {
        (0..=k).all(|j| h[(k, j)] == h[(perm[k], perm[j])])
    }
    fn go(h: &Matrix<Rational>, k: usize, perm: &mut [usize], used: &mut [bool], fixed: usize) -> bool {
        if k == perm.len() {
            return true;
        }
        if k == fixed {
            return consistent(h, k, perm) && go(h, k + 1, perm, used, fixed);
        }
        for w in 0..perm.len() {
            if used[w] {
                continue;
            }
            perm[k] = w;
            if consistent(h, k, perm) {
                used[w] = true;
                if go(h, k + 1, perm, used, fixed) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    let n = h.rows();
    let mut perm = vec![0; n];
    let mut used = vec![false; n];
    perm[u] = v;
    used[v] = true;
    go(h, 0, &mut perm, &mut used, u)
}

fn criterion_cospectral_scan() -> Outcome {
    let mut r = rng(5);
    let mut reported = 0;
    let mut reported_ok = 0;
    let mut similar = 0;
    let mut similar_found = 0;
    let mut latent_only = 0;
    for g in 0..500 {
        let n = r.random_range(2..=9);
        let prob = r.random_range(0.2..0.8);
        let h = random_graph(n, prob, &mut r);
        let pairs = find_cospectral_pairs(&h, 0.0).unwrap();
        for &(u, v) in &pairs {
            reported += 1;
            let p = PartitionedOperator::new(h.clone(), vec![u, v], 0.0).unwrap();
            let swap = Matrix::from_rows(vec![vec![Rational::zero(), Rational::one()], vec![Rational::one(), Rational::zero()]])
                .unwrap();
            let cert = check_latent_symmetry(&p, &swap, None, 0.0).unwrap();
            reported_ok += cert.verdict as usize;
            if swap_automorphism(&h, u, v, 9, 0.0) == AutomorphismSearch::NotFound && !oracle_similar(&h, u, v) {
                latent_only += 1;
                println!(
                    "  graph {g} (n={n}): latent-only pair ({}, {}), power-block residual {:e} for k ≤ {}",
                    u + 1,
                    v + 1,
                    cert.max_residual,
                    cert.k_max.unwrap_or(0)
                );
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if oracle_similar(&h, u, v) {
                    similar += 1;
                    similar_found += pairs.contains(&(u, v)) as usize;
                }
            }
        }
    }
    outcome(
        reported_ok == reported && similar_found == similar,
        format!(
            "reported pairs certified {reported_ok}/{reported}; automorphic pairs reported {similar_found}/{similar}; latent-only {latent_only}"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let mut all = true;
    let mut report = |id: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "{} [{id}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    };

    report(1, "exact spectral identity", &mut criterion_spectral_identity);
    let cases = planted_cases();
    let controls = negative_controls();
    report(2, "planted symmetry round trip", &mut || criterion_planted_round_trip(&cases));
    report(3, "sampled reduction commutation", &mut || criterion_sampled_equivalence(&cases, &controls));
    report(4, "eigenvector dichotomy", &mut || criterion_dichotomy(&cases));
    report(5, "lift construction checks", &mut || criterion_proof_steps(&cases));
    report(6, "exchange matrix example", &mut criterion_micro_example);
    report(7, "power truncation soundness", &mut || criterion_truncation(&cases, &controls));
    report(8, "cospectral scan", &mut criterion_cospectral_scan);

    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
