//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use aklt_hqmm::channels::aklt_channel;
use aklt_hqmm::cli::empirical_distribution;
use aklt_hqmm::hqmm::{GenerativeTriplet, ObservableWord};
use aklt_hqmm::operators::{partial_trace, von_neumann_entropy, ComplexMatrix};
use aklt_hqmm::transitions::{
    bell_states, e_h, e_h_dual, hidden_expectation, projection_p, symmetric_projector, v_isometry, w_isometry,
};
use aklt_hqmm::{oracle_mps, random, spt, Complex64};

const SEED: u64 = 20_251_014;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn isometry_identities() -> Verdict {
    let i2 = ComplexMatrix::identity(2);
    let v = v_isometry();
    let w = w_isometry();
    let rv = (&v.matrix().dagger() * v.matrix()).max_abs_diff(&i2);
    let rw = (&w.matrix().dagger() * w.matrix()).max_abs_diff(&i2);
    verdict(rv <= 1e-12 && rw <= 1e-12, format!("V†V {rv:.1e}, W†W {rw:.1e} (tol 1e-12)"))
}

fn projection_identities() -> Verdict {
    let p = projection_p();
    let r1 = (&p * &p.dagger()).max_abs_diff(&ComplexMatrix::identity(3));
    let r2 = (&p.dagger() * &p).max_abs_diff(&symmetric_projector());
    verdict(r1 <= 1e-12 && r2 <= 1e-12, format!("PP†−I {r1:.1e}, P†P−Πsym {r2:.1e} (tol 1e-12)"))
}

fn channel_bistochastic() -> Verdict {
    let phi = aklt_channel();
    let i2 = ComplexMatrix::identity(2);
    let unital = phi.apply(&i2).unwrap().max_abs_diff(&i2);
    let tp = phi.completeness().max_abs_diff(&i2);
    let min_eig = phi.is_cptp().min_choi_eigenvalue;
    verdict(
        unital <= 1e-12 && tp <= 1e-12 && min_eig >= -1e-12,
        format!("Φ(I)−I {unital:.1e}, ΣA†A−I {tp:.1e}, min Choi eig {min_eig:.3e}"),
    )
}

fn transfer_spectrum() -> Verdict {
    let report = aklt_channel().transfer_spectrum().unwrap();
    let expected = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
    let res = report
        .eigenvalues
        .iter()
        .zip(expected)
        .map(|(z, e)| (z - c(e)).norm())
        .fold(0.0, f64::max);
    let xi_err = (report.correlation_length - 1.0 / 3f64.ln()).abs();
    verdict(
        report.eigenvalues.len() == 4 && res <= 1e-10 && xi_err <= 1e-9,
        format!("spectrum err {res:.1e} (tol 1e-10), ξ = {:.10} err {xi_err:.1e} (tol 1e-9)", report.correlation_length),
    )
}

fn bond_entanglement() -> Verdict {
    let choi = hidden_expectation().dual_channel().choi();
    let rho_r = partial_trace(&choi.choi, &[2, 4], &[0]).unwrap();
    let rho_b = partial_trace(&choi.choi, &[2, 4], &[1]).unwrap();
    let s_r = von_neumann_entropy(&rho_r).unwrap();
    let s_b = von_neumann_entropy(&rho_b).unwrap();
    let expected = ComplexMatrix::from_real_diagonal(&[0.0, 0.5, 0.5, 0.0]);
    let rb_err = rho_b.max_abs_diff(&expected);
    let ok = (choi.purity - 1.0).abs() <= 1e-10
        && (s_r - 1.0).abs() <= 1e-10
        && (s_b - 1.0).abs() <= 1e-10
        && rb_err <= 1e-12;
    verdict(ok, format!("purity {:.12}, S_R {s_r:.12}, S_B {s_b:.12} bits, ρ_B err {rb_err:.1e}", choi.purity))
}

fn diagonal_formula() -> Verdict {
    let mut worst: f64 = 0.0;
    for p in [0.0, 0.5, 1.0] {
        let rho = ComplexMatrix::from_real_diagonal(&[p, 1.0 - p]);
        let got = e_h_dual(&rho).unwrap();
        // Index 1 = |↑↓⟩, index 2 = |↓↑⟩.
        let cross = (1.0 - 2.0 * p) / 2.0;
        let closed = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.5, cross, 0.0],
            &[0.0, cross, 0.5, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        worst = worst.max(got.max_abs_diff(&closed));
    }
    let (minus, plus) = bell_states();
    let singlet = ComplexMatrix::outer(&minus, &minus);
    let triplet = ComplexMatrix::outer(&plus, &plus);
    let s_err = e_h_dual(&ComplexMatrix::projector(2, 0)).unwrap().max_abs_diff(&singlet);
    let t_err = e_h_dual(&ComplexMatrix::projector(2, 1)).unwrap().max_abs_diff(&triplet);
    verdict(
        worst <= 1e-12 && s_err <= 1e-12 && t_err <= 1e-12,
        format!("closed form {worst:.1e}, singlet {s_err:.1e}, triplet {t_err:.1e} (tol 1e-12)"),
    )
}

fn remark_identities() -> Verdict {
    let mut rng = random::rng(SEED);
    let vv = v_isometry().range_projector();
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let x = random::ginibre(&mut rng, 2, 2);
        r1 = r1.max(e_h(&e_h_dual(&x).unwrap()).unwrap().max_abs_diff(&x));
        let y = random::ginibre(&mut rng, 4, 4);
        r2 = r2.max(e_h_dual(&e_h(&y).unwrap()).unwrap().max_abs_diff(&vv.conjugate(&y)));
    }
    verdict(r1 <= 1e-12 && r2 <= 1e-12, format!("E_H∘E_H* {r1:.1e}, E_H*∘E_H vs VV† {r2:.1e} (tol 1e-12, 100 inputs)"))
}

fn decomposition_equivalence() -> Verdict {
    let mut rng = random::rng(SEED + 1);
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for _ in 0..50 {
            let rho0 = random::density(&mut rng, 2);
            let t = GenerativeTriplet::aklt(rho0).unwrap();
            let xs = (0..n).map(|_| random::ginibre(&mut rng, 2, 2)).collect();
            let ys = (0..n).map(|_| random::ginibre(&mut rng, 3, 3)).collect();
            let w = ObservableWord::new(xs, ys).unwrap();
            worst = worst.max((t.evaluate(&w).unwrap() - t.evaluate_decomposed(&w).unwrap()).norm());
        }
    }
    verdict(worst <= 1e-10, format!("max |nested − decomposed| {worst:.1e} over n=1..4 × 50 words (tol 1e-10)"))
}

fn markov_collapse() -> Verdict {
    let mut rng = random::rng(SEED + 2);
    let phi = aklt_channel();
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for _ in 0..20 {
            let t = GenerativeTriplet::aklt(random::density(&mut rng, 2)).unwrap();
            let xs: Vec<_> = (0..n).map(|_| random::ginibre(&mut rng, 2, 2)).collect();
            let a = t.hidden_marginal(&xs).unwrap();
            let b = t.hidden_marginal_via_channel(&phi, &xs).unwrap();
            worst = worst.max((a - b).norm());
        }
    }
    let t = GenerativeTriplet::aklt_stationary();
    let mut norm_err: f64 = 0.0;
    for n in 1..=6 {
        let total: f64 = t.string_distribution(n).unwrap().iter().map(|(_, p)| p).sum();
        norm_err = norm_err.max((total - 1.0).abs());
    }
    verdict(
        worst <= 1e-10 && norm_err <= 1e-10,
        format!("collapse {worst:.1e} (n ≤ 5), Σ string probabilities − 1 {norm_err:.1e} (n ≤ 6)"),
    )
}

fn equivariance() -> Verdict {
    let eq = spt::equivariance_sweep(50, SEED + 3).unwrap();
    let dual = spt::dual_covariance_sweep(20, SEED + 4).unwrap();
    verdict(eq <= 1e-10 && dual <= 1e-10, format!("equivariance {eq:.1e} (50 trials), dual covariance {dual:.1e} (20 trials)"))
}

fn covariance() -> Verdict {
    let r = spt::covariance_sweep(100, SEED + 5);
    verdict(r <= 1e-10, format!("max residual {r:.1e} over 100 random rotations (tol 1e-10)"))
}

fn spt_index() -> Verdict {
    let report = spt::d2_index().unwrap();
    let comm_err = report
        .commutator_matrix
        .max_abs_diff(&ComplexMatrix::identity(2).scale_real(-1.0));
    let ratio = spt::cocycle_ratio().unwrap();
    let ok = (report.theta + 1.0).abs() <= 1e-10 && comm_err <= 1e-10 && (ratio + 1.0).norm() <= 1e-10;
    verdict(ok, format!("θ = {}, commutator err {comm_err:.1e}, ω ratio = {:.3}{:+.3}i", report.theta, ratio.re, ratio.im))
}

fn oracle_chain() -> Verdict {
    let mut worst_res: f64 = 0.0;
    let mut worst_e: f64 = 0.0;
    for n in 3..=6 {
        let g = oracle_mps::ground_energy_check(n).unwrap();
        worst_res = worst_res.max(g.residual);
        worst_e = worst_e.max((g.energy + 2.0 * n as f64 / 3.0).abs());
    }
    let mut norm_err: f64 = 0.0;
    for n in 2..=10 {
        let s = oracle_mps::build_state(n).unwrap();
        norm_err = norm_err.max((s.norm_sq - oracle_mps::norm_sq_closed_form(n)).abs());
    }
    verdict(
        worst_res < 1e-8 && worst_e < 1e-8 && norm_err <= 1e-10,
        format!("residual {worst_res:.1e}, |E + 2n/3| {worst_e:.1e} (n=3..6), norm² err {norm_err:.1e} (n=2..10)"),
    )
}

fn sampler() -> Verdict {
    let n = 3;
    let count = 100_000;
    let t = GenerativeTriplet::aklt_stationary();
    let run = |seed| -> Vec<Vec<usize>> {
        t.sample_batch(n, count, seed).into_iter().map(|s| s.unwrap().outcomes).collect()
    };
    let a = run(SEED);
    let b = run(SEED);
    let exact: Vec<f64> = t.string_distribution(n).unwrap().into_iter().map(|(_, p)| p).collect();
    let tv = oracle_mps::total_variation(&empirical_distribution(&a, n), &exact).unwrap();
    let text = |v: &[Vec<usize>]| format!("{v:?}");
    let identical = a == b && text(&a) == text(&b);
    verdict(tv < 0.02 && identical, format!("TV {tv:.4} (tol 0.02, 1e5 trajectories), identical reruns: {identical}"))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("isometry identities", isometry_identities),
        ("projection identities", projection_identities),
        ("AKLT channel bi-stochastic", channel_bistochastic),
        ("transfer spectrum and correlation length", transfer_spectrum),
        ("bond Choi state entanglement", bond_entanglement),
        ("diagonal dual formula", diagonal_formula),
        ("hidden expectation remark identities", remark_identities),
        ("nested vs decomposed evaluation", decomposition_equivalence),
        ("Markov collapse and string normalization", markov_collapse),
        ("emission equivariance and dual covariance", equivariance),
        ("tensor rotation covariance", covariance),
        ("D2 projective index", spt_index),
        ("periodic MPS oracle", oracle_chain),
        ("Born-rule sampler", sampler),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name}: {}", i + 1, v.detail);
        if !v.pass {
            failures += 1;
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
