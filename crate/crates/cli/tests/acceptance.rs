//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process exits non-zero if
//! any criterion fails.

use std::process::Command;

use qtele_core::channel::kraus_completeness;
use qtele_core::fidelity::{avg_ent_fidelity_mc, avg_fidelity_mc, entanglement_fidelity_of_purification};
use qtele_core::resource::{bell_resource, isotropic, maximally_mixed_resource, random_density};
use qtele_core::twirl::verify_mu_traces;
use qtele_core::{
    alpha_beta, avg_ent_fidelity_closed, avg_fidelity_closed, bell_basis, entanglement_fidelity,
    haar_pure, haar_unitary, hs_mixed, pure_fidelity, purify, simulate_protocol, standard_protocol,
    trace_distance, twirl_integral_mc, verify_trace_identities, ComplexMatrix, DensityMatrix,
    McEstimate, MonteCarlo, PureState, RngState, TeleportChannel, WeylIndex,
};

// Pinned tolerances.
const SAMPLES: usize = 100_000;
const SIGMAS: f64 = 4.0;
/// Slack for estimates whose spread is pure round-off (perfect resource).
const ABS_FLOOR: f64 = 1e-12;
const EXACT_TOL: f64 = 1e-10;
const SPOT_TOL: f64 = 1e-12;
const REPRO_SAMPLES: &str = "20000";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn resources(d: usize) -> Vec<(String, DensityMatrix)> {
    let mut v = vec![
        ("bell".to_string(), bell_resource(d).unwrap()),
        ("maximally_mixed".to_string(), maximally_mixed_resource(d).unwrap()),
        ("isotropic(0.25)".to_string(), isotropic(d, 0.25).unwrap()),
        ("isotropic(0.5)".to_string(), isotropic(d, 0.5).unwrap()),
    ];
    for seed in 1..=3 {
        v.push((format!("random_density({seed})"), random_density(d, seed).unwrap()));
    }
    v
}

fn check_mc(label: &str, est: &McEstimate, prediction: f64, worst_z: &mut f64) -> Result<(), String> {
    if !est.agrees_with(prediction, SIGMAS, ABS_FLOOR) {
        return Err(format!(
            "{label}: mean {} vs {prediction} (stderr {})",
            est.mean, est.stderr
        ));
    }
    let dev = (est.mean - prediction).abs();
    if dev > ABS_FLOOR {
        *worst_z = worst_z.max(dev / est.stderr);
    }
    Ok(())
}

fn spot(label: &str, got: f64, want: f64) -> Result<(), String> {
    if (got - want).abs() <= SPOT_TOL {
        Ok(())
    } else {
        Err(format!("{label}: {got} vs {want}"))
    }
}

fn average_fidelity() -> Outcome {
    let mc = MonteCarlo::default();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for d in [2usize, 3] {
        for (i, (name, chi)) in resources(d).into_iter().enumerate() {
            let ch = TeleportChannel::from_resource(&chi).map_err(|e| e.to_string())?;
            let pred = avg_fidelity_closed(ch.singlet_fraction(), d).unwrap().value;
            let est = avg_fidelity_mc(&ch, SAMPLES, RngState::new(1000 + i as u64, d as u64), &mc)
                .map_err(|e| e.to_string())?;
            check_mc(&format!("d={d} {name}"), &est, pred, &mut worst)?;
            cases += 1;
        }
    }
    let f = |chi: DensityMatrix, d| {
        let ch = TeleportChannel::from_resource(&chi).unwrap();
        avg_fidelity_closed(ch.singlet_fraction(), d).unwrap().value
    };
    spot("d=2 maximally_mixed", f(maximally_mixed_resource(2).unwrap(), 2), 0.5)?;
    spot("d=3 isotropic(0.5)", f(isotropic(3, 0.5).unwrap(), 3), 2.0 / 3.0)?;
    Ok(format!("{cases} cases at N={SAMPLES}, worst |z| = {worst:.2}"))
}

fn average_ent_fidelity() -> Outcome {
    let mc = MonteCarlo::default();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for d in [2usize, 3] {
        for (i, (name, chi)) in resources(d).into_iter().enumerate() {
            let ch = TeleportChannel::from_resource(&chi).map_err(|e| e.to_string())?;
            let pred = avg_ent_fidelity_closed(ch.singlet_fraction(), d).unwrap().value;
            let est =
                avg_ent_fidelity_mc(&ch, SAMPLES, RngState::new(2000 + i as u64, d as u64), &mc)
                    .map_err(|e| e.to_string())?;
            check_mc(&format!("d={d} {name}"), &est, pred, &mut worst)?;
            cases += 1;
        }
    }
    let f = |chi: DensityMatrix, d| {
        let ch = TeleportChannel::from_resource(&chi).unwrap();
        avg_ent_fidelity_closed(ch.singlet_fraction(), d).unwrap().value
    };
    spot("d=2 isotropic(0.5)", f(isotropic(2, 0.5).unwrap(), 2), 0.7)?;
    spot("d=2 maximally_mixed", f(maximally_mixed_resource(2).unwrap(), 2), 0.4)?;
    spot("d=3 isotropic(0.5)", f(isotropic(3, 0.5).unwrap(), 3), 0.6)?;
    Ok(format!("{cases} cases at N={SAMPLES}, worst |z| = {worst:.2}"))
}

fn protocol_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2usize, 3] {
        let proto = standard_protocol(d).map_err(|e| e.to_string())?;
        let mut rng = RngState::new(3000, d as u64).rng();
        for trial in 0..100 {
            let chi = hs_mixed(d * d, &mut rng).unwrap();
            let rho = hs_mixed(d, &mut rng).unwrap();
            let sim = simulate_protocol(&chi, &rho, &proto).map_err(|e| e.to_string())?;
            let ch = TeleportChannel::from_resource(&chi).map_err(|e| e.to_string())?;
            let dist = trace_distance(&sim, &ch.apply(&rho).unwrap()).unwrap();
            if dist > EXACT_TOL {
                return Err(format!("d={d} trial {trial}: trace distance {dist:e}"));
            }
            worst = worst.max(dist);
        }
    }
    Ok(format!("200 trials, max trace distance {worst:.1e}"))
}

fn perfect_resource() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2usize, 3, 4] {
        let ch = TeleportChannel::from_resource(&bell_resource(d).unwrap()).unwrap();
        let mut rng = RngState::new(4000, d as u64).rng();
        for i in 0..50 {
            let rho = hs_mixed(d, &mut rng).unwrap();
            let out = ch.apply(&rho).unwrap();
            let dev = out.matrix().max_abs_diff(rho.matrix()).unwrap();
            let fe = entanglement_fidelity(&rho, &ch).unwrap().value;
            if dev > EXACT_TOL || (fe - 1.0).abs() > EXACT_TOL {
                return Err(format!("d={d} input {i}: |ε(ρ) − ρ| = {dev:e}, F_e = {fe}"));
            }
            worst = worst.max(dev).max((fe - 1.0).abs());
        }
    }
    Ok(format!("150 inputs, max deviation {worst:.1e}"))
}

fn proof_machinery() -> Outcome {
    let mc = MonteCarlo::default();
    let mut worst_z: f64 = 0.0;
    let mut twirls = 0;
    for d in [2usize, 3] {
        let ids = verify_trace_identities(d, RngState::new(5000, d as u64)).map_err(|e| e.to_string())?;
        if !ids.pass {
            return Err(format!("trace identities d={d}: {ids:?}"));
        }
        let mu = verify_mu_traces(d).map_err(|e| e.to_string())?;
        if !mu.pass {
            return Err(format!("μ traces d={d}: {mu:?}"));
        }
        for idx in WeylIndex::all(d).unwrap() {
            let (n, m) = (idx.n() as i64, idx.m() as i64);
            let expected = alpha_beta(d, n, m).unwrap().sum();
            let want = if idx.is_identity() { 1.0 } else { 1.0 / (d * d + 1) as f64 };
            spot(&format!("α+β d={d} ({n},{m})"), expected, want)?;
            let rng = RngState::new(5100 + idx.flat() as u64, d as u64);
            let est = twirl_integral_mc(d, n, m, SAMPLES, rng, &mc).map_err(|e| e.to_string())?;
            check_mc(&format!("twirl d={d} ({n},{m})"), &est, expected, &mut worst_z)?;
            twirls += 1;
        }
    }
    Ok(format!("trace and μ identities d=2,3; {twirls} twirl integrals, worst |z| = {worst_z:.2}"))
}

/// `(V ⊗ I)|φ⟩` for an ancilla unitary `V`.
fn rotate_ancilla(v: &ComplexMatrix, phi: &PureState, d: usize) -> PureState {
    let k = v.rows();
    let amps = phi.amplitudes();
    let mut out = vec![amps[0] * 0.0; amps.len()];
    for a in 0..k {
        for b in 0..k {
            for s in 0..d {
                out[a * d + s] += v[(a, b)] * amps[b * d + s];
            }
        }
    }
    PureState::new(out).unwrap()
}

fn purification_independence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rng = RngState::new(6000, 0).rng();
    for pair in 0..50 {
        let d = 2 + pair % 2;
        let chi = hs_mixed(d * d, &mut rng).unwrap();
        let ch = TeleportChannel::from_resource(&chi).unwrap();
        let rho = hs_mixed(d, &mut rng).unwrap();
        let phi = purify(&rho);
        let base = entanglement_fidelity_of_purification(&phi, &ch).unwrap().value;
        let v = haar_unitary(d, &mut rng).unwrap();
        let rotated = rotate_ancilla(&v, &phi, d);
        let other = entanglement_fidelity_of_purification(&rotated, &ch).unwrap().value;
        // a purification with a larger ancilla: |φ⟩ embedded in C^{d+1} ⊗ C^d
        let mut wide = vec![phi.amplitudes()[0] * 0.0; (d + 1) * d];
        wide[..d * d].copy_from_slice(phi.amplitudes());
        let w = haar_unitary(d + 1, &mut rng).unwrap();
        let wide = rotate_ancilla(&w, &PureState::new(wide).unwrap(), d);
        let wide_fe = entanglement_fidelity_of_purification(&wide, &ch).unwrap().value;
        let dev = (base - other).abs().max((base - wide_fe).abs());
        if dev > EXACT_TOL {
            return Err(format!("pair {pair}: purifications differ by {dev:e}"));
        }
        worst = worst.max(dev);

        let psi = haar_pure(d, &mut rng).unwrap();
        let pure_in = psi.to_density();
        let fe = entanglement_fidelity(&pure_in, &ch).unwrap().value;
        let f = pure_fidelity(&psi, &ch.apply(&pure_in).unwrap()).unwrap().value;
        if (fe - f).abs() > EXACT_TOL {
            return Err(format!("pair {pair}: pure input F_e {fe} vs F {f}"));
        }
        worst = worst.max((fe - f).abs());
    }
    Ok(format!("50 pairs, max deviation {worst:.1e}"))
}

fn cptp_and_basis() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 2..=5usize {
        for seed in 0..5 {
            let ch = TeleportChannel::from_resource(&random_density(d, 7000 + seed).unwrap()).unwrap();
            let sum = kraus_completeness(&ch.kraus()).unwrap();
            let dev = sum.max_abs_diff(&ComplexMatrix::identity(d)).unwrap();
            if dev > EXACT_TOL {
                return Err(format!("Kraus completeness d={d} seed {seed}: {dev:e}"));
            }
            worst = worst.max(dev);
        }
        let gram = bell_basis(d).unwrap().gram();
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(d * d)).unwrap();
        if dev > EXACT_TOL {
            return Err(format!("Bell Gram d={d}: {dev:e}"));
        }
        worst = worst.max(dev);
    }
    Ok(format!("d=2..5, max deviation {worst:.1e}"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qtele"))
        .args(args)
        .env_remove("QTELE_SAMPLES")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn reproducibility() -> Outcome {
    let commands: [&[&str]; 5] = [
        &["verify-avg", "--kind", "fidelity", "--resource", "isotropic(0.5)", "--dim", "3"],
        &["verify-avg", "--kind", "entanglement", "--resource", "random_density(2)"],
        &["verify-avg", "--format", "csv", "--resource", "maximally_mixed"],
        &["verify-proof", "--dim", "3"],
        &["protocol-equiv", "--resource", "random_density(7)", "--dim", "3"],
    ];
    let mut runs = 0;
    for cmd in commands {
        let mut reference: Option<Vec<u8>> = None;
        for threads in ["1", "1", "2", "7"] {
            let mut args = cmd.to_vec();
            args.extend(["--seed", "20261018", "--samples", REPRO_SAMPLES, "--threads", threads]);
            let out = run_cli(&args)?;
            match &reference {
                None => reference = Some(out),
                Some(r) if *r != out => {
                    return Err(format!("{cmd:?}: output differs with --threads {threads}"))
                }
                Some(_) => {}
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs over 5 commands, threads 1/1/2/7, byte-identical"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 average fidelity", average_fidelity),
        ("2 average entanglement fidelity", average_ent_fidelity),
        ("3 protocol/channel equivalence", protocol_equivalence),
        ("4 perfect resource", perfect_resource),
        ("5 proof identities and twirl integrals", proof_machinery),
        ("6 purification independence", purification_independence),
        ("7 Kraus completeness and Bell basis", cptp_and_basis),
        ("8 reproducible reports", reproducibility),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
