//! Equilibrium type and node/focus thresholds for the two presets, and a
//! coarse slice of the transition surface q_max*(p_min, p_delta).

use prion_dg::models::{bifurcation_surface, bifurcation_value, classify_equilibrium, BifurcationAxis};
use prion_dg::sensitivity::Protein;

fn main() -> prion_dg::Result<()> {
    for protein in [Protein::Tau, Protein::Amyloid] {
        let p = protein.preset().means();
        let r = classify_equilibrium(&p)?;
        println!(
            "{protein}: E2 = ({:.4}, {:.4}) is a {}, max Re(lambda) = {:.4}",
            r.e2[0],
            r.e2[1],
            r.kind,
            r.eigenvalues.max_real()
        );
        for axis in [BifurcationAxis::QMax, BifurcationAxis::PDelta, BifurcationAxis::PMin] {
            let mut roots: Vec<String> = bifurcation_value(axis, &p).iter().map(|v| format!("{v:.4}")).collect();
            if roots.is_empty() {
                roots.push("none".into());
            }
            println!("  {:8} at {} (mean {:.4})", axis.name(), roots.join(", "), axis.get(&p));
        }
    }

    let p_min = [2.0, 4.0, 6.0];
    let p_delta = [1.0, 2.0, 4.0, 8.0, 16.0];
    let s = bifurcation_surface(&p_min, &p_delta)?;
    println!("\nq_max* by p_min (rows) and p_delta (columns)");
    for (i, pm) in p_min.iter().enumerate() {
        let row: Vec<String> = s[i * p_delta.len()..(i + 1) * p_delta.len()]
            .iter()
            .map(|pt| format!("{:7.3}", pt.q_max_star))
            .collect();
        println!("{pm:5.1} {}", row.join(" "));
    }
    Ok(())
}
