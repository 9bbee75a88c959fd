//! Gamma fits of the healthy/misfolded concentration statistics for both
//! presets, with an ECDF check on fresh draws.

use prion_dg::models::BifurcationAxis;
use prion_dg::sensitivity::{ecdf_compare, Protein};

fn main() -> prion_dg::Result<()> {
    for protein in [Protein::Tau, Protein::Amyloid] {
        let preset = protein.preset();
        println!("{protein}");
        for axis in [BifurcationAxis::PMin, BifurcationAxis::PDelta, BifurcationAxis::QMax] {
            let st = preset.stat(axis);
            let d = st.fit()?;
            let mut passed = 0;
            for seed in 0..200 {
                if ecdf_compare(&d.sample(500, seed), &d)?.pass {
                    passed += 1;
                }
            }
            println!(
                "  {:8} mean {:8.4} var {:9.4} -> a = {:.4}, b = {:.4}; median {:.4}; DKW pass {}/200",
                axis.name(),
                st.mean,
                st.variance,
                d.a,
                d.b,
                d.quantile(0.5)?,
                passed
            );
        }
    }
    Ok(())
}
