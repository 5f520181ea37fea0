//! Resonance identity and multiplier domination on random frequency points.

use dnls_lab::estimates::{domination_scan, resonance_scan, Family, FrequencySetting, Region};

fn main() {
    for setting in [FrequencySetting::Integer, FrequencySetting::Real] {
        let r = resonance_scan(setting, 100.0, 100_000, 1);
        println!("{setting:?}: resonance max relative residual {:.2e}", r.constant);
        for family in [Family::Plain, Family::Tilde] {
            let sups: Vec<String> = [100.0, 200.0]
                .iter()
                .map(|&bound| format!("{:.3}", domination_scan(family, setting, Region::Box { bound }, 20_000, 1).constant))
                .collect();
            println!("    {family:?}: sup |M|/sum M_j at boxes 100, 200: {}", sups.join(", "));
        }
    }
}
