//! gnuplot scripts for the CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use lmg_core::SpinJ;

use crate::output::spin;

fn quoted(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', "''"))
}

fn preamble(csv: &Path, title: &str) -> String {
    let image = csv.with_extension("svg");
    let mut s = String::new();
    let _ = writeln!(s, "# {title}");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal svg size 900,600 dynamic");
    let _ = writeln!(s, "set output {}", quoted(&image));
    let _ = writeln!(s, "set key outside right");
    let _ = writeln!(s, "set grid");
    s
}

/// Energy levels against γ, one panel per J. Columns:
/// `j,gamma,level_index,eigenvalue,…`.
pub fn spectrum_script(csv: &Path, js: &[SpinJ]) -> String {
    let data = quoted(csv);
    let mut s = preamble(csv, "energy levels against gamma");
    let _ = writeln!(s, "set multiplot layout 1,{}", js.len());
    for &j in js {
        let jv = spin(j);
        let _ = writeln!(s, "set title 'J = {jv}'");
        let _ = writeln!(s, "set xlabel 'gamma'");
        let _ = writeln!(s, "set ylabel 'E'");
        let _ = writeln!(
            s,
            "plot for [k=0:{}] {data} skip 1 using (($1 == {jv} && $3 == k) ? $2 : 1/0):4 \
             with lines notitle",
            j.dim() - 1
        );
    }
    let _ = writeln!(s, "unset multiplot");
    s
}

/// Gap against γ per J with the `cosh 2γ` bound. Columns:
/// `j,gamma,gap,bound,satisfied`.
pub fn gap_script(csv: &Path, js: &[SpinJ]) -> String {
    let data = quoted(csv);
    let mut s = preamble(csv, "spectral gap against gamma");
    let _ = writeln!(s, "set xlabel 'gamma'");
    let _ = writeln!(s, "set ylabel 'gap'");
    let mut parts: Vec<String> = js
        .iter()
        .map(|&j| {
            let jv = spin(j);
            format!("{data} skip 1 using (($1 == {jv}) ? $2 : 1/0):3 with lines title 'J = {jv}'")
        })
        .collect();
    parts.push("cosh(2*x) with lines lw 2 lc rgb 'forest-green' title 'cosh(2 gamma)'".into());
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}

/// Ground-state amplitudes against `m`. Columns: `m,amplitude`.
pub fn ground_state_script(csv: &Path, j: SpinJ, gamma: f64) -> String {
    let mut s = preamble(csv, "zero-mode amplitudes");
    let _ = writeln!(s, "set title 'J = {}, gamma = {gamma:?}'", spin(j));
    let _ = writeln!(s, "set xlabel 'm'");
    let _ = writeln!(s, "set ylabel 'amplitude'");
    let _ = writeln!(
        s,
        "plot {} skip 1 using 1:2 with impulses lw 3 notitle",
        quoted(csv)
    );
    s
}
